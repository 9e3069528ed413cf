#![no_main]

use libfuzzer_sys::fuzz_target;
use mldlab::Interval;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(i) = s.parse::<Interval>() {
        let back: Interval = i.to_string().parse().expect("display must reparse");
        assert_eq!(back, i);
    }
});
