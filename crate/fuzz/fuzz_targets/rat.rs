#![no_main]

use libfuzzer_sys::fuzz_target;
use mldlab::Rat;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = s.parse::<Rat>() {
        let back: Rat = q.to_string().parse().expect("display must reparse");
        assert_eq!(back, q);
        let f = q.frac();
        assert!(f >= Rat::zero() && f < Rat::one());
    }
});
