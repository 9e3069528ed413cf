#![no_main]

use libfuzzer_sys::fuzz_target;
use mldlab::quotient::parse_weight_list;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = parse_weight_list(s) {
        let text: Vec<String> = w.iter().map(u64::to_string).collect();
        assert_eq!(parse_weight_list(&text.join(",")).unwrap(), w);
    }
});
