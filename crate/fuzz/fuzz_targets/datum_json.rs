#![no_main]

use libfuzzer_sys::fuzz_target;
use mldlab::hyperquot::{self, HyperquotientDatum};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = HyperquotientDatum::from_json(s) {
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(HyperquotientDatum::from_json(&text).unwrap(), d);
        let _ = hyperquot::semi_invariant_check(&d);
    }
});
