#![no_main]

use libfuzzer_sys::fuzz_target;
use mldlab::hyperquot::MonomialSupport;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = MonomialSupport::from_json(s) {
        assert!(!m.is_empty());
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(MonomialSupport::from_json(&text).unwrap(), m);
    }
});
