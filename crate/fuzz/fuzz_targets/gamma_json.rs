#![no_main]

use libfuzzer_sys::fuzz_target;
use mldlab::regions::GammaSet;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = GammaSet::from_json(s) {
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(GammaSet::from_json(&text).unwrap(), g);
    }
});
