#![no_main]

use libfuzzer_sys::fuzz_target;
use mldlab::regions::Certificate;

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = serde_json::from_slice::<Certificate>(data) {
        let text = serde_json::to_vec(&c).unwrap();
        assert_eq!(serde_json::from_slice::<Certificate>(&text).unwrap(), c);
    }
});
