#![no_main]

use libfuzzer_sys::fuzz_target;
use mldlab::spectrum::SpectrumRecord;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<SpectrumRecord>(data) {
        let text = serde_json::to_vec(&r).unwrap();
        assert_eq!(serde_json::from_slice::<SpectrumRecord>(&text).unwrap(), r);
    }
});
