//! Arbitrary bytes through the config parser: must never panic, only
//! return structured errors with JSON-pointer paths.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = msk::config::parse_config(text);
    }
});
