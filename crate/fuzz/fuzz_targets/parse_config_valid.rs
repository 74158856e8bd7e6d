//! Anything that parses successfully must also survive validation and a
//! cheap evaluation pass: parse errors are the only rejection channel, so
//! accepted configs are fully usable.

#![no_main]

use libfuzzer_sys::fuzz_target;
use msk_core::eval::{inner_modulus, TruncationPolicy};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = msk::config::parse_config(text) else { return };
    // parse_config already ran validation; it must agree
    assert!(msk_core::inner_core::validate_spec(&doc.spec).ok());
    // evaluation may refuse (truncation cap) but must not panic; the
    // modulus is exactly 0 when a configured zero sits at the radius
    let pol = TruncationPolicy { rel_tol: 1e-3, abs_tol: 1e-6, max_terms: 512 };
    if let Ok(m) = inner_modulus(&doc.spec, 0.5, &pol) {
        assert!((0.0..=1.0).contains(&m.modulus));
    }
    if let Some(phi) = &doc.phi {
        let grid = msk_core::inner_core::geometric_grid(1e-6, 2.0, 16);
        let _ = msk_core::inner_core::phi_admissibility_check(phi, &grid);
    }
});
