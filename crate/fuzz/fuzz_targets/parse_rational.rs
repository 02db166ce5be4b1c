#![no_main]

use libfuzzer_sys::fuzz_target;
use walshsum_core::parse::parse_rational;
use walshsum_core::scalar::format_rational;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(s) {
        // the canonical form must parse back to the same value
        assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }
});
