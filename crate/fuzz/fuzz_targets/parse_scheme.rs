#![no_main]

use libfuzzer_sys::fuzz_target;
use walshsum_core::parse::{parse_scheme, parse_scheme_list};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_scheme_list(s);
    if let Ok(scheme) = parse_scheme(s) {
        assert_eq!(parse_scheme(&scheme.to_string()).unwrap(), scheme);
        // small rows either build or report an error, never panic
        for n in 1..=8 {
            if let Ok(row) = scheme.build_row(n) {
                assert_eq!(row.n(), n);
            }
        }
    }
});
