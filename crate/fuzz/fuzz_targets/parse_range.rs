#![no_main]

use libfuzzer_sys::fuzz_target;
use walshsum_core::parse::parse_range;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_range(s);
});
