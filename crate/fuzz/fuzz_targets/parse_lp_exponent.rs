#![no_main]

use libfuzzer_sys::fuzz_target;
use walshsum_core::LpExponent;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = s.parse::<LpExponent>() {
        assert!(p.is_infinite() || p.to_f64() >= 1.0);
        assert_eq!(p.to_string().parse::<LpExponent>().unwrap(), p);
    }
});
