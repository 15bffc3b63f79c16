#![no_main]

use libfuzzer_sys::fuzz_target;
use qelim::cli::parse_binding;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((name, value)) = parse_binding(text) {
        assert_eq!(parse_binding(&format!("{name}={value}")), Ok((name, value)));
    }
});
