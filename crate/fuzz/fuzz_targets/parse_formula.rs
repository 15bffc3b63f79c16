#![no_main]

use libfuzzer_sys::fuzz_target;
use qelim::{parse, parse_auto, pretty};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok((f, names)) = parse_auto(text) else {
        return;
    };
    let printed = pretty(&f, &names).expect("names match the arity");
    let back = parse(&printed, &names).expect("printed text parses");
    assert_eq!(back, f, "roundtrip changed {printed:?}");
});
