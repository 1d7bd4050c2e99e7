#![no_main]

use libfuzzer_sys::fuzz_target;
use offshore::{parse, typecheck_closed};

// Parsing never panics, and anything that parses and typechecks prints back
// to the same tree.
fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(e) = parse(src) else { return };
    let Ok(typed) = typecheck_closed(&e) else { return };
    let again = parse(&typed.to_string()).expect("printed program parses");
    let again = typecheck_closed(&again).expect("printed program typechecks");
    assert_eq!(again.without_spans(), typed.without_spans());
});
