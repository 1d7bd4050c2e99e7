#![no_main]

use libfuzzer_sys::fuzz_target;
use offshore::{RefPolicy, Strategy};

// Strategy and policy names decode without panicking and print back to
// themselves.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(st) = s.parse::<Strategy>() {
        assert_eq!(st.to_string().parse::<Strategy>().unwrap(), st);
    }
    if let Ok(p) = s.parse::<RefPolicy>() {
        let printed = match p {
            RefPolicy::Strict => "strict",
            RefPolicy::Alloca => "alloca",
        };
        assert_eq!(printed.parse::<RefPolicy>().unwrap(), p);
    }
});
