#![no_main]

use libfuzzer_sys::fuzz_target;
use offshore::difftest::{check_program, Outcome};
use offshore::emit::{emit_c, EmitOptions};
use offshore::{lift_declarations, parse, translate, typecheck_closed, RefPolicy, Strategy};

// Every typed program goes through each translation, lifting and emission
// without panicking, and the sound translations agree with the interpreter.
fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(e) = parse(src).and_then(|e| typecheck_closed(&e)) else {
        return;
    };
    if e.size() > 200 {
        return;
    }
    for s in Strategy::ALL {
        for p in [RefPolicy::Strict, RefPolicy::Alloca] {
            let Ok(c) = translate(&e, s, p) else { continue };
            let lifted = lift_declarations(&c, s.dialect()).expect("translations lift");
            emit_c(&lifted, s.dialect(), &EmitOptions::default()).expect("lifted trees emit");
            if s != Strategy::Naive {
                let o = check_program(&e, s, p);
                assert!(!matches!(o, Outcome::Disagree { .. }), "{} under {}: {:?}", e, s, o);
            }
        }
    }
});
