//! Replays the fuzz corpus seeds through the checks the fuzz targets make.

use std::path::Path;

use offshore::difftest::{check_program, Outcome};
use offshore::emit::{emit_c, EmitOptions};
use offshore::{lift_declarations, parse, translate, typecheck_closed, RefPolicy, Strategy};

fn seeds(target: &str) -> Vec<String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|f| std::fs::read_to_string(f.unwrap().path()).unwrap())
        .collect();
    out.sort();
    out
}

#[test]
fn parse_seeds_round_trip() {
    let seeds = seeds("parse");
    assert!(!seeds.is_empty());
    for src in seeds {
        let Ok(typed) = parse(&src).and_then(|e| typecheck_closed(&e)) else {
            continue;
        };
        let again = typecheck_closed(&parse(&typed.to_string()).unwrap()).unwrap();
        assert_eq!(again.without_spans(), typed.without_spans(), "{}", src);
    }
}

#[test]
fn pipeline_seeds_survive_every_stage() {
    for src in seeds("pipeline") {
        let Ok(e) = parse(&src).and_then(|e| typecheck_closed(&e)) else {
            continue;
        };
        for s in Strategy::ALL {
            for p in [RefPolicy::Strict, RefPolicy::Alloca] {
                let Ok(c) = translate(&e, s, p) else { continue };
                let lifted = lift_declarations(&c, s.dialect()).unwrap();
                emit_c(&lifted, s.dialect(), &EmitOptions::default()).unwrap();
                if s != Strategy::Naive {
                    let o = check_program(&e, s, p);
                    assert!(!matches!(o, Outcome::Disagree { .. }), "{} under {}: {:?}", src, s, o);
                }
            }
        }
    }
}
