//! Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.

use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use offshore::corecalc::CTypeEnv;
use offshore::difftest::{program_config, DiffConfig};
use offshore::emit::{compile_and_run, compiler_available, emit_c, wrap_main, EmitOptions};
use offshore::semantics::{run_c, run_icaml};
use offshore::testgen::generate;
use offshore::translate::final_type;
use offshore::{
    lift_declarations, translate, typecheck_corece, Dialect, IExpr, IExprKind, IType, Op1, PtrVariant, RefPolicy,
    Restriction, Strategy, Value,
};

const ALIASING: &str = "let x = ref 0 in let y = x in y := 41; !x + 1";
const RUNNING: &str = "let x = ref 0 in x := !x + 1";
const EXTENDED: &str = "let x = ref 0 in let y = x in y := 41; x := !x + 1";
const CORPUS: u64 = 10_000;

type Verdict = Result<String, String>;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
    elapsed: Duration,
}

fn offshore(args: &[&str], stdin: &str) -> Run {
    let start = Instant::now();
    let mut child = Command::new(env!("CARGO_BIN_EXE_offshore"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("offshore binary");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        code: out.status.code().unwrap_or(-1),
        elapsed: start.elapsed(),
    }
}

/// C-ish tokens: identifiers and numbers, `:=`, and single punctuation.
fn tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        if c.is_alphanumeric() || c == '_' {
            let mut w = c.to_string();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                w.push(d);
                chars.next();
            }
            out.push(w);
        } else if c == ':' && chars.peek() == Some(&'=') {
            chars.next();
            out.push(":=".into());
        } else {
            out.push(c.to_string());
        }
    }
    out
}

fn corpus() -> Vec<IExpr> {
    let cfg = DiffConfig {
        count: CORPUS,
        depth: 8,
        alias_bias: 0.3,
        ..DiffConfig::default()
    };
    (0..CORPUS).map(|i| generate(&program_config(&cfg, i))).collect()
}

fn same_value(a: &Value, b: &Value) -> bool {
    a == b || (a.is_loc() && b.is_loc())
}

fn aliasing_counterexample() -> Verdict {
    let source = offshore(&["eval", "-"], ALIASING);
    let naive = offshore(&["eval", "--strategy", "naive", "-"], ALIASING);
    let limit = Duration::from_secs(1);
    if source.stdout != "42\n" || source.code != 0 {
        return Err(format!("source evaluated to {:?} ({})", source.stdout, source.stderr));
    }
    if naive.stdout != "1\n" || naive.code != 0 {
        return Err(format!(
            "naive translation evaluated to {:?} ({})",
            naive.stdout, naive.stderr
        ));
    }
    if source.elapsed > limit || naive.elapsed > limit {
        return Err(format!("too slow: {:?} and {:?}", source.elapsed, naive.elapsed));
    }
    Ok(format!("42 vs 1 in {:?} / {:?}", source.elapsed, naive.elapsed))
}

fn golden_translations() -> Verdict {
    let cases: [(&str, &[&str], &str, &str); 5] = [
        (
            "naive",
            &["translate", "--strategy", "naive", "-"],
            RUNNING,
            "int x = 0; x := x + 1",
        ),
        (
            "ptr-array",
            &["emit", "--fragment", "--strategy", "ptr-array", "-"],
            RUNNING,
            "int z[1] = {0}; int * const x = z; *x = *x + 1;",
        ),
        (
            "ptr-alloca",
            &["emit", "--fragment", "--strategy", "ptr-alloca", "-"],
            RUNNING,
            "int z = 0; int * const x = &z; *x = *x + 1;",
        ),
        (
            "final",
            &["emit", "--fragment", "--strategy", "final", "-"],
            RUNNING,
            "int x = 0; x = x + 1;",
        ),
        (
            "final extended",
            &["emit", "--fragment", "--strategy", "final", "-"],
            EXTENDED,
            "int x = 0; int * const y = &x; *y = 41; x = x + 1;",
        ),
    ];
    for (name, args, src, expected) in cases {
        let r = offshore(args, src);
        if r.code != 0 || tokens(&r.stdout) != tokens(expected) {
            return Err(format!(
                "{}: expected `{}`, got `{}`{}",
                name,
                expected,
                r.stdout.trim(),
                r.stderr
            ));
        }
    }
    Ok("5/5 match".into())
}

fn meaning_preservation() -> Verdict {
    let args = [
        "difftest",
        "--count",
        "10000",
        "--depth",
        "8",
        "--alias-bias",
        "0.3",
        "--strategies",
        "final,ptr-array,ptr-alloca",
    ];
    let r = offshore(&args, "");
    let last = r.stdout.lines().last().unwrap_or("").to_string();
    if r.code != 0 || !last.contains("disagree=0") {
        return Err(format!("exit {}: {}", r.code, r.stdout));
    }
    if r.elapsed > Duration::from_secs(60) {
        return Err(format!("took {:?}", r.elapsed));
    }
    Ok(format!("{} in {:.1?}", last, r.elapsed))
}

fn type_preservation(corpus: &[IExpr]) -> Verdict {
    let mut checked = 0;
    for e in corpus {
        for policy in [RefPolicy::Strict, RefPolicy::Alloca] {
            let Ok(c) = translate(e, Strategy::Final, policy) else {
                continue;
            };
            let typed = typecheck_corece(&c.strip(), &CTypeEnv::new()).map_err(|d| format!("{}\n  on {}", d, e))?;
            let want = final_type(e.ty());
            if *typed.ty() != want {
                return Err(format!("{}: type {} instead of {}", e, typed.ty(), want));
            }
            checked += 1;
        }
    }
    Ok(format!("{} translations typecheck", checked))
}

/// Which restriction a program breaks first, found by scanning the tree
/// for the two patterns that must always be rejected.
fn expected_restriction(e: &IExpr) -> Option<Restriction> {
    let mut non_base_ref = false;
    let mut ref_let = false;
    e.walk(&mut |n| {
        if let IType::Ref(inner) = n.ty() {
            if !matches!(**inner, IType::Base(_)) {
                non_base_ref = true;
            }
        }
        if let IExprKind::Let(_, rhs, _) = &n.kind {
            let allocates = matches!(rhs.kind, IExprKind::App1(Op1::Ref, _));
            if !allocates && matches!(rhs.ty(), IType::Ref(_)) {
                ref_let = true;
            }
        }
    });
    if non_base_ref {
        Some(Restriction::NonBaseRef)
    } else if ref_let {
        Some(Restriction::RefTypedLet)
    } else {
        None
    }
}

fn extant_restrictions(corpus: &[IExpr]) -> Verdict {
    let (mut accepted, mut flagged) = (0, 0);
    for e in corpus {
        let expected = expected_restriction(e);
        match (translate(e, Strategy::Extant, RefPolicy::Strict), expected) {
            (Ok(_), Some(r)) => return Err(format!("accepted despite {}: {}", r.code(), e)),
            (Ok(c), None) => {
                let want = run_icaml(e).map_err(|err| err.to_string())?.value;
                let got = run_c(
                    &lift_declarations(&c, Dialect::CoreC).map_err(|d| d.to_string())?,
                    Dialect::CoreC,
                )
                .map_err(|err| err.to_string())?
                .value;
                if !same_value(&want, &got) {
                    return Err(format!("{}: {} vs {}", e, want, got));
                }
                accepted += 1;
            }
            (Err(d), Some(r)) => {
                if d.restriction_reason() != Some(r) {
                    return Err(format!("expected {} for {}, got {}", r.code(), e, d));
                }
                flagged += 1;
            }
            (Err(d), None) => {
                if matches!(
                    d.restriction_reason(),
                    None | Some(Restriction::NonBaseRef) | Some(Restriction::RefTypedLet)
                ) {
                    return Err(format!("unexpected rejection of {}: {}", e, d));
                }
            }
        }
    }
    Ok(format!(
        "{} accepted and agree, {} rejected for the right reason",
        accepted, flagged
    ))
}

fn lifting(corpus: &[IExpr]) -> Verdict {
    let r = offshore(
        &["emit", "--fragment", "--strategy", "naive", "-"],
        "(let x = 1 + 2 in x + 3) + 4",
    );
    if tokens(&r.stdout) != tokens("int x; (x = 1 + 2, x + 3) + 4;") {
        return Err(format!("example lifted to `{}`{}", r.stdout.trim(), r.stderr));
    }
    let mut checked = 0;
    for e in corpus {
        for s in [Strategy::Final, Strategy::Ptr(PtrVariant::Array1)] {
            let Ok(c) = translate(e, s, RefPolicy::Alloca) else {
                continue;
            };
            let once = lift_declarations(&c, s.dialect()).map_err(|d| d.to_string())?;
            let twice = lift_declarations(&once, s.dialect()).map_err(|d| d.to_string())?;
            if once.strip() != twice.strip() {
                return Err(format!("not idempotent on {}: {} then {}", c, once, twice));
            }
            let before = run_c(&c, s.dialect()).map_err(|err| err.to_string())?.value;
            let after = run_c(&once, s.dialect()).map_err(|err| err.to_string())?.value;
            if !same_value(&before, &after) {
                return Err(format!("{} changed value: {} vs {}", c, before, after));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "example matches; {} trees idempotent and unchanged in value",
        checked
    ))
}

fn end_to_end_c(corpus: &[IExpr]) -> Option<Verdict> {
    if !compiler_available() {
        return None;
    }
    let programs: Vec<&IExpr> = corpus.iter().take(500).collect();
    let check = |e: &IExpr| -> Result<(), String> {
        let want = run_icaml(e).map_err(|err| err.to_string())?.value.to_string();
        let c = translate(e, Strategy::Final, RefPolicy::Alloca).map_err(|d| d.to_string())?;
        let c = lift_declarations(&c, Dialect::CoreCE).map_err(|d| d.to_string())?;
        let unit = emit_c(&c, Dialect::CoreCE, &EmitOptions::default()).map_err(|d| d.to_string())?;
        let source = wrap_main(&unit);
        let got = compile_and_run(&source).map_err(|err| format!("{}\n{}", err, source))?;
        if got.trim_end() != want {
            return Err(format!("{}: interpreter {}, binary {}", e, want, got.trim_end()));
        }
        Ok(())
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = programs.len().div_ceil(workers);
    let failures: Vec<String> = std::thread::scope(|s| {
        let handles: Vec<_> = programs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().filter_map(|e| check(e).err()).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    Some(match failures.first() {
        None => Ok(format!("{} programs compiled and agree", programs.len())),
        Some(f) => Err(format!("{} failures, first: {}", failures.len(), f)),
    })
}

fn variable_economy(corpus: &[IExpr]) -> Verdict {
    let mut checked = 0;
    for e in corpus {
        let (mut lets, mut refs) = (0, 0);
        e.walk(&mut |n| match n.kind {
            IExprKind::Let(..) => lets += 1,
            IExprKind::App1(Op1::Ref, _) => refs += 1,
            _ => {}
        });
        if let Ok(c) = translate(e, Strategy::Final, RefPolicy::Strict) {
            if c.count_decls() != lets {
                return Err(format!("final declares {} for {} lets: {}", c.count_decls(), lets, e));
            }
            checked += 1;
        }
        let c = translate(e, Strategy::Ptr(PtrVariant::Array1), RefPolicy::Strict).map_err(|d| d.to_string())?;
        if c.count_decls() != lets + refs {
            return Err(format!(
                "ptr-array declares {} for {} lets + {} refs: {}",
                c.count_decls(),
                lets,
                refs,
                e
            ));
        }
    }
    Ok(format!("{} final and {} ptr-array translations", checked, corpus.len()))
}

fn main() {
    let corpus = corpus();
    let results: Vec<(&str, Option<Verdict>)> = vec![
        ("1 aliasing counterexample", Some(aliasing_counterexample())),
        ("2 golden translations", Some(golden_translations())),
        ("3 meaning preservation", Some(meaning_preservation())),
        ("4 type preservation", Some(type_preservation(&corpus))),
        ("5 extant restrictions", Some(extant_restrictions(&corpus))),
        ("6 lifting", Some(lifting(&corpus))),
        ("7 end-to-end C", end_to_end_c(&corpus)),
        ("8 variable economy", Some(variable_economy(&corpus))),
    ];
    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Some(Ok(detail)) => println!("PASS {}: {}", name, detail),
            Some(Err(why)) => {
                failed += 1;
                println!("FAIL {}: {}", name, why);
            }
            None => println!("SKIP {}: no C compiler found", name),
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
