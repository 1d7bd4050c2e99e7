//! Differential testing: generated programs are run by the ICaml
//! interpreter and, after translation and lifting, by the CoreC/CoreCE
//! interpreter. Any difference in the final value is a bug in a translation
//! (or an expected failure of the naive one).

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corecalc::{typecheck_c, CTypeEnv};
use crate::diag::Diagnostic;
use crate::icaml::{IExpr, IType};
use crate::semantics::{run_c, run_icaml, Value};
use crate::testgen::{contains_alias_let, generate, shrink, GenConfig};
use crate::translate::{lift_declarations, translate, RefPolicy, Strategy};

#[derive(Clone, Debug, PartialEq)]
pub struct DiffConfig {
    pub count: u64,
    pub seed: u64,
    pub depth: u32,
    pub alias_bias: f64,
    pub strategies: Vec<Strategy>,
    pub ref_policy: RefPolicy,
    pub include_nested_refs: bool,
    pub include_incr: bool,
    /// Shrunk counterexamples kept per strategy.
    pub max_counterexamples: usize,
}

impl Default for DiffConfig {
    fn default() -> DiffConfig {
        DiffConfig {
            count: 1000,
            seed: 0,
            depth: 6,
            alias_bias: 0.3,
            strategies: vec![Strategy::Final],
            ref_policy: RefPolicy::Alloca,
            include_nested_refs: true,
            include_incr: true,
            max_counterexamples: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Agree,
    /// The translation refused the program.
    Rejected(Diagnostic),
    /// The translated program is ill-typed, fails to run, or computes a
    /// different value.
    Disagree {
        expected: String,
        got: String,
    },
}

/// Run one program through one strategy.
pub fn check_program(e: &IExpr, strategy: Strategy, policy: RefPolicy) -> Outcome {
    let expected = match run_icaml(e) {
        Ok(r) => r.value,
        Err(err) => {
            return Outcome::Disagree {
                expected: format!("source evaluation failed: {}", err),
                got: String::new(),
            }
        }
    };
    let disagree = |got: String| Outcome::Disagree {
        expected: expected.to_string(),
        got,
    };
    let c = match translate(e, strategy, policy) {
        Ok(c) => c,
        Err(d) => return Outcome::Rejected(d),
    };
    let dialect = strategy.dialect();
    if let Err(d) = typecheck_c(&c.strip(), &CTypeEnv::new(), dialect) {
        return disagree(format!("ill-typed translation: {}", d));
    }
    let lifted = match lift_declarations(&c, dialect) {
        Ok(l) => l,
        Err(d) => return disagree(format!("lifting failed: {}", d)),
    };
    match run_c(&lifted, dialect) {
        Ok(r) if same_value(&expected, &r.value) => Outcome::Agree,
        Ok(r) => disagree(r.value.to_string()),
        Err(err) => disagree(format!("evaluation failed: {}", err)),
    }
}

fn same_value(a: &Value, b: &Value) -> bool {
    match (a, b) {
        // locations of different stores are not comparable
        (Value::Loc(_), Value::Loc(_)) => true,
        _ => a == b,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub seed: u64,
    pub original: IExpr,
    pub shrunk: IExpr,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrategyReport {
    pub strategy: Strategy,
    pub agree: u64,
    pub disagree: u64,
    pub rejected: u64,
    /// Disagreements among programs containing an aliasing `let`.
    pub alias_disagree: u64,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffReport {
    pub programs: u64,
    pub alias_programs: u64,
    pub strategies: Vec<StrategyReport>,
}

impl DiffReport {
    pub fn agree(&self) -> u64 {
        self.strategies.iter().map(|s| s.agree).sum()
    }

    pub fn disagree(&self) -> u64 {
        self.strategies.iter().map(|s| s.disagree).sum()
    }

    pub fn rejected(&self) -> u64 {
        self.strategies.iter().map(|s| s.rejected).sum()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "programs={} with-aliasing={}", self.programs, self.alias_programs)?;
        for s in &self.strategies {
            writeln!(
                f,
                "{}: agree={} disagree={} rejected={} (aliasing disagree={})",
                s.strategy, s.agree, s.disagree, s.rejected, s.alias_disagree
            )?;
            for c in &s.counterexamples {
                writeln!(f, "  counterexample (seed {}): {}", c.seed, c.shrunk)?;
                writeln!(f, "    expected {}, got {}", c.expected, c.got)?;
            }
        }
        write!(
            f,
            "agree={} disagree={} rejected={}",
            self.agree(),
            self.disagree(),
            self.rejected()
        )
    }
}

/// Seed of the `i`-th program of a run (splitmix64 of `seed + i`).
pub fn program_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator configuration used for the `i`-th program.
pub fn program_config(cfg: &DiffConfig, i: u64) -> GenConfig {
    let seed = program_seed(cfg.seed, i);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target_type = match rng.gen_range(0..4u32) {
        0 | 1 => IType::INT,
        2 => IType::BOOL,
        _ => IType::Unit,
    };
    GenConfig {
        max_depth: cfg.depth.max(1),
        target_type,
        alias_bias: cfg.alias_bias,
        seed,
        include_nested_refs: cfg.include_nested_refs,
        include_incr: cfg.include_incr,
    }
}

pub fn run_difftest(cfg: &DiffConfig) -> DiffReport {
    let results: Vec<(u64, IExpr, bool, Vec<Outcome>)> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let gc = program_config(cfg, i);
            let e = generate(&gc);
            let alias = contains_alias_let(&e);
            let outcomes = cfg
                .strategies
                .iter()
                .map(|s| check_program(&e, *s, cfg.ref_policy))
                .collect();
            (gc.seed, e, alias, outcomes)
        })
        .collect();

    let mut reports: Vec<StrategyReport> = cfg
        .strategies
        .iter()
        .map(|s| StrategyReport {
            strategy: *s,
            agree: 0,
            disagree: 0,
            rejected: 0,
            alias_disagree: 0,
            counterexamples: Vec::new(),
        })
        .collect();
    let mut alias_programs = 0;
    for (seed, e, alias, outcomes) in &results {
        alias_programs += u64::from(*alias);
        for (r, o) in reports.iter_mut().zip(outcomes) {
            match o {
                Outcome::Agree => r.agree += 1,
                Outcome::Rejected(_) => r.rejected += 1,
                Outcome::Disagree { expected, got } => {
                    r.disagree += 1;
                    r.alias_disagree += u64::from(*alias);
                    if r.counterexamples.len() < cfg.max_counterexamples {
                        let (strategy, policy) = (r.strategy, cfg.ref_policy);
                        let shrunk = shrink(e, |c| {
                            matches!(check_program(c, strategy, policy), Outcome::Disagree { .. })
                        });
                        let (expected, got) = match check_program(&shrunk, strategy, policy) {
                            Outcome::Disagree { expected, got } => (expected, got),
                            _ => (expected.clone(), got.clone()),
                        };
                        r.counterexamples.push(Counterexample {
                            seed: *seed,
                            original: e.clone(),
                            shrunk,
                            expected,
                            got,
                        });
                    }
                }
            }
        }
    }
    DiffReport {
        programs: cfg.count,
        alias_programs,
        strategies: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::icaml::typecheck_closed;
    use crate::syntax::parse;
    use crate::PtrVariant;

    #[test]
    fn aliasing_example_under_each_strategy() {
        let e = typecheck_closed(&parse("let x = ref 0 in let y = x in y := 41; !x + 1").unwrap()).unwrap();
        assert!(matches!(
            check_program(&e, Strategy::Naive, RefPolicy::Strict),
            Outcome::Disagree { ref expected, ref got } if expected == "42" && got == "1"
        ));
        assert!(matches!(
            check_program(&e, Strategy::Extant, RefPolicy::Strict),
            Outcome::Rejected(_)
        ));
        for s in [
            Strategy::Final,
            Strategy::Ptr(PtrVariant::Array1),
            Strategy::Ptr(PtrVariant::Alloca),
        ] {
            assert_eq!(check_program(&e, s, RefPolicy::Strict), Outcome::Agree);
        }
    }

    #[test]
    fn small_run_is_deterministic_and_clean() {
        let cfg = DiffConfig {
            count: 200,
            seed: 5,
            strategies: vec![Strategy::Final, Strategy::Ptr(PtrVariant::Array1)],
            ..DiffConfig::default()
        };
        let a = run_difftest(&cfg);
        assert_eq!(a.disagree(), 0, "{}", a);
        assert_eq!(a.agree() + a.rejected(), 400);
        assert_eq!(a, run_difftest(&cfg));
    }

    #[test]
    fn naive_counterexamples_are_shrunk() {
        let cfg = DiffConfig {
            count: 4000,
            seed: 1,
            depth: 5,
            alias_bias: 0.8,
            include_nested_refs: false,
            strategies: vec![Strategy::Naive],
            max_counterexamples: 1,
            ..DiffConfig::default()
        };
        let r = run_difftest(&cfg);
        let s = &r.strategies[0];
        assert!(s.disagree > 0);
        let c = &s.counterexamples[0];
        assert!(c.shrunk.size() <= c.original.size());
        assert!(matches!(
            check_program(&c.shrunk, Strategy::Naive, RefPolicy::Strict),
            Outcome::Disagree { .. }
        ));
    }
}
