use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use offshore::difftest::{run_difftest, DiffConfig};
use offshore::emit::{compile_and_run, compiler_command, emit_c, wrap_main, CcError, EmitOptions};
use offshore::semantics::{run_c, run_icaml};
use offshore::{lift_declarations, parse, translate, typecheck_closed, Diagnostic, IExpr, RefPolicy, Strategy};

/// Translate a small imperative ML calculus to C.
#[derive(Debug, Parser)]
#[command(name = "offshore", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Typecheck a program and print its type.
    Check {
        /// Source file, or `-` for standard input.
        file: PathBuf,
    },
    /// Run a program (or its translation) and print the value.
    Eval {
        /// Evaluate the translation instead of the source.
        #[arg(long)]
        strategy: Option<Strategy>,
        #[command(flatten)]
        policy: PolicyArg,
        file: PathBuf,
    },
    /// Print the translated program in calculus notation.
    Translate {
        #[arg(long)]
        strategy: Strategy,
        /// Print the tree before declaration lifting.
        #[arg(long)]
        no_lift: bool,
        #[command(flatten)]
        policy: PolicyArg,
        file: PathBuf,
    },
    /// Print (or write) the translation as a C99 program.
    Emit {
        #[arg(long)]
        strategy: Strategy,
        /// Write to this file instead of standard output.
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// Print `*&x` literally instead of as `x`.
        #[arg(long)]
        keep_staraddr: bool,
        /// Print only the statements, on one line, without `main`.
        #[arg(long)]
        fragment: bool,
        #[command(flatten)]
        policy: PolicyArg,
        file: PathBuf,
    },
    /// Compare interpreters on random programs.
    Difftest {
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// Comma-separated strategy names.
        #[arg(long, value_delimiter = ',', default_value = "final")]
        strategies: Vec<Strategy>,
        #[arg(long, default_value_t = 0.3)]
        alias_bias: f64,
        /// Treatment of `ref` outside `let x = ref e in` by the final
        /// translation.
        #[arg(long, default_value = "alloca")]
        ref_policy: RefPolicy,
        /// Shrunk counterexamples printed per strategy.
        #[arg(long, default_value_t = 3)]
        max_counterexamples: usize,
    },
    /// Emit C, compile it with `$CC` (default `cc`), run it, and compare
    /// with the interpreter.
    CcRun {
        #[arg(long)]
        strategy: Strategy,
        #[command(flatten)]
        policy: PolicyArg,
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
struct PolicyArg {
    /// Treatment of `ref` outside `let x = ref e in` by the final
    /// translation: strict or alloca.
    #[arg(long = "ref-policy", default_value = "strict")]
    ref_policy: RefPolicy,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Diagnostic(Diagnostic),
    #[error("{0}")]
    Divergence(String),
    #[error("{kind}:0:0:{message}")]
    Environment { kind: &'static str, message: String },
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Diagnostic(_) => 1,
            Failure::Divergence(_) => 2,
            Failure::Environment { .. } => 3,
        }
    }

    fn io(path: &Path, e: io::Error) -> Failure {
        Failure::Environment {
            kind: "IoError",
            message: format!("{}: {}", path.display(), e),
        }
    }
}

impl From<Diagnostic> for Failure {
    fn from(d: Diagnostic) -> Failure {
        Failure::Diagnostic(d)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut out = io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            if !matches!(f, Failure::Divergence(_)) {
                eprintln!("{}", f);
            }
            ExitCode::from(f.code())
        }
    }
}

fn read_source(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::io(path, e))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
    }
}

fn load(path: &Path) -> Result<IExpr, Failure> {
    let src = read_source(path)?;
    Ok(typecheck_closed(&parse(&src)?)?)
}

fn write_out(out: &mut impl Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{}", text).map_err(|e| Failure::io(Path::new("<stdout>"), e))
}

fn run(cmd: Command, out: &mut impl Write) -> Result<(), Failure> {
    match cmd {
        Command::Check { file } => {
            let e = load(&file)?;
            write_out(out, &e.ty().to_string())
        }
        Command::Eval { strategy, policy, file } => {
            let e = load(&file)?;
            let value = match strategy {
                None => run_icaml(&e).map(|r| r.value),
                Some(s) => {
                    let c = lift_declarations(&translate(&e, s, policy.ref_policy)?, s.dialect())?;
                    run_c(&c, s.dialect()).map(|r| r.value)
                }
            };
            let value = value.map_err(|err| Failure::Environment {
                kind: "EvalError",
                message: err.to_string(),
            })?;
            write_out(out, &value.to_string())
        }
        Command::Translate {
            strategy,
            no_lift,
            policy,
            file,
        } => {
            let e = load(&file)?;
            let mut c = translate(&e, strategy, policy.ref_policy)?;
            if !no_lift {
                c = lift_declarations(&c, strategy.dialect())?;
            }
            write_out(out, &c.to_string())
        }
        Command::Emit {
            strategy,
            output,
            keep_staraddr,
            fragment,
            policy,
            file,
        } => {
            let e = load(&file)?;
            let c = lift_declarations(&translate(&e, strategy, policy.ref_policy)?, strategy.dialect())?;
            let opts = EmitOptions {
                abbreviate_star_addr: !keep_staraddr,
            };
            let unit = emit_c(&c, strategy.dialect(), &opts)?;
            let text = if fragment {
                unit.fragment() + "\n"
            } else {
                wrap_main(&unit)
            };
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| Failure::io(&path, e)),
                None => write!(out, "{}", text).map_err(|e| Failure::io(Path::new("<stdout>"), e)),
            }
        }
        Command::Difftest {
            count,
            seed,
            depth,
            strategies,
            alias_bias,
            ref_policy,
            max_counterexamples,
        } => {
            if !(0.0..=1.0).contains(&alias_bias) {
                return Err(Failure::Diagnostic(Diagnostic::new(
                    offshore::DiagnosticKind::InvalidForm,
                    Default::default(),
                    format!("--alias-bias must be between 0 and 1, got {}", alias_bias),
                )));
            }
            let cfg = DiffConfig {
                count,
                seed,
                depth: depth.max(1),
                alias_bias,
                strategies,
                ref_policy,
                max_counterexamples,
                ..DiffConfig::default()
            };
            let report = run_difftest(&cfg);
            write_out(out, &report.to_string())?;
            if report.disagree() > 0 {
                return Err(Failure::Divergence(format!("{} disagreements", report.disagree())));
            }
            Ok(())
        }
        Command::CcRun { strategy, policy, file } => {
            let e = load(&file)?;
            let value = run_icaml(&e)
                .map_err(|err| Failure::Environment {
                    kind: "EvalError",
                    message: err.to_string(),
                })?
                .value;
            let expected = if value.is_loc() {
                "<loc>".to_string()
            } else {
                value.to_string()
            };
            let c = lift_declarations(&translate(&e, strategy, policy.ref_policy)?, strategy.dialect())?;
            let unit = emit_c(&c, strategy.dialect(), &EmitOptions::default())?;
            let got = compile_and_run(&wrap_main(&unit)).map_err(|err| match err {
                CcError::NoCompiler(_) => Failure::Environment {
                    kind: "NoCompiler",
                    message: format!("`{}` could not be started; set CC", compiler_command()),
                },
                other => Failure::Environment {
                    kind: "CompilerError",
                    message: other.to_string().replace('\n', " "),
                },
            })?;
            let got = got.trim_end().to_string();
            write_out(out, &format!("interpreter: {}\ncompiled: {}", expected, got))?;
            if got != expected {
                return Err(Failure::Divergence(format!("{} != {}", expected, got)));
            }
            Ok(())
        }
    }
}
