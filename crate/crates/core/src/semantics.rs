//! Environment + store interpreters for ICaml, CoreC and CoreCE.
//!
//! The three interpreters share [`Value`] and [`Store`]. They differ in
//! what a name denotes: in ICaml a name is bound to a value (binding a
//! location creates an alias), in CoreC/CoreCE a declaration allocates a
//! fresh cell and the name denotes that cell (binding copies the value).
//!
//! Evaluation is left to right. Cells are never freed.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::corecalc::{CExpr, CExprKind, COp1, COp2, Dialect, Storage};
use crate::icaml::{IExpr, IExprKind, Lit, Name, Op1, Op2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loc(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Unit,
    Int(i64),
    Bool(bool),
    Loc(Loc),
}

impl Value {
    fn from_lit(l: Lit) -> Value {
        match l {
            Lit::Int(n) => Value::Int(n),
            Lit::Bool(b) => Value::Bool(b),
            Lit::Unit => Value::Unit,
        }
    }

    pub fn is_loc(&self) -> bool {
        matches!(self, Value::Loc(_))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Int(n) => write!(f, "{}", n),
            Value::Bool(b) => write!(f, "{}", b),
            Value::Loc(l) => write!(f, "<loc {}>", l.0),
        }
    }
}

/// Cells indexed by location. A cell is `None` between a split declaration
/// and its first assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Store {
    cells: Vec<Option<Value>>,
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    pub fn next_location(&self) -> usize {
        self.cells.len()
    }

    pub fn alloc(&mut self, v: Option<Value>) -> Loc {
        self.cells.push(v);
        Loc(self.cells.len() - 1)
    }

    pub fn get(&self, l: Loc) -> Option<&Value> {
        self.cells.get(l.0).and_then(Option::as_ref)
    }

    pub fn read(&self, l: Loc) -> Result<Value, EvalError> {
        match self.cells.get(l.0) {
            Some(Some(v)) => Ok(*v),
            Some(None) => Err(EvalError::Uninitialized(l)),
            None => Err(EvalError::Dangling(l)),
        }
    }

    pub fn write(&mut self, l: Loc, v: Value) -> Result<(), EvalError> {
        match self.cells.get_mut(l.0) {
            Some(cell) => {
                *cell = Some(v);
                Ok(())
            }
            None => Err(EvalError::Dangling(l)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Value,
    pub final_store: Store,
    pub steps: u64,
}

/// Failures. None of these is reachable from a well-typed program; they
/// exist to report broken translations rather than panic on them.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(Name),
    #[error("{0}")]
    Stuck(String),
    #[error("read of uninitialized cell {}", .0 .0)]
    Uninitialized(Loc),
    #[error("access to unallocated cell {}", .0 .0)]
    Dangling(Loc),
    #[error("step limit of {0} exceeded")]
    StepLimit(u64),
}

pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

struct Fuel {
    steps: u64,
    limit: u64,
}

impl Fuel {
    fn new(limit: u64) -> Fuel {
        Fuel { steps: 0, limit }
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        if self.steps > self.limit {
            Err(EvalError::StepLimit(self.limit))
        } else {
            Ok(())
        }
    }
}

fn stuck(what: impl Into<String>) -> EvalError {
    EvalError::Stuck(what.into())
}

fn add(a: Value, b: Value) -> Result<Value, EvalError> {
    match (a, b) {
        (Value::Int(a), Value::Int(b)) => Ok(Value::Int(a.wrapping_add(b))),
        _ => Err(stuck(format!("`+` applied to {} and {}", a, b))),
    }
}

fn loc(v: Value, op: &str) -> Result<Loc, EvalError> {
    match v {
        Value::Loc(l) => Ok(l),
        v => Err(stuck(format!("`{}` applied to non-location {}", op, v))),
    }
}

// ---------------------------------------------------------------------------
// ICaml
// ---------------------------------------------------------------------------

pub type ValueEnv = HashMap<Name, Value>;

pub fn eval_icaml(e: &IExpr, env: &ValueEnv, store: Store) -> Result<EvalResult, EvalError> {
    eval_icaml_with_limit(e, env, store, DEFAULT_STEP_LIMIT)
}

pub fn eval_icaml_with_limit(e: &IExpr, env: &ValueEnv, store: Store, limit: u64) -> Result<EvalResult, EvalError> {
    let mut scope: Vec<(Name, Value)> = env.iter().map(|(k, v)| (k.clone(), *v)).collect();
    scope.sort_by(|a, b| a.0.cmp(&b.0));
    let mut m = IMachine {
        store,
        fuel: Fuel::new(limit),
        scope,
    };
    let value = m.eval(e)?;
    Ok(EvalResult {
        value,
        final_store: m.store,
        steps: m.fuel.steps,
    })
}

/// Evaluate a closed program in an empty store.
pub fn run_icaml(e: &IExpr) -> Result<EvalResult, EvalError> {
    eval_icaml(e, &ValueEnv::new(), Store::new())
}

struct IMachine {
    store: Store,
    fuel: Fuel,
    scope: Vec<(Name, Value)>,
}

impl IMachine {
    fn eval(&mut self, e: &IExpr) -> Result<Value, EvalError> {
        self.fuel.tick()?;
        match &e.kind {
            IExprKind::Var(x) => self
                .scope
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|(_, v)| *v)
                .ok_or_else(|| EvalError::Unbound(x.clone())),
            IExprKind::Lit(l) => Ok(Value::from_lit(*l)),
            IExprKind::App1(op, arg) => {
                let v = self.eval(arg)?;
                match op {
                    Op1::Ref => Ok(Value::Loc(self.store.alloc(Some(v)))),
                    Op1::Deref => self.store.read(loc(v, "!")?),
                    Op1::Incr => {
                        let l = loc(v, "incr")?;
                        let n = add(self.store.read(l)?, Value::Int(1))?;
                        self.store.write(l, n)?;
                        Ok(Value::Unit)
                    }
                }
            }
            IExprKind::App2(op, a, b) => {
                let a = self.eval(a)?;
                let b = self.eval(b)?;
                match op {
                    Op2::Add => add(a, b),
                    Op2::Assign => {
                        self.store.write(loc(a, ":=")?, b)?;
                        Ok(Value::Unit)
                    }
                }
            }
            IExprKind::Seq(a, b) => {
                self.eval(a)?;
                self.eval(b)
            }
            IExprKind::Let(x, rhs, body) => {
                let v = self.eval(rhs)?;
                self.scope.push((x.clone(), v));
                let r = self.eval(body);
                self.scope.pop();
                r
            }
        }
    }
}

// ---------------------------------------------------------------------------
// CoreC / CoreCE
// ---------------------------------------------------------------------------

/// Free C variables are bound to existing cells.
pub type CellEnv = HashMap<Name, Loc>;

pub fn eval_corec(e: &CExpr, env: &CellEnv, store: Store) -> Result<EvalResult, EvalError> {
    eval_c(e, env, store, Dialect::CoreC, DEFAULT_STEP_LIMIT)
}

pub fn eval_corece(e: &CExpr, env: &CellEnv, store: Store) -> Result<EvalResult, EvalError> {
    eval_c(e, env, store, Dialect::CoreCE, DEFAULT_STEP_LIMIT)
}

/// Evaluate a closed program of the given dialect in an empty store.
pub fn run_c(e: &CExpr, dialect: Dialect) -> Result<EvalResult, EvalError> {
    eval_c(e, &CellEnv::new(), Store::new(), dialect, DEFAULT_STEP_LIMIT)
}

pub fn eval_c(e: &CExpr, env: &CellEnv, store: Store, dialect: Dialect, limit: u64) -> Result<EvalResult, EvalError> {
    let mut scope: Vec<(Name, Loc, Storage)> = env.iter().map(|(k, l)| (k.clone(), *l, Storage::Scalar)).collect();
    scope.sort_by(|a, b| a.0.cmp(&b.0));
    let mut m = CMachine {
        dialect,
        store,
        fuel: Fuel::new(limit),
        scope,
    };
    let value = m.eval(e)?;
    Ok(EvalResult {
        value,
        final_store: m.store,
        steps: m.fuel.steps,
    })
}

struct CMachine {
    dialect: Dialect,
    store: Store,
    fuel: Fuel,
    scope: Vec<(Name, Loc, Storage)>,
}

impl CMachine {
    fn lookup(&self, x: &str) -> Result<(Loc, Storage), EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _, _)| n == x)
            .map(|(_, l, s)| (*l, *s))
            .ok_or_else(|| EvalError::Unbound(x.to_string()))
    }

    fn require(&self, dialect: Dialect, what: &str) -> Result<(), EvalError> {
        if self.dialect == dialect {
            Ok(())
        } else {
            Err(stuck(format!("{} evaluated under {}", what, self.dialect)))
        }
    }

    fn eval(&mut self, e: &CExpr) -> Result<Value, EvalError> {
        self.fuel.tick()?;
        match &e.kind {
            CExprKind::Var(x) => match self.lookup(x)? {
                (l, Storage::Scalar) => self.store.read(l),
                (l, Storage::Array1) => Ok(Value::Loc(l)),
            },
            CExprKind::Lit(l) => Ok(Value::from_lit(*l)),
            CExprKind::AddrOf(x) => {
                self.require(Dialect::CoreCE, "address-of")?;
                Ok(Value::Loc(self.lookup(x)?.0))
            }
            CExprKind::App1(op, arg) => {
                self.require(Dialect::CoreCE, "pointer operation")?;
                let l = loc(self.eval(arg)?, "*")?;
                match op {
                    COp1::Deref => self.store.read(l),
                    COp1::Incr => {
                        let n = add(self.store.read(l)?, Value::Int(1))?;
                        self.store.write(l, n)?;
                        Ok(Value::Unit)
                    }
                }
            }
            CExprKind::App2(op, a, b) => {
                let a = self.eval(a)?;
                let b = self.eval(b)?;
                match op {
                    COp2::Add => add(a, b),
                    COp2::Store => {
                        self.require(Dialect::CoreCE, "`←`")?;
                        self.store.write(loc(a, "←")?, b)?;
                        Ok(Value::Unit)
                    }
                }
            }
            CExprKind::AssignSpecial(x, v) => {
                self.require(Dialect::CoreC, "`:=`")?;
                let v = self.eval(v)?;
                let (l, _) = self.lookup(x)?;
                self.store.write(l, v)?;
                Ok(Value::Unit)
            }
            CExprKind::Seq(a, b) => {
                self.eval(a)?;
                self.eval(b)
            }
            CExprKind::Decl {
                storage,
                name,
                init,
                body,
                ..
            } => {
                let v = match init {
                    Some(i) => Some(self.eval(i)?),
                    None => None,
                };
                let l = self.store.alloc(v);
                self.scope.push((name.clone(), l, *storage));
                let r = self.eval(body);
                self.scope.pop();
                r
            }
        }
    }
}

/// Rewrite every CoreC assignment `x := e` to the CoreCE store `&x ← e`.
pub fn embed_corec(e: &CExpr) -> CExpr {
    let kind = match &e.kind {
        CExprKind::AssignSpecial(x, v) => CExprKind::App2(
            COp2::Store,
            Box::new(CExpr::addr_of(x.clone()).with_span(e.span)),
            Box::new(embed_corec(v)),
        ),
        CExprKind::Var(_) | CExprKind::Lit(_) | CExprKind::AddrOf(_) => e.kind.clone(),
        CExprKind::App1(op, a) => CExprKind::App1(*op, Box::new(embed_corec(a))),
        CExprKind::App2(op, a, b) => CExprKind::App2(*op, Box::new(embed_corec(a)), Box::new(embed_corec(b))),
        CExprKind::Seq(a, b) => CExprKind::Seq(Box::new(embed_corec(a)), Box::new(embed_corec(b))),
        CExprKind::Decl {
            binder,
            storage,
            name,
            init,
            body,
        } => CExprKind::Decl {
            binder: binder.clone(),
            storage: *storage,
            name: name.clone(),
            init: init.as_ref().map(|i| Box::new(embed_corec(i))),
            body: Box::new(embed_corec(body)),
        },
    };
    CExpr {
        kind,
        ty: None,
        span: e.span,
    }
}
