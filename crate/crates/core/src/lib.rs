//! Offshoring: mapping a tiny imperative ML calculus (ICaml) onto C.
//!
//! The crate contains
//!
//! * the source calculus [`icaml`] and the two C-like target calculi in
//!   [`corecalc`] (CoreC with assignment as a special form, and CoreCE with
//!   pointers, address-of and const binders), each with a typechecker;
//! * store-based reference interpreters for all three in [`semantics`];
//! * the translations in [`translate`]: the naive one that is wrong under
//!   aliasing, the restricted one that outlaws aliasing, the pointer/array
//!   one, and the final one that tracks the set of mutable variables;
//! * declaration lifting and a C99 emitter ([`emit`]);
//! * a random generator of well-typed programs and a shrinker ([`testgen`])
//!   driving the differential tester in [`difftest`].

pub mod corecalc;
pub mod diag;
pub mod difftest;
pub mod emit;
pub mod icaml;
pub mod semantics;
pub mod syntax;
pub mod testgen;
pub mod translate;

pub use corecalc::{
    typecheck_corec, typecheck_corece, BinderType, CExpr, CExprKind, COp1, COp2, CType, Dialect, Storage,
};
pub use diag::{Diagnostic, DiagnosticKind, Restriction, Span};
pub use icaml::{constant_table, typecheck_closed, typecheck_icaml, BaseType, IExpr, IExprKind, IType, Lit, Op1, Op2};
pub use semantics::{eval_corec, eval_corece, eval_icaml, EvalError, EvalResult, Store, Value};
pub use syntax::parse;
pub use translate::{
    alpha_rename_c, alpha_rename_icaml, lift_declarations, translate, translate_extant, translate_final,
    translate_naive, translate_ptr, PtrVariant, RefPolicy, Strategy, TransContext,
};
