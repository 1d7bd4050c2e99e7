//! CoreC and CoreCE, the modelled subsets of C.
//!
//! Both calculi share [`CExpr`]; the [`Dialect`] passed to the typechecker
//! decides which forms are admissible. CoreC has assignment as a special
//! form `x := e`; CoreCE replaces it with the ordinary constant
//! `← : ptr t -> t -> unit`, adds `*`, `&x`, pointer types and const binders.
//!
//! Declarations come in two storage classes. `Scalar` is the usual
//! `t x = e; body`. `Array1` is the one-element array `t z[1] = {e}; body`
//! used by the pointer translation: a use of `z` decays to a pointer to the
//! element.

use std::collections::HashMap;
use std::fmt;

use crate::diag::{Diagnostic, DiagnosticKind, Span};
use crate::icaml::{BaseType, Lit, Name};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dialect {
    CoreC,
    CoreCE,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::CoreC => "CoreC",
            Dialect::CoreCE => "CoreCE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CType {
    Unit,
    Base(BaseType),
    Ptr(Box<CType>),
}

impl CType {
    pub const INT: CType = CType::Base(BaseType::Int);
    pub const BOOL: CType = CType::Base(BaseType::Bool);

    pub fn ptr(inner: CType) -> CType {
        CType::Ptr(Box::new(inner))
    }

    pub fn pointee(&self) -> Option<&CType> {
        match self {
            CType::Ptr(t) => Some(t),
            _ => None,
        }
    }

    pub fn has_ptr(&self) -> bool {
        matches!(self, CType::Ptr(_))
    }
}

impl fmt::Display for CType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CType::Unit => f.write_str("unit"),
            CType::Base(b) => b.fmt(f),
            CType::Ptr(t) => write!(f, "ptr {}", t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinderType {
    pub base: CType,
    pub is_const: bool,
}

impl BinderType {
    pub fn mutable(base: CType) -> BinderType {
        BinderType { base, is_const: false }
    }

    pub fn constant(base: CType) -> BinderType {
        BinderType { base, is_const: true }
    }
}

impl fmt::Display for BinderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_const {
            f.write_str("const ")?;
        }
        self.base.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Storage {
    Scalar,
    Array1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum COp1 {
    /// `* : ptr t -> t`
    Deref,
    /// `incr : ptr int -> unit`
    Incr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum COp2 {
    Add,
    /// `← : ptr t -> t -> unit`
    Store,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CExpr {
    pub kind: CExprKind,
    pub ty: Option<CType>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CExprKind {
    Var(Name),
    Lit(Lit),
    App1(COp1, Box<CExpr>),
    App2(COp2, Box<CExpr>, Box<CExpr>),
    Seq(Box<CExpr>, Box<CExpr>),
    /// `u x = init; body`, or `u x; body` once lifting has split off the
    /// initializer. For `Array1`, `binder.base` is the element type.
    Decl {
        binder: BinderType,
        storage: Storage,
        name: Name,
        init: Option<Box<CExpr>>,
        body: Box<CExpr>,
    },
    /// CoreC only.
    AssignSpecial(Name, Box<CExpr>),
    /// CoreCE only. Applies to variable names, never to expressions.
    AddrOf(Name),
}

impl CExpr {
    pub fn new(kind: CExprKind) -> CExpr {
        CExpr {
            kind,
            ty: None,
            span: Span::default(),
        }
    }

    pub fn with_ty(mut self, ty: CType) -> CExpr {
        self.ty = Some(ty);
        self
    }

    pub fn with_span(mut self, span: Span) -> CExpr {
        self.span = span;
        self
    }

    pub fn var(x: impl Into<Name>) -> CExpr {
        CExpr::new(CExprKind::Var(x.into()))
    }

    pub fn lit(l: Lit) -> CExpr {
        CExpr::new(CExprKind::Lit(l))
    }

    pub fn int(n: i64) -> CExpr {
        CExpr::lit(Lit::Int(n))
    }

    pub fn add(a: CExpr, b: CExpr) -> CExpr {
        CExpr::new(CExprKind::App2(COp2::Add, Box::new(a), Box::new(b)))
    }

    pub fn store(p: CExpr, v: CExpr) -> CExpr {
        CExpr::new(CExprKind::App2(COp2::Store, Box::new(p), Box::new(v)))
    }

    pub fn deref(p: CExpr) -> CExpr {
        CExpr::new(CExprKind::App1(COp1::Deref, Box::new(p)))
    }

    pub fn incr(p: CExpr) -> CExpr {
        CExpr::new(CExprKind::App1(COp1::Incr, Box::new(p)))
    }

    pub fn seq(a: CExpr, b: CExpr) -> CExpr {
        CExpr::new(CExprKind::Seq(Box::new(a), Box::new(b)))
    }

    pub fn decl(binder: BinderType, x: impl Into<Name>, init: CExpr, body: CExpr) -> CExpr {
        CExpr::new(CExprKind::Decl {
            binder,
            storage: Storage::Scalar,
            name: x.into(),
            init: Some(Box::new(init)),
            body: Box::new(body),
        })
    }

    /// `t z[1] = {init}; body`
    pub fn array1(elem: CType, z: impl Into<Name>, init: CExpr, body: CExpr) -> CExpr {
        CExpr::new(CExprKind::Decl {
            binder: BinderType::mutable(elem),
            storage: Storage::Array1,
            name: z.into(),
            init: Some(Box::new(init)),
            body: Box::new(body),
        })
    }

    pub fn assign(x: impl Into<Name>, e: CExpr) -> CExpr {
        CExpr::new(CExprKind::AssignSpecial(x.into(), Box::new(e)))
    }

    pub fn addr_of(x: impl Into<Name>) -> CExpr {
        CExpr::new(CExprKind::AddrOf(x.into()))
    }

    /// Checked form of [`CExpr::addr_of`]: the operand must be a variable.
    pub fn addr_of_expr(e: CExpr) -> Result<CExpr, Diagnostic> {
        match e.kind {
            CExprKind::Var(x) => Ok(CExpr::addr_of(x).with_span(e.span)),
            _ => Err(Diagnostic::new(
                DiagnosticKind::InvalidForm,
                e.span,
                "address-of requires a variable",
            )),
        }
    }

    /// Panics on an unchecked tree.
    pub fn ty(&self) -> &CType {
        self.ty
            .as_ref()
            .expect("expression is not annotated; run the typechecker first")
    }

    pub fn children(&self) -> Vec<&CExpr> {
        match &self.kind {
            CExprKind::Var(_) | CExprKind::Lit(_) | CExprKind::AddrOf(_) => vec![],
            CExprKind::App1(_, e) | CExprKind::AssignSpecial(_, e) => vec![e],
            CExprKind::App2(_, a, b) | CExprKind::Seq(a, b) => vec![a, b],
            CExprKind::Decl { init, body, .. } => init.iter().map(|b| &**b).chain(std::iter::once(&**body)).collect(),
        }
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a CExpr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(CExpr::size).sum::<usize>()
    }

    /// Number of declarations of any storage class.
    pub fn count_decls(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |e| {
            if matches!(e.kind, CExprKind::Decl { .. }) {
                n += 1
            }
        });
        n
    }

    pub fn binder_names(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let CExprKind::Decl { name, .. } = &e.kind {
                out.push(name.clone());
            }
        });
        out
    }

    pub fn all_names(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.walk(&mut |e| match &e.kind {
            CExprKind::Var(x)
            | CExprKind::AddrOf(x)
            | CExprKind::AssignSpecial(x, _)
            | CExprKind::Decl { name: x, .. } => out.push(x.clone()),
            _ => {}
        });
        out
    }

    /// Copy with annotations and spans erased.
    pub fn strip(&self) -> CExpr {
        let kind = match &self.kind {
            CExprKind::Var(x) => CExprKind::Var(x.clone()),
            CExprKind::Lit(l) => CExprKind::Lit(*l),
            CExprKind::AddrOf(x) => CExprKind::AddrOf(x.clone()),
            CExprKind::App1(op, e) => CExprKind::App1(*op, Box::new(e.strip())),
            CExprKind::App2(op, a, b) => CExprKind::App2(*op, Box::new(a.strip()), Box::new(b.strip())),
            CExprKind::Seq(a, b) => CExprKind::Seq(Box::new(a.strip()), Box::new(b.strip())),
            CExprKind::AssignSpecial(x, e) => CExprKind::AssignSpecial(x.clone(), Box::new(e.strip())),
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
                init: init.as_ref().map(|i| Box::new(i.strip())),
                body: Box::new(body.strip()),
            },
        };
        CExpr::new(kind)
    }
}

// ---------------------------------------------------------------------------
// Typechecking
// ---------------------------------------------------------------------------

pub type CTypeEnv = HashMap<Name, BinderType>;

#[derive(Clone, Debug)]
struct Binding {
    name: Name,
    binder: BinderType,
    storage: Storage,
}

pub fn typecheck_corec(e: &CExpr, env: &CTypeEnv) -> Result<CExpr, Diagnostic> {
    typecheck_c(e, env, Dialect::CoreC)
}

pub fn typecheck_corece(e: &CExpr, env: &CTypeEnv) -> Result<CExpr, Diagnostic> {
    typecheck_c(e, env, Dialect::CoreCE)
}

pub fn typecheck_c(e: &CExpr, env: &CTypeEnv, dialect: Dialect) -> Result<CExpr, Diagnostic> {
    let mut scope: Vec<Binding> = env
        .iter()
        .map(|(name, binder)| Binding {
            name: name.clone(),
            binder: binder.clone(),
            storage: Storage::Scalar,
        })
        .collect();
    scope.sort_by(|a, b| a.name.cmp(&b.name));
    let mut checker = Checker { dialect, scope };
    checker.check(e)
}

struct Checker {
    dialect: Dialect,
    scope: Vec<Binding>,
}

fn mismatch(span: Span, what: String) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::TypeMismatch, span, what)
}

impl Checker {
    fn lookup(&self, x: &str, span: Span) -> Result<&Binding, Diagnostic> {
        self.scope.iter().rev().find(|b| b.name == x).ok_or_else(|| {
            Diagnostic::new(
                DiagnosticKind::UnboundVariable,
                span,
                format!("unbound variable `{}`", x),
            )
        })
    }

    fn require(&self, dialect: Dialect, what: &str, span: Span) -> Result<(), Diagnostic> {
        if self.dialect == dialect {
            Ok(())
        } else {
            Err(Diagnostic::new(
                DiagnosticKind::InvalidForm,
                span,
                format!("{} is not part of {}", what, self.dialect),
            ))
        }
    }

    fn check_type_ok(&self, t: &CType, span: Span) -> Result<(), Diagnostic> {
        if t.has_ptr() {
            self.require(Dialect::CoreCE, "a pointer type", span)?;
        }
        Ok(())
    }

    fn check(&mut self, e: &CExpr) -> Result<CExpr, Diagnostic> {
        let span = e.span;
        let (kind, ty) = match &e.kind {
            CExprKind::Var(x) => {
                let b = self.lookup(x, span)?;
                let ty = match b.storage {
                    Storage::Scalar => b.binder.base.clone(),
                    Storage::Array1 => CType::ptr(b.binder.base.clone()),
                };
                (CExprKind::Var(x.clone()), ty)
            }
            CExprKind::Lit(l) => (
                CExprKind::Lit(*l),
                match l {
                    Lit::Int(_) => CType::INT,
                    Lit::Bool(_) => CType::BOOL,
                    Lit::Unit => CType::Unit,
                },
            ),
            CExprKind::AddrOf(x) => {
                self.require(Dialect::CoreCE, "address-of", span)?;
                let b = self.lookup(x, span)?;
                if b.storage == Storage::Array1 {
                    return Err(Diagnostic::new(
                        DiagnosticKind::InvalidForm,
                        span,
                        format!("cannot take the address of array `{}`", x),
                    ));
                }
                (CExprKind::AddrOf(x.clone()), CType::ptr(b.binder.base.clone()))
            }
            CExprKind::App1(op, arg) => {
                self.require(Dialect::CoreCE, if *op == COp1::Deref { "`*`" } else { "`incr`" }, span)?;
                let arg = self.check(arg)?;
                let ty = match (op, arg.ty()) {
                    (COp1::Deref, CType::Ptr(t)) => (**t).clone(),
                    (COp1::Incr, CType::Ptr(t)) if **t == CType::INT => CType::Unit,
                    (COp1::Deref, t) => return Err(mismatch(arg.span, format!("`*` applied to {}, a non-pointer", t))),
                    (COp1::Incr, t) => {
                        return Err(mismatch(
                            arg.span,
                            format!("`incr` applied to {} where ptr int was expected", t),
                        ))
                    }
                };
                (CExprKind::App1(*op, Box::new(arg)), ty)
            }
            CExprKind::App2(COp2::Add, a, b) => {
                let a = self.check(a)?;
                let b = self.check(b)?;
                for (i, x) in [&a, &b].into_iter().enumerate() {
                    if *x.ty() != CType::INT {
                        return Err(mismatch(
                            x.span,
                            format!("argument {} of `+` has type {} where int was expected", i + 1, x.ty()),
                        ));
                    }
                }
                (CExprKind::App2(COp2::Add, Box::new(a), Box::new(b)), CType::INT)
            }
            CExprKind::App2(COp2::Store, p, v) => {
                self.require(Dialect::CoreCE, "`←`", span)?;
                if let CExprKind::AddrOf(x) = &p.kind {
                    if self.lookup(x, p.span)?.binder.is_const {
                        return Err(Diagnostic::new(
                            DiagnosticKind::ConstViolation,
                            span,
                            format!("store to const variable `{}`", x),
                        ));
                    }
                }
                let p = self.check(p)?;
                let v = self.check(v)?;
                match p.ty() {
                    CType::Ptr(t) if **t == *v.ty() => {}
                    CType::Ptr(t) => {
                        return Err(mismatch(
                            v.span,
                            format!("storing {} through a pointer to {}", v.ty(), t),
                        ))
                    }
                    t => return Err(mismatch(p.span, format!("`←` target has type {}, a non-pointer", t))),
                }
                (CExprKind::App2(COp2::Store, Box::new(p), Box::new(v)), CType::Unit)
            }
            CExprKind::AssignSpecial(x, v) => {
                self.require(Dialect::CoreC, "the assignment form `x := e`", span)?;
                let b = self.lookup(x, span)?.clone();
                if b.binder.is_const {
                    return Err(Diagnostic::new(
                        DiagnosticKind::ConstViolation,
                        span,
                        format!("assignment to const variable `{}`", x),
                    ));
                }
                let v = self.check(v)?;
                if *v.ty() != b.binder.base {
                    return Err(mismatch(
                        v.span,
                        format!("assigning {} to `{}` of type {}", v.ty(), x, b.binder.base),
                    ));
                }
                (CExprKind::AssignSpecial(x.clone(), Box::new(v)), CType::Unit)
            }
            CExprKind::Seq(a, b) => {
                let a = self.check(a)?;
                let b = self.check(b)?;
                let ty = b.ty().clone();
                (CExprKind::Seq(Box::new(a), Box::new(b)), ty)
            }
            CExprKind::Decl {
                binder,
                storage,
                name,
                init,
                body,
            } => {
                self.check_type_ok(&binder.base, span)?;
                if binder.is_const {
                    self.require(Dialect::CoreCE, "a const binder", span)?;
                    if init.is_none() {
                        return Err(Diagnostic::new(
                            DiagnosticKind::InvalidForm,
                            span,
                            format!("const `{}` declared without an initializer", name),
                        ));
                    }
                }
                if *storage == Storage::Array1 {
                    self.require(Dialect::CoreCE, "an array declaration", span)?;
                }
                let init = match init {
                    Some(i) => {
                        let i = self.check(i)?;
                        if *i.ty() != binder.base {
                            return Err(mismatch(
                                i.span,
                                format!("`{}` declared {} but initialized with {}", name, binder.base, i.ty()),
                            ));
                        }
                        Some(Box::new(i))
                    }
                    None => None,
                };
                self.scope.push(Binding {
                    name: name.clone(),
                    binder: binder.clone(),
                    storage: *storage,
                });
                let body = self.check(body);
                self.scope.pop();
                let body = body?;
                let ty = body.ty().clone();
                (
                    CExprKind::Decl {
                        binder: binder.clone(),
                        storage: *storage,
                        name: name.clone(),
                        init,
                        body: Box::new(body),
                    },
                    ty,
                )
            }
        };
        Ok(CExpr {
            kind,
            ty: Some(ty),
            span,
        })
    }
}

// ---------------------------------------------------------------------------
// Printing in the calculus notation
// ---------------------------------------------------------------------------

const P_STMT: u8 = 0;
const P_ASSIGN: u8 = 1;
const P_ADD: u8 = 2;
const P_UNARY: u8 = 3;

impl CExpr {
    fn prec(&self) -> u8 {
        match &self.kind {
            CExprKind::Seq(..) | CExprKind::Decl { .. } => P_STMT,
            CExprKind::AssignSpecial(..) | CExprKind::App2(COp2::Store, ..) => P_ASSIGN,
            CExprKind::App2(COp2::Add, ..) => P_ADD,
            CExprKind::App1(..) | CExprKind::AddrOf(_) => P_UNARY,
            CExprKind::Var(_) | CExprKind::Lit(_) => P_UNARY + 1,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_at(f, P_STMT)?;
            return f.write_str(")");
        }
        match &self.kind {
            CExprKind::Var(x) => f.write_str(x),
            CExprKind::Lit(l) => fmt::Display::fmt(l, f),
            CExprKind::AddrOf(x) => write!(f, "&{}", x),
            CExprKind::App1(COp1::Deref, e) => {
                f.write_str("*")?;
                e.fmt_at(f, P_UNARY)
            }
            CExprKind::App1(COp1::Incr, e) => {
                f.write_str("incr ")?;
                e.fmt_at(f, P_UNARY)
            }
            CExprKind::App2(COp2::Add, a, b) => {
                a.fmt_at(f, P_ADD)?;
                f.write_str(" + ")?;
                b.fmt_at(f, P_UNARY)
            }
            CExprKind::App2(COp2::Store, p, v) => {
                p.fmt_at(f, P_ADD)?;
                f.write_str(" ← ")?;
                v.fmt_at(f, P_ASSIGN)
            }
            CExprKind::AssignSpecial(x, v) => {
                write!(f, "{} := ", x)?;
                v.fmt_at(f, P_ASSIGN)
            }
            CExprKind::Seq(a, b) => {
                a.fmt_at(f, P_ASSIGN)?;
                f.write_str("; ")?;
                b.fmt_at(f, P_STMT)
            }
            CExprKind::Decl {
                binder,
                storage,
                name,
                init,
                body,
            } => {
                match (storage, init) {
                    (Storage::Scalar, Some(i)) => {
                        write!(f, "{} {} = ", binder, name)?;
                        i.fmt_at(f, P_ASSIGN)?;
                    }
                    (Storage::Scalar, None) => write!(f, "{} {}", binder, name)?,
                    (Storage::Array1, Some(i)) => {
                        write!(f, "{} {}[1] = {{", binder, name)?;
                        i.fmt_at(f, P_ASSIGN)?;
                        f.write_str("}")?;
                    }
                    (Storage::Array1, None) => write!(f, "{} {}[1]", binder, name)?,
                }
                f.write_str("; ")?;
                body.fmt_at(f, P_STMT)
            }
        }
    }
}

impl fmt::Display for CExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, P_STMT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_decl(x: &str, init: CExpr, body: CExpr) -> CExpr {
        CExpr::decl(BinderType::mutable(CType::INT), x, init, body)
    }

    fn closed(e: &CExpr, d: Dialect) -> Result<CExpr, Diagnostic> {
        typecheck_c(e, &CTypeEnv::new(), d)
    }

    #[test]
    fn self_assignment_is_well_typed_in_corec() {
        let e = int_decl("x", CExpr::int(0), CExpr::assign("x", CExpr::var("x")));
        assert_eq!(closed(&e, Dialect::CoreC).unwrap().ty(), &CType::Unit);
    }

    #[test]
    fn assignment_type_mismatch() {
        let e = int_decl("x", CExpr::int(0), CExpr::assign("x", CExpr::lit(Lit::Bool(true))));
        assert_eq!(
            closed(&e, Dialect::CoreC).unwrap_err().kind,
            DiagnosticKind::TypeMismatch
        );
    }

    #[test]
    fn declaration_in_expression_position() {
        // (int x = 1+2; x+3)+4
        let inner = int_decl(
            "x",
            CExpr::add(CExpr::int(1), CExpr::int(2)),
            CExpr::add(CExpr::var("x"), CExpr::int(3)),
        );
        let e = CExpr::add(inner, CExpr::int(4));
        assert_eq!(closed(&e, Dialect::CoreC).unwrap().ty(), &CType::INT);
        assert_eq!(e.to_string(), "(int x = 1 + 2; x + 3) + 4");
    }

    #[test]
    fn corece_running_example() {
        // int x = 0; &x ← *&x + 1
        let e = int_decl(
            "x",
            CExpr::int(0),
            CExpr::store(
                CExpr::addr_of("x"),
                CExpr::add(CExpr::deref(CExpr::addr_of("x")), CExpr::int(1)),
            ),
        );
        assert_eq!(closed(&e, Dialect::CoreCE).unwrap().ty(), &CType::Unit);
        assert_eq!(e.to_string(), "int x = 0; &x ← *&x + 1");
        // and it is not CoreC
        assert_eq!(
            closed(&e, Dialect::CoreC).unwrap_err().kind,
            DiagnosticKind::InvalidForm
        );
    }

    #[test]
    fn store_through_const_pointer_is_allowed() {
        // int x = 0; const ptr int y = &x; y ← 41; &x ← *&x + 1
        let e = int_decl(
            "x",
            CExpr::int(0),
            CExpr::decl(
                BinderType::constant(CType::ptr(CType::INT)),
                "y",
                CExpr::addr_of("x"),
                CExpr::seq(
                    CExpr::store(CExpr::var("y"), CExpr::int(41)),
                    CExpr::store(
                        CExpr::addr_of("x"),
                        CExpr::add(CExpr::deref(CExpr::addr_of("x")), CExpr::int(1)),
                    ),
                ),
            ),
        );
        assert_eq!(closed(&e, Dialect::CoreCE).unwrap().ty(), &CType::Unit);
        assert_eq!(e.to_string(), "int x = 0; const ptr int y = &x; y ← 41; &x ← *&x + 1");
    }

    #[test]
    fn store_to_const_variable_is_rejected() {
        let e = CExpr::decl(
            BinderType::constant(CType::INT),
            "c",
            CExpr::int(1),
            CExpr::store(CExpr::addr_of("c"), CExpr::int(2)),
        );
        assert_eq!(
            closed(&e, Dialect::CoreCE).unwrap_err().kind,
            DiagnosticKind::ConstViolation
        );
    }

    #[test]
    fn address_of_requires_variable() {
        let err = CExpr::addr_of_expr(CExpr::add(CExpr::int(1), CExpr::int(2))).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::InvalidForm);
        assert!(err.message.contains("requires a variable"));
        assert!(CExpr::addr_of_expr(CExpr::var("x")).is_ok());
    }

    #[test]
    fn special_assignment_is_not_corece() {
        let e = int_decl("x", CExpr::int(0), CExpr::assign("x", CExpr::int(1)));
        assert_eq!(
            closed(&e, Dialect::CoreCE).unwrap_err().kind,
            DiagnosticKind::InvalidForm
        );
    }

    #[test]
    fn pointer_declarations_are_not_corec() {
        let e = CExpr::decl(
            BinderType::mutable(CType::ptr(CType::INT)),
            "p",
            CExpr::var("q"),
            CExpr::int(0),
        );
        let mut env = CTypeEnv::new();
        env.insert("q".into(), BinderType::mutable(CType::ptr(CType::INT)));
        assert_eq!(typecheck_corec(&e, &env).unwrap_err().kind, DiagnosticKind::InvalidForm);
        assert!(typecheck_corece(&e, &env).is_ok());
    }

    #[test]
    fn array_declarations_decay() {
        // int z[1] = {0}; *z
        let e = CExpr::array1(CType::INT, "z", CExpr::int(0), CExpr::deref(CExpr::var("z")));
        assert_eq!(closed(&e, Dialect::CoreCE).unwrap().ty(), &CType::INT);
        assert_eq!(e.to_string(), "int z[1] = {0}; *z");
        let bad = CExpr::array1(CType::INT, "z", CExpr::int(0), CExpr::addr_of("z"));
        assert_eq!(
            closed(&bad, Dialect::CoreCE).unwrap_err().kind,
            DiagnosticKind::InvalidForm
        );
    }

    #[test]
    fn unbound() {
        assert_eq!(
            closed(&CExpr::var("q"), Dialect::CoreC).unwrap_err().kind,
            DiagnosticKind::UnboundVariable
        );
    }
}
