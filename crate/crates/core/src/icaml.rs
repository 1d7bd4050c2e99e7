//! The source calculus: a first-order imperative core of OCaml with
//! reference cells.
//!
//! Trees are Church-style once checked: [`typecheck_icaml`] returns a copy in
//! which every node carries its type. Parsed trees leave `ty` empty.

use std::collections::HashMap;
use std::fmt;

use crate::diag::{Diagnostic, DiagnosticKind, Span};

pub type Name = String;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseType {
    Int,
    Bool,
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseType::Int => f.write_str("int"),
            BaseType::Bool => f.write_str("bool"),
        }
    }
}

/// ICaml types. There are no arrow types: only constants have those.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IType {
    Unit,
    Base(BaseType),
    Ref(Box<IType>),
}

impl IType {
    pub const INT: IType = IType::Base(BaseType::Int);
    pub const BOOL: IType = IType::Base(BaseType::Bool);

    pub fn reference(inner: IType) -> IType {
        IType::Ref(Box::new(inner))
    }

    pub fn is_ref(&self) -> bool {
        matches!(self, IType::Ref(_))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, IType::Base(_))
    }

    /// The cell type of a reference type.
    pub fn pointee(&self) -> Option<&IType> {
        match self {
            IType::Ref(t) => Some(t),
            _ => None,
        }
    }

    /// Number of `ref` constructors wrapping the innermost type.
    pub fn ref_depth(&self) -> usize {
        match self {
            IType::Ref(t) => 1 + t.ref_depth(),
            _ => 0,
        }
    }
}

impl fmt::Display for IType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IType::Unit => f.write_str("unit"),
            IType::Base(b) => b.fmt(f),
            IType::Ref(t) => write!(f, "ref {}", t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lit {
    Int(i64),
    Bool(bool),
    Unit,
}

impl Lit {
    pub fn ty(self) -> IType {
        match self {
            Lit::Int(_) => IType::INT,
            Lit::Bool(_) => IType::BOOL,
            Lit::Unit => IType::Unit,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lit::Int(n) => write!(f, "{}", n),
            Lit::Bool(b) => write!(f, "{}", b),
            Lit::Unit => f.write_str("()"),
        }
    }
}

/// Constants of arity one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op1 {
    Ref,
    Deref,
    Incr,
}

/// Constants of arity two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op2 {
    Add,
    Assign,
}

impl Op1 {
    pub fn name(self) -> &'static str {
        match self {
            Op1::Ref => "ref",
            Op1::Deref => "!",
            Op1::Incr => "incr",
        }
    }
}

impl Op2 {
    pub fn name(self) -> &'static str {
        match self {
            Op2::Add => "+",
            Op2::Assign => ":=",
        }
    }
}

// ---------------------------------------------------------------------------
// Constant signatures
// ---------------------------------------------------------------------------

/// A type in a constant signature; `Var` is the schematic `t` of `ref`, `!`
/// and `:=`, instantiated afresh at every occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schema {
    Unit,
    Base(BaseType),
    Ref(Box<Schema>),
    Var,
}

impl Schema {
    fn reference(s: Schema) -> Schema {
        Schema::Ref(Box::new(s))
    }

    fn instantiate(&self, t: Option<&IType>) -> Option<IType> {
        Some(match self {
            Schema::Unit => IType::Unit,
            Schema::Base(b) => IType::Base(*b),
            Schema::Ref(s) => IType::reference(s.instantiate(t)?),
            Schema::Var => t?.clone(),
        })
    }

    /// One-way matching of an argument type against the schema, binding the
    /// schematic variable on first sight.
    fn matches(&self, ty: &IType, binding: &mut Option<IType>) -> bool {
        match (self, ty) {
            (Schema::Var, _) => match binding {
                Some(b) => b == ty,
                None => {
                    *binding = Some(ty.clone());
                    true
                }
            },
            (Schema::Unit, IType::Unit) => true,
            (Schema::Base(a), IType::Base(b)) => a == b,
            (Schema::Ref(s), IType::Ref(t)) => s.matches(t, binding),
            _ => false,
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schema::Unit => f.write_str("unit"),
            Schema::Base(b) => b.fmt(f),
            Schema::Ref(s) => write!(f, "ref {}", s),
            Schema::Var => f.write_str("t"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstSig {
    pub name: &'static str,
    pub arity: usize,
    pub args: Vec<Schema>,
    pub result: Schema,
    pub schematic: bool,
}

impl fmt::Display for ConstSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : ", self.name)?;
        for a in &self.args {
            write!(f, "{} -> ", a)?;
        }
        self.result.fmt(f)
    }
}

fn sig(name: &'static str, args: Vec<Schema>, result: Schema) -> ConstSig {
    let schematic = args.iter().chain(std::iter::once(&result)).any(mentions_var);
    ConstSig {
        name,
        arity: args.len(),
        args,
        result,
        schematic,
    }
}

fn mentions_var(s: &Schema) -> bool {
    match s {
        Schema::Var => true,
        Schema::Ref(s) => mentions_var(s),
        _ => false,
    }
}

/// The constants of the calculus and their types. Integer literals are one
/// family, listed under the name `int`. `()` and `incr` are the additions
/// beyond the base set.
pub fn constant_table() -> Vec<ConstSig> {
    use Schema::*;
    let int = || Base(BaseType::Int);
    vec![
        sig("int", vec![], int()),
        sig("true", vec![], Base(BaseType::Bool)),
        sig("false", vec![], Base(BaseType::Bool)),
        sig("()", vec![], Unit),
        sig("+", vec![int(), int()], int()),
        sig("ref", vec![Var], Schema::reference(Var)),
        sig("!", vec![Schema::reference(Var)], Var),
        sig(":=", vec![Schema::reference(Var), Var], Unit),
        sig("incr", vec![Schema::reference(int())], Unit),
    ]
}

pub fn lookup_const(name: &str) -> Option<ConstSig> {
    constant_table().into_iter().find(|c| c.name == name)
}

impl Op1 {
    pub fn signature(self) -> ConstSig {
        lookup_const(self.name()).expect("unary constant in table")
    }
}

impl Op2 {
    pub fn signature(self) -> ConstSig {
        lookup_const(self.name()).expect("binary constant in table")
    }
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct IExpr {
    pub kind: IExprKind,
    /// `None` until typechecked.
    pub ty: Option<IType>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IExprKind {
    Var(Name),
    Lit(Lit),
    App1(Op1, Box<IExpr>),
    App2(Op2, Box<IExpr>, Box<IExpr>),
    Seq(Box<IExpr>, Box<IExpr>),
    Let(Name, Box<IExpr>, Box<IExpr>),
}

impl IExpr {
    pub fn new(kind: IExprKind) -> IExpr {
        IExpr {
            kind,
            ty: None,
            span: Span::default(),
        }
    }

    pub fn with_span(mut self, span: Span) -> IExpr {
        self.span = span;
        self
    }

    pub fn with_ty(mut self, ty: IType) -> IExpr {
        self.ty = Some(ty);
        self
    }

    pub fn var(x: impl Into<Name>) -> IExpr {
        IExpr::new(IExprKind::Var(x.into()))
    }

    pub fn int(n: i64) -> IExpr {
        IExpr::new(IExprKind::Lit(Lit::Int(n)))
    }

    pub fn bool(b: bool) -> IExpr {
        IExpr::new(IExprKind::Lit(Lit::Bool(b)))
    }

    pub fn unit() -> IExpr {
        IExpr::new(IExprKind::Lit(Lit::Unit))
    }

    pub fn app1(op: Op1, e: IExpr) -> IExpr {
        IExpr::new(IExprKind::App1(op, Box::new(e)))
    }

    pub fn app2(op: Op2, a: IExpr, b: IExpr) -> IExpr {
        IExpr::new(IExprKind::App2(op, Box::new(a), Box::new(b)))
    }

    pub fn new_ref(e: IExpr) -> IExpr {
        IExpr::app1(Op1::Ref, e)
    }

    pub fn deref(e: IExpr) -> IExpr {
        IExpr::app1(Op1::Deref, e)
    }

    pub fn incr(e: IExpr) -> IExpr {
        IExpr::app1(Op1::Incr, e)
    }

    pub fn add(a: IExpr, b: IExpr) -> IExpr {
        IExpr::app2(Op2::Add, a, b)
    }

    pub fn assign(a: IExpr, b: IExpr) -> IExpr {
        IExpr::app2(Op2::Assign, a, b)
    }

    pub fn seq(a: IExpr, b: IExpr) -> IExpr {
        IExpr::new(IExprKind::Seq(Box::new(a), Box::new(b)))
    }

    pub fn let_(x: impl Into<Name>, rhs: IExpr, body: IExpr) -> IExpr {
        IExpr::new(IExprKind::Let(x.into(), Box::new(rhs), Box::new(body)))
    }

    /// The annotation of a checked tree.
    ///
    /// Panics on an unchecked tree.
    pub fn ty(&self) -> &IType {
        self.ty
            .as_ref()
            .expect("expression is not annotated; run typecheck_icaml first")
    }

    pub fn is_annotated(&self) -> bool {
        self.ty.is_some() && self.children().into_iter().all(IExpr::is_annotated)
    }

    pub fn children(&self) -> Vec<&IExpr> {
        match &self.kind {
            IExprKind::Var(_) | IExprKind::Lit(_) => vec![],
            IExprKind::App1(_, e) => vec![e],
            IExprKind::App2(_, a, b) | IExprKind::Seq(a, b) | IExprKind::Let(_, a, b) => {
                vec![a, b]
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(IExpr::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children().into_iter().map(IExpr::height).max().unwrap_or(0)
    }

    /// Copy with every annotation and span erased.
    pub fn strip(&self) -> IExpr {
        self.map_nodes(&mut |e| {
            e.ty = None;
            e.span = Span::default();
        })
    }

    /// Copy with spans erased but annotations kept.
    pub fn without_spans(&self) -> IExpr {
        self.map_nodes(&mut |e| e.span = Span::default())
    }

    fn map_nodes(&self, f: &mut impl FnMut(&mut IExpr)) -> IExpr {
        let kind = match &self.kind {
            IExprKind::Var(x) => IExprKind::Var(x.clone()),
            IExprKind::Lit(l) => IExprKind::Lit(*l),
            IExprKind::App1(op, e) => IExprKind::App1(*op, Box::new(e.map_nodes(f))),
            IExprKind::App2(op, a, b) => IExprKind::App2(*op, Box::new(a.map_nodes(f)), Box::new(b.map_nodes(f))),
            IExprKind::Seq(a, b) => IExprKind::Seq(Box::new(a.map_nodes(f)), Box::new(b.map_nodes(f))),
            IExprKind::Let(x, a, b) => IExprKind::Let(x.clone(), Box::new(a.map_nodes(f)), Box::new(b.map_nodes(f))),
        };
        let mut out = IExpr {
            kind,
            ty: self.ty.clone(),
            span: self.span,
        };
        f(&mut out);
        out
    }

    /// Visit every node, parents before children.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a IExpr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// Every variable name occurring in the tree, bound or free.
    pub fn all_names(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.walk(&mut |e| match &e.kind {
            IExprKind::Var(x) | IExprKind::Let(x, _, _) => out.push(x.clone()),
            _ => {}
        });
        out
    }

    pub fn free_vars(&self) -> Vec<Name> {
        fn go(e: &IExpr, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
            match &e.kind {
                IExprKind::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                IExprKind::Lit(_) => {}
                IExprKind::App1(_, e) => go(e, bound, out),
                IExprKind::App2(_, a, b) | IExprKind::Seq(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                IExprKind::Let(x, rhs, body) => {
                    go(rhs, bound, out);
                    bound.push(x.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

// ---------------------------------------------------------------------------
// Typechecking
// ---------------------------------------------------------------------------

pub type TypeEnv = HashMap<Name, IType>;

/// Infer and attach the type of every node.
///
/// The calculus is monomorphic and first-order, so every node's type is
/// synthesized bottom-up; schematic constants are instantiated by matching
/// their argument schemas against the argument types.
pub fn typecheck_icaml(e: &IExpr, env: &TypeEnv) -> Result<IExpr, Diagnostic> {
    let mut scope: Vec<(Name, IType)> = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    // make iteration order irrelevant: free variables never shadow each other
    scope.sort();
    check(e, &mut scope)
}

/// [`typecheck_icaml`] for closed programs.
pub fn typecheck_closed(e: &IExpr) -> Result<IExpr, Diagnostic> {
    check(e, &mut Vec::new())
}

fn check(e: &IExpr, scope: &mut Vec<(Name, IType)>) -> Result<IExpr, Diagnostic> {
    let (kind, ty) = match &e.kind {
        IExprKind::Var(x) => match scope.iter().rev().find(|(n, _)| n == x) {
            Some((_, t)) => (IExprKind::Var(x.clone()), t.clone()),
            None => {
                return Err(Diagnostic::new(
                    DiagnosticKind::UnboundVariable,
                    e.span,
                    format!("unbound variable `{}`", x),
                ))
            }
        },
        IExprKind::Lit(l) => (IExprKind::Lit(*l), l.ty()),
        IExprKind::App1(op, arg) => {
            let arg = check(arg, scope)?;
            let ty = apply(&op.signature(), &[&arg])?;
            (IExprKind::App1(*op, Box::new(arg)), ty)
        }
        IExprKind::App2(op, a, b) => {
            let a = check(a, scope)?;
            let b = check(b, scope)?;
            let ty = apply(&op.signature(), &[&a, &b])?;
            (IExprKind::App2(*op, Box::new(a), Box::new(b)), ty)
        }
        IExprKind::Seq(a, b) => {
            let a = check(a, scope)?;
            let b = check(b, scope)?;
            let ty = b.ty().clone();
            (IExprKind::Seq(Box::new(a), Box::new(b)), ty)
        }
        IExprKind::Let(x, rhs, body) => {
            let rhs = check(rhs, scope)?;
            scope.push((x.clone(), rhs.ty().clone()));
            let body = check(body, scope);
            scope.pop();
            let body = body?;
            let ty = body.ty().clone();
            (IExprKind::Let(x.clone(), Box::new(rhs), Box::new(body)), ty)
        }
    };
    Ok(IExpr {
        kind,
        ty: Some(ty),
        span: e.span,
    })
}

fn apply(sig: &ConstSig, args: &[&IExpr]) -> Result<IType, Diagnostic> {
    debug_assert_eq!(sig.arity, args.len());
    let mut binding = None;
    for (i, (schema, arg)) in sig.args.iter().zip(args).enumerate() {
        if !schema.matches(arg.ty(), &mut binding) {
            let expected = schema
                .instantiate(binding.as_ref())
                .map(|t| t.to_string())
                .unwrap_or_else(|| schema.to_string());
            return Err(Diagnostic::new(
                DiagnosticKind::TypeMismatch,
                arg.span,
                format!(
                    "argument {} of `{}` has type {} where {} was expected",
                    i + 1,
                    sig.name,
                    arg.ty(),
                    expected
                ),
            ));
        }
    }
    Ok(sig
        .result
        .instantiate(binding.as_ref())
        .expect("result schema variable bound by an argument"))
}

// ---------------------------------------------------------------------------
// Printing in the surface notation
// ---------------------------------------------------------------------------

// Precedence levels, loosest first.
const P_EXPR: u8 = 0;
const P_ASSIGN: u8 = 1;
const P_ADD: u8 = 2;
const P_UNARY: u8 = 3;

impl IExpr {
    fn prec(&self) -> u8 {
        match &self.kind {
            IExprKind::Let(..) | IExprKind::Seq(..) => P_EXPR,
            IExprKind::App2(Op2::Assign, ..) => P_ASSIGN,
            IExprKind::App2(Op2::Add, ..) => P_ADD,
            IExprKind::App1(..) => P_UNARY,
            IExprKind::Var(_) | IExprKind::Lit(_) => P_UNARY + 1,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_at(f, P_EXPR)?;
            return f.write_str(")");
        }
        match &self.kind {
            IExprKind::Var(x) => f.write_str(x),
            IExprKind::Lit(l) => fmt::Display::fmt(l, f),
            IExprKind::App1(op, e) => {
                match op {
                    Op1::Deref => {
                        f.write_str("!")?;
                        // `!(ref 0)` rather than `!ref 0`
                        if matches!(e.kind, IExprKind::App1(Op1::Ref | Op1::Incr, _)) {
                            return e.fmt_at(f, P_UNARY + 1);
                        }
                    }
                    Op1::Ref => f.write_str("ref ")?,
                    Op1::Incr => f.write_str("incr ")?,
                }
                e.fmt_at(f, P_UNARY)
            }
            IExprKind::App2(Op2::Add, a, b) => {
                a.fmt_at(f, P_ADD)?;
                f.write_str(" + ")?;
                b.fmt_at(f, P_UNARY)
            }
            IExprKind::App2(Op2::Assign, a, b) => {
                a.fmt_at(f, P_ADD)?;
                f.write_str(" := ")?;
                b.fmt_at(f, P_ASSIGN)
            }
            IExprKind::Seq(a, b) => {
                // a `let` on the left would swallow the rest
                if matches!(a.kind, IExprKind::Seq(..) | IExprKind::Let(..)) {
                    f.write_str("(")?;
                    a.fmt_at(f, P_EXPR)?;
                    f.write_str(")")?;
                } else {
                    a.fmt_at(f, P_ASSIGN)?;
                }
                f.write_str("; ")?;
                b.fmt_at(f, P_EXPR)
            }
            IExprKind::Let(x, rhs, body) => {
                write!(f, "let {} = ", x)?;
                rhs.fmt_at(f, P_EXPR)?;
                f.write_str(" in ")?;
                body.fmt_at(f, P_EXPR)
            }
        }
    }
}

impl fmt::Display for IExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, P_EXPR)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_example() -> IExpr {
        // let x = ref 0 in x := !x + 1
        IExpr::let_(
            "x",
            IExpr::new_ref(IExpr::int(0)),
            IExpr::assign(
                IExpr::var("x"),
                IExpr::add(IExpr::deref(IExpr::var("x")), IExpr::int(1)),
            ),
        )
    }

    #[test]
    fn table_lookups() {
        let plus = lookup_const("+").unwrap();
        assert_eq!(plus.arity, 2);
        assert_eq!(plus.args, vec![Schema::Base(BaseType::Int); 2]);
        assert_eq!(plus.result, Schema::Base(BaseType::Int));
        assert!(!plus.schematic);

        let bang = lookup_const("!").unwrap();
        assert_eq!(bang.arity, 1);
        assert!(bang.schematic);
        assert_eq!(bang.to_string(), "! : ref t -> t");

        assert!(lookup_const("unknown").is_none());
    }

    #[test]
    fn arity_is_number_of_arrows() {
        for c in constant_table() {
            assert_eq!(c.arity, c.args.len(), "{}", c.name);
            assert!(c.arity <= 2);
        }
        let names: Vec<_> = constant_table().iter().map(|c| c.name).collect();
        for n in ["int", "true", "false", "+", "ref", "!", ":=", "incr"] {
            assert!(names.contains(&n), "{} missing", n);
        }
        assert!(lookup_const(":=").unwrap().schematic);
        assert!(lookup_const("ref").unwrap().schematic);
        assert!(!lookup_const("incr").unwrap().schematic);
    }

    #[test]
    fn running_example_is_unit() {
        let t = typecheck_closed(&running_example()).unwrap();
        assert_eq!(t.ty(), &IType::Unit);
        match &t.kind {
            IExprKind::Let(_, rhs, _) => assert_eq!(rhs.ty(), &IType::reference(IType::INT)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn sum_is_int() {
        let t = typecheck_closed(&IExpr::add(IExpr::int(1), IExpr::int(2))).unwrap();
        assert_eq!(t.ty(), &IType::INT);
    }

    #[test]
    fn self_assignment_is_ill_typed() {
        let e = IExpr::let_(
            "x",
            IExpr::new_ref(IExpr::int(0)),
            IExpr::assign(IExpr::var("x"), IExpr::var("x")),
        );
        let err = typecheck_closed(&e).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::TypeMismatch);
        assert!(err.message.contains("ref int where int"), "{}", err.message);
    }

    #[test]
    fn unbound_variable() {
        let err = typecheck_closed(&IExpr::deref(IExpr::var("q"))).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::UnboundVariable);
    }

    #[test]
    fn deref_of_non_ref() {
        let err = typecheck_closed(&IExpr::deref(IExpr::int(3))).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::TypeMismatch);
    }

    #[test]
    fn free_variables_from_env() {
        let mut env = TypeEnv::new();
        env.insert("r".into(), IType::reference(IType::BOOL));
        let t = typecheck_icaml(&IExpr::deref(IExpr::var("r")), &env).unwrap();
        assert_eq!(t.ty(), &IType::BOOL);
    }

    #[test]
    fn nested_refs() {
        let e = IExpr::let_(
            "x",
            IExpr::new_ref(IExpr::new_ref(IExpr::int(0))),
            IExpr::deref(IExpr::deref(IExpr::var("x"))),
        );
        let t = typecheck_closed(&e).unwrap();
        assert_eq!(t.ty(), &IType::INT);
        assert!(t.is_annotated());
    }

    #[test]
    fn incr_requires_int_cell() {
        let e = IExpr::incr(IExpr::new_ref(IExpr::bool(true)));
        assert_eq!(typecheck_closed(&e).unwrap_err().kind, DiagnosticKind::TypeMismatch);
    }

    #[test]
    fn printing() {
        assert_eq!(running_example().to_string(), "let x = ref 0 in x := !x + 1");
        let left = IExpr::seq(IExpr::seq(IExpr::int(1), IExpr::int(2)), IExpr::int(3));
        assert_eq!(left.to_string(), "(1; 2); 3");
        let right_add = IExpr::add(IExpr::int(1), IExpr::add(IExpr::int(2), IExpr::int(3)));
        assert_eq!(right_add.to_string(), "1 + (2 + 3)");
        let deref_ref = IExpr::deref(IExpr::new_ref(IExpr::int(0)));
        assert_eq!(deref_ref.to_string(), "!(ref 0)");
    }
}
