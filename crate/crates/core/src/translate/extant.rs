use crate::corecalc::{BinderType, CExpr, CExprKind, COp2, CType, Storage};
use crate::diag::{Diagnostic, Restriction};
use crate::icaml::{IExpr, IExprKind, IType, Op1, Op2};

/// The restricted translation: only `ref b` cells for base types `b`,
/// reference variables only through `let x = ref e in`, and ordinary `let`
/// only at base types. Within these limits it is the naive translation and
/// preserves meaning; everything else is rejected with a reason code.
///
/// When a program breaks several restrictions the reported one is the most
/// fundamental: `non-base-ref`, then `ref-typed-let`, then `non-base-let`,
/// then `no-rule`; ties go to the first in left-to-right order.
pub fn translate_extant(e: &IExpr) -> Result<CExpr, Diagnostic> {
    let mut t = Extant { violations: Vec::new() };
    let out = t.go(e);
    let worst = t
        .violations
        .into_iter()
        .enumerate()
        .min_by_key(|(i, d)| (d.restriction_reason(), *i))
        .map(|(_, d)| d);
    match (out, worst) {
        (_, Some(d)) => Err(d),
        (Some(c), None) => Ok(c),
        (None, None) => unreachable!("a failed subtree always records a violation"),
    }
}

struct Extant {
    violations: Vec<Diagnostic>,
}

fn base_ctype(t: &IType) -> Option<CType> {
    match t {
        IType::Unit => Some(CType::Unit),
        IType::Base(b) => Some(CType::Base(*b)),
        IType::Ref(_) => None,
    }
}

impl Extant {
    fn reject(&mut self, r: Restriction, e: &IExpr, msg: String) -> Option<CExpr> {
        self.violations.push(Diagnostic::restriction(r, e.span, msg));
        None
    }

    fn go(&mut self, e: &IExpr) -> Option<CExpr> {
        if e.ty().pointee().is_some_and(|t| !t.is_base()) {
            self.violations.push(non_base_ref(e));
        }
        let kind = match &e.kind {
            IExprKind::Var(x) => {
                if e.ty().is_ref() {
                    return self.reject(Restriction::NoRule, e, format!("reference `{}` used as a value", x));
                }
                CExprKind::Var(x.clone())
            }
            IExprKind::Lit(l) => CExprKind::Lit(*l),
            IExprKind::App1(Op1::Deref, arg) => match ref_var(arg) {
                Some(x) => CExprKind::Var(x),
                None => {
                    let _ = self.go(arg);
                    return self.reject(Restriction::NoRule, e, format!("no rule for `{}`", e));
                }
            },
            IExprKind::App1(Op1::Incr, arg) => match ref_var(arg) {
                Some(x) => {
                    let read = CExpr::var(x.clone()).with_ty(CType::INT).with_span(arg.span);
                    let one = CExpr::int(1).with_ty(CType::INT).with_span(e.span);
                    let sum = CExpr::add(read, one).with_ty(CType::INT).with_span(e.span);
                    CExprKind::AssignSpecial(x, Box::new(sum))
                }
                None => {
                    let _ = self.go(arg);
                    return self.reject(Restriction::NoRule, e, format!("no rule for `{}`", e));
                }
            },
            IExprKind::App1(Op1::Ref, arg) => {
                let _ = self.go(arg);
                return self.reject(
                    Restriction::NoRule,
                    e,
                    format!("`{}` is not the right-hand side of `let x = ref e`", e),
                );
            }
            IExprKind::App2(Op2::Assign, lhs, rhs) => {
                let x = ref_var(lhs);
                if x.is_none() {
                    let _ = self.go(lhs);
                    self.violations.push(Diagnostic::restriction(
                        Restriction::NoRule,
                        e.span,
                        format!("no rule for assignment to `{}`", lhs),
                    ));
                }
                let v = self.go(rhs);
                CExprKind::AssignSpecial(x?, Box::new(v?))
            }
            IExprKind::App2(Op2::Add, a, b) => {
                let a = self.go(a);
                let b = self.go(b);
                CExprKind::App2(COp2::Add, Box::new(a?), Box::new(b?))
            }
            IExprKind::Seq(a, b) => {
                let a = self.go(a);
                let b = self.go(b);
                CExprKind::Seq(Box::new(a?), Box::new(b?))
            }
            IExprKind::Let(x, rhs, body) => {
                let (ty, init) = match &rhs.kind {
                    IExprKind::App1(Op1::Ref, init) => {
                        let base = rhs.ty().pointee().is_some_and(IType::is_base);
                        if !base {
                            self.violations.push(non_base_ref(rhs));
                        }
                        let init = self.go(init);
                        (base.then(|| base_ctype(rhs.ty().pointee()?)).flatten(), init)
                    }
                    _ => {
                        if rhs.ty().is_ref() {
                            self.violations.push(Diagnostic::restriction(
                                Restriction::RefTypedLet,
                                e.span,
                                format!("`let {} = {}` makes an alias of a reference", x, rhs),
                            ));
                        } else if !rhs.ty().is_base() {
                            self.violations.push(Diagnostic::restriction(
                                Restriction::NonBaseLet,
                                e.span,
                                format!("`let {}` binds a value of type {}", x, rhs.ty()),
                            ));
                        }
                        let init = self.go(rhs);
                        (rhs.ty().is_base().then(|| base_ctype(rhs.ty())).flatten(), init)
                    }
                };
                let body = self.go(body);
                CExprKind::Decl {
                    binder: BinderType::mutable(ty?),
                    storage: Storage::Scalar,
                    name: x.clone(),
                    init: Some(Box::new(init?)),
                    body: Box::new(body?),
                }
            }
        };
        Some(CExpr {
            kind,
            ty: Some(base_ctype(e.ty())?),
            span: e.span,
        })
    }
}

fn ref_var(e: &IExpr) -> Option<String> {
    match &e.kind {
        IExprKind::Var(x) if e.ty().pointee().is_some_and(IType::is_base) => Some(x.clone()),
        _ => None,
    }
}

fn non_base_ref(e: &IExpr) -> Diagnostic {
    Diagnostic::restriction(
        Restriction::NonBaseRef,
        e.span,
        format!("only references to int or bool are supported, found {}", e.ty()),
    )
}
