use std::collections::HashSet;

use crate::corecalc::{BinderType, CExpr, CExprKind, COp2, CType, Dialect, Storage};
use crate::diag::{Diagnostic, DiagnosticKind, Span};
use crate::icaml::Name;

use super::rename::c_free_vars;

enum Stmt {
    Decl {
        binder: BinderType,
        storage: Storage,
        name: Name,
        init: Option<CExpr>,
        span: Span,
    },
    Expr(CExpr),
}

/// Move declarations out of expression positions so that the result can be
/// printed as a C block.
///
/// Declarations along the statement spine stay where they are, with their
/// initializers. A declaration nested inside an operand is split: an
/// uninitialized declaration goes before the enclosing statement and the
/// initializer becomes an assignment at the original position. So
/// `(int x = 1+2; x+3) + 4` becomes `int x; (x := 1+2; x+3) + 4`.
///
/// Requires distinct binder names that do not clash with free variables
/// (see [`super::alpha_rename_c`]); otherwise fails with `DuplicateName`.
/// The input must be annotated. Lifting is idempotent.
pub fn lift_declarations(e: &CExpr, dialect: Dialect) -> Result<CExpr, Diagnostic> {
    check_unique(e)?;
    let mut out = Vec::new();
    let v = flatten_value(e, &mut out, dialect);
    out.push(Stmt::Expr(v));
    Ok(rebuild(out))
}

/// True when no declaration occurs inside an operand, an initializer or the
/// left side of a sequence.
pub fn is_lifted(e: &CExpr) -> bool {
    fn decl_free(e: &CExpr) -> bool {
        let mut ok = true;
        e.walk(&mut |n| ok &= !matches!(n.kind, CExprKind::Decl { .. }));
        ok
    }
    match &e.kind {
        CExprKind::Decl { init, body, .. } => init.as_deref().is_none_or(decl_free) && is_lifted(body),
        CExprKind::Seq(a, b) => decl_free(a) && is_lifted(b),
        _ => decl_free(e),
    }
}

fn check_unique(e: &CExpr) -> Result<(), Diagnostic> {
    let mut seen: HashSet<Name> = c_free_vars(e).into_iter().collect();
    let mut dup = None;
    e.walk(&mut |n| {
        if let CExprKind::Decl { name, .. } = &n.kind {
            if !seen.insert(name.clone()) && dup.is_none() {
                dup = Some((name.clone(), n.span));
            }
        }
    });
    match dup {
        None => Ok(()),
        Some((x, span)) => Err(Diagnostic::new(
            DiagnosticKind::DuplicateName,
            span,
            format!(
                "`{}` is declared more than once or shadows a free variable; rename binders first",
                x
            ),
        )),
    }
}

fn flatten_value(e: &CExpr, out: &mut Vec<Stmt>, dialect: Dialect) -> CExpr {
    match &e.kind {
        CExprKind::Decl {
            binder,
            storage,
            name,
            init,
            body,
        } => {
            let init = init.as_ref().map(|i| flatten_value(i, out, dialect));
            out.push(Stmt::Decl {
                binder: binder.clone(),
                storage: *storage,
                name: name.clone(),
                init,
                span: e.span,
            });
            flatten_value(body, out, dialect)
        }
        CExprKind::Seq(a, b) => {
            let a = flatten_value(a, out, dialect);
            out.push(Stmt::Expr(a));
            flatten_value(b, out, dialect)
        }
        _ => split(e, out, dialect),
    }
}

fn split(e: &CExpr, out: &mut Vec<Stmt>, dialect: Dialect) -> CExpr {
    let kind = match &e.kind {
        CExprKind::Var(_) | CExprKind::Lit(_) | CExprKind::AddrOf(_) => return e.clone(),
        CExprKind::Decl {
            binder,
            storage,
            name,
            init,
            body,
        } => {
            out.push(Stmt::Decl {
                binder: BinderType::mutable(binder.base.clone()),
                storage: *storage,
                name: name.clone(),
                init: None,
                span: e.span,
            });
            let init = init.as_ref().map(|i| split(i, out, dialect));
            let body = split(body, out, dialect);
            match init {
                None => return body,
                Some(v) => {
                    let set = initialize(name, *storage, &binder.base, v, dialect, e.span);
                    CExprKind::Seq(Box::new(set), Box::new(body))
                }
            }
        }
        CExprKind::Seq(a, b) => {
            let a = split(a, out, dialect);
            CExprKind::Seq(Box::new(a), Box::new(split(b, out, dialect)))
        }
        CExprKind::App1(op, a) => CExprKind::App1(*op, Box::new(split(a, out, dialect))),
        CExprKind::App2(op, a, b) => {
            let a = split(a, out, dialect);
            CExprKind::App2(*op, Box::new(a), Box::new(split(b, out, dialect)))
        }
        CExprKind::AssignSpecial(x, v) => CExprKind::AssignSpecial(x.clone(), Box::new(split(v, out, dialect))),
    };
    CExpr {
        kind,
        ty: e.ty.clone(),
        span: e.span,
    }
}

/// The assignment that replaces a split declaration's initializer.
fn initialize(x: &Name, storage: Storage, t: &CType, v: CExpr, dialect: Dialect, span: Span) -> CExpr {
    let target = match (storage, dialect) {
        (Storage::Scalar, Dialect::CoreC) => return CExpr::assign(x.clone(), v).with_ty(CType::Unit).with_span(span),
        (Storage::Scalar, Dialect::CoreCE) => CExpr::addr_of(x.clone()),
        (Storage::Array1, _) => CExpr::var(x.clone()),
    };
    let target = target.with_ty(CType::ptr(t.clone())).with_span(span);
    CExpr::new(CExprKind::App2(COp2::Store, Box::new(target), Box::new(v)))
        .with_ty(CType::Unit)
        .with_span(span)
}

fn rebuild(stmts: Vec<Stmt>) -> CExpr {
    let mut it = stmts.into_iter().rev();
    let mut acc = match it.next() {
        Some(Stmt::Expr(v)) => v,
        _ => unreachable!("statement list ends with a value"),
    };
    for s in it {
        let ty = acc.ty.clone();
        acc = match s {
            Stmt::Expr(a) => {
                let span = a.span;
                CExpr {
                    kind: CExprKind::Seq(Box::new(a), Box::new(acc)),
                    ty,
                    span,
                }
            }
            Stmt::Decl {
                binder,
                storage,
                name,
                init,
                span,
            } => CExpr {
                kind: CExprKind::Decl {
                    binder,
                    storage,
                    name,
                    init: init.map(Box::new),
                    body: Box::new(acc),
                },
                ty,
                span,
            },
        };
    }
    acc
}
