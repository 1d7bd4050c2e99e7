use crate::corecalc::{BinderType, CExpr, CExprKind, CType};
use crate::diag::{Diagnostic, DiagnosticKind};
use crate::icaml::{IExpr, IExprKind, Op1, Op2};

use super::naive_type;

/// The original offshoring translation: a reference variable becomes a
/// mutable C variable, `!x` becomes `x` and `x := e` the C assignment.
///
/// This is unsound under aliasing: `let y = x` (with `x` a reference) turns
/// into `int y = x`, a copy.
pub fn translate_naive(e: &IExpr) -> Result<CExpr, Diagnostic> {
    let ty = naive_type(e.ty(), e.span)?;
    let kind = match &e.kind {
        IExprKind::Var(x) => CExprKind::Var(x.clone()),
        IExprKind::Lit(l) => CExprKind::Lit(*l),
        IExprKind::App1(Op1::Deref, arg) => match &arg.kind {
            IExprKind::Var(x) => CExprKind::Var(x.clone()),
            _ => return Err(untranslatable(arg, "`!` applied to something other than a variable")),
        },
        IExprKind::App1(Op1::Incr, arg) => match &arg.kind {
            IExprKind::Var(x) => {
                let read = CExpr::var(x.clone()).with_ty(CType::INT).with_span(arg.span);
                let one = CExpr::int(1).with_ty(CType::INT).with_span(e.span);
                let sum = CExpr::add(read, one).with_ty(CType::INT).with_span(e.span);
                CExprKind::AssignSpecial(x.clone(), Box::new(sum))
            }
            _ => return Err(untranslatable(arg, "`incr` applied to something other than a variable")),
        },
        IExprKind::App1(Op1::Ref, _) => return Err(untranslatable(e, "`ref` outside `let x = ref e in ...`")),
        IExprKind::App2(Op2::Assign, lhs, rhs) => match &lhs.kind {
            IExprKind::Var(x) => CExprKind::AssignSpecial(x.clone(), Box::new(translate_naive(rhs)?)),
            _ => return Err(untranslatable(lhs, "`:=` applied to something other than a variable")),
        },
        IExprKind::App2(Op2::Add, a, b) => CExprKind::App2(
            crate::corecalc::COp2::Add,
            Box::new(translate_naive(a)?),
            Box::new(translate_naive(b)?),
        ),
        IExprKind::Seq(a, b) => CExprKind::Seq(Box::new(translate_naive(a)?), Box::new(translate_naive(b)?)),
        IExprKind::Let(x, rhs, body) => {
            // both let forms declare a mutable variable of the erased type
            let (binder_ty, init) = match &rhs.kind {
                IExprKind::App1(Op1::Ref, init) => (naive_type(rhs.ty(), rhs.span)?, init),
                _ => (naive_type(rhs.ty(), rhs.span)?, rhs),
            };
            CExprKind::Decl {
                binder: BinderType::mutable(binder_ty),
                storage: crate::corecalc::Storage::Scalar,
                name: x.clone(),
                init: Some(Box::new(translate_naive(init)?)),
                body: Box::new(translate_naive(body)?),
            }
        }
    };
    Ok(CExpr {
        kind,
        ty: Some(ty),
        span: e.span,
    })
}

fn untranslatable(e: &IExpr, why: &str) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::Untranslatable, e.span, format!("{}: {}", why, e))
}
