use crate::corecalc::{BinderType, CExpr, CExprKind, COp1, COp2, CType, Storage};
use crate::diag::{Diagnostic, DiagnosticKind};
use crate::icaml::{IExpr, IExprKind, Op1, Op2};

use super::{final_type, RefPolicy, TransContext};

/// The final translation. `let x = ref e in e'` declares an ordinary mutable
/// C variable `x` and adds it to the context's mutable set; inside `e'` each
/// occurrence of `x` stands for the location of the variable and becomes
/// `&x`. Every other `let` becomes a const declaration. `!` is `*`, `:=` is
/// `←` and `incr` takes a pointer.
///
/// The output is annotated: each node carries the translation of the type of
/// its source node.
pub fn translate_final(e: &IExpr, ctx: &mut TransContext) -> Result<CExpr, Diagnostic> {
    let ty = final_type(e.ty());
    let kind = match &e.kind {
        IExprKind::Var(x) => {
            if ctx.mutable_set.contains(x) {
                CExprKind::AddrOf(x.clone())
            } else {
                CExprKind::Var(x.clone())
            }
        }
        IExprKind::Lit(l) => CExprKind::Lit(*l),
        IExprKind::App1(Op1::Ref, init) => match ctx.ref_policy {
            RefPolicy::Strict => {
                return Err(Diagnostic::new(
                    DiagnosticKind::NonBindingRef,
                    e.span,
                    format!("`{}` is not the right-hand side of `let x = ref e`", e),
                ))
            }
            RefPolicy::Alloca => {
                let elem = final_type(init.ty());
                let init = translate_final(init, ctx)?;
                let z = ctx.fresh.fresh("z");
                CExprKind::Decl {
                    binder: BinderType::mutable(elem),
                    storage: Storage::Scalar,
                    name: z.clone(),
                    init: Some(Box::new(init)),
                    body: Box::new(CExpr::addr_of(z).with_ty(ty.clone()).with_span(e.span)),
                }
            }
        },
        IExprKind::App1(op, arg) => {
            let op = match op {
                Op1::Deref => COp1::Deref,
                Op1::Incr => COp1::Incr,
                Op1::Ref => unreachable!(),
            };
            CExprKind::App1(op, Box::new(translate_final(arg, ctx)?))
        }
        IExprKind::App2(op, a, b) => {
            let op = match op {
                Op2::Add => COp2::Add,
                Op2::Assign => COp2::Store,
            };
            let a = translate_final(a, ctx)?;
            CExprKind::App2(op, Box::new(a), Box::new(translate_final(b, ctx)?))
        }
        IExprKind::Seq(a, b) => {
            let a = translate_final(a, ctx)?;
            CExprKind::Seq(Box::new(a), Box::new(translate_final(b, ctx)?))
        }
        IExprKind::Let(x, rhs, body) => {
            let (binder, init, mutable) = match &rhs.kind {
                IExprKind::App1(Op1::Ref, init) => {
                    let t: CType = final_type(init.ty());
                    (BinderType::mutable(t), translate_final(init, ctx)?, true)
                }
                _ => (
                    BinderType::constant(final_type(rhs.ty())),
                    translate_final(rhs, ctx)?,
                    false,
                ),
            };
            let was_mutable = if mutable {
                !ctx.mutable_set.insert(x.clone())
            } else {
                ctx.mutable_set.remove(x)
            };
            let body = translate_final(body, ctx);
            if was_mutable {
                ctx.mutable_set.insert(x.clone());
            } else {
                ctx.mutable_set.remove(x);
            }
            CExprKind::Decl {
                binder,
                storage: Storage::Scalar,
                name: x.clone(),
                init: Some(Box::new(init)),
                body: Box::new(body?),
            }
        }
    };
    Ok(CExpr {
        kind,
        ty: Some(ty),
        span: e.span,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corecalc::{typecheck_corece, CTypeEnv};
    use crate::icaml::typecheck_closed;
    use crate::semantics::{run_c, Value};
    use crate::syntax::parse;
    use crate::Dialect;

    fn fin(src: &str, policy: RefPolicy) -> Result<CExpr, Diagnostic> {
        let e = typecheck_closed(&parse(src).unwrap()).unwrap();
        translate_final(&e, &mut TransContext::for_program(&e, policy))
    }

    #[test]
    fn running_example() {
        let c = fin("let x = ref 0 in x := !x + 1", RefPolicy::Strict).unwrap();
        assert_eq!(c.to_string(), "int x = 0; &x ← *&x + 1");
    }

    #[test]
    fn extended_example() {
        let src = "let x = ref 0 in let y = x in y := 41; x := !x + 1; !x";
        let c = fin(src, RefPolicy::Strict).unwrap();
        assert_eq!(
            c.to_string(),
            "int x = 0; const ptr int y = &x; y ← 41; &x ← *&x + 1; *&x"
        );
        assert_eq!(run_c(&c, Dialect::CoreCE).unwrap().value, Value::Int(42));
    }

    #[test]
    fn annotations_match_the_checker() {
        let c = fin("let x = ref 0 in let y = x in incr y; !x", RefPolicy::Strict).unwrap();
        let checked = typecheck_corece(&c.strip(), &CTypeEnv::new()).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        c.walk(&mut |n| a.push(n.ty().clone()));
        checked.walk(&mut |n| b.push(n.ty().clone()));
        assert_eq!(a, b);
    }

    #[test]
    fn shadowing_removes_from_the_mutable_set() {
        let c = fin("let x = ref 1 in (let x = 5 in x) + !x", RefPolicy::Strict).unwrap();
        assert_eq!(c.to_string(), "int x = 1; (const int x = 5; x) + *&x");
        assert_eq!(run_c(&c, Dialect::CoreCE).unwrap().value, Value::Int(6));
    }

    #[test]
    fn ref_policy() {
        let err = fin("!(ref 3)", RefPolicy::Strict).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::NonBindingRef);
        let c = fin("!(ref 3)", RefPolicy::Alloca).unwrap();
        assert_eq!(c.to_string(), "*(int z = 3; &z)");
        assert_eq!(run_c(&c, Dialect::CoreCE).unwrap().value, Value::Int(3));
    }
}
