use crate::corecalc::{BinderType, CExpr, CExprKind, COp1, COp2, Storage};
use crate::icaml::{IExpr, IExprKind, Op1, Op2};

use super::{final_type, FreshSupply, PtrVariant};

/// The type-correct pointer translation: every `ref e` allocates fresh
/// storage `z` and evaluates to a pointer to it, `!` is `*`, `:=` is `←`, and
/// a `let` of reference type becomes a const pointer binder. Total on
/// well-typed input.
///
/// `Array1` allocates `t z[1] = {e}` and yields `z`; `Alloca` allocates
/// `t z = e` and yields `&z`.
pub fn translate_ptr(e: &IExpr, variant: PtrVariant) -> CExpr {
    translate_ptr_with(e, variant, &mut FreshSupply::avoiding(e.all_names()))
}

pub fn translate_ptr_with(e: &IExpr, variant: PtrVariant, fresh: &mut FreshSupply) -> CExpr {
    let ty = final_type(e.ty());
    let kind = match &e.kind {
        IExprKind::Var(x) => CExprKind::Var(x.clone()),
        IExprKind::Lit(l) => CExprKind::Lit(*l),
        IExprKind::App1(Op1::Ref, init) => {
            let elem = final_type(init.ty());
            let init = translate_ptr_with(init, variant, fresh);
            let z = fresh.fresh("z");
            let (storage, body) = match variant {
                PtrVariant::Array1 => (Storage::Array1, CExprKind::Var(z.clone())),
                PtrVariant::Alloca => (Storage::Scalar, CExprKind::AddrOf(z.clone())),
            };
            CExprKind::Decl {
                binder: BinderType::mutable(elem),
                storage,
                name: z,
                init: Some(Box::new(init)),
                body: Box::new(CExpr {
                    kind: body,
                    ty: Some(ty.clone()),
                    span: e.span,
                }),
            }
        }
        IExprKind::App1(op, arg) => {
            let op = match op {
                Op1::Deref => COp1::Deref,
                Op1::Incr => COp1::Incr,
                Op1::Ref => unreachable!(),
            };
            CExprKind::App1(op, Box::new(translate_ptr_with(arg, variant, fresh)))
        }
        IExprKind::App2(op, a, b) => {
            let op = match op {
                Op2::Add => COp2::Add,
                Op2::Assign => COp2::Store,
            };
            let a = translate_ptr_with(a, variant, fresh);
            CExprKind::App2(op, Box::new(a), Box::new(translate_ptr_with(b, variant, fresh)))
        }
        IExprKind::Seq(a, b) => {
            let a = translate_ptr_with(a, variant, fresh);
            CExprKind::Seq(Box::new(a), Box::new(translate_ptr_with(b, variant, fresh)))
        }
        IExprKind::Let(x, rhs, body) => {
            let t = final_type(rhs.ty());
            let binder = if rhs.ty().is_ref() {
                BinderType::constant(t)
            } else {
                BinderType::mutable(t)
            };
            let init = translate_ptr_with(rhs, variant, fresh);
            CExprKind::Decl {
                binder,
                storage: Storage::Scalar,
                name: x.clone(),
                init: Some(Box::new(init)),
                body: Box::new(translate_ptr_with(body, variant, fresh)),
            }
        }
    };
    CExpr {
        kind,
        ty: Some(ty),
        span: e.span,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corecalc::{typecheck_corece, CTypeEnv};
    use crate::icaml::typecheck_closed;
    use crate::semantics::{run_c, Value};
    use crate::syntax::parse;
    use crate::translate::lift_declarations;
    use crate::Dialect;

    fn ptr(src: &str, v: PtrVariant) -> CExpr {
        translate_ptr(&typecheck_closed(&parse(src).unwrap()).unwrap(), v)
    }

    #[test]
    fn running_example_both_variants() {
        let src = "let x = ref 0 in x := !x + 1";
        let a = ptr(src, PtrVariant::Array1);
        assert_eq!(a.to_string(), "const ptr int x = (int z[1] = {0}; z); x ← *x + 1");
        let a = lift_declarations(&a, Dialect::CoreCE).unwrap();
        assert_eq!(a.to_string(), "int z[1] = {0}; const ptr int x = z; x ← *x + 1");
        let b = lift_declarations(&ptr(src, PtrVariant::Alloca), Dialect::CoreCE).unwrap();
        assert_eq!(b.to_string(), "int z = 0; const ptr int x = &z; x ← *x + 1");
    }

    #[test]
    fn aliasing_is_preserved() {
        let src = "let x = ref 0 in let y = x in y := 41; !x + 1";
        for v in [PtrVariant::Array1, PtrVariant::Alloca] {
            let c = ptr(src, v);
            typecheck_corece(&c.strip(), &CTypeEnv::new()).unwrap();
            assert_eq!(run_c(&c, Dialect::CoreCE).unwrap().value, Value::Int(42));
        }
    }

    #[test]
    fn nested_references() {
        let c = ptr("let x = ref (ref 5) in !(!x)", PtrVariant::Alloca);
        assert_eq!(c.count_decls(), 3);
        assert_eq!(run_c(&c, Dialect::CoreCE).unwrap().value, Value::Int(5));
        let c = ptr("!(ref 7)", PtrVariant::Array1);
        assert_eq!(run_c(&c, Dialect::CoreCE).unwrap().value, Value::Int(7));
    }
}
