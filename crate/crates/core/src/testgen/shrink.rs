use crate::icaml::{typecheck_closed, IExpr, IExprKind, IType, Lit};

/// Greedily simplify `e` while `failing` keeps holding.
///
/// Each round tries, at every node, replacing the node by a child of the
/// same type, by a literal of its type, dropping a `let` whose variable is
/// unused or only renames another variable, and moving integer literals
/// towards zero. A candidate is kept only if it typechecks, is strictly
/// smaller, and still fails. The result is a local minimum.
pub fn shrink(e: &IExpr, failing: impl Fn(&IExpr) -> bool) -> IExpr {
    let mut cur = e.clone();
    'outer: loop {
        let m = measure(&cur);
        for cand in candidates(&cur) {
            let Ok(cand) = typecheck_closed(&cand.strip()) else {
                continue;
            };
            if cand.ty() != cur.ty() || measure(&cand) >= m {
                continue;
            }
            if failing(&cand) {
                cur = cand;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// (size, non-literal nodes, sum of integer literals)
fn measure(e: &IExpr) -> (usize, usize, u128) {
    let mut non_lit = 0;
    let mut lits = 0u128;
    e.walk(&mut |n| match n.kind {
        IExprKind::Lit(Lit::Int(k)) => lits += k.unsigned_abs() as u128,
        IExprKind::Lit(_) => {}
        _ => non_lit += 1,
    });
    (e.size(), non_lit, lits)
}

fn literal(t: &IType) -> Option<IExpr> {
    match t {
        IType::Unit => Some(IExpr::unit()),
        IType::Base(crate::icaml::BaseType::Int) => Some(IExpr::int(0)),
        IType::Base(crate::icaml::BaseType::Bool) => Some(IExpr::bool(false)),
        IType::Ref(_) => None,
    }
}

fn subst(e: &IExpr, x: &str, by: &IExpr) -> IExpr {
    let kind = match &e.kind {
        IExprKind::Var(y) if y == x => return by.clone(),
        IExprKind::Var(_) | IExprKind::Lit(_) => return e.clone(),
        IExprKind::App1(op, a) => IExprKind::App1(*op, Box::new(subst(a, x, by))),
        IExprKind::App2(op, a, b) => IExprKind::App2(*op, Box::new(subst(a, x, by)), Box::new(subst(b, x, by))),
        IExprKind::Seq(a, b) => IExprKind::Seq(Box::new(subst(a, x, by)), Box::new(subst(b, x, by))),
        IExprKind::Let(y, rhs, body) => {
            let rhs = subst(rhs, x, by);
            let body = if y == x { (**body).clone() } else { subst(body, x, by) };
            IExprKind::Let(y.clone(), Box::new(rhs), Box::new(body))
        }
    };
    IExpr {
        kind,
        ty: e.ty.clone(),
        span: e.span,
    }
}

/// Rewrites at the root of `e`.
fn local(e: &IExpr) -> Vec<IExpr> {
    let mut out = Vec::new();
    for c in e.children() {
        if c.ty == e.ty {
            out.push(c.clone());
        }
    }
    if let IExprKind::Let(x, rhs, body) = &e.kind {
        if let IExprKind::Var(_) = rhs.kind {
            out.push(subst(body, x, rhs));
        }
    }
    match &e.kind {
        IExprKind::Lit(Lit::Int(k)) if *k != 0 => {
            out.push(IExpr::int(0));
            out.push(IExpr::int(k / 2));
            out.push(IExpr::int(k - k.signum()));
        }
        IExprKind::Lit(_) => {}
        _ => out.extend(e.ty.as_ref().and_then(literal)),
    }
    out
}

/// Every tree obtained from `e` by one local rewrite somewhere.
fn candidates(e: &IExpr) -> Vec<IExpr> {
    let mut out = local(e);
    let rebuild = |kind: IExprKind| IExpr {
        kind,
        ty: e.ty.clone(),
        span: e.span,
    };
    match &e.kind {
        IExprKind::Var(_) | IExprKind::Lit(_) => {}
        IExprKind::App1(op, a) => {
            for c in candidates(a) {
                out.push(rebuild(IExprKind::App1(*op, Box::new(c))));
            }
        }
        IExprKind::App2(op, a, b) => {
            for c in candidates(a) {
                out.push(rebuild(IExprKind::App2(*op, Box::new(c), b.clone())));
            }
            for c in candidates(b) {
                out.push(rebuild(IExprKind::App2(*op, a.clone(), Box::new(c))));
            }
        }
        IExprKind::Seq(a, b) => {
            for c in candidates(a) {
                out.push(rebuild(IExprKind::Seq(Box::new(c), b.clone())));
            }
            for c in candidates(b) {
                out.push(rebuild(IExprKind::Seq(a.clone(), Box::new(c))));
            }
        }
        IExprKind::Let(x, rhs, body) => {
            for c in candidates(rhs) {
                out.push(rebuild(IExprKind::Let(x.clone(), Box::new(c), body.clone())));
            }
            for c in candidates(body) {
                out.push(rebuild(IExprKind::Let(x.clone(), rhs.clone(), Box::new(c))));
            }
        }
    }
    out
}
