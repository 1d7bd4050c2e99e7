//! Random well-typed ICaml programs for differential testing.
//!
//! Generation is type-directed: a target type is fixed first and terms are
//! built top-down, choosing only productions whose subterms fit in the
//! remaining depth. Every output is closed and well typed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::icaml::{typecheck_closed, IExpr, IExprKind, IType, Lit, Name, Op1, Op2};

mod shrink;

pub use shrink::shrink;

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    /// Maximum tree height, at least 1.
    pub max_depth: u32,
    pub target_type: IType,
    /// Probability that a `let` aliases an in-scope reference variable
    /// (`let y = x in ...`) instead of binding something new.
    pub alias_bias: f64,
    pub seed: u64,
    /// Allow `ref (ref t)` and deeper, up to [`MAX_REF_DEPTH`].
    pub include_nested_refs: bool,
    pub include_incr: bool,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_depth: 6,
            target_type: IType::INT,
            alias_bias: 0.3,
            seed: 0,
            include_nested_refs: true,
            include_incr: true,
        }
    }
}

pub const MAX_REF_DEPTH: usize = 3;

/// Fraction of programs that may use `ref e` outside `let x = ref e in`.
/// The others allocate only in binding form, which every translation
/// accepts.
pub const FREE_REF_PROGRAMS: f64 = 0.3;

/// Smallest height of a closed term of type `t` built without variables.
pub fn min_depth(t: &IType) -> u32 {
    match t {
        IType::Unit | IType::Base(_) => 1,
        IType::Ref(inner) => 1 + min_depth(inner),
    }
}

/// Generate a program. Panics if `cfg.max_depth` is too small for the
/// target type (see [`min_depth`]) or if the target type nests references
/// beyond what the configuration allows.
pub fn generate(cfg: &GenConfig) -> IExpr {
    assert!(cfg.max_depth >= 1, "max_depth must be at least 1");
    assert!(
        min_depth(&cfg.target_type) <= cfg.max_depth,
        "no program of type {} has height {}",
        cfg.target_type,
        cfg.max_depth
    );
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        cfg,
        env: Vec::new(),
        next_name: 0,
        free_refs: false,
    };
    g.free_refs = g.rng.gen_bool(FREE_REF_PROGRAMS) || g.height_needed(&cfg.target_type) > cfg.max_depth;
    let e = g.term(&cfg.target_type, cfg.max_depth);
    typecheck_closed(&e).expect("generator produced an ill-typed term")
}

/// True if `e` has a plain `let` whose right-hand side is an existing
/// reference, so that two names denote one cell.
pub fn contains_alias_let(e: &IExpr) -> bool {
    let mut found = false;
    e.walk(&mut |n| {
        if let IExprKind::Let(_, rhs, _) = &n.kind {
            if rhs.ty().is_ref() && !matches!(rhs.kind, IExprKind::App1(Op1::Ref, _)) {
                found = true;
            }
        }
    });
    found
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    cfg: &'a GenConfig,
    env: Vec<(Name, IType)>,
    next_name: u32,
    /// Whether this program may contain `ref e` outside `let x = ref e in`.
    free_refs: bool,
}

#[derive(Clone, Copy)]
enum Prod {
    Leaf,
    Add,
    Deref,
    Assign,
    Incr,
    Ref,
    /// `let x = ref e in x`
    BoundRef,
    Seq,
    Let,
}

impl Gen<'_> {
    fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n as u32) as usize
    }

    fn ref_cap(&self) -> usize {
        if self.cfg.include_nested_refs {
            MAX_REF_DEPTH
        } else {
            1
        }
    }

    fn vars_of(&self, t: &IType) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        for (i, (x, ty)) in self.env.iter().enumerate() {
            // skip names shadowed further in
            if ty == t && !self.env[i + 1..].iter().any(|(y, _)| y == x) {
                out.push(x.clone());
            }
        }
        out
    }

    fn visible_refs(&self) -> Vec<(Name, IType)> {
        let mut out = Vec::new();
        for (i, (x, ty)) in self.env.iter().enumerate() {
            if ty.is_ref() && !self.env[i + 1..].iter().any(|(y, _)| y == x) {
                out.push((x.clone(), ty.clone()));
            }
        }
        out
    }

    fn leaf(&mut self, t: &IType) -> Option<IExpr> {
        let vars = self.vars_of(t);
        let use_var = !vars.is_empty() && (t.is_ref() || self.rng.gen_bool(0.5));
        if use_var {
            let i = self.pick(vars.len());
            return Some(IExpr::var(vars[i].clone()));
        }
        match t {
            IType::Unit => Some(IExpr::unit()),
            IType::Base(crate::icaml::BaseType::Int) => Some(IExpr::int(self.rng.gen_range(0..100u32) as i64)),
            IType::Base(crate::icaml::BaseType::Bool) => Some(IExpr::bool(self.rng.gen_bool(0.5))),
            IType::Ref(_) => None,
        }
    }

    /// A term of type `t` fits in height `d`: either a closed one does, or a
    /// variable of that type is in scope.
    fn feasible(&self, t: &IType, d: u32) -> bool {
        d >= 1 && (self.height_needed(t) <= d || !self.vars_of(t).is_empty())
    }

    /// Like [`min_depth`], but allocating with `let x = ref e in x` when
    /// free `ref` is off.
    fn height_needed(&self, t: &IType) -> u32 {
        match t {
            IType::Unit | IType::Base(_) => 1,
            IType::Ref(inner) if self.free_refs => 1 + self.height_needed(inner),
            IType::Ref(inner) => 2 + self.height_needed(inner),
        }
    }

    /// Types a `let` may bind or an assignment may store.
    fn value_types(&mut self) -> Vec<IType> {
        let mut options = vec![
            IType::INT,
            IType::BOOL,
            IType::Unit,
            IType::reference(IType::INT),
            IType::reference(IType::BOOL),
        ];
        if self.ref_cap() >= 2 {
            options.push(IType::reference(IType::reference(IType::INT)));
        }
        if self.ref_cap() >= 3 && self.rng.gen_bool(0.3) {
            options.push(IType::reference(IType::reference(IType::reference(IType::INT))));
        }
        options
    }

    fn pick_type(&mut self, mut options: Vec<IType>, ok: impl Fn(&Self, &IType) -> bool) -> Option<IType> {
        options.retain(|t| ok(self, t));
        if options.is_empty() {
            return None;
        }
        let i = self.pick(options.len());
        Some(options.swap_remove(i))
    }

    fn storable(&self, t: &IType, sub: u32) -> bool {
        let r = IType::reference(t.clone());
        r.ref_depth() <= self.ref_cap() && self.feasible(&r, sub) && self.feasible(t, sub)
    }

    /// Productions available for a term of type `t` and height `depth`, with
    /// weights. Productions that need a reference get most of their weight
    /// when a suitable reference variable is in scope; otherwise they would
    /// have to allocate one with `ref` outside `let x = ref e in`.
    fn productions(&mut self, t: &IType, depth: u32) -> Vec<(Prod, u32)> {
        let mut ps = Vec::new();
        if !matches!(t, IType::Ref(_)) || !self.vars_of(t).is_empty() {
            ps.push((Prod::Leaf, 10));
        }
        if depth < 2 {
            return ps;
        }
        let sub = depth - 1;
        let via_var = |g: &Self, r: &IType| if g.vars_of(r).is_empty() { 1 } else { 10 };
        match t {
            IType::Base(crate::icaml::BaseType::Int) => ps.push((Prod::Add, 10)),
            IType::Unit => {
                let types = self.value_types();
                let storable: Vec<IType> = types.into_iter().filter(|vt| self.storable(vt, sub)).collect();
                if !storable.is_empty() {
                    let w = storable
                        .iter()
                        .map(|vt| via_var(self, &IType::reference(vt.clone())))
                        .max()
                        .unwrap_or(1);
                    ps.push((Prod::Assign, w));
                }
                let ri = IType::reference(IType::INT);
                if self.cfg.include_incr && self.feasible(&ri, sub) {
                    ps.push((Prod::Incr, via_var(self, &ri)));
                }
            }
            IType::Ref(inner) => {
                let bound = sub >= 2 && self.feasible(inner, sub - 1);
                if bound {
                    ps.push((Prod::BoundRef, 10));
                }
                if self.free_refs && self.feasible(inner, sub) {
                    ps.push((Prod::Ref, 2));
                }
            }
            _ => {}
        }
        let deref_src = IType::reference(t.clone());
        if deref_src.ref_depth() <= self.ref_cap() && self.feasible(&deref_src, sub) {
            ps.push((Prod::Deref, via_var(self, &deref_src)));
        }
        if self.feasible(t, sub) {
            ps.push((Prod::Seq, 10));
            ps.push((Prod::Let, 10));
        }
        ps
    }

    fn term(&mut self, t: &IType, depth: u32) -> IExpr {
        let ps = self.productions(t, depth);
        assert!(!ps.is_empty(), "no term of type {} fits in height {}", t, depth);
        // leaves get likelier as depth runs out; a reference variable in
        // scope is the usual way to get a reference
        let leaf_p = if t.is_ref() {
            0.8
        } else if depth <= 2 {
            0.5
        } else {
            0.15
        };
        let has_leaf = matches!(ps.first(), Some((Prod::Leaf, _)));
        let prod = if has_leaf && (ps.len() == 1 || self.rng.gen_bool(leaf_p)) {
            Prod::Leaf
        } else {
            let rest = &ps[usize::from(has_leaf)..];
            let mut k = self.rng.gen_range(0..rest.iter().map(|p| p.1).sum::<u32>());
            let mut i = 0;
            while k >= rest[i].1 {
                k -= rest[i].1;
                i += 1;
            }
            rest[i].0
        };
        let sub = depth.saturating_sub(1);
        match prod {
            Prod::Leaf => self.leaf(t).expect("leaf production is only offered when available"),
            Prod::Add => {
                let a = self.term(&IType::INT, sub);
                IExpr::add(a, self.term(&IType::INT, sub))
            }
            Prod::Deref => IExpr::deref(self.term(&IType::reference(t.clone()), sub)),
            Prod::Incr => IExpr::incr(self.term(&IType::reference(IType::INT), sub)),
            Prod::Ref => IExpr::new_ref(self.term(t.pointee().expect("ref type"), sub)),
            Prod::BoundRef => {
                let init = self.term(t.pointee().expect("ref type"), sub - 1);
                let x = format!("x{}", self.next_name);
                self.next_name += 1;
                IExpr::let_(x.clone(), IExpr::new_ref(init), IExpr::var(x))
            }
            Prod::Assign => {
                let types = self.value_types();
                let with_var = self.pick_type(types.clone(), |g, vt| {
                    g.storable(vt, sub) && !g.vars_of(&IType::reference(vt.clone())).is_empty()
                });
                let vt = match with_var {
                    Some(vt) if self.rng.gen_bool(0.9) => vt,
                    _ => self
                        .pick_type(types, |g, vt| g.storable(vt, sub))
                        .expect("assignment is only offered when some type fits"),
                };
                let lhs = self.term(&IType::reference(vt.clone()), sub);
                IExpr::assign(lhs, self.term(&vt, sub))
            }
            Prod::Seq => {
                let a = self.term(&IType::Unit, sub);
                IExpr::seq(a, self.term(t, sub))
            }
            Prod::Let => self.let_(t, sub),
        }
    }

    fn let_(&mut self, t: &IType, sub: u32) -> IExpr {
        let refs = self.visible_refs();
        let (rhs, rhs_ty) = if !refs.is_empty() && self.rng.gen_bool(self.cfg.alias_bias) {
            let i = self.pick(refs.len());
            let (x, ty) = refs[i].clone();
            (IExpr::var(x), ty)
        } else {
            let types = self.value_types();
            let vt = self.pick_type(types, |g, vt| g.feasible(vt, sub)).unwrap_or(IType::INT);
            let rhs = match vt.pointee() {
                Some(inner) if self.feasible(inner, sub.saturating_sub(1)) && self.rng.gen_bool(0.85) => {
                    IExpr::new_ref(self.term(inner, sub - 1))
                }
                _ => self.term(&vt, sub),
            };
            (rhs, vt)
        };
        // shadowing only with a same-typed binding keeps every type that was
        // reachable through variables reachable
        let same: Vec<Name> = self.vars_of(&rhs_ty);
        let x = if !same.is_empty() && self.rng.gen_bool(0.05) {
            let i = self.pick(same.len());
            same[i].clone()
        } else {
            let x = format!("x{}", self.next_name);
            self.next_name += 1;
            x
        };
        let alias = rhs_ty.is_ref() && matches!(rhs.kind, IExprKind::Var(_));
        self.env.push((x.clone(), rhs_ty.clone()));
        // an alias is usually written through right away, so that a later
        // read of the other name can observe it
        let inner = rhs_ty.pointee().cloned();
        let body = match inner {
            Some(inner)
                if alias
                    && sub >= 3
                    && self.feasible(&inner, sub - 2)
                    && self.feasible(t, sub - 1)
                    && self.rng.gen_bool(0.6) =>
            {
                let v = self.term(&inner, sub - 2);
                let write = IExpr::assign(IExpr::var(x.clone()), v);
                let read_back = match &rhs.kind {
                    IExprKind::Var(orig) if *orig != x && inner == *t && self.rng.gen_bool(0.5) => {
                        Some(IExpr::deref(IExpr::var(orig.clone())))
                    }
                    _ => None,
                };
                let rest = match read_back {
                    Some(r) => r,
                    None => self.term(t, sub - 1),
                };
                IExpr::seq(write, rest)
            }
            _ => self.term(t, sub),
        };
        self.env.pop();
        IExpr::let_(x, rhs, body)
    }
}

/// Draws which constructors and constants occur in `e`, for coverage
/// checks: `var`, `let`, `seq`, and the constant names.
pub fn features(e: &IExpr) -> Vec<&'static str> {
    let mut out = Vec::new();
    e.walk(&mut |n| {
        let f = match &n.kind {
            IExprKind::Var(_) => "var",
            IExprKind::Let(..) => "let",
            IExprKind::Seq(..) => "seq",
            IExprKind::Lit(Lit::Int(_)) => "int",
            IExprKind::Lit(Lit::Bool(true)) => "true",
            IExprKind::Lit(Lit::Bool(false)) => "false",
            IExprKind::Lit(Lit::Unit) => "()",
            IExprKind::App1(op, _) => op.name(),
            IExprKind::App2(Op2::Add, ..) => "+",
            IExprKind::App2(Op2::Assign, ..) => ":=",
        };
        if !out.contains(&f) {
            out.push(f);
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(seed: u64, depth: u32, t: IType) -> GenConfig {
        GenConfig {
            max_depth: depth,
            target_type: t,
            seed,
            ..GenConfig::default()
        }
    }

    #[test]
    fn depth_one_is_a_literal() {
        for seed in 0..50 {
            let e = generate(&cfg(seed, 1, IType::INT));
            assert!(matches!(e.kind, IExprKind::Lit(Lit::Int(_))), "{}", e);
        }
    }

    #[test]
    fn outputs_are_closed_typed_and_bounded() {
        for seed in 0..300 {
            for t in [IType::INT, IType::BOOL, IType::Unit, IType::reference(IType::INT)] {
                let e = generate(&cfg(seed, 7, t.clone()));
                assert!(e.is_closed());
                assert_eq!(e.ty(), &t);
                assert!(e.height() <= 7, "{} has height {}", e, e.height());
            }
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = generate(&cfg(99, 8, IType::INT));
        let b = generate(&cfg(99, 8, IType::INT));
        assert_eq!(a, b);
    }

    #[test]
    fn nested_refs_can_be_disabled() {
        for seed in 0..200 {
            let c = GenConfig {
                include_nested_refs: false,
                include_incr: false,
                ..cfg(seed, 8, IType::INT)
            };
            let e = generate(&c);
            e.walk(&mut |n| {
                assert!(n.ty().ref_depth() <= 1);
                assert!(!matches!(n.kind, IExprKind::App1(Op1::Incr, _)));
            });
        }
    }

    #[test]
    fn alias_detection() {
        let e = typecheck_closed(&crate::parse("let x = ref 0 in let y = x in !y").unwrap()).unwrap();
        assert!(contains_alias_let(&e));
        let e = typecheck_closed(&crate::parse("let x = ref 0 in let y = !x in y").unwrap()).unwrap();
        assert!(!contains_alias_let(&e));
    }
}
