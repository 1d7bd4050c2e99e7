use std::collections::HashSet;

use crate::corecalc::{CExpr, CExprKind};
use crate::icaml::{IExpr, IExprKind, Name};

// C99 keywords, plus identifiers the emitted translation unit relies on or
// that the included headers define as macros.
const RESERVED: &[&str] = &[
    "auto",
    "break",
    "case",
    "char",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extern",
    "float",
    "for",
    "goto",
    "if",
    "inline",
    "int",
    "long",
    "register",
    "restrict",
    "return",
    "short",
    "signed",
    "sizeof",
    "static",
    "struct",
    "switch",
    "typedef",
    "union",
    "unsigned",
    "void",
    "volatile",
    "while",
    "bool",
    "true",
    "false",
    "main",
    "printf",
    "EOF",
    "NULL",
    "BUFSIZ",
    "FILENAME_MAX",
    "FOPEN_MAX",
    "L_tmpnam",
    "SEEK_SET",
    "SEEK_CUR",
    "SEEK_END",
    "TMP_MAX",
    "stdin",
    "stdout",
    "stderr",
    "getc",
    "putc",
    "getchar",
    "putchar",
    "FILE",
    "fpos_t",
    "size_t",
];

/// Names that cannot be used as C block-scope variables in the emitted
/// translation unit.
pub fn is_reserved_c_name(x: &str) -> bool {
    if RESERVED.contains(&x) {
        return true;
    }
    let b = x.as_bytes();
    b.first() == Some(&b'_') && b.get(1).is_some_and(|c| *c == b'_' || c.is_ascii_uppercase())
}

struct Renamer {
    /// Names that a new binder must not take.
    taken: HashSet<Name>,
    /// Every name in the program, to keep fresh names fresh.
    all: HashSet<Name>,
    scope: Vec<(Name, Name)>,
}

impl Renamer {
    fn new(all: Vec<Name>, free: Vec<Name>) -> Renamer {
        Renamer {
            taken: free.into_iter().collect(),
            all: all.into_iter().collect(),
            scope: Vec::new(),
        }
    }

    fn bind(&mut self, x: &Name) -> Name {
        let new = if self.taken.contains(x) || is_reserved_c_name(x) {
            let base = if x.starts_with('_') {
                format!("v{}", x)
            } else {
                x.clone()
            };
            let mut n = 1usize;
            loop {
                let c = format!("{}{}", base, n);
                if !self.taken.contains(&c) && !self.all.contains(&c) && !is_reserved_c_name(&c) {
                    break c;
                }
                n += 1;
            }
        } else {
            x.clone()
        };
        self.taken.insert(new.clone());
        self.all.insert(new.clone());
        new
    }

    fn resolve(&self, x: &Name) -> Name {
        self.scope
            .iter()
            .rev()
            .find(|(old, _)| old == x)
            .map(|(_, new)| new.clone())
            .unwrap_or_else(|| x.clone())
    }

    fn icaml(&mut self, e: &IExpr) -> IExpr {
        let kind = match &e.kind {
            IExprKind::Var(x) => IExprKind::Var(self.resolve(x)),
            IExprKind::Lit(l) => IExprKind::Lit(*l),
            IExprKind::App1(op, a) => IExprKind::App1(*op, Box::new(self.icaml(a))),
            IExprKind::App2(op, a, b) => {
                let a = self.icaml(a);
                IExprKind::App2(*op, Box::new(a), Box::new(self.icaml(b)))
            }
            IExprKind::Seq(a, b) => {
                let a = self.icaml(a);
                IExprKind::Seq(Box::new(a), Box::new(self.icaml(b)))
            }
            IExprKind::Let(x, rhs, body) => {
                let rhs = self.icaml(rhs);
                let new = self.bind(x);
                self.scope.push((x.clone(), new.clone()));
                let body = self.icaml(body);
                self.scope.pop();
                IExprKind::Let(new, Box::new(rhs), Box::new(body))
            }
        };
        IExpr {
            kind,
            ty: e.ty.clone(),
            span: e.span,
        }
    }

    fn c(&mut self, e: &CExpr) -> CExpr {
        let kind = match &e.kind {
            CExprKind::Var(x) => CExprKind::Var(self.resolve(x)),
            CExprKind::AddrOf(x) => CExprKind::AddrOf(self.resolve(x)),
            CExprKind::Lit(l) => CExprKind::Lit(*l),
            CExprKind::App1(op, a) => CExprKind::App1(*op, Box::new(self.c(a))),
            CExprKind::App2(op, a, b) => {
                let a = self.c(a);
                CExprKind::App2(*op, Box::new(a), Box::new(self.c(b)))
            }
            CExprKind::Seq(a, b) => {
                let a = self.c(a);
                CExprKind::Seq(Box::new(a), Box::new(self.c(b)))
            }
            CExprKind::AssignSpecial(x, v) => {
                let v = self.c(v);
                CExprKind::AssignSpecial(self.resolve(x), Box::new(v))
            }
            CExprKind::Decl {
                binder,
                storage,
                name,
                init,
                body,
            } => {
                let init = init.as_ref().map(|i| Box::new(self.c(i)));
                let new = self.bind(name);
                self.scope.push((name.clone(), new.clone()));
                let body = self.c(body);
                self.scope.pop();
                CExprKind::Decl {
                    binder: binder.clone(),
                    storage: *storage,
                    name: new,
                    init,
                    body: Box::new(body),
                }
            }
        };
        CExpr {
            kind,
            ty: e.ty.clone(),
            span: e.span,
        }
    }
}

/// Rename binders so that all of them are distinct, none coincides with a
/// free variable, and none is a reserved C identifier. Binders that already
/// satisfy this keep their names.
pub fn alpha_rename_icaml(e: &IExpr) -> IExpr {
    Renamer::new(e.all_names(), e.free_vars()).icaml(e)
}

/// [`alpha_rename_icaml`] for CoreC/CoreCE trees.
pub fn alpha_rename_c(e: &CExpr) -> CExpr {
    Renamer::new(e.all_names(), c_free_vars(e)).c(e)
}

pub(crate) fn c_free_vars(e: &CExpr) -> Vec<Name> {
    fn go(e: &CExpr, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        let mut use_name = |x: &Name, bound: &Vec<Name>| {
            if !bound.contains(x) && !out.contains(x) {
                out.push(x.clone());
            }
        };
        match &e.kind {
            CExprKind::Var(x) | CExprKind::AddrOf(x) => use_name(x, bound),
            CExprKind::AssignSpecial(x, v) => {
                use_name(x, bound);
                go(v, bound, out);
            }
            CExprKind::Decl { name, init, body, .. } => {
                if let Some(i) = init {
                    go(i, bound, out);
                }
                bound.push(name.clone());
                go(body, bound, out);
                bound.pop();
            }
            _ => {
                for c in e.children() {
                    go(c, bound, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(e, &mut Vec::new(), &mut out);
    out
}
