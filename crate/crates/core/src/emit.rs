//! Rendering lifted CoreC/CoreCE trees as C99 source, and a small driver
//! that compiles and runs the result with the system C compiler.

use std::collections::HashSet;
use std::io;
use std::path::Path;
use std::process::Command;

use thiserror::Error;

use crate::corecalc::{BinderType, CExpr, CExprKind, COp1, COp2, CType, Dialect, Storage};
use crate::diag::{Diagnostic, DiagnosticKind};
use crate::icaml::{BaseType, Lit, Name};
use crate::translate::FreshSupply;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmitOptions {
    /// Print `*&x` as `x` (and `&x ← e` as `x = e`).
    pub abbreviate_star_addr: bool,
}

impl Default for EmitOptions {
    fn default() -> EmitOptions {
        EmitOptions {
            abbreviate_star_addr: true,
        }
    }
}

/// How `main` prints the program result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResultFormat {
    Int,
    Bool,
    Unit,
    Pointer,
}

/// An emitted program: declarations and statements, then the result
/// expression. `body` holds one statement per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSourceUnit {
    pub includes: Vec<String>,
    pub body: Vec<String>,
    pub result: String,
    pub result_format: ResultFormat,
}

impl CSourceUnit {
    /// The statements and the result as one line, in the style used for
    /// examples: `int x = 0; x = x + 1;`.
    pub fn fragment(&self) -> String {
        let mut parts = self.body.clone();
        parts.push(format!("{};", self.result));
        parts.join(" ")
    }
}

// C operator precedence, loosest first.
const COMMA: u8 = 1;
const ASSIGN: u8 = 2;
const ADD: u8 = 12;
const UNARY: u8 = 14;
const PRIMARY: u8 = 16;

/// Render a lifted, annotated tree. Fails with `UnliftedDeclaration` if a
/// declaration occurs outside the statement spine.
pub fn emit_c(e: &CExpr, dialect: Dialect, opts: &EmitOptions) -> Result<CSourceUnit, Diagnostic> {
    let mut fresh = FreshSupply::avoiding(e.all_names());
    let mut r = Renderer {
        opts,
        reads: HashSet::new(),
    };
    let mut lines: Vec<(String, Option<Name>)> = Vec::new();
    let mut cur = e;
    loop {
        match &cur.kind {
            CExprKind::Decl {
                binder,
                storage,
                name,
                init,
                body,
            } => {
                let init = match init {
                    Some(i) => {
                        no_decls(i)?;
                        let i = spill(i, dialect, &mut fresh, &mut lines);
                        Some(r.rvalue(&i, ASSIGN))
                    }
                    None => None,
                };
                lines.push((declaration(binder, *storage, name, init.as_deref()), Some(name.clone())));
                cur = body;
            }
            CExprKind::Seq(a, b) => {
                no_decls(a)?;
                let a = spill(a, dialect, &mut fresh, &mut lines);
                lines.push((format!("{};", r.void(&a, COMMA)), None));
                cur = b;
            }
            _ => break,
        }
    }
    no_decls(cur)?;
    let last = spill(cur, dialect, &mut fresh, &mut lines);
    let result_format = match last.ty() {
        CType::Unit => ResultFormat::Unit,
        CType::Base(BaseType::Int) => ResultFormat::Int,
        CType::Base(BaseType::Bool) => ResultFormat::Bool,
        CType::Ptr(_) => ResultFormat::Pointer,
    };
    let result = match result_format {
        ResultFormat::Unit => r.void(&last, COMMA),
        _ => r.rvalue(&last, COMMA),
    };
    let mut body = Vec::new();
    for (line, declared) in lines {
        body.push(line);
        if let Some(x) = declared {
            if !r.reads.contains(&x) {
                body.push(format!("(void){};", x));
            }
        }
    }
    Ok(CSourceUnit {
        includes: vec!["stdbool.h".into(), "stdio.h".into()],
        body,
        result,
        result_format,
    })
}

fn no_decls(e: &CExpr) -> Result<(), Diagnostic> {
    let mut bad = None;
    e.walk(&mut |n| {
        if let CExprKind::Decl { name, .. } = &n.kind {
            bad.get_or_insert((name.clone(), n.span));
        }
    });
    match bad {
        None => Ok(()),
        Some((x, span)) => Err(Diagnostic::new(
            DiagnosticKind::UnliftedDeclaration,
            span,
            format!("declaration of `{}` inside an expression; lift declarations first", x),
        )),
    }
}

fn c_type(t: &CType) -> String {
    match t {
        CType::Unit => "char".into(),
        CType::Base(BaseType::Int) => "int".into(),
        CType::Base(BaseType::Bool) => "bool".into(),
        CType::Ptr(inner) => match **inner {
            CType::Ptr(_) => format!("{}*", c_type(inner)),
            _ => format!("{} *", c_type(inner)),
        },
    }
}

fn declaration(binder: &BinderType, storage: Storage, x: &str, init: Option<&str>) -> String {
    let t = c_type(&binder.base);
    match storage {
        Storage::Array1 => match init {
            Some(i) => format!("{} {}[1] = {{{}}};", t, x, i),
            None => format!("{} {}[1];", t, x),
        },
        Storage::Scalar => {
            let head = match (binder.is_const, binder.base.has_ptr()) {
                (false, _) => format!("{} {}", t, x),
                (true, true) => format!("{} const {}", t, x),
                (true, false) => format!("const {} {}", t, x),
            };
            match init {
                Some(i) => format!("{} = {};", head, i),
                None => format!("{};", head),
            }
        }
    }
}

fn has_write(e: &CExpr) -> bool {
    let mut w = false;
    e.walk(&mut |n| {
        w |= matches!(
            n.kind,
            CExprKind::AssignSpecial(..) | CExprKind::App2(COp2::Store, ..) | CExprKind::App1(COp1::Incr, _)
        )
    });
    w
}

fn touches_memory(e: &CExpr) -> bool {
    let mut t = false;
    e.walk(&mut |n| t |= !matches!(n.kind, CExprKind::Lit(_) | CExprKind::AddrOf(_)));
    t
}

/// Declare a temporary, and return `tmp = e` and a read of `tmp`.
fn save(
    e: CExpr,
    dialect: Dialect,
    fresh: &mut FreshSupply,
    lines: &mut Vec<(String, Option<Name>)>,
) -> (CExpr, CExpr) {
    let tmp = fresh.fresh("tmp");
    let t = e.ty().clone();
    lines.push((
        declaration(&BinderType::mutable(t.clone()), Storage::Scalar, &tmp, None),
        None,
    ));
    let store = match dialect {
        Dialect::CoreC => CExpr::assign(tmp.clone(), e),
        Dialect::CoreCE => CExpr::store(CExpr::addr_of(tmp.clone()).with_ty(CType::ptr(t.clone())), e),
    };
    (store.with_ty(CType::Unit), CExpr::var(tmp).with_ty(t))
}

fn then(saves: Vec<CExpr>, last: CExpr) -> CExprKind {
    let ty = last.ty().clone();
    let e = saves
        .into_iter()
        .rev()
        .fold(last, |acc, s| CExpr::seq(s, acc).with_ty(ty.clone()));
    e.kind
}

/// C leaves the evaluation order of `+` and `=` operands unspecified, so an
/// operand with a side effect next to one that reads memory is first saved
/// in a temporary: `a + b` becomes `(tmp = a, tmp + b)`. The target of an
/// assignment or `++` counts as memory, so `*p = (x = 1, 2)` becomes
/// `(tmp = p, tmp1 = (x = 1, 2), *tmp = tmp1)`.
fn spill(e: &CExpr, dialect: Dialect, fresh: &mut FreshSupply, lines: &mut Vec<(String, Option<Name>)>) -> CExpr {
    let kind = match &e.kind {
        CExprKind::App2(COp2::Store, p, v) => {
            let p = spill(p, dialect, fresh, lines);
            let v = spill(v, dialect, fresh, lines);
            if has_write(&v) || has_write(&p) {
                let mut saves = Vec::new();
                let p = if matches!(p.kind, CExprKind::AddrOf(_)) {
                    p
                } else {
                    let (s, r) = save(p, dialect, fresh, lines);
                    saves.push(s);
                    r
                };
                let (s, v) = save(v, dialect, fresh, lines);
                saves.push(s);
                then(saves, CExpr::store(p, v).with_ty(e.ty().clone()))
            } else {
                CExprKind::App2(COp2::Store, Box::new(p), Box::new(v))
            }
        }
        CExprKind::App2(op, a, b) => {
            let a = spill(a, dialect, fresh, lines);
            let b = spill(b, dialect, fresh, lines);
            let conflict = (has_write(&a) && touches_memory(&b)) || (has_write(&b) && touches_memory(&a));
            if conflict {
                let (s, a) = save(a, dialect, fresh, lines);
                let op = CExpr::new(CExprKind::App2(*op, Box::new(a), Box::new(b))).with_ty(e.ty().clone());
                then(vec![s], op)
            } else {
                CExprKind::App2(*op, Box::new(a), Box::new(b))
            }
        }
        CExprKind::App1(COp1::Incr, p) => {
            let p = spill(p, dialect, fresh, lines);
            if has_write(&p) {
                let (s, p) = save(p, dialect, fresh, lines);
                then(vec![s], CExpr::incr(p).with_ty(e.ty().clone()))
            } else {
                CExprKind::App1(COp1::Incr, Box::new(p))
            }
        }
        CExprKind::App1(op, a) => CExprKind::App1(*op, Box::new(spill(a, dialect, fresh, lines))),
        CExprKind::Seq(a, b) => {
            let a = spill(a, dialect, fresh, lines);
            CExprKind::Seq(Box::new(a), Box::new(spill(b, dialect, fresh, lines)))
        }
        CExprKind::AssignSpecial(x, v) => {
            let v = spill(v, dialect, fresh, lines);
            if has_write(&v) {
                let (s, v) = save(v, dialect, fresh, lines);
                then(vec![s], CExpr::assign(x.clone(), v).with_ty(e.ty().clone()))
            } else {
                CExprKind::AssignSpecial(x.clone(), Box::new(v))
            }
        }
        _ => return e.clone(),
    };
    CExpr {
        kind,
        ty: e.ty.clone(),
        span: e.span,
    }
}

struct Renderer<'a> {
    opts: &'a EmitOptions,
    reads: HashSet<Name>,
}

fn paren(s: String, prec: u8, min: u8) -> String {
    if prec < min {
        format!("({})", s)
    } else {
        s
    }
}

/// `x = x` is a no-op that some compilers reject under `-Werror`.
fn assignment(l: String, r: String) -> (String, u8) {
    if l == r && l.bytes().all(|b| b == b'_' || b.is_ascii_alphanumeric()) {
        (format!("(void){}", l), UNARY)
    } else {
        (format!("{} = {}", l, r), ASSIGN)
    }
}

impl Renderer<'_> {
    fn abbreviated<'e>(&self, p: &'e CExpr) -> Option<&'e Name> {
        match &p.kind {
            CExprKind::AddrOf(x) if self.opts.abbreviate_star_addr => Some(x),
            _ => None,
        }
    }

    /// The lvalue `*p`, or `x` when `p` is `&x` and abbreviation is on.
    fn lvalue(&mut self, p: &CExpr) -> (String, u8) {
        match self.abbreviated(p) {
            Some(x) => (x.clone(), PRIMARY),
            None => (format!("*{}", self.expr(p, UNARY)), UNARY),
        }
    }

    /// A value of the node's type. Unit values are stored as `char` 0.
    fn rvalue(&mut self, e: &CExpr, min: u8) -> String {
        let unit_cell = matches!(e.kind, CExprKind::Var(_) | CExprKind::App1(COp1::Deref, _));
        if *e.ty() == CType::Unit && !unit_cell {
            if let CExprKind::Lit(Lit::Unit) = e.kind {
                return "0".into();
            }
            return format!("({}, 0)", self.void(e, ASSIGN));
        }
        self.expr(e, min)
    }

    fn expr(&mut self, e: &CExpr, min: u8) -> String {
        let (s, prec) = match &e.kind {
            CExprKind::Var(x) => {
                self.reads.insert(x.clone());
                (x.clone(), PRIMARY)
            }
            CExprKind::Lit(Lit::Int(n)) if *n < 0 => (format!("-{}", n.unsigned_abs()), UNARY),
            CExprKind::Lit(Lit::Int(n)) => (n.to_string(), PRIMARY),
            CExprKind::Lit(Lit::Bool(b)) => (b.to_string(), PRIMARY),
            CExprKind::Lit(Lit::Unit) => ("0".into(), PRIMARY),
            CExprKind::AddrOf(x) => {
                self.reads.insert(x.clone());
                (format!("&{}", x), UNARY)
            }
            CExprKind::App1(COp1::Deref, p) => match self.abbreviated(p) {
                Some(x) => {
                    self.reads.insert(x.clone());
                    (x.clone(), PRIMARY)
                }
                None => (format!("*{}", self.expr(p, UNARY)), UNARY),
            },
            CExprKind::App1(COp1::Incr, p) => {
                let (l, _) = self.lvalue(p);
                (format!("++{}", l), UNARY)
            }
            CExprKind::App2(COp2::Add, a, b) => {
                let a = self.rvalue(a, ADD);
                (format!("{} + {}", a, self.rvalue(b, ADD + 1)), ADD)
            }
            CExprKind::App2(COp2::Store, p, v) => {
                let (l, _) = self.lvalue(p);
                assignment(l, self.rvalue(v, ASSIGN))
            }
            CExprKind::AssignSpecial(x, v) => assignment(x.clone(), self.rvalue(v, ASSIGN)),
            CExprKind::Seq(a, b) => {
                let a = self.void(a, COMMA);
                (format!("{}, {}", a, self.rvalue(b, COMMA)), COMMA)
            }
            CExprKind::Decl { .. } => unreachable!("checked by no_decls"),
        };
        paren(s, prec, min)
    }

    /// The node evaluated for its effect only.
    fn void(&mut self, e: &CExpr, min: u8) -> String {
        match &e.kind {
            CExprKind::AssignSpecial(..) | CExprKind::App2(COp2::Store, ..) | CExprKind::App1(COp1::Incr, _) => {
                self.expr(e, min)
            }
            CExprKind::Seq(a, b) => {
                let a = self.void(a, COMMA);
                paren(format!("{}, {}", a, self.void(b, COMMA)), COMMA, min)
            }
            CExprKind::Lit(Lit::Unit) => paren("(void)0".into(), UNARY, min),
            _ => paren(format!("(void){}", self.expr(e, UNARY)), UNARY, min),
        }
    }
}

/// A complete translation unit whose `main` prints the result.
pub fn wrap_main(u: &CSourceUnit) -> String {
    let mut out = String::new();
    for inc in &u.includes {
        out.push_str(&format!("#include <{}>\n", inc));
    }
    out.push_str("\nint main(void)\n{\n");
    for line in &u.body {
        out.push_str(&format!("    {}\n", line));
    }
    match u.result_format {
        ResultFormat::Int => out.push_str(&format!("    printf(\"%d\\n\", (int)({}));\n", u.result)),
        ResultFormat::Bool => out.push_str(&format!(
            "    printf(\"%s\\n\", ({}) ? \"true\" : \"false\");\n",
            u.result
        )),
        ResultFormat::Unit => {
            out.push_str(&format!("    {};\n", u.result));
            out.push_str("    printf(\"()\\n\");\n");
        }
        ResultFormat::Pointer => {
            out.push_str(&format!("    (void)({});\n", u.result));
            out.push_str("    printf(\"<loc>\\n\");\n");
        }
    }
    out.push_str("    return 0;\n}\n");
    out
}

#[derive(Debug, Error)]
pub enum CcError {
    #[error("no C compiler: `{0}` could not be started")]
    NoCompiler(String),
    #[error("compilation failed:\n{0}")]
    CompileFailed(String),
    #[error("program exited with {status}:\n{stderr}")]
    RunFailed { status: String, stderr: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The compiler command: `$CC` if set, otherwise `cc`.
pub fn compiler_command() -> String {
    std::env::var("CC")
        .ok()
        .filter(|s| !s.trim().is_empty())
        .unwrap_or_else(|| "cc".into())
}

/// Whether the compiler can be started at all.
pub fn compiler_available() -> bool {
    let cc = compiler_command();
    let mut parts = cc.split_whitespace();
    let Some(prog) = parts.next() else { return false };
    Command::new(prog).args(parts).arg("--version").output().is_ok()
}

/// Compile `source` with `-std=c99 -Wall -Werror`, run it, and return its
/// standard output.
pub fn compile_and_run(source: &str) -> Result<String, CcError> {
    let dir = tempfile::tempdir()?;
    let src = dir.path().join("prog.c");
    let exe = dir.path().join("prog");
    std::fs::write(&src, source)?;
    compile(&src, &exe)?;
    let out = Command::new(&exe).output()?;
    if !out.status.success() {
        return Err(CcError::RunFailed {
            status: out.status.to_string(),
            stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        });
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn compile(src: &Path, exe: &Path) -> Result<(), CcError> {
    let cc = compiler_command();
    let mut parts = cc.split_whitespace();
    let prog = parts.next().unwrap_or("cc");
    let out = Command::new(prog)
        .args(parts)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(exe)
        .arg(src)
        .output()
        .map_err(|e| match e.kind() {
            io::ErrorKind::NotFound | io::ErrorKind::PermissionDenied => CcError::NoCompiler(cc.clone()),
            _ => CcError::Io(e),
        })?;
    if !out.status.success() {
        return Err(CcError::CompileFailed(
            String::from_utf8_lossy(&out.stderr).into_owned(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::icaml::typecheck_closed;
    use crate::syntax::parse;
    use crate::translate::{lift_declarations, translate, RefPolicy, Strategy};

    fn emit(src: &str, s: Strategy, opts: &EmitOptions) -> CSourceUnit {
        let e = typecheck_closed(&parse(src).unwrap()).unwrap();
        let c = translate(&e, s, RefPolicy::Strict).unwrap();
        let c = lift_declarations(&c, s.dialect()).unwrap();
        emit_c(&c, s.dialect(), opts).unwrap()
    }

    #[test]
    fn final_running_example() {
        let u = emit("let x = ref 0 in x := !x + 1", Strategy::Final, &EmitOptions::default());
        assert_eq!(u.fragment(), "int x = 0; x = x + 1;");
        let u = emit(
            "let x = ref 0 in x := !x + 1",
            Strategy::Final,
            &EmitOptions {
                abbreviate_star_addr: false,
            },
        );
        assert_eq!(u.fragment(), "int x = 0; *&x = *&x + 1;");
    }

    #[test]
    fn declarations() {
        let u = emit(
            "let x = ref 0 in let y = x in y := 41; x := !x + 1",
            Strategy::Final,
            &EmitOptions::default(),
        );
        assert_eq!(u.fragment(), "int x = 0; int * const y = &x; *y = 41; x = x + 1;");
        let u = emit(
            "let x = ref 0 in x := !x + 1",
            Strategy::Ptr(crate::PtrVariant::Array1),
            &EmitOptions::default(),
        );
        assert_eq!(u.fragment(), "int z[1] = {0}; int * const x = z; *x = *x + 1;");
    }

    #[test]
    fn unread_variables_are_voided() {
        let u = emit("let x = 1 in 2", Strategy::Final, &EmitOptions::default());
        assert_eq!(u.fragment(), "const int x = 1; (void)x; 2;");
    }

    #[test]
    fn unit_values() {
        let u = emit(
            "let u = () in let r = ref u in r := (); !r",
            Strategy::Final,
            &EmitOptions::default(),
        );
        assert_eq!(u.result_format, ResultFormat::Unit);
        assert_eq!(u.fragment(), "const char u = 0; char r = u; r = 0; (void)r;");
    }

    #[test]
    fn unsequenced_operands_are_spilled() {
        let u = emit(
            "let x = ref 1 in (x := 5; !x) + !x",
            Strategy::Final,
            &EmitOptions::default(),
        );
        assert_eq!(u.fragment(), "int x = 1; int tmp; tmp = (x = 5, x), tmp + x;");
        let u = emit(
            "let x = ref false in x := (x := true; false); !x",
            Strategy::Final,
            &EmitOptions::default(),
        );
        assert_eq!(
            u.fragment(),
            "bool x = false; bool tmp; tmp = (x = true, false), x = tmp; x;"
        );
        let u = emit(
            "let x = ref 1 in let p = ref x in !p := (p := x; 5); !x",
            Strategy::Final,
            &EmitOptions::default(),
        );
        assert_eq!(
            u.fragment(),
            "int x = 1; int * p = &x; int * tmp; int tmp1; tmp = p, tmp1 = (p = &x, 5), *tmp = tmp1; x;"
        );
    }

    #[test]
    fn unlifted_input_is_rejected() {
        let e = typecheck_closed(&parse("1 + (let x = 2 in x)").unwrap()).unwrap();
        let c = translate(&e, Strategy::Final, RefPolicy::Strict).unwrap();
        let err = emit_c(&c, Dialect::CoreCE, &EmitOptions::default()).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::UnliftedDeclaration);
    }

    #[test]
    fn main_wrapper() {
        let u = emit("let x = ref 41 in incr x; !x", Strategy::Final, &EmitOptions::default());
        let src = wrap_main(&u);
        assert!(src.starts_with("#include <stdbool.h>\n#include <stdio.h>\n"));
        assert!(src.contains("    ++x;\n"));
        assert!(src.contains("printf(\"%d\\n\", (int)(x));"));
    }
}
