//! Surface syntax for ICaml.
//!
//! ```text
//! expr  ::= "let" IDENT "=" expr "in" expr | seq
//! seq   ::= asn (";" asn)* [";" expr-starting-with-let]
//! asn   ::= add [":=" asn]
//! add   ::= unary ("+" unary)*
//! unary ::= "!" unary | "ref" unary | "incr" unary | atom
//! atom  ::= INT | "true" | "false" | "()" | IDENT | "(" expr ")"
//! ```
//!
//! `;` is right-nested, `let` extends as far right as possible. A `let` may
//! also follow the last `;` of a sequence without parentheses.

use crate::diag::{Diagnostic, DiagnosticKind, Span};
use crate::icaml::{IExpr, IExprKind, Lit, Op1, Op2};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Let,
    In,
    Ref,
    Incr,
    True,
    False,
    Eq,
    Semi,
    Assign,
    Plus,
    Bang,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{}`", n),
            Tok::Ident(x) => format!("identifier `{}`", x),
            Tok::Let => "`let`".into(),
            Tok::In => "`in`".into(),
            Tok::Ref => "`ref`".into(),
            Tok::Incr => "`incr`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Bang => "`!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, start: usize, line: u32, col: u32, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(
            DiagnosticKind::SyntaxError,
            Span::new(start, self.pos.max(start), line, col),
            msg,
        )
    }

    fn skip_trivia(&mut self) -> Result<(), Diagnostic> {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('(') if self.src[self.pos..].starts_with("(*") => {
                    let (start, line, col) = (self.pos, self.line, self.col);
                    self.bump();
                    self.bump();
                    let mut depth = 1;
                    while depth > 0 {
                        let rest = &self.src[self.pos..];
                        if rest.starts_with("(*") {
                            depth += 1;
                            self.bump();
                            self.bump();
                        } else if rest.starts_with("*)") {
                            depth -= 1;
                            self.bump();
                            self.bump();
                        } else if self.bump().is_none() {
                            return Err(self.error(start, line, col, "unterminated comment"));
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, Span), Diagnostic> {
        self.skip_trivia()?;
        let (start, line, col) = (self.pos, self.line, self.col);
        let c = match self.bump() {
            None => return Ok((Tok::Eof, Span::new(start, start, line, col))),
            Some(c) => c,
        };
        let tok = match c {
            '=' => Tok::Eq,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '!' => Tok::Bang,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ':' => {
                if self.peek_char() == Some('=') {
                    self.bump();
                    Tok::Assign
                } else {
                    return Err(self.error(start, line, col, "expected `:=`"));
                }
            }
            c if c.is_ascii_digit() => {
                while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
                let text = &self.src[start..self.pos];
                match text.parse::<i64>() {
                    Ok(n) => Tok::Int(n),
                    Err(_) => {
                        return Err(self.error(start, line, col, format!("integer literal `{}` out of range", text)))
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while self.peek_char().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.bump();
                }
                match &self.src[start..self.pos] {
                    "let" => Tok::Let,
                    "in" => Tok::In,
                    "ref" => Tok::Ref,
                    "incr" => Tok::Incr,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    x => Tok::Ident(x.to_string()),
                }
            }
            c => return Err(self.error(start, line, col, format!("unexpected character `{}`", c))),
        };
        Ok((tok, Span::new(start, self.pos, line, col)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    span: Span,
    prev_end: usize,
}

/// Parse a surface program into an unannotated tree.
pub fn parse(src: &str) -> Result<IExpr, Diagnostic> {
    let mut lexer = Lexer::new(src);
    let (tok, span) = lexer.next()?;
    let mut p = Parser {
        lexer,
        tok,
        span,
        prev_end: 0,
    };
    let e = p.expr()?;
    if p.tok != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<(), Diagnostic> {
        self.prev_end = self.span.end;
        let (tok, span) = self.lexer.next()?;
        self.tok = tok;
        self.span = span;
        Ok(())
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        Diagnostic::new(
            DiagnosticKind::SyntaxError,
            self.span,
            format!("expected {}, found {}", wanted, self.tok.describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<(), Diagnostic> {
        if self.tok == tok {
            self.advance()
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn close(&self, start: Span) -> Span {
        Span::new(start.start, self.prev_end.max(start.start), start.line, start.col)
    }

    fn node(&self, start: Span, kind: IExprKind) -> IExpr {
        IExpr::new(kind).with_span(self.close(start))
    }

    fn expr(&mut self) -> Result<IExpr, Diagnostic> {
        if self.tok == Tok::Let {
            self.let_expr()
        } else {
            self.seq()
        }
    }

    fn let_expr(&mut self) -> Result<IExpr, Diagnostic> {
        let start = self.span;
        self.advance()?;
        let name = match &self.tok {
            Tok::Ident(x) => x.clone(),
            _ => return Err(self.unexpected("identifier")),
        };
        self.advance()?;
        self.expect(Tok::Eq)?;
        let rhs = self.expr()?;
        self.expect(Tok::In)?;
        let body = self.expr()?;
        Ok(self.node(start, IExprKind::Let(name, Box::new(rhs), Box::new(body))))
    }

    fn seq(&mut self) -> Result<IExpr, Diagnostic> {
        let mut items = vec![(self.span, self.asn()?)];
        while self.tok == Tok::Semi {
            self.advance()?;
            let start = self.span;
            if self.tok == Tok::Let {
                items.push((start, self.let_expr()?));
                break;
            }
            items.push((start, self.asn()?));
        }
        let (_, mut acc) = items.pop().expect("at least one item");
        while let Some((start, e)) = items.pop() {
            acc = self.node(start, IExprKind::Seq(Box::new(e), Box::new(acc)));
        }
        Ok(acc)
    }

    fn asn(&mut self) -> Result<IExpr, Diagnostic> {
        let start = self.span;
        let lhs = self.add()?;
        if self.tok == Tok::Assign {
            self.advance()?;
            let rhs = self.asn()?;
            return Ok(self.node(start, IExprKind::App2(Op2::Assign, Box::new(lhs), Box::new(rhs))));
        }
        Ok(lhs)
    }

    fn add(&mut self) -> Result<IExpr, Diagnostic> {
        let start = self.span;
        let mut acc = self.unary()?;
        while self.tok == Tok::Plus {
            self.advance()?;
            let rhs = self.unary()?;
            acc = self.node(start, IExprKind::App2(Op2::Add, Box::new(acc), Box::new(rhs)));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IExpr, Diagnostic> {
        let start = self.span;
        let op = match self.tok {
            Tok::Bang => Op1::Deref,
            Tok::Ref => Op1::Ref,
            Tok::Incr => Op1::Incr,
            _ => return self.atom(),
        };
        self.advance()?;
        let e = self.unary()?;
        Ok(self.node(start, IExprKind::App1(op, Box::new(e))))
    }

    fn atom(&mut self) -> Result<IExpr, Diagnostic> {
        let start = self.span;
        let kind = match self.tok.clone() {
            Tok::Int(n) => IExprKind::Lit(Lit::Int(n)),
            Tok::True => IExprKind::Lit(Lit::Bool(true)),
            Tok::False => IExprKind::Lit(Lit::Bool(false)),
            Tok::Ident(x) => IExprKind::Var(x),
            Tok::LParen => {
                self.advance()?;
                if self.tok == Tok::RParen {
                    self.advance()?;
                    return Ok(self.node(start, IExprKind::Lit(Lit::Unit)));
                }
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            _ => return Err(self.unexpected("an expression")),
        };
        self.advance()?;
        Ok(self.node(start, kind))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> IExpr {
        parse(src).unwrap_or_else(|d| panic!("{}: {}", src, d)).strip()
    }

    #[test]
    fn running_example_tree() {
        let expected = IExpr::let_(
            "x",
            IExpr::new_ref(IExpr::int(0)),
            IExpr::assign(
                IExpr::var("x"),
                IExpr::add(IExpr::deref(IExpr::var("x")), IExpr::int(1)),
            ),
        );
        assert_eq!(p("let x = ref 0 in x := !x + 1"), expected);
    }

    #[test]
    fn addition_is_left_associative() {
        let expected = IExpr::add(IExpr::add(IExpr::int(1), IExpr::int(2)), IExpr::int(3));
        assert_eq!(p("1 + 2 + 3"), expected);
    }

    #[test]
    fn aliasing_example_scopes_sequence_under_inner_let() {
        let expected = IExpr::let_(
            "x",
            IExpr::new_ref(IExpr::int(0)),
            IExpr::let_(
                "y",
                IExpr::var("x"),
                IExpr::seq(
                    IExpr::assign(IExpr::var("y"), IExpr::int(41)),
                    IExpr::add(IExpr::deref(IExpr::var("x")), IExpr::int(1)),
                ),
            ),
        );
        assert_eq!(p("let x = ref 0 in let y = x in y := 41; !x + 1"), expected);
    }

    #[test]
    fn assignment_is_right_associative() {
        let e = p("a := b := c");
        match e.kind {
            IExprKind::App2(Op2::Assign, _, rhs) => {
                assert!(matches!(rhs.kind, IExprKind::App2(Op2::Assign, _, _)))
            }
            _ => panic!("{:?}", e),
        }
    }

    #[test]
    fn prefix_operators_bind_tightest() {
        assert_eq!(p("!x + 1"), IExpr::add(IExpr::deref(IExpr::var("x")), IExpr::int(1)));
        assert_eq!(p("ref ref 0"), IExpr::new_ref(IExpr::new_ref(IExpr::int(0))));
        assert_eq!(p("!(ref 0)"), IExpr::deref(IExpr::new_ref(IExpr::int(0))));
    }

    #[test]
    fn unit_and_comments() {
        assert_eq!(p("(* c (* nested *) *) ()"), IExpr::unit());
        assert_eq!(p("(1)"), IExpr::int(1));
    }

    #[test]
    fn let_after_semicolon() {
        let e = p("x := 1; let y = 2 in y");
        assert!(matches!(e.kind, IExprKind::Seq(_, ref b) if matches!(b.kind, IExprKind::Let(..))));
    }

    #[test]
    fn errors_carry_line_and_column() {
        let d = parse("let x = 1 in\n  x +").unwrap_err();
        assert_eq!(d.kind, DiagnosticKind::SyntaxError);
        assert_eq!((d.span.line, d.span.col), (2, 6));

        let d = parse("let = 3").unwrap_err();
        assert_eq!((d.span.line, d.span.col), (1, 5));

        let d = parse("1 2").unwrap_err();
        assert!(d.message.contains("end of input"));

        assert!(parse("99999999999999999999").is_err());
        assert!(parse("x : y").is_err());
        assert!(parse("(* open").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn spans_point_at_nodes() {
        let e = parse("let x = ref 0 in\nx").unwrap();
        match &e.kind {
            IExprKind::Let(_, rhs, body) => {
                assert_eq!((rhs.span.line, rhs.span.col), (1, 9));
                assert_eq!((body.span.line, body.span.col), (2, 1));
            }
            _ => unreachable!(),
        }
    }
}
