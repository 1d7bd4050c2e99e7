use std::fmt;

use thiserror::Error;

/// Source location of a node. Generated trees carry the default (all zero)
/// span.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(start: usize, end: usize, line: u32, col: u32) -> Span {
        Span { start, end, line, col }
    }

    /// Smallest span covering both; line/col come from whichever starts first.
    pub fn to(self, other: Span) -> Span {
        let (first, _) = if self.start <= other.start {
            (self, other)
        } else {
            (other, self)
        };
        Span {
            start: first.start,
            end: self.end.max(other.end),
            line: first.line,
            col: first.col,
        }
    }
}

/// Why the restricted (extant) translation refused a program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Restriction {
    /// A reference type other than `ref b` for a base type `b`.
    NonBaseRef,
    /// An ordinary `let` binding a value of reference type (aliasing).
    RefTypedLet,
    /// An ordinary `let` binding a non-base (unit) value.
    NonBaseLet,
    /// A reference-typed expression in a position no rule covers, e.g.
    /// `!(ref 0)` or a reference variable used as a plain value.
    NoRule,
}

impl Restriction {
    pub fn code(self) -> &'static str {
        match self {
            Restriction::NonBaseRef => "non-base-ref",
            Restriction::RefTypedLet => "ref-typed-let",
            Restriction::NonBaseLet => "non-base-let",
            Restriction::NoRule => "no-rule",
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    SyntaxError,
    UnboundVariable,
    TypeMismatch,
    /// A construct that is not part of the dialect being checked, or a
    /// malformed tree (address-of a non-variable, const without initializer).
    InvalidForm,
    /// Assignment to, or store through the address of, a const binder.
    ConstViolation,
    Untranslatable,
    RestrictionViolation(Restriction),
    NonBindingRef,
    UnliftedDeclaration,
    DuplicateName,
}

impl DiagnosticKind {
    pub fn name(self) -> &'static str {
        match self {
            DiagnosticKind::SyntaxError => "SyntaxError",
            DiagnosticKind::UnboundVariable => "UnboundVariable",
            DiagnosticKind::TypeMismatch => "TypeMismatch",
            DiagnosticKind::InvalidForm => "InvalidForm",
            DiagnosticKind::ConstViolation => "ConstViolation",
            DiagnosticKind::Untranslatable => "Untranslatable",
            DiagnosticKind::RestrictionViolation(_) => "RestrictionViolation",
            DiagnosticKind::NonBindingRef => "NonBindingRef",
            DiagnosticKind::UnliftedDeclaration => "UnliftedDeclaration",
            DiagnosticKind::DuplicateName => "DuplicateName",
        }
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A structured error. Its `Display` form is the single-line
/// `KIND:LINE:COL:MESSAGE` layout printed by the command-line tool.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind}:{}:{}:{}", span.line, span.col, self.full_message())]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            kind,
            span,
            message: message.into(),
        }
    }

    pub fn restriction(reason: Restriction, span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(DiagnosticKind::RestrictionViolation(reason), span, message)
    }

    pub fn restriction_reason(&self) -> Option<Restriction> {
        match self.kind {
            DiagnosticKind::RestrictionViolation(r) => Some(r),
            _ => None,
        }
    }

    fn full_message(&self) -> String {
        let msg = self.message.replace('\n', " ");
        match self.kind {
            DiagnosticKind::RestrictionViolation(r) => format!("{}: {}", r.code(), msg),
            _ => msg,
        }
    }
}
