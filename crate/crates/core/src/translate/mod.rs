//! ICaml to CoreC/CoreCE translations.
//!
//! | strategy   | target  | reference variables become            | restrictions            |
//! |------------|---------|---------------------------------------|-------------------------|
//! | naive      | CoreC   | mutable variables (wrong on aliasing) | `!`/`:=` on variables   |
//! | extant     | CoreC   | mutable variables                     | base cells, no aliasing |
//! | ptr        | CoreCE  | const pointers to fresh storage       | none                    |
//! | final      | CoreCE  | mutable variables, addressed by `&x`  | none (`ref` policy)     |

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::corecalc::{CExpr, CType, Dialect};
use crate::diag::{Diagnostic, DiagnosticKind, Span};
use crate::icaml::{IExpr, IType, Name};

mod extant;
mod lift;
mod mutable;
mod naive;
mod pointer;
mod rename;

pub use extant::translate_extant;
pub use lift::{is_lifted, lift_declarations};
pub use mutable::translate_final;
pub use naive::translate_naive;
pub use pointer::{translate_ptr, translate_ptr_with};
pub use rename::{alpha_rename_c, alpha_rename_icaml, is_reserved_c_name};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PtrVariant {
    /// `t z[1] = {e}; z`
    Array1,
    /// `t z = e; &z`
    Alloca,
}

/// What the final translation does with `ref e` outside `let x = ref e in`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RefPolicy {
    /// Reject with a `NonBindingRef` diagnostic.
    #[default]
    Strict,
    /// Allocate a fresh scalar and take its address.
    Alloca,
}

impl FromStr for RefPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<RefPolicy, String> {
        match s {
            "strict" => Ok(RefPolicy::Strict),
            "alloca" => Ok(RefPolicy::Alloca),
            _ => Err(format!("unknown ref policy `{}` (expected strict or alloca)", s)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Naive,
    Extant,
    Ptr(PtrVariant),
    Final,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Naive,
        Strategy::Extant,
        Strategy::Ptr(PtrVariant::Array1),
        Strategy::Ptr(PtrVariant::Alloca),
        Strategy::Final,
    ];

    pub fn dialect(self) -> Dialect {
        match self {
            Strategy::Naive | Strategy::Extant => Dialect::CoreC,
            Strategy::Ptr(_) | Strategy::Final => Dialect::CoreCE,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Naive => "naive",
            Strategy::Extant => "extant",
            Strategy::Ptr(PtrVariant::Array1) => "ptr-array",
            Strategy::Ptr(PtrVariant::Alloca) => "ptr-alloca",
            Strategy::Final => "final",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Strategy, String> {
        Strategy::ALL.into_iter().find(|st| st.name() == s).ok_or_else(|| {
            format!(
                "unknown strategy `{}` (expected naive, extant, ptr-array, ptr-alloca or final)",
                s
            )
        })
    }
}

/// Supplies names that occur nowhere in the program being translated.
///
/// Candidates are `base`, `base1`, `base2`, ... so the first fresh `z` of a
/// program that does not mention `z` is plain `z`.
#[derive(Clone, Debug, Default)]
pub struct FreshSupply {
    avoid: HashSet<Name>,
    issued: usize,
}

impl FreshSupply {
    pub fn avoiding<I: IntoIterator<Item = Name>>(names: I) -> FreshSupply {
        FreshSupply {
            avoid: names.into_iter().collect(),
            issued: 0,
        }
    }

    pub fn reserve(&mut self, name: &str) {
        self.avoid.insert(name.to_string());
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        let mut candidate = base.to_string();
        let mut n = 0usize;
        while self.avoid.contains(&candidate) || is_reserved_c_name(&candidate) {
            n += 1;
            candidate = format!("{}{}", base, n);
        }
        self.avoid.insert(candidate.clone());
        self.issued += 1;
        candidate
    }

    /// How many names this supply has handed out.
    pub fn issued(&self) -> usize {
        self.issued
    }
}

/// State threaded through the final translation: the set of variables
/// introduced by `let x = ref e in` that are in scope, the fresh-name
/// supply, and the policy for `ref` outside that shape.
#[derive(Clone, Debug, Default)]
pub struct TransContext {
    pub mutable_set: BTreeSet<Name>,
    pub fresh: FreshSupply,
    pub ref_policy: RefPolicy,
}

impl TransContext {
    pub fn for_program(e: &IExpr, ref_policy: RefPolicy) -> TransContext {
        TransContext {
            mutable_set: BTreeSet::new(),
            fresh: FreshSupply::avoiding(e.all_names()),
            ref_policy,
        }
    }
}

/// Rename binders apart, then translate. This is the entry point used by
/// the command-line tool and the differential tester.
pub fn translate(e: &IExpr, strategy: Strategy, policy: RefPolicy) -> Result<CExpr, Diagnostic> {
    let e = alpha_rename_icaml(e);
    match strategy {
        Strategy::Naive => translate_naive(&e),
        Strategy::Extant => translate_extant(&e),
        Strategy::Ptr(v) => Ok(translate_ptr(&e, v)),
        Strategy::Final => translate_final(&e, &mut TransContext::for_program(&e, policy)),
    }
}

/// Type translation of the final and pointer translations: `ref t` maps to
/// `ptr t`, everything else to itself.
pub fn final_type(t: &IType) -> CType {
    match t {
        IType::Unit => CType::Unit,
        IType::Base(b) => CType::Base(*b),
        IType::Ref(t) => CType::ptr(final_type(t)),
    }
}

/// Type translation of the naive translation: one `ref` is erased. Types
/// with nested references have no CoreC counterpart.
pub fn naive_type(t: &IType, span: Span) -> Result<CType, Diagnostic> {
    match t {
        IType::Unit => Ok(CType::Unit),
        IType::Base(b) => Ok(CType::Base(*b)),
        IType::Ref(inner) => match &**inner {
            IType::Ref(_) => Err(Diagnostic::new(
                DiagnosticKind::Untranslatable,
                span,
                format!("type {} has no CoreC counterpart", t),
            )),
            IType::Unit => Ok(CType::Unit),
            IType::Base(b) => Ok(CType::Base(*b)),
        },
    }
}
