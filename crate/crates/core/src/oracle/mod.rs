//! Exact and heuristic Turán numbers for families drawn from
//! `{K_{l,t}, M_{s+1}}`, and the persistent table of solved instances.

mod local;
mod search;
mod table;

pub use local::{lower_bound_search, Effort, SearchOutcome};
pub use search::{
    exact_ex, exact_ex_by_x, exact_ex_restricted, Caps, Mode, OracleResult, SearchConfig,
};
pub use table::{table_fill, ExTable, TableEntry, TableError, TableKey};

use crate::forbidden;
use crate::graph::Graph;
use crate::matching;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("a family needs at least one forbidden graph")]
    EmptySpec,
    #[error("K_{{{l},{t}}} needs 1 <= l <= t")]
    BadKlt { l: usize, t: usize },
    #[error("n = {n} exceeds the cap {cap} for {spec}; raise it explicitly to search anyway")]
    CapExceeded { n: usize, cap: usize, spec: FamilySpec },
    #[error("restricted search needs both a K_{{l,t}} and a matching constraint")]
    NeedsBoth,
    #[error("x = {x} outside 0..={s}")]
    XOutOfRange { x: usize, s: usize },
}

/// The forbidden family: `K_{l,t}` and/or `M_{s+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    /// `(l, t)` with `l <= t`.
    pub forbid_klt: Option<(usize, usize)>,
    /// The matching number bound `s`; `M_{s+1}` is forbidden.
    pub forbid_matching: Option<usize>,
}

impl FamilySpec {
    pub fn new(klt: Option<(usize, usize)>, s: Option<usize>) -> Result<Self, OracleError> {
        let klt = klt.map(|(l, t)| if l <= t { (l, t) } else { (t, l) });
        if let Some((l, t)) = klt {
            if l == 0 {
                return Err(OracleError::BadKlt { l, t });
            }
        }
        if klt.is_none() && s.is_none() {
            return Err(OracleError::EmptySpec);
        }
        Ok(FamilySpec {
            forbid_klt: klt,
            forbid_matching: s,
        })
    }

    pub fn klt(l: usize, t: usize) -> Self {
        Self::new(Some((l, t)), None).expect("valid")
    }

    pub fn matching(s: usize) -> Self {
        Self::new(None, Some(s)).expect("valid")
    }

    pub fn both(l: usize, t: usize, s: usize) -> Self {
        Self::new(Some((l, t)), Some(s)).expect("valid")
    }

    /// Does `g` avoid every forbidden graph?
    pub fn admits(&self, g: &Graph) -> bool {
        self.forbid_klt.is_none_or(|(l, t)| forbidden::is_free(g, l, t))
            && self
                .forbid_matching
                .is_none_or(|s| matching::matching_number(g) <= s)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.forbid_klt, self.forbid_matching) {
            (Some((l, t)), Some(s)) => write!(f, "K_{{{l},{t}}}&M_{}", s + 1),
            (Some((l, t)), None) => write!(f, "K_{{{l},{t}}}"),
            (None, Some(s)) => write!(f, "M_{}", s + 1),
            (None, None) => write!(f, "(empty)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_normalises_and_prints() {
        let a = FamilySpec::new(Some((3, 2)), Some(2)).unwrap();
        assert_eq!(a.forbid_klt, Some((2, 3)));
        assert_eq!(a.to_string(), "K_{2,3}&M_3");
        assert_eq!(FamilySpec::new(None, None), Err(OracleError::EmptySpec));
        assert!(FamilySpec::new(Some((0, 3)), None).is_err());
        assert_eq!(FamilySpec::matching(1).to_string(), "M_2");
    }

    #[test]
    fn admits_examples() {
        let spec = FamilySpec::both(2, 2, 2);
        let mut friendship = Graph::complete(3);
        friendship = crate::constructions::splice(&friendship, 0, &Graph::complete(3), 0).unwrap();
        assert!(spec.admits(&friendship));
        assert!(!spec.admits(&Graph::cycle(4)));
        assert!(!FamilySpec::matching(1).admits(&Graph::path(4)));
    }
}
