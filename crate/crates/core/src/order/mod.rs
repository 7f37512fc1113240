//! Finite posets, their Alexandroff spaces, subdivisions, towers and
//! stratifications.

mod enumerate;
mod poset;
mod space;
mod tower;

use thiserror::Error;

pub use enumerate::{enumerate_stratifications, labeled_posets, posets_up_to_iso};
pub use poset::FinPoset;
pub use space::{alexandroff, specialization_poset, FiniteSpace};
pub use tower::{PosetTower, TowerLimit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("relation is not reflexive at element {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric on elements {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive along {0} <= {1} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("element index {0} out of range")]
    UnknownElement(usize),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("map is not order-preserving: {0} <= {1} but the images are not related")]
    NotMonotone(usize, usize),
    #[error("expected {expected} entries, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("space is not T0: points {0} and {1} have the same open neighbourhoods")]
    NotT0(usize, usize),
    #[error("family of opens is not a topology: {0}")]
    NotATopology(String),
    #[error("tower has no bond for {0} <= {1}")]
    MissingBond(usize, usize),
    #[error("tower bonds do not compose along {0} <= {1} <= {2}")]
    BondsDoNotCompose(usize, usize, usize),
}

/// An order-preserving map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    source: FinPoset,
    target: FinPoset,
    map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: FinPoset, target: FinPoset, map: Vec<usize>) -> Result<Self, OrderError> {
        if map.len() != source.len() {
            return Err(OrderError::ArityMismatch {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&b| b >= target.len()) {
            return Err(OrderError::UnknownElement(bad));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if source.leq(a, b) && !target.leq(map[a], map[b]) {
                    return Err(OrderError::NotMonotone(a, b));
                }
            }
        }
        Ok(MonotoneMap { source, target, map })
    }

    pub fn identity(p: &FinPoset) -> Self {
        MonotoneMap {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.len()).collect(),
        }
    }

    /// The unique map to the one-point poset.
    pub fn to_point(p: &FinPoset) -> Self {
        MonotoneMap {
            source: p.clone(),
            target: FinPoset::point(),
            map: vec![0; p.len()],
        }
    }

    /// Inclusion of the induced subposet on `subset` (taken in the given order).
    pub fn inclusion(p: &FinPoset, subset: &[usize]) -> Self {
        MonotoneMap {
            source: p.induced(subset),
            target: p.clone(),
            map: subset.to_vec(),
        }
    }

    pub fn source(&self) -> &FinPoset {
        &self.source
    }

    pub fn target(&self) -> &FinPoset {
        &self.target
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap, OrderError> {
        if self.target.len() != other.source.len() {
            return Err(OrderError::ArityMismatch {
                expected: self.target.len(),
                got: other.source.len(),
            });
        }
        Ok(MonotoneMap {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &b in &self.map {
            hit[b] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Fibres over each target element, in source index order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.target.len()];
        for (a, &b) in self.map.iter().enumerate() {
            out[b].push(a);
        }
        out
    }
}

/// Strength label of a subset of a poset; see [`classify_subposet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubposetKind {
    /// Both a sieve and a cosieve.
    Clopen,
    /// Down-closed.
    Sieve,
    /// Up-closed.
    Cosieve,
    /// Closed under betweenness.
    Interval,
    None,
}

impl SubposetKind {
    pub fn is_sieve(self) -> bool {
        matches!(self, SubposetKind::Clopen | SubposetKind::Sieve)
    }

    pub fn is_cosieve(self) -> bool {
        matches!(self, SubposetKind::Clopen | SubposetKind::Cosieve)
    }

    pub fn is_interval(self) -> bool {
        !matches!(self, SubposetKind::None)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SubposetKind::Clopen => "clopen",
            SubposetKind::Sieve => "sieve",
            SubposetKind::Cosieve => "cosieve",
            SubposetKind::Interval => "interval",
            SubposetKind::None => "none",
        }
    }
}

/// Reports the strongest of clopen, sieve/cosieve, interval or none.
pub fn classify_subposet(p: &FinPoset, subset: &[usize]) -> Result<SubposetKind, OrderError> {
    if let Some(&bad) = subset.iter().find(|&&a| a >= p.len()) {
        return Err(OrderError::UnknownElement(bad));
    }
    let sieve = p.is_sieve(subset);
    let cosieve = p.is_cosieve(subset);
    Ok(match (sieve, cosieve) {
        (true, true) => SubposetKind::Clopen,
        (true, false) => SubposetKind::Sieve,
        (false, true) => SubposetKind::Cosieve,
        (false, false) if p.is_interval(subset) => SubposetKind::Interval,
        _ => SubposetKind::None,
    })
}

/// The poset of nonempty chains ("strings") of a poset, ordered by inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub poset: FinPoset,
    /// `strings[i]` is the chain represented by element `i`, listed increasingly.
    pub strings: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn index_of(&self, string: &[usize]) -> Option<usize> {
        self.strings.binary_search_by(|s| s.as_slice().cmp(string)).ok()
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

/// `sd(P)`: strings of `P` in lexicographic order of their element indices.
pub fn subdivision(p: &FinPoset) -> Subdivision {
    let strings = p.chains();
    let labels = strings
        .iter()
        .map(|s| {
            let parts: Vec<&str> = s.iter().map(|&a| p.label(a)).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let n = strings.len();
    let leq = (0..n * n)
        .map(|k| {
            let (a, b) = (&strings[k / n], &strings[k % n]);
            a.iter().all(|x| b.contains(x))
        })
        .collect();
    Subdivision {
        poset: FinPoset::from_flat_unchecked(labels, leq),
        strings,
    }
}
