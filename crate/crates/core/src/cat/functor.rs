use std::fmt;
use std::sync::Arc;

use super::{CatError, FinCat};

/// A functor between finite categories, stored as object and morphism maps.
#[derive(Clone, PartialEq, Eq)]
pub struct Functor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    objects: Vec<usize>,
    morphisms: Vec<usize>,
}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Functor")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    WrongArity,
    OutOfRange,
    Endpoints { morphism: usize },
    Identity { object: usize },
    Composition { g: usize, f: usize },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FunctorViolation::WrongArity => write!(fm, "maps have the wrong length"),
            FunctorViolation::OutOfRange => write!(fm, "image index out of range"),
            FunctorViolation::Endpoints { morphism } => write!(fm, "morphism {morphism} lands between the wrong objects"),
            FunctorViolation::Identity { object } => write!(fm, "identity of {object} is not preserved"),
            FunctorViolation::Composition { g, f } => write!(fm, "composite {g}∘{f} is not preserved"),
        }
    }
}

impl Functor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self, CatError> {
        let f = Functor {
            source,
            target,
            objects,
            morphisms,
        };
        let bad = f.violations();
        if bad.is_empty() {
            Ok(f)
        } else {
            Err(CatError::InvalidFunctor(bad))
        }
    }

    pub(crate) fn new_unchecked(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Self {
        let f = Functor {
            source,
            target,
            objects,
            morphisms,
        };
        debug_assert!(f.violations().is_empty(), "{:?}", f.violations());
        f
    }

    pub fn violations(&self) -> Vec<FunctorViolation> {
        let (c, d) = (&*self.source, &*self.target);
        if self.objects.len() != c.object_count() || self.morphisms.len() != c.morphism_count() {
            return vec![FunctorViolation::WrongArity];
        }
        if self.objects.iter().any(|&x| x >= d.object_count())
            || self.morphisms.iter().any(|&f| f >= d.morphism_count())
        {
            return vec![FunctorViolation::OutOfRange];
        }
        let mut bad = Vec::new();
        for f in 0..c.morphism_count() {
            let ff = self.morphisms[f];
            if d.source(ff) != self.objects[c.source(f)] || d.target(ff) != self.objects[c.target(f)] {
                bad.push(FunctorViolation::Endpoints { morphism: f });
            }
        }
        if !bad.is_empty() {
            return bad;
        }
        for x in 0..c.object_count() {
            if self.morphisms[c.identity(x)] != d.identity(self.objects[x]) {
                bad.push(FunctorViolation::Identity { object: x });
            }
        }
        for f in 0..c.morphism_count() {
            for &g in c.out_of(c.target(f)) {
                let lhs = self.morphisms[c.composite(g, f)];
                if d.compose(self.morphisms[g], self.morphisms[f]) != Some(lhs) {
                    bad.push(FunctorViolation::Composition { g, f });
                }
            }
        }
        bad
    }

    pub fn identity(c: &Arc<FinCat>) -> Functor {
        Functor {
            source: c.clone(),
            target: c.clone(),
            objects: (0..c.object_count()).collect(),
            morphisms: (0..c.morphism_count()).collect(),
        }
    }

    /// The functor from the terminal category picking out `x`.
    pub fn constant_object(target: &Arc<FinCat>, x: usize) -> Functor {
        Functor {
            source: Arc::new(FinCat::terminal()),
            target: target.clone(),
            objects: vec![x],
            morphisms: vec![target.identity(x)],
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Functor) -> Result<Functor, CatError> {
        if *self.target != *other.source {
            return Err(CatError::Mismatch);
        }
        Ok(Functor {
            source: self.source.clone(),
            target: other.target.clone(),
            objects: self.objects.iter().map(|&x| other.objects[x]).collect(),
            morphisms: self.morphisms.iter().map(|&f| other.morphisms[f]).collect(),
        })
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    #[inline]
    pub fn object(&self, x: usize) -> usize {
        self.objects[x]
    }

    #[inline]
    pub fn morphism(&self, f: usize) -> usize {
        self.morphisms[f]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.objects
    }

    pub fn morphism_map(&self) -> &[usize] {
        &self.morphisms
    }

    pub fn is_faithful(&self) -> bool {
        self.hom_maps_all(|images, _| {
            let mut seen = images.to_vec();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_full(&self) -> bool {
        self.hom_maps_all(|images, target_size| {
            let mut seen = images.to_vec();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == target_size
        })
    }

    pub fn is_fully_faithful(&self) -> bool {
        self.hom_maps_all(|images, target_size| {
            let mut seen = images.to_vec();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == images.len() && seen.len() == target_size
        })
    }

    fn hom_maps_all(&self, check: impl Fn(&[usize], usize) -> bool) -> bool {
        let (c, d) = (&*self.source, &*self.target);
        for x in 0..c.object_count() {
            for y in 0..c.object_count() {
                let images: Vec<usize> = c.hom(x, y).iter().map(|&f| self.morphisms[f]).collect();
                let size = d.hom(self.objects[x], self.objects[y]).len();
                if !check(&images, size) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let d = &*self.target;
        let (class_of, classes) = d.iso_classes();
        let mut hit = vec![false; classes.len()];
        for &y in &self.objects {
            hit[class_of[y]] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_fully_faithful() && self.is_essentially_surjective()
    }

    /// Objects of the source lying strictly over `y`.
    pub fn strict_fiber(&self, y: usize) -> Vec<usize> {
        (0..self.objects.len()).filter(|&x| self.objects[x] == y).collect()
    }

    /// First `(object, iso)` pair where an isomorphism out of `F(object)` has
    /// no lift to an isomorphism out of `object`.
    pub fn isofibration_failure(&self) -> Option<(usize, usize)> {
        let (c, d) = (&*self.source, &*self.target);
        for x in 0..c.object_count() {
            let fx = self.objects[x];
            for &u in d.out_of(fx) {
                if !d.is_iso(u) {
                    continue;
                }
                let lifted = c.out_of(x).any(|&v| self.morphisms[v] == u && c.is_iso(v));
                if !lifted {
                    return Some((x, u));
                }
            }
        }
        None
    }

    pub fn is_isofibration(&self) -> bool {
        self.isofibration_failure().is_none()
    }
}
