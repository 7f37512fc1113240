//! Layered categories: finite categories with a conservative functor to a
//! finite poset.

mod pres;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cat::{pair_fiber, CatError, FinCat, Functor, MorphismData, PairFiber};
use crate::order::{FinPoset, MonotoneMap, OrderError};

pub use pres::{PresCat, PresError, Path};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StratError {
    #[error("not a layered category: {}", crate::cat::format_list(.0))]
    Invalid(Vec<LayeredViolation>),
    #[error("unknown base point {0}")]
    UnknownPoint(usize),
    #[error("base points {0} and {1} are not comparable in that order")]
    NotComparable(usize, usize),
    #[error("unknown object {0}")]
    UnknownObject(usize),
    #[error("base change map does not land in the base poset")]
    BaseMismatch,
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Pres(#[from] PresError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayeredViolation {
    WrongLabelCount { expected: usize, got: usize },
    LabelOutOfRange { object: usize },
    NotOverRelation { morphism: usize },
    NotInvertible { morphism: usize },
}

impl fmt::Display for LayeredViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LayeredViolation::WrongLabelCount { expected, got } => {
                write!(f, "expected {expected} object labels, got {got}")
            }
            LayeredViolation::LabelOutOfRange { object } => write!(f, "object {object} is labeled outside the base"),
            LayeredViolation::NotOverRelation { morphism } => {
                write!(f, "morphism {morphism} goes downward in the base")
            }
            LayeredViolation::NotInvertible { morphism } => {
                write!(f, "morphism {morphism} lies over an identity but is not invertible")
            }
        }
    }
}

/// A finite category `cat` with object labels in `base`, such that every
/// morphism lies over a relation and morphisms over identities are invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCat {
    cat: Arc<FinCat>,
    base: FinPoset,
    labels: Vec<usize>,
}

/// A full subcategory of a layered category together with the indices of its
/// objects and morphisms in the ambient category.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub cat: Arc<FinCat>,
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl Stratum {
    /// Local index of an ambient object.
    pub fn local(&self, x: usize) -> Option<usize> {
        self.objects.iter().position(|&o| o == x)
    }
}

/// The groupoid of morphisms over `p ≤ q` with its two endpoint functors.
#[derive(Clone, Debug)]
pub struct Link {
    pub p: usize,
    pub q: usize,
    pub cat: Arc<FinCat>,
    /// The ambient morphism that each object of the link is.
    pub arrows: Vec<usize>,
    /// Ambient `(σ, τ)` for each morphism of the link.
    pub squares: Vec<(usize, usize)>,
    pub source: Stratum,
    pub target: Stratum,
    pub s: Functor,
    pub t: Functor,
}

impl Link {
    /// Components of the iso-comma fiber over ambient objects `(x, y)`.
    pub fn hom_fiber(&self, x: usize, y: usize) -> Result<PairFiber, StratError> {
        let a = self.source.local(x).ok_or(StratError::UnknownObject(x))?;
        let b = self.target.local(y).ok_or(StratError::UnknownObject(y))?;
        Ok(pair_fiber(&self.s, &self.t, a, b)?)
    }

    /// Whether `(s, t)` is faithful.
    pub fn is_faithful(&self) -> bool {
        let l = &*self.cat;
        (0..l.object_count()).all(|a| {
            (0..l.object_count()).all(|b| {
                let hom = l.hom(a, b);
                let mut seen: Vec<(usize, usize)> = hom.iter().map(|&m| (self.s.morphism(m), self.t.morphism(m))).collect();
                seen.sort_unstable();
                seen.dedup();
                seen.len() == hom.len()
            })
        })
    }
}

/// Isomorphism classes of objects ordered by existence of morphisms.
#[derive(Clone, Debug)]
pub struct H0 {
    pub poset: FinPoset,
    pub class_of: Vec<usize>,
    /// Least object in each class.
    pub representatives: Vec<usize>,
    pub quotient: Functor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationReport {
    pub is_posetal: bool,
    pub is_1_truncated: bool,
    pub is_pi_finite: bool,
    /// Largest homFiber over all pairs of objects.
    pub max_hom_fiber: usize,
    /// Number of isomorphism classes in each stratum.
    pub stratum_components: Vec<usize>,
    /// Largest automorphism group.
    pub max_automorphisms: usize,
}

impl LayeredCat {
    pub fn new(cat: Arc<FinCat>, base: FinPoset, labels: Vec<usize>) -> Result<Self, StratError> {
        let bad = Self::violations(&cat, &base, &labels);
        if bad.is_empty() {
            Ok(LayeredCat { cat, base, labels })
        } else {
            Err(StratError::Invalid(bad))
        }
    }

    pub(crate) fn new_unchecked(cat: Arc<FinCat>, base: FinPoset, labels: Vec<usize>) -> Self {
        debug_assert!(Self::violations(&cat, &base, &labels).is_empty());
        LayeredCat { cat, base, labels }
    }

    pub fn violations(cat: &FinCat, base: &FinPoset, labels: &[usize]) -> Vec<LayeredViolation> {
        if labels.len() != cat.object_count() {
            return vec![LayeredViolation::WrongLabelCount {
                expected: cat.object_count(),
                got: labels.len(),
            }];
        }
        let mut bad: Vec<LayeredViolation> = (0..labels.len())
            .filter(|&x| labels[x] >= base.len())
            .map(|object| LayeredViolation::LabelOutOfRange { object })
            .collect();
        if !bad.is_empty() {
            return bad;
        }
        for f in 0..cat.morphism_count() {
            let (a, b) = (labels[cat.source(f)], labels[cat.target(f)]);
            if !base.leq(a, b) {
                bad.push(LayeredViolation::NotOverRelation { morphism: f });
            } else if a == b && !cat.is_iso(f) {
                bad.push(LayeredViolation::NotInvertible { morphism: f });
            }
        }
        bad
    }

    /// A poset viewed as layered over itself.
    pub fn over_itself(p: &FinPoset) -> Self {
        LayeredCat {
            cat: Arc::new(FinCat::from_poset(p)),
            base: p.clone(),
            labels: (0..p.len()).collect(),
        }
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn base(&self) -> &FinPoset {
        &self.base
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> usize {
        self.labels[x]
    }

    /// The stratification as a functor into the base viewed as a category.
    pub fn strat_functor(&self) -> Functor {
        let b = Arc::new(FinCat::from_poset(&self.base));
        let morphisms = (0..self.cat.morphism_count())
            .map(|f| b.hom(self.labels[self.cat.source(f)], self.labels[self.cat.target(f)])[0])
            .collect();
        Functor::new_unchecked(self.cat.clone(), b, self.labels.clone(), morphisms)
    }

    pub fn objects_over(&self, p: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&x| self.labels[x] == p).collect()
    }

    pub fn stratum(&self, p: usize) -> Result<Stratum, StratError> {
        if p >= self.base.len() {
            return Err(StratError::UnknownPoint(p));
        }
        let objects = self.objects_over(p);
        let (cat, morphisms) = self.cat.full_subcategory(&objects);
        Ok(Stratum {
            cat: Arc::new(cat),
            objects,
            morphisms,
        })
    }

    /// Full subcategory on the objects over `points`, layered over the induced subposet.
    pub fn restrict(&self, points: &[usize]) -> Result<(LayeredCat, Vec<usize>, Vec<usize>), StratError> {
        if let Some(&p) = points.iter().find(|&&p| p >= self.base.len()) {
            return Err(StratError::UnknownPoint(p));
        }
        let objects: Vec<usize> = (0..self.labels.len())
            .filter(|&x| points.contains(&self.labels[x]))
            .collect();
        let (cat, morphisms) = self.cat.full_subcategory(&objects);
        let labels = objects
            .iter()
            .map(|&x| points.iter().position(|&p| p == self.labels[x]).unwrap())
            .collect();
        let sub = LayeredCat::new_unchecked(Arc::new(cat), self.base.induced(points), labels);
        Ok((sub, objects, morphisms))
    }

    pub fn link(&self, p: usize, q: usize) -> Result<Link, StratError> {
        if p >= self.base.len() {
            return Err(StratError::UnknownPoint(p));
        }
        if q >= self.base.len() {
            return Err(StratError::UnknownPoint(q));
        }
        if !self.base.leq(p, q) {
            return Err(StratError::NotComparable(p, q));
        }
        let c = &*self.cat;
        let source = self.stratum(p)?;
        let target = self.stratum(q)?;
        let arrows: Vec<usize> = source
            .objects
            .iter()
            .flat_map(|&x| target.objects.iter().flat_map(move |&y| c.hom(x, y).iter().copied()))
            .collect();
        let mut morphisms = Vec::new();
        for (i, &l) in arrows.iter().enumerate() {
            for (j, &l2) in arrows.iter().enumerate() {
                for &sigma in c.hom(c.source(l), c.source(l2)) {
                    for &tau in c.hom(c.target(l), c.target(l2)) {
                        if c.composite(tau, l) == c.composite(l2, sigma) {
                            let name = format!("({},{})", c.morphism(sigma).name, c.morphism(tau).name);
                            morphisms.push(((i, j, sigma, tau), MorphismData { name, source: i, target: j }));
                        }
                    }
                }
            }
        }
        let squares: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.0 .2, m.0 .3)).collect();
        let names = arrows.iter().map(|&l| c.morphism(l).name.clone()).collect();
        let cat = Arc::new(FinCat::from_keys(
            names,
            morphisms,
            |i| (i, i, c.identity(c.source(arrows[i])), c.identity(c.target(arrows[i]))),
            |g, f| (f.0, g.1, c.composite(g.2, f.2), c.composite(g.3, f.3)),
        )?);
        let local = |st: &Stratum, amb: usize| st.morphisms.iter().position(|&m| m == amb).unwrap();
        let s = Functor::new_unchecked(
            cat.clone(),
            source.cat.clone(),
            arrows.iter().map(|&l| source.local(c.source(l)).unwrap()).collect(),
            squares.iter().map(|&(sg, _)| local(&source, sg)).collect(),
        );
        let t = Functor::new_unchecked(
            cat.clone(),
            target.cat.clone(),
            arrows.iter().map(|&l| target.local(c.target(l)).unwrap()).collect(),
            squares.iter().map(|&(_, tu)| local(&target, tu)).collect(),
        );
        Ok(Link {
            p,
            q,
            cat,
            arrows,
            squares,
            source,
            target,
            s,
            t,
        })
    }

    /// `π0` of the iso-comma fiber of the link over `(x, y)`.
    pub fn hom_fiber(&self, x: usize, y: usize) -> Result<PairFiber, StratError> {
        if x >= self.labels.len() {
            return Err(StratError::UnknownObject(x));
        }
        if y >= self.labels.len() {
            return Err(StratError::UnknownObject(y));
        }
        self.link(self.labels[x], self.labels[y])?.hom_fiber(x, y)
    }

    pub fn h0(&self) -> H0 {
        let c = &*self.cat;
        let (class_of, classes) = c.iso_classes();
        let representatives: Vec<usize> = classes.iter().map(|cl| cl[0]).collect();
        let k = classes.len();
        let poset = FinPoset::from_fn(k, |a, b| !c.hom(representatives[a], representatives[b]).is_empty())
            .and_then(|p| p.with_labels(representatives.iter().map(|&x| c.object_name(x).to_string()).collect()))
            .expect("conservative over a poset");
        let pc = Arc::new(FinCat::from_poset(&poset));
        let morphisms = (0..c.morphism_count())
            .map(|f| pc.hom(class_of[c.source(f)], class_of[c.target(f)])[0])
            .collect();
        debug_assert_eq!(pc.object_count(), k);
        let quotient = Functor::new_unchecked(self.cat.clone(), pc, class_of.clone(), morphisms);
        H0 {
            poset,
            class_of,
            representatives,
            quotient,
        }
    }

    pub fn truncation_report(&self) -> TruncationReport {
        let c = &*self.cat;
        let mut max_hom_fiber = 0;
        for p in 0..self.base.len() {
            for q in self.base.up_set(p) {
                let link = self.link(p, q).expect("comparable");
                for &x in &link.source.objects {
                    for &y in &link.target.objects {
                        let n = link.hom_fiber(x, y).expect("objects of the strata").len();
                        max_hom_fiber = max_hom_fiber.max(n);
                    }
                }
            }
        }
        let stratum_components = (0..self.base.len())
            .map(|p| self.stratum(p).expect("in range").cat.iso_classes().1.len())
            .collect();
        let max_automorphisms = (0..c.object_count()).map(|x| c.hom(x, x).len()).max().unwrap_or(0);
        TruncationReport {
            is_posetal: max_hom_fiber <= 1,
            is_1_truncated: true,
            is_pi_finite: true,
            max_hom_fiber,
            stratum_components,
            max_automorphisms,
        }
    }

    /// Base change along `g: Q -> P`: objects `(x, q)` with `label(x) = g(q)`.
    pub fn pullback(&self, g: &MonotoneMap) -> Result<LayeredCat, StratError> {
        if g.target() != &self.base {
            return Err(StratError::BaseMismatch);
        }
        let c = &*self.cat;
        let q = g.source();
        let mut objects = Vec::new();
        for b in 0..q.len() {
            for x in 0..c.object_count() {
                if self.labels[x] == g.apply(b) {
                    objects.push((x, b));
                }
            }
        }
        let mut morphisms = Vec::new();
        for (i, &(x, a)) in objects.iter().enumerate() {
            for (j, &(y, b)) in objects.iter().enumerate() {
                if !q.leq(a, b) {
                    continue;
                }
                for &f in c.hom(x, y) {
                    let name = format!("({},{}<={})", c.morphism(f).name, q.label(a), q.label(b));
                    morphisms.push(((f, a, b), MorphismData { name, source: i, target: j }));
                }
            }
        }
        let names = objects
            .iter()
            .map(|&(x, b)| format!("({},{})", c.object_name(x), q.label(b)))
            .collect();
        let cat = FinCat::from_keys(
            names,
            morphisms,
            |i| (c.identity(objects[i].0), objects[i].1, objects[i].1),
            |k2, k1| (c.composite(k2.0, k1.0), k1.1, k2.2),
        )?;
        let labels = objects.iter().map(|o| o.1).collect();
        Ok(LayeredCat::new_unchecked(Arc::new(cat), q.clone(), labels))
    }

    /// Presentation of the localization inverting morphisms over identities of `Q`.
    pub fn coarsen(&self, f: &MonotoneMap) -> Result<PresCat, StratError> {
        if f.source() != &self.base {
            return Err(StratError::BaseMismatch);
        }
        let c = &*self.cat;
        let generators: Vec<usize> = c.non_identities().collect();
        let mut gen_of = vec![usize::MAX; c.morphism_count()];
        for (i, &g) in generators.iter().enumerate() {
            gen_of[g] = i;
        }
        let data = generators
            .iter()
            .map(|&g| c.morphism(g).clone())
            .collect();
        let mut relations = Vec::new();
        for (i, &a) in generators.iter().enumerate() {
            for &b in c.out_of(c.target(a)) {
                if c.is_identity(b) {
                    continue;
                }
                let h = c.composite(b, a);
                let lhs = Path::new(c.source(a), vec![i, gen_of[b]]);
                let rhs = if c.is_identity(h) {
                    Path::new(c.source(a), vec![])
                } else {
                    Path::new(c.source(a), vec![gen_of[h]])
                };
                relations.push((lhs, rhs));
            }
        }
        let inverted = generators
            .iter()
            .map(|&g| f.apply(self.labels[c.source(g)]) == f.apply(self.labels[c.target(g)]))
            .collect();
        let labels = self.labels.iter().map(|&p| f.apply(p)).collect();
        Ok(PresCat::new(
            c.objects().to_vec(),
            data,
            relations,
            inverted,
            Some((f.target().clone(), labels)),
        )?)
    }
}

/// The exit-path presentation of a poset `X` stratified by `s: X -> P`.
pub fn exit_path_of_stratified_poset(s: &MonotoneMap) -> PresCat {
    LayeredCat::over_itself(s.source())
        .coarsen(s)
        .expect("the source of s is the base")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::are_equivalent_with;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn b_z2() -> Arc<FinCat> {
        Arc::new(FinCat::one_object(names(&["1", "e"]), 0, &[vec![0, 1], vec![1, 0]]).unwrap())
    }

    pub(crate) fn pseudo_circle() -> FinPoset {
        FinPoset::from_relations(names(&["a", "b", "u", "v"]), &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    /// The two-stratum example: closed stratum B(Z/2), open stratum B(S3),
    /// Hom = S3 with Z/2 acting through (12).
    fn dvr_by_hand() -> LayeredCat {
        let s3: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let mul = |a: usize, b: usize| -> usize {
            let (p, q) = (s3[a], s3[b]);
            let r = [p[q[0]], p[q[1]], p[q[2]]];
            s3.iter().position(|&x| x == r).unwrap()
        };
        // Keys: (0, g) endo of closed point with g in {0,1} ⊂ S3 via (12) = index 1;
        // (1, h) endo of open point; (2, h) maps closed -> open.
        let mut mors = Vec::new();
        for g in [0usize, 1] {
            mors.push(((0u8, g), MorphismData { name: format!("z{g}"), source: 0, target: 0 }));
        }
        for h in 0..6 {
            mors.push(((1u8, h), MorphismData { name: format!("u{h}"), source: 1, target: 1 }));
        }
        for h in 0..6 {
            mors.push(((2u8, h), MorphismData { name: format!("l{h}"), source: 0, target: 1 }));
        }
        let cat = FinCat::from_keys(
            names(&["s", "eta"]),
            mors,
            |x| (x as u8, 0),
            |g, f| match (g.0, f.0) {
                (0, 0) | (1, 1) => (g.0, mul(g.1, f.1)),
                (1, 2) => (2, mul(g.1, f.1)),
                (2, 0) => (2, mul(g.1, f.1)),
                _ => unreachable!(),
            },
        )
        .unwrap();
        LayeredCat::new(Arc::new(cat), FinPoset::chain(1), vec![0, 1]).unwrap()
    }

    #[test]
    fn idempotent_is_rejected() {
        let m = FinCat::one_object(names(&["1", "e"]), 0, &[vec![0, 1], vec![1, 1]]).unwrap();
        let err = LayeredCat::new(Arc::new(m), FinPoset::point(), vec![0]).unwrap_err();
        assert_eq!(err, StratError::Invalid(vec![LayeredViolation::NotInvertible { morphism: 1 }]));
        assert!(LayeredCat::new(b_z2(), FinPoset::point(), vec![0]).is_ok());
    }

    #[test]
    fn pseudo_circle_over_chain() {
        let pc = Arc::new(FinCat::from_poset(&pseudo_circle()));
        let l = LayeredCat::new(pc, FinPoset::chain(1), vec![0, 0, 1, 1]).unwrap();
        let st = l.stratum(1).unwrap();
        assert_eq!(st.cat.object_count(), 2);
        assert_eq!(st.cat.morphism_count(), 2);
        let link = l.link(0, 1).unwrap();
        assert_eq!(link.cat.object_count(), 4);
        assert_eq!(link.cat.morphism_count(), 4);
        assert!(matches!(l.link(1, 0), Err(StratError::NotComparable(1, 0))));
        assert!(l.truncation_report().is_posetal);
    }

    #[test]
    fn empty_stratum() {
        let l = LayeredCat::new(Arc::new(FinCat::terminal()), FinPoset::chain(1), vec![1]).unwrap();
        assert_eq!(l.stratum(0).unwrap().cat.object_count(), 0);
        assert!(matches!(l.stratum(2), Err(StratError::UnknownPoint(2))));
    }

    #[test]
    fn diagonal_link_is_the_stratum() {
        let l = LayeredCat::new(b_z2(), FinPoset::point(), vec![0]).unwrap();
        let link = l.link(0, 0).unwrap();
        let st = l.stratum(0).unwrap();
        assert!(are_equivalent_with(&link.cat, &st.cat, 100_000, &|_, _| true).unwrap().is_some());
        assert!(link.s.is_equivalence() && link.t.is_equivalence());
        assert_eq!(l.hom_fiber(0, 0).unwrap().len(), 2);
        let r = l.truncation_report();
        assert!(!r.is_posetal);
        assert_eq!(r.max_hom_fiber, 2);
    }

    #[test]
    fn two_stratum_link_and_hom_fiber() {
        let l = dvr_by_hand();
        let link = l.link(0, 1).unwrap();
        assert_eq!(link.cat.components().len(), 1);
        assert_eq!(link.cat.hom(0, 0).len(), 2);
        assert!(link.is_faithful());
        let fiber = l.hom_fiber(0, 1).unwrap();
        assert_eq!(fiber.len(), 6);
        assert_eq!(fiber.len(), l.cat().hom(0, 1).len());
        assert_eq!(l.stratum(0).unwrap().cat.morphism_count(), 2);
        assert_eq!(l.h0().poset, FinPoset::chain(1).with_labels(names(&["s", "eta"])).unwrap());
        assert!(!l.truncation_report().is_posetal);
    }

    #[test]
    fn h0_of_a_groupoid_and_of_a_poset() {
        let l = LayeredCat::new(b_z2(), FinPoset::point(), vec![0]).unwrap();
        assert_eq!(l.h0().poset.len(), 1);
        let p = pseudo_circle();
        let h = LayeredCat::over_itself(&p).h0();
        assert_eq!(h.poset, p);
        assert_eq!(h.representatives, vec![0, 1, 2, 3]);
    }

    #[test]
    fn pullbacks() {
        let l = dvr_by_hand();
        let id = l.pullback(&MonotoneMap::identity(l.base())).unwrap();
        assert!(are_equivalent_with(id.cat(), l.cat(), 100_000, &|x, y| id.label(x) == l.label(y))
            .unwrap()
            .is_some());
        let closed = l.pullback(&MonotoneMap::inclusion(l.base(), &[0])).unwrap();
        assert!(are_equivalent_with(closed.cat(), &b_z2(), 100_000, &|_, _| true).unwrap().is_some());
        // Composite base change agrees with iterated base change.
        let p = FinPoset::chain(2);
        let g = MonotoneMap::new(p.clone(), FinPoset::chain(1), vec![0, 1, 1]).unwrap();
        let h = MonotoneMap::new(FinPoset::chain(1), p.clone(), vec![0, 2]).unwrap();
        let once = l.pullback(&h.then(&g).unwrap()).unwrap();
        let twice = l.pullback(&g).unwrap().pullback(&h).unwrap();
        assert!(are_equivalent_with(once.cat(), twice.cat(), 100_000, &|x, y| once.label(x) == twice.label(y))
            .unwrap()
            .is_some());
    }

    #[test]
    fn coarsen_along_identity_and_to_point() {
        let p = FinPoset::chain(1);
        let l = LayeredCat::over_itself(&p);
        let pres = l.coarsen(&MonotoneMap::identity(&p)).unwrap();
        assert!(pres.inverted.iter().all(|&i| !i));
        let realized = pres.realize(1000).unwrap();
        assert!(are_equivalent_with(&realized, l.cat(), 1000, &|_, _| true).unwrap().is_some());
        let pres = exit_path_of_stratified_poset(&MonotoneMap::to_point(&p));
        assert_eq!(pres.inverted, vec![true]);
        assert_eq!(pres.components().len(), 1);
    }

    #[test]
    fn realize_round_trip_on_two_stratum_example() {
        let l = dvr_by_hand();
        let mut pres = l.coarsen(&MonotoneMap::identity(l.base())).unwrap();
        assert_eq!(pres.inverted.iter().filter(|&&i| i).count(), 1 + 5);
        // The stratum automorphisms are already invertible in the table.
        pres.inverted.fill(false);
        let realized = pres.realize(1000).unwrap();
        assert_eq!(realized.morphism_count(), l.cat().morphism_count());
        assert!(are_equivalent_with(&realized, l.cat(), 100_000, &|_, _| true).unwrap().is_some());
    }
}
