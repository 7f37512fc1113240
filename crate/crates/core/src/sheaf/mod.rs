//! Functors into finite sets: validation, limits, natural isomorphisms,
//! exhaustive enumeration up to isomorphism, constructibility and exodromy
//! counting. Right Kan extensions and recollement gluing live in submodules.

mod kan;
mod recollement;
mod search;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cat::{CatError, FinCat, Functor};
use crate::order::{FinPoset, MonotoneMap};
use crate::strat::{exit_path_of_stratified_poset, PresCat, StratError};

pub use kan::{right_kan_extension, KanExtension};
pub use recollement::{
    beck_chevalley_check, count_triple_classes, recollement_round_trip, BeckChevalley, Recollement,
    RecollementReport, Triple,
};
pub(crate) use search::Shape;

/// Default bound on the number of functors an enumeration may visit.
pub const DEFAULT_FUNCTOR_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SheafError {
    #[error("invalid set functor: {0}")]
    Invalid(String),
    #[error("functors live on different domains")]
    DomainMismatch,
    #[error("points {0:?} do not form a sieve of the base")]
    NotASieve(Vec<usize>),
    #[error("enumeration cap of {0} functors exceeded")]
    CapExceeded(usize),
    #[error("operation needs a finite category, not a presentation")]
    NeedsFinCat,
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Strat(#[from] StratError),
}

/// The indexing shape of a set functor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Cat(Arc<FinCat>),
    Pres(Arc<PresCat>),
}

impl Domain {
    pub fn object_count(&self) -> usize {
        match self {
            Domain::Cat(c) => c.object_count(),
            Domain::Pres(p) => p.objects.len(),
        }
    }

    /// Number of maps a functor on this domain carries.
    pub fn arrow_count(&self) -> usize {
        match self {
            Domain::Cat(c) => c.morphism_count(),
            Domain::Pres(p) => p.generators.len(),
        }
    }

    /// `(source, target)` of each carried map.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        match self {
            Domain::Cat(c) => (0..c.morphism_count()).map(|m| (c.source(m), c.target(m))).collect(),
            Domain::Pres(p) => p.generators.iter().map(|g| (g.source, g.target)).collect(),
        }
    }

    pub fn object_name(&self, x: usize) -> &str {
        match self {
            Domain::Cat(c) => c.object_name(x),
            Domain::Pres(p) => &p.objects[x],
        }
    }

    pub fn arrow_name(&self, m: usize) -> &str {
        match self {
            Domain::Cat(c) => &c.morphism(m).name,
            Domain::Pres(p) => &p.generators[m].name,
        }
    }

    pub fn as_cat(&self) -> Result<&Arc<FinCat>, SheafError> {
        match self {
            Domain::Cat(c) => Ok(c),
            Domain::Pres(_) => Err(SheafError::NeedsFinCat),
        }
    }
}

/// A functor into finite sets. The set at object `x` is `0..sizes[x]`;
/// `maps[m][e]` is the image of `e` under arrow `m` (every morphism for a
/// finite category, every generator for a presentation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunctor {
    domain: Domain,
    sizes: Vec<usize>,
    maps: Vec<Vec<usize>>,
}

impl fmt::Display for SetFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.sizes.len())
            .map(|x| format!("{}:{}", self.domain.object_name(x), self.sizes[x]))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl SetFunctor {
    pub fn new(domain: Domain, sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self, SheafError> {
        let f = SetFunctor { domain, sizes, maps };
        f.check()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(domain: Domain, sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Self {
        SetFunctor { domain, sizes, maps }
    }

    fn check(&self) -> Result<(), SheafError> {
        let bad = |msg: String| Err(SheafError::Invalid(msg));
        if self.sizes.len() != self.domain.object_count() {
            return bad(format!("{} sets for {} objects", self.sizes.len(), self.domain.object_count()));
        }
        if self.maps.len() != self.domain.arrow_count() {
            return bad(format!("{} maps for {} arrows", self.maps.len(), self.domain.arrow_count()));
        }
        for (m, (s, t)) in self.domain.arrows().into_iter().enumerate() {
            let map = &self.maps[m];
            if map.len() != self.sizes[s] || map.iter().any(|&v| v >= self.sizes[t]) {
                return bad(format!("map for {} is not a function", self.domain.arrow_name(m)));
            }
        }
        match &self.domain {
            Domain::Cat(c) => {
                for x in 0..c.object_count() {
                    let id = &self.maps[c.identity(x)];
                    if id.iter().enumerate().any(|(i, &v)| i != v) {
                        return bad(format!("identity of {} is not sent to the identity", c.object_name(x)));
                    }
                }
                for f in 0..c.morphism_count() {
                    for &g in c.out_of(c.target(f)) {
                        let h = c.composite(g, f);
                        if (0..self.sizes[c.source(f)]).any(|e| self.maps[g][self.maps[f][e]] != self.maps[h][e]) {
                            return bad(format!(
                                "{} ∘ {} is not respected",
                                c.morphism(g).name,
                                c.morphism(f).name
                            ));
                        }
                    }
                }
            }
            Domain::Pres(p) => {
                for (i, g) in p.generators.iter().enumerate() {
                    if p.inverted[i] && !is_bijection(&self.maps[i], self.sizes[g.target]) {
                        return bad(format!("inverted generator {} is not sent to a bijection", g.name));
                    }
                }
                for (l, r) in &p.relations {
                    for e in 0..self.sizes[l.start] {
                        if eval_word(&self.maps, &l.steps, e) != eval_word(&self.maps, &r.steps, e) {
                            return bad("a relation is not respected".into());
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant functor at a set of size `n` on a finite category.
    pub fn constant(cat: &Arc<FinCat>, n: usize) -> Self {
        let maps = (0..cat.morphism_count()).map(|_| (0..n).collect()).collect();
        SetFunctor::new_unchecked(Domain::Cat(cat.clone()), vec![n; cat.object_count()], maps)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, x: usize) -> usize {
        self.sizes[x]
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn map(&self, m: usize) -> &[usize] {
        &self.maps[m]
    }

    /// `F ∘ G` for `G` landing in the domain of `F`.
    pub fn pullback(&self, along: &Functor) -> Result<SetFunctor, SheafError> {
        let cat = self.domain.as_cat()?;
        if **along.target() != **cat {
            return Err(SheafError::DomainMismatch);
        }
        let src = along.source();
        let sizes = (0..src.object_count()).map(|x| self.sizes[along.object(x)]).collect();
        let maps = (0..src.morphism_count()).map(|m| self.maps[along.morphism(m)].clone()).collect();
        Ok(SetFunctor::new_unchecked(Domain::Cat(src.clone()), sizes, maps))
    }

    fn naturality_arrows(&self) -> Vec<(usize, usize)> {
        self.domain.arrows()
    }

    /// Componentwise bijections `F(x) -> G(x)` commuting with every arrow, if any.
    pub fn natural_iso(&self, other: &SetFunctor) -> Result<Option<Vec<Vec<usize>>>, SheafError> {
        if self.domain != other.domain {
            return Err(SheafError::DomainMismatch);
        }
        if self.sizes != other.sizes {
            return Ok(None);
        }
        let edges = self.naturality_arrows();
        let mut found = None;
        search::for_each_map(&edges, &self.maps, &other.maps, &self.sizes, &self.sizes, true, &|_, _, _| true, &mut |phi| {
            found = Some(phi.to_vec());
            true
        });
        Ok(found)
    }

    pub fn is_naturally_isomorphic(&self, other: &SetFunctor) -> Result<bool, SheafError> {
        Ok(self.natural_iso(other)?.is_some())
    }
}

pub(crate) fn is_bijection(map: &[usize], target_size: usize) -> bool {
    if map.len() != target_size {
        return false;
    }
    let mut hit = vec![false; target_size];
    map.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
}

pub(crate) fn eval_word(maps: &[Vec<usize>], word: &[usize], mut e: usize) -> usize {
    for &g in word {
        e = maps[g][e];
    }
    e
}

/// Compatible families `(x_c)` with `F(φ)(x_c) = x_{c'}` for every arrow, sorted.
pub fn limit_of_set_functor(f: &SetFunctor) -> Vec<Vec<usize>> {
    search::compatible_families(&f.naturality_arrows(), &f.maps, &f.sizes)
}

/// Natural-isomorphism classes of functors with every set of size at most `k`.
#[derive(Clone, Debug)]
pub struct IsoClasses {
    pub count: usize,
    /// Number of functors visited.
    pub functors: usize,
    pub representatives: Vec<SetFunctor>,
}

pub fn count_functor_iso_classes(domain: &Domain, k: usize, cap: usize) -> Result<IsoClasses, SheafError> {
    iso_classes_where(domain, k, cap, &|_| true)
}

/// Iso classes among the functors satisfying `keep`, which must be iso-invariant.
pub fn iso_classes_where(
    domain: &Domain,
    k: usize,
    cap: usize,
    keep: &dyn Fn(&SetFunctor) -> bool,
) -> Result<IsoClasses, SheafError> {
    let shape = Shape::of(domain);
    let edges = shape.gens.clone();
    let mut tester = search::IsoTester::new(&edges, shape.objects);
    let mut key = Vec::new();
    let mut buckets: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut reps: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut out = Vec::new();
    let functors = shape.enumerate(k, cap, &mut |sizes, gen_maps| {
        search::invariant_into(&edges, sizes, gen_maps, &mut key);
        if let Some(bucket) = buckets.get(&key) {
            // Classes are stored whether kept or not, and `keep` is iso-invariant.
            if bucket.iter().any(|&r| tester.exists(&reps[r], gen_maps, sizes)) {
                return;
            }
        }
        let f = shape.expand(domain, sizes, gen_maps);
        let r = reps.len();
        reps.push(gen_maps.to_vec());
        buckets.entry(key.clone()).or_default().push(r);
        if keep(&f) {
            out.push(f);
        }
    })?;
    Ok(IsoClasses {
        count: out.len(),
        functors,
        representatives: out,
    })
}

/// Every functor with sets of size at most `k`, in enumeration order.
pub fn all_functors(domain: &Domain, k: usize, cap: usize) -> Result<Vec<SetFunctor>, SheafError> {
    let shape = Shape::of(domain);
    let mut out = Vec::new();
    shape.enumerate(k, cap, &mut |sizes, gen_maps| out.push(shape.expand(domain, sizes, gen_maps)))?;
    Ok(out)
}

/// Whether `F` on the poset category of `X` inverts every relation inside a fiber of `s`.
pub fn is_constructible(s: &MonotoneMap, f: &SetFunctor) -> Result<bool, SheafError> {
    let cat = f.domain.as_cat()?;
    if cat.object_count() != s.source().len() {
        return Err(SheafError::DomainMismatch);
    }
    Ok((0..cat.morphism_count()).all(|m| {
        let (a, b) = (cat.source(m), cat.target(m));
        s.apply(a) != s.apply(b) || is_bijection(&f.maps[m], f.sizes[b])
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExodromyReport {
    /// Iso classes of constructible functors on `X`.
    pub constructible: usize,
    /// Iso classes of functors on the exit-path presentation.
    pub exit_path: usize,
    pub holds: bool,
}

pub fn exodromy_check(s: &MonotoneMap, k: usize, cap: usize) -> Result<ExodromyReport, SheafError> {
    ExodromyCounter::new(s.source(), k, cap)?.check(s)
}

/// Checks many stratifications of one poset, enumerating functors on it once.
///
/// Constructibility is invariant under natural isomorphism, so the constructible
/// classes are the constructible members of a full set of representatives.
#[derive(Clone, Debug)]
pub struct ExodromyCounter {
    source: FinPoset,
    k: usize,
    cap: usize,
    representatives: Vec<SetFunctor>,
}

impl ExodromyCounter {
    pub fn new(x: &FinPoset, k: usize, cap: usize) -> Result<Self, SheafError> {
        let classes = count_functor_iso_classes(&Domain::Cat(Arc::new(FinCat::from_poset(x))), k, cap)?;
        Ok(ExodromyCounter {
            source: x.clone(),
            k,
            cap,
            representatives: classes.representatives,
        })
    }

    pub fn check(&self, s: &MonotoneMap) -> Result<ExodromyReport, SheafError> {
        if *s.source() != self.source {
            return Err(SheafError::DomainMismatch);
        }
        let mut constructible = 0;
        for f in &self.representatives {
            constructible += is_constructible(s, f)? as usize;
        }
        let exit = exit_path_of_stratified_poset(s);
        let exit_path = count_functor_iso_classes(&Domain::Pres(Arc::new(exit)), self.k, self.cap)?.count;
        Ok(ExodromyReport {
            constructible,
            exit_path,
            holds: constructible == exit_path,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::MorphismData;
    use crate::group::FinGroup;

    fn cat(p: &FinPoset) -> Arc<FinCat> {
        Arc::new(FinCat::from_poset(p))
    }

    fn pseudo_circle() -> FinPoset {
        let names = ["a", "b", "u", "v"].iter().map(|s| s.to_string()).collect();
        FinPoset::from_relations(names, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    /// Orbit count of `∏ S_{n_x}` on all functors, by Burnside's lemma.
    fn burnside(domain: &Domain, k: usize) -> usize {
        let all = all_functors(domain, k, 1_000_000).unwrap();
        let arrows = domain.arrows();
        let mut by_sizes: HashMap<Vec<usize>, Vec<&SetFunctor>> = HashMap::new();
        for f in &all {
            by_sizes.entry(f.sizes.clone()).or_default().push(f);
        }
        let mut total = 0;
        for (sizes, fs) in by_sizes {
            let perms: Vec<Vec<Vec<usize>>> = sizes.iter().map(|&n| permutations(n)).collect();
            let mut group_order = 1;
            let mut fixed = 0;
            let mut idx = vec![0usize; sizes.len()];
            loop {
                let sigma: Vec<&Vec<usize>> = idx.iter().zip(&perms).map(|(&i, p)| &p[i]).collect();
                fixed += fs
                    .iter()
                    .filter(|f| {
                        arrows.iter().enumerate().all(|(m, &(s, t))| {
                            (0..sizes[s]).all(|e| f.maps[m][sigma[s][e]] == sigma[t][f.maps[m][e]])
                        })
                    })
                    .count();
                let mut j = 0;
                while j < idx.len() {
                    idx[j] += 1;
                    if idx[j] < perms[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == idx.len() {
                    break;
                }
                group_order += 1;
            }
            assert_eq!(fixed % group_order, 0);
            total += fixed / group_order;
        }
        total
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn validation_catches_broken_functors() {
        let c = cat(&FinPoset::chain(1));
        let m01 = (0..3).find(|&m| c.source(m) == 0 && c.target(m) == 1).unwrap();
        let mut maps = vec![vec![]; 3];
        maps[c.identity(0)] = vec![0];
        maps[c.identity(1)] = vec![0, 1];
        maps[m01] = vec![1];
        assert!(SetFunctor::new(Domain::Cat(c.clone()), vec![1, 2], maps.clone()).is_ok());
        maps[c.identity(1)] = vec![1, 0];
        assert!(SetFunctor::new(Domain::Cat(c.clone()), vec![1, 2], maps.clone()).is_err());
        maps[c.identity(1)] = vec![0, 1];
        maps[m01] = vec![2];
        assert!(SetFunctor::new(Domain::Cat(c), vec![1, 2], maps).is_err());
    }

    #[test]
    fn limits() {
        let c = cat(&FinPoset::chain(1));
        for f in all_functors(&Domain::Cat(c.clone()), 2, 1000).unwrap() {
            assert_eq!(limit_of_set_functor(&f).len(), f.size(0));
        }
        let bz2 = Arc::new(FinGroup::cyclic(2).to_cat());
        let swap = SetFunctor::new(Domain::Cat(bz2.clone()), vec![2], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(limit_of_set_functor(&swap).is_empty());
        let chain = cat(&FinPoset::chain(3));
        assert_eq!(limit_of_set_functor(&SetFunctor::constant(&chain, 3)).len(), 3);
        assert_eq!(limit_of_set_functor(&SetFunctor::constant(&bz2, 3)).len(), 3);
    }

    #[test]
    fn limit_over_a_discrete_category_is_a_product() {
        let d = Arc::new(FinCat::discrete(2));
        let f = SetFunctor::new(Domain::Cat(d), vec![2, 3], vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(limit_of_set_functor(&f).len(), 6);
    }

    #[test]
    fn iso_class_counts() {
        let pt = Domain::Cat(Arc::new(FinCat::terminal()));
        for k in 0..4 {
            assert_eq!(count_functor_iso_classes(&pt, k, 1000).unwrap().count, k + 1);
        }
        let one = Domain::Cat(cat(&FinPoset::chain(1)));
        assert_eq!(count_functor_iso_classes(&one, 1, 1000).unwrap().count, 3);
        let bz2 = Domain::Cat(Arc::new(FinGroup::cyclic(2).to_cat()));
        assert_eq!(count_functor_iso_classes(&bz2, 2, 1000).unwrap().count, 4);
    }

    #[test]
    fn iso_class_counts_match_burnside() {
        let domains = [
            Domain::Cat(cat(&FinPoset::chain(2))),
            Domain::Cat(cat(&pseudo_circle())),
            Domain::Cat(Arc::new(FinGroup::cyclic(3).to_cat())),
            Domain::Cat(Arc::new(FinGroup::symmetric(3).to_cat())),
        ];
        for d in &domains {
            for k in 0..=2 {
                assert_eq!(count_functor_iso_classes(d, k, 1_000_000).unwrap().count, burnside(d, k));
            }
        }
        let s3 = Domain::Cat(Arc::new(FinGroup::symmetric(3).to_cat()));
        // Actions of S3 on at most 3 points up to iso.
        assert_eq!(count_functor_iso_classes(&s3, 3, 1_000_000).unwrap().count, burnside(&s3, 3));
    }

    #[test]
    fn cap_is_enforced() {
        let d = Domain::Cat(cat(&FinPoset::chain(3)));
        assert_eq!(count_functor_iso_classes(&d, 3, 10).unwrap_err(), SheafError::CapExceeded(10));
    }

    #[test]
    fn natural_iso_is_found_and_checked() {
        let bz2 = Arc::new(FinGroup::cyclic(2).to_cat());
        let d = Domain::Cat(bz2);
        let a = SetFunctor::new(d.clone(), vec![2], vec![vec![0, 1], vec![1, 0]]).unwrap();
        let b = SetFunctor::new(d.clone(), vec![2], vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(a.natural_iso(&b).unwrap().is_none());
        let phi = a.natural_iso(&a).unwrap().unwrap();
        assert_eq!(phi, vec![vec![0, 1]]);
    }

    #[test]
    fn constructibility() {
        let one = FinPoset::chain(1);
        let c = cat(&one);
        let to_point = MonotoneMap::new(one.clone(), FinPoset::point(), vec![0, 0]).unwrap();
        let fs = all_functors(&Domain::Cat(c), 2, 1000).unwrap();
        let inj = fs.iter().find(|f| f.sizes == [1, 2]).unwrap();
        assert!(!is_constructible(&to_point, inj).unwrap());
        let bij = fs.iter().find(|f| f.sizes == [2, 2] && f.maps.iter().all(|m| is_bijection(m, 2))).unwrap();
        assert!(is_constructible(&to_point, bij).unwrap());
        let pc = pseudo_circle();
        let strat = MonotoneMap::new(pc.clone(), FinPoset::chain(1), vec![0, 0, 1, 1]).unwrap();
        for f in all_functors(&Domain::Cat(cat(&pc)), 1, 10_000).unwrap() {
            assert!(is_constructible(&strat, &f).unwrap());
        }
    }

    #[test]
    fn shared_counter_agrees_with_direct_counts() {
        let pc = pseudo_circle();
        let counter = ExodromyCounter::new(&pc, 2, DEFAULT_FUNCTOR_CAP).unwrap();
        let cat = Domain::Cat(cat(&pc));
        for s in crate::order::enumerate_stratifications(&pc) {
            let direct = iso_classes_where(&cat, 2, DEFAULT_FUNCTOR_CAP, &|f| is_constructible(&s, f).unwrap()).unwrap();
            let r = counter.check(&s).unwrap();
            assert_eq!(r.constructible, direct.count);
            assert!(r.holds);
        }
        let other = MonotoneMap::to_point(&FinPoset::chain(1));
        assert_eq!(counter.check(&other), Err(SheafError::DomainMismatch));
    }

    #[test]
    fn exodromy_examples() {
        let pc = pseudo_circle();
        let trivial = MonotoneMap::new(pc.clone(), FinPoset::point(), vec![0; 4]).unwrap();
        let r = exodromy_check(&trivial, 2, DEFAULT_FUNCTOR_CAP).unwrap();
        assert_eq!((r.constructible, r.exit_path), (4, 4));
        let one = FinPoset::chain(1);
        let to_point = MonotoneMap::new(one.clone(), FinPoset::point(), vec![0, 0]).unwrap();
        let r = exodromy_check(&to_point, 1, DEFAULT_FUNCTOR_CAP).unwrap();
        assert_eq!((r.constructible, r.exit_path), (2, 2));
        let id = MonotoneMap::new(one.clone(), one.clone(), vec![0, 1]).unwrap();
        let r = exodromy_check(&id, 1, DEFAULT_FUNCTOR_CAP).unwrap();
        assert_eq!((r.constructible, r.exit_path), (3, 3));
    }

    #[test]
    fn presentation_functors_respect_inversion() {
        let p = PresCat::new(
            vec!["a".into(), "b".into()],
            vec![MorphismData {
                name: "f".into(),
                source: 0,
                target: 1,
            }],
            vec![],
            vec![true],
            None,
        )
        .unwrap();
        let d = Domain::Pres(Arc::new(p));
        assert!(SetFunctor::new(d.clone(), vec![1, 2], vec![vec![0]]).is_err());
        assert_eq!(count_functor_iso_classes(&d, 2, 1000).unwrap().count, 3);
    }
}
