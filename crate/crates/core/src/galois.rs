//! Builders for two-stratum and curve Galois categories at a finite
//! quotient level, the morphism dictionary, and strict localization and
//! normalization.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cat::{classify_fibration, comma, CatError, FibrationReport, FinCat, Functor};
use crate::decollage::{group_decollage, DecollageError, MorphismOrigin, Reassembly};
use crate::group::{commutator, FinGroup, GroupError, GroupHom, GroupPresentation, Letter};
use crate::order::{classify_subposet, FinPoset, MonotoneMap, PosetTower, SubposetKind};
use crate::strat::{LayeredCat, StratError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("curve needs at least two punctures")]
    TooFewPunctures,
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("functor is not compatible with the base posets")]
    NotBaseCompatible,
    #[error("unknown object {0}")]
    UnknownObject(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Decollage(#[from] DecollageError),
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// A two-stratum category over `[1]` together with its reassembly data.
#[derive(Clone, Debug)]
pub struct GaloisCat {
    pub layered: LayeredCat,
    pub reassembly: Reassembly,
}

fn finish(reassembly: Reassembly, names: Vec<String>) -> GaloisCat {
    let l = &reassembly.layered;
    let c = (**l.cat()).clone();
    let morphisms = c.morphisms().iter().map(|m| m.name.clone()).collect();
    let cat = Arc::new(c.renamed(names, morphisms));
    let layered = LayeredCat::new(cat, l.base().clone(), l.labels().to_vec()).expect("renaming keeps validity");
    let reassembly = Reassembly {
        layered: layered.clone(),
        ..reassembly
    };
    GaloisCat { layered, reassembly }
}

/// `B Gz <- B D -> B Gu` over `[1]`, reassembled. Objects are named `s` and `eta`.
pub fn build_two_stratum(
    gz: Arc<FinGroup>,
    gu: Arc<FinGroup>,
    to_z: GroupHom,
    to_u: GroupHom,
) -> Result<GaloisCat, GaloisError> {
    let base = FinPoset::chain(1);
    let d = group_decollage(&base, &[gz, gu], &BTreeMap::from([((0, 1), (to_z, to_u))]))?;
    d.validate()?;
    let r = d.reassemble()?;
    Ok(finish(r, vec!["s".into(), "eta".into()]))
}

/// `X_n`: `0, …, n-1` pairwise incomparable, all below `inf`.
pub fn curve_base(n: usize) -> FinPoset {
    let mut labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    labels.push("inf".into());
    let rel: Vec<(usize, usize)> = (0..n).map(|i| (i, n)).collect();
    FinPoset::from_relations(labels, &rel).expect("valid")
}

/// `p_n: X_{n+1} -> X_n`, sending `n` and `inf` to `inf`.
pub fn curve_base_bond(n: usize) -> MonotoneMap {
    let map = (0..=n + 1).map(|i| if i < n { i } else { n }).collect();
    MonotoneMap::new(curve_base(n + 1), curve_base(n), map).expect("monotone")
}

/// The tower `X_top -> … -> X_2` indexed by the chain on `top - 1` elements.
pub fn curve_base_tower(top: usize) -> PosetTower {
    assert!(top >= 2);
    let nodes: Vec<FinPoset> = (2..=top).map(curve_base).collect();
    let steps = (2..top).map(curve_base_bond).collect();
    PosetTower::chain(nodes, steps).expect("bonds compose")
}

/// Generator names `a1, b1, …, ag, bg, c1, …, c(n-1)`.
pub fn curve_generator_names(g: usize, n: usize) -> Vec<String> {
    let mut names = Vec::new();
    for j in 1..=g {
        names.push(format!("a{j}"));
        names.push(format!("b{j}"));
    }
    for i in 1..n {
        names.push(format!("c{i}"));
    }
    names
}

/// `γ_0 = [a1,b1]⋯[ag,bg] (c1⋯c(n-1))^-1` and `γ_i = c_i`.
pub fn curve_relators(g: usize, n: usize) -> Vec<Vec<Letter>> {
    let c = |i: usize| 2 * g + i - 1;
    let mut gamma0: Vec<Letter> = (0..g).flat_map(|j| commutator(2 * j, 2 * j + 1)).collect();
    gamma0.extend((1..n).rev().map(|i| (c(i), -1)));
    let mut out = vec![gamma0];
    out.extend((1..n).map(|i| vec![(c(i), 1)]));
    out
}

/// The van Kampen colimit of the curve décollage: gluing each link disk kills its `γ`.
pub fn curve_presentation(g: usize, n: usize) -> GroupPresentation {
    GroupPresentation {
        generators: curve_generator_names(g, n),
        relators: curve_relators(g, n),
    }
}

/// Genus, puncture count, and images of `a1, b1, …, c(n-1)` in a permutation group.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub genus: usize,
    pub punctures: usize,
    pub group: Arc<FinGroup>,
    /// Element indices in `group`.
    pub images: Vec<usize>,
}

impl CurveSpec {
    pub fn new(genus: usize, punctures: usize, group: Arc<FinGroup>, images: Vec<usize>) -> Result<Self, GaloisError> {
        if punctures < 2 {
            return Err(GaloisError::TooFewPunctures);
        }
        let expected = 2 * genus + punctures - 1;
        if images.len() != expected {
            return Err(GaloisError::ImageCount {
                expected,
                got: images.len(),
            });
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= group.order()) {
            return Err(GroupError::UnknownElement(bad).into());
        }
        Ok(CurveSpec {
            genus,
            punctures,
            group,
            images,
        })
    }

    /// The same quotient one level up the tower, with `c_n` sent to the identity.
    pub fn lift(&self) -> CurveSpec {
        let mut images = self.images.clone();
        images.push(0);
        CurveSpec {
            punctures: self.punctures + 1,
            images,
            ..self.clone()
        }
    }

    /// Images of `γ_0, …, γ_{n-1}` in the group.
    pub fn gamma_images(&self) -> Vec<usize> {
        curve_relators(self.genus, self.punctures)
            .iter()
            .map(|w| GroupPresentation::evaluate(&self.group, &self.images, w))
            .collect()
    }

    /// The image group `Q` generated by the generator images.
    pub fn image_group(&self) -> Arc<FinGroup> {
        let gens = self.images.iter().map(|&i| self.group.element(i).to_vec()).collect();
        Arc::new(FinGroup::new(self.group.degree(), gens).expect("permutations"))
    }
}

/// The curve category at the level of `spec`: points `x_i` over `i`, `B Q`
/// over `inf`, links `B ⟨q(γ_i)⟩`.
pub fn build_curve_level(spec: &CurveSpec) -> Result<GaloisCat, GaloisError> {
    let n = spec.punctures;
    let base = curve_base(n);
    let q = spec.image_group();
    let trivial = Arc::new(FinGroup::trivial());
    let mut points = vec![trivial.clone(); n];
    points.push(q.clone());
    let mut edges = BTreeMap::new();
    for (i, &gamma) in spec.gamma_images().iter().enumerate() {
        let perm = spec.group.element(gamma).to_vec();
        let cyc = Arc::new(FinGroup::new(spec.group.degree(), vec![perm])?);
        let to_point = GroupHom::new(cyc.clone(), trivial.clone(), vec![0])?;
        let to_q = GroupHom::inclusion(cyc, q.clone())?;
        edges.insert((i, n), (to_point, to_q));
    }
    let d = group_decollage(&base, &points, &edges)?;
    d.validate()?;
    let r = d.reassemble()?;
    let mut names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    names.push("inf".into());
    Ok(finish(r, names))
}

/// The functor between curve categories of two levels over the same
/// `(g, n)` induced by a homomorphism of image groups compatible with the
/// generator images.
pub fn curve_quotient_functor(
    from: &CurveSpec,
    to: &CurveSpec,
    hom: &GroupHom,
) -> Result<Functor, GaloisError> {
    let (a, b) = (build_curve_level(from)?, build_curve_level(to)?);
    let qb = hom.target();
    let n = from.punctures;
    let gamma_b = to.gamma_images();
    let ca = a.layered.cat();
    let cb = b.layered.cat();
    let morphisms = (0..ca.morphism_count())
        .map(|m| {
            let (x, y) = (ca.source(m), ca.target(m));
            match a.reassembly.origins[m] {
                MorphismOrigin::Stratum { point, morphism } if point == n => {
                    let target = hom.apply(morphism);
                    *cb.hom(n, n)
                        .iter()
                        .find(|&&t| matches!(b.reassembly.origins[t], MorphismOrigin::Stratum { morphism, .. } if morphism == target))
                        .expect("element")
                }
                MorphismOrigin::Stratum { .. } => cb.identity(x),
                MorphismOrigin::Link { b: elem, .. } => {
                    let image = hom.apply(elem);
                    let cyc = to.group.subgroup(&[gamma_b[x]]);
                    *cb.hom(x, y)
                        .iter()
                        .find(|&&t| match b.reassembly.origins[t] {
                            MorphismOrigin::Link { b: rep, .. } => {
                                // Same right coset of ⟨γ⟩ in the target image group.
                                let diff = qb.index_of(&perm_div(qb, rep, image)).expect("element");
                                cyc.iter().any(|&c| to.group.element(c) == qb.element(diff))
                            }
                            _ => false,
                        })
                        .expect("coset")
                }
            }
        })
        .collect();
    Ok(Functor::new(ca.clone(), cb.clone(), (0..ca.object_count()).collect(), morphisms)?)
}

/// `rep^-1 · image` as a permutation.
fn perm_div(g: &FinGroup, rep: usize, image: usize) -> Vec<usize> {
    g.element(g.mul(g.inv(rep), image)).to_vec()
}

/// Dictionary tags for a functor between layered categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalTags {
    pub image_kind: SubposetKind,
    pub immersion: bool,
    pub fibration: Option<FibrationReport>,
    pub finite_fibers: bool,
    pub radicial_like: bool,
    pub tags: Vec<&'static str>,
}

pub fn classify_gal_morphism(f: &Functor, from: &LayeredCat, to: &LayeredCat) -> Result<GalTags, GaloisError> {
    if **f.source() != **from.cat() || **f.target() != **to.cat() {
        return Err(GaloisError::NotBaseCompatible);
    }
    let mut base_map = vec![usize::MAX; from.base().len()];
    for x in 0..from.cat().object_count() {
        let (p, q) = (from.label(x), to.label(f.object(x)));
        if base_map[p] != usize::MAX && base_map[p] != q {
            return Err(GaloisError::NotBaseCompatible);
        }
        base_map[p] = q;
    }
    let h = to.h0();
    let mut image: Vec<usize> = (0..f.source().object_count()).map(|x| h.class_of[f.object(x)]).collect();
    image.sort_unstable();
    image.dedup();
    let image_kind = classify_subposet(&h.poset, &image).expect("classes of the target");
    let (src_class, _) = f.source().iso_classes();
    let mut preimages = vec![Vec::new(); h.representatives.len()];
    for x in 0..f.source().object_count() {
        preimages[h.class_of[f.object(x)]].push(src_class[x]);
    }
    let radicial_like = preimages.iter_mut().all(|v| {
        v.sort_unstable();
        v.dedup();
        v.len() <= 1
    });
    let immersion = f.is_fully_faithful() && radicial_like;
    let fibration = classify_fibration(f).ok();
    let finite_fibers = true;
    let mut tags = vec![image_kind.as_str()];
    if immersion {
        match image_kind {
            SubposetKind::Clopen => tags.push("clopen-immersion"),
            SubposetKind::Cosieve => tags.push("open-immersion"),
            SubposetKind::Sieve => tags.push("closed-immersion"),
            SubposetKind::Interval => tags.push("locally-closed-immersion"),
            SubposetKind::None => {}
        }
    }
    if let Some(r) = &fibration {
        if r.left {
            tags.push("left-fibration");
        }
        if r.right {
            tags.push("right-fibration");
        }
        if r.kan {
            tags.push("kan-fibration");
        }
        if finite_fibers {
            if r.left {
                tags.push("etale-like");
            }
            if r.right {
                tags.push("finite-like");
            }
            if r.kan {
                tags.push("finite-etale-like");
            }
        }
    }
    if radicial_like {
        tags.push("radicial-like");
    }
    Ok(GalTags {
        image_kind,
        immersion,
        fibration,
        finite_fibers,
        radicial_like,
        tags,
    })
}

#[derive(Clone, Debug)]
pub struct LocalizeReport {
    /// `Π_{x/}` over the up-set of the label of `x`.
    pub coslice: LayeredCat,
    /// `Π_{/x}` over the down-set of the label of `x`.
    pub slice: LayeredCat,
    pub weakly_initial: bool,
    pub weakly_terminal: bool,
}

pub fn localize_normalize(pi: &LayeredCat, x: usize) -> Result<LocalizeReport, GaloisError> {
    let c = pi.cat();
    if x >= c.object_count() {
        return Err(GaloisError::UnknownObject(x));
    }
    let p = pi.label(x);
    let id = Functor::identity(c);
    let point = Functor::constant_object(c, x);
    let build = |k: crate::cat::Comma, points: Vec<usize>, coslice: bool| {
        let labels = k
            .objects
            .iter()
            .map(|&(a, b, _)| {
                let obj = if coslice { b } else { a };
                points.iter().position(|&q| q == pi.label(obj)).expect("comparable")
            })
            .collect();
        LayeredCat::new(k.cat.clone(), pi.base().induced(&points), labels)
    };
    let coslice = build(comma(&point, &id)?, pi.base().up_set(p), true)?;
    let slice = build(comma(&id, &point)?, pi.base().down_set(p), false)?;
    let n = c.object_count();
    Ok(LocalizeReport {
        coslice,
        slice,
        weakly_initial: (0..n).all(|y| !c.hom(x, y).is_empty()),
        weakly_terminal: (0..n).all(|y| !c.hom(y, x).is_empty()),
    })
}

/// Whether some object has a morphism to every object.
pub fn has_weakly_initial(c: &FinCat) -> Option<usize> {
    (0..c.object_count()).find(|&x| (0..c.object_count()).all(|y| !c.hom(x, y).is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::are_equivalent_with;

    pub(crate) fn dvr() -> GaloisCat {
        let z2 = Arc::new(FinGroup::cyclic(2));
        let s3 = Arc::new(FinGroup::symmetric(3));
        let d = Arc::new(FinGroup::from_cycles(3, &["(1 2)"]).unwrap());
        let to_z = GroupHom::new(d.clone(), z2.clone(), vec![z2.generator(0)]).unwrap();
        let to_u = GroupHom::inclusion(d, s3.clone()).unwrap();
        build_two_stratum(z2, s3, to_z, to_u).unwrap()
    }

    fn z5_spec(g: usize, n: usize) -> CurveSpec {
        let z5 = Arc::new(FinGroup::cyclic(5));
        let mut images = vec![0; 2 * g + n - 1];
        if g > 0 {
            images[0] = z5.generator(0);
        }
        CurveSpec::new(g, n, z5, images).unwrap()
    }

    /// Index of ⟨q(γ)⟩ in the image group, by counting right cosets.
    fn coset_count(spec: &CurveSpec, gamma: usize) -> usize {
        let q = spec.image_group();
        let qg: Vec<usize> = (0..q.order()).map(|e| spec.group.index_of(q.element(e)).unwrap()).collect();
        let h = spec.group.subgroup(&[gamma]);
        let mut cosets: Vec<Vec<usize>> = qg
            .iter()
            .map(|&a| {
                let mut c: Vec<usize> = h.iter().map(|&x| spec.group.mul(a, x)).collect();
                c.sort_unstable();
                c
            })
            .collect();
        cosets.sort();
        cosets.dedup();
        cosets.len()
    }

    #[test]
    fn dvr_hom_count_and_strata() {
        let d = dvr();
        let c = d.layered.cat();
        assert_eq!(c.hom(0, 1).len(), 6);
        assert_eq!(d.layered.stratum(0).unwrap().cat.morphism_count(), 2);
        assert_eq!(d.layered.stratum(1).unwrap().cat.morphism_count(), 6);
        assert_eq!(d.layered.h0().poset.len(), 2);
    }

    #[test]
    fn two_stratum_counts() {
        // Trivial D: |Hom| = |Gz| |Gu|.
        let z2 = Arc::new(FinGroup::cyclic(2));
        let z3 = Arc::new(FinGroup::cyclic(3));
        let t = Arc::new(FinGroup::trivial());
        let g = build_two_stratum(
            z2.clone(),
            z3.clone(),
            GroupHom::new(t.clone(), z2.clone(), vec![]).unwrap(),
            GroupHom::new(t, z3.clone(), vec![]).unwrap(),
        )
        .unwrap();
        assert_eq!(g.layered.cat().hom(0, 1).len(), 6);
        // Both maps isomorphisms: equivalent to B(Z/2) × [1].
        let id = GroupHom::identity(&z2);
        let g = build_two_stratum(z2.clone(), z2.clone(), id.clone(), id).unwrap();
        let prod = z2.to_cat().product(&FinCat::from_poset(&FinPoset::chain(1)));
        assert!(are_equivalent_with(g.layered.cat(), &prod, 100_000, &|_, _| true).unwrap().is_some());
    }

    #[test]
    fn curve_level_hom_counts() {
        let spec = z5_spec(1, 2);
        let c = build_curve_level(&spec).unwrap();
        let cat = c.layered.cat();
        let gammas = spec.gamma_images();
        for i in 0..2 {
            assert_eq!(cat.hom(i, 2).len(), 5);
            assert_eq!(cat.hom(i, 2).len(), coset_count(&spec, gammas[i]));
        }
        assert_eq!(c.layered.h0().poset.len(), 3);
    }

    #[test]
    fn curve_level_with_nonabelian_quotient() {
        let s3 = Arc::new(FinGroup::symmetric(3));
        let (t, r) = (s3.generator(0), s3.generator(1));
        let spec = CurveSpec::new(1, 3, s3, vec![t, r, r, t]).unwrap();
        let c = build_curve_level(&spec).unwrap();
        let gammas = spec.gamma_images();
        for i in 0..3 {
            assert_eq!(c.layered.cat().hom(i, 3).len(), coset_count(&spec, gammas[i]));
        }
    }

    #[test]
    fn trivial_quotient_gives_the_base() {
        let t = Arc::new(FinGroup::trivial());
        let spec = CurveSpec::new(0, 2, t, vec![0]).unwrap();
        let c = build_curve_level(&spec).unwrap();
        let base = FinCat::from_poset(&curve_base(2));
        assert!(c.layered.cat().is_thin());
        assert!(are_equivalent_with(c.layered.cat(), &base, 1000, &|x, y| x == y).unwrap().is_some());
    }

    #[test]
    fn presentations() {
        let p = curve_presentation(1, 2);
        assert_eq!(p.generators, vec!["a1", "b1", "c1"]);
        assert_eq!(p.relators[0], vec![(0, 1), (1, 1), (0, -1), (1, -1), (2, -1)]);
        assert_eq!(p.relators[1], vec![(2, 1)]);
    }

    #[test]
    fn base_tower() {
        let t = curve_base_tower(4);
        let lim = t.limit();
        assert!(lim.poset.is_isomorphic(&curve_base(4)));
        assert_eq!(curve_base_bond(2).as_slice(), &[0, 1, 2, 2]);
    }

    #[test]
    fn lifted_spec_sends_new_puncture_to_identity() {
        let spec = z5_spec(1, 2);
        let up = spec.lift();
        assert_eq!(up.punctures, 3);
        let c = build_curve_level(&up).unwrap();
        // ⟨q(c2)⟩ is trivial, so Hom(x2, inf) is the whole image group.
        assert_eq!(c.layered.cat().hom(2, 3).len(), 5);
    }

    #[test]
    fn quotient_functoriality() {
        // Z/6 onto Z/3 via reduction; a1 -> 1, b1 -> 0, c1 -> 2 (generator squared).
        let z6 = Arc::new(FinGroup::cyclic(6));
        let z3 = Arc::new(FinGroup::cyclic(3));
        let g6 = z6.generator(0);
        let g3 = z3.generator(0);
        let from = CurveSpec::new(1, 2, z6.clone(), vec![g6, 0, z6.mul(g6, g6)]).unwrap();
        let to = CurveSpec::new(1, 2, z3.clone(), vec![g3, 0, z3.mul(g3, g3)]).unwrap();
        let hom = GroupHom::new(from.image_group(), to.image_group(), vec![to.image_group().generator(0), 0, {
            let q = to.image_group();
            q.mul(q.generator(0), q.generator(0))
        }])
        .unwrap();
        let f = curve_quotient_functor(&from, &to, &hom).unwrap();
        let cb = f.target();
        for i in 0..2 {
            let mut hit: Vec<usize> = f.source().hom(i, 2).iter().map(|&m| f.morphism(m)).collect();
            hit.sort_unstable();
            hit.dedup();
            assert_eq!(hit.len(), cb.hom(i, 2).len());
        }
    }

    #[test]
    fn dictionary_on_stratum_inclusions() {
        let d = dvr();
        let pi = &d.layered;
        for (point, kind, fib) in [(1usize, "cosieve", "left-fibration"), (0, "sieve", "right-fibration")] {
            let (sub, objects, morphisms) = pi.restrict(&[point]).unwrap();
            let f = Functor::new(sub.cat().clone(), pi.cat().clone(), objects, morphisms).unwrap();
            let tags = classify_gal_morphism(&f, &sub, pi).unwrap();
            assert!(tags.tags.contains(&kind), "{:?}", tags.tags);
            assert!(tags.tags.contains(&fib), "{:?}", tags.tags);
            assert!(tags.immersion);
            assert!(tags.image_kind.is_interval());
        }
    }

    #[test]
    fn dictionary_on_a_covering() {
        // Z/2 acting on two points by swapping, as an action groupoid.
        let z2 = FinGroup::cyclic(2);
        let act = FinCat::from_keys(
            vec!["p".into(), "q".into()],
            (0..2)
                .flat_map(|x| (0..2).map(move |g| ((x, g), crate::cat::MorphismData { name: format!("{g}@{x}"), source: x, target: (x + g) % 2 })))
                .collect(),
            |x| (x, 0),
            |g, f| (f.0, (g.1 + f.1) % 2),
        )
        .unwrap();
        let bz2 = Arc::new(z2.to_cat());
        let act = Arc::new(act);
        let f = Functor::new(act.clone(), bz2.clone(), vec![0, 0], (0..4).map(|m| m % 2).collect()).unwrap();
        let from = LayeredCat::new(act, FinPoset::point(), vec![0, 0]).unwrap();
        let to = LayeredCat::new(bz2, FinPoset::point(), vec![0]).unwrap();
        let tags = classify_gal_morphism(&f, &from, &to).unwrap();
        let r = tags.fibration.clone().unwrap();
        assert!(r.kan);
        assert_eq!(r.fiber_sizes, vec![2]);
        assert!(tags.tags.contains(&"finite-etale-like"));
    }

    #[test]
    fn localization_at_a_closed_curve_point() {
        let c = build_curve_level(&z5_spec(1, 2)).unwrap();
        let r = localize_normalize(&c.layered, 0).unwrap();
        assert_eq!(r.coslice.cat().object_count(), 6);
        assert_eq!(r.coslice.h0().poset, FinPoset::chain(1).with_labels(r.coslice.h0().poset.labels().to_vec()).unwrap());
        assert_eq!(has_weakly_initial(r.coslice.cat()), Some(0));
        assert!(!r.weakly_initial);
    }

    #[test]
    fn normalization_at_the_generic_point() {
        let d = dvr();
        let r = localize_normalize(&d.layered, 1).unwrap();
        let h = r.slice.h0();
        // Three classes of morphisms s -> eta under Z/2, and the class of eta itself.
        assert_eq!(h.poset.len(), 4);
        assert_eq!(h.poset.minimal_elements().len(), 3);
        assert_eq!(h.poset.maximal_elements().len(), 1);
        assert!(r.slice.cat().is_thin());
        assert!(r.weakly_terminal);
    }
}
