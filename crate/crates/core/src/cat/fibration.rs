use std::collections::HashMap;
use std::sync::Arc;

use super::{slice, coslice, CatError, Comma, FinCat, Functor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationReport {
    pub left: bool,
    pub right: bool,
    pub kan: bool,
    /// Strict fiber object count over each target object.
    pub fiber_sizes: Vec<usize>,
}

/// The functor `C_{/x} -> D_{/F x}` (or its coslice dual) induced by `F`.
fn induced(f: &Functor, from: &Comma, to: &Comma, over_source: bool) -> Functor {
    let obj_index: HashMap<(usize, usize, usize), usize> =
        to.objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mor_index: HashMap<(usize, usize, usize, usize), usize> = (0..to.cat.morphism_count())
        .map(|m| {
            let (g, d) = to.morphisms[m];
            ((to.cat.source(m), to.cat.target(m), g, d), m)
        })
        .collect();
    let map_obj = |&(c, d, beta): &(usize, usize, usize)| {
        if over_source {
            (f.object(c), d, f.morphism(beta))
        } else {
            (c, f.object(d), f.morphism(beta))
        }
    };
    let objects: Vec<usize> = from.objects.iter().map(|o| obj_index[&map_obj(o)]).collect();
    let morphisms = (0..from.cat.morphism_count())
        .map(|m| {
            let (g, d) = from.morphisms[m];
            let (g, d) = if over_source { (f.morphism(g), d) } else { (g, f.morphism(d)) };
            mor_index[&(objects[from.cat.source(m)], objects[from.cat.target(m)], g, d)]
        })
        .collect();
    Functor::new_unchecked(from.cat.clone(), to.cat.clone(), objects, morphisms)
}

fn slices_are_equivalent(f: &Functor, c: &Arc<FinCat>, d: &Arc<FinCat>, right: bool) -> bool {
    (0..c.object_count()).all(|x| {
        let (from, to) = if right {
            (slice(c, x), slice(d, f.object(x)))
        } else {
            (coslice(c, x), coslice(d, f.object(x)))
        };
        induced(f, &from, &to, right).is_equivalence()
    })
}

/// Right: every slice comparison is an equivalence; left: every coslice
/// comparison is; kan: both. Refuses functors that are not isofibrations.
pub fn classify_fibration(f: &Functor) -> Result<FibrationReport, CatError> {
    if let Some((object, iso)) = f.isofibration_failure() {
        return Err(CatError::NotIsofibration { object, iso });
    }
    let (c, d) = (f.source(), f.target());
    let right = slices_are_equivalent(f, c, d, true);
    let left = slices_are_equivalent(f, c, d, false);
    Ok(FibrationReport {
        left,
        right,
        kan: left && right,
        fiber_sizes: (0..d.object_count()).map(|y| f.strict_fiber(y).len()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{classify_subposet, FinPoset};

    fn poset_inclusion(p: &FinPoset, subset: &[usize]) -> Functor {
        let c = Arc::new(FinCat::from_poset(p));
        let sub = Arc::new(FinCat::from_poset(&p.induced(subset)));
        let objects = subset.to_vec();
        let morphisms = (0..sub.morphism_count())
            .map(|m| c.hom(objects[sub.source(m)], objects[sub.target(m)])[0])
            .collect();
        Functor::new(sub, c, objects, morphisms).unwrap()
    }

    #[test]
    fn sieve_and_cosieve_inclusions() {
        let p = FinPoset::chain(1);
        let r = classify_fibration(&poset_inclusion(&p, &[0])).unwrap();
        assert!(r.right && !r.left && !r.kan);
        assert_eq!(r.fiber_sizes, vec![1, 0]);
        let r = classify_fibration(&poset_inclusion(&p, &[1])).unwrap();
        assert!(r.left && !r.right);
    }

    #[test]
    fn collapse_is_neither() {
        let c = Arc::new(FinCat::from_poset(&FinPoset::chain(1)));
        let f = Functor::new(c, Arc::new(FinCat::terminal()), vec![0, 0], vec![0, 0, 0]).unwrap();
        let r = classify_fibration(&f).unwrap();
        assert!(!r.left && !r.right);
        assert_eq!(r.fiber_sizes, vec![2]);
    }

    #[test]
    fn non_isofibration_is_refused() {
        // Inclusion of one object of the codiscrete 2-object groupoid.
        let chaotic = Arc::new(
            FinCat::from_keys(
                vec!["a".into(), "b".into()],
                (0..2)
                    .flat_map(|s| {
                        (0..2).map(move |t| {
                            ((s, t), super::super::MorphismData { name: format!("{s}{t}"), source: s, target: t })
                        })
                    })
                    .collect(),
                |x| (x, x),
                |g, f| (f.0, g.1),
            )
            .unwrap(),
        );
        let pt = Arc::new(FinCat::terminal());
        let f = Functor::new(pt, chaotic.clone(), vec![0], vec![chaotic.identity(0)]).unwrap();
        assert!(matches!(classify_fibration(&f), Err(CatError::NotIsofibration { .. })));
    }

    #[test]
    fn right_fibration_inclusions_are_sieves() {
        for n in 1..=4 {
            for p in crate::order::labeled_posets(n) {
                for mask in 1u32..(1 << n) {
                    let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                    let kind = classify_subposet(&p, &subset).unwrap();
                    let r = classify_fibration(&poset_inclusion(&p, &subset)).unwrap();
                    assert_eq!(r.right, kind.is_sieve(), "{p:?} {subset:?}");
                    assert_eq!(r.left, kind.is_cosieve(), "{p:?} {subset:?}");
                }
            }
        }
    }
}
