use std::sync::Arc;

use super::{CatError, FinCat, Functor};

/// An equivalence `forward: C -> D` with a chosen quasi-inverse and the
/// components of the natural isomorphisms `unit: x -> GF x`, `counit: FG y -> y`.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub forward: Functor,
    pub backward: Functor,
    pub unit: Vec<usize>,
    pub counit: Vec<usize>,
}

const UNSET: usize = usize::MAX;

struct Search<'a> {
    c: &'a FinCat,
    d: &'a FinCat,
    admissible: &'a dyn Fn(usize, usize) -> bool,
    cap: usize,
    steps: usize,
    objects: Vec<usize>,
    images: Vec<usize>,
    trail: Vec<usize>,
    d_class: Vec<usize>,
    d_classes: usize,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), CatError> {
        self.steps += 1;
        if self.steps > self.cap {
            Err(CatError::CapExceeded(self.cap))
        } else {
            Ok(())
        }
    }

    fn objects_dfs(&mut self, x: usize) -> Result<bool, CatError> {
        let (c, d) = (self.c, self.d);
        if x == c.object_count() {
            let mut hit = vec![false; self.d_classes];
            for &y in &self.objects {
                hit[self.d_class[y]] = true;
            }
            if !hit.iter().all(|&h| h) {
                return Ok(false);
            }
            return self.morphisms_start();
        }
        for y in 0..d.object_count() {
            if !(self.admissible)(x, y) {
                continue;
            }
            self.tick()?;
            let sizes_match = (0..x).all(|x2| {
                let y2 = self.objects[x2];
                c.hom(x2, x).len() == d.hom(y2, y).len() && c.hom(x, x2).len() == d.hom(y, y2).len()
            }) && c.hom(x, x).len() == d.hom(y, y).len();
            if !sizes_match {
                continue;
            }
            self.objects.push(y);
            if self.objects_dfs(x + 1)? {
                return Ok(true);
            }
            self.objects.pop();
        }
        Ok(false)
    }

    fn morphisms_start(&mut self) -> Result<bool, CatError> {
        self.images = vec![UNSET; self.c.morphism_count()];
        self.trail.clear();
        for x in 0..self.c.object_count() {
            let id = self.c.identity(x);
            let target = self.d.identity(self.objects[x]);
            if !self.assign(id, target) {
                return Ok(false);
            }
        }
        self.morphisms_dfs(0)
    }

    fn morphisms_dfs(&mut self, from: usize) -> Result<bool, CatError> {
        let Some(f) = (from..self.c.morphism_count()).find(|&f| self.images[f] == UNSET) else {
            return Ok(true);
        };
        let (x, y) = (self.c.source(f), self.c.target(f));
        let candidates = self.d.hom(self.objects[x], self.objects[y]).to_vec();
        for u in candidates {
            self.tick()?;
            let mark = self.trail.len();
            if self.assign(f, u) && self.morphisms_dfs(f + 1)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let f = self.trail.pop().unwrap();
            self.images[f] = UNSET;
        }
    }

    /// Sets `F(f) = u` and propagates through composites; false on conflict.
    fn assign(&mut self, f: usize, u: usize) -> bool {
        let (c, d) = (self.c, self.d);
        let mut queue = vec![(f, u)];
        while let Some((f, u)) = queue.pop() {
            if self.images[f] != UNSET {
                if self.images[f] != u {
                    return false;
                }
                continue;
            }
            let (x, y) = (c.source(f), c.target(f));
            if c.hom(x, y).iter().any(|&f2| self.images[f2] == u) {
                return false;
            }
            self.images[f] = u;
            self.trail.push(f);
            for &g in c.out_of(y) {
                let ig = self.images[g];
                if ig != UNSET {
                    queue.push((c.composite(g, f), d.composite(ig, u)));
                }
            }
            for &g in c.into_obj(x) {
                let ig = self.images[g];
                if ig != UNSET {
                    queue.push((c.composite(f, g), d.composite(u, ig)));
                }
            }
        }
        true
    }
}

/// Searches for an equivalence `C -> D`. Functors are tried lexicographically
/// by object map, then by morphism map; the first fully faithful and
/// essentially surjective one is returned.
pub fn are_equivalent(c: &FinCat, d: &FinCat, cap: usize) -> Result<Option<Equivalence>, CatError> {
    are_equivalent_with(c, d, cap, &|_, _| true)
}

/// As [`are_equivalent`], restricted to object maps with `admissible(x, F x)`.
pub fn are_equivalent_with(
    c: &FinCat,
    d: &FinCat,
    cap: usize,
    admissible: &dyn Fn(usize, usize) -> bool,
) -> Result<Option<Equivalence>, CatError> {
    let (d_class, classes) = d.iso_classes();
    let mut search = Search {
        c,
        d,
        admissible,
        cap,
        steps: 0,
        objects: Vec::with_capacity(c.object_count()),
        images: Vec::new(),
        trail: Vec::new(),
        d_class,
        d_classes: classes.len(),
    };
    if !search.objects_dfs(0)? {
        return Ok(None);
    }
    let c_arc = Arc::new(c.clone());
    let d_arc = Arc::new(d.clone());
    let forward = Functor::new_unchecked(c_arc.clone(), d_arc.clone(), search.objects, search.images);
    Ok(Some(quasi_inverse(forward)))
}

/// Builds a quasi-inverse of a functor known to be an equivalence.
fn quasi_inverse(forward: Functor) -> Equivalence {
    let c = forward.source().clone();
    let d = forward.target().clone();
    let mut back_obj = Vec::with_capacity(d.object_count());
    let mut counit = Vec::with_capacity(d.object_count());
    for y in 0..d.object_count() {
        let (x, iso) = (0..c.object_count())
            .find_map(|x| d.first_iso(forward.object(x), y).map(|i| (x, i)))
            .expect("essentially surjective");
        back_obj.push(x);
        counit.push(iso);
    }
    // G(h) is the unique u with F(u) = ε_{y'}^{-1} ∘ h ∘ ε_y.
    let preimage = |x: usize, x2: usize, v: usize| -> usize {
        *c.hom(x, x2)
            .iter()
            .find(|&&u| forward.morphism(u) == v)
            .expect("fully faithful")
    };
    let back_mor: Vec<usize> = (0..d.morphism_count())
        .map(|h| {
            let (y, y2) = (d.source(h), d.target(h));
            let inv = d.inverse(counit[y2]).expect("iso");
            let v = d.composite(inv, d.composite(h, counit[y]));
            preimage(back_obj[y], back_obj[y2], v)
        })
        .collect();
    let unit: Vec<usize> = (0..c.object_count())
        .map(|x| {
            let fx = forward.object(x);
            let inv = d.inverse(counit[fx]).expect("iso");
            preimage(x, back_obj[fx], inv)
        })
        .collect();
    let backward = Functor::new_unchecked(d.clone(), c.clone(), back_obj, back_mor);
    Equivalence {
        forward,
        backward,
        unit,
        counit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FinPoset;

    fn b_z2() -> FinCat {
        FinCat::one_object(vec!["1".into(), "e".into()], 0, &[vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn z3() -> FinCat {
        let mul: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        FinCat::one_object(vec!["0".into(), "1".into(), "2".into()], 0, &mul).unwrap()
    }

    #[test]
    fn identity_is_found_first() {
        let c = FinCat::from_poset(&FinPoset::chain(2));
        let eq = are_equivalent(&c, &c, 10_000).unwrap().unwrap();
        assert_eq!(eq.forward.object_map(), &[0, 1, 2]);
        assert_eq!(eq.forward.morphism_map(), (0..6).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn different_chains_are_not_equivalent() {
        let a = FinCat::from_poset(&FinPoset::chain(2));
        let b = FinCat::from_poset(&FinPoset::chain(1));
        assert!(are_equivalent(&a, &b, 10_000).unwrap().is_none());
    }

    #[test]
    fn groups_of_different_order() {
        assert!(are_equivalent(&b_z2(), &z3(), 10_000).unwrap().is_none());
        let eq = are_equivalent(&z3(), &z3(), 10_000).unwrap().unwrap();
        assert!(eq.forward.is_equivalence());
    }

    #[test]
    fn codiscrete_groupoid_is_equivalent_to_point() {
        // Two objects, exactly one morphism between any pair.
        let chaotic = FinCat::from_keys(
            vec!["a".into(), "b".into()],
            (0..2)
                .flat_map(|s| (0..2).map(move |t| ((s, t), super::super::MorphismData { name: format!("{s}{t}"), source: s, target: t })))
                .collect(),
            |x| (x, x),
            |g, f| (f.0, g.1),
        )
        .unwrap();
        let eq = are_equivalent(&chaotic, &FinCat::terminal(), 1000).unwrap().unwrap();
        assert!(eq.backward.is_equivalence());
        let back = are_equivalent(&FinCat::terminal(), &chaotic, 1000).unwrap().unwrap();
        assert_eq!(back.forward.object_map(), &[0]);
        // Unit and counit components are isomorphisms with the right endpoints.
        for y in 0..2 {
            let e = back.counit[y];
            assert!(chaotic.is_iso(e));
            assert_eq!(chaotic.target(e), y);
        }
    }

    #[test]
    fn cap_is_reported() {
        let a = z3();
        assert_eq!(are_equivalent(&a, &a, 1).unwrap_err(), CatError::CapExceeded(1));
    }

    #[test]
    fn admissibility_restricts_object_maps() {
        let c = FinCat::discrete(2);
        let eq = are_equivalent_with(&c, &c, 1000, &|x, y| x != y).unwrap().unwrap();
        assert_eq!(eq.forward.object_map(), &[1, 0]);
        assert!(are_equivalent_with(&c, &c, 1000, &|_, y| y == 0).unwrap().is_none());
    }
}
