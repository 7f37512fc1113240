use std::collections::HashMap;

use super::{CatError, Functor};

/// Components of the iso-comma fiber of `(s, t): L -> A × B` over `(a, b)`,
/// where `A` and `B` are groupoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFiber {
    /// `(ℓ, α: s(ℓ) -> a, β: t(ℓ) -> b)`.
    pub elements: Vec<(usize, usize, usize)>,
    /// Component index of each element, numbered by least member.
    pub component: Vec<usize>,
    /// Least element of each component.
    pub representatives: Vec<usize>,
}

impl PairFiber {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn element_index(&self, e: (usize, usize, usize)) -> Option<usize> {
        self.elements.iter().position(|&x| x == e)
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn pair_fiber(s: &Functor, t: &Functor, a: usize, b: usize) -> Result<PairFiber, CatError> {
    if **s.source() != **t.source() {
        return Err(CatError::Mismatch);
    }
    let (l, ca, cb) = (s.source(), s.target(), t.target());
    if a >= ca.object_count() {
        return Err(CatError::UnknownObject(a));
    }
    if b >= cb.object_count() {
        return Err(CatError::UnknownObject(b));
    }
    let mut elements = Vec::new();
    for x in 0..l.object_count() {
        for &alpha in ca.hom(s.object(x), a) {
            for &beta in cb.hom(t.object(x), b) {
                elements.push((x, alpha, beta));
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> =
        elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..elements.len()).collect();
    for (i, &(x, alpha, beta)) in elements.iter().enumerate() {
        for &lam in l.out_of(x) {
            let (Some(si), Some(ti)) = (ca.inverse(s.morphism(lam)), cb.inverse(t.morphism(lam))) else {
                continue;
            };
            let j = index[&(l.target(lam), ca.composite(alpha, si), cb.composite(beta, ti))];
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut component = vec![usize::MAX; elements.len()];
    let mut representatives = Vec::new();
    let mut slot = vec![usize::MAX; elements.len()];
    for i in 0..elements.len() {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = representatives.len();
            representatives.push(i);
        }
        component[i] = slot[r];
    }
    Ok(PairFiber {
        elements,
        component,
        representatives,
    })
}
