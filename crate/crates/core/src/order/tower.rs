use std::collections::BTreeMap;

use super::{FinPoset, MonotoneMap, OrderError};

/// A finite diagram of finite posets indexed by a finite poset.
///
/// For `i <= j` in the index the bond goes from the finer stage `nodes[j]` to
/// the coarser stage `nodes[i]`, so a chain index `0 < 1 < 2` describes
/// `P_2 -> P_1 -> P_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetTower {
    index: FinPoset,
    nodes: Vec<FinPoset>,
    bonds: BTreeMap<(usize, usize), MonotoneMap>,
}

/// The limit of a tower together with the compatible family behind each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLimit {
    pub poset: FinPoset,
    pub families: Vec<Vec<usize>>,
}

impl PosetTower {
    /// `bonds` must hold a map for every strict relation `i < j` of the index.
    pub fn new(
        index: FinPoset,
        nodes: Vec<FinPoset>,
        bonds: BTreeMap<(usize, usize), MonotoneMap>,
    ) -> Result<Self, OrderError> {
        if nodes.len() != index.len() {
            return Err(OrderError::ArityMismatch {
                expected: index.len(),
                got: nodes.len(),
            });
        }
        for (i, j) in index.strict_relations() {
            let bond = bonds.get(&(i, j)).ok_or(OrderError::MissingBond(i, j))?;
            if bond.source() != &nodes[j] || bond.target() != &nodes[i] {
                return Err(OrderError::MissingBond(i, j));
            }
        }
        if let Some(&(i, j)) = bonds.keys().find(|&&(i, j)| !index.lt(i, j)) {
            return Err(OrderError::MissingBond(i, j));
        }
        let tower = PosetTower { index, nodes, bonds };
        for (i, j) in tower.index.strict_relations() {
            for k in 0..tower.index.len() {
                if !tower.index.lt(j, k) {
                    continue;
                }
                let direct = tower.bond(i, k);
                let via = tower.bond(j, k).then(tower.bond(i, j))?;
                if direct.as_slice() != via.as_slice() {
                    return Err(OrderError::BondsDoNotCompose(i, j, k));
                }
            }
        }
        Ok(tower)
    }

    /// A chain `nodes[n-1] -> ... -> nodes[0]` from consecutive bonds
    /// (`steps[i]: nodes[i+1] -> nodes[i]`); longer bonds are composites.
    pub fn chain(nodes: Vec<FinPoset>, steps: Vec<MonotoneMap>) -> Result<Self, OrderError> {
        let n = nodes.len();
        if steps.len() + 1 != n.max(1) {
            return Err(OrderError::ArityMismatch {
                expected: n.saturating_sub(1),
                got: steps.len(),
            });
        }
        let mut bonds = BTreeMap::new();
        for i in 0..n {
            let mut acc = MonotoneMap::identity(&nodes[i]);
            for j in i + 1..n {
                // acc: nodes[j-1] -> nodes[i]
                acc = steps[j - 1].then(&acc)?;
                bonds.insert((i, j), acc.clone());
            }
        }
        Self::new(FinPoset::chain(n.saturating_sub(1)), nodes, bonds)
    }

    /// The tower with the same poset at every index and identity bonds.
    pub fn constant(index: FinPoset, p: FinPoset) -> Self {
        let bonds = index
            .strict_relations()
            .into_iter()
            .map(|r| (r, MonotoneMap::identity(&p)))
            .collect();
        PosetTower {
            nodes: vec![p; index.len()],
            index,
            bonds,
        }
    }

    pub fn index(&self) -> &FinPoset {
        &self.index
    }

    pub fn nodes(&self) -> &[FinPoset] {
        &self.nodes
    }

    pub fn bonds(&self) -> &BTreeMap<(usize, usize), MonotoneMap> {
        &self.bonds
    }

    /// Bond `nodes[j] -> nodes[i]` for `i < j`.
    pub fn bond(&self, i: usize, j: usize) -> &MonotoneMap {
        &self.bonds[&(i, j)]
    }

    /// The tower restricted to a subset of the index.
    pub fn restrict(&self, subset: &[usize]) -> PosetTower {
        let index = self.index.induced(subset);
        let nodes = subset.iter().map(|&i| self.nodes[i].clone()).collect();
        let mut bonds = BTreeMap::new();
        for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                if self.index.lt(i, j) {
                    bonds.insert((a, b), self.bond(i, j).clone());
                }
            }
        }
        PosetTower { index, nodes, bonds }
    }

    /// Compatible families `(p_i)` with `bond(i, j)(p_j) = p_i`, ordered componentwise.
    pub fn limit(&self) -> TowerLimit {
        let m = self.index.len();
        let mut families = Vec::new();
        let mut current = Vec::with_capacity(m);
        self.extend(&mut current, &mut families);
        families.sort();
        let labels = families
            .iter()
            .map(|f| {
                let parts: Vec<&str> = f
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| self.nodes[i].label(p))
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let k = families.len();
        let leq = (0..k * k)
            .map(|idx| {
                let (a, b) = (&families[idx / k], &families[idx % k]);
                (0..m).all(|i| self.nodes[i].leq(a[i], b[i]))
            })
            .collect();
        TowerLimit {
            poset: FinPoset::from_flat_unchecked(labels, leq),
            families,
        }
    }

    fn extend(&self, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = current.len();
        if i == self.index.len() {
            out.push(current.clone());
            return;
        }
        for p in 0..self.nodes[i].len() {
            let ok = (0..i).all(|j| {
                if self.index.lt(j, i) {
                    self.bond(j, i).apply(p) == current[j]
                } else if self.index.lt(i, j) {
                    self.bond(i, j).apply(current[j]) == p
                } else {
                    true
                }
            });
            if ok {
                current.push(p);
                self.extend(current, out);
                current.pop();
            }
        }
    }
}

impl TowerLimit {
    /// Projection onto the limit of the tower restricted to `subset`.
    pub fn project(&self, subset: &[usize], restricted: &TowerLimit) -> Option<Vec<usize>> {
        self.families
            .iter()
            .map(|f| {
                let g: Vec<usize> = subset.iter().map(|&i| f[i]).collect();
                restricted.families.iter().position(|h| *h == g)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::posets_up_to_iso;

    fn curve_base(n: usize) -> FinPoset {
        let mut labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        labels.push("inf".into());
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, n)).collect();
        FinPoset::from_relations(labels, &pairs).unwrap()
    }

    fn curve_bond(n: usize) -> MonotoneMap {
        // X_{n+1} -> X_n: i -> i for i < n, n and inf -> inf
        let map = (0..=n + 1).map(|i| if i < n { i } else { n }).collect();
        MonotoneMap::new(curve_base(n + 1), curve_base(n), map).unwrap()
    }

    #[test]
    fn constant_tower_limit_is_the_node() {
        for p in posets_up_to_iso(4) {
            let t = PosetTower::constant(FinPoset::chain(2), p.clone());
            assert!(t.limit().poset.is_isomorphic(&p));
            let vee = FinPoset::from_relations(
                vec!["lo".into(), "a".into(), "b".into()],
                &[(0, 1), (0, 2)],
            )
            .unwrap();
            let t = PosetTower::constant(vee, p.clone());
            assert!(t.limit().poset.is_isomorphic(&p));
            // Over a disconnected index the limit is a product.
            let t = PosetTower::constant(FinPoset::discrete(2), p.clone());
            assert!(t.limit().poset.is_isomorphic(&p.product(&p)));
        }
    }

    #[test]
    fn chain_limit_is_the_apex() {
        let nodes = vec![FinPoset::point(), FinPoset::chain(1), FinPoset::chain(2)];
        let steps = vec![
            MonotoneMap::to_point(&FinPoset::chain(1)),
            MonotoneMap::new(FinPoset::chain(2), FinPoset::chain(1), vec![0, 0, 1]).unwrap(),
        ];
        let t = PosetTower::chain(nodes, steps).unwrap();
        assert!(t.limit().poset.is_isomorphic(&FinPoset::chain(2)));
    }

    #[test]
    fn curve_base_prefix() {
        let t = PosetTower::chain(vec![curve_base(2), curve_base(3)], vec![curve_bond(2)]).unwrap();
        let lim = t.limit();
        assert!(lim.poset.is_isomorphic(&curve_base(3)));
    }

    #[test]
    fn one_node_tower() {
        let p = FinPoset::chain(2);
        let t = PosetTower::constant(FinPoset::point(), p.clone());
        assert_eq!(t.limit().poset.matrix(), p.matrix());
    }

    #[test]
    fn restriction_projection_is_monotone() {
        let t = PosetTower::chain(
            vec![curve_base(2), curve_base(3), curve_base(4)],
            vec![curve_bond(2), curve_bond(3)],
        )
        .unwrap();
        let full = t.limit();
        for subset in [vec![0], vec![1], vec![0, 2], vec![1, 2]] {
            let sub = t.restrict(&subset).limit();
            let proj = full.project(&subset, &sub).expect("families restrict");
            for a in 0..full.poset.len() {
                for b in 0..full.poset.len() {
                    if full.poset.leq(a, b) {
                        assert!(sub.poset.leq(proj[a], proj[b]));
                    }
                }
            }
        }
    }

    #[test]
    fn detects_non_commuting_bonds() {
        let index = FinPoset::chain(2);
        let p = FinPoset::discrete(2);
        let swap = MonotoneMap::new(p.clone(), p.clone(), vec![1, 0]).unwrap();
        let id = MonotoneMap::identity(&p);
        let bonds = BTreeMap::from([((0, 1), swap.clone()), ((1, 2), swap), ((0, 2), id.clone())]);
        assert!(PosetTower::new(index.clone(), vec![p.clone(); 3], bonds).is_ok());
        let bonds = BTreeMap::from([((0, 1), id.clone()), ((1, 2), id.clone())]);
        assert_eq!(
            PosetTower::new(index.clone(), vec![p.clone(); 3], bonds),
            Err(OrderError::MissingBond(0, 2))
        );
        let swap = MonotoneMap::new(p.clone(), p.clone(), vec![1, 0]).unwrap();
        let bonds = BTreeMap::from([((0, 1), swap), ((1, 2), id.clone()), ((0, 2), id)]);
        assert_eq!(
            PosetTower::new(index, vec![p; 3], bonds),
            Err(OrderError::BondsDoNotCompose(0, 1, 2))
        );
    }

    #[test]
    fn empty_limit() {
        // A cospan pt -> {0, 1} <- pt hitting different points has an empty pullback.
        let index = FinPoset::from_relations(
            vec!["lo".into(), "hi".into(), "x".into()],
            &[(0, 1), (0, 2)],
        )
        .unwrap();
        let d = FinPoset::discrete(2);
        let pt = FinPoset::point();
        let bonds = BTreeMap::from([
            ((0, 1), MonotoneMap::new(pt.clone(), d.clone(), vec![0]).unwrap()),
            ((0, 2), MonotoneMap::new(pt.clone(), d.clone(), vec![1]).unwrap()),
        ]);
        let t = PosetTower::new(index, vec![d, pt.clone(), pt], bonds).unwrap();
        assert!(t.limit().poset.is_empty());
    }
}
