//! A fixed collection of layered categories for exhaustive checks: small
//! posets, two-stratum Galois examples, curve-level categories and seeded
//! random layered categories.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cat::{FinCat, MorphismData};
use crate::galois::{build_curve_level, build_two_stratum, CurveSpec};
use crate::group::{FinGroup, GroupHom};
use crate::order::{posets_up_to_iso, FinPoset};
use crate::strat::LayeredCat;

/// Seeds of the random part of [`standard_corpus`].
pub const RANDOM_SEEDS: std::ops::Range<u64> = 0..10;

/// Upper bound on morphisms in a random layered category.
pub const RANDOM_MORPHISM_BUDGET: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Poset,
    TwoStratum,
    Curve,
    Random,
}

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub name: String,
    pub family: Family,
    pub layered: LayeredCat,
}

impl CorpusItem {
    fn new(name: impl Into<String>, family: Family, layered: LayeredCat) -> Self {
        CorpusItem {
            name: name.into(),
            family,
            layered,
        }
    }

    /// Height of the base poset, zero for the empty base.
    pub fn base_height(&self) -> usize {
        self.layered.base().height().unwrap_or(0)
    }
}

/// One poset per isomorphism class with `1..=max_points` elements, each
/// layered over itself.
pub fn poset_items(max_points: usize) -> Vec<CorpusItem> {
    (1..=max_points)
        .flat_map(|n| posets_up_to_iso(n).into_iter().enumerate().map(move |(i, p)| (n, i, p)))
        .map(|(n, i, p)| CorpusItem::new(format!("poset-{n}-{i}"), Family::Poset, LayeredCat::over_itself(&p)))
        .collect()
}

/// Two-stratum categories for `(G_Z, G_U, D)`: `(Z/2, S3, <(1 2)>)`,
/// `(1, Z/3, Z/3)` and `(Z/2, Z/4, Z/4)`.
pub fn two_stratum_items() -> Vec<CorpusItem> {
    let z2 = Arc::new(FinGroup::cyclic(2));
    let z3 = Arc::new(FinGroup::cyclic(3));
    let z4 = Arc::new(FinGroup::cyclic(4));
    let s3 = Arc::new(FinGroup::symmetric(3));
    let one = Arc::new(FinGroup::trivial());
    let swap = Arc::new(FinGroup::from_cycles(3, &["(1 2)"]).expect("valid cycle"));
    let triples = [
        (
            "dvr-z2-s3",
            z2.clone(),
            s3.clone(),
            GroupHom::new(swap.clone(), z2.clone(), vec![z2.generator(0)]),
            GroupHom::inclusion(swap, s3),
        ),
        (
            "dvr-1-z3",
            one.clone(),
            z3.clone(),
            GroupHom::new(z3.clone(), one, vec![0]),
            Ok(GroupHom::identity(&z3)),
        ),
        (
            "dvr-z2-z4",
            z2.clone(),
            z4.clone(),
            GroupHom::new(z4.clone(), z2.clone(), vec![z2.generator(0)]),
            Ok(GroupHom::identity(&z4)),
        ),
    ];
    triples
        .into_iter()
        .map(|(name, gz, gu, to_z, to_u)| {
            let g = build_two_stratum(gz, gu, to_z.expect("valid hom"), to_u.expect("valid hom"))
                .expect("valid two-stratum data");
            CorpusItem::new(name, Family::TwoStratum, g.layered)
        })
        .collect()
}

/// Curve-level categories for `(g, n)` in `{0, 1} x {2, 3}` with quotients
/// `Z/2` and `Z/5`, the first loop mapping to a generator.
pub fn curve_items() -> Vec<CorpusItem> {
    let mut out = Vec::new();
    for order in [2, 5] {
        let group = Arc::new(FinGroup::cyclic(order));
        for genus in 0..=1 {
            for punctures in 2..=3 {
                let mut images = vec![0; 2 * genus + punctures - 1];
                images[0] = group.generator(0);
                let spec = CurveSpec::new(genus, punctures, group.clone(), images).expect("valid curve data");
                let c = build_curve_level(&spec).expect("valid curve data");
                out.push(CorpusItem::new(
                    format!("curve-g{genus}-n{punctures}-z{order}"),
                    Family::Curve,
                    c.layered,
                ));
            }
        }
    }
    out
}

/// A layered category from `seed`.
///
/// The base has at most three points in at most three levels. Each object is
/// an orbit `G/H` for a random subgroup `H` of a random group `G` of order at
/// most 6, and morphisms are `G`-maps, kept only between objects of the same
/// stratum with equal orbit size or along a random transitive relation on
/// such blocks that climbs strictly in the base.
pub fn random_layered(seed: u64) -> LayeredCat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(pi) = try_random_layered(&mut rng) {
            return pi;
        }
    }
}

fn try_random_layered(rng: &mut ChaCha8Rng) -> Option<LayeredCat> {
    let group = match rng.random_range(0..4) {
        0 => FinGroup::trivial(),
        1 => FinGroup::cyclic(2),
        2 => FinGroup::cyclic(3),
        _ => FinGroup::symmetric(3),
    };
    let base = random_base(rng);
    let points = base.len();
    let object_count = rng.random_range(points..=6);
    let mut labels: Vec<usize> = (0..points).collect();
    labels.extend((points..object_count).map(|_| rng.random_range(0..points)));
    labels.sort_unstable();

    let subgroups = subgroups(&group);
    let stabilizers: Vec<&BTreeSet<usize>> = (0..object_count)
        .map(|_| &subgroups[rng.random_range(0..subgroups.len())])
        .collect();

    let blocks: Vec<(usize, usize)> = {
        let set: BTreeSet<(usize, usize)> = (0..object_count).map(|x| (labels[x], stabilizers[x].len())).collect();
        set.into_iter().collect()
    };
    let block_of: Vec<usize> = (0..object_count)
        .map(|x| blocks.binary_search(&(labels[x], stabilizers[x].len())).expect("present"))
        .collect();
    let nb = blocks.len();
    let mut reach = vec![vec![false; nb]; nb];
    for (a, row) in reach.iter_mut().enumerate() {
        row[a] = true;
    }
    for a in 0..nb {
        for b in 0..nb {
            if base.lt(blocks[a].0, blocks[b].0) && rng.random_bool(0.6) {
                reach[a][b] = true;
            }
        }
    }
    for k in 0..nb {
        for i in 0..nb {
            for j in 0..nb {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }

    let e = group.mul(0, group.inv(0));
    let coset = |g: usize, k: &BTreeSet<usize>| k.iter().map(|&h| group.mul(g, h)).min().expect("nonempty");
    let mut morphisms = Vec::new();
    for x in 0..object_count {
        for y in 0..object_count {
            if !reach[block_of[x]][block_of[y]] {
                continue;
            }
            let (h, k) = (stabilizers[x], stabilizers[y]);
            let mut seen = BTreeSet::new();
            for g in 0..group.order() {
                let rep = coset(g, k);
                let equivariant = h.iter().all(|&a| k.contains(&group.mul(group.inv(g), group.mul(a, g))));
                if equivariant && seen.insert(rep) {
                    morphisms.push((
                        (x, y, rep),
                        MorphismData {
                            name: format!("o{x}>o{y}:{}", group.element_name(rep)),
                            source: x,
                            target: y,
                        },
                    ));
                }
            }
        }
        if morphisms.len() > RANDOM_MORPHISM_BUDGET {
            return None;
        }
    }
    let objects = (0..object_count).map(|x| format!("o{x}")).collect();
    let cat = FinCat::from_keys(
        objects,
        morphisms,
        |x| (x, x, coset(e, stabilizers[x])),
        |&(_, z, h), &(x, _, g)| (x, z, coset(group.mul(g, h), stabilizers[z])),
    )
    .expect("G-maps between orbits compose");
    Some(LayeredCat::new(Arc::new(cat), base, labels).expect("blocks climb strictly in the base"))
}

/// A random poset on one to three points with height at most two.
fn random_base(rng: &mut ChaCha8Rng) -> FinPoset {
    let n = rng.random_range(1..=3);
    let level: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| level[a] < level[b])
        .filter(|_| rng.random_bool(0.7))
        .collect();
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FinPoset::from_relations(labels, &pairs).expect("levels make the relation antisymmetric")
}

/// Cyclic subgroups and the whole group.
fn subgroups(g: &FinGroup) -> Vec<BTreeSet<usize>> {
    let mut out: BTreeSet<BTreeSet<usize>> = (0..g.order()).map(|a| g.subgroup(&[a]).into_iter().collect()).collect();
    out.insert((0..g.order()).collect());
    out.into_iter().collect()
}

/// Random items for `seeds`.
pub fn random_items(seeds: std::ops::Range<u64>) -> Vec<CorpusItem> {
    seeds
        .map(|s| CorpusItem::new(format!("random-{s}"), Family::Random, random_layered(s)))
        .collect()
}

/// Posets with at most five points, the three two-stratum examples, the eight
/// curve-level categories and ten random layered categories.
pub fn standard_corpus() -> Vec<CorpusItem> {
    let mut out = poset_items(5);
    out.extend(two_stratum_items());
    out.extend(curve_items());
    out.extend(random_items(RANDOM_SEEDS));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_families() {
        let c = standard_corpus();
        // 1 + 2 + 5 + 16 + 63 posets up to isomorphism.
        assert_eq!(c.iter().filter(|i| i.family == Family::Poset).count(), 87);
        assert_eq!(c.iter().filter(|i| i.family == Family::TwoStratum).count(), 3);
        assert_eq!(c.iter().filter(|i| i.family == Family::Curve).count(), 8);
        assert_eq!(c.iter().filter(|i| i.family == Family::Random).count(), 10);
        let names: BTreeSet<&str> = c.iter().map(|i| i.name.as_str()).collect();
        assert_eq!(names.len(), c.len());
    }

    #[test]
    fn random_items_are_small_and_deterministic() {
        for s in RANDOM_SEEDS {
            let a = random_layered(s);
            assert_eq!(a, random_layered(s));
            assert!(a.cat().object_count() <= 6);
            assert!(a.cat().morphism_count() <= RANDOM_MORPHISM_BUDGET);
            assert!(a.base().height().unwrap() <= 2);
            assert!(a.cat().validate().is_empty());
        }
        let shapes: BTreeSet<(usize, usize, usize)> = RANDOM_SEEDS
            .map(|s| {
                let a = random_layered(s);
                (a.base().len(), a.cat().object_count(), a.cat().morphism_count())
            })
            .collect();
        assert!(shapes.len() >= 5, "seeds should give varied shapes: {shapes:?}");
    }
}
