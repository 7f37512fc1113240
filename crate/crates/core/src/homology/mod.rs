//! Integral homology of nerves and presentations.

mod smith;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::cat::{FinCat, MorphismData};
use crate::decollage::{nerve, Decollage};
use crate::group::GroupPresentation;
use crate::strat::{LayeredCat, PresCat};

pub use smith::{invariant_factors, smith_normal_form, IntMatrix, Smith};

/// Highest chain degree built for nerves.
pub const MAX_NERVE_DIM: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("degree {degree} needs boundaries up to {needed}, complex stops at {max}")]
    DegreeOutOfRange { degree: usize, needed: usize, max: usize },
    #[error("nerve dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),
}

/// A finitely generated abelian group `Z^rank ⊕ ⊕ Z/t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    pub rank: usize,
    /// Invariant factors greater than one, increasing.
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Sparse integer column: `(row, coefficient)`.
pub type Column = Vec<(usize, i64)>;

/// Boundary maps `∂_n: C_n -> C_{n-1}` for `n = 1..=max_dim`, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    /// `boundaries[n - 1]` is `∂_n`, one column per basis element of `C_n`.
    pub boundaries: Vec<Vec<Column>>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<Vec<Column>>) -> Self {
        assert_eq!(boundaries.len() + 1, dims.len(), "one boundary per positive degree");
        ChainComplex { dims, boundaries }
    }

    pub fn max_dim(&self) -> usize {
        self.dims.len() - 1
    }

    /// `∂_n` as a dense matrix with `dims[n-1]` rows.
    pub fn boundary_matrix(&self, n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.dims[n - 1], self.dims[n]);
        for (c, col) in self.boundaries[n - 1].iter().enumerate() {
            for &(r, v) in col {
                let w = m.get(r, c) + v;
                m.set(r, c, w);
            }
        }
        m
    }

    /// Whether every `∂_{n-1} ∘ ∂_n` vanishes.
    pub fn is_complex(&self) -> bool {
        (2..=self.max_dim()).all(|n| {
            let lower = &self.boundaries[n - 2];
            self.boundaries[n - 1].iter().all(|col| {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(r, v) in col {
                    for &(s, w) in &lower[r] {
                        *acc.entry(s).or_default() += v * w;
                    }
                }
                acc.values().all(|&x| x == 0)
            })
        })
    }

    fn factors(&self, n: usize) -> Vec<num_bigint::BigInt> {
        let entries: Vec<(usize, usize, i64)> = self.boundaries[n - 1]
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
            .collect();
        invariant_factors(self.dims[n - 1], self.dims[n], &entries)
    }
}

/// `H_n = ker ∂_n / im ∂_{n+1}`.
pub fn homology_groups(k: &ChainComplex, n: usize) -> Result<AbelianGroup, HomologyError> {
    if n + 1 > k.max_dim() {
        return Err(HomologyError::DegreeOutOfRange {
            degree: n,
            needed: n + 1,
            max: k.max_dim(),
        });
    }
    let rank_out = if n == 0 { 0 } else { k.factors(n).len() };
    let into = k.factors(n + 1);
    let (rank_in, torsion) = smith::rank_and_torsion(&into);
    Ok(AbelianGroup {
        rank: k.dims[n] - rank_out - rank_in,
        torsion,
    })
}

/// The normalized nerve: `n`-chains are composable strings of non-identity
/// morphisms; inner faces compose, and identity composites are degenerate.
pub fn nerve_complex(c: &FinCat, max_dim: usize) -> Result<ChainComplex, HomologyError> {
    if max_dim > MAX_NERVE_DIM {
        return Err(HomologyError::DimensionTooLarge(max_dim));
    }
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..c.object_count()).map(|x| vec![x]).collect()];
    let non_id: Vec<usize> = c.non_identities().collect();
    if max_dim >= 1 {
        levels.push(non_id.iter().map(|&f| vec![f]).collect());
    }
    for _ in 2..=max_dim {
        let prev = levels.last().expect("nonempty");
        let mut next = Vec::new();
        for chain in prev {
            let end = c.target(*chain.last().expect("nonempty"));
            for &g in c.out_of(end) {
                if !c.is_identity(g) {
                    let mut w = chain.clone();
                    w.push(g);
                    next.push(w);
                }
            }
        }
        levels.push(next);
    }
    let index: Vec<HashMap<&[usize], usize>> = levels
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, ch)| (ch.as_slice(), i)).collect())
        .collect();
    let mut boundaries = Vec::new();
    for n in 1..=max_dim {
        let cols = levels[n]
            .iter()
            .map(|chain| {
                let mut col: HashMap<usize, i64> = HashMap::new();
                if n == 1 {
                    let f = chain[0];
                    *col.entry(c.target(f)).or_default() += 1;
                    *col.entry(c.source(f)).or_default() -= 1;
                } else {
                    let mut add = |face: Vec<usize>, sign: i64| {
                        *col.entry(index[n - 1][face.as_slice()]).or_default() += sign;
                    };
                    add(chain[1..].to_vec(), 1);
                    for i in 0..n - 1 {
                        let h = c.composite(chain[i + 1], chain[i]);
                        if !c.is_identity(h) {
                            let mut face = chain[..i].to_vec();
                            face.push(h);
                            face.extend_from_slice(&chain[i + 2..]);
                            add(face, if (i + 1) % 2 == 0 { 1 } else { -1 });
                        }
                    }
                    add(chain[..n - 1].to_vec(), if n % 2 == 0 { 1 } else { -1 });
                }
                let mut col: Column = col.into_iter().filter(|&(_, v)| v != 0).collect();
                col.sort_unstable();
                col
            })
            .collect();
        boundaries.push(cols);
    }
    Ok(ChainComplex::new(levels.iter().map(Vec::len).collect(), boundaries))
}

/// `(H_0, H_1)` of the nerve, from a presentation of its abelianized
/// fundamental groupoid by generators and composition relations.
pub fn low_homology(c: &FinCat) -> (AbelianGroup, AbelianGroup) {
    let components = c.components().len();
    let (gens, words) = c.generator_words();
    let count = |w: &[usize], row: &mut Vec<i64>, sign: i64| {
        for &g in w {
            row[g] += sign;
        }
    };
    let mut entries = Vec::new();
    let mut col = 0;
    for m in 0..c.morphism_count() {
        for (i, &g) in gens.iter().enumerate() {
            let Some(h) = c.compose(g, m) else { continue };
            let mut row = vec![0i64; gens.len()];
            count(&words[m], &mut row, 1);
            row[i] += 1;
            count(&words[h], &mut row, -1);
            if row.iter().any(|&v| v != 0) {
                entries.extend(row.iter().enumerate().filter(|&(_, &v)| v != 0).map(|(r, &v)| (r, col, v)));
                col += 1;
            }
        }
    }
    let factors = invariant_factors(gens.len(), col, &entries);
    let (rank, torsion) = smith::rank_and_torsion(&factors);
    let quotient_rank = gens.len() - rank;
    // The quotient is H_1 plus the image of ∂_1, free of rank objects - components.
    let h1 = AbelianGroup {
        rank: quotient_rank - (c.object_count() - components),
        torsion,
    };
    (AbelianGroup::free(components), h1)
}

/// `H_1` of a group presentation: the cokernel of the exponent-sum matrix.
pub fn presentation_h1(p: &GroupPresentation) -> AbelianGroup {
    let rows = p.abelianized_relators();
    abelian_cokernel(p.generators.len(), &rows)
}

fn abelian_cokernel(generators: usize, relations: &[Vec<i64>]) -> AbelianGroup {
    let entries: Vec<(usize, usize, i64)> = relations
        .iter()
        .enumerate()
        .flat_map(|(c, row)| row.iter().enumerate().filter(|&(_, &v)| v != 0).map(move |(r, &v)| (r, c, v)))
        .collect();
    let factors = invariant_factors(generators, relations.len(), &entries);
    let (rank, torsion) = smith::rank_and_torsion(&factors);
    AbelianGroup {
        rank: generators - rank,
        torsion,
    }
}

/// `H_1` of the localization of a presented category: one generator per
/// generating morphism, the relations abelianized, and a spanning forest killed.
pub fn pres_cat_h1(p: &PresCat) -> AbelianGroup {
    let n = p.generators.len();
    let mut relations: Vec<Vec<i64>> = p
        .relations
        .iter()
        .map(|(l, r)| {
            let mut row = vec![0i64; n];
            for &g in &l.steps {
                row[g] += 1;
            }
            for &g in &r.steps {
                row[g] -= 1;
            }
            row
        })
        .collect();
    let mut parent: Vec<usize> = (0..p.objects.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (i, g) in p.generators.iter().enumerate() {
        let (a, b) = (find(&mut parent, g.source), find(&mut parent, g.target));
        if a != b {
            parent[a.max(b)] = a.min(b);
            let mut row = vec![0i64; n];
            row[i] = 1;
            relations.push(row);
        }
    }
    abelian_cokernel(n, &relations)
}

/// The total category of `Σ ↦ D(Σ)` over the opposite of the subdivision:
/// objects `(Σ, x)`, morphisms `(Σ, x) -> (Σ', x')` for `Σ' ⊆ Σ` given by
/// `r(x) -> x'` in `D(Σ')`.
pub fn grothendieck(d: &Decollage) -> FinCat {
    let sd = d.subdivision();
    let strings = &sd.strings;
    let values = d.values();
    let mut offsets = Vec::with_capacity(strings.len());
    let mut objects = Vec::new();
    for a in 0..strings.len() {
        offsets.push(objects.len());
        let label = sd.poset.label(a);
        for x in 0..values[a].object_count() {
            objects.push(format!("{}:{}", label, values[a].object_name(x)));
        }
    }
    let restrict = |a: usize, b: usize| -> Option<&crate::cat::Functor> {
        if a == b {
            None
        } else {
            Some(&d.restrictions()[&(a, b)])
        }
    };
    let obj_map = |a: usize, b: usize, x: usize| restrict(a, b).map_or(x, |r| r.object(x));
    let mor_map = |a: usize, b: usize, m: usize| restrict(a, b).map_or(m, |r| r.morphism(m));
    let mut morphisms = Vec::new();
    for a in 0..strings.len() {
        for b in 0..strings.len() {
            if !sd.poset.leq(b, a) {
                continue;
            }
            for x in 0..values[a].object_count() {
                let rx = obj_map(a, b, x);
                for &m in values[b].out_of(rx) {
                    let y = values[b].target(m);
                    let name = if a == b {
                        format!("{}:{}", sd.poset.label(a), values[a].morphism(m).name)
                    } else {
                        format!("{}>{}:{}", sd.poset.label(a), sd.poset.label(b), values[b].morphism(m).name)
                    };
                    morphisms.push((
                        (a, x, b, m),
                        MorphismData {
                            name,
                            source: offsets[a] + x,
                            target: offsets[b] + y,
                        },
                    ));
                }
            }
        }
    }
    FinCat::from_keys(
        objects,
        morphisms,
        |o| {
            let a = offsets.partition_point(|&off| off <= o) - 1;
            let x = o - offsets[a];
            (a, x, a, values[a].identity(x))
        },
        |g, f| {
            let &(a, x, b, m) = f;
            let &(_, _, c, n) = g;
            (a, x, c, values[c].composite(n, mor_map(b, c, m)))
        },
    )
    .expect("restrictions of a valid decollage compose strictly")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanKampenReport {
    /// `(H_0, H_1)` of the nerve of `Π`.
    pub direct: (AbelianGroup, AbelianGroup),
    /// `(H_0, H_1)` of the nerve of the total category of the decollage of `Π`.
    pub glued: (AbelianGroup, AbelianGroup),
    pub holds: bool,
}

pub fn van_kampen_check(pi: &LayeredCat) -> VanKampenReport {
    let direct = low_homology(pi.cat());
    let glued = low_homology(&grothendieck(&nerve(pi)));
    VanKampenReport {
        holds: direct == glued,
        direct,
        glued,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{commutator, FinGroup};
    use crate::order::FinPoset;
    use std::sync::Arc;

    fn pseudo_circle() -> FinPoset {
        let names = ["a", "b", "u", "v"].iter().map(|s| s.to_string()).collect();
        FinPoset::from_relations(names, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    fn h(c: &FinCat, n: usize) -> AbelianGroup {
        homology_groups(&nerve_complex(c, 3).unwrap(), n).unwrap()
    }

    fn z(torsion: &[u64], rank: usize) -> AbelianGroup {
        AbelianGroup {
            rank,
            torsion: torsion.to_vec(),
        }
    }

    #[test]
    fn nerve_ranks() {
        assert_eq!(nerve_complex(&FinCat::terminal(), 3).unwrap().dims, vec![1, 0, 0, 0]);
        let bz2 = FinGroup::cyclic(2).to_cat();
        assert_eq!(nerve_complex(&bz2, 3).unwrap().dims, vec![1, 1, 1, 1]);
        let one = FinCat::from_poset(&FinPoset::chain(1));
        assert_eq!(nerve_complex(&one, 3).unwrap().dims, vec![2, 1, 0, 0]);
        assert!(nerve_complex(&one, 4).is_err());
    }

    #[test]
    fn boundaries_square_to_zero() {
        for c in [
            FinGroup::symmetric(3).to_cat(),
            FinCat::from_poset(&FinPoset::chain(3)),
            FinCat::from_poset(&pseudo_circle()),
        ] {
            assert!(nerve_complex(&c, 3).unwrap().is_complex());
        }
    }

    #[test]
    fn homology_examples() {
        let pc = FinCat::from_poset(&pseudo_circle());
        assert_eq!(h(&pc, 0), z(&[], 1));
        assert_eq!(h(&pc, 1), z(&[], 1));
        let bz2 = FinGroup::cyclic(2).to_cat();
        assert_eq!(h(&bz2, 1), z(&[2], 0));
        assert_eq!(h(&bz2, 2), z(&[], 0));
        assert_eq!(h(&FinCat::terminal(), 0), z(&[], 1));
        assert_eq!(h(&FinCat::terminal(), 1), z(&[], 0));
        assert!(homology_groups(&nerve_complex(&bz2, 2).unwrap(), 2).is_err());
    }

    #[test]
    fn low_homology_matches_the_nerve() {
        for c in [
            FinCat::from_poset(&pseudo_circle()),
            FinCat::from_poset(&FinPoset::chain(2)),
            FinCat::discrete(3),
            FinGroup::cyclic(4).to_cat(),
            FinGroup::symmetric(3).to_cat(),
        ] {
            let (h0, h1) = low_homology(&c);
            assert_eq!(h0, h(&c, 0));
            assert_eq!(h1, h(&c, 1));
        }
    }

    /// Groups of order at most 8 with the order of their abelianization
    /// and its expected invariant factors.
    fn small_groups() -> Vec<(FinGroup, Vec<u64>)> {
        vec![
            (FinGroup::trivial(), vec![]),
            (FinGroup::cyclic(2), vec![2]),
            (FinGroup::cyclic(3), vec![3]),
            (FinGroup::cyclic(4), vec![4]),
            (FinGroup::from_cycles(4, &["(1 2)", "(3 4)"]).unwrap(), vec![2, 2]),
            (FinGroup::cyclic(5), vec![5]),
            (FinGroup::cyclic(6), vec![6]),
            (FinGroup::symmetric(3), vec![2]),
            (FinGroup::cyclic(7), vec![7]),
            (FinGroup::cyclic(8), vec![8]),
            (FinGroup::from_cycles(6, &["(1 2 3 4)", "(5 6)"]).unwrap(), vec![2, 4]),
            (FinGroup::from_cycles(6, &["(1 2)", "(3 4)", "(5 6)"]).unwrap(), vec![2, 2, 2]),
            (FinGroup::from_cycles(4, &["(1 2 3 4)", "(1 3)"]).unwrap(), vec![2, 2]),
            (
                FinGroup::from_cycles(8, &["(1 2 4 7)(3 6 8 5)", "(1 3 4 8)(2 5 7 6)"]).unwrap(),
                vec![2, 2],
            ),
        ]
    }

    #[test]
    fn group_h1_is_the_abelianization() {
        for (g, expected) in small_groups() {
            assert!(g.order() <= 8);
            let (_, h1) = low_homology(&g.to_cat());
            assert_eq!(h1, z(&expected, 0), "order {}", g.order());
            // Independent order check: |G| / |[G, G]|.
            let comms: Vec<usize> = (0..g.order())
                .flat_map(|a| (0..g.order()).map(move |b| (a, b)))
                .map(|(a, b)| g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))))
                .collect();
            let derived = g.subgroup(&comms).len();
            assert_eq!(expected.iter().product::<u64>() as usize, g.order() / derived);
            assert_eq!(h(&g.to_cat(), 1), h1);
        }
    }

    #[test]
    fn presentations() {
        let torus = GroupPresentation {
            generators: vec!["a".into(), "b".into()],
            relators: vec![commutator(0, 1)],
        };
        assert_eq!(presentation_h1(&torus), z(&[], 2));
        let z6 = GroupPresentation {
            generators: vec!["a".into(), "b".into()],
            relators: vec![vec![(0, 2)], vec![(1, 3)]],
        };
        assert_eq!(presentation_h1(&z6), z(&[6], 0));
    }

    #[test]
    fn tietze_moves_preserve_h1() {
        let base = GroupPresentation {
            generators: vec!["a".into(), "b".into()],
            relators: vec![vec![(0, 4)], commutator(0, 1), vec![(1, 6)]],
        };
        let mut extended = base.clone();
        extended.generators.push("c".into());
        extended.relators.push(vec![(2, 1), (0, -1), (1, -1)]);
        assert_eq!(presentation_h1(&base), presentation_h1(&extended));
        let mut redundant = base.clone();
        redundant.relators.push(vec![(0, 8)]);
        assert_eq!(presentation_h1(&base), presentation_h1(&redundant));
    }

    #[test]
    fn pres_cat_h1_of_the_coarsened_circle() {
        let pc = pseudo_circle();
        let s = crate::order::MonotoneMap::new(pc.clone(), FinPoset::point(), vec![0; 4]).unwrap();
        let p = crate::strat::exit_path_of_stratified_poset(&s);
        assert_eq!(pres_cat_h1(&p), z(&[], 1));
        assert_eq!(h(&FinCat::from_poset(&pc), 1), pres_cat_h1(&p));
    }

    #[test]
    fn grothendieck_examples() {
        let one = LayeredCat::over_itself(&FinPoset::chain(1));
        let g = grothendieck(&nerve(&one));
        assert_eq!(g.object_count(), 3);
        assert!(g.is_thin());
        assert_eq!(low_homology(&g), (z(&[], 1), z(&[], 0)));
        let bg = Arc::new(FinGroup::symmetric(3).to_cat());
        let single = LayeredCat::new(bg.clone(), FinPoset::point(), vec![0]).unwrap();
        let g = grothendieck(&nerve(&single));
        assert_eq!(g.object_count(), 1);
        assert_eq!(g.morphism_count(), 6);
    }

    #[test]
    fn van_kampen_on_small_examples() {
        let pc = LayeredCat::over_itself(&pseudo_circle());
        let r = van_kampen_check(&pc);
        assert!(r.holds);
        assert_eq!(r.direct.1, z(&[], 1));
        let z2 = Arc::new(FinGroup::cyclic(2));
        let s3 = Arc::new(FinGroup::symmetric(3));
        let d = Arc::new(FinGroup::from_cycles(3, &["(1 2)"]).unwrap());
        let dvr = crate::galois::build_two_stratum(
            z2.clone(),
            s3.clone(),
            crate::group::GroupHom::new(d.clone(), z2.clone(), vec![z2.generator(0)]).unwrap(),
            crate::group::GroupHom::inclusion(d, s3).unwrap(),
        )
        .unwrap();
        let r = van_kampen_check(&dvr.layered);
        assert!(r.holds);
        assert_eq!(r.direct, (z(&[], 1), z(&[2], 0)));
        assert_eq!(h(&grothendieck(&nerve(&dvr.layered)), 1), z(&[2], 0));
    }
}
