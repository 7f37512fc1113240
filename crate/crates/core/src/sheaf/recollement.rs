use std::collections::HashSet;
use std::sync::Arc;

use super::search::{for_each_map, index_families};
use super::{count_functor_iso_classes, right_kan_extension, Domain, KanExtension, SetFunctor, SheafError};
use crate::cat::{comma, Functor};
use crate::strat::LayeredCat;

/// The closed part `Π_Z`, its open complement `Π_U`, and their inclusions.
#[derive(Clone, Debug)]
pub struct Recollement {
    pub closed: LayeredCat,
    pub open: LayeredCat,
    pub i: Functor,
    pub j: Functor,
    /// Local index in `Π_Z` or `Π_U` of each object of `Π`.
    local: Vec<usize>,
    in_closed: Vec<bool>,
    /// Local index of each morphism of `Π` inside its part, if it lies in one.
    local_morphism: Vec<Option<usize>>,
}

impl Recollement {
    pub fn new(pi: &LayeredCat, sieve: &[usize]) -> Result<Self, SheafError> {
        let mut z: Vec<usize> = sieve.to_vec();
        z.sort_unstable();
        z.dedup();
        if z.iter().any(|&p| p >= pi.base().len()) || !pi.base().is_sieve(&z) {
            return Err(SheafError::NotASieve(z));
        }
        let u: Vec<usize> = (0..pi.base().len()).filter(|p| !z.contains(p)).collect();
        let (closed, z_obj, z_mor) = pi.restrict(&z)?;
        let (open, u_obj, u_mor) = pi.restrict(&u)?;
        let i = Functor::new(closed.cat().clone(), pi.cat().clone(), z_obj.clone(), z_mor.clone())?;
        let j = Functor::new(open.cat().clone(), pi.cat().clone(), u_obj.clone(), u_mor.clone())?;
        let n = pi.cat().object_count();
        let mut local = vec![0; n];
        let mut in_closed = vec![false; n];
        for (k, &x) in z_obj.iter().enumerate() {
            local[x] = k;
            in_closed[x] = true;
        }
        for (k, &x) in u_obj.iter().enumerate() {
            local[x] = k;
        }
        let mut local_morphism = vec![None; pi.cat().morphism_count()];
        for (k, &m) in z_mor.iter().chain(&u_mor).enumerate() {
            local_morphism[m] = Some(if k < z_mor.len() { k } else { k - z_mor.len() });
        }
        Ok(Recollement {
            closed,
            open,
            i,
            j,
            local,
            in_closed,
            local_morphism,
        })
    }

    fn pi(&self) -> &Arc<crate::cat::FinCat> {
        self.i.target()
    }

    /// `(F|_Z, F|_U, F|_Z -> i* j_* F|_U)`.
    pub fn decompose(&self, f: &SetFunctor) -> Result<Triple, SheafError> {
        let closed = f.pullback(&self.i)?;
        let open = f.pullback(&self.j)?;
        let pushforward = right_kan_extension(&open, &self.j)?;
        let glue = (0..closed.sizes().len())
            .map(|z| {
                let x = self.i.object(z);
                let index = index_families(&pushforward.families[x]);
                (0..f.size(x))
                    .map(|a| {
                        let family: Vec<usize> = pushforward.commas[x]
                            .objects
                            .iter()
                            .map(|&(_, _, beta)| f.map(beta)[a])
                            .collect();
                        index[&family]
                    })
                    .collect()
            })
            .collect();
        Ok(Triple {
            closed,
            open,
            glue,
            pushforward,
        })
    }

    /// The functor on `Π` glued from a triple; fails if the glue map is not natural.
    pub fn reassemble(&self, t: &Triple) -> Result<SetFunctor, SheafError> {
        let c = self.pi();
        let sizes: Vec<usize> = (0..c.object_count())
            .map(|x| {
                let part = if self.in_closed[x] { &t.closed } else { &t.open };
                part.size(self.local[x])
            })
            .collect();
        let maps = (0..c.morphism_count())
            .map(|m| {
                let (x, y) = (c.source(m), c.target(m));
                match (self.in_closed[x], self.in_closed[y], self.local_morphism[m]) {
                    (true, true, Some(k)) => t.closed.map(k).to_vec(),
                    (false, false, Some(k)) => t.open.map(k).to_vec(),
                    (true, false, _) => {
                        let z = self.local[x];
                        let o = t.pushforward.commas[x]
                            .object_index(0, self.local[y], m)
                            .expect("cross morphism is a comma object");
                        t.glue[z].iter().map(|&i| t.pushforward.families[x][i][o]).collect()
                    }
                    _ => unreachable!("no morphism leaves the open part"),
                }
            })
            .collect();
        SetFunctor::new(Domain::Cat(c.clone()), sizes, maps)
    }
}

/// A closed part, an open part and the gluing map into `i* j_*` of the open part.
#[derive(Clone, Debug)]
pub struct Triple {
    pub closed: SetFunctor,
    pub open: SetFunctor,
    /// `glue[z][a]` indexes an element of `(j_* open)(i z)`.
    pub glue: Vec<Vec<usize>>,
    pub pushforward: KanExtension,
}

#[derive(Clone, Debug)]
pub struct RecollementReport {
    pub triple: Triple,
    pub reassembled: SetFunctor,
    pub ok: bool,
}

pub fn recollement_round_trip(pi: &LayeredCat, sieve: &[usize], f: &SetFunctor) -> Result<RecollementReport, SheafError> {
    let r = Recollement::new(pi, sieve)?;
    let triple = r.decompose(f)?;
    let reassembled = r.reassemble(&triple)?;
    let ok = f.is_naturally_isomorphic(&reassembled)?;
    Ok(RecollementReport {
        triple,
        reassembled,
        ok,
    })
}

/// Iso classes of triples `(A, B, α: A -> i* j_* B)` with sets of size at most `k`.
/// Counted as orbits of `Aut(A) × Aut(B)` on gluing maps, over representatives of `A` and `B`.
pub fn count_triple_classes(pi: &LayeredCat, sieve: &[usize], k: usize, cap: usize) -> Result<usize, SheafError> {
    let r = Recollement::new(pi, sieve)?;
    let closed = count_functor_iso_classes(&Domain::Cat(r.closed.cat().clone()), k, cap)?.representatives;
    let open = count_functor_iso_classes(&Domain::Cat(r.open.cat().clone()), k, cap)?.representatives;
    let z_cat = r.closed.cat().clone();
    let z_edges = Domain::Cat(z_cat.clone()).arrows();
    let mut total = 0;
    for b in &open {
        let push = right_kan_extension(b, &r.j)?;
        let target = push.functor.pullback(&r.i)?;
        let index: Vec<_> = push.families.iter().map(|fs| index_families(fs)).collect();
        let aut_b = automorphisms(b);
        // Action of ψ ∈ Aut(B) on i* j_* B.
        let act_b: Vec<Vec<Vec<usize>>> = aut_b
            .iter()
            .map(|psi| {
                (0..z_cat.object_count())
                    .map(|z| {
                        let x = r.i.object(z);
                        push.families[x]
                            .iter()
                            .map(|fam| {
                                let moved: Vec<usize> = push.commas[x]
                                    .objects
                                    .iter()
                                    .zip(fam)
                                    .map(|(&(_, u, _), &e)| psi[u][e])
                                    .collect();
                                index[x][&moved]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        for a in &closed {
            let aut_a = automorphisms(a);
            let mut glues: Vec<Vec<Vec<usize>>> = Vec::new();
            for_each_map(&z_edges, a.maps(), target.maps(), a.sizes(), target.sizes(), false, &|_, _, _| true, &mut |phi| {
                glues.push(phi.to_vec());
                false
            });
            let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
            for alpha in &glues {
                if seen.contains(alpha) {
                    continue;
                }
                total += 1;
                for phi in &aut_a {
                    for act in &act_b {
                        // (j_*ψ) ∘ α ∘ φ^-1
                        let moved: Vec<Vec<usize>> = (0..alpha.len())
                            .map(|z| {
                                let mut row = vec![0; alpha[z].len()];
                                for (e, &v) in alpha[z].iter().enumerate() {
                                    row[phi[z][e]] = act[z][v];
                                }
                                row
                            })
                            .collect();
                        seen.insert(moved);
                    }
                }
            }
        }
    }
    Ok(total)
}

fn automorphisms(f: &SetFunctor) -> Vec<Vec<Vec<usize>>> {
    let edges = f.domain().arrows();
    let mut out = Vec::new();
    for_each_map(&edges, f.maps(), f.maps(), f.sizes(), f.sizes(), true, &|_, _, _| true, &mut |phi| {
        out.push(phi.to_vec());
        false
    });
    out
}

/// Both sides of the base change square and the computed comparison.
#[derive(Clone, Debug)]
pub struct BeckChevalley {
    /// `i* j_* F` on `Π_Z`.
    pub left: SetFunctor,
    /// `p_* q* F` on `Π_Z`, for `p, q` the projections of `Π_Z ↓ Π_U`.
    pub right: SetFunctor,
    /// `comparison[z]` maps `left(z) -> right(z)`.
    pub comparison: Vec<Vec<usize>>,
    pub holds: bool,
}

pub fn beck_chevalley_check(pi: &LayeredCat, sieve: &[usize], f: &SetFunctor) -> Result<BeckChevalley, SheafError> {
    let r = Recollement::new(pi, sieve)?;
    let c = r.pi().clone();
    let push = right_kan_extension(f, &r.j)?;
    let left = push.functor.pullback(&r.i)?;
    let k = comma(&r.i, &r.j)?;
    let q_star = f.pullback(&k.to_target)?;
    let p = &k.to_source;
    let right_ext = right_kan_extension(&q_star, p)?;
    let right = right_ext.functor.clone();
    let right_index: Vec<_> = right_ext.families.iter().map(|fs| index_families(fs)).collect();
    let comparison: Vec<Vec<usize>> = (0..r.closed.cat().object_count())
        .map(|z| {
            let x = r.i.object(z);
            push.families[x]
                .iter()
                .map(|fam| {
                    let y: Vec<usize> = right_ext.commas[z]
                        .objects
                        .iter()
                        .map(|&(_, kk, gamma)| {
                            let (_, u, beta) = k.objects[kk];
                            let through = c.composite(beta, r.i.morphism(gamma));
                            let o = push.commas[x].object_index(0, u, through).expect("comma object");
                            fam[o]
                        })
                        .collect();
                    right_index[z][&y]
                })
                .collect()
        })
        .collect();
    let z_cat = r.closed.cat();
    let natural = (0..z_cat.morphism_count()).all(|m| {
        let (s, t) = (z_cat.source(m), z_cat.target(m));
        (0..left.size(s)).all(|e| comparison[t][left.map(m)[e]] == right.map(m)[comparison[s][e]])
    });
    let bijective = comparison
        .iter()
        .enumerate()
        .all(|(z, map)| super::is_bijection(map, right.size(z)));
    Ok(BeckChevalley {
        holds: natural && bijective,
        left,
        right,
        comparison,
    })
}

/// Every functor on the open part with sets of size at most `k`.
#[cfg(test)]
pub(crate) fn open_functors(pi: &LayeredCat, sieve: &[usize], k: usize, cap: usize) -> Result<Vec<SetFunctor>, SheafError> {
    let r = Recollement::new(pi, sieve)?;
    super::all_functors(&Domain::Cat(r.open.cat().clone()), k, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::build_two_stratum;
    use crate::group::{FinGroup, GroupHom};
    use crate::order::FinPoset;
    use crate::sheaf::{all_functors, DEFAULT_FUNCTOR_CAP};

    fn over_itself(p: &FinPoset) -> LayeredCat {
        LayeredCat::over_itself(p)
    }

    fn dvr() -> LayeredCat {
        let z2 = Arc::new(FinGroup::cyclic(2));
        let s3 = Arc::new(FinGroup::symmetric(3));
        let d = Arc::new(FinGroup::from_cycles(3, &["(1 2)"]).unwrap());
        let to_z = GroupHom::new(d.clone(), z2.clone(), vec![z2.generator(0)]).unwrap();
        let to_u = GroupHom::inclusion(d, s3.clone()).unwrap();
        build_two_stratum(z2, s3, to_z, to_u).unwrap().layered
    }

    #[test]
    fn arrow_triple_is_the_structure_map() {
        let pi = over_itself(&FinPoset::chain(1));
        let c = pi.cat().clone();
        let m01 = *c.hom(0, 1).first().unwrap();
        for f in all_functors(&Domain::Cat(c.clone()), 2, 1000).unwrap() {
            let rep = recollement_round_trip(&pi, &[0], &f).unwrap();
            assert!(rep.ok);
            assert_eq!(rep.reassembled, f);
            assert_eq!(rep.triple.closed.size(0), f.size(0));
            assert_eq!(rep.triple.open.size(0), f.size(1));
            let fam = &rep.triple.pushforward.families[0];
            let via_glue: Vec<usize> = rep.triple.glue[0].iter().map(|&i| fam[i][0]).collect();
            assert_eq!(via_glue, f.map(m01));
        }
    }

    #[test]
    fn dvr_round_trip_and_counts() {
        let pi = dvr();
        let all = all_functors(&Domain::Cat(pi.cat().clone()), 2, DEFAULT_FUNCTOR_CAP).unwrap();
        for f in &all {
            assert!(recollement_round_trip(&pi, &[0], f).unwrap().ok);
        }
        let sheaves = count_functor_iso_classes(&Domain::Cat(pi.cat().clone()), 2, DEFAULT_FUNCTOR_CAP).unwrap().count;
        assert_eq!(sheaves, count_triple_classes(&pi, &[0], 2, DEFAULT_FUNCTOR_CAP).unwrap());
    }

    #[test]
    fn empty_open_part_glues_into_the_terminal() {
        let pi = dvr();
        let all = all_functors(&Domain::Cat(pi.cat().clone()), 2, DEFAULT_FUNCTOR_CAP).unwrap();
        for f in &all {
            let rep = recollement_round_trip(&pi, &[0, 1], f).unwrap();
            assert!(rep.ok);
            assert_eq!(rep.triple.pushforward.functor.sizes(), &[1, 1]);
            assert!(rep.triple.glue.iter().flatten().all(|&i| i == 0));
        }
    }

    #[test]
    fn non_sieve_is_refused() {
        let pi = over_itself(&FinPoset::chain(1));
        let f = SetFunctor::constant(pi.cat(), 1);
        assert!(matches!(recollement_round_trip(&pi, &[1], &f), Err(SheafError::NotASieve(_))));
    }

    #[test]
    fn triple_counts_on_small_posets() {
        for p in [FinPoset::chain(1), FinPoset::chain(2)] {
            let pi = over_itself(&p);
            let n = count_functor_iso_classes(&Domain::Cat(pi.cat().clone()), 2, 100_000).unwrap().count;
            for z in [vec![0], vec![0, 1]] {
                assert_eq!(count_triple_classes(&pi, &z, 2, 100_000).unwrap(), n);
            }
        }
    }

    #[test]
    fn beck_chevalley_on_posets_and_dvr() {
        let pi = over_itself(&FinPoset::from_relations(
            ["a", "b", "u", "v"].iter().map(|s| s.to_string()).collect(),
            &[(0, 2), (0, 3), (1, 2), (1, 3)],
        )
        .unwrap());
        for f in open_functors(&pi, &[0, 1], 2, 10_000).unwrap() {
            assert!(beck_chevalley_check(&pi, &[0, 1], &f).unwrap().holds);
        }
        let pi = dvr();
        for f in open_functors(&pi, &[0], 3, DEFAULT_FUNCTOR_CAP).unwrap() {
            let bc = beck_chevalley_check(&pi, &[0], &f).unwrap();
            assert!(bc.holds);
            assert_eq!(bc.left.size(0), f.size(0));
        }
    }
}
