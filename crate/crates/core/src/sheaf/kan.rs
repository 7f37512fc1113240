use std::sync::Arc;

use super::search::index_families;
use super::{limit_of_set_functor, Domain, SetFunctor, SheafError};
use crate::cat::{comma, Comma, Functor};

/// `J_*F` computed pointwise as limits over the commas `c ↓ J`.
#[derive(Clone, Debug)]
pub struct KanExtension {
    pub functor: SetFunctor,
    /// `c ↓ J` for each object `c`; objects are `(0, u, β: c -> J u)`.
    pub commas: Vec<Comma>,
    /// Element `i` of `(J_*F)(c)` is the family `families[c][i]`, indexed by comma objects.
    pub families: Vec<Vec<Vec<usize>>>,
}

impl KanExtension {
    /// The comparison `(J_*F)(J u) -> F(u)`, reading a family at `(u, id)`.
    pub fn comparison(&self, j: &Functor, u: usize) -> Vec<usize> {
        let c = j.object(u);
        let id = j.target().identity(c);
        let o = self.commas[c].object_index(0, u, id).expect("identity object");
        self.families[c].iter().map(|x| x[o]).collect()
    }

    /// Whether every comparison map is a bijection.
    pub fn restriction_is_iso(&self, j: &Functor, f: &SetFunctor) -> bool {
        (0..j.source().object_count()).all(|u| super::is_bijection(&self.comparison(j, u), f.size(u)))
    }
}

pub fn right_kan_extension(f: &SetFunctor, j: &Functor) -> Result<KanExtension, SheafError> {
    let u_cat = f.domain().as_cat()?;
    if **u_cat != **j.source() {
        return Err(SheafError::DomainMismatch);
    }
    let c = j.target().clone();
    let mut commas = Vec::with_capacity(c.object_count());
    let mut families = Vec::with_capacity(c.object_count());
    for x in 0..c.object_count() {
        let k = comma(&Functor::constant_object(&c, x), j)?;
        let pulled = f.pullback(&k.to_target)?;
        families.push(limit_of_set_functor(&pulled));
        commas.push(k);
    }
    let index: Vec<_> = families.iter().map(|fs| index_families(fs)).collect();
    let maps = (0..c.morphism_count())
        .map(|phi| {
            let (s, t) = (c.source(phi), c.target(phi));
            families[s]
                .iter()
                .map(|x| {
                    let y: Vec<usize> = commas[t]
                        .objects
                        .iter()
                        .map(|&(_, u, beta)| {
                            let o = commas[s]
                                .object_index(0, u, c.composite(beta, phi))
                                .expect("precomposed object");
                            x[o]
                        })
                        .collect();
                    index[t][&y]
                })
                .collect()
        })
        .collect();
    let sizes = families.iter().map(Vec::len).collect();
    Ok(KanExtension {
        functor: SetFunctor::new_unchecked(Domain::Cat(Arc::clone(&c)), sizes, maps),
        commas,
        families,
    })
}
