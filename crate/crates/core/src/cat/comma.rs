use std::collections::HashMap;
use std::sync::Arc;

use super::{CatError, FinCat, Functor, MorphismData};

/// The comma category `F ↓ G` with its two projections.
#[derive(Clone, Debug)]
pub struct Comma {
    pub cat: Arc<FinCat>,
    /// `(c, d, β)` with `β: F(c) -> G(d)`.
    pub objects: Vec<(usize, usize, usize)>,
    /// `(γ, δ)` for each morphism.
    pub morphisms: Vec<(usize, usize)>,
    pub to_source: Functor,
    pub to_target: Functor,
}

impl Comma {
    pub fn object_index(&self, c: usize, d: usize, beta: usize) -> Option<usize> {
        self.objects.iter().position(|&o| o == (c, d, beta))
    }
}

/// Objects `(c, d, β: F c -> G d)`; morphisms `(γ, δ)` with `G(δ) ∘ β = β' ∘ F(γ)`.
pub fn comma(f: &Functor, g: &Functor) -> Result<Comma, CatError> {
    if **f.target() != **g.target() {
        return Err(CatError::Mismatch);
    }
    let (c, d, e) = (f.source().clone(), g.source().clone(), f.target().clone());
    let mut objects = Vec::new();
    for x in 0..c.object_count() {
        for y in 0..d.object_count() {
            for &beta in e.hom(f.object(x), g.object(y)) {
                objects.push((x, y, beta));
            }
        }
    }
    let names = objects
        .iter()
        .map(|&(x, y, b)| {
            format!(
                "({},{},{})",
                c.object_name(x),
                d.object_name(y),
                e.morphism(b).name
            )
        })
        .collect();
    let index: HashMap<(usize, usize, usize), usize> =
        objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    for (s, &(x, y, beta)) in objects.iter().enumerate() {
        for &gamma in c.out_of(x) {
            for &delta in d.out_of(y) {
                let lhs = e.composite(g.morphism(delta), beta);
                // β' is forced: β' ∘ F(γ) = G(δ) ∘ β; search the candidates.
                let (x2, y2) = (c.target(gamma), d.target(delta));
                for &beta2 in e.hom(f.object(x2), g.object(y2)) {
                    if e.composite(beta2, f.morphism(gamma)) == lhs {
                        let t = index[&(x2, y2, beta2)];
                        let name = format!("({},{})", c.morphism(gamma).name, d.morphism(delta).name);
                        morphisms.push(((s, t, gamma, delta), MorphismData { name, source: s, target: t }));
                        pairs.push((gamma, delta));
                    }
                }
            }
        }
    }
    let cat = FinCat::from_keys(
        names,
        morphisms,
        |o| {
            let (x, y, _) = objects[o];
            (o, o, c.identity(x), d.identity(y))
        },
        |a, b| (b.0, a.1, c.composite(a.2, b.2), d.composite(a.3, b.3)),
    )?;
    let cat = Arc::new(cat);
    let to_source = Functor::new_unchecked(
        cat.clone(),
        c.clone(),
        objects.iter().map(|o| o.0).collect(),
        pairs.iter().map(|p| p.0).collect(),
    );
    let to_target = Functor::new_unchecked(
        cat.clone(),
        d.clone(),
        objects.iter().map(|o| o.1).collect(),
        pairs.iter().map(|p| p.1).collect(),
    );
    Ok(Comma {
        cat,
        objects,
        morphisms: pairs,
        to_source,
        to_target,
    })
}

/// `C_{/x}`: objects `(c, 0, β: c -> x)`.
pub fn slice(c: &Arc<FinCat>, x: usize) -> Comma {
    comma(&Functor::identity(c), &Functor::constant_object(c, x)).expect("common target")
}

/// `C_{x/}`: objects `(0, d, β: x -> d)`.
pub fn coslice(c: &Arc<FinCat>, x: usize) -> Comma {
    comma(&Functor::constant_object(c, x), &Functor::identity(c)).expect("common target")
}
