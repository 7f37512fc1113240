//! Décollages: groupoid-valued presheaves on the string poset `sd(P)`
//! satisfying the Segal condition, the nerve of a layered category, and
//! reassembly of a layered category from a décollage.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cat::{comma, pair_fiber, CatError, FinCat, Functor, MorphismData, PairFiber};
use crate::group::{FinGroup, GroupHom};
use crate::order::{subdivision, FinPoset, Subdivision};
use crate::strat::{LayeredCat, StratError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecollageError {
    #[error("malformed décollage: {0}")]
    Shape(String),
    #[error("invalid décollage: {}", crate::cat::format_list(.0))]
    Invalid(Vec<DecollageViolation>),
    #[error("base poset has a chain of three elements")]
    HeightExceeded,
    #[error("reassembled composition is not associative")]
    AssociativityFailure,
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Strat(#[from] StratError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecollageViolation {
    NotGroupoid { string: String },
    NotFunctorial { from: String, via: String, to: String },
    EdgeNotFaithful { string: String },
    SegalNotFullyFaithful { string: String },
    SegalNotEssentiallySurjective { string: String },
    AssociativityFailure,
}

impl fmt::Display for DecollageViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecollageViolation::NotGroupoid { string } => write!(f, "value at {string} is not a groupoid"),
            DecollageViolation::NotFunctorial { from, via, to } => {
                write!(f, "restrictions {from} -> {via} -> {to} do not compose to {from} -> {to}")
            }
            DecollageViolation::EdgeNotFaithful { string } => write!(f, "(s, t) at {string} is not faithful"),
            DecollageViolation::SegalNotFullyFaithful { string } => {
                write!(f, "Segal comparison at {string} is not fully faithful")
            }
            DecollageViolation::SegalNotEssentiallySurjective { string } => {
                write!(f, "Segal comparison at {string} is not essentially surjective")
            }
            DecollageViolation::AssociativityFailure => write!(f, "induced composition is not associative"),
        }
    }
}

/// Strict presheaf of finite groupoids on `sd(P)`.
#[derive(Clone, Debug)]
pub struct Decollage {
    base: FinPoset,
    sd: Subdivision,
    values: Vec<Arc<FinCat>>,
    /// Keyed by `(Σ, Σ')` with `Σ' ⊊ Σ`, as indices into `sd`.
    restrictions: BTreeMap<(usize, usize), Functor>,
}

/// Where a morphism of a reassembled layered category comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MorphismOrigin {
    /// A morphism of the value at `{point}`.
    Stratum { point: usize, morphism: usize },
    /// A component of the homFiber of the edge `{p < q}` over `(x, y)`,
    /// represented by `(arrow, a, b)`.
    Link { p: usize, q: usize, arrow: usize, a: usize, b: usize },
}

#[derive(Clone, Debug)]
pub struct Reassembly {
    pub layered: LayeredCat,
    /// `(point, local object)` for each object.
    pub object_origins: Vec<(usize, usize)>,
    pub origins: Vec<MorphismOrigin>,
}

/// Strict nonempty proper subsequences of `s`.
fn proper_faces(s: &[usize]) -> Vec<Vec<usize>> {
    let m = s.len();
    (1u64..(1 << m) - 1)
        .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect())
        .collect()
}

impl Decollage {
    pub fn new(
        base: FinPoset,
        values: Vec<Arc<FinCat>>,
        restrictions: BTreeMap<(usize, usize), Functor>,
    ) -> Result<Self, DecollageError> {
        let sd = subdivision(&base);
        if values.len() != sd.len() {
            return Err(DecollageError::Shape(format!(
                "expected {} values, got {}",
                sd.len(),
                values.len()
            )));
        }
        let mut expected = 0;
        for (i, s) in sd.strings.iter().enumerate() {
            for face in proper_faces(s) {
                let j = sd.index_of(&face).expect("faces are strings");
                let label = |k: usize| sd.poset.label(k).to_string();
                let Some(f) = restrictions.get(&(i, j)) else {
                    return Err(DecollageError::Shape(format!("missing restriction {} -> {}", label(i), label(j))));
                };
                if **f.source() != *values[i] || **f.target() != *values[j] {
                    return Err(DecollageError::Shape(format!(
                        "restriction {} -> {} has the wrong endpoints",
                        label(i),
                        label(j)
                    )));
                }
                expected += 1;
            }
        }
        if restrictions.len() != expected {
            return Err(DecollageError::Shape("restriction between non-nested strings".into()));
        }
        Ok(Decollage {
            base,
            sd,
            values,
            restrictions,
        })
    }

    pub fn base(&self) -> &FinPoset {
        &self.base
    }

    pub fn subdivision(&self) -> &Subdivision {
        &self.sd
    }

    pub fn values(&self) -> &[Arc<FinCat>] {
        &self.values
    }

    pub fn restrictions(&self) -> &BTreeMap<(usize, usize), Functor> {
        &self.restrictions
    }

    pub fn index(&self, string: &[usize]) -> usize {
        self.sd.index_of(string).expect("string of the base")
    }

    pub fn value(&self, string: &[usize]) -> &Arc<FinCat> {
        &self.values[self.index(string)]
    }

    pub fn restriction(&self, from: &[usize], to: &[usize]) -> &Functor {
        &self.restrictions[&(self.index(from), self.index(to))]
    }

    fn label(&self, i: usize) -> String {
        self.sd.poset.label(i).to_string()
    }

    /// The comparison functor from the value at `string` to the iterated
    /// strict fiber product of its edge values over its vertex values.
    pub fn segal_comparison(&self, string: &[usize]) -> Functor {
        let m = string.len() - 1;
        assert!(m >= 1);
        let edge = |k: usize| [string[k - 1], string[k]];
        let mut phi = self.restriction(string, &edge(1)).clone();
        let mut last = self.restriction(&edge(1), &[string[1]]).clone();
        for k in 2..=m {
            let e = edge(k);
            let s = self.restriction(&e, &[string[k - 1]]);
            let prod = comma(&last, s).expect("common vertex value");
            let to_edge = self.restriction(string, &e);
            let vertex = self.restriction(string, &[string[k - 1]]);
            let v = vertex.target();
            let obj_index: HashMap<(usize, usize, usize), usize> =
                prod.objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
            let mor_index: HashMap<(usize, usize, usize, usize), usize> = (0..prod.cat.morphism_count())
                .map(|j| {
                    let (g, d) = prod.morphisms[j];
                    ((prod.cat.source(j), prod.cat.target(j), g, d), j)
                })
                .collect();
            let src = phi.source().clone();
            let objects: Vec<usize> = (0..src.object_count())
                .map(|x| obj_index[&(phi.object(x), to_edge.object(x), v.identity(vertex.object(x)))])
                .collect();
            let morphisms = (0..src.morphism_count())
                .map(|f| {
                    mor_index[&(
                        objects[src.source(f)],
                        objects[src.target(f)],
                        phi.morphism(f),
                        to_edge.morphism(f),
                    )]
                })
                .collect();
            let next_last = prod
                .to_target
                .then(self.restriction(&e, &[string[k]]))
                .expect("composable");
            phi = Functor::new(src, prod.cat.clone(), objects, morphisms).expect("comparison is a functor");
            last = next_last;
        }
        phi
    }

    pub fn violations(&self) -> Vec<DecollageViolation> {
        let mut bad = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_groupoid() {
                bad.push(DecollageViolation::NotGroupoid { string: self.label(i) });
            }
        }
        for (i, s) in self.sd.strings.iter().enumerate() {
            for mid in proper_faces(s) {
                for low in proper_faces(&mid) {
                    let direct = self.restriction(s, &low);
                    let two = self.restriction(s, &mid).then(self.restriction(&mid, &low));
                    if two.as_ref() != Ok(direct) {
                        bad.push(DecollageViolation::NotFunctorial {
                            from: self.label(i),
                            via: self.label(self.index(&mid)),
                            to: self.label(self.index(&low)),
                        });
                    }
                }
            }
        }
        if !bad.is_empty() {
            return bad;
        }
        for (i, s) in self.sd.strings.iter().enumerate() {
            if s.len() == 2 {
                let (sf, tf) = (self.restriction(s, &s[..1]), self.restriction(s, &s[1..]));
                let c = &self.values[i];
                let faithful = (0..c.object_count()).all(|a| {
                    (0..c.object_count()).all(|b| {
                        let hom = c.hom(a, b);
                        let mut seen: Vec<(usize, usize)> =
                            hom.iter().map(|&m| (sf.morphism(m), tf.morphism(m))).collect();
                        seen.sort_unstable();
                        seen.dedup();
                        seen.len() == hom.len()
                    })
                });
                if !faithful {
                    bad.push(DecollageViolation::EdgeNotFaithful { string: self.label(i) });
                }
            }
            if s.len() >= 3 {
                let phi = self.segal_comparison(s);
                if !phi.is_fully_faithful() {
                    bad.push(DecollageViolation::SegalNotFullyFaithful { string: self.label(i) });
                }
                if !phi.is_essentially_surjective() {
                    bad.push(DecollageViolation::SegalNotEssentiallySurjective { string: self.label(i) });
                }
            }
        }
        if bad.is_empty() && self.reassemble().is_err() {
            bad.push(DecollageViolation::AssociativityFailure);
        }
        bad
    }

    pub fn validate(&self) -> Result<(), DecollageError> {
        let bad = self.violations();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(DecollageError::Invalid(bad))
        }
    }

    /// The layered category glued from the décollage: strata from singleton
    /// values, Hom over `p < q` from homFiber components of the edge value,
    /// composition through the Segal equivalence of triple strings.
    pub fn reassemble(&self) -> Result<Reassembly, DecollageError> {
        Reassembler::new(self).run()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Local { p: usize, m: usize },
    Cross { p: usize, q: usize, x: usize, y: usize, c: usize },
}

struct Edge {
    s: Functor,
    t: Functor,
    value: Arc<FinCat>,
    /// Fiber over `(x, y)` and an index of its elements.
    fibers: HashMap<(usize, usize), (PairFiber, HashMap<(usize, usize, usize), usize>)>,
}

struct Reassembler<'a> {
    d: &'a Decollage,
    points: Vec<Arc<FinCat>>,
    edges: HashMap<(usize, usize), Edge>,
}

impl<'a> Reassembler<'a> {
    fn new(d: &'a Decollage) -> Self {
        let n = d.base.len();
        let points: Vec<Arc<FinCat>> = (0..n).map(|p| d.value(&[p]).clone()).collect();
        let mut edges = HashMap::new();
        for p in 0..n {
            for q in 0..n {
                if !d.base.lt(p, q) {
                    continue;
                }
                let s = d.restriction(&[p, q], &[p]).clone();
                let t = d.restriction(&[p, q], &[q]).clone();
                let mut fibers = HashMap::new();
                for x in 0..points[p].object_count() {
                    for y in 0..points[q].object_count() {
                        let f = pair_fiber(&s, &t, x, y).expect("endpoints in range");
                        let index = f.elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
                        fibers.insert((x, y), (f, index));
                    }
                }
                let value = d.value(&[p, q]).clone();
                edges.insert((p, q), Edge { s, t, value, fibers });
            }
        }
        Reassembler { d, points, edges }
    }

    fn canonical(&self, p: usize, q: usize, l: usize, a: usize, b: usize) -> Key {
        let e = &self.edges[&(p, q)];
        let (x, y) = (self.points[p].target(a), self.points[q].target(b));
        let (f, index) = &e.fibers[&(x, y)];
        let c = f.component[index[&(l, a, b)]];
        Key::Cross { p, q, x, y, c }
    }

    fn representative(&self, key: &Key) -> (usize, usize, usize) {
        let Key::Cross { p, q, x, y, c } = *key else { unreachable!() };
        let (f, _) = &self.edges[&(p, q)].fibers[&(x, y)];
        f.elements[f.representatives[c]]
    }

    fn compose(&self, g: &Key, f: &Key) -> Key {
        match (g, f) {
            (&Key::Local { p, m: b }, &Key::Local { m: a, .. }) => Key::Local {
                p,
                m: self.points[p].composite(b, a),
            },
            (&Key::Local { m: beta, .. }, &Key::Cross { p, q, .. }) => {
                let (l, a, b) = self.representative(f);
                self.canonical(p, q, l, a, self.points[q].composite(beta, b))
            }
            (&Key::Cross { p, q, .. }, &Key::Local { m: alpha, .. }) => {
                let (l, a, b) = self.representative(g);
                let inv = self.points[p].inverse(alpha).expect("groupoid");
                self.canonical(p, q, l, self.points[p].composite(inv, a), b)
            }
            (&Key::Cross { q: r, .. }, &Key::Cross { p, q, .. }) => {
                let (l1, a1, b1) = self.representative(f);
                let (l2, a2, b2) = self.representative(g);
                let vq = &self.points[q];
                let theta = vq.composite(vq.inverse(a2).expect("groupoid"), b1);
                let (w, lam1, lam2) = self.segal_lift(p, q, r, l1, l2, theta);
                let (e1, e2) = (&self.edges[&(p, q)], &self.edges[&(q, r)]);
                let l = self.d.restriction(&[p, q, r], &[p, r]).object(w);
                let a = self.points[p].composite(a1, e1.s.morphism(lam1));
                let b = self.points[r].composite(b2, e2.t.morphism(lam2));
                self.canonical(p, r, l, a, b)
            }
        }
    }

    /// Least object `w` of the triple value with an isomorphism
    /// `(λ1, λ2): Φ(w) -> (ℓ1, ℓ2, θ)` in the fiber product, with the least such λ's.
    fn segal_lift(&self, p: usize, q: usize, r: usize, l1: usize, l2: usize, theta: usize) -> (usize, usize, usize) {
        let triple = self.d.value(&[p, q, r]);
        let to_pq = self.d.restriction(&[p, q, r], &[p, q]);
        let to_qr = self.d.restriction(&[p, q, r], &[q, r]);
        let (e1, e2) = (&self.edges[&(p, q)], &self.edges[&(q, r)]);
        let vq = &self.points[q];
        for w in 0..triple.object_count() {
            let (m1, m2) = (to_pq.object(w), to_qr.object(w));
            for &lam1 in e1.value.hom(m1, l1) {
                for &lam2 in e2.value.hom(m2, l2) {
                    if e2.s.morphism(lam2) == vq.composite(theta, e1.t.morphism(lam1)) {
                        return (w, lam1, lam2);
                    }
                }
            }
        }
        panic!("Segal comparison is essentially surjective")
    }

    fn run(self) -> Result<Reassembly, DecollageError> {
        let base = &self.d.base;
        let n = base.len();
        let mut object_origins = Vec::new();
        let mut names = Vec::new();
        for p in 0..n {
            for x in 0..self.points[p].object_count() {
                object_origins.push((p, x));
                names.push(self.points[p].object_name(x).to_string());
            }
        }
        let mut morphisms = Vec::new();
        for (i, &(p, x)) in object_origins.iter().enumerate() {
            for (j, &(q, y)) in object_origins.iter().enumerate() {
                if p == q {
                    for &m in self.points[p].hom(x, y) {
                        let name = self.points[p].morphism(m).name.clone();
                        morphisms.push((Key::Local { p, m }, MorphismData { name, source: i, target: j }));
                    }
                } else if base.lt(p, q) {
                    let e = &self.edges[&(p, q)];
                    let (f, _) = &e.fibers[&(x, y)];
                    for c in 0..f.len() {
                        let (l, a, b) = f.elements[f.representatives[c]];
                        let name = if self.points[p].is_identity(a) && self.points[q].is_identity(b) {
                            e.value.object_name(l).to_string()
                        } else {
                            format!(
                                "[{},{},{}]",
                                e.value.object_name(l),
                                self.points[p].morphism(a).name,
                                self.points[q].morphism(b).name
                            )
                        };
                        morphisms.push((Key::Cross { p, q, x, y, c }, MorphismData { name, source: i, target: j }));
                    }
                }
            }
        }
        let origins = morphisms
            .iter()
            .map(|(k, _)| match *k {
                Key::Local { p, m } => MorphismOrigin::Stratum { point: p, morphism: m },
                Key::Cross { p, q, .. } => {
                    let (arrow, a, b) = self.representative(k);
                    MorphismOrigin::Link { p, q, arrow, a, b }
                }
            })
            .collect();
        let offsets: Vec<usize> = (0..n)
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += self.points[p].object_count();
                Some(o)
            })
            .collect();
        let cat = FinCat::from_keys(
            names,
            morphisms,
            |i| {
                let (p, x) = object_origins[i];
                Key::Local {
                    p,
                    m: self.points[p].identity(x),
                }
            },
            |g, f| self.compose(g, f),
        )
        .map_err(|_| DecollageError::AssociativityFailure)?;
        if !cat.validate().is_empty() {
            return Err(DecollageError::AssociativityFailure);
        }
        debug_assert!(object_origins.iter().enumerate().all(|(i, &(p, x))| offsets[p] + x == i));
        let labels = object_origins.iter().map(|o| o.0).collect();
        let layered = LayeredCat::new(Arc::new(cat), base.clone(), labels)?;
        Ok(Reassembly {
            layered,
            object_origins,
            origins,
        })
    }
}

/// `Σ ↦` groupoid of functors `Σ -> Π` over the base, with forgetful restrictions.
pub fn nerve(pi: &LayeredCat) -> Decollage {
    let base = pi.base().clone();
    let sd = subdivision(&base);
    let c = &**pi.cat();
    let labels = pi.labels();
    // Objects are chains [x0, f1, ..., fm] with fk lying over p_{k-1} <= p_k.
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::with_capacity(sd.len());
    for s in &sd.strings {
        let mut out = Vec::new();
        for x0 in pi.objects_over(s[0]) {
            let mut current = vec![x0];
            extend_chain(c, labels, s, x0, &mut current, &mut out);
        }
        chains.push(out);
    }
    let chain_objects = |chain: &[usize]| -> Vec<usize> {
        let mut objs = vec![chain[0]];
        objs.extend(chain[1..].iter().map(|&f| c.target(f)));
        objs
    };
    let mut values = Vec::with_capacity(sd.len());
    let mut keys: Vec<Vec<(usize, usize, Vec<usize>)>> = Vec::with_capacity(sd.len());
    for (si, s) in sd.strings.iter().enumerate() {
        let objs = &chains[si];
        let vertices: Vec<Vec<usize>> = objs.iter().map(|ch| chain_objects(ch)).collect();
        let mut morphisms = Vec::new();
        for i in 0..objs.len() {
            for j in 0..objs.len() {
                let mut sigma = Vec::new();
                squares(c, &objs[i], &objs[j], &vertices[i], &vertices[j], &mut sigma, &mut morphisms, i, j);
            }
        }
        let names = objs
            .iter()
            .map(|ch| {
                if s.len() == 1 {
                    c.object_name(ch[0]).to_string()
                } else {
                    ch[1..].iter().map(|&f| c.morphism(f).name.as_str()).collect::<Vec<_>>().join(";")
                }
            })
            .collect();
        let data: Vec<((usize, usize, Vec<usize>), MorphismData)> = morphisms
            .into_iter()
            .map(|(i, j, sigma)| {
                let name = if sigma.len() == 1 {
                    c.morphism(sigma[0]).name.clone()
                } else {
                    let parts: Vec<&str> = sigma.iter().map(|&g| c.morphism(g).name.as_str()).collect();
                    format!("({})", parts.join(","))
                };
                ((i, j, sigma), MorphismData { name, source: i, target: j })
            })
            .collect();
        keys.push(data.iter().map(|(k, _)| k.clone()).collect());
        let vs = vertices.clone();
        let cat = FinCat::from_keys(
            names,
            data,
            |i| (i, i, vs[i].iter().map(|&x| c.identity(x)).collect()),
            |g, f| (f.0, g.1, g.2.iter().zip(&f.2).map(|(&b, &a)| c.composite(b, a)).collect()),
        )
        .expect("levelwise composition");
        values.push(Arc::new(cat));
    }
    let chain_index: Vec<HashMap<Vec<usize>, usize>> = chains
        .iter()
        .map(|objs| objs.iter().enumerate().map(|(i, ch)| (ch.clone(), i)).collect())
        .collect();
    let key_index: Vec<HashMap<(usize, usize, Vec<usize>), usize>> = keys
        .iter()
        .map(|ks| ks.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect())
        .collect();
    let mut restrictions = BTreeMap::new();
    for (i, s) in sd.strings.iter().enumerate() {
        for face in proper_faces(s) {
            let j = sd.index_of(&face).expect("face");
            let positions: Vec<usize> = face.iter().map(|p| s.iter().position(|q| q == p).unwrap()).collect();
            let restrict_chain = |ch: &[usize]| -> Vec<usize> {
                let objs = chain_objects(ch);
                let mut out = vec![objs[positions[0]]];
                for w in positions.windows(2) {
                    let mut f = c.identity(objs[w[0]]);
                    for k in w[0] + 1..=w[1] {
                        f = c.composite(ch[k], f);
                    }
                    out.push(f);
                }
                out
            };
            let obj_map: Vec<usize> = chains[i].iter().map(|ch| chain_index[j][&restrict_chain(ch)]).collect();
            let mor_map = keys[i]
                .iter()
                .map(|(a, b, sigma)| {
                    let sub: Vec<usize> = positions.iter().map(|&k| sigma[k]).collect();
                    key_index[j][&(obj_map[*a], obj_map[*b], sub)]
                })
                .collect();
            restrictions.insert(
                (i, j),
                Functor::new_unchecked(values[i].clone(), values[j].clone(), obj_map, mor_map),
            );
        }
    }
    Decollage {
        base,
        sd,
        values,
        restrictions,
    }
}

fn extend_chain(
    c: &FinCat,
    labels: &[usize],
    s: &[usize],
    at: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let k = current.len();
    if k == s.len() {
        out.push(current.clone());
        return;
    }
    for &f in c.out_of(at) {
        if labels[c.target(f)] == s[k] {
            current.push(f);
            extend_chain(c, labels, s, c.target(f), current, out);
            current.pop();
        }
    }
}

/// Levelwise maps `σ` from chain `a` to chain `b` forming commuting squares.
#[allow(clippy::too_many_arguments)]
fn squares(
    c: &FinCat,
    a: &[usize],
    b: &[usize],
    va: &[usize],
    vb: &[usize],
    sigma: &mut Vec<usize>,
    out: &mut Vec<(usize, usize, Vec<usize>)>,
    i: usize,
    j: usize,
) {
    let k = sigma.len();
    if k == va.len() {
        out.push((i, j, sigma.clone()));
        return;
    }
    for &g in c.hom(va[k], vb[k]) {
        if k > 0 && c.composite(g, a[k]) != c.composite(b[k], sigma[k - 1]) {
            continue;
        }
        sigma.push(g);
        squares(c, a, b, va, vb, sigma, out, i, j);
        sigma.pop();
    }
}

/// The décollage over a base without 3-chains with one-object values `B G`.
/// `edges[(p, q)]` gives homomorphisms from the edge group to `G_p` and `G_q`.
pub fn group_decollage(
    base: &FinPoset,
    point_groups: &[Arc<FinGroup>],
    edges: &BTreeMap<(usize, usize), (GroupHom, GroupHom)>,
) -> Result<Decollage, DecollageError> {
    if base.height().is_some_and(|h| h >= 2) {
        return Err(DecollageError::HeightExceeded);
    }
    if point_groups.len() != base.len() {
        return Err(DecollageError::Shape(format!(
            "expected {} point groups, got {}",
            base.len(),
            point_groups.len()
        )));
    }
    for (&(p, q), (to_p, to_q)) in edges {
        if p >= base.len() || q >= base.len() || !base.lt(p, q) {
            return Err(DecollageError::Shape(format!("edge ({p}, {q}) is not a strict relation")));
        }
        if to_p.source() != to_q.source() {
            return Err(DecollageError::Shape(format!("edge ({p}, {q}) homomorphisms have different sources")));
        }
        if to_p.target() != &point_groups[p] || to_q.target() != &point_groups[q] {
            return Err(DecollageError::Shape(format!("edge ({p}, {q}) homomorphisms have the wrong targets")));
        }
    }
    let sd = subdivision(base);
    let mut values = Vec::with_capacity(sd.len());
    for s in &sd.strings {
        let g = match s.as_slice() {
            [p] => point_groups[*p].clone(),
            [p, q] => edges
                .get(&(*p, *q))
                .ok_or_else(|| DecollageError::Shape(format!("missing edge group for ({p}, {q})")))?
                .0
                .source()
                .clone(),
            _ => unreachable!("height at most 1"),
        };
        values.push(Arc::new(g.to_cat()));
    }
    let mut restrictions = BTreeMap::new();
    for (i, s) in sd.strings.iter().enumerate() {
        if let [p, q] = s.as_slice() {
            let (to_p, to_q) = &edges[&(*p, *q)];
            for (point, h) in [(*p, to_p), (*q, to_q)] {
                let j = sd.index_of(&[point]).expect("singleton");
                let n = h.source().order();
                let f = Functor::new(values[i].clone(), values[j].clone(), vec![0], (0..n).map(|x| h.apply(x)).collect())?;
                restrictions.insert((i, j), f);
            }
        }
    }
    Decollage::new(base.clone(), values, restrictions)
}

impl Decollage {
    /// Whether each string's value is equivalent to that of `other`.
    pub fn objectwise_equivalent(&self, other: &Decollage, cap: usize) -> Result<bool, CatError> {
        if self.sd.strings != other.sd.strings {
            return Ok(false);
        }
        for (a, b) in self.values.iter().zip(&other.values) {
            if crate::cat::are_equivalent(a, b, cap)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
