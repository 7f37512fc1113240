use std::collections::HashMap;

use super::{eval_word, Domain, SetFunctor, SheafError};

const NONE: usize = usize::MAX;

/// Generators, inversion flags and relations of a domain, in generator indices.
#[derive(Clone, Debug)]
pub(crate) struct Shape {
    pub objects: usize,
    pub gens: Vec<(usize, usize)>,
    pub inverted: Vec<bool>,
    /// `(start, lhs, rhs)`, words in diagrammatic order.
    pub relations: Vec<(usize, Vec<usize>, Vec<usize>)>,
    /// For a finite category, `words[m]` expresses morphism `m` in generators.
    pub words: Vec<Vec<usize>>,
}

impl Shape {
    pub fn of(domain: &Domain) -> Shape {
        match domain {
            Domain::Cat(c) => {
                let (gen_morphisms, words) = c.generator_words();
                let gens: Vec<(usize, usize)> = gen_morphisms.iter().map(|&g| (c.source(g), c.target(g))).collect();
                let mut relations = Vec::new();
                for m in 0..c.morphism_count() {
                    for (i, &g) in gen_morphisms.iter().enumerate() {
                        if c.source(g) != c.target(m) {
                            continue;
                        }
                        let mut lhs = words[m].clone();
                        lhs.push(i);
                        let rhs = &words[c.composite(g, m)];
                        if &lhs != rhs {
                            relations.push((c.source(m), lhs, rhs.clone()));
                        }
                    }
                }
                Shape {
                    objects: c.object_count(),
                    inverted: vec![false; gens.len()],
                    gens,
                    relations,
                    words,
                }
            }
            Domain::Pres(p) => Shape {
                objects: p.objects.len(),
                gens: p.generators.iter().map(|g| (g.source, g.target)).collect(),
                inverted: p.inverted.clone(),
                relations: p
                    .relations
                    .iter()
                    .map(|(l, r)| (l.start, l.steps.clone(), r.steps.clone()))
                    .collect(),
                words: Vec::new(),
            },
        }
    }

    /// The functor on `domain` determined by generator images.
    pub fn expand(&self, domain: &Domain, sizes: &[usize], gen_maps: &[Vec<usize>]) -> SetFunctor {
        let maps = match domain {
            Domain::Cat(c) => (0..c.morphism_count())
                .map(|m| {
                    (0..sizes[c.source(m)])
                        .map(|e| eval_word(gen_maps, &self.words[m], e))
                        .collect()
                })
                .collect(),
            Domain::Pres(_) => gen_maps.to_vec(),
        };
        SetFunctor::new_unchecked(domain.clone(), sizes.to_vec(), maps)
    }

    /// Visits every functor with sets of size at most `k`; returns how many.
    pub fn enumerate(
        &self,
        k: usize,
        cap: usize,
        visit: &mut dyn FnMut(&[usize], &[Vec<usize>]),
    ) -> Result<usize, SheafError> {
        let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); self.gens.len()];
        for (r, (_, l, rr)) in self.relations.iter().enumerate() {
            if let Some(&top) = l.iter().chain(rr).max() {
                by_level[top].push(r);
            }
        }
        let mut count = 0;
        let mut sizes = vec![0usize; self.objects];
        loop {
            let sizes_ok = self
                .gens
                .iter()
                .zip(&self.inverted)
                .all(|(&(s, t), &inv)| !inv || sizes[s] == sizes[t]);
            if sizes_ok {
                let mut maps = vec![Vec::new(); self.gens.len()];
                self.maps_dfs(0, &sizes, &mut maps, &by_level, &mut count, cap, visit)?;
            }
            let mut j = 0;
            while j < sizes.len() {
                sizes[j] += 1;
                if sizes[j] <= k {
                    break;
                }
                sizes[j] = 0;
                j += 1;
            }
            if j == sizes.len() {
                return Ok(count);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn maps_dfs(
        &self,
        i: usize,
        sizes: &[usize],
        maps: &mut Vec<Vec<usize>>,
        by_level: &[Vec<usize>],
        count: &mut usize,
        cap: usize,
        visit: &mut dyn FnMut(&[usize], &[Vec<usize>]),
    ) -> Result<(), SheafError> {
        if i == self.gens.len() {
            if *count >= cap {
                return Err(SheafError::CapExceeded(cap));
            }
            *count += 1;
            visit(sizes, maps);
            return Ok(());
        }
        let (s, t) = self.gens[i];
        let (n, m) = (sizes[s], sizes[t]);
        if n > 0 && m == 0 {
            return Ok(());
        }
        let mut f = vec![0usize; n];
        loop {
            let bijective_ok = !self.inverted[i] || super::is_bijection(&f, m);
            if bijective_ok {
                maps[i].clear();
                maps[i].extend_from_slice(&f);
                let ok = by_level[i].iter().all(|&r| {
                    let (start, l, rr) = &self.relations[r];
                    (0..sizes[*start]).all(|e| eval_word(maps, l, e) == eval_word(maps, rr, e))
                });
                if ok {
                    self.maps_dfs(i + 1, sizes, maps, by_level, count, cap, visit)?;
                }
            }
            let mut j = 0;
            while j < n {
                f[j] += 1;
                if f[j] < m {
                    break;
                }
                f[j] = 0;
                j += 1;
            }
            if j == n {
                return Ok(());
            }
        }
    }
}

/// A cheap isomorphism invariant: sizes, then per generator the sorted fibre
/// sizes and the number of fixed points of endomaps.
pub(crate) fn invariant_into(edges: &[(usize, usize)], sizes: &[usize], maps: &[Vec<usize>], key: &mut Vec<usize>) {
    key.clear();
    key.extend_from_slice(sizes);
    for (i, &(s, t)) in edges.iter().enumerate() {
        key.push(usize::MAX);
        let start = key.len();
        key.resize(start + sizes[t], 0);
        for &v in &maps[i] {
            key[start + v] += 1;
        }
        key[start..].sort_unstable();
        if s == t {
            key.push(maps[i].iter().enumerate().filter(|&(e, &v)| e == v).count());
        }
    }
}

/// Search state reused across many isomorphism tests on one shape.
pub(crate) struct IsoTester<'a> {
    edges: &'a [(usize, usize)],
    buffers: Buffers,
}

impl<'a> IsoTester<'a> {
    pub fn new(edges: &'a [(usize, usize)], objects: usize) -> Self {
        IsoTester {
            edges,
            buffers: Buffers::new(edges, objects),
        }
    }

    pub fn exists(&mut self, f: &[Vec<usize>], g: &[Vec<usize>], sizes: &[usize]) -> bool {
        self.buffers.reset(sizes, sizes);
        let mut search = MapSearch {
            edges: self.edges,
            f,
            g,
            g_sizes: sizes,
            bijective: true,
            allowed: &|_, _, _| true,
            b: &mut self.buffers,
        };
        search.dfs(&mut |_| true)
    }
}

/// Visits every family of maps `φ_x: F(x) -> G(x)` with `φ_t ∘ F(e) = G(e) ∘ φ_s`
/// for every edge, injective when asked and within `allowed(x, a, b)`.
/// The visitor returns `true` to stop.
#[allow(clippy::too_many_arguments)]
pub(crate) fn for_each_map(
    edges: &[(usize, usize)],
    f: &[Vec<usize>],
    g: &[Vec<usize>],
    f_sizes: &[usize],
    g_sizes: &[usize],
    bijective: bool,
    allowed: &dyn Fn(usize, usize, usize) -> bool,
    visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) {
    if bijective && f_sizes != g_sizes {
        return;
    }
    let mut buffers = Buffers::new(edges, f_sizes.len());
    buffers.reset(f_sizes, g_sizes);
    let mut search = MapSearch {
        edges,
        f,
        g,
        g_sizes,
        bijective,
        allowed,
        b: &mut buffers,
    };
    search.dfs(visit);
}

struct Buffers {
    out_edges: Vec<Vec<usize>>,
    phi: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    stack: Vec<(usize, usize, usize)>,
}

impl Buffers {
    fn new(edges: &[(usize, usize)], objects: usize) -> Self {
        let mut out_edges = vec![Vec::new(); objects];
        for (i, &(s, _)) in edges.iter().enumerate() {
            out_edges[s].push(i);
        }
        Buffers {
            out_edges,
            phi: vec![Vec::new(); objects],
            used: vec![Vec::new(); objects],
            trail: Vec::new(),
            stack: Vec::new(),
        }
    }

    fn reset(&mut self, f_sizes: &[usize], g_sizes: &[usize]) {
        for (row, &n) in self.phi.iter_mut().zip(f_sizes) {
            row.clear();
            row.resize(n, NONE);
        }
        for (row, &n) in self.used.iter_mut().zip(g_sizes) {
            row.clear();
            row.resize(n, false);
        }
        self.trail.clear();
    }
}

struct MapSearch<'a, 'b> {
    edges: &'a [(usize, usize)],
    f: &'a [Vec<usize>],
    g: &'a [Vec<usize>],
    g_sizes: &'a [usize],
    bijective: bool,
    allowed: &'a dyn Fn(usize, usize, usize) -> bool,
    b: &'b mut Buffers,
}

impl MapSearch<'_, '_> {
    fn assign(&mut self, x: usize, a: usize, b: usize) -> bool {
        let buf = &mut *self.b;
        buf.stack.clear();
        buf.stack.push((x, a, b));
        while let Some((x, a, b)) = buf.stack.pop() {
            let cur = buf.phi[x][a];
            if cur != NONE {
                if cur != b {
                    return false;
                }
                continue;
            }
            if (self.bijective && buf.used[x][b]) || !(self.allowed)(x, a, b) {
                return false;
            }
            buf.phi[x][a] = b;
            buf.used[x][b] = true;
            buf.trail.push((x, a));
            for &e in &buf.out_edges[x] {
                buf.stack.push((self.edges[e].1, self.f[e][a], self.g[e][b]));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        let buf = &mut *self.b;
        while buf.trail.len() > mark {
            let (x, a) = buf.trail.pop().expect("nonempty");
            let b = buf.phi[x][a];
            buf.phi[x][a] = NONE;
            buf.used[x][b] = false;
        }
    }

    fn dfs(&mut self, visit: &mut dyn FnMut(&[Vec<usize>]) -> bool) -> bool {
        let next = self
            .b
            .phi
            .iter()
            .enumerate()
            .find_map(|(x, row)| row.iter().position(|&v| v == NONE).map(|a| (x, a)));
        let Some((x, a)) = next else {
            return visit(&self.b.phi);
        };
        for b in 0..self.g_sizes[x] {
            if self.bijective && self.b.used[x][b] {
                continue;
            }
            let mark = self.b.trail.len();
            if self.assign(x, a, b) && self.dfs(visit) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// Families `(x_c)` with `x_t = F(e)(x_s)` for every edge, sorted.
pub(crate) fn compatible_families(edges: &[(usize, usize)], maps: &[Vec<usize>], sizes: &[usize]) -> Vec<Vec<usize>> {
    // A family is a natural map from the constant singleton functor.
    let ones = vec![1usize; sizes.len()];
    let zeros: Vec<Vec<usize>> = edges.iter().map(|_| vec![0]).collect();
    let mut out = Vec::new();
    for_each_map(edges, &zeros, maps, &ones, sizes, false, &|_, _, _| true, &mut |phi| {
        out.push(phi.iter().map(|row| row[0]).collect());
        false
    });
    out.sort();
    out
}

/// Index of each family, for lookups.
pub(crate) fn index_families(families: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    families.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect()
}
