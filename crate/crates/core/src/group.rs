//! Permutation groups, homomorphisms between them, and finite group
//! presentations.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::cat::FinCat;

/// Default bound on the order of an enumerated group.
pub const DEFAULT_ORDER_CAP: usize = 5040;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator {0} is not a permutation of the points")]
    NotAPermutation(usize),
    #[error("cannot parse cycle notation {0:?}")]
    BadCycles(String),
    #[error("group order exceeds the cap of {0}")]
    TooLarge(usize),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image index {0} is not an element of the target")]
    UnknownElement(usize),
    #[error("generator images do not define a homomorphism")]
    NotAHomomorphism,
}

/// A permutation group on `0..degree` given by generators; elements are
/// enumerated breadth-first from the identity (element 0) by left
/// multiplication with the generators.
pub struct FinGroup {
    degree: usize,
    generators: Vec<Vec<usize>>,
    elements: OnceLock<Result<Elements, GroupError>>,
}

struct Elements {
    perms: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    generator_index: Vec<usize>,
}

impl Clone for FinGroup {
    fn clone(&self) -> Self {
        FinGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            elements: OnceLock::new(),
        }
    }
}

impl PartialEq for FinGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.generators == other.generators
    }
}

impl Eq for FinGroup {}

impl fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| cycle_notation(g)).collect();
        write!(f, "FinGroup(degree {}, <{}>)", self.degree, gens.join(", "))
    }
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

/// 1-based cycle notation, `()` for the identity.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Parses 1-based cycle notation such as `(1 2)(3 4 5)` or `(1,2)`.
pub fn parse_cycles(degree: usize, text: &str) -> Result<Vec<usize>, GroupError> {
    let bad = || GroupError::BadCycles(text.to_string());
    let mut p: Vec<usize> = (0..degree).collect();
    let mut rest = text.trim();
    let mut seen = vec![false; degree];
    while !rest.is_empty() {
        let inner_end = rest.find(')').ok_or_else(bad)?;
        if !rest.starts_with('(') {
            return Err(bad());
        }
        let cycle: Vec<usize> = rest[1..inner_end]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().ok().filter(|&v| v >= 1 && v <= degree).map(|v| v - 1))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        for (i, &x) in cycle.iter().enumerate() {
            if seen[x] {
                return Err(bad());
            }
            seen[x] = true;
            p[x] = cycle[(i + 1) % cycle.len()];
        }
        rest = rest[inner_end + 1..].trim_start();
    }
    Ok(p)
}

impl FinGroup {
    pub fn new(degree: usize, generators: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        for (i, g) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(GroupError::NotAPermutation(i));
            }
        }
        Ok(FinGroup {
            degree,
            generators,
            elements: OnceLock::new(),
        })
    }

    pub fn from_cycles(degree: usize, generators: &[&str]) -> Result<Self, GroupError> {
        let gens = generators
            .iter()
            .map(|g| parse_cycles(degree, g))
            .collect::<Result<_, _>>()?;
        FinGroup::new(degree, gens)
    }

    pub fn trivial() -> Self {
        FinGroup::new(1, vec![]).expect("valid")
    }

    /// The cyclic group of order `n` acting on `n` points.
    pub fn cyclic(n: usize) -> Self {
        let n = n.max(1);
        FinGroup::new(n, vec![(0..n).map(|i| (i + 1) % n).collect()]).expect("valid")
    }

    /// The symmetric group on `n` points, generated by `(1 2)` and `(1 2 … n)`.
    pub fn symmetric(n: usize) -> Self {
        let n = n.max(1);
        let mut swap: Vec<usize> = (0..n).collect();
        if n >= 2 {
            swap.swap(0, 1);
        }
        FinGroup::new(n, vec![swap, (0..n).map(|i| (i + 1) % n).collect()]).expect("valid")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    /// Enumerates the elements, failing above `cap`.
    pub fn enumerate(&self, cap: usize) -> Result<(), GroupError> {
        self.elements
            .get_or_init(|| {
                let identity: Vec<usize> = (0..self.degree).collect();
                let mut perms = vec![identity.clone()];
                let mut index = HashMap::from([(identity, 0)]);
                let mut queue = VecDeque::from([0]);
                while let Some(i) = queue.pop_front() {
                    for g in &self.generators {
                        let p = compose(g, &perms[i]);
                        if !index.contains_key(&p) {
                            if perms.len() >= cap {
                                return Err(GroupError::TooLarge(cap));
                            }
                            index.insert(p.clone(), perms.len());
                            queue.push_back(perms.len());
                            perms.push(p);
                        }
                    }
                }
                let generator_index = self.generators.iter().map(|g| index[g]).collect();
                Ok(Elements {
                    perms,
                    index,
                    generator_index,
                })
            })
            .as_ref()
            .map(|_| ())
            .map_err(|e| e.clone())
    }

    fn elems(&self) -> &Elements {
        self.enumerate(DEFAULT_ORDER_CAP).expect("group order within the default cap");
        self.elements.get().unwrap().as_ref().unwrap()
    }

    pub fn order(&self) -> usize {
        self.elems().perms.len()
    }

    pub fn element(&self, i: usize) -> &[usize] {
        &self.elems().perms[i]
    }

    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        self.elems().index.get(p).copied()
    }

    /// Element index of generator `j`.
    pub fn generator(&self, j: usize) -> usize {
        self.elems().generator_index[j]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let e = self.elems();
        e.index[&compose(&e.perms[a], &e.perms[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        let p = self.element(a);
        let mut q = vec![0; p.len()];
        for (i, &x) in p.iter().enumerate() {
            q[x] = i;
        }
        self.elems().index[&q]
    }

    pub fn element_name(&self, a: usize) -> String {
        cycle_notation(self.element(a))
    }

    /// Elements of the subgroup generated by `gens`, in increasing index order.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    /// Whether the group is abelian.
    pub fn is_abelian(&self) -> bool {
        let k = self.generators.len();
        (0..k).all(|i| (0..k).all(|j| {
            compose(&self.generators[i], &self.generators[j]) == compose(&self.generators[j], &self.generators[i])
        }))
    }

    /// `BG` as a one-object category; morphism `i` is element `i`.
    pub fn to_cat(&self) -> FinCat {
        let n = self.order();
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect();
        let names = (0..n).map(|a| self.element_name(a)).collect();
        FinCat::one_object(names, 0, &mul).expect("groups are categories")
    }
}

/// A homomorphism given by images of the source generators.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FinGroup>,
    target: Arc<FinGroup>,
    images: Vec<usize>,
    map: Vec<usize>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.map == other.map
    }
}

impl GroupHom {
    pub fn new(source: Arc<FinGroup>, target: Arc<FinGroup>, images: Vec<usize>) -> Result<Self, GroupError> {
        let k = source.generators().len();
        if images.len() != k {
            return Err(GroupError::ImageCount {
                expected: k,
                got: images.len(),
            });
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= target.order()) {
            return Err(GroupError::UnknownElement(bad));
        }
        let n = source.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for j in 0..k {
                let y = source.mul(source.generator(j), x);
                let fy = target.mul(images[j], map[x]);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return Err(GroupError::NotAHomomorphism);
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
            map,
        })
    }

    /// Homomorphism from images given as permutations.
    pub fn from_perms(source: Arc<FinGroup>, target: Arc<FinGroup>, images: &[Vec<usize>]) -> Result<Self, GroupError> {
        let idx = images
            .iter()
            .map(|p| target.index_of(p).ok_or(GroupError::NotAHomomorphism))
            .collect::<Result<_, _>>()?;
        GroupHom::new(source, target, idx)
    }

    /// The inclusion of a subgroup given by generators that are elements of `target`.
    pub fn inclusion(source: Arc<FinGroup>, target: Arc<FinGroup>) -> Result<Self, GroupError> {
        let gens = source.generators().to_vec();
        GroupHom::from_perms(source, target, &gens)
    }

    pub fn identity(g: &Arc<FinGroup>) -> Self {
        let images = (0..g.generators().len()).map(|j| g.generator(j)).collect();
        GroupHom::new(g.clone(), g.clone(), images).expect("identity")
    }

    pub fn source(&self) -> &Arc<FinGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinGroup> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        (1..self.map.len()).all(|x| self.map[x] != 0)
    }

    pub fn image(&self) -> Vec<usize> {
        let mut im = self.map.clone();
        im.sort_unstable();
        im.dedup();
        im
    }
}

/// A letter `(generator, ±1)` of a word in a free group.
pub type Letter = (usize, i8);

/// A finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn abelianized_relators(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|w| {
                let mut row = vec![0i64; self.generators.len()];
                for &(g, e) in w {
                    row[g] += e as i64;
                }
                row
            })
            .collect()
    }

    /// Evaluates a word in a group given generator images.
    pub fn evaluate(group: &FinGroup, images: &[usize], word: &[Letter]) -> usize {
        word.iter().fold(0, |acc, &(g, e)| {
            let x = if e > 0 { images[g] } else { group.inv(images[g]) };
            group.mul(acc, x)
        })
    }
}

/// The commutator `[a, b] = a b a^-1 b^-1`.
pub fn commutator(a: usize, b: usize) -> Vec<Letter> {
    vec![(a, 1), (b, 1), (a, -1), (b, -1)]
}
