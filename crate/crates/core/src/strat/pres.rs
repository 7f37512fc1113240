use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::cat::{FinCat, MorphismData};
use crate::order::FinPoset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresError {
    #[error("generator {0} has an endpoint outside the object list")]
    BadGenerator(usize),
    #[error("relation {0} contains a non-composable word")]
    NotComposable(usize),
    #[error("relation {0} relates non-parallel words")]
    NotParallel(usize),
    #[error("inverted flags must be given for every generator")]
    InvertedArity,
    #[error("base labels must be given for every object, inside the base")]
    BadBase,
    #[error("presentations with inverted generators cannot be realized as finite categories")]
    HasInverted,
    #[error("search cap of {0} morphisms exceeded")]
    CapExceeded(usize),
    #[error("rewriting system is not confluent; realization is not a category")]
    NotConfluent,
}

/// A word of generators in diagrammatic order, starting at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub steps: Vec<usize>,
}

impl Path {
    pub fn new(start: usize, steps: Vec<usize>) -> Self {
        Path { start, steps }
    }

    fn shortlex_key(&self) -> (usize, &[usize]) {
        (self.steps.len(), &self.steps)
    }
}

/// A category presented by generators and relations, some generators
/// formally inverted, optionally labeled over a base poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresCat {
    pub objects: Vec<String>,
    pub generators: Vec<MorphismData>,
    pub relations: Vec<(Path, Path)>,
    pub inverted: Vec<bool>,
    pub base: Option<(FinPoset, Vec<usize>)>,
}

impl fmt::Display for PresCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} objects, {} generators ({} inverted), {} relations",
            self.objects.len(),
            self.generators.len(),
            self.inverted.iter().filter(|&&i| i).count(),
            self.relations.len()
        )
    }
}

impl PresCat {
    pub fn new(
        objects: Vec<String>,
        generators: Vec<MorphismData>,
        relations: Vec<(Path, Path)>,
        inverted: Vec<bool>,
        base: Option<(FinPoset, Vec<usize>)>,
    ) -> Result<Self, PresError> {
        let p = PresCat {
            objects,
            generators,
            relations,
            inverted,
            base,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<(), PresError> {
        let n = self.objects.len();
        if let Some(i) = self.generators.iter().position(|g| g.source >= n || g.target >= n) {
            return Err(PresError::BadGenerator(i));
        }
        if self.inverted.len() != self.generators.len() {
            return Err(PresError::InvertedArity);
        }
        if let Some((b, labels)) = &self.base {
            if labels.len() != n || labels.iter().any(|&l| l >= b.len()) {
                return Err(PresError::BadBase);
            }
        }
        for (i, (l, r)) in self.relations.iter().enumerate() {
            let (Some(a), Some(b)) = (self.end(l), self.end(r)) else {
                return Err(PresError::NotComposable(i));
            };
            if l.start != r.start || a != b {
                return Err(PresError::NotParallel(i));
            }
        }
        Ok(())
    }

    /// Endpoint of a word, if it is composable.
    pub fn end(&self, path: &Path) -> Option<usize> {
        if path.start >= self.objects.len() {
            return None;
        }
        let mut at = path.start;
        for &g in &path.steps {
            let gen = self.generators.get(g)?;
            if gen.source != at {
                return None;
            }
            at = gen.target;
        }
        Some(at)
    }

    /// Connected components of the underlying graph, by least object.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.objects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for g in &self.generators {
            let (a, b) = (find(&mut parent, g.source), find(&mut parent, g.target));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(x);
        }
        groups
    }

    fn rules(&self) -> Vec<(Path, Path)> {
        self.relations
            .iter()
            .filter_map(|(l, r)| match l.shortlex_key().cmp(&r.shortlex_key()) {
                std::cmp::Ordering::Greater => Some((l.clone(), r.clone())),
                std::cmp::Ordering::Less => Some((r.clone(), l.clone())),
                std::cmp::Ordering::Equal => None,
            })
            .collect()
    }

    fn normalize(&self, rules: &[(Path, Path)], mut path: Path) -> Path {
        'outer: loop {
            let mut at = path.start;
            for i in 0..path.steps.len() {
                for (lhs, rhs) in rules {
                    if lhs.start == at && path.steps[i..].starts_with(&lhs.steps) {
                        let tail = path.steps.split_off(i + lhs.steps.len());
                        path.steps.truncate(i);
                        path.steps.extend_from_slice(&rhs.steps);
                        path.steps.extend(tail);
                        continue 'outer;
                    }
                }
                at = self.generators[path.steps[i]].target;
            }
            return path;
        }
    }

    /// The finite category presented, by shortlex rewriting along the
    /// relations; fails if any generator is inverted or `cap` morphisms are exceeded.
    pub fn realize(&self, cap: usize) -> Result<FinCat, PresError> {
        if self.inverted.iter().any(|&i| i) {
            return Err(PresError::HasInverted);
        }
        let rules = self.rules();
        let mut elements: Vec<Path> = (0..self.objects.len()).map(|x| Path::new(x, vec![])).collect();
        let mut seen: HashMap<Path, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut queue: VecDeque<usize> = (0..elements.len()).collect();
        while let Some(i) = queue.pop_front() {
            let end = self.end(&elements[i]).expect("composable");
            for (g, gen) in self.generators.iter().enumerate() {
                if gen.source != end {
                    continue;
                }
                let mut w = elements[i].clone();
                w.steps.push(g);
                let w = self.normalize(&rules, w);
                if !seen.contains_key(&w) {
                    if elements.len() >= cap {
                        return Err(PresError::CapExceeded(cap));
                    }
                    seen.insert(w.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(w);
                }
            }
        }
        let morphisms = elements
            .iter()
            .map(|w| {
                let name = if w.steps.is_empty() {
                    format!("1_{}", self.objects[w.start])
                } else {
                    w.steps.iter().map(|&g| self.generators[g].name.as_str()).collect::<Vec<_>>().join(";")
                };
                let data = MorphismData {
                    name,
                    source: w.start,
                    target: self.end(w).expect("composable"),
                };
                (w.clone(), data)
            })
            .collect();
        let cat = FinCat::from_keys(
            self.objects.clone(),
            morphisms,
            |x| Path::new(x, vec![]),
            |g, f| {
                let mut steps = f.steps.clone();
                steps.extend_from_slice(&g.steps);
                self.normalize(&rules, Path::new(f.start, steps))
            },
        )
        .map_err(|_| PresError::NotConfluent)?;
        if cat.validate().is_empty() {
            Ok(cat)
        } else {
            Err(PresError::NotConfluent)
        }
    }
}
