use std::collections::HashMap;
use std::fmt;

use super::OrderError;

/// A finite partially ordered set with a dense relation matrix.
///
/// Elements are indexed `0..len()`; every element also carries a unique
/// label used for display and serialization.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinPoset {
    labels: Vec<String>,
    leq: Vec<bool>,
}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("FinPoset")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl FinPoset {
    /// Builds a poset from a full relation matrix, checking all three axioms.
    pub fn from_matrix(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, OrderError> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(OrderError::ArityMismatch {
                expected: n,
                got: leq.len(),
            });
        }
        let poset = FinPoset {
            labels,
            leq: leq.into_iter().flatten().collect(),
        };
        poset.check_labels()?;
        poset.check_axioms()?;
        Ok(poset)
    }

    /// Builds a poset from generating pairs `a <= b`, taking the reflexive
    /// and transitive closure. Fails only on antisymmetry.
    pub fn from_relations(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n {
                return Err(OrderError::UnknownElement(a));
            }
            if b >= n {
                return Err(OrderError::UnknownElement(b));
            }
            leq[a * n + b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let poset = FinPoset { labels, leq };
        poset.check_labels()?;
        poset.check_axioms()?;
        Ok(poset)
    }

    /// Builds a poset on `0..n` from a predicate, validating the result.
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self, OrderError> {
        let matrix = (0..n).map(|a| (0..n).map(|b| leq(a, b)).collect()).collect();
        Self::from_matrix(default_labels(n), matrix)
    }

    pub(crate) fn from_flat_unchecked(labels: Vec<String>, leq: Vec<bool>) -> Self {
        debug_assert_eq!(labels.len() * labels.len(), leq.len());
        FinPoset { labels, leq }
    }

    pub fn empty() -> Self {
        FinPoset {
            labels: Vec::new(),
            leq: Vec::new(),
        }
    }

    pub fn point() -> Self {
        Self::discrete(1)
    }

    /// The antichain on `n` elements.
    pub fn discrete(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        FinPoset {
            labels: default_labels(n),
            leq,
        }
    }

    /// The chain `[n] = {0 < 1 < ... < n}` with `n + 1` elements.
    pub fn chain(n: usize) -> Self {
        let m = n + 1;
        let leq = (0..m * m).map(|k| k / m <= k % m).collect();
        FinPoset {
            labels: default_labels(m),
            leq,
        }
    }

    /// Replaces the labels, keeping the order.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, OrderError> {
        if labels.len() != self.len() {
            return Err(OrderError::ArityMismatch {
                expected: self.len(),
                got: labels.len(),
            });
        }
        self.labels = labels;
        self.check_labels()?;
        Ok(self)
    }

    fn check_labels(&self) -> Result<(), OrderError> {
        let mut seen = HashMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(OrderError::DuplicateLabel(l.clone()));
            }
        }
        Ok(())
    }

    fn check_axioms(&self) -> Result<(), OrderError> {
        let n = self.len();
        for a in 0..n {
            if !self.leq(a, a) {
                return Err(OrderError::NotReflexive(a));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.leq(a, b) && self.leq(b, a) {
                    return Err(OrderError::NotAntisymmetric(a, b));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return Err(OrderError::NotTransitive(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Row-major relation matrix.
    pub fn matrix(&self) -> &[bool] {
        &self.leq
    }

    /// `P_{>=a}`.
    pub fn up_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.leq(a, b)).collect()
    }

    /// `P_{<=a}`.
    pub fn down_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.leq(b, a)).collect()
    }

    /// Cover relations `a < b` with nothing strictly between, in lexicographic order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All strict relations `a < b` in lexicographic order.
    pub fn strict_relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| !(0..self.len()).any(|b| self.lt(b, a)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| !(0..self.len()).any(|b| self.lt(a, b)))
            .collect()
    }

    pub fn is_sieve(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        for &s in subset {
            member[s] = true;
        }
        subset
            .iter()
            .all(|&s| (0..self.len()).all(|b| !self.leq(b, s) || member[b]))
    }

    pub fn is_cosieve(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        for &s in subset {
            member[s] = true;
        }
        subset
            .iter()
            .all(|&s| (0..self.len()).all(|b| !self.leq(s, b) || member[b]))
    }

    /// Closed under betweenness: `a <= c <= b` with `a, b` in the subset forces `c`.
    pub fn is_interval(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        for &s in subset {
            member[s] = true;
        }
        for &a in subset {
            for &b in subset {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..self.len() {
                    if !member[c] && self.leq(a, c) && self.leq(c, b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Length of the longest strict chain (number of steps); `None` for the empty poset.
    pub fn height(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let order = self.linear_extension();
        let mut depth = vec![0usize; self.len()];
        for &b in &order {
            for a in 0..self.len() {
                if self.lt(a, b) {
                    depth[b] = depth[b].max(depth[a] + 1);
                }
            }
        }
        depth.into_iter().max()
    }

    /// A linear extension, smallest indices first among available minimal elements.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&b| !placed[b] && (0..n).all(|a| placed[a] || !self.lt(a, b)))
                .expect("partial order has a minimal element");
            placed[next] = true;
            out.push(next);
        }
        out
    }

    /// Nonempty totally ordered subsets, each listed increasingly, in lexicographic order.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        // Increasing sequences along a linear extension are exactly the chains.
        let order = self.linear_extension();
        self.extend_chains(&order, 0, &mut current, &mut out);
        out.sort();
        out
    }

    fn extend_chains(&self, order: &[usize], from: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for i in from..order.len() {
            let x = order[i];
            if current.last().is_none_or(|&last| self.lt(last, x)) {
                current.push(x);
                out.push(current.clone());
                self.extend_chains(order, i + 1, current, out);
                current.pop();
            }
        }
    }

    /// The induced subposet on `subset` (kept in the given order).
    pub fn induced(&self, subset: &[usize]) -> FinPoset {
        let labels = subset.iter().map(|&a| self.labels[a].clone()).collect();
        let leq = subset
            .iter()
            .flat_map(|&a| subset.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.leq(a, b))
            .collect();
        FinPoset { labels, leq }
    }

    pub fn opposite(&self) -> FinPoset {
        let n = self.len();
        let leq = (0..n * n).map(|k| self.leq(k % n, k / n)).collect();
        FinPoset {
            labels: self.labels.clone(),
            leq,
        }
    }

    /// Searches for an order isomorphism `self -> other`; returns the element map.
    pub fn isomorphism_to(&self, other: &FinPoset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let profile = |p: &FinPoset, a: usize| {
            let up = (0..p.len()).filter(|&b| p.leq(a, b)).count();
            let down = (0..p.len()).filter(|&b| p.leq(b, a)).count();
            (up, down)
        };
        let mine: Vec<_> = (0..n).map(|a| profile(self, a)).collect();
        let theirs: Vec<_> = (0..n).map(|a| profile(other, a)).collect();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            a: usize,
            p: &FinPoset,
            q: &FinPoset,
            mine: &[(usize, usize)],
            theirs: &[(usize, usize)],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if a == p.len() {
                return true;
            }
            for b in 0..q.len() {
                if used[b] || mine[a] != theirs[b] {
                    continue;
                }
                let ok = (0..a).all(|c| {
                    p.leq(c, a) == q.leq(map[c], b) && p.leq(a, c) == q.leq(b, map[c])
                });
                if ok {
                    map[a] = b;
                    used[b] = true;
                    if go(a + 1, p, q, mine, theirs, map, used) {
                        return true;
                    }
                    used[b] = false;
                }
            }
            false
        }
        if go(0, self, other, &mine, &theirs, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &FinPoset) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// Product order on pairs, indexed `a * other.len() + b`.
    pub fn product(&self, other: &FinPoset) -> FinPoset {
        let (n, m) = (self.len(), other.len());
        let mut labels = Vec::with_capacity(n * m);
        for a in 0..n {
            for b in 0..m {
                labels.push(format!("({},{})", self.labels[a], other.labels[b]));
            }
        }
        let k = n * m;
        let leq = (0..k * k)
            .map(|idx| {
                let (x, y) = (idx / k, idx % k);
                self.leq(x / m, y / m) && other.leq(x % m, y % m)
            })
            .collect();
        FinPoset { labels, leq }
    }
}
