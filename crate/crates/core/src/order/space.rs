use super::{FinPoset, OrderError};

/// A finite topological space given by its complete family of opens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    /// Sorted by size, then lexicographically; each open is sorted.
    opens: Vec<Vec<usize>>,
}

fn canonical(mut opens: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for o in &mut opens {
        o.sort_unstable();
        o.dedup();
    }
    opens.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    opens.dedup();
    opens
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

impl FiniteSpace {
    /// Checks that the family contains the empty set and the whole space and is
    /// closed under binary unions and intersections (enough for a finite family).
    pub fn new(labels: Vec<String>, opens: Vec<Vec<usize>>) -> Result<Self, OrderError> {
        let n = labels.len();
        if let Some(&bad) = opens.iter().flatten().find(|&&x| x >= n) {
            return Err(OrderError::UnknownElement(bad));
        }
        let opens = canonical(opens);
        let space = FiniteSpace { labels, opens };
        if !space.is_open(&[]) {
            return Err(OrderError::NotATopology("missing the empty set".into()));
        }
        let full: Vec<usize> = (0..n).collect();
        if !space.is_open(&full) {
            return Err(OrderError::NotATopology("missing the whole space".into()));
        }
        for a in &space.opens {
            for b in &space.opens {
                if !space.is_open(&union(a, b)) {
                    return Err(OrderError::NotATopology(format!("{a:?} ∪ {b:?} is not open")));
                }
                if !space.is_open(&intersection(a, b)) {
                    return Err(OrderError::NotATopology(format!("{a:?} ∩ {b:?} is not open")));
                }
            }
        }
        Ok(space)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn opens(&self) -> &[Vec<usize>] {
        &self.opens
    }

    /// `subset` need not be sorted.
    pub fn is_open(&self, subset: &[usize]) -> bool {
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        self.opens
            .binary_search_by(|o| o.len().cmp(&s.len()).then_with(|| o.as_slice().cmp(&s)))
            .is_ok()
    }

    /// Every open containing `x` contains `y`, i.e. `x` lies in the closure of `{y}`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.opens
            .iter()
            .all(|o| !o.contains(&x) || o.contains(&y))
    }

    /// First pair of topologically indistinguishable points, if any.
    pub fn t0_violation(&self) -> Option<(usize, usize)> {
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                if self.specializes(x, y) && self.specializes(y, x) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_t0(&self) -> bool {
        self.t0_violation().is_none()
    }
}

/// The Alexandroff topology of `p`: opens are exactly the cosieves.
pub fn alexandroff(p: &FinPoset) -> FiniteSpace {
    // Decide maximal elements first so that an element may join only once
    // everything above it has.
    let mut order = p.linear_extension();
    order.reverse();
    let mut opens = Vec::new();
    let mut member = vec![false; p.len()];
    fn go(p: &FinPoset, order: &[usize], i: usize, member: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if i == order.len() {
            out.push((0..p.len()).filter(|&a| member[a]).collect());
            return;
        }
        let x = order[i];
        go(p, order, i + 1, member, out);
        if (0..p.len()).all(|y| !p.lt(x, y) || member[y]) {
            member[x] = true;
            go(p, order, i + 1, member, out);
            member[x] = false;
        }
    }
    go(p, &order, 0, &mut member, &mut opens);
    FiniteSpace {
        labels: p.labels().to_vec(),
        opens: canonical(opens),
    }
}

/// The specialization order `x <= y` iff `x ∈ cl{y}`; inverse to [`alexandroff`].
pub fn specialization_poset(x: &FiniteSpace) -> Result<FinPoset, OrderError> {
    if let Some((a, b)) = x.t0_violation() {
        return Err(OrderError::NotT0(a, b));
    }
    let n = x.len();
    let leq = (0..n * n).map(|k| x.specializes(k / n, k % n)).collect();
    Ok(FinPoset::from_flat_unchecked(x.labels().to_vec(), leq))
}
