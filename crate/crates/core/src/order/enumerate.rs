use std::collections::HashMap;
use std::sync::OnceLock;

use super::{FinPoset, MonotoneMap};

const CACHED: usize = 6;

fn matrices(k: usize) -> &'static [Vec<bool>] {
    static CACHE: [OnceLock<Vec<Vec<bool>>>; CACHED] = [const { OnceLock::new() }; CACHED];
    CACHE[k].get_or_init(|| {
        if k == 0 {
            return vec![Vec::new()];
        }
        let smaller = matrices(k - 1);
        let mut out = Vec::new();
        for m in smaller {
            extend_by_one(k - 1, m, &mut out);
        }
        out.sort();
        out
    })
}

/// Adds element `n` to every poset on `0..n` in all consistent ways: its strict
/// down-set must be a sieve, its strict up-set a disjoint cosieve, and
/// everything below must already lie below everything above.
fn extend_by_one(n: usize, m: &[bool], out: &mut Vec<Vec<bool>>) {
    let leq = |a: usize, b: usize| m[a * n + b];
    let subsets: Vec<Vec<usize>> = (0u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    let is_down = |s: &[usize]| s.iter().all(|&x| (0..n).all(|y| !leq(y, x) || s.contains(&y)));
    let is_up = |s: &[usize]| s.iter().all(|&x| (0..n).all(|y| !leq(x, y) || s.contains(&y)));
    let downs: Vec<&Vec<usize>> = subsets.iter().filter(|s| is_down(s)).collect();
    let ups: Vec<&Vec<usize>> = subsets.iter().filter(|s| is_up(s)).collect();
    let k = n + 1;
    for d in &downs {
        for u in &ups {
            if d.iter().any(|x| u.contains(x)) {
                continue;
            }
            if !d.iter().all(|&x| u.iter().all(|&y| leq(x, y))) {
                continue;
            }
            let mut next = vec![false; k * k];
            for a in 0..n {
                for b in 0..n {
                    next[a * k + b] = leq(a, b);
                }
            }
            next[n * k + n] = true;
            for &x in d.iter() {
                next[x * k + n] = true;
            }
            for &y in u.iter() {
                next[n * k + y] = true;
            }
            out.push(next);
        }
    }
}

fn labeled_matrices(k: usize) -> Vec<Vec<bool>> {
    if k < CACHED {
        return matrices(k).to_vec();
    }
    let mut out = Vec::new();
    for m in labeled_matrices(k - 1) {
        extend_by_one(k - 1, &m, &mut out);
    }
    out.sort();
    out
}

/// Every partial order on `{0, ..., k-1}`, sorted by relation matrix.
pub fn labeled_posets(k: usize) -> Vec<FinPoset> {
    let labels: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    labeled_matrices(k)
        .into_iter()
        .map(|m| FinPoset::from_flat_unchecked(labels.clone(), m))
        .collect()
}

/// One representative per isomorphism class of posets with `n` elements.
pub fn posets_up_to_iso(n: usize) -> Vec<FinPoset> {
    let mut buckets: HashMap<Vec<(usize, usize)>, Vec<FinPoset>> = HashMap::new();
    let mut reps = Vec::new();
    for p in labeled_posets(n) {
        let mut profile: Vec<(usize, usize)> = (0..n)
            .map(|a| (p.up_set(a).len(), p.down_set(a).len()))
            .collect();
        profile.sort_unstable();
        let bucket = buckets.entry(profile).or_default();
        if bucket.iter().any(|q| q.is_isomorphic(&p)) {
            continue;
        }
        bucket.push(p.clone());
        reps.push(p);
    }
    reps
}

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, blocks: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(rgs.clone());
            return;
        }
        for b in 0..=blocks {
            rgs.push(b);
            go(i + 1, n, blocks.max(b + 1), rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// All monotone surjections out of `p`, one per isomorphism class of target.
///
/// A class is determined by the partition into fibres together with the order
/// on fibres; fibres are numbered by their least element, so the list is
/// ordered by partition (restricted growth string) and then by target matrix.
pub fn enumerate_stratifications(p: &FinPoset) -> Vec<MonotoneMap> {
    let n = p.len();
    let mut out = Vec::new();
    for rgs in set_partitions(n) {
        let k = rgs.iter().max().map_or(0, |&m| m + 1);
        let mut forced = vec![false; k * k];
        for a in 0..n {
            for b in 0..n {
                if p.leq(a, b) {
                    forced[rgs[a] * k + rgs[b]] = true;
                }
            }
        }
        let fibres: Vec<Vec<usize>> = (0..k)
            .map(|blk| (0..n).filter(|&a| rgs[a] == blk).collect())
            .collect();
        let labels: Vec<String> = fibres
            .iter()
            .map(|f| {
                let parts: Vec<&str> = f.iter().map(|&a| p.label(a)).collect();
                format!("{{{}}}", parts.join(","))
            })
            .collect();
        for m in labeled_matrices(k) {
            if forced.iter().zip(&m).any(|(&f, &q)| f && !q) {
                continue;
            }
            let target = FinPoset::from_flat_unchecked(labels.clone(), m);
            let map = MonotoneMap::new(p.clone(), target, rgs.clone())
                .expect("fibre order contains the induced relation");
            out.push(map);
        }
    }
    out
}
