use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics unless every row has the same length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<BigInt>) -> Option<Self> {
        (data.len() == rows * cols).then_some(IntMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_major(&self) -> &[BigInt] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "square matrix expected");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        if n == 0 {
            BigInt::one()
        } else {
            sign * a.get(n - 1, n - 1)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(src, c) * q;
            if !v.is_zero() {
                let w = self.get(dst, c) + v;
                self.set(dst, c, w);
            }
        }
    }

    /// `col[dst] += q * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, src) * q;
            if !v.is_zero() {
                let w = self.get(r, dst) + v;
                self.set(r, dst, w);
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }
}

/// `left · M · right = diag(diagonal)`, each entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl Smith {
    /// Recomputes `left · M · right` and checks it against the diagonal and unimodularity.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let d = self.left.mul(m).mul(&self.right);
        let diagonal_ok = (0..d.rows()).all(|r| {
            (0..d.cols()).all(|c| {
                let want = if r == c && r < self.diagonal.len() {
                    self.diagonal[r].clone()
                } else {
                    BigInt::zero()
                };
                *d.get(r, c) == want
            })
        });
        let divides = self.diagonal.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        diagonal_ok
            && divides
            && self.diagonal.iter().all(|x| x.is_positive())
            && self.left.determinant().abs().is_one()
            && self.right.determinant().abs().is_one()
    }
}

/// Smith normal form with transforms. Pivots on the least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = min_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap_rows(t, pr);
        left.swap_rows(t, pr);
        a.swap_cols(t, pc);
        right.swap_cols(t, pc);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a.get(i, t).is_zero() {
                    let q = -a.get(i, t).div_floor(a.get(t, t));
                    a.add_row(i, t, &q);
                    left.add_row(i, t, &q);
                    clean &= a.get(i, t).is_zero();
                }
            }
            for j in t + 1..cols {
                if !a.get(t, j).is_zero() {
                    let q = -a.get(t, j).div_floor(a.get(t, t));
                    a.add_col(j, t, &q);
                    right.add_col(j, t, &q);
                    clean &= a.get(t, j).is_zero();
                }
            }
            if clean {
                // Divisibility: fold in a row whose entries the pivot does not divide.
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(a.get(i, j) % a.get(t, t)).is_zero()));
                match bad {
                    Some(i) => {
                        a.add_row(t, i, &BigInt::one());
                        left.add_row(t, i, &BigInt::one());
                        continue;
                    }
                    None => break,
                }
            }
            // Bring the smallest remaining entry of row/column t to the pivot.
            let col_min = min_entry(&a, t..rows, t..t + 1);
            let row_min = min_entry(&a, t..t + 1, t..cols);
            let pick = [col_min, row_min]
                .into_iter()
                .flatten()
                .min_by(|x, y| a.get(x.0, x.1).abs().cmp(&a.get(y.0, y.1).abs()))
                .expect("pivot row or column is nonzero");
            a.swap_rows(t, pick.0);
            left.swap_rows(t, pick.0);
            a.swap_cols(t, pick.1);
            right.swap_cols(t, pick.1);
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    Smith {
        diagonal: (0..t).map(|i| a.get(i, i).clone()).collect(),
        left,
        right,
    }
}

fn min_entry(
    a: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in rows {
        for c in cols.clone() {
            let v = a.get(r, c);
            if !v.is_zero() && best.is_none_or(|(br, bc)| v.abs() < a.get(br, bc).abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// Invariant factors of a matrix given as rows of small integers, without
/// transforms. Uses machine integers and falls back to big ones on overflow.
pub fn invariant_factors(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Vec<BigInt> {
    let mut dense = vec![vec![0i64; cols]; rows];
    for &(r, c, v) in entries {
        dense[r][c] += v;
    }
    let diagonal = match diagonalize(dense.clone()) {
        Some(d) => d.into_iter().map(BigInt::from).collect(),
        None => diagonalize(
            dense
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
        .expect("big integers do not overflow"),
    };
    normalize_diagonal(diagonal)
}

/// `(gcd, lcm)` passes turn any nonzero diagonal into divisibility order.
fn normalize_diagonal(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for x in d.iter_mut() {
        *x = x.abs();
    }
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

trait Entry: Clone + PartialEq {
    fn vanishes(&self) -> bool;
    fn abs_le(&self, other: &Self) -> bool;
    /// `self - q * pivot` with `q` the floor quotient of `self / pivot`.
    fn reduce(&self, pivot: &Self) -> Option<(Self, Self)>;
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
}

impl Entry for i64 {
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn abs_le(&self, other: &Self) -> bool {
        self.unsigned_abs() <= other.unsigned_abs()
    }
    fn reduce(&self, pivot: &Self) -> Option<(Self, Self)> {
        let q = self.checked_div_euclid(*pivot)?;
        Some((q, self.checked_rem_euclid(*pivot)?))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
}

impl Entry for BigInt {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_le(&self, other: &Self) -> bool {
        self.abs() <= other.abs()
    }
    fn reduce(&self, pivot: &Self) -> Option<(Self, Self)> {
        let (q, r) = self.div_mod_floor(pivot);
        Some((q, r))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
}

/// Diagonalizes by row and column operations; returns the nonzero diagonal,
/// or `None` on overflow.
fn diagonalize<T: Entry>(mut a: Vec<Vec<T>>) -> Option<Vec<T>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in a.iter().enumerate().skip(t) {
            for (c, v) in row.iter().enumerate().skip(t) {
                if !v.vanishes() && best.is_none_or(|(br, bc)| !a[br][bc].abs_le(v)) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].vanishes() {
                    continue;
                }
                let (q, r) = a[i][t].reduce(&a[t][t])?;
                for c in t..cols {
                    if !a[t][c].vanishes() {
                        a[i][c] = a[i][c].sub_mul(&q, &a[t][c])?;
                    }
                }
                clean &= r.vanishes();
            }
            for j in t + 1..cols {
                if a[t][j].vanishes() {
                    continue;
                }
                let (q, r) = a[t][j].reduce(&a[t][t])?;
                for row in a.iter_mut().skip(t) {
                    if !row[t].vanishes() {
                        row[j] = row[j].sub_mul(&q, &row[t])?;
                    }
                }
                clean &= r.vanishes();
            }
            if clean {
                break;
            }
            let mut pick = (t, t);
            for i in t + 1..rows {
                if !a[i][t].vanishes() && !a[pick.0][pick.1].abs_le(&a[i][t]) {
                    pick = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[t][j].vanishes() && !a[pick.0][pick.1].abs_le(&a[t][j]) {
                    pick = (t, j);
                }
            }
            a.swap(t, pick.0);
            for row in a.iter_mut() {
                row.swap(t, pick.1);
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    Some(diag)
}

/// Rank and invariant factors greater than one.
pub fn rank_and_torsion(factors: &[BigInt]) -> (usize, Vec<u64>) {
    let torsion = factors
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().expect("torsion coefficient fits in 64 bits"))
        .collect();
    (factors.len(), torsion)
}
