//! Exact dense linear algebra over the coefficient field, plus symbolic
//! minors of small matrices with polynomial entries.
//!
//! Rank, nullspace and determinant are computed by fraction-free Bareiss
//! elimination over the rationals (rows are first scaled integral) and by
//! straightforward Gaussian elimination over a prime field. Pivoting is
//! deterministic: first nonzero entry in column order, so echelon forms and
//! kernel bases are reproducible across runs.

use crate::field::Field;
use crate::polyring::{Expo, Poly, RingSpec};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    entries: Vec<K::Elem>,
}

/// Result of an elimination pass: reduced row echelon form and pivots.
#[derive(Clone, Debug)]
pub struct Echelon<K: Field> {
    pub rref: DenseMatrix<K>,
    pub pivot_cols: Vec<usize>,
}

impl<K: Field> DenseMatrix<K> {
    pub fn new(field: K, rows: usize, cols: usize, entries: Vec<K::Elem>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        DenseMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(field: K, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        DenseMatrix {
            field,
            rows,
            cols,
            entries: vec![z; rows * cols],
        }
    }

    pub fn identity(field: K, n: usize) -> Self {
        let mut m = DenseMatrix::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: K, rows: Vec<Vec<K::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        DenseMatrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &K::Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = DenseMatrix::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.at(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Scale every row to clear denominators when the field supports it.
    fn integral_rows(&self) -> Self {
        let f = self.field.clone();
        let mut out = self.clone();
        for i in 0..self.rows {
            let refs: Vec<&K::Elem> = out.row(i).iter().collect();
            if let Some(s) = f.integral_scale(&refs) {
                for j in 0..self.cols {
                    let v = f.mul(out.at(i, j), &s);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Forward elimination to row echelon form, returning pivot columns.
    /// Fraction-free Bareiss when the field prefers it, Gaussian otherwise.
    fn echelon_forward(&self) -> (Self, Vec<usize>) {
        let f = self.field.clone();
        if f.fraction_free_preferred() {
            let mut m = self.integral_rows();
            let mut pivots = Vec::new();
            let mut prev = f.one();
            let mut r = 0usize;
            for c in 0..m.cols {
                let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.at(i, c))) else {
                    continue;
                };
                m.swap_rows(r, pr);
                for i in r + 1..m.rows {
                    for j in c + 1..m.cols {
                        let num = f.sub(
                            &f.mul(m.at(r, c), m.at(i, j)),
                            &f.mul(m.at(i, c), m.at(r, j)),
                        );
                        let v = f.div(&num, &prev).expect("Bareiss division is exact");
                        m.set(i, j, v);
                    }
                    m.set(i, c, f.zero());
                }
                prev = m.at(r, c).clone();
                pivots.push(c);
                r += 1;
                if r == m.rows {
                    break;
                }
            }
            (m, pivots)
        } else {
            let mut m = self.clone();
            let mut pivots = Vec::new();
            let mut r = 0usize;
            for c in 0..m.cols {
                let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.at(i, c))) else {
                    continue;
                };
                m.swap_rows(r, pr);
                let inv = f.inv(m.at(r, c)).expect("pivot nonzero");
                for i in r + 1..m.rows {
                    if f.is_zero(m.at(i, c)) {
                        continue;
                    }
                    let factor = f.mul(m.at(i, c), &inv);
                    for j in c..m.cols {
                        let v = f.sub(m.at(i, j), &f.mul(&factor, m.at(r, j)));
                        m.set(i, j, v);
                    }
                }
                pivots.push(c);
                r += 1;
                if r == m.rows {
                    break;
                }
            }
            (m, pivots)
        }
    }

    /// Reduced row echelon form with unit pivots.
    pub fn rref(&self) -> Echelon<K> {
        let f = self.field.clone();
        let (mut m, pivots) = self.echelon_forward();
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = f.inv(m.at(r, c)).expect("pivot nonzero");
            for j in c..m.cols {
                let v = f.mul(m.at(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..r {
                if f.is_zero(m.at(i, c)) {
                    continue;
                }
                let factor = m.at(i, c).clone();
                for j in c..m.cols {
                    let v = f.sub(m.at(i, j), &f.mul(&factor, m.at(r, j)));
                    m.set(i, j, v);
                }
            }
        }
        Echelon {
            rref: m,
            pivot_cols: pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon_forward().1.len()
    }

    /// Corank: rows minus rank.
    pub fn corank(&self) -> usize {
        self.rows - self.rank()
    }

    /// Basis of the right kernel, one vector per free column, in reduced
    /// echelon normalization (free coordinate set to 1).
    pub fn nullspace_basis(&self) -> Vec<Vec<K::Elem>> {
        let f = self.field.clone();
        let ech = self.rref();
        let piv = &ech.pivot_cols;
        let mut out = Vec::new();
        for free in 0..self.cols {
            if piv.contains(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = f.neg(ech.rref.at(r, free));
            }
            out.push(v);
        }
        out
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> K::Elem {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let f = self.field.clone();
        let n = self.rows;
        if n == 0 {
            return f.one();
        }
        let mut m = self.clone();
        let mut prev = f.one();
        let mut sign_flip = false;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !f.is_zero(m.at(i, c))) else {
                return f.zero();
            };
            if pr != c {
                m.swap_rows(c, pr);
                sign_flip = !sign_flip;
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let num = f.sub(
                        &f.mul(m.at(c, c), m.at(i, j)),
                        &f.mul(m.at(i, c), m.at(c, j)),
                    );
                    let v = f.div(&num, &prev).expect("Bareiss division is exact");
                    m.set(i, j, v);
                }
                m.set(i, c, f.zero());
            }
            prev = m.at(c, c).clone();
        }
        let det = m.at(n - 1, n - 1).clone();
        if sign_flip {
            f.neg(&det)
        } else {
            det
        }
    }

    /// One solution of `A x = b` with free variables set to zero, or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[K::Elem]) -> Option<Vec<K::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field.clone();
        let mut aug = DenseMatrix::zero(f.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let ech = aug.rref();
        if ech.pivot_cols.contains(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &pc) in ech.pivot_cols.iter().enumerate() {
            x[pc] = ech.rref.at(r, self.cols).clone();
        }
        Some(x)
    }
}

/// A matrix with polynomial entries; only small shapes are ever needed, so
/// minors are expanded by Laplace with memoized sub-minors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<K: Field> {
    ring: Arc<RingSpec<K>>,
    rows: usize,
    cols: usize,
    entries: Vec<Poly<K>>,
}

impl<K: Field> PolyMatrix<K> {
    pub fn new(ring: Arc<RingSpec<K>>, rows: usize, cols: usize, entries: Vec<Poly<K>>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        assert!(cols <= 64, "column masks are u64");
        PolyMatrix {
            ring,
            rows,
            cols,
            entries,
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec<K>> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Poly<K> {
        &self.entries[i * self.cols + j]
    }

    /// Evaluate every entry at a point of the ring.
    pub fn evaluate(&self, point: &[K::Elem]) -> DenseMatrix<K> {
        let f = self.ring.field().clone();
        let entries = self.entries.iter().map(|p| p.evaluate(point)).collect();
        DenseMatrix::new(f, self.rows, self.cols, entries)
    }

    fn det_masked(
        &self,
        row_ids: &[usize],
        level: usize,
        colmask: u64,
        memo: &mut std::collections::HashMap<(usize, u64), Poly<K>>,
    ) -> Poly<K> {
        if level == row_ids.len() {
            return Poly::constant(self.ring.clone(), self.ring.field().one());
        }
        if let Some(p) = memo.get(&(level, colmask)) {
            return p.clone();
        }
        let i = row_ids[level];
        let mut acc = Poly::zero(self.ring.clone());
        let mut sign_neg = false;
        for j in 0..self.cols {
            if colmask & (1 << j) == 0 {
                continue;
            }
            let a = self.at(i, j);
            if !a.is_zero() {
                let sub = self.det_masked(row_ids, level + 1, colmask & !(1 << j), memo);
                let term = a * &sub;
                acc = if sign_neg { &acc - &term } else { &acc + &term };
            }
            sign_neg = !sign_neg;
        }
        memo.insert((level, colmask), acc.clone());
        acc
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, row_ids: &[usize], col_ids: &[usize]) -> Poly<K> {
        assert_eq!(row_ids.len(), col_ids.len());
        let sub: Vec<Poly<K>> = row_ids
            .iter()
            .flat_map(|&i| col_ids.iter().map(move |&j| self.at(i, j).clone()))
            .collect();
        let m = PolyMatrix::new(self.ring.clone(), row_ids.len(), col_ids.len(), sub);
        let rows: Vec<usize> = (0..row_ids.len()).collect();
        let full = if col_ids.is_empty() {
            0
        } else {
            (1u64 << col_ids.len()) - 1
        };
        let mut memo = std::collections::HashMap::new();
        m.det_masked(&rows, 0, full, &mut memo)
    }

    pub fn determinant(&self) -> Poly<K> {
        assert_eq!(self.rows, self.cols);
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.minor(&rows, &cols)
    }

    /// All `k x k` minors in lexicographic (row-subset, column-subset)
    /// order.
    pub fn minors(&self, k: usize) -> Vec<Poly<K>> {
        let mut out = Vec::new();
        for rs in subsets(self.rows, k) {
            for cs in subsets(self.cols, k) {
                out.push(self.minor(&rs, &cs));
            }
        }
        out
    }

    /// Maximal minors; requires rows <= cols (transpose first otherwise).
    pub fn maximal_minors(&self) -> Vec<Poly<K>> {
        assert!(self.rows <= self.cols, "transpose first");
        self.minors(self.rows)
    }

    /// One maximal minor per explicit column subset, preserving order.
    pub fn maximal_minors_for(&self, col_sets: &[Vec<usize>]) -> Vec<Poly<K>> {
        let rows: Vec<usize> = (0..self.rows).collect();
        col_sets.iter().map(|cs| self.minor(&rows, cs)).collect()
    }
}

/// k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    out
}

/// Build the coefficient vector of `p` with respect to a monomial basis.
pub fn coeff_vector<K: Field>(p: &Poly<K>, basis: &[Expo]) -> Vec<K::Elem> {
    basis.iter().map(|e| p.coeff(e)).collect()
}
