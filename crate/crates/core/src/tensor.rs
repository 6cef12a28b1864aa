//! Exact matrices and operators on tensor powers `V^{⊗m}`.
//!
//! Matrices are stored as sorted sparse rows: the operators in this crate
//! (R-matrices, projectors, representation blocks) are mostly zero, and
//! skipping zeros keeps exact products affordable. Index conventions:
//!
//! * a multi-index `(i_1, ..., i_m)` with `0 <= i_t < n` is encoded in mixed
//!   radix with leg 1 most significant;
//! * for an operator `X` with entries `X_{i_1..i_m}^{j_1..j_m}` the lower
//!   (input) multi-index labels the row and the upper one the column, so
//!   that `(x_i ⊗ x_j) ◁ R = R_{ij}^{kl} x_k ⊗ x_l` composes as the matrix
//!   product `R R'`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::scalars::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("legs {start}..{end} do not fit in {total} legs")]
    LegRange { start: usize, end: usize, total: usize },
    #[error("leg {leg} out of range 1..={m}")]
    LegOutOfRange { leg: usize, m: usize },
    #[error("operator has no legs")]
    Empty,
    #[error("matrix is singular")]
    Singular,
}

/// Exact matrix over a field, sparse row storage with no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, F)>>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &F::one())
    }

    /// `c` times the identity.
    pub fn scalar(n: usize, c: &F) -> Self {
        let mut m = Self::zeros(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.data[i].push((i, c.clone()));
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if !v.is_zero() {
                    m.data[i].push((j, v));
                }
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| rows[i][j].clone())
    }

    /// Diagonal matrix.
    pub fn diag(d: &[F]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Nonzero entries of row `i` as `(column, value)`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, F)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => {
                if v.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    row.insert(k, (j, v));
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// Positions of nonzero entries, row-major.
    pub fn nonzero_positions(&self) -> Vec<(usize, usize)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, _)| (i, *j)))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.cols]; self.rows];
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                out[i][*j] = v.clone();
            }
        }
        out
    }

    pub fn map<G: Field>(&self, mut f: impl FnMut(&F) -> G) -> Mat<G> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| {
                    r.iter()
                        .filter_map(|(j, v)| {
                            let w = f(v);
                            (!w.is_zero()).then_some((*j, w))
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn try_map<G: Field, E>(&self, mut f: impl FnMut(&F) -> Result<G, E>) -> Result<Mat<G>, E> {
        let mut data = Vec::with_capacity(self.rows);
        for r in &self.data {
            let mut row = Vec::with_capacity(r.len());
            for (j, v) in r {
                let w = f(v)?;
                if !w.is_zero() {
                    row.push((*j, w));
                }
            }
            data.push(row);
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                t.data[*j].push((i, v.clone()));
            }
        }
        t
    }

    fn merge_rows(a: &[(usize, F)], b: &[(usize, F)], sign: bool) -> Vec<(usize, F)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            let ca = a.get(x).map(|e| e.0);
            let cb = b.get(y).map(|e| e.0);
            match (ca, cb) {
                (Some(i), Some(j)) if i == j => {
                    let v = if sign { a[x].1.plus(&b[y].1) } else { a[x].1.minus(&b[y].1) };
                    if !v.is_zero() {
                        out.push((i, v));
                    }
                    x += 1;
                    y += 1;
                }
                (Some(i), Some(j)) if i < j => {
                    out.push(a[x].clone());
                    x += 1;
                }
                (Some(_), None) => {
                    out.push(a[x].clone());
                    x += 1;
                }
                (_, Some(j)) => {
                    let v = if sign { b[y].1.clone() } else { b[y].1.negated() };
                    out.push((j, v));
                    y += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| Self::merge_rows(a, b, true))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| Self::merge_rows(a, b, false))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|v| v.times(c))
    }

    pub fn neg(&self) -> Self {
        self.map(F::negated)
    }

    /// `self - c I`.
    pub fn sub_scalar(&self, c: &F) -> Self {
        self.sub(&Self::scalar(self.rows, c))
    }

    /// Matrix product, skipping zero entries on both sides.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let mut acc: Vec<Option<F>> = vec![None; o.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut out = Self::zeros(self.rows, o.cols);
        for (i, r) in self.data.iter().enumerate() {
            for (k, a) in r {
                for (j, b) in &o.data[*k] {
                    let p = a.times(b);
                    match &mut acc[*j] {
                        Some(v) => v.add_assign(&p),
                        slot @ None => {
                            *slot = Some(p);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let row = &mut out.data[i];
            for j in touched.drain(..) {
                let v = acc[j].take().unwrap();
                if !v.is_zero() {
                    row.push((j, v));
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        self.data
            .iter()
            .map(|r| {
                let mut s = F::zero();
                for (j, a) in r {
                    if !v[*j].is_zero() {
                        s.add_assign(&a.times(&v[*j]));
                    }
                }
                s
            })
            .collect()
    }

    /// Kronecker product with `self` as the outer (more significant) factor.
    pub fn kron(&self, o: &Self) -> Self {
        let mut out = Self::zeros(self.rows * o.rows, self.cols * o.cols);
        for (i, ra) in self.data.iter().enumerate() {
            for (bi, rb) in o.data.iter().enumerate() {
                let row = &mut out.data[i * o.rows + bi];
                for (j, a) in ra {
                    for (bj, b) in rb {
                        row.push((j * o.cols + bj, a.times(b)));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> F {
        let mut s = F::zero();
        for i in 0..self.rows.min(self.cols) {
            s.add_assign(&self.get(i, i));
        }
        s
    }

    /// `Σ_{i,j} self[i][j] * o[j][i]`, i.e. `Tr(self · o)` without the product.
    pub fn trace_of_product(&self, o: &Self) -> F {
        let mut s = F::zero();
        for (i, r) in self.data.iter().enumerate() {
            for (j, a) in r {
                let b = o.get(*j, i);
                if !b.is_zero() {
                    s.add_assign(&a.times(&b));
                }
            }
        }
        s
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, c) in cols.iter().enumerate() {
            pos[*c] = k;
        }
        let mut out = Self::zeros(rows.len(), cols.len());
        for (k, r) in rows.iter().enumerate() {
            let mut row: Vec<(usize, F)> = self.data[*r]
                .iter()
                .filter(|(j, _)| pos[*j] != usize::MAX)
                .map(|(j, v)| (pos[*j], v.clone()))
                .collect();
            row.sort_by_key(|e| e.0);
            out.data[k] = row;
        }
        out
    }

    pub fn columns(&self, cols: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.rows).collect();
        self.select(&all, cols)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Fraction-free (Bareiss) elimination. Returns the pivot columns in
    /// order; their count is the rank.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut rows: Vec<Vec<(usize, F)>> =
            self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut pivots = Vec::new();
        let mut prev = F::one();
        let mut col = 0;
        while !rows.is_empty() && col < self.cols {
            // Pick the sparsest row with a nonzero entry in `col`.
            let pick = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.first().is_some_and(|e| e.0 == col))
                .min_by_key(|(_, r)| r.len())
                .map(|(k, _)| k);
            let Some(k) = pick else {
                col += 1;
                continue;
            };
            let prow = rows.swap_remove(k);
            let p = prow[0].1.clone();
            for r in rows.iter_mut() {
                let lead = if r.first().is_some_and(|e| e.0 == col) {
                    Some(r[0].1.clone())
                } else {
                    None
                };
                // r <- (p r - lead prow) / prev, with the column `col` cleared.
                let scaled: Vec<(usize, F)> = r
                    .iter()
                    .filter(|e| e.0 != col)
                    .map(|(j, v)| (*j, v.times(&p)))
                    .collect();
                let merged = match &lead {
                    Some(l) => {
                        let sub: Vec<(usize, F)> =
                            prow[1..].iter().map(|(j, v)| (*j, v.times(l))).collect();
                        Self::merge_rows(&scaled, &sub, false)
                    }
                    None => scaled,
                };
                *r = if prev.is_one() {
                    merged
                } else {
                    merged.into_iter().map(|(j, v)| (j, v.over(&prev))).collect()
                };
            }
            rows.retain(|r| !r.is_empty());
            pivots.push(col);
            prev = p;
            col += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Self, TensorError> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.to_dense();
        let mut inv = Self::identity(n).to_dense();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(TensorError::Singular)?;
            a.swap(c, p);
            inv.swap(c, p);
            let pinv = a[c][c].inverse().unwrap();
            for j in 0..n {
                if !a[c][j].is_zero() {
                    a[c][j] = a[c][j].times(&pinv);
                }
                if !inv[c][j].is_zero() {
                    inv[c][j] = inv[c][j].times(&pinv);
                }
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    if !a[c][j].is_zero() {
                        let t = a[c][j].times(&f);
                        a[r][j] = a[r][j].minus(&t);
                    }
                    if !inv[c][j].is_zero() {
                        let t = inv[c][j].times(&f);
                        inv[r][j] = inv[r][j].minus(&t);
                    }
                }
            }
        }
        Ok(Self::from_rows(inv))
    }

    /// Basis of the column space: the pivot columns, in increasing order.
    pub fn column_basis(&self) -> (Vec<usize>, Self) {
        let piv = self.pivot_columns();
        let b = self.columns(&piv);
        (piv, b)
    }

    /// Square submatrix check helper: true when `self == c I`.
    pub fn is_scalar(&self, c: &F) -> bool {
        self.is_square() && self.sub_scalar(c).is_zero()
    }

    /// If `self` is a scalar multiple of the identity, that scalar.
    pub fn as_scalar(&self) -> Option<F> {
        if !self.is_square() {
            return None;
        }
        let c = if self.rows == 0 { F::zero() } else { self.get(0, 0) };
        self.is_scalar(&c).then_some(c)
    }
}

/// Compression data for a projector `P`: a column basis `U` of `Im P` and the
/// coordinate map `G` with `G U = I` and `U G = P`.
#[derive(Clone, Debug)]
pub struct ImageBasis<F> {
    pub pivots: Vec<usize>,
    pub u: Mat<F>,
    pub g: Mat<F>,
}

impl<F: Field> ImageBasis<F> {
    /// Build from an idempotent `p`.
    pub fn of_projector(p: &Mat<F>) -> Self {
        let (pivots, u) = p.column_basis();
        // Rows of U that are independent, via the column pivots of Uᵀ.
        let rsel = u.transpose().pivot_columns();
        let ur = u.select(&rsel, &(0..pivots.len()).collect::<Vec<_>>());
        let all: Vec<usize> = (0..p.cols()).collect();
        let pr = p.select(&rsel, &all);
        let g = ur.inverse().expect("pivot block is invertible").mul(&pr);
        ImageBasis { pivots, u, g }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// `G X U`.
    pub fn compress(&self, x: &Mat<F>) -> Mat<F> {
        self.g.mul(x).mul(&self.u)
    }
}

fn leg_digits(mut idx: usize, n: usize, m: usize) -> Vec<usize> {
    let mut d = vec![0; m];
    for t in (0..m).rev() {
        d[t] = idx % n;
        idx /= n;
    }
    d
}

/// Encode a multi-index (leg 1 most significant).
pub fn leg_index(digits: &[usize], n: usize) -> usize {
    digits.iter().fold(0, |acc, d| acc * n + d)
}

/// Operator on `V^{⊗m}` with `dim V = n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LegOperator<F> {
    pub n: usize,
    pub m: usize,
    pub mat: Mat<F>,
}

impl<F: Field> LegOperator<F> {
    pub fn new(n: usize, m: usize, mat: Mat<F>) -> Self {
        let d = n.pow(m as u32);
        assert!(mat.rows() == d && mat.cols() == d, "matrix is not {d}x{d}");
        LegOperator { n, m, mat }
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self::new(n, m, Mat::identity(n.pow(m as u32)))
    }

    /// The flip `P(x_i ⊗ x_j) = x_j ⊗ x_i`.
    pub fn flip(n: usize) -> Self {
        let mut p = Mat::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                p.set(i * n + j, j * n + i, F::one());
            }
        }
        Self::new(n, 2, p)
    }

    /// Entry `X_{lower}^{upper}` addressed by multi-indices.
    pub fn entry(&self, lower: &[usize], upper: &[usize]) -> F {
        self.mat.get(leg_index(lower, self.n), leg_index(upper, self.n))
    }

    pub fn compose(&self, o: &Self) -> Self {
        assert_eq!((self.n, self.m), (o.n, o.m), "leg shape mismatch");
        Self::new(self.n, self.m, self.mat.mul(&o.mat))
    }

    /// `I^{⊗(start-1)} ⊗ self ⊗ I^{⊗(total-start-m+1)}`, legs 1-based.
    pub fn embed_on_legs(&self, start: usize, total: usize) -> Result<Self, TensorError> {
        if start < 1 || start + self.m - 1 > total {
            return Err(TensorError::LegRange {
                start,
                end: start + self.m - 1,
                total,
            });
        }
        let before = Mat::identity(self.n.pow((start - 1) as u32));
        let after = Mat::identity(self.n.pow((total - start + 1 - self.m) as u32));
        Ok(Self::new(self.n, total, before.kron(&self.mat).kron(&after)))
    }

    /// Contract each leg in `legs` (1-based) against `weight`: the factor for
    /// a leg with lower index `a` and upper index `b` is `weight[b][a]`, so
    /// `weight = I` is the ordinary partial trace and a single leg gives
    /// `Tr(weight · X)`.
    pub fn weighted_partial_trace(
        &self,
        legs: &BTreeSet<usize>,
        weight: &Mat<F>,
    ) -> Result<Self, TensorError> {
        if self.m == 0 {
            return Err(TensorError::Empty);
        }
        if let Some(&bad) = legs.iter().find(|&&l| l < 1 || l > self.m) {
            return Err(TensorError::LegOutOfRange { leg: bad, m: self.m });
        }
        let keep: Vec<usize> = (0..self.m).filter(|t| !legs.contains(&(t + 1))).collect();
        let out_m = keep.len();
        let mut out: Mat<F> = Mat::zeros(self.n.pow(out_m as u32), self.n.pow(out_m as u32));
        for r in 0..self.mat.rows() {
            let rd = leg_digits(r, self.n, self.m);
            for (c, v) in self.mat.row(r) {
                let cd = leg_digits(*c, self.n, self.m);
                let mut f = v.clone();
                for &l in legs {
                    let w = weight.get(cd[l - 1], rd[l - 1]);
                    if w.is_zero() {
                        f = F::zero();
                        break;
                    }
                    f = f.times(&w);
                }
                if f.is_zero() {
                    continue;
                }
                let ro = keep.iter().fold(0, |a, &t| a * self.n + rd[t]);
                let co = keep.iter().fold(0, |a, &t| a * self.n + cd[t]);
                let cur: F = out.get(ro, co);
                out.set(ro, co, cur.plus(&f));
            }
        }
        Ok(Self::new(self.n, out_m, out))
    }

    pub fn rank(&self) -> usize {
        self.mat.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Rational};
    use proptest::prelude::*;

    type M = Mat<Rational>;

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    fn legs(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    fn arb_mat(d: usize) -> impl Strategy<Value = M> {
        prop::collection::vec(-3i64..=3, d * d).prop_map(move |v| {
            M::from_fn(d, d, |i, j| r(v[i * d + j]))
        })
    }

    #[test]
    fn embed_identity_is_identity() {
        let id = LegOperator::<Rational>::identity(2, 1);
        assert_eq!(id.embed_on_legs(2, 3).unwrap(), LegOperator::identity(2, 3));
        assert!(id.embed_on_legs(4, 3).is_err());
        assert!(id.embed_on_legs(0, 3).is_err());
    }

    #[test]
    fn flip_squares_to_identity_and_traces_to_identity() {
        for n in 1..=4 {
            let p = LegOperator::<Rational>::flip(n);
            assert_eq!(p.compose(&p), LegOperator::identity(n, 2));
            let t = p.weighted_partial_trace(&legs(&[2]), &M::identity(n)).unwrap();
            assert_eq!(t, LegOperator::identity(n, 1));
        }
    }

    #[test]
    fn full_trace_of_identity() {
        let id = LegOperator::<Rational>::identity(3, 2);
        let t = id.weighted_partial_trace(&legs(&[1, 2]), &M::identity(3)).unwrap();
        assert_eq!(t.m, 0);
        assert_eq!(t.mat.get(0, 0), r(9));
    }

    #[test]
    fn weighted_trace_of_identity_is_trace_of_weight() {
        let c = M::from_rows(vec![vec![r(2), r(5)], vec![r(7), r(-3)]]);
        let id = LegOperator::<Rational>::identity(2, 1);
        let t = id.weighted_partial_trace(&legs(&[1]), &c).unwrap();
        assert_eq!(t.mat.get(0, 0), c.trace());
    }

    #[test]
    fn partial_trace_errors() {
        let id = LegOperator::<Rational>::identity(2, 2);
        assert!(matches!(
            id.weighted_partial_trace(&legs(&[3]), &M::identity(2)),
            Err(TensorError::LegOutOfRange { leg: 3, m: 2 })
        ));
        let empty = LegOperator::<Rational>::identity(2, 0);
        assert_eq!(
            empty.weighted_partial_trace(&legs(&[]), &M::identity(2)),
            Err(TensorError::Empty)
        );
    }

    #[test]
    fn rank_and_inverse() {
        let a = M::from_rows(vec![
            vec![r(1), r(2), r(3)],
            vec![r(2), r(4), r(6)],
            vec![r(0), r(1), r(1)],
        ]);
        assert_eq!(a.rank(), 2);
        assert!(a.inverse().is_err());
        let b = M::from_rows(vec![vec![r(2), r(1)], vec![r(7), r(4)]]);
        assert_eq!(b.mul(&b.inverse().unwrap()), M::identity(2));
        for n in 1..=3 {
            for m in 1..=3 {
                assert_eq!(LegOperator::<Rational>::identity(n, m).rank(), n.pow(m as u32));
            }
        }
    }

    #[test]
    fn image_basis_of_projector() {
        // Projector onto span{(1,1,0), (0,0,1)} along (1,-1,0).
        let h = rat(1, 2);
        let p = M::from_rows(vec![
            vec![h.clone(), h.clone(), r(0)],
            vec![h.clone(), h.clone(), r(0)],
            vec![r(0), r(0), r(1)],
        ]);
        let ib = ImageBasis::of_projector(&p);
        assert_eq!(ib.dim(), 2);
        assert_eq!(ib.g.mul(&ib.u), M::identity(2));
        assert_eq!(ib.u.mul(&ib.g), p);
    }

    proptest! {
        #[test]
        fn embedding_is_multiplicative(a in arb_mat(4), b in arb_mat(4)) {
            let la = LegOperator::new(2, 2, a);
            let lb = LegOperator::new(2, 2, b);
            let lhs = la.embed_on_legs(2, 4).unwrap().compose(&lb.embed_on_legs(2, 4).unwrap());
            let rhs = la.compose(&lb).embed_on_legs(2, 4).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn partial_traces_commute(v in prop::collection::vec(-3i64..=3, 64)) {
            let x = LegOperator::new(2, 3, M::from_fn(8, 8, |i, j| r(v[i * 8 + j])));
            let w = M::from_rows(vec![vec![r(1), r(2)], vec![r(-1), r(3)]]);
            let a = x.weighted_partial_trace(&legs(&[1]), &w).unwrap()
                .weighted_partial_trace(&legs(&[2]), &w).unwrap();
            let b = x.weighted_partial_trace(&legs(&[3]), &w).unwrap()
                .weighted_partial_trace(&legs(&[1]), &w).unwrap();
            let c = x.weighted_partial_trace(&legs(&[1, 3]), &w).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a, c);
        }

        #[test]
        fn sparse_product_matches_dense(a in arb_mat(5), b in arb_mat(5)) {
            let p = a.mul(&b);
            let (da, db) = (a.to_dense(), b.to_dense());
            for i in 0..5 {
                for j in 0..5 {
                    let mut s = r(0);
                    for k in 0..5 {
                        s += &da[i][k] * &db[k][j];
                    }
                    prop_assert_eq!(p.get(i, j), s);
                }
            }
        }

        #[test]
        fn rank_matches_rank_of_transpose(a in arb_mat(5)) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }
    }
}
