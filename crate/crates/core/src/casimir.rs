//! Images of the split Casimir element, quantum traces and q-dimensions.
//!
//! Convention: [`split_casimir_matrix`] stores the matrix with `V_(k)` (the
//! right module) as the outer tensor factor, built from column-form blocks.
//! Its eigenvalues are those of `L̂_(k,m)`; the closed form for rank 2 is
//! reproduced entry by entry.

use thiserror::Error;

use crate::hecke::HeckeSymmetry;
use crate::reps::{self, RepError};
use crate::scalars::{qint, Field};
use crate::tensor::Mat;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CasimirError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("the closed form needs k >= m >= 1, got k={k}, m={m}")]
    Degrees { k: usize, m: usize },
    #[error("the closed form needs symmetry rank 2, got {0}")]
    RequiresRankTwo(usize),
    #[error("signature has {parts} parts, more than p = {p}")]
    TooManyParts { parts: usize, p: usize },
    #[error("trace calibration failed for m={m}: q^p Tr W = {got}, dim_q V_(m) = {want}")]
    Calibration { m: usize, got: String, want: String },
    #[error("matrix of size {size} is not made of {outer}x{outer} blocks of size {inner}")]
    Shape { size: usize, outer: usize, inner: usize },
}

/// Which generators the `V_(k)` factor carries.
#[derive(Clone, Debug, PartialEq)]
pub enum CasimirForm<F> {
    /// Unmodified generators `I - ζ π̄(l)`.
    Rea,
    /// Modified generators `ħ π̄(l)`.
    Mrea { hbar: F },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CasimirMatrix<F> {
    pub k: usize,
    pub m: usize,
    pub dk: usize,
    pub dm: usize,
    pub op: Mat<F>,
}

/// `Σ_{i,j} q^(2p) C_j^i Σ_a term(i, a, j)`.
fn contract<F: Field>(h: &HeckeSymmetry<F>, size: usize, term: impl Fn(usize, usize, usize) -> Mat<F>) -> Mat<F> {
    let n = h.n();
    let pre = h.qpow(2 * h.p() as i64);
    let mut tot = Mat::zeros(size, size);
    for i in 0..n {
        for j in 0..n {
            let c = h.c().get(j, i);
            if c.is_zero() {
                continue;
            }
            let c = c.times(&pre);
            for a in 0..n {
                tot = tot.add(&term(i, a, j).scale(&c));
            }
        }
    }
    tot
}

/// `Σ q^(2p) C_j^i outer[i][a] ⊗ inner[a][j]`.
pub fn contract_casimir<F: Field>(
    h: &HeckeSymmetry<F>,
    outer: &[Vec<Mat<F>>],
    inner: &[Vec<Mat<F>>],
) -> Mat<F> {
    let size = outer[0][0].rows() * inner[0][0].rows();
    contract(h, size, |i, a, j| outer[i][a].kron(&inner[a][j]))
}

/// `L̂_(k,m)` (or its modified counterpart) on `V_(k) ⊗ V_(m)`.
pub fn split_casimir_matrix<F: Field>(
    h: &HeckeSymmetry<F>,
    k: usize,
    m: usize,
    form: &CasimirForm<F>,
) -> Result<CasimirMatrix<F>, CasimirError> {
    let outer = match form {
        CasimirForm::Rea => reps::rea_normalized_right(h, k)?,
        CasimirForm::Mrea { hbar } => reps::scale_rep(&reps::sym_power_right_p2(h, k)?, hbar)?,
    };
    let inner = reps::sym_power_left(h, m)?;
    Ok(CasimirMatrix {
        k,
        m,
        dk: outer.d,
        dm: inner.d,
        op: contract_casimir(h, &outer.rho, &inner.rho),
    })
}

/// The rank-2 closed form
/// `q^(m-1) L̂ = (m_q/q^(2k+2)) S^(k)S^(m) + (ζ m_q (k+1)_q/q^(k+1)) S^(m)S^(k+1)S^(m)`
/// with `S^(k+1)` on legs `1..k+1` and `S^(m)` on legs `k+1..k+m`, compressed
/// to the bases of `V_(k) ⊗ V_(m)`.
pub fn closed_form_p2<F: Field>(
    h: &HeckeSymmetry<F>,
    k: usize,
    m: usize,
) -> Result<CasimirMatrix<F>, CasimirError> {
    if h.p() != 2 {
        return Err(CasimirError::RequiresRankTwo(h.p()));
    }
    if m < 1 || k < m {
        return Err(CasimirError::Degrees { k, m });
    }
    let n = h.n();
    let (bk, bm) = (h.left_basis(k), h.left_basis(m));
    let g = bk.g.kron(&bm.g);
    let u = bk.u.kron(&bm.u);
    // The outer S^(m) factors are absorbed by G and U.
    let big = h
        .symmetrizer(k + 1)
        .transpose()
        .kron(&Mat::identity(n.pow(m as u32 - 1)));
    let middle = g.mul(&big).mul(&u);
    let (mi, ki) = (m as i64, k as i64);
    let q = h.q();
    let c0 = qint(mi, q).times(&q.pow(-2 * ki - 2));
    let c1 = h.zeta().times(&qint(mi, q)).times(&qint(ki + 1, q)).times(&q.pow(-ki - 1));
    let op = middle
        .scale(&c1)
        .add(&Mat::scalar(middle.rows(), &c0))
        .scale(&q.pow(1 - mi));
    Ok(CasimirMatrix {
        k,
        m,
        dk: bk.dim(),
        dm: bm.dim(),
        op,
    })
}

/// `L_(m)` with `V_(m)` outer: block `(c, r)` is
/// `Σ q^(2p) C_j^i [π_(m)(l_a^j)]_{r,c} X[i][a]` for the given `X` blocks.
pub fn l_m_matrix<F: Field>(h: &HeckeSymmetry<F>, x: &[Vec<Mat<F>>], m: usize) -> Result<Mat<F>, CasimirError> {
    let inner = reps::sym_power_left(h, m)?;
    let transposed: Vec<Vec<Mat<F>>> = inner
        .rho
        .iter()
        .map(|row| row.iter().map(Mat::transpose).collect())
        .collect();
    let size = x[0][0].rows() * transposed[0][0].rows();
    Ok(contract(h, size, |i, a, j| transposed[a][j].kron(&x[i][a])))
}

/// `Σ_{r,c} w[c][r] X_(r,c)` for `X` made of `w.rows()²` blocks of size
/// `inner`: the quantum trace over the outer factor.
pub fn weighted_block_trace<F: Field>(x: &Mat<F>, w: &Mat<F>, inner: usize) -> Result<Mat<F>, CasimirError> {
    let outer = w.rows();
    if x.rows() != outer * inner || !x.is_square() {
        return Err(CasimirError::Shape {
            size: x.rows(),
            outer,
            inner,
        });
    }
    let mut out = Mat::zeros(inner, inner);
    let wt = w.transpose();
    for r in 0..outer {
        for (c, wv) in wt.row(r) {
            let rows: Vec<usize> = (r * inner..(r + 1) * inner).collect();
            let cols: Vec<usize> = (c * inner..(c + 1) * inner).collect();
            out = out.add(&x.select(&rows, &cols).scale(wv));
        }
    }
    Ok(out)
}

/// `Tr_R` of a matrix of `n×n` generator blocks: `Σ C[c][r] X_(r,c)`.
pub fn quantum_trace_blocks<F: Field>(h: &HeckeSymmetry<F>, x: &Mat<F>, inner: usize) -> Result<Mat<F>, CasimirError> {
    weighted_block_trace(x, h.c(), inner)
}

/// Weights for the quantum trace over `V_(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceWeights<F> {
    pub m: usize,
    /// Single-leg weight `C`.
    pub per_leg: Mat<F>,
    /// `q^(p(m-1)) G (Cᵀ)^{⊗m} U` on `V_(m)`.
    pub compressed: Mat<F>,
    /// `e` in the calibration `q^e Tr(compressed) = dim_q V_(m)`.
    pub normalization_exponent: i64,
}

impl<F: Field> TraceWeights<F> {
    /// Build and check `q^p Tr W = dim_q V_(m)`.
    pub fn calibrate(h: &HeckeSymmetry<F>, m: usize) -> Result<Self, CasimirError> {
        let p = h.p() as i64;
        let basis = h.left_basis(m);
        let ct = h.c().transpose();
        let mut cm = Mat::identity(1);
        for _ in 0..m {
            cm = cm.kron(&ct);
        }
        let compressed = basis.compress(&cm).scale(&h.qpow(p * (m as i64 - 1)));
        let got = compressed.trace().times(&h.qpow(p));
        let want = q_dimension(&[m as i64], h.p(), h.q())?;
        if got != want {
            return Err(CasimirError::Calibration {
                m,
                got: got.to_string(),
                want: want.to_string(),
            });
        }
        Ok(TraceWeights {
            m,
            per_leg: h.c().clone(),
            compressed,
            normalization_exponent: p,
        })
    }
}

/// Quantum trace over `V_(m)` of a matrix with `V_(m)` outer.
pub fn quantum_trace<F: Field>(x: &Mat<F>, w: &TraceWeights<F>, inner: usize) -> Result<Mat<F>, CasimirError> {
    weighted_block_trace(x, &w.compressed, inner)
}

/// `dim_q V_λ = Π_{i<j} (λ_i - λ_j - i + j)_q / (j - i)_q`, `λ` padded with
/// zeros to `p` parts.
pub fn q_dimension<F: Field>(lambda: &[i64], p: usize, q: &F) -> Result<F, CasimirError> {
    if lambda.len() > p {
        return Err(CasimirError::TooManyParts {
            parts: lambda.len(),
            p,
        });
    }
    let mut l = lambda.to_vec();
    l.resize(p, 0);
    let mut out = F::one();
    for i in 0..p {
        for j in i + 1..p {
            let d = (j - i) as i64;
            out = out.times(&qint(l[i] - l[j] + d, q)).over(&qint(d, q));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{conjugate_r, standard_r};
    use crate::scalars::{qbinomial, rat, Rational};

    fn q0() -> Rational {
        rat(2, 5)
    }

    fn twisted() -> HeckeSymmetry<Rational> {
        let g = Mat::from_rows(vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 3), rat(-1, 1)]]);
        HeckeSymmetry::new(conjugate_r(&standard_r(2, &q0()), &g).unwrap(), q0()).unwrap()
    }

    #[test]
    fn sizes() {
        let h = twisted();
        let l = split_casimir_matrix(&h, 2, 1, &CasimirForm::Rea).unwrap();
        assert_eq!((l.op.rows(), l.dk, l.dm), (6, 3, 2));
    }

    #[test]
    fn closed_form_agrees() {
        let h = twisted();
        for (k, m) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let a = split_casimir_matrix(&h, k, m, &CasimirForm::Rea).unwrap();
            let b = closed_form_p2(&h, k, m).unwrap();
            assert_eq!(a.op, b.op, "k={k} m={m}");
        }
        assert_eq!(closed_form_p2(&h, 1, 2), Err(CasimirError::Degrees { k: 1, m: 2 }));
    }

    #[test]
    fn basic_spectrum() {
        let h = twisted();
        for k in 1..=3 {
            let l = split_casimir_matrix(&h, k, 1, &CasimirForm::Rea).unwrap().op;
            let x = Field::pow(&q0(), -2 * k as i64 - 2);
            let prod = l.sub_scalar(&rat(1, 1)).mul(&l.sub_scalar(&x));
            assert!(prod.is_zero());
        }
    }

    #[test]
    fn trace_of_identity_blocks() {
        let h = twisted();
        // Tr_R(I_n) = Tr C = 2_q/q^2.
        let id = Mat::identity(2);
        let t = quantum_trace_blocks(&h, &id, 1).unwrap();
        assert_eq!(t.get(0, 0), h.qint(2).times(&h.qpow(-2)));
        assert!(quantum_trace_blocks(&h, &Mat::identity(3), 2).is_err());
    }

    #[test]
    fn calibration() {
        let h = twisted();
        for m in 1..=4 {
            let w = TraceWeights::calibrate(&h, m).unwrap();
            let want = h.qint(m as i64 + 1);
            assert_eq!(w.compressed.trace().times(&h.qpow(2)), want);
        }
        let h3 = HeckeSymmetry::standard(3, q0()).unwrap();
        for m in 1..=2 {
            assert!(TraceWeights::calibrate(&h3, m).is_ok());
        }
    }

    #[test]
    fn q_dimension_examples() {
        let q = q0();
        for p in 1..=4 {
            assert_eq!(q_dimension(&[1], p, &q).unwrap(), qint(p as i64, &q));
            for k in 0..=p {
                let ones = vec![1; k];
                assert_eq!(q_dimension(&ones, p, &q).unwrap(), qbinomial(p as u32, k as i64, &q));
            }
        }
        for m in 0..5 {
            assert_eq!(q_dimension(&[m], 2, &q).unwrap(), qint(m + 1, &q));
        }
        assert!(q_dimension(&[1, 1, 1], 2, &q).is_err());
        // Classical limit: Frobenius dimension of (2,1) for gl(3) is 8.
        assert_eq!(q_dimension(&[2, 1], 3, &rat(1, 1)).unwrap(), rat(8, 1));
    }

    #[test]
    fn two_row_decomposition_is_additive() {
        let q = q0();
        for k in 1..=5i64 {
            for m in 1..=k {
                let lhs = q_dimension(&[k], 2, &q).unwrap().times(&q_dimension(&[m], 2, &q).unwrap());
                let rhs = (0..=m).fold(rat(0, 1), |acc, s| {
                    acc.plus(&q_dimension(&[k + s, m - s], 2, &q).unwrap())
                });
                assert_eq!(lhs, rhs);
            }
        }
    }
}
