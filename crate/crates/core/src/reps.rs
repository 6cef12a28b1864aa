//! Finite-dimensional representations of the (modified) reflection
//! equation algebra.
//!
//! Blocks `rho[i][j]` are stored as linear maps on column vectors for both
//! sides. A left representation satisfies the relations
//! `R L_1 R L_1 - L_1 R L_1 R = ħ (R L_1 - L_1 R)` with its blocks as they
//! are; a right representation satisfies them with every block transposed,
//! which is the same as multiplying the action matrices in the opposite
//! order.

use std::sync::Arc;

use thiserror::Error;

use crate::hecke::HeckeSymmetry;
use crate::scalars::Field;
use crate::tensor::{ImageBasis, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Which algebra the blocks realize: the modified algebra with parameter
/// `ħ`, or the unmodified one (`ħ = 0` in the relations).
#[derive(Clone, Debug, PartialEq)]
pub enum Algebra<F> {
    Mrea { hbar: F },
    Rea,
}

impl<F: Field> Algebra<F> {
    pub fn hbar(&self) -> F {
        match self {
            Algebra::Mrea { hbar } => hbar.clone(),
            Algebra::Rea => F::zero(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("requires symmetry rank 2, got {0}")]
    RequiresRankTwo(usize),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("z must be nonzero")]
    ZeroZ,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("{0} is not a representation of the modified algebra")]
    NotModified(String),
    #[error("{0} is not a representation of the unmodified algebra")]
    NotUnmodified(String),
    #[error("{label}: defining relations fail at {count} positions")]
    Relations { label: String, count: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representation<F> {
    pub side: Side,
    pub algebra: Algebra<F>,
    pub n: usize,
    pub d: usize,
    pub rho: Vec<Vec<Mat<F>>>,
    pub label: String,
}

/// A nonzero entry of the relations residual, addressed as
/// `(generator row i, auxiliary a, module α)` by `(j, b, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation<F> {
    pub row: (usize, usize, usize),
    pub col: (usize, usize, usize),
    pub value: F,
}

impl<F: Field> Representation<F> {
    /// Blocks in the order in which the relations hold: as stored for a left
    /// representation, transposed for a right one.
    pub fn relation_blocks(&self) -> Vec<Vec<Mat<F>>> {
        match self.side {
            Side::Left => self.rho.clone(),
            Side::Right => self
                .rho
                .iter()
                .map(|r| r.iter().map(Mat::transpose).collect())
                .collect(),
        }
    }

    fn with_blocks(&self, rho: Vec<Vec<Mat<F>>>, algebra: Algebra<F>, label: String) -> Self {
        Representation {
            side: self.side,
            algebra,
            n: self.n,
            d: self.d,
            rho,
            label,
        }
    }

    /// `rho[i][j] -> a rho[i][j] + b δ_ij I`.
    fn affine(&self, a: &F, b: &F) -> Vec<Vec<Mat<F>>> {
        let id = Mat::scalar(self.d, b);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let x = self.rho[i][j].scale(a);
                        if i == j {
                            x.add(&id)
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Assemble `n×n` blocks of size `d` into one `nd×nd` matrix, generator
/// index outer.
pub fn block_matrix<F: Field>(blocks: &[Vec<Mat<F>>]) -> Mat<F> {
    let n = blocks.len();
    let d = blocks[0][0].rows();
    let mut out = Mat::zeros(n * d, n * d);
    for (i, row) in blocks.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            for r in 0..d {
                for (c, v) in b.row(r) {
                    out.set(i * d + r, j * d + c, v.clone());
                }
            }
        }
    }
    out
}

/// `L_1` on `V⊗V⊗M`, index `(i, a, α)`: block `L_i^j` at `((i,a),(j,a))`.
fn l_first_leg<F: Field>(blocks: &[Vec<Mat<F>>], n: usize, d: usize) -> Mat<F> {
    let mut out = Mat::zeros(n * n * d, n * n * d);
    for i in 0..n {
        for j in 0..n {
            let b = &blocks[i][j];
            for a in 0..n {
                let (r0, c0) = ((i * n + a) * d, (j * n + a) * d);
                for r in 0..d {
                    for (c, v) in b.row(r) {
                        out.set(r0 + r, c0 + c, v.clone());
                    }
                }
            }
        }
    }
    out
}

/// Residual of the defining relations, entry by entry; empty iff valid.
pub fn verify_defining_relations<F: Field>(
    rep: &Representation<F>,
    h: &HeckeSymmetry<F>,
) -> Vec<Violation<F>> {
    let (n, d) = (rep.n, rep.d);
    assert_eq!(n, h.n(), "generator size differs from dim V");
    let l1 = l_first_leg(&rep.relation_blocks(), n, d);
    let rr = h.r().mat.kron(&Mat::identity(d));
    let rl = rr.mul(&l1);
    let lr = l1.mul(&rr);
    let lhs = rl.mul(&rl).sub(&lr.mul(&lr));
    let res = lhs.sub(&rl.sub(&lr).scale(&rep.algebra.hbar()));
    let split = |x: usize| (x / (n * d), (x / d) % n, x % d);
    res.nonzero_positions()
        .into_iter()
        .map(|(r, c)| Violation {
            row: split(r),
            col: split(c),
            value: res.get(r, c),
        })
        .collect()
}

fn checked<F: Field>(
    rep: Representation<F>,
    h: &HeckeSymmetry<F>,
) -> Result<Representation<F>, RepError> {
    let v = verify_defining_relations(&rep, h);
    if v.is_empty() {
        Ok(rep)
    } else {
        Err(RepError::Relations {
            label: rep.label,
            count: v.len(),
        })
    }
}

fn per_generator<F: Field>(n: usize, mut f: impl FnMut(usize, usize) -> Mat<F>) -> Vec<Vec<Mat<F>>> {
    (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
}

fn fundamental_blocks<F: Field>(h: &HeckeSymmetry<F>) -> Vec<Vec<Mat<F>>> {
    let n = h.n();
    per_generator(n, |i, j| {
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            m.set(i, k, h.b().get(k, j));
        }
        m
    })
}

/// `π(l_i^j) x_k = x_i B_k^j` on `V`, with `ħ = 1`.
pub fn fundamental_left<F: Field>(h: &HeckeSymmetry<F>) -> Result<Representation<F>, RepError> {
    let rep = Representation {
        side: Side::Left,
        algebra: Algebra::Mrea { hbar: F::one() },
        n: h.n(),
        d: h.n(),
        rho: fundamental_blocks(h),
        label: "fundamental".into(),
    };
    checked(rep, h)
}

fn tensor_power_blocks<F: Field>(h: &HeckeSymmetry<F>, m: usize) -> Vec<Vec<Mat<F>>> {
    let n = h.n();
    let rinv = h.left_r_inverse();
    let legs: Vec<Mat<F>> = (1..m)
        .map(|t| {
            Mat::identity(n.pow(t as u32 - 1))
                .kron(&rinv)
                .kron(&Mat::identity(n.pow((m - t - 1) as u32)))
        })
        .collect();
    let tail = Mat::identity(n.pow(m as u32 - 1));
    let fund = fundamental_blocks(h);
    per_generator(n, |i, j| {
        let mut x = fund[i][j].kron(&tail);
        let mut total = x.clone();
        for r in &legs {
            x = r.mul(&x).mul(r);
            total = total.add(&x);
        }
        total
    })
}

/// `ρ_m(l) = Σ_t X_t` on `V^{⊗m}` with `X_1 = π(l) ⊗ I` and
/// `X_{t+1} = 𝓡^-1_{t,t+1} X_t 𝓡^-1_{t,t+1}`.
pub fn tensor_power_left<F: Field>(
    h: &HeckeSymmetry<F>,
    m: usize,
) -> Result<Representation<F>, RepError> {
    if m == 0 {
        return Err(RepError::ZeroDegree);
    }
    let rep = Representation {
        side: Side::Left,
        algebra: Algebra::Mrea { hbar: F::one() },
        n: h.n(),
        d: h.n().pow(m as u32),
        rho: tensor_power_blocks(h, m),
        label: format!("tensor_power m={m}"),
    };
    checked(rep, h)
}

fn sym_prefactor<F: Field>(h: &HeckeSymmetry<F>, m: usize) -> F {
    h.qpow(1 - m as i64).times(&h.qint(m as i64))
}

/// Left symmetric power on `Im S^(m)`:
/// `q^(1-m) m_q S (π(l) ⊗ I^{⊗(m-1)}) S`, compressed to the pivot basis.
pub fn sym_power_left<F: Field>(
    h: &HeckeSymmetry<F>,
    m: usize,
) -> Result<Representation<F>, RepError> {
    if m == 0 {
        return Err(RepError::ZeroDegree);
    }
    let n = h.n();
    let basis = h.left_basis(m);
    let c = sym_prefactor(h, m);
    let tail = Mat::identity(n.pow(m as u32 - 1));
    let fund = fundamental_blocks(h);
    // G S = G and S U = U, so the sandwich by S compresses to G X U.
    let rho = per_generator(n, |i, j| basis.compress(&fund[i][j].kron(&tail)).scale(&c));
    let rep = Representation {
        side: Side::Left,
        algebra: Algebra::Mrea { hbar: F::one() },
        n,
        d: basis.dim(),
        rho,
        label: format!("sym_power m={m}"),
    };
    checked(rep, h)
}

/// Compression of a tensor-power representation to the basis of
/// `Im S^(m)` used by [`sym_power_left`].
pub fn compress_tensor_power<F: Field>(
    rep: &Representation<F>,
    h: &HeckeSymmetry<F>,
    m: usize,
) -> Vec<Vec<Mat<F>>> {
    let basis = h.left_basis(m);
    rep.rho
        .iter()
        .map(|r| r.iter().map(|b| basis.compress(b)).collect())
        .collect()
}

/// Single-leg right action in row form:
/// `x_k ◁ π̄(l_i^j) = (2_q/q²) A^(2)_{ki}^{sj} x_s`.
fn right_fundamental_rows<F: Field>(h: &HeckeSymmetry<F>) -> Vec<Vec<Mat<F>>> {
    let n = h.n();
    let a2 = h.antisymmetrizer(2);
    let c = h.qint(2).times(&h.qpow(-2));
    per_generator(n, |i, j| Mat::from_fn(n, n, |k, s| a2.get(k * n + i, s * n + j).times(&c)))
}

fn right_sym_blocks<F: Field>(
    h: &HeckeSymmetry<F>,
    m: usize,
    single: &[Vec<Mat<F>>],
    prefactor: &F,
) -> (Vec<Vec<Mat<F>>>, Arc<ImageBasis<F>>) {
    let n = h.n();
    let basis = h.left_basis(m);
    let head = Mat::identity(n.pow(m as u32 - 1));
    // The column form of S (I ⊗ Φ) S is Sᵀ (I ⊗ Φᵀ) Sᵀ, and the basis
    // belongs to Sᵀ.
    let rho = per_generator(n, |i, j| {
        basis.compress(&head.kron(&single[i][j].transpose())).scale(prefactor)
    });
    (rho, basis)
}

/// Right symmetric power of a rank-2 symmetry on `Im S^(m)`:
/// `q^(1-m) m_q S (I^{⊗(m-1)} ⊗ π̄(l)) S`, stored in column form.
pub fn sym_power_right_p2<F: Field>(
    h: &HeckeSymmetry<F>,
    m: usize,
) -> Result<Representation<F>, RepError> {
    if h.p() != 2 {
        return Err(RepError::RequiresRankTwo(h.p()));
    }
    if m == 0 {
        return Err(RepError::ZeroDegree);
    }
    let (rho, basis) = right_sym_blocks(h, m, &right_fundamental_rows(h), &sym_prefactor(h, m));
    let rep = Representation {
        side: Side::Right,
        algebra: Algebra::Mrea { hbar: F::one() },
        n: h.n(),
        d: basis.dim(),
        rho,
        label: format!("right_sym_power m={m}"),
    };
    checked(rep, h)
}

/// The literal single-leg formula for the unmodified right generators,
/// `Φ = q^(1-m) m_q I - ζ (2_q/q²) A^(2)`, sandwiched like
/// [`sym_power_right_p2`]. Kept for comparison only: it differs from
/// [`rea_normalized_right`] by a multiple of the identity unless `m = 1`.
pub fn corollary_right_rep<F: Field>(
    h: &HeckeSymmetry<F>,
    m: usize,
) -> Result<Representation<F>, RepError> {
    if h.p() != 2 {
        return Err(RepError::RequiresRankTwo(h.p()));
    }
    let n = h.n();
    let pre = sym_prefactor(h, m);
    let z = h.zeta();
    let single = right_fundamental_rows(h);
    let phi = per_generator(n, |i, j| {
        let x = single[i][j].scale(&z).neg();
        if i == j {
            x.add(&Mat::scalar(n, &pre))
        } else {
            x
        }
    });
    let (rho, basis) = right_sym_blocks(h, m, &phi, &pre);
    Ok(Representation {
        side: Side::Right,
        algebra: Algebra::Rea,
        n,
        d: basis.dim(),
        rho,
        label: format!("corollary_right m={m}"),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum ShiftMode<F> {
    /// `ρ -> ρ - (ħ/ζ) δ I`, using the representation's own `ħ`.
    MreaToRea,
    /// `ρ -> ρ + (ħ/ζ) δ I`.
    ReaToMrea(F),
    /// `ρ -> z ρ + ħ (1 - z)/ζ δ I`, staying in the modified algebra.
    ZShift(F),
}

pub fn shift_rep<F: Field>(
    rep: &Representation<F>,
    h: &HeckeSymmetry<F>,
    mode: &ShiftMode<F>,
) -> Result<Representation<F>, RepError> {
    let z = h.zeta();
    match mode {
        ShiftMode::MreaToRea => {
            let Algebra::Mrea { hbar } = &rep.algebra else {
                return Err(RepError::NotModified(rep.label.clone()));
            };
            let b = hbar.over(&z).negated();
            let label = format!("{} shifted to REA", rep.label);
            Ok(rep.with_blocks(rep.affine(&F::one(), &b), Algebra::Rea, label))
        }
        ShiftMode::ReaToMrea(hbar) => {
            if rep.algebra != Algebra::Rea {
                return Err(RepError::NotUnmodified(rep.label.clone()));
            }
            let b = hbar.over(&z);
            let label = format!("{} shifted to mREA", rep.label);
            Ok(rep.with_blocks(
                rep.affine(&F::one(), &b),
                Algebra::Mrea { hbar: hbar.clone() },
                label,
            ))
        }
        ShiftMode::ZShift(zz) => {
            if zz.is_zero() {
                return Err(RepError::ZeroZ);
            }
            let Algebra::Mrea { hbar } = &rep.algebra else {
                return Err(RepError::NotModified(rep.label.clone()));
            };
            let b = hbar.times(&F::one().minus(zz)).over(&z);
            let label = format!("{} z-shifted by {zz}", rep.label);
            Ok(rep.with_blocks(rep.affine(zz, &b), rep.algebra.clone(), label))
        }
    }
}

/// `ρ -> c ρ`; the modified algebra's `ħ` scales along.
pub fn scale_rep<F: Field>(rep: &Representation<F>, c: &F) -> Result<Representation<F>, RepError> {
    if c.is_zero() {
        return Err(RepError::ZeroScale);
    }
    let algebra = match &rep.algebra {
        Algebra::Mrea { hbar } => Algebra::Mrea { hbar: hbar.times(c) },
        Algebra::Rea => Algebra::Rea,
    };
    let label = format!("{} scaled by {c}", rep.label);
    Ok(rep.with_blocks(rep.affine(c, &F::zero()), algebra, label))
}

/// Unmodified right generators `π̄(l̂) = I - ζ π̄(l)` on `V_(m)`: the shift
/// to the unmodified algebra followed by the rescaling by `-ζ`. Under this
/// normalization `L̂_(k,1)` has spectrum `{1, q^(-2k-2)}`.
pub fn rea_normalized_right<F: Field>(
    h: &HeckeSymmetry<F>,
    m: usize,
) -> Result<Representation<F>, RepError> {
    let base = sym_power_right_p2(h, m)?;
    let rea = shift_rep(&base, h, &ShiftMode::MreaToRea)?;
    let mut out = scale_rep(&rea, &h.zeta().negated())?;
    out.label = format!("right_sym_power m={m} (REA)");
    Ok(out)
}
