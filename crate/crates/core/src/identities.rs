//! Central elements, q-Newton identities, and Cayley–Hamilton checks.

use thiserror::Error;

use crate::casimir::{self, CasimirError};
use crate::hecke::HeckeSymmetry;
use crate::reps::{self, block_matrix, RepError, Representation};
use crate::scalars::{elementary_symmetric, qint, zeta, Field};
use crate::tensor::{LegOperator, Mat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdentityError {
    #[error("centrality violation: {0} is not a multiple of the identity")]
    Centrality(String),
    #[error("repeated roots mu_{i} = mu_{j}")]
    RepeatedRoot { i: usize, j: usize },
    #[error("order {up_to} exceeds the symmetry rank {p}")]
    OrderTooHigh { up_to: usize, p: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Casimir(#[from] CasimirError),
}

/// `σ_0..σ_p` and `s_0..s_r` of a representation.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralValues<F> {
    pub sigma: Vec<F>,
    pub s: Vec<F>,
    pub provenance: String,
}

/// Eigenvalue data of an orbit: `μ_1..μ_p` and `ħ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootData<F> {
    pub mu: Vec<F>,
    pub hbar: F,
}

fn scalar_of<F: Field>(x: &Mat<F>, what: impl Fn() -> String) -> Result<F, IdentityError> {
    x.as_scalar().ok_or_else(|| IdentityError::Centrality(what()))
}

/// `L` placed on auxiliary leg 1 of `legs`, module index innermost.
fn on_first_aux_leg<F: Field>(l: &Mat<F>, n: usize, d: usize, legs: usize) -> Mat<F> {
    let rest = n.pow(legs as u32 - 1);
    let size = n.pow(legs as u32) * d;
    let mut out = Mat::zeros(size, size);
    for r in 0..l.rows() {
        let (i, a) = (r / d, r % d);
        for (c, v) in l.row(r) {
            let (j, b) = (c / d, c % d);
            for t in 0..rest {
                out.set((i * rest + t) * d + a, (j * rest + t) * d + b, v.clone());
            }
        }
    }
    out
}

/// Central elements of a representation:
///
/// * `s_r = q Tr_R L^r`;
/// * `σ_k = q^k Tr_{R(1..k)} A^(k) L_1̄ ⋯ L_k̄` with `L_1̄ = L_1` and
///   `L_t̄ = R_{t-1} L_{(t-1)̄} R_{t-1}^-1`, every auxiliary leg traced
///   against `C`.
///
/// Each value is certified to be a multiple of the identity.
pub fn central_elements_in_rep<F: Field>(
    h: &HeckeSymmetry<F>,
    rep: &Representation<F>,
    up_to: usize,
    s_max: usize,
) -> Result<CentralValues<F>, IdentityError> {
    if up_to > h.p() {
        return Err(IdentityError::OrderTooHigh { up_to, p: h.p() });
    }
    let (n, d) = (h.n(), rep.d);
    let q = h.q();
    let l = block_matrix(&rep.relation_blocks());

    let mut s = vec![F::one()];
    let mut power = Mat::identity(n * d);
    for r in 1..=s_max {
        power = power.mul(&l);
        let t = casimir::quantum_trace_blocks(h, &power, d)?;
        s.push(q.times(&scalar_of(&t, || format!("s_{r} in {}", rep.label))?));
    }

    let mut sigma = vec![F::one()];
    let rinv = h.r().mat.sub_scalar(&h.zeta());
    for k in 1..=up_to {
        let id_d = Mat::identity(d);
        let mut lbar = on_first_aux_leg(&l, n, d, k);
        let mut prod = lbar.clone();
        for t in 2..=k {
            let emb = |x: &Mat<F>| {
                LegOperator::new(n, 2, x.clone())
                    .embed_on_legs(t - 1, k)
                    .unwrap()
                    .mat
                    .kron(&id_d)
            };
            lbar = emb(&h.r().mat).mul(&lbar).mul(&emb(&rinv));
            prod = prod.mul(&lbar);
        }
        let a = h.antisymmetrizer(k).kron(&id_d);
        let mut w = Mat::identity(1);
        for _ in 0..k {
            w = w.kron(h.c());
        }
        let t = casimir::weighted_block_trace(&a.mul(&prod), &w, d)?;
        let v = scalar_of(&t, || format!("sigma_{k} in {}", rep.label))?;
        sigma.push(q.pow(k as i64).times(&v));
    }
    Ok(CentralValues {
        sigma,
        s,
        provenance: rep.label.clone(),
    })
}

/// Newton row `r`:
/// `Σ_{t<r} (-1)^(r-1-t) s_{r-t} σ_t - r_q q^(1-r) σ_r`, with `σ_t = 0`
/// beyond the given list.
pub fn newton_residual<F: Field>(sigma: &[F], s: &[F], r: usize, q: &F) -> F {
    let sig = |t: usize| sigma.get(t).cloned().unwrap_or_else(F::zero);
    let mut lhs = F::zero();
    for t in 0..r {
        let term = s[r - t].times(&sig(t));
        if (r - 1 - t) % 2 == 0 {
            lhs.add_assign(&term);
        } else {
            lhs = lhs.minus(&term);
        }
    }
    let ri = r as i64;
    lhs.minus(&qint(ri, q).times(&q.pow(1 - ri)).times(&sig(r)))
}

/// Which Newton rows `1..s.len()` hold exactly.
pub fn newton_check<F: Field>(cv: &CentralValues<F>, q: &F) -> Vec<(usize, bool)> {
    (1..cv.s.len())
        .map(|r| (r, newton_residual(&cv.sigma, &cv.s, r, q).is_zero()))
        .collect()
}

fn distinct_pairs<F: Field>(mu: &[F]) -> Result<(), IdentityError> {
    for i in 0..mu.len() {
        for j in i + 1..mu.len() {
            if mu[i] == mu[j] {
                return Err(IdentityError::RepeatedRoot { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(())
}

/// `d_i = Π_{j≠i} (q μ_i - q^-1 μ_j)/(μ_i - μ_j)`.
pub fn quantum_weights<F: Field>(mu: &[F], q: &F) -> Result<Vec<F>, IdentityError> {
    distinct_pairs(mu)?;
    let qi = q.inverse().expect("q must be nonzero");
    Ok((0..mu.len())
        .map(|i| {
            (0..mu.len()).filter(|&j| j != i).fold(F::one(), |acc, j| {
                let num = q.times(&mu[i]).minus(&qi.times(&mu[j]));
                acc.times(&num).over(&mu[i].minus(&mu[j]))
            })
        })
        .collect())
}

/// `Tr_R L̂^k = q^-p Σ μ_i^k d_i` on the orbit with eigenvalues `μ`.
pub fn parametric_newton<F: Field>(rd: &RootData<F>, k: usize, q: &F) -> Result<F, IdentityError> {
    let d = quantum_weights(&rd.mu, q)?;
    let p = rd.mu.len() as i64;
    let sum = rd
        .mu
        .iter()
        .zip(&d)
        .fold(F::zero(), |acc, (m, w)| acc.plus(&m.pow(k as i64).times(w)));
    Ok(q.pow(-p).times(&sum))
}

/// Newton residuals for rows `1..=rows` with `s_k = q·Tr_R L̂^k` from
/// [`parametric_newton`] and `σ_k = e_k(μ)`.
pub fn parametric_newton_residuals<F: Field>(
    rd: &RootData<F>,
    rows: usize,
    q: &F,
) -> Result<Vec<F>, IdentityError> {
    let p = rd.mu.len();
    let sigma: Vec<F> = (0..=p).map(|k| elementary_symmetric(&rd.mu, k)).collect();
    let mut s = vec![F::one()];
    for k in 1..=rows {
        s.push(q.times(&parametric_newton(rd, k, q)?));
    }
    Ok((1..=rows).map(|r| newton_residual(&sigma, &s, r, q)).collect())
}

/// Outcome of a Cayley–Hamilton check: the number of nonzero entries of
/// the residual matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChReport {
    pub pass: bool,
    pub support: usize,
}

impl ChReport {
    fn of<F: Field>(res: &Mat<F>) -> Self {
        let support = res.nnz();
        ChReport {
            pass: support == 0,
            support,
        }
    }
}

/// `Π_i (M - root_i I) = 0`. Repeated roots are kept.
pub fn ch_verify<F: Field>(m: &Mat<F>, roots: &[F]) -> ChReport {
    ChReport::of(&root_product(m, roots))
}

pub fn root_product<F: Field>(m: &Mat<F>, roots: &[F]) -> Mat<F> {
    roots
        .iter()
        .fold(Mat::identity(m.rows()), |acc, r| acc.mul(&m.sub_scalar(r)))
}

/// `Σ_k (-1)^k σ_k M^(p-k) = 0` with `σ = (σ_0, .., σ_p)`.
pub fn ch_verify_coefficients<F: Field>(m: &Mat<F>, sigma: &[F]) -> ChReport {
    // Horner: ((M - σ_1) M + σ_2) M - ...
    let mut acc = Mat::scalar(m.rows(), &sigma[0]);
    for (k, s) in sigma.iter().enumerate().skip(1) {
        let c = if k % 2 == 0 { s.clone() } else { s.negated() };
        acc = acc.mul(m).add(&Mat::scalar(m.rows(), &c));
    }
    ChReport::of(&acc)
}

/// All `k ∈ N^p` with `|k| = m`, lexicographically descending.
pub fn compositions(m: usize, p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return if m == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=m).rev() {
        for mut rest in compositions(m - first, p - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `ξ_p(k) = Σ_{s=2}^p q^(k_1+..+k_s-m) (k_s)_q (k_1+..+k_{s-1})_q`.
pub fn xi<F: Field>(k: &[usize], q: &F) -> F {
    let m: i64 = k.iter().map(|&x| x as i64).sum();
    let mut prefix = 0i64;
    let mut out = F::zero();
    for (s, &ks) in k.iter().enumerate() {
        let ks = ks as i64;
        if s > 0 {
            let term = q
                .pow(prefix + ks - m)
                .times(&qint(ks, q))
                .times(&qint(prefix, q));
            out.add_assign(&term);
        }
        prefix += ks;
    }
    out
}

/// `μ_k(m)` with `q^(m-1) μ_k(m) = Σ_i (k_i)_q q^(k_i-m) μ_i + ħ ξ_p(k)`,
/// for every composition `k` of `m` into `p = μ.len()` parts.
pub fn conjecture_roots<F: Field>(rd: &RootData<F>, m: usize, q: &F) -> Vec<(Vec<usize>, F)> {
    let mi = m as i64;
    compositions(m, rd.mu.len())
        .into_iter()
        .map(|k| {
            let mut v = rd.hbar.times(&xi(&k, q));
            for (ki, mu) in k.iter().zip(&rd.mu) {
                let ki = *ki as i64;
                v.add_assign(&qint(ki, q).times(&q.pow(ki - mi)).times(mu));
            }
            (k, q.pow(1 - mi).times(&v))
        })
        .collect()
}

/// Rank-2 roots `ω_s = q^(1-m)(q^(s-m) s_q μ_1 + q^-s (m-s)_q μ_2 + ħ s_q (m-s)_q)`,
/// `s = 0..=m`.
pub fn omega_roots<F: Field>(mu1: &F, mu2: &F, hbar: &F, m: usize, q: &F) -> Vec<F> {
    let mi = m as i64;
    (0..=mi)
        .map(|s| {
            let a = q.pow(s - mi).times(&qint(s, q)).times(mu1);
            let b = q.pow(-s).times(&qint(mi - s, q)).times(mu2);
            let c = hbar.times(&qint(s, q)).times(&qint(mi - s, q));
            q.pow(1 - mi).times(&a.plus(&b).plus(&c))
        })
        .collect()
}

/// Keep the first occurrence of every value.
pub fn dedup<F: Field>(v: &[F]) -> Vec<F> {
    let mut out: Vec<F> = Vec::new();
    for x in v {
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    out
}

/// Result of testing one `(k, m)` context against the conjectured roots.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureFinding<F> {
    pub k: usize,
    pub m: usize,
    pub dim: usize,
    /// Number of compositions, `C(m+p-1, m)`.
    pub conjectured: usize,
    /// Number of distinct conjectured values.
    pub distinct: usize,
    /// `Π (X - r)` over the distinct conjectured values vanishes.
    pub product_zero: bool,
    /// Distinct conjectured values that are eigenvalues, with nullity.
    pub present: Vec<(F, usize)>,
    /// Dimension of the generalized eigenspaces of the conjectured values.
    pub covered: usize,
}

impl<F> ConjectureFinding<F> {
    /// Every eigenvalue lies in the conjectured set.
    pub fn consistent(&self) -> bool {
        self.product_zero || self.covered == self.dim
    }
}

fn generalized_nullity<F: Field>(x: &Mat<F>, r: &F) -> usize {
    let y = x.sub_scalar(r);
    let mut pw = y.clone();
    let mut last = x.rows() - pw.rank();
    loop {
        pw = pw.mul(&y);
        let nul = x.rows() - pw.rank();
        if nul == last {
            return nul;
        }
        last = nul;
    }
}

/// `L_(m)` in the left symmetric power `V_(k)` for any rank, tested against
/// the conjectured roots with `μ` the eigenvalues of `L` in that module.
pub fn conjecture_scan<F: Field>(
    h: &HeckeSymmetry<F>,
    k: usize,
    m: usize,
    mu: &[F],
) -> Result<ConjectureFinding<F>, IdentityError> {
    let pk = reps::sym_power_left(h, k)?;
    let x = casimir::l_m_matrix(h, &pk.rho, m)?;
    let rd = RootData {
        mu: mu.to_vec(),
        hbar: F::one(),
    };
    let roots = conjecture_roots(&rd, m, h.q());
    let values: Vec<F> = roots.iter().map(|(_, v)| v.clone()).collect();
    let distinct = dedup(&values);
    let product_zero = root_product(&x, &distinct).is_zero();
    let dim = x.rows();
    let mut present = Vec::new();
    for r in &distinct {
        let nul = dim - x.sub_scalar(r).rank();
        if nul > 0 {
            present.push((r.clone(), nul));
        }
    }
    let covered = if product_zero {
        dim
    } else {
        distinct.iter().map(|r| generalized_nullity(&x, r)).sum()
    };
    Ok(ConjectureFinding {
        k,
        m,
        dim,
        conjectured: roots.len(),
        distinct: distinct.len(),
        product_zero,
        present,
        covered,
    })
}

/// `μ` for `L` in the right module `V_(k)` of a rank-2 symmetry with the
/// modified generators `ħ π̄(l)`: `(0, ħ (1 - q^(-2k-2))/ζ)`.
pub fn right_module_mu<F: Field>(k: usize, hbar: &F, q: &F) -> Vec<F> {
    let x = q.pow(-2 * k as i64 - 2);
    vec![F::zero(), hbar.times(&F::one().minus(&x)).over(&zeta(q))]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, sample_q, sample_rational, Rational};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q0() -> Rational {
        rat(3, 7)
    }

    #[test]
    fn basic_central_values_p2() {
        let h = HeckeSymmetry::standard(2, q0()).unwrap();
        for k in 1..=4 {
            let rep = reps::rea_normalized_right(&h, k).unwrap();
            let cv = central_elements_in_rep(&h, &rep, 2, 5).unwrap();
            let x = Field::pow(&q0(), -2 * k as i64 - 2);
            assert_eq!(cv.sigma[1], rat(1, 1) + &x);
            assert_eq!(cv.sigma[2], x);
            assert_eq!(cv.s[1], cv.sigma[1]);
            assert!(newton_check(&cv, &q0()).iter().all(|(_, ok)| *ok));
        }
    }

    #[test]
    fn perturbed_sigma_breaks_row_two() {
        let h = HeckeSymmetry::standard(2, q0()).unwrap();
        let rep = reps::rea_normalized_right(&h, 2).unwrap();
        let mut cv = central_elements_in_rep(&h, &rep, 2, 2).unwrap();
        cv.sigma[2] = &cv.sigma[2] + rat(1, 1);
        assert_eq!(newton_check(&cv, &q0()), vec![(1, true), (2, false)]);
    }

    #[test]
    fn order_above_rank_is_rejected() {
        let h = HeckeSymmetry::standard(2, q0()).unwrap();
        let rep = reps::rea_normalized_right(&h, 1).unwrap();
        assert!(matches!(
            central_elements_in_rep(&h, &rep, 3, 1),
            Err(IdentityError::OrderTooHigh { .. })
        ));
    }

    #[test]
    fn weights_p2_and_classical_limit() {
        let q = q0();
        let mu = vec![rat(2, 1), rat(-1, 3)];
        let d = quantum_weights(&mu, &q).unwrap();
        let qi = q.recip();
        assert_eq!(d[0], (&q * &mu[0] - &qi * &mu[1]) / (&mu[0] - &mu[1]));
        let one = rat(1, 1);
        assert!(quantum_weights(&mu, &one).unwrap().iter().all(|w| *w == one));
        let rep = vec![rat(1, 1), rat(2, 1), rat(1, 1)];
        assert_eq!(
            quantum_weights(&rep, &q),
            Err(IdentityError::RepeatedRoot { i: 1, j: 3 })
        );
    }

    #[test]
    fn parametric_resolution_p_le_4() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in 1..=4 {
            for _ in 0..3 {
                let q = sample_q(&mut rng, 128);
                let mu: Vec<Rational> = (0..p).map(|_| sample_rational(&mut rng, 128)).collect();
                if dedup(&mu).len() < p {
                    continue;
                }
                let rd = RootData { mu, hbar: rat(0, 1) };
                let res = parametric_newton_residuals(&rd, p + 2, &q).unwrap();
                assert!(res.iter().all(Field::is_zero), "p={p}");
            }
        }
    }

    #[test]
    fn ch_forms() {
        let m = Mat::diag(&[rat(2, 1), rat(5, 1)]);
        assert!(ch_verify(&m, &[rat(2, 1), rat(5, 1)]).pass);
        let r = ch_verify(&m, &[rat(2, 1)]);
        assert_eq!(r, ChReport { pass: false, support: 1 });
        assert!(ch_verify_coefficients(&m, &[rat(1, 1), rat(7, 1), rat(10, 1)]).pass);
        assert!(!ch_verify_coefficients(&m, &[rat(1, 1), rat(7, 1), rat(11, 1)]).pass);
    }

    #[test]
    fn root_counts_and_p2_agreement() {
        let q = q0();
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(5, 4).len(), 56);
        let rd = RootData {
            mu: vec![rat(2, 3), rat(-5, 1)],
            hbar: rat(3, 2),
        };
        for m in 1..=5 {
            let conj = conjecture_roots(&rd, m, &q);
            let om = omega_roots(&rd.mu[0], &rd.mu[1], &rd.hbar, m, &q);
            for (k, v) in conj {
                assert_eq!(v, om[k[0]]);
            }
        }
    }

    #[test]
    fn classical_limit_of_roots() {
        // At q = 1: μ_k = Σ k_i μ_i + ħ Σ_{i<j} k_i k_j.
        let one = rat(1, 1);
        let rd = RootData {
            mu: vec![rat(2, 1), rat(7, 3), rat(-1, 2)],
            hbar: rat(5, 4),
        };
        for (k, v) in conjecture_roots(&rd, 4, &one) {
            let mut want = rat(0, 1);
            for i in 0..3 {
                want += rat(k[i] as i64, 1) * &rd.mu[i];
                for j in i + 1..3 {
                    want += rat((k[i] * k[j]) as i64, 1) * &rd.hbar;
                }
            }
            assert_eq!(v, want);
        }
    }

    #[test]
    fn basic_ch_in_p3_left_modules() {
        let q = q0();
        let h = HeckeSymmetry::standard(3, q.clone()).unwrap();
        for k in 1..=2usize {
            let ki = k as i64;
            let mu = vec![
                rat(0, 1),
                q.recip(),
                qint(ki + 2, &q) * Field::pow(&q, -ki - 2),
            ];
            let f = conjecture_scan(&h, k, 1, &mu).unwrap();
            assert!(f.product_zero, "k={k}");
            assert_eq!(f.conjectured, 3);
        }
    }

    proptest! {
        #[test]
        fn xi_is_permutation_invariant(k in prop::collection::vec(0usize..4, 2..=4), seed in 0u64..1000) {
            let q = rat(5, 3);
            let base = xi(&k, &q);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perm = k.clone();
            use rand::seq::SliceRandom;
            perm.shuffle(&mut rng);
            prop_assert_eq!(base, xi(&perm, &q));
        }

        #[test]
        fn elementary_symmetric_properties(t in prop::collection::vec(-9i64..9, 2..6), kk in 1usize..6) {
            let t: Vec<Rational> = t.into_iter().map(|x| rat(x, 1)).collect();
            let p = t.len();
            let k = kk.min(p);
            let without = |v: &[Rational], i: usize| -> Vec<Rational> {
                v.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect()
            };
            // e_k = e_k(t̂_i) + t_i e_{k-1}(t̂_i)
            let ti = without(&t, 0);
            prop_assert_eq!(
                elementary_symmetric(&t, k),
                elementary_symmetric(&ti, k) + &t[0] * elementary_symmetric(&ti, k - 1)
            );
            // e_k(t̂_i) - e_k(t̂_j) = (t_j - t_i) e_{k-1}(t̂_i, t̂_j)
            let tj = without(&t, 1);
            let tij = without(&ti, 0);
            prop_assert_eq!(
                elementary_symmetric(&ti, k) - elementary_symmetric(&tj, k),
                (&t[1] - &t[0]) * elementary_symmetric(&tij, k - 1)
            );
            // k e_k = Σ_i t_i e_{k-1}(t̂_i)
            let rhs = (0..p).fold(rat(0, 1), |acc, i| {
                acc + &t[i] * elementary_symmetric(&without(&t, i), k - 1)
            });
            prop_assert_eq!(rat(k as i64, 1) * elementary_symmetric(&t, k), rhs);
        }
    }
}
