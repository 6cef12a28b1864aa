//! Noncommutative orbits: genericity, spectral idempotents, multiplicities,
//! eigenvalues in representations, higher Newton identities and strings.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::casimir::{self, CasimirError, CasimirForm, TraceWeights};
use crate::hecke::HeckeSymmetry;
use crate::identities::{self, conjecture_roots, IdentityError, RootData};
use crate::reps::{self, RepError};
use crate::scalars::{qint, zeta, Field};
use crate::tensor::Mat;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("eigenvalues are not pairwise distinct: mu_{i} = mu_{j}")]
    NotOneGeneric { i: usize, j: usize },
    #[error("the orbit is not {m}-generic")]
    NotMGeneric { m: usize },
    #[error("repeated roots at positions {i} and {j}")]
    RepeatedRoot { i: usize, j: usize },
    #[error("the matrix does not satisfy the polynomial of its roots ({support} nonzero entries)")]
    ChFailure { support: usize },
    #[error("malformed signature {0:?}")]
    Signature(Vec<i64>),
    #[error("signature has {parts} parts, more than p = {p}")]
    TooManyParts { parts: usize, p: usize },
    #[error("{what} requires rank {want}, got {got}")]
    Rank { what: &'static str, want: usize, got: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Casimir(#[from] CasimirError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// `q = 1` formulas.
    Classical,
    Quantum,
}

/// Eigenvalues of a representation of the generating matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenMode {
    /// `μ_i = λ_{p-i+1} + i - 1`, with `ħ = 1`.
    Classical,
    /// `μ_i = η q^(-2(λ_{p-i+1}+i))`, `η = -q²/(q - q^-1)`.
    ReaQ,
    /// `μ̄_i = (λ_{p-i+1}+i-1)_q / q^(λ_{p-i+1}+i-1)`.
    MreaQ,
}

/// A vector of nonnegative integers: a composition `k` or a signature `λ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionVector(Vec<i64>);

impl PartitionVector {
    pub fn new(parts: Vec<i64>) -> Result<Self, OrbitError> {
        if parts.iter().any(|&x| x < 0) {
            return Err(OrbitError::Signature(parts));
        }
        Ok(PartitionVector(parts))
    }

    /// A signature: nonnegative and weakly decreasing.
    pub fn signature(parts: Vec<i64>) -> Result<Self, OrbitError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(OrbitError::Signature(parts));
        }
        Self::new(parts)
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Padded with zeros to `p` parts.
    pub fn padded(&self, p: usize) -> Result<Vec<i64>, OrbitError> {
        if self.0.len() > p {
            return Err(OrbitError::TooManyParts { parts: self.0.len(), p });
        }
        let mut v = self.0.clone();
        v.resize(p, 0);
        Ok(v)
    }

    /// `λ* = (-λ_p, .., -λ_1)`.
    pub fn star(&self, p: usize) -> Result<Vec<i64>, OrbitError> {
        Ok(self.padded(p)?.iter().rev().map(|x| -x).collect())
    }

    /// `λ̂*`: `λ*` shifted so that its last entry is zero.
    pub fn star_hat(&self, p: usize) -> Result<Vec<i64>, OrbitError> {
        let s = self.star(p)?;
        let last = *s.last().unwrap_or(&0);
        Ok(s.iter().map(|x| x - last).collect())
    }
}

impl fmt::Display for PartitionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `dim V_λ = Π_{i<j} (λ_i - λ_j - i + j)/(j - i)` for any integer vector.
pub fn frobenius_dim<F: Field>(lambda: &[i64]) -> F {
    let p = lambda.len();
    let mut out = F::one();
    for i in 0..p {
        for j in i + 1..p {
            let d = (j - i) as i64;
            out = out.times(&F::from_int(lambda[i] - lambda[j] + d)).over(&F::from_int(d));
        }
    }
    out
}

/// `μ_i(λ)` for a signature with at most `p` parts.
pub fn rep_eigenvalues<F: Field>(
    lambda: &PartitionVector,
    p: usize,
    mode: EigenMode,
    q: &F,
) -> Result<Vec<F>, OrbitError> {
    if lambda.parts().windows(2).any(|w| w[0] < w[1]) {
        return Err(OrbitError::Signature(lambda.parts().to_vec()));
    }
    let l = lambda.padded(p)?;
    Ok((0..p)
        .map(|i| {
            let a = l[p - 1 - i] + i as i64;
            match mode {
                EigenMode::Classical => F::from_int(a),
                EigenMode::ReaQ => {
                    let eta = q.pow(2).over(&zeta(q)).negated();
                    eta.times(&q.pow(-2 * (a + 1)))
                }
                EigenMode::MreaQ => qint(a, q).times(&q.pow(-a)),
            }
        })
        .collect())
}

/// Eigenvalues `μ_1..μ_p`, `ħ` and `q` of an orbit.
pub struct OrbitSpec<F> {
    pub mu: Vec<F>,
    pub hbar: F,
    pub q: F,
    cache: Arc<Mutex<BTreeMap<(usize, Mode), bool>>>,
}

impl<F: Clone> Clone for OrbitSpec<F> {
    fn clone(&self) -> Self {
        OrbitSpec {
            mu: self.mu.clone(),
            hbar: self.hbar.clone(),
            q: self.q.clone(),
            cache: self.cache.clone(),
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for OrbitSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrbitSpec")
            .field("mu", &self.mu)
            .field("hbar", &self.hbar)
            .field("q", &self.q)
            .finish()
    }
}

impl<F: Field> OrbitSpec<F> {
    pub fn new(mu: Vec<F>, hbar: F, q: F) -> Self {
        OrbitSpec {
            mu,
            hbar,
            q,
            cache: Arc::default(),
        }
    }

    pub fn p(&self) -> usize {
        self.mu.len()
    }

    /// The `q` used by `mode`: `1` in the classical case.
    pub fn q_for(&self, mode: Mode) -> F {
        match mode {
            Mode::Classical => F::one(),
            Mode::Quantum => self.q.clone(),
        }
    }

    pub fn root_data(&self) -> RootData<F> {
        RootData {
            mu: self.mu.clone(),
            hbar: self.hbar.clone(),
        }
    }

    pub fn check_one_generic(&self) -> Result<(), OrbitError> {
        first_repeat(&self.mu).map_or(Ok(()), |(i, j)| Err(OrbitError::NotOneGeneric { i, j }))
    }

    /// `μ_k(m)` for all compositions `k` of `m`.
    pub fn roots(&self, m: usize, mode: Mode) -> Vec<(Vec<usize>, F)> {
        conjecture_roots(&self.root_data(), m, &self.q_for(mode))
    }

    /// 1-generic and the `μ_k(m)` pairwise distinct.
    pub fn is_m_generic(&self, m: usize, mode: Mode) -> bool {
        if let Some(&v) = self.cache.lock().unwrap().get(&(m, mode)) {
            return v;
        }
        let values: Vec<F> = self.roots(m, mode).into_iter().map(|(_, v)| v).collect();
        let v = self.check_one_generic().is_ok() && first_repeat(&values).is_none();
        self.cache.lock().unwrap().insert((m, mode), v);
        v
    }

    fn require_m_generic(&self, m: usize, mode: Mode) -> Result<(), OrbitError> {
        if self.is_m_generic(m, mode) {
            Ok(())
        } else {
            Err(OrbitError::NotMGeneric { m })
        }
    }
}

/// 1-based positions of the first repeated pair.
fn first_repeat<F: PartialEq>(v: &[F]) -> Option<(usize, usize)> {
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return Some((i + 1, j + 1));
            }
        }
    }
    None
}

/// `e_j = Π_{i≠j} (M - r_i)/(r_j - r_i)`, checked to be a complete family of
/// orthogonal idempotents with `M = Σ r_j e_j`.
pub fn spectral_idempotents<F: Field>(m: &Mat<F>, roots: &[F]) -> Result<Vec<Mat<F>>, OrbitError> {
    if let Some((i, j)) = first_repeat(roots) {
        return Err(OrbitError::RepeatedRoot { i, j });
    }
    let ch = identities::ch_verify(m, roots);
    if !ch.pass {
        return Err(OrbitError::ChFailure { support: ch.support });
    }
    let n = m.rows();
    let idem: Vec<Mat<F>> = (0..roots.len())
        .map(|j| {
            (0..roots.len()).filter(|&i| i != j).fold(Mat::identity(n), |acc, i| {
                let c = roots[j].minus(&roots[i]).inverse().expect("distinct roots");
                acc.mul(&m.sub_scalar(&roots[i])).scale(&c)
            })
        })
        .collect();
    Ok(idem)
}

/// Orthogonality, completeness and reconstruction of a family of idempotents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentReport {
    pub orthogonal: bool,
    pub complete: bool,
    pub reconstructs: bool,
    pub ranks: Vec<usize>,
}

impl IdempotentReport {
    pub fn passed(&self) -> bool {
        self.orthogonal && self.complete && self.reconstructs
    }
}

pub fn check_idempotents<F: Field>(m: &Mat<F>, roots: &[F], idem: &[Mat<F>]) -> IdempotentReport {
    let n = m.rows();
    let mut orthogonal = true;
    for (i, a) in idem.iter().enumerate() {
        for (j, b) in idem.iter().enumerate() {
            let prod = a.mul(b);
            let ok = if i == j { prod == *a } else { prod.is_zero() };
            orthogonal &= ok;
        }
    }
    let sum = idem.iter().fold(Mat::zeros(n, n), |acc, e| acc.add(e));
    let recon = idem
        .iter()
        .zip(roots)
        .fold(Mat::zeros(n, n), |acc, (e, r)| acc.add(&e.scale(r)));
    IdempotentReport {
        orthogonal,
        complete: sum == Mat::identity(n),
        reconstructs: recon == *m,
        ranks: idem.iter().map(Mat::rank).collect(),
    }
}

/// `d_k(m)` for every composition `k` of `m`.
///
/// * classical: `Π_{i<j} (μ_i - μ_j - (k_i - k_j)ħ)/(μ_i - μ_j)`;
/// * quantum: `Π_{i<j} (q^(k_i-k_j) μ_i - q^(k_j-k_i) μ_j - ħ (k_i-k_j)_q)/(μ_i - μ_j)`.
pub fn multiplicities<F: Field>(
    spec: &OrbitSpec<F>,
    m: usize,
    mode: Mode,
) -> Result<Vec<(Vec<usize>, F)>, OrbitError> {
    spec.require_m_generic(m, mode)?;
    Ok(identities::compositions(m, spec.p())
        .into_iter()
        .map(|k| {
            let d = multiplicity(&spec.mu, &spec.hbar, &k, &spec.q_for(mode));
            (k, d)
        })
        .collect())
}

/// The quantum formula at a given `q`; `q = 1` gives the classical one.
fn multiplicity<F: Field>(mu: &[F], hbar: &F, k: &[usize], q: &F) -> F {
    let mut out = F::one();
    for i in 0..mu.len() {
        for j in i + 1..mu.len() {
            let e = k[i] as i64 - k[j] as i64;
            let num = q
                .pow(e)
                .times(&mu[i])
                .minus(&q.pow(-e).times(&mu[j]))
                .minus(&hbar.times(&qint(e, q)));
            out = out.times(&num).over(&mu[i].minus(&mu[j]));
        }
    }
    out
}

/// Concrete admissibility: gaps `λ_i - λ_{i+1} ≥ m` and the classical
/// `μ_k(λ, m)` pairwise distinct.
pub fn is_admissible(lambda: &PartitionVector, p: usize, m: usize) -> bool {
    let Ok(l) = lambda.padded(p) else { return false };
    if l.windows(2).any(|w| w[0] - w[1] < m as i64) {
        return false;
    }
    let Ok(mu) = rep_eigenvalues::<crate::scalars::Rational>(lambda, p, EigenMode::Classical, &crate::scalars::rat(1, 1)) else {
        return false;
    };
    OrbitSpec::new(mu, crate::scalars::rat(1, 1), crate::scalars::rat(1, 1)).is_m_generic(m, Mode::Classical)
}

/// `s_2(λ) = Σ_i (λ_i² + λ_i (n + 1 - 2i))`.
pub fn s2(lambda: &[i64]) -> i64 {
    let n = lambda.len() as i64;
    lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| l * l + l * (n + 1 - 2 * (i as i64 + 1)))
        .sum()
}

/// One power `s` of a higher Newton identity, computed by two routes.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPower<F> {
    pub s: usize,
    /// `None` when the matrix-side trace is not a multiple of the identity.
    pub lhs: Option<F>,
    pub rhs: F,
}

impl<F: PartialEq> NewtonPower<F> {
    pub fn holds(&self) -> bool {
        self.lhs.as_ref() == Some(&self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HigherNewtonReport<F> {
    pub m: usize,
    pub powers: Vec<NewtonPower<F>>,
}

impl<F: PartialEq> HigherNewtonReport<F> {
    pub fn passed(&self) -> bool {
        self.powers.iter().all(NewtonPower::holds)
    }
}

/// Classical higher Newton identities at `μ = μ(λ)`, `ħ = 1`:
/// `Σ_k μ_k^s d_k` from the multiplicity formula against the same sum with
/// `μ_k = -(s_2(λ*+k) - s_2(λ*) - s_2((m)))/2` and
/// `d_k = dim V_{λ*+k} / dim V_{λ*}`.
pub fn higher_newton_classical<F: Field>(
    lambda: &PartitionVector,
    p: usize,
    m: usize,
    s_max: usize,
) -> Result<HigherNewtonReport<F>, OrbitError> {
    let one = F::one();
    let mu = rep_eigenvalues(lambda, p, EigenMode::Classical, &one)?;
    let spec = OrbitSpec::new(mu, one.clone(), one.clone());
    let mult = multiplicities(&spec, m, Mode::Classical)?;
    let roots = spec.roots(m, Mode::Classical);
    let star = lambda.star(p)?;
    let base = frobenius_dim::<F>(&star);
    let mut sym_m = vec![0i64; p];
    sym_m[0] = m as i64;
    let s2m = s2(&sym_m);
    let route_b: Vec<(F, F)> = roots
        .iter()
        .map(|(k, _)| {
            let shifted: Vec<i64> = star.iter().zip(k).map(|(a, b)| a + *b as i64).collect();
            let muk = F::from_int(-(s2(&shifted) - s2(&star) - s2m)).over(&F::from_int(2));
            (muk, frobenius_dim::<F>(&shifted).over(&base))
        })
        .collect();
    let powers = (1..=s_max)
        .map(|s| {
            let e = s as i64;
            let a = roots
                .iter()
                .zip(&mult)
                .fold(F::zero(), |acc, ((_, v), (_, d))| acc.plus(&v.pow(e).times(d)));
            let b = route_b
                .iter()
                .fold(F::zero(), |acc, (v, d)| acc.plus(&v.pow(e).times(d)));
            NewtonPower { s, lhs: Some(a), rhs: b }
        })
        .collect();
    Ok(HigherNewtonReport { m, powers })
}

/// `Tr L^s = Σ_j μ_j^s Π_{i≠j} (μ_j - μ_i - ħ)/(μ_j - μ_i)`.
pub fn classical_power_trace<F: Field>(mu: &[F], hbar: &F, s: usize) -> Result<F, OrbitError> {
    if let Some((i, j)) = first_repeat(mu) {
        return Err(OrbitError::NotOneGeneric { i, j });
    }
    Ok((0..mu.len()).fold(F::zero(), |acc, j| {
        let w = (0..mu.len()).filter(|&i| i != j).fold(F::one(), |w, i| {
            let d = mu[j].minus(&mu[i]);
            w.times(&d.minus(hbar)).over(&d)
        });
        acc.plus(&mu[j].pow(s as i64).times(&w))
    }))
}

/// Quantum higher Newton identities in the right module `V_(k)` of a rank-2
/// symmetry with generators `ħ π̄(l)`: the quantum trace over `V_(m)` of
/// `L_(m)^s` against `q^-p Σ_k μ_k(m)^s d_k(m)`.
pub fn higher_newton_quantum<F: Field>(
    h: &HeckeSymmetry<F>,
    k: usize,
    m: usize,
    s_max: usize,
    hbar: &F,
) -> Result<HigherNewtonReport<F>, OrbitError> {
    if h.p() != 2 {
        return Err(OrbitError::Rank {
            what: "the quantum higher Newton check",
            want: 2,
            got: h.p(),
        });
    }
    let q = h.q();
    let spec = OrbitSpec::new(identities::right_module_mu(k, hbar, q), hbar.clone(), q.clone());
    let mult = multiplicities(&spec, m, Mode::Quantum)?;
    let roots = spec.roots(m, Mode::Quantum);
    let rep = reps::scale_rep(&reps::sym_power_right_p2(h, k)?, hbar)?;
    let lm = casimir::l_m_matrix(h, &rep.relation_blocks(), m)?;
    let w = TraceWeights::calibrate(h, m)?;
    let norm = q.pow(-(h.p() as i64));
    let mut x = Mat::identity(lm.rows());
    let mut powers = Vec::new();
    for s in 1..=s_max {
        x = x.mul(&lm);
        let lhs = casimir::quantum_trace(&x, &w, rep.d)?.as_scalar();
        let e = s as i64;
        let sum = roots
            .iter()
            .zip(&mult)
            .fold(F::zero(), |acc, ((_, v), (_, d))| acc.plus(&v.pow(e).times(d)));
        powers.push(NewtonPower {
            s,
            lhs,
            rhs: norm.times(&sum),
        });
    }
    Ok(HigherNewtonReport { m, powers })
}

/// The distinct roots of `L̂_(k,m)` for a rank-2 symmetry whose
/// eigenspaces are nonzero, with the matrix itself.
pub fn casimir_spectrum<F: Field>(
    h: &HeckeSymmetry<F>,
    k: usize,
    m: usize,
) -> Result<(Mat<F>, Vec<F>), OrbitError> {
    if h.p() != 2 {
        return Err(OrbitError::Rank {
            what: "the split Casimir spectrum",
            want: 2,
            got: h.p(),
        });
    }
    let q = h.q();
    let l = casimir::split_casimir_matrix(h, k, m, &CasimirForm::Rea)?.op;
    let x = q.pow(-2 * k as i64 - 2);
    let all = identities::omega_roots(&F::one(), &x, &F::zero(), m, q);
    let roots = identities::dedup(&all)
        .into_iter()
        .filter(|r| l.sub_scalar(r).rank() < l.rows())
        .collect();
    Ok((l, roots))
}

/// A maximal chain `ν, f(ν), f²(ν), ..` with `f(ν) = q^-2 ν + q^-1 ħ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenString<F> {
    pub head: F,
    pub members: Vec<F>,
}

impl<F> EigenString<F> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StringDecomposition<F> {
    pub strings: Vec<EigenString<F>>,
    /// Coefficients of `Π (x - head)`, constant term first.
    pub min_poly: Vec<F>,
}

/// Split `μ` into maximal strings under `ν ↦ q^-2 ν + q^-1 ħ`. Strings are
/// listed in the order of their heads in the input.
pub fn string_decompose<F: Field>(spec: &OrbitSpec<F>) -> Result<StringDecomposition<F>, OrbitError> {
    spec.check_one_generic()?;
    let q = &spec.q;
    let qi = q.inverse().expect("q must be nonzero");
    let f = |v: &F| qi.pow(2).times(v).plus(&qi.times(&spec.hbar));
    let mu = &spec.mu;
    // The fixed point ħ/ζ would be its own successor.
    let next = |v: &F| {
        let w = f(v);
        (w != *v).then(|| mu.iter().position(|x| *x == w)).flatten()
    };
    let has_pred: Vec<bool> = (0..mu.len())
        .map(|j| (0..mu.len()).any(|i| next(&mu[i]) == Some(j)))
        .collect();
    let mut strings = Vec::new();
    for (i, head) in mu.iter().enumerate() {
        if has_pred[i] {
            continue;
        }
        let mut members = vec![head.clone()];
        let mut cur = i;
        while let Some(j) = next(&mu[cur]) {
            members.push(mu[j].clone());
            cur = j;
        }
        strings.push(EigenString {
            head: head.clone(),
            members,
        });
    }
    let mut min_poly = vec![F::one()];
    for s in &strings {
        let mut out = vec![F::zero(); min_poly.len() + 1];
        for (i, c) in min_poly.iter().enumerate() {
            out[i + 1].add_assign(c);
            out[i] = out[i].minus(&c.times(&s.head));
        }
        min_poly = out;
    }
    Ok(StringDecomposition { strings, min_poly })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casimir::q_dimension;
    use crate::scalars::{rat, sample_q, sample_rational, Rational};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q0() -> Rational {
        rat(3, 5)
    }

    fn sig(v: &[i64]) -> PartitionVector {
        PartitionVector::signature(v.to_vec()).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        let one = rat(1, 1);
        assert_eq!(
            rep_eigenvalues(&sig(&[1, 0]), 2, EigenMode::Classical, &one).unwrap(),
            vec![rat(0, 1), rat(2, 1)]
        );
        let q = q0();
        let zero = rep_eigenvalues(&sig(&[]), 4, EigenMode::MreaQ, &q).unwrap();
        for (i, v) in zero.iter().enumerate() {
            let i = i as i64;
            assert_eq!(*v, qint(i, &q) * Field::pow(&q, -i));
        }
        let l = sig(&[5, 2, 2]);
        let a = rep_eigenvalues(&l, 3, EigenMode::ReaQ, &q).unwrap();
        let b = rep_eigenvalues(&l, 3, EigenMode::MreaQ, &q).unwrap();
        let shift = zeta(&q).recip();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x + &shift, *y);
        }
        assert!(rep_eigenvalues(&PartitionVector::new(vec![0, 1]).unwrap(), 2, EigenMode::Classical, &one).is_err());
    }

    #[test]
    fn idempotents_of_a_diagonal() {
        let m = Mat::diag(&[rat(2, 1), rat(7, 1)]);
        let e = spectral_idempotents(&m, &[rat(2, 1), rat(7, 1)]).unwrap();
        assert_eq!(e[0], Mat::diag(&[rat(1, 1), rat(0, 1)]));
        assert_eq!(e[1], Mat::diag(&[rat(0, 1), rat(1, 1)]));
        assert!(matches!(
            spectral_idempotents(&m, &[rat(2, 1), rat(2, 1)]),
            Err(OrbitError::RepeatedRoot { i: 1, j: 2 })
        ));
        assert!(matches!(
            spectral_idempotents(&m, &[rat(2, 1), rat(3, 1)]),
            Err(OrbitError::ChFailure { .. })
        ));
    }

    #[test]
    fn casimir_idempotent_ranks() {
        let h = HeckeSymmetry::standard(2, q0()).unwrap();
        for k in 1..=3 {
            let (l, roots) = casimir_spectrum(&h, k, 1).unwrap();
            let e = spectral_idempotents(&l, &roots).unwrap();
            let rep = check_idempotents(&l, &roots, &e);
            assert!(rep.passed());
            // Roots come as (q^(-2k-2), 1).
            assert_eq!(rep.ranks, vec![k, k + 2]);
        }
    }

    #[test]
    fn multiplicity_examples() {
        let q = q0();
        let spec = OrbitSpec::new(vec![rat(2, 1), rat(-3, 4)], rat(5, 7), q.clone());
        let d = multiplicities(&spec, 3, Mode::Classical).unwrap();
        assert_eq!(d[0].0, vec![3, 0]);
        let (m1, m2, hb) = (&spec.mu[0], &spec.mu[1], &spec.hbar);
        assert_eq!(d[0].1, (m1 - m2 - rat(3, 1) * hb) / (m1 - m2));
        let dq = multiplicities(&spec, 3, Mode::Quantum).unwrap();
        for (k, v) in dq {
            let e = k[0] as i64 - k[1] as i64;
            let want = (Field::pow(&q, e) * m1 - Field::pow(&q, -e) * m2 - hb * qint(e, &q)) / (m1 - m2);
            assert_eq!(v, want);
        }
        let degenerate = OrbitSpec::new(vec![rat(1, 1), rat(1, 1)], rat(0, 1), q);
        assert!(matches!(
            multiplicities(&degenerate, 1, Mode::Quantum),
            Err(OrbitError::NotMGeneric { m: 1 })
        ));
    }

    #[test]
    fn classical_multiplicities_are_frobenius_ratios() {
        let mut count = 0;
        for n in 2..=4usize {
            for m in 1..=4usize {
                for top in 0..=(3 * m as i64 + 2) {
                    let lam: Vec<i64> = (0..n).map(|i| top * (n - 1 - i) as i64 / (n as i64 - 1) + (n - 1 - i) as i64 * m as i64).collect();
                    let l = sig(&lam);
                    if !is_admissible(&l, n, m) {
                        continue;
                    }
                    count += 1;
                    let one = rat(1, 1);
                    let mu = rep_eigenvalues(&l, n, EigenMode::Classical, &one).unwrap();
                    let spec = OrbitSpec::new(mu, one.clone(), one);
                    let star = l.star(n).unwrap();
                    let base: Rational = frobenius_dim(&star);
                    for (k, d) in multiplicities(&spec, m, Mode::Classical).unwrap() {
                        let sh: Vec<i64> = star.iter().zip(&k).map(|(a, b)| a + *b as i64).collect();
                        assert_eq!(d, frobenius_dim::<Rational>(&sh) / &base);
                    }
                }
            }
        }
        assert!(count >= 10);
    }

    #[test]
    fn quantum_multiplicities_are_qdim_ratios() {
        let q = q0();
        for p in 2..=4usize {
            for m in 1..=5usize {
                let lam: Vec<i64> = (0..p).map(|i| 7 * (p - 1 - i) as i64 + (i == 0) as i64 + (i == 1) as i64 * 3).collect();
                let l = sig(&lam);
                let mu = rep_eigenvalues(&l, p, EigenMode::ReaQ, &q).unwrap();
                let spec = OrbitSpec::new(mu, rat(0, 1), q.clone());
                let hat = l.star_hat(p).unwrap();
                let base = q_dimension(&hat, p, &q).unwrap();
                for (k, d) in multiplicities(&spec, m, Mode::Quantum).unwrap() {
                    let sh: Vec<i64> = hat.iter().zip(&k).map(|(a, b)| a + *b as i64).collect();
                    assert_eq!(d, q_dimension(&sh, p, &q).unwrap() / &base, "p={p} m={m} k={k:?}");
                }
            }
        }
    }

    #[test]
    fn classical_sum_is_dim_sym_power() {
        let l = sig(&[20, 9, 0]);
        let one = rat(1, 1);
        let mu = rep_eigenvalues(&l, 3, EigenMode::Classical, &one).unwrap();
        let spec = OrbitSpec::new(mu, one.clone(), one);
        for m in 1..=4usize {
            let total = multiplicities(&spec, m, Mode::Classical)
                .unwrap()
                .into_iter()
                .fold(rat(0, 1), |a, (_, d)| a + d);
            assert_eq!(total, frobenius_dim::<Rational>(&[m as i64, 0, 0]));
        }
    }

    #[test]
    fn equal_parts_have_unit_multiplicity() {
        let spec = OrbitSpec::new(vec![rat(2, 1), rat(5, 3), rat(-1, 1)], rat(0, 1), q0());
        let d = multiplicities(&spec, 3, Mode::Quantum).unwrap();
        let (_, v) = d.iter().find(|(k, _)| *k == vec![1, 1, 1]).unwrap();
        assert_eq!(*v, rat(1, 1));
    }

    #[test]
    fn classical_higher_newton_two_routes() {
        for lam in [[4, 0], [7, 3], [9, 2]] {
            for m in 1..=3 {
                let l = sig(&lam);
                if !is_admissible(&l, 2, m) {
                    continue;
                }
                let r = higher_newton_classical::<Rational>(&l, 2, m, 3).unwrap();
                assert!(r.passed(), "{lam:?} m={m}: {r:?}");
            }
        }
        let l = sig(&[8, 4, 0]);
        assert!(higher_newton_classical::<Rational>(&l, 3, 2, 3).unwrap().passed());
    }

    #[test]
    fn reduction_at_m_one() {
        let mu = vec![rat(3, 2), rat(-2, 1), rat(5, 1)];
        let hb = rat(2, 3);
        let spec = OrbitSpec::new(mu.clone(), hb.clone(), rat(1, 1));
        let d = multiplicities(&spec, 1, Mode::Classical).unwrap();
        for s in 1..=4 {
            let via_k = spec
                .roots(1, Mode::Classical)
                .iter()
                .zip(&d)
                .fold(rat(0, 1), |a, ((_, v), (_, w))| a + Field::pow(v, s as i64) * w);
            assert_eq!(classical_power_trace(&mu, &hb, s).unwrap(), via_k);
        }
    }

    #[test]
    fn quantum_higher_newton_p2() {
        let h = HeckeSymmetry::standard(2, q0()).unwrap();
        for (k, m) in [(1, 1), (2, 2), (1, 2)] {
            let r = higher_newton_quantum(&h, k, m, 3, &rat(2, 3)).unwrap();
            assert!(r.passed(), "k={k} m={m}: {r:?}");
        }
    }

    #[test]
    fn string_examples() {
        let q = q0();
        let hb = rat(1, 2);
        let a = rat(3, 1);
        let fa = &a / Field::pow(&q, 2) + &hb / &q;
        let two = OrbitSpec::new(vec![fa.clone(), a.clone()], hb.clone(), q.clone());
        let d = string_decompose(&two).unwrap();
        assert_eq!(d.strings.len(), 1);
        assert_eq!((d.strings[0].head.clone(), d.strings[0].len()), (a.clone(), 2));

        let b = rat(-7, 2);
        let three = OrbitSpec::new(vec![a.clone(), fa, b.clone()], hb, q);
        let d = string_decompose(&three).unwrap();
        let summary: Vec<(Rational, usize)> = d.strings.iter().map(|s| (s.head.clone(), s.len())).collect();
        assert_eq!(summary, vec![(a.clone(), 2), (b.clone(), 1)]);
        assert_eq!(d.min_poly, vec![&a * &b, -(&a + &b), rat(1, 1)]);
    }

    proptest! {
        #[test]
        fn random_mu_gives_singletons(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = sample_q(&mut rng, 64);
            let mu: Vec<Rational> = (0..3).map(|_| sample_rational(&mut rng, 1000)).collect();
            let spec = OrbitSpec::new(mu, sample_rational(&mut rng, 1000), q);
            prop_assume!(spec.check_one_generic().is_ok());
            let d = string_decompose(&spec).unwrap();
            prop_assert!(d.strings.iter().all(|s| s.len() == 1) || d.strings.len() < 3);
        }

        #[test]
        fn strings_ignore_input_order(seed in 0u64..500, len in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = sample_q(&mut rng, 16);
            let hb = sample_rational(&mut rng, 16);
            let qi = q.recip();
            let mut mu = vec![sample_rational(&mut rng, 16)];
            for _ in 1..len {
                let last = mu.last().unwrap().clone();
                mu.push(&qi * &qi * last + &qi * &hb);
            }
            mu.push(sample_rational(&mut rng, 1 << 20));
            let spec = OrbitSpec::new(mu.clone(), hb.clone(), q.clone());
            prop_assume!(spec.check_one_generic().is_ok());
            let mut rev = mu.clone();
            rev.reverse();
            let key = |s: &OrbitSpec<Rational>| {
                let mut v: Vec<(String, usize)> = string_decompose(s).unwrap().strings.iter().map(|x| (x.head.to_string(), x.len())).collect();
                v.sort();
                v
            };
            prop_assert_eq!(key(&spec), key(&OrbitSpec::new(rev, hb, q)));
        }

        #[test]
        fn s2_formula_matches_mu_lambda(a in 0i64..6, b in 0i64..6, m in 1usize..4) {
            let lam = vec![a + b + 2 * m as i64, b + m as i64, 0];
            let l = sig(&lam);
            prop_assume!(is_admissible(&l, 3, m));
            let one = rat(1, 1);
            let mu = rep_eigenvalues(&l, 3, EigenMode::Classical, &one).unwrap();
            let spec = OrbitSpec::new(mu, one.clone(), one);
            let star = l.star(3).unwrap();
            for (k, v) in spec.roots(m, Mode::Classical) {
                let sh: Vec<i64> = star.iter().zip(&k).map(|(x, y)| x + *y as i64).collect();
                let want = rat(-(s2(&sh) - s2(&star) - s2(&[m as i64, 0, 0])), 2);
                prop_assert_eq!(v, want);
            }
        }
    }
}
