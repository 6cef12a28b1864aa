//! q-index pairing, q-Euler characteristic and module classes.

use std::fmt;

use thiserror::Error;

use crate::casimir::q_dimension;
use crate::identities::compositions;
use crate::scalars::{qbinomial, qint, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error("expected {p} entries, got {got}")]
    Length { p: usize, got: usize },
    #[error("rank must be at least 2, got {0}")]
    Rank(usize),
}

/// `Π_{i<j} (λ_i - λ_j + k_i - k_j + i - j)_q / (i - j)_q`; with `λ`
/// omitted this is `χ_q(M_k)`.
pub fn q_index_and_euler<F: Field>(k: &[i64], p: usize, q: &F, lambda: Option<&[i64]>) -> Result<F, EulerError> {
    if k.len() != p {
        return Err(EulerError::Length { p, got: k.len() });
    }
    let zeros = vec![0; p];
    let lambda = lambda.unwrap_or(&zeros);
    if lambda.len() != p {
        return Err(EulerError::Length { p, got: lambda.len() });
    }
    let mut out = F::one();
    for i in 0..p {
        for j in i + 1..p {
            let d = i as i64 - j as i64;
            let num = qint(lambda[i] - lambda[j] + k[i] - k[j] + d, q);
            out = out.times(&num).over(&qint(d, q));
        }
    }
    Ok(out)
}

/// `χ_q(M_k)`.
pub fn euler_characteristic<F: Field>(k: &[i64], q: &F) -> F {
    q_index_and_euler(k, k.len(), q, None).expect("lengths agree")
}

/// The class `[M_k]`, up to `k ~ k + a·(1,..,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleClass {
    canonical: Vec<i64>,
}

impl ModuleClass {
    pub fn new(k: &[i64]) -> Self {
        let min = k.iter().copied().min().unwrap_or(0);
        ModuleClass {
            canonical: k.iter().map(|x| x - min).collect(),
        }
    }

    /// `k` minus its minimum entry.
    pub fn canonical(&self) -> &[i64] {
        &self.canonical
    }

    /// `[M_k] · [M_k'] = [M_{k+k'}]`.
    pub fn product(&self, other: &Self) -> Result<Self, EulerError> {
        if self.canonical.len() != other.canonical.len() {
            return Err(EulerError::Length {
                p: self.canonical.len(),
                got: other.canonical.len(),
            });
        }
        let sum: Vec<i64> = self.canonical.iter().zip(&other.canonical).map(|(a, b)| a + b).collect();
        Ok(ModuleClass::new(&sum))
    }

    pub fn euler<F: Field>(&self, q: &F) -> F {
        euler_characteristic(&self.canonical, q)
    }
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.canonical.iter().map(i64::to_string).collect();
        write!(f, "[M({})]", parts.join(","))
    }
}

/// Numerical consistency of the q-algebra relations.
#[derive(Clone, Debug, PartialEq)]
pub struct QAlgebraReport<F> {
    pub p: usize,
    /// `dim_q V_(1^k)` against the q-binomial, `k = 0..=p`.
    pub exterior_dims: Vec<(usize, bool)>,
    /// `Σ_{|k|=m} χ_q(M_k)` against `dim_q V_(m)`, `m = 1..=5`.
    pub sums: Vec<(usize, F, F)>,
    /// `Σ_{|S|=k} χ_q(M_{1_S})` against `dim_q V_(1^k)`.
    pub relations: Vec<(usize, F, F)>,
}

impl<F: Field> QAlgebraReport<F> {
    pub fn passed(&self) -> bool {
        self.exterior_dims.iter().all(|(_, ok)| *ok)
            && self.sums.iter().all(|(_, a, b)| a == b)
            && self.relations.iter().all(|(_, a, b)| a == b)
    }
}

pub fn q_algebra_check<F: Field>(p: usize, q: &F) -> Result<QAlgebraReport<F>, EulerError> {
    if p < 2 {
        return Err(EulerError::Rank(p));
    }
    let ext = |k: usize| q_dimension(&vec![1; k], p, q).expect("k <= p");
    let exterior_dims = (0..=p)
        .map(|k| (k, ext(k) == qbinomial(p as u32, k as i64, q)))
        .collect();
    let sums = (1..=5usize)
        .map(|m| {
            let total = compositions(m, p).iter().fold(F::zero(), |acc, k| {
                let k: Vec<i64> = k.iter().map(|&x| x as i64).collect();
                acc.plus(&euler_characteristic(&k, q))
            });
            (m, total, q_dimension(&[m as i64], p, q).expect("one part"))
        })
        .collect();
    // χ_q is linear, so the relation e_k([M_{e_1}], .., [M_{e_p}]) = dim_q V_(1^k)
    // maps to a sum over the k-subsets.
    let relations = (1..=p)
        .map(|k| {
            let total = subsets(p, k).iter().fold(F::zero(), |acc, s| {
                let v: Vec<i64> = (0..p).map(|i| s.contains(&i) as i64).collect();
                acc.plus(&euler_characteristic(&v, q))
            });
            (k, total, ext(k))
        })
        .collect();
    Ok(QAlgebraReport {
        p,
        exterior_dims,
        sums,
        relations,
    })
}

fn subsets(p: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..p)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}
