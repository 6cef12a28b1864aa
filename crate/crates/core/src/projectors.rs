//! q-symmetrizers `S^(m)` and q-antisymmetrizers `A^(m)`.
//!
//! Both come from one recursion on `m` legs,
//!
//! ```text
//! S^(m) = (1/m_q) S^(m-1)_{2..m} (q^(1-m) I + (m-1)_q R_12) S^(m-1)_{2..m}
//! A^(m) = (1/m_q) A^(m-1)_{2..m} (q^(m-1) I - (m-1)_q R_12) A^(m-1)_{2..m}
//! ```
//!
//! the second being the `q ↔ -q^-1` mirror of the first.

use crate::hecke::HeckeSymmetry;
use crate::scalars::{qint, Field};
use crate::tensor::{LegOperator, Mat, TensorError};

/// One recursion step from the `(m-1)`-leg projector `prev`.
pub fn symmetrizer_step<F: Field>(
    r: &Mat<F>,
    n: usize,
    q: &F,
    m: usize,
    prev: &Mat<F>,
    anti: bool,
) -> Mat<F> {
    assert!(m >= 2);
    let mi = m as i64;
    let e = Mat::identity(n).kron(prev);
    let r12 = r.kron(&Mat::identity(n.pow(m as u32 - 2)));
    let (c0, c1) = if anti {
        (q.pow(mi - 1), qint(mi - 1, q).negated())
    } else {
        (q.pow(1 - mi), qint(mi - 1, q))
    };
    // E (c0 I + c1 R12) E = c0 E + c1 E R12 E, E being idempotent.
    let inner = e.mul(&r12).mul(&e).scale(&c1).add(&e.scale(&c0));
    inner.scale(&qint(mi, q).inverse().expect("q-integers are nonzero"))
}

/// `A^(1), ..., A^(m_max)` from a raw two-leg matrix. With `stop_at_zero`
/// the tower ends at the first vanishing member.
pub fn antisymmetrizer_tower<F: Field>(
    r: &Mat<F>,
    n: usize,
    q: &F,
    m_max: usize,
    stop_at_zero: bool,
) -> Vec<Mat<F>> {
    let mut out = vec![Mat::identity(n)];
    for m in 2..=m_max {
        let next = symmetrizer_step(r, n, q, m, out.last().unwrap(), true);
        let zero = next.is_zero();
        out.push(next);
        if zero && stop_at_zero {
            break;
        }
    }
    out
}

/// `S^(m)` embedded on legs `start..start+m-1` of `total`.
pub fn q_symmetrizer<F: Field>(
    h: &HeckeSymmetry<F>,
    m: usize,
    total: usize,
    start: usize,
) -> Result<LegOperator<F>, TensorError> {
    let s = h.symmetrizer(m);
    LegOperator::new(h.n(), m, (*s).clone()).embed_on_legs(start, total)
}

/// `A^(m)` embedded on legs `start..start+m-1` of `total`.
pub fn q_antisymmetrizer<F: Field>(
    h: &HeckeSymmetry<F>,
    m: usize,
    total: usize,
    start: usize,
) -> Result<LegOperator<F>, TensorError> {
    let a = h.antisymmetrizer(m);
    LegOperator::new(h.n(), m, (*a).clone()).embed_on_legs(start, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Rational};

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn h(n: usize) -> HeckeSymmetry<Rational> {
        HeckeSymmetry::standard(n, rat(3, 5)).unwrap()
    }

    #[test]
    fn low_degree_closed_forms() {
        let h = h(2);
        let q = h.q().clone();
        assert_eq!(*h.symmetrizer(1), Mat::identity(2));
        let r = &h.r().mat;
        let s2 = r.add(&Mat::scalar(4, &q.inverse().unwrap())).scale(&h.qint(2).inverse().unwrap());
        assert_eq!(*h.symmetrizer(2), s2);
        let a2 = Mat::scalar(4, &q).sub(r).scale(&h.qint(2).inverse().unwrap());
        assert_eq!(*h.antisymmetrizer(2), a2);
        assert_eq!(h.symmetrizer(2).add(&h.antisymmetrizer(2)), Mat::identity(4));
        assert!(h.antisymmetrizer(3).is_zero());
        assert_eq!(h.symmetrizer(3).rank(), 4);
    }

    #[test]
    fn idempotent_and_absorbing() {
        for n in 2..=3 {
            let h = h(n);
            let q = h.q().clone();
            let qi = q.inverse().unwrap();
            for m in 1..=3 {
                let s = h.symmetrizer(m);
                let a = h.antisymmetrizer(m);
                assert_eq!(s.mul(&s), *s);
                assert_eq!(a.mul(&a), *a);
                for i in 1..m {
                    let ri = h.r().embed_on_legs(i, m).unwrap().mat;
                    assert_eq!(ri.mul(&s), s.scale(&q));
                    assert_eq!(ri.mul(&a), a.scale(&qi.negated()));
                }
            }
        }
    }

    #[test]
    fn rank_sequences() {
        for n in 2..=3 {
            let h = h(n);
            for m in 1..=4 {
                if n == 3 && m == 4 {
                    continue;
                }
                assert_eq!(h.symmetrizer(m).rank(), binom(n + m - 1, m), "S n={n} m={m}");
                assert_eq!(h.antisymmetrizer(m).rank(), binom(n, m), "A n={n} m={m}");
            }
        }
    }

    #[test]
    fn nested_absorption() {
        let h = h(2);
        let s4 = q_symmetrizer(&h, 4, 4, 1).unwrap();
        for k in 1..=4 {
            for start in 1..=(4 - k + 1) {
                let sk = q_symmetrizer(&h, k, 4, start).unwrap();
                assert_eq!(s4.compose(&sk), s4);
            }
        }
        assert!(q_symmetrizer(&h, 3, 2, 1).is_err());
    }
}
