//! Verification suites. Each suite records one check per parameter point.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qrea::casimir::{self, CasimirForm, TraceWeights};
use qrea::euler::{self, q_index_and_euler};
use qrea::hecke::{self, HeckeSymmetry, RankOutcome};
use qrea::identities::{self, RootData};
use qrea::orbits::{self, EigenMode, Mode, OrbitSpec, PartitionVector};
use qrea::reps::{self, ShiftMode};
use qrea::scalars::{qint, sample_q, sample_rational, Field, QScalar, Rational};
use qrea::tensor::LegOperator;

use crate::anchors;
use crate::report::{Outcome, Recorder};

/// Numeric range for sampled rationals.
pub const SAMPLE_BOUND: i64 = 16;

/// A field the suites can run in: rationals at a sampled `q`, or the
/// rational functions in a symbolic `q`.
pub trait SuiteField: Field {
    /// A fresh deformation parameter, or the symbolic one.
    fn fresh_q(rng: &mut ChaCha8Rng) -> Self;
}

impl SuiteField for Rational {
    fn fresh_q(rng: &mut ChaCha8Rng) -> Self {
        sample_q(rng, SAMPLE_BOUND)
    }
}

impl SuiteField for QScalar {
    fn fresh_q(_: &mut ChaCha8Rng) -> Self {
        QScalar::q()
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub mu: Option<Vec<Rational>>,
    pub hbar: Option<Rational>,
    pub max_size: Option<usize>,
}

/// Where the Hecke symmetry comes from.
#[derive(Clone, Debug)]
pub enum Source {
    Standard,
    File(LegOperator<QScalar>),
}

/// Everything a suite needs.
pub struct Setup<F: SuiteField> {
    pub q: F,
    pub source: Source,
    pub params: SuiteParams,
    pub rng: ChaCha8Rng,
    /// Additional deformation parameters sampled along the way.
    pub extra_q: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteError {
    Usage(String),
}

impl std::fmt::Display for SuiteError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SuiteError::Usage(s) => write!(f, "{s}"),
        }
    }
}

pub const SUITES: &[&str] = &[
    "validate",
    "projectors",
    "reps",
    "ch",
    "newton",
    "conjecture",
    "orbit",
    "euler",
    "calibrate-trace",
    "all",
];

const DEFAULT_MAX_SIZE: usize = 1 << 16;

impl<F: SuiteField> Setup<F> {
    fn n(&self) -> usize {
        match &self.source {
            Source::File(r) => r.n,
            Source::Standard => self.params.n.unwrap_or(2),
        }
    }

    fn r(&self, n: usize) -> Result<LegOperator<F>, String> {
        match &self.source {
            Source::File(r) => hecke::specialize(r, &self.q).map_err(|e| e.to_string()),
            Source::Standard => Ok(hecke::standard_r(n, &self.q)),
        }
    }

    fn symmetry(&self, n: usize) -> Result<HeckeSymmetry<F>, String> {
        HeckeSymmetry::new(self.r(n)?, self.q.clone()).map_err(|e| e.to_string())
    }

    fn guard(&self, n: usize, legs: usize) -> Result<(), SuiteError> {
        let limit = self.params.max_size.unwrap_or(DEFAULT_MAX_SIZE);
        let size = n.checked_pow(legs as u32).unwrap_or(usize::MAX);
        if size > limit {
            return Err(SuiteError::Usage(format!(
                "n^{legs} = {size} exceeds --max-size {limit}"
            )));
        }
        Ok(())
    }

    fn hbar(&self) -> F {
        F::from_rational(self.params.hbar.as_ref().unwrap_or(&Rational::from_integer(1.into())))
    }
}

fn symmetry_or_fail<F: SuiteField>(
    setup: &Setup<F>,
    rec: &mut Recorder,
    id: &str,
    n: usize,
) -> Option<HeckeSymmetry<F>> {
    match setup.symmetry(n) {
        Ok(h) => Some(h),
        Err(e) => {
            rec.run::<String>(id, anchors::SYMMETRY, json!({"n": n}), || Ok(Outcome::Fail(e)));
            None
        }
    }
}

pub fn run_suite<F: SuiteField>(name: &str, setup: &mut Setup<F>) -> Result<Recorder, SuiteError> {
    let mut rec = Recorder::default();
    match name {
        "validate" => validate(setup, &mut rec)?,
        "projectors" => projectors(setup, &mut rec)?,
        "reps" => representations(setup, &mut rec)?,
        "ch" => cayley_hamilton(setup, &mut rec)?,
        "newton" => newton(setup, &mut rec)?,
        "conjecture" => conjecture(setup, &mut rec)?,
        "orbit" => orbit(setup, &mut rec)?,
        "euler" => euler_suite(setup, &mut rec)?,
        "calibrate-trace" => calibrate_trace(setup, &mut rec)?,
        "all" => {
            for s in SUITES.iter().filter(|s| !matches!(**s, "all" | "conjecture")) {
                rec.extend(run_suite(s, setup)?);
            }
            // The conjecture scan needs rank 3 and runs on the standard
            // symmetry whatever the source.
            let saved = std::mem::replace(&mut setup.source, Source::Standard);
            let saved_n = setup.params.n.replace(3);
            let out = run_suite("conjecture", setup);
            setup.source = saved;
            setup.params.n = saved_n;
            rec.extend(out?);
        }
        other => return Err(SuiteError::Usage(format!("unknown suite {other:?}"))),
    }
    Ok(rec)
}

fn bool_check(ok: bool, witness: impl FnOnce() -> String) -> Result<Outcome, String> {
    Ok(Outcome::from_bool(ok, witness))
}

// ---------------------------------------------------------------------------

fn validate<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) -> Result<(), SuiteError> {
    let n = s.n();
    s.guard(n, n + 1)?;
    let q = s.q.clone();
    let r = match s.r(n) {
        Ok(r) => r,
        Err(e) => {
            rec.run::<String>("validate.symmetry", anchors::SYMMETRY, json!({"n": n}), || {
                Ok(Outcome::Fail(e))
            });
            return Ok(());
        }
    };
    let params = json!({"n": n});
    rec.run("validate.braid", anchors::BRAID, params.clone(), || {
        bool_check(hecke::braid_relation_holds(&r), || "R12 R23 R12 - R23 R12 R23 != 0".into())
    });
    rec.run("validate.hecke", anchors::HECKE, params.clone(), || {
        bool_check(hecke::hecke_condition_holds(&r, &q), || "(R - q)(R + q^-1) != 0".into())
    });
    let skew = hecke::skew_inverse_bc(&r);
    rec.run("validate.skew", anchors::SKEW, params.clone(), || {
        let sk = skew.as_ref().map_err(|e| e.to_string())?;
        let (a, b) = hecke::skew_identities(&r, &sk.psi);
        bool_check(a && b, || format!("first identity {a}, second identity {b}"))
    });
    let standard = matches!(s.source, Source::Standard);
    let mut rank = None;
    rec.run("validate.rank", anchors::RANK, params.clone(), || {
        match hecke::symmetry_rank(&r, &q, n + 1) {
            RankOutcome::Even(p) => {
                rank = Some(p);
                bool_check(!standard || p == n, || format!("rank {p}, expected {n}"))
            }
            RankOutcome::NotEvenUpTo(m) => Ok(Outcome::Fail(format!("not even up to {m}"))),
        }
    });
    let Some(p) = rank else { return Ok(()) };
    let pi = p as i64;
    let params = json!({"n": n, "p": p});
    rec.run("validate.bc_normalization", anchors::BC_NORM, params.clone(), || {
        let sk = skew.as_ref().map_err(|e| e.to_string())?;
        let prod = sk.b.mul(&sk.c);
        bool_check(prod.is_scalar(&q.pow(-2 * pi)), || format!("B C = {:?}", prod.as_scalar()))
    });
    rec.run("validate.trace_normalization", anchors::TRACE_NORM, params, || {
        let sk = skew.as_ref().map_err(|e| e.to_string())?;
        let want = qint(pi, &q).times(&q.pow(-pi));
        let (tb, tc) = (sk.b.trace(), sk.c.trace());
        bool_check(tb == want && tc == want, || format!("Tr B = {tb}, Tr C = {tc}, want {want}"))
    });
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn projectors<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) -> Result<(), SuiteError> {
    let n = s.n();
    let Some(h) = symmetry_or_fail(s, rec, "projectors.symmetry", n) else {
        return Ok(());
    };
    let m_max = s.params.m.unwrap_or(h.p() + 1);
    s.guard(n, m_max)?;
    let standard = matches!(s.source, Source::Standard);
    for m in 1..=m_max {
        let params = json!({"n": n, "m": m});
        let (sym, anti) = (h.symmetrizer(m), h.antisymmetrizer(m));
        rec.run(format!("projectors.idempotent[m={m}]"), anchors::IDEMPOTENT, params.clone(), || {
            bool_check(sym.mul(&sym) == *sym && anti.mul(&anti) == *anti, || {
                "S^2 != S or A^2 != A".into()
            })
        });
        if m >= 2 {
            rec.run(format!("projectors.orthogonal[m={m}]"), anchors::ORTHOGONAL, params.clone(), || {
                bool_check(sym.mul(&anti).is_zero(), || "S A != 0".into())
            });
        }
        if standard {
            rec.run(format!("projectors.ranks[m={m}]"), anchors::PROJECTOR_RANKS, params, || {
                let (rs, ra) = (sym.rank(), anti.rank());
                let (ws, wa) = (binomial(n + m - 1, m), binomial(n, m));
                bool_check(rs == ws && ra == wa, || {
                    format!("ranks ({rs}, {ra}), expected ({ws}, {wa})")
                })
            });
        }
    }
    Ok(())
}

fn representations<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) -> Result<(), SuiteError> {
    let n = s.n();
    let Some(h) = symmetry_or_fail(s, rec, "reps.symmetry", n) else {
        return Ok(());
    };
    let m_max = s.params.m.unwrap_or(if n == 2 { 4 } else { 3 });
    s.guard(n, m_max)?;
    let ok = |r: Result<reps::Representation<F>, reps::RepError>| r.map(|_| Outcome::Pass);
    rec.run("reps.fundamental", anchors::RE_FUNDAMENTAL, json!({"n": n}), || {
        ok(reps::fundamental_left(&h))
    });
    for m in 1..=m_max {
        let params = json!({"n": n, "m": m});
        let tensor = (m <= 3).then(|| reps::tensor_power_left(&h, m));
        if let Some(t) = &tensor {
            rec.run(format!("reps.tensor_power[m={m}]"), anchors::RE_TENSOR, params.clone(), || {
                ok(t.clone())
            });
        }
        let sym = reps::sym_power_left(&h, m);
        rec.run(format!("reps.sym_power[m={m}]"), anchors::RE_SYM, params.clone(), || {
            ok(sym.clone())
        });
        if let (Some(Ok(t)), Ok(sp)) = (&tensor, &sym) {
            rec.run(format!("reps.sym_equals_compressed[m={m}]"), anchors::SYM_COMPRESSED, params.clone(), || {
                bool_check(reps::compress_tensor_power(t, &h, m) == sp.rho, || {
                    "compressed tensor power differs".into()
                })
            });
        }
        if h.p() == 2 {
            rec.run(format!("reps.right_sym_power[m={m}]"), anchors::RE_RIGHT, params, || {
                ok(reps::sym_power_right_p2(&h, m))
            });
        }
    }
    Ok(())
}

/// `x = q^(-2k-2)`.
fn x_of<F: Field>(q: &F, k: usize) -> F {
    q.pow(-2 * k as i64 - 2)
}

fn ch_witness(r: &identities::ChReport) -> String {
    format!("residual has {} nonzero entries", r.support)
}

fn cayley_hamilton<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) -> Result<(), SuiteError> {
    let n = s.n();
    let Some(h) = symmetry_or_fail(s, rec, "ch.symmetry", n) else {
        return Ok(());
    };
    let q = s.q.clone();
    if h.p() != 2 {
        let k_max = s.params.k.unwrap_or(2);
        s.guard(n, k_max + 1)?;
        for k in 1..=k_max {
            let params = json!({"n": n, "k": k});
            rec.run(format!("ch.basic_left[k={k}]"), anchors::CH_BASIC_LEFT, params, || {
                let lam = PartitionVector::new(vec![k as i64]).map_err(|e| e.to_string())?;
                let mu = orbits::rep_eigenvalues(&lam, h.p(), EigenMode::MreaQ, &q).map_err(|e| e.to_string())?;
                let f = identities::conjecture_scan(&h, k, 1, &mu).map_err(|e| e.to_string())?;
                bool_check(f.product_zero, || format!("covered {} of {}", f.covered, f.dim))
            });
        }
        return Ok(());
    }
    let k_basic = s.params.k.unwrap_or(5);
    let k_high = s.params.k.unwrap_or(4);
    s.guard(n, k_basic.max(k_high) + s.params.m.unwrap_or(k_high))?;
    for k in 1..=k_basic {
        let params = json!({"n": n, "k": k});
        let x = x_of(&q, k);
        rec.run(format!("ch.basic[k={k}]"), anchors::CH_BASIC, params.clone(), || {
            let l = casimir::split_casimir_matrix(&h, k, 1, &CasimirForm::Rea).map_err(|e| e.to_string())?;
            let r = identities::ch_verify(&l.op, &[F::one(), x.clone()]);
            bool_check(r.pass, || ch_witness(&r))
        });
        rec.run(format!("ch.basic_coefficients[k={k}]"), anchors::CH_COEFFS, params, || {
            let rep = reps::rea_normalized_right(&h, k).map_err(|e| e.to_string())?;
            let cv = identities::central_elements_in_rep(&h, &rep, 2, 0).map_err(|e| e.to_string())?;
            let want = [F::one(), F::one().plus(&x), x.clone()];
            bool_check(cv.sigma == want, || {
                format!("sigma_1 = {}, sigma_2 = {}", cv.sigma[1], cv.sigma[2])
            })
        });
    }
    let hbar = s.hbar();
    for k in 1..=k_high {
        for m in 1..=s.params.m.unwrap_or(k).min(k) {
            let params = json!({"n": n, "k": k, "m": m});
            rec.run(format!("ch.higher_rea[k={k},m={m}]"), anchors::CH_HIGHER_REA, params.clone(), || {
                let l = casimir::split_casimir_matrix(&h, k, m, &CasimirForm::Rea).map_err(|e| e.to_string())?;
                let roots = identities::omega_roots(&F::one(), &x_of(&q, k), &F::zero(), m, &q);
                let r = identities::ch_verify(&l.op, &roots);
                bool_check(r.pass, || ch_witness(&r))
            });
            rec.run(format!("ch.higher_mrea[k={k},m={m}]"), anchors::CH_HIGHER_MREA, params.clone(), || {
                let form = CasimirForm::Mrea { hbar: hbar.clone() };
                let l = casimir::split_casimir_matrix(&h, k, m, &form).map_err(|e| e.to_string())?;
                let mu = identities::right_module_mu(k, &hbar, &q);
                let roots = identities::omega_roots(&mu[0], &mu[1], &hbar, m, &q);
                let r = identities::ch_verify(&l.op, &roots);
                bool_check(r.pass, || ch_witness(&r))
            });
            rec.run(format!("ch.closed_form[k={k},m={m}]"), anchors::CLOSED_FORM, params, || {
                let l = casimir::split_casimir_matrix(&h, k, m, &CasimirForm::Rea).map_err(|e| e.to_string())?;
                let c = casimir::closed_form_p2(&h, k, m).map_err(|e| e.to_string())?;
                let diff = l.op.sub(&c.op);
                bool_check(diff.is_zero(), || format!("{} entries differ", diff.nnz()))
            });
        }
    }
    Ok(())
}

fn newton<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) -> Result<(), SuiteError> {
    let n = s.n();
    if let Some(h) = symmetry_or_fail(s, rec, "newton.symmetry", n) {
        let p = h.p();
        let k_max = s.params.k.unwrap_or(if p == 2 { 5 } else { 2 });
        s.guard(n, k_max + p)?;
        for k in 1..=k_max {
            let params = json!({"n": n, "k": k, "rows": p + 3});
            rec.run(format!("newton.central[k={k}]"), anchors::NEWTON_CENTRAL, params, || {
                let rep = if p == 2 {
                    reps::rea_normalized_right(&h, k)
                } else {
                    reps::sym_power_left(&h, k).and_then(|r| reps::shift_rep(&r, &h, &ShiftMode::MreaToRea))
                }
                .map_err(|e| e.to_string())?;
                let cv = identities::central_elements_in_rep(&h, &rep, p, p + 3).map_err(|e| e.to_string())?;
                let bad: Vec<usize> = identities::newton_check(&cv, &s.q)
                    .into_iter()
                    .filter(|(_, ok)| !ok)
                    .map(|(r, _)| r)
                    .collect();
                bool_check(bad.is_empty(), || format!("rows {bad:?} fail"))
            });
        }
    }
    let p_max = s.params.p.unwrap_or(4);
    for p in 1..=p_max {
        for sample in 0..3 {
            let q = F::fresh_q(&mut s.rng);
            let mu = distinct_sample(&mut s.rng, p);
            let params = json!({"p": p, "sample": sample, "q": q.to_string(), "mu": strings(&mu)});
            s.extra_q.push(q.to_string());
            let rd = RootData {
                mu: mu.iter().map(F::from_rational).collect(),
                hbar: F::zero(),
            };
            rec.run(format!("newton.parametric[p={p},sample={sample}]"), anchors::NEWTON_PARAMETRIC, params, || {
                let res = identities::parametric_newton_residuals(&rd, p + 2, &q).map_err(|e| e.to_string())?;
                let bad: Vec<String> = res
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| format!("row {}: {v}", i + 1))
                    .collect();
                bool_check(bad.is_empty(), || bad.join("; "))
            });
        }
    }
    Ok(())
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn distinct_sample(rng: &mut ChaCha8Rng, p: usize) -> Vec<Rational> {
    loop {
        let mu: Vec<Rational> = (0..p).map(|_| sample_rational(rng, SAMPLE_BOUND)).collect();
        if identities::dedup(&mu).len() == p {
            return mu;
        }
    }
}

fn conjecture<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) -> Result<(), SuiteError> {
    let n = s.params.n.unwrap_or(3);
    let n = if let Source::File(r) = &s.source { r.n } else { n };
    let Some(h) = symmetry_or_fail(s, rec, "conjecture.symmetry", n) else {
        return Ok(());
    };
    if h.p() < 3 {
        return Err(SuiteError::Usage(format!(
            "the conjecture scan needs symmetry rank at least 3, got {}",
            h.p()
        )));
    }
    let k_max = s.params.k.unwrap_or(2);
    let m_max = s.params.m.unwrap_or(3);
    s.guard(n, k_max + m_max)?;
    for k in 1..=k_max {
        let lam = PartitionVector::new(vec![k as i64]).expect("nonnegative");
        let mu = orbits::rep_eigenvalues(&lam, h.p(), EigenMode::MreaQ, &s.q).expect("signature");
        for m in 2..=m_max {
            let params = json!({"n": n, "k": k, "m": m, "lambda": lam.to_string()});
            rec.run(format!("conjecture.scan[k={k},m={m}]"), anchors::CONJECTURE, params, || {
                let f = identities::conjecture_scan(&h, k, m, &mu).map_err(|e| e.to_string())?;
                let verdict = if f.consistent() { "consistent" } else { "inconsistent" };
                Ok::<_, String>(Outcome::Finding(format!(
                    "{verdict}: {} conjectured roots ({} distinct), {} occur as eigenvalues, \
                     generalized eigenspaces cover {} of {} dimensions",
                    f.conjectured,
                    f.distinct,
                    f.present.len(),
                    f.covered,
                    f.dim
                )))
            });
        }
    }
    Ok(())
}

/// Admissible signatures with `n` parts and last part zero, gaps from `m` up.
pub fn admissible_signatures(n: usize, m: usize, count: usize) -> Vec<PartitionVector> {
    let mut out = Vec::new();
    let extra = 3 * m + 4;
    let mut gaps = vec![0usize; n - 1];
    loop {
        let mut lam = vec![0i64; n];
        for i in (0..n - 1).rev() {
            lam[i] = lam[i + 1] + (m + gaps[i]) as i64;
        }
        let l = PartitionVector::signature(lam).expect("decreasing");
        if orbits::is_admissible(&l, n, m) {
            out.push(l);
            if out.len() == count {
                return out;
            }
        }
        // Next gap vector in lexicographic order.
        let mut i = 0;
        while i < gaps.len() && gaps[i] == extra {
            gaps[i] = 0;
            i += 1;
        }
        if i == gaps.len() {
            return out;
        }
        gaps[i] += 1;
    }
}

fn shifted(base: &[i64], k: &[usize]) -> Vec<i64> {
    base.iter().zip(k).map(|(a, b)| a + *b as i64).collect()
}

fn orbit<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) -> Result<(), SuiteError> {
    let q = s.q.clone();
    let m_cls = s.params.m.unwrap_or(4);
    let p_max = s.params.p.unwrap_or(4);
    for n in 2..=p_max {
        for m in 1..=m_cls {
            let sigs = admissible_signatures(n, m, 3);
            let params = json!({"n": n, "m": m, "lambdas": strings(&sigs)});
            rec.run(format!("orbit.classical_multiplicities[n={n},m={m}]"), anchors::MULT_CLASSICAL, params, || {
                if sigs.is_empty() {
                    return Ok(Outcome::Fail("no admissible signature found".into()));
                }
                for l in &sigs {
                    let one = F::one();
                    let mu = orbits::rep_eigenvalues(l, n, EigenMode::Classical, &one).map_err(|e| e.to_string())?;
                    let spec = OrbitSpec::new(mu, one.clone(), one);
                    let star = l.star(n).map_err(|e| e.to_string())?;
                    let base: F = orbits::frobenius_dim(&star);
                    for (k, d) in orbits::multiplicities(&spec, m, Mode::Classical).map_err(|e| e.to_string())? {
                        let want = orbits::frobenius_dim::<F>(&shifted(&star, &k)).over(&base);
                        if d != want {
                            return Ok(Outcome::Fail(format!("lambda {l}, k {k:?}: {d} != {want}")));
                        }
                    }
                }
                Ok::<_, String>(Outcome::Pass)
            });
        }
    }
    let m_q = s.params.m.unwrap_or(5);
    for p in 2..=p_max {
        for m in 1..=m_q {
            let found = quantum_signature(p, m, &q);
            let params = json!({"p": p, "m": m, "lambda": found.as_ref().map(|(l, _)| l.to_string())});
            rec.run(format!("orbit.quantum_multiplicities[p={p},m={m}]"), anchors::MULT_QUANTUM, params, || {
                let Some((l, spec)) = &found else {
                    return Ok(Outcome::Fail("no generic signature found".into()));
                };
                let hat = l.star_hat(p).map_err(|e| e.to_string())?;
                let base = casimir::q_dimension(&hat, p, &q).map_err(|e| e.to_string())?;
                let mut total = F::zero();
                for (k, d) in orbits::multiplicities(spec, m, Mode::Quantum).map_err(|e| e.to_string())? {
                    let want = casimir::q_dimension(&shifted(&hat, &k), p, &q).map_err(|e| e.to_string())?.over(&base);
                    if d != want {
                        return Ok(Outcome::Fail(format!("k {k:?}: {d} != {want}")));
                    }
                    total.add_assign(&d);
                }
                let dim = casimir::q_dimension(&[m as i64], p, &q).map_err(|e| e.to_string())?;
                bool_check(total == dim, || format!("sum {total} != dim_q V_(m) {dim}"))
            });
        }
    }
    for m in 1..=s.params.m.unwrap_or(3).min(3) {
        let sigs = admissible_signatures(2, m, 2);
        let params = json!({"n": 2, "m": m, "s_max": 3, "lambdas": strings(&sigs)});
        rec.run(format!("orbit.higher_newton_classical[m={m}]"), anchors::HIGHER_NEWTON_CLASSICAL, params, || {
            for l in &sigs {
                let r = orbits::higher_newton_classical::<F>(l, 2, m, 3).map_err(|e| e.to_string())?;
                if !r.passed() {
                    return Ok(Outcome::Fail(format!("lambda {l}: {:?}", r.powers)));
                }
            }
            Ok::<_, String>(Outcome::from_bool(!sigs.is_empty(), || "no admissible signature".into()))
        });
    }
    {
        let mu: Vec<F> = distinct_sample(&mut s.rng, 3).iter().map(F::from_rational).collect();
        let hb = F::from_rational(&sample_rational(&mut s.rng, SAMPLE_BOUND));
        let params = json!({"mu": strings(&mu), "hbar": hb.to_string()});
        rec.run("orbit.higher_newton_reduction", anchors::HIGHER_NEWTON_REDUCTION, params, || {
            let spec = OrbitSpec::new(mu.clone(), hb.clone(), F::one());
            let d = orbits::multiplicities(&spec, 1, Mode::Classical).map_err(|e| e.to_string())?;
            for sp in 1..=4 {
                let direct = orbits::classical_power_trace(&mu, &hb, sp).map_err(|e| e.to_string())?;
                let via = spec
                    .roots(1, Mode::Classical)
                    .iter()
                    .zip(&d)
                    .fold(F::zero(), |a, ((_, v), (_, w))| a.plus(&v.pow(sp as i64).times(w)));
                if direct != via {
                    return Ok(Outcome::Fail(format!("s={sp}: {direct} != {via}")));
                }
            }
            Ok::<_, String>(Outcome::Pass)
        });
    }
    let n = s.n();
    if let Ok(h) = s.symmetry(n) {
        if h.p() == 2 {
            s.guard(n, 3 + 3)?;
            let hbar = s.hbar();
            for k in 1..=3 {
                for m in 1..=2 {
                    let params = json!({"n": n, "k": k, "m": m, "s_max": 3, "hbar": hbar.to_string()});
                    rec.run(format!("orbit.higher_newton_quantum[k={k},m={m}]"), anchors::HIGHER_NEWTON_QUANTUM, params, || {
                        let r = orbits::higher_newton_quantum(&h, k, m, 3, &hbar).map_err(|e| e.to_string())?;
                        bool_check(r.passed(), || {
                            let bad: Vec<String> = r
                                .powers
                                .iter()
                                .filter(|p| !p.holds())
                                .map(|p| format!("s={}: {:?} vs {}", p.s, p.lhs.as_ref().map(|x| x.to_string()), p.rhs))
                                .collect();
                            bad.join("; ")
                        })
                    });
                }
            }
            for k in 1..=3 {
                for m in 1..=3 {
                    let params = json!({"n": n, "k": k, "m": m});
                    rec.run(format!("orbit.idempotents[k={k},m={m}]"), anchors::IDEMPOTENTS, params, || {
                        idempotent_check(&h, k, m)
                    });
                }
            }
        }
    }
    string_checks(s, rec);
    if let Some(mu) = s.params.mu.clone() {
        let hb = s.hbar();
        let m = s.params.m.unwrap_or(2);
        let mu: Vec<F> = mu.iter().map(F::from_rational).collect();
        let spec = OrbitSpec::new(mu.clone(), hb.clone(), q.clone());
        let p = mu.len();
        for mode in [Mode::Classical, Mode::Quantum] {
            let tag = if mode == Mode::Classical { "classical" } else { "quantum" };
            let params = json!({"mu": strings(&mu), "hbar": hb.to_string(), "m": m, "mode": tag});
            rec.run(format!("orbit.input_multiplicity_sum[{tag}]"), anchors::MULT_SUM, params, || {
                let d = orbits::multiplicities(&spec, m, mode).map_err(|e| e.to_string())?;
                let total = d.iter().fold(F::zero(), |a, (_, v)| a.plus(v));
                let want = casimir::q_dimension(&[m as i64], p, &spec.q_for(mode)).map_err(|e| e.to_string())?;
                bool_check(total == want, || format!("sum {total} != {want}"))
            });
        }
        let params = json!({"mu": strings(&mu), "hbar": hb.to_string()});
        rec.run("orbit.input_strings", anchors::STRINGS, params, || {
            let d = orbits::string_decompose(&spec).map_err(|e| e.to_string())?;
            let desc: Vec<String> = d.strings.iter().map(|x| format!("({}, {})", x.head, x.len())).collect();
            Ok::<_, String>(Outcome::Finding(format!("strings {}", desc.join(", "))))
        });
    }
    Ok(())
}

/// A signature whose quantum eigenvalues at `ħ = 0` are `m`-generic.
fn quantum_signature<F: SuiteField>(p: usize, m: usize, q: &F) -> Option<(PartitionVector, OrbitSpec<F>)> {
    for extra in 0..8i64 {
        let lam: Vec<i64> = (0..p).map(|i| (p - 1 - i) as i64 * (m as i64 + 1 + extra) + (i == 0) as i64 * extra).collect();
        let l = PartitionVector::signature(lam).ok()?;
        let mu = orbits::rep_eigenvalues(&l, p, EigenMode::ReaQ, q).ok()?;
        let spec = OrbitSpec::new(mu, F::zero(), q.clone());
        if spec.is_m_generic(m, Mode::Quantum) {
            return Some((l, spec));
        }
    }
    None
}

/// Two-row components `V_(k+m-j, j)` have dimension `k + m - 2j + 1` and
/// sit at the root `ω̂_s` with `s = m - j`.
fn idempotent_check<F: SuiteField>(h: &HeckeSymmetry<F>, k: usize, m: usize) -> Result<Outcome, String> {
    let (l, roots) = orbits::casimir_spectrum(h, k, m).map_err(|e| e.to_string())?;
    let e = orbits::spectral_idempotents(&l, &roots).map_err(|e| e.to_string())?;
    let rep = orbits::check_idempotents(&l, &roots, &e);
    if !rep.passed() {
        return Ok(Outcome::Fail(format!("{rep:?}")));
    }
    if h.n() != 2 {
        return Ok(Outcome::Pass);
    }
    let q = h.q();
    let all = identities::omega_roots(&F::one(), &x_of(q, k), &F::zero(), m, q);
    let expected: Vec<usize> = roots
        .iter()
        .map(|r| {
            (0..=m)
                .filter(|&s| all[s] == *r && s + k >= m)
                .map(|s| k + 2 * s + 1 - m)
                .sum()
        })
        .collect();
    Ok(Outcome::from_bool(rep.ranks == expected, || {
        format!("ranks {:?}, expected {expected:?}", rep.ranks)
    }))
}

fn string_summary<F: Field>(d: &orbits::StringDecomposition<F>) -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> = d.strings.iter().map(|x| (x.head.to_string(), x.len())).collect();
    v.sort();
    v
}

fn string_checks<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) {
    let q = s.q.clone();
    let qi = q.inverse().expect("q nonzero");
    let hb = F::from_rational(&sample_rational(&mut s.rng, SAMPLE_BOUND));
    let f = |v: &F| qi.pow(2).times(v).plus(&qi.times(&hb));
    let a = F::from_rational(&sample_rational(&mut s.rng, SAMPLE_BOUND));
    let b = F::from_rational(&sample_rational(&mut s.rng, 1 << 20));
    let params = json!({"a": a.to_string(), "b": b.to_string(), "hbar": hb.to_string()});
    rec.run("orbit.strings_examples", anchors::STRINGS, params, || {
        let pair = OrbitSpec::new(vec![a.clone(), f(&a)], hb.clone(), q.clone());
        let d = orbits::string_decompose(&pair).map_err(|e| e.to_string())?;
        if d.strings.len() != 1 || d.strings[0].head != a || d.strings[0].len() != 2 {
            return Ok(Outcome::Fail(format!("pair gave {:?}", string_summary(&d))));
        }
        let triple = OrbitSpec::new(vec![a.clone(), f(&a), b.clone()], hb.clone(), q.clone());
        let d = orbits::string_decompose(&triple).map_err(|e| e.to_string())?;
        let heads: Vec<(F, usize)> = d.strings.iter().map(|x| (x.head.clone(), x.len())).collect();
        let poly = vec![a.times(&b), a.plus(&b).negated(), F::one()];
        if heads != vec![(a.clone(), 2), (b.clone(), 1)] || d.min_poly != poly {
            return Ok(Outcome::Fail(format!("triple gave {:?}", string_summary(&d))));
        }
        let mut rng_mu = Vec::new();
        for i in 0..4 {
            rng_mu.push(F::from_int(7919 * (i + 1) * (i + 3)).over(&F::from_int(13 + i)));
        }
        let generic = OrbitSpec::new(rng_mu, hb.clone(), q.clone());
        let d = orbits::string_decompose(&generic).map_err(|e| e.to_string())?;
        Ok::<_, String>(Outcome::from_bool(
            d.strings.len() == 4 && d.strings.iter().all(|x| x.len() == 1),
            || format!("generic set gave {:?}", string_summary(&d)),
        ))
    });
    let trials = 20;
    let mut cases = Vec::new();
    for _ in 0..trials {
        let p = s.rng.gen_range(1..=4);
        let mut mu: Vec<F> = Vec::new();
        // Random sets with some chains already present.
        while mu.len() < p {
            let v = F::from_rational(&sample_rational(&mut s.rng, SAMPLE_BOUND));
            // The fixed point ħ/ζ is its own successor.
            if f(&v) == v {
                continue;
            }
            if !mu.contains(&v) {
                mu.push(v.clone());
            }
            if mu.len() < p && s.rng.gen_bool(0.5) && !mu.contains(&f(&v)) {
                mu.push(f(&v));
            }
        }
        let pick = s.rng.gen_range(0..mu.len());
        cases.push((mu, pick));
    }
    rec.run("orbit.strings_append", anchors::STRINGS_APPEND, json!({"trials": trials, "hbar": hb.to_string()}), || {
        for (mu, pick) in &cases {
            let spec = OrbitSpec::new(mu.clone(), hb.clone(), q.clone());
            let before = orbits::string_decompose(&spec).map_err(|e| e.to_string())?;
            let tail = before.strings[*pick % before.strings.len()].members.last().unwrap().clone();
            let mut grown = mu.clone();
            grown.push(f(&tail));
            let spec2 = OrbitSpec::new(grown, hb.clone(), q.clone());
            let after = orbits::string_decompose(&spec2).map_err(|e| e.to_string())?;
            let mut lens_before: Vec<usize> = before.strings.iter().map(|x| x.len()).collect();
            let extended: Vec<(F, usize)> = after
                .strings
                .iter()
                .map(|x| (x.head.clone(), x.len()))
                .filter(|(hd, len)| before.strings.iter().any(|y| y.head == *hd && y.len() + 1 == *len))
                .collect();
            let mut lens_after: Vec<usize> = after.strings.iter().map(|x| x.len()).collect();
            lens_before.sort();
            lens_after.sort();
            let total_ok = lens_after.iter().sum::<usize>() == lens_before.iter().sum::<usize>() + 1;
            if after.strings.len() != before.strings.len() || extended.is_empty() || !total_ok {
                return Ok(Outcome::Fail(format!(
                    "mu {:?}: before {:?}, after {:?}",
                    strings(mu),
                    string_summary(&before),
                    string_summary(&after)
                )));
            }
        }
        Ok::<_, String>(Outcome::Pass)
    });
}

fn euler_suite<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) -> Result<(), SuiteError> {
    let q = s.q.clone();
    let p_max = s.params.p.unwrap_or(4);
    let samples: Vec<(Vec<i64>, i64)> = (0..100)
        .map(|_| {
            let p = s.rng.gen_range(2..=p_max.max(2));
            let k = (0..p).map(|_| s.rng.gen_range(-6..=6)).collect();
            (k, s.rng.gen_range(-5..=5))
        })
        .collect();
    rec.run("euler.shift_invariance", anchors::EULER_SHIFT, json!({"samples": 100, "p_max": p_max}), || {
        for (k, a) in &samples {
            let ka: Vec<i64> = k.iter().map(|x| x + a).collect();
            let (x, y) = (euler::euler_characteristic(k, &q), euler::euler_characteristic(&ka, &q));
            if x != y {
                return Ok(Outcome::Fail(format!("k {k:?}, shift {a}: {x} != {y}")));
            }
        }
        Ok::<_, String>(Outcome::Pass)
    });
    rec.run("euler.p3_relations", anchors::EULER_P3, json!({"p": 3}), || {
        let r = euler::q_algebra_check(3, &q).map_err(|e| e.to_string())?;
        let vals: Vec<F> = r.relations.iter().map(|(_, _, v)| v.clone()).collect();
        let want = vec![qint(3, &q), qint(3, &q), F::one()];
        let consistent = r.relations.iter().all(|(_, a, b)| a == b);
        bool_check(vals == want && consistent, || format!("values {:?}", strings(&vals)))
    });
    for p in 2..=p_max {
        rec.run(format!("euler.q_algebra[p={p}]"), anchors::EULER_ALGEBRA, json!({"p": p, "m_max": 5}), || {
            let r = euler::q_algebra_check(p, &q).map_err(|e| e.to_string())?;
            bool_check(r.passed(), || {
                let bad: Vec<String> = r
                    .sums
                    .iter()
                    .filter(|(_, a, b)| a != b)
                    .map(|(m, a, b)| format!("m={m}: {a} != {b}"))
                    .collect();
                format!("{} {:?}", bad.join("; "), r.exterior_dims)
            })
        });
    }
    rec.run("euler.index_cross_check", anchors::EULER_INDEX, json!({"p": 3, "m": 2}), || {
        for l in admissible_signatures(3, 2, 3) {
            let lam = l.parts().to_vec();
            for k in identities::compositions(2, 3) {
                let k: Vec<i64> = k.iter().map(|&x| x as i64).collect();
                let idx = q_index_and_euler(&k, 3, &q, Some(&lam)).map_err(|e| e.to_string())?;
                let rev: Vec<i64> = (0..3).rev().map(|i| lam[i] + k[i]).collect();
                let dim = casimir::q_dimension(&rev, 3, &q).map_err(|e| e.to_string())?;
                if idx != dim {
                    return Ok(Outcome::Fail(format!("lambda {l}, k {k:?}: {idx} != {dim}")));
                }
            }
        }
        Ok::<_, String>(Outcome::Pass)
    });
    rec.run("euler.classical_limit", anchors::EULER_CLASSICAL, json!({"p": 3}), || {
        let one = F::one();
        for k in identities::compositions(3, 3) {
            let k: Vec<i64> = k.iter().map(|&x| x as i64).collect();
            let rev: Vec<i64> = k.iter().rev().copied().collect();
            let chi = euler::euler_characteristic(&k, &one);
            let want: F = orbits::frobenius_dim(&rev);
            if chi != want {
                return Ok(Outcome::Fail(format!("k {k:?}: {chi} != {want}")));
            }
        }
        Ok::<_, String>(Outcome::Pass)
    });
    Ok(())
}

fn calibrate_trace<F: SuiteField>(s: &mut Setup<F>, rec: &mut Recorder) -> Result<(), SuiteError> {
    let n = s.n();
    let Some(h) = symmetry_or_fail(s, rec, "calibrate-trace.symmetry", n) else {
        return Ok(());
    };
    let m_max = s.params.m.unwrap_or(if n == 2 { 4 } else { 3 });
    s.guard(n, m_max)?;
    for m in 1..=m_max {
        rec.run(format!("calibrate-trace.weights[m={m}]"), anchors::TRACE_WEIGHTS, json!({"n": n, "m": m}), || {
            TraceWeights::calibrate(&h, m).map(|w| {
                Outcome::from_bool(w.normalization_exponent == h.p() as i64, || "unexpected exponent".into())
            })
        });
    }
    Ok(())
}
