//! Hecke symmetries: construction, validation, skew-inverse and rank.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, RwLock};

use serde_json::{json, Value};
use thiserror::Error;

use crate::projectors;
use crate::scalars::{qint, zeta, Field, QScalar, ScalarError};
use crate::tensor::{ImageBasis, LegOperator, Mat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeckeError {
    #[error("R is not skew-invertible")]
    NotSkewInvertible,
    #[error("not even up to p = {max_p}")]
    NotEven { max_p: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("R must act on two legs, got {0}")]
    NotTwoLegs(usize),
}

/// The Drinfeld–Jimbo Hecke symmetry on `V⊗V`, `dim V = n`: `q` at
/// `(i,i;i,i)`, `1` at `(i,j;j,i)` for `i ≠ j`, and `q - q^-1` at `(i,j;i,j)`
/// for `i < j`.
pub fn standard_r<F: Field>(n: usize, q: &F) -> LegOperator<F> {
    assert!(n >= 1, "standard_r needs n >= 1");
    let z = zeta(q);
    let mut r = Mat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                r.set(i * n + i, i * n + i, q.clone());
            } else {
                r.set(i * n + j, j * n + i, F::one());
                if i < j {
                    r.set(i * n + j, i * n + j, z.clone());
                }
            }
        }
    }
    LegOperator::new(n, 2, r)
}

/// `(g⊗g) R (g⊗g)^-1`, again a Hecke symmetry with the same rank; unlike
/// the standard one it is not symmetric for generic `g`.
pub fn conjugate_r<F: Field>(r: &LegOperator<F>, g: &Mat<F>) -> Result<LegOperator<F>, HeckeError> {
    let gg = g.kron(g);
    let inv = gg.inverse().map_err(|_| HeckeError::Invariant("g is singular".into()))?;
    Ok(LegOperator::new(r.n, 2, gg.mul(&r.mat).mul(&inv)))
}

/// Outcome of the antisymmetrizer tower search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankOutcome {
    Even(usize),
    NotEvenUpTo(usize),
}

impl RankOutcome {
    pub fn rank(self) -> Option<usize> {
        match self {
            RankOutcome::Even(p) => Some(p),
            RankOutcome::NotEvenUpTo(_) => None,
        }
    }
}

/// Independent checks on a candidate Hecke symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeReport {
    pub ybe: bool,
    pub hecke: bool,
    /// First skew-inverse identity solvable.
    pub skew_invertible: bool,
    /// Second skew-inverse identity, checked independently.
    pub skew_second: bool,
    pub even: bool,
    pub rank: Option<usize>,
}

impl HeckeReport {
    pub fn passed(&self) -> bool {
        self.ybe && self.hecke && self.skew_invertible && self.skew_second && self.even
    }
}

fn check_two_legs<F: Field>(r: &LegOperator<F>) -> Result<(), HeckeError> {
    if r.m != 2 {
        return Err(HeckeError::NotTwoLegs(r.m));
    }
    Ok(())
}

pub fn braid_relation_holds<F: Field>(r: &LegOperator<F>) -> bool {
    let r12 = r.embed_on_legs(1, 3).unwrap().mat;
    let r23 = r.embed_on_legs(2, 3).unwrap().mat;
    r12.mul(&r23).mul(&r12) == r23.mul(&r12).mul(&r23)
}

pub fn hecke_condition_holds<F: Field>(r: &LegOperator<F>, q: &F) -> bool {
    let qi = q.inverse().expect("q must be nonzero");
    r.mat.sub_scalar(q).mul(&r.mat.add(&Mat::scalar(r.mat.rows(), &qi))).is_zero()
}

/// Skew-inverse data `(Ψ, B, C)` with `B = Tr_(1) Ψ` and `C = Tr_(2) Ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewData<F> {
    pub psi: LegOperator<F>,
    pub b: Mat<F>,
    pub c: Mat<F>,
}

/// Solve `Tr_(2) R_12 Ψ_23 = P_13` for `Ψ`.
///
/// Written out, the identity says `Σ_{a,b} R_{ia}^{jb} Ψ_{bk}^{as} = δ_i^s δ_k^j`,
/// i.e. `M X = I` for the `n²×n²` matrix `M_{(i,j),(a,b)} = R_{ia}^{jb}` and
/// `X_{(a,b),(s,k)} = Ψ_{bk}^{as}`.
pub fn skew_inverse_bc<F: Field>(r: &LegOperator<F>) -> Result<SkewData<F>, HeckeError> {
    check_two_legs(r)?;
    let n = r.n;
    let mut m = Mat::zeros(n * n, n * n);
    for (row, entries) in (0..n * n).map(|row| (row, r.mat.row(row))) {
        let (i, a) = (row / n, row % n);
        for (col, v) in entries {
            let (j, b) = (col / n, col % n);
            m.set(i * n + j, a * n + b, v.clone());
        }
    }
    let x = m.inverse().map_err(|_| HeckeError::NotSkewInvertible)?;
    let mut psi = Mat::zeros(n * n, n * n);
    for row in 0..n * n {
        let (a, b) = (row / n, row % n);
        for (col, v) in x.row(row) {
            let (s, k) = (col / n, col % n);
            psi.set(b * n + k, a * n + s, v.clone());
        }
    }
    let psi = LegOperator::new(n, 2, psi);
    let id = Mat::identity(n);
    let c = psi.weighted_partial_trace(&BTreeSet::from([2]), &id).unwrap().mat;
    let b = psi.weighted_partial_trace(&BTreeSet::from([1]), &id).unwrap().mat;
    Ok(SkewData { psi, b, c })
}

/// Both skew-inverse identities `Tr_(2) R_12 Ψ_23 = P_13 = Tr_(2) Ψ_12 R_23`.
pub fn skew_identities<F: Field>(r: &LegOperator<F>, psi: &LegOperator<F>) -> (bool, bool) {
    let id = Mat::identity(r.n);
    let leg2 = BTreeSet::from([2]);
    // After tracing leg 2 the survivors are legs 1 and 3.
    let p13 = LegOperator::<F>::flip(r.n).mat;
    let first = r
        .embed_on_legs(1, 3)
        .unwrap()
        .compose(&psi.embed_on_legs(2, 3).unwrap())
        .weighted_partial_trace(&leg2, &id)
        .unwrap();
    let second = psi
        .embed_on_legs(1, 3)
        .unwrap()
        .compose(&r.embed_on_legs(2, 3).unwrap())
        .weighted_partial_trace(&leg2, &id)
        .unwrap();
    (first.mat == p13, second.mat == p13)
}

/// Smallest `p <= max_p` with `rank A^(p) = 1` and `A^(p+1) = 0`.
pub fn symmetry_rank<F: Field>(r: &LegOperator<F>, q: &F, max_p: usize) -> RankOutcome {
    let tower = projectors::antisymmetrizer_tower(&r.mat, r.n, q, max_p + 1, true);
    for p in 1..=max_p {
        match (tower.get(p - 1), tower.get(p)) {
            (Some(a), Some(next)) if next.is_zero() => {
                return if a.rank() == 1 {
                    RankOutcome::Even(p)
                } else {
                    RankOutcome::NotEvenUpTo(max_p)
                };
            }
            (Some(_), Some(_)) => continue,
            _ => break,
        }
    }
    RankOutcome::NotEvenUpTo(max_p)
}

/// Run every check; later checks that presuppose earlier ones are reported
/// as failed when the prerequisite fails.
pub fn validate_hecke_symmetry<F: Field>(r: &LegOperator<F>, q: &F) -> HeckeReport {
    let mut rep = HeckeReport {
        ybe: false,
        hecke: false,
        skew_invertible: false,
        skew_second: false,
        even: false,
        rank: None,
    };
    if r.m != 2 {
        return rep;
    }
    rep.ybe = braid_relation_holds(r);
    rep.hecke = hecke_condition_holds(r, q);
    if let Ok(sk) = skew_inverse_bc(r) {
        let (first, second) = skew_identities(r, &sk.psi);
        rep.skew_invertible = first;
        rep.skew_second = second;
    }
    if rep.ybe && rep.hecke {
        rep.rank = symmetry_rank(r, q, r.n + 1).rank();
        rep.even = rep.rank.is_some();
    }
    rep
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum CacheKey {
    Sym(usize),
    Antisym(usize),
    LeftBasis(usize),
}

#[derive(Clone)]
enum Cached<F> {
    Mat(Arc<Mat<F>>),
    Basis(Arc<ImageBasis<F>>),
}

/// A validated even Hecke symmetry with its skew-inverse data.
///
/// Every invariant is checked exactly in [`HeckeSymmetry::new`]; projectors
/// and image bases are cached and shared between clones.
#[derive(Clone)]
pub struct HeckeSymmetry<F: Field> {
    n: usize,
    q: F,
    r: LegOperator<F>,
    psi: LegOperator<F>,
    b: Mat<F>,
    c: Mat<F>,
    p: usize,
    cache: Arc<RwLock<HashMap<CacheKey, Cached<F>>>>,
}

impl<F: Field> fmt::Debug for HeckeSymmetry<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeckeSymmetry")
            .field("n", &self.n)
            .field("q", &self.q)
            .field("p", &self.p)
            .finish_non_exhaustive()
    }
}

impl<F: Field> HeckeSymmetry<F> {
    pub fn new(r: LegOperator<F>, q: F) -> Result<Self, HeckeError> {
        check_two_legs(&r)?;
        let inv = |what: &str| HeckeError::Invariant(what.to_string());
        if !braid_relation_holds(&r) {
            return Err(inv("Yang-Baxter equation"));
        }
        if !hecke_condition_holds(&r, &q) {
            return Err(inv("Hecke condition"));
        }
        let sk = skew_inverse_bc(&r)?;
        let (first, second) = skew_identities(&r, &sk.psi);
        if !(first && second) {
            return Err(inv("skew-inverse identities"));
        }
        let n = r.n;
        let p = match symmetry_rank(&r, &q, n + 1) {
            RankOutcome::Even(p) => p,
            RankOutcome::NotEvenUpTo(max_p) => return Err(HeckeError::NotEven { max_p }),
        };
        let pi = p as i64;
        if sk.b.mul(&sk.c) != Mat::scalar(n, &q.pow(-2 * pi)) {
            return Err(inv("B C = q^(-2p) I"));
        }
        let norm = qint(pi, &q).times(&q.pow(-pi));
        if sk.b.trace() != norm || sk.c.trace() != norm {
            return Err(inv("Tr B = Tr C = p_q/q^p"));
        }
        Ok(HeckeSymmetry {
            n,
            q,
            r,
            psi: sk.psi,
            b: sk.b,
            c: sk.c,
            p,
            cache: Arc::new(RwLock::new(HashMap::new())),
        })
    }

    /// The Drinfeld–Jimbo symmetry, validated.
    pub fn standard(n: usize, q: F) -> Result<Self, HeckeError> {
        let r = standard_r(n, &q);
        Self::new(r, q)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> &F {
        &self.q
    }
    pub fn r(&self) -> &LegOperator<F> {
        &self.r
    }
    pub fn psi(&self) -> &LegOperator<F> {
        &self.psi
    }
    pub fn b(&self) -> &Mat<F> {
        &self.b
    }
    pub fn c(&self) -> &Mat<F> {
        &self.c
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn zeta(&self) -> F {
        zeta(&self.q)
    }
    pub fn qint(&self, m: i64) -> F {
        qint(m, &self.q)
    }
    pub fn qpow(&self, e: i64) -> F {
        self.q.pow(e)
    }

    /// The left automorphism on `V⊗V` acting on column vectors: `Rᵀ`.
    pub fn left_r(&self) -> Mat<F> {
        self.r.mat.transpose()
    }

    /// `(Rᵀ)^-1 = Rᵀ - ζ I`, asserted against the product.
    pub fn left_r_inverse(&self) -> Mat<F> {
        let lr = self.left_r();
        let inv = lr.sub_scalar(&self.zeta());
        debug_assert!(lr.mul(&inv).is_scalar(&F::one()));
        inv
    }

    fn cached_mat(&self, key: CacheKey, build: impl FnOnce() -> Mat<F>) -> Arc<Mat<F>> {
        if let Some(Cached::Mat(m)) = self.cache.read().unwrap().get(&key) {
            return m.clone();
        }
        let m = Arc::new(build());
        self.cache
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Cached::Mat(m.clone()));
        m
    }

    /// `S^(m)(R)` on `m` legs.
    pub fn symmetrizer(&self, m: usize) -> Arc<Mat<F>> {
        assert!(m >= 1);
        self.cached_mat(CacheKey::Sym(m), || {
            if m == 1 {
                return Mat::identity(self.n);
            }
            let prev = self.symmetrizer(m - 1);
            projectors::symmetrizer_step(&self.r.mat, self.n, &self.q, m, &prev, false)
        })
    }

    /// `A^(m)(R)` on `m` legs.
    pub fn antisymmetrizer(&self, m: usize) -> Arc<Mat<F>> {
        assert!(m >= 1);
        self.cached_mat(CacheKey::Antisym(m), || {
            if m == 1 {
                return Mat::identity(self.n);
            }
            let prev = self.antisymmetrizer(m - 1);
            projectors::symmetrizer_step(&self.r.mat, self.n, &self.q, m, &prev, true)
        })
    }

    /// Basis of the column-vector module `Im S^(m)(Rᵀ) = Im S^(m)(R)ᵀ`.
    pub fn left_basis(&self, m: usize) -> Arc<ImageBasis<F>> {
        let key = CacheKey::LeftBasis(m);
        if let Some(Cached::Basis(b)) = self.cache.read().unwrap().get(&key) {
            return b.clone();
        }
        let b = Arc::new(ImageBasis::of_projector(&self.symmetrizer(m).transpose()));
        self.cache
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Cached::Basis(b.clone()));
        b
    }

    /// `dim V_(m) = rank S^(m)`.
    pub fn sym_dim(&self, m: usize) -> usize {
        self.left_basis(m).dim()
    }
}

// ---------------------------------------------------------------------------
// R-matrix files

#[derive(Debug, Error)]
pub enum RFileError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("parse error at line {line}, column {column}: {reason}")]
    Json { line: usize, column: usize, reason: String },
    #[error("parse error in field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("missing field \"n\"")]
    MissingN,
    #[error("duplicate entry for out={out:?} in={inp:?}")]
    Duplicate { out: [usize; 2], inp: [usize; 2] },
    #[error("index {index} in field `{field}` is outside 1..={n}")]
    IndexOutOfRange { field: String, index: i64, n: usize },
    #[error("scalar in field `{field}`: {source}")]
    Scalar { field: String, source: ScalarError },
}

fn field_err(field: impl Into<String>, reason: impl Into<String>) -> RFileError {
    RFileError::Field {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Parse the JSON R-matrix format. Entry `{"out":[k,l],"in":[i,j],"value":v}`
/// sets `R_{ij}^{kl} = v` (1-based indices), i.e. row `(i,j)`, column `(k,l)`.
pub fn parse_r_json(text: &str) -> Result<LegOperator<QScalar>, RFileError> {
    let v: Value = serde_json::from_str(text).map_err(|e| RFileError::Json {
        line: e.line(),
        column: e.column(),
        reason: e.to_string(),
    })?;
    let obj = v.as_object().ok_or_else(|| field_err("<root>", "expected an object"))?;
    let n = match obj.get("n") {
        None => return Err(RFileError::MissingN),
        Some(x) => x
            .as_u64()
            .filter(|&n| n >= 1)
            .ok_or_else(|| field_err("n", "expected a positive integer"))? as usize,
    };
    if let Some(p) = obj.get("parameter") {
        if p.as_str() != Some("q") {
            return Err(field_err("parameter", "only \"q\" is supported"));
        }
    }
    let entries = match obj.get("entries") {
        None => Vec::new(),
        Some(e) => e
            .as_array()
            .ok_or_else(|| field_err("entries", "expected an array"))?
            .clone(),
    };
    let mut seen = BTreeMap::new();
    for (t, e) in entries.iter().enumerate() {
        let path = format!("entries[{t}]");
        let pair = |name: &str| -> Result<[usize; 2], RFileError> {
            let f = format!("{path}.{name}");
            let arr = e
                .get(name)
                .and_then(Value::as_array)
                .filter(|a| a.len() == 2)
                .ok_or_else(|| field_err(&f, "expected a pair of indices"))?;
            let mut out = [0; 2];
            for (s, x) in arr.iter().enumerate() {
                let i = x.as_i64().ok_or_else(|| field_err(&f, "expected integers"))?;
                if i < 1 || i > n as i64 {
                    return Err(RFileError::IndexOutOfRange { field: f.clone(), index: i, n });
                }
                out[s] = (i - 1) as usize;
            }
            Ok(out)
        };
        let out = pair("out")?;
        let inp = pair("in")?;
        let vf = format!("{path}.value");
        let text = e
            .get("value")
            .and_then(Value::as_str)
            .ok_or_else(|| field_err(&vf, "expected a scalar string"))?;
        let value: QScalar = text
            .parse()
            .map_err(|source| RFileError::Scalar { field: vf, source })?;
        if seen.insert((inp, out), value).is_some() {
            return Err(RFileError::Duplicate {
                out: out.map(|x| x + 1),
                inp: inp.map(|x| x + 1),
            });
        }
    }
    let mut mat = Mat::zeros(n * n, n * n);
    for ((inp, out), v) in seen {
        mat.set(inp[0] * n + inp[1], out[0] * n + out[1], v);
    }
    Ok(LegOperator::new(n, 2, mat))
}

pub fn load_r_from_file(path: &Path) -> Result<LegOperator<QScalar>, RFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| RFileError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    parse_r_json(&text)
}

/// Canonical JSON text: entries in row-major order, canonical scalar strings.
pub fn r_to_json(r: &LegOperator<QScalar>) -> String {
    let n = r.n;
    let mut entries = Vec::new();
    for row in 0..n * n {
        for (col, v) in r.mat.row(row) {
            entries.push(json!({
                "out": [col / n + 1, col % n + 1],
                "in": [row / n + 1, row % n + 1],
                "value": v.to_string(),
            }));
        }
    }
    let doc = json!({"n": n, "parameter": "q", "entries": entries});
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub fn save_r_to_file(r: &LegOperator<QScalar>, path: &Path) -> Result<(), RFileError> {
    std::fs::write(path, r_to_json(r)).map_err(|e| RFileError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Substitute a value for `q` in every entry.
pub fn specialize<F: Field>(r: &LegOperator<QScalar>, q: &F) -> Result<LegOperator<F>, HeckeError> {
    let mat = r
        .mat
        .try_map(|v| v.eval_in(q).ok_or(()))
        .map_err(|_| HeckeError::Invariant("an entry has a pole at the chosen q".into()))?;
    Ok(LegOperator::new(r.n, 2, mat))
}
