//! Flag valuations, their semigroups, and Okounkov body computations.
//!
//! Coordinate convention: entry `i` (1-based) of a valuation vector is the
//! vanishing order along `X_{i-1} ⊂ X_i`. Values are computed from the
//! divisor step `X_{n-1} ⊂ X` down to the point step, so entry `n` is found
//! first and the point order lands in entry 1. Comparisons of values use the
//! lexicographic order that looks at entry `n` first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::flags::{require_complete_intersection, require_valid, FlagSpec};
use crate::linalg::{gauss_solve, int, rational_string, rational_vec_string, QMatrix, QVector, Rational};
use crate::models::{basis_of_level, hilbert_dim, restriction_degree, restriction_matrix, Model, Section};
use crate::poly::{max_power_dividing, order_at_base_point, pullback, MultiPoly, BINARY_VARS};
use crate::polytope::{convex_hull, VPolytope};

pub type Value = Vec<u32>;

/// Compares two values in computation order (entry `n` first).
pub fn cmp_computation_order(a: &[u32], b: &[u32]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

enum Prepared {
    Coordinate { order: Vec<usize> },
    Curve { xi1: MultiPoly, param: crate::poly::CurveParam },
    Toric { vertex: Vec<i64>, inverse: QMatrix },
}

/// The valuation attached to a flag on a model.
pub struct FlagValuation<'a> {
    model: &'a Model,
    n: usize,
    prepared: Prepared,
    /// Per-level componentwise bound on values.
    bound_per_level: u64,
}

impl<'a> FlagValuation<'a> {
    /// Prepares the valuation; the flag must pass validation.
    pub fn new(model: &'a Model, flag: &FlagSpec) -> Result<Self> {
        require_valid(model, flag)?;
        Self::unchecked(model, flag)
    }

    /// Prepares the valuation without the hypothesis checks, for flags
    /// transported to a power of the bundle.
    fn unchecked(model: &'a Model, flag: &FlagSpec) -> Result<Self> {
        let n = model.dim();
        let (prepared, bound_per_level) = match (model, flag) {
            (Model::Projective(p), FlagSpec::Coordinate { order }) => {
                (Prepared::Coordinate { order: order.clone() }, p.d() as u64)
            }
            (Model::Projective(_), FlagSpec::Curve { xi1, param }) => {
                let b = restriction_degree(model, flag)?;
                (Prepared::Curve { xi1: xi1.clone(), param: param.clone() }, b)
            }
            (Model::Toric(t), FlagSpec::ToricVertex { vertex, edges }) => {
                let rows: Vec<&[i64]> = edges.iter().map(Vec::as_slice).collect();
                let bt = QMatrix::from_int_rows(&rows)?.transpose();
                let mut inv = QMatrix::zeros(n, n);
                for j in 0..n {
                    let x = gauss_solve(&bt, &QVector::unit(n, j)?)?
                        .ok_or_else(|| Error::Mismatch("edge directions are not a basis".into()))?;
                    for i in 0..n {
                        inv.set(i, j, x[i].clone());
                    }
                }
                let w = QVector::from_ints(vertex)?;
                let bound = t
                    .polytope()
                    .vertices()
                    .iter()
                    .flat_map(|u| inv.mul_vec(u.sub(&w).coords()).expect("dims match"))
                    .max()
                    .unwrap_or_else(Rational::zero);
                let bound = bound.ceil().to_integer().to_u64().unwrap_or(0).max(1);
                (Prepared::Toric { vertex: vertex.clone(), inverse: inv }, bound)
            }
            _ => return Err(Error::Mismatch(format!("{} flags do not apply to {model}", flag.variant_name()))),
        };
        Ok(FlagValuation { model, n, prepared, bound_per_level })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn check_level(&self, s: &Section, k: u32) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidArgument("levels start at k = 1".into()));
        }
        if s.is_zero() {
            return Err(Error::InvalidArgument("the zero section has no valuation".into()));
        }
        let ok = match (self.model, s) {
            (Model::Projective(p), Section::Form(f)) => f.num_vars() == p.num_vars() && f.is_homogeneous_of(p.d() * k),
            (Model::Toric(t), Section::Characters(c)) => c.terms().all(|(m, _)| m.len() == self.n && t.in_dilate(m, k)),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("section {s} is not in the level-{k} space")))
        }
    }

    pub fn value(&self, s: &Section, k: u32) -> Result<Value> {
        self.value_with_leading(s, k).map(|(v, _)| v)
    }

    /// Value together with the leading coefficient used for cancellation.
    pub fn value_with_leading(&self, s: &Section, k: u32) -> Result<(Value, Rational)> {
        self.check_level(s, k)?;
        match (&self.prepared, s) {
            (Prepared::Coordinate { order }, Section::Form(f)) => {
                let n = self.n;
                let reading = |e: &Vec<u32>| -> Value { (1..=n).map(|i| e[order[i]]).collect() };
                let (e, c) = f
                    .terms()
                    .min_by(|(a, _), (b, _)| cmp_computation_order(&reading(a), &reading(b)))
                    .expect("nonzero");
                Ok((reading(e), c.clone()))
            }
            (Prepared::Curve { xi1, param }, Section::Form(f)) => {
                let (divisor_order, residual) = max_power_dividing(f, xi1)?;
                let restricted = pullback(&residual, param)?;
                if restricted.is_zero() {
                    return Err(Error::Guard(format!(
                        "residual of {f} vanishes on the curve but is not divisible by {xi1}"
                    )));
                }
                let point_order = order_at_base_point(&restricted)?;
                let top = restricted.homogeneous_degree().expect("pullbacks are homogeneous");
                let lc = restricted.coeff(&[top - point_order, point_order]);
                Ok((vec![point_order, divisor_order], lc))
            }
            (Prepared::Toric { vertex, inverse }, Section::Characters(c)) => {
                let mut best: Option<(Value, Rational)> = None;
                for (m, x) in c.terms() {
                    let shifted: Vec<Rational> = m.iter().zip(vertex).map(|(a, w)| int(a - w * k as i64)).collect();
                    let coords = inverse.mul_vec(&shifted)?;
                    let v = coords
                        .iter()
                        .map(|r| {
                            if r.is_integer() && !r.is_negative() {
                                r.to_integer().to_u32().ok_or_else(|| Error::Guard("value overflow".into()))
                            } else {
                                Err(Error::Guard(format!(
                                    "character {m:?} has non-integral or negative flag coordinates"
                                )))
                            }
                        })
                        .collect::<Result<Value>>()?;
                    if best.as_ref().is_none_or(|(b, _)| cmp_computation_order(&v, b) == Ordering::Less) {
                        best = Some((v, x.clone()));
                    }
                }
                Ok(best.expect("nonzero"))
            }
            _ => Err(Error::InvalidArgument("section does not belong to this model".into())),
        }
    }

    /// The full image of the valuation on the level-`k` space, by
    /// valuation-Gaussian elimination of a basis.
    pub fn image(&self, k: u32) -> Result<BTreeSet<Value>> {
        let basis = basis_of_level(self.model, k)?;
        let bound = self.bound_per_level * k as u64;
        let mut pivots: BTreeMap<Value, (Section, Rational)> = BTreeMap::new();
        for s in basis.elements {
            let mut cur = s;
            loop {
                if cur.is_zero() {
                    return Err(Error::Guard("elimination produced the zero section from an independent basis".into()));
                }
                let (v, lc) = self.value_with_leading(&cur, k)?;
                if v.iter().any(|&x| x as u64 > bound) {
                    return Err(Error::Guard(format!("value {v:?} exceeds the level-{k} bound {bound}")));
                }
                match pivots.get(&v) {
                    None => {
                        pivots.insert(v, (cur, lc));
                        break;
                    }
                    Some((ps, plc)) => cur = cur.sub(&ps.scale(&(lc / plc)))?,
                }
            }
        }
        Ok(pivots.into_keys().collect())
    }
}

pub fn valuation(model: &Model, flag: &FlagSpec, s: &Section, k: u32) -> Result<Value> {
    FlagValuation::new(model, flag)?.value(s, k)
}

pub fn valuation_image(model: &Model, flag: &FlagSpec, k: u32) -> Result<BTreeSet<Value>> {
    FlagValuation::new(model, flag)?.image(k)
}

/// An element `(k, v(s))` of the graded semigroup.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ValuationPoint {
    pub level: u32,
    pub value: Value,
}

/// The semigroup truncated to levels `1..=max_level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupSample {
    pub max_level: u32,
    pub levels: BTreeMap<u32, Vec<Value>>,
}

impl SemigroupSample {
    pub fn points(&self) -> impl Iterator<Item = ValuationPoint> + '_ {
        self.levels.iter().flat_map(|(&level, vs)| vs.iter().map(move |v| ValuationPoint { level, value: v.clone() }))
    }

    pub fn contains(&self, level: u32, value: &[u32]) -> bool {
        self.levels.get(&level).is_some_and(|vs| vs.iter().any(|v| v == value))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sample serialization is infallible")
    }
}

impl Serialize for SemigroupSample {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.levels.len()))?;
        for (k, vs) in &self.levels {
            map.serialize_entry(&k.to_string(), vs)?;
        }
        map.end()
    }
}

fn enumerate_with(val: &FlagValuation<'_>, max_level: u32) -> Result<SemigroupSample> {
    if max_level == 0 {
        return Err(Error::InvalidArgument("max level must be >= 1".into()));
    }
    let per_level: Vec<(u32, Vec<Value>)> = (1..=max_level)
        .into_par_iter()
        .map(|k| val.image(k).map(|img| (k, img.into_iter().collect())))
        .collect::<Result<_>>()?;
    Ok(SemigroupSample { max_level, levels: per_level.into_iter().collect() })
}

pub fn enumerate_semigroup(model: &Model, flag: &FlagSpec, max_level: u32) -> Result<SemigroupSample> {
    enumerate_with(&FlagValuation::new(model, flag)?, max_level)
}

fn normalized(level: u32, value: &[u32]) -> QVector {
    let k = int(level as i64);
    QVector::new(value.iter().map(|&x| int(x as i64) / &k).collect()).expect("dimension >= 1")
}

/// Convex hull of the normalized values `v / k` of the sample.
pub fn body_approx(sample: &SemigroupSample) -> Result<VPolytope> {
    let pts: Vec<QVector> = sample.points().map(|p| normalized(p.level, &p.value)).collect();
    convex_hull(&pts)
}

/// The simplex `conv{0, b e_1, e_2, ..., e_n}` predicted for complete
/// intersection flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremPrediction {
    pub b: u64,
    pub simplex: VPolytope,
}

pub fn predicted_body(model: &Model, flag: &FlagSpec) -> Result<TheoremPrediction> {
    require_complete_intersection(model, flag)?;
    let b = restriction_degree(model, flag)?;
    Ok(TheoremPrediction { b, simplex: predicted_simplex(model.dim(), b)? })
}

pub fn predicted_simplex(n: usize, b: u64) -> Result<VPolytope> {
    let mut pts = vec![QVector::zeros(n)?];
    pts.push(QVector::unit(n, 0)?.scale(&int(b as i64)));
    for i in 1..n {
        pts.push(QVector::unit(n, i)?);
    }
    convex_hull(&pts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub contained: bool,
    pub equal: bool,
    #[serde(with = "rational_string")]
    pub e1_gap: Rational,
    pub b: u64,
    #[serde(rename = "K")]
    pub max_level: u32,
    pub body: VPolytope,
    pub predicted: VPolytope,
}

/// Compares the truncated body with the predicted simplex.
pub fn verify_theorem(model: &Model, flag: &FlagSpec, max_level: u32) -> Result<TheoremReport> {
    let prediction = predicted_body(model, flag)?;
    let body = body_approx(&enumerate_semigroup(model, flag, max_level)?)?;
    let contained = prediction.simplex.contains(&body)?;
    let equal = prediction.simplex.equals(&body)?;
    let reach = body.max_along(&QVector::unit(model.dim(), 0)?);
    Ok(TheoremReport {
        contained,
        equal,
        e1_gap: int(prediction.b as i64) - reach,
        b: prediction.b,
        max_level,
        body,
        predicted: prediction.simplex,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalingReport {
    pub m: u32,
    #[serde(rename = "K")]
    pub max_level: u32,
    pub equal: bool,
    /// Body of `L^m` truncated at level `K`.
    pub power_body: VPolytope,
    /// `m` times the body of `L` truncated at level `m K`.
    pub scaled_body: VPolytope,
}

/// The flag transported to the model of `L^m`.
fn transport_flag(flag: &FlagSpec, m: u32) -> FlagSpec {
    match flag {
        FlagSpec::ToricVertex { vertex, edges } => {
            FlagSpec::ToricVertex { vertex: vertex.iter().map(|w| w * m as i64).collect(), edges: edges.clone() }
        }
        other => other.clone(),
    }
}

/// Checks `body(L^m, K) = m * body(L, m K)`.
pub fn scaling_check(model: &Model, flag: &FlagSpec, m: u32, max_level: u32) -> Result<ScalingReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("scaling power must be >= 1".into()));
    }
    let base = FlagValuation::new(model, flag)?;
    let power_model = model.power(m)?;
    let power_flag = transport_flag(flag, m);
    let power = FlagValuation::unchecked(&power_model, &power_flag)?;
    let power_body = body_approx(&enumerate_with(&power, max_level)?)?;
    let scaled_body = body_approx(&enumerate_with(&base, m * max_level)?)?.scale(&int(m as i64))?;
    let equal = power_body.equals(&scaled_body)?;
    Ok(ScalingReport { m, max_level, equal, power_body, scaled_body })
}

/// Coefficients `x_0, ..., x_n >= 0` with `sum x_i = k` and
/// `a = x_1 b e_1 + x_2 e_2 + ... + x_n e_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionResult {
    pub a: Vec<u32>,
    pub k: u32,
    pub b: u64,
    #[serde(with = "rational_vec_string")]
    pub coefficients: Vec<Rational>,
}

impl DecompositionResult {
    /// `sum x_i` and the point `sum x_i vertex_i`.
    pub fn reconstruct(&self) -> (Rational, Vec<Rational>) {
        let total = self.coefficients.iter().sum();
        let mut point = vec![&self.coefficients[1] * int(self.b as i64)];
        point.extend(self.coefficients[2..].iter().cloned());
        (total, point)
    }
}

pub fn decompose(a: &[u32], k: u32, b: u64, n: usize) -> Result<DecompositionResult> {
    if a.len() != n || n == 0 {
        return Err(Error::dim(n, a.len()));
    }
    if b == 0 {
        return Err(Error::InvalidArgument("restriction degree must be positive".into()));
    }
    let tail: i64 = a[1..].iter().map(|&x| x as i64).sum();
    let p = k as i64 - tail;
    if p < 0 {
        return Err(Error::Decomposition(format!(
            "violates effectivity: k - (a_2 + ... + a_n) = {p} < 0, so L^{p} restricted to X_1 would be effective"
        )));
    }
    if a[0] as i128 > p as i128 * b as i128 {
        return Err(Error::Decomposition(format!(
            "point outside predicted simplex: a_1 = {} exceeds p * b = {}",
            a[0],
            p as i128 * b as i128
        )));
    }
    let x1 = int(a[0] as i64) / int(b as i64);
    let x0 = int(p) - &x1;
    let mut coefficients = vec![x0, x1];
    coefficients.extend(a[1..].iter().map(|&x| int(x as i64)));
    Ok(DecompositionResult { a: a.to_vec(), k, b, coefficients })
}

/// A section of `L^{N m}` restricting to `tau^N` on the flag curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaWitness {
    pub c: Rational,
    pub b: u64,
    pub m: u32,
    pub v1: u32,
    pub power: u32,
    /// `tau = u^{m b - v1} t^{v1}` on the curve.
    pub tau: MultiPoly,
    pub lifted: MultiPoly,
    pub valuation: Value,
}

impl Serialize for LemmaWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(8))?;
        map.serialize_entry("c", &self.c.to_string())?;
        map.serialize_entry("b", &self.b)?;
        map.serialize_entry("m", &self.m)?;
        map.serialize_entry("v1", &self.v1)?;
        map.serialize_entry("N", &self.power)?;
        map.serialize_entry("tau", &self.tau.to_string_with(&BINARY_VARS))?;
        map.serialize_entry("lifted", &self.lifted.to_string())?;
        map.serialize_entry("valuation", &self.valuation)?;
        map.end()
    }
}

/// Default bound on `m` and `N` in the witness search.
pub const DEFAULT_WITNESS_CAP: u32 = 64;

/// Smallest `m`, then smallest integer `v1` with `c < v1 / m < b`.
pub fn witness_interval_point(c: &Rational, b: u64, cap: u32) -> Option<(u32, u32)> {
    (1..=cap).find_map(|m| {
        let v1 = (c * int(m as i64)).floor().to_integer() + BigInt::one();
        (v1 < BigInt::from(b) * m).then(|| (m, v1.to_u32().expect("bounded by b m")))
    })
}

pub fn lemma_witness(model: &Model, flag: &FlagSpec, c: &Rational, cap: u32) -> Result<LemmaWitness> {
    let FlagSpec::Curve { param, .. } = flag else {
        return Err(Error::Mismatch("lemma witnesses need a curve flag".into()));
    };
    let val = FlagValuation::new(model, flag)?;
    let b = restriction_degree(model, flag)?;
    if !c.is_positive() || *c >= int(b as i64) {
        return Err(Error::InvalidArgument(format!("target c = {c} must lie in the open interval (0, {b})")));
    }
    let (m, v1) = witness_interval_point(c, b, cap)
        .ok_or_else(|| Error::SearchBound(format!("no level m <= {cap} has v1/m in ({c}, {b})")))?;
    let Model::Projective(p) = model else { unreachable!("curve flags are projective") };
    let tau = MultiPoly::monomial(vec![m * b as u32 - v1, v1]);
    for power in 1..=cap {
        let j = power * m;
        let top = b as u32 * j;
        let target_exp = power * v1;
        let mut target = vec![Rational::zero(); top as usize + 1];
        target[target_exp as usize] = Rational::one();
        let rt = restriction_matrix(model, flag, j)?.transpose();
        let Some(x) = gauss_solve(&rt, &QVector::new(target)?)? else { continue };
        let lifted = p
            .monomials(j)
            .iter()
            .zip(x.coords())
            .fold(MultiPoly::zero(p.num_vars()), |acc, (mono, coef)| acc.add(&mono.scale(coef)));
        if pullback(&lifted, param)? != tau.pow(power) {
            return Err(Error::Guard("lifted section does not restrict to tau^N".into()));
        }
        let valuation = val.value(&Section::Form(lifted.clone()), j)?;
        let mut expected = vec![0; val.dim()];
        expected[0] = power * v1;
        if valuation != expected {
            return Err(Error::Guard(format!("lifted section has value {valuation:?}, expected {expected:?}")));
        }
        return Ok(LemmaWitness { c: c.clone(), b, m, v1, power, tau, lifted, valuation });
    }
    Err(Error::SearchBound(format!("tau^N did not lift for any N <= {cap}")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeRow {
    pub k: u32,
    pub hilbert_dim: u64,
    /// `dim H^0(L^k) / k^n`.
    pub normalized_dim: Rational,
    /// Volume of the body truncated at level `k`, when computed.
    pub volume: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeTable {
    pub n: usize,
    pub rows: Vec<VolumeRow>,
}

impl VolumeTable {
    /// CSV with columns `k,dim_over_k_pow_n,body_volume`, plus display-only
    /// decimal columns when requested. Uncomputed volumes are empty cells.
    pub fn to_csv(&self, decimal: bool) -> String {
        let mut w = csv::Writer::from_writer(vec![]);
        let mut header = vec!["k", "dim_over_k_pow_n", "body_volume"];
        if decimal {
            header.extend(["dim_over_k_pow_n_decimal", "body_volume_decimal"]);
        }
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let vol = r.volume.as_ref().map(Rational::to_string).unwrap_or_default();
            let mut rec = vec![r.k.to_string(), r.normalized_dim.to_string(), vol];
            if decimal {
                rec.push(format!("{:.6}", crate::linalg::to_f64_lossy(&r.normalized_dim)));
                rec.push(
                    r.volume.as_ref().map(|v| format!("{:.6}", crate::linalg::to_f64_lossy(v))).unwrap_or_default(),
                );
            }
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "k": r.k,
                    "hilbert_dim": r.hilbert_dim,
                    "dim_over_k_pow_n": r.normalized_dim.to_string(),
                    "body_volume": r.volume.as_ref().map(Rational::to_string),
                })
            })
            .collect();
        serde_json::to_string(&serde_json::json!({ "n": self.n, "rows": rows })).expect("json")
    }
}

/// Rows `(k, dim H^0(L^k) / k^n, vol body_k)` for `k = 1..=max_level`. Body
/// volumes are computed for `k <= body_levels` only.
pub fn volume_vs_hilbert(model: &Model, flag: &FlagSpec, max_level: u32, body_levels: u32) -> Result<VolumeTable> {
    if max_level == 0 {
        return Err(Error::InvalidArgument("max level must be >= 1".into()));
    }
    let n = model.dim();
    let computed = body_levels.min(max_level);
    let sample = if computed > 0 { Some(enumerate_semigroup(model, flag, computed)?) } else { None };
    let mut hull_pts: Vec<QVector> = vec![];
    let mut rows = vec![];
    for k in 1..=max_level {
        let dim = hilbert_dim(model, k)?;
        let normalized_dim = int(dim as i64) / num_traits::pow(int(k as i64), n);
        let volume = match sample.as_ref().and_then(|s| s.levels.get(&k)) {
            Some(values) => {
                hull_pts.extend(values.iter().map(|v| normalized(k, v)));
                let body = convex_hull(&hull_pts)?;
                hull_pts = body.vertices().to_vec();
                Some(body.volume())
            }
            None => None,
        };
        rows.push(VolumeRow { k, hilbert_dim: dim, normalized_dim, volume });
    }
    Ok(VolumeTable { n, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub kind: &'static str,
    pub f: String,
    pub g: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub trials: usize,
    pub seed: u64,
    pub products_checked: usize,
    pub sums_checked: usize,
    pub strict_sums: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Levels used for random sections in the axiom check.
pub const AXIOM_MAX_LEVEL: u32 = 2;
/// Basis elements combined into one random section.
pub const AXIOM_MAX_TERMS: usize = 4;

fn random_section(rng: &mut ChaCha8Rng, basis: &[Section]) -> Section {
    let count = rng.gen_range(1..=AXIOM_MAX_TERMS.min(basis.len()));
    let picks: Vec<&Section> = basis.choose_multiple(rng, count).collect();
    let mut acc = picks[0].scale(&Rational::zero());
    for s in picks {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3..=3);
        }
        acc = acc.add(&s.scale(&int(c))).expect("same model");
    }
    acc
}

/// Tests `v(fg) = v(f) + v(g)` and `v(f + g) >= min(v(f), v(g))` on seeded
/// random sections.
pub fn valuation_axiom_check(model: &Model, flag: &FlagSpec, trials: usize, seed: u64) -> Result<AxiomReport> {
    let val = FlagValuation::new(model, flag)?;
    let bases: Vec<Vec<Section>> =
        (1..=AXIOM_MAX_LEVEL).map(|k| basis_of_level(model, k).map(|b| b.elements)).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        AxiomReport { trials, seed, products_checked: 0, sums_checked: 0, strict_sums: 0, violations: vec![] };
    for _ in 0..trials {
        let kf = rng.gen_range(1..=AXIOM_MAX_LEVEL);
        let kg = rng.gen_range(1..=AXIOM_MAX_LEVEL);
        let f = random_section(&mut rng, &bases[kf as usize - 1]);
        let g = random_section(&mut rng, &bases[kg as usize - 1]);
        let h = random_section(&mut rng, &bases[kf as usize - 1]);
        let vf = val.value(&f, kf)?;
        let vg = val.value(&g, kg)?;
        let vfg = val.value(&f.multiply(&g)?, kf + kg)?;
        let expected: Value = vf.iter().zip(&vg).map(|(a, b)| a + b).collect();
        report.products_checked += 1;
        if vfg != expected {
            report.violations.push(AxiomViolation {
                kind: "multiplicativity",
                f: f.to_string(),
                g: g.to_string(),
                detail: format!("v(fg) = {vfg:?}, v(f) + v(g) = {expected:?}"),
            });
        }
        let sum = f.add(&h)?;
        if !sum.is_zero() {
            let vh = val.value(&h, kf)?;
            let vs = val.value(&sum, kf)?;
            let lower = if cmp_computation_order(&vf, &vh) == Ordering::Greater { &vh } else { &vf };
            report.sums_checked += 1;
            match cmp_computation_order(&vs, lower) {
                Ordering::Less => report.violations.push(AxiomViolation {
                    kind: "ultrametric",
                    f: f.to_string(),
                    g: h.to_string(),
                    detail: format!("v(f + g) = {vs:?} is below min(v(f), v(g)) = {lower:?}"),
                }),
                Ordering::Greater => report.strict_sums += 1,
                Ordering::Equal => {}
            }
        }
    }
    Ok(report)
}
