//! Exact rational scalars, vectors and matrices.
//!
//! Everything here is big-integer rational arithmetic. There is no floating
//! point on any computation path; the only conversion to `f64` is the
//! display-only helper [`to_f64_lossy`].

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"` or an integer literal with optional sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    let r = Rational::from_str(t).map_err(|_| Error::Parse(format!("bad rational literal {t:?}")))?;
    Ok(r)
}

/// Canonical `"p/q"` / `"p"` rendering.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64_lossy(r: &Rational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Serde adapter that stores a [`Rational`] as its canonical string.
pub mod rational_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Str(String),
            Int(i64),
        }
        match Lit::deserialize(d)? {
            Lit::Str(s) => parse_rational(&s).map_err(serde::de::Error::custom),
            Lit::Int(i) => Ok(int(i)),
        }
    }
}

/// Serde adapter for a list of rationals as strings.
pub mod rational_vec_string {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "super::rational_string")] Rational);
        let v: Vec<W> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

/// A point of `Q^n` with `n >= 1`. Ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("vectors must have dimension >= 1".into()));
        }
        Ok(QVector(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Result<Self> {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        dot(&self.0, &other.0)
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::dim(cols, r.len()));
            }
            data.extend(r);
        }
        Ok(QMatrix { rows: nrows, cols, data })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::dim(self.cols, x.len()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j) - &f * self.get(r, j);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Column indices of a maximal independent set of columns (the RREF pivots).
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.clone().rref()
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::dim(self.rows, self.cols));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// Solves `A x = b` exactly. Returns `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn gauss_solve(a: &QMatrix, b: &QVector) -> Result<Option<QVector>> {
    if b.dim() != a.rows {
        return Err(Error::dim(a.rows, b.dim()));
    }
    if a.cols == 0 {
        return Err(Error::InvalidArgument("matrix has no columns".into()));
    }
    let mut aug = QMatrix::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, b[i].clone());
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, a.cols).clone();
    }
    QVector::new(x).map(Some)
}

pub fn rank(a: &QMatrix) -> usize {
    a.rank()
}

/// Outcome of an exact convex-membership query, with a checkable certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HullMembership {
    /// Nonnegative coefficients summing to one, one per generator.
    Inside { coefficients: Vec<Rational> },
    /// Every generator `g` satisfies `normal . g <= bound` while the query
    /// point has `normal . p > bound`.
    Outside { normal: QVector, bound: Rational },
}

impl HullMembership {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullMembership::Inside { .. })
    }

    /// Re-checks the certificate against the original query.
    pub fn verify(&self, p: &QVector, generators: &[QVector]) -> bool {
        match self {
            HullMembership::Inside { coefficients } => {
                if coefficients.len() != generators.len() || coefficients.iter().any(Signed::is_negative) {
                    return false;
                }
                let total: Rational = coefficients.iter().sum();
                if !total.is_one() {
                    return false;
                }
                let mut acc = vec![Rational::zero(); p.dim()];
                for (c, g) in coefficients.iter().zip(generators) {
                    for (a, x) in acc.iter_mut().zip(g.coords()) {
                        *a += c * x;
                    }
                }
                acc == p.coords()
            }
            HullMembership::Outside { normal, bound } => {
                generators.iter().all(|g| &normal.dot(g) <= bound) && &normal.dot(p) > bound
            }
        }
    }
}

/// Decides `p ∈ conv(generators)` exactly by a phase-one simplex on
/// `sum λ_j g_j = p, sum λ_j = 1, λ >= 0` with Bland's rule.
pub fn in_convex_hull(p: &QVector, generators: &[QVector]) -> Result<HullMembership> {
    if generators.is_empty() {
        return Err(Error::EmptyInput("convex hull generators"));
    }
    let dim = p.dim();
    if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
        return Err(Error::dim(dim, g.dim()));
    }
    let m = generators.len();
    let rows = dim + 1;
    let mut a = QMatrix::zeros(rows, m);
    for (j, g) in generators.iter().enumerate() {
        for i in 0..dim {
            a.set(i, j, g[i].clone());
        }
        a.set(dim, j, Rational::one());
    }
    let mut b: Vec<Rational> = p.coords().to_vec();
    b.push(Rational::one());

    let lp = Phase1::solve(&a, &b);
    if lp.objective.is_zero() {
        let mut coefficients = vec![Rational::zero(); m];
        for (i, &var) in lp.basis.iter().enumerate() {
            if var < m {
                coefficients[var] = lp.tableau.get(i, lp.rhs_col()).clone();
            }
        }
        Ok(HullMembership::Inside { coefficients })
    } else {
        let y = lp.farkas_ray();
        let normal = QVector::new(y[..dim].to_vec())?;
        let bound = -y[dim].clone();
        Ok(HullMembership::Outside { normal, bound })
    }
}

/// Phase-one simplex tableau for `A x = b, x >= 0`.
struct Phase1 {
    tableau: QMatrix,
    /// Reduced costs for every structural and artificial column.
    reduced: Vec<Rational>,
    basis: Vec<usize>,
    signs: Vec<bool>,
    structural: usize,
    objective: Rational,
}

impl Phase1 {
    fn rhs_col(&self) -> usize {
        self.tableau.ncols() - 1
    }

    fn solve(a: &QMatrix, b: &[Rational]) -> Phase1 {
        let rows = a.nrows();
        let m = a.ncols();
        let width = m + rows + 1;
        let mut t = QMatrix::zeros(rows, width);
        let mut signs = Vec::with_capacity(rows);
        for (i, bi) in b.iter().enumerate() {
            let flip = bi.is_negative();
            signs.push(flip);
            for j in 0..m {
                let v = if flip { -a.get(i, j) } else { a.get(i, j).clone() };
                t.set(i, j, v);
            }
            t.set(i, m + i, Rational::one());
            t.set(i, width - 1, b[i].abs());
        }
        let mut reduced = vec![Rational::zero(); m + rows];
        for (j, rc) in reduced.iter_mut().enumerate() {
            let cost = if j >= m { Rational::one() } else { Rational::zero() };
            let col_sum: Rational = (0..rows).map(|i| t.get(i, j).clone()).sum();
            *rc = cost - col_sum;
        }
        let mut objective: Rational = (0..rows).map(|i| t.get(i, width - 1).clone()).sum();
        let mut basis: Vec<usize> = (m..m + rows).collect();

        // Bland: lowest-index entering column, lowest-index leaving variable on ties.
        while let Some(enter) = reduced.iter().position(Signed::is_negative) {
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..rows {
                let coef = t.get(i, enter);
                if coef.is_positive() {
                    let ratio = t.get(i, width - 1) / coef;
                    let better = match &leave {
                        None => true,
                        Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            // Phase one is bounded below by zero, so an entering column always has a leaving row.
            let (r, _) = leave.expect("phase-one objective is bounded");
            let inv = t.get(r, enter).recip();
            for j in 0..width {
                let v = t.get(r, j) * &inv;
                t.set(r, j, v);
            }
            for i in 0..rows {
                if i != r && !t.get(i, enter).is_zero() {
                    let f = t.get(i, enter).clone();
                    for j in 0..width {
                        let v = t.get(i, j) - &f * t.get(r, j);
                        t.set(i, j, v);
                    }
                }
            }
            let f = reduced[enter].clone();
            for (j, rc) in reduced.iter_mut().enumerate() {
                *rc -= &f * t.get(r, j);
            }
            objective += &f * t.get(r, width - 1);
            basis[r] = enter;
        }
        Phase1 { tableau: t, reduced, basis, signs, structural: m, objective }
    }

    /// Dual vector `y` in the original (unsigned) row space with
    /// `y . A_j <= 0` for every column and `y . b > 0`.
    fn farkas_ray(&self) -> Vec<Rational> {
        (0..self.signs.len())
            .map(|i| {
                let y = Rational::one() - &self.reduced[self.structural + i];
                if self.signs[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }
}
