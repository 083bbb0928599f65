//! Graded section rings of concrete polarized varieties.
//!
//! * [`ProjectiveModel`]: `P^n` with `O(d)`; level-`k` sections are forms of
//!   degree `d k` in `n + 1` variables.
//! * [`ToricModel`]: the toric variety of a lattice polytope `P`; level-`k`
//!   sections are spanned by the characters at lattice points of `k P`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::flags::FlagSpec;
use crate::linalg::{int, QMatrix, QVector, Rational};
use crate::poly::{pullback, MultiPoly};
use crate::polytope::{convex_hull, facet_inequalities, HalfSpace, VPolytope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectiveModel {
    n: usize,
    d: u32,
}

impl ProjectiveModel {
    pub fn new(n: usize, d: u32) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Config(format!("projective model needs n >= 1 and d >= 1, got n={n}, d={d}")));
        }
        Ok(ProjectiveModel { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn num_vars(&self) -> usize {
        self.n + 1
    }

    /// All monomials of degree `d k`, in descending lexicographic order.
    pub fn monomials(&self, k: u32) -> Vec<MultiPoly> {
        let mut out = vec![];
        let mut cur = vec![0u32; self.n + 1];
        fill_monomials(0, self.d * k, &mut cur, &mut out);
        out
    }
}

fn fill_monomials(i: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiPoly>) {
    if i + 1 == cur.len() {
        cur[i] = remaining;
        out.push(MultiPoly::monomial(cur.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        cur[i] = a;
        fill_monomials(i + 1, remaining - a, cur, out);
    }
    cur[i] = 0;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricModel {
    polytope: VPolytope,
    facets: Vec<HalfSpace>,
}

impl ToricModel {
    /// A full-dimensional lattice polytope of dimension 1, 2 or 3.
    pub fn new(vertices: &[Vec<i64>]) -> Result<Self> {
        let pts = vertices.iter().map(|v| QVector::from_ints(v)).collect::<Result<Vec<_>>>()?;
        let polytope = convex_hull(&pts).map_err(|e| Error::Config(format!("toric polytope: {e}")))?;
        let n = polytope.ambient_dim();
        if n > 3 {
            return Err(Error::Config(format!("toric models support dimension <= 3, got {n}")));
        }
        if polytope.affine_dim() != n {
            return Err(Error::Config("toric polytope must be full-dimensional".into()));
        }
        let facets = facet_inequalities(&polytope)?;
        Ok(ToricModel { polytope, facets })
    }

    pub fn polytope(&self) -> &VPolytope {
        &self.polytope
    }

    pub fn n(&self) -> usize {
        self.polytope.ambient_dim()
    }

    /// The model of the `m`-th power: the dilated polytope.
    pub fn dilate(&self, m: u32) -> Result<ToricModel> {
        let verts: Vec<Vec<i64>> = self
            .polytope
            .vertices()
            .iter()
            .map(|v| v.coords().iter().map(|c| integer_value(&(c * int(m as i64)))).collect())
            .collect();
        ToricModel::new(&verts)
    }

    /// Whether `x` lies in `k P`.
    pub fn in_dilate(&self, x: &[i64], k: u32) -> bool {
        let q = QVector::from_ints(x).expect("nonempty lattice point");
        let k = int(k as i64);
        self.facets.iter().all(|h| h.normal.dot(&q) <= &h.bound * &k)
    }

    /// Lattice points of `k P` by enumerating the bounding box, in ascending
    /// lexicographic order.
    pub fn lattice_points(&self, k: u32) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for v in self.polytope.vertices() {
            for i in 0..n {
                let c = integer_value(&v[i]) * k as i64;
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        let mut out = vec![];
        let mut cur = lo.clone();
        loop {
            if self.in_dilate(&cur, k) {
                out.push(cur.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    cur[i + 1..].copy_from_slice(&lo[i + 1..]);
                    break;
                }
            }
        }
    }
}

fn integer_value(r: &Rational) -> i64 {
    assert!(r.is_integer(), "expected an integral coordinate, got {r}");
    i64::try_from(r.to_integer()).expect("coordinate fits in i64")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Projective(ProjectiveModel),
    Toric(ToricModel),
}

impl Model {
    pub fn projective(n: usize, d: u32) -> Result<Model> {
        ProjectiveModel::new(n, d).map(Model::Projective)
    }

    pub fn toric(vertices: &[Vec<i64>]) -> Result<Model> {
        ToricModel::new(vertices).map(Model::Toric)
    }

    /// Dimension of the variety.
    pub fn dim(&self) -> usize {
        match self {
            Model::Projective(p) => p.n,
            Model::Toric(t) => t.n(),
        }
    }

    /// The model of `L^m`.
    pub fn power(&self, m: u32) -> Result<Model> {
        if m == 0 {
            return Err(Error::InvalidArgument("power must be >= 1".into()));
        }
        match self {
            Model::Projective(p) => Model::projective(p.n, p.d * m),
            Model::Toric(t) => t.dilate(m).map(Model::Toric),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Projective(p) => write!(f, "P^{} with O({})", p.n, p.d),
            Model::Toric(t) => write!(f, "toric variety of {}", t.polytope.to_json()),
        }
    }
}

/// A finite sum of characters `sum c_m chi^m` on a torus.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CharacterSum {
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl CharacterSum {
    pub fn character(m: Vec<i64>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Rational::one());
        CharacterSum { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

/// A section of some power of the line bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Section {
    Form(MultiPoly),
    Characters(CharacterSum),
}

impl Section {
    pub fn is_zero(&self) -> bool {
        match self {
            Section::Form(p) => p.is_zero(),
            Section::Characters(c) => c.is_zero(),
        }
    }

    pub fn as_form(&self) -> Option<&MultiPoly> {
        match self {
            Section::Form(p) => Some(p),
            Section::Characters(_) => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Section {
        match self {
            Section::Form(p) => Section::Form(p.scale(c)),
            Section::Characters(s) => {
                let mut out = CharacterSum::default();
                for (m, x) in s.terms() {
                    out.add_term(m.clone(), x * c);
                }
                Section::Characters(out)
            }
        }
    }

    pub fn add(&self, other: &Section) -> Result<Section> {
        match (self, other) {
            (Section::Form(a), Section::Form(b)) if a.num_vars() == b.num_vars() => Ok(Section::Form(a.add(b))),
            (Section::Characters(a), Section::Characters(b)) => {
                let mut out = a.clone();
                for (m, x) in b.terms() {
                    out.add_term(m.clone(), x.clone());
                }
                Ok(Section::Characters(out))
            }
            _ => Err(Error::InvalidArgument("adding sections of different models".into())),
        }
    }

    pub fn sub(&self, other: &Section) -> Result<Section> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Product of sections of levels `k1` and `k2`, a section of level `k1 + k2`.
    pub fn multiply(&self, other: &Section) -> Result<Section> {
        match (self, other) {
            (Section::Form(a), Section::Form(b)) if a.num_vars() == b.num_vars() => Ok(Section::Form(a.multiply(b))),
            (Section::Characters(a), Section::Characters(b)) => {
                let mut out = CharacterSum::default();
                for (ma, xa) in a.terms() {
                    for (mb, xb) in b.terms() {
                        let m = ma.iter().zip(mb).map(|(p, q)| p + q).collect();
                        out.add_term(m, xa * xb);
                    }
                }
                Ok(Section::Characters(out))
            }
            _ => Err(Error::InvalidArgument("multiplying sections of different models".into())),
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::Form(p) => write!(f, "{p}"),
            Section::Characters(c) => {
                if c.is_zero() {
                    return f.write_str("0");
                }
                let parts: Vec<String> = c
                    .terms()
                    .map(|(m, x)| {
                        let pt = m.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
                        if x.is_one() {
                            format!("chi({pt})")
                        } else {
                            format!("{x}*chi({pt})")
                        }
                    })
                    .collect();
                f.write_str(&parts.join(" + "))
            }
        }
    }
}

/// A deterministic basis of the level-`k` section space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionBasis {
    pub level: u32,
    pub elements: Vec<Section>,
}

impl SectionBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn check_level(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("levels start at k = 1".into()));
    }
    Ok(())
}

pub fn basis_of_level(model: &Model, k: u32) -> Result<SectionBasis> {
    check_level(k)?;
    let elements = match model {
        Model::Projective(p) => p.monomials(k).into_iter().map(Section::Form).collect(),
        Model::Toric(t) => {
            t.lattice_points(k).into_iter().map(|m| Section::Characters(CharacterSum::character(m))).collect()
        }
    };
    Ok(SectionBasis { level: k, elements })
}

fn binomial(n: u64, r: u64) -> Result<u64> {
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).map_err(|_| Error::InvalidArgument("dimension overflows u64".into()))
}

/// `dim H^0(X, L^k)`.
pub fn hilbert_dim(model: &Model, k: u32) -> Result<u64> {
    check_level(k)?;
    match model {
        Model::Projective(p) => binomial(p.n as u64 + p.d as u64 * k as u64, p.n as u64),
        Model::Toric(t) => Ok(t.lattice_points(k).len() as u64),
    }
}

/// `b = deg L|_{X_1}`.
pub fn restriction_degree(model: &Model, flag: &FlagSpec) -> Result<u64> {
    match (model, flag) {
        (Model::Projective(p), FlagSpec::Coordinate { .. }) => Ok(p.d as u64),
        (Model::Projective(p), FlagSpec::Curve { param, .. }) => {
            let b = p.d as u64 * param.degree() as u64;
            for s in p.monomials(1) {
                let pb = pullback(&s, param)?;
                if !pb.is_zero() && pb.homogeneous_degree() != Some(b as u32) {
                    return Err(Error::Guard(format!(
                        "pullback of {s} has degree {:?}, expected {b}",
                        pb.homogeneous_degree()
                    )));
                }
            }
            Ok(b)
        }
        (Model::Toric(t), FlagSpec::ToricVertex { vertex, edges }) => {
            let first = edges.first().ok_or_else(|| Error::Mismatch("toric flag without edges".into()))?;
            let w = QVector::from_ints(vertex)?;
            let e = QVector::from_ints(first)?;
            let mut len: Option<Rational> = None;
            for h in &t.facets {
                let rate = h.normal.dot(&e);
                if rate.is_positive() {
                    let cap = (&h.bound - h.normal.dot(&w)) / rate;
                    len = Some(match len {
                        Some(l) if l <= cap => l,
                        _ => cap,
                    });
                }
            }
            let len = len.ok_or_else(|| Error::Mismatch("first edge direction is unbounded".into()))?;
            if !len.is_integer() || !len.is_positive() {
                return Err(Error::Mismatch(format!("first edge has non-integral lattice length {len}")));
            }
            Ok(integer_value(&len) as u64)
        }
        _ => Err(Error::Mismatch(format!("flag {} does not apply to {model}", flag.variant_name()))),
    }
}

/// Matrix of the restriction map `R_j`: rows are the level-`j` monomials,
/// columns the coefficients of `t^0, ..., t^{b j}` of their pullbacks in the
/// chart `u = 1`.
pub fn restriction_matrix(model: &Model, flag: &FlagSpec, j: u32) -> Result<QMatrix> {
    check_level(j)?;
    let (Model::Projective(p), FlagSpec::Curve { param, .. }) = (model, flag) else {
        return Err(Error::Mismatch("restriction matrices need a projective model with a curve flag".into()));
    };
    let top = p.d * param.degree() * j;
    let rows = p
        .monomials(j)
        .iter()
        .map(|s| {
            let pb = pullback(s, param)?;
            Ok((0..=top).map(|i| pb.coeff(&[top - i, i])).collect())
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    QMatrix::from_rows(rows)
}
