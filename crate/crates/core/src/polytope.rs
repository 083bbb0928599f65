//! Vertex-represented rational polytopes.
//!
//! Hulls are computed incrementally (beneath-beyond) inside the affine hull
//! of the input, using exact orientation tests against a triangulated
//! boundary. A candidate point is kept as a vertex exactly when the facet
//! hyperplanes through it have normals of full rank.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, in_convex_hull, parse_rational, QMatrix, QVector, Rational};

/// Largest ambient dimension the hull code accepts.
pub const MAX_AMBIENT_DIM: usize = 4;

/// A polytope given by its vertices, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    vertices: Vec<QVector>,
    ambient_dim: usize,
}

impl VPolytope {
    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// The polytope with these points as vertices; points that are not
    /// vertices are dropped.
    pub fn from_points(points: &[QVector]) -> Result<Self> {
        convex_hull(points)
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        affine_frame(&self.vertices).dim()
    }

    pub fn volume(&self) -> Rational {
        volume(self)
    }

    pub fn scale(&self, c: &Rational) -> Result<VPolytope> {
        scale(self, c)
    }

    pub fn equals(&self, other: &VPolytope) -> Result<bool> {
        equals(self, other)
    }

    pub fn contains(&self, other: &VPolytope) -> Result<bool> {
        contains(self, other)
    }

    pub fn contains_point(&self, p: &QVector) -> Result<bool> {
        if p.dim() != self.ambient_dim {
            return Err(Error::dim(self.ambient_dim, p.dim()));
        }
        Ok(in_convex_hull(p, &self.vertices)?.is_inside())
    }

    /// `max_x (x . direction)` over the polytope.
    pub fn max_along(&self, direction: &QVector) -> Rational {
        self.vertices.iter().map(|v| v.dot(direction)).max().expect("polytopes are nonempty")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polytope serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<VPolytope> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<Vec<String>>,
}

impl Serialize for VPolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson { dim: self.ambient_dim, vertices: self.vertices.iter().map(QVector::to_strings).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VPolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolytopeJson::deserialize(d)?;
        let points = raw
            .vertices
            .iter()
            .map(|v| {
                let coords = v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                QVector::new(coords)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let p = convex_hull(&points).map_err(D::Error::custom)?;
        if p.ambient_dim != raw.dim {
            return Err(D::Error::custom(format!("declared dim {} but vertices have dim {}", raw.dim, p.ambient_dim)));
        }
        Ok(p)
    }
}

fn check_dims(points: &[QVector]) -> Result<usize> {
    let dim = points.first().ok_or(Error::EmptyInput("point set"))?.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::dim(dim, p.dim()));
    }
    Ok(dim)
}

/// Minimal vertex set of `conv(points)`, canonically ordered.
pub fn convex_hull(points: &[QVector]) -> Result<VPolytope> {
    let ambient_dim = check_dims(points)?;
    if ambient_dim > MAX_AMBIENT_DIM {
        return Err(Error::InvalidArgument(format!(
            "ambient dimension {ambient_dim} exceeds supported maximum {MAX_AMBIENT_DIM}"
        )));
    }
    let pts: Vec<QVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let hull = Hull::build(&pts);
    let mut vertices: Vec<QVector> = hull.vertex_indices().into_iter().map(|i| pts[i].clone()).collect();
    vertices.sort();
    Ok(VPolytope { vertices, ambient_dim })
}

/// Affine coordinates on the affine hull of a point set: the points are
/// projected onto a subset of coordinates that is injective on the hull.
struct AffineFrame {
    coords: Vec<usize>,
}

impl AffineFrame {
    fn dim(&self) -> usize {
        self.coords.len()
    }

    fn project(&self, p: &QVector) -> Vec<Rational> {
        self.coords.iter().map(|&c| p[c].clone()).collect()
    }
}

fn affine_frame(points: &[QVector]) -> AffineFrame {
    let base = &points[0];
    let rows: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(base).into_coords()).collect();
    if rows.is_empty() {
        return AffineFrame { coords: vec![] };
    }
    let m = QMatrix::from_rows(rows).expect("points share dimension");
    AffineFrame { coords: m.pivot_columns() }
}

#[derive(Debug, Clone)]
struct Facet {
    verts: Vec<usize>,
    normal: Vec<Rational>,
    offset: Rational,
}

impl Facet {
    fn side(&self, p: &[Rational]) -> std::cmp::Ordering {
        dot(&self.normal, p).cmp(&self.offset)
    }
}

/// Normal of the hyperplane through `r` points of `Q^r`, via cofactors.
fn hyperplane_normal(points: &[&[Rational]]) -> Vec<Rational> {
    let r = points[0].len();
    let diffs: Vec<Vec<Rational>> =
        points[1..].iter().map(|p| p.iter().zip(points[0]).map(|(a, b)| a - b).collect()).collect();
    (0..r)
        .map(|skip| {
            if r == 1 {
                return Rational::one();
            }
            let minor: Vec<Vec<Rational>> = diffs
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, v)| v.clone()).collect())
                .collect();
            let det = QMatrix::from_rows(minor).and_then(|m| m.determinant()).expect("square minor");
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

struct Hull {
    frame_dim: usize,
    projected: Vec<Vec<Rational>>,
    facets: Vec<Facet>,
    /// Index of the extreme points when the affine hull has dimension <= 1.
    low_dim: Vec<usize>,
}

impl Hull {
    fn build(points: &[QVector]) -> Hull {
        let frame = affine_frame(points);
        let r = frame.dim();
        let projected: Vec<Vec<Rational>> = points.iter().map(|p| frame.project(p)).collect();
        let mut hull = Hull { frame_dim: r, projected, facets: vec![], low_dim: vec![] };
        match r {
            0 => hull.low_dim = vec![0],
            1 => {
                let key = |i: &usize| hull.projected[*i][0].clone();
                let lo = (0..points.len()).min_by_key(key).expect("nonempty");
                let hi = (0..points.len()).max_by_key(key).expect("nonempty");
                hull.low_dim = vec![lo, hi];
            }
            _ => hull.beneath_beyond(),
        }
        hull
    }

    fn initial_simplex(&self) -> Vec<usize> {
        let r = self.frame_dim;
        let mut chosen = vec![0];
        let mut rows: Vec<Vec<Rational>> = vec![];
        for i in 1..self.projected.len() {
            let d: Vec<Rational> = self.projected[i].iter().zip(&self.projected[0]).map(|(a, b)| a - b).collect();
            let mut trial = rows.clone();
            trial.push(d);
            if QMatrix::from_rows(trial.clone()).expect("rows share dim").rank() == trial.len() {
                rows = trial;
                chosen.push(i);
                if chosen.len() == r + 1 {
                    break;
                }
            }
        }
        chosen
    }

    fn make_facet(&self, verts: Vec<usize>, interior: &[Rational]) -> Facet {
        let pts: Vec<&[Rational]> = verts.iter().map(|&i| self.projected[i].as_slice()).collect();
        let mut normal = hyperplane_normal(&pts);
        let mut offset = dot(&normal, pts[0]);
        if dot(&normal, interior) > offset {
            normal.iter_mut().for_each(|x| *x = -x.clone());
            offset = -offset;
        }
        let mut verts = verts;
        verts.sort_unstable();
        Facet { verts, normal, offset }
    }

    fn beneath_beyond(&mut self) {
        let r = self.frame_dim;
        let simplex = self.initial_simplex();
        let denom = Rational::from_integer((r as i64 + 1).into());
        let interior: Vec<Rational> =
            (0..r).map(|c| simplex.iter().map(|&i| self.projected[i][c].clone()).sum::<Rational>() / &denom).collect();
        let mut facets: Vec<Facet> = (0..simplex.len())
            .map(|skip| {
                let verts = simplex.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
                self.make_facet(verts, &interior)
            })
            .collect();
        let in_simplex: BTreeSet<usize> = simplex.iter().copied().collect();
        for p in 0..self.projected.len() {
            if in_simplex.contains(&p) {
                continue;
            }
            let point = &self.projected[p];
            let (visible, hidden): (Vec<Facet>, Vec<Facet>) =
                facets.into_iter().partition(|f| f.side(point) == std::cmp::Ordering::Greater);
            facets = hidden;
            if visible.is_empty() {
                continue;
            }
            // Ridges of visible facets seen exactly once form the horizon.
            let mut ridge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for f in &visible {
                for skip in 0..f.verts.len() {
                    let ridge: Vec<usize> =
                        f.verts.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
                    *ridge_count.entry(ridge).or_default() += 1;
                }
            }
            for (ridge, count) in ridge_count {
                if count == 1 {
                    let mut verts = ridge;
                    verts.push(p);
                    let f = self.make_facet(verts, &interior);
                    facets.push(f);
                }
            }
        }
        self.facets = facets;
    }

    fn vertex_indices(&self) -> Vec<usize> {
        if self.frame_dim <= 1 {
            let mut v = self.low_dim.clone();
            v.dedup();
            return v;
        }
        let candidates: BTreeSet<usize> = self.facets.iter().flat_map(|f| f.verts.iter().copied()).collect();
        candidates
            .into_iter()
            .filter(|&i| {
                let p = &self.projected[i];
                let normals: Vec<Vec<Rational>> = self
                    .facets
                    .iter()
                    .filter(|f| f.side(p) == std::cmp::Ordering::Equal)
                    .map(|f| f.normal.clone())
                    .collect();
                QMatrix::from_rows(normals).expect("normals share dim").rank() == self.frame_dim
            })
            .collect()
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * linalg::int(k))
}

/// Exact Euclidean volume; zero when the polytope is not full-dimensional.
pub fn volume(p: &VPolytope) -> Rational {
    let n = p.ambient_dim;
    let hull = Hull::build(&p.vertices);
    if hull.frame_dim < n {
        return Rational::zero();
    }
    if n == 1 {
        let lo = &hull.projected[hull.low_dim[0]][0];
        let hi = &hull.projected[hull.low_dim[1]][0];
        return hi - lo;
    }
    // Cone each boundary simplex from a base vertex; simplices through the base are flat.
    let base = &p.vertices[0].coords();
    let total = hull.facets.iter().fold(Rational::zero(), |acc, f| {
        let rows: Vec<Vec<Rational>> = f
            .verts
            .iter()
            .map(|&i| p.vertices[i].coords().iter().zip(base.iter()).map(|(a, b)| a - b).collect())
            .collect();
        let det = QMatrix::from_rows(rows).and_then(|m| m.determinant()).expect("square");
        acc + det.abs()
    });
    total / factorial(n)
}

pub fn scale(p: &VPolytope, c: &Rational) -> Result<VPolytope> {
    if c.is_negative() {
        return Err(Error::InvalidArgument(format!("scale factor must be nonnegative, got {c}")));
    }
    let pts: Vec<QVector> = p.vertices.iter().map(|v| v.scale(c)).collect();
    convex_hull(&pts)
}

pub fn equals(p: &VPolytope, q: &VPolytope) -> Result<bool> {
    if p.ambient_dim != q.ambient_dim {
        return Err(Error::dim(p.ambient_dim, q.ambient_dim));
    }
    Ok(p.vertices == q.vertices)
}

/// Whether `q ⊆ p`.
pub fn contains(p: &VPolytope, q: &VPolytope) -> Result<bool> {
    if p.ambient_dim != q.ambient_dim {
        return Err(Error::dim(p.ambient_dim, q.ambient_dim));
    }
    for v in &q.vertices {
        if !in_convex_hull(v, &p.vertices)?.is_inside() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A closed half-space `normal . x <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: QVector,
    pub bound: Rational,
}

impl HalfSpace {
    pub fn contains(&self, x: &QVector) -> bool {
        self.normal.dot(x) <= self.bound
    }
}

/// Facet inequalities of a full-dimensional polytope of dimension <= 3, by
/// exhaustive search over vertex subsets.
pub fn facet_inequalities(p: &VPolytope) -> Result<Vec<HalfSpace>> {
    let n = p.ambient_dim;
    if n > 3 {
        return Err(Error::InvalidArgument(format!("facet search supports dimension <= 3, got {n}")));
    }
    if p.affine_dim() != n {
        return Err(Error::InvalidArgument("facet search needs a full-dimensional polytope".into()));
    }
    let verts = &p.vertices;
    let mut found: BTreeSet<(Vec<Rational>, Rational)> = BTreeSet::new();
    for subset in combinations(verts.len(), n) {
        let pts: Vec<&[Rational]> = subset.iter().map(|&i| verts[i].coords()).collect();
        let normal = hyperplane_normal(&pts);
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        let offset = dot(&normal, pts[0]);
        let sides: BTreeSet<std::cmp::Ordering> = verts.iter().map(|v| dot(&normal, v.coords()).cmp(&offset)).collect();
        let outward = if !sides.contains(&std::cmp::Ordering::Greater) {
            (normal, offset)
        } else if !sides.contains(&std::cmp::Ordering::Less) {
            (normal.into_iter().map(|x| -x).collect(), -offset)
        } else {
            continue;
        };
        found.insert(normalize_halfspace(outward));
    }
    found.into_iter().map(|(normal, bound)| Ok(HalfSpace { normal: QVector::new(normal)?, bound })).collect()
}

/// Scales a half-space so that its first nonzero normal entry has absolute value one.
fn normalize_halfspace((normal, bound): (Vec<Rational>, Rational)) -> (Vec<Rational>, Rational) {
    let lead = normal.iter().find(|x| !x.is_zero()).expect("nonzero normal").abs();
    (normal.iter().map(|x| x / &lead).collect(), bound / lead)
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut vec![], &mut out);
    out
}
