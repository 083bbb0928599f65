//! Admissible flags `X_0 ⊆ X_1 ⊆ ... ⊆ X_n = X` and their validation.

use std::fmt;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{int, QMatrix, QVector};
use crate::models::{Model, Section};
use crate::poly::{pullback, quadric_rank, CurveParam, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlagSpec {
    /// Coordinate flag on `P^n`. With `order = [i_0, ..., i_n]`,
    /// `X_j = { z_{i_{j+1}} = ... = z_{i_n} = 0 }` and the flag point is the
    /// coordinate point where only `z_{i_0}` is nonzero.
    Coordinate { order: Vec<usize> },
    /// A plane curve `X_1 = { xi1 = 0 } ⊂ P^2` with a rational
    /// parametrization; the flag point is the image of `t = 0`.
    Curve { xi1: MultiPoly, param: CurveParam },
    /// A torus-fixed flag at a vertex of the moment polytope; `edges[i]` is
    /// the primitive direction of the edge housing coordinate `i + 1`.
    ToricVertex { vertex: Vec<i64>, edges: Vec<Vec<i64>> },
}

impl FlagSpec {
    pub fn coordinate(order: Vec<usize>) -> Self {
        FlagSpec::Coordinate { order }
    }

    /// A curve flag in `P^2`; `xi1` is a form in `z0, z1, z2` and `param`
    /// lists three binary forms in `u, t`.
    pub fn curve(xi1: &str, param: &[&str]) -> Result<Self> {
        Ok(FlagSpec::Curve { xi1: MultiPoly::parse(xi1, 3)?, param: CurveParam::parse(param)? })
    }

    pub fn toric_vertex(vertex: Vec<i64>, edges: Vec<Vec<i64>>) -> Self {
        FlagSpec::ToricVertex { vertex, edges }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            FlagSpec::Coordinate { .. } => "coordinate",
            FlagSpec::Curve { .. } => "curve",
            FlagSpec::ToricVertex { .. } => "toric_vertex",
        }
    }
}

impl fmt::Display for FlagSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlagSpec::Coordinate { order } => write!(f, "coordinate flag {order:?}"),
            FlagSpec::Curve { xi1, param } => {
                write!(f, "curve flag {{{xi1} = 0}} via [{}]", param.to_strings().join(" : "))
            }
            FlagSpec::ToricVertex { vertex, edges } => write!(f, "toric vertex flag at {vertex:?} along {edges:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not mechanically checkable here; taken on the user's word.
    UserAsserted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagCheck {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagValidationReport {
    pub checks: Vec<FlagCheck>,
}

impl FlagValidationReport {
    fn push(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self.checks.push(FlagCheck { name, status, detail: detail.into() });
    }

    /// No check failed (user-asserted checks count as passing).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FlagCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn status_of(&self, name: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

/// Largest `P^n` supported by coordinate flags.
pub const MAX_COORDINATE_DIM: usize = 3;

/// Tests every mechanically checkable hypothesis on the flag.
pub fn validate_flag(model: &Model, flag: &FlagSpec) -> Result<FlagValidationReport> {
    let mut report = FlagValidationReport { checks: vec![] };
    match (model, flag) {
        (Model::Projective(p), FlagSpec::Coordinate { order }) => {
            let n = p.n();
            let mut sorted = order.clone();
            sorted.sort_unstable();
            let is_perm = sorted == (0..=n).collect::<Vec<_>>();
            report.push("permutation", is_perm, format!("order {order:?} over z0..z{n}"));
            report.push(
                "dimension_supported",
                n <= MAX_COORDINATE_DIM,
                format!("n = {n}, coordinate flags support n <= {MAX_COORDINATE_DIM}"),
            );
        }
        (Model::Projective(p), FlagSpec::Curve { xi1, param }) => {
            if p.n() != 2 {
                return Err(Error::Mismatch(format!("curve flags live on P^2, model is P^{}", p.n())));
            }
            if xi1.num_vars() != 3 || param.components().len() != 3 {
                return Err(Error::Mismatch("curve flag needs a form in z0, z1, z2 and three components".into()));
            }
            let d = p.d();
            let e = param.degree();
            let xi_deg = xi1.homogeneous_degree();
            report.push(
                "xi1_section_of_L",
                xi_deg == Some(d),
                format!("xi1 = {xi1} has degree {xi_deg:?}, L = O({d})"),
            );
            report.push(
                "param_base_point_free",
                true,
                format!("components [{}] share no zero at sampled parameters", param.to_strings().join(", ")),
            );
            let on_curve = pullback(xi1, param)?.is_zero();
            report.push(
                "xi1_vanishes_on_curve",
                on_curve,
                format!("pullback of xi1 under the parametrization is {}", if on_curve { "zero" } else { "nonzero" }),
            );
            let expected = d * e;
            let mut bad = None;
            for s in p.monomials(1) {
                let pb = pullback(&s, param)?;
                if !pb.is_zero() && pb.homogeneous_degree() != Some(expected) {
                    bad = Some(s);
                    break;
                }
            }
            report.push(
                "pullback_degree",
                bad.is_none(),
                match &bad {
                    None => format!("level-1 sections pull back to binary forms of degree d*e = {expected}"),
                    Some(s) => format!("pullback of {s} is not of degree {expected}"),
                },
            );
            report.push(
                "param_birational",
                xi_deg == Some(e),
                format!("parametrization degree {e} vs curve degree {xi_deg:?}"),
            );
            match xi_deg {
                Some(1) => report.push("smooth_irreducible", true, "lines are smooth and irreducible"),
                Some(2) => {
                    let r = quadric_rank(xi1)?;
                    report.push("smooth_irreducible", r == 3, format!("symmetric matrix of the conic has rank {r}"));
                }
                _ => report.checks.push(FlagCheck {
                    name: "smooth_irreducible",
                    status: CheckStatus::UserAsserted,
                    detail: format!("smoothness of a degree-{xi_deg:?} curve is not certified"),
                }),
            }
        }
        (Model::Toric(t), FlagSpec::ToricVertex { vertex, edges }) => {
            let n = t.n();
            if vertex.len() != n || edges.iter().any(|e| e.len() != n) {
                return Err(Error::Mismatch(format!("toric flag coordinates must have dimension {n}")));
            }
            let w = QVector::from_ints(vertex)?;
            let is_vertex = t.polytope().vertices().contains(&w);
            report.push("vertex_is_polytope_vertex", is_vertex, format!("{vertex:?}"));
            report.push("edge_count", edges.len() == n, format!("{} edges for dimension {n}", edges.len()));
            let basis = if edges.len() == n {
                let rows: Vec<&[i64]> = edges.iter().map(Vec::as_slice).collect();
                Some(QMatrix::from_int_rows(&rows)?)
            } else {
                None
            };
            let det = basis.as_ref().map(|b| b.determinant()).transpose()?;
            report.push(
                "edges_unimodular",
                det.as_ref().is_some_and(|d| d.abs().is_one()),
                format!("determinant {}", det.as_ref().map_or("undefined".into(), |d| d.to_string())),
            );
            let reach = edges.iter().all(|e| {
                let Ok(step) = QVector::from_ints(e) else { return false };
                t.polytope().vertices().iter().any(|u| {
                    let diff = u.sub(&w);
                    (1..=64).any(|len| diff == step.scale(&int(len)))
                })
            });
            report.push("edges_reach_vertices", reach, "each edge direction leads from the vertex to another vertex");
            let in_cone = match (&basis, det.as_ref().map(|d| !num_traits::Zero::is_zero(d))) {
                (Some(b), Some(true)) => t.polytope().vertices().iter().all(|u| {
                    let diff = u.sub(&w);
                    crate::linalg::gauss_solve(&b.transpose(), &diff)
                        .ok()
                        .flatten()
                        .is_some_and(|c| c.coords().iter().all(|x| !x.is_negative()))
                }),
                _ => false,
            };
            report.push(
                "polytope_in_vertex_cone",
                in_cone,
                "the polytope lies in the cone spanned by the edges at the vertex",
            );
        }
        _ => {
            return Err(Error::Mismatch(format!("{} flags do not apply to {model}", flag.variant_name())));
        }
    }
    Ok(report)
}

/// Validates and turns a failing report into a configuration error.
pub fn require_valid(model: &Model, flag: &FlagSpec) -> Result<FlagValidationReport> {
    let report = validate_flag(model, flag)?;
    if !report.passed() {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        return Err(Error::Config(format!("flag validation failed: {}", names.join(", "))));
    }
    Ok(report)
}

/// Checks that the flag is cut out by sections `xi_1, ..., xi_{n-1}` of `L`
/// itself, which is what the simplex prediction needs.
pub fn require_complete_intersection(model: &Model, flag: &FlagSpec) -> Result<()> {
    require_valid(model, flag)?;
    match (model, flag) {
        (Model::Projective(p), FlagSpec::Coordinate { .. }) if p.d() != 1 => Err(Error::Hypothesis(format!(
            "coordinate hyperplanes are sections of O(1), but L = O({}); the flag is not cut out by sections of L",
            p.d()
        ))),
        (Model::Projective(_), FlagSpec::Coordinate { .. } | FlagSpec::Curve { .. }) => Ok(()),
        _ => Err(Error::Hypothesis(format!(
            "{} flags are not complete intersections of sections of L",
            flag.variant_name()
        ))),
    }
}

/// The flag sections `xi_j` paired with the unit vector the simplex
/// prediction assigns to them: `xi_j` vanishes along `X_{n-j}` and has value
/// `e_{n-j+1}`.
pub fn flag_vertex_sections(model: &Model, flag: &FlagSpec) -> Result<Vec<(Section, Vec<u32>)>> {
    require_complete_intersection(model, flag)?;
    let n = model.dim();
    let unit = |i: usize| {
        let mut e = vec![0u32; n];
        e[i - 1] = 1;
        e
    };
    match flag {
        FlagSpec::Coordinate { order } => Ok((1..n)
            .map(|j| {
                let var = order[n - j + 1];
                (Section::Form(MultiPoly::var(n + 1, var)), unit(n - j + 1))
            })
            .collect()),
        FlagSpec::Curve { xi1, .. } => Ok(vec![(Section::Form(xi1.clone()), unit(2))]),
        FlagSpec::ToricVertex { .. } => unreachable!("rejected by require_complete_intersection"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic_model() -> Model {
        Model::projective(2, 2).unwrap()
    }

    fn conic_flag() -> FlagSpec {
        FlagSpec::curve("z0 z2 - z1^2", &["u^2", "u t", "t^2"]).unwrap()
    }

    fn square() -> Model {
        Model::toric(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn conic_flag_passes() {
        let r = validate_flag(&conic_model(), &conic_flag()).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert!(r.checks.iter().all(|c| c.status == CheckStatus::Pass));
    }

    #[test]
    fn degenerate_quadric_fails_smoothness() {
        let flag = FlagSpec::curve("z0 z2", &["u^2", "u t", "t^2"]).unwrap();
        let r = validate_flag(&conic_model(), &flag).unwrap();
        assert_eq!(r.status_of("smooth_irreducible"), Some(CheckStatus::Fail));
        assert!(!r.passed());
    }

    #[test]
    fn cubic_is_user_asserted() {
        // cuspidal cubic z1^3 = z0 z2^2
        let flag = FlagSpec::curve("z1^3 - z0 z2^2", &["u^3", "u t^2", "t^3"]).unwrap();
        let r = validate_flag(&Model::projective(2, 3).unwrap(), &flag).unwrap();
        assert_eq!(r.status_of("smooth_irreducible"), Some(CheckStatus::UserAsserted));
        assert_eq!(r.status_of("xi1_vanishes_on_curve"), Some(CheckStatus::Pass));
    }

    #[test]
    fn curve_not_on_curve_fails() {
        let flag = FlagSpec::curve("z0 z2 - 2 z1^2", &["u^2", "u t", "t^2"]).unwrap();
        let r = validate_flag(&conic_model(), &flag).unwrap();
        assert_eq!(r.status_of("xi1_vanishes_on_curve"), Some(CheckStatus::Fail));
    }

    #[test]
    fn toric_square_vertex_flag_passes() {
        let flag = FlagSpec::toric_vertex(vec![0, 0], vec![vec![1, 0], vec![0, 1]]);
        let r = validate_flag(&square(), &flag).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        let flag = FlagSpec::toric_vertex(vec![1, 1], vec![vec![-1, 0], vec![0, -1]]);
        assert!(validate_flag(&square(), &flag).unwrap().passed());
    }

    #[test]
    fn toric_flag_failures() {
        let not_vertex = FlagSpec::toric_vertex(vec![1, 2], vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(
            validate_flag(&square(), &not_vertex).unwrap().status_of("vertex_is_polytope_vertex"),
            Some(CheckStatus::Fail)
        );
        let not_unimodular = FlagSpec::toric_vertex(vec![0, 0], vec![vec![1, 0], vec![1, 2]]);
        assert_eq!(
            validate_flag(&square(), &not_unimodular).unwrap().status_of("edges_unimodular"),
            Some(CheckStatus::Fail)
        );
        let wrong_cone = FlagSpec::toric_vertex(vec![0, 0], vec![vec![-1, 0], vec![0, 1]]);
        assert_eq!(
            validate_flag(&square(), &wrong_cone).unwrap().status_of("polytope_in_vertex_cone"),
            Some(CheckStatus::Fail)
        );
        let bad_dim = FlagSpec::toric_vertex(vec![0, 0, 0], vec![]);
        assert!(validate_flag(&square(), &bad_dim).is_err());
    }

    #[test]
    fn coordinate_permutation_checked() {
        let m = Model::projective(2, 1).unwrap();
        assert!(validate_flag(&m, &FlagSpec::coordinate(vec![2, 0, 1])).unwrap().passed());
        assert!(!validate_flag(&m, &FlagSpec::coordinate(vec![0, 0, 1])).unwrap().passed());
        assert!(!validate_flag(&m, &FlagSpec::coordinate(vec![0, 1])).unwrap().passed());
        assert!(validate_flag(&m, &FlagSpec::toric_vertex(vec![0], vec![])).is_err());
    }

    #[test]
    fn vertex_sections() {
        let m = Model::projective(2, 1).unwrap();
        let got = flag_vertex_sections(&m, &FlagSpec::coordinate(vec![0, 1, 2])).unwrap();
        assert_eq!(got, vec![(Section::Form(MultiPoly::parse("z2", 3).unwrap()), vec![0, 1])]);
        let got = flag_vertex_sections(&conic_model(), &conic_flag()).unwrap();
        assert_eq!(got, vec![(Section::Form(MultiPoly::parse("z0 z2 - z1^2", 3).unwrap()), vec![0, 1])]);
        let m3 = Model::projective(3, 1).unwrap();
        let got = flag_vertex_sections(&m3, &FlagSpec::coordinate(vec![0, 1, 2, 3])).unwrap();
        assert_eq!(
            got,
            vec![
                (Section::Form(MultiPoly::parse("z3", 4).unwrap()), vec![0, 0, 1]),
                (Section::Form(MultiPoly::parse("z2", 4).unwrap()), vec![0, 1, 0]),
            ]
        );
    }

    #[test]
    fn complete_intersection_hypothesis() {
        let m = Model::projective(2, 2).unwrap();
        assert!(matches!(
            require_complete_intersection(&m, &FlagSpec::coordinate(vec![0, 1, 2])),
            Err(Error::Hypothesis(_))
        ));
        let sq_flag = FlagSpec::toric_vertex(vec![0, 0], vec![vec![1, 0], vec![0, 1]]);
        assert!(matches!(require_complete_intersection(&square(), &sq_flag), Err(Error::Hypothesis(_))));
    }
}
