//! Sparse multivariate polynomials over the rationals.
//!
//! Sections of `O(d)` on projective space are homogeneous polynomials in
//! `z0, ..., zn`; rational curves are parametrized by binary forms in
//! `(u, t)`, where the affine chart is `u = 1` and the flag point is `t = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{int, parse_rational, Rational};

pub type Exponent = Vec<u32>;

/// Variable names for binary forms: index 0 is `u`, index 1 is `t`.
pub const BINARY_VARS: [&str; 2] = ["u", "t"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        Self::term(num_vars, vec![0; num_vars], c)
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    pub fn monomial(exponent: Exponent) -> Self {
        let n = exponent.len();
        Self::term(n, exponent, Rational::one())
    }

    pub fn term(num_vars: usize, exponent: Exponent, c: Rational) -> Self {
        assert_eq!(exponent.len(), num_vars, "exponent length must equal variable count");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        MultiPoly { num_vars, terms }
    }

    /// The variable `x_i` as a polynomial.
    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(e)
    }

    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        assert_eq!(e.len(), self.num_vars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Common total degree of all terms; `None` for the zero polynomial or
    /// when terms have different degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max()
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        MultiPoly { num_vars: self.num_vars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn multiply(&self, other: &MultiPoly) -> MultiPoly {
        multiply(self, other)
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        (0..k).fold(Self::one(self.num_vars), |acc, _| acc.multiply(self))
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.num_vars);
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mono =
                e.iter().zip(point).fold(Rational::one(), |m, (&k, x)| m * num_traits::pow(x.clone(), k as usize));
            acc + c * mono
        })
    }

    /// Renders with the given variable names in descending lexicographic
    /// term order.
    pub fn to_string_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|&(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { names[j].to_string() } else { format!("{}^{}", names[j], k) })
                .collect();
            let mut parts = vec![];
            if !mag.is_one() || vars.is_empty() {
                parts.push(mag.to_string());
            }
            parts.extend(vars);
            out.push_str(&parts.join(" "));
        }
        out
    }

    /// Parses `"c z0^a0 z1^a1 + ..."` over the named variables. Whitespace
    /// and `*` between factors are optional.
    pub fn parse_with(s: &str, names: &[&str]) -> Result<MultiPoly> {
        Parser { src: s.as_bytes(), pos: 0, names }.parse()
    }

    /// Parses a form in `z0, ..., z{num_vars-1}`.
    pub fn parse(s: &str, num_vars: usize) -> Result<MultiPoly> {
        let owned: Vec<String> = (0..num_vars).map(|i| format!("z{i}")).collect();
        let names: Vec<&str> = owned.iter().map(String::as_str).collect();
        Self::parse_with(s, &names)
    }

    pub fn parse_binary(s: &str) -> Result<MultiPoly> {
        Self::parse_with(s, &BINARY_VARS)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let owned: Vec<String> = (0..self.num_vars).map(|i| format!("z{i}")).collect();
        let names: Vec<&str> = owned.iter().map(String::as_str).collect();
        f.write_str(&self.to_string_with(&names))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} in {:?}", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn parse(mut self) -> Result<MultiPoly> {
        let n = self.names.len();
        let mut poly = MultiPoly::zero(n);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return Err(self.err("empty polynomial")),
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(_) => return Err(self.err("expected '+' or '-'")),
            };
            first = false;
            let (e, c) = self.term()?;
            poly.add_term(e, c * int(sign));
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(Exponent, Rational)> {
        let n = self.names.len();
        let mut coeff = Rational::one();
        let mut exp = vec![0u32; n];
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let mut lit = self.digits();
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let den = self.digits();
                        if den.is_empty() {
                            return Err(self.err("missing denominator"));
                        }
                        lit = format!("{lit}/{den}");
                    }
                    coeff *= parse_rational(&lit)?;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let var = self.variable()?;
                    let mut k = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let d = self.digits();
                        k = d.parse().map_err(|_| self.err("bad exponent"))?;
                    }
                    exp[var] += k;
                }
                Some(b'*') if factors > 0 => {
                    self.pos += 1;
                    continue;
                }
                _ if factors == 0 => return Err(self.err("expected a term")),
                _ => break,
            }
            factors += 1;
        }
        Ok((exp, coeff))
    }

    fn variable(&mut self) -> Result<usize> {
        // Longest matching name wins, so `z1` never shadows `z12`.
        let rest = &self.src[self.pos..];
        let mut best: Option<(usize, usize)> = None;
        for (i, name) in self.names.iter().enumerate() {
            let b = name.as_bytes();
            if rest.starts_with(b) && best.is_none_or(|(_, len)| b.len() > len) {
                best = Some((i, b.len()));
            }
        }
        let (i, len) = best.ok_or_else(|| self.err("unknown variable"))?;
        self.pos += len;
        Ok(i)
    }
}

pub fn multiply(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    assert_eq!(f.num_vars, g.num_vars, "multiplying polynomials over different rings");
    let mut out = MultiPoly::zero(f.num_vars);
    for (ea, ca) in &f.terms {
        for (eb, cb) in &g.terms {
            let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
            out.add_term(e, ca * cb);
        }
    }
    out
}

/// Exact quotient `f / g`, or `None` when `g` does not divide `f`.
///
/// Division by the lexicographic leading term: any multiple of `g` has a
/// leading monomial divisible by that of `g`, so the first remainder whose
/// leading monomial is not divisible certifies non-divisibility.
pub fn exact_divide(f: &MultiPoly, g: &MultiPoly) -> Result<Option<MultiPoly>> {
    if g.is_zero() {
        return Err(Error::InvalidArgument("division by the zero polynomial".into()));
    }
    if f.num_vars != g.num_vars {
        return Err(Error::dim(f.num_vars, g.num_vars));
    }
    let (lg_e, lg_c) = g.leading_term().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
    let mut rem = f.clone();
    let mut quot = MultiPoly::zero(f.num_vars);
    while let Some((le, lc)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
        if le.iter().zip(&lg_e).any(|(a, b)| a < b) {
            return Ok(None);
        }
        let qe: Exponent = le.iter().zip(&lg_e).map(|(a, b)| a - b).collect();
        let qc = lc / &lg_c;
        let step = MultiPoly::term(f.num_vars, qe.clone(), qc.clone());
        rem = rem.sub(&multiply(&step, g));
        quot.add_term(qe, qc);
    }
    Ok(Some(quot))
}

/// Largest `m` with `g^m | f`, together with `f / g^m`.
pub fn max_power_dividing(f: &MultiPoly, g: &MultiPoly) -> Result<(u32, MultiPoly)> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("vanishing order of the zero section is undefined".into()));
    }
    if g.total_degree().unwrap_or(0) == 0 {
        return Err(Error::InvalidArgument("divisor must be nonconstant".into()));
    }
    let mut order = 0;
    let mut residual = f.clone();
    while let Some(q) = exact_divide(&residual, g)? {
        residual = q;
        order += 1;
    }
    Ok((order, residual))
}

/// A rational curve `[u:t] -> [phi_0(u,t) : ... : phi_n(u,t)]` with all
/// components binary forms of a common degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveParam {
    components: Vec<MultiPoly>,
    degree: u32,
}

impl CurveParam {
    /// Checks that the components are binary forms of one common positive
    /// degree without a common zero at the sampled parameters.
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidArgument("a curve needs at least two components".into()));
        }
        if let Some(c) = components.iter().find(|c| c.num_vars() != 2) {
            return Err(Error::dim(2, c.num_vars()));
        }
        let degree = components
            .iter()
            .filter_map(MultiPoly::homogeneous_degree)
            .next()
            .ok_or_else(|| Error::InvalidArgument("all curve components are zero".into()))?;
        if degree == 0 {
            return Err(Error::InvalidArgument("curve components must have positive degree".into()));
        }
        if let Some(c) = components.iter().find(|c| !c.is_homogeneous_of(degree)) {
            return Err(Error::InvalidArgument(format!(
                "component {} is not a binary form of degree {degree}",
                c.to_string_with(&BINARY_VARS)
            )));
        }
        let curve = CurveParam { components, degree };
        if let Some(bad) = curve.sample_parameters().into_iter().find(|p| curve.eval(p).iter().all(Zero::is_zero)) {
            return Err(Error::InvalidArgument(format!("components share the zero [u:t] = [{}:{}]", bad[0], bad[1])));
        }
        Ok(curve)
    }

    pub fn parse(components: &[&str]) -> Result<Self> {
        Self::new(components.iter().map(|s| MultiPoly::parse_binary(s)).collect::<Result<_>>()?)
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The flag point `[phi(1, 0)]`.
    pub fn base_point(&self) -> Vec<Rational> {
        self.eval(&[Rational::one(), Rational::zero()])
    }

    fn eval(&self, param: &[Rational]) -> Vec<Rational> {
        self.components.iter().map(|c| c.eval(param)).collect()
    }

    /// `t = 0`, the point at infinity, and `2e + 1` affine values of `t`.
    fn sample_parameters(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::one(), Rational::zero()], vec![Rational::zero(), Rational::one()]];
        for k in 1..=(2 * self.degree as i64 + 1) {
            out.push(vec![Rational::one(), int(k)]);
        }
        out
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.components.iter().map(|c| c.to_string_with(&BINARY_VARS)).collect()
    }
}

/// Substitutes the curve components into `s`, giving a binary form of degree
/// `deg(s) * e` (or zero when `s` vanishes on the curve).
pub fn pullback(s: &MultiPoly, curve: &CurveParam) -> Result<MultiPoly> {
    if s.num_vars() != curve.components.len() {
        return Err(Error::dim(curve.components.len(), s.num_vars()));
    }
    let mut powers: Vec<Vec<MultiPoly>> = curve.components.iter().map(|c| vec![MultiPoly::one(2), c.clone()]).collect();
    let mut out = MultiPoly::zero(2);
    for (e, c) in s.terms() {
        let mut mono = MultiPoly::constant(2, c.clone());
        for (i, &k) in e.iter().enumerate() {
            let cache = &mut powers[i];
            while cache.len() <= k as usize {
                let next = cache.last().expect("seeded").multiply(&curve.components[i]);
                cache.push(next);
            }
            mono = mono.multiply(&cache[k as usize]);
        }
        out = out.add(&mono);
    }
    Ok(out)
}

/// Order of vanishing at `t = 0` of a nonzero binary form.
pub fn order_at_base_point(f: &MultiPoly) -> Result<u32> {
    if f.num_vars() != 2 {
        return Err(Error::dim(2, f.num_vars()));
    }
    f.terms()
        .map(|(e, _)| e[1])
        .min()
        .ok_or_else(|| Error::InvalidArgument("order of vanishing of the zero form is undefined".into()))
}

/// Certifies smoothness of a plane conic: the symmetric matrix of the
/// quadratic form is nonsingular.
pub fn quadric_rank(q: &MultiPoly) -> Result<usize> {
    if !q.is_homogeneous_of(2) || q.is_zero() {
        return Err(Error::InvalidArgument("not a quadratic form".into()));
    }
    let n = q.num_vars();
    let half = crate::linalg::ratio(1, 2);
    let mut m = crate::linalg::QMatrix::zeros(n, n);
    for (e, c) in q.terms() {
        let idx: Vec<usize> = e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            m.set(i, i, c.clone());
        } else {
            m.set(i, j, c * &half);
            m.set(j, i, c * &half);
        }
    }
    Ok(m.rank())
}
