//! Perfect t-embeddings `T_n` and origami maps `O_n` of the reduced
//! two-periodic Aztec diamond, built stage by stage from local update rules,
//! compared with the wave-equation assembly, and checked geometrically.

use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Diamond;
use crate::rings::{parse_rational, Complex64, ComplexScalar, GaussianRational, Rational, RealScalar};
use crate::wavefield::{assemble_o, FundamentalSet, SourceWeights};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::InvalidArgument(format!("mode must be exact or float, got {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingConfig {
    pub a: Rational,
    pub max_stage: i64,
    pub mode: Mode,
}

impl EmbeddingConfig {
    pub fn new(a: Rational, max_stage: i64, mode: Mode) -> Result<Self> {
        if a <= Rational::zero() {
            return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
        }
        if max_stage < 1 {
            return Err(Error::InvalidArgument(format!("stage must be >= 1, got {max_stage}")));
        }
        Ok(Self { a, max_stage, mode })
    }
}

/// The coefficients `α_n`, `β_{j,n}`, `γ_{j,k,n}` of the update rules.
#[derive(Clone, Debug)]
pub struct CoefficientTables {
    a2: Rational,
    a2_inv: Rational,
}

impl CoefficientTables {
    pub fn new(a: &Rational) -> Self {
        let a2 = a * a;
        Self {
            a2_inv: a2.recip(),
            a2,
        }
    }

    /// `1` for odd `n`, `a²` for `n ≡ 2`, `a⁻²` for `n ≡ 0 (mod 4)`.
    pub fn alpha(&self, n: i64) -> Rational {
        match n.rem_euclid(4) {
            2 => self.a2.clone(),
            0 => self.a2_inv.clone(),
            _ => Rational::one(),
        }
    }

    /// `1` for odd `n`; `a²` if `n ≡ 0` and `j` even or `n ≡ 2` and `j` odd; `a⁻²` otherwise.
    pub fn beta(&self, j: i64, n: i64) -> Rational {
        if n.rem_euclid(2) == 1 {
            return Rational::one();
        }
        let j_even = j.rem_euclid(2) == 0;
        if (n.rem_euclid(4) == 0) == j_even {
            self.a2.clone()
        } else {
            self.a2_inv.clone()
        }
    }

    /// `1` for even `n`; for `n ≡ 3` it is `a²` on even `(j, k)` and `a⁻²`
    /// on odd `(j, k)`; for `n ≡ 1` the two are exchanged.
    pub fn gamma(&self, j: i64, k: i64, n: i64) -> Rational {
        if n.rem_euclid(2) == 0 {
            return Rational::one();
        }
        let even_site = j.rem_euclid(2) == 0 && k.rem_euclid(2) == 0;
        if (n.rem_euclid(4) == 3) == even_site {
            self.a2.clone()
        } else {
            self.a2_inv.clone()
        }
    }
}

/// Convex weights `(c/(c+1), 1/(c+1))`.
fn split(c: &Rational) -> (Rational, Rational) {
    let denom = c + Rational::one();
    let pair = (c / &denom, denom.recip());
    debug_assert!(&pair.0 + &pair.1 == Rational::one());
    pair
}

/// Positions of `T_n` and `O_n` at stage `n`: the inner vertices
/// `|j| + |k| < n` and the four corners `(±n, 0)`, `(0, ±n)`.
#[derive(Clone, Debug)]
pub struct Embedding<S> {
    a: Rational,
    stage: i64,
    t: Diamond<Option<S>>,
    o: Diamond<Option<S>>,
}

fn corner_values<S: ComplexScalar>(a: &Rational, n: i64) -> [((i64, i64), S, S); 4] {
    let zero = Rational::zero();
    let ia = S::from_parts(&zero, a);
    [
        ((n, 0), S::one(), S::one()),
        ((-n, 0), -S::one(), S::one()),
        ((0, n), ia.clone(), ia.clone()),
        ((0, -n), -ia.clone(), ia),
    ]
}

impl<S: ComplexScalar> Embedding<S> {
    /// Stage 1: the square `{±1, ±ia}` with `T_1(0,0) = 0` and `O_1(0,0)`
    /// taken from the assembled origami field.
    pub fn base(a: &Rational) -> Result<Self> {
        if *a <= Rational::zero() {
            return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
        }
        let mut t = Diamond::new((0, 0), 1, None);
        let mut o = Diamond::new((0, 0), 1, None);
        for (site, tv, ov) in corner_values::<S>(a, 1) {
            t.set(site.0, site.1, Some(tv));
            o.set(site.0, site.1, Some(ov));
        }
        let center = assemble_o(a, 0, 0, 1)?;
        t.set(0, 0, Some(S::zero()));
        o.set(0, 0, Some(S::from_parts(&center.re, &center.im)));
        Ok(Self {
            a: a.clone(),
            stage: 1,
            t,
            o,
        })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn stage(&self) -> i64 {
        self.stage
    }

    pub fn t(&self, j: i64, k: i64) -> Option<&S> {
        self.t.get(j, k).and_then(Option::as_ref)
    }

    pub fn o(&self, j: i64, k: i64) -> Option<&S> {
        self.o.get(j, k).and_then(Option::as_ref)
    }

    /// Every stored vertex index, row-major.
    pub fn vertices(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.t.sites().filter(|&(j, k)| self.t(j, k).is_some())
    }

    pub fn is_corner(&self, j: i64, k: i64) -> bool {
        j.abs() + k.abs() == self.stage
    }

    /// Applies the update rules (1)-(5) in order.
    pub fn step(&self) -> Result<Self> {
        let n = self.stage;
        let tables = CoefficientTables::new(&self.a);
        let mut t = Diamond::new((0, 0), n + 1, None);
        let mut o = Diamond::new((0, 0), n + 1, None);
        for (site, tv, ov) in corner_values::<S>(&self.a, n + 1) {
            t.set(site.0, site.1, Some(tv));
            o.set(site.0, site.1, Some(ov));
        }
        advance(&self.t, &mut t, n, &tables)?;
        advance(&self.o, &mut o, n, &tables)?;
        Ok(Self {
            a: self.a.clone(),
            stage: n + 1,
            t,
            o,
        })
    }

    /// Violations of the corner values, `T_n(0,0) = 0`, `T_n(-v) = -T_n(v)`
    /// and `O_n(-v) = O_n(v)`.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (site, tv, ov) in corner_values::<S>(&self.a, self.stage) {
            if self.t(site.0, site.1) != Some(&tv) || self.o(site.0, site.1) != Some(&ov) {
                out.push(format!("corner {site:?} at stage {}", self.stage));
            }
        }
        if self.t(0, 0).is_some_and(|v| !v.is_zero()) {
            out.push(format!("T({},0,0) != 0", self.stage));
        }
        for (j, k) in self.vertices() {
            let (tp, tm) = (self.t(j, k).unwrap(), self.t(-j, -k).unwrap());
            if tp.clone() + tm.clone() != S::zero() {
                out.push(format!("T not antisymmetric at ({j},{k})"));
            }
            if self.o(j, k) != self.o(-j, -k) {
                out.push(format!("O not symmetric at ({j},{k})"));
            }
        }
        out
    }

    pub fn to_float(&self) -> Embedding<Complex64> {
        let conv = |d: &Diamond<Option<S>>| {
            let mut out = Diamond::new((0, 0), d.radius(), None);
            for (j, k) in d.sites() {
                if let Some(Some(v)) = d.get(j, k) {
                    out.set(j, k, Some(v.to_c64()));
                }
            }
            out
        };
        Embedding {
            a: self.a.clone(),
            stage: self.stage,
            t: conv(&self.t),
            o: conv(&self.o),
        }
    }

    /// CSV with header `j,k,re_t,im_t,re_o,im_o`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,k,re_t,im_t,re_o,im_o\n");
        for (j, k) in self.vertices() {
            let (rt, it) = self.t(j, k).unwrap().text_parts();
            let (ro, io) = self.o(j, k).unwrap().text_parts();
            let _ = writeln!(out, "{j},{k},{rt},{it},{ro},{io}");
        }
        out
    }
}

impl Embedding<Complex64> {
    /// Copy with `T(j, k)` moved by `delta`; used as a negative control.
    pub fn perturbed(&self, j: i64, k: i64, delta: Complex64) -> Self {
        let mut out = self.clone();
        if let Some(Some(v)) = out.t.get_mut(j, k) {
            *v += delta;
        }
        out
    }
}

/// Rules (2)-(5) for one of the two maps; `next` already holds the new corners.
fn advance<S: ComplexScalar>(
    cur: &Diamond<Option<S>>,
    next: &mut Diamond<Option<S>>,
    n: i64,
    tables: &CoefficientTables,
) -> Result<()> {
    let at = |d: &Diamond<Option<S>>, j: i64, k: i64| -> Result<S> {
        d.get(j, k)
            .and_then(|v| v.clone())
            .ok_or(Error::OutOfDomain { j, k, n })
    };
    let lift = |c: &Rational| S::from_rational(c);

    let (heavy, light) = split(&tables.alpha(n));
    let (heavy, light) = (lift(&heavy), lift(&light));
    for s in [1, -1] {
        let v = light.clone() * at(cur, s * n, 0)? + heavy.clone() * at(cur, s * (n - 1), 0)?;
        next.set(s * n, 0, Some(v));
        let v = heavy.clone() * at(cur, 0, s * n)? + light.clone() * at(cur, 0, s * (n - 1))?;
        next.set(0, s * n, Some(v));
    }

    for j in 1..n {
        let (heavy, light) = split(&tables.beta(j, n));
        let (heavy, light) = (lift(&heavy), lift(&light));
        for s in [1, -1] {
            let v = light.clone() * at(cur, j - 1, s * (n - j))? + heavy.clone() * at(cur, j, s * (n - j - 1))?;
            next.set(j, s * (n - j), Some(v));
        }
    }
    for j in -(n - 1)..0 {
        let (heavy, light) = split(&tables.beta(j, n));
        let (heavy, light) = (lift(&heavy), lift(&light));
        for s in [1, -1] {
            let v = heavy.clone() * at(cur, j, s * (n + j - 1))? + light.clone() * at(cur, j + 1, s * (n + j))?;
            next.set(j, s * (n + j), Some(v));
        }
    }

    let inner: Vec<(i64, i64)> = cur.sites().filter(|&(j, k)| j.abs() + k.abs() < n).collect();
    for &(j, k) in &inner {
        if (j + k + n).rem_euclid(2) == 0 {
            next.set(j, k, Some(at(cur, j, k)?));
        }
    }
    for &(j, k) in &inner {
        if (j + k + n).rem_euclid(2) == 1 {
            let (vertical, horizontal) = split(&tables.gamma(j, k, n));
            let v = -at(cur, j, k)?
                + lift(&horizontal) * (at(next, j + 1, k)? + at(next, j - 1, k)?)
                + lift(&vertical) * (at(next, j, k + 1)? + at(next, j, k - 1)?);
            next.set(j, k, Some(v));
        }
    }
    Ok(())
}

/// Stages `1..=max_stage` of the recurrence.
pub fn run_embedding<S: ComplexScalar>(a: &Rational, max_stage: i64) -> Result<Vec<Embedding<S>>> {
    let mut stages = vec![Embedding::<S>::base(a)?];
    while stages.last().unwrap().stage() < max_stage {
        let next = stages.last().unwrap().step()?;
        stages.push(next);
    }
    Ok(stages)
}

/// Stage `n` only, discarding the earlier ones.
pub fn embedding_at<S: ComplexScalar>(a: &Rational, n: i64) -> Result<Embedding<S>> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("stage must be >= 1, got {n}")));
    }
    let mut e = Embedding::<S>::base(a)?;
    while e.stage() < n {
        e = e.step()?;
    }
    Ok(e)
}

#[derive(Clone, Debug, Serialize)]
pub struct StageComparison {
    pub stage: i64,
    pub points: usize,
    /// `Some` in exact mode.
    pub exact_equal: Option<bool>,
    pub max_discrepancy: f64,
    pub first_mismatch: Option<(i64, i64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub a: String,
    pub mode: Mode,
    pub source_weights: String,
    /// Layer of the assembled fields compared at vertices with `j + k + n` even.
    pub even_layer: String,
    pub stages: Vec<StageComparison>,
}

impl TheoremReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.stages.iter().all(|s| match s.exact_equal {
            Some(eq) => eq,
            None => s.max_discrepancy <= tol,
        })
    }

    pub fn max_discrepancy(&self) -> f64 {
        self.stages.iter().map(|s| s.max_discrepancy).fold(0.0, f64::max)
    }
}

/// Compares the recurrence with `f_E + i a f_N ∓ ...` at every vertex of
/// every stage up to `max_stage`. Inner vertices with `j + k + n` odd use
/// layer `n`; with `j + k + n` even, layer `n + 1`. Corners compare with
/// their pinned values.
pub fn compare_theorem<R: RealScalar>(a: &Rational, max_stage: i64, mode: Mode) -> Result<TheoremReport>
where
    Complex<R>: ComplexScalar,
{
    let fields = FundamentalSet::<R>::new(a, max_stage + 1)?;
    let mut cur = Embedding::<Complex<R>>::base(a)?;
    let mut stages = Vec::new();
    loop {
        let n = cur.stage();
        let mut worst = 0.0f64;
        let mut equal = true;
        let mut first_mismatch = None;
        let mut points = 0;
        let pinned = corner_values::<Complex<R>>(a, n);
        for (j, k) in cur.vertices() {
            let (t_ref, o_ref) = if cur.is_corner(j, k) {
                let (_, tv, ov) = pinned.iter().find(|(s, _, _)| *s == (j, k)).unwrap().clone();
                (tv, ov)
            } else {
                let layer = if (j + k + n).rem_euclid(2) == 1 { n } else { n + 1 };
                (fields.assemble_t(j, k, layer)?, fields.assemble_o(j, k, layer)?)
            };
            let (tv, ov) = (cur.t(j, k).unwrap(), cur.o(j, k).unwrap());
            points += 1;
            if *tv != t_ref || *ov != o_ref {
                equal = false;
                first_mismatch.get_or_insert((j, k));
            }
            let gap = (tv.to_c64() - t_ref.to_c64()).norm().max((ov.to_c64() - o_ref.to_c64()).norm());
            worst = worst.max(gap);
        }
        stages.push(StageComparison {
            stage: n,
            points,
            exact_equal: (mode == Mode::Exact).then_some(equal),
            max_discrepancy: worst,
            first_mismatch: if mode == Mode::Exact { first_mismatch } else { None },
        });
        if n >= max_stage {
            break;
        }
        cur = cur.step()?;
    }
    Ok(TheoremReport {
        a: a.to_string(),
        mode,
        source_weights: format!("{:?}", SourceWeights::default()),
        even_layer: "n+1".to_string(),
        stages,
    })
}

/// Which way the alternating products line up with the expected face weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Direct,
    Reciprocal,
    Inconsistent,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometryReport {
    pub stage: i64,
    pub a: f64,
    pub tol: f64,
    pub faces_checked: usize,
    pub orientation: Orientation,
    pub max_face_weight_error: f64,
    pub max_isometry_error: f64,
    pub max_bisector_error: f64,
    pub rhombus_error: f64,
    pub violations: Vec<String>,
}

impl GeometryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Expected alternating product at inner vertex `(j, k)` of stage `n`.
pub fn expected_face_weight(tables: &CoefficientTables, j: i64, k: i64, n: i64) -> Rational {
    if (j + k + n).rem_euclid(2) == 1 {
        tables.gamma(j, k, n)
    } else {
        tables.gamma(j, k, n - 1)
    }
}

/// Checks face weights, origami isometry, the tangential rhombus boundary
/// and the corner bisector conditions in double precision.
pub fn validate_perfect(embedding: &Embedding<Complex64>, tol: f64) -> GeometryReport {
    let n = embedding.stage();
    let a = crate::rings::rational_to_f64(embedding.a());
    let tables = CoefficientTables::new(embedding.a());
    let pos = |j: i64, k: i64| embedding.t(j, k).copied();
    let mut violations = Vec::new();

    let mut direct_ok = true;
    let mut reciprocal_ok = true;
    let mut worst_direct = 0.0f64;
    let mut worst_reciprocal = 0.0f64;
    let mut faces = 0;
    for (j, k) in embedding.vertices().filter(|&(j, k)| j.abs() + k.abs() <= n - 2) {
        let v = pos(j, k).unwrap();
        let (e, no, w, s) = (pos(j + 1, k).unwrap(), pos(j, k + 1).unwrap(), pos(j - 1, k).unwrap(), pos(j, k - 1).unwrap());
        let x = -((v - e) * (v - w)) / ((no - v) * (s - v));
        let gamma = crate::rings::rational_to_f64(&expected_face_weight(&tables, j, k, n));
        faces += 1;
        let scale = gamma.max(1.0);
        if x.im.abs() > tol * scale || x.re <= 0.0 {
            violations.push(format!("face ({j},{k}): product {x} is not real positive"));
        }
        let dd = (x.re - gamma).abs() / scale;
        let dr = (x.re - 1.0 / gamma).abs() / scale.max(1.0 / gamma);
        worst_direct = worst_direct.max(dd);
        worst_reciprocal = worst_reciprocal.max(dr);
        direct_ok &= dd <= tol;
        reciprocal_ok &= dr <= tol;
    }
    let (orientation, face_error) = if direct_ok {
        (Orientation::Direct, worst_direct)
    } else if reciprocal_ok {
        (Orientation::Reciprocal, worst_reciprocal)
    } else {
        violations.push(format!(
            "face weights match neither γ (max error {worst_direct:.3e}) nor 1/γ (max error {worst_reciprocal:.3e})"
        ));
        (Orientation::Inconsistent, worst_direct.min(worst_reciprocal))
    };

    let mut isometry = 0.0f64;
    for (j, k) in embedding.vertices() {
        for (dj, dk) in [(1, 0), (0, 1)] {
            if let (Some(t2), Some(o2)) = (embedding.t(j + dj, k + dk), embedding.o(j + dj, k + dk)) {
                let t1 = embedding.t(j, k).unwrap();
                let o1 = embedding.o(j, k).unwrap();
                isometry = isometry.max(((o2 - o1).norm() - (t2 - t1).norm()).abs());
            }
        }
    }
    if isometry > tol {
        violations.push(format!("origami edge lengths differ by {isometry:.3e}"));
    }

    let corners = [
        (pos(n, 0), Complex64::new(1.0, 0.0)),
        (pos(0, n), Complex64::new(0.0, a)),
        (pos(-n, 0), Complex64::new(-1.0, 0.0)),
        (pos(0, -n), Complex64::new(0.0, -a)),
    ];
    let mut rhombus = 0.0f64;
    for (got, want) in corners {
        rhombus = rhombus.max(got.map_or(f64::INFINITY, |g| (g - want).norm()));
    }
    // Every side of the rhombus must be at distance a/√(1+a²) from 0.
    let radius = a / (1.0 + a * a).sqrt();
    for i in 0..4 {
        let p = corners[i].1;
        let q = corners[(i + 1) % 4].1;
        let distance = (p.re * q.im - p.im * q.re).abs() / (q - p).norm();
        rhombus = rhombus.max((distance - radius).abs());
    }
    for (j, k) in embedding.vertices() {
        let z = pos(j, k).unwrap();
        if z.re.abs() + z.im.abs() / a > 1.0 + tol {
            violations.push(format!("T({j},{k}) = {z} lies outside the rhombus"));
        }
    }
    if rhombus > tol {
        violations.push(format!("outer face is not the tangential rhombus (error {rhombus:.3e})"));
    }

    let mut bisector = 0.0f64;
    if n >= 2 {
        for s in [1, -1] {
            bisector = bisector.max(pos(s * (n - 1), 0).unwrap().im.abs());
            bisector = bisector.max(pos(0, s * (n - 1)).unwrap().re.abs());
        }
    }
    if bisector > tol {
        violations.push(format!("corner edges miss the bisectors by {bisector:.3e}"));
    }

    GeometryReport {
        stage: n,
        a,
        tol,
        faces_checked: faces,
        orientation,
        max_face_weight_error: face_error,
        max_isometry_error: isometry,
        max_bisector_error: bisector,
        rhombus_error: rhombus,
        violations,
    }
}

/// Rows `(j, k, T, O)` of an exact-mode CSV dump.
pub fn parse_exact_csv(text: &str) -> Result<Vec<(i64, i64, GaussianRational, GaussianRational)>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(Error::InvalidArgument(format!("line {}: expected 6 columns", lineno + 1)));
        }
        let int = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| Error::InvalidArgument(format!("line {}: bad index {s:?}", lineno + 1)))
        };
        rows.push((
            int(cols[0])?,
            int(cols[1])?,
            GaussianRational::new(parse_rational(cols[2])?, parse_rational(cols[3])?),
            GaussianRational::new(parse_rational(cols[4])?, parse_rational(cols[5])?),
        ));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::rational;
    use crate::wavefield::tilde_gamma;

    fn q(p: i64, d: i64) -> Rational {
        rational(p, d)
    }

    fn g(re: Rational, im: Rational) -> GaussianRational {
        GaussianRational::new(re, im)
    }

    #[test]
    fn coefficient_relations() {
        let a = q(7, 10);
        let tables = CoefficientTables::new(&a);
        for n in 1..12 {
            assert_eq!(tilde_gamma(0, n, n, &a), tables.alpha(n).recip());
            assert_eq!(tilde_gamma(n, 0, n, &a), tables.alpha(n).recip());
            for j in -n..=n {
                assert_eq!(tilde_gamma(j, n - j, n, &a), tables.beta(j, n), "j={j} n={n}");
                for k in -n..=n {
                    if (j + k + n) % 2 == 0 {
                        assert_eq!(tilde_gamma(j, k, n, &a), tables.gamma(j, k, n - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn base_stage() {
        let one = q(1, 1);
        let base = Embedding::<GaussianRational>::base(&one).unwrap();
        let zero = q(0, 1);
        assert_eq!(base.t(1, 0), Some(&g(one.clone(), zero.clone())));
        assert_eq!(base.t(0, 1), Some(&g(zero.clone(), one.clone())));
        assert_eq!(base.t(-1, 0), Some(&g(-one.clone(), zero.clone())));
        assert_eq!(base.t(0, -1), Some(&g(zero.clone(), -one.clone())));
        assert_eq!(base.t(0, 0), Some(&GaussianRational::zero()));
        assert_eq!(base.o(0, 0), Some(&g(one.clone(), one.clone())));
        assert!(base.invariant_violations().is_empty());
        let a = q(7, 10);
        let base = Embedding::<GaussianRational>::base(&a).unwrap();
        assert_eq!(base.t(0, 0), Some(&GaussianRational::zero()));
    }

    #[test]
    fn first_steps() {
        let s2 = Embedding::<GaussianRational>::base(&q(1, 1)).unwrap().step().unwrap();
        assert_eq!(s2.t(1, 0), Some(&g(q(1, 2), q(0, 1))));
        for a in [q(7, 10), q(3, 1)] {
            let stages = run_embedding::<GaussianRational>(&a, 6).unwrap();
            for e in &stages {
                assert_eq!(e.t(0, 0), Some(&GaussianRational::zero()));
                assert!(e.invariant_violations().is_empty(), "{:?}", e.invariant_violations());
                assert_eq!(e.vertices().count() as i64, 2 * e.stage() * e.stage() - 2 * e.stage() + 1 + 4);
            }
        }
    }

    #[test]
    fn theorem_identity_small() {
        for a in [q(1, 1), q(7, 10)] {
            let report = compare_theorem::<Rational>(&a, 8, Mode::Exact).unwrap();
            for s in &report.stages {
                assert_eq!(s.exact_equal, Some(true), "a={a} stage {} at {:?}", s.stage, s.first_mismatch);
            }
        }
    }

    #[test]
    fn geometry_small() {
        let a = q(7, 10);
        for n in 1..12 {
            let e = embedding_at::<GaussianRational>(&a, n).unwrap().to_float();
            let report = validate_perfect(&e, 1e-9);
            assert!(report.passed(), "n={n}: {:?}", report.violations);
            if n >= 3 {
                assert_eq!(report.orientation, Orientation::Direct);
            }
        }
        let uniform = embedding_at::<Complex64>(&q(1, 1), 10).unwrap();
        assert!(validate_perfect(&uniform, 1e-9).passed());
    }

    #[test]
    fn perturbation_is_detected() {
        let e = embedding_at::<Complex64>(&q(7, 10), 8).unwrap();
        let bad = e.perturbed(1, 2, Complex64::new(1e-3, 0.0));
        let report = validate_perfect(&bad, 1e-9);
        assert!(!report.passed());
    }

    #[test]
    fn csv_round_trip() {
        let e = embedding_at::<GaussianRational>(&q(7, 10), 5).unwrap();
        let rows = parse_exact_csv(&e.to_csv()).unwrap();
        assert_eq!(rows.len(), e.vertices().count());
        for (j, k, t, o) in rows {
            assert_eq!(e.t(j, k), Some(&t));
            assert_eq!(e.o(j, k), Some(&o));
        }
        let one = embedding_at::<GaussianRational>(&q(1, 1), 1).unwrap().to_csv();
        assert_eq!(one.lines().count(), 6);
    }

    #[test]
    fn config_validation() {
        assert!(EmbeddingConfig::new(q(0, 1), 3, Mode::Exact).is_err());
        assert!(EmbeddingConfig::new(q(1, 1), 0, Mode::Float).is_err());
        assert_eq!("float".parse::<Mode>().unwrap(), Mode::Float);
        assert!("fast".parse::<Mode>().is_err());
    }
}
