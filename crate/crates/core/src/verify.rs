//! Verification suites shared by the CLI and the test harness, producing a
//! versioned JSON report.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dimer::{build_aztec, check_t_equals_z, enumerate, weights_from_faces, MAX_ENUMERATION_SIZE};
use crate::embedding::{compare_theorem, embedding_at, validate_perfect, Mode};
use crate::error::{Error, Result};
use crate::octahedron::{closed_form_t, coeff_l, density_at, density_dual, evolve_t, InitialData};
use crate::rings::{rational, Complex64, Rational};
use crate::wavefield::{solve_wave, tilde_gamma, BoundaryData, Direction, FundamentalSet, LambdaLattice, ResidueClass, SourceWeights};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem,
    Oracle,
    Geometry,
    Lemmas,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "theorem" => Suite::Theorem,
            "oracle" => Suite::Oracle,
            "geometry" => Suite::Geometry,
            "lemmas" => Suite::Lemmas,
            "all" => Suite::All,
            other => return Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub n: i64,
    pub a: Rational,
    pub mode: Mode,
    pub tol: f64,
    pub seed: u64,
}

impl VerifyParams {
    pub fn new(n: i64, a: Rational, mode: Mode, tol: f64, seed: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument(format!("n must be >= 1, got {n}")));
        }
        if a <= Rational::zero() {
            return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
        }
        Ok(Self { n, a, mode, tol, seed })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            lhs: None,
            rhs: None,
            max_error: None,
            passed,
        }
    }

    fn exact(name: impl Into<String>, lhs: &Rational, rhs: &Rational) -> Self {
        let mut c = Self::new(name, lhs == rhs);
        c.lhs = Some(lhs.to_string());
        c.rhs = Some(rhs.to_string());
        c
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn error(mut self, e: f64) -> Self {
        self.max_error = Some(e);
        self
    }

    /// Exact check aggregated over many points: reports the first mismatch.
    fn tally(name: impl Into<String>, count: usize, first_mismatch: Option<(String, Rational, Rational)>) -> Self {
        match first_mismatch {
            None => Self::new(name, true).param("points", count),
            Some((at, lhs, rhs)) => {
                let mut c = Self::exact(name, &lhs, &rhs).param("points", count).param("first_mismatch", at);
                c.passed = false;
                c
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub suite: Suite,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub passed: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Positive rationals `p/q` with `1 <= p, q <= 9`, from a fixed seed.
pub fn random_initial_data(rng: &mut ChaCha8Rng) -> InitialData {
    let mut draw = || rational(rng.gen_range(1..=9), rng.gen_range(1..=9));
    InitialData::new(draw(), draw(), draw(), draw()).expect("positive draws")
}

pub fn run_suite(suite: Suite, params: &VerifyParams) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let suites: &[Suite] = match suite {
        Suite::All => &[Suite::Theorem, Suite::Oracle, Suite::Geometry, Suite::Lemmas],
        ref one => std::slice::from_ref(one),
    };
    for s in suites {
        match s {
            Suite::Theorem => checks.extend(theorem_checks(params)?),
            Suite::Oracle => checks.extend(oracle_checks(params, &mut rng)?),
            Suite::Geometry => checks.extend(geometry_checks(params)?),
            Suite::Lemmas => checks.extend(lemma_checks(params, &mut rng)?),
            Suite::All => unreachable!(),
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut p = BTreeMap::new();
    p.insert("n".to_string(), params.n.to_string());
    p.insert("a".to_string(), params.a.to_string());
    p.insert("mode".to_string(), format!("{:?}", params.mode).to_lowercase());
    p.insert("tol".to_string(), format!("{:e}", params.tol));
    p.insert("seed".to_string(), params.seed.to_string());
    Ok(VerifyReport {
        schema: SCHEMA_VERSION,
        suite,
        params: p,
        summary: Summary {
            total: checks.len(),
            failed,
        },
        passed: failed == 0,
        checks,
    })
}

/// Recurrence embedding against the assembled fields, stage by stage.
pub fn theorem_checks(params: &VerifyParams) -> Result<Vec<Check>> {
    let report = match params.mode {
        Mode::Exact => compare_theorem::<Rational>(&params.a, params.n, Mode::Exact)?,
        Mode::Float => compare_theorem::<f64>(&params.a, params.n, Mode::Float)?,
    };
    Ok(report
        .stages
        .iter()
        .map(|s| {
            let passed = s.exact_equal.unwrap_or(s.max_discrepancy <= params.tol);
            let mut c = Check::new(format!("theorem identity, stage {}", s.stage), passed)
                .param("a", &report.a)
                .param("points", s.points)
                .param("source_weights", &report.source_weights)
                .param("even_parity_layer", &report.even_layer)
                .error(s.max_discrepancy);
            if let Some((j, k)) = s.first_mismatch {
                c = c.param("first_mismatch", format!("({j},{k})"));
            }
            c
        })
        .collect())
}

/// Brute-force dimer checks at sizes within the enumeration guard.
pub fn oracle_checks(params: &VerifyParams, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let max_n = params.n.min(MAX_ENUMERATION_SIZE as i64 + 1);
    let a = &params.a;
    let periodic = InitialData::two_periodic(a)?;
    let random = random_initial_data(rng);
    let fields = FundamentalSet::<Rational>::new(a, max_n)?;
    let mut checks = Vec::new();
    for n in 1..=max_n {
        for center in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            if (center.0 + center.1 + n).rem_euclid(2) == 0 {
                continue;
            }
            for (label, init) in [("two-periodic", &periodic), ("random", &random)] {
                let tz = check_t_equals_z(init, center, n)?;
                checks.push(
                    Check::exact(format!("T=Z*prod(t), {label}"), &tz.t, &(&tz.z * &tz.face_product))
                        .param("n", n)
                        .param("center", format!("{center:?}"))
                        .param("init", format!("{:?}", init.values().map(|v| v.to_string()))),
                );
            }

            let graph = build_aztec(center, n)?;
            let stats = enumerate(&weights_from_faces(&graph, &periodic))?;
            let mut mismatch = None;
            let mut total = Rational::zero();
            for &(e, h) in graph.closure() {
                let class = ResidueClass::of(e, h);
                let value = fields.field(class).value(center.0 - (e - class.eps), center.1 - (h - class.eta), n);
                let expected = stats.one_minus_d(&graph, (e, h))?;
                total += &expected;
                if value != expected && mismatch.is_none() {
                    mismatch = Some((format!("face ({e},{h})"), value, expected));
                }
            }
            checks.push(
                Check::tally("f=E[1-D]", graph.closure().len(), mismatch)
                    .param("n", n)
                    .param("center", format!("{center:?}")),
            );
            if n <= 4 {
                checks.push(
                    Check::exact("sum of E[1-D] over the closed diamond", &total, &Rational::one())
                        .param("n", n)
                        .param("center", format!("{center:?}")),
                );
                let mut mass = Rational::zero();
                for &(e, h) in graph.closure() {
                    mass += density_at(&random, (e, h), center.0, center.1, n)?;
                }
                checks.push(
                    Check::exact("sum of densities over the closed diamond, random data", &mass, &Rational::one())
                        .param("n", n)
                        .param("center", format!("{center:?}")),
                );
            }
        }
    }
    if params.n > max_n {
        checks.push(Check::new("oracle size capped by the enumeration guard", true).param("max_n", max_n));
    }
    Ok(checks)
}

/// Geometric perfectness of every stage up to `n`, in double precision.
pub fn geometry_checks(params: &VerifyParams) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut e = embedding_at::<Complex64>(&params.a, 1)?;
    loop {
        let report = validate_perfect(&e, params.tol);
        let errors = [
            report.max_face_weight_error,
            report.max_isometry_error,
            report.max_bisector_error,
            report.rhombus_error,
        ];
        let mut c = Check::new(format!("perfect t-embedding, stage {}", e.stage()), report.passed())
            .param("orientation", format!("{:?}", report.orientation).to_lowercase())
            .param("faces", report.faces_checked)
            .error(errors.into_iter().fold(0.0, f64::max));
        if let Some(v) = report.violations.first() {
            c = c.param("first_violation", v);
        }
        checks.push(c);
        if e.stage() >= params.n {
            break;
        }
        e = e.step()?;
    }
    Ok(checks)
}

/// Representation lemmas, the closed form, the coefficients and the
/// identification of fundamental solutions with densities.
pub fn lemma_checks(params: &VerifyParams, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let a = &params.a;
    let depth = params.n;
    let mut checks = Vec::new();
    checks.extend(representation_checks(a, depth)?);
    let one = Rational::one();
    if *a != one {
        checks.extend(representation_checks(&one, depth)?);
    }

    let periodic = InitialData::two_periodic(a)?;
    let random = random_initial_data(rng);
    let cf_depth = depth.min(12);
    for (label, init) in [("two-periodic", &periodic), ("random", &random)] {
        let field = evolve_t(init, (0, 0), cf_depth)?;
        let mut mismatch = None;
        let mut count = 0;
        for ((j, k, n), v) in field.iter() {
            count += 1;
            let cf = closed_form_t(init, j, k, n)?;
            if *v != cf && mismatch.is_none() {
                mismatch = Some((format!("({j},{k},{n})"), v.clone(), cf));
            }
        }
        checks.push(Check::tally(format!("closed form, {label}"), count, mismatch).param("depth", cf_depth));
    }

    let mut mismatch = None;
    let mut count = 0;
    for n in 1..=depth {
        for j in -3..=3 {
            for k in -3..=3 {
                if (j + k + n) % 2 != 0 {
                    continue;
                }
                count += 1;
                let l = coeff_l(&periodic, j, k, n)?;
                let expected = (Rational::one() + tilde_gamma(j, k, n, a)).recip();
                if l != expected && mismatch.is_none() {
                    mismatch = Some((format!("({j},{k},{n})"), l, expected));
                }
            }
        }
    }
    checks.push(Check::tally("L = 1/(1+tilde_gamma)", count, mismatch));

    let fd_depth = depth.min(6);
    let fields = FundamentalSet::<Rational>::new(a, fd_depth)?;
    for class in ResidueClass::ALL {
        let rho = density_dual(&periodic, (class.eps, class.eta), (0, 0), fd_depth)?;
        let start = if class.eps == class.eta { 0 } else { 1 };
        let mut mismatch = None;
        let mut count = 0;
        for (&(j, k, n), v) in &rho {
            if n < start || j.abs() + k.abs() > n + 1 {
                continue;
            }
            count += 1;
            let f = fields.field(class).value(j, k, n);
            if f != *v && mismatch.is_none() {
                mismatch = Some((format!("({j},{k},{n})"), f, v.clone()));
            }
        }
        checks.push(
            Check::tally(format!("fundamental = density, class ({},{})", class.eps, class.eta), count, mismatch)
                .param("depth", fd_depth),
        );
    }
    Ok(checks)
}

fn representation_checks(a: &Rational, depth: i64) -> Result<Vec<Check>> {
    let fields = FundamentalSet::<Rational>::new(a, depth)?;
    let uniform = a.is_one();
    let mut checks = Vec::new();
    for dir in Direction::ALL {
        let wave = solve_wave(a, BoundaryData::<Rational>::unit(dir), depth, SourceWeights::EastGamma)?;
        let mut mismatch = None;
        let mut uniform_mismatch = None;
        let mut count = 0;
        for (j, k, n) in LambdaLattice::new(depth).points() {
            count += 1;
            let sum = fields.directional(dir, j, k, n)?;
            let direct = wave.value(j, k, n);
            if sum != direct && mismatch.is_none() {
                mismatch = Some((format!("({j},{k},{n})"), sum.clone(), direct.clone()));
            }
            if uniform {
                let single = fields.uniform_directional(dir, j, k, n)?;
                if single != direct && uniform_mismatch.is_none() {
                    uniform_mismatch = Some((format!("({j},{k},{n})"), single, direct));
                }
            }
        }
        checks.push(
            Check::tally(format!("f_{} by shifted fundamental sums", dir.name()), count, mismatch)
                .param("a", a)
                .param("depth", depth),
        );
        if uniform {
            checks.push(
                Check::tally(format!("f_{} by the uniform single sum", dir.name()), count, uniform_mismatch)
                    .param("depth", depth),
            );
        }
    }
    Ok(checks)
}
