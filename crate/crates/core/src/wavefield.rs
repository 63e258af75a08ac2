//! The discrete wave equation on `Λ = {(j, k, n) : j + k + n odd}`:
//!
//! `f(j,k,n+1) + f(j,k,n-1) = [f(j+1,k,n) + f(j-1,k,n) + γ̃ (f(j,k+1,n) + f(j,k-1,n))] / (γ̃ + 1) + sources`
//!
//! with zero data on layers `-1` and `0`. Boundary-driven solutions, the four
//! fundamental solutions, and the representation of the directional
//! solutions as sums of shifted fundamental ones.

use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{check_odd, Error, Result};
use crate::lattice::Diamond;
use crate::rings::{integer, rational, ComplexScalar, Rational, RealScalar, Scalar};

/// Coefficient of the vertical neighbours at a step site `(j, k, n)`.
///
/// `1` for odd `n`; for `n ≡ 0 (mod 4)` it is `a²` on even `(j, k)` and
/// `a⁻²` on odd `(j, k)`; for `n ≡ 2 (mod 4)` the two are exchanged.
pub fn tilde_gamma(j: i64, k: i64, n: i64, a: &Rational) -> Rational {
    if n.rem_euclid(2) == 1 {
        return Rational::one();
    }
    let a2 = a * a;
    let even_site = j.rem_euclid(2) == 0 && k.rem_euclid(2) == 0;
    if (n.rem_euclid(4) == 0) == even_site {
        a2
    } else {
        a2.recip()
    }
}

/// Points of `Λ` with `-1 <= n <= depth` and `|j| + |k| <= n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LambdaLattice {
    pub depth: i64,
}

impl LambdaLattice {
    pub fn new(depth: i64) -> Self {
        Self { depth }
    }

    pub fn contains(&self, j: i64, k: i64, n: i64) -> bool {
        (j + k + n).rem_euclid(2) == 1 && (-1..=self.depth).contains(&n) && j.abs() + k.abs() <= n + 1
    }

    pub fn points(&self) -> impl Iterator<Item = (i64, i64, i64)> {
        (-1..=self.depth).flat_map(|n| {
            let r = n + 1;
            (-r..=r).flat_map(move |j| {
                let half = r - j.abs();
                (-half..=half)
                    .filter(move |k| (j + k + n).rem_euclid(2) == 1)
                    .map(move |k| (j, k, n))
            })
        })
    }
}

/// The boundary vector `(b_0, b_E, b_N, b_W, b_S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData<S> {
    pub b_0: S,
    pub b_e: S,
    pub b_n: S,
    pub b_w: S,
    pub b_s: S,
}

impl<S: Scalar> BoundaryData<S> {
    pub fn zero() -> Self {
        Self {
            b_0: S::zero(),
            b_e: S::zero(),
            b_n: S::zero(),
            b_w: S::zero(),
            b_s: S::zero(),
        }
    }

    /// Unit source in one direction, zero elsewhere.
    pub fn unit(dir: Direction) -> Self {
        let mut b = Self::zero();
        *b.component_mut(dir) = S::one();
        b
    }

    pub fn component_mut(&mut self, dir: Direction) -> &mut S {
        match dir {
            Direction::East => &mut self.b_e,
            Direction::North => &mut self.b_n,
            Direction::West => &mut self.b_w,
            Direction::South => &mut self.b_s,
        }
    }
}

impl<S: ComplexScalar> BoundaryData<S> {
    /// Boundary data of `T`: `b_E = 1`, `b_N = ia`, `b_W = -1`, `b_S = -ia`.
    pub fn embedding(a: &Rational) -> Self {
        let zero = Rational::zero();
        Self {
            b_0: S::zero(),
            b_e: S::one(),
            b_n: S::from_parts(&zero, a),
            b_w: -S::one(),
            b_s: S::from_parts(&zero, &-a.clone()),
        }
    }

    /// Boundary data of `O`: `b_E = b_W = 1`, `b_N = b_S = ia`.
    pub fn origami(a: &Rational) -> Self {
        let zero = Rational::zero();
        Self {
            b_0: S::zero(),
            b_e: S::one(),
            b_n: S::from_parts(&zero, a),
            b_w: S::one(),
            b_s: S::from_parts(&zero, a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    East,
    North,
    West,
    South,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::East, Direction::North, Direction::West, Direction::South];

    pub fn name(self) -> &'static str {
        match self {
            Direction::East => "E",
            Direction::North => "N",
            Direction::West => "W",
            Direction::South => "S",
        }
    }
}

/// How the four boundary sources are weighted at their step sites.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SourceWeights {
    /// `b_E`, `b_W` carry `γ̃/(γ̃+1)` and `b_N`, `b_S` carry `1/(γ̃+1)`.
    /// This is the weighting under which the recurrence embedding and the
    /// assembled fields agree.
    #[default]
    EastGamma,
    /// `b_E`, `b_W` carry `1/(γ̃+1)` and `b_N`, `b_S` carry `γ̃/(γ̃+1)`.
    EastUnit,
}

/// Residue class `(ε, η) ∈ {0, 1}²` of a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueClass {
    pub eps: i64,
    pub eta: i64,
}

impl ResidueClass {
    pub const ALL: [ResidueClass; 4] = [
        ResidueClass { eps: 0, eta: 0 },
        ResidueClass { eps: 0, eta: 1 },
        ResidueClass { eps: 1, eta: 0 },
        ResidueClass { eps: 1, eta: 1 },
    ];

    pub fn new(eps: i64, eta: i64) -> Result<Self> {
        if !(0..=1).contains(&eps) || !(0..=1).contains(&eta) {
            return Err(Error::InvalidArgument(format!("residue class ({eps}, {eta}) not in {{0,1}}²")));
        }
        Ok(Self { eps, eta })
    }

    pub fn of(j: i64, k: i64) -> Self {
        Self {
            eps: j.rem_euclid(2),
            eta: k.rem_euclid(2),
        }
    }

    fn index(self) -> usize {
        (2 * self.eps + self.eta) as usize
    }

    /// The single delta source: `(step site (j, k, n), sign)`.
    pub fn source(self) -> ((i64, i64, i64), i64) {
        match (self.eps, self.eta) {
            (0, 0) => ((0, 0, 0), 1),
            (1, 1) => ((1, 1, 0), 1),
            (0, 1) => ((0, 1, 1), -1),
            _ => ((1, 0, 1), -1),
        }
    }
}

/// A signed delta source applied at step site `site`, i.e. it enters
/// `f(site.0, site.1, site.2 + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSource<S> {
    pub site: (i64, i64, i64),
    pub weight: S,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source<S> {
    Boundary {
        data: BoundaryData<S>,
        weights: SourceWeights,
    },
    Points(Vec<PointSource<S>>),
}

/// A solution of the wave equation stored on layers `-1..=depth`.
#[derive(Clone, Debug)]
pub struct WaveField<S> {
    a: Rational,
    depth: i64,
    source: Source<S>,
    reach: i64,
    /// `layers[n + 1]` is layer `n`.
    layers: Vec<Diamond<S>>,
}

struct StepWeights<S> {
    horizontal: S,
    vertical: S,
}

fn step_weights<S: Scalar>(gamma: &Rational) -> StepWeights<S> {
    let denom = gamma + Rational::one();
    StepWeights {
        horizontal: S::from_rational(&denom.recip()),
        vertical: S::from_rational(&(gamma / &denom)),
    }
}

impl<S: Scalar> WaveField<S> {
    pub fn solve(a: &Rational, depth: i64, source: Source<S>) -> Result<Self> {
        Self::solve_observed(a, depth, source, |_| {})
    }

    /// Like [`solve`](Self::solve), calling `on_layer(n)` after layer `n` is sealed.
    pub fn solve_observed(a: &Rational, depth: i64, source: Source<S>, mut on_layer: impl FnMut(i64)) -> Result<Self> {
        if depth < 0 {
            return Err(Error::InvalidArgument(format!("depth must be >= 0, got {depth}")));
        }
        if *a <= Rational::zero() {
            return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
        }
        let reach = match &source {
            Source::Boundary { .. } => 0,
            Source::Points(points) => points
                .iter()
                .map(|p| (p.site.0.abs() + p.site.1.abs() - 1).max(0))
                .max()
                .unwrap_or(0),
        };
        let a2 = a * a;
        let gammas = [a2.clone(), Rational::one(), a2.recip()];
        let weights: Vec<StepWeights<S>> = gammas.iter().map(step_weights).collect();
        let pick = |g: &Rational| -> usize { gammas.iter().position(|x| x == g).expect("γ̃ in {a², 1, a⁻²}") };

        let mut layers: Vec<Diamond<S>> = Vec::with_capacity(depth as usize + 2);
        layers.push(Diamond::new((0, 0), reach, S::zero()));
        layers.push(Diamond::new((0, 0), 1 + reach, S::zero()));
        for m in 0..depth {
            let radius = m + 2 + reach;
            let mut next = Diamond::new((0, 0), radius, S::zero());
            {
                let cur = &layers[m as usize + 1];
                let prev = &layers[m as usize];
                let at = |d: &Diamond<S>, j: i64, k: i64| d.get(j, k).cloned().unwrap_or_else(S::zero);
                let sites: Vec<_> = next.sites_with_parity(m.rem_euclid(2)).collect();
                for (j, k) in sites {
                    let g = tilde_gamma(j, k, m, a);
                    let w = &weights[pick(&g)];
                    let mut v = -at(prev, j, k)
                        + w.horizontal.clone() * (at(cur, j + 1, k) + at(cur, j - 1, k))
                        + w.vertical.clone() * (at(cur, j, k + 1) + at(cur, j, k - 1));
                    v = v + source_term(&source, w, j, k, m);
                    if !v.is_zero() {
                        next.set(j, k, v);
                    }
                }
            }
            layers.push(next);
            on_layer(m + 1);
        }
        let field = Self {
            a: a.clone(),
            depth,
            source,
            reach,
            layers,
        };
        debug_assert!(field.support_violation().is_none(), "{:?}", field.support_violation());
        Ok(field)
    }
}

fn source_term<S: Scalar>(source: &Source<S>, w: &StepWeights<S>, j: i64, k: i64, m: i64) -> S {
    let mut v = S::zero();
    match source {
        Source::Boundary { data, weights } => {
            let (east, north) = match weights {
                SourceWeights::EastGamma => (&w.vertical, &w.horizontal),
                SourceWeights::EastUnit => (&w.horizontal, &w.vertical),
            };
            if (j, k) == (m, 0) {
                v = v + east.clone() * data.b_e.clone();
            }
            if (j, k) == (-m, 0) {
                v = v + east.clone() * data.b_w.clone();
            }
            if (j, k) == (0, m) {
                v = v + north.clone() * data.b_n.clone();
            }
            if (j, k) == (0, -m) {
                v = v + north.clone() * data.b_s.clone();
            }
            // As written this term sits on a site that is never a step site.
            if (j, k, m) == (0, 0, 1) {
                v = v + data.b_0.clone();
            }
        }
        Source::Points(points) => {
            for p in points {
                if p.site == (j, k, m) {
                    v = v + p.weight.clone();
                }
            }
        }
    }
    v
}

impl<S: Scalar> WaveField<S> {
    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn source(&self) -> &Source<S> {
        &self.source
    }

    /// `f(j, k, n)`; zero outside the stored cone, where the field vanishes.
    pub fn get(&self, j: i64, k: i64, n: i64) -> Result<S> {
        check_odd(j, k, n)?;
        if n < -1 || n > self.depth {
            return Err(Error::OutOfDomain { j, k, n });
        }
        Ok(self.value(j, k, n))
    }

    /// Like [`get`](Self::get) but returns zero for any argument off the
    /// stored layers, including `n < -1`.
    pub fn value(&self, j: i64, k: i64, n: i64) -> S {
        if n < -1 || n > self.depth {
            return S::zero();
        }
        self.layers[(n + 1) as usize]
            .get(j, k)
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// Every stored point of `Λ` with its value.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64, i64), &S)> + '_ {
        self.layers.iter().enumerate().flat_map(|(idx, layer)| {
            let n = idx as i64 - 1;
            layer
                .sites_with_parity((n + 1).rem_euclid(2))
                .filter_map(move |(j, k)| layer.get(j, k).map(|v| ((j, k, n), v)))
        })
    }

    /// First stored point where the field is non-zero outside its light cone.
    pub fn support_violation(&self) -> Option<(i64, i64, i64)> {
        self.iter().find_map(|((j, k, n), v)| {
            if v.is_zero() {
                return None;
            }
            let inside = match &self.source {
                Source::Boundary { .. } => {
                    n >= 1 && (j.abs() + k.abs() < n || (j.abs() + k.abs() == n && (j == 0 || k == 0)))
                }
                Source::Points(points) => points.iter().any(|p| {
                    let (x, y, z) = p.site;
                    (j - x).abs() + (k - y).abs() < n - z
                }),
            };
            (!inside).then_some((j, k, n))
        })
    }

    pub fn stored_radius(&self, n: i64) -> i64 {
        n + 1 + self.reach
    }
}

/// Boundary-driven solution.
pub fn solve_wave<S: Scalar>(
    a: &Rational,
    boundary: BoundaryData<S>,
    depth: i64,
    weights: SourceWeights,
) -> Result<WaveField<S>> {
    WaveField::solve(
        a,
        depth,
        Source::Boundary {
            data: boundary,
            weights,
        },
    )
}

/// Fundamental solution of the given class.
pub fn fundamental<R: Scalar>(a: &Rational, class: ResidueClass, depth: i64) -> Result<WaveField<R>> {
    fundamental_observed(a, class, depth, |_| {})
}

/// [`fundamental`] with a per-layer callback, as in [`WaveField::solve_observed`].
pub fn fundamental_observed<R: Scalar>(
    a: &Rational,
    class: ResidueClass,
    depth: i64,
    on_layer: impl FnMut(i64),
) -> Result<WaveField<R>> {
    let (site, sign) = class.source();
    WaveField::solve_observed(
        a,
        depth,
        Source::Points(vec![PointSource {
            site,
            weight: R::from_rational(&integer(sign)),
        }]),
        on_layer,
    )
}

/// The four fundamental solutions, evaluated with index shifts to build the
/// directional solutions and the assembled `T` and `O`.
#[derive(Clone, Debug)]
pub struct FundamentalSet<R> {
    a: Rational,
    depth: i64,
    fields: Vec<WaveField<R>>,
    minus: R,
    plus: R,
    half: R,
}

impl<R: RealScalar> FundamentalSet<R> {
    pub fn new(a: &Rational, depth: i64) -> Result<Self> {
        let fields = ResidueClass::ALL
            .iter()
            .map(|&c| fundamental(a, c, depth))
            .collect::<Result<Vec<_>>>()?;
        let a2 = a * a;
        Ok(Self {
            a: a.clone(),
            depth,
            fields,
            minus: R::from_rational(&(&a2 / (&a2 + Rational::one()))),
            plus: R::from_rational(&(Rational::one() + &a2).recip()),
            half: R::from_rational(&rational(1, 2)),
        })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn field(&self, class: ResidueClass) -> &WaveField<R> {
        &self.fields[class.index()]
    }

    fn f(&self, eps: i64, eta: i64, j: i64, k: i64, n: i64) -> R {
        self.fields[(2 * eps + eta) as usize].value(j, k, n)
    }

    fn check(&self, j: i64, k: i64, n: i64) -> Result<()> {
        check_odd(j, k, n)?;
        if n < -1 || n > self.depth {
            return Err(Error::OutOfDomain { j, k, n });
        }
        Ok(())
    }

    /// `f_E`, `f_N`, `f_W` or `f_S` at `(j, k, n)` as a sum of shifted fundamental solutions.
    pub fn directional(&self, dir: Direction, j: i64, k: i64, n: i64) -> Result<R> {
        self.check(j, k, n)?;
        let (pm, pp, h) = (&self.minus, &self.plus, &self.half);
        let mut sum = R::zero();
        for s in 0..=(n.div_euclid(4) + 1) {
            let s4 = 4 * s;
            let term = match dir {
                Direction::East => {
                    pm.clone() * self.f(0, 0, j - s4, k, n - s4)
                        + pp.clone() * self.f(1, 1, j - s4 - 1, k + 1, n - s4 - 2)
                        - h.clone() * self.f(0, 1, j - s4 - 3, k + 1, n - s4 - 2)
                        - h.clone() * self.f(1, 0, j - s4, k, n - s4)
                }
                Direction::West => {
                    pm.clone() * self.f(0, 0, j + s4, k, n - s4)
                        + pp.clone() * self.f(1, 1, j + s4 + 3, k + 1, n - s4 - 2)
                        - h.clone() * self.f(0, 1, j + s4 + 3, k + 1, n - s4 - 2)
                        - h.clone() * self.f(1, 0, j + s4 + 2, k, n - s4)
                }
                Direction::North => {
                    pp.clone() * self.f(0, 0, j, k - s4, n - s4)
                        + pm.clone() * self.f(1, 1, j + 1, k - s4 - 1, n - s4 - 2)
                        - h.clone() * self.f(1, 0, j + 1, k - s4 - 3, n - s4 - 2)
                        - h.clone() * self.f(0, 1, j, k - s4, n - s4)
                }
                Direction::South => {
                    pp.clone() * self.f(0, 0, j, k + s4, n - s4)
                        + pm.clone() * self.f(1, 1, j + 1, k + s4 + 3, n - s4 - 2)
                        - h.clone() * self.f(1, 0, j + 1, k + s4 + 3, n - s4 - 2)
                        - h.clone() * self.f(0, 1, j, k + s4 + 2, n - s4)
                }
            };
            sum = sum + term;
        }
        Ok(sum)
    }

    /// Single-sum form valid at `a = 1`: `f_E(j,k,n) = ½ Σ_{s=0}^{n+1} f_(0,0)(j-s, k, n-s)`.
    pub fn uniform_directional(&self, dir: Direction, j: i64, k: i64, n: i64) -> Result<R> {
        self.check(j, k, n)?;
        let mut sum = R::zero();
        for s in 0..=(n + 1) {
            let (dj, dk) = match dir {
                Direction::East => (-s, 0),
                Direction::West => (s, 0),
                Direction::North => (0, -s),
                Direction::South => (0, s),
            };
            sum = sum + self.f(0, 0, j + dj, k + dk, n - s);
        }
        Ok(self.half.clone() * sum)
    }

    /// `f_E + i a f_N - f_W - i a f_S`.
    pub fn assemble_t(&self, j: i64, k: i64, n: i64) -> Result<Complex<R>> {
        let a = R::from_rational(&self.a);
        let [e, no, w, so] = self.all_directions(j, k, n)?;
        Ok(Complex::new(e - w, a * (no - so)))
    }

    /// `f_E + i a f_N + f_W + i a f_S`.
    pub fn assemble_o(&self, j: i64, k: i64, n: i64) -> Result<Complex<R>> {
        let a = R::from_rational(&self.a);
        let [e, no, w, so] = self.all_directions(j, k, n)?;
        Ok(Complex::new(e + w, a * (no + so)))
    }

    fn all_directions(&self, j: i64, k: i64, n: i64) -> Result<[R; 4]> {
        Ok([
            self.directional(Direction::East, j, k, n)?,
            self.directional(Direction::North, j, k, n)?,
            self.directional(Direction::West, j, k, n)?,
            self.directional(Direction::South, j, k, n)?,
        ])
    }
}

/// One directional value, solving the fundamental fields up to depth `n`.
pub fn directional_f(a: &Rational, dir: Direction, j: i64, k: i64, n: i64) -> Result<Rational> {
    FundamentalSet::<Rational>::new(a, n.max(0))?.directional(dir, j, k, n)
}

pub fn assemble_t(a: &Rational, j: i64, k: i64, n: i64) -> Result<Complex<Rational>> {
    FundamentalSet::<Rational>::new(a, n.max(0))?.assemble_t(j, k, n)
}

pub fn assemble_o(a: &Rational, j: i64, k: i64, n: i64) -> Result<Complex<Rational>> {
    FundamentalSet::<Rational>::new(a, n.max(0))?.assemble_o(j, k, n)
}

/// Text for the `re,im` columns of a field dump.
pub trait CsvParts {
    fn csv_parts(&self) -> (String, String);
}

impl CsvParts for Rational {
    fn csv_parts(&self) -> (String, String) {
        (self.to_string(), "0".to_string())
    }
}

impl CsvParts for f64 {
    fn csv_parts(&self) -> (String, String) {
        (format!("{self:e}"), "0e0".to_string())
    }
}

impl<T: RealScalar> CsvParts for Complex<T> {
    fn csv_parts(&self) -> (String, String) {
        self.text_parts()
    }
}

impl<S: Scalar + CsvParts> WaveField<S> {
    /// CSV rows `j,k,n,re,im` for every stored point of `Λ`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,k,n,re,im\n");
        for ((j, k, n), v) in self.iter() {
            let (re, im) = v.csv_parts();
            let _ = writeln!(out, "{j},{k},{n},{re},{im}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::GaussianRational;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        rational(p, d)
    }

    #[test]
    fn tilde_gamma_table() {
        let a = q(7, 10);
        let a2 = &a * &a;
        assert_eq!(tilde_gamma(0, 0, 1, &a), q(1, 1));
        assert_eq!(tilde_gamma(0, 0, 0, &a), a2);
        assert_eq!(tilde_gamma(1, 1, 0, &a), a2.recip());
        assert_eq!(tilde_gamma(1, 1, 2, &a), a2);
        assert_eq!(tilde_gamma(2, 0, 2, &a), a2.recip());
        assert_eq!(tilde_gamma(-3, 1, 4, &a), a2.recip());
        for (j, k, n) in [(0, 0, 0), (1, 1, 0), (2, 0, 2), (3, -1, 6)] {
            assert_eq!(tilde_gamma(j, k, n, &a), tilde_gamma(j + 4, k, n + 4, &a));
            assert_eq!(tilde_gamma(j, k, n, &a), tilde_gamma(j + 1, k + 1, n + 2, &a));
            assert_eq!(tilde_gamma(j, k, n, &a), tilde_gamma(j + 1, k - 1, n + 2, &a));
        }
    }

    #[test]
    fn lattice_enumeration() {
        let lattice = LambdaLattice::new(4);
        let points: Vec<_> = lattice.points().collect();
        let unique: std::collections::HashSet<_> = points.iter().collect();
        assert_eq!(unique.len(), points.len());
        assert!(points.iter().all(|&(j, k, n)| lattice.contains(j, k, n)));
        assert!(!lattice.contains(0, 0, 0));
        assert!(lattice.contains(0, 0, 1));
        assert!(lattice.contains(3, 0, 2));
        assert!(!lattice.contains(4, 1, 2));
    }

    #[test]
    fn single_step_values() {
        let a = q(7, 10);
        let a2 = &a * &a;
        let east = BoundaryData::<Rational>::unit(Direction::East);
        let printed = solve_wave(&a, east.clone(), 3, SourceWeights::EastUnit).unwrap();
        assert_eq!(printed.get(0, 0, 1).unwrap(), (Rational::one() + &a2).recip());
        let field = solve_wave(&a, east, 3, SourceWeights::EastGamma).unwrap();
        assert_eq!(field.get(0, 0, 1).unwrap(), &a2 / (Rational::one() + &a2));
        for (j, k) in [(1, 0), (0, 1), (-1, 2)] {
            assert!(field.get(j, k, 0).unwrap().is_zero());
        }
        assert!(field.get(3, 0, 2).unwrap().is_zero());
        assert!(field.get(3, 1, 2).is_err());
    }

    #[test]
    fn fundamental_single_steps() {
        let a = q(7, 10);
        let f00 = fundamental::<Rational>(&a, ResidueClass::new(0, 0).unwrap(), 4).unwrap();
        assert_eq!(f00.get(0, 0, 1).unwrap(), q(1, 1));
        let f10 = fundamental::<Rational>(&a, ResidueClass::new(1, 0).unwrap(), 4).unwrap();
        assert_eq!(f10.get(1, 0, 2).unwrap(), q(-1, 1));
        for class in ResidueClass::ALL {
            let f = fundamental::<Rational>(&a, class, 5).unwrap();
            for ((_, _, n), v) in f.iter() {
                if n <= 0 {
                    assert!(v.is_zero());
                }
            }
            assert_eq!(f.support_violation(), None);
        }
    }

    #[test]
    fn uniform_examples() {
        let one = q(1, 1);
        let set = FundamentalSet::<Rational>::new(&one, 4).unwrap();
        assert_eq!(set.directional(Direction::East, 1, 0, 2).unwrap(), q(3, 4));
        assert_eq!(set.uniform_directional(Direction::East, 1, 0, 2).unwrap(), q(3, 4));
        assert_eq!(set.assemble_t(1, 0, 2).unwrap(), GaussianRational::new(q(1, 2), q(0, 1)));
        assert_eq!(set.assemble_o(0, 0, 1).unwrap(), GaussianRational::new(q(1, 1), q(1, 1)));
    }

    #[test]
    fn assembled_values_at_the_first_layer() {
        for a in [q(7, 10), q(1, 2), q(3, 1)] {
            let a2 = &a * &a;
            let set = FundamentalSet::<Rational>::new(&a, 2).unwrap();
            assert!(set.assemble_t(0, 0, 1).unwrap().is_zero());
            let scale = q(2, 1) * &a / (Rational::one() + &a2);
            assert_eq!(set.assemble_o(0, 0, 1).unwrap(), GaussianRational::new(&scale * &a, scale));
            for dir in Direction::ALL {
                for (j, k) in [(1, 0), (0, 1), (-1, 0), (2, 1)] {
                    assert!(set.directional(dir, j, k, 0).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn sums_match_boundary_solutions() {
        for a in [q(7, 10), q(1, 1), q(3, 1)] {
            let depth = 9;
            let set = FundamentalSet::<Rational>::new(&a, depth).unwrap();
            for dir in Direction::ALL {
                let field = solve_wave(&a, BoundaryData::unit(dir), depth, SourceWeights::EastGamma).unwrap();
                for (j, k, n) in LambdaLattice::new(depth).points() {
                    assert_eq!(set.directional(dir, j, k, n).unwrap(), field.value(j, k, n), "{dir:?} ({j},{k},{n}) a={a}");
                }
            }
        }
    }

    #[test]
    fn reflection_symmetries() {
        let a = q(7, 10);
        let depth = 8;
        let field = |dir| solve_wave(&a, BoundaryData::<Rational>::unit(dir), depth, SourceWeights::EastGamma).unwrap();
        let (e, n_, w, s) = (
            field(Direction::East),
            field(Direction::North),
            field(Direction::West),
            field(Direction::South),
        );
        for (j, k, n) in LambdaLattice::new(depth).points() {
            assert_eq!(e.value(j, k, n), w.value(-j, k, n));
            assert_eq!(n_.value(j, k, n), s.value(j, -k, n));
        }
    }

    #[test]
    fn shifted_sources_are_translates() {
        let a = q(7, 10);
        let depth = 9;
        for class in ResidueClass::ALL {
            let base = fundamental::<Rational>(&a, class, depth).unwrap();
            let ((x, y, z), sign) = class.source();
            for (dx, dy, dz) in [(4, 0, 4), (0, 4, 4), (1, 1, 2), (-1, 1, 2), (1, -1, 2), (-4, 0, 4)] {
                let shifted = WaveField::<Rational>::solve(
                    &a,
                    depth,
                    Source::Points(vec![PointSource {
                        site: (x + dx, y + dy, z + dz),
                        weight: integer(sign),
                    }]),
                )
                .unwrap();
                for (j, k, n) in LambdaLattice::new(depth).points() {
                    assert_eq!(shifted.value(j, k, n), base.value(j - dx, k - dy, n - dz));
                }
            }
        }
    }

    #[test]
    fn float_mode_tracks_exact() {
        let a = q(7, 10);
        let exact = FundamentalSet::<Rational>::new(&a, 8).unwrap();
        let float = FundamentalSet::<f64>::new(&a, 8).unwrap();
        for (j, k, n) in LambdaLattice::new(8).points().filter(|p| p.2 >= 1) {
            let x = exact.assemble_o(j, k, n).unwrap().to_c64();
            let y = float.assemble_o(j, k, n).unwrap().to_c64();
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn csv_columns() {
        let f = fundamental::<Rational>(&q(1, 2), ResidueClass::new(0, 1).unwrap(), 2).unwrap();
        let csv = f.to_csv();
        assert!(csv.starts_with("j,k,n,re,im\n"));
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 5));
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-6i64..7, 1i64..5).prop_map(|(p, d)| q(p, d))
    }

    fn gaussian() -> impl Strategy<Value = GaussianRational> {
        (small(), small()).prop_map(|(re, im)| GaussianRational::new(re, im))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn solution_is_linear_in_the_boundary(
            b in proptest::collection::vec(gaussian(), 4),
            a in (1i64..5, 1i64..5).prop_map(|(p, d)| q(p, d)),
        ) {
            let depth = 6;
            let data = BoundaryData {
                b_0: GaussianRational::zero(),
                b_e: b[0].clone(),
                b_n: b[1].clone(),
                b_w: b[2].clone(),
                b_s: b[3].clone(),
            };
            let whole = solve_wave(&a, data, depth, SourceWeights::EastGamma).unwrap();
            let parts: Vec<_> = Direction::ALL
                .iter()
                .map(|&d| solve_wave(&a, BoundaryData::<GaussianRational>::unit(d), depth, SourceWeights::EastGamma).unwrap())
                .collect();
            for (j, k, n) in LambdaLattice::new(depth).points() {
                let combined = (0..4).fold(GaussianRational::zero(), |acc, i| acc + b[i].clone() * parts[i].value(j, k, n));
                prop_assert_eq!(whole.value(j, k, n), combined);
            }
        }
    }
}
