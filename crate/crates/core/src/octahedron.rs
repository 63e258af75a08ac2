//! The octahedron recurrence
//! `T(j,k,n+1) T(j,k,n-1) = T(j+1,k,n) T(j-1,k,n) + T(j,k+1,n) T(j,k-1,n)`
//! with 2×2-periodic initial data, its closed-form solution, and density
//! functions obtained by differentiating with dual numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{check_even, check_odd, Error, Result};
use crate::lattice::Diamond;
use crate::rings::{dual_lift, dual_log_derivative, integer, Dual, Rational, Scalar};

/// Positive 2×2-periodic initial values: `t(0,0) = a`, `t(1,1) = b`,
/// `t(0,1) = c`, `t(1,0) = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialData {
    a_oct: Rational,
    b_oct: Rational,
    c_oct: Rational,
    d_oct: Rational,
}

impl InitialData {
    pub fn new(a_oct: Rational, b_oct: Rational, c_oct: Rational, d_oct: Rational) -> Result<Self> {
        for v in [&a_oct, &b_oct, &c_oct, &d_oct] {
            if !v.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "initial values must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            a_oct,
            b_oct,
            c_oct,
            d_oct,
        })
    }

    pub fn uniform() -> Self {
        Self::new(integer(1), integer(1), integer(1), integer(1)).expect("positive")
    }

    /// The data `(1, 1, 1, 1/a)` whose dimer weights are the two-periodic ones.
    pub fn two_periodic(a: &Rational) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
        }
        Self::new(integer(1), integer(1), integer(1), a.recip())
    }

    pub fn values(&self) -> [&Rational; 4] {
        [&self.a_oct, &self.b_oct, &self.c_oct, &self.d_oct]
    }

    pub fn t(&self, j: i64, k: i64) -> &Rational {
        match (j.rem_euclid(2), k.rem_euclid(2)) {
            (0, 0) => &self.a_oct,
            (1, 1) => &self.b_oct,
            (0, 1) => &self.c_oct,
            _ => &self.d_oct,
        }
    }

    /// The layer on which the initial value at `(j, k)` lives.
    pub fn n_init(j: i64, k: i64) -> i64 {
        (j + k + 1).rem_euclid(2)
    }

    /// `((a²+b²)/(cd), (c²+d²)/(ab))`.
    fn growth_factors(&self) -> (Rational, Rational) {
        let (a, b, c, d) = (&self.a_oct, &self.b_oct, &self.c_oct, &self.d_oct);
        let x = (a * a + b * b) / (c * d);
        let y = (c * c + d * d) / (a * b);
        (x, y)
    }
}

/// Values whose sign can be checked after each recurrence layer.
pub trait PositiveCheck {
    fn is_strictly_positive(&self) -> bool;
}

impl PositiveCheck for Rational {
    fn is_strictly_positive(&self) -> bool {
        self.is_positive()
    }
}

impl PositiveCheck for Dual {
    fn is_strictly_positive(&self) -> bool {
        self.value.is_positive()
    }
}

impl PositiveCheck for f64 {
    fn is_strictly_positive(&self) -> bool {
        *self > 0.0
    }
}

/// Layered solution on the cone of depth `N` above a center. Layer `n`
/// holds the sites `|j-j0| + |k-k0| <= N - n + 1` with `j + k + n` odd.
#[derive(Clone, Debug)]
pub struct TField<S> {
    center: (i64, i64),
    depth: i64,
    layers: Vec<Diamond<Option<S>>>,
}

impl<S: Scalar + PositiveCheck> TField<S> {
    /// Seeds layers 0 and 1 from `seed(j, k)` and runs the recurrence up to `depth`.
    pub fn evolve(center: (i64, i64), depth: i64, seed: impl Fn(i64, i64) -> S) -> Result<Self> {
        if depth < 0 {
            return Err(Error::InvalidArgument(format!("depth must be >= 0, got {depth}")));
        }
        let mut layers: Vec<Diamond<Option<S>>> = Vec::with_capacity(depth as usize + 1);
        for n in 0..=depth.min(1) {
            let mut layer = Diamond::new(center, depth - n + 1, None);
            let sites: Vec<_> = layer.sites_with_parity((n + 1) % 2).collect();
            for (j, k) in sites {
                let v = seed(j, k);
                if !v.is_strictly_positive() {
                    return Err(Error::NonPositive { j, k, n });
                }
                layer.set(j, k, Some(v));
            }
            layers.push(layer);
        }
        for n in 1..depth {
            let next = {
                let cur = &layers[n as usize];
                let prev = &layers[n as usize - 1];
                let at = |d: &Diamond<Option<S>>, j: i64, k: i64| -> S {
                    d.get(j, k)
                        .and_then(|v| v.clone())
                        .expect("neighbor inside the cone")
                };
                let mut layer = Diamond::new(center, depth - n, None);
                let sites: Vec<_> = layer.sites_with_parity(n % 2).collect();
                for (j, k) in sites {
                    let numer = at(cur, j + 1, k) * at(cur, j - 1, k)
                        + at(cur, j, k + 1) * at(cur, j, k - 1);
                    let v = numer.checked_div(&at(prev, j, k))?;
                    if !v.is_strictly_positive() {
                        return Err(Error::NonPositive { j, k, n: n + 1 });
                    }
                    layer.set(j, k, Some(v));
                }
                layer
            };
            layers.push(next);
        }
        Ok(Self {
            center,
            depth,
            layers,
        })
    }
}

impl<S> TField<S> {
    pub fn center(&self) -> (i64, i64) {
        self.center
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn get(&self, j: i64, k: i64, n: i64) -> Result<&S> {
        check_odd(j, k, n)?;
        if n < 0 || n > self.depth {
            return Err(Error::OutOfDomain { j, k, n });
        }
        self.layers[n as usize]
            .get(j, k)
            .and_then(|v| v.as_ref())
            .ok_or(Error::OutOfDomain { j, k, n })
    }

    /// Every stored `(j, k, n)` with its value, layer by layer.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64, i64), &S)> + '_ {
        self.layers.iter().enumerate().flat_map(|(n, layer)| {
            layer
                .sites()
                .filter_map(move |(j, k)| layer.get(j, k).and_then(|v| v.as_ref()).map(|v| ((j, k, n as i64), v)))
        })
    }
}

impl<S: std::fmt::Display> TField<S> {
    /// CSV rows `j,k,n,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,k,n,value\n");
        for ((j, k, n), v) in self.iter() {
            let _ = writeln!(out, "{j},{k},{n},{v}");
        }
        out
    }
}

/// Exact evolution with rational values.
pub fn evolve_t(init: &InitialData, center: (i64, i64), depth: i64) -> Result<TField<Rational>> {
    TField::evolve(center, depth, |j, k| init.t(j, k).clone())
}

/// Evolution in the dual ring with the single site `tagged` lifted to `t + tδ`.
pub fn evolve_dual(
    init: &InitialData,
    center: (i64, i64),
    depth: i64,
    tagged: (i64, i64),
) -> Result<TField<Dual>> {
    TField::evolve(center, depth, |j, k| dual_lift(init.t(j, k), (j, k) == tagged))
}

/// `T(j, k, n)` for 2×2-periodic data without running the recurrence.
pub fn closed_form_t(init: &InitialData, j: i64, k: i64, n: i64) -> Result<Rational> {
    check_odd(j, k, n)?;
    if n < 0 {
        return Err(Error::OutOfDomain { j, k, n });
    }
    let (x, y) = init.growth_factors();
    let ex = (n / 2) * ((n + 1) / 2);
    let ey = ((n - 1) / 2).max(0) * (n / 2);
    let base = if n % 4 <= 1 {
        init.t(j, k)
    } else {
        init.t(j + 1, k + 1)
    };
    Ok(num_traits::pow(x, ex as usize) * num_traits::pow(y, ey as usize) * base)
}

/// Coefficient of the horizontal neighbours in the density recurrence,
/// `T(j+1,k,n) T(j-1,k,n) / (T(j,k,n+1) T(j,k,n-1))`, in closed form.
pub fn coeff_l(init: &InitialData, j: i64, k: i64, n: i64) -> Result<Rational> {
    check_even(j, k, n)?;
    if n < 1 {
        return Err(Error::OutOfDomain { j, k, n });
    }
    let (x, y) = init.growth_factors();
    let t = |dj: i64, dk: i64| init.t(j + dj, k + dk);
    let tau = if n % 4 <= 1 {
        t(1, 0) * t(-1, 0) / (t(0, 0) * t(1, 1))
    } else {
        t(2, 1) * t(0, 1) / (t(0, 0) * t(1, 1))
    };
    // Both exponents are 0 or -1.
    let mut value = tau;
    if n / 2 < (n + 1) / 2 {
        value /= x;
    }
    if (n - 1) / 2 < n / 2 {
        value /= y;
    }
    Ok(value)
}

/// `1 - coeff_l`, the coefficient of the vertical neighbours.
pub fn coeff_r(init: &InitialData, j: i64, k: i64, n: i64) -> Result<Rational> {
    Ok(Rational::one() - coeff_l(init, j, k, n)?)
}

/// Density `ρ^{(ε,η)}(j,k,n) = t ∂_t log T` for every site of the cone,
/// where `t` is the initial value at `site` treated as its own variable.
pub fn density_dual(
    init: &InitialData,
    site: (i64, i64),
    center: (i64, i64),
    depth: i64,
) -> Result<BTreeMap<(i64, i64, i64), Rational>> {
    let field = evolve_dual(init, center, depth, site)?;
    field
        .iter()
        .map(|(p, v)| dual_log_derivative(v).map(|rho| (p, rho)))
        .collect()
}

/// The density at a single point, evolving only the cone above it.
pub fn density_at(init: &InitialData, site: (i64, i64), j: i64, k: i64, n: i64) -> Result<Rational> {
    check_odd(j, k, n)?;
    if n < 0 {
        return Err(Error::OutOfDomain { j, k, n });
    }
    if n <= 1 {
        // Layers 0 and 1 hold initial data only.
        let here = (j, k) == site && InitialData::n_init(j, k) == n;
        return Ok(if here { Rational::one() } else { Rational::zero() });
    }
    let field = evolve_dual(init, (j, k), n, site)?;
    dual_log_derivative(field.get(j, k, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::rational;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        rational(p, d)
    }

    #[test]
    fn periodic_accessor() {
        let init = InitialData::new(q(2, 1), q(3, 1), q(5, 1), q(7, 1)).unwrap();
        assert_eq!(init.t(0, 0), &q(2, 1));
        assert_eq!(init.t(1, 1), &q(3, 1));
        assert_eq!(init.t(0, 1), &q(5, 1));
        assert_eq!(init.t(1, 0), &q(7, 1));
        assert_eq!(init.t(-2, 4), &q(2, 1));
        assert_eq!(init.t(-1, -3), &q(3, 1));
        assert_eq!(InitialData::n_init(0, 0), 1);
        assert_eq!(InitialData::n_init(1, 0), 0);
        assert!(InitialData::new(q(0, 1), q(1, 1), q(1, 1), q(1, 1)).is_err());
    }

    #[test]
    fn uniform_layer_three_is_eight() {
        for center in [(0, 0), (1, 0), (-3, 2)] {
            let field = evolve_t(&InitialData::uniform(), center, 3).unwrap();
            let layer: Vec<_> = field.iter().filter(|((_, _, n), _)| *n == 3).collect();
            assert!(!layer.is_empty());
            for (_, v) in layer {
                assert_eq!(v, &q(8, 1));
            }
        }
    }

    #[test]
    fn first_step_of_two_periodic_data() {
        let init = InitialData::two_periodic(&q(7, 10)).unwrap();
        let field = evolve_t(&init, (0, 1), 2).unwrap();
        assert_eq!(field.get(0, 1, 2).unwrap(), &q(2, 1));
        assert_eq!(closed_form_t(&init, 0, 1, 2).unwrap(), q(2, 1));
    }

    #[test]
    fn initial_layers_hold_the_data() {
        let init = InitialData::new(q(2, 3), q(5, 4), q(1, 7), q(9, 2)).unwrap();
        let field = evolve_t(&init, (1, -1), 4).unwrap();
        for ((j, k, n), v) in field.iter().filter(|((_, _, n), _)| *n <= 1) {
            assert_eq!(n, InitialData::n_init(j, k));
            assert_eq!(v, init.t(j, k));
        }
    }

    #[test]
    fn wrong_parity_is_rejected() {
        let init = InitialData::uniform();
        assert!(matches!(closed_form_t(&init, 0, 0, 0), Err(Error::Parity { .. })));
        assert!(matches!(coeff_l(&init, 0, 0, 1), Err(Error::Parity { .. })));
        let field = evolve_t(&init, (0, 0), 2).unwrap();
        assert!(field.get(0, 0, 2).is_err());
        assert!(matches!(field.get(5, 0, 2), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn closed_form_examples() {
        let init = InitialData::new(q(3, 2), q(2, 5), q(7, 3), q(1, 4)).unwrap();
        assert_eq!(closed_form_t(&init, 1, 0, 0).unwrap(), q(1, 4));
        assert_eq!(closed_form_t(&init, 0, 0, 1).unwrap(), q(3, 2));
        for n in 0..8 {
            let expected = num_traits::pow(q(2, 1), (n * (n - 1) / 2) as usize);
            assert_eq!(closed_form_t(&InitialData::uniform(), 0, (n + 1) % 2, n).unwrap(), expected);
        }
    }

    #[test]
    fn coefficient_examples() {
        let a = q(7, 10);
        let init = InitialData::two_periodic(&a).unwrap();
        for n in [1, 3, 5] {
            assert_eq!(coeff_l(&init, 0, 1, n).unwrap(), q(1, 2));
            assert_eq!(coeff_l(&init, 1, 0, n).unwrap(), q(1, 2));
        }
        for n in [4, 8] {
            assert_eq!(coeff_l(&init, 0, 0, n).unwrap(), (Rational::one() + &a * &a).recip());
        }
        assert_eq!(coeff_l(&init, 2, 2, 4).unwrap() + coeff_r(&init, 2, 2, 4).unwrap(), q(1, 1));
    }

    #[test]
    fn density_examples() {
        let init = InitialData::two_periodic(&q(7, 10)).unwrap();
        assert_eq!(density_at(&init, (1, 0), 1, 0, 2).unwrap(), q(-1, 1));
        assert_eq!(density_at(&InitialData::uniform(), (0, 0), 1, 0, 2).unwrap(), q(1, 2));
        assert_eq!(density_at(&init, (0, 0), 0, 0, 1).unwrap(), q(1, 1));
        let map = density_dual(&init, (2, 1), (0, 0), 3).unwrap();
        assert_eq!(map[&(2, 1, 0)], q(1, 1));
        assert_eq!(map[&(0, 1, 0)], q(0, 1));
    }

    #[test]
    fn csv_layout() {
        let csv = evolve_t(&InitialData::uniform(), (0, 0), 1).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("j,k,n,value"));
        assert!(lines.all(|l| l.split(',').count() == 4));
    }

    fn positive() -> impl Strategy<Value = Rational> {
        (1i64..12, 1i64..12).prop_map(|(p, d)| q(p, d))
    }

    fn init_data() -> impl Strategy<Value = InitialData> {
        (positive(), positive(), positive(), positive())
            .prop_map(|(a, b, c, d)| InitialData::new(a, b, c, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn evolution_matches_closed_form(init in init_data(), j0 in -2i64..3, k0 in -2i64..3) {
            let field = evolve_t(&init, (j0, k0), 6).unwrap();
            for ((j, k, n), v) in field.iter() {
                prop_assert_eq!(v, &closed_form_t(&init, j, k, n).unwrap());
            }
        }

        #[test]
        fn translation_covariance(init in init_data()) {
            let field = evolve_t(&init, (0, 0), 6).unwrap();
            for ((j, k, n), v) in field.iter() {
                if let Ok(w) = field.get(j + 2, k, n) {
                    prop_assert_eq!(v, w);
                }
                if let Ok(w) = field.get(j, k + 2, n) {
                    prop_assert_eq!(v, w);
                }
            }
        }

        #[test]
        fn coefficient_is_the_horizontal_ratio(init in init_data(), j in -3i64..4, k in -3i64..4, n in 1i64..7) {
            prop_assume!((j + k + n) % 2 == 0);
            let cf = |dj: i64, dk: i64, dn: i64| closed_form_t(&init, j + dj, k + dk, n + dn).unwrap();
            let ratio = cf(1, 0, 0) * cf(-1, 0, 0) / (cf(0, 0, 1) * cf(0, 0, -1));
            prop_assert_eq!(coeff_l(&init, j, k, n).unwrap(), ratio);
        }

        /// ρ(n+1) = -ρ(n-1) + L (ρ_E + ρ_W) + R (ρ_N + ρ_S) off the initial layers.
        #[test]
        fn density_recurrence(init in init_data(), eps in -1i64..2, eta in -1i64..2) {
            let depth = 5;
            let rho = density_dual(&init, (eps, eta), (0, 0), depth).unwrap();
            let zero = Rational::zero();
            let at = |j: i64, k: i64, n: i64| rho.get(&(j, k, n)).unwrap_or(&zero).clone();
            for (&(j, k, n), v) in rho.iter() {
                if n < 2 {
                    continue;
                }
                let m = n - 1;
                let l = coeff_l(&init, j, k, m).unwrap();
                let r = Rational::one() - &l;
                let expected = -at(j, k, m - 1)
                    + l * (at(j + 1, k, m) + at(j - 1, k, m))
                    + r * (at(j, k + 1, m) + at(j, k - 1, m));
                prop_assert_eq!(v, &expected);
            }
        }
    }
}
