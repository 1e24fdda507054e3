//! Exact symbolic fractional calculus on finite sums of slice monomials
//! `scalar * (x - a)^mu * y^nu * right_const`, where `scalar`, `mu`, `nu` are
//! plane complex numbers (formal: they commute with the slice unit chosen at
//! evaluation time) and `right_const` is a quaternion multiplied from the
//! right.
//!
//! The fractional operators act termwise through the power rule
//! `D^alpha (x-a)^mu = gamma(mu+1)/gamma(mu+1-alpha) (x-a)^(mu-alpha)`;
//! when the denominator hits a gamma pole the reciprocal vanishes and the
//! term is dropped exactly, which is what makes kernel computations exact.

use crate::fracnum::{ComplexOrder, FracNumError};
use crate::quat::{embed, ImaginaryUnit, Quaternion};
use crate::scalar::{PlaneComplex, Real};
use crate::specfun::{cpow, gamma_ratio, is_gamma_pole, SpecFunError};
use serde::{Deserialize, Serialize};

/// Exponents and collected coefficients closer than this are identified.
pub const EXPONENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FracSymError {
    #[error("operator input term has exponent with real part <= -1 ({0})")]
    TermOutOfBand(f64),
    #[error("evaluation outside the valid range: {0}")]
    Domain(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Num(#[from] FracNumError),
}

mod cpair {
    use super::*;
    use serde::de::Deserializer;
    use serde::ser::Serializer;

    pub fn serialize<T: Serialize, S: Serializer>(
        z: &PlaneComplex<T>,
        s: S,
    ) -> Result<S::Ok, S::Error>
    where
        T: Copy,
    {
        (z.re, z.im).serialize(s)
    }

    pub fn deserialize<'de, T: Deserialize<'de>, D: Deserializer<'de>>(
        d: D,
    ) -> Result<PlaneComplex<T>, D::Error> {
        let (re, im) = <(T, T)>::deserialize(d)?;
        Ok(PlaneComplex::new(re, im))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize + Real",
    deserialize = "T: Deserialize<'de> + Real"
))]
pub struct MonomialTerm<T> {
    #[serde(with = "cpair")]
    pub scalar: PlaneComplex<T>,
    #[serde(with = "cpair")]
    pub mu: PlaneComplex<T>,
    #[serde(with = "cpair")]
    pub nu: PlaneComplex<T>,
    pub right_const: Quaternion<T>,
}

impl<T: Real> MonomialTerm<T> {
    pub fn new(
        scalar: PlaneComplex<T>,
        mu: PlaneComplex<T>,
        nu: PlaneComplex<T>,
        right_const: Quaternion<T>,
    ) -> Self {
        Self { scalar, mu, nu, right_const }
    }

    /// Scalar-only term with right constant one.
    pub fn plain(scalar: PlaneComplex<T>, mu: PlaneComplex<T>, nu: PlaneComplex<T>) -> Self {
        Self::new(scalar, mu, nu, Quaternion::one())
    }

    pub fn magnitude(&self) -> T {
        self.scalar.norm() * self.right_const.norm()
    }

    fn is_zero(&self) -> bool {
        (self.scalar.re == T::zero() && self.scalar.im == T::zero())
            || self.right_const == Quaternion::zero()
    }
}

/// Finite sum of monomial terms anchored at `x = anchor_a` (the y anchor is
/// always `0`).  Construction prunes exactly-zero terms but never merges;
/// [`MonomialSum::collect`] canonicalizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize + Real",
    deserialize = "T: Deserialize<'de> + Real"
))]
pub struct MonomialSum<T> {
    pub anchor_a: T,
    pub terms: Vec<MonomialTerm<T>>,
}

impl<T: Real> MonomialSum<T> {
    pub fn new(anchor_a: T, terms: Vec<MonomialTerm<T>>) -> Self {
        Self { anchor_a, terms: terms.into_iter().filter(|t| !t.is_zero()).collect() }
    }

    pub fn zero(anchor_a: T) -> Self {
        Self { anchor_a, terms: Vec::new() }
    }

    pub fn constant(anchor_a: T, value: Quaternion<T>) -> Self {
        let one = PlaneComplex::new(T::one(), T::zero());
        let zero = PlaneComplex::new(T::zero(), T::zero());
        Self::new(anchor_a, vec![MonomialTerm::new(one, zero, zero, value)])
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude `|scalar| * |right_const|` over terms.
    pub fn max_coeff(&self) -> T {
        self.terms
            .iter()
            .map(|t| t.magnitude())
            .fold(T::zero(), |m, v| m.max(v))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(
            (self.anchor_a - other.anchor_a).abs() <= T::of(EXPONENT_TOL),
            "cannot add sums with different anchors"
        );
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().copied());
        Self::new(self.anchor_a, terms)
    }

    pub fn scale(&self, c: PlaneComplex<T>) -> Self {
        Self::new(
            self.anchor_a,
            self.terms
                .iter()
                .map(|t| MonomialTerm::new(t.scalar * c, t.mu, t.nu, t.right_const))
                .collect(),
        )
    }

    /// Multiplies every term by a quaternion constant from the right.
    pub fn mul_right(&self, c: Quaternion<T>) -> Self {
        Self::new(
            self.anchor_a,
            self.terms
                .iter()
                .map(|t| MonomialTerm::new(t.scalar, t.mu, t.nu, t.right_const * c))
                .collect(),
        )
    }

    /// Product of an x-only and a y-only sum (termwise exponent addition).
    /// Panics unless `self` has `nu = 0` terms and `other` has `mu = 0` terms.
    pub fn separable_product(&self, other: &Self) -> Self {
        let tol = T::of(EXPONENT_TOL);
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            assert!(a.nu.norm() <= tol, "left factor must be x-only");
            for b in &other.terms {
                assert!(b.mu.norm() <= tol, "right factor must be y-only");
                out.push(MonomialTerm::new(
                    a.scalar * b.scalar,
                    a.mu,
                    b.nu,
                    a.right_const * b.right_const,
                ));
            }
        }
        Self::new(self.anchor_a, out)
    }

    /// Canonical form: groups terms by `(mu, nu)` within `1e-12` and by exact
    /// right constant, sums scalars, drops exact zeros, sorts exponents.
    pub fn collect(&self) -> Self {
        let tol = T::of(EXPONENT_TOL);
        let mut groups: Vec<MonomialTerm<T>> = Vec::new();
        for t in &self.terms {
            if let Some(g) = groups.iter_mut().find(|g| {
                (g.mu - t.mu).norm() <= tol
                    && (g.nu - t.nu).norm() <= tol
                    && g.right_const == t.right_const
            }) {
                g.scalar += t.scalar;
            } else {
                groups.push(*t);
            }
        }
        groups.retain(|t| !t.is_zero());
        groups.sort_by(|a, b| {
            let ka = (a.mu.re, a.mu.im, a.nu.re, a.nu.im, a.right_const.norm());
            let kb = (b.mu.re, b.mu.im, b.nu.re, b.nu.im, b.right_const.norm());
            ka.partial_cmp(&kb).unwrap_or(core::cmp::Ordering::Equal)
        });
        Self { anchor_a: self.anchor_a, terms: groups }
    }

    /// Terms constant in x (those with `mu = 0`).
    pub fn x_constant_part(&self) -> Self {
        let tol = T::of(EXPONENT_TOL);
        Self {
            anchor_a: self.anchor_a,
            terms: self.terms.iter().copied().filter(|t| t.mu.norm() <= tol).collect(),
        }
    }

    /// Terms constant in y (those with `nu = 0`).
    pub fn y_constant_part(&self) -> Self {
        let tol = T::of(EXPONENT_TOL);
        Self {
            anchor_a: self.anchor_a,
            terms: self.terms.iter().copied().filter(|t| t.nu.norm() <= tol).collect(),
        }
    }
}

pub(crate) fn power_factor<T: Real>(
    base: T,
    expo: PlaneComplex<T>,
    what: &str,
) -> Result<PlaneComplex<T>, FracSymError> {
    let tol = T::of(EXPONENT_TOL);
    if expo.norm() <= tol {
        return Ok(PlaneComplex::new(T::one(), T::zero()));
    }
    if base > T::zero() {
        return Ok(cpow(base, expo)?);
    }
    if base == T::zero() {
        if expo.re > tol {
            return Ok(PlaneComplex::new(T::zero(), T::zero()));
        }
        return Err(FracSymError::Domain(format!(
            "{what}-power with nonpositive exponent real part evaluated at its anchor"
        )));
    }
    Err(FracSymError::Domain(format!("{what} must not be left of its anchor")))
}

/// Evaluates the sum at slice coordinates `(unit, x, y)`.
pub fn sym_eval<T: Real>(
    s: &MonomialSum<T>,
    unit: ImaginaryUnit<T>,
    x: T,
    y: T,
) -> Result<Quaternion<T>, FracSymError> {
    let mut acc = Quaternion::zero();
    for t in &s.terms {
        let fx = power_factor(x - s.anchor_a, t.mu, "x")?;
        let fy = power_factor(y, t.nu, "y")?;
        acc = acc + embed(t.scalar * fx * fy, unit) * t.right_const;
    }
    Ok(acc)
}

fn check_band<T: Real>(expo: PlaneComplex<T>) -> Result<(), FracSymError> {
    if expo.re > -T::one() {
        Ok(())
    } else {
        Err(FracSymError::TermOutOfBand(expo.re.to_f64().unwrap_or(f64::NAN)))
    }
}

fn check_integral_order<T: Real>(sigma: PlaneComplex<T>) -> Result<(), FracSymError> {
    if sigma.re > T::zero() && sigma.re <= T::one() && sigma.re.is_finite() && sigma.im.is_finite()
    {
        Ok(())
    } else {
        Err(FracSymError::Num(FracNumError::InvalidOrder {
            re: sigma.re.to_f64().unwrap_or(f64::NAN),
            im: sigma.im.to_f64().unwrap_or(f64::NAN),
        }))
    }
}

enum Axis {
    X,
    Y,
}

fn map_exponent<T: Real>(
    s: &MonomialSum<T>,
    axis: Axis,
    shift: PlaneComplex<T>,
) -> Result<MonomialSum<T>, FracSymError> {
    // shift = +sigma for integrals, -alpha for derivatives; the coefficient is
    // gamma(e+1)/gamma(e+1+shift), and a pole of the denominator annihilates
    // the term exactly.
    let one = PlaneComplex::new(T::one(), T::zero());
    let mut out = Vec::with_capacity(s.terms.len());
    for t in &s.terms {
        let e = match axis {
            Axis::X => t.mu,
            Axis::Y => t.nu,
        };
        check_band(e)?;
        let den = e + one + shift;
        if is_gamma_pole(den) {
            continue;
        }
        let ratio = gamma_ratio(e + one, den)?;
        let term = match axis {
            Axis::X => MonomialTerm::new(t.scalar * ratio, t.mu + shift, t.nu, t.right_const),
            Axis::Y => MonomialTerm::new(t.scalar * ratio, t.mu, t.nu + shift, t.right_const),
        };
        out.push(term);
    }
    Ok(MonomialSum::new(s.anchor_a, out))
}

/// Left fractional integral of order `sigma` (`0 < re sigma <= 1`) in the
/// x-direction, anchored at `anchor_a`.  Requires `re mu > -1` on every term.
pub fn sym_rl_integral_x<T: Real>(
    s: &MonomialSum<T>,
    sigma: PlaneComplex<T>,
) -> Result<MonomialSum<T>, FracSymError> {
    check_integral_order(sigma)?;
    map_exponent(s, Axis::X, sigma)
}

/// y-direction analog of [`sym_rl_integral_x`], anchored at `0`.
pub fn sym_rl_integral_y<T: Real>(
    s: &MonomialSum<T>,
    sigma: PlaneComplex<T>,
) -> Result<MonomialSum<T>, FracSymError> {
    check_integral_order(sigma)?;
    map_exponent(s, Axis::Y, sigma)
}

/// Left Riemann-Liouville derivative of order `alpha` in the x-direction.
/// Terms whose image coefficient hits a gamma pole vanish exactly, so the
/// kernel power `(x-a)^(alpha-1)` is annihilated without roundoff.
pub fn sym_rl_derivative_x<T: Real>(
    s: &MonomialSum<T>,
    alpha: ComplexOrder<T>,
) -> Result<MonomialSum<T>, FracSymError> {
    map_exponent(s, Axis::X, -alpha.as_complex())
}

/// y-direction analog of [`sym_rl_derivative_x`].
pub fn sym_rl_derivative_y<T: Real>(
    s: &MonomialSum<T>,
    alpha: ComplexOrder<T>,
) -> Result<MonomialSum<T>, FracSymError> {
    map_exponent(s, Axis::Y, -alpha.as_complex())
}

/// Partial derivative in x; constant-in-x terms vanish exactly.
pub fn sym_partial_x<T: Real>(s: &MonomialSum<T>) -> MonomialSum<T> {
    let tol = T::of(EXPONENT_TOL);
    let one = PlaneComplex::new(T::one(), T::zero());
    let terms = s
        .terms
        .iter()
        .filter(|t| t.mu.norm() > tol)
        .map(|t| MonomialTerm::new(t.scalar * t.mu, t.mu - one, t.nu, t.right_const))
        .collect();
    MonomialSum::new(s.anchor_a, terms)
}

/// Partial derivative in y; constant-in-y terms vanish exactly.
pub fn sym_partial_y<T: Real>(s: &MonomialSum<T>) -> MonomialSum<T> {
    let tol = T::of(EXPONENT_TOL);
    let one = PlaneComplex::new(T::one(), T::zero());
    let terms = s
        .terms
        .iter()
        .filter(|t| t.nu.norm() > tol)
        .map(|t| MonomialTerm::new(t.scalar * t.nu, t.mu, t.nu - one, t.right_const))
        .collect();
    MonomialSum::new(s.anchor_a, terms)
}

/// Caputo derivative in x: the fractional integral of order `1 - alpha` of
/// the x-partial.  Requires `re mu > 0` on every non-constant term.
pub fn sym_caputo_x<T: Real>(
    s: &MonomialSum<T>,
    alpha: ComplexOrder<T>,
) -> Result<MonomialSum<T>, FracSymError> {
    sym_rl_integral_x(&sym_partial_x(s), alpha.complement())
}

/// y-direction analog of [`sym_caputo_x`].
pub fn sym_caputo_y<T: Real>(
    s: &MonomialSum<T>,
    alpha: ComplexOrder<T>,
) -> Result<MonomialSum<T>, FracSymError> {
    sym_rl_integral_y(&sym_partial_y(s), alpha.complement())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracnum::{rl_derivative_left, Integrand1D, QuadratureConfig};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type C = PlaneComplex<f64>;
    type Q = Quaternion<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn random_sum(rng: &mut ChaCha8Rng, n: usize, mu_lo: f64) -> MonomialSum<f64> {
        let terms = (0..n)
            .map(|_| {
                MonomialTerm::new(
                    c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                    c(rng.gen_range(mu_lo..3.0), rng.gen_range(-1.0..1.0)),
                    c(rng.gen_range(mu_lo..3.0), rng.gen_range(-1.0..1.0)),
                    Q::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    ),
                )
            })
            .collect();
        MonomialSum::new(0.25, terms)
    }

    #[test]
    fn construction_prunes_zeros_but_keeps_duplicates() {
        let t = MonomialTerm::plain(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let z = MonomialTerm::plain(c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0));
        let s = MonomialSum::new(0.0, vec![t, t, z]);
        assert_eq!(s.terms.len(), 2);
        let collected = s.collect();
        assert_eq!(collected.terms.len(), 1);
        assert!((collected.terms[0].scalar - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn collect_cancels_opposite_terms_exactly() {
        let t1 = MonomialTerm::plain(c(1.5, -0.5), c(0.7, 0.1), c(0.0, 0.0));
        let t2 = MonomialTerm::plain(c(-1.5, 0.5), c(0.7, 0.1), c(0.0, 0.0));
        let s = MonomialSum::new(0.0, vec![t1, t2]).collect();
        assert!(s.is_empty());
    }

    #[test]
    fn serde_matches_declared_layout() {
        let s = MonomialSum::new(
            0.5,
            vec![MonomialTerm::new(c(1.0, 2.0), c(0.25, 0.0), c(0.0, -1.0), Q::new(1.0, 0.0, 0.5, 0.0))],
        );
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(
            js,
            r#"{"anchor_a":0.5,"terms":[{"scalar":[1.0,2.0],"mu":[0.25,0.0],"nu":[0.0,-1.0],"right_const":[1.0,0.0,0.5,0.0]}]}"#
        );
        let back: MonomialSum<f64> = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn integral_power_rule_matches_gamma_ratio() {
        let mu = c(0.7, -0.4);
        let sigma = c(0.35, 0.8);
        let s = MonomialSum::new(0.0, vec![MonomialTerm::plain(c(2.0, 1.0), mu, c(0.0, 0.0))]);
        let img = sym_rl_integral_x(&s, sigma).unwrap();
        assert_eq!(img.terms.len(), 1);
        let one = c(1.0, 0.0);
        let want = c(2.0, 1.0) * gamma_ratio(mu + one, mu + one + sigma).unwrap();
        assert!((img.terms[0].scalar - want).norm() < 1e-15);
        assert!((img.terms[0].mu - (mu + sigma)).norm() < 1e-15);
    }

    #[test]
    fn derivative_annihilates_kernel_power_exactly() {
        let alpha = ComplexOrder::new(0.6, 0.3).unwrap();
        let one = c(1.0, 0.0);
        let kernel = MonomialTerm::plain(c(3.0, -1.0), alpha.as_complex() - one, c(0.0, 0.0));
        let other = MonomialTerm::plain(c(1.0, 0.0), c(1.5, 0.0), c(0.0, 0.0));
        let s = MonomialSum::new(0.0, vec![kernel, other]);
        let img = sym_rl_derivative_x(&s, alpha).unwrap();
        assert_eq!(img.terms.len(), 1);
        assert!((img.terms[0].mu - (c(1.5, 0.0) - alpha.as_complex())).norm() < 1e-15);
    }

    #[test]
    fn fundamental_theorem_holds_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let s = random_sum(&mut rng, 4, -0.5);
            let alpha =
                ComplexOrder::new(rng.gen_range(0.1..0.9), rng.gen_range(-1.0..1.0)).unwrap();
            let ac = alpha.as_complex();
            let back_x = sym_rl_derivative_x(&sym_rl_integral_x(&s, ac).unwrap(), alpha).unwrap();
            let diff_x = back_x.add(&s.scale(c(-1.0, 0.0))).collect();
            assert!(diff_x.max_coeff() <= 1e-13 * s.max_coeff(), "x-axis");
            let back_y = sym_rl_derivative_y(&sym_rl_integral_y(&s, ac).unwrap(), alpha).unwrap();
            let diff_y = back_y.add(&s.scale(c(-1.0, 0.0))).collect();
            assert!(diff_y.max_coeff() <= 1e-13 * s.max_coeff(), "y-axis");
        }
    }

    #[test]
    fn caputo_agrees_with_rl_on_anchor_vanishing_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let s = random_sum(&mut rng, 3, 0.3);
            let alpha =
                ComplexOrder::new(rng.gen_range(0.1..0.9), rng.gen_range(-1.0..1.0)).unwrap();
            let cap = sym_caputo_x(&s, alpha).unwrap();
            let centered = s.add(&s.x_constant_part().scale(c(-1.0, 0.0)));
            let rl = sym_rl_derivative_x(&centered, alpha).unwrap();
            let diff = cap.add(&rl.scale(c(-1.0, 0.0))).collect();
            assert!(diff.max_coeff() <= 1e-13 * (1.0 + rl.max_coeff()));
        }
    }

    #[test]
    fn caputo_kills_constants() {
        let s = MonomialSum::constant(0.0, Q::new(2.0, 1.0, 0.0, -1.0));
        let alpha = ComplexOrder::new(0.5, 0.7).unwrap();
        assert!(sym_caputo_x(&s, alpha).unwrap().is_empty());
        assert!(sym_caputo_y(&s, alpha).unwrap().is_empty());
    }

    #[test]
    fn out_of_band_inputs_are_rejected() {
        let s = MonomialSum::new(
            0.0,
            vec![MonomialTerm::plain(c(1.0, 0.0), c(-1.2, 0.0), c(0.0, 0.0))],
        );
        let alpha = ComplexOrder::new(0.5, 0.0).unwrap();
        assert!(matches!(
            sym_rl_derivative_x(&s, alpha),
            Err(FracSymError::TermOutOfBand(_))
        ));
    }

    #[test]
    fn eval_handles_anchor_conventions() {
        let u = ImaginaryUnit::e2();
        // constant in x: survives at x = a
        let s_const = MonomialSum::new(
            1.0,
            vec![MonomialTerm::plain(c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))],
        );
        let v = sym_eval(&s_const, u, 1.0, 0.5).unwrap();
        assert!((v - Q::new(2.0 * 0.5, 0.0, 0.0, 0.0)).norm() < 1e-15);
        // positive exponent: vanishes at x = a
        let s_pos = MonomialSum::new(
            1.0,
            vec![MonomialTerm::plain(c(3.0, 0.0), c(0.7, 0.2), c(0.0, 0.0))],
        );
        assert_eq!(sym_eval(&s_pos, u, 1.0, 0.5).unwrap(), Q::zero());
        // negative exponent real part: domain error at x = a
        let s_neg = MonomialSum::new(
            1.0,
            vec![MonomialTerm::plain(c(3.0, 0.0), c(-0.5, 0.0), c(0.0, 0.0))],
        );
        assert!(sym_eval(&s_neg, u, 1.0, 0.5).is_err());
        // left of the anchor: domain error
        assert!(sym_eval(&s_pos, u, 0.5, 0.5).is_err());
    }

    #[test]
    fn eval_matches_direct_computation() {
        let u = ImaginaryUnit::new(0.4, -0.3, 0.9).unwrap();
        let t1 = MonomialTerm::new(c(1.2, -0.7), c(1.3, 0.4), c(0.6, -0.2), Q::new(0.5, 1.0, 0.0, -0.5));
        let s = MonomialSum::new(0.25, vec![t1]);
        let (x, y) = (1.1, 0.8);
        let got = sym_eval(&s, u, x, y).unwrap();
        let val =
            t1.scalar * cpow(x - 0.25, t1.mu).unwrap() * cpow(y, t1.nu).unwrap();
        let want = embed(val, u) * t1.right_const;
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn partials_commute_on_smooth_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let s = random_sum(&mut rng, 5, 1.0);
        let xy = sym_partial_y(&sym_partial_x(&s));
        let yx = sym_partial_x(&sym_partial_y(&s));
        let diff = xy.add(&yx.scale(c(-1.0, 0.0))).collect();
        assert!(diff.max_coeff() <= 1e-14 * (1.0 + xy.max_coeff()));
    }

    #[test]
    fn symbolic_and_numeric_backends_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        let a = 0.0;
        let cfg = QuadratureConfig::default();
        let one = c(1.0, 0.0);
        for trial in 0..50 {
            let mu = c(rng.gen_range(-0.5..3.0), rng.gen_range(-1.0..1.0));
            let nu = c(rng.gen_range(-0.5..3.0), rng.gen_range(-1.0..1.0));
            let scalar = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let alpha =
                ComplexOrder::new(rng.gen_range(0.1..0.9), rng.gen_range(-1.0..1.0)).unwrap();
            let x = rng.gen_range(0.4..1.8);
            let y0 = rng.gen_range(0.2..1.5);

            let s = MonomialSum::new(a, vec![MonomialTerm::plain(scalar, mu, nu)]);
            let img = sym_rl_derivative_x(&s, alpha).unwrap();
            let sym_val = img.terms[0].scalar
                * cpow(x - a, img.terms[0].mu).unwrap()
                * cpow(y0, img.terms[0].nu).unwrap();

            let f = Integrand1D::new(a, 2.0, move |t: f64| {
                if t <= a {
                    return c(0.0, 0.0);
                }
                scalar * cpow(t - a, mu).unwrap() * cpow(y0, nu).unwrap()
            });
            let num_val = rl_derivative_left(&f, a, alpha, x, &cfg).unwrap();
            let rel = (sym_val - num_val).norm() / (one.norm() + sym_val.norm());
            assert!(rel <= 1e-6, "trial {trial}: mu={mu} alpha={:?} rel={rel:e}", alpha);
        }
    }
}
