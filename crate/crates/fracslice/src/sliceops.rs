//! Fractional operators on slice domains.
//!
//! Functions live on a rectangle `S = {x + Iy : x in [a,b], y in [0,c]}`
//! swept over all imaginary units `I`, with a fixed base point `(u, v)` in
//! the interior.  The two-parameter left operator is
//!
//! ```text
//! (D_(a+)^(alpha,beta) f)(x + Iy) =
//!     (D_(a+)^alpha f(. + Iv))(x)  +  I * (D_(0+)^beta f(u + I.))(y)
//! ```
//!
//! and every operator below exists in two backends: an exact termwise one on
//! [`MonomialSum`] and a quadrature one on sampled values.  The associated
//! integral map replaces both one-dimensional derivatives with integrals of
//! the complementary order; applying `2 * dbar` to it recovers the operator,
//! which is the factorization the verification harness exercises.

use std::fmt;
use std::sync::Arc;

use crate::fracnum::{
    caputo_left, caputo_right, richardson_derivative, rl_derivative_left, rl_derivative_right,
    rl_integral_left, ComplexOrder, FracNumError, Integrand1D, QuadratureConfig,
};
use crate::fracsym::{
    power_factor, sym_caputo_x, sym_caputo_y, sym_eval, sym_partial_x, sym_partial_y,
    sym_rl_derivative_x, sym_rl_derivative_y, sym_rl_integral_x, sym_rl_integral_y, FracSymError,
    MonomialSum, MonomialTerm,
};
use crate::quat::{split_on_slice, unsplit, ImaginaryUnit, Quaternion, SlicePoint};
use crate::scalar::{PlaneComplex, Real};
use crate::specfun::SpecFunError;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SliceError {
    #[error("invalid slice domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Sym(#[from] FracSymError),
    #[error(transparent)]
    Num(#[from] FracNumError),
}

impl From<SpecFunError> for SliceError {
    fn from(e: SpecFunError) -> Self {
        SliceError::Sym(FracSymError::SpecFun(e))
    }
}

/// Rectangle `[a,b] x [0,c]` in slice coordinates with base point `(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceDomain<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub u: T,
    pub v: T,
}

impl<T: Real> Default for SliceDomain<T> {
    fn default() -> Self {
        Self { a: T::of(0.0), b: T::of(1.0), c: T::of(1.0), u: T::of(0.4), v: T::of(0.3) }
    }
}

impl<T: Real> SliceDomain<T> {
    pub fn new(a: T, b: T, c: T, u: T, v: T) -> Result<Self, SliceError> {
        let d = Self { a, b, c, u, v };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), SliceError> {
        let fin = self.a.is_finite()
            && self.b.is_finite()
            && self.c.is_finite()
            && self.u.is_finite()
            && self.v.is_finite();
        if !fin {
            return Err(SliceError::Domain("all coordinates must be finite".into()));
        }
        if !(self.a < self.b) || !(self.c > T::zero()) {
            return Err(SliceError::Domain("need a < b and c > 0".into()));
        }
        if !(self.u > self.a && self.u < self.b) {
            return Err(SliceError::Domain("base point u must lie inside (a, b)".into()));
        }
        if !(self.v > T::zero() && self.v < self.c) {
            return Err(SliceError::Domain("base point v must lie inside (0, c)".into()));
        }
        Ok(())
    }
}

/// The pair of fractional orders carried by the two-parameter operators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize + Real",
    deserialize = "T: Deserialize<'de> + Real"
))]
pub struct OrderPair<T> {
    pub alpha: ComplexOrder<T>,
    pub beta: ComplexOrder<T>,
}

impl<T: Real> Default for OrderPair<T> {
    fn default() -> Self {
        Self {
            alpha: ComplexOrder::new(T::of(0.35), T::of(0.2)).unwrap(),
            beta: ComplexOrder::new(T::of(0.65), T::of(-0.15)).unwrap(),
        }
    }
}

/// Some identities admit two sign/convention readings on the imaginary parts
/// of the orders; `Corrected` is the reading under which the whole suite
/// closes, `Alt` the other one.  Reports record which was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Corrected,
    Alt,
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "corrected" => Ok(Variant::Corrected),
            "alt" => Ok(Variant::Alt),
            other => Err(format!("unknown variant `{other}` (expected `corrected` or `alt`)")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Corrected => "corrected",
            Variant::Alt => "alt",
        })
    }
}

pub type SampledFn<T> =
    Arc<dyn Fn(ImaginaryUnit<T>, T, T) -> Quaternion<T> + Send + Sync + 'static>;

/// A function on the slice domain, either as an exact monomial sum or as a
/// black-box sampler `(unit, x, y) -> value`.  Sampled closures are expected
/// to be total on the open domain; the quadrature rules never evaluate at
/// the boundary itself.
#[derive(Clone)]
pub enum SliceFunction<T> {
    Symbolic(MonomialSum<T>),
    Sampled(SampledFn<T>),
}

impl<T: Real> fmt::Debug for SliceFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceFunction::Symbolic(s) => f.debug_tuple("Symbolic").field(s).finish(),
            SliceFunction::Sampled(_) => f.write_str("Sampled(..)"),
        }
    }
}

impl<T: Real> SliceFunction<T> {
    pub fn eval(
        &self,
        unit: ImaginaryUnit<T>,
        x: T,
        y: T,
    ) -> Result<Quaternion<T>, SliceError> {
        match self {
            SliceFunction::Symbolic(s) => Ok(sym_eval(s, unit, x, y)?),
            SliceFunction::Sampled(f) => Ok(f(unit, x, y)),
        }
    }
}

/// Wraps a monomial sum as a sampler, for exercising the quadrature backend
/// against the exact one.  Panics if evaluated where the sum is undefined.
pub fn sampled_from_symbolic<T: Real>(s: MonomialSum<T>) -> SliceFunction<T> {
    SliceFunction::Sampled(Arc::new(move |unit, x, y| {
        sym_eval(&s, unit, x, y).expect("sampled wrapper evaluated outside its valid range")
    }))
}

/// Substitutes `y = v`, folding the y-powers into the scalars; the result
/// depends on x only.
pub fn fold_y<T: Real>(s: &MonomialSum<T>, v: T) -> Result<MonomialSum<T>, FracSymError> {
    let zero = PlaneComplex::new(T::zero(), T::zero());
    let mut terms = Vec::with_capacity(s.terms.len());
    for t in &s.terms {
        let fy = power_factor(v, t.nu, "y")?;
        terms.push(MonomialTerm::new(t.scalar * fy, t.mu, zero, t.right_const));
    }
    Ok(MonomialSum::new(s.anchor_a, terms))
}

/// Substitutes `x = u`, folding the x-powers into the scalars; the result
/// depends on y only.
pub fn fold_x<T: Real>(s: &MonomialSum<T>, u: T) -> Result<MonomialSum<T>, FracSymError> {
    let zero = PlaneComplex::new(T::zero(), T::zero());
    let mut terms = Vec::with_capacity(s.terms.len());
    for t in &s.terms {
        let fx = power_factor(u - s.anchor_a, t.mu, "x")?;
        terms.push(MonomialTerm::new(t.scalar * fx, zero, t.nu, t.right_const));
    }
    Ok(MonomialSum::new(s.anchor_a, terms))
}

/// Exact image of a two-parameter slice operator: the x-direction part (a
/// function of x only), the y-direction part (y only, still to be multiplied
/// by the slice unit), and the largest coefficient seen before any
/// cancellation, which scales residual checks.
#[derive(Clone, Debug)]
pub struct SymbolicSliceImage<T> {
    pub x_part: MonomialSum<T>,
    pub y_part: MonomialSum<T>,
    pub pre_max: T,
}

impl<T: Real> SymbolicSliceImage<T> {
    pub fn eval_left(
        &self,
        unit: ImaginaryUnit<T>,
        x: T,
        y: T,
    ) -> Result<Quaternion<T>, FracSymError> {
        let vx = sym_eval(&self.x_part, unit, x, y)?;
        let vy = sym_eval(&self.y_part, unit, x, y)?;
        Ok(vx + unit.as_quaternion() * vy)
    }

    pub fn eval_right(
        &self,
        unit: ImaginaryUnit<T>,
        x: T,
        y: T,
    ) -> Result<Quaternion<T>, FracSymError> {
        let vx = sym_eval(&self.x_part, unit, x, y)?;
        let vy = sym_eval(&self.y_part, unit, x, y)?;
        Ok(vx + vy * unit.as_quaternion())
    }

    /// Largest collected coefficient relative to `pre_max`; zero exactly
    /// when both parts cancel to the empty sum.
    pub fn regularity_residual(&self) -> T {
        let m = self.x_part.collect().max_coeff().max(self.y_part.collect().max_coeff());
        if m == T::zero() {
            T::zero()
        } else {
            m / self.pre_max.max(T::of(1e-300))
        }
    }
}

fn image_pre_max<T: Real>(inputs: &[&MonomialSum<T>], images: &[&MonomialSum<T>]) -> T {
    inputs
        .iter()
        .chain(images.iter())
        .map(|s| s.max_coeff())
        .fold(T::zero(), |m, v| m.max(v))
}

/// Exact left Riemann-Liouville slice image of a monomial sum.
pub fn d_rl_left_symbolic<T: Real>(
    f: &MonomialSum<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
) -> Result<SymbolicSliceImage<T>, SliceError> {
    dom.validate()?;
    let xin = fold_y(f, dom.v)?;
    let yin = fold_x(f, dom.u)?;
    let x_part = sym_rl_derivative_x(&xin, orders.alpha)?;
    let y_part = sym_rl_derivative_y(&yin, orders.beta)?;
    let pre_max = image_pre_max(&[&xin, &yin], &[&x_part, &y_part]);
    Ok(SymbolicSliceImage { x_part, y_part, pre_max })
}

/// Exact left Caputo slice image of a monomial sum.
pub fn d_caputo_left_symbolic<T: Real>(
    f: &MonomialSum<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
) -> Result<SymbolicSliceImage<T>, SliceError> {
    dom.validate()?;
    let xin = fold_y(f, dom.v)?;
    let yin = fold_x(f, dom.u)?;
    let x_part = sym_caputo_x(&xin, orders.alpha)?;
    let y_part = sym_caputo_y(&yin, orders.beta)?;
    let pre_max = image_pre_max(&[&xin, &yin], &[&x_part, &y_part]);
    Ok(SymbolicSliceImage { x_part, y_part, pre_max })
}

/// Exact associated integral map of a monomial sum: the x-restriction put
/// through the integral of order `1 - alpha` plus the y-restriction through
/// the order controlled by the variant (`1 - conj(beta)` for `Corrected`,
/// `1 - beta-bar with flipped imaginary sign` for `Alt`).
pub fn assoc_integral_map_symbolic<T: Real>(
    f: &MonomialSum<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    variant: Variant,
) -> Result<MonomialSum<T>, SliceError> {
    dom.validate()?;
    let xo = orders.alpha.complement();
    let yo = match variant {
        Variant::Corrected => orders.beta.complement(),
        Variant::Alt => orders.beta.complement().conj(),
    };
    let x_map = sym_rl_integral_x(&fold_y(f, dom.v)?, xo)?;
    let y_map = sym_rl_integral_y(&fold_x(f, dom.u)?, yo)?;
    Ok(x_map.add(&y_map))
}

enum AxisSide {
    XLeft,
    XRight,
    YLeft,
    YRight,
}

fn restricted_pair<T: Real>(
    sf: &SampledFn<T>,
    unit: ImaginaryUnit<T>,
    j: ImaginaryUnit<T>,
    other_coord: T,
    along_x: bool,
    lo: T,
    hi: T,
) -> (Integrand1D<'static, T>, Integrand1D<'static, T>) {
    let f1 = sf.clone();
    let f2 = sf.clone();
    let fa = Integrand1D::new(lo, hi, move |t: T| {
        let q = if along_x { f1(unit, t, other_coord) } else { f1(unit, other_coord, t) };
        split_on_slice(q, unit, j).0
    });
    let fb = Integrand1D::new(lo, hi, move |t: T| {
        let q = if along_x { f2(unit, t, other_coord) } else { f2(unit, other_coord, t) };
        split_on_slice(q, unit, j).1
    });
    (fa, fb)
}

fn sampled_axis_rl_derivative<T: Real>(
    sf: &SampledFn<T>,
    dom: &SliceDomain<T>,
    order: ComplexOrder<T>,
    side: AxisSide,
    at: T,
    unit: ImaginaryUnit<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    let j = unit.orthogonal_unit();
    let (along_x, other, lo, hi) = match side {
        AxisSide::XLeft | AxisSide::XRight => (true, dom.v, dom.a, dom.b),
        AxisSide::YLeft | AxisSide::YRight => (false, dom.u, T::zero(), dom.c),
    };
    let (fa, fb) = restricted_pair(sf, unit, j, other, along_x, lo, hi);
    let (da, db) = match side {
        AxisSide::XLeft | AxisSide::YLeft => (
            rl_derivative_left(&fa, lo, order, at, cfg)?,
            rl_derivative_left(&fb, lo, order, at, cfg)?,
        ),
        AxisSide::XRight | AxisSide::YRight => (
            rl_derivative_right(&fa, hi, order, at, cfg)?,
            rl_derivative_right(&fb, hi, order, at, cfg)?,
        ),
    };
    Ok(unsplit(da, db, unit, j))
}

fn as_sampler<T: Real>(f: &SliceFunction<T>) -> SampledFn<T> {
    match f {
        SliceFunction::Symbolic(s) => match sampled_from_symbolic(s.clone()) {
            SliceFunction::Sampled(g) => g,
            SliceFunction::Symbolic(_) => unreachable!(),
        },
        SliceFunction::Sampled(g) => g.clone(),
    }
}

/// Left Riemann-Liouville slice operator at `(unit, x, y)`; the y-direction
/// component is multiplied by the unit from the left.  With this placement
/// the operator commutes with right quaternion constants.
pub fn d_rl_left<T: Real>(
    f: &SliceFunction<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    unit: ImaginaryUnit<T>,
    x: T,
    y: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    match f {
        SliceFunction::Symbolic(s) => {
            Ok(d_rl_left_symbolic(s, dom, orders)?.eval_left(unit, x, y)?)
        }
        SliceFunction::Sampled(sf) => {
            dom.validate()?;
            let cx =
                sampled_axis_rl_derivative(sf, dom, orders.alpha, AxisSide::XLeft, x, unit, cfg)?;
            let cy =
                sampled_axis_rl_derivative(sf, dom, orders.beta, AxisSide::YLeft, y, unit, cfg)?;
            Ok(cx + unit.as_quaternion() * cy)
        }
    }
}

/// Variant of [`d_rl_left`] with the unit multiplying the y-component from
/// the right.  The two placements coincide on functions whose values stay in
/// the slice plane and differ otherwise.
pub fn d_rl_left_runit<T: Real>(
    f: &SliceFunction<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    unit: ImaginaryUnit<T>,
    x: T,
    y: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    match f {
        SliceFunction::Symbolic(s) => {
            Ok(d_rl_left_symbolic(s, dom, orders)?.eval_right(unit, x, y)?)
        }
        SliceFunction::Sampled(sf) => {
            dom.validate()?;
            let cx =
                sampled_axis_rl_derivative(sf, dom, orders.alpha, AxisSide::XLeft, x, unit, cfg)?;
            let cy =
                sampled_axis_rl_derivative(sf, dom, orders.beta, AxisSide::YLeft, y, unit, cfg)?;
            Ok(cx + cy * unit.as_quaternion())
        }
    }
}

/// Right-sided Riemann-Liouville slice operator: both one-dimensional
/// derivatives anchor at the far ends `b` and `c` and carry the mirrored
/// sign.  There is no exact termwise rule for those on left-anchored
/// monomials, so symbolic inputs are sampled.
pub fn d_rl_rightsided<T: Real>(
    f: &SliceFunction<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    unit: ImaginaryUnit<T>,
    x: T,
    y: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    dom.validate()?;
    let sf = as_sampler(f);
    let cx = sampled_axis_rl_derivative(&sf, dom, orders.alpha, AxisSide::XRight, x, unit, cfg)?;
    let cy = sampled_axis_rl_derivative(&sf, dom, orders.beta, AxisSide::YRight, y, unit, cfg)?;
    Ok(cx + unit.as_quaternion() * cy)
}

/// Second-order numeric partial of a complex-valued closure, with one-sided
/// stencils near the interval ends so the closure is never sampled outside
/// `[lo, hi]`.
fn numeric_partial<T: Real>(
    g: impl Fn(T) -> PlaneComplex<T> + Sync + 'static,
    lo: T,
    hi: T,
    step: T,
) -> impl Fn(T) -> PlaneComplex<T> + Sync + 'static {
    move |t: T| {
        let two = T::of(2.0);
        let h = step.min((hi - lo) * T::of(0.25));
        if t - lo < h {
            let d = (g(t + h).scale(T::of(4.0)) - g(t + h + h) - g(t).scale(T::of(3.0)))
                / (h + h);
            return d;
        }
        if hi - t < h {
            let d = (g(t).scale(T::of(3.0)) - g(t - h).scale(T::of(4.0)) + g(t - h - h))
                / (h + h);
            return d;
        }
        let d1 = (g(t + h) - g(t - h)) / (h + h);
        let hh = h * T::of(0.5);
        let d2 = (g(t + hh) - g(t - hh)) / (hh * two);
        (d2.scale(T::of(4.0)) - d1) / T::of(3.0)
    }
}

fn sampled_axis_caputo<T: Real>(
    sf: &SampledFn<T>,
    dom: &SliceDomain<T>,
    order: ComplexOrder<T>,
    side: AxisSide,
    at: T,
    unit: ImaginaryUnit<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    let j = unit.orthogonal_unit();
    let (along_x, other, lo, hi) = match side {
        AxisSide::XLeft | AxisSide::XRight => (true, dom.v, dom.a, dom.b),
        AxisSide::YLeft | AxisSide::YRight => (false, dom.u, T::zero(), dom.c),
    };
    let step = cfg.diff_step * (hi - lo);
    let mk = |pick_g: bool| {
        let f = sf.clone();
        move |t: T| {
            let q = if along_x { f(unit, t, other) } else { f(unit, other, t) };
            let (ga, gb) = split_on_slice(q, unit, j);
            if pick_g {
                gb
            } else {
                ga
            }
        }
    };
    let fa = Integrand1D::new(lo, hi, mk(false));
    let fb = Integrand1D::new(lo, hi, mk(true));
    let dfa = Integrand1D::new(lo, hi, numeric_partial(mk(false), lo, hi, step));
    let dfb = Integrand1D::new(lo, hi, numeric_partial(mk(true), lo, hi, step));
    let (da, db) = match side {
        AxisSide::XLeft | AxisSide::YLeft => (
            caputo_left(&fa, &dfa, lo, order, at, cfg)?,
            caputo_left(&fb, &dfb, lo, order, at, cfg)?,
        ),
        AxisSide::XRight | AxisSide::YRight => (
            caputo_right(&fa, &dfa, hi, order, at, cfg)?,
            caputo_right(&fb, &dfb, hi, order, at, cfg)?,
        ),
    };
    Ok(unsplit(da, db, unit, j))
}

/// Left Caputo slice operator at `(unit, x, y)`.
pub fn d_caputo_left<T: Real>(
    f: &SliceFunction<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    unit: ImaginaryUnit<T>,
    x: T,
    y: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    match f {
        SliceFunction::Symbolic(s) => {
            Ok(d_caputo_left_symbolic(s, dom, orders)?.eval_left(unit, x, y)?)
        }
        SliceFunction::Sampled(sf) => {
            dom.validate()?;
            let cx = sampled_axis_caputo(sf, dom, orders.alpha, AxisSide::XLeft, x, unit, cfg)?;
            let cy = sampled_axis_caputo(sf, dom, orders.beta, AxisSide::YLeft, y, unit, cfg)?;
            Ok(cx + unit.as_quaternion() * cy)
        }
    }
}

/// Variant of [`d_caputo_left`] with the unit on the right of the
/// y-component.
pub fn d_caputo_left_runit<T: Real>(
    f: &SliceFunction<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    unit: ImaginaryUnit<T>,
    x: T,
    y: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    match f {
        SliceFunction::Symbolic(s) => {
            Ok(d_caputo_left_symbolic(s, dom, orders)?.eval_right(unit, x, y)?)
        }
        SliceFunction::Sampled(sf) => {
            dom.validate()?;
            let cx = sampled_axis_caputo(sf, dom, orders.alpha, AxisSide::XLeft, x, unit, cfg)?;
            let cy = sampled_axis_caputo(sf, dom, orders.beta, AxisSide::YLeft, y, unit, cfg)?;
            Ok(cx + cy * unit.as_quaternion())
        }
    }
}

/// Right-sided Caputo slice operator; symbolic inputs are sampled, as in
/// [`d_rl_rightsided`].
pub fn d_caputo_rightsided<T: Real>(
    f: &SliceFunction<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    unit: ImaginaryUnit<T>,
    x: T,
    y: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    dom.validate()?;
    let sf = as_sampler(f);
    let cx = sampled_axis_caputo(&sf, dom, orders.alpha, AxisSide::XRight, x, unit, cfg)?;
    let cy = sampled_axis_caputo(&sf, dom, orders.beta, AxisSide::YRight, y, unit, cfg)?;
    Ok(cx + unit.as_quaternion() * cy)
}

/// Associated integral map at a point.
pub fn assoc_integral_map<T: Real>(
    f: &SliceFunction<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    variant: Variant,
    unit: ImaginaryUnit<T>,
    x: T,
    y: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    match f {
        SliceFunction::Symbolic(s) => {
            let m = assoc_integral_map_symbolic(s, dom, orders, variant)?;
            Ok(sym_eval(&m, unit, x, y)?)
        }
        SliceFunction::Sampled(sf) => {
            dom.validate()?;
            let j = unit.orthogonal_unit();
            let xo = orders.alpha.complement();
            let yo = match variant {
                Variant::Corrected => orders.beta.complement(),
                Variant::Alt => orders.beta.complement().conj(),
            };
            let (fa, fb) = restricted_pair(sf, unit, j, dom.v, true, dom.a, dom.b);
            let ix = unsplit(
                rl_integral_left(&fa, dom.a, xo, x, cfg)?,
                rl_integral_left(&fb, dom.a, xo, x, cfg)?,
                unit,
                j,
            );
            let (ga, gb) = restricted_pair(sf, unit, j, dom.u, false, T::zero(), dom.c);
            let iy = unsplit(
                rl_integral_left(&ga, T::zero(), yo, y, cfg)?,
                rl_integral_left(&gb, T::zero(), yo, y, cfg)?,
                unit,
                j,
            );
            Ok(ix + iy)
        }
    }
}

/// The slice Cauchy-Riemann operator `dbar f = (d/dx f + I d/dy f) / 2`
/// at `(unit, x, y)`.
pub fn cr_bar<T: Real>(
    f: &SliceFunction<T>,
    dom: &SliceDomain<T>,
    unit: ImaginaryUnit<T>,
    x: T,
    y: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Quaternion<T>, SliceError> {
    match f {
        SliceFunction::Symbolic(s) => {
            let dx = sym_eval(&sym_partial_x(s), unit, x, y)?;
            let dy = sym_eval(&sym_partial_y(s), unit, x, y)?;
            Ok((dx + unit.as_quaternion() * dy).scale(T::of(0.5)))
        }
        SliceFunction::Sampled(sf) => {
            dom.validate()?;
            let j = unit.orthogonal_unit();
            let hx = cfg.diff_step * (dom.b - dom.a);
            let hy = cfg.diff_step * dom.c;
            if x - hx * T::of(4.0) < dom.a || x + hx * T::of(4.0) > dom.b {
                return Err(SliceError::Num(FracNumError::Stencil(
                    "x too close to the domain edge for the stencil".into(),
                )));
            }
            if y - hy * T::of(4.0) < T::zero() || y + hy * T::of(4.0) > dom.c {
                return Err(SliceError::Num(FracNumError::Stencil(
                    "y too close to the domain edge for the stencil".into(),
                )));
            }
            let lvl = cfg.richardson_levels;
            let sfx = sf.clone();
            let dxa = richardson_derivative(
                |t| Ok(split_on_slice(sfx(unit, t, y), unit, j).0),
                x,
                hx,
                lvl,
            )?;
            let sfx = sf.clone();
            let dxb = richardson_derivative(
                |t| Ok(split_on_slice(sfx(unit, t, y), unit, j).1),
                x,
                hx,
                lvl,
            )?;
            let sfy = sf.clone();
            let dya = richardson_derivative(
                |t| Ok(split_on_slice(sfy(unit, x, t), unit, j).0),
                y,
                hy,
                lvl,
            )?;
            let sfy = sf.clone();
            let dyb = richardson_derivative(
                |t| Ok(split_on_slice(sfy(unit, x, t), unit, j).1),
                y,
                hy,
                lvl,
            )?;
            let dx = unsplit(dxa, dxb, unit, j);
            let dy = unsplit(dya, dyb, unit, j);
            Ok((dx + unit.as_quaternion() * dy).scale(T::of(0.5)))
        }
    }
}

/// Whether the exact left Riemann-Liouville slice image collapses to zero,
/// together with the relative residual that judgment is based on.
pub fn is_rl_slice_regular<T: Real>(
    f: &MonomialSum<T>,
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
) -> Result<(bool, T), SliceError> {
    let img = d_rl_left_symbolic(f, dom, orders)?;
    let r = img.regularity_residual();
    Ok((r <= T::of(1e-12), r))
}

/// The monomial `(x - a)^(alpha - 1) y^(beta - 1) * w`, which the left
/// operator annihilates exactly (both gamma ratios hit poles).
pub fn kernel_monomial<T: Real>(
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    w: Quaternion<T>,
) -> MonomialSum<T> {
    let one = PlaneComplex::new(T::one(), T::zero());
    let mu = orders.alpha.as_complex() - one;
    let nu = orders.beta.as_complex() - one;
    MonomialSum::new(dom.a, vec![MonomialTerm::new(one, mu, nu, w)])
}

/// Separable test function built from four bracket factors
/// `A(x) B(y) q1 + I C(x) E(y) q2` whose brackets collapse pairwise when
/// both orders equal one half; at generic orders it is not annihilated.
#[allow(clippy::too_many_arguments)]
pub fn example_brackets<T: Real>(
    dom: &SliceDomain<T>,
    orders: &OrderPair<T>,
    q1: Quaternion<T>,
    q2: Quaternion<T>,
    delta: PlaneComplex<T>,
    gamma: PlaneComplex<T>,
) -> Result<MonomialSum<T>, SliceError> {
    use crate::specfun::{gamma as cgamma, gamma_ratio};
    let a = dom.a;
    let one = PlaneComplex::new(T::one(), T::zero());
    let two = one + one;
    let zero = PlaneComplex::new(T::zero(), T::zero());
    let al = orders.alpha.as_complex();
    let be = orders.beta.as_complex();

    // A(x) = 1 - (x-a)^(1-2 alpha) / gamma(2 - 2 alpha)
    let ga = cgamma(two - al * two)?;
    let a_sum = MonomialSum::new(
        a,
        vec![
            MonomialTerm::plain(one, zero, zero),
            MonomialTerm::plain(-one / ga, one - al * two, zero),
        ],
    );
    // B(y) = 1 - y^(1-2 beta) / gamma(2 - 2 beta)
    let gb = cgamma(two - be * two)?;
    let b_sum = MonomialSum::new(
        a,
        vec![
            MonomialTerm::plain(one, zero, zero),
            MonomialTerm::plain(-one / gb, zero, one - be * two),
        ],
    );
    // C(x) = (x-a)^delta - gamma(delta+1)/gamma(delta+2-2 alpha) (x-a)^(delta+1-2 alpha)
    let rc = gamma_ratio(delta + one, delta + two - al * two)?;
    let c_sum = MonomialSum::new(
        a,
        vec![
            MonomialTerm::plain(one, delta, zero),
            MonomialTerm::plain(-rc, delta + one - al * two, zero),
        ],
    );
    // E(y) = y^gamma - gamma(gamma+1)/gamma(gamma+2-2 beta) y^(gamma+1-2 beta)
    let re_ = gamma_ratio(gamma + one, gamma + two - be * two)?;
    let e_sum = MonomialSum::new(
        a,
        vec![
            MonomialTerm::plain(one, zero, gamma),
            MonomialTerm::plain(-re_, zero, gamma + one - be * two),
        ],
    );

    let i_unit = PlaneComplex::new(T::zero(), T::one());
    let part1 = a_sum.separable_product(&b_sum).mul_right(q1);
    let part2 = c_sum.separable_product(&e_sum).scale(i_unit).mul_right(q2);
    Ok(part1.add(&part2))
}

/// Draws a uniform point on the unit two-sphere (rejection sampling in the
/// unit disc), identical across scalar types for a fixed generator state.
pub fn random_unit<T: Real, R: Rng>(rng: &mut R) -> ImaginaryUnit<T> {
    loop {
        let s1: f64 = rng.gen_range(-1.0..1.0);
        let s2: f64 = rng.gen_range(-1.0..1.0);
        let s = s1 * s1 + s2 * s2;
        if s >= 1.0 || s < 1e-12 {
            continue;
        }
        let r = (1.0 - s).sqrt();
        if let Ok(u) = ImaginaryUnit::new(
            T::of(2.0 * s1 * r),
            T::of(2.0 * s2 * r),
            T::of(1.0 - 2.0 * s),
        ) {
            return u;
        }
    }
}

/// Evaluation grid: a set of imaginary units crossed with a Chebyshev-spaced
/// interior rectangle (points keep a margin from every edge so derivative
/// stencils and base-point constraints stay valid).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Serialize + Real",
    deserialize = "T: Deserialize<'de> + Real"
))]
pub struct GridSpec<T> {
    pub units: Vec<ImaginaryUnit<T>>,
    pub nx: usize,
    pub ny: usize,
    pub margin: T,
}

impl<T: Real> GridSpec<T> {
    /// Three axis units plus `extra` seeded random ones, 8 x 8 points,
    /// margin 5% of each side.
    pub fn standard<R: Rng>(rng: &mut R, extra: usize) -> Self {
        let mut units = vec![
            ImaginaryUnit::e1(),
            ImaginaryUnit::e2(),
            ImaginaryUnit::e3(),
        ];
        for _ in 0..extra {
            units.push(random_unit(rng));
        }
        Self { units, nx: 8, ny: 8, margin: T::of(0.05) }
    }

    fn chebyshev(lo: T, hi: T, n: usize, k: usize) -> T {
        let t = T::of(std::f64::consts::PI) * (T::of(k as f64) + T::of(0.5))
            / T::of(n as f64);
        lo + (hi - lo) * (T::one() - t.cos()) * T::of(0.5)
    }

    pub fn points(&self, dom: &SliceDomain<T>) -> Vec<SlicePoint<T>> {
        let mx = (dom.b - dom.a) * self.margin;
        let my = dom.c * self.margin;
        let (xlo, xhi) = (dom.a + mx, dom.b - mx);
        let (ylo, yhi) = (my, dom.c - my);
        let mut out = Vec::with_capacity(self.units.len() * self.nx * self.ny);
        for &unit in &self.units {
            for kx in 0..self.nx {
                for ky in 0..self.ny {
                    out.push(SlicePoint {
                        x: Self::chebyshev(xlo, xhi, self.nx, kx),
                        y: Self::chebyshev(ylo, yhi, self.ny, ky),
                        unit,
                    });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{cpow, gamma, gamma_ratio};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type C = PlaneComplex<f64>;
    type Q = Quaternion<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn random_quat(rng: &mut ChaCha8Rng) -> Q {
        Q::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    fn random_sum(rng: &mut ChaCha8Rng, n: usize, mu_lo: f64, anchor: f64) -> MonomialSum<f64> {
        let terms = (0..n)
            .map(|_| {
                MonomialTerm::new(
                    c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                    c(rng.gen_range(mu_lo..2.5), rng.gen_range(-0.8..0.8)),
                    c(rng.gen_range(mu_lo..2.5), rng.gen_range(-0.8..0.8)),
                    random_quat(rng),
                )
            })
            .collect();
        MonomialSum::new(anchor, terms)
    }

    #[test]
    fn domain_validation_rejects_bad_base_points() {
        assert!(SliceDomain::new(0.0, 1.0, 1.0, 0.4, 0.3).is_ok());
        assert!(SliceDomain::new(0.0, 1.0, 1.0, 0.0, 0.3).is_err());
        assert!(SliceDomain::new(0.0, 1.0, 1.0, 0.4, 0.0).is_err());
        assert!(SliceDomain::new(1.0, 1.0, 1.0, 0.4, 0.3).is_err());
        assert!(SliceDomain::new(0.0, 1.0, -1.0, 0.4, 0.3).is_err());
    }

    #[test]
    fn variant_parses_and_prints() {
        assert_eq!("corrected".parse::<Variant>().unwrap(), Variant::Corrected);
        assert_eq!("alt".parse::<Variant>().unwrap(), Variant::Alt);
        assert!("default".parse::<Variant>().is_err());
        assert_eq!(serde_json::to_string(&Variant::Alt).unwrap(), "\"alt\"");
    }

    #[test]
    fn symbolic_and_sampled_rl_slice_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let dom = SliceDomain::default();
        let orders = OrderPair::default();
        let cfg = QuadratureConfig::default();
        for _ in 0..3 {
            let s = random_sum(&mut rng, 3, 0.4, dom.a);
            let f_sym = SliceFunction::Symbolic(s.clone());
            let f_smp = sampled_from_symbolic(s);
            let unit = random_unit(&mut rng);
            let (x, y) = (rng.gen_range(0.5..0.9), rng.gen_range(0.5..0.9));
            let want = d_rl_left(&f_sym, &dom, &orders, unit, x, y, &cfg).unwrap();
            let got = d_rl_left(&f_smp, &dom, &orders, unit, x, y, &cfg).unwrap();
            let rel = (got - want).norm() / (1.0 + want.norm());
            assert!(rel <= 1e-5, "rel={rel:e}");
        }
    }

    #[test]
    fn kernel_monomial_is_annihilated_on_both_backends() {
        let dom = SliceDomain::default();
        let orders = OrderPair::default();
        let w = Q::new(0.3, -1.0, 0.2, 0.7);
        let k = kernel_monomial(&dom, &orders, w);
        let (reg, resid) = is_rl_slice_regular(&k, &dom, &orders).unwrap();
        assert!(reg, "residual {resid:e}");
        assert_eq!(resid, 0.0);

        let cfg = QuadratureConfig::default();
        let f = sampled_from_symbolic(k);
        let unit = ImaginaryUnit::e3();
        let val = d_rl_left(&f, &dom, &orders, unit, 0.6, 0.55, &cfg).unwrap();
        assert!(val.norm() <= 1e-5, "sampled kernel image {:e}", val.norm());
    }

    #[test]
    fn kernel_condition_is_termwise_and_base_point_free() {
        let orders = OrderPair::default();
        let dom1 = SliceDomain::default();
        let dom2 = SliceDomain::new(0.0, 1.0, 1.0, 0.7, 0.6).unwrap();
        let k = kernel_monomial(&dom1, &orders, Q::one());
        assert!(is_rl_slice_regular(&k, &dom1, &orders).unwrap().0);
        assert!(is_rl_slice_regular(&k, &dom2, &orders).unwrap().0);

        // perturbing either exponent off the kernel pair breaks membership
        let one = c(1.0, 0.0);
        let mut t = k.terms[0];
        t.mu = t.mu + c(0.05, 0.0);
        let p1 = MonomialSum::new(dom1.a, vec![t]);
        assert!(!is_rl_slice_regular(&p1, &dom1, &orders).unwrap().0);
        let mut t2 = k.terms[0];
        t2.nu = t2.nu + c(0.0, 0.3);
        let p2 = MonomialSum::new(dom1.a, vec![t2]);
        assert!(!is_rl_slice_regular(&p2, &dom1, &orders).unwrap().0);
        // and a mixed sum is regular only if every term is in the kernel
        let both = k.add(&MonomialSum::new(dom1.a, vec![MonomialTerm::plain(one, one, one)]));
        assert!(!is_rl_slice_regular(&both, &dom1, &orders).unwrap().0);
    }

    #[test]
    fn left_operator_commutes_with_right_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dom = SliceDomain::default();
        let orders = OrderPair::default();
        let cfg = QuadratureConfig::default();
        let s = random_sum(&mut rng, 4, -0.4, dom.a);
        let q = random_quat(&mut rng);
        let unit = random_unit(&mut rng);
        let (x, y) = (0.7, 0.6);

        let lhs =
            d_rl_left(&SliceFunction::Symbolic(s.mul_right(q)), &dom, &orders, unit, x, y, &cfg)
                .unwrap();
        let rhs = d_rl_left(&SliceFunction::Symbolic(s.clone()), &dom, &orders, unit, x, y, &cfg)
            .unwrap()
            * q;
        assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));

        // the unit-on-the-right placement does not commute in general...
        let lhs_r = d_rl_left_runit(
            &SliceFunction::Symbolic(s.mul_right(q)),
            &dom,
            &orders,
            unit,
            x,
            y,
            &cfg,
        )
        .unwrap();
        let rhs_r =
            d_rl_left_runit(&SliceFunction::Symbolic(s.clone()), &dom, &orders, unit, x, y, &cfg)
                .unwrap()
                * q;
        assert!((lhs_r - rhs_r).norm() > 1e-6);

        // ...and agrees with the left placement exactly on slice-plane values
        let plain = MonomialSum::new(
            dom.a,
            s.terms.iter().map(|t| MonomialTerm::plain(t.scalar, t.mu, t.nu)).collect(),
        );
        let l = d_rl_left(&SliceFunction::Symbolic(plain.clone()), &dom, &orders, unit, x, y, &cfg)
            .unwrap();
        let r = d_rl_left_runit(&SliceFunction::Symbolic(plain), &dom, &orders, unit, x, y, &cfg)
            .unwrap();
        assert!((l - r).norm() <= 1e-13 * (1.0 + l.norm()));
    }

    #[test]
    fn rightsided_matches_mirror_power_rule() {
        let dom = SliceDomain::default();
        let orders = OrderPair::default();
        let cfg = QuadratureConfig::default();
        let p = c(1.7, 0.4);
        let (b, cc) = (dom.b, dom.c);
        let f = SliceFunction::Sampled(Arc::new(move |unit, x, _y| {
            crate::quat::embed(cpow(b - x, p).unwrap(), unit)
        }));
        let unit = ImaginaryUnit::e2();
        let (x, y) = (0.45, 0.6);
        let got = d_rl_rightsided(&f, &dom, &orders, unit, x, y, &cfg).unwrap();

        let one = c(1.0, 0.0);
        let al = orders.alpha.as_complex();
        let be = orders.beta.as_complex();
        let comp_x = gamma_ratio(p + one, p + one - al).unwrap() * cpow(b - x, p - al).unwrap();
        let fu = cpow(b - dom.u, p).unwrap();
        let comp_y = fu * cpow(cc - y, -be).unwrap() / gamma(one - be).unwrap();
        let want = crate::quat::embed(comp_x, unit)
            + unit.as_quaternion() * crate::quat::embed(comp_y, unit);
        let rel = (got - want).norm() / (1.0 + want.norm());
        assert!(rel <= 1e-6, "rel={rel:e}");
    }

    #[test]
    fn caputo_slice_backends_agree_on_smooth_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let dom = SliceDomain::default();
        let orders = OrderPair::default();
        let cfg = QuadratureConfig::default();
        let s = random_sum(&mut rng, 3, 1.0, dom.a);
        let f_sym = SliceFunction::Symbolic(s.clone());
        let f_smp = sampled_from_symbolic(s);
        let unit = random_unit(&mut rng);
        let (x, y) = (0.62, 0.58);
        let want = d_caputo_left(&f_sym, &dom, &orders, unit, x, y, &cfg).unwrap();
        let got = d_caputo_left(&f_smp, &dom, &orders, unit, x, y, &cfg).unwrap();
        let rel = (got - want).norm() / (1.0 + want.norm());
        assert!(rel <= 1e-4, "rel={rel:e}");
    }

    #[test]
    fn operator_factors_through_the_integral_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(1312);
        let dom = SliceDomain::default();
        for trial in 0..30 {
            let s = random_sum(&mut rng, 3, -0.3, dom.a);
            let orders = OrderPair {
                alpha: ComplexOrder::new(rng.gen_range(0.15..0.85), rng.gen_range(-0.8..0.8))
                    .unwrap(),
                beta: ComplexOrder::new(rng.gen_range(0.15..0.85), rng.gen_range(-0.8..0.8))
                    .unwrap(),
            };
            let variant = if trial % 2 == 0 { Variant::Corrected } else { Variant::Alt };
            let map =
                assoc_integral_map_symbolic(&s, &dom, &orders, variant).unwrap();
            let img = d_rl_left_symbolic(&s, &dom, &orders).unwrap();
            let unit = random_unit(&mut rng);
            let (x, y) = (rng.gen_range(0.3..0.9), rng.gen_range(0.3..0.9));

            // 2 dbar of the map, with the y-order matching the variant
            let dx = sym_eval(&sym_partial_x(&map), unit, x, y).unwrap();
            let dy = sym_eval(&sym_partial_y(&map), unit, x, y).unwrap();
            let two_dbar = dx + unit.as_quaternion() * dy;

            if variant == Variant::Corrected {
                let want = img.eval_left(unit, x, y).unwrap();
                let rel = (two_dbar - want).norm() / (1.0 + want.norm());
                assert!(rel <= 1e-10, "trial {trial}: rel={rel:e}");
            } else {
                // the alt reading factors a different y-order operator
                let alt_beta = ComplexOrder::new(orders.beta.re(), -orders.beta.im()).unwrap();
                let alt_orders = OrderPair { alpha: orders.alpha, beta: alt_beta };
                let want = d_rl_left_symbolic(&s, &dom, &alt_orders)
                    .unwrap()
                    .eval_left(unit, x, y)
                    .unwrap();
                let rel = (two_dbar - want).norm() / (1.0 + want.norm());
                assert!(rel <= 1e-10, "trial {trial}: rel={rel:e}");
            }
        }
    }

    #[test]
    fn factorization_holds_on_the_sampled_backend() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let dom = SliceDomain::default();
        let orders = OrderPair::default();
        let cfg = QuadratureConfig::default();
        let s = random_sum(&mut rng, 2, 0.5, dom.a);
        let f = sampled_from_symbolic(s.clone());
        let unit = random_unit(&mut rng);
        let (x, y) = (0.55, 0.6);

        let map_fn = {
            let dom2 = dom;
            let f2 = f.clone();
            let cfg2 = cfg.clone();
            SliceFunction::Sampled(Arc::new(move |un, xx, yy| {
                assoc_integral_map(&f2, &dom2, &orders, Variant::Corrected, un, xx, yy, &cfg2)
                    .expect("map evaluation")
            }))
        };
        let two_dbar = cr_bar(&map_fn, &dom, unit, x, y, &cfg).unwrap().scale(2.0);
        let want = d_rl_left(&SliceFunction::Symbolic(s), &dom, &orders, unit, x, y, &cfg).unwrap();
        let rel = (two_dbar - want).norm() / (1.0 + want.norm());
        assert!(rel <= 1e-5, "rel={rel:e}");
    }

    #[test]
    fn bracket_example_collapses_only_at_half_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let dom = SliceDomain::default();
        let q1 = random_quat(&mut rng);
        let q2 = random_quat(&mut rng);
        let delta = c(rng.gen_range(0.5..1.5), rng.gen_range(-0.3..0.3));
        let gamma_e = c(rng.gen_range(0.5..1.5), rng.gen_range(-0.3..0.3));

        let half = OrderPair {
            alpha: ComplexOrder::new(0.5, 0.0).unwrap(),
            beta: ComplexOrder::new(0.5, 0.0).unwrap(),
        };
        let f = example_brackets(&dom, &half, q1, q2, delta, gamma_e).unwrap();
        assert_eq!(f.terms.len(), 8);
        let img = d_rl_left_symbolic(&f, &dom, &half).unwrap();
        let resid = img.regularity_residual();
        assert!(resid <= 1e-12, "half-order residual {resid:e}");

        let generic = OrderPair {
            alpha: ComplexOrder::new(0.35, 0.2).unwrap(),
            beta: ComplexOrder::new(0.65, -0.15).unwrap(),
        };
        let g = example_brackets(&dom, &generic, q1, q2, delta, gamma_e).unwrap();
        let img_g = d_rl_left_symbolic(&g, &dom, &generic).unwrap();
        let resid_g = img_g.regularity_residual();
        assert!(resid_g > 1e-3, "generic residual unexpectedly small: {resid_g:e}");
    }

    #[test]
    fn sampled_error_shrinks_with_node_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let dom = SliceDomain::default();
        let orders = OrderPair::default();
        let q1 = random_quat(&mut rng);
        let q2 = random_quat(&mut rng);
        let f = example_brackets(&dom, &orders, q1, q2, c(1.1, 0.2), c(0.9, -0.1)).unwrap();
        let unit = ImaginaryUnit::e1();
        let (x, y) = (0.6, 0.55);
        let want = d_rl_left_symbolic(&f, &dom, &orders)
            .unwrap()
            .eval_left(unit, x, y)
            .unwrap();
        let smp = sampled_from_symbolic(f);
        let mut errs = Vec::new();
        for nodes in [16usize, 32, 64] {
            let cfg = QuadratureConfig { nodes, ..QuadratureConfig::default() };
            let got = d_rl_left(&smp, &dom, &orders, unit, x, y, &cfg).unwrap();
            errs.push((got - want).norm());
        }
        assert!(
            errs[2] <= errs[0] * 1.2 && errs[1] <= errs[0] * 1.2,
            "errors did not shrink: {errs:?}"
        );
        assert!(errs[2] <= 1e-6, "final error {:e}", errs[2]);
    }

    #[test]
    fn grid_is_interior_and_deterministic() {
        let dom = SliceDomain::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let g1 = GridSpec::<f64>::standard(&mut rng, 5);
        let mut rng2 = ChaCha8Rng::seed_from_u64(0);
        let g2 = GridSpec::<f64>::standard(&mut rng2, 5);
        assert_eq!(g1.units.len(), 8);
        let p1 = g1.points(&dom);
        let p2 = g2.points(&dom);
        assert_eq!(p1.len(), 8 * 8 * 8);
        for (a, b) in p1.iter().zip(&p2) {
            assert_eq!(a.x, b.x);
            assert_eq!(a.y, b.y);
            assert_eq!(a.unit.components(), b.unit.components());
        }
        for p in &p1 {
            assert!(p.x > dom.a && p.x < dom.b);
            assert!(p.y > 0.0 && p.y < dom.c);
        }
    }

    #[test]
    fn variant_changes_the_map_only_for_complex_beta() {
        let dom = SliceDomain::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_sum(&mut rng, 3, 0.0, dom.a);
        let complex_orders = OrderPair::default();
        let m1 = assoc_integral_map_symbolic(&s, &dom, &complex_orders, Variant::Corrected)
            .unwrap()
            .collect();
        let m2 = assoc_integral_map_symbolic(&s, &dom, &complex_orders, Variant::Alt)
            .unwrap()
            .collect();
        assert_ne!(m1, m2);

        let real_orders = OrderPair {
            alpha: ComplexOrder::new(0.35, 0.0).unwrap(),
            beta: ComplexOrder::new(0.65, 0.0).unwrap(),
        };
        let r1 = assoc_integral_map_symbolic(&s, &dom, &real_orders, Variant::Corrected)
            .unwrap()
            .collect();
        let r2 = assoc_integral_map_symbolic(&s, &dom, &real_orders, Variant::Alt)
            .unwrap()
            .collect();
        assert_eq!(r1, r2);
    }
}
