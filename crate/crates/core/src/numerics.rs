//! Adaptive quadrature over semi-infinite intervals.
//!
//! Two entry points cover everything the rest of the crate needs:
//!
//! * [`integrate_semi_infinite`] — absolutely convergent integrals on
//!   (0, ∞). The declared [`DecayClass`] picks a truncation point, a
//!   globally adaptive Gauss–Kronrod 15-point rule handles the finite part
//!   and an analytic tail estimate is folded into the error.
//! * [`integrate_oscillatory_cos`] — integrals of `f(x) cos(ω x)`. The axis
//!   is cut at the zeros of the cosine; the resulting sign-alternating
//!   half-period contributions are summed with Euler's transformation, which
//!   also assigns the natural regularized value when `f` itself has no
//!   integrable tail (bounded envelopes, conditionally convergent cases).
//!
//! Integrands are complex valued and may themselves fail (they are often
//! nested quadratures), hence the `Fn(f64) -> Result<Complex64>` shape.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tail behaviour of an integrand on (0, ∞).
///
/// The class describes the *shape* of the decay; amplitude is recovered by
/// sampling the integrand near the truncation point, so constants do not
/// need to be supplied.
#[derive(Clone)]
pub enum DecayClass {
    /// `|f(x)| ~ e^{-a x}` with rate `a > 0`.
    ExponentialRate(f64),
    /// `|f(x)| ~ x^{-p}` with order `p > 1`.
    PolynomialRate(f64),
    /// Bounded amplitude with no absolutely integrable tail. Only the
    /// oscillatory integrator accepts this class; it relies purely on
    /// half-period alternation.
    BoundedOscillatory,
    /// Explicit monotone bound `X ↦ ∫_X^∞ |f|`.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for DecayClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecayClass::ExponentialRate(a) => write!(f, "ExponentialRate({a})"),
            DecayClass::PolynomialRate(p) => write!(f, "PolynomialRate({p})"),
            DecayClass::BoundedOscillatory => write!(f, "BoundedOscillatory"),
            DecayClass::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl DecayClass {
    /// Exponential tail with validated positive rate.
    pub fn exponential(rate: f64) -> Result<Self> {
        if rate.is_finite() && rate > 0.0 {
            Ok(DecayClass::ExponentialRate(rate))
        } else {
            Err(Error::InvalidDecay {
                value: rate,
                reason: "exponential rate must be positive and finite",
            })
        }
    }

    /// Polynomial tail with validated order; anything at or below one has a
    /// divergent tail integral.
    pub fn polynomial(order: f64) -> Result<Self> {
        if order.is_finite() && order > 1.0 {
            Ok(DecayClass::PolynomialRate(order))
        } else {
            Err(Error::InvalidDecay {
                value: order,
                reason: "polynomial order must exceed 1",
            })
        }
    }

    /// Explicit tail bound map.
    pub fn custom<B>(bound: B) -> Self
    where
        B: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        DecayClass::Custom(Arc::new(bound))
    }

    /// Unit-amplitude bound on the tail integral past `x`, `None` when the
    /// class admits no absolute bound.
    pub fn tail_bound(&self, x: f64) -> Option<f64> {
        match self {
            DecayClass::ExponentialRate(a) => Some((-a * x).exp()),
            DecayClass::PolynomialRate(p) => {
                if x <= 0.0 {
                    Some(f64::INFINITY)
                } else {
                    Some(x.powf(1.0 - p) / (p - 1.0))
                }
            }
            DecayClass::BoundedOscillatory => None,
            DecayClass::Custom(b) => Some(b(x).max(0.0)),
        }
    }

    /// Decay of `|f|^p` given the decay of `f`.
    pub fn pow(&self, p: f64) -> Result<DecayClass> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidConfig("power must be positive and finite"));
        }
        match self {
            DecayClass::ExponentialRate(a) => DecayClass::exponential(a * p),
            DecayClass::PolynomialRate(q) => DecayClass::polynomial(q * p).map_err(|_| {
                Error::NonIntegrable(format!(
                    "power {p} of an algebraic tail of order {q} leaves order {} ≤ 1",
                    q * p
                ))
            }),
            DecayClass::BoundedOscillatory => Ok(DecayClass::BoundedOscillatory),
            DecayClass::Custom(_) => Err(Error::InvalidConfig(
                "custom tail bounds cannot be raised to a power",
            )),
        }
    }

    /// Decay of `t^k f(t)` given the decay of `f`. Exponential tails absorb
    /// any power; algebraic tails lose `k` orders.
    pub fn with_power_weight(&self, k: f64) -> Result<DecayClass> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::InvalidConfig("weight power must be non-negative"));
        }
        match self {
            DecayClass::ExponentialRate(a) => Ok(DecayClass::ExponentialRate(*a)),
            DecayClass::PolynomialRate(q) => DecayClass::polynomial(q - k).map_err(|_| {
                Error::NonIntegrable(format!(
                    "weight t^{k} against an algebraic tail of order {q} leaves order {} ≤ 1",
                    q - k
                ))
            }),
            DecayClass::BoundedOscillatory => Err(Error::NonIntegrableDecay),
            DecayClass::Custom(_) => Err(Error::InvalidConfig(
                "custom tail bounds cannot absorb polynomial weights",
            )),
        }
    }

    /// The slower (more conservative) of two tails; used when adding
    /// functions together.
    pub fn slower_of(&self, other: &DecayClass) -> DecayClass {
        use DecayClass::*;
        match (self, other) {
            (BoundedOscillatory, _) | (_, BoundedOscillatory) => BoundedOscillatory,
            (ExponentialRate(a), ExponentialRate(b)) => ExponentialRate(a.min(*b)),
            (PolynomialRate(p), PolynomialRate(q)) => PolynomialRate(p.min(*q)),
            // A polynomial tail always dominates an exponential one.
            (PolynomialRate(p), ExponentialRate(_)) | (ExponentialRate(_), PolynomialRate(p)) => {
                PolynomialRate(*p)
            }
            (Custom(b), d) | (d, Custom(b)) => {
                let b = b.clone();
                let d = d.clone();
                DecayClass::custom(move |x| {
                    let own = b(x).max(0.0);
                    match d.tail_bound(x) {
                        Some(t) => own.max(t),
                        None => own,
                    }
                })
            }
        }
    }
}

/// Quadrature policy shared by every operation in the crate.
#[derive(Clone, Debug, Serialize)]
pub struct QuadCfg {
    /// Absolute tolerance on the integral value.
    pub abs_tol: f64,
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Maximum bisection depth of a single panel.
    pub max_depth: u32,
    /// Multiplier applied to the analytic truncation point.
    pub truncation_safety: f64,
    /// Initial panels per cosine period before adaptive refinement.
    pub osc_panels_per_period: u32,
    /// Euler-transformation depth for the alternating half-period series.
    pub extrapolation_levels: u32,
}

impl Default for QuadCfg {
    fn default() -> Self {
        QuadCfg {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_depth: 40,
            truncation_safety: 1.5,
            osc_panels_per_period: 4,
            extrapolation_levels: 12,
        }
    }
}

impl QuadCfg {
    /// Same policy with different tolerances.
    pub fn with_tols(&self, abs_tol: f64, rel_tol: f64) -> QuadCfg {
        QuadCfg {
            abs_tol,
            rel_tol,
            ..self.clone()
        }
    }

    /// Tolerances divided by `factor`, for quadratures nested inside an
    /// outer quadrature.
    pub fn tightened(&self, factor: f64) -> QuadCfg {
        QuadCfg {
            abs_tol: (self.abs_tol / factor).max(1e-300),
            rel_tol: (self.rel_tol / factor).max(1e-15),
            ..self.clone()
        }
    }

    /// Policy for triple direct quadrature: tolerances are relaxed (never
    /// below 1e-7) so the nested evaluation stays affordable.
    pub fn relaxed_3d(&self) -> QuadCfg {
        QuadCfg {
            abs_tol: self.abs_tol.max(1e-7),
            rel_tol: self.rel_tol.max(1e-7),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol.is_finite() && self.abs_tol > 0.0) {
            return Err(Error::InvalidConfig("abs_tol must be positive and finite"));
        }
        if !(self.rel_tol.is_finite() && self.rel_tol >= 0.0) {
            return Err(Error::InvalidConfig("rel_tol must be non-negative and finite"));
        }
        if self.max_depth < 4 {
            return Err(Error::InvalidConfig("max_depth must be at least 4"));
        }
        if !(self.truncation_safety.is_finite() && self.truncation_safety >= 1.0) {
            return Err(Error::InvalidConfig("truncation_safety must be at least 1"));
        }
        if self.osc_panels_per_period == 0 {
            return Err(Error::InvalidConfig("osc_panels_per_period must be positive"));
        }
        Ok(())
    }
}

/// Value of a quadrature together with its accounting.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntegralValue {
    pub value: Complex64,
    /// Estimated absolute error, including truncation and acceleration
    /// remainders.
    pub err_est: f64,
    pub n_evals: u64,
    /// Whether the requested tolerance was met. `false` is an honest answer,
    /// not an error.
    pub converged: bool,
}

impl IntegralValue {
    fn tolerance(&self, cfg: &QuadCfg) -> f64 {
        cfg.abs_tol.max(cfg.rel_tol * self.value.norm())
    }

    /// The same integral multiplied by a constant.
    pub fn scaled(self, c: f64) -> IntegralValue {
        IntegralValue {
            value: self.value * c,
            err_est: self.err_est * c.abs(),
            ..self
        }
    }

    /// Combine with another quadrature that contributes additively.
    pub fn plus(self, other: IntegralValue) -> IntegralValue {
        IntegralValue {
            value: self.value + other.value,
            err_est: self.err_est + other.err_est,
            n_evals: self.n_evals + other.n_evals,
            converged: self.converged && other.converged,
        }
    }
}

/// Analytic truncation point: the smallest `X` whose unit-amplitude tail
/// bound drops to `budget`.
pub fn truncation_point(decay: &DecayClass, budget: f64) -> Result<f64> {
    if !(budget.is_finite() && budget > 0.0) {
        return Err(Error::InvalidConfig("truncation budget must be positive"));
    }
    match decay {
        DecayClass::ExponentialRate(a) => Ok((-(budget.ln()) / a).max(0.0)),
        DecayClass::PolynomialRate(p) => Ok(((p - 1.0) * budget).powf(-1.0 / (p - 1.0)).max(0.0)),
        DecayClass::BoundedOscillatory => Err(Error::NonIntegrableDecay),
        DecayClass::Custom(bound) => {
            let mut x = 1.0_f64;
            while bound(x) > budget {
                x *= 2.0;
                if x > 1e300 {
                    return Err(Error::NonIntegrableDecay);
                }
            }
            Ok(x)
        }
    }
}

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK qk15).
// Node and weight digits as tabulated there.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

struct PanelResult {
    value: Complex64,
    err: f64,
}

fn eval_checked<F>(f: &F, x: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let v = f(x)?;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteSample { x })
    }
}

/// QUADPACK-style error rescaling: sharpen the raw |K15 − G7| difference
/// using the deviation of the integrand from its panel mean.
fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

// Index pairing follows the QUADPACK source.
#[allow(clippy::needless_range_loop)]
fn gk15<F>(f: &F, a: f64, b: f64) -> Result<PanelResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);

    let fc = eval_checked(f, centr)?;
    let mut fv1 = [Complex64::default(); 7];
    let mut fv2 = [Complex64::default(); 7];

    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = fc.norm() * WGK[7];

    for j in 0..3 {
        let jtw = 2 * j + 1;
        let absc = hlgth * XGK[jtw];
        let f1 = eval_checked(f, centr - absc)?;
        let f2 = eval_checked(f, centr + absc)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        let fsum = f1 + f2;
        resg += fsum * WG[j];
        resk += fsum * WGK[jtw];
        resabs += WGK[jtw] * (f1.norm() + f2.norm());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let absc = hlgth * XGK[jtwm1];
        let f1 = eval_checked(f, centr - absc)?;
        let f2 = eval_checked(f, centr + absc)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        let fsum = f1 + f2;
        resk += fsum * WGK[jtwm1];
        resabs += WGK[jtwm1] * (f1.norm() + f2.norm());
    }

    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).norm() + (fv2[j] - reskh).norm());
    }

    let value = resk * hlgth;
    let resabs = resabs * hlgth.abs();
    let resasc = resasc * hlgth.abs();
    let raw_err = ((resk - resg) * hlgth).norm();
    Ok(PanelResult {
        value,
        err: rescale_error(raw_err, resabs, resasc),
    })
}

#[derive(Debug)]
struct Segment {
    err: f64,
    a: f64,
    b: f64,
    depth: u32,
    value: Complex64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

pub(crate) struct FiniteQuad {
    pub value: Complex64,
    pub err: f64,
    pub n_evals: u64,
    pub converged: bool,
}

const MAX_SEGMENTS: usize = 8192;
const GK15_EVALS: u64 = 15;

/// Globally adaptive quadrature on [a, b]: always split the segment with the
/// largest error estimate, never past `max_depth` bisections.
pub(crate) fn adaptive_finite<F>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
    initial_panels: usize,
) -> Result<FiniteQuad>
where
    F: Fn(f64) -> Result<Complex64>,
{
    // Negated so NaN endpoints also land in the degenerate branch.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(b > a) {
        return Ok(FiniteQuad {
            value: Complex64::default(),
            err: 0.0,
            n_evals: 0,
            converged: true,
        });
    }

    let panels = initial_panels.clamp(1, 256);
    let mut heap: BinaryHeap<Segment> = BinaryHeap::new();
    let mut n_evals = 0u64;
    let mut live_value = Complex64::default();
    let mut live_err = 0.0f64;
    // Segments that can no longer be split still count toward the totals.
    let mut frozen_value = Complex64::default();
    let mut frozen_err = 0.0f64;

    let step = (b - a) / panels as f64;
    for i in 0..panels {
        let pa = a + step * i as f64;
        let pb = if i + 1 == panels { b } else { a + step * (i + 1) as f64 };
        let r = gk15(f, pa, pb)?;
        n_evals += GK15_EVALS;
        live_value += r.value;
        live_err += r.err;
        heap.push(Segment {
            err: r.err,
            a: pa,
            b: pb,
            depth: 0,
            value: r.value,
        });
    }

    let mut converged = true;
    loop {
        let total_value = live_value + frozen_value;
        let total_err = live_err + frozen_err;
        let tol = abs_tol.max(rel_tol * total_value.norm());
        if total_err <= tol {
            break;
        }
        // Find the worst segment that is still splittable.
        let seg = loop {
            match heap.pop() {
                None => break None,
                Some(s) => {
                    let mid = 0.5 * (s.a + s.b);
                    let splittable = s.depth < max_depth && mid > s.a && mid < s.b;
                    if splittable {
                        break Some(s);
                    }
                    live_value -= s.value;
                    live_err -= s.err;
                    frozen_value += s.value;
                    frozen_err += s.err;
                }
            }
        };
        let Some(seg) = seg else {
            converged = false;
            break;
        };
        if heap.len() + 2 > MAX_SEGMENTS {
            heap.push(seg);
            converged = false;
            break;
        }

        live_value -= seg.value;
        live_err -= seg.err;
        let mid = 0.5 * (seg.a + seg.b);
        for (pa, pb) in [(seg.a, mid), (mid, seg.b)] {
            let r = gk15(f, pa, pb)?;
            n_evals += GK15_EVALS;
            live_value += r.value;
            live_err += r.err;
            heap.push(Segment {
                err: r.err,
                a: pa,
                b: pb,
                depth: seg.depth + 1,
                value: r.value,
            });
        }
    }

    let value = live_value + frozen_value;
    let err = live_err + frozen_err;
    let converged = converged && err <= abs_tol.max(rel_tol * value.norm());
    Ok(FiniteQuad {
        value,
        err,
        n_evals,
        converged,
    })
}

/// Amplitude-aware estimate of the discarded tail `∫_X^∞ |f|`.
fn tail_estimate<F>(f: &F, decay: &DecayClass, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    match decay {
        DecayClass::Custom(bound) => Ok(bound(x).max(0.0)),
        DecayClass::ExponentialRate(a) => {
            let m = eval_checked(f, x)?.norm().max(eval_checked(f, 0.97 * x)?.norm() * (-0.03 * a * x).exp());
            Ok(m / a)
        }
        DecayClass::PolynomialRate(p) => {
            let m = eval_checked(f, x)?.norm().max(eval_checked(f, 0.97 * x)?.norm() * 0.97f64.powf(*p));
            Ok(m * x / (p - 1.0))
        }
        DecayClass::BoundedOscillatory => Err(Error::NonIntegrableDecay),
    }
}

/// Absolutely convergent integral of `f` over (0, ∞).
///
/// The truncation point follows from `decay` and the configured budget; if
/// the sampled tail estimate refuses to drop below tolerance the domain is
/// extended twice before reporting a non-converged value.
pub fn integrate_semi_infinite<F>(f: F, decay: &DecayClass, cfg: &QuadCfg) -> Result<IntegralValue>
where
    F: Fn(f64) -> Result<Complex64>,
{
    cfg.validate()?;
    let budget = (0.25 * cfg.abs_tol).max(1e-300);
    let mut x_max = (truncation_point(decay, budget)? * cfg.truncation_safety).max(1.0);
    let mut n_evals = 0u64;
    for attempt in 0..3 {
        let q = segmented_finite(&f, 0.0, x_max, 0.5 * cfg.abs_tol, 0.5 * cfg.rel_tol, cfg.max_depth)?;
        n_evals += q.n_evals;
        let tail = tail_estimate(&f, decay, x_max)?;
        n_evals += 2;
        let out = IntegralValue {
            value: q.value,
            err_est: q.err + tail,
            n_evals,
            converged: false,
        };
        let tol = out.tolerance(cfg);
        if tail <= 0.5 * tol || attempt == 2 {
            return Ok(IntegralValue {
                converged: q.converged && out.err_est <= tol,
                ..out
            });
        }
        x_max *= 4.0;
    }
    unreachable!("loop always returns on its final attempt")
}

/// Quadrature over `[a, b]` in geometrically growing segments. Slowly
/// decaying integrands push the truncation point out by many orders of
/// magnitude, and a single panel across such a span samples none of the
/// mass near its left edge.
fn segmented_finite<F>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<FiniteQuad>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let span = b - a;
    let n_segments = if span <= 1.0 {
        1
    } else {
        2 + (span.ln() / 4f64.ln()).ceil() as usize
    };
    let seg_abs = abs_tol / n_segments as f64;
    let mut total = FiniteQuad {
        value: Complex64::default(),
        err: 0.0,
        n_evals: 0,
        converged: true,
    };
    let mut lo = a;
    let mut hi = a + 1f64.min(span);
    loop {
        let q = adaptive_finite(f, lo, hi, seg_abs, rel_tol, max_depth, 1)?;
        total.value += q.value;
        total.err += q.err;
        total.n_evals += q.n_evals;
        total.converged &= q.converged;
        if hi >= b {
            return Ok(total);
        }
        lo = hi;
        hi = (a + 4.0 * (lo - a)).min(b);
    }
}

/// Euler transformation of a sign-alternating series, following the classic
/// workspace formulation; terms are pushed one at a time and the running
/// `sum` converges far faster than the raw partial sums.
struct EulerSum {
    wksp: Vec<Complex64>,
    sum: Complex64,
    cap: usize,
}

impl EulerSum {
    fn new(levels: u32) -> Self {
        EulerSum {
            wksp: Vec::new(),
            sum: Complex64::default(),
            cap: levels.max(1) as usize,
        }
    }

    fn push(&mut self, term: Complex64) {
        if self.wksp.is_empty() {
            self.wksp.push(term);
            self.sum = term * 0.5;
            return;
        }
        let n = self.wksp.len();
        let mut tmp = self.wksp[0];
        self.wksp[0] = term;
        for j in 1..n {
            let dum = self.wksp[j];
            self.wksp[j] = (self.wksp[j - 1] + tmp) * 0.5;
            tmp = dum;
        }
        let next = (self.wksp[n - 1] + tmp) * 0.5;
        if n < self.cap && next.norm() <= self.wksp[n - 1].norm() {
            self.wksp.push(next);
            self.sum += next * 0.5;
        } else {
            self.sum += next;
        }
    }

    fn sum(&self) -> Complex64 {
        self.sum
    }
}

const MAX_HALF_PERIODS: usize = 4000;
const PLAIN_CHUNK_LIMIT: usize = 64;

/// `∫_a^∞ f(x) cos(ω x) dx` by half-period panelling; shared by the public
/// entry point (a = 0) and tail corrections that start mid-axis.
pub(crate) fn oscillatory_cos_from<F>(
    f: &F,
    omega: f64,
    a0: f64,
    decay: &DecayClass,
    cfg: &QuadCfg,
) -> Result<IntegralValue>
where
    F: Fn(f64) -> Result<Complex64>,
{
    cfg.validate()?;
    if !omega.is_finite() || omega < 0.0 {
        return Err(Error::Domain {
            what: "cosine frequency",
            x: omega,
        });
    }
    let g = move |x: f64| -> Result<Complex64> { Ok(f(x)? * (omega * x).cos()) };

    // A frequency at machine scale cannot complete a half period inside any
    // realistic truncated domain; treat the cosine as inert.
    if omega <= f64::EPSILON {
        let shifted = move |t: f64| g(t + a0);
        let out = integrate_semi_infinite(shifted, decay, cfg)?;
        return Ok(out);
    }

    let half = std::f64::consts::PI / omega;
    let budget = (0.25 * cfg.abs_tol).max(1e-300);
    // Where the envelope alone pushes the remainder below budget. Kept free
    // of any period forcing: at low frequency the decay can die long before
    // the first cosine zero, and the integral is then effectively
    // non-oscillatory.
    let trunc = match truncation_point(decay, budget) {
        Ok(x) => Some((x * cfg.truncation_safety).max(a0)),
        Err(Error::NonIntegrableDecay) => None,
        Err(e) => return Err(e),
    };

    // First zero of cos(ωx) beyond a0.
    let mut k0 = ((a0 / half) - 0.5).ceil();
    if k0 < 0.0 {
        k0 = 0.0;
    }
    let mut z = (k0 + 0.5) * half;
    if z <= a0 {
        z += half;
    }

    let presplit = (cfg.osc_panels_per_period as usize).div_ceil(2);
    let chunk_depth = cfg.max_depth;

    // Fast path: decay kills the integrand before the oscillation matters.
    if let Some(x_max) = trunc {
        if x_max <= z {
            let q = segmented_finite(&g, a0, x_max, 0.25 * cfg.abs_tol, 0.25 * cfg.rel_tol, chunk_depth)?;
            let tail = tail_estimate(f, decay, x_max)?;
            let out = IntegralValue {
                value: q.value,
                err_est: q.err + tail,
                n_evals: q.n_evals + 2,
                converged: false,
            };
            let tol = out.tolerance(cfg);
            return Ok(IntegralValue {
                converged: q.converged && out.err_est <= tol,
                ..out
            });
        }
        let x_max = x_max.max(a0 + half);
        let n_chunks = ((x_max - z) / half).ceil() as usize + 1;
        if n_chunks <= PLAIN_CHUNK_LIMIT {
            // Few enough panels to sum directly without acceleration.
            let chunk_tol = cfg.abs_tol / (2.0 * (n_chunks as f64 + 1.0));
            let mut value = Complex64::default();
            let mut err = 0.0;
            let mut n_evals = 0u64;
            let mut lo = a0;
            let mut converged = true;
            while lo < x_max {
                let hi = if lo == a0 { z } else { (lo + half).min(x_max) };
                let q = if lo == a0 {
                    segmented_finite(&g, lo, hi, chunk_tol, 0.1 * cfg.rel_tol, chunk_depth)?
                } else {
                    adaptive_finite(&g, lo, hi, chunk_tol, 0.1 * cfg.rel_tol, chunk_depth, presplit)?
                };
                value += q.value;
                err += q.err;
                n_evals += q.n_evals;
                converged &= q.converged;
                lo = hi;
            }
            let tail = tail_estimate(f, decay, x_max)?;
            let out = IntegralValue {
                value,
                err_est: err + tail,
                n_evals: n_evals + 2,
                converged: false,
            };
            let tol = out.tolerance(cfg);
            return Ok(IntegralValue {
                converged: converged && out.err_est <= tol,
                ..out
            });
        }
    }

    // Alternating half-period series with Euler acceleration.
    let chunk_abs = 0.02 * cfg.abs_tol;
    let chunk_rel = 0.02 * cfg.rel_tol;
    let head = segmented_finite(&g, a0, z, chunk_abs, chunk_rel, chunk_depth)?;
    let mut n_evals = head.n_evals;
    let mut chunk_err = head.err;
    let mut accel = EulerSum::new(cfg.extrapolation_levels.max(2));
    let mut estimate = head.value;
    let mut inc_prev = f64::INFINITY;
    let mut inc_last = f64::INFINITY;
    let mut min_increment = f64::INFINITY;
    let mut last_term_norm = f64::INFINITY;

    for k in 0..MAX_HALF_PERIODS {
        let lo = z + half * k as f64;
        let hi = lo + half;
        let term = adaptive_finite(&g, lo, hi, chunk_abs, chunk_rel, chunk_depth, presplit)?;
        n_evals += term.n_evals;
        chunk_err += term.err;
        accel.push(term.value);
        let new_estimate = head.value + accel.sum();
        inc_prev = inc_last;
        inc_last = (new_estimate - estimate).norm();
        estimate = new_estimate;
        min_increment = min_increment.min(inc_last);
        last_term_norm = term.value.norm();

        let tol = cfg.abs_tol.max(cfg.rel_tol * estimate.norm());
        if k >= 3 && inc_last <= 0.2 * tol && inc_prev <= 0.2 * tol {
            return Ok(IntegralValue {
                value: estimate,
                err_est: chunk_err + inc_last + inc_prev,
                n_evals,
                converged: true,
            });
        }
        // Decaying integrand: once the terms themselves sink below
        // tolerance the remainder of the alternating series is bounded by
        // the first omitted term.
        if trunc.is_some() && k >= 2 && last_term_norm <= 0.1 * tol && inc_last <= 0.5 * tol {
            return Ok(IntegralValue {
                value: estimate,
                err_est: chunk_err + inc_last + last_term_norm,
                n_evals,
                converged: true,
            });
        }
        if k >= 64 && inc_last > 1e6 * min_increment.max(f64::MIN_POSITIVE) && inc_last > tol {
            return Err(Error::AccelerationDiverged { terms: k + 1 });
        }
    }
    let err_est = chunk_err + inc_last + inc_prev + last_term_norm;
    Ok(IntegralValue {
        value: estimate,
        err_est,
        n_evals,
        converged: false,
    })
}

/// Oscillatory integral `∫_0^∞ f(x) cos(ω x) dx`.
///
/// With an absolutely integrable `decay` this behaves like
/// [`integrate_semi_infinite`] applied to `f(x) cos(ωx)`. With
/// [`DecayClass::BoundedOscillatory`] convergence comes entirely from the
/// alternating half-period sums, which also yields the natural regularized
/// value for bounded non-decaying envelopes.
pub fn integrate_oscillatory_cos<F>(f: F, omega: f64, decay: &DecayClass, cfg: &QuadCfg) -> Result<IntegralValue>
where
    F: Fn(f64) -> Result<Complex64>,
{
    oscillatory_cos_from(&f, omega, 0.0, decay, cfg)
}

#[cfg(test)]
mod tests {
    #![allow(clippy::excessive_precision)]

    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn cfg() -> QuadCfg {
        QuadCfg::default()
    }

    #[test]
    fn unit_exponential_integrates_to_one() {
        let d = DecayClass::exponential(1.0).unwrap();
        let r = integrate_semi_infinite(|x| Ok(re((-x).exp())), &d, &cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value.re - 1.0).abs() < 1e-12, "got {}", r.value.re);
        assert!(r.value.im.abs() < 1e-14);
        assert!((r.value.re - 1.0).abs() <= 3.0 * r.err_est);
    }

    #[test]
    fn zero_integrand_is_exact() {
        let d = DecayClass::exponential(1.0).unwrap();
        let r = integrate_semi_infinite(|_| Ok(re(0.0)), &d, &cfg()).unwrap();
        assert_eq!(r.value, Complex64::default());
        assert!(r.converged);
    }

    #[test]
    fn damped_cosine_closed_form() {
        // ∫ e^{-x} cos x dx = 1/2
        let d = DecayClass::exponential(1.0).unwrap();
        let r = integrate_semi_infinite(|x| Ok(re((-x).exp() * x.cos())), &d, &cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value.re - 0.5).abs() < 1e-11);
    }

    #[test]
    fn polynomial_tail_reaches_tolerance() {
        // ∫ dx/(1+x)^3 = 1/2
        let d = DecayClass::polynomial(3.0).unwrap();
        let r = integrate_semi_infinite(|x| Ok(re((1.0 + x).powi(-3))), &d, &cfg()).unwrap();
        assert!((r.value.re - 0.5).abs() < 1e-8, "got {}", r.value.re);
        assert!((r.value.re - 0.5).abs() <= 3.0 * r.err_est);
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let d = DecayClass::exponential(1.0).unwrap();
        let r = integrate_semi_infinite(|x| Ok(re(if x > 0.5 { f64::NAN } else { 1.0 })), &d, &cfg());
        match r {
            Err(Error::NonFiniteSample { x }) => assert!(x > 0.5),
            other => panic!("expected NonFiniteSample, got {other:?}"),
        }
    }

    #[test]
    fn bounded_envelope_refused_without_oscillation() {
        let r = integrate_semi_infinite(|x| Ok(re(1.0 / (1.0 + x * x).sqrt())), &DecayClass::BoundedOscillatory, &cfg());
        assert!(matches!(r, Err(Error::NonIntegrableDecay)));
    }

    #[test]
    fn truncation_point_exponential_convention() {
        let d = DecayClass::exponential(1.0).unwrap();
        let x = truncation_point(&d, (-10.0f64).exp()).unwrap();
        assert!((x - 10.0).abs() < 1e-12);
        let d2 = DecayClass::exponential(2.0).unwrap();
        let x2 = truncation_point(&d2, (-10.0f64).exp()).unwrap();
        assert!((x2 - 5.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_point_polynomial_convention() {
        let d = DecayClass::polynomial(2.0).unwrap();
        let x = truncation_point(&d, 1e-3).unwrap();
        assert!((x - 1000.0).abs() < 1e-9 * 1000.0);
    }

    #[test]
    fn truncation_point_rejects_bounded() {
        assert!(matches!(
            truncation_point(&DecayClass::BoundedOscillatory, 1e-6),
            Err(Error::NonIntegrableDecay)
        ));
    }

    #[test]
    fn decay_constructors_validate() {
        assert!(DecayClass::exponential(0.0).is_err());
        assert!(DecayClass::exponential(-1.0).is_err());
        assert!(DecayClass::polynomial(1.0).is_err());
        assert!(DecayClass::polynomial(0.5).is_err());
        assert!(DecayClass::exponential(3.0).is_ok());
        assert!(DecayClass::polynomial(1.5).is_ok());
    }

    #[test]
    fn euler_sum_accelerates_log_two() {
        // 1 - 1/2 + 1/3 - ... = ln 2
        let mut e = EulerSum::new(12);
        for k in 1..40 {
            let t = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            e.push(re(t));
        }
        assert!((e.sum().re - std::f64::consts::LN_2).abs() < 1e-12, "got {}", e.sum().re);
    }

    #[test]
    fn oscillatory_matches_damped_cosine() {
        // ∫ e^{-x} cos(2x) dx = 1/5
        let d = DecayClass::exponential(1.0).unwrap();
        let r = integrate_oscillatory_cos(|x| Ok(re((-x).exp())), 2.0, &d, &cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value.re - 0.2).abs() < 1e-10, "got {}", r.value.re);
    }

    #[test]
    fn oscillatory_high_frequency() {
        // ∫ e^{-x} cos(40x) dx = 1/1601
        let d = DecayClass::exponential(1.0).unwrap();
        let r = integrate_oscillatory_cos(|x| Ok(re((-x).exp())), 40.0, &d, &cfg()).unwrap();
        let truth = 1.0 / 1601.0;
        assert!((r.value.re - truth).abs() < 1e-10, "got {} want {}", r.value.re, truth);
    }

    #[test]
    fn oscillatory_bounded_envelope_bessel_value() {
        // ∫ cos(x)/sqrt(1+x^2) dx = K0(1); reference via 40-digit evaluation.
        let d = DecayClass::BoundedOscillatory;
        let r = integrate_oscillatory_cos(|x| Ok(re(1.0 / (1.0 + x * x).sqrt())), 1.0, &d, &cfg()).unwrap();
        let truth = 0.421_024_438_240_708_333_3;
        assert!(r.converged);
        assert!((r.value.re - truth).abs() < 1e-9, "got {} want {}", r.value.re, truth);
        assert!((r.value.re - truth).abs() <= 3.0 * r.err_est);
    }

    #[test]
    fn oscillatory_regularizes_pure_cosine() {
        // The alternating sums assign ∫ cos(xω) dω the value 0 for x > 0.
        let d = DecayClass::BoundedOscillatory;
        let r = integrate_oscillatory_cos(|_| Ok(re(1.0)), 1.7, &d, &cfg()).unwrap();
        assert!(r.value.norm() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn oscillatory_degenerates_at_tiny_frequency() {
        let d = DecayClass::exponential(1.0).unwrap();
        let r = integrate_oscillatory_cos(|x| Ok(re((-x).exp())), 1e-18, &d, &cfg()).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn oscillatory_low_frequency_above_machine_scale() {
        // Frequencies small enough that the decay dies long before the first
        // cosine zero, yet too large for the inert-cosine shortcut. The
        // envelope must still be resolved instead of panelled per period.
        let d = DecayClass::exponential(1.0).unwrap();
        for omega in [1e-11, 3e-8, 2e-4] {
            let want = 1.0 / (1.0 + omega * omega);
            let r = integrate_oscillatory_cos(|x| Ok(re((-x).exp())), omega, &d, &cfg()).unwrap();
            assert!((r.value.re - want).abs() < 1e-9, "omega {omega}: got {} want {want}", r.value.re);
            assert!((r.value.re - want).abs() <= 3.0 * r.err_est);
        }
    }

    #[test]
    fn oscillatory_bounded_refused_at_zero_frequency() {
        let r = integrate_oscillatory_cos(|x| Ok(re(1.0 / (1.0 + x))), 0.0, &DecayClass::BoundedOscillatory, &cfg());
        assert!(matches!(r, Err(Error::NonIntegrableDecay)));
    }

    #[test]
    fn oscillatory_slow_polynomial_tail() {
        // ∫ cos(2x)/(1+x^2) dx = (π/2) e^{-2}
        let d = DecayClass::polynomial(2.0).unwrap();
        let r = integrate_oscillatory_cos(|x| Ok(re(1.0 / (1.0 + x * x))), 2.0, &d, &cfg()).unwrap();
        let truth = std::f64::consts::FRAC_PI_2 * (-2.0f64).exp();
        assert!((r.value.re - truth).abs() < 1e-9, "got {} want {}", r.value.re, truth);
    }

    #[test]
    fn config_validation_catches_bad_fields() {
        let mut c = cfg();
        c.max_depth = 2;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.abs_tol = 0.0;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.truncation_safety = 0.5;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.osc_panels_per_period = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn error_honesty_on_damped_cosine_family() {
        // |value - truth| ≤ 3 err_est must hold for at least 95% of draws.
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        let mut ok = 0;
        let n = 60;
        for _ in 0..n {
            let a: f64 = rng.gen_range(0.3..3.0);
            let b: f64 = rng.gen_range(0.0..4.0);
            let d = DecayClass::exponential(a).unwrap();
            let r = integrate_semi_infinite(move |x| Ok(re((-a * x).exp() * (b * x).cos())), &d, &cfg()).unwrap();
            let truth = a / (a * a + b * b);
            if (r.value.re - truth).abs() <= 3.0 * r.err_est.max(f64::MIN_POSITIVE) {
                ok += 1;
            }
        }
        assert!(ok * 100 >= n * 95, "only {ok}/{n} within 3x error estimate");
    }
}
