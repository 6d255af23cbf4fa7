//! Named test functions with their analytic metadata.
//!
//! A [`Func`] bundles a pointwise evaluator on (0, ∞) with everything the
//! rest of the crate wants to know a priori: tail decay, membership in L1
//! and L2, boundedness of the Laplace image, a supremum when one exists, and
//! closed forms of the cosine and Laplace transforms where classical tables
//! supply them (Erdélyi, Tables of Integral Transforms, ch. 1 and 4).
//! Operators consult this metadata for hypothesis checks instead of trying
//! to infer integrability numerically.

use std::sync::Arc;

use num_complex::Complex64;

use crate::bessel::bessel_k0;
use crate::error::{Error, Result};
use crate::numerics::{integrate_semi_infinite, DecayClass, IntegralValue, QuadCfg};

pub type EvalFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Envelope of a spectral factor: `|S(y)| ≲ y^{-poly_order} e^{-exp_rate y}`
/// for large `y`. Orders of 1 or below are legal here (single Laplace images
/// decay like 1/y); conversion to an integrable [`DecayClass`] happens only
/// when a product is actually integrated.
#[derive(Clone, Copy, Debug)]
pub struct SpectralDecay {
    pub poly_order: f64,
    pub exp_rate: f64,
}

impl SpectralDecay {
    pub fn bounded() -> Self {
        SpectralDecay {
            poly_order: 0.0,
            exp_rate: 0.0,
        }
    }

    pub fn algebraic(order: f64) -> Self {
        SpectralDecay {
            poly_order: order,
            exp_rate: 0.0,
        }
    }

    /// Envelope of a pointwise product of factors.
    pub fn product(&self, other: &SpectralDecay) -> SpectralDecay {
        SpectralDecay {
            poly_order: self.poly_order + other.poly_order,
            exp_rate: self.exp_rate + other.exp_rate,
        }
    }

    /// Integrable decay class for quadrature in the spectral variable.
    /// Envelopes that decay too slowly fall back to the oscillatory
    /// integrator's alternating summation.
    pub fn to_decay_class(&self) -> DecayClass {
        if self.exp_rate > 0.0 {
            DecayClass::ExponentialRate(self.exp_rate)
        } else if self.poly_order > 1.0 + 1e-9 {
            DecayClass::PolynomialRate(self.poly_order)
        } else {
            DecayClass::BoundedOscillatory
        }
    }
}

/// A function of the spectral variable `y` with a known envelope.
#[derive(Clone)]
pub struct Spectral {
    pub label: String,
    eval: EvalFn,
    pub decay: SpectralDecay,
}

impl Spectral {
    pub fn new(label: impl Into<String>, eval: EvalFn, decay: SpectralDecay) -> Self {
        Spectral {
            label: label.into(),
            eval,
            decay,
        }
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        (self.eval)(y)
    }

    pub fn eval_fn(&self) -> EvalFn {
        self.eval.clone()
    }

    pub fn scale(&self, c: Complex64) -> Spectral {
        let f = self.eval.clone();
        Spectral {
            label: format!("scale({c})*{}", self.label),
            eval: Arc::new(move |y| f(y) * c),
            decay: self.decay,
        }
    }

    /// Complex conjugate, valid pointwise for real arguments.
    pub fn conjugate(&self) -> Spectral {
        let f = self.eval.clone();
        Spectral {
            label: format!("conj[{}]", self.label),
            eval: Arc::new(move |y| f(y).conj()),
            decay: self.decay,
        }
    }

    /// Pointwise sum. The envelope keeps the slower component-wise tail,
    /// which bounds both terms.
    pub fn sum(&self, other: &Spectral) -> Spectral {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Spectral {
            label: format!("{} + {}", self.label, other.label),
            eval: Arc::new(move |y| a(y) + b(y)),
            decay: SpectralDecay {
                poly_order: self.decay.poly_order.min(other.decay.poly_order),
                exp_rate: self.decay.exp_rate.min(other.decay.exp_rate),
            },
        }
    }
}

/// A function on (0, ∞) with attached analytic knowledge.
#[derive(Clone)]
pub struct Func {
    pub label: String,
    eval: EvalFn,
    pub decay: DecayClass,
    pub in_l1: bool,
    pub in_l2: bool,
    /// Whether the Laplace transform is bounded on the whole half line.
    pub in_a: bool,
    /// Supremum of `|f|` when the function is bounded.
    pub sup_bound: Option<f64>,
    fc: Option<Spectral>,
    lap: Option<Spectral>,
}

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

impl Func {
    pub fn eval(&self, x: f64) -> Complex64 {
        (self.eval)(x)
    }

    pub fn eval_fn(&self) -> EvalFn {
        self.eval.clone()
    }

    /// Closed-form cosine transform, when a table provides one.
    pub fn fc_closed(&self) -> Option<&Spectral> {
        self.fc.as_ref()
    }

    /// Closed-form Laplace transform, when a table provides one.
    pub fn laplace_closed(&self) -> Option<&Spectral> {
        self.lap.as_ref()
    }

    /// Signed moment `∫ t^k f(t) dt` by quadrature.
    pub fn moment(&self, k: u32, cfg: &QuadCfg) -> Result<IntegralValue> {
        let d = self.decay.with_power_weight(k as f64)?;
        let f = self.eval.clone();
        integrate_semi_infinite(move |t| Ok(f(t) * t.powi(k as i32)), &d, cfg)
    }

    /// Multiply by a complex constant. Closed forms, supremum and label
    /// follow; membership flags are preserved.
    pub fn scale(&self, c: Complex64) -> Func {
        let f = self.eval.clone();
        let label = if c.im == 0.0 {
            format!("{}:scale:{}", self.label, c.re)
        } else {
            format!("scale({c})*{}", self.label)
        };
        Func {
            label,
            eval: Arc::new(move |x| f(x) * c),
            decay: self.decay.clone(),
            in_l1: self.in_l1,
            in_l2: self.in_l2,
            in_a: self.in_a,
            sup_bound: self.sup_bound.map(|s| s * c.norm()),
            fc: self.fc.as_ref().map(|s| s.scale(c)),
            lap: self.lap.as_ref().map(|s| s.scale(c)),
        }
    }

    /// A caller-supplied function with explicitly declared metadata and no
    /// closed transforms; operators will fall back to quadrature for it.
    /// The declarations are trusted, so a wrong flag here turns into wrong
    /// hypothesis checks downstream.
    #[allow(clippy::too_many_arguments)]
    pub fn custom(
        label: impl Into<String>,
        eval: EvalFn,
        decay: DecayClass,
        in_l1: bool,
        in_l2: bool,
        in_a: bool,
        sup_bound: Option<f64>,
    ) -> Func {
        Func {
            label: label.into(),
            eval,
            decay,
            in_l1,
            in_l2,
            in_a,
            sup_bound,
            fc: None,
            lap: None,
        }
    }

    /// Pointwise sum. Memberships survive only when both terms hold them,
    /// and a closed transform survives only when both terms carry one.
    pub fn sum(&self, other: &Func) -> Func {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let joined = |x: Option<&Spectral>, y: Option<&Spectral>| match (x, y) {
            (Some(x), Some(y)) => Some(x.sum(y)),
            _ => None,
        };
        Func {
            label: format!("{} + {}", self.label, other.label),
            eval: Arc::new(move |x| a(x) + b(x)),
            decay: self.decay.slower_of(&other.decay),
            in_l1: self.in_l1 && other.in_l1,
            in_l2: self.in_l2 && other.in_l2,
            in_a: self.in_a && other.in_a,
            sup_bound: match (self.sup_bound, other.sup_bound) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            },
            fc: joined(self.fc.as_ref(), other.fc.as_ref()),
            lap: joined(self.lap.as_ref(), other.lap.as_ref()),
        }
    }

    /// Complex conjugate. Both transforms commute with conjugation on the
    /// real axis, so closed forms carry over conjugated.
    pub fn conjugate(&self) -> Func {
        let f = self.eval.clone();
        Func {
            label: format!("conj[{}]", self.label),
            eval: Arc::new(move |x| f(x).conj()),
            decay: self.decay.clone(),
            in_l1: self.in_l1,
            in_l2: self.in_l2,
            in_a: self.in_a,
            sup_bound: self.sup_bound,
            fc: self.fc.as_ref().map(Spectral::conjugate),
            lap: self.lap.as_ref().map(Spectral::conjugate),
        }
    }

    /// `e^{-a t}`.
    pub fn exp(a: f64) -> Result<Func> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidDecay {
                value: a,
                reason: "exponential evaluator needs a positive rate",
            });
        }
        Ok(Func {
            label: format!("exp:{a}"),
            eval: Arc::new(move |x| Complex64::new((-a * x).exp(), 0.0)),
            decay: DecayClass::ExponentialRate(a),
            in_l1: true,
            in_l2: true,
            in_a: true,
            sup_bound: Some(1.0),
            fc: Some(Spectral::new(
                format!("Fc[exp:{a}]"),
                Arc::new(move |y| Complex64::new(SQRT_2_OVER_PI * a / (a * a + y * y), 0.0)),
                SpectralDecay::algebraic(2.0),
            )),
            lap: Some(Spectral::new(
                format!("L[exp:{a}]"),
                Arc::new(move |y| Complex64::new(1.0 / (a + y), 0.0)),
                SpectralDecay::algebraic(1.0),
            )),
        })
    }

    /// `t^n e^{-a t}`.
    pub fn poly_exp(n: u32, a: f64) -> Result<Func> {
        if n == 0 {
            return Func::exp(a);
        }
        if n > 12 {
            return Err(Error::UnknownLabel(format!(
                "poly_exp:{n}:{a} (monomial degree capped at 12)"
            )));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidDecay {
                value: a,
                reason: "exponential evaluator needs a positive rate",
            });
        }
        let fact: f64 = (1..=n).map(f64::from).product();
        let nf = n as f64;
        Ok(Func {
            label: format!("poly_exp:{n}:{a}"),
            eval: Arc::new(move |x| Complex64::new(x.powi(n as i32) * (-a * x).exp(), 0.0)),
            decay: DecayClass::ExponentialRate(a),
            in_l1: true,
            in_l2: true,
            in_a: true,
            sup_bound: Some((nf / a).powf(nf) * (-nf).exp()),
            fc: Some(Spectral::new(
                format!("Fc[poly_exp:{n}:{a}]"),
                Arc::new(move |y| {
                    let z = Complex64::new(a, -y).powu(n + 1);
                    Complex64::new(SQRT_2_OVER_PI * (Complex64::new(fact, 0.0) / z).re, 0.0)
                }),
                SpectralDecay::algebraic(nf + 1.0),
            )),
            lap: Some(Spectral::new(
                format!("L[poly_exp:{n}:{a}]"),
                Arc::new(move |y| Complex64::new(fact / (y + a).powi(n as i32 + 1), 0.0)),
                SpectralDecay::algebraic(nf + 1.0),
            )),
        })
    }

    /// `e^{i t}` (sign +) or `e^{-i t}` (sign −). Bounded, not integrable;
    /// the Laplace image `1/(y ∓ i)` stays below 1 in modulus.
    pub fn cexp(positive: bool) -> Func {
        let s = if positive { 1.0 } else { -1.0 };
        let tag = if positive { "+" } else { "-" };
        Func {
            label: format!("cexp:{tag}"),
            eval: Arc::new(move |x| Complex64::new(x.cos(), s * x.sin())),
            decay: DecayClass::BoundedOscillatory,
            in_l1: false,
            in_l2: false,
            in_a: true,
            sup_bound: Some(1.0),
            fc: None,
            lap: Some(Spectral::new(
                format!("L[cexp:{tag}]"),
                Arc::new(move |y| Complex64::new(1.0, 0.0) / Complex64::new(y, -s)),
                SpectralDecay::algebraic(1.0),
            )),
        }
    }

    /// `cos t`.
    pub fn cos_t() -> Func {
        Func {
            label: "cos".into(),
            eval: Arc::new(|x| Complex64::new(x.cos(), 0.0)),
            decay: DecayClass::BoundedOscillatory,
            in_l1: false,
            in_l2: false,
            in_a: true,
            sup_bound: Some(1.0),
            fc: None,
            lap: Some(Spectral::new(
                "L[cos]",
                Arc::new(|y| Complex64::new(y / (1.0 + y * y), 0.0)),
                SpectralDecay::algebraic(1.0),
            )),
        }
    }

    /// `sin t`.
    pub fn sin_t() -> Func {
        Func {
            label: "sin".into(),
            eval: Arc::new(|x| Complex64::new(x.sin(), 0.0)),
            decay: DecayClass::BoundedOscillatory,
            in_l1: false,
            in_l2: false,
            in_a: true,
            sup_bound: Some(1.0),
            fc: None,
            lap: Some(Spectral::new(
                "L[sin]",
                Arc::new(|y| Complex64::new(1.0 / (1.0 + y * y), 0.0)),
                SpectralDecay::algebraic(2.0),
            )),
        }
    }

    /// `√(2/π) K0(t)`: integrable, square integrable, logarithmic spike at
    /// the origin (so no supremum), cosine image `1/√(1+y²)`.
    pub fn k0_scaled() -> Func {
        Func {
            label: "k0_scaled".into(),
            eval: Arc::new(|x| {
                if !x.is_finite() {
                    return Complex64::default();
                }
                let v = bessel_k0(x.max(1e-300)).unwrap_or(0.0);
                Complex64::new(SQRT_2_OVER_PI * v, 0.0)
            }),
            decay: DecayClass::ExponentialRate(1.0),
            in_l1: true,
            in_l2: true,
            in_a: true,
            sup_bound: None,
            fc: Some(Spectral::new(
                "Fc[k0_scaled]",
                Arc::new(|y| Complex64::new(1.0 / (1.0 + y * y).sqrt(), 0.0)),
                SpectralDecay::algebraic(1.0),
            )),
            lap: None,
        }
    }

    /// The constant 1. Bounded but with no integrable tail and an unbounded
    /// Laplace image.
    pub fn one() -> Func {
        Func {
            label: "one".into(),
            eval: Arc::new(|_| Complex64::new(1.0, 0.0)),
            decay: DecayClass::BoundedOscillatory,
            in_l1: false,
            in_l2: false,
            in_a: false,
            sup_bound: Some(1.0),
            fc: None,
            lap: None,
        }
    }

    /// Parse a catalogue label: `exp:<a>`, `poly_exp:<n>:<a>`, `cexp:+`,
    /// `cexp:-`, `cos`, `sin`, `k0_scaled`, `one`, with an optional
    /// `:scale:<c>` suffix.
    pub fn parse(label: &str) -> Result<Func> {
        let bad = || Error::UnknownLabel(label.to_string());
        let toks: Vec<&str> = label.split(':').collect();
        let (base, scale) = if toks.len() >= 3 && toks[toks.len() - 2] == "scale" {
            let c: f64 = toks[toks.len() - 1].parse().map_err(|_| bad())?;
            if !c.is_finite() {
                return Err(bad());
            }
            (&toks[..toks.len() - 2], Some(c))
        } else {
            (&toks[..], None)
        };
        let f = match *base {
            ["exp", a] => Func::exp(a.parse().map_err(|_| bad())?)?,
            ["poly_exp", n, a] => {
                Func::poly_exp(n.parse().map_err(|_| bad())?, a.parse().map_err(|_| bad())?)?
            }
            ["cexp", "+"] => Func::cexp(true),
            ["cexp", "-"] => Func::cexp(false),
            ["cos"] => Func::cos_t(),
            ["sin"] => Func::sin_t(),
            ["k0_scaled"] => Func::k0_scaled(),
            ["one"] => Func::one(),
            _ => return Err(bad()),
        };
        Ok(match scale {
            Some(c) => f.scale(Complex64::new(c, 0.0)),
            None => f,
        })
    }
}
