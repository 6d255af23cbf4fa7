//! Fourier-cosine and Laplace transforms by quadrature, plus evaluation
//! grids and cubic-spline sampled functions.
//!
//! The cosine transform is normalized as `√(2/π) ∫ f(x) cos(xy) dx`, which
//! makes it its own inverse on the half line. The Laplace transform is the
//! plain `∫ f(x) e^{-xy} dx`. Both return an [`IntegralValue`] so callers
//! can see the error accounting; closed forms, when a [`Func`] carries them,
//! are deliberately not consulted here.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::{Func, Spectral};
use crate::numerics::{
    adaptive_finite, integrate_oscillatory_cos, integrate_semi_infinite, oscillatory_cos_from,
    DecayClass, IntegralValue, QuadCfg,
};

pub const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// `√(2/π) ∫_0^∞ f(x) cos(xy) dx`.
pub fn fourier_cosine(f: &Func, y: f64, cfg: &QuadCfg) -> Result<IntegralValue> {
    if !(y.is_finite() && y >= 0.0) {
        return Err(Error::Domain {
            what: "cosine transform frequency",
            x: y,
        });
    }
    let g = f.eval_fn();
    let r = integrate_oscillatory_cos(move |x| Ok(g(x)), y, &f.decay, cfg)?;
    Ok(r.scaled(SQRT_2_OVER_PI))
}

/// `∫_0^∞ f(x) e^{-xy} dx`.
pub fn laplace(f: &Func, y: f64, cfg: &QuadCfg) -> Result<IntegralValue> {
    if !(y.is_finite() && y >= 0.0) {
        return Err(Error::Domain {
            what: "laplace transform argument",
            x: y,
        });
    }
    // The damping factor dominates whatever decay f brings, except at y = 0
    // where f is on its own.
    let decay = match (&f.decay, y) {
        (DecayClass::ExponentialRate(a), _) => DecayClass::ExponentialRate(a + y),
        (d, y) if y <= 0.0 => d.clone(),
        (_, y) => DecayClass::ExponentialRate(y),
    };
    let g = f.eval_fn();
    integrate_semi_infinite(move |x| Ok(g(x) * (-x * y).exp()), &decay, cfg)
}

/// `√(2/π) ∫_0^∞ S(y) cos(xy) dy` for a spectral-side function.
pub fn inverse_fourier_cosine(s: &Spectral, x: f64, cfg: &QuadCfg) -> Result<IntegralValue> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain {
            what: "inverse cosine transform point",
            x,
        });
    }
    let g = s.eval_fn();
    let d = s.decay.to_decay_class();
    let r = integrate_oscillatory_cos(move |y| Ok(g(y)), x, &d, cfg)?;
    Ok(r.scaled(SQRT_2_OVER_PI))
}

/// Strictly increasing evaluation grid.
#[derive(Clone, Debug)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    /// Geometric progression from `min` to `max` inclusive.
    pub fn geometric(min: f64, max: f64, n: usize) -> Result<Grid> {
        if !(min.is_finite() && max.is_finite() && min > 0.0 && max > min) {
            return Err(Error::InvalidGrid(format!(
                "geometric grid needs 0 < min < max, got [{min}, {max}]"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidGrid("geometric grid needs at least 2 points".into()));
        }
        let ratio = (max / min).powf(1.0 / (n - 1) as f64);
        let mut points = Vec::with_capacity(n);
        let mut x = min;
        for _ in 0..n - 1 {
            points.push(x);
            x *= ratio;
        }
        points.push(max);
        Ok(Grid { points })
    }

    /// Explicit points; must be finite, non-negative and strictly increasing.
    pub fn explicit(points: Vec<f64>) -> Result<Grid> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("empty grid".into()));
        }
        for w in points.windows(2) {
            // Negated so NaN entries fail the monotonicity check too.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(w[1] > w[0]) {
                return Err(Error::InvalidGrid(format!(
                    "grid must increase strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if points.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidGrid("grid points must be finite and non-negative".into()));
        }
        Ok(Grid { points })
    }

    /// Linear span followed by a geometric continuation; the workhorse for
    /// sampling functions that are smooth near the origin and algebraic in
    /// the tail.
    pub fn linear_then_geometric(
        step: f64,
        switch: f64,
        max: f64,
        per_decade: usize,
    ) -> Result<Grid> {
        if !(step > 0.0 && switch > step && max > switch) || per_decade < 2 {
            return Err(Error::InvalidGrid(format!(
                "need 0 < step < switch < max and per_decade >= 2, got {step}/{switch}/{max}/{per_decade}"
            )));
        }
        let mut points = Vec::new();
        let n_lin = (switch / step).round() as usize;
        for i in 0..=n_lin {
            points.push(step * i as f64);
        }
        let ratio = 10f64.powf(1.0 / per_decade as f64);
        let mut x = points.last().copied().unwrap_or(switch) * ratio;
        while x < max {
            points.push(x);
            x *= ratio;
        }
        points.push(max);
        Grid::explicit(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Real-valued samples on a grid, interpolated by a natural cubic spline,
/// with an attached `c/x²` tail model past the last knot.
#[derive(Clone, Debug)]
pub struct SampledFunc {
    xs: Vec<f64>,
    ys: Vec<f64>,
    y2: Vec<f64>,
    tail_c: f64,
}

impl SampledFunc {
    pub fn natural_cubic(grid: &Grid, ys: Vec<f64>, tail_c: f64) -> Result<SampledFunc> {
        Self::build(grid, ys, None, tail_c)
    }

    /// Cubic spline with a prescribed first derivative at the left knot.
    /// Even functions sampled from zero should pass `left_slope = 0`.
    pub fn clamped_left_cubic(
        grid: &Grid,
        ys: Vec<f64>,
        left_slope: f64,
        tail_c: f64,
    ) -> Result<SampledFunc> {
        if !left_slope.is_finite() {
            return Err(Error::InvalidGrid("left slope must be finite".into()));
        }
        Self::build(grid, ys, Some(left_slope), tail_c)
    }

    fn build(grid: &Grid, ys: Vec<f64>, left: Option<f64>, tail_c: f64) -> Result<SampledFunc> {
        let xs = grid.points().to_vec();
        let n = xs.len();
        if ys.len() != n {
            return Err(Error::InvalidGrid(format!(
                "{} samples for {} grid points",
                ys.len(),
                n
            )));
        }
        if n < 4 {
            return Err(Error::InvalidGrid("spline needs at least 4 points".into()));
        }
        if ys.iter().any(|v| !v.is_finite()) || !tail_c.is_finite() {
            return Err(Error::InvalidGrid("spline samples must be finite".into()));
        }
        let mut y2 = vec![0.0; n];
        let mut u = vec![0.0; n];
        if let Some(slope) = left {
            let h = xs[1] - xs[0];
            y2[0] = -0.5;
            u[0] = (3.0 / h) * ((ys[1] - ys[0]) / h - slope);
        }
        for i in 1..n - 1 {
            let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
            let p = sig * y2[i - 1] + 2.0;
            y2[i] = (sig - 1.0) / p;
            let d = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
                - (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            u[i] = (6.0 * d / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / p;
        }
        for k in (0..n - 1).rev() {
            y2[k] = y2[k] * y2[k + 1] + u[k];
        }
        Ok(SampledFunc { xs, ys, y2, tail_c })
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().expect("spline is never empty")
    }

    pub fn tail_coefficient(&self) -> f64 {
        self.tail_c
    }

    pub fn max_abs_sample(&self) -> f64 {
        self.ys.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Spline value inside the grid, `tail_c/x²` beyond it.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x >= self.xs[n - 1] {
            return if x > 0.0 { self.tail_c / (x * x) } else { self.ys[n - 1] };
        }
        let x = x.max(self.xs[0]);
        let hi = self.xs.partition_point(|&k| k <= x).min(n - 1).max(1);
        let lo = hi - 1;
        let h = self.xs[hi] - self.xs[lo];
        let a = (self.xs[hi] - x) / h;
        let b = (x - self.xs[lo]) / h;
        a * self.ys[lo]
            + b * self.ys[hi]
            + ((a * a * a - a) * self.y2[lo] + (b * b * b - b) * self.y2[hi]) * (h * h) / 6.0
    }
}

/// Cosine transform of a sampled function: oscillation-aware quadrature of
/// the spline over its grid plus the analytic `tail_c/x²` continuation.
pub fn fourier_cosine_of_sampled(s: &SampledFunc, y: f64, cfg: &QuadCfg) -> Result<IntegralValue> {
    if !(y.is_finite() && y >= 0.0) {
        return Err(Error::Domain {
            what: "cosine transform frequency",
            x: y,
        });
    }
    let x_max = s.x_max();
    // Enough initial panels that each sees at most about half a period.
    let periods = y * x_max / (2.0 * std::f64::consts::PI);
    let panels = ((periods * 2.0).ceil() as usize).clamp(8, 256);
    let body = adaptive_finite(
        &|x: f64| Ok(Complex64::new(s.eval(x) * (x * y).cos(), 0.0)),
        0.0,
        x_max,
        0.25 * cfg.abs_tol,
        0.25 * cfg.rel_tol,
        cfg.max_depth,
        panels,
    )?;
    let c = s.tail_c;
    let tail = if c == 0.0 {
        IntegralValue {
            value: Complex64::default(),
            err_est: 0.0,
            n_evals: 0,
            converged: true,
        }
    } else {
        oscillatory_cos_from(
            &|x: f64| Ok(Complex64::new(c / (x * x), 0.0)),
            y,
            x_max,
            &DecayClass::PolynomialRate(2.0),
            cfg,
        )?
    };
    let combined = IntegralValue {
        value: body.value,
        err_est: body.err,
        n_evals: body.n_evals,
        converged: body.converged,
    }
    .plus(tail);
    Ok(combined.scaled(SQRT_2_OVER_PI))
}
