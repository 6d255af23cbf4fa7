//! Closed spectral solvers for the equation classes carried by the triple
//! convolution: a Toeplitz-plus-Hankel integral equation, two
//! integro-differential forms, and a second-order differential form. Each
//! solver checks its solvability condition on an audit grid, forms the
//! spectral quotient, and returns the solution as an inverse cosine
//! transform. The reports reconstruct the equations from independently
//! sampled solutions.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::{Func, SpectralDecay};
use crate::inequalities::{lp_norm, lp_norm_of_samples};
use crate::numerics::{
    integrate_oscillatory_cos, integrate_semi_infinite, DecayClass, IntegralValue, QuadCfg,
};
use crate::polyconv::polyconv_direct;
use crate::report::{CheckRow, VerificationReport};
use crate::transforms::{
    fourier_cosine, fourier_cosine_of_sampled, laplace, Grid, SampledFunc, SQRT_2_OVER_PI,
};

type SpectrumFn = Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>;

fn fc_of(f: &Func, cfg: &QuadCfg) -> SpectrumFn {
    let f = f.clone();
    let cfg = cfg.clone();
    Arc::new(move |y| match f.fc_closed() {
        Some(s) => Ok(s.eval(y)),
        None => fourier_cosine(&f, y, &cfg).map(|r| r.value),
    })
}

fn lap_of(f: &Func, cfg: &QuadCfg) -> SpectrumFn {
    let f = f.clone();
    let cfg = cfg.clone();
    Arc::new(move |y| match f.laplace_closed() {
        Some(s) => Ok(s.eval(y)),
        None => laplace(&f, y, &cfg).map(|r| r.value),
    })
}

fn require(flag: bool, what: &str, f: &Func) -> Result<()> {
    if flag {
        Ok(())
    } else {
        Err(Error::HypothesisViolation(format!("{what} '{}'", f.label)))
    }
}

/// Frequencies the solvability audit walks: zero itself, then a geometric
/// sweep. Symbol zeros sitting exactly on the boundary are caught by the
/// first point.
fn audit_frequencies() -> Vec<f64> {
    let sweep = Grid::geometric(0.05, 50.0, 120).expect("static grid parameters are valid");
    let mut ys = Vec::with_capacity(sweep.len() + 1);
    ys.push(0.0);
    ys.extend_from_slice(sweep.points());
    ys
}

const SYMBOL_FLOOR: f64 = 1e-8;

/// Refuse symbols that vanish on the audit grid or change the sign of an
/// essentially real value between neighbouring frequencies, which brackets
/// a zero the grid itself stepped over.
fn audit_symbol(denom: &SpectrumFn) -> Result<()> {
    let mut prev: Option<(f64, Complex64)> = None;
    for y in audit_frequencies() {
        let d = denom(y)?;
        let m = d.norm();
        if !m.is_finite() || m < SYMBOL_FLOOR {
            return Err(Error::SingularSymbol { y, modulus: m });
        }
        if let Some((y0, d0)) = prev {
            let essentially_real =
                d0.im.abs() < 1e-10 * d0.re.abs() && d.im.abs() < 1e-10 * d.re.abs();
            if essentially_real && d0.re.signum() != d.re.signum() {
                return Err(Error::SingularSymbol {
                    y: 0.5 * (y0 + y),
                    modulus: d0.norm().min(m),
                });
            }
        }
        prev = Some((y, d));
    }
    Ok(())
}

/// Least-squares decay order of `|S|` over dyadic tail frequencies. An
/// identically tiny tail counts as fast decay.
fn spectrum_decay_order(spectrum: &SpectrumFn) -> Result<f64> {
    let ys = [64.0, 128.0, 256.0, 512.0];
    let mut pts = Vec::with_capacity(ys.len());
    for &y in &ys {
        let m = spectrum(y)?.norm();
        if m < 1e-280 {
            return Ok(8.0);
        }
        pts.push((y.ln(), m.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(-sxy / sxx)
}

const L2_ORDER_FLOOR: f64 = 0.55;

/// Sampling grid for solved profiles. Quotient spectra often decay only
/// like 1/y², which leaves the solution with mild curvature singularities
/// at the origin; the fine linear head keeps the spline's interpolation
/// error there near 3e-5.
pub fn solution_sampling_grid() -> Grid {
    Grid::linear_then_geometric(0.025, 4.0, 250.0, 48).expect("static grid parameters are valid")
}

/// A solution `f` given by its cosine spectrum; `f(x)` is the inverse
/// transform `√(2/π) ∫ S(y) cos(xy) dy`.
pub struct SpectralSolution {
    pub label: String,
    spectrum: SpectrumFn,
    decay: SpectralDecay,
}

impl std::fmt::Debug for SpectralSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralSolution")
            .field("label", &self.label)
            .field("decay", &self.decay)
            .finish()
    }
}

impl SpectralSolution {
    fn new(label: impl Into<String>, spectrum: SpectrumFn, order: f64) -> SpectralSolution {
        // Keep a margin below the fitted order so truncation budgets stay
        // honest; slow tails fall to the alternating summation.
        SpectralSolution {
            label: label.into(),
            spectrum,
            decay: SpectralDecay::algebraic((order - 0.25).max(0.0)),
        }
    }

    pub fn spectrum_at(&self, y: f64) -> Result<Complex64> {
        if !(y.is_finite() && y >= 0.0) {
            return Err(Error::Domain {
                what: "spectral frequency",
                x: y,
            });
        }
        (self.spectrum)(y)
    }

    pub fn eval(&self, x: f64, cfg: &QuadCfg) -> Result<IntegralValue> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::Domain {
                what: "evaluation point",
                x,
            });
        }
        let r = integrate_oscillatory_cos(
            |y| (self.spectrum)(y),
            x,
            &self.decay.to_decay_class(),
            cfg,
        )?;
        Ok(r.scaled(SQRT_2_OVER_PI))
    }

    /// Spline picture of the solution with a fitted `c/x²` tail. The left
    /// slope comes from the spectrum's own algebraic tail, read off at two
    /// large frequencies with one Richardson step.
    pub fn sample(&self, grid: &Grid, cfg: &QuadCfg) -> Result<SampledFunc> {
        let mut ys = Vec::with_capacity(grid.len());
        for &x in grid.points() {
            let r = self.eval(x, cfg).map_err(|e| e.at_point(x))?;
            if r.value.im.abs() > 1e-6 * r.value.re.abs().max(1.0) {
                return Err(Error::HypothesisViolation(format!(
                    "sampled solution is not real at x={x} (imaginary part {:e})",
                    r.value.im
                )));
            }
            ys.push(r.value.re);
        }
        // Laplace factors contribute odd 1/y corrections to S·y², so the
        // extrapolation weights are the first-order ones.
        let (y1, y2) = (600.0, 1200.0);
        let g1 = (self.spectrum)(y1)? * y1 * y1;
        let g2 = (self.spectrum)(y2)? * y2 * y2;
        let c = g2 * 2.0 - g1;
        let slope = -(std::f64::consts::PI / 2.0).sqrt() * c.re;
        let x_last = grid.points()[grid.len() - 1];
        let tail_c = ys[grid.len() - 1] * x_last * x_last;
        SampledFunc::clamped_left_cubic(grid, ys, slope, tail_c)
    }

    fn decay_order(&self) -> f64 {
        self.decay.poly_order
    }
}

/// Solve `f(x) + (f ⋆ g)(x) = conv(g,h,ξ)(x)` where `⋆` is the two-factor
/// cosine convolution. The spectrum is `(Fc g)(L h)(L ξ)/(1 + Fc g)`,
/// admissible whenever `1 + Fc g` stays away from zero.
pub fn solve_toeplitz_hankel(
    g: &Func,
    h: &Func,
    xi: &Func,
    cfg: &QuadCfg,
) -> Result<SpectralSolution> {
    require(g.in_l1, "integrable kernel factor required, got", g)?;
    require(h.in_l1, "integrable second factor required, got", h)?;
    require(xi.in_l1, "integrable third factor required, got", xi)?;
    cfg.validate()?;
    let cfg_in = cfg.tightened(10.0);
    let fc_g = fc_of(g, &cfg_in);
    let lap_h = lap_of(h, &cfg_in);
    let lap_xi = lap_of(xi, &cfg_in);

    let denom: SpectrumFn = {
        let fc_g = fc_g.clone();
        Arc::new(move |y| Ok(Complex64::new(1.0, 0.0) + fc_g(y)?))
    };
    audit_symbol(&denom)?;

    let spectrum: SpectrumFn =
        Arc::new(move |y| Ok(fc_g(y)? * lap_h(y)? * lap_xi(y)? / denom(y)?));
    let order = spectrum_decay_order(&spectrum)?;
    Ok(SpectralSolution::new(
        format!("th({}, {}, {})", g.label, h.label, xi.label),
        spectrum,
        order,
    ))
}

/// The symbol `1 + Fc g` of the Toeplitz-plus-Hankel equation, exposed so
/// reports can show the quotient structure.
pub fn toeplitz_hankel_symbol(g: &Func, y: f64, cfg: &QuadCfg) -> Result<Complex64> {
    let fc_g = fc_of(g, cfg);
    Ok(Complex64::new(1.0, 0.0) + fc_g(y)?)
}

/// Solve `D(f ⋆ φ)(t) + conv(f,η,ξ)(t) = g(t)` with
/// `D = I - d²/dt²`. The operator never acts pointwise: under the cosine
/// transform it is the multiplier `1 + y²`, so the symbol is
/// `(1+y²)(Fc φ) + (L η)(L ξ)` and the spectrum is `Fc g` over it.
pub fn solve_barbashin_first(
    phi: &Func,
    eta: &Func,
    xi: &Func,
    g: &Func,
    cfg: &QuadCfg,
) -> Result<SpectralSolution> {
    require(phi.in_l2, "square-integrable convolver required, got", phi)?;
    require(eta.in_l1, "integrable kernel factor required, got", eta)?;
    require(xi.in_l1, "integrable kernel factor required, got", xi)?;
    require(g.in_l2, "square-integrable right side required, got", g)?;
    cfg.validate()?;
    let cfg_in = cfg.tightened(10.0);
    let fc_phi = fc_of(phi, &cfg_in);
    let lap_eta = lap_of(eta, &cfg_in);
    let lap_xi = lap_of(xi, &cfg_in);
    let fc_g = fc_of(g, &cfg_in);

    let denom: SpectrumFn = Arc::new(move |y| {
        Ok(Complex64::new(1.0 + y * y, 0.0) * fc_phi(y)? + lap_eta(y)? * lap_xi(y)?)
    });
    audit_symbol(&denom)?;

    let spectrum: SpectrumFn = Arc::new(move |y| Ok(fc_g(y)? / denom(y)?));
    let order = spectrum_decay_order(&spectrum)?;
    if order < L2_ORDER_FLOOR {
        return Err(Error::NonL2Quotient { order });
    }
    Ok(SpectralSolution::new(
        format!("b1({}, {}, {}, {})", phi.label, eta.label, xi.label, g.label),
        spectrum,
        order,
    ))
}

/// Solve `D(conv(f,η,ξ))(t) + (f ⋆ h)(t) = g(t)`. The symbol is
/// `(1+y²)(L η)(L ξ) + Fc h`; the quotient must decay fast enough to stay
/// square integrable, which the dyadic tail probe enforces.
pub fn solve_barbashin_second(
    eta: &Func,
    xi: &Func,
    h: &Func,
    g: &Func,
    cfg: &QuadCfg,
) -> Result<SpectralSolution> {
    require(eta.in_l1, "integrable kernel factor required, got", eta)?;
    require(xi.in_l1, "integrable kernel factor required, got", xi)?;
    require(h.in_l2, "square-integrable convolver required, got", h)?;
    require(g.in_l2, "square-integrable right side required, got", g)?;
    cfg.validate()?;
    let cfg_in = cfg.tightened(10.0);
    let lap_eta = lap_of(eta, &cfg_in);
    let lap_xi = lap_of(xi, &cfg_in);
    let fc_h = fc_of(h, &cfg_in);
    let fc_g = fc_of(g, &cfg_in);

    let denom: SpectrumFn = Arc::new(move |y| {
        Ok(Complex64::new(1.0 + y * y, 0.0) * lap_eta(y)? * lap_xi(y)? + fc_h(y)?)
    });
    audit_symbol(&denom)?;

    let spectrum: SpectrumFn = Arc::new(move |y| Ok(fc_g(y)? / denom(y)?));
    let order = spectrum_decay_order(&spectrum)?;
    if order < L2_ORDER_FLOOR {
        return Err(Error::NonL2Quotient { order });
    }
    Ok(SpectralSolution::new(
        format!("b2({}, {}, {}, {})", eta.label, xi.label, h.label, g.label),
        spectrum,
        order,
    ))
}

/// Solve `f(x) + D(conv(f,η,ξ))(x) = g(x)`. The symbol is
/// `1 + (1+y²)(L η)(L ξ)`, which needs Laplace-transformable phases.
pub fn solve_differential(
    eta: &Func,
    xi: &Func,
    g: &Func,
    cfg: &QuadCfg,
) -> Result<SpectralSolution> {
    require(eta.in_a, "laplace-transformable phase required, got", eta)?;
    require(xi.in_a, "laplace-transformable phase required, got", xi)?;
    require(g.in_l2, "square-integrable right side required, got", g)?;
    cfg.validate()?;
    let cfg_in = cfg.tightened(10.0);
    let lap_eta = lap_of(eta, &cfg_in);
    let lap_xi = lap_of(xi, &cfg_in);
    let fc_g = fc_of(g, &cfg_in);

    let denom: SpectrumFn = Arc::new(move |y| {
        Ok(Complex64::new(1.0, 0.0) + Complex64::new(1.0 + y * y, 0.0) * lap_eta(y)? * lap_xi(y)?)
    });
    audit_symbol(&denom)?;

    let spectrum: SpectrumFn = Arc::new(move |y| Ok(fc_g(y)? / denom(y)?));
    let order = spectrum_decay_order(&spectrum)?;
    if order < L2_ORDER_FLOOR {
        return Err(Error::NonL2Quotient { order });
    }
    Ok(SpectralSolution::new(
        format!("de({}, {}, {})", eta.label, xi.label, g.label),
        spectrum,
        order,
    ))
}

/// Two-factor cosine convolution of a sampled function against a catalogue
/// function, `(s ⋆ g)(x) = (2π)^{-1/2} ∫ s(y)[g(x+y) + g(|x-y|)] dy`.
fn fc_convolution_of_samples(
    s: &SampledFunc,
    g: &Func,
    x: f64,
    cfg: &QuadCfg,
) -> Result<Complex64> {
    let decay = DecayClass::polynomial(2.0)?;
    let r = integrate_semi_infinite(
        |y| Ok((g.eval(x + y) + g.eval((x - y).abs())) * s.eval(y)),
        &decay,
        cfg,
    )?;
    Ok(r.value / (2.0 * std::f64::consts::PI).sqrt())
}

fn convergence_rows(
    rep: &mut VerificationReport,
    sol: &SpectralSolution,
    probes: &[f64],
    cfg: &QuadCfg,
) -> Result<()> {
    let tight = cfg.tightened(50.0);
    for &x in probes {
        let a = sol.eval(x, cfg)?;
        let b = sol.eval(x, &tight)?;
        rep.push(CheckRow::compare_complex(
            format!("solution converges at x={x}"),
            a.value,
            b.value,
            3.0 * (a.err_est + b.err_est) + 1e-9,
        ));
    }
    Ok(())
}

/// When the spectrum is absolutely integrable, the solution is bounded by
/// `√(2/π) ∫ |S| dy`; the row compares the sampled maximum against it.
fn sup_bound_row(
    rep: &mut VerificationReport,
    sol: &SpectralSolution,
    spline: &SampledFunc,
    cfg: &QuadCfg,
) -> Result<()> {
    if sol.decay_order() <= 1.05 {
        return Ok(());
    }
    let spectrum_l1 = integrate_semi_infinite(
        |y| Ok(Complex64::new(sol.spectrum_at(y)?.norm(), 0.0)),
        &sol.decay.to_decay_class(),
        cfg,
    )?;
    let bound = SQRT_2_OVER_PI * spectrum_l1.value.re;
    let peak = spline.max_abs_sample();
    rep.push(CheckRow::bound(
        "solution peak against spectrum mass",
        peak,
        bound,
        1e-8 + 3.0 * spectrum_l1.err_est,
    ));
    Ok(())
}

/// Rebuild the Toeplitz-plus-Hankel equation from the solved `f`: evaluate
/// `f + f ⋆ g` out of an independently sampled spline and compare against
/// the directly integrated right side. Also reports the norm identity
/// `‖f‖₁ ≤ ‖ε‖₁ ‖h‖₁ ‖ξ‖₁` with `ε` reconstructed from its own spectrum.
pub fn toeplitz_hankel_report(
    g: &Func,
    h: &Func,
    xi: &Func,
    probes: &[f64],
    cfg: &QuadCfg,
) -> Result<VerificationReport> {
    let sol = solve_toeplitz_hankel(g, h, xi, cfg)?;
    let mut rep = VerificationReport::new("toeplitz-plus-hankel equation audit");

    let grid = solution_sampling_grid();
    let spline = sol.sample(&grid, cfg)?;
    for &x in probes {
        let f_x = sol.eval(x, cfg)?;
        let conv2 = fc_convolution_of_samples(&spline, g, x, cfg)?;
        let rhs = polyconv_direct(g, h, xi, x, cfg)?;
        rep.push(CheckRow::compare_complex(
            format!("equation rebuilt at x={x}"),
            f_x.value + conv2,
            rhs.value,
            5e-6 + 3.0 * rhs.err_est,
        ));
    }

    let cfg_in = cfg.tightened(10.0);
    let fc_g = fc_of(g, &cfg_in);
    let eps_spectrum: SpectrumFn = Arc::new(move |y| {
        let v = fc_g(y)?;
        Ok(v / (Complex64::new(1.0, 0.0) + v))
    });
    let eps_order = spectrum_decay_order(&eps_spectrum)?;
    let eps = SpectralSolution::new("resolvent kernel", eps_spectrum, eps_order);
    let eps_spline = eps.sample(&grid, cfg)?;
    let l1_f = lp_norm_of_samples(&spline, 1.0, cfg)?;
    let bound = lp_norm_of_samples(&eps_spline, 1.0, cfg)?
        * lp_norm(h, 1.0, cfg)?
        * lp_norm(xi, 1.0, cfg)?;
    rep.push(CheckRow::bound(
        "solution norm against resolvent norm product",
        l1_f,
        bound,
        1e-5,
    ));

    convergence_rows(&mut rep, &sol, probes, cfg)?;
    Ok(rep)
}

fn spectral_residual_rows(
    rep: &mut VerificationReport,
    sol: &SpectralSolution,
    denom: &SpectrumFn,
    fc_g: &SpectrumFn,
    y_probes: &[f64],
    cfg: &QuadCfg,
) -> Result<()> {
    let grid = solution_sampling_grid();
    let spline = sol.sample(&grid, cfg)?;
    for &y in y_probes {
        let fc_num = fourier_cosine_of_sampled(&spline, y, cfg)?;
        rep.push(CheckRow::compare_complex(
            format!("spectral residual at y={y}"),
            fc_num.value * denom(y)?,
            fc_g(y)?,
            2e-4,
        ));
    }
    sup_bound_row(rep, sol, &spline, cfg)
}

/// Rebuild the first integro-differential form in the spectral domain: an
/// independent forward transform of the sampled solution, multiplied by the
/// symbol, must reproduce the right side's spectrum.
pub fn barbashin_first_report(
    phi: &Func,
    eta: &Func,
    xi: &Func,
    g: &Func,
    y_probes: &[f64],
    x_probes: &[f64],
    cfg: &QuadCfg,
) -> Result<VerificationReport> {
    let sol = solve_barbashin_first(phi, eta, xi, g, cfg)?;
    let mut rep = VerificationReport::new("integro-differential equation audit (convolver form)");
    let cfg_in = cfg.tightened(10.0);
    let fc_phi = fc_of(phi, &cfg_in);
    let lap_eta = lap_of(eta, &cfg_in);
    let lap_xi = lap_of(xi, &cfg_in);
    let denom: SpectrumFn = Arc::new(move |y| {
        Ok(Complex64::new(1.0 + y * y, 0.0) * fc_phi(y)? + lap_eta(y)? * lap_xi(y)?)
    });
    spectral_residual_rows(&mut rep, &sol, &denom, &fc_of(g, &cfg_in), y_probes, cfg)?;
    convergence_rows(&mut rep, &sol, x_probes, cfg)?;
    Ok(rep)
}

/// Rebuild the second integro-differential form in the spectral domain.
pub fn barbashin_second_report(
    eta: &Func,
    xi: &Func,
    h: &Func,
    g: &Func,
    y_probes: &[f64],
    x_probes: &[f64],
    cfg: &QuadCfg,
) -> Result<VerificationReport> {
    let sol = solve_barbashin_second(eta, xi, h, g, cfg)?;
    let mut rep = VerificationReport::new("integro-differential equation audit (kernel form)");
    let cfg_in = cfg.tightened(10.0);
    let lap_eta = lap_of(eta, &cfg_in);
    let lap_xi = lap_of(xi, &cfg_in);
    let fc_h = fc_of(h, &cfg_in);
    let denom: SpectrumFn = Arc::new(move |y| {
        Ok(Complex64::new(1.0 + y * y, 0.0) * lap_eta(y)? * lap_xi(y)? + fc_h(y)?)
    });
    spectral_residual_rows(&mut rep, &sol, &denom, &fc_of(g, &cfg_in), y_probes, cfg)?;
    convergence_rows(&mut rep, &sol, x_probes, cfg)?;
    Ok(rep)
}

/// Audit the differential form: symbol values at the probe frequencies and
/// two-tolerance convergence of the solution values. The solution may be
/// unbounded at the origin, so no spline is built.
pub fn differential_report(
    eta: &Func,
    xi: &Func,
    g: &Func,
    y_probes: &[f64],
    x_probes: &[f64],
    cfg: &QuadCfg,
) -> Result<VerificationReport> {
    let sol = solve_differential(eta, xi, g, cfg)?;
    let mut rep = VerificationReport::new("differential equation audit");
    let cfg_in = cfg.tightened(10.0);
    let lap_eta = lap_of(eta, &cfg_in);
    let lap_xi = lap_of(xi, &cfg_in);
    let fc_g = fc_of(g, &cfg_in);
    for &y in y_probes {
        let denom = Complex64::new(1.0, 0.0)
            + Complex64::new(1.0 + y * y, 0.0) * lap_eta(y)? * lap_xi(y)?;
        rep.push(CheckRow::compare_complex(
            format!("quotient identity at y={y}"),
            sol.spectrum_at(y)? * denom,
            fc_g(y)?,
            1e-12,
        ));
    }
    convergence_rows(&mut rep, &sol, x_probes, cfg)?;
    Ok(rep)
}
