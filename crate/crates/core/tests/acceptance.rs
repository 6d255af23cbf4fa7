//! Acceptance gate: one test per shipped guarantee, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them). Tolerances are
//! pinned here, not configurable.

use fcl::functions::Func;
use fcl::inequalities::{
    saitoh_check, young_functional_check, young_norm_check, SaitohInstance, WeightShifts,
    YoungExponents,
};
use fcl::numerics::{integrate_oscillatory_cos, integrate_semi_infinite, DecayClass, QuadCfg};
use fcl::polyconv::{
    default_sampling_grid, l1_norm_bound_check, phi_kernel, polyconv_direct, verify_factorization,
    verify_parseval,
};
use fcl::solvers::{
    solution_sampling_grid, solve_barbashin_first, solve_barbashin_second, solve_differential,
    solve_toeplitz_hankel, toeplitz_hankel_report, toeplitz_hankel_symbol,
};
use fcl::transforms::{fourier_cosine, laplace};
use fcl::watson::{deviation_report, unitary_audit, WatsonOperator};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SQRT_PI_OVER_2: f64 = 1.253_314_137_315_500_3;

fn cfg() -> QuadCfg {
    QuadCfg::default()
}

fn verdict(name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{name}: {detail}");
}

fn exponential_triple() -> (Func, Func, Func) {
    (
        Func::exp(1.0).unwrap(),
        Func::exp(1.0).unwrap(),
        Func::exp(1.0).unwrap(),
    )
}

fn resolvent_example_triple() -> (Func, Func, Func) {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    (
        Func::exp(1.0)
            .unwrap()
            .scale(Complex64::new(SQRT_PI_OVER_2, 0.0)),
        Func::exp(2.0)
            .unwrap()
            .scale(Complex64::new(sqrt_pi / (2.0 * 2.0f64.sqrt()), 0.0)),
        Func::exp(3.0)
            .unwrap()
            .scale(Complex64::new(sqrt_pi / (3.0 * 2.0f64.sqrt()), 0.0)),
    )
}

#[test]
fn criterion_01_kernel_marginals() {
    let tol = 1e-8;
    let mut rng = StdRng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (x, u, v, w) = (
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.1..5.0),
        );
        let over_x = integrate_semi_infinite(
            |t| Ok(Complex64::new(phi_kernel(t, u, v, w)?, 0.0)),
            &DecayClass::polynomial(2.0).unwrap(),
            &cfg(),
        )
        .unwrap();
        let over_u = integrate_semi_infinite(
            |t| Ok(Complex64::new(phi_kernel(x, t, v, w)?, 0.0)),
            &DecayClass::polynomial(2.0).unwrap(),
            &cfg(),
        )
        .unwrap();
        for m in [over_x.value.re, over_u.value.re] {
            worst = worst.max((m - std::f64::consts::PI).abs() / std::f64::consts::PI);
        }
    }
    verdict(
        "01 kernel marginals equal pi",
        worst <= tol,
        &format!("worst relative error {worst:.2e}, tol {tol:.0e}"),
    );
}

#[test]
fn criterion_02_kernel_laplace_representation() {
    let tol = 1e-7;
    let mut rng = StdRng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (x, u, v, w) = (
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.1..5.0),
        );
        let s = v + w;
        let rep = integrate_oscillatory_cos(
            |y| Ok(Complex64::new(2.0 * (-s * y).exp() * (u * y).cos(), 0.0)),
            x,
            &DecayClass::exponential(s).unwrap(),
            &cfg(),
        )
        .unwrap();
        worst = worst.max((rep.value.re - phi_kernel(x, u, v, w).unwrap()).abs());
    }
    verdict(
        "02 kernel equals its damped cosine integral",
        worst <= tol,
        &format!("worst absolute error {worst:.2e}, tol {tol:.0e}"),
    );
}

#[test]
fn criterion_03_factorization_identity() {
    // Gap is normalized by the largest spectrum value over the probe set;
    // the smallest probed value sits three decades below it, where the
    // sampled transform's absolute floor dominates a pointwise ratio.
    let tol = 1e-5;
    let ys = [0.25, 0.5, 1.0, 2.0, 4.0];
    let (f, g, h) = exponential_triple();
    let mixed = (
        Func::exp(1.0)
            .unwrap()
            .scale(Complex64::new(SQRT_PI_OVER_2, 0.0)),
        Func::exp(1.0).unwrap(),
        Func::poly_exp(1, 1.0).unwrap(),
    );
    let mut worst = 0.0f64;
    for (a, b, c) in [(&f, &g, &h), (&mixed.0, &mixed.1, &mixed.2)] {
        let rep = verify_factorization(a, b, c, &ys, &cfg()).unwrap();
        let scale = rep
            .rows
            .iter()
            .filter(|r| r.quantity.starts_with("factorized image"))
            .map(|r| r.want.abs())
            .fold(0.0f64, f64::max);
        for row in rep.rows.iter().filter(|r| r.quantity.starts_with("factorized image")) {
            worst = worst.max(row.err / scale);
        }
    }
    verdict(
        "03 cosine image factorizes into transform product",
        worst <= tol,
        &format!("worst normalized gap {worst:.2e}, tol {tol:.0e}"),
    );
}

#[test]
fn criterion_04_route_equivalence() {
    let (f, g, h) = exponential_triple();
    let rep = verify_parseval(&f, &g, &h, &[0.5, 1.0, 2.0], &cfg()).unwrap();
    let worst = rep
        .rows
        .iter()
        .map(|r| r.err / r.tol)
        .fold(0.0f64, f64::max);
    verdict(
        "04 direct and spectral routes agree",
        rep.pass(),
        &format!("worst error at {worst:.2} of the combined estimate"),
    );
}

#[test]
fn criterion_05_unit_factor_collapses_to_constant() {
    let tol = 1e-6;
    let one = Func::one();
    let e1 = Func::exp(1.0).unwrap();
    let e2 = Func::exp(2.0).unwrap();
    let xs = [0.3, 0.8, 1.5, 3.0, 7.0];
    let mut worst_unit = 0.0f64;
    let mut bound_excess = 0.0f64;
    for &x in &xs {
        let v = polyconv_direct(&one, &e1, &e1, x, &cfg()).unwrap();
        worst_unit = worst_unit.max((v.value.re - 1.0).abs());
        let b = polyconv_direct(&one, &e1, &e2, x, &cfg()).unwrap();
        bound_excess = bound_excess.max(v.value.im.abs().max(b.value.norm() - 0.5));
    }
    verdict(
        "05 bounded first factor collapses to mass product",
        worst_unit <= tol && bound_excess <= tol,
        &format!(
            "constant-one deviation {worst_unit:.2e}, half-mass excess {bound_excess:.2e}, tol {tol:.0e}"
        ),
    );
}

#[test]
fn criterion_06_watson_unitarity() {
    let phase = WatsonOperator::second_order(Func::cexp(true), Func::cexp(false)).unwrap();
    let mut dev = 0.0f64;
    for y in [0.0, 0.35, 1.0, 2.8, 8.0, 22.0] {
        let m = phase.multiplier(y, &cfg()).unwrap();
        dev = dev.max((m.norm() - 1.0).abs());
    }
    let imag_sin = Func::sin_t().scale(Complex64::new(0.0, 1.0));
    let broken = WatsonOperator::second_order(imag_sin, Func::cos_t()).unwrap();
    let broken_rep = deviation_report(&broken, &[0.0, 0.35, 1.0, 2.8, 8.0, 22.0], &cfg()).unwrap();
    let broken_dev = broken_rep
        .rows
        .iter()
        .map(|r| r.err)
        .fold(0.0f64, f64::max);

    let mut audit_ok = true;
    let mut worst_row = 0.0f64;
    for f in [
        Func::exp(1.0).unwrap(),
        Func::exp(1.0)
            .unwrap()
            .scale(Complex64::new(SQRT_PI_OVER_2, 0.0)),
        Func::poly_exp(1, 1.0).unwrap(),
    ] {
        let rep = unitary_audit(&phase, &f, &[0.4, 1.0, 2.5], &cfg()).unwrap();
        audit_ok &= rep.pass();
        for row in rep
            .rows
            .iter()
            .filter(|r| !r.quantity.starts_with("|m("))
        {
            worst_row = worst_row.max(row.err);
        }
    }
    verdict(
        "06 phase-pair operator is unitary, broken pair is caught",
        dev <= 1e-10 && broken_dev >= 0.5 && audit_ok && worst_row <= 1e-4,
        &format!(
            "phase deviation {dev:.1e} (tol 1e-10), broken deviation {broken_dev:.2}, worst isometry/roundtrip error {worst_row:.2e} (tol 1e-4)"
        ),
    );
}

#[test]
fn criterion_07_young_inequalities() {
    let mut rng = StdRng::seed_from_u64(707);
    let mut worst_algebra = 0.0f64;
    let mut min_slack = f64::INFINITY;
    let mut all_pass = true;
    for _ in 0..5 {
        // functional form: three reciprocals then the fourth by closure
        let (p, q, r, s) = loop {
            let p: f64 = rng.gen_range(1.2..2.5);
            let q: f64 = rng.gen_range(1.2..2.5);
            let r: f64 = rng.gen_range(1.2..2.5);
            let rest = 3.0 - 1.0 / p - 1.0 / q - 1.0 / r;
            if rest > 0.125 && rest < 0.83 {
                break (p, q, r, 1.0 / rest);
            }
        };
        let exps = YoungExponents::functional(p, q, r, s).unwrap();
        worst_algebra =
            worst_algebra.max((1.0 / p + 1.0 / q + 1.0 / r + 1.0 / s - 3.0).abs());
        let shifts =
            WeightShifts::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)).unwrap();
        let f = Func::exp(rng.gen_range(0.6..3.0)).unwrap();
        let g = Func::exp(rng.gen_range(0.6..3.0)).unwrap();
        let h = Func::exp(rng.gen_range(0.6..3.0)).unwrap();
        let k = Func::exp(rng.gen_range(0.6..3.0)).unwrap();
        let rep = young_functional_check(&f, &g, &h, &k, &exps, &shifts, &cfg()).unwrap();
        all_pass &= rep.pass();
        let row = &rep.rows[0];
        min_slack = min_slack.min(row.want - row.got);

        // norm form: reciprocal surplus over 2 fixes the target exponent
        let (p, q, r, s) = loop {
            let p: f64 = rng.gen_range(1.2..1.49);
            let q: f64 = rng.gen_range(1.2..1.49);
            let r: f64 = rng.gen_range(1.2..1.49);
            let surplus = 1.0 / p + 1.0 / q + 1.0 / r - 2.0;
            if surplus > 0.125 {
                break (p, q, r, 1.0 / surplus);
            }
        };
        let exps = YoungExponents::norm_form(p, q, r, s).unwrap();
        worst_algebra =
            worst_algebra.max((1.0 / p + 1.0 / q + 1.0 / r - 2.0 - 1.0 / s).abs());
        let rep = young_norm_check(
            &f,
            &g,
            &h,
            &exps,
            &shifts,
            &default_sampling_grid(),
            &cfg(),
        )
        .unwrap();
        all_pass &= rep.pass();
        let row = rep.rows.last().unwrap();
        min_slack = min_slack.min(row.want - row.got);
    }
    verdict(
        "07 pairing and norm inequalities hold on randomized exponents",
        all_pass && min_slack > 0.0 && worst_algebra <= 1e-12,
        &format!(
            "5 configurations each, smallest slack {min_slack:.3e}, exponent algebra error {worst_algebra:.1e} (tol 1e-12)"
        ),
    );
}

#[test]
fn criterion_08_weighted_kernel_inequality() {
    let inst = SaitohInstance::exponential(1.0, 2.0).unwrap();
    let mut all_pass = true;
    let mut slacks = Vec::new();
    for p in [2.0, 3.0] {
        let rep = saitoh_check(&inst, p, &default_sampling_grid(), &cfg()).unwrap();
        all_pass &= rep.pass();
        let row = rep.rows.last().unwrap();
        slacks.push(format!("p={p}: slack {:.3e}", row.want - row.got));
    }
    verdict(
        "08 weighted norm inequality holds at p=2 and p=3",
        all_pass,
        &slacks.join(", "),
    );
}

#[test]
fn criterion_09_solver_examples() {
    let c = cfg();

    // (a) resolvent equation: residual and the closed resolvent spectrum
    let (g, h, xi) = resolvent_example_triple();
    let rep = toeplitz_hankel_report(&g, &h, &xi, &[0.5, 1.0, 2.0], &c).unwrap();
    let residual = rep
        .rows
        .iter()
        .filter(|r| r.quantity.starts_with("equation rebuilt"))
        .map(|r| r.err)
        .fold(0.0f64, f64::max);
    let mut resolvent_err = 0.0f64;
    for y in [0.3, 0.8, 1.5, 3.0, 6.0] {
        let fc_g = fourier_cosine(&g, y, &c).unwrap().value;
        let denom = toeplitz_hankel_symbol(&g, y, &c).unwrap();
        let eps = fc_g / denom;
        resolvent_err = resolvent_err.max((eps - Complex64::new(1.0 / (2.0 + y * y), 0.0)).norm());
    }

    // (b) first integro-differential form: spectrum and sup bound
    let phi = Func::exp(1.0)
        .unwrap()
        .scale(Complex64::new(SQRT_PI_OVER_2, 0.0));
    let sol_b = solve_barbashin_first(
        &phi,
        &Func::exp(1.0).unwrap(),
        &Func::poly_exp(1, 1.0).unwrap(),
        &phi,
        &c,
    )
    .unwrap();
    let mut spec_err_b = 0.0f64;
    for y in [0.3, 0.8, 1.5, 3.0, 6.0] {
        let cube = (1.0 + y) * (1.0 + y) * (1.0 + y);
        let want = cube / ((cube + 1.0) * (1.0 + y * y));
        spec_err_b = spec_err_b.max((sol_b.spectrum_at(y).unwrap().re - want).abs());
    }
    let peak_b = sol_b
        .sample(&solution_sampling_grid(), &c)
        .unwrap()
        .max_abs_sample();

    // (c) second integro-differential form
    let e = Func::exp(1.0).unwrap();
    let rhs = Func::exp(1.0)
        .unwrap()
        .scale(Complex64::new(SQRT_PI_OVER_2, 0.0));
    let sol_c = solve_barbashin_second(&e, &e, &rhs, &rhs, &c).unwrap();
    let mut spec_err_c = 0.0f64;
    for y in [0.3, 0.8, 1.5, 3.0, 6.0] {
        let sq = (1.0 + y) * (1.0 + y);
        let want = sq / ((1.0 + y * y) * (1.0 + y * y) + sq);
        spec_err_c = spec_err_c.max((sol_c.spectrum_at(y).unwrap().re - want).abs());
    }
    let peak_c = sol_c
        .sample(&solution_sampling_grid(), &c)
        .unwrap()
        .max_abs_sample();

    // (d) differential form with the Bessel right side
    let sol_d = solve_differential(&Func::cexp(true), &Func::cexp(false), &Func::k0_scaled(), &c)
        .unwrap();
    let norm = (2.0 * std::f64::consts::PI).sqrt();
    let mut bessel_err = 0.0f64;
    for x in [0.5, 1.0, 2.0] {
        let want = fcl::bessel::bessel_k0(x).unwrap() / norm;
        bessel_err = bessel_err.max((sol_d.eval(x, &c).unwrap().value.re - want).abs());
    }

    let pass = residual <= 1e-5
        && resolvent_err <= 1e-8
        && spec_err_b <= 1e-8
        && peak_b <= SQRT_PI_OVER_2 + 1e-6
        && spec_err_c <= 1e-8
        && peak_c <= norm + 1e-6
        && bessel_err <= 1e-5;
    verdict(
        "09 solver examples reproduce closed solutions",
        pass,
        &format!(
            "residual {residual:.1e} (tol 1e-5), resolvent {resolvent_err:.1e} (tol 1e-8), spectra {spec_err_b:.1e}/{spec_err_c:.1e} (tol 1e-8), peaks {peak_b:.4}<=1.2533/{peak_c:.4}<=2.5066, bessel {bessel_err:.1e} (tol 1e-5)"
        ),
    );
}

#[test]
fn criterion_10_l1_norm_bound() {
    let mut rng = StdRng::seed_from_u64(1010);
    let mut all_pass = true;
    for _ in 0..5 {
        let f = Func::exp(rng.gen_range(0.5..4.0)).unwrap();
        let g = Func::exp(rng.gen_range(0.5..4.0)).unwrap();
        let h = Func::exp(rng.gen_range(0.5..4.0)).unwrap();
        let rep = l1_norm_bound_check(&f, &g, &h, &cfg()).unwrap();
        all_pass &= rep.pass();
    }

    // Sharp instance: nonnegative solution makes the bound an equality. The
    // product of factor norms is pi*sqrt(pi)/(144*sqrt(2)); a 134 in place
    // of 144, which appears in one published table of this bound, overshoots
    // the attained value by 7.5 percent and cannot be the norm product.
    let (g, h, xi) = resolvent_example_triple();
    let sol = solve_toeplitz_hankel(&g, &h, &xi, &cfg()).unwrap();
    let sample = sol.sample(&solution_sampling_grid(), &cfg()).unwrap();
    let l1 = fcl::inequalities::lp_norm_of_samples(&sample, 1.0, &cfg()).unwrap();
    let pinned = std::f64::consts::PI * std::f64::consts::PI.sqrt() / (144.0 * 2.0f64.sqrt());
    let variant = std::f64::consts::PI * std::f64::consts::PI.sqrt() / (134.0 * 2.0f64.sqrt());
    let saturated = (l1 - pinned).abs() <= 2e-6;
    let variant_rejected = (l1 - variant).abs() > 1e-3;
    verdict(
        "10 l1 norm bound holds and saturates on the sharp instance",
        all_pass && saturated && variant_rejected,
        &format!(
            "5 random triples pass; sharp instance norm {l1:.9} vs pinned {pinned:.9} (tol 2e-6); 134-denominator variant {variant:.9} off by {:.2e}",
            (l1 - variant).abs()
        ),
    );
}

#[test]
fn criterion_11_transform_catalogue() {
    let tol = 1e-8;
    let ys = [0.3, 0.9, 1.7, 3.1, 6.3];
    let catalogue = [
        Func::exp(1.0).unwrap(),
        Func::exp(2.5).unwrap(),
        Func::poly_exp(1, 1.0).unwrap(),
        Func::poly_exp(3, 2.0).unwrap(),
        Func::cexp(true),
        Func::cexp(false),
        Func::cos_t(),
        Func::sin_t(),
        Func::k0_scaled(),
    ];
    let tight = cfg().tightened(10.0);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for f in &catalogue {
        for &y in &ys {
            if let Some(s) = f.fc_closed() {
                let q = fourier_cosine(f, y, &tight).unwrap();
                worst = worst.max((q.value - s.eval(y)).norm());
                checked += 1;
            }
            if let Some(s) = f.laplace_closed() {
                let q = laplace(f, y, &tight).unwrap();
                worst = worst.max((q.value - s.eval(y)).norm());
                checked += 1;
            }
        }
    }
    verdict(
        "11 closed transform catalogue matches quadrature",
        worst <= tol && checked == 65,
        &format!("{checked} closed-form values, worst error {worst:.2e}, tol {tol:.0e}"),
    );
}
