//! Randomized structural properties of the operators: scaling covariance of
//! the PV Laplacian, the Leibnitz-rule defect, circle Pohozaev integrals,
//! the Hopf norm bound, and exact algebraic invariants of the data types.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fracverify::frac_line::{c1s, frac_gradient, fraclap_line_pv, SampledLineFunction};
use fracverify::hopf::{hopf_coefficients, hopf_hminus3_norm};
use fracverify::pohozaev::circle_pohozaev_residuals;
use fracverify::report::{self, VerificationReport};
use fracverify::spectral_circle::{CircleFunction, SeminormKind};

fn mollifier(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

fn mollifier_deriv(t: f64) -> f64 {
    if t.abs() < 1.0 {
        let q = 1.0 - t * t;
        mollifier(t) * (-2.0 * t / (q * q))
    } else {
        0.0
    }
}

/// Conjugate-symmetric random trig polynomial with 1/(1+k²) mode decay.
fn random_circle(rng: &mut ChaCha8Rng, bandwidth: usize, components: usize) -> CircleFunction {
    let modes = 2 * bandwidth + 1;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); components * modes];
    for j in 0..components {
        let base = j * modes;
        coeffs[base + bandwidth] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for k in 1..=bandwidth {
            let scale = 1.0 / (1.0 + (k * k) as f64);
            let c = Complex64::new(
                rng.gen_range(-1.0..1.0) * scale,
                rng.gen_range(-1.0..1.0) * scale,
            );
            coeffs[base + bandwidth + k] = c;
            coeffs[base + bandwidth - k] = c.conj();
        }
    }
    CircleFunction::from_coeffs(components, bandwidth, coeffs)
        .expect("conjugate-symmetric construction is always valid")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// u_λ(x) = u(λx) satisfies (−Δ)^s u_λ(x) = λ^{2s}·((−Δ)^s u)(λx).
    /// Both grids carry the same node count, so the two quadratures are
    /// related by exact rescaling and agree far below the 1e−6 gate.
    #[test]
    fn pv_laplacian_is_homogeneous(
        lambda in 0.4f64..3.0,
        s_idx in 0usize..3,
        amp in 0.5f64..2.0,
        width in 1.2f64..1.9,
        frac in -0.7f64..0.7,
    ) {
        let s = [0.25, 0.5, 0.75][s_idx];
        let n = 2048usize;
        let base =
            SampledLineFunction::from_scalar_fn(-2.5, 2.5, n, |x| amp * mollifier(x / width))
                .unwrap();
        let scaled = SampledLineFunction::from_scalar_fn(-2.5 / lambda, 2.5 / lambda, n, |x| {
            amp * mollifier(lambda * x / width)
        })
        .unwrap();

        // Probe at a node of the base grid; its image x/λ sits at the same
        // index of the scaled grid, so both evaluations snap consistently.
        let h = 5.0 / n as f64;
        let j = ((frac * width + 2.5) / h).round() as usize;
        let x = -2.5 + j as f64 * h;
        let lhs = fraclap_line_pv(&scaled, s, x / lambda).unwrap()[0];
        let rhs = lambda.powf(2.0 * s) * fraclap_line_pv(&base, s, x).unwrap()[0];
        prop_assert!(
            (lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1e-6),
            "λ = {lambda}, s = {s}, x = {x}: {lhs} vs {rhs}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// (−Δ)^s(uv) − u(−Δ)^s v − v(−Δ)^s u equals the carrier integral
    /// −C_{1,s}∫(u(x)−u(y))(v(x)−v(y))/|x−y|^{1+2s}dy pointwise.
    #[test]
    fn leibnitz_rule_defect_matches_carrier_integral(
        s_idx in 0usize..2,
        center_u in -0.6f64..0.6,
        center_v in -0.6f64..0.6,
        width_u in 0.8f64..1.4,
        width_v in 0.8f64..1.4,
        probe in -0.5f64..0.5,
    ) {
        let s = [0.25, 0.5][s_idx];
        let (a, b, n) = (-3.0f64, 3.0f64, 4096usize);
        let h = (b - a) / n as f64;
        let fu = |x: f64| mollifier((x - center_u) / width_u);
        let fv = |x: f64| mollifier((x - center_v) / width_v);
        let u = SampledLineFunction::from_scalar_fn(a, b, n, fu).unwrap();
        let v = SampledLineFunction::from_scalar_fn(a, b, n, fv).unwrap();
        let uv = SampledLineFunction::from_scalar_fn(a, b, n, |x| fu(x) * fv(x)).unwrap();

        let j = ((probe - a) / h).round() as usize;
        let x = a + j as f64 * h;
        let (ux, vx) = (fu(x), fv(x));
        let lap_uv = fraclap_line_pv(&uv, s, x).unwrap()[0];
        let lap_u = fraclap_line_pv(&u, s, x).unwrap()[0];
        let lap_v = fraclap_line_pv(&v, s, x).unwrap()[0];
        let lhs = lap_uv - ux * lap_v - vx * lap_u;

        // Carrier integral over ℝ: punctured trapezoid on [a,b], diagonal
        // limit fill at s = 1/2, analytic exterior tails where u,v ≡ 0.
        let mut integral = 0.0;
        for i in 0..=n {
            if i == j {
                continue;
            }
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            let y = a + i as f64 * h;
            let d = (x - y).abs();
            integral +=
                w * (ux - u.sample(0, i)) * (vx - v.sample(0, i)) / d.powf(1.0 + 2.0 * s);
        }
        let mut val = integral * h;
        if s == 0.5 {
            let du = mollifier_deriv((x - center_u) / width_u) / width_u;
            let dv = mollifier_deriv((x - center_v) / width_v) / width_v;
            val += h * du * dv;
        }
        val += ux * vx * ((x - a).powf(-2.0 * s) + (b - x).powf(-2.0 * s)) / (2.0 * s);
        let rhs = -c1s(s).unwrap() * val;

        let scale = lap_uv
            .abs()
            .max((ux * lap_v).abs())
            .max((vx * lap_u).abs())
            .max(rhs.abs())
            .max(1e-9);
        prop_assert!(
            (lhs - rhs).abs() <= 1e-3 * scale,
            "s = {s}, x = {x}: defect {lhs} vs carrier {rhs} (scale {scale})"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// ∫u′(−Δ)^{1/2}u dθ and ∫u′(−Δ)^{1/2}u sin(θ−δ)dθ vanish for every
    /// trig polynomial and every rotation angle δ.
    #[test]
    fn circle_pohozaev_integrals_vanish(
        seed in any::<u64>(),
        bandwidth in 1usize..=10,
        delta in 0.0f64..(2.0 * PI),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_circle(&mut rng, bandwidth, 1);
        let (plain, rotated) = circle_pohozaev_residuals(&u, delta).unwrap();
        prop_assert!(plain.abs() < 1e-10, "plain integral {plain}");
        prop_assert!(rotated.abs() < 1e-10, "rotated integral {rotated}");
    }

    /// ‖ℋ‖²_{H^{−3}} ≤ (π²/3)·[u]⁴_{Ḣ^{1/2}} on random trig polynomials.
    #[test]
    fn hopf_norm_obeys_seminorm_bound(
        seed in any::<u64>(),
        bandwidth in 1usize..=6,
        components in 1usize..=2,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_circle(&mut rng, bandwidth, components);
        let norm = hopf_hminus3_norm(&hopf_coefficients(&u));
        let semi = u.seminorm(SeminormKind::Sobolev(0.5)).value;
        let bound = PI * PI / 3.0 * semi.powi(4);
        prop_assert!(
            norm * norm <= bound * (1.0 + 1e-12) + 1e-15,
            "‖ℋ‖² = {} exceeds bound {bound}",
            norm * norm
        );
    }

    /// d_s is exactly antisymmetric with zero diagonal for arbitrary samples.
    #[test]
    fn gradient_antisymmetry_is_exact(
        samples in prop::collection::vec(-10.0f64..10.0, 8..40),
        s in 0.0f64..=1.0,
    ) {
        let nodes = samples.len();
        let u = SampledLineFunction::from_samples(0.0, 1.0, vec![samples]).unwrap();
        let g = frac_gradient(&u, s).unwrap();
        for i in 0..nodes {
            prop_assert_eq!(g.value(0, i, i), 0.0);
            for j in 0..nodes {
                prop_assert_eq!(g.value(0, i, j), -g.value(0, j, i));
            }
        }
    }

    /// Report serialization round-trips through JSON without loss.
    #[test]
    fn report_json_round_trip(
        check in "[a-z_]{1,16}",
        residual in -1e6f64..1e6,
        tolerance in 1e-12f64..1.0,
        resolution in 1usize..100_000,
        key in "[a-z]{1,8}",
        value in "[a-z0-9 .]{0,12}",
    ) {
        let reports = vec![
            VerificationReport::new(check, resolution, residual, tolerance).with_param(key, value),
        ];
        let text = report::to_json(&reports).unwrap();
        let back = report::from_json(&text).unwrap();
        prop_assert_eq!(back, reports);
    }
}
