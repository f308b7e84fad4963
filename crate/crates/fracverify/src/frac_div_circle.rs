//! Fractional divergences on the circle in product form.
//!
//! Three routes to the same pairings live here and keep each other honest:
//!
//! * the regularized kernel K^s_r(z) = −(1/2π)Σ_{k≠0}|k|^{2s} r^{|k|}cos(kz),
//!   an Abel summation of the multiplier series whose action on the mode
//!   e^{ikθ} is r^{|k|}|k|^{2s}, the defining property that fixes its
//!   normalization (as r → 1 at s = 1/2 it converges to 1/(4π sin²(z/2)));
//! * the explicit product formula div_s(a(x)·b(y))[φ] =
//!   ∫(b·(−Δ)^s a − a·(−Δ)^s b)φ dθ, evaluated spectrally;
//! * the commutator G_{w,φ} = φ·(−Δ)^s w − (−Δ)^s(wφ), whose pairing
//!   ⟨G_{a,φ}, b⟩ extends the product divergence and must agree with it.
//!
//! The commutator sign is the one produced by the defining kernel integral
//! through the decomposition
//! w(y)(φ(y) − φ(x)) = (wφ(y) − wφ(x)) − φ(x)(w(y) − w(x)).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral_circle::{kernel_half, wrap_angle, CircleFunction};

/// Abel parameter used by quadratures when the caller does not pick one.
pub const ABEL_DEFAULT_RADIUS: f64 = 0.999;

/// Series cutoff: modes with r^k·k^{2s} below this are dropped.
const TRUNCATION: f64 = 1e-16;

/// The Abel-regularized kernel K^s_r for s ∈ (0, 1/2).
#[derive(Debug, Clone, Copy)]
pub struct RegularizedKernel {
    s: f64,
    r: f64,
    k_max: usize,
}

impl RegularizedKernel {
    pub fn new(s: f64, r: f64) -> Result<Self> {
        if !(s > 0.0 && s < 0.5) {
            return Err(Error::SOutOfRange { s, range: "(0, 1/2)" });
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::RadiusOutOfRange { r });
        }
        // Smallest K with r^K·K^{2s} < cutoff; the log form keeps the search
        // overflow-free.
        let below = |k: f64| k * r.ln() + 2.0 * s * k.ln() < TRUNCATION.ln();
        let mut hi = 64.0;
        while !below(hi) {
            hi *= 2.0;
        }
        let mut lo = 1.0;
        while hi - lo > 1.0 {
            let mid = (lo + hi) / 2.0;
            if below(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(RegularizedKernel {
            s,
            r,
            k_max: hi as usize,
        })
    }

    pub fn exponent(&self) -> f64 {
        self.s
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn series_length(&self) -> usize {
        self.k_max
    }

    /// K^s_r(z) = −(1/π)Σ_{k≥1} k^{2s} r^k cos(kz); errors on z ≡ 0 mod 2π
    /// where the limiting kernel is singular and the regularized series is
    /// dominated by truncation noise.
    pub fn eval(&self, z: f64) -> Result<f64> {
        let w = wrap_angle(z);
        if w.abs() < 1e-12 {
            return Err(Error::KernelAtOrigin { z });
        }
        Ok(self.eval_unchecked(w))
    }

    fn eval_unchecked(&self, z: f64) -> f64 {
        // cos(kz) by the three-term recurrence; r^k·k^{2s} accumulated
        // incrementally.
        let two_cos = 2.0 * z.cos();
        let mut c_prev = 1.0; // cos(0·z)
        let mut c_curr = z.cos(); // cos(1·z)
        let mut acc = 0.0;
        let mut rk = self.r;
        for k in 1..=self.k_max {
            acc += (k as f64).powf(2.0 * self.s) * rk * c_curr;
            rk *= self.r;
            let c_next = two_cos * c_curr - c_prev;
            c_prev = c_curr;
            c_curr = c_next;
        }
        -acc / PI
    }

    /// Fitted bracketing constants (b, B) with
    /// b/|sin(z/2)|^{1+2s} ≤ K^s_r(z) ≤ B/|sin(z/2)|^{1+2s} on [z_min, π],
    /// obtained by scanning the ratio on a fine grid.
    pub fn bracketing_constants(&self, z_min: f64) -> (f64, f64) {
        let samples = 512;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..=samples {
            let z = z_min + (PI - z_min) * i as f64 / samples as f64;
            let ratio = self.eval_unchecked(z) * (z / 2.0).sin().abs().powf(1.0 + 2.0 * self.s);
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        (lo, hi)
    }
}

/// Pointwise kernel evaluation; the operation-level entry to
/// `RegularizedKernel::eval`.
pub fn kernel_ks_value(s: f64, z: f64, r: f64) -> Result<f64> {
    RegularizedKernel::new(s, r)?.eval(z)
}

/// Kernel values tabulated on the half-offset quadrature grid
/// z_j = (j + ½)·2π/P.  Tables are memoized per (s, r, P): the series has
/// tens of thousands of terms near r = 0.999 and the quadratures reuse the
/// same grid many times.
#[derive(Debug, Clone)]
pub struct KernelTable {
    values: Arc<Vec<f64>>,
}

impl KernelTable {
    pub fn eval_offset(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn kernel_cache() -> &'static Mutex<HashMap<(u64, u64, usize), Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64, usize), Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches) the offset-grid table of K^s_r at `resolution` nodes.
pub fn kernel_ks(s: f64, r: f64, resolution: usize) -> Result<KernelTable> {
    let key = (s.to_bits(), r.to_bits(), resolution);
    if let Some(values) = kernel_cache().lock().unwrap().get(&key) {
        return Ok(KernelTable {
            values: values.clone(),
        });
    }
    let kernel = RegularizedKernel::new(s, r)?;
    let h = 2.0 * PI / resolution as f64;
    let values: Vec<f64> = (0..resolution)
        .into_par_iter()
        .map(|j| kernel.eval_unchecked(wrap_angle((j as f64 + 0.5) * h)))
        .collect();
    let values = Arc::new(values);
    kernel_cache().lock().unwrap().insert(key, values.clone());
    Ok(KernelTable { values })
}

fn check_s_divergence(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 0.5) {
        return Err(Error::SOutOfRange { s, range: "(0, 1/2]" });
    }
    Ok(())
}

/// div_s(a(x)·b(y))[φ] = ∫ (b·(−Δ)^s a − a·(−Δ)^s b)·φ dθ, spectrally.
///
/// Internal products carry bandwidth N_a + N_b (plus N_φ in the pairing);
/// `max_bandwidth` lets a caller forbid that growth, in which case the
/// overflow is reported instead of silently truncated.
pub fn div_s_product(
    a: &CircleFunction,
    b: &CircleFunction,
    s: f64,
    phi: &CircleFunction,
    max_bandwidth: Option<usize>,
) -> Result<f64> {
    check_s_divergence(s)?;
    let need = a.bandwidth() + b.bandwidth();
    if let Some(cap) = max_bandwidth {
        if need > cap {
            return Err(Error::BandwidthOverflow { need, cap });
        }
    }
    let la = a.fractional_laplacian(s)?;
    let lb = b.fractional_laplacian(s)?;
    let first = b.dot(&la)?;
    let second = a.dot(&lb)?;
    let integrand = first.add_scaled(-1.0, &second)?;
    integrand.inner_l2(phi)
}

/// The commutator G_{w,φ} = φ·(−Δ)^s w − (−Δ)^s(wφ) with its operands.
#[derive(Debug, Clone)]
pub struct CommutatorResult {
    pub g: CircleFunction,
    pub w: CircleFunction,
    pub phi: CircleFunction,
    pub s: f64,
}

/// Computes G_{w,φ} spectrally for s ∈ {1/4, 1/2}.
pub fn commutator_g(w: &CircleFunction, phi: &CircleFunction, s: f64) -> Result<CommutatorResult> {
    if (s - 0.25).abs() > 1e-14 && (s - 0.5).abs() > 1e-14 {
        return Err(Error::InvalidParameter(format!(
            "commutator exponent must be 1/4 or 1/2, got {s}"
        )));
    }
    let wphi = w.product_scalar(phi)?;
    let g = w
        .fractional_laplacian(s)?
        .product_scalar(phi)?
        .add_scaled(-1.0, &wphi.fractional_laplacian(s)?)?;
    Ok(CommutatorResult {
        g,
        w: w.clone(),
        phi: phi.clone(),
        s,
    })
}

impl CommutatorResult {
    /// Sup-norm difference between the spectral G and the defining kernel
    /// integral PV ∫ w(y)(φ(y) − φ(x))K^s(y−x)dy evaluated by the
    /// half-offset rule at `resolution` nodes (grid points x).
    pub fn kernel_quadrature_residual(&self, resolution: usize) -> Result<f64> {
        let p = resolution;
        let h = 2.0 * PI / p as f64;
        let exact_half = (self.s - 0.5).abs() < 1e-14;
        let table = if exact_half {
            None
        } else {
            Some(kernel_ks(self.s, ABEL_DEFAULT_RADIUS, p)?)
        };
        let g_grid = self.g.synthesize(p)?;
        let m = self.w.components();

        let sup = (0..p)
            .into_par_iter()
            .map(|i| {
                let x = i as f64 * h;
                let phix = self.phi.eval_at(x)[0];
                let mut worst: f64 = 0.0;
                let wy = self
                    .w
                    .synthesize_phased(p, x + h / 2.0)
                    .expect("resolution checked by synthesize");
                let phiy = self
                    .phi
                    .synthesize_phased(p, x + h / 2.0)
                    .expect("resolution checked by synthesize");
                for c in 0..m {
                    let mut acc = 0.0;
                    for j in 0..p {
                        let z = (j as f64 + 0.5) * h;
                        let k = match &table {
                            None => kernel_half(z),
                            Some(t) => t.eval_offset(j),
                        };
                        acc += wy[c][j] * (phiy[0][j] - phix) * k;
                    }
                    worst = worst.max((acc * h - g_grid[c][i]).abs());
                }
                worst
            })
            .reduce(|| 0.0, f64::max);
        Ok(sup)
    }
}

/// Extended pairing div_s[a(x)·b(y)][φ] := ⟨G_{a,φ}, b⟩_{L²}.
pub fn div_extended_pair(
    a: &CircleFunction,
    b: &CircleFunction,
    s: f64,
    phi: &CircleFunction,
) -> Result<f64> {
    let g = commutator_g(a, phi, s)?;
    g.g.inner_l2(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn kernel_is_even() {
        let k = RegularizedKernel::new(0.25, 0.9).unwrap();
        for &z in &[0.3, 1.0, 2.5] {
            assert_abs_diff_eq!(k.eval(z).unwrap(), k.eval(-z).unwrap(), epsilon = 1e-13);
        }
    }

    #[test]
    fn kernel_rejects_origin() {
        let k = RegularizedKernel::new(0.25, 0.9).unwrap();
        assert!(matches!(k.eval(0.0), Err(Error::KernelAtOrigin { .. })));
        assert!(matches!(
            k.eval(2.0 * PI),
            Err(Error::KernelAtOrigin { .. })
        ));
    }

    #[test]
    fn kernel_action_approximates_multiplier() {
        // PV ∫ (cos x − cos y) K^s_r(x−y) dy ≈ |1|^{2s} cos x = cos x, with
        // the Abel deficit 1 − r^1 = 1e−3 as the dominant error.
        let u = CircleFunction::cosine(1);
        for &x in &[0.0, 1.1, 3.7] {
            let v = crate::spectral_circle::pv_fraclap_circle(&u, 0.25, x, 2048).unwrap();
            assert_abs_diff_eq!(v[0], x.cos(), epsilon = 1e-2);
        }
    }

    #[test]
    fn kernel_abel_limit_is_quarter_pi_kernel_at_half() {
        // At s just below 1/2 and r close to 1 the regularized kernel
        // approaches 1/(4π sin²(z/2)); checked at z = π where that value is
        // 1/(4π).  This pins the normalization the closed-form kernel uses.
        let k = RegularizedKernel::new(0.4999, 0.9999).unwrap();
        let v = k.eval(PI).unwrap();
        assert_abs_diff_eq!(v, 1.0 / (4.0 * PI), epsilon = 2e-3);
    }

    #[test]
    fn bracketing_constants_positive() {
        let k = RegularizedKernel::new(0.25, ABEL_DEFAULT_RADIUS).unwrap();
        let (b, big_b) = k.bracketing_constants(0.1);
        assert!(b.is_finite() && big_b.is_finite());
        assert!(b > 0.0, "lower bracket {b} not positive");
        assert!(big_b >= b);
    }

    #[test]
    fn div_product_antisymmetric_diagonal() {
        let a = CircleFunction::cosine(2);
        let phi = CircleFunction::sine(1);
        let v = div_s_product(&a, &a, 0.5, &phi, None).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn div_product_frozen_values() {
        // a=cos θ, b=sin 2θ, s=1/2, φ=cos θ sin 2θ: the integrand reduces to
        // −cos²θ sin²2θ with integral −π/2.
        let a = CircleFunction::cosine(1);
        let b = CircleFunction::sine(2);
        let phi = a.product_scalar(&b).unwrap();
        let v = div_s_product(&a, &b, 0.5, &phi, None).unwrap();
        assert_abs_diff_eq!(v, -PI / 2.0, epsilon = 1e-12);

        // a ≡ 1, b = cos θ, φ = cos θ: ∫(0 − cos θ)cos θ = −π.
        let one = CircleFunction::constant(&[1.0]);
        let c = CircleFunction::cosine(1);
        let v2 = div_s_product(&one, &c, 0.5, &c, None).unwrap();
        assert_abs_diff_eq!(v2, -PI, epsilon = 1e-12);
    }

    #[test]
    fn div_product_respects_bandwidth_cap() {
        let a = CircleFunction::cosine(3);
        let b = CircleFunction::sine(2);
        let phi = CircleFunction::cosine(1);
        assert!(matches!(
            div_s_product(&a, &b, 0.5, &phi, Some(4)),
            Err(Error::BandwidthOverflow { need: 5, cap: 4 })
        ));
        assert!(div_s_product(&a, &b, 0.5, &phi, Some(5)).is_ok());
    }

    #[test]
    fn commutator_vanishes_for_constant_phi() {
        let w = CircleFunction::sine(3);
        let phi = CircleFunction::constant(&[2.0]);
        let g = commutator_g(&w, &phi, 0.5).unwrap();
        assert!(g.g.l2_norm_sq() < 1e-28);
    }

    #[test]
    fn commutator_cosine_frozen() {
        // w = φ = cos θ, s = 1/2:
        //   G = cos θ·cos θ − (−Δ)^{1/2}(cos²θ)
        //     = (1/2 + cos 2θ/2) − cos 2θ = 1/2 − cos 2θ/2,
        // i.e. Ĝ(0) = 1/2, Ĝ(±2) = −1/4.
        let w = CircleFunction::cosine(1);
        let g = commutator_g(&w, &w, 0.5).unwrap().g;
        assert_abs_diff_eq!(g.coeff(0, 0).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(g.coeff(0, 2).re, -0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(g.coeff(0, -2).re, -0.25, epsilon = 1e-14);
        assert!(g.coeff(0, 1).norm() < 1e-14);
    }

    #[test]
    fn commutator_matches_kernel_quadrature_at_half() {
        let w = CircleFunction::cosine(1);
        let phi = CircleFunction::sine(2);
        let g = commutator_g(&w, &phi, 0.5).unwrap();
        let sup = g.kernel_quadrature_residual(1024).unwrap();
        assert!(sup < 1e-10, "kernel route deviates by {sup}");
    }

    #[test]
    fn extended_pair_equals_product_form() {
        let a = CircleFunction::cosine(1);
        let b = CircleFunction::sine(2);
        let phi = a.product_scalar(&b).unwrap();
        for &s in &[0.25, 0.5] {
            let lhs = div_extended_pair(&a, &b, s, &phi).unwrap();
            let rhs = div_s_product(&a, &b, s, &phi, None).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
        let lhs = div_extended_pair(&a, &b, 0.5, &phi).unwrap();
        assert_abs_diff_eq!(lhs, -PI / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn extended_pair_trivial_zeroes() {
        let a = CircleFunction::cosine(2);
        let phi = CircleFunction::sine(1);
        assert_abs_diff_eq!(
            div_extended_pair(&a, &a, 0.25, &phi).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        let b = CircleFunction::sine(3);
        let const_phi = CircleFunction::constant(&[5.0]);
        assert_abs_diff_eq!(
            div_extended_pair(&a, &b, 0.25, &const_phi).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn bilinearity_exact() {
        let a1 = CircleFunction::cosine(1);
        let a2 = CircleFunction::sine(2);
        let b = CircleFunction::cosine(2);
        let phi = CircleFunction::sine(1);
        let combo = a1.add_scaled(2.5, &a2).unwrap();
        let lhs = div_s_product(&combo, &b, 0.5, &phi, None).unwrap();
        let rhs = div_s_product(&a1, &b, 0.5, &phi, None).unwrap()
            + 2.5 * div_s_product(&a2, &b, 0.5, &phi, None).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);

        let anti = div_s_product(&b, &combo, 0.5, &phi, None).unwrap();
        assert_abs_diff_eq!(anti, -lhs, epsilon = 1e-13);
    }

    #[test]
    fn commutator_applies_component_wise() {
        // The spectral G of a vector-valued w applies component-wise.
        let mut w = CircleFunction::zero(2, 2);
        *w.coeff_mut(0, 1) = Complex64::new(0.5, 0.0);
        *w.coeff_mut(0, -1) = Complex64::new(0.5, 0.0);
        *w.coeff_mut(1, 2) = Complex64::new(0.0, -0.5);
        *w.coeff_mut(1, -2) = Complex64::new(0.0, 0.5);
        let phi = CircleFunction::cosine(1);
        let g = commutator_g(&w, &phi, 0.5).unwrap();
        let g0 = commutator_g(&w.component(0), &phi, 0.5).unwrap();
        let g1 = commutator_g(&w.component(1), &phi, 0.5).unwrap();
        for k in -3i64..=3 {
            assert!((g.g.coeff(0, k) - g0.g.coeff(0, k)).norm() < 1e-15);
            assert!((g.g.coeff(1, k) - g1.g.coeff(0, k)).norm() < 1e-15);
        }
    }
}
