//! The ½-fractional Hopf differential on the circle.
//!
//! For a real trig polynomial u: S¹ → ℝ^m with coefficients û(k), |k| ≤ N,
//! the positive-frequency part of v = (−Δ)^{1/2}u has v̂₊(k) = k·û(k) for
//! k ≥ 1, and the Hopf coefficients are the bilinear (non-conjugated)
//! square
//!
//!   ℋ(k) = Σ_{a+b=k, a,b ≥ 1} a·û(a) ·_{ℂ^m} b·û(b),   k = 1..2N,
//!
//! so ℋ(1) = 0 always.  u is a stationary point of the half Dirichlet
//! energy exactly when every ℋ(k) vanishes, and ℋ controls the conformality
//! defect of the harmonic extension ũ: with the generating slice
//! S_r(θ) = Σ_k r^k ℋ(k) e^{ikθ}, the exact finite-sum identities
//!
//!   |∂_r ũ|² − (1/r²)|∂_θ ũ|² = (4/r²)·Re S_r,
//!   ∂_θ ũ · ∂_r ũ = −(2/r)·Im S_r,
//!
//! hold on every circle r < 1 (write ∂_r ũ − (i/r)∂_θ ũ; only positive
//! frequencies survive, and its bilinear square is (4/r²)S_r).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral_circle::{CircleFunction, SeminormKind};

#[derive(Debug, Clone)]
pub struct HopfCoefficients {
    bandwidth: usize,
    /// values[k − 1] = ℋ(k), k = 1..=2N.
    values: Vec<Complex64>,
}

impl HopfCoefficients {
    pub fn source_bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// ℋ(k); zero outside the retained range 1..=2N.
    pub fn value(&self, k: usize) -> Complex64 {
        if k >= 1 && k <= self.values.len() {
            self.values[k - 1]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> (f64, usize) {
        let mut best = (0.0f64, 1usize);
        for (idx, v) in self.values.iter().enumerate() {
            if v.norm() > best.0 {
                best = (v.norm(), idx + 1);
            }
        }
        best
    }

    /// The generating slice S_r(θ_j) = Σ_k r^k ℋ(k) e^{ikθ_j} on the
    /// angular grid θ_j = 2πj/p.
    pub fn generating_slice(&self, r: f64, p: usize) -> Result<Vec<Complex64>> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::RadiusOutOfRange { r });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); p];
        for (j, slot) in out.iter_mut().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / p as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, v) in self.values.iter().enumerate() {
                let k = (idx + 1) as f64;
                acc += v * r.powf(k) * Complex64::new(0.0, k * theta).exp();
            }
            *slot = acc;
        }
        Ok(out)
    }
}

/// Exact O(N²) convolution of the one-sided weighted coefficients.
pub fn hopf_coefficients(u: &CircleFunction) -> HopfCoefficients {
    let n = u.bandwidth();
    let mut values = vec![Complex64::new(0.0, 0.0); 2 * n];
    for k in 2..=(2 * n) {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 1..k {
            let b = k - a;
            if a > n || b > n {
                continue;
            }
            let mut dot = Complex64::new(0.0, 0.0);
            for c in 0..u.components() {
                dot += u.coeff(c, a as i64) * u.coeff(c, b as i64);
            }
            acc += (a as f64) * (b as f64) * dot;
        }
        values[k - 1] = acc;
    }
    HopfCoefficients {
        bandwidth: n,
        values,
    }
}

/// (Σ_k |ℋ(k)|² (1 + k²)^{−3})^{1/2}.
pub fn hopf_hminus3_norm(h: &HopfCoefficients) -> f64 {
    h.values
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let k = (idx + 1) as f64;
            v.norm_sqr() * (1.0 + k * k).powi(-3)
        })
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct StationarityVerdict {
    pub pass: bool,
    pub max_abs: f64,
    pub argmax_k: usize,
    /// The threshold actually applied: τ scaled by max(1, [u]²_{Ḣ^{1/2}}).
    pub tau_effective: f64,
}

/// Coefficientwise stationarity test: pass iff max_k |ℋ(k)| ≤ τ_eff.
pub fn is_stationary(u: &CircleFunction, tau: f64) -> Result<StationarityVerdict> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "stationarity tolerance must be positive, got {tau}"
        )));
    }
    let h = hopf_coefficients(u);
    let (max_abs, argmax_k) = h.max_abs();
    let scale = u.seminorm(SeminormKind::Sobolev(0.5)).value.powi(2);
    let tau_effective = tau * scale.max(1.0);
    Ok(StationarityVerdict {
        pass: max_abs <= tau_effective,
        max_abs,
        argmax_k,
        tau_effective,
    })
}

#[derive(Debug, Clone)]
pub struct ConformalityReport {
    /// sup over the polar grid of |∂_θ ũ · ∂_r ũ|.
    pub orthogonality_residual: f64,
    /// sup over the polar grid of ||(1/r)∂_θ ũ| − |∂_r ũ||.
    pub modulus_residual: f64,
    pub radii: Vec<f64>,
    pub angular_resolution: usize,
}

/// Conformality diagnostics of the harmonic extension: per-slice spectral
/// evaluation of ∂_r ũ and (1/r)∂_θ ũ.
pub fn conformality_report(
    u: &CircleFunction,
    radii: &[f64],
    angular_resolution: usize,
) -> Result<ConformalityReport> {
    let disk = crate::spectral_circle::poisson_extend(u, radii, angular_resolution)?;
    let mut orth: f64 = 0.0;
    let mut modulus: f64 = 0.0;
    for &r in radii {
        let dr = disk.radial_derivative_coeffs(r)?.synthesize(angular_resolution)?;
        let dtheta = disk.angular_derivative_coeffs(r)?.synthesize(angular_resolution)?;
        for j in 0..angular_resolution {
            let mut dot = 0.0;
            let mut nr = 0.0;
            let mut nt = 0.0;
            for c in 0..u.components() {
                dot += dtheta[c][j] * dr[c][j];
                nr += dr[c][j] * dr[c][j];
                nt += dtheta[c][j] * dtheta[c][j];
            }
            orth = orth.max(dot.abs());
            modulus = modulus.max((nt.sqrt() / r - nr.sqrt()).abs());
        }
    }
    Ok(ConformalityReport {
        orthogonality_residual: orth,
        modulus_residual: modulus,
        radii: radii.to_vec(),
        angular_resolution,
    })
}

/// Writes the coefficients as CSV rows `k,re,im` with a header.
pub fn write_hopf_csv<W: std::io::Write>(h: &HopfCoefficients, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "re", "im"])
        .map_err(|e| Error::Csv(e.to_string()))?;
    for (idx, v) in h.values.iter().enumerate() {
        w.write_record([
            (idx + 1).to_string(),
            format!("{:.17e}", v.re),
            format!("{:.17e}", v.im),
        ])
        .map_err(|e| Error::Csv(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
