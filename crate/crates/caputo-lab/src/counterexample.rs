//! The bounded non-extendable solution and its quantitative witnesses.
//!
//! The construction assembles u(t) = v₁ + Σ_{n≥2} z_n(t) v_n on a truncated
//! sequence space, its Caputo derivative, the scalar field H, the clamp φ and
//! the right-hand side f_α(t,x) = φ(H(t,x))·cD^α u(t). The witness scans
//! check everything that is checkable at finite truncation: boundedness, the
//! solution residual, the non-Cauchy gaps at the accumulation point, the
//! growth of ‖cD^α u(τ_n)‖ with its kernel lower bounds, and the bounded
//! sequence with unbounded image.
//!
//! A completed bump keeps contributing to cD^α u past its support: the memory
//! integral over the full history is what gets evaluated, not just the
//! adjacent terms of the piecewise display.

use crate::bump_family::{find_tau, BumpFamily};
use crate::frac_kernel::{FracOrder, Quadrature};
use crate::sequence_space::{axpy, Basis, NormFlavor, SeqVec};
use crate::{Error, Result};
use serde::Serialize;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// The assembled tuple (α, {z_n}, {v_n}, quadrature).
#[derive(Debug, Clone)]
pub struct Construction {
    order: FracOrder,
    family: BumpFamily,
    basis: Basis,
    quad: Quadrature,
}

/// Per-n output of the hypothesis-(P) scan.
#[derive(Debug, Clone, Serialize)]
pub struct PScan {
    /// Bump indices n = 2..N−2.
    pub indices: Vec<usize>,
    /// τ_n, the rising-edge derivative maxima.
    pub taus: Vec<f64>,
    /// ‖cD^α u(τ_n)‖ (Euclidean).
    pub caputo_norms: Vec<f64>,
    /// For each n, the kernel lower bounds over admissible k = 2..n−1.
    pub lower_bounds: Vec<Vec<f64>>,
}

/// The bounded sequence (s_l, y_l) and the norms of its image under f_α.
#[derive(Debug, Clone, Serialize)]
pub struct ImageWitness {
    pub times: Vec<f64>,
    pub y_norms: Vec<f64>,
    pub phi_values: Vec<f64>,
    pub image_norms: Vec<f64>,
    pub caputo_norms: Vec<f64>,
}

/// Aggregate of the headline claims, one record per experiment run.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub sup_norm_u: f64,
    pub sigma_gaps: Vec<f64>,
    pub caputo_norms_at_tau: Vec<f64>,
    /// Max kernel lower bound per n (empty entries dropped).
    pub lower_bounds: Vec<f64>,
    pub image_norms: Vec<f64>,
    pub max_residual: f64,
}

/// φ(t) = min{t+1, 1}; globally Lipschitz with constant 1.
pub fn phi(t: f64) -> f64 {
    (t + 1.0).min(1.0)
}

impl Construction {
    pub fn new(
        order: FracOrder,
        family: BumpFamily,
        basis: Basis,
        quad: Quadrature,
    ) -> Result<Self> {
        let need = family.max_bump_index() + 1;
        if basis.dim() < need {
            return Err(Error::DimensionMismatch(basis.dim(), need));
        }
        let s = family.schedule();
        if s.t(1) + s.t(2) <= 1.0 {
            return Err(Error::InvalidConfig(
                "schedule must satisfy t_1 + t_2 > 1".into(),
            ));
        }
        Ok(Self {
            order,
            family,
            basis,
            quad,
        })
    }

    /// Standard setup: dyadic schedule with `n_points` points, basis of the
    /// same dimension.
    pub fn standard(alpha: f64, n_points: usize, flavor: NormFlavor, quad: Quadrature) -> Result<Self> {
        let order = FracOrder::new(alpha)?;
        let schedule = crate::bump_family::make_schedule(n_points)?;
        let family = crate::bump_family::make_family(schedule, &quad)?;
        let basis = Basis::new(n_points, flavor)?;
        Self::new(order, family, basis, quad)
    }

    pub fn order(&self) -> &FracOrder {
        &self.order
    }

    pub fn family(&self) -> &BumpFamily {
        &self.family
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn quad(&self) -> &Quadrature {
        &self.quad
    }

    /// Largest time at which every active bump is constructible:
    /// σ_{N−2} = (t_{N−2} + t_{N−1})/2, the start of the first bump the
    /// truncation cannot represent.
    pub fn horizon(&self) -> f64 {
        let s = self.family.schedule();
        let n_max = self.family.max_bump_index();
        0.5 * (s.t(n_max) + s.t(n_max + 1))
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let horizon = self.horizon();
        if !(0.0..=horizon).contains(&t) {
            return Err(Error::TimeOutOfRange { t, horizon });
        }
        Ok(())
    }

    /// u(t) = v₁ + Σ_{n≥2} z_n(t) v_n; at most three bump terms are active.
    pub fn u_at(&self, t: f64) -> Result<SeqVec> {
        self.check_time(t)?;
        let mut u = self.basis.zero();
        u.coords_mut()[0] = 1.0;
        for n in 2..=self.family.max_bump_index() {
            let v = self.family.value(n, t);
            if v != 0.0 {
                u.coords_mut()[n - 1] = v;
            }
        }
        Ok(u)
    }

    /// Componentwise Caputo derivative of u: coordinate n carries
    /// cD^α z_n(t), computed over the exact support of z_n′; coordinate 1 is
    /// always 0.
    pub fn caputo_u_at(&self, t: f64) -> Result<SeqVec> {
        self.check_time(t)?;
        let mut out = self.basis.zero();
        for n in 2..=self.family.max_bump_index() {
            if t <= self.family.deriv_supports(n)[0].0 {
                continue;
            }
            out.coords_mut()[n - 1] = self.family.caputo_bump(&self.order, n, t, &self.quad)?;
        }
        Ok(out)
    }

    /// H(t, x): the weighted coordinate sum with linear interpolation across
    /// each schedule gap; for t ≥ 1 the full truncated series.
    pub fn h_at(&self, t: f64, x: &SeqVec) -> f64 {
        let dim = x.dim();
        let coord = |i: usize| if i >= 1 && i <= dim { x.coords()[i - 1] } else { 0.0 };
        if t >= 1.0 {
            return (1..=dim).map(|i| coord(i) / (i * i) as f64).sum();
        }
        if t < 0.5 {
            // t < t_1
            return coord(1);
        }
        // dyadic lookup: k with t_k <= t < t_{k+1}, t_m = 1 - 2^{-m}
        let mut k = (-(1.0 - t).log2()).floor() as i32;
        let t_of = |m: i32| 1.0 - 0.5f64.powi(m);
        while k > 1 && t < t_of(k) {
            k -= 1;
        }
        while t >= t_of(k + 1) {
            k += 1;
        }
        let k = k as usize;
        let mut acc: f64 = (1..=k.min(dim)).map(|i| coord(i) / (i * i) as f64).sum();
        if k + 1 <= dim {
            let tk = t_of(k as i32);
            let tk1 = t_of(k as i32 + 1);
            acc += coord(k + 1) / ((k + 1) * (k + 1)) as f64 * (t - tk) / (tk1 - tk);
        }
        acc
    }

    /// f_α(t, x) = φ(H(t, x)) · cD^α u(t).
    pub fn f_alpha(&self, t: f64, x: &SeqVec) -> Result<SeqVec> {
        let scale = phi(self.h_at(t, x));
        Ok(self.caputo_u_at(t)?.scale(scale))
    }

    fn residual_at(&self, t: f64) -> Result<f64> {
        let u = self.u_at(t)?;
        let lhs = self.caputo_u_at(t)?;
        // f_α(t, u) = φ(H(t,u))·cD^α u; reuse the Caputo evaluation
        let rhs = lhs.scale(phi(self.h_at(t, &u)));
        Ok(lhs.sub(&rhs)?.norm())
    }

    /// Max over samples of ‖cD^α u(t) − f_α(t, u(t))‖, sequential.
    pub fn residual_check_seq(&self, sample_times: &[f64]) -> Result<f64> {
        let mut worst = 0.0f64;
        for &t in sample_times {
            worst = worst.max(self.residual_at(t)?);
        }
        Ok(worst)
    }

    /// Max over samples of ‖cD^α u(t) − f_α(t, u(t))‖.
    #[cfg(feature = "parallel")]
    pub fn residual_check(&self, sample_times: &[f64]) -> Result<f64> {
        let residuals: Result<Vec<f64>> = sample_times
            .par_iter()
            .map(|&t| self.residual_at(t))
            .collect();
        Ok(residuals?.into_iter().fold(0.0, f64::max))
    }

    #[cfg(not(feature = "parallel"))]
    pub fn residual_check(&self, sample_times: &[f64]) -> Result<f64> {
        self.residual_check_seq(sample_times)
    }

    /// Gaps ‖u(σ_n) − u(σ_{n+1})‖ at the plateau midpoints
    /// σ_n = (t_n + t_{n+1})/2, for n = 2..N−3.
    pub fn non_cauchy_witness(&self) -> Result<Vec<f64>> {
        let s = self.family.schedule();
        let n_max = self.family.max_bump_index();
        if n_max < 4 {
            return Err(Error::ScheduleTooShort(s.len()));
        }
        let sigma = |n: usize| 0.5 * (s.t(n) + s.t(n + 1));
        let mut gaps = Vec::new();
        for n in 2..=n_max - 1 {
            let a = self.u_at(sigma(n))?;
            let b = self.u_at(sigma(n + 1))?;
            gaps.push(a.sub(&b)?.norm());
        }
        Ok(gaps)
    }

    fn p_scan_at(&self, n: usize) -> Result<(f64, f64, Vec<f64>)> {
        let s = self.family.schedule();
        let alpha = self.order.alpha();
        let tau = find_tau(&self.family, n)?;
        let norm = self.caputo_u_at(tau)?.norm();
        let mut bounds = Vec::new();
        for k in 2..n {
            let half = 0.5 * (s.t(k - 1) + s.t(k));
            let lb = ((tau - half).powf(-alpha) - (0.5 * tau).powf(-alpha))
                / self.order.gamma_one_minus();
            bounds.push(lb);
        }
        Ok((tau, norm, bounds))
    }

    fn p_scan_assemble(&self, rows: Vec<(f64, f64, Vec<f64>)>) -> PScan {
        let indices = (2..=self.family.max_bump_index()).collect();
        let mut taus = Vec::new();
        let mut caputo_norms = Vec::new();
        let mut lower_bounds = Vec::new();
        for (tau, norm, bounds) in rows {
            taus.push(tau);
            caputo_norms.push(norm);
            lower_bounds.push(bounds);
        }
        PScan {
            indices,
            taus,
            caputo_norms,
            lower_bounds,
        }
    }

    /// Sequential hypothesis-(P) scan over n = 2..N−2. Euclidean flavor only:
    /// ‖cD^α u‖² = Σ_k [cD^α z_k]² is the Hilbert-space identity.
    pub fn hypothesis_p_scan_seq(&self) -> Result<PScan> {
        if self.basis.flavor() != NormFlavor::Euclidean {
            return Err(Error::EuclideanRequired);
        }
        let rows: Result<Vec<_>> = (2..=self.family.max_bump_index())
            .map(|n| self.p_scan_at(n))
            .collect();
        Ok(self.p_scan_assemble(rows?))
    }

    /// Hypothesis-(P) scan, parallel over n.
    #[cfg(feature = "parallel")]
    pub fn hypothesis_p_scan(&self) -> Result<PScan> {
        if self.basis.flavor() != NormFlavor::Euclidean {
            return Err(Error::EuclideanRequired);
        }
        let rows: Result<Vec<_>> = (2..=self.family.max_bump_index())
            .into_par_iter()
            .map(|n| self.p_scan_at(n))
            .collect();
        Ok(self.p_scan_assemble(rows?))
    }

    #[cfg(not(feature = "parallel"))]
    pub fn hypothesis_p_scan(&self) -> Result<PScan> {
        self.hypothesis_p_scan_seq()
    }

    /// The bounded sequence s_l = τ_{l+1}, y_l = Σ_{k=1}^{l+1} k^{−2} v_k and
    /// the norms of its image under f_α.
    pub fn unbounded_image_witness(&self, count: usize) -> Result<ImageWitness> {
        if self.basis.flavor() != NormFlavor::Euclidean {
            return Err(Error::EuclideanRequired);
        }
        let n_points = self.family.schedule().len();
        if count + 1 > self.family.max_bump_index() {
            return Err(Error::WitnessCountTooLarge {
                count,
                family: n_points,
            });
        }
        let mut times = Vec::new();
        let mut y_norms = Vec::new();
        let mut phi_values = Vec::new();
        let mut image_norms = Vec::new();
        let mut caputo_norms = Vec::new();
        for l in 1..=count {
            let n_l = l + 1;
            let s_l = find_tau(&self.family, n_l)?;
            let mut y = self.basis.zero();
            for k in 1..=(l + 1).min(self.basis.dim()) {
                y = axpy(
                    1.0 / (k * k) as f64,
                    &self.basis.basis_vector(k)?,
                    &y,
                )?;
            }
            times.push(s_l);
            y_norms.push(y.norm());
            phi_values.push(phi(self.h_at(s_l, &y)));
            image_norms.push(self.f_alpha(s_l, &y)?.norm());
            caputo_norms.push(self.caputo_u_at(s_l)?.norm());
        }
        Ok(ImageWitness {
            times,
            y_norms,
            phi_values,
            image_norms,
            caputo_norms,
        })
    }

    /// All witnesses in one record; `n_samples` controls the residual and
    /// sup-norm sample counts.
    pub fn witness_report(&self, n_samples: usize) -> Result<WitnessReport> {
        let s = self.family.schedule();
        let n_max = self.family.max_bump_index();
        let t_end = s.t(n_max);
        let samples: Vec<f64> = (0..n_samples)
            .map(|i| t_end * i as f64 / (n_samples.max(2) - 1) as f64)
            .collect();
        let max_residual = self.residual_check(&samples)?;
        let mut sup_norm_u = 0.0f64;
        for i in 0..10_000 {
            let t = self.horizon() * i as f64 / 9_999.0;
            sup_norm_u = sup_norm_u.max(self.u_at(t)?.norm());
        }
        let sigma_gaps = self.non_cauchy_witness()?;
        let scan = self.hypothesis_p_scan()?;
        let lower_bounds = scan
            .lower_bounds
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| b.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v)))
            .collect();
        let witness = self.unbounded_image_witness(n_max - 1)?;
        Ok(WitnessReport {
            sup_norm_u,
            sigma_gaps,
            caputo_norms_at_tau: scan.caputo_norms,
            lower_bounds,
            image_norms: witness.image_norms,
            max_residual,
        })
    }
}
