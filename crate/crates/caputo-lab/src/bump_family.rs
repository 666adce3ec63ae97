//! C¹ mollifier bumps and the dyadic accumulation family.
//!
//! A bump with knots s1 < s2 < s3 < s4 vanishes outside (s1, s4), equals 1 on
//! [s2, s3], rises on [s1, s2] and falls on [s3, s4]. The family `z_n` hangs
//! the bumps on the schedule t_n = 1 − 2^{−n}, whose points accumulate at 1
//! with strictly decreasing gaps.

use crate::frac_kernel::{FracOrder, QuadScheme, Quadrature};
use crate::{Error, Result};

/// Below this argument e^{−1/t} underflows past the subnormal range; flush
/// to zero to keep evaluations exact on the closure of the support.
const THETA_CUTOFF: f64 = 1.0 / 709.0;

/// Scaled exponents above this are flushed to zero: e^{−700} is the last
/// comfortably normal magnitude.
const EXP_CLIP: f64 = 700.0;

/// Bisection depth cap for the kernel-against-mass edge quadrature.
const STIELTJES_MAX_DEPTH: usize = 48;

/// Panels per edge for the precomputed cumulative integrals.
const CUMULATIVE_PANELS: usize = 4096;

/// Scan resolution for locating the derivative maximum.
const TAU_SCAN_POINTS: usize = 1024;
/// Absolute abscissa tolerance of the golden-section refinement.
const TAU_ABS_TOL: f64 = 1e-12;

/// θ(t) = e^{−1/t} for t > 0, 0 for t ≤ 0.
pub fn theta(t: f64) -> f64 {
    if t < THETA_CUTOFF {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Cumulative integral of a nonnegative smooth function over [a, b],
/// precomputed with composite Simpson and evaluated by cubic Hermite
/// interpolation with exact slopes (the integrand itself).
#[derive(Debug, Clone)]
struct CumulativeIntegral {
    a: f64,
    b: f64,
    h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl CumulativeIntegral {
    fn build(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> Self {
        let h = (b - a) / panels as f64;
        let mut values = Vec::with_capacity(panels + 1);
        let mut slopes = Vec::with_capacity(panels + 1);
        values.push(0.0);
        slopes.push(f(a));
        let mut acc = 0.0;
        for i in 0..panels {
            let x0 = a + i as f64 * h;
            let x1 = a + (i + 1) as f64 * h;
            acc += h / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
            values.push(acc);
            slopes.push(f(x1));
        }
        Self {
            a,
            b,
            h,
            values,
            slopes,
        }
    }

    fn total(&self) -> f64 {
        *self.values.last().unwrap()
    }

    fn eval(&self, t: f64) -> f64 {
        if t <= self.a {
            return 0.0;
        }
        if t >= self.b {
            return self.total();
        }
        let i = (((t - self.a) / self.h) as usize).min(self.values.len() - 2);
        let x0 = self.a + i as f64 * self.h;
        let s = (t - x0) / self.h;
        let (p0, p1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * self.h, self.slopes[i + 1] * self.h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * p0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * p1
            + (s3 - s2) * m1
    }
}

/// One smoothed edge of a bump, stored in rescaled coordinates.
///
/// On [lo, lo + w] with x = (t − lo)/w the unnormalized edge weight is
/// θ(w − (t − lo))·θ(t − lo) = e^{−g(x)/w}, g(x) = 1/x + 1/(1 − x).
/// Raw evaluation underflows once w is small (the peak itself is e^{−4/w}),
/// so the minimum exponent 4/w is divided out and only the *normalized*
/// cumulative shape is ever formed. Outside the window [x_lo, x_hi] the
/// scaled weight is below e^{−700} and is treated as zero.
#[derive(Debug, Clone)]
struct EdgeShape {
    lo: f64,
    width: f64,
    x_lo: f64,
    x_hi: f64,
    cum: CumulativeIntegral,
    /// Cumulative of (x − x_lo)·density, for first moments of the edge mass.
    cum_m1: CumulativeIntegral,
}

/// g(x) = 1/x + 1/(1−x), the summed reciprocal distances to the edge knots.
fn edge_exponent(x: f64) -> f64 {
    1.0 / x + 1.0 / (1.0 - x)
}

impl EdgeShape {
    fn build(lo: f64, hi: f64, quad: &Quadrature) -> Result<Self> {
        let width = hi - lo;
        // g(x) = 4 + EXP_CLIP·w has the closed-form root x(1−x) = 1/c
        let c = 4.0 + EXP_CLIP * width;
        let x_lo = 0.5 * (1.0 - (1.0 - 4.0 / c).sqrt());
        let x_hi = 1.0 - x_lo;
        let density = move |x: f64| (-(edge_exponent(x) - 4.0) / width).exp();
        let cum = CumulativeIntegral::build(x_lo, x_hi, CUMULATIVE_PANELS, density);
        let coarse = CumulativeIntegral::build(x_lo, x_hi, CUMULATIVE_PANELS / 2, density);
        let cum_m1 = CumulativeIntegral::build(x_lo, x_hi, CUMULATIVE_PANELS, move |x| {
            (x - x_lo) * density(x)
        });
        let total = cum.total();
        let delta = (total - coarse.total()).abs();
        if !(total > 0.0) || delta > quad.tol * total {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                delta,
                tol: quad.tol,
            });
        }
        Ok(Self {
            lo,
            width,
            x_lo,
            x_hi,
            cum,
            cum_m1,
        })
    }

    /// Fraction of the edge mass accumulated up to t, in [0, 1].
    fn frac(&self, t: f64) -> f64 {
        let x = (t - self.lo) / self.width;
        if x <= self.x_lo {
            0.0
        } else if x >= self.x_hi {
            1.0
        } else {
            (self.cum.eval(x) / self.cum.total()).clamp(0.0, 1.0)
        }
    }

    /// d/dt of [`Self::frac`]: the normalized edge density in t-units.
    fn density(&self, t: f64) -> f64 {
        let x = (t - self.lo) / self.width;
        if x <= self.x_lo || x >= self.x_hi {
            0.0
        } else {
            (-(edge_exponent(x) - 4.0) / self.width).exp() / (self.width * self.cum.total())
        }
    }

    /// The t-interval actually carrying edge mass.
    fn support(&self) -> (f64, f64) {
        (
            self.lo + self.x_lo * self.width,
            self.lo + self.x_hi * self.width,
        )
    }

    /// Mass ΔZ = ∫_{s0}^{s1} dZ and first moment ∫_{s0}^{s1} (s − s0) dZ of
    /// the normalized edge measure, from the precomputed cumulatives.
    fn mass_moments(&self, s0: f64, s1: f64) -> (f64, f64) {
        let xa = (s0 - self.lo) / self.width;
        let xb = (s1 - self.lo) / self.width;
        let total = self.cum.total();
        let dz = ((self.cum.eval(xb) - self.cum.eval(xa)) / total).max(0.0).min(1.0);
        let m1x = self.cum_m1.eval(xb) - self.cum_m1.eval(xa) - (xa - self.x_lo) * dz * total;
        // The centroid of a nonnegative measure lies inside the panel, so the
        // first moment is confined to [0, dz·width]; differencing the
        // cumulatives can violate that by rounding noise, which the
        // singular-panel linear fit would amplify by 1/width³.
        let m1 = (self.width * m1x / total).clamp(0.0, dz * (s1 - s0));
        (dz, m1)
    }

    /// ∫ (t−s)^{−α} dZ(s) over the edge support clipped to [0, t], by
    /// adaptive product quadrature that interpolates the *kernel* against the
    /// exact edge mass. Panels touching the singularity fall back to a
    /// constant-density rule with the exact kernel moment, so the sharp edge
    /// peak never has to be resolved pointwise.
    fn kernel_stieltjes(&self, alpha: f64, t: f64, scheme: QuadScheme, tol: f64) -> Result<f64> {
        let (a, b) = self.support();
        let b = b.min(t);
        if b <= a {
            return Ok(0.0);
        }
        self.stieltjes_refine(alpha, t, a, b, scheme, tol, 0)
    }

    fn stieltjes_panel(&self, alpha: f64, t: f64, s0: f64, s1: f64, scheme: QuadScheme) -> f64 {
        let (dz, m1) = self.mass_moments(s0, s1);
        let width = s1 - s0;
        let d1 = t - s1;
        if d1 > width {
            let k0 = (t - s0).powf(-alpha);
            match scheme {
                QuadScheme::ProductRectangle => k0 * dz,
                QuadScheme::ProductTrapezoid => {
                    let k1 = d1.powf(-alpha);
                    k0 * dz + (k1 - k0) * m1 / width
                }
            }
        } else {
            // Singular-side panel: fit the linear density that reproduces the
            // exact mass dz and first moment m1, and integrate it against the
            // exact kernel moments. Second-order accuracy here is required so
            // the bisection keeps pace with the per-depth tolerance halving.
            let one = 1.0 - alpha;
            let two = 2.0 - alpha;
            let d0 = t - s0;
            let d1 = d1.max(0.0);
            let m0 = (d0.powf(one) - d1.powf(one)) / one;
            // ∫ (s − s0)(t − s)^{−α} ds over the panel
            let mm1 = d0 * m0 - (d0.powf(two) - d1.powf(two)) / two;
            let c1 = 12.0 / (width * width * width) * (m1 - 0.5 * dz * width);
            let c0 = dz / width - 0.5 * c1 * width;
            c0 * m0 + c1 * mm1
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn stieltjes_refine(
        &self,
        alpha: f64,
        t: f64,
        a: f64,
        b: f64,
        scheme: QuadScheme,
        tol: f64,
        depth: usize,
    ) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let coarse = self.stieltjes_panel(alpha, t, a, b, scheme);
        let fine =
            self.stieltjes_panel(alpha, t, a, mid, scheme) + self.stieltjes_panel(alpha, t, mid, b, scheme);
        let delta = (fine - coarse).abs();
        // The panel values difference exact cumulative masses, so they carry
        // an absolute rounding noise of a few ulps of the (normalized, O(1))
        // cumulative, amplified by the kernel magnitude. Deltas at that floor
        // are not refinable error and must be accepted.
        let noise = 1e-14 * (t - 0.5 * (a + b)).powf(-alpha).max(1.0);
        if delta <= tol
            || delta <= 1e-13 * fine.abs()
            || delta <= noise
            || b - a <= 1e-14 * t.max(1.0)
        {
            return Ok(fine);
        }
        if depth >= STIELTJES_MAX_DEPTH {
            return Err(Error::QuadratureNonConvergence {
                estimate: fine,
                delta,
                tol,
            });
        }
        Ok(self.stieltjes_refine(alpha, t, a, mid, scheme, 0.5 * tol, depth + 1)?
            + self.stieltjes_refine(alpha, t, mid, b, scheme, 0.5 * tol, depth + 1)?)
    }
}

/// One mollifier bump z with knots s1 < s2 < s3 < s4.
#[derive(Debug, Clone)]
pub struct BumpSpec {
    s1: f64,
    s2: f64,
    s3: f64,
    s4: f64,
    rise: EdgeShape,
    fall: EdgeShape,
}

impl BumpSpec {
    pub fn knots(&self) -> (f64, f64, f64, f64) {
        (self.s1, self.s2, self.s3, self.s4)
    }
}

/// Build a bump from its knots. The cumulative edge integrals are
/// precomputed; `quad.tol` bounds the accepted Simpson refinement error of
/// the normalization constants.
pub fn make_bump(s1: f64, s2: f64, s3: f64, s4: f64, quad: &Quadrature) -> Result<BumpSpec> {
    if !(s1 < s2 && s2 < s3 && s3 < s4) {
        return Err(Error::InvalidKnots(s1, s2, s3, s4));
    }
    Ok(BumpSpec {
        s1,
        s2,
        s3,
        s4,
        rise: EdgeShape::build(s1, s2, quad)?,
        fall: EdgeShape::build(s3, s4, quad)?,
    })
}

/// z(t) = (∫_{−∞}^t μ / ∫μ)(∫_t^∞ ν / ∫ν).
pub fn bump_value(b: &BumpSpec, t: f64) -> f64 {
    if t <= b.s1 || t >= b.s4 {
        return 0.0;
    }
    b.rise.frac(t) * (1.0 - b.fall.frac(t))
}

/// Product-rule derivative of [`bump_value`].
pub fn bump_deriv(b: &BumpSpec, t: f64) -> f64 {
    if t <= b.s1 || t >= b.s4 {
        return 0.0;
    }
    b.rise.density(t) * (1.0 - b.fall.frac(t)) - b.fall.density(t) * b.rise.frac(t)
}

/// Accumulation schedule t_1 < t_2 < … < t_N < 1.
#[derive(Debug, Clone)]
pub struct Schedule {
    points: Vec<f64>,
    rule: &'static str,
}

impl Schedule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// 1-indexed access: t_n.
    pub fn t(&self, n: usize) -> f64 {
        self.points[n - 1]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn rule(&self) -> &'static str {
        self.rule
    }
}

/// The dyadic schedule t_n = 1 − 2^{−n}, n = 1..N. Gaps halve at each step,
/// and t_1 + t_2 = 1.25 > 1.
pub fn make_schedule(n_points: usize) -> Result<Schedule> {
    if n_points < 4 {
        return Err(Error::ScheduleTooShort(n_points));
    }
    let points = (1..=n_points)
        .map(|n| 1.0 - 0.5f64.powi(n as i32))
        .collect();
    Ok(Schedule {
        points,
        rule: "t_n = 1 - 2^-n",
    })
}

/// The indexed family {z_n}: z_1 ≡ 1 and, for n = 2..N−2, a bump with knots
/// ((t_{n−1}+t_n)/2, t_n, t_{n+1}, (t_{n+1}+t_{n+2})/2).
#[derive(Debug, Clone)]
pub struct BumpFamily {
    schedule: Schedule,
    bumps: Vec<BumpSpec>,
}

pub fn make_family(schedule: Schedule, quad: &Quadrature) -> Result<BumpFamily> {
    let n_points = schedule.len();
    if n_points < 4 {
        return Err(Error::ScheduleTooShort(n_points));
    }
    let mut bumps = Vec::with_capacity(n_points - 3);
    for n in 2..=n_points - 2 {
        let s1 = 0.5 * (schedule.t(n - 1) + schedule.t(n));
        let s2 = schedule.t(n);
        let s3 = schedule.t(n + 1);
        let s4 = 0.5 * (schedule.t(n + 1) + schedule.t(n + 2));
        bumps.push(make_bump(s1, s2, s3, s4, quad)?);
    }
    Ok(BumpFamily { schedule, bumps })
}

impl BumpFamily {
    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// Largest constructible bump index, N−2.
    pub fn max_bump_index(&self) -> usize {
        self.schedule.len() - 2
    }

    pub fn bump(&self, n: usize) -> Option<&BumpSpec> {
        if (2..=self.max_bump_index()).contains(&n) {
            Some(&self.bumps[n - 2])
        } else {
            None
        }
    }

    /// z_n(t); z_1 ≡ 1.
    pub fn value(&self, n: usize, t: f64) -> f64 {
        if n == 1 {
            1.0
        } else {
            self.bump(n).map_or(0.0, |b| bump_value(b, t))
        }
    }

    /// z_n′(t); z_1′ ≡ 0.
    pub fn deriv(&self, n: usize, t: f64) -> f64 {
        if n == 1 {
            0.0
        } else {
            self.bump(n).map_or(0.0, |b| bump_deriv(b, t))
        }
    }

    /// Rising-edge interval of z_n: ((t_{n−1}+t_n)/2, t_n).
    pub fn rising_interval(&self, n: usize) -> (f64, f64) {
        (
            0.5 * (self.schedule.t(n - 1) + self.schedule.t(n)),
            self.schedule.t(n),
        )
    }

    /// Support of z_n′ as (rising, falling) intervals, trimmed to where the
    /// edge density is representable; outside them z_n′ is numerically zero.
    pub fn deriv_supports(&self, n: usize) -> [(f64, f64); 2] {
        let b = self.bump(n).expect("index in 2..=N-2");
        [b.rise.support(), b.fall.support()]
    }

    /// cD^α z_n(t) = (1/Γ(1−α)) ∫_0^t (t−s)^{−α} z_n′(s) ds, with z_n′ split
    /// into its rising (+dZ) and falling (−dZ) edge measures. Each edge is
    /// integrated by the kernel-against-mass product rule, so the cost is set
    /// by the memory kernel, not by how narrow the edge is.
    pub fn caputo_bump(
        &self,
        order: &FracOrder,
        n: usize,
        t: f64,
        quad: &Quadrature,
    ) -> Result<f64> {
        if n == 1 {
            return Ok(0.0);
        }
        let b = self.bump(n).ok_or(Error::IndexOutOfRange {
            index: n,
            dim: self.max_bump_index(),
        })?;
        let alpha = order.alpha();
        let tol = 0.5 * quad.tol;
        let rise = b.rise.kernel_stieltjes(alpha, t, quad.scheme, tol)?;
        let fall = b.fall.kernel_stieltjes(alpha, t, quad.scheme, tol)?;
        Ok((rise - fall) / order.gamma_one_minus())
    }
}

/// Locate τ_n, the argmax of z_n′ over the rising edge: 1024-point scan then
/// golden-section refinement to 1e−12 abscissa tolerance.
pub fn find_tau(fam: &BumpFamily, n: usize) -> Result<f64> {
    let b = fam
        .bump(n)
        .ok_or(Error::IndexOutOfRange {
            index: n,
            dim: fam.max_bump_index(),
        })?;
    // scan only where the edge density is representable; the maximum of the
    // rescaled density sits well inside this window
    let (lo, hi) = b.rise.support();
    let step = (hi - lo) / TAU_SCAN_POINTS as f64;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 1..TAU_SCAN_POINTS {
        let v = bump_deriv(b, lo + i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if !(best > 0.0) {
        return Err(Error::NoRisingSlope(n));
    }
    // golden-section maximization on the bracketing cells
    let mut a = lo + (best_i - 1) as f64 * step;
    let mut c = lo + (best_i + 1) as f64 * step;
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = c - inv_phi * (c - a);
    let mut x2 = a + inv_phi * (c - a);
    let mut f1 = bump_deriv(b, x1);
    let mut f2 = bump_deriv(b, x2);
    while c - a > TAU_ABS_TOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (c - a);
            f2 = bump_deriv(b, x2);
        } else {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - inv_phi * (c - a);
            f1 = bump_deriv(b, x1);
        }
    }
    Ok(0.5 * (a + c))
}
