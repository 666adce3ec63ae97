//! Fractional initial-value problems cD^α u = f(t, u), u(0) = u₀, via the
//! Volterra form u(t) = u₀ + (1/Γ(α)) ∫₀^t (t−s)^{α−1} f(s, u(s)) ds.
//!
//! The marcher is the fractional Adams–Bashforth–Moulton scheme: the
//! predictor uses product-rectangle weights over the full history, the
//! corrector product-trapezoid weights. The history sum is never discarded;
//! continuing a solve replays it node for node. Classification follows the
//! dichotomy semantics: reach the horizon, or exceed the blow-up threshold
//! (or go non-finite) in finite time.

use crate::frac_kernel::FracOrder;
use crate::gamma::gamma;
use crate::sequence_space::SeqVec;
use crate::{Error, Result};

/// Right-hand side of the problem. Evaluation failures surface as `Err` and
/// stall the march with the partial trajectory.
pub type Rhs<'a> = &'a (dyn Fn(f64, &SeqVec) -> Result<SeqVec> + Sync);

/// The fractional Cauchy problem on [0, horizon].
pub struct Ivp<'a> {
    pub order: FracOrder,
    pub rhs: Rhs<'a>,
    pub u0: SeqVec,
    pub horizon: f64,
}

impl<'a> Ivp<'a> {
    pub fn new(order: FracOrder, rhs: Rhs<'a>, u0: SeqVec, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        Ok(Self {
            order,
            rhs,
            u0,
            horizon,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub dt: f64,
    pub corrector_sweeps: usize,
    pub blowup_threshold: f64,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidStep(self.dt));
        }
        if self.corrector_sweeps == 0 || self.picard_max_iter == 0 {
            return Err(Error::InvalidConfig("iteration counts must be positive".into()));
        }
        if !(self.blowup_threshold > 0.0) || !(self.picard_tol > 0.0) {
            return Err(Error::InvalidConfig("thresholds must be positive".into()));
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1.0 / 256.0,
            corrector_sweeps: 1,
            blowup_threshold: 1e8,
            picard_tol: 1e-10,
            picard_max_iter: 200,
        }
    }
}

/// The dichotomy verdict at numerical scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    ReachedHorizon,
    /// First node whose state norm exceeded the threshold or went non-finite.
    FiniteTimeBlowUp(f64),
    /// The right-hand side failed; trajectory retained up to the failure.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub times: Vec<f64>,
    pub states: Vec<SeqVec>,
    pub classification: Classification,
    pub max_norm: f64,
}

/// Resumable predictor–corrector march. Extending the horizon replays the
/// full memory sum, so segmented runs match single runs node for node.
struct PcMarch<'a, 'b> {
    ivp: &'b Ivp<'a>,
    cfg: SolverConfig,
    alpha: f64,
    states: Vec<SeqVec>,
    f_history: Vec<SeqVec>,
    max_norm: f64,
    verdict: Option<Classification>,
}

impl<'a, 'b> PcMarch<'a, 'b> {
    fn start(ivp: &'b Ivp<'a>, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let f0 = match (ivp.rhs)(0.0, &ivp.u0) {
            Ok(v) => v,
            Err(_) => {
                return Ok(Self {
                    ivp,
                    cfg,
                    alpha: ivp.order.alpha(),
                    states: vec![ivp.u0.clone()],
                    f_history: vec![],
                    max_norm: ivp.u0.norm(),
                    verdict: Some(Classification::Stalled),
                })
            }
        };
        Ok(Self {
            ivp,
            cfg,
            alpha: ivp.order.alpha(),
            states: vec![ivp.u0.clone()],
            f_history: vec![f0],
            max_norm: ivp.u0.norm(),
            verdict: None,
        })
    }

    fn node_time(&self, j: usize) -> f64 {
        j as f64 * self.cfg.dt
    }

    /// One predictor–corrector step from node j to j+1; history holds f at
    /// nodes 0..=j.
    fn step(&mut self) -> Result<()> {
        let j = self.states.len() - 1;
        let dt = self.cfg.dt;
        let alpha = self.alpha;
        let dim = self.ivp.u0.dim();
        let t_next = self.node_time(j + 1);

        // predictor: rectangle weights b_m = (m+1)^α − m^α, left-to-right
        let pred_scale = dt.powf(alpha) / self.ivp.order.gamma_alpha_plus_one();
        let mut acc = vec![0.0f64; dim];
        for k in 0..=j {
            let m = (j - k) as f64;
            let w = (m + 1.0).powf(alpha) - m.powf(alpha);
            for (a, fv) in acc.iter_mut().zip(self.f_history[k].coords()) {
                *a += w * fv;
            }
        }
        let mut next: Vec<f64> = self
            .ivp
            .u0
            .coords()
            .iter()
            .zip(&acc)
            .map(|(u, a)| u + pred_scale * a)
            .collect();

        // corrector sweeps: trapezoid weights over history plus the new node
        let corr_scale = dt.powf(alpha) / gamma(alpha + 2.0);
        let p = alpha + 1.0;
        let jf = j as f64;
        let mut hist = vec![0.0f64; dim];
        for k in 0..=j {
            let w = if k == 0 {
                jf.powf(p) - (jf - alpha) * (jf + 1.0).powf(alpha)
            } else {
                let m = (j + 1 - k) as f64;
                (m + 1.0).powf(p) + (m - 1.0).powf(p) - 2.0 * m.powf(p)
            };
            for (h, fv) in hist.iter_mut().zip(self.f_history[k].coords()) {
                *h += w * fv;
            }
        }
        let mut f_next = None;
        for _ in 0..self.cfg.corrector_sweeps {
            let state = SeqVec::new(next.clone(), self.ivp.u0.flavor());
            let state = match state {
                Ok(s) => s,
                Err(_) => break, // non-finite predictor; blow-up check below
            };
            let f = match (self.ivp.rhs)(t_next, &state) {
                Ok(f) => f,
                Err(_) => {
                    self.verdict = Some(Classification::Stalled);
                    return Ok(());
                }
            };
            next = self
                .ivp
                .u0
                .coords()
                .iter()
                .zip(&hist)
                .zip(f.coords())
                .map(|((u, h), fn_)| u + corr_scale * (h + fn_))
                .collect();
            f_next = Some(f);
        }

        let finite = next.iter().all(|v| v.is_finite());
        let norm = if finite {
            SeqVec::new(next.clone(), self.ivp.u0.flavor())
                .map(|s| s.norm())
                .unwrap_or(f64::INFINITY)
        } else {
            f64::INFINITY
        };
        if !finite || norm > self.cfg.blowup_threshold {
            // retain the offending node so the caller can see where it died
            let clamped: Vec<f64> = next
                .iter()
                .map(|v| if v.is_finite() { *v } else { 0.0 })
                .collect();
            self.states
                .push(SeqVec::new(clamped, self.ivp.u0.flavor())?);
            self.f_history
                .push(f_next.unwrap_or_else(|| SeqVec::zeros(dim, self.ivp.u0.flavor())));
            self.max_norm = self.max_norm.max(norm);
            self.verdict = Some(Classification::FiniteTimeBlowUp(t_next));
            return Ok(());
        }

        let state = SeqVec::new(next, self.ivp.u0.flavor())?;
        // f at the accepted node, for the next step's memory
        let f_final = match f_next {
            Some(f) => f,
            None => match (self.ivp.rhs)(t_next, &state) {
                Ok(f) => f,
                Err(_) => {
                    self.states.push(state);
                    self.verdict = Some(Classification::Stalled);
                    return Ok(());
                }
            },
        };
        self.max_norm = self.max_norm.max(norm);
        self.states.push(state);
        self.f_history.push(f_final);
        Ok(())
    }

    /// March until `t_end` (rounded to the grid) or a verdict.
    fn advance_to(&mut self, t_end: f64) -> Result<()> {
        let target = (t_end / self.cfg.dt).round() as usize;
        while self.verdict.is_none() && self.states.len() <= target {
            self.step()?;
        }
        Ok(())
    }

    fn finish(self) -> SolveOutcome {
        let times = (0..self.states.len())
            .map(|j| j as f64 * self.cfg.dt)
            .collect();
        SolveOutcome {
            times,
            states: self.states,
            classification: self.verdict.unwrap_or(Classification::ReachedHorizon),
            max_norm: self.max_norm,
        }
    }
}

/// Fractional Adams–Bashforth–Moulton solve over [0, horizon].
pub fn solve_pc(ivp: &Ivp, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let mut march = PcMarch::start(ivp, *cfg)?;
    march.advance_to(ivp.horizon)?;
    Ok(march.finish())
}

/// Solve on [0, segment], then repeatedly extend by `segment` until the
/// horizon or a blow-up verdict, replaying the full memory each time.
pub fn classify_and_continue(ivp: &Ivp, cfg: &SolverConfig, segment: f64) -> Result<SolveOutcome> {
    if !(segment > 0.0 && segment.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "segment must be positive, got {segment}"
        )));
    }
    let mut march = PcMarch::start(ivp, *cfg)?;
    let mut reach = segment.min(ivp.horizon);
    loop {
        march.advance_to(reach)?;
        if march.verdict.is_some() || reach >= ivp.horizon {
            break;
        }
        reach = (reach + segment).min(ivp.horizon);
    }
    Ok(march.finish())
}

/// Picard iteration of the Volterra operator on a grid over [0, t_end]:
/// the independent oracle for [`solve_pc`].
pub fn picard_solve(ivp: &Ivp, cfg: &SolverConfig, t_end: f64) -> Result<Vec<SeqVec>> {
    cfg.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let n = (t_end / cfg.dt).round() as usize;
    if n == 0 {
        return Err(Error::InvalidStep(cfg.dt));
    }
    let alpha = ivp.order.alpha();
    let dim = ivp.u0.dim();
    let scale = cfg.dt.powf(alpha) / gamma(alpha + 2.0);
    let p = alpha + 1.0;
    let mut current: Vec<SeqVec> = vec![ivp.u0.clone(); n + 1];
    for _ in 0..cfg.picard_max_iter {
        let f_vals: Result<Vec<SeqVec>> = current
            .iter()
            .enumerate()
            .map(|(j, u)| (ivp.rhs)(j as f64 * cfg.dt, u))
            .collect();
        let f_vals = f_vals?;
        let mut next = Vec::with_capacity(n + 1);
        next.push(ivp.u0.clone());
        for j in 1..=n {
            let jf = j as f64;
            let mut acc = vec![0.0f64; dim];
            for k in 0..=j {
                let w = if k == 0 {
                    (jf - 1.0).powf(p) - (jf - 1.0 - alpha) * jf.powf(alpha)
                } else if k == j {
                    1.0
                } else {
                    let m = (j - k) as f64;
                    (m + 1.0).powf(p) + (m - 1.0).powf(p) - 2.0 * m.powf(p)
                };
                for (a, fv) in acc.iter_mut().zip(f_vals[k].coords()) {
                    *a += w * fv;
                }
            }
            let coords: Vec<f64> = ivp
                .u0
                .coords()
                .iter()
                .zip(&acc)
                .map(|(u, a)| u + scale * a)
                .collect();
            next.push(SeqVec::new(coords, ivp.u0.flavor())?);
        }
        let diff = current
            .iter()
            .zip(&next)
            .map(|(a, b)| a.sub(b).map(|d| d.norm()))
            .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))?;
        current = next;
        if diff <= cfg.picard_tol {
            return Ok(current);
        }
    }
    Err(Error::IterationLimit(cfg.picard_max_iter))
}

/// E_α(z) = Σ_{k≥0} z^k/Γ(αk+1), summed until the term magnitude drops below
/// 1e−16 of the running partial sum, with a 10⁴-term cap. Far out on the
/// negative axis the power series cancels catastrophically (its largest term
/// grows like e^{|z|^{1/α}}), so negative z with |z|^{1/α} ≥ 20 switches to
/// the algebraic asymptotic expansion E_α(z) ~ −Σ_{k≥1} z^{−k}/Γ(1−αk),
/// which on the negative real axis is complete only for α ≤ 2/3 (beyond
/// that an oscillatory exponential term enters); larger α is rejected
/// there. Validation oracle only; requires α ∈ (0,2) and |z| ≤ 50.
pub fn mittag_leffler(alpha: f64, z: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if !(z.abs() <= 50.0) {
        return Err(Error::InvalidConfig(format!("|z| must be <= 50, got {z}")));
    }
    if z < 0.0 && (-z).powf(1.0 / alpha) >= 20.0 {
        if alpha > 2.0 / 3.0 {
            return Err(Error::InvalidConfig(format!(
                "z = {z} is out of the power series' accurate range and the \
                 algebraic asymptotic expansion needs alpha <= 2/3, got {alpha}"
            )));
        }
        let mut sum = 0.0f64;
        let mut prev = f64::INFINITY;
        for k in 1..=30 {
            let g = gamma(1.0 - alpha * k as f64);
            // 1/Γ vanishes at the poles (non-positive integer arguments)
            let term = if g.is_finite() {
                -z.powi(-k) / g
            } else {
                0.0
            };
            if term.abs() > prev {
                break; // the asymptotic tail has started to diverge
            }
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            if term != 0.0 {
                prev = term.abs();
            }
        }
        return Ok(sum);
    }
    const CAP: usize = 10_000;
    // k = 0 term is exactly 1
    let mut sum = 1.0f64;
    let mut zk = z;
    for k in 1..CAP {
        let g = gamma(alpha * k as f64 + 1.0);
        let term = if g.is_finite() { zk / g } else { 0.0 };
        sum += term;
        if term.abs() < 1e-16 * (1.0 + sum.abs()) && k > 1 {
            return Ok(sum);
        }
        zk *= z;
    }
    Err(Error::SeriesCapExceeded(CAP))
}

/// Scalar convenience: wrap a scalar problem in a dim-1 sequence vector.
pub fn scalar(x: f64) -> SeqVec {
    SeqVec::new(vec![x], crate::sequence_space::NormFlavor::Euclidean).unwrap()
}
