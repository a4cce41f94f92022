//! Depth of zero for Denjoy-Carleman classes, weighted polynomial distance
//! and the exact Levinson-Sjöberg majorant, each reduced to Q(s).

use std::f64::consts::PI;

use crate::conditions::{
    check_conditions, check_majorant, log_grid, ConditionId, ConditionReport, Verdict,
};
use crate::error::{Error, Result};
use crate::legendre::{legendre_point_star_with, legendre_point_with, SolverConfig};
use crate::poisson::QProfile;
use crate::transforms::{fourier_inverse_oracle_with, ComplexLogW, FourierConfig};
use crate::weights::{DCSequence, LogWeight, Majorant};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorBound {
    pub log_value: f64,
    pub n: usize,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthReport {
    pub s: f64,
    /// −Q(s)
    pub logq_asym: f64,
    pub taylor_log: Option<f64>,
    pub taylor_truncated: bool,
    pub sandwich_lo_log: Option<f64>,
    pub sandwich_hi_log: Option<f64>,
    /// s^{1/β} log Q(s) for the Bang family.
    pub bang_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsReport {
    pub s: f64,
    /// Q(s)
    pub log_mstar_asym: f64,
    pub q_star: f64,
    pub qstar_sandwich: (f64, f64),
    pub conditions: ConditionReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub solver: SolverConfig,
    pub with_oracle: bool,
    pub fourier: FourierConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let solver = SolverConfig::default().with_y_cap(1e300);
        Self {
            solver,
            with_oracle: false,
            fourier: FourierConfig {
                solver,
                ..FourierConfig::default()
            },
        }
    }
}

impl PipelineConfig {
    pub fn with_oracle(mut self, on: bool) -> Self {
        self.with_oracle = on;
        self
    }
}

/// log min_{0≤n≤n_max} M_n sⁿ/n!.
pub fn taylor_bound(seq: &DCSequence, s: f64) -> Result<TaylorBound> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    let ls = s.ln();
    let mut best = (f64::INFINITY, 0);
    let mut lf = 0.0;
    for (n, lm) in seq.log_m().iter().enumerate() {
        if n > 0 {
            lf += (n as f64).ln();
        }
        let v = lm + n as f64 * ls - lf;
        if v < best.0 {
            best = (v, n);
        }
    }
    Ok(TaylorBound {
        log_value: best.0,
        n: best.1,
        truncated: best.1 == seq.n_max(),
    })
}

fn sandwich(prof: &QProfile, s: f64, cfg: &PipelineConfig) -> Result<(Option<f64>, Option<f64>)> {
    if !cfg.with_oracle {
        return Ok((None, None));
    }
    let clw = ComplexLogW::new(prof.clone());
    let r1 = fourier_inverse_oracle_with(&clw, 1.0, s, &cfg.fourier)?;
    let rinf = fourier_inverse_oracle_with(&clw, f64::INFINITY, s, &cfg.fourier)?;
    let lo = HALF_LN_2PI + r1.value.log_abs;
    let hi = 1.0 - HALF_LN_2PI + s.ln() + rinf.value.log_abs;
    Ok((Some(lo), Some(hi)))
}

fn report_for(prof: &QProfile, s: f64, cfg: &PipelineConfig) -> Result<DepthReport> {
    let lp = legendre_point_with(prof, s, &cfg.solver, None)?;
    let (lo, hi) = sandwich(prof, s, cfg)?;
    Ok(DepthReport {
        s,
        logq_asym: -lp.q,
        taylor_log: None,
        taylor_truncated: false,
        sandwich_lo_log: lo,
        sandwich_hi_log: hi,
        bang_c: None,
    })
}

/// Refuses sequences whose Ostrowski weight fails integrability.
pub fn sequence_weight(seq: &DCSequence) -> Result<LogWeight> {
    let w = LogWeight::sequence(seq.clone())?;
    let (_, b) = seq.active_log_range();
    let lo = 1.0;
    let hi = b.exp().max(1e4);
    let r = check_conditions(&w, &[ConditionId::Iii], &log_grid(lo, hi, 61))?;
    if r.verdict(ConditionId::Iii) == Some(Verdict::Fail) {
        let d = &r.get(ConditionId::Iii).unwrap().diagnostics;
        return Err(Error::Condition(format!(
            "sequence is quasianalytic: ∫φ/t² does not converge ({d:?})"
        )));
    }
    Ok(w)
}

pub fn depth_of_zero(seq: &DCSequence, s: f64, cfg: &PipelineConfig) -> Result<DepthReport> {
    let prof = QProfile::new(sequence_weight(seq)?);
    let mut rep = report_for(&prof, s, cfg)?;
    let tb = taylor_bound(seq, s)?;
    rep.taylor_log = Some(tb.log_value);
    rep.taylor_truncated = tb.truncated;
    Ok(rep)
}

/// Bang family M_n = n!(log n)^{n(1+β)}, through its continuous-index weight.
/// The Taylor bound is evaluated over n ≤ `taylor_n_max`.
pub fn bang_depth(
    beta: f64,
    s: f64,
    taylor_n_max: usize,
    cfg: &PipelineConfig,
) -> Result<DepthReport> {
    let prof = QProfile::new(LogWeight::bang(beta)?);
    let mut rep = report_for(&prof, s, cfg)?;
    let tb = taylor_bound(&DCSequence::bang(beta, taylor_n_max), s)?;
    rep.taylor_log = Some(tb.log_value);
    rep.taylor_truncated = tb.truncated;
    rep.bang_c = Some(s.powf(1.0 / beta) * (-rep.logq_asym).ln());
    Ok(rep)
}

pub fn poly_distance(w: &LogWeight, s: f64, cfg: &PipelineConfig) -> Result<DepthReport> {
    report_for(&QProfile::new(w.clone()), s, cfg)
}

pub fn ls_majorant(maj: &Majorant, s: f64, cfg: &PipelineConfig) -> Result<LsReport> {
    let conditions = check_majorant(maj, &ConditionId::MAJORANT, &log_grid(1e-8, 0.5, 60))?;
    if let Some(o) = conditions
        .outcomes
        .iter()
        .find(|o| o.verdict == Verdict::Fail)
    {
        return Err(Error::Condition(format!(
            "majorant fails ({}) at ξ = {:?}",
            o.id, o.witness
        )));
    }
    let prof = QProfile::new(LogWeight::majorant(maj.clone())?);
    let lp = legendre_point_with(&prof, s, &cfg.solver, None)?;
    let st = legendre_point_star_with(&prof, s, &cfg.solver)?;
    Ok(LsReport {
        s,
        log_mstar_asym: lp.q,
        q_star: st.q_star,
        qstar_sandwich: (st.sandwich_lo, st.sandwich_hi),
        conditions,
    })
}

/// Q(s) for φ(r) = inf_ξ [ξ^{−β} + rξ] without the ξ < 1 constraint:
/// φ = c r^γ with γ = β/(β+1).
pub fn inv_power_q(beta: f64, s: f64) -> f64 {
    let g = beta / (beta + 1.0);
    let c = beta.powf(1.0 / (beta + 1.0)) + beta.powf(-g);
    let big_c = c / (PI * g / 2.0).cos();
    (1.0 - g) * big_c.powf(1.0 / (1.0 - g)) * (g / s).powf(g / (1.0 - g))
}
