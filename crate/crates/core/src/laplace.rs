//! N(s) = ∫₁^∞ y^a e^{−sy+q(y)} dy: the saddle-point asymptotic and a
//! windowed quadrature oracle with convexity tail bounds.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::legendre::{legendre_point_with, LegendrePoint, SolverConfig};
use crate::logmag::LogMagnitude;
use crate::poisson::QProfile;
use crate::quad::{integrate, Piece};

const ETA_GRID: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceConfig {
    pub rel_tol: f64,
    pub k_start: f64,
    pub max_doublings: u32,
    pub solver: SolverConfig,
}

impl Default for LaplaceConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            k_start: 6.0,
            max_doublings: 8,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceResult {
    pub log_value: LogMagnitude,
    pub window: (f64, f64),
    /// log of the summed tail bounds, on the same scale as `log_value`.
    pub tail_bound_log: f64,
    pub eta: f64,
    pub k_final: f64,
    pub y_s: f64,
    pub angle: f64,
}

/// γ̂(t) = min over a log grid on [t, 10³t] of |q″|^{3/2}/q‴.
pub fn gamma_hat(prof: &QProfile, t: f64) -> Result<f64> {
    let mut best = f64::INFINITY;
    for i in 0..ETA_GRID {
        let xi = t * 10f64.powf(3.0 * i as f64 / (ETA_GRID - 1) as f64);
        let q2 = prof.q2_from_first(xi)?.abs();
        let q3 = prof.q3(xi)?;
        if !(q3 > 0.0) {
            return Err(Error::Condition(format!(
                "q‴({xi:.6e}) = {q3:.3e} is not positive"
            )));
        }
        best = best.min(q2.powf(1.5) / q3);
    }
    Ok(best)
}

/// η(t) = min(√(γ̂(t)/|q″(t)|), t/4), with γ̂ clamped to t²|q″(t)|.
pub fn window_eta(prof: &QProfile, t: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("window needs t ≥ 1, got {t}")));
    }
    let q2 = prof.q2_from_first(t)?.abs();
    let g = gamma_hat(prof, t)?.min(t * t * q2);
    Ok((g / q2).sqrt().min(0.25 * t))
}

/// log of e^{−ψ(a)}/ψ′(a), the bound for ∫_a^∞ e^{−ψ} with ψ convex and ψ′(a) > 0.
pub fn tail_bound(psi_at_a: f64, psi_prime_at_a: f64) -> Result<f64> {
    if !(psi_prime_at_a > 0.0) {
        return Err(Error::Domain(format!(
            "tail bound needs ψ′(a) > 0, got {psi_prime_at_a}"
        )));
    }
    Ok(-psi_at_a - psi_prime_at_a.ln())
}

fn asym_from_point(p: &LegendrePoint, a: f64) -> LogMagnitude {
    LogMagnitude::from_log(p.q + a * p.y_s.ln() + 0.5 * (2.0 * PI * p.q2).ln())
}

/// Q(s) + a log|Q′(s)| + ½ log(2πQ″(s)).
pub fn laplace_asymptotic(prof: &QProfile, a: f64, s: f64) -> Result<LogMagnitude> {
    laplace_asymptotic_with(prof, a, s, &SolverConfig::default())
}

pub fn laplace_asymptotic_with(
    prof: &QProfile,
    a: f64,
    s: f64,
    cfg: &SolverConfig,
) -> Result<LogMagnitude> {
    Ok(asym_from_point(
        &legendre_point_with(prof, s, cfg, None)?,
        a,
    ))
}

pub fn laplace_oracle(prof: &QProfile, a: f64, s: f64, angle: f64) -> Result<LaplaceResult> {
    laplace_oracle_with(prof, a, s, angle, &LaplaceConfig::default())
}

pub fn laplace_oracle_with(
    prof: &QProfile,
    a: f64,
    s: f64,
    angle: f64,
    cfg: &LaplaceConfig,
) -> Result<LaplaceResult> {
    if !(angle.abs() <= FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "angle must lie in [−π/2, π/2], got {angle}"
        )));
    }
    if !a.is_finite() {
        return Err(Error::Domain("a must be finite".into()));
    }
    let p = legendre_point_with(prof, s, &cfg.solver, None)?;
    let y_s = p.y_s;
    if y_s < 10.0 {
        return Err(Error::OutOfRange(format!(
            "y_s = {y_s:.4} < 10; s = {s} is too large"
        )));
    }
    let eta = window_eta(prof, y_s)?;
    let sigma = p.q2.sqrt();
    let big_q = p.q;
    // log of the normalised integrand
    let log_g = |y: f64| -> Result<f64> { Ok(a * y.ln() + prof.q(y)? - s * y - big_q) };
    // ψ for the tails, convex since −a⁺ log y is
    let ap = a.max(0.0);
    let psi = |y: f64| -> Result<(f64, f64)> {
        let v = s * y - prof.q(y)? - ap * y.ln() + big_q;
        let d = s - prof.q1(y)? - ap / y;
        Ok((v, d))
    };

    let mut k = cfg.k_start;
    for _ in 0..=cfg.max_doublings {
        let lo = (y_s - k * eta).max(1.0);
        let hi = y_s + k * eta;
        let (pr, dpr) = psi(hi)?;
        let mut tails = Vec::new();
        if dpr > 0.0 {
            // y^a ≤ hi^a on the right when a < 0
            tails.push(tail_bound(pr, dpr)? + (a - ap) * hi.ln());
        } else {
            k *= 2.0;
            continue;
        }
        if lo > 1.0 {
            let (pl, dpl) = psi(lo)?;
            if dpl < 0.0 {
                tails.push(tail_bound(pl, -dpl)?);
            } else {
                k *= 2.0;
                continue;
            }
        }
        let mut breaks = vec![lo];
        for m in [-8.0, -2.0, 0.0, 2.0, 8.0] {
            let b = y_s + m * sigma;
            if b > lo && b < hi {
                breaks.push(b);
            }
        }
        breaks.push(hi);
        breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
        breaks.dedup();
        let pieces: Vec<Piece> = breaks
            .windows(2)
            .map(|w| Piece::Finite(w[0], w[1]))
            .collect();
        // integrand evaluations fail only on quadrature errors, surfaced after
        let failure = std::cell::RefCell::new(None);
        let f = |y: f64| -> f64 {
            match log_g(y) {
                Ok(l) => l.exp(),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let est = integrate(f, &pieces, cfg.rel_tol, 0.0, 50)?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let window_log = est.value.ln();
        let tail_log = tails.iter().fold(f64::NEG_INFINITY, |acc, &t| {
            let (h, l) = if acc > t { (acc, t) } else { (t, acc) };
            if l == f64::NEG_INFINITY {
                h
            } else {
                h + (l - h).exp().ln_1p()
            }
        });
        if tail_log <= window_log + cfg.rel_tol.ln() {
            return Ok(LaplaceResult {
                log_value: LogMagnitude::from_log(big_q + window_log),
                window: (lo, hi),
                tail_bound_log: big_q + tail_log,
                eta,
                k_final: k,
                y_s,
                angle,
            });
        }
        k *= 2.0;
    }
    Err(Error::Convergence(format!(
        "window does not cover the peak after {} doublings",
        cfg.max_doublings
    )))
}
