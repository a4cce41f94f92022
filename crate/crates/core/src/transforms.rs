//! The analytic function h = log W in the upper half-plane and the inverse
//! Fourier transform of f(z) = (1−iz)^{−2/p}/W(z), computed on the horizontal
//! line through the saddle y_s.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::legendre::{legendre_point_with, SolverConfig};
use crate::logmag::LogMagnitude;
use crate::poisson::{peak_breaks, QProfile, STD_BREAKS, TAIL_SCALE};
use crate::quad::{integrate, line_pieces, Piece};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone)]
pub struct ComplexLogW {
    pub prof: QProfile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierConfig {
    pub rel_tol: f64,
    pub omega_start: f64,
    pub max_doublings: u32,
    /// Points X·2^k, k < `spot_checks`, at which x·u_x ≥ 10 is confirmed.
    pub spot_checks: u32,
    pub solver: SolverConfig,
}

impl Default for FourierConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            omega_start: 8.0,
            max_doublings: 12,
            spot_checks: 24,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierResult {
    pub value: LogMagnitude,
    pub contour_height: f64,
    pub window: (f64, f64),
    /// sup over |x| ≤ 3|q″|^{−1/2} of |Δh + iq′x − |q″|x²/2|.
    pub series_remainder_bound: f64,
    pub omega: f64,
    /// 0.5·y·|q″(y)|^{1/2}
    pub omega_cap: f64,
    pub within_cap: bool,
    pub tail_bound_log: f64,
}

impl FourierResult {
    fn zero() -> Self {
        Self {
            value: LogMagnitude::ZERO,
            contour_height: f64::INFINITY,
            window: (0.0, 0.0),
            series_remainder_bound: 0.0,
            omega: 0.0,
            omega_cap: f64::INFINITY,
            within_cap: true,
            tail_bound_log: f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoBounds {
    pub upper_log: f64,
    pub asym_log: f64,
    pub coarse_log: f64,
}

/// ln(a − b) for |a| possibly huge: returns ln a + ln(1 − b/a) when |a| > 1.
fn ln_diff(ln_a: Complex64, b: Complex64) -> Complex64 {
    if ln_a.re > 0.0 {
        ln_a + (Complex64::new(1.0, 0.0) - b * (-ln_a).exp()).ln()
    } else {
        (ln_a.exp() - b).ln()
    }
}

impl ComplexLogW {
    pub fn new(prof: QProfile) -> Self {
        Self { prof }
    }

    fn complex_integral<K: Fn(f64) -> Complex64>(
        &self,
        log_scale: f64,
        ln_kernel: K,
        pieces: &[Piece],
    ) -> Result<Complex64> {
        let w = &self.prof.weight;
        let f = |v: f64| -> Complex64 {
            let (l, sg) = w.moment(0, log_scale + v);
            if sg == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            (ln_kernel(v) + l).exp() * sg
        };
        Ok(integrate(
            f,
            pieces,
            self.prof.quad.rel_tol,
            0.0,
            self.prof.quad.max_depth,
        )?
        .value)
    }

    /// h(z) = (1/πi)∫₀^∞ 2zφ(t)/(t² − z²) dt.
    pub fn eval_h(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!("need Im z > 0, got {z}")));
        }
        let (r, theta) = z.to_polar();
        let (c, s) = (theta.cos(), theta.sin());
        let e2 = Complex64::from_polar(1.0, 2.0 * theta);
        let pref = Complex64::new((2.0 / PI).ln(), -PI / 2.0 + theta);
        let k = move |v: f64| pref + v - ln_diff(Complex64::new(2.0 * v, 0.0), e2);
        self.complex_integral(
            r.ln(),
            k,
            &line_pieces(&peak_breaks(c.abs(), s), TAIL_SCALE),
        )
    }

    /// h(x+iy) − h(iy), without cancellation near x = 0.
    pub fn delta_h(&self, x: f64, y: f64) -> Result<Complex64> {
        if !(y > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("need y > 0, got ({x}, {y})")));
        }
        if x == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if x < 0.0 {
            return Ok(self.delta_h(-x, y)?.conj());
        }
        let c = x / y;
        let zeta = Complex64::new(c, 1.0);
        let iz = Complex64::new(0.0, 1.0) * zeta;
        let z2 = zeta * zeta;
        let pref = Complex64::new((2.0 / PI).ln() + c.ln(), -PI / 2.0);
        let k = move |v: f64| {
            let l2 = Complex64::new(2.0 * v, 0.0);
            pref + v + ln_diff(l2, -iz) - ln_diff(l2, z2) - ln_diff(l2, Complex64::new(-1.0, 0.0))
        };
        let mut breaks = peak_breaks(c, 1.0);
        breaks.extend_from_slice(&STD_BREAKS);
        self.complex_integral(y.ln(), k, &line_pieces(&breaks, TAIL_SCALE))
    }
}

fn check_p(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("p must lie in [1, ∞], got {p}")));
    }
    Ok(if p.is_infinite() { 0.0 } else { 2.0 / p })
}

/// The inverse transform at s on the line Im z = y_s.
pub fn fourier_inverse_oracle(clw: &ComplexLogW, p: f64, s: f64) -> Result<FourierResult> {
    fourier_inverse_oracle_with(clw, p, s, &FourierConfig::default())
}

pub fn fourier_inverse_oracle_with(
    clw: &ComplexLogW,
    p: f64,
    s: f64,
    cfg: &FourierConfig,
) -> Result<FourierResult> {
    check_p(p)?;
    if !s.is_finite() {
        return Err(Error::Domain(format!("s must be finite, got {s}")));
    }
    if s <= 0.0 {
        return Ok(FourierResult::zero());
    }
    let y_s = legendre_point_with(&clw.prof, s, &cfg.solver, None)?.y_s;
    fourier_at_height(clw, p, s, y_s, cfg)
}

/// (1/√2π)∫ e^{−is(x+iy) − h(x+iy)}(1+y−ix)^{−2/p} dx on the line Im z = y.
pub fn fourier_at_height(
    clw: &ComplexLogW,
    p: f64,
    s: f64,
    y: f64,
    cfg: &FourierConfig,
) -> Result<FourierResult> {
    let expo = check_p(p)?;
    if !(s > 0.0) || !(y > 0.0) {
        return Err(Error::Domain(format!(
            "need s > 0 and y > 0, got ({s}, {y})"
        )));
    }
    let prof = &clw.prof;
    let q = prof.q(y)?;
    let q1 = prof.q1(y)?;
    let q2 = prof.q2_from_first(y)?.abs();
    let sigma = 1.0 / q2.sqrt();
    let log_front = s * y - q - 0.5 * LN_2PI;
    let base = Complex64::new(1.0 + y, 0.0);
    let failure = std::cell::RefCell::new(None);
    let g = |x: f64| -> Complex64 {
        match clw.delta_h(x, y) {
            Ok(dh) => {
                let mut v = (Complex64::new(0.0, -s * x) - dh).exp();
                if expo != 0.0 {
                    v *= (base - Complex64::new(0.0, x)).powf(-expo);
                }
                v
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };

    let mut omega = cfg.omega_start;
    'grow: for _ in 0..=cfg.max_doublings {
        let big_x = omega * sigma;
        for k in 0..cfg.spot_checks {
            let xk = big_x * 2f64.powi(k as i32);
            if xk * prof.u_x(xk, y)? < 10.0 {
                omega *= 2.0;
                continue 'grow;
            }
        }
        let mut breaks = vec![0.0];
        let mut b = sigma;
        while b < big_x {
            breaks.push(b);
            b *= 2.0;
        }
        breaks.push(big_x);
        let pieces: Vec<Piece> = breaks
            .windows(2)
            .map(|w| Piece::Finite(w[0], w[1]))
            .collect();
        let est = integrate(g, &pieces, cfg.rel_tol, 0.0, 50)?;
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let total = 2.0 * est.value.re;
        // |integrand| ≤ e^{−Re Δh(X)}(X/x)^{10}(1+y)^{−2/p} beyond X, on both sides
        let re_dh = clw.delta_h(big_x, y)?.re;
        let tail_log = (2.0 * big_x / 9.0).ln() - re_dh - expo * (1.0 + y).ln();
        if tail_log <= total.abs().ln() + cfg.rel_tol.ln() {
            let mut rem: f64 = 0.0;
            for i in 1..=12 {
                let x = 0.25 * i as f64 * sigma;
                let dh = clw.delta_h(x, y)?;
                rem = rem.max((dh + Complex64::new(0.0, q1 * x) - 0.5 * q2 * x * x).norm());
            }
            let omega_cap = 0.5 * y * q2.sqrt();
            let phase = if total < 0.0 { PI } else { 0.0 };
            return Ok(FourierResult {
                value: LogMagnitude::new(log_front + total.abs().ln(), phase),
                contour_height: y,
                window: (-big_x, big_x),
                series_remainder_bound: rem,
                omega,
                omega_cap,
                within_cap: omega <= omega_cap,
                tail_bound_log: log_front + tail_log,
            });
        }
        omega *= 2.0;
    }
    Err(Error::Convergence(format!(
        "tails did not pass after {} doublings of ω",
        cfg.max_doublings
    )))
}

/// Log-level bound, leading asymptotic and coarse rate for ρ_{p,W}(s).
pub fn rho_bounds(prof: &QProfile, p: f64, s: f64) -> Result<RhoBounds> {
    let inv_p = 0.5 * check_p(p)?;
    let lp = legendre_point_with(prof, s, &SolverConfig::default(), None)?;
    let asym = -lp.q + 0.5 * lp.q2.ln();
    Ok(RhoBounds {
        upper_log: asym - inv_p * lp.y_s.ln(),
        asym_log: asym,
        coarse_log: -lp.q,
    })
}
