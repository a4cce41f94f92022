//! The harmonic extension u(x, y) = log|W(x+iy)| of a weight, its profile
//! q(y) = u(0, y), and the derivative formulas and bounds built on them.
//!
//! Integrals over t ∈ (0, ∞) are taken in v = log(t/scale), where the
//! kernels become functions of v alone and the weight enters through its
//! log-moments.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::quad::{integrate, line_pieces, split_pieces, Piece, QuadConfig};
use crate::weights::LogWeight;

const LN_PI: f64 = 1.144_729_885_849_400_2;
pub(crate) const TAIL_SCALE: f64 = 2.0;
pub(crate) const STD_BREAKS: [f64; 5] = [-8.0, -2.0, 0.0, 2.0, 8.0];

#[derive(Debug, Clone)]
pub struct QProfile {
    pub weight: LogWeight,
    pub quad: QuadConfig,
}

/// ln sech v.
#[inline]
pub(crate) fn ln_sech(v: f64) -> f64 {
    let a = v.abs();
    LN_2 - a - (-2.0 * a).exp().ln_1p()
}

#[inline]
fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// ln(e^v / ((e^v − c)² + s²)) for c ∈ ℝ, s > 0, stable for large |v|.
#[inline]
fn ln_cauchy(v: f64, c: f64, s: f64) -> f64 {
    if v > 0.0 {
        let e = (-v).exp();
        let d = 1.0 - c * e;
        -v - (d * d + s * s * e * e).ln()
    } else {
        let e = v.exp();
        let d = e - c;
        v - (d * d + s * s).ln()
    }
}

/// Breakpoints in v for kernels peaked at t = x when the scale is r.
pub(crate) fn peak_breaks(c: f64, s: f64) -> Vec<f64> {
    let mut b = STD_BREAKS.to_vec();
    if c > s {
        let lc = c.ln();
        b.push(lc);
        for k in [1.0, 4.0, 16.0] {
            let w = k * s;
            b.push((c + w).ln());
            if c - w > 0.0 {
                b.push((c - w).ln());
            }
        }
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBounds {
    pub lower: f64,
    pub q2_abs: f64,
    pub upper: f64,
    pub y_sqrt_q2: f64,
    pub x_threshold: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularDerivatives {
    pub ru_r: f64,
    pub u_thth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub y: f64,
    pub q: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

impl QProfile {
    pub fn new(weight: LogWeight) -> Self {
        Self {
            weight,
            quad: QuadConfig::default(),
        }
    }

    pub fn with_quad(weight: LogWeight, quad: QuadConfig) -> Self {
        Self { weight, quad }
    }

    /// ∫ Σ_j c_j·t^{k_j}φ^{(k_j)}(t)·K(v) dv over v ∈ pieces, with t = e^{log_scale + v}
    /// and K = exp(ln_kernel(v) + pref).
    pub(crate) fn moment_integral<K: Fn(f64) -> f64>(
        &self,
        terms: &[(usize, f64)],
        log_scale: f64,
        pref: f64,
        ln_kernel: K,
        pieces: &[Piece],
    ) -> Result<f64> {
        let w = &self.weight;
        let f = |v: f64| -> f64 {
            let lk = ln_kernel(v) + pref;
            let tau = log_scale + v;
            let mut acc = 0.0;
            for &(k, c) in terms {
                let (l, s) = w.moment(k, tau);
                if s != 0.0 {
                    acc += c * s * (l + lk).exp();
                }
            }
            acc
        };
        let est = match w.knots() {
            Some(k) if terms.iter().any(|&(k, _)| k > 0) => {
                let v: Vec<f64> = k.iter().map(|t| t - log_scale).collect();
                integrate(
                    f,
                    &split_pieces(pieces, &v),
                    self.quad.rel_tol,
                    0.0,
                    self.quad.max_depth,
                )?
            }
            _ => integrate(f, pieces, self.quad.rel_tol, 0.0, self.quad.max_depth)?,
        };
        Ok(est.value)
    }

    fn line(&self) -> Vec<Piece> {
        line_pieces(&STD_BREAKS, TAIL_SCALE)
    }

    fn half_line(&self) -> Vec<Piece> {
        vec![
            Piece::Finite(0.0, 2.0),
            Piece::Finite(2.0, 8.0),
            Piece::Upper {
                from: 8.0,
                scale: TAIL_SCALE,
            },
        ]
    }

    fn check_y(y: f64) -> Result<f64> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::Domain(format!("y must be positive, got {y}")));
        }
        Ok(y.ln())
    }

    fn need_second(&self) -> Result<()> {
        if self.weight.has_second_derivative() {
            Ok(())
        } else {
            Err(Error::Capability(
                "the weight has no second derivative".into(),
            ))
        }
    }

    /// q(y) = (2y/π)∫₀^∞ φ(t)/(t²+y²) dt.
    pub fn q(&self, y: f64) -> Result<f64> {
        let ly = Self::check_y(y)?;
        self.moment_integral(&[(0, 1.0)], ly, -LN_PI, ln_sech, &self.line())
    }

    /// q′(y) = (2/π)∫₀^∞ tφ′(t)/(t²+y²) dt.
    pub fn q1(&self, y: f64) -> Result<f64> {
        let ly = Self::check_y(y)?;
        self.moment_integral(&[(1, 1.0)], ly, -LN_PI - ly, ln_sech, &self.line())
    }

    /// q″ by −(4y/π)∫ tφ′/(t²+y²)² dt.
    pub fn q2_from_first(&self, y: f64) -> Result<f64> {
        let ly = Self::check_y(y)?;
        self.moment_integral(
            &[(1, -1.0)],
            ly,
            -LN_PI - 2.0 * ly,
            |v| -v + 2.0 * ln_sech(v),
            &self.line(),
        )
    }

    /// q″ by (2/(πy))∫ t²φ″/(t²+y²) dt.
    pub fn q2_from_second(&self, y: f64) -> Result<f64> {
        let ly = Self::check_y(y)?;
        self.need_second()?;
        self.moment_integral(&[(2, 1.0)], ly, -LN_PI - 2.0 * ly, ln_sech, &self.line())
    }

    /// q‴(y) from the differentiated second-derivative formula.
    pub fn q3(&self, y: f64) -> Result<f64> {
        let ly = Self::check_y(y)?;
        self.need_second()?;
        let k = |v: f64| {
            let s = ln_sech(v);
            s + (-v + s).exp().ln_1p()
        };
        self.moment_integral(&[(2, -1.0)], ly, -LN_PI - 3.0 * ly, k, &self.line())
    }

    /// q^{(order)}(y), order 1..=3. Order 2 evaluates both formulas and
    /// requires them to agree within 10·rel_tol.
    pub fn derivative(&self, y: f64, order: u8) -> Result<f64> {
        match order {
            1 => self.q1(y),
            2 => {
                let a = self.q2_from_first(y)?;
                let b = self.q2_from_second(y)?;
                if (a - b).abs() > 10.0 * self.quad.rel_tol * a.abs().max(b.abs()) {
                    return Err(Error::Consistency { a, b });
                }
                Ok(a)
            }
            3 => self.q3(y),
            _ => Err(Error::Domain(format!(
                "order must be 1, 2 or 3, got {order}"
            ))),
        }
    }

    /// (4y³/π)∫₀^∞ φ(t)/(t²+y²)² dt.
    pub fn temp_star_rhs(&self, y: f64) -> Result<f64> {
        let ly = Self::check_y(y)?;
        self.moment_integral(
            &[(0, 1.0)],
            ly,
            -LN_PI,
            |v| -v + 2.0 * ln_sech(v),
            &self.line(),
        )
    }

    /// y³∫_y^∞ φ(t)/t⁴ dt.
    pub fn tail_moment4(&self, y: f64) -> Result<f64> {
        let ly = Self::check_y(y)?;
        self.moment_integral(&[(0, 1.0)], ly, 0.0, |v| -3.0 * v, &self.half_line())
    }

    /// y∫_y^∞ φ(t)/t² dt.
    pub fn tail_moment2(&self, y: f64) -> Result<f64> {
        let ly = Self::check_y(y)?;
        self.moment_integral(&[(0, 1.0)], ly, 0.0, |v| -v, &self.half_line())
    }

    fn polar(x: f64, y: f64) -> Result<(f64, f64, f64)> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("need y > 0, got ({x}, {y})")));
        }
        let r = x.hypot(y);
        Ok((r, x.abs() / r, y / r))
    }

    /// u(x, y) via the folded Poisson integral.
    pub fn u(&self, x: f64, y: f64) -> Result<f64> {
        let (r, c, s) = Self::polar(x, y)?;
        let k = move |v: f64| ln_add(ln_cauchy(v, c, s), ln_cauchy(v, -c, s));
        self.moment_integral(
            &[(0, 1.0)],
            r.ln(),
            s.ln() - LN_PI,
            k,
            &line_pieces(&peak_breaks(c, s), TAIL_SCALE),
        )
    }

    /// ∂u/∂x = (4xy/π)∫ tφ′ dt/([(t−x)²+y²][(t+x)²+y²]).
    pub fn u_x(&self, x: f64, y: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::Domain(format!("x must be nonnegative, got {x}")));
        }
        let (r, c, s) = Self::polar(x, y)?;
        if c == 0.0 {
            return Ok(0.0);
        }
        let k = move |v: f64| ln_cauchy(v, c, s) + ln_cauchy(v, -c, s) - v;
        let pref = (4.0 * c * s / PI).ln() - r.ln();
        self.moment_integral(
            &[(1, 1.0)],
            r.ln(),
            pref,
            k,
            &line_pieces(&peak_breaks(c, s), TAIL_SCALE),
        )
    }

    /// r·∂u/∂r and ∂²u/∂θ² at z = re^{iθ}.
    pub fn angular(&self, r: f64, theta: f64) -> Result<AngularDerivatives> {
        if !(r > 0.0) || !(theta > 0.0 && theta < PI) {
            return Err(Error::Domain(format!(
                "need r > 0 and 0 < θ < π, got ({r}, {theta})"
            )));
        }
        self.need_second()?;
        let (c, s) = (theta.cos(), theta.sin());
        let k = move |v: f64| ln_add(ln_cauchy(v, c, s), ln_cauchy(v, -c, s));
        let pieces = line_pieces(&peak_breaks(c.abs(), s), TAIL_SCALE);
        let pref = s.ln() - LN_PI;
        let ru_r = self.moment_integral(&[(1, 1.0)], r.ln(), pref, k, &pieces)?;
        let m = self.moment_integral(&[(2, 1.0), (1, 1.0)], r.ln(), pref, k, &pieces)?;
        Ok(AngularDerivatives { ru_r, u_thth: -m })
    }

    /// φ′(y)/(3πy) ≤ |q″(y)| ≤ (24/(πy))∫_y^∞ φ/t², plus the x-threshold 8|q″|^{−1/2}.
    pub fn derivative_bounds(&self, y: f64) -> Result<DerivativeBounds> {
        let ly = Self::check_y(y)?;
        let d1 = self.weight.moment_value(1, ly);
        let lower = d1 / (3.0 * PI * y * y);
        let q2 = self.q2_from_first(y)?.abs();
        let upper = 24.0 / (PI * y * y) * self.tail_moment2(y)?;
        Ok(DerivativeBounds {
            lower,
            q2_abs: q2,
            upper,
            y_sqrt_q2: y * q2.sqrt(),
            x_threshold: 8.0 / q2.sqrt(),
            lower_ok: lower <= q2 * (1.0 + 1e-9),
            upper_ok: q2 <= upper * (1.0 + 1e-9),
        })
    }

    /// Smallest y in the increasing grid from which on u_x(x, y) ≥ 10/x holds
    /// at x = 8|q″(y)|^{−1/2}·2^k, k = 0..12, for every later grid point.
    pub fn scan_y0(&self, ys: &[f64]) -> Result<Option<f64>> {
        let mut y0 = None;
        for &y in ys.iter().rev() {
            let thr = 8.0 / self.q2_from_first(y)?.abs().sqrt();
            for k in 0..13 {
                let x = thr * 2f64.powi(k);
                if x * self.u_x(x, y)? < 10.0 {
                    return Ok(y0);
                }
            }
            y0 = Some(y);
        }
        Ok(y0)
    }

    pub fn profile_row(&self, y: f64) -> Result<ProfileRow> {
        let b = self.derivative_bounds(y)?;
        Ok(ProfileRow {
            y,
            q: self.q(y)?,
            q1: self.q1(y)?,
            q2: -b.q2_abs,
            q3: if self.weight.has_second_derivative() {
                self.q3(y)?
            } else {
                f64::NAN
            },
            lower_bound: b.lower,
            upper_bound: b.upper,
        })
    }
}

/// Closed forms for φ = |t|^α.
pub mod closed {
    use std::f64::consts::PI;

    pub fn sec(alpha: f64) -> f64 {
        1.0 / (PI * alpha / 2.0).cos()
    }

    /// q^{(k)}(y) for k = 0..=3.
    pub fn q(alpha: f64, y: f64, k: u32) -> f64 {
        let mut c = sec(alpha);
        for j in 0..k {
            c *= alpha - j as f64;
        }
        c * y.powf(alpha - k as f64)
    }

    pub fn u(alpha: f64, x: f64, y: f64) -> f64 {
        let r = x.hypot(y);
        let th = y.atan2(x);
        sec(alpha) * r.powf(alpha) * (alpha * (th - PI / 2.0)).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64) -> QProfile {
        QProfile::new(LogWeight::power(alpha).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn reference_values() {
        let pr = p(0.5);
        assert!(rel(pr.q(1.0).unwrap(), 2f64.sqrt()) < 1e-10);
        assert!(rel(pr.q(4.0).unwrap(), 2.82842712474619) < 1e-10);
        assert!(rel(pr.derivative(4.0, 1).unwrap(), 0.3535533905932738) < 1e-10);
        assert!(rel(pr.derivative(4.0, 2).unwrap(), -0.04419417382415922) < 1e-9);
        assert!(rel(pr.derivative(1.0, 3).unwrap(), 0.5303300858899106) < 1e-9);
        assert!(rel(pr.u(1.0, 1.0).unwrap(), 1.553773974030037) < 1e-9);
        // Re[α sec(απ/2) e^{-iαπ/2} z^{α-1}] at z = 1+i
        assert!(rel(pr.u_x(1.0, 1.0).unwrap(), 0.22754493028111367) < 1e-9);
        assert_eq!(pr.u_x(0.0, 3.0).unwrap(), 0.0);
        let a = pr.angular(1.0, PI / 2.0).unwrap();
        assert!(rel(a.ru_r, 0.5 * 2f64.sqrt()) < 1e-9);
        assert!(rel(a.u_thth, -0.25 * 2f64.sqrt()) < 1e-9);
    }

    #[test]
    fn u_is_even_and_matches_closed_form() {
        let pr = p(0.3);
        for &(x, y) in &[(0.5, 2.0), (30.0, 1.0), (1e3, 10.0), (7.0, 7.0)] {
            let a = pr.u(x, y).unwrap();
            assert!(rel(a, closed::u(0.3, x, y)) < 1e-9, "{x} {y}");
            assert_eq!(a, pr.u(-x, y).unwrap());
        }
    }

    #[test]
    fn bounds_example() {
        let b = p(0.5).derivative_bounds(100.0).unwrap();
        assert!((b.lower - 5.305e-5).abs() < 1e-8);
        assert!((b.q2_abs - 3.536e-4).abs() < 1e-7);
        assert!((b.upper - 1.528e-2).abs() < 1e-5);
        assert!((b.x_threshold - 425.4).abs() < 0.1);
        assert!(b.lower_ok && b.upper_ok);
    }

    #[test]
    fn domain_errors() {
        let pr = p(0.5);
        assert!(pr.q(0.0).is_err());
        assert!(pr.u(1.0, -1.0).is_err());
        assert!(pr.u_x(-1.0, 1.0).is_err());
        assert!(pr.angular(1.0, 0.0).is_err());
        assert!(pr.derivative(1.0, 4).is_err());
    }
}
