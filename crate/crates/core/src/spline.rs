//! Table-backed weights: a monotone C¹ interpolant of the log-slope
//! g(τ) = dφ/dτ (τ = log t), integrated once, so φ is C² and nondecreasing.
//! Outside the table φ continues as a power law matched to first order.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SlopeSpline {
    tau: Vec<f64>,
    g: Vec<f64>,
    m: Vec<f64>,
    phi: Vec<f64>,
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = d[0];
        m[1] = d[0];
        return m;
    }
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let mut v = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if v * d0 <= 0.0 {
            v = 0.0;
        } else if d0 * d1 < 0.0 && v.abs() > 3.0 * d0.abs() {
            v = 3.0 * d0;
        }
        v
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

impl SlopeSpline {
    /// From node log-slopes `g` (all ≥ 0) and the value of φ at the first node.
    pub fn from_slopes(tau: Vec<f64>, g: Vec<f64>, phi0: f64) -> Result<Self> {
        if tau.len() < 3 || tau.len() != g.len() {
            return Err(Error::Data("spline needs at least 3 matching nodes".into()));
        }
        if tau.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Data("spline nodes must increase".into()));
        }
        if g.iter().any(|v| !v.is_finite() || *v < 0.0) || !phi0.is_finite() {
            return Err(Error::Data("slopes must be finite and nonnegative".into()));
        }
        let m = pchip_slopes(&tau, &g);
        let mut s = Self {
            tau,
            g,
            m,
            phi: Vec::new(),
        };
        let mut phi = Vec::with_capacity(s.tau.len());
        phi.push(phi0);
        for i in 0..s.tau.len() - 1 {
            let last = phi[i];
            phi.push(last + s.integral_in(i, 1.0));
        }
        s.phi = phi;
        Ok(s)
    }

    /// From node values of φ; node slopes are averages of the adjacent secants.
    pub fn from_values(tau: Vec<f64>, phi: &[f64]) -> Result<Self> {
        let n = tau.len();
        if n < 3 || phi.len() != n {
            return Err(Error::Data("spline needs at least 3 matching nodes".into()));
        }
        let sec: Vec<f64> = (0..n - 1)
            .map(|i| ((phi[i + 1] - phi[i]) / (tau[i + 1] - tau[i])).max(0.0))
            .collect();
        let mut g = vec![0.0; n];
        g[0] = sec[0];
        g[n - 1] = sec[n - 2];
        for i in 1..n - 1 {
            g[i] = 0.5 * (sec[i - 1] + sec[i]);
        }
        Self::from_slopes(tau, g, phi[0])
    }

    fn integral_in(&self, i: usize, s: f64) -> f64 {
        let h = self.tau[i + 1] - self.tau[i];
        let s2 = s * s;
        let s3 = s2 * s;
        let s4 = s3 * s;
        let h00 = 0.5 * s4 - s3 + s;
        let h10 = 0.25 * s4 - 2.0 * s3 / 3.0 + 0.5 * s2;
        let h01 = -0.5 * s4 + s3;
        let h11 = 0.25 * s4 - s3 / 3.0;
        h * (self.g[i] * h00 + h * self.m[i] * h10 + self.g[i + 1] * h01 + h * self.m[i + 1] * h11)
    }

    pub fn tau_range(&self) -> (f64, f64) {
        (self.tau[0], *self.tau.last().unwrap())
    }

    /// (φ, dφ/dτ, d²φ/dτ²) inside the table.
    pub fn eval_inside(&self, tau: f64) -> (f64, f64, f64) {
        let n = self.tau.len();
        let i = match self.tau.binary_search_by(|x| x.partial_cmp(&tau).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.tau[i + 1] - self.tau[i];
        let s = ((tau - self.tau[i]) / h).clamp(0.0, 1.0);
        let s2 = s * s;
        let s3 = s2 * s;
        let g = self.g[i] * (2.0 * s3 - 3.0 * s2 + 1.0)
            + h * self.m[i] * (s3 - 2.0 * s2 + s)
            + self.g[i + 1] * (-2.0 * s3 + 3.0 * s2)
            + h * self.m[i + 1] * (s3 - s2);
        let dg = (self.g[i] * (6.0 * s2 - 6.0 * s)
            + h * self.m[i] * (3.0 * s2 - 4.0 * s + 1.0)
            + self.g[i + 1] * (-6.0 * s2 + 6.0 * s)
            + h * self.m[i + 1] * (3.0 * s2 - 2.0 * s))
            / h;
        (self.phi[i] + self.integral_in(i, s), g, dg)
    }

    /// Log-moments ln|t^k φ^{(k)}(t)| with signs, k = 0, 1, 2, at τ = log t.
    pub fn moment(&self, k: usize, tau: f64) -> (f64, f64) {
        let (lo, hi) = self.tau_range();
        if tau >= lo && tau <= hi {
            let (p, g, dg) = self.eval_inside(tau);
            let v = match k {
                0 => p,
                1 => g,
                _ => dg - g,
            };
            return signed_ln(v);
        }
        let (edge, i) = if tau > hi {
            (hi, self.tau.len() - 1)
        } else {
            (lo, 0)
        };
        let p0 = self.phi[i];
        if p0 <= 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        // power law t^p matched in value and slope at the edge
        let p = self.g[i] / p0;
        let ln0 = p0.ln() + p * (tau - edge);
        match k {
            0 => (ln0, 1.0),
            1 => {
                if p == 0.0 {
                    (f64::NEG_INFINITY, 0.0)
                } else {
                    (ln0 + p.ln(), 1.0)
                }
            }
            _ => {
                let c = p * p - p;
                let (l, s) = signed_ln(c);
                (ln0 + l, s)
            }
        }
    }

    /// Every `stride`-th node and the last one, in τ.
    pub fn knots(&self, stride: usize) -> Vec<f64> {
        let mut k: Vec<f64> = self.tau.iter().step_by(stride.max(1)).copied().collect();
        if k.last() != self.tau.last() {
            k.push(*self.tau.last().unwrap());
        }
        k
    }

    pub fn edge_exponent(&self) -> f64 {
        let i = self.tau.len() - 1;
        if self.phi[i] > 0.0 {
            self.g[i] / self.phi[i]
        } else {
            0.0
        }
    }
}

pub fn signed_ln(v: f64) -> (f64, f64) {
    if v == 0.0 {
        (f64::NEG_INFINITY, 0.0)
    } else {
        (v.abs().ln(), v.signum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_exponential_slope() {
        // φ = e^{τ/2}: g = φ/2
        let tau: Vec<f64> = (0..200).map(|i| -5.0 + 0.1 * i as f64).collect();
        let g: Vec<f64> = tau.iter().map(|t| 0.5 * (0.5 * t).exp()).collect();
        let s = SlopeSpline::from_slopes(tau, g, (-2.5f64).exp()).unwrap();
        for &t in &[-3.0, 0.05, 7.77, 14.0] {
            let (p, g, dg) = s.eval_inside(t);
            let e = (0.5 * t).exp();
            assert!((p / e - 1.0).abs() < 1e-5, "{t} {p} {e}");
            assert!((g / (0.5 * e) - 1.0).abs() < 1e-4);
            assert!((dg / (0.25 * e) - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn extension_is_continuous_in_value_and_slope() {
        let tau: Vec<f64> = (0..50).map(|i| 0.2 * i as f64).collect();
        let vals: Vec<f64> = tau.iter().map(|t| (0.4 * t).exp()).collect();
        let s = SlopeSpline::from_values(tau, &vals).unwrap();
        let hi = s.tau_range().1;
        for k in 0..2 {
            let a = s.moment(k, hi - 1e-9);
            let b = s.moment(k, hi + 1e-9);
            assert!((a.0 - b.0).abs() < 1e-6, "k={k} {a:?} {b:?}");
        }
    }

    #[test]
    fn slopes_stay_nonnegative_for_steps() {
        let tau: Vec<f64> = (0..100).map(|i| 0.05 * i as f64).collect();
        let g: Vec<f64> = tau.iter().map(|t| t.floor()).collect();
        let s = SlopeSpline::from_slopes(tau, g, 0.0).unwrap();
        for i in 0..1000 {
            let (_, g, _) = s.eval_inside(0.004_95 * i as f64);
            assert!(g >= 0.0);
        }
    }
}
