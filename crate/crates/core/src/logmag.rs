//! Numbers stored as (log-modulus, phase).

use std::f64::consts::PI;
use std::ops::{Div, Mul, Neg};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMagnitude {
    pub log_abs: f64,
    pub phase: f64,
    pub is_zero: bool,
}

fn wrap(p: f64) -> f64 {
    let mut r = p.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    if r <= -PI {
        r += 2.0 * PI;
    }
    r
}

impl LogMagnitude {
    pub const ZERO: LogMagnitude = LogMagnitude {
        log_abs: f64::NEG_INFINITY,
        phase: 0.0,
        is_zero: true,
    };

    pub fn new(log_abs: f64, phase: f64) -> Self {
        if log_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log_abs,
            phase: wrap(phase),
            is_zero: false,
        }
    }

    pub fn from_log(log_abs: f64) -> Self {
        Self::new(log_abs, 0.0)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(x.abs().ln(), if x < 0.0 { PI } else { 0.0 })
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.norm() == 0.0 {
            Self::ZERO
        } else {
            Self::new(z.norm().ln(), z.arg())
        }
    }

    /// exp(w) for complex w.
    pub fn exp(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.log_abs.exp(), self.phase)
        }
    }

    /// Real part as f64; overflows to ±inf for large moduli.
    pub fn to_f64(self) -> f64 {
        self.to_complex().re
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        if self.is_zero {
            return other;
        }
        if other.is_zero {
            return self;
        }
        let (big, small) = if self.log_abs >= other.log_abs {
            (self, other)
        } else {
            (other, self)
        };
        let d = small.log_abs - big.log_abs;
        let e = d.exp();
        let dphi = wrap(small.phase - big.phase);
        if dphi == 0.0 {
            return Self::new(big.log_abs + e.ln_1p(), big.phase);
        }
        if dphi == PI {
            if d == 0.0 {
                return Self::ZERO;
            }
            return Self::new(big.log_abs + (-e).ln_1p(), big.phase);
        }
        let (s, c) = dphi.sin_cos();
        let re = 1.0 + e * c;
        let im = e * s;
        let half_log = 0.5 * (e * (2.0 * c + e)).ln_1p();
        Self::new(big.log_abs + half_log, big.phase + im.atan2(re))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Self) -> Self {
        self.add(-other)
    }

    pub fn powf(self, p: f64) -> Self {
        if self.is_zero {
            return self;
        }
        Self::new(self.log_abs * p, self.phase * p)
    }
}

impl Neg for LogMagnitude {
    type Output = Self;
    fn neg(self) -> Self {
        if self.is_zero {
            self
        } else {
            Self::new(self.log_abs, self.phase + PI)
        }
    }
}

impl Mul for LogMagnitude {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_zero || o.is_zero {
            return Self::ZERO;
        }
        Self::new(self.log_abs + o.log_abs, self.phase + o.phase)
    }
}

impl Div for LogMagnitude {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        if self.is_zero {
            return Self::ZERO;
        }
        Self::new(self.log_abs - o.log_abs, self.phase - o.phase)
    }
}
