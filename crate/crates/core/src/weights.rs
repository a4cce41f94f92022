//! Logarithmic weights φ and the sequences and majorants they come from.
//!
//! Every weight exposes its log-moments `t^k φ^{(k)}(t)`, k = 0, 1, 2, as
//! `(ln|value|, sign)` at `τ = log t`. The Poisson integrals consume these
//! directly, which keeps weights of near-linear growth representable far
//! beyond the range of `f64` arguments.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::special::{digamma, ln_factorials, ln_gamma, trigamma};
use crate::spline::{signed_ln, SlopeSpline};

/// Number of log-grid nodes used to tabulate sequence and majorant weights.
pub const TABLE_NODES: usize = 512;
const KNOT_STRIDE: usize = 8;

/// Signed logarithm: the value is `sign·exp(ln)`.
pub type SignedLn = (f64, f64);

const ZERO_LN: SignedLn = (f64::NEG_INFINITY, 0.0);

// ---------------------------------------------------------------- sequences

#[derive(Debug, Clone, PartialEq)]
pub struct DCSequence {
    log_m: Vec<f64>,
    hull: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OstrowskiValue {
    pub value: f64,
    pub n: usize,
    pub tied_with: Option<usize>,
    pub truncated: bool,
}

impl DCSequence {
    pub fn new(log_m: Vec<f64>) -> Result<Self> {
        if log_m.len() < 3 {
            return Err(Error::Data(
                "a sequence needs entries up to n = 2 at least".into(),
            ));
        }
        if let Some(i) = log_m.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("log M_{i} is not finite")));
        }
        let hull = lower_hull(&log_m);
        Ok(Self { log_m, hull })
    }

    /// One `log M_n` per line starting at n = 0; `#` lines and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut v = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let s = line.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let x: f64 = s
                .parse()
                .map_err(|_| Error::Data(format!("line {}: not a number: {s:?}", lineno + 1)))?;
            v.push(x);
        }
        Self::new(v)
    }

    /// `M_n = (n!)^k`.
    pub fn factorial_power(k: f64, n_max: usize) -> Self {
        let lf = ln_factorials(n_max);
        Self::new(lf.iter().map(|v| k * v).collect()).expect("valid generated sequence")
    }

    /// `log M_n = log n! + n(1+β) log log n` for n ≥ 3, `log n!` below.
    pub fn bang(beta: f64, n_max: usize) -> Self {
        let lf = ln_factorials(n_max);
        let v = lf
            .iter()
            .enumerate()
            .map(|(n, l)| {
                if n >= 3 {
                    l + n as f64 * (1.0 + beta) * (n as f64).ln().ln()
                } else {
                    *l
                }
            })
            .collect();
        Self::new(v).expect("valid generated sequence")
    }

    pub fn n_max(&self) -> usize {
        self.log_m.len() - 1
    }

    pub fn log_m(&self) -> &[f64] {
        &self.log_m
    }

    /// Slopes of the lower hull edges: the log t at which the maximizer moves on.
    fn edge_slope(&self, j: usize) -> f64 {
        let (a, b) = (self.hull[j], self.hull[j + 1]);
        (self.log_m[b] - self.log_m[a]) / (b - a) as f64
    }

    /// Range of log t over which the maximizer is strictly inside `1..n_max`.
    pub fn active_log_range(&self) -> (f64, f64) {
        let e = self.hull.len() - 1;
        (self.edge_slope(0), self.edge_slope(e - 1))
    }
}

fn lower_hull(y: &[f64]) -> Vec<usize> {
    let mut h: Vec<usize> = Vec::new();
    for i in 0..y.len() {
        while h.len() >= 2 {
            let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
            // drop b if it lies on or above the chord a–i
            let lhs = (y[b] - y[a]) * (i - a) as f64;
            let rhs = (y[i] - y[a]) * (b - a) as f64;
            if lhs >= rhs {
                h.pop();
            } else {
                break;
            }
        }
        h.push(i);
    }
    h
}

/// `max_n (n log t − log M_n)` over the whole finite sequence.
pub fn ostrowski_phi(seq: &DCSequence, t: f64) -> Result<OstrowskiValue> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let tau = t.ln();
    let edges = seq.hull.len() - 1;
    // first edge whose slope reaches tau
    let (mut lo, mut hi) = (0usize, edges);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if seq.edge_slope(mid) >= tau {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let val = |n: usize| n as f64 * tau - seq.log_m[n];
    let n = seq.hull[lo];
    let value = val(n);
    let tol = 1e-12 * value.abs().max(1.0);
    let mut tied_with = None;
    if lo + 1 < seq.hull.len() && (val(seq.hull[lo + 1]) - value).abs() <= tol {
        tied_with = Some(seq.hull[lo + 1]);
    }
    if lo > 0 && (val(seq.hull[lo - 1]) - value).abs() <= tol {
        return Ok(OstrowskiValue {
            value: val(seq.hull[lo - 1]).max(value),
            n: seq.hull[lo - 1],
            tied_with: Some(n),
            truncated: n == seq.n_max(),
        });
    }
    let truncated = n == seq.n_max() || tied_with == Some(seq.n_max());
    Ok(OstrowskiValue {
        value,
        n,
        tied_with,
        truncated,
    })
}

#[derive(Debug, Clone)]
pub struct SequenceWeight {
    pub seq: DCSequence,
    pub spline: SlopeSpline,
}

impl SequenceWeight {
    pub fn new(seq: DCSequence) -> Result<Self> {
        let (a, b) = seq.active_log_range();
        let lo = a - 2.0;
        let hi = if b > a + 1.0 { b } else { a + 1.0 };
        let tau: Vec<f64> = (0..TABLE_NODES)
            .map(|i| lo + (hi - lo) * i as f64 / (TABLE_NODES - 1) as f64)
            .collect();
        let mut vals = Vec::with_capacity(TABLE_NODES);
        for &x in &tau {
            vals.push(ostrowski_phi(&seq, x.exp())?.value);
        }
        let spline = SlopeSpline::from_values(tau, &vals)?;
        Ok(Self { seq, spline })
    }
}

// ---------------------------------------------------------------- Bang family

/// Continuous-index Ostrowski weight of the Bang sequence:
/// `φ(e^τ) = sup_{ν≥0} [ντ − L(ν)]`, `L(ν) = lnΓ(ν+1) + (1+β) ν ln ln ν` (last term for ν ≥ e).
#[derive(Debug, Clone)]
pub struct BangWeight {
    pub beta: f64,
    tau_a: f64,
    tau_b: f64,
}

enum BangPoint {
    Zero,
    Small(f64),
    Flat,
    Large(f64),
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

impl BangWeight {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        let e = std::f64::consts::E;
        let tau_a = digamma(e + 1.0);
        Ok(Self {
            beta,
            tau_a,
            tau_b: tau_a + 1.0 + beta,
        })
    }

    fn point(&self, tau: f64) -> BangPoint {
        let e = std::f64::consts::E;
        if tau <= -EULER_GAMMA {
            return BangPoint::Zero;
        }
        if tau < self.tau_a {
            let (mut lo, mut hi) = (0.0, e);
            let mut nu = 0.5 * e;
            for _ in 0..100 {
                let f = digamma(nu + 1.0) - tau;
                if f > 0.0 {
                    hi = nu;
                } else {
                    lo = nu;
                }
                let step = f / trigamma(nu + 1.0);
                let mut next = nu - step;
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                if (next - nu).abs() <= 1e-15 * nu.max(1e-300) || hi - lo < 1e-15 {
                    nu = next;
                    break;
                }
                nu = next;
            }
            return BangPoint::Small(nu);
        }
        if tau <= self.tau_b {
            return BangPoint::Flat;
        }
        let c = 1.0 + self.beta;
        let f = |lam: f64| self.psi_nu(lam) + c * (lam.ln() + 1.0 / lam) - tau;
        let (mut lo, mut hi) = (1.0, tau.max(1.0) + 1.0);
        let mut lam = (tau - c * tau.max(2.0).ln()).clamp(lo + 1e-9, hi - 1e-9);
        for _ in 0..200 {
            let v = f(lam);
            if v > 0.0 {
                hi = lam;
            } else {
                lo = lam;
            }
            let d = self.nu_l2(lam);
            let mut next = lam - v / d;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - lam).abs() <= 4.0 * f64::EPSILON * lam || hi - lo <= 4.0 * f64::EPSILON * hi
            {
                lam = next;
                break;
            }
            lam = next;
        }
        BangPoint::Large(lam)
    }

    /// ψ(ν+1) at ν = e^λ.
    fn psi_nu(&self, lam: f64) -> f64 {
        if lam < 30.0 {
            digamma(lam.exp() + 1.0)
        } else {
            lam + 0.5 * (-lam).exp()
        }
    }

    /// ν·L''(ν) at ν = e^λ (large branch).
    fn nu_l2(&self, lam: f64) -> f64 {
        let c = 1.0 + self.beta;
        let a = if lam < 30.0 {
            let nu = lam.exp();
            nu * trigamma(nu + 1.0)
        } else {
            1.0 - 0.5 * (-lam).exp()
        };
        a + c * (1.0 / lam - 1.0 / (lam * lam))
    }

    /// 1 − ν·L''(ν), computed without cancellation for large ν.
    fn one_minus_nu_l2(&self, lam: f64) -> f64 {
        let c = 1.0 + self.beta;
        let a = if lam < 30.0 {
            let nu = lam.exp();
            1.0 - nu * trigamma(nu + 1.0)
        } else {
            0.5 * (-lam).exp()
        };
        a - c * (1.0 / lam - 1.0 / (lam * lam))
    }

    pub fn moment(&self, k: usize, tau: f64) -> SignedLn {
        let e = std::f64::consts::E;
        match self.point(tau) {
            BangPoint::Zero => ZERO_LN,
            BangPoint::Small(nu) => match k {
                0 => signed_ln(nu * tau - ln_gamma(nu + 1.0)),
                1 => signed_ln(nu),
                _ => signed_ln(1.0 / trigamma(nu + 1.0) - nu),
            },
            BangPoint::Flat => match k {
                0 => signed_ln(e * tau - ln_gamma(e + 1.0)),
                1 => signed_ln(e),
                _ => signed_ln(-e),
            },
            BangPoint::Large(lam) => {
                let c = 1.0 + self.beta;
                match k {
                    0 => {
                        let lg_over_nu = if lam < 20.0 {
                            ln_gamma(lam.exp() + 1.0) / lam.exp()
                        } else {
                            let inv = (-lam).exp();
                            lam - 1.0
                                + inv
                                    * (0.5 * ((2.0 * std::f64::consts::PI).ln() + lam) + inv / 12.0)
                        };
                        let r = tau - lg_over_nu - c * lam.ln();
                        let (l, s) = signed_ln(r);
                        (lam + l, s)
                    }
                    1 => (lam, 1.0),
                    _ => {
                        let num = self.one_minus_nu_l2(lam);
                        let den = self.nu_l2(lam);
                        let (l, s) = signed_ln(num / den);
                        (lam + l, s)
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------- majorants

#[derive(Clone)]
pub enum MajorantKind {
    /// `m(ξ) = ξ^{-β}`.
    InvPower {
        beta: f64,
    },
    /// Samples `(ξ, m)` with ξ increasing in (0, 1]; linear in (ln ξ, ln m) between samples.
    Table {
        log_xi: Vec<f64>,
        m: Vec<f64>,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

#[derive(Clone)]
pub struct Majorant {
    pub kind: MajorantKind,
}

impl fmt::Debug for Majorant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MajorantKind::InvPower { beta } => write!(f, "Majorant(inv-power {beta})"),
            MajorantKind::Table { log_xi, .. } => {
                write!(f, "Majorant(table, {} rows)", log_xi.len())
            }
            MajorantKind::Custom(_) => write!(f, "Majorant(custom)"),
        }
    }
}

impl Majorant {
    pub fn inv_power(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        Ok(Self {
            kind: MajorantKind::InvPower { beta },
        })
    }

    pub fn custom(m: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            kind: MajorantKind::Custom(Arc::new(m)),
        }
    }

    /// Rows `ξ,log M` (an optional non-numeric header line is skipped).
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<(f64, f64)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let s = line.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = s.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::Data(format!("line {}: expected two columns", i + 1)));
            }
            match (parts[0].parse::<f64>(), parts[1].parse::<f64>()) {
                (Ok(x), Ok(m)) => rows.push((x, m)),
                _ if rows.is_empty() && i == 0 => continue,
                _ => return Err(Error::Data(format!("line {}: not numeric", i + 1))),
            }
        }
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if rows.len() < 2 {
            return Err(Error::Data("majorant table needs at least two rows".into()));
        }
        if rows
            .iter()
            .any(|(x, m)| !(*x > 0.0 && *x <= 1.0) || !(*m > 0.0) || !m.is_finite())
        {
            return Err(Error::Data(
                "majorant rows need 0 < ξ ≤ 1 and finite positive log M".into(),
            ));
        }
        Ok(Self {
            kind: MajorantKind::Table {
                log_xi: rows.iter().map(|r| r.0.ln()).collect(),
                m: rows.iter().map(|r| r.1).collect(),
            },
        })
    }

    /// `m(ξ) = log 𝓜(ξ)`, with `𝓜(ξ) = 𝓜(1−0)` for ξ ≥ 1.
    pub fn log_m(&self, xi: f64) -> f64 {
        let xi = xi.min(1.0);
        match &self.kind {
            MajorantKind::InvPower { beta } => xi.powf(-beta),
            MajorantKind::Custom(f) => f(xi),
            MajorantKind::Table { log_xi, m } => {
                let w = xi.ln();
                let n = log_xi.len();
                if w >= log_xi[n - 1] {
                    return m[n - 1];
                }
                let (i, j) = if w <= log_xi[0] {
                    (0, 1)
                } else {
                    let k = log_xi.partition_point(|x| *x <= w);
                    (k - 1, k)
                };
                let s = (m[j].ln() - m[i].ln()) / (log_xi[j] - log_xi[i]);
                (m[i].ln() + s * (w - log_xi[i])).exp()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerLegendre {
    pub value: f64,
    pub xi: f64,
}

const XI_SCAN_LO: f64 = -200.0;
const XI_SCAN_STEP: f64 = 0.25;

/// `inf_{0<ξ<1} [m(ξ) + rξ]`.
pub fn lower_legendre_phi(maj: &Majorant, r: f64) -> Result<LowerLegendre> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    let f = |w: f64| maj.log_m(w.exp()) + r * w.exp();
    let n = ((-XI_SCAN_LO) / XI_SCAN_STEP) as usize;
    let mut best = (f64::INFINITY, 0usize);
    for i in 0..=n {
        let w = XI_SCAN_LO + XI_SCAN_STEP * i as f64;
        let v = f(w);
        if v.is_nan() || v == f64::NEG_INFINITY {
            return Err(Error::Evaluation(format!(
                "log M is not finite at xi = {:e}",
                w.exp()
            )));
        }
        if v < best.0 {
            best = (v, i);
        }
    }
    if !best.0.is_finite() {
        return Err(Error::Evaluation(
            "log M is infinite on the whole search grid".into(),
        ));
    }
    let i = best.1;
    let mut a = XI_SCAN_LO + XI_SCAN_STEP * i.saturating_sub(1) as f64;
    let mut b = (XI_SCAN_LO + XI_SCAN_STEP * (i + 1) as f64).min(0.0);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let w = 0.5 * (a + b);
    let (mut value, mut xi) = (f(w), w.exp());
    if best.0 < value {
        value = best.0;
        xi = (XI_SCAN_LO + XI_SCAN_STEP * i as f64).exp();
    }
    Ok(LowerLegendre { value, xi })
}

#[derive(Debug, Clone)]
pub struct MajorantWeight {
    pub majorant: Majorant,
    pub spline: SlopeSpline,
}

impl MajorantWeight {
    /// Tabulates φ on `r ∈ [1e-3, 1e30]`; the node slopes `rφ'(r) = rξ_r` are exact.
    pub fn new(majorant: Majorant) -> Result<Self> {
        let (lo, hi) = ((1e-3f64).ln(), (1e30f64).ln());
        let tau: Vec<f64> = (0..TABLE_NODES)
            .map(|i| lo + (hi - lo) * i as f64 / (TABLE_NODES - 1) as f64)
            .collect();
        let mut g = Vec::with_capacity(TABLE_NODES);
        let mut phi0 = 0.0;
        for (i, &x) in tau.iter().enumerate() {
            let r = x.exp();
            let ll = lower_legendre_phi(&majorant, r)?;
            if i == 0 {
                phi0 = ll.value;
            }
            g.push(r * ll.xi);
        }
        let spline = SlopeSpline::from_slopes(tau, g, phi0)?;
        Ok(Self { majorant, spline })
    }
}

// ---------------------------------------------------------------- LogWeight

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A weight given by closures for φ, φ′ and optionally φ″ on t > 0.
#[derive(Clone)]
pub struct Synthetic {
    pub f0: Eval,
    pub f1: Eval,
    pub f2: Option<Eval>,
}

#[derive(Clone)]
pub enum Family {
    Power { alpha: f64 },
    Sequence(Arc<SequenceWeight>),
    Bang(Arc<BangWeight>),
    Majorant(Arc<MajorantWeight>),
    Table(Arc<SlopeSpline>),
    Synthetic(Arc<Synthetic>),
}

#[derive(Clone)]
pub struct LogWeight {
    pub family: Family,
    /// Smallest t at which derivative formulas are trusted.
    pub domain_floor: f64,
    pub label: String,
}

impl fmt::Debug for LogWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogWeight({})", self.label)
    }
}

impl LogWeight {
    fn wrap(family: Family, label: String) -> Self {
        Self {
            family,
            domain_floor: 0.0,
            label,
        }
    }

    /// `φ(t) = |t|^α`, 0 < α < 1.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(Self::wrap(
            Family::Power { alpha },
            format!("power({alpha})"),
        ))
    }

    /// `φ(t) = c|t|^α` as a closure-backed weight.
    pub fn scaled_power(c: f64, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || !(c > 0.0) {
            return Err(Error::Domain("need c > 0 and 0 < alpha < 1".into()));
        }
        let w = Synthetic {
            f0: Arc::new(move |t: f64| c * t.powf(alpha)),
            f1: Arc::new(move |t: f64| c * alpha * t.powf(alpha - 1.0)),
            f2: Some(Arc::new(move |t: f64| {
                c * alpha * (alpha - 1.0) * t.powf(alpha - 2.0)
            })),
        };
        Ok(Self::wrap(
            Family::Synthetic(Arc::new(w)),
            format!("{c}*t^{alpha}"),
        ))
    }

    /// `φ(t) = √(2t)`, whose profile is exactly `q(y) = 2√y`.
    pub fn sqrt_profile() -> Self {
        let mut w = Self::scaled_power(std::f64::consts::SQRT_2, 0.5).expect("valid");
        w.label = "synthetic(q=2*sqrt(y))".into();
        w
    }

    pub fn synthetic(s: Synthetic, label: impl Into<String>) -> Self {
        Self::wrap(Family::Synthetic(Arc::new(s)), label.into())
    }

    pub fn sequence(seq: DCSequence) -> Result<Self> {
        let n = seq.n_max();
        Ok(Self::wrap(
            Family::Sequence(Arc::new(SequenceWeight::new(seq)?)),
            format!("sequence(n_max={n})"),
        ))
    }

    pub fn bang(beta: f64) -> Result<Self> {
        Ok(Self::wrap(
            Family::Bang(Arc::new(BangWeight::new(beta)?)),
            format!("bang({beta})"),
        ))
    }

    pub fn majorant(maj: Majorant) -> Result<Self> {
        let label = format!("{maj:?}");
        Ok(Self::wrap(
            Family::Majorant(Arc::new(MajorantWeight::new(maj)?)),
            label,
        ))
    }

    /// Table of `(t, φ(t))` samples, t increasing and positive.
    pub fn table(t: &[f64], phi: &[f64]) -> Result<Self> {
        if t.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::Data("table abscissae must be positive".into()));
        }
        if phi.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Data("table values must be nondecreasing".into()));
        }
        let tau = t.iter().map(|x| x.ln()).collect();
        Ok(Self::wrap(
            Family::Table(Arc::new(SlopeSpline::from_values(tau, phi)?)),
            "table".into(),
        ))
    }

    /// Points in τ = log t where a table-backed weight needs panel breaks.
    pub fn knots(&self) -> Option<Vec<f64>> {
        let s = match &self.family {
            Family::Sequence(w) => &w.spline,
            Family::Majorant(w) => &w.spline,
            Family::Table(s) => s,
            _ => return None,
        };
        Some(s.knots(KNOT_STRIDE))
    }

    pub fn has_second_derivative(&self) -> bool {
        match &self.family {
            Family::Synthetic(s) => s.f2.is_some(),
            _ => true,
        }
    }

    /// `(ln|t^k φ^{(k)}(t)|, sign)` at `τ = ln t`.
    pub fn moment(&self, k: usize, tau: f64) -> SignedLn {
        match &self.family {
            Family::Power { alpha } => {
                let c = match k {
                    0 => 1.0,
                    1 => *alpha,
                    _ => alpha * (alpha - 1.0),
                };
                let (l, s) = signed_ln(c);
                (alpha * tau + l, s)
            }
            Family::Sequence(w) => w.spline.moment(k, tau),
            Family::Majorant(w) => w.spline.moment(k, tau),
            Family::Table(s) => s.moment(k, tau),
            Family::Bang(b) => b.moment(k, tau),
            Family::Synthetic(s) => {
                let t = tau.exp();
                if t == 0.0 || !t.is_finite() {
                    // t outside the f64 range
                    return (f64::NEG_INFINITY, 0.0);
                }
                let v = match k {
                    0 => (s.f0)(t),
                    1 => t * (s.f1)(t),
                    _ => match &s.f2 {
                        Some(f) => t * (t * f(t)),
                        None => f64::NAN,
                    },
                };
                signed_ln(v)
            }
        }
    }

    /// `t^k φ^{(k)}(t)` as a plain number.
    pub fn moment_value(&self, k: usize, tau: f64) -> f64 {
        let (l, s) = self.moment(k, tau);
        if s == 0.0 {
            0.0
        } else {
            s * l.exp()
        }
    }

    /// φ(|t|), with φ(0) taken as the limit from the right.
    pub fn phi(&self, t: f64) -> f64 {
        let a = t.abs();
        if a == 0.0 {
            return self.moment_value(0, -745.0);
        }
        self.moment_value(0, a.ln())
    }
}

/// φ(t), φ′(t) or φ″(t) for t > 0.
pub fn eval_weight(w: &LogWeight, t: f64, order: u8) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if order > 2 {
        return Err(Error::Domain(format!(
            "order must be 0, 1 or 2, got {order}"
        )));
    }
    if order == 2 && !w.has_second_derivative() {
        return Err(Error::Capability("second derivative not provided".into()));
    }
    let tau = t.ln();
    let (l, s) = w.moment(order as usize, tau);
    if s == 0.0 {
        return Ok(0.0);
    }
    let v = s * (l - order as f64 * tau).exp();
    if v.is_nan() {
        return Err(Error::Evaluation(format!("weight returned NaN at t = {t}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_values() {
        let w = LogWeight::power(0.5).unwrap();
        assert!((eval_weight(&w, 4.0, 0).unwrap() - 2.0).abs() < 1e-14);
        assert!((eval_weight(&w, 100.0, 1).unwrap() - 0.05).abs() < 1e-15);
        assert!((eval_weight(&w, 4.0, 2).unwrap() + 0.25 * 0.125).abs() < 1e-15);
        assert!(eval_weight(&w, 0.0, 0).is_err());
        assert!(eval_weight(&w, 1.0, 3).is_err());
        assert!((w.phi(-9.0) - 3.0).abs() < 1e-14);
        assert!(LogWeight::power(1.5).is_err());
    }

    #[test]
    fn synthetic_without_second_derivative() {
        let s = Synthetic {
            f0: Arc::new(|t: f64| t.sqrt()),
            f1: Arc::new(|t: f64| 0.5 / t.sqrt()),
            f2: None,
        };
        let w = LogWeight::synthetic(s, "sqrt");
        assert!(matches!(eval_weight(&w, 2.0, 2), Err(Error::Capability(_))));
    }

    #[test]
    fn ostrowski_examples() {
        let fact = DCSequence::factorial_power(1.0, 100);
        let v = ostrowski_phi(&fact, 1.0).unwrap();
        assert_eq!(v.n, 0);
        assert_eq!(v.value, 0.0);
        let v = ostrowski_phi(&fact, std::f64::consts::E).unwrap();
        assert_eq!(v.n, 2);
        assert!((v.value - (2.0 - 2f64.ln())).abs() < 1e-14);
        let sq = DCSequence::factorial_power(2.0, 1000);
        let v = ostrowski_phi(&sq, 100.0).unwrap();
        assert_eq!(v.n, 9);
        assert_eq!(v.tied_with, Some(10));
        assert!((v.value - 15.8429).abs() < 1e-4);
        assert!(!v.truncated);
    }

    #[test]
    fn ostrowski_flags_truncation() {
        let s = DCSequence::new(vec![0.0; 10]).unwrap();
        let v = ostrowski_phi(&s, 3.0).unwrap();
        assert_eq!(v.n, 9);
        assert!(v.truncated);
    }

    #[test]
    fn parse_sequence_file() {
        let s = DCSequence::parse("# log M_n\n0\n0\n0.6931471805599453\n\n1.791759469228055\n")
            .unwrap();
        assert_eq!(s.n_max(), 3);
        assert!(DCSequence::parse("0\nx\n1\n").is_err());
        assert!(DCSequence::parse("0\n1\n").is_err());
    }

    #[test]
    fn lower_legendre_examples() {
        let m = Majorant::inv_power(1.0).unwrap();
        let a = lower_legendre_phi(&m, 1.0).unwrap();
        assert!((a.value - 2.0).abs() < 1e-10);
        assert!((a.xi - 1.0).abs() < 1e-5);
        let b = lower_legendre_phi(&m, 100.0).unwrap();
        assert!((b.value - 20.0).abs() < 1e-10);
        assert!((b.xi - 0.1).abs() < 1e-6);
        let c = Majorant::custom(|_| 3.0);
        let v = lower_legendre_phi(&c, 1.0).unwrap();
        assert!((v.value - 3.0).abs() < 1e-12);
        assert!(v.xi < 1e-80);
    }

    #[test]
    fn majorant_table_parse() {
        let m = Majorant::parse_csv("xi,logM\n0.01,100\n0.1,10\n1,1\n").unwrap();
        assert!((m.log_m(0.1) - 10.0).abs() < 1e-12);
        assert!((m.log_m(0.001) - 1000.0).abs() < 1e-9);
        assert!((m.log_m(2.0) - 1.0).abs() < 1e-12);
        assert!(Majorant::parse_csv("0.5,1\n").is_err());
    }

    #[test]
    fn bang_weight_is_smooth_and_consistent() {
        let w = LogWeight::bang(1.0).unwrap();
        for &tau in &[0.3, 1.0, 2.5, 5.0, 12.0, 40.0, 300.0] {
            let h = 1e-5;
            let f = |x: f64| w.moment_value(0, x);
            let d1 = (f(tau + h) - f(tau - h)) / (2.0 * h);
            let g = w.moment_value(1, tau);
            if tau < 40.0 {
                assert!((d1 / g - 1.0).abs() < 1e-5, "tau={tau} {d1} {g}");
            }
            let gd = (w.moment_value(1, tau + h) - w.moment_value(1, tau - h)) / (2.0 * h);
            let d2 = w.moment_value(2, tau) + g;
            if tau < 40.0 {
                assert!(
                    (gd - d2).abs() < 1e-4 * d2.abs().max(1.0),
                    "tau={tau} {gd} {d2}"
                );
            }
        }
        // log-moments stay finite far beyond f64 arguments
        let (l, s) = w.moment(1, 5000.0);
        assert!(l.is_finite() && s > 0.0 && l < 5000.0);
        let (l0, _) = w.moment(0, 5000.0);
        assert!(l0 < 5000.0 && l0 > 4980.0);
    }

    #[test]
    fn bang_matches_integer_ostrowski() {
        let w = LogWeight::bang(1.0).unwrap();
        let seq = DCSequence::bang(1.0, 5000);
        for &t in &[30.0, 300.0, 3000.0] {
            let exact = ostrowski_phi(&seq, t).unwrap().value;
            let cont = w.phi(t);
            assert!(
                cont >= exact - 1e-9 && cont - exact < 0.1,
                "t={t} {cont} {exact}"
            );
        }
    }

    #[test]
    fn sequence_weight_tracks_ostrowski() {
        let w = LogWeight::sequence(DCSequence::factorial_power(2.0, 2000)).unwrap();
        let v = eval_weight(&w, 100.0, 0).unwrap();
        assert!((v - 15.8429).abs() < 0.05, "{v}");
        assert!(eval_weight(&w, 100.0, 2).unwrap().is_finite());
    }
}
