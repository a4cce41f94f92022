//! Grid diagnostics for the standing hypotheses on a weight, on its profile
//! q, and on a majorant. Verdicts are heuristic: a violation at a grid point
//! fails, a trend that holds over the top two decades passes, anything else
//! is inconclusive.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poisson::QProfile;
use crate::quad::integrate_finite;
use crate::weights::{Family, LogWeight, Majorant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionId {
    I,
    Ii,
    Iii,
    IvA,
    IvB,
    V,
    Vi,
    Vii,
    LogLog,
    Growth,
    Convex,
    LaplaceA,
    LaplaceB,
    LaplaceC,
    LaplaceD,
    LaplaceE,
}

impl ConditionId {
    pub const ALL: [ConditionId; 16] = [
        Self::I,
        Self::Ii,
        Self::Iii,
        Self::IvA,
        Self::IvB,
        Self::V,
        Self::Vi,
        Self::Vii,
        Self::LogLog,
        Self::Growth,
        Self::Convex,
        Self::LaplaceA,
        Self::LaplaceB,
        Self::LaplaceC,
        Self::LaplaceD,
        Self::LaplaceE,
    ];

    /// The conditions that concern the weight alone.
    pub const WEIGHT: [ConditionId; 8] = [
        Self::I,
        Self::Ii,
        Self::Iii,
        Self::IvA,
        Self::IvB,
        Self::V,
        Self::Vi,
        Self::Vii,
    ];

    pub const PROFILE: [ConditionId; 5] = [
        Self::LaplaceA,
        Self::LaplaceB,
        Self::LaplaceC,
        Self::LaplaceD,
        Self::LaplaceE,
    ];

    pub const MAJORANT: [ConditionId; 3] = [Self::LogLog, Self::Growth, Self::Convex];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::I => "i",
            Self::Ii => "ii",
            Self::Iii => "iii",
            Self::IvA => "iv-a",
            Self::IvB => "iv-b",
            Self::V => "v",
            Self::Vi => "vi",
            Self::Vii => "vii",
            Self::LogLog => "loglog",
            Self::Growth => "growth",
            Self::Convex => "convex",
            Self::LaplaceA => "laplace-a",
            Self::LaplaceB => "laplace-b",
            Self::LaplaceC => "laplace-c",
            Self::LaplaceD => "laplace-d",
            Self::LaplaceE => "laplace-e",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown condition '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionOutcome {
    pub id: ConditionId,
    pub verdict: Verdict,
    pub witness: Vec<f64>,
    pub diagnostics: Vec<(String, f64)>,
}

impl ConditionOutcome {
    fn new(id: ConditionId, verdict: Verdict) -> Self {
        Self {
            id,
            verdict,
            witness: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn fail(id: ConditionId, at: f64) -> Self {
        Self {
            id,
            verdict: Verdict::Fail,
            witness: vec![at],
            diagnostics: Vec::new(),
        }
    }

    fn diag(mut self, name: &str, v: f64) -> Self {
        self.diagnostics.push((name.to_string(), v));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConditionReport {
    pub outcomes: Vec<ConditionOutcome>,
}

impl ConditionReport {
    pub fn get(&self, id: ConditionId) -> Option<&ConditionOutcome> {
        self.outcomes.iter().find(|o| o.id == id)
    }

    pub fn verdict(&self, id: ConditionId) -> Option<Verdict> {
        self.get(id).map(|o| o.verdict)
    }

    pub fn any_fail(&self) -> bool {
        self.outcomes.iter().any(|o| o.verdict == Verdict::Fail)
    }
}

/// n log-spaced points on [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

/// Indices of grid points within the top two decades.
fn top_two_decades(grid: &[f64]) -> Vec<usize> {
    let hi = *grid.last().unwrap();
    (0..grid.len()).filter(|&i| grid[i] >= hi / 100.0).collect()
}

fn increasing_on(vals: &[f64], idx: &[usize]) -> bool {
    idx.windows(2).all(|w| vals[w[1]] > vals[w[0]])
}

fn relax(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1e-300)
}

/// Evaluates the requested conditions on a log-spaced t grid spanning at
/// least four decades. Majorant conditions use the weight's majorant, or
/// are inconclusive for other families.
pub fn check_conditions(
    w: &LogWeight,
    which: &[ConditionId],
    grid: &[f64],
) -> Result<ConditionReport> {
    if grid.len() < 3 || grid.windows(2).any(|p| !(p[1] > p[0])) || !(grid[0] > 0.0) {
        return Err(Error::Domain("grid must be positive and increasing".into()));
    }
    if grid.last().unwrap() / grid[0] < 1e4 * (1.0 - 1e-12) {
        return Err(Error::Domain("grid must span at least four decades".into()));
    }
    let prof = QProfile::new(w.clone());
    let mut out = ConditionReport::default();
    for &id in which {
        if out.get(id).is_some() {
            continue;
        }
        let o = match id {
            ConditionId::I => cond_i(w, grid),
            ConditionId::Ii => cond_ii(w, grid),
            ConditionId::Iii => cond_iii(w, grid)?,
            ConditionId::IvA => cond_iva(w, grid),
            ConditionId::IvB => cond_ivb(w, grid),
            ConditionId::V => cond_v(w, &prof, grid)?,
            ConditionId::Vi => cond_vi(w, grid),
            ConditionId::Vii => cond_vii(w, grid),
            ConditionId::LogLog | ConditionId::Growth | ConditionId::Convex => match &w.family {
                Family::Majorant(mw) => {
                    let xi: Vec<f64> = grid.iter().rev().map(|t| 1.0 / t).collect();
                    majorant_condition(&mw.majorant, id, &xi)?
                }
                _ => ConditionOutcome::new(id, Verdict::Inconclusive),
            },
            _ => profile_condition(&prof, id, grid)?,
        };
        out.outcomes.push(o);
    }
    Ok(out)
}

fn d2_tau(w: &LogWeight, t: f64) -> f64 {
    let tau = t.ln();
    w.moment_value(2, tau) + w.moment_value(1, tau)
}

fn cond_i(w: &LogWeight, grid: &[f64]) -> ConditionOutcome {
    for &t in grid {
        let v = w.phi(t);
        if !(v >= 0.0) || w.phi(-t) != v {
            return ConditionOutcome::fail(ConditionId::I, t).diag("phi", v);
        }
    }
    ConditionOutcome::new(ConditionId::I, Verdict::Pass)
}

fn cond_ii(w: &LogWeight, grid: &[f64]) -> ConditionOutcome {
    let phi: Vec<f64> = grid.iter().map(|&t| w.phi(t)).collect();
    for i in 1..grid.len() {
        if phi[i] < phi[i - 1] - relax(phi[i - 1]) {
            return ConditionOutcome::fail(ConditionId::Ii, grid[i]).diag("phi", phi[i]);
        }
    }
    let ratio: Vec<f64> = grid
        .iter()
        .zip(&phi)
        .map(|(t, p)| p / t.ln().max(1e-300))
        .collect();
    let top = top_two_decades(grid);
    let last = *ratio.last().unwrap();
    let verdict = if grid[top[0]] > 1.0 && increasing_on(&ratio, &top) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    ConditionOutcome::new(ConditionId::Ii, verdict).diag("phi_over_log_t", last)
}

/// ∫ φ(t)/t² over each decade of the grid, as ∫ φ(e^τ)e^{−τ} dτ.
fn decade_masses(w: &LogWeight, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let lo = grid[0].ln().max(0.0);
    let hi = grid.last().unwrap().ln();
    let step = std::f64::consts::LN_10;
    let mut out = Vec::new();
    let mut a = lo;
    while a + step <= hi + 1e-9 {
        let m = integrate_finite(
            |tau: f64| w.moment_value(0, tau) * (-tau).exp(),
            a,
            a + step,
            1e-8,
            0.0,
        )?
        .value;
        out.push(((a + step).exp(), m));
        a += step;
    }
    Ok(out)
}

fn cond_iii(w: &LogWeight, grid: &[f64]) -> Result<ConditionOutcome> {
    let masses = decade_masses(w, grid)?;
    let id = ConditionId::Iii;
    if masses.len() < 3 {
        return Ok(ConditionOutcome::new(id, Verdict::Inconclusive));
    }
    let n = masses.len();
    let r1 = masses[n - 1].1 / masses[n - 2].1;
    let r0 = masses[n - 2].1 / masses[n - 3].1;
    let o = if r1 >= 0.99 {
        ConditionOutcome::fail(id, masses[n - 1].0)
    } else if r1 <= 0.8 && r0 <= 0.8 {
        ConditionOutcome::new(id, Verdict::Pass)
    } else {
        ConditionOutcome::new(id, Verdict::Inconclusive)
    };
    Ok(o.diag("decade_ratio", r1)
        .diag("last_decade_mass", masses[n - 1].1))
}

fn cond_iva(w: &LogWeight, grid: &[f64]) -> ConditionOutcome {
    let id = ConditionId::IvA;
    if !w.has_second_derivative() {
        let tau: Vec<f64> = grid.iter().map(|t| t.ln()).collect();
        for i in 1..grid.len() - 1 {
            let (a, b, c) = (w.phi(grid[i - 1]), w.phi(grid[i]), w.phi(grid[i + 1]));
            let h0 = tau[i] - tau[i - 1];
            let h1 = tau[i + 1] - tau[i];
            let d2 = ((c - b) / h1 - (b - a) / h0) * 2.0 / (h0 + h1);
            if d2 < -relax(b) {
                return ConditionOutcome::fail(id, grid[i]).diag("second_difference", d2);
            }
        }
        return ConditionOutcome::new(id, Verdict::Pass);
    }
    let mut min = f64::INFINITY;
    for &t in grid {
        let d2 = d2_tau(w, t);
        let scale = w.moment_value(1, t.ln()).abs();
        if d2 < -1e-7 * scale.max(1e-12) {
            return ConditionOutcome::fail(id, t).diag("d2phi_dtau2", d2);
        }
        min = min.min(d2);
    }
    ConditionOutcome::new(id, Verdict::Pass).diag("min_d2phi_dtau2", min)
}

fn cond_ivb(w: &LogWeight, grid: &[f64]) -> ConditionOutcome {
    let id = ConditionId::IvB;
    let tphi1: Vec<f64> = grid.iter().map(|t| w.moment_value(1, t.ln())).collect();
    for &t in grid {
        let p2 = w.moment_value(2, t.ln());
        if w.has_second_derivative() && p2 > 1e-7 * w.moment_value(1, t.ln()).abs().max(1e-12) {
            return ConditionOutcome::fail(id, t).diag("t2_phi2", p2);
        }
    }
    let top = top_two_decades(grid);
    let verdict = if !w.has_second_derivative() {
        Verdict::Inconclusive
    } else if increasing_on(&tphi1, &top) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    ConditionOutcome::new(id, verdict).diag("t_phi1", *tphi1.last().unwrap())
}

fn cond_v(w: &LogWeight, prof: &QProfile, grid: &[f64]) -> Result<ConditionOutcome> {
    let top = top_two_decades(grid);
    let mut vals = Vec::with_capacity(top.len());
    for &i in &top {
        let t = grid[i];
        let m4 = prof.tail_moment4(t)?;
        vals.push(w.moment_value(1, t.ln()) / m4.powf(2.0 / 3.0));
    }
    let idx: Vec<usize> = (0..vals.len()).collect();
    let id = ConditionId::V;
    let last = *vals.last().unwrap();
    let o = if increasing_on(&vals, &idx) {
        ConditionOutcome::new(id, Verdict::Pass)
    } else if idx.windows(2).all(|p| vals[p[1]] < vals[p[0]]) {
        ConditionOutcome::fail(id, grid[*top.last().unwrap()])
    } else {
        ConditionOutcome::new(id, Verdict::Inconclusive)
    };
    Ok(o.diag("ratio", last))
}

fn cond_vi(w: &LogWeight, grid: &[f64]) -> ConditionOutcome {
    let id = ConditionId::Vi;
    let top = top_two_decades(grid);
    let mut min = f64::INFINITY;
    for &i in &top {
        let t = grid[i];
        if t > 1.0 {
            min = min.min(w.phi(t).ln() / t.ln());
        }
    }
    let o = if !min.is_finite() {
        ConditionOutcome::new(id, Verdict::Inconclusive)
    } else if min >= 0.05 {
        ConditionOutcome::new(id, Verdict::Pass)
    } else if min <= 0.0 {
        ConditionOutcome::fail(id, *grid.last().unwrap())
    } else {
        ConditionOutcome::new(id, Verdict::Inconclusive)
    };
    o.diag("lower_order", min)
}

fn cond_vii(w: &LogWeight, grid: &[f64]) -> ConditionOutcome {
    let id = ConditionId::Vii;
    if !w.has_second_derivative() {
        return ConditionOutcome::new(id, Verdict::Inconclusive);
    }
    let top = top_two_decades(grid);
    let vals: Vec<f64> = top.iter().map(|&i| d2_tau(w, grid[i])).collect();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let idx: Vec<usize> = (0..vals.len()).collect();
    let o = if min <= 0.0 {
        ConditionOutcome::fail(id, grid[top[vals.iter().position(|v| *v == min).unwrap()]])
    } else if idx
        .windows(2)
        .all(|p| vals[p[1]] >= vals[p[0]] * (1.0 - 1e-6))
    {
        ConditionOutcome::new(id, Verdict::Pass)
    } else {
        ConditionOutcome::new(id, Verdict::Inconclusive)
    };
    o.diag("min_d2phi_dtau2", min)
}

fn profile_condition(prof: &QProfile, id: ConditionId, grid: &[f64]) -> Result<ConditionOutcome> {
    let spline_backed = matches!(
        prof.weight.family,
        Family::Sequence(_) | Family::Majorant(_) | Family::Table(_)
    );
    let mut vals = Vec::with_capacity(grid.len());
    for &y in grid {
        let v = match id {
            ConditionId::LaplaceA => prof.q(y)?,
            ConditionId::LaplaceB => prof.q1(y)?,
            ConditionId::LaplaceC => prof.q2_from_first(y)?,
            ConditionId::LaplaceD => y * y * prof.q2_from_first(y)?.abs(),
            _ => {
                if !prof.weight.has_second_derivative() {
                    return Ok(ConditionOutcome::new(id, Verdict::Inconclusive));
                }
                let q3 = prof.q3(y)?;
                if !(q3 > 0.0) {
                    let o = ConditionOutcome::fail(id, y).diag("q3", q3);
                    return Ok(if spline_backed {
                        ConditionOutcome {
                            verdict: Verdict::Inconclusive,
                            ..o
                        }
                    } else {
                        o
                    });
                }
                prof.q2_from_first(y)?.abs().powf(1.5) / q3
            }
        };
        vals.push(v);
    }
    // sign requirements and direction of monotonicity
    let (sign_ok, increasing): (fn(f64) -> bool, bool) = match id {
        ConditionId::LaplaceA => (|_| true, true),
        ConditionId::LaplaceB => (|v| v > 0.0, false),
        ConditionId::LaplaceC => (|v| v < 0.0, true),
        _ => (|v| v > 0.0, true),
    };
    for (i, &v) in vals.iter().enumerate() {
        if !sign_ok(v) {
            return Ok(ConditionOutcome::fail(id, grid[i]).diag("value", v));
        }
        if i > 0 {
            let prev = vals[i - 1];
            let bad = if increasing {
                v < prev - relax(prev)
            } else {
                v > prev + relax(prev)
            };
            if bad {
                let o = ConditionOutcome::fail(id, grid[i]).diag("value", v);
                return Ok(if spline_backed && id == ConditionId::LaplaceE {
                    ConditionOutcome {
                        verdict: Verdict::Inconclusive,
                        ..o
                    }
                } else {
                    o
                });
            }
        }
    }
    let verdict = if spline_backed && id == ConditionId::LaplaceE {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(ConditionOutcome::new(id, verdict).diag("last", *vals.last().unwrap()))
}

/// Majorant conditions on a ξ grid in (0, 1), increasing.
pub fn check_majorant(
    maj: &Majorant,
    which: &[ConditionId],
    xi: &[f64],
) -> Result<ConditionReport> {
    if xi.len() < 3
        || xi.windows(2).any(|p| !(p[1] > p[0]))
        || !(xi[0] > 0.0)
        || *xi.last().unwrap() > 1.0
    {
        return Err(Error::Domain("ξ grid must be increasing in (0, 1]".into()));
    }
    let mut out = ConditionReport::default();
    for &id in which {
        if !ConditionId::MAJORANT.contains(&id) {
            return Err(Error::Domain(format!("{id} is not a majorant condition")));
        }
        if out.get(id).is_none() {
            out.outcomes.push(majorant_condition(maj, id, xi)?);
        }
    }
    Ok(out)
}

fn majorant_condition(maj: &Majorant, id: ConditionId, xi: &[f64]) -> Result<ConditionOutcome> {
    let m: Vec<f64> = xi.iter().map(|&x| maj.log_m(x)).collect();
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Evaluation(
            "majorant is not finite on the grid".into(),
        ));
    }
    for i in 1..xi.len() {
        if m[i] > m[i - 1] + relax(m[i - 1]) {
            return Ok(ConditionOutcome::fail(id, xi[i]).diag("m", m[i]));
        }
    }
    let o = match id {
        ConditionId::LogLog => {
            // ∫ log m over decades of ξ toward 0
            let lo = xi[0].ln();
            let hi = xi.last().unwrap().ln().min(0.0);
            let step = std::f64::consts::LN_10;
            let mut masses = Vec::new();
            let mut b = hi;
            while b - step >= lo - 1e-9 {
                let v = integrate_finite(
                    |l: f64| maj.log_m(l.exp()).max(1.0).ln() * l.exp(),
                    b - step,
                    b,
                    1e-8,
                    0.0,
                )?
                .value;
                masses.push(((b - step).exp(), v));
                b -= step;
            }
            let n = masses.len();
            if n < 3 {
                ConditionOutcome::new(id, Verdict::Inconclusive)
            } else {
                let r1 = masses[n - 1].1 / masses[n - 2].1.max(1e-300);
                let r0 = masses[n - 2].1 / masses[n - 3].1.max(1e-300);
                let o = if r1 >= 0.99 {
                    ConditionOutcome::fail(id, masses[n - 1].0)
                } else if r1 <= 0.8 && r0 <= 0.8 {
                    ConditionOutcome::new(id, Verdict::Pass)
                } else {
                    ConditionOutcome::new(id, Verdict::Inconclusive)
                };
                o.diag("decade_ratio", r1)
            }
        }
        ConditionId::Growth => {
            // m(ξ)/log(1/ξ) must grow without bound as ξ → 0
            let lo = xi[0];
            let idx: Vec<usize> = (0..xi.len())
                .filter(|&i| xi[i] <= lo * 100.0 && xi[i] < 1.0)
                .collect();
            let r: Vec<f64> = idx.iter().map(|&i| m[i] / (-xi[i].ln())).collect();
            let dec = r.windows(2).all(|p| p[1] < p[0]);
            let o = if idx.len() >= 2 && dec {
                ConditionOutcome::new(id, Verdict::Pass)
            } else {
                ConditionOutcome::new(id, Verdict::Inconclusive)
            };
            o.diag("m_over_log_inv_xi", r.first().copied().unwrap_or(f64::NAN))
        }
        _ => {
            // convexity of ξ ↦ m(ξ) and σ ↦ m(e^{−σ})
            let check = |x: &[f64], v: &[f64]| -> Option<usize> {
                (1..x.len() - 1).find(|&i| {
                    let h0 = x[i] - x[i - 1];
                    let h1 = x[i + 1] - x[i];
                    let d2 = ((v[i + 1] - v[i]) / h1 - (v[i] - v[i - 1]) / h0) * 2.0 / (h0 + h1);
                    d2 < -1e-7 * v[i].abs().max(1.0) / (h0 * h1).max(1e-300).sqrt().max(1.0)
                })
            };
            let inner: Vec<usize> = (0..xi.len()).filter(|&i| xi[i] < 1.0).collect();
            let x: Vec<f64> = inner.iter().map(|&i| xi[i]).collect();
            let v: Vec<f64> = inner.iter().map(|&i| m[i]).collect();
            let sig: Vec<f64> = x.iter().rev().map(|t| -t.ln()).collect();
            let vs: Vec<f64> = v.iter().rev().copied().collect();
            if x.len() < 3 {
                ConditionOutcome::new(id, Verdict::Inconclusive)
            } else if let Some(i) = check(&x, &v) {
                ConditionOutcome::fail(id, x[i])
            } else if let Some(i) = check(&sig, &vs) {
                ConditionOutcome::fail(id, (-sig[i]).exp())
            } else {
                ConditionOutcome::new(id, Verdict::Pass)
            }
        }
    };
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{DCSequence, Synthetic};
    use std::sync::Arc;

    #[test]
    fn power_weights_pass() {
        let grid = log_grid(1.0, 1e6, 61);
        for a in [0.3, 0.5, 0.7] {
            let w = LogWeight::power(a).unwrap();
            let mut ids = ConditionId::WEIGHT.to_vec();
            ids.extend_from_slice(&ConditionId::PROFILE);
            let r = check_conditions(&w, &ids, &grid).unwrap();
            for o in &r.outcomes {
                assert_eq!(o.verdict, Verdict::Pass, "α={a} {o:?}");
            }
            let v = r.get(ConditionId::V).unwrap().diagnostics[0].1;
            // 0.5·2.5^{2/3}·t^{1/6} at t = 10⁶ for α = 1/2
            if a == 0.5 {
                assert!((v / (0.5 * 2.5f64.powf(2.0 / 3.0) * 10.0) - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn linear_weight_fails_integrability() {
        let w = LogWeight::synthetic(
            Synthetic {
                f0: Arc::new(|t| t),
                f1: Arc::new(|_| 1.0),
                f2: Some(Arc::new(|_| 0.0)),
            },
            "linear",
        );
        let r = check_conditions(&w, &[ConditionId::Iii], &log_grid(1.0, 1e6, 61)).unwrap();
        let o = r.get(ConditionId::Iii).unwrap();
        assert_eq!(o.verdict, Verdict::Fail);
        assert!(!o.witness.is_empty());
    }

    #[test]
    fn factorial_sequence_is_quasianalytic() {
        let w = LogWeight::sequence(DCSequence::factorial_power(1.0, 400)).unwrap();
        let r = check_conditions(&w, &[ConditionId::Iii], &log_grid(1.0, 1e5, 51)).unwrap();
        assert_eq!(r.verdict(ConditionId::Iii), Some(Verdict::Fail));
    }

    #[test]
    fn inv_power_majorant() {
        let m = Majorant::inv_power(1.0).unwrap();
        let xi = log_grid(1e-8, 0.5, 60);
        let r = check_majorant(&m, &ConditionId::MAJORANT, &xi).unwrap();
        for o in &r.outcomes {
            assert_eq!(o.verdict, Verdict::Pass, "{o:?}");
        }
    }

    #[test]
    fn ids_round_trip_and_grid_rules() {
        for id in ConditionId::ALL {
            assert_eq!(id.as_str().parse::<ConditionId>().unwrap(), id);
        }
        let w = LogWeight::power(0.5).unwrap();
        assert!(check_conditions(&w, &[ConditionId::I], &log_grid(1.0, 100.0, 10)).is_err());
    }
}
