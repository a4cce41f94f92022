use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use outer_weight::applications::{bang_depth, ls_majorant, PipelineConfig};
use outer_weight::conditions::{check_conditions, log_grid, ConditionId, Verdict};
use outer_weight::laplace::{laplace_asymptotic, laplace_oracle, tail_bound};
use outer_weight::legendre::{identity_check, legendre_point};
use outer_weight::poisson::closed;
use outer_weight::quad::integrate_finite;
use outer_weight::transforms::{
    fourier_at_height, fourier_inverse_oracle, ComplexLogW, FourierConfig,
};
use outer_weight::{DCSequence, LogMagnitude, LogWeight, Majorant, QProfile};

const ALPHAS: [f64; 3] = [0.3, 0.5, 0.7];

struct Line {
    id: u32,
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Nonincreasing, ignoring changes among values already below `floor`.
fn shrinking(gaps: &[f64], floor: f64) -> bool {
    gaps.windows(2).all(|w| w[1] <= w[0].max(floor))
}

fn list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn power(a: f64) -> QProfile {
    QProfile::new(LogWeight::power(a).unwrap())
}

fn squared_factorials() -> QProfile {
    QProfile::new(LogWeight::sequence(DCSequence::factorial_power(2.0, 20000)).unwrap())
}

fn c1() -> Line {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for a in ALPHAS {
        let p = power(a);
        for y in log_grid(1.0, 1e6, 25) {
            let got = [
                p.q(y).unwrap(),
                p.q1(y).unwrap(),
                p.derivative(y, 2).unwrap(),
                p.q3(y).unwrap(),
            ];
            for (k, g) in got.iter().enumerate() {
                worst = worst.max(rel(*g, closed::q(a, y, k as u32)));
            }
        }
    }
    let el = t.elapsed().as_secs_f64();
    Line {
        id: 1,
        pass: worst <= 1e-8 && el < 10.0,
        detail: format!(
            "closed-form profile: max rel err {worst:.2e} (tol 1e-8), {el:.2}s (limit 10s)"
        ),
    }
}

fn c2() -> Line {
    let p = power(0.5);
    let mut worst: f64 = 0.0;
    for s in [1e-1, 1e-2, 1e-3] {
        let l = legendre_point(&p, s).unwrap();
        let want = [0.5 / (s * s), 0.5 / s, -0.5 / (s * s), 1.0 / (s * s * s)];
        for (g, w) in [l.y_s, l.q, l.q1, l.q2].iter().zip(want) {
            worst = worst.max(rel(*g, w));
        }
    }
    Line {
        id: 2,
        pass: worst <= 1e-8,
        detail: format!("Legendre closed forms: max rel err {worst:.2e} (tol 1e-8)"),
    }
}

fn c3() -> Line {
    let mut worst: f64 = 0.0;
    let mut profiles: Vec<QProfile> = ALPHAS.iter().map(|&a| power(a)).collect();
    profiles.push(squared_factorials());
    for p in &profiles {
        for y in log_grid(1.0, 1e6, 25) {
            let a = p.q2_from_first(y).unwrap();
            let b = p.q2_from_second(y).unwrap();
            worst = worst.max(rel(b, a));
        }
    }
    Line {
        id: 3,
        pass: worst <= 1e-7,
        detail: format!("two second-derivative formulas: max rel gap {worst:.2e} (tol 1e-7)"),
    }
}

fn c4() -> Line {
    let mut worst: f64 = 0.0;
    let mut lower_bad = 0;
    let mut upper_bad = Vec::new();
    let mut loose_bad = 0;
    let mut max_ratio: f64 = 0.0;
    for a in ALPHAS {
        let p = power(a);
        for y in [1e1, 1e2, 1e3, 1e4] {
            let c = identity_check(&p, y).unwrap();
            worst = worst.max((c.lhs - c.rhs).abs() / c.lhs.abs());
            lower_bad += usize::from(!c.lower_ok);
            loose_bad += usize::from(!c.upper_loose_ok);
            if !c.upper_ok {
                upper_bad.push(a);
            }
            max_ratio = max_ratio.max(c.lhs / c.sandwich.1);
        }
    }
    upper_bad.dedup();
    let pass = worst <= 1e-6 && lower_bad == 0 && upper_bad.is_empty();
    Line {
        id: 4,
        pass,
        detail: format!(
            "identity max rel gap {worst:.2e} (tol 1e-6); lower bound violations {lower_bad}; \
             16/(3π) upper bound violated for α in {upper_bad:?} (max lhs/bound {max_ratio:.4}); \
             16/π upper bound violations {loose_bad}"
        ),
    }
}

fn c5() -> Line {
    let t = Instant::now();
    let grid = [1e-1, 1e-2, 1e-3];
    let gaps = |p: &QProfile| -> Vec<f64> {
        grid.iter()
            .map(|&s| {
                let o = laplace_oracle(p, 0.0, s, 0.0).unwrap().log_value.log_abs;
                let a = laplace_asymptotic(p, 0.0, s).unwrap().log_abs;
                ((o - a).exp() - 1.0).abs()
            })
            .collect()
    };
    let g_sqrt = gaps(&QProfile::new(LogWeight::sqrt_profile()));
    let g_pow = gaps(&power(0.5));
    let el = t.elapsed().as_secs_f64();
    let pass =
        g_sqrt[2] <= 0.05 && shrinking(&g_sqrt, 1e-8) && shrinking(&g_pow, 1e-8) && el < 60.0;
    Line {
        id: 5,
        pass,
        detail: format!(
            "Laplace oracle/asymptotic |ratio-1|: q=2√y {}, power(0.5) {} \
             (tol 0.05 at s=1e-3, nonincreasing above 1e-8), {el:.2}s (limit 60s)",
            list(&g_sqrt),
            list(&g_pow)
        ),
    }
}

fn c6() -> Line {
    let t = Instant::now();
    let clw = ComplexLogW::new(power(0.5));
    let grid = [1e-1, 5e-2, 2e-2, 1e-2];
    let cfg = FourierConfig::default();
    let mut gaps = Vec::new();
    let mut contour: f64 = 0.0;
    let mut capped = 0;
    for s in grid {
        let r = fourier_inverse_oracle(&clw, f64::INFINITY, s).unwrap();
        let l = legendre_point(&clw.prof, s).unwrap();
        gaps.push((r.value.log_abs - (-l.q + 0.5 * l.q2.ln())).abs());
        let r2 = fourier_at_height(&clw, f64::INFINITY, s, 1.1 * r.contour_height, &cfg).unwrap();
        contour = contour.max((r2.value.log_abs - r.value.log_abs).abs());
        capped += usize::from(!r.within_cap);
    }
    let el = t.elapsed().as_secs_f64();
    let pass = gaps[3] <= 0.15
        && shrinking(&gaps, 3.0 * cfg.rel_tol)
        && contour <= 3.0 * cfg.rel_tol
        && el < 120.0;
    Line {
        id: 6,
        pass,
        detail: format!(
            "Fourier oracle vs −Q+½logQ″: gaps {} (tol 0.15 at s=1e-2, nonincreasing above {:.0e}); \
             contour shift {contour:.2e} (tol {:.0e}); ω above cap at {capped}/4 s; {el:.2}s (limit 120s)",
            list(&gaps),
            3.0 * cfg.rel_tol,
            3.0 * cfg.rel_tol
        ),
    }
}

fn c7() -> Line {
    let weights = vec![
        LogWeight::power(0.3).unwrap(),
        LogWeight::power(0.5).unwrap(),
        LogWeight::power(0.7).unwrap(),
        LogWeight::sequence(DCSequence::factorial_power(2.0, 20000)).unwrap(),
        LogWeight::majorant(Majorant::inv_power(1.0).unwrap()).unwrap(),
    ];
    let ys = log_grid(1.0, 1e6, 13);
    let mut violations: Vec<String> = Vec::new();
    let mut y0s = Vec::new();
    for w in weights {
        let label = w.label.clone();
        let conds = check_conditions(
            &w,
            &[ConditionId::IvA, ConditionId::IvB],
            &log_grid(1.0, 1e6, 61),
        )
        .unwrap();
        let iva = conds.verdict(ConditionId::IvA) == Some(Verdict::Pass);
        let ivb = conds.verdict(ConditionId::IvB) == Some(Verdict::Pass);
        let p = QProfile::new(w);
        let mut bad = |what: &str, y: f64| violations.push(format!("{label}:{what}@{y:.3e}"));
        let mut last_q1 = f64::INFINITY;
        let mut last_q2 = f64::NEG_INFINITY;
        for &y in &ys {
            let b = p.derivative_bounds(y).unwrap();
            if !(b.lower_ok && b.upper_ok) {
                bad("q2-sandwich", y);
            }
            let q2 = b.q2_abs;
            for k in 0..=8 {
                let x = y * k as f64 / 8.0;
                if p.u_x(x, y).unwrap() < x / 6.0 * q2 * (1.0 - 1e-9) {
                    bad("ux-near", y);
                }
            }
            for k in 0..8 {
                let x = y * 2f64.powi(k);
                let m = (0..=32)
                    .map(|j| {
                        let t = x * (0.5 + j as f64 / 32.0);
                        p.weight.moment_value(1, t.ln()) / t
                    })
                    .fold(f64::INFINITY, f64::min);
                if p.u_x(x, y).unwrap() < 2.0 / (5.0 * PI) * m * (1.0 - 1e-9) {
                    bad("ux-far", y);
                }
            }
            let q = p.q(y).unwrap();
            let q1 = p.q1(y).unwrap();
            if q - y * q1 < p.weight.phi(y) / (3.0 * PI) {
                bad("Q-of-slope", y);
            }
            // u increases in x
            let mut last_u = q;
            for k in 1..=12 {
                let u = p.u(y * 0.25 * k as f64, y).unwrap();
                if u < last_u - 1e-12 * u.abs() {
                    bad("u-increasing", y);
                }
                last_u = u;
            }
            if !(q1 > 0.0 && q1 < last_q1) {
                bad("q1-decreasing", y);
            }
            last_q1 = q1;
            if iva {
                let r = y;
                let top = p.q(r).unwrap();
                let th: Vec<f64> = (1..48).map(|j| PI * j as f64 / 48.0).collect();
                let us: Vec<f64> = th
                    .iter()
                    .map(|t| p.u(r * t.cos(), r * t.sin()).unwrap())
                    .collect();
                if us.iter().any(|u| *u > top * (1.0 + 1e-9)) {
                    bad("theta-max", y);
                }
                for j in 1..us.len() - 1 {
                    if us[j + 1] - 2.0 * us[j] + us[j - 1] > 1e-8 * top {
                        bad("theta-concave", y);
                        break;
                    }
                }
            }
            if ivb && -q2 < last_q2 {
                bad("q2-increasing", y);
            }
            last_q2 = -q2;
        }
        y0s.push(format!("{label}:{:?}", p.scan_y0(&ys).unwrap()));
        if p.scan_y0(&ys).unwrap().is_none() {
            violations.push(format!("{label}: x·u_x ≥ 10 has no y0 on the grid"));
        }
    }
    violations.dedup();
    Line {
        id: 7,
        pass: violations.is_empty(),
        detail: format!(
            "inequality suite: {} violations {violations:?}; y0 for x·u_x ≥ 10 {y0s:?}",
            violations.len()
        ),
    }
}

fn c8() -> Line {
    let t = Instant::now();
    let cfg = PipelineConfig::default();
    let vals: Vec<f64> = log_grid(1e-3, 1e-1, 9)
        .iter()
        .map(|&s| s * (-bang_depth(1.0, s, 200, &cfg).unwrap().logq_asym).ln())
        .collect();
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let el = t.elapsed().as_secs_f64();
    Line {
        id: 8,
        pass: lo > 0.0 && hi / lo <= 10.0 && el < 60.0,
        detail: format!(
            "Bang β=1: s·log Q in [{lo:.4}, {hi:.4}], band {:.4} (limit 10), {el:.2}s (limit 60s)",
            hi / lo
        ),
    }
}

fn c9() -> Line {
    let m = Majorant::inv_power(1.0).unwrap();
    let cfg = PipelineConfig::default();
    let mut worst: f64 = 0.0;
    let mut unordered = 0;
    for s in log_grid(1e-3, 1e-1, 9) {
        let r = ls_majorant(&m, s, &cfg).unwrap();
        worst = worst.max((r.log_mstar_asym * s / 2.0 - 1.0).abs());
        let (lo, hi) = r.qstar_sandwich;
        unordered += usize::from(!(lo <= r.q_star && r.q_star <= hi));
    }
    Line {
        id: 9,
        pass: worst <= 0.02 && unordered == 0,
        detail: format!("Levinson-Sjöberg e^(1/ξ): max |Q·s/2 − 1| {worst:.2e} (tol 0.02), unordered sandwiches {unordered}"),
    }
}

fn c10() -> Line {
    let gauss_true = (PI / 2.0).sqrt() * statrs::function::erf::erfc(3.0 / 2f64.sqrt());
    let quad_true = integrate_finite(|x: f64| (-x * x).exp(), 1.0, 12.0, 1e-13, 0.0)
        .unwrap()
        .value;
    let cases = [
        (
            "x²/2 at 3",
            tail_bound(4.5, 3.0).unwrap().exp(),
            gauss_true,
            (-4.5f64).exp() / 3.0,
        ),
        ("x at 0", tail_bound(0.0, 1.0).unwrap().exp(), 1.0, 1.0),
        (
            "x² at 1",
            tail_bound(1.0, 2.0).unwrap().exp(),
            quad_true,
            (-1.0f64).exp() / 2.0,
        ),
    ];
    let tails_ok = cases
        .iter()
        .all(|(_, b, t, want)| *b >= *t * (1.0 - 1e-15) && rel(*b, *want) < 1e-12);
    let mut worst: f64 = 0.0;
    for k in 0..=64 {
        let l = -1e8 + 2e8 * k as f64 / 64.0;
        for d in [0.0, 0.5, 1.0, 10.0, 100.0] {
            for phase in [0.0, PI] {
                let a = LogMagnitude::from_log(l);
                let b = LogMagnitude::new(l - d, phase);
                let back = a.add(b).sub(b);
                worst = worst.max((back.log_abs - l).abs() / l.abs().max(1.0));
            }
        }
    }
    Line {
        id: 10,
        pass: tails_ok && worst <= 1e-12,
        detail: format!(
            "tail bounds dominate on all three ψ: {tails_ok}; LogMagnitude round trip max rel err {worst:.2e} (tol 1e-12, |log| ≤ 1e8)"
        ),
    }
}

/// Criteria that cannot pass as stated, with the reason printed next to the verdict.
const KNOWN_FAILURES: [(u32, &str); 1] = [(
    4,
    "the 16/(3π) constant is below the identity's value for α ≤ 0.5; the 16/π bound holds",
)];

fn main() -> ExitCode {
    let t = Instant::now();
    let checks: [fn() -> Line; 10] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10];
    let (mut passed, mut known, mut unexpected) = (0, 0, 0);
    for c in checks {
        let l = c();
        let note = KNOWN_FAILURES
            .iter()
            .find(|(id, _)| *id == l.id)
            .map(|(_, why)| *why);
        let verdict = match (l.pass, note) {
            (true, _) => {
                passed += 1;
                "PASS".to_string()
            }
            (false, Some(why)) => {
                known += 1;
                format!("FAIL (known: {why})")
            }
            (false, None) => {
                unexpected += 1;
                "FAIL".to_string()
            }
        };
        println!("criterion {:>2}: {verdict} {}", l.id, l.detail);
    }
    println!(
        "acceptance: {passed} of 10 passed, {known} known failure(s), {unexpected} unexpected failure(s) in {:.1}s",
        t.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
