use outer_weight::applications::{
    bang_depth, depth_of_zero, ls_majorant, poly_distance, DepthReport, PipelineConfig,
};
use outer_weight::conditions::{check_majorant, log_grid, ConditionReport};
use outer_weight::laplace::{laplace_asymptotic_with, laplace_oracle_with, LaplaceConfig};
use outer_weight::legendre::{legendre_point_with, SolverConfig};
use outer_weight::transforms::{
    fourier_inverse_oracle_with, rho_bounds, ComplexLogW, FourierConfig,
};
use outer_weight::{check_conditions, ConditionId, LogWeight, QProfile, QuadConfig, Verdict};
use rayon::prelude::*;

use crate::args::{AppKind, Common, FamilyArg, Target};
use crate::error::{CliError, CliResult};
use crate::output::{num, opt, status, Table};

/// Gaps below this are treated as converged when judging a trend.
const TREND_FLOOR: f64 = 1e-8;

fn profile(c: &Common, w: LogWeight) -> CliResult<QProfile> {
    let mut quad = QuadConfig::default();
    if let Some(t) = c.rel_tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Usage(format!(
                "--rel-tol must lie in (0, 1), got {t}"
            )));
        }
        quad.rel_tol = t;
    }
    Ok(QProfile::with_quad(w, quad))
}

fn solver() -> SolverConfig {
    SolverConfig::default().with_y_cap(1e300)
}

fn push_report(t: &mut Table, r: &ConditionReport) {
    for o in &r.outcomes {
        let mut line = format!("condition {}: {}", o.id, o.verdict);
        if !o.witness.is_empty() {
            let w: Vec<String> = o.witness.iter().map(|x| format!("{x:.6e}")).collect();
            line.push_str(&format!(" at {}", w.join(" ")));
        }
        for (k, v) in &o.diagnostics {
            line.push_str(&format!("; {k}={v:.6e}"));
        }
        t.comments.push(line);
    }
}

pub fn weight_describe(
    c: &Common,
    y_start: f64,
    y_stop: f64,
    y_count: usize,
) -> CliResult<(Table, u8)> {
    if !(y_start > 0.0 && y_stop > y_start) || y_count < 2 {
        return Err(CliError::Usage(
            "need 0 < y-start < y-stop and y-count ≥ 2".into(),
        ));
    }
    let w = c.weight()?;
    let mut t = Table::new(vec!["y", "q", "q1", "q2", "q3"]);
    t.comments.push(format!("weight {}", w.label));
    let grid = log_grid(1.0, 1e8, 81);
    let mut report = check_conditions(&w, &ConditionId::WEIGHT, &grid)?;
    let summable = report.verdict(ConditionId::Iii) != Some(Verdict::Fail);
    if summable {
        report
            .outcomes
            .extend(check_conditions(&w, &ConditionId::PROFILE, &grid)?.outcomes);
    }
    if let Some(m) = c.read_majorant()? {
        report
            .outcomes
            .extend(check_majorant(&m, &ConditionId::MAJORANT, &log_grid(1e-8, 0.5, 60))?.outcomes);
    }
    push_report(&mut t, &report);
    if summable {
        let prof = profile(c, w)?;
        let rows: Vec<Vec<String>> = log_grid(y_start, y_stop, y_count)
            .par_iter()
            .map(|&y| {
                let cell =
                    |r: outer_weight::Result<f64>| r.map(num).unwrap_or_else(|_| "nan".into());
                vec![
                    num(y),
                    cell(prof.q(y)),
                    cell(prof.q1(y)),
                    cell(prof.q2_from_first(y)),
                    cell(prof.q3(y)),
                ]
            })
            .collect();
        t.rows = rows;
    } else {
        t.comments
            .push("profile skipped: the weight is not Poisson-summable".into());
    }
    let code = if report.any_fail() {
        crate::error::EXIT_CONDITION
    } else {
        0
    };
    Ok((t, code))
}

pub fn legendre(c: &Common) -> CliResult<Table> {
    let prof = profile(c, c.weight()?)?;
    let grid = c.s_grid()?;
    let cfg = solver();
    let mut t = Table::new(vec!["s", "y_s", "Q", "Q1", "Q2", "residual", "status"]);
    t.comments.push(format!("weight {}", prof.weight.label));
    t.rows = grid
        .par_iter()
        .map(|&s| match legendre_point_with(&prof, s, &cfg, None) {
            Ok(p) => vec![
                num(s),
                num(p.y_s),
                num(p.q),
                num(p.q1),
                num(p.q2),
                num(p.residual),
                "ok".into(),
            ],
            Err(e) => vec![
                num(s),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                status(&e.to_string()),
            ],
        })
        .collect();
    Ok(t)
}

struct Compare {
    oracle: f64,
    oracle_log: f64,
    asym_log: Option<f64>,
    ratio: Option<f64>,
}

impl Compare {
    fn sharp(oracle: outer_weight::LogMagnitude, asym_log: f64) -> Self {
        let ratio = Some((oracle.log_abs - asym_log).exp_m1());
        Self {
            oracle: oracle.to_f64(),
            oracle_log: oracle.log_abs,
            asym_log: Some(asym_log),
            ratio,
        }
    }
}

fn trend(gaps: &[(f64, f64)]) -> String {
    let mut v: Vec<(f64, f64)> = gaps.to_vec();
    v.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    if v.len() < 2 {
        return "trend: too few rows".into();
    }
    let ok = v.windows(2).all(|w| w[1].1 <= w[0].1.max(TREND_FLOOR));
    let list: Vec<String> = v.iter().map(|(s, g)| format!("{s:.3e}:{g:.3e}")).collect();
    format!(
        "trend: {} as s decreases ({})",
        if ok { "decreasing" } else { "not decreasing" },
        list.join(" ")
    )
}

pub fn asym_compare(c: &Common, target: Target) -> CliResult<Table> {
    let prof = profile(c, c.weight()?)?;
    let grid = c.s_grid()?;
    let rel_tol = c.rel_tol.unwrap_or(1e-8);
    let mut t = Table::new(vec![
        "s",
        "oracle",
        "oracle_log",
        "asym_log",
        "ratio_minus_1",
        "status",
    ]);
    t.comments.push(format!("weight {}", prof.weight.label));
    let rows: Vec<(f64, CliResult<Compare>)> = match target {
        Target::Laplace => {
            let a = c.a.unwrap_or(0.0);
            t.comments.push(format!("target laplace, a = {a}"));
            let cfg = LaplaceConfig {
                rel_tol,
                solver: solver(),
                ..LaplaceConfig::default()
            };
            grid.par_iter()
                .map(|&s| {
                    let r = (|| {
                        let o = laplace_oracle_with(&prof, a, s, 0.0, &cfg)?;
                        let asym = laplace_asymptotic_with(&prof, a, s, &cfg.solver)?;
                        Ok(Compare::sharp(o.log_value, asym.log_abs))
                    })();
                    (s, r)
                })
                .collect()
        }
        Target::Fourier => {
            let p = c.p_value()?;
            t.comments.push(format!("target fourier, p = {p}"));
            if p.is_finite() {
                t.comments.push(
                    "finite p: asym_log is −Q(s) and ratio_minus_1 is log|oracle|/asym_log − 1"
                        .into(),
                );
            }
            let cfg = FourierConfig {
                rel_tol,
                solver: solver(),
                ..FourierConfig::default()
            };
            let clw = ComplexLogW::new(prof.clone());
            grid.par_iter()
                .map(|&s| {
                    let r = (|| {
                        let o = fourier_inverse_oracle_with(&clw, p, s, &cfg)?;
                        if s <= 0.0 {
                            return Ok(Compare {
                                oracle: 0.0,
                                oracle_log: f64::NEG_INFINITY,
                                asym_log: None,
                                ratio: None,
                            });
                        }
                        let b = rho_bounds(&prof, p, s)?;
                        if p.is_infinite() {
                            return Ok(Compare::sharp(o.value, b.asym_log));
                        }
                        let ratio = Some(o.value.log_abs / b.coarse_log - 1.0);
                        Ok(Compare {
                            oracle: o.value.to_f64(),
                            oracle_log: o.value.log_abs,
                            asym_log: Some(b.coarse_log),
                            ratio,
                        })
                    })();
                    (s, r)
                })
                .collect()
        }
    };
    let mut gaps = Vec::new();
    for (s, r) in rows {
        match r {
            Ok(cmp) => {
                let ratio = cmp.ratio;
                if let Some(x) = ratio {
                    gaps.push((s, x.abs()));
                }
                let st = if s <= 0.0 { "zero" } else { "ok" };
                t.rows.push(vec![
                    num(s),
                    num(cmp.oracle),
                    num(cmp.oracle_log),
                    opt(cmp.asym_log),
                    opt(ratio),
                    st.into(),
                ]);
            }
            Err(e) => {
                let mut row = vec![num(s)];
                row.extend(std::iter::repeat_n(String::new(), 4));
                row.push(status(&e.to_string()));
                t.rows.push(row);
            }
        }
    }
    t.footer.push(trend(&gaps));
    Ok(t)
}

fn pipeline(c: &Common) -> PipelineConfig {
    let mut cfg = PipelineConfig::default().with_oracle(c.with_oracle);
    if let Some(t) = c.rel_tol {
        cfg.fourier.rel_tol = t;
    }
    cfg
}

fn depth_row(s: f64, r: Result<DepthReport, outer_weight::Error>) -> Vec<String> {
    match r {
        Ok(d) => vec![
            num(s),
            num(d.logq_asym),
            opt(d.taylor_log),
            opt(d.sandwich_lo_log),
            opt(d.sandwich_hi_log),
            opt(d.bang_c),
            if d.taylor_truncated {
                "taylor-truncated".into()
            } else {
                "ok".into()
            },
        ],
        Err(e) => {
            let mut row = vec![num(s)];
            row.extend(std::iter::repeat_n(String::new(), 5));
            row.push(status(&e.to_string()));
            row
        }
    }
}

/// Fails the whole run on a condition refusal, which does not depend on s.
fn refusal<T>(rows: &[(f64, Result<T, outer_weight::Error>)]) -> CliResult<()> {
    for (_, r) in rows {
        if let Err(e @ outer_weight::Error::Condition(_)) = r {
            return Err(CliError::Condition(e.to_string()));
        }
    }
    Ok(())
}

pub fn apps(c: &Common, which: AppKind) -> CliResult<Table> {
    let grid = c.s_grid()?;
    let cfg = pipeline(c);
    let depth_header = vec![
        "s",
        "logQ_asym",
        "taylor_log",
        "lo_log",
        "hi_log",
        "bang_c",
        "status",
    ];
    match which {
        AppKind::Dc => {
            let mut t = Table::new(depth_header);
            let rows: Vec<(f64, outer_weight::Result<DepthReport>)> =
                if let Some(seq) = c.read_sequence()? {
                    if c.family.is_some() || c.majorant.is_some() {
                        return Err(CliError::Usage(
                            "apps dc takes either --sequence or --family bang".into(),
                        ));
                    }
                    t.comments
                        .push(format!("sequence with n_max = {}", seq.n_max()));
                    grid.par_iter()
                        .map(|&s| (s, depth_of_zero(&seq, s, &cfg)))
                        .collect()
                } else if c.family == Some(FamilyArg::Bang) {
                    let beta = c
                        .beta
                        .ok_or_else(|| CliError::Usage("--family bang needs --beta".into()))?;
                    let n_max = c.taylor_n_max.unwrap_or(1000);
                    t.comments.push(format!(
                        "bang sequence, beta = {beta}, taylor n_max = {n_max}"
                    ));
                    grid.par_iter()
                        .map(|&s| (s, bang_depth(beta, s, n_max, &cfg)))
                        .collect()
                } else {
                    return Err(CliError::Usage(
                        "apps dc needs --sequence FILE or --family bang --beta B".into(),
                    ));
                };
            refusal(&rows)?;
            t.rows = rows.into_iter().map(|(s, r)| depth_row(s, r)).collect();
            Ok(t)
        }
        AppKind::Poly => {
            let w = c.weight()?;
            let mut t = Table::new(depth_header);
            t.comments.push(format!("weight {}", w.label));
            let rows: Vec<_> = grid
                .par_iter()
                .map(|&s| (s, poly_distance(&w, s, &cfg)))
                .collect();
            refusal(&rows)?;
            t.rows = rows.into_iter().map(|(s, r)| depth_row(s, r)).collect();
            Ok(t)
        }
        AppKind::Ls => {
            if c.family.is_some() || c.sequence.is_some() {
                return Err(CliError::Usage("apps ls takes only --majorant".into()));
            }
            let m = c
                .read_majorant()?
                .ok_or_else(|| CliError::Usage("apps ls needs --majorant SPEC".into()))?;
            let mut t = Table::new(vec![
                "s",
                "logMstar_asym",
                "q_star",
                "qstar_lo",
                "qstar_hi",
                "status",
            ]);
            t.comments.push(format!("majorant {m:?}"));
            let rows: Vec<_> = grid
                .par_iter()
                .map(|&s| (s, ls_majorant(&m, s, &cfg)))
                .collect();
            refusal(&rows)?;
            t.rows = rows
                .into_iter()
                .map(|(s, r)| match r {
                    Ok(l) => vec![
                        num(s),
                        num(l.log_mstar_asym),
                        num(l.q_star),
                        num(l.qstar_sandwich.0),
                        num(l.qstar_sandwich.1),
                        "ok".into(),
                    ],
                    Err(e) => {
                        let mut row = vec![num(s)];
                        row.extend(std::iter::repeat_n(String::new(), 4));
                        row.push(status(&e.to_string()));
                        row
                    }
                })
                .collect();
            Ok(t)
        }
    }
}
