use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use outer_weight::conditions::log_grid;
use outer_weight::weights::{DCSequence, LogWeight, Majorant};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "outer-weight",
    version,
    about = "Outer weight profiles, Legendre transforms and asymptotic checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect a weight.
    Weight {
        #[command(subcommand)]
        action: WeightAction,
    },
    /// Sweep the Legendre transform Q(s) over the s grid.
    Legendre,
    /// Compare quadrature oracles against leading-order asymptotics.
    Asym {
        #[command(subcommand)]
        action: AsymAction,
    },
    /// Depth of zero, polynomial distance and majorant pipelines.
    Apps {
        #[command(subcommand)]
        which: AppKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeightAction {
    /// Condition verdicts and the profile y,q,q1,q2,q3.
    Describe {
        #[arg(long, default_value_t = 1.0)]
        y_start: f64,
        #[arg(long, default_value_t = 1e6)]
        y_stop: f64,
        #[arg(long, default_value_t = 25)]
        y_count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum AsymAction {
    Compare {
        #[arg(long, value_enum)]
        target: Target,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Laplace,
    Fourier,
}

#[derive(Debug, Subcommand)]
pub enum AppKind {
    /// Denjoy-Carleman depth of zero (--sequence FILE or --family bang).
    Dc,
    /// Weighted polynomial distance.
    Poly,
    /// Levinson-Sjöberg majorant (--majorant SPEC).
    Ls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// φ(t) = |t|^α, 0 < α < 1
    Power,
    /// M_n = n!(log n)^{n(1+β)}
    Bang,
    /// φ(t) = √(2t), with profile q(y) = 2√y
    Sqrt,
}

#[derive(Debug, Default, Args)]
pub struct Common {
    /// key=value file with defaults for any of these flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub family: Option<FamilyArg>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// File of log M_n, one per line from n = 0
    #[arg(long, global = true)]
    pub sequence: Option<PathBuf>,
    /// inv-power:BETA for M(ξ) = exp(ξ^-β), or a CSV file of ξ,log M rows
    #[arg(long, global = true)]
    pub majorant: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s_start: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s_stop: Option<f64>,
    #[arg(long, global = true)]
    pub s_count: Option<usize>,
    /// Explicit comma-separated s values, used instead of the log grid
    #[arg(long, global = true, allow_hyphen_values = true, value_delimiter = ',')]
    pub s_values: Option<Vec<f64>>,
    /// Norm exponent for the Fourier comparison, 1 ≤ p ≤ inf
    #[arg(long, global = true)]
    pub p: Option<String>,
    /// Power of y in the Laplace integrand
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Relative quadrature tolerance for profiles and oracles
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Omit the timestamp header line
    #[arg(long, global = true)]
    pub reproducible: bool,
    /// Compute the oracle sandwich endpoints in `apps`
    #[arg(long, global = true)]
    pub with_oracle: bool,
    /// Largest n in the Taylor bound for `apps dc --family bang`
    #[arg(long, global = true)]
    pub taylor_n_max: Option<usize>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse()
        .map_err(|_| CliError::Data(format!("config key {key}: cannot parse {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> CliResult<bool> {
    match v {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(CliError::Data(format!(
            "config key {key}: expected a boolean, got {v:?}"
        ))),
    }
}

impl Common {
    /// Fills every unset flag from the config file; flags given on the command line win.
    pub fn merge_config(&mut self) -> CliResult<()> {
        let Some(path) = self.config.clone() else {
            return Ok(());
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Data(format!("config line {}: expected key=value", i + 1))
            })?;
            let key = k.trim().replace('_', "-");
            let v = v.trim();
            match key.as_str() {
                "family" => {
                    if self.family.is_none() {
                        self.family = Some(FamilyArg::from_str(v, true).map_err(|_| {
                            CliError::Usage(format!("config: unknown family {v:?}"))
                        })?);
                    }
                }
                "alpha" => set(&mut self.alpha, parse_num(&key, v)?),
                "beta" => set(&mut self.beta, parse_num(&key, v)?),
                "sequence" => set(&mut self.sequence, PathBuf::from(v)),
                "majorant" => set(&mut self.majorant, v.to_string()),
                "s-start" => set(&mut self.s_start, parse_num(&key, v)?),
                "s-stop" => set(&mut self.s_stop, parse_num(&key, v)?),
                "s-count" => set(&mut self.s_count, parse_num(&key, v)?),
                "s-values" => {
                    let vals = v
                        .split(',')
                        .map(|x| parse_num(&key, x.trim()))
                        .collect::<CliResult<Vec<f64>>>()?;
                    set(&mut self.s_values, vals);
                }
                "p" => set(&mut self.p, v.to_string()),
                "a" => set(&mut self.a, parse_num(&key, v)?),
                "out" => set(&mut self.out, PathBuf::from(v)),
                "rel-tol" => set(&mut self.rel_tol, parse_num(&key, v)?),
                "taylor-n-max" => set(&mut self.taylor_n_max, parse_num(&key, v)?),
                "reproducible" => self.reproducible |= parse_bool(&key, v)?,
                "with-oracle" => self.with_oracle |= parse_bool(&key, v)?,
                _ => {
                    return Err(CliError::Usage(format!(
                        "config line {}: unknown key {k:?}",
                        i + 1
                    )))
                }
            }
        }
        Ok(())
    }

    /// Decreasing log grid from --s-start to --s-stop, or the explicit --s-values.
    pub fn s_grid(&self) -> CliResult<Vec<f64>> {
        if let Some(v) = &self.s_values {
            if v.is_empty() {
                return Err(CliError::Usage("--s-values is empty".into()));
            }
            return Ok(v.clone());
        }
        let (Some(a), Some(b), Some(n)) = (self.s_start, self.s_stop, self.s_count) else {
            return Err(CliError::Usage(
                "an s grid needs --s-start, --s-stop and --s-count, or --s-values".into(),
            ));
        };
        if !(a > b && b > 0.0) || !a.is_finite() {
            return Err(CliError::Usage(format!(
                "need s-start > s-stop > 0, got {a} and {b}"
            )));
        }
        if n < 2 {
            return Err(CliError::Usage(format!("need s-count ≥ 2, got {n}")));
        }
        let mut g = log_grid(b, a, n);
        g.reverse();
        g[0] = a;
        g[n - 1] = b;
        Ok(g)
    }

    pub fn p_value(&self) -> CliResult<f64> {
        match self.p.as_deref() {
            None => Ok(f64::INFINITY),
            Some(s) if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") => {
                Ok(f64::INFINITY)
            }
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Usage(format!("--p: cannot parse {s:?}"))),
        }
    }

    fn sources(&self) -> usize {
        usize::from(self.family.is_some())
            + usize::from(self.sequence.is_some())
            + usize::from(self.majorant.is_some())
    }

    pub fn read_sequence(&self) -> CliResult<Option<DCSequence>> {
        let Some(p) = &self.sequence else {
            return Ok(None);
        };
        let text = fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("cannot read sequence {}: {e}", p.display())))?;
        Ok(Some(DCSequence::parse(&text)?))
    }

    pub fn read_majorant(&self) -> CliResult<Option<Majorant>> {
        let Some(spec) = &self.majorant else {
            return Ok(None);
        };
        if let Some(b) = spec.strip_prefix("inv-power:") {
            let beta: f64 = b
                .parse()
                .map_err(|_| CliError::Usage(format!("--majorant: bad beta {b:?}")))?;
            return Ok(Some(Majorant::inv_power(beta)?));
        }
        let text = fs::read_to_string(spec)
            .map_err(|e| CliError::Usage(format!("cannot read majorant {spec}: {e}")))?;
        Ok(Some(Majorant::parse_csv(&text)?))
    }

    /// The weight named by exactly one of --family, --sequence, --majorant.
    pub fn weight(&self) -> CliResult<LogWeight> {
        match self.sources() {
            0 => {
                return Err(CliError::Usage(
                    "specify a weight with --family, --sequence or --majorant".into(),
                ))
            }
            1 => {}
            _ => {
                return Err(CliError::Usage(
                    "--family, --sequence and --majorant are mutually exclusive".into(),
                ))
            }
        }
        if let Some(seq) = self.read_sequence()? {
            return Ok(LogWeight::sequence(seq)?);
        }
        if let Some(m) = self.read_majorant()? {
            return Ok(LogWeight::majorant(m)?);
        }
        Ok(match self.family.expect("one source") {
            FamilyArg::Power => {
                let a = self
                    .alpha
                    .ok_or_else(|| CliError::Usage("--family power needs --alpha".into()))?;
                LogWeight::power(a)?
            }
            FamilyArg::Bang => {
                let b = self
                    .beta
                    .ok_or_else(|| CliError::Usage("--family bang needs --beta".into()))?;
                LogWeight::bang(b)?
            }
            FamilyArg::Sqrt => LogWeight::sqrt_profile(),
        })
    }
}

fn set<T>(slot: &mut Option<T>, v: T) {
    if slot.is_none() {
        *slot = Some(v);
    }
}
