mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{AsymAction, Cli, Command, WeightAction};
use error::{CliResult, EXIT_USAGE};

fn run(mut cli: Cli) -> CliResult<u8> {
    cli.common.merge_config()?;
    let c = &cli.common;
    let (table, code) = match cli.command {
        Command::Weight {
            action:
                WeightAction::Describe {
                    y_start,
                    y_stop,
                    y_count,
                },
        } => commands::weight_describe(c, y_start, y_stop, y_count)?,
        Command::Legendre => (commands::legendre(c)?, 0),
        Command::Asym {
            action: AsymAction::Compare { target },
        } => (commands::asym_compare(c, target)?, 0),
        Command::Apps { which } => (commands::apps(c, which)?, 0),
    };
    table.write(c.out.as_deref(), c.reproducible)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("outer-weight: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
