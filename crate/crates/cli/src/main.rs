//! `blowup`: experiments on universal blow-up of scalar conservation laws.
//!
//! Exit codes: 0 success, 2 configuration, 3 numerical failure,
//! 4 no blow-up or degenerate blow-up, 5 window too small.

mod args;
mod commands;
mod config;
mod error;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match &cli.command {
        Command::Profile(a) => commands::cmd_profile(a),
        Command::Converge(a) => commands::cmd_converge(a),
        Command::Soliton(a) => commands::cmd_soliton(a),
        Command::GasFrame(a) => commands::cmd_gas_frame(a),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        if let Some(h) = e.hint() {
            eprintln!("hint: {h}");
        }
        std::process::exit(e.exit_code());
    }
}
