#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use copula_forge::numerics::threads_from_env;

use crate::args::Cli;
use crate::commands::{execute, Failure};

fn wants_json(args: &[OsString]) -> bool {
    args.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || args.iter().any(|a| a == "--format=json")
}

fn report(failure: &Failure, json: bool) {
    if json {
        eprint!("{}", render::to_json(&failure.to_json()));
    } else {
        eprintln!("error: {}", failure.message());
    }
}

fn run(args: Vec<OsString>) -> i32 {
    let json = wants_json(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            if json {
                let text = e.render().to_string();
                let first = text.lines().next().unwrap_or_default();
                report(&Failure::Usage(first.trim_start_matches("error: ").to_string()), true);
            } else {
                let _ = e.print();
            }
            return 2;
        }
    };
    if let Some(n) = threads_from_env() {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cmd = &cli.command;
    if !cmd.formats().contains(&cmd.format()) {
        let allowed: Vec<&str> = cmd.formats().iter().map(|f| f.name()).collect();
        report(
            &Failure::Usage(format!(
                "{} does not support --format {}; use one of {}",
                cmd.name(),
                cmd.format().name(),
                allowed.join(", ")
            )),
            json,
        );
        return 2;
    }
    match execute(cmd) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return 1;
            }
            match out.failure {
                Some(f) => {
                    report(&f, json);
                    f.code()
                }
                None => 0,
            }
        }
        Err(f) => {
            report(&f, json);
            f.code()
        }
    }
}

fn main() {
    std::process::exit(run(std::env::args_os().collect()));
}
