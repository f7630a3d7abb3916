use std::process::ExitCode;

use clap::Parser;
use orir_cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Written { files, report }) => {
            for f in &files {
                println!("wrote {}", f.display());
            }
            for (k, v) in &report.metrics {
                println!("  {k} = {}", serde_json::to_string(v).unwrap_or_default());
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::SelfTest(report)) => {
            print!("{}", report.render());
            if report.passed() {
                println!("self-test: all {} checks passed", report.rows.len());
                ExitCode::SUCCESS
            } else {
                println!("self-test: {} of {} checks FAILED", report.failures(), report.rows.len());
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
