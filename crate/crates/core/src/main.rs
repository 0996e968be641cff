use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use iffquant::cli::{run, TaskConfig};

fn main() -> ExitCode {
    let cfg = TaskConfig::parse();
    match run(&cfg) {
        Ok((report, passed)) => {
            let written = match &cfg.out {
                Some(path) => std::fs::write(path, report + "\n").map_err(|e| e.to_string()),
                None => match writeln!(std::io::stdout(), "{report}") {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                    r => r.map_err(|e| e.to_string()),
                },
            };
            if let Err(e) = written {
                eprintln!("iffquant: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("iffquant: {e}");
            ExitCode::from(2)
        }
    }
}
