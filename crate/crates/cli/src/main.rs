use std::process::ExitCode;

use clap::Parser;

use relconvex_cli::args::Cli;
use relconvex_cli::report::EXIT_INPUT;
use relconvex_cli::run;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let (report, text) = run(&cli);
    if cli.json {
        match serde_json::to_string_pretty(&report) {
            Ok(s) => println!("{s}"),
            Err(e) => eprintln!("cannot serialize report: {e}"),
        }
    } else if report.error.is_some() {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(report.exit_code as u8)
}
