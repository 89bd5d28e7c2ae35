use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = match deltafpt_cli::parse_and_run(std::env::args_os()) {
        Ok(r) => r,
        // Help and version exit 0; argument errors exit 2.
        Err(e) => e.exit(),
    };
    // A closed pipe downstream is not worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{}", report.render());
    ExitCode::from(report.exit_code() as u8)
}
