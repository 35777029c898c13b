use std::io::Write;
use std::process::ExitCode;

use gatesplit::cli::{self, EXIT_USAGE};

fn main() -> ExitCode {
    let cmd = match cli::parse_args(std::env::args().skip(1)) {
        Ok(cmd) => cmd,
        Err(e) => {
            e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let threads = match cli::threads_from_env() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("{}", serde_json::json!({ "error": "usage", "message": msg }));
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": "usage", "message": e.to_string() }));
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match pool.install(|| cli::run(&cmd)) {
        Ok(json) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{json}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.diagnostic());
            ExitCode::from(failure.exit_code as u8)
        }
    }
}
