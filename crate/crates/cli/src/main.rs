use std::process::ExitCode;

use clap::Parser;
use ftl_cli::{execute, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("FTL_LOG")).init();
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let code = match execute(&cli, &mut stdout) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.code
        }
    };
    ExitCode::from(code as u8)
}
