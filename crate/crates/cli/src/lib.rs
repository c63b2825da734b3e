//! Command-line and HTTP front ends for the authoring pipeline.

pub mod args;
pub mod backend;
pub mod commands;
pub mod server;

use std::io::{BufReader, Write};

use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] authoring::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io(_) => 2,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Batch(a) => {
            eprintln!("{}", commands::batch(&a)?);
        }
        Command::Interactive(a) => {
            let backend = commands::load_backend(&a)?;
            let stdin = std::io::stdin();
            let session = commands::interactive(&backend, BufReader::new(stdin.lock()), std::io::stdout())?;
            eprintln!("session ended: {} sentences, {} facts", session.accepted.len(), session.fact_count());
        }
        Command::Serve(a) => {
            let backend = commands::load_backend(&a.session)?;
            let state = server::AppState::new(backend);
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
            rt.block_on(server::serve(state, a.addr)).map_err(|e| CliError::Io(format!("{}: {e}", a.addr)))?;
        }
        Command::Eval(a) => {
            let (_, summary) = commands::eval(&a)?;
            println!("{summary}");
        }
        Command::Train(a) => {
            let text = commands::train(&a)?;
            if a.out.is_some() {
                eprintln!("{text}");
            } else {
                std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
            }
        }
    }
    Ok(())
}
