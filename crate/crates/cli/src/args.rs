use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "authoring", version, about = "Author logical facts from factual English sentences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Author every sentence of a CoNLL-U corpus and write ULR files.
    Batch(BatchArgs),
    /// Read sentences from stdin and author them one at a time.
    Interactive(SessionArgs),
    /// Serve the authoring operations as JSON over HTTP.
    Serve(ServeArgs),
    /// Score system ULRs against gold ULRs.
    Eval(EvalArgs),
    /// Learn the valence pattern store and write it out.
    Train(TrainArgs),
}

#[derive(Debug, Args)]
pub struct StoreArgs {
    /// Frame annotations (train/5 terms).
    #[arg(long)]
    pub train: PathBuf,
    /// Sense graph.
    #[arg(long)]
    pub synsets: PathBuf,
    /// key=value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// Ranked parses in extended CoNLL-U.
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub store: StoreArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write every rewrite as JSON lines, tagged with its sentence id.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SessionArgs {
    #[command(flatten)]
    pub store: StoreArgs,
    /// Recorded parses answering in fixture mode.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub session: SessionArgs,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Gold ULR document.
    #[arg(long)]
    pub gold: PathBuf,
    /// System ULR document; when absent the corpus is authored first.
    #[arg(long, conflicts_with = "corpus")]
    pub system: Option<PathBuf>,
    #[arg(long, requires_all = ["train", "synsets"])]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub train: Option<PathBuf>,
    #[arg(long)]
    pub synsets: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the full report as JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Where to write the learned patterns; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
