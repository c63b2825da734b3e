//! Reading pipeline resources from disk.

use std::path::{Path, PathBuf};

use crate::adapter::FixtureReparser;
use crate::conllu::{ingest_conllu, IngestOptions};
use crate::disambig::SynsetGraph;
use crate::error::{Error, Result};
use crate::frames::{learn_store, parse_training, LvpStore};
use crate::paraparse::Lexicon;
use crate::parse::ParseSet;
use crate::pipeline::{Config, Resources};

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Wraps an error with the file it came from.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Syntax { line, message } => Error::Input(format!("{}:{line}: {message}", path.display())),
        other => other,
    })
}

pub fn read_conllu(path: &Path) -> Result<Vec<ParseSet>> {
    in_file(path, ingest_conllu(&read(path)?, &IngestOptions::default()))
}

/// A config file and the directory its relative paths are resolved in.
#[derive(Debug, Clone, Default)]
pub struct LoadedConfig {
    pub config: Config,
    pub base: PathBuf,
}

impl LoadedConfig {
    pub fn load(path: Option<&Path>) -> Result<LoadedConfig> {
        match path {
            None => Ok(LoadedConfig { config: Config::default(), base: PathBuf::from(".") }),
            Some(p) => Ok(LoadedConfig {
                config: in_file(p, Config::parse(&read(p)?))?,
                base: p.parent().map(Path::to_path_buf).unwrap_or_default(),
            }),
        }
    }

    pub fn resolve(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn lexicon(&self) -> Result<Lexicon> {
        match &self.config.lexicon {
            None => Ok(Lexicon::default()),
            Some(rel) => {
                let p = self.resolve(rel);
                in_file(&p, Lexicon::parse(&read(&p)?))
            }
        }
    }

    pub fn reparser(&self) -> Result<FixtureReparser> {
        match &self.config.reparse_fixtures {
            None => Ok(FixtureReparser::default()),
            Some(rel) => Ok(FixtureReparser { sets: read_conllu(&self.resolve(rel))? }),
        }
    }

    /// Parses of the training sentences: the configured file, or the
    /// training file with a `.conllu` extension.
    pub fn train_parses(&self, train: &Path) -> Result<Vec<ParseSet>> {
        let path = match &self.config.train_parses {
            Some(rel) => self.resolve(rel),
            None => train.with_extension("conllu"),
        };
        read_conllu(&path)
    }
}

pub fn load_store(train: &Path, cfg: &LoadedConfig, lexicon: &Lexicon) -> Result<LvpStore> {
    let annotations = in_file(train, parse_training(&read(train)?))?;
    learn_store(&annotations, &cfg.train_parses(train)?, lexicon)
}

pub fn load_graph(path: &Path) -> Result<SynsetGraph> {
    in_file(path, SynsetGraph::parse(&read(path)?))
}

/// Config, lexicon, learned store, sense graph and recorded re-parses.
pub fn load_resources(train: &Path, synsets: &Path, config: Option<&Path>) -> Result<(Resources, FixtureReparser)> {
    let cfg = LoadedConfig::load(config)?;
    let lexicon = cfg.lexicon()?;
    let store = load_store(train, &cfg, &lexicon)?;
    let graph = load_graph(synsets)?;
    let reparser = cfg.reparser()?;
    Ok((Resources { config: cfg.config, store, graph, lexicon }, reparser))
}

/// Resource file contents already in memory. Path keys in `config` are
/// ignored; the texts they would name are passed directly.
#[derive(Debug, Clone, Copy, Default)]
pub struct ResourceTexts<'a> {
    pub config: Option<&'a str>,
    pub train: &'a str,
    pub train_parses: &'a str,
    pub synsets: &'a str,
    pub lexicon: Option<&'a str>,
    pub reparses: Option<&'a str>,
}

impl ResourceTexts<'_> {
    pub fn build(&self) -> Result<(Resources, FixtureReparser)> {
        let config = self.config.map(Config::parse).transpose()?.unwrap_or_default();
        let lexicon = self.lexicon.map(Lexicon::parse).transpose()?.unwrap_or_default();
        let parses = ingest_conllu(self.train_parses, &IngestOptions::default())?;
        let store = learn_store(&parse_training(self.train)?, &parses, &lexicon)?;
        let graph = SynsetGraph::parse(self.synsets)?;
        let reparser = FixtureReparser {
            sets: self.reparses.map(|r| ingest_conllu(r, &IngestOptions::default())).transpose()?.unwrap_or_default(),
        };
        Ok((Resources { config, store, graph, lexicon }, reparser))
    }
}
