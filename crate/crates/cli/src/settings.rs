use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use clap::CommandFactory;
use kvn_core::config::ConfigFile;
use kvn_core::KvnError;
use thiserror::Error;

use crate::cli::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Tolerance(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Tolerance(_) | CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<KvnError> for CliError {
    fn from(e: KvnError) -> Self {
        match e {
            KvnError::NonFinite { .. } | KvnError::ZeroSearch(_) => CliError::Numerical(e.to_string()),
            KvnError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Keys the config file may hold: `format` and `out` at the top, and under
/// each `[subcommand]` the long names of that subcommand's flags.
fn allowed_keys() -> Vec<(String, Vec<String>)> {
    let cmd = Cli::command();
    let mut out = vec![(String::new(), vec!["format".to_string(), "out".to_string()])];
    for sub in cmd.get_subcommands() {
        let keys = sub
            .get_arguments()
            .filter(|a| !a.is_global_set())
            .filter_map(|a| a.get_long().map(str::to_string))
            .filter(|k| !matches!(k.as_str(), "help" | "config" | "out" | "format"))
            .collect();
        out.push((sub.get_name().to_string(), keys));
    }
    out
}

/// Flag values merged over the config file, which is merged over defaults.
pub struct Settings {
    cfg: Option<ConfigFile>,
    section: String,
}

impl Settings {
    pub fn load(path: Option<&Path>, section: &str) -> Result<Self, CliError> {
        let cfg = match path {
            None => None,
            Some(p) => {
                let cfg = ConfigFile::read(p)?;
                let allowed = allowed_keys();
                let borrowed: Vec<(&str, Vec<&str>)> =
                    allowed.iter().map(|(s, ks)| (s.as_str(), ks.iter().map(String::as_str).collect())).collect();
                let table: Vec<(&str, &[&str])> = borrowed.iter().map(|(s, ks)| (*s, ks.as_slice())).collect();
                cfg.check_keys(&table).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                Some(cfg)
            }
        };
        Ok(Settings { cfg, section: section.to_string() })
    }

    fn lookup<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        let Some(raw) = self.cfg.as_ref().and_then(|c| c.get(section, key)) else {
            return Ok(None);
        };
        let shown = if section.is_empty() { key.to_string() } else { format!("[{section}] {key}") };
        raw.parse().map(Some).map_err(|e| CliError::Usage(format!("config {shown} = '{raw}': {e}")))
    }

    /// Value for `key` in this subcommand's section.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.lookup(&self.section, key)?.unwrap_or(default)),
        }
    }

    /// Like [`pick`](Self::pick) with no default.
    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.lookup(&self.section, key),
        }
    }

    /// Top-level key outside any section.
    pub fn global<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.lookup("", key),
        }
    }
}

pub fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(msg()))
    }
}
