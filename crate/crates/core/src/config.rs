//! Plain-text `key = value` files with `[section]` headers. `#` starts a
//! comment. Keys before the first header belong to the section "".

use std::collections::BTreeMap;
use std::str::FromStr;

use ini::{Ini, ParseOption};

use crate::error::{KvnError, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        // inline comments are not part of the ini dialect, strip them first
        let stripped: String = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join("\n");
        let opt = ParseOption { enabled_quote: false, enabled_escape: false, ..Default::default() };
        let ini = Ini::load_from_str_opt(&stripped, opt).map_err(|e| KvnError::Parse(e.to_string()))?;
        let mut out = ConfigFile::default();
        for (name, props) in ini.iter() {
            let sec = out.sections.entry(name.unwrap_or("").to_string()).or_default();
            for (k, v) in props.iter() {
                if k.is_empty() {
                    return Err(KvnError::Parse("empty key".into()));
                }
                if sec.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(KvnError::Parse(format!("duplicate key {k}")));
                }
            }
        }
        // the general section is always present; drop it when empty
        if out.sections.get("").is_some_and(|s| s.is_empty()) {
            out.sections.remove("");
        }
        Ok(out)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| KvnError::Io(format!("{}: {e}", path.display())))?;
        ConfigFile::parse(&text)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section).and_then(|s| s.get(key)).map(String::as_str)
    }

    pub fn get_parsed<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| KvnError::Parse(format!("[{section}] {key}: cannot parse {v:?}"))),
        }
    }

    /// Error on any section or key outside `allowed`.
    pub fn check_keys(&self, allowed: &[(&str, &[&str])]) -> Result<()> {
        for (sec, keys) in &self.sections {
            let Some((_, ok)) = allowed.iter().find(|(s, _)| s == sec) else {
                return Err(KvnError::Parse(format!("unknown section [{sec}]")));
            };
            if let Some(bad) = keys.keys().find(|k| !ok.contains(&k.as_str())) {
                return Err(KvnError::Parse(format!("unknown key {bad} in [{sec}]")));
            }
        }
        Ok(())
    }
}
