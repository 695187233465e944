use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Named pass/fail flags plus the residual behind each measured identity.
///
/// Residuals are maximum absolute entries of a difference matrix. A flag
/// recorded through [`AxiomReport::check`] is `residual < tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub flags: BTreeMap<String, bool>,
    pub residuals: BTreeMap<String, f64>,
    pub tol: f64,
}

impl AxiomReport {
    pub fn new(tol: f64) -> Self {
        Self { flags: BTreeMap::new(), residuals: BTreeMap::new(), tol }
    }

    /// Records a residual and sets the same-named flag to `residual < tol`.
    pub fn check(&mut self, name: &str, residual: f64) -> bool {
        let ok = residual < self.tol;
        self.residuals.insert(name.to_owned(), residual);
        self.flags.insert(name.to_owned(), ok);
        ok
    }

    /// Records a residual without an accompanying flag.
    pub fn measure(&mut self, name: &str, residual: f64) {
        self.residuals.insert(name.to_owned(), residual);
    }

    pub fn set_flag(&mut self, name: &str, value: bool) {
        self.flags.insert(name.to_owned(), value);
    }

    /// Missing flags read as `false`.
    pub fn flag(&self, name: &str) -> bool {
        self.flags.get(name).copied().unwrap_or(false)
    }

    /// Missing residuals read as infinite.
    pub fn residual(&self, name: &str) -> f64 {
        self.residuals.get(name).copied().unwrap_or(f64::INFINITY)
    }

    pub fn all(&self, names: &[&str]) -> bool {
        names.iter().all(|n| self.flag(n))
    }

    pub fn all_flags(&self) -> bool {
        self.flags.values().all(|&v| v)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().fold(0.0, |m, &r| m.max(r))
    }

    /// Copies every entry of `other` under `prefix.name`.
    pub fn merge_prefixed(&mut self, prefix: &str, other: &AxiomReport) {
        for (k, &v) in &other.flags {
            self.flags.insert(format!("{prefix}.{k}"), v);
        }
        for (k, &v) in &other.residuals {
            self.residuals.insert(format!("{prefix}.{k}"), v);
        }
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, ok) in &self.flags {
            let mark = if *ok { "ok  " } else { "FAIL" };
            match self.residuals.get(name) {
                Some(r) => writeln!(f, "{mark} {name:<28} residual {r:.3e}")?,
                None => writeln!(f, "{mark} {name}")?,
            }
        }
        for (name, r) in self.residuals.iter().filter(|(n, _)| !self.flags.contains_key(*n)) {
            writeln!(f, "     {name:<28} {r:.3e}")?;
        }
        Ok(())
    }
}
