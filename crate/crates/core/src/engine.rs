//! Engine selection and a uniform matching interface.

use std::fmt;

use crate::avd::{build_reuse_mfa, VarAnalysis};
use crate::mdet::is_memory_deterministic;
use crate::mfa::{self, build_crude, Mfa};
use crate::oracle;
use crate::sync::SyncMatcher;
use crate::syntax::Regex;
use crate::{Result, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Oracle,
    GenericBfs,
    ReuseMfa(usize),
    Sync,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Engine::Oracle => f.write_str("oracle"),
            Engine::GenericBfs => f.write_str("generic-bfs"),
            Engine::ReuseMfa(k) => write!(f, "reuse-mfa({k})"),
            Engine::Sync => f.write_str("sync"),
        }
    }
}

pub const DEFAULT_AVD_CAP: usize = 2;

/// Facts about a pattern that drive engine selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternInfo {
    pub vars: usize,
    pub avd: usize,
    pub mdet: bool,
    pub engine: Engine,
}

/// The synchronised matcher when the canonical automaton is memory
/// deterministic, else the bounded-memory automaton when the active variable
/// degree is at most `avd_cap`, else the generic search.
pub fn recommend(regex: &Regex, avd_cap: usize) -> PatternInfo {
    let analysis = VarAnalysis::new(regex);
    let avd = analysis.avd();
    let mdet = is_memory_deterministic(&analysis.mfa);
    let engine = if mdet {
        Engine::Sync
    } else if avd <= avd_cap {
        Engine::ReuseMfa(avd)
    } else {
        Engine::GenericBfs
    };
    PatternInfo { vars: regex.var_count(), avd, mdet, engine }
}

/// Match with the recommended engine; also reports which one ran.
pub fn match_auto(regex: &Regex, w: &[Symbol], avd_cap: usize) -> Result<(bool, Engine)> {
    let engine = recommend(regex, avd_cap).engine;
    Ok((Compiled::new(regex, engine)?.is_match(w)?, engine))
}

/// A pattern prepared for one engine, reusable across inputs.
pub enum Compiled {
    Oracle(Regex, usize),
    Bfs(Mfa, usize),
    Sync(Box<SyncMatcher>),
}

impl Compiled {
    pub fn new(regex: &Regex, engine: Engine) -> Result<Self> {
        Ok(match engine {
            Engine::Oracle => Compiled::Oracle(regex.clone(), oracle::DEFAULT_BUDGET),
            Engine::GenericBfs => Compiled::Bfs(build_crude(regex), mfa::DEFAULT_BUDGET),
            Engine::ReuseMfa(k) => Compiled::Bfs(build_reuse_mfa(regex, k)?.mfa, mfa::DEFAULT_BUDGET),
            Engine::Sync => Compiled::Sync(Box::new(SyncMatcher::new(build_crude(regex)))),
        })
    }

    /// Replace the search budget of the oracle and search engines.
    pub fn with_budget(self, budget: usize) -> Self {
        match self {
            Compiled::Oracle(r, _) => Compiled::Oracle(r, budget),
            Compiled::Bfs(m, _) => Compiled::Bfs(m, budget),
            other => other,
        }
    }

    pub fn is_match(&self, w: &[Symbol]) -> Result<bool> {
        match self {
            Compiled::Oracle(r, budget) => oracle::matches_with_budget(r, w, *budget),
            Compiled::Bfs(m, budget) => mfa::accepts_with_budget(m, w, *budget).map(|a| a.accepted),
            Compiled::Sync(s) => Ok(s.is_match(w)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols;

    #[test]
    fn dispatch_order() {
        let copy = Regex::parse("$x{(a|b)+}c$x").unwrap();
        assert_eq!(recommend(&copy, 2).engine, Engine::Sync);
        let fig = Regex::parse("(($z{a+b}$x{b+})|($x{a+}c$x)+)$x(($y{a+b+}$y)|($u{c+}a$u))$z$x{a+}b$x").unwrap();
        let info = recommend(&fig, 2);
        assert!(!info.mdet);
        assert_eq!(info.engine, Engine::ReuseMfa(2));
        assert_eq!(info.engine.to_string(), "reuse-mfa(2)");
        assert_eq!(recommend(&fig, 1).engine, Engine::GenericBfs);
    }

    #[test]
    fn auto_reports_engine_and_answer() {
        let copy = Regex::parse("$x{(a|b)+}c$x").unwrap();
        assert_eq!(match_auto(&copy, &symbols("abcab"), 2).unwrap(), (true, Engine::Sync));
    }
}
