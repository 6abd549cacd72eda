use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

/// An input symbol.
///
/// Single characters map to their code point. Multi-character tokens such as
/// `[add]` are interned process-wide and receive ids above the Unicode range,
/// so comparing and hashing symbols never touches strings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

const TOKEN_BASE: u32 = 0x11_0000;

#[derive(Default)]
struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static TABLE: OnceLock<RwLock<Interner>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

impl Symbol {
    pub fn char(c: char) -> Self {
        Symbol(c as u32)
    }

    /// Symbol for `name`: a one-character name gives the character symbol,
    /// anything longer an interned token.
    pub fn token(name: &str) -> Self {
        let mut chars = name.chars();
        if let (Some(c), None) = (chars.next(), chars.clone().next()) {
            return Symbol::char(c);
        }
        if let Some(&id) = interner().read().unwrap().ids.get(name) {
            return Symbol(id);
        }
        let mut table = interner().write().unwrap();
        if let Some(&id) = table.ids.get(name) {
            return Symbol(id);
        }
        let id = TOKEN_BASE + table.names.len() as u32;
        table.names.push(name.to_string());
        table.ids.insert(name.to_string(), id);
        Symbol(id)
    }

    pub fn as_char(self) -> Option<char> {
        char::from_u32(self.0).filter(|_| self.0 < TOKEN_BASE)
    }

    pub fn name(self) -> String {
        match self.as_char() {
            Some(c) => c.to_string(),
            None => interner().read().unwrap().names[(self.0 - TOKEN_BASE) as usize].clone(),
        }
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl From<char> for Symbol {
    fn from(c: char) -> Self {
        Symbol::char(c)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.name())
    }
}

/// One symbol per character of `s`.
pub fn symbols(s: &str) -> Vec<Symbol> {
    s.chars().map(Symbol::char).collect()
}

/// One symbol per whitespace-separated token of `s`.
pub fn tokens(s: &str) -> Vec<Symbol> {
    s.split_whitespace().map(Symbol::token).collect()
}

/// Concatenated symbol names; tokens are separated by spaces when any
/// multi-character token is present.
pub fn word_to_string(w: &[Symbol]) -> String {
    if w.iter().all(|s| s.as_char().is_some()) {
        w.iter().map(|s| s.as_char().unwrap()).collect()
    } else {
        w.iter().map(|s| s.name()).collect::<Vec<_>>().join(" ")
    }
}
