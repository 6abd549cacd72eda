//! Reference matcher that evaluates the ref-word semantics directly.
//!
//! Slow but simple: every subexpression is evaluated against every start
//! position and variable environment, with memoisation. Intended for small
//! inputs and as the ground truth in differential tests.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use crate::syntax::{Node, NodeId, Regex};
use crate::{Error, Result, Symbol};

pub const DEFAULT_BUDGET: usize = 10_000_000;

/// A letter of a ref-word: a terminal, a variable reference, or a bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefSym {
    Sym(Symbol),
    Var(String),
    Open(String),
    Close(String),
}

/// Resolve every variable reference to the content of the nearest completed
/// bracket pair of that variable to its left; unset variables resolve to ε.
pub fn dereference(refword: &[RefSym]) -> Result<Vec<Symbol>> {
    let mut out: Vec<Symbol> = Vec::new();
    let mut open: HashMap<&str, usize> = HashMap::new();
    let mut stored: HashMap<&str, (usize, usize)> = HashMap::new();
    for (i, letter) in refword.iter().enumerate() {
        match letter {
            RefSym::Sym(s) => out.push(*s),
            RefSym::Open(x) => {
                if open.insert(x, out.len()).is_some() {
                    return Err(Error::MalformedRefWord(format!("`{x}` reopened at {i}")));
                }
            }
            RefSym::Close(x) => {
                let start = open
                    .remove(x.as_str())
                    .ok_or_else(|| Error::MalformedRefWord(format!("unmatched close of `{x}` at {i}")))?;
                stored.insert(x, (start, out.len()));
            }
            RefSym::Var(x) => {
                if open.contains_key(x.as_str()) {
                    return Err(Error::MalformedRefWord(format!("`{x}` referenced inside its own brackets at {i}")));
                }
                if let Some(&(s, e)) = stored.get(x.as_str()) {
                    out.extend_from_within(s..e);
                }
            }
        }
    }
    if let Some(x) = open.keys().next() {
        return Err(Error::MalformedRefWord(format!("`{x}` never closed")));
    }
    Ok(out)
}

/// Whether `w` is in the language of `regex`.
pub fn matches(regex: &Regex, w: &[Symbol]) -> Result<bool> {
    matches_with_budget(regex, w, DEFAULT_BUDGET)
}

/// Like [`matches`] with an explicit bound on evaluated (node, position,
/// environment) visits.
pub fn matches_with_budget(regex: &Regex, w: &[Symbol], budget: usize) -> Result<bool> {
    let mut o = Oracle { regex, w, memo: HashMap::new(), visits: 0, budget };
    let env: Env = vec![None; regex.var_count()].into();
    let ends = o.eval(regex.root(), 0, &env)?;
    Ok(ends.iter().any(|(j, _)| *j == w.len()))
}

/// All words of length at most `maxlen` over `alphabet` in the language.
pub fn enumerate_language(regex: &Regex, maxlen: usize, alphabet: &[Symbol]) -> Result<BTreeSet<Vec<Symbol>>> {
    const WORD_CAP: usize = 4_000_000;
    let total: usize = (0..=maxlen).map(|l| alphabet.len().saturating_pow(l as u32)).fold(0, usize::saturating_add);
    if total > WORD_CAP {
        return Err(Error::Budget { what: "enumerated word", limit: WORD_CAP });
    }
    let mut lang = BTreeSet::new();
    for w in all_words(alphabet, maxlen) {
        if matches(regex, &w)? {
            lang.insert(w);
        }
    }
    Ok(lang)
}

/// Every word over `alphabet` of length at most `maxlen`, shortest first.
pub fn all_words(alphabet: &[Symbol], maxlen: usize) -> Vec<Vec<Symbol>> {
    let mut words = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..maxlen {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for &s in alphabet {
                let mut v: Vec<Symbol> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    words
}

type Env = Rc<[Option<(usize, usize)>]>;
type Outcomes = Rc<Vec<(usize, Env)>>;

struct Oracle<'a> {
    regex: &'a Regex,
    w: &'a [Symbol],
    memo: HashMap<(NodeId, usize, Env), Outcomes>,
    visits: usize,
    budget: usize,
}

impl Oracle<'_> {
    /// All (end position, environment) pairs reachable by matching node `id`
    /// from position `i` under `env`.
    fn eval(&mut self, id: NodeId, i: usize, env: &Env) -> Result<Outcomes> {
        self.visits += 1;
        if self.visits > self.budget {
            return Err(Error::Budget { what: "oracle node-visit", limit: self.budget });
        }
        let key = (id, i, env.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let out: Vec<(usize, Env)> = match self.regex.node(id) {
            Node::Epsilon => vec![(i, env.clone())],
            Node::Literal(s) => {
                if self.w.get(i) == Some(&s) {
                    vec![(i + 1, env.clone())]
                } else {
                    vec![]
                }
            }
            Node::Recall(x) => match env[x] {
                None => vec![(i, env.clone())],
                Some((s, e)) => {
                    let len = e - s;
                    if i + len <= self.w.len() && self.w[s..e] == self.w[i..i + len] {
                        vec![(i + len, env.clone())]
                    } else {
                        vec![]
                    }
                }
            },
            Node::Def(x, c) => self
                .eval(c, i, env)?
                .iter()
                .map(|(j, e)| {
                    let mut next = e.to_vec();
                    next[x] = Some((i, *j));
                    (*j, Env::from(next))
                })
                .collect(),
            Node::Alt(l, r) => {
                let mut set: HashSet<(usize, Env)> = self.eval(l, i, env)?.iter().cloned().collect();
                set.extend(self.eval(r, i, env)?.iter().cloned());
                set.into_iter().collect()
            }
            Node::Concat(l, r) => {
                let mut set = HashSet::new();
                for (j, e) in self.eval(l, i, env)?.iter() {
                    set.extend(self.eval(r, *j, e)?.iter().cloned());
                }
                set.into_iter().collect()
            }
            Node::Plus(c) => {
                let mut seen: HashSet<(usize, Env)> = HashSet::new();
                let mut queue: Vec<(usize, Env)> = Vec::new();
                for item in self.eval(c, i, env)?.iter() {
                    if seen.insert(item.clone()) {
                        queue.push(item.clone());
                    }
                }
                while let Some((j, e)) = queue.pop() {
                    for item in self.eval(c, j, &e)?.iter() {
                        if seen.insert(item.clone()) {
                            queue.push(item.clone());
                        }
                    }
                }
                seen.into_iter().collect()
            }
        };
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols;

    fn m(p: &str, w: &str) -> bool {
        matches(&Regex::parse(p).unwrap(), &symbols(w)).unwrap()
    }

    #[test]
    fn dereference_resolves_nearest_pair() {
        let s = |c| RefSym::Sym(Symbol::char(c));
        let rw = vec![
            RefSym::Open("x".into()),
            s('a'),
            RefSym::Close("x".into()),
            s('b'),
            RefSym::Var("x".into()),
            RefSym::Var("y".into()),
        ];
        assert_eq!(dereference(&rw).unwrap(), symbols("aba"));
    }

    #[test]
    fn dereference_rejects_malformed_words() {
        let bad = [
            vec![RefSym::Close("x".into())],
            vec![RefSym::Open("x".into())],
            vec![RefSym::Open("x".into()), RefSym::Var("x".into()), RefSym::Close("x".into())],
            vec![RefSym::Open("x".into()), RefSym::Open("x".into())],
        ];
        for rw in bad {
            assert!(matches!(dereference(&rw), Err(Error::MalformedRefWord(_))), "{rw:?}");
        }
    }

    #[test]
    fn copy_language() {
        assert!(m("$x{(a|b)+}c$x", "abcab"));
        assert!(!m("$x{(a|b)+}c$x", "abcba"));
    }

    #[test]
    fn undefined_recall_is_empty_and_redefinition_wins() {
        let alpha = "$x{a+}b$x($y c$y{b+})+$x{b+}a$x";
        assert!(m(alpha, "abacbbab"));
        let renamed = Regex::parse(alpha).unwrap().rename_variable("y", "x").unwrap();
        assert!(!matches(&renamed, &symbols("abacbbab")).unwrap());
    }

    #[test]
    fn definitions_inside_loops_keep_the_latest_value() {
        assert!(m("($x{a|b})+$x", "abb"));
        assert!(!m("($x{a|b})+$x", "aba"));
    }

    #[test]
    fn budget_exceeded_is_an_error() {
        let r = Regex::parse("(a|b)*$x{(a|b)*}(a|b)*$x").unwrap();
        let w = symbols("abababababababab");
        assert!(matches!(matches_with_budget(&r, &w, 50), Err(Error::Budget { .. })));
    }

    #[test]
    fn enumeration_lists_short_words() {
        let r = Regex::parse("$x{a|b}$x").unwrap();
        let lang = enumerate_language(&r, 3, &symbols("ab")).unwrap();
        assert_eq!(lang.into_iter().collect::<Vec<_>>(), vec![symbols("aa"), symbols("bb")]);
    }
}
