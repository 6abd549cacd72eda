use std::collections::{HashSet, VecDeque};

use super::{Label, MemId, Mfa, StateId, Transition};
use crate::{Error, Result, Symbol};

pub const DEFAULT_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Open,
    Closed,
}

/// A memory's status and content; the content is the input factor
/// `w[start..end]`. Empty closed memories are normalised to `0..0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemoryCell {
    pub status: Status,
    pub start: usize,
    pub end: usize,
}

impl MemoryCell {
    pub const EMPTY: MemoryCell = MemoryCell { status: Status::Closed, start: 0, end: 0 };

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub pos: usize,
    pub memories: Vec<MemoryCell>,
}

impl Configuration {
    pub fn initial(mfa: &Mfa) -> Self {
        Configuration { state: mfa.initial(), pos: 0, memories: vec![MemoryCell::EMPTY; mfa.memory_count()] }
    }

    pub fn content<'w>(&self, m: MemId, w: &'w [Symbol]) -> &'w [Symbol] {
        let cell = self.memories[m];
        &w[cell.start..cell.end]
    }

    fn consume(&mut self, len: usize) {
        self.pos += len;
        for cell in &mut self.memories {
            if cell.status == Status::Open {
                cell.end = self.pos;
            }
        }
    }
}

/// Apply transition `t` to configuration `c` on input `w`, if applicable.
pub fn step(w: &[Symbol], c: &Configuration, t: &Transition) -> Option<Configuration> {
    if t.from != c.state {
        return None;
    }
    let mut next = c.clone();
    next.state = t.to;
    match t.label {
        Label::Eps => {}
        Label::Char(s) => {
            if w.get(c.pos) != Some(&s) {
                return None;
            }
            next.consume(1);
        }
        Label::Recall(m) => {
            let cell = c.memories[m];
            if cell.status != Status::Closed {
                return None;
            }
            let len = cell.len();
            if c.pos + len > w.len() || w[cell.start..cell.end] != w[c.pos..c.pos + len] {
                return None;
            }
            next.consume(len);
        }
        Label::Open(m) => {
            next.memories[m] = MemoryCell { status: Status::Open, start: c.pos, end: c.pos };
        }
        Label::Close(m) => {
            let cell = &mut next.memories[m];
            cell.status = Status::Closed;
            if cell.is_empty() {
                *cell = MemoryCell::EMPTY;
            }
        }
    }
    Some(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Acceptance {
    pub accepted: bool,
    /// Distinct configurations visited before the answer was known.
    pub visited: usize,
}

/// Whether `mfa` accepts `w`, by breadth-first search over configurations.
pub fn accepts(mfa: &Mfa, w: &[Symbol]) -> Result<bool> {
    accepts_with_budget(mfa, w, DEFAULT_BUDGET).map(|a| a.accepted)
}

/// [`accepts`] with an explicit cap on visited configurations.
pub fn accepts_with_budget(mfa: &Mfa, w: &[Symbol], budget: usize) -> Result<Acceptance> {
    let start = Configuration::initial(mfa);
    let mut seen: HashSet<Configuration> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(c) = queue.pop_front() {
        if c.pos == w.len() && mfa.is_accepting(c.state) {
            return Ok(Acceptance { accepted: true, visited: seen.len() });
        }
        for t in mfa.out(c.state) {
            if let Some(next) = step(w, &c, t) {
                if !seen.contains(&next) {
                    if seen.len() >= budget {
                        return Err(Error::Budget { what: "configuration", limit: budget });
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(Acceptance { accepted: false, visited: seen.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfa::MfaBuilder;
    use crate::symbols;

    fn copy_twice() -> Mfa {
        let mut b = MfaBuilder::new();
        let q: Vec<_> = (0..5).map(|_| b.state()).collect();
        b.edge(q[0], Label::Open(0), q[1]);
        b.edge(q[1], Label::Char('a'.into()), q[2]);
        b.edge(q[2], Label::Char('a'.into()), q[2]);
        b.edge(q[2], Label::Close(0), q[3]);
        b.edge(q[3], Label::Recall(0), q[4]);
        b.accept(q[4]);
        b.finish(q[0], 1).unwrap()
    }

    #[test]
    fn recall_copies_the_stored_factor() {
        let m = copy_twice();
        assert!(accepts(&m, &symbols("aaaa")).unwrap());
        assert!(!accepts(&m, &symbols("aaa")).unwrap());
        assert!(!accepts(&m, &symbols("")).unwrap());
    }

    #[test]
    fn step_semantics() {
        let m = copy_twice();
        let w = symbols("aa");
        let c0 = Configuration::initial(&m);
        let ts = m.transitions();
        let c1 = step(&w, &c0, &ts[0]).unwrap();
        assert_eq!(c1.memories[0], MemoryCell { status: Status::Open, start: 0, end: 0 });
        let c2 = step(&w, &c1, &ts[1]).unwrap();
        assert_eq!((c2.pos, c2.memories[0].end), (1, 1));
        assert!(step(&w, &c2, &ts[4]).is_none(), "wrong source state");
        let c3 = step(&w, &c2, &ts[3]).unwrap();
        assert_eq!(c3.memories[0].status, Status::Closed);
        let c4 = step(&w, &c3, &ts[4]).unwrap();
        assert_eq!(c4.pos, 2);
    }

    #[test]
    fn recall_of_open_memory_blocks() {
        let mut b = MfaBuilder::new();
        let (p, q, r) = (b.state(), b.state(), b.state());
        b.edge(p, Label::Open(0), q);
        b.edge(q, Label::Recall(0), r);
        b.accept(r);
        let m = b.finish(p, 1).unwrap();
        assert!(!accepts(&m, &[]).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let m = copy_twice();
        let w = symbols(&"a".repeat(40));
        assert!(matches!(accepts_with_budget(&m, &w, 3), Err(Error::Budget { .. })));
    }
}
