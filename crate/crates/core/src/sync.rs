//! Linear-time matching for memory-deterministic automata.
//!
//! When all computations that read the same prefix agree on the memories,
//! one shared copy of the memories suffices: the matcher tracks a set of
//! active states, a single memory valuation, and advances by contracted
//! transitions. Recalls are checked in constant time with an [`LceIndex`].
//!
//! On automata that are not memory-deterministic the answer may be wrong.

use crate::contracted::{ContractedTables, Instr};
use crate::lce::LceIndex;
use crate::mfa::{MemoryCell, Mfa, StateId, Status};
use crate::Symbol;

/// An automaton with its contracted-transition tables, ready to match.
pub struct SyncMatcher {
    mfa: Mfa,
    tables: ContractedTables,
}

impl SyncMatcher {
    pub fn new(mfa: Mfa) -> Self {
        let tables = ContractedTables::new(&mfa);
        SyncMatcher { mfa, tables }
    }

    pub fn mfa(&self) -> &Mfa {
        &self.mfa
    }

    pub fn tables(&self) -> &ContractedTables {
        &self.tables
    }

    pub fn is_match(&self, w: &[Symbol]) -> bool {
        let lce = LceIndex::new(w);
        sync_match(&self.mfa, &self.tables, &lce, w)
    }
}

/// State of the matcher between iterations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub iteration: usize,
    pub active: Vec<StateId>,
    pub pos: usize,
    pub memories: Vec<MemoryCell>,
}

pub fn sync_match(mfa: &Mfa, tables: &ContractedTables, lce: &LceIndex, w: &[Symbol]) -> bool {
    sync_match_traced(mfa, tables, lce, w, |_| {})
}

/// [`sync_match`], reporting the initial state and the state after every
/// iteration to `observe`.
pub fn sync_match_traced(
    mfa: &Mfa,
    tables: &ContractedTables,
    lce: &LceIndex,
    w: &[Symbol],
    mut observe: impl FnMut(&Snapshot),
) -> bool {
    let n = w.len();
    let k = mfa.memory_count();
    let states = mfa.state_count();
    let accepts_silently: Vec<bool> =
        (0..states).map(|q| tables.eps_closure(q).iter().any(|&p| mfa.is_accepting(p))).collect();
    let mut snap = Snapshot { iteration: 0, active: vec![mfa.initial()], pos: 0, memories: vec![MemoryCell::EMPTY; k] };
    observe(&snap);
    if n == 0 && accepts_silently[mfa.initial()] {
        return true;
    }
    let mut in_next = vec![false; states];
    let mut stalled = 0;
    while stalled <= states {
        let pos = snap.pos;
        let letter = w.get(pos).and_then(|&s| tables.symbol_column(s));
        let candidates: Vec<usize> = (0..k)
            .filter(|&m| {
                let c = snap.memories[m];
                lce.is_prefix(c.start, c.end, pos)
            })
            .collect();
        // A recall is applicable only if its memory is closed once the
        // instructions leading up to it have been applied.
        let recall_ok = |q: StateId, m: usize| {
            let col = tables.memory_column(m);
            match tables.instr(q, col) {
                None => false,
                Some(c) => match c.get(m) {
                    Instr::Open => false,
                    Instr::Close => true,
                    Instr::Keep => snap.memories[m].status == Status::Closed,
                },
            }
        };
        let mut chosen: Option<(StateId, usize, usize)> = None;
        let mut next: Vec<StateId> = Vec::new();
        for &q in &snap.active {
            for &m in &candidates {
                if recall_ok(q, m) {
                    let col = tables.memory_column(m);
                    let c = snap.memories[m];
                    chosen.get_or_insert((q, col, c.len()));
                    add_targets(tables.targets(q, col), &mut next, &mut in_next);
                }
            }
            if let Some(col) = letter {
                if !tables.targets(q, col).is_empty() {
                    chosen.get_or_insert((q, col, 1));
                    add_targets(tables.targets(q, col), &mut next, &mut in_next);
                }
            }
        }
        let Some((q, col, len)) = chosen else {
            return false;
        };
        stalled = if len == 0 { stalled + 1 } else { 0 };
        let instr = tables.instr(q, col).expect("chosen transition exists");
        for (m, cell) in snap.memories.iter_mut().enumerate() {
            match instr.get(m) {
                Instr::Keep => {}
                Instr::Open => *cell = MemoryCell { status: Status::Open, start: pos, end: pos },
                Instr::Close => cell.status = Status::Closed,
            }
            if cell.status == Status::Open {
                cell.end = pos + len;
            }
        }
        snap.pos = pos + len;
        for &p in &next {
            in_next[p] = false;
        }
        next.sort_unstable();
        snap.active = next;
        snap.iteration += 1;
        observe(&snap);
        if snap.pos == n && snap.active.iter().any(|&p| accepts_silently[p]) {
            return true;
        }
    }
    false
}

fn add_targets(targets: &[StateId], next: &mut Vec<StateId>, mark: &mut [bool]) {
    for &p in targets {
        if !mark[p] {
            mark[p] = true;
            next.push(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfa::{accepts, build_crude};
    use crate::symbols;
    use crate::syntax::Regex;

    fn matcher(p: &str) -> SyncMatcher {
        SyncMatcher::new(build_crude(&Regex::parse(p).unwrap()))
    }

    #[test]
    fn copy_language() {
        let m = matcher("$x{(a|b)+}c$x");
        assert!(m.is_match(&symbols("abcab")));
        assert!(!m.is_match(&symbols("abcaba")));
        assert!(!m.is_match(&symbols("abcb")));
    }

    #[test]
    fn empty_word_is_checked_before_the_first_step() {
        let m = matcher("a*");
        assert!(m.is_match(&[]));
        assert!(!matcher("a").is_match(&[]));
    }

    #[test]
    fn reopening_resets_the_memory() {
        let m = matcher("($x{a+}b)+c$x");
        for w in ["abaabcaa", "aabaabca", "abcab", "abaabcaba", "abcaa"] {
            let w = symbols(w);
            assert_eq!(m.is_match(&w), accepts(m.mfa(), &w).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn iterations_are_bounded() {
        let m = matcher("$x{(a|b)+}c$x");
        let w = symbols("abbcabb");
        let lce = LceIndex::new(&w);
        let mut iterations = 0;
        let hit = sync_match_traced(m.mfa(), m.tables(), &lce, &w, |s| iterations = s.iteration);
        assert!(hit);
        assert!(iterations <= (w.len() + 1) * (m.mfa().state_count() + 1));
    }
}
