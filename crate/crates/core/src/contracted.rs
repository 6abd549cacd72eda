//! Contracted transitions: a run of memory instructions and ε-moves followed
//! by one consuming transition, summarised by the net instruction per memory.
//!
//! Tables are built once per automaton with one breadth-first search per
//! state; the full set of contracted transitions is never materialised.

use std::collections::{HashMap, VecDeque};

use crate::mfa::{Consume, Label, MemId, Mfa, StateId, Status};
use crate::Symbol;

/// Net effect of an instruction sequence on one memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instr {
    Keep,
    Open,
    Close,
}

/// The last instruction per memory of a sequence of opens and closes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InstrSet(Box<[Instr]>);

impl InstrSet {
    pub fn empty(k: usize) -> Self {
        InstrSet(vec![Instr::Keep; k].into())
    }

    /// Reduce a label sequence; non-instruction labels are ignored.
    pub fn compress(k: usize, labels: &[Label]) -> Self {
        let mut set = Self::empty(k);
        for &l in labels {
            set.push(l);
        }
        set
    }

    pub fn push(&mut self, label: Label) {
        match label {
            Label::Open(m) => self.0[m] = Instr::Open,
            Label::Close(m) => self.0[m] = Instr::Close,
            _ => {}
        }
    }

    pub fn get(&self, m: MemId) -> Instr {
        self.0[m]
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&i| i == Instr::Keep)
    }

    /// Statuses after applying the set.
    pub fn apply(&self, statuses: &[Status]) -> Vec<Status> {
        statuses
            .iter()
            .zip(self.0.iter())
            .map(|(&s, &i)| match i {
                Instr::Keep => s,
                Instr::Open => Status::Open,
                Instr::Close => Status::Closed,
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Entry {
    targets: Vec<StateId>,
    instr: InstrSet,
}

#[derive(Debug, Clone)]
pub struct ContractedTables {
    k: usize,
    columns: Vec<Consume>,
    symbol_column: HashMap<Symbol, usize>,
    closure: Vec<Vec<StateId>>,
    entries: Vec<Option<Entry>>,
}

impl ContractedTables {
    pub fn new(mfa: &Mfa) -> Self {
        let k = mfa.memory_count();
        let alphabet = mfa.alphabet();
        let symbol_column: HashMap<Symbol, usize> = alphabet.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut columns: Vec<Consume> = alphabet.iter().map(|&s| Consume::Sym(s)).collect();
        columns.extend((0..k).map(Consume::Mem));
        let width = columns.len();
        let column_of = |c: Consume| match c {
            Consume::Sym(s) => symbol_column[&s],
            Consume::Mem(m) => alphabet.len() + m,
        };
        let n = mfa.state_count();
        let mut closure = Vec::with_capacity(n);
        let mut entries: Vec<Option<Entry>> = vec![None; n * width];
        let mut acc: Vec<Option<InstrSet>> = vec![None; n];
        for q in 0..n {
            // BFS tree over non-consuming edges; acc[p] is the reduced
            // instruction set along the tree path from q to p.
            acc[q] = Some(InstrSet::empty(k));
            let mut order = vec![q];
            let mut queue = VecDeque::from([q]);
            while let Some(p) = queue.pop_front() {
                for t in mfa.out(p) {
                    if !t.label.is_consuming() && acc[t.to].is_none() {
                        let mut set = acc[p].clone().unwrap();
                        set.push(t.label);
                        acc[t.to] = Some(set);
                        order.push(t.to);
                        queue.push_back(t.to);
                    }
                }
            }
            for &p in &order {
                for t in mfa.out(p) {
                    if let Some(c) = t.label.consume() {
                        let slot = &mut entries[q * width + column_of(c)];
                        match slot {
                            Some(e) => e.targets.push(t.to),
                            None => *slot = Some(Entry { targets: vec![t.to], instr: acc[p].clone().unwrap() }),
                        }
                    }
                }
            }
            for &p in &order {
                acc[p] = None;
            }
            let mut sorted = order;
            sorted.sort_unstable();
            closure.push(sorted);
        }
        for e in entries.iter_mut().flatten() {
            e.targets.sort_unstable();
            e.targets.dedup();
        }
        ContractedTables { k, columns, symbol_column, closure, entries }
    }

    pub fn memory_count(&self) -> usize {
        self.k
    }

    /// Every consuming label of the automaton: its terminals, then its memories.
    pub fn columns(&self) -> &[Consume] {
        &self.columns
    }

    pub fn column(&self, c: Consume) -> Option<usize> {
        match c {
            Consume::Sym(s) => self.symbol_column.get(&s).copied(),
            Consume::Mem(m) => (m < self.k).then(|| self.symbol_column.len() + m),
        }
    }

    pub fn symbol_column(&self, s: Symbol) -> Option<usize> {
        self.symbol_column.get(&s).copied()
    }

    pub fn memory_column(&self, m: MemId) -> usize {
        self.symbol_column.len() + m
    }

    fn entry(&self, q: StateId, col: usize) -> Option<&Entry> {
        self.entries[q * self.columns.len() + col].as_ref()
    }

    /// States reachable from `q` through non-consuming transitions,
    /// including `q`, ascending.
    pub fn eps_closure(&self, q: StateId) -> &[StateId] {
        &self.closure[q]
    }

    /// Targets of contracted transitions from `q` consuming column `col`.
    pub fn targets(&self, q: StateId, col: usize) -> &[StateId] {
        self.entry(q, col).map_or(&[], |e| &e.targets)
    }

    /// The instruction set of the first contracted transition found from `q`
    /// on column `col`.
    pub fn instr(&self, q: StateId, col: usize) -> Option<&InstrSet> {
        self.entry(q, col).map(|e| &e.instr)
    }

    pub fn delta_contr(&self, q: StateId, c: Consume) -> &[StateId] {
        self.column(c).map_or(&[], |col| self.targets(q, col))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfa::{build_crude, step, Configuration, MemoryCell};
    use crate::syntax::Regex;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn compress_keeps_last_instruction() {
        let c = InstrSet::compress(2, &[Label::Open(0), Label::Close(0), Label::Open(1), Label::Eps]);
        assert_eq!(c.instrs(), &[Instr::Close, Instr::Open]);
        assert_eq!(c.apply(&[Status::Open, Status::Closed]), vec![Status::Closed, Status::Open]);
        assert!(InstrSet::compress(2, &[Label::Eps]).is_empty());
    }

    /// Closure by repeated relaxation over a boolean matrix, independent of
    /// the BFS used by the tables.
    fn naive_delta(mfa: &Mfa, q: StateId, c: Consume) -> Vec<StateId> {
        let n = mfa.state_count();
        let mut reach = vec![false; n];
        reach[q] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for t in mfa.transitions() {
                if !t.label.is_consuming() && reach[t.from] && !reach[t.to] {
                    reach[t.to] = true;
                    changed = true;
                }
            }
        }
        let mut out: Vec<StateId> =
            mfa.transitions().iter().filter(|t| reach[t.from] && t.label.consume() == Some(c)).map(|t| t.to).collect();
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn tables_agree_with_matrix_closure() {
        for p in ["$x{(a|b)+}c$x", "(($x{a}|$y{b})$x$y)+", "($x{a*}b*)*$x", "a*($x{~}|b)$x"] {
            let mfa = build_crude(&Regex::parse(p).unwrap());
            let tables = ContractedTables::new(&mfa);
            for q in 0..mfa.state_count() {
                for &c in tables.columns() {
                    assert_eq!(tables.delta_contr(q, c), naive_delta(&mfa, q, c).as_slice(), "{p} q={q} {c:?}");
                }
            }
        }
    }

    proptest! {
        /// Executing a random instruction path step by step leaves the same
        /// statuses as applying its compressed form.
        #[test]
        fn compressed_paths_preserve_statuses(seed in any::<u64>()) {
            let mfa = build_crude(&Regex::parse("(($x{a}|$y{b+})($z{~}|~))+$x$y$z").unwrap());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let w: Vec<Symbol> = vec![];
            let mut c = Configuration::initial(&mfa);
            c.state = rng.gen_range(0..mfa.state_count());
            for m in c.memories.iter_mut() {
                if rng.gen_bool(0.5) {
                    *m = MemoryCell { status: Status::Open, start: 0, end: 0 };
                }
            }
            let before: Vec<Status> = c.memories.iter().map(|m| m.status).collect();
            let mut labels = Vec::new();
            for _ in 0..12 {
                let options: Vec<_> = mfa.out(c.state).filter(|t| !t.label.is_consuming()).copied().collect();
                if options.is_empty() {
                    break;
                }
                let t = options[rng.gen_range(0..options.len())];
                c = step(&w, &c, &t).unwrap();
                labels.push(t.label);
            }
            let after: Vec<Status> = c.memories.iter().map(|m| m.status).collect();
            prop_assert_eq!(InstrSet::compress(mfa.memory_count(), &labels).apply(&before), after);
        }
    }
}
