//! Memory automata: finite automata whose transitions may also open, close
//! and recall a fixed number of memories.

mod build;
mod io;
mod run;

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::NodeId;
use crate::{Error, Result, Symbol};

pub use build::{build_crude, nfa_accepts_labels};
pub use io::{export_dot, export_json, import_json};
pub use run::{accepts, accepts_with_budget, step, Acceptance, Configuration, MemoryCell, Status, DEFAULT_BUDGET};

pub type StateId = usize;
pub type MemId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Char(Symbol),
    Eps,
    Recall(MemId),
    Open(MemId),
    Close(MemId),
}

/// The input-reading part of a label: a terminal or a memory recall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Consume {
    Sym(Symbol),
    Mem(MemId),
}

impl Label {
    pub fn consume(self) -> Option<Consume> {
        match self {
            Label::Char(s) => Some(Consume::Sym(s)),
            Label::Recall(m) => Some(Consume::Mem(m)),
            _ => None,
        }
    }

    pub fn is_consuming(self) -> bool {
        self.consume().is_some()
    }

    pub fn memory(self) -> Option<MemId> {
        match self {
            Label::Recall(m) | Label::Open(m) | Label::Close(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: StateId,
    pub label: Label,
    pub to: StateId,
}

/// Which syntax-tree node and which of its entry, middle or exit points a
/// state of a constructed automaton stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    In,
    Inter,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Origin {
    pub node: NodeId,
    pub tag: Tag,
}

#[derive(Debug, Clone)]
pub struct Mfa {
    states: usize,
    initial: StateId,
    accepting: Vec<bool>,
    memory_count: usize,
    transitions: Vec<Transition>,
    out: Vec<Vec<usize>>,
    origin: Option<Vec<Origin>>,
    memory_names: Option<Vec<String>>,
}

impl Mfa {
    /// Validate and index an automaton.
    pub fn new(
        states: usize,
        initial: StateId,
        accepting: &[StateId],
        memory_count: usize,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        if initial >= states {
            return Err(Error::Schema(format!("initial state {initial} out of range 0..{states}")));
        }
        let mut acc = vec![false; states];
        for &f in accepting {
            if f >= states {
                return Err(Error::Schema(format!("accepting state {f} out of range 0..{states}")));
            }
            acc[f] = true;
        }
        let mut out = vec![Vec::new(); states];
        for (i, t) in transitions.iter().enumerate() {
            if t.from >= states || t.to >= states {
                return Err(Error::Schema(format!("transition {i} leaves the state range 0..{states}")));
            }
            if let Some(m) = t.label.memory() {
                if m >= memory_count {
                    return Err(Error::Schema(format!(
                        "transition {i} uses memory {m} but only {memory_count} memories exist"
                    )));
                }
            }
            out[t.from].push(i);
        }
        Ok(Mfa { states, initial, accepting: acc, memory_count, transitions, out, origin: None, memory_names: None })
    }

    pub(crate) fn with_origin(mut self, origin: Vec<Origin>) -> Self {
        debug_assert_eq!(origin.len(), self.states);
        self.origin = Some(origin);
        self
    }

    pub fn with_memory_names(mut self, names: Vec<String>) -> Self {
        debug_assert_eq!(names.len(), self.memory_count);
        self.memory_names = Some(names);
        self
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> Vec<StateId> {
        (0..self.states).filter(|&q| self.accepting[q]).collect()
    }

    pub fn memory_count(&self) -> usize {
        self.memory_count
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Transitions leaving `q`, in insertion order.
    pub fn out(&self, q: StateId) -> impl Iterator<Item = &Transition> + '_ {
        self.out[q].iter().map(move |&i| &self.transitions[i])
    }

    pub fn out_degree(&self, q: StateId) -> usize {
        self.out[q].len()
    }

    /// Syntax-tree origin of `q`, for automata built from a pattern.
    pub fn origin(&self, q: StateId) -> Option<Origin> {
        self.origin.as_ref().map(|o| o[q])
    }

    /// State standing for the given node point, for automata built from a pattern.
    pub fn state_of(&self, node: NodeId, tag: Tag) -> Option<StateId> {
        self.origin.as_ref()?.iter().position(|o| o.node == node && o.tag == tag)
    }

    pub fn memory_name(&self, m: MemId) -> String {
        match &self.memory_names {
            Some(names) => names[m].clone(),
            None => m.to_string(),
        }
    }

    /// Terminals occurring on transitions, sorted.
    pub fn alphabet(&self) -> Vec<Symbol> {
        let set: BTreeSet<Symbol> = self
            .transitions
            .iter()
            .filter_map(|t| match t.label {
                Label::Char(s) => Some(s),
                _ => None,
            })
            .collect();
        set.into_iter().collect()
    }

    /// States reachable from the initial state along any transitions.
    pub fn graph_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = stack.pop() {
            for t in self.out(q) {
                if !seen[t.to] {
                    seen[t.to] = true;
                    stack.push(t.to);
                }
            }
        }
        seen
    }

    pub fn label_text(&self, label: Label) -> String {
        match label {
            Label::Char(s) => s.name(),
            Label::Eps => "ε".to_string(),
            Label::Recall(m) => self.memory_name(m),
            Label::Open(m) => format!("o{}", self.memory_name(m)),
            Label::Close(m) => format!("c{}", self.memory_name(m)),
        }
    }
}

impl fmt::Display for Consume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Consume::Sym(s) => write!(f, "{s}"),
            Consume::Mem(m) => write!(f, "${m}"),
        }
    }
}

/// Convenience constructor for hand-written automata.
#[derive(Debug, Default, Clone)]
pub struct MfaBuilder {
    states: usize,
    transitions: Vec<Transition>,
    accepting: Vec<StateId>,
}

impl MfaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&mut self) -> StateId {
        self.states += 1;
        self.states - 1
    }

    pub fn edge(&mut self, from: StateId, label: Label, to: StateId) {
        self.transitions.push(Transition { from, label, to });
    }

    pub fn accept(&mut self, q: StateId) {
        self.accepting.push(q);
    }

    pub fn finish(self, initial: StateId, memory_count: usize) -> Result<Mfa> {
        Mfa::new(self.states, initial, &self.accepting, memory_count, self.transitions)
    }
}
