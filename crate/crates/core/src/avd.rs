//! Variable reachability, the active variable degree and the bounded-memory
//! automaton it enables.
//!
//! For a variable `x` and a state `q` of the canonical automaton:
//! * `x` *reaches* `q` if some path from the initial state to `q` opens `x`;
//! * `q` *needs* `x` if some path from `q` recalls `x` before opening it.
//!
//! `x` is *active* at `q` when both hold. The active variable degree is the
//! largest number of variables active at the entry of a definition body; that
//! many memories suffice to match the pattern.

use std::collections::{HashMap, VecDeque};

use crate::mfa::{build_crude, Label, Mfa, StateId, Tag, Transition};
use crate::syntax::{NodeId, Regex, VarId};
use crate::{Error, Result};

/// Reachability of memory instructions relative to every state.
#[derive(Debug, Clone)]
pub struct VarReachability {
    /// `reaches[x][q]`: some initial path to `q` opens `x`.
    reaches: Vec<Vec<bool>>,
    /// `needs[x][q]`: some path from `q` recalls `x` with no open of `x` before it.
    needs: Vec<Vec<bool>>,
}

impl VarReachability {
    /// Both relations for every memory of `mfa`, as products of the automaton
    /// with a two-state monitor per memory.
    pub fn new(mfa: &Mfa) -> Self {
        let n = mfa.state_count();
        let k = mfa.memory_count();
        let mut reaches = vec![vec![false; n]; k];
        let mut needs = vec![vec![false; n]; k];
        let mut incoming: Vec<Vec<&Transition>> = vec![Vec::new(); n];
        for t in mfa.transitions() {
            incoming[t.to].push(t);
        }
        for x in 0..k {
            // Forward product with "has opened x" flag.
            let mut seen = vec![[false; 2]; n];
            let mut queue = VecDeque::from([(mfa.initial(), 0usize)]);
            seen[mfa.initial()][0] = true;
            while let Some((q, bit)) = queue.pop_front() {
                for t in mfa.out(q) {
                    let b = if t.label == Label::Open(x) { 1 } else { bit };
                    if !seen[t.to][b] {
                        seen[t.to][b] = true;
                        queue.push_back((t.to, b));
                    }
                }
            }
            for q in 0..n {
                reaches[x][q] = seen[q][1];
            }
            // Backward search from recall edges, never crossing an open of x.
            let need = &mut needs[x];
            let mut queue: VecDeque<StateId> = VecDeque::new();
            for t in mfa.transitions() {
                if t.label == Label::Recall(x) && !need[t.from] {
                    need[t.from] = true;
                    queue.push_back(t.from);
                }
            }
            while let Some(q) = queue.pop_front() {
                for t in &incoming[q] {
                    if t.label != Label::Open(x) && !need[t.from] {
                        need[t.from] = true;
                        queue.push_back(t.from);
                    }
                }
            }
        }
        VarReachability { reaches, needs }
    }

    pub fn reaches(&self, x: VarId, q: StateId) -> bool {
        self.reaches[x][q]
    }

    pub fn needs(&self, q: StateId, x: VarId) -> bool {
        self.needs[x][q]
    }

    pub fn is_active(&self, x: VarId, q: StateId) -> bool {
        self.reaches(x, q) && self.needs(q, x)
    }

    /// Variables active at `q`, ascending.
    pub fn active(&self, q: StateId) -> Vec<VarId> {
        (0..self.reaches.len()).filter(|&x| self.is_active(x, q)).collect()
    }
}

/// Active variables at the entry of one definition's body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionActivity {
    pub definition: NodeId,
    pub var: VarId,
    pub body_entry: StateId,
    pub active: Vec<VarId>,
}

/// The canonical automaton of a pattern together with its reachability.
pub struct VarAnalysis {
    pub mfa: Mfa,
    pub reach: VarReachability,
    pub definitions: Vec<DefinitionActivity>,
}

impl VarAnalysis {
    pub fn new(regex: &Regex) -> Self {
        let mfa = build_crude(regex);
        let reach = VarReachability::new(&mfa);
        let definitions = regex
            .definitions()
            .map(|(definition, var, body)| {
                let body_entry = mfa.state_of(body, Tag::In).expect("every node has an entry state");
                DefinitionActivity { definition, var, body_entry, active: reach.active(body_entry) }
            })
            .collect();
        VarAnalysis { mfa, reach, definitions }
    }

    pub fn avd(&self) -> usize {
        self.definitions.iter().map(|d| d.active.len()).max().unwrap_or(0)
    }
}

/// Active variable degree of `regex`; 0 without definitions.
pub fn avd(regex: &Regex) -> usize {
    VarAnalysis::new(regex).avd()
}

pub const SAVD_VAR_CAP: usize = 12;

/// Strong active variable degree: like [`avd`], but only counting active
/// variables that can all have been opened on one common path. Brute force
/// over variable subsets, so limited to [`SAVD_VAR_CAP`] variables.
pub fn savd_bruteforce(regex: &Regex) -> Result<usize> {
    let k = regex.var_count();
    if k > SAVD_VAR_CAP {
        return Err(Error::TooManyVariables { count: k, cap: SAVD_VAR_CAP });
    }
    let analysis = VarAnalysis::new(regex);
    let mfa = &analysis.mfa;
    let n = mfa.state_count();
    let mut subsets: Vec<u32> = (0..1u32 << k).collect();
    subsets.sort_by_key(|y| std::cmp::Reverse(y.count_ones()));
    let mut best = 0;
    for y in subsets {
        if y.count_ones() as usize <= best {
            break;
        }
        // Product with a tracker of which members of y have been opened.
        let bits: Vec<VarId> = (0..k).filter(|&x| y >> x & 1 == 1).collect();
        let width = 1usize << bits.len();
        let full = width - 1;
        let mut seen = vec![false; n * width];
        let mut queue = VecDeque::from([(mfa.initial(), 0usize)]);
        seen[mfa.initial() * width] = true;
        while let Some((q, mask)) = queue.pop_front() {
            for t in mfa.out(q) {
                let mut m = mask;
                if let Label::Open(x) = t.label {
                    if let Some(i) = bits.iter().position(|&b| b == x) {
                        m |= 1 << i;
                    }
                }
                if !seen[t.to * width + m] {
                    seen[t.to * width + m] = true;
                    queue.push_back((t.to, m));
                }
            }
        }
        for d in &analysis.definitions {
            if seen[d.body_entry * width + full] {
                let count = d.active.iter().filter(|&&x| y >> x & 1 == 1).count();
                best = best.max(count);
            }
        }
    }
    Ok(best)
}

/// Automaton with `k` memories equivalent to `regex`, valid when
/// `avd(regex) <= k`.
pub struct ReuseAutomaton {
    pub mfa: Mfa,
    /// For each state: the canonical state it simulates and which variable
    /// each memory slot currently holds.
    pub layout: Vec<(StateId, Vec<Option<VarId>>)>,
}

/// Simulate the canonical automaton while recycling `k` memory slots:
/// a definition takes the lowest free slot, and a slot is freed as soon as
/// the simulated state no longer needs its variable. Only states reachable
/// from the start are generated.
pub fn build_reuse_mfa(regex: &Regex, k: usize) -> Result<ReuseAutomaton> {
    let analysis = VarAnalysis::new(regex);
    let degree = analysis.avd();
    if degree > k {
        return Err(Error::AvdTooLarge { avd: degree, k });
    }
    let canon = &analysis.mfa;
    let reach = &analysis.reach;
    let mut ids: HashMap<(StateId, Vec<Option<VarId>>), StateId> = HashMap::new();
    let mut layout: Vec<(StateId, Vec<Option<VarId>>)> = Vec::new();
    let mut transitions = Vec::new();
    let start = (canon.initial(), vec![None; k]);
    ids.insert(start.clone(), 0);
    layout.push(start);
    let mut next = 0;
    while next < layout.len() {
        let (q, slots) = layout[next].clone();
        let from = next;
        next += 1;
        for t in canon.out(q) {
            let mut l = slots.clone();
            let slot_of = |x: VarId| l.iter().position(|&s| s == Some(x));
            let label = match t.label {
                Label::Char(_) | Label::Eps => t.label,
                Label::Open(x) => match l.iter().position(Option::is_none) {
                    Some(i) => {
                        l[i] = Some(x);
                        Label::Open(i)
                    }
                    None => Label::Eps,
                },
                Label::Close(x) => slot_of(x).map_or(Label::Eps, Label::Close),
                Label::Recall(x) => slot_of(x).map_or(Label::Eps, Label::Recall),
            };
            for s in l.iter_mut() {
                if s.is_some_and(|y| !reach.needs(t.to, y)) {
                    *s = None;
                }
            }
            let key = (t.to, l);
            let to = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = layout.len();
                    ids.insert(key.clone(), id);
                    layout.push(key);
                    id
                }
            };
            transitions.push(Transition { from, label, to });
        }
    }
    let accepting: Vec<StateId> = (0..layout.len()).filter(|&i| canon.is_accepting(layout[i].0)).collect();
    let mfa = Mfa::new(layout.len(), 0, &accepting, k, transitions)?;
    Ok(ReuseAutomaton { mfa, layout })
}
