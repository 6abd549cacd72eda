//! Memory determinism: a sufficient, polynomially decidable condition under
//! which the synchronised matcher is exact.
//!
//! Two states are *memory-synchronised* when every pair of contracted
//! transitions they share a consuming label on carries the same instruction
//! set, and a state that can recall a memory leaves the other no different
//! consuming option. An automaton is memory-deterministic when no two states
//! that fail this test can be reached from a common state by the same
//! sequence of consuming labels.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::contracted::ContractedTables;
use crate::mfa::{build_crude, step, Configuration, Consume, Label, Mfa, StateId};
use crate::syntax::Regex;
use crate::{Error, Result, Symbol};

const NONE: u8 = 1;
const OPENED: u8 = 2;
const CLOSED: u8 = 4;

/// The memory-synchronised relation as a symmetric boolean matrix.
#[derive(Debug, Clone)]
pub struct MemSync {
    n: usize,
    bits: Vec<bool>,
}

impl MemSync {
    pub fn is_sync(&self, p: StateId, q: StateId) -> bool {
        self.bits[p * self.n + q]
    }
}

pub fn compute_mem_sync(mfa: &Mfa, tables: &ContractedTables) -> MemSync {
    let n = mfa.state_count();
    let k = mfa.memory_count();
    let width = tables.columns().len();
    // last[(q * k + y) * n + p]: which "last instruction on y" values a
    // non-consuming path from q to p can end with.
    let mut last = vec![0u8; n * k * n];
    for q in 0..n {
        for y in 0..k {
            let base = (q * k + y) * n;
            let mut queue = VecDeque::from([(q, NONE)]);
            last[base + q] |= NONE;
            while let Some((p, s)) = queue.pop_front() {
                for t in mfa.out(p) {
                    let next = match t.label {
                        Label::Open(m) if m == y => OPENED,
                        Label::Close(m) if m == y => CLOSED,
                        l if l.is_consuming() => continue,
                        _ => s,
                    };
                    if last[base + t.to] & next == 0 {
                        last[base + t.to] |= next;
                        queue.push_back((t.to, next));
                    }
                }
            }
        }
    }
    // summary[(q * width + col) * k + y]: the same, restricted to paths that
    // end in a state with a transition on column col.
    let mut summary = vec![0u8; n * width * k];
    let mut columns_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for q in 0..n {
        for &p in tables.eps_closure(q) {
            for t in mfa.out(p) {
                let Some(c) = t.label.consume() else { continue };
                let col = tables.column(c).expect("every consuming label has a column");
                for y in 0..k {
                    summary[(q * width + col) * k + y] |= last[(q * k + y) * n + p];
                }
            }
        }
        columns_of[q] = (0..width).filter(|&col| !tables.targets(q, col).is_empty()).collect();
    }
    let recalls: Vec<Vec<usize>> = (0..n)
        .map(|q| {
            columns_of[q].iter().copied().filter(|&col| matches!(tables.columns()[col], Consume::Mem(_))).collect()
        })
        .collect();
    // Whenever p can recall memory col, q may consume nothing else.
    let recall_exclusive =
        |p: StateId, q: StateId| recalls[p].iter().all(|&col| columns_of[q].iter().all(|&other| other == col));
    let same_instructions = |p: StateId, q: StateId| {
        columns_of[p].iter().all(|&col| {
            (0..k).all(|y| {
                let a = summary[(p * width + col) * k + y];
                let b = summary[(q * width + col) * k + y];
                if a == 0 || b == 0 {
                    return true;
                }
                let open_in = |m: u8| m & OPENED != 0;
                let open_out = |m: u8| m & (NONE | CLOSED) != 0;
                let close_in = |m: u8| m & CLOSED != 0;
                let close_out = |m: u8| m & (NONE | OPENED) != 0;
                !((open_in(a) && open_out(b))
                    || (open_out(a) && open_in(b))
                    || (close_in(a) && close_out(b))
                    || (close_out(a) && close_in(b)))
            })
        })
    };
    let mut bits = vec![false; n * n];
    for p in 0..n {
        for q in p..n {
            let ok = same_instructions(p, q) && recall_exclusive(p, q) && recall_exclusive(q, p);
            bits[p * n + q] = ok;
            bits[q * n + p] = ok;
        }
    }
    MemSync { n, bits }
}

/// Two states reached from `origin` by the same consuming labels that are
/// not memory-synchronised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchWitness {
    pub origin: StateId,
    pub first: StateId,
    pub second: StateId,
    pub labels: Vec<Consume>,
}

/// Search the product of the ε-free contracted automaton with itself from
/// every diagonal pair `(q, q)` with `q` reachable.
pub fn non_sync_branch(mfa: &Mfa, tables: &ContractedTables, sync: &MemSync) -> Option<BranchWitness> {
    let n = mfa.state_count();
    let width = tables.columns().len();
    let reachable = mfa.graph_reachable();
    // parent[pair] = (previous pair, column, origin)
    let mut parent: Vec<Option<(usize, usize, StateId)>> = vec![None; n * n];
    let mut queue = VecDeque::new();
    for q in (0..n).filter(|&q| reachable[q]) {
        let id = q * n + q;
        parent[id] = Some((id, usize::MAX, q));
        queue.push_back(id);
    }
    while let Some(id) = queue.pop_front() {
        let (p1, p2) = (id / n, id % n);
        let origin = parent[id].unwrap().2;
        if !sync.is_sync(p1, p2) {
            let mut labels = Vec::new();
            let mut cur = id;
            while let Some((prev, col, _)) = parent[cur] {
                if col == usize::MAX {
                    break;
                }
                labels.push(tables.columns()[col]);
                cur = prev;
            }
            labels.reverse();
            return Some(BranchWitness { origin, first: p1, second: p2, labels });
        }
        for col in 0..width {
            for &s1 in tables.targets(p1, col) {
                for &s2 in tables.targets(p2, col) {
                    let next = s1 * n + s2;
                    if parent[next].is_none() {
                        parent[next] = Some((id, col, origin));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct MdetReport {
    pub deterministic: bool,
    pub witness: Option<BranchWitness>,
}

pub fn analyse(mfa: &Mfa) -> MdetReport {
    let tables = ContractedTables::new(mfa);
    let sync = compute_mem_sync(mfa, &tables);
    let witness = non_sync_branch(mfa, &tables, &sync);
    MdetReport { deterministic: witness.is_none(), witness }
}

pub fn is_memory_deterministic(mfa: &Mfa) -> bool {
    analyse(mfa).deterministic
}

/// Memory determinism of the canonical automaton of `regex`.
pub fn is_mdet_regex(regex: &Regex) -> bool {
    is_memory_deterministic(&build_crude(regex))
}

/// Two computations on the same input that disagree on more than their
/// state after the same number of contracted steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncViolation {
    pub word: Vec<Symbol>,
    pub step: usize,
    pub first: Configuration,
    pub second: Configuration,
}

pub const CHECK_BUDGET: usize = 20_000_000;

/// Configurations after exactly `i` contracted steps on `w`, for
/// `i = 0, 1, ...`, stopping when no computation continues or the sequence
/// of layers starts repeating.
pub fn contracted_layers(mfa: &Mfa, w: &[Symbol], budget: &mut usize) -> Result<Vec<Vec<Configuration>>> {
    let mut layers = vec![vec![Configuration::initial(mfa)]];
    let mut seen: HashSet<Vec<Configuration>> = HashSet::new();
    seen.insert(layers[0].clone());
    loop {
        let mut next: BTreeSet<Configuration> = BTreeSet::new();
        for c in layers.last().unwrap() {
            contracted_successors(mfa, w, c, &mut next, budget)?;
        }
        if next.is_empty() {
            return Ok(layers);
        }
        let next: Vec<Configuration> = next.into_iter().collect();
        if !seen.insert(next.clone()) {
            return Ok(layers);
        }
        layers.push(next);
    }
}

fn contracted_successors(
    mfa: &Mfa,
    w: &[Symbol],
    c: &Configuration,
    out: &mut BTreeSet<Configuration>,
    budget: &mut usize,
) -> Result<()> {
    let mut seen: HashSet<Configuration> = HashSet::from([c.clone()]);
    let mut queue = VecDeque::from([c.clone()]);
    while let Some(cur) = queue.pop_front() {
        if *budget == 0 {
            return Err(Error::Budget { what: "bounded check configuration", limit: CHECK_BUDGET });
        }
        *budget -= 1;
        for t in mfa.out(cur.state) {
            let Some(next) = step(w, &cur, t) else { continue };
            if t.label.is_consuming() {
                out.insert(next);
            } else if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(())
}

fn agree(w: &[Symbol], a: &Configuration, b: &Configuration) -> bool {
    a.pos == b.pos
        && a.memories
            .iter()
            .zip(&b.memories)
            .enumerate()
            .all(|(m, (x, y))| x.status == y.status && a.content(m, w) == b.content(m, w))
}

/// Exhaustively compare contracted computations on every input of length
/// `maxlen` over the automaton's alphabet (which covers all shorter inputs,
/// since a disagreement persists when the input is extended).
pub fn bounded_sync_check(mfa: &Mfa, maxlen: usize) -> Result<Option<SyncViolation>> {
    let alphabet = mfa.alphabet();
    let len = if alphabet.is_empty() { 0 } else { maxlen };
    let mut budget = CHECK_BUDGET;
    let mut digits = vec![0usize; len];
    loop {
        let w: Vec<Symbol> = digits.iter().map(|&d| alphabet[d]).collect();
        for (i, layer) in contracted_layers(mfa, &w, &mut budget)?.into_iter().enumerate() {
            if let Some(other) = layer.iter().skip(1).find(|c| !agree(&w, &layer[0], c)) {
                return Ok(Some(SyncViolation {
                    word: w.clone(),
                    step: i,
                    first: layer[0].clone(),
                    second: other.clone(),
                }));
            }
        }
        // Odometer over alphabet^len.
        let mut i = len;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < alphabet.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols;

    fn canon(p: &str) -> Mfa {
        build_crude(&Regex::parse(p).unwrap())
    }

    #[test]
    fn classical_patterns_are_deterministic() {
        for p in ["(a|b)*abb", "a+|a+b", "(ab|a)*"] {
            assert!(is_memory_deterministic(&canon(p)), "{p}");
        }
    }

    #[test]
    fn copy_language_is_deterministic() {
        assert!(is_memory_deterministic(&canon("$x{(a|b)+}c$x")));
        assert!(is_memory_deterministic(&canon("($x{a+}b)+c$x")));
    }

    #[test]
    fn recall_competing_with_a_letter_is_not() {
        let m = canon("($x{a+}b)+$x");
        let report = analyse(&m);
        assert!(!report.deterministic);
        assert!(bounded_sync_check(&m, 5).unwrap().is_some());
    }

    #[test]
    fn ambiguous_definition_boundary_is_not() {
        // After reading "aa" one computation has stored "a", another "aa".
        let m = canon("$x{a+}a*b$x");
        assert!(!is_memory_deterministic(&m));
        let v = bounded_sync_check(&m, 3).unwrap().expect("disagreement on a short word");
        assert!(v.step >= 1);
        assert_ne!(v.first.memories, v.second.memories);
    }

    #[test]
    fn relation_is_symmetric() {
        let m = canon("(($z{a+b}$x{b+})|($x{a+}c$x)+)$x(($y{a+b+}$y)|($u{c+}a$u))$z$x{a+}b$x");
        let t = ContractedTables::new(&m);
        let s = compute_mem_sync(&m, &t);
        for p in 0..m.state_count() {
            for q in 0..m.state_count() {
                assert_eq!(s.is_sync(p, q), s.is_sync(q, p));
            }
        }
    }

    #[test]
    fn layers_follow_contracted_steps() {
        let m = canon("$x{a}b$x");
        let mut budget = CHECK_BUDGET;
        let layers = contracted_layers(&m, &symbols("aba"), &mut budget).unwrap();
        let positions: Vec<Vec<usize>> = layers.iter().map(|l| l.iter().map(|c| c.pos).collect()).collect();
        assert_eq!(positions, vec![vec![0], vec![1], vec![2], vec![3]]);
    }
}
