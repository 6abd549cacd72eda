use std::collections::HashSet;

use super::{Label, Mfa, Origin, StateId, Tag, Transition};
use crate::syntax::{Node, Regex};

/// Thompson-style construction with memory instructions.
///
/// Every node gets an entry and an exit state, concatenations also a middle
/// state. An edge's label is decided by its source: the entry of a leaf
/// carries the leaf's letter, ε or recall; the entry of a definition of `x`
/// opens `x`, the exit of a definition closes `x`; all other edges are ε.
/// The root's entry is initial and its exit the only accepting state.
pub fn build_crude(regex: &Regex) -> Mfa {
    let n = regex.len();
    let mut origin = Vec::with_capacity(3 * n);
    let mut entry = vec![0; n];
    let mut exit = vec![0; n];
    let mut inter = vec![usize::MAX; n];
    let mut alloc = |node, tag| {
        origin.push(Origin { node, tag });
        origin.len() - 1
    };
    for (id, node) in regex.nodes().iter().enumerate() {
        entry[id] = alloc(id, Tag::In);
        if matches!(node, Node::Concat(..)) {
            inter[id] = alloc(id, Tag::Inter);
        }
        exit[id] = alloc(id, Tag::Out);
    }
    let mut source_label = vec![Label::Eps; origin.len()];
    let mut edges: Vec<(StateId, StateId)> = Vec::new();
    for (id, node) in regex.nodes().iter().enumerate() {
        let (t_in, t_out) = (entry[id], exit[id]);
        match *node {
            Node::Concat(r, s) => {
                edges.extend([(t_in, entry[r]), (exit[r], inter[id]), (inter[id], entry[s]), (exit[s], t_out)]);
            }
            Node::Alt(r, s) => {
                edges.extend([(t_in, entry[r]), (t_in, entry[s]), (exit[r], t_out), (exit[s], t_out)]);
            }
            Node::Plus(r) => edges.extend([(t_in, entry[r]), (exit[r], t_out), (t_out, t_in)]),
            Node::Def(x, r) => {
                source_label[t_in] = Label::Open(x);
                source_label[t_out] = Label::Close(x);
                edges.extend([(t_in, entry[r]), (exit[r], t_out)]);
            }
            Node::Literal(s) => {
                source_label[t_in] = Label::Char(s);
                edges.push((t_in, t_out));
            }
            Node::Recall(x) => {
                source_label[t_in] = Label::Recall(x);
                edges.push((t_in, t_out));
            }
            Node::Epsilon => edges.push((t_in, t_out)),
        }
    }
    let transitions = edges.into_iter().map(|(from, to)| Transition { from, label: source_label[from], to }).collect();
    let root = regex.root();
    Mfa::new(origin.len(), entry[root], &[exit[root]], regex.var_count(), transitions)
        .expect("construction stays within its own state range")
        .with_origin(origin)
        .with_memory_names(regex.var_names().to_vec())
}

/// Whether the automaton, read as a classical NFA over its labels (memory
/// instructions and recalls as plain letters, only `Eps` silent), accepts
/// the label word `word`.
pub fn nfa_accepts_labels(mfa: &Mfa, word: &[Label]) -> bool {
    let closure = |set: &mut Vec<StateId>| {
        let mut seen: HashSet<StateId> = set.iter().copied().collect();
        let mut i = 0;
        while i < set.len() {
            let q = set[i];
            for t in mfa.out(q) {
                if t.label == Label::Eps && seen.insert(t.to) {
                    set.push(t.to);
                }
            }
            i += 1;
        }
    };
    let mut current = vec![mfa.initial()];
    closure(&mut current);
    for &letter in word {
        let mut next: Vec<StateId> = Vec::new();
        for &q in &current {
            for t in mfa.out(q) {
                if t.label == letter && !next.contains(&t.to) {
                    next.push(t.to);
                }
            }
        }
        closure(&mut next);
        current = next;
    }
    current.iter().any(|&q| mfa.is_accepting(q))
}
