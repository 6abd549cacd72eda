//! Instance generators that turn combinatorial problems into patterns and
//! automata whose analysis answers the original problem.
//!
//! * [`set_cover_regex`]: the strong active variable degree exceeds the
//!   universe size iff the set-cover instance has a solution.
//! * [`one_in_three_mfa`]: a restricted automaton accepts a fixed probe word
//!   iff a positive 3-CNF has an assignment with exactly one true literal
//!   per clause.
//! * [`sat_sync_mfa`]: an automaton is synchronised iff a 3-CNF is
//!   unsatisfiable.

use std::collections::BTreeSet;

use crate::mfa::{Label, MemId, Mfa, MfaBuilder, StateId};
use crate::syntax::{Regex, RegexBuilder};
use crate::{Error, Result, Symbol};

/// A 3-CNF; literals are signed 1-based variable numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(Error::Instance(format!("literal {l} outside 1..={vars}")));
                }
            }
        }
        Ok(Cnf { vars, clauses })
    }

    /// DIMACS-like text: one clause of three signed integers per line, an
    /// optional trailing `0`, `c` comment lines and an optional
    /// `p cnf <vars> <clauses>` header.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vars = 0;
        let mut clauses = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                vars = fields
                    .get(1)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::Instance(format!("line {}: malformed header", n + 1)))?;
                continue;
            }
            let mut lits: Vec<i32> = line
                .split_whitespace()
                .map(|t| t.parse::<i32>().map_err(|_| Error::Instance(format!("line {}: bad literal `{t}`", n + 1))))
                .collect::<Result<_>>()?;
            if lits.last() == Some(&0) {
                lits.pop();
            }
            let clause: [i32; 3] = lits
                .as_slice()
                .try_into()
                .map_err(|_| Error::Instance(format!("line {}: expected three literals", n + 1)))?;
            vars = vars.max(clause.iter().map(|l| l.unsigned_abs() as usize).max().unwrap());
            clauses.push(clause);
        }
        Cnf::new(vars, clauses)
    }
}

/// Universe `1..=universe`, the candidate subsets and the cover size bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCover {
    pub universe: usize,
    pub subsets: Vec<Vec<usize>>,
    pub k: usize,
}

impl SetCover {
    pub fn new(universe: usize, subsets: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        for s in &subsets {
            if let Some(&e) = s.iter().find(|&&e| e == 0 || e > universe) {
                return Err(Error::Instance(format!("element {e} outside 1..={universe}")));
            }
        }
        Ok(SetCover { universe, subsets, k })
    }

    /// First line: the universe size; every further non-blank line: one
    /// subset as whitespace-separated elements.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let universe = lines
            .next()
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| Error::Instance("first line must be the universe size".into()))?;
        let subsets = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::Instance(format!("bad element `{t}`"))))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<_>>()?;
        SetCover::new(universe, subsets, k)
    }
}

/// `$z{~} γ b $x1 … $xm $z` where `γ` is `k` copies of the alternation of
/// the subsets, each subset written as empty definitions of its elements.
/// Its strong active variable degree is `universe + 1` iff some `k` subsets
/// cover the universe, and at most `universe` otherwise.
pub fn set_cover_regex(inst: &SetCover) -> Result<Regex> {
    let mut b = RegexBuilder::new();
    let element = |e: usize| format!("x{e}");
    let mut parts = Vec::new();
    let eps = b.eps();
    parts.push(b.def("z", eps));
    for _ in 0..inst.k {
        let choices: Vec<_> = inst
            .subsets
            .iter()
            .map(|s| {
                let defs: Vec<_> = s
                    .iter()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .map(|&e| {
                        let eps = b.eps();
                        b.def(&element(e), eps)
                    })
                    .collect();
                b.concat_all(&defs)
            })
            .collect();
        parts.push(b.alt_all(&choices));
    }
    parts.push(b.lit('b'));
    for e in 1..=inst.universe {
        parts.push(b.recall(&element(e)));
    }
    parts.push(b.recall("z"));
    let root = b.concat_all(&parts);
    b.finish(root)
}

fn positive_memory(var: usize) -> MemId {
    2 * (var - 1)
}

fn literal_memory(l: i32) -> MemId {
    let base = positive_memory(l.unsigned_abs() as usize);
    if l > 0 {
        base
    } else {
        base + 1
    }
}

fn literal_names(vars: usize) -> Vec<String> {
    (1..=vars).flat_map(|i| [format!("x{i}"), format!("nx{i}")]).collect()
}

/// Automaton with `2n` memories and no ε-transitions over `{a, b}`, and the
/// probe word `(aab)ⁿ(ab)ᵐ`. Variable gadget `i` reads `aab`, storing the
/// middle `a` in either the memory of `xᵢ` or that of `¬xᵢ`; clause gadget
/// `j` recalls its three literal memories and reads `b`, which spells `ab`
/// iff exactly one of its literals is true. Only positive literals are
/// allowed.
pub fn one_in_three_mfa(cnf: &Cnf) -> Result<(Mfa, Vec<Symbol>)> {
    if cnf.clauses.iter().flatten().any(|&l| l < 0) {
        return Err(Error::Instance("one-in-three reduction needs positive literals".into()));
    }
    let (a, bsym) = (Label::Char('a'.into()), Label::Char('b'.into()));
    let mut b = MfaBuilder::new();
    let start = b.state();
    let mut p = start;
    for i in 1..=cnf.vars {
        let join = b.state();
        for m in [positive_memory(i), positive_memory(i) + 1] {
            let s: Vec<StateId> = (0..4).map(|_| b.state()).collect();
            b.edge(p, a, s[0]);
            b.edge(s[0], Label::Open(m), s[1]);
            b.edge(s[1], a, s[2]);
            b.edge(s[2], Label::Close(m), s[3]);
            b.edge(s[3], bsym, join);
        }
        p = join;
    }
    for clause in &cnf.clauses {
        for &l in clause {
            let next = b.state();
            b.edge(p, Label::Recall(literal_memory(l)), next);
            p = next;
        }
        let next = b.state();
        b.edge(p, bsym, next);
        p = next;
    }
    b.accept(p);
    let mfa = b.finish(start, 2 * cnf.vars)?.with_memory_names(literal_names(cnf.vars));
    let mut probe = crate::symbols(&"aab".repeat(cnf.vars));
    probe.extend(crate::symbols(&"ab".repeat(cnf.clauses.len())));
    Ok((mfa, probe))
}

/// Check the restrictions the one-in-three automata satisfy: binary
/// alphabet `{a, b}`, no ε-transitions, every state with a transition on a
/// label other than `a` has transitions on that label only, and a state
/// mixing `a` with other labels has exactly two `a`-successors.
pub fn check_restricted_shape(mfa: &Mfa) -> std::result::Result<(), String> {
    let a = Label::Char('a'.into());
    let allowed = [Symbol::char('a'), Symbol::char('b')];
    if let Some(s) = mfa.alphabet().into_iter().find(|s| !allowed.contains(s)) {
        return Err(format!("terminal `{s}` outside {{a, b}}"));
    }
    for q in 0..mfa.state_count() {
        let labels: BTreeSet<Label> = mfa.out(q).map(|t| t.label).collect();
        if labels.contains(&Label::Eps) {
            return Err(format!("state {q} has an ε-transition"));
        }
        if labels.iter().any(|&l| l != a) && labels.len() > 1 {
            return Err(format!("state {q} mixes labels {labels:?}"));
        }
        if labels.contains(&a) && labels.len() > 1 {
            let succ: BTreeSet<StateId> = mfa.out(q).filter(|t| t.label == a).map(|t| t.to).collect();
            if succ.len() != 2 {
                return Err(format!("state {q} is not a-restricted but has {} a-successors", succ.len()));
            }
        }
    }
    Ok(())
}

/// Automaton with `2n + m` memories that is synchronised iff `cnf` is
/// unsatisfiable.
///
/// Variable gadget `i` deterministically reads `ab` (true: `xᵢ` stores `a`,
/// `¬xᵢ` stores `b`) or `ba` (false). Clause gadget `j` stores into `zⱼ`
/// the recalled content of one of its literals. From the end of the clause
/// gadgets, one branch recalls `z₁ … zₘ`, the other reads `aᵐ`; both are
/// possible on the same input exactly when every `zⱼ` holds `a`, i.e. the
/// chosen literals satisfy the formula. The branches then read `b` while
/// one of them rewrites `z₁`, so the two computations disagree.
pub fn sat_sync_mfa(cnf: &Cnf) -> Result<Mfa> {
    if cnf.clauses.is_empty() {
        return Err(Error::Instance("the synchronisation reduction needs at least one clause".into()));
    }
    let (a, bsym) = (Label::Char('a'.into()), Label::Char('b'.into()));
    let n = cnf.vars;
    let clause_memory = |j: usize| 2 * n + j;
    let mut b = MfaBuilder::new();
    let start = b.state();
    let mut p = start;
    for i in 1..=n {
        let (pos, neg) = (positive_memory(i), positive_memory(i) + 1);
        let opened = b.state();
        let join = b.state();
        b.edge(p, Label::Open(pos), opened);
        for (first, second) in [(a, bsym), (bsym, a)] {
            let s: Vec<StateId> = (0..4).map(|_| b.state()).collect();
            b.edge(opened, first, s[0]);
            b.edge(s[0], Label::Close(pos), s[1]);
            b.edge(s[1], Label::Open(neg), s[2]);
            b.edge(s[2], second, s[3]);
            b.edge(s[3], Label::Close(neg), join);
        }
        p = join;
    }
    for (j, clause) in cnf.clauses.iter().enumerate() {
        let (opened, recalled, next) = (b.state(), b.state(), b.state());
        b.edge(p, Label::Open(clause_memory(j)), opened);
        let literals: BTreeSet<MemId> = clause.iter().map(|&l| literal_memory(l)).collect();
        for m in literals {
            b.edge(opened, Label::Recall(m), recalled);
        }
        b.edge(recalled, Label::Close(clause_memory(j)), next);
        p = next;
    }
    let t = p;
    let accept = b.state();
    let mut u1 = t;
    for j in 0..cnf.clauses.len() {
        let next = b.state();
        b.edge(u1, Label::Recall(clause_memory(j)), next);
        u1 = next;
    }
    let mut u2 = t;
    for _ in 0..cnf.clauses.len() {
        let next = b.state();
        b.edge(u2, a, next);
        u2 = next;
    }
    let (opened, read) = (b.state(), b.state());
    b.edge(u1, Label::Open(clause_memory(0)), opened);
    b.edge(opened, bsym, read);
    b.edge(read, Label::Close(clause_memory(0)), accept);
    b.edge(u2, bsym, accept);
    b.accept(accept);
    let mut names = literal_names(n);
    names.extend((1..=cnf.clauses.len()).map(|j| format!("z{j}")));
    Ok(b.finish(start, 2 * n + cnf.clauses.len())?.with_memory_names(names))
}

/// Input length that traverses every gadget of [`sat_sync_mfa`] plus the
/// final `b`.
pub fn sat_sync_bound(cnf: &Cnf) -> usize {
    2 * cnf.vars + 2 * cnf.clauses.len() + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avd::savd_bruteforce;
    use crate::mdet::{bounded_sync_check, is_memory_deterministic};
    use crate::mfa::accepts;

    #[test]
    fn cnf_parsing() {
        let cnf = Cnf::parse("c comment\np cnf 4 2\n1 -2 3 0\n-1 2 4\n").unwrap();
        assert_eq!(cnf.vars, 4);
        assert_eq!(cnf.clauses, vec![[1, -2, 3], [-1, 2, 4]]);
        assert!(Cnf::parse("1 2\n").is_err());
        assert!(Cnf::parse("1 x 2\n").is_err());
    }

    #[test]
    fn set_cover_parsing_and_pattern() {
        let inst = SetCover::parse("2\n1\n2\n", 2).unwrap();
        assert_eq!(inst.subsets, vec![vec![1], vec![2]]);
        let r = set_cover_regex(&inst).unwrap();
        assert_eq!(r.to_string(), "$z{~}($x1{~}|$x2{~})($x1{~}|$x2{~})b$x1$x2$z");
        assert!(SetCover::parse("2\n3\n", 1).is_err());
    }

    #[test]
    fn set_cover_threshold() {
        let cases = [(2, vec![vec![1], vec![2]], 2, true), (2, vec![vec![1]], 1, false), (1, vec![vec![1]], 1, true)];
        for (universe, subsets, k, cover) in cases {
            let inst = SetCover::new(universe, subsets, k).unwrap();
            let savd = savd_bruteforce(&set_cover_regex(&inst).unwrap()).unwrap();
            assert_eq!(savd > universe, cover, "{inst:?}");
        }
    }

    #[test]
    fn one_in_three_probe() {
        let yes = Cnf::new(3, vec![[1, 2, 3]]).unwrap();
        let (m, probe) = one_in_three_mfa(&yes).unwrap();
        assert_eq!(m.memory_count(), 6);
        assert!(check_restricted_shape(&m).is_ok());
        assert!(accepts(&m, &probe).unwrap());
        let no = Cnf::new(1, vec![[1, 1, 1]]).unwrap();
        let (m, probe) = one_in_three_mfa(&no).unwrap();
        assert!(!accepts(&m, &probe).unwrap());
        let empty = Cnf::new(1, vec![]).unwrap();
        let (m, probe) = one_in_three_mfa(&empty).unwrap();
        assert!(accepts(&m, &probe).unwrap());
        assert!(one_in_three_mfa(&Cnf::new(1, vec![[1, -1, 1]]).unwrap()).is_err());
    }

    #[test]
    fn sat_sync_examples() {
        let sat = Cnf::new(1, vec![[1, 1, 1]]).unwrap();
        let m = sat_sync_mfa(&sat).unwrap();
        assert!(!is_memory_deterministic(&m));
        assert!(bounded_sync_check(&m, sat_sync_bound(&sat)).unwrap().is_some());
        let unsat = Cnf::new(1, vec![[1, 1, 1], [-1, -1, -1]]).unwrap();
        let m = sat_sync_mfa(&unsat).unwrap();
        assert!(bounded_sync_check(&m, sat_sync_bound(&unsat)).unwrap().is_none());
    }
}
