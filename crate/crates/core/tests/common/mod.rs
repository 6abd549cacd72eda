//! Shared helpers for integration tests: random patterns and brute-force
//! reference answers.
#![allow(dead_code)]

use backref::syntax::{NodeId, Regex, RegexBuilder};
use backref::Symbol;
use rand::Rng;

/// Random pattern with at most `max_nodes` tree nodes over `letters`, using
/// variables from `vars` and never nesting a definition of a variable inside
/// itself.
pub fn random_regex(rng: &mut impl Rng, max_nodes: usize, vars: &[&str], letters: &[char]) -> Regex {
    let mut b = RegexBuilder::new();
    let root = grow(rng, &mut b, max_nodes, vars, &[], letters);
    let r = b.finish(root).expect("generator respects nesting");
    assert!(r.len() <= max_nodes);
    r
}

fn grow(
    rng: &mut impl Rng,
    b: &mut RegexBuilder,
    budget: usize,
    vars: &[&str],
    banned: &[&str],
    letters: &[char],
) -> NodeId {
    let free: Vec<&str> = vars.iter().copied().filter(|v| !banned.contains(v)).collect();
    if budget <= 2 || rng.gen_bool(0.15) {
        let roll = rng.gen_range(0..10);
        return if roll < 6 || (roll < 9 && free.is_empty()) {
            b.lit(letters[rng.gen_range(0..letters.len())])
        } else if roll < 9 {
            b.recall(free[rng.gen_range(0..free.len())])
        } else {
            b.eps()
        };
    }
    let roll = rng.gen_range(0..20);
    if roll < 7 {
        let left = rng.gen_range(1..budget - 1);
        let l = grow(rng, b, left, vars, banned, letters);
        let r = grow(rng, b, budget - 1 - left, vars, banned, letters);
        b.concat(l, r)
    } else if roll < 11 {
        let left = rng.gen_range(1..budget - 1);
        let l = grow(rng, b, left, vars, banned, letters);
        let r = grow(rng, b, budget - 1 - left, vars, banned, letters);
        b.alt(l, r)
    } else if roll < 14 || free.is_empty() {
        let c = grow(rng, b, budget - 1, vars, banned, letters);
        b.plus(c)
    } else {
        let x = free[rng.gen_range(0..free.len())];
        let mut inner: Vec<&str> = banned.to_vec();
        inner.push(x);
        let c = grow(rng, b, budget - 1, vars, &inner, letters);
        b.def(x, c)
    }
}

pub fn word(s: &str) -> Vec<Symbol> {
    backref::symbols(s)
}

/// Membership in `{ aⁿ bᵐ (aⁿ d)ᵏ bᵐ } ∪ { aⁿ dᵏ aⁿ }`, `n, m, k ≥ 1`,
/// by direct counting.
pub fn repeated_copy_member(w: &str) -> bool {
    let b = w.as_bytes();
    let run = |from: usize, c: u8| b[from..].iter().take_while(|&&x| x == c).count();
    let n = run(0, b'a');
    if n == 0 {
        return false;
    }
    // a^n d^k a^n
    let k = run(n, b'd');
    if k >= 1 && n + k + n == b.len() && run(n + k, b'a') == n {
        return true;
    }
    // a^n b^m (a^n d)^k b^m
    let m = run(n, b'b');
    if m == 0 {
        return false;
    }
    let mut i = n + m;
    let mut blocks = 0;
    while i + n < b.len() && run(i, b'a') == n && b[i + n] == b'd' {
        i += n + 1;
        blocks += 1;
    }
    blocks >= 1 && b.len() - i == m && run(i, b'b') == m
}

/// Literals are signed 1-based variable numbers.
pub fn satisfiable(vars: usize, clauses: &[[i32; 3]]) -> bool {
    (0..1u32 << vars).any(|bits| clauses.iter().all(|c| c.iter().any(|&l| literal_true(bits, l))))
}

/// Some assignment makes exactly one literal per clause true.
pub fn one_in_three_satisfiable(vars: usize, clauses: &[[i32; 3]]) -> bool {
    (0..1u32 << vars).any(|bits| clauses.iter().all(|c| c.iter().filter(|&&l| literal_true(bits, l)).count() == 1))
}

fn literal_true(bits: u32, l: i32) -> bool {
    let v = (l.unsigned_abs() - 1) as usize;
    (bits >> v & 1 == 1) == (l > 0)
}

/// Some `k` of the subsets cover `1..=universe`.
pub fn has_cover(universe: usize, subsets: &[Vec<usize>], k: usize) -> bool {
    let full: u32 = (1u32 << universe) - 1;
    let masks: Vec<u32> = subsets.iter().map(|s| s.iter().fold(0, |m, &e| m | 1 << (e - 1))).collect();
    fn go(masks: &[u32], k: usize, acc: u32, full: u32) -> bool {
        acc == full || (k > 0 && masks.iter().any(|&m| go(masks, k - 1, acc | m, full)))
    }
    go(&masks, k, 0, full)
}
