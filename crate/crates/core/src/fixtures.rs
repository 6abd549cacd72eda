//! Reference patterns and hand-built automata used in tests, benchmarks and
//! documentation.

use crate::mfa::{Label, Mfa, MfaBuilder, StateId};
use crate::Symbol;

/// Two alternatives with overlapping definitions; active variable degree 2.
pub const OVERLAPPING_DEFINITIONS: &str = "(($z{a+b}$x{b+})|($x{a+}c$x)+)$x(($y{a+b+}$y)|($u{c+}a$u))$z$x{a+}b$x";

/// Five variables active at once, but never more than three opened on a
/// single path.
pub const FIVE_ACTIVE_THREE_JOINT: &str = "(($x{a+}$y{b+})|$z{c+}|($x{b+}$u{c+}))$v{a+}$x$y$z$u$v";

/// Copy language with a separator.
pub const COPY: &str = "$x{(a|b)+}c$x";

/// Automaton with two memories for
/// `{ aⁿ bᵐ (aⁿ d)ᵏ bᵐ } ∪ { aⁿ dᵏ aⁿ }` with `n, m, k ≥ 1`.
///
/// Either `a⁺` goes to memory 0 and `b⁺` to memory 1, or `a⁺` goes to
/// memory 1 directly; then "recall 0, read d" repeats, and a final recall of
/// memory 1 accepts.
pub fn repeated_copy_mfa() -> Mfa {
    let mut b = MfaBuilder::new();
    let a = Label::Char('a'.into());
    let q: Vec<StateId> = (0..12).map(|_| b.state()).collect();
    b.edge(q[0], Label::Open(0), q[1]);
    b.edge(q[1], a, q[2]);
    b.edge(q[2], a, q[2]);
    b.edge(q[2], Label::Close(0), q[3]);
    b.edge(q[3], Label::Open(1), q[4]);
    b.edge(q[4], Label::Char('b'.into()), q[5]);
    b.edge(q[5], Label::Char('b'.into()), q[5]);
    b.edge(q[5], Label::Close(1), q[6]);
    b.edge(q[0], Label::Open(1), q[7]);
    b.edge(q[7], a, q[8]);
    b.edge(q[8], a, q[8]);
    b.edge(q[8], Label::Close(1), q[6]);
    b.edge(q[6], Label::Recall(0), q[9]);
    b.edge(q[9], Label::Char('d'.into()), q[10]);
    b.edge(q[10], Label::Eps, q[6]);
    b.edge(q[10], Label::Recall(1), q[11]);
    b.accept(q[11]);
    b.finish(q[0], 2).expect("well-formed")
}

pub fn address_token() -> Symbol {
    Symbol::token("[add]")
}

/// Terminals of [`address_mfa`]: the `[add]` marker, `;`, lowercase
/// letters, digits and `_` (standing for a blank).
pub fn address_alphabet() -> Vec<Symbol> {
    let mut out = vec![address_token(), Symbol::char(';'), Symbol::char('_')];
    out.extend(('a'..='z').map(Symbol::char));
    out.extend(('0'..='9').map(Symbol::char));
    out
}

/// Memory-deterministic automaton over a record list: it stores the first
/// address (`[add]` name street city country `;`) in memory 0 and accepts
/// when a later `[add]` entry repeats it exactly.
///
/// A street is `0+_a+` or `a+_0+`, a city `a*0+_a+` or `a+_a*0+`, where `a`
/// is any lowercase letter and `0` any digit.
pub fn address_mfa() -> Mfa {
    let mut b = MfaBuilder::new();
    let letters: Vec<Label> = ('a'..='z').map(|c| Label::Char(c.into())).collect();
    let digits: Vec<Label> = ('0'..='9').map(|c| Label::Char(c.into())).collect();
    let blank = Label::Char('_'.into());
    let semi = Label::Char(';'.into());
    let add = Label::Char(address_token());
    let plain: Vec<Label> = letters.iter().chain(&digits).copied().chain([blank]).collect();
    let many = |b: &mut MfaBuilder, from: StateId, labels: &[Label], to: StateId| {
        for &l in labels {
            b.edge(from, l, to);
        }
    };
    let [start, r, r2, n1, s1, s2, s3, s4, s5, s6, s7, c1, c2, c3, c4, c5, c6, c7, c8, t, co, t1, s, t2, done] =
        [(); 25].map(|_| b.state());
    many(&mut b, start, &plain, start);
    b.edge(start, add, r);
    b.edge(r, Label::Open(0), r2);
    many(&mut b, r2, &letters, n1);
    many(&mut b, n1, &letters, n1);
    // street: 0+_a+ | a+_0+
    many(&mut b, n1, &digits, s1);
    many(&mut b, s1, &digits, s1);
    b.edge(s1, blank, s2);
    many(&mut b, s2, &letters, s3);
    many(&mut b, s3, &letters, s3);
    b.edge(s3, Label::Eps, s7);
    many(&mut b, n1, &letters, s4);
    many(&mut b, s4, &letters, s4);
    b.edge(s4, blank, s5);
    many(&mut b, s5, &digits, s6);
    many(&mut b, s6, &digits, s6);
    b.edge(s6, Label::Eps, s7);
    // city: a*0+_a+ | a+_a*0+
    b.edge(s7, Label::Eps, c1);
    many(&mut b, c1, &letters, c1);
    many(&mut b, c1, &digits, c2);
    many(&mut b, c2, &digits, c2);
    b.edge(c2, blank, c3);
    many(&mut b, c3, &letters, c4);
    many(&mut b, c4, &letters, c4);
    b.edge(c4, Label::Eps, c8);
    many(&mut b, s7, &letters, c5);
    many(&mut b, c5, &letters, c5);
    b.edge(c5, blank, c6);
    many(&mut b, c6, &letters, c6);
    many(&mut b, c6, &digits, c7);
    many(&mut b, c7, &digits, c7);
    b.edge(c7, Label::Eps, c8);
    // country
    many(&mut b, c8, &letters, t);
    many(&mut b, t, &letters, t);
    b.edge(t, Label::Close(0), co);
    b.edge(co, semi, t1);
    many(&mut b, t1, &plain, t1);
    b.edge(t1, add, s);
    b.edge(s, Label::Recall(0), t2);
    b.edge(t2, semi, done);
    let all: Vec<Label> = plain.iter().copied().chain([semi, add]).collect();
    many(&mut b, done, &all, done);
    b.accept(done);
    b.finish(start, 1).expect("well-formed").with_memory_names(vec!["x".into()])
}
