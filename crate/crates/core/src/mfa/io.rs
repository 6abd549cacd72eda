use serde::{Deserialize, Serialize};

use super::{Label, Mfa, Transition};
use crate::{Error, Result, Symbol};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct MfaDoc {
    memory_count: usize,
    initial: usize,
    accepting: Vec<usize>,
    states: usize,
    transitions: Vec<TransitionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    from: usize,
    label: LabelDoc,
    to: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelDoc {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    sym: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mem: Option<usize>,
}

impl From<Label> for LabelDoc {
    fn from(label: Label) -> Self {
        let (kind, sym, mem) = match label {
            Label::Char(s) => ("char", Some(s.name()), None),
            Label::Eps => ("eps", None, None),
            Label::Recall(m) => ("recall", None, Some(m)),
            Label::Open(m) => ("open", None, Some(m)),
            Label::Close(m) => ("close", None, Some(m)),
        };
        LabelDoc { kind: kind.to_string(), sym, mem }
    }
}

impl LabelDoc {
    fn to_label(&self, i: usize) -> Result<Label> {
        let mem = || self.mem.ok_or_else(|| Error::Schema(format!("transition {i}: `{}` needs `mem`", self.kind)));
        Ok(match self.kind.as_str() {
            "char" => match self.sym.as_deref() {
                Some(s) if !s.is_empty() => Label::Char(Symbol::token(s)),
                _ => return Err(Error::Schema(format!("transition {i}: `char` needs a non-empty `sym`"))),
            },
            "eps" => Label::Eps,
            "recall" => Label::Recall(mem()?),
            "open" => Label::Open(mem()?),
            "close" => Label::Close(mem()?),
            other => return Err(Error::Schema(format!("transition {i}: unknown label kind `{other}`"))),
        })
    }
}

/// Serialise to the JSON exchange format. Memories are numbered from 0.
pub fn export_json(mfa: &Mfa) -> String {
    let doc = MfaDoc {
        memory_count: mfa.memory_count(),
        initial: mfa.initial(),
        accepting: mfa.accepting_states(),
        states: mfa.state_count(),
        transitions: mfa
            .transitions()
            .iter()
            .map(|t| TransitionDoc { from: t.from, label: t.label.into(), to: t.to })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serialises")
}

pub fn import_json(text: &str) -> Result<Mfa> {
    let doc: MfaDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let transitions = doc
        .transitions
        .iter()
        .enumerate()
        .map(|(i, t)| Ok(Transition { from: t.from, label: t.label.to_label(i)?, to: t.to }))
        .collect::<Result<Vec<_>>>()?;
    Mfa::new(doc.states, doc.initial, &doc.accepting, doc.memory_count, transitions)
}

/// Graphviz rendering; memory instructions print as `o<m>` and `c<m>`.
pub fn export_dot(mfa: &Mfa) -> String {
    let mut out = String::from("digraph mfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    out.push_str("  start [shape=point];\n");
    for q in mfa.accepting_states() {
        out.push_str(&format!("  {q} [shape=doublecircle];\n"));
    }
    out.push_str(&format!("  start -> {};\n", mfa.initial()));
    for t in mfa.transitions() {
        let text = mfa.label_text(t.label).replace('\\', "\\\\").replace('"', "\\\"");
        out.push_str(&format!("  {} -> {} [label=\"{}\"];\n", t.from, t.to, text));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfa::build_crude;
    use crate::syntax::Regex;

    #[test]
    fn json_round_trip_is_exact() {
        let m = build_crude(&Regex::parse("$x{(a|b)+}c$x").unwrap());
        let text = export_json(&m);
        let back = import_json(&text).unwrap();
        assert_eq!(back.transitions(), m.transitions());
        assert_eq!(export_json(&back), text);
    }

    #[test]
    fn tokens_survive_json() {
        let add = Symbol::token("[add]");
        let m = Mfa::new(2, 0, &[1], 0, vec![Transition { from: 0, label: Label::Char(add), to: 1 }]).unwrap();
        let back = import_json(&export_json(&m)).unwrap();
        assert_eq!(back.transitions()[0].label, Label::Char(add));
    }

    #[test]
    fn import_validates_memory_indices() {
        let text = r#"{"memoryCount":2,"initial":0,"accepting":[1],"states":2,
            "transitions":[{"from":0,"label":{"kind":"recall","mem":5},"to":1}]}"#;
        assert!(matches!(import_json(text), Err(Error::Schema(_))));
        let text = r#"{"memoryCount":2,"initial":0,"accepting":[1],"states":2,
            "transitions":[{"from":0,"label":{"kind":"jump"},"to":1}]}"#;
        assert!(matches!(import_json(text), Err(Error::Schema(_))));
    }

    #[test]
    fn dot_uses_short_instruction_names() {
        let m = build_crude(&Regex::parse("$x{a}~").unwrap());
        let dot = export_dot(&m);
        assert!(dot.contains("label=\"ox\""));
        assert!(dot.contains("label=\"cx\""));
        assert!(dot.starts_with("digraph"));
    }
}
