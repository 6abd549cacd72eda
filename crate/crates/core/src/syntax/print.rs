use super::parse::is_meta;
use super::{Node, NodeId, Regex};

/// Render `regex` as pattern text that parses back to the same tree.
pub(super) fn print(regex: &Regex, id: NodeId) -> String {
    let mut w = Writer { out: String::new(), after_name: false };
    w.node(regex, id, 0);
    w.out
}

struct Writer {
    out: String,
    after_name: bool,
}

fn precedence(node: Node) -> u8 {
    match node {
        Node::Alt(..) => 0,
        Node::Concat(..) => 1,
        Node::Plus(_) => 2,
        _ => 3,
    }
}

impl Writer {
    fn push(&mut self, s: &str) {
        // A recall name swallows a directly following identifier character.
        if self.after_name && s.starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            self.out.push(' ');
        }
        self.out.push_str(s);
        self.after_name = false;
    }

    fn node(&mut self, r: &Regex, id: NodeId, min: u8) {
        let node = r.node(id);
        let wrap = precedence(node) < min;
        if wrap {
            self.push("(");
        }
        match node {
            Node::Alt(a, b) => {
                self.node(r, a, 0);
                self.push("|");
                self.node(r, b, 1);
            }
            Node::Concat(a, b) => {
                self.node(r, a, 1);
                self.node(r, b, 2);
            }
            Node::Plus(c) => {
                self.node(r, c, 2);
                self.push("+");
            }
            Node::Def(x, c) => {
                self.push(&format!("${}{{", r.var_name(x)));
                self.node(r, c, 0);
                self.push("}");
            }
            Node::Recall(x) => {
                self.push(&format!("${}", r.var_name(x)));
                self.after_name = true;
            }
            Node::Epsilon => self.push("~"),
            Node::Literal(s) => {
                let c = s.as_char().expect("pattern literals are single characters");
                if is_meta(c) || c.is_whitespace() {
                    self.push(&format!("\\{c}"));
                } else {
                    self.push(&c.to_string());
                }
            }
        }
        if wrap {
            self.push(")");
        }
    }
}
