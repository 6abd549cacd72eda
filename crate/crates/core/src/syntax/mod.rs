//! Syntax trees for regexes with backreferences.
//!
//! A tree is stored as an arena of [`Node`]s. Variables are interned and
//! numbered in order of first textual occurrence.

mod parse;
mod print;

use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result, Symbol};

pub use parse::parse;

pub type NodeId = usize;
pub type VarId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Concat(NodeId, NodeId),
    Alt(NodeId, NodeId),
    Plus(NodeId),
    Literal(Symbol),
    Epsilon,
    Recall(VarId),
    Def(VarId, NodeId),
}

impl Node {
    pub fn children(&self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match *self {
            Node::Concat(l, r) | Node::Alt(l, r) => (Some(l), Some(r)),
            Node::Plus(c) | Node::Def(_, c) => (Some(c), None),
            _ => (None, None),
        };
        a.into_iter().chain(b)
    }
}

/// A validated syntax tree: no variable occurs inside its own definition.
#[derive(Debug, Clone)]
pub struct Regex {
    nodes: Vec<Node>,
    root: NodeId,
    vars: Vec<String>,
}

impl Regex {
    pub fn parse(text: &str) -> Result<Self> {
        parse::parse(text)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Number of syntax-tree nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.vars[v]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|n| n == name)
    }

    /// Parent of every node; `None` for the root.
    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut parent = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            for c in node.children() {
                parent[c] = Some(id);
            }
        }
        parent
    }

    /// Ids of all `Def` nodes, in arena order.
    pub fn definitions(&self) -> impl Iterator<Item = (NodeId, VarId, NodeId)> + '_ {
        self.nodes.iter().enumerate().filter_map(|(id, n)| match *n {
            Node::Def(x, c) => Some((id, x, c)),
            _ => None,
        })
    }

    /// Rename every occurrence of variable `from` to `to`, merging with `to`
    /// if it already exists. Fails if the result nests a definition of a
    /// variable inside itself.
    pub fn rename_variable(&self, from: &str, to: &str) -> Result<Regex> {
        let names: Vec<String> = self.vars.iter().map(|n| if n == from { to.to_string() } else { n.clone() }).collect();
        let mut b = RegexBuilder::new();
        let ids: Vec<VarId> = names.iter().map(|n| b.intern(n)).collect();
        let mut map = vec![0; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            map[id] = b.push(match *node {
                Node::Concat(l, r) => Node::Concat(map[l], map[r]),
                Node::Alt(l, r) => Node::Alt(map[l], map[r]),
                Node::Plus(c) => Node::Plus(map[c]),
                Node::Def(x, c) => Node::Def(ids[x], map[c]),
                Node::Recall(x) => Node::Recall(ids[x]),
                leaf => leaf,
            });
        }
        b.finish(map[self.root])
    }

    /// Compact s-expression rendering, mainly for tests and debugging.
    /// Pattern text of the subexpression rooted at `id`.
    pub fn subpattern(&self, id: NodeId) -> String {
        print::print(self, id)
    }

    pub fn to_sexpr(&self) -> String {
        let mut out = String::new();
        self.sexpr_into(self.root, &mut out);
        out
    }

    fn sexpr_into(&self, id: NodeId, out: &mut String) {
        match self.nodes[id] {
            Node::Concat(l, r) => self.sexpr_pair("cat", l, r, out),
            Node::Alt(l, r) => self.sexpr_pair("alt", l, r, out),
            Node::Plus(c) => {
                out.push_str("(plus ");
                self.sexpr_into(c, out);
                out.push(')');
            }
            Node::Def(x, c) => {
                out.push_str("(def ");
                out.push_str(&self.vars[x]);
                out.push(' ');
                self.sexpr_into(c, out);
                out.push(')');
            }
            Node::Recall(x) => {
                out.push('$');
                out.push_str(&self.vars[x]);
            }
            Node::Literal(s) => out.push_str(&s.name()),
            Node::Epsilon => out.push('~'),
        }
    }

    fn sexpr_pair(&self, tag: &str, l: NodeId, r: NodeId, out: &mut String) {
        out.push('(');
        out.push_str(tag);
        out.push(' ');
        self.sexpr_into(l, out);
        out.push(' ');
        self.sexpr_into(r, out);
        out.push(')');
    }

    fn same_shape(&self, a: NodeId, other: &Regex, b: NodeId) -> bool {
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            match (self.nodes[a], other.nodes[b]) {
                (Node::Concat(l1, r1), Node::Concat(l2, r2)) | (Node::Alt(l1, r1), Node::Alt(l2, r2)) => {
                    stack.push((l1, l2));
                    stack.push((r1, r2));
                }
                (Node::Plus(c1), Node::Plus(c2)) => stack.push((c1, c2)),
                (Node::Def(x1, c1), Node::Def(x2, c2)) => {
                    if self.vars[x1] != other.vars[x2] {
                        return false;
                    }
                    stack.push((c1, c2));
                }
                (Node::Recall(x1), Node::Recall(x2)) => {
                    if self.vars[x1] != other.vars[x2] {
                        return false;
                    }
                }
                (Node::Literal(s1), Node::Literal(s2)) if s1 == s2 => {}
                (Node::Epsilon, Node::Epsilon) => {}
                _ => return false,
            }
        }
        true
    }
}

/// Structural equality: same tree shape, symbols and variable names.
impl PartialEq for Regex {
    fn eq(&self, other: &Self) -> bool {
        self.same_shape(self.root, other, other.root)
    }
}

impl Eq for Regex {}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(self, self.root()))
    }
}

/// Incremental construction of a [`Regex`].
///
/// Node ids handed out by the builder are only meaningful to the same
/// builder. [`RegexBuilder::finish`] compacts the arena to the nodes reachable
/// from the root, renumbers variables by first occurrence and validates the
/// definition nesting rule.
#[derive(Debug, Default, Clone)]
pub struct RegexBuilder {
    nodes: Vec<Node>,
    vars: Vec<String>,
    index: HashMap<String, VarId>,
}

impl RegexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = self.vars.len();
        self.vars.push(name.to_string());
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn lit(&mut self, s: impl Into<Symbol>) -> NodeId {
        self.push(Node::Literal(s.into()))
    }

    pub fn eps(&mut self) -> NodeId {
        self.push(Node::Epsilon)
    }

    pub fn concat(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.push(Node::Concat(l, r))
    }

    pub fn alt(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.push(Node::Alt(l, r))
    }

    pub fn plus(&mut self, c: NodeId) -> NodeId {
        self.push(Node::Plus(c))
    }

    /// `c*`, desugared to `c+ | ε`.
    pub fn star(&mut self, c: NodeId) -> NodeId {
        let p = self.plus(c);
        let e = self.eps();
        self.alt(p, e)
    }

    pub fn recall(&mut self, name: &str) -> NodeId {
        let v = self.intern(name);
        self.push(Node::Recall(v))
    }

    pub fn def(&mut self, name: &str, c: NodeId) -> NodeId {
        let v = self.intern(name);
        self.push(Node::Def(v, c))
    }

    /// Left-nested concatenation; ε for an empty list.
    pub fn concat_all(&mut self, parts: &[NodeId]) -> NodeId {
        match parts.split_first() {
            None => self.eps(),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &p| self.concat(acc, p)),
        }
    }

    /// Left-nested alternation; ε for an empty list.
    pub fn alt_all(&mut self, parts: &[NodeId]) -> NodeId {
        match parts.split_first() {
            None => self.eps(),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &p| self.alt(acc, p)),
        }
    }

    pub fn finish(self, root: NodeId) -> Result<Regex> {
        for name in &self.vars {
            if !is_identifier(name) {
                return Err(Error::Parse { pos: 0, msg: format!("invalid variable name `{name}`") });
            }
        }
        // Iterative traversal: variables are numbered on entry (pre-order),
        // nodes are emitted on exit (post-order) so children precede parents.
        let mut nodes = Vec::new();
        let mut var_map: Vec<Option<VarId>> = vec![None; self.vars.len()];
        let mut vars = Vec::new();
        let mut emitted: Vec<Option<NodeId>> = vec![None; self.nodes.len()];
        let mut stack = vec![(root, false)];
        while let Some((id, exiting)) = stack.pop() {
            let node = self.nodes[id];
            if !exiting {
                if let Node::Def(x, _) | Node::Recall(x) = node {
                    if var_map[x].is_none() {
                        var_map[x] = Some(vars.len());
                        vars.push(self.vars[x].clone());
                    }
                }
                stack.push((id, true));
                let children: Vec<NodeId> = node.children().collect();
                for &c in children.iter().rev() {
                    stack.push((c, false));
                }
                continue;
            }
            let m = |c: NodeId| emitted[c].expect("child emitted before parent");
            let new = match node {
                Node::Concat(l, r) => Node::Concat(m(l), m(r)),
                Node::Alt(l, r) => Node::Alt(m(l), m(r)),
                Node::Plus(c) => Node::Plus(m(c)),
                Node::Def(x, c) => Node::Def(var_map[x].unwrap(), m(c)),
                Node::Recall(x) => Node::Recall(var_map[x].unwrap()),
                leaf => leaf,
            };
            nodes.push(new);
            emitted[id] = Some(nodes.len() - 1);
        }
        let regex = Regex { root: nodes.len() - 1, nodes, vars };
        validate_nesting(&regex)?;
        Ok(regex)
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Children precede parents in the arena, so one forward pass computes the
/// variable set of every subtree.
fn validate_nesting(regex: &Regex) -> Result<()> {
    let mut sets: Vec<Vec<VarId>> = Vec::with_capacity(regex.nodes.len());
    for node in &regex.nodes {
        let mut set: Vec<VarId> = Vec::new();
        for c in node.children() {
            set.extend_from_slice(&sets[c]);
        }
        match *node {
            Node::Def(x, c) => {
                if sets[c].contains(&x) {
                    return Err(Error::NestedDefinition(regex.vars[x].clone()));
                }
                set.push(x);
            }
            Node::Recall(x) => set.push(x),
            _ => {}
        }
        set.sort_unstable();
        set.dedup();
        sets.push(set);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_numbers_variables_by_first_occurrence() {
        let mut b = RegexBuilder::new();
        let y = b.recall("y");
        let a = b.lit('a');
        let x = b.def("x", a);
        let root = b.concat(x, y);
        let r = b.finish(root).unwrap();
        assert_eq!(r.var_names(), ["x", "y"]);
        assert_eq!(r.to_sexpr(), "(cat (def x a) $y)");
    }

    #[test]
    fn nested_self_definition_is_rejected() {
        let mut b = RegexBuilder::new();
        let inner = b.recall("x");
        let root = b.def("x", inner);
        assert_eq!(b.finish(root).unwrap_err(), Error::NestedDefinition("x".into()));
    }

    #[test]
    fn rename_merges_and_revalidates() {
        let r = Regex::parse("$x{a}$z{$x b}").unwrap();
        assert!(matches!(r.rename_variable("z", "x"), Err(Error::NestedDefinition(_))));
        let alpha = Regex::parse("$x{a+}b$x($y c$y{b+})+$x{b+}a$x").unwrap();
        let renamed = alpha.rename_variable("y", "x").unwrap();
        assert_eq!(renamed, Regex::parse("$x{a+}b$x($x c$x{b+})+$x{b+}a$x").unwrap());
        assert_eq!(renamed.var_count(), 1);
    }

    #[test]
    fn parents_point_up() {
        let r = Regex::parse("a(b|c)").unwrap();
        let parents = r.parents();
        assert_eq!(parents[r.root()], None);
        assert_eq!(parents.iter().filter(|p| p.is_none()).count(), 1);
    }
}
