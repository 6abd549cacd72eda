use super::{is_identifier, NodeId, Regex, RegexBuilder};
use crate::{Error, Result, Symbol};

const META: &[char] = &['|', '+', '*', '(', ')', '~', '$', '{', '}', '[', ']', '\\'];

pub(super) fn is_meta(c: char) -> bool {
    META.contains(&c)
}

/// Parse pattern text into a validated [`Regex`].
///
/// Whitespace between tokens is ignored; a literal blank is written `\ `.
pub fn parse(text: &str) -> Result<Regex> {
    let mut p = Parser { chars: text.char_indices().collect(), at: 0, len: text.len(), b: RegexBuilder::new() };
    let root = p.alternation()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected `{c}`")));
    }
    p.b.finish(root)
}

struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
    len: usize,
    b: RegexBuilder,
}

impl Parser {
    fn offset(&self) -> usize {
        self.chars.get(self.at).map_or(self.len, |&(o, _)| o)
    }

    fn error(&self, msg: String) -> Error {
        Error::Parse { pos: self.offset(), msg }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.at).is_some_and(|&(_, c)| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn peek_raw(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_raw();
        self.at += 1;
        c
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.at += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of pattern"))),
        }
    }

    fn alternation(&mut self) -> Result<NodeId> {
        let mut acc = self.sequence()?;
        while self.peek() == Some('|') {
            self.at += 1;
            let rhs = self.sequence()?;
            acc = self.b.alt(acc, rhs);
        }
        Ok(acc)
    }

    fn sequence(&mut self) -> Result<NodeId> {
        let mut acc: Option<NodeId> = None;
        while let Some(c) = self.peek() {
            if matches!(c, '|' | ')' | '}') {
                break;
            }
            let item = self.postfix()?;
            acc = Some(match acc {
                None => item,
                Some(prev) => self.b.concat(prev, item),
            });
        }
        acc.ok_or_else(|| self.error("expected an expression (write `~` for the empty word)".into()))
    }

    fn postfix(&mut self) -> Result<NodeId> {
        let mut node = self.atom()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.at += 1;
                    node = self.b.plus(node);
                }
                Some('*') => {
                    self.at += 1;
                    node = self.b.star(node);
                }
                _ => return Ok(node),
            }
        }
    }

    fn atom(&mut self) -> Result<NodeId> {
        let c = self.peek().ok_or_else(|| self.error("unexpected end of pattern".into()))?;
        match c {
            '(' => {
                self.at += 1;
                let inner = self.alternation()?;
                self.expect(')')?;
                Ok(inner)
            }
            '~' => {
                self.at += 1;
                Ok(self.b.eps())
            }
            '$' => {
                self.at += 1;
                let name = self.name()?;
                if self.peek_raw() == Some('{') {
                    self.at += 1;
                    let var = self.b.intern(&name);
                    let body = self.alternation()?;
                    self.expect('}')?;
                    Ok(self.b.push(super::Node::Def(var, body)))
                } else {
                    Ok(self.b.recall(&name))
                }
            }
            '[' => {
                self.at += 1;
                self.class()
            }
            '\\' => {
                self.at += 1;
                let c = self.bump().ok_or_else(|| self.error("dangling escape".into()))?;
                Ok(self.b.lit(c))
            }
            c if is_meta(c) => Err(self.error(format!("unexpected `{c}`"))),
            c => {
                self.at += 1;
                Ok(self.b.lit(c))
            }
        }
    }

    fn name(&mut self) -> Result<String> {
        let start = self.at;
        while self.peek_raw().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.at += 1;
        }
        let name: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        if !is_identifier(&name) {
            self.at = start;
            return Err(self.error("expected a variable name after `$`".into()));
        }
        Ok(name)
    }

    /// `[...]` with single characters, `lo-hi` ranges and escapes; desugars
    /// to a left-nested alternation of the listed characters.
    fn class(&mut self) -> Result<NodeId> {
        let mut members: Vec<char> = Vec::new();
        loop {
            let c = match self.bump() {
                None => return Err(self.error("unterminated character class".into())),
                Some(']') => break,
                Some('\\') => self.bump().ok_or_else(|| self.error("dangling escape".into()))?,
                Some(c) => c,
            };
            if self.peek_raw() == Some('-') && self.chars.get(self.at + 1).is_some_and(|&(_, n)| n != ']') {
                self.at += 1;
                let hi = match self.bump() {
                    Some('\\') => self.bump().ok_or_else(|| self.error("dangling escape".into()))?,
                    Some(h) => h,
                    None => return Err(self.error("unterminated character class".into())),
                };
                if hi < c {
                    return Err(self.error(format!("empty range `{c}-{hi}`")));
                }
                members.extend(c..=hi);
            } else {
                members.push(c);
            }
        }
        let mut seen = std::collections::HashSet::new();
        members.retain(|c| seen.insert(*c));
        if members.is_empty() {
            return Err(self.error("empty character class".into()));
        }
        let leaves: Vec<NodeId> = members.into_iter().map(|c| self.b.lit(Symbol::char(c))).collect();
        Ok(self.b.alt_all(&leaves))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sx(p: &str) -> String {
        parse(p).unwrap().to_sexpr()
    }

    #[test]
    fn definition_and_recall() {
        assert_eq!(sx("$x{(a|b)+}c$x"), "(cat (cat (def x (plus (alt a b))) c) $x)");
    }

    #[test]
    fn star_desugars_to_plus_or_epsilon() {
        assert_eq!(sx("a*"), "(alt (plus a) ~)");
    }

    #[test]
    fn whitespace_separates_names_and_is_ignored() {
        assert_eq!(sx("$y c"), "(cat $y c)");
        assert_eq!(sx("a \\  b"), "(cat (cat a  ) b)");
    }

    #[test]
    fn classes_and_escapes() {
        assert_eq!(sx("[a-c]"), "(alt (alt a b) c)");
        assert_eq!(sx("\\$\\|"), "(cat $ |)");
        assert_eq!(sx("[ab-]"), "(alt (alt a b) -)");
    }

    #[test]
    fn variables_interned_in_first_occurrence_order() {
        let r = parse("$b $a{x} $c{$b}").unwrap();
        assert_eq!(r.var_names(), ["b", "a", "c"]);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("a|"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse("(a"), Err(Error::Parse { .. })));
        assert!(matches!(parse("$x{a"), Err(Error::Parse { .. })));
        assert!(matches!(parse("$1"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse("a)"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse("[]"), Err(Error::Parse { .. })));
        assert!(matches!(parse("$x{$x}"), Err(Error::NestedDefinition(_))));
    }
}
