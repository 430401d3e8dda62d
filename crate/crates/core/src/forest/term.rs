//! Term notation for finite forests: `a(b + c, 0, b) + b`.
//!
//! Comma-separated arguments are the successor forests for edge labels
//! 0, 1, 2, ...; `0` is the empty forest and `x3` a variable.

use std::collections::HashMap;

use super::{parse_variable, ForestGraph, Label, Node, RankedAlphabet};
use crate::error::{Error, Result};

#[derive(Debug)]
struct Tree {
    name: String,
    args: Vec<Vec<Tree>>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn forest(&mut self) -> Result<Vec<Tree>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(b'0') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => out.push(self.tree()?),
                _ => return self.err("expected a tree or `0`"),
            }
            if self.peek() == Some(b'+') {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }

    fn tree(&mut self) -> Result<Tree> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric()
                || self.src[self.pos] == b'_'
                || self.src[self.pos] == b'\'')
        {
            self.pos += 1;
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        let mut args = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                args.push(self.forest()?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected `,` or `)`"),
                }
            }
        }
        Ok(Tree { name, args })
    }
}

fn parse(text: &str) -> Result<Vec<Tree>> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.forest()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

fn collect_arities(ts: &[Tree], out: &mut HashMap<String, usize>, order: &mut Vec<String>) {
    for t in ts {
        if parse_variable(&t.name).is_none() {
            let e = out.entry(t.name.clone()).or_insert_with(|| {
                order.push(t.name.clone());
                0
            });
            *e = (*e).max(t.args.len());
        }
        for a in &t.args {
            collect_arities(a, out, order);
        }
    }
}

fn build(ts: &[Tree], alphabet: RankedAlphabet) -> Result<ForestGraph> {
    fn go(t: &Tree, alphabet: &RankedAlphabet, nodes: &mut Vec<Node>) -> Result<usize> {
        let label = Label::parse(&t.name);
        match &label {
            Label::Var(_) if !t.args.is_empty() => {
                return Err(Error::Malformed(format!(
                    "variable {} has arguments",
                    t.name
                )))
            }
            Label::Sym(s) => {
                let ar = alphabet
                    .arity(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.clone()))?;
                if t.args.len() > ar {
                    return Err(Error::LabelArity {
                        node: nodes.len(),
                        edge: t.args.len() - 1,
                        arity: ar,
                    });
                }
            }
            Label::Var(_) => {}
        }
        let id = nodes.len();
        nodes.push(Node::new(label));
        let mut children = Vec::new();
        for (e, arg) in t.args.iter().enumerate() {
            for c in arg {
                children.push((e, go(c, alphabet, nodes)?));
            }
        }
        nodes[id].children = children;
        Ok(id)
    }
    let mut nodes = Vec::new();
    let mut roots = Vec::new();
    for t in ts {
        roots.push(go(t, &alphabet, &mut nodes)?);
    }
    Ok(ForestGraph::new(alphabet, nodes, roots))
}

/// Parses a finite forest. Without an alphabet, each symbol's arity is the
/// largest number of arguments it is written with.
pub fn parse_forest_term(text: &str, alphabet: Option<&RankedAlphabet>) -> Result<ForestGraph> {
    let ts = parse(text)?;
    let alphabet = match alphabet {
        Some(a) => a.clone(),
        None => {
            let mut ar = HashMap::new();
            let mut order = Vec::new();
            collect_arities(&ts, &mut ar, &mut order);
            RankedAlphabet::from_pairs(order.into_iter().map(|n| {
                let a = ar[&n];
                (n, a)
            }))?
        }
    };
    build(&ts, alphabet)
}

/// Parses a forest over an unranked alphabet: every symbol has arity 1.
pub fn parse_unranked_term(text: &str) -> Result<ForestGraph> {
    let ts = parse(text)?;
    let mut ar = HashMap::new();
    let mut order = Vec::new();
    collect_arities(&ts, &mut ar, &mut order);
    if let Some(n) = order.iter().find(|n| ar[*n] > 1) {
        return Err(Error::Malformed(format!(
            "symbol `{n}` used with several arguments in an unranked forest"
        )));
    }
    build(&ts, RankedAlphabet::unranked(order)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_with_arguments_and_sum() {
        let g = parse_forest_term("a(b + c, 0, b) + b", None).unwrap();
        assert_eq!(g.alphabet().arity("a"), Some(3));
        assert_eq!(g.alphabet().arity("b"), Some(0));
        assert_eq!(g.roots().len(), 2);
        assert_eq!(g.to_term().unwrap(), "a(b + c, 0, b) + b");
        assert!(g.validate().is_ok());
    }

    #[test]
    fn empty_forest() {
        let g = parse_forest_term("0", None).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.to_term().unwrap(), "0");
    }

    #[test]
    fn errors_carry_position() {
        match parse_forest_term("a(b", None) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_forest_term("a + ", None).is_err());
        assert!(parse_unranked_term("a(b, c)").is_err());
    }
}
