//! Finite automata over the state set of a forest automaton. They constrain
//! the ordered sequence of states assigned to the children of a node.

use crate::error::{Error, Result};

/// Letters are indices into the enclosing automaton's state list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    pub names: Vec<String>,
    pub initial: Vec<usize>,
    pub finals: Vec<bool>,
    /// `edges[p]` holds `(letter, target)`.
    pub edges: Vec<Vec<(usize, usize)>>,
}

impl Nfa {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Accepts only the empty sequence.
    pub fn epsilon() -> Nfa {
        Nfa {
            names: vec!["0".into()],
            initial: vec![0],
            finals: vec![true],
            edges: vec![Vec::new()],
        }
    }

    /// Accepts every sequence over `letters`.
    pub fn star(letters: &[usize]) -> Nfa {
        Nfa {
            names: vec!["0".into()],
            initial: vec![0],
            finals: vec![true],
            edges: vec![letters.iter().map(|&l| (l, 0)).collect()],
        }
    }

    pub fn accepts_empty(&self) -> bool {
        self.initial.iter().any(|&p| self.finals[p])
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let sets: Vec<Vec<bool>> = word
            .iter()
            .map(|&l| {
                let mut s = vec![false; l + 1];
                s[l] = true;
                s
            })
            .collect();
        self.accepts_choices(&sets)
    }

    /// Whether some word `w` with `w[i]` drawn from `choices[i]` is accepted.
    pub fn accepts_choices(&self, choices: &[Vec<bool>]) -> bool {
        let mut cur = vec![false; self.len()];
        for &p in &self.initial {
            cur[p] = true;
        }
        for allowed in choices {
            let mut next = vec![false; self.len()];
            for p in 0..self.len() {
                if !cur[p] {
                    continue;
                }
                for &(l, q) in &self.edges[p] {
                    if allowed.get(l).copied().unwrap_or(false) {
                        next[q] = true;
                    }
                }
            }
            cur = next;
            if !cur.iter().any(|&b| b) {
                return false;
            }
        }
        (0..self.len()).any(|p| cur[p] && self.finals[p])
    }

    /// Largest letter index used.
    pub fn max_letter(&self) -> Option<usize> {
        self.edges.iter().flatten().map(|&(l, _)| l).max()
    }

    /// Compiles a regular expression over state names. Syntax: names
    /// separated by whitespace are concatenated; `|`, postfix `*` `+` `?`,
    /// parentheses, `eps` for the empty word and `.` for any state.
    pub fn from_regex(src: &str, states: &[String]) -> Result<Nfa> {
        let tokens = tokenize(src)?;
        let mut p = RegexParser {
            tokens,
            pos: 0,
            states,
        };
        let ast = p.alt()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse {
                pos: p.pos,
                msg: "unexpected token in regular expression".into(),
            });
        }
        Ok(Thompson::compile(&ast, states.len()))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Any,
    Eps,
    Bar,
    Star,
    Plus,
    Opt,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i];
        match c {
            b' ' | b'\t' | b'\n' => i += 1,
            b'|' => {
                out.push(Tok::Bar);
                i += 1
            }
            b'*' => {
                out.push(Tok::Star);
                i += 1
            }
            b'+' => {
                out.push(Tok::Plus);
                i += 1
            }
            b'?' => {
                out.push(Tok::Opt);
                i += 1
            }
            b'(' => {
                out.push(Tok::LParen);
                i += 1
            }
            b')' => {
                out.push(Tok::RParen);
                i += 1
            }
            b'.' => {
                out.push(Tok::Any);
                i += 1
            }
            _ if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' || c == b'-' => {
                let start = i;
                while i < b.len()
                    && (b[i].is_ascii_alphanumeric() || matches!(b[i], b'_' | b'\'' | b'-'))
                {
                    i += 1;
                }
                let name = &src[start..i];
                out.push(if name == "eps" {
                    Tok::Eps
                } else {
                    Tok::Name(name.to_string())
                });
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character `{}`", c as char),
                })
            }
        }
    }
    Ok(out)
}

#[derive(Debug)]
enum Re {
    Eps,
    Letters(Vec<usize>),
    Cat(Vec<Re>),
    Alt(Vec<Re>),
    Star(Box<Re>),
}

struct RegexParser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    states: &'a [String],
}

impl RegexParser<'_> {
    fn alt(&mut self) -> Result<Re> {
        let mut arms = vec![self.cat()?];
        while self.tokens.get(self.pos) == Some(&Tok::Bar) {
            self.pos += 1;
            arms.push(self.cat()?);
        }
        Ok(if arms.len() == 1 {
            arms.pop().unwrap()
        } else {
            Re::Alt(arms)
        })
    }

    fn cat(&mut self) -> Result<Re> {
        let mut parts = Vec::new();
        while let Some(t) = self.tokens.get(self.pos) {
            if matches!(t, Tok::Bar | Tok::RParen) {
                break;
            }
            parts.push(self.postfix()?);
        }
        Ok(match parts.len() {
            0 => Re::Eps,
            1 => parts.pop().unwrap(),
            _ => Re::Cat(parts),
        })
    }

    fn postfix(&mut self) -> Result<Re> {
        let mut base = self.atom()?;
        while let Some(t) = self.tokens.get(self.pos) {
            base = match t {
                Tok::Star => Re::Star(Box::new(base)),
                Tok::Plus => {
                    let again = clone_re(&base);
                    Re::Cat(vec![base, Re::Star(Box::new(again))])
                }
                Tok::Opt => Re::Alt(vec![base, Re::Eps]),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Re> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Name(n)) => {
                let i = self
                    .states
                    .iter()
                    .position(|s| *s == n)
                    .ok_or_else(|| Error::Parse {
                        pos: self.pos - 1,
                        msg: format!("unknown state `{n}`"),
                    })?;
                Ok(Re::Letters(vec![i]))
            }
            Some(Tok::Any) => Ok(Re::Letters((0..self.states.len()).collect())),
            Some(Tok::Eps) => Ok(Re::Eps),
            Some(Tok::LParen) => {
                let inner = self.alt()?;
                if self.tokens.get(self.pos) != Some(&Tok::RParen) {
                    return Err(Error::Parse {
                        pos: self.pos,
                        msg: "missing `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(Error::Parse {
                pos: self.pos - 1,
                msg: "expected a state name, `.`, `eps` or `(`".into(),
            }),
        }
    }
}

fn clone_re(r: &Re) -> Re {
    match r {
        Re::Eps => Re::Eps,
        Re::Letters(l) => Re::Letters(l.clone()),
        Re::Cat(v) => Re::Cat(v.iter().map(clone_re).collect()),
        Re::Alt(v) => Re::Alt(v.iter().map(clone_re).collect()),
        Re::Star(b) => Re::Star(Box::new(clone_re(b))),
    }
}

/// Thompson construction followed by epsilon elimination.
struct Thompson {
    eps: Vec<Vec<usize>>,
    edges: Vec<Vec<(usize, usize)>>,
}

impl Thompson {
    fn fresh(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, r: &Re) -> (usize, usize) {
        match r {
            Re::Eps => {
                let s = self.fresh();
                (s, s)
            }
            Re::Letters(ls) => {
                let s = self.fresh();
                let t = self.fresh();
                for &l in ls {
                    self.edges[s].push((l, t));
                }
                (s, t)
            }
            Re::Cat(parts) => {
                let (s, mut t) = self.build(&parts[0]);
                for p in &parts[1..] {
                    let (s2, t2) = self.build(p);
                    self.eps[t].push(s2);
                    t = t2;
                }
                (s, t)
            }
            Re::Alt(arms) => {
                let s = self.fresh();
                let t = self.fresh();
                for a in arms {
                    let (s2, t2) = self.build(a);
                    self.eps[s].push(s2);
                    self.eps[t2].push(t);
                }
                (s, t)
            }
            Re::Star(inner) => {
                let s = self.fresh();
                let (s2, t2) = self.build(inner);
                self.eps[s].push(s2);
                self.eps[t2].push(s);
                (s, s)
            }
        }
    }

    fn closure(&self, p: usize) -> Vec<usize> {
        let mut seen = vec![false; self.eps.len()];
        let mut stack = vec![p];
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            out.push(v);
            stack.extend(self.eps[v].iter().copied());
        }
        out
    }

    fn compile(r: &Re, _letters: usize) -> Nfa {
        let mut t = Thompson {
            eps: Vec::new(),
            edges: Vec::new(),
        };
        let (start, end) = t.build(r);
        let n = t.eps.len();
        let closures: Vec<Vec<usize>> = (0..n).map(|p| t.closure(p)).collect();
        let finals = (0..n).map(|p| closures[p].contains(&end)).collect();
        let edges = (0..n)
            .map(|p| {
                let mut es: Vec<(usize, usize)> = closures[p]
                    .iter()
                    .flat_map(|&q| t.edges[q].iter().copied())
                    .collect();
                es.sort_unstable();
                es.dedup();
                es
            })
            .collect();
        Nfa {
            names: (0..n).map(|i| i.to_string()).collect(),
            initial: vec![start],
            finals,
            edges,
        }
    }
}
