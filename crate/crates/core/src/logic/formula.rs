//! Counting EF formulas: tree formulas are boolean combinations of label
//! atoms and forest formulas; forest formulas are boolean combinations of
//! `E_l(tree formula)`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    /// `P_a`: the root carries label `a`.
    Label(String),
    /// `E_l φ`: at least `l` vertices satisfy the tree formula `φ`.
    Exists(usize, Box<Formula>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn label(a: impl Into<String>) -> Formula {
        Formula::Label(a.into())
    }

    pub fn exists(l: usize, f: Formula) -> Formula {
        Formula::Exists(l, Box::new(f))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction, flattening nested conjunctions; empty means `true`.
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(qs) => out.extend(qs),
                Formula::True => {}
                q => out.push(q),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction, flattening nested disjunctions; empty means `false`.
    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(qs) => out.extend(qs),
                Formula::False => {}
                q => out.push(q),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    /// Largest counting index `l` used (0 if none).
    pub fn k_index(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Label(_) => 0,
            Formula::Exists(l, f) => (*l).max(f.k_index()),
            Formula::Not(f) => f.k_index(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::k_index).max().unwrap_or(0)
            }
        }
    }

    /// Nesting depth of the `E` operators.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Label(_) => 0,
            Formula::Exists(_, f) => 1 + f.depth(),
            Formula::Not(f) => f.depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    /// Whether the formula is a forest formula (no label atom outside `E`).
    pub fn is_forest_formula(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Exists(..) => true,
            Formula::Label(_) => false,
            Formula::Not(f) => f.is_forest_formula(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_forest_formula),
        }
    }

    /// Parses a tree formula.
    pub fn parse(text: &str) -> Result<Formula> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let f = p.or()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return p.err("unexpected trailing input");
        }
        Ok(f)
    }

    /// Parses a forest formula; a label atom outside every `E` is rejected.
    pub fn parse_forest(text: &str) -> Result<Formula> {
        let f = Formula::parse(text)?;
        if !f.is_forest_formula() {
            return Err(Error::Parse {
                pos: 0,
                msg: "tree formula where forest formula expected".into(),
            });
        }
        Ok(f)
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(_) => 0,
            Formula::And(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, g: &Formula, min: u8| {
            if g.precedence() < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        };
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Label(a) => write!(f, "P{a}"),
            Formula::Exists(l, g) => write!(f, "E{l}({g})"),
            Formula::Not(g) => {
                write!(f, "!")?;
                sub(f, g, 2)
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let (op, min) = if matches!(self, Formula::And(_)) {
                    (" & ", 2)
                } else {
                    (" | ", 1)
                };
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    sub(f, g, min)?;
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
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

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.and()?];
        while self.eat(b'|') {
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::or(parts)
        })
    }

    fn and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(b'&') {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::and(parts)
        })
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && ident_char(self.src[self.pos]) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier")
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(b'!') {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(b'(') {
            let f = self.or()?;
            if !self.eat(b')') {
                return self.err("missing `)`");
            }
            return Ok(f);
        }
        self.skip_ws();
        let start = self.pos;
        let word = self.ident().to_string();
        match word.as_str() {
            "" => self.err("expected `P<label>`, `E<l>(...)`, `!` or `(`"),
            "true" => Ok(Formula::True),
            "false" => Ok(Formula::False),
            w if w.starts_with('P') && w.len() > 1 => Ok(Formula::Label(w[1..].to_string())),
            w if w.starts_with('E') => {
                let digits = &w[1..];
                let l = if digits.is_empty() {
                    1
                } else {
                    match digits.parse::<usize>() {
                        Ok(l) if l >= 1 => l,
                        _ => {
                            self.pos = start;
                            return self.err("counting index must be a positive integer");
                        }
                    }
                };
                if !self.eat(b'(') {
                    return self.err("expected `(` after counting operator");
                }
                let body = self.or()?;
                if !self.eat(b')') {
                    return self.err("missing `)`");
                }
                Ok(Formula::exists(l, body))
            }
            _ => {
                self.pos = start;
                self.err("unknown atom")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(
            Formula::parse("E1(Pa)").unwrap(),
            Formula::exists(1, Formula::label("a"))
        );
        let f = Formula::parse("E2(Pa & E1(Pb))").unwrap();
        assert_eq!(
            f,
            Formula::exists(
                2,
                Formula::and(vec![
                    Formula::label("a"),
                    Formula::exists(1, Formula::label("b"))
                ])
            )
        );
        assert_eq!(f.k_index(), 2);
        assert_eq!(f.depth(), 2);
        assert_eq!(
            Formula::parse("E(Pa)").unwrap(),
            Formula::parse("E1(Pa)").unwrap()
        );
    }

    #[test]
    fn tree_formula_at_forest_position() {
        let err = Formula::parse_forest("Pa").unwrap_err();
        assert!(err
            .to_string()
            .contains("tree formula where forest formula expected"));
        assert!(Formula::parse_forest("E1(Pa) & !E2(Pb)").is_ok());
        assert!(Formula::parse_forest("E1(Pa) | Pb").is_err());
    }

    #[test]
    fn print_round_trip() {
        for s in [
            "E1(Pa)",
            "!(E1(Pa) | E2(Pb)) & E3(Pa & !Pb)",
            "E1(Pa | Pb & Pc)",
            "(E1(Pa) | E1(Pb)) & E1(Pc)",
            "!!E1(true)",
        ] {
            let f = Formula::parse(s).unwrap();
            let again = Formula::parse(&f.to_string()).unwrap();
            assert_eq!(f, again, "{s} printed as {f}");
        }
        assert_eq!(
            Formula::parse("E1( Pa&Pb )").unwrap().to_string(),
            "E1(Pa & Pb)"
        );
    }

    #[test]
    fn syntax_errors_have_positions() {
        assert!(matches!(
            Formula::parse("E0(Pa)"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(Formula::parse("E1(Pa"), Err(Error::Parse { .. })));
        assert!(matches!(Formula::parse("Pa &"), Err(Error::Parse { .. })));
    }
}
