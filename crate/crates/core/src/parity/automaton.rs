use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::nfa::Nfa;
use crate::error::{Error, Result};
use crate::forest::Label;

/// One way of reading a node: an NFA per edge label constraining the states
/// of the children with that label. Absent edge labels admit no children.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransitionItem {
    pub children: BTreeMap<usize, Nfa>,
}

impl TransitionItem {
    pub fn leaf() -> Self {
        Self::default()
    }

    pub fn constraint(&self, edge: usize) -> Option<&Nfa> {
        self.children.get(&edge)
    }
}

/// Nondeterministic parity automaton over unranked forests. A forest is
/// accepted when Verifier wins the membership game (max priority seen
/// infinitely often is even).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityForestAutomaton {
    pub states: Vec<String>,
    pub priority: Vec<u32>,
    pub root: Nfa,
    pub delta: HashMap<(usize, Label), Vec<TransitionItem>>,
}

impl ParityForestAutomaton {
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn items(&self, state: usize, label: &Label) -> &[TransitionItem] {
        self.delta
            .get(&(state, label.clone()))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Accepts every forest over any alphabet of arity at most `max_arity`
    /// whose symbols are listed.
    pub fn universal<'a>(
        symbols: impl IntoIterator<Item = (&'a str, usize)>,
        max_var: usize,
    ) -> Self {
        let star = Nfa::star(&[0]);
        let mut delta = HashMap::new();
        for (s, arity) in symbols {
            let item = TransitionItem {
                children: (0..arity).map(|e| (e, star.clone())).collect(),
            };
            delta.insert((0, Label::sym(s)), vec![item]);
        }
        for i in 0..max_var {
            delta.insert((0, Label::Var(i)), vec![TransitionItem::leaf()]);
        }
        ParityForestAutomaton {
            states: vec!["q".into()],
            priority: vec![0],
            root: star,
            delta,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.priority.len() != self.states.len() {
            return Err(Error::Malformed(
                "priority list length differs from states".into(),
            ));
        }
        let n = self.states.len();
        let bad = |nfa: &Nfa| nfa.max_letter().is_some_and(|l| l >= n);
        if bad(&self.root) {
            return Err(Error::Malformed(
                "root constraint uses an unknown state".into(),
            ));
        }
        for ((q, label), items) in &self.delta {
            if *q >= n {
                return Err(Error::Malformed(format!(
                    "transition from unknown state {q}"
                )));
            }
            for item in items {
                if label.is_var() && !item.children.is_empty() {
                    return Err(Error::Malformed(format!(
                        "variable {label} has child constraints"
                    )));
                }
                if item.children.values().any(bad) {
                    return Err(Error::Malformed(
                        "child constraint uses an unknown state".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(AutomatonFile::from_automaton(self)).expect("automaton serializes")
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let file: AutomatonFile =
            serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        file.into_automaton()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AutomatonFile {
    states: Vec<String>,
    priority: BTreeMap<String, u32>,
    root: NfaFile,
    delta: Vec<DeltaFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DeltaFile {
    state: String,
    symbol: String,
    items: Vec<BTreeMap<String, NfaFile>>,
}

/// NFA on disk: explicit, or a regular expression string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum NfaFile {
    Regex(String),
    Explicit {
        states: Vec<String>,
        initial: Vec<String>,
        #[serde(rename = "final")]
        finals: Vec<String>,
        edges: Vec<(String, String, String)>,
    },
}

impl NfaFile {
    fn from_nfa(n: &Nfa, letters: &[String]) -> Self {
        let mut edges = Vec::new();
        for (p, es) in n.edges.iter().enumerate() {
            for &(l, q) in es {
                edges.push((n.names[p].clone(), letters[l].clone(), n.names[q].clone()));
            }
        }
        NfaFile::Explicit {
            states: n.names.clone(),
            initial: n.initial.iter().map(|&i| n.names[i].clone()).collect(),
            finals: (0..n.len())
                .filter(|&i| n.finals[i])
                .map(|i| n.names[i].clone())
                .collect(),
            edges,
        }
    }

    fn to_nfa(&self, letters: &[String]) -> Result<Nfa> {
        match self {
            NfaFile::Regex(r) => Nfa::from_regex(r, letters),
            NfaFile::Explicit {
                states,
                initial,
                finals,
                edges,
            } => {
                let idx = |s: &str| {
                    states
                        .iter()
                        .position(|x| x == s)
                        .ok_or_else(|| Error::Malformed(format!("unknown NFA state `{s}`")))
                };
                let letter = |s: &str| {
                    letters
                        .iter()
                        .position(|x| x == s)
                        .ok_or_else(|| Error::Malformed(format!("unknown automaton state `{s}`")))
                };
                let mut es = vec![Vec::new(); states.len()];
                for (p, l, q) in edges {
                    es[idx(p)?].push((letter(l)?, idx(q)?));
                }
                let mut fin = vec![false; states.len()];
                for f in finals {
                    fin[idx(f)?] = true;
                }
                Ok(Nfa {
                    names: states.clone(),
                    initial: initial.iter().map(|s| idx(s)).collect::<Result<_>>()?,
                    finals: fin,
                    edges: es,
                })
            }
        }
    }
}

impl AutomatonFile {
    fn from_automaton(a: &ParityForestAutomaton) -> Self {
        let mut keys: Vec<&(usize, Label)> = a
            .delta
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, _)| k)
            .collect();
        keys.sort();
        AutomatonFile {
            states: a.states.clone(),
            priority: a
                .states
                .iter()
                .cloned()
                .zip(a.priority.iter().copied())
                .collect(),
            root: NfaFile::from_nfa(&a.root, &a.states),
            delta: keys
                .into_iter()
                .map(|k| DeltaFile {
                    state: a.states[k.0].clone(),
                    symbol: k.1.to_string(),
                    items: a.delta[k]
                        .iter()
                        .map(|it| {
                            it.children
                                .iter()
                                .map(|(e, n)| (e.to_string(), NfaFile::from_nfa(n, &a.states)))
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    fn into_automaton(self) -> Result<ParityForestAutomaton> {
        let states = self.states;
        let priority = states
            .iter()
            .map(|s| {
                self.priority
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::Malformed(format!("no priority for state `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let root = self.root.to_nfa(&states)?;
        let mut delta: HashMap<(usize, Label), Vec<TransitionItem>> = HashMap::new();
        for d in self.delta {
            let q = states
                .iter()
                .position(|s| *s == d.state)
                .ok_or_else(|| Error::Malformed(format!("unknown state `{}`", d.state)))?;
            let entry = delta.entry((q, Label::parse(&d.symbol))).or_default();
            for item in d.items {
                let mut children = BTreeMap::new();
                for (e, nfa) in item {
                    let e: usize = e
                        .parse()
                        .map_err(|_| Error::Malformed(format!("bad edge label `{e}`")))?;
                    children.insert(e, nfa.to_nfa(&states)?);
                }
                entry.push(TransitionItem { children });
            }
        }
        let a = ParityForestAutomaton {
            states,
            priority,
            root,
            delta,
        };
        a.check()?;
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_with_regex_constraints() {
        let text = r#"{
            "states": ["free", "seek"],
            "priority": {"free": 0, "seek": 1},
            "root": "free* seek .*",
            "delta": [
                {"state": "free", "symbol": "a", "items": [{"0": "free*"}]},
                {"state": "seek", "symbol": "a", "items": [{"0": "free* seek free*"}]},
                {"state": "seek", "symbol": "b", "items": [{"0": "free*"}]}
            ]
        }"#;
        let v: Value = serde_json::from_str(text).unwrap();
        let a = ParityForestAutomaton::from_json_value(&v).unwrap();
        assert_eq!(a.priority, vec![0, 1]);
        assert_eq!(a.items(1, &Label::sym("a")).len(), 1);
        let again = ParityForestAutomaton::from_json_value(&a.to_json_value()).unwrap();
        assert_eq!(again.states, a.states);
        assert_eq!(again.delta.len(), a.delta.len());
    }

    #[test]
    fn unknown_state_is_rejected() {
        let text = r#"{"states":["q"],"priority":{"q":0},"root":"r*","delta":[]}"#;
        let v: Value = serde_json::from_str(text).unwrap();
        assert!(ParityForestAutomaton::from_json_value(&v).is_err());
    }
}
