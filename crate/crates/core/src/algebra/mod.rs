//! Finitary forest algebras presented by one parity automaton per element.

mod fixtures;
mod sampler;
mod tables;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forest::{ForestGraph, RankedAlphabet};
use crate::parity::{accepts, ParityForestAutomaton};

pub use fixtures::{contains_a, counting, inf_branch, trivial, two_a};
pub use sampler::{syntactic_sampler, SamplerBounds};
pub use tables::{derive_tables, leq_l, DerivedTables};
pub use validate::{validate_presentation, ValidationReport};

/// An algebra given by element lists per arity and an automaton recognising
/// the product preimage of every element.
#[derive(Debug)]
pub struct AlgebraPresentation {
    arities: BTreeMap<usize, Vec<String>>,
    generators: Vec<String>,
    accepted: Option<Vec<String>>,
    automata: HashMap<String, ParityForestAutomaton>,
    alphabet: RankedAlphabet,
    memo: RwLock<HashMap<(usize, String), String>>,
}

impl Clone for AlgebraPresentation {
    fn clone(&self) -> Self {
        AlgebraPresentation {
            arities: self.arities.clone(),
            generators: self.generators.clone(),
            accepted: self.accepted.clone(),
            automata: self.automata.clone(),
            alphabet: self.alphabet.clone(),
            memo: RwLock::new(self.memo.read().expect("memo lock").clone()),
        }
    }
}

fn describe(g: &ForestGraph) -> String {
    g.to_term().unwrap_or_else(|| g.canonical_key())
}

impl AlgebraPresentation {
    pub fn new(
        arities: BTreeMap<usize, Vec<String>>,
        generators: Vec<String>,
        accepted: Option<Vec<String>>,
        automata: HashMap<String, ParityForestAutomaton>,
    ) -> Result<Self> {
        for m in [0, 1] {
            if arities.get(&m).is_none_or(|v| v.is_empty()) {
                return Err(Error::MissingArity(m));
            }
        }
        let mut alphabet = RankedAlphabet::new();
        let mut seen = std::collections::HashSet::new();
        for (&m, names) in &arities {
            for n in names {
                if !seen.insert(n.clone()) {
                    return Err(Error::Malformed(format!("element `{n}` listed twice")));
                }
                alphabet.insert(n.clone(), m)?;
                let aut = automata
                    .get(n)
                    .ok_or_else(|| Error::Malformed(format!("no automaton for element `{n}`")))?;
                aut.check()?;
            }
        }
        for g in &generators {
            match alphabet.arity(g) {
                Some(0 | 1) => {}
                Some(_) => return Err(Error::NotGeneratedByLowArities),
                None => return Err(Error::UnknownSymbol(g.clone())),
            }
        }
        if let Some(acc) = &accepted {
            for a in acc {
                if alphabet.arity(a) != Some(0) {
                    return Err(Error::Malformed(format!(
                        "accepted element `{a}` is not of arity 0"
                    )));
                }
            }
        }
        Ok(AlgebraPresentation {
            arities,
            generators,
            accepted,
            automata,
            alphabet,
            memo: RwLock::new(HashMap::new()),
        })
    }

    /// Elements of arity `m` in listed order.
    pub fn elements(&self, m: usize) -> Result<&[String]> {
        self.arities
            .get(&m)
            .map(|v| v.as_slice())
            .ok_or(Error::MissingArity(m))
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.arities.keys().copied()
    }

    pub fn max_arity(&self) -> usize {
        self.arities.keys().copied().max().unwrap_or(0)
    }

    pub fn has_arity(&self, m: usize) -> bool {
        self.arities.contains_key(&m)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn accepted(&self) -> Option<&[String]> {
        self.accepted.as_deref()
    }

    pub fn automaton(&self, element: &str) -> Option<&ParityForestAutomaton> {
        self.automata.get(element)
    }

    /// Element names as a ranked alphabet.
    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn arity_of(&self, element: &str) -> Option<usize> {
        self.alphabet.arity(element)
    }

    /// Index of an element within its arity list.
    pub fn index_of(&self, element: &str) -> Option<usize> {
        let m = self.arity_of(element)?;
        self.arities[&m].iter().position(|e| e == element)
    }

    /// Replaces the automaton of one element, dropping cached results.
    pub fn set_automaton(&mut self, element: &str, aut: ParityForestAutomaton) -> Result<()> {
        if !self.automata.contains_key(element) {
            return Err(Error::UnknownSymbol(element.to_string()));
        }
        aut.check()?;
        self.automata.insert(element.to_string(), aut);
        self.memo.write().expect("memo lock").clear();
        Ok(())
    }

    /// The product of `g` as an element of arity `m`: the unique element
    /// whose automaton accepts `g`.
    pub fn evaluate(&self, g: &ForestGraph, m: usize) -> Result<String> {
        let elems = self.elements(m)?;
        let g = g.clone().with_alphabet(self.alphabet.clone());
        g.ensure_valid()?;
        if g.arity() > m {
            return Err(Error::VariableOutOfRange {
                index: g.arity() - 1,
                arity: m,
            });
        }
        if g.arity() < m {
            return Err(Error::InvalidForest(format!(
                "variable x{} does not occur",
                g.arity()
            )));
        }
        let key = (m, g.canonical_key());
        if let Some(e) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(e.clone());
        }
        let mut hits = Vec::new();
        for e in elems {
            if accepts(&self.automata[e], &g)? {
                hits.push(e.clone());
            }
        }
        let value = match hits.len() {
            1 => hits.pop().unwrap(),
            0 => {
                return Err(Error::NoAccept {
                    arity: m,
                    forest: describe(&g),
                })
            }
            _ => {
                return Err(Error::MultiAccept {
                    arity: m,
                    elements: hits,
                    forest: describe(&g),
                })
            }
        };
        self.memo
            .write()
            .expect("memo lock")
            .entry(key)
            .or_insert_with(|| value.clone());
        Ok(value)
    }

    /// Whether the language recognised through `accepted` contains `g`.
    pub fn member(&self, g: &ForestGraph) -> Result<bool> {
        let acc = self
            .accepted
            .as_ref()
            .ok_or_else(|| Error::Malformed("presentation has no accepted set".into()))?;
        let e = self.evaluate(g, 0)?;
        Ok(acc.contains(&e))
    }

    pub fn to_json_value(&self) -> Value {
        let arities: BTreeMap<String, &Vec<String>> = self
            .arities
            .iter()
            .map(|(m, v)| (m.to_string(), v))
            .collect();
        // automata differing only in their root constraint share the rest
        let mut shared: Vec<Value> = Vec::new();
        let mut automata = serde_json::Map::new();
        for names in self.arities.values() {
            for n in names {
                let mut a = self.automata[n].to_json_value();
                let root = a
                    .as_object_mut()
                    .and_then(|o| o.remove("root"))
                    .expect("automaton has a root");
                let idx = shared.iter().position(|s| *s == a).unwrap_or_else(|| {
                    shared.push(a);
                    shared.len() - 1
                });
                automata.insert(n.clone(), json!({"shared": idx, "root": root}));
            }
        }
        let mut v = json!({
            "arities": arities,
            "generators": self.generators,
            "shared": shared,
            "automata": automata,
        });
        if let Some(acc) = &self.accepted {
            v["accepted"] = json!(acc);
        }
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("presentation serializes")
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Malformed(m.to_string());
        let obj = v
            .as_object()
            .ok_or_else(|| bad("algebra must be an object"))?;
        let ar = obj
            .get("arities")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing `arities` object"))?;
        let mut arities = BTreeMap::new();
        for (k, names) in ar {
            let m: usize = k
                .parse()
                .map_err(|_| Error::Malformed(format!("bad arity key `{k}`")))?;
            let names: Vec<String> = serde_json::from_value(names.clone())
                .map_err(|e| Error::Malformed(e.to_string()))?;
            arities.insert(m, names);
        }
        let strings = |key: &str| -> Result<Option<Vec<String>>> {
            match obj.get(key) {
                None => Ok(None),
                Some(x) => serde_json::from_value(x.clone())
                    .map(Some)
                    .map_err(|e| Error::Malformed(e.to_string())),
            }
        };
        let generators = strings("generators")?.unwrap_or_else(|| {
            arities
                .range(0..=1)
                .flat_map(|(_, v)| v.iter().cloned())
                .collect()
        });
        let accepted = strings("accepted")?;
        let auts = obj
            .get("automata")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing `automata` object"))?;
        let shared = match obj.get("shared") {
            None => Vec::new(),
            Some(x) => x
                .as_array()
                .cloned()
                .ok_or_else(|| bad("`shared` must be a list"))?,
        };
        let mut automata = HashMap::new();
        for (name, a) in auts {
            let full = match a.get("shared") {
                None => a.clone(),
                Some(i) => {
                    let part = i
                        .as_u64()
                        .and_then(|i| shared.get(i as usize))
                        .and_then(Value::as_object)
                        .ok_or_else(|| {
                            Error::Malformed(format!("bad `shared` index in `{name}`"))
                        })?;
                    let mut full = part.clone();
                    if let Some(root) = a.get("root") {
                        full.insert("root".into(), root.clone());
                    }
                    Value::Object(full)
                }
            };
            automata.insert(name.clone(), ParityForestAutomaton::from_json_value(&full)?);
        }
        AlgebraPresentation::new(arities, generators, accepted, automata)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_json_value(&v)
    }
}
