use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ForestGraph, Label, Node, RankedAlphabet};
use crate::error::{Error, Result};

/// On-disk forest: `{"alphabet": [["a",1]], "roots": [0], "nodes": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ForestFile {
    pub alphabet: Vec<(String, usize)>,
    pub roots: Vec<u64>,
    pub nodes: Vec<NodeFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct NodeFile {
    pub id: u64,
    pub label: String,
    #[serde(default)]
    pub children: Vec<(usize, u64)>,
}

impl ForestFile {
    pub fn from_graph(g: &ForestGraph) -> Self {
        let c = g.canonical();
        ForestFile {
            alphabet: c.alphabet().symbols().to_vec(),
            roots: c.roots().iter().map(|&r| r as u64).collect(),
            nodes: c
                .nodes()
                .iter()
                .enumerate()
                .map(|(i, n)| NodeFile {
                    id: i as u64,
                    label: n.label.to_string(),
                    children: n.children.iter().map(|&(e, t)| (e, t as u64)).collect(),
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<ForestGraph> {
        let alphabet = RankedAlphabet::from_pairs(self.alphabet.iter().cloned())?;
        let mut ids = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if ids.insert(n.id, i).is_some() {
                return Err(Error::Malformed(format!("duplicate node id {}", n.id)));
            }
        }
        let lookup = |id: u64| {
            ids.get(&id)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("unknown node id {id}")))
        };
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let children = n
                .children
                .iter()
                .map(|&(e, t)| Ok((e, lookup(t)?)))
                .collect::<Result<Vec<_>>>()?;
            nodes.push(Node::with_children(Label::parse(&n.label), children));
        }
        let roots = self
            .roots
            .iter()
            .map(|&r| lookup(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(ForestGraph::new(alphabet, nodes, roots))
    }
}

impl ForestGraph {
    pub fn from_json(text: &str) -> Result<ForestGraph> {
        let file: ForestFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        file.to_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ForestFile::from_graph(self)).expect("forest serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_forest_term;
    use super::*;

    #[test]
    fn json_round_trip_keeps_forest() {
        let g = parse_forest_term("a(b + c, 0, x0) + b", None).unwrap();
        let back = ForestGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.canonical_key(), g.canonical_key());
        assert_eq!(back.arity(), 1);
    }

    #[test]
    fn unknown_ids_rejected() {
        let text = r#"{"alphabet":[["a",1]],"roots":[7],"nodes":[{"id":0,"label":"a"}]}"#;
        assert!(ForestGraph::from_json(text).is_err());
    }
}
