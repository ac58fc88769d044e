//! Discrete Bayesian networks: structure, parameters, the forward map and
//! marginalization onto observed nodes.

mod dsep;
mod params;
mod table;

pub use dsep::{d_separated, local_markov_statements, CIStatement};
pub use params::{sample_parameters, ParameterAssignment};
pub use table::{forward_map, marginalize, observable_distribution, AnyTable, JointTable, ObservableTable, Table};

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shape::Shape;
use crate::FORMAT_TAG;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub name: String,
    pub card: usize,
    /// Parent node indices, ascending.
    pub parents: Vec<usize>,
    pub hidden: bool,
}

/// A DAG over named discrete nodes with cardinalities and a hidden/observed
/// split. Node order is document order and drives every multi-index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkSpec {
    nodes: Vec<Node>,
    children: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    name: String,
    card: usize,
    #[serde(default)]
    parents: Vec<String>,
    #[serde(default)]
    hidden: bool,
}

#[derive(Serialize, Deserialize)]
struct NetworkDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    nodes: Vec<NodeDoc>,
}

impl NetworkSpec {
    /// Validates and builds a network. Parent lists are sorted and deduplicated.
    pub fn new(mut nodes: Vec<Node>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, node) in nodes.iter().enumerate() {
            if seen.insert(node.name.as_str(), i).is_some() {
                return Err(Error::DuplicateName(node.name.clone()));
            }
            if node.card < 2 {
                return Err(Error::Cardinality {
                    node: node.name.clone(),
                    card: node.card,
                });
            }
        }
        let n = nodes.len();
        for node in &mut nodes {
            node.parents.sort_unstable();
            node.parents.dedup();
            if let Some(&bad) = node.parents.iter().find(|&&p| p >= n) {
                return Err(Error::UnknownParent {
                    node: node.name.clone(),
                    parent: format!("#{bad}"),
                });
            }
        }
        let mut children = vec![Vec::new(); n];
        for (i, node) in nodes.iter().enumerate() {
            for &p in &node.parents {
                children[p].push(i);
            }
        }
        let net = Self { nodes, children };
        if let Some(v) = net.find_cycle_node() {
            return Err(Error::Cycle(net.nodes[v].name.clone()));
        }
        Ok(net)
    }

    /// Kahn's algorithm; returns some node left over when the graph is cyclic.
    fn find_cycle_node(&self) -> Option<usize> {
        let order = self.topo_order_partial();
        if order.len() == self.nodes.len() {
            return None;
        }
        let mut placed = vec![false; self.nodes.len()];
        for v in order {
            placed[v] = true;
        }
        placed.iter().position(|&p| !p)
    }

    fn topo_order_partial(&self) -> Vec<usize> {
        let mut indeg: Vec<usize> = self.nodes.iter().map(|n| n.parents.len()).collect();
        let mut queue: VecDeque<usize> = (0..self.nodes.len()).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        order
    }

    pub fn topological_order(&self) -> Vec<usize> {
        self.topo_order_partial()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.parents.len()).sum()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn parents(&self, i: usize) -> &[usize] {
        &self.nodes[i].parents
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn cards(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.card).collect()
    }

    pub fn observed(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.nodes[i].hidden).collect()
    }

    pub fn hidden(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.nodes[i].hidden).collect()
    }

    pub fn full_shape(&self) -> Shape {
        Shape::new(self.cards())
    }

    pub fn observed_shape(&self) -> Shape {
        Shape::new(self.observed().iter().map(|&i| self.nodes[i].card).collect())
    }

    pub fn observed_names(&self) -> Vec<String> {
        self.observed().iter().map(|&i| self.nodes[i].name.clone()).collect()
    }

    /// Shape of the parent configurations of node `i` (row-major over parents
    /// in ascending index order).
    pub fn parent_shape(&self, i: usize) -> Shape {
        Shape::new(self.nodes[i].parents.iter().map(|&p| self.nodes[p].card).collect())
    }

    /// Parent configuration of node `i` selected by a full multi-index.
    pub fn parent_config(&self, i: usize, full_index: &[usize]) -> usize {
        let mut j = 0;
        for &p in &self.nodes[i].parents {
            j = j * self.nodes[p].card + full_index[p];
        }
        j
    }

    /// Strict descendants of `i`.
    pub fn descendants(&self, i: usize) -> Vec<bool> {
        let mut mark = vec![false; self.len()];
        let mut stack: Vec<usize> = self.children[i].clone();
        while let Some(v) = stack.pop() {
            if !mark[v] {
                mark[v] = true;
                stack.extend_from_slice(&self.children[v]);
            }
        }
        mark
    }

    /// `seeds` together with all their ancestors.
    pub fn ancestors_of(&self, seeds: &[usize]) -> Vec<bool> {
        let mut mark = vec![false; self.len()];
        let mut stack = seeds.to_vec();
        while let Some(v) = stack.pop() {
            if !mark[v] {
                mark[v] = true;
                stack.extend_from_slice(&self.nodes[v].parents);
            }
        }
        mark
    }

    /// Number of free parameters: `Σ_i (r_i − 1) ∏_{l ∈ pa(i)} r_l`.
    pub fn standard_dimension(&self) -> usize {
        (0..self.len())
            .map(|i| (self.nodes[i].card - 1) * self.parent_shape(i).len())
            .sum()
    }

    /// `∏ r_i − 1` over every node, hidden ones included.
    pub fn complete_dimension(&self) -> usize {
        self.full_shape().len() - 1
    }

    /// `∏ r_i − 1` over the observed nodes only; the dimension of the simplex
    /// the observable distribution lives in.
    pub fn observable_complete_dimension(&self) -> usize {
        self.observed_shape().len() - 1
    }

    pub fn to_json(&self) -> String {
        let doc = NetworkDoc {
            format: Some(FORMAT_TAG.to_string()),
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    name: n.name.clone(),
                    card: n.card,
                    parents: n.parents.iter().map(|&p| self.nodes[p].name.clone()).collect(),
                    hidden: n.hidden,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("network serialization cannot fail")
    }
}

/// Parses a network document:
/// `{"format":"bnalg-v1","nodes":[{"name":..,"card":..,"parents":[..],"hidden":..}]}`.
pub fn parse_network(text: &str) -> Result<NetworkSpec> {
    let doc: NetworkDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(tag) = &doc.format {
        if tag != FORMAT_TAG {
            return Err(Error::Format(tag.clone()));
        }
    }
    let mut index = HashMap::new();
    for (i, n) in doc.nodes.iter().enumerate() {
        if index.insert(n.name.clone(), i).is_some() {
            return Err(Error::DuplicateName(n.name.clone()));
        }
    }
    let nodes = doc
        .nodes
        .iter()
        .map(|n| {
            let parents = n
                .parents
                .iter()
                .map(|p| {
                    index.get(p).copied().ok_or_else(|| Error::UnknownParent {
                        node: n.name.clone(),
                        parent: p.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Node {
                name: n.name.clone(),
                card: n.card,
                parents,
                hidden: n.hidden,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    NetworkSpec::new(nodes)
}

/// Shorthand used by the model constructors: `(name, card, parent names, hidden)`.
pub fn network_from_parts(parts: &[(&str, usize, &[&str], bool)]) -> Result<NetworkSpec> {
    let nodes = parts
        .iter()
        .map(|&(name, card, parents, hidden)| {
            let parents = parents
                .iter()
                .map(|p| {
                    parts
                        .iter()
                        .position(|q| q.0 == *p)
                        .ok_or_else(|| Error::UnknownParent {
                            node: name.to_string(),
                            parent: p.to_string(),
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Node {
                name: name.to_string(),
                card,
                parents,
                hidden,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    NetworkSpec::new(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = r#"{"format":"bnalg-v1","nodes":[
        {"name":"X1","card":2,"parents":["X3"],"hidden":false},
        {"name":"X2","card":2,"parents":["X1"],"hidden":false},
        {"name":"X3","card":2,"parents":[],"hidden":false}]}"#;

    #[test]
    fn parses_chain() {
        let net = parse_network(CHAIN).unwrap();
        assert_eq!(net.len(), 3);
        assert_eq!(net.edge_count(), 2);
        assert_eq!(net.parents(0), &[2]);
        assert_eq!(net.children(0), &[1]);
        assert!(net.hidden().is_empty());
    }

    #[test]
    fn parses_naive_bayes_hidden_flag() {
        let text = r#"{"nodes":[
            {"name":"H","card":2,"parents":[],"hidden":true},
            {"name":"X1","card":2,"parents":["H"]},
            {"name":"X2","card":2,"parents":["H"]},
            {"name":"X3","card":2,"parents":["H"]}]}"#;
        let net = parse_network(text).unwrap();
        assert!(net.node(0).hidden);
        assert_eq!(net.hidden(), vec![0]);
        assert_eq!(net.observed(), vec![1, 2, 3]);
    }

    #[test]
    fn rejects_bad_documents() {
        let self_loop = r#"{"nodes":[{"name":"X1","card":2,"parents":["X1"]}]}"#;
        let err = parse_network(self_loop).unwrap_err();
        assert!(err.to_string().contains("cycle detected"), "{err}");

        let two_cycle = r#"{"nodes":[{"name":"A","card":2,"parents":["B"]},{"name":"B","card":2,"parents":["A"]}]}"#;
        assert!(matches!(parse_network(two_cycle), Err(Error::Cycle(_))));

        let dup = r#"{"nodes":[{"name":"A","card":2},{"name":"A","card":3}]}"#;
        assert!(matches!(parse_network(dup), Err(Error::DuplicateName(_))));

        let card1 = r#"{"nodes":[{"name":"A","card":1}]}"#;
        assert!(matches!(parse_network(card1), Err(Error::Cardinality { .. })));

        let unknown = r#"{"nodes":[{"name":"A","card":2,"parents":["Z"]}]}"#;
        assert!(matches!(parse_network(unknown), Err(Error::UnknownParent { .. })));

        let tag = r#"{"format":"v0","nodes":[]}"#;
        assert!(matches!(parse_network(tag), Err(Error::Format(_))));

        assert!(matches!(parse_network("{nodes"), Err(Error::Parse(_))));
    }

    #[test]
    fn standard_dimension_examples() {
        let chain = |r1: usize, r2: usize, r3: usize| {
            network_from_parts(&[
                ("X1", r1, &["X3"], false),
                ("X2", r2, &["X1"], false),
                ("X3", r3, &[], false),
            ])
            .unwrap()
        };
        for (r1, r2, r3) in [(2, 2, 2), (3, 2, 4), (2, 5, 3)] {
            assert_eq!(
                chain(r1, r2, r3).standard_dimension(),
                (r1 - 1) * r3 + (r2 - 1) * r1 + (r3 - 1)
            );
        }
        let single = network_from_parts(&[("A", 2, &[], false)]).unwrap();
        assert_eq!(single.standard_dimension(), 1);

        // naive Bayes (3: 2,3,4): r Σ(r_i − 1) + r − 1
        let nb = network_from_parts(&[
            ("H", 3, &[], true),
            ("X1", 2, &["H"], false),
            ("X2", 3, &["H"], false),
            ("X3", 4, &["H"], false),
        ])
        .unwrap();
        assert_eq!(nb.standard_dimension(), 3 * (1 + 2 + 3) + 2);
    }

    #[test]
    fn complete_dimension_examples() {
        for (cards, expected) in [(vec![2, 2, 2], 7), (vec![3, 3, 2], 17), (vec![2, 3, 3, 2], 35)] {
            let nodes = cards
                .iter()
                .enumerate()
                .map(|(i, &c)| Node {
                    name: format!("X{i}"),
                    card: c,
                    parents: vec![],
                    hidden: false,
                })
                .collect();
            assert_eq!(NetworkSpec::new(nodes).unwrap().complete_dimension(), expected);
        }
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let net = parse_network(CHAIN).unwrap();
        assert_eq!(parse_network(&net.to_json()).unwrap(), net);
    }

    #[test]
    fn parent_config_is_row_major() {
        let net =
            network_from_parts(&[("A", 2, &[], false), ("B", 3, &[], false), ("C", 2, &["B", "A"], false)]).unwrap();
        assert_eq!(net.parents(2), &[0, 1]);
        assert_eq!(net.parent_shape(2).len(), 6);
        assert_eq!(net.parent_config(2, &[1, 2, 0]), 5);
        assert_eq!(net.parent_config(2, &[0, 1, 1]), 1);
    }
}
