//! Propagation of intertwinor eigenvalues over a [`KTypeGraph`].
//!
//! Values are pushed out from the normalization node along a breadth-first
//! spanning tree using `μ_dst = μ_src · (x + r)/(x − r)`. Every edge left
//! off the tree is then checked against the un-divided relation
//! `(x + r) μ_src = (x − r) μ_dst`, so a single bad datum anywhere in the
//! graph is reported.

use std::collections::VecDeque;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{ExactScalar, LinearFactorForm};
use crate::ktype_graph::{GraphError, KTypeGraph, TransitionEdge};
use crate::weights::KTypeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecursionError {
    #[error("pole on edge {} -> {} (x = {}) at r = {r}", edge.src, edge.dst, edge.x)]
    PoleEncountered {
        edge: Box<TransitionEdge>,
        r: ExactScalar,
    },
    #[error("inconsistent transition data around cycle {}", fmt_cycle(cycle))]
    Inconsistent { cycle: Vec<KTypeId> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn fmt_cycle(cycle: &[KTypeId]) -> String {
    cycle
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// Eigenvalues of one intertwinor on every node of a graph.
///
/// `r` is `None` for symbolic tables, whose values are functions of `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueTable<V> {
    r: Option<ExactScalar>,
    entries: Vec<(KTypeId, V)>,
}

impl<V> EigenvalueTable<V> {
    pub fn r(&self) -> Option<&ExactScalar> {
        self.r.as_ref()
    }

    pub fn entries(&self) -> &[(KTypeId, V)] {
        &self.entries
    }

    pub fn get(&self, id: &KTypeId) -> Option<&V> {
        self.entries.iter().find(|(k, _)| k == id).map(|(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Serialize)]
struct Row<'a, V> {
    node: &'a KTypeId,
    mu: &'a V,
}

impl<V: Serialize> Serialize for EigenvalueTable<V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Row<'_, V>> = self
            .entries
            .iter()
            .map(|(node, mu)| Row { node, mu })
            .collect();
        let mut st = serializer.serialize_struct("EigenvalueTable", 2)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

/// Breadth-first spanning tree rooted at the graph's base node.
struct SpanningTree {
    order: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    is_tree_edge: Vec<bool>,
}

impl SpanningTree {
    fn new(graph: &KTypeGraph) -> Self {
        let n = graph.nodes().len();
        let root = graph.node_index(graph.base()).expect("base is a node");
        let mut parent_edge = vec![None; n];
        let mut seen = vec![false; n];
        let mut is_tree_edge = vec![false; graph.edges().len()];
        let mut order = vec![root];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &e in graph.outgoing(u) {
                let v = graph
                    .node_index(&graph.edges()[e].dst)
                    .expect("edge endpoints are nodes");
                if !seen[v] {
                    seen[v] = true;
                    parent_edge[v] = Some(e);
                    is_tree_edge[e] = true;
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        Self {
            order,
            parent_edge,
            is_tree_edge,
        }
    }

    fn path_to_root(&self, graph: &KTypeGraph, mut v: usize) -> Vec<usize> {
        let mut path = vec![v];
        while let Some(e) = self.parent_edge[v] {
            v = graph.node_index(&graph.edges()[e].src).expect("node");
            path.push(v);
        }
        path
    }

    /// Nodes of the cycle `u → v` (along `edge`) then back to `u` through
    /// the tree.
    fn cycle_nodes(&self, graph: &KTypeGraph, edge: usize) -> Vec<KTypeId> {
        let e = &graph.edges()[edge];
        let u = graph.node_index(&e.src).expect("node");
        let v = graph.node_index(&e.dst).expect("node");
        let pu = self.path_to_root(graph, u);
        let pv = self.path_to_root(graph, v);
        // strip the common suffix except for the lowest common ancestor
        let mut common = 0;
        while common < pu.len().min(pv.len())
            && pu[pu.len() - 1 - common] == pv[pv.len() - 1 - common]
        {
            common += 1;
        }
        let up_from_v = &pv[..pv.len() - common + 1];
        let down_to_u = &pu[..pu.len() - common];
        let mut nodes = vec![u];
        nodes.extend(up_from_v.iter().copied());
        nodes.extend(down_to_u.iter().rev().copied());
        nodes.into_iter().map(|i| graph.nodes()[i]).collect()
    }
}

/// Eigenvalues at a fixed `r`, normalized to 1 on the base node.
pub fn solve(
    graph: &KTypeGraph,
    r: &ExactScalar,
) -> Result<EigenvalueTable<ExactScalar>, RecursionError> {
    let tree = SpanningTree::new(graph);
    let mu = propagate_numeric(graph, &tree, r)?;
    for (e, edge) in graph.edges().iter().enumerate() {
        if tree.is_tree_edge[e] {
            continue;
        }
        let a = &mu[graph.node_index(&edge.src).expect("node")];
        let b = &mu[graph.node_index(&edge.dst).expect("node")];
        if (&edge.x + r) * a != (&edge.x - r) * b {
            return Err(RecursionError::Inconsistent {
                cycle: tree.cycle_nodes(graph, e),
            });
        }
    }
    Ok(EigenvalueTable {
        r: Some(r.clone()),
        entries: graph.nodes().iter().copied().zip(mu).collect(),
    })
}

fn propagate_numeric(
    graph: &KTypeGraph,
    tree: &SpanningTree,
    r: &ExactScalar,
) -> Result<Vec<ExactScalar>, RecursionError> {
    let mut mu = vec![ExactScalar::zero(); graph.nodes().len()];
    mu[tree.order[0]] = ExactScalar::one();
    for &v in &tree.order[1..] {
        let e = tree.parent_edge[v].expect("non-root nodes have a parent");
        let edge = &graph.edges()[e];
        let quantity = edge
            .quantity(r)
            .ok_or_else(|| RecursionError::PoleEncountered {
                edge: Box::new(edge.clone()),
                r: r.clone(),
            })?;
        let u = graph.node_index(&edge.src).expect("node");
        mu[v] = &mu[u] * quantity;
    }
    Ok(mu)
}

/// Eigenvalues as functions of `r`, each a product of linear factors.
pub fn solve_symbolic(
    graph: &KTypeGraph,
) -> Result<EigenvalueTable<LinearFactorForm>, RecursionError> {
    let tree = SpanningTree::new(graph);
    let mut mu = vec![LinearFactorForm::one(); graph.nodes().len()];
    for &v in &tree.order[1..] {
        let edge = &graph.edges()[tree.parent_edge[v].expect("parent")];
        let u = graph.node_index(&edge.src).expect("node");
        mu[v] = mu[u].mul(&edge.symbolic_quantity());
    }
    for (e, edge) in graph.edges().iter().enumerate() {
        if tree.is_tree_edge[e] {
            continue;
        }
        let a = &mu[graph.node_index(&edge.src).expect("node")];
        let b = &mu[graph.node_index(&edge.dst).expect("node")];
        if a.mul(&edge.symbolic_quantity()) != *b {
            return Err(RecursionError::Inconsistent {
                cycle: tree.cycle_nodes(graph, e),
            });
        }
    }
    Ok(EigenvalueTable {
        r: None,
        entries: graph.nodes().iter().copied().zip(mu).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleRecord {
    pub nodes: Vec<KTypeId>,
    pub product: ExactScalar,
}

impl CycleRecord {
    pub fn is_trivial(&self) -> bool {
        self.product.is_one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub r: ExactScalar,
    pub cycles: Vec<CycleRecord>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.cycles.iter().all(CycleRecord::is_trivial)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CycleRecord> {
        self.cycles.iter().filter(|c| !c.is_trivial())
    }
}

/// Transition-quantity products around the fundamental cycle of every
/// directed edge outside the spanning tree. The reverse of a tree edge
/// gives the two-edge cycle `u → v → u`.
///
/// `r` must avoid every edge datum; a pole is returned as an error.
pub fn check_consistency(
    graph: &KTypeGraph,
    r: &ExactScalar,
) -> Result<ConsistencyReport, RecursionError> {
    let tree = SpanningTree::new(graph);
    // root-to-node products of tree quantities
    let prefix = propagate_numeric(graph, &tree, r)?;
    let mut cycles = Vec::new();
    for (e, edge) in graph.edges().iter().enumerate() {
        if tree.is_tree_edge[e] {
            continue;
        }
        let quantity = edge
            .quantity(r)
            .ok_or_else(|| RecursionError::PoleEncountered {
                edge: Box::new(edge.clone()),
                r: r.clone(),
            })?;
        let u = graph.node_index(&edge.src).expect("node");
        let v = graph.node_index(&edge.dst).expect("node");
        // back from v to u through the tree contributes prefix[u] / prefix[v]
        let back =
            prefix[u]
                .checked_div(&prefix[v])
                .map_err(|_| RecursionError::PoleEncountered {
                    edge: Box::new(edge.clone()),
                    r: r.clone(),
                })?;
        cycles.push(CycleRecord {
            nodes: tree.cycle_nodes(graph, e),
            product: quantity * back,
        });
    }
    Ok(ConsistencyReport {
        r: r.clone(),
        cycles,
    })
}
