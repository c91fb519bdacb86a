//! The graph of K-types of `𝕋^k` and the transition data between adjacent
//! summands.
//!
//! An edge `src → dst` carries `x`, half the difference of the `∇*∇`
//! eigenvalues, and induces the ratio `μ_dst / μ_src = (x + r)/(x − r)` of
//! intertwinor eigenvalues.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactScalar, LinearFactorForm};
use crate::weights::{
    branches, bundle_weight, check_bundle, is_dominant, make_ktype_weight, KTypeId, Sign,
    WeightError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(transparent)]
    Range(#[from] WeightError),
    #[error("{src} and {dst} are not adjacent K-types")]
    NotAdjacent { src: KTypeId, dst: KTypeId },
    #[error("edge index {0} out of range")]
    NoSuchEdge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionEdge {
    pub src: KTypeId,
    pub dst: KTypeId,
    pub x: ExactScalar,
}

impl TransitionEdge {
    /// `(x + r)/(x − r)`, or `None` at the pole `r = x`.
    pub fn quantity(&self, r: &ExactScalar) -> Option<ExactScalar> {
        transition_quantity(&self.x, r)
    }

    pub fn symbolic_quantity(&self) -> LinearFactorForm {
        LinearFactorForm::transition(&self.x)
    }
}

pub fn transition_quantity(x: &ExactScalar, r: &ExactScalar) -> Option<ExactScalar> {
    (x + r).checked_div(&(x - r)).ok()
}

/// All summand labels with `j ≤ jmax`, ordered by `j`, then `q`, then `ε`
/// with `+1` first.
pub fn enumerate_ktypes(n: u32, k: u32, jmax: u32) -> Result<Vec<KTypeId>, GraphError> {
    check_bundle(n, k)?;
    let qs: &[Option<u8>] = if k == 0 { &[None] } else { &[Some(0), Some(1)] };
    let mut out = Vec::with_capacity((jmax as usize + 1) * qs.len() * 2);
    for j in 0..=jmax {
        for &q in qs {
            for eps in Sign::BOTH {
                out.push(KTypeId::new(n, k, j, q, eps)?);
            }
        }
    }
    Ok(out)
}

fn half_n(n: u32) -> ExactScalar {
    ExactScalar::frac(i64::from(n), 2)
}

/// `J = n/2 + j` for the spinor bundle, `L = n/2 + 1 + j` for `k ≥ 1`.
pub fn level(id: &KTypeId) -> ExactScalar {
    let shift = if id.k == 0 { 0 } else { 1 };
    half_n(id.n) + ExactScalar::from_int(i64::from(id.j) + shift)
}

/// `n/2 − k + 1/2`, the datum of the `q: 0 → 1` transition.
pub fn toggle_datum(n: u32, k: u32) -> ExactScalar {
    half_n(n) - ExactScalar::from_int(i64::from(k)) + ExactScalar::half()
}

/// The transition datum `x` for adjacent K-types, so that
/// `μ_dst / μ_src = (x + r)/(x − r)`.
pub fn edge_datum(src: &KTypeId, dst: &KTypeId) -> Result<ExactScalar, GraphError> {
    let not_adjacent = || GraphError::NotAdjacent {
        src: *src,
        dst: *dst,
    };
    if src.n != dst.n || src.k != dst.k {
        return Err(not_adjacent());
    }
    let same_j = src.j == dst.j;
    let same_q = src.q == dst.q;
    let same_eps = src.eps == dst.eps;
    let half = ExactScalar::half();
    if same_q && same_eps && dst.j == src.j + 1 {
        Ok(level(src) + half)
    } else if same_q && same_eps && dst.j + 1 == src.j {
        Ok(-(level(src) - half))
    } else if same_j && same_q && !same_eps {
        Ok(ExactScalar::zero())
    } else if same_j && same_eps {
        match (src.q, dst.q) {
            (Some(0), Some(1)) => Ok(toggle_datum(src.n, src.k)),
            (Some(1), Some(0)) => Ok(-toggle_datum(src.n, src.k)),
            _ => Err(not_adjacent()),
        }
    } else {
        Err(not_adjacent())
    }
}

/// Candidate neighbours in the fixed order up, down, ε-flip, q-toggle.
/// Labels with `j < 0` are never produced: they are not summands (the
/// weight is either non-dominant or fails to contain the bundle weight).
fn neighbour_candidates(id: &KTypeId) -> Vec<KTypeId> {
    let mut out = vec![id.with_j(id.j + 1)];
    if id.j > 0 {
        out.push(id.with_j(id.j - 1));
    }
    out.push(id.with_eps(id.eps.flip()));
    if let Some(q) = id.q {
        out.push(id.with_q(1 - q));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct KTypeGraph {
    n: u32,
    k: u32,
    jmax: u32,
    nodes: Vec<KTypeId>,
    edges: Vec<TransitionEdge>,
    base: KTypeId,
    #[serde(skip)]
    index: HashMap<KTypeId, usize>,
    #[serde(skip)]
    outgoing: Vec<Vec<usize>>,
}

/// Normalization node: `V_+(0)` for `k = 0`, `V_+(0, 1)` otherwise.
pub fn base_node(n: u32, k: u32) -> Result<KTypeId, GraphError> {
    let q = if k == 0 { None } else { Some(1) };
    Ok(KTypeId::new(n, k, 0, q, Sign::Plus)?)
}

pub fn build_graph(n: u32, k: u32, jmax: u32) -> Result<KTypeGraph, GraphError> {
    let nodes = enumerate_ktypes(n, k, jmax)?;
    let mut edges = Vec::new();
    for src in &nodes {
        for dst in neighbour_candidates(src) {
            if dst.j > jmax {
                continue;
            }
            let x = edge_datum(src, &dst)?;
            edges.push(TransitionEdge { src: *src, dst, x });
        }
    }
    Ok(KTypeGraph::assemble(
        n,
        k,
        jmax,
        nodes,
        edges,
        base_node(n, k)?,
    ))
}

impl KTypeGraph {
    fn assemble(
        n: u32,
        k: u32,
        jmax: u32,
        nodes: Vec<KTypeId>,
        edges: Vec<TransitionEdge>,
        base: KTypeId,
    ) -> Self {
        let index: HashMap<KTypeId, usize> =
            nodes.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let mut outgoing = vec![Vec::new(); nodes.len()];
        for (e, edge) in edges.iter().enumerate() {
            outgoing[index[&edge.src]].push(e);
        }
        Self {
            n,
            k,
            jmax,
            nodes,
            edges,
            base,
            index,
            outgoing,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn jmax(&self) -> u32 {
        self.jmax
    }

    pub fn nodes(&self) -> &[KTypeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[TransitionEdge] {
        &self.edges
    }

    pub fn base(&self) -> &KTypeId {
        &self.base
    }

    pub fn node_index(&self, id: &KTypeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Indices of edges leaving node `i`.
    pub fn outgoing(&self, i: usize) -> &[usize] {
        &self.outgoing[i]
    }

    /// Index of the edge `src → dst`, if present.
    pub fn find_edge(&self, src: &KTypeId, dst: &KTypeId) -> Option<usize> {
        let i = self.node_index(src)?;
        self.outgoing[i]
            .iter()
            .copied()
            .find(|&e| self.edges[e].dst == *dst)
    }

    /// Copy of the graph with one edge datum shifted by `delta`. Only the
    /// given direction is changed.
    pub fn perturbed(&self, edge: usize, delta: &ExactScalar) -> Result<Self, GraphError> {
        let mut edges = self.edges.clone();
        let e = edges.get_mut(edge).ok_or(GraphError::NoSuchEdge(edge))?;
        e.x = &e.x + delta;
        Ok(Self::assemble(
            self.n,
            self.k,
            self.jmax,
            self.nodes.clone(),
            edges,
            self.base,
        ))
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.node_index(&self.base) else {
            return false;
        };
        let mut seen = vec![false; self.nodes.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &e in &self.outgoing[u] {
                let v = self.index[&self.edges[e].dst];
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.nodes.len()
    }

    /// Edges whose reverse is missing or does not carry the negated datum.
    pub fn reversal_violations(&self) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| match self.find_edge(&e.dst, &e.src) {
                Some(rev) => self.edges[rev].x != -&e.x,
                None => true,
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Every node's weight is a dominant Spin(n+1) weight containing the
    /// bundle's Spin(n) weight.
    pub fn nodes_are_summands(&self) -> Result<bool, GraphError> {
        let lambda = bundle_weight(self.n, self.k)?;
        for id in &self.nodes {
            let alpha = make_ktype_weight(id)?;
            if !is_dominant(&alpha, false) || !branches(&alpha, &lambda, self.n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
