//! Critical points plus the point at infinity, joined by connecting orbits.

use alloc::vec::Vec;

use crate::flow::{CriticalKind, CriticalPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRef {
    Point(usize),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphNode {
    /// Stable id: index of the point in the originating critical-point list.
    pub id: usize,
    pub point: CriticalPoint,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: NodeRef,
    pub multiplicity: u32,
    /// Set when the edge was rerouted by a graph-level move and not re-derived from flow data.
    pub stale: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConnectionGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<Edge>,
}

impl ConnectionGraph {
    pub fn from_points(points: &[CriticalPoint]) -> Self {
        let nodes = points.iter().enumerate().map(|(id, &point)| GraphNode { id, point }).collect();
        ConnectionGraph { nodes, edges: Vec::new() }
    }

    pub fn node(&self, id: usize) -> Option<&GraphNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn kind(&self, id: usize) -> Option<CriticalKind> {
        self.node(id).map(|n| n.point.kind)
    }

    pub fn ids_of(&self, kind: CriticalKind) -> Vec<usize> {
        self.nodes.iter().filter(|n| n.point.kind == kind).map(|n| n.id).collect()
    }

    pub fn sources(&self) -> Vec<usize> {
        self.ids_of(CriticalKind::Source)
    }

    pub fn sinks(&self) -> Vec<usize> {
        self.ids_of(CriticalKind::Sink)
    }

    pub fn saddles(&self) -> Vec<usize> {
        self.ids_of(CriticalKind::Saddle)
    }

    /// `|A|`: sources plus sinks.
    pub fn count_a(&self) -> usize {
        self.sources().len() + self.sinks().len()
    }

    /// `|B|`: saddles.
    pub fn count_b(&self) -> usize {
        self.saddles().len()
    }

    /// Adds `multiplicity` to the edge `from → to`, creating it if needed.
    pub fn add_edge(&mut self, from: usize, to: NodeRef, multiplicity: u32) {
        if multiplicity == 0 {
            return;
        }
        match self.edges.iter_mut().find(|e| e.from == from && e.to == to) {
            Some(e) => e.multiplicity += multiplicity,
            None => self.edges.push(Edge { from, to, multiplicity, stale: false }),
        }
    }

    pub fn multiplicity(&self, from: usize, to: NodeRef) -> u32 {
        self.edges.iter().filter(|e| e.from == from && e.to == to).map(|e| e.multiplicity).sum()
    }

    pub fn out_edges(&self, from: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.from == from)
    }

    pub fn sort_edges(&mut self) {
        self.edges.sort_by_key(|e| (e.from, e.to));
    }

    pub fn value(&self, id: usize) -> Option<f64> {
        self.node(id).map(|n| n.point.value)
    }
}
