use num_rational::Rational64;

use super::{EdgeLabel, EscapeGeometry, Graph, GraphFamily, VertexId};

/// The edge-reversal of a family: out- and in-edges trade places. Vertex
/// set, classes, weights and degree bound are shared with the original.
#[derive(Debug)]
pub struct Reversed {
    inner: Graph,
    name: String,
}

impl Reversed {
    pub fn new(inner: Graph) -> Self {
        let name = match inner.name().strip_prefix("reversed-") {
            Some(base) => base.to_string(),
            None => format!("reversed-{}", inner.name()),
        };
        Reversed { inner, name }
    }

    pub fn inner(&self) -> &Graph {
        &self.inner
    }
}

impl GraphFamily for Reversed {
    fn name(&self) -> &str {
        &self.name
    }
    fn origin(&self) -> VertexId {
        self.inner.origin()
    }
    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }
    fn is_undirected(&self) -> bool {
        self.inner.is_undirected()
    }
    fn is_unimodular(&self) -> bool {
        self.inner.is_unimodular()
    }
    fn representatives(&self) -> Vec<VertexId> {
        self.inner.representatives()
    }
    fn class_of(&self, v: VertexId) -> usize {
        self.inner.class_of(v)
    }
    fn contains(&self, v: VertexId) -> bool {
        self.inner.contains(v)
    }
    fn push_out_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        self.inner.push_in_neighbors(v, out)
    }
    fn push_in_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        self.inner.push_out_neighbors(v, out)
    }
    fn weight(&self, v: VertexId) -> Rational64 {
        self.inner.weight(v)
    }
    fn girth(&self) -> Option<usize> {
        self.inner.girth()
    }
    fn escape_geometry(&self) -> EscapeGeometry {
        self.inner.escape_geometry()
    }
    fn is_reversed(&self) -> bool {
        !self.inner.is_reversed()
    }
    fn push_tree_neighbors(&self, v: VertexId, out: &mut Vec<VertexId>) {
        self.inner.push_tree_neighbors(v, out)
    }
    fn first_step_symmetric(&self, v: VertexId) -> bool {
        self.inner.is_undirected() && self.inner.first_step_symmetric(v)
    }
    fn describe(&self, v: VertexId) -> String {
        self.inner.describe(v)
    }
}
