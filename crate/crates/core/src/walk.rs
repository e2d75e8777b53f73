use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, GraphFamily, VertexId};

/// A finite directed walk: `vertices.len() == edges.len() + 1`, and
/// `edges[i]` is the out-label at `vertices[i]` of an edge to `vertices[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeLabel>,
}

/// Borrowed view of a walk, handed to enumeration visitors.
#[derive(Clone, Copy, Debug)]
pub struct WalkRef<'a> {
    pub vertices: &'a [VertexId],
    pub edges: &'a [EdgeLabel],
}

impl<'a> WalkRef<'a> {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn to_walk(&self) -> Walk {
        Walk {
            vertices: self.vertices.to_vec(),
            edges: self.edges.to_vec(),
        }
    }
}

impl Walk {
    pub fn trivial(v: VertexId) -> Self {
        Walk {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn as_ref(&self) -> WalkRef<'_> {
        WalkRef {
            vertices: &self.vertices,
            edges: &self.edges,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("walk has at least one vertex")
    }

    /// Builds a walk from its vertex sequence, taking the lowest label of an
    /// edge between consecutive vertices.
    pub fn from_vertices(g: &dyn GraphFamily, vertices: Vec<VertexId>) -> Result<Walk> {
        if vertices.is_empty() {
            return Err(invalid(g, "empty vertex sequence".into()));
        }
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        let mut buf = Vec::new();
        for (i, pair) in vertices.windows(2).enumerate() {
            buf.clear();
            g.push_out_neighbors(pair[0], &mut buf);
            let label = buf
                .iter()
                .find(|&&(_, v)| v == pair[1])
                .map(|&(l, _)| l)
                .ok_or_else(|| {
                    invalid(
                        g,
                        format!("no edge {} -> {} at step {}", pair[0], pair[1], i + 1),
                    )
                })?;
            edges.push(label);
        }
        let walk = Walk { vertices, edges };
        walk.validate(g)?;
        Ok(walk)
    }

    /// Checks vertex validity, edge labels and self-avoidance.
    pub fn validate(&self, g: &dyn GraphFamily) -> Result<()> {
        if self.vertices.len() != self.edges.len() + 1 {
            return Err(invalid(g, "vertex and edge counts disagree".into()));
        }
        let mut seen = HashSet::with_capacity(self.vertices.len());
        let mut buf = Vec::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            if !g.contains(v) {
                return Err(Error::InvalidVertex {
                    family: g.name().to_string(),
                    vertex: v,
                });
            }
            if !seen.insert(v) {
                return Err(invalid(g, format!("not a SAW at step {i}")));
            }
            if i < self.edges.len() {
                buf.clear();
                g.push_out_neighbors(v, &mut buf);
                let ok = buf
                    .iter()
                    .any(|&(l, u)| l == self.edges[i] && u == self.vertices[i + 1]);
                if !ok {
                    return Err(invalid(
                        g,
                        format!(
                            "edge label {} at step {} does not lead to {}",
                            self.edges[i],
                            i + 1,
                            self.vertices[i + 1]
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The same vertices traversed in the opposite order, using the edges of
    /// `g` (for an undirected family, or for `g` the reversal of the walk's
    /// graph).
    pub fn reversed_in(&self, g: &dyn GraphFamily) -> Result<Walk> {
        Walk::from_vertices(g, self.vertices.iter().rev().copied().collect())
    }

    pub fn sub_walk(&self, from: usize, to: usize) -> Walk {
        Walk {
            vertices: self.vertices[from..=to].to_vec(),
            edges: self.edges[from..to].to_vec(),
        }
    }
}

fn invalid(g: &dyn GraphFamily, reason: String) -> Error {
    Error::InvalidWalk {
        family: g.name().to_string(),
        reason,
    }
}
