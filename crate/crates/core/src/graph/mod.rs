//! Infinite, locally finite, strongly connected, quasi-transitive directed
//! graphs, represented intensionally by neighbour generators.
//!
//! Nothing here is ever materialised: every algorithm in the crate touches a
//! finite window of a graph by calling [`GraphFamily::push_out_neighbors`] and
//! [`GraphFamily::push_in_neighbors`] on the vertices it reaches.

mod grandparent;
mod lattice;
pub mod registry;
mod reversed;
mod tree;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use serde::Serialize;

pub use grandparent::GrandparentGraph;
pub use lattice::{
    CubicLattice, DecoratedSquare, Ladder, OrientedLadder, SquareLattice, TriangularLattice,
};
pub use reversed::Reversed;
pub use tree::RegularTree;

use crate::error::{Error, Result};

/// Canonical coordinates of a vertex. The meaning of the three slots is
/// fixed by the family; equal vertices always have equal encodings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct VertexId(pub [i64; 3]);

impl VertexId {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        VertexId([a, b, c])
    }

    pub const fn planar(x: i64, y: i64) -> Self {
        VertexId([x, y, 0])
    }

    pub fn coords(&self) -> [i64; 3] {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Index of an out-edge (or in-edge) at a vertex: `0..degree` in the order
/// fixed by the family.
pub type EdgeLabel = u8;

/// Which vertices of an escape frame count as exits to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SinkRule {
    /// Every vertex on the boundary of the box.
    Boundary,
    /// Boundary vertices whose coordinates are all even (the lattice
    /// vertices of the decorated square lattice in doubled coordinates).
    EvenBoundary,
    /// Both vertices of the two extreme columns of a ladder.
    LadderEnds,
    /// Forward: `(hi, 0)` and `(lo, 1)`; backward: `(lo, 0)` and `(hi, 1)`.
    OrientedLadderEnds,
}

/// How exact extendability certificates are built for a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EscapeGeometry {
    None,
    /// Vertex coordinates are an embedding in Z^d; frames are boxes over the
    /// first `box_dims` coordinates.
    Lattice {
        box_dims: usize,
        rule: SinkRule,
    },
    /// The family has a spanning regular tree of degree >= 3 whose edges are
    /// present in both directions, and every other edge joins vertices at
    /// tree distance at most 2.
    Tree,
}

/// A lazily evaluated infinite directed graph.
pub trait GraphFamily: Send + Sync + fmt::Debug {
    /// The CLI name of the family.
    fn name(&self) -> &str;

    fn origin(&self) -> VertexId;

    /// Bound on both in- and out-degree.
    fn max_degree(&self) -> usize;

    fn is_undirected(&self) -> bool;

    fn is_unimodular(&self) -> bool;

    /// One vertex per transitivity class; `class_of(representatives()[i]) == i`.
    fn representatives(&self) -> Vec<VertexId>;

    fn class_of(&self, v: VertexId) -> usize;

    /// Whether `v` is a well-formed vertex encoding.
    fn contains(&self, v: VertexId) -> bool;

    /// Appends the out-edges of a valid vertex, in label order.
    fn push_out_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>);

    /// Appends the in-edges of a valid vertex as `(label, source)`, where the
    /// label indexes the in-edges of `v`.
    fn push_in_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>);

    /// The weight function, normalised so that the origin's class is
    /// representative-consistent.
    fn weight(&self, v: VertexId) -> Rational64;

    /// Length of the shortest cycle of the underlying undirected simple
    /// graph, ignoring the 2-cycles formed by edge pairs. `None` for trees.
    fn girth(&self) -> Option<usize>;

    fn escape_geometry(&self) -> EscapeGeometry {
        EscapeGeometry::None
    }

    /// True when this value is an edge-reversal of its family, in which case
    /// forward and backward escape sinks trade places.
    fn is_reversed(&self) -> bool {
        false
    }

    /// Neighbours in the spanning tree, for [`EscapeGeometry::Tree`] families.
    fn push_tree_neighbors(&self, _v: VertexId, _out: &mut Vec<VertexId>) {}

    /// Whether the automorphisms fixing `v` act transitively on its
    /// out-edges, so that walk counts from `v` split evenly by first step.
    fn first_step_symmetric(&self, _v: VertexId) -> bool {
        false
    }

    /// Human-readable form of a vertex.
    fn describe(&self, v: VertexId) -> String {
        v.to_string()
    }
}

pub type Graph = Arc<dyn GraphFamily>;

fn check_vertex(g: &dyn GraphFamily, v: VertexId) -> Result<()> {
    if g.contains(v) {
        Ok(())
    } else {
        Err(Error::InvalidVertex {
            family: g.name().to_string(),
            vertex: v,
        })
    }
}

pub fn out_neighbors(g: &dyn GraphFamily, v: VertexId) -> Result<Vec<(EdgeLabel, VertexId)>> {
    check_vertex(g, v)?;
    let mut out = Vec::with_capacity(g.max_degree());
    g.push_out_neighbors(v, &mut out);
    Ok(out)
}

pub fn in_neighbors(g: &dyn GraphFamily, v: VertexId) -> Result<Vec<(EdgeLabel, VertexId)>> {
    check_vertex(g, v)?;
    let mut out = Vec::with_capacity(g.max_degree());
    g.push_in_neighbors(v, &mut out);
    Ok(out)
}

/// Edge reversal. Reversing twice yields a graph observationally equal to the
/// original.
pub fn reverse(g: &Graph) -> Graph {
    Arc::new(Reversed::new(g.clone()))
}

/// Neighbours ignoring orientation, deduplicated, in first-seen order.
pub fn undirected_neighbors(
    g: &dyn GraphFamily,
    v: VertexId,
    buf: &mut Vec<(EdgeLabel, VertexId)>,
) -> Vec<VertexId> {
    buf.clear();
    g.push_out_neighbors(v, buf);
    g.push_in_neighbors(v, buf);
    let mut seen = Vec::with_capacity(buf.len());
    for &(_, u) in buf.iter() {
        if !seen.contains(&u) {
            seen.push(u);
        }
    }
    seen
}

/// Shortest-path distance with edges directed arbitrarily, or `None` if it
/// exceeds `cap`.
pub fn undirected_distance(
    g: &dyn GraphFamily,
    u: VertexId,
    v: VertexId,
    cap: usize,
) -> Option<usize> {
    if u == v {
        return Some(0);
    }
    let mut seen = HashSet::new();
    seen.insert(u);
    let mut frontier = vec![u];
    let mut buf = Vec::new();
    for d in 1..=cap {
        let mut next = Vec::new();
        for &x in &frontier {
            for y in undirected_neighbors(g, x, &mut buf) {
                if y == v {
                    return Some(d);
                }
                if seen.insert(y) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    None
}

/// All vertices within undirected distance `radius` of `center`, with their
/// distances, in BFS order.
pub fn ball(g: &dyn GraphFamily, center: VertexId, radius: usize) -> Vec<(VertexId, usize)> {
    let mut seen = HashSet::new();
    seen.insert(center);
    let mut order = vec![(center, 0)];
    let mut queue = VecDeque::from([(center, 0usize)]);
    let mut buf = Vec::new();
    while let Some((x, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for y in undirected_neighbors(g, x, &mut buf) {
            if seen.insert(y) {
                order.push((y, d + 1));
                queue.push_back((y, d + 1));
            }
        }
    }
    order
}

/// Whether a directed path `from -> to` exists using only vertices within
/// undirected distance `radius` of `from`.
pub fn directed_path_within(
    g: &dyn GraphFamily,
    from: VertexId,
    to: VertexId,
    radius: usize,
) -> bool {
    let allowed: HashSet<VertexId> = ball(g, from, radius).into_iter().map(|(v, _)| v).collect();
    let mut seen = HashSet::from([from]);
    let mut queue = VecDeque::from([from]);
    let mut buf = Vec::new();
    while let Some(x) = queue.pop_front() {
        if x == to {
            return true;
        }
        buf.clear();
        g.push_out_neighbors(x, &mut buf);
        for &(_, y) in &buf {
            if allowed.contains(&y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    false
}
