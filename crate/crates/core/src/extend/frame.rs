//! Finite escape regions around a walk.
//!
//! A frame is a finite vertex set containing the walk together with a set
//! of sink vertices, chosen so that an infinite SAW leaving the walk must
//! hit a sink before it leaves the region, and so that from any sink (or
//! any two distinct sinks) there are continuations to infinity avoiding the
//! region's interior.
//!
//! Lattice families use a box over the embedding coordinates. Families with
//! a spanning regular tree use the vertices within tree distance `rho` of the
//! walk's tree hull; since no edge moves more than two tree steps, a path
//! leaving the hull first lands at tree distance `rho - 1` or `rho`, and both
//! shells are sinks.

use std::collections::{HashMap, VecDeque};

use crate::graph::{EscapeGeometry, GraphFamily, SinkRule, VertexId};

/// Direction of travel: along out-edges (forward escapes) or in-edges
/// (backward escapes, traced from the walk's start towards infinity).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Out,
    In,
}

#[derive(Debug)]
pub enum Frame {
    Box {
        lo: [i64; 3],
        hi: [i64; 3],
        dims: usize,
        rule: SinkRule,
        reversed: bool,
    },
    Tree {
        dist: HashMap<VertexId, usize>,
        rho: usize,
    },
}

impl Frame {
    /// Builds the frame for `vertices` with the given margin (box families)
    /// or shell radius (tree families). Returns `None` for families without
    /// escape geometry.
    pub fn around(g: &dyn GraphFamily, vertices: &[VertexId], margin: usize) -> Option<Frame> {
        match g.escape_geometry() {
            EscapeGeometry::None => None,
            EscapeGeometry::Lattice { box_dims, rule } => {
                let m = margin.max(1) as i64;
                let mut lo = [i64::MAX; 3];
                let mut hi = [i64::MIN; 3];
                for v in vertices {
                    for i in 0..box_dims {
                        lo[i] = lo[i].min(v.0[i]);
                        hi[i] = hi[i].max(v.0[i]);
                    }
                }
                for i in 0..box_dims {
                    lo[i] -= m;
                    hi[i] += m;
                    if rule == SinkRule::EvenBoundary {
                        lo[i] -= lo[i].rem_euclid(2);
                        hi[i] += hi[i].rem_euclid(2);
                    }
                }
                Some(Frame::Box {
                    lo,
                    hi,
                    dims: box_dims,
                    rule,
                    reversed: g.is_reversed(),
                })
            }
            EscapeGeometry::Tree => {
                let rho = margin.max(2);
                Some(Frame::Tree {
                    dist: tree_region(g, vertices, rho),
                    rho,
                })
            }
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        match self {
            Frame::Box { lo, hi, dims, .. } => {
                (0..*dims).all(|i| lo[i] <= v.0[i] && v.0[i] <= hi[i])
            }
            Frame::Tree { dist, .. } => dist.contains_key(&v),
        }
    }

    pub fn is_sink(&self, v: VertexId, dir: Dir) -> bool {
        match self {
            Frame::Box {
                lo,
                hi,
                dims,
                rule,
                reversed,
            } => {
                let on_boundary = || (0..*dims).any(|i| v.0[i] == lo[i] || v.0[i] == hi[i]);
                match rule {
                    SinkRule::Boundary => on_boundary(),
                    SinkRule::EvenBoundary => {
                        on_boundary() && v.0[0].rem_euclid(2) == 0 && v.0[1].rem_euclid(2) == 0
                    }
                    SinkRule::LadderEnds => v.0[0] == lo[0] || v.0[0] == hi[0],
                    SinkRule::OrientedLadderEnds => {
                        let forward = (dir == Dir::Out) != *reversed;
                        let (x, r) = (v.0[0], v.0[1]);
                        if forward {
                            (x == hi[0] && r == 0) || (x == lo[0] && r == 1)
                        } else {
                            (x == lo[0] && r == 0) || (x == hi[0] && r == 1)
                        }
                    }
                }
            }
            Frame::Tree { dist, rho } => dist.get(&v).is_some_and(|&d| d + 1 >= *rho),
        }
    }
}

/// The tree hull of `vertices` (the union of tree paths between
/// consecutive vertices), possibly with repeats.
pub(crate) fn tree_hull(g: &dyn GraphFamily, vertices: &[VertexId]) -> Vec<VertexId> {
    let mut hull = Vec::with_capacity(2 * vertices.len());
    hull.push(vertices[0]);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for pair in vertices.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        a.clear();
        g.push_tree_neighbors(u, &mut a);
        if !a.contains(&v) {
            let mid = a.iter().copied().find(|&m| {
                b.clear();
                g.push_tree_neighbors(m, &mut b);
                b.contains(&v)
            });
            hull.push(
                mid.unwrap_or_else(|| panic!("edge {u} -> {v} spans more than two tree steps")),
            );
        }
        hull.push(v);
    }
    hull
}

/// Tree distances from the hull of `vertices` (the union of tree paths
/// between consecutive vertices), for all vertices within `rho`.
fn tree_region(g: &dyn GraphFamily, vertices: &[VertexId], rho: usize) -> HashMap<VertexId, usize> {
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    let add = |v: VertexId, dist: &mut HashMap<VertexId, usize>, queue: &mut VecDeque<VertexId>| {
        if dist.insert(v, 0).is_none() {
            queue.push_back(v);
        }
    };
    add(vertices[0], &mut dist, &mut queue);
    for pair in vertices.windows(2) {
        for v in tree_path(g, pair[0], pair[1]) {
            add(v, &mut dist, &mut queue);
        }
    }
    let mut buf = Vec::new();
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == rho {
            continue;
        }
        buf.clear();
        g.push_tree_neighbors(x, &mut buf);
        for &y in &buf {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                e.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// The tree path from `u` to `v`, which are at tree distance at most 2.
fn tree_path(g: &dyn GraphFamily, u: VertexId, v: VertexId) -> Vec<VertexId> {
    if u == v {
        return vec![u];
    }
    let mut a = Vec::new();
    g.push_tree_neighbors(u, &mut a);
    if a.contains(&v) {
        return vec![u, v];
    }
    let mut b = Vec::new();
    for &m in &a {
        b.clear();
        g.push_tree_neighbors(m, &mut b);
        if b.contains(&v) {
            return vec![u, m, v];
        }
    }
    panic!("edge {u} -> {v} spans more than two tree steps");
}
