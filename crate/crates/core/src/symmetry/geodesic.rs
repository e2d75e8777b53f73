//! Geodesic rays, quasi-geodesics and loop erasure.

use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{undirected_distance, EdgeLabel, GrandparentGraph, GraphFamily, VertexId};

/// α is chosen on the grid k / ALPHA_DENOMINATOR.
pub const ALPHA_DENOMINATOR: i64 = 64;

/// A ray `v_0 = v, ..., v_L` with graph distance `|i - j|` between `v_i` and
/// `v_j`, grown by depth-first search over neighbours in label order and
/// re-verified pairwise by breadth-first search.
pub fn find_geodesic_ray(g: &dyn GraphFamily, v: VertexId, len: usize) -> Result<Vec<VertexId>> {
    if !g.is_undirected() {
        return Err(Error::Unsupported {
            family: g.name().to_string(),
            what: "geodesic rays (undirected only)".into(),
        });
    }
    if !g.contains(v) {
        return Err(Error::InvalidVertex {
            family: g.name().to_string(),
            vertex: v,
        });
    }
    let mut ray = vec![v];
    if extend_ray(g, &mut ray, len) {
        Ok(ray)
    } else {
        Err(Error::Unsupported {
            family: g.name().to_string(),
            what: format!("a geodesic ray of length {len}"),
        })
    }
}

fn extend_ray(g: &dyn GraphFamily, ray: &mut Vec<VertexId>, len: usize) -> bool {
    if ray.len() > len {
        return true;
    }
    let i = ray.len();
    let mut buf = Vec::new();
    g.push_out_neighbors(ray[i - 1], &mut buf);
    for &(_, u) in &buf {
        let fits = ray
            .iter()
            .enumerate()
            .all(|(j, &x)| undirected_distance(g, x, u, i - j) == Some(i - j));
        if fits {
            ray.push(u);
            if extend_ray(g, ray, len) {
                return true;
            }
            ray.pop();
        }
    }
    false
}

/// Loop erasure of a doubly indexed sequence given as a vector plus the
/// position of index 0. While some vertex repeats, pick `a < b` with
/// `w_a = w_b` and `|a| + |b|` minimal (then `a` minimal), delete
/// `w_{a+1}, ..., w_b`, and re-index: index 0 is kept unless it was deleted,
/// in which case the old `w_a` becomes the new `w_0`.
pub fn loop_erase(seq: &[VertexId], zero: usize) -> (Vec<VertexId>, usize) {
    let mut w = seq.to_vec();
    let mut zero = zero as i64;
    loop {
        let mut positions: HashMap<VertexId, Vec<i64>> = HashMap::new();
        for (p, &v) in w.iter().enumerate() {
            positions.entry(v).or_default().push(p as i64);
        }
        let mut best: Option<(i64, i64, i64, i64)> = None;
        for ps in positions.values().filter(|ps| ps.len() > 1) {
            for (x, &p) in ps.iter().enumerate() {
                for &q in &ps[x + 1..] {
                    let (a, b) = (p - zero, q - zero);
                    let key = (a.abs() + b.abs(), a, p, q);
                    if best.is_none_or(|cur| key < cur) {
                        best = Some(key);
                    }
                }
            }
        }
        let Some((_, _, p, q)) = best else {
            break;
        };
        w.drain((p + 1) as usize..=(q as usize));
        if q < zero {
            zero -= q - p;
        } else if p <= zero {
            zero = p;
        }
    }
    (w, zero as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiGeodesic {
    pub window: usize,
    /// `v_i` for `i = -W..=W`, stored at `i + W`.
    pub vertices: Vec<VertexId>,
    /// Largest grid value passing verification on the window.
    pub alpha: Rational64,
    /// For `i = 0..W`: the label of the edge `v_{i+1} -> v_i`, and of
    /// `v_{-i-1} -> v_{-i}`.
    pub plus_edges: Vec<EdgeLabel>,
    pub minus_edges: Vec<EdgeLabel>,
    /// The pair attaining the minimum distance ratio.
    pub tightest_pair: (i64, i64),
    pub log: Vec<String>,
}

impl QuasiGeodesic {
    pub fn v(&self, i: i64) -> VertexId {
        self.vertices[(i + self.window as i64) as usize]
    }

    pub fn index_of(&self, v: VertexId) -> Option<i64> {
        self.vertices
            .iter()
            .position(|&x| x == v)
            .map(|p| p as i64 - self.window as i64)
    }
}

/// Shortest directed walk `from -> to`, by breadth-first search to `cap`.
fn shortest_directed_walk(
    g: &dyn GraphFamily,
    from: VertexId,
    to: VertexId,
    cap: usize,
) -> Option<Vec<VertexId>> {
    let mut parent = HashMap::from([(from, from)]);
    let mut queue = VecDeque::from([(from, 0)]);
    let mut buf = Vec::new();
    while let Some((x, d)) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut y = to;
            while y != from {
                y = parent[&y];
                path.push(y);
            }
            path.reverse();
            return Some(path);
        }
        if d == cap {
            continue;
        }
        buf.clear();
        g.push_out_neighbors(x, &mut buf);
        for &(_, y) in &buf {
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(y) {
                e.insert(x);
                queue.push_back((y, d + 1));
            }
        }
    }
    None
}

fn edge_label(g: &dyn GraphFamily, from: VertexId, to: VertexId) -> Option<EdgeLabel> {
    let mut buf = Vec::new();
    g.push_out_neighbors(from, &mut buf);
    buf.iter().find(|&&(_, v)| v == to).map(|&(l, _)| l)
}

/// The quasi-geodesic of the grandparent graph on `[-W, W]`, built by
/// concatenating shifted copies of the shortest directed walks ξ: u_1 -> u_0
/// and ζ: u_{-1} -> u_0, where u_i = φ^i(u_0) and φ is the level shift, and
/// then erasing loops.
pub fn build_quasi_geodesic(g: &dyn GraphFamily, window: usize) -> Result<QuasiGeodesic> {
    if g.name() != "grandparent" {
        return Err(Error::Unsupported {
            family: g.name().to_string(),
            what: "quasi-geodesic construction".into(),
        });
    }
    let phi = GrandparentGraph::shift;
    let u0 = g.origin();
    let xi =
        shortest_directed_walk(g, phi(u0, 1), u0, 8).ok_or(Error::Verification { i: 1, j: 0 })?;
    let zeta =
        shortest_directed_walk(g, phi(u0, -1), u0, 8).ok_or(Error::Verification { i: -1, j: 0 })?;
    let blocks = 2 * window as i64 + 4;
    // right of u0: phi^k of reversed xi, each without its first vertex
    let mut right = Vec::new();
    for k in 0..blocks {
        for &x in xi.iter().rev().skip(1) {
            right.push(phi(x, k));
        }
    }
    // left of u0: phi^-k of zeta without its last vertex, nearest block last
    let mut left = Vec::new();
    for k in 0..blocks {
        let block: Vec<VertexId> = zeta[..zeta.len() - 1].iter().map(|&x| phi(x, -k)).collect();
        left.splice(0..0, block);
    }
    let zero = left.len();
    let mut raw = left;
    raw.push(u0);
    raw.extend(right);
    let raw_len = raw.len();
    let (erased, zero) = loop_erase(&raw, zero);
    let w = window as i64;
    if (zero as i64) < w || (erased.len() - zero) as i64 <= w {
        return Err(Error::Verification { i: -w, j: w });
    }
    let vertices: Vec<VertexId> = erased[zero - window..=zero + window].to_vec();
    let log = vec![
        format!(
            "xi = {}",
            xi.iter()
                .map(|v| g.describe(*v))
                .collect::<Vec<_>>()
                .join(" -> ")
        ),
        format!(
            "zeta = {}",
            zeta.iter()
                .map(|v| g.describe(*v))
                .collect::<Vec<_>>()
                .join(" -> ")
        ),
        format!(
            "raw length {raw_len}, {} vertices removed by loop erasure",
            raw_len - erased.len()
        ),
    ];
    certify_window(g, vertices, log, |u, v| {
        Some(GrandparentGraph::distance(u, v))
    })
}

/// A bi-infinite line `v_{-W}, ..., v_W` of an undirected family, such as
/// an axis of a lattice, certified as a quasi-geodesic with breadth-first
/// distances.
pub fn quasi_geodesic_from_line(
    g: &dyn GraphFamily,
    vertices: Vec<VertexId>,
) -> Result<QuasiGeodesic> {
    if !g.is_undirected() {
        return Err(Error::Unsupported {
            family: g.name().to_string(),
            what: "lines (undirected only)".into(),
        });
    }
    if vertices.len().is_multiple_of(2) {
        return Err(Error::Parse(
            "a line needs an odd number of vertices".into(),
        ));
    }
    let cap = vertices.len();
    certify_window(g, vertices, Vec::new(), |u, v| {
        undirected_distance(g, u, v, cap)
    })
}

fn certify_window(
    g: &dyn GraphFamily,
    vertices: Vec<VertexId>,
    log: Vec<String>,
    distance: impl Fn(VertexId, VertexId) -> Option<usize>,
) -> Result<QuasiGeodesic> {
    let window = vertices.len() / 2;
    let mut qg = QuasiGeodesic {
        window,
        vertices,
        alpha: Rational64::from_integer(1),
        plus_edges: Vec::new(),
        minus_edges: Vec::new(),
        tightest_pair: (0, 0),
        log,
    };
    let w = window as i64;
    for i in 0..w {
        qg.plus_edges.push(
            edge_label(g, qg.v(i + 1), qg.v(i)).ok_or(Error::Verification { i: i + 1, j: i })?,
        );
        qg.minus_edges.push(
            edge_label(g, qg.v(-i - 1), qg.v(-i))
                .ok_or(Error::Verification { i: -i - 1, j: -i })?,
        );
    }
    let distinct: HashSet<VertexId> = qg.vertices.iter().copied().collect();
    if distinct.len() != qg.vertices.len() {
        return Err(Error::Verification { i: 0, j: 0 });
    }
    // largest k / 64 with 64 d(v_i, v_j) >= k |i - j| on the window
    let mut best_k = ALPHA_DENOMINATOR;
    let mut tight = (0, 0);
    for i in -w..=w {
        for j in i + 1..=w {
            let d = distance(qg.v(i), qg.v(j)).ok_or(Error::Verification { i, j })? as i64;
            let k = (ALPHA_DENOMINATOR * d) / (j - i);
            if k < best_k {
                best_k = k;
                tight = (i, j);
            }
        }
    }
    if best_k <= 0 {
        return Err(Error::Verification {
            i: tight.0,
            j: tight.1,
        });
    }
    qg.alpha = Rational64::new(best_k, ALPHA_DENOMINATOR);
    qg.tightest_pair = tight;
    qg.log
        .push(format!("alpha = {} attained at {:?}", qg.alpha, tight));
    Ok(qg)
}
