//! Exact counting and streaming enumeration of directed self-avoiding walks.
//!
//! The engine is a depth-first backtracking search over out-edges in label
//! order. Two occupancy strategies are used: a dense grid around the start
//! for lattice families (coordinates move by at most one per step), and a
//! girth-limited scan of the current path otherwise (a new vertex can only
//! repeat the vertex two steps back, or one at least `girth` steps back).
//! On undirected trees plain counts skip the search and use a recursion over
//! vertex classes.
//!
//! Parallel counting partitions the walks by their first `k` steps, with `k`
//! the smallest length giving at least four partitions per worker. Counts
//! are reduced by checked addition, so the result does not depend on the
//! number of workers.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extend::{self, Side};
use crate::graph::{EdgeLabel, EscapeGeometry, GraphFamily, VertexId};
use crate::walk::{Walk, WalkRef};

/// Which walks are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mode {
    Plain,
    Forward,
    Backward,
    Doubly,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Plain, Mode::Forward, Mode::Backward, Mode::Doubly];

    pub fn label(self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::Forward => "F",
            Mode::Backward => "B",
            Mode::Doubly => "FB",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "plain" => Some(Mode::Plain),
            "F" => Some(Mode::Forward),
            "B" => Some(Mode::Backward),
            "FB" => Some(Mode::Doubly),
            _ => None,
        }
    }

    fn side(self) -> Option<Side> {
        match self {
            Mode::Plain => None,
            Mode::Forward => Some(Side::Forward),
            Mode::Backward => Some(Side::Backward),
            Mode::Doubly => Some(Side::Both),
        }
    }
}

enum Occupancy {
    Grid {
        base: [i64; 3],
        side: usize,
        cells: Vec<bool>,
    },
    Scan {
        girth: Option<usize>,
    },
}

impl Occupancy {
    fn new(g: &dyn GraphFamily, start: VertexId, n: usize) -> Self {
        match g.escape_geometry() {
            EscapeGeometry::Lattice { .. } => {
                let side = 2 * n + 1;
                let r = n as i64;
                let c = start.0;
                Occupancy::Grid {
                    base: [c[0] - r, c[1] - r, c[2] - r],
                    side,
                    cells: vec![false; side * side * side],
                }
            }
            _ => Occupancy::Scan { girth: g.girth() },
        }
    }

    #[inline]
    fn index(base: &[i64; 3], side: usize, v: VertexId) -> usize {
        let x = (v.0[0] - base[0]) as usize;
        let y = (v.0[1] - base[1]) as usize;
        let z = (v.0[2] - base[2]) as usize;
        (x * side + y) * side + z
    }

    #[inline]
    fn is_free(&self, path: &[VertexId], v: VertexId) -> bool {
        match self {
            Occupancy::Grid { base, side, cells } => !cells[Self::index(base, *side, v)],
            Occupancy::Scan { girth } => {
                let t = path.len();
                if t >= 2 && path[t - 2] == v {
                    return false;
                }
                match girth {
                    Some(g) if t >= *g => !path[..=t - g].contains(&v),
                    _ => true,
                }
            }
        }
    }

    #[inline]
    fn set(&mut self, v: VertexId, value: bool) {
        if let Occupancy::Grid { base, side, cells } = self {
            cells[Self::index(base, *side, v)] = value;
        }
    }
}

/// Depth-first SAW search state for one start vertex and one target length.
struct Search<'g> {
    g: &'g dyn GraphFamily,
    n: usize,
    occ: Occupancy,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeLabel>,
    buffers: Vec<Vec<(EdgeLabel, VertexId)>>,
}

impl<'g> Search<'g> {
    fn new(g: &'g dyn GraphFamily, prefix: WalkRef<'_>, n: usize) -> Self {
        let mut occ = Occupancy::new(g, prefix.start(), n);
        for &v in prefix.vertices {
            occ.set(v, true);
        }
        Search {
            g,
            n,
            occ,
            vertices: prefix.vertices.to_vec(),
            edges: prefix.edges.to_vec(),
            buffers: vec![Vec::with_capacity(g.max_degree()); n + 1],
        }
    }

    fn count(&mut self) -> Result<u128> {
        let remaining = self.n - self.edges.len();
        if remaining == 0 {
            return Ok(1);
        }
        let depth = self.edges.len();
        let mut buf = std::mem::take(&mut self.buffers[depth]);
        buf.clear();
        self.g.push_out_neighbors(self.vertices[depth], &mut buf);
        let mut total: u128 = 0;
        if remaining == 1 {
            for &(_, u) in &buf {
                if self.occ.is_free(&self.vertices, u) {
                    total += 1;
                }
            }
        } else {
            for &(label, u) in &buf {
                if !self.occ.is_free(&self.vertices, u) {
                    continue;
                }
                self.push(label, u);
                let sub = self.count();
                self.pop();
                total = total
                    .checked_add(sub?)
                    .ok_or(Error::Overflow { n: self.n })?;
            }
        }
        self.buffers[depth] = buf;
        Ok(total)
    }

    fn visit<B>(
        &mut self,
        visitor: &mut dyn FnMut(WalkRef<'_>) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if self.edges.len() == self.n {
            return visitor(WalkRef {
                vertices: &self.vertices,
                edges: &self.edges,
            });
        }
        let depth = self.edges.len();
        let mut buf = std::mem::take(&mut self.buffers[depth]);
        buf.clear();
        self.g.push_out_neighbors(self.vertices[depth], &mut buf);
        let mut flow = ControlFlow::Continue(());
        for &(label, u) in &buf {
            if !self.occ.is_free(&self.vertices, u) {
                continue;
            }
            self.push(label, u);
            flow = self.visit(visitor);
            self.pop();
            if flow.is_break() {
                break;
            }
        }
        self.buffers[depth] = buf;
        flow
    }

    #[inline]
    fn push(&mut self, label: EdgeLabel, u: VertexId) {
        self.occ.set(u, true);
        self.vertices.push(u);
        self.edges.push(label);
    }

    #[inline]
    fn pop(&mut self) {
        let u = self.vertices.pop().expect("non-empty path");
        self.edges.pop();
        self.occ.set(u, false);
    }
}

fn check_start(g: &dyn GraphFamily, v: VertexId) -> Result<()> {
    if g.contains(v) {
        Ok(())
    } else {
        Err(Error::InvalidVertex {
            family: g.name().to_string(),
            vertex: v,
        })
    }
}

/// Visits every `n`-step SAW extending `prefix`, in label order.
pub fn enumerate_from<B>(
    g: &dyn GraphFamily,
    prefix: WalkRef<'_>,
    n: usize,
    visitor: &mut dyn FnMut(WalkRef<'_>) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if prefix.len() > n {
        return ControlFlow::Continue(());
    }
    Search::new(g, prefix, n).visit(visitor)
}

/// Visits every `n`-step SAW from `v` exactly once, in the order induced by
/// edge labels. A `Break` from the visitor stops the enumeration and is
/// returned.
pub fn enumerate_saws<B>(
    g: &dyn GraphFamily,
    v: VertexId,
    n: usize,
    mut visitor: impl FnMut(WalkRef<'_>) -> ControlFlow<B>,
) -> Result<ControlFlow<B>> {
    check_start(g, v)?;
    let start = Walk::trivial(v);
    Ok(enumerate_from(g, start.as_ref(), n, &mut visitor))
}

/// All SAWs of length `k` from `v`, in enumeration order.
pub fn prefixes(g: &dyn GraphFamily, v: VertexId, k: usize) -> Result<Vec<Walk>> {
    let mut out = Vec::new();
    let _ = enumerate_saws::<()>(g, v, k, |w| {
        out.push(w.to_walk());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// The prefix partition used for parallel work: walks of length `k <= n`,
/// where `k` is the least length giving at least `4 * workers` parts. When
/// `symmetric` is set only walks whose first label is 0 are produced.
fn partition(
    g: &dyn GraphFamily,
    v: VertexId,
    n: usize,
    workers: usize,
    symmetric: bool,
) -> Result<Vec<Walk>> {
    let target = 4 * workers.max(1);
    let mut k = 0;
    loop {
        let mut parts = prefixes(g, v, k)?;
        if symmetric && k >= 1 {
            parts.retain(|w| w.edges[0] == 0);
        }
        if parts.len() >= target || k == n || parts.is_empty() {
            return Ok(parts);
        }
        k += 1;
    }
}

fn uses_symmetry(g: &dyn GraphFamily, v: VertexId, n: usize) -> Option<u128> {
    if n == 0 || !g.first_step_symmetric(v) {
        return None;
    }
    let mut buf = Vec::new();
    g.push_out_neighbors(v, &mut buf);
    Some(buf.len() as u128)
}

fn checked_sum(parts: impl Iterator<Item = Result<u128>>, n: usize) -> Result<u128> {
    let mut total: u128 = 0;
    for p in parts {
        total = total.checked_add(p?).ok_or(Error::Overflow { n })?;
    }
    Ok(total)
}

/// Exact number of `n`-step SAWs from `v`.
pub fn count_saws(g: &dyn GraphFamily, v: VertexId, n: usize) -> Result<u128> {
    check_start(g, v)?;
    if g.is_undirected() && g.girth().is_none() {
        return count_on_tree(g, v, n);
    }
    let factor = uses_symmetry(g, v, n);
    let parts = partition(g, v, n, rayon::current_num_threads(), factor.is_some())?;
    let counts: Vec<Result<u128>> = parts
        .par_iter()
        .map(|p| Search::new(g, p.as_ref(), n).count())
        .collect();
    let total = checked_sum(counts.into_iter(), n)?;
    match factor {
        Some(f) => total.checked_mul(f).ok_or(Error::Overflow { n }),
        None => Ok(total),
    }
}

/// On an undirected tree a walk is self-avoiding iff it never backtracks.
/// The number of such continuations from `u` entered from `p` depends only
/// on the classes of `u` and `p` and on the steps left, since an automorphism
/// moving `u` to its representative preserves the classes of its neighbours.
fn count_on_tree(g: &dyn GraphFamily, v: VertexId, n: usize) -> Result<u128> {
    fn branch(
        g: &dyn GraphFamily,
        u: VertexId,
        from: Option<VertexId>,
        left: usize,
        n: usize,
        memo: &mut HashMap<(usize, Option<usize>, usize), u128>,
    ) -> Result<u128> {
        if left == 0 {
            return Ok(1);
        }
        let key = (g.class_of(u), from.map(|p| g.class_of(p)), left);
        if let Some(&c) = memo.get(&key) {
            return Ok(c);
        }
        let mut buf = Vec::new();
        g.push_out_neighbors(u, &mut buf);
        let mut total: u128 = 0;
        for (_, w) in buf {
            if Some(w) == from {
                continue;
            }
            let sub = branch(g, w, Some(u), left - 1, n, memo)?;
            total = total.checked_add(sub).ok_or(Error::Overflow { n })?;
        }
        memo.insert(key, total);
        Ok(total)
    }
    branch(g, v, None, n, n, &mut HashMap::new())
}

/// `count_saws` without partitioning, symmetry reduction or the tree shortcut.
pub fn count_saws_serial(g: &dyn GraphFamily, v: VertexId, n: usize) -> Result<u128> {
    check_start(g, v)?;
    Search::new(g, Walk::trivial(v).as_ref(), n).count()
}

/// σ_n(G) = sup_v σ_n(v), attained on a class representative.
pub fn sigma_sup(g: &dyn GraphFamily, n: usize) -> Result<u128> {
    sup_over_classes(g, n, Mode::Plain)
}

pub fn sup_over_classes(g: &dyn GraphFamily, n: usize, mode: Mode) -> Result<u128> {
    let mut best = 0;
    for s in g.representatives() {
        best = best.max(count_mode(g, s, n, mode)?);
    }
    Ok(best)
}

pub fn count_mode(g: &dyn GraphFamily, v: VertexId, n: usize, mode: Mode) -> Result<u128> {
    match mode {
        Mode::Plain => count_saws(g, v, n),
        _ => count_extendable(g, v, n, mode),
    }
}

/// Exact number of `n`-step SAWs from `v` that are forward, backward or
/// doubly extendable. Complete walks are filtered through the exact
/// extendability oracle; prefixes are never pruned by extendability.
pub fn count_extendable(g: &dyn GraphFamily, v: VertexId, n: usize, mode: Mode) -> Result<u128> {
    check_start(g, v)?;
    let Some(side) = mode.side() else {
        return count_saws(g, v, n);
    };
    extend::ensure_supported(g)?;
    let factor = uses_symmetry(g, v, n);
    let parts = partition(g, v, n, rayon::current_num_threads(), factor.is_some())?;
    let counts: Vec<Result<u128>> = parts
        .par_iter()
        .map(|p| {
            let mut count: u128 = 0;
            let flow = enumerate_from(g, p.as_ref(), n, &mut |w| match extend::is_extendable(
                g, w, side,
            ) {
                Ok(true) => {
                    count += 1;
                    ControlFlow::Continue(())
                }
                Ok(false) => ControlFlow::Continue(()),
                Err(e) => ControlFlow::Break(e),
            });
            match flow {
                ControlFlow::Break(e) => Err(e),
                ControlFlow::Continue(()) => Ok(count),
            }
        })
        .collect();
    let total = checked_sum(counts.into_iter(), n)?;
    match factor {
        Some(f) => total.checked_mul(f).ok_or(Error::Overflow { n }),
        None => Ok(total),
    }
}

/// Number of `n`-step bridges on Z^d (d = 2 or 3), counted from the origin.
///
/// Convention (Hammersley–Welsh): writing x_i for the first coordinate of the
/// i-th vertex, a walk is a bridge when `x_0 < x_i <= x_n` for all
/// `1 <= i <= n`. The zero-step walk is a bridge.
pub fn count_bridges(d: usize, n: usize) -> Result<u128> {
    if !(2..=3).contains(&d) {
        return Err(Error::Unsupported {
            family: format!("Z^{d}"),
            what: "bridge counting".into(),
        });
    }
    if n == 0 {
        return Ok(1);
    }
    let steps: Vec<[i64; 3]> = (0..d)
        .flat_map(|axis| {
            [1, -1].into_iter().map(move |s| {
                let mut v = [0; 3];
                v[axis] = s;
                v
            })
        })
        .collect();
    let mut path = vec![[0i64; 3], [1, 0, 0]];
    bridge_dfs(&steps, &mut path, n, 1)
}

fn bridge_dfs(steps: &[[i64; 3]], path: &mut Vec<[i64; 3]>, n: usize, max_x: i64) -> Result<u128> {
    let len = path.len() - 1;
    let here = path[len];
    let remaining = (n - len) as i64;
    if here[0] + remaining < max_x {
        return Ok(0);
    }
    if remaining == 0 {
        return Ok(u128::from(here[0] == max_x));
    }
    let mut total: u128 = 0;
    for s in steps {
        let next = [here[0] + s[0], here[1] + s[1], here[2] + s[2]];
        if next[0] <= 0 || path.contains(&next) {
            continue;
        }
        path.push(next);
        let sub = bridge_dfs(steps, path, n, max_x.max(next[0]));
        path.pop();
        total = total.checked_add(sub?).ok_or(Error::Overflow { n })?;
    }
    Ok(total)
}

/// A random `n`-step SAW from `v` grown one step at a time, each step
/// uniform among the unvisited out-neighbours, restarting on a dead end.
/// The law is the growth (Rosenbluth) measure, not the uniform one.
pub fn sample_saw<R: Rng + ?Sized>(
    g: &dyn GraphFamily,
    v: VertexId,
    n: usize,
    rng: &mut R,
) -> Result<Walk> {
    check_start(g, v)?;
    const ATTEMPTS: usize = 100_000;
    let mut buf = Vec::new();
    let mut free = Vec::new();
    for _ in 0..ATTEMPTS {
        let mut w = Walk::trivial(v);
        let mut seen: HashSet<VertexId> = HashSet::from([v]);
        while w.len() < n {
            buf.clear();
            g.push_out_neighbors(w.end(), &mut buf);
            free.clear();
            free.extend(buf.iter().copied().filter(|(_, u)| !seen.contains(u)));
            if free.is_empty() {
                break;
            }
            let (label, u) = free[rng.gen_range(0..free.len())];
            seen.insert(u);
            w.vertices.push(u);
            w.edges.push(label);
        }
        if w.len() == n {
            return Ok(w);
        }
    }
    Err(Error::Budget { budget: ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::registry::by_name;

    #[test]
    fn small_square_counts() {
        let g = by_name("square").unwrap();
        let o = g.origin();
        assert_eq!(count_saws(g.as_ref(), o, 0).unwrap(), 1);
        assert_eq!(count_saws(g.as_ref(), o, 1).unwrap(), 4);
        assert_eq!(count_saws(g.as_ref(), o, 2).unwrap(), 12);
        assert_eq!(count_saws(g.as_ref(), o, 3).unwrap(), 36);
    }

    #[test]
    fn tree_formula() {
        let g = by_name("tree3").unwrap();
        for n in 1..=12 {
            assert_eq!(
                count_saws(g.as_ref(), g.origin(), n).unwrap(),
                3 * (1u128 << (n - 1))
            );
        }
    }

    #[test]
    fn tree_shortcut_matches_the_search() {
        for name in ["tree3", "tree4"] {
            let g = by_name(name).unwrap();
            for n in 0..=9 {
                assert_eq!(
                    count_saws(g.as_ref(), g.origin(), n).unwrap(),
                    count_saws_serial(g.as_ref(), g.origin(), n).unwrap(),
                    "{name} n={n}"
                );
            }
        }
    }

    #[test]
    fn serial_and_partitioned_agree() {
        for name in [
            "ladder",
            "grandparent",
            "oriented-ladder",
            "triangular",
            "decorated-square",
        ] {
            let g = by_name(name).unwrap();
            for s in g.representatives() {
                for n in 0..=7 {
                    assert_eq!(
                        count_saws(g.as_ref(), s, n).unwrap(),
                        count_saws_serial(g.as_ref(), s, n).unwrap(),
                        "{name} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn visitor_sees_label_order() {
        let g = by_name("square").unwrap();
        let mut ends = Vec::new();
        let _ = enumerate_saws::<()>(g.as_ref(), g.origin(), 1, |w| {
            ends.push(w.end());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(
            ends,
            vec![
                VertexId::planar(1, 0),
                VertexId::planar(-1, 0),
                VertexId::planar(0, 1),
                VertexId::planar(0, -1)
            ]
        );
    }

    #[test]
    fn visitor_break_propagates() {
        let g = by_name("square").unwrap();
        let mut seen = 0;
        let flow = enumerate_saws(g.as_ref(), g.origin(), 3, |_| {
            seen += 1;
            if seen == 5 {
                ControlFlow::Break("stop")
            } else {
                ControlFlow::Continue(())
            }
        })
        .unwrap();
        assert_eq!(flow, ControlFlow::Break("stop"));
        assert_eq!(seen, 5);
    }

    #[test]
    fn bridges_small() {
        assert_eq!(count_bridges(2, 0).unwrap(), 1);
        assert_eq!(count_bridges(2, 1).unwrap(), 1);
        // +x then {+x, N, S} : N and S keep x_2 = x_1 = max
        assert_eq!(count_bridges(2, 2).unwrap(), 3);
        assert!(count_bridges(4, 2).is_err());
    }

    #[test]
    fn invalid_start_is_an_error() {
        let g = by_name("ladder").unwrap();
        assert!(count_saws(g.as_ref(), VertexId::planar(0, 2), 3).is_err());
    }
}
