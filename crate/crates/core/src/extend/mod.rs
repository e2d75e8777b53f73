//! Exact forward, backward and double extendability of finite SAWs.
//!
//! A walk is forward extendable when it is the initial segment of a singly
//! infinite SAW, backward extendable when it is the final segment of a SAW
//! coming from infinity, and doubly extendable when it sits inside a doubly
//! infinite SAW. Each test reduces to a finite reachability (or two-path)
//! question inside a [`Frame`](frame::Frame) around the walk.
//!
//! Single-side tests are flood fills. Double extendability on undirected
//! families is a vertex-capacity max-flow of value 2 from {start, end} to the
//! sinks. On directed families the two escapes use different edge
//! directions, so simple backward escapes are enumerated and a forward flood
//! fill is run around each.

mod flow;
mod frame;
mod search;

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EscapeGeometry, GraphFamily, SinkRule, VertexId};
use crate::walk::{Walk, WalkRef};

pub use flow::FlowNetwork;
pub use frame::{Dir, Frame};
pub use search::{bounding_box_k, extendable_by};

const SINGLE_MARGIN: usize = 2;
const DOUBLE_MARGIN: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Forward,
    Backward,
    Both,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Forward => "F",
            Side::Backward => "B",
            Side::Both => "FB",
        }
    }
}

/// The outcome of an exact test together with its evidence: escape paths
/// when extendable, each starting at the walk end it leaves from (backward
/// escapes follow in-edges), otherwise the vertices reachable from the
/// blocked end (the trap).
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub extendable: bool,
    pub escapes: Vec<Vec<VertexId>>,
    pub trapped: Vec<VertexId>,
}

impl Certificate {
    fn yes(escapes: Vec<Vec<VertexId>>) -> Self {
        Certificate {
            extendable: true,
            escapes,
            trapped: Vec::new(),
        }
    }

    fn no(trapped: Vec<VertexId>) -> Self {
        Certificate {
            extendable: false,
            escapes: Vec::new(),
            trapped,
        }
    }
}

pub fn ensure_supported(g: &dyn GraphFamily) -> Result<()> {
    if g.escape_geometry() == EscapeGeometry::None {
        Err(Error::Unsupported {
            family: g.name().to_string(),
            what: "extendability".into(),
        })
    } else {
        Ok(())
    }
}

/// On an infinite regular tree every vertex off a finite walk roots an
/// infinite branch avoiding it, so every SAW extends both ways.
fn always_extendable(g: &dyn GraphFamily) -> bool {
    g.escape_geometry() == EscapeGeometry::Tree && g.is_undirected() && g.girth().is_none()
}

pub fn is_extendable(g: &dyn GraphFamily, w: WalkRef<'_>, side: Side) -> Result<bool> {
    ensure_supported(g)?;
    if always_extendable(g) {
        return Ok(true);
    }
    Ok(match side {
        Side::Forward => single(g, w, Dir::Out, false).extendable,
        Side::Backward => single(g, w, Dir::In, false).extendable,
        Side::Both => double(g, w, false).extendable,
    })
}

/// Exact test with witness paths or the trapping region.
pub fn certify(g: &dyn GraphFamily, w: WalkRef<'_>, side: Side) -> Result<Certificate> {
    ensure_supported(g)?;
    Ok(match side {
        Side::Forward => single(g, w, Dir::Out, true),
        Side::Backward => single(g, w, Dir::In, true),
        Side::Both => double(g, w, true),
    })
}

pub fn forward_extendable(g: &dyn GraphFamily, w: &Walk) -> Result<bool> {
    w.validate(g)?;
    is_extendable(g, w.as_ref(), Side::Forward)
}

pub fn backward_extendable(g: &dyn GraphFamily, w: &Walk) -> Result<bool> {
    w.validate(g)?;
    is_extendable(g, w.as_ref(), Side::Backward)
}

pub fn doubly_extendable(g: &dyn GraphFamily, w: &Walk) -> Result<bool> {
    w.validate(g)?;
    is_extendable(g, w.as_ref(), Side::Both)
}

fn push_dir(g: &dyn GraphFamily, v: VertexId, dir: Dir, buf: &mut Vec<(u8, VertexId)>) {
    buf.clear();
    match dir {
        Dir::Out => g.push_out_neighbors(v, buf),
        Dir::In => g.push_in_neighbors(v, buf),
    }
}

fn is_plain_box(g: &dyn GraphFamily) -> bool {
    matches!(
        g.escape_geometry(),
        EscapeGeometry::Lattice {
            rule: SinkRule::Boundary,
            ..
        }
    )
}

/// Straight rays on the Cayley-graph lattices: a step `s` from the root whose
/// ray `root + k s`, `1 <= k <= n + 1`, misses the walk. Past `k = n + 1` the
/// ray is out of the walk's reach. Rays are returned starting at the root.
fn ray_steps(g: &dyn GraphFamily, w: WalkRef<'_>, root: VertexId, dir: Dir) -> Vec<Vec<VertexId>> {
    let mut buf = Vec::new();
    push_dir(g, root, dir, &mut buf);
    let reach = w.len() as i64 + 1;
    let mut rays = Vec::new();
    for &(_, u) in &buf {
        let s = [u.0[0] - root.0[0], u.0[1] - root.0[1], u.0[2] - root.0[2]];
        let ray: Vec<VertexId> = (0..=reach)
            .map(|k| {
                VertexId([
                    root.0[0] + k * s[0],
                    root.0[1] + k * s[1],
                    root.0[2] + k * s[2],
                ])
            })
            .collect();
        if !ray[1..].iter().any(|p| w.vertices.contains(p)) {
            rays.push(ray);
        }
    }
    rays
}

fn single(g: &dyn GraphFamily, w: WalkRef<'_>, dir: Dir, want_witness: bool) -> Certificate {
    let root = match dir {
        Dir::Out => w.end(),
        Dir::In => w.start(),
    };
    if is_plain_box(g) {
        if let Some(ray) = ray_steps(g, w, root, dir).into_iter().next() {
            return Certificate::yes(if want_witness { vec![ray] } else { Vec::new() });
        }
    }
    if g.escape_geometry() == EscapeGeometry::Tree {
        let hull = frame::tree_hull(g, w.vertices);
        if let Some(path) = tree_exit(g, &hull, root, |y| y != root && w.vertices.contains(&y)) {
            return Certificate::yes(vec![path]);
        }
    }
    let blocked: HashSet<VertexId> = w.vertices.iter().copied().filter(|&v| v != root).collect();
    let frame = Frame::around(g, w.vertices, SINGLE_MARGIN).expect("supported family");
    flood(g, &frame, root, dir, &blocked)
}

/// Breadth-first search along spanning-tree edges, which exist in both
/// directions, from `root` to the first vertex outside the walk's tree hull.
/// The tree branches at that vertex pointing away from the hull are
/// infinite and miss the walk, so any such path certifies an escape.
/// Walks are short, so plain vectors beat hashing here.
fn tree_exit(
    g: &dyn GraphFamily,
    hull: &[VertexId],
    root: VertexId,
    blocked: impl Fn(VertexId) -> bool,
) -> Option<Vec<VertexId>> {
    // (vertex, index of its BFS parent)
    let mut seen: Vec<(VertexId, usize)> = vec![(root, 0)];
    let mut buf = Vec::new();
    let mut head = 0;
    while head < seen.len() {
        let x = seen[head].0;
        if !hull.contains(&x) {
            let mut path = vec![x];
            let mut i = head;
            while i != 0 {
                i = seen[i].1;
                path.push(seen[i].0);
            }
            path.reverse();
            return Some(path);
        }
        buf.clear();
        g.push_tree_neighbors(x, &mut buf);
        for &y in &buf {
            if !blocked(y) && !seen.iter().any(|&(z, _)| z == y) {
                seen.push((y, head));
            }
        }
        head += 1;
    }
    None
}

/// Breadth-first search from `root` along `dir` inside the frame, avoiding
/// `blocked`, until a sink is reached.
fn flood(
    g: &dyn GraphFamily,
    frame: &Frame,
    root: VertexId,
    dir: Dir,
    blocked: &HashSet<VertexId>,
) -> Certificate {
    let mut parent: HashMap<VertexId, VertexId> = HashMap::from([(root, root)]);
    let mut queue = VecDeque::from([root]);
    let mut buf = Vec::new();
    while let Some(x) = queue.pop_front() {
        if x != root && frame.is_sink(x, dir) {
            let mut path = vec![x];
            let mut y = x;
            while y != root {
                y = parent[&y];
                path.push(y);
            }
            path.reverse();
            return Certificate::yes(vec![path]);
        }
        push_dir(g, x, dir, &mut buf);
        for &(_, y) in &buf {
            if frame.contains(y) && !blocked.contains(&y) && !parent.contains_key(&y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    let mut trapped: Vec<VertexId> = parent.into_keys().collect();
    trapped.sort();
    Certificate::no(trapped)
}

fn double(g: &dyn GraphFamily, w: WalkRef<'_>, want_witness: bool) -> Certificate {
    if always_extendable(g) {
        return Certificate::yes(Vec::new());
    }
    let (start, end) = (w.start(), w.end());
    if is_plain_box(g) && start != end {
        let back = ray_steps(g, w, start, Dir::In);
        let fwd = ray_steps(g, w, end, Dir::Out);
        for b in &back {
            let sb = [
                b[1].0[0] - start.0[0],
                b[1].0[1] - start.0[1],
                b[1].0[2] - start.0[2],
            ];
            for f in &fwd {
                let sf = [
                    f[1].0[0] - end.0[0],
                    f[1].0[1] - end.0[1],
                    f[1].0[2] - end.0[2],
                ];
                // parallel rays in the same direction, each missing the walk
                if sb == sf {
                    return Certificate::yes(if want_witness {
                        vec![b.clone(), f.clone()]
                    } else {
                        Vec::new()
                    });
                }
            }
        }
    }
    if g.escape_geometry() == EscapeGeometry::Tree && start != end {
        // distinct first exits from the hull have disjoint outward branches
        let hull = frame::tree_hull(g, w.vertices);
        if let Some(f) = tree_exit(g, &hull, end, |y| y != end && w.vertices.contains(&y)) {
            let blocked = |y: VertexId| y != start && (w.vertices.contains(&y) || f.contains(&y));
            if let Some(b) = tree_exit(g, &hull, start, blocked) {
                return Certificate::yes(if want_witness { vec![b, f] } else { Vec::new() });
            }
        }
    }
    let f = single(g, w, Dir::Out, false);
    if !f.extendable {
        return f;
    }
    let b = single(g, w, Dir::In, false);
    if !b.extendable {
        return b;
    }
    let frame = Frame::around(g, w.vertices, DOUBLE_MARGIN).expect("supported family");
    if g.is_undirected() {
        two_path_flow(g, &frame, w)
    } else {
        directed_pair(g, &frame, w)
    }
}

/// Max-flow with unit vertex capacities from {start, end} to the sinks.
fn two_path_flow(g: &dyn GraphFamily, frame: &Frame, w: WalkRef<'_>) -> Certificate {
    let (start, end) = (w.start(), w.end());
    let blocked: HashSet<VertexId> = w
        .vertices
        .iter()
        .copied()
        .filter(|&v| v != start && v != end)
        .collect();
    // discover the region component reachable from the two ends
    let mut index: HashMap<VertexId, usize> = HashMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for v in [start, end] {
        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(v) {
            e.insert(order.len());
            order.push(v);
            queue.push_back(v);
        }
    }
    let mut edges = Vec::new();
    let mut buf = Vec::new();
    while let Some(x) = queue.pop_front() {
        if x != start && x != end && frame.is_sink(x, Dir::Out) {
            continue;
        }
        push_dir(g, x, Dir::Out, &mut buf);
        for &(_, y) in &buf {
            if !frame.contains(y) || blocked.contains(&y) {
                continue;
            }
            if y == start || y == end {
                continue;
            }
            let j = *index.entry(y).or_insert_with(|| {
                order.push(y);
                queue.push_back(y);
                order.len() - 1
            });
            edges.push((index[&x], j));
        }
    }
    let n = order.len();
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    for (i, &v) in order.iter().enumerate() {
        let cap = if start == end && v == start { 2 } else { 1 };
        net.add_edge(2 * i, 2 * i + 1, cap);
        if v != start && v != end && frame.is_sink(v, Dir::Out) {
            net.add_edge(2 * i + 1, t, 1);
        }
    }
    for &(i, j) in &edges {
        net.add_edge(2 * i + 1, 2 * j, 1);
    }
    net.add_edge(s, 2 * index[&start], if start == end { 2 } else { 1 });
    if start != end {
        net.add_edge(s, 2 * index[&end], 1);
    }
    if net.max_flow(s, t, 2) < 2 {
        return Certificate::no(order);
    }
    let mut escapes = Vec::new();
    for first in net.flow_successors(s) {
        let mut path = Vec::new();
        let mut node = first;
        let mut seen = HashSet::new();
        while node != t && seen.insert(node) {
            let i = node / 2;
            path.push(order[i]);
            let out = 2 * i + 1;
            match net
                .flow_successors(out)
                .into_iter()
                .find(|&m| m == t || !seen.contains(&m))
            {
                Some(m) => node = m,
                None => break,
            }
        }
        escapes.push(path);
    }
    Certificate::yes(escapes)
}

/// Enumerates simple backward escapes from the start; for each, floods
/// forward from the end around it.
fn directed_pair(g: &dyn GraphFamily, frame: &Frame, w: WalkRef<'_>) -> Certificate {
    let (start, end) = (w.start(), w.end());
    let walk: HashSet<VertexId> = w.vertices.iter().copied().collect();
    let mut path = vec![start];
    let mut on_path: HashSet<VertexId> = HashSet::from([start]);
    let mut result = None;
    backward_paths(g, frame, &walk, &mut path, &mut on_path, &mut |path| {
        let mut blocked: HashSet<VertexId> = walk.iter().copied().filter(|&v| v != end).collect();
        blocked.extend(path.iter().copied().filter(|&v| v != end));
        let fwd = flood(g, frame, end, Dir::Out, &blocked);
        if fwd.extendable {
            let mut escapes = vec![path.to_vec()];
            escapes.extend(fwd.escapes);
            result = Some(escapes);
            true
        } else {
            false
        }
    });
    match result {
        Some(escapes) => Certificate::yes(escapes),
        None => Certificate::no(Vec::new()),
    }
}

fn backward_paths(
    g: &dyn GraphFamily,
    frame: &Frame,
    walk: &HashSet<VertexId>,
    path: &mut Vec<VertexId>,
    on_path: &mut HashSet<VertexId>,
    done: &mut dyn FnMut(&[VertexId]) -> bool,
) -> bool {
    let x = *path.last().expect("non-empty");
    if path.len() > 1 && frame.is_sink(x, Dir::In) {
        return done(path);
    }
    let mut buf = Vec::new();
    push_dir(g, x, Dir::In, &mut buf);
    for &(_, y) in &buf {
        if !frame.contains(y) || walk.contains(&y) || on_path.contains(&y) {
            continue;
        }
        path.push(y);
        on_path.insert(y);
        let found = backward_paths(g, frame, walk, path, on_path, done);
        on_path.remove(&y);
        path.pop();
        if found {
            return true;
        }
    }
    false
}
