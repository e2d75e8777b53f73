//! Depth-truncated SAW trees.
//!
//! The nodes of T(v) are the SAWs from `v`, a walk's children being its
//! one-step extensions. Trees are stored in an arena in breadth-first
//! order, so every level and every child list is a contiguous index range.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::Mode;
use crate::error::{Error, Result};
use crate::extend::{self, Side};
use crate::graph::{EdgeLabel, GraphFamily, VertexId};
use crate::walk::{Walk, WalkRef};

/// Default arena budget.
pub const NODE_BUDGET: usize = 10_000_000;

pub const NO_PARENT: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub parent: u32,
    pub level: u32,
    /// Label of the step into this node; `None` at a root.
    pub label: Option<EdgeLabel>,
    /// Endpoint of the walk; `None` for the extra root of a joined tree.
    pub vertex: Option<VertexId>,
    pub first_child: u32,
    pub child_count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedTree {
    nodes: Vec<Node>,
    depth: usize,
    level_start: Vec<usize>,
}

impl TruncatedTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn children(&self, i: usize) -> std::ops::Range<usize> {
        let n = &self.nodes[i];
        n.first_child as usize..(n.first_child + n.child_count) as usize
    }

    /// Node indices at level `n`.
    pub fn level(&self, n: usize) -> std::ops::Range<usize> {
        if n > self.depth {
            return 0..0;
        }
        self.level_start[n]..self.level_start[n + 1]
    }

    /// |W_n| for `n = 0..=depth`.
    pub fn level_sizes(&self) -> Vec<usize> {
        (0..=self.depth).map(|n| self.level(n).len()).collect()
    }

    /// The walk a node stands for, read from the root (the extra root of a
    /// joined tree contributes nothing).
    pub fn walk_of(&self, i: usize) -> Walk {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut k = i;
        loop {
            let n = &self.nodes[k];
            if let Some(v) = n.vertex {
                vertices.push(v);
            }
            if n.parent == NO_PARENT {
                break;
            }
            if self.nodes[n.parent as usize].vertex.is_some() {
                edges.push(n.label.expect("non-root node has a label"));
            }
            k = n.parent as usize;
        }
        vertices.reverse();
        edges.reverse();
        Walk { vertices, edges }
    }

    /// Writes one line per node: `id parent level edgeLabel vertexId`, with
    /// `-1` for a missing parent, `-` for a missing label and `o` for the
    /// vertex-less root of a joined tree.
    pub fn dump(&self, out: &mut dyn Write) -> io::Result<()> {
        for (id, n) in self.nodes.iter().enumerate() {
            let parent = if n.parent == NO_PARENT {
                -1
            } else {
                i64::from(n.parent)
            };
            let label = n.label.map_or_else(|| "-".to_string(), |l| l.to_string());
            let vertex = n.vertex.map_or_else(|| "o".to_string(), |v| v.to_string());
            writeln!(out, "{id} {parent} {} {label} {vertex}", n.level)?;
        }
        Ok(())
    }

    /// Assembles a tree from per-level node lists given as
    /// `(parent index within previous level, label, vertex)`.
    fn from_levels(levels: Vec<Vec<LevelItem>>) -> Self {
        let mut nodes = Vec::with_capacity(levels.iter().map(Vec::len).sum());
        let mut level_start = vec![0];
        for (lvl, items) in levels.iter().enumerate() {
            let base_prev = if lvl == 0 { 0 } else { level_start[lvl - 1] };
            for &(p, label, vertex) in items {
                let parent = if lvl == 0 {
                    NO_PARENT
                } else {
                    (base_prev + p as usize) as u32
                };
                nodes.push(Node {
                    parent,
                    level: lvl as u32,
                    label,
                    vertex,
                    first_child: 0,
                    child_count: 0,
                });
            }
            level_start.push(nodes.len());
        }
        // children of a node are contiguous because levels are listed in parent order
        for i in (0..nodes.len()).rev() {
            let p = nodes[i].parent;
            if p != NO_PARENT {
                let parent = &mut nodes[p as usize];
                parent.first_child = i as u32;
                parent.child_count += 1;
            }
        }
        TruncatedTree {
            depth: levels.len() - 1,
            nodes,
            level_start,
        }
    }

    /// A path of `depth` edges; its branching number and growth are 1.
    pub fn path(depth: usize) -> Self {
        let levels = (0..=depth)
            .map(|n| vec![(0, (n > 0).then_some(0), Some(VertexId::planar(n as i64, 0)))])
            .collect();
        TruncatedTree::from_levels(levels)
    }
}

type LevelItem = (u32, Option<EdgeLabel>, Option<VertexId>);

/// Breadth-first construction of the subtree of walks extending `prefix`,
/// up to total length `depth`, keeping walks accepted by `keep`.
fn build_levels(
    g: &dyn GraphFamily,
    prefix: &Walk,
    depth: usize,
    budget: usize,
    keep: &(dyn Fn(WalkRef<'_>) -> Result<bool> + Sync),
) -> Result<Vec<Vec<LevelItem>>> {
    let mut levels: Vec<Vec<LevelItem>> =
        vec![vec![(0, prefix.edges.last().copied(), Some(prefix.end()))]];
    // the full walks of the current level, needed to test self-avoidance
    let mut current: Vec<Walk> = vec![prefix.clone()];
    let mut total = 1;
    let mut buf = Vec::new();
    for _ in prefix.len()..depth {
        let mut next_items = Vec::new();
        let mut next = Vec::new();
        for (pi, w) in current.iter().enumerate() {
            buf.clear();
            g.push_out_neighbors(w.end(), &mut buf);
            for &(label, u) in &buf {
                if w.vertices.contains(&u) {
                    continue;
                }
                let mut child = w.clone();
                child.vertices.push(u);
                child.edges.push(label);
                if !keep(child.as_ref())? {
                    continue;
                }
                total += 1;
                if total > budget {
                    return Err(Error::Budget { budget });
                }
                next_items.push((pi as u32, Some(label), Some(u)));
                next.push(child);
            }
        }
        levels.push(next_items);
        current = next;
    }
    Ok(levels)
}

/// Builds the walks from `v` of length at most `depth` accepted by `keep`
/// (which must be closed under taking prefixes). Root subtrees are built in
/// parallel and merged level by level.
fn build_filtered(
    g: &dyn GraphFamily,
    v: VertexId,
    depth: usize,
    budget: usize,
    keep: &(dyn Fn(WalkRef<'_>) -> Result<bool> + Sync),
) -> Result<TruncatedTree> {
    if !g.contains(v) {
        return Err(Error::InvalidVertex {
            family: g.name().to_string(),
            vertex: v,
        });
    }
    let root = Walk::trivial(v);
    if depth == 0 || !keep(root.as_ref())? {
        return Ok(TruncatedTree::from_levels(vec![vec![(0, None, Some(v))]]));
    }
    let mut firsts = Vec::new();
    for (label, u) in crate::graph::out_neighbors(g, v)? {
        let w = Walk {
            vertices: vec![v, u],
            edges: vec![label],
        };
        if keep(w.as_ref())? {
            firsts.push(w);
        }
    }
    let subtrees: Vec<Result<Vec<Vec<LevelItem>>>> = firsts
        .par_iter()
        .map(|w| build_levels(g, w, depth, budget, keep))
        .collect();
    let mut levels: Vec<Vec<LevelItem>> = vec![vec![(0, None, Some(v))]];
    levels.resize(depth + 1, Vec::new());
    let mut total = 1;
    let subtrees = subtrees.into_iter().collect::<Result<Vec<_>>>()?;
    // offsets of each subtree's level-(l-1) block inside the merged level l-1
    let mut offsets = vec![0u32; subtrees.len()];
    for l in 1..=depth {
        let mut new_offsets = Vec::with_capacity(subtrees.len());
        for (k, sub) in subtrees.iter().enumerate() {
            new_offsets.push(levels[l].len() as u32);
            for &(p, label, vertex) in &sub[l - 1] {
                let parent = if l == 1 { 0 } else { offsets[k] + p };
                levels[l].push((parent, label, vertex));
            }
        }
        total += levels[l].len();
        if total > budget {
            return Err(Error::Budget { budget });
        }
        offsets = new_offsets;
    }
    Ok(TruncatedTree::from_levels(levels))
}

/// T(v) truncated at depth `depth`: every SAW from `v` of length <= depth.
pub fn build_saw_tree(g: &dyn GraphFamily, v: VertexId, depth: usize) -> Result<TruncatedTree> {
    build_saw_tree_with_budget(g, v, depth, NODE_BUDGET)
}

pub fn build_saw_tree_with_budget(
    g: &dyn GraphFamily,
    v: VertexId,
    depth: usize,
    budget: usize,
) -> Result<TruncatedTree> {
    build_filtered(g, v, depth, budget, &|_| Ok(true))
}

/// The tree of walks of the given mode. Forward-extendable and
/// backward-extendable walks are both closed under prefixes, as are doubly
/// extendable ones, so each set forms a subtree of T(v).
pub fn build_mode_tree(
    g: &dyn GraphFamily,
    v: VertexId,
    depth: usize,
    mode: Mode,
) -> Result<TruncatedTree> {
    let side = match mode {
        Mode::Plain => return build_saw_tree(g, v, depth),
        Mode::Forward => Side::Forward,
        Mode::Backward => Side::Backward,
        Mode::Doubly => Side::Both,
    };
    extend::ensure_supported(g)?;
    build_filtered(g, v, depth, NODE_BUDGET, &|w| {
        extend::is_extendable(g, w, side)
    })
}

/// The forward SAW tree: T(v) with its finite bushes removed.
pub fn build_forward_saw_tree(
    g: &dyn GraphFamily,
    v: VertexId,
    depth: usize,
) -> Result<TruncatedTree> {
    build_mode_tree(g, v, depth, Mode::Forward)
}

pub fn build_backward_saw_tree(
    g: &dyn GraphFamily,
    v: VertexId,
    depth: usize,
) -> Result<TruncatedTree> {
    build_mode_tree(g, v, depth, Mode::Backward)
}

pub fn build_doubly_saw_tree(
    g: &dyn GraphFamily,
    v: VertexId,
    depth: usize,
) -> Result<TruncatedTree> {
    build_mode_tree(g, v, depth, Mode::Doubly)
}

/// Keeps the nodes accepted by `oracle` whose ancestors are all kept.
/// With an oracle marking exactly the nodes with infinite subtrees in the
/// untruncated tree, this removes the finite bushes.
pub fn prune_finite_bushes(
    t: &TruncatedTree,
    oracle: impl Fn(&TruncatedTree, usize) -> bool,
) -> TruncatedTree {
    // position of each kept node within its level
    let mut kept = vec![u32::MAX; t.len()];
    let mut levels: Vec<Vec<LevelItem>> = Vec::with_capacity(t.depth + 1);
    for l in 0..=t.depth {
        let mut items = Vec::new();
        for i in t.level(l) {
            let n = &t.nodes[i];
            let parent = if n.parent == NO_PARENT {
                Some(0)
            } else {
                Some(kept[n.parent as usize]).filter(|&p| p != u32::MAX)
            };
            // the root is always kept so the result is a tree
            if let Some(p) = parent {
                if l == 0 || oracle(t, i) {
                    kept[i] = items.len() as u32;
                    items.push((p, n.label, n.vertex));
                }
            }
        }
        levels.push(items);
    }
    TruncatedTree::from_levels(levels)
}

/// Joins trees at a new root `o`: the old roots become level 1.
pub fn join_trees(ts: &[TruncatedTree]) -> Result<TruncatedTree> {
    if ts.is_empty() {
        return Err(Error::Parse("join_trees needs at least one tree".into()));
    }
    let depth = ts.iter().map(|t| t.depth).max().unwrap_or(0) + 1;
    let mut levels: Vec<Vec<LevelItem>> = vec![vec![(0, None, None)]];
    levels.resize(depth + 1, Vec::new());
    let mut offsets = vec![0u32; ts.len()];
    for (l, level) in levels.iter_mut().enumerate().skip(1) {
        let mut new_offsets = Vec::with_capacity(ts.len());
        for (k, t) in ts.iter().enumerate() {
            new_offsets.push(level.len() as u32);
            for i in t.level(l - 1) {
                let n = &t.nodes[i];
                let parent = if l == 1 {
                    0
                } else {
                    offsets[k] + (n.parent as usize - t.level_start[l - 2]) as u32
                };
                let label = if l == 1 {
                    Some(k as EdgeLabel)
                } else {
                    n.label
                };
                level.push((parent, label, n.vertex));
            }
        }
        offsets = new_offsets;
    }
    Ok(TruncatedTree::from_levels(levels))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessStatus {
    Verified,
    /// No embedding found within the search budget; this is not a proof that
    /// none exists.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessEntry {
    pub node: usize,
    pub level: usize,
    pub target: Option<usize>,
    pub depth_verified: usize,
    pub status: WitnessStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubperiodicReport {
    pub checked: usize,
    pub verified: usize,
    pub inconclusive: usize,
    pub entries: Vec<WitnessEntry>,
}

const EMBED_BUDGET: usize = 2_000_000;

/// For each sampled node `w`, looks for a node `w'` at level at most 1 and
/// an injective level-preserving homomorphism from the subtree at `w` into
/// the subtree at `w'`, checked down to the truncation depth. Candidates are
/// tried with nodes whose endpoint is in the same class as `w`'s first.
pub fn check_subperiodic_witness(
    g: &dyn GraphFamily,
    t: &TruncatedTree,
    samples: usize,
) -> SubperiodicReport {
    let total = t.len();
    let stride = (total / samples.max(1)).max(1);
    let mut entries = Vec::new();
    let mut candidates: Vec<usize> = t.level(0).chain(t.level(1)).collect();
    for i in (0..total).step_by(stride).take(samples.max(1)) {
        let level = t.nodes[i].level as usize;
        let class = t.nodes[i].vertex.map(|v| g.class_of(v));
        candidates.sort_by_key(|&c| (t.nodes[c].vertex.map(|v| g.class_of(v)) != class, c));
        let depth = t.depth - level;
        let mut status = WitnessStatus::Inconclusive;
        let mut target = None;
        for &c in &candidates {
            if (t.nodes[c].level as usize) > level {
                continue;
            }
            let mut budget = EMBED_BUDGET;
            if embeds(t, i, c, depth, &mut budget) == Some(true) {
                status = WitnessStatus::Verified;
                target = Some(c);
                break;
            }
        }
        entries.push(WitnessEntry {
            node: i,
            level,
            target,
            depth_verified: if status == WitnessStatus::Verified {
                depth
            } else {
                0
            },
            status,
        });
    }
    let verified = entries
        .iter()
        .filter(|e| e.status == WitnessStatus::Verified)
        .count();
    SubperiodicReport {
        checked: entries.len(),
        verified,
        inconclusive: entries.len() - verified,
        entries,
    }
}

/// Whether the subtree at `a` embeds into the subtree at `b` to `depth`
/// levels. `None` when the budget runs out.
fn embeds(t: &TruncatedTree, a: usize, b: usize, depth: usize, budget: &mut usize) -> Option<bool> {
    if depth == 0 {
        return Some(true);
    }
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let ca: Vec<usize> = t.children(a).collect();
    let cb: Vec<usize> = t.children(b).collect();
    if ca.len() > cb.len() {
        return Some(false);
    }
    let mut used = vec![false; cb.len()];
    match_children(t, &ca, &cb, &mut used, depth - 1, budget)
}

fn match_children(
    t: &TruncatedTree,
    ca: &[usize],
    cb: &[usize],
    used: &mut [bool],
    depth: usize,
    budget: &mut usize,
) -> Option<bool> {
    let Some((&first, rest)) = ca.split_first() else {
        return Some(true);
    };
    for j in 0..cb.len() {
        if used[j] {
            continue;
        }
        if embeds(t, first, cb[j], depth, budget)? {
            used[j] = true;
            if match_children(t, rest, cb, used, depth, budget)? {
                return Some(true);
            }
            used[j] = false;
        }
    }
    Some(false)
}
