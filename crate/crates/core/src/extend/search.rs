//! Exhaustive finite-extension search: an independent semi-oracle for the
//! exact escape certificates.

use std::collections::HashSet;

use super::Side;
use crate::graph::{EscapeGeometry, GraphFamily, SinkRule, VertexId};
use crate::walk::WalkRef;

/// Whether `w` has a self-avoiding extension by `k` steps on the given
/// side(s). Forward extensions follow out-edges from the end, backward ones
/// follow in-edges into the start; for `Side::Both` the two extensions must
/// be vertex-disjoint.
pub fn extendable_by(g: &dyn GraphFamily, w: WalkRef<'_>, k: usize, side: Side) -> bool {
    if k == 0 {
        return true;
    }
    let mut blocked: HashSet<VertexId> = w.vertices.iter().copied().collect();
    let mut buffers = vec![Vec::new(); k + 1];
    match side {
        Side::Forward => grow(g, true, w.end(), k, &mut blocked, &mut buffers, &mut |_| {
            true
        }),
        Side::Backward => grow(
            g,
            false,
            w.start(),
            k,
            &mut blocked,
            &mut buffers,
            &mut |_| true,
        ),
        Side::Both => {
            if !extendable_by(g, w, k, Side::Forward) || !extendable_by(g, w, k, Side::Backward) {
                return false;
            }
            let mut inner = vec![Vec::new(); k + 1];
            grow_jointly(
                g,
                w.end(),
                k,
                w.start(),
                k,
                &mut blocked,
                &mut buffers,
                &mut inner,
            )
        }
    }
}

/// Forward paths from `at` with `left` steps to go, each prefix kept only
/// while a `k`-step backward path from `start` still avoids it. Blocking more
/// vertices never helps the backward side, so the pruning loses nothing.
#[allow(clippy::too_many_arguments)]
fn grow_jointly(
    g: &dyn GraphFamily,
    at: VertexId,
    left: usize,
    start: VertexId,
    k: usize,
    blocked: &mut HashSet<VertexId>,
    buffers: &mut [Vec<(u8, VertexId)>],
    inner: &mut [Vec<(u8, VertexId)>],
) -> bool {
    if !grow(g, false, start, k, blocked, inner, &mut |_| true) {
        return false;
    }
    if left == 0 {
        return true;
    }
    let mut buf = std::mem::take(&mut buffers[left]);
    buf.clear();
    g.push_out_neighbors(at, &mut buf);
    let mut found = false;
    for &(_, u) in &buf {
        if blocked.insert(u) {
            found = grow_jointly(g, u, left - 1, start, k, blocked, buffers, inner);
            blocked.remove(&u);
            if found {
                break;
            }
        }
    }
    buffers[left] = buf;
    found
}

/// Depth-first search for a `k`-step path from `at` avoiding `blocked`; calls
/// `done` on each complete path (with the path's vertices blocked) and stops
/// at the first `true`.
fn grow(
    g: &dyn GraphFamily,
    forward: bool,
    at: VertexId,
    k: usize,
    blocked: &mut HashSet<VertexId>,
    buffers: &mut [Vec<(u8, VertexId)>],
    done: &mut dyn FnMut(&mut HashSet<VertexId>) -> bool,
) -> bool {
    if k == 0 {
        return done(blocked);
    }
    let mut buf = std::mem::take(&mut buffers[k]);
    buf.clear();
    if forward {
        g.push_out_neighbors(at, &mut buf);
    } else {
        g.push_in_neighbors(at, &mut buf);
    }
    let mut found = false;
    for &(_, u) in &buf {
        if blocked.insert(u) {
            found = grow(g, forward, u, k - 1, blocked, buffers, done);
            blocked.remove(&u);
            if found {
                break;
            }
        }
    }
    buffers[k] = buf;
    found
}

/// For the lattices framed by their full box boundary: one more than the number of vertices of the
/// walk's bounding box not on the walk. Any extension this long must leave
/// the box, which on the planar and cubic lattices is equivalent to
/// escaping to infinity.
pub fn bounding_box_k(g: &dyn GraphFamily, w: WalkRef<'_>) -> Option<usize> {
    let EscapeGeometry::Lattice {
        box_dims,
        rule: SinkRule::Boundary,
    } = g.escape_geometry()
    else {
        return None;
    };
    let mut volume: usize = 1;
    for i in 0..box_dims {
        let lo = w.vertices.iter().map(|v| v.0[i]).min()?;
        let hi = w.vertices.iter().map(|v| v.0[i]).max()?;
        volume *= (hi - lo + 1) as usize;
    }
    Some(volume - w.vertices.len() + 1)
}
