//! Independent oracles for the integration tests. They use nothing from the
//! library except the graph trait and deliberately favour obviousness over
//! speed.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use sawext::graph::GraphFamily;
use sawext::{VertexId, Walk};

fn out(g: &dyn GraphFamily, v: VertexId) -> Vec<VertexId> {
    let mut buf = Vec::new();
    g.push_out_neighbors(v, &mut buf);
    buf.into_iter().map(|(_, u)| u).collect()
}

/// Plain recursive count of `n`-step SAWs from `v`.
pub fn naive_count(g: &dyn GraphFamily, v: VertexId, n: usize) -> u128 {
    fn go(g: &dyn GraphFamily, path: &mut Vec<VertexId>, left: usize) -> u128 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for u in out(g, *path.last().unwrap()) {
            if !path.contains(&u) {
                path.push(u);
                total += go(g, path, left - 1);
                path.pop();
            }
        }
        total
    }
    go(g, &mut vec![v], n)
}

/// Every `n`-step SAW from `v`, as vertex sequences.
pub fn naive_walks(g: &dyn GraphFamily, v: VertexId, n: usize) -> Vec<Walk> {
    fn go(g: &dyn GraphFamily, path: &mut Vec<VertexId>, left: usize, acc: &mut Vec<Walk>) {
        if left == 0 {
            acc.push(Walk::from_vertices(g, path.clone()).unwrap());
            return;
        }
        for u in out(g, *path.last().unwrap()) {
            if !path.contains(&u) {
                path.push(u);
                go(g, path, left - 1, acc);
                path.pop();
            }
        }
    }
    let mut acc = Vec::new();
    go(g, &mut vec![v], n, &mut acc);
    acc
}

/// Z^2 box one step larger than the walk's bounding box.
fn square_box(w: &Walk) -> (i64, i64, i64, i64) {
    let xs = w.vertices.iter().map(|v| v.0[0]);
    let ys = w.vertices.iter().map(|v| v.0[1]);
    (
        xs.clone().min().unwrap() - 1,
        xs.max().unwrap() + 1,
        ys.clone().min().unwrap() - 1,
        ys.max().unwrap() + 1,
    )
}

fn grid_neighbors(v: VertexId) -> [VertexId; 4] {
    let [x, y, _] = v.0;
    [
        VertexId::planar(x + 1, y),
        VertexId::planar(x - 1, y),
        VertexId::planar(x, y + 1),
        VertexId::planar(x, y - 1),
    ]
}

/// On Z^2 a walk extends from `root` iff `root` reaches the boundary of the
/// enlarged bounding box without touching the walk: from there a straight
/// outward ray finishes the job, and every infinite extension has to cross
/// that boundary.
pub fn square_escapes(w: &Walk, root: VertexId) -> bool {
    let (x0, x1, y0, y1) = square_box(w);
    let blocked: HashSet<VertexId> = w.vertices.iter().copied().filter(|&v| v != root).collect();
    let mut seen = HashSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let [x, y, _] = v.0;
        if x == x0 || x == x1 || y == y0 || y == y1 {
            return true;
        }
        for u in grid_neighbors(v) {
            if !blocked.contains(&u) && seen.insert(u) {
                queue.push_back(u);
            }
        }
    }
    false
}

/// Z^2 doubly-extendable oracle: two vertex-disjoint routes from the two
/// ends of the walk to distinct boundary vertices of the enlarged box, found
/// by two rounds of augmenting paths on the vertex-split grid. Outward rays
/// from distinct boundary vertices never meet.
pub fn square_doubly(w: &Walk) -> bool {
    let (x0, x1, y0, y1) = square_box(w);
    let (s, e) = (w.start(), w.end());
    let interior: HashSet<VertexId> = w
        .vertices
        .iter()
        .copied()
        .filter(|&v| v != s && v != e)
        .collect();
    // node 2k = in-copy of vertex k, 2k+1 = out-copy; source and sink last
    let mut ids: HashMap<VertexId, usize> = HashMap::new();
    let mut verts = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            let v = VertexId::planar(x, y);
            if !interior.contains(&v) {
                ids.insert(v, verts.len());
                verts.push(v);
            }
        }
    }
    let nodes = 2 * verts.len() + 2;
    let (src, sink) = (nodes - 2, nodes - 1);
    let mut cap: HashMap<(usize, usize), i32> = HashMap::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut add = |a: usize, b: usize, c: i32, cap: &mut HashMap<(usize, usize), i32>| {
        *cap.entry((a, b)).or_insert(0) += c;
        cap.entry((b, a)).or_insert(0);
        adj[a].push(b);
        adj[b].push(a);
    };
    for (k, &v) in verts.iter().enumerate() {
        let through = if s == e && v == s { 2 } else { 1 };
        add(2 * k, 2 * k + 1, through, &mut cap);
        for u in grid_neighbors(v) {
            if let Some(&j) = ids.get(&u) {
                add(2 * k + 1, 2 * j, 1, &mut cap);
            }
        }
        let [x, y, _] = v.0;
        if x == x0 || x == x1 || y == y0 || y == y1 {
            add(2 * k + 1, sink, 1, &mut cap);
        }
    }
    if s == e {
        add(src, 2 * ids[&s], 2, &mut cap);
    } else {
        add(src, 2 * ids[&s], 1, &mut cap);
        add(src, 2 * ids[&e], 1, &mut cap);
    }
    let mut flow = 0;
    for _ in 0..2 {
        let mut prev = vec![usize::MAX; nodes];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if prev[b] == usize::MAX && cap[&(a, b)] > 0 {
                    prev[b] = a;
                    queue.push_back(b);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut b = sink;
        while b != src {
            let a = prev[b];
            *cap.get_mut(&(a, b)).unwrap() -= 1;
            *cap.get_mut(&(b, a)).unwrap() += 1;
            b = a;
        }
        flow += 1;
    }
    flow == 2
}

/// Undirected BFS ball with distances.
pub fn bfs_ball(g: &dyn GraphFamily, center: VertexId, radius: usize) -> HashMap<VertexId, usize> {
    let mut dist = HashMap::from([(center, 0)]);
    let mut queue = VecDeque::from([center]);
    let mut buf = Vec::new();
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        buf.clear();
        g.push_out_neighbors(x, &mut buf);
        g.push_in_neighbors(x, &mut buf);
        for &(_, y) in &buf {
            dist.entry(y).or_insert_with(|| {
                queue.push_back(y);
                d + 1
            });
        }
    }
    dist
}

pub fn bfs_distance(g: &dyn GraphFamily, u: VertexId, v: VertexId, cap: usize) -> Option<usize> {
    bfs_ball(g, u, cap).get(&v).copied()
}

/// Whether some bijection from the radius-`r` ball around `u` onto the one
/// around `v` preserves directed edges and sends `u` to `v` and each pinned
/// vertex to its partner.
pub fn ball_isomorphic(
    g: &dyn GraphFamily,
    u: VertexId,
    v: VertexId,
    r: usize,
    pins: &[(VertexId, VertexId)],
) -> bool {
    let a = bfs_ball(g, u, r);
    let b = bfs_ball(g, v, r);
    if a.len() != b.len() {
        return false;
    }
    let pinned: HashMap<VertexId, VertexId> = pins.iter().copied().collect();
    // u first, then pinned vertices, then by distance
    let mut order: Vec<VertexId> = a.keys().copied().collect();
    order.sort_by_key(|x| (x != &u, !pinned.contains_key(x), a[x], *x));
    let edges = |ball: &HashMap<VertexId, usize>| -> HashSet<(VertexId, VertexId)> {
        let mut set = HashSet::new();
        for &x in ball.keys() {
            for y in out(g, x) {
                if ball.contains_key(&y) {
                    set.insert((x, y));
                }
            }
        }
        set
    };
    let (ea, eb) = (edges(&a), edges(&b));
    let targets: Vec<VertexId> = b.keys().copied().collect();
    let ctx = Ctx {
        order: &order,
        a: &a,
        b: &b,
        ea: &ea,
        eb: &eb,
        targets: &targets,
        u,
        v,
        pinned: &pinned,
    };
    search(&ctx, &mut Vec::new(), &mut HashSet::new())
}

struct Ctx<'s> {
    order: &'s [VertexId],
    a: &'s HashMap<VertexId, usize>,
    b: &'s HashMap<VertexId, usize>,
    ea: &'s HashSet<(VertexId, VertexId)>,
    eb: &'s HashSet<(VertexId, VertexId)>,
    targets: &'s [VertexId],
    u: VertexId,
    v: VertexId,
    pinned: &'s HashMap<VertexId, VertexId>,
}

fn search(c: &Ctx<'_>, map: &mut Vec<VertexId>, used: &mut HashSet<VertexId>) -> bool {
    let i = map.len();
    if i == c.order.len() {
        return true;
    }
    let x = c.order[i];
    let forced = if x == c.u {
        Some(c.v)
    } else {
        c.pinned.get(&x).copied()
    };
    let candidates: Vec<VertexId> = match forced {
        Some(y) => vec![y],
        None => c.targets.to_vec(),
    };
    for y in candidates {
        if used.contains(&y) || c.b.get(&y) != Some(&c.a[&x]) {
            continue;
        }
        let consistent = (0..i).all(|j| {
            let (xj, yj) = (c.order[j], map[j]);
            c.ea.contains(&(x, xj)) == c.eb.contains(&(y, yj))
                && c.ea.contains(&(xj, x)) == c.eb.contains(&(yj, y))
        });
        if consistent {
            map.push(y);
            used.insert(y);
            if search(c, map, used) {
                return true;
            }
            used.remove(&y);
            map.pop();
        }
    }
    false
}

/// Size of the orbit of `probe` under ball automorphisms fixing `u`.
pub fn ball_orbit(g: &dyn GraphFamily, u: VertexId, probe: VertexId, r: usize) -> usize {
    let ball = bfs_ball(g, u, r);
    let d = ball[&probe];
    ball.iter()
        .filter(|&(_, &e)| e == d)
        .filter(|&(&y, _)| ball_isomorphic(g, u, u, r, &[(probe, y)]))
        .count()
}
