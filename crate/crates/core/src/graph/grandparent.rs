use num_rational::Rational64;

use super::{EdgeLabel, EscapeGeometry, GraphFamily, VertexId};

/// The grandparent graph: the 3-regular tree with a distinguished end ξ,
/// tree edges in both directions, plus a directed edge from every vertex to
/// its ξ-grandparent. Transitive and non-unimodular.
///
/// Every vertex has a parent (its neighbour towards ξ) and two children.
/// The spine `a_k`, k in Z, is the line through the origin `a_0` with
/// `a_{k-1}` the 0-child of `a_k`; ξ is reached by climbing the spine.
/// A vertex is `(k, len, bits)`: start at `a_k` and descend along the
/// `len`-letter binary word `bits` (first letter most significant). The
/// encoding is canonical when the word is empty or starts with 1.
///
/// Levels increase towards ξ: `level = k - len`. The parent's stabiliser
/// orbit of a child has size 2 while the child fixes its parent, so
/// M(parent) = 2 M(child) and M(v) = 2^level(v).
///
/// Out-labels: 0 parent, 1 child-0, 2 child-1, 3 grandparent.
/// In-labels: 0 parent, 1 child-0, 2 child-1, 3..7 grandchildren 00, 01, 10, 11.
#[derive(Debug, Default)]
pub struct GrandparentGraph;

/// The modular constant: M(φ v) = MODULAR_CONSTANT * M(v).
pub const MODULAR_CONSTANT: i64 = 2;

impl GrandparentGraph {
    pub fn spine(k: i64) -> VertexId {
        VertexId::new(k, 0, 0)
    }

    pub fn level(v: VertexId) -> i64 {
        v.0[0] - v.0[1]
    }

    pub fn parent(v: VertexId) -> VertexId {
        let [k, len, bits] = v.0;
        if len == 0 {
            VertexId::new(k + 1, 0, 0)
        } else {
            VertexId::new(k, len - 1, bits >> 1)
        }
    }

    pub fn child(v: VertexId, c: i64) -> VertexId {
        let [k, len, bits] = v.0;
        if len == 0 {
            if c == 0 {
                VertexId::new(k - 1, 0, 0)
            } else {
                VertexId::new(k, 1, 1)
            }
        } else {
            assert!(len < 62, "grandparent address overflow");
            VertexId::new(k, len + 1, (bits << 1) | c)
        }
    }

    /// The level-shift automorphism φ^i: `a_k -> a_{k+i}`, carrying the
    /// hanging subtrees along. Raises levels (and weights by 2^i).
    pub fn shift(v: VertexId, i: i64) -> VertexId {
        VertexId::new(v.0[0] + i, v.0[1], v.0[2])
    }

    /// The ancestor of `v` at level `m >= level(v)`.
    pub fn ancestor_at(v: VertexId, m: i64) -> VertexId {
        let [k, len, bits] = v.0;
        let t = m - Self::level(v);
        debug_assert!(t >= 0);
        if t <= len {
            VertexId::new(k, len - t, if t >= 63 { 0 } else { bits >> t })
        } else {
            VertexId::new(k + (t - len), 0, 0)
        }
    }

    /// Tree distance split as (steps up from `u`, steps down to `v`) through
    /// their lowest common ancestor.
    pub fn tree_legs(u: VertexId, v: VertexId) -> (i64, i64) {
        let (lu, lv) = (Self::level(u), Self::level(v));
        let mut m = lu.max(lv);
        while Self::ancestor_at(u, m) != Self::ancestor_at(v, m) {
            m += 1;
        }
        (m - lu, m - lv)
    }

    /// Undirected graph distance. Any path between the two branches has to
    /// climb to the common ancestor's level, and a move changes the level by
    /// at most 2, so the distance is `ceil(up/2) + ceil(down/2)`.
    pub fn distance(u: VertexId, v: VertexId) -> usize {
        let (a, b) = Self::tree_legs(u, v);
        ((a + 1) / 2 + (b + 1) / 2) as usize
    }
}

impl GraphFamily for GrandparentGraph {
    fn name(&self) -> &str {
        "grandparent"
    }
    fn origin(&self) -> VertexId {
        Self::spine(0)
    }
    fn max_degree(&self) -> usize {
        7
    }
    fn is_undirected(&self) -> bool {
        false
    }
    fn is_unimodular(&self) -> bool {
        false
    }
    fn representatives(&self) -> Vec<VertexId> {
        vec![self.origin()]
    }
    fn class_of(&self, _v: VertexId) -> usize {
        0
    }
    fn contains(&self, v: VertexId) -> bool {
        let [_, len, bits] = v.0;
        if len == 0 {
            bits == 0
        } else {
            (1..62).contains(&len) && bits >> (len - 1) == 1
        }
    }
    fn push_out_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        let p = Self::parent(v);
        out.push((0, p));
        out.push((1, Self::child(v, 0)));
        out.push((2, Self::child(v, 1)));
        out.push((3, Self::parent(p)));
    }
    fn push_in_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        out.push((0, Self::parent(v)));
        let c0 = Self::child(v, 0);
        let c1 = Self::child(v, 1);
        out.push((1, c0));
        out.push((2, c1));
        let mut label = 3;
        for c in [c0, c1] {
            for g in 0..2 {
                out.push((label, Self::child(c, g)));
                label += 1;
            }
        }
    }
    fn weight(&self, v: VertexId) -> Rational64 {
        let level = Self::level(v);
        let p = MODULAR_CONSTANT.pow(level.unsigned_abs() as u32);
        if level >= 0 {
            Rational64::from_integer(p)
        } else {
            Rational64::new(1, p)
        }
    }
    fn girth(&self) -> Option<usize> {
        Some(3)
    }
    fn escape_geometry(&self) -> EscapeGeometry {
        EscapeGeometry::Tree
    }
    fn push_tree_neighbors(&self, v: VertexId, out: &mut Vec<VertexId>) {
        out.push(Self::parent(v));
        out.push(Self::child(v, 0));
        out.push(Self::child(v, 1));
    }
    fn describe(&self, v: VertexId) -> String {
        let [k, len, bits] = v.0;
        let word: String = (0..len)
            .rev()
            .map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' })
            .collect();
        format!("a{k}/{word}")
    }
}
