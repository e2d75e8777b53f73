use num_rational::Rational64;

use super::{EdgeLabel, EscapeGeometry, GraphFamily, VertexId};

/// The d-regular tree, d >= 3, drawn from a root.
///
/// A vertex is `(len, address, 0)`: the path from the root as base-`d`
/// digits, most recent step least significant. The first digit ranges over
/// `0..d`, later digits over `0..d-1`. Out-labels: for the root, `0..d` are
/// its children; otherwise label 0 is the parent and `1..d` the children.
#[derive(Debug)]
pub struct RegularTree {
    degree: i64,
    name: String,
}

impl RegularTree {
    pub fn new(degree: usize) -> Self {
        assert!(degree >= 3, "regular tree needs degree >= 3");
        RegularTree {
            degree: degree as i64,
            name: format!("tree{degree}"),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn root(&self) -> VertexId {
        VertexId::new(0, 0, 0)
    }

    fn parent(&self, v: VertexId) -> Option<VertexId> {
        let [len, addr, _] = v.0;
        (len > 0).then(|| VertexId::new(len - 1, addr / self.degree, 0))
    }

    fn children(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let [len, addr, _] = v.0;
        let count = if len == 0 {
            self.degree
        } else {
            self.degree - 1
        };
        let base = addr
            .checked_mul(self.degree)
            .expect("tree address overflow");
        (0..count).map(move |c| VertexId::new(len + 1, base + c, 0))
    }

    fn push_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        let mut label = 0;
        if let Some(p) = self.parent(v) {
            out.push((0, p));
            label = 1;
        }
        for c in self.children(v) {
            out.push((label, c));
            label += 1;
        }
    }
}

impl GraphFamily for RegularTree {
    fn name(&self) -> &str {
        &self.name
    }
    fn origin(&self) -> VertexId {
        self.root()
    }
    fn max_degree(&self) -> usize {
        self.degree as usize
    }
    fn is_undirected(&self) -> bool {
        true
    }
    fn is_unimodular(&self) -> bool {
        true
    }
    fn representatives(&self) -> Vec<VertexId> {
        vec![self.root()]
    }
    fn class_of(&self, _v: VertexId) -> usize {
        0
    }
    fn contains(&self, v: VertexId) -> bool {
        let [len, addr, z] = v.0;
        if z != 0 || len < 0 || addr < 0 {
            return false;
        }
        let mut rest = addr;
        for i in 0..len {
            let digit = rest % self.degree;
            rest /= self.degree;
            let bound = if i == len - 1 {
                self.degree
            } else {
                self.degree - 1
            };
            if digit >= bound {
                return false;
            }
        }
        rest == 0
    }
    fn push_out_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        self.push_neighbors(v, out)
    }
    fn push_in_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        self.push_neighbors(v, out)
    }
    fn weight(&self, _v: VertexId) -> Rational64 {
        Rational64::from_integer(1)
    }
    fn girth(&self) -> Option<usize> {
        None
    }
    fn escape_geometry(&self) -> EscapeGeometry {
        EscapeGeometry::Tree
    }
    fn push_tree_neighbors(&self, v: VertexId, out: &mut Vec<VertexId>) {
        out.extend(self.parent(v));
        out.extend(self.children(v));
    }
    fn first_step_symmetric(&self, _v: VertexId) -> bool {
        true
    }
    fn describe(&self, v: VertexId) -> String {
        let [len, mut addr, _] = v.0;
        let mut digits = Vec::with_capacity(len as usize);
        for _ in 0..len {
            digits.push(char::from_digit((addr % self.degree) as u32, 10).unwrap_or('?'));
            addr /= self.degree;
        }
        digits.reverse();
        format!("root/{}", digits.into_iter().collect::<String>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        let t = RegularTree::new(3);
        let mut out = Vec::new();
        t.push_out_neighbors(t.root(), &mut out);
        assert_eq!(out.len(), 3);
        for &(_, c) in &out.clone() {
            out.clear();
            t.push_out_neighbors(c, &mut out);
            assert_eq!(out.len(), 3);
            assert_eq!(out[0].1, t.root());
            assert!(t.contains(c));
        }
    }

    #[test]
    fn encoding_validation() {
        let t = RegularTree::new(3);
        // root child 2 then child 1: digits [2, 1] -> 2*3 + 1
        assert!(t.contains(VertexId::new(2, 7, 0)));
        // second digit 2 is not a valid non-root child
        assert!(!t.contains(VertexId::new(2, 8, 0)));
        assert!(!t.contains(VertexId::new(1, 3, 0)));
    }
}
