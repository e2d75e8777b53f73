use num_rational::Rational64;

use super::{EdgeLabel, EscapeGeometry, GraphFamily, SinkRule, VertexId};

/// A Cayley graph of Z^d given by a symmetric list of unit steps. Vertex
/// coordinates are the lattice coordinates; unused slots are zero.
#[derive(Debug)]
struct StepLattice {
    name: &'static str,
    dims: usize,
    steps: &'static [[i64; 3]],
    girth: usize,
}

impl StepLattice {
    fn contains(&self, v: VertexId) -> bool {
        v.0[self.dims..].iter().all(|&c| c == 0)
    }

    fn push(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        for (i, s) in self.steps.iter().enumerate() {
            out.push((
                i as EdgeLabel,
                VertexId([v.0[0] + s[0], v.0[1] + s[1], v.0[2] + s[2]]),
            ));
        }
    }
}

macro_rules! step_lattice {
    ($(#[$doc:meta])* $ty:ident, $name:expr, $dims:expr, $girth:expr, $steps:expr) => {
        $(#[$doc])*
        #[derive(Debug)]
        pub struct $ty(StepLattice);

        impl Default for $ty {
            fn default() -> Self {
                $ty(StepLattice { name: $name, dims: $dims, steps: $steps, girth: $girth })
            }
        }

        impl GraphFamily for $ty {
            fn name(&self) -> &str {
                self.0.name
            }
            fn origin(&self) -> VertexId {
                VertexId::new(0, 0, 0)
            }
            fn max_degree(&self) -> usize {
                self.0.steps.len()
            }
            fn is_undirected(&self) -> bool {
                true
            }
            fn is_unimodular(&self) -> bool {
                true
            }
            fn representatives(&self) -> Vec<VertexId> {
                vec![self.origin()]
            }
            fn class_of(&self, _v: VertexId) -> usize {
                0
            }
            fn contains(&self, v: VertexId) -> bool {
                self.0.contains(v)
            }
            fn push_out_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
                self.0.push(v, out)
            }
            fn push_in_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
                self.0.push(v, out)
            }
            fn weight(&self, _v: VertexId) -> Rational64 {
                Rational64::from_integer(1)
            }
            fn girth(&self) -> Option<usize> {
                Some(self.0.girth)
            }
            fn escape_geometry(&self) -> EscapeGeometry {
                EscapeGeometry::Lattice { box_dims: self.0.dims, rule: SinkRule::Boundary }
            }
            fn first_step_symmetric(&self, _v: VertexId) -> bool {
                true
            }
            fn describe(&self, v: VertexId) -> String {
                let c = &v.0[..self.0.dims];
                format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    };
}

step_lattice!(
    /// Z^2 with steps E, W, N, S (labels 0..4).
    SquareLattice,
    "square",
    2,
    4,
    &[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]]
);

step_lattice!(
    /// Z^3 with steps E, W, N, S, U, D (labels 0..6).
    CubicLattice,
    "cubic",
    3,
    4,
    &[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]
);

step_lattice!(
    /// The triangular lattice as Z^2 plus the (1,1) diagonals: E, W, N, S,
    /// NE, SW (labels 0..6).
    TriangularLattice,
    "triangular",
    2,
    3,
    &[[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [1, 1, 0], [-1, -1, 0]]
);

/// Z x {0,1}. Vertex `(x, r, 0)`; labels: 0 = +x, 1 = -x, 2 = rung.
#[derive(Debug, Default)]
pub struct Ladder;

impl GraphFamily for Ladder {
    fn name(&self) -> &str {
        "ladder"
    }
    fn origin(&self) -> VertexId {
        VertexId::planar(0, 0)
    }
    fn max_degree(&self) -> usize {
        3
    }
    fn is_undirected(&self) -> bool {
        true
    }
    fn is_unimodular(&self) -> bool {
        true
    }
    fn representatives(&self) -> Vec<VertexId> {
        vec![self.origin()]
    }
    fn class_of(&self, _v: VertexId) -> usize {
        0
    }
    fn contains(&self, v: VertexId) -> bool {
        (v.0[1] == 0 || v.0[1] == 1) && v.0[2] == 0
    }
    fn push_out_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        let [x, r, _] = v.0;
        out.push((0, VertexId::planar(x + 1, r)));
        out.push((1, VertexId::planar(x - 1, r)));
        out.push((2, VertexId::planar(x, 1 - r)));
    }
    fn push_in_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        self.push_out_neighbors(v, out)
    }
    fn weight(&self, _v: VertexId) -> Rational64 {
        Rational64::from_integer(1)
    }
    fn girth(&self) -> Option<usize> {
        Some(4)
    }
    fn escape_geometry(&self) -> EscapeGeometry {
        EscapeGeometry::Lattice {
            box_dims: 1,
            rule: SinkRule::LadderEnds,
        }
    }
    fn describe(&self, v: VertexId) -> String {
        format!("({},{})", v.0[0], v.0[1])
    }
}

/// The ladder with bidirected rungs, the bottom rail `r = 0` oriented towards
/// +x and the top rail `r = 1` towards -x. Out-labels: 0 = rail, 1 = rung;
/// in-labels: 0 = rail, 1 = rung.
#[derive(Debug, Default)]
pub struct OrientedLadder;

impl OrientedLadder {
    fn rail_dir(r: i64) -> i64 {
        if r == 0 {
            1
        } else {
            -1
        }
    }
}

impl GraphFamily for OrientedLadder {
    fn name(&self) -> &str {
        "oriented-ladder"
    }
    fn origin(&self) -> VertexId {
        VertexId::planar(0, 0)
    }
    fn max_degree(&self) -> usize {
        2
    }
    fn is_undirected(&self) -> bool {
        false
    }
    fn is_unimodular(&self) -> bool {
        true
    }
    // (x, r) -> (-x, 1 - r) is an automorphism, so there is one class.
    fn representatives(&self) -> Vec<VertexId> {
        vec![self.origin()]
    }
    fn class_of(&self, _v: VertexId) -> usize {
        0
    }
    fn contains(&self, v: VertexId) -> bool {
        (v.0[1] == 0 || v.0[1] == 1) && v.0[2] == 0
    }
    fn push_out_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        let [x, r, _] = v.0;
        out.push((0, VertexId::planar(x + Self::rail_dir(r), r)));
        out.push((1, VertexId::planar(x, 1 - r)));
    }
    fn push_in_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        let [x, r, _] = v.0;
        out.push((0, VertexId::planar(x - Self::rail_dir(r), r)));
        out.push((1, VertexId::planar(x, 1 - r)));
    }
    fn weight(&self, _v: VertexId) -> Rational64 {
        Rational64::from_integer(1)
    }
    fn girth(&self) -> Option<usize> {
        Some(4)
    }
    fn escape_geometry(&self) -> EscapeGeometry {
        EscapeGeometry::Lattice {
            box_dims: 1,
            rule: SinkRule::OrientedLadderEnds,
        }
    }
    fn describe(&self, v: VertexId) -> String {
        format!("({},{})", v.0[0], v.0[1])
    }
}

/// Z^2 with a degree-2 vertex inserted on every edge, in doubled
/// coordinates: lattice vertices have both coordinates even, edge vertices
/// exactly one odd coordinate. Two transitivity classes: lattice (0) and
/// edge (1). Labels follow E, W, N, S restricted to the existing steps.
#[derive(Debug, Default)]
pub struct DecoratedSquare;

impl DecoratedSquare {
    fn is_lattice(v: VertexId) -> bool {
        v.0[0].rem_euclid(2) == 0 && v.0[1].rem_euclid(2) == 0
    }
}

impl GraphFamily for DecoratedSquare {
    fn name(&self) -> &str {
        "decorated-square"
    }
    fn origin(&self) -> VertexId {
        VertexId::planar(0, 0)
    }
    fn max_degree(&self) -> usize {
        4
    }
    fn is_undirected(&self) -> bool {
        true
    }
    fn is_unimodular(&self) -> bool {
        true
    }
    fn representatives(&self) -> Vec<VertexId> {
        vec![VertexId::planar(0, 0), VertexId::planar(1, 0)]
    }
    fn class_of(&self, v: VertexId) -> usize {
        if Self::is_lattice(v) {
            0
        } else {
            1
        }
    }
    fn contains(&self, v: VertexId) -> bool {
        v.0[2] == 0 && !(v.0[0].rem_euclid(2) == 1 && v.0[1].rem_euclid(2) == 1)
    }
    fn push_out_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        let [x, y, _] = v.0;
        let horizontal = y.rem_euclid(2) == 0;
        let vertical = x.rem_euclid(2) == 0;
        let mut label = 0;
        let mut push = |p: VertexId| {
            out.push((label, p));
            label += 1;
        };
        if horizontal {
            push(VertexId::planar(x + 1, y));
            push(VertexId::planar(x - 1, y));
        }
        if vertical {
            push(VertexId::planar(x, y + 1));
            push(VertexId::planar(x, y - 1));
        }
    }
    fn push_in_neighbors(&self, v: VertexId, out: &mut Vec<(EdgeLabel, VertexId)>) {
        self.push_out_neighbors(v, out)
    }
    /// A lattice vertex sees 4 edge vertices in its stabiliser orbit while an
    /// edge vertex sees 2 lattice vertices, so M(lattice) / M(edge) = 2.
    fn weight(&self, v: VertexId) -> Rational64 {
        if Self::is_lattice(v) {
            Rational64::from_integer(2)
        } else {
            Rational64::from_integer(1)
        }
    }
    fn girth(&self) -> Option<usize> {
        Some(8)
    }
    fn escape_geometry(&self) -> EscapeGeometry {
        EscapeGeometry::Lattice {
            box_dims: 2,
            rule: SinkRule::EvenBoundary,
        }
    }
    fn describe(&self, v: VertexId) -> String {
        format!("({},{})", v.0[0], v.0[1])
    }
}
