//! Name-based lookup of the built-in families. The names are the values
//! accepted by the CLI's `--graph` flag.

use std::sync::Arc;

use super::{
    CubicLattice, DecoratedSquare, GrandparentGraph, Graph, Ladder, OrientedLadder, RegularTree,
    SquareLattice, TriangularLattice,
};
use crate::error::{Error, Result};

type Constructor = fn() -> Graph;

const FAMILIES: &[(&str, Constructor)] = &[
    ("square", || Arc::new(SquareLattice::default())),
    ("cubic", || Arc::new(CubicLattice::default())),
    ("triangular", || Arc::new(TriangularLattice::default())),
    ("ladder", || Arc::new(Ladder)),
    ("tree3", || Arc::new(RegularTree::new(3))),
    ("tree4", || Arc::new(RegularTree::new(4))),
    ("decorated-square", || Arc::new(DecoratedSquare)),
    ("grandparent", || Arc::new(GrandparentGraph)),
    ("oriented-ladder", || Arc::new(OrientedLadder)),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    FAMILIES.iter().map(|(name, _)| *name)
}

pub fn by_name(name: &str) -> Result<Graph> {
    FAMILIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, make)| make())
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))
}

pub fn all() -> Vec<Graph> {
    FAMILIES.iter().map(|(_, make)| make()).collect()
}
