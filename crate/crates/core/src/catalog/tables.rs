//! Eigenlattice tables of the real K3 involutions, transcribed row by row.
//!
//! Principal series rows carry the row parameter, the largest value of the
//! free topological parameter (reached at `t = 0`), the number of ⟨2⟩
//! summands and the non-diagonal summands. The diagonal component of every
//! row is `s⟨2⟩ + t⟨−2⟩`.

use super::TopKind;
use crate::lattice::StandardLattice::{self, D4, E7, E8, E8x2, U, U2};

/// One row of the `L+` table: vertex `[S_{p0−t} ⊔ qS]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlusRow {
    pub q: u32,
    pub p0: u32,
    pub s: usize,
    pub blocks: Vec<StandardLattice>,
}

/// One row of the `L−` table: vertex `[S_p ⊔ (q0−t)S]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinusRow {
    pub p: u32,
    pub q0: u32,
    pub s: usize,
    pub blocks: Vec<StandardLattice>,
}

/// A vertex outside the principal series, with both eigenlattices given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OtherRow {
    pub top: TopKind,
    pub subscript_i: bool,
    pub lplus: Vec<StandardLattice>,
    pub lminus: Vec<StandardLattice>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogTables {
    pub plus: Vec<PlusRow>,
    pub minus: Vec<MinusRow>,
    pub other: Vec<OtherRow>,
}

fn plus(q: u32, p0: u32, s: usize, blocks: &[StandardLattice]) -> PlusRow {
    PlusRow {
        q,
        p0,
        s,
        blocks: blocks.to_vec(),
    }
}

fn minus(p: u32, q0: u32, s: usize, blocks: &[StandardLattice]) -> MinusRow {
    MinusRow {
        p,
        q0,
        s,
        blocks: blocks.to_vec(),
    }
}

fn other(p: u32, q: u32, lplus: &[StandardLattice], lminus: &[StandardLattice]) -> OtherRow {
    OtherRow {
        top: TopKind::SpPlusQs { p, q },
        subscript_i: true,
        lplus: lplus.to_vec(),
        lminus: lminus.to_vec(),
    }
}

impl CatalogTables {
    pub fn builtin() -> Self {
        let plus = vec![
            //   q  p0  s   non-diagonal
            plus(0, 10, 1, &[]),
            plus(1, 10, 0, &[U]),
            plus(2, 7, 0, &[U, D4]),
            plus(3, 6, 1, &[E7]),
            plus(4, 6, 1, &[E8]),
            plus(5, 6, 0, &[U, E8]),
            plus(6, 3, 0, &[U, D4, E8]),
            plus(7, 2, 1, &[E7, E8]),
            plus(8, 2, 1, &[E8, E8]),
            plus(9, 2, 0, &[U, E8, E8]),
        ];
        // The p = 0 row lists [(10−t)S], i.e. q0 = 9 after normalization.
        let minus = vec![
            //    p  q0  s   non-diagonal
            minus(0, 9, 2, &[]),
            minus(1, 9, 1, &[U]),
            minus(2, 9, 0, &[U, U]),
            minus(3, 6, 0, &[U, U, D4]),
            minus(4, 5, 2, &[E8]),
            minus(5, 5, 1, &[U, E8]),
            minus(6, 5, 0, &[U, U, E8]),
            minus(7, 2, 0, &[U, U, D4, E8]),
            minus(8, 1, 2, &[E8, E8]),
            minus(9, 1, 1, &[U, E8, E8]),
            minus(10, 1, 0, &[U, U, E8, E8]),
        ];
        let other = vec![
            other(0, 7, &[U, D4, D4, E8], &[U2, U2]),
            other(1, 8, &[U2, E8, E8], &[U, U2]),
            other(1, 4, &[U, D4, D4, D4], &[U2, U2, D4]),
            other(2, 5, &[U2, D4, E8], &[U, U2, D4]),
            other(3, 2, &[U2, D4, D4], &[U, U2, D4, D4]),
            other(4, 3, &[U, D4, D4], &[U, U, D4, D4]),
            other(5, 4, &[U2, E8], &[U, U2, E8]),
            other(6, 1, &[U2, D4], &[U, U2, D4, E8]),
            other(9, 0, &[U2], &[U, U2, E8, E8]),
            OtherRow {
                top: TopKind::TwoTori,
                subscript_i: false,
                lplus: vec![U, E8x2],
                lminus: vec![U, U, E8x2],
            },
            OtherRow {
                top: TopKind::Empty,
                subscript_i: false,
                lplus: vec![U2, E8x2],
                lminus: vec![U, U2, E8x2],
            },
        ];
        Self { plus, minus, other }
    }
}
