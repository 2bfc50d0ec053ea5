use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GramLattice;
use crate::error::Error;
use crate::matrix::IntMatrix;

/// The named building blocks every catalog lattice is assembled from.
///
/// Root lattices are negative definite. Their bases are the simple roots in
/// Bourbaki order, so the Gram matrix is the negated Cartan matrix:
///
/// ```text
/// D4:  1 - 0, 1 - 2, 1 - 3            (node 1 is the branch point)
/// E7:  0 - 2 - 3 - 4 - 5 - 6, 1 - 3
/// E8:  0 - 2 - 3 - 4 - 5 - 6 - 7, 1 - 3
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StandardLattice {
    /// ⟨2⟩
    Plus2,
    /// ⟨−2⟩
    Minus2,
    /// ⟨1⟩
    One,
    U,
    U2,
    D4,
    E7,
    E8,
    E8x2,
}

const D4_EDGES: &[(usize, usize)] = &[(0, 1), (1, 2), (1, 3)];
const E7_EDGES: &[(usize, usize)] = &[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 3)];
const E8_EDGES: &[(usize, usize)] = &[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

fn negated_cartan(rank: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = IntMatrix::zeros(rank, rank);
    for i in 0..rank {
        g[(i, i)] = (-2).into();
    }
    for &(a, b) in edges {
        g[(a, b)] = 1.into();
        g[(b, a)] = 1.into();
    }
    g
}

impl StandardLattice {
    pub const ALL: [StandardLattice; 9] = [
        Self::Plus2,
        Self::Minus2,
        Self::One,
        Self::U,
        Self::U2,
        Self::D4,
        Self::E7,
        Self::E8,
        Self::E8x2,
    ];

    pub fn rank(self) -> usize {
        match self {
            Self::Plus2 | Self::Minus2 | Self::One => 1,
            Self::U | Self::U2 => 2,
            Self::D4 => 4,
            Self::E7 => 7,
            Self::E8 | Self::E8x2 => 8,
        }
    }

    pub fn gram(self) -> IntMatrix {
        match self {
            Self::Plus2 => IntMatrix::from_rows(&[vec![2]]),
            Self::Minus2 => IntMatrix::from_rows(&[vec![-2]]),
            Self::One => IntMatrix::from_rows(&[vec![1]]),
            Self::U => IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
            Self::U2 => IntMatrix::from_rows(&[vec![0, 2], vec![2, 0]]),
            Self::D4 => negated_cartan(4, D4_EDGES),
            Self::E7 => negated_cartan(7, E7_EDGES),
            Self::E8 => negated_cartan(8, E8_EDGES),
            Self::E8x2 => negated_cartan(8, E8_EDGES).scale(&2.into()),
        }
    }

    pub fn lattice(self) -> GramLattice {
        GramLattice::from_matrix_unchecked(self.gram(), Some(self.to_string()))
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Plus2 => "<2>",
            Self::Minus2 => "<-2>",
            Self::One => "<1>",
            Self::U => "U",
            Self::U2 => "U(2)",
            Self::D4 => "D4",
            Self::E7 => "E7",
            Self::E8 => "E8",
            Self::E8x2 => "E8(2)",
        }
    }
}

impl fmt::Display for StandardLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StandardLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.trim();
        Self::ALL
            .into_iter()
            .find(|l| l.name() == key)
            .or(match key {
                "<+2>" | "2" => Some(Self::Plus2),
                "-2" => Some(Self::Minus2),
                "1" => Some(Self::One),
                "U2" => Some(Self::U2),
                "E8x2" | "E82" => Some(Self::E8x2),
                _ => None,
            })
            .ok_or_else(|| Error::UnknownLattice(s.to_string()))
    }
}

pub fn make_standard(name: &str) -> Result<GramLattice, Error> {
    name.parse::<StandardLattice>().map(StandardLattice::lattice)
}
