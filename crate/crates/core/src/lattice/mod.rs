//! Exact integer lattices given by Gram matrices.
//!
//! Everything here is arbitrary precision; no floating point is used
//! anywhere, including signatures.

mod json;
mod standard;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub use self::standard::{make_standard, StandardLattice};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, IntegerKernel};

/// A vector in coordinates of some lattice basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![BigInt::zero(); len])
    }

    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.0[i] = BigInt::one();
        v
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| i64::try_from(c).ok()).collect()
    }

    /// Place `self` at `offset` inside a zero vector of length `len`.
    pub fn embed(&self, offset: usize, len: usize) -> Self {
        let mut v = Self::zero(len);
        v.0[offset..offset + self.len()].clone_from_slice(&self.0);
        v
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).cloned().collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.len(), rhs.len());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.len(), rhs.len());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&LatticeVector> for &BigInt {
    type Output = LatticeVector;
    fn mul(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(rhs.0.iter().map(|c| self * c).collect())
    }
}

impl Mul<&LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, rhs: &LatticeVector) -> LatticeVector {
        &BigInt::from(self) * rhs
    }
}

/// Inertia indices `(σ+, σ−)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize) -> Self {
        Self { positive, negative }
    }

    /// σ+ − σ−
    pub fn index(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn is_definite(&self) -> bool {
        self.positive == 0 || self.negative == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// A finite-rank lattice with an integral symmetric bilinear form.
#[derive(Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: IntMatrix,
    label: Option<String>,
}

impl fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GramLattice")
            .field("label", &self.label)
            .field("gram", &self.gram)
            .finish()
    }
}

impl GramLattice {
    pub fn new(gram: IntMatrix, label: Option<String>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: gram.rows(),
                got: gram.cols(),
            });
        }
        if let Some((i, j)) = gram.asymmetry() {
            return Err(Error::NotSymmetric(i, j));
        }
        Ok(Self { gram, label })
    }

    pub(crate) fn from_matrix_unchecked(gram: IntMatrix, label: Option<String>) -> Self {
        debug_assert!(gram.asymmetry().is_none());
        Self { gram, label }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows), None)
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        Self::from_matrix_unchecked(IntMatrix::diagonal(entries), None)
    }

    pub fn empty() -> Self {
        Self::from_matrix_unchecked(IntMatrix::zeros(0, 0), None)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.gram[(i, j)]
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let (n, m) = (self.rank(), other.rank());
        let mut g = IntMatrix::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.gram[(i, j)].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[(n + i, n + j)] = other.gram[(i, j)].clone();
            }
        }
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            (Some(a), None) if m == 0 => Some(a.clone()),
            (None, Some(b)) if n == 0 => Some(b.clone()),
            _ => None,
        };
        GramLattice { gram: g, label }
    }

    pub fn rescale(&self, k: i64) -> Result<GramLattice> {
        if k == 0 {
            return Err(Error::ZeroScale);
        }
        let label = self.label.as_ref().map(|l| match k {
            1 => l.clone(),
            -1 => format!("-({l})"),
            _ => format!("({l})({k})"),
        });
        Ok(GramLattice {
            gram: self.gram.scale(&BigInt::from(k)),
            label,
        })
    }

    pub fn negate(&self) -> GramLattice {
        self.rescale(-1).expect("nonzero factor")
    }

    fn check_len(&self, x: &LatticeVector) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `gram · x`, i.e. the pairings of `x` with the basis vectors.
    pub fn pairings(&self, x: &LatticeVector) -> Result<Vec<BigInt>> {
        self.check_len(x)?;
        Ok(self.gram.mul_vec(x.coords()))
    }

    pub fn inner(&self, x: &LatticeVector, y: &LatticeVector) -> Result<BigInt> {
        self.check_len(y)?;
        let gx = self.pairings(x)?;
        Ok(gx.iter().zip(y.coords()).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self, x: &LatticeVector) -> Result<BigInt> {
        self.inner(x, x)
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Exact inertia indices by symmetric elimination over the rationals.
    ///
    /// A nonzero diagonal entry is pivoted on directly; when the remaining
    /// diagonal vanishes, a nonzero off-diagonal entry `a` gives a hyperbolic
    /// 2×2 pivot `[[0,a],[a,0]]` contributing one positive and one negative
    /// square.
    pub fn signature(&self) -> Result<Signature> {
        let mut a: Vec<Vec<BigRational>> = (0..self.rank())
            .map(|i| {
                self.gram
                    .row(i)
                    .iter()
                    .cloned()
                    .map(BigRational::from_integer)
                    .collect()
            })
            .collect();
        let mut sig = Signature::new(0, 0);
        while !a.is_empty() {
            let n = a.len();
            if let Some(p) = (0..n).find(|&i| !a[i][i].is_zero()) {
                if a[p][p].is_positive() {
                    sig.positive += 1;
                } else {
                    sig.negative += 1;
                }
                a = schur_1x1(&a, p);
                continue;
            }
            let Some((p, q)) = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            else {
                return Err(Error::Degenerate);
            };
            sig.positive += 1;
            sig.negative += 1;
            a = schur_hyperbolic(&a, p, q);
        }
        Ok(sig)
    }

    /// `s_v(x) = x − 2⟨x,v⟩/v² · v` for `v² = ±2`.
    pub fn reflect(&self, v: &LatticeVector, x: &LatticeVector) -> Result<LatticeVector> {
        let vv = self.reflective_norm(v)?;
        let xv = self.inner(x, v)?;
        let coeff: BigInt = -(xv * BigInt::from(2)) / vv;
        Ok(x + &(&coeff * v))
    }

    fn reflective_norm(&self, v: &LatticeVector) -> Result<BigInt> {
        let vv = self.norm(v)?;
        if vv.abs() != BigInt::from(2) {
            return Err(Error::NotReflective(vv.to_string()));
        }
        Ok(vv)
    }

    /// The form `q'(x) = ⟨x, s_v x⟩` on the same basis.
    ///
    /// Its Gram matrix is `G·S_v = G − (2/v²)(Gv)(Gv)ᵀ`, which is symmetric
    /// and integral since `v² = ±2`.
    pub fn twist(&self, v: &LatticeVector) -> Result<GramLattice> {
        let vv = self.reflective_norm(v)?;
        let gv = self.pairings(v)?;
        let n = self.rank();
        let mut g = self.gram.clone();
        // 2 / v² is ±1
        let sign = BigInt::from(2) / vv;
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] -= &sign * &gv[i] * &gv[j];
            }
        }
        let label = self.label.as_ref().map(|l| format!("t_v({l})"));
        Ok(GramLattice { gram: g, label })
    }

    /// Some `w` with `⟨w, e_i⟩ ≡ e_i² (mod 2)` for every basis vector.
    pub fn find_characteristic(&self) -> Result<LatticeVector> {
        let n = self.rank();
        let rows: Vec<Vec<bool>> = (0..n)
            .map(|i| self.gram.row(i).iter().map(BigInt::is_odd).collect())
            .collect();
        let rhs: Vec<bool> = (0..n).map(|i| self.gram[(i, i)].is_odd()).collect();
        let solution = solve_gf2(rows, rhs).ok_or(Error::NoCharacteristic)?;
        Ok(LatticeVector(
            solution.into_iter().map(|b| BigInt::from(u8::from(b))).collect(),
        ))
    }

    pub fn is_characteristic(&self, w: &LatticeVector) -> Result<bool> {
        let gw = self.pairings(w)?;
        Ok((0..self.rank()).all(|i| (&gw[i] - &self.gram[(i, i)]).is_even()))
    }

    /// `{x | ⟨x, v⟩ = 0}` on an integral basis of the kernel.
    pub fn orthogonal_sublattice(&self, v: &LatticeVector) -> Result<OrthogonalComplement> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let gv = self.pairings(v)?;
        let row = IntMatrix::from_rows(&[gv]);
        let kernel = IntegerKernel::of(&row);
        let basis: Vec<LatticeVector> = kernel.basis().into_iter().map(LatticeVector).collect();
        let k = basis.len();
        let mut g = IntMatrix::zeros(k, k);
        let images: Vec<Vec<BigInt>> = basis.iter().map(|b| self.gram.mul_vec(b.coords())).collect();
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = images[i].iter().zip(basis[j].coords()).map(|(a, b)| a * b).sum();
            }
        }
        let label = self.label.as_ref().map(|l| format!("{l}^v"));
        Ok(OrthogonalComplement {
            lattice: GramLattice { gram: g, label },
            basis,
            kernel,
        })
    }
}

/// Result of [`GramLattice::orthogonal_sublattice`]: the sublattice itself
/// plus the embedding of its basis into the ambient coordinates.
#[derive(Debug, Clone)]
pub struct OrthogonalComplement {
    pub lattice: GramLattice,
    pub basis: Vec<LatticeVector>,
    kernel: IntegerKernel,
}

impl OrthogonalComplement {
    /// Coordinates of an ambient vector in the sublattice basis, if it lies there.
    pub fn coordinates(&self, x: &LatticeVector) -> Option<LatticeVector> {
        self.kernel.coordinates(x.coords()).map(LatticeVector)
    }

    pub fn to_ambient(&self, y: &LatticeVector) -> LatticeVector {
        let len = self.basis.first().map_or(0, LatticeVector::len);
        y.coords()
            .iter()
            .zip(&self.basis)
            .fold(LatticeVector::zero(len), |acc, (c, b)| &acc + &(c * b))
    }
}

pub fn direct_sum(a: &GramLattice, b: &GramLattice) -> GramLattice {
    a.direct_sum(b)
}

pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a GramLattice>) -> GramLattice {
    parts
        .into_iter()
        .fold(GramLattice::empty(), |acc, l| acc.direct_sum(l))
}

fn schur_1x1(a: &[Vec<BigRational>], p: usize) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let keep: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    let pivot = &a[p][p];
    keep.iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| &a[i][j] - &a[i][p] * &a[p][j] / pivot)
                .collect()
        })
        .collect()
}

fn schur_hyperbolic(a: &[Vec<BigRational>], p: usize, q: usize) -> Vec<Vec<BigRational>> {
    // block [[0, c], [c, 0]] has inverse [[0, 1/c], [1/c, 0]]
    let n = a.len();
    let keep: Vec<usize> = (0..n).filter(|&i| i != p && i != q).collect();
    let c = &a[p][q];
    keep.iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| {
                    let correction = (&a[i][p] * &a[q][j] + &a[i][q] * &a[p][j]) / c;
                    &a[i][j] - correction
                })
                .collect()
        })
        .collect()
}

/// Solve `rows · x = rhs` over GF(2); `None` if inconsistent.
fn solve_gf2(mut rows: Vec<Vec<bool>>, mut rhs: Vec<bool>) -> Option<Vec<bool>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] {
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
                rhs[i] ^= rhs[r];
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rhs[r..].iter().any(|&b| b) {
        return None;
    }
    let mut x = vec![false; n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rhs[i];
    }
    Some(x)
}
