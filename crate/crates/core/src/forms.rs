//! Discriminant groups and finite quadratic forms on 2-elementary groups.
//!
//! Values are stored in half-units so that all arithmetic stays integral:
//! a stored quadratic value `k ∈ Z/4` means `q = k/2 ∈ Q/2Z`, a stored
//! bilinear value `m ∈ Z/2` means `b = m/2 ∈ Q/Z`.

use std::fmt;

use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{GramLattice, LatticeVector};
use crate::matrix::smith_normal_form;

/// Largest rank for which the Gauss sum is enumerated.
pub const DEFAULT_BROWN_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawForm")]
pub struct FiniteQuadraticForm {
    d: usize,
    qvals: Vec<u8>,
    bvals: Vec<Vec<u8>>,
}

#[derive(Deserialize)]
struct RawForm {
    d: usize,
    qvals: Vec<u8>,
    bvals: Vec<Vec<u8>>,
}

impl TryFrom<RawForm> for FiniteQuadraticForm {
    type Error = Error;

    fn try_from(raw: RawForm) -> Result<Self> {
        if raw.qvals.len() != raw.d {
            return Err(Error::DimensionMismatch {
                expected: raw.d,
                got: raw.qvals.len(),
            });
        }
        Self::new(raw.qvals, raw.bvals)
    }
}

impl FiniteQuadraticForm {
    /// Validates half-unit ranges, symmetry of `bvals`, and
    /// `qvals[i] ≡ bvals[i][i] (mod 2)`.
    pub fn new(qvals: Vec<u8>, bvals: Vec<Vec<u8>>) -> Result<Self> {
        let d = qvals.len();
        if bvals.len() != d || bvals.iter().any(|r| r.len() != d) {
            return Err(Error::MalformedForm(format!("bilinear table is not {d}x{d}")));
        }
        if qvals.iter().any(|&q| q > 3) || bvals.iter().flatten().any(|&b| b > 1) {
            return Err(Error::MalformedForm("half-unit value out of range".into()));
        }
        for i in 0..d {
            if qvals[i] % 2 != bvals[i][i] {
                return Err(Error::MalformedForm(format!(
                    "q(g{i}) mod 1 disagrees with b(g{i}, g{i})"
                )));
            }
            for j in 0..i {
                if bvals[i][j] != bvals[j][i] {
                    return Err(Error::MalformedForm(format!("b is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { d, qvals, bvals })
    }

    pub fn trivial() -> Self {
        Self {
            d: 0,
            qvals: Vec::new(),
            bvals: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn qvals(&self) -> &[u8] {
        &self.qvals
    }

    pub fn bvals(&self) -> &[Vec<u8>] {
        &self.bvals
    }

    /// Quadratic value (half-units mod 4) of the element whose generator
    /// coefficients are the bits of `mask`.
    pub fn value(&self, mask: u64) -> u8 {
        let bits: Vec<usize> = (0..self.d).filter(|&i| mask >> i & 1 == 1).collect();
        let mut q: u32 = bits.iter().map(|&i| self.qvals[i] as u32).sum();
        for (a, &i) in bits.iter().enumerate() {
            for &j in &bits[a + 1..] {
                q += 2 * self.bvals[i][j] as u32;
            }
        }
        (q % 4) as u8
    }

    /// Bilinear value (half-units mod 2) between two elements.
    pub fn bilinear(&self, x: u64, y: u64) -> u8 {
        let mut b = 0u32;
        for i in (0..self.d).filter(|&i| x >> i & 1 == 1) {
            for j in (0..self.d).filter(|&j| y >> j & 1 == 1) {
                b += self.bvals[i][j] as u32;
            }
        }
        (b % 2) as u8
    }

    pub fn negate(&self) -> Self {
        Self {
            d: self.d,
            qvals: self.qvals.iter().map(|&q| (4 - q) % 4).collect(),
            bvals: self.bvals.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let d = self.d + other.d;
        let mut bvals = vec![vec![0; d]; d];
        for i in 0..self.d {
            bvals[i][..self.d].copy_from_slice(&self.bvals[i]);
        }
        for i in 0..other.d {
            bvals[self.d + i][self.d..].copy_from_slice(&other.bvals[i]);
        }
        Self {
            d,
            qvals: self.qvals.iter().chain(&other.qvals).copied().collect(),
            bvals,
        }
    }

    pub fn parity(&self) -> Parity {
        if self.qvals.iter().all(|q| q % 2 == 0) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The Brown invariant, read off the Gauss sum
    /// `Σ_x exp(iπ q(x)) = 2^{d/2} · exp(iπ B / 4)`.
    pub fn brown_invariant(&self) -> Result<u8> {
        self.brown_invariant_with_limit(DEFAULT_BROWN_LIMIT)
    }

    pub fn brown_invariant_with_limit(&self, limit: usize) -> Result<u8> {
        if self.d > limit || self.d > 62 {
            return Err(Error::GroupTooLarge { d: self.d, limit });
        }
        let (re, im) = self.gauss_sum();
        let half = 1i64 << (self.d / 2);
        // exp(iπB/4) scaled by 2^{d/2}; only one parity of B is attainable
        let candidates: [(u8, (i64, i64)); 4] = if self.d.is_multiple_of(2) {
            [(0, (half, 0)), (2, (0, half)), (4, (-half, 0)), (6, (0, -half))]
        } else {
            [
                (1, (half, half)),
                (3, (-half, half)),
                (5, (-half, -half)),
                (7, (half, -half)),
            ]
        };
        candidates
            .into_iter()
            .find(|&(_, c)| c == (re, im))
            .map(|(b, _)| b)
            .ok_or_else(|| {
                Error::MalformedForm(format!(
                    "Gauss sum {re}+{im}i is not 2^(d/2) times an 8th root of unity (d = {})",
                    self.d
                ))
            })
    }

    /// Exact Gauss sum in Z[i]: q = 0, 1/2, 1, 3/2 contribute 1, i, −1, −i.
    pub fn gauss_sum(&self) -> (i64, i64) {
        let (mut re, mut im) = (0i64, 0i64);
        for mask in 0..(1u64 << self.d) {
            match self.value(mask) {
                0 => re += 1,
                1 => im += 1,
                2 => re -= 1,
                _ => im -= 1,
            }
        }
        (re, im)
    }

    pub fn invariants(&self) -> Result<FormInvariants> {
        Ok(FormInvariants {
            rank: self.d,
            parity: self.parity(),
            brown: self.brown_invariant()?,
        })
    }
}

/// The complete isomorphism invariant of a nondegenerate 2-elementary form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormInvariants {
    pub rank: usize,
    pub parity: Parity,
    pub brown: u8,
}

impl fmt::Display for FormInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} {} brown={}", self.rank, self.parity, self.brown)
    }
}

/// 2-elementary finite quadratic forms are classified by rank, parity and
/// Brown invariant.
pub fn forms_isomorphic(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm) -> Result<bool> {
    if a.rank() != b.rank() || a.parity() != b.parity() {
        return Ok(false);
    }
    Ok(a.brown_invariant()? == b.brown_invariant()?)
}

/// `L*/L` presented by its elementary divisors and rational generator lifts
/// (coordinates in the lattice basis).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    pub divisors: Vec<BigInt>,
    pub generators: Vec<Vec<BigRational>>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.divisors.iter().product()
    }

    pub fn is_two_periodic(&self) -> bool {
        self.divisors.iter().all(|d| *d == BigInt::from(2))
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

pub fn discriminant_group(l: &GramLattice) -> Result<DiscriminantGroup> {
    if l.determinant().is_zero() {
        return Err(Error::Degenerate);
    }
    let s = smith_normal_form(l.gram());
    // G = U⁻¹ D V⁻¹, so L* = G⁻¹ Z^n = V D⁻¹ Z^n
    let mut divisors = Vec::new();
    let mut generators = Vec::new();
    for (i, d) in s.invariants().into_iter().enumerate() {
        if d.is_one() {
            continue;
        }
        generators.push(
            s.v.column(i)
                .into_iter()
                .map(|c| BigRational::new(c, d.clone()))
                .collect(),
        );
        divisors.push(d);
    }
    Ok(DiscriminantGroup {
        divisors,
        generators,
    })
}

fn rational_inner(l: &GramLattice, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let n = l.rank();
    let mut acc = BigRational::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            let g = l.entry(i, j);
            if !g.is_zero() && !y[j].is_zero() {
                acc += &x[i] * BigRational::from_integer(g.clone()) * &y[j];
            }
        }
    }
    acc
}

/// Twice `x`, reduced modulo `modulus`, as a half-unit value.
fn half_units(x: &BigRational, modulus: i64) -> Result<u8> {
    let twice = x * BigRational::from_integer(2.into());
    if !twice.is_integer() {
        return Err(Error::MalformedForm(format!("value {x} is not a half-integer")));
    }
    let v = twice.to_integer().mod_floor(&BigInt::from(modulus));
    Ok(v.to_u8().expect("reduced value fits"))
}

/// The finite quadratic form on `discr l`.
///
/// For even `l`, `q(x + L) = x² mod 2Z`. For odd `l` a characteristic `w`
/// must be given and `q(x + L) = x² + ⟨w, x⟩ mod 2Z`.
pub fn discriminant_quadratic(
    l: &GramLattice,
    w: Option<&LatticeVector>,
) -> Result<FiniteQuadraticForm> {
    let group = discriminant_group(l)?;
    if !group.is_two_periodic() {
        return Err(Error::NotTwoPeriodic(
            group.divisors.iter().map(ToString::to_string).collect(),
        ));
    }
    if let Some(w) = w {
        if !l.is_characteristic(w)? {
            return Err(Error::NotCharacteristic);
        }
    } else if !l.is_even() {
        return Err(Error::MissingCharacteristic);
    }
    let w_pairings: Option<Vec<BigInt>> = w.map(|w| l.pairings(w)).transpose()?;
    let g = &group.generators;
    let d = g.len();
    let mut qvals = Vec::with_capacity(d);
    let mut bvals = vec![vec![0u8; d]; d];
    for i in 0..d {
        let mut q = rational_inner(l, &g[i], &g[i]);
        if let Some(wp) = &w_pairings {
            let lin: BigRational = wp
                .iter()
                .zip(&g[i])
                .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
                .sum();
            q += lin;
        }
        qvals.push(half_units(&q, 4)?);
        for j in 0..d {
            bvals[i][j] = half_units(&rational_inner(l, &g[i], &g[j]), 2)?;
        }
    }
    FiniteQuadraticForm::new(qvals, bvals)
}

pub fn parity(f: &FiniteQuadraticForm) -> Parity {
    f.parity()
}

pub fn brown_invariant(f: &FiniteQuadraticForm) -> Result<u8> {
    f.brown_invariant()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equivalence {
    Yes,
    No,
    Undecidable,
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equivalence::Yes => "yes",
            Equivalence::No => "no",
            Equivalence::Undecidable => "undecidable",
        })
    }
}

/// Signature and discriminant-form invariants of a lattice that satisfies
/// the hypotheses of the even 2-elementary uniqueness theorem: even,
/// nondegenerate, 2-periodic discriminant, and indefinite or of rank ≤ 2.
/// `None` when the hypotheses fail.
pub fn decidable_invariants(
    l: &GramLattice,
) -> Option<(crate::lattice::Signature, FormInvariants)> {
    if !l.is_even() {
        return None;
    }
    let sig = l.signature().ok()?;
    if sig.is_definite() && l.rank() > 2 {
        return None;
    }
    let form = discriminant_quadratic(l, None).ok()?;
    let inv = form.invariants().ok()?;
    Some((sig, inv))
}

pub fn lattices_equivalent(a: &GramLattice, b: &GramLattice) -> Equivalence {
    match (decidable_invariants(a), decidable_invariants(b)) {
        (Some(x), Some(y)) if x == y => Equivalence::Yes,
        (Some(_), Some(_)) => Equivalence::No,
        _ => Equivalence::Undecidable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{direct_sum_all, StandardLattice};
    use num::Signed;
    use proptest::prelude::*;

    fn std(l: StandardLattice) -> GramLattice {
        l.lattice()
    }

    fn discr(l: &GramLattice) -> FiniteQuadraticForm {
        discriminant_quadratic(l, None).unwrap()
    }

    #[test]
    fn discriminant_groups() {
        let g = discriminant_group(&std(StandardLattice::Plus2)).unwrap();
        assert_eq!(g.divisors, vec![BigInt::from(2)]);
        let g = discriminant_group(&std(StandardLattice::D4)).unwrap();
        assert_eq!(g.divisors, vec![BigInt::from(2), BigInt::from(2)]);
        let d4 = std(StandardLattice::D4);
        let l = direct_sum_all([&std(StandardLattice::U2), &d4, &d4, &d4]);
        let g = discriminant_group(&l).unwrap();
        assert_eq!(g.rank(), 8);
        assert!(g.is_two_periodic());
        assert_eq!(g.order(), l.determinant().abs());
        assert_eq!(
            discriminant_group(&GramLattice::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap()),
            Err(Error::Degenerate)
        );
    }

    #[test]
    fn k3_lattice_has_trivial_discriminant() {
        let u = std(StandardLattice::U);
        let e8 = std(StandardLattice::E8);
        let l = direct_sum_all([&u, &u, &u, &e8, &e8]);
        let s = smith_normal_form(l.gram());
        assert!(s.invariants().iter().all(One::is_one));
        assert_eq!(discriminant_group(&l).unwrap().rank(), 0);
    }

    #[test]
    fn plus_two_form() {
        let f = discr(&std(StandardLattice::Plus2));
        assert_eq!(f.rank(), 1);
        assert_eq!(f.qvals(), &[1]);
        assert_eq!(f.parity(), Parity::Odd);
        // 1 + i = √2 e^{iπ/4}
        assert_eq!(f.gauss_sum(), (1, 1));
        assert_eq!(f.brown_invariant().unwrap(), 1);
    }

    #[test]
    fn scaled_hyperbolic_form() {
        // dual basis e1/2, e2/2: q = 0 on both, b = 1/2 between them
        let f = discr(&std(StandardLattice::U2));
        assert_eq!(f.qvals(), &[0, 0]);
        assert_eq!(f.bvals(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(f.parity(), Parity::Even);
        assert_eq!(f.brown_invariant().unwrap(), 0);
    }

    #[test]
    fn scaled_e8_form_is_even() {
        let f = discr(&std(StandardLattice::E8x2));
        assert_eq!(f.rank(), 8);
        assert_eq!(f.parity(), Parity::Even);
        assert_eq!(f.brown_invariant().unwrap(), 0);
    }

    #[test]
    fn brown_of_d4() {
        // Gauss sum 1 - 3 = -2 = 2 e^{iπ}; Milgram: σ(D4) = -4 ≡ 4
        let f = discr(&std(StandardLattice::D4));
        assert_eq!(f.gauss_sum(), (-2, 0));
        assert_eq!(f.brown_invariant().unwrap(), 4);
    }

    #[test]
    fn trivial_form() {
        assert_eq!(FiniteQuadraticForm::trivial().brown_invariant().unwrap(), 0);
    }

    #[test]
    fn isomorphism_tests() {
        let p = discr(&std(StandardLattice::Plus2));
        let m = discr(&std(StandardLattice::Minus2));
        assert!(forms_isomorphic(&p, &p).unwrap());
        assert_eq!(m.brown_invariant().unwrap(), 7);
        assert!(!forms_isomorphic(&p, &m).unwrap());
        assert!(forms_isomorphic(&p.negate(), &m).unwrap());
    }

    #[test]
    fn odd_lattice_needs_characteristic() {
        let l = GramLattice::diagonal(&[1, 2]);
        assert_eq!(discriminant_quadratic(&l, None), Err(Error::MissingCharacteristic));
        let w = l.find_characteristic().unwrap();
        let f = discriminant_quadratic(&l, Some(&w)).unwrap();
        assert_eq!(f.rank(), 1);
        assert_eq!(
            discriminant_quadratic(&l, Some(&LatticeVector::from_ints(&[0, 0]))),
            Err(Error::NotCharacteristic)
        );
    }

    #[test]
    fn non_two_periodic_is_rejected() {
        let l = GramLattice::diagonal(&[6]);
        assert!(matches!(
            discriminant_quadratic(&l, None),
            Err(Error::NotTwoPeriodic(_))
        ));
    }

    #[test]
    fn too_large_group() {
        let f = discr(&std(StandardLattice::E8x2));
        assert_eq!(
            f.brown_invariant_with_limit(4),
            Err(Error::GroupTooLarge { d: 8, limit: 4 })
        );
    }

    #[test]
    fn degenerate_form_fails_gauss_check() {
        // b ≡ 0 with q = 1/2 on one generator: the Gauss sum 2(1+i) has the
        // wrong modulus for d = 2
        let f = FiniteQuadraticForm::new(vec![1, 0], vec![vec![1, 0], vec![0, 0]]).unwrap();
        assert!(matches!(f.brown_invariant(), Err(Error::MalformedForm(_))));
    }

    #[test]
    fn constructor_validation() {
        assert!(FiniteQuadraticForm::new(vec![1], vec![vec![0]]).is_err());
        assert!(FiniteQuadraticForm::new(vec![4], vec![vec![0]]).is_err());
        assert!(FiniteQuadraticForm::new(vec![0, 0], vec![vec![0, 1], vec![0, 0]]).is_err());
    }

    #[test]
    fn json_shape() {
        let f = discr(&std(StandardLattice::U2));
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v, serde_json::json!({"d": 2, "qvals": [0, 0], "bvals": [[0, 1], [1, 0]]}));
        let back: FiniteQuadraticForm = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
        let bad = serde_json::json!({"d": 1, "qvals": [1], "bvals": [[0]]});
        assert!(serde_json::from_value::<FiniteQuadraticForm>(bad).is_err());
    }

    #[test]
    fn equivalence_oracle() {
        let u = std(StandardLattice::U);
        assert_eq!(lattices_equivalent(&u, &u), Equivalence::Yes);
        let one = std(StandardLattice::One);
        assert_eq!(lattices_equivalent(&one, &one), Equivalence::Undecidable);
        // definite rank 8: outside the hypotheses
        let e8 = std(StandardLattice::E8);
        assert_eq!(lattices_equivalent(&e8, &e8), Equivalence::Undecidable);
        // <2> + <-2> vs U(2): same signature and d, different parity
        let a = GramLattice::diagonal(&[2, -2]);
        assert_eq!(lattices_equivalent(&a, &std(StandardLattice::U2)), Equivalence::No);
        // U + <-2> vs <2> + 2<-2>: both (1,2), d = 1, odd, brown 7
        let b = u.direct_sum(&std(StandardLattice::Minus2));
        let c = GramLattice::diagonal(&[2, -2, -2]);
        assert_eq!(lattices_equivalent(&b, &c), Equivalence::No);
        let c2 = GramLattice::diagonal(&[2, -2]).direct_sum(&u);
        assert_eq!(lattices_equivalent(&c2, &a.direct_sum(&u)), Equivalence::Yes);
    }

    /// Quadratic-refinement check: q(x+y) = q(x) + q(y) + 2b(x,y) on all pairs.
    fn is_quadratic(f: &FiniteQuadraticForm) -> bool {
        let n = 1u64 << f.rank();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let lhs = f.value(x ^ y) as u32;
                let rhs = f.value(x) as u32 + f.value(y) as u32 + 2 * f.bilinear(x, y) as u32;
                lhs % 4 == rhs % 4
            })
        })
    }

    fn two_elementary_block() -> impl Strategy<Value = StandardLattice> {
        prop::sample::select(vec![
            StandardLattice::Plus2,
            StandardLattice::Minus2,
            StandardLattice::U,
            StandardLattice::U2,
            StandardLattice::D4,
            StandardLattice::E7,
            StandardLattice::E8,
        ])
    }

    proptest! {
        #[test]
        fn forms_of_block_sums(blocks in prop::collection::vec(two_elementary_block(), 1..5)) {
            let parts: Vec<GramLattice> = blocks.iter().map(|b| b.lattice()).collect();
            let l = direct_sum_all(parts.iter());
            let f = discr(&l);
            prop_assert_eq!(BigInt::from(1u64 << f.rank()), l.determinant().abs());
            if f.rank() <= 8 {
                prop_assert!(is_quadratic(&f));
            }
            // Milgram: signature index ≡ Brown (mod 8)
            let sig = l.signature().unwrap();
            prop_assert_eq!(sig.index().rem_euclid(8) as u8, f.brown_invariant().unwrap());
            // negation
            let b = f.brown_invariant().unwrap();
            prop_assert_eq!(f.negate().brown_invariant().unwrap(), (8 - b) % 8);
            // additivity over sums of forms
            let g = discr(&l.negate());
            prop_assert_eq!(f.direct_sum(&g).brown_invariant_with_limit(16).unwrap(), 0);
        }
    }
}
