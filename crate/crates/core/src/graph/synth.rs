//! Building the lattices of a K4 vertex from K3 data.

use num::BigInt;

use crate::catalog::K3Vertex;
use crate::error::{Error, Result};
use crate::forms::discriminant_group;
use crate::lattice::{direct_sum_all, GramLattice, LatticeVector, Signature, StandardLattice};

#[derive(Debug, Clone)]
pub struct Synthesis {
    /// `−L−(c) ⊕ ⟨1⟩`.
    pub a: GramLattice,
    /// `(h, 2)`, of square −2.
    pub w: LatticeVector,
    /// `(h, 3)`, of square 3 and orthogonal to `w`.
    pub big_h: LatticeVector,
    /// `A` twisted by `w`.
    pub mplus: GramLattice,
}

fn fail(c: &K3Vertex, why: String) -> Error {
    Error::Verification(format!("synthesis at {}: {why}", c.id))
}

/// `h` must be a vector of square 6 in `L−(c)`.
pub fn synthesize_k4_plus(c: &K3Vertex, h: &LatticeVector) -> Result<Synthesis> {
    let hh = c.lminus.norm(h)?;
    if hh != BigInt::from(6) {
        return Err(fail(c, format!("h² = {hh}, expected 6")));
    }
    let a = c.lminus.negate().direct_sum(&StandardLattice::One.lattice());
    let w = h.concat(&LatticeVector::from_ints(&[2]));
    let big_h = h.concat(&LatticeVector::from_ints(&[3]));
    let (ww, bh, wh) = (a.norm(&w)?, a.norm(&big_h)?, a.inner(&w, &big_h)?);
    if ww != BigInt::from(-2) || bh != BigInt::from(3) || wh != BigInt::from(0) {
        return Err(fail(c, format!("w² = {ww}, H² = {bh}, w·H = {wh}")));
    }
    let mplus = a.twist(&w)?;
    if mplus.is_even() {
        return Err(fail(c, "M+ is even".into()));
    }
    let sig = mplus.signature()?;
    let want = Signature::new(c.lminus.rank(), 1);
    if sig != want {
        return Err(fail(c, format!("M+ has signature {sig:?}, expected {want:?}")));
    }
    let disc = discriminant_group(&mplus)?;
    if disc.rank() != c.d as usize || !disc.is_two_periodic() {
        return Err(fail(
            c,
            format!("discriminant of M+ has rank {}, expected {}", disc.rank(), c.d),
        ));
    }
    Ok(Synthesis { a, w, big_h, mplus })
}

/// The K4 lattice as a twist of `(−K3) ⊕ ⟨1⟩`.
pub fn k4_lattice() -> Result<GramLattice> {
    let u = StandardLattice::U.lattice();
    let e8 = StandardLattice::E8.lattice();
    let k3 = direct_sum_all([&u, &u, &u, &e8, &e8]);
    let a = k3.negate().direct_sum(&StandardLattice::One.lattice());
    let mut w = vec![0i64; a.rank()];
    w[0] = 1;
    w[1] = 3;
    w[a.rank() - 1] = 2;
    let l = a.twist(&LatticeVector::from_ints(&w))?.with_label("K4");
    if l.is_even() || !l.is_unimodular() || l.signature()? != Signature::new(21, 2) {
        return Err(Error::Verification(
            "twisted lattice is not odd unimodular of signature (21, 2)".into(),
        ));
    }
    l.find_characteristic()?;
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::shared;
    use crate::classes::{construct_witness, ElementClass};
    use num::Signed;

    #[test]
    fn k4_lattice_shape() {
        let l = k4_lattice().unwrap();
        assert_eq!(l.rank(), 23);
        assert_eq!(l.determinant().abs(), BigInt::from(1));
        assert!(!l.is_even());
    }

    #[test]
    fn synthesis_over_all_witnesses() {
        let mut done = 0;
        for c in shared().iter() {
            for cls in ElementClass::ALL {
                let Ok(h) = construct_witness(c, 1, cls) else {
                    continue;
                };
                let s = synthesize_k4_plus(c, &h).unwrap();
                assert_eq!(s.mplus.rank(), c.lminus.rank() + 1);
                done += 1;
            }
        }
        assert!(done > 0);
    }

    #[test]
    fn wrong_square_is_rejected() {
        let c = shared().by_id("[S1+9S]").unwrap();
        let h = LatticeVector::zero(c.lminus.rank());
        assert!(synthesize_k4_plus(c, &h).is_err());
    }
}
