//! The flip involution on triples `(h, v)` and the 4-cycles it produces,
//! plus the basic cycles of the K3 graph.

use std::collections::BTreeMap;

use num::BigInt;

use super::{terminal_key, DeformationGraph, K4Graph};
use crate::catalog::{Catalog, K3Vertex};
use crate::classes::{exists_class, small_gram, ElementClass, WuTest};
use crate::error::{Error, Result};
use crate::lattice::{GramLattice, LatticeVector};
use crate::matrix::{smith_normal_form, IntMatrix};

/// `h² = 6`, `v² = −2`, `h ⊥ v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipTriple {
    pub h: LatticeVector,
    pub v: LatticeVector,
}

impl FlipTriple {
    pub fn new(l: &GramLattice, h: LatticeVector, v: LatticeVector) -> Result<Self> {
        let (hh, vv, hv) = (l.norm(&h)?, l.norm(&v)?, l.inner(&h, &v)?);
        if hh != BigInt::from(6) || vv != BigInt::from(-2) || hv != BigInt::from(0) {
            return Err(Error::InvalidFlipTriple(format!(
                "h² = {hh}, v² = {vv}, h·v = {hv}"
            )));
        }
        Ok(Self { h, v })
    }
}

/// `(h, v) ↦ (2h − 3v, h − 2v)`.
pub fn flip(l: &GramLattice, t: &FlipTriple) -> Result<FlipTriple> {
    let t = FlipTriple::new(l, t.h.clone(), t.v.clone())?;
    let h = &(2 * &t.h) - &(3 * &t.v);
    let v = &t.h - &(2 * &t.v);
    FlipTriple::new(l, h, v)
}

/// Blocks of `L−` in basis order whose total rank stays within `max_rank`.
fn window(v: &K3Vertex, max_rank: usize) -> Vec<usize> {
    let mut coords = Vec::new();
    let mut off = 0;
    for b in &v.lminus_blocks {
        if coords.len() + b.rank() <= max_rank {
            coords.extend(off..off + b.rank());
        }
        off += b.rank();
    }
    coords
}

const WINDOW_RANK: usize = 6;
const PER_NORM_CAP: usize = 400;

/// One orthogonal pair per `(class of h, class of v)`, searched among
/// vectors with entries in `[−bound, bound]` supported on a window of
/// leading summands of `L−(c)`. Shortest vectors are tried first.
pub fn find_flip_triples(c: &K3Vertex, bound: i64) -> Result<Vec<FlipTriple>> {
    let l = &c.lminus;
    let coords = window(c, WINDOW_RANK);
    let k = coords.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let full = small_gram(l)?;
    let g: Vec<Vec<i64>> = coords
        .iter()
        .map(|&i| coords.iter().map(|&j| full[i][j]).collect())
        .collect();
    let mut hs = Vec::new();
    let mut vs = Vec::new();
    let mut x = vec![-bound; k];
    loop {
        let norm: i64 = (0..k)
            .map(|i| (0..k).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>())
            .sum();
        match norm {
            6 => hs.push(x.clone()),
            -2 => vs.push(x.clone()),
            _ => {}
        }
        let Some(i) = (0..k).rev().find(|&i| x[i] < bound) else {
            break;
        };
        x[i] += 1;
        for y in &mut x[i + 1..] {
            *y = -bound;
        }
    }
    let weight = |x: &Vec<i64>| (x.iter().map(|c| c.abs()).sum::<i64>(), x.clone());
    for list in [&mut hs, &mut vs] {
        list.sort_by_key(weight);
        list.truncate(PER_NORM_CAP);
    }
    let wu = WuTest::new(l)?;
    let embed = |x: &[i64]| {
        let mut e = vec![0i64; l.rank()];
        for (&i, &c) in coords.iter().zip(x) {
            e[i] = c;
        }
        LatticeVector::from_ints(&e)
    };
    let classify = |x: &[i64]| wu.classify(l, &embed(x));
    let mut by_class: [Vec<(Vec<i64>, ElementClass)>; 2] = [Vec::new(), Vec::new()];
    for (slot, list) in by_class.iter_mut().zip([&hs, &vs]) {
        for x in list {
            slot.push((x.clone(), classify(x)?));
        }
    }
    let [hs, vs] = by_class;
    let gv = |v: &[i64]| -> Vec<i64> { (0..k).map(|i| (0..k).map(|j| g[i][j] * v[j]).sum()).collect() };
    let mut found: BTreeMap<(ElementClass, ElementClass), FlipTriple> = BTreeMap::new();
    for (v, kv) in &vs {
        let pv = gv(v);
        for (h, kh) in &hs {
            if found.contains_key(&(*kh, *kv)) {
                continue;
            }
            if h.iter().zip(&pv).map(|(a, b)| a * b).sum::<i64>() == 0 {
                found.insert((*kh, *kv), FlipTriple::new(l, embed(h), embed(v))?);
            }
        }
        if found.len() == 9 {
            break;
        }
    }
    Ok(found.into_values().collect())
}

#[derive(Debug, Clone)]
pub struct FlipCycleReport {
    pub vertex: String,
    pub triple: FlipTriple,
    /// Classes of `h1, v1, h2, v2` in `L−(c)`.
    pub classes: [ElementClass; 4],
    /// Class of `h1` in `L−(c_{v1})` and of `h2` in `L−(c_{v2})`.
    pub inner_classes: [ElementClass; 2],
    /// `c_{v1}` and `c_{v2}`.
    pub corners: [String; 2],
    pub identities: [bool; 4],
    pub missing: Vec<String>,
}

impl FlipCycleReport {
    pub fn holds(&self) -> bool {
        self.identities.iter().all(|&b| b)
    }
}

fn class_in_complement(l: &GramLattice, v: &LatticeVector, x: &LatticeVector) -> Result<ElementClass> {
    let comp = l.orthogonal_sublattice(v)?;
    let y = comp
        .coordinates(x)
        .ok_or_else(|| Error::Verification(format!("{x} is not orthogonal to {v}")))?;
    WuTest::new(&comp.lattice)?.classify(&comp.lattice, &y)
}

/// Chases the four edges of the cycle spanned by `h1, v1` and
/// `h2 = 2h1 − 3v1, v2 = h1 − 2v1` through the K4 graph and compares the
/// endpoints:
///
/// 1. `[c, h1]` and `[c, h2]` both start at `c`;
/// 2. `[c, h1]` ends at `c_{v2}`;
/// 3. `[c, h2]` ends at `c_{v1}`;
/// 4. `[c_{v1}, h1]` and `[c_{v2}, h2]` end at the same vertex.
pub fn verify_flip_cycle(
    catalog: &Catalog,
    c: &K3Vertex,
    t: &FlipTriple,
    k4: &K4Graph,
) -> Result<FlipCycleReport> {
    let l = &c.lminus;
    let t = FlipTriple::new(l, t.h.clone(), t.v.clone())?;
    let second = flip(l, &t)?;
    let (h1, v1, h2, v2) = (&t.h, &t.v, &second.h, &second.v);
    let wu = WuTest::new(l)?;
    let classes = [
        wu.classify(l, h1)?,
        wu.classify(l, v1)?,
        wu.classify(l, h2)?,
        wu.classify(l, v2)?,
    ];
    let corner = |cls: ElementClass| -> Result<String> {
        if !exists_class(c, 0, cls) {
            return Err(Error::Verification(format!(
                "{} has a {cls} root but no such K3 edge",
                c.id
            )));
        }
        Ok(catalog.lookup(terminal_key(c, cls))?.id.clone())
    };
    let corners = [corner(classes[1])?, corner(classes[3])?];
    let inner_classes = [
        class_in_complement(l, v1, h1)?,
        class_in_complement(l, v2, h2)?,
    ];
    let g = &k4.graph;
    let mut missing = Vec::new();
    let mut chase = |from: &str, cls: ElementClass| -> Option<String> {
        let t = g.terminal(from, cls).map(str::to_string);
        if t.is_none() {
            missing.push(format!("[{from}, {cls}]"));
        }
        t
    };
    let w_h1 = chase(&c.id, classes[0]);
    let w_h2 = chase(&c.id, classes[2]);
    let w_v1_h1 = chase(&corners[0], inner_classes[0]);
    let w_v2_h2 = chase(&corners[1], inner_classes[1]);
    let identities = [
        w_h1.is_some() && w_h2.is_some(),
        w_h1.as_deref() == Some(corners[1].as_str()),
        w_h2.as_deref() == Some(corners[0].as_str()),
        w_v1_h1.is_some() && w_v1_h1 == w_v2_h2,
    ];
    Ok(FlipCycleReport {
        vertex: c.id.clone(),
        triple: t,
        classes,
        inner_classes,
        corners,
        identities,
        missing,
    })
}

#[derive(Debug, Clone)]
pub struct BasicCycle {
    pub vertex: String,
    pub even_class: ElementClass,
    /// `c_{v1}` (odd corner) and `c_{v2}` (even corner).
    pub corners: [String; 2],
    pub apex: String,
    /// Edge indices traversed forwards and backwards.
    pub forward: [usize; 2],
    pub backward: [usize; 2],
    pub regular: bool,
}

#[derive(Debug, Clone, Default)]
pub struct BasicCycleReport {
    pub cycles: Vec<BasicCycle>,
    pub expected_count: usize,
    pub rational_rank: usize,
    pub elementary_divisors: Vec<BigInt>,
    pub failures: Vec<String>,
}

impl BasicCycleReport {
    pub fn all_regular(&self) -> bool {
        self.cycles.iter().all(|c| c.regular)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.all_regular()
            && self.cycles.len() == self.expected_count
            && self.rational_rank == self.cycles.len()
    }
}

fn edge_index(g: &DeformationGraph, from: &str, cls: ElementClass) -> Option<usize> {
    let i = g.index_of(from)?;
    g.edges().iter().position(|e| e.from == i && e.class == cls)
}

/// A basic cycle at `c` pairs the odd edge `[c, v1]` with an even edge
/// `[c, v2]`; it closes through `[c_{v1}, v2]` (even non-Wu) and
/// `[c_{v2}, v1]` (odd). It is regular when `c_{v2}` has odd elements of
/// square 6.
pub fn basic_cycles_regular(k3: &DeformationGraph, catalog: &Catalog) -> Result<BasicCycleReport> {
    let mut report = BasicCycleReport {
        expected_count: k3.edge_count() + 1 - k3.vertex_count(),
        ..Default::default()
    };
    for node in k3.nodes() {
        let Some(odd) = edge_index(k3, &node.id, ElementClass::Odd) else {
            continue;
        };
        for even_class in [ElementClass::Wu, ElementClass::EvenNonWu] {
            let Some(even) = edge_index(k3, &node.id, even_class) else {
                continue;
            };
            let c1 = k3.nodes()[k3.edges()[odd].to].id.clone();
            let c2 = k3.nodes()[k3.edges()[even].to].id.clone();
            let back1 = edge_index(k3, &c1, ElementClass::EvenNonWu);
            let back2 = edge_index(k3, &c2, ElementClass::Odd);
            let (Some(b1), Some(b2)) = (back1, back2) else {
                report.failures.push(format!(
                    "cycle at [{}, {even_class}] does not close: {c1} or {c2} lacks an edge",
                    node.id
                ));
                continue;
            };
            let (a1, a2) = (k3.edges()[b1].to, k3.edges()[b2].to);
            if a1 != a2 {
                report.failures.push(format!(
                    "cycle at [{}, {even_class}] ends at {} and {}",
                    node.id,
                    k3.nodes()[a1].id,
                    k3.nodes()[a2].id
                ));
                continue;
            }
            let regular = exists_class(catalog.by_id(&c2)?, 1, ElementClass::Odd);
            report.cycles.push(BasicCycle {
                vertex: node.id.clone(),
                even_class,
                corners: [c1, c2],
                apex: k3.nodes()[a1].id.clone(),
                forward: [odd, b1],
                backward: [even, b2],
                regular,
            });
        }
    }
    if !report.cycles.is_empty() {
        let mut m = IntMatrix::zeros(report.cycles.len(), k3.edge_count());
        for (i, c) in report.cycles.iter().enumerate() {
            for &e in &c.forward {
                m[(i, e)] += 1;
            }
            for &e in &c.backward {
                m[(i, e)] -= 1;
            }
        }
        report.rational_rank = m.rank();
        report.elementary_divisors = smith_normal_form(&m)
            .invariants()
            .into_iter()
            .filter(|d| *d != BigInt::from(0))
            .collect();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::shared;
    use crate::graph::{build_k3_graph, build_k4_graph};

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_ints(c)
    }

    #[test]
    fn flip_preserves_norms_and_is_involutive() {
        let c = shared().by_id("[S1+7S]").unwrap();
        let l = &c.lminus;
        let triples = find_flip_triples(c, 3).unwrap();
        assert!(!triples.is_empty());
        let wu = WuTest::new(l).unwrap();
        for t in &triples {
            let f = flip(l, t).unwrap();
            assert_eq!(l.norm(&f.h).unwrap(), BigInt::from(6));
            assert_eq!(l.norm(&f.v).unwrap(), BigInt::from(-2));
            assert_eq!(l.inner(&f.h, &f.v).unwrap(), BigInt::from(0));
            assert_eq!(&flip(l, &f).unwrap(), t);
            // the flip exchanges the roles of the two classes
            assert_eq!(wu.classify(l, &f.h).unwrap(), wu.classify(l, &t.v).unwrap());
            assert_eq!(wu.classify(l, &f.v).unwrap(), wu.classify(l, &t.h).unwrap());
        }
    }

    #[test]
    fn no_pair_in_a_rank_three_complement() {
        // v⊥ is ⟨2⟩ ⊕ ⟨2⟩ there, which misses 6
        assert!(find_flip_triples(shared().by_id("[S1+9S]").unwrap(), 3)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn invalid_triple_is_rejected() {
        let l = GramLattice::diagonal(&[2, -2]);
        assert!(matches!(
            FlipTriple::new(&l, v(&[1, 0]), v(&[0, 1])),
            Err(Error::InvalidFlipTriple(_))
        ));
    }

    #[test]
    fn flip_cycles_close() {
        let k4 = build_k4_graph(shared()).unwrap();
        let c = shared().by_id("[S1+7S]").unwrap();
        for t in find_flip_triples(c, 3).unwrap() {
            let r = verify_flip_cycle(shared(), c, &t, &k4).unwrap();
            assert!(r.holds(), "{r:?}");
            let back = flip(&c.lminus, &t).unwrap();
            assert!(verify_flip_cycle(shared(), c, &back, &k4).unwrap().holds());
        }
    }

    #[test]
    fn no_even_roots_no_cycles() {
        let c = shared().by_id("[S10+S]").unwrap();
        assert!(find_flip_triples(c, 3)
            .unwrap()
            .iter()
            .all(|t| WuTest::new(&c.lminus).unwrap().classify(&c.lminus, &t.v).unwrap() == ElementClass::Odd));
    }

    #[test]
    fn basic_cycles() {
        let k3 = build_k3_graph(shared()).unwrap();
        let r = basic_cycles_regular(&k3, shared()).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.all_regular());
        assert_eq!(r.cycles.len(), r.expected_count);
        assert_eq!(r.rational_rank, r.cycles.len());
    }
}
