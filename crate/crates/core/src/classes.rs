//! Odd / Wu / even-non-Wu elements of eigenlattices: classification,
//! existence predicates, explicit witnesses and a bounded search oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, Integer, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::{K3Vertex, TopKind};
use crate::error::{Error, Result};
use crate::forms::discriminant_group;
use crate::lattice::{GramLattice, LatticeVector, StandardLattice};

pub const DEFAULT_BOUND: i64 = 3;
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementClass {
    Odd,
    Wu,
    EvenNonWu,
}

impl ElementClass {
    pub const ALL: [ElementClass; 3] = [Self::Odd, Self::Wu, Self::EvenNonWu];

    pub fn is_even(self) -> bool {
        self != Self::Odd
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Odd => "odd",
            Self::Wu => "wu",
            Self::EvenNonWu => "even_non_wu",
        }
    }

    /// Class of a sum of elements of orthogonal summands.
    fn combine(self, other: Self) -> Self {
        match (self, other) {
            (Self::Odd, _) | (_, Self::Odd) => Self::Odd,
            (Self::Wu, Self::Wu) => Self::Wu,
            _ => Self::EvenNonWu,
        }
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Odd => "Odd",
            Self::Wu => "Wu",
            Self::EvenNonWu => "EvenNonWu",
        })
    }
}

/// Precomputed Wu data of a lattice with 2-periodic discriminant.
///
/// With discriminant generators `ξ_j = g_j / 2` (`g_j` integral), an even
/// `x` is Wu iff `⟨x/2, ξ_j⟩ ≡ ξ_j² (mod 1)` for all `j`, i.e.
/// `x·(G g_j) ≡ g_jᵀ G g_j (mod 4)`.
#[derive(Debug, Clone)]
pub struct WuTest {
    rank: usize,
    checks: Vec<(Vec<BigInt>, BigInt)>,
}

impl WuTest {
    pub fn new(l: &GramLattice) -> Result<Self> {
        let group = discriminant_group(l)?;
        if !group.is_two_periodic() {
            return Err(Error::NotTwoPeriodic(
                group.divisors.iter().map(ToString::to_string).collect(),
            ));
        }
        let four = BigInt::from(4);
        let checks = group
            .generators
            .iter()
            .map(|g| {
                let g: Vec<BigInt> = g.iter().map(|c| (c * BigInt::from(2)).to_integer()).collect();
                let a = l.gram().mul_vec(&g);
                let c: BigInt = a.iter().zip(&g).map(|(x, y)| x * y).sum();
                (a, c.mod_floor(&four))
            })
            .collect();
        Ok(Self {
            rank: l.rank(),
            checks,
        })
    }

    /// Class of `x` given its pairings `G x`; zero is allowed here.
    fn class_from_pairings(&self, x: &[BigInt], gx: &[BigInt]) -> ElementClass {
        if gx.iter().any(|p| p.is_odd()) {
            return ElementClass::Odd;
        }
        let four = BigInt::from(4);
        let wu = self.checks.iter().all(|(a, c)| {
            let dot: BigInt = x.iter().zip(a).map(|(u, v)| u * v).sum();
            dot.mod_floor(&four) == *c
        });
        if wu {
            ElementClass::Wu
        } else {
            ElementClass::EvenNonWu
        }
    }

    pub fn classify(&self, l: &GramLattice, x: &LatticeVector) -> Result<ElementClass> {
        if x.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: x.len(),
            });
        }
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let gx = l.pairings(x)?;
        Ok(self.class_from_pairings(x.coords(), &gx))
    }

    fn small(&self) -> Option<Vec<(Vec<i64>, i64)>> {
        self.checks
            .iter()
            .map(|(a, c)| {
                let a = a.iter().map(|x| x.mod_floor(&BigInt::from(4)).to_i64()).collect::<Option<Vec<_>>>()?;
                Some((a, c.to_i64()?))
            })
            .collect()
    }
}

pub fn classify_element(lminus: &GramLattice, x: &LatticeVector) -> Result<ElementClass> {
    WuTest::new(lminus)?.classify(lminus, x)
}

fn is_eight_spheres_type_one(v: &K3Vertex) -> bool {
    v.top.kind == TopKind::SpPlusQs { p: 0, q: 7 } && v.top.subscript_i
}

/// Whether `L−(v)` has an element of square `8n − 2` in class `cls`,
/// decided from the catalog data alone.
pub fn exists_class(v: &K3Vertex, n: u8, cls: ElementClass) -> bool {
    let (s, t) = (v.diag_s as i64, v.diag_t as i64);
    let wu_residue = (s - t).rem_euclid(4) == 3;
    match cls {
        ElementClass::Odd => !v.ks_flag && !is_eight_spheres_type_one(v),
        ElementClass::Wu if v.ks_flag => (s - t - (4 * n as i64 - 1)).rem_euclid(8) == 0,
        ElementClass::Wu => wu_residue,
        ElementClass::EvenNonWu => t > 1 || (t == 1 && !wu_residue),
    }
}

pub fn target_square(n: u8) -> i64 {
    8 * n as i64 - 2
}

/// Start offsets of the summands of `L−(v)`.
fn block_offsets(v: &K3Vertex) -> Vec<(StandardLattice, usize)> {
    let mut off = 0;
    v.lminus_blocks
        .iter()
        .map(|&b| {
            let o = off;
            off += b.rank();
            (b, o)
        })
        .collect()
}

fn first_block(v: &K3Vertex, kind: StandardLattice) -> Option<usize> {
    block_offsets(v).into_iter().find(|&(b, _)| b == kind).map(|(_, o)| o)
}

fn with_entries(rank: usize, entries: &[(usize, i64)]) -> LatticeVector {
    let mut c = vec![0i64; rank];
    for &(i, x) in entries {
        c[i] += x;
    }
    LatticeVector::from_ints(&c)
}

/// Candidate vectors from the standard case analysis, in order of preference.
fn candidates(v: &K3Vertex, n: u8, cls: ElementClass) -> Vec<LatticeVector> {
    let rank = v.lminus.rank();
    let n = n as i64;
    let (s, t) = (v.diag_s, v.diag_t);
    let u = first_block(v, StandardLattice::U);
    let u2 = first_block(v, StandardLattice::U2);
    let d4 = first_block(v, StandardLattice::D4);
    let e8 = first_block(v, StandardLattice::E8);
    let plus = (s > 0).then_some(0);
    let minus = (t > 0).then_some(s);
    let mut out = Vec::new();
    match cls {
        ElementClass::Odd => {
            if let Some(o) = u {
                out.push(with_entries(rank, &[(o, 1), (o + 1, 4 * n - 1)]));
            }
            if let (Some(p), Some(o)) = (plus, e8) {
                out.push(with_entries(rank, &[(p, 2 * n), (o, 2 * n - 1)]));
            }
            if let (Some(o2), Some(o4)) = (u2, d4) {
                out.push(with_entries(rank, &[(o2, 1), (o2 + 1, 2 * n), (o4, 1)]));
            }
        }
        ElementClass::EvenNonWu | ElementClass::Wu => {
            if let Some(m) = minus {
                if n == 0 {
                    out.push(with_entries(rank, &[(m, 1)]));
                }
                if let Some(p) = plus {
                    let k = 2 * n - 1;
                    out.push(with_entries(rank, &[(p, k + 1), (m, k)]));
                }
                if let Some(o) = u {
                    out.push(with_entries(rank, &[(m, 1), (o, 2), (o + 1, 2 * n)]));
                }
                if let Some(o) = u2 {
                    out.push(with_entries(rank, &[(m, 1), (o, 1), (o + 1, 2 * n)]));
                }
            }
            if cls == ElementClass::Wu {
                let ones: Vec<(usize, i64)> = (0..s + t).map(|i| (i, 1)).collect();
                let diag_norm = 2 * (s as i64 - t as i64);
                if let Some(o) = u {
                    let rest = 8 * n - 2 - diag_norm;
                    // (2, 2k) in U has square 8k
                    if rest.rem_euclid(8) == 0 {
                        let mut e = ones.clone();
                        e.extend([(o, 2), (o + 1, rest / 4)]);
                        out.push(with_entries(rank, &e));
                    }
                }
                if let (Some(o), 2) = (e8, s) {
                    // (3,1,…,1) has square 20 − 2t; e_0 ⊥ e_1 in E8
                    let rest = 8 * n - 2 - (20 - 2 * t as i64);
                    for (k1, k2) in [(1, 1), (1, 0), (0, 0)] {
                        if -8 * (k1 * k1 + k2 * k2) == rest {
                            let mut e = ones.clone();
                            e[0].1 = 3;
                            e.extend([(o, 2 * k1), (o + 1, 2 * k2)]);
                            out.push(with_entries(rank, &e));
                        }
                    }
                }
                if v.ks_flag {
                    out.extend(odd_diagonal_vector(s, t, 8 * n - 2));
                }
            }
        }
    }
    out
}

/// First vector with all entries in {1, 3, 5} of square `target` in
/// `s⟨2⟩ ⊕ t⟨−2⟩`.
fn odd_diagonal_vector(s: usize, t: usize, target: i64) -> Option<LatticeVector> {
    let len = s + t;
    let mut x = vec![1i64; len];
    loop {
        let norm: i64 = x
            .iter()
            .enumerate()
            .map(|(i, a)| if i < s { 2 * a * a } else { -2 * a * a })
            .sum();
        if norm == target {
            return Some(LatticeVector::from_ints(&x));
        }
        let i = (0..len).rev().find(|&i| x[i] < 5)?;
        x[i] += 2;
        for y in &mut x[i + 1..] {
            *y = 1;
        }
    }
}

/// An element of `L−(v)` of square `8n − 2` in class `cls`.
///
/// Tries the explicit constructions first and falls back to
/// [`search_witness`] with the default bound.
pub fn construct_witness(v: &K3Vertex, n: u8, cls: ElementClass) -> Result<LatticeVector> {
    let target = BigInt::from(target_square(n));
    let failed = || Error::WitnessFailed {
        vertex: v.id.clone(),
        square: target_square(n),
        class: cls.to_string(),
    };
    if !exists_class(v, n, cls) {
        return Err(failed());
    }
    let wu = WuTest::new(&v.lminus)?;
    for x in candidates(v, n, cls) {
        if v.lminus.norm(&x)? == target && wu.classify(&v.lminus, &x)? == cls {
            return Ok(x);
        }
    }
    search_witness(&v.lminus, target_square(n), cls, DEFAULT_BOUND)?.ok_or_else(failed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub bound: i64,
    /// Maximum number of vectors enumerated, summed over orthogonal blocks.
    pub budget: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            bound: DEFAULT_BOUND,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SearchConfig {
    pub fn with_bound(bound: i64) -> Self {
        Self {
            bound,
            ..Self::default()
        }
    }
}

/// Connected components of the graph of nonzero off-diagonal entries.
fn orthogonal_blocks(l: &GramLattice) -> Vec<Vec<usize>> {
    let n = l.rank();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for b in 0..n {
                if !seen[b] && !l.entry(a, b).is_zero() {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort();
        blocks.push(comp);
    }
    blocks
}

type StateKey = (i64, ElementClass, bool);

/// For one block: the first vector of the box reaching each state.
#[derive(Debug)]
struct BlockTable {
    states: BTreeMap<StateKey, Vec<i64>>,
}

type BlockCacheKey = (Vec<Vec<i64>>, i64);

fn block_cache() -> &'static Mutex<HashMap<BlockCacheKey, Arc<BlockTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<BlockCacheKey, Arc<BlockTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub(crate) fn small_gram(l: &GramLattice) -> Result<Vec<Vec<i64>>> {
    (0..l.rank())
        .map(|i| {
            (0..l.rank())
                .map(|j| {
                    l.entry(i, j)
                        .to_i64()
                        .ok_or_else(|| Error::Structural("Gram entry exceeds 64 bits".into()))
                })
                .collect()
        })
        .collect()
}

fn block_table(gram: Vec<Vec<i64>>, bound: i64) -> Result<Arc<BlockTable>> {
    let key = (gram, bound);
    if let Some(t) = block_cache().lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let (gram, _) = &key;
    let l = GramLattice::from_rows(gram)?;
    let wu = WuTest::new(&l)?
        .small()
        .ok_or_else(|| Error::Structural("Wu data exceeds 64 bits".into()))?;
    let table = Arc::new(enumerate_block(gram, &wu, bound));
    block_cache().lock().unwrap().insert(key.clone(), table.clone());
    Ok(table)
}

/// Walks the box `[−b, b]^k` in lexicographic order (last coordinate
/// fastest), updating pairings, norm and Wu dot products incrementally.
fn enumerate_block(gram: &[Vec<i64>], wu: &[(Vec<i64>, i64)], bound: i64) -> BlockTable {
    let k = gram.len();
    let mut x = vec![-bound; k];
    let mut gx: Vec<i64> = (0..k).map(|i| gram[i].iter().map(|g| g * -bound).sum()).collect();
    let mut norm: i64 = x.iter().zip(&gx).map(|(a, b)| a * b).sum();
    let mut dots: Vec<i64> = wu
        .iter()
        .map(|(a, _)| a.iter().map(|c| c * -bound).sum())
        .collect();
    let mut nonzero = if bound == 0 { 0 } else { k };
    let mut states = BTreeMap::new();

    let shift = |i: usize, delta: i64, x: &mut [i64], gx: &mut [i64], norm: &mut i64, dots: &mut [i64], nonzero: &mut usize| {
        let was_zero = x[i] == 0;
        *norm += 2 * delta * gx[i] + delta * delta * gram[i][i];
        for (j, g) in gx.iter_mut().enumerate() {
            *g += delta * gram[j][i];
        }
        for (d, (a, _)) in dots.iter_mut().zip(wu) {
            *d += delta * a[i];
        }
        x[i] += delta;
        match (was_zero, x[i] == 0) {
            (true, false) => *nonzero += 1,
            (false, true) => *nonzero -= 1,
            _ => {}
        }
    };

    loop {
        let class = if gx.iter().any(|g| g.rem_euclid(2) == 1) {
            ElementClass::Odd
        } else if dots.iter().zip(wu).all(|(d, (_, c))| d.rem_euclid(4) == *c) {
            ElementClass::Wu
        } else {
            ElementClass::EvenNonWu
        };
        states
            .entry((norm, class, nonzero > 0))
            .or_insert_with(|| x.clone());
        let Some(i) = (0..k).rev().find(|&i| x[i] < bound) else {
            break;
        };
        shift(i, 1, &mut x, &mut gx, &mut norm, &mut dots, &mut nonzero);
        for j in i + 1..k {
            shift(j, -2 * bound, &mut x, &mut gx, &mut norm, &mut dots, &mut nonzero);
        }
    }
    BlockTable { states }
}

/// Number of vectors the search would enumerate, summed over blocks.
pub fn search_size(l: &GramLattice, bound: i64) -> u128 {
    let side = (2 * bound + 1) as u128;
    orthogonal_blocks(l)
        .iter()
        .map(|b| side.saturating_pow(b.len() as u32))
        .fold(0u128, u128::saturating_add)
}

/// First vector (in a fixed deterministic order) with entries in
/// `[−bound, bound]`, square `target` and class `cls`.
///
/// The box is factored along the orthogonal block decomposition of the
/// Gram matrix: each block is enumerated once and the blocks are combined
/// by dynamic programming over (norm, class, nonzero) states. The result is
/// the same existence answer as a scan of the full product box.
pub fn search_witness_with(
    l: &GramLattice,
    target: i64,
    cls: ElementClass,
    config: &SearchConfig,
) -> Result<Option<LatticeVector>> {
    if config.bound < 1 {
        return Err(Error::Structural("search bound must be positive".into()));
    }
    let size = search_size(l, config.bound);
    if size > config.budget {
        return Err(Error::SearchBudget {
            size,
            budget: config.budget,
        });
    }
    let blocks = orthogonal_blocks(l);
    let full = small_gram(l)?;
    let mut tables = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let gram = b.iter().map(|&i| b.iter().map(|&j| full[i][j]).collect()).collect();
        tables.push(block_table(gram, config.bound)?);
    }
    // layer[k] maps a state after k blocks to (previous state, block state)
    let start: StateKey = (0, ElementClass::Wu, false);
    let mut layers: Vec<BTreeMap<StateKey, (StateKey, StateKey)>> = Vec::new();
    let mut current: Vec<StateKey> = vec![start];
    for table in &tables {
        let mut next: BTreeMap<StateKey, (StateKey, StateKey)> = BTreeMap::new();
        for &prev in &current {
            for &bs in table.states.keys() {
                let key = (prev.0 + bs.0, prev.1.combine(bs.1), prev.2 || bs.2);
                next.entry(key).or_insert((prev, bs));
            }
        }
        current = next.keys().copied().collect();
        layers.push(next);
    }
    let goal: StateKey = (target, cls, true);
    if !current.contains(&goal) {
        return Ok(None);
    }
    let mut coords = vec![0i64; l.rank()];
    let mut key = goal;
    for (k, layer) in layers.iter().enumerate().rev() {
        let (prev, bs) = layer[&key];
        for (&i, &c) in blocks[k].iter().zip(&tables[k].states[&bs]) {
            coords[i] = c;
        }
        key = prev;
    }
    Ok(Some(LatticeVector::from_ints(&coords)))
}

pub fn search_witness(
    l: &GramLattice,
    target: i64,
    cls: ElementClass,
    bound: i64,
) -> Result<Option<LatticeVector>> {
    search_witness_with(l, target, cls, &SearchConfig::with_bound(bound))
}
