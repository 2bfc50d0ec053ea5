//! The 75 real K3-involution classes with their eigenlattices.

mod tables;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use tables::{CatalogTables, MinusRow, OtherRow, PlusRow};

use crate::error::{Error, Result};
use crate::forms::{discriminant_quadratic, FormInvariants, Parity};
use crate::lattice::{direct_sum_all, GramLattice, Signature, StandardLattice};

pub const CATALOG_SIZE: usize = 75;
pub const PRINCIPAL_SIZE: usize = 64;
pub const K3_RANK: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopKind {
    /// `S_p ⊔ qS`; the `[kS]` family is stored as `p = 0, q = k − 1`.
    SpPlusQs { p: u32, q: u32 },
    TwoTori,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopType {
    pub kind: TopKind,
    pub subscript_i: bool,
}

impl fmt::Display for TopType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TopKind::SpPlusQs { p: 0, q: 0 } => write!(f, "[S]")?,
            TopKind::SpPlusQs { p: 0, q } => write!(f, "[{}S]", q + 1)?,
            TopKind::SpPlusQs { p, q: 0 } => write!(f, "[S{p}]")?,
            TopKind::SpPlusQs { p, q: 1 } => write!(f, "[S{p}+S]")?,
            TopKind::SpPlusQs { p, q } => write!(f, "[S{p}+{q}S]")?,
            TopKind::TwoTori => write!(f, "[2S1]")?,
            TopKind::Empty => write!(f, "[empty]")?,
        }
        if self.subscript_i {
            write!(f, "_I")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexType {
    I,
    II,
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexType::I => "I",
            VertexType::II => "II",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexKey {
    pub r: u32,
    pub d: u32,
    #[serde(rename = "type")]
    pub vtype: VertexType,
}

impl VertexKey {
    pub fn new(r: u32, d: u32, vtype: VertexType) -> Self {
        Self { r, d, vtype }
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.d, self.vtype)
    }
}

#[derive(Debug, Clone)]
pub struct K3Vertex {
    pub id: String,
    pub top: TopType,
    pub lplus: GramLattice,
    pub lminus: GramLattice,
    /// Summands of `lminus` in basis order: `s⟨2⟩`, `t⟨−2⟩`, then the rest.
    pub lminus_blocks: Vec<StandardLattice>,
    pub diag_s: usize,
    pub diag_t: usize,
    pub r: u32,
    pub d: u32,
    pub vtype: VertexType,
    pub ks_flag: bool,
    pub principal: bool,
    pub lplus_form: FormInvariants,
    pub lminus_form: FormInvariants,
}

impl K3Vertex {
    pub fn key(&self) -> VertexKey {
        VertexKey::new(self.r, self.d, self.vtype)
    }

    /// The id without brackets, as used for graph labels.
    pub fn short_name(&self) -> String {
        self.id.replace(['[', ']'], "")
    }

    /// Offset of the first non-diagonal summand of `lminus`.
    pub fn diagonal_len(&self) -> usize {
        self.diag_s + self.diag_t
    }

    pub fn record(&self) -> CatalogRecord {
        CatalogRecord {
            id: self.id.clone(),
            r: self.r,
            d: self.d,
            vtype: self.vtype,
            s: self.diag_s,
            t: self.diag_t,
            lplus: self.lplus.clone(),
            lminus: self.lminus.clone(),
        }
    }
}

/// Serialized form of a catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub id: String,
    pub r: u32,
    pub d: u32,
    #[serde(rename = "type")]
    pub vtype: VertexType,
    pub s: usize,
    pub t: usize,
    pub lplus: GramLattice,
    pub lminus: GramLattice,
}

fn summand_label(s: usize, t: usize, blocks: &[StandardLattice]) -> String {
    let mut runs: Vec<(usize, String)> = Vec::new();
    if s > 0 {
        runs.push((s, "<2>".into()));
    }
    if t > 0 {
        runs.push((t, "<-2>".into()));
    }
    for b in blocks {
        match runs.last_mut() {
            Some((k, name)) if name == b.name() => *k += 1,
            _ => runs.push((1, b.name().to_string())),
        }
    }
    runs.iter()
        .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{k}{n}") })
        .collect::<Vec<_>>()
        .join("+")
}

fn assemble(s: usize, t: usize, blocks: &[StandardLattice]) -> (GramLattice, Vec<StandardLattice>) {
    let mut layout = vec![StandardLattice::Plus2; s];
    layout.extend(std::iter::repeat_n(StandardLattice::Minus2, t));
    layout.extend_from_slice(blocks);
    let parts: Vec<GramLattice> = layout.iter().map(|b| b.lattice()).collect();
    let l = direct_sum_all(parts.iter()).with_label(summand_label(s, t, blocks));
    (l, layout)
}

struct Draft {
    top: TopType,
    lplus: GramLattice,
    lminus: GramLattice,
    layout: Vec<StandardLattice>,
    s: usize,
    t: usize,
    principal: bool,
}

fn fail(entry: &str, reason: impl Into<String>) -> Error {
    Error::Catalog {
        entry: entry.to_string(),
        reason: reason.into(),
    }
}

fn form_of(id: &str, which: &str, l: &GramLattice) -> Result<FormInvariants> {
    discriminant_quadratic(l, None)
        .and_then(|f| f.invariants())
        .map_err(|e| fail(id, format!("discriminant form of {which}: {e}")))
}

fn signature_of(id: &str, which: &str, l: &GramLattice) -> Result<Signature> {
    l.signature()
        .map_err(|e| fail(id, format!("signature of {which}: {e}")))
}

/// Checks every per-entry invariant and fills in the derived data.
fn finish(draft: Draft) -> Result<K3Vertex> {
    let id = draft.top.to_string();
    let (lp, lm) = (&draft.lplus, &draft.lminus);
    if lp.rank() + lm.rank() != K3_RANK {
        return Err(fail(
            &id,
            format!("rank L+ + rank L- = {} + {} != 22", lp.rank(), lm.rank()),
        ));
    }
    if !lp.is_even() || !lm.is_even() {
        return Err(fail(&id, "eigenlattice is odd"));
    }
    let sp = signature_of(&id, "L+", lp)?;
    let sm = signature_of(&id, "L-", lm)?;
    if sp.positive != 1 || sm.positive != 2 {
        return Err(fail(&id, format!("signatures L+ {sp}, L- {sm}")));
    }
    let fp = form_of(&id, "L+", lp)?;
    let fm = form_of(&id, "L-", lm)?;
    if fp.rank != fm.rank || fp.parity != fm.parity || (fp.brown + fm.brown) % 8 != 0 {
        return Err(fail(
            &id,
            format!("discriminant forms not anti-isometric: L+ {fp}, L- {fm}"),
        ));
    }
    for (which, sig, f) in [("L+", sp, fp), ("L-", sm, fm)] {
        if sig.index().rem_euclid(8) != f.brown as i64 {
            return Err(fail(
                &id,
                format!("{which}: signature {sig} and brown {} violate Milgram", f.brown),
            ));
        }
    }
    let vtype = match fm.parity {
        Parity::Even => VertexType::I,
        Parity::Odd => VertexType::II,
    };
    let expected = if draft.principal {
        draft.s == 0 && draft.t == 0
    } else {
        true
    };
    if (vtype == VertexType::I) != expected {
        return Err(fail(&id, format!("type {vtype} disagrees with the diagonal part")));
    }
    let r = lp.rank() as u32;
    let d = fp.rank as u32;
    if let TopKind::SpPlusQs { p, q } = draft.top.kind {
        let (p, q) = (p as i64, q as i64);
        if r as i64 != 11 - p + q || d as i64 != 11 - p - q {
            return Err(fail(
                &id,
                format!("(r, d) = ({r}, {d}) but topology gives ({}, {})", 11 - p + q, 11 - p - q),
            ));
        }
    }
    let ks_flag = draft.layout.iter().all(|b| {
        matches!(b, StandardLattice::Plus2 | StandardLattice::Minus2)
    });
    Ok(K3Vertex {
        id,
        top: draft.top,
        lplus: draft.lplus,
        lminus: draft.lminus,
        lminus_blocks: draft.layout,
        diag_s: draft.s,
        diag_t: draft.t,
        r,
        d,
        vtype,
        ks_flag,
        principal: draft.principal,
        lplus_form: fp,
        lminus_form: fm,
    })
}

fn drafts(tables: &CatalogTables) -> Result<Vec<Draft>> {
    let plus_rows: BTreeMap<u32, &PlusRow> = tables.plus.iter().map(|r| (r.q, r)).collect();
    let mut used = 0usize;
    let mut out = Vec::new();
    for row in &tables.minus {
        for t in 0..=row.q0 {
            let (p, q) = (row.p, row.q0 - t);
            let top = TopType {
                kind: TopKind::SpPlusQs { p, q },
                subscript_i: false,
            };
            let plus = plus_rows
                .get(&q)
                .ok_or_else(|| fail(&top.to_string(), format!("no L+ row for q = {q}")))?;
            let t_plus = plus.p0.checked_sub(p).ok_or_else(|| {
                fail(&top.to_string(), format!("L+ row q = {q} stops at p = {}", plus.p0))
            })?;
            used += 1;
            let (lplus, _) = assemble(plus.s, t_plus as usize, &plus.blocks);
            let (lminus, layout) = assemble(row.s, t as usize, &row.blocks);
            out.push(Draft {
                top,
                lplus,
                lminus,
                layout,
                s: row.s,
                t: t as usize,
                principal: true,
            });
        }
    }
    let plus_total: usize = tables.plus.iter().map(|r| r.p0 as usize + 1).sum();
    if used != plus_total {
        return Err(fail(
            "principal series",
            format!("{used} L- entries but {plus_total} L+ entries"),
        ));
    }
    for row in &tables.other {
        let (lplus, _) = assemble(0, 0, &row.lplus);
        let (lminus, layout) = assemble(0, 0, &row.lminus);
        out.push(Draft {
            top: TopType {
                kind: row.top,
                subscript_i: row.subscript_i,
            },
            lplus,
            lminus,
            layout,
            s: 0,
            t: 0,
            principal: false,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Catalog {
    vertices: Vec<K3Vertex>,
    by_key: HashMap<VertexKey, usize>,
    by_id: HashMap<String, usize>,
}

impl Catalog {
    pub fn from_tables(tables: &CatalogTables) -> Result<Self> {
        let vertices = drafts(tables)?
            .into_iter()
            .map(finish)
            .collect::<Result<Vec<_>>>()?;
        let mut by_key = HashMap::new();
        let mut by_id = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if let Some(j) = by_key.insert(v.key(), i) {
                return Err(fail(
                    &v.id,
                    format!("key {} already used by {}", v.key(), vertices[j].id),
                ));
            }
            if by_id.insert(v.id.clone(), i).is_some() {
                return Err(fail(&v.id, "duplicate id"));
            }
        }
        let principal = vertices.iter().filter(|v| v.principal).count();
        let ks = vertices.iter().filter(|v| v.ks_flag).count();
        if vertices.len() != CATALOG_SIZE || principal != PRINCIPAL_SIZE || ks != 10 {
            return Err(fail(
                "catalog",
                format!(
                    "{} entries ({principal} principal, {ks} of the form [kS])",
                    vertices.len()
                ),
            ));
        }
        Ok(Self {
            vertices,
            by_key,
            by_id,
        })
    }

    pub fn vertices(&self) -> &[K3Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, K3Vertex> {
        self.vertices.iter()
    }

    pub fn lookup(&self, key: VertexKey) -> Result<&K3Vertex> {
        self.by_key
            .get(&key)
            .map(|&i| &self.vertices[i])
            .ok_or_else(|| Error::NoSuchVertex(key.to_string()))
    }

    /// Resolves a vertex id. Accepts the canonical form as well as
    /// unbracketed ids and the `⊔`, `∅`, `S_p` spellings.
    pub fn by_id(&self, id: &str) -> Result<&K3Vertex> {
        let mut norm: String = id
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .replace('⊔', "+")
            .replace('∅', "empty");
        // S_p spelling, but not the _I suffix
        for p in 0..=9 {
            norm = norm.replace(&format!("S_{p}"), &format!("S{p}"));
        }
        if !norm.starts_with('[') {
            norm = match norm.split_once("_I") {
                Some((head, tail)) => format!("[{head}]_I{tail}"),
                None => format!("[{norm}]"),
            };
        }
        self.by_id
            .get(&norm)
            .map(|&i| &self.vertices[i])
            .ok_or_else(|| Error::NoSuchVertex(id.to_string()))
    }

    pub fn records(&self) -> Vec<CatalogRecord> {
        self.vertices.iter().map(K3Vertex::record).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": crate::SCHEMA,
            "kind": "catalog",
            "count": self.len(),
            "entries": self.records(),
        })
    }

    /// Plaintext listing, one line per vertex, principal series first.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<14} {:>2} {:>2} {:<4} {:>1} {:>1}  {:<22} {}\n",
            "vertex", "r", "d", "type", "s", "t", "L+", "L-"
        );
        for v in &self.vertices {
            out.push_str(&format!(
                "{:<14} {:>2} {:>2} {:<4} {:>1} {:>1}  {:<22} {}\n",
                v.id,
                v.r,
                v.d,
                v.vtype,
                v.diag_s,
                v.diag_t,
                v.lplus.label().unwrap_or(""),
                v.lminus.label().unwrap_or("")
            ));
        }
        out
    }
}

pub fn build_catalog() -> Result<Catalog> {
    Catalog::from_tables(&CatalogTables::builtin())
}

/// The built-in catalog, constructed once.
pub fn shared() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| build_catalog().expect("built-in catalog is consistent"))
}

/// `(rank L+, rank discr L±)`, re-checked against the topological formulas
/// `r = 11 − p + q`, `d = 11 − p − q` where they apply.
pub fn coords_rd(v: &K3Vertex) -> Result<(u32, u32)> {
    let r = v.lplus.rank() as u32;
    let d = crate::forms::discriminant_group(&v.lplus)?.rank() as u32;
    if let TopKind::SpPlusQs { p, q } = v.top.kind {
        let (p, q) = (p as i64, q as i64);
        if (r as i64, d as i64) != (11 - p + q, 11 - p - q) {
            return Err(fail(&v.id, "coordinates disagree with the topological formula"));
        }
    }
    Ok((r, d))
}
