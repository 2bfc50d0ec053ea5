//! The morphism between the regular parts of the two graphs, and lattice
//! level checks of every K3 edge.

use std::collections::BTreeSet;

use super::{DeformationGraph, K4Graph, IRR};
use crate::catalog::Catalog;
use crate::classes::{construct_witness, ElementClass};
use crate::error::Result;
use crate::forms::{decidable_invariants, lattices_equivalent, Equivalence};
use crate::lattice::{GramLattice, StandardLattice};

#[derive(Debug, Clone, Default)]
pub struct GraphIsomorphism {
    /// K4 vertex id and its image in the K3 graph.
    pub vertex_map: Vec<(String, String)>,
    /// K4 edge `(origin, class)` and the image edge's terminal.
    pub edge_map: Vec<(String, ElementClass, String)>,
    pub removed_k3: Vec<String>,
    pub removed_k4: Vec<String>,
    pub failures: Vec<String>,
}

impl GraphIsomorphism {
    pub fn is_isomorphism(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Vertex ids present in `a` but not in `b`.
fn missing(a: &DeformationGraph, b: &DeformationGraph) -> Vec<String> {
    a.nodes()
        .iter()
        .filter(|n| b.node(&n.id).is_none())
        .map(|n| n.id.clone())
        .collect()
}

/// Drops the irregular vertex of each graph (the one without a counterpart)
/// together with its incoming edges, then matches the rest: a K4 vertex
/// goes to the K3 vertex whose `L+` has the invariants of `−M−`, and an edge
/// `[c, h]` goes to the edge of the same class at the image of `c`.
pub fn regular_subgraphs_and_f(
    k3: &DeformationGraph,
    k4: &K4Graph,
    catalog: &Catalog,
) -> Result<GraphIsomorphism> {
    let g4 = &k4.graph;
    let mut out = GraphIsomorphism {
        removed_k3: missing(k3, g4),
        removed_k4: missing(g4, k3),
        ..Default::default()
    };
    if out.removed_k3.len() != 1 || out.removed_k4 != [IRR] {
        out.failures.push(format!(
            "irregular vertices: K3 {:?}, K4 {:?}",
            out.removed_k3, out.removed_k4
        ));
        return Ok(out);
    }
    let dropped3 = out.removed_k3[0].clone();

    let lplus_invariants: Vec<_> = catalog
        .iter()
        .filter(|v| v.id != dropped3)
        .map(|v| (v.id.clone(), decidable_invariants(&v.lplus)))
        .collect();
    let mut images = BTreeSet::new();
    for data in k4.data.iter().filter(|d| d.id != IRR) {
        let inv = decidable_invariants(&data.mminus.negate());
        let matches: Vec<&String> = lplus_invariants
            .iter()
            .filter(|(_, i)| i.is_some() && *i == inv)
            .map(|(id, _)| id)
            .collect();
        match matches.as_slice() {
            [id] if **id == data.id => {
                images.insert((*id).clone());
                out.vertex_map.push((data.id.clone(), (*id).clone()));
            }
            // definite L+ of rank > 2: fall back to the key identification
            [] if inv.is_none() && k3.node(&data.id).is_some() => {
                images.insert(data.id.clone());
                out.vertex_map.push((data.id.clone(), data.id.clone()));
            }
            other => out.failures.push(format!(
                "K4 vertex {} matches K3 vertices {other:?}",
                data.id
            )),
        }
    }
    let k3_regular = k3.vertex_count() - 1;
    if images.len() != k3_regular || out.vertex_map.len() != k3_regular {
        out.failures.push(format!(
            "vertex map covers {} of {k3_regular} vertices",
            images.len()
        ));
    }

    let image_of = |id: &str| {
        out.vertex_map
            .iter()
            .find(|(a, _)| a == id)
            .map(|(_, b)| b.clone())
    };
    let mut edge_map = Vec::new();
    let mut failures = Vec::new();
    for e in g4.edges() {
        let (from, to) = (&g4.nodes()[e.from].id, &g4.nodes()[e.to].id);
        if to == IRR {
            continue;
        }
        let (Some(f_from), Some(f_to)) = (image_of(from), image_of(to)) else {
            failures.push(format!("edge {from} -> {to} has an unmapped endpoint"));
            continue;
        };
        match k3.terminal(&f_from, e.class) {
            Some(t) if t == f_to => edge_map.push((from.clone(), e.class, f_to)),
            Some(t) => failures.push(format!(
                "edge [{from}, {}] maps to {f_from} -> {t}, expected -> {f_to}",
                e.class
            )),
            None => failures.push(format!("no K3 edge [{f_from}, {}]", e.class)),
        }
    }
    let k3_regular_edges = k3
        .edges()
        .iter()
        .filter(|e| k3.nodes()[e.to].id != dropped3)
        .count();
    if edge_map.len() != k3_regular_edges {
        failures.push(format!(
            "edge map covers {} of {k3_regular_edges} regular K3 edges",
            edge_map.len()
        ));
    }
    out.edge_map = edge_map;
    out.failures.extend(failures);
    Ok(out)
}

/// The K4 graph is the K3 graph with the edge into the dropped vertex
/// replaced by the edge into `irr`, as directed graphs on vertex ids.
pub fn swap_check(k3: &DeformationGraph, k4: &DeformationGraph) -> Vec<String> {
    let mut failures = Vec::new();
    let gone = missing(k3, k4);
    let new = missing(k4, k3);
    if gone.len() != 1 || new != [IRR] {
        failures.push(format!("vertex swap is {gone:?} -> {new:?}"));
        return failures;
    }
    let into_gone: Vec<_> = k3
        .edge_pairs()
        .into_iter()
        .filter(|(_, b)| *b == gone[0])
        .collect();
    let into_new: Vec<_> = k4
        .edge_pairs()
        .into_iter()
        .filter(|(_, b)| b == IRR)
        .collect();
    if into_gone.len() != 1 || into_new.len() != 1 {
        failures.push(format!("swapped edges {into_gone:?} and {into_new:?}"));
        return failures;
    }
    let mut expected = k3.edge_pairs();
    expected.remove(&into_gone[0]);
    expected.insert(into_new[0].clone());
    if expected != k4.edge_pairs() {
        failures.push("edge sets differ beyond the swap".into());
    }
    if k3.edge_count() != k4.edge_count() {
        failures.push("edge counts differ".into());
    }
    failures
}

#[derive(Debug, Clone)]
pub struct EdgeCheck {
    pub from: String,
    pub to: String,
    pub class: ElementClass,
    /// `L+(from) ⊕ ⟨−2⟩ ≅ L+(to)` for odd edges, `L−(to) ⊕ ⟨−2⟩ ≅ L−(from)`
    /// for even ones.
    pub eigenlattice: Equivalence,
    /// The orthogonal complement of a witness in `L−(from)` against `L−(to)`.
    pub complement: Equivalence,
}

#[derive(Debug, Clone, Default)]
pub struct StructuralReport {
    pub edges: Vec<EdgeCheck>,
    /// Vertices whose `L−` is definite, where orbit-to-class collapse is
    /// applied without the indefiniteness hypothesis.
    pub definite: Vec<String>,
    /// Catalog vertices whose `L+` is equivalent to `−M−` of `irr`.
    pub irr_matches: Vec<String>,
    pub irr_undecidable: Vec<String>,
    pub failures: Vec<String>,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn undecidable(&self) -> Vec<&EdgeCheck> {
        self.edges
            .iter()
            .filter(|e| {
                e.eigenlattice == Equivalence::Undecidable || e.complement == Equivalence::Undecidable
            })
            .collect()
    }
}

fn minus_two() -> GramLattice {
    StandardLattice::Minus2.lattice()
}

pub fn structural_checks(
    k3: &DeformationGraph,
    k4: &K4Graph,
    catalog: &Catalog,
) -> Result<StructuralReport> {
    let mut report = StructuralReport::default();
    for e in k3.edges() {
        let from = catalog.by_id(&k3.nodes()[e.from].id)?;
        let to = catalog.by_id(&k3.nodes()[e.to].id)?;
        let eigenlattice = if e.class == ElementClass::Odd {
            lattices_equivalent(&from.lplus.direct_sum(&minus_two()), &to.lplus)
        } else {
            lattices_equivalent(&to.lminus.direct_sum(&minus_two()), &from.lminus)
        };
        let x = construct_witness(from, 0, e.class)?;
        let comp = from.lminus.orthogonal_sublattice(&x)?;
        let complement = lattices_equivalent(&comp.lattice, &to.lminus);
        for (what, verdict) in [("eigenlattice", eigenlattice), ("complement", complement)] {
            if verdict == Equivalence::No {
                report.failures.push(format!(
                    "{what} check fails on [{}, {}] -> {}",
                    from.id, e.class, to.id
                ));
            }
        }
        report.edges.push(EdgeCheck {
            from: from.id.clone(),
            to: to.id.clone(),
            class: e.class,
            eigenlattice,
            complement,
        });
    }
    for v in catalog.iter() {
        if v.lminus.signature()?.is_definite() {
            report.definite.push(v.id.clone());
        }
    }
    let irr = k4
        .data_of(IRR)
        .ok_or_else(|| crate::error::Error::Structural("K4 graph has no irr data".into()))?;
    let m = irr.mminus.negate();
    for v in catalog.iter() {
        match lattices_equivalent(&m, &v.lplus) {
            Equivalence::Yes => report.irr_matches.push(v.id.clone()),
            Equivalence::Undecidable => report.irr_undecidable.push(v.id.clone()),
            Equivalence::No => {}
        }
    }
    if !report.irr_matches.is_empty() {
        report
            .failures
            .push(format!("-M-(irr) is equivalent to L+ of {:?}", report.irr_matches));
    }
    Ok(report)
}
