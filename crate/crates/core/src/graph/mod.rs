//! Adjacency graphs of real K3 involutions and of real cubic fourfolds.

mod export;
mod flip;
mod iso;
mod synth;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use flip::{
    basic_cycles_regular, find_flip_triples, flip, verify_flip_cycle, BasicCycle,
    BasicCycleReport, FlipCycleReport, FlipTriple,
};
pub use iso::{
    regular_subgraphs_and_f, structural_checks, swap_check, EdgeCheck, GraphIsomorphism,
    StructuralReport,
};
pub use synth::{k4_lattice, synthesize_k4_plus, Synthesis};

use crate::catalog::{Catalog, K3Vertex, TopKind, VertexKey, VertexType};
use crate::classes::{exists_class, ElementClass};
use crate::error::{Error, Result};
use crate::lattice::{direct_sum_all, GramLattice, StandardLattice};

pub const IRR: &str = "irr";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    K3,
    K4,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::K3 => "k3",
            GraphKind::K4 => "k4",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub r: u32,
    pub d: u32,
    pub vtype: VertexType,
    /// Catalog key; `None` only for the irregular K4 vertex.
    pub key: Option<VertexKey>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub class: ElementClass,
    pub square: i64,
}

#[derive(Debug, Clone)]
pub struct DeformationGraph {
    pub kind: GraphKind,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

impl DeformationGraph {
    fn new(kind: GraphKind, nodes: Vec<Node>) -> Self {
        let index = nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();
        Self {
            kind,
            nodes,
            edges: Vec::new(),
            index,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    pub fn out_edges(&self, id: &str) -> impl Iterator<Item = &Edge> {
        let i = self.index_of(id);
        self.edges.iter().filter(move |e| Some(e.from) == i)
    }

    /// The edge leaving `id` with class `class`.
    pub fn edge(&self, id: &str, class: ElementClass) -> Option<&Edge> {
        self.out_edges(id).find(|e| e.class == class)
    }

    /// Terminal vertex id of the edge leaving `id` with class `class`.
    pub fn terminal(&self, id: &str, class: ElementClass) -> Option<&str> {
        self.edge(id, class).map(|e| self.nodes[e.to].id.as_str())
    }

    pub fn out_degree(&self, id: &str) -> usize {
        self.out_edges(id).count()
    }

    /// Vertices without outgoing edges, in node order.
    pub fn sinks(&self) -> Vec<&str> {
        let mut has_out = vec![false; self.nodes.len()];
        for e in &self.edges {
            has_out[e.from] = true;
        }
        self.nodes
            .iter()
            .zip(has_out)
            .filter(|(_, h)| !h)
            .map(|(n, _)| n.id.as_str())
            .collect()
    }

    pub fn edge_pairs(&self) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .map(|e| (self.nodes[e.from].id.clone(), self.nodes[e.to].id.clone()))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Loops, multiple edges (ordered or unordered), out-degree above three
    /// and disconnectedness, as a list of violations.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            let (a, b) = (&self.nodes[e.from].id, &self.nodes[e.to].id);
            if e.from == e.to {
                out.push(format!("loop at {a}"));
            }
            let pair = if e.from < e.to { (e.from, e.to) } else { (e.to, e.from) };
            if !pairs.insert(pair) {
                out.push(format!("multiple edges between {a} and {b}"));
            }
        }
        for n in &self.nodes {
            let deg = self.out_degree(&n.id);
            if deg > 3 {
                out.push(format!("{} has out-degree {deg}", n.id));
            }
        }
        if !self.is_connected() {
            out.push("graph is not connected".into());
        }
        out
    }

    /// `vertices=V edges=E irregular=<ids>`.
    pub fn summary(&self, irregular: &[&str]) -> String {
        format!(
            "vertices={} edges={} irregular={}",
            self.vertex_count(),
            self.edge_count(),
            irregular.join(",")
        )
    }

    fn push_edge(&mut self, from: usize, to: usize, class: ElementClass, square: i64) {
        self.edges.push(Edge {
            from,
            to,
            class,
            square,
        });
    }
}

/// Endpoint key of the edge `(v, class)`: rank of `L+` grows by one, `d`
/// grows for odd elements and drops for even ones, and the terminal is of
/// type I exactly for Wu elements.
pub fn terminal_key(v: &K3Vertex, class: ElementClass) -> VertexKey {
    let d = if class == ElementClass::Odd { v.d + 1 } else { v.d - 1 };
    let vtype = if class == ElementClass::Wu {
        VertexType::I
    } else {
        VertexType::II
    };
    VertexKey::new(v.r + 1, d, vtype)
}

fn node_of(v: &K3Vertex) -> Node {
    Node {
        id: v.id.clone(),
        r: v.r,
        d: v.d,
        vtype: v.vtype,
        key: Some(v.key()),
    }
}

fn edge_error(v: &K3Vertex, class: ElementClass, why: impl fmt::Display) -> Error {
    Error::Structural(format!("edge from {} with class {class}: {why}", v.id))
}

pub fn build_k3_graph(catalog: &Catalog) -> Result<DeformationGraph> {
    let mut g = DeformationGraph::new(GraphKind::K3, catalog.iter().map(node_of).collect());
    for (i, v) in catalog.iter().enumerate() {
        for class in ElementClass::ALL {
            if !exists_class(v, 0, class) {
                continue;
            }
            let key = terminal_key(v, class);
            let to = catalog
                .lookup(key)
                .map_err(|_| edge_error(v, class, format!("terminal key {key} is not in the catalog")))?;
            let j = g.index_of(&to.id).expect("catalog vertex is a node");
            g.push_edge(i, j, class, -2);
        }
    }
    let bad = g.invariant_violations();
    if !bad.is_empty() {
        return Err(Error::Structural(bad.join("; ")));
    }
    Ok(g)
}

pub fn is_eight_spheres_type_one(v: &K3Vertex) -> bool {
    v.top.kind == TopKind::SpPlusQs { p: 0, q: 7 } && v.top.subscript_i
}

pub fn is_three_spheres(v: &K3Vertex) -> bool {
    v.top.kind == TopKind::SpPlusQs { p: 0, q: 2 } && !v.top.subscript_i
}

#[derive(Debug, Clone)]
pub struct K4VertexData {
    pub id: String,
    /// `M− = Ker(1 + c)` on the fourfold lattice.
    pub mminus: GramLattice,
    /// Corresponding K3 vertex; `None` for the irregular vertex.
    pub source: Option<VertexKey>,
}

#[derive(Debug, Clone)]
pub struct K4Graph {
    pub graph: DeformationGraph,
    pub data: Vec<K4VertexData>,
}

impl K4Graph {
    pub fn data_of(&self, id: &str) -> Option<&K4VertexData> {
        self.data.iter().find(|d| d.id == id)
    }
}

/// `U(2) ⊕ 3D4`, the lattice `−M−` of the irregular vertex.
pub fn irregular_lattice() -> GramLattice {
    let parts: Vec<GramLattice> = [
        StandardLattice::U2,
        StandardLattice::D4,
        StandardLattice::D4,
        StandardLattice::D4,
    ]
    .iter()
    .map(|b| b.lattice())
    .collect();
    direct_sum_all(parts.iter()).with_label("U(2)+3D4")
}

pub fn build_k4_graph(catalog: &Catalog) -> Result<K4Graph> {
    let regular: Vec<&K3Vertex> = catalog.iter().filter(|v| !is_eight_spheres_type_one(v)).collect();
    let mut nodes: Vec<Node> = regular.iter().map(|v| node_of(v)).collect();
    let irr_lattice = irregular_lattice();
    let irr_form = crate::forms::discriminant_group(&irr_lattice)?;
    nodes.push(Node {
        id: IRR.into(),
        r: irr_lattice.rank() as u32,
        d: irr_form.rank() as u32,
        vtype: VertexType::I,
        key: None,
    });
    let mut g = DeformationGraph::new(GraphKind::K4, nodes);
    let irr = g.index_of(IRR).expect("irr node");
    for (i, v) in regular.iter().enumerate() {
        for class in ElementClass::ALL {
            if !exists_class(v, 1, class) {
                continue;
            }
            let key = terminal_key(v, class);
            if is_three_spheres(v) && class == ElementClass::Wu {
                if catalog.lookup(key).is_ok() {
                    return Err(edge_error(v, class, "irregular terminal has a catalog vertex"));
                }
                let node = &g.nodes[irr];
                if (node.r, node.d) != (key.r, key.d) {
                    return Err(edge_error(v, class, format!("irregular terminal is not at {key}")));
                }
                g.push_edge(i, irr, class, 6);
                continue;
            }
            let to = catalog
                .lookup(key)
                .map_err(|_| edge_error(v, class, format!("terminal key {key} is not in the catalog")))?;
            let j = g
                .index_of(&to.id)
                .ok_or_else(|| edge_error(v, class, format!("terminal {} is not a fourfold vertex", to.id)))?;
            g.push_edge(i, j, class, 6);
        }
    }
    let bad = g.invariant_violations();
    if !bad.is_empty() {
        return Err(Error::Structural(bad.join("; ")));
    }
    let mut data: Vec<K4VertexData> = regular
        .iter()
        .map(|v| K4VertexData {
            id: v.id.clone(),
            mminus: v.lplus.negate(),
            source: Some(v.key()),
        })
        .collect();
    data.push(K4VertexData {
        id: IRR.into(),
        mminus: irr_lattice.negate(),
        source: None,
    });
    Ok(K4Graph { graph: g, data })
}
