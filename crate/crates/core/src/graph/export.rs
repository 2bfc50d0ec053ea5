//! JSON and DOT renderings of the graphs.

use serde_json::{json, Value};

use super::{DeformationGraph, IRR};
use crate::catalog::VertexType;
use crate::classes::ElementClass;

fn label(id: &str) -> String {
    if id == IRR {
        "K4-irr".into()
    } else {
        id.replace(['[', ']'], "")
    }
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl DeformationGraph {
    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .nodes()
            .iter()
            .map(|n| json!({"id": n.id, "r": n.r, "d": n.d, "type": n.vtype}))
            .collect();
        let edges: Vec<Value> = self
            .edges()
            .iter()
            .map(|e| {
                json!({
                    "from": self.nodes()[e.from].id,
                    "to": self.nodes()[e.to].id,
                    "class": e.class,
                })
            })
            .collect();
        json!({
            "schema": crate::SCHEMA,
            "kind": self.kind,
            "vertices": vertices,
            "edges": edges,
        })
    }

    /// Type I vertices are filled squares and type II circles; odd edges are
    /// solid, Wu edges bold and the remaining even edges dashed.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph {} {{\n  node [fontsize=10];\n", self.kind);
        for n in self.nodes() {
            let shape = match n.vtype {
                VertexType::I => "shape=square, style=filled",
                VertexType::II => "shape=circle",
            };
            out.push_str(&format!(
                "  {} [label={}, {shape}];\n",
                quoted(&n.id),
                quoted(&label(&n.id))
            ));
        }
        for e in self.edges() {
            let style = match e.class {
                ElementClass::Odd => "solid",
                ElementClass::Wu => "bold",
                ElementClass::EvenNonWu => "dashed",
            };
            out.push_str(&format!(
                "  {} -> {} [style={style}];\n",
                quoted(&self.nodes()[e.from].id),
                quoted(&self.nodes()[e.to].id)
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::catalog::shared;
    use crate::graph::{build_k3_graph, build_k4_graph};

    #[test]
    fn json_layout() {
        let g = build_k3_graph(shared()).unwrap();
        let v = g.to_json();
        assert_eq!(v["schema"], "k4graph/1");
        assert_eq!(v["kind"], "k3");
        assert_eq!(v["vertices"].as_array().unwrap().len(), 75);
        assert_eq!(v["vertices"][0]["id"], "[10S]");
        assert_eq!(v["edges"].as_array().unwrap().len(), g.edge_count());
        let e = &v["edges"][0];
        assert!(e["from"].is_string() && e["to"].is_string() && e["class"].is_string());
    }

    #[test]
    fn dot_layout() {
        let g = build_k4_graph(shared()).unwrap().graph;
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph k4 {"));
        assert!(dot.trim_end().ends_with('}'));
        assert!(dot.contains("\"irr\" [label=\"K4-irr\", shape=square, style=filled];"));
        assert!(dot.contains("\"[3S]\" -> \"irr\" [style=bold];"));
        assert_eq!(dot.matches(" -> ").count(), g.edge_count());
    }
}
