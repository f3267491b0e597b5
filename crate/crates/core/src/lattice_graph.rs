//! The cascade network realizing the parametrization: one scaler `G_kk^(1/2)` per
//! diagonal index and one elementary rotation `U(G_kj)` per pair `k < j`, wired as
//! a staircase.
//!
//! Rotation `(k, j)` takes its top input from rotation `(k, j-1)` (or scaler `k`
//! when `j-1 = k`) and its bottom input from rotation `(k+1, j)` (or scaler `j`).
//! Its top output feeds `(k, j+1)` and its bottom output feeds `(k-1, j)`; outputs
//! that leave the staircase go to external terminals.

use std::fmt::Write as _;

use crate::error::LatticeError;
use crate::lattice::SchurParams;
use crate::matrix::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Scaler(usize),
    Rotation(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
}

/// Top port carries the row-wise (transmitted) path, bottom the column-wise one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    Top,
    Bottom,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    /// A port on a node, by index into [`LatticeGraph::nodes`].
    Node { node: usize, port: Port },
    /// Signal entering or leaving the network.
    Terminal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: Endpoint,
    pub to: Endpoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGraph {
    pub size: usize,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

fn pair_label(k: usize, j: usize, size: usize) -> String {
    if size < 10 {
        format!("{}{}", k + 1, j + 1)
    } else {
        format!("{},{}", k + 1, j + 1)
    }
}

impl LatticeGraph {
    pub fn node_index(&self, kind: NodeKind) -> Option<usize> {
        let size = self.size;
        match kind {
            NodeKind::Scaler(k) if k < size => Some(k),
            NodeKind::Rotation(k, j) if k < j && j < size => {
                // scalers first, then rotations in traversal order (gap, row)
                let gap = j - k;
                let before: usize = (1..gap).map(|g| size - g).sum();
                Some(size + before + k)
            }
            _ => None,
        }
    }

    pub fn rotation_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Rotation(..)))
            .count()
    }

    /// Number of edges whose head (`incoming`) or tail is a port on `node`.
    pub fn degree(&self, node: usize, incoming: bool) -> usize {
        self.edges
            .iter()
            .filter(|e| {
                let end = if incoming { &e.to } else { &e.from };
                matches!(end, Endpoint::Node { node: n, .. } if *n == node)
            })
            .count()
    }

    /// Kahn's algorithm over node-to-node edges.
    pub fn is_acyclic(&self) -> bool {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            if let (Endpoint::Node { node: a, .. }, Endpoint::Node { node: b, .. }) =
                (&e.from, &e.to)
            {
                succ[*a].push(*b);
                indeg[*b] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == n
    }
}

/// Builds the staircase network for `size >= 2` diagonal indices.
pub fn build_lattice_graph(size: usize) -> Result<LatticeGraph, LatticeError> {
    if size < 2 {
        return Err(LatticeError::DimensionMismatch(format!(
            "lattice graph needs at least 2 indices, got {size}"
        )));
    }
    let mut g = LatticeGraph {
        size,
        nodes: Vec::with_capacity(size * (size + 1) / 2),
        edges: Vec::new(),
    };
    for k in 0..size {
        let idx = if size < 10 {
            format!("{0}{0}", k + 1)
        } else {
            format!("{0},{0}", k + 1)
        };
        g.nodes.push(Node {
            id: format!("s{}", k + 1),
            kind: NodeKind::Scaler(k),
            label: format!("Γ_{idx}^(1/2)"),
        });
    }
    for gap in 1..size {
        for k in 0..size - gap {
            let j = k + gap;
            g.nodes.push(Node {
                id: format!("r{}_{}", k + 1, j + 1),
                kind: NodeKind::Rotation(k, j),
                label: format!("U(Γ_{})", pair_label(k, j, size)),
            });
        }
    }

    let node = |g: &LatticeGraph, kind| g.node_index(kind).expect("node exists");
    let mut edges = Vec::new();
    for k in 0..size {
        edges.push(Edge {
            from: Endpoint::Terminal(format!("in{}", k + 1)),
            to: Endpoint::Node {
                node: k,
                port: Port::Top,
            },
        });
    }
    for gap in 1..size {
        for k in 0..size - gap {
            let j = k + gap;
            let here = node(&g, NodeKind::Rotation(k, j));
            let top_src = if gap == 1 {
                Endpoint::Node {
                    node: node(&g, NodeKind::Scaler(k)),
                    port: Port::Top,
                }
            } else {
                Endpoint::Node {
                    node: node(&g, NodeKind::Rotation(k, j - 1)),
                    port: Port::Top,
                }
            };
            let bottom_src = if gap == 1 {
                Endpoint::Node {
                    node: node(&g, NodeKind::Scaler(j)),
                    port: Port::Bottom,
                }
            } else {
                Endpoint::Node {
                    node: node(&g, NodeKind::Rotation(k + 1, j)),
                    port: Port::Bottom,
                }
            };
            edges.push(Edge {
                from: top_src,
                to: Endpoint::Node {
                    node: here,
                    port: Port::Top,
                },
            });
            edges.push(Edge {
                from: bottom_src,
                to: Endpoint::Node {
                    node: here,
                    port: Port::Bottom,
                },
            });
            if j + 1 == size {
                edges.push(Edge {
                    from: Endpoint::Node {
                        node: here,
                        port: Port::Top,
                    },
                    to: Endpoint::Terminal(format!("row{}", k + 1)),
                });
            }
            if k == 0 {
                edges.push(Edge {
                    from: Endpoint::Node {
                        node: here,
                        port: Port::Bottom,
                    },
                    to: Endpoint::Terminal(format!("col{}", j + 1)),
                });
            }
        }
    }
    g.edges = edges;
    Ok(g)
}

/// Formats with six significant digits, e.g. `1.00000` or `-0.204124`.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.5}", x.abs());
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exponent) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn format_gamma(z: Complex) -> String {
    if z.im == 0.0 {
        sig6(z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{}{}i", sig6(z.re), sign, sig6(z.im.abs()))
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph of the network, optionally annotated with parameter values.
///
/// With parameters, each rotation label gains its numeric value and inactive
/// rotations are drawn dashed. Terminal connections are listed as comments only,
/// so the DOT node set is exactly the scalers and rotations.
pub fn emit_dot(g: &LatticeGraph, params: Option<&SchurParams>) -> Result<String, LatticeError> {
    if let Some(p) = params {
        if p.size() != g.size {
            return Err(LatticeError::DimensionMismatch(format!(
                "parameters have size {}, graph has {}",
                p.size(),
                g.size
            )));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph lattice {{");
    let _ = writeln!(
        out,
        "  // port convention: top-in -> top-out is the transmitted path"
    );
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=box];");
    for n in &g.nodes {
        match n.kind {
            NodeKind::Scaler(k) => {
                let mut label = n.label.clone();
                if let Some(p) = params {
                    label = format!("{label}\\n{}", sig6(p.diag()[k].sqrt()));
                }
                let _ = writeln!(
                    out,
                    "  {} [label=\"{}\", shape=circle];",
                    n.id,
                    escape(&label)
                );
            }
            NodeKind::Rotation(k, j) => {
                let mut attrs = String::new();
                let mut label = escape(&n.label);
                if let Some(p) = params {
                    let e = p.get(k, j)?;
                    label = format!("{label}\\n{}", format_gamma(e.value));
                    if !e.active {
                        attrs.push_str(", style=dashed");
                    }
                }
                let _ = writeln!(out, "  {} [label=\"{}\"{}];", n.id, label, attrs);
            }
        }
    }
    // layout hint: rotations of equal gap share a rank
    for gap in 1..g.size {
        let ids: Vec<&str> = g
            .nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Rotation(k, j) if j - k == gap))
            .map(|n| n.id.as_str())
            .collect();
        let _ = writeln!(out, "  subgraph {{ rank=same; {}; }}", ids.join("; "));
    }
    for e in &g.edges {
        match (&e.from, &e.to) {
            (Endpoint::Node { node: a, port: pa }, Endpoint::Node { node: b, port: pb }) => {
                let _ = writeln!(
                    out,
                    "  {} -> {} [taillabel=\"{}\", headlabel=\"{}\"];",
                    g.nodes[*a].id,
                    g.nodes[*b].id,
                    port_name(*pa),
                    port_name(*pb)
                );
            }
            (Endpoint::Terminal(t), Endpoint::Node { node, port }) => {
                let _ = writeln!(
                    out,
                    "  // {t} -> {}:{}",
                    g.nodes[*node].id,
                    port_name(*port)
                );
            }
            (Endpoint::Node { node, port }, Endpoint::Terminal(t)) => {
                let _ = writeln!(
                    out,
                    "  // {}:{} -> {t}",
                    g.nodes[*node].id,
                    port_name(*port)
                );
            }
            (Endpoint::Terminal(a), Endpoint::Terminal(b)) => {
                let _ = writeln!(out, "  // {a} -> {b}");
            }
        }
    }
    let _ = writeln!(out, "}}");
    Ok(out)
}

fn port_name(p: Port) -> &'static str {
    match p {
        Port::Top => "top",
        Port::Bottom => "bottom",
    }
}
