//! Explicit directed and undirected power graphs, built element by element.
//!
//! These graphs never consult order spectra; they are the independent
//! oracle that the spectrum formulas are checked against.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupTable, DEFAULT_TABLE_CAP};

/// Default largest order for explicit graph construction.
pub const DEFAULT_BRUTE_CAP: usize = DEFAULT_TABLE_CAP;

/// Square bit matrix, one row per vertex.
#[derive(Clone, Debug)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    fn row_count(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Column indices set in row `r`, ascending.
    fn ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn union(&self, other: &BitMatrix) -> BitMatrix {
        BitMatrix {
            n: self.n,
            words: self.words,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    EdgeCsv,
}

/// Directed power graph: an arc `g -> h` whenever `h` is in `<g>` and `h != g`.
#[derive(Clone, Debug)]
pub struct DirectedPowerGraph {
    name: String,
    labels: Vec<String>,
    arcs: BitMatrix,
    reverse: BitMatrix,
    mutual: Vec<(u32, u32)>,
}

/// Undirected power graph: `{g, h}` is an edge when one is a power of the other.
#[derive(Clone, Debug)]
pub struct UndirectedPowerGraph {
    name: String,
    labels: Vec<String>,
    adjacency: BitMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphCounts {
    pub vertices: usize,
    pub arcs: u64,
    pub mutual_pairs: u64,
    pub edges: u64,
}

fn check_cap(g: &GroupTable, cap: usize) -> Result<()> {
    if g.size() > cap {
        return Err(Error::Resource(format!(
            "{} has order {} above the explicit-graph cap {cap}; use the spectrum formulas instead",
            g.name(),
            g.size()
        )));
    }
    Ok(())
}

pub fn build_directed(g: &GroupTable, cap: usize) -> Result<DirectedPowerGraph> {
    check_cap(g, cap)?;
    let n = g.size();
    let dec = g.cyclic_decomposition()?;
    let mut arcs = BitMatrix::new(n);
    let mut reverse = BitMatrix::new(n);
    for x in 0..n {
        for &y in &dec.subgroups[dec.subgroup_of[x] as usize] {
            let y = y as usize;
            if y != x {
                arcs.set(x, y);
                reverse.set(y, x);
            }
        }
    }
    let mut mutual = Vec::new();
    for x in 0..n {
        if arcs.get(x, x) {
            return Err(Error::invariant(format!(
                "self-loop at {x} in {}",
                g.name()
            )));
        }
        for y in arcs.ones(x) {
            if y > x && arcs.get(y, x) {
                mutual.push((x as u32, y as u32));
            }
        }
    }
    Ok(DirectedPowerGraph {
        name: g.name().to_string(),
        labels: g.elements().map(|a| g.label(a)).collect(),
        arcs,
        reverse,
        mutual,
    })
}

pub fn build_undirected(g: &GroupTable, cap: usize) -> Result<UndirectedPowerGraph> {
    Ok(build_directed(g, cap)?.undirected())
}

impl DirectedPowerGraph {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> u64 {
        (0..self.vertex_count())
            .map(|v| self.arcs.row_count(v) as u64)
            .sum()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.arcs.get(from, to)
    }

    /// Unordered pairs joined by arcs in both directions, `a < b`.
    pub fn mutual_pairs(&self) -> &[(u32, u32)] {
        &self.mutual
    }

    pub fn arcs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for x in 0..self.vertex_count() {
            out.extend(self.arcs.ones(x).map(|y| (x as u32, y as u32)));
        }
        out
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arcs.row_count(v)
    }

    /// Out-degrees, sorted descending.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.vertex_count())
            .map(|v| self.out_degree(v))
            .collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Symmetrization of the arc relation.
    pub fn undirected(&self) -> UndirectedPowerGraph {
        UndirectedPowerGraph {
            name: self.name.clone(),
            labels: self.labels.clone(),
            adjacency: self.arcs.union(&self.reverse),
        }
    }

    pub fn counts(&self) -> GraphCounts {
        GraphCounts {
            vertices: self.vertex_count(),
            arcs: self.arc_count(),
            mutual_pairs: self.mutual.len() as u64,
            edges: self.undirected().edge_count(),
        }
    }

    pub fn export(&self, format: ExportFormat, sink: &mut dyn Write) -> Result<()> {
        export_edges(&self.name, &self.labels, true, &self.arcs(), format, sink)
    }
}

impl UndirectedPowerGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency.row_count(v)
    }

    pub fn edge_count(&self) -> u64 {
        let twice: u64 = (0..self.vertex_count())
            .map(|v| self.degree(v) as u64)
            .sum();
        twice / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency.get(a, b)
    }

    /// Edges `(a, b)` with `a < b`, lexicographic.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for a in 0..self.vertex_count() {
            out.extend(
                self.adjacency
                    .ones(a)
                    .filter(|&b| b > a)
                    .map(|b| (a as u32, b as u32)),
            );
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.vertex_count()).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn export(&self, format: ExportFormat, sink: &mut dyn Write) -> Result<()> {
        export_edges(&self.name, &self.labels, false, &self.edges(), format, sink)
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn export_edges(
    name: &str,
    labels: &[String],
    directed: bool,
    edges: &[(u32, u32)],
    format: ExportFormat,
    sink: &mut dyn Write,
) -> Result<()> {
    match format {
        ExportFormat::Dot => {
            let (kind, op) = if directed {
                ("digraph", "->")
            } else {
                ("graph", "--")
            };
            writeln!(sink, "{kind} {} {{", dot_quote(name))?;
            for (v, l) in labels.iter().enumerate() {
                writeln!(sink, "  {v} [label={}];", dot_quote(l))?;
            }
            for &(a, b) in edges {
                writeln!(sink, "  {a} {op} {b};")?;
            }
            writeln!(sink, "}}")?;
        }
        ExportFormat::EdgeCsv => {
            writeln!(sink, "{}", if directed { "src,dst" } else { "a,b" })?;
            for &(a, b) in edges {
                writeln!(sink, "{a},{b}")?;
            }
        }
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;
    use crate::spectrum::order_spectrum;
    use num_bigint::BigUint;

    const CAP: usize = DEFAULT_BRUTE_CAP;

    #[test]
    fn directed_examples() {
        let g = build_directed(&cyclic(1).unwrap(), CAP).unwrap();
        assert_eq!(g.arc_count(), 0);
        let g = build_directed(&cyclic(3).unwrap(), CAP).unwrap();
        assert_eq!(g.arc_count(), 4);
        assert_eq!(g.mutual_pairs(), &[(1, 2)]);
        let g = build_directed(&generalized_quaternion(8).unwrap(), CAP).unwrap();
        assert_eq!(g.arc_count(), 19);
        assert_eq!(g.mutual_pairs().len(), 3);
    }

    #[test]
    fn undirected_examples() {
        assert_eq!(
            build_undirected(&cyclic(2).unwrap(), CAP)
                .unwrap()
                .edge_count(),
            1
        );
        assert_eq!(
            build_undirected(&generalized_quaternion(8).unwrap(), CAP)
                .unwrap()
                .edge_count(),
            16
        );
        let e8 = abelian_from_partition(2, &[1, 1, 1]).unwrap();
        assert_eq!(build_undirected(&e8, CAP).unwrap().edge_count(), 7);
        assert_eq!(
            build_undirected(&cyclic(6).unwrap(), CAP)
                .unwrap()
                .edge_count(),
            13
        );
    }

    #[test]
    fn degree_sequences() {
        let g = build_directed(&cyclic(4).unwrap(), CAP).unwrap();
        assert_eq!(g.degree_sequence(), vec![3, 3, 1, 0]);
        let e8 = abelian_from_partition(2, &[1, 1, 1]).unwrap();
        assert_eq!(
            build_undirected(&e8, CAP).unwrap().degree_sequence(),
            vec![7, 1, 1, 1, 1, 1, 1, 1]
        );
        assert_eq!(
            build_directed(&cyclic(1).unwrap(), CAP)
                .unwrap()
                .degree_sequence(),
            vec![0]
        );
    }

    #[test]
    fn cap_is_enforced() {
        let g = cyclic(100).unwrap();
        assert!(matches!(build_directed(&g, 50), Err(Error::Resource(_))));
    }

    #[test]
    fn csv_export() {
        let g = build_undirected(&cyclic(2).unwrap(), CAP).unwrap();
        let mut out = Vec::new();
        g.export(ExportFormat::EdgeCsv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "a,b\n0,1\n");

        let g = build_directed(&cyclic(1).unwrap(), CAP).unwrap();
        let mut out = Vec::new();
        g.export(ExportFormat::EdgeCsv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "src,dst\n");
    }

    #[test]
    fn dot_export() {
        let g = build_directed(&cyclic(3).unwrap(), CAP).unwrap();
        let mut out = Vec::new();
        g.export(ExportFormat::Dot, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "digraph \"C3\" {\n  0 [label=\"0\"];\n  1 [label=\"1\"];\n  2 [label=\"2\"];\n  \
             1 -> 0;\n  1 -> 2;\n  2 -> 0;\n  2 -> 1;\n}\n"
        );
        let g = build_undirected(&cyclic(1).unwrap(), CAP).unwrap();
        let mut out = Vec::new();
        g.export(ExportFormat::Dot, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "graph \"C1\" {\n  0 [label=\"0\"];\n}\n"
        );
    }

    #[test]
    fn structural_invariants() {
        for g in [
            cyclic(30).unwrap(),
            dihedral(20).unwrap(),
            semidihedral(32).unwrap(),
            heisenberg(3).unwrap(),
            modular_group(4, 3).unwrap(),
            direct_product(&generalized_quaternion(8).unwrap(), &cyclic(6).unwrap()).unwrap(),
        ] {
            let d = build_directed(&g, CAP).unwrap();
            let u = d.undirected();
            let e = g.identity().0;
            for a in g.elements() {
                assert_eq!(d.out_degree(a.0) as u64, g.element_order(a).unwrap() - 1);
                if a.0 != e {
                    assert!(u.has_edge(e, a.0));
                }
            }
            // mutual pairs: C(phi(d), 2) per cyclic subgroup of order d
            let dec = g.cyclic_decomposition().unwrap();
            let per_class: u64 = dec
                .subgroups
                .iter()
                .map(|s| {
                    let f = crate::arith::totient(s.len() as u128).unwrap() as u64;
                    f * (f - 1) / 2
                })
                .sum();
            assert_eq!(per_class, d.mutual_pairs().len() as u64, "{}", g.name());
            let s = order_spectrum(&g).unwrap();
            assert_eq!(BigUint::from(d.arc_count()), s.directed_arcs());
            assert_eq!(BigUint::from(u.edge_count()), s.undirected_edges().unwrap());
            assert_eq!(
                u.edge_count(),
                d.arc_count() - d.mutual_pairs().len() as u64
            );
        }
    }
}
