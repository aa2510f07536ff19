//! The tower `ℂ ⊂ End(u) ⊂ End(u ⊗ û) ⊂ …` at the level of irreducible
//! decompositions, and its principal graph.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::Result;
use crate::semiring::{FusionElement, FusionRules, FusionSystem};

#[derive(Clone, Debug)]
pub struct BratteliDiagram<L: Ord> {
    /// Level `k` is the decomposition of the alternating word with `k`
    /// factors; level 0 is the unit.
    pub levels: Vec<FusionElement<L>>,
    /// `inclusions[k][i][j]`: multiplicity of the `j`-th irreducible of level
    /// `k+1` in the `i`-th irreducible of level `k` times the next factor.
    pub inclusions: Vec<Vec<Vec<BigUint>>>,
}

impl<L: Ord + Clone> BratteliDiagram<L> {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn labels(&self, k: usize) -> Vec<L> {
        self.levels[k].support().cloned().collect()
    }

    /// `dim End` of level `k`: `Σ m²`.
    pub fn end_dimension(&self, k: usize) -> BigUint {
        self.levels[k].terms().values().map(|m| m * m).sum()
    }
}

pub fn tower<R: FusionRules>(sys: &FusionSystem<R>, u: &FusionElement<R::Label>, depth: usize) -> Result<BratteliDiagram<R::Label>> {
    let u_hat = sys.conj_element(u)?;
    let mut levels = vec![sys.unit_element()];
    let mut inclusions = Vec::with_capacity(depth);
    for k in 0..depth {
        let factor = if k % 2 == 0 { u } else { &u_hat };
        let current = &levels[k];
        let rows: Vec<FusionElement<R::Label>> =
            current.support().map(|c| sys.tensor(&sys.irr(c.clone()), factor)).collect::<Result<_>>()?;
        let next = sys.tensor(current, factor)?;
        let matrix = rows.iter().map(|row| next.support().map(|d| row.get(d)).collect()).collect();
        inclusions.push(matrix);
        levels.push(next);
    }
    Ok(BratteliDiagram { levels, inclusions })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub name: String,
    pub level: usize,
    pub weight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct WeightedGraph {
    pub vertices: Vec<Vertex>,
    /// `(from, to, multiplicity)` between consecutive first-appearance levels.
    pub edges: Vec<(usize, usize, BigUint)>,
}

impl WeightedGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b, _)| *a == v || *b == v).count()
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (a, b, _) in &self.edges {
                let w = if *a == v { *b } else if *b == v { *a } else { continue };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bipartite_by_level(&self) -> bool {
        self.edges.iter().all(|(a, b, _)| (self.vertices[*a].level + self.vertices[*b].level) % 2 == 1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|v| json!({"label": v.name, "level": v.level, "weight": v.weight})).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|(a, b, m)| json!([self.vertices[*a].name, self.vertices[*b].name, m.to_string()])).collect::<Vec<_>>(),
        })
    }
}

/// First-appearance rule: each irreducible becomes a vertex at the level
/// where it first occurs, and edges join vertices that are new at level `k`
/// to vertices new at level `k+1`, weighted by the inclusion multiplicity.
/// Edges into older vertices are the reflections of the basic construction
/// and are dropped.
pub fn principal_graph<R: FusionRules>(sys: &FusionSystem<R>, d: &BratteliDiagram<R::Label>) -> WeightedGraph {
    let mut index: BTreeMap<R::Label, usize> = BTreeMap::new();
    let mut graph = WeightedGraph::default();
    for k in 0..d.levels.len() {
        for c in d.levels[k].support() {
            if !index.contains_key(c) {
                index.insert(c.clone(), graph.vertices.len());
                graph.vertices.push(Vertex { name: sys.format_label(c), level: k, weight: None });
            }
        }
    }
    for (k, matrix) in d.inclusions.iter().enumerate() {
        let rows = d.labels(k);
        let cols = d.labels(k + 1);
        for (i, a) in rows.iter().enumerate() {
            let va = index[a];
            if graph.vertices[va].level != k {
                continue;
            }
            for (j, b) in cols.iter().enumerate() {
                let vb = index[b];
                if graph.vertices[vb].level == k + 1 && !matrix[i][j].is_zero() {
                    graph.edges.push((va, vb, matrix[i][j].clone()));
                }
            }
        }
    }
    graph
}

/// Attaches vertex weights, looked up by label name.
pub fn with_weights(mut g: WeightedGraph, weights: &BTreeMap<String, f64>) -> WeightedGraph {
    for v in &mut g.vertices {
        v.weight = weights.get(&v.name).copied();
    }
    g
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

pub fn export_dot(g: &WeightedGraph) -> String {
    let mut out = String::from("digraph principal_graph {\n");
    for v in &g.vertices {
        let label = match v.weight {
            Some(w) => format!("{}\\nqdim={:.6}", escape(&v.name), w),
            None => escape(&v.name),
        };
        writeln!(out, "  {} [label=\"{label}\", level={}];", quote(&v.name), v.level).expect("write to string");
    }
    for (a, b, m) in &g.edges {
        let (a, b) = (quote(&g.vertices[*a].name), quote(&g.vertices[*b].name));
        if m == &BigUint::from(1u32) {
            writeln!(out, "  {a} -> {b};").expect("write to string");
        } else {
            writeln!(out, "  {a} -> {b} [label=\"{m}\"];").expect("write to string");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{AoRules, GroupDual};

    #[test]
    fn su2_levels() {
        let ao = FusionSystem::new(AoRules::new(2).unwrap());
        let t = tower(&ao, &ao.fundamental(), 3).unwrap();
        let shown: Vec<String> = t.levels.iter().map(|l| ao.format_element(l)).collect();
        assert_eq!(shown, vec!["r1", "r2", "r1 + r3", "2*r2 + r4"]);
        let dims: Vec<u32> = (0..=3).map(|k| t.end_dimension(k).try_into().unwrap()).collect();
        assert_eq!(dims, vec![1, 1, 2, 5]);
        assert_eq!(t.inclusions[1], vec![vec![BigUint::from(1u32), BigUint::from(1u32)]]);
    }

    #[test]
    fn su2_path() {
        let ao = FusionSystem::new(AoRules::new(2).unwrap());
        let g = principal_graph(&ao, &tower(&ao, &ao.fundamental(), 10).unwrap());
        assert_eq!(g.vertices.len(), 11);
        assert_eq!(g.edges.len(), 10);
        for (k, (a, b, m)) in g.edges.iter().enumerate() {
            assert_eq!(g.vertices[*a].name, format!("r{}", k + 1));
            assert_eq!(g.vertices[*b].name, format!("r{}", k + 2));
            assert_eq!(m, &BigUint::from(1u32));
        }
        assert!(g.is_connected() && g.is_bipartite_by_level());
        let dot = export_dot(&g);
        assert_eq!(dot.matches("->").count(), 10);
        assert_eq!(dot.matches("level=").count(), 11);
    }

    #[test]
    fn integers_give_a_segment() {
        let z = FusionSystem::new(GroupDual::free_group(&["g"]).unwrap());
        let t = tower(&z, &z.fundamental(), 6).unwrap();
        assert!(t.levels.iter().all(|l| l.len() == 1));
        let g = principal_graph(&z, &t);
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn empty_graph_exports() {
        let dot = export_dot(&WeightedGraph::default());
        assert_eq!(dot, "digraph principal_graph {\n}\n");
    }

    #[test]
    fn weights_show_in_dot() {
        let ao = FusionSystem::new(AoRules::new(2).unwrap());
        let g = principal_graph(&ao, &tower(&ao, &ao.fundamental(), 2).unwrap());
        let g = with_weights(g, &BTreeMap::from([("r2".to_string(), 2.25)]));
        let dot = export_dot(&g);
        assert!(dot.contains(r#""r2" [label="r2\nqdim=2.250000", level=1];"#), "{dot}");
        assert!(dot.contains(r#""r1" [label="r1", level=0];"#));
    }
}
