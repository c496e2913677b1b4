//! Colored weighted digraphs of matrix products.
//!
//! A product `A₁ ⋯ A_m` of `n × n` matrices is viewed as a digraph on the
//! vertices `0..n` whose edges come in `m` colors: color `k` holds an edge
//! `i → j` of weight `a_{i,j}` for every finite entry of `A_k`. A proper
//! colored path uses exactly one edge of each color, in color order, and
//! entry `(i, j)` of the product is the maximal weight of such a path from
//! `i` to `j`.
//!
//! Nothing here calls into matrix multiplication; the module is the
//! independent semantics that products are checked against.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::tropical::{TropMatrix, TropValue};
use crate::words::{Variable, Word};

pub const DEFAULT_PATH_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: BigRational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

#[derive(Clone, Debug)]
pub struct ColoredDigraph {
    n: usize,
    layers: Vec<Vec<Edge>>,
}

impl ColoredDigraph {
    /// One layer per factor, in order.
    pub fn from_product(factors: &[TropMatrix]) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::precondition("a product needs at least one factor"))?;
        let n = first.n();
        let mut layers = Vec::with_capacity(factors.len());
        for f in factors {
            if f.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: f.n(),
                });
            }
            let mut edges = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if let TropValue::Finite(w) = f.get(i, j) {
                        edges.push(Edge {
                            from: i,
                            to: j,
                            weight: w.clone(),
                        });
                    }
                }
            }
            layers.push(edges);
        }
        Ok(ColoredDigraph { n, layers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Vec<Edge>] {
        &self.layers
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::precondition(format!(
                "vertex {v} out of range for {} vertices",
                self.n
            )));
        }
        Ok(())
    }

    /// Maximal weight of a proper colored path from `i` to `j`, by pushing
    /// best-so-far weights through the layers.
    pub fn max_weight_entry(&self, i: usize, j: usize) -> Result<TropValue> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        let mut best: Vec<Option<BigRational>> = vec![None; self.n];
        best[i] = Some(BigRational::zero());
        for layer in &self.layers {
            let mut next: Vec<Option<BigRational>> = vec![None; self.n];
            for e in layer {
                let Some(w) = &best[e.from] else { continue };
                let cand = w + &e.weight;
                if next[e.to].as_ref().is_none_or(|cur| cand > *cur) {
                    next[e.to] = Some(cand);
                }
            }
            best = next;
        }
        Ok(best
            .swap_remove(j)
            .map_or(TropValue::Bottom, TropValue::Finite))
    }

    /// The whole product, one entry query at a time.
    pub fn product(&self) -> TropMatrix {
        TropMatrix::from_fn(self.n, |i, j| {
            self.max_weight_entry(i, j).expect("vertices in range")
        })
    }

    /// All proper colored paths from `i` to `j`, failing once more than `cap` are found.
    pub fn enumerate_proper_paths(
        &self,
        i: usize,
        j: usize,
        cap: usize,
    ) -> Result<Vec<ProperPath>> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if cap == 0 {
            return Err(Error::precondition("path cap must be positive"));
        }
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(self.layers.len());
        self.walk(i, j, &mut stack, &mut out, cap)?;
        Ok(out)
    }

    fn walk<'a>(
        &'a self,
        at: usize,
        target: usize,
        stack: &mut Vec<&'a Edge>,
        out: &mut Vec<ProperPath>,
        cap: usize,
    ) -> Result<()> {
        let color = stack.len();
        if color == self.layers.len() {
            if at == target {
                if out.len() == cap {
                    return Err(Error::PathOverflow(cap));
                }
                out.push(ProperPath {
                    start: stack.first().map_or(at, |e| e.from),
                    edges: stack
                        .iter()
                        .enumerate()
                        .map(|(c, e)| PathEdge {
                            edge: (*e).clone(),
                            color: c,
                        })
                        .collect(),
                });
            }
            return Ok(());
        }
        for e in self.layers[color].iter().filter(|e| e.from == at) {
            stack.push(e);
            self.walk(e.to, target, stack, out, cap)?;
            stack.pop();
        }
        Ok(())
    }

    /// Graphviz rendering with one edge label per color.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph product {\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  v{} [label=\"{}\"];", v, v + 1);
        }
        for (c, layer) in self.layers.iter().enumerate() {
            for e in layer {
                let _ = writeln!(
                    s,
                    "  v{} -> v{} [label=\"c{}: {}\"];",
                    e.from,
                    e.to,
                    c + 1,
                    TropValue::Finite(e.weight.clone())
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathEdge {
    pub edge: Edge,
    pub color: usize,
}

/// A path whose edges carry their colors. The empty path at a vertex has weight zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperPath {
    pub start: usize,
    pub edges: Vec<PathEdge>,
}

impl ProperPath {
    pub fn empty(at: usize) -> Self {
        ProperPath {
            start: at,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self) -> usize {
        self.edges.last().map_or(self.start, |e| e.edge.to)
    }

    pub fn weight(&self) -> TropValue {
        TropValue::Finite(self.edges.iter().map(|e| &e.edge.weight).sum())
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.edge.is_loop()).count()
    }

    /// The loop-free part of the path. In a digraph whose non-loop edges all
    /// point the same way, a path can only revisit a vertex through loops,
    /// so dropping the loops leaves the unique simple path between the endpoints.
    pub fn simple_subpath(&self) -> Result<ProperPath> {
        let steps: Vec<Ordering> = self
            .edges
            .iter()
            .filter(|e| !e.edge.is_loop())
            .map(|e| e.edge.from.cmp(&e.edge.to))
            .collect();
        if steps.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::precondition(
                "path mixes upward and downward edges; the digraph is not acyclic",
            ));
        }
        Ok(ProperPath {
            start: self.start,
            edges: self
                .edges
                .iter()
                .filter(|e| !e.edge.is_loop())
                .cloned()
                .collect(),
        })
    }

    /// The word spelled by the colors of the path, color `k` naming `labels[k]`.
    pub fn word(&self, labels: &[Variable]) -> Result<Word> {
        let mut w = Word::empty();
        for e in &self.edges {
            let v = labels.get(e.color).ok_or_else(|| {
                Error::precondition(format!(
                    "color {} has no label among {} letters",
                    e.color,
                    labels.len()
                ))
            })?;
            w.push(v, 1);
        }
        Ok(w)
    }
}

pub fn word_of_path(p: &ProperPath, concatenation: &[Variable]) -> Result<Word> {
    p.word(concatenation)
}

/// Evaluates a word through the digraph of its letters' images.
pub fn oracle_product(factors: &[TropMatrix]) -> Result<TropMatrix> {
    Ok(ColoredDigraph::from_product(factors)?.product())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]]) -> TropMatrix {
        TropMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| s.parse().unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn pair() -> (TropMatrix, TropMatrix) {
        (
            m(&[&["0", "1"], &["-inf", "2"]]),
            m(&[&["1", "0"], &["-inf", "0"]]),
        )
    }

    #[test]
    fn diagonal_factor_has_only_loops() {
        let d = m(&[&["3", "-inf"], &["-inf", "-inf"]]);
        let g = ColoredDigraph::from_product(&[d]).unwrap();
        assert_eq!(g.layers()[0].len(), 1);
        assert!(g.layers()[0].iter().all(Edge::is_loop));

        let g = ColoredDigraph::from_product(&[TropMatrix::identity(3)]).unwrap();
        assert_eq!(g.layers()[0].len(), 3);
        assert!(g.layers()[0]
            .iter()
            .all(|e| e.is_loop() && e.weight.is_zero()));
    }

    #[test]
    fn two_factor_layers() {
        let (a, b) = pair();
        let g = ColoredDigraph::from_product(&[a, b]).unwrap();
        let edges = |k: usize| {
            g.layers()[k]
                .iter()
                .map(|e| {
                    (
                        e.from,
                        e.to,
                        TropValue::Finite(e.weight.clone()).to_string(),
                    )
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(
            edges(0),
            vec![(0, 0, "0".into()), (0, 1, "1".into()), (1, 1, "2".into())]
        );
        assert_eq!(
            edges(1),
            vec![(0, 0, "1".into()), (0, 1, "0".into()), (1, 1, "0".into())]
        );
    }

    #[test]
    fn mismatched_factors_rejected() {
        assert!(ColoredDigraph::from_product(&[]).is_err());
        assert!(
            ColoredDigraph::from_product(&[TropMatrix::identity(2), TropMatrix::identity(3)])
                .is_err()
        );
    }

    #[test]
    fn max_weight_matches_expansion() {
        let (a, b) = pair();
        let g = ColoredDigraph::from_product(std::slice::from_ref(&a)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(&g.max_weight_entry(i, j).unwrap(), a.get(i, j));
            }
        }
        // AB = [[1,1],[⊥,2]] by expanding every (i, k, j)
        let g = ColoredDigraph::from_product(&[a, b]).unwrap();
        assert_eq!(g.product(), m(&[&["1", "1"], &["-inf", "2"]]));
        assert!(g.max_weight_entry(2, 0).is_err());
    }

    #[test]
    fn path_enumeration() {
        let (a, b) = pair();
        let g = ColoredDigraph::from_product(std::slice::from_ref(&a)).unwrap();
        let ps = g.enumerate_proper_paths(0, 1, 10).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].len(), 1);

        let loop1 = m(&[&["2", "-inf"], &["-inf", "-inf"]]);
        let g = ColoredDigraph::from_product(&vec![loop1; 4]).unwrap();
        let ps = g.enumerate_proper_paths(0, 0, 10).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].loop_count(), 4);
        assert_eq!(ps[0].weight(), TropValue::int(8));

        // (1,2) of AB: a11·b12 = 0+0 and a12·b22 = 1+0
        let g = ColoredDigraph::from_product(&[a, b]).unwrap();
        let mut ws: Vec<_> = g
            .enumerate_proper_paths(0, 1, 10)
            .unwrap()
            .iter()
            .map(ProperPath::weight)
            .collect();
        ws.sort();
        assert_eq!(ws, vec![TropValue::int(0), TropValue::int(1)]);

        let full = m(&[&["0", "0"], &["0", "0"]]);
        let g = ColoredDigraph::from_product(&vec![full; 12]).unwrap();
        assert!(matches!(
            g.enumerate_proper_paths(0, 1, 100),
            Err(Error::PathOverflow(100))
        ));
        assert!(g.enumerate_proper_paths(0, 1, 0).is_err());
    }

    #[test]
    fn simple_subpaths() {
        let loop_only = m(&[&["1", "-inf"], &["-inf", "-inf"]]);
        let g = ColoredDigraph::from_product(&vec![loop_only; 3]).unwrap();
        let p = &g.enumerate_proper_paths(0, 0, 10).unwrap()[0];
        let s = p.simple_subpath().unwrap();
        assert!(s.is_empty());
        assert_eq!(s.weight(), TropValue::int(0));

        let lp = m(&[&["1", "-inf"], &["-inf", "1"]]);
        let step = m(&[&["-inf", "5"], &["-inf", "-inf"]]);
        let g =
            ColoredDigraph::from_product(&[lp.clone(), lp.clone(), step, lp.clone(), lp]).unwrap();
        let ps = g.enumerate_proper_paths(0, 1, 10).unwrap();
        assert_eq!(ps.len(), 1);
        let s = ps[0].simple_subpath().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(
            (s.edges[0].edge.from, s.edges[0].edge.to, s.edges[0].color),
            (0, 1, 2)
        );

        let up = m(&[&["-inf", "0"], &["-inf", "-inf"]]);
        let down = m(&[&["-inf", "-inf"], &["0", "-inf"]]);
        let g = ColoredDigraph::from_product(&[up, down]).unwrap();
        let p = &g.enumerate_proper_paths(0, 0, 10).unwrap()[0];
        assert!(p.simple_subpath().is_err());
    }

    #[test]
    fn words_of_paths() {
        let x = Variable::named("x");
        let y = Variable::named("y");
        let g = ColoredDigraph::from_product(&vec![TropMatrix::identity(2); 3]).unwrap();
        let p = &g.enumerate_proper_paths(0, 0, 10).unwrap()[0];
        assert_eq!(
            word_of_path(p, &[x.clone(), y.clone(), x.clone()]).unwrap(),
            "xyx".parse().unwrap()
        );
        assert!(word_of_path(p, &[x.clone(), y.clone()]).is_err());
        assert_eq!(
            word_of_path(&ProperPath::empty(0), &[]).unwrap(),
            Word::empty()
        );

        let g = ColoredDigraph::from_product(&vec![TropMatrix::identity(2); 4]).unwrap();
        let p = &g.enumerate_proper_paths(1, 1, 10).unwrap()[0];
        let sub = ProperPath {
            start: 1,
            edges: p.edges[1..3].to_vec(),
        };
        assert_eq!(
            word_of_path(&sub, &[x.clone(), y.clone(), y.clone(), x]).unwrap(),
            "y^2".parse().unwrap()
        );
    }

    #[test]
    fn dot_export_labels_colors() {
        let (a, b) = pair();
        let dot = ColoredDigraph::from_product(&[a, b]).unwrap().to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("v0 -> v1 [label=\"c1: 1\"]"));
        assert!(dot.contains("v1 -> v1 [label=\"c2: 0\"]"));
    }
}
