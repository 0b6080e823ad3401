//! The ribbon graph complex: chains, the contraction differential, the
//! expansion codifferential, the pairing, Betti numbers and boundary
//! witnesses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonicalize, canonicalize_signed, CanonicalGraph, Orientation};
use crate::enumerate::{basis, enumerate_graphs};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{rank, solve, SparseVec};
use crate::scalar::Scalar;

/// A linear combination of canonical oriented ribbon graphs. Vanishing
/// classes are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GraphChain {
    terms: BTreeMap<Graph, Scalar>,
}

impl GraphChain {
    pub fn zero() -> Self {
        GraphChain::default()
    }

    pub fn unit() -> Self {
        GraphChain::from_graph(&Graph::empty())
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut x = GraphChain::zero();
        x.add_graph(g, &Scalar::one());
        x
    }

    pub fn add_canonical(&mut self, c: &CanonicalGraph, coeff: &Scalar) {
        let s = match c.sign {
            Orientation::Zero => return,
            Orientation::Plus => coeff.clone(),
            Orientation::Minus => -coeff,
        };
        self.add_raw(c.graph.clone(), s);
    }

    /// Adds `coeff * g` for an arbitrary representative.
    pub fn add_graph(&mut self, g: &Graph, coeff: &Scalar) {
        self.add_canonical(&canonicalize(g), coeff);
    }

    pub fn add_signed(&mut self, g: &Graph, negate: bool, coeff: &Scalar) {
        self.add_canonical(&canonicalize_signed(g, negate), coeff);
    }

    fn add_raw(&mut self, g: Graph, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Graph, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of an arbitrary representative, with its sign.
    pub fn coeff(&self, g: &Graph) -> Scalar {
        let c = canonicalize(g);
        let base = self
            .terms
            .get(&c.graph)
            .cloned()
            .unwrap_or_else(Scalar::zero);
        match c.sign {
            Orientation::Plus => base,
            Orientation::Minus => -base,
            Orientation::Zero => Scalar::zero(),
        }
    }

    pub fn add(&self, other: &GraphChain) -> GraphChain {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_raw(g.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GraphChain) -> GraphChain {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> GraphChain {
        let mut out = GraphChain::zero();
        for (g, x) in &self.terms {
            out.add_raw(g.clone(), x * c);
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&Graph) -> bool) -> GraphChain {
        GraphChain {
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn restrict(&self, v: usize, e: usize) -> GraphChain {
        self.filter(|g| g.bidegree() == (v, e))
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms.keys().map(Graph::bidegree).collect()
    }

    /// Bilinear extension of disjoint union.
    pub fn disjoint_union(&self, other: &GraphChain) -> GraphChain {
        let mut out = GraphChain::zero();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_graph(&g.disjoint_union(h), &(a * b));
            }
        }
        out
    }
}

impl FromIterator<(Graph, Scalar)> for GraphChain {
    fn from_iter<I: IntoIterator<Item = (Graph, Scalar)>>(iter: I) -> Self {
        let mut x = GraphChain::zero();
        for (g, c) in iter {
            x.add_graph(&g, &c);
        }
        x
    }
}

impl fmt::Display for GraphChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (g, c) in &self.terms {
            writeln!(f, "{c} * {:?} {:?}", g.vertices, g.edges)?;
        }
        Ok(())
    }
}

/// The contraction differential of one graph (canonical or not).
pub fn boundary_graph(g: &Graph) -> GraphChain {
    let mut out = GraphChain::zero();
    for e in 0..g.edge_count() {
        if g.is_loop(e) {
            continue;
        }
        let (h, odd) = g.contract_edge(e).expect("non-loop edge");
        out.add_signed(&h, odd, &Scalar::one());
    }
    out
}

pub fn boundary(x: &GraphChain) -> GraphChain {
    let parts: Vec<GraphChain> = x
        .terms
        .par_iter()
        .map(|(g, c)| boundary_graph(g).scale(c))
        .collect();
    parts.iter().fold(GraphChain::zero(), |a, b| a.add(b))
}

/// The expansion codifferential on the plain basis, with weights
/// `|Aut(G \ i)| / |Aut(G)|`.
pub fn coboundary_graph(g: &Graph) -> GraphChain {
    let base = canonicalize(g);
    let mut out = GraphChain::zero();
    if base.is_zero() {
        return out;
    }
    let aut = Scalar::from_int(base.aut as i64);
    for i in g.ideal_edges() {
        let (h, odd) = g.expand(&i).expect("listed ideal edge");
        let c = canonicalize_signed(&h, odd);
        let w = Scalar::from_int(c.aut as i64) / &aut;
        out.add_canonical(&c, &w);
    }
    out
}

pub fn coboundary(x: &GraphChain) -> GraphChain {
    let parts: Vec<GraphChain> = x
        .terms
        .par_iter()
        .map(|(g, c)| coboundary_graph(g).scale(c))
        .collect();
    parts.iter().fold(GraphChain::zero(), |a, b| a.add(b))
}

/// The bilinear form for which canonical graphs are orthonormal.
pub fn pairing(x: &GraphChain, y: &GraphChain) -> Scalar {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    small
        .terms
        .iter()
        .filter_map(|(g, a)| large.terms.get(g).map(|b| a * b))
        .sum()
}

/// Matrix of the contraction differential from bidegree `(v, e)` to `(v-1, e-1)`.
#[derive(Clone, Debug)]
pub struct BigradedMatrix {
    pub source: Vec<Graph>,
    pub target: Vec<Graph>,
    /// one sparse column per source graph, indexed by target position
    pub columns: Vec<SparseVec>,
}

impl BigradedMatrix {
    pub fn boundary(v: usize, e: usize, connected: bool) -> Self {
        let source: Vec<Graph> = basis(v, e, connected)
            .into_iter()
            .map(|c| c.graph)
            .collect();
        let target: Vec<Graph> = if v == 0 || e == 0 {
            Vec::new()
        } else {
            basis(v - 1, e - 1, connected)
                .into_iter()
                .map(|c| c.graph)
                .collect()
        };
        let index: BTreeMap<&Graph, usize> =
            target.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let columns = source
            .par_iter()
            .map(|g| {
                boundary_graph(g)
                    .terms()
                    .map(|(h, c)| (index[h], c.clone()))
                    .collect()
            })
            .collect();
        BigradedMatrix {
            source,
            target,
            columns,
        }
    }

    pub fn rank(&self) -> usize {
        rank(self.columns.iter().cloned())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiEntry {
    pub vertices: usize,
    pub edges: usize,
    pub dim: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    pub betti: usize,
}

/// Betti numbers of every bidegree with at most `max_e` edges.
pub fn homology_dims(max_e: usize, connected: bool) -> Vec<BettiEntry> {
    let mut ranks: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for e in 0..=max_e + 1 {
        for v in 0..=2 * e / 3 {
            let m = BigradedMatrix::boundary(v, e, connected);
            ranks.insert((v, e), (m.source.len(), m.rank()));
        }
    }
    let mut out = Vec::new();
    for e in 0..=max_e {
        for v in 0..=2 * e / 3 {
            let (dim, rank_out) = ranks[&(v, e)];
            let rank_in = ranks.get(&(v + 1, e + 1)).map_or(0, |r| r.1);
            if dim == 0 {
                continue;
            }
            out.push(BettiEntry {
                vertices: v,
                edges: e,
                dim,
                rank_out,
                rank_in,
                betti: dim - rank_out - rank_in,
            });
        }
    }
    out
}

/// A chain `y` with `boundary(y) = x` in the next bidegree, if one exists.
pub fn is_boundary(x: &GraphChain) -> Result<Option<GraphChain>> {
    let degs = x.bidegrees();
    if degs.len() > 1 {
        return Err(Error::NotHomogeneous);
    }
    let Some(&(v, e)) = degs.iter().next() else {
        return Ok(Some(GraphChain::zero()));
    };
    let m = BigradedMatrix::boundary(v + 1, e + 1, false);
    let index: BTreeMap<&Graph, usize> = m.target.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut b = SparseVec::new();
    for (g, c) in x.terms() {
        match index.get(g) {
            Some(&i) => {
                b.insert(i, c.clone());
            }
            None => return Ok(None),
        }
    }
    Ok(solve(&m.columns, &b).map(|y| {
        let mut out = GraphChain::zero();
        for (j, c) in y {
            out.add_raw(m.source[j].clone(), c);
        }
        out
    }))
}

/// All canonical classes (vanishing ones included) with at most `max_e` edges.
pub fn all_classes(max_e: usize, connected: bool) -> Vec<CanonicalGraph> {
    let mut out = Vec::new();
    for e in 0..=max_e {
        for v in 0..=2 * e / 3 {
            out.extend(enumerate_graphs(v, e, connected));
        }
    }
    out
}


#[cfg(test)]
mod oracle_tests {
    use super::*;
    use num_bigint::BigInt;

    /// Fraction-free Gaussian elimination on a dense integer matrix.
    fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut prev = BigInt::from(1);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| m[i][c] != BigInt::from(0)) else {
                continue;
            };
            m.swap(r, p);
            for i in r + 1..rows {
                for j in c + 1..cols {
                    m[i][j] = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                }
                m[i][c] = BigInt::from(0);
            }
            prev = m[r][c].clone();
            r += 1;
        }
        r
    }

    #[test]
    fn sparse_ranks_match_dense_elimination() {
        for e in 1..=5 {
            for v in 1..=2 * e / 3 {
                for connected in [true, false] {
                    let m = BigradedMatrix::boundary(v, e, connected);
                    let dense: Vec<Vec<BigInt>> = m
                        .columns
                        .iter()
                        .map(|col| {
                            (0..m.target.len())
                                .map(|i| {
                                    let c = col.get(&i).cloned().unwrap_or_else(Scalar::zero);
                                    assert!(c.is_real() && c.re().is_integer());
                                    c.re().to_integer()
                                })
                                .collect()
                        })
                        .collect();
                    assert_eq!(m.rank(), bareiss_rank(dense), "bidegree ({v}, {e})");
                }
            }
        }
    }

    #[test]
    fn small_betti_numbers() {
        let b: Vec<(usize, usize, usize, usize)> = homology_dims(4, true)
            .into_iter()
            .map(|x| (x.vertices, x.edges, x.dim, x.betti))
            .collect();
        assert_eq!(
            b,
            vec![
                (1, 2, 1, 0),
                (1, 3, 2, 0),
                (2, 3, 3, 2),
                (1, 4, 17, 0),
                (2, 4, 8, 0)
            ]
        );
    }
}
