//! Fully ordered ribbon graphs.
//!
//! A `Graph` stores one fully ordered representative: a vertex order, a linear
//! order of half-edges at each vertex (read cyclically as the ribbon
//! structure) and an orientation of every edge. The orientation of the
//! underlying oriented ribbon graph is the class of (vertex order, edge
//! directions) modulo even total sign, so rotating a vertex or reordering the
//! edge list changes nothing, while swapping two vertices or flipping one
//! edge negates the graph.
//!
//! Legged graphs carry extra half-edges attached to labelled external legs.
//! Legs never enter the orientation.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::order_is_odd;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Graph {
    pub vertices: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub legs_in: Vec<usize>,
    #[serde(default)]
    pub legs_out: Vec<usize>,
}

/// A splitting of one vertex's cyclic order into two arcs of length at least two.
///
/// The first arc is `len` half-edges starting at linear position `start`; the
/// second arc is the rest, read onwards from `start + len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealEdge {
    pub vertex: usize,
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    Edge(usize),
    In(usize),
    Out(usize),
}

/// Incidence lookups for a graph.
pub(crate) struct Incidence {
    pub vertex_of: Vec<usize>,
    pub pos_of: Vec<usize>,
    pub slot: Vec<Slot>,
    pub partner: Vec<Option<usize>>,
}

impl Graph {
    pub fn new(vertices: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::with_legs(vertices, edges, Vec::new(), Vec::new())
    }

    pub fn with_legs(
        vertices: Vec<Vec<usize>>,
        edges: Vec<(usize, usize)>,
        legs_in: Vec<usize>,
        legs_out: Vec<usize>,
    ) -> Result<Self> {
        let g = Graph {
            vertices,
            edges,
            legs_in,
            legs_out,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn empty() -> Self {
        Graph::default()
    }

    pub fn half_edge_count(&self) -> usize {
        self.vertices.iter().map(Vec::len).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn leg_count(&self) -> usize {
        self.legs_in.len() + self.legs_out.len()
    }

    pub fn has_legs(&self) -> bool {
        self.leg_count() > 0
    }

    pub fn valencies(&self) -> Vec<usize> {
        self.vertices.iter().map(Vec::len).collect()
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.vertex_count(), self.edge_count())
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let inc = self.incidence();
        let (a, b) = self.edges[e];
        inc.vertex_of[a] == inc.vertex_of[b]
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.half_edge_count();
        let bad = |msg: String| Err(Error::InvalidGraph(msg));
        let mut seen = vec![false; h];
        for (v, hs) in self.vertices.iter().enumerate() {
            if hs.len() < 3 {
                return bad(format!("vertex {v} has valency {} < 3", hs.len()));
            }
            for &x in hs {
                if x >= h || seen[x] {
                    return bad(format!("half-edge {x} repeated or out of range"));
                }
                seen[x] = true;
            }
        }
        let mut used = vec![false; h];
        let ends = self
            .edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(self.legs_in.iter().copied())
            .chain(self.legs_out.iter().copied());
        for x in ends {
            if x >= h || used[x] {
                return bad(format!("half-edge {x} used twice by edges or legs"));
            }
            used[x] = true;
        }
        if let Some(x) = used.iter().position(|u| !u) {
            return bad(format!("half-edge {x} is neither in an edge nor a leg"));
        }
        Ok(())
    }

    pub(crate) fn incidence(&self) -> Incidence {
        let h = self.half_edge_count();
        let mut vertex_of = vec![0; h];
        let mut pos_of = vec![0; h];
        for (v, hs) in self.vertices.iter().enumerate() {
            for (k, &x) in hs.iter().enumerate() {
                vertex_of[x] = v;
                pos_of[x] = k;
            }
        }
        let mut slot = vec![Slot::Edge(usize::MAX); h];
        let mut partner = vec![None; h];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            slot[a] = Slot::Edge(e);
            slot[b] = Slot::Edge(e);
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        for (i, &x) in self.legs_in.iter().enumerate() {
            slot[x] = Slot::In(i);
        }
        for (i, &x) in self.legs_out.iter().enumerate() {
            slot[x] = Slot::Out(i);
        }
        Incidence {
            vertex_of,
            pos_of,
            slot,
            partner,
        }
    }

    /// The graph whose vertices are consecutive blocks of positions `1..2k` of
    /// sizes `ks` and whose edges are the (1-based) chords.
    pub fn from_chords(chords: &[(usize, usize)], ks: &[usize]) -> Result<Self> {
        let total: usize = ks.iter().sum();
        if total != 2 * chords.len() {
            return Err(Error::InvalidGraph(format!(
                "type {ks:?} does not match {} chords",
                chords.len()
            )));
        }
        let mut vertices = Vec::with_capacity(ks.len());
        let mut next = 0;
        for &k in ks {
            vertices.push((next..next + k).collect());
            next += k;
        }
        let mut edges = Vec::with_capacity(chords.len());
        for &(i, j) in chords {
            if i == 0 || j == 0 {
                return Err(Error::InvalidGraph("chord endpoints are 1-based".into()));
            }
            edges.push((i - 1, j - 1));
        }
        Graph::new(vertices, edges)
    }

    /// The oriented chord diagram read off by concatenating the vertex orders.
    pub fn to_chords(&self) -> Vec<(usize, usize)> {
        let pos = self.positions();
        self.edges
            .iter()
            .map(|&(a, b)| (pos[a] + 1, pos[b] + 1))
            .collect()
    }

    /// Position of every half-edge in the concatenation of the vertex orders.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.half_edge_count()];
        for (k, &x) in self.vertices.iter().flatten().enumerate() {
            pos[x] = k;
        }
        pos
    }

    /// Renumbers half-edges in order of appearance.
    pub fn compacted(&self) -> Graph {
        let h = self
            .vertices
            .iter()
            .flatten()
            .copied()
            .max()
            .map_or(0, |m| m + 1);
        let mut map = vec![usize::MAX; h];
        for (k, &x) in self.vertices.iter().flatten().enumerate() {
            map[x] = k;
        }
        self.relabel(&map)
    }

    pub(crate) fn relabel(&self, map: &[usize]) -> Graph {
        Graph {
            vertices: self
                .vertices
                .iter()
                .map(|hs| hs.iter().map(|&x| map[x]).collect())
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| (map[a], map[b])).collect(),
            legs_in: self.legs_in.iter().map(|&x| map[x]).collect(),
            legs_out: self.legs_out.iter().map(|&x| map[x]).collect(),
        }
    }

    pub fn flip_edge(&self, e: usize) -> Graph {
        let mut g = self.clone();
        let (a, b) = g.edges[e];
        g.edges[e] = (b, a);
        g
    }

    /// Vertex reordering: `order[j]` is the old index of the new `j`-th vertex.
    /// Returns the graph and whether the orientation flips.
    pub fn reorder_vertices(&self, order: &[usize]) -> (Graph, bool) {
        let mut g = self.clone();
        g.vertices = order.iter().map(|&v| self.vertices[v].clone()).collect();
        (g, order_is_odd(order))
    }

    /// Contracts a non-loop edge. The boolean is true when the induced
    /// representative carries a minus sign.
    pub fn contract_edge(&self, e: usize) -> Result<(Graph, bool)> {
        let &(a, b) = self.edges.get(e).ok_or(Error::NoSuchEdge(e))?;
        let inc = self.incidence();
        let (s, t) = (inc.vertex_of[a], inc.vertex_of[b]);
        if s == t {
            return Err(Error::LoopEdge(e));
        }
        let mut order = vec![s, t];
        order.extend((0..self.vertices.len()).filter(|&v| v != s && v != t));
        let odd = order_is_odd(&order);
        let after = |v: usize, x: usize| -> Vec<usize> {
            let hs = &self.vertices[v];
            let k = inc.pos_of[x];
            hs[k + 1..].iter().chain(&hs[..k]).copied().collect()
        };
        let mut merged = after(s, a);
        merged.extend(after(t, b));
        let mut vertices = vec![merged];
        vertices.extend(order[2..].iter().map(|&v| self.vertices[v].clone()));
        let mut g = Graph {
            vertices,
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|&(f, _)| f != e)
                .map(|(_, &p)| p)
                .collect(),
            legs_in: self.legs_in.clone(),
            legs_out: self.legs_out.clone(),
        };
        g = g.compacted();
        Ok((g, odd))
    }

    pub fn ideal_edges(&self) -> Vec<IdealEdge> {
        let mut out = Vec::new();
        for (v, hs) in self.vertices.iter().enumerate() {
            let k = hs.len();
            for start in 0..k {
                for len in 2..k.saturating_sub(1) {
                    // each unordered pair of arcs once
                    if start < (start + len) % k {
                        out.push(IdealEdge {
                            vertex: v,
                            start,
                            len,
                        });
                    }
                }
            }
        }
        out
    }

    /// Inserts a new edge `(a, b)` splitting a vertex into `(A, a)` and `(B, b)`.
    /// The split vertex is moved to the front first, which costs the sign of
    /// passing it over the vertices before it.
    pub fn expand(&self, ideal: &IdealEdge) -> Result<(Graph, bool)> {
        let hs = self
            .vertices
            .get(ideal.vertex)
            .ok_or(Error::InvalidIdealEdge)?;
        let k = hs.len();
        if ideal.start >= k || ideal.len < 2 || ideal.len + 2 > k {
            return Err(Error::InvalidIdealEdge);
        }
        let h = self.half_edge_count();
        let (a, b) = (h, h + 1);
        let arc = |from: usize, len: usize| -> Vec<usize> {
            (0..len).map(|i| hs[(from + i) % k]).collect()
        };
        let mut first = arc(ideal.start, ideal.len);
        first.push(a);
        let mut second = arc(ideal.start + ideal.len, k - ideal.len);
        second.push(b);
        let mut vertices = vec![first, second];
        vertices.extend(
            self.vertices
                .iter()
                .enumerate()
                .filter(|&(v, _)| v != ideal.vertex)
                .map(|(_, x)| x.clone()),
        );
        let mut edges = self.edges.clone();
        edges.push((a, b));
        let g = Graph {
            vertices,
            edges,
            legs_in: self.legs_in.clone(),
            legs_out: self.legs_out.clone(),
        };
        Ok((g, ideal.vertex % 2 == 1))
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.half_edge_count();
        let shifted = other.relabel(&(off..off + other.half_edge_count()).collect::<Vec<_>>());
        let mut g = self.clone();
        g.vertices.extend(shifted.vertices);
        g.edges.extend(shifted.edges);
        g.legs_in.extend(shifted.legs_in);
        g.legs_out.extend(shifted.legs_out);
        g
    }

    /// Connected components ordered by their first vertex, each compacted, and
    /// whether reassembling them in that order costs a sign.
    pub fn components(&self) -> Result<(Vec<Graph>, bool)> {
        if self.has_legs() {
            return Err(Error::InvalidGraph(
                "component splitting is defined for legless graphs".into(),
            ));
        }
        let groups = self.vertex_components();
        let order: Vec<usize> = groups.iter().flatten().copied().collect();
        let mut out = Vec::with_capacity(groups.len());
        let inc = self.incidence();
        for group in &groups {
            let mut member = vec![false; self.vertices.len()];
            for &v in group {
                member[v] = true;
            }
            let g = Graph {
                vertices: group.iter().map(|&v| self.vertices[v].clone()).collect(),
                edges: self
                    .edges
                    .iter()
                    .filter(|&&(a, _)| member[inc.vertex_of[a]])
                    .copied()
                    .collect(),
                legs_in: Vec::new(),
                legs_out: Vec::new(),
            };
            out.push(g.compacted());
        }
        Ok((out, order_is_odd(&order)))
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_components().len() <= 1
    }

    /// Vertex sets of the connected components, each sorted, ordered by first vertex.
    pub fn vertex_components(&self) -> Vec<Vec<usize>> {
        let inc = self.incidence();
        let nv = self.vertices.len();
        let mut comp = vec![usize::MAX; nv];
        let mut groups = Vec::new();
        for root in 0..nv {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let mut group = vec![root];
            comp[root] = id;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &x in &self.vertices[v] {
                    if let Some(y) = inc.partner[x] {
                        let w = inc.vertex_of[y];
                        if comp[w] == usize::MAX {
                            comp[w] = id;
                            group.push(w);
                            queue.push_back(w);
                        }
                    }
                }
            }
            group.sort_unstable();
            groups.push(group);
        }
        groups
    }

    /// Fuses outgoing leg `j` of `self` with incoming leg `j` of `other`.
    pub fn glue(&self, other: &Graph) -> Result<Graph> {
        if self.legs_out.len() != other.legs_in.len() {
            return Err(Error::ArityMismatch(
                self.legs_out.len(),
                other.legs_in.len(),
            ));
        }
        if self.vertices.is_empty() || other.vertices.is_empty() {
            return Err(Error::InvalidGraph("gluing needs internal vertices".into()));
        }
        let off = self.half_edge_count();
        let shifted = other.relabel(&(off..off + other.half_edge_count()).collect::<Vec<_>>());
        let mut vertices = self.vertices.clone();
        vertices.extend(shifted.vertices);
        let mut edges = self.edges.clone();
        edges.extend(shifted.edges);
        edges.extend(
            self.legs_out
                .iter()
                .zip(&shifted.legs_in)
                .map(|(&a, &b)| (a, b)),
        );
        Ok(Graph {
            vertices,
            edges,
            legs_in: self.legs_in.clone(),
            legs_out: shifted.legs_out,
        })
    }
}

/// A graph together with a sign, the result of the signed operations above.
pub type Signed = (Graph, bool);

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn theta() -> Graph {
        Graph::from_chords(&[(1, 4), (2, 5), (3, 6)], &[3, 3]).unwrap()
    }

    #[test]
    fn chords_roundtrip() {
        let g = theta();
        assert_eq!(g.vertices, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(g.to_chords(), vec![(1, 4), (2, 5), (3, 6)]);
        let g = Graph::from_chords(&[(1, 3), (2, 4)], &[4]).unwrap();
        assert_eq!(g.to_chords(), vec![(1, 3), (2, 4)]);
        assert!(Graph::from_chords(&[(1, 2)], &[2]).is_err());
        assert!(Graph::from_chords(&[(1, 2)], &[3]).is_err());
    }

    #[test]
    fn contraction_of_theta() {
        let g = theta();
        for e in 0..3 {
            let (c, _) = g.contract_edge(e).unwrap();
            assert_eq!(c.valencies(), vec![4]);
            assert_eq!(c.edge_count(), 2);
            assert!((0..2).all(|f| c.is_loop(f)));
        }
        let (c, _) = g.contract_edge(0).unwrap();
        assert!(matches!(c.contract_edge(0), Err(Error::LoopEdge(0))));
        assert!(matches!(g.contract_edge(7), Err(Error::NoSuchEdge(7))));
    }

    #[test]
    fn ideal_edge_counts() {
        let single = |k: usize| Graph {
            vertices: vec![(0..k).collect()],
            edges: Vec::new(),
            legs_in: (0..k).collect(),
            legs_out: Vec::new(),
        };
        assert_eq!(single(3).ideal_edges().len(), 0);
        assert_eq!(single(4).ideal_edges().len(), 2);
        assert_eq!(single(5).ideal_edges().len(), 5);
        assert_eq!(single(6).ideal_edges().len(), 9);
    }

    #[test]
    fn expansion_splits_a_vertex() {
        let g = Graph::from_chords(&[(1, 3), (2, 4)], &[4]).unwrap();
        for i in g.ideal_edges() {
            let (x, _) = g.expand(&i).unwrap();
            assert_eq!(x.valencies(), vec![3, 3]);
            x.validate().unwrap();
        }
        assert!(theta().ideal_edges().is_empty());
    }

    #[test]
    fn components_and_union() {
        let t = theta();
        let u = t.disjoint_union(&t);
        let (cs, odd) = u.components().unwrap();
        assert_eq!(cs, vec![t.clone(), t.clone()]);
        assert!(!odd);
        assert_eq!(t.disjoint_union(&Graph::empty()), t);
        assert!(Graph::empty().components().unwrap().0.is_empty());
        assert!(t.is_connected() && !u.is_connected());
    }
}
