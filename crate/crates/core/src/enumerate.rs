//! Enumeration of ribbon graph isomorphism classes from chord diagrams.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::canon::{canonicalize, CanonicalGraph};
use crate::graph::Graph;

/// Non-increasing partitions of `total` into `parts` parts, each at least `min`.
pub fn partitions(total: usize, parts: usize, min: usize) -> Vec<Vec<usize>> {
    fn rec(
        left: usize,
        parts: usize,
        min: usize,
        max: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = max.min(left.saturating_sub(min * (parts - 1)));
        for k in (min..=hi).rev() {
            cur.push(k);
            rec(left - k, parts - 1, min, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, min, total, &mut Vec::new(), &mut out);
    out
}

/// All perfect matchings of the given points, each chord `(i, j)` with `i < j`.
pub fn matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        free: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for k in 0..free.len() {
            let b = free.remove(k);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(k, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    if points.len() % 2 == 0 {
        let mut free = points.to_vec();
        free.sort_unstable();
        rec(&mut free, &mut Vec::new(), &mut out);
    }
    out
}

fn collect(graphs: impl ParallelIterator<Item = Graph>, connected: bool) -> Vec<CanonicalGraph> {
    let found: BTreeMap<Graph, CanonicalGraph> = graphs
        .filter_map(|g| {
            let c = canonicalize(&g);
            (!connected || c.components <= 1).then_some(c)
        })
        .fold(BTreeMap::new, |mut m, c| {
            m.entry(c.graph.clone()).or_insert(c);
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_insert(v);
            }
            a
        });
    found
        .into_values()
        .map(|mut c| {
            // report classes relative to their own canonical representative
            if !c.is_zero() {
                c.sign = crate::canon::Orientation::Plus;
            }
            c
        })
        .collect()
}

/// One canonical graph per isomorphism class with `v` vertices and `e` edges,
/// including classes that vanish by an orientation-reversing automorphism.
pub fn enumerate_graphs(v: usize, e: usize, connected: bool) -> Vec<CanonicalGraph> {
    if v == 0 {
        return if e == 0 && !connected {
            vec![canonicalize(&Graph::empty())]
        } else {
            Vec::new()
        };
    }
    let types = partitions(2 * e, v, 3);
    let points: Vec<usize> = (1..=2 * e).collect();
    let all = matchings(&points);
    let jobs: Vec<(&Vec<usize>, &Vec<(usize, usize)>)> = types
        .iter()
        .flat_map(|t| all.iter().map(move |m| (t, m)))
        .collect();
    collect(
        jobs.into_par_iter()
            .map(|(t, m)| Graph::from_chords(m, t).expect("valid chord graph")),
        connected,
    )
}

/// Nonvanishing classes with `e` edges and any vertex count.
pub fn basis(v: usize, e: usize, connected: bool) -> Vec<CanonicalGraph> {
    enumerate_graphs(v, e, connected)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect()
}

/// Every nonvanishing legless class with at most `max_e` edges, ordered by
/// bidegree.
pub fn all_basis(max_e: usize, connected: bool) -> Vec<CanonicalGraph> {
    let mut out = Vec::new();
    for e in 0..=max_e {
        for v in 0..=2 * e / 3 {
            out.extend(basis(v, e, connected));
        }
    }
    out
}

/// Connected legged classes with `m` incoming and `n` outgoing legs and `e`
/// internal edges.
pub fn enumerate_legged(m: usize, n: usize, e: usize) -> Vec<CanonicalGraph> {
    let legs = m + n;
    let h = 2 * e + legs;
    let mut jobs: Vec<(Vec<usize>, Vec<usize>, Vec<(usize, usize)>)> = Vec::new();
    let mut types = Vec::new();
    for v in 1..=h / 3 {
        types.extend(partitions(h, v, 3));
    }
    for leg_pos in injections(h, legs) {
        let rest: Vec<usize> = (0..h).filter(|x| !leg_pos.contains(x)).collect();
        for mt in matchings(&rest) {
            for t in &types {
                jobs.push((t.clone(), leg_pos.clone(), mt.clone()));
            }
        }
    }
    collect(
        jobs.into_par_iter().map(move |(t, lp, mt)| {
            let mut vertices = Vec::new();
            let mut next = 0;
            for &k in &t {
                vertices.push((next..next + k).collect());
                next += k;
            }
            Graph::with_legs(vertices, mt, lp[..m].to_vec(), lp[m..].to_vec())
                .expect("valid legged graph")
        }),
        true,
    )
}

/// Ordered selections of `k` distinct elements of `0..n`.
fn injections(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !cur.contains(&x) {
                cur.push(x);
                rec(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(6, 2, 3), vec![vec![3, 3]]);
        assert_eq!(partitions(8, 2, 3), vec![vec![5, 3], vec![4, 4]]);
        assert!(partitions(2, 1, 3).is_empty());
    }

    #[test]
    fn matching_counts() {
        assert_eq!(matchings(&[1, 2, 3, 4]).len(), 3);
        assert_eq!(matchings(&(1..=6).collect::<Vec<_>>()).len(), 15);
        assert_eq!(matchings(&(1..=8).collect::<Vec<_>>()).len(), 105);
    }

    #[test]
    fn small_enumerations() {
        assert!(enumerate_graphs(1, 1, false).is_empty());
        assert_eq!(enumerate_graphs(0, 0, false).len(), 1);
    }

    #[test]
    fn legged_single_vertex() {
        // one trivalent vertex with three labelled legs: the two cyclic orders
        let gs = enumerate_legged(2, 1, 0);
        assert_eq!(gs.len(), 2);
    }
}
