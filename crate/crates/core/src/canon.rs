//! Canonical forms of oriented ribbon graphs.
//!
//! Each connected component is traversed breadth-first from every dart,
//! reading each vertex's cyclic order from the dart it was entered by. The
//! lexicographically least traversal code labels the component; roots that
//! reproduce it are exactly the ribbon automorphisms. Components are then
//! sorted by code.

use crate::graph::{Graph, Slot};
use crate::perm::order_is_odd;

const LEG_IN: u32 = 1 << 24;
const LEG_OUT: u32 = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Plus,
    Minus,
    /// The graph has an orientation-reversing automorphism and vanishes.
    Zero,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Plus => 1,
            Orientation::Minus => -1,
            Orientation::Zero => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalGraph {
    pub graph: Graph,
    /// Input = sign * canonical representative.
    pub sign: Orientation,
    /// Order of the orientation-preserving automorphism group, or of the full
    /// ribbon automorphism group when the graph vanishes.
    pub aut: u64,
    pub components: usize,
}

impl CanonicalGraph {
    pub fn is_zero(&self) -> bool {
        self.sign == Orientation::Zero
    }
}

struct Traversal {
    code: Vec<u32>,
    /// new label of each half-edge of the component (others untouched)
    label: Vec<usize>,
    /// vertices in discovery order, each rotated to its entry dart
    rotated: Vec<(usize, Vec<usize>)>,
}

fn traverse(
    g: &Graph,
    slot: &[Slot],
    partner: &[Option<usize>],
    vertex_of: &[usize],
    pos_of: &[usize],
    root: usize,
) -> Traversal {
    let h = slot.len();
    let mut label = vec![usize::MAX; h];
    let mut order: Vec<usize> = Vec::new();
    let mut rotated = Vec::new();
    let mut next = 0;
    let mut visit = |x: usize,
                     label: &mut Vec<usize>,
                     order: &mut Vec<usize>,
                     rotated: &mut Vec<(usize, Vec<usize>)>| {
        let v = vertex_of[x];
        let hs = &g.vertices[v];
        let k = pos_of[x];
        let rot: Vec<usize> = hs[k..].iter().chain(&hs[..k]).copied().collect();
        for &y in &rot {
            label[y] = next;
            next += 1;
            order.push(y);
        }
        rotated.push((v, rot));
    };
    visit(root, &mut label, &mut order, &mut rotated);
    let mut i = 0;
    while i < order.len() {
        if let Some(y) = partner[order[i]] {
            if label[y] == usize::MAX {
                visit(y, &mut label, &mut order, &mut rotated);
            }
        }
        i += 1;
    }
    let mut code = Vec::with_capacity(order.len() + rotated.len());
    for (_, rot) in &rotated {
        code.push(rot.len() as u32);
        for &y in rot {
            code.push(match slot[y] {
                Slot::Edge(_) => label[partner[y].unwrap()] as u32,
                Slot::In(i) => LEG_IN + i as u32,
                Slot::Out(i) => LEG_OUT + i as u32,
            });
        }
    }
    Traversal {
        code,
        label,
        rotated,
    }
}

struct ComponentForm {
    code: Vec<u32>,
    best: Traversal,
    aut: u64,
    reversing: bool,
    vertices: usize,
}

/// Orientation parity of a component relabeling: vertex order plus edge flips.
fn relative_odd(vertex_rank: &[usize], flips: usize) -> bool {
    order_is_odd(vertex_rank) ^ (flips % 2 == 1)
}

pub fn canonicalize(g: &Graph) -> CanonicalGraph {
    let inc = g.incidence();
    let groups = g.vertex_components();
    let mut forms: Vec<ComponentForm> = Vec::with_capacity(groups.len());
    for group in &groups {
        let mut best: Option<(Vec<u32>, Vec<Traversal>)> = None;
        for &v in group {
            for &root in &g.vertices[v] {
                let t = traverse(
                    g,
                    &inc.slot,
                    &inc.partner,
                    &inc.vertex_of,
                    &inc.pos_of,
                    root,
                );
                match &mut best {
                    None => best = Some((t.code.clone(), vec![t])),
                    Some((code, ties)) => {
                        if t.code < *code {
                            *code = t.code.clone();
                            ties.clear();
                            ties.push(t);
                        } else if t.code == *code {
                            ties.push(t);
                        }
                    }
                }
            }
        }
        let (code, ties) = best.expect("components are nonempty");
        let parity = |t: &Traversal| -> bool {
            // rank of each component vertex (in input order) in discovery order
            let mut rank_of = vec![0; g.vertices.len()];
            for (r, (v, _)) in t.rotated.iter().enumerate() {
                rank_of[*v] = r;
            }
            let ranks: Vec<usize> = group.iter().map(|&v| rank_of[v]).collect();
            let flips = g
                .edges
                .iter()
                .filter(|&&(a, b)| t.label[a] != usize::MAX && t.label[a] > t.label[b])
                .count();
            relative_odd(&ranks, flips)
        };
        let p0 = parity(&ties[0]);
        let reversing = ties.iter().any(|t| parity(t) != p0);
        let aut = ties.len() as u64;
        let mut ties = ties;
        forms.push(ComponentForm {
            code,
            best: ties.swap_remove(0),
            aut,
            reversing,
            vertices: group.len(),
        });
    }
    forms.sort_by(|a, b| a.code.cmp(&b.code));

    let mut label = vec![usize::MAX; inc.slot.len()];
    let mut vertices: Vec<Vec<usize>> = Vec::with_capacity(g.vertices.len());
    let mut canon_rank = vec![0; g.vertices.len()];
    let mut offset = 0;
    for f in &forms {
        for (v, rot) in &f.best.rotated {
            canon_rank[*v] = vertices.len();
            vertices.push(rot.iter().map(|&y| f.best.label[y] + offset).collect());
            for &y in rot {
                label[y] = f.best.label[y] + offset;
            }
        }
        offset += f.best.code.len() - f.best.rotated.len();
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (label[a], label[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    let flips = g
        .edges
        .iter()
        .filter(|&&(a, b)| label[a] > label[b])
        .count();
    let odd = relative_odd(&canon_rank, flips);

    let mut aut: u64 = forms.iter().map(|f| f.aut).product();
    let mut zero = forms.iter().any(|f| f.reversing);
    let mut i = 0;
    while i < forms.len() {
        let mut j = i;
        while j < forms.len() && forms[j].code == forms[i].code {
            j += 1;
        }
        let mult = (j - i) as u64;
        aut *= (1..=mult).product::<u64>();
        // swapping two equal components permutes two vertex blocks
        if mult > 1 && forms[i].vertices % 2 == 1 {
            zero = true;
        }
        i = j;
    }
    let graph = Graph {
        vertices,
        edges,
        legs_in: g.legs_in.iter().map(|&x| label[x]).collect(),
        legs_out: g.legs_out.iter().map(|&x| label[x]).collect(),
    };
    let sign = if zero {
        Orientation::Zero
    } else if odd {
        Orientation::Minus
    } else {
        Orientation::Plus
    };
    CanonicalGraph {
        graph,
        sign,
        aut,
        components: forms.len(),
    }
}

/// Canonical form of a signed representative, folding the extra sign in.
pub fn canonicalize_signed(g: &Graph, negate: bool) -> CanonicalGraph {
    let mut c = canonicalize(g);
    if negate {
        c.sign = match c.sign {
            Orientation::Plus => Orientation::Minus,
            Orientation::Minus => Orientation::Plus,
            Orientation::Zero => Orientation::Zero,
        };
    }
    c
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::perm::all_perms;

    fn theta() -> Graph {
        Graph::from_chords(&[(1, 4), (2, 5), (3, 6)], &[3, 3]).unwrap()
    }

    /// Every fully ordered representative of `g`: all vertex orders and
    /// rotations, with the orientation parity relative to `g`.
    pub(crate) fn representatives(g: &Graph) -> Vec<(Vec<usize>, Vec<(usize, usize)>, bool)> {
        let nv = g.vertex_count();
        let mut out = Vec::new();
        for order in all_perms(nv) {
            let order = order.images().to_vec();
            let ks: Vec<usize> = order.iter().map(|&v| g.vertices[v].len()).collect();
            let mut rots = vec![0usize; nv];
            loop {
                // position of each half-edge under this relabeling
                let mut pos = vec![0; g.half_edge_count()];
                let mut next = 0;
                for (j, &v) in order.iter().enumerate() {
                    let hs = &g.vertices[v];
                    for i in 0..hs.len() {
                        pos[hs[(rots[j] + i) % hs.len()]] = next;
                        next += 1;
                    }
                }
                let mut chords: Vec<(usize, usize)> = Vec::new();
                let mut flips = 0;
                for &(a, b) in &g.edges {
                    if pos[a] > pos[b] {
                        flips += 1;
                    }
                    chords.push((pos[a].min(pos[b]), pos[a].max(pos[b])));
                }
                chords.sort_unstable();
                out.push((ks.clone(), chords, order_is_odd(&order) ^ (flips % 2 == 1)));
                let mut j = 0;
                while j < nv {
                    rots[j] += 1;
                    if rots[j] < ks[j] {
                        break;
                    }
                    rots[j] = 0;
                    j += 1;
                }
                if j == nv {
                    break;
                }
            }
        }
        out
    }

    /// Brute-force canonical key, orientation and automorphism count.
    pub(crate) fn brute(g: &Graph) -> ((Vec<usize>, Vec<(usize, usize)>), Orientation, u64) {
        let reps = representatives(g);
        let key = reps
            .iter()
            .map(|(k, c, _)| (k.clone(), c.clone()))
            .min()
            .unwrap();
        let hits: Vec<bool> = reps
            .iter()
            .filter(|(k, c, _)| (k, c) == (&key.0, &key.1))
            .map(|r| r.2)
            .collect();
        let sign = if hits.iter().any(|&o| o != hits[0]) {
            Orientation::Zero
        } else if hits[0] {
            Orientation::Minus
        } else {
            Orientation::Plus
        };
        (key, sign, hits.len() as u64)
    }

    #[test]
    fn theta_automorphisms() {
        let c = canonicalize(&theta());
        assert_eq!(c.aut, 6);
        assert_eq!(c.sign, Orientation::Plus);
        assert_eq!(brute(&theta()).2, 6);
    }

    #[test]
    fn flips_and_relabelings() {
        let g = theta();
        let base = canonicalize(&g);
        let flipped = canonicalize(&g.flip_edge(1));
        assert_eq!(flipped.graph, base.graph);
        assert_eq!(flipped.sign.sign(), -base.sign.sign());
        let twice = canonicalize(&g.flip_edge(0).flip_edge(2));
        assert_eq!(twice.sign, base.sign);
        let (swapped, odd) = g.reorder_vertices(&[1, 0]);
        assert!(odd);
        let s = canonicalize(&swapped);
        assert_eq!(s.graph, base.graph);
        assert_eq!(s.sign.sign(), -base.sign.sign());
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let g = Graph::from_chords(&[(1, 6), (2, 4), (3, 7), (5, 8)], &[4, 4]).unwrap();
        let c = canonicalize(&g);
        let again = canonicalize(&c.graph);
        assert_eq!(again.graph, c.graph);
        assert_eq!(
            again.sign,
            if c.is_zero() {
                Orientation::Zero
            } else {
                Orientation::Plus
            }
        );
    }
}

#[cfg(test)]
mod oracle_tests {
    use super::tests::brute;
    use super::*;
    use crate::enumerate::{matchings, partitions};
    use std::collections::HashMap;

    fn all_ordered(e: usize) -> Vec<Graph> {
        let pts: Vec<usize> = (1..=2 * e).collect();
        let ms = matchings(&pts);
        let mut out = Vec::new();
        for v in 1..=2 * e / 3 {
            for t in partitions(2 * e, v, 3) {
                for m in &ms {
                    out.push(Graph::from_chords(m, &t).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn agrees_with_brute_force_up_to_four_edges() {
        for e in 1..=4 {
            let gs = all_ordered(e);
            // brute key -> (canonical graph, relative sign of the pair)
            let mut by_brute: HashMap<_, (Graph, i64, i64)> = HashMap::new();
            let mut by_canon: HashMap<Graph, _> = HashMap::new();
            for g in &gs {
                let c = canonicalize(g);
                let (key, bsign, baut) = brute(g);
                assert_eq!(c.aut, baut, "aut of {g:?}");
                assert_eq!(
                    c.is_zero(),
                    bsign == Orientation::Zero,
                    "zero flag of {g:?}"
                );
                let entry = by_brute.entry(key.clone()).or_insert((
                    c.graph.clone(),
                    c.sign.sign(),
                    bsign.sign(),
                ));
                assert_eq!(entry.0, c.graph, "orbit separation for {g:?}");
                // relative orientation of two members agrees
                assert_eq!(entry.1 * c.sign.sign(), entry.2 * bsign.sign());
                let k2 = by_canon.entry(c.graph.clone()).or_insert(key.clone());
                assert_eq!(*k2, key);
            }
        }
    }

    #[test]
    fn automorphism_counts_up_to_five_edges() {
        let gs = all_ordered(5);
        let mut seen = std::collections::HashSet::new();
        for g in &gs {
            let c = canonicalize(g);
            if seen.insert(c.graph.clone()) {
                let (_, bsign, baut) = brute(g);
                assert_eq!(c.aut, baut);
                assert_eq!(c.is_zero(), bsign == Orientation::Zero);
            }
        }
    }
}
