//! Feynman amplitudes: contracting tensors placed at the vertices of a
//! ribbon graph, the chain/graph pairing and the integration map.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::canon::canonicalize;
use crate::complex::GraphChain;
use crate::error::{Error, Result};
use crate::form::BilinearForm;
use crate::graph::Graph;
use crate::lie::CEChain;
use crate::perm::Perm;
use crate::scalar::Scalar;
use crate::tensor::{rotate_word, SuperDim, SuperTensor, Word};

/// Sparse terms of one vertex tensor.
pub type Block = Vec<(Word, Scalar)>;

/// Places `blocks` side by side, contracts the letter pairs `pairs`
/// (positions in the concatenation) with `form` and returns the tensor in the
/// remaining positions, read in the order `free`.
///
/// The Koszul sign is that of moving the letters into the order
/// `a_1 b_1 a_2 b_2 ... free...`.
pub fn contract(
    dim: SuperDim,
    blocks: &[&[(Word, Scalar)]],
    pairs: &[(usize, usize)],
    free: &[usize],
    form: &BilinearForm,
) -> BTreeMap<Word, Scalar> {
    let mut offsets = Vec::with_capacity(blocks.len() + 1);
    let mut total = 0;
    for b in blocks {
        offsets.push(total);
        total += b.first().map_or(0, |(w, _)| w.len());
    }
    offsets.push(total);
    let block_of = |pos: usize| offsets.partition_point(|&o| o <= pos) - 1;
    let mut closes: Vec<Vec<(usize, usize)>> = vec![Vec::new(); blocks.len()];
    for &(a, b) in pairs {
        closes[block_of(a).max(block_of(b))].push((a, b));
    }
    let target: Vec<usize> = pairs
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .chain(free.iter().copied())
        .collect();

    struct Walk<'a> {
        dim: SuperDim,
        blocks: &'a [&'a [(Word, Scalar)]],
        offsets: &'a [usize],
        closes: &'a [Vec<(usize, usize)>],
        target: &'a [usize],
        free: &'a [usize],
        form: &'a BilinearForm,
        letters: Vec<u8>,
        out: BTreeMap<Word, Scalar>,
    }

    impl Walk<'_> {
        fn go(&mut self, v: usize, coeff: Scalar) {
            if v == self.blocks.len() {
                let odd: Vec<bool> = self
                    .target
                    .iter()
                    .map(|&p| self.dim.is_odd(self.letters[p]))
                    .collect();
                let mut sign = false;
                for s in 0..odd.len() {
                    if !odd[s] {
                        continue;
                    }
                    for t in s + 1..odd.len() {
                        if odd[t] && self.target[s] > self.target[t] {
                            sign = !sign;
                        }
                    }
                }
                let w: Word = self.free.iter().map(|&p| self.letters[p]).collect();
                let e = self.out.entry(w.clone()).or_insert_with(Scalar::zero);
                if sign {
                    *e -= &coeff;
                } else {
                    *e += &coeff;
                }
                if e.is_zero() {
                    self.out.remove(&w);
                }
                return;
            }
            'terms: for (w, c) in self.blocks[v] {
                let off = self.offsets[v];
                self.letters[off..off + w.len()].copy_from_slice(w);
                let mut k = &coeff * c;
                for &(a, b) in &self.closes[v] {
                    let f = self.form.get(self.letters[a], self.letters[b]);
                    if f.is_zero() {
                        continue 'terms;
                    }
                    k = &k * f;
                }
                self.go(v + 1, k);
            }
        }
    }

    let mut walk = Walk {
        dim,
        blocks,
        offsets: &offsets,
        closes: &closes,
        target: &target,
        free,
        form,
        letters: vec![0; total],
        out: BTreeMap::new(),
    };
    if blocks.iter().all(|b| !b.is_empty()) {
        walk.go(0, Scalar::one());
    }
    walk.out
}

/// `<x_1, x_2> <x_3, x_4> ...`, extended linearly.
pub fn kappa(t: &SuperTensor, form: &BilinearForm) -> Result<Scalar> {
    if t.rank % 2 == 1 {
        return Err(Error::RankMismatch {
            expected: t.rank + 1,
            got: t.rank,
        });
    }
    if t.dim != form.dim {
        return Err(Error::DimMismatch);
    }
    Ok(t.terms()
        .map(|(w, c)| {
            w.chunks(2).fold(c.clone(), |acc, p| {
                if acc.is_zero() {
                    acc
                } else {
                    &acc * form.get(p[0], p[1])
                }
            })
        })
        .sum())
}

/// The permutation sending `i_r -> 2r - 1` and `j_r -> 2r` (0-based here).
pub fn chord_permutation(chords: &[(usize, usize)]) -> Result<Perm> {
    let mut images = vec![usize::MAX; 2 * chords.len()];
    for (r, &(i, j)) in chords.iter().enumerate() {
        for (p, t) in [(i, 2 * r), (j, 2 * r + 1)] {
            if p == 0 || p > images.len() || images[p - 1] != usize::MAX {
                return Err(Error::InvalidPermutation(format!(
                    "bad chord diagram {chords:?}"
                )));
            }
            images[p - 1] = t;
        }
    }
    Perm::from_images(images)
}

/// `kappa(sigma_c . t)` for a 1-based oriented chord diagram `c`.
pub fn beta(chords: &[(usize, usize)], t: &SuperTensor, form: &BilinearForm) -> Result<Scalar> {
    let sigma = chord_permutation(chords)?;
    kappa(&t.koszul_apply(&sigma)?, form)
}

fn edge_positions(g: &Graph) -> Vec<(usize, usize)> {
    let pos = g.positions();
    g.edges.iter().map(|&(a, b)| (pos[a], pos[b])).collect()
}

/// Amplitude of a fully ordered graph on a tensor split into vertex blocks;
/// zero unless block ranks equal the vertex valencies in order.
pub fn amplitude_ordered(g: &Graph, blocks: &[SuperTensor], form: &BilinearForm) -> Scalar {
    if g.has_legs()
        || blocks.len() != g.vertex_count()
        || blocks
            .iter()
            .zip(g.valencies())
            .any(|(b, k)| b.rank != k || b.dim != form.dim)
    {
        return Scalar::zero();
    }
    let terms: Vec<Block> = blocks
        .iter()
        .map(|b| b.terms().map(|(w, c)| (w.clone(), c.clone())).collect())
        .collect();
    let refs: Vec<&[(Word, Scalar)]> = terms.iter().map(Vec::as_slice).collect();
    contract(form.dim, &refs, &edge_positions(g), &[], form)
        .remove(&Vec::new())
        .unwrap_or_else(Scalar::zero)
}

/// `N w`: the sum of all signed rotations.
pub fn norm_word(dim: SuperDim, w: &[u8]) -> Block {
    let mut m: BTreeMap<Word, Scalar> = BTreeMap::new();
    for r in 0..w.len() {
        let (rw, odd) = rotate_word(dim, w, r);
        *m.entry(rw).or_insert_with(Scalar::zero) += Scalar::sign(odd);
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Assignments of factors to vertices with matching sizes, as
/// `(rho, sign)` where vertex `j` receives factor `rho[j]` and the sign is
/// `sgn(rho)` times the Koszul sign of the odd factors.
fn assignments(sizes: &[usize], valencies: &[usize], odd: &[bool]) -> Vec<(Vec<usize>, bool)> {
    fn rec(
        j: usize,
        sizes: &[usize],
        valencies: &[usize],
        used: &mut Vec<bool>,
        rho: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if j == valencies.len() {
            out.push(rho.clone());
            return;
        }
        for f in 0..sizes.len() {
            if !used[f] && sizes[f] == valencies[j] {
                used[f] = true;
                rho.push(f);
                rec(j + 1, sizes, valencies, used, rho, out);
                rho.pop();
                used[f] = false;
            }
        }
    }
    if sizes.len() != valencies.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(
        0,
        sizes,
        valencies,
        &mut vec![false; sizes.len()],
        &mut Vec::new(),
        &mut out,
    );
    out.into_iter()
        .map(|rho| {
            let mut sign = false;
            for a in 0..rho.len() {
                for b in a + 1..rho.len() {
                    if rho[a] > rho[b] {
                        sign ^= !(odd[rho[a]] && odd[rho[b]]);
                    }
                }
            }
            (rho, sign)
        })
        .collect()
}

/// The amplitude `F_G(x)` of an oriented ribbon graph on a CE chain.
pub fn amplitude(g: &Graph, x: &CEChain, form: &BilinearForm) -> Result<Scalar> {
    if g.has_legs() {
        return Err(Error::InvalidGraph(
            "amplitudes take graphs without legs".into(),
        ));
    }
    if x.dim != form.dim {
        return Err(Error::DimMismatch);
    }
    let dim = x.dim;
    let valencies = g.valencies();
    let pairs = edge_positions(g);
    let total: Scalar = x
        .terms()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(fs, c)| {
            let sizes: Vec<usize> = fs.iter().map(Vec::len).collect();
            let odd: Vec<bool> = fs.iter().map(|w| dim.word_odd(w)).collect();
            let mut acc = Scalar::zero();
            let assigned = assignments(&sizes, &valencies, &odd);
            if assigned.is_empty() {
                return acc;
            }
            let norms: Vec<Block> = fs.iter().map(|w| norm_word(dim, w)).collect();
            for (rho, sign) in assigned {
                let refs: Vec<&[(Word, Scalar)]> =
                    rho.iter().map(|&f| norms[f].as_slice()).collect();
                if let Some(v) = contract(dim, &refs, &pairs, &[], form).remove(&Vec::new()) {
                    if sign {
                        acc -= &v;
                    } else {
                        acc += &v;
                    }
                }
            }
            &acc * *c
        })
        .sum();
    Ok(total)
}

/// `<<x, chain>> = sum_G coeff_G F_G(x) / |Aut(G)|`.
pub fn pair_chain(x: &CEChain, chain: &GraphChain, form: &BilinearForm) -> Result<Scalar> {
    let mut total = Scalar::zero();
    for (g, c) in chain.terms() {
        total += &(c * &pair_chain_graph(x, g, form)?);
    }
    Ok(total)
}

/// `F_G(x) / |Aut(G)|`; zero on graphs with an odd automorphism.
pub fn pair_chain_graph(x: &CEChain, g: &Graph, form: &BilinearForm) -> Result<Scalar> {
    let cg = canonicalize(g);
    if cg.is_zero() {
        return Ok(Scalar::zero());
    }
    let f = amplitude(g, x, form)?;
    Ok(f / &Scalar::from_int(cg.aut as i64))
}

/// The integration map: sums `beta_c(x) G(c)` over chord diagrams with
/// increasing chords, `x` read off the canonical wedge representatives.
pub fn integral(x: &CEChain, form: &BilinearForm) -> Result<GraphChain> {
    if x.dim != form.dim {
        return Err(Error::DimMismatch);
    }
    let dim = x.dim;
    let parts: Vec<GraphChain> = x
        .terms()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(fs, c)| {
            let mut out = GraphChain::zero();
            let word: Word = fs.iter().flatten().copied().collect();
            if word.len() % 2 == 1 {
                return Ok(out);
            }
            let ks: Vec<usize> = fs.iter().map(Vec::len).collect();
            for (chords, b) in nonzero_matchings(dim, &word, form) {
                let one_based: Vec<(usize, usize)> =
                    chords.iter().map(|&(i, j)| (i + 1, j + 1)).collect();
                let g = Graph::from_chords(&one_based, &ks)?;
                out.add_graph(&g, &(&b * *c));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().fold(GraphChain::zero(), |a, b| a.add(b)))
}

/// Perfect matchings `(i < j)` of the letters of `w` with every pair
/// nonzero under `form`, with `beta` of each.
fn nonzero_matchings(
    dim: SuperDim,
    w: &[u8],
    form: &BilinearForm,
) -> Vec<(Vec<(usize, usize)>, Scalar)> {
    fn rec(
        w: &[u8],
        form: &BilinearForm,
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        val: Scalar,
        out: &mut Vec<(Vec<(usize, usize)>, Scalar)>,
    ) {
        let Some(i) = used.iter().position(|&u| !u) else {
            out.push((cur.clone(), val));
            return;
        };
        used[i] = true;
        for j in i + 1..w.len() {
            if used[j] {
                continue;
            }
            let f = form.get(w[i], w[j]);
            if f.is_zero() {
                continue;
            }
            used[j] = true;
            cur.push((i, j));
            rec(w, form, used, cur, &val * f, out);
            cur.pop();
            used[j] = false;
        }
        used[i] = false;
    }
    let mut out = Vec::new();
    rec(
        w,
        form,
        &mut vec![false; w.len()],
        &mut Vec::new(),
        Scalar::one(),
        &mut out,
    );
    for (chords, val) in out.iter_mut() {
        let target: Vec<usize> = chords.iter().flat_map(|&(i, j)| [i, j]).collect();
        let mut sign = false;
        for s in 0..target.len() {
            for t in s + 1..target.len() {
                if target[s] > target[t] && dim.is_odd(w[target[s]]) && dim.is_odd(w[target[t]]) {
                    sign = !sign;
                }
            }
        }
        if sign {
            *val = -val.clone();
        }
    }
    out
}

/// A chain in `g_{2k|0}` that the integration map sends back to `g`: letter
/// `p_r` at the tail of edge `r`, `q_r` at its head, one cyclic word per vertex.
pub fn integral_inverse(g: &Graph) -> Result<CEChain> {
    if g.has_legs() {
        return Err(Error::InvalidGraph(
            "integration is defined on graphs without legs".into(),
        ));
    }
    let k = g.edge_count();
    let dim = SuperDim::new(k, 0);
    let mut letter = vec![0u8; g.half_edge_count()];
    for (r, &(a, b)) in g.edges.iter().enumerate() {
        letter[a] = dim.p(r);
        letter[b] = dim.q(r);
    }
    let factors: Vec<Word> = g
        .vertices
        .iter()
        .map(|hs| hs.iter().map(|&h| letter[h]).collect())
        .collect();
    let mut out = CEChain::zero(dim);
    out.add_wedge(factors, &Scalar::one());
    Ok(out)
}

/// Every fully ordered graph isomorphic to `g` obtained by rotating vertex
/// orders, permuting vertices and flipping edges is paired here with the sign
/// relating its orientation to that of `g`.
#[cfg(test)]
pub(crate) fn random_representative(g: &Graph, rng: &mut impl rand::Rng) -> (Graph, bool) {
    use rand::seq::SliceRandom;
    let mut h = g.clone();
    for hs in h.vertices.iter_mut() {
        let r = rng.gen_range(0..hs.len());
        hs.rotate_left(r);
    }
    let mut order: Vec<usize> = (0..h.vertex_count()).collect();
    order.shuffle(rng);
    let (mut h, mut odd) = h.reorder_vertices(&order);
    for e in 0..h.edge_count() {
        if rng.gen_bool(0.5) {
            h = h.flip_edge(e);
            odd = !odd;
        }
    }
    (h, odd)
}
