//! Super vector spaces `C^{2n|m}` and sparse tensors over them.
//!
//! Basis order is `p_1..p_n, q_1..q_n, x_1..x_m`; the `x` letters are odd.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{all_perms, block_perm_embed, Perm};
use crate::scalar::Scalar;

pub type Word = Vec<u8>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SuperDim {
    pub n: usize,
    pub m: usize,
}

impl SuperDim {
    pub fn new(n: usize, m: usize) -> Self {
        SuperDim { n, m }
    }

    pub fn total(&self) -> usize {
        2 * self.n + self.m
    }

    pub fn p(&self, i: usize) -> u8 {
        assert!(i < self.n);
        i as u8
    }

    pub fn q(&self, i: usize) -> u8 {
        assert!(i < self.n);
        (self.n + i) as u8
    }

    pub fn x(&self, i: usize) -> u8 {
        assert!(i < self.m);
        (2 * self.n + i) as u8
    }

    pub fn is_odd(&self, letter: u8) -> bool {
        letter as usize >= 2 * self.n
    }

    pub fn word_odd(&self, w: &[u8]) -> bool {
        w.iter().filter(|&&l| self.is_odd(l)).count() % 2 == 1
    }

    pub fn parities(&self, w: &[u8]) -> Vec<bool> {
        w.iter().map(|&l| self.is_odd(l)).collect()
    }

    pub fn letter_name(&self, letter: u8) -> String {
        let l = letter as usize;
        if l < self.n {
            format!("p{}", l + 1)
        } else if l < 2 * self.n {
            format!("q{}", l - self.n + 1)
        } else {
            format!("x{}", l - 2 * self.n + 1)
        }
    }

    pub fn word_name(&self, w: &[u8]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join("")
    }
}

/// Rotation `z^r` of a word: the first `r` letters move to the end.
pub fn rotate_word(dim: SuperDim, w: &[u8], r: usize) -> (Word, bool) {
    let (head, tail) = w.split_at(r);
    let mut out = Vec::with_capacity(w.len());
    out.extend_from_slice(tail);
    out.extend_from_slice(head);
    (out, dim.word_odd(head) && dim.word_odd(tail))
}

/// Applies a permutation to one word, returning the new word and whether the Koszul sign is -1.
pub fn permute_word(dim: SuperDim, sigma: &Perm, w: &[u8]) -> (Word, bool) {
    let odd = sigma.koszul_odd(&dim.parities(w));
    (sigma.apply(w), odd)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperTensor {
    pub dim: SuperDim,
    pub rank: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl SuperTensor {
    pub fn zero(dim: SuperDim, rank: usize) -> Self {
        SuperTensor {
            dim,
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(dim: SuperDim, word: Word, coeff: Scalar) -> Self {
        let mut t = SuperTensor::zero(dim, word.len());
        t.add_term(word, coeff);
        t
    }

    pub fn from_terms(
        dim: SuperDim,
        rank: usize,
        terms: impl IntoIterator<Item = (Word, Scalar)>,
    ) -> Result<Self> {
        let mut t = SuperTensor::zero(dim, rank);
        for (w, c) in terms {
            if w.len() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: w.len(),
                });
            }
            if w.iter().any(|&l| l as usize >= dim.total()) {
                return Err(Error::Input(format!("letter out of range in {w:?}")));
            }
            t.add_term(w, c);
        }
        Ok(t)
    }

    pub fn add_term(&mut self, word: Word, coeff: Scalar) {
        debug_assert_eq!(word.len(), self.rank);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_signed(&mut self, word: Word, coeff: &Scalar, negate: bool) {
        self.add_term(word, if negate { -coeff } else { coeff.clone() });
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common parity of all monomials, if homogeneous and nonzero.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|w| self.dim.word_odd(w));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.parity().is_some()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = SuperTensor::zero(self.dim, self.rank);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &SuperTensor) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuperTensor) -> Result<Self> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn tensor(&self, other: &SuperTensor) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch);
        }
        let mut out = SuperTensor::zero(self.dim, self.rank + other.rank);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x * y);
            }
        }
        Ok(out)
    }

    pub fn koszul_apply(&self, sigma: &Perm) -> Result<Self> {
        if sigma.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: sigma.len(),
            });
        }
        let mut out = SuperTensor::zero(self.dim, self.rank);
        for (w, c) in &self.terms {
            let (nw, odd) = permute_word(self.dim, sigma, w);
            out.add_signed(nw, c, odd);
        }
        Ok(out)
    }

    pub fn cyclic_shift(&self) -> Result<Self> {
        if self.rank == 0 {
            return Err(Error::Input("cyclic shift of a rank-0 tensor".into()));
        }
        self.koszul_apply(&Perm::cyclic(self.rank))
    }

    pub fn norm(&self) -> Result<Self> {
        if self.rank == 0 {
            return Err(Error::Input("norm of a rank-0 tensor".into()));
        }
        let mut out = SuperTensor::zero(self.dim, self.rank);
        for (w, c) in &self.terms {
            for r in 0..self.rank {
                let (nw, odd) = rotate_word(self.dim, w, r);
                out.add_signed(nw, c, odd);
            }
        }
        Ok(out)
    }

    pub fn is_cyclic_invariant(&self) -> bool {
        self.rank == 0 || self.cyclic_shift().map(|s| s == *self).unwrap_or(false)
    }
}

impl fmt::Display for SuperTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c}){}", self.dim.word_name(w)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `sum_s sgn(s) s.(t_1 (x) ... (x) t_l)` with Koszul block signs.
pub fn antisymmetrize(tensors: &[SuperTensor]) -> Result<SuperTensor> {
    let Some(first) = tensors.first() else {
        return Err(Error::Input("antisymmetrize of an empty list".into()));
    };
    let dim = first.dim;
    let ks: Vec<usize> = tensors.iter().map(|t| t.rank).collect();
    let mut odd = Vec::with_capacity(tensors.len());
    for t in tensors {
        if t.dim != dim {
            return Err(Error::DimMismatch);
        }
        if !t.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        odd.push(t.parity().unwrap_or(false));
    }
    let mut prod = SuperTensor::monomial(dim, Vec::new(), Scalar::one());
    for t in tensors {
        prod = prod.tensor(t)?;
    }
    let mut out = SuperTensor::zero(dim, prod.rank);
    for sigma in all_perms(tensors.len()) {
        let neg = sigma.is_odd() ^ sigma.koszul_odd(&odd);
        let lifted = block_perm_embed(&sigma, &ks)?;
        for (w, c) in prod.terms() {
            // the Koszul sign of the blocks is already accounted for as a whole
            out.add_signed(lifted.apply(w), c, neg);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(n: usize, m: usize) -> SuperDim {
        SuperDim::new(n, m)
    }

    fn mono(dim: SuperDim, w: &[u8]) -> SuperTensor {
        SuperTensor::monomial(dim, w.to_vec(), Scalar::one())
    }

    #[test]
    fn koszul_examples() {
        let v = d(1, 1);
        let x = v.x(0);
        let p = v.p(0);
        let swap = Perm::from_cycles(2, &[&[1, 2]]).unwrap();
        assert_eq!(
            mono(v, &[x, x]).koszul_apply(&Perm::identity(2)).unwrap(),
            mono(v, &[x, x])
        );
        assert_eq!(
            mono(v, &[x, x]).koszul_apply(&swap).unwrap(),
            mono(v, &[x, x]).scale(&Scalar::from_int(-1))
        );
        assert_eq!(
            mono(v, &[p, x]).koszul_apply(&swap).unwrap(),
            mono(v, &[x, p])
        );
        assert!(mono(v, &[p]).koszul_apply(&swap).is_err());
    }

    #[test]
    fn cyclic_shift_examples() {
        let v = d(1, 2);
        let (p, q, x1, x2) = (v.p(0), v.q(0), v.x(0), v.x(1));
        assert_eq!(mono(v, &[p, q]).cyclic_shift().unwrap(), mono(v, &[q, p]));
        assert_eq!(
            mono(v, &[x1, x1, x1]).cyclic_shift().unwrap(),
            mono(v, &[x1, x1, x1])
        );
        let t = mono(v, &[x1, x2]);
        assert_eq!(t.cyclic_shift().unwrap().cyclic_shift().unwrap(), t);
        assert_eq!(
            t.cyclic_shift().unwrap(),
            mono(v, &[x2, x1]).scale(&Scalar::from_int(-1))
        );
    }

    #[test]
    fn norm_examples() {
        let v = d(1, 0);
        let (p, q) = (v.p(0), v.q(0));
        assert_eq!(mono(v, &[p]).norm().unwrap(), mono(v, &[p]));
        assert_eq!(
            mono(v, &[p, q]).norm().unwrap(),
            mono(v, &[p, q]).add(&mono(v, &[q, p])).unwrap()
        );
        let inv = mono(v, &[p, q]).norm().unwrap();
        assert_eq!(inv.norm().unwrap(), inv.scale(&Scalar::from_int(2)));
    }

    #[test]
    fn antisymmetrize_examples() {
        let v = d(1, 1);
        let (p, x) = (v.p(0), v.x(0));
        let t = mono(v, &[x]);
        assert_eq!(antisymmetrize(std::slice::from_ref(&t)).unwrap(), t);
        // two odd blocks: sgn = -1 and Koszul = -1
        assert_eq!(
            antisymmetrize(&[t.clone(), t.clone()]).unwrap(),
            mono(v, &[x, x]).scale(&Scalar::from_int(2))
        );
        let e = mono(v, &[p]);
        assert_eq!(
            antisymmetrize(&[e.clone(), t.clone()]).unwrap(),
            mono(v, &[p, x]).sub(&mono(v, &[x, p])).unwrap()
        );
        assert!(antisymmetrize(&[e.clone(), e]).unwrap().is_zero());
    }

    fn arb_tensor(dim: SuperDim, rank: usize) -> impl Strategy<Value = SuperTensor> {
        let letters = dim.total() as u8;
        proptest::collection::vec(
            (proptest::collection::vec(0..letters, rank), -3i64..=3),
            1..4,
        )
        .prop_map(move |terms| {
            SuperTensor::from_terms(
                dim,
                rank,
                terms.into_iter().map(|(w, c)| (w, Scalar::from_int(c))),
            )
            .unwrap()
        })
    }

    fn arb_perm(k: usize) -> impl Strategy<Value = Perm> {
        Just((0..k).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn action_is_a_homomorphism(
            (t, s, u) in (1usize..6).prop_flat_map(|k| (arb_tensor(d(1, 2), k), arb_perm(k), arb_perm(k)))
        ) {
            let lhs = t.koszul_apply(&s.compose(&u)).unwrap();
            let rhs = t.koszul_apply(&u).unwrap().koszul_apply(&s).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn full_rotation_is_identity(t in (1usize..7).prop_flat_map(|k| arb_tensor(d(1, 2), k))) {
            let mut s = t.clone();
            for _ in 0..t.rank {
                s = s.cyclic_shift().unwrap();
            }
            prop_assert_eq!(s, t.clone());
            let n = t.norm().unwrap();
            prop_assert_eq!(n.cyclic_shift().unwrap(), n);
        }

        #[test]
        fn antisymmetrize_is_alternating(
            blocks in proptest::collection::vec((1usize..3).prop_flat_map(|k| arb_tensor(d(0, 2), k)), 2..4),
            s in arb_perm(3),
        ) {
            let blocks: Vec<SuperTensor> = blocks
                .into_iter()
                .filter(|b| b.is_homogeneous() && !b.is_zero())
                .collect();
            prop_assume!(blocks.len() >= 2);
            let l = blocks.len();
            let s = if l == 3 { s } else { Perm::identity(l) };
            let odd: Vec<bool> = blocks.iter().map(|b| b.parity().unwrap()).collect();
            // put block i into slot s(i)
            let permuted = {
                let mut out = blocks.clone();
                for (i, b) in blocks.iter().enumerate() {
                    out[s.image(i)] = b.clone();
                }
                out
            };
            let sign = Scalar::sign(s.is_odd() ^ s.koszul_odd(&odd));
            let lhs = antisymmetrize(&permuted).unwrap();
            let rhs = antisymmetrize(&blocks).unwrap().scale(&sign);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
