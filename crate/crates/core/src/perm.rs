//! Permutations acting on tensor positions.
//!
//! A permutation `s` acts on a word by putting the letter at position `i`
//! into position `s(i)`, so composition is `(s * t)(i) = s(t(i))`.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// From disjoint cycles written with 1-based points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let b = cyc[(k + 1) % cyc.len()];
                if a == 0 || a > n || b == 0 || b > n {
                    return Err(Error::InvalidPermutation(format!("{cycles:?}")));
                }
                img[a - 1] = b - 1;
            }
        }
        Perm::from_images(img)
    }

    /// The generator `z_k`, the cycle `(k k-1 ... 1)`.
    pub fn cyclic(k: usize) -> Self {
        Perm((0..k).map(|i| (i + k - 1) % k.max(1)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&j| self.0[j]).collect())
    }

    /// True when the permutation is odd.
    pub fn is_odd(&self) -> bool {
        odd_inversions(&self.0, |_| true)
    }

    /// Parity of the Koszul sign for moving letters of the given parities.
    pub fn koszul_odd(&self, odd: &[bool]) -> bool {
        debug_assert_eq!(odd.len(), self.0.len());
        odd_inversions(&self.0, |i| odd[i])
    }

    pub fn apply<T: Clone>(&self, items: &[T]) -> Vec<T> {
        let mut out = items.to_vec();
        for (i, item) in items.iter().enumerate() {
            out[self.0[i]] = item.clone();
        }
        out
    }
}

fn odd_inversions(img: &[usize], mut active: impl FnMut(usize) -> bool) -> bool {
    let mut odd = false;
    for i in 0..img.len() {
        if !active(i) {
            continue;
        }
        for j in i + 1..img.len() {
            if active(j) && img[i] > img[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Sign parity of a vertex/position reordering given as the new order of old indices.
pub fn order_is_odd(order: &[usize]) -> bool {
    odd_inversions(order, |_| true)
}

/// Lifts a permutation of `m` blocks of sizes `ks` to the positions of their concatenation.
pub fn block_perm_embed(sigma: &Perm, ks: &[usize]) -> Result<Perm> {
    if sigma.len() != ks.len() {
        return Err(Error::RankMismatch {
            expected: ks.len(),
            got: sigma.len(),
        });
    }
    let inv = sigma.inverse();
    let mut new_offset = vec![0; ks.len()];
    let mut acc = 0;
    for j in 0..ks.len() {
        new_offset[j] = acc;
        acc += ks[inv.image(j)];
    }
    let mut img = Vec::with_capacity(acc);
    for (b, &k) in ks.iter().enumerate() {
        let base = new_offset[sigma.image(b)];
        img.extend(base..base + k);
    }
    Perm::from_images(img)
}

/// Koszul sign parity of permuting homogeneous blocks with the given parities.
pub fn koszul_block_odd(sigma: &Perm, block_odd: &[bool]) -> bool {
    sigma.koszul_odd(block_odd)
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Perm(cur.clone()));
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_generator_rotates_left() {
        let z = Perm::cyclic(4);
        assert_eq!(z.apply(&[1, 2, 3, 4]), vec![2, 3, 4, 1]);
        let mut p = Perm::identity(4);
        for _ in 0..4 {
            p = z.compose(&p);
        }
        assert_eq!(p, Perm::identity(4));
    }

    #[test]
    fn block_embedding_matches_diagram() {
        let swap = Perm::from_cycles(2, &[&[1, 2]]).unwrap();
        let p = block_perm_embed(&swap, &[2, 3]).unwrap();
        assert_eq!(p.apply(&[1, 2, 3, 4, 5]), vec![3, 4, 5, 1, 2]);
        let p = block_perm_embed(&swap, &[1, 1]).unwrap();
        assert_eq!(p, swap);
        assert_eq!(
            block_perm_embed(&Perm::identity(3), &[2, 1, 3]).unwrap(),
            Perm::identity(6)
        );
    }

    #[test]
    fn block_embedding_is_a_homomorphism() {
        let ks = [2, 1, 3];
        for s in all_perms(3) {
            for t in all_perms(3) {
                let lhs = block_perm_embed(&s.compose(&t), &ks).unwrap();
                let inner = block_perm_embed(&t, &ks).unwrap();
                let permuted: Vec<usize> = t.apply(&ks);
                let outer = block_perm_embed(&s, &permuted).unwrap();
                assert_eq!(lhs, outer.compose(&inner));
            }
        }
    }

    #[test]
    fn signs() {
        assert_eq!(all_perms(4).len(), 24);
        assert_eq!(all_perms(4).iter().filter(|p| p.is_odd()).count(), 12);
        let swap = Perm::from_cycles(2, &[&[1, 2]]).unwrap();
        assert!(swap.koszul_odd(&[true, true]));
        assert!(!swap.koszul_odd(&[false, true]));
    }
}
