//! Cyclic words, the Hamiltonian bracket, Chevalley-Eilenberg chains, the
//! osp action and relative coinvariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::form::BilinearForm;
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::Scalar;
use crate::tensor::{rotate_word, SuperDim, SuperTensor, Word};

/// Minimal rotation of `w` and whether reaching it costs a sign. `None`
/// when some rotation maps the word to itself with sign -1.
pub fn canonical_rotation(dim: SuperDim, w: &[u8]) -> Option<(Word, bool)> {
    if w.is_empty() {
        return Some((Vec::new(), false));
    }
    let mut best: Option<(Word, bool)> = None;
    for r in 0..w.len() {
        let (rw, odd) = rotate_word(dim, w, r);
        match &best {
            Some((b, s)) if *b == rw => {
                if *s != odd {
                    return None;
                }
            }
            Some((b, _)) if *b < rw => {}
            _ => best = Some((rw, odd)),
        }
    }
    best
}

/// A Scalar combination of cyclic words, stored by canonical rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicWord {
    pub dim: SuperDim,
    terms: BTreeMap<Word, Scalar>,
}

impl CyclicWord {
    pub fn zero(dim: SuperDim) -> Self {
        CyclicWord {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(dim: SuperDim, w: &[u8]) -> Self {
        let mut x = CyclicWord::zero(dim);
        x.add_term(w, &Scalar::one());
        x
    }

    /// The class of a tensor in the cyclic coinvariants.
    pub fn from_tensor(t: &SuperTensor) -> Self {
        let mut x = CyclicWord::zero(t.dim);
        for (w, c) in t.terms() {
            x.add_term(w, c);
        }
        x
    }

    pub fn from_terms<'a>(
        dim: SuperDim,
        terms: impl IntoIterator<Item = (&'a [u8], Scalar)>,
    ) -> Self {
        let mut x = CyclicWord::zero(dim);
        for (w, c) in terms {
            x.add_term(w, &c);
        }
        x
    }

    pub fn add_term(&mut self, w: &[u8], c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let Some((cw, odd)) = canonical_rotation(self.dim, w) else {
            return;
        };
        let e = self.terms.entry(cw).or_insert_with(Scalar::zero);
        if odd {
            *e -= c;
        } else {
            *e += c;
        }
        if e.is_zero() {
            let cw = canonical_rotation(self.dim, w).expect("checked").0;
            self.terms.remove(&cw);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u8]) -> Scalar {
        match canonical_rotation(self.dim, w) {
            None => Scalar::zero(),
            Some((cw, odd)) => {
                let c = self.terms.get(&cw).cloned().unwrap_or_else(Scalar::zero);
                if odd {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn add(&self, other: &CyclicWord) -> CyclicWord {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn sub(&self, other: &CyclicWord) -> CyclicWord {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> CyclicWord {
        if c.is_zero() {
            return CyclicWord::zero(self.dim);
        }
        CyclicWord {
            dim: self.dim,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Common parity of all monomials, if there is one.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|w| self.dim.word_odd(w));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn orders(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Vec::len).collect()
    }

    pub fn restrict_order(&self, k: usize) -> CyclicWord {
        self.filter(|w| w.len() == k)
    }

    pub fn truncate(&self, max_order: usize) -> CyclicWord {
        self.filter(|w| w.len() <= max_order)
    }

    fn filter(&self, keep: impl Fn(&Word) -> bool) -> CyclicWord {
        CyclicWord {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// The canonical representative tensor of the order-`k` part.
    pub fn to_tensor(&self, k: usize) -> SuperTensor {
        let mut t = SuperTensor::zero(self.dim, k);
        for (w, c) in self.terms.iter().filter(|(w, _)| w.len() == k) {
            t.add_term(w.clone(), c.clone());
        }
        t
    }

    /// The norm operator applied to the order-`k` representative.
    pub fn norm_tensor(&self, k: usize) -> SuperTensor {
        let mut t = SuperTensor::zero(self.dim, k);
        for (w, c) in self.terms.iter().filter(|(w, _)| w.len() == k) {
            for r in 0..k {
                let (rw, odd) = rotate_word(self.dim, w, r);
                t.add_signed(rw, c, odd);
            }
        }
        t
    }

    pub fn bracket(&self, other: &CyclicWord, form: &BilinearForm) -> Result<CyclicWord> {
        if self.dim != other.dim || form.dim != self.dim {
            return Err(Error::DimMismatch);
        }
        let mut out = CyclicWord::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                bracket_words(self.dim, form, a, b, &(ca * cb), &mut out);
            }
        }
        Ok(out)
    }

    /// Image under the letter map `l -> shift(l)`, e.g. a stabilization
    /// embedding into a larger space.
    pub fn relabel(&self, target: SuperDim, map: impl Fn(u8) -> u8) -> CyclicWord {
        let mut out = CyclicWord::zero(target);
        for (w, c) in &self.terms {
            let nw: Word = w.iter().map(|&l| map(l)).collect();
            out.add_term(&nw, c);
        }
        out
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{c}*[{}]", self.dim.word_name(w)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn bracket_words(
    dim: SuperDim,
    form: &BilinearForm,
    a: &[u8],
    b: &[u8],
    c: &Scalar,
    out: &mut CyclicWord,
) {
    let odd = |w: &[u8]| dim.word_odd(w);
    for i in 0..a.len() {
        for j in 0..b.len() {
            let f = form.get(a[i], b[j]);
            if f.is_zero() {
                continue;
            }
            let (a_pre, a_post) = (&a[..i], &a[i + 1..]);
            let (b_pre, b_post) = (&b[..j], &b[j + 1..]);
            let mut sign = dim.is_odd(a[i]) && (odd(a_post) ^ odd(b_pre));
            sign ^= odd(a_pre) && odd(a_post);
            sign ^= odd(b_pre) && odd(b_post);
            let mut w = Vec::with_capacity(a.len() + b.len() - 2);
            w.extend_from_slice(a_post);
            w.extend_from_slice(a_pre);
            w.extend_from_slice(b_post);
            w.extend_from_slice(b_pre);
            let coeff = c * f;
            out.add_term(&w, &if sign { -coeff } else { coeff });
        }
    }
}

/// Quadratic canonical words spanning `osp_{2n|m}` under the bracket.
pub fn osp_basis(dim: SuperDim) -> Vec<Word> {
    cyclic_basis(dim, 2)
}

/// Canonical nonvanishing cyclic words of length `k`.
pub fn cyclic_basis(dim: SuperDim, k: usize) -> Vec<Word> {
    let d = dim.total() as u8;
    let mut out = BTreeSet::new();
    let mut w = vec![0u8; k];
    loop {
        if let Some((cw, _)) = canonical_rotation(dim, &w) {
            out.insert(cw);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out.into_iter().collect();
            }
            i -= 1;
            w[i] += 1;
            if w[i] < d {
                break;
            }
            w[i] = 0;
        }
    }
}

/// Sorts wedge factors into canonical order by adjacent swaps, returning
/// the sign, or `None` when an even factor repeats.
fn normalize_wedge(dim: SuperDim, factors: &mut [Word]) -> Option<bool> {
    let mut odd = false;
    let key = |w: &Word| (w.len(), w.clone());
    for i in 1..factors.len() {
        let mut j = i;
        while j > 0 && key(&factors[j - 1]) > key(&factors[j]) {
            let both_odd = dim.word_odd(&factors[j - 1]) && dim.word_odd(&factors[j]);
            if !both_odd {
                odd = !odd;
            }
            factors.swap(j - 1, j);
            j -= 1;
        }
    }
    for pair in factors.windows(2) {
        if pair[0] == pair[1] && !dim.word_odd(&pair[0]) {
            return None;
        }
    }
    Some(odd)
}

/// A chain in the Chevalley-Eilenberg complex: combinations of wedges of
/// canonical cyclic words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CEChain {
    pub dim: SuperDim,
    terms: BTreeMap<Vec<Word>, Scalar>,
}

impl CEChain {
    pub fn zero(dim: SuperDim) -> Self {
        CEChain {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(dim: SuperDim) -> Self {
        let mut x = CEChain::zero(dim);
        x.add_wedge(Vec::new(), &Scalar::one());
        x
    }

    /// Exterior degree one chain.
    pub fn from_cyclic(g: &CyclicWord) -> Self {
        let mut x = CEChain::zero(g.dim);
        for (w, c) in g.terms() {
            x.add_wedge(vec![w.clone()], c);
        }
        x
    }

    /// Wedge of the given cyclic words (multilinear expansion).
    pub fn wedge_of(dim: SuperDim, gs: &[CyclicWord]) -> Self {
        gs.iter().fold(CEChain::unit(dim), |acc, g| {
            acc.wedge(&CEChain::from_cyclic(g))
        })
    }

    /// Adds `c * w_1 ^ ... ^ w_l` for arbitrary (not necessarily canonical) words.
    pub fn add_wedge(&mut self, factors: Vec<Word>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let mut odd = false;
        let mut fs = Vec::with_capacity(factors.len());
        for w in factors {
            let Some((cw, s)) = canonical_rotation(self.dim, &w) else {
                return;
            };
            odd ^= s;
            fs.push(cw);
        }
        let Some(s) = normalize_wedge(self.dim, &mut fs) else {
            return;
        };
        odd ^= s;
        self.add_raw(fs, if odd { -c } else { c.clone() });
    }

    fn add_raw(&mut self, fs: Vec<Word>, c: Scalar) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(fs) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, factors: &[Word]) -> Scalar {
        let mut probe = CEChain::zero(self.dim);
        probe.add_wedge(factors.to_vec(), &Scalar::one());
        match probe.terms.into_iter().next() {
            None => Scalar::zero(),
            Some((fs, s)) => self.terms.get(&fs).map_or_else(Scalar::zero, |c| c * &s),
        }
    }

    pub fn add(&self, other: &CEChain) -> CEChain {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_raw(f.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CEChain) -> CEChain {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> CEChain {
        if c.is_zero() {
            return CEChain::zero(self.dim);
        }
        CEChain {
            dim: self.dim,
            terms: self.terms.iter().map(|(f, x)| (f.clone(), x * c)).collect(),
        }
    }

    pub fn wedge(&self, other: &CEChain) -> CEChain {
        let mut out = CEChain::zero(self.dim);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let mut fs = f.clone();
                fs.extend(g.iter().cloned());
                out.add_wedge(fs, &(a * b));
            }
        }
        out
    }

    /// `(exterior degree, total order)` of every stored wedge.
    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms
            .keys()
            .map(|f| (f.len(), f.iter().map(Vec::len).sum()))
            .collect()
    }

    pub fn restrict(&self, l: usize, order: usize) -> CEChain {
        self.filter(|f| f.len() == l && f.iter().map(Vec::len).sum::<usize>() == order)
    }

    pub fn restrict_degree(&self, l: usize) -> CEChain {
        self.filter(|f| f.len() == l)
    }

    pub fn filter(&self, keep: impl Fn(&[Word]) -> bool) -> CEChain {
        CEChain {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(f, _)| keep(f))
                .map(|(f, c)| (f.clone(), c.clone()))
                .collect(),
        }
    }

    /// `d(g_1 ^ ... ^ g_m) = sum_{i<j} s_ij {g_i, g_j} ^ (rest)`, where `s_ij`
    /// is the sign of moving `g_i, g_j` to the front.
    pub fn differential(&self, form: &BilinearForm) -> Result<CEChain> {
        if form.dim != self.dim {
            return Err(Error::DimMismatch);
        }
        let dim = self.dim;
        let mut out = CEChain::zero(dim);
        for (fs, c) in &self.terms {
            let par: Vec<bool> = fs.iter().map(|w| dim.word_odd(w)).collect();
            for j in 0..fs.len() {
                for i in 0..j {
                    let before_i = par[..i].iter().filter(|&&p| p).count() % 2 == 1;
                    let before_j = par[..j].iter().filter(|&&p| p).count() % 2 == 1;
                    let mut odd = (par[i] && before_i) ^ (par[j] && before_j) ^ (par[i] && par[j]);
                    odd ^= (i + j + 1) % 2 == 1;
                    let mut br = CyclicWord::zero(dim);
                    bracket_words(dim, form, &fs[i], &fs[j], &Scalar::one(), &mut br);
                    if br.is_zero() {
                        continue;
                    }
                    let rest: Vec<Word> = fs
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, w)| w.clone())
                        .collect();
                    let cc = if odd { -c } else { c.clone() };
                    for (w, b) in br.terms() {
                        let mut f = vec![w.clone()];
                        f.extend(rest.iter().cloned());
                        out.add_wedge(f, &(&cc * b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Leibniz extension of the adjoint action of a quadratic Hamiltonian.
    pub fn osp_act(&self, xi: &CyclicWord, form: &BilinearForm) -> Result<CEChain> {
        if xi.orders().iter().any(|&k| k != 2) {
            return Err(Error::Input(
                "osp elements are quadratic cyclic words".into(),
            ));
        }
        if xi.dim != self.dim || form.dim != self.dim {
            return Err(Error::DimMismatch);
        }
        let dim = self.dim;
        let mut out = CEChain::zero(dim);
        for (x, cx) in xi.terms() {
            let xi_odd = dim.word_odd(x);
            for (fs, c) in &self.terms {
                let mut passed = false;
                for i in 0..fs.len() {
                    let mut br = CyclicWord::zero(dim);
                    bracket_words(dim, form, x, &fs[i], &(cx * c), &mut br);
                    let sign = xi_odd && passed;
                    for (w, b) in br.terms() {
                        let mut f = fs.clone();
                        f[i] = w.clone();
                        out.add_wedge(f, &if sign { -b } else { b.clone() });
                    }
                    passed ^= dim.word_odd(&fs[i]);
                }
            }
        }
        Ok(out)
    }

    /// Image under a letter map into another space.
    pub fn relabel(&self, target: SuperDim, map: impl Fn(u8) -> u8) -> CEChain {
        let mut out = CEChain::zero(target);
        for (fs, c) in &self.terms {
            let nfs = fs
                .iter()
                .map(|w| w.iter().map(|&l| map(l)).collect())
                .collect();
            out.add_wedge(nfs, c);
        }
        out
    }
}

impl fmt::Display for CEChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (fs, c) in &self.terms {
            let ws: Vec<String> = fs
                .iter()
                .map(|w| format!("[{}]", self.dim.word_name(w)))
                .collect();
            writeln!(
                f,
                "{c} * {}",
                if ws.is_empty() {
                    "1".into()
                } else {
                    ws.join(" ^ ")
                }
            )?;
        }
        Ok(())
    }
}

/// `sum_{i <= max_degree} g^i / i!`.
pub fn exp_wedge(g: &CyclicWord, max_degree: usize) -> CEChain {
    exp_wedge_within(g, max_degree, None)
}

/// `exp_wedge` without the wedges of total order above `max_order`.
pub fn exp_wedge_within(g: &CyclicWord, max_degree: usize, max_order: Option<usize>) -> CEChain {
    let cap = max_order.unwrap_or(usize::MAX);
    let order = |fs: &[Word]| fs.iter().map(Vec::len).sum::<usize>();
    let dim = g.dim;
    let step = CEChain::from_cyclic(g);
    let mut out = CEChain::unit(dim);
    let mut power = CEChain::unit(dim);
    for i in 1..=max_degree {
        let inv = Scalar::ratio(1, i as i64);
        let mut next = CEChain::zero(dim);
        for (f, a) in power.terms() {
            let base = order(f);
            for (w, b) in step.terms() {
                if base + order(w) > cap {
                    continue;
                }
                let mut fs = f.clone();
                fs.extend(w.iter().cloned());
                next.add_wedge(fs, &(&(a * b) * &inv));
            }
        }
        power = next;
        if power.is_zero() {
            break;
        }
        out = out.add(&power);
    }
    out
}

/// Left and right embeddings `C^{2n1|m1}, C^{2n2|m2} -> C^{2(n1+n2)|m1+m2}`.
pub fn block_embeddings(
    a: SuperDim,
    b: SuperDim,
) -> (SuperDim, impl Fn(u8) -> u8, impl Fn(u8) -> u8) {
    let t = SuperDim::new(a.n + b.n, a.m + b.m);
    let left = move |l: u8| -> u8 {
        let l = l as usize;
        let v = if l < a.n {
            l
        } else if l < 2 * a.n {
            t.n + (l - a.n)
        } else {
            2 * t.n + (l - 2 * a.n)
        };
        v as u8
    };
    let right = move |l: u8| -> u8 {
        let l = l as usize;
        let v = if l < b.n {
            a.n + l
        } else if l < 2 * b.n {
            t.n + a.n + (l - b.n)
        } else {
            2 * t.n + a.m + (l - 2 * b.n)
        };
        v as u8
    };
    (t, left, right)
}

/// All canonical wedges of exterior degree `l` and total order `order` with
/// every factor of order at least `min_order`.
pub fn wedge_basis(dim: SuperDim, l: usize, order: usize, min_order: usize) -> Vec<Vec<Word>> {
    let lens = crate::enumerate::partitions(order, l, min_order.max(1));
    let mut out = BTreeSet::new();
    let words: BTreeMap<usize, Vec<Word>> = lens
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|k| (k, cyclic_basis(dim, k)))
        .collect();
    fn rec(
        dim: SuperDim,
        lens: &[usize],
        words: &BTreeMap<usize, Vec<Word>>,
        start: usize,
        cur: &mut Vec<Word>,
        out: &mut BTreeSet<Vec<Word>>,
    ) {
        let Some((&k, rest)) = lens.split_first() else {
            let mut fs = cur.clone();
            if normalize_wedge(dim, &mut fs).is_some() {
                out.insert(fs);
            }
            return;
        };
        let ws = &words[&k];
        // factors of equal length are taken in non-decreasing order
        let same = rest.first() == Some(&k);
        for (idx, w) in ws.iter().enumerate().skip(start) {
            cur.push(w.clone());
            rec(dim, rest, words, if same { idx } else { 0 }, cur, out);
            cur.pop();
        }
    }
    for ls in &lens {
        let mut asc = ls.clone();
        asc.reverse();
        rec(dim, &asc, &words, 0, &mut Vec::new(), &mut out);
    }
    out.into_iter().collect()
}

/// The quotient of one bidegree of `C(g~)` by the span of the osp action.
pub struct Coinvariants {
    pub dim: SuperDim,
    pub l: usize,
    pub order: usize,
    pub basis: Vec<Vec<Word>>,
    index: BTreeMap<Vec<Word>, usize>,
    image: Echelon,
}

impl Coinvariants {
    pub fn new(dim: SuperDim, l: usize, order: usize, form: &BilinearForm) -> Result<Self> {
        let basis = wedge_basis(dim, l, order, 3);
        let index: BTreeMap<Vec<Word>, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        let mut image = Echelon::new(false);
        let mut id = 0;
        for xi in osp_basis(dim) {
            let xi = CyclicWord::monomial(dim, &xi);
            for f in &basis {
                let mut y = CEChain::zero(dim);
                y.add_raw(f.clone(), Scalar::one());
                let v = to_sparse(&index, &y.osp_act(&xi, form)?)?;
                image.insert(v, id);
                id += 1;
            }
        }
        Ok(Coinvariants {
            dim,
            l,
            order,
            basis,
            index,
            image,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len() - self.image.rank()
    }

    /// Normal form of `x` modulo the osp image, as coordinates on the basis.
    pub fn reduce(&self, x: &CEChain) -> Result<SparseVec> {
        if x.bidegrees().iter().any(|&b| b != (self.l, self.order)) {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.image.reduce(to_sparse(&self.index, x)?).0)
    }
}

fn to_sparse(index: &BTreeMap<Vec<Word>, usize>, x: &CEChain) -> Result<SparseVec> {
    x.terms()
        .map(|(f, c)| {
            index
                .get(f)
                .map(|&i| (i, c.clone()))
                .ok_or_else(|| Error::Input("chain leaves the coinvariant bidegree".into()))
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn cw(dim: SuperDim, terms: &[(&[u8], i64)]) -> CyclicWord {
        CyclicWord::from_terms(dim, terms.iter().map(|&(w, c)| (w, Scalar::from_int(c))))
    }

    /// The bracket computed through the Hamiltonian vector field of `a`
    /// acting as a derivation on `b`.
    pub fn bracket_oracle(dim: SuperDim, form: &BilinearForm, a: &[u8], b: &[u8]) -> CyclicWord {
        let odd = |w: &[u8]| dim.word_odd(w);
        let pa = odd(a);
        let alpha = |v: u8| -> Vec<(Word, Scalar)> {
            let pv = dim.is_odd(v);
            let mut out = Vec::new();
            for i in 0..a.len() {
                let f = form.get(a[i], v);
                if f.is_zero() {
                    continue;
                }
                let mut s = (pa && pv) ^ pa ^ pv;
                s ^= dim.is_odd(a[i]) && odd(&a[..i]);
                let hat: Word = a[..i].iter().chain(&a[i + 1..]).copied().collect();
                let (rot, rs) = rotate_word(dim, &hat, i);
                s ^= rs;
                out.push((rot, if s { -f } else { f.clone() }));
            }
            out
        };
        let mut t = SuperTensor::zero(dim, a.len() + b.len() - 2);
        for j in 0..b.len() {
            let s = pa && odd(&b[..j]);
            for (w, c) in alpha(b[j]) {
                let mut word = b[..j].to_vec();
                word.extend(w);
                word.extend_from_slice(&b[j + 1..]);
                t.add_signed(word, &c, s ^ pa);
            }
        }
        CyclicWord::from_tensor(&t)
    }

    #[test]
    fn canonical_rotation_examples() {
        let d = SuperDim::new(1, 1);
        assert_eq!(canonical_rotation(d, &[1, 0]), Some((vec![0, 1], false)));
        // x^2 and x^4 vanish, x^3 does not
        assert_eq!(canonical_rotation(d, &[2, 2]), None);
        assert_eq!(canonical_rotation(d, &[2, 2, 2, 2]), None);
        assert_eq!(
            canonical_rotation(d, &[2, 2, 2]),
            Some((vec![2, 2, 2], false))
        );
        assert_eq!(
            canonical_rotation(d, &[2, 0, 2]),
            Some((vec![0, 2, 2], true))
        );
    }

    #[test]
    fn bracket_examples() {
        let d = SuperDim::new(1, 0);
        let f = BilinearForm::canonical(d);
        let (p, q) = (d.p(0), d.q(0));
        let one = CyclicWord::monomial(d, &[]);
        assert_eq!(
            cw(d, &[(&[p], 1)])
                .bracket(&cw(d, &[(&[q], 1)]), &f)
                .unwrap(),
            one
        );
        assert_eq!(
            cw(d, &[(&[q], 1)])
                .bracket(&cw(d, &[(&[p], 1)]), &f)
                .unwrap(),
            one.scale(&-Scalar::one())
        );
        let pp = cw(d, &[(&[p, p], 1)]);
        let qq = cw(d, &[(&[q, q], 1)]);
        assert_eq!(pp.bracket(&qq, &f).unwrap(), cw(d, &[(&[p, q], 4)]));
        assert_eq!(
            bracket_oracle(d, &f, &[p, p], &[q, q]),
            cw(d, &[(&[p, q], 4)])
        );
        // the quadratic p q scales p
        let pq = cw(d, &[(&[p, q], 1)]);
        assert_eq!(
            pq.bracket(&cw(d, &[(&[p], 1)]), &f).unwrap(),
            cw(d, &[(&[p], -1)])
        );
    }

    #[test]
    fn differential_examples() {
        let d = SuperDim::new(1, 0);
        let f = BilinearForm::canonical(d);
        let (p, q) = (d.p(0), d.q(0));
        let g = CEChain::wedge_of(d, &[cw(d, &[(&[p, p], 1)]), cw(d, &[(&[q, q], 1)])]);
        let dg = g.differential(&f).unwrap();
        assert_eq!(dg, CEChain::from_cyclic(&cw(d, &[(&[p, q], 4)])));
        assert!(CEChain::from_cyclic(&cw(d, &[(&[p, p, q], 1)]))
            .differential(&f)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn wedge_signs() {
        let d = SuperDim::new(1, 1);
        let (p, q, x) = (d.p(0), d.q(0), d.x(0));
        let even = cw(d, &[(&[p, p, q], 1)]);
        let odd = cw(d, &[(&[p, q, x], 1)]);
        let a = CEChain::wedge_of(d, &[even.clone(), odd.clone()]);
        let b = CEChain::wedge_of(d, &[odd.clone(), even.clone()]);
        assert_eq!(a, b.scale(&-Scalar::one()));
        assert!(CEChain::wedge_of(d, &[even.clone(), even]).is_zero());
        assert!(!CEChain::wedge_of(d, &[odd.clone(), odd]).is_zero());
    }

    #[test]
    fn coinvariant_dimension_two_zero() {
        let d = SuperDim::new(1, 0);
        let f = BilinearForm::canonical(d);
        let c = Coinvariants::new(d, 1, 4, &f).unwrap();
        assert_eq!(c.basis.len(), 6);
        assert_eq!(c.dim(), tensor_coinvariant_dim(d, 4, &f));
        // xi . y reduces to zero
        let xi = cw(d, &[(&[d.p(0), d.q(0)], 1)]);
        let y = CEChain::from_cyclic(&cw(d, &[(&[0, 0, 0, 1], 1)]));
        assert!(c.reduce(&y.osp_act(&xi, &f).unwrap()).unwrap().is_empty());
    }

    fn bump(v: &mut SparseVec, i: usize, c: Scalar) {
        let e = v.entry(i).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            v.remove(&i);
        }
    }

    /// Dimension of `V^{(x)k}` modulo rotations and the osp action, computed
    /// on plain tensors with the action on single letters.
    fn tensor_coinvariant_dim(dim: SuperDim, k: usize, form: &BilinearForm) -> usize {
        let d = dim.total();
        let words: Vec<Word> = (0..d.pow(k as u32))
            .map(|mut x| {
                (0..k)
                    .map(|_| {
                        let l = (x % d) as u8;
                        x /= d;
                        l
                    })
                    .collect()
            })
            .collect();
        let idx: BTreeMap<Word, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut e = Echelon::new(false);
        let mut id = 0;
        for w in &words {
            let (r, s) = rotate_word(dim, w, 1);
            let mut v = SparseVec::new();
            v.insert(idx[w], Scalar::one());
            let c = if s { Scalar::one() } else { -Scalar::one() };
            bump(&mut v, idx[&r], c);
            e.insert(v, id);
            id += 1;
        }
        for xi in osp_basis(dim) {
            let xi_w = CyclicWord::monomial(dim, &xi);
            let xi_odd = dim.word_odd(&xi);
            for w in &words {
                let mut v = SparseVec::new();
                for pos in 0..k {
                    let img = xi_w
                        .bracket(&CyclicWord::monomial(dim, &[w[pos]]), form)
                        .unwrap();
                    let sign = xi_odd && dim.word_odd(&w[..pos]);
                    for (l, c) in img.terms() {
                        let mut nw = w.clone();
                        nw[pos] = l[0];
                        let c = if sign { -c } else { c.clone() };
                        bump(&mut v, idx[&nw], c);
                    }
                }
                e.insert(v, id);
                id += 1;
            }
        }
        words.len() - e.rank()
    }

    #[test]
    fn coinvariants_match_tensor_computation() {
        for (dim, k) in [
            (SuperDim::new(1, 0), 6),
            (SuperDim::new(1, 1), 4),
            (SuperDim::new(0, 2), 4),
        ] {
            let f = BilinearForm::canonical(dim);
            let c = Coinvariants::new(dim, 1, k, &f).unwrap();
            assert_eq!(
                c.dim(),
                tensor_coinvariant_dim(dim, k, &f),
                "{dim:?} order {k}"
            );
        }
    }

    #[test]
    fn embeddings_are_brackets_maps() {
        let a = SuperDim::new(1, 0);
        let b = SuperDim::new(1, 1);
        let (t, left, right) = block_embeddings(a, b);
        let ft = BilinearForm::canonical(t);
        let g = cw(a, &[(&[0, 0, 1], 1)]);
        let h = cw(a, &[(&[1, 1, 0], 1)]);
        let lhs = g
            .bracket(&h, &BilinearForm::canonical(a))
            .unwrap()
            .relabel(t, &left);
        let rhs = g
            .relabel(t, &left)
            .bracket(&h.relabel(t, &left), &ft)
            .unwrap();
        assert_eq!(lhs, rhs);
        let u = cw(b, &[(&[0, 2, 2, 1], 1)]);
        assert!(g
            .relabel(t, &left)
            .bracket(&u.relabel(t, &right), &ft)
            .unwrap()
            .is_zero());
    }

    pub fn arb_word(dim: SuperDim, min: usize, max: usize) -> impl Strategy<Value = Word> {
        let d = dim.total() as u8;
        prop::collection::vec(0..d, min..=max)
    }

    fn homogeneous(dim: SuperDim, ws: Vec<(Word, i64)>) -> CyclicWord {
        let mut x = CyclicWord::zero(dim);
        let parity = ws.first().map(|(w, _)| dim.word_odd(w));
        for (w, c) in ws {
            if Some(dim.word_odd(&w)) == parity {
                x.add_term(&w, &Scalar::from_int(c));
            }
        }
        x
    }

    fn arb_cyclic(dim: SuperDim) -> impl Strategy<Value = CyclicWord> {
        prop::collection::vec((arb_word(dim, 1, 4), -3i64..=3), 1..4)
            .prop_map(move |ws| homogeneous(dim, ws))
    }

    fn dims() -> impl Strategy<Value = SuperDim> {
        prop_oneof![
            Just(SuperDim::new(1, 1)),
            Just(SuperDim::new(2, 0)),
            Just(SuperDim::new(1, 2))
        ]
    }

    proptest! {
        #[test]
        fn bracket_matches_vector_field_oracle(
            (dim, a, b) in dims().prop_flat_map(|d| (Just(d), arb_word(d, 1, 5), arb_word(d, 1, 5)))
        ) {
            let f = BilinearForm::canonical(dim);
            let lhs = CyclicWord::monomial(dim, &a).bracket(&CyclicWord::monomial(dim, &b), &f).unwrap();
            prop_assert_eq!(lhs, bracket_oracle(dim, &f, &a, &b));
        }

        #[test]
        fn skew_symmetry(
            (dim, a, b) in dims().prop_flat_map(|d| (Just(d), arb_cyclic(d), arb_cyclic(d)))
        ) {
            let f = BilinearForm::canonical(dim);
            let (pa, pb) = (a.parity().unwrap_or(false), b.parity().unwrap_or(false));
            let ab = a.bracket(&b, &f).unwrap();
            let ba = b.bracket(&a, &f).unwrap();
            prop_assert_eq!(ab, ba.scale(&-Scalar::sign(pa && pb)));
        }

        #[test]
        fn jacobi(
            (dim, a, b, c) in dims().prop_flat_map(|d| (Just(d), arb_cyclic(d), arb_cyclic(d), arb_cyclic(d)))
        ) {
            let f = BilinearForm::canonical(dim);
            let (pa, pb) = (a.parity().unwrap_or(false), b.parity().unwrap_or(false));
            let lhs = a.bracket(&b, &f).unwrap().bracket(&c, &f).unwrap();
            let r1 = a.bracket(&b.bracket(&c, &f).unwrap(), &f).unwrap();
            let r2 = b.bracket(&a.bracket(&c, &f).unwrap(), &f).unwrap();
            prop_assert_eq!(lhs, r1.sub(&r2.scale(&Scalar::sign(pa && pb))));
        }

        #[test]
        fn differential_squares_to_zero(
            (dim, gs) in dims().prop_flat_map(|d| (Just(d), prop::collection::vec(arb_cyclic(d), 1..5)))
        ) {
            let f = BilinearForm::canonical(dim);
            let x = CEChain::wedge_of(dim, &gs);
            prop_assert!(x.differential(&f).unwrap().differential(&f).unwrap().is_zero());
        }

        #[test]
        fn osp_action_commutes_with_differential(
            (dim, xi, gs) in dims().prop_flat_map(|d| (
                Just(d),
                prop::collection::vec(prop::sample::select(osp_basis(d)), 1..3),
                prop::collection::vec(arb_cyclic(d), 1..4),
            ))
        ) {
            let f = BilinearForm::canonical(dim);
            let xi = homogeneous(dim, xi.into_iter().map(|w| (w, 1)).collect());
            let x = CEChain::wedge_of(dim, &gs);
            let lhs = x.osp_act(&xi, &f).unwrap().differential(&f).unwrap();
            let rhs = x.differential(&f).unwrap().osp_act(&xi, &f).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
