//! Minimal cyclic A-infinity algebras given by Hamiltonian tensors, their
//! partition functions and characteristic classes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::canonicalize;
use crate::complex::GraphChain;
use crate::enumerate::basis;
use crate::error::{Error, Result};
use crate::feynman::{contract, Block};
use crate::form::{change_basis, BilinearForm};
use crate::graph::Graph;
use crate::lie::{block_embeddings, exp_wedge_within, CEChain, CyclicWord};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::tensor::{SuperDim, SuperTensor, Word};

/// Hamiltonian data on `W = C^{2n|m}` (the dual of the parity-shifted
/// algebra): the inner product `omega` and tensors `h_k`, known exactly for
/// `k <= truncation`. A complete algebra has `h_k = 0` beyond the truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct AInfinityAlgebra {
    pub dim: SuperDim,
    pub omega: BilinearForm,
    h: BTreeMap<usize, SuperTensor>,
    pub truncation: usize,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub order: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// orders of `{h, h}` that were checked
    pub checked_orders: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl AInfinityAlgebra {
    pub fn new(
        omega: BilinearForm,
        hs: impl IntoIterator<Item = SuperTensor>,
        truncation: usize,
        complete: bool,
    ) -> Result<Self> {
        let dim = omega.dim;
        let mut h = BTreeMap::new();
        for t in hs {
            if t.dim != dim {
                return Err(Error::DimMismatch);
            }
            if t.rank < 3 || t.rank > truncation {
                return Err(Error::Input(format!(
                    "h_{} outside the range 3..={truncation}",
                    t.rank
                )));
            }
            if t.is_zero() {
                continue;
            }
            let k = t.rank;
            if h.insert(k, t).is_some() {
                return Err(Error::Input(format!("h_{k} given twice")));
            }
        }
        Ok(AInfinityAlgebra {
            dim,
            omega,
            h,
            truncation,
            complete,
        })
    }

    /// `h = 0` with the canonical inner product.
    pub fn trivial(dim: SuperDim) -> Self {
        AInfinityAlgebra {
            dim,
            omega: BilinearForm::canonical(dim),
            h: BTreeMap::new(),
            truncation: 3,
            complete: true,
        }
    }

    /// `h_{k+1}(e_1..e_{k+1}) = <m_k(e_1..e_k), e_{k+1}>`, where `m_k` is
    /// given as a rank `k+1` tensor whose last letter indexes the output.
    pub fn from_products(
        omega: BilinearForm,
        products: &[SuperTensor],
        truncation: usize,
        complete: bool,
    ) -> Result<Self> {
        let dim = omega.dim;
        let mut hs = Vec::new();
        for m in products {
            if m.dim != dim {
                return Err(Error::DimMismatch);
            }
            let mut h = SuperTensor::zero(dim, m.rank);
            for (w, c) in m.terms() {
                let (args, out) = w.split_at(w.len() - 1);
                for (l, f) in omega.partners(out[0]) {
                    let mut nw = args.to_vec();
                    nw.push(*l);
                    h.add_term(nw, c * f);
                }
            }
            if !h.is_cyclic_invariant() {
                return Err(Error::NonCyclic(format!(
                    "h_{} from m_{}",
                    m.rank,
                    m.rank - 1
                )));
            }
            hs.push(h);
        }
        AInfinityAlgebra::new(omega, hs, truncation, complete)
    }

    /// The same data viewed as known only up to order `k`.
    pub fn truncated(&self, k: usize) -> Result<AInfinityAlgebra> {
        if !self.complete && k > self.truncation {
            return Err(Error::Input(format!(
                "h_k is unknown beyond {}, cannot extend to {k}",
                self.truncation
            )));
        }
        let mut out = self.clone();
        out.h.retain(|&j, _| j <= k);
        out.truncation = k;
        out.complete = false;
        Ok(out)
    }

    pub fn h(&self, k: usize) -> Option<&SuperTensor> {
        self.h.get(&k)
    }

    pub fn tensors(&self) -> impl Iterator<Item = &SuperTensor> {
        self.h.values()
    }

    /// Whether `h_k` is known (possibly zero).
    pub fn knows(&self, k: usize) -> bool {
        self.complete || k <= self.truncation
    }

    /// The contraction form `<,>^{-1}` on `W`.
    pub fn letter_form(&self) -> Result<BilinearForm> {
        self.omega.inverse_form()
    }

    /// `h' = sum_k [h_k] / k` as a cyclic word.
    pub fn hamiltonian(&self) -> CyclicWord {
        let mut out = CyclicWord::zero(self.dim);
        for (k, t) in &self.h {
            let c = Scalar::ratio(1, *k as i64);
            out = out.add(&CyclicWord::from_tensor(t).scale(&c));
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut fail = |check, order, detail: String| {
            report.violations.push(Violation {
                check,
                order,
                detail,
            });
        };
        let letters = match self.omega.validate().and_then(|_| self.letter_form()) {
            Ok(l) => Some(l),
            Err(e) => {
                fail("form", None, e.to_string());
                None
            }
        };
        if !self.omega.is_even() {
            fail("form", None, "inner product is not even".into());
        }
        for (k, t) in &self.h {
            if t.parity() != Some(true) {
                fail("parity", Some(*k), format!("h_{k} is not odd"));
            }
            if !t.is_cyclic_invariant() {
                fail(
                    "cyclic",
                    Some(*k),
                    format!("h_{k} is not cyclically invariant"),
                );
            }
        }
        let Some(letters) = letters else {
            return report;
        };
        let top = if self.complete {
            (2 * self.truncation).saturating_sub(2)
        } else {
            self.truncation + 1
        };
        let h = self.hamiltonian();
        let hh = match h.bracket(&h, &letters) {
            Ok(x) => x,
            Err(e) => {
                report.violations.push(Violation {
                    check: "bracket",
                    order: None,
                    detail: e.to_string(),
                });
                return report;
            }
        };
        for r in 4..=top {
            report.checked_orders.push(r);
            if let Some((w, c)) = hh.restrict_order(r).terms().next() {
                report.violations.push(Violation {
                    check: "bracket",
                    order: Some(r),
                    detail: format!("{{h,h}} has coefficient {c} on [{}]", self.dim.word_name(w)),
                });
                break;
            }
        }
        report
    }

    fn block(&self, k: usize) -> Result<Option<Block>> {
        if !self.knows(k) {
            return Err(Error::Input(format!(
                "h_{k} is beyond the truncation order {}",
                self.truncation
            )));
        }
        Ok(self
            .h
            .get(&k)
            .map(|t| t.terms().map(|(w, c)| (w.clone(), c.clone())).collect()))
    }

    /// `Z_A(G)`, independent of the representative of the oriented graph.
    pub fn partition_value(&self, g: &Graph) -> Result<Scalar> {
        if g.has_legs() {
            return Err(Error::InvalidGraph(
                "partition functions take graphs without legs".into(),
            ));
        }
        let cg = canonicalize(g);
        if cg.is_zero() || g.vertex_count() % 2 == 1 {
            return Ok(Scalar::zero());
        }
        let amp = self.amplitude(g)?;
        Ok(amp / &Scalar::from_int(cg.aut as i64))
    }

    /// The amplitude of `h_{k_1} (x) ... (x) h_{k_m}` on a fully ordered graph.
    pub fn amplitude(&self, g: &Graph) -> Result<Scalar> {
        if g.has_legs() {
            return Err(Error::InvalidGraph(
                "partition functions take graphs without legs".into(),
            ));
        }
        Ok(self.correlation(g)?.coeff(&[]))
    }

    /// Attaches `h_k` at every vertex, contracts the internal edges with the
    /// letter form and leaves the incoming legs, then the outgoing legs, free.
    pub fn correlation(&self, g: &Graph) -> Result<SuperTensor> {
        let letters = self.letter_form()?;
        let pos = g.positions();
        let free: Vec<usize> = g
            .legs_in
            .iter()
            .chain(&g.legs_out)
            .map(|&x| pos[x])
            .collect();
        let rank = free.len();
        let mut blocks = Vec::with_capacity(g.vertex_count());
        for k in g.valencies() {
            match self.block(k)? {
                Some(b) => blocks.push(b),
                None => return Ok(SuperTensor::zero(self.dim, rank)),
            }
        }
        let pairs: Vec<(usize, usize)> = g.edges.iter().map(|&(a, b)| (pos[a], pos[b])).collect();
        let refs: Vec<&[(Word, Scalar)]> = blocks.iter().map(Vec::as_slice).collect();
        let terms = contract(self.dim, &refs, &pairs, &free, &letters);
        SuperTensor::from_terms(self.dim, rank, terms)
    }

    /// Largest valency met by an even-vertex graph with at most `max_e` edges.
    fn window_valency(max_v: usize, max_e: usize) -> usize {
        if max_v < 2 {
            0
        } else {
            (2 * max_e).saturating_sub(3)
        }
    }

    fn check_window(&self, max_v: usize, max_e: usize) -> Result<()> {
        let need = Self::window_valency(max_v, max_e);
        if !self.complete && need > self.truncation {
            return Err(Error::Input(format!(
                "window needs h_k up to k = {need}, algebra is truncated at {}",
                self.truncation
            )));
        }
        Ok(())
    }

    /// `sum_G Z_A(G) G` over canonical graphs with `v <= max_v`, `e <= max_e`.
    pub fn partition_function(
        &self,
        max_v: usize,
        max_e: usize,
        connected: bool,
    ) -> Result<GraphChain> {
        self.check_window(max_v, max_e)?;
        let mut graphs = Vec::new();
        for e in 1..=max_e {
            for v in (2..=max_v).step_by(2) {
                graphs.extend(basis(v, e, connected));
            }
        }
        let values: Vec<(Graph, Scalar)> = graphs
            .into_par_iter()
            .map(|c| self.partition_value(&c.graph).map(|z| (c.graph, z)))
            .collect::<Result<_>>()?;
        let mut out = GraphChain::unit();
        if connected {
            out = GraphChain::zero();
        }
        for (g, z) in values {
            out.add_graph(&g, &z);
        }
        Ok(out)
    }

    /// Pulls everything back along the block embeddings into the sum space.
    pub fn direct_sum(&self, other: &AInfinityAlgebra) -> Result<AInfinityAlgebra> {
        let (t, left, right) = block_embeddings(self.dim, other.dim);
        let d = t.total();
        let mut m: Matrix = vec![vec![Scalar::zero(); d]; d];
        for (alg, map) in [(self, &left as &dyn Fn(u8) -> u8), (other, &right)] {
            let n = alg.dim.total();
            for i in 0..n {
                for j in 0..n {
                    m[map(i as u8) as usize][map(j as u8) as usize] =
                        alg.omega.get(i as u8, j as u8).clone();
                }
            }
        }
        let omega = BilinearForm::from_matrix(t, m)?;
        let (truncation, complete) = match (self.complete, other.complete) {
            (true, true) => (self.truncation.max(other.truncation), true),
            (true, false) => (other.truncation, false),
            (false, true) => (self.truncation, false),
            (false, false) => (self.truncation.min(other.truncation), false),
        };
        let mut hs: BTreeMap<usize, SuperTensor> = BTreeMap::new();
        for (alg, map) in [(self, &left as &dyn Fn(u8) -> u8), (other, &right)] {
            for (&k, x) in alg.h.iter().filter(|(k, _)| **k <= truncation) {
                let mut y = SuperTensor::zero(t, k);
                for (w, c) in x.terms() {
                    y.add_term(w.iter().map(|&l| map(l)).collect(), c.clone());
                }
                let e = hs.entry(k).or_insert_with(|| SuperTensor::zero(t, k));
                *e = e.add(&y)?;
            }
        }
        AInfinityAlgebra::new(omega, hs.into_values(), truncation, complete)
    }

    /// The image of `h` under the flow of the Hamiltonian vector field of
    /// `gamma`: `sum_j ad_gamma^j (h') / j!`, kept up to the truncation order.
    pub fn twist(&self, gamma: &CyclicWord) -> Result<AInfinityAlgebra> {
        if gamma.dim != self.dim {
            return Err(Error::DimMismatch);
        }
        if gamma.is_zero() {
            return Ok(self.clone());
        }
        if gamma.parity() != Some(false) {
            return Err(Error::Input("twist needs an even generator".into()));
        }
        if gamma.orders().iter().any(|&k| k < 3) {
            return Err(Error::Input(
                "twist generators have order at least 3".into(),
            ));
        }
        let letters = self.letter_form()?;
        let k_max = self.truncation;
        let mut term = self.hamiltonian().truncate(k_max);
        let mut total = term.clone();
        let mut j = 1;
        while !term.is_zero() {
            term = gamma
                .bracket(&term, &letters)?
                .truncate(k_max)
                .scale(&Scalar::ratio(1, j));
            total = total.add(&term);
            j += 1;
        }
        let hs = (3..=k_max).map(|k| total.norm_tensor(k));
        AInfinityAlgebra::new(self.omega.clone(), hs, k_max, false)
    }

    /// `exp(h')` up to exterior degree `max_degree`, in Darboux coordinates
    /// where the letter form is the canonical one.
    pub fn characteristic_class(&self, max_degree: usize) -> Result<CEChain> {
        self.characteristic_class_within(max_degree, None)
    }

    /// As `characteristic_class`, dropping wedges of total order above `max_order`.
    pub fn characteristic_class_within(
        &self,
        max_degree: usize,
        max_order: Option<usize>,
    ) -> Result<CEChain> {
        let letters = self.letter_form()?;
        let phi = letters.darboux_linear()?;
        let mut h = CyclicWord::zero(self.dim);
        for (k, t) in &self.h {
            let c = Scalar::ratio(1, *k as i64);
            h = h.add(&CyclicWord::from_tensor(&change_basis(t, &phi)?).scale(&c));
        }
        Ok(exp_wedge_within(&h, max_degree, max_order))
    }
}

/// `sum_n x^n / n!` under disjoint union, kept within `v <= max_v`, `e <= max_e`.
pub fn exp_chain(x: &GraphChain, max_v: usize, max_e: usize) -> GraphChain {
    let inside =
        |c: &GraphChain| c.filter(|g| g.vertex_count() <= max_v && g.edge_count() <= max_e);
    let x = inside(x);
    let mut out = GraphChain::unit();
    let mut power = GraphChain::unit();
    let mut n = 1;
    loop {
        power = inside(&power.disjoint_union(&x)).scale(&Scalar::ratio(1, n));
        if power.is_zero() {
            return out;
        }
        out = out.add(&power);
        n += 1;
    }
}

/// Shipped example algebras.
pub mod fixtures {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Cohomology of the even sphere: `U = <1, t>`, `t^2 = 0`, with the
    /// pairing `<1, t> = 1`. Letters `y1 = 1*`, `y2 = t*` are both odd.
    pub fn even_sphere() -> AInfinityAlgebra {
        let dim = SuperDim::new(0, 2);
        let one = Scalar::one;
        let zero = Scalar::zero;
        let omega = BilinearForm::from_matrix(dim, vec![vec![zero(), one()], vec![one(), zero()]])
            .expect("2x2 matrix");
        // m_2(1, 1) = 1, m_2(1, t) = m_2(t, 1) = t
        let mut m2 = SuperTensor::zero(dim, 3);
        m2.add_term(vec![0, 0, 0], one());
        m2.add_term(vec![0, 1, 1], one());
        m2.add_term(vec![1, 0, 1], one());
        AInfinityAlgebra::from_products(omega, &[m2], 3, true).expect("even sphere is cyclic")
    }

    /// `h_3 = x x x` on `C^{0|1}` with `<x, x> = 1`.
    pub fn odd_line() -> AInfinityAlgebra {
        let dim = SuperDim::new(0, 1);
        let h3 = SuperTensor::monomial(dim, vec![0, 0, 0], Scalar::one());
        AInfinityAlgebra::new(BilinearForm::canonical(dim), [h3], 3, true).expect("valid data")
    }

    /// A seeded even generator of one order on the given space.
    pub fn random_gamma(dim: SuperDim, order: usize, seed: u64) -> CyclicWord {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words: Vec<Word> = crate::lie::cyclic_basis(dim, order)
            .into_iter()
            .filter(|w| !dim.word_odd(w))
            .collect();
        let mut g = CyclicWord::zero(dim);
        for w in &words {
            let c: i64 = rng.gen_range(-2..=2);
            g.add_term(w, &Scalar::from_int(c));
        }
        g
    }

    pub const TWISTED_SEED: u64 = 2024;
    pub const TWISTED_TRUNCATION: usize = 8;

    /// `odd_line (+) trivial(2|0)`, twisted by a seeded quartic generator.
    /// Cubic generators would commute with `x x x` here.
    pub fn twisted_2_1() -> AInfinityAlgebra {
        let base = odd_line()
            .direct_sum(&AInfinityAlgebra::trivial(SuperDim::new(1, 0)))
            .expect("sum");
        let base = AInfinityAlgebra {
            truncation: TWISTED_TRUNCATION,
            ..base
        };
        let gamma = random_gamma(base.dim, 4, TWISTED_SEED);
        base.twist(&gamma).expect("even quartic generator")
    }

    pub const NAMES: [&str; 4] = ["trivial", "even_sphere", "odd_line", "twisted_2_1"];

    pub fn by_name(name: &str) -> Option<AInfinityAlgebra> {
        Some(match name {
            "trivial" => AInfinityAlgebra::trivial(SuperDim::new(1, 1)),
            "even_sphere" => even_sphere(),
            "odd_line" => odd_line(),
            "twisted_2_1" => twisted_2_1(),
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::complex::{boundary, coboundary, is_boundary};
    use crate::feynman::pair_chain_graph;

    #[test]
    fn even_sphere_hamiltonian() {
        let a = even_sphere();
        let h3 = a.h(3).unwrap();
        let words: Vec<Word> = h3.terms().map(|(w, _)| w.clone()).collect();
        assert_eq!(words, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert!(h3.terms().all(|(_, c)| *c == Scalar::one()));
        assert!(a.validate().is_valid());
        assert_eq!(a.validate().checked_orders, vec![4]);
    }

    #[test]
    fn validation_examples() {
        assert!(AInfinityAlgebra::trivial(SuperDim::new(1, 1))
            .validate()
            .is_valid());
        assert!(odd_line().validate().is_valid());
        let d = SuperDim::new(1, 1);
        let mut h3 = SuperTensor::zero(d, 3);
        for w in [[0, 0, 2], [0, 2, 0], [2, 0, 0]] {
            h3.add_term(w.to_vec(), Scalar::one());
        }
        let bad = AInfinityAlgebra::new(BilinearForm::canonical(d), [h3], 3, true).unwrap();
        let report = bad.validate();
        assert!(!report.is_valid());
        assert_eq!(report.violations[0].order, Some(4));
        let noncyclic = SuperTensor::monomial(d, vec![0, 0, 2], Scalar::one());
        let report = AInfinityAlgebra::new(BilinearForm::canonical(d), [noncyclic], 3, true)
            .unwrap()
            .validate();
        assert_eq!(report.violations[0].check, "cyclic");
    }

    #[test]
    fn non_invariant_products_are_rejected() {
        let dim = SuperDim::new(0, 2);
        let omega = even_sphere().omega;
        let mut m2 = SuperTensor::zero(dim, 3);
        m2.add_term(vec![0, 1, 1], Scalar::one());
        assert!(matches!(
            AInfinityAlgebra::from_products(omega, &[m2], 3, true),
            Err(Error::NonCyclic(_))
        ));
        let zero = SuperTensor::zero(dim, 3);
        let a = AInfinityAlgebra::from_products(even_sphere().omega, &[zero], 3, true).unwrap();
        assert!(a.h(3).is_none());
    }

    /// Sums over every letter assignment to half-edges.
    fn brute_amplitude(a: &AInfinityAlgebra, g: &Graph) -> Scalar {
        let l = a.letter_form().unwrap();
        let d = a.dim.total();
        let n = g.half_edge_count();
        let chords = g.to_chords();
        let sigma = crate::feynman::chord_permutation(&chords).unwrap();
        let mut total = Scalar::zero();
        for code in 0..d.pow(n as u32) {
            let mut x = code;
            let word: Word = (0..n)
                .map(|_| {
                    let c = (x % d) as u8;
                    x /= d;
                    c
                })
                .collect();
            let mut c = Scalar::one();
            let mut off = 0;
            for k in g.valencies() {
                c = &c
                    * &a.h(k)
                        .map_or_else(Scalar::zero, |t| t.coeff(&word[off..off + k]));
                off += k;
            }
            if c.is_zero() {
                continue;
            }
            let (pw, odd) = crate::tensor::permute_word(a.dim, &sigma, &word);
            for p in pw.chunks(2) {
                c = &c * l.get(p[0], p[1]);
            }
            total += if odd { -c } else { c };
        }
        total
    }

    fn theta() -> Graph {
        Graph::from_chords(&[(1, 4), (2, 5), (3, 6)], &[3, 3]).unwrap()
    }

    fn planar_theta() -> Graph {
        Graph::from_chords(&[(1, 4), (2, 6), (3, 5)], &[3, 3]).unwrap()
    }

    #[test]
    fn partition_values_match_brute_force() {
        let a = even_sphere();
        for g in [theta(), planar_theta()] {
            assert_eq!(a.amplitude(&g).unwrap(), brute_amplitude(&a, &g));
        }
        let b = twisted_2_1();
        for e in 3..=4 {
            for c in basis(2, e, false) {
                assert_eq!(
                    b.amplitude(&c.graph).unwrap(),
                    brute_amplitude(&b, &c.graph),
                    "{:?}",
                    c.graph
                );
            }
        }
    }

    #[test]
    fn theta_values() {
        // the sphere's only trivalent contraction pairs 1 with 1
        let a = even_sphere();
        assert!(a.partition_value(&theta()).unwrap().is_zero());
        assert!(a.partition_value(&planar_theta()).unwrap().is_zero());
        let b = odd_line();
        assert_eq!(b.partition_value(&theta()).unwrap(), Scalar::ratio(-1, 6));
        assert_eq!(
            b.partition_value(&planar_theta()).unwrap(),
            Scalar::ratio(1, 6)
        );
    }

    #[test]
    fn partition_function_is_a_cycle() {
        for a in [even_sphere(), twisted_2_1()] {
            let z = a.partition_function(2, 4, false).unwrap();
            for e in 2..=3 {
                for g in crate::enumerate::basis(1, e, false) {
                    let dg = coboundary(&GraphChain::from_graph(&g.graph));
                    let v: Scalar = dg
                        .terms()
                        .map(|(h, c)| c * &a.partition_value(h).unwrap())
                        .sum();
                    assert!(v.is_zero());
                }
            }
            assert!(z.terms().all(|(g, _)| g.vertex_count() % 2 == 0));
        }
    }

    #[test]
    fn exponential_of_connected_part() {
        for a in [even_sphere(), odd_line()] {
            let z = a.partition_function(4, 6, false).unwrap();
            let zc = a.partition_function(4, 6, true).unwrap();
            assert_eq!(exp_chain(&zc, 4, 6), z);
        }
        let z = odd_line().partition_function(4, 6, false).unwrap();
        assert!(!z.restrict(4, 6).is_zero());
    }

    #[test]
    fn exp_of_a_square() {
        let g = planar_theta();
        let x = GraphChain::from_graph(&g).scale(&Scalar::from_int(3));
        let e = exp_chain(&x, 4, 6);
        let gg = g.disjoint_union(&g);
        // |K| = 2 for the swap of the two components
        assert_eq!(e.coeff(&gg), Scalar::ratio(9, 2));
        assert_eq!(exp_chain(&GraphChain::zero(), 4, 6), GraphChain::unit());
    }

    #[test]
    fn characteristic_class_matches_partition_function() {
        for a in [even_sphere(), twisted_2_1()] {
            let c = a.characteristic_class(2).unwrap();
            let f = BilinearForm::canonical(a.dim);
            for e in 3..=4 {
                for g in basis(2, e, false) {
                    assert_eq!(
                        pair_chain_graph(&c, &g.graph, &f).unwrap(),
                        a.partition_value(&g.graph).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn characteristic_class_is_a_cycle() {
        let a = even_sphere();
        let c = a.characteristic_class(5).unwrap();
        let f = BilinearForm::canonical(a.dim);
        let dc = c.differential(&f).unwrap();
        assert!(dc.filter(|fs| fs.len() <= 4).is_zero());
        assert_eq!(
            AInfinityAlgebra::trivial(SuperDim::new(1, 0))
                .characteristic_class(3)
                .unwrap(),
            CEChain::unit(SuperDim::new(1, 0))
        );
    }

    #[test]
    fn direct_sums() {
        let a = odd_line();
        let b = even_sphere();
        let s = a.direct_sum(&b).unwrap();
        assert!(s.validate().is_valid());
        let t = a
            .direct_sum(&AInfinityAlgebra::trivial(SuperDim::new(0, 0)))
            .unwrap();
        assert_eq!(t, a);
        let (_, left, right) = block_embeddings(a.dim, b.dim);
        let ca = a.characteristic_class(3).unwrap().relabel(s.dim, &left);
        let cb = b.characteristic_class(3).unwrap().relabel(s.dim, &right);
        let prod = ca.wedge(&cb).filter(|fs| fs.len() <= 3);
        assert_eq!(s.characteristic_class(3).unwrap(), prod);
    }

    #[test]
    fn twists_stay_valid_and_homologous() {
        let a = AInfinityAlgebra {
            truncation: 6,
            complete: false,
            ..even_sphere()
        };
        let z = a.partition_function(2, 4, false).unwrap();
        for seed in 0..3 {
            let gamma = random_gamma(a.dim, 4, seed);
            let b = a.twist(&gamma).unwrap();
            assert!(b.validate().is_valid());
            let zb = b.partition_function(2, 4, false).unwrap();
            let diff = zb.sub(&z);
            for (v, e) in [(2, 3), (2, 4)] {
                let part = diff.restrict(v, e);
                let witness = is_boundary(&part).unwrap().expect("boundary");
                assert_eq!(boundary(&witness), part);
            }
        }
        let t = twisted_2_1();
        assert!(t.h(4).is_none() && !t.h(5).unwrap().is_zero());
        assert!(t.validate().is_valid());
        let base = odd_line()
            .direct_sum(&AInfinityAlgebra::trivial(SuperDim::new(1, 0)))
            .unwrap();
        let base = AInfinityAlgebra {
            truncation: TWISTED_TRUNCATION,
            complete: false,
            ..base
        };
        let diff = t
            .partition_function(2, 4, false)
            .unwrap()
            .sub(&base.partition_function(2, 4, false).unwrap());
        let part = diff.restrict(2, 4);
        assert!(!part.is_zero());
        assert_eq!(
            boundary(&is_boundary(&part).unwrap().expect("boundary")),
            part
        );
    }

    #[test]
    fn truncation_is_enforced() {
        let b = twisted_2_1();
        assert!(b.partition_function(2, 6, false).is_err());
        assert!(b.partition_function(4, 5, false).is_ok());
    }
}
