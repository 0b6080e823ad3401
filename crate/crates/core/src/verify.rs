//! Named identity suites, each checked exactly over a bounded range.
//!
//! Every suite walks its inputs in a deterministic order and stops at the
//! first counterexample, so a failing run reports the smallest one found.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ainf::{exp_chain, fixtures, AInfinityAlgebra};
use crate::complex::{
    all_classes, boundary, boundary_graph, coboundary, coboundary_graph, is_boundary, GraphChain,
};
use crate::enumerate::{all_basis, basis, enumerate_legged, partitions};
use crate::error::{Error, Result};
use crate::feynman::{integral, integral_inverse, pair_chain, pair_chain_graph};
use crate::form::BilinearForm;
use crate::graph::Graph;
use crate::lie::{CEChain, CyclicWord};
use crate::scalar::Scalar;
use crate::tcft::{compose_tensors, correlation};
use crate::tensor::{SuperDim, SuperTensor, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    D2,
    Delta2,
    Adjointness,
    Kontsevich,
    Triangle,
    Roundtrip,
    Bracket,
    Cycle,
    Exp,
    Equivalence,
    Characteristic,
    Invariance,
    Tcft,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::D2,
        Suite::Delta2,
        Suite::Adjointness,
        Suite::Kontsevich,
        Suite::Triangle,
        Suite::Roundtrip,
        Suite::Bracket,
        Suite::Cycle,
        Suite::Exp,
        Suite::Equivalence,
        Suite::Characteristic,
        Suite::Invariance,
        Suite::Tcft,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::D2 => "d2",
            Suite::Delta2 => "delta2",
            Suite::Adjointness => "adjointness",
            Suite::Kontsevich => "kontsevich",
            Suite::Triangle => "triangle",
            Suite::Roundtrip => "roundtrip",
            Suite::Bracket => "bracket",
            Suite::Cycle => "cycle",
            Suite::Exp => "exp",
            Suite::Equivalence => "equivalence",
            Suite::Characteristic => "characteristic",
            Suite::Invariance => "invariance",
            Suite::Tcft => "tcft",
        }
    }

    /// Edge bound used when none is given.
    pub fn default_edges(self) -> usize {
        match self {
            Suite::D2 | Suite::Delta2 | Suite::Exp => 6,
            Suite::Adjointness => 5,
            Suite::Tcft => 3,
            _ => 4,
        }
    }

    /// Sample count used when none is given.
    pub fn default_samples(self) -> usize {
        match self {
            Suite::Kontsevich | Suite::Triangle => 200,
            Suite::Bracket => 500,
            Suite::Invariance => 10,
            _ => 0,
        }
    }

    fn needs_algebra(self) -> bool {
        matches!(
            self,
            Suite::Cycle
                | Suite::Exp
                | Suite::Equivalence
                | Suite::Characteristic
                | Suite::Invariance
                | Suite::Tcft
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub max_edges: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    /// Legs per side for the tcft suite.
    pub legs: Option<usize>,
    /// Algebras for the algebra suites; the shipped fixtures when empty.
    pub algebras: Vec<(String, AInfinityAlgebra)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    /// identities checked
    pub checked: usize,
    /// checked identities whose two sides were nonzero
    pub nonzero: usize,
    pub counterexample: Option<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite: suite.name().to_string(),
            checked: 0,
            nonzero: 0,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Records one identity; returns false once a counterexample is known.
    fn check(&mut self, holds: bool, nonzero: bool, witness: impl FnOnce() -> String) -> bool {
        if self.counterexample.is_some() {
            return false;
        }
        self.checked += 1;
        self.nonzero += usize::from(nonzero);
        if !holds {
            self.counterexample = Some(witness());
        }
        holds
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}: {} checked, {} nonzero",
            self.suite, self.checked, self.nonzero
        )?;
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// The algebra signatures used for randomized chain checks.
pub const CHAIN_SIGNATURES: [SuperDim; 3] = [
    SuperDim { n: 1, m: 1 },
    SuperDim { n: 2, m: 0 },
    SuperDim { n: 1, m: 2 },
];

/// A few random monomial wedges of `l` factors, each of order at least 3,
/// with total order `order`.
pub fn random_chain(dim: SuperDim, l: usize, order: usize, rng: &mut impl Rng) -> CEChain {
    let lens = partitions(order, l, 3);
    let mut x = CEChain::zero(dim);
    if lens.is_empty() {
        return x;
    }
    for _ in 0..3 {
        let ls = &lens[rng.gen_range(0..lens.len())];
        let fs: Vec<Word> = ls
            .iter()
            .map(|&k| {
                (0..k)
                    .map(|_| rng.gen_range(0..dim.total() as u8))
                    .collect()
            })
            .collect();
        x.add_wedge(fs, &Scalar::from_int(rng.gen_range(-3..=3)));
    }
    x
}

/// A random homogeneous cyclic word of order `1..=4`.
pub fn random_cyclic(dim: SuperDim, rng: &mut impl Rng) -> CyclicWord {
    let k = rng.gen_range(1..=4);
    let mut g = CyclicWord::zero(dim);
    let mut parity = None;
    for _ in 0..3 {
        let w: Word = (0..k)
            .map(|_| rng.gen_range(0..dim.total() as u8))
            .collect();
        let p = dim.word_odd(&w);
        if *parity.get_or_insert(p) == p {
            g.add_term(&w, &Scalar::from_int(rng.gen_range(-2..=2)));
        }
    }
    g
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let max_e = opts.max_edges.unwrap_or(suite.default_edges());
    let samples = opts.samples.unwrap_or(suite.default_samples());
    let algebras = if suite.needs_algebra() && opts.algebras.is_empty() {
        default_algebras(suite)
    } else {
        opts.algebras.clone()
    };
    let mut r = SuiteReport::new(suite);
    match suite {
        Suite::D2 => squares(&mut r, max_e, boundary_graph, boundary),
        Suite::Delta2 => squares(&mut r, max_e, coboundary_graph, coboundary),
        Suite::Adjointness => adjointness(&mut r, max_e),
        Suite::Kontsevich => kontsevich(&mut r, max_e, samples, opts.seed)?,
        Suite::Triangle => triangle(&mut r, max_e, samples, opts.seed)?,
        Suite::Roundtrip => roundtrip(&mut r, max_e)?,
        Suite::Bracket => bracket(&mut r, samples, opts.seed)?,
        Suite::Cycle => {
            for (name, a) in &algebras {
                cycle(&mut r, name, a, max_e)?;
            }
        }
        Suite::Exp => {
            for (name, a) in &algebras {
                exponential(&mut r, name, a, max_e)?;
            }
        }
        Suite::Equivalence => {
            for (name, a) in &algebras {
                equivalence(&mut r, name, a, max_e)?;
            }
        }
        Suite::Characteristic => {
            for (name, a) in &algebras {
                characteristic(&mut r, name, a, 4, max_e)?;
            }
        }
        Suite::Invariance => {
            for (name, a) in &algebras {
                invariance(&mut r, name, a, max_e, samples, opts.seed)?;
            }
        }
        Suite::Tcft => {
            for (name, a) in &algebras {
                match opts.legs {
                    Some(legs) => tcft(&mut r, name, a, max_e, legs)?,
                    None => {
                        // three legs a side only on smaller graphs; truncated algebras
                        // carry long vertices and get one edge fewer
                        tcft(&mut r, name, a, max_e, TCFT_LEGS)?;
                        let e3 = max_e.saturating_sub(if a.complete { 1 } else { 2 });
                        tcft(&mut r, name, a, e3, TCFT_LEGS + 1)?;
                    }
                }
            }
        }
    }
    Ok(r)
}

fn default_algebras(suite: Suite) -> Vec<(String, AInfinityAlgebra)> {
    let names: &[&str] = match suite {
        // twisting needs room above the base truncation
        Suite::Invariance => &["even_sphere", "odd_line"],
        _ => &["even_sphere", "odd_line", "twisted_2_1"],
    };
    names
        .iter()
        .map(|n| {
            (
                n.to_string(),
                fixtures::by_name(n).expect("shipped fixture"),
            )
        })
        .collect()
}

/// Largest edge count whose even-vertex graphs only need known `h_k`.
fn edge_window(a: &AInfinityAlgebra, want: usize) -> usize {
    if a.complete {
        want
    } else {
        want.min((a.truncation + 3) / 2)
    }
}

fn squares(
    r: &mut SuiteReport,
    max_e: usize,
    once: fn(&Graph) -> GraphChain,
    twice: fn(&GraphChain) -> GraphChain,
) {
    let classes: Vec<Graph> = all_classes(max_e, false)
        .into_iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.graph)
        .collect();
    let bad: Vec<Option<Graph>> = classes
        .par_iter()
        .map(|g| {
            let first = once(g);
            (!twice(&first).is_zero()).then(|| g.clone())
        })
        .collect();
    for (g, b) in classes.iter().zip(bad) {
        let nonzero = !once(g).is_zero();
        if !r.check(b.is_none(), nonzero, || format!("{g:?}")) {
            break;
        }
    }
}

fn adjointness(r: &mut SuiteReport, max_e: usize) {
    let graphs: Vec<Graph> = all_basis(max_e, false)
        .into_iter()
        .map(|c| c.graph)
        .collect();
    let parts: Vec<(GraphChain, GraphChain)> = graphs
        .par_iter()
        .map(|g| (boundary_graph(g), coboundary_graph(g)))
        .collect();
    for (i, g) in graphs.iter().enumerate() {
        let (v, e) = g.bidegree();
        for (j, h) in graphs.iter().enumerate() {
            if h.bidegree() != (v - v.min(1), e - e.min(1)) || v == 0 || e == 0 {
                continue;
            }
            let lhs = parts[i].0.coeff(h);
            let rhs = parts[j].1.coeff(g);
            if !r.check(lhs == rhs, !lhs.is_zero(), || {
                format!("<dG, H> = {lhs}, <G, delta H> = {rhs}\nG = {g:?}\nH = {h:?}")
            }) {
                return;
            }
        }
    }
}

/// Shapes `(exterior degree, order)` sampled by the chain suites: orders up
/// to 8, at least one graph within the edge bound to pair with.
fn chain_shapes(max_e: usize, shift: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for order in 3..=8 {
        for l in 1..=order / 3 {
            let e = order / 2;
            if order % 2 == 0 && e >= shift && e - shift <= max_e && e >= 1 {
                out.push((l, order));
            }
        }
    }
    out
}

fn kontsevich(r: &mut SuiteReport, max_e: usize, samples: usize, seed: u64) -> Result<()> {
    let graphs: Vec<Graph> = all_basis(max_e, false)
        .into_iter()
        .map(|c| c.graph)
        .collect();
    let shapes: Vec<(usize, usize)> = chain_shapes(max_e, 1)
        .into_iter()
        .filter(|&(l, _)| l >= 2)
        .collect();
    for (si, dim) in CHAIN_SIGNATURES.into_iter().enumerate() {
        let f = BilinearForm::canonical(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (si as u64) << 32);
        let chains: Vec<CEChain> = (0..samples)
            .map(|_| {
                let (l, order) = shapes[rng.gen_range(0..shapes.len())];
                random_chain(dim, l, order, &mut rng)
            })
            .collect();
        let rows: Vec<Result<Vec<(Scalar, Scalar)>>> = chains
            .par_iter()
            .map(|x| {
                let dx = x.differential(&f)?;
                graphs
                    .iter()
                    .map(|g| {
                        let chain = GraphChain::from_graph(g);
                        Ok((
                            pair_chain(&dx, &chain, &f)?,
                            pair_chain(x, &coboundary(&chain), &f)?,
                        ))
                    })
                    .collect()
            })
            .collect();
        for (x, row) in chains.iter().zip(rows) {
            for (g, (lhs, rhs)) in graphs.iter().zip(row?) {
                let holds = lhs == rhs;
                if !r.check(holds, !lhs.is_zero(), || {
                    format!(
                        "in {dim:?}: <<dx, G>> = {lhs}, <<x, delta G>> = {rhs}\nx = {x}G = {g:?}"
                    )
                }) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn triangle(r: &mut SuiteReport, max_e: usize, samples: usize, seed: u64) -> Result<()> {
    let graphs: Vec<Graph> = all_basis(max_e, false)
        .into_iter()
        .map(|c| c.graph)
        .collect();
    let shapes = chain_shapes(max_e, 0);
    for (si, dim) in CHAIN_SIGNATURES.into_iter().enumerate() {
        let f = BilinearForm::canonical(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (si as u64) << 32 ^ 0x7472);
        let chains: Vec<CEChain> = (0..samples)
            .map(|_| {
                let (l, order) = shapes[rng.gen_range(0..shapes.len())];
                random_chain(dim, l, order, &mut rng)
            })
            .collect();
        let rows: Vec<Result<Vec<(Scalar, Scalar)>>> = chains
            .par_iter()
            .map(|x| {
                let ix = integral(x, &f)?;
                graphs
                    .iter()
                    .map(|g| Ok((pair_chain_graph(x, g, &f)?, ix.coeff(g))))
                    .collect()
            })
            .collect();
        for (x, row) in chains.iter().zip(rows) {
            for (g, (lhs, rhs)) in graphs.iter().zip(row?) {
                if !r.check(lhs == rhs, !lhs.is_zero(), || {
                    format!("in {dim:?}: <<x, G>> = {lhs}, <I(x), G> = {rhs}\nx = {x}G = {g:?}")
                }) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn roundtrip(r: &mut SuiteReport, max_e: usize) -> Result<()> {
    let graphs: Vec<Graph> = all_basis(max_e, true)
        .into_iter()
        .map(|c| c.graph)
        .filter(|g| g.edge_count() > 0)
        .collect();
    let results: Vec<Result<GraphChain>> = graphs
        .par_iter()
        .map(|g| {
            let u = integral_inverse(g)?;
            integral(&u, &BilinearForm::canonical(u.dim))
        })
        .collect();
    for (g, back) in graphs.iter().zip(results) {
        let back = back?;
        let expected = GraphChain::from_graph(g);
        if !r.check(back == expected, true, || {
            format!("I(I^-1(G)) = {back}G = {g:?}")
        }) {
            break;
        }
    }
    Ok(())
}

fn bracket(r: &mut SuiteReport, samples: usize, seed: u64) -> Result<()> {
    for (si, dim) in CHAIN_SIGNATURES.into_iter().enumerate() {
        let f = BilinearForm::canonical(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (si as u64) << 32 ^ 0x6272);
        for _ in 0..samples {
            let (a, b, c) = (
                random_cyclic(dim, &mut rng),
                random_cyclic(dim, &mut rng),
                random_cyclic(dim, &mut rng),
            );
            let (pa, pb) = (a.parity().unwrap_or(false), b.parity().unwrap_or(false));
            let ab = a.bracket(&b, &f)?;
            let ba = b.bracket(&a, &f)?;
            let skew = ab == ba.scale(&-Scalar::sign(pa && pb));
            if !r.check(skew, !ab.is_zero(), || {
                format!("skew symmetry fails for {a:?}, {b:?}")
            }) {
                return Ok(());
            }
            let lhs = ab.bracket(&c, &f)?;
            let rhs = a.bracket(&b.bracket(&c, &f)?, &f)?.sub(
                &b.bracket(&a.bracket(&c, &f)?, &f)?
                    .scale(&Scalar::sign(pa && pb)),
            );
            if !r.check(lhs == rhs, !lhs.is_zero(), || {
                format!("Jacobi fails for {a:?}, {b:?}, {c:?}")
            }) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn cycle(r: &mut SuiteReport, name: &str, a: &AInfinityAlgebra, max_e: usize) -> Result<()> {
    let report = a.validate();
    if !r.check(report.is_valid(), false, || {
        format!("{name}: {:?}", report.violations)
    }) {
        return Ok(());
    }
    // delta G has one more edge than G
    let e_max = edge_window(a, max_e + 1).saturating_sub(1).min(max_e);
    if e_max < max_e {
        r.notes.push(format!(
            "{name}: truncation limits the cycle check to {e_max} edges"
        ));
    }
    let graphs: Vec<Graph> = all_basis(e_max, false)
        .into_iter()
        .map(|c| c.graph)
        .collect();
    // partition_value short-circuits odd graphs, so the odd check uses the raw amplitude
    let values: Vec<Result<(Scalar, bool, Scalar)>> = graphs
        .par_iter()
        .map(|g| {
            let dg = coboundary_graph(g);
            let mut z = Scalar::zero();
            let mut seen = false;
            for (h, c) in dg.terms() {
                let zh = a.partition_value(h)?;
                seen |= !zh.is_zero();
                z += &(c * &zh);
            }
            let own = if g.vertex_count() % 2 == 1 {
                a.amplitude(g)?
            } else {
                Scalar::zero()
            };
            Ok((z, seen, own))
        })
        .collect();
    for (g, v) in graphs.iter().zip(values) {
        let (z, seen, own) = v?;
        if !r.check(z.is_zero(), seen, || {
            format!("{name}: Z(delta G) = {z} for G = {g:?}")
        }) {
            return Ok(());
        }
        if g.vertex_count() % 2 == 1
            && !r.check(own.is_zero(), false, || {
                format!("{name}: amplitude {own} on an odd graph {g:?}")
            })
        {
            return Ok(());
        }
    }
    Ok(())
}

fn exponential(r: &mut SuiteReport, name: &str, a: &AInfinityAlgebra, max_e: usize) -> Result<()> {
    let e = edge_window(a, max_e);
    if e < max_e {
        r.notes
            .push(format!("{name}: truncation limits the window to {e} edges"));
    }
    let z = a.partition_function(4, e, false)?;
    let zc = a.partition_function(4, e, true)?;
    let ez = exp_chain(&zc, 4, e);
    let nonzero = z.terms().any(|(g, _)| g.vertex_count() > 0);
    r.check(ez == z, nonzero, || {
        format!("{name}: exp(Z^c) - Z = {}", ez.sub(&z))
    });
    Ok(())
}

fn equivalence(r: &mut SuiteReport, name: &str, a: &AInfinityAlgebra, max_e: usize) -> Result<()> {
    let e_max = edge_window(a, max_e);
    let graphs: Vec<Graph> = all_basis(e_max, false)
        .into_iter()
        .map(|c| c.graph)
        .collect();
    let max_v = graphs.iter().map(Graph::vertex_count).max().unwrap_or(0);
    let c = a.characteristic_class(max_v)?;
    let f = BilinearForm::canonical(a.dim);
    let values: Vec<Result<(Scalar, Scalar)>> = graphs
        .par_iter()
        .map(|g| Ok((pair_chain_graph(&c, g, &f)?, a.partition_value(g)?)))
        .collect();
    for (g, v) in graphs.iter().zip(values) {
        let (lhs, rhs) = v?;
        if !r.check(lhs == rhs, !lhs.is_zero(), || {
            format!("{name}: <<c_A, G>> = {lhs}, Z_A(G) = {rhs}, G = {g:?}")
        }) {
            break;
        }
    }
    Ok(())
}

fn characteristic(
    r: &mut SuiteReport,
    name: &str,
    a: &AInfinityAlgebra,
    max_degree: usize,
    max_e: usize,
) -> Result<()> {
    // a truncated algebra is only exact on factors of known order; its class
    // is also cut off in total order to stay small
    let (known, max_order) = if a.complete {
        (usize::MAX, None)
    } else {
        (a.truncation, Some(2 * max_e + 4))
    };
    if let Some(k) = max_order {
        r.notes
            .push(format!("{name}: wedges of total order at most {k}"));
    }
    let c = a.characteristic_class_within(max_degree + 1, max_order)?;
    let f = BilinearForm::canonical(a.dim);
    let cut = max_order.map_or(usize::MAX, |k| k - 2);
    let dc = c.differential(&f)?.filter(|fs| {
        fs.len() <= max_degree
            && fs.iter().all(|w| w.len() <= known)
            && fs.iter().map(Vec::len).sum::<usize>() <= cut
    });
    r.check(dc.is_zero(), c.len() > 1, || {
        format!("{name}: d(c_A) = {dc}")
    });
    Ok(())
}

fn invariance(
    r: &mut SuiteReport,
    name: &str,
    base: &AInfinityAlgebra,
    max_e: usize,
    samples: usize,
    seed: u64,
) -> Result<()> {
    // quartic words push h_3 to h_5, h_7: keep room for the window
    let need = 2 * max_e - 3;
    let a = base.truncated(base.truncation.max(need))?;
    let z = a.partition_function(2, max_e, false)?;
    for s in 0..samples as u64 {
        let gamma = fixtures::random_gamma(a.dim, 3, seed.wrapping_add(s)).add(
            &fixtures::random_gamma(a.dim, 4, seed.wrapping_add(s) ^ 0x51),
        );
        let b = a.twist(&gamma)?;
        if !r.check(b.validate().is_valid(), false, || {
            format!("{name}: twist {s} is not valid")
        }) {
            return Ok(());
        }
        let diff = b.partition_function(2, max_e, false)?.sub(&z);
        for (v, e) in diff.bidegrees() {
            let part = diff.restrict(v, e);
            let witness = is_boundary(&part)?;
            let ok = witness.as_ref().is_some_and(|w| boundary(w) == part);
            if !r.check(ok, true, || {
                format!("{name}: twist {s}: {part} is not a boundary")
            }) {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Default bound on the legs of either side of a glued pair.
pub const TCFT_LEGS: usize = 2;

fn tcft(
    r: &mut SuiteReport,
    name: &str,
    a: &AInfinityAlgebra,
    max_e: usize,
    max_legs: usize,
) -> Result<()> {
    let fits = |g: &Graph| a.complete || g.valencies().iter().all(|&k| k <= a.truncation);
    let mut by_arity: Vec<Vec<Vec<Graph>>> = vec![vec![Vec::new(); max_legs + 1]; max_legs + 1];
    let mut skipped = 0;
    for m in 0..=max_legs {
        for n in 0..=max_legs - m {
            for e in 0..=max_e {
                for c in enumerate_legged(m, n, e) {
                    if fits(&c.graph) {
                        by_arity[m][n].push(c.graph);
                    } else {
                        skipped += 1;
                    }
                }
            }
        }
    }
    r.notes.push(format!(
        "{name}: legs a side ≤ {max_legs}, internal edges ≤ {max_e}"
    ));
    if skipped > 0 {
        r.notes.push(format!(
            "{name}: {skipped} legged graphs need h_k beyond the truncation"
        ));
    }
    let letters = a.letter_form()?;
    let corr: Vec<Vec<Vec<SuperTensor>>> = by_arity
        .iter()
        .map(|row| {
            row.iter()
                .map(|gs| {
                    gs.par_iter()
                        .map(|g| correlation(a, g))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for m in 0..=max_legs {
        for n in 1..=max_legs - m {
            for k in 0..=max_legs - n {
                for i in 0..by_arity[m][n].len() {
                    for j in 0..by_arity[n][k].len() {
                        pairs.push(((m, n, i), (n, k, j)));
                    }
                }
            }
        }
    }
    let results: Vec<Result<(bool, bool)>> = pairs
        .par_iter()
        .map(|&((m, n, i), (_, k, j))| {
            let glued = correlation(a, &by_arity[m][n][i].glue(&by_arity[n][k][j])?)?;
            let composed = compose_tensors(&corr[m][n][i], &corr[n][k][j], n, &letters)?;
            Ok((glued == composed, !glued.is_zero()))
        })
        .collect();
    for (&((m, n, i), (_, k, j)), res) in pairs.iter().zip(results) {
        let (holds, nonzero) = res?;
        let (g1, g2) = (&by_arity[m][n][i], &by_arity[n][k][j]);
        if !r.check(holds, nonzero, || {
            format!("{name}: gluing {g1:?} with {g2:?}")
        }) {
            break;
        }
    }
    Ok(())
}

/// Graphs in one bidegree, for callers that want to list a window.
pub fn window(v: usize, e: usize, connected: bool) -> Vec<Graph> {
    basis(v, e, connected)
        .into_iter()
        .map(|c| c.graph)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite, e: usize, samples: usize) -> SuiteReport {
        let opts = VerifyOptions {
            max_edges: Some(e),
            samples: Some(samples),
            seed: 5,
            legs: None,
            algebras: Vec::new(),
        };
        run(suite, &opts).unwrap()
    }

    #[test]
    fn suites_pass_on_small_bounds() {
        for (suite, e, n) in [
            (Suite::D2, 4, 0),
            (Suite::Delta2, 4, 0),
            (Suite::Adjointness, 4, 0),
            (Suite::Kontsevich, 3, 10),
            (Suite::Triangle, 3, 10),
            (Suite::Roundtrip, 3, 0),
            (Suite::Bracket, 0, 40),
            (Suite::Cycle, 3, 0),
            (Suite::Exp, 4, 0),
            (Suite::Equivalence, 3, 0),
            (Suite::Characteristic, 0, 0),
            (Suite::Invariance, 3, 2),
            (Suite::Tcft, 1, 0),
        ] {
            let r = small(suite, e, n);
            assert!(r.passed(), "{r}");
            assert!(r.checked > 0, "{r}");
        }
    }

    #[test]
    fn names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(small(Suite::Triangle, 3, 5), small(Suite::Triangle, 3, 5));
    }

    #[test]
    fn a_broken_algebra_is_reported() {
        // x x x plus a quintic term that does not commute with it
        let d = SuperDim::new(1, 1);
        let h3 = crate::SuperTensor::monomial(d, vec![2, 2, 2], Scalar::from_int(1));
        let mut h5 = crate::SuperTensor::zero(d, 5);
        h5.add_term(vec![0, 1, 2, 0, 1], Scalar::from_int(1));
        let h5 = CyclicWord::from_tensor(&h5).norm_tensor(5);
        let a = AInfinityAlgebra::new(BilinearForm::canonical(d), [h3, h5], 5, true).unwrap();
        let opts = VerifyOptions {
            max_edges: Some(3),
            algebras: vec![("broken".into(), a)],
            ..VerifyOptions::default()
        };
        let r = run(Suite::Cycle, &opts).unwrap();
        assert!(!r.passed());
    }
}
