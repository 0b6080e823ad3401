//! Legged graphs as morphisms: gluing composition and correlators.
//!
//! A legged graph with `m` incoming and `n` outgoing legs is a morphism
//! `m -> n`. Its correlator under an algebra is a tensor of rank `m + n`
//! whose slots are the incoming legs followed by the outgoing legs.
//! Composition of correlators pairs outgoing slot `j` of the first with
//! incoming slot `j` of the second through the letter form, in the same
//! order that `Graph::glue` appends the new edges.

use num_traits::Zero;

use crate::ainf::AInfinityAlgebra;
use crate::complex::GraphChain;
use crate::error::{Error, Result};
use crate::form::BilinearForm;
use crate::graph::Graph;
use crate::perm::Perm;
use crate::scalar::Scalar;
use crate::tensor::SuperTensor;

/// A linear combination of legged graphs of a fixed arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismChain {
    pub legs_in: usize,
    pub legs_out: usize,
    chain: GraphChain,
}

impl MorphismChain {
    pub fn zero(legs_in: usize, legs_out: usize) -> Self {
        MorphismChain {
            legs_in,
            legs_out,
            chain: GraphChain::zero(),
        }
    }

    pub fn from_graph(g: &Graph) -> Result<Self> {
        let mut x = MorphismChain::zero(g.legs_in.len(), g.legs_out.len());
        x.add_graph(g, &Scalar::from_int(1))?;
        Ok(x)
    }

    pub fn add_graph(&mut self, g: &Graph, coeff: &Scalar) -> Result<()> {
        if g.legs_in.len() != self.legs_in || g.legs_out.len() != self.legs_out {
            return Err(Error::Input(format!(
                "graph has arity ({}, {}), chain has ({}, {})",
                g.legs_in.len(),
                g.legs_out.len(),
                self.legs_in,
                self.legs_out
            )));
        }
        self.chain.add_graph(g, coeff);
        Ok(())
    }

    pub fn chain(&self) -> &GraphChain {
        &self.chain
    }

    pub fn is_zero(&self) -> bool {
        self.chain.is_zero()
    }

    pub fn add(&self, other: &MorphismChain) -> Result<MorphismChain> {
        if (self.legs_in, self.legs_out) != (other.legs_in, other.legs_out) {
            return Err(Error::Input("adding morphisms of different arity".into()));
        }
        Ok(MorphismChain {
            chain: self.chain.add(&other.chain),
            ..*self
        })
    }

    pub fn scale(&self, c: &Scalar) -> MorphismChain {
        MorphismChain {
            chain: self.chain.scale(c),
            ..*self
        }
    }

    /// Bilinear extension of gluing.
    pub fn compose(&self, other: &MorphismChain) -> Result<MorphismChain> {
        if self.legs_out != other.legs_in {
            return Err(Error::ArityMismatch(self.legs_out, other.legs_in));
        }
        let mut out = MorphismChain::zero(self.legs_in, other.legs_out);
        for (g1, c1) in self.chain.terms() {
            for (g2, c2) in other.chain.terms() {
                out.chain.add_graph(&g1.glue(g2)?, &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Linear extension of `correlation`.
    pub fn correlation(&self, a: &AInfinityAlgebra) -> Result<SuperTensor> {
        let mut out = SuperTensor::zero(a.dim, self.legs_in + self.legs_out);
        for (g, c) in self.chain.terms() {
            out = out.add(&correlation(a, g)?.scale(c))?;
        }
        Ok(out)
    }
}

/// The correlator of a legged graph: `h_k` at each internal vertex, internal
/// edges contracted, legs left free.
pub fn correlation(a: &AInfinityAlgebra, g: &Graph) -> Result<SuperTensor> {
    g.validate()?;
    a.correlation(g)
}

/// Composes a `(m, n)` tensor with an `(n, k)` tensor by contracting the last
/// `n` slots of `t1` against the first `n` slots of `t2`, slot by slot.
///
/// The sign is the Koszul sign of moving `a b c d` to
/// `b_1 c_1 ... b_n c_n a d`, so each contracted pair is adjacent when the
/// form is applied.
pub fn compose_tensors(
    t1: &SuperTensor,
    t2: &SuperTensor,
    n: usize,
    form: &BilinearForm,
) -> Result<SuperTensor> {
    if t1.dim != t2.dim {
        return Err(Error::DimMismatch);
    }
    if t1.rank < n || t2.rank < n {
        return Err(Error::ArityMismatch(t1.rank.min(t2.rank), n));
    }
    let dim = t1.dim;
    let m = t1.rank - n;
    let k = t2.rank - n;
    let total = m + 2 * n + k;
    // source position -> target position
    let mut images = vec![0; total];
    for i in 0..m {
        images[i] = 2 * n + i;
    }
    for j in 0..n {
        images[m + j] = 2 * j;
        images[m + n + j] = 2 * j + 1;
    }
    for i in 0..k {
        images[m + 2 * n + i] = 2 * n + m + i;
    }
    let sigma = Perm::from_images(images)?;

    let mut out = SuperTensor::zero(dim, m + k);
    for (w1, c1) in t1.terms() {
        for (w2, c2) in t2.terms() {
            let mut c = c1 * c2;
            for j in 0..n {
                c *= form.get(w1[m + j], w2[j]);
                if c.is_zero() {
                    break;
                }
            }
            if c.is_zero() {
                continue;
            }
            let word: Vec<u8> = w1.iter().chain(w2.iter()).copied().collect();
            let odd = sigma.koszul_odd(&dim.parities(&word));
            let free = w1[..m].iter().chain(&w2[n..]).copied().collect();
            out.add_signed(free, &c, odd);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityReport {
    pub glued: SuperTensor,
    pub composed: SuperTensor,
    pub holds: bool,
}

/// Compares the correlator of `glue(g1, g2)` with the composition of the
/// two correlators.
pub fn composition_compatibility(
    a: &AInfinityAlgebra,
    g1: &Graph,
    g2: &Graph,
) -> Result<CompatibilityReport> {
    let glued = correlation(a, &g1.glue(g2)?)?;
    let letters = a.letter_form()?;
    let composed = compose_tensors(
        &correlation(a, g1)?,
        &correlation(a, g2)?,
        g1.legs_out.len(),
        &letters,
    )?;
    let holds = glued == composed;
    Ok(CompatibilityReport {
        glued,
        composed,
        holds,
    })
}
