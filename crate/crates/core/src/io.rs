//! JSON documents for tensors, graphs, chains and algebras.
//!
//! Scalars are always strings such as `"3/4"` or `"1/2+1/3i"`.
//!
//! ```text
//! tensor:   {"signature": {"n": 1, "m": 1}, "rank": 3,
//!            "terms": [{"word": [0, 1, 2], "coeff": "1/1"}]}
//! graph:    {"half_edges": 6, "vertices": [[0, 1, 2], [3, 4, 5]],
//!            "edges": [[0, 3], [1, 4], [2, 5]], "legs_in": [], "legs_out": []}
//! chain:    [{"graph": <graph>, "coeff": "-1/1"}]
//! ce chain: {"signature": {...}, "terms": [{"wedge": [[0, 0, 1], [1, 1, 0]], "coeff": "1/1"}]}
//! algebra:  {"signature": {...}, "omega": [["0/1", "1/1"], ["-1/1", "0/1"]],
//!            "h": [{"k": 3, "tensor": <tensor>}], "truncation": 3, "complete": true}
//! ```
//!
//! `rank` may be omitted from a tensor when it has at least one term.
//! `complete` defaults to true: every `h_k` not listed vanishes.

use serde::{Deserialize, Serialize};

use crate::ainf::AInfinityAlgebra;
use crate::canon::{canonicalize, Orientation};
use crate::complex::GraphChain;
use crate::error::{Error, Result};
use crate::form::BilinearForm;
use crate::graph::Graph;
use crate::lie::CEChain;
use crate::scalar::Scalar;
use crate::tensor::{SuperDim, SuperTensor, Word};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub word: Word,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorDoc {
    pub signature: SuperDim,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub terms: Vec<TermDoc>,
}

impl TensorDoc {
    pub fn from_tensor(t: &SuperTensor) -> Self {
        TensorDoc {
            signature: t.dim,
            rank: Some(t.rank),
            terms: t
                .terms()
                .map(|(w, c)| TermDoc {
                    word: w.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn to_tensor(&self) -> Result<SuperTensor> {
        let rank = match (self.rank, self.terms.first()) {
            (Some(r), _) => r,
            (None, Some(t)) => t.word.len(),
            (None, None) => return Err(Error::Input("empty tensor needs an explicit rank".into())),
        };
        let d = self.signature.total();
        if let Some(t) = self
            .terms
            .iter()
            .find(|t| t.word.iter().any(|&l| l as usize >= d))
        {
            return Err(Error::Input(format!("letter out of range in {:?}", t.word)));
        }
        SuperTensor::from_terms(
            self.signature,
            rank,
            self.terms.iter().map(|t| (t.word.clone(), t.coeff.clone())),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub half_edges: usize,
    pub vertices: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub legs_in: Vec<usize>,
    #[serde(default)]
    pub legs_out: Vec<usize>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc {
            half_edges: g.half_edge_count(),
            vertices: g.vertices.clone(),
            edges: g.edges.clone(),
            legs_in: g.legs_in.clone(),
            legs_out: g.legs_out.clone(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let g = Graph::with_legs(
            self.vertices.clone(),
            self.edges.clone(),
            self.legs_in.clone(),
            self.legs_out.clone(),
        )?;
        if g.half_edge_count() != self.half_edges {
            return Err(Error::InvalidGraph(format!(
                "declared {} half-edges, found {}",
                self.half_edges,
                g.half_edge_count()
            )));
        }
        Ok(g)
    }
}

/// A canonical graph as printed by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalDoc {
    pub graph: GraphDoc,
    pub sign: i64,
    pub aut: u64,
    pub vertices: usize,
    pub edges: usize,
}

impl CanonicalDoc {
    pub fn of(g: &Graph) -> Self {
        let c = canonicalize(g);
        CanonicalDoc {
            graph: GraphDoc::from_graph(&c.graph),
            sign: c.sign.sign(),
            aut: c.aut,
            vertices: c.graph.vertex_count(),
            edges: c.graph.edge_count(),
        }
    }

    pub fn vanishes(&self) -> bool {
        self.sign == Orientation::Zero.sign()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainTermDoc {
    pub graph: GraphDoc,
    pub coeff: Scalar,
}

pub fn chain_to_doc(x: &GraphChain) -> Vec<ChainTermDoc> {
    x.terms()
        .map(|(g, c)| ChainTermDoc {
            graph: GraphDoc::from_graph(g),
            coeff: c.clone(),
        })
        .collect()
}

pub fn chain_from_doc(doc: &[ChainTermDoc]) -> Result<GraphChain> {
    let mut x = GraphChain::zero();
    for t in doc {
        x.add_graph(&t.graph.to_graph()?, &t.coeff);
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeDoc {
    pub wedge: Vec<Word>,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CEChainDoc {
    pub signature: SuperDim,
    pub terms: Vec<WedgeDoc>,
}

impl CEChainDoc {
    pub fn from_chain(x: &CEChain) -> Self {
        CEChainDoc {
            signature: x.dim,
            terms: x
                .terms()
                .map(|(fs, c)| WedgeDoc {
                    wedge: fs.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn to_chain(&self) -> Result<CEChain> {
        let mut x = CEChain::zero(self.signature);
        let d = self.signature.total();
        for t in &self.terms {
            if t.wedge.iter().flatten().any(|&l| l as usize >= d) {
                return Err(Error::Input(format!(
                    "letter out of range in {:?}",
                    t.wedge
                )));
            }
            x.add_wedge(t.wedge.clone(), &t.coeff);
        }
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianDoc {
    pub k: usize,
    pub tensor: TensorDoc,
}

fn default_complete() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub signature: SuperDim,
    pub omega: Vec<Vec<Scalar>>,
    pub h: Vec<HamiltonianDoc>,
    pub truncation: usize,
    #[serde(default = "default_complete")]
    pub complete: bool,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &AInfinityAlgebra) -> Self {
        AlgebraDoc {
            signature: a.dim,
            omega: a.omega.matrix().clone(),
            h: a.tensors()
                .map(|t| HamiltonianDoc {
                    k: t.rank,
                    tensor: TensorDoc::from_tensor(t),
                })
                .collect(),
            truncation: a.truncation,
            complete: a.complete,
        }
    }

    pub fn to_algebra(&self) -> Result<AInfinityAlgebra> {
        let omega = BilinearForm::from_matrix(self.signature, self.omega.clone())?;
        let mut hs = Vec::with_capacity(self.h.len());
        for e in &self.h {
            if e.tensor.signature != self.signature {
                return Err(Error::DimMismatch);
            }
            let t = e.tensor.to_tensor()?;
            if t.rank != e.k {
                return Err(Error::RankMismatch {
                    expected: e.k,
                    got: t.rank,
                });
            }
            hs.push(t);
        }
        AInfinityAlgebra::new(omega, hs, self.truncation, self.complete)
    }
}

pub fn algebra_to_json(a: &AInfinityAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraDoc::from_algebra(a)).expect("algebras serialize")
}

pub fn algebra_from_json(s: &str) -> Result<AInfinityAlgebra> {
    serde_json::from_str::<AlgebraDoc>(s)?.to_algebra()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::fixtures;
    use crate::feynman::integral_inverse;
    use num_traits::One;

    fn theta() -> Graph {
        Graph::from_chords(&[(1, 4), (2, 5), (3, 6)], &[3, 3]).unwrap()
    }

    #[test]
    fn tensors_roundtrip() {
        let d = SuperDim::new(1, 1);
        let t = SuperTensor::from_terms(
            d,
            3,
            [
                (vec![0, 1, 2], Scalar::ratio(-3, 4)),
                (vec![2, 2, 2], Scalar::i()),
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&TensorDoc::from_tensor(&t)).unwrap();
        assert!(s.contains("\"-3/4\""));
        let back: TensorDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_tensor().unwrap(), t);
        let bad = r#"{"signature":{"n":1,"m":0},"terms":[{"word":[5],"coeff":"1"}]}"#;
        assert!(serde_json::from_str::<TensorDoc>(bad)
            .unwrap()
            .to_tensor()
            .is_err());
        let empty = r#"{"signature":{"n":1,"m":0},"terms":[]}"#;
        assert!(serde_json::from_str::<TensorDoc>(empty)
            .unwrap()
            .to_tensor()
            .is_err());
    }

    #[test]
    fn graphs_and_chains_roundtrip() {
        let g = theta();
        let doc = GraphDoc::from_graph(&g);
        assert_eq!(doc.half_edges, 6);
        assert_eq!(doc.to_graph().unwrap(), g);
        let mut wrong = doc.clone();
        wrong.half_edges = 7;
        assert!(wrong.to_graph().is_err());
        let x = GraphChain::from_graph(&g).scale(&Scalar::ratio(2, 3));
        let s = serde_json::to_string(&chain_to_doc(&x)).unwrap();
        let back: Vec<ChainTermDoc> = serde_json::from_str(&s).unwrap();
        assert_eq!(chain_from_doc(&back).unwrap(), x);
        let c = CanonicalDoc::of(&g.flip_edge(0));
        assert_eq!((c.sign, c.aut), (-1, 6));
    }

    #[test]
    fn ce_chains_roundtrip() {
        let x = integral_inverse(&theta()).unwrap();
        let doc = CEChainDoc::from_chain(&x);
        let s = serde_json::to_string(&doc).unwrap();
        let back: CEChainDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_chain().unwrap(), x);
    }

    #[test]
    fn shipped_fixture_files_match() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        for name in fixtures::NAMES {
            let a = fixtures::by_name(name).unwrap();
            let path = dir.join(format!("{name}.json"));
            if std::env::var_os("FATGRAPH_BLESS").is_some() {
                std::fs::write(&path, algebra_to_json(&a) + "\n").unwrap();
            }
            let on_disk = std::fs::read_to_string(&path).unwrap();
            assert_eq!(algebra_from_json(&on_disk).unwrap(), a, "{name}");
        }
    }

    #[test]
    fn algebras_roundtrip() {
        for a in [
            AInfinityAlgebra::trivial(SuperDim::new(1, 1)),
            fixtures::even_sphere(),
            fixtures::odd_line(),
            fixtures::twisted_2_1(),
        ] {
            assert_eq!(algebra_from_json(&algebra_to_json(&a)).unwrap(), a);
        }
        let minimal = r#"{"signature":{"n":0,"m":1},"omega":[["1"]],"h":[],"truncation":3}"#;
        let a = algebra_from_json(minimal).unwrap();
        assert!(a.complete && a.omega.get(0, 0).is_one());
        let wrong_rank = r#"{"signature":{"n":0,"m":1},"omega":[["1"]],
            "h":[{"k":4,"tensor":{"signature":{"n":0,"m":1},"terms":[{"word":[0,0,0],"coeff":"1"}]}}],"truncation":4}"#;
        assert!(algebra_from_json(wrong_rank).is_err());
    }
}
