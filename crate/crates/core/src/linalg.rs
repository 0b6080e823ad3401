//! Exact sparse elimination over `Scalar`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

pub type SparseVec = BTreeMap<usize, Scalar>;

fn axpy(y: &mut SparseVec, a: &Scalar, x: &SparseVec) {
    for (&i, xi) in x {
        let entry = y.entry(i).or_insert_with(Scalar::zero);
        *entry += a * xi;
        if entry.is_zero() {
            y.remove(&i);
        }
    }
}

#[derive(Clone, Debug)]
struct Pivot {
    row: SparseVec,
    /// the pivot row as a combination of inserted vectors
    comb: SparseVec,
}

/// Row-echelon basis keyed by leading index, optionally remembering how
/// each pivot was built from the inserted vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, Pivot>,
    track: bool,
}

impl Echelon {
    pub fn new(track: bool) -> Self {
        Echelon {
            pivots: BTreeMap::new(),
            track,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `v` against the basis. Returns the remainder and the
    /// combination `c` with `v = remainder + sum_id c[id] * inserted[id]`.
    pub fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut comb = SparseVec::new();
        let mut floor = 0;
        while let Some((&lead, coeff)) = v.range(floor..).find(|(i, _)| self.pivots.contains_key(i))
        {
            let c = coeff.clone();
            let p = &self.pivots[&lead];
            axpy(&mut v, &-&c, &p.row);
            if self.track {
                axpy(&mut comb, &c, &p.comb);
            }
            floor = lead + 1;
        }
        (v, comb)
    }

    /// Inserts a vector; returns whether it was independent.
    pub fn insert(&mut self, v: SparseVec, id: usize) -> bool {
        let (rem, comb) = self.reduce(v);
        let Some((&lead, c)) = rem.iter().next() else {
            return false;
        };
        let inv = c.inv().expect("nonzero leading entry");
        let mut row = SparseVec::new();
        axpy(&mut row, &inv, &rem);
        let mut pc = SparseVec::new();
        if self.track {
            pc.insert(id, Scalar::one());
            axpy(&mut pc, &-Scalar::one(), &comb);
            let scaled = pc.clone();
            pc.clear();
            axpy(&mut pc, &inv, &scaled);
        }
        self.pivots.insert(lead, Pivot { row, comb: pc });
        true
    }
}

/// Rank of a list of sparse vectors.
pub fn rank(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(false);
    for (id, v) in vectors.into_iter().enumerate() {
        e.insert(v, id);
    }
    e.rank()
}

/// Solves `sum_j y_j * cols[j] = b` exactly when possible.
pub fn solve(cols: &[SparseVec], b: &SparseVec) -> Option<SparseVec> {
    let mut e = Echelon::new(true);
    for (id, c) in cols.iter().enumerate() {
        e.insert(c.clone(), id);
    }
    let (rem, comb) = e.reduce(b.clone());
    rem.is_empty().then_some(comb)
}

/// Dense square or rectangular matrix, row-major.
pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].inv()?;
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let t = &f * &m[c][j];
                    m[r][j] -= &t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
