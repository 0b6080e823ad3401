//! Even bilinear forms on `C^{2n|m}`, their inverses and linear Darboux
//! normalization.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{inverse, mat_mul, transpose, Matrix};
use crate::scalar::Scalar;
use crate::tensor::{SuperDim, SuperTensor, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    pub dim: SuperDim,
    matrix: Matrix,
    partners: Vec<Vec<(u8, Scalar)>>,
}

impl BilinearForm {
    pub fn from_matrix(dim: SuperDim, matrix: Matrix) -> Result<Self> {
        let d = dim.total();
        if matrix.len() != d || matrix.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidForm(format!("expected a {d}x{d} matrix")));
        }
        let partners = matrix
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (j as u8, c.clone()))
                    .collect()
            })
            .collect();
        Ok(BilinearForm {
            dim,
            matrix,
            partners,
        })
    }

    /// `<p_i, q_j> = delta_ij = -<q_j, p_i>`, `<x_i, x_j> = delta_ij`.
    pub fn canonical(dim: SuperDim) -> Self {
        let d = dim.total();
        let mut m = vec![vec![Scalar::zero(); d]; d];
        for i in 0..dim.n {
            m[dim.p(i) as usize][dim.q(i) as usize] = Scalar::one();
            m[dim.q(i) as usize][dim.p(i) as usize] = -Scalar::one();
        }
        for i in 0..dim.m {
            m[dim.x(i) as usize][dim.x(i) as usize] = Scalar::one();
        }
        BilinearForm::from_matrix(dim, m).expect("square")
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn get(&self, a: u8, b: u8) -> &Scalar {
        &self.matrix[a as usize][b as usize]
    }

    /// Letters pairing nontrivially with `a` in the second slot.
    pub fn partners(&self, a: u8) -> &[(u8, Scalar)] {
        &self.partners[a as usize]
    }

    pub fn is_canonical(&self) -> bool {
        *self == BilinearForm::canonical(self.dim)
    }

    pub fn is_even(&self) -> bool {
        self.entries()
            .all(|(a, b, _)| self.dim.is_odd(a) == self.dim.is_odd(b))
    }

    pub fn is_super_skew(&self) -> bool {
        let d = self.dim.total() as u8;
        (0..d).all(|a| {
            (0..d).all(|b| {
                let both_odd = self.dim.is_odd(a) && self.dim.is_odd(b);
                let swapped = if both_odd {
                    self.get(b, a).clone()
                } else {
                    -self.get(b, a)
                };
                *self.get(a, b) == swapped
            })
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_even() {
            return Err(Error::InvalidForm(
                "form pairs letters of different parity".into(),
            ));
        }
        if !self.is_super_skew() {
            return Err(Error::InvalidForm(
                "form is not super skew-symmetric".into(),
            ));
        }
        if inverse(&self.matrix).is_none() {
            return Err(Error::DegenerateForm);
        }
        Ok(())
    }

    fn entries(&self) -> impl Iterator<Item = (u8, u8, &Scalar)> {
        self.partners
            .iter()
            .enumerate()
            .flat_map(|(a, ps)| ps.iter().map(move |(b, c)| (a as u8, *b, c)))
    }

    /// The form on the dual space making `x -> <x, ->` an isometry. In the
    /// dual basis its matrix is `(M^-1)^T`, which fixes the canonical form.
    pub fn inverse_form(&self) -> Result<BilinearForm> {
        let inv = inverse(&self.matrix).ok_or(Error::DegenerateForm)?;
        BilinearForm::from_matrix(self.dim, transpose(&inv))
    }

    /// The form `phi^T M phi`.
    pub fn pullback(&self, phi: &Matrix) -> Result<BilinearForm> {
        BilinearForm::from_matrix(
            self.dim,
            mat_mul(&transpose(phi), &mat_mul(&self.matrix, phi)),
        )
    }

    fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mut s = Scalar::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, c) in &self.partners[i] {
                let vj = &v[*j as usize];
                if !vj.is_zero() {
                    s += ui * c * vj;
                }
            }
        }
        s
    }

    /// A parity-preserving `phi` whose columns form a Darboux basis:
    /// `phi^T M phi` is the canonical form.
    pub fn darboux_linear(&self) -> Result<Matrix> {
        self.validate()?;
        let d = self.dim.total();
        let unit = |i: usize| -> Vec<Scalar> {
            (0..d)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        };
        let axpy = |v: &mut Vec<Scalar>, a: &Scalar, x: &[Scalar]| {
            for (vi, xi) in v.iter_mut().zip(x) {
                *vi += a * xi;
            }
        };

        let mut ps = Vec::new();
        let mut qs = Vec::new();
        let mut rest: Vec<Vec<Scalar>> = (0..2 * self.dim.n).map(unit).collect();
        while !rest.is_empty() {
            let v = rest.remove(0);
            let Some(k) = rest.iter().position(|w| !self.pair(&v, w).is_zero()) else {
                if v.iter().all(Scalar::is_zero) {
                    continue;
                }
                return Err(Error::Darboux(
                    "no symplectic partner in the even block".into(),
                ));
            };
            let w = rest.remove(k);
            let c = self.pair(&v, &w).inv().expect("nonzero");
            let q: Vec<Scalar> = w.iter().map(|x| x * &c).collect();
            let p = v;
            for u in rest.iter_mut() {
                let a = -self.pair(u, &q);
                let b = self.pair(u, &p);
                axpy(u, &a, &p);
                axpy(u, &b, &q);
            }
            rest.retain(|u| u.iter().any(|x| !x.is_zero()));
            ps.push(p);
            qs.push(q);
        }
        if ps.len() != self.dim.n {
            return Err(Error::Darboux("even block has the wrong rank".into()));
        }

        let mut xs = Vec::new();
        let mut rest: Vec<Vec<Scalar>> = (2 * self.dim.n..d).map(unit).collect();
        while !rest.is_empty() {
            let pick = rest
                .iter()
                .position(|u| self.pair(u, u).sqrt().is_some_and(|s| !s.is_zero()));
            let x = match pick {
                Some(k) => {
                    let u = rest.remove(k);
                    let s = self
                        .pair(&u, &u)
                        .sqrt()
                        .expect("square")
                        .inv()
                        .expect("nonzero");
                    u.iter().map(|c| c * &s).collect::<Vec<_>>()
                }
                None => {
                    let (wi, ui) = rest
                        .iter()
                        .enumerate()
                        .filter(|(_, w)| self.pair(w, w).is_zero())
                        .find_map(|(i, w)| {
                            rest.iter()
                                .position(|u| !self.pair(u, w).is_zero())
                                .map(|j| (i, j))
                        })
                        .ok_or_else(|| {
                            Error::Darboux("odd block norms are not squares in Q(i)".into())
                        })?;
                    let (w, u) = (rest[wi].clone(), rest[ui].clone());
                    // u + t w with t chosen so the norm is 1
                    let t = (Scalar::one() - self.pair(&u, &u))
                        / (Scalar::from_int(2) * self.pair(&u, &w));
                    let mut x = u;
                    axpy(&mut x, &t, &w);
                    rest.remove(ui);
                    x
                }
            };
            for u in rest.iter_mut() {
                let a = -self.pair(u, &x);
                axpy(u, &a, &x);
            }
            rest.retain(|u| u.iter().any(|c| !c.is_zero()));
            xs.push(x);
        }
        if xs.len() != self.dim.m {
            return Err(Error::Darboux("odd block has the wrong rank".into()));
        }

        let cols: Vec<Vec<Scalar>> = ps.into_iter().chain(qs).chain(xs).collect();
        Ok(transpose(&cols))
    }
}

/// Rewrites a tensor given in the old basis `e` in the basis `f_j = sum_i phi_ij e_i`.
pub fn change_basis(t: &SuperTensor, phi: &Matrix) -> Result<SuperTensor> {
    let inv = inverse(phi).ok_or(Error::DegenerateForm)?;
    let d = t.dim.total();
    // e_i = sum_j inv[j][i] f_j
    let images: Vec<Vec<(u8, Scalar)>> = (0..d)
        .map(|i| {
            (0..d)
                .filter(|&j| !inv[j][i].is_zero())
                .map(|j| (j as u8, inv[j][i].clone()))
                .collect()
        })
        .collect();
    let mut out = SuperTensor::zero(t.dim, t.rank);
    for (w, c) in t.terms() {
        let mut partial: Vec<(Word, Scalar)> = vec![(Vec::new(), c.clone())];
        for &l in w {
            partial = partial
                .into_iter()
                .flat_map(|(pw, pc)| {
                    images[l as usize].iter().map(move |(j, a)| {
                        let mut nw = pw.clone();
                        nw.push(*j);
                        (nw, &pc * a)
                    })
                })
                .collect();
        }
        for (nw, nc) in partial {
            out.add_term(nw, nc);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn canonical_is_its_own_inverse() {
        for dim in [
            SuperDim::new(1, 0),
            SuperDim::new(2, 1),
            SuperDim::new(1, 2),
        ] {
            let f = BilinearForm::canonical(dim);
            f.validate().unwrap();
            assert_eq!(f.inverse_form().unwrap(), f);
            assert_eq!(f.darboux_linear().unwrap(), identity(dim.total()));
        }
    }

    #[test]
    fn inverse_form_of_a_scaled_odd_line() {
        let f = BilinearForm::from_matrix(SuperDim::new(0, 1), m(&[&[3]])).unwrap();
        assert_eq!(f.inverse_form().unwrap().get(0, 0), &Scalar::ratio(1, 3));
        let g = BilinearForm::from_matrix(
            SuperDim::new(1, 1),
            m(&[&[0, 2, 0], &[-2, 0, 0], &[0, 0, 5]]),
        )
        .unwrap();
        assert_eq!(g.inverse_form().unwrap().inverse_form().unwrap(), g);
    }

    #[test]
    fn darboux_examples() {
        let even = BilinearForm::from_matrix(SuperDim::new(1, 0), m(&[&[0, 2], &[-2, 0]])).unwrap();
        let phi = even.darboux_linear().unwrap();
        assert!(even.pullback(&phi).unwrap().is_canonical());

        let odd = BilinearForm::from_matrix(SuperDim::new(0, 1), m(&[&[4]])).unwrap();
        let phi = odd.darboux_linear().unwrap();
        assert_eq!(phi, vec![vec![Scalar::ratio(1, 2)]]);

        // hyperbolic odd plane needs Q(i)
        let hyp = BilinearForm::from_matrix(SuperDim::new(0, 2), m(&[&[0, 1], &[1, 0]])).unwrap();
        let phi = hyp.darboux_linear().unwrap();
        assert!(hyp.pullback(&phi).unwrap().is_canonical());

        let mixed = BilinearForm::from_matrix(
            SuperDim::new(2, 1),
            m(&[
                &[0, 1, 1, 0, 0],
                &[-1, 0, 0, 3, 0],
                &[-1, 0, 0, 1, 0],
                &[0, -3, -1, 0, 0],
                &[0, 0, 0, 0, 2],
            ]),
        )
        .unwrap();
        let phi = mixed.darboux_linear();
        // an odd norm 2 is not a square in Q(i)
        assert!(matches!(phi, Err(Error::Darboux(_))));
        let mut fixed = mixed.matrix().clone();
        fixed[4][4] = Scalar::from_int(9);
        let mixed = BilinearForm::from_matrix(SuperDim::new(2, 1), fixed).unwrap();
        let phi = mixed.darboux_linear().unwrap();
        assert!(mixed.pullback(&phi).unwrap().is_canonical());
    }

    #[test]
    fn invalid_forms() {
        let bad = BilinearForm::from_matrix(SuperDim::new(1, 0), m(&[&[0, 1], &[1, 0]])).unwrap();
        assert!(bad.validate().is_err());
        let degenerate = BilinearForm::from_matrix(SuperDim::new(0, 1), m(&[&[0]])).unwrap();
        assert!(matches!(degenerate.validate(), Err(Error::DegenerateForm)));
        let mixed = BilinearForm::from_matrix(
            SuperDim::new(1, 1),
            m(&[&[0, 1, 1], &[-1, 0, 0], &[1, 0, 1]]),
        )
        .unwrap();
        assert!(!mixed.is_even());
    }

    #[test]
    fn basis_change_preserves_contraction() {
        let hyp = BilinearForm::from_matrix(SuperDim::new(0, 2), m(&[&[0, 1], &[1, 0]])).unwrap();
        let phi = hyp.darboux_linear().unwrap();
        let t =
            SuperTensor::from_terms(SuperDim::new(0, 2), 2, [(vec![0, 1], Scalar::one())]).unwrap();
        let u = change_basis(&t, &phi).unwrap();
        let lhs: Scalar = t.terms().map(|(w, c)| c * hyp.get(w[0], w[1])).sum();
        let canon = BilinearForm::canonical(SuperDim::new(0, 2));
        let rhs: Scalar = u.terms().map(|(w, c)| c * canon.get(w[0], w[1])).sum();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, Scalar::one());
    }
}
