//! The cyclic algebra D = K ⊕ Kx ⊕ … ⊕ Kx^{ℓ−1} with x^ℓ = z and xb = σ(b)x,
//! its left regular representation in M_ℓ(K), and the basis C_{ij}.

use serde::{Deserialize, Serialize};

use crate::field::{Field, FieldError, KElem, Ring, Sigma};
use crate::linalg::{LinalgError, Mat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivAlgError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("algebras differ")]
    AlgebraMismatch,
    #[error("expected {0} entries")]
    Length(usize),
    #[error("index out of range")]
    Index,
    #[error("matrix representation is singular")]
    Singular,
    #[error("matrix is not in the image of the regular representation")]
    NotInImage,
    #[error("exponent 2^kappa+1 not coprime to ell")]
    BadKappa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivAlgebra {
    pub ell: usize,
    pub sigma: Sigma,
}

impl DivAlgebra {
    pub fn new(ell: usize, kappa: u32) -> Result<DivAlgebra, DivAlgError> {
        if kappa == 0 {
            return Err(DivAlgError::BadKappa);
        }
        let sigma = Sigma::new(ell, kappa)?;
        Ok(DivAlgebra { ell, sigma })
    }

    /// κ = max(1, ⌈L/2⌉), which is L/2 when L is even.
    pub fn scheduled(ell: usize) -> Result<DivAlgebra, DivAlgError> {
        let l = ell.trailing_zeros();
        DivAlgebra::new(ell, l.div_ceil(2).max(1))
    }

    pub fn kappa(&self) -> u32 {
        self.sigma.kappa
    }

    pub fn zero(&self) -> DElem {
        DElem { alg: *self, coeffs: vec![KElem::zero(&self.ell); self.ell] }
    }

    pub fn scalar(&self, b: KElem) -> DElem {
        let mut e = self.zero();
        e.coeffs[0] = b;
        e
    }

    pub fn one(&self) -> DElem {
        self.scalar(KElem::one(&self.ell))
    }

    /// b·x^i.
    pub fn monomial(&self, b: KElem, i: usize) -> DElem {
        let mut e = self.zero();
        e.coeffs[i % self.ell] = b;
        if i >= self.ell {
            let z = KElem::z(self.ell);
            for _ in 0..i / self.ell {
                e.coeffs[i % self.ell] = e.coeffs[i % self.ell].mul(&z);
            }
        }
        e
    }

    pub fn x(&self) -> DElem {
        self.monomial(KElem::one(&self.ell), 1)
    }

    pub fn elem(&self, coeffs: Vec<KElem>) -> Result<DElem, DivAlgError> {
        if coeffs.len() != self.ell {
            return Err(DivAlgError::Length(self.ell));
        }
        if let Some(c) = coeffs.iter().find(|c| c.order() != self.ell) {
            return Err(FieldError::OrderMismatch(c.order(), self.ell).into());
        }
        Ok(DElem { alg: *self, coeffs })
    }

    fn sig(&self, b: &KElem, times: usize) -> KElem {
        self.sigma.apply(b, times as u64).expect("orders checked on construction")
    }

    /// M(b) = diag(b, σ(b), …, σ^{ℓ−1}(b)).
    pub fn m_scalar(&self, b: &KElem) -> Mat<KElem> {
        let l = self.ell;
        let mut m = Mat::zeros(&l, l, l);
        for r in 0..l {
            m.set(r, r, self.sig(b, r));
        }
        m
    }

    /// M(x) = cir(1, …, 1, z).
    pub fn m_x(&self) -> Mat<KElem> {
        let l = self.ell;
        let mut v = vec![KElem::one(&l); l];
        v[l - 1] = KElem::z(l);
        cir(&v).unwrap()
    }

    /// C_{ij} = M(ω^{j−1})·M(x^{i−1}), 1-based.
    pub fn basis_c(&self, i: usize, j: usize) -> Result<Mat<KElem>, DivAlgError> {
        let l = self.ell;
        if !(1..=l).contains(&i) || !(1..=l).contains(&j) {
            return Err(DivAlgError::Index);
        }
        let w = KElem::omega_pow(l, (j - 1) as i64);
        Ok(self.monomial(w, i - 1).matrix_rep())
    }

    /// K-coordinates y with Σ y_{ij} C_{ij} = a, indexed [i−1][j−1]. The
    /// system splits by cyclic diagonal; on diagonal δ = i−1 it reads
    /// a_{r, r+δ} / (z if wrapped) = Σ_j y_{ij} ω^{(j−1)e_r}, e_r the σ^{r−1}
    /// exponent. `None` when a is outside the span.
    pub fn c_coordinates(&self, a: &Mat<KElem>) -> Option<Vec<Vec<KElem>>> {
        let l = self.ell;
        if a.rows() != l || a.cols() != l {
            return None;
        }
        let vander = Mat::from_fn(&l, l, l, |r, j| {
            KElem::omega_pow(l, ((j * self.sigma.exponent(r as u64)) % l) as i64)
        });
        let zinv = KElem::z(l).inv().unwrap();
        let mut y = vec![];
        for delta in 0..l {
            let rhs = Mat::from_fn(&l, l, 1, |r, _| {
                let c = (r + delta) % l;
                let v = a.get(r, c).clone();
                if r + delta >= l {
                    v.mul(&zinv)
                } else {
                    v
                }
            });
            let sol = vander.solve_any(&rhs)?;
            y.push(sol.data().to_vec());
        }
        Some(y)
    }

    /// Σ y_{ij} C_{ij}.
    pub fn from_c_coordinates(&self, y: &[Vec<KElem>]) -> Mat<KElem> {
        let l = self.ell;
        let mut coeffs = vec![KElem::zero(&l); l];
        for (i, row) in y.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    coeffs[i] = coeffs[i].add(&c.mul(&KElem::omega_pow(l, j as i64)));
                }
            }
        }
        DElem { alg: *self, coeffs }.matrix_rep()
    }
}

/// cir(v₁, …, v_ℓ): v_i at (i, i+1), v_ℓ at (ℓ, 1).
pub fn cir<R: Ring>(v: &[R]) -> Result<Mat<R>, DivAlgError> {
    let l = v.len();
    if l == 0 {
        return Err(DivAlgError::Length(1));
    }
    let ctx = v[0].ctx();
    let mut m = Mat::zeros(&ctx, l, l);
    for (i, e) in v.iter().enumerate() {
        m.set(i, (i + 1) % l, e.clone());
    }
    if l == 1 {
        m.set(0, 0, v[0].clone());
    }
    Ok(m)
}

/// b₀ + b₁x + … + b_{ℓ−1}x^{ℓ−1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DElem {
    pub alg: DivAlgebra,
    pub coeffs: Vec<KElem>,
}

impl DElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, o: &DElem) -> Result<(), DivAlgError> {
        if self.alg != o.alg {
            return Err(DivAlgError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &DElem) -> Result<DElem, DivAlgError> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect();
        Ok(DElem { alg: self.alg, coeffs })
    }

    pub fn neg(&self) -> DElem {
        DElem { alg: self.alg, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    /// (Σ uᵢxⁱ)(Σ vⱼxʲ) = Σ uᵢσⁱ(vⱼ)x^{i+j}, folding x^ℓ = z.
    pub fn mul(&self, o: &DElem) -> Result<DElem, DivAlgError> {
        self.check(o)?;
        let l = self.alg.ell;
        let z = KElem::z(l);
        let mut out = vec![KElem::zero(&l); l];
        for (i, u) in self.coeffs.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            for (j, v) in o.coeffs.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let mut t = u.mul(&self.alg.sig(v, i));
                if i + j >= l {
                    t = t.mul(&z);
                }
                let k = (i + j) % l;
                out[k] = out[k].add(&t);
            }
        }
        Ok(DElem { alg: self.alg, coeffs: out })
    }

    /// Σᵢ M(bᵢ)·M(x)ⁱ; entry (r, c) is σ^{r}(b_{(c−r) mod ℓ}), times z when
    /// the diagonal wraps (0-based).
    pub fn matrix_rep(&self) -> Mat<KElem> {
        let l = self.alg.ell;
        let z = KElem::z(l);
        let mut m = Mat::zeros(&l, l, l);
        for (i, b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for r in 0..l {
                let mut v = self.alg.sig(b, r);
                if r + i >= l {
                    v = v.mul(&z);
                }
                m.set(r, (r + i) % l, v);
            }
        }
        m
    }

    /// Read coefficients off the first row and verify by re-encoding.
    pub fn from_matrix(alg: &DivAlgebra, m: &Mat<KElem>) -> Result<DElem, DivAlgError> {
        let l = alg.ell;
        if m.rows() != l || m.cols() != l {
            return Err(DivAlgError::Length(l));
        }
        let e = DElem { alg: *alg, coeffs: m.row(0).to_vec() };
        if e.matrix_rep() != *m {
            return Err(DivAlgError::NotInImage);
        }
        Ok(e)
    }

    /// Inverse through the matrix representation.
    pub fn inverse(&self) -> Result<DElem, DivAlgError> {
        let inv = self.matrix_rep().inverse().map_err(|e| match e {
            LinalgError::Singular => DivAlgError::Singular,
            _ => DivAlgError::Index,
        })?;
        DElem::from_matrix(&self.alg, &inv)
    }
}
