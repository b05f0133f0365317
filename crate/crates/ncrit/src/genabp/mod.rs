//! Generalized ABPs: layered programs whose edges carry Σ a·x·b with matrix
//! (or D-) coefficients. Evaluation under both inclusion maps, the block
//! cyclic substitution Z̃, the q₀ conjugation bridging I_d⊗a and a⊗I_d, the
//! ROABP reduction and a strong hitting set over M_{dℓ}(K).

mod roabp;

use serde::Serialize;

use crate::divalg::DivAlgebra;
use crate::field::{KElem, MPoly, Rat, Ring};
use crate::hitset::{Certification, HitPoint, HittingSet, Meta};
use crate::linalg::modp::{certify_nonsingular, CertMethod};
use crate::linalg::Mat;
use crate::realization::{GenLinForm, Iota, LinTerm};

pub use roabp::{roabp_hitting_set, Roabp, RoabpBackend, RoabpHits};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenAbpError {
    #[error("point dimension {dim} is not a multiple of the coefficient dimension {m}")]
    Dim { dim: usize, m: usize },
    #[error("point has {got} matrices, program needs {need}")]
    Arity { need: usize, got: usize },
    #[error("exponent collision in the Kronecker encoding: {0:?} and {1:?}")]
    Collision((usize, usize, usize), (usize, usize, usize)),
    #[error("parameters exceed the hitting-set backends: {0}")]
    Infeasible(String),
}

/// c · L₁ ⋯ L_d · b with c a 1×r row, each L_t an r×r matrix of generalized
/// linear forms, b an r×1 column; coefficients are m×m.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenABP<R: Ring> {
    pub width: usize,
    pub m: usize,
    pub nvars: usize,
    pub c: Vec<Mat<R>>,
    pub layers: Vec<Vec<Vec<GenLinForm<R>>>>,
    pub b: Vec<Mat<R>>,
}

impl<R: Ring> GenABP<R> {
    pub fn degree(&self) -> usize {
        self.layers.len()
    }

    /// The single word a₀·x_{k₁}·a₁ ⋯ x_{k_d}·a_d as a width-1 program.
    pub fn word(coeffs: &[Mat<R>], vars: &[usize]) -> GenABP<R> {
        assert_eq!(coeffs.len(), vars.len() + 1);
        let m = coeffs[0].rows();
        let id = Mat::identity(coeffs[0].ctx(), m);
        let layers = vars
            .iter()
            .zip(&coeffs[1..])
            .map(|(&k, a)| vec![vec![GenLinForm { terms: vec![LinTerm { a: id.clone(), var: k, b: a.clone() }] }]])
            .collect();
        GenABP { width: 1, m, nvars: vars.iter().copied().max().unwrap_or(0), c: vec![coeffs[0].clone()], layers, b: vec![id] }
    }

    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S + Copy) -> GenABP<S> {
        let mm = |a: &Mat<R>| a.convert(ctx, f);
        GenABP {
            width: self.width,
            m: self.m,
            nvars: self.nvars,
            c: self.c.iter().map(mm).collect(),
            layers: self
                .layers
                .iter()
                .map(|l| {
                    l.iter()
                        .map(|row| {
                            row.iter()
                                .map(|form| GenLinForm {
                                    terms: form.terms.iter().map(|t| LinTerm { a: mm(&t.a), var: t.var, b: mm(&t.b) }).collect(),
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
            b: self.b.iter().map(mm).collect(),
        }
    }
}

/// Evaluate at a tuple of (k·m)×(k·m) matrices, coefficients embedded by ι.
pub fn eval_genabp<R: Ring>(abp: &GenABP<R>, point: &[Mat<R>], iota: Iota) -> Result<Mat<R>, GenAbpError> {
    if point.len() < abp.nvars {
        return Err(GenAbpError::Arity { need: abp.nvars, got: point.len() });
    }
    let Some(first) = point.first() else {
        return Err(GenAbpError::Arity { need: 1, got: 0 });
    };
    let dim = first.rows();
    if dim % abp.m != 0 || point.iter().any(|p| p.rows() != dim || p.cols() != dim) {
        return Err(GenAbpError::Dim { dim, m: abp.m });
    }
    let k = dim / abp.m;
    let ctx = first.ctx().clone();
    let r = abp.width;
    let mut row: Vec<Mat<R>> = abp.c.iter().map(|c| iota.apply(c, k)).collect();
    for layer in &abp.layers {
        let mut next = vec![Mat::zeros(&ctx, dim, dim); r];
        for (i, ri) in row.iter().enumerate() {
            if ri.is_zero() {
                continue;
            }
            for (j, nj) in next.iter_mut().enumerate() {
                let f = &layer[i][j];
                if f.terms.is_empty() {
                    continue;
                }
                *nj = nj.add(&ri.mul(&f.eval(point, abp.m, iota)));
            }
        }
        row = next;
    }
    let mut acc = Mat::zeros(&ctx, dim, dim);
    for (ri, bi) in row.iter().zip(&abp.b) {
        acc = acc.add(&ri.mul(&iota.apply(bi, k)));
    }
    Ok(acc)
}

/// The permutation with 1 at (i·d + j, (j−1)·ℓ + i + 1), 1-based,
/// i = 0..ℓ−1, j = 1..d. Satisfies q₀·(I_d⊗a)·q₀⁻¹ = a⊗I_d.
pub fn q0_matrix<R: Ring>(ctx: &R::Ctx, ell: usize, d: usize) -> Mat<R> {
    let mut q = Mat::zeros(ctx, ell * d, ell * d);
    for i in 0..ell {
        for j in 1..=d {
            q.set(i * d + j - 1, (j - 1) * ell + i, R::one(ctx));
        }
    }
    q
}

/// The fresh commuting variables y_{ijkl} (i, j ≤ ℓ; k ≤ n; l ≤ d) and the
/// block cyclic matrices Z̃_k with Z̃_{kl} = Σ_{ij} y_{ijkl} C_{ij}.
#[derive(Debug, Clone, Copy)]
pub struct ShiftedSubstitution {
    pub alg: DivAlgebra,
    pub n: usize,
    pub d: usize,
}

pub type SymMat = Mat<MPoly<KElem>>;

impl ShiftedSubstitution {
    pub fn new(alg: DivAlgebra, n: usize, d: usize) -> ShiftedSubstitution {
        ShiftedSubstitution { alg, n, d }
    }

    /// Variable id of y_{ijkl}, all indices 1-based.
    pub fn var_id(&self, i: usize, j: usize, k: usize, l: usize) -> u32 {
        let ell = self.alg.ell;
        ((((l - 1) * self.n + (k - 1)) * ell + (i - 1)) * ell + (j - 1)) as u32
    }

    /// Inverse of `var_id`.
    pub fn var_index(&self, id: u32) -> (usize, usize, usize, usize) {
        let ell = self.alg.ell;
        let mut v = id as usize;
        let j = v % ell + 1;
        v /= ell;
        let i = v % ell + 1;
        v /= ell;
        let k = v % self.n + 1;
        (i, j, k, v / self.n + 1)
    }

    /// π_i(t) = i + t − 1 mod d, 1-based.
    pub fn pi(&self, i: usize, t: usize) -> usize {
        (i + t - 2) % self.d + 1
    }

    fn sym(&self, a: &Mat<KElem>) -> SymMat {
        a.convert(&self.alg.ell, |e| MPoly::constant(e.clone()))
    }

    pub fn block(&self, k: usize, l: usize) -> SymMat {
        let ell = self.alg.ell;
        let mut acc = Mat::zeros(&ell, ell, ell);
        for i in 1..=ell {
            for j in 1..=ell {
                let c = self.sym(&self.alg.basis_c(i, j).unwrap());
                acc = acc.add(&c.scale(&MPoly::var(&ell, self.var_id(i, j, k, l))));
            }
        }
        acc
    }

    /// Z̃_k: block (l, l+1) = Z̃_{kl}, block (d, 1) = Z̃_{kd}.
    pub fn z_tilde(&self, k: usize) -> SymMat {
        let ell = self.alg.ell;
        let mut z = Mat::zeros(&ell, ell * self.d, ell * self.d);
        for l in 1..=self.d {
            z.set_sub((l - 1) * ell, (l % self.d) * ell, &self.block(k, l));
        }
        z
    }

    /// Evaluate under ι'(a) = I_d⊗a at the symbolic Z̃ point.
    pub fn eval_symbolic(&self, abp: &GenABP<KElem>) -> SymMat {
        let ell = self.alg.ell;
        let sym = abp.map(&ell, |e| MPoly::constant(e.clone()));
        let point: Vec<SymMat> = (1..=self.n.max(abp.nvars)).map(|k| self.z_tilde(k)).collect();
        eval_genabp(&sym, &point, Iota::KronLeft).expect("dimensions fixed by construction")
    }

    /// Numeric Z̃_k with y_{ijkl} ↦ y(i, j, k, l).
    pub fn z_tilde_at(&self, k: usize, y: impl Fn(usize, usize, usize, usize) -> Rat) -> Mat<KElem> {
        let ell = self.alg.ell;
        let mut z = Mat::zeros(&ell, ell * self.d, ell * self.d);
        for l in 1..=self.d {
            let mut blk: Mat<KElem> = Mat::zeros(&ell, ell, ell);
            for i in 1..=ell {
                for j in 1..=ell {
                    let v = y(i, j, k, l);
                    if v.is_zero() {
                        continue;
                    }
                    blk = blk.add(&self.alg.basis_c(i, j).unwrap().scale(&KElem::rat(ell, v)));
                }
            }
            z.set_sub((l - 1) * ell, (l % self.d) * ell, &blk);
        }
        z
    }
}

/// One diagonal block B^{π_i}: an ℓ×ℓ-valued set-multilinear program whose
/// layer t is linear in the y_{··k,π_i(t)} block. Row c is ℓ × rℓ, each layer
/// rℓ × rℓ, column b is rℓ × ℓ.
#[derive(Debug, Clone)]
pub struct SetMultilinear {
    pub c: SymMat,
    pub layers: Vec<SymMat>,
    /// π_i(t) for each layer.
    pub blocks: Vec<usize>,
    pub b: SymMat,
}

impl SetMultilinear {
    pub fn expand(&self) -> SymMat {
        let mut acc = self.c.clone();
        for l in &self.layers {
            acc = acc.mul(l);
        }
        acc.mul(&self.b)
    }
}

/// The d diagonal blocks of B evaluated at Z̃ under I_d⊗a.
pub fn shifted_cyclic_eval(abp: &GenABP<KElem>, sub: &ShiftedSubstitution) -> Vec<SetMultilinear> {
    let ell = sub.alg.ell;
    let r = abp.width;
    let sym = |a: &Mat<KElem>| sub.sym(a);
    let to_row = |v: &[Mat<KElem>]| {
        let mut m = Mat::zeros(&ell, ell, r * ell);
        for (j, x) in v.iter().enumerate() {
            m.set_sub(0, j * ell, &sym(x));
        }
        m
    };
    let to_col = |v: &[Mat<KElem>]| {
        let mut m = Mat::zeros(&ell, r * ell, ell);
        for (j, x) in v.iter().enumerate() {
            m.set_sub(j * ell, 0, &sym(x));
        }
        m
    };
    (1..=sub.d)
        .map(|i| {
            let blocks: Vec<usize> = (1..=abp.degree()).map(|t| sub.pi(i, t)).collect();
            let layers = abp
                .layers
                .iter()
                .zip(&blocks)
                .map(|(layer, &l)| {
                    let mut m = Mat::zeros(&ell, r * ell, r * ell);
                    for (p, row) in layer.iter().enumerate() {
                        for (q, form) in row.iter().enumerate() {
                            let mut acc = Mat::zeros(&ell, ell, ell);
                            for t in &form.terms {
                                acc = acc.add(&sym(&t.a).mul(&sub.block(t.var, l)).mul(&sym(&t.b)));
                            }
                            m.set_sub(p * ell, q * ell, &acc);
                        }
                    }
                    m
                })
                .collect();
            SetMultilinear { c: to_row(&abp.c), layers, blocks, b: to_col(&abp.b) }
        })
        .collect()
}

/// Kronecker exponent (B²)i + B·j + k of y_{ijkl}, B = base.
pub fn encoding_exponent(base: usize, i: usize, j: usize, k: usize) -> usize {
    base * base * i + base * j + k
}

/// ℓ+1 when ℓ > max(n, d), else max(ℓ, n, d) + 1.
pub fn encoding_base(ell: usize, n: usize, d: usize) -> usize {
    if ell > n.max(d) {
        ell + 1
    } else {
        ell.max(n).max(d) + 1
    }
}

/// Checks injectivity of the encoding over [ℓ]×[ℓ]×[n].
pub fn check_encoding(ell: usize, n: usize, base: usize) -> Result<usize, GenAbpError> {
    let mut seen = std::collections::HashMap::new();
    let mut max = 0;
    for i in 1..=ell {
        for j in 1..=ell {
            for k in 1..=n {
                let e = encoding_exponent(base, i, j, k);
                if let Some(prev) = seen.insert(e, (i, j, k)) {
                    return Err(GenAbpError::Collision(prev, (i, j, k)));
                }
                max = max.max(e);
            }
        }
    }
    Ok(max)
}

/// y_{ijkl} ↦ v_l^{e(i,j,k)}: each layer becomes univariate in v_{π_i(t)}.
pub fn to_roabp(block: &SetMultilinear, sub: &ShiftedSubstitution) -> Result<Roabp, GenAbpError> {
    let ell = sub.alg.ell;
    let base = encoding_base(ell, sub.n, sub.d);
    check_encoding(ell, sub.n, base)?;
    let univar = |p: &MPoly<KElem>| -> Vec<(usize, KElem)> {
        p.terms()
            .iter()
            .map(|(mono, c)| {
                let e = match mono.as_slice() {
                    [] => 0,
                    [(v, 1)] => {
                        let (i, j, k, _) = sub.var_index(*v);
                        encoding_exponent(base, i, j, k)
                    }
                    _ => panic!("set-multilinear layers are linear"),
                };
                (e, c.clone())
            })
            .collect()
    };
    let constant = |m: &SymMat| m.convert(&ell, |p| p.terms().get(&vec![]).cloned().unwrap_or_else(|| KElem::zero(&ell)));
    let layers = block
        .layers
        .iter()
        .map(|m| {
            let rows = m.rows();
            let cols = m.cols();
            let mut out = vec![vec![vec![]; cols]; rows];
            for (i, row) in out.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    *e = univar(m.get(i, j));
                }
            }
            out
        })
        .collect();
    Ok(Roabp { nvars: sub.d, order: block.blocks.clone(), c: constant(&block.c), layers, b: constant(&block.b) })
}

/// Strong hitting set for generalized ABPs of width ≤ r and degree ≤ d over D
/// in n variables: Z̃_k at each ROABP hitting assignment (y_{ijkl} =
/// v_l^{e(i,j,k)}), conjugated by q₀ so that coefficients embed as a⊗I_d.
/// Points with a singular Z̃_k are dropped; the grid is scanned until `cap`
/// points are kept or `SCAN_FACTOR·cap` assignments have been tried.
pub fn strong_hitting_set_genabp(
    n: usize,
    r: usize,
    d: usize,
    alg: DivAlgebra,
    cap: usize,
) -> Result<HittingSet<KElem>, GenAbpError> {
    let ell = alg.ell;
    let sub = ShiftedSubstitution::new(alg, n, d);
    let base = encoding_base(ell, n, d);
    let emax = check_encoding(ell, n, base)?;
    let hits = roabp_hitting_set(d, r * ell, emax, cap.saturating_mul(SCAN_FACTOR))?;
    let q0: Mat<KElem> = q0_matrix(&ell, ell, d);
    let q0i = q0.transpose();
    let mut points = vec![];
    let mut dropped = 0usize;
    for v in &hits.points {
        if points.len() == cap {
            break;
        }
        let y = |i: usize, j: usize, k: usize, l: usize| v[l - 1].pow(encoding_exponent(base, i, j, k) as u32);
        let mut mats = vec![];
        let mut method = String::new();
        let mut ok = true;
        for k in 1..=n {
            let p = q0.mul(&sub.z_tilde_at(k, y)).mul(&q0i);
            let cert = certify_nonsingular(&p);
            if !cert.nonsingular {
                ok = false;
                break;
            }
            if k == 1 {
                method = describe(&cert.method);
            }
            mats.push(p);
        }
        if !ok {
            dropped += 1;
            continue;
        }
        points.push(HitPoint { matrices: mats, cert: Certification { det_nonzero: true, sigma_chain_ok: None, method } });
    }
    let meta = Meta {
        n,
        r: Some(r),
        dim: d * ell,
        field: "K".into(),
        ell,
        kappa: alg.kappa(),
        big_l: ell.trailing_zeros(),
        blockdim: Some(d),
        mode: "desk".into(),
        count: points.len(),
        notes: vec![
            format!("roabp backend {:?}, {} assignments", hits.backend, hits.points.len()),
            format!("{dropped} assignments dropped: some Z̃_k singular"),
            format!("encoding base {base}, max exponent {emax}"),
        ],
        ..Meta::default()
    };
    Ok(HittingSet { meta, points })
}

pub const SCAN_FACTOR: usize = 64;

pub(crate) fn describe(m: &CertMethod) -> String {
    match m {
        CertMethod::Modular { p, t } => format!("det mod {p} at z={t}"),
        CertMethod::Exact => "exact det".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divalg::DElem;

    fn rat_mat(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows((), rows.iter().map(|r| r.iter().map(|&v| Rat::int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn q0_printed_instance() {
        let q: Mat<Rat> = q0_matrix(&(), 2, 3);
        let ones: Vec<usize> = (0..6).map(|r| (0..6).find(|&c| q.get(r, c).is_one()).unwrap() + 1).collect();
        assert_eq!(ones, vec![1, 3, 5, 2, 4, 6]);
        let qi = q.inverse().unwrap();
        let inv_ones: Vec<usize> = (0..6).map(|r| (0..6).find(|&c| qi.get(r, c).is_one()).unwrap() + 1).collect();
        assert_eq!(inv_ones, vec![1, 4, 2, 5, 3, 6]);
        let a = rat_mat(&[&[1, 2], &[3, 4]]);
        assert_eq!(q.mul(&a.identity_kron(3)).mul(&qi), a.kron_identity(3));
    }

    #[test]
    fn q0_trivial_cases() {
        assert!(q0_matrix::<Rat>(&(), 1, 4).is_identity());
        assert!(q0_matrix::<Rat>(&(), 5, 1).is_identity());
    }

    #[test]
    fn single_layer_eval() {
        let a = rat_mat(&[&[1, 1], &[0, 1]]);
        let b = rat_mat(&[&[2, 0], &[1, 1]]);
        let abp = GenABP::word(&[a.clone(), b.clone()], &[1]);
        let p = Mat::from_fn(&(), 4, 4, |i, j| Rat::int((i * 4 + j) as i64 % 5 - 2));
        let v = eval_genabp(&abp, std::slice::from_ref(&p), Iota::KronRight).unwrap();
        assert_eq!(v, a.kron_identity(2).mul(&p).mul(&b.kron_identity(2)));
        assert!(matches!(eval_genabp(&abp, &[rat_mat(&[&[1, 2, 3], &[1, 2, 3], &[1, 2, 3]])], Iota::KronRight), Err(GenAbpError::Dim { .. })));
    }

    #[test]
    fn scalar_coefficients_ignore_iota() {
        let abp = GenABP::word(&[rat_mat(&[&[2]]), rat_mat(&[&[3]])], &[1]);
        let p = rat_mat(&[&[1, 2], &[3, 4]]);
        assert_eq!(eval_genabp(&abp, std::slice::from_ref(&p), Iota::KronLeft), eval_genabp(&abp, &[p], Iota::KronRight));
    }

    #[test]
    fn worked_product_is_block_diagonal() {
        // ℓ = 2, d = 3: a₀x₁a₁x₂a₂x₃a₃ at Z̃; block 2 is a₀Z̃₁₂a₁Z̃₂₃a₂Z̃₃₁a₃.
        let alg = DivAlgebra::new(2, 1).unwrap();
        let sub = ShiftedSubstitution::new(alg, 3, 3);
        let a: Vec<Mat<KElem>> = [alg.one(), alg.x(), alg.scalar(KElem::int(2, 3)), alg.x().add(&alg.one()).unwrap()]
            .iter()
            .map(DElem::matrix_rep)
            .collect();
        let abp = GenABP::word(&a, &[1, 2, 3]);
        let full = sub.eval_symbolic(&abp);
        let blocks = shifted_cyclic_eval(&abp, &sub);
        let sa: Vec<SymMat> = a.iter().map(|m| sub.sym(m)).collect();
        let block2 = sa[0].mul(&sub.block(1, 2)).mul(&sa[1]).mul(&sub.block(2, 3)).mul(&sa[2]).mul(&sub.block(3, 1)).mul(&sa[3]);
        assert_eq!(blocks[1].expand(), block2);
        for i in 0..3 {
            for j in 0..3 {
                let blk = full.block(i + 1, j + 1, 2).unwrap();
                if i == j {
                    assert_eq!(blk, blocks[i].expand());
                } else {
                    assert!(blk.is_zero());
                }
            }
        }
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(encoding_exponent(5, 1, 1, 1), 31);
        assert_eq!(check_encoding(4, 2, encoding_base(4, 2, 2)).unwrap(), 122);
        assert!(check_encoding(4, 4, 5).is_ok());
        assert!(check_encoding(2, 3, 2).is_err());
        assert_eq!(encoding_base(2, 3, 1), 4);
    }

    #[test]
    fn strong_set_order_two_family() {
        // a·x₁·b with a, b ∈ {1, x, ω} and ℓ = 2: every member is nonzero and
        // must be invertible at some point.
        let alg = DivAlgebra::new(2, 1).unwrap();
        let hs = strong_hitting_set_genabp(1, 1, 1, alg, 20).unwrap();
        assert!(!hs.is_empty());
        assert_eq!(hs.meta.dim, 2);
        let elems = [alg.one(), alg.x(), alg.scalar(KElem::omega(2))];
        for a in &elems {
            for b in &elems {
                let abp = GenABP::word(&[a.matrix_rep(), b.matrix_rep()], &[1]);
                let hit = hs.tuples().any(|p| {
                    let v = eval_genabp(&abp, p, Iota::KronRight).unwrap();
                    certify_nonsingular(&v).nonsingular
                });
                assert!(hit);
            }
        }
        let zero = GenABP::word(&[alg.zero().matrix_rep(), alg.one().matrix_rep()], &[1]);
        assert!(hs.tuples().all(|p| eval_genabp(&zero, p, Iota::KronRight).unwrap().is_zero()));
    }
}
