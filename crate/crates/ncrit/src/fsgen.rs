//! σ-compatible hitting-set generator for noncommutative ABPs, embedded in D:
//! parameter schedule, Lagrange combination step, σ-extension and
//! materialization of points as circulant matrices.

use serde::Serialize;

use crate::divalg::{cir, DElem, DivAlgebra, DivAlgError};
use crate::field::{Field, KElem, Poly, Rat, Ring};
use crate::genabp::describe;
use crate::hitset::{Certification, HitPoint, HittingSet, Meta};
use crate::linalg::modp::certify_nonsingular;
use crate::linalg::Mat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FsError {
    #[error("dtilde must be a power of two")]
    NotPowerOfTwo,
    #[error("kappa {kappa} too small for {d} levels (a_d ≤ 0)")]
    KappaTooSmall { kappa: u32, d: u32 },
    #[error("schedule too large to represent (L = {0})")]
    TooLarge(u32),
    #[error("seed value is not in W_{0}")]
    NotInW(usize),
    #[error("ell = {ell} is smaller than 2^d = {len}")]
    EllTooSmall { ell: usize, len: usize },
    #[error(transparent)]
    Alg(#[from] DivAlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    PaperFaithful,
    Desk,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamSchedule {
    pub n: usize,
    pub r: usize,
    pub d: u32,
    pub dtilde: usize,
    pub m: usize,
    pub kappa: u32,
    #[serde(rename = "L")]
    pub big_l: u32,
    pub ell: u128,
    pub a: Vec<u32>,
    pub mu: u128,
    /// |W_i| = 2^{L − a_i}.
    pub w_sizes: Vec<u128>,
    pub mode: Mode,
}

/// Smallest e with 2^e ≥ x.
fn ceil_log2(x: u128) -> u32 {
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

/// Paper-faithful: κ = 2d + ⌈2·log₂(nmr)⌉ + 1. Desk: κ as supplied.
pub fn schedule(n: usize, r: usize, dtilde: usize, m: usize, mode: Mode, desk_kappa: u32) -> Result<ParamSchedule, FsError> {
    if !dtilde.is_power_of_two() {
        return Err(FsError::NotPowerOfTwo);
    }
    let d = dtilde.trailing_zeros();
    let nmr = (n.max(1) * m.max(1) * r.max(1)) as u128;
    let kappa = match mode {
        Mode::PaperFaithful => 2 * d + ceil_log2(nmr * nmr) + 1,
        Mode::Desk => desk_kappa,
    };
    if kappa == 0 || kappa <= d {
        return Err(FsError::KappaTooSmall { kappa, d });
    }
    let big_l = 2 * kappa;
    if big_l >= 127 || kappa + d >= 127 {
        return Err(FsError::TooLarge(big_l));
    }
    let a: Vec<u32> = (1..=d).map(|i| kappa - i).collect();
    let mu = if d == 0 { 1 } else { (1u128 << (kappa + d - 1)) + 1 };
    Ok(ParamSchedule {
        n,
        r,
        d,
        dtilde,
        m,
        kappa,
        big_l,
        ell: 1u128 << big_l,
        w_sizes: a.iter().map(|&ai| 1u128 << (big_l - ai)).collect(),
        a,
        mu,
        mode,
    })
}

impl ParamSchedule {
    /// 2^κ > (2^d·n·m·r)², the paper-faithful root-count margin.
    pub fn margin_holds(&self) -> bool {
        let x = (self.dtilde * self.n.max(1) * self.m.max(1) * self.r.max(1)) as u128;
        x.checked_mul(x).is_some_and(|sq| (1u128 << self.kappa) > sq)
    }

    pub fn ell_usize(&self) -> Result<usize, FsError> {
        usize::try_from(self.ell).ok().filter(|&l| l <= 1 << 12).ok_or(FsError::TooLarge(self.big_l))
    }

    pub fn algebra(&self) -> Result<DivAlgebra, FsError> {
        Ok(DivAlgebra::new(self.ell_usize()?, self.kappa)?)
    }

    /// μ_i = 2^{κ+i−1} + 1 for 1-based level i; `mu` is the last level's.
    pub fn mu_at(&self, i: usize) -> u128 {
        (1u128 << (self.kappa as usize + i - 1)) + 1
    }

    /// ω_i = ω^{2^{a_i}}, 1-based level i.
    pub fn omega_level(&self, i: usize) -> Result<KElem, FsError> {
        let ell = self.ell_usize()?;
        Ok(KElem::omega_pow(ell, 1i64 << self.a[i - 1]))
    }

    /// W_i = {ω_i^j : 1 ≤ j ≤ 2^{L − a_i}} in order of j.
    pub fn w_set(&self, i: usize) -> Result<Vec<KElem>, FsError> {
        let ell = self.ell_usize()?;
        let step = 1i64 << self.a[i - 1];
        Ok((1..=self.w_sizes[i - 1] as i64).map(|j| KElem::omega_pow(ell, j * step)).collect())
    }
}

/// f[i][j]: variable i (0-based), position j, a polynomial in the last seed
/// coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub level: u32,
    pub polys: Vec<Vec<Poly<KElem>>>,
}

impl Generator {
    pub fn positions(&self) -> usize {
        self.polys.first().map_or(0, Vec::len)
    }

    /// Largest degree over all polynomials.
    pub fn degree(&self) -> usize {
        self.polys.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// f^i_{j+1} = σ(f^i_j) for every i and j, coefficient-wise.
    pub fn sigma_chain_ok(&self, alg: &DivAlgebra) -> bool {
        self.polys.iter().all(|row| row.windows(2).all(|w| alg.sigma.apply_kpoly(&w[0], 1).is_ok_and(|s| s == w[1])))
    }
}

/// f^i_0(u) = u^{i−1}.
pub fn base_generator(sched: &ParamSchedule) -> Result<Generator, FsError> {
    let ell = sched.ell_usize()?;
    let polys = (0..sched.n)
        .map(|i| {
            let mut c = vec![KElem::zero(&ell); i + 1];
            c[i] = KElem::one(&ell);
            vec![Poly::new(ell, c)]
        })
        .collect();
    Ok(Generator { level: 0, polys })
}

/// Lagrange basis on nodes 1..=k, as polynomials with rational coefficients.
pub fn lagrange_basis(ell: usize, k: usize) -> Vec<Poly<KElem>> {
    (1..=k as i64)
        .map(|node| {
            let mut p = Poly::one(&ell);
            for t in (1..=k as i64).filter(|&t| t != node) {
                let inv = Rat::int(node - t).inv().unwrap();
                let lin = Poly::new(ell, vec![KElem::rat(ell, Rat::int(-t).mul(&inv)), KElem::rat(ell, inv)]);
                p = p.mul(&lin);
            }
            p
        })
        .collect()
}

fn pow_k(b: &KElem, e: u128) -> KElem {
    // b is a root of unity of order dividing ℓ; reduce the exponent first.
    let ell = b.order() as u128;
    let mut e = e % ell;
    let mut acc = KElem::one(&b.order());
    let mut base = b.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    acc
}

/// f'_j = Σ_{ℓ'} f_j(ω_d^{ℓ'}α_d)·p_{ℓ'}(v) and
/// f'_{j+2^{d−1}} = Σ_{ℓ'} f_j((ω_d^{ℓ'}α_d)^μ)·p_{ℓ'}(v), ℓ' = 1..r².
pub fn combine(g: &Generator, sched: &ParamSchedule, alpha: &KElem) -> Result<Generator, FsError> {
    let level = g.level as usize + 1;
    if level > sched.d as usize {
        return Err(FsError::NotInW(level));
    }
    if !sched.w_set(level)?.contains(alpha) {
        return Err(FsError::NotInW(level));
    }
    let ell = sched.ell_usize()?;
    let k = sched.r.max(1) * sched.r.max(1);
    let basis = lagrange_basis(ell, k);
    let wd = sched.omega_level(level)?;
    let betas: Vec<KElem> = (1..=k as u128).map(|lp| pow_k(&wd, lp).mul(alpha)).collect();
    let mu = sched.mu_at(level);
    let betas_mu: Vec<KElem> = betas.iter().map(|b| pow_k(b, mu)).collect();
    let interp = |f: &Poly<KElem>, pts: &[KElem]| {
        pts.iter().zip(&basis).fold(Poly::zero(&ell), |acc, (b, p)| acc.add(&p.scale(&f.eval(b))))
    };
    let polys = g
        .polys
        .iter()
        .map(|row| {
            let mut out: Vec<Poly<KElem>> = row.iter().map(|f| interp(f, &betas)).collect();
            out.extend(row.iter().map(|f| interp(f, &betas_mu)));
            out
        })
        .collect();
    Ok(Generator { level: level as u32, polys })
}

/// f_{2^d + j} = σ(f_{2^d + j − 1}) up to ℓ positions.
pub fn sigma_extend(g: &Generator, sched: &ParamSchedule) -> Result<Vec<Vec<Poly<KElem>>>, FsError> {
    let alg = sched.algebra()?;
    let ell = alg.ell;
    if ell < g.positions() {
        return Err(FsError::EllTooSmall { ell, len: g.positions() });
    }
    Ok(g
        .polys
        .iter()
        .map(|row| {
            let mut out = row.clone();
            while out.len() < ell {
                let next = alg.sigma.apply_kpoly(out.last().unwrap(), 1).expect("orders agree");
                out.push(next);
            }
            out
        })
        .collect())
}

/// A materialized point: one element of D per variable and its circulant.
#[derive(Debug, Clone)]
pub struct Materialized {
    pub elems: Vec<DElem>,
    pub matrices: Vec<Mat<KElem>>,
    pub cert: Certification,
}

/// M(x_i) = cir(f^i_0(v), …, f^i_{ℓ−2}(v), z·f^i_{ℓ−1}(v)). `Ok(None)` when
/// certification fails (the point is dropped).
pub fn materialize(extended: &[Vec<Poly<KElem>>], sched: &ParamSchedule, v: &Rat) -> Result<Option<Materialized>, FsError> {
    let alg = sched.algebra()?;
    let ell = alg.ell;
    let vk = KElem::rat(ell, v.clone());
    let z = KElem::z(ell);
    let mut elems = vec![];
    let mut matrices = vec![];
    let mut chain_ok = true;
    let mut method = String::new();
    for row in extended {
        let mut e: Vec<KElem> = row.iter().map(|f| f.eval(&vk)).collect();
        chain_ok &= e.windows(2).all(|w| alg.sigma.apply(&w[0], 1).is_ok_and(|s| s == w[1]));
        let last = e.pop().unwrap();
        e.push(z.mul(&last));
        let m = cir(&e)?;
        let d = alg.monomial(e[0].clone(), 1);
        chain_ok &= d.matrix_rep() == m;
        let cert = certify_nonsingular(&m);
        if !cert.nonsingular || !chain_ok {
            return Ok(None);
        }
        if method.is_empty() {
            method = describe(&cert.method);
        }
        elems.push(d);
        matrices.push(m);
    }
    Ok(Some(Materialized { elems, matrices, cert: Certification { det_nonzero: true, sigma_chain_ok: Some(chain_ok), method } }))
}

/// V = {1, …, N} with N = dtilde·deg_v + 1, deg_v the generator's degree in
/// v (so any nonzero ABP image, of v-degree ≤ dtilde·deg_v, survives).
pub fn v_values(sched: &ParamSchedule, deg_v: usize) -> Vec<Rat> {
    let n = sched.dtilde * deg_v + 1;
    (1..=n as i64).map(Rat::int).collect()
}

/// Seeds α ∈ W₁ × … × W_d in lexicographic index order, each combined into
/// a generator, σ-extended and materialized for every v ∈ V.
pub fn hitting_set_in_d(sched: &ParamSchedule) -> Result<HittingSet<KElem>, FsError> {
    let alg = sched.algebra()?;
    let ws: Vec<Vec<KElem>> = (1..=sched.d as usize).map(|i| sched.w_set(i)).collect::<Result<_, _>>()?;
    let base = base_generator(sched)?;
    let mut points = vec![];
    let mut dropped = 0usize;
    let mut idx = vec![0usize; ws.len()];
    loop {
        let mut g = base.clone();
        for (lvl, &j) in idx.iter().enumerate() {
            g = combine(&g, sched, &ws[lvl][j])?;
        }
        let ext = sigma_extend(&g, sched)?;
        for v in v_values(sched, g.degree()) {
            match materialize(&ext, sched, &v)? {
                Some(p) => points.push(HitPoint { matrices: p.matrices, cert: p.cert }),
                None => dropped += 1,
            }
        }
        let Some(i) = (0..idx.len()).rev().find(|&i| idx[i] + 1 < ws[i].len()) else { break };
        idx[i] += 1;
        idx[i + 1..].iter_mut().for_each(|x| *x = 0);
    }
    let meta = Meta {
        n: sched.n,
        r: Some(sched.r),
        dtilde: Some(sched.dtilde),
        dim: alg.ell,
        field: "K".into(),
        ell: alg.ell,
        kappa: sched.kappa,
        big_l: sched.big_l,
        mode: match sched.mode {
            Mode::Desk => "desk".into(),
            Mode::PaperFaithful => "paper-faithful".into(),
        },
        count: points.len(),
        notes: vec![format!("{dropped} seed/value combinations dropped by certification")],
        ..Meta::default()
    };
    Ok(HittingSet { meta, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk(n: usize, r: usize, dtilde: usize, kappa: u32) -> ParamSchedule {
        schedule(n, r, dtilde, 1, Mode::Desk, kappa).unwrap()
    }

    #[test]
    fn schedules() {
        let s = schedule(1, 1, 4, 1, Mode::PaperFaithful, 0).unwrap();
        assert_eq!((s.kappa, s.big_l, s.ell, s.a.clone(), s.mu), (5, 10, 1024, vec![4, 3], 65));
        assert!(s.margin_holds());
        let s = desk(1, 1, 2, 2);
        assert_eq!((s.big_l, s.ell, s.a.clone(), s.mu), (4, 16, vec![1], 5));
        assert_eq!(schedule(1, 1, 8, 1, Mode::Desk, 2), Err(FsError::KappaTooSmall { kappa: 2, d: 3 }));
        assert_eq!(schedule(1, 1, 3, 1, Mode::Desk, 2), Err(FsError::NotPowerOfTwo));
    }

    #[test]
    fn base_generator_is_vandermonde() {
        let s = desk(3, 1, 2, 2);
        let g = base_generator(&s).unwrap();
        let w1 = s.omega_level(1).unwrap();
        let vals: Vec<KElem> = g.polys.iter().map(|row| row[0].eval(&w1)).collect();
        assert_eq!(vals, vec![KElem::one(&16), w1.clone(), w1.mul(&w1)]);
        let one = desk(1, 1, 2, 2);
        assert!(base_generator(&one).unwrap().polys[0][0].is_one());
    }

    #[test]
    fn lagrange_nodes() {
        let b = lagrange_basis(4, 3);
        for (i, p) in b.iter().enumerate() {
            for t in 1..=3 {
                let v = p.eval(&KElem::int(4, t));
                assert_eq!(v.is_one(), i as i64 + 1 == t);
                assert!(v.is_one() || v.is_zero());
            }
        }
        assert!(lagrange_basis(4, 1)[0].is_one());
    }

    #[test]
    fn combine_desk_is_sigma_compatible() {
        let s = desk(2, 1, 2, 2);
        let alg = s.algebra().unwrap();
        for alpha in s.w_set(1).unwrap() {
            let g = combine(&base_generator(&s).unwrap(), &s, &alpha).unwrap();
            assert_eq!(g.positions(), 2);
            assert!(g.sigma_chain_ok(&alg));
            // r = 1: f'_0 = f_0(ω₁α), a constant.
            assert_eq!(g.degree(), 0);
            let ext = sigma_extend(&g, &s).unwrap();
            assert_eq!(ext[0].len(), 16);
            assert_eq!(ext[1][5], alg.sigma.apply_kpoly(&ext[1][1], 4).unwrap());
        }
        assert_eq!(combine(&base_generator(&s).unwrap(), &s, &KElem::omega(16)), Err(FsError::NotInW(1)));
    }

    #[test]
    fn two_levels_use_per_level_mu() {
        let s = desk(2, 1, 4, 3);
        assert_eq!((s.mu_at(1), s.mu_at(2), s.mu), (9, 17, 17));
        let alg = s.algebra().unwrap();
        let (w1, w2) = (s.w_set(1).unwrap(), s.w_set(2).unwrap());
        for (a1, a2) in w1.iter().step_by(5).zip(w2.iter().step_by(3)) {
            let g = combine(&base_generator(&s).unwrap(), &s, a1).unwrap();
            let g = combine(&g, &s, a2).unwrap();
            assert_eq!(g.positions(), 4);
            assert!(g.sigma_chain_ok(&alg));
        }
    }

    #[test]
    fn materialize_constant_one() {
        let s = desk(1, 1, 1, 1);
        let g = base_generator(&s).unwrap();
        let ext = sigma_extend(&g, &s).unwrap();
        let p = materialize(&ext, &s, &Rat::int(1)).unwrap().unwrap();
        let alg = s.algebra().unwrap();
        assert_eq!(p.matrices[0], alg.m_x());
        assert_eq!(p.cert.sigma_chain_ok, Some(true));
    }

    #[test]
    fn linear_forms_are_hit_at_level_zero() {
        // c₁x₁ + c₂x₂ with x_i ↦ v^{i−1}·x is nonzero for some v ∈ V.
        let s = desk(2, 1, 1, 1);
        let hs = hitting_set_in_d(&s).unwrap();
        assert_eq!(hs.len(), 2);
        let alg = s.algebra().unwrap();
        for (c1, c2) in [(1i64, -1i64), (1, 0), (0, 1), (2, -1)] {
            let hit = hs.tuples().any(|p| {
                let v = p[0].scale(&KElem::int(alg.ell, c1)).add(&p[1].scale(&KElem::int(alg.ell, c2)));
                !v.is_zero()
            });
            assert!(hit);
        }
    }
}
