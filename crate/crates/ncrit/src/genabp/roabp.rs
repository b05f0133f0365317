use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GenAbpError;
use crate::field::{KElem, Rat, Ring};
use crate::linalg::Mat;

/// Matrix-valued ROABP: layer t reads only v_{order[t]}; each layer entry is
/// a sparse univariate polynomial (exponent, coefficient).
#[derive(Debug, Clone)]
pub struct Roabp {
    pub nvars: usize,
    pub order: Vec<usize>,
    pub c: Mat<KElem>,
    pub layers: Vec<Vec<Vec<Vec<(usize, KElem)>>>>,
    pub b: Mat<KElem>,
}

impl Roabp {
    pub fn max_degree(&self) -> usize {
        self.layers.iter().flatten().flatten().flatten().map(|(e, _)| *e).max().unwrap_or(0)
    }

    pub fn eval(&self, v: &[Rat]) -> Mat<KElem> {
        let ell = *self.c.ctx();
        let mut acc = self.c.clone();
        for (layer, &var) in self.layers.iter().zip(&self.order) {
            let x = &v[var - 1];
            let m = Mat::from_fn(&ell, layer.len(), layer[0].len(), |i, j| {
                layer[i][j].iter().fold(KElem::zero(&ell), |s, (e, c)| s.add(&c.mul(&KElem::rat(ell, x.pow(*e as u32)))))
            });
            acc = acc.mul(&m);
        }
        acc.mul(&self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RoabpBackend {
    /// {0..δ}^nvars in max-norm shells, possibly truncated at the cap.
    Grid { delta: usize, truncated: bool },
    /// Uniform draws from {0..N}, N = 2·nvars·δ·width.
    Random { seed: u64, range: usize },
}

#[derive(Debug, Clone)]
pub struct RoabpHits {
    pub backend: RoabpBackend,
    pub points: Vec<Vec<Rat>>,
}

pub const GRID_MAX_VARS: usize = 4;
pub const RANDOM_MAX_VARS: usize = 64;

/// All tuples in {0..δ}^n ordered by max-norm, lexicographic within a shell.
fn shells(n: usize, delta: usize, cap: usize) -> (Vec<Vec<usize>>, bool) {
    let mut out = vec![vec![0usize; n]];
    for s in 1..=delta {
        if n == 0 {
            break;
        }
        let mut t = vec![0usize; n];
        loop {
            if t.contains(&s) {
                if out.len() == cap {
                    return (out, true);
                }
                out.push(t.clone());
            }
            // odometer over {0..s}^n
            let Some(i) = (0..n).rev().find(|&i| t[i] < s) else { break };
            t[i] += 1;
            t[i + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    (out, false)
}

/// Assignments hitting every nonzero ROABP (any variable order) with nvars
/// variables, given width and per-variable degree δ.
pub fn roabp_hitting_set(nvars: usize, width: usize, delta: usize, cap: usize) -> Result<RoabpHits, GenAbpError> {
    if cap == 0 {
        return Err(GenAbpError::Infeasible("cap is zero".into()));
    }
    if nvars <= GRID_MAX_VARS {
        let (pts, truncated) = shells(nvars, delta, cap);
        let points = pts.into_iter().map(|t| t.into_iter().map(|x| Rat::int(x as i64)).collect()).collect();
        return Ok(RoabpHits { backend: RoabpBackend::Grid { delta, truncated }, points });
    }
    if nvars > RANDOM_MAX_VARS {
        return Err(GenAbpError::Infeasible(format!("{nvars} variables")));
    }
    let range = 2 * nvars * delta.max(1) * width.max(1);
    let seed = 0x5eed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..cap).map(|_| (0..nvars).map(|_| Rat::int(rng.gen_range(0..=range) as i64)).collect()).collect();
    Ok(RoabpHits { backend: RoabpBackend::Random { seed, range }, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_order() {
        let (p, t) = shells(2, 1, 100);
        assert_eq!(p, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(!t);
        let (p, t) = shells(2, 2, 5);
        assert_eq!(p.len(), 5);
        assert!(t);
        assert_eq!(shells(3, 3, 1000).0.len(), 64);
        assert_eq!(shells(0, 3, 10).0, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn univariate_grid_hits_degree_two() {
        let h = roabp_hitting_set(1, 1, 2, 100).unwrap();
        assert_eq!(h.points.len(), 3);
        // (v − 0)(v − 1) is nonzero at v = 2.
        assert!(h.points.iter().any(|p| {
            let v = &p[0];
            !v.mul(&v.sub(&Rat::int(1))).is_zero()
        }));
    }

    #[test]
    fn random_backend_beyond_grid() {
        let h = roabp_hitting_set(6, 2, 3, 7).unwrap();
        assert!(matches!(h.backend, RoabpBackend::Random { .. }));
        assert_eq!(h.points.len(), 7);
        assert!(roabp_hitting_set(100, 1, 1, 1).is_err());
        assert!(roabp_hitting_set(1, 1, 1, 0).is_err());
    }
}
