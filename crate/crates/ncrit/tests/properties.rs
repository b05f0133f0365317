use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncrit::assembly::scaling_set;
use ncrit::divalg::DivAlgebra;
use ncrit::field::{Field, KElem, Rat, Ring};
use ncrit::formula::{eval, parse, random_formula, EvalResult, Formula};
use ncrit::genabp::q0_matrix;
use ncrit::linalg::qmat::QMat;
use ncrit::linalg::Mat;
use ncrit::realization::build_pencil;

fn rat() -> impl Strategy<Value = Rat> {
    (-50i64..=50, 1i64..=20).prop_map(|(a, b)| Rat::new(a, b))
}

fn mat(n: usize) -> impl Strategy<Value = Mat<Rat>> {
    prop::collection::vec(-4i64..=4, n * n).prop_map(move |v| Mat::new((), n, n, v.into_iter().map(Rat::int).collect()).unwrap())
}

/// Sparse ℚ(ω)[z] element, divided by 1 + d·z for d in 1..=max_den.
fn kelem_den(ell: usize, max_den: i64) -> impl Strategy<Value = KElem> {
    (prop::collection::vec((0..ell as i64, -3i64..=3, 0u32..=2), 1..4), 0i64..=max_den).prop_map(move |(terms, d)| {
        let z = KElem::z(ell);
        let mut acc = KElem::zero(&ell);
        for (j, c, e) in terms {
            let mut t = KElem::omega_pow(ell, j).mul(&KElem::int(ell, c));
            for _ in 0..e {
                t = t.mul(&z);
            }
            acc = acc.add(&t);
        }
        if d > 0 {
            acc = acc.mul(&KElem::one(&ell).add(&z.mul(&KElem::int(ell, d))).inv().unwrap());
        }
        acc
    })
}

fn kelem(ell: usize) -> impl Strategy<Value = KElem> {
    kelem_den(ell, 3)
}

fn formula() -> impl Strategy<Value = Formula> {
    (any::<u64>(), 1usize..=3, 1usize..=12, 0usize..=2)
        .prop_map(|(seed, n, size, h)| random_formula(&mut ChaCha8Rng::seed_from_u64(seed), n, size, h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rat_normal_form(a in rat(), b in rat()) {
        for x in [a.add(&b), a.mul(&b), a.sub(&b)] {
            prop_assert!(x.denom().is_positive());
            prop_assert!(x.numer().gcd(x.denom()).is_one());
        }
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        if let Some(i) = b.inv() {
            prop_assert!(b.mul(&i).is_one());
        }
    }

    #[test]
    fn kelem_field_laws(a in kelem(8), b in kelem(8), c in kelem(8)) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn sigma_is_a_field_automorphism(a in kelem(16), b in kelem(16), times in 0u64..6) {
        let alg = DivAlgebra::scheduled(16).unwrap();
        let s = |x: &KElem| alg.sigma.apply(x, times).unwrap();
        prop_assert_eq!(s(&a.mul(&b)), s(&a).mul(&s(&b)));
        prop_assert_eq!(s(&a.add(&b)), s(&a).add(&s(&b)));
        prop_assert!(alg.sigma.fixes(&KElem::z(16), times));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn d_inverse_and_rep(a in prop::collection::vec(kelem_den(4, 0), 4), b in prop::collection::vec(kelem(4), 4)) {
        let alg = DivAlgebra::scheduled(4).unwrap();
        let (a, b) = (alg.elem(a).unwrap(), alg.elem(b).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().matrix_rep(), a.matrix_rep().mul(&b.matrix_rep()));
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), alg.one());
        }
    }

    #[test]
    fn inverse_det_rank(a in mat(4)) {
        let det = a.det().unwrap();
        prop_assert_eq!(det.is_zero(), a.rank() < 4);
        match a.inverse() {
            Ok(i) => {
                prop_assert!(!det.is_zero());
                prop_assert!(a.mul(&i).is_identity());
                prop_assert!(i.mul(&a).is_identity());
            }
            Err(_) => prop_assert!(det.is_zero()),
        }
    }

    #[test]
    fn kron_mixed_product(a in mat(2), b in mat(3), c in mat(2), d in mat(3)) {
        prop_assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
        let k = a.kron(&b);
        for i in 0..2 { for j in 0..2 { for r in 0..3 { for s in 0..3 {
            prop_assert_eq!(k.get(i * 3 + r, j * 3 + s), &a.get(i, j).mul(b.get(r, s)));
        }}}}
    }

    #[test]
    fn q0_conjugates_kron_order(ell in 1usize..=4, d in 1usize..=4, seed in any::<u64>()) {
        use rand::Rng;
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = Mat::from_fn(&(), ell, ell, |_, _| Rat::int(r.gen_range(-9..=9)));
        let q: Mat<Rat> = q0_matrix(&(), ell, d);
        prop_assert_eq!(q.mul(&a.identity_kron(d)).mul(&q.inverse().unwrap()), a.kron_identity(d));
    }

    #[test]
    fn qmat_agrees_with_mat(a in mat(3), b in mat(3)) {
        let (qa, qb) = (QMat::from_mat(&a), QMat::from_mat(&b));
        prop_assert_eq!(qa.mul(&qb).to_mat(), a.mul(&b));
        prop_assert_eq!(qa.add(&qb).to_mat(), a.add(&b));
        prop_assert_eq!(qa.inverse().map(|i| i.to_mat()), a.inverse().ok());
    }

    #[test]
    fn display_parse_round_trip(f in formula()) {
        let g = parse(&f.to_string()).unwrap();
        prop_assert_eq!(g.measures(), f.measures());
        prop_assert_eq!(g.to_string(), f.to_string());
    }

    #[test]
    fn measures_compose(f in formula(), g in formula()) {
        let sum = Formula::add(f.clone(), g.clone());
        prop_assert_eq!(sum.size(), 1 + f.size() + g.size());
        prop_assert_eq!(sum.height(), f.height().max(g.height()));
        let inv = Formula::inv(f.clone());
        prop_assert_eq!((inv.size(), inv.height()), (1 + f.size(), 1 + f.height()));
    }

    #[test]
    fn pencil_matches_eval(f in formula(), seed in any::<u64>(), m in 1usize..=2) {
        use rand::Rng;
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let point: Vec<Mat<Rat>> = (0..f.nvars().max(1))
            .map(|_| Mat::from_fn(&(), m, m, |_, _| Rat::int(r.gen_range(-4..=4))))
            .collect();
        let p = build_pencil(&f);
        prop_assert!(p.size <= 2 * f.size());
        if let EvalResult::Value(v) = eval(&f, &point, m).unwrap() {
            prop_assert_eq!(p.value_at(&point), Some(v));
        }
    }

    #[test]
    fn scaling_set_grows(s in 1usize..20, m in 1usize..4, dp in 0usize..3) {
        let a = scaling_set(s, m, dp);
        prop_assert_eq!(a.values.len(), a.bound + 1);
        prop_assert!(a.bound > a.derivation.entry_degree);
        for b in [scaling_set(s + 1, m, dp), scaling_set(s, m + 1, dp), scaling_set(s, m, dp + 1)] {
            prop_assert!(b.bound >= a.bound);
            prop_assert!(b.values.starts_with(&a.values));
        }
    }
}
