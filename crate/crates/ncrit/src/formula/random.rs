use rand::Rng;

use super::Formula;

/// Random formula over x1..xn with size ≤ `max_size` and height ≤ `max_height`.
pub fn random_formula<G: Rng>(rng: &mut G, n: usize, max_size: usize, max_height: usize) -> Formula {
    assert!(max_size >= 1 && n >= 1);
    let budget = rng.gen_range(1..=max_size);
    gen(rng, n, budget, max_height)
}

fn leaf<G: Rng>(rng: &mut G, n: usize) -> Formula {
    if rng.gen_bool(0.8) {
        Formula::var(rng.gen_range(1..=n))
    } else {
        Formula::int([-1, 1, 2][rng.gen_range(0..3)])
    }
}

fn gen<G: Rng>(rng: &mut G, n: usize, budget: usize, h: usize) -> Formula {
    if budget <= 1 {
        return leaf(rng, n);
    }
    let can_bin = budget >= 3;
    let can_inv = h > 0;
    let pick = match (can_bin, can_inv) {
        (false, false) => return leaf(rng, n),
        (false, true) => 2,
        (true, false) => rng.gen_range(0..2),
        (true, true) => rng.gen_range(0..3),
    };
    match pick {
        2 => Formula::inv(gen(rng, n, budget - 1, h - 1)),
        k => {
            let left = rng.gen_range(1..=budget - 2);
            let a = gen(rng, n, left, h);
            let b = gen(rng, n, budget - 1 - left, h);
            if k == 0 {
                Formula::add(a, b)
            } else {
                Formula::mul(a, b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let f = random_formula(&mut rng, 3, 10, 2);
            assert!(f.size() <= 10 && f.height() <= 2 && f.nvars() <= 3);
        }
    }
}
