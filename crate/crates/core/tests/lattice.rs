use std::collections::HashMap;

use displace_core::intmat::IntMatrix;
use displace_core::zlattice::{
    centralizer_root_search, depth_root_bound, enumerate_ball, sl_order, translation_length_lower,
    translation_length_upper, GeneratorSet, DEFAULT_MAX_BALL, DEFAULT_ROOT_CANDIDATES,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn m2(rows: [[i64; 2]; 2]) -> IntMatrix {
    IntMatrix::from_i64(&rows).unwrap()
}

/// Minimal length over every product of at most `r` generators.
fn naive_lengths(gens: &GeneratorSet, r: u32) -> HashMap<IntMatrix, u32> {
    let mut best = HashMap::from([(IntMatrix::identity(gens.n()), 0)]);
    let mut layer = vec![IntMatrix::identity(gens.n())];
    for l in 1..=r {
        let mut next = Vec::with_capacity(layer.len() * gens.elements().len());
        for w in &layer {
            for s in gens.elements() {
                let p = w * s;
                best.entry(p.clone()).or_insert(l);
                next.push(p);
            }
        }
        layer = next;
    }
    best
}

#[test]
fn bfs_agrees_with_all_products() {
    let gens = GeneratorSet::elementary(2);
    for r in 0..=4 {
        let table = enumerate_ball(&gens, r, DEFAULT_MAX_BALL).unwrap();
        let naive = naive_lengths(&gens, r);
        assert_eq!(table.len(), naive.len(), "radius {r}");
        for (m, l) in &naive {
            assert_eq!(table.length(m), Some(*l));
        }
    }
}

#[test]
fn lower_bound_never_exceeds_upper_bound() {
    let gens = GeneratorSet::elementary(2);
    let table = enumerate_ball(&gens, 4, DEFAULT_MAX_BALL).unwrap();
    let conj = enumerate_ball(&gens, 2, DEFAULT_MAX_BALL).unwrap();
    for (m, _) in table.elements().filter(|(m, _)| !m.is_identity()) {
        let upper = displace_core::zlattice::translation_length_upper_with(m, &conj, &table).unwrap();
        let lower = translation_length_lower(m, &gens).unwrap();
        assert!(lower <= upper as f64, "{m}: {lower} > {upper}");
    }
    let e = IntMatrix::elementary(2, 1, 2, 5);
    let up = translation_length_upper(&e, &gens, 1, 5, DEFAULT_MAX_BALL).unwrap().unwrap();
    assert!(translation_length_lower(&e, &gens).unwrap() <= up as f64);
}

#[test]
fn gcd_invariant_is_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gens = GeneratorSet::elementary(3);
    let word = |rng: &mut ChaCha8Rng, len: usize| {
        (0..len).fold(IntMatrix::identity(3), |acc, _| &acc * &gens.elements()[rng.gen_range(0..gens.elements().len())])
    };
    for _ in 0..1000 {
        let m = &word(&mut rng, 6) * &IntMatrix::elementary(3, 1, 2, rng.gen_range(-9..=9));
        let h = word(&mut rng, 8);
        let c = &(&h * &m) * &h.inverse().unwrap();
        assert_eq!(c.gcd_minus_identity(), m.gcd_minus_identity());
    }
}

#[test]
fn lower_bound_diverges_along_two_powers() {
    let gens = GeneratorSet::elementary(3);
    let mut prev = f64::NEG_INFINITY;
    for j in 1..=20 {
        let l = translation_length_lower(&IntMatrix::elementary(3, 1, 3, BigInt::from(2).pow(j)), &gens).unwrap();
        assert!(l > prev);
        prev = l;
    }
}

#[test]
fn reduction_mod_m_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let gens = GeneratorSet::elementary(3);
    for _ in 0..200 {
        let a = (0..5).fold(IntMatrix::identity(3), |acc, _| &acc * &gens.elements()[rng.gen_range(0..12)]);
        let b = (0..5).fold(IntMatrix::identity(3), |acc, _| &acc * &gens.elements()[rng.gen_range(0..12)]);
        for m in [2, 3, 5, 7] {
            assert_eq!((&a * &b).reduce_mod(m), a.reduce_mod(m).mul_mod(&b.reduce_mod(m), m));
        }
    }
}

fn count_sl_mod(n: usize, m: u64) -> u64 {
    let cells = n * n;
    let mut count = 0;
    for mut idx in 0..m.pow(cells as u32) {
        let mut e = vec![0i64; cells];
        for x in e.iter_mut() {
            *x = (idx % m) as i64;
            idx /= m;
        }
        let rows: Vec<&[i64]> = e.chunks(n).collect();
        let det = IntMatrix::from_i64(&rows).unwrap().det();
        if ((det - 1) % BigInt::from(m)) == BigInt::from(0) {
            count += 1;
        }
    }
    count
}

#[test]
fn sl_order_matches_enumeration() {
    for (n, m) in [(2, 2), (2, 3), (3, 2), (2, 5)] {
        assert_eq!(BigInt::from(count_sl_mod(n, m)), sl_order(n, m));
    }
}

fn hyperbolic_list() -> Vec<IntMatrix> {
    let mut v: Vec<IntMatrix> = [
        [[2, 1], [1, 1]],
        [[1, 1], [1, 2]],
        [[3, 1], [2, 1]],
        [[1, 2], [1, 3]],
        [[3, 2], [1, 1]],
        [[4, 1], [3, 1]],
        [[2, 3], [1, 2]],
        [[5, 3], [3, 2]],
        [[3, 1], [5, 2]],
        [[0, 1], [-1, 3]],
        [[-4, 1], [-1, 0]],
        [[-3, 1], [-1, 0]],
        [[4, 3], [1, 1]],
        [[2, 1], [3, 2]],
        [[5, 2], [2, 1]],
        [[1, 3], [1, 4]],
        [[7, 4], [5, 3]],
        [[13, 8], [8, 5]],
    ]
    .iter()
    .map(|r| m2(*r))
    .collect();
    v.push(IntMatrix::from_i64(&[[2, 1, 0], [1, 1, 0], [0, 0, 1]]).unwrap());
    v.push(IntMatrix::from_i64(&[[1, 1, 0], [0, 1, 1], [1, 0, 0]]).unwrap());
    v
}

/// B^k = A over the whole box, without using the centralizer.
fn naive_roots(a: &IntMatrix, bound: i64, ks: std::ops::RangeInclusive<u32>) -> Vec<(u32, IntMatrix)> {
    let w = (2 * bound + 1) as u64;
    let mut out = Vec::new();
    for mut idx in 0..w.pow(4) {
        let mut e = [0i64; 4];
        for x in e.iter_mut() {
            *x = (idx % w) as i64 - bound;
            idx /= w;
        }
        if e[0] * e[3] - e[1] * e[2] != 1 {
            continue;
        }
        let b = m2([[e[0], e[1]], [e[2], e[3]]]);
        let mut p = b.clone();
        for k in 2..=*ks.end() {
            p = &p * &b;
            if ks.contains(&k) && p == *a {
                out.push((k, b.clone()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn depth_bounds_are_sound_on_a_fixed_list() {
    let list = hyperbolic_list();
    assert_eq!(list.len(), 20);
    for a in &list {
        assert!(a.det() == BigInt::from(1), "{a}");
        let d = depth_root_bound(a, None, DEFAULT_ROOT_CANDIDATES).unwrap();
        assert!(d.b.unwrap() > 1.0 && d.b.unwrap().powi(d.q.unwrap() as i32) > d.k_upper);
        assert!(d.is_consistent(), "{a}: {:?}", d.search.roots);
        if a.n() == 2 {
            let bound = d.search.box_bound.min(8);
            let mut found = naive_roots(a, bound, d.search.exponents.clone());
            let mut centralized =
                centralizer_root_search(a, bound, d.search.exponents.clone(), u128::MAX).unwrap().roots;
            centralized.sort();
            found.sort();
            assert_eq!(found, centralized, "{a}");
            assert!(found.iter().all(|(k, _)| *k < d.depth));
        }
    }
}
