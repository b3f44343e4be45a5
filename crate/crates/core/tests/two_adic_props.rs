mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbcm::two_adic::{deg2, geom_sum, inv_mod2, solve_linear, sqrt_lift, Valuation};

fn m(e: u32) -> i128 {
    1i128 << e
}

fn sq_mod(x: i128, e: u32) -> i128 {
    (x * x).rem_euclid(m(e))
}

/// A random admissible `(s, h, e, target)` with `s^2 == h (mod 2^e)`.
fn instance(rng: &mut ChaCha8Rng) -> (i64, i64, u32, u32) {
    let e = rng.gen_range(3..=20u32);
    let target = rng.gen_range(e + 1..=40u32);
    let s = rng.gen_range(-(1i64 << 20)..(1i64 << 20)) | 1;
    let h = s * s + rng.gen_range(-(1i64 << 20)..(1i64 << 20)) * (1i64 << e);
    (s, h, e, target)
}

#[test]
fn sqrt_lift_postconditions_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(common::seed());
    for _ in 0..1000 {
        let (s, h, e, target) = instance(&mut rng);
        let r = sqrt_lift(s, h, e, target).unwrap();
        assert_eq!(r.exponent(), target);
        let v = r.value() as i128;
        assert_eq!(sq_mod(v, target), (h as i128).rem_euclid(m(target)), "{s} {h} {e} {target}");
        assert_eq!((v - s as i128).rem_euclid(m(e - 1)), 0, "{s} {h} {e} {target}");
    }
}

#[test]
fn sqrt_lift_matches_root_search() {
    for target in 4..=12u32 {
        // roots[h] = every r mod 2^target with r^2 == h
        let mut roots = vec![Vec::new(); 1 << target];
        for r in 0..m(target) {
            roots[sq_mod(r, target) as usize].push(r);
        }
        for e in 3..=6u32.min(target - 1) {
            for s in (1..m(e)).step_by(2) {
                for h in (0..m(target)).filter(|&h| sq_mod(s, e) == h % m(e)) {
                    let wanted: Vec<i128> =
                        roots[h as usize].iter().copied().filter(|&r| (r - s).rem_euclid(m(e - 1)) == 0).collect();
                    match sqrt_lift(s as i64, h as i64, e, target) {
                        Ok(v) => assert!(wanted.contains(&(v.value() as i128)), "s={s} h={h} e={e} t={target}"),
                        Err(err) => panic!("s={s} h={h} e={e} t={target}: {err}; search found {wanted:?}"),
                    }
                    assert!(!wanted.is_empty());
                }
            }
        }
    }
}

#[test]
fn sqrt_lift_rejects_non_roots() {
    assert!(sqrt_lift(3, 10, 3, 8).is_err());
    assert!(sqrt_lift(2, 4, 3, 8).is_err());
    assert!(sqrt_lift(1, 1, 2, 8).is_err());
    assert!(sqrt_lift(1, 1, 5, 5).is_err());
}

#[test]
fn geom_sum_matches_naive_sum() {
    for e in [1u32, 5, 12, 31] {
        for s in [-7i64, -1, 0, 1, 2, 3, 5, 17, 1 << 20] {
            let n = m(e);
            let mut acc = 0i128;
            let mut p = 1i128;
            for u in 0..=4096u64 {
                assert_eq!(geom_sum(s, u, e).value() as i128, acc, "s={s} u={u} e={e}");
                acc = (acc + p).rem_euclid(n);
                p = (p * s as i128).rem_euclid(n);
            }
        }
    }
}

#[test]
fn solve_linear_matches_scan() {
    for e in 1..=12u32 {
        let n = m(e);
        for a in (-3..n + 3).step_by(((n / 37).max(1)) as usize) {
            for b in [0, 1, 2, 6, 8, n - 1, n / 2 + 4] {
                let scan: Vec<u64> = (0..n).filter(|x| (a * x - b).rem_euclid(n) == 0).map(|x| x as u64).collect();
                let got: Vec<u64> = solve_linear(a as i64, b as i64, e).iter().map(|r| r.value()).collect();
                assert_eq!(got, scan, "a={a} b={b} e={e}");
                if !scan.is_empty() {
                    let k = match deg2(a.rem_euclid(n)) {
                        Valuation::Finite(k) => k.min(e),
                        Valuation::Infinity => e,
                    };
                    assert_eq!(scan.len(), 1 << k);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(common::config(1000))]

    #[test]
    fn inverse_is_a_unit_inverse(u in any::<i64>(), e in 1u32..=62) {
        let u = u | 1;
        let v = inv_mod2(u, e).unwrap().value() as i128;
        prop_assert_eq!((u as i128 * v).rem_euclid(m(e)), 1);
    }

    #[test]
    fn deg2_divides_exactly(u in any::<i64>().prop_filter("nonzero", |u| *u != 0)) {
        let Valuation::Finite(k) = deg2(u as i128) else { panic!("finite") };
        prop_assert_eq!((u as i128) % (1i128 << k), 0);
        prop_assert_ne!(((u as i128) >> k) % 2, 0);
    }

    #[test]
    fn sqrt_lift_lifted_value_is_a_root(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, h, e, target) = instance(&mut rng);
        let v = sqrt_lift(s, h, e, target).unwrap().value() as i128;
        prop_assert_eq!(sq_mod(v, target), (h as i128).rem_euclid(m(target)));
    }
}
