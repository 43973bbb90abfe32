use std::collections::{BTreeMap, BTreeSet};

use agr_core::empirics::preimage_census;
use agr_core::field::*;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 3] = [7, 11, 13];

// big-integer evaluation straight from the formulas, with full-size exponents
fn reference(f: Family, x: u64, p: u64, g: u64, g1: u64, n: u32) -> u64 {
    let big = BigUint::from;
    let m = big(p);
    let pw = |b: u64, e: &BigUint| big(b).modpow(e, &m);
    let xn = big(x).pow(n);
    let v = match f {
        Family::Id => big(x) % &m,
        Family::Recip => {
            let inv = (1..p).find(|&i| i * x % p == 1).unwrap();
            big(p - inv)
        }
        Family::Dlp => pw(g, &big(x)),
        Family::Tlp => pw(x, &big(x)),
        Family::Rfp => xn % &m,
        Family::Gxn => pw(g, &xn),
        Family::Poly => (xn + big(x) + big(1)) % &m,
        Family::Ggx => pw(g, &big(g1).pow(x as u32)),
        Family::Xngx => xn * pw(g, &big(x)) % &m,
        Family::Xgx => big(x) * pw(g, &big(x)) % &m,
        Family::Gxxx => pw(g, &big(x)) * pw(x, &big(x)) % &m,
        Family::GxShift => pw(g * x, &big(x)),
        Family::Spp => unreachable!(),
    };
    u64::try_from(v).unwrap()
}

fn families() -> impl Iterator<Item = Family> {
    Family::ALL.into_iter().filter(|&f| f != Family::Spp)
}

fn shift_generator(p: u64) -> u64 {
    (2..p).find(|&a| is_generator(a, p) && num_integer::gcd(a, p - 1) == 1).unwrap()
}

fn exhaustive(f: Family, field: &FieldParams, n: Option<u32>, y: u64) -> BTreeSet<u64> {
    solve_exhaustive(&ProblemInstance::new(f, field.clone(), n, y).unwrap(), None).unwrap()
}

#[test]
fn family_values_match_big_integer_reference() {
    for p in PRIMES {
        let field = make_field(p, None).unwrap();
        let g1 = field.g1.unwrap();
        for f in families() {
            let inst = ProblemInstance::new(f, field.clone(), Some(5), 1).unwrap();
            for x in 1..p {
                assert_eq!(inst.eval(x).unwrap(), reference(f, x, p, field.g, g1, 5), "{f} p={p} x={x}");
            }
        }
    }
}

#[test]
fn exhaustive_is_sound_and_complete() {
    for p in PRIMES {
        let field = make_field(p, None).unwrap();
        for f in families() {
            let mut seen = BTreeSet::new();
            for y in 1..p {
                let inst = ProblemInstance::new(f, field.clone(), Some(5), y).unwrap();
                let xs = solve_exhaustive(&inst, None).unwrap();
                for &x in &xs {
                    assert_eq!(inst.eval(x).unwrap(), y);
                    assert!(seen.insert(x), "{x} solves two targets");
                }
            }
            let zeros = (1..p).filter(|&x| reference(f, x, p, field.g, field.g1.unwrap(), 5) == 0).count();
            assert_eq!(seen.len() + zeros, (p - 1) as usize, "{f} p={p}");
        }
    }
}

#[test]
fn gx_shift_matches_exhaustive() {
    for p in PRIMES {
        let field = make_field(p, Some(shift_generator(p))).unwrap();
        for y in 1..p {
            let (xs, trace) = reduce_gx_shift(y, &field, exhaustive_tlp_oracle(p)).unwrap();
            assert_eq!(xs, exhaustive(Family::GxShift, &field, None, y), "p={p} y={y}");
            // replay: z from y, then every recorded x was checked directly
            assert_eq!(trace.steps[0].values["z"], pow_mod(y, field.g, p).to_string());
            for s in trace.steps.iter().filter(|s| s.values.get("verified").is_some_and(|v| v == "true")) {
                let x: u64 = s.values["x"].parse().unwrap();
                assert!(xs.contains(&x));
            }
        }
    }
}

#[test]
fn gxxx_matches_exhaustive() {
    for p in PRIMES {
        let field = make_field(p, None).unwrap();
        for y in 1..p {
            let (xs, trace) = solve_gxxx(&field, y).unwrap();
            assert_eq!(xs, exhaustive(Family::Gxxx, &field, None, y), "p={p} y={y}");
            assert_eq!(trace.steps.len() as u64, p);
        }
    }
}

#[test]
fn gxn_matches_exhaustive() {
    for p in PRIMES {
        let field = make_field(p, None).unwrap();
        for n in [5, 6, 7] {
            for y in 1..p {
                let (xs, _) = reduce_gxn_to_dlp(y, &field, n, |t| solve_dlp_bsgs(&field, t).map(|d| d.x)).unwrap();
                assert_eq!(xs, exhaustive(Family::Gxn, &field, Some(n), y), "p={p} n={n} y={y}");
            }
        }
    }
}

#[test]
fn dlp_spp_matches_exhaustive() {
    for p in PRIMES {
        let field = make_field(p, None).unwrap();
        let n = 64 - (p - 1).leading_zeros();
        for y in 1..p {
            let (x, _) = reduce_dlp_to_spp(y, &field, n, spp_solve_exhaustive).unwrap();
            assert_eq!(BTreeSet::from([x]), exhaustive(Family::Dlp, &field, None, y));
        }
    }
}

#[test]
fn composite_crt_matches_exhaustive() {
    for (p, q) in [(3, 5), (5, 7), (3, 7)] {
        let m = p * q;
        for f in families().filter(|&f| f != Family::Recip) {
            let params = CompositeParams { g1: Some(5), n: Some(5), ..CompositeParams::new(p, q, 2) };
            if f == Family::Ggx && num_integer::gcd(5, (p - 1) * (q - 1)) != 1 {
                continue;
            }
            for y in 0..m {
                let (xs, _) = reduce_composite_crt(y, f, &params, exhaustive_prime_oracle).unwrap();
                assert_eq!(xs, params.solve_exhaustive(f, y).unwrap(), "{f} m={m} y={y}");
            }
        }
        let params = CompositeParams::new(p, q, 2);
        assert!(reduce_composite_crt(1, Family::Recip, &params, exhaustive_prime_oracle).is_err());
    }
}

#[test]
fn bsgs_agrees_with_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let primes: Vec<u64> = (3..10007).filter(|&p| is_prime(p)).collect();
    for _ in 0..100 {
        let p = primes[rng.gen_range(0..primes.len())];
        let field = make_field(p, None).unwrap();
        let y = rng.gen_range(1..p);
        let d = solve_dlp_bsgs(&field, y).unwrap();
        assert_eq!(BTreeSet::from([d.x]), exhaustive(Family::Dlp, &field, None, y));
        assert!(d.ops <= bsgs_op_bound(p));
    }
}

#[test]
fn crt_round_trip() {
    for x in 0..15 {
        assert_eq!(crt_combine(&[(x % 3, 3), (x % 5, 5)]).unwrap(), x);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let (p, q) = (1_000_003u64, 998_244_353u64);
        let x = rng.gen_range(0..p * q);
        assert_eq!(crt_combine(&[(x % p, p), (x % q, q)]).unwrap(), x);
    }
}

#[test]
fn tlp_census_at_seven() {
    let field = make_field(7, Some(3)).unwrap();
    let mut counts = BTreeMap::new();
    for x in 1..7u64 {
        *counts.entry(x.pow(x as u32) % 7).or_insert(0u64) += 1;
    }
    let mut hist = BTreeMap::new();
    for y in 1..7 {
        *hist.entry(counts.get(&y).copied().unwrap_or(0)).or_insert(0u64) += 1;
    }
    let c = preimage_census(Family::Tlp, &field, 5).unwrap();
    assert_eq!(c.histogram, hist);
    assert_eq!(counts[&4], 2);
    assert!(c.max > 1);
}

#[test]
fn census_conservation() {
    for p in PRIMES {
        let field = make_field(p, None).unwrap();
        for f in families() {
            assert_eq!(preimage_census(f, &field, 5).unwrap().total(), p - 1, "{f} p={p}");
        }
        assert_eq!(preimage_census(Family::Dlp, &field, 5).unwrap().max, 1);
    }
}

#[test]
fn scaling_by_g_is_a_bijection() {
    for p in [5u64, 7, 11, 13, 101] {
        for g in (1..p).filter(|&g| num_integer::gcd(g, p - 1) == 1) {
            let q2: BTreeSet<u64> = (1..p).map(|a| a * g).collect();
            assert_eq!(q2.len() as u64, p - 1);
            let back: BTreeSet<u64> = q2.iter().map(|w| w / g).collect();
            assert_eq!(back, (1..p).collect());
        }
    }
}
