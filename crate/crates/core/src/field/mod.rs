//! Small prime fields and the modular problem families built on them.

mod family;
mod reduce;
mod solve;
mod spp;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use family::{apply, Family, ProblemInstance};
pub use reduce::{
    exhaustive_prime_oracle, exhaustive_tlp_oracle, reduce_composite_crt, reduce_dlp_to_spp, reduce_gx_shift,
    reduce_gx_shift_base, reduce_gxn_to_dlp, solve_gxxx, CompositeParams, ReductionTrace, TraceStep,
};
pub use solve::{
    bsgs_op_bound, crt_combine, crt_merge, solve_dlp_bsgs, solve_exhaustive, solve_exhaustive_bounded, Dlp,
    DEFAULT_WORK_BOUND,
};
pub use spp::{bits, spp_density, spp_solve_exhaustive, Density, SppInstance, SPP_MAX_N};

/// Largest prime accepted for field setup.
pub const MAX_PRIME: u64 = 1 << 32;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = ((a % m) as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division; fine for `n <= 2^32`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `a` modulo the prime `p` is `p - 1`.
pub fn is_generator(a: u64, p: u64) -> bool {
    if a.is_multiple_of(p) {
        return false;
    }
    factorize(p - 1).iter().all(|(q, _)| pow_mod(a, (p - 1) / q, p) != 1)
}

fn as_text<S: Serializer>(v: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn as_text_opt<S: Serializer>(v: &Option<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn as_text_list<S: Serializer>(v: &[u64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldParams {
    #[serde(serialize_with = "as_text")]
    pub p: u64,
    #[serde(serialize_with = "as_text")]
    pub g: u64,
    #[serde(serialize_with = "as_text_list")]
    pub phi_tower: [u64; 3],
    /// Unit modulo `p - 1` used by nested exponentials.
    #[serde(serialize_with = "as_text_opt")]
    pub g1: Option<u64>,
}

impl FieldParams {
    pub fn order(&self) -> u64 {
        self.p - 1
    }

    /// Per-prime piece of a composite modulus: `g` is only reduced, not checked.
    pub(crate) fn raw(p: u64, g: u64, g1: Option<u64>) -> Self {
        let phi1 = p - 1;
        FieldParams { p, g: g % p, phi_tower: [p, phi1, totient(phi1)], g1 }
    }
}

/// Validates `p`, finds (or checks) a generator and computes the phi tower.
pub fn make_field(p: u64, g: Option<u64>) -> Result<FieldParams> {
    make_field_with(p, g, None)
}

pub fn make_field_with(p: u64, g: Option<u64>, g1: Option<u64>) -> Result<FieldParams> {
    if !(3..=MAX_PRIME).contains(&p) {
        return Err(Error::InvalidArgument(format!("prime {p} outside [3, 2^32]")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let g = match g {
        Some(g) if is_generator(g, p) => g,
        Some(g) => return Err(Error::NotGenerator { g, p }),
        None => (2..p).find(|&a| is_generator(a, p)).expect("cyclic group"),
    };
    let phi1 = p - 1;
    let phi2 = totient(phi1);
    let g1 = match g1 {
        Some(v) if v > 1 && v.gcd(&phi1) == 1 => Some(v % phi1),
        Some(v) => return Err(Error::InvalidArgument(format!("g1={v} is not a unit modulo {phi1}"))),
        None => (2..phi1).find(|&a| a.gcd(&phi1) == 1),
    };
    Ok(FieldParams { p, g, phi_tower: [p, phi1, phi2], g1 })
}
