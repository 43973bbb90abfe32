use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use serde::Serialize;

use super::{inv_mod, mul_mod, pow_mod, FieldParams, ProblemInstance};
use crate::error::{Error, Result};

/// Cap on exhaustive work (domain size).
pub const DEFAULT_WORK_BOUND: u64 = 1 << 26;

pub fn solve_exhaustive(inst: &ProblemInstance, domain: Option<&[u64]>) -> Result<BTreeSet<u64>> {
    solve_exhaustive_bounded(inst, domain, DEFAULT_WORK_BOUND)
}

/// All `x` in `domain` (default `[1, max_x]`) with `f(x) = y`. Explicit domains skip the range check.
pub fn solve_exhaustive_bounded(inst: &ProblemInstance, domain: Option<&[u64]>, bound: u64) -> Result<BTreeSet<u64>> {
    let size = domain.map_or(inst.max_x(), |d| d.len() as u64);
    if size > bound {
        return Err(Error::WorkBound { needed: size as u128, bound });
    }
    Ok(match domain {
        Some(d) => d.iter().copied().filter(|&x| inst.value_at(x) == inst.y).collect(),
        None => (1..=inst.max_x()).filter(|&x| inst.value_at(x) == inst.y).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dlp {
    pub x: u64,
    /// Group multiplications spent.
    pub ops: u64,
}

/// Upper bound on `Dlp::ops` for a field of order `p - 1`.
pub fn bsgs_op_bound(p: u64) -> u64 {
    2 * ceil_sqrt(p - 1) + 1
}

fn ceil_sqrt(v: u64) -> u64 {
    let r = v.isqrt();
    if r * r < v {
        r + 1
    } else {
        r
    }
}

/// Baby-step table, reusable across targets in one field.
pub(crate) struct Bsgs {
    p: u64,
    m: u64,
    table: HashMap<u64, u64>,
    giant: u64,
}

impl Bsgs {
    pub(crate) fn new(field: &FieldParams) -> (Self, u64) {
        let p = field.p;
        let order = p - 1;
        let m = ceil_sqrt(order);
        let mut table = HashMap::with_capacity(m as usize);
        let mut cur = 1u64;
        for j in 0..m {
            table.entry(cur).or_insert(j);
            cur = mul_mod(cur, field.g, p);
        }
        let giant = inv_mod(pow_mod(field.g, m, p), p).expect("generator is a unit");
        // m baby multiplications plus the inversion
        (Bsgs { p, m, table, giant }, m + 1)
    }

    pub(crate) fn solve(&self, y: u64) -> (u64, u64) {
        let mut gamma = y % self.p;
        for i in 0..self.m {
            if let Some(&j) = self.table.get(&gamma) {
                let x = (i * self.m + j) % (self.p - 1);
                return (if x == 0 { self.p - 1 } else { x }, i);
            }
            gamma = mul_mod(gamma, self.giant, self.p);
        }
        unreachable!("g generates the group")
    }
}

/// Baby-step giant-step discrete log with `x` in `[1, p-1]`.
pub fn solve_dlp_bsgs(field: &FieldParams, y: u64) -> Result<Dlp> {
    if !(1..field.p).contains(&y) {
        return Err(Error::InvalidArgument(format!("y={y} outside [1, {}]", field.p - 1)));
    }
    let (b, setup) = Bsgs::new(field);
    let (x, giant) = b.solve(y);
    Ok(Dlp { x, ops: setup + giant })
}

/// Merges `x = a mod m` and `x = b mod n` for any moduli; `None` when inconsistent.
pub fn crt_merge((a, m): (u64, u64), (b, n): (u64, u64)) -> Option<(u64, u64)> {
    let (a, m, b, n) = (a as i128 % m as i128, m as i128, b as i128 % n as i128, n as i128);
    let e = m.extended_gcd(&n);
    if (b - a) % e.gcd != 0 {
        return None;
    }
    let l = m / e.gcd * n;
    let ng = n / e.gcd;
    let k = ((b - a) / e.gcd).rem_euclid(ng) as u128 * e.x.rem_euclid(ng) as u128 % ng as u128;
    let k = k as i128;
    let x = (a + m * k).rem_euclid(l);
    Some((u64::try_from(x).ok()?, u64::try_from(l).ok()?))
}

/// Unique `x < prod m_i` with `x = x_i mod m_i`; moduli must be pairwise coprime.
pub fn crt_combine(residues: &[(u64, u64)]) -> Result<u64> {
    for (i, &(_, mi)) in residues.iter().enumerate() {
        if mi == 0 {
            return Err(Error::InvalidArgument("zero modulus".into()));
        }
        if let Some(&(_, mj)) = residues[i + 1..].iter().find(|&&(_, mj)| mi.gcd(&mj) != 1) {
            return Err(Error::InvalidArgument(format!("moduli {mi} and {mj} are not coprime")));
        }
    }
    let mut acc = (0u64, 1u64);
    for &r in residues {
        acc = crt_merge(acc, r).ok_or_else(|| Error::InvalidArgument("modulus product overflows".into()))?;
    }
    Ok(acc.0)
}
