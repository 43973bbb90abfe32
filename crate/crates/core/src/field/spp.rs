use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use serde::Serialize;

use super::family::subset_product;
use super::{Family, ProblemInstance};
use crate::error::{Error, Result};

/// Longest sequence the exhaustive solver accepts.
pub const SPP_MAX_N: usize = 24;

/// Subset product target `prod C_i^(b_i) = target`, or `prod C_i^(b_i 2^(i-1))` when weighted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SppInstance {
    pub p: u64,
    pub c: Vec<u64>,
    pub target: u64,
    pub weighted: bool,
}

impl SppInstance {
    pub fn from_instance(inst: &ProblemInstance) -> Result<Self> {
        match (&inst.family, &inst.spp_data) {
            (Family::Spp, Some(c)) => Ok(SppInstance { p: inst.field.p, c: c.clone(), target: inst.y, weighted: false }),
            _ => Err(Error::InvalidArgument(format!("{} is not an SPP instance", inst.family))),
        }
    }

    pub fn value(&self, mask: u64) -> u64 {
        subset_product(&self.c, mask, self.p, self.weighted)
    }
}

/// `b_1 b_2 ... b_n` with `b_1` the lowest bit of `mask`.
pub fn bits(mask: u64, n: usize) -> String {
    (0..n).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Every nonzero mask whose subset product hits the target.
pub fn spp_solve_exhaustive(inst: &SppInstance) -> Result<BTreeSet<u64>> {
    let n = inst.c.len();
    if n > SPP_MAX_N {
        return Err(Error::WorkBound { needed: 1u128 << n, bound: 1 << SPP_MAX_N });
    }
    Ok((1..1u64 << n).filter(|&mask| inst.value(mask) == inst.target % inst.p).collect())
}

/// Knapsack density `n / lg p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Density {
    #[serde(serialize_with = "ratio_text")]
    pub value: BigRational,
    pub above_one: bool,
}

fn ratio_text<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl Density {
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// `n / lg p` as a rational over the double-precision logarithm. The flag is exact.
pub fn spp_density(n: u32, p: u64) -> Result<Density> {
    if p < 3 || n == 0 {
        return Err(Error::InvalidArgument(format!("density needs p >= 3 and n >= 1, got p={p} n={n}")));
    }
    let lg = BigRational::from_f64((p as f64).log2()).expect("finite logarithm");
    let value = BigRational::from_integer(BigInt::from(n)) / lg;
    let above_one = n >= 64 || p < 1u64 << n;
    Ok(Density { value, above_one })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn example_string() {
        let inst = SppInstance { p: 13, c: vec![2, 3, 5, 7], target: 10, weighted: false };
        let sols = spp_solve_exhaustive(&inst).unwrap();
        assert!(sols.iter().any(|&m| bits(m, 4) == "1010"));
        for m in 1..16u64 {
            assert_eq!(sols.contains(&m), inst.value(m) == 10);
        }
    }

    #[test]
    fn degenerate_constants() {
        let all = SppInstance { p: 13, c: vec![1; 4], target: 1, weighted: false };
        assert_eq!(spp_solve_exhaustive(&all).unwrap().len(), 15);
        let none = SppInstance { target: 2, ..all };
        assert!(spp_solve_exhaustive(&none).unwrap().is_empty());
    }

    #[test]
    fn unit_target() {
        // 3^3 = 27 = 1 mod 13, so three copies of 3 multiply to one
        let inst = SppInstance { p: 13, c: vec![3, 3, 3, 5], target: 1, weighted: false };
        assert_eq!(spp_solve_exhaustive(&inst).unwrap(), BTreeSet::from([0b0111]));
    }

    #[test]
    fn from_problem_instance() {
        let inst = ProblemInstance::spp(make_field(13, Some(2)).unwrap(), vec![2, 3, 5, 7], 10).unwrap();
        let s = SppInstance::from_instance(&inst).unwrap();
        assert_eq!(spp_solve_exhaustive(&s).unwrap(), crate::field::solve_exhaustive(&inst, None).unwrap());
    }

    #[test]
    fn too_long() {
        let inst = SppInstance { p: 13, c: vec![2; 25], target: 1, weighted: false };
        assert!(matches!(spp_solve_exhaustive(&inst), Err(Error::WorkBound { .. })));
    }

    #[test]
    fn densities() {
        let lg13 = 13f64.log2();
        for (n, above) in [(8u32, true), (4, true), (3, false)] {
            let d = spp_density(n, 13).unwrap();
            assert!((d.to_f64() - n as f64 / lg13).abs() < 1e-12);
            assert_eq!(d.above_one, above);
        }
        assert!((spp_density(8, 13).unwrap().to_f64() - 2.162).abs() < 1e-3);
        assert!((spp_density(3, 13).unwrap().to_f64() - 0.811).abs() < 1e-3);
    }
}
