//! Extended-precision reals for bound evaluation.

use dashu_float::round::mode::Zero;
use dashu_float::FBig;
use dashu_int::ops::BitTest;
use dashu_int::UBig;
use num_bigint::BigUint;

/// Binary floating point with a 128-bit significand, rounded toward zero.
pub type Real = FBig<Zero, 2>;

pub const PRECISION_BITS: usize = 128;

/// How real-valued bounds are evaluated; echoed in every report.
pub const PRECISION_NOTE: &str = "binary floating point, 128-bit significand, rounded toward zero";

pub fn from_big(x: &BigUint) -> Real {
    Real::from(UBig::from_le_bytes(&x.to_bytes_le()))
        .with_precision(PRECISION_BITS)
        .value()
}

pub fn from_u64(x: u64) -> Real {
    Real::from(x).with_precision(PRECISION_BITS).value()
}

pub fn ratio(num: &BigUint, den: &BigUint) -> Real {
    from_big(num) / from_big(den)
}

pub fn sqrt2() -> Real {
    from_u64(2).sqrt()
}

/// `2^(-e/2)`.
pub fn pow2_neg_half(e: u64) -> Real {
    let whole = from_u64(1) >> (e / 2) as isize;
    if e % 2 == 1 {
        whole / sqrt2()
    } else {
        whole
    }
}

/// Decimal scientific notation with 20 significant digits.
pub fn decimal(x: &Real) -> String {
    if *x == Real::ZERO {
        return "0".into();
    }
    let d = x.clone().with_base::<10>().value().with_precision(20).value();
    format!("{d:e}")
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

/// Base-2 logarithm, `None` for zero.
pub fn log2(x: &Real) -> Option<f64> {
    if *x <= Real::ZERO {
        return None;
    }
    let repr = x.repr();
    let sig = repr.significand();
    let bits = sig.bit_len() as isize;
    // top bits of the significand as a float in [1, 2)
    let shift = (bits - 60).max(0) as usize;
    let top: u64 = (sig.clone() >> shift).try_into().unwrap_or(u64::MAX);
    let mantissa = top as f64;
    Some(mantissa.log2() + (shift as isize + repr.exponent()) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_and_roots() {
        let a = pow2_neg_half(3);
        assert!((to_f64(&a) - 2f64.powf(-1.5)).abs() < 1e-15);
        assert!((log2(&pow2_neg_half(5001)).unwrap() + 2500.5).abs() < 1e-9);
        let s = sqrt2();
        let gap = from_u64(2) - s.clone() * s;
        assert!(log2(&gap).unwrap() < -120.0);
        assert_eq!(log2(&Real::ZERO), None);
    }

    #[test]
    fn decimal_output() {
        assert_eq!(decimal(&ratio(&BigUint::from(1u32), &BigUint::from(4u32))), "2.5e-1");
        let tiny = pow2_neg_half(10000);
        assert!(decimal(&tiny).ends_with("e-1506"), "{}", decimal(&tiny));
        assert_eq!(decimal(&Real::ZERO), "0");
    }
}
