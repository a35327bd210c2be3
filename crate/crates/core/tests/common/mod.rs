//! Font expressions of the level-4 family, shared by several test targets.

#![allow(dead_code)]

use tanglechain::fonts::{font_determinant, FontSpec};
use tanglechain::poly::{CoeffPoly, RationalComplex};

pub fn q(num: i64, den: i64) -> RationalComplex {
    RationalComplex::ratio(num, den)
}

/// Four-qubit font transposed on qubit 1 with `S1 = {1, 2} ∪ extra`.
pub fn d4(extra: &[(usize, u8)], fixed: &[(usize, u8)]) -> CoeffPoly {
    let mut s1 = vec![(1, 0), (2, 0)];
    s1.extend_from_slice(extra);
    font_determinant(&FontSpec::new(4, 1, s1, fixed.to_vec()).unwrap())
}

/// `D^{00}_{(A3)_a (A4)_b}`.
pub fn two_way(a: u8, b: u8) -> CoeffPoly {
    d4(&[], &[(3, a), (4, b)])
}

/// `D^{000}_{(A4)_b} + D^{001}_{(A4)_b}`.
pub fn three_way_a3(b: u8) -> CoeffPoly {
    &d4(&[(3, 0)], &[(4, b)]) + &d4(&[(3, 1)], &[(4, b)])
}

/// `D^{000}_{(A3)_a} + D^{001}_{(A3)_a}`.
pub fn three_way_a4(a: u8) -> CoeffPoly {
    &d4(&[(4, 0)], &[(3, a)]) + &d4(&[(4, 1)], &[(3, a)])
}

/// `D^{0000} + D^{0001} + D^{0010} + D^{0011}`.
pub fn four_way() -> CoeffPoly {
    let mut sum = CoeffPoly::zero(4);
    for b3 in 0..2 {
        for b4 in 0..2 {
            sum = &sum + &d4(&[(3, b3), (4, b4)], &[]);
        }
    }
    sum
}

/// Members 0 to 4 of the family over qubit 4, written with font determinants.
pub fn level4_expected() -> Vec<CoeffPoly> {
    let m0 = &(&two_way(1, 0) * &two_way(0, 0)).scale(&q(4, 1)) - &three_way_a3(0).pow(2).unwrap();
    let m1 = &(&(&two_way(1, 0) * &three_way_a4(0)) + &(&two_way(0, 0) * &three_way_a4(1)))
        - &(&three_way_a3(0) * &four_way()).scale(&q(1, 2));
    let a = (&three_way_a4(1) * &three_way_a4(0)).scale(&q(2, 3));
    let b = (&(&two_way(1, 0) * &two_way(0, 1)) + &(&two_way(0, 0) * &two_way(1, 1))).scale(&q(2, 3));
    let c = four_way().pow(2).unwrap().scale(&q(1, 6));
    let d = (&three_way_a3(0) * &three_way_a3(1)).scale(&q(1, 3));
    let m2 = &(&(&a + &b) - &c) - &d;
    let m3 = &(&(&two_way(1, 1) * &three_way_a4(0)) + &(&three_way_a4(1) * &two_way(0, 1)))
        - &(&four_way() * &three_way_a3(1)).scale(&q(1, 2));
    let m4 = &(&two_way(1, 1) * &two_way(0, 1)).scale(&q(4, 1)) - &three_way_a3(1).pow(2).unwrap();
    vec![m0, m1, m2, m3, m4]
}
