//! Classical orthogonal polynomials from their three-term recurrences, with
//! exact rational coefficients.
//!
//! These are independent references for cross-checking the operator-built
//! eigenpolynomials: at N = 1 the eigenpolynomials reduce to generalized
//! Laguerre polynomials in y = x^2, and the Gaussian smoothing of x^n gives
//! the (2^-n scaled) Hermite polynomials. Nothing here touches the operator
//! machinery.

use num_bigint::BigInt;
use num_traits::One;

use crate::rational::{rat_int, Rational};
use crate::symfun::{Partition, SymPoly, VarTag};

/// Generalized Laguerre polynomial L_n^(a) in one variable (tag Y), from
///
/// ```text
/// L_0 = 1,  L_1 = 1 + a - y,
/// (k+1) L_{k+1} = (2k + 1 + a - y) L_k - (k + a) L_{k-1}
/// ```
pub fn laguerre(n: usize, a: &Rational) -> SymPoly {
    let y = SymPoly::monomial(Partition::new(vec![1]).unwrap(), 1, VarTag::Y).unwrap();
    let mut prev = SymPoly::one(1, VarTag::Y); // L_0
    if n == 0 {
        return prev;
    }
    let mut curr = SymPoly::constant(Rational::one() + a, 1, VarTag::Y)
        .sub(&y)
        .unwrap(); // L_1
    for k in 1..n {
        let k_rat = rat_int(k as i64);
        let linear = SymPoly::constant(&k_rat * rat_int(2) + Rational::one() + a, 1, VarTag::Y)
            .sub(&y)
            .unwrap();
        let next = linear
            .multiply(&curr)
            .unwrap()
            .sub(&prev.scale(&(&k_rat + a)))
            .unwrap()
            .scale(&Rational::new(BigInt::one(), BigInt::from(k + 1)));
        prev = curr;
        curr = next;
    }
    curr
}

/// Hermite polynomial H_n in one variable (tag X), from
///
/// ```text
/// H_0 = 1,  H_1 = 2x,  H_{k+1} = 2x H_k - 2k H_{k-1}
/// ```
pub fn hermite(n: usize) -> SymPoly {
    let two_x = SymPoly::monomial(Partition::new(vec![1]).unwrap(), 1, VarTag::X)
        .unwrap()
        .scale(&rat_int(2));
    let mut prev = SymPoly::one(1, VarTag::X); // H_0
    if n == 0 {
        return prev;
    }
    let mut curr = two_x.clone(); // H_1
    for k in 1..n {
        let next = two_x
            .multiply(&curr)
            .unwrap()
            .sub(&prev.scale(&rat_int(2 * k as i64)))
            .unwrap();
        prev = curr;
        curr = next;
    }
    curr
}
