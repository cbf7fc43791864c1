//! Degree-graded differential operators acting exactly on symmetric polynomials.
//!
//! - [`ModelParams`]: particle number and exact-rational couplings, with the
//!   derived constants g^2, g1^2, E0, E0'.
//! - [`apply_euler`] / [`apply_euler_componentwise`]: the Euler operator
//!   sum_i x_i d/dx_i, which multiplies a homogeneous polynomial by its
//!   x-space degree.
//! - [`apply_f`]: the lowering operator F of the similarity-transformed
//!   Hamiltonian H~ = D + E0 + F, acting in squared coordinates (tag Y).
//! - [`apply_a`]: the lowering operator A of the Calogero-Sutherland side,
//!   acting in plain coordinates (tag X).
//! - [`exp_graded`]: terminating operator exponential for grading-lowering
//!   operators, with the concrete series [`exp_half_f`], [`exp_neg_half_a`],
//!   and the Gaussian smoothing [`hermite_smooth`].
//! - [`apply_transformed_h`] / [`apply_transformed_h_cs`]: the transformed
//!   Hamiltonians assembled from the pieces above.
//!
//! Everything here is exact: divided differences cancel in closed form, so
//! no polynomial long division (and no rounding) happens anywhere.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, Rational};
use crate::symfun::{add_to_monomial_map, collect_monomial_map, SymPoly, VarTag};

fn rational_from_u32(n: u32) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

// ---- Model parameters ----

/// Particle number and couplings of the model, all exact rationals.
///
/// `lambda` weights the pair interactions, `lambda1` the one-body
/// inverse-square term, and `alpha` the pair coupling of the
/// Calogero-Sutherland side reached through the second similarity map.
/// Units are fixed to hbar = m = omega = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParams {
    n: usize,
    lambda: Rational,
    lambda1: Rational,
    alpha: Rational,
}

impl ModelParams {
    /// Couplings must be nonnegative; values in (0, 1) are accepted but
    /// flagged by [`ModelParams::normalizability_risk`] since the wavefunction
    /// normalizability there is unverified.
    pub fn new(n: usize, lambda: Rational, lambda1: Rational, alpha: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("particle number must be positive".into()));
        }
        for (name, v) in [("lambda", &lambda), ("lambda1", &lambda1), ("alpha", &alpha)] {
            if *v < Rational::zero() {
                return Err(Error::Domain(format!(
                    "{name} must be nonnegative, got {}",
                    format_rational(v)
                )));
            }
        }
        Ok(ModelParams {
            n,
            lambda,
            lambda1,
            alpha,
        })
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn lambda1(&self) -> &Rational {
        &self.lambda1
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// Pair coupling constant g^2 = lambda (lambda - 1).
    pub fn g_sq(&self) -> Rational {
        &self.lambda * (&self.lambda - Rational::one())
    }

    /// One-body coupling constant g1^2 = lambda1 (lambda1 - 1).
    pub fn g1_sq(&self) -> Rational {
        &self.lambda1 * (&self.lambda1 - Rational::one())
    }

    /// Ground-state energy E0 = N (1/2 + (N-1) lambda + lambda1).
    pub fn e0(&self) -> Rational {
        let n = rational_from_u32(self.n as u32);
        let n_minus_1 = rational_from_u32((self.n - 1) as u32);
        n * (rat(1, 2) + n_minus_1 * &self.lambda + &self.lambda1)
    }

    /// Calogero-Sutherland ground-state energy E0' = (N/2)(1 + alpha (N-1)).
    pub fn e0_prime(&self) -> Rational {
        let n = rational_from_u32(self.n as u32);
        let n_minus_1 = rational_from_u32((self.n - 1) as u32);
        n * rat(1, 2) * (Rational::one() + &self.alpha * n_minus_1)
    }

    /// True when lambda or lambda1 lies in (0, 1), where normalizability of
    /// the ground state is unverified. Reported, never rejected.
    pub fn normalizability_risk(&self) -> bool {
        let in_unit = |v: &Rational| *v > Rational::zero() && *v < Rational::one();
        in_unit(&self.lambda) || in_unit(&self.lambda1)
    }

    fn check_poly(&self, p: &SymPoly, tag: VarTag) -> Result<()> {
        if p.tag() != tag {
            return Err(Error::Contract(format!(
                "expected a polynomial in {} variables ({}), got tag {}",
                tag.as_str(),
                match tag {
                    VarTag::Y => "squared coordinates",
                    VarTag::X => "plain coordinates",
                },
                p.tag().as_str()
            )));
        }
        if p.n_vars() != self.n {
            return Err(Error::Contract(format!(
                "polynomial has {} variables but the model has {} particles",
                p.n_vars(),
                self.n
            )));
        }
        Ok(())
    }
}

/// Wire form of [`ModelParams`] with exact string couplings and the derived
/// constants spelled out.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelParamsJson {
    pub n_particles: usize,
    pub lambda: String,
    pub lambda1: String,
    pub alpha: String,
    pub g_sq: String,
    pub g1_sq: String,
    pub e0: String,
    pub e0_prime: String,
}

impl ModelParams {
    pub fn to_json(&self) -> ModelParamsJson {
        ModelParamsJson {
            n_particles: self.n,
            lambda: format_rational(&self.lambda),
            lambda1: format_rational(&self.lambda1),
            alpha: format_rational(&self.alpha),
            g_sq: format_rational(&self.g_sq()),
            g1_sq: format_rational(&self.g1_sq()),
            e0: format_rational(&self.e0()),
            e0_prime: format_rational(&self.e0_prime()),
        }
    }

    /// Rebuilds from the wire form; derived fields are recomputed, not trusted.
    pub fn from_json(json: &ModelParamsJson) -> Result<Self> {
        ModelParams::new(
            json.n_particles,
            parse_rational(&json.lambda)?,
            parse_rational(&json.lambda1)?,
            parse_rational(&json.alpha)?,
        )
    }
}

// ---- Euler operator ----

/// Euler operator sum_i x_i d/dx_i on a homogeneous polynomial: returns
/// d * p where d is the degree in the plain coordinates (2 * weight for tag
/// Y, weight for tag X). Inhomogeneous input is a contract violation;
/// callers decompose by degree first.
pub fn apply_euler(p: &SymPoly) -> Result<SymPoly> {
    match p.homogeneous_degree() {
        Some(w) => {
            let d = p.tag().x_degree(w);
            Ok(p.scale(&Rational::from_integer(BigInt::from(d))))
        }
        None => Err(Error::Contract(
            "Euler operator needs a homogeneous polynomial; decompose by degree first".into(),
        )),
    }
}

/// Euler operator extended linearly to inhomogeneous polynomials: each
/// homogeneous component is scaled by its own x-space degree.
pub fn apply_euler_componentwise(p: &SymPoly) -> SymPoly {
    let mut out = SymPoly::zero(p.n_vars(), p.tag());
    for (w, comp) in p.homogeneous_components() {
        let d = p.tag().x_degree(w);
        out = out
            .add(&comp.scale(&Rational::from_integer(BigInt::from(d))))
            .expect("components share n_vars and tag");
    }
    out
}

// ---- Lowering operator F (squared coordinates) ----

/// The lowering operator F of the transformed Hamiltonian, acting on
/// polynomials in the squared coordinates y_i = x_i^2:
///
/// ```text
/// F p = -[ sum_i (d_i + 2 y_i d_i^2) p
///          + 4 lambda sum_{i<j} (y_i d_i - y_j d_j) p / (y_i - y_j)
///          + 2 lambda1 sum_i d_i p ]
/// ```
///
/// This is the even-sector form of -(1/2 sum_i D_i^2 + sum_i b_i D_i) under
/// y = x^2, where b_i = d_i ln J is the log-derivative of the ground-state
/// Jastrow factor:
///
/// ```text
/// b_i = lambda sum_{j!=i} [1/(x_i - x_j) + 1/(x_i + x_j)] + lambda1 / x_i
///     = 2 lambda sum_{j!=i} x_i / (x_i^2 - x_j^2) + lambda1 / x_i
/// ```
///
/// Combining the two pair factors is what makes the divided-difference
/// weight 4 lambda in y (2 lambda per x-space ordered pair). The divided
/// differences cancel exactly on symmetric input, so the result is a
/// polynomial of Y-degree exactly one less (or zero).
pub fn apply_f(p: &SymPoly, params: &ModelParams) -> Result<SymPoly> {
    params.check_poly(p, VarTag::Y)?;
    let n = p.n_vars();
    let four_lambda = rat(4, 1) * params.lambda();
    let two_lambda1 = rat(2, 1) * params.lambda1();

    let mono = p.to_monomial_map();
    let mut out: HashMap<Vec<u32>, Rational> = HashMap::new();
    for (e, c) in &mono {
        // One-body pieces: (d_i + 2 y_i d_i^2) + 2 lambda1 d_i on y^e gives
        // [e_i (2 e_i - 1) + 2 lambda1 e_i] y^{e - delta_i}.
        for i in 0..n {
            let ei = e[i];
            if ei == 0 {
                continue;
            }
            let weight = rational_from_u32(ei * (2 * ei - 1)) + &two_lambda1 * rational_from_u32(ei);
            let mut shifted = e.clone();
            shifted[i] -= 1;
            add_to_monomial_map(&mut out, shifted, c * weight);
        }
        // Pair divided differences, one swap class {e, swap_ij(e)} at a time
        // (processed from the member with e_i > e_j; equal exponents give zero):
        // (a - b) (y_i y_j)^b sum_{k=0}^{a-b-1} y_i^k y_j^{a-b-1-k}.
        if four_lambda.is_zero() {
            continue;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (e[i], e[j]);
                if a <= b {
                    continue;
                }
                let class_coeff = c * &four_lambda * rational_from_u32(a - b);
                for k in 0..(a - b) {
                    let mut shifted = e.clone();
                    shifted[i] = b + k;
                    shifted[j] = a - 1 - k;
                    add_to_monomial_map(&mut out, shifted, class_coeff.clone());
                }
            }
        }
    }
    let result = collect_monomial_map(out, n, VarTag::Y).neg();
    assert_lowers_degree(p, &result, 1, "F");
    Ok(result)
}

// ---- Lowering operator A (plain coordinates) ----

/// The lowering operator A of the Calogero-Sutherland side, acting on
/// polynomials in the plain coordinates:
///
/// ```text
/// A p = 1/2 sum_i d_i^2 p + alpha sum_{i<j} (d_i - d_j) p / (x_i - x_j)
/// ```
///
/// Divided differences cancel exactly on symmetric input; the result has
/// x-degree exactly two less (or is zero).
pub fn apply_a(p: &SymPoly, params: &ModelParams) -> Result<SymPoly> {
    params.check_poly(p, VarTag::X)?;
    let n = p.n_vars();
    let alpha = params.alpha().clone();

    let mono = p.to_monomial_map();
    let mut out: HashMap<Vec<u32>, Rational> = HashMap::new();
    for (e, c) in &mono {
        // 1/2 sum_i d_i^2.
        for i in 0..n {
            let ei = e[i];
            if ei >= 2 {
                let weight = rational_from_u32(ei * (ei - 1)) * rat(1, 2);
                let mut shifted = e.clone();
                shifted[i] -= 2;
                add_to_monomial_map(&mut out, shifted, c * weight);
            }
        }
        if alpha.is_zero() {
            continue;
        }
        // Pair divided differences per swap class. With a = e_i, b = e_j:
        //   a > b:  a (x_i x_j)^b     sum_{k=0}^{a-b-2} x_i^k x_j^{a-b-2-k}
        //         - b (x_i x_j)^{b-1} sum_{k=0}^{a-b}   x_i^k x_j^{a-b-k}
        //   a = b:  -a (x_i x_j)^{a-1}   (singleton class)
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (e[i], e[j]);
                if a == b {
                    if a >= 1 {
                        let mut shifted = e.clone();
                        shifted[i] = a - 1;
                        shifted[j] = a - 1;
                        add_to_monomial_map(
                            &mut out,
                            shifted,
                            -(c * &alpha * rational_from_u32(a)),
                        );
                    }
                    continue;
                }
                if a < b {
                    continue; // class handled from its swapped member
                }
                let first = c * &alpha * rational_from_u32(a);
                for k in 0..(a - b).saturating_sub(1) {
                    let mut shifted = e.clone();
                    shifted[i] = b + k;
                    shifted[j] = a - 2 - k;
                    add_to_monomial_map(&mut out, shifted, first.clone());
                }
                if b >= 1 {
                    let second = -(c * &alpha * rational_from_u32(b));
                    for k in 0..=(a - b) {
                        let mut shifted = e.clone();
                        shifted[i] = b - 1 + k;
                        shifted[j] = a - 1 - k;
                        add_to_monomial_map(&mut out, shifted, second.clone());
                    }
                }
            }
        }
    }
    let result = collect_monomial_map(out, n, VarTag::X);
    assert_lowers_degree(p, &result, 2, "A");
    Ok(result)
}

/// sum_i d^2/dx_i^2 on a plain-coordinate polynomial (the grading part of
/// the Gaussian smoothing operator).
pub fn laplacian_x(p: &SymPoly) -> Result<SymPoly> {
    if p.tag() != VarTag::X {
        return Err(Error::Contract(
            "the x-space Laplacian acts on plain-coordinate (tag X) polynomials".into(),
        ));
    }
    let n = p.n_vars();
    let mono = p.to_monomial_map();
    let mut out: HashMap<Vec<u32>, Rational> = HashMap::new();
    for (e, c) in &mono {
        for i in 0..n {
            let ei = e[i];
            if ei >= 2 {
                let mut shifted = e.clone();
                shifted[i] -= 2;
                add_to_monomial_map(&mut out, shifted, c * rational_from_u32(ei * (ei - 1)));
            }
        }
    }
    Ok(collect_monomial_map(out, n, VarTag::X))
}

/// Internal grading check: on homogeneous input the lowering operators must
/// lower the weight by exactly `drop` (or annihilate).
fn assert_lowers_degree(input: &SymPoly, output: &SymPoly, drop: u64, name: &str) {
    if let Some(w) = input.homogeneous_degree() {
        if input.is_zero() || output.is_zero() {
            return;
        }
        assert_eq!(
            output.homogeneous_degree(),
            Some(w - drop),
            "operator {name} must lower the grading by exactly {drop}"
        );
    }
}

// ---- Terminating operator exponentials ----

/// exp(op) p = sum_k op^k p / k! for an operator that strictly lowers the
/// grading; the series terminates after at most max-degree applications.
///
/// The iteration cap is an internal safety net: a non-lowering `op` is a bug
/// and panics rather than looping.
pub fn exp_graded<F>(op: F, p: &SymPoly) -> Result<SymPoly>
where
    F: Fn(&SymPoly) -> Result<SymPoly>,
{
    let mut acc = p.clone();
    let mut term = p.clone();
    let cap = p.max_weight() + 2;
    let mut k: u64 = 1;
    while !term.is_zero() {
        assert!(k <= cap, "operator exponential failed to terminate");
        let applied = op(&term)?;
        term = applied.scale(&Rational::new(BigInt::one(), BigInt::from(k)));
        acc = acc.add(&term)?;
        k += 1;
    }
    Ok(acc)
}

/// exp(F/2), the map from homogeneous symmetric seeds to eigenpolynomials.
pub fn exp_half_f(p: &SymPoly, params: &ModelParams) -> Result<SymPoly> {
    exp_graded(|q| Ok(apply_f(q, params)?.scale(&rat(1, 2))), p)
}

/// exp(-F/2), the inverse of [`exp_half_f`].
pub fn exp_neg_half_f(p: &SymPoly, params: &ModelParams) -> Result<SymPoly> {
    exp_graded(|q| Ok(apply_f(q, params)?.scale(&rat(-1, 2))), p)
}

/// exp(-A/2), the map from homogeneous symmetric seeds to eigenpolynomials
/// of the transformed Calogero-Sutherland Hamiltonian.
pub fn exp_neg_half_a(p: &SymPoly, params: &ModelParams) -> Result<SymPoly> {
    exp_graded(|q| Ok(apply_a(q, params)?.scale(&rat(-1, 2))), p)
}

/// exp(A/2), the inverse of [`exp_neg_half_a`].
pub fn exp_half_a(p: &SymPoly, params: &ModelParams) -> Result<SymPoly> {
    exp_graded(|q| Ok(apply_a(q, params)?.scale(&rat(1, 2))), p)
}

/// Gaussian smoothing exp(-1/4 sum_i d^2/dx_i^2), applied exactly.
///
/// On a single variable this produces the (scaled) Hermite polynomials:
/// `hermite_smooth(x^n) = 2^-n H_n(x)`.
pub fn hermite_smooth(p: &SymPoly) -> Result<SymPoly> {
    exp_graded(|q| Ok(laplacian_x(q)?.scale(&rat(-1, 4))), p)
}

// ---- Transformed Hamiltonians ----

/// The similarity-transformed Hamiltonian H~ = D + E0 + F on squared-coordinate
/// polynomials, where D is the Euler operator (applied per homogeneous
/// component). Exact.
pub fn apply_transformed_h(p: &SymPoly, params: &ModelParams) -> Result<SymPoly> {
    params.check_poly(p, VarTag::Y)?;
    let euler = apply_euler_componentwise(p);
    let f = apply_f(p, params)?;
    euler.add(&p.scale(&params.e0()))?.add(&f)
}

/// The transformed Calogero-Sutherland Hamiltonian D + E0' - A on
/// plain-coordinate polynomials. Exact.
pub fn apply_transformed_h_cs(p: &SymPoly, params: &ModelParams) -> Result<SymPoly> {
    params.check_poly(p, VarTag::X)?;
    let euler = apply_euler_componentwise(p);
    let a = apply_a(p, params)?;
    euler.add(&p.scale(&params.e0_prime()))?.sub(&a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;
    use crate::symfun::Partition;
    use crate::test_util::{msym, part, random_homogeneous, random_sympoly};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn params(n: usize, lambda: i64, lambda1: i64, alpha: i64) -> ModelParams {
        ModelParams::new(n, rat_int(lambda), rat_int(lambda1), rat_int(alpha)).unwrap()
    }

    // ---- ModelParams ----

    #[test]
    fn derived_constants() {
        let p = params(2, 1, 1, 1);
        assert_eq!(p.e0(), rat_int(5));
        assert_eq!(p.e0_prime(), rat_int(2));
        assert_eq!(p.g_sq(), rat_int(0));
        assert_eq!(p.g1_sq(), rat_int(0));

        let p = ModelParams::new(3, rat(3, 2), rat(1, 2), rat_int(0)).unwrap();
        // E0 = 3 (1/2 + 2 * 3/2 + 1/2) = 12.
        assert_eq!(p.e0(), rat_int(12));
        // g^2 = 3/2 * 1/2 = 3/4; g1^2 = 1/2 * (-1/2) = -1/4.
        assert_eq!(p.g_sq(), rat(3, 4));
        assert_eq!(p.g1_sq(), rat(-1, 4));
        assert!(p.normalizability_risk());
        assert!(!params(2, 1, 0, 0).normalizability_risk());

        // N = 1: E0 = 1/2 + lambda1.
        let p = params(1, 0, 1, 0);
        assert_eq!(p.e0(), rat(3, 2));

        assert!(ModelParams::new(2, rat_int(-1), rat_int(0), rat_int(0)).is_err());
        assert!(ModelParams::new(0, rat_int(1), rat_int(1), rat_int(0)).is_err());
    }

    #[test]
    fn params_json_round_trip() {
        let p = ModelParams::new(3, rat(3, 2), rat(1, 2), rat_int(2)).unwrap();
        let json = p.to_json();
        assert_eq!(json.lambda, "3/2");
        assert_eq!(json.e0, "12");
        assert_eq!(ModelParams::from_json(&json).unwrap(), p);
    }

    // ---- Euler ----

    #[test]
    fn euler_examples() {
        let m1 = msym(&[1], 2, VarTag::Y);
        assert_eq!(apply_euler(&m1).unwrap(), m1.scale(&rat_int(2)));

        let one = SymPoly::one(2, VarTag::Y);
        assert!(apply_euler(&one).unwrap().is_zero());

        let m21 = msym(&[2, 1], 3, VarTag::X);
        assert_eq!(apply_euler(&m21).unwrap(), m21.scale(&rat_int(3)));

        let inhom = m1.add(&SymPoly::one(2, VarTag::Y)).unwrap();
        assert!(apply_euler(&inhom).is_err());
        assert_eq!(
            apply_euler_componentwise(&inhom),
            m1.scale(&rat_int(2)) // the constant component is annihilated
        );
    }

    // ---- F ----

    #[test]
    fn f_on_first_power_sum() {
        // F P1 = -[N + 2 lambda N (N-1) + 2 lambda1 N].
        let p = params(2, 1, 1, 0);
        let p1 = msym(&[1], 2, VarTag::Y);
        assert_eq!(
            apply_f(&p1, &p).unwrap(),
            SymPoly::constant(rat_int(-10), 2, VarTag::Y)
        );

        assert!(apply_f(&SymPoly::one(2, VarTag::Y), &p).unwrap().is_zero());

        // N = 1: F y = -(1 + 2 lambda1).
        let p = params(1, 0, 1, 0);
        let y = msym(&[1], 1, VarTag::Y);
        assert_eq!(
            apply_f(&y, &p).unwrap(),
            SymPoly::constant(rat_int(-3), 1, VarTag::Y)
        );

        // The closed form holds across a small grid.
        for n in 1..=4usize {
            for (l, l1) in [(0, 0), (1, 2), (2, 1)] {
                let p = params(n, l, l1, 0);
                let p1 = msym(&[1], n, VarTag::Y);
                let expect =
                    -((n as i64) + 2 * l * (n as i64) * (n as i64 - 1) + 2 * l1 * n as i64);
                assert_eq!(
                    apply_f(&p1, &p).unwrap(),
                    SymPoly::constant(rat_int(expect), n, VarTag::Y)
                );
            }
        }
    }

    #[test]
    fn f_rejects_wrong_tag_and_size() {
        let p = params(2, 1, 1, 0);
        assert!(apply_f(&msym(&[1], 2, VarTag::X), &p).is_err());
        assert!(apply_f(&msym(&[1], 3, VarTag::Y), &p).is_err());
    }

    #[test]
    fn f_lowers_degree_by_one() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(1..=4);
            let deg = rng.gen_range(1..=5);
            let p = params(n, rng.gen_range(0..=2), rng.gen_range(0..=2), 0);
            let q = random_homogeneous(&mut rng, n, deg, VarTag::Y);
            if q.is_zero() {
                continue;
            }
            let fq = apply_f(&q, &p).unwrap();
            if !fq.is_zero() {
                assert_eq!(fq.homogeneous_degree(), Some(deg - 1));
            }
        }
    }

    // ---- A ----

    #[test]
    fn a_examples() {
        let p = params(2, 0, 0, 1);
        assert!(apply_a(&msym(&[1], 2, VarTag::X), &p).unwrap().is_zero());
        assert_eq!(
            apply_a(&msym(&[2], 2, VarTag::X), &p).unwrap(),
            SymPoly::constant(rat_int(4), 2, VarTag::X)
        );
        assert!(apply_a(&SymPoly::one(2, VarTag::X), &p).unwrap().is_zero());

        // A m_(2) = N + alpha N (N-1) across a small grid.
        for n in 1..=4usize {
            for alpha in 0..=2i64 {
                let p = params(n, 0, 0, alpha);
                let expect = n as i64 + alpha * (n as i64) * (n as i64 - 1);
                assert_eq!(
                    apply_a(&msym(&[2], n, VarTag::X), &p).unwrap(),
                    SymPoly::constant(rat_int(expect), n, VarTag::X)
                );
            }
        }
    }

    #[test]
    fn a_equal_exponent_pairs() {
        // A on m_(1,1) = x1 x2 (N = 2): the equal-exponent class contributes
        // -alpha per pair; hand check (d1 - d2)(x1 x2)/(x1 - x2) = -1.
        let p = params(2, 0, 0, 3);
        assert_eq!(
            apply_a(&msym(&[1, 1], 2, VarTag::X), &p).unwrap(),
            SymPoly::constant(rat_int(-3), 2, VarTag::X)
        );
    }

    #[test]
    fn a_lowers_degree_by_two() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(1..=4);
            let deg = rng.gen_range(2..=6);
            let p = params(n, 0, 0, rng.gen_range(0..=2));
            let q = random_homogeneous(&mut rng, n, deg, VarTag::X);
            if q.is_zero() {
                continue;
            }
            let aq = apply_a(&q, &p).unwrap();
            if !aq.is_zero() {
                assert_eq!(aq.homogeneous_degree(), Some(deg - 2));
            }
        }
    }

    // ---- Exponentials ----

    #[test]
    fn exp_examples() {
        let p = params(2, 1, 1, 0);
        let m1 = msym(&[1], 2, VarTag::Y);
        let expdm1 = exp_half_f(&m1, &p).unwrap();
        let expect = m1.sub(&SymPoly::constant(rat_int(5), 2, VarTag::Y)).unwrap();
        assert_eq!(expdm1, expect);

        assert_eq!(
            exp_half_f(&SymPoly::one(2, VarTag::Y), &p).unwrap(),
            SymPoly::one(2, VarTag::Y)
        );

        let p = params(2, 0, 0, 1);
        let m2 = msym(&[2], 2, VarTag::X);
        let mapped = exp_neg_half_a(&m2, &p).unwrap();
        let expect = m2.sub(&SymPoly::constant(rat_int(2), 2, VarTag::X)).unwrap();
        assert_eq!(mapped, expect);
    }

    #[test]
    fn exp_is_invertible() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..10 {
            let n = rng.gen_range(1..=3);
            let p = params(n, rng.gen_range(0..=2), rng.gen_range(0..=2), 0);
            let q = random_sympoly(&mut rng, n, 4, VarTag::Y);
            let round = exp_neg_half_f(&exp_half_f(&q, &p).unwrap(), &p).unwrap();
            assert_eq!(round, q);
        }
        for _ in 0..10 {
            let n = rng.gen_range(1..=3);
            let p = params(n, 0, 0, rng.gen_range(0..=2));
            let q = random_sympoly(&mut rng, n, 4, VarTag::X);
            let round = exp_half_a(&exp_neg_half_a(&q, &p).unwrap(), &p).unwrap();
            assert_eq!(round, q);
        }
    }

    #[test]
    fn operators_are_linear() {
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..10 {
            let n = rng.gen_range(1..=3);
            let pr = params(n, rng.gen_range(0..=2), rng.gen_range(0..=2), 1);
            let p = random_sympoly(&mut rng, n, 4, VarTag::Y);
            let q = random_sympoly(&mut rng, n, 4, VarTag::Y);
            let a = rat(rng.gen_range(-3..=3), 2);
            let b = rat_int(rng.gen_range(-2..=2));
            let combo = p.scale(&a).add(&q.scale(&b)).unwrap();
            let lhs = apply_f(&combo, &pr).unwrap();
            let rhs = apply_f(&p, &pr)
                .unwrap()
                .scale(&a)
                .add(&apply_f(&q, &pr).unwrap().scale(&b))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn commutator_identity_random() {
        // D exp(F/2) q - exp(F/2) D q = -F exp(F/2) q, exactly.
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..10 {
            let n = rng.gen_range(1..=4);
            let deg = rng.gen_range(0..=5u64);
            let pr = params(n, rng.gen_range(0..=2), rng.gen_range(0..=2), 0);
            let q = random_homogeneous(&mut rng, n, deg, VarTag::Y);
            let eq = exp_half_f(&q, &pr).unwrap();
            let lhs = apply_euler_componentwise(&eq)
                .sub(&exp_half_f(&apply_euler_componentwise(&q), &pr).unwrap())
                .unwrap();
            let rhs = apply_f(&eq, &pr).unwrap().neg();
            assert_eq!(lhs, rhs);
        }
    }

    // ---- Transformed Hamiltonians ----

    #[test]
    fn transformed_h_eigen_and_negative_control() {
        let pr = params(2, 1, 1, 0);
        let m1 = msym(&[1], 2, VarTag::Y);
        let eigen = exp_half_f(&m1, &pr).unwrap(); // m_(1) - 5
        let h_eigen = apply_transformed_h(&eigen, &pr).unwrap();
        assert_eq!(h_eigen, eigen.scale(&rat_int(7)));

        let one = SymPoly::one(2, VarTag::Y);
        assert_eq!(
            apply_transformed_h(&one, &pr).unwrap(),
            one.scale(&pr.e0())
        );

        // m_(1) alone is not an eigenfunction: H~ m_(1) = (2 + E0) m_(1) - 10.
        let h_m1 = apply_transformed_h(&m1, &pr).unwrap();
        let expect = m1
            .scale(&rat_int(7))
            .sub(&SymPoly::constant(rat_int(10), 2, VarTag::Y))
            .unwrap();
        assert_eq!(h_m1, expect);
        assert_ne!(h_m1, m1.scale(&rat_int(7)));
    }

    #[test]
    fn transformed_h_cs_examples() {
        let pr = params(2, 0, 0, 1);
        let m2 = msym(&[2], 2, VarTag::X);
        let eigen = exp_neg_half_a(&m2, &pr).unwrap(); // m_(2) - 2
        assert_eq!(
            apply_transformed_h_cs(&eigen, &pr).unwrap(),
            eigen.scale(&rat_int(4))
        );

        // Center-of-mass mode: already an eigenfunction since A m_(1) = 0.
        let m1 = msym(&[1], 2, VarTag::X);
        assert_eq!(
            apply_transformed_h_cs(&m1, &pr).unwrap(),
            m1.scale(&(rat_int(1) + pr.e0_prime()))
        );

        let one = SymPoly::one(2, VarTag::X);
        assert_eq!(
            apply_transformed_h_cs(&one, &pr).unwrap(),
            one.scale(&pr.e0_prime())
        );
    }

    // ---- Exact-point oracle for the divided differences ----

    /// Exact value of `p` at a rational point, via the full orbit expansion.
    fn eval_exact(p: &SymPoly, pt: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (e, c) in p.to_monomial_map() {
            let mut prod = c;
            for (x, &k) in pt.iter().zip(&e) {
                for _ in 0..k {
                    prod *= x;
                }
            }
            total += prod;
        }
        total
    }

    /// Exact value of d^order p / d v_i^order at a rational point.
    fn eval_derivative_exact(p: &SymPoly, i: usize, order: u32, pt: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (e, c) in p.to_monomial_map() {
            if e[i] < order {
                continue;
            }
            let mut prod = c;
            for k in 0..order {
                prod *= rational_from_u32(e[i] - k);
            }
            for (j, (x, &k)) in pt.iter().zip(&e).enumerate() {
                let power = if j == i { k - order } else { k };
                for _ in 0..power {
                    prod *= x;
                }
            }
            total += prod;
        }
        total
    }

    fn rational_point(rng: &mut StdRng, n: usize) -> Vec<Rational> {
        loop {
            let pt: Vec<Rational> = (0..n)
                .map(|_| rat(rng.gen_range(1..=40), rng.gen_range(1..=7)))
                .collect();
            let distinct = (0..n).all(|i| (0..i).all(|j| pt[i] != pt[j]));
            if distinct {
                return pt;
            }
        }
    }

    #[test]
    fn f_matches_exact_point_oracle() {
        // Evaluate the defining expression of F (numerators and divided
        // differences as exact rational values at random distinct rational
        // points) and compare with the closed-form polynomial output.
        let mut rng = StdRng::seed_from_u64(61);
        for _ in 0..12 {
            let n = rng.gen_range(1..=4);
            let pr = ModelParams::new(n, rat(rng.gen_range(0..=4), 2), rat(rng.gen_range(0..=4), 2), rat_int(0))
                .unwrap();
            let p = random_sympoly(&mut rng, n, 4, VarTag::Y);
            let pt = rational_point(&mut rng, n);

            let mut expected = Rational::zero();
            for i in 0..n {
                expected += eval_derivative_exact(&p, i, 1, &pt)
                    * (Rational::one() + rat(2, 1) * pr.lambda1());
                expected += rat(2, 1) * &pt[i] * eval_derivative_exact(&p, i, 2, &pt);
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let numer = &pt[i] * eval_derivative_exact(&p, i, 1, &pt)
                        - &pt[j] * eval_derivative_exact(&p, j, 1, &pt);
                    expected += rat(4, 1) * pr.lambda() * numer / (&pt[i] - &pt[j]);
                }
            }
            expected = -expected;

            let actual = eval_exact(&apply_f(&p, &pr).unwrap(), &pt);
            assert_eq!(actual, expected);
        }
    }

    #[test]
    fn a_matches_exact_point_oracle() {
        let mut rng = StdRng::seed_from_u64(67);
        for _ in 0..12 {
            let n = rng.gen_range(1..=4);
            let pr =
                ModelParams::new(n, rat_int(0), rat_int(0), rat(rng.gen_range(0..=4), 2)).unwrap();
            let p = random_sympoly(&mut rng, n, 4, VarTag::X);
            let pt = rational_point(&mut rng, n);

            let mut expected = Rational::zero();
            for i in 0..n {
                expected += rat(1, 2) * eval_derivative_exact(&p, i, 2, &pt);
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let numer = eval_derivative_exact(&p, i, 1, &pt)
                        - eval_derivative_exact(&p, j, 1, &pt);
                    expected += pr.alpha() * numer / (&pt[i] - &pt[j]);
                }
            }

            let actual = eval_exact(&apply_a(&p, &pr).unwrap(), &pt);
            assert_eq!(actual, expected);
        }
    }

    // ---- Hermite smoothing ----

    #[test]
    fn hermite_smoothing_examples() {
        // x^2 -> x^2 - 1/2.
        let x2 = msym(&[2], 1, VarTag::X);
        let expect = x2.sub(&SymPoly::constant(rat(1, 2), 1, VarTag::X)).unwrap();
        assert_eq!(hermite_smooth(&x2).unwrap(), expect);

        // x -> x.
        let x = msym(&[1], 1, VarTag::X);
        assert_eq!(hermite_smooth(&x).unwrap(), x);

        // x^4 -> x^4 - 3 x^2 + 3/4.
        let x4 = msym(&[4], 1, VarTag::X);
        let expect = SymPoly::from_terms(
            1,
            VarTag::X,
            vec![
                (part(&[4]), rat_int(1)),
                (part(&[2]), rat_int(-3)),
                (Partition::empty(), rat(3, 4)),
            ],
        )
        .unwrap();
        assert_eq!(hermite_smooth(&x4).unwrap(), expect);
    }
}
