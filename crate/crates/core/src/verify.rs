//! Numerical oracles against the untransformed physics: pointwise
//! wavefunction evaluation, finite-difference application of the physical
//! Hamiltonian, and quadrature Gram matrices for cross-level orthogonality.
//!
//! The physical Hamiltonian is
//!
//! ```text
//! H = -1/2 sum_i d_i^2 + 1/2 sum_i x_i^2
//!     + g^2 sum_{i<j} [ (x_i - x_j)^-2 + (x_i + x_j)^-2 ]
//!     + 1/2 g1^2 sum_i x_i^-2
//! ```
//!
//! with g^2 = lambda (lambda - 1) and g1^2 = lambda1 (lambda1 - 1), and the
//! ground state is the Jastrow-Gaussian product evaluated by
//! [`eval_ground_state`]. Sample points keep a safety margin away from the
//! singular surfaces x_i = 0 and x_i = ±x_j so the finite-difference stencil
//! stays well conditioned.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::ModelParams;
use crate::quad::gauss_laguerre;
use crate::rational::{format_rational, to_f64};
use crate::spectrum::Eigenfunction;

/// Minimum distance from every singular surface (and between coordinates).
pub const SAFETY_MARGIN: f64 = 0.3;
/// Largest coordinate magnitude; keeps the Gaussian tail well above underflow.
pub const BOX_LIMIT: f64 = 3.0;

// ---- Sample points ----

/// A point in configuration space satisfying the safety margins:
/// `SAFETY_MARGIN <= |x_i| <= BOX_LIMIT` and `|x_i ± x_j| >= SAFETY_MARGIN`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    coords: Vec<f64>,
}

impl SamplePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::UnsafePoint("empty coordinate list".into()));
        }
        for (i, &x) in coords.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::UnsafePoint(format!("coordinate {i} is not finite")));
            }
            if x.abs() < SAFETY_MARGIN {
                return Err(Error::UnsafePoint(format!(
                    "|x_{i}| = {} is inside the margin {SAFETY_MARGIN} around x = 0",
                    x.abs()
                )));
            }
            if x.abs() > BOX_LIMIT {
                return Err(Error::UnsafePoint(format!(
                    "|x_{i}| = {} exceeds the box limit {BOX_LIMIT}",
                    x.abs()
                )));
            }
        }
        for i in 0..coords.len() {
            for j in (i + 1)..coords.len() {
                if (coords[i] - coords[j]).abs() < SAFETY_MARGIN {
                    return Err(Error::UnsafePoint(format!(
                        "|x_{i} - x_{j}| = {} is inside the margin",
                        (coords[i] - coords[j]).abs()
                    )));
                }
                if (coords[i] + coords[j]).abs() < SAFETY_MARGIN {
                    return Err(Error::UnsafePoint(format!(
                        "|x_{i} + x_{j}| = {} is inside the margin",
                        (coords[i] + coords[j]).abs()
                    )));
                }
            }
        }
        Ok(SamplePoint { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// `count` safe points in `n_vars` dimensions by rejection sampling from the
/// uniform box [-2.2, 2.2]^N, deterministically from `seed` (ChaCha8).
///
/// The sampling box sits well inside [`BOX_LIMIT`]: large coordinates inflate
/// the polynomial term magnitudes and with them the cancellation floor of the
/// finite-difference stencil, without testing any additional physics.
pub fn sample_safe_points(count: usize, n_vars: usize, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let coords: Vec<f64> = (0..n_vars).map(|_| rng.gen_range(-2.2..2.2)).collect();
        if let Ok(p) = SamplePoint::new(coords) {
            points.push(p);
        }
    }
    points
}

// ---- Pointwise evaluation ----

fn ground_state_raw(params: &ModelParams, coords: &[f64]) -> f64 {
    let lambda = to_f64(params.lambda());
    let lambda1 = to_f64(params.lambda1());
    let mut value = 1.0;
    for j in 0..coords.len() {
        for k in (j + 1)..coords.len() {
            value *= (coords[j] - coords[k]).abs().powf(lambda);
            value *= (coords[j] + coords[k]).abs().powf(lambda);
        }
    }
    for &x in coords {
        value *= x.abs().powf(lambda1);
    }
    let sq_sum: f64 = coords.iter().map(|x| x * x).sum();
    value * (-0.5 * sq_sum).exp()
}

fn eigenfunction_raw(ef: &Eigenfunction, coords: &[f64]) -> f64 {
    let y: Vec<f64> = coords.iter().map(|x| x * x).collect();
    let poly = ef
        .poly()
        .evaluate(&y)
        .expect("eigenfunction polynomial matches its own particle count");
    ground_state_raw(ef.params(), coords) * poly
}

/// Ground-state wavefunction at a safe point: the pair and one-body Jastrow
/// factors times the Gaussian.
pub fn eval_ground_state(params: &ModelParams, x: &SamplePoint) -> Result<f64> {
    if x.coords.len() != params.n_particles() {
        return Err(Error::Contract(format!(
            "point has {} coordinates, model has {} particles",
            x.coords.len(),
            params.n_particles()
        )));
    }
    Ok(ground_state_raw(params, &x.coords))
}

/// Full wavefunction at a safe point: the ground state times the
/// eigenpolynomial evaluated at y_i = x_i^2.
pub fn eval_eigenfunction(ef: &Eigenfunction, x: &SamplePoint) -> Result<f64> {
    if x.coords.len() != ef.params().n_particles() {
        return Err(Error::Contract(format!(
            "point has {} coordinates, model has {} particles",
            x.coords.len(),
            ef.params().n_particles()
        )));
    }
    Ok(eigenfunction_raw(ef, &x.coords))
}

// ---- Finite-difference Hamiltonian ----

fn potential(params: &ModelParams, coords: &[f64]) -> f64 {
    let g_sq = to_f64(&params.g_sq());
    let g1_sq = to_f64(&params.g1_sq());
    let mut v = 0.5 * coords.iter().map(|x| x * x).sum::<f64>();
    // The ordered-pair sum in H equals twice the i<j sum.
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            let minus = coords[i] - coords[j];
            let plus = coords[i] + coords[j];
            v += g_sq * (1.0 / (minus * minus) + 1.0 / (plus * plus));
        }
    }
    for &x in coords {
        v += 0.5 * g1_sq / (x * x);
    }
    v
}

/// Relative eigen-equation residual |(H psi)(x) - E psi(x)| / max(|psi(x)|, 1e-30)
/// against an explicit trial energy, with the Laplacian by 4th-order central
/// differences (5-point stencil, step `h` in [1e-4, 1e-2]).
pub fn fd_residual_against(
    ef: &Eigenfunction,
    x: &SamplePoint,
    h: f64,
    energy: f64,
) -> Result<f64> {
    if x.coords.len() != ef.params().n_particles() {
        return Err(Error::Contract(format!(
            "point has {} coordinates, model has {} particles",
            x.coords.len(),
            ef.params().n_particles()
        )));
    }
    if !(1e-4..=1e-2).contains(&h) {
        return Err(Error::Contract(format!(
            "finite-difference step {h} outside [1e-4, 1e-2]"
        )));
    }
    let center = eigenfunction_raw(ef, &x.coords);
    let mut laplacian = 0.0;
    let mut shifted = x.coords.clone();
    for i in 0..x.coords.len() {
        let x0 = x.coords[i];
        let mut stencil = 0.0;
        for (offset, weight) in [
            (-2.0, -1.0),
            (-1.0, 16.0),
            (0.0, -30.0),
            (1.0, 16.0),
            (2.0, -1.0),
        ] {
            shifted[i] = x0 + offset * h;
            stencil += weight * eigenfunction_raw(ef, &shifted);
        }
        shifted[i] = x0;
        laplacian += stencil / (12.0 * h * h);
    }
    let h_psi = -0.5 * laplacian + potential(ef.params(), &x.coords) * center;
    Ok((h_psi - energy * center).abs() / center.abs().max(1e-30))
}

/// [`fd_residual_against`] with the eigenfunction's own exact energy.
pub fn fd_residual(ef: &Eigenfunction, x: &SamplePoint, h: f64) -> Result<f64> {
    fd_residual_against(ef, x, h, to_f64(ef.energy()))
}

/// Per-eigenfunction record of a finite-difference sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FdRecord {
    pub label: Vec<u32>,
    pub energy: String,
    pub max_fd_residual: f64,
    pub points_tested: usize,
}

/// Runs [`fd_residual`] over a point set and keeps the worst residual.
pub fn fd_sweep(ef: &Eigenfunction, points: &[SamplePoint], h: f64) -> Result<FdRecord> {
    let mut worst: f64 = 0.0;
    for p in points {
        worst = worst.max(fd_residual(ef, p, h)?);
    }
    Ok(FdRecord {
        label: ef.label().parts().to_vec(),
        energy: format_rational(ef.energy()),
        max_fd_residual: worst,
        points_tested: points.len(),
    })
}

// ---- Gram matrices ----

/// Tensor generalized Gauss-Laguerre configuration. The per-dimension weight
/// exponent is lambda1 - 1/2, inherited from the squared ground state under
/// the change of variables y = x^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    pub nodes_per_dim: usize,
}

/// Gram matrix <ef_a, ef_b> of the polynomial parts under the ground-state
/// measure, over the positive orthant in y:
///
/// ```text
/// integral of p_a(y) p_b(y) prod_i y_i^{lambda1 - 1/2} e^{-y_i}
///            prod_{i<j} |y_i - y_j|^{2 lambda}  dy
/// ```
///
/// For integer lambda the integrand is a polynomial and the rule is exact up
/// to rounding. The node-sum order is fixed (row-major over the tensor grid)
/// so results are bit-reproducible.
pub fn gram_matrix(efs: &[Eigenfunction], cfg: &QuadratureConfig) -> Result<Vec<Vec<f64>>> {
    let first = efs
        .first()
        .ok_or_else(|| Error::Contract("gram_matrix needs at least one eigenfunction".into()))?;
    let params = first.params();
    if efs.iter().any(|ef| ef.params() != params) {
        return Err(Error::Contract(
            "gram_matrix needs eigenfunctions sharing one parameter set".into(),
        ));
    }
    let n = params.n_particles();
    let lambda = to_f64(params.lambda());
    let max_degree = efs.iter().map(|ef| ef.poly().max_weight()).max().unwrap_or(0);
    let required = max_degree as usize + (n as f64 * lambda).ceil() as usize + 2;
    if cfg.nodes_per_dim < required {
        return Err(Error::Config(format!(
            "quadrature needs at least {required} nodes per dimension here, got {}",
            cfg.nodes_per_dim
        )));
    }

    let a = to_f64(params.lambda1()) - 0.5;
    let (nodes, weights) = gauss_laguerre(cfg.nodes_per_dim, a)?;
    let two_lambda = 2.0 * lambda;

    let mut gram = vec![vec![0.0; efs.len()]; efs.len()];
    let mut index = vec![0usize; n];
    let mut y = vec![0.0; n];
    let mut values = vec![0.0; efs.len()];
    loop {
        let mut w = 1.0;
        for (dim, &i) in index.iter().enumerate() {
            y[dim] = nodes[i];
            w *= weights[i];
        }
        let mut jastrow = 1.0;
        for i in 0..n {
            for j in (i + 1)..n {
                jastrow *= (y[i] - y[j]).abs().powf(two_lambda);
            }
        }
        let scale = w * jastrow;
        for (v, ef) in values.iter_mut().zip(efs) {
            *v = ef.poly().evaluate(&y).expect("grid point matches n_vars");
        }
        for r in 0..efs.len() {
            for c in r..efs.len() {
                gram[r][c] += scale * values[r] * values[c];
            }
        }
        // Advance the tensor index, last dimension fastest.
        let mut dim = n;
        loop {
            if dim == 0 {
                break;
            }
            dim -= 1;
            index[dim] += 1;
            if index[dim] < cfg.nodes_per_dim {
                break;
            }
            index[dim] = 0;
        }
        if index.iter().all(|&i| i == 0) {
            break;
        }
    }
    for r in 0..efs.len() {
        for c in 0..r {
            gram[r][c] = gram[c][r];
        }
    }
    Ok(gram)
}

/// Largest |G_ab| / sqrt(G_aa G_bb) over pairs with distinct levels.
pub fn max_normalized_off_block(efs: &[Eigenfunction], gram: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..efs.len() {
        for b in (a + 1)..efs.len() {
            if efs[a].level() == efs[b].level() {
                continue;
            }
            let normalized = gram[a][b].abs() / (gram[a][a] * gram[b][b]).sqrt();
            worst = worst.max(normalized);
        }
    }
    worst
}

/// Quadrature identification attached to a Gram report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureInfo {
    pub nodes_per_dim: usize,
    pub lambda: String,
    pub lambda1: String,
}

/// Summary of a cross-level orthogonality run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramReport {
    pub levels: Vec<u64>,
    pub max_off_block: f64,
    pub quadrature: QuadratureInfo,
}

/// Builds the Gram matrix and condenses it into a report.
pub fn gram_report(efs: &[Eigenfunction], cfg: &QuadratureConfig) -> Result<GramReport> {
    let gram = gram_matrix(efs, cfg)?;
    let mut levels: Vec<u64> = efs.iter().map(Eigenfunction::level).collect();
    levels.dedup();
    let params = efs[0].params();
    Ok(GramReport {
        levels,
        max_off_block: max_normalized_off_block(efs, &gram),
        quadrature: QuadratureInfo {
            nodes_per_dim: cfg.nodes_per_dim,
            lambda: format_rational(params.lambda()),
            lambda1: format_rational(params.lambda1()),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::spectrum::{build_eigenfunction, level_basis};
    use crate::symfun::Partition;
    use crate::test_util::part;

    fn params(n: usize, lambda: i64, lambda1: i64) -> ModelParams {
        ModelParams::new(n, rat_int(lambda), rat_int(lambda1), rat_int(0)).unwrap()
    }

    fn point(coords: &[f64]) -> SamplePoint {
        SamplePoint::new(coords.to_vec()).unwrap()
    }

    // ---- Safety margins ----

    #[test]
    fn margin_enforcement() {
        assert!(SamplePoint::new(vec![0.1, 1.0]).is_err()); // near x = 0
        assert!(SamplePoint::new(vec![1.0, 1.2]).is_err()); // near x_i = x_j
        assert!(SamplePoint::new(vec![-1.0, 1.1]).is_err()); // near x_i = -x_j
        assert!(SamplePoint::new(vec![3.5, 1.0]).is_err()); // outside the box
        assert!(SamplePoint::new(vec![0.7, 1.3]).is_ok());
    }

    #[test]
    fn sampling_is_deterministic_and_safe() {
        let a = sample_safe_points(20, 3, 42);
        let b = sample_safe_points(20, 3, 42);
        assert_eq!(a, b);
        let c = sample_safe_points(20, 3, 43);
        assert_ne!(a, c);
        for p in &a {
            assert!(SamplePoint::new(p.coords().to_vec()).is_ok());
        }
    }

    // ---- Ground state ----

    #[test]
    fn ground_state_examples() {
        let pr = params(1, 0, 0);
        let psi = eval_ground_state(&pr, &point(&[1.0])).unwrap();
        assert!((psi - (-0.5f64).exp()).abs() < 1e-15);
        assert!((psi - 0.6065306597126334).abs() < 1e-12);

        let pr = params(2, 1, 0);
        let psi = eval_ground_state(&pr, &point(&[1.0, 2.0])).unwrap();
        assert!((psi - 3.0 * (-2.5f64).exp()).abs() < 1e-14);

        // Independent re-implementation of the full product at a third point.
        let pr = params(2, 1, 1);
        let (x1, x2): (f64, f64) = (0.7, 1.3);
        let by_hand = (x1 - x2).abs()
            * (x1 + x2).abs()
            * x1.abs()
            * x2.abs()
            * (-0.5 * (x1 * x1 + x2 * x2)).exp();
        let psi = eval_ground_state(&pr, &point(&[x1, x2])).unwrap();
        assert!((psi - by_hand).abs() < 1e-15);
    }

    #[test]
    fn eigenfunction_values_and_nodal_surface() {
        let pr = params(2, 1, 1);
        let ground = build_eigenfunction(&pr, &Partition::empty()).unwrap();
        let p = point(&[0.7, 1.3]);
        assert_eq!(
            eval_eigenfunction(&ground, &p).unwrap(),
            eval_ground_state(&pr, &p).unwrap()
        );

        let ef = build_eigenfunction(&pr, &part(&[1])).unwrap();
        let expect = eval_ground_state(&pr, &p).unwrap() * (0.49 + 1.69 - 5.0);
        assert!((eval_eigenfunction(&ef, &p).unwrap() - expect).abs() < 1e-14);

        // Sign change across the nodal surface y1 + y2 = 5, zero on it.
        let below = eval_eigenfunction(&ef, &point(&[1.0, 1.5])).unwrap();
        let above = eval_eigenfunction(&ef, &point(&[1.5, 2.0])).unwrap();
        assert!(below < 0.0 && above > 0.0);
        let on = point(&[1.2, (5.0 - 1.44f64).sqrt()]);
        let psi0 = eval_ground_state(&pr, &on).unwrap();
        assert!(eval_eigenfunction(&ef, &on).unwrap().abs() < 1e-12 * psi0);
    }

    // ---- Finite differences ----

    #[test]
    fn oscillator_ground_state_residual() {
        let pr = params(1, 0, 0);
        let ef = build_eigenfunction(&pr, &Partition::empty()).unwrap();
        assert_eq!(*ef.energy(), rat(1, 2));
        let r = fd_residual(&ef, &point(&[1.0]), 1e-3).unwrap();
        assert!(r < 1e-7, "residual {r}");
    }

    #[test]
    fn interacting_level_one_residual_and_negative_control() {
        let pr = params(2, 1, 1);
        let ef = build_eigenfunction(&pr, &part(&[1])).unwrap();
        let p = point(&[0.7, 1.3]);
        let r = fd_residual(&ef, &p, 1e-3).unwrap();
        assert!(r < 1e-5, "residual {r}");

        let wrong = fd_residual_against(&ef, &p, 1e-3, to_f64(ef.energy()) + 1.0).unwrap();
        assert!(wrong > 0.5, "wrong-energy residual {wrong} should be O(1)");
    }

    #[test]
    fn stencil_step_contract() {
        let pr = params(1, 0, 0);
        let ef = build_eigenfunction(&pr, &Partition::empty()).unwrap();
        assert!(fd_residual(&ef, &point(&[1.0]), 1e-5).is_err());
        assert!(fd_residual(&ef, &point(&[1.0]), 0.5).is_err());
    }

    #[test]
    fn richardson_h4_decay() {
        // Non-integer couplings near the safety margin leave the truncation
        // error well above the rounding floor, so the h^4 order of the
        // stencil is visible when h halves from 4e-3 to 1e-3.
        let pr = ModelParams::new(2, rat(3, 2), rat(3, 2), rat_int(0)).unwrap();
        let ef = build_eigenfunction(&pr, &part(&[1])).unwrap();
        let p = point(&[0.31, 0.62]);
        let coarse = fd_residual(&ef, &p, 4e-3).unwrap();
        let mid = fd_residual(&ef, &p, 2e-3).unwrap();
        let fine = fd_residual(&ef, &p, 1e-3).unwrap();
        assert!(
            coarse > mid && mid > fine,
            "expected monotone decay: {coarse} > {mid} > {fine}"
        );
        // Two halvings at ideal order give 256; allow rounding-floor slack.
        assert!(coarse / fine > 50.0, "ratio {}", coarse / fine);
    }

    #[test]
    fn fd_sweep_record() {
        let pr = params(2, 1, 1);
        let ef = build_eigenfunction(&pr, &part(&[1])).unwrap();
        let points = sample_safe_points(5, 2, 42);
        let rec = fd_sweep(&ef, &points, 1e-3).unwrap();
        assert_eq!(rec.points_tested, 5);
        assert_eq!(rec.energy, "7");
        assert!(rec.max_fd_residual < 1e-5);
    }

    // ---- Gram matrices ----

    #[test]
    fn laguerre_orthogonality_diagonal() {
        // N = 1, lambda1 = 1: levels 0..3 are orthogonal under y^{1/2} e^{-y}.
        let pr = params(1, 0, 1);
        let mut efs = Vec::new();
        for n in 0..=3u64 {
            efs.extend(level_basis(&pr, n).unwrap());
        }
        let gram = gram_matrix(&efs, &QuadratureConfig { nodes_per_dim: 12 }).unwrap();
        for i in 0..efs.len() {
            assert!(gram[i][i] > 0.0);
            for j in 0..efs.len() {
                if i != j {
                    let normalized = gram[i][j].abs() / (gram[i][i] * gram[j][j]).sqrt();
                    assert!(normalized < 1e-10, "({i},{j}) -> {normalized}");
                }
            }
        }
    }

    #[test]
    fn cross_level_orthogonality_two_particles() {
        let pr = params(2, 1, 1);
        let mut efs = Vec::new();
        for n in 0..=1u64 {
            efs.extend(level_basis(&pr, n).unwrap());
        }
        let cfg = QuadratureConfig { nodes_per_dim: 10 };
        let gram = gram_matrix(&efs, &cfg).unwrap();
        assert!(max_normalized_off_block(&efs, &gram) < 1e-10);
        let report = gram_report(&efs, &cfg).unwrap();
        assert_eq!(report.levels, vec![0, 1]);
        assert_eq!(report.quadrature.lambda, "1");
    }

    #[test]
    fn node_count_contract() {
        let pr = params(2, 1, 1);
        let efs = level_basis(&pr, 3).unwrap();
        // Needs max_degree + ceil(N lambda) + 2 = 3 + 2 + 2 = 7.
        assert!(gram_matrix(&efs, &QuadratureConfig { nodes_per_dim: 6 }).is_err());
        assert!(gram_matrix(&efs, &QuadratureConfig { nodes_per_dim: 7 }).is_ok());
    }
}
