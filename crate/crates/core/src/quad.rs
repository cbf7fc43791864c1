//! Generalized Gauss-Laguerre quadrature on the positive half line.
//!
//! Nodes and weights come from the Golub-Welsch eigendecomposition of the
//! Jacobi matrix of the weight y^a e^{-y}, so an n-node rule integrates
//! polynomials up to degree 2n - 1 exactly (to rounding).

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Nodes (ascending) and weights of the n-node rule for the weight
/// y^a e^{-y} on (0, inf). Requires a > -1 for integrability.
pub fn gauss_laguerre(n_nodes: usize, a: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n_nodes == 0 {
        return Err(Error::Config("quadrature needs at least one node".into()));
    }
    if a <= -1.0 {
        return Err(Error::Config(format!(
            "Gauss-Laguerre exponent must exceed -1, got {a}"
        )));
    }
    // Jacobi matrix of the monic recurrence: diagonal 2k + a + 1,
    // off-diagonal sqrt(k (k + a)).
    let mut jacobi = DMatrix::<f64>::zeros(n_nodes, n_nodes);
    for k in 0..n_nodes {
        jacobi[(k, k)] = 2.0 * k as f64 + a + 1.0;
        if k > 0 {
            let off = (k as f64 * (k as f64 + a)).sqrt();
            jacobi[(k, k - 1)] = off;
            jacobi[(k - 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jacobi);
    let total_mass = gamma(a + 1.0);
    let mut rule: Vec<(f64, f64)> = (0..n_nodes)
        .map(|j| {
            let node = eig.eigenvalues[j];
            let first = eig.eigenvectors[(0, j)];
            (node, total_mass * first * first)
        })
        .collect();
    rule.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(rule.into_iter().unzip())
}
