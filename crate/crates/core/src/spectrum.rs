//! Eigenbasis construction, energies, degeneracies, and conserved-quantity
//! spectra.
//!
//! Levels are labeled by partitions of n with parts <= N; the bijection to
//! the power-sum exponents is n_l = multiplicity of the part l, so the label
//! seeds the product prod_l P_l^{n_l}. Applying the terminating exponential
//! exp(F/2) to the seed yields the eigenpolynomial; the full wavefunction is
//! the ground state times that polynomial.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{
    apply_transformed_h, exp_half_f, ModelParams, ModelParamsJson,
};
use crate::rational::{format_rational, parse_rational, rat, Rational};
use crate::symfun::{
    count_partitions, partitions_of, power_sum_product, Partition, SymPoly, SymPolyJson, VarTag,
};

// ---- Eigenfunction ----

/// One exact eigenfunction of the transformed Hamiltonian.
///
/// Invariants, verified at construction:
/// - `energy = 2 * level + E0` exactly;
/// - `apply_transformed_h(poly) = energy * poly` exactly;
/// - the top-degree component of `poly` is the power-sum seed of `label`
///   (the exponential only adds lower-degree corrections).
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunction {
    params: ModelParams,
    level: u64,
    label: Partition,
    poly: SymPoly,
    energy: Rational,
}

impl Eigenfunction {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn label(&self) -> &Partition {
        &self.label
    }

    /// The polynomial factor, a symmetric polynomial in squared coordinates.
    pub fn poly(&self) -> &SymPoly {
        &self.poly
    }

    pub fn energy(&self) -> &Rational {
        &self.energy
    }
}

/// Builds the eigenfunction labeled by `label` (parts <= N required).
///
/// The seed is the power-sum product with exponents given by the label's
/// part multiplicities; the eigenpolynomial is exp(F/2) applied to it. The
/// eigen-equation is re-verified exactly before returning.
pub fn build_eigenfunction(params: &ModelParams, label: &Partition) -> Result<Eigenfunction> {
    let n_vars = params.n_particles();
    if label.max_part() as usize > n_vars {
        return Err(Error::Domain(format!(
            "label {label} has parts larger than the particle number {n_vars}; \
             the power-sum family stops at P_{n_vars}"
        )));
    }
    let seed = power_sum_product(&label.multiplicities(), n_vars, VarTag::Y)?;
    let poly = exp_half_f(&seed, params)?;
    let level = label.weight();
    let energy = Rational::from_integer(BigInt::from(2 * level)) + params.e0();

    let lhs = apply_transformed_h(&poly, params)?;
    let rhs = poly.scale(&energy);
    if lhs != rhs {
        return Err(Error::Internal(format!(
            "constructed polynomial for label {label} fails its eigen-equation"
        )));
    }
    debug_assert_eq!(
        poly.homogeneous_components()
            .last()
            .map(|(_, top)| top.clone()),
        Some(seed),
        "exponential must only add lower-degree corrections"
    );

    Ok(Eigenfunction {
        params: params.clone(),
        level,
        label: label.clone(),
        poly,
        energy,
    })
}

/// The complete degenerate basis at level `n`: one eigenfunction per
/// partition of n with parts <= N, in reverse-lexicographic label order.
/// All members share the energy 2n + E0.
pub fn level_basis(params: &ModelParams, n: u64) -> Result<Vec<Eigenfunction>> {
    let labels = partitions_of(n, params.n_particles() as u32, n.max(1) as usize);
    labels
        .par_iter()
        .map(|label| build_eigenfunction(params, label))
        .collect()
}

/// Number of independent states at level `n`: the count of partitions of n
/// with parts <= N. Equals `level_basis(params, n).len()`.
pub fn degeneracy(params: &ModelParams, n: u64) -> u64 {
    count_partitions(n, params.n_particles() as u32)
}

/// Rank over the rationals of the coefficient matrix of the basis
/// polynomials in the monomial symmetric basis, by exact Gaussian
/// elimination. All members must share params and level.
pub fn rank_check(basis: &[Eigenfunction]) -> Result<usize> {
    if basis.is_empty() {
        return Ok(0);
    }
    let first = &basis[0];
    for ef in basis {
        if ef.params != first.params || ef.level != first.level {
            return Err(Error::Contract(
                "rank_check needs a basis sharing one parameter set and one level".into(),
            ));
        }
    }
    // Columns: the union of all key partitions, in canonical order.
    let mut columns: Vec<Partition> = basis
        .iter()
        .flat_map(|ef| ef.poly.terms().map(|(mu, _)| mu.clone()))
        .collect();
    columns.sort();
    columns.dedup();
    let rows: Vec<Vec<Rational>> = basis
        .iter()
        .map(|ef| columns.iter().map(|mu| ef.poly.coeff(mu)).collect())
        .collect();
    Ok(rank_over_rationals(rows))
}

fn rank_over_rationals(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_value = rows[rank][col].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot_value;
            for c in col..ncols {
                let delta = &rows[rank][c] * &factor;
                rows[r][c] = &rows[r][c] - delta;
            }
        }
        rank += 1;
    }
    rank
}

// ---- Constants of motion ----

/// Simultaneous eigenvalues of the N commuting constants of motion
/// I_1, ..., I_N (elementary symmetric polynomials in the decoupled-mode
/// Hamiltonians) on the state labeled by `mu`.
///
/// The decoupled-mode Hamiltonians act as x_i d_i + 1/2 in the transformed
/// picture, so the state labeled by `mu` (padded with zeros to length N)
/// carries the multiset {2 mu_i + 1/2}; the returned vector is
/// [e_1, ..., e_N] of that multiset.
///
/// Note: these labels are occupation labels for the product states, not the
/// power-sum-seeded basis above; the power-sum basis diagonalizes H, and its
/// members at a degenerate level need not diagonalize the higher I_k.
pub fn constants_spectrum(params: &ModelParams, mu: &Partition) -> Result<Vec<Rational>> {
    let n = params.n_particles();
    if mu.len() > n {
        return Err(Error::Domain(format!(
            "label {mu} has more parts than the {n} decoupled modes"
        )));
    }
    let mut values: Vec<Rational> = Vec::with_capacity(n);
    for i in 0..n {
        let occ = mu.parts().get(i).copied().unwrap_or(0);
        values.push(Rational::from_integer(BigInt::from(2 * occ)) + rat(1, 2));
    }
    // Incremental elementary symmetric polynomials.
    let mut elem = vec![Rational::zero(); n + 1];
    elem[0] = rat(1, 1);
    for v in &values {
        for k in (1..=n).rev() {
            let carry = &elem[k - 1] * v;
            elem[k] = &elem[k] + carry;
        }
    }
    Ok(elem.split_off(1))
}

// ---- Wire forms ----

/// Wire form of [`Eigenfunction`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenfunctionJson {
    pub params: ModelParamsJson,
    pub level: u64,
    pub label: Vec<u32>,
    pub energy: String,
    pub poly: SymPolyJson,
}

impl Eigenfunction {
    pub fn to_json(&self) -> EigenfunctionJson {
        EigenfunctionJson {
            params: self.params.to_json(),
            level: self.level,
            label: self.label.parts().to_vec(),
            energy: format_rational(&self.energy),
            poly: self.poly.to_json(),
        }
    }

    /// Rebuilds from the wire form, re-verifying the eigen-equation.
    pub fn from_json(json: &EigenfunctionJson) -> Result<Self> {
        let params = ModelParams::from_json(&json.params)?;
        let label = Partition::new(json.label.clone())?;
        let ef = build_eigenfunction(&params, &label)?;
        let poly = SymPoly::from_json(&json.poly)?;
        let energy = parse_rational(&json.energy)?;
        if poly != ef.poly || energy != ef.energy || json.level != ef.level {
            return Err(Error::Contract(format!(
                "serialized eigenfunction for label {label} disagrees with its reconstruction"
            )));
        }
        Ok(ef)
    }
}

/// One row of the spectrum table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub level: u64,
    pub energy: String,
    pub degeneracy: u64,
}

/// Energies and degeneracies for levels 0..=n_max.
pub fn spectrum_table(params: &ModelParams, n_max: u64) -> Vec<SpectrumRow> {
    (0..=n_max)
        .map(|n| SpectrumRow {
            level: n,
            energy: format_rational(
                &(Rational::from_integer(BigInt::from(2 * n)) + params.e0()),
            ),
            degeneracy: degeneracy(params, n),
        })
        .collect()
}
