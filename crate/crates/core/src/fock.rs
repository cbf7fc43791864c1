//! Truncated Fock-space checks of the SU(1,1) structure and the
//! occupation-label orthogonality of the decoupled-mode picture.
//!
//! Ladder operators use the polynomial convention a+|n> = |n+1>,
//! a-|n> = n|n-1> with <n|n> = n!, so every matrix element is an exact
//! rational. The commutation relations being verified are operator
//! identities and do not depend on that basis scaling.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use crate::symfun::{orbit_vectors, partitions_of, Partition};

// ---- Single-mode states ----

/// A finite rational combination of single-mode number states with even
/// occupations. Canonical: no zero amplitudes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockState {
    amps: BTreeMap<u64, Rational>,
}

impl FockState {
    pub fn zero() -> Self {
        FockState {
            amps: BTreeMap::new(),
        }
    }

    /// The basis state |n>.
    pub fn basis(n: u64) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(n, Rational::one());
        FockState { amps }
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, n: u64) -> Rational {
        self.amps.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&u64, &Rational)> {
        self.amps.iter()
    }

    fn add_amp(&mut self, n: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.amps.entry(n) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &FockState) -> FockState {
        let mut out = self.clone();
        for (&n, c) in &other.amps {
            out.add_amp(n, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FockState) -> FockState {
        let mut out = self.clone();
        for (&n, c) in &other.amps {
            out.add_amp(n, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> FockState {
        if c.is_zero() {
            return FockState::zero();
        }
        FockState {
            amps: self
                .amps
                .iter()
                .map(|(&n, a)| (n, a * c))
                .collect(),
        }
    }

    /// True when every occupation in the support is even.
    pub fn is_even_sector(&self) -> bool {
        self.amps.keys().all(|n| n % 2 == 0)
    }
}

/// Single-mode operators on a Fock space truncated at `cutoff` quanta.
///
/// K+ = (a+)^2 / 2 raises by two, K- = (a-)^2 / 2 lowers by two, and
/// H0 = a+ a- + 1/2 counts. Raising past the cutoff is a contract violation;
/// the checks below only feed in states whose images stay inside.
#[derive(Debug, Clone, Copy)]
pub struct FockOps {
    cutoff: u64,
}

impl FockOps {
    pub fn new(cutoff: u64) -> Self {
        FockOps { cutoff }
    }

    pub fn k_plus(&self, s: &FockState) -> Result<FockState> {
        let mut out = FockState::zero();
        for (&n, c) in &s.amps {
            if n + 2 > self.cutoff {
                return Err(Error::Contract(format!(
                    "K+ would leave the truncated space: {n} + 2 > cutoff {}",
                    self.cutoff
                )));
            }
            out.add_amp(n + 2, c * rat(1, 2));
        }
        Ok(out)
    }

    pub fn k_minus(&self, s: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (&n, c) in &s.amps {
            if n >= 2 {
                let w = Rational::from_integer(BigInt::from(n * (n - 1))) * rat(1, 2);
                out.add_amp(n - 2, c * w);
            }
        }
        out
    }

    pub fn h0(&self, s: &FockState) -> FockState {
        let mut out = FockState::zero();
        for (&n, c) in &s.amps {
            let w = Rational::from_integer(BigInt::from(n)) + rat(1, 2);
            out.add_amp(n, c * w);
        }
        out
    }
}

// ---- SU(1,1) commutator check ----

/// Outcome of [`su11_fock_check`]: empty `violations` means every relation
/// held exactly on every state checked.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Su11Report {
    pub cutoff: u64,
    pub states_checked: u64,
    pub violations: Vec<String>,
}

impl Su11Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies, exactly, on every even basis state with occupation
/// <= cutoff - 4 (so no image leaves the truncation):
///
/// - `[K-, K+] = H0`
/// - `[H0, K+] = 2 K+` and `[H0, K-] = -2 K-`
/// - K+ and K- preserve the even sector.
///
/// `tamper_k_plus` doubles K+ first; it exists as a fault injection hook so
/// the failure path is testable end to end.
pub fn su11_fock_check_with(cutoff: u64, tamper_k_plus: bool) -> Result<Su11Report> {
    if cutoff < 6 {
        return Err(Error::Config(format!(
            "SU(1,1) check needs cutoff >= 6, got {cutoff}"
        )));
    }
    if cutoff % 2 != 0 {
        return Err(Error::Config(format!(
            "SU(1,1) check needs an even cutoff, got {cutoff}"
        )));
    }
    let ops = FockOps::new(cutoff);
    let k_plus = |s: &FockState| -> Result<FockState> {
        let raised = ops.k_plus(s)?;
        Ok(if tamper_k_plus {
            raised.scale(&rat(2, 1))
        } else {
            raised
        })
    };

    let mut report = Su11Report {
        cutoff,
        states_checked: 0,
        violations: Vec::new(),
    };
    let mut n = 0;
    while n + 4 <= cutoff {
        let s = FockState::basis(n);
        report.states_checked += 1;

        let lower_then_raise = k_plus(&ops.k_minus(&s))?;
        let raise_then_lower = ops.k_minus(&k_plus(&s)?);
        let commutator = raise_then_lower.sub(&lower_then_raise);
        if commutator != ops.h0(&s) {
            report
                .violations
                .push(format!("[K-, K+] != H0 on |{n}>"));
        }

        let ks = k_plus(&s)?;
        let lhs = ops.h0(&ks).sub(&k_plus(&ops.h0(&s))?);
        if lhs != ks.scale(&rat(2, 1)) {
            report.violations.push(format!("[H0, K+] != 2 K+ on |{n}>"));
        }

        let ks = ops.k_minus(&s);
        let lhs = ops.h0(&ks).sub(&ops.k_minus(&ops.h0(&s)));
        if lhs != ks.scale(&rat(-2, 1)) {
            report
                .violations
                .push(format!("[H0, K-] != -2 K- on |{n}>"));
        }

        if !k_plus(&s)?.is_even_sector() || !ops.k_minus(&s).is_even_sector() {
            report
                .violations
                .push(format!("K± left the even sector on |{n}>"));
        }

        n += 2;
    }
    Ok(report)
}

/// [`su11_fock_check_with`] without fault injection.
pub fn su11_fock_check(cutoff: u64) -> Result<Su11Report> {
    su11_fock_check_with(cutoff, false)
}

// ---- Occupation-label orthogonality ----

/// Outcome of [`fock_orthogonality_check`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub n_max: u64,
    pub n_modes: usize,
    pub labels_checked: u64,
    pub pairs_checked: u64,
    pub violations: Vec<String>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Inner product of the symmetrized N-mode states labeled by `mu` and `nu`
/// (mode occupations 2 mu_i, padded with zeros), computed combinatorially in
/// the decoupled-mode model with <n|n> = n! per mode.
fn symmetrized_overlap(mu: &Partition, nu: &Partition, n_modes: usize) -> Rational {
    let doubled = |p: &Partition| {
        Partition::new(p.parts().iter().map(|&x| 2 * x).collect())
            .expect("doubling preserves partition validity")
    };
    let mu_orbit = orbit_vectors(&doubled(mu), n_modes);
    let nu_orbit = orbit_vectors(&doubled(nu), n_modes);
    let mut total = Rational::zero();
    for a in mu_orbit.iter() {
        for b in nu_orbit.iter() {
            if a == b {
                let mut prod = Rational::one();
                for &occ in a {
                    prod *= factorial(occ as u64);
                }
                total += prod;
            }
        }
    }
    total
}

fn factorial(n: u64) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Verifies <mu'|mu> = 0 for every pair of distinct labels with
/// |mu|, |mu'| <= n_max and length <= n_modes, and <mu|mu> > 0.
pub fn fock_orthogonality_check(n_max: u64, n_modes: usize) -> OrthogonalityReport {
    let mut labels = Vec::new();
    for m in 0..=n_max {
        labels.extend(partitions_of(m, m.max(1) as u32, n_modes));
    }
    let mut report = OrthogonalityReport {
        n_max,
        n_modes,
        labels_checked: labels.len() as u64,
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for (i, mu) in labels.iter().enumerate() {
        for nu in labels.iter().skip(i) {
            report.pairs_checked += 1;
            let overlap = symmetrized_overlap(mu, nu, n_modes);
            if mu == nu {
                if overlap <= Rational::zero() {
                    report
                        .violations
                        .push(format!("<{mu}|{mu}> = {overlap} is not positive"));
                }
            } else if !overlap.is_zero() {
                report
                    .violations
                    .push(format!("<{nu}|{mu}> = {overlap} should vanish"));
            }
        }
    }
    report
}
