//! Helpers shared by the unit tests: partition/monomial shorthands and
//! seeded random polynomial generators.

use rand::rngs::StdRng;
use rand::Rng;

use crate::rational::rat_int;
use crate::symfun::{partitions_of, Partition, SymPoly, VarTag};

pub(crate) fn part(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

pub(crate) fn msym(parts: &[u32], n_vars: usize, tag: VarTag) -> SymPoly {
    SymPoly::monomial(part(parts), n_vars, tag).unwrap()
}

/// Random polynomial with small integer coefficients over partitions of
/// weight <= `max_deg` and length <= `n_vars`.
pub(crate) fn random_sympoly(rng: &mut StdRng, n_vars: usize, max_deg: u64, tag: VarTag) -> SymPoly {
    let mut terms = Vec::new();
    for d in 0..=max_deg {
        for mu in partitions_of(d, d.max(1) as u32, n_vars) {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 && rng.gen_bool(0.6) {
                terms.push((mu, rat_int(c)));
            }
        }
    }
    SymPoly::from_terms(n_vars, tag, terms).unwrap()
}

/// Random nonzero homogeneous polynomial of the given weight.
pub(crate) fn random_homogeneous(rng: &mut StdRng, n_vars: usize, deg: u64, tag: VarTag) -> SymPoly {
    let mut terms = Vec::new();
    for mu in partitions_of(deg, deg.max(1) as u32, n_vars) {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            terms.push((mu, rat_int(c)));
        }
    }
    if terms.is_empty() {
        for mu in partitions_of(deg, deg.max(1) as u32, n_vars).into_iter().take(1) {
            terms.push((mu, rat_int(1)));
        }
    }
    SymPoly::from_terms(n_vars, tag, terms).unwrap()
}
