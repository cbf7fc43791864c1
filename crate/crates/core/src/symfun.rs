//! Exact symmetric-polynomial algebra in the monomial symmetric basis.
//!
//! - [`Partition`]: weakly decreasing positive integer sequences; they index
//!   monomial symmetric functions and label degenerate levels.
//! - [`partitions_of`]: restricted partition enumeration in reverse-lexicographic order.
//! - [`SymPoly`]: finite map `Partition -> Rational` over a fixed variable
//!   count and variable convention, with ring operations, power-sum products,
//!   and pointwise evaluation.
//!
//! Coefficients are exact rationals throughout; the only floating-point
//! output is [`SymPoly::evaluate`], which feeds the numerical verification
//! layer.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, to_f64, Rational};

// ---- Partition ----

/// A weakly decreasing sequence of positive integers.
///
/// The empty partition is valid and denotes the constant monomial m_{} = 1.
/// The derived `Ord` is lexicographic on the parts; canonical emission order
/// everywhere in this crate is the reverse (descending) of that.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates that `parts` is weakly decreasing with strictly positive entries.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Domain(format!(
                    "partition parts must be weakly decreasing, got {parts:?}"
                )));
            }
        }
        if parts.contains(&0) {
            return Err(Error::Domain(format!(
                "partition parts must be positive, got {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Builds the partition underlying an exponent vector: sorts descending
    /// and drops zeros. Always valid.
    pub fn from_exponents(exponents: &[u32]) -> Self {
        let mut parts: Vec<u32> = exponents.iter().copied().filter(|&e| e != 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest part, 0 for the empty partition.
    pub fn max_part(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Multiplicity map part -> count. For a level label this is the
    /// exponent assignment l -> n_l of the power-sum product.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// All partitions of `n` with each part <= `max_part` and at most
/// `max_length` parts, in reverse-lexicographic (descending) order.
///
/// `partitions_of(0, _, _)` is the singleton `[empty]` by the empty-sum
/// convention.
pub fn partitions_of(n: u64, max_part: u32, max_length: usize) -> Vec<Partition> {
    fn rec(
        remaining: u64,
        max_part: u32,
        slots: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition(current.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        let top = max_part.min(u32::try_from(remaining).unwrap_or(u32::MAX));
        for part in (1..=top).rev() {
            current.push(part);
            rec(remaining - part as u64, part, slots - 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_part, max_length, &mut Vec::new(), &mut out);
    out
}

/// Count of partitions of `n` with parts <= `max_part`, without enumerating.
pub fn count_partitions(n: u64, max_part: u32) -> u64 {
    let n = n as usize;
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for part in 1..=(max_part as usize).min(n.max(1)) {
        for m in part..=n {
            ways[m] += ways[m - part];
        }
    }
    ways[n]
}

// ---- Orbit enumeration ----

/// Distinct exponent vectors of length `n_vars` whose nonzero entries are the
/// parts of `mu`, in ascending lexicographic order. This is the monomial
/// orbit of m_mu under the symmetric group; repeated parts are handled
/// without multiplicity (each distinct vector appears once).
///
/// Results are memoized per `(mu, n_vars)`; the table is safe for concurrent
/// readers with writers taking the lock only on a miss.
pub(crate) fn orbit_vectors(mu: &Partition, n_vars: usize) -> Arc<Vec<Vec<u32>>> {
    type OrbitMemo = HashMap<(Vec<u32>, usize), Arc<Vec<Vec<u32>>>>;
    static MEMO: LazyLock<RwLock<OrbitMemo>> = LazyLock::new(|| RwLock::new(HashMap::new()));

    let key = (mu.0.clone(), n_vars);
    if let Some(hit) = MEMO.read().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    assert!(
        mu.len() <= n_vars,
        "orbit of {mu} undefined in {n_vars} variables"
    );
    let mut v = vec![0u32; n_vars];
    for (i, &p) in mu.0.iter().enumerate() {
        v[i] = p;
    }
    v.sort_unstable();
    let mut orbit = Vec::new();
    loop {
        orbit.push(v.clone());
        if !next_permutation(&mut v) {
            break;
        }
    }
    let arc = Arc::new(orbit);
    MEMO.write()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&arc));
    arc
}

/// Advances `v` to the next distinct permutation in lexicographic order.
/// Returns false when `v` was already the last one.
fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

// ---- SymPoly ----

/// Which coordinates a polynomial lives in.
///
/// `Y` means squared particle coordinates (y_i = x_i^2, the even sector);
/// `X` means plain coordinates. Degree-grading and operator actions differ
/// between the two, so mixing them is a contract violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarTag {
    Y,
    X,
}

impl VarTag {
    /// Degree in the plain coordinates x of a component of the given weight.
    pub fn x_degree(self, weight: u64) -> u64 {
        match self {
            VarTag::Y => 2 * weight,
            VarTag::X => weight,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VarTag::Y => "Y",
            VarTag::X => "X",
        }
    }

    pub fn from_str_tag(s: &str) -> Result<Self> {
        match s {
            "Y" => Ok(VarTag::Y),
            "X" => Ok(VarTag::X),
            _ => Err(Error::Domain(format!("unknown variable tag `{s}`"))),
        }
    }
}

/// A symmetric polynomial in `n_vars` variables, stored as exact rational
/// coefficients over the monomial symmetric basis.
///
/// Canonical form: no zero coefficients, every key partition of length
/// <= `n_vars`. Equality is structural equality of the canonical term maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    n_vars: usize,
    tag: VarTag,
    terms: BTreeMap<Partition, Rational>,
}

impl SymPoly {
    pub fn zero(n_vars: usize, tag: VarTag) -> Self {
        SymPoly {
            n_vars,
            tag,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational, n_vars: usize, tag: VarTag) -> Self {
        let mut p = SymPoly::zero(n_vars, tag);
        if !c.is_zero() {
            p.terms.insert(Partition::empty(), c);
        }
        p
    }

    pub fn one(n_vars: usize, tag: VarTag) -> Self {
        SymPoly::constant(Rational::one(), n_vars, tag)
    }

    /// The monomial symmetric function m_mu.
    pub fn monomial(mu: Partition, n_vars: usize, tag: VarTag) -> Result<Self> {
        if mu.len() > n_vars {
            return Err(Error::Domain(format!(
                "partition {mu} has more parts than the {n_vars} variables"
            )));
        }
        let mut p = SymPoly::zero(n_vars, tag);
        p.terms.insert(mu, Rational::one());
        Ok(p)
    }

    /// The power sum P_l = sum_i v_i^l, which equals m_{(l)}.
    pub fn power_sum(l: u32, n_vars: usize, tag: VarTag) -> Result<Self> {
        if l == 0 || l as usize > n_vars {
            return Err(Error::Domain(format!(
                "power-sum index {l} outside 1..={n_vars}"
            )));
        }
        SymPoly::monomial(Partition(vec![l]), n_vars, tag)
    }

    /// Builds a polynomial from `(parts, coefficient)` pairs, collecting like
    /// terms and dropping zeros.
    pub fn from_terms(
        n_vars: usize,
        tag: VarTag,
        terms: impl IntoIterator<Item = (Partition, Rational)>,
    ) -> Result<Self> {
        let mut p = SymPoly::zero(n_vars, tag);
        for (mu, c) in terms {
            if mu.len() > n_vars {
                return Err(Error::Domain(format!(
                    "partition {mu} has more parts than the {n_vars} variables"
                )));
            }
            p.add_term(mu, c);
        }
        Ok(p)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn tag(&self) -> VarTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of m_mu (zero when absent).
    pub fn coeff(&self, mu: &Partition) -> Rational {
        self.terms.get(mu).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending lexicographic partition order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    /// Terms in canonical reverse-lexicographic (descending) order.
    pub fn terms_revlex(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter().rev()
    }

    fn add_term(&mut self, mu: Partition, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mu) {
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

    fn check_compatible(&self, other: &SymPoly) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::Contract(format!(
                "variable counts differ: {} vs {}",
                self.n_vars, other.n_vars
            )));
        }
        if self.tag != other.tag {
            return Err(Error::Contract(format!(
                "variable tags differ: {} vs {}",
                self.tag.as_str(),
                other.tag.as_str()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (mu, c) in &other.terms {
            out.add_term(mu.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymPoly) -> Result<SymPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SymPoly {
        SymPoly {
            n_vars: self.n_vars,
            tag: self.tag,
            terms: self
                .terms
                .iter()
                .map(|(mu, c)| (mu.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> SymPoly {
        if c.is_zero() {
            return SymPoly::zero(self.n_vars, self.tag);
        }
        SymPoly {
            n_vars: self.n_vars,
            tag: self.tag,
            terms: self
                .terms
                .iter()
                .map(|(mu, k)| (mu.clone(), k * c))
                .collect(),
        }
    }

    /// Exact product, re-expanded in the monomial symmetric basis.
    ///
    /// Both factors are expanded over their monomial orbits and convolved;
    /// the result is read back off the sorted orbit representatives.
    pub fn multiply(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(SymPoly::zero(self.n_vars, self.tag));
        }
        let a = self.to_monomial_map();
        let b = other.to_monomial_map();
        let mut out: HashMap<Vec<u32>, Rational> = HashMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let sum: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                add_to_monomial_map(&mut out, sum, ca * cb);
            }
        }
        Ok(collect_monomial_map(out, self.n_vars, self.tag))
    }

    /// `Some(w)` when every key partition has weight `w` (`Some(0)` for the
    /// zero polynomial), `None` for mixed weights.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys().map(Partition::weight);
        let first = match it.next() {
            Some(w) => w,
            None => return Some(0),
        };
        if it.all(|w| w == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Largest key weight (0 for the zero polynomial).
    pub fn max_weight(&self) -> u64 {
        self.terms.keys().map(Partition::weight).max().unwrap_or(0)
    }

    /// Splits into homogeneous components, ascending by weight.
    pub fn homogeneous_components(&self) -> Vec<(u64, SymPoly)> {
        let mut by_weight: BTreeMap<u64, SymPoly> = BTreeMap::new();
        for (mu, c) in &self.terms {
            by_weight
                .entry(mu.weight())
                .or_insert_with(|| SymPoly::zero(self.n_vars, self.tag))
                .add_term(mu.clone(), c.clone());
        }
        by_weight.into_iter().collect()
    }

    /// Pointwise value at a concrete point.
    ///
    /// Summation order is deterministic: partitions in reverse-lexicographic
    /// order, orbit assignments in ascending lexicographic order.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.n_vars {
            return Err(Error::Contract(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.n_vars
            )));
        }
        let mut total = 0.0;
        for (mu, c) in self.terms_revlex() {
            let mut orbit_sum = 0.0;
            for v in orbit_vectors(mu, self.n_vars).iter() {
                let mut prod = 1.0;
                for (x, &e) in point.iter().zip(v) {
                    if e != 0 {
                        prod *= x.powi(e as i32);
                    }
                }
                orbit_sum += prod;
            }
            total += to_f64(c) * orbit_sum;
        }
        Ok(total)
    }

    /// Full expansion into distinct monomials (exponent vector -> coefficient).
    pub(crate) fn to_monomial_map(&self) -> HashMap<Vec<u32>, Rational> {
        let mut map = HashMap::new();
        for (mu, c) in &self.terms {
            for v in orbit_vectors(mu, self.n_vars).iter() {
                map.insert(v.clone(), c.clone());
            }
        }
        map
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mu, c)) in self.terms_revlex().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mu.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "m{mu}")?;
            } else {
                write!(f, "{}*m{mu}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

/// Accumulates `c` into `map[key]`.
pub(crate) fn add_to_monomial_map(
    map: &mut HashMap<Vec<u32>, Rational>,
    key: Vec<u32>,
    c: Rational,
) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

/// Collects a symmetric monomial expansion back into monomial-symmetric
/// coefficients.
///
/// Panics when the expansion is not symmetric (coefficients differing within
/// an orbit, or a partially populated orbit): operators in this crate produce
/// symmetric output by construction, so a failure here is a bug.
pub(crate) fn collect_monomial_map(
    map: HashMap<Vec<u32>, Rational>,
    n_vars: usize,
    tag: VarTag,
) -> SymPoly {
    let mut groups: HashMap<Partition, (usize, Rational)> = HashMap::new();
    for (v, c) in map {
        let mu = Partition::from_exponents(&v);
        match groups.entry(mu) {
            Entry::Occupied(mut o) => {
                let (count, coeff) = o.get_mut();
                assert!(
                    *coeff == c,
                    "non-symmetric expansion: orbit coefficients differ"
                );
                *count += 1;
            }
            Entry::Vacant(slot) => {
                slot.insert((1, c));
            }
        }
    }
    let mut terms = BTreeMap::new();
    for (mu, (count, coeff)) in groups {
        if coeff.is_zero() {
            continue;
        }
        let orbit_len = orbit_vectors(&mu, n_vars).len();
        assert!(
            count == orbit_len,
            "non-symmetric expansion: orbit of {mu} only partially populated ({count}/{orbit_len})"
        );
        terms.insert(mu, coeff);
    }
    SymPoly { n_vars, tag, terms }
}

/// The power-sum product prod_l P_l^{n_l} expanded in the monomial symmetric
/// basis, with `exponents` mapping l -> n_l.
///
/// Every l must lie in 1..=n_vars (the product family is restricted to the
/// first `n_vars` power sums). The result is homogeneous of degree
/// sum_l l * n_l in the polynomial's own variables.
pub fn power_sum_product(
    exponents: &BTreeMap<u32, u32>,
    n_vars: usize,
    tag: VarTag,
) -> Result<SymPoly> {
    for &l in exponents.keys() {
        if l == 0 || l as usize > n_vars {
            return Err(Error::Domain(format!(
                "power-sum index {l} outside 1..={n_vars}"
            )));
        }
    }
    let mut acc = SymPoly::one(n_vars, tag);
    for (&l, &n_l) in exponents {
        let p_l = SymPoly::power_sum(l, n_vars, tag)?;
        for _ in 0..n_l {
            acc = acc.multiply(&p_l)?;
        }
    }
    Ok(acc)
}

// ---- JSON form ----

/// Wire form of [`SymPoly`]: partitions in reverse-lexicographic order,
/// coefficients as exact decimal-free fraction strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymPolyJson {
    pub n_vars: usize,
    pub tag: String,
    pub terms: Vec<SymPolyTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymPolyTermJson {
    pub partition: Vec<u32>,
    pub coeff: String,
}

impl SymPoly {
    pub fn to_json(&self) -> SymPolyJson {
        SymPolyJson {
            n_vars: self.n_vars,
            tag: self.tag.as_str().to_string(),
            terms: self
                .terms_revlex()
                .map(|(mu, c)| SymPolyTermJson {
                    partition: mu.parts().to_vec(),
                    coeff: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &SymPolyJson) -> Result<SymPoly> {
        let tag = VarTag::from_str_tag(&json.tag)?;
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            let mu = Partition::new(t.partition.clone())?;
            terms.push((mu, parse_rational(&t.coeff)?));
        }
        SymPoly::from_terms(json.n_vars, tag, terms)
    }
}
