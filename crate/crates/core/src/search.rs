//! Exhaustive bounded-height point search with coordinates in `Z[1/2]`.
//!
//! A projective point whose primitive integer coordinates share the same
//! p-adic valuation at every odd prime has each coordinate equal to `±` a
//! power of 2 (times the common unit content, cleared by primitivity), so a
//! height bound `H` reduces the search to the alphabet
//! `{±2^a : 0 <= a <= floor(H / log 2)}`, optionally with 0. Five
//! coordinates range freely over the alphabet; the other five are solved
//! exactly from the linear system and accepted only when they land back in
//! the alphabet and the quartic vanishes.

use crate::linalg::ExactMatrix;
use crate::scalar::{Domain, Scalar};
use crate::variety::{ProjectivePoint, VarietyError, LINEAR_FORMS};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error(
        "free coordinate choice {chosen:?} leaves a singular dependent block; try {suggestion:?}"
    )]
    SingularFreeSet {
        chosen: [usize; 5],
        suggestion: [usize; 5],
    },
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

/// Configuration of one search run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchConfig {
    /// Bound on the logarithmic height.
    pub height_bound: f64,
    /// Largest exponent of 2 in the alphabet, `floor(height_bound / log 2)`.
    pub max_exponent: u32,
    pub allow_zero_coordinates: bool,
    /// One-based indices of the five freely enumerated coordinates.
    pub free_set: [usize; 5],
}

pub const DEFAULT_FREE_SET: [usize; 5] = [1, 2, 3, 4, 5];

impl SearchConfig {
    pub fn new(height_bound: f64) -> Self {
        Self {
            height_bound,
            max_exponent: (height_bound / 2f64.ln()).floor().max(0.0) as u32,
            allow_zero_coordinates: false,
            free_set: DEFAULT_FREE_SET,
        }
    }

    pub fn with_zeros(mut self, allow: bool) -> Self {
        self.allow_zero_coordinates = allow;
        self
    }

    pub fn with_free_set(mut self, free_set: [usize; 5]) -> Self {
        self.free_set = free_set;
        self
    }

    /// The signed power-of-2 alphabet (plus 0 when allowed).
    pub fn alphabet(&self) -> Vec<i64> {
        let mut out = Vec::new();
        if self.allow_zero_coordinates {
            out.push(0);
        }
        for a in 0..=self.max_exponent {
            out.push(1i64 << a);
            out.push(-(1i64 << a));
        }
        out
    }

    fn canonical_string(&self) -> String {
        format!(
            "height={};max_exp={};zeros={};free={:?}",
            self.height_bound, self.max_exponent, self.allow_zero_coordinates, self.free_set
        )
    }
}

/// The machine-checked reduction from the integrality condition to the
/// enumeration alphabet.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionRecord {
    pub height_bound: f64,
    pub max_exponent: u32,
    /// `2^max_exponent <= e^height < 2^(max_exponent + 1)` checked exactly.
    pub exponent_bracket_ok: bool,
    pub alphabet: Vec<i64>,
    pub notes: Vec<String>,
}

pub fn candidate_form_reduction(cfg: &SearchConfig) -> ReductionRecord {
    let e_h = cfg.height_bound.exp();
    let lo = 2f64.powi(cfg.max_exponent as i32);
    let hi = 2f64.powi(cfg.max_exponent as i32 + 1);
    ReductionRecord {
        height_bound: cfg.height_bound,
        max_exponent: cfg.max_exponent,
        exponent_bracket_ok: lo <= e_h && e_h < hi,
        alphabet: cfg.alphabet(),
        notes: vec![
            "primitive coordinates with equal odd-prime valuations are signed powers of 2"
                .to_string(),
            format!(
                "height bound e^{} caps the exponent spread at {}",
                cfg.height_bound, cfg.max_exponent
            ),
        ],
    }
}

/// Reproducibility counters for a completed run.
#[derive(Clone, Debug, Serialize)]
pub struct SearchCertificate {
    pub free_tuples_enumerated: u64,
    /// Rejections at each of the five solved coordinates, in solve order.
    pub pruned_per_dependent_coordinate: [u64; 5],
    pub quartic_tested: u64,
    pub quartic_rejected: u64,
    pub accepted: u64,
    pub wall_clock_ms: u128,
    /// SHA-256 of the canonical configuration string.
    pub config_hash: String,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub points: Vec<ProjectivePoint>,
    pub certificate: SearchCertificate,
}

/// All 5-subsets whose complementary linear block is invertible over `Q`.
pub fn valid_free_sets() -> Vec<[usize; 5]> {
    let mut out = Vec::new();
    for mask in 0u16..1 << 10 {
        if mask.count_ones() != 5 {
            continue;
        }
        let free: Vec<usize> = (1..=10).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let free: [usize; 5] = free.try_into().expect("five set bits");
        if dependent_block_inverse(&free).is_some() {
            out.push(free);
        }
    }
    out
}

fn dependent_indices(free: &[usize; 5]) -> [usize; 5] {
    let dep: Vec<usize> = (1..=10).filter(|i| !free.contains(i)).collect();
    dep.try_into().expect("five dependents")
}

fn dependent_block_inverse(free: &[usize; 5]) -> Option<ExactMatrix> {
    let dep = dependent_indices(free);
    let rows: Vec<Vec<i64>> = LINEAR_FORMS
        .iter()
        .map(|form| dep.iter().map(|&j| form[j - 1]).collect())
        .collect();
    ExactMatrix::from_i64_rows(&rows, Domain::Rational).inverse()
}

/// Integer solve data: `x_dep = (NUM * x_free) / den` with `NUM` integral.
struct Solver {
    dep: [usize; 5],
    numerator: [[BigInt; 5]; 5],
    denominator: BigInt,
}

fn build_solver(free: &[usize; 5]) -> Result<Solver, SearchError> {
    let Some(inv) = dependent_block_inverse(free) else {
        let suggestion = *valid_free_sets().first().expect("the default set is valid");
        return Err(SearchError::SingularFreeSet {
            chosen: *free,
            suggestion,
        });
    };
    let dep = dependent_indices(free);
    // S = -B^{-1} A where A is the free block; clear denominators
    let mut den = BigInt::from(1);
    let mut rational: Vec<Vec<num_rational::BigRational>> = Vec::with_capacity(5);
    for i in 0..5 {
        let mut row = Vec::with_capacity(5);
        for &fj in free {
            let mut acc = num_rational::BigRational::zero();
            for k in 0..5 {
                let a_kj = BigInt::from(LINEAR_FORMS[k][fj - 1]);
                let inv_ik = inv
                    .entry(i, k)
                    .as_rational()
                    .expect("solver runs over Q")
                    .clone();
                acc += inv_ik * num_rational::BigRational::from_integer(a_kj);
            }
            acc = -acc;
            den = num_integer::Integer::lcm(&den, acc.denom());
            row.push(acc);
        }
        rational.push(row);
    }
    let numerator: [[BigInt; 5]; 5] = std::array::from_fn(|i| {
        std::array::from_fn(|j| (rational[i][j].clone() * den.clone()).to_integer())
    });
    Ok(Solver {
        dep,
        numerator,
        denominator: den,
    })
}

fn in_alphabet(v: &BigInt, cfg: &SearchConfig) -> bool {
    if v.is_zero() {
        return cfg.allow_zero_coordinates;
    }
    let a = v.abs();
    // positive power of two with exponent at most max_exponent
    let bits = a.bits();
    a == BigInt::from(1) << (bits - 1) && bits - 1 <= u64::from(cfg.max_exponent)
}

/// Runs the search: enumerates the free coordinates over the alphabet,
/// solves the rest exactly, and keeps canonical on-model points. Points are
/// deduplicated projectively and sorted.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let start = std::time::Instant::now();
    let solver = build_solver(&cfg.free_set)?;
    let alphabet = cfg.alphabet();
    let mut counters = SearchCertificate {
        free_tuples_enumerated: 0,
        pruned_per_dependent_coordinate: [0; 5],
        quartic_tested: 0,
        quartic_rejected: 0,
        accepted: 0,
        wall_clock_ms: 0,
        config_hash: hex_digest(&cfg.canonical_string()),
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut points = Vec::new();

    let n = alphabet.len();
    let mut idx = [0usize; 5];
    'outer: loop {
        let free_vals: [i64; 5] = idx.map(|k| alphabet[k]);
        counters.free_tuples_enumerated += 1;
        if let Some(point) = try_candidate(cfg, &solver, &free_vals, &mut counters) {
            let key = point.to_i64_coords();
            if seen.insert(key) {
                points.push(point);
            }
        }
        // odometer
        let mut pos = 4;
        loop {
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
        }
    }

    points.sort_by_key(ProjectivePoint::to_i64_coords);
    counters.accepted = points.len() as u64;
    counters.wall_clock_ms = start.elapsed().as_millis();
    Ok(SearchOutcome {
        points,
        certificate: counters,
    })
}

fn try_candidate(
    cfg: &SearchConfig,
    solver: &Solver,
    free_vals: &[i64; 5],
    counters: &mut SearchCertificate,
) -> Option<ProjectivePoint> {
    if free_vals.iter().all(|&v| v == 0) {
        return None;
    }
    let mut coords: [BigInt; 10] = std::array::from_fn(|_| BigInt::from(0));
    for (j, &f) in cfg.free_set.iter().enumerate() {
        coords[f - 1] = BigInt::from(free_vals[j]);
    }
    for i in 0..5 {
        let mut acc = BigInt::from(0);
        for j in 0..5 {
            acc += &solver.numerator[i][j] * free_vals[j];
        }
        let (q, r) = num_integer::Integer::div_rem(&acc, &solver.denominator);
        if !r.is_zero() || !in_alphabet(&q, cfg) {
            counters.pruned_per_dependent_coordinate[i] += 1;
            return None;
        }
        coords[solver.dep[i] - 1] = q;
    }
    counters.quartic_tested += 1;
    let s2: BigInt = coords.iter().map(|v| v * v).sum();
    let s4: BigInt = coords.iter().map(|v| v * v * v * v).sum();
    if &s2 * &s2 != BigInt::from(4) * s4 {
        counters.quartic_rejected += 1;
        return None;
    }
    let scalars: Vec<Scalar> = coords
        .iter()
        .map(|v| Scalar::from_rational(num_rational::BigRational::from_integer(v.clone())))
        .collect();
    let point = ProjectivePoint::new(scalars).expect("nonzero candidate");
    // canonical form must stay inside the height box
    let canonical = point.to_i64_coords();
    if canonical
        .iter()
        .any(|&v| v != 0 && v.unsigned_abs() > 1u64 << cfg.max_exponent)
    {
        return None;
    }
    debug_assert!(point.is_on_variety());
    Some(point)
}

fn hex_digest(s: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(s.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::enumerate_small_points;

    #[test]
    fn reduction_record_brackets() {
        let cfg = SearchConfig::new(4.0);
        assert_eq!(cfg.max_exponent, 5);
        let rec = candidate_form_reduction(&cfg);
        assert!(rec.exponent_bracket_ok);
        assert_eq!(rec.alphabet.len(), 12);

        assert_eq!(SearchConfig::new(0.0).max_exponent, 0);
        assert_eq!(SearchConfig::new(0.0).alphabet(), vec![1, -1]);
        assert_eq!(SearchConfig::new(8.6).max_exponent, 12);
    }

    #[test]
    fn default_free_set_is_valid_and_singular_sets_get_a_suggestion() {
        assert!(valid_free_sets().contains(&DEFAULT_FREE_SET));
        // {6..10} misses the support of the first linear form entirely
        let err = run_search(&SearchConfig::new(1.0).with_free_set([6, 7, 8, 9, 10]))
            .expect_err("singular block");
        match err {
            SearchError::SingularFreeSet { suggestion, .. } => {
                assert!(valid_free_sets().contains(&suggestion));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn height_four_search_is_empty_with_full_certificate() {
        let out = run_search(&SearchConfig::new(4.0)).unwrap();
        assert!(out.points.is_empty());
        assert_eq!(out.certificate.free_tuples_enumerated, 248832); // 12^5
        assert_eq!(out.certificate.accepted, 0);
    }

    #[test]
    fn zero_allowing_unit_search_recovers_the_deepest_points() {
        let cfg = SearchConfig::new(0.0).with_zeros(true);
        let out = run_search(&cfg).unwrap();
        let expected = enumerate_small_points(Domain::Rational).unwrap();
        assert_eq!(out.points, expected);
    }

    #[test]
    fn exponent_one_search_matches_direct_scan() {
        // independent oracle: plain scan of all 5^10 coordinate vectors over
        // {0, ±1, ±2}, no linear solving involved
        let mut expected = std::collections::BTreeSet::new();
        let vals = [0i64, 1, -1, 2, -2];
        let mut digits = [0usize; 10];
        loop {
            let x: [i64; 10] = digits.map(|d| vals[d]);
            let lead = x.iter().find(|&&v| v != 0);
            if lead.is_some() {
                let lin_ok = LINEAR_FORMS
                    .iter()
                    .all(|f| f.iter().zip(&x).map(|(c, v)| c * v).sum::<i64>() == 0);
                if lin_ok {
                    let s2: i64 = x.iter().map(|v| v * v).sum();
                    let s4: i64 = x.iter().map(|v| v.pow(4)).sum();
                    if s2 * s2 == 4 * s4 {
                        let p = ProjectivePoint::from_ints(&x).unwrap();
                        expected.insert(p.to_i64_coords());
                    }
                }
            }
            let mut pos = 9;
            loop {
                digits[pos] += 1;
                if digits[pos] < 5 {
                    break;
                }
                digits[pos] = 0;
                if pos == 0 {
                    let cfg = SearchConfig {
                        height_bound: 2f64.ln(),
                        max_exponent: 1,
                        allow_zero_coordinates: true,
                        free_set: DEFAULT_FREE_SET,
                    };
                    let got: std::collections::BTreeSet<[i64; 10]> = run_search(&cfg)
                        .unwrap()
                        .points
                        .iter()
                        .map(ProjectivePoint::to_i64_coords)
                        .collect();
                    assert_eq!(got, expected);
                    return;
                }
                pos -= 1;
            }
        }
    }

    #[test]
    fn empty_result_is_free_set_independent() {
        let alt = valid_free_sets()
            .into_iter()
            .find(|s| *s != DEFAULT_FREE_SET)
            .expect("more than one valid choice");
        let a = run_search(&SearchConfig::new(4.0)).unwrap();
        let b = run_search(&SearchConfig::new(4.0).with_free_set(alt)).unwrap();
        assert!(a.points.is_empty() && b.points.is_empty());
        assert_eq!(a.certificate.free_tuples_enumerated, b.certificate.free_tuples_enumerated);
    }

    #[test]
    fn certificate_hash_is_run_independent() {
        let cfg = SearchConfig::new(2.0);
        let a = run_search(&cfg).unwrap();
        let b = run_search(&cfg).unwrap();
        assert_eq!(a.certificate.config_hash, b.certificate.config_hash);
        assert_eq!(
            a.certificate.pruned_per_dependent_coordinate,
            b.certificate.pruned_per_dependent_coordinate
        );
        let other = run_search(&SearchConfig::new(3.0)).unwrap();
        assert_ne!(a.certificate.config_hash, other.certificate.config_hash);
    }
}
