//! The explicit Runge-side arithmetic: the archimedean/non-archimedean
//! smallness thresholds, the Göpel floor constant, the two-place coordinate
//! choice, and the uniform height bounds they assemble into.
//!
//! Two constants drive everything. At an archimedean place, coordinates
//! smaller than `1/27` of the maximum form a set that either has at most
//! four elements or lies inside a Göpel-quadruple complement; and no Göpel
//! quadruple can have all four coordinates below `0.051` of the maximum. At
//! a finite place the analogous statements hold with thresholds `1` and
//! `|2||3|`. Both constants are kept as exact rationals (`1/27`, `51/1000`)
//! and every floating-point comparison is taken with an outward margin so a
//! borderline sample can never falsely certify.

use crate::chars::goepel_quadruples;
use crate::scalar::Scalar;
use crate::variety::ProjectivePoint;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

/// Relative outward margin applied to floating-point threshold comparisons.
const FLOAT_MARGIN: f64 = 1e-12;

/// Smallness threshold numerator/denominator at archimedean places: 1/27.
pub const ARCH_SMALL_THRESHOLD: (i64, i64) = (1, 27);
/// Göpel floor constant at archimedean places: 51/1000.
pub const ARCH_FLOOR_CONSTANT: (i64, i64) = (51, 1000);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RungeError {
    #[error("all coordinate magnitudes vanish")]
    AllZero,
    #[error("point has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),
    #[error("no coordinate satisfies the two-place floor inequality")]
    NoValidIndex,
    #[error("exact comparisons need rational coordinates")]
    NotRational,
}

/// A place of `Q` with its normalised absolute value.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    /// `|n|_v` for a small integer, as an exact rational.
    fn norm_of_int(self, n: u64) -> BigRational {
        match self {
            Place::Archimedean => BigRational::from_integer(BigInt::from(n)),
            Place::Finite(p) => {
                let mut den = BigInt::from(1);
                let mut m = n;
                while m % p == 0 {
                    den *= p;
                    m /= p;
                }
                BigRational::new(BigInt::from(1), den)
            }
        }
    }

    /// The floor constant of the Göpel inequality at this place:
    /// `|2||3|` when finite, `51/1000` when archimedean.
    pub fn floor_constant(self) -> BigRational {
        match self {
            Place::Archimedean => BigRational::new(
                BigInt::from(ARCH_FLOOR_CONSTANT.0),
                BigInt::from(ARCH_FLOOR_CONSTANT.1),
            ),
            Place::Finite(_) => self.norm_of_int(2) * self.norm_of_int(3),
        }
    }

    /// The smallness threshold: `1/27` archimedean, `1` finite.
    pub fn small_threshold(self) -> BigRational {
        match self {
            Place::Archimedean => BigRational::new(
                BigInt::from(ARCH_SMALL_THRESHOLD.0),
                BigInt::from(ARCH_SMALL_THRESHOLD.1),
            ),
            Place::Finite(_) => BigRational::from_integer(BigInt::from(1)),
        }
    }
}

/// `|x|_v` of a rational coordinate, exact.
fn rational_norm_at(x: &BigRational, place: Place) -> BigRational {
    match place {
        Place::Archimedean => x.abs(),
        Place::Finite(p) => {
            if x.is_zero() {
                return BigRational::zero();
            }
            let p_big = BigInt::from(p);
            let mut num = x.numer().clone();
            let mut den = x.denom().clone();
            let mut v: i64 = 0;
            while (&num % &p_big).is_zero() {
                num /= &p_big;
                v += 1;
            }
            while (&den % &p_big).is_zero() {
                den /= &p_big;
                v -= 1;
            }
            let mut out = BigRational::from_integer(BigInt::from(1));
            let step = BigRational::from_integer(p_big);
            for _ in 0..v.abs() {
                if v > 0 {
                    out /= step.clone();
                } else {
                    out *= step.clone();
                }
            }
            out
        }
    }
}

/// Outcome of the smallness classification at one place.
#[derive(Clone, Debug, Serialize)]
pub struct SmallSetReport {
    /// One-based indices with `|x_i| < threshold * max`.
    pub small_indices: Vec<usize>,
    /// Whether the small set has at most four elements or lies inside some
    /// Göpel-quadruple complement.
    pub verdict: bool,
    /// Index (zero-based into the canonical Göpel list) of a containing
    /// complement, when one exists.
    pub containing_complement: Option<usize>,
}

fn small_set_verdict(small: &[usize]) -> (bool, Option<usize>) {
    if small.len() <= 4 {
        return (true, None);
    }
    for (k, g) in goepel_quadruples().iter().enumerate() {
        let comp = g.complement_indices();
        if small.iter().all(|i| comp.contains(i)) {
            return (true, Some(k));
        }
    }
    (false, None)
}

/// Classifies coordinate magnitudes at a place. Comparisons carry an
/// outward relative margin: borderline magnitudes are treated as small, so
/// the verdict can only fail harder, never pass spuriously.
pub fn small_coordinate_set(
    magnitudes: &[f64; 10],
    place: Place,
) -> Result<SmallSetReport, RungeError> {
    let max = magnitudes.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(RungeError::AllZero);
    }
    let threshold = match place {
        Place::Archimedean => 1.0 / 27.0,
        Place::Finite(_) => 1.0,
    };
    let small: Vec<usize> = (1..=10)
        .filter(|&i| {
            magnitudes[i - 1] * (1.0 - FLOAT_MARGIN) < threshold * max * (1.0 + FLOAT_MARGIN)
        })
        .collect();
    let (verdict, containing_complement) = small_set_verdict(&small);
    Ok(SmallSetReport {
        small_indices: small,
        verdict,
        containing_complement,
    })
}

/// Exact variant of [`small_coordinate_set`] for rational points.
pub fn small_coordinate_set_exact(
    point: &ProjectivePoint,
    place: Place,
) -> Result<SmallSetReport, RungeError> {
    let norms = exact_norms(point, place)?;
    let max = norms.iter().max().cloned().expect("ten coordinates");
    if max.is_zero() {
        return Err(RungeError::AllZero);
    }
    let threshold = place.small_threshold();
    let small: Vec<usize> = (1..=10)
        .filter(|&i| norms[i - 1] < threshold.clone() * max.clone())
        .collect();
    let (verdict, containing_complement) = small_set_verdict(&small);
    Ok(SmallSetReport {
        small_indices: small,
        verdict,
        containing_complement,
    })
}

fn exact_norms(point: &ProjectivePoint, place: Place) -> Result<Vec<BigRational>, RungeError> {
    point
        .coords()
        .iter()
        .map(|c| match c {
            Scalar::Rational(r) => Ok(rational_norm_at(r, place)),
            Scalar::Fp { .. } => Err(RungeError::NotRational),
        })
        .collect()
}

/// Checks that some coordinate of the given Göpel quadruple has magnitude at
/// least `c * max` with `c` the place's floor constant. The comparison is
/// rounded inward, so a borderline sample fails rather than passes.
pub fn goepel_floor_check(
    magnitudes: &[f64; 10],
    quadruple_indices: &[usize; 4],
    place: Place,
) -> bool {
    let max = magnitudes.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return false;
    }
    // archimedean samples are floating approximations, so the comparison is
    // rounded inward there; finite-place magnitudes come from exact data
    // and are compared verbatim
    let (c, margin) = match place {
        Place::Archimedean => (0.051, FLOAT_MARGIN),
        Place::Finite(2) => (0.5, 0.0),
        Place::Finite(3) => (1.0 / 3.0, 0.0),
        Place::Finite(_) => (1.0, 0.0),
    };
    quadruple_indices
        .iter()
        .any(|&i| magnitudes[i - 1] * (1.0 - margin) >= c * max * (1.0 + margin))
}

/// Whether coordinate `i` of an exact rational point satisfies the floor
/// inequality `|x_i|_v >= C_v * max_j |x_j|_v` at the given place.
pub fn satisfies_floor_exact(
    point: &ProjectivePoint,
    index: usize,
    place: Place,
) -> Result<bool, RungeError> {
    let norms = exact_norms(point, place)?;
    let max = norms.iter().max().cloned().expect("ten coordinates");
    let c = match place {
        Place::Archimedean => place.small_threshold(), // 1/27
        Place::Finite(_) => place.floor_constant(),    // |2||3|
    };
    Ok(norms[index - 1] >= c * max)
}

/// Chooses the lowest coordinate index whose coordinate satisfies the floor
/// inequality at both supplied places. Requires a point without zero
/// coordinates.
pub fn choose_coordinate(
    point: &ProjectivePoint,
    places: [Place; 2],
) -> Result<usize, RungeError> {
    if let Some(&i) = point.zero_set().first() {
        return Err(RungeError::ZeroCoordinate(i));
    }
    for i in 1..=10 {
        if satisfies_floor_exact(point, i, places[0])?
            && satisfies_floor_exact(point, i, places[1])?
        {
            return Ok(i);
        }
    }
    Err(RungeError::NoValidIndex)
}

/// Which anomalous places the bad set `S` may contain.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct BadSetProfile {
    pub contains_place_over_2: bool,
    pub contains_place_over_3: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RungeReport {
    pub contributions: Vec<(String, f64)>,
    pub height_bound: f64,
    /// Recorded stable-Faltings-height figure for the uniform bound, via the
    /// relation `h_theta = h/4`; recorded output, not derived here.
    pub faltings_bound: f64,
    pub faltings_is_recorded: bool,
}

/// Recorded Faltings ceiling attached to any height bound at most 8.6.
pub const RECORDED_FALTINGS_BOUND: f64 = 985.0;

/// Assembles the uniform height bound for `|S| <= 2`:
/// `log 27` from the archimedean places, `6 log 2` from places over 2
/// (dropping to `log 2` when such a place lies in `S`), and `log 3` when a
/// place over 3 may lie in `S`.
pub fn runge_bound(profile: BadSetProfile) -> RungeReport {
    let mut contributions = vec![("archimedean: log 27".to_string(), 27f64.ln())];
    if profile.contains_place_over_2 {
        contributions.push(("place over 2 in S: log 2".to_string(), 2f64.ln()));
    } else {
        contributions.push(("places over 2: 6 log 2".to_string(), 6.0 * 2f64.ln()));
    }
    if profile.contains_place_over_3 {
        contributions.push(("place over 3 in S: log 3".to_string(), 3f64.ln()));
    }
    let height_bound = contributions.iter().map(|(_, v)| v).sum();
    RungeReport {
        contributions,
        height_bound,
        faltings_bound: RECORDED_FALTINGS_BOUND,
        faltings_is_recorded: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Domain;
    use crate::variety::enumerate_small_points;

    fn point_q() -> ProjectivePoint {
        ProjectivePoint::from_ints(&[0, 0, 1, 1, 0, 0, -1, -1, 0, 0]).unwrap()
    }

    #[test]
    fn q_small_set_is_a_goepel_complement() {
        let mags: [f64; 10] = std::array::from_fn(|i| point_q().coords()[i].to_f64().abs());
        let rep = small_coordinate_set(&mags, Place::Archimedean).unwrap();
        assert_eq!(rep.small_indices, vec![1, 2, 5, 6, 9, 10]);
        assert!(rep.verdict);
        assert!(rep.containing_complement.is_some());
        let exact = small_coordinate_set_exact(&point_q(), Place::Archimedean).unwrap();
        assert_eq!(exact.small_indices, rep.small_indices);
        assert!(exact.verdict);
    }

    #[test]
    fn equal_magnitudes_have_empty_small_set() {
        let rep = small_coordinate_set(&[1.0; 10], Place::Archimedean).unwrap();
        assert!(rep.small_indices.is_empty());
        assert!(rep.verdict);
        assert!(small_coordinate_set(&[0.0; 10], Place::Archimedean).is_err());
    }

    #[test]
    fn goepel_floor_trivially_true_with_maximal_coordinate() {
        let mags = [1.0; 10];
        for g in crate::chars::goepel_quadruples() {
            assert!(goepel_floor_check(&mags, &g.indices(), Place::Archimedean));
            assert!(goepel_floor_check(&mags, &g.indices(), Place::Finite(5)));
        }
    }

    #[test]
    fn f2_anomaly_shows_the_factor_of_two_is_needed() {
        // magnitudes of a 2-adic lift of the anomalous point: quadruple
        // {1,2,3,4} drops by |2| while the other coordinates stay units
        let mags = [0.5, 0.5, 0.5, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let quad = [1usize, 2, 3, 4];
        // with the |2||3| floor at p=2 (c = 1/2) the check passes...
        assert!(goepel_floor_check(&mags, &quad, Place::Finite(2)));
        // ...but a unit floor (c = 1, any other prime) would reject it
        assert!(!goepel_floor_check(&mags, &quad, Place::Finite(5)));
    }

    #[test]
    fn choose_coordinate_rejects_zero_coordinates_and_ties_break_low() {
        assert!(matches!(
            choose_coordinate(&point_q(), [Place::Archimedean, Place::Finite(2)]),
            Err(RungeError::ZeroCoordinate(1))
        ));
        let ones = ProjectivePoint::from_ints(&[1; 10]).unwrap();
        assert_eq!(
            choose_coordinate(&ones, [Place::Archimedean, Place::Archimedean]).unwrap(),
            1
        );
    }

    #[test]
    fn choose_coordinate_on_scaled_witness_sums() {
        // sums w1 + 4 w2 + 16 w3 of deepest points with empty common zero
        // set have no zero coordinate; the returned index must satisfy the
        // floor inequality at both infinity and 2, checked directly
        let pts = enumerate_small_points(Domain::Rational).unwrap();
        let mut combos = 0;
        for a in 0..pts.len() {
            for b in (a + 1)..pts.len() {
                for c in (b + 1)..pts.len() {
                    let coords: Vec<i64> = (0..10)
                        .map(|k| {
                            let v = |p: &ProjectivePoint| p.to_i64_coords()[k];
                            v(&pts[a]) + 4 * v(&pts[b]) + 16 * v(&pts[c])
                        })
                        .collect();
                    if coords.contains(&0) {
                        continue;
                    }
                    let point =
                        ProjectivePoint::from_ints(&coords.try_into().unwrap()).unwrap();
                    let places = [Place::Archimedean, Place::Finite(2)];
                    let i = choose_coordinate(&point, places).unwrap();
                    for pl in places {
                        assert!(satisfies_floor_exact(&point, i, pl).unwrap());
                    }
                    combos += 1;
                }
            }
        }
        // a sum is zero-free exactly when the three Göpel quadruples cover
        // all ten indices; there are 20 such triples
        assert_eq!(combos, 20);
    }

    #[test]
    fn five_small_coordinates_push_the_choice_into_the_quadruple() {
        // a point whose archimedean small set {1,2,3,5,7} has size five and
        // sits inside the complement of the Göpel quadruple {4,6,8,9}; the
        // chosen coordinate falls in that quadruple
        let p = ProjectivePoint::from_ints(&[1, 1, 1, 400, 1, 400, 1, 400, 400, 27]).unwrap();
        let rep = small_coordinate_set_exact(&p, Place::Archimedean).unwrap();
        assert_eq!(rep.small_indices, vec![1, 2, 3, 5, 7]);
        assert!(rep.verdict, "size <= 4 branch of the verdict");
        let chosen = choose_coordinate(&p, [Place::Archimedean, Place::Archimedean]).unwrap();
        assert!([4usize, 6, 8, 9].contains(&chosen));
        assert_eq!(chosen, 4, "lowest valid index wins ties");
    }

    #[test]
    fn two_hundred_sampled_points_certify_both_thresholds() {
        use crate::chars::goepel_quadruples;
        use crate::theta::{psi_numeric, TauSampler};
        let mut sampler = TauSampler::new(0x200);
        let quads = goepel_quadruples();
        for _ in 0..200 {
            let tau = sampler.sample();
            let psi = psi_numeric(&tau, 1e-12).unwrap();
            let mags = psi.magnitudes();
            let rep = small_coordinate_set(&mags, Place::Archimedean).unwrap();
            assert!(rep.verdict, "small-set conclusion failed at a sample");
            for q in &quads {
                assert!(
                    goepel_floor_check(&mags, &q.indices(), Place::Archimedean),
                    "floor conclusion failed at a sample"
                );
            }
        }
    }

    #[test]
    fn bound_values() {
        let generic = runge_bound(BadSetProfile {
            contains_place_over_2: false,
            contains_place_over_3: true,
        });
        let expected = 27f64.ln() + 6.0 * 2f64.ln() + 3f64.ln();
        assert!((generic.height_bound - expected).abs() < 1e-12);
        assert!(generic.height_bound <= 8.6);
        assert_eq!(generic.faltings_bound, 985.0);

        let s_two = runge_bound(BadSetProfile {
            contains_place_over_2: true,
            contains_place_over_3: false,
        });
        let expected2 = 27f64.ln() + 2f64.ln();
        assert!((s_two.height_bound - expected2).abs() < 1e-12);
        assert!(s_two.height_bound <= 4.0);
        // ledger property: total equals the sum of its parts
        for rep in [&generic, &s_two] {
            let total: f64 = rep.contributions.iter().map(|(_, v)| v).sum();
            assert_eq!(total, rep.height_bound);
            assert!(rep.contributions.iter().all(|&(_, v)| v >= 0.0));
        }
    }
}
