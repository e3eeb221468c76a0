//! The explicit model of the compactified moduli threefold in P^9: the five
//! linear forms and the quartic, exact membership, small-point enumeration
//! over `Q` and `F_p`, linear vanishing closures, and the signed coordinate
//! action on points.

use crate::linalg::ExactMatrix;
use crate::scalar::{Domain, Scalar};
use crate::symplectic::{signed_map, SymplecticMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Coefficients of the five linear forms on the coordinates `x_1..x_10`
/// (binary order of the even characteristics). Each support is one of the
/// fifteen azygous quadruples.
pub const LINEAR_FORMS: [[i64; 10]; 5] = [
    [0, 0, 0, 0, 0, 0, 1, -1, -1, 1],  // x7  - x8  - x9 + x10
    [1, -1, 0, 0, 0, -1, 0, 0, -1, 0], // x1  - x2  - x6 - x9
    [0, 0, -1, 1, 0, 1, 0, 0, 0, -1],  // -x3 + x4  + x6 - x10
    [-1, 0, 0, 1, 1, 0, 0, 1, 0, 0],   // -x1 + x4  + x5 + x8
    [0, 1, -1, 0, 1, 0, -1, 0, 0, 0],  // x2  - x3  + x5 - x7
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VarietyError {
    #[error("projective point must have a nonzero coordinate")]
    AllZero,
    #[error("expected 10 coordinates, got {0}")]
    BadLength(usize),
    #[error("coordinates mix scalar domains")]
    MixedDomains,
    #[error("prime {0} is not supported; use one of 2, 3, 5, 7")]
    UnsupportedPrime(u64),
}

/// A point of P^9 with exact coordinates in a single domain, kept in
/// canonical form: over `Q` the coordinates are coprime integers whose first
/// nonzero entry is positive, over `F_p` the first nonzero entry is 1.
///
/// ```
/// use a22::variety::ProjectivePoint;
/// let q = ProjectivePoint::from_ints(&[0, 0, 1, 1, 0, 0, -1, -1, 0, 0]).unwrap();
/// assert!(q.is_on_variety());
/// assert_eq!(q.zero_set(), vec![1, 2, 5, 6, 9, 10]);
/// ```
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self, VarietyError> {
        if coords.len() != 10 {
            return Err(VarietyError::BadLength(coords.len()));
        }
        let domain = coords[0].domain();
        if coords.iter().any(|c| c.domain() != domain) {
            return Err(VarietyError::MixedDomains);
        }
        if coords.iter().all(Scalar::is_zero) {
            return Err(VarietyError::AllZero);
        }
        let mut p = Self { coords };
        p.canonicalize();
        Ok(p)
    }

    pub fn from_ints(coords: &[i64; 10]) -> Result<Self, VarietyError> {
        Self::new(
            coords
                .iter()
                .map(|&v| Scalar::from_i64(v, Domain::Rational))
                .collect(),
        )
    }

    pub fn from_fp(coords: &[u64; 10], p: u64) -> Result<Self, VarietyError> {
        Self::new(
            coords
                .iter()
                .map(|&v| Scalar::Fp { p, value: v % p })
                .collect(),
        )
    }

    fn canonicalize(&mut self) {
        match self.coords[0].domain() {
            Domain::Rational => {
                let mut lcm = BigInt::from(1);
                for c in &self.coords {
                    let r = c.as_rational().expect("rational domain");
                    lcm = lcm.lcm(r.denom());
                }
                let mut ints: Vec<BigInt> = self
                    .coords
                    .iter()
                    .map(|c| {
                        let r = c.as_rational().expect("rational domain");
                        (r * num_rational::BigRational::from_integer(lcm.clone()))
                            .to_integer()
                    })
                    .collect();
                let mut gcd = BigInt::zero();
                for v in &ints {
                    gcd = gcd.gcd(v);
                }
                if !gcd.is_zero() {
                    for v in &mut ints {
                        *v = &*v / &gcd;
                    }
                }
                if ints
                    .iter()
                    .find(|v| !v.is_zero())
                    .is_some_and(Signed::is_negative)
                {
                    for v in &mut ints {
                        *v = -v.clone();
                    }
                }
                self.coords = ints
                    .into_iter()
                    .map(|v| Scalar::from_rational(num_rational::BigRational::from_integer(v)))
                    .collect();
            }
            Domain::Prime(_) => {
                let lead = self
                    .coords
                    .iter()
                    .find(|c| !c.is_zero())
                    .expect("not all zero")
                    .clone();
                let inv = lead.inverse().expect("nonzero leading coordinate");
                for c in &mut self.coords {
                    *c = c.mul(&inv);
                }
            }
        }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// The coordinate at one-based index `i`.
    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i - 1]
    }

    pub fn domain(&self) -> Domain {
        self.coords[0].domain()
    }

    /// Sorted one-based indices of vanishing coordinates.
    pub fn zero_set(&self) -> Vec<usize> {
        (1..=10).filter(|&i| self.coord(i).is_zero()).collect()
    }

    /// Values of the five linear forms followed by the quartic.
    pub fn residuals(&self) -> [Scalar; 6] {
        let domain = self.domain();
        let mut out: Vec<Scalar> = LINEAR_FORMS
            .iter()
            .map(|form| {
                let mut acc = Scalar::zero(domain);
                for (c, x) in form.iter().zip(&self.coords) {
                    match c {
                        1 => acc = acc.add(x),
                        -1 => acc = acc.sub(x),
                        _ => {}
                    }
                }
                acc
            })
            .collect();
        let mut s2 = Scalar::zero(domain);
        let mut s4 = Scalar::zero(domain);
        for x in &self.coords {
            let x2 = x.mul(x);
            s4 = s4.add(&x2.mul(&x2));
            s2 = s2.add(&x2);
        }
        let four = Scalar::from_i64(4, domain);
        out.push(s2.mul(&s2).sub(&four.mul(&s4)));
        out.try_into().expect("six residuals")
    }

    pub fn is_on_variety(&self) -> bool {
        self.residuals().iter().all(Scalar::is_zero)
    }

    /// The image under the signed coordinate action of a group element,
    /// renormalised to canonical form. Membership in the model is preserved.
    pub fn apply_signed_map(&self, mat: &SymplecticMatrix) -> ProjectivePoint {
        let map = signed_map(mat);
        let coords: Vec<Scalar> = (0..10)
            .map(|i| {
                let src = self.coords[map.perm[i]].clone();
                if map.signs[i] == 1 {
                    src
                } else {
                    src.neg()
                }
            })
            .collect();
        ProjectivePoint::new(coords).expect("signed permutation keeps a nonzero coordinate")
    }

    /// Integer coordinate vector for reporting; exact over `Q` in canonical
    /// form and the lift `[0, p)` over `F_p`.
    pub fn to_i64_coords(&self) -> [i64; 10] {
        let mut out = [0i64; 10];
        for (o, c) in out.iter_mut().zip(&self.coords) {
            *o = match c {
                Scalar::Rational(r) => {
                    use num_traits::ToPrimitive;
                    r.to_integer().to_i64().expect("canonical small point")
                }
                Scalar::Fp { value, .. } => *value as i64,
            };
        }
        out
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Serialisable record for the point-list wire format.
#[derive(Serialize)]
pub struct PointRecord {
    pub coords: [i64; 10],
    pub zero_set: Vec<usize>,
}

impl From<&ProjectivePoint> for PointRecord {
    fn from(p: &ProjectivePoint) -> Self {
        PointRecord {
            coords: p.to_i64_coords(),
            zero_set: p.zero_set(),
        }
    }
}

/// All points of the model with coordinates in `{-1, 0, 1}` over `Q`, or all
/// `F_p` points for `p` in `{2, 3, 5, 7}`, canonically normalised and sorted.
pub fn enumerate_small_points(domain: Domain) -> Result<Vec<ProjectivePoint>, VarietyError> {
    match domain {
        Domain::Rational => Ok(enumerate_rational_sign_points()),
        Domain::Prime(p) => {
            if ![2, 3, 5, 7].contains(&p) {
                return Err(VarietyError::UnsupportedPrime(p));
            }
            Ok(enumerate_fp_points(p))
        }
    }
}

fn lin_ok_i64(x: &[i64; 10]) -> bool {
    LINEAR_FORMS.iter().all(|form| {
        form.iter().zip(x).map(|(c, v)| c * v).sum::<i64>() == 0
    })
}

fn quartic_i64(x: &[i64; 10]) -> i64 {
    let s2: i64 = x.iter().map(|v| v * v).sum();
    let s4: i64 = x.iter().map(|v| v.pow(4)).sum();
    s2 * s2 - 4 * s4
}

fn enumerate_rational_sign_points() -> Vec<ProjectivePoint> {
    let mut out = Vec::new();
    let mut digits = [0u8; 10]; // 0 -> 0, 1 -> 1, 2 -> -1
    loop {
        let x: [i64; 10] = digits.map(|d| [0i64, 1, -1][d as usize]);
        // canonical representatives only: first nonzero entry equal to 1
        let lead = x.iter().find(|&&v| v != 0);
        if lead == Some(&1) && lin_ok_i64(&x) && quartic_i64(&x) == 0 {
            out.push(ProjectivePoint::from_ints(&x).expect("nonzero small point"));
        }
        // odometer over base-3 digits
        let mut pos = 9;
        loop {
            digits[pos] += 1;
            if digits[pos] < 3 {
                break;
            }
            digits[pos] = 0;
            if pos == 0 {
                out.sort_by_key(ProjectivePoint::to_i64_coords);
                return out;
            }
            pos -= 1;
        }
    }
}

/// Depth-first scan of the affine representatives with first nonzero
/// coordinate 1. Each linear form is checked as soon as its support is
/// complete (positions 7, 8, 9, 10), which prunes the bulk of the tree well
/// before the leaves; the quartic is checked last.
fn enumerate_fp_points(p: u64) -> Vec<ProjectivePoint> {
    // forms rechecked at the position where their support completes
    const CHECK_AT: [&[usize]; 10] = [
        &[],
        &[],
        &[],
        &[],
        &[],
        &[],
        &[4], // after x7: x2 - x3 + x5 - x7
        &[3], // after x8: -x1 + x4 + x5 + x8
        &[1], // after x9: x1 - x2 - x6 - x9
        &[0, 2],
    ];
    let coeffs: [[u64; 10]; 5] = LINEAR_FORMS.map(|form| form.map(|c| c.rem_euclid(p as i64) as u64));
    let mut out = Vec::new();
    let mut x = [0u64; 10];

    fn descend(
        p: u64,
        coeffs: &[[u64; 10]; 5],
        x: &mut [u64; 10],
        pos: usize,
        lin: [u64; 5],
        s2: u64,
        s4: u64,
        first_nonzero_placed: bool,
        out: &mut Vec<ProjectivePoint>,
    ) {
        if pos == 10 {
            if first_nonzero_placed && (s2 * s2) % p == (4 * s4) % p {
                out.push(ProjectivePoint::from_fp(x, p).expect("nonzero point"));
            }
            return;
        }
        // canonical representative: coordinates before the leading 1 are 0
        let choices: &[u64] = if first_nonzero_placed {
            &[0, 1, 2, 3, 4, 5, 6][..p as usize]
        } else {
            &[0, 1]
        };
        'next: for &v in choices {
            x[pos] = v;
            let mut lin2 = lin;
            if v != 0 {
                for (l, row) in lin2.iter_mut().zip(coeffs) {
                    *l = (*l + row[pos] * v) % p;
                }
            }
            for &f in CHECK_AT[pos] {
                if lin2[f] != 0 {
                    continue 'next;
                }
            }
            let v2 = v * v % p;
            descend(
                p,
                coeffs,
                x,
                pos + 1,
                lin2,
                (s2 + v2) % p,
                (s4 + v2 * v2) % p,
                first_nonzero_placed || v != 0,
                out,
            );
        }
        x[pos] = 0;
    }

    descend(p, &coeffs, &mut x, 0, [0; 5], 0, 0, false, &mut out);
    out.sort_by_key(ProjectivePoint::to_i64_coords);
    out
}

/// A relation `x_left = sign * x_right` forced on the solution space of the
/// five linear forms restricted to a vanishing set.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ForcedRelation {
    pub left: usize,
    pub right: usize,
    pub sign: i8,
}

/// Consequences of the five linear forms alone under `x_i = 0` for `i` in
/// the input set: every further coordinate forced to vanish, every two-term
/// relation of equal magnitude, and the remaining reduced rows verbatim.
#[derive(Clone, Debug)]
pub struct VanishingClosure {
    pub input: BTreeSet<usize>,
    pub forced: BTreeSet<usize>,
    pub relations: Vec<ForcedRelation>,
    pub raw_rows: Vec<Vec<(usize, Scalar)>>,
}

/// Substitutes `x_i = 0` for `i` in `input` into the five linear forms,
/// row-reduces over `Q`, and reads off forced vanishings (singleton rows)
/// and two-term `x_k = ±x_l` relations. Rows with three or more surviving
/// terms are reported raw.
pub fn linear_closure(input: &BTreeSet<usize>) -> VanishingClosure {
    let mut rows: Vec<Vec<i64>> = LINEAR_FORMS.iter().map(|r| r.to_vec()).collect();
    for &i in input {
        assert!((1..=10).contains(&i), "coordinate index {i} out of range");
        let mut unit = vec![0i64; 10];
        unit[i - 1] = 1;
        rows.push(unit);
    }
    let m = ExactMatrix::from_i64_rows(&rows, Domain::Rational);
    let red = m.rref();
    let mut forced = BTreeSet::new();
    let mut relations = Vec::new();
    let mut raw_rows = Vec::new();
    for r in 0..red.rank {
        let nonzero: Vec<(usize, Scalar)> = (0..10)
            .filter(|&c| !red.reduced.entry(r, c).is_zero())
            .map(|c| (c + 1, red.reduced.entry(r, c).clone()))
            .collect();
        match nonzero.as_slice() {
            [(col, _)] => {
                forced.insert(*col);
            }
            [(p_col, _), (o_col, c)] => {
                // pivot coefficient is 1; x_p = -c x_o is binary when |c| = 1
                let cr = c.as_rational().expect("closure runs over Q");
                if cr.abs() == num_rational::BigRational::from_integer(BigInt::from(1)) {
                    let sign = if cr.is_negative() { 1 } else { -1 };
                    relations.push(ForcedRelation {
                        left: *p_col,
                        right: *o_col,
                        sign,
                    });
                } else {
                    raw_rows.push(nonzero);
                }
            }
            _ => raw_rows.push(nonzero),
        }
    }
    VanishingClosure {
        input: input.clone(),
        forced,
        relations,
        raw_rows,
    }
}
