//! `Sp4(F2)` as an explicit group of 4x4 bit matrices, the twisted "dot"
//! action on theta characteristics, the induced signed permutations of the
//! ten coordinates, the pair sign `epsilon(i, j)` and transporter search.
//!
//! Conventions: characteristics are row vectors and matrices act on the
//! right, `m -> m * M`. For `M` in block form `(A B; C D)` the dot action is
//!
//! ```text
//! m (.) M  =  m * M  -  ((tC A)_0, (tD B)_0)
//! ```
//!
//! with `X_0` the diagonal of a 2x2 matrix read as a row vector. This is a
//! right action (`(m (.) M) (.) N = m (.) (M N)`) and it preserves `q2`, so
//! it permutes the ten even characteristics. On coordinates it induces
//!
//! ```text
//! (M . x)_m  =  phi(m, M) * x_{m (.) M},    phi(m, M) = (-1)^{m . ((B tA)_0, (C tD)_0)}
//! ```
//!
//! The sign vectors compose only up to one global factor in `{+1, -1}` (the
//! fourth power of the theta multiplier system); the permutation parts
//! compose exactly.

use crate::chars::{even_characteristics, CharError, ThetaCharacteristic};
use std::fmt;
use std::sync::LazyLock;

/// A 4x4 matrix over `F_2` preserving the standard symplectic form.
/// Row `i` is packed into the low nibble of `rows[i]`, column 0 in bit 3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticMatrix {
    rows: [u8; 4],
}

/// Gram matrix of the symplectic pairing in row convention: bit rows of `J`.
const J_ROWS: [u8; 4] = [0b0010, 0b0001, 0b1000, 0b0100];

impl SymplecticMatrix {
    /// Builds a matrix from 0/1 entries and checks it preserves the form.
    pub fn new(entries: [[u8; 4]; 4]) -> Option<Self> {
        let mut rows = [0u8; 4];
        for (i, row) in entries.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                rows[i] |= (e & 1) << (3 - j);
            }
        }
        let m = Self { rows };
        m.is_symplectic().then_some(m)
    }

    pub fn identity() -> Self {
        Self {
            rows: [0b1000, 0b0100, 0b0010, 0b0001],
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.rows[i] >> (3 - j) & 1
    }

    /// `m * M` for a packed row vector `m`.
    fn row_mul(&self, m: u8) -> u8 {
        let mut out = 0u8;
        for (i, &row) in self.rows.iter().enumerate() {
            if m >> (3 - i) & 1 == 1 {
                out ^= row;
            }
        }
        out
    }

    /// Standard matrix product; `(self * other)` acts as `self` then `other`
    /// on row vectors.
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            rows: self.rows.map(|r| other.row_mul(r)),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut rows = [0u8; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..4 {
                *row |= self.entry(j, i) << (3 - j);
            }
        }
        Self { rows }
    }

    /// `tM J M == J` over `F_2`.
    pub fn is_symplectic(&self) -> bool {
        let j = Self { rows: J_ROWS };
        self.transpose().mul(&j).mul(self) == j
    }

    /// Inverse by Gauss-Jordan elimination on bit rows.
    pub fn inverse(&self) -> Self {
        // augment each 4-bit row with the identity in the low nibble
        let mut aug: [u8; 4] = [0; 4];
        for i in 0..4 {
            aug[i] = self.rows[i] << 4 | 1 << (3 - i);
        }
        for col in 0..4 {
            let bit = 1u8 << (7 - col);
            let pivot = (col..4).find(|&r| aug[r] & bit != 0).expect("invertible");
            aug.swap(col, pivot);
            for r in 0..4 {
                if r != col && aug[r] & bit != 0 {
                    aug[r] ^= aug[col];
                }
            }
        }
        Self {
            rows: [aug[0] & 0xf, aug[1] & 0xf, aug[2] & 0xf, aug[3] & 0xf],
        }
    }

    fn block(&self, row_off: usize, col_off: usize) -> [[u8; 2]; 2] {
        [
            [self.entry(row_off, col_off), self.entry(row_off, col_off + 1)],
            [
                self.entry(row_off + 1, col_off),
                self.entry(row_off + 1, col_off + 1),
            ],
        ]
    }

    /// 2x2 blocks `(A, B, C, D)`.
    pub fn blocks(&self) -> ([[u8; 2]; 2], [[u8; 2]; 2], [[u8; 2]; 2], [[u8; 2]; 2]) {
        (
            self.block(0, 0),
            self.block(0, 2),
            self.block(2, 0),
            self.block(2, 2),
        )
    }

    /// The affine part of the dot action, `((tC A)_0, (tD B)_0)`, packed.
    fn dot_offset(&self) -> u8 {
        let (a, b, c, d) = self.blocks();
        let tca = |k: usize| (c[0][k] & a[0][k]) ^ (c[1][k] & a[1][k]);
        let tdb = |k: usize| (d[0][k] & b[0][k]) ^ (d[1][k] & b[1][k]);
        tca(0) << 3 | tca(1) << 2 | tdb(0) << 1 | tdb(1)
    }

    /// The sign vector `((B tA)_0, (C tD)_0)` of the coordinate action, packed.
    fn sign_pattern(&self) -> u8 {
        let (a, b, c, d) = self.blocks();
        let bta = |k: usize| (b[k][0] & a[k][0]) ^ (b[k][1] & a[k][1]);
        let ctd = |k: usize| (c[k][0] & d[k][0]) ^ (c[k][1] & d[k][1]);
        bta(0) << 3 | bta(1) << 2 | ctd(0) << 1 | ctd(1)
    }
}

impl fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:04b}; {:04b}; {:04b}; {:04b}]",
            self.rows[0], self.rows[1], self.rows[2], self.rows[3]
        )
    }
}

/// Membership test for arbitrary 0/1 entry grids.
pub fn is_symplectic(entries: [[u8; 4]; 4]) -> bool {
    SymplecticMatrix::new(entries).is_some()
}

/// The dot action `m (.) M` on all of `F_2^4`.
pub fn dot(m: ThetaCharacteristic, mat: &SymplecticMatrix) -> ThetaCharacteristic {
    ThetaCharacteristic::from_value(mat.row_mul(m.value()) ^ mat.dot_offset())
}

/// `phi(m, M)` in `{+1, -1}`: the sign the coordinate indexed by `m` picks up.
pub fn phi(m: ThetaCharacteristic, mat: &SymplecticMatrix) -> i8 {
    if (m.value() & mat.sign_pattern()).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A signed permutation of the ten coordinates: the image point satisfies
/// `y[i] = signs[i] * x[perm[i]]` with zero-based positions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SignedCoordinateMap {
    pub perm: [usize; 10],
    pub signs: [i8; 10],
}

impl SignedCoordinateMap {
    pub fn identity() -> Self {
        Self {
            perm: std::array::from_fn(|i| i),
            signs: [1; 10],
        }
    }

    /// Composite map equal to applying `self` first and `then` second.
    pub fn then(&self, then: &SignedCoordinateMap) -> SignedCoordinateMap {
        let mut out = SignedCoordinateMap::identity();
        for i in 0..10 {
            out.perm[i] = self.perm[then.perm[i]];
            out.signs[i] = then.signs[i] * self.signs[then.perm[i]];
        }
        out
    }

    /// Whether two maps have equal permutations and signs differing by at
    /// most one global factor; returns that factor if so.
    pub fn projectively_equal(&self, other: &SignedCoordinateMap) -> Option<i8> {
        if self.perm != other.perm {
            return None;
        }
        let g = self.signs[0] * other.signs[0];
        (0..10)
            .all(|i| self.signs[i] * other.signs[i] == g)
            .then_some(g)
    }
}

/// The signed coordinate map induced by a group element.
pub fn signed_map(mat: &SymplecticMatrix) -> SignedCoordinateMap {
    let evens = even_characteristics();
    let mut perm = [0usize; 10];
    let mut signs = [0i8; 10];
    for (i, &m) in evens.iter().enumerate() {
        let image = dot(m, mat);
        perm[i] = image.index().expect("dot action stabilises the even set") - 1;
        signs[i] = phi(m, mat);
    }
    SignedCoordinateMap { perm, signs }
}

/// The sign `epsilon(i, j) = (-1)^{q2(m_i + m_j)}` relating the coordinate
/// ratio `x_i / x_j` to `x_1 / x_2` under any group element transporting the
/// ordered pair `(m_1, m_2)` to `(m_i, m_j)`.
///
/// Composition over a triple of indices obeys
/// `epsilon(i,j) epsilon(j,k) = epsilon(i,k) * (-1)^{e(m_i, m_j, m_k)}`,
/// so it is multiplicative exactly over syzygous triples.
pub fn epsilon(i: usize, j: usize) -> Result<i8, CharError> {
    if !(1..=10).contains(&i) {
        return Err(CharError::BadIndex(i));
    }
    if !(1..=10).contains(&j) {
        return Err(CharError::BadIndex(j));
    }
    if i == j {
        return Err(CharError::NotDistinct);
    }
    let mi = ThetaCharacteristic::from_index(i);
    let mj = ThetaCharacteristic::from_index(j);
    Ok(if mi.add(mj).q2() == 0 { 1 } else { -1 })
}

/// The full group, generated once from the fifteen symplectic transvections
/// `m -> m + <m, v> v` and closed under multiplication.
pub struct Sp4 {
    elements: Vec<SymplecticMatrix>,
}

static GROUP: LazyLock<Sp4> = LazyLock::new(Sp4::build);

impl Sp4 {
    fn build() -> Self {
        let gens: Vec<SymplecticMatrix> = (1u8..16).map(transvection).collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier = vec![SymplecticMatrix::identity()];
        seen.insert(SymplecticMatrix::identity());
        while let Some(m) = frontier.pop() {
            for g in &gens {
                let next = m.mul(g);
                if seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
        let elements: Vec<_> = seen.into_iter().collect();
        debug_assert!(elements.iter().all(SymplecticMatrix::is_symplectic));
        Sp4 { elements }
    }

    pub fn get() -> &'static Sp4 {
        &GROUP
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// All elements in a fixed canonical order.
    pub fn elements(&self) -> &[SymplecticMatrix] {
        &self.elements
    }

    pub fn contains(&self, m: &SymplecticMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    /// Some element carrying `src` to `dst` elementwise, or `None`.
    pub fn find_transporter(
        &self,
        src: &[ThetaCharacteristic],
        dst: &[ThetaCharacteristic],
    ) -> Option<&SymplecticMatrix> {
        assert_eq!(src.len(), dst.len(), "tuples must have equal length");
        assert!(src.len() <= 4, "transporter search supports tuples up to 4");
        self.elements
            .iter()
            .find(|m| src.iter().zip(dst).all(|(&s, &d)| dot(s, m) == d))
    }

    /// The full orbit of a subset of coordinate indices (one-based) under
    /// the permutation part of the action, sorted canonically.
    pub fn orbit(&self, seed: &[usize]) -> Vec<Vec<usize>> {
        let mut out = std::collections::BTreeSet::new();
        for m in &self.elements {
            let mut image: Vec<usize> = seed
                .iter()
                .map(|&i| {
                    dot(ThetaCharacteristic::from_index(i), m)
                        .index()
                        .expect("even stays even")
                })
                .collect();
            image.sort_unstable();
            out.insert(image);
        }
        out.into_iter().collect()
    }
}

/// The transvection along `v`: `m -> m + <m, v> v` with the symplectic
/// pairing `<x, y> = x1 y3 + x2 y4 + x3 y1 + x4 y2`.
fn transvection(v: u8) -> SymplecticMatrix {
    let jv = (v & 0b0011) << 2 | (v & 0b1100) >> 2;
    let mut rows = [0u8; 4];
    for (i, row) in rows.iter_mut().enumerate() {
        *row = 1 << (3 - i);
        if jv >> (3 - i) & 1 == 1 {
            *row ^= v;
        }
    }
    let m = SymplecticMatrix { rows };
    debug_assert!(m.is_symplectic());
    m
}

/// The involution exchanging the coordinate pairs `(1,2)`, `(6,9)`, `(5,10)`
/// and fixing `3, 4, 7, 8`; it generates the exclusion loci of the
/// logarithmic-forms argument via conjugation.
pub fn exclusion_involution() -> SymplecticMatrix {
    SymplecticMatrix::new([
        [1, 0, 0, 1],
        [1, 1, 1, 0],
        [0, 0, 1, 1],
        [0, 0, 0, 1],
    ])
    .expect("the exchange involution is symplectic")
}
