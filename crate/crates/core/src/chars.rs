//! Even theta characteristics and their finite geometry.
//!
//! A theta characteristic is a vector `m = (m', m'')` in `F_2^4` with
//! `m', m''` in `F_2^2`; it is *even* when the quadratic form
//! `q2(m) = m' . m''` vanishes. There are ten even characteristics and they
//! index the coordinates of the ambient P^9 throughout this crate, in
//! increasing binary order:
//!
//! ```text
//!  1:(0000) 2:(0001) 3:(0010) 4:(0011) 5:(0100)
//!  6:(0110) 7:(1000) 8:(1001) 9:(1100) 10:(1111)
//! ```
//!
//! Triples of distinct even characteristics split into 60 *syzygous* ones
//! (`x+y+z` again even) and 60 *azygous* ones; quadruples whose sub-triples
//! are all syzygous are the 15 *Göpel quadruples*, and those with all
//! sub-triples azygous are the 15 *azygous quadruples*.

use serde::Serialize;
use std::fmt;

/// A length-4 bit vector `(m1, m2, m3, m4)` packed into the low nibble,
/// most significant bit first, so the packed value equals the binary
/// reading of the displayed 4-tuple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ThetaCharacteristic(u8);

/// The ten even characteristics in binary order (packed values).
const EVEN_VALUES: [u8; 10] = [0b0000, 0b0001, 0b0010, 0b0011, 0b0100, 0b0110, 0b1000, 0b1001, 0b1100, 0b1111];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharError {
    #[error("characteristic {0} is odd")]
    OddCharacteristic(ThetaCharacteristic),
    #[error("characteristics must be pairwise distinct")]
    NotDistinct,
    #[error("coordinate index {0} out of range 1..=10")]
    BadIndex(usize),
    #[error("triple {0:?} is {1:?}, not {2:?}")]
    WrongTag([usize; 3], TripleTag, TripleTag),
}

impl ThetaCharacteristic {
    pub fn from_value(v: u8) -> Self {
        assert!(v < 16, "characteristic value must be a 4-bit pattern");
        Self(v)
    }

    pub fn from_bits(bits: [u8; 4]) -> Self {
        Self(bits[0] << 3 | bits[1] << 2 | bits[2] << 1 | bits[3])
    }

    /// One-based position within the even list; panics if out of range.
    pub fn from_index(index: usize) -> Self {
        assert!((1..=10).contains(&index), "index {index} out of 1..=10");
        Self(EVEN_VALUES[index - 1])
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Components `(m1, m2, m3, m4)`, most significant first.
    pub fn bits(self) -> [u8; 4] {
        [self.0 >> 3 & 1, self.0 >> 2 & 1, self.0 >> 1 & 1, self.0 & 1]
    }

    /// The quadratic form `q2(m) = m1 m3 + m2 m4` over `F_2`.
    pub fn q2(self) -> u8 {
        (self.0 >> 3 & self.0 >> 1 & 1) ^ (self.0 >> 2 & self.0 & 1)
    }

    pub fn is_even(self) -> bool {
        self.q2() == 0
    }

    /// Vector addition in `F_2^4`.
    pub fn add(self, other: Self) -> Self {
        Self(self.0 ^ other.0)
    }

    /// One-based index in the even list, or `None` for odd characteristics.
    pub fn index(self) -> Option<usize> {
        EVEN_VALUES.iter().position(|&v| v == self.0).map(|i| i + 1)
    }
}

impl fmt::Debug for ThetaCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{}{}{})", self.0 >> 3 & 1, self.0 >> 2 & 1, self.0 >> 1 & 1, self.0 & 1)
    }
}

impl fmt::Display for ThetaCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All sixteen elements of `F_2^4`.
pub fn all_characteristics() -> impl Iterator<Item = ThetaCharacteristic> {
    (0u8..16).map(ThetaCharacteristic)
}

/// The ten even characteristics in binary order.
///
/// ```
/// let e = a22::chars::even_characteristics();
/// assert_eq!(e.len(), 10);
/// assert_eq!(e[5].to_string(), "(0110)");
/// assert_eq!(e[5].index(), Some(6));
/// ```
pub fn even_characteristics() -> [ThetaCharacteristic; 10] {
    EVEN_VALUES.map(ThetaCharacteristic)
}

/// `e(x, y, z) = q2(x) + q2(y) + q2(z) + q2(x+y+z)` for distinct even inputs.
///
/// The value is 0 exactly when `x + y + z` is again even (syzygous triple).
pub fn e_triple(
    x: ThetaCharacteristic,
    y: ThetaCharacteristic,
    z: ThetaCharacteristic,
) -> Result<u8, CharError> {
    for m in [x, y, z] {
        if !m.is_even() {
            return Err(CharError::OddCharacteristic(m));
        }
    }
    if x == y || y == z || x == z {
        return Err(CharError::NotDistinct);
    }
    Ok((x.q2() + y.q2() + z.q2() + x.add(y).add(z).q2()) % 2)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum TripleTag {
    Syzygous,
    Azygous,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum QuadrupleTag {
    Goepel,
    Azygous,
}

/// An unordered triple of distinct even characteristics, stored sorted.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Triple {
    chars: [ThetaCharacteristic; 3],
    tag: TripleTag,
}

/// An unordered quadruple of distinct even characteristics, stored sorted.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Quadruple {
    chars: [ThetaCharacteristic; 4],
    tag: QuadrupleTag,
}

impl Triple {
    pub fn classify(mut chars: [ThetaCharacteristic; 3]) -> Result<Self, CharError> {
        let e = e_triple(chars[0], chars[1], chars[2])?;
        chars.sort();
        let tag = if e == 0 { TripleTag::Syzygous } else { TripleTag::Azygous };
        Ok(Self { chars, tag })
    }

    pub fn chars(&self) -> [ThetaCharacteristic; 3] {
        self.chars
    }

    pub fn tag(&self) -> TripleTag {
        self.tag
    }

    /// Sorted one-based coordinate indices.
    pub fn indices(&self) -> [usize; 3] {
        self.chars.map(|c| c.index().expect("members are even"))
    }
}

impl Quadruple {
    /// Classifies a quadruple; `None` when the sub-triples are mixed.
    pub fn classify(mut chars: [ThetaCharacteristic; 4]) -> Result<Option<Self>, CharError> {
        let mut es = Vec::with_capacity(4);
        for skip in 0..4 {
            let t: Vec<_> = (0..4).filter(|&i| i != skip).map(|i| chars[i]).collect();
            es.push(e_triple(t[0], t[1], t[2])?);
        }
        chars.sort();
        let tag = if es.iter().all(|&e| e == 0) {
            QuadrupleTag::Goepel
        } else if es.iter().all(|&e| e == 1) {
            QuadrupleTag::Azygous
        } else {
            return Ok(None);
        };
        Ok(Some(Self { chars, tag }))
    }

    pub fn chars(&self) -> [ThetaCharacteristic; 4] {
        self.chars
    }

    pub fn tag(&self) -> QuadrupleTag {
        self.tag
    }

    pub fn indices(&self) -> [usize; 4] {
        self.chars.map(|c| c.index().expect("members are even"))
    }

    /// Sorted one-based indices of the six complementary coordinates.
    pub fn complement_indices(&self) -> [usize; 6] {
        let inside = self.indices();
        let mut out = [0usize; 6];
        let mut k = 0;
        for i in 1..=10 {
            if !inside.contains(&i) {
                out[k] = i;
                k += 1;
            }
        }
        out
    }
}

/// Enumeration targets exposed by the census interface.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EnumerationKind {
    EvenChars,
    SyzygousTriples,
    AzygousTriples,
    GoepelQuads,
    AzygousQuads,
}

fn triples_with_tag(tag: TripleTag) -> Vec<Triple> {
    let e = even_characteristics();
    let mut out = Vec::new();
    for i in 0..10 {
        for j in i + 1..10 {
            for k in j + 1..10 {
                let t = Triple::classify([e[i], e[j], e[k]]).expect("distinct even");
                if t.tag == tag {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out
}

/// The 60 syzygous triples in canonical (sorted member) order.
pub fn syzygous_triples() -> Vec<Triple> {
    triples_with_tag(TripleTag::Syzygous)
}

/// The 60 azygous triples in canonical order.
pub fn azygous_triples() -> Vec<Triple> {
    triples_with_tag(TripleTag::Azygous)
}

fn quadruples_with_tag(tag: QuadrupleTag) -> Vec<Quadruple> {
    let e = even_characteristics();
    let mut out = Vec::new();
    for i in 0..10 {
        for j in i + 1..10 {
            for k in j + 1..10 {
                for l in k + 1..10 {
                    if let Some(q) =
                        Quadruple::classify([e[i], e[j], e[k], e[l]]).expect("distinct even")
                    {
                        if q.tag == tag {
                            out.push(q);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The 15 Göpel quadruples in canonical order.
pub fn goepel_quadruples() -> Vec<Quadruple> {
    quadruples_with_tag(QuadrupleTag::Goepel)
}

/// The 15 azygous quadruples in canonical order.
pub fn azygous_quadruples() -> Vec<Quadruple> {
    quadruples_with_tag(QuadrupleTag::Azygous)
}

/// Completions of a pair of distinct even characteristics: the four elements
/// extending it to a syzygous triple and the four extending it to an azygous
/// triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCompletions {
    pub syzygous: Vec<ThetaCharacteristic>,
    pub azygous: Vec<ThetaCharacteristic>,
}

pub fn pair_completions(
    x: ThetaCharacteristic,
    y: ThetaCharacteristic,
) -> Result<PairCompletions, CharError> {
    if !x.is_even() {
        return Err(CharError::OddCharacteristic(x));
    }
    if !y.is_even() {
        return Err(CharError::OddCharacteristic(y));
    }
    if x == y {
        return Err(CharError::NotDistinct);
    }
    let mut syzygous = Vec::new();
    let mut azygous = Vec::new();
    for z in even_characteristics() {
        if z == x || z == y {
            continue;
        }
        match e_triple(x, y, z)? {
            0 => syzygous.push(z),
            _ => azygous.push(z),
        }
    }
    syzygous.sort();
    azygous.sort();
    Ok(PairCompletions { syzygous, azygous })
}

/// The unique quadruple completing a classified triple: a syzygous triple
/// extends to its Göpel quadruple, an azygous triple to its azygous
/// quadruple.
pub fn triple_completion(t: &Triple) -> Quadruple {
    let [x, y, z] = t.chars;
    let mut found = None;
    for w in even_characteristics() {
        if w == x || w == y || w == z {
            continue;
        }
        if let Some(q) = Quadruple::classify([x, y, z, w]).expect("distinct even") {
            let matches = matches!(
                (t.tag, q.tag),
                (TripleTag::Syzygous, QuadrupleTag::Goepel)
                    | (TripleTag::Azygous, QuadrupleTag::Azygous)
            );
            if matches {
                assert!(found.is_none(), "completion must be unique");
                found = Some(q);
            }
        }
    }
    found.expect("every classified triple completes")
}

/// Number of Göpel quadruples disjoint from the given coordinate index set.
pub fn disjoint_goepel_count(indices: &[usize]) -> Result<usize, CharError> {
    for &i in indices {
        if !(1..=10).contains(&i) {
            return Err(CharError::BadIndex(i));
        }
    }
    Ok(goepel_quadruples()
        .iter()
        .filter(|q| q.indices().iter().all(|i| !indices.contains(i)))
        .count())
}
