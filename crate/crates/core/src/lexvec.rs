//! Vectors of `Z^n` under the right-lexicographic order.
//!
//! The last coordinate is the most significant one, so `Z^(n-1)` (vectors
//! whose top coordinate vanishes) is a convex subgroup.  Heights are 1-based:
//! the height of a nonzero vector is the index of its rightmost nonzero
//! coordinate.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexVecError {
    #[error("RankMismatch: rank {left} vs rank {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("HalfError: {0} has an odd coordinate")]
    HalfError(LexVec),
}

/// Element of `Z^n`. Arithmetic is checked and panics on `i64` overflow.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LexVec {
    coords: SmallVec<[i64; 4]>,
}

impl LexVec {
    pub fn zero(n: usize) -> Self {
        LexVec { coords: SmallVec::from_elem(0, n) }
    }

    /// Unit vector with a one at the given (1-based) height.
    pub fn unit(n: usize, height: usize) -> Self {
        assert!(height >= 1 && height <= n, "height {height} out of range for rank {n}");
        let mut v = Self::zero(n);
        v.coords[height - 1] = 1;
        v
    }

    /// Vector with `value` at `height` and zeros elsewhere.
    pub fn scaled_unit(n: usize, height: usize, value: i64) -> Self {
        let mut v = Self::unit(n, height);
        v.coords[height - 1] = value;
        v
    }

    pub fn from_coords(coords: &[i64]) -> Self {
        LexVec { coords: SmallVec::from_slice(coords) }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Coordinate at a 1-based index.
    pub fn get(&self, index: usize) -> i64 {
        self.coords[index - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        self.cmp_same(&Self::zero(self.rank())) == Ordering::Greater
    }

    pub fn height(&self) -> usize {
        self.coords.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1)
    }

    /// Coordinate at the height of the vector; 0 for the zero vector.
    pub fn top_component(&self) -> i64 {
        match self.height() {
            0 => 0,
            h => self.coords[h - 1],
        }
    }

    fn check_rank(&self, other: &LexVec) -> Result<(), LexVecError> {
        if self.rank() == other.rank() {
            Ok(())
        } else {
            Err(LexVecError::RankMismatch { left: self.rank(), right: other.rank() })
        }
    }

    pub fn compare(&self, other: &LexVec) -> Result<Ordering, LexVecError> {
        self.check_rank(other)?;
        Ok(self.cmp_same(other))
    }

    fn cmp_same(&self, other: &LexVec) -> Ordering {
        for (a, b) in self.coords.iter().zip(other.coords.iter()).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn infinitely_larger(&self, other: &LexVec) -> Result<bool, LexVecError> {
        self.check_rank(other)?;
        Ok(self.height() > other.height())
    }

    pub fn checked_add(&self, other: &LexVec) -> Result<LexVec, LexVecError> {
        self.check_rank(other)?;
        Ok(self.zip(other, |a, b| a.checked_add(b)))
    }

    pub fn checked_sub(&self, other: &LexVec) -> Result<LexVec, LexVecError> {
        self.check_rank(other)?;
        Ok(self.zip(other, |a, b| a.checked_sub(b)))
    }

    fn zip(&self, other: &LexVec, f: impl Fn(i64, i64) -> Option<i64>) -> LexVec {
        LexVec {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(&a, &b)| f(a, b).expect("LexVec coordinate overflow"))
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &LexVec) {
        assert_eq!(self.rank(), other.rank(), "LexVec rank mismatch");
        for (a, &b) in self.coords.iter_mut().zip(other.coords.iter()) {
            *a = a.checked_add(b).expect("LexVec coordinate overflow");
        }
    }

    pub fn negate(&self) -> LexVec {
        LexVec {
            coords: self
                .coords
                .iter()
                .map(|&a| a.checked_neg().expect("LexVec coordinate overflow"))
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> LexVec {
        LexVec {
            coords: self
                .coords
                .iter()
                .map(|&a| a.checked_mul(k).expect("LexVec coordinate overflow"))
                .collect(),
        }
    }

    pub fn halve(&self) -> Result<LexVec, LexVecError> {
        if self.coords.iter().any(|c| c % 2 != 0) {
            return Err(LexVecError::HalfError(self.clone()));
        }
        Ok(LexVec { coords: self.coords.iter().map(|c| c / 2).collect() })
    }
}

impl std::ops::Add for &LexVec {
    type Output = LexVec;
    fn add(self, rhs: &LexVec) -> LexVec {
        self.checked_add(rhs).expect("LexVec rank mismatch")
    }
}

impl std::ops::Sub for &LexVec {
    type Output = LexVec;
    fn sub(self, rhs: &LexVec) -> LexVec {
        self.checked_sub(rhs).expect("LexVec rank mismatch")
    }
}

impl std::ops::Neg for &LexVec {
    type Output = LexVec;
    fn neg(self) -> LexVec {
        self.negate()
    }
}

/// Total order: vectors of different rank are ordered by rank first, so
/// the order is usable in collections; use [`LexVec::compare`] to reject
/// mixed ranks.
impl Ord for LexVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| self.cmp_same(other))
    }
}

impl PartialOrd for LexVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LexVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LexVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LexVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LexVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        Ok(LexVec::from_coords(&v))
    }
}
