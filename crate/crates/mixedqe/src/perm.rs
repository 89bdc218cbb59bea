//! Permutations on `{0..degree-1}`, the input format for group construction.
//!
//! Catalogue files and analyze inputs describe groups by permutation
//! generators with 1-based image lists; internally everything is 0-based.

use crate::error::GroupError;

/// A permutation of `{0, .., degree-1}` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    /// Identity permutation on `degree` points.
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u16).collect(),
        }
    }

    /// Build from a 0-based image list, checking bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Self, GroupError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if (i as usize) >= d || seen[i as usize] {
                return Err(GroupError::InvalidPermutation);
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Build from a 1-based image list as used in catalogue files.
    pub fn from_one_based(images: &[u32]) -> Result<Self, GroupError> {
        let d = images.len();
        let mut v = Vec::with_capacity(d);
        for &i in images {
            if i == 0 || i as usize > d {
                return Err(GroupError::InvalidPermutation);
            }
            v.push((i - 1) as u16);
        }
        Perm::from_images(v)
    }

    /// Render as a 1-based image list.
    pub fn to_one_based(&self) -> Vec<u32> {
        self.images.iter().map(|&i| i as u32 + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: u16) -> u16 {
        self.images[point as usize]
    }

    /// Composition `self * other`, acting as `other` first: `(p*q)(x) = p(q(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u16 == j)
    }

    /// Pad with fixed points up to `degree`.
    pub fn extend_to(&self, degree: usize) -> Perm {
        let mut images = self.images.clone();
        for i in images.len()..degree {
            images.push(i as u16);
        }
        Perm { images }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_factor_first() {
        // p = (0 1), q = (1 2) on 3 points
        let p = Perm::from_images(vec![1, 0, 2]).unwrap();
        let q = Perm::from_images(vec![0, 2, 1]).unwrap();
        let pq = p.compose(&q);
        // (p*q)(1) = p(q(1)) = p(2) = 2
        assert_eq!(pq.apply(1), 2);
        assert_eq!(pq.apply(2), 0);
    }

    #[test]
    fn inverse_roundtrip() {
        let p = Perm::from_one_based(&[2, 3, 4, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(p.inverse().compose(&p).is_identity());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 2]).is_err());
        assert!(Perm::from_one_based(&[1, 5, 2]).is_err());
    }
}
