//! Mixed-radix index spaces over ordered player subsets.
//!
//! Every dense table in the crate (payoffs, potentials, beliefs, messages)
//! is laid out the same way: members sorted by ascending player id, the last
//! listed member varying fastest.

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    members: Vec<usize>,
    radices: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl Domain {
    /// `members` must be strictly ascending and `radices[i]` is the number of
    /// values of `members[i]`.
    pub fn new(members: Vec<usize>, radices: Vec<usize>) -> Result<Self> {
        assert_eq!(members.len(), radices.len(), "one radix per member");
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let mut strides = vec![0; members.len()];
        let mut size = 1usize;
        for i in (0..members.len()).rev() {
            strides[i] = size;
            size = size.checked_mul(radices[i]).ok_or_else(|| Error::TableTooLarge(members.clone()))?;
        }
        Ok(Domain { members, radices, strides, size })
    }

    /// Domain over `members`, taking radices from a per-player count slice.
    pub fn over(members: &[usize], strategy_counts: &[usize]) -> Result<Self> {
        let radices = members.iter().map(|&m| strategy_counts[m]).collect();
        Domain::new(members.to_vec(), radices)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn position(&self, player: usize) -> Option<usize> {
        self.members.binary_search(&player).ok()
    }

    pub fn stride(&self, position: usize) -> usize {
        self.strides[position]
    }

    /// Index of an assignment listing one value per member.
    pub fn index(&self, values: &[usize]) -> usize {
        debug_assert_eq!(values.len(), self.members.len());
        values.iter().zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    /// Index of the restriction of a full profile to this domain.
    pub fn index_in_profile(&self, profile: &[usize]) -> usize {
        self.members.iter().zip(&self.strides).map(|(&m, s)| profile[m] * s).sum()
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.members.len()];
        self.decode_into(index, &mut out);
        out
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for i in (0..self.members.len()).rev() {
            out[i] = index % self.radices[i];
            index /= self.radices[i];
        }
    }

    /// Value of the member at `position` in the assignment with this index.
    pub fn digit(&self, index: usize, position: usize) -> usize {
        (index / self.strides[position]) % self.radices[position]
    }

    pub fn is_subset_of(&self, other: &Domain) -> bool {
        is_sorted_subset(&self.members, &other.members)
    }

    /// For every index of `self`, the index of its restriction onto `sub`,
    /// whose members must be a subset of ours.
    pub fn projection(&self, sub: &Domain) -> Vec<usize> {
        debug_assert!(sub.is_subset_of(self));
        let contribution: Vec<usize> =
            self.members.iter().map(|m| sub.position(*m).map_or(0, |p| sub.strides[p])).collect();
        let mut map = Vec::with_capacity(self.size);
        let mut digits = vec![0usize; self.members.len()];
        let mut current = 0usize;
        for _ in 0..self.size {
            map.push(current);
            for i in (0..digits.len()).rev() {
                digits[i] += 1;
                current += contribution[i];
                if digits[i] < self.radices[i] {
                    break;
                }
                current -= contribution[i] * self.radices[i];
                digits[i] = 0;
            }
        }
        map
    }
}

/// Subset test on ascending slices.
pub fn is_sorted_subset(small: &[usize], large: &[usize]) -> bool {
    let mut it = large.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// Intersection of two ascending slices.
pub fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn last_member_varies_fastest() {
        let d = Domain::new(vec![0, 3], vec![2, 3]).unwrap();
        assert_eq!(d.size(), 6);
        assert_eq!(d.decode(0), vec![0, 0]);
        assert_eq!(d.decode(1), vec![0, 1]);
        assert_eq!(d.decode(3), vec![1, 0]);
        assert_eq!(d.index(&[1, 2]), 5);
        assert_eq!(d.digit(5, 0), 1);
        assert_eq!(d.digit(5, 1), 2);
    }

    #[test]
    fn empty_domain_has_one_assignment() {
        let d = Domain::new(vec![], vec![]).unwrap();
        assert_eq!(d.size(), 1);
        assert_eq!(d.index(&[]), 0);
    }

    #[test]
    fn oversized_domain_is_rejected() {
        let members: Vec<usize> = (0..80).collect();
        assert!(Domain::new(members, vec![3; 80]).is_err());
    }

    #[test]
    fn sorted_helpers() {
        assert!(is_sorted_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!is_sorted_subset(&[1, 4], &[0, 1, 2, 3]));
        assert!(is_sorted_subset(&[], &[0]));
        assert_eq!(sorted_intersection(&[0, 2, 4, 5], &[1, 2, 5]), vec![2, 5]);
    }

    proptest! {
        #[test]
        fn projection_matches_decoding(radices in proptest::collection::vec(1usize..4, 1..5), mask in 0u32..32) {
            let members: Vec<usize> = (0..radices.len()).map(|i| 2 * i).collect();
            let full = Domain::new(members.clone(), radices.clone()).unwrap();
            let keep: Vec<usize> = (0..members.len()).filter(|i| mask & (1 << i) != 0).collect();
            let sub = Domain::new(
                keep.iter().map(|&i| members[i]).collect(),
                keep.iter().map(|&i| radices[i]).collect(),
            ).unwrap();
            let map = full.projection(&sub);
            for (idx, &projected) in map.iter().enumerate() {
                let values = full.decode(idx);
                prop_assert_eq!(full.index(&values), idx);
                let sub_values: Vec<usize> = keep.iter().map(|&i| values[i]).collect();
                prop_assert_eq!(projected, sub.index(&sub_values));
            }
        }
    }
}
