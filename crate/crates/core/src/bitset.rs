//! Dense bitsets over a fixed universe, used for element and subgroup sets.

use std::cmp::Ordering;
use std::fmt;

/// A subset of `{0, .., universe-1}` as packed 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    universe: usize,
    words: Vec<u64>,
}

impl Bitset {
    pub fn empty(universe: usize) -> Bitset {
        Bitset {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.universe);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.universe);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset_of(&self, other: &Bitset) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Bitset) -> Bitset {
        debug_assert_eq!(self.universe, other.universe);
        Bitset {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| a & b)
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic order on sorted member lists: the set whose first
    /// differing member is smaller comes first; prefixes come before
    /// extensions. This is the canonical ordering for subgroups.
    pub fn cmp_members(&self, other: &Bitset) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl fmt::Debug for Bitset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(universe: usize, members: &[usize]) -> Bitset {
        let mut b = Bitset::empty(universe);
        for &m in members {
            b.insert(m);
        }
        b
    }

    #[test]
    fn membership_and_len() {
        let b = set(130, &[0, 63, 64, 129]);
        assert_eq!(b.len(), 4);
        assert!(b.contains(63) && b.contains(64));
        assert!(!b.contains(1));
        assert_eq!(b.members(), vec![0, 63, 64, 129]);
    }

    #[test]
    fn subset_and_intersection() {
        let a = set(70, &[1, 2, 65]);
        let b = set(70, &[1, 2, 3, 65]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert_eq!(a.intersection(&b), a);
    }

    #[test]
    fn member_list_ordering() {
        let a = set(10, &[0, 1, 2]);
        let b = set(10, &[0, 3]);
        let c = set(10, &[0, 1]);
        assert_eq!(a.cmp_members(&b), Ordering::Less);
        assert_eq!(c.cmp_members(&a), Ordering::Less); // prefix first
        assert_eq!(a.cmp_members(&a), Ordering::Equal);
    }
}
