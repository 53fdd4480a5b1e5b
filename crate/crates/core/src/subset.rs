use std::fmt;

use serde::{Serialize, Serializer};

const WORD: usize = 64;

/// A subset of the carrier `{0..n}` of one semigroup, stored as a bitset.
///
/// The universe size travels with the set; mixing subsets of different
/// carriers is a programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    n: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for x in 0..n {
            s.insert(x);
        }
        s
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(x);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, items: I) -> Self {
        let mut s = Self::empty(n);
        for x in items {
            s.insert(x);
        }
        s
    }

    pub fn from_predicate(n: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        Self::from_iter(n, (0..n).filter(|&x| pred(x)))
    }

    /// Size of the carrier this subset lives in.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x < self.n, "element {x} outside carrier of size {}", self.n);
        let (w, b) = (x / WORD, x % WORD);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.n {
            self.words[x / WORD] &= !(1 << (x % WORD));
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.n && self.words[x / WORD] & (1 << (x % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.n, other.n, "subsets of different carriers");
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> Self {
        Subset::full(self.n).difference(self)
    }

    /// Lexicographic comparison of the sorted member lists.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serializes as a sorted index array.
impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra_across_word_boundary() {
        let a = Subset::from_iter(130, [0, 63, 64, 129]);
        let b = Subset::from_iter(130, [63, 64, 100]);
        assert_eq!(a.intersection(&b).to_vec(), vec![63, 64]);
        assert_eq!(a.union(&b).len(), 5);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 129]);
        assert!(a.intersection(&b).is_subset(&a));
        assert_eq!(a.complement().len(), 126);
    }

    #[test]
    fn lex_order_compares_sorted_lists() {
        let a = Subset::from_iter(5, [0, 3]);
        let b = Subset::from_iter(5, [1, 2]);
        assert_eq!(a.lex_cmp(&b), std::cmp::Ordering::Less);
        assert_eq!(
            Subset::from_iter(5, [0, 1]).lex_cmp(&Subset::from_iter(5, [0, 1, 2])),
            std::cmp::Ordering::Less
        );
    }

    #[test]
    #[should_panic]
    fn mixing_carriers_panics() {
        Subset::empty(3).is_subset(&Subset::empty(4));
    }
}
