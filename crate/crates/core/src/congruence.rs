//! Congruences, ideals and quotients.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;
use crate::subset::Subset;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` when two distinct classes were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// A partition of the carrier compatible with the product.
///
/// Class ids are assigned in order of each class's smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Congruence {
    class_of: Vec<usize>,
    classes: Vec<Subset>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Self::from_labels_unchecked(&(0..n).collect::<Vec<_>>())
    }

    pub fn universal(n: usize) -> Self {
        Self::from_labels_unchecked(&vec![0; n])
    }

    /// Builds from arbitrary labels, checking compatibility.
    pub fn from_labels(s: &FiniteSemigroup, labels: &[usize]) -> Result<Self> {
        if labels.len() != s.len() {
            return Err(Error::BadPartition(format!(
                "{} labels for {} elements",
                labels.len(),
                s.len()
            )));
        }
        let c = Self::from_labels_unchecked(labels);
        c.check_compatible(s)?;
        Ok(c)
    }

    /// Builds from a list of blocks, which must partition the carrier.
    pub fn from_classes(s: &FiniteSemigroup, blocks: &[Vec<usize>]) -> Result<Self> {
        let n = s.len();
        let mut labels = vec![usize::MAX; n];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::BadPartition(format!("block {i} is empty")));
            }
            for &x in block {
                s.check_element(x)?;
                if labels[x] != usize::MAX {
                    return Err(Error::BadPartition(format!("{x} lies in two blocks")));
                }
                labels[x] = i;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::BadPartition(format!("{x} is not covered")));
        }
        Self::from_labels(s, &labels)
    }

    fn from_labels_unchecked(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut renumber = std::collections::HashMap::new();
        let mut class_of = Vec::with_capacity(n);
        let mut classes: Vec<Subset> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            let next = classes.len();
            let id = *renumber.entry(l).or_insert(next);
            if id == next {
                classes.push(Subset::empty(n));
            }
            classes[id].insert(x);
            class_of.push(id);
        }
        Self { class_of, classes }
    }

    fn from_union_find(uf: &mut UnionFind) -> Self {
        let labels: Vec<usize> = (0..uf.parent.len()).map(|x| uf.find(x)).collect();
        Self::from_labels_unchecked(&labels)
    }

    fn check_compatible(&self, s: &FiniteSemigroup) -> Result<()> {
        for class in &self.classes {
            let rep = class.first().expect("classes are nonempty");
            for y in class.iter().skip(1) {
                for a in s.elements() {
                    for (lhs, rhs) in [(s.mul(a, rep), s.mul(a, y)), (s.mul(rep, a), s.mul(y, a))] {
                        if self.class_of[lhs] != self.class_of[rhs] {
                            return Err(Error::NotCompatible { x: rep, y, lhs, rhs });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn classes(&self) -> &[Subset] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Whether every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        self.classes
            .iter()
            .all(|c| c.iter().all(|x| other.related(c.first().unwrap(), x)))
    }
}

/// Least congruence containing the given pairs.
///
/// Every pair that causes a merge is a generator, so its left and right
/// translates are queued; pairs already related need no further work.
pub fn congruence_closure(s: &FiniteSemigroup, pairs: &[(usize, usize)]) -> Result<Congruence> {
    for &(x, y) in pairs {
        s.check_element(x)?;
        s.check_element(y)?;
    }
    let mut uf = UnionFind::new(s.len());
    close_into(s, &mut uf, pairs.to_vec());
    Ok(Congruence::from_union_find(&mut uf))
}

fn close_into(s: &FiniteSemigroup, uf: &mut UnionFind, mut queue: Vec<(usize, usize)>) {
    while let Some((x, y)) = queue.pop() {
        if uf.union(x, y) {
            for a in s.elements() {
                queue.push((s.mul(a, x), s.mul(a, y)));
                queue.push((s.mul(x, a), s.mul(y, a)));
            }
        }
    }
}

/// Least congruence whose quotient is a semilattice.
///
/// Seeds `(x, x^2)` and `(xy, yx)`, closes, then re-seeds with the same
/// pairs read in the quotient until the quotient is a semilattice.
pub fn smallest_semilattice_congruence(s: &FiniteSemigroup) -> Congruence {
    let n = s.len();
    let mut uf = UnionFind::new(n);
    let mut seeds: Vec<(usize, usize)> = Vec::new();
    for x in 0..n {
        seeds.push((x, s.mul(x, x)));
        for y in x + 1..n {
            seeds.push((s.mul(x, y), s.mul(y, x)));
        }
    }
    close_into(s, &mut uf, seeds);
    loop {
        let c = Congruence::from_union_find(&mut uf);
        let reps: Vec<usize> = c.classes.iter().map(|k| k.first().unwrap()).collect();
        let mut seeds = Vec::new();
        for (i, &a) in reps.iter().enumerate() {
            let aa = s.mul(a, a);
            if c.class_of[aa] != i {
                seeds.push((aa, a));
            }
            for &b in &reps[i + 1..] {
                let (ab, ba) = (s.mul(a, b), s.mul(b, a));
                if c.class_of[ab] != c.class_of[ba] {
                    seeds.push((ab, ba));
                }
            }
        }
        if seeds.is_empty() {
            return c;
        }
        close_into(s, &mut uf, seeds);
    }
}

/// Outcome of [`is_ideal`]. `witness` is `(x, y, xy)` with `xy` outside the
/// subset and one of `x`, `y` inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdealCheck {
    pub is_ideal: bool,
    pub witness: Option<(usize, usize, usize)>,
}

pub fn is_ideal(s: &FiniteSemigroup, a: &Subset) -> IdealCheck {
    for x in a.iter() {
        for y in s.elements() {
            for (l, r) in [(x, y), (y, x)] {
                let p = s.mul(l, r);
                if !a.contains(p) {
                    return IdealCheck {
                        is_ideal: false,
                        witness: Some((l, r, p)),
                    };
                }
            }
        }
    }
    IdealCheck {
        is_ideal: true,
        witness: None,
    }
}

/// A validated (possibly empty) ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Ideal {
    members: Subset,
}

impl Ideal {
    pub fn new(s: &FiniteSemigroup, members: Subset) -> Result<Self> {
        match is_ideal(s, &members).witness {
            Some((x, y, product)) => Err(Error::NotAnIdeal { x, y, product }),
            None => Ok(Self { members }),
        }
    }

    pub fn members(&self) -> &Subset {
        &self.members
    }
}

/// A quotient semigroup with its projection `x -> [x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub semigroup: FiniteSemigroup,
    pub projection: Vec<usize>,
}

/// `X/I`: the ideal collapses to a zero at index 0, the remaining elements
/// follow in increasing order. `X/∅` is `X` itself.
pub fn rees_quotient(s: &FiniteSemigroup, ideal: &Subset) -> Result<Quotient> {
    if let Some((x, y, product)) = is_ideal(s, ideal).witness {
        return Err(Error::NotAnIdeal { x, y, product });
    }
    if ideal.is_empty() {
        return Ok(Quotient {
            semigroup: s.clone(),
            projection: s.elements().collect(),
        });
    }
    let n = s.len();
    let outside: Vec<usize> = ideal.complement().to_vec();
    let mut projection = vec![0; n];
    for (i, &x) in outside.iter().enumerate() {
        projection[x] = i + 1;
    }
    let m = outside.len() + 1;
    let mut flat = Vec::with_capacity(m * m);
    let rep = |i: usize| if i == 0 { ideal.first().unwrap() } else { outside[i - 1] };
    for i in 0..m {
        for j in 0..m {
            flat.push(projection[s.mul(rep(i), rep(j))]);
        }
    }
    let names = {
        let zero = format!(
            "{{{}}}",
            ideal.iter().map(|x| s.name(x)).collect::<Vec<_>>().join(",")
        );
        let mut names = vec![zero];
        names.extend(outside.iter().map(|&x| s.name(x)));
        dedupe_names(names)
    };
    finish_quotient(s, m, &flat, names, projection)
}

/// `X/≈` with classes indexed by their ids in `c`.
pub fn quotient_by_congruence(s: &FiniteSemigroup, c: &Congruence) -> Result<Quotient> {
    if c.class_of.len() != s.len() {
        return Err(Error::BadPartition("congruence is over another carrier".into()));
    }
    c.check_compatible(s)?;
    let m = c.len();
    let reps: Vec<usize> = c.classes.iter().map(|k| k.first().unwrap()).collect();
    let mut flat = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            flat.push(c.class_of[s.mul(a, b)]);
        }
    }
    let names = c
        .classes
        .iter()
        .map(|k| {
            if k.len() == 1 {
                s.name(k.first().unwrap())
            } else {
                format!(
                    "{{{}}}",
                    k.iter().map(|x| s.name(x)).collect::<Vec<_>>().join(",")
                )
            }
        })
        .collect();
    finish_quotient(s, m, &flat, dedupe_names(names), c.class_of.clone())
}

/// Partition input for [`quotient_by_congruence`].
pub fn quotient_by_partition(s: &FiniteSemigroup, blocks: &[Vec<usize>]) -> Result<Quotient> {
    quotient_by_congruence(s, &Congruence::from_classes(s, blocks)?)
}

fn finish_quotient(
    s: &FiniteSemigroup,
    m: usize,
    flat: &[usize],
    names: Vec<String>,
    projection: Vec<usize>,
) -> Result<Quotient> {
    let semigroup = FiniteSemigroup::from_flat(m, flat, Some(names), Limits::global())
        .map_err(|e| Error::Internal(format!("quotient table invalid: {e}")))?;
    if !s.is_homomorphism(&semigroup, &projection) {
        return Err(Error::Internal("projection is not a homomorphism".into()));
    }
    Ok(Quotient {
        semigroup,
        projection,
    })
}

fn dedupe_names(mut names: Vec<String>) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    for name in names.iter_mut() {
        while !seen.insert(name.clone()) {
            name.push('\'');
        }
    }
    names
}

/// `X^1 a X^1`.
pub fn principal_ideal(s: &FiniteSemigroup, a: usize) -> Subset {
    let n = s.len();
    let mut out = Subset::singleton(n, a);
    for x in 0..n {
        let xa = s.mul(x, a);
        out.insert(xa);
        out.insert(s.mul(a, x));
        for y in 0..n {
            out.insert(s.mul(xa, y));
        }
    }
    out
}

/// Every ideal, including `∅` and `X`, sorted by size then lexicographically.
///
/// Ideals are exactly the unions of principal ideals, so the search grows
/// each ideal by one principal ideal at a time.
pub fn enumerate_ideals(s: &FiniteSemigroup) -> Result<Vec<Ideal>> {
    enumerate_ideals_with_limits(s, Limits::global())
}

pub fn enumerate_ideals_with_limits(s: &FiniteSemigroup, limits: &Limits) -> Result<Vec<Ideal>> {
    let n = s.len();
    if n > limits.ideal_enum_bound {
        return Err(Error::BoundExceeded {
            what: "ideal enumeration",
            size: n,
            bound: limits.ideal_enum_bound,
        });
    }
    let principal: Vec<Subset> = (0..n).map(|a| principal_ideal(s, a)).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack = vec![Subset::empty(n)];
    seen.insert(Vec::new());
    let mut found = Vec::new();
    while let Some(ideal) = stack.pop() {
        for a in ideal.complement().iter() {
            let next = ideal.union(&principal[a]);
            if seen.insert(next.to_vec()) {
                stack.push(next);
            }
        }
        found.push(ideal);
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.lex_cmp(b)));
    found
        .into_iter()
        .map(|members| {
            Ideal::new(s, members).map_err(|e| Error::Internal(format!("enumerated non-ideal: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn x8() -> FiniteSemigroup {
        families::example_main(8).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> Subset {
        Subset::from_iter(n, xs.iter().copied())
    }

    #[test]
    fn ideal_checks() {
        let s = x8();
        assert!(is_ideal(&s, &Subset::empty(9)).is_ideal);
        assert!(is_ideal(&s, &set(9, &[0, 1])).is_ideal);
        let check = is_ideal(&s, &set(9, &[2, 3]));
        assert!(!check.is_ideal);
        let (x, y, p) = check.witness.unwrap();
        assert_eq!(s.mul(x, y), p);
        assert!(!set(9, &[2, 3]).contains(p));
        assert!(set(9, &[2, 3]).contains(x) || set(9, &[2, 3]).contains(y));
        // 3*5 = 1 escapes {2,3}; 3*0 = 0 is found first in scan order
        assert_eq!(s.mul(3, 5), 1);
    }

    #[test]
    fn rees_quotients_of_x8() {
        let s = x8();
        let q = rees_quotient(&s, &Subset::empty(9)).unwrap();
        assert_eq!(q.semigroup, s);

        let q = rees_quotient(&s, &set(9, &[0, 1])).unwrap();
        assert_eq!(q.semigroup.len(), 8);
        assert_eq!(q.semigroup.zero(), Some(0));
        assert_eq!(q.semigroup.name(0), "{0,1}");

        let j = set(9, &[0, 1, 2, 4, 6, 8]);
        let q = rees_quotient(&s, &j).unwrap();
        assert_eq!(q.semigroup.len(), 4);
        assert_eq!(q.semigroup.names().unwrap(), ["{0,1,2,4,6,8}", "3", "5", "7"]);
        // X8/J is null: every product lands in the zero
        assert!((0..4).all(|x| (0..4).all(|y| q.semigroup.mul(x, y) == 0)));

        assert!(matches!(
            rees_quotient(&s, &set(9, &[2, 3])),
            Err(Error::NotAnIdeal { .. })
        ));
    }

    #[test]
    fn closures() {
        let s = x8();
        assert_eq!(congruence_closure(&s, &[]).unwrap(), Congruence::identity(9));
        let c = congruence_closure(&s, &[(0, 1)]).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(c.classes()[0].to_vec(), vec![0, 1]);
        // 2~3 forces 3*5 ~ 2*5, i.e. 1 ~ 0
        let c = congruence_closure(&s, &[(2, 3)]).unwrap();
        let blocks: Vec<Vec<usize>> = c.classes().iter().map(Subset::to_vec).collect();
        assert_eq!(
            blocks,
            vec![vec![0, 1], vec![2, 3], vec![4], vec![5], vec![6], vec![7], vec![8]]
        );
    }

    /// Oracle: iterate the one-step translation closure on a boolean matrix
    /// until nothing changes.
    fn closure_oracle(s: &FiniteSemigroup, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let n = s.len();
        let mut r = vec![vec![false; n]; n];
        for (x, row) in r.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in pairs {
            r[x][y] = true;
            r[y][x] = true;
        }
        loop {
            let mut next = r.clone();
            for x in 0..n {
                for y in 0..n {
                    if !r[x][y] {
                        continue;
                    }
                    for a in 0..n {
                        next[s.mul(a, x)][s.mul(a, y)] = true;
                        next[s.mul(x, a)][s.mul(y, a)] = true;
                    }
                    for z in 0..n {
                        if r[y][z] {
                            next[x][z] = true;
                        }
                    }
                }
            }
            if next == r {
                return r;
            }
            r = next;
        }
    }

    #[test]
    fn closure_matches_oracle() {
        let samples = [
            families::example_main(9).unwrap(),
            families::monogenic(3, 4).unwrap(),
            families::free_semilattice(3).unwrap(),
            families::left_zero(3).unwrap().adjoin_identity().unwrap(),
        ];
        for s in &samples {
            let n = s.len();
            for x in 0..n {
                for y in x + 1..n {
                    let c = congruence_closure(s, &[(x, y)]).unwrap();
                    let r = closure_oracle(s, &[(x, y)]);
                    for (a, row) in r.iter().enumerate() {
                        for (b, &related) in row.iter().enumerate() {
                            assert_eq!(c.related(a, b), related);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotients_by_congruence() {
        let s = x8();
        let q = quotient_by_congruence(&s, &Congruence::identity(9)).unwrap();
        assert_eq!(q.semigroup.rows(), s.rows());
        let q = quotient_by_congruence(&s, &Congruence::universal(9)).unwrap();
        assert_eq!(q.semigroup.len(), 1);
        let bad = quotient_by_partition(&s, &[vec![0], vec![1], vec![2, 4], vec![3], vec![5], vec![6], vec![7], vec![8]]);
        assert!(matches!(bad, Err(Error::NotCompatible { .. })));
        assert!(matches!(
            quotient_by_partition(&s, &[vec![0, 1]]),
            Err(Error::BadPartition(_))
        ));
        let c = smallest_semilattice_congruence(&s);
        let blocks: Vec<Vec<usize>> = c.classes().iter().map(Subset::to_vec).collect();
        assert_eq!(blocks, vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![6, 7], vec![8]]);
    }

    #[test]
    fn semilattice_congruence_trivial_cases() {
        let g = families::cyclic_group(6).unwrap();
        assert_eq!(smallest_semilattice_congruence(&g).len(), 1);
        let sl = families::free_semilattice(3).unwrap();
        assert_eq!(smallest_semilattice_congruence(&sl), Congruence::identity(7));
    }

    #[test]
    fn ideal_lists() {
        let trivial = families::chain_semilattice(1).unwrap();
        let ideals = enumerate_ideals(&trivial).unwrap();
        assert_eq!(ideals.len(), 2);
        let two = families::chain_semilattice(2).unwrap();
        let lists: Vec<Vec<usize>> = enumerate_ideals(&two)
            .unwrap()
            .iter()
            .map(|i| i.members().to_vec())
            .collect();
        assert_eq!(lists, vec![vec![], vec![0], vec![0, 1]]);

        // oracle: scan every subset of X8
        let s = x8();
        let brute: Vec<Vec<usize>> = (0u32..1 << 9)
            .map(|m| Subset::from_predicate(9, |x| m >> x & 1 == 1))
            .filter(|a| is_ideal(&s, a).is_ideal)
            .map(|a| a.to_vec())
            .collect();
        let listed: BTreeSet<Vec<usize>> = enumerate_ideals(&s)
            .unwrap()
            .iter()
            .map(|i| i.members().to_vec())
            .collect();
        assert_eq!(listed, brute.into_iter().collect());
        assert!(listed.contains(&vec![0]) && listed.contains(&vec![0, 1]));
        assert!(listed.contains(&vec![0, 1, 2, 3]));
        assert!(!listed.contains(&vec![0, 3]));

        let big = families::null_semigroup(17).unwrap();
        assert!(matches!(enumerate_ideals(&big), Err(Error::BoundExceeded { .. })));
    }
}
