//! The binary quasiorder, homomorphisms onto the two-element semilattice
//! and the semilattice reflection.

use serde::Serialize;

use crate::config::Limits;
pub use crate::congruence::smallest_semilattice_congruence;
use crate::congruence::{quotient_by_congruence, Congruence};
use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;
use crate::subset::Subset;

/// `x ≲ y` iff `h(x) <= h(y)` for every homomorphism `h: X -> 2`.
///
/// Stored as the up-set of every element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiOrder {
    up: Vec<Subset>,
    #[serde(skip)]
    down: Vec<Subset>,
}

impl QuasiOrder {
    fn from_up(up: Vec<Subset>) -> Self {
        let n = up.len();
        let mut down = vec![Subset::empty(n); n];
        for (x, ux) in up.iter().enumerate() {
            for y in ux.iter() {
                down[y].insert(x);
            }
        }
        Self { up, down }
    }

    /// Order read off the semilattice reflection: `x ≲ y` iff
    /// `q(x) q(y) = q(x)`.
    pub fn from_reflection(r: &SemilatticeReflection) -> Self {
        let n = r.projection.len();
        let y = &r.semigroup;
        let q = &r.projection;
        Self::from_up(
            (0..n)
                .map(|a| Subset::from_predicate(n, |x| y.mul(q[a], q[x]) == q[a]))
                .collect(),
        )
    }

    /// Order read off a list of homomorphisms, each given as `h^-1(1)`.
    pub fn from_homs(n: usize, homs: &[Subset]) -> Self {
        Self::from_up(
            (0..n)
                .map(|a| {
                    Subset::from_predicate(n, |x| {
                        homs.iter().all(|f| !f.contains(a) || f.contains(x))
                    })
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// `⇑a = {x : a ≲ x}`.
    pub fn up(&self, a: usize) -> &Subset {
        &self.up[a]
    }

    /// `⇓a = {x : x ≲ a}`.
    pub fn down(&self, a: usize) -> &Subset {
        &self.down[a]
    }

    /// `⇕a = ⇑a ∩ ⇓a`.
    pub fn updown(&self, a: usize) -> Subset {
        self.up[a].intersection(&self.down[a])
    }

    pub fn up_set(&self, a: &Subset) -> Subset {
        let mut out = Subset::empty(self.len());
        for x in a.iter() {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn down_set(&self, a: &Subset) -> Subset {
        let mut out = Subset::empty(self.len());
        for x in a.iter() {
            out.union_with(&self.down[x]);
        }
        out
    }

    pub fn updown_set(&self, a: &Subset) -> Subset {
        let mut out = Subset::empty(self.len());
        for x in a.iter() {
            out.union_with(&self.updown(x));
        }
        out
    }
}

/// `X/⇕` with its quotient map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilatticeReflection {
    pub semigroup: FiniteSemigroup,
    pub projection: Vec<usize>,
    pub congruence: Congruence,
}

pub fn semilattice_reflection(s: &FiniteSemigroup) -> Result<SemilatticeReflection> {
    let congruence = smallest_semilattice_congruence(s);
    let q = quotient_by_congruence(s, &congruence)?;
    let y = &q.semigroup;
    let is_semilattice = y.elements().all(|a| y.is_idempotent(a)) && y.is_commutative().commutative;
    if !is_semilattice {
        return Err(Error::Internal("reflection quotient is not a semilattice".into()));
    }
    Ok(SemilatticeReflection {
        semigroup: q.semigroup,
        projection: q.projection,
        congruence,
    })
}

pub fn binary_quasiorder(s: &FiniteSemigroup) -> Result<QuasiOrder> {
    Ok(QuasiOrder::from_reflection(&semilattice_reflection(s)?))
}

/// Every `h^-1(1)` for homomorphisms `h: X -> 2`, the constant maps
/// included. Sorted by size, then lexicographically.
///
/// A homomorphism onto `2` factors through the reflection `Y`, and the
/// preimages of `1` in a finite semilattice are exactly `∅` and the
/// principal filters, so the list has `|Y| + 1` entries.
pub fn homs_to_two(s: &FiniteSemigroup) -> Result<Vec<Subset>> {
    homs_to_two_with_limits(s, Limits::global())
}

pub fn homs_to_two_with_limits(s: &FiniteSemigroup, limits: &Limits) -> Result<Vec<Subset>> {
    let n = s.len();
    if n > limits.hom_enum_bound {
        return Err(Error::BoundExceeded {
            what: "homomorphisms to 2",
            size: n,
            bound: limits.hom_enum_bound,
        });
    }
    let r = semilattice_reflection(s)?;
    let y = &r.semigroup;
    let mut homs = vec![Subset::empty(n)];
    for c in y.elements() {
        let filter = Subset::from_predicate(y.len(), |d| y.mul(c, d) == c);
        homs.push(Subset::from_predicate(n, |x| filter.contains(r.projection[x])));
    }
    sort_subsets(&mut homs);
    for f in &homs {
        if !is_prime_filter(s, f) {
            return Err(Error::Internal(format!("{f:?} is not a homomorphism kernel")));
        }
    }
    Ok(homs)
}

/// Oracle: tests every subset of the carrier.
pub fn homs_to_two_brute_force(s: &FiniteSemigroup) -> Result<Vec<Subset>> {
    let n = s.len();
    let bound = Limits::global().hom_brute_force_bound;
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "brute-force homomorphisms to 2",
            size: n,
            bound,
        });
    }
    let mut homs: Vec<Subset> = (0u32..1 << n)
        .map(|m| Subset::from_predicate(n, |x| m >> x & 1 == 1))
        .filter(|f| is_prime_filter(s, f))
        .collect();
    sort_subsets(&mut homs);
    Ok(homs)
}

/// `xy ∈ F` iff `x ∈ F` and `y ∈ F`, i.e. the indicator of `F` is a
/// homomorphism to `2`.
pub fn is_prime_filter(s: &FiniteSemigroup, f: &Subset) -> bool {
    s.elements()
        .all(|x| s.elements().all(|y| f.contains(s.mul(x, y)) == (f.contains(x) && f.contains(y))))
}

fn sort_subsets(v: &mut [Subset]) {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.lex_cmp(b)));
}
