//! Idempotents and their natural order, Green's H-classes, the Clifford
//! part, central substructures, roots and the map `pi` sending an element
//! to the idempotent whose maximal subgroup its powers eventually enter.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;
use crate::subset::Subset;

/// `E(X)`.
pub fn idempotents(s: &FiniteSemigroup) -> Subset {
    Subset::from_predicate(s.len(), |x| s.is_idempotent(x))
}

/// The natural partial order on `E(X)`: `e <= f` iff `ef = fe = e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdempotentPoset {
    pub elements: Subset,
    /// `down[e]` is the lower set of `e` (empty for non-idempotents).
    #[serde(skip)]
    down: Vec<Subset>,
    #[serde(skip)]
    up: Vec<Subset>,
    pub longest_chain: usize,
    pub max_antichain: usize,
    pub minimal_elements: Subset,
}

impl IdempotentPoset {
    pub fn leq(&self, e: usize, f: usize) -> bool {
        self.down[f].contains(e)
    }

    /// Lower set of an idempotent within `E(X)`.
    pub fn down(&self, e: usize) -> &Subset {
        &self.down[e]
    }

    /// Upper set of an idempotent within `E(X)`.
    pub fn up(&self, e: usize) -> &Subset {
        &self.up[e]
    }

    /// Union of upper sets of the members of `f`.
    pub fn up_set(&self, f: &Subset) -> Subset {
        let mut out = Subset::empty(self.elements.universe());
        for e in f.iter() {
            out.union_with(&self.up[e]);
        }
        out
    }

    pub fn down_set(&self, f: &Subset) -> Subset {
        let mut out = Subset::empty(self.elements.universe());
        for e in f.iter() {
            out.union_with(&self.down[e]);
        }
        out
    }
}

pub fn idempotent_poset(s: &FiniteSemigroup) -> IdempotentPoset {
    let n = s.len();
    let elements = idempotents(s);
    let es = elements.to_vec();
    let mut down = vec![Subset::empty(n); n];
    let mut up = vec![Subset::empty(n); n];
    for &e in &es {
        for &f in &es {
            if s.mul(e, f) == e && s.mul(f, e) == e {
                down[f].insert(e);
                up[e].insert(f);
            }
        }
    }

    // longest chain: heights in order of increasing lower-set size
    let mut order = es.clone();
    order.sort_by_key(|&e| down[e].len());
    let mut height = vec![0usize; n];
    for &e in &order {
        height[e] = 1 + down[e]
            .iter()
            .filter(|&f| f != e)
            .map(|f| height[f])
            .max()
            .unwrap_or(0);
    }
    let longest_chain = es.iter().map(|&e| height[e]).max().unwrap_or(0);

    // Dilworth: width = |E| - maximum matching on strict comparabilities
    let strict: Vec<Vec<usize>> = es
        .iter()
        .map(|&e| {
            up[e]
                .iter()
                .filter(|&f| f != e)
                .map(|f| es.binary_search(&f).unwrap())
                .collect()
        })
        .collect();
    let max_antichain = es.len() - bipartite_matching(&strict, es.len());

    let minimal_elements = Subset::from_iter(n, es.iter().copied().filter(|&e| down[e].len() == 1));
    IdempotentPoset {
        elements,
        down,
        up,
        longest_chain,
        max_antichain,
        minimal_elements,
    }
}

fn bipartite_matching(adj: &[Vec<usize>], right: usize) -> usize {
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    (0..adj.len())
        .filter(|&u| augment(u, adj, &mut vec![false; right], &mut owner))
        .count()
}

/// Green's H-relation computed once for every element.
///
/// `aX^1` and `X^1a` are kept as bitsets; two elements are H-related when
/// both principal one-sided ideals coincide.
#[derive(Debug, Clone)]
pub struct HClasses {
    label: Vec<usize>,
    classes: Vec<Subset>,
    right_ideals: Vec<Subset>,
    left_ideals: Vec<Subset>,
}

impl HClasses {
    pub fn compute(s: &FiniteSemigroup) -> Self {
        let n = s.len();
        let right_ideals: Vec<Subset> = (0..n)
            .map(|a| {
                let mut r = Subset::from_iter(n, s.row(a));
                r.insert(a);
                r
            })
            .collect();
        let left_ideals: Vec<Subset> = (0..n)
            .map(|a| {
                let mut l = Subset::from_iter(n, (0..n).map(|x| s.mul(x, a)));
                l.insert(a);
                l
            })
            .collect();
        let mut ids: HashMap<(&Subset, &Subset), usize> = HashMap::new();
        let mut label = Vec::with_capacity(n);
        let mut classes: Vec<Subset> = Vec::new();
        for a in 0..n {
            let next = classes.len();
            let id = *ids.entry((&right_ideals[a], &left_ideals[a])).or_insert(next);
            if id == next {
                classes.push(Subset::empty(n));
            }
            classes[id].insert(a);
            label.push(id);
        }
        Self {
            label,
            classes,
            right_ideals,
            left_ideals,
        }
    }

    /// Keeps the one-sided ideals of `s` but replaces the partition.
    ///
    /// Exists so that suites can be run against a deliberately wrong
    /// H-relation and shown to notice.
    pub fn with_classes(s: &FiniteSemigroup, classes: Vec<Subset>) -> Result<Self> {
        let n = s.len();
        let mut label = vec![usize::MAX; n];
        for (id, c) in classes.iter().enumerate() {
            if c.universe() != n || c.is_empty() {
                return Err(Error::BadPartition(format!("class {id} is empty or on the wrong carrier")));
            }
            for x in c.iter() {
                if label[x] != usize::MAX {
                    return Err(Error::BadPartition(format!("{x} lies in two classes")));
                }
                label[x] = id;
            }
        }
        if let Some(x) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::BadPartition(format!("{x} lies in no class")));
        }
        let base = Self::compute(s);
        Ok(Self {
            label,
            classes,
            right_ideals: base.right_ideals,
            left_ideals: base.left_ideals,
        })
    }

    pub fn class_of(&self, a: usize) -> &Subset {
        &self.classes[self.label[a]]
    }

    pub fn label(&self, a: usize) -> usize {
        self.label[a]
    }

    pub fn classes(&self) -> &[Subset] {
        &self.classes
    }

    pub fn right_ideal(&self, a: usize) -> &Subset {
        &self.right_ideals[a]
    }

    pub fn left_ideal(&self, a: usize) -> &Subset {
        &self.left_ideals[a]
    }

    pub fn same_class(&self, a: usize, b: usize) -> bool {
        self.label[a] == self.label[b]
    }
}

/// `H_a`.
pub fn h_class(s: &FiniteSemigroup, a: usize) -> Result<Subset> {
    s.check_element(a)?;
    Ok(HClasses::compute(s).class_of(a).clone())
}

/// A maximal subgroup together with a certificate that it is a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalSubgroup {
    pub members: Subset,
    pub identity: usize,
    /// `(g, g^-1)` for every member, sorted by `g`.
    pub inverses: Vec<(usize, usize)>,
}

/// `H_e` for an idempotent `e`, certified as a group with identity `e`.
pub fn maximal_subgroup(s: &FiniteSemigroup, e: usize) -> Result<MaximalSubgroup> {
    s.check_element(e)?;
    if !s.is_idempotent(e) {
        return Err(Error::NotIdempotent(e));
    }
    let members = HClasses::compute(s).class_of(e).clone();
    certify_group(s, e, members)
}

pub(crate) fn certify_group(
    s: &FiniteSemigroup,
    e: usize,
    members: Subset,
) -> Result<MaximalSubgroup> {
    let fail = |what: String| Err(Error::Internal(format!("H_{e} is not a group: {what}")));
    if !members.contains(e) {
        return fail(format!("{e} not in its own class"));
    }
    for g in members.iter() {
        if s.mul(e, g) != g || s.mul(g, e) != g {
            return fail(format!("{e} is not an identity for {g}"));
        }
        for h in members.iter() {
            if !members.contains(s.mul(g, h)) {
                return fail(format!("{g}*{h} leaves the class"));
            }
        }
    }
    let mut inverses = Vec::with_capacity(members.len());
    for g in members.iter() {
        match members
            .iter()
            .find(|&h| s.mul(g, h) == e && s.mul(h, g) == e)
        {
            Some(h) => inverses.push((g, h)),
            None => return fail(format!("{g} has no inverse")),
        }
    }
    Ok(MaximalSubgroup {
        members,
        identity: e,
        inverses,
    })
}

/// Group of units of the local monoid `eXe`: an independent route to the
/// maximal subgroup at `e`, used to cross-check the H-class computation.
pub fn units_of_local_monoid(s: &FiniteSemigroup, e: usize) -> Subset {
    let n = s.len();
    let local: Vec<usize> = (0..n)
        .filter(|&x| s.mul(e, x) == x && s.mul(x, e) == x)
        .collect();
    Subset::from_iter(
        n,
        local.iter().copied().filter(|&g| {
            local
                .iter()
                .any(|&h| s.mul(g, h) == e && s.mul(h, g) == e)
        }),
    )
}

/// `H(X)`, the union of all maximal subgroups.
pub fn clifford_part(s: &FiniteSemigroup) -> Subset {
    clifford_part_from(s, &HClasses::compute(s))
}

pub fn clifford_part_from(s: &FiniteSemigroup, h: &HClasses) -> Subset {
    let mut out = Subset::empty(s.len());
    for e in idempotents(s).iter() {
        out.union_with(h.class_of(e));
    }
    out
}

/// `Z(X)`, `EZ(X)`, the ideal center and the central Clifford part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterStructures {
    pub center: Subset,
    pub central_idempotents: Subset,
    pub ideal_center: Subset,
    pub central_clifford_part: Subset,
}

pub fn center(s: &FiniteSemigroup) -> Subset {
    let n = s.len();
    Subset::from_predicate(n, |z| (0..n).all(|x| s.mul(x, z) == s.mul(z, x)))
}

pub fn center_structures(s: &FiniteSemigroup) -> Result<CenterStructures> {
    center_structures_from(s, &HClasses::compute(s))
}

pub fn center_structures_from(s: &FiniteSemigroup, h: &HClasses) -> Result<CenterStructures> {
    let n = s.len();
    let center = center(s);
    let central_idempotents = center.intersection(&idempotents(s));
    let ideal_center = Subset::from_iter(
        n,
        center
            .iter()
            .filter(|&z| (0..n).all(|x| center.contains(s.mul(z, x)))),
    );
    let mut central_clifford_part = Subset::empty(n);
    for e in central_idempotents.iter() {
        central_clifford_part.union_with(h.class_of(e));
    }
    let all = Subset::full(n);
    if !s.set_product(&ideal_center, &all).is_subset(&ideal_center)
        || !s.set_product(&all, &ideal_center).is_subset(&ideal_center)
    {
        return Err(Error::Internal("ideal center is not an ideal".into()));
    }
    if !s.is_subsemigroup(&central_clifford_part) {
        return Err(Error::Internal(
            "central Clifford part is not a subsemigroup".into(),
        ));
    }
    Ok(CenterStructures {
        center,
        central_idempotents,
        ideal_center,
        central_clifford_part,
    })
}

/// Which powers a root set quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootPower {
    Exactly(usize),
    /// Some power `x^k`, `k >= 1`.
    All,
}

/// `{x : x^n in A}`, or `{x : x^k in A for some k}` for [`RootPower::All`].
pub fn roots(s: &FiniteSemigroup, a: &Subset, power: RootPower) -> Result<Subset> {
    let n = s.len();
    match power {
        RootPower::Exactly(0) => Err(Error::BadParameter("root power must be >= 1".into())),
        RootPower::Exactly(k) => Ok(Subset::from_predicate(n, |x| a.contains(s.power(x, k)))),
        RootPower::All => Ok(Subset::from_predicate(n, |x| {
            s.monogenic(x).orbit.iter().any(|&p| a.contains(p))
        })),
    }
}

/// The map `pi` on the eventually-Clifford part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiData {
    pub domain: Subset,
    pub pi: Vec<Option<usize>>,
    /// Least `n` with `x^n` in `H_pi(x)`.
    pub witness_power: Vec<Option<usize>>,
}

impl PiData {
    pub fn get(&self, x: usize) -> Option<usize> {
        self.pi[x]
    }

    /// `pi^-1[T]` for a set `T` of idempotents.
    pub fn preimage(&self, targets: &Subset) -> Subset {
        Subset::from_iter(
            self.domain.universe(),
            self.domain
                .iter()
                .filter(|&x| self.pi[x].is_some_and(|e| targets.contains(e))),
        )
    }
}

pub fn pi_map(s: &FiniteSemigroup) -> Result<PiData> {
    pi_map_from(s, &HClasses::compute(s))
}

pub fn pi_map_from(s: &FiniteSemigroup, h: &HClasses) -> Result<PiData> {
    let n = s.len();
    let es = idempotents(s);
    // the idempotent of each H-class that contains one
    let mut class_idempotent = vec![None; h.classes().len()];
    for e in es.iter() {
        class_idempotent[h.label(e)] = Some(e);
    }
    let mut domain = Subset::empty(n);
    let mut pi = vec![None; n];
    let mut witness_power = vec![None; n];
    for x in 0..n {
        let orbit = s.monogenic(x).orbit;
        let mut found: Option<(usize, usize)> = None;
        for (k, &p) in orbit.iter().enumerate() {
            if let Some(e) = class_idempotent[h.label(p)] {
                match found {
                    None => found = Some((e, k + 1)),
                    Some((f, _)) if f != e => {
                        return Err(Error::Internal(format!(
                            "powers of {x} meet both H_{f} and H_{e}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        if let Some((e, k)) = found {
            domain.insert(x);
            pi[x] = Some(e);
            witness_power[x] = Some(k);
        }
    }
    Ok(PiData {
        domain,
        pi,
        witness_power,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundedExponent {
    /// Least `n` with `x^n` idempotent for every `x`.
    pub exponent: usize,
    pub is_band: bool,
    pub is_semilattice: bool,
}

pub fn bounded_exponent(s: &FiniteSemigroup) -> Result<BoundedExponent> {
    let mut max_index = 1u64;
    let mut lcm_period = 1u64;
    for x in s.elements() {
        let m = s.monogenic(x);
        max_index = max_index.max(m.index as u64);
        let p = m.period as u64;
        lcm_period = (lcm_period / gcd(lcm_period, p))
            .checked_mul(p)
            .ok_or(Error::BoundExceeded {
                what: "exponent lcm",
                size: usize::MAX,
                bound: u64::MAX as usize,
            })?;
    }
    // x^n is idempotent iff n >= index(x) and period(x) | n
    let exponent = max_index.div_ceil(lcm_period) * lcm_period;
    let is_band = s.elements().all(|x| s.is_idempotent(x));
    Ok(BoundedExponent {
        exponent: exponent as usize,
        is_band,
        is_semilattice: is_band && s.is_commutative().commutative,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn x8() -> FiniteSemigroup {
        families::example_main(8).unwrap()
    }

    #[test]
    fn idempotent_sets() {
        assert_eq!(idempotents(&families::cyclic_group(5).unwrap()).to_vec(), vec![0]);
        assert_eq!(idempotents(&x8()).to_vec(), vec![0, 2, 4, 6, 8]);
        let diamond = families::chain_semilattice(2)
            .unwrap()
            .direct_product(&families::chain_semilattice(2).unwrap())
            .unwrap();
        assert_eq!(idempotents(&diamond).len(), 4);
    }

    #[test]
    fn poset_statistics() {
        let p = idempotent_poset(&x8());
        assert_eq!(p.longest_chain, 2);
        assert_eq!(p.max_antichain, 4);
        assert_eq!(p.minimal_elements.to_vec(), vec![0]);
        assert!(p.leq(0, 6) && !p.leq(2, 4));

        for n in 1..6 {
            let p = idempotent_poset(&families::chain_semilattice(n).unwrap());
            assert_eq!(p.longest_chain, n);
            assert_eq!(p.max_antichain, 1);
        }
        let p = idempotent_poset(&families::free_semilattice(3).unwrap());
        assert_eq!(p.elements.len(), 7);
        assert_eq!(p.longest_chain, 3);
        assert_eq!(p.max_antichain, 3);
    }

    #[test]
    fn h_classes_of_examples() {
        let g = families::cyclic_group(6).unwrap();
        assert_eq!(h_class(&g, 4).unwrap(), Subset::full(6));
        assert_eq!(h_class(&x8(), 3).unwrap().to_vec(), vec![3]);
        assert_eq!(h_class(&x8(), 2).unwrap().to_vec(), vec![2]);
    }

    #[test]
    fn h_class_matches_principal_ideal_oracle() {
        // oracle: compare aX^1 and X^1a directly for each pair
        let s = families::example_main(9).unwrap();
        let n = s.len();
        let right = |a: usize| {
            let mut v: Vec<usize> = s.row(a).chain([a]).collect();
            v.sort();
            v.dedup();
            v
        };
        let left = |a: usize| {
            let mut v: Vec<usize> = (0..n).map(|x| s.mul(x, a)).chain([a]).collect();
            v.sort();
            v.dedup();
            v
        };
        for a in 0..n {
            let expected: Vec<usize> = (0..n)
                .filter(|&x| right(x) == right(a) && left(x) == left(a))
                .collect();
            assert_eq!(h_class(&s, a).unwrap().to_vec(), expected);
        }
    }

    #[test]
    fn maximal_subgroups() {
        let g = families::cyclic_group(4).unwrap();
        let m = maximal_subgroup(&g, 0).unwrap();
        assert_eq!(m.members.len(), 4);
        assert!(m.inverses.contains(&(1, 3)));
        for e in [0, 2, 4, 6, 8] {
            assert_eq!(maximal_subgroup(&x8(), e).unwrap().members.len(), 1);
        }
        assert!(matches!(
            maximal_subgroup(&x8(), 3),
            Err(Error::NotIdempotent(3))
        ));
        let c3z = families::cyclic_group(3).unwrap().adjoin_zero().unwrap();
        assert_eq!(maximal_subgroup(&c3z, 3).unwrap().members.to_vec(), vec![3]);
        assert_eq!(maximal_subgroup(&c3z, 0).unwrap().members.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn corrupted_class_fails_certificate() {
        let s = x8();
        let bad = Subset::from_iter(9, [2, 3]);
        assert!(matches!(certify_group(&s, 2, bad), Err(Error::Internal(_))));
    }

    #[test]
    fn clifford_parts() {
        assert_eq!(clifford_part(&families::cyclic_group(3).unwrap()).len(), 3);
        assert_eq!(clifford_part(&x8()).to_vec(), vec![0, 2, 4, 6, 8]);
        assert_eq!(clifford_part(&families::null_semigroup(3).unwrap()).to_vec(), vec![0]);
    }

    #[test]
    fn centers() {
        let c = center_structures(&x8()).unwrap();
        assert_eq!(c.center, Subset::full(9));
        assert_eq!(c.ideal_center, Subset::full(9));
        assert_eq!(c.central_idempotents.to_vec(), vec![0, 2, 4, 6, 8]);
        let lz = families::left_zero(2).unwrap();
        let c = center_structures(&lz).unwrap();
        assert!(c.center.is_empty() && c.ideal_center.is_empty());
        assert!(c.central_clifford_part.is_empty());
    }

    #[test]
    fn root_sets() {
        let s = x8();
        let e = idempotents(&s);
        assert_eq!(roots(&s, &e, RootPower::All).unwrap(), Subset::full(9));
        assert_eq!(
            roots(&s, &Subset::singleton(9, 2), RootPower::Exactly(2))
                .unwrap()
                .to_vec(),
            vec![2, 3]
        );
        assert!(roots(&s, &Subset::empty(9), RootPower::All).unwrap().is_empty());
    }

    #[test]
    fn pi_examples() {
        let p = pi_map(&x8()).unwrap();
        assert_eq!(p.domain, Subset::full(9));
        assert_eq!(p.get(3), Some(2));
        assert_eq!(p.witness_power[3], Some(2));
        for e in [0, 2, 4, 6, 8] {
            assert_eq!(p.get(e), Some(e));
            assert_eq!(p.witness_power[e], Some(1));
        }
        let g = families::cyclic_group(6).unwrap();
        let p = pi_map(&g).unwrap();
        assert!((0..6).all(|x| p.get(x) == Some(0) && p.witness_power[x] == Some(1)));
    }

    #[test]
    fn exponents() {
        assert_eq!(
            bounded_exponent(&families::chain_semilattice(4).unwrap()).unwrap(),
            BoundedExponent {
                exponent: 1,
                is_band: true,
                is_semilattice: true
            }
        );
        assert_eq!(bounded_exponent(&x8()).unwrap().exponent, 2);
        assert_eq!(bounded_exponent(&families::cyclic_group(4).unwrap()).unwrap().exponent, 4);
        // brute force oracle on a mixed example
        let s = families::monogenic(3, 4)
            .unwrap()
            .direct_product(&families::cyclic_group(6).unwrap())
            .unwrap();
        let brute = (1..100)
            .find(|&k| s.elements().all(|x| s.is_idempotent(s.power(x, k))))
            .unwrap();
        assert_eq!(bounded_exponent(&s).unwrap().exponent, brute);
    }
}
