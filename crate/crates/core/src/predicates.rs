//! Exact extremal statistics behind the closedness conditions, and the
//! viability checks.
//!
//! On a finite carrier every condition phrased with "infinite subset" holds
//! vacuously, so each one is reported as the size of the largest finite
//! witness instead; limit verdicts are drawn at the family level.

use serde::Serialize;

use crate::clique::max_clique;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::reflection::semilattice_reflection;
use crate::semigroup::FiniteSemigroup;
use crate::structure::{
    bounded_exponent, center_structures_from, certify_group, clifford_part_from, idempotent_poset,
    idempotents, HClasses,
};
use crate::subset::Subset;

/// One predicate with an optional counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl Flag {
    fn from_witness(witness: Option<Vec<usize>>) -> Self {
        Self {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// The viability family of conditions. `viable`, `e_up_central`,
/// `e_hypercentral` and `e_separated` are equivalent; `e_central` is
/// stronger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ViabilitySuite {
    pub viable: Flag,
    pub e_central: Flag,
    pub e_up_central: Flag,
    pub e_hypercentral: Flag,
    pub e_separated: Flag,
}

/// Computes the five flags and fails with [`Error::Internal`] if the four
/// equivalent ones disagree.
pub fn viability_suite(s: &FiniteSemigroup) -> Result<ViabilitySuite> {
    let n = s.len();
    let e = idempotents(s);
    let pairs = || (0..n).flat_map(|x| (0..n).map(move |y| (x, y)));

    let viable = pairs().find(|&(x, y)| {
        let (xy, yx) = (s.mul(x, y), s.mul(y, x));
        e.contains(xy) && e.contains(yx) && xy != yx
    });
    let e_central = e
        .iter()
        .flat_map(|f| (0..n).map(move |x| (f, x)))
        .find(|&(f, x)| s.mul(f, x) != s.mul(x, f));

    let reflection = semilattice_reflection(s)?;
    let q = &reflection.projection;
    let y = &reflection.semigroup;
    // x in ⇑f iff q(x) q(f) = q(f)
    let e_up_central = e
        .iter()
        .flat_map(|f| (0..n).map(move |x| (f, x)))
        .find(|&(f, x)| y.mul(q[x], q[f]) == q[f] && s.mul(f, x) != s.mul(x, f));
    let e_hypercentral = pairs().find(|&(x, y)| {
        let f = s.mul(x, y);
        e.contains(f) && (s.mul(x, f) != s.mul(f, x) || s.mul(y, f) != s.mul(f, y))
    });
    // distinct idempotents are separated by a homomorphism to 2 exactly
    // when they lie in different ⇕-classes
    let es = e.to_vec();
    let e_separated = es
        .iter()
        .enumerate()
        .flat_map(|(i, &f)| es[i + 1..].iter().map(move |&g| (f, g)))
        .find(|&(f, g)| q[f] == q[g]);

    let pair = |w: Option<(usize, usize)>| w.map(|(a, b)| vec![a, b]);
    let suite = ViabilitySuite {
        viable: Flag::from_witness(pair(viable)),
        e_central: Flag::from_witness(pair(e_central)),
        e_up_central: Flag::from_witness(pair(e_up_central)),
        e_hypercentral: Flag::from_witness(pair(e_hypercentral)),
        e_separated: Flag::from_witness(pair(e_separated)),
    };
    let four = [
        suite.viable.holds,
        suite.e_up_central.holds,
        suite.e_hypercentral.holds,
        suite.e_separated.holds,
    ];
    if four.iter().any(|&b| b != four[0]) || (suite.e_central.holds && !four[0]) {
        return Err(Error::Internal(format!(
            "viability conditions disagree on a semigroup of order {n}: {suite:?}"
        )));
    }
    Ok(suite)
}

/// Size and lexicographically smallest witness of an extremal set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extremal {
    pub size: usize,
    pub witness: Vec<usize>,
}

/// Largest `C` with `xy ∈ {x, y}` for all `x, y ∈ C`.
///
/// Taking `x = y` forces every member to be idempotent, so the search runs
/// over `E(X)`. For commutative semigroups the condition says the members
/// form a chain in the natural order, which is solved exactly without the
/// clique search.
pub fn chain_stat(s: &FiniteSemigroup) -> Result<Extremal> {
    let e = idempotents(s).to_vec();
    let ok = |x: usize, y: usize| {
        let (xy, yx) = (s.mul(x, y), s.mul(y, x));
        (xy == x || xy == y) && (yx == x || yx == y)
    };
    if s.is_commutative().commutative {
        return Ok(longest_chain_witness(s, &e));
    }
    let witness = clique_or_complete(&e, ok)?;
    Ok(Extremal {
        size: witness.len(),
        witness,
    })
}

/// Lexicographically smallest longest chain in the natural order of a
/// commutative semigroup's idempotents.
fn longest_chain_witness(s: &FiniteSemigroup, e: &[usize]) -> Extremal {
    if e.is_empty() {
        return Extremal {
            size: 0,
            witness: Vec::new(),
        };
    }
    let below = |f: usize, g: usize| f != g && s.mul(f, g) == f;
    // longest[i]: longest chain starting at e[i] and going up
    let mut order: Vec<usize> = (0..e.len()).collect();
    let ups = |i: usize| e.iter().filter(|&&g| below(e[i], g)).count();
    order.sort_by_key(|&i| ups(i));
    let mut longest = vec![1usize; e.len()];
    for &i in &order {
        longest[i] = 1 + (0..e.len())
            .filter(|&j| below(e[i], e[j]))
            .map(|j| longest[j])
            .max()
            .unwrap_or(0);
    }
    let size = *longest.iter().max().unwrap();
    // a chain, sorted by index, is lexicographically smallest when built
    // greedily from the smallest admissible element; chains are cliques of
    // the comparability graph, so reuse the exact search for the tie-break
    let comparable = |x: usize, y: usize| below(x, y) || below(y, x);
    let witness = if e.len() <= 64 {
        max_clique(e, comparable, 64).expect("within cap")
    } else {
        // fall back to a greedy descent from a top element of a longest chain
        let mut chain = Vec::new();
        let mut cur = (0..e.len()).find(|&i| longest[i] == size);
        while let Some(i) = cur {
            chain.push(e[i]);
            cur = (0..e.len()).find(|&j| below(e[i], e[j]) && longest[j] == longest[i] - 1);
        }
        chain.sort_unstable();
        chain
    };
    debug_assert_eq!(witness.len(), size);
    Extremal { size, witness }
}

/// Largest `A` with `AA` a singleton; also reports that single product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NullSet {
    pub size: usize,
    pub witness: Vec<usize>,
    pub value: usize,
}

pub fn max_null_set(s: &FiniteSemigroup) -> Result<NullSet> {
    let n = s.len();
    let mut best: Option<NullSet> = None;
    for c in 0..n {
        let verts: Vec<usize> = (0..n).filter(|&x| s.mul(x, x) == c).collect();
        if verts.is_empty() || best.as_ref().is_some_and(|b| verts.len() < b.size) {
            continue;
        }
        let clique = clique_or_complete(&verts, |x, y| s.mul(x, y) == c && s.mul(y, x) == c)?;
        let better = match &best {
            None => true,
            Some(b) => clique.len() > b.size || (clique.len() == b.size && clique < b.witness),
        };
        if better {
            best = Some(NullSet {
                size: clique.len(),
                witness: clique,
                value: c,
            });
        }
    }
    Ok(best.expect("every element squares to something"))
}

/// Largest `A ⊆ X \ H(X)` with `AA ⊆ H(X)`.
pub fn max_clifford_null_set(s: &FiniteSemigroup) -> Result<Extremal> {
    max_clifford_null_set_with(s, &clifford_part_from(s, &HClasses::compute(s)))
}

fn max_clifford_null_set_with(s: &FiniteSemigroup, h: &Subset) -> Result<Extremal> {
    let verts: Vec<usize> = h
        .complement()
        .iter()
        .filter(|&x| h.contains(s.mul(x, x)))
        .collect();
    let witness = clique_or_complete(&verts, |x, y| h.contains(s.mul(x, y)) && h.contains(s.mul(y, x)))?;
    Ok(Extremal {
        size: witness.len(),
        witness,
    })
}

/// Exact clique search, except that a complete graph of any size is
/// answered directly.
fn clique_or_complete(verts: &[usize], adjacent: impl Fn(usize, usize) -> bool) -> Result<Vec<usize>> {
    let cap = Limits::global().clique_cap;
    if verts.len() > cap {
        let complete = verts
            .iter()
            .enumerate()
            .all(|(i, &a)| verts[i + 1..].iter().all(|&b| adjacent(a, b)));
        if complete {
            return Ok(verts.to_vec());
        }
    }
    max_clique(verts, adjacent, cap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupStat {
    pub max_subgroup_size: usize,
    /// Largest exponent of a maximal subgroup.
    pub max_subgroup_exponent: usize,
    pub is_unipotent: bool,
    pub idempotent_count: usize,
    /// A largest maximal subgroup (the one at the smallest idempotent).
    pub witness: Vec<usize>,
}

pub fn group_stat(s: &FiniteSemigroup) -> Result<GroupStat> {
    group_stat_with(s, &HClasses::compute(s))
}

fn group_stat_with(s: &FiniteSemigroup, h: &HClasses) -> Result<GroupStat> {
    let e = idempotents(s);
    let mut best: Option<Subset> = None;
    let mut max_exp = 1usize;
    for f in e.iter() {
        let group = certify_group(s, f, h.class_of(f).clone())?;
        let mut exp = 1usize;
        for g in group.members.iter() {
            let order = s.monogenic(g).period;
            exp = lcm(exp, order);
        }
        max_exp = max_exp.max(exp);
        if best.as_ref().is_none_or(|b| group.members.len() > b.len()) {
            best = Some(group.members);
        }
    }
    let best = best.expect("finite semigroups have idempotents");
    Ok(GroupStat {
        max_subgroup_size: best.len(),
        max_subgroup_exponent: max_exp,
        is_unipotent: e.len() == 1,
        idempotent_count: e.len(),
        witness: best.to_vec(),
    })
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CliffordStats {
    pub is_clifford: bool,
    pub clifford_size: usize,
    pub clifford_complement_size: usize,
    pub is_eventually_clifford: bool,
    pub is_periodic: bool,
}

pub fn clifford_stats(s: &FiniteSemigroup) -> Result<CliffordStats> {
    clifford_stats_with(s, &clifford_part_from(s, &HClasses::compute(s)))
}

fn clifford_stats_with(s: &FiniteSemigroup, h: &Subset) -> Result<CliffordStats> {
    let e = idempotents(s);
    let orbits: Vec<Vec<usize>> = s.elements().map(|x| s.monogenic(x).orbit).collect();
    let is_periodic = orbits.iter().all(|o| o.iter().any(|&p| e.contains(p)));
    if !is_periodic {
        return Err(Error::Internal("finite semigroup with a non-periodic element".into()));
    }
    Ok(CliffordStats {
        is_clifford: h.len() == s.len(),
        clifford_size: h.len(),
        clifford_complement_size: s.len() - h.len(),
        is_eventually_clifford: orbits.iter().all(|o| o.iter().any(|&p| h.contains(p))),
        is_periodic,
    })
}

/// Sizes of central substructures and the center's own statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CenterStats {
    pub center_size: usize,
    pub central_idempotents: usize,
    pub ideal_center_size: usize,
    pub central_clifford_size: usize,
    pub center_chain_stat: usize,
    pub center_max_null_set_size: usize,
    pub center_max_subgroup_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    pub bounded_exponent: usize,
    pub is_band: bool,
    pub is_semilattice: bool,
    /// Longest chain of idempotents in the natural order.
    pub longest_e_chain: usize,
    /// Largest product-chain (see [`chain_stat`]).
    pub chain_stat: usize,
    pub max_subgroup_size: usize,
    pub max_subgroup_exponent: usize,
    pub max_null_set_size: usize,
    pub max_null_set_value: usize,
    pub max_clifford_null_set_size: usize,
    pub clifford_size: usize,
    pub clifford_complement_size: usize,
    pub is_clifford: bool,
    pub is_eventually_clifford: bool,
    pub is_periodic: bool,
    pub is_unipotent: bool,
    pub idempotent_count: usize,
    pub center: CenterStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witnesses {
    pub chain: Vec<usize>,
    pub null_set: Vec<usize>,
    pub clifford_null_set: Vec<usize>,
    pub max_subgroup: Vec<usize>,
    pub clifford_part: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub size: usize,
    pub commutative: bool,
    pub stats: Stats,
    pub viability: ViabilitySuite,
    pub witnesses: Witnesses,
}

/// Every statistic with re-validated witnesses.
pub fn classify(s: &FiniteSemigroup) -> Result<AnalysisReport> {
    let h = HClasses::compute(s);
    let hx = clifford_part_from(s, &h);
    let exponent = bounded_exponent(s)?;
    let poset = idempotent_poset(s);
    let chain = chain_stat(s)?;
    let null = max_null_set(s)?;
    let cnull = max_clifford_null_set_with(s, &hx)?;
    let groups = group_stat_with(s, &h)?;
    let cliff = clifford_stats_with(s, &hx)?;
    let viability = viability_suite(s)?;
    let center = center_stats(s, &h)?;

    revalidate(s, &hx, &chain, &null, &cnull)?;

    Ok(AnalysisReport {
        size: s.len(),
        commutative: s.is_commutative().commutative,
        stats: Stats {
            bounded_exponent: exponent.exponent,
            is_band: exponent.is_band,
            is_semilattice: exponent.is_semilattice,
            longest_e_chain: poset.longest_chain,
            chain_stat: chain.size,
            max_subgroup_size: groups.max_subgroup_size,
            max_subgroup_exponent: groups.max_subgroup_exponent,
            max_null_set_size: null.size,
            max_null_set_value: null.value,
            max_clifford_null_set_size: cnull.size,
            clifford_size: cliff.clifford_size,
            clifford_complement_size: cliff.clifford_complement_size,
            is_clifford: cliff.is_clifford,
            is_eventually_clifford: cliff.is_eventually_clifford,
            is_periodic: cliff.is_periodic,
            is_unipotent: groups.is_unipotent,
            idempotent_count: groups.idempotent_count,
            center,
        },
        viability,
        witnesses: Witnesses {
            chain: chain.witness,
            null_set: null.witness,
            clifford_null_set: cnull.witness,
            max_subgroup: groups.witness,
            clifford_part: hx.to_vec(),
        },
    })
}

fn center_stats(s: &FiniteSemigroup, h: &HClasses) -> Result<CenterStats> {
    let c = center_structures_from(s, h)?;
    let (chain, null, group) = if c.center.is_empty() {
        (0, 0, 0)
    } else {
        let (z, _) = s.restrict(&c.center)?;
        (
            chain_stat(&z)?.size,
            max_null_set(&z)?.size,
            group_stat(&z)?.max_subgroup_size,
        )
    };
    Ok(CenterStats {
        center_size: c.center.len(),
        central_idempotents: c.central_idempotents.len(),
        ideal_center_size: c.ideal_center.len(),
        central_clifford_size: c.central_clifford_part.len(),
        center_chain_stat: chain,
        center_max_null_set_size: null,
        center_max_subgroup_size: group,
    })
}

fn revalidate(
    s: &FiniteSemigroup,
    h: &Subset,
    chain: &Extremal,
    null: &NullSet,
    cnull: &Extremal,
) -> Result<()> {
    let bad = |what: &str| Err(Error::Internal(format!("{what} witness does not re-validate")));
    let c = &chain.witness;
    if c.len() != chain.size
        || !c.iter().all(|&x| c.iter().all(|&y| {
            let p = s.mul(x, y);
            p == x || p == y
        }))
    {
        return bad("chain");
    }
    let a = &null.witness;
    if a.len() != null.size || !a.iter().all(|&x| a.iter().all(|&y| s.mul(x, y) == null.value)) {
        return bad("null set");
    }
    let b = &cnull.witness;
    if b.len() != cnull.size
        || b.iter().any(|&x| h.contains(x))
        || !b.iter().all(|&x| b.iter().all(|&y| h.contains(s.mul(x, y))))
    {
        return bad("Clifford null set");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    /// Brute-force oracles over all subsets.
    fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
        (0u32..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
    }

    fn brute_chain(s: &FiniteSemigroup) -> usize {
        subsets(s.len())
            .filter(|c| {
                c.iter()
                    .all(|&x| c.iter().all(|&y| [x, y].contains(&s.mul(x, y))))
            })
            .map(|c| c.len())
            .max()
            .unwrap()
    }

    fn brute_null(s: &FiniteSemigroup) -> usize {
        subsets(s.len())
            .filter(|a| {
                !a.is_empty() && {
                    let v = s.mul(a[0], a[0]);
                    a.iter().all(|&x| a.iter().all(|&y| s.mul(x, y) == v))
                }
            })
            .map(|a| a.len())
            .max()
            .unwrap()
    }

    fn brute_cnull(s: &FiniteSemigroup) -> usize {
        let h = crate::structure::clifford_part(s);
        subsets(s.len())
            .filter(|a| {
                a.iter().all(|&x| !h.contains(x))
                    && a.iter().all(|&x| a.iter().all(|&y| h.contains(s.mul(x, y))))
            })
            .map(|a| a.len())
            .max()
            .unwrap()
    }

    #[test]
    fn x8_and_x16_stats() {
        for n in [8, 16] {
            let r = classify(&families::example_main(n).unwrap()).unwrap();
            assert_eq!(r.stats.bounded_exponent, 2);
            assert_eq!(r.stats.chain_stat, 2);
            assert_eq!(r.stats.max_subgroup_size, 1);
            assert_eq!(r.stats.max_null_set_size, 2);
            assert_eq!(r.stats.max_clifford_null_set_size, 2);
            assert_eq!(r.stats.clifford_size, n / 2 + 1);
        }
        let r = classify(&families::example_main(8).unwrap()).unwrap();
        assert_eq!(r.witnesses.null_set, vec![0, 1]);
        assert_eq!(r.witnesses.chain, vec![0, 2]);
        assert_eq!(r.witnesses.clifford_null_set, vec![1, 3]);
        assert_eq!(r.stats.clifford_complement_size, 4);
    }

    #[test]
    fn cyclic_four_stats() {
        let r = classify(&families::cyclic_group(4).unwrap()).unwrap();
        assert_eq!(
            (
                r.stats.bounded_exponent,
                r.stats.chain_stat,
                r.stats.max_subgroup_size,
                r.stats.max_null_set_size,
                r.stats.max_clifford_null_set_size
            ),
            (4, 1, 4, 1, 0)
        );
        assert!(r.stats.is_unipotent && r.stats.is_clifford);
    }

    #[test]
    fn trivial_stats_are_minimal() {
        let r = classify(&families::trivial()).unwrap();
        assert_eq!(r.stats.bounded_exponent, 1);
        assert_eq!(r.stats.chain_stat, 1);
        assert_eq!(r.stats.max_null_set_size, 1);
        assert_eq!(r.stats.max_clifford_null_set_size, 0);
        assert_eq!(r.stats.clifford_complement_size, 0);
    }

    #[test]
    fn standard_examples() {
        for n in 1..6 {
            assert_eq!(chain_stat(&families::chain_semilattice(n).unwrap()).unwrap().size, n);
        }
        assert_eq!(chain_stat(&families::antichain_with_bottom(5).unwrap()).unwrap().size, 2);
        assert_eq!(max_null_set(&families::null_semigroup(5).unwrap()).unwrap().size, 5);
        let big_null = families::null_semigroup(100).unwrap();
        assert_eq!(max_null_set(&big_null).unwrap().size, 100);
        assert_eq!(group_stat(&families::cyclic_group(6).unwrap()).unwrap().max_subgroup_size, 6);
        let k4z = families::cyclic_group(2)
            .unwrap()
            .direct_product(&families::cyclic_group(2).unwrap())
            .unwrap()
            .adjoin_zero()
            .unwrap();
        let g = group_stat(&k4z).unwrap();
        assert_eq!((g.max_subgroup_size, g.max_subgroup_exponent), (4, 2));
        let band = families::left_zero(3).unwrap();
        assert!(clifford_stats(&band).unwrap().is_clifford);
    }

    #[test]
    fn quotient_family_stats() {
        for n in 4..=16 {
            let q = families::example_main_quotients(n).unwrap();
            let y = &q.mod_i.semigroup;
            let c = max_clifford_null_set(y).unwrap();
            assert_eq!(c.size, (n - 1) / 2);
            let odds: Vec<usize> = (3..=n).step_by(2).map(|x| q.mod_i.projection[x]).collect();
            assert_eq!(c.witness, odds);
            let j = &q.mod_j.semigroup;
            assert_eq!(max_null_set(j).unwrap().size, j.len());
        }
    }

    #[test]
    fn viability_examples() {
        let v = viability_suite(&families::example_main(8).unwrap()).unwrap();
        assert!(v.viable.holds && v.e_central.holds && v.e_separated.holds);
        let v = viability_suite(&families::left_zero(2).unwrap()).unwrap();
        assert!(!v.viable.holds && !v.e_separated.holds && !v.e_central.holds);
        assert!(!v.e_up_central.holds && !v.e_hypercentral.holds);
        assert_eq!(v.viable.witness, Some(vec![0, 1]));
    }

    #[test]
    fn stats_match_brute_force_on_corpus() {
        let corpus = families::exhaustive_corpus(4, Default::default()).unwrap();
        for s in corpus.iter().chain([
            &families::example_main(9).unwrap(),
            &families::example_main_quotients(9).unwrap().mod_i.semigroup,
            &families::monogenic(3, 2).unwrap().adjoin_zero().unwrap(),
        ]) {
            let r = classify(s).unwrap();
            assert_eq!(r.stats.chain_stat, brute_chain(s), "{s:?}");
            assert_eq!(r.stats.max_null_set_size, brute_null(s), "{s:?}");
            assert_eq!(r.stats.max_clifford_null_set_size, brute_cnull(s), "{s:?}");
            if r.stats.is_semilattice {
                assert_eq!(r.stats.chain_stat, r.stats.longest_e_chain);
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let s = families::example_main(12).unwrap();
        let a = serde_json::to_string(&classify(&s).unwrap()).unwrap();
        let b = serde_json::to_string(&classify(&s).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("{\"size\":13,\"commutative\":true,\"stats\":{\"boundedExponent\":2"));
    }
}
