//! Suites that check the classical structural lemmas on concrete tables.
//!
//! Every check is a statement that must hold on every finite semigroup (or
//! on every viable one), so a single failure points at a bug in the
//! routines that computed the ingredients. Instances come from the
//! exhaustive small-order corpus, the parameterized families and seeded
//! random compositions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{self, exhaustive_corpus, parse_family, random_composition, CorpusOptions};
use crate::predicates::viability_suite;
use crate::reflection::{binary_quasiorder, homs_to_two_brute_force, QuasiOrder};
use crate::semigroup::FiniteSemigroup;
use crate::sgp;
use crate::structure::{
    center_structures_from, certify_group, clifford_part_from, idempotent_poset, idempotents, pi_map_from,
    units_of_local_monoid, HClasses,
};
use crate::subset::Subset;
use crate::topology::{
    self, ebase_or_truncated, generate_topology, is_regular, shift_subsets_closed, shift_subsets_closed_brute_force,
    topology_checks, validate_ebase, BaseKind, ItemOutcome, LAMB_ITEMS,
};

/// Counts for one check. `checked` counts every tuple examined, vacuous
/// ones included, so `checked = passed + failed + vacuous`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Tally {
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub vacuous: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(witness());
            }
        }
    }

    pub fn vacuous(&mut self) {
        self.checked += 1;
        self.vacuous += 1;
    }

    pub fn record(&mut self, outcome: &ItemOutcome, context: &str) {
        match outcome {
            ItemOutcome::Pass => self.check(true, String::new),
            ItemOutcome::Fail { witness } => self.check(false, || format!("{context}{witness}")),
            ItemOutcome::Vacuous => self.vacuous(),
        }
    }

    /// Adds `other`, keeping the earlier first failure.
    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.passed += other.passed;
        self.failed += other.failed;
        self.vacuous += other.vacuous;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

pub type Tallies = BTreeMap<String, Tally>;

fn tally<'a>(t: &'a mut Tallies, key: &str) -> &'a mut Tally {
    t.entry(key.to_string()).or_default()
}

/// Ingredients the suite checks, computed once per instance. Fields are
/// public so a test can swap in a corrupted H-relation.
#[derive(Debug, Clone)]
pub struct Structures {
    pub h: HClasses,
    pub quasiorder: QuasiOrder,
}

impl Structures {
    pub fn compute(s: &FiniteSemigroup) -> Result<Self> {
        Ok(Self {
            h: HClasses::compute(s),
            quasiorder: binary_quasiorder(s)?,
        })
    }
}

pub fn check_instance(s: &FiniteSemigroup) -> Result<Tallies> {
    check_instance_with(s, &Structures::compute(s)?)
}

/// Runs every structural check against the given ingredients.
pub fn check_instance_with(s: &FiniteSemigroup, st: &Structures) -> Result<Tallies> {
    let mut t = Tallies::new();
    let n = s.len();
    let q = &st.quasiorder;
    let h = &st.h;
    let es = idempotents(s);

    // the binary quasiorder
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let c = tally(&mut t, "quasiorder-translation");
                if q.leq(x, y) {
                    c.check(
                        q.leq(s.mul(x, z), s.mul(y, z)) && q.leq(s.mul(z, x), s.mul(z, y)),
                        || format!("x={x} y={y} z={z}"),
                    );
                } else {
                    c.vacuous();
                }
            }
            let (xy, yx) = (s.mul(x, y), s.mul(y, x));
            tally(&mut t, "quasiorder-commutation").check(q.leq(xy, yx) && q.leq(yx, xy), || format!("x={x} y={y}"));
            tally(&mut t, "quasiorder-product-below").check(q.leq(xy, x) && q.leq(xy, y), || format!("x={x} y={y}"));
        }
        let xx = s.mul(x, x);
        tally(&mut t, "quasiorder-square").check(q.leq(x, xx) && q.leq(xx, x), || format!("x={x}"));
    }

    // maximal subgroups, cross-checked against the units of eXe
    for e in es.iter() {
        let members = h.class_of(e).clone();
        let units = units_of_local_monoid(s, e);
        tally(&mut t, "h-class-is-unit-group").check(
            members == units && certify_group(s, e, members.clone()).is_ok(),
            || format!("e={e}: class {:?} vs units {:?}", members.to_vec(), units.to_vec()),
        );
    }
    // an element lies in a subgroup iff it generates a cyclic group
    let clifford = clifford_part_from(s, h);
    let cyclic = Subset::from_predicate(n, |x| s.monogenic(x).index == 1);
    tally(&mut t, "clifford-part").check(clifford == cyclic && es.is_subset(&clifford), || {
        format!("{:?} vs {:?}", clifford.to_vec(), cyclic.to_vec())
    });
    for x in clifford.iter() {
        for y in clifford.iter() {
            let c = tally(&mut t, "commuting-clifford-product");
            if s.mul(x, y) == s.mul(y, x) {
                c.check(clifford.contains(s.mul(x, y)), || format!("x={x} y={y}"));
            } else {
                c.vacuous();
            }
        }
    }
    for e in es.iter() {
        let he = h.class_of(e);
        let roots = Subset::from_predicate(n, |x| s.monogenic(x).orbit.iter().any(|&p| he.contains(p)));
        tally(&mut t, "group-absorbs-roots").check(
            s.set_product(&roots, he).is_subset(he) && s.set_product(he, &roots).is_subset(he),
            || format!("e={e}"),
        );
    }
    let centers = center_structures_from(s, h);
    tally(&mut t, "center-structures").check(centers.is_ok(), || format!("{:?}", centers.as_ref().err()));

    // powers that reach a maximal subgroup stay there
    let group_of = |p: usize| es.iter().find(|&e| h.class_of(e).contains(p));
    for x in 0..n {
        let orbit = s.monogenic(x).orbit;
        let c = tally(&mut t, "powers-stay-in-group");
        match orbit.iter().position(|&p| group_of(p).is_some()) {
            Some(k) => {
                let e = group_of(orbit[k]);
                c.check(orbit[k..].iter().all(|&p| group_of(p) == e), || format!("x={x}"));
            }
            None => c.vacuous(),
        }
    }
    let pi = match pi_map_from(s, h) {
        Ok(pi) => pi,
        Err(err) => {
            tally(&mut t, "pi-well-defined").check(false, || err.to_string());
            return finish(s, st, t);
        }
    };
    tally(&mut t, "pi-well-defined").check(true, String::new);
    if let Ok(cs) = &centers {
        for z in cs.center.iter() {
            let c = tally(&mut t, "central-pi");
            match pi.get(z) {
                Some(e) => c.check(cs.central_idempotents.contains(e), || format!("z={z} pi={e}")),
                None => c.vacuous(),
            }
        }
    }

    // statements about viable semigroups
    let viability = viability_suite(s);
    tally(&mut t, "viability-agreement").check(viability.is_ok(), || format!("{:?}", viability.as_ref().err()));
    let viable = viability.map(|v| v.viable.holds).unwrap_or(false);
    let poset = idempotent_poset(s);
    for e in es.iter() {
        if !viable {
            for key in ["pi-upper-preimage", "pi-lower-preimage", "idempotent-upper", "idempotent-lower", "group-ideal-in-upper-set"] {
                tally(&mut t, key).vacuous();
            }
            continue;
        }
        let up = q.up(e);
        let down = q.down(e);
        tally(&mut t, "pi-upper-preimage").check(pi.preimage(poset.up(e)) == pi.domain.intersection(up), || {
            format!("e={e}")
        });
        tally(&mut t, "pi-lower-preimage").check(pi.preimage(poset.down(e)) == pi.domain.intersection(down), || {
            format!("e={e}")
        });
        tally(&mut t, "idempotent-upper").check(*poset.up(e) == es.intersection(up), || format!("e={e}"));
        tally(&mut t, "idempotent-lower").check(*poset.down(e) == es.intersection(down), || format!("e={e}"));
        let he = h.class_of(e);
        tally(&mut t, "group-ideal-in-upper-set").check(
            he.is_subset(up)
                && s.set_product(up, he).is_subset(he)
                && s.set_product(he, up).is_subset(he)
                && up.iter().all(|x| s.mul(e, x) == s.mul(x, e)),
            || format!("e={e}"),
        );
    }
    finish(s, st, t)
}

/// Oracle comparison for the quasiorder, on carriers small enough to list
/// every subset.
fn finish(s: &FiniteSemigroup, st: &Structures, mut t: Tallies) -> Result<Tallies> {
    let c = tally(&mut t, "reflection-oracle");
    match homs_to_two_brute_force(s) {
        Ok(homs) => {
            let oracle = QuasiOrder::from_homs(s.len(), &homs);
            c.check(oracle == st.quasiorder, || "quasiorders differ".into());
        }
        Err(Error::BoundExceeded { .. }) => c.vacuous(),
        Err(err) => return Err(err),
    }
    Ok(t)
}

/// Shift-lemma items for every central idempotent, with `U, V, W` drawn
/// from both e-bases.
pub fn lamb_instance(s: &FiniteSemigroup) -> Result<Tallies> {
    let mut t = Tallies::new();
    let ez = center_structures_from(s, &HClasses::compute(s))?.central_idempotents;
    for e in ez.iter() {
        let mut sets = Vec::new();
        for kind in [BaseKind::H, BaseKind::Z] {
            sets.extend(ebase_or_truncated(s, e, kind, 12)?.0.family);
        }
        sets.sort_by(|a, b| a.lex_cmp(b));
        sets.dedup();
        for (key, x) in LAMB_ITEMS.iter().zip(topology::lamb_suite(s, e, &sets)?) {
            tally(&mut t, key).merge(x);
        }
    }
    Ok(t)
}

/// Largest e-base audited member by member in the topology sweep. Larger
/// families fall back to singleton sets `F`, which keeps the least member
/// and hence the generated topology.
const TOPOLOGY_MEMBER_CAP: usize = 256;

/// Audits both e-bases at every central idempotent and the topologies
/// they generate.
pub fn topology_instance(s: &FiniteSemigroup) -> Result<Tallies> {
    let mut t = Tallies::new();
    let ez = center_structures_from(s, &HClasses::compute(s))?.central_idempotents;
    for e in ez.iter() {
        for kind in [BaseKind::H, BaseKind::Z] {
            let ctx = || format!("e={e} base={kind}");
            let (base, truncated) = ebase_or_truncated(s, e, kind, TOPOLOGY_MEMBER_CAP)?;
            let c = tally(&mut t, "ebase-full-enumeration");
            if truncated {
                c.vacuous();
            } else {
                c.check(true, String::new);
            }
            let valid = validate_ebase(s, &base);
            tally(&mut t, "ebase-valid").check(valid.valid, || format!("{} {:?}", ctx(), valid.violation));
            let regular = is_regular(s, &base);
            tally(&mut t, "ebase-regular").check(regular.regular, || format!("{} b={:?}", ctx(), regular.witness));
            let topo = match generate_topology(s, &base) {
                Ok(topo) => {
                    tally(&mut t, "topology-generated").check(true, String::new);
                    topo
                }
                Err(err) => {
                    tally(&mut t, "topology-generated").check(false, || format!("{} {err}", ctx()));
                    continue;
                }
            };
            let flags = topology_checks(s, &topo);
            tally(&mut t, "topology-semigroup").check(flags.is_top_semigroup, || {
                format!("{} at {:?}", ctx(), flags.top_semigroup_witness)
            });
            tally(&mut t, "topology-t0").check(flags.is_t0, ctx);
            tally(&mut t, "topology-non-isolated-discrete").check(flags.non_isolated_discrete, ctx);
            if !regular.regular {
                for key in ["topology-shift-subsets-closed", "topology-regular-discrete", "shift-closed-oracle"] {
                    tally(&mut t, key).vacuous();
                }
                continue;
            }
            for b in s.elements() {
                let fast = shift_subsets_closed(s, &topo, e, b);
                tally(&mut t, "topology-shift-subsets-closed").check(fast, || format!("{} b={b}", ctx()));
                let c = tally(&mut t, "shift-closed-oracle");
                match shift_subsets_closed_brute_force(s, &topo, e, b) {
                    Ok(slow) => c.check(slow == fast, || format!("{} b={b}", ctx())),
                    Err(_) => c.vacuous(),
                }
            }
            // a finite Hausdorff space is discrete
            tally(&mut t, "topology-regular-discrete").check(flags.is_discrete && flags.zero_dimensional, ctx);
        }
    }
    Ok(t)
}

/// A named corpus member.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub semigroup: FiniteSemigroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteOptions {
    /// Exhaustive corpus up to this order.
    pub max_order: usize,
    pub commutative_only: bool,
    /// Largest family parameter.
    pub family_n_max: usize,
    pub random_count: usize,
    pub seed: u64,
    /// Largest carrier for the shift-lemma sweep.
    pub lamb_n_max: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            max_order: 4,
            commutative_only: false,
            family_n_max: 24,
            random_count: 32,
            seed: 0,
            lamb_n_max: 10,
        }
    }
}

const CORPUS_FAMILIES: [&str; 15] = [
    "example-main",
    "example-main-mod-i",
    "example-main-mod-j",
    "chain",
    "antichain-bottom",
    "free-semilattice",
    "cyclic",
    "monogenic-index:1",
    "monogenic-index:3",
    "monogenic-period:1",
    "monogenic-period:3",
    "null",
    "left-zero",
    "right-zero",
    "chain*cyclic",
];

/// Largest carrier taken from the families.
const FAMILY_MAX_CARRIER: usize = 32;

/// Exhaustive small semigroups, family members and random compositions,
/// in a fixed order.
pub fn corpus(opts: &SuiteOptions) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    let small = exhaustive_corpus(
        opts.max_order,
        CorpusOptions {
            commutative_only: opts.commutative_only,
            allow_order_five: opts.max_order >= 5,
        },
    )?;
    for (i, s) in small.into_iter().enumerate() {
        out.push(Instance {
            label: format!("order{}#{i}", s.len()),
            semigroup: s,
        });
    }
    for name in CORPUS_FAMILIES {
        let kind = parse_family(name)?;
        for n in kind.min_n().max(1)..=opts.family_n_max {
            let s = kind.build(n)?;
            if s.len() > FAMILY_MAX_CARRIER {
                break;
            }
            out.push(Instance {
                label: format!("{name}:{n}"),
                semigroup: s,
            });
        }
    }
    out.push(Instance {
        label: "trivial".into(),
        semigroup: families::trivial(),
    });
    for i in 0..opts.random_count as u64 {
        let seed = opts.seed.wrapping_add(i);
        out.push(Instance {
            label: format!("random:{seed}"),
            semigroup: random_composition(seed, 3, 24)?,
        });
    }
    if opts.commutative_only {
        out.retain(|i| i.semigroup.is_commutative().commutative);
    }
    Ok(out)
}

/// Smallest failing instance for a check, with a reproducing table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureCase {
    pub check: String,
    pub instance: String,
    pub detail: String,
    pub sgp: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub instances: usize,
    pub tallies: Tallies,
    pub failures: Vec<FailureCase>,
}

impl SuiteReport {
    pub fn failed(&self) -> u64 {
        self.tallies.values().map(|t| t.failed).sum()
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.instances = self.instances.max(other.instances);
        for (k, v) in other.tallies {
            self.tallies.entry(k).or_default().merge(v);
        }
        self.failures.extend(other.failures);
        self.failures.sort_by(|a, b| a.check.cmp(&b.check));
    }
}

/// Runs `check` on every instance in parallel and merges in corpus order.
/// Errors inside an instance count as failures of `instance-error`, except
/// bound overruns, which are counted as skipped.
pub fn run_suite(instances: &[Instance], check: impl Fn(&FiniteSemigroup) -> Result<Tallies> + Sync) -> SuiteReport {
    let results: Vec<Tallies> = instances
        .par_iter()
        .map(|inst| match check(&inst.semigroup) {
            Ok(t) => t,
            Err(err) => {
                let mut t = Tallies::new();
                match err {
                    Error::BoundExceeded { .. } => tally(&mut t, "instance-skipped").vacuous(),
                    other => tally(&mut t, "instance-error").check(false, || other.to_string()),
                }
                t
            }
        })
        .collect();
    let mut tallies = Tallies::new();
    let mut smallest: BTreeMap<String, (usize, usize, String)> = BTreeMap::new();
    for (i, t) in results.into_iter().enumerate() {
        for (k, v) in t {
            if let Some(detail) = v.first_failure.clone() {
                let size = instances[i].semigroup.len();
                let entry = smallest.entry(k.clone()).or_insert((size, i, detail.clone()));
                if size < entry.0 {
                    *entry = (size, i, detail);
                }
            }
            tallies.entry(k).or_default().merge(v);
        }
    }
    for v in tallies.values_mut() {
        if let Some(f) = &mut v.first_failure {
            // label the merged failure with the instance it came from
            if let Some((_, i, _)) = smallest.values().find(|(_, _, d)| d == f) {
                *f = format!("{}: {f}", instances[*i].label);
            }
        }
    }
    let failures = smallest
        .into_iter()
        .map(|(check, (_, i, detail))| {
            let inst = &instances[i];
            let comment = format!("fails {check}: {detail}");
            FailureCase {
                check,
                instance: inst.label.clone(),
                detail,
                sgp: sgp::write(&inst.semigroup, &[&inst.label, &comment]),
            }
        })
        .collect();
    SuiteReport {
        instances: instances.len(),
        tallies,
        failures,
    }
}

/// Structural lemmas on every instance.
pub fn lemma_suite(instances: &[Instance]) -> SuiteReport {
    run_suite(instances, check_instance)
}

/// Shift-lemma sweep on the commutative instances with at most `n_max`
/// elements.
pub fn lamb_corpus(instances: &[Instance], n_max: usize) -> SuiteReport {
    let chosen: Vec<Instance> = instances
        .iter()
        .filter(|i| i.semigroup.len() <= n_max && i.semigroup.is_commutative().commutative)
        .cloned()
        .collect();
    run_suite(&chosen, lamb_instance)
}

pub fn topology_corpus(instances: &[Instance]) -> SuiteReport {
    run_suite(instances, topology_instance)
}

/// Every suite on the corpus described by `opts`.
pub fn run_all(opts: &SuiteOptions) -> Result<SuiteReport> {
    let instances = corpus(opts)?;
    let mut report = lemma_suite(&instances);
    report.merge(lamb_corpus(&instances, opts.lamb_n_max));
    report.merge(topology_corpus(&instances));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_opts() -> SuiteOptions {
        SuiteOptions {
            max_order: 3,
            family_n_max: 8,
            random_count: 4,
            ..SuiteOptions::default()
        }
    }

    #[test]
    fn tally_arithmetic() {
        let mut a = Tally::default();
        a.check(true, String::new);
        a.vacuous();
        let mut b = Tally::default();
        b.check(false, || "first".into());
        b.check(false, || "second".into());
        a.merge(b);
        assert_eq!((a.checked, a.passed, a.failed, a.vacuous), (4, 1, 2, 1));
        assert_eq!(a.first_failure.as_deref(), Some("first"));
    }

    #[test]
    fn x8_passes_everything() {
        let x8 = families::example_main(8).unwrap();
        let t = check_instance(&x8).unwrap();
        assert!(t.values().all(|v| v.failed == 0), "{t:?}");
        assert!(t["reflection-oracle"].passed == 1);
        assert!(t["group-ideal-in-upper-set"].passed == 5);
        let t = topology_instance(&x8).unwrap();
        assert!(t.values().all(|v| v.failed == 0), "{t:?}");
    }

    #[test]
    fn small_corpus_has_no_failures() {
        let opts = small_opts();
        let report = run_all(&opts).unwrap();
        assert_eq!(report.failed(), 0, "{:?}", report.failures);
        assert!(report.failures.is_empty());
        assert!(report.tallies["shift-product"].vacuous > 0);
        assert!(report.tallies["group-ideal-in-upper-set"].vacuous > 0);
    }

    #[test]
    fn suite_is_deterministic() {
        let opts = small_opts();
        let a = serde_json::to_string(&run_all(&opts).unwrap()).unwrap();
        let b = serde_json::to_string(&run_all(&opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn corrupted_h_classes_are_detected() {
        // merging the singleton classes {2} and {4} of X8 breaks the group
        // certificate at both idempotents
        let x8 = families::example_main(8).unwrap();
        let mut st = Structures::compute(&x8).unwrap();
        let mut classes: Vec<Subset> = st.h.classes().iter().filter(|c| !c.contains(2) && !c.contains(4)).cloned().collect();
        classes.push(Subset::from_iter(9, [2, 4]));
        st.h = HClasses::with_classes(&x8, classes).unwrap();
        let t = check_instance_with(&x8, &st).unwrap();
        assert!(t["h-class-is-unit-group"].failed > 0);
        assert!(t["clifford-part"].failed == 0 || t["clifford-part"].failed == 1);
        let failing: Vec<&String> = t.iter().filter(|(_, v)| v.failed > 0).map(|(k, _)| k).collect();
        assert!(!failing.is_empty());

        let report = run_suite(
            &[Instance {
                label: "mutant".into(),
                semigroup: x8.clone(),
            }],
            |s| check_instance_with(s, &st),
        );
        assert!(report.failed() > 0);
        let case = report.failures.iter().find(|f| f.check == "h-class-is-unit-group").unwrap();
        assert_eq!(crate::sgp::parse(&case.sgp).unwrap(), x8);
    }

    #[test]
    fn corpus_composition() {
        let opts = small_opts();
        let c = corpus(&opts).unwrap();
        assert!(c.iter().any(|i| i.label == "example-main:8"));
        assert!(c.iter().any(|i| i.label.starts_with("random:")));
        assert_eq!(c.iter().filter(|i| i.label.starts_with("order")).count(), 1 + 5 + 24);
        let comm = corpus(&SuiteOptions {
            commutative_only: true,
            ..opts
        })
        .unwrap();
        assert!(comm.iter().all(|i| i.semigroup.is_commutative().commutative));
    }
}
