//! Shift sets, e-bases and the semigroup topologies they generate.
//!
//! Topologies on a finite carrier are stored as the minimal open
//! neighbourhood of every point, which is the same data as a preorder.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lemmas::Tally;
use crate::semigroup::FiniteSemigroup;
use crate::structure::{
    bounded_exponent, center_structures_from, clifford_part_from, idempotent_poset, idempotents, pi_map_from,
    HClasses,
};
use crate::subset::Subset;

/// `b/e = {x : xe = b}`.
pub fn fraction(s: &FiniteSemigroup, b: usize, e: usize) -> Subset {
    Subset::from_predicate(s.len(), |x| s.mul(x, e) == b)
}

/// `{b} ∪ (b/e)·U`.
pub fn lambda_shift(s: &FiniteSemigroup, e: usize, b: usize, u: &Subset) -> Result<Subset> {
    s.check_element(e)?;
    s.check_element(b)?;
    if !s.is_idempotent(e) {
        return Err(Error::NotIdempotent(e));
    }
    Ok(shift(s, &fraction(s, b, e), b, u))
}

fn shift(s: &FiniteSemigroup, frac: &Subset, b: usize, u: &Subset) -> Subset {
    let mut out = s.set_product(frac, u);
    out.insert(b);
    out
}

/// A family of subsemigroups of `(e/e) ∩ Z(X)` indexed by a central
/// idempotent `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EBase {
    pub e: usize,
    pub family: Vec<Subset>,
}

impl EBase {
    pub fn new(e: usize, family: Vec<Subset>) -> Self {
        Self { e, family }
    }

    /// The member contained in every other one. It exists for every
    /// directed finite family.
    pub fn smallest(&self) -> Option<&Subset> {
        self.family
            .iter()
            .find(|v| self.family.iter().all(|u| v.is_subset(u)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseKind {
    /// Central group parts inside `e/e`.
    H,
    /// Powers of central elements inside `e/e`.
    Z,
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseKind::H => "H",
            BaseKind::Z => "Z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EBaseOptions {
    /// Cap on the number of distinct sets removed by the finite sets `F`.
    pub max_members: usize,
    /// Only sets `F` of at most this size, plus the full candidate set.
    /// `None` enumerates every `F`.
    pub max_f_size: Option<usize>,
}

impl Default for EBaseOptions {
    fn default() -> Self {
        Self {
            max_members: 4096,
            max_f_size: None,
        }
    }
}

impl EBaseOptions {
    /// Singletons `F` plus the full candidate set. The least member, and
    /// with it the generated topology and regularity, is unchanged.
    pub fn truncated() -> Self {
        Self {
            max_f_size: Some(1),
            ..Self::default()
        }
    }
}

/// Everything the two constructions share.
struct BaseData {
    center: Subset,
    central_idempotents: Subset,
    e_over_e: Subset,
    poset: crate::structure::IdempotentPoset,
    pi: crate::structure::PiData,
    clifford: Subset,
}

fn base_data(s: &FiniteSemigroup, e: usize) -> Result<BaseData> {
    s.check_element(e)?;
    let h = HClasses::compute(s);
    let cs = center_structures_from(s, &h)?;
    if !cs.central_idempotents.contains(e) {
        return Err(Error::NotCentralIdempotent(e));
    }
    Ok(BaseData {
        e_over_e: fraction(s, e, e),
        poset: idempotent_poset(s),
        pi: pi_map_from(s, &h)?,
        clifford: clifford_part_from(s, &h),
        center: cs.center,
        central_idempotents: cs.central_idempotents,
    })
}

/// Every distinct `base ∖ π⁻¹[↑F]` for finite `F ⊆ candidates`.
///
/// Only the union of the removed sets matters, so the unions are explored
/// breadth-first instead of enumerating every `F`; `F = ∅` and the full
/// candidate set are always reached.
fn remainders(d: &BaseData, base: &Subset, candidates: &Subset, opts: EBaseOptions) -> Result<Vec<Subset>> {
    let removals: Vec<Subset> = candidates
        .iter()
        .map(|f| d.pi.preimage(d.poset.up(f)).intersection(base))
        .collect();
    let empty = Subset::empty(base.universe());
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([Vec::new()]);
    let mut queue = VecDeque::from([(empty.clone(), 0)]);
    let mut out = Vec::new();
    while let Some((u, depth)) = queue.pop_front() {
        out.push(base.difference(&u));
        if opts.max_f_size.is_some_and(|k| depth >= k) {
            continue;
        }
        for r in &removals {
            let next = u.union(r);
            if seen.insert(next.to_vec()) {
                if seen.len() > opts.max_members {
                    return Err(Error::BoundExceeded {
                        what: "e-base members",
                        size: seen.len(),
                        bound: opts.max_members,
                    });
                }
                queue.push_back((next, depth + 1));
            }
        }
    }
    let full = removals.iter().fold(empty, |acc, r| acc.union(r));
    out.push(base.difference(&full));
    Ok(out)
}

/// Sorted by decreasing size, then lexicographically; duplicates dropped.
fn normalize(mut family: Vec<Subset>) -> Vec<Subset> {
    family.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.lex_cmp(b)));
    family.dedup();
    family
}

/// `{Z ∩ H ∩ e/e ∖ π⁻¹[↑F] : F ⊆ EZ ∖ ↓e}`.
pub fn ebase_h(s: &FiniteSemigroup, e: usize, opts: EBaseOptions) -> Result<EBase> {
    let d = base_data(s, e)?;
    let base = d.center.intersection(&d.clifford).intersection(&d.e_over_e);
    let candidates = d.central_idempotents.difference(d.poset.down(e));
    let family = normalize(remainders(&d, &base, &candidates, opts)?);
    Ok(EBase::new(e, family))
}

/// `{{zⁿ : z ∈ Z ∩ e/e ∩ π⁻¹[E ∖ ↑F]} : n ≥ 1, F ⊆ E ∖ ↓e}`.
///
/// With `B` the bounded exponent, `zⁿ⁺ᴮ = zⁿ` for every `n ≥ B`, so
/// `n = 1..2B-1` already produces every member.
pub fn ebase_z(s: &FiniteSemigroup, e: usize, opts: EBaseOptions) -> Result<EBase> {
    let d = base_data(s, e)?;
    let base = d.center.intersection(&d.e_over_e);
    let candidates = idempotents(s).difference(d.poset.down(e));
    let b = bounded_exponent(s)?.exponent;
    let mut family = Vec::new();
    for rest in remainders(&d, &base, &candidates, opts)? {
        for n in 1..2 * b {
            family.push(Subset::from_iter(s.len(), rest.iter().map(|z| s.power(z, n))));
        }
    }
    let family = normalize(family);
    if family.len() > opts.max_members {
        return Err(Error::BoundExceeded {
            what: "e-base members",
            size: family.len(),
            bound: opts.max_members,
        });
    }
    Ok(EBase::new(e, family))
}

pub fn ebase(s: &FiniteSemigroup, e: usize, kind: BaseKind, opts: EBaseOptions) -> Result<EBase> {
    match kind {
        BaseKind::H => ebase_h(s, e, opts),
        BaseKind::Z => ebase_z(s, e, opts),
    }
}

/// The full e-base when it has at most `max_members` members, otherwise the
/// [`EBaseOptions::truncated`] one. The flag reports the fallback.
pub fn ebase_or_truncated(
    s: &FiniteSemigroup,
    e: usize,
    kind: BaseKind,
    max_members: usize,
) -> Result<(EBase, bool)> {
    let full = EBaseOptions {
        max_members,
        max_f_size: None,
    };
    match ebase(s, e, kind, full) {
        Ok(b) if b.family.len() <= max_members => Ok((b, false)),
        Ok(_) | Err(Error::BoundExceeded { .. }) => Ok((ebase(s, e, kind, EBaseOptions::truncated())?, true)),
        Err(err) => Err(err),
    }
}

/// First clause of the e-base definition that fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "camelCase")]
pub enum EBaseViolation {
    EmptyFamily,
    NotCentralIdempotent { e: usize },
    WrongCarrier { member: usize },
    OutsideCentralFraction { member: usize, x: usize },
    NotSubsemigroup { member: usize, x: usize, y: usize, product: usize },
    NotDirected { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EBaseCheck {
    pub valid: bool,
    pub violation: Option<EBaseViolation>,
}

pub fn validate_ebase(s: &FiniteSemigroup, base: &EBase) -> EBaseCheck {
    let fail = |v| EBaseCheck {
        valid: false,
        violation: Some(v),
    };
    let n = s.len();
    let e = base.e;
    if base.family.is_empty() {
        return fail(EBaseViolation::EmptyFamily);
    }
    if e >= n || !s.is_idempotent(e) || (0..n).any(|x| s.mul(x, e) != s.mul(e, x)) {
        return fail(EBaseViolation::NotCentralIdempotent { e });
    }
    let allowed = fraction(s, e, e).intersection(&crate::structure::center(s));
    for (i, m) in base.family.iter().enumerate() {
        if m.universe() != n {
            return fail(EBaseViolation::WrongCarrier { member: i });
        }
        if let Some(x) = m.iter().find(|&x| !allowed.contains(x)) {
            return fail(EBaseViolation::OutsideCentralFraction { member: i, x });
        }
    }
    for (i, m) in base.family.iter().enumerate() {
        for x in m.iter() {
            if let Some(y) = m.iter().find(|&y| !m.contains(s.mul(x, y))) {
                return fail(EBaseViolation::NotSubsemigroup {
                    member: i,
                    x,
                    y,
                    product: s.mul(x, y),
                });
            }
        }
    }
    // a finite family is directed iff it has a least member; the pairwise
    // search only runs to name a witness
    if base.smallest().is_none() {
        for (i, u) in base.family.iter().enumerate() {
            for (j, w) in base.family.iter().enumerate().skip(i + 1) {
                let meet = u.intersection(w);
                if !base.family.iter().any(|v| v.is_subset(&meet)) {
                    return fail(EBaseViolation::NotDirected { first: i, second: j });
                }
            }
        }
    }
    EBaseCheck {
        valid: true,
        violation: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityCheck {
    pub regular: bool,
    /// Least `b ≠ be` lying in `(be/e)·V` for every member `V`.
    pub witness: Option<usize>,
}

/// Whether every `b ≠ be` escapes `(be/e)·V` for some member `V`.
pub fn is_regular(s: &FiniteSemigroup, base: &EBase) -> RegularityCheck {
    let e = base.e;
    let witness = s.elements().find(|&b| {
        let be = s.mul(b, e);
        if b == be {
            return false;
        }
        let frac = fraction(s, be, e);
        base.family.iter().all(|v| s.set_product(&frac, v).contains(b))
    });
    RegularityCheck {
        regular: witness.is_none(),
        witness,
    }
}

/// A topology on `{0..n-1}` given by minimal open neighbourhoods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiniteTopology {
    min_nbhd: Vec<Subset>,
}

impl FiniteTopology {
    /// Checks the preorder laws: `x ∈ O_x` and `y ∈ O_x ⇒ O_y ⊆ O_x`.
    pub fn from_min_nbhds(min_nbhd: Vec<Subset>) -> Result<Self> {
        let n = min_nbhd.len();
        for (x, o) in min_nbhd.iter().enumerate() {
            if o.universe() != n || !o.contains(x) {
                return Err(Error::BadParameter(format!("neighbourhood of {x} misses {x}")));
            }
            if let Some(y) = o.iter().find(|&y| !min_nbhd[y].is_subset(o)) {
                return Err(Error::BadParameter(format!(
                    "{y} lies in the neighbourhood of {x} but its own is not inside it"
                )));
            }
        }
        Ok(Self { min_nbhd })
    }

    pub fn indiscrete(n: usize) -> Self {
        Self {
            min_nbhd: vec![Subset::full(n); n],
        }
    }

    pub fn discrete(n: usize) -> Self {
        Self {
            min_nbhd: (0..n).map(|x| Subset::singleton(n, x)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.min_nbhd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.min_nbhd.is_empty()
    }

    pub fn min_nbhd(&self, x: usize) -> &Subset {
        &self.min_nbhd[x]
    }

    pub fn min_nbhds(&self) -> &[Subset] {
        &self.min_nbhd
    }

    pub fn is_open(&self, w: &Subset) -> bool {
        w.iter().all(|x| self.min_nbhd[x].is_subset(w))
    }

    pub fn is_closed(&self, b: &Subset) -> bool {
        self.is_open(&b.complement())
    }
}

/// `W` is open iff every `x ∈ W` has a member `U` with `Λ(x;U) ⊆ W`.
pub fn is_open_in_generated(s: &FiniteSemigroup, base: &EBase, w: &Subset) -> bool {
    w.iter().all(|x| {
        let frac = fraction(s, x, base.e);
        base.family.iter().any(|u| shift(s, &frac, x, u).is_subset(w))
    })
}

/// Minimal neighbourhoods of the topology generated by a valid e-base.
///
/// Because the base is directed and finite it has a least member `V`, and
/// the minimal neighbourhood of `x` is the closure of `{x}` under
/// `y ↦ Λ(y;V)`. Each result is re-checked against the definition.
pub fn generate_topology(s: &FiniteSemigroup, base: &EBase) -> Result<FiniteTopology> {
    let check = validate_ebase(s, base);
    if let Some(v) = check.violation {
        return Err(Error::BadParameter(format!("not an e-base: {v:?}")));
    }
    let least = base
        .smallest()
        .ok_or_else(|| Error::Internal("directed e-base without a least member".into()))?;
    let n = s.len();
    let steps: Vec<Subset> = (0..n)
        .map(|y| shift(s, &fraction(s, y, base.e), y, least))
        .collect();
    let mut min_nbhd = Vec::with_capacity(n);
    for x in 0..n {
        let mut o = Subset::singleton(n, x);
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for z in steps[y].iter() {
                if o.insert(z) {
                    stack.push(z);
                }
            }
        }
        if !is_open_in_generated(s, base, &o) {
            return Err(Error::Internal(format!("neighbourhood of {x} is not open")));
        }
        min_nbhd.push(o);
    }
    FiniteTopology::from_min_nbhds(min_nbhd)
        .map_err(|e| Error::Internal(format!("generated topology breaks the preorder laws: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TopologyFlags {
    pub is_top_semigroup: bool,
    /// `(a, b)` with `O_a·O_b ⊄ O_ab`.
    pub top_semigroup_witness: Option<(usize, usize)>,
    pub is_t0: bool,
    pub non_isolated_discrete: bool,
    pub is_t1: bool,
    pub is_discrete: bool,
    pub zero_dimensional: bool,
}

/// Separation and continuity flags, read off minimal neighbourhoods.
///
/// Multiplication is continuous iff `O_a·O_b ⊆ O_ab` for all `a, b`. A
/// finite space is T1 iff it is discrete, and it is zero-dimensional iff
/// every minimal neighbourhood is also closed.
pub fn topology_checks(s: &FiniteSemigroup, t: &FiniteTopology) -> TopologyFlags {
    let n = s.len();
    let o = t.min_nbhds();
    let top_semigroup_witness = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| !s.set_product(&o[a], &o[b]).is_subset(&o[s.mul(a, b)]));
    let distinct: BTreeSet<Vec<usize>> = o.iter().map(Subset::to_vec).collect();
    let non_isolated = Subset::from_predicate(n, |x| o[x].len() > 1);
    let non_isolated_discrete = non_isolated
        .iter()
        .all(|x| o[x].intersection(&non_isolated).len() == 1);
    let is_discrete = non_isolated.is_empty();
    let zero_dimensional = (0..n).all(|x| t.is_closed(&o[x]));
    TopologyFlags {
        is_top_semigroup: top_semigroup_witness.is_none(),
        top_semigroup_witness,
        is_t0: distinct.len() == n,
        non_isolated_discrete,
        is_t1: is_discrete,
        is_discrete,
        zero_dimensional,
    }
}

/// Whether every `B` with `b ∈ B ⊆ L = Λ(b;e/e)` is closed.
///
/// Equivalent to: points outside `L` have neighbourhoods missing `L`, and
/// each `x ∈ L ∖ {b}` has a neighbourhood meeting `L` only in `x`.
pub fn shift_subsets_closed(s: &FiniteSemigroup, t: &FiniteTopology, e: usize, b: usize) -> bool {
    let l = shift(s, &fraction(s, b, e), b, &fraction(s, e, e));
    s.elements().all(|x| {
        let meet = t.min_nbhd(x).intersection(&l);
        if l.contains(x) {
            x == b || meet.len() == 1
        } else {
            meet.is_empty()
        }
    })
}

/// Oracle for [`shift_subsets_closed`]: tests every such `B`.
pub fn shift_subsets_closed_brute_force(
    s: &FiniteSemigroup,
    t: &FiniteTopology,
    e: usize,
    b: usize,
) -> Result<bool> {
    let l = shift(s, &fraction(s, b, e), b, &fraction(s, e, e));
    let rest: Vec<usize> = l.iter().filter(|&x| x != b).collect();
    if rest.len() > 16 {
        return Err(Error::BoundExceeded {
            what: "subsets of a shift set",
            size: rest.len(),
            bound: 16,
        });
    }
    Ok((0u32..1 << rest.len()).all(|m| {
        let mut set = Subset::singleton(s.len(), b);
        for (i, &x) in rest.iter().enumerate() {
            if m >> i & 1 == 1 {
                set.insert(x);
            }
        }
        t.is_closed(&set)
    }))
}

/// Full report for one e-base: construction, audit, topology and flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TopologyReport {
    pub e: usize,
    pub base_kind: BaseKind,
    pub members: Vec<Subset>,
    pub validation: EBaseCheck,
    pub regularity: RegularityCheck,
    pub topology: FiniteTopology,
    pub flags: TopologyFlags,
    /// For regular bases: every point passes [`shift_subsets_closed`].
    pub shift_subsets_closed: Option<bool>,
}

pub fn topology_report(
    s: &FiniteSemigroup,
    e: usize,
    kind: BaseKind,
    opts: EBaseOptions,
) -> Result<TopologyReport> {
    let base = ebase(s, e, kind, opts)?;
    let validation = validate_ebase(s, &base);
    let regularity = is_regular(s, &base);
    let topology = generate_topology(s, &base)?;
    let flags = topology_checks(s, &topology);
    let shift_subsets_closed = regularity
        .regular
        .then(|| s.elements().all(|b| shift_subsets_closed(s, &topology, e, b)));
    Ok(TopologyReport {
        e,
        base_kind: kind,
        members: base.family,
        validation,
        regularity,
        topology,
        flags,
        shift_subsets_closed,
    })
}

/// Outcome of one item of the shift lemma on one tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "UPPERCASE")]
pub enum ItemOutcome {
    Pass,
    Fail { witness: String },
    Vacuous,
}

/// Per-`e` caches shared by the item checks.
struct ShiftCtx<'a> {
    s: &'a FiniteSemigroup,
    e: usize,
    frac: Vec<Subset>,
    /// `Λ(b; e/e)` for every `b`.
    shift_ee: Vec<Subset>,
}

impl<'a> ShiftCtx<'a> {
    fn new(s: &'a FiniteSemigroup, e: usize) -> Result<Self> {
        s.check_element(e)?;
        if !s.is_idempotent(e) {
            return Err(Error::NotIdempotent(e));
        }
        let frac: Vec<Subset> = s.elements().map(|b| fraction(s, b, e)).collect();
        let ee = frac[e].clone();
        let shift_ee = s.elements().map(|b| shift(s, &frac[b], b, &ee)).collect();
        Ok(Self {
            s,
            e,
            frac,
            shift_ee,
        })
    }

    fn lam(&self, b: usize, u: &Subset) -> Subset {
        shift(self.s, &self.frac[b], b, u)
    }

    fn item1(&self, b: usize, v: &Subset, w: &Subset) -> ItemOutcome {
        if !v.is_subset(w) {
            return ItemOutcome::Vacuous;
        }
        verdict(self.lam(b, v).is_subset(&self.lam(b, w)), || format!("b={b}"))
    }

    fn item2(&self, b: usize) -> ItemOutcome {
        let be = self.s.mul(b, self.e);
        verdict(self.shift_ee[b].is_subset(&self.frac[be]), || format!("b={b}"))
    }

    fn item3(&self, b: usize) -> ItemOutcome {
        if b == self.s.mul(b, self.e) {
            return ItemOutcome::Vacuous;
        }
        verdict(self.shift_ee[b].len() == 1, || format!("b={b}"))
    }

    fn item4(&self, a: usize, b: usize) -> ItemOutcome {
        if a == b || !self.shift_ee[b].contains(a) {
            return ItemOutcome::Vacuous;
        }
        verdict(self.shift_ee[a].len() == 1, || format!("a={a} b={b}"))
    }

    fn item5(&self, a: usize, b: usize) -> ItemOutcome {
        if a == b || self.shift_ee[a].is_disjoint(&self.shift_ee[b]) {
            return ItemOutcome::Vacuous;
        }
        verdict(self.shift_ee[a].len() == 1 || self.shift_ee[b].len() == 1, || {
            format!("a={a} b={b}")
        })
    }

    fn item6(&self, a: usize, b: usize, v: &Subset, w: &Subset) -> ItemOutcome {
        if !v.is_subset(w) {
            return ItemOutcome::Vacuous;
        }
        let ab = self.s.mul(a, b);
        verdict(
            self.s.left_translate(a, &self.lam(b, v)).is_subset(&self.lam(ab, w)),
            || format!("a={a} b={b}"),
        )
    }

    fn item7_hypothesis(&self, b: usize, u: &Subset, w: &Subset) -> bool {
        let s = self.s;
        s.mul(b, self.e) == s.mul(self.e, b) && s.right_translate(u, b).is_subset(&s.left_translate(b, w))
    }

    fn item7(&self, a: usize, b: usize, u: &Subset, w: &Subset, hyp: bool) -> ItemOutcome {
        if !hyp {
            return ItemOutcome::Vacuous;
        }
        let ab = self.s.mul(a, b);
        verdict(
            self.s.right_translate(&self.lam(a, u), b).is_subset(&self.lam(ab, w)),
            || format!("a={a} b={b}"),
        )
    }

    fn item8_hypothesis(&self, b: usize, u: &Subset, v: &Subset, w: &Subset) -> bool {
        let s = self.s;
        let central = s.elements().all(|x| s.mul(x, self.e) == s.mul(self.e, x));
        central
            && v.is_subset(w)
            && s.right_translate(u, b).is_subset(&s.left_translate(b, w))
            && self.frac[b].iter().all(|y| {
                s.set_product(&s.right_translate(u, y), v)
                    .is_subset(&s.left_translate(y, w))
            })
    }

    fn item8(&self, a: usize, b: usize, u: &Subset, v: &Subset, w: &Subset, hyp: bool) -> ItemOutcome {
        if !hyp {
            return ItemOutcome::Vacuous;
        }
        let ab = self.s.mul(a, b);
        verdict(
            self.s
                .set_product(&self.lam(a, u), &self.lam(b, v))
                .is_subset(&self.lam(ab, w)),
            || format!("a={a} b={b}"),
        )
    }
}

fn verdict(ok: bool, witness: impl FnOnce() -> String) -> ItemOutcome {
    if ok {
        ItemOutcome::Pass
    } else {
        ItemOutcome::Fail { witness: witness() }
    }
}

/// The eight items of the shift lemma on a single tuple. Items whose
/// hypotheses fail are reported as vacuous.
pub fn verify_lamb(
    s: &FiniteSemigroup,
    e: usize,
    a: usize,
    b: usize,
    u: &Subset,
    v: &Subset,
    w: &Subset,
) -> Result<[ItemOutcome; 8]> {
    s.check_element(a)?;
    s.check_element(b)?;
    let c = ShiftCtx::new(s, e)?;
    Ok([
        c.item1(b, v, w),
        c.item2(b),
        c.item3(b),
        c.item4(a, b),
        c.item5(a, b),
        c.item6(a, b, v, w),
        c.item7(a, b, u, w, c.item7_hypothesis(b, u, w)),
        c.item8(a, b, u, v, w, c.item8_hypothesis(b, u, v, w)),
    ])
}

/// Names of the eight items, used as tally keys.
pub const LAMB_ITEMS: [&str; 8] = [
    "shift-monotone",
    "shift-in-fiber",
    "shift-off-fiber-singleton",
    "shift-inner-singleton",
    "shift-overlap-singleton",
    "shift-left-translate",
    "shift-right-translate",
    "shift-product",
];

/// Sweeps every item over its own free variables, with `U, V, W` drawn from
/// `sets`: item 1 over `(b,V,W)`, items 2-3 over `b`, items 4-5 over
/// `(a,b)`, item 6 over `(a,b,V,W)`, item 7 over `(a,b,U,W)` and item 8
/// over `(a,b,U,V,W)`.
pub fn lamb_suite(s: &FiniteSemigroup, e: usize, sets: &[Subset]) -> Result<[Tally; 8]> {
    let c = ShiftCtx::new(s, e)?;
    let n = s.len();
    let per_b: Vec<[Tally; 8]> = (0..n)
        .into_par_iter()
        .map(|b| {
            let mut t: [Tally; 8] = Default::default();
            let ctx = |item: usize| format!("e={e} item {} ", item + 1);
            t[1].record(&c.item2(b), &ctx(1));
            t[2].record(&c.item3(b), &ctx(2));
            for v in sets {
                for w in sets {
                    t[0].record(&c.item1(b, v, w), &ctx(0));
                }
            }
            let hyp7: Vec<Vec<bool>> = sets
                .iter()
                .map(|u| sets.iter().map(|w| c.item7_hypothesis(b, u, w)).collect())
                .collect();
            let hyp8: Vec<Vec<Vec<bool>>> = sets
                .iter()
                .map(|u| {
                    sets.iter()
                        .map(|v| sets.iter().map(|w| c.item8_hypothesis(b, u, v, w)).collect())
                        .collect()
                })
                .collect();
            for a in 0..n {
                t[3].record(&c.item4(a, b), &ctx(3));
                t[4].record(&c.item5(a, b), &ctx(4));
                for (vi, v) in sets.iter().enumerate() {
                    for (wi, w) in sets.iter().enumerate() {
                        t[5].record(&c.item6(a, b, v, w), &ctx(5));
                        t[6].record(&c.item7(a, b, v, w, hyp7[vi][wi]), &ctx(6));
                        for (ui, u) in sets.iter().enumerate() {
                            t[7].record(&c.item8(a, b, u, v, w, hyp8[ui][vi][wi]), &ctx(7));
                        }
                    }
                }
            }
            t
        })
        .collect();
    let mut total: [Tally; 8] = Default::default();
    for t in per_b {
        for (acc, x) in total.iter_mut().zip(t) {
            acc.merge(x);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn set(n: usize, xs: &[usize]) -> Subset {
        Subset::from_iter(n, xs.iter().copied())
    }

    fn lists(v: &[Subset]) -> Vec<Vec<usize>> {
        v.iter().map(Subset::to_vec).collect()
    }

    /// Oracle: minimal neighbourhoods as intersections of all open sets,
    /// with openness tested straight from the definition.
    fn brute_topology(s: &FiniteSemigroup, base: &EBase) -> Vec<Subset> {
        let n = s.len();
        let mut min = vec![Subset::full(n); n];
        for m in 0u32..1 << n {
            let w = Subset::from_predicate(n, |x| m >> x & 1 == 1);
            if is_open_in_generated(s, base, &w) {
                for x in w.iter() {
                    min[x].intersect_with(&w);
                }
            }
        }
        min
    }

    #[test]
    fn fractions_and_shifts_in_x8() {
        let x8 = families::example_main(8).unwrap();
        assert_eq!(fraction(&x8, 2, 2).to_vec(), vec![2, 3]);
        assert!(fraction(&x8, 5, 2).is_empty());
        let ee = fraction(&x8, 2, 2);
        assert_eq!(lambda_shift(&x8, 2, 5, &ee).unwrap().to_vec(), vec![5]);
        assert_eq!(lambda_shift(&x8, 2, 2, &ee).unwrap().to_vec(), vec![2]);
        assert!(fraction(&x8, 4, 4).contains(4));
        assert!(matches!(
            lambda_shift(&x8, 3, 2, &ee),
            Err(Error::NotIdempotent(3))
        ));
    }

    #[test]
    fn ebases_of_x8() {
        let x8 = families::example_main(8).unwrap();
        let z = ebase_z(&x8, 2, EBaseOptions::default()).unwrap();
        assert_eq!(lists(&z.family), vec![vec![2, 3], vec![2]]);
        assert!(validate_ebase(&x8, &z).valid);
        assert!(is_regular(&x8, &z).regular);
        let t = generate_topology(&x8, &z).unwrap();
        assert_eq!(t, FiniteTopology::discrete(9));
        let flags = topology_checks(&x8, &t);
        assert!(flags.is_top_semigroup && flags.is_t0 && flags.is_discrete && flags.zero_dimensional);

        let h = ebase_h(&x8, 2, EBaseOptions::default()).unwrap();
        assert_eq!(lists(&h.family), vec![vec![2]]);
        assert!(is_regular(&x8, &h).regular);
    }

    #[test]
    fn non_central_idempotent_is_rejected() {
        let lz = families::left_zero(2).unwrap();
        assert!(matches!(
            ebase_h(&lz, 0, EBaseOptions::default()),
            Err(Error::NotCentralIdempotent(0))
        ));
        let c = families::monogenic(2, 1).unwrap();
        assert!(matches!(
            ebase_z(&c, 0, EBaseOptions::default()),
            Err(Error::NotCentralIdempotent(0))
        ));
    }

    #[test]
    fn small_bases() {
        let t = families::trivial();
        let z = ebase_z(&t, 0, EBaseOptions::default()).unwrap();
        assert_eq!(lists(&z.family), vec![vec![0]]);
        assert_eq!(generate_topology(&t, &z).unwrap(), FiniteTopology::discrete(1));

        // 2 = {0 < 1}, bottom idempotent
        let two = families::chain_semilattice(2).unwrap();
        let h = ebase_h(&two, 0, EBaseOptions::default()).unwrap();
        assert!(h.family.contains(&set(2, &[0])));
        assert!(is_regular(&two, &h).regular);

        // unipotent: no admissible F
        let g = families::cyclic_group(4).unwrap();
        let h = ebase_h(&g, 0, EBaseOptions::default()).unwrap();
        assert_eq!(lists(&h.family), vec![vec![0]]);
    }

    #[test]
    fn hand_built_non_regular_base() {
        let two = families::chain_semilattice(2).unwrap();
        let base = EBase::new(0, vec![set(2, &[0, 1])]);
        assert!(validate_ebase(&two, &base).valid);
        let r = is_regular(&two, &base);
        assert_eq!((r.regular, r.witness), (false, Some(1)));
        let t = generate_topology(&two, &base).unwrap();
        assert_eq!(t.min_nbhd(0).to_vec(), vec![0, 1]);
        assert_eq!(t.min_nbhd(1).to_vec(), vec![1]);
        let flags = topology_checks(&two, &t);
        assert!(flags.is_top_semigroup && flags.is_t0 && flags.non_isolated_discrete);
        assert!(!flags.is_discrete);
        assert_eq!(lists(t.min_nbhds()), lists(&brute_topology(&two, &base)));
    }

    #[test]
    fn validation_reports_first_broken_clause() {
        let x8 = families::example_main(8).unwrap();
        let empty = EBase::new(2, vec![]);
        assert_eq!(
            validate_ebase(&x8, &empty).violation,
            Some(EBaseViolation::EmptyFamily)
        );
        let non_idem = EBase::new(3, vec![set(9, &[2])]);
        assert_eq!(
            validate_ebase(&x8, &non_idem).violation,
            Some(EBaseViolation::NotCentralIdempotent { e: 3 })
        );
        let outside = EBase::new(2, vec![set(9, &[2, 4])]);
        assert_eq!(
            validate_ebase(&x8, &outside).violation,
            Some(EBaseViolation::OutsideCentralFraction { member: 0, x: 4 })
        );
        // {3} is inside 2/2 but 3·3 = 2 escapes it
        let not_closed = EBase::new(2, vec![set(9, &[3])]);
        assert_eq!(
            validate_ebase(&x8, &not_closed).violation,
            Some(EBaseViolation::NotSubsemigroup {
                member: 0,
                x: 3,
                y: 3,
                product: 2
            })
        );
        // bottom under two atoms, e = bottom: {0,1} and {0,2} have no
        // member below their meet {0}
        let f = families::antichain_with_bottom(2).unwrap();
        let e = 0;
        let u = set(3, &[0, 1]);
        let w = set(3, &[0, 2]);
        let undirected = EBase::new(e, vec![u, w]);
        assert_eq!(
            validate_ebase(&f, &undirected).violation,
            Some(EBaseViolation::NotDirected { first: 0, second: 1 })
        );
    }

    #[test]
    fn indiscrete_topology_on_two() {
        let two = families::chain_semilattice(2).unwrap();
        let t = FiniteTopology::indiscrete(2);
        let flags = topology_checks(&two, &t);
        assert!(flags.is_top_semigroup);
        assert!(!flags.is_t0);
        assert!(FiniteTopology::from_min_nbhds(vec![set(2, &[0, 1]), set(2, &[0])]).is_err());
    }

    #[test]
    fn lamb_items_on_x8() {
        let x8 = families::example_main(8).unwrap();
        let z = ebase_z(&x8, 2, EBaseOptions::default()).unwrap();
        let ee = fraction(&x8, 2, 2);
        let out = verify_lamb(&x8, 2, 0, 5, &ee, &ee, &ee).unwrap();
        assert_eq!(out[2], ItemOutcome::Pass);
        for u in &z.family {
            for a in 0..9 {
                for b in 0..9 {
                    let out = verify_lamb(&x8, 2, a, b, u, u, u).unwrap();
                    assert!(!out.iter().any(|o| matches!(o, ItemOutcome::Fail { .. })));
                }
            }
        }
        let tallies = lamb_suite(&x8, 2, &z.family).unwrap();
        for t in &tallies {
            assert_eq!(t.failed, 0);
            assert_eq!(t.checked, t.passed + t.vacuous);
        }
        assert_eq!(tallies[7].checked, 81 * 8);
        assert!(tallies.iter().map(|t| t.vacuous).sum::<u64>() > 0);
    }

    #[test]
    fn generated_topologies_match_brute_force() {
        let corpus = families::exhaustive_corpus(3, Default::default()).unwrap();
        let mut count = 0;
        for s in corpus.iter().chain([families::example_main(6).unwrap()].iter()) {
            let ez = crate::structure::center_structures(s).unwrap().central_idempotents;
            for e in ez.iter() {
                for kind in [BaseKind::H, BaseKind::Z] {
                    let base = ebase(s, e, kind, EBaseOptions::default()).unwrap();
                    assert!(validate_ebase(s, &base).valid);
                    let t = generate_topology(s, &base).unwrap();
                    assert_eq!(lists(t.min_nbhds()), lists(&brute_topology(s, &base)));
                    let r = is_regular(s, &base);
                    assert!(r.regular, "{kind} base at {e} not regular: {:?}", s.rows());
                    for b in s.elements() {
                        assert_eq!(
                            shift_subsets_closed(s, &t, e, b),
                            shift_subsets_closed_brute_force(s, &t, e, b).unwrap()
                        );
                    }
                    count += 1;
                }
            }
        }
        assert!(count > 50);
    }

    #[test]
    fn report_serializes_sorted_arrays() {
        let x8 = families::example_main(8).unwrap();
        let r = topology_report(&x8, 2, BaseKind::Z, EBaseOptions::default()).unwrap();
        let json = serde_json::to_string(&r.topology).unwrap();
        assert!(json.starts_with(r#"{"minNbhd":[[0],[1],[2]"#));
        assert_eq!(r.shift_subsets_closed, Some(true));
    }
}
