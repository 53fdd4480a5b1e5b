//! Family-level limit verdicts and the characterization theorems they feed.
//!
//! A family `F(N)` stands for its limit object. Each condition is read off
//! a statistic: the condition holds in the limit when the statistic
//! stabilizes and fails when it keeps growing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::predicates::{classify, AnalysisReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Holds,
    Fails,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Holds => "HOLDS",
            Self::Fails => "FAILS",
            Self::Undetermined => "UNDETERMINED",
        })
    }
}

/// Limit verdict for one condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LimitVerdict {
    pub verdict: Verdict,
    /// Statistic the verdict was read from.
    pub stat: String,
    /// `(N, value)` for every sampled `N`.
    pub values: Vec<(usize, usize)>,
    /// For FAILS: the `N` at which each successive larger value first
    /// appears, so the statistic is strictly increasing along it.
    pub witness: Vec<usize>,
}

/// Trend rule on a sampled statistic.
///
/// HOLDS when the values over the upper half of the range are constant.
/// FAILS when the sequence is non-decreasing and takes at least four
/// distinct values. Otherwise UNDETERMINED.
///
/// Steps are counted after merging repeated values, because several natural
/// statistics grow only on every other `N`.
pub fn trend(values: &[(usize, usize)]) -> (Verdict, Vec<usize>) {
    if values.is_empty() {
        return (Verdict::Undetermined, Vec::new());
    }
    let top = &values[values.len() / 2..];
    if top.iter().all(|&(_, v)| v == top[0].1) {
        return (Verdict::Holds, Vec::new());
    }
    let non_decreasing = values.windows(2).all(|w| w[0].1 <= w[1].1);
    let mut firsts: Vec<(usize, usize)> = Vec::new();
    for &(n, v) in values {
        if firsts.last().is_none_or(|&(_, last)| last != v) {
            firsts.push((n, v));
        }
    }
    if non_decreasing && firsts.len() >= 4 {
        (Verdict::Fails, firsts.into_iter().map(|(n, _)| n).collect())
    } else {
        (Verdict::Undetermined, Vec::new())
    }
}

/// Closedness kinds, ordered by strength along two chains:
/// absolutely ⇒ projectively ⇒ ideally ⇒ plain and
/// absolutely ⇒ injectively ⇒ plain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Plain,
    Ideally,
    Projectively,
    Injectively,
    Absolutely,
}

impl Kind {
    const ALL: [Kind; 5] = [
        Kind::Plain,
        Kind::Ideally,
        Kind::Projectively,
        Kind::Injectively,
        Kind::Absolutely,
    ];

    /// Whether being `self`-closed implies being `other`-closed.
    fn implies(self, other: Kind) -> bool {
        use Kind::*;
        match self {
            Absolutely => true,
            Projectively => matches!(other, Projectively | Ideally | Plain),
            Ideally => matches!(other, Ideally | Plain),
            Injectively => matches!(other, Injectively | Plain),
            Plain => other == Plain,
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Kind::Plain => "",
            Kind::Ideally => "ideally ",
            Kind::Projectively => "projectively ",
            Kind::Injectively => "injectively ",
            Kind::Absolutely => "absolutely ",
        }
    }
}

/// Classes of topological semigroups: `T1S ⊇ T2S ⊇ TzS`, so closedness in
/// a larger class implies closedness in a smaller one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    T1S,
    T2S,
    TzS,
}

impl Class {
    const ALL: [Class; 3] = [Class::T1S, Class::T2S, Class::TzS];

    fn rank(self) -> u8 {
        match self {
            Class::T1S => 0,
            Class::T2S => 1,
            Class::TzS => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Class::T1S => "T1S",
            Class::T2S => "T2S",
            Class::TzS => "TzS",
        }
    }
}

/// "X is (not) kind class-closed".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub positive: bool,
    pub kind: Kind,
    pub class: Class,
}

impl Label {
    pub const fn pos(kind: Kind, class: Class) -> Self {
        Self {
            positive: true,
            kind,
            class,
        }
    }

    pub const fn neg(kind: Kind, class: Class) -> Self {
        Self {
            positive: false,
            kind,
            class,
        }
    }

    /// Every label implied by this one, itself included.
    pub fn consequences(self) -> Vec<Label> {
        let mut out = Vec::new();
        for kind in Kind::ALL {
            for class in Class::ALL {
                let follows = if self.positive {
                    self.kind.implies(kind) && self.class.rank() <= class.rank()
                } else {
                    kind.implies(self.kind) && class.rank() <= self.class.rank()
                };
                if follows {
                    out.push(Label {
                        positive: self.positive,
                        kind,
                        class,
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}-closed",
            if self.positive { "" } else { "not " },
            self.kind.prefix(),
            self.class.name()
        )
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremConclusion {
    pub theorem: String,
    pub conclusion: Label,
    /// Conditions the theorem was evaluated on.
    pub conditions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyVerdict {
    pub family_name: String,
    pub n_min: usize,
    pub n_max: usize,
    pub embedding: String,
    pub per_n: Vec<(usize, AnalysisReport)>,
    pub limit_verdicts: BTreeMap<String, LimitVerdict>,
    pub theorem_conclusions: Vec<TheoremConclusion>,
    /// Closure of the conclusions under the implications between kinds and
    /// classes.
    pub implied: Vec<Label>,
}

/// Conditions and the statistic each is read from. A bounded statistic
/// means the condition holds in the limit.
const STAT_CONDITIONS: [(&str, &str); 11] = [
    ("bounded", "boundedExponent"),
    ("chain-finite", "chainStat"),
    ("group-finite", "maxSubgroupSize"),
    ("group-bounded", "maxSubgroupExponent"),
    ("nonsingular", "maxNullSetSize"),
    ("not-clifford-singular", "maxCliffordNullSetSize"),
    ("clifford+finite", "cliffordComplementSize"),
    ("clifford-finite", "cliffordSize"),
    ("center-chain-finite", "center.centerChainStat"),
    ("center-nonsingular", "center.centerMaxNullSetSize"),
    ("center-group-finite", "center.centerMaxSubgroupSize"),
];

fn stat_value(r: &AnalysisReport, stat: &str) -> usize {
    let s = &r.stats;
    match stat {
        "boundedExponent" => s.bounded_exponent,
        "chainStat" => s.chain_stat,
        "maxSubgroupSize" => s.max_subgroup_size,
        "maxSubgroupExponent" => s.max_subgroup_exponent,
        "maxNullSetSize" => s.max_null_set_size,
        "maxCliffordNullSetSize" => s.max_clifford_null_set_size,
        "cliffordComplementSize" => s.clifford_complement_size,
        "cliffordSize" => s.clifford_size,
        "center.centerChainStat" => s.center.center_chain_stat,
        "center.centerMaxNullSetSize" => s.center.center_max_null_set_size,
        "center.centerMaxSubgroupSize" => s.center.center_max_subgroup_size,
        _ => unreachable!("unknown statistic {stat}"),
    }
}

/// Theorems for commutative limits: id, conditions, conclusion when all
/// hold, conclusion when one fails, and whether it needs a unipotent limit.
struct Theorem {
    id: &'static str,
    conditions: &'static [&'static str],
    holds: Label,
    fails: Label,
    unipotent_only: bool,
}

const THEOREMS: [Theorem; 7] = [
    Theorem {
        id: "thm:C",
        conditions: &["chain-finite", "nonsingular", "periodic", "group-bounded"],
        holds: Label::pos(Kind::Plain, Class::T1S),
        fails: Label::neg(Kind::Plain, Class::TzS),
        unipotent_only: false,
    },
    Theorem {
        id: "thm:CUS",
        conditions: &["nonsingular", "bounded"],
        holds: Label::pos(Kind::Plain, Class::T1S),
        fails: Label::neg(Kind::Plain, Class::TzS),
        unipotent_only: true,
    },
    Theorem {
        id: "thm:mainP",
        conditions: &["chain-finite", "group-bounded", "clifford+finite"],
        holds: Label::pos(Kind::Projectively, Class::T1S),
        fails: Label::neg(Kind::Ideally, Class::TzS),
        unipotent_only: false,
    },
    Theorem {
        id: "thm:aC",
        conditions: &["chain-finite", "bounded", "group-finite", "clifford+finite"],
        holds: Label::pos(Kind::Absolutely, Class::T2S),
        fails: Label::neg(Kind::Absolutely, Class::TzS),
        unipotent_only: false,
    },
    Theorem {
        id: "thm:iCUS",
        conditions: &["bounded", "nonsingular", "group-finite"],
        holds: Label::pos(Kind::Injectively, Class::T1S),
        fails: Label::neg(Kind::Injectively, Class::TzS),
        unipotent_only: true,
    },
    Theorem {
        id: "thm:iT1",
        conditions: &["bounded", "nonsingular", "clifford-finite"],
        holds: Label::pos(Kind::Injectively, Class::T1S),
        fails: Label::neg(Kind::Injectively, Class::T1S),
        unipotent_only: false,
    },
    Theorem {
        id: "thm:main-iC",
        conditions: &[
            "bounded",
            "chain-finite",
            "group-finite",
            "nonsingular",
            "not-clifford-singular",
        ],
        holds: Label::pos(Kind::Injectively, Class::T2S),
        fails: Label::neg(Kind::Injectively, Class::TzS),
        unipotent_only: false,
    },
];

/// Analyzes every member of the family and draws limit verdicts.
pub fn classify_family(spec: &FamilySpec) -> Result<FamilyVerdict> {
    let per_n: Vec<(usize, AnalysisReport)> = (spec.n_min..=spec.n_max)
        .into_par_iter()
        .map(|n| Ok((n, classify(&spec.build(n)?)?)))
        .collect::<Result<_>>()?;

    let mut limit_verdicts = BTreeMap::new();
    for (cond, stat) in STAT_CONDITIONS {
        let values: Vec<(usize, usize)> = per_n.iter().map(|(n, r)| (*n, stat_value(r, stat))).collect();
        let (verdict, witness) = trend(&values);
        limit_verdicts.insert(
            cond.to_string(),
            LimitVerdict {
                verdict,
                stat: stat.to_string(),
                values,
                witness,
            },
        );
    }
    let all = |f: fn(&AnalysisReport) -> bool| per_n.iter().all(|(_, r)| f(r));
    let flag_verdict = |stat: &str, holds: bool| LimitVerdict {
        verdict: if holds { Verdict::Holds } else { Verdict::Fails },
        stat: stat.to_string(),
        values: Vec::new(),
        witness: Vec::new(),
    };
    // finite semigroups are periodic, and a directed union of periodic
    // semigroups is periodic
    limit_verdicts.insert("periodic".into(), flag_verdict("isPeriodic", all(|r| r.stats.is_periodic)));
    let unipotent = all(|r| r.stats.is_unipotent);
    let commutative = all(|r| r.commutative);
    limit_verdicts.insert("unipotent".into(), flag_verdict("isUnipotent", unipotent));
    limit_verdicts.insert("commutative".into(), flag_verdict("commutative", commutative));

    let mut theorem_conclusions = Vec::new();
    let verdict_of = |c: &str| limit_verdicts[c].verdict;
    if commutative {
        for t in &THEOREMS {
            if t.unipotent_only && !unipotent {
                continue;
            }
            let vs: Vec<Verdict> = t.conditions.iter().map(|c| verdict_of(c)).collect();
            let conclusion = if vs.contains(&Verdict::Fails) {
                Some(t.fails)
            } else if vs.iter().all(|&v| v == Verdict::Holds) {
                Some(t.holds)
            } else {
                None
            };
            if let Some(conclusion) = conclusion {
                let conditions = t.conditions.iter().map(|c| c.to_string()).collect();
                theorem_conclusions.push(TheoremConclusion {
                    theorem: t.id.into(),
                    conclusion,
                    conditions,
                });
                if t.id == "thm:aC" {
                    // the corollary restates the same characterization
                    theorem_conclusions.push(TheoremConclusion {
                        theorem: "cor:aC".into(),
                        conclusion,
                        conditions: t.conditions.iter().map(|c| c.to_string()).collect(),
                    });
                }
            }
        }
    }
    // center conditions are necessary for closedness of any semigroup
    for (cond, label) in [
        ("center-chain-finite", Label::neg(Kind::Plain, Class::TzS)),
        ("center-nonsingular", Label::neg(Kind::Plain, Class::TzS)),
        ("center-group-finite", Label::neg(Kind::Injectively, Class::TzS)),
    ] {
        if verdict_of(cond) == Verdict::Fails {
            theorem_conclusions.push(TheoremConclusion {
                theorem: "thm:Z".into(),
                conclusion: label,
                conditions: vec![cond.into()],
            });
        }
    }

    let implied = close_conclusions(&theorem_conclusions)?;
    Ok(FamilyVerdict {
        family_name: spec.name.clone(),
        n_min: spec.n_min,
        n_max: spec.n_max,
        embedding: spec.embedding.clone(),
        per_n,
        limit_verdicts,
        theorem_conclusions,
        implied,
    })
}

/// Closes the conclusions under implication; a label and its negation
/// both appearing is a contradiction between theorems and thus a bug.
pub fn close_conclusions(conclusions: &[TheoremConclusion]) -> Result<Vec<Label>> {
    let mut set = BTreeSet::new();
    for c in conclusions {
        set.extend(c.conclusion.consequences());
    }
    for l in &set {
        if l.positive && set.contains(&Label::neg(l.kind, l.class)) {
            return Err(Error::Internal(format!("conclusions contradict on {l}")));
        }
    }
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{parse_family, FamilySpec};

    fn spec(name: &str, lo: usize, hi: usize) -> FamilySpec {
        FamilySpec::new(parse_family(name).unwrap(), lo, hi).unwrap()
    }

    fn conclusion(v: &FamilyVerdict, thm: &str) -> Option<String> {
        v.theorem_conclusions
            .iter()
            .find(|c| c.theorem == thm)
            .map(|c| c.conclusion.to_string())
    }

    #[test]
    fn trend_rule() {
        let seq = |v: &[usize]| -> Vec<(usize, usize)> { v.iter().enumerate().map(|(i, &x)| (i + 4, x)).collect() };
        assert_eq!(trend(&seq(&[2, 2, 2, 2])).0, Verdict::Holds);
        assert_eq!(trend(&seq(&[1, 2, 3, 3, 3, 3])).0, Verdict::Holds);
        assert_eq!(trend(&seq(&[1, 2, 3, 4])), (Verdict::Fails, vec![4, 5, 6, 7]));
        // growth every other N
        assert_eq!(
            trend(&seq(&[1, 2, 2, 3, 3, 4, 4])),
            (Verdict::Fails, vec![4, 5, 7, 9])
        );
        assert_eq!(trend(&seq(&[1, 2, 3])).0, Verdict::Undetermined);
        assert_eq!(trend(&seq(&[1, 3, 2, 4, 5, 6])).0, Verdict::Undetermined);
    }

    #[test]
    fn label_closure() {
        let l = Label::pos(Kind::Injectively, Class::T2S);
        let c: Vec<String> = l.consequences().iter().map(|l| l.to_string()).collect();
        assert_eq!(
            c,
            ["T2S-closed", "TzS-closed", "injectively T2S-closed", "injectively TzS-closed"]
        );
        let n = Label::neg(Kind::Ideally, Class::TzS);
        let c: Vec<String> = n.consequences().iter().map(|l| l.to_string()).collect();
        assert!(c.contains(&"not absolutely T1S-closed".to_string()));
        assert!(c.contains(&"not projectively T2S-closed".to_string()));
        assert!(!c.contains(&"not TzS-closed".to_string()));
        let clash = [
            TheoremConclusion {
                theorem: "a".into(),
                conclusion: Label::pos(Kind::Absolutely, Class::T1S),
                conditions: vec![],
            },
            TheoremConclusion {
                theorem: "b".into(),
                conclusion: Label::neg(Kind::Plain, Class::TzS),
                conditions: vec![],
            },
        ];
        assert!(matches!(close_conclusions(&clash), Err(Error::Internal(_))));
    }

    #[test]
    fn example_family_verdicts() {
        let v = classify_family(&spec("example-main", 4, 16)).unwrap();
        for c in [
            "bounded",
            "chain-finite",
            "group-finite",
            "nonsingular",
            "not-clifford-singular",
        ] {
            assert_eq!(v.limit_verdicts[c].verdict, Verdict::Holds, "{c}");
        }
        assert_eq!(v.limit_verdicts["clifford-finite"].verdict, Verdict::Fails);
        assert_eq!(conclusion(&v, "thm:main-iC").unwrap(), "injectively T2S-closed");
        assert_eq!(conclusion(&v, "thm:C").unwrap(), "T1S-closed");
        assert_eq!(conclusion(&v, "thm:iT1").unwrap(), "not injectively T1S-closed");
    }

    #[test]
    fn quotient_family_verdicts() {
        let v = classify_family(&spec("example-main-mod-i", 4, 16)).unwrap();
        let cs = &v.limit_verdicts["not-clifford-singular"];
        assert_eq!(cs.verdict, Verdict::Fails);
        for &(n, size) in &cs.values {
            assert_eq!(size, (n - 1) / 2);
        }
        assert_eq!(conclusion(&v, "thm:main-iC").unwrap(), "not injectively TzS-closed");
        assert_eq!(conclusion(&v, "thm:C").unwrap(), "T1S-closed");

        let v = classify_family(&spec("example-main-mod-j", 4, 16)).unwrap();
        assert_eq!(v.limit_verdicts["nonsingular"].verdict, Verdict::Fails);
        assert_eq!(conclusion(&v, "thm:C").unwrap(), "not TzS-closed");
    }

    #[test]
    fn null_family_is_singular() {
        let v = classify_family(&spec("null", 2, 12)).unwrap();
        assert_eq!(v.limit_verdicts["nonsingular"].verdict, Verdict::Fails);
        assert_eq!(conclusion(&v, "thm:CUS").unwrap(), "not TzS-closed");
    }

    #[test]
    fn noncommutative_families_get_no_commutative_conclusions() {
        let v = classify_family(&spec("left-zero", 1, 8)).unwrap();
        assert!(v.theorem_conclusions.iter().all(|c| c.theorem == "thm:Z"));
    }

    #[test]
    fn stats_are_monotone_along_families() {
        for name in [
            "example-main",
            "example-main-mod-i",
            "example-main-mod-j",
            "chain",
            "antichain-bottom",
            "free-semilattice",
            "cyclic",
            "monogenic-index:2",
            "monogenic-period:2",
            "null",
            "left-zero",
            "right-zero",
        ] {
            let hi = if name == "free-semilattice" { 5 } else { 14 };
            let lo = parse_family(name).unwrap().min_n().max(3);
            let v = classify_family(&spec(name, lo, hi)).unwrap();
            for (cond, lv) in &v.limit_verdicts {
                assert!(
                    lv.values.windows(2).all(|w| w[0].1 <= w[1].1),
                    "{name}: {cond} not monotone: {:?}",
                    lv.values
                );
            }
        }
    }
}
