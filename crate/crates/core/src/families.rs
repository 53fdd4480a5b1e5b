//! Parameterized families, the running example and its Rees quotients, the
//! exhaustive small-order corpus and seeded random compositions.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Limits;
use crate::congruence::{principal_ideal, rees_quotient, smallest_semilattice_congruence, Quotient};
use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;
use crate::subset::Subset;

/// Carrier `{0..n}`: distinct odd numbers `>= 3` multiply to `1`, two
/// elements of the same pair `{2k, 2k+1}` multiply to `2k`, and every other
/// product is `0`.
pub fn example_main(n: usize) -> Result<FiniteSemigroup> {
    if n == 0 {
        return Err(Error::BadParameter("example family needs N >= 1".into()));
    }
    FiniteSemigroup::from_fn(n + 1, example_main_product)
}

fn example_main_product(x: usize, y: usize) -> usize {
    let odd_ge3 = |v: usize| v >= 3 && v % 2 == 1;
    if odd_ge3(x) && odd_ge3(y) && x != y {
        1
    } else if x / 2 == y / 2 {
        2 * (x / 2)
    } else {
        0
    }
}

/// `X/I` with `I = {0,1}` and `X/J` with `J = I ∪ E(X)`.
#[derive(Debug, Clone)]
pub struct ExampleQuotients {
    pub mod_i: Quotient,
    pub mod_j: Quotient,
}

pub fn example_main_quotients(n: usize) -> Result<ExampleQuotients> {
    if n < 3 {
        return Err(Error::BadParameter("example quotients need N >= 3".into()));
    }
    let x = example_main(n)?;
    let size = x.len();
    let i = Subset::from_iter(size, [0, 1]);
    let j = Subset::from_predicate(size, |v| v <= 1 || v % 2 == 0);
    Ok(ExampleQuotients {
        mod_i: rees_quotient(&x, &i)?,
        mod_j: rees_quotient(&x, &j)?,
    })
}

/// `{0..n-1}` under `min`.
pub fn chain_semilattice(n: usize) -> Result<FiniteSemigroup> {
    positive(n, "chain")?;
    FiniteSemigroup::from_fn(n, |x, y| x.min(y))
}

/// A bottom `0` under `n` pairwise incomparable idempotents `1..=n`.
pub fn antichain_with_bottom(n: usize) -> Result<FiniteSemigroup> {
    FiniteSemigroup::from_fn(n + 1, |x, y| if x == y { x } else { 0 })
}

/// Nonempty subsets of `k` generators under union; element `i` is the
/// subset with bitmask `i + 1`.
pub fn free_semilattice(k: usize) -> Result<FiniteSemigroup> {
    positive(k, "free semilattice")?;
    if k > 12 {
        return Err(Error::BadParameter(format!(
            "free semilattice on {k} generators is too large"
        )));
    }
    FiniteSemigroup::from_fn((1 << k) - 1, |x, y| ((x + 1) | (y + 1)) - 1)
}

/// `Z/n` under addition; `0` is the identity.
pub fn cyclic_group(n: usize) -> Result<FiniteSemigroup> {
    positive(n, "cyclic group")?;
    FiniteSemigroup::from_fn(n, |x, y| (x + y) % n)
}

/// `<x | x^(index+period) = x^index>`; element `k` is `x^(k+1)`.
pub fn monogenic(index: usize, period: usize) -> Result<FiniteSemigroup> {
    positive(index, "monogenic index")?;
    positive(period, "monogenic period")?;
    let size = index + period - 1;
    FiniteSemigroup::from_fn(size, |x, y| {
        let k = x + y + 2;
        let k = if k <= size {
            k
        } else {
            index + (k - index) % period
        };
        k - 1
    })
}

/// All products equal `0`.
pub fn null_semigroup(n: usize) -> Result<FiniteSemigroup> {
    positive(n, "null semigroup")?;
    FiniteSemigroup::from_fn(n, |_, _| 0)
}

/// `xy = x`.
pub fn left_zero(n: usize) -> Result<FiniteSemigroup> {
    positive(n, "left-zero semigroup")?;
    FiniteSemigroup::from_fn(n, |x, _| x)
}

/// `xy = y`.
pub fn right_zero(n: usize) -> Result<FiniteSemigroup> {
    positive(n, "right-zero semigroup")?;
    FiniteSemigroup::from_fn(n, |_, y| y)
}

pub fn trivial() -> FiniteSemigroup {
    FiniteSemigroup::from_fn(1, |_, _| 0).expect("trivial table is valid")
}

fn positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::BadParameter(format!("{what} needs a positive parameter")))
    } else {
        Ok(())
    }
}

/// The builders that can be swept over a parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    ExampleMain,
    ExampleMainModI,
    ExampleMainModJ,
    Chain,
    AntichainBottom,
    FreeSemilattice,
    Cyclic,
    /// Index `N`, fixed period.
    MonogenicIndex(usize),
    /// Fixed index, period `N`.
    MonogenicPeriod(usize),
    Null,
    LeftZero,
    RightZero,
    /// Componentwise product of two families at the same `N`.
    Product(Box<FamilyKind>, Box<FamilyKind>),
}

impl FamilyKind {
    pub fn build(&self, n: usize) -> Result<FiniteSemigroup> {
        match self {
            Self::ExampleMain => example_main(n),
            Self::ExampleMainModI => Ok(example_main_quotients(n)?.mod_i.semigroup),
            Self::ExampleMainModJ => Ok(example_main_quotients(n)?.mod_j.semigroup),
            Self::Chain => chain_semilattice(n),
            Self::AntichainBottom => antichain_with_bottom(n),
            Self::FreeSemilattice => free_semilattice(n),
            Self::Cyclic => cyclic_group(n),
            Self::MonogenicIndex(p) => monogenic(n, *p),
            Self::MonogenicPeriod(i) => monogenic(*i, n),
            Self::Null => null_semigroup(n),
            Self::LeftZero => left_zero(n),
            Self::RightZero => right_zero(n),
            Self::Product(a, b) => a.build(n)?.direct_product(&b.build(n)?),
        }
    }

    /// Smallest admissible parameter.
    pub fn min_n(&self) -> usize {
        match self {
            Self::ExampleMainModI | Self::ExampleMainModJ => 3,
            Self::AntichainBottom => 0,
            Self::Product(a, b) => a.min_n().max(b.min_n()),
            _ => 1,
        }
    }

    /// How the `N`-th member sits inside the next one.
    pub fn embedding_note(&self) -> String {
        match self {
            Self::ExampleMain => "identity inclusion {0..N} ⊆ {0..N+1}; products never exceed inputs".into(),
            Self::ExampleMainModI => "Rees quotients by {0,1} of nested example semigroups".into(),
            Self::ExampleMainModJ => "Rees quotients by {0,1} ∪ evens of nested example semigroups".into(),
            Self::Chain => "initial segment of the longer chain".into(),
            Self::AntichainBottom => "bottom plus the first N atoms".into(),
            Self::FreeSemilattice => "subsets of the first N generators".into(),
            Self::Cyclic => "no embedding; subgroup sizes grow".into(),
            Self::MonogenicIndex(_) => "index grows with N; the period is fixed".into(),
            Self::MonogenicPeriod(_) => "period grows with N; the index is fixed".into(),
            Self::Null => "zero plus the first N-1 nilpotent elements".into(),
            Self::LeftZero | Self::RightZero => "first N elements".into(),
            Self::Product(a, b) => format!("product of ({}) and ({})", a.embedding_note(), b.embedding_note()),
        }
    }

    pub fn is_example_quotient(&self) -> bool {
        matches!(self, Self::ExampleMainModI | Self::ExampleMainModJ)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExampleMain => write!(f, "example-main"),
            Self::ExampleMainModI => write!(f, "example-main-mod-i"),
            Self::ExampleMainModJ => write!(f, "example-main-mod-j"),
            Self::Chain => write!(f, "chain"),
            Self::AntichainBottom => write!(f, "antichain-bottom"),
            Self::FreeSemilattice => write!(f, "free-semilattice"),
            Self::Cyclic => write!(f, "cyclic"),
            Self::MonogenicIndex(p) => write!(f, "monogenic-index:{p}"),
            Self::MonogenicPeriod(i) => write!(f, "monogenic-period:{i}"),
            Self::Null => write!(f, "null"),
            Self::LeftZero => write!(f, "left-zero"),
            Self::RightZero => write!(f, "right-zero"),
            Self::Product(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

/// Parses a family name such as `example-main`, `monogenic-index:3` or
/// `chain*cyclic`.
pub fn parse_family(name: &str) -> Result<FamilyKind> {
    if let Some((a, b)) = name.split_once('*') {
        return Ok(FamilyKind::Product(
            Box::new(parse_family(a)?),
            Box::new(parse_family(b)?),
        ));
    }
    let (base, param) = match name.split_once(':') {
        Some((b, p)) => (b, Some(p)),
        None => (name, None),
    };
    let number = |p: Option<&str>| -> Result<usize> {
        p.and_then(|p| p.trim().parse().ok())
            .filter(|&v| v > 0)
            .ok_or_else(|| Error::BadParameter(format!("family {base:?} needs a positive parameter")))
    };
    let kind = match base {
        "example-main" | "x" => FamilyKind::ExampleMain,
        "example-main-mod-i" | "x-mod-i" => FamilyKind::ExampleMainModI,
        "example-main-mod-j" | "x-mod-j" => FamilyKind::ExampleMainModJ,
        "chain" => FamilyKind::Chain,
        "antichain-bottom" => FamilyKind::AntichainBottom,
        "free-semilattice" => FamilyKind::FreeSemilattice,
        "cyclic" => FamilyKind::Cyclic,
        "monogenic-index" => return Ok(FamilyKind::MonogenicIndex(number(param)?)),
        "monogenic-period" => return Ok(FamilyKind::MonogenicPeriod(number(param)?)),
        "null" => FamilyKind::Null,
        "left-zero" => FamilyKind::LeftZero,
        "right-zero" => FamilyKind::RightZero,
        _ => return Err(Error::BadParameter(format!("unknown family {name:?}"))),
    };
    if param.is_some() {
        return Err(Error::BadParameter(format!("family {base:?} takes no parameter")));
    }
    Ok(kind)
}

/// A family with its sampled parameter range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub name: String,
    pub kind: FamilyKind,
    pub n_min: usize,
    pub n_max: usize,
    pub embedding: String,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n_min: usize, n_max: usize) -> Result<Self> {
        if n_min > n_max {
            return Err(Error::BadParameter(format!("empty range {n_min}..{n_max}")));
        }
        if n_min < kind.min_n() {
            return Err(Error::BadParameter(format!(
                "family {kind} starts at N = {}",
                kind.min_n()
            )));
        }
        Ok(Self {
            name: kind.to_string(),
            embedding: kind.embedding_note(),
            kind,
            n_min,
            n_max,
        })
    }

    /// Parses `<family> <Nmin>..<Nmax>` given as two strings.
    pub fn parse(name: &str, range: &str) -> Result<Self> {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| Error::BadParameter(format!("range {range:?} is not Nmin..Nmax")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::BadParameter(format!("range bound {t:?} is not a number")))
        };
        Self::new(parse_family(name)?, parse(lo)?, parse(hi)?)
    }

    pub fn build(&self, n: usize) -> Result<FiniteSemigroup> {
        self.kind.build(n).map_err(|e| Error::BuilderFailure {
            n,
            message: e.to_string(),
        })
    }
}

/// Builds a single instance from `name` or `name:param[,param]`, e.g.
/// `example-main:8`, `trivial`, `monogenic:2,3`.
pub fn instance(spec: &str) -> Result<FiniteSemigroup> {
    let (base, param) = match spec.split_once(':') {
        Some((b, p)) => (b, Some(p)),
        None => (spec, None),
    };
    let params: Vec<usize> = match param {
        None => Vec::new(),
        Some(p) => p
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::BadParameter(format!("parameter {t:?} is not a number")))
            })
            .collect::<Result<_>>()?,
    };
    let one = || -> Result<usize> {
        match params.as_slice() {
            [n] => Ok(*n),
            _ => Err(Error::BadParameter(format!("{base:?} takes exactly one parameter"))),
        }
    };
    match base {
        "trivial" if params.is_empty() => Ok(trivial()),
        "monogenic" => match params.as_slice() {
            [i, p] => monogenic(*i, *p),
            _ => Err(Error::BadParameter("monogenic takes index,period".into())),
        },
        "monogenic-index" | "monogenic-period" => match params.as_slice() {
            [fixed, n] => parse_family(&format!("{base}:{fixed}"))?.build(*n),
            _ => Err(Error::BadParameter(format!("{base} takes fixed,N"))),
        },
        _ => parse_family(base)?.build(one()?),
    }
}

/// Row-major table minimized over all relabelings of the carrier.
pub fn canonical_form(s: &FiniteSemigroup) -> Vec<u8> {
    let n = s.len();
    assert!(n <= 8, "canonical form is only used for tiny orders");
    let flat: Vec<u8> = s.rows().into_iter().flatten().map(|v| v as u8).collect();
    canonical_flat(n, &flat)
}

fn canonical_flat(n: usize, flat: &[u8]) -> Vec<u8> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u8>> = None;
    let mut image = vec![0u8; n * n];
    loop {
        // relabel x -> perm[x]
        for x in 0..n {
            for y in 0..n {
                image[perm[x] * n + perm[y]] = perm[flat[x * n + y] as usize] as u8;
            }
        }
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image.clone());
        }
        if !next_permutation(&mut perm) {
            return best.unwrap();
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Options for [`exhaustive_corpus`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorpusOptions {
    pub commutative_only: bool,
    /// Permits order 5.
    pub allow_order_five: bool,
}

/// All semigroups of order `1..=n_max` up to isomorphism, ordered by size
/// then by canonical table.
pub fn exhaustive_corpus(n_max: usize, opts: CorpusOptions) -> Result<Vec<FiniteSemigroup>> {
    let cap = if opts.allow_order_five {
        5
    } else {
        Limits::global().corpus_max_order
    };
    if n_max > cap {
        return Err(Error::BoundExceeded {
            what: "exhaustive corpus order",
            size: n_max,
            bound: cap,
        });
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        for flat in canonical_tables(n, opts.commutative_only) {
            let flat: Vec<usize> = flat.into_iter().map(usize::from).collect();
            out.push(FiniteSemigroup::from_flat(n, &flat, None, Limits::global())?);
        }
    }
    Ok(out)
}

/// Canonical tables of one order, found by backtracking with
/// associativity pruning. Subtrees are split on the first row.
fn canonical_tables(n: usize, commutative_only: bool) -> BTreeSet<Vec<u8>> {
    let cells = n * n;
    let first_row: Vec<Vec<u8>> = (0..n.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = (code % n) as u8;
                    code /= n;
                    v
                })
                .collect()
        })
        .collect();
    first_row
        .into_par_iter()
        .map(|row| {
            let mut table = vec![u8::MAX; cells];
            table[..n].copy_from_slice(&row);
            let mut found = BTreeSet::new();
            if (0..n).all(|c| consistent(n, &table, c)) {
                fill(n, &mut table, n, commutative_only, &mut found);
            }
            found
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

fn fill(n: usize, table: &mut [u8], cell: usize, comm: bool, found: &mut BTreeSet<Vec<u8>>) {
    if cell == n * n {
        found.insert(canonical_flat(n, table));
        return;
    }
    let (x, y) = (cell / n, cell % n);
    let choices: Vec<u8> = if comm && y < x {
        vec![table[y * n + x]]
    } else {
        (0..n as u8).collect()
    };
    for v in choices {
        table[cell] = v;
        if consistent(n, table, cell) {
            fill(n, table, cell + 1, comm, found);
        }
    }
    table[cell] = u8::MAX;
}

/// Checks every fully defined associativity instance; the caller has just
/// set `cell`, but a full rescan at these orders is cheap and simple.
fn consistent(n: usize, t: &[u8], _cell: usize) -> bool {
    let get = |a: usize, b: usize| t[a * n + b];
    for a in 0..n {
        for b in 0..n {
            let ab = get(a, b);
            if ab == u8::MAX {
                continue;
            }
            for c in 0..n {
                let bc = get(b, c);
                if bc == u8::MAX {
                    continue;
                }
                let l = get(ab as usize, c);
                let r = get(a, bc as usize);
                if l != u8::MAX && r != u8::MAX && l != r {
                    return false;
                }
            }
        }
    }
    true
}

/// Oracle for small orders: filters all `n^(n^2)` tables.
pub fn raw_filter_count(n: usize, commutative_only: bool) -> usize {
    assert!(n <= 3, "raw filter is only feasible for n <= 3");
    let cells = n * n;
    let mut seen = BTreeSet::new();
    for mut code in 0..n.pow(cells as u32) {
        let flat: Vec<u8> = (0..cells)
            .map(|_| {
                let v = (code % n) as u8;
                code /= n;
                v
            })
            .collect();
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    flat[flat[a * n + b] as usize * n + c] == flat[a * n + flat[b * n + c] as usize]
                })
            })
        });
        let comm = (0..n).all(|a| (0..n).all(|b| flat[a * n + b] == flat[b * n + a]));
        if assoc && (comm || !commutative_only) {
            seen.insert(canonical_flat(n, &flat));
        }
    }
    seen.len()
}

/// Seeded random composition of validated constructions.
///
/// Starts from a small standard semigroup and applies `steps` random
/// operations among direct product, adjoining an identity or a zero, Rees
/// quotient by a principal ideal and the semilattice reflection. Products
/// are skipped when they would exceed `max_size`.
pub fn random_composition(seed: u64, steps: usize, max_size: usize) -> Result<FiniteSemigroup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = random_base(&mut rng)?;
    for _ in 0..steps {
        s = match rng.gen_range(0..5) {
            0 => {
                let t = random_base(&mut rng)?;
                if s.len() * t.len() <= max_size {
                    s.direct_product(&t)?
                } else {
                    s
                }
            }
            1 if s.len() < max_size => s.adjoin_identity()?,
            2 if s.len() < max_size => s.adjoin_zero()?,
            3 => {
                let a = rng.gen_range(0..s.len());
                rees_quotient(&s, &principal_ideal(&s, a))?.semigroup
            }
            4 => {
                let c = smallest_semilattice_congruence(&s);
                crate::congruence::quotient_by_congruence(&s, &c)?.semigroup
            }
            _ => s,
        };
    }
    // drop display names so every instance uses plain indices
    s.with_names(None)
}

fn random_base(rng: &mut ChaCha8Rng) -> Result<FiniteSemigroup> {
    let builders: [fn(usize) -> Result<FiniteSemigroup>; 7] = [
        chain_semilattice,
        cyclic_group,
        null_semigroup,
        left_zero,
        right_zero,
        |k| antichain_with_bottom(k),
        |k| example_main(k + 2),
    ];
    let k = rng.gen_range(1..=3);
    let b = builders.choose(rng).expect("nonempty");
    if rng.gen_bool(0.2) {
        monogenic(rng.gen_range(1..=3), rng.gen_range(1..=3))
    } else {
        b(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_products() {
        let x = example_main(8).unwrap();
        assert_eq!(x.mul(3, 5), 1);
        assert_eq!(x.mul(3, 3), 2);
        assert_eq!(x.mul(1, 1), 0);
        assert_eq!(x.mul(2, 5), 0);
        assert_eq!(x.mul(8, 8), 8);
        assert!((0..9).all(|a| (0..9).all(|b| x.mul(a, b) <= a.max(b))));
    }

    #[test]
    fn example_is_nested() {
        for n in 1..20 {
            let small = example_main(n).unwrap();
            let big = example_main(n + 1).unwrap();
            for a in 0..=n {
                for b in 0..=n {
                    assert_eq!(small.mul(a, b), big.mul(a, b));
                }
            }
        }
    }

    #[test]
    fn quotients_of_example() {
        let q = example_main_quotients(8).unwrap();
        assert_eq!(q.mod_i.semigroup.len(), 8);
        let y = &q.mod_i.semigroup;
        let p = &q.mod_i.projection;
        assert_eq!(y.mul(p[3], p[5]), 0);
        let z = &q.mod_j.semigroup;
        assert_eq!(z.len(), 4);
        assert!((1..4).all(|a| (1..4).all(|b| z.mul(a, b) == 0)));
        assert!(example_main_quotients(2).is_err());
    }

    #[test]
    fn standard_builders() {
        assert_eq!(chain_semilattice(3).unwrap().len(), 3);
        assert_eq!(null_semigroup(5).unwrap().len(), 5);
        let m = monogenic(2, 3).unwrap();
        assert_eq!(m.len(), 4);
        let d = m.monogenic(0);
        assert_eq!((d.index, d.period), (2, 3));
        assert_eq!(free_semilattice(3).unwrap().len(), 7);
        assert_eq!(antichain_with_bottom(0).unwrap().len(), 1);
        assert!(matches!(cyclic_group(0), Err(Error::BadParameter(_))));
        assert!(left_zero(2).unwrap().is_commutative().witness == Some((0, 1)));
    }

    #[test]
    fn monogenic_builder_matches_definition() {
        for i in 1..5 {
            for p in 1..5 {
                let m = monogenic(i, p).unwrap();
                let d = m.monogenic(0);
                assert_eq!((d.index, d.period), (i, p));
                assert_eq!(d.orbit, (0..i + p - 1).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for name in [
            "example-main",
            "example-main-mod-i",
            "example-main-mod-j",
            "chain",
            "antichain-bottom",
            "free-semilattice",
            "cyclic",
            "monogenic-index:2",
            "monogenic-period:3",
            "null",
            "left-zero",
            "right-zero",
            "chain*cyclic",
        ] {
            assert_eq!(parse_family(name).unwrap().to_string(), name);
        }
        assert!(parse_family("nope").is_err());
        assert!(parse_family("chain:3").is_err());
        let spec = FamilySpec::parse("example-main", "4..16").unwrap();
        assert_eq!((spec.n_min, spec.n_max), (4, 16));
        assert!(FamilySpec::parse("example-main-mod-i", "1..5").is_err());
        assert!(FamilySpec::parse("chain", "5..4").is_err());
    }

    #[test]
    fn instances_by_name() {
        assert_eq!(instance("example-main:8").unwrap().len(), 9);
        assert_eq!(instance("trivial").unwrap().len(), 1);
        assert_eq!(instance("monogenic:2,3").unwrap().len(), 4);
        assert_eq!(instance("monogenic-index:3,4").unwrap().len(), 6);
        assert_eq!(instance("chain*cyclic:2").unwrap().len(), 4);
        assert!(instance("chain").is_err());
        assert!(instance("chain:x").is_err());
    }

    #[test]
    fn corpus_counts() {
        let counts = |comm| -> Vec<usize> {
            let corpus = exhaustive_corpus(
                4,
                CorpusOptions {
                    commutative_only: comm,
                    allow_order_five: false,
                },
            )
            .unwrap();
            (1..=4).map(|n| corpus.iter().filter(|s| s.len() == n).count()).collect()
        };
        assert_eq!(counts(false), vec![1, 5, 24, 188]);
        assert_eq!(counts(true), vec![1, 3, 12, 58]);
        assert!(matches!(
            exhaustive_corpus(5, CorpusOptions::default()),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn corpus_matches_raw_filter() {
        for n in 1..=3 {
            for comm in [false, true] {
                let corpus = exhaustive_corpus(
                    n,
                    CorpusOptions {
                        commutative_only: comm,
                        allow_order_five: false,
                    },
                )
                .unwrap();
                let backtracked = corpus.iter().filter(|s| s.len() == n).count();
                assert_eq!(backtracked, raw_filter_count(n, comm), "n={n} comm={comm}");
            }
        }
    }

    #[test]
    fn corpus_members_are_pairwise_non_isomorphic() {
        let corpus = exhaustive_corpus(3, CorpusOptions::default()).unwrap();
        let forms: BTreeSet<Vec<u8>> = corpus.iter().map(canonical_form).collect();
        assert_eq!(forms.len(), corpus.len());
    }

    #[test]
    fn random_compositions_are_reproducible() {
        for seed in 0..20 {
            let a = random_composition(seed, 4, 24).unwrap();
            let b = random_composition(seed, 4, 24).unwrap();
            assert_eq!(a, b);
            assert!(a.len() <= 24 * 3);
        }
    }
}
