//! Finite semigroups given by Cayley tables over the carrier `{0..n}`.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::subset::Subset;

/// A validated finite semigroup. Immutable once built.
///
/// `table[x * n + y]` is the product `x*y`. Names are display labels only;
/// every algorithm works on indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSemigroup {
    n: usize,
    table: Vec<u32>,
    names: Option<Vec<String>>,
}

/// Index, period and orbit of the cyclic subsemigroup generated by one element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonogenicData {
    pub element: usize,
    pub index: usize,
    pub period: usize,
    /// `x, x^2, ..., x^(index+period-1)`, pairwise distinct.
    pub orbit: Vec<usize>,
}

impl MonogenicData {
    /// `x^k` for any `k >= 1`, read off the orbit.
    pub fn power(&self, k: usize) -> usize {
        assert!(k >= 1);
        let k = if k < self.index + self.period {
            k
        } else {
            self.index + (k - self.index) % self.period
        };
        self.orbit[k - 1]
    }

    /// The unique idempotent in the orbit.
    pub fn idempotent(&self) -> usize {
        // the cyclic group part x^i..x^(i+p-1) holds one idempotent: x^m with
        // m >= i and p | m
        let m = self.index.div_ceil(self.period) * self.period;
        self.power(m)
    }

    /// Least exponent `m` with `x^m` idempotent.
    pub fn idempotent_exponent(&self) -> usize {
        self.index.div_ceil(self.period) * self.period
    }
}

impl FiniteSemigroup {
    /// Validates a table and builds the semigroup, using the process-wide
    /// [`Limits`].
    pub fn build(n: usize, table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        Self::build_with_limits(n, table, names, Limits::global())
    }

    pub fn build_with_limits(
        n: usize,
        table: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
        limits: &Limits,
    ) -> Result<Self> {
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            let found = format!(
                "{} rows of lengths {:?}",
                table.len(),
                table.iter().map(Vec::len).collect::<Vec<_>>()
            );
            return Err(Error::BadShape { n, found });
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        Self::from_flat(n, &flat, names, limits)
    }

    /// Builds from a product function evaluated on every pair.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let flat: Vec<usize> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::from_flat(n, &flat, None, Limits::global())
    }

    /// Builds from a row-major flat table.
    pub fn from_flat(
        n: usize,
        flat: &[usize],
        names: Option<Vec<String>>,
        limits: &Limits,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadShape {
                n,
                found: "empty carrier".into(),
            });
        }
        if n > limits.max_n {
            return Err(Error::TooLarge {
                n,
                cap: limits.max_n,
            });
        }
        if flat.len() != n * n {
            return Err(Error::BadShape {
                n,
                found: format!("{} entries", flat.len()),
            });
        }
        if let Some((i, &value)) = flat.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::OutOfRange {
                row: i / n,
                col: i % n,
                value,
                n,
            });
        }
        if let Some(names) = &names {
            validate_names(n, names)?;
        }
        let table: Vec<u32> = flat.iter().map(|&v| v as u32).collect();
        if !light_test(n, &table) {
            let (x, y, z) = associativity_scan(n, &table).ok_or_else(|| {
                Error::Internal("Light's test rejected an associative table".into())
            })?;
            return Err(Error::NotAssociative { x, y, z });
        }
        Ok(Self { n, table, names })
    }

    /// Replaces the display labels.
    pub fn with_names(mut self, names: Option<Vec<String>>) -> Result<Self> {
        if let Some(names) = &names {
            validate_names(self.n, names)?;
        }
        self.names = names;
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: carriers are nonempty.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn row(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.table[x * self.n..(x + 1) * self.n]
            .iter()
            .map(|&v| v as usize)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| self.row(x).collect()).collect()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element: x,
                n: self.n,
            })
        }
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    /// `x^k` for `k >= 1` by repeated squaring.
    pub fn power(&self, x: usize, k: usize) -> usize {
        assert!(k >= 1, "powers start at 1");
        let mut result: Option<usize> = None;
        let mut base = x;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base,
                    Some(r) => self.mul(r, base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(base, base);
            }
        }
        result.unwrap_or(x)
    }

    /// `A*B = {ab : a in A, b in B}`.
    pub fn set_product(&self, a: &Subset, b: &Subset) -> Subset {
        let mut out = Subset::empty(self.n);
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn left_translate(&self, x: usize, b: &Subset) -> Subset {
        Subset::from_iter(self.n, b.iter().map(|y| self.mul(x, y)))
    }

    pub fn right_translate(&self, a: &Subset, y: usize) -> Subset {
        Subset::from_iter(self.n, a.iter().map(|x| self.mul(x, y)))
    }

    pub fn is_subsemigroup(&self, a: &Subset) -> bool {
        self.set_product(a, a).is_subset(a)
    }

    /// Whether `xy = yx` for all pairs, with the first witness otherwise.
    pub fn is_commutative(&self) -> CommutativityCheck {
        for x in 0..self.n {
            for y in x + 1..self.n {
                if self.mul(x, y) != self.mul(y, x) {
                    return CommutativityCheck {
                        commutative: false,
                        witness: Some((x, y)),
                    };
                }
            }
        }
        CommutativityCheck {
            commutative: true,
            witness: None,
        }
    }

    /// Two-sided identity, if one exists.
    pub fn identity(&self) -> Option<usize> {
        (0..self.n).find(|&e| (0..self.n).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// Two-sided zero, if one exists.
    pub fn zero(&self) -> Option<usize> {
        (0..self.n).find(|&z| (0..self.n).all(|x| self.mul(z, x) == z && self.mul(x, z) == z))
    }

    /// `X^1`: a new element `n` acting as a two-sided identity.
    pub fn adjoin_identity(&self) -> Result<Self> {
        let n = self.n;
        let flat: Vec<usize> = (0..=n)
            .flat_map(|x| (0..=n).map(move |y| (x, y)))
            .map(|(x, y)| match (x == n, y == n) {
                (true, _) => y,
                (_, true) => x,
                _ => self.mul(x, y),
            })
            .collect();
        let names = self.extended_names(&["1", "e", "id"]);
        Self::from_flat(n + 1, &flat, names, Limits::global())
    }

    /// `X^0`: a new element `n` absorbing every product.
    pub fn adjoin_zero(&self) -> Result<Self> {
        let n = self.n;
        let flat: Vec<usize> = (0..=n)
            .flat_map(|x| (0..=n).map(move |y| (x, y)))
            .map(|(x, y)| {
                if x == n || y == n {
                    n
                } else {
                    self.mul(x, y)
                }
            })
            .collect();
        let names = self.extended_names(&["0", "z", "zero"]);
        Self::from_flat(n + 1, &flat, names, Limits::global())
    }

    fn extended_names(&self, candidates: &[&str]) -> Option<Vec<String>> {
        let names = self.names.as_ref()?;
        let taken: HashSet<&str> = names.iter().map(String::as_str).collect();
        let mut fresh = candidates
            .iter()
            .find(|c| !taken.contains(**c))
            .map(|c| c.to_string())
            .unwrap_or_else(|| candidates[0].to_string());
        while taken.contains(fresh.as_str()) {
            fresh.push('\'');
        }
        let mut out = names.clone();
        out.push(fresh);
        Some(out)
    }

    /// Componentwise product; element `(s, t)` has index `s * |T| + t`.
    pub fn direct_product(&self, other: &Self) -> Result<Self> {
        let (p, q) = (self.n, other.n);
        let size = p.checked_mul(q).ok_or(Error::TooLarge {
            n: usize::MAX,
            cap: Limits::global().max_n,
        })?;
        if size > Limits::global().max_n {
            return Err(Error::TooLarge {
                n: size,
                cap: Limits::global().max_n,
            });
        }
        let flat: Vec<usize> = (0..size)
            .flat_map(|a| (0..size).map(move |b| (a, b)))
            .map(|(a, b)| self.mul(a / q, b / q) * q + other.mul(a % q, b % q))
            .collect();
        let names = match (&self.names, &other.names) {
            (None, None) => None,
            _ => Some(
                (0..size)
                    .map(|a| format!("({},{})", self.name(a / q), other.name(a % q)))
                    .collect(),
            ),
        };
        Self::from_flat(size, &flat, names, Limits::global())
    }

    /// Least product-closed superset of `a`.
    pub fn generated_subsemigroup(&self, a: &Subset) -> Result<Subset> {
        if a.is_empty() {
            return Err(Error::EmptyGenerator);
        }
        let mut closed = a.clone();
        let mut members: Vec<usize> = a.to_vec();
        let mut frontier = 0;
        // every pair (members[i], members[j]) is multiplied exactly once in
        // each order once both are present
        while frontier < members.len() {
            let x = members[frontier];
            for j in 0..=frontier {
                let y = members[j];
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if closed.insert(p) {
                        members.push(p);
                    }
                }
            }
            frontier += 1;
        }
        Ok(closed)
    }

    /// Index, period and orbit of `x`.
    pub fn monogenic(&self, x: usize) -> MonogenicData {
        let mut seen = vec![usize::MAX; self.n];
        let mut orbit = Vec::new();
        let mut current = x;
        loop {
            if seen[current] != usize::MAX {
                let index = seen[current] + 1;
                let period = orbit.len() + 1 - index;
                return MonogenicData {
                    element: x,
                    index,
                    period,
                    orbit,
                };
            }
            seen[current] = orbit.len();
            orbit.push(current);
            current = self.mul(current, x);
        }
    }

    /// The subsemigroup on `a` as a semigroup in its own right, with the
    /// embedding (new index -> old index).
    pub fn restrict(&self, a: &Subset) -> Result<(Self, Vec<usize>)> {
        if a.is_empty() {
            return Err(Error::EmptyGenerator);
        }
        let members = a.to_vec();
        let mut local = vec![usize::MAX; self.n];
        for (i, &x) in members.iter().enumerate() {
            local[x] = i;
        }
        let m = members.len();
        let mut flat = Vec::with_capacity(m * m);
        for &x in &members {
            for &y in &members {
                let p = local[self.mul(x, y)];
                if p == usize::MAX {
                    return Err(Error::BadParameter(format!(
                        "subset is not closed: {x}*{y} = {}",
                        self.mul(x, y)
                    )));
                }
                flat.push(p);
            }
        }
        let names = self
            .names
            .as_ref()
            .map(|names| members.iter().map(|&x| names[x].clone()).collect());
        Ok((
            Self::from_flat(m, &flat, names, Limits::global())?,
            members,
        ))
    }

    /// Whether `f` is a homomorphism from `self` to `target`.
    pub fn is_homomorphism(&self, target: &Self, f: &[usize]) -> bool {
        f.len() == self.n
            && (0..self.n).all(|x| {
                (0..self.n).all(|y| f[self.mul(x, y)] == target.mul(f[x], f[y]))
            })
    }
}

impl fmt::Debug for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSemigroup")
            .field("n", &self.n)
            .field("table", &self.rows())
            .field("names", &self.names)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CommutativityCheck {
    pub commutative: bool,
    pub witness: Option<(usize, usize)>,
}

fn validate_names(n: usize, names: &[String]) -> Result<()> {
    if names.len() != n {
        return Err(Error::BadParameter(format!(
            "expected {n} names, got {}",
            names.len()
        )));
    }
    let mut seen = HashSet::new();
    for name in names {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::BadParameter(format!(
                "name {name:?} must be a nonempty token without whitespace"
            )));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateName(name.clone()));
        }
    }
    Ok(())
}

/// Greedy generating set of the magma defined by `table`.
fn generating_set(n: usize, table: &[u32]) -> Vec<usize> {
    let mul = |x: usize, y: usize| table[x * n + y] as usize;
    let mut in_closure = vec![false; n];
    let mut members: Vec<usize> = Vec::new();
    let mut gens = Vec::new();
    for g in 0..n {
        if in_closure[g] {
            continue;
        }
        gens.push(g);
        in_closure[g] = true;
        let mut frontier = members.len();
        members.push(g);
        while frontier < members.len() {
            let x = members[frontier];
            for j in 0..=frontier {
                let y = members[j];
                for p in [mul(x, y), mul(y, x)] {
                    if !in_closure[p] {
                        in_closure[p] = true;
                        members.push(p);
                    }
                }
            }
            frontier += 1;
        }
    }
    gens
}

/// Light's associativity test: the table is associative iff
/// `(x*g)*y = x*(g*y)` for every generator `g` of the magma.
pub fn light_test(n: usize, table: &[u32]) -> bool {
    let mul = |x: usize, y: usize| table[x * n + y] as usize;
    generating_set(n, table).into_iter().all(|g| {
        (0..n).all(|x| {
            let xg = mul(x, g);
            (0..n).all(|y| mul(xg, y) == mul(x, mul(g, y)))
        })
    })
}

/// Full `O(n^3)` scan; returns the lexicographically first failing triple.
pub fn associativity_scan(n: usize, table: &[u32]) -> Option<(usize, usize, usize)> {
    let mul = |x: usize, y: usize| table[x * n + y] as usize;
    for x in 0..n {
        for y in 0..n {
            let xy = mul(x, y);
            for z in 0..n {
                if mul(xy, z) != mul(x, mul(y, z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}
