//! The `.sgp` text format.
//!
//! ```text
//! # optional comment lines
//! n 2
//! names a b
//! 0 0
//! 0 1
//! ```
//!
//! Rows list `x*0 .. x*(n-1)` as 0-based indices. Anything after the last
//! row other than blank lines is rejected.

use std::fmt::Write as _;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;

/// Parses and validates a semigroup.
pub fn parse(text: &str) -> Result<FiniteSemigroup> {
    parse_with_limits(text, Limits::global())
}

pub fn parse_with_limits(text: &str, limits: &Limits) -> Result<FiniteSemigroup> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let err = |line: usize, message: String| Error::Parse { line, message };

    // header: comments, then `n <count>`
    let (line_no, header) = loop {
        match lines.next() {
            None => return Err(err(0, "missing `n <count>` line".into())),
            Some((_, l)) if l.starts_with('#') => continue,
            Some(found) => break found,
        }
    };
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("n") {
        return Err(err(line_no, format!("expected `n <count>`, found {header:?}")));
    }
    let n: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(line_no, "count is not a nonnegative integer".into()))?;
    if tokens.next().is_some() {
        return Err(err(line_no, "trailing tokens after count".into()));
    }
    if n == 0 {
        return Err(err(line_no, "count must be at least 1".into()));
    }
    if n > limits.max_n {
        return Err(Error::TooLarge {
            n,
            cap: limits.max_n,
        });
    }

    let mut names = None;
    let mut flat = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (line_no, line) in lines.by_ref() {
        let mut tokens = line.split_whitespace().peekable();
        if rows == 0 && names.is_none() && tokens.peek() == Some(&"names") {
            tokens.next();
            names = Some(tokens.map(str::to_owned).collect::<Vec<_>>());
            continue;
        }
        let row: Vec<usize> = tokens
            .map(|t| {
                t.parse()
                    .map_err(|_| err(line_no, format!("{t:?} is not an index")))
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(err(
                line_no,
                format!("row {rows} has {} entries, expected {n}", row.len()),
            ));
        }
        flat.extend(row);
        rows += 1;
        if rows == n {
            break;
        }
    }
    if rows < n {
        return Err(err(0, format!("expected {n} rows, found {rows}")));
    }
    if let Some((line_no, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(line_no, format!("trailing content {extra:?}")));
    }
    FiniteSemigroup::from_flat(n, &flat, names, limits)
}

/// Serializes a semigroup, optionally preceded by one comment line per
/// entry of `comments`.
pub fn write(s: &FiniteSemigroup, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "n {}", s.len());
    if let Some(names) = s.names() {
        let _ = writeln!(out, "names {}", names.join(" "));
    }
    for x in s.elements() {
        let row: Vec<String> = s.row(x).map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn round_trip() {
        let s = families::example_main(8).unwrap();
        let text = write(&s, &["quotient of something", "seed 7"]);
        assert!(text.starts_with("# quotient of something\n# seed 7\nn 9\n"));
        assert_eq!(parse(&text).unwrap(), s);
        let named = s.adjoin_identity().unwrap();
        assert_eq!(parse(&write(&named, &[])).unwrap(), named);
    }

    #[test]
    fn exact_layout() {
        let two = FiniteSemigroup::build(2, vec![vec![0, 0], vec![0, 1]], None).unwrap();
        assert_eq!(write(&two, &[]), "n 2\n0 0\n0 1\n");
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "",
            "# only a comment\n",
            "m 2\n0 0\n0 1\n",
            "n 2 3\n0 0\n0 1\n",
            "n 2\n0 0\n",
            "n 2\n0 0\n0 1 1\n",
            "n 2\n0 0\n0 x\n",
            "n 2\n0 0\n0 1\n0 0\n",
            "n 2\n0 0\n0 1\ngarbage\n",
            "n 0\n",
        ] {
            assert!(
                matches!(parse(bad), Err(Error::Parse { .. })),
                "accepted {bad:?}"
            );
        }
        assert!(matches!(
            parse("n 2\n0 2\n0 1\n"),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            parse("n 2\nnames a a\n0 0\n0 1\n"),
            Err(Error::DuplicateName(_))
        ));
        assert!(matches!(
            parse("n 2\n1 0\n0 0\n"),
            Err(Error::NotAssociative { .. })
        ));
    }

    #[test]
    fn tolerates_trailing_blank_lines() {
        assert_eq!(parse("n 1\n0\n\n  \n").unwrap().len(), 1);
    }
}
