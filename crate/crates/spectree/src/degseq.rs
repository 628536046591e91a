//! Degree sequences and the majorization partial order.
//!
//! A sequence is kept normalized (non-increasing). Tree sequences are the
//! sequences realized by some tree: all entries positive and summing to
//! 2(n-1). The single-vertex sequence (0) is accepted as a degenerate tree
//! sequence so that callers never have to special-case n = 1.

use crate::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Hard cap on sequence length, to keep exponent notation from requesting
/// absurd allocations ("1^999999999999").
const MAX_LEN: usize = 100_000_000;

/// A normalized (non-increasing) degree sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
}

impl DegreeSequence {
    /// Builds a sequence from arbitrary-order degrees, sorting them
    /// non-increasing. Entries must be positive unless the sequence is the
    /// single-vertex (0).
    pub fn new(mut degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidInput("empty degree sequence".into()));
        }
        if degrees.len() > MAX_LEN {
            return Err(Error::InvalidInput(format!(
                "degree sequence too long ({} entries)",
                degrees.len()
            )));
        }
        if degrees.len() >= 2 && degrees.contains(&0) {
            return Err(Error::InvalidInput(
                "zero degree in a sequence of length >= 2".into(),
            ));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(DegreeSequence { degrees })
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees[0]
    }

    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Number of entries equal to 1.
    pub fn leaf_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d == 1).count()
    }

    /// True iff some tree realizes this sequence: n >= 2 with sum 2(n-1),
    /// or the degenerate single-vertex sequence (0).
    pub fn is_tree_sequence(&self) -> bool {
        let n = self.n();
        if n == 1 {
            return self.degrees[0] == 0;
        }
        self.degrees[n - 1] >= 1 && self.sum() == 2 * (n - 1)
    }

    /// The star sequence (n-1, 1, ..., 1).
    pub fn star(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("star sequence needs n >= 2".into()));
        }
        let mut d = vec![1; n];
        d[0] = n - 1;
        DegreeSequence::new(d)
    }

    /// The balanced-spider sequence (k, 2, ..., 2, 1, ..., 1) with exactly
    /// k pendant entries; requires 2 <= k <= n-1.
    pub fn spider(n: usize, k: usize) -> Result<Self> {
        if n < 3 || k < 2 || k > n - 1 {
            return Err(Error::InvalidInput(format!(
                "spider sequence needs 2 <= k <= n-1, got n={n}, k={k}"
            )));
        }
        let mut d = vec![2; n];
        d[0] = k;
        for e in d[n - k..].iter_mut() {
            *e = 1;
        }
        DegreeSequence::new(d)
    }
}

impl fmt::Display for DegreeSequence {
    /// Canonical exponent notation with strictly decreasing bases, e.g.
    /// "4^2,3^4,2^3,1^10".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.degrees.len() {
            let d = self.degrees[i];
            let mut j = i;
            while j < self.degrees.len() && self.degrees[j] == d {
                j += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}^{}", d, j - i)?;
            first = false;
            i = j;
        }
        Ok(())
    }
}

impl FromStr for DegreeSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_degree_sequence(s)
    }
}

impl Serialize for DegreeSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DegreeSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_degree_sequence(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated list ("4,4,3,3"), exponent notation
/// ("4^2,3^4,2^3,1^10"), or a mix of both. Whitespace around commas is
/// tolerated. The result is normalized.
pub fn parse_degree_sequence(text: &str) -> Result<DegreeSequence> {
    if text.trim().is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut degrees = Vec::new();
    for raw in text.split(',') {
        let token = raw.trim();
        if token.is_empty() {
            return Err(Error::Parse(format!("empty token in {text:?}")));
        }
        let (degree, count) = match token.split_once('^') {
            None => (parse_int(token)?, 1),
            Some((d, m)) => {
                let count = parse_int(m)?;
                if count == 0 {
                    return Err(Error::Parse(format!("zero count in token {token:?}")));
                }
                (parse_int(d)?, count)
            }
        };
        if degrees.len().saturating_add(count) > MAX_LEN {
            return Err(Error::Parse("sequence too long".into()));
        }
        degrees.extend(std::iter::repeat_n(degree, count));
    }
    if degrees.len() >= 2 && degrees.contains(&0) {
        return Err(Error::Parse(
            "zero degree in a sequence of length >= 2".into(),
        ));
    }
    DegreeSequence::new(degrees)
}

fn parse_int(token: &str) -> Result<usize> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed token {token:?}")));
    }
    token
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("integer out of range: {token:?}")))
}

/// Outcome of comparing two sequences under majorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MajorizationRelation {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Compares a and b under the majorization order: a ◁ b iff n_a <= n_b,
/// a != b, and every prefix sum of a is at most the matching prefix sum of
/// b (for j = 0..n_a-1). Returns Equal for identical sequences and
/// Incomparable when neither direction holds.
pub fn majorization_compare(a: &DegreeSequence, b: &DegreeSequence) -> MajorizationRelation {
    if a == b {
        return MajorizationRelation::Equal;
    }
    if prefix_dominated(a, b) {
        return MajorizationRelation::Less;
    }
    if prefix_dominated(b, a) {
        return MajorizationRelation::Greater;
    }
    MajorizationRelation::Incomparable
}

/// True iff a ◁ b holds apart from the a != b requirement, i.e. n_a <= n_b
/// and prefix sums of a never exceed those of b.
fn prefix_dominated(a: &DegreeSequence, b: &DegreeSequence) -> bool {
    if a.n() > b.n() {
        return false;
    }
    let mut sa: u64 = 0;
    let mut sb: u64 = 0;
    for j in 0..a.n() {
        sa += a.degrees[j] as u64;
        sb += b.degrees[j] as u64;
        if sa > sb {
            return false;
        }
    }
    true
}

/// All tree sequences of length n, in lexicographically decreasing order.
/// Generated as integer partitions of 2(n-1) into n positive parts with
/// each part at most n-1.
pub fn enumerate_tree_sequences(n: usize) -> Result<Vec<DegreeSequence>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "enumerate_tree_sequences needs n >= 2, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    descend(2 * (n - 1), n, n - 1, &mut cur, &mut out);
    Ok(out)
}

fn descend(
    remaining: usize,
    slots: usize,
    max_part: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<DegreeSequence>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(DegreeSequence {
                degrees: cur.clone(),
            });
        }
        return;
    }
    // Each remaining part is at least 1 and at most the previous part, so
    // d must leave between slots-1 and d*(slots-1) for the rest.
    let hi = max_part.min(remaining.saturating_sub(slots - 1));
    let lo = remaining.div_ceil(slots).max(1);
    for d in (lo..=hi).rev() {
        cur.push(d);
        descend(remaining - d, slots - 1, d, cur, out);
        cur.pop();
    }
}
