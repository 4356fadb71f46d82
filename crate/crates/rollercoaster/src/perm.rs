//! Permutations in one-line notation, their symmetry operators, alternation
//! predicates, and monotone-subsequence utilities.
//!
//! Positions and values are 1-based on every public surface; interior
//! bookkeeping is 0-based.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors from constructing, parsing, or indexing permutations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("empty input")]
    Empty,
    #[error("value {0} occurs more than once")]
    Duplicate(u32),
    #[error("value {value} is out of range for a permutation of length {n}")]
    OutOfRange { value: u32, n: usize },
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("positions must be 1-based and strictly increasing")]
    InvalidPositionSet,
    #[error("position {position} is out of range for a permutation of length {n}")]
    PositionOutOfRange { position: usize, n: usize },
}

/// A permutation of `{1, 2, …, n}` in one-line notation: the i-th entry is
/// the image of position i.
///
/// ```
/// use rollercoaster::Permutation;
///
/// let p: Permutation = "2143".parse().unwrap();
/// assert_eq!(p.values(), &[2, 1, 4, 3]);
/// assert_eq!(p.to_string(), "2,1,4,3");
/// ```
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from its one-line values, enforcing that they are
    /// a rearrangement of `{1..n}`.
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        if values.is_empty() {
            return Err(PermError::Empty);
        }
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v < 1 || v as usize > n {
                return Err(PermError::OutOfRange { value: v, n });
            }
            if seen[v as usize - 1] {
                return Err(PermError::Duplicate(v));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { values })
    }

    /// The identity permutation `(1, 2, …, n)`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutations have length at least 1");
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    /// Internal constructor for values already known to be a permutation.
    pub(crate) fn from_valid(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Value at a 1-based position.
    pub fn at(&self, position: usize) -> u32 {
        self.values[position - 1]
    }

    /// The reverse `(πₙ, …, π₁)`.
    pub fn reverse(&self) -> Permutation {
        let mut values = self.values.clone();
        values.reverse();
        Permutation { values }
    }

    /// The complement `(n+1−π₁, …, n+1−πₙ)`.
    pub fn complement(&self) -> Permutation {
        let n = self.values.len() as u32;
        Permutation {
            values: self.values.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    /// True iff `π₁ < π₂ > π₃ < …` strictly throughout. Both alternation
    /// predicates hold by convention for n ≤ 2, where no zigzag pattern is
    /// pinned down yet; they are mutually exclusive from n ≥ 3 on.
    pub fn is_alternating(&self) -> bool {
        self.n() <= 2
            || self.values.windows(2).enumerate().all(|(i, w)| {
                if i % 2 == 0 {
                    w[0] < w[1]
                } else {
                    w[0] > w[1]
                }
            })
    }

    /// True iff `π₁ > π₂ < π₃ > …` strictly throughout; true by convention
    /// for n ≤ 2.
    pub fn is_reverse_alternating(&self) -> bool {
        self.n() <= 2
            || self.values.windows(2).enumerate().all(|(i, w)| {
                if i % 2 == 0 {
                    w[0] > w[1]
                } else {
                    w[0] < w[1]
                }
            })
    }

    /// Values at the given positions, in position order.
    pub fn subsequence(&self, s: &PositionSet) -> Result<Vec<u32>, PermError> {
        let n = self.n();
        s.positions()
            .iter()
            .map(|&p| {
                if p > n {
                    Err(PermError::PositionOutOfRange { position: p, n })
                } else {
                    Ok(self.values[p - 1])
                }
            })
            .collect()
    }

    /// Iterator over all permutations of `{1..n}` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n as u32).collect()),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts the delimited form `"3,2,6,1,5,4"` (commas and/or whitespace)
    /// and the compact digit form `"326154"`. The compact form can only
    /// express values below 10, so it is usable exactly when n ≤ 9.
    fn from_str(text: &str) -> Result<Self, PermError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(PermError::Empty);
        }
        let values: Vec<u32> = if text.contains(',') || text.contains(char::is_whitespace) {
            text.replace(',', " ")
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>()
                        .map_err(|_| PermError::InvalidToken(tok.to_string()))
                })
                .collect::<Result<_, _>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| PermError::InvalidToken(c.to_string()))
                })
                .collect::<Result<_, _>>()?
        };
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// A strictly increasing set of 1-based positions into a host permutation,
/// i.e. the defining index set of a subsequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PositionSet {
    positions: Vec<usize>,
}

impl PositionSet {
    pub fn new(positions: Vec<usize>) -> Result<Self, PermError> {
        if positions.first().is_some_and(|&p| p == 0) || positions.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(PermError::InvalidPositionSet);
        }
        Ok(PositionSet { positions })
    }

    /// All positions `1..=n`.
    pub fn full(n: usize) -> Self {
        PositionSet {
            positions: (1..=n).collect(),
        }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

impl Serialize for PositionSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.positions.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PositionSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let positions = Vec::<usize>::deserialize(deserializer)?;
        PositionSet::new(positions).map_err(D::Error::custom)
    }
}

/// Direction of a monotone subsequence.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "increasing")]
    Increasing,
    #[serde(rename = "decreasing")]
    Decreasing,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
        })
    }
}

/// Number of interior indices where a sequence of distinct values changes
/// direction (ascending to descending or back). Zero for fewer than three
/// entries.
pub fn switch_count(xs: &[u32]) -> usize {
    xs.windows(3)
        .filter(|w| (w[1] > w[0]) != (w[2] > w[1]))
        .count()
}

/// A maximum-length strictly monotone subsequence of `p` and its direction.
///
/// Ties are broken by the lexicographically smallest position set across both
/// directions; for the degenerate single-position case the direction is
/// reported as increasing.
pub fn longest_monotone(p: &Permutation) -> (PositionSet, Direction) {
    let v = p.values();
    let inc_start = monotone_len_starting(v, Direction::Increasing);
    let dec_start = monotone_len_starting(v, Direction::Decreasing);
    let best_inc = inc_start.iter().copied().max().unwrap_or(0);
    let best_dec = dec_start.iter().copied().max().unwrap_or(0);
    let target = best_inc.max(best_dec);

    let mut best: Option<(Vec<usize>, Direction)> = None;
    for (dir, lens, achieved) in [
        (Direction::Increasing, &inc_start, best_inc),
        (Direction::Decreasing, &dec_start, best_dec),
    ] {
        if achieved != target {
            continue;
        }
        let picked = greedy_lex_pick(v, lens, target, dir);
        match &best {
            Some((existing, _)) if *existing <= picked => {}
            _ => best = Some((picked, dir)),
        }
    }
    let (positions, dir) = best.expect("permutations are nonempty");
    (
        PositionSet::new(positions).expect("greedy construction is increasing"),
        dir,
    )
}

/// `lens[i]` = length of the longest strictly monotone (per `dir`)
/// subsequence starting at index i.
fn monotone_len_starting(v: &[u32], dir: Direction) -> Vec<usize> {
    let n = v.len();
    let mut lens = vec![1usize; n];
    for i in (0..n).rev() {
        for j in i + 1..n {
            let extends = match dir {
                Direction::Increasing => v[j] > v[i],
                Direction::Decreasing => v[j] < v[i],
            };
            if extends && lens[j] + 1 > lens[i] {
                lens[i] = lens[j] + 1;
            }
        }
    }
    lens
}

/// Greedily picks the lexicographically smallest position sequence realizing
/// a monotone subsequence of length `target`.
fn greedy_lex_pick(v: &[u32], lens: &[usize], target: usize, dir: Direction) -> Vec<usize> {
    let mut picked = Vec::with_capacity(target);
    let mut need = target;
    let mut from = 0usize;
    let mut last: Option<u32> = None;
    while need > 0 {
        for i in from..v.len() {
            let ok_value = match (last, dir) {
                (None, _) => true,
                (Some(prev), Direction::Increasing) => v[i] > prev,
                (Some(prev), Direction::Decreasing) => v[i] < prev,
            };
            if ok_value && lens[i] >= need {
                picked.push(i + 1);
                last = Some(v[i]);
                from = i + 1;
                break;
            }
        }
        need -= 1;
    }
    debug_assert_eq!(picked.len(), target);
    picked
}

/// Advances `values` to its lexicographic successor in place; returns false
/// (leaving the slice sorted ascending again) once the last arrangement has
/// been passed.
pub fn lex_successor(values: &mut [u32]) -> bool {
    let n = values.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        values.sort_unstable();
        return false;
    }
    let mut j = n - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

/// Lexicographic stream of all permutations of `{1..n}`.
pub struct AllPermutations {
    next: Option<Vec<u32>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if lex_successor(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation::from_valid(current))
    }
}
