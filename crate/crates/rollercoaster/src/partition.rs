//! Minimum partitions of a permutation into disjoint strictly monotone
//! subsequences, the run-pairing construction that covers alternating
//! extremal permutations, and the closed-form ceiling on their partition
//! number.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::perm::{Direction, PermError, Permutation, PositionSet};
use crate::search::RcSet;

/// Hard ceiling for the set-partition oracle (Bell-number cost).
pub const ORACLE_MAX_N: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("the set-partition oracle is limited to n ≤ {max}, got n = {n}")]
    OracleGuard { n: usize, max: usize },
    #[error("bound formula requires n ≥ 3, got n = {0}")]
    BoundDomain(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failure: {0}")]
    ConstructionFailure(String),
    #[error("cannot take p_max of an empty set")]
    EmptyRcSet,
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Direction tag of one partition piece. Length-1 pieces are tagged
/// `singleton`; any two values are monotone, so length-2 pieces take the
/// direction their values dictate.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum PieceDirection {
    #[serde(rename = "inc")]
    Increasing,
    #[serde(rename = "dec")]
    Decreasing,
    #[serde(rename = "singleton")]
    Singleton,
}

impl fmt::Display for PieceDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PieceDirection::Increasing => "inc",
            PieceDirection::Decreasing => "dec",
            PieceDirection::Singleton => "singleton",
        })
    }
}

/// One block of a partition: positions of the host permutation whose values
/// are strictly monotone in the stated direction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonotonePiece {
    pub positions: PositionSet,
    pub direction: PieceDirection,
}

impl MonotonePiece {
    /// Classifies and wraps a nonempty, strictly increasing position list
    /// whose values are checked against the host.
    fn from_positions(perm: &Permutation, positions: Vec<usize>) -> Result<Self, PartitionError> {
        let set = PositionSet::new(positions)?;
        let values = perm.subsequence(&set)?;
        let direction = match values.len() {
            0 => {
                return Err(PartitionError::ConstructionFailure(
                    "empty piece".to_string(),
                ))
            }
            1 => PieceDirection::Singleton,
            _ if values.windows(2).all(|w| w[0] < w[1]) => PieceDirection::Increasing,
            _ if values.windows(2).all(|w| w[0] > w[1]) => PieceDirection::Decreasing,
            _ => {
                return Err(PartitionError::ConstructionFailure(format!(
                    "values {values:?} at positions {:?} are not monotone",
                    set.positions()
                )))
            }
        };
        Ok(MonotonePiece {
            positions: set,
            direction,
        })
    }
}

/// Source of a cover: the exact minimizer or the run-pairing construction.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum CoverSource {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "constructive")]
    Constructive,
}

/// A disjoint cover of all positions of `perm` by monotone pieces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionCover {
    pub perm: Permutation,
    pub pieces: Vec<MonotonePiece>,
    pub source: CoverSource,
}

impl PartitionCover {
    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Re-checks the cover invariants: pieces are pairwise disjoint, their
    /// union is all positions 1..n, and each piece is monotone as tagged.
    pub fn validate(&self) -> Result<(), PartitionError> {
        let n = self.perm.n();
        let mut covered = vec![false; n];
        for piece in &self.pieces {
            let values = self.perm.subsequence(&piece.positions)?;
            let ok = match piece.direction {
                PieceDirection::Singleton => values.len() == 1,
                PieceDirection::Increasing => {
                    values.len() >= 2 && values.windows(2).all(|w| w[0] < w[1])
                }
                PieceDirection::Decreasing => {
                    values.len() >= 2 && values.windows(2).all(|w| w[0] > w[1])
                }
            };
            if !ok {
                return Err(PartitionError::ConstructionFailure(format!(
                    "piece at positions {:?} is not {} in {}",
                    piece.positions.positions(),
                    piece.direction,
                    self.perm
                )));
            }
            for &p in piece.positions.positions() {
                if covered[p - 1] {
                    return Err(PartitionError::ConstructionFailure(format!(
                        "position {p} covered twice"
                    )));
                }
                covered[p - 1] = true;
            }
        }
        if let Some(hole) = covered.iter().position(|&c| !c) {
            return Err(PartitionError::ConstructionFailure(format!(
                "position {} is uncovered",
                hole + 1
            )));
        }
        Ok(())
    }
}

impl Serialize for PartitionCover {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct PieceJson<'a> {
            positions: &'a PositionSet,
            values: Vec<u32>,
            direction: PieceDirection,
        }
        let mut state = serializer.serialize_struct("PartitionCover", 3)?;
        state.serialize_field("perm", &self.perm)?;
        let pieces: Vec<PieceJson<'_>> = self
            .pieces
            .iter()
            .map(|piece| PieceJson {
                positions: &piece.positions,
                values: self
                    .perm
                    .subsequence(&piece.positions)
                    .expect("cover positions are in range"),
                direction: piece.direction,
            })
            .collect();
        state.serialize_field("pieces", &pieces)?;
        state.serialize_field("source", &self.source)?;
        state.end()
    }
}

/// One row of the partition-number table.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BoundRow {
    pub n: u32,
    pub p_max: u32,
    pub bound: u32,
}

impl fmt::Display for BoundRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.n, self.p_max, self.bound)
    }
}

/// `⌈n / L⌉` where L is the longest monotone subsequence length: no cover
/// can do better, since each piece is a monotone subsequence.
pub fn lower_bound(p: &Permutation) -> usize {
    let (set, _) = crate::perm::longest_monotone(p);
    p.n().div_ceil(set.len())
}

/// The minimum number of disjoint monotone pieces covering `p`, with a
/// witness cover of exactly that size.
///
/// Iterative deepening on the piece count k, starting at [`lower_bound`]:
/// positions are assigned left to right to one of k chains, each chain
/// carrying (direction, last value). Position 1 always opens chain 1, and a
/// new chain may only be opened if the previous one is nonempty.
pub fn partition_number(p: &Permutation) -> (usize, PartitionCover) {
    let n = p.n();
    for k in lower_bound(p)..=n {
        if let Some(assignment) = try_cover(p.values(), k) {
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
            for (pos0, &chain) in assignment.iter().enumerate() {
                groups[chain].push(pos0 + 1);
            }
            let pieces = groups
                .into_iter()
                .filter(|g| !g.is_empty())
                .map(|g| MonotonePiece::from_positions(p, g).expect("chains are monotone"))
                .collect();
            let cover = PartitionCover {
                perm: p.clone(),
                pieces,
                source: CoverSource::Exact,
            };
            debug_assert!(cover.validate().is_ok());
            return (k, cover);
        }
    }
    unreachable!("k = n always succeeds with singleton chains")
}

#[derive(Copy, Clone)]
struct Chain {
    last: u32,
    len: usize,
    dir: Option<Direction>,
}

impl Chain {
    fn accepts(&self, v: u32) -> bool {
        match self.dir {
            None => true,
            Some(Direction::Increasing) => v > self.last,
            Some(Direction::Decreasing) => v < self.last,
        }
    }

    fn extended(mut self, v: u32) -> Chain {
        if self.len >= 1 && self.dir.is_none() {
            self.dir = Some(if v > self.last {
                Direction::Increasing
            } else {
                Direction::Decreasing
            });
        }
        self.last = v;
        self.len += 1;
        self
    }
}

/// Depth-first search for an assignment of all positions to ≤ k chains.
fn try_cover(values: &[u32], k: usize) -> Option<Vec<usize>> {
    let mut chains: Vec<Chain> = Vec::with_capacity(k);
    let mut assignment = vec![usize::MAX; values.len()];
    if assign(values, 0, k, &mut chains, &mut assignment) {
        Some(assignment)
    } else {
        None
    }
}

fn assign(
    values: &[u32],
    pos: usize,
    k: usize,
    chains: &mut Vec<Chain>,
    assignment: &mut Vec<usize>,
) -> bool {
    if pos == values.len() {
        return true;
    }
    let v = values[pos];

    // Try existing chains tightest-fit first: the accepting chain whose last
    // value is nearest to v constrains the future least.
    let mut order: Vec<usize> = (0..chains.len())
        .filter(|&c| chains[c].accepts(v))
        .collect();
    order.sort_by_key(|&c| v.abs_diff(chains[c].last));
    for c in order {
        let saved = chains[c];
        chains[c] = saved.extended(v);
        assignment[pos] = c;
        if assign(values, pos + 1, k, chains, assignment) {
            return true;
        }
        chains[c] = saved;
    }

    // Open a fresh chain; only the first empty slot is tried (chains are
    // interchangeable until used).
    if chains.len() < k {
        chains.push(Chain {
            last: v,
            len: 1,
            dir: None,
        });
        assignment[pos] = chains.len() - 1;
        if assign(values, pos + 1, k, chains, assignment) {
            return true;
        }
        chains.pop();
    }
    assignment[pos] = usize::MAX;
    false
}

/// Brute-force minimum over every set partition of the positions, keeping
/// those whose blocks are all monotone. Enumerates restricted growth
/// strings; shares no pruning with [`partition_number`].
pub fn partition_number_oracle(p: &Permutation) -> Result<usize, PartitionError> {
    let n = p.n();
    if n > ORACLE_MAX_N {
        return Err(PartitionError::OracleGuard {
            n,
            max: ORACLE_MAX_N,
        });
    }
    let values = p.values();
    let mut rgs = vec![0usize; n];
    let mut best = n;
    loop {
        let blocks = rgs.iter().copied().max().unwrap_or(0) + 1;
        if blocks < best && rgs_blocks_monotone(values, &rgs, blocks) {
            best = blocks;
        }
        if !next_rgs(&mut rgs) {
            break;
        }
    }
    Ok(best)
}

fn rgs_blocks_monotone(values: &[u32], rgs: &[usize], blocks: usize) -> bool {
    // per-block state: (last value, direction once length ≥ 2)
    let mut last: Vec<Option<u32>> = vec![None; blocks];
    let mut dir: Vec<Option<bool>> = vec![None; blocks]; // true = increasing
    for (i, &b) in rgs.iter().enumerate() {
        let v = values[i];
        match last[b] {
            None => {}
            Some(prev) => {
                let rising = v > prev;
                match dir[b] {
                    None => dir[b] = Some(rising),
                    Some(d) if d == rising => {}
                    Some(_) => return false,
                }
            }
        }
        last[b] = Some(v);
    }
    true
}

/// Advances a restricted growth string; false when exhausted.
fn next_rgs(rgs: &mut [usize]) -> bool {
    let n = rgs.len();
    // prefix_max[i] = max(rgs[0..=i])
    let mut prefix_max = vec![0usize; n];
    for i in 1..n {
        prefix_max[i] = prefix_max[i - 1].max(rgs[i]);
    }
    for i in (1..n).rev() {
        if rgs[i] <= prefix_max[i - 1] {
            rgs[i] += 1;
            for slot in rgs.iter_mut().skip(i + 1) {
                *slot = 0;
            }
            return true;
        }
    }
    false
}

/// The closed-form ceiling `⌊⌈(n−2)/2⌉ / 2⌋ + 2` on the partition number of
/// an extremal alternating permutation of length n ≥ 3.
pub fn bound_formula(n: u32) -> Result<u32, PartitionError> {
    if n < 3 {
        return Err(PartitionError::BoundDomain(n));
    }
    Ok((n - 2).div_ceil(2) / 2 + 2)
}

/// Number of interior runs the pairing argument budgets for: the worst-case
/// count of contiguous increasing runs among the below-endpoint values.
fn claimed_bottom_runs(n: usize) -> usize {
    (n - 2).div_ceil(2) / 2 + 1
}

/// Builds the run-pairing cover for a permutation with the extremal profile:
/// alternating or reverse alternating with endpoint values differing by 1.
///
/// For a reverse-alternating input the interior splits into the bottom
/// (even positions, values below both endpoints) and the top (odd interior
/// positions, values above both endpoints); each side is cut into maximal
/// contiguous increasing runs; the first top run joins π₁, the k-th bottom
/// run joins the (k+1)-st top run, and πₙ takes the last unpaired bottom run
/// (the second-to-last when the bottom has more runs than the top, leaving
/// the final bottom run on its own). Alternating inputs are handled by
/// building the cover on the complement and mapping it back, which flips
/// every piece to decreasing.
///
/// Any emitted group that fails to be monotone is reported as a
/// [`PartitionError::ConstructionFailure`]; such an input (possible because
/// the profile precondition is weaker than extremality) is never repaired
/// silently.
pub fn constructive_cover(p: &Permutation) -> Result<PartitionCover, PartitionError> {
    let n = p.n();
    if n >= 2 && p.at(1).abs_diff(p.at(n)) != 1 {
        return Err(PartitionError::Precondition(format!(
            "endpoints {} and {} do not differ by 1",
            p.at(1),
            p.at(n)
        )));
    }
    if p.is_reverse_alternating() {
        let groups = pair_runs(p)?;
        finish_cover(p, groups)
    } else if p.is_alternating() {
        let comp = p.complement();
        let groups = pair_runs(&comp)?;
        finish_cover(p, groups)
    } else {
        Err(PartitionError::Precondition(format!(
            "{p} is neither alternating nor reverse alternating"
        )))
    }
}

fn finish_cover(
    p: &Permutation,
    groups: Vec<Vec<usize>>,
) -> Result<PartitionCover, PartitionError> {
    let pieces = groups
        .into_iter()
        .map(|g| MonotonePiece::from_positions(p, g))
        .collect::<Result<Vec<_>, _>>()?;
    let cover = PartitionCover {
        perm: p.clone(),
        pieces,
        source: CoverSource::Constructive,
    };
    cover.validate()?;
    Ok(cover)
}

/// Core pairing on a reverse-alternating permutation; returns position
/// groups (1-based).
fn pair_runs(p: &Permutation) -> Result<Vec<Vec<usize>>, PartitionError> {
    let n = p.n();
    if n == 1 {
        return Ok(vec![vec![1]]);
    }
    if n == 2 {
        return Ok(vec![vec![1], vec![2]]);
    }
    let lo = p.at(1).min(p.at(n));
    let hi = p.at(1).max(p.at(n));

    // Interior split by index parity; dominance of each side over the
    // endpoints is what the pairing leans on, so check it up front.
    let mut bottom_positions = Vec::new(); // even 1-based indices
    let mut top_positions = Vec::new(); // odd interior 1-based indices
    for pos in 2..n {
        let v = p.at(pos);
        if pos % 2 == 0 {
            if v >= lo {
                return Err(PartitionError::ConstructionFailure(format!(
                    "even-index value {v} at position {pos} of {p} is not below both endpoints"
                )));
            }
            bottom_positions.push(pos);
        } else {
            if v <= hi {
                return Err(PartitionError::ConstructionFailure(format!(
                    "odd-index value {v} at position {pos} of {p} is not above both endpoints"
                )));
            }
            top_positions.push(pos);
        }
    }

    let bottom_runs = contiguous_increasing_runs(p, &bottom_positions);
    let top_runs = contiguous_increasing_runs(p, &top_positions);
    let claim = claimed_bottom_runs(n);
    if bottom_runs.len() != claim {
        log::debug!(
            "{p}: bottom splits into {} runs where the worst case allows {claim}",
            bottom_runs.len()
        );
    }

    let nb = bottom_runs.len();
    let nt = top_runs.len();
    let mut groups: Vec<Vec<usize>> = Vec::new();

    // Start point takes the first top run.
    let mut start_group = vec![1usize];
    if nt > 0 {
        start_group.extend(&top_runs[0]);
    }
    groups.push(start_group);

    // k-th bottom run joins the (k+1)-st top run.
    let paired = nb.min(nt.saturating_sub(1));
    for k in 0..paired {
        let mut g = bottom_runs[k].clone();
        g.extend(&top_runs[k + 1]);
        groups.push(g);
    }

    // End point takes the final unpaired bottom run, or the second-to-last
    // when the bottom outnumbers the top (the very last then stands alone).
    // A lone bottom run with no top at all (only n = 3) has no second-to-last
    // and joins the end point itself.
    let end_mate = if nb > nt && nb >= 2 {
        Some(nb - 2)
    } else if nb > paired {
        Some(nb - 1)
    } else {
        None
    };
    match end_mate {
        Some(idx) => {
            debug_assert!(idx >= paired);
            let mut g = bottom_runs[idx].clone();
            g.push(n);
            groups.push(g);
        }
        None => groups.push(vec![n]),
    }

    // Anything the pairing left over stands alone (each run is monotone on
    // its own); an extremal input is not expected to produce any.
    for (idx, run) in bottom_runs.iter().enumerate() {
        if idx >= paired && Some(idx) != end_mate {
            groups.push(run.clone());
        }
    }
    for run in top_runs.iter().skip(paired + 1) {
        groups.push(run.clone());
    }

    for g in &mut groups {
        g.sort_unstable();
    }
    groups.sort_by_key(|g| g[0]);
    Ok(groups)
}

/// Splits the values at `positions` (taken in position order) into maximal
/// contiguous increasing runs, returning the positions of each run.
fn contiguous_increasing_runs(p: &Permutation, positions: &[usize]) -> Vec<Vec<usize>> {
    let mut runs: Vec<Vec<usize>> = Vec::new();
    for &pos in positions {
        let v = p.at(pos);
        match runs.last_mut() {
            Some(run) if p.at(*run.last().unwrap()) < v => run.push(pos),
            _ => runs.push(vec![pos]),
        }
    }
    runs
}

/// The table row for one n: the maximum exact partition number over the
/// verified extremal set, next to the closed-form bound.
pub fn pmax(n: u32, rc: &RcSet) -> Result<BoundRow, PartitionError> {
    use rayon::prelude::*;
    if rc.perms.is_empty() {
        return Err(PartitionError::EmptyRcSet);
    }
    let p_max = rc
        .perms
        .par_iter()
        .map(|p| partition_number(p).0)
        .max()
        .expect("nonempty") as u32;
    Ok(BoundRow {
        n,
        p_max,
        bound: bound_formula(n)?,
    })
}
