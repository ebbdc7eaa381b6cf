//! Counting graceful permutations.
//!
//! The main engine is a level-synchronous breadth-first search over the
//! search tree in which states are folded into equivalence classes (same used
//! labels and endpoint pairing, up to complementation). Each stored class
//! carries a [`MultiplicityPair`]: how many tree nodes it stands for in the
//! representative's own orientation and how many in the complemented one.
//! Keeping the two apart lets endpoint constraints, which are not
//! complement-symmetric, be applied without giving up the folding.

mod enumerate;
mod oracle;
mod permutation;

use std::borrow::Borrow;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::LevelStats;
use crate::state::{apply_edge, can_add_edge, canonical_codes, check_size, CanonicalKey, Orientation, PartialState};

pub use enumerate::{enumerate, Enumeration};
pub use oracle::{brute_force_count, brute_force_table, dfs_count, BRUTE_FORCE_LIMIT};
pub use permutation::{is_graceful, GracefulPermutation};

/// Restriction on the ends of the counted permutations.
///
/// `OneEndpoint(a)` counts permutations starting at `a`; `TwoEndpoints(a, b)`
/// counts permutations starting at `a` and ending at `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    None,
    OneEndpoint(usize),
    TwoEndpoints(usize, usize),
}

impl Constraint {
    pub fn validate(&self, n: usize) -> Result<()> {
        let check = |label: usize| {
            if label >= n {
                Err(Error::LabelOutOfRange { label, n })
            } else {
                Ok(())
            }
        };
        match *self {
            Constraint::None => Ok(()),
            Constraint::OneEndpoint(a) => check(a),
            Constraint::TwoEndpoints(a, b) => check(a).and(check(b)),
        }
    }

    /// The same constraint seen through the complementary labeling.
    pub fn mirrored(&self, n: usize) -> Constraint {
        match *self {
            Constraint::None => Constraint::None,
            Constraint::OneEndpoint(a) => Constraint::OneEndpoint(n - 1 - a),
            Constraint::TwoEndpoints(a, b) => Constraint::TwoEndpoints(n - 1 - a, n - 1 - b),
        }
    }

    /// Whether a partial state can still grow into a permutation meeting the
    /// constraint: required ends must keep a free slot, and two required ends
    /// may only be joined to each other by the final edge.
    #[inline]
    pub(crate) fn admits(&self, free: &[u8], forb: &[u8], next_edge_label: usize) -> bool {
        match *self {
            Constraint::None => true,
            Constraint::OneEndpoint(a) => free[a] != 0,
            Constraint::TwoEndpoints(a, b) => {
                a != b
                    && free[a] != 0
                    && free[b] != 0
                    && !(next_edge_label > 0 && free[a] == 1 && forb[a] as usize == b)
            }
        }
    }

    /// Whether a terminal state with end labels `ends` matches.
    fn accepts_ends(&self, free: &[u8]) -> bool {
        match *self {
            Constraint::None => true,
            Constraint::OneEndpoint(a) => free[a] == 1,
            Constraint::TwoEndpoints(a, b) => a != b && free[a] == 1 && free[b] == 1,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::None => f.write_str("none"),
            Constraint::OneEndpoint(a) => write!(f, "{a}"),
            Constraint::TwoEndpoints(a, b) => write!(f, "{a},{b}"),
        }
    }
}

impl FromStr for Constraint {
    type Err = Error;

    /// Parses `none`, `a` or `a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("none") {
            return Ok(Constraint::None);
        }
        let label = |t: &str| {
            t.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("malformed endpoint spec {s:?}")))
        };
        match s.split_once(',') {
            None => Ok(Constraint::OneEndpoint(label(s)?)),
            Some((a, b)) => Ok(Constraint::TwoEndpoints(label(a)?, label(b)?)),
        }
    }
}

/// Node counts of one class, split by orientation relative to the class key.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiplicityPair {
    pub direct: u128,
    pub reflected: u128,
}

impl MultiplicityPair {
    pub fn new(direct: u128, reflected: u128) -> Self {
        MultiplicityPair { direct, reflected }
    }

    pub fn is_zero(&self) -> bool {
        self.direct == 0 && self.reflected == 0
    }

    pub fn total(&self) -> Option<u128> {
        self.direct.checked_add(self.reflected)
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(MultiplicityPair {
            direct: self.direct.checked_add(other.direct)?,
            reflected: self.reflected.checked_add(other.reflected)?,
        })
    }
}

impl Borrow<[u8]> for CanonicalKey {
    fn borrow(&self) -> &[u8] {
        self.codes()
    }
}

/// All classes of one search level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMap {
    n: usize,
    /// Edge label the next expansion places.
    level: usize,
    entries: FxHashMap<CanonicalKey, MultiplicityPair>,
}

impl ClassMap {
    pub fn root(n: usize) -> Result<Self> {
        let root = PartialState::new_root(n)?;
        let (key, orientation) = root.canonicalize();
        debug_assert_eq!(orientation, Orientation::Direct);
        let mut entries = FxHashMap::default();
        entries.insert(key, MultiplicityPair::new(1, 0));
        Ok(ClassMap { n, level: n - 1, entries })
    }

    pub fn empty(n: usize, level: usize) -> Result<Self> {
        check_size(n)?;
        if level >= n {
            return Err(Error::WrongLevel { expected: n - 1, found: level });
        }
        Ok(ClassMap { n, level, entries: FxHashMap::default() })
    }

    /// Adds `pair` to the class of `state`, folding it into canonical form.
    pub fn insert_state(&mut self, state: &PartialState, pair: MultiplicityPair) -> Result<()> {
        if state.n() != self.n || state.next_edge_label() != self.level {
            return Err(Error::WrongLevel { expected: self.level, found: state.next_edge_label() });
        }
        let (key, orientation) = state.canonicalize();
        let pair = match orientation {
            Orientation::Direct => pair,
            Orientation::Reflected => MultiplicityPair::new(pair.reflected, pair.direct),
        };
        self.insert_key(key, pair)
    }

    /// Adds `pair` to the class `key`, which must be canonical and on this level.
    pub fn insert_key(&mut self, key: CanonicalKey, pair: MultiplicityPair) -> Result<()> {
        if key.n() != self.n || !key.is_canonical() {
            return Err(Error::MalformedKey("key is not a canonical key for this map".into()));
        }
        let placed = key.edges_placed();
        if self.n - 1 - self.level != placed {
            return Err(Error::WrongLevel { expected: self.level, found: self.n - 1 - placed.min(self.n - 1) });
        }
        let pair = if key.is_self_complementary() {
            let total = pair.total().ok_or(Error::Overflow { level: self.level })?;
            MultiplicityPair::new(total, 0)
        } else {
            pair
        };
        let slot = self.entries.entry(key).or_default();
        *slot = slot.checked_add(&pair).ok_or(Error::Overflow { level: self.level })?;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&MultiplicityPair> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalKey, &MultiplicityPair)> {
        self.entries.iter()
    }

    /// Entries ordered by key.
    pub fn sorted(&self) -> Vec<(&CanonicalKey, &MultiplicityPair)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_unstable_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Total number of tree nodes represented.
    pub fn node_sum(&self) -> Result<u128> {
        self.entries.values().try_fold(0u128, |acc, p| {
            p.total().and_then(|t| acc.checked_add(t)).ok_or(Error::Overflow { level: self.level })
        })
    }

    pub(crate) fn from_parts(n: usize, level: usize, entries: FxHashMap<CanonicalKey, MultiplicityPair>) -> Self {
        ClassMap { n, level, entries }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads for level expansion; 1 runs on the calling thread.
    pub threads: usize,
    /// Drop orientations that can no longer meet the constraint.
    pub prune: bool,
    /// Refuse to continue once a level holds more classes than this.
    pub max_classes: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            prune: true,
            max_classes: None,
        }
    }
}

impl SearchOptions {
    pub fn single_threaded() -> Self {
        SearchOptions { threads: 1, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub n: usize,
    pub constraint: Constraint,
    pub count: u128,
    /// One entry per map produced, starting with the map the run started from.
    pub levels: Vec<LevelStats>,
    pub elapsed: Duration,
}

// Parents handled per work unit in parallel expansion.
const CHUNK: usize = 1024;

type Entries = FxHashMap<CanonicalKey, MultiplicityPair>;

struct Scratch {
    free: Vec<u8>,
    forb: Vec<u8>,
    child_free: Vec<u8>,
    child_forb: Vec<u8>,
    codes: Vec<u8>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            free: vec![0; n],
            forb: vec![0; n],
            child_free: vec![0; n],
            child_forb: vec![0; n],
            codes: vec![0; n],
        }
    }
}

fn add_into(map: &mut Entries, codes: &[u8], pair: MultiplicityPair, level: usize) -> Result<()> {
    if let Some(slot) = map.get_mut(codes) {
        *slot = slot.checked_add(&pair).ok_or(Error::Overflow { level })?;
    } else {
        map.insert(CanonicalKey::from_codes(codes.into()), pair);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn expand_parent(
    key: &CanonicalKey,
    pair: &MultiplicityPair,
    n: usize,
    level: usize,
    constraint: &Constraint,
    mirrored: &Constraint,
    prune: bool,
    scratch: &mut Scratch,
    out: &mut Entries,
) -> Result<()> {
    key.unpack(&mut scratch.free, &mut scratch.forb);
    let child_level = level - 1;
    for i in 0..n - level {
        let (u, v) = (i, i + level);
        if !can_add_edge(&scratch.free, &scratch.forb, u, v) {
            continue;
        }
        scratch.child_free.copy_from_slice(&scratch.free);
        scratch.child_forb.copy_from_slice(&scratch.forb);
        apply_edge(&mut scratch.child_free, &mut scratch.child_forb, u, v);

        // Nodes shaped like this child stem from the parent's direct slot;
        // their complements stem from the reflected slot.
        let (mut same, mut mirror) = (pair.direct, pair.reflected);
        if prune {
            if same != 0 && !constraint.admits(&scratch.child_free, &scratch.child_forb, child_level) {
                same = 0;
            }
            if mirror != 0 && !mirrored.admits(&scratch.child_free, &scratch.child_forb, child_level) {
                mirror = 0;
            }
        }
        if same == 0 && mirror == 0 {
            continue;
        }
        let orientation = canonical_codes(&scratch.child_free, &scratch.child_forb, &mut scratch.codes);
        let mut add = match orientation {
            Orientation::Direct => MultiplicityPair::new(same, mirror),
            Orientation::Reflected => MultiplicityPair::new(mirror, same),
        };
        if add.reflected != 0 && is_self_complementary_codes(&scratch.codes, n) {
            add = MultiplicityPair::new(add.total().ok_or(Error::Overflow { level: child_level })?, 0);
        }
        add_into(out, &scratch.codes, add, child_level)?;
    }
    Ok(())
}

fn is_self_complementary_codes(codes: &[u8], n: usize) -> bool {
    // A canonical key is self-complementary iff its reflected reading equals it.
    (0..n).all(|u| {
        let w = n - 1 - u;
        let c = codes[w];
        let r = match c {
            0 | 0xFF => c,
            p => (n - 1 - (p as usize - 1)) as u8 + 1,
        };
        r == codes[u]
    })
}

fn merge(mut a: Entries, mut b: Entries, level: usize) -> Result<Entries> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    for (k, v) in b {
        let slot = a.entry(k).or_default();
        *slot = slot.checked_add(&v).ok_or(Error::Overflow { level })?;
    }
    Ok(a)
}

/// Expands every class by one edge label, sequentially and with pruning.
pub fn expand_level(map: &ClassMap, constraint: &Constraint) -> Result<ClassMap> {
    expand_level_with(map, constraint, true, false)
}

/// Expands every class by one edge label.
///
/// With `parallel`, parents are split into chunks expanded on the current
/// rayon pool and the partial maps merged; the result does not depend on the
/// schedule because pair addition is commutative and associative.
pub fn expand_level_with(map: &ClassMap, constraint: &Constraint, prune: bool, parallel: bool) -> Result<ClassMap> {
    let n = map.n;
    let level = map.level;
    if level == 0 {
        return Err(Error::WrongLevel { expected: 1, found: 0 });
    }
    constraint.validate(n)?;
    let mirrored = constraint.mirrored(n);

    let entries = if parallel && map.entries.len() > CHUNK {
        let parents: Vec<_> = map.entries.iter().collect();
        parents
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut scratch = Scratch::new(n);
                let mut out = Entries::default();
                for (k, p) in chunk {
                    expand_parent(k, p, n, level, constraint, &mirrored, prune, &mut scratch, &mut out)?;
                }
                Ok(out)
            })
            .try_reduce(Entries::default, |a, b| merge(a, b, level - 1))?
    } else {
        let mut scratch = Scratch::new(n);
        let mut out = Entries::default();
        for (k, p) in &map.entries {
            expand_parent(k, p, n, level, constraint, &mirrored, prune, &mut scratch, &mut out)?;
        }
        out
    };
    Ok(ClassMap { n, level: level - 1, entries })
}

/// Reads the count off a terminal map.
pub fn finalize(map: &ClassMap, constraint: &Constraint) -> Result<u128> {
    if map.level != 0 {
        return Err(Error::WrongLevel { expected: 0, found: map.level });
    }
    let n = map.n;
    constraint.validate(n)?;
    let overflow = || Error::Overflow { level: 0 };
    if n == 1 {
        let admits = match *constraint {
            Constraint::None => true,
            Constraint::OneEndpoint(a) => a == 0,
            Constraint::TwoEndpoints(a, b) => a == 0 && b == 0,
        };
        return if admits { map.node_sum() } else { Ok(0) };
    }
    if *constraint == Constraint::None {
        return map.node_sum()?.checked_mul(2).ok_or_else(overflow);
    }
    let mirrored = constraint.mirrored(n);
    let mut free = vec![0; n];
    let mut forb = vec![0; n];
    let mut total = 0u128;
    for (key, pair) in &map.entries {
        key.unpack(&mut free, &mut forb);
        if pair.direct != 0 && constraint.accepts_ends(&free) {
            total = total.checked_add(pair.direct).ok_or_else(overflow)?;
        }
        if pair.reflected != 0 && mirrored.accepts_ends(&free) {
            total = total.checked_add(pair.reflected).ok_or_else(overflow)?;
        }
    }
    Ok(total)
}

/// Counts graceful `n`-permutations meeting `constraint` with default options.
pub fn count(n: usize, constraint: Constraint) -> Result<CountResult> {
    count_with(n, constraint, &SearchOptions::default())
}

pub fn count_with(n: usize, constraint: Constraint, opts: &SearchOptions) -> Result<CountResult> {
    check_size(n)?;
    constraint.validate(n)?;
    run_from(ClassMap::root(n)?, constraint, opts, |_| Ok(()))
}

/// Runs the search from `start` down to the terminal level, calling
/// `on_level` on every map after it is complete (the start map included).
pub fn run_from<F>(
    start: ClassMap,
    constraint: Constraint,
    opts: &SearchOptions,
    mut on_level: F,
) -> Result<CountResult>
where
    F: FnMut(&ClassMap) -> Result<()>,
{
    let clock = Instant::now();
    let n = start.n;
    constraint.validate(n)?;
    let pool = if opts.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut levels = Vec::with_capacity(start.level + 1);
    let mut map = start;
    let mut level_clock = Instant::now();
    loop {
        levels.push(LevelStats {
            level: map.level,
            class_count: map.len(),
            node_sum: map.node_sum()?,
            wall_time: level_clock.elapsed(),
        });
        on_level(&map)?;
        if map.level == 0 {
            break;
        }
        if map.is_empty() {
            map = ClassMap { n, level: 0, entries: Entries::default() };
            continue;
        }
        level_clock = Instant::now();
        let next = match &pool {
            Some(pool) => pool.install(|| expand_level_with(&map, &constraint, opts.prune, true))?,
            None => expand_level_with(&map, &constraint, opts.prune, false)?,
        };
        if let Some(budget) = opts.max_classes {
            if next.len() > budget {
                return Err(Error::BudgetExceeded { level: next.level, classes: next.len(), budget });
            }
        }
        map = next;
    }
    let count = finalize(&map, &constraint)?;
    Ok(CountResult { n, constraint, count, levels, elapsed: clock.elapsed() })
}
