//! Reference counters used to cross-check the folded search.

use super::{is_graceful, Constraint};
use crate::error::{Error, Result};
use crate::state::{apply_edge, can_add_edge, check_size};

/// Largest `n` the brute-force counter accepts (11! permutations).
pub const BRUTE_FORCE_LIMIT: usize = 11;

/// Tally of graceful permutations by `(first, last)` label, found by testing
/// every one of the `n!` permutations.
pub fn brute_force_table(n: usize) -> Result<Vec<Vec<u128>>> {
    check_size(n)?;
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let mut table = vec![vec![0u128; n]; n];
    let mut seq: Vec<usize> = (0..n).collect();
    let mut tally = |s: &[usize]| {
        if is_graceful(s) {
            table[s[0]][s[n - 1]] += 1;
        }
    };
    // Heap's algorithm, iterative form.
    tally(&seq);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                seq.swap(0, i);
            } else {
                seq.swap(c[i], i);
            }
            tally(&seq);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(table)
}

pub fn brute_force_count(n: usize, constraint: Constraint) -> Result<u128> {
    constraint.validate(n)?;
    let table = brute_force_table(n)?;
    Ok(match constraint {
        Constraint::None => table.iter().flatten().sum(),
        Constraint::OneEndpoint(a) => table[a].iter().sum(),
        Constraint::TwoEndpoints(a, b) => table[a][b],
    })
}

/// Plain recursive walk of the whole search tree, one node at a time.
pub fn dfs_count(n: usize, constraint: Constraint) -> Result<u128> {
    check_size(n)?;
    constraint.validate(n)?;
    if n == 1 {
        return Ok(match constraint {
            Constraint::None | Constraint::OneEndpoint(0) | Constraint::TwoEndpoints(0, 0) => 1,
            _ => 0,
        });
    }
    if let Constraint::TwoEndpoints(a, b) = constraint {
        if a == b {
            return Ok(0);
        }
    }
    let required: Vec<usize> = match constraint {
        Constraint::None => vec![],
        Constraint::OneEndpoint(a) => vec![a],
        Constraint::TwoEndpoints(a, b) => vec![a, b],
    };
    let mut walk = Walk { n, free: vec![2; n], forb: (0..n as u8).collect(), required, leaves: 0 };
    walk.descend(n - 1);
    Ok(match constraint {
        Constraint::None => 2 * walk.leaves,
        _ => walk.leaves,
    })
}

struct Walk {
    n: usize,
    free: Vec<u8>,
    forb: Vec<u8>,
    required: Vec<usize>,
    leaves: u128,
}

impl Walk {
    fn descend(&mut self, k: usize) {
        if self.required.iter().any(|&x| self.free[x] == 0) {
            return;
        }
        if k == 0 {
            if self.required.iter().all(|&x| self.free[x] == 1) {
                self.leaves += 1;
            }
            return;
        }
        for u in 0..self.n - k {
            let v = u + k;
            if !can_add_edge(&self.free, &self.forb, u, v) {
                continue;
            }
            let (fu, fv) = (self.forb[u] as usize, self.forb[v] as usize);
            let (old_fu, old_fv) = (self.forb[fu], self.forb[fv]);
            apply_edge(&mut self.free, &mut self.forb, u, v);
            self.descend(k - 1);
            self.free[u] += 1;
            self.free[v] += 1;
            self.forb[fv] = old_fv;
            self.forb[fu] = old_fu;
        }
    }
}
