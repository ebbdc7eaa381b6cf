use super::{Constraint, GracefulPermutation};
use crate::error::Result;
use crate::state::{apply_edge, can_add_edge, check_size};

/// Permutations produced by [`enumerate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Enumeration {
    pub permutations: Vec<GracefulPermutation>,
    /// Set when more permutations exist than the cap allowed.
    pub truncated: bool,
}

/// Lists graceful permutations meeting `constraint`, at most `limit` of them.
///
/// Order is deterministic: leaves in search-tree order and, without a
/// constraint, each path read from its smaller end first and then reversed.
pub fn enumerate(n: usize, constraint: Constraint, limit: Option<usize>) -> Result<Enumeration> {
    check_size(n)?;
    constraint.validate(n)?;
    let limit = limit.unwrap_or(usize::MAX);
    let mut out = Enumeration::default();
    if n == 1 {
        let admitted =
            matches!(constraint, Constraint::None | Constraint::OneEndpoint(0) | Constraint::TwoEndpoints(0, 0));
        if admitted {
            if limit == 0 {
                out.truncated = true;
            } else {
                out.permutations.push(GracefulPermutation::new_unchecked(vec![0]));
            }
        }
        return Ok(out);
    }
    let mut walk = Walk {
        n,
        constraint,
        limit,
        free: vec![2; n],
        forb: (0..n as u8).collect(),
        adj: vec![Vec::with_capacity(2); n],
        out,
    };
    walk.descend(n - 1);
    Ok(walk.out)
}

struct Walk {
    n: usize,
    constraint: Constraint,
    limit: usize,
    free: Vec<u8>,
    forb: Vec<u8>,
    adj: Vec<Vec<usize>>,
    out: Enumeration,
}

impl Walk {
    fn dead(&self) -> bool {
        match self.constraint {
            Constraint::None => false,
            Constraint::OneEndpoint(a) => self.free[a] == 0,
            Constraint::TwoEndpoints(a, b) => a == b || self.free[a] == 0 || self.free[b] == 0,
        }
    }

    fn read_from(&self, start: usize) -> Vec<usize> {
        let mut seq = Vec::with_capacity(self.n);
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            seq.push(cur);
            match self.adj[cur].iter().copied().find(|&x| x != prev) {
                Some(next) => {
                    prev = cur;
                    cur = next;
                }
                None => break,
            }
        }
        seq
    }

    fn emit(&mut self, seq: Vec<usize>) -> bool {
        if self.out.permutations.len() >= self.limit {
            self.out.truncated = true;
            return false;
        }
        self.out.permutations.push(GracefulPermutation::new_unchecked(seq));
        true
    }

    /// Returns false once the cap is hit.
    fn leaf(&mut self) -> bool {
        let ends: Vec<usize> = (0..self.n).filter(|&u| self.free[u] == 1).collect();
        debug_assert_eq!(ends.len(), 2);
        let (lo, hi) = (ends[0], ends[1]);
        match self.constraint {
            Constraint::None => {
                let seq = self.read_from(lo);
                let mut rev = seq.clone();
                rev.reverse();
                self.emit(seq) && self.emit(rev)
            }
            Constraint::OneEndpoint(a) => {
                if a == lo || a == hi {
                    let seq = self.read_from(a);
                    return self.emit(seq);
                }
                true
            }
            Constraint::TwoEndpoints(a, b) => {
                if (a == lo && b == hi) || (a == hi && b == lo) {
                    let seq = self.read_from(a);
                    return self.emit(seq);
                }
                true
            }
        }
    }

    fn descend(&mut self, k: usize) -> bool {
        if self.dead() {
            return true;
        }
        if k == 0 {
            return self.leaf();
        }
        for u in 0..self.n - k {
            let v = u + k;
            if !can_add_edge(&self.free, &self.forb, u, v) {
                continue;
            }
            let (fu, fv) = (self.forb[u] as usize, self.forb[v] as usize);
            let (old_fu, old_fv) = (self.forb[fu], self.forb[fv]);
            apply_edge(&mut self.free, &mut self.forb, u, v);
            self.adj[u].push(v);
            self.adj[v].push(u);
            let go_on = self.descend(k - 1);
            self.adj[u].pop();
            self.adj[v].pop();
            self.free[u] += 1;
            self.free[v] += 1;
            self.forb[fv] = old_fv;
            self.forb[fu] = old_fu;
            if !go_on {
                return false;
            }
        }
        true
    }
}
