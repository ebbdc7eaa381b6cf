//! Search-tree nodes (partial permutations) and their canonical encoding.
//!
//! A node records, for every vertex label, how many free slots it has left
//! (`free`) and, for labels sitting at the end of a partial path, the label at
//! the opposite end of that path (`forb`). Edge labels are placed from `n - 1`
//! downwards; `next_edge_label` is the edge label the next expansion places.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported label count. Labels and partners must fit in a byte
/// with room left for the sentinel codes.
pub const MAX_LABELS: usize = 254;

/// Partner byte written for labels that are not path endpoints.
pub const PARTNER_SENTINEL: u8 = 0xFF;

const CODE_INTERIOR: u8 = 0;
const CODE_UNUSED: u8 = 0xFF;

/// Which member of a complement pair a state is, relative to the class
/// representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Direct,
    Reflected,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Direct => Orientation::Reflected,
            Orientation::Reflected => Orientation::Direct,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PartialState {
    next_edge_label: usize,
    free: Vec<u8>,
    forb: Vec<u8>,
}

impl PartialState {
    /// The root of the search tree: no edges, every label unused.
    pub fn new_root(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(PartialState { next_edge_label: n - 1, free: vec![2; n], forb: (0..n as u8).collect() })
    }

    /// Builds a state from raw arrays, validating every structural invariant.
    pub fn from_parts(next_edge_label: usize, free: Vec<u8>, forb: Vec<u8>) -> Result<Self> {
        let n = free.len();
        check_size(n)?;
        if forb.len() != n {
            return Err(Error::InvalidInput(format!("free has {} entries but forb has {}", n, forb.len())));
        }
        if next_edge_label >= n {
            return Err(Error::InvalidInput(format!("next edge label {next_edge_label} out of range for n={n}")));
        }
        let mut forb = forb;
        for u in 0..n {
            match free[u] {
                0 => forb[u] = u as u8,
                1 => {
                    let p = forb[u] as usize;
                    if p >= n || p == u || free[p] != 1 || forb[p] as usize != u {
                        return Err(Error::InvalidInput(format!(
                            "endpoint {u} is not paired with a matching endpoint"
                        )));
                    }
                }
                2 => {
                    if forb[u] as usize != u {
                        return Err(Error::InvalidInput(format!("unused label {u} has forb != itself")));
                    }
                }
                f => return Err(Error::InvalidInput(format!("free[{u}] = {f} is not a slot count"))),
            }
        }
        let used: usize = free.iter().map(|&f| 2 - f as usize).sum();
        if used != 2 * (n - 1 - next_edge_label) {
            return Err(Error::InvalidInput(format!(
                "slot sum {used} does not match {} placed edges",
                n - 1 - next_edge_label
            )));
        }
        Ok(PartialState { next_edge_label, free, forb })
    }

    pub fn n(&self) -> usize {
        self.free.len()
    }

    pub fn next_edge_label(&self) -> usize {
        self.next_edge_label
    }

    pub fn edges_placed(&self) -> usize {
        self.n() - 1 - self.next_edge_label
    }

    pub fn is_terminal(&self) -> bool {
        self.next_edge_label == 0
    }

    pub fn free(&self) -> &[u8] {
        &self.free
    }

    /// The raw `forb` array. Entries of interior labels carry no meaning.
    pub fn forb(&self) -> &[u8] {
        &self.forb
    }

    /// Opposite end of `u`'s partial path, if `u` is a path endpoint.
    pub fn partner(&self, u: usize) -> Option<usize> {
        (self.free[u] == 1).then(|| self.forb[u] as usize)
    }

    /// Labels with exactly one free slot.
    pub fn endpoints(&self) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.free[u] == 1).collect()
    }

    pub fn can_add_edge(&self, u: usize, v: usize) -> bool {
        can_add_edge(&self.free, &self.forb, u, v)
    }

    /// Places the edge `{u, v}`, which must carry the next edge label.
    pub fn add_edge(&self, u: usize, v: usize) -> Result<Self> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::LabelOutOfRange { label: u.max(v), n });
        }
        if self.next_edge_label == 0 {
            return Err(Error::IllegalEdge { u, v, reason: "state is terminal" });
        }
        if u.abs_diff(v) != self.next_edge_label {
            return Err(Error::IllegalEdge { u, v, reason: "difference is not the next edge label" });
        }
        if self.free[u] == 0 || self.free[v] == 0 {
            return Err(Error::IllegalEdge { u, v, reason: "label has no free slot" });
        }
        if self.forb[u] as usize == v {
            return Err(Error::IllegalEdge { u, v, reason: "labels are ends of one path" });
        }
        let mut child = self.clone();
        apply_edge(&mut child.free, &mut child.forb, u, v);
        child.next_edge_label -= 1;
        Ok(child)
    }

    /// The complementary labeling `u -> n - 1 - u`.
    pub fn complement(&self) -> Self {
        let n = self.n();
        let mut free = vec![0; n];
        let mut forb = vec![0; n];
        for u in 0..n {
            let w = n - 1 - u;
            free[u] = self.free[w];
            forb[u] = match self.free[w] {
                1 => (n - 1 - self.forb[w] as usize) as u8,
                _ => u as u8,
            };
        }
        PartialState { next_edge_label: self.next_edge_label, free, forb }
    }

    /// Canonical class key and this state's orientation relative to it.
    pub fn canonicalize(&self) -> (CanonicalKey, Orientation) {
        let mut buf = vec![0; self.n()];
        let orientation = canonical_codes(&self.free, &self.forb, &mut buf);
        (CanonicalKey(buf.into_boxed_slice()), orientation)
    }

    /// Encoding of this state as-is (no complement folding).
    pub fn encode(&self) -> CanonicalKey {
        let mut buf = vec![0; self.n()];
        direct_codes(&self.free, &self.forb, &mut buf);
        CanonicalKey(buf.into_boxed_slice())
    }
}

/// Equality ignores `forb` on interior labels.
impl PartialEq for PartialState {
    fn eq(&self, other: &Self) -> bool {
        self.next_edge_label == other.next_edge_label
            && self.free == other.free
            && (0..self.n()).all(|u| self.free[u] != 1 || self.forb[u] == other.forb[u])
    }
}

impl Eq for PartialState {}

impl fmt::Display for PartialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} [", self.next_edge_label)?;
        for u in 0..self.n() {
            if u > 0 {
                f.write_str(" ")?;
            }
            match self.free[u] {
                0 => write!(f, "{u}:x")?,
                1 => write!(f, "{u}:{}", self.forb[u])?,
                _ => write!(f, "{u}:-")?,
            }
        }
        f.write_str("]")
    }
}

/// Pairs of labels whose difference is `k`: `(i, i + k)` for increasing `i`.
pub fn candidate_pairs(n: usize, k: usize) -> impl Iterator<Item = (usize, usize)> {
    let top = if k == 0 || k >= n { 0 } else { n - k };
    (0..top).map(move |i| (i, i + k))
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_LABELS {
        return Err(Error::InvalidSize(n));
    }
    Ok(())
}

#[inline]
pub(crate) fn can_add_edge(free: &[u8], forb: &[u8], u: usize, v: usize) -> bool {
    free[u] >= 1 && free[v] >= 1 && forb[u] as usize != v
}

/// `(forb[forb[u]], forb[forb[v]]) := (forb[v], forb[u])` with both right-hand
/// sides read before either write, then one slot consumed at each end.
#[inline]
pub(crate) fn apply_edge(free: &mut [u8], forb: &mut [u8], u: usize, v: usize) {
    debug_assert!(can_add_edge(free, forb, u, v), "illegal edge ({u},{v})");
    let (fu, fv) = (forb[u], forb[v]);
    forb[fu as usize] = fv;
    forb[fv as usize] = fu;
    free[u] -= 1;
    free[v] -= 1;
}

// Compact one-byte-per-label code. Its byte order agrees with the order of
// the external (free, partner) pairs, so lexicographic minima coincide.
#[inline]
fn code(free: u8, partner: u8) -> u8 {
    match free {
        0 => CODE_INTERIOR,
        1 => partner + 1,
        _ => CODE_UNUSED,
    }
}

#[inline]
fn direct_code(free: &[u8], forb: &[u8], u: usize) -> u8 {
    code(free[u], forb[u])
}

#[inline]
fn reflected_code(free: &[u8], forb: &[u8], u: usize) -> u8 {
    let n = free.len();
    let w = n - 1 - u;
    let f = free[w];
    let p = if f == 1 { (n - 1 - forb[w] as usize) as u8 } else { 0 };
    code(f, p)
}

pub(crate) fn direct_codes(free: &[u8], forb: &[u8], out: &mut [u8]) {
    for (u, slot) in out.iter_mut().enumerate() {
        *slot = direct_code(free, forb, u);
    }
}

/// Writes the lexicographically smaller of the two orientations into `out`.
pub(crate) fn canonical_codes(free: &[u8], forb: &[u8], out: &mut [u8]) -> Orientation {
    let n = free.len();
    let mut orientation = Orientation::Direct;
    for u in 0..n {
        let d = direct_code(free, forb, u);
        let r = reflected_code(free, forb, u);
        if d != r {
            orientation = if r < d { Orientation::Reflected } else { Orientation::Direct };
            break;
        }
    }
    match orientation {
        Orientation::Direct => direct_codes(free, forb, out),
        Orientation::Reflected => {
            for (u, slot) in out.iter_mut().enumerate() {
                *slot = reflected_code(free, forb, u);
            }
        }
    }
    orientation
}

/// Canonical representative of an equivalence class of partial states.
///
/// Stored compactly as one code byte per label; [`CanonicalKey::to_bytes`]
/// produces the two-bytes-per-label external layout.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Box<[u8]>);

impl CanonicalKey {
    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn codes(&self) -> &[u8] {
        &self.0
    }

    pub(crate) fn from_codes(codes: Box<[u8]>) -> Self {
        CanonicalKey(codes)
    }

    /// External layout: per label, `free` then partner (`0xFF` unless free = 1).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 * self.n());
        self.write_bytes(&mut out);
        out
    }

    pub fn write_bytes(&self, out: &mut Vec<u8>) {
        for &c in self.0.iter() {
            match c {
                CODE_INTERIOR => out.extend_from_slice(&[0, PARTNER_SENTINEL]),
                CODE_UNUSED => out.extend_from_slice(&[2, PARTNER_SENTINEL]),
                p => out.extend_from_slice(&[1, p - 1]),
            }
        }
    }

    /// Parses the external layout and checks that it describes a valid state.
    /// The key need not be canonical; see [`CanonicalKey::is_canonical`].
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if !bytes.len().is_multiple_of(2) {
            return Err(Error::MalformedKey(format!("odd length {}", bytes.len())));
        }
        let n = bytes.len() / 2;
        check_size(n)?;
        let mut codes = Vec::with_capacity(n);
        for (u, pair) in bytes.chunks_exact(2).enumerate() {
            let c = match (pair[0], pair[1]) {
                (0, PARTNER_SENTINEL) => CODE_INTERIOR,
                (2, PARTNER_SENTINEL) => CODE_UNUSED,
                (1, p) if (p as usize) < n => p + 1,
                (f, p) => {
                    return Err(Error::MalformedKey(format!("label {u}: bad pair ({f}, {p:#04x})")));
                }
            };
            codes.push(c);
        }
        let key = CanonicalKey(codes.into_boxed_slice());
        key.decode()?;
        Ok(key)
    }

    pub(crate) fn unpack(&self, free: &mut [u8], forb: &mut [u8]) {
        for (u, &c) in self.0.iter().enumerate() {
            match c {
                CODE_INTERIOR => {
                    free[u] = 0;
                    forb[u] = u as u8;
                }
                CODE_UNUSED => {
                    free[u] = 2;
                    forb[u] = u as u8;
                }
                p => {
                    free[u] = 1;
                    forb[u] = p - 1;
                }
            }
        }
    }

    /// Number of edges placed, read off the slot counts.
    pub fn edges_placed(&self) -> usize {
        let used: usize = self
            .0
            .iter()
            .map(|&c| match c {
                CODE_INTERIOR => 2,
                CODE_UNUSED => 0,
                _ => 1,
            })
            .sum();
        used / 2
    }

    /// The represented state; its level is recovered from the slot sum.
    pub fn decode(&self) -> Result<PartialState> {
        let n = self.n();
        let mut free = vec![0; n];
        let mut forb = vec![0; n];
        self.unpack(&mut free, &mut forb);
        let placed = self.edges_placed();
        if placed > n - 1 {
            return Err(Error::MalformedKey(format!("{placed} edges placed but n={n}")));
        }
        PartialState::from_parts(n - 1 - placed, free, forb).map_err(|e| Error::MalformedKey(e.to_string()))
    }

    pub fn is_canonical(&self) -> bool {
        let n = self.n();
        let mut free = vec![0; n];
        let mut forb = vec![0; n];
        self.unpack(&mut free, &mut forb);
        (0..n)
            .map(|u| (direct_code(&free, &forb, u), reflected_code(&free, &forb, u)))
            .find(|(d, r)| d != r)
            .is_none_or(|(d, r)| d < r)
    }

    /// True when the class is closed under complementation.
    pub fn is_self_complementary(&self) -> bool {
        let n = self.n();
        let mut free = vec![0; n];
        let mut forb = vec![0; n];
        self.unpack(&mut free, &mut forb);
        (0..n).all(|u| direct_code(&free, &forb, u) == reflected_code(&free, &forb, u))
    }
}
