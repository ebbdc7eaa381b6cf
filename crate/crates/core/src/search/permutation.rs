use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// True iff `seq` is a permutation of `0..n` whose adjacent absolute
/// differences are exactly `1..n`.
pub fn is_graceful(seq: &[usize]) -> bool {
    let n = seq.len();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in seq {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    let mut diff_seen = vec![false; n];
    for w in seq.windows(2) {
        let d = w[0].abs_diff(w[1]);
        if diff_seen[d] {
            return false;
        }
        diff_seen[d] = true;
    }
    true
}

/// A validated graceful labeling of a path, read from `seq[0]` to the end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GracefulPermutation(Vec<usize>);

impl GracefulPermutation {
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        if !is_graceful(&seq) {
            return Err(Error::InvalidInput(format!("{seq:?} is not a graceful permutation")));
        }
        Ok(GracefulPermutation(seq))
    }

    pub(crate) fn new_unchecked(seq: Vec<usize>) -> Self {
        debug_assert!(is_graceful(&seq), "{seq:?}");
        GracefulPermutation(seq)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn reversed(&self) -> Self {
        let mut seq = self.0.clone();
        seq.reverse();
        GracefulPermutation(seq)
    }

    /// The complementary labeling `x -> n - 1 - x`.
    pub fn complemented(&self) -> Self {
        let n = self.0.len();
        GracefulPermutation(self.0.iter().map(|&x| n - 1 - x).collect())
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl TryFrom<Vec<usize>> for GracefulPermutation {
    type Error = Error;

    fn try_from(seq: Vec<usize>) -> Result<Self> {
        GracefulPermutation::new(seq)
    }
}

impl From<GracefulPermutation> for Vec<usize> {
    fn from(p: GracefulPermutation) -> Self {
        p.0
    }
}

impl fmt::Display for GracefulPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graceful_examples() {
        assert!(is_graceful(&[0, 6, 1, 5, 2, 4, 3]));
        assert!(!is_graceful(&[0, 1, 2]));
        assert!(is_graceful(&[0]));
        assert!(!is_graceful(&[]));
        assert!(!is_graceful(&[0, 2]));
        assert!(!is_graceful(&[1, 1]));
    }

    #[test]
    fn validated_constructor() {
        let p = GracefulPermutation::new(vec![0, 6, 1, 5, 2, 4, 3]).unwrap();
        assert_eq!((p.first(), p.last()), (0, 3));
        assert!(is_graceful(p.reversed().as_slice()));
        assert!(is_graceful(p.complemented().as_slice()));
        assert_eq!(p.to_string(), "[0,6,1,5,2,4,3]");
        assert!(GracefulPermutation::new(vec![0, 1, 2]).is_err());
    }
}
