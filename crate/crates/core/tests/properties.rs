mod common;

use common::*;
use graceful_core::{candidate_pairs, CanonicalKey, Orientation, PartialState};
use proptest::prelude::*;

#[test]
fn canonical_keys_are_exact() {
    canonicalization(7).unwrap();
}

#[test]
fn leaves_are_paths() {
    terminal_paths(8).unwrap();
}

#[test]
fn constrained_pairs_are_bipartite() {
    bipartite(5).unwrap();
}

#[test]
fn glued_permutations_are_graceful_and_distinct() {
    glue_property(3, 5).unwrap();
}

#[test]
fn gluing_inequality_holds() {
    inequality(12).unwrap();
}

/// Follows `choices` down the tree, taking the i-th legal edge mod the number available.
fn walk(n: usize, choices: &[usize]) -> PartialState {
    let mut s = PartialState::new_root(n).unwrap();
    for &c in choices {
        let k = s.next_edge_label();
        if k == 0 {
            break;
        }
        let legal: Vec<_> = candidate_pairs(n, k).filter(|&(u, v)| s.can_add_edge(u, v)).collect();
        if legal.is_empty() {
            break;
        }
        let (u, v) = legal[c % legal.len()];
        s = s.add_edge(u, v).unwrap();
    }
    s
}

proptest! {
    #[test]
    fn random_states_keep_invariants(n in 2usize..60, choices in prop::collection::vec(any::<usize>(), 0..60)) {
        let s = walk(n, &choices);
        let placed = n - 1 - s.next_edge_label();
        prop_assert_eq!(s.free().iter().map(|&f| f as usize).sum::<usize>(), 2 * n - 2 * placed);
        for u in s.endpoints() {
            let p = s.partner(u).unwrap();
            prop_assert_eq!(s.partner(p), Some(u));
        }

        let c = s.complement();
        prop_assert_eq!(c.complement(), s.clone());
        let (key, o) = s.canonicalize();
        let (ckey, co) = c.canonicalize();
        prop_assert_eq!(&key, &ckey);
        if key.is_self_complementary() {
            prop_assert_eq!(o, Orientation::Direct);
        } else {
            prop_assert_eq!(co, o.flip());
        }
        prop_assert!(key.is_canonical());
        prop_assert_eq!(key.edges_placed(), placed);

        let bytes = key.to_bytes();
        prop_assert_eq!(bytes.len(), 2 * n);
        prop_assert_eq!(CanonicalKey::from_bytes(&bytes).unwrap(), key.clone());
        let back = key.decode().unwrap();
        let oriented = if o == Orientation::Direct { s.clone() } else { c };
        prop_assert_eq!(back, oriented);
    }

    #[test]
    fn garbage_keys_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..40)) {
        if let Ok(key) = CanonicalKey::from_bytes(&bytes) {
            prop_assert_eq!(key.to_bytes(), bytes);
        }
    }
}
