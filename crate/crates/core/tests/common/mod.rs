//! Checks shared by the topic suites and the acceptance target. Each returns
//! `Err` with a description of the first disagreement.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use graceful_core::bounds::{glue, is_bipartite_graceful, verify_inequality};
use graceful_core::report::{checkpoint_path, read_checkpoint, write_checkpoint, Checkpointer};
use graceful_core::search::{brute_force_table, enumerate, expand_level_with, run_from};
use graceful_core::{
    candidate_pairs, count_with, dfs_count, is_graceful, load_checkpoint, ClassMap, Constraint, PartialState,
    SearchOptions,
};

pub type Check = Result<(), String>;

pub fn opts1() -> SearchOptions {
    SearchOptions::single_threaded()
}

pub fn g(n: usize, c: Constraint) -> u128 {
    count_with(n, c, &opts1()).unwrap().count
}

pub fn all_constraints(n: usize) -> Vec<Constraint> {
    let mut cs = vec![Constraint::None];
    for a in 0..n {
        cs.push(Constraint::OneEndpoint(a));
        for b in 0..n {
            cs.push(Constraint::TwoEndpoints(a, b));
        }
    }
    cs
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Folded search, plain tree walk and brute force give the same count.
pub fn oracle_agreement(max_n: usize) -> Check {
    for n in 1..=max_n {
        let table = brute_force_table(n).map_err(|e| e.to_string())?;
        for c in all_constraints(n) {
            let brute = match c {
                Constraint::None => table.iter().flatten().sum(),
                Constraint::OneEndpoint(a) => table[a].iter().sum(),
                Constraint::TwoEndpoints(a, b) => table[a][b],
            };
            let bfs = g(n, c);
            let dfs = dfs_count(n, c).map_err(|e| e.to_string())?;
            ensure(bfs == brute && dfs == brute, || format!("n={n} {c}: bfs={bfs} dfs={dfs} brute={brute}"))?;
        }
    }
    Ok(())
}

pub fn prune_equivalence(max_n: usize) -> Check {
    let unpruned = SearchOptions { prune: false, ..opts1() };
    for n in 1..=max_n {
        for c in all_constraints(n) {
            let a = g(n, c);
            let b = count_with(n, c, &unpruned).unwrap().count;
            ensure(a == b, || format!("n={n} {c}: pruned {a} unpruned {b}"))?;
        }
    }
    Ok(())
}

/// Complement and reversal symmetries plus the sums linking the three kinds of count.
pub fn symmetries(max_n: usize) -> Check {
    for n in 1..=max_n {
        let total = g(n, Constraint::None);
        let mut one_sum = 0;
        for a in 0..n {
            let ga = g(n, Constraint::OneEndpoint(a));
            let gc = g(n, Constraint::OneEndpoint(n - 1 - a));
            ensure(ga == gc, || format!("n={n}: G(;{a})={ga} but complement gives {gc}"))?;
            one_sum += ga;
            let mut two_sum = 0;
            for b in 0..n {
                let gab = g(n, Constraint::TwoEndpoints(a, b));
                let gba = g(n, Constraint::TwoEndpoints(b, a));
                let gcc = g(n, Constraint::TwoEndpoints(n - 1 - a, n - 1 - b));
                ensure(gab == gba && gab == gcc, || {
                    format!("n={n}: G(;{a},{b})={gab}, reversed {gba}, complement {gcc}")
                })?;
                ensure(n == 1 || a != b || gab == 0, || format!("n={n}: G(;{a},{a})={gab}"))?;
                two_sum += gab;
            }
            ensure(two_sum == ga, || format!("n={n}: sum over b of G(;{a},b)={two_sum} but G(;{a})={ga}"))?;
        }
        ensure(one_sum == total, || format!("n={n}: sum of G(;a)={one_sum} but G={total}"))?;
    }
    Ok(())
}

/// Every graceful (2m;j,j+m)-permutation is bipartite.
pub fn bipartite(max_m: usize) -> Check {
    for m in 1..=max_m {
        for j in 0..m {
            for p in enumerate(2 * m, Constraint::TwoEndpoints(j, j + m), None).unwrap().permutations {
                ensure(is_bipartite_graceful(&p, m).unwrap(), || format!("m={m} j={j}: {p} not bipartite"))?;
            }
        }
    }
    Ok(())
}

/// Gluing yields distinct graceful (r+2m;j)-permutations.
pub fn glue_property(max_m: usize, max_r: usize) -> Check {
    for m in 1..=max_m {
        for j in 0..m {
            let ps = enumerate(2 * m, Constraint::TwoEndpoints(j, j + m), None).unwrap().permutations;
            for r in j + 1..=max_r {
                let qs = enumerate(r, Constraint::OneEndpoint(j), None).unwrap().permutations;
                let mut seen = BTreeSet::new();
                for p in &ps {
                    for q in &qs {
                        let w = glue(p, q, m, j, r).map_err(|e| format!("glue({p},{q},m={m},j={j},r={r}): {e}"))?;
                        ensure(is_graceful(w.as_slice()) && w.len() == r + 2 * m && w.first() == j, || {
                            format!(
                                "glue({p},{q},m={m},j={j},r={r}) = {w} is not a graceful ({};{j})-permutation",
                                r + 2 * m
                            )
                        })?;
                        ensure(seen.insert(w.clone().into_vec()), || format!("m={m} j={j} r={r}: {w} produced twice"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn inequality(max_total: usize) -> Check {
    for m in 1..=max_total / 2 {
        for r in 1..=max_total - 2 * m {
            for j in 0..=m {
                let i = verify_inequality(r, m, j, &opts1()).map_err(|e| e.to_string())?;
                ensure(i.holds, || format!("r={r} m={m} j={j}: {} < {}", i.lhs, i.rhs))?;
            }
        }
    }
    Ok(())
}

/// Identical counts and per-level class counts for every worker count.
pub fn determinism(cases: &[(usize, Constraint)], workers: &[usize]) -> Check {
    for &(n, c) in cases {
        let base = count_with(n, c, &opts1()).unwrap();
        for &t in workers {
            let r = count_with(n, c, &SearchOptions { threads: t, ..opts1() }).unwrap();
            let classes = |r: &graceful_core::CountResult| {
                r.levels.iter().map(|l| (l.class_count, l.node_sum)).collect::<Vec<_>>()
            };
            ensure(r.count == base.count && classes(&r) == classes(&base), || {
                format!("n={n} {c}: {t} workers gave {} vs {}", r.count, base.count)
            })?;
        }
    }
    Ok(())
}

/// Parallel and sequential expansion build the same map, level by level.
pub fn parallel_maps_match(n: usize, c: Constraint, threads: usize) -> Check {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let mut map = ClassMap::root(n).unwrap();
    while map.level() > 0 {
        let seq = expand_level_with(&map, &c, true, false).unwrap();
        let par = pool.install(|| expand_level_with(&map, &c, true, true)).unwrap();
        ensure(seq.sorted() == par.sorted(), || format!("n={n} {c}: maps differ at level {}", seq.level()))?;
        map = seq;
    }
    Ok(())
}

/// Saves every level, then resumes from each one and checks the count.
pub fn resume_everywhere(dir: &Path, n: usize, c: Constraint) -> Check {
    let mut saver = Checkpointer::new(dir, c, true).unwrap();
    let full = run_from(ClassMap::root(n).unwrap(), c, &opts1(), |m| saver.record(m)).unwrap();
    for level in 0..n {
        let path = checkpoint_path(dir, n, &c, level);
        let bytes = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let (map, found) = read_checkpoint(&bytes, &path).map_err(|e| e.to_string())?;
        ensure(found == c && map.level() == level, || format!("level {level}: header mismatch"))?;
        ensure(write_checkpoint(&map, &c).unwrap() == bytes, || format!("level {level}: rewrite not byte-identical"))?;
        let map = load_checkpoint(&path, n, &c).map_err(|e| e.to_string())?;
        let resumed = run_from(map, c, &opts1(), |_| Ok(())).unwrap();
        ensure(resumed.count == full.count, || {
            format!("resume at level {level}: {} vs {}", resumed.count, full.count)
        })?;
    }
    Ok(())
}

/// Every state reachable in the search tree of size `n`, with its edges.
pub fn reachable(n: usize) -> Vec<(PartialState, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    let mut stack = vec![(PartialState::new_root(n).unwrap(), Vec::new())];
    while let Some((s, edges)) = stack.pop() {
        let k = s.next_edge_label();
        if k > 0 {
            for (u, v) in candidate_pairs(n, k) {
                if s.can_add_edge(u, v) {
                    let mut e = edges.clone();
                    e.push((u, v));
                    stack.push((s.add_edge(u, v).unwrap(), e));
                }
            }
        }
        out.push((s, edges));
    }
    out
}

/// Used labels and endpoint pairing, read directly off the arrays.
fn signature(s: &PartialState) -> (Vec<u8>, Vec<Option<usize>>) {
    (s.free().to_vec(), (0..s.n()).map(|u| s.partner(u)).collect())
}

/// Keys coincide exactly for states equal up to complementation, and keys decode faithfully.
pub fn canonicalization(max_n: usize) -> Check {
    for n in 1..=max_n {
        let states = reachable(n);
        let mut by_key: HashMap<_, Vec<&PartialState>> = HashMap::new();
        for (s, _) in &states {
            let (key, _) = s.canonicalize();
            let (ckey, _) = s.complement().canonicalize();
            ensure(key == ckey, || format!("n={n}: {s} and its complement have different keys"))?;
            ensure(s.complement().complement() == *s, || format!("n={n}: complement of {s} is not an involution"))?;
            let d = key.decode().map_err(|e| e.to_string())?;
            ensure(d.canonicalize().0 == key && d.encode() == key, || {
                format!("n={n}: key of {s} does not round-trip")
            })?;
            ensure(d == *s || d == s.complement(), || format!("n={n}: key of {s} decodes to {d}"))?;
            by_key.entry(key).or_default().push(s);
        }
        let sigs: Vec<_> = states.iter().map(|(s, _)| (signature(s), signature(&s.complement()))).collect();
        for (i, (a, _)) in states.iter().enumerate() {
            for (j, (b, _)) in states.iter().enumerate().skip(i + 1) {
                let equivalent = sigs[i].0 == sigs[j].0 || sigs[i].0 == sigs[j].1;
                let same_key = a.canonicalize().0 == b.canonicalize().0;
                ensure(equivalent == same_key, || {
                    format!("n={n}: {a} vs {b}: equivalent={equivalent} same_key={same_key}")
                })?;
            }
        }
    }
    Ok(())
}

/// Terminal states are Hamiltonian paths whose ends are the two free-1 labels.
pub fn terminal_paths(max_n: usize) -> Check {
    for n in 2..=max_n {
        for (s, edges) in reachable(n).into_iter().filter(|(s, _)| s.is_terminal()) {
            let mut deg = vec![0; n];
            let mut parent: Vec<usize> = (0..n).collect();
            fn root(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    x = p[x];
                }
                x
            }
            for &(u, v) in &edges {
                deg[u] += 1;
                deg[v] += 1;
                let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
                ensure(ru != rv, || format!("n={n}: cycle in {edges:?}"))?;
                parent[ru] = rv;
            }
            let ends = s.endpoints();
            ensure(edges.len() == n - 1 && deg.iter().all(|&d| d == 1 || d == 2), || format!("n={n}: {edges:?}"))?;
            ensure(ends.len() == 2 && s.partner(ends[0]) == Some(ends[1]), || format!("n={n}: bad ends {s}"))?;
            ensure(ends.iter().all(|&e| deg[e] == 1), || format!("n={n}: ends {ends:?} vs degrees {deg:?}"))?;
        }
    }
    Ok(())
}
