//! Exhaustive reference miners. Everything here is deliberately naive and
//! guarded by hard size limits; these functions exist to check the fast
//! paths, not to be fast.
//!
//! Patterns are enumerated as the induced subtrees of the dataset trees and
//! identified by canonical key. A pattern occurs in a tree exactly when its
//! key is among that tree's subtree keys, so supports come from set lookups
//! rather than from the isomorphism engine.
//!
//! Closedness and maximality only need one-vertex extensions: if `Q`
//! strictly contains `P`, some tree between them has one vertex more than
//! `P`, and its support lies between theirs.

use std::collections::{BTreeMap, BTreeSet};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::iso::{subtree_iso, SupportSet};
use crate::tree::{canonical_form, extend_above, insert_leaf, parse_tree, CanonKey, Mode, Tree};

/// Work budget (partial combinations built) for subtree enumeration.
pub const SUBTREE_BUDGET: usize = 4_000_000;
/// Largest vertex count accepted by [`brute_mis`].
pub const MIS_MAX_VERTICES: usize = 20;

/// Canonical key to tree, ordered by key.
pub type PatternSet = BTreeMap<CanonKey, Tree>;

/// Hypergraph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<BTreeSet<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Hypergraph> {
        let mut out = Vec::with_capacity(edges.len());
        for (i, e) in edges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(Error::Argument(format!("edge {} is empty", i + 1)));
            }
            if let Some(&v) = e.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::Argument(format!(
                    "edge {} has vertex {v} outside 1..={n}",
                    i + 1
                )));
            }
            out.push(e.into_iter().collect());
        }
        Ok(Hypergraph { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[BTreeSet<usize>] {
        &self.edges
    }

    /// Whether `set` contains no edge entirely.
    pub fn is_independent(&self, set: &BTreeSet<usize>) -> bool {
        self.edges.iter().all(|e| !e.is_subset(set))
    }
}

/// Every induced subtree of the dataset, keyed canonically, together with
/// the keys occurring in each dataset tree.
#[derive(Debug, Clone)]
pub struct PatternUniverse {
    mode: Mode,
    patterns: PatternSet,
    occurrences: Vec<BTreeSet<CanonKey>>,
}

impl PatternUniverse {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &PatternSet {
        &self.patterns
    }

    pub fn contains(&self, key: &CanonKey) -> bool {
        self.patterns.contains_key(key)
    }

    /// Keys of the subtrees of dataset tree `i`.
    pub fn occurrences(&self, i: usize) -> &BTreeSet<CanonKey> {
        &self.occurrences[i]
    }

    pub fn support(&self, key: &CanonKey) -> SupportSet {
        SupportSet {
            indices: (0..self.occurrences.len())
                .filter(|&i| self.occurrences[i].contains(key))
                .collect(),
        }
    }
}

/// Encodings of all induced subtrees of `t`, over every root choice.
/// Unordered encodings have sorted children; ordered ones keep the order.
fn subtree_encodings(t: &Tree, mode: Mode, budget: &mut usize) -> Result<BTreeSet<String>> {
    let mut enc: Vec<BTreeSet<String>> = vec![BTreeSet::new(); t.len()];
    for v in t.postorder() {
        // Partial child sequences; each child is either dropped or replaced
        // by one of its own rooted subtrees.
        let mut partial: BTreeSet<Vec<String>> = BTreeSet::from([Vec::new()]);
        for &c in t.children(v) {
            let mut next = BTreeSet::new();
            for seq in &partial {
                let cost = 1 + enc[c].len();
                *budget = budget.checked_sub(cost).ok_or_else(|| {
                    Error::SizeGuard(format!(
                        "subtree enumeration exceeds {SUBTREE_BUDGET} steps"
                    ))
                })?;
                next.insert(seq.clone());
                for e in &enc[c] {
                    let mut s = seq.clone();
                    s.push(e.clone());
                    if mode == Mode::Unordered {
                        s.sort_unstable();
                    }
                    next.insert(s);
                }
            }
            partial = next;
        }
        enc[v] = partial
            .into_iter()
            .map(|seq| format!("({})", seq.concat()))
            .collect();
    }
    Ok(enc.into_iter().flatten().collect())
}

fn keyed(encodings: BTreeSet<String>, mode: Mode) -> PatternSet {
    encodings
        .into_iter()
        .map(|s| {
            let t = parse_tree(&s).expect("generated encoding is balanced");
            (canonical_form(&t, mode), t)
        })
        .collect()
}

/// Every induced subtree of every dataset tree, deduplicated by canonical
/// key under the dataset mode.
pub fn all_patterns(dataset: &Dataset) -> Result<PatternUniverse> {
    let mode = dataset.mode();
    let mut budget = SUBTREE_BUDGET;
    let mut patterns = PatternSet::new();
    let mut occurrences = Vec::with_capacity(dataset.len());
    for t in dataset.trees() {
        let own = keyed(subtree_encodings(t, mode, &mut budget)?, mode);
        occurrences.push(own.keys().cloned().collect());
        patterns.extend(own);
    }
    Ok(PatternUniverse {
        mode,
        patterns,
        occurrences,
    })
}

/// Canonical keys of the trees one vertex larger than `t`: a leaf inserted
/// anywhere, or a new root above.
pub fn one_vertex_extensions(t: &Tree, mode: Mode) -> BTreeSet<CanonKey> {
    let mut out = BTreeSet::new();
    for v in t.preorder() {
        let k = t.children(v).len();
        let positions = match mode {
            Mode::Ordered => 0..=k,
            Mode::Unordered => k..=k,
        };
        for pos in positions {
            let ext = insert_leaf(t, v, pos).expect("valid node and position");
            out.insert(canonical_form(&ext, mode));
        }
    }
    out.insert(canonical_form(&extend_above(t), mode));
    out
}

fn check_theta(theta: usize) -> Result<()> {
    if theta < 1 {
        return Err(Error::Argument("theta must be at least 1".into()));
    }
    Ok(())
}

fn frequent_in(u: &PatternUniverse, theta: usize) -> PatternSet {
    u.patterns
        .iter()
        .filter(|(k, _)| u.support(k).count() >= theta)
        .map(|(k, t)| (k.clone(), t.clone()))
        .collect()
}

/// Patterns with support at least `theta`.
pub fn brute_frequent(dataset: &Dataset, theta: usize) -> Result<PatternSet> {
    check_theta(theta)?;
    Ok(frequent_in(&all_patterns(dataset)?, theta))
}

/// Frequent patterns with no frequent strict super-pattern.
pub fn brute_maximal(dataset: &Dataset, theta: usize) -> Result<PatternSet> {
    check_theta(theta)?;
    let u = all_patterns(dataset)?;
    let freq = frequent_in(&u, theta);
    Ok(freq
        .iter()
        .filter(|(_, t)| {
            one_vertex_extensions(t, u.mode)
                .iter()
                .all(|q| !freq.contains_key(q))
        })
        .map(|(k, t)| (k.clone(), t.clone()))
        .collect())
}

/// Frequent patterns whose every strict super-pattern has smaller support.
pub fn brute_closed(dataset: &Dataset, theta: usize) -> Result<PatternSet> {
    check_theta(theta)?;
    let u = all_patterns(dataset)?;
    Ok(frequent_in(&u, theta)
        .into_iter()
        .filter(|(k, t)| {
            let own = u.support(k).count();
            one_vertex_extensions(t, u.mode)
                .iter()
                .filter(|q| u.contains(q))
                .all(|q| u.support(q).count() < own)
        })
        .collect())
}

/// All maximal common trees. Candidates are the subtrees of the smallest
/// dataset tree; commonality is checked with the isomorphism engine.
pub fn brute_mct(dataset: &Dataset) -> Result<PatternSet> {
    let mode = dataset.mode();
    let smallest = dataset
        .trees()
        .iter()
        .min_by_key(|t| t.len())
        .ok_or_else(|| Error::Argument("maximal common trees of an empty dataset".into()))?;
    let mut budget = SUBTREE_BUDGET;
    let candidates = keyed(subtree_encodings(smallest, mode, &mut budget)?, mode);
    let common: PatternSet = candidates
        .into_iter()
        .filter(|(_, p)| dataset.trees().iter().all(|t| subtree_iso(p, t, mode)))
        .collect();
    Ok(common
        .iter()
        .filter(|(_, t)| {
            one_vertex_extensions(t, mode)
                .iter()
                .all(|q| !common.contains_key(q))
        })
        .map(|(k, t)| (k.clone(), t.clone()))
        .collect())
}

/// All maximal independent sets, each sorted, in lexicographic order.
pub fn brute_mis(h: &Hypergraph) -> Result<Vec<Vec<usize>>> {
    if h.n > MIS_MAX_VERTICES {
        return Err(Error::SizeGuard(format!(
            "{} vertices exceeds the limit of {MIS_MAX_VERTICES}",
            h.n
        )));
    }
    let masks: Vec<u32> = h
        .edges
        .iter()
        .map(|e| e.iter().fold(0u32, |m, &v| m | 1 << (v - 1)))
        .collect();
    let independent = |s: u32| masks.iter().all(|&e| s & e != e);
    let mut out = Vec::new();
    for s in 0u32..(1u32 << h.n) {
        if !independent(s) {
            continue;
        }
        let maximal = (0..h.n).all(|v| s & (1 << v) != 0 || !independent(s | 1 << v));
        if maximal {
            out.push(
                (0..h.n)
                    .filter(|&v| s & (1 << v) != 0)
                    .map(|v| v + 1)
                    .collect(),
            );
        }
    }
    out.sort();
    Ok(out)
}

/// Subtree isomorphism by trying every injective, parent-preserving map
/// (order-preserving among siblings in ordered mode). Exponential.
pub fn brute_subtree_iso(pattern: &Tree, target: &Tree, mode: Mode) -> bool {
    fn maps(p: &Tree, pv: usize, t: &Tree, tv: usize, mode: Mode) -> bool {
        let pk = p.children(pv);
        let tk = t.children(tv);
        if pk.len() > tk.len() {
            return false;
        }
        let mut used = vec![false; tk.len()];
        assign(p, pk, t, tk, 0, 0, &mut used, mode)
    }
    #[allow(clippy::too_many_arguments)]
    fn assign(
        p: &Tree,
        pk: &[usize],
        t: &Tree,
        tk: &[usize],
        i: usize,
        from: usize,
        used: &mut [bool],
        mode: Mode,
    ) -> bool {
        if i == pk.len() {
            return true;
        }
        let start = if mode == Mode::Ordered { from } else { 0 };
        for j in start..tk.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            let ok =
                maps(p, pk[i], t, tk[j], mode) && assign(p, pk, t, tk, i + 1, j + 1, used, mode);
            used[j] = false;
            if ok {
                return true;
            }
        }
        false
    }
    target
        .preorder()
        .into_iter()
        .any(|r| maps(pattern, pattern.root(), target, r, mode))
}
