//! Hypergraph dualization as maximal common ordered trees.
//!
//! For `H = ({1..n}, E)` the dataset is `S` (root with `n` children, each
//! carrying one leaf) and one tree `T(E)` per edge. With `E = {w_1 < .. <
//! w_k}`, `T(E)` has `n + k - 1` children and child `i` is a bare leaf
//! exactly when `i = w_j + j - 1` for some `j`; every other child carries
//! one leaf. Vertex sets map to subtrees of `S` by keeping the leaf below
//! child `i` iff `i` is in the set. The maximal common trees are then the
//! images of the maximal independent sets plus `W`, the root with `n - 1`
//! leaf-carrying children.

use std::collections::BTreeSet;

use super::{content_lines, parse_ints, Check, Report};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::iso::subtree_iso;
use crate::oracle::{brute_mct, brute_mis, Hypergraph};
use crate::tree::{canonical_form, CanonKey, Mode, Tree};

#[derive(Debug, Clone)]
pub struct DualGadget {
    /// `[S, T(E_1), .., T(E_m)]`, ordered.
    pub dataset: Dataset,
    pub n: usize,
    pub m: usize,
    pub w_tree: Tree,
}

fn comb(bits: impl IntoIterator<Item = bool>) -> Tree {
    let leaf = Tree::single();
    let bar = Tree::path(2);
    let kids: Vec<&Tree> = bits
        .into_iter()
        .map(|b| if b { &bar } else { &leaf })
        .collect();
    Tree::with_subtrees(kids)
}

/// Root with `n` children; child `i` carries one leaf iff `i ∈ u`.
pub fn vertexset_to_tree(u: &BTreeSet<usize>, n: usize) -> Result<Tree> {
    if let Some(&v) = u.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::Argument(format!("vertex {v} outside 1..={n}")));
    }
    Ok(comb((1..=n).map(|i| u.contains(&i))))
}

/// Inverse of [`vertexset_to_tree`].
pub fn tree_to_vertexset(t: &Tree, n: usize) -> Result<BTreeSet<usize>> {
    let kids = t.children(t.root());
    if kids.len() != n {
        return Err(Error::Argument(format!(
            "root has {} children, expected {n}",
            kids.len()
        )));
    }
    let mut out = BTreeSet::new();
    for (i, &c) in kids.iter().enumerate() {
        match t.children(c) {
            [] => {}
            [g] if t.is_leaf(*g) => {
                out.insert(i + 1);
            }
            _ => {
                return Err(Error::Argument(format!(
                    "child {} is neither a leaf nor a one-leaf branch",
                    i + 1
                )))
            }
        }
    }
    Ok(out)
}

fn edge_tree(e: &BTreeSet<usize>, n: usize) -> Tree {
    let bare: BTreeSet<usize> = e.iter().enumerate().map(|(j, &w)| w + j).collect();
    comb((1..n + e.len()).map(|i| !bare.contains(&i)))
}

/// A vertex lying in every edge; with no edges every vertex qualifies.
pub fn universal_vertex(h: &Hypergraph) -> Option<usize> {
    (1..=h.n()).find(|v| h.edges().iter().all(|e| e.contains(v)))
}

pub fn gen_dualization_instance(h: &Hypergraph) -> Result<DualGadget> {
    if h.n() == 0 {
        return Err(Error::Argument("hypergraph has no vertices".into()));
    }
    if let Some(v) = universal_vertex(h) {
        return Err(Error::Constraint(format!(
            "vertex {v} lies in every edge; remove it first (its maximal independent sets \
             are those of the hypergraph without it, plus the set of all other vertices)"
        )));
    }
    let n = h.n();
    let all: BTreeSet<usize> = (1..=n).collect();
    let mut trees = vec![vertexset_to_tree(&all, n)?];
    trees.extend(h.edges().iter().map(|e| edge_tree(e, n)));
    Ok(DualGadget {
        dataset: Dataset::new(trees, Mode::Ordered),
        n,
        m: h.edges().len(),
        w_tree: comb(std::iter::repeat_n(true, n - 1)),
    })
}

/// Reads `n m` followed by `m` lines of 1-based vertex ids. `#` starts a
/// comment line.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(text, '#');
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::Argument("missing \"n m\" header".into()))?;
    let nm: Vec<usize> = parse_ints(header, hl)?;
    let [n, m] = nm[..] else {
        return Err(Error::Argument("header must be \"n m\"".into()).at_line(hl));
    };
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        if edges.len() == m {
            return Err(Error::Argument(format!("more than {m} edges")).at_line(ln));
        }
        let e: Vec<usize> = parse_ints(line, ln)?;
        Hypergraph::new(n, vec![e.clone()]).map_err(|err| err.at_line(ln))?;
        edges.push(e);
    }
    if edges.len() != m {
        return Err(Error::Argument(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Hypergraph::new(n, edges)
}

/// Checks `W` against every tree and compares the brute-force maximal
/// common trees with the images of the maximal independent sets plus `W`.
pub fn verify_dual(h: &Hypergraph) -> Result<Report> {
    let g = gen_dualization_instance(h)?;
    let mut r = Report::default();
    let w_common = g
        .dataset
        .trees()
        .iter()
        .all(|t| subtree_iso(&g.w_tree, t, Mode::Ordered));
    r.push(Check::new("w_common", w_common));

    let mis = brute_mis(h)?;
    let mut expected: BTreeSet<CanonKey> = mis
        .iter()
        .map(|i| {
            let set = i.iter().copied().collect();
            vertexset_to_tree(&set, g.n).map(|t| canonical_form(&t, Mode::Ordered))
        })
        .collect::<Result<_>>()?;
    expected.insert(canonical_form(&g.w_tree, Mode::Ordered));
    let found: BTreeSet<CanonKey> = brute_mct(&g.dataset)?.into_keys().collect();
    r.push(
        Check::new("mct_equals_mis_plus_w", found == expected)
            .with("mis", mis.len())
            .with("mct", found.len())
            .with("expected", expected.len()),
    );
    r.push(
        Check::new("count_is_mis_plus_one", found.len() == mis.len() + 1)
            .with("count", found.len()),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::serialize_tree;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn edge_tree_example() {
        let t = edge_tree(&set(&[1, 2]), 4);
        assert_eq!(serialize_tree(&t), "(()(())()(())(()))");
    }

    #[test]
    fn round_trip_small() {
        for n in 0..=6usize {
            for mask in 0u32..(1 << n) {
                let u: BTreeSet<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                let t = vertexset_to_tree(&u, n).unwrap();
                assert_eq!(tree_to_vertexset(&t, n).unwrap(), u);
            }
        }
        assert!(vertexset_to_tree(&set(&[5]), 4).is_err());
        assert!(tree_to_vertexset(&Tree::path(4), 1).is_err());
    }

    #[test]
    fn universal_vertex_refused() {
        let h = Hypergraph::new(3, vec![vec![1, 2], vec![1, 3]]).unwrap();
        assert!(matches!(
            gen_dualization_instance(&h),
            Err(Error::Constraint(_))
        ));
        let h = Hypergraph::new(3, vec![]).unwrap();
        assert!(matches!(
            gen_dualization_instance(&h),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn four_vertex_instance() {
        let h = parse_hypergraph("# two disjoint edges\n4 2\n1 2\n3 4\n").unwrap();
        let g = gen_dualization_instance(&h).unwrap();
        assert_eq!(g.dataset.len(), 3);
        let r = verify_dual(&h).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.get("mct_equals_mis_plus_w").unwrap().fields[1].1, "5");
    }

    #[test]
    fn parse_errors_name_lines() {
        let e = parse_hypergraph("2 1\n1 x\n").unwrap_err();
        assert!(matches!(e, Error::Line { line: 2, .. }));
        let e = parse_hypergraph("2 1\n1 3\n").unwrap_err();
        assert!(matches!(e, Error::Line { line: 2, .. }));
        assert!(parse_hypergraph("2 2\n1\n").is_err());
    }
}
