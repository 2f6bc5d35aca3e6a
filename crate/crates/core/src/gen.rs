//! Random and exhaustive tree generation, used by the test suites and the
//! gadget samplers.

use std::collections::BTreeMap;

use rand::Rng;

use crate::tree::{canonical_form, parse_tree, Mode, Tree};

/// Random tree with `1..=max_vertices` vertices and height at most
/// `max_height`. Each new vertex attaches to a uniformly chosen vertex that
/// still has room below it.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_height: usize) -> Tree {
    let n = rng.gen_range(1..=max_vertices.max(1));
    random_tree_with(rng, n, max_height)
}

/// Random tree with exactly `n >= 1` vertices (fewer only when
/// `max_height == 0`).
pub fn random_tree_with<R: Rng + ?Sized>(rng: &mut R, n: usize, max_height: usize) -> Tree {
    if max_height == 0 {
        return Tree::single();
    }
    // parent[i] for i >= 1, depth bookkeeping keeps the height bound.
    let mut depth = vec![0usize];
    let mut parent = vec![usize::MAX];
    for _ in 1..n {
        let open: Vec<usize> = (0..depth.len())
            .filter(|&v| depth[v] < max_height)
            .collect();
        let p = open[rng.gen_range(0..open.len())];
        parent.push(p);
        depth.push(depth[p] + 1);
    }
    from_parent_array(&parent)
}

/// Random tree of height exactly two, or `None` when `n < 3`.
pub fn random_height2_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Option<Tree> {
    if n < 3 {
        return None;
    }
    loop {
        let t = random_tree_with(rng, n, 2);
        if t.height() == 2 {
            return Some(t);
        }
    }
}

/// Builds a tree from `parent[i]` (ignored for i = 0, the root). Children
/// keep increasing index order.
pub fn from_parent_array(parent: &[usize]) -> Tree {
    let n = parent.len();
    let mut children = vec![Vec::new(); n];
    for (i, &p) in parent.iter().enumerate().skip(1) {
        children[p].push(i);
    }
    let mut text = String::with_capacity(2 * n);
    let mut stack = vec![(0usize, true)];
    while let Some((v, enter)) = stack.pop() {
        if enter {
            text.push('(');
            stack.push((v, false));
            for &c in children[v].iter().rev() {
                stack.push((c, true));
            }
        } else {
            text.push(')');
        }
    }
    parse_tree(&text).expect("generated encoding is balanced")
}

/// Shuffles every child list, producing an unordered-isomorphic copy.
pub fn shuffle_children<R: Rng + ?Sized>(rng: &mut R, t: &Tree) -> Tree {
    use rand::seq::SliceRandom;
    fn build<R: Rng + ?Sized>(rng: &mut R, t: &Tree, v: usize, out: &mut String) {
        out.push('(');
        let mut kids = t.children(v).to_vec();
        kids.shuffle(rng);
        for c in kids {
            build(rng, t, c, out);
        }
        out.push(')');
    }
    let mut s = String::new();
    build(rng, t, t.root(), &mut s);
    parse_tree(&s).expect("balanced")
}

/// All ordered trees with exactly `n` vertices, as encodings.
fn ordered_encodings(n: usize, memo: &mut BTreeMap<usize, Vec<String>>) -> Vec<String> {
    // A tree of n vertices is a root around a forest of n - 1 vertices.
    forest_encodings(n - 1, memo)
        .into_iter()
        .map(|f| format!("({f})"))
        .collect()
}

fn forest_encodings(k: usize, memo: &mut BTreeMap<usize, Vec<String>>) -> Vec<String> {
    if let Some(v) = memo.get(&k) {
        return v.clone();
    }
    let out = if k == 0 {
        vec![String::new()]
    } else {
        let mut out = Vec::new();
        for first in 1..=k {
            let heads = ordered_encodings(first, memo);
            let tails = forest_encodings(k - first, memo);
            for h in &heads {
                for t in &tails {
                    out.push(format!("{h}{t}"));
                }
            }
        }
        out
    };
    memo.insert(k, out.clone());
    out
}

/// Every tree with exactly `n >= 1` vertices, one per class under `mode`.
pub fn all_trees(n: usize, mode: Mode) -> Vec<Tree> {
    assert!(n >= 1);
    let mut memo = BTreeMap::new();
    let enc = ordered_encodings(n, &mut memo);
    let trees = enc.iter().map(|s| parse_tree(s).expect("balanced"));
    match mode {
        Mode::Ordered => trees.collect(),
        Mode::Unordered => {
            let mut seen = BTreeMap::new();
            for t in trees {
                seen.entry(canonical_form(&t, Mode::Unordered)).or_insert(t);
            }
            seen.into_values().collect()
        }
    }
}

/// Every tree with `1..=max_n` vertices under `mode`.
pub fn all_trees_up_to(max_n: usize, mode: Mode) -> Vec<Tree> {
    (1..=max_n).flat_map(|n| all_trees(n, mode)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts_match_known_sequences() {
        // Catalan numbers C(n-1) for ordered trees.
        let ordered: Vec<usize> = (1..=8).map(|n| all_trees(n, Mode::Ordered).len()).collect();
        assert_eq!(ordered, vec![1, 1, 2, 5, 14, 42, 132, 429]);
        // OEIS A000081 for unordered rooted trees.
        let unordered: Vec<usize> = (1..=8)
            .map(|n| all_trees(n, Mode::Unordered).len())
            .collect();
        assert_eq!(unordered, vec![1, 1, 2, 4, 9, 20, 48, 115]);
    }

    #[test]
    fn random_trees_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let t = random_tree(&mut rng, 12, 2);
            t.validate().unwrap();
            assert!(t.len() <= 12);
            assert!(t.height() <= 2);
        }
        let t = random_height2_tree(&mut rng, 6).unwrap();
        assert_eq!(t.height(), 2);
        assert!(random_height2_tree(&mut rng, 2).is_none());
    }
}
