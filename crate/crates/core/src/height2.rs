//! Child-count signatures of trees of height at most two.
//!
//! A height-two tree is determined up to isomorphism by the multiset
//! `{|ch(v)| + 1 : v child of the root}`, here stored as a non-increasing
//! [`Signature`]. Containment between height-two trees is dominance between
//! their signatures, and the maximal common height-two tree of a collection
//! is the inverse image of the entry-wise minimum of the signatures.
//!
//! Stars complicate the picture: a star may embed below the root of a
//! height-two tree, so a collection of height-two trees can have a common
//! star that the signature minimum does not dominate.
//! [`maximal_common_trees`] returns the complete set; [`mct`] returns the
//! signature-based tree alone.

use std::fmt;

use crate::error::{Error, Result};
use crate::tree::Tree;

/// Non-increasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Signature(Vec<u32>);

impl Signature {
    pub fn new(mut entries: Vec<u32>) -> Result<Signature> {
        if entries.contains(&0) {
            return Err(Error::Argument("signature entries must be positive".into()));
        }
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Signature(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest child count in `chi_inv(self)`.
    pub fn max_child_count(&self) -> usize {
        let below = self.0.first().map_or(0, |&x| x as usize - 1);
        self.0.len().max(below)
    }

    /// Vertex count of `chi_inv(self)`.
    pub fn vertex_count(&self) -> usize {
        1 + self.0.iter().map(|&x| x as usize).sum::<usize>()
    }

    /// Entry-wise minimum of signatures aligned largest-to-largest and cut
    /// to the shortest length. `None` for an empty input.
    pub fn meet<'a, I>(sigs: I) -> Option<Signature>
    where
        I: IntoIterator<Item = &'a Signature>,
    {
        let mut it = sigs.into_iter();
        let mut acc = it.next()?.0.clone();
        for s in it {
            acc.truncate(s.0.len());
            for (a, &b) in acc.iter_mut().zip(&s.0) {
                *a = (*a).min(b);
            }
        }
        // Entry-wise minima of non-increasing sequences stay non-increasing.
        Some(Signature(acc))
    }

    /// `self` with one entry raised by one, keeping the order; `i` indexes
    /// the entry before re-sorting.
    pub fn bump(&self, i: usize) -> Signature {
        let mut e = self.0.clone();
        let v = e[i];
        let first = e.iter().position(|&x| x == v).unwrap_or(i);
        e[first] += 1;
        Signature(e)
    }

    /// `self` with an extra entry 1 (a new leaf child of the root).
    pub fn push_leaf(&self) -> Signature {
        let mut e = self.0.clone();
        e.push(1);
        Signature(e)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

fn height_guard(t: &Tree) -> Result<usize> {
    let h = t.height();
    if h > 2 {
        return Err(Error::Constraint(format!("tree height {h} exceeds 2")));
    }
    Ok(h)
}

/// Signature of a tree of height at most two.
pub fn chi(t: &Tree) -> Result<Signature> {
    height_guard(t)?;
    let entries = t
        .children(t.root())
        .iter()
        .map(|&v| t.children(v).len() as u32 + 1)
        .collect();
    Signature::new(entries)
}

/// The tree whose root has one child per entry `x`, that child carrying
/// `x - 1` leaves. Children appear in signature order.
pub fn chi_inv(sig: &Signature) -> Tree {
    let subs: Vec<Tree> = sig.0.iter().map(|&x| Tree::star(x as usize - 1)).collect();
    Tree::with_subtrees(&subs)
}

/// Dominance: an injection from `x` into `y` with every entry mapped to one
/// at least as large. With both sorted non-increasing this is a prefix-wise
/// comparison.
pub fn signature_leq(x: &Signature, y: &Signature) -> bool {
    x.0.len() <= y.0.len() && x.0.iter().zip(&y.0).all(|(a, b)| a <= b)
}

/// Subtree isomorphism between trees of height at most two, decided from
/// heights, child counts and signatures.
pub fn h2_subtree_iso(pattern: &Tree, target: &Tree) -> Result<bool> {
    let hp = height_guard(pattern)?;
    let ht = height_guard(target)?;
    Ok(match hp {
        0 => true,
        1 => target.max_child_count() >= pattern.children(pattern.root()).len(),
        _ => ht == 2 && signature_leq(&chi(pattern)?, &chi(target)?),
    })
}

struct Summary {
    min_height: usize,
    min_max_child: usize,
}

fn summarize(trees: &[Tree]) -> Result<Summary> {
    if trees.is_empty() {
        return Err(Error::Argument(
            "maximal common tree of an empty collection".into(),
        ));
    }
    let mut min_height = usize::MAX;
    let mut min_max_child = usize::MAX;
    for (i, t) in trees.iter().enumerate() {
        let h = height_guard(t).map_err(|e| match e {
            Error::Constraint(m) => Error::Constraint(format!("tree {i}: {m}")),
            other => other,
        })?;
        min_height = min_height.min(h);
        min_max_child = min_max_child.min(t.max_child_count());
    }
    Ok(Summary {
        min_height,
        min_max_child,
    })
}

/// Signature-based maximal common tree: a single vertex if any tree is a
/// single vertex, the largest common star if any tree has height one, and
/// otherwise `chi_inv` of the signature meet. When every tree has height
/// two this tree is maximal but need not be the only maximal common tree;
/// see [`maximal_common_trees`].
pub fn mct(trees: &[Tree]) -> Result<Tree> {
    let s = summarize(trees)?;
    Ok(match s.min_height {
        0 => Tree::single(),
        1 => Tree::star(s.min_max_child),
        _ => {
            let sigs = trees.iter().map(chi).collect::<Result<Vec<_>>>()?;
            chi_inv(&Signature::meet(&sigs).expect("nonempty"))
        }
    })
}

/// Every maximal common tree of a nonempty collection of trees of height at
/// most two. The result has one element, or two when all trees have height
/// two and the largest common star does not fit in the signature meet; the
/// height-two tree comes first.
pub fn maximal_common_trees(trees: &[Tree]) -> Result<Vec<Tree>> {
    let s = summarize(trees)?;
    Ok(match s.min_height {
        0 => vec![Tree::single()],
        1 => vec![Tree::star(s.min_max_child)],
        _ => {
            let sigs = trees.iter().map(chi).collect::<Result<Vec<_>>>()?;
            let meet = Signature::meet(&sigs).expect("nonempty");
            let tall = chi_inv(&meet);
            if meet.max_child_count() >= s.min_max_child {
                vec![tall]
            } else {
                vec![tall, Tree::star(s.min_max_child)]
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::tree_equal;
    use crate::tree::{canonical_form, parse_tree, Mode};

    fn sig(v: &[u32]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    fn p(s: &str) -> Tree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn chi_examples() {
        let t = Tree::with_subtrees([&Tree::star(2), &Tree::star(3)]);
        assert_eq!(chi(&t).unwrap(), sig(&[4, 3]));
        assert_eq!(chi(&Tree::star(3)).unwrap(), sig(&[1, 1, 1]));
        assert!(chi(&Tree::single()).unwrap().is_empty());
        assert!(matches!(chi(&Tree::path(4)), Err(Error::Constraint(_))));
    }

    #[test]
    fn chi_inv_examples() {
        assert_eq!(
            canonical_form(&chi_inv(&sig(&[2, 2])), Mode::Unordered).as_str(),
            "((())(()))"
        );
        assert_eq!(chi_inv(&Signature::default()).len(), 1);
        assert_eq!(chi(&chi_inv(&sig(&[5, 1, 3]))).unwrap(), sig(&[5, 3, 1]));
    }

    #[test]
    fn signature_order_examples() {
        assert!(signature_leq(&sig(&[3, 1]), &sig(&[5, 1])));
        assert!(!signature_leq(&sig(&[3, 3]), &sig(&[5, 1])));
        assert!(signature_leq(&sig(&[2, 2]), &sig(&[2, 2])));
        assert!(!signature_leq(&sig(&[1, 1, 1]), &sig(&[9, 9])));
    }

    #[test]
    fn signature_rejects_zero() {
        assert!(Signature::new(vec![2, 0]).is_err());
    }

    #[test]
    fn meet_aligns_largest_entries() {
        let m = Signature::meet([&sig(&[2, 3]), &sig(&[3])]).unwrap();
        assert_eq!(m, sig(&[3]));
        let m = Signature::meet([&sig(&[6, 2, 2]), &sig(&[4, 4])]).unwrap();
        assert_eq!(m, sig(&[4, 2]));
    }

    #[test]
    fn bump_and_push_keep_order() {
        assert_eq!(sig(&[3, 2, 2]).bump(2), sig(&[3, 3, 2]));
        assert_eq!(sig(&[3]).push_leaf(), sig(&[3, 1]));
    }

    #[test]
    fn h2_mixed_heights() {
        let t32 = chi_inv(&sig(&[3, 2]));
        assert!(h2_subtree_iso(&chi_inv(&sig(&[2, 2])), &t32).unwrap());
        assert!(h2_subtree_iso(&Tree::star(2), &chi_inv(&sig(&[3]))).unwrap());
        assert!(!h2_subtree_iso(&chi_inv(&sig(&[2])), &Tree::star(5)).unwrap());
        assert!(h2_subtree_iso(&Tree::single(), &Tree::single()).unwrap());
    }

    #[test]
    fn mct_examples() {
        let a = chi_inv(&sig(&[2, 3]));
        let b = chi_inv(&sig(&[3]));
        assert_eq!(
            canonical_form(&mct(&[a, b]).unwrap(), Mode::Unordered).as_str(),
            "((()()))"
        );
        let t = p("((()())()(()))");
        assert!(tree_equal(
            &mct(&[t.clone(), t.clone()]).unwrap(),
            &t,
            Mode::Unordered
        ));
        let m = mct(&[Tree::star(2), chi_inv(&sig(&[4, 1]))]).unwrap();
        assert!(tree_equal(&m, &Tree::star(2), Mode::Unordered));
        assert!(matches!(mct(&[]), Err(Error::Argument(_))));
        assert_eq!(mct(&[Tree::single(), Tree::star(3)]).unwrap().len(), 1);
    }

    #[test]
    fn common_star_below_the_root_is_a_second_maximum() {
        // (3) has a middle vertex with two children; (2,2) has a root with two.
        let a = chi_inv(&sig(&[3]));
        let b = chi_inv(&sig(&[2, 2]));
        let all = maximal_common_trees(&[a.clone(), b.clone()]).unwrap();
        let keys: Vec<String> = all
            .iter()
            .map(|t| canonical_form(t, Mode::Unordered).into_string())
            .collect();
        assert_eq!(keys, vec!["((()))".to_string(), "(()())".to_string()]);
        assert_eq!(maximal_common_trees(&[a.clone(), a]).unwrap().len(), 1);
    }
}
