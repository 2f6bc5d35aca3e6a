use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treemine::closed::{closure, collect_closed, is_closed, parent_of};
use treemine::gen::{from_parent_array, shuffle_children};
use treemine::height2::{chi, chi_inv, maximal_common_trees, signature_leq, Signature};
use treemine::oracle::{
    brute_closed, brute_frequent, brute_maximal, brute_mct, brute_mis, Hypergraph,
};
use treemine::{
    canonical_form, find_embedding, parse_tree, serialize_tree, subtree_iso, support_set, CanonKey,
    Dataset, Mode, Tree,
};

/// Height at most two: root child count, then leaves under each child.
fn shallow_tree() -> impl Strategy<Value = Tree> {
    prop::collection::vec(0usize..5, 0..6).prop_map(|kids| {
        let subs: Vec<Tree> = kids.into_iter().map(Tree::star).collect();
        Tree::with_subtrees(&subs)
    })
}

fn any_tree(max: usize) -> impl Strategy<Value = Tree> {
    prop::collection::vec(any::<prop::sample::Index>(), 0..max).prop_map(|picks| {
        let mut parent = vec![0usize];
        for (i, p) in picks.iter().enumerate() {
            parent.push(p.index(i + 1));
        }
        from_parent_array(&parent)
    })
}

fn shallow_dataset(max_trees: usize) -> impl Strategy<Value = Dataset> {
    prop::collection::vec(shallow_tree(), 1..=max_trees)
        .prop_map(|t| Dataset::new(t, Mode::Unordered))
}

fn signature() -> impl Strategy<Value = Signature> {
    prop::collection::vec(1u32..6, 0..5).prop_map(|v| Signature::new(v).unwrap())
}

fn key_set(d: &Dataset, theta: usize) -> BTreeSet<CanonKey> {
    collect_closed(d, theta)
        .unwrap()
        .into_iter()
        .map(|n| n.canon)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_round_trip(t in any_tree(14)) {
        let s = serialize_tree(&t);
        prop_assert_eq!(serialize_tree(&parse_tree(&s).unwrap()), s);
    }

    #[test]
    fn canonical_key_ignores_sibling_order(t in any_tree(14), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = shuffle_children(&mut rng, &t);
        prop_assert_eq!(canonical_form(&t, Mode::Unordered), canonical_form(&u, Mode::Unordered));
        prop_assert!(subtree_iso(&t, &u, Mode::Unordered));
    }

    #[test]
    fn embeddings_validate(p in any_tree(6), t in any_tree(12)) {
        for mode in [Mode::Ordered, Mode::Unordered] {
            match find_embedding(&p, &t, mode) {
                Some(w) => prop_assert!(w.validate(&p, &t, mode)),
                None => prop_assert!(!subtree_iso(&p, &t, mode)),
            }
        }
    }

    #[test]
    fn chi_round_trip(s in signature()) {
        prop_assert_eq!(chi(&chi_inv(&s)).unwrap(), s);
    }

    #[test]
    fn meet_is_greatest_lower_bound(a in signature(), b in signature(), c in signature()) {
        let m = Signature::meet([&a, &b]).unwrap();
        prop_assert!(signature_leq(&m, &a) && signature_leq(&m, &b));
        if signature_leq(&c, &a) && signature_leq(&c, &b) {
            prop_assert!(signature_leq(&c, &m));
        }
    }

    #[test]
    fn miner_matches_oracle(d in shallow_dataset(5)) {
        for theta in 1..=d.len() {
            let oracle: BTreeSet<CanonKey> = brute_closed(&d, theta).unwrap().into_keys().collect();
            prop_assert_eq!(key_set(&d, theta), oracle, "theta={}", theta);
        }
    }

    #[test]
    fn emitted_patterns_are_closed_with_larger_parent_support(d in shallow_dataset(5), theta in 1usize..4) {
        for n in collect_closed(&d, theta).unwrap() {
            prop_assert!(n.support.count() >= theta);
            prop_assert!(is_closed(&n.pattern, &d).unwrap());
            prop_assert_eq!(&n.support, &support_set(&n.pattern, &d));
            if let Ok(p) = parent_of(&n.pattern, &d) {
                prop_assert!(support_set(&p, &d).count() > n.support.count());
            }
        }
    }

    #[test]
    fn closure_is_idempotent_and_support_preserving(d in shallow_dataset(4), p in shallow_tree()) {
        if let Ok(c) = closure(&p, &d) {
            prop_assert!(subtree_iso(&p, &c, Mode::Unordered));
            prop_assert_eq!(support_set(&p, &d), support_set(&c, &d));
            let cc = closure(&c, &d).unwrap();
            prop_assert_eq!(canonical_form(&cc, Mode::Unordered), canonical_form(&c, Mode::Unordered));
        } else {
            prop_assert_eq!(support_set(&p, &d).count(), 0);
        }
    }

    #[test]
    fn mct_set_matches_brute_force(d in shallow_dataset(4)) {
        let fast: BTreeSet<CanonKey> = maximal_common_trees(d.trees())
            .unwrap()
            .iter()
            .map(|t| canonical_form(t, Mode::Unordered))
            .collect();
        let brute: BTreeSet<CanonKey> = brute_mct(&d).unwrap().into_keys().collect();
        prop_assert_eq!(fast, brute);
    }

    #[test]
    fn frequent_is_antitone_and_maximal_is_closed(ts in prop::collection::vec(any_tree(8), 1..4), ordered in any::<bool>()) {
        let mode = if ordered { Mode::Ordered } else { Mode::Unordered };
        let d = Dataset::new(ts, mode);
        let mut prev: Option<BTreeSet<CanonKey>> = None;
        for theta in 1..=d.len() {
            let f: BTreeSet<CanonKey> = brute_frequent(&d, theta).unwrap().into_keys().collect();
            if let Some(p) = &prev {
                prop_assert!(f.is_subset(p));
            }
            let closed: BTreeSet<CanonKey> = brute_closed(&d, theta).unwrap().into_keys().collect();
            let maximal: BTreeSet<CanonKey> = brute_maximal(&d, theta).unwrap().into_keys().collect();
            prop_assert!(maximal.is_subset(&closed));
            prop_assert!(closed.is_subset(&f));
            prev = Some(f);
        }
    }

    #[test]
    fn mis_members_are_independent_and_incomparable(
        n in 1usize..8,
        raw in prop::collection::vec(prop::collection::vec(1usize..8, 1..4), 0..6),
    ) {
        let edges: Vec<Vec<usize>> = raw.into_iter().map(|e| e.into_iter().map(|v| (v - 1) % n + 1).collect()).collect();
        let h = Hypergraph::new(n, edges).unwrap();
        let mis: Vec<BTreeSet<usize>> = brute_mis(&h).unwrap().into_iter().map(|v| v.into_iter().collect()).collect();
        prop_assert!(!mis.is_empty());
        for (i, a) in mis.iter().enumerate() {
            prop_assert!(h.is_independent(a));
            for (j, b) in mis.iter().enumerate() {
                prop_assert!(i == j || !a.is_subset(b));
            }
        }
    }
}

#[test]
fn all_common_frequent_trees_sit_below_an_mct() {
    // Every |D|-frequent tree is contained in some maximal common tree.
    let d = Dataset::new(
        vec![
            chi_inv(&Signature::new(vec![3]).unwrap()),
            chi_inv(&Signature::new(vec![2, 2]).unwrap()),
        ],
        Mode::Unordered,
    );
    let tops = maximal_common_trees(d.trees()).unwrap();
    assert_eq!(tops.len(), 2);
    for t in brute_frequent(&d, d.len()).unwrap().values() {
        assert!(tops.iter().any(|m| subtree_iso(t, m, Mode::Unordered)));
    }
}
