mod common;

use posetfo::checker::{check_local, eval_naive, CheckOptions};
use posetfo::formula::{parse_sentence, PosetFormula};
use posetfo::gen::{self, SentenceShape};
use posetfo::poset::{brute_force_width, Poset, PosetFile};
use posetfo::typegraph::{build_up_to, canonical_form, TypeTable, DEFAULT_SIZE_CAP};
use proptest::prelude::*;

fn sentence(seed: u64, rank: usize) -> PosetFormula {
    let shape = SentenceShape {
        max_rank: rank,
        ..SentenceShape::default()
    };
    gen::random_sentence(&mut gen::rng(seed), &shape, &gen::palette(2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nnf_is_idempotent_and_equivalent(seed in any::<u64>(), pseed in any::<u64>()) {
        let f = sentence(seed, 2);
        let g = common::scramble(&f, &mut gen::rng(seed.wrapping_add(1)));
        let nnf = g.to_nnf();
        prop_assert!(nnf.is_nnf());
        prop_assert_eq!(nnf.to_nnf(), nnf.clone());
        prop_assert_eq!(nnf.quantifier_rank(), g.quantifier_rank());
        let p = common::random_poset(pseed, 7, 3);
        let expected = common::eval_direct(&p, &f);
        prop_assert_eq!(common::eval_direct(&p, &g), expected);
        prop_assert_eq!(common::eval_direct(&p, &nnf), expected);
    }

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>()) {
        let f = common::scramble(&sentence(seed, 3), &mut gen::rng(seed ^ 7));
        let back: PosetFormula = parse_sentence(&f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn engines_agree_with_direct_semantics(seed in any::<u64>(), pseed in any::<u64>()) {
        let p = common::random_poset(pseed, 9, 3);
        let f = common::scramble(&sentence(seed, 2), &mut gen::rng(seed ^ 3));
        let expected = common::eval_direct(&p, &f);
        prop_assert_eq!(eval_naive(&p, &f).unwrap(), expected);
        for (first_move_opt, memoize) in [(true, true), (false, true), (true, false), (false, false)] {
            let opts = CheckOptions { first_move_opt, memoize, ..CheckOptions::default() };
            prop_assert_eq!(check_local(&p, &f, &opts).unwrap().verdict, expected, "{} on {:?}", f, (first_move_opt, memoize));
        }
    }

    #[test]
    fn memo_changes_nothing_but_work(seed in any::<u64>(), pseed in any::<u64>()) {
        let p = common::random_poset(pseed, 8, 2);
        let f = sentence(seed, 3);
        let on = check_local(&p, &f, &CheckOptions::default()).unwrap();
        let off = check_local(&p, &f, &CheckOptions { memoize: false, ..CheckOptions::default() }).unwrap();
        prop_assert_eq!(on.verdict, off.verdict);
        prop_assert!(on.stats.positions <= off.stats.positions);
    }

    #[test]
    fn chain_partition_is_minimum(seed in any::<u64>(), n in 1usize..13, w in 1usize..5) {
        let p = gen::random_poset(n.max(w), w, 1, seed).unwrap();
        prop_assert!(common::is_chain_partition(&p));
        prop_assert_eq!(p.width(), brute_force_width(p.up_sets()).unwrap());
        prop_assert!(p.width() <= w);
    }

    #[test]
    fn poset_files_round_trip(seed in any::<u64>()) {
        let p = common::random_poset(seed, 12, 3);
        let file = PosetFile::from_poset(&p);
        let q = Poset::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(q.len(), p.len());
        for a in 0..p.len() {
            prop_assert_eq!(q.color(a), p.color(a));
            for b in 0..p.len() {
                prop_assert_eq!(q.le(a, b), p.le(a, b));
            }
        }
    }

    #[test]
    fn canonical_form_ignores_vertex_order(seed in any::<u64>(), n in 1usize..8) {
        let mut r = gen::rng(seed);
        let s = common::random_structure(&mut r, n);
        let perm = common::random_permutation(&mut r, n);
        prop_assert_eq!(canonical_form(&s.permuted(&perm)), canonical_form(&s));
    }

    #[test]
    fn rank_digraphs_refine_and_never_cross(seed in any::<u64>()) {
        let p = common::random_poset(seed, 12, 3);
        let ds = build_up_to(&p, 2, &mut TypeTable::new(), DEFAULT_SIZE_CAP).unwrap();
        let bad = common::structural_violations(&p, &ds);
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn perturbed_interval_posets_keep_edges_and_width(seed in any::<u64>(), n in 0usize..7, k in 1usize..3) {
        let inst = gen::random_interval_instance(n, k, seed).unwrap();
        let moved = inst.perturb();
        prop_assert_eq!(moved.edges(), inst.edges());
        let (p, _) = moved.build_poset().unwrap();
        prop_assert!(common::is_chain_partition(&p));
        prop_assert!(brute_force_width(p.up_sets()).unwrap() <= k + 1);
    }
}
