use proptest::prelude::*;
use rayon::prelude::*;
use ybx::classify::{all_specs, base_points};
use ybx::group::generate_group;
use ybx::oracle::{census, enumerate_all_cycle_sets, iso_partition};
use ybx::{CycleSet, Ideal, LeftBrace, Perm, ZGroupBraceSpec};

fn specs_below(bound: u64) -> Vec<ZGroupBraceSpec> {
    (1..bound).step_by(2).flat_map(|n| all_specs(n).unwrap()).collect()
}

fn perm_strategy(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
}

proptest! {
    #[test]
    fn generated_groups(gens in prop::collection::vec(perm_strategy(6), 1..4)) {
        let g = generate_group(gens.clone(), 6).unwrap();
        prop_assert_eq!(720 % g.order(), 0);
        for x in &gens {
            prop_assert!(g.contains(x));
        }
        if g.is_regular() {
            prop_assert!(g.is_transitive() && g.order() == 6);
        }
    }

    #[test]
    fn isomorphism_witnesses_compose(seed_a in perm_strategy(9), seed_b in perm_strategy(9), g in prop::sample::select(vec![1usize, 2, 4, 5, 7, 8])) {
        let x = CycleSet::from_brace_uniconnected(&LeftBrace::bpkt(3, 2, 1).unwrap(), g).unwrap();
        let y = x.relabel(&seed_a);
        let z = y.relabel(&seed_b);
        let xy = x.find_isomorphism(&y).unwrap().unwrap();
        let yz = y.find_isomorphism(&z).unwrap().unwrap();
        prop_assert!(x.is_isomorphism_to(&x, &Perm::identity(9)));
        prop_assert!(y.is_isomorphism_to(&x, &xy.inverse()));
        prop_assert!(x.is_isomorphism_to(&z, &yz.compose(&xy)));
    }
}

#[test]
fn brace_invariants_on_constructed_braces() {
    let mut braces: Vec<LeftBrace> = specs_below(82).iter().map(|s| s.build().unwrap()).collect();
    braces.push(LeftBrace::from_operations(8, |a, b| (a + b) % 8, |a, b| (a + 3usize.pow(a as u32) * b) % 8).unwrap());
    braces.par_iter().for_each(|b| {
        let n = b.order();
        for x in 0..n {
            for y in 0..n {
                assert_eq!(b.lambda(x).compose(b.lambda(y)), *b.lambda(b.mul(x, y)));
            }
        }
        let soc = b.socle();
        assert!(Ideal::new(b, soc.elements().to_vec()).is_ok());
        if n > 1 && b.is_additively_cyclic() {
            assert!(soc.len() > 1);
            let q = b.quotient(&soc).unwrap();
            if q.order() > 1 {
                assert!(q.socle().len() > 1);
            }
        }
        for g in base_points(b).unwrap_or_default() {
            assert_eq!(CycleSet::from_brace_uniconnected(b, g).unwrap().mpl(), b.mpl());
        }
    });
}

#[test]
fn bpkt_socle_and_level() {
    for p in [3u64, 5, 7, 11, 13] {
        for k in 1..=5u32 {
            if p.pow(k) > 243 {
                break;
            }
            for t in 1..=k {
                let b = LeftBrace::bpkt(p, k, t).unwrap();
                assert_eq!(b.socle().len() as u64, p.pow(t));
                assert_eq!(b.mpl(), Some(k.div_ceil(t) as usize));
            }
        }
    }
}

#[test]
fn semidirect_with_trivial_action_is_direct() {
    let a = LeftBrace::bpkt(3, 2, 1).unwrap();
    let b = LeftBrace::bpkt(5, 1, 1).unwrap();
    let alpha = vec![Perm::identity(9); 5];
    assert_eq!(a.semidirect_product(&b, &alpha).unwrap(), a.direct_product(&b));
}

#[test]
fn automorphisms_fix_zero_and_preserve_tables() {
    for spec in specs_below(46) {
        let b = spec.build().unwrap();
        for phi in b.automorphisms().unwrap() {
            assert_eq!(phi.apply(0), 0);
            for x in 0..b.order() {
                for y in 0..b.order() {
                    assert_eq!(phi.apply(b.add(x, y)), b.add(phi.apply(x), phi.apply(y)));
                    assert_eq!(phi.apply(b.mul(x, y)), b.mul(phi.apply(x), phi.apply(y)));
                }
            }
        }
    }
}

#[test]
fn built_braces_up_to_255() {
    specs_below(256).par_iter().for_each(|spec| {
        let b = spec.build().unwrap();
        assert!(LeftBrace::validate(&b.add_rows(), &b.mul_rows()).is_ok(), "{spec:?}");
        assert!((0..b.order()).any(|x| b.additive_order(x) == b.order()));
        assert!(b.mul_group().is_zgroup());
        assert_eq!(spec.structured_socle_order().unwrap(), b.socle().len() as u64, "{spec:?}");
        assert_eq!(Some(spec.mpl_formula().unwrap()), b.mpl(), "{spec:?}");
    });
}

#[test]
fn isomorphism_is_an_equivalence_on_the_size_four_census() {
    let all = enumerate_all_cycle_sets(4, None).unwrap();
    let classes = iso_partition(&all).unwrap();
    let class_of = |i: usize| classes.iter().position(|c| c.contains(&i)).unwrap();
    for i in (0..all.len()).step_by(7) {
        for j in (0..all.len()).step_by(5) {
            let iso = all[i].are_isomorphic(&all[j]).unwrap();
            assert_eq!(iso, all[j].are_isomorphic(&all[i]).unwrap());
            assert_eq!(iso, class_of(i) == class_of(j));
        }
    }
    for set in &all {
        assert!(set.law_violation().is_none() && set.squaring_is_bijective());
    }
}

#[test]
fn three_point_census() {
    let all = enumerate_all_cycle_sets(3, None).unwrap();
    let classes = iso_partition(&all).unwrap();
    let indecomposable: Vec<&CycleSet> =
        classes.iter().map(|c| &all[c[0]]).filter(|x| x.is_indecomposable()).collect();
    assert_eq!(indecomposable.len(), 1);
    assert!(indecomposable[0].is_uniconnected());
    assert_eq!(indecomposable[0].mpl(), Some(1));
    assert_eq!(census(3, Some(5)).unwrap(), census(3, None).unwrap());
}
