use centext::abelian::AbelianGroup;
use centext::cohomology::{z2_b2_h2, LCocycle};
use centext::embedding::{
    beta_tilde, divisible_target, embed, embed_with_factor_map, factor_map, factor_map_by_congruences, universal_triple,
};
use centext::properties::desk_groups;
use centext::twisted::ExtensionGroup;

#[test]
fn factor_maps_agree_up_to_coboundary() {
    for a in desk_groups() {
        for b in desk_groups() {
            let h2 = z2_b2_h2(&a, &b).unwrap();
            for c in h2.classes() {
                let g = ExtensionGroup::build(&h2.class_cocycle(&c).unwrap()).unwrap();
                let t = universal_triple(&g.gamma().commutator_pairing().unwrap()).unwrap();
                let target = divisible_target(&b);
                let chi1 = factor_map(&t, &target).unwrap();
                let chi2 = factor_map_by_congruences(&t, &target).unwrap();
                let b1 = LCocycle::from_bilinear(&a, &beta_tilde(&t, &chi1, target.rank), target.rank).unwrap();
                let b2 = LCocycle::from_bilinear(&a, &beta_tilde(&t, &chi2, target.rank), target.rank).unwrap();
                assert!(b1.cohomologous(&b2).unwrap().is_some());
                let r = embed_with_factor_map(&g, t, target, chi2).unwrap();
                assert!(r.report.passed());
            }
        }
    }
}

#[test]
fn target_depends_only_on_b() {
    let b = AbelianGroup::new(vec![2, 4]).unwrap();
    let mut seen = None;
    for a in [AbelianGroup::cyclic(2), AbelianGroup::cyclic(3), AbelianGroup::new(vec![2, 2]).unwrap()] {
        let h2 = z2_b2_h2(&a, &b).unwrap();
        for c in h2.classes() {
            let r = embed(&ExtensionGroup::build(&h2.class_cocycle(&c).unwrap()).unwrap()).unwrap();
            let key = (r.l_rank(), r.target.j.clone());
            match &seen {
                None => seen = Some(key),
                Some(k) => assert_eq!(*k, key),
            }
        }
    }
}

#[test]
fn universal_property_against_every_bilinear_factorization() {
    // For (Z/2)² with the nonzero pairing into Z/2, every bilinear β′ into
    // Z/2 with β′ − β′ᵀ = α factors uniquely through the triple.
    let a = AbelianGroup::new(vec![2, 2]).unwrap();
    let b = AbelianGroup::cyclic(2);
    let alpha = centext::BilinearMatrix::new(&a, &b, vec![vec![vec![0], vec![1]], vec![vec![1], vec![0]]]).unwrap();
    let t = universal_triple(&alpha).unwrap();
    let mut count = 0;
    for beta in centext::cocycle::all_bilinear(&a, &b, 1 << 10).unwrap() {
        if beta.sub(&beta.transpose()).unwrap() != alpha {
            continue;
        }
        count += 1;
        let psi = centext::embedding::verify_universal_property(&t, &b, &beta, &centext::IntMatrix::identity(1)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t.c_group.apply_hom(&psi, t.beta.entry(i, j), &b), beta.entry(i, j));
            }
        }
    }
    assert_eq!(count, 8);
}
