use mackey::catalog;
use mackey::groups::{ActionHom, FiniteGroup, SemidirectGroup};
use mackey::imprimitivity::{restrict_to_system, system_support, OrbitMembership};
use mackey::mackey::{classify, completeness_check, hom_correspondence_check, match_irrep};
use mackey::repr::{decompose_regular, hom_dimension, MatrixRep};
use proptest::prelude::*;

/// Number of conjugacy classes, by brute force.
fn class_count(g: &FiniteGroup) -> usize {
    let n = g.size();
    let mut seen = vec![false; n];
    let mut count = 0;
    for x in 0..n {
        if !seen[x] {
            count += 1;
            for k in 0..n {
                seen[g.mul(g.mul(k, x), g.inv(k))] = true;
            }
        }
    }
    count
}

/// Expected entry count from orbit-stabilizer data alone.
fn expected_entries(g: &SemidirectGroup) -> usize {
    g.dual()
        .orbits()
        .iter()
        .map(|o| class_count(&g.dual().stabilizer(g.h(), o.representative).group))
        .sum()
}

fn dim_counts(g: &SemidirectGroup) -> std::collections::BTreeMap<usize, usize> {
    let mut out = std::collections::BTreeMap::new();
    for e in classify(g, 0).unwrap().entries {
        *out.entry(e.dim()).or_insert(0) += 1;
    }
    out
}

#[test]
fn affine_counts() {
    for p in [3usize, 5, 7] {
        let g = catalog::affine(p as u64).unwrap();
        let counts = dim_counts(&g);
        assert_eq!(counts[&1], p - 1);
        assert_eq!(counts[&(p - 1)], 1);
        assert_eq!(counts.len(), 2);
    }
}

#[test]
fn heisenberg_counts() {
    for p in [2usize, 3] {
        let g = catalog::heisenberg(p as u64).unwrap();
        let counts = dim_counts(&g);
        assert_eq!(counts[&1], p * p);
        assert_eq!(counts[&p], p - 1);
    }
}

#[test]
fn direct_products_pair_irreps_with_characters() {
    for h in [
        FiniteGroup::cyclic(2).unwrap(),
        catalog::s3_table(),
        FiniteGroup::cyclic(3).unwrap(),
    ] {
        let irreps_h = decompose_regular(&h, 0).unwrap().len();
        let g = catalog::direct_product(h, &[2, 2]).unwrap();
        let report = classify(&g, 0).unwrap();
        assert_eq!(report.entries.len(), irreps_h * 4);
        assert!(report.audit.passed());
    }
}

#[test]
fn whole_catalog_is_complete() {
    for (name, g) in catalog::standard().into_iter().chain(catalog::towers()) {
        let report = classify(&g, 0).unwrap();
        assert!(report.audit.passed(), "{name}: {:?}", report.audit);
        assert_eq!(report.entries.len(), expected_entries(&g), "{name}");
        assert_eq!(report.entries.len(), class_count(g.group()), "{name}");
        let detail = completeness_check(&report, &g, 0).unwrap();
        assert!(detail.passed(), "{name}");
        for e in &report.entries {
            assert_eq!(e.dim(), e.orbit.len() * e.stabilizer_dim(), "{name}");
            let sys = restrict_to_system(&g, &e.induced).unwrap();
            assert_eq!(sys.pvm().support(), e.orbit, "{name}");
            assert_eq!(
                system_support(&g, &sys).orbit,
                OrbitMembership::Single(e.orbit_index),
                "{name}"
            );
        }
    }
}

#[test]
fn entries_are_ordered() {
    for (name, g) in catalog::standard() {
        let entries = classify(&g, 0).unwrap().entries;
        for w in entries.windows(2) {
            let key = |e: &mackey::mackey::ClassificationEntry| (e.representative, e.stabilizer_dim());
            assert!(key(&w[0]) <= key(&w[1]), "{name}");
            if w[0].orbit_index == w[1].orbit_index {
                assert!(w[0].stabilizer_irrep < w[1].stabilizer_irrep, "{name}");
            }
        }
    }
}

#[test]
fn classification_is_deterministic() {
    let g = catalog::heisenberg(3).unwrap();
    let a = classify(&g, 11).unwrap();
    let b = classify(&g, 11).unwrap();
    assert_eq!(a.summary(), b.summary());
    for (x, y) in a.entries.iter().zip(&b.entries) {
        assert_eq!(x.induced, y.induced);
    }
}

#[test]
fn match_irrep_examples() {
    let g = catalog::affine(3).unwrap();
    let report = classify(&g, 0).unwrap();
    assert_eq!(match_irrep(&g, &MatrixRep::trivial(6, 1), &report).unwrap(), 0);
    let irreps = decompose_regular(g.group(), 5).unwrap();
    let two = match_irrep(&g, &irreps[2], &report).unwrap();
    assert_eq!(report.entries[two].dim(), 2);

    let g = catalog::heisenberg(2).unwrap();
    let report = classify(&g, 0).unwrap();
    let mut matched: Vec<usize> = decompose_regular(g.group(), 3)
        .unwrap()
        .iter()
        .map(|pi| match_irrep(&g, pi, &report).unwrap())
        .collect();
    matched.sort_unstable();
    assert_eq!(matched, vec![0, 1, 2, 3, 4]);

    let reducible = report.entries[0]
        .induced
        .direct_sum(&report.entries[1].induced)
        .unwrap();
    assert!(match_irrep(&g, &reducible, &report).is_err());
}

#[test]
fn hom_correspondence_examples() {
    let g = catalog::heisenberg(3).unwrap();
    for m in 0..3 {
        let chi = g.a().index_of(&[m, 0]);
        let hc = hom_correspondence_check(&g, chi, 0).unwrap();
        assert_eq!(hc.induced, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(hc.passed());
    }
    let g = catalog::affine(3).unwrap();
    let hc = hom_correspondence_check(&g, 0, 0).unwrap();
    assert_eq!(hc.induced[0][1], 0);
    assert_eq!(hc.stabilizer[0][1], 0);
    for (name, g) in catalog::standard() {
        for o in g.dual().orbits() {
            assert!(
                hom_correspondence_check(&g, o.representative, 0).unwrap().passed(),
                "{name}"
            );
        }
    }
}

/// The affine group of Z/p with the elements of H renamed by `perm`.
fn relabeled_affine(p: u64, perm: &[usize]) -> SemidirectGroup {
    let g = catalog::affine(p).unwrap();
    let h = g.h().relabel(perm).unwrap();
    let mut mats = vec![Vec::new(); h.size()];
    for (old, &new) in perm.iter().enumerate() {
        mats[new] = g.action().automorphism(old).matrix().to_vec();
    }
    let t = ActionHom::new(&h, g.a(), mats).unwrap();
    SemidirectGroup::new(h, g.a().clone(), t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn stable_under_relabeling_h(
        p in prop::sample::select(vec![5u64, 7]),
        tail in Just((1..6usize).collect::<Vec<_>>()).prop_shuffle(),
        seed in 0u64..4,
    ) {
        let g = catalog::affine(p).unwrap();
        let nh = g.h().size();
        // the identity stays at index 0
        let perm: Vec<usize> = std::iter::once(0).chain(tail.into_iter().filter(|&x| x < nh)).collect();
        let g2 = relabeled_affine(p, &perm);
        let r1 = classify(&g, seed).unwrap();
        let r2 = classify(&g2, seed).unwrap();
        prop_assert!(r2.audit.passed());
        prop_assert_eq!(r1.entries.len(), r2.entries.len());
        // pull entries of the relabeled group back along (h, a) -> (perm[h], a)
        let pulled: Vec<MatrixRep> = r2
            .entries
            .iter()
            .map(|e| {
                let mats = (0..g.order())
                    .map(|x| {
                        let (h, a) = g.split(x);
                        e.induced.mat(g2.index(perm[h], a)).clone()
                    })
                    .collect();
                MatrixRep::new(e.dim(), mats).unwrap()
            })
            .collect();
        for e in &r1.entries {
            let hits = pulled.iter().filter(|q| hom_dimension(&e.induced, q).unwrap() == 1).count();
            prop_assert_eq!(hits, 1);
        }
    }
}
