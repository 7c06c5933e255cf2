use mackey::catalog;
use mackey::groups::SemidirectGroup;
use mackey::imprimitivity::{
    assemble, restrict_to_system, stalk_decomposition, stalk_rep, system_hom_dimension, system_irreducible,
    system_support, systems_equivalent, transport_to_induced, OrbitMembership, SystemOfImprimitivity,
};
use mackey::linalg::{identity, inverse, max_diff, random_invertible};
use mackey::mackey::classify;
use mackey::repr::{decompose_regular, hom_dimension, regular_representation, MatrixRep};
use mackey::spectral::ProjectionValuedMeasure;
use mackey::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn catalog_irreps() -> Vec<(String, SemidirectGroup, Vec<MatrixRep>)> {
    catalog::standard()
        .into_iter()
        .map(|(name, g)| {
            let irreps = decompose_regular(g.group(), 0).unwrap();
            (name, g, irreps)
        })
        .collect()
}

#[test]
fn round_trip_in_both_directions() {
    for (name, g, irreps) in catalog_irreps() {
        for pi in &irreps {
            let sys = restrict_to_system(&g, pi).unwrap();
            let back = assemble(&g, &sys).unwrap();
            assert!(back.max_diff(pi) < 1e-9, "{name}");
            let again = restrict_to_system(&g, &back).unwrap();
            assert!(again.max_diff(&sys) < 1e-9, "{name}");
        }
        let reg = regular_representation(g.group());
        let sys = restrict_to_system(&g, &reg).unwrap();
        assert!(assemble(&g, &sys).unwrap().max_diff(&reg) < 1e-9, "{name}");
    }
}

#[test]
fn trivial_system_assembles_to_trivial_rep() {
    let g = catalog::affine(5).unwrap();
    let a = g.a().clone();
    let pvm = ProjectionValuedMeasure::new(a, 1, [(0, identity(1))].into_iter().collect()).unwrap();
    let sys = SystemOfImprimitivity::new(&g, MatrixRep::trivial(4, 1), pvm).unwrap();
    assert!(system_irreducible(&g, &sys));
    assert!(assemble(&g, &sys).unwrap().max_diff(&MatrixRep::trivial(20, 1)) < 1e-15);
    let stalks = stalk_decomposition(&g, &sys).unwrap();
    assert_eq!(stalks.len(), 1);
    assert_eq!(stalks[&0].ncols(), 1);
    let stalk = stalk_rep(&g, &sys, 0).unwrap();
    assert_eq!(stalk.stabilizer.order(), 4);
    assert!(stalk.pi0.max_diff(&MatrixRep::trivial(4, 1)) < 1e-15);
    let t = transport_to_induced(&g, &sys, 0).unwrap();
    assert_eq!((t.forward.nrows(), t.forward.ncols()), (1, 1));
}

#[test]
fn irreducibility_matches_representations() {
    for (name, g, irreps) in catalog_irreps() {
        for pi in &irreps {
            assert!(system_irreducible(&g, &restrict_to_system(&g, pi).unwrap()), "{name}");
        }
        let pair = irreps[0].direct_sum(&irreps[irreps.len() - 1]).unwrap();
        let sys = restrict_to_system(&g, &pair).unwrap();
        assert!(!system_irreducible(&g, &sys), "{name}");
        assert_eq!(system_hom_dimension(&g, &sys, &sys), 2, "{name}");
    }
}

#[test]
fn support_lies_in_one_orbit() {
    for (name, g, irreps) in catalog_irreps() {
        let mut orbit_of = Vec::new();
        for pi in &irreps {
            let sys = restrict_to_system(&g, pi).unwrap();
            match system_support(&g, &sys).orbit {
                OrbitMembership::Single(o) => {
                    let members = &g.dual().orbits()[o].members;
                    assert_eq!(&sys.pvm().support(), members, "{name}");
                    orbit_of.push(o);
                }
                OrbitMembership::Multiple(m) => panic!("{name}: support meets orbits {m:?}"),
            }
        }
        for i in 0..irreps.len() {
            for j in 0..irreps.len() {
                if orbit_of[i] == orbit_of[j] {
                    continue;
                }
                let si = restrict_to_system(&g, &irreps[i]).unwrap();
                let sj = restrict_to_system(&g, &irreps[j]).unwrap();
                assert!(systems_equivalent(&g, &si, &sj, 0).is_none(), "{name}");
                let sum = si.direct_sum(&sj).unwrap();
                assert!(
                    matches!(system_support(&g, &sum).orbit, OrbitMembership::Multiple(_)),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn stalks_are_permuted_isometrically() {
    for (name, g, irreps) in catalog_irreps() {
        for pi in irreps.iter().chain(std::iter::once(&regular_representation(g.group()))) {
            let sys = restrict_to_system(&g, pi).unwrap();
            let stalks = stalk_decomposition(&g, &sys).unwrap();
            assert_eq!(stalks.values().map(|b| b.ncols()).sum::<usize>(), pi.dim(), "{name}");
            for h in 0..g.h().size() {
                for (&chi, basis) in &stalks {
                    let target = &stalks[&g.dual().apply(h, chi)];
                    let image = sys.pi2().mat(h) * basis;
                    // orthonormal image inside the target stalk
                    assert!(
                        max_diff(&(image.adjoint() * &image), &identity(basis.ncols())) < 1e-9,
                        "{name}"
                    );
                    assert!(
                        max_diff(&(target * (target.adjoint() * &image)), &image) < 1e-9,
                        "{name}"
                    );
                }
            }
        }
    }
}

#[test]
fn transport_on_every_catalog_irrep() {
    for (name, g, irreps) in catalog_irreps() {
        for pi in &irreps {
            let sys = restrict_to_system(&g, pi).unwrap();
            let chi0 = sys.pvm().support()[0];
            let t = transport_to_induced(&g, &sys, chi0).unwrap();
            assert!(t.inverse_deviation() < 1e-9, "{name}");
            assert!(t.intertwining_deviation(&sys) < 1e-9, "{name}");
            let pibar = assemble(&g, &t.induced).unwrap();
            assert_eq!(hom_dimension(&pibar, pi).unwrap(), 1, "{name}");
            // A acts on coset r_i by the scalar of r_i^{-1}[chi0]
            let k = t.stalk.basis.ncols();
            for a in 0..g.a().order() {
                let m = pibar.mat(g.embed_a(a));
                for (i, &x) in t.points.iter().enumerate() {
                    let block = m.view((i * k, i * k), (k, k)).into_owned();
                    assert!(max_diff(&block, &(identity(k) * g.a().pairing(x, a))) < 1e-9, "{name}");
                }
            }
        }
    }
}

#[test]
fn transport_rejects_bad_input() {
    let g = catalog::affine(3).unwrap();
    let irreps = decompose_regular(g.group(), 0).unwrap();
    let sys = restrict_to_system(&g, &irreps[2]).unwrap();
    assert!(matches!(stalk_rep(&g, &sys, 0), Err(Error::NotInSupport(0))));
    let reducible = restrict_to_system(&g, &regular_representation(g.group())).unwrap();
    assert!(matches!(
        transport_to_induced(&g, &reducible, 0),
        Err(Error::ReducibleSystem)
    ));
}

#[test]
fn hom_between_systems_on_one_orbit_matches_stalks() {
    for (name, g) in catalog::standard() {
        let report = classify(&g, 0).unwrap();
        let systems: Vec<_> = report
            .entries
            .iter()
            .map(|e| restrict_to_system(&g, &e.induced).unwrap())
            .collect();
        for (i, ei) in report.entries.iter().enumerate() {
            for (j, ej) in report.entries.iter().enumerate() {
                if ei.orbit_index != ej.orbit_index {
                    continue;
                }
                let s1 = stalk_rep(&g, &systems[i], ei.representative).unwrap();
                let s2 = stalk_rep(&g, &systems[j], ej.representative).unwrap();
                assert_eq!(
                    system_hom_dimension(&g, &systems[i], &systems[j]),
                    hom_dimension(&s1.pi0, &s2.pi0).unwrap(),
                    "{name}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugated_systems_are_equivalent(seed in any::<u64>(), which in 0usize..7, k in 0usize..16) {
        let (_, g) = catalog::standard().swap_remove(which);
        let irreps = decompose_regular(g.group(), 0).unwrap();
        let pi = &irreps[k % irreps.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t0 = random_invertible(&mut rng, pi.dim());
        let sys = restrict_to_system(&g, pi).unwrap();
        let other = sys.conjugate(&t0).unwrap();
        let t = systems_equivalent(&g, &sys, &other, seed);
        prop_assert!(t.is_some());
        let t = t.unwrap();
        let t_inv = inverse(&t).unwrap();
        for chi in 0..g.a().order() {
            prop_assert!(max_diff(&(&t * sys.pvm().atom(chi) * &t_inv), &other.pvm().atom(chi)) < 1e-6);
        }
        let a1 = assemble(&g, &sys).unwrap();
        let a2 = assemble(&g, &other).unwrap();
        prop_assert_eq!(hom_dimension(&a1, &a2).unwrap(), 1);
    }

    #[test]
    fn reducible_round_trip(seed in any::<u64>(), which in 0usize..7) {
        let (_, g) = catalog::standard().swap_remove(which);
        let irreps = decompose_regular(g.group(), 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = (seed % irreps.len() as u64) as usize;
        let j = ((seed >> 8) % irreps.len() as u64) as usize;
        let sum = irreps[i].direct_sum(&irreps[j]).unwrap();
        let pi = sum.conjugate(&random_invertible(&mut rng, sum.dim())).unwrap();
        let sys = restrict_to_system(&g, &pi).unwrap();
        prop_assert!(assemble(&g, &sys).unwrap().max_diff(&pi) < 1e-9);
    }
}
