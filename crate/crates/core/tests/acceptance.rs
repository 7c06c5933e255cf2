//! Acceptance gate: nine criteria, each with its tolerance and time budget.
//! Prints one line per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mackey::catalog;
use mackey::cli;
use mackey::groups::{FiniteAbelianGroup, FiniteGroup, SemidirectGroup};
use mackey::imprimitivity::{
    assemble, restrict_to_system, system_support, systems_equivalent, transport_to_induced, OrbitMembership,
};
use mackey::linalg::{identity, max_diff, random_invertible};
use mackey::mackey::{classify, hom_correspondence_check};
use mackey::repr::{are_equivalent, decompose_regular, hom_dimension, MatrixRep};
use mackey::sampling::{random_abelian_group, random_abelian_rep};
use mackey::spectral::{reconstruct_rep, spectral_measure, verify_patching, SubgroupLevel};
use mackey::suites::{Fault, Suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn catalog_irreps() -> Vec<(String, SemidirectGroup, Vec<MatrixRep>)> {
    catalog::standard()
        .into_iter()
        .map(|(name, g)| {
            let irreps = decompose_regular(g.group(), 0).expect("decomposition");
            (name, g, irreps)
        })
        .collect()
}

fn round_trip_on_random_abelian_reps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = random_abelian_group(12, &mut rng);
        let dim = rng.random_range(1..=8);
        let pi = random_abelian_rep(&a, dim, &mut rng);
        let Ok(p) = spectral_measure(&a, &pi) else {
            return outcome(false, "spectral measure rejected a valid representation");
        };
        let Ok(back) = reconstruct_rep(&p) else {
            return outcome(false, "reconstruction rejected the measure");
        };
        worst = worst.max(p.deviations().max()).max(back.max_diff(&pi));
    }
    outcome(worst < TOL, format!("100 representations, max deviation {worst:.2e}"))
}

fn patching_on_cyclic_towers() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for n in [8u64, 27] {
        let a = FiniteAbelianGroup::cyclic(n).expect("cyclic");
        let levels: Vec<SubgroupLevel> = a
            .subgroups()
            .iter()
            .map(|u| SubgroupLevel::new(&a, u).expect("level"))
            .collect();
        for _ in 0..20 {
            let dim = rng.random_range(1..=8);
            let pi = random_abelian_rep(&a, dim, &mut rng);
            for u in &levels {
                for u2 in &levels {
                    let Ok(r) = verify_patching(&a, &pi, u, u2) else {
                        return outcome(false, "patching check errored");
                    };
                    worst = worst.max(r.max_deviation).max(r.max_deviation_from_global);
                    checks += 1;
                }
            }
        }
    }
    outcome(worst < TOL, format!("{checks} level pairs, max deviation {worst:.2e}"))
}

fn lemma1_round_trip(catalog: &[(String, SemidirectGroup, Vec<MatrixRep>)]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (name, g, irreps) in catalog {
        for pi in irreps {
            let Ok(sys) = restrict_to_system(g, pi) else {
                return outcome(false, format!("{name}: restriction failed"));
            };
            let covariance = sys.covariance_deviation(g).0;
            let Ok(back) = assemble(g, &sys) else {
                return outcome(false, format!("{name}: assembly failed"));
            };
            worst = worst.max(covariance).max(back.max_diff(pi));
            count += 1;
        }
    }
    outcome(worst < TOL, format!("{count} irreps, max deviation {worst:.2e}"))
}

fn lemma2_transfer(catalog: &[(String, SemidirectGroup, Vec<MatrixRep>)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut conjugations = 0;
    let mut cross = 0;
    for (name, g, irreps) in catalog {
        for pi in irreps {
            let sys = restrict_to_system(g, pi).expect("system");
            for trial in 0..50u64 {
                let t = random_invertible(&mut rng, pi.dim());
                let other = pi.conjugate(&t).expect("conjugate");
                let other_sys = restrict_to_system(g, &other).expect("system");
                let as_systems = systems_equivalent(g, &sys, &other_sys, trial).is_some();
                let as_reps = are_equivalent(pi, &other).unwrap_or(false);
                if !(as_systems && as_reps) {
                    return outcome(false, format!("{name}: conjugation {trial} not detected"));
                }
                conjugations += 1;
            }
        }
        for _ in 0..50 {
            let i = rng.random_range(0..irreps.len());
            let j = (i + rng.random_range(1..irreps.len())) % irreps.len();
            let t = random_invertible(&mut rng, irreps[j].dim());
            let other = irreps[j].conjugate(&t).expect("conjugate");
            let si = restrict_to_system(g, &irreps[i]).expect("system");
            let sj = restrict_to_system(g, &other).expect("system");
            if systems_equivalent(g, &si, &sj, 0).is_some() || are_equivalent(&irreps[i], &other).unwrap_or(true) {
                return outcome(false, format!("{name}: irreps {i} and {j} reported equivalent"));
            }
            cross += 1;
        }
    }
    outcome(
        true,
        format!("{conjugations} conjugations equivalent, {cross} cross pairs inequivalent"),
    )
}

fn lemma3_support(catalog: &[(String, SemidirectGroup, Vec<MatrixRep>)]) -> Outcome {
    let mut sums = 0;
    for (name, g, irreps) in catalog {
        let mut orbit_of = Vec::new();
        let mut systems = Vec::new();
        for pi in irreps {
            let sys = restrict_to_system(g, pi).expect("system");
            match system_support(g, &sys).orbit {
                OrbitMembership::Single(o) => orbit_of.push(o),
                OrbitMembership::Multiple(_) => {
                    return outcome(false, format!("{name}: irreducible on several orbits"))
                }
            }
            systems.push(sys);
        }
        for i in 0..irreps.len() {
            for j in i + 1..irreps.len() {
                if orbit_of[i] != orbit_of[j] {
                    let sum = systems[i].direct_sum(&systems[j]).expect("sum");
                    if !matches!(system_support(g, &sum).orbit, OrbitMembership::Multiple(_)) {
                        return outcome(false, format!("{name}: sum of {i} and {j} not on multiple orbits"));
                    }
                    sums += 1;
                }
            }
        }
    }
    outcome(
        true,
        format!("all irreps on one orbit, {sums} cross-orbit sums multiple"),
    )
}

fn transport(catalog: &[(String, SemidirectGroup, Vec<MatrixRep>)]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, g, irreps) in catalog {
        for pi in irreps {
            let sys = restrict_to_system(g, pi).expect("system");
            let chi0 = sys.pvm().support()[0];
            let Ok(t) = transport_to_induced(g, &sys, chi0) else {
                return outcome(false, format!("{name}: transport failed"));
            };
            worst = worst.max(t.inverse_deviation()).max(t.intertwining_deviation(&sys));
            let pibar = assemble(g, &t.induced).expect("assemble induced");
            let k = t.stalk.basis.ncols();
            for a in 0..g.a().order() {
                let mut expected = identity(pibar.dim());
                for (i, &x) in t.points.iter().enumerate() {
                    for r in 0..k {
                        expected[(i * k + r, i * k + r)] = g.a().pairing(x, a);
                    }
                }
                worst = worst.max(max_diff(pibar.mat(g.embed_a(a)), &expected));
            }
        }
    }
    outcome(worst < TOL, format!("max deviation {worst:.2e}"))
}

/// Conjugacy classes by brute force.
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

/// Group name, group and expected `(dimension, count)` pairs.
type Expectation = (String, SemidirectGroup, Vec<(usize, usize)>);

fn completeness() -> Outcome {
    let mut expectations: Vec<Expectation> = Vec::new();
    for p in [3usize, 5, 7] {
        expectations.push((
            format!("affine F_{p}"),
            catalog::affine(p as u64).unwrap(),
            vec![(1, p - 1), (p - 1, 1)],
        ));
    }
    for p in [2usize, 3] {
        expectations.push((
            format!("Heisenberg mod {p}"),
            catalog::heisenberg(p as u64).unwrap(),
            vec![(1, p * p), (p, p - 1)],
        ));
    }
    let mut checked = 0;
    for (name, g, counts) in expectations {
        let report = classify(&g, 0).expect("classify");
        for &(dim, count) in &counts {
            let found = report.entries.iter().filter(|e| e.dim() == dim).count();
            if found != count {
                return outcome(false, format!("{name}: {found} entries of dim {dim}, expected {count}"));
            }
        }
        let expected_total: usize = counts.iter().map(|&(_, c)| c).sum();
        if report.entries.len() != expected_total || expected_total != class_count(g.group()) {
            return outcome(false, format!("{name}: entry count differs from class count"));
        }
        if report.sum_dim_sq() != g.order() || !report.audit.passed() {
            return outcome(false, format!("{name}: audit failed"));
        }
        checked += 1;
    }
    for (name, g) in catalog::standard().into_iter().chain(catalog::towers()) {
        let report = classify(&g, 0).expect("classify");
        if !report.audit.passed() {
            return outcome(false, format!("{name}: audit failed"));
        }
        let oracle = decompose_regular(g.group(), 0).expect("oracle");
        for (e, m) in report.entries.iter().zip(&report.audit.oracle_matches) {
            if m.len() != 1 || hom_dimension(&e.induced, &oracle[m[0]]).unwrap_or(0) != 1 {
                return outcome(false, format!("{name}: oracle match is not one-to-one"));
            }
        }
        checked += 1;
    }
    outcome(
        true,
        format!("{checked} groups complete, oracle bijections with Hom dimension 1"),
    )
}

fn hom_correspondence() -> Outcome {
    let mut orbits = 0;
    for (name, g) in catalog::standard() {
        for o in g.dual().orbits() {
            match hom_correspondence_check(&g, o.representative, 0) {
                Ok(hc) if hc.passed() => orbits += 1,
                _ => return outcome(false, format!("{name}: orbit of {} differs", o.representative)),
            }
        }
    }
    outcome(true, format!("{orbits} orbits, Hom matrices equal entrywise"))
}

fn fault_injection() -> Outcome {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut runs = 0;
    for file in ["affine_f3.json", "heisenberg_3.json"] {
        let path = dir.join(file).display().to_string();
        for fault in [Fault::DropAtom, Fault::BreakCovariance, Fault::PerturbIntertwiner] {
            let name = clap::ValueEnum::to_possible_value(&fault)
                .expect("named")
                .get_name()
                .to_string();
            let out = cli::run(["mackey", "verify", &path, "--format", "json", "--fault", &name]);
            if out.code != 1 {
                return outcome(false, format!("{file} --fault {name}: exit {}", out.code));
            }
            let report: cli::VerifyReport = serde_json::from_str(&out.stdout).expect("report");
            for s in &report.suites {
                if s.passed == (s.suite == fault.target()) {
                    return outcome(false, format!("{file} --fault {name}: suite {} verdict wrong", s.suite));
                }
            }
            if report.suites.len() != Suite::ALL.len() {
                return outcome(false, "not every suite ran");
            }
            runs += 1;
        }
    }
    outcome(true, format!("{runs} faulty runs, each failing only its target suite"))
}

fn main() -> ExitCode {
    let catalog = catalog_irreps();
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, u64, Check)> = vec![
        ("spectral round trip", 10, Box::new(round_trip_on_random_abelian_reps)),
        ("patching", 10, Box::new(patching_on_cyclic_towers)),
        ("system round trip", 30, Box::new(|| lemma1_round_trip(&catalog))),
        ("equivalence transfer", 60, Box::new(|| lemma2_transfer(&catalog))),
        ("support in one orbit", 10, Box::new(|| lemma3_support(&catalog))),
        ("transport to induced model", 30, Box::new(|| transport(&catalog))),
        ("classification completeness", 60, Box::new(completeness)),
        ("Hom correspondence", 30, Box::new(hom_correspondence)),
        ("fault injection", 10, Box::new(fault_injection)),
    ];
    let mut failures = 0;
    for (k, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let passed = result.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {}: {} {name}: {} ({:.2}s of {budget}s)",
            k + 1,
            if passed { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
