//! Executable checks of every correspondence on a given group, with optional
//! fault injection to show the checkers catch violations.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::groups::SemidirectGroup;
use crate::imprimitivity::{
    assemble, restrict_to_system, system_support, systems_equivalent, transport_to_induced, OrbitMembership,
};
use crate::linalg::{identity, inverse, max_diff, random_invertible, MATRIX_TOL};
use crate::mackey::hom_correspondence_check;
use crate::repr::{are_equivalent, decompose_regular, MatrixRep};
use crate::sampling::random_abelian_rep;
use crate::spectral::{reconstruct_rep, spectral_measure, verify_patching, SubgroupLevel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Spectral measure round trip for representations of `A`.
    Thm1,
    /// Agreement of level measures on common fixed vectors.
    Patching,
    /// Representation to system and back.
    Lemma1,
    /// Equivalence of systems against equivalence of representations.
    Lemma2,
    /// Supports of irreducible systems lie in one orbit.
    Lemma3,
    /// Move to the induced model and back.
    Transport,
    /// Hom spaces of induced entries against those of stabilizer irreps.
    Hom,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Thm1,
        Suite::Patching,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Transport,
        Suite::Hom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Patching => "patching",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Transport => "transport",
            Suite::Hom => "hom",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Remove one atom from each spectral measure.
    DropAtom,
    /// Shift the atoms of each system by one character index.
    BreakCovariance,
    /// Perturb one entry of each transport operator.
    PerturbIntertwiner,
}

impl Fault {
    pub fn target(self) -> Suite {
        match self {
            Fault::DropAtom => Suite::Thm1,
            Fault::BreakCovariance => Suite::Lemma1,
            Fault::PerturbIntertwiner => Suite::Transport,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub tol: f64,
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            tol: MATRIX_TOL,
            fault: None,
        }
    }
}

impl SuiteConfig {
    fn faulty(&self, fault: Fault) -> bool {
        self.fault == Some(fault)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub passed: bool,
    pub cases: usize,
    pub max_deviation: f64,
    pub failures: Vec<String>,
}

struct Recorder {
    tol: f64,
    cases: usize,
    max_deviation: f64,
    failures: Vec<String>,
}

impl Recorder {
    fn new(tol: f64) -> Self {
        Recorder {
            tol,
            cases: 0,
            max_deviation: 0.0,
            failures: Vec::new(),
        }
    }

    /// Records a deviation that must stay within tolerance.
    fn deviation(&mut self, label: impl FnOnce() -> String, dev: Result<f64>) {
        self.cases += 1;
        match dev {
            Ok(d) => {
                self.max_deviation = self.max_deviation.max(d);
                if d.is_nan() || d > self.tol {
                    self.failures.push(format!("{}: deviation {d:.3e}", label()));
                }
            }
            Err(e) => self.failures.push(format!("{}: {e}", label())),
        }
    }

    /// Records a yes/no check.
    fn check(&mut self, label: impl FnOnce() -> String, ok: Result<bool>) {
        self.cases += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => self.failures.push(label()),
            Err(e) => self.failures.push(format!("{}: {e}", label())),
        }
    }

    fn finish(self, suite: Suite) -> SuiteResult {
        SuiteResult {
            suite,
            passed: self.failures.is_empty(),
            cases: self.cases,
            max_deviation: self.max_deviation,
            failures: self.failures,
        }
    }
}

/// Runs the requested suites. The irreps of `G` are computed once from the seed.
pub fn run_suites(g: &SemidirectGroup, suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<SuiteResult>> {
    let irreps = decompose_regular(g.group(), cfg.seed)?;
    Ok(suites.iter().map(|&s| run_suite(g, &irreps, s, cfg)).collect())
}

pub fn run_suite(g: &SemidirectGroup, irreps: &[MatrixRep], suite: Suite, cfg: &SuiteConfig) -> SuiteResult {
    let mut rec = Recorder::new(cfg.tol);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (suite as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    match suite {
        Suite::Thm1 => thm1(g, irreps, cfg, &mut rec, &mut rng),
        Suite::Patching => patching(g, &mut rec, &mut rng),
        Suite::Lemma1 => lemma1(g, irreps, cfg, &mut rec),
        Suite::Lemma2 => lemma2(g, irreps, cfg, &mut rec, &mut rng),
        Suite::Lemma3 => lemma3(g, irreps, &mut rec),
        Suite::Transport => transport(g, irreps, cfg, &mut rec),
        Suite::Hom => hom(g, cfg, &mut rec),
    }
    rec.finish(suite)
}

fn restrict_to_a(g: &SemidirectGroup, pi: &MatrixRep) -> Result<MatrixRep> {
    MatrixRep::new(
        pi.dim(),
        (0..g.a().order()).map(|a| pi.mat(g.embed_a(a)).clone()).collect(),
    )
}

fn thm1(g: &SemidirectGroup, irreps: &[MatrixRep], cfg: &SuiteConfig, rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let a = g.a();
    let mut reps: Vec<(String, MatrixRep)> = (0..10)
        .map(|k| {
            let dim = rng.random_range(1..=6);
            (format!("random rep {k} of A"), random_abelian_rep(a, dim, rng))
        })
        .collect();
    for (k, pi) in irreps.iter().enumerate() {
        match restrict_to_a(g, pi) {
            Ok(r) => reps.push((format!("irrep {k} restricted to A"), r)),
            Err(e) => rec.check(|| format!("irrep {k}"), Err(e)),
        }
    }
    for (label, pi1) in reps {
        let dev = spectral_measure(a, &pi1).and_then(|p| {
            let p = match (cfg.faulty(Fault::DropAtom), p.support().first()) {
                (true, Some(&chi)) => p.without_atom(chi),
                _ => p,
            };
            let invariants = p.deviations().max();
            if invariants > cfg.tol {
                return Ok(invariants);
            }
            let back = reconstruct_rep(&p)?;
            Ok(invariants.max(back.max_diff(&pi1)))
        });
        rec.deviation(|| label, dev);
    }
}

fn patching(g: &SemidirectGroup, rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let a = g.a();
    let levels: Vec<SubgroupLevel> = a
        .subgroups()
        .iter()
        .map(|u| SubgroupLevel::new(a, u).expect("subgroups() lists subgroups"))
        .collect();
    for k in 0..3 {
        let dim = rng.random_range(1..=4);
        let pi1 = random_abelian_rep(a, dim, rng);
        for (i, u) in levels.iter().enumerate() {
            for (j, u2) in levels.iter().enumerate() {
                let dev = verify_patching(a, &pi1, u, u2).map(|r| r.max_deviation.max(r.max_deviation_from_global));
                rec.deviation(|| format!("rep {k}, levels {i} and {j}"), dev);
            }
        }
    }
}

fn lemma1(g: &SemidirectGroup, irreps: &[MatrixRep], cfg: &SuiteConfig, rec: &mut Recorder) {
    let n = g.a().order();
    let shift: Vec<usize> = (0..n).map(|chi| (chi + 1) % n).collect();
    for (k, pi) in irreps.iter().enumerate() {
        let dev = restrict_to_system(g, pi).and_then(|sys| {
            let sys = if cfg.faulty(Fault::BreakCovariance) {
                sys.with_measure(sys.pvm().relabel(&shift))
            } else {
                sys
            };
            let covariance = sys.covariance_deviation(g).0;
            if covariance > cfg.tol {
                return Ok(covariance);
            }
            let back = assemble(g, &sys)?;
            Ok(covariance.max(back.max_diff(pi)))
        });
        rec.deviation(|| format!("irrep {k}"), dev);
    }
}

fn lemma2(g: &SemidirectGroup, irreps: &[MatrixRep], cfg: &SuiteConfig, rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    let systems: Vec<_> = irreps.iter().map(|pi| restrict_to_system(g, pi)).collect();
    for (k, pi) in irreps.iter().enumerate() {
        let Ok(sys) = &systems[k] else {
            rec.check(|| format!("irrep {k}"), systems[k].clone().map(|_| true));
            continue;
        };
        for trial in 0..5 {
            let t = random_invertible(rng, pi.dim());
            let seed = cfg.seed.wrapping_add(trial);
            let ok = pi.conjugate(&t).and_then(|other| {
                let other_sys = restrict_to_system(g, &other)?;
                let as_systems = match systems_equivalent(g, sys, &other_sys, seed) {
                    Some(s) => {
                        let s_inv = inverse(&s).unwrap_or_else(|| identity(0));
                        (0..g.h().size()).all(|h| {
                            max_diff(&(&s * sys.pi2().mat(h) * &s_inv), other_sys.pi2().mat(h)) <= 1e3 * cfg.tol
                        })
                    }
                    None => false,
                };
                Ok(as_systems && are_equivalent(pi, &other)?)
            });
            rec.check(
                || format!("irrep {k}, conjugation {trial}: not detected equivalent"),
                ok,
            );
        }
    }
    for i in 0..irreps.len() {
        for j in i + 1..irreps.len() {
            let (Ok(si), Ok(sj)) = (&systems[i], &systems[j]) else {
                continue;
            };
            let ok = are_equivalent(&irreps[i], &irreps[j])
                .map(|eq| !eq && systems_equivalent(g, si, sj, cfg.seed).is_none());
            rec.check(|| format!("irreps {i} and {j}: not detected inequivalent"), ok);
        }
    }
}

fn lemma3(g: &SemidirectGroup, irreps: &[MatrixRep], rec: &mut Recorder) {
    let mut by_orbit: Vec<(usize, usize)> = Vec::new();
    let mut systems = Vec::new();
    for (k, pi) in irreps.iter().enumerate() {
        let sys = restrict_to_system(g, pi);
        let ok = sys
            .as_ref()
            .map_err(Clone::clone)
            .map(|s| match system_support(g, s).orbit {
                OrbitMembership::Single(o) => {
                    if !by_orbit.iter().any(|&(orbit, _)| orbit == o) {
                        by_orbit.push((o, k));
                    }
                    true
                }
                OrbitMembership::Multiple(_) => false,
            });
        rec.check(|| format!("irrep {k}: support meets several orbits"), ok);
        systems.push(sys);
    }
    for (x, &(_, i)) in by_orbit.iter().enumerate() {
        for &(_, j) in &by_orbit[x + 1..] {
            if let (Ok(si), Ok(sj)) = (&systems[i], &systems[j]) {
                let ok = si
                    .direct_sum(sj)
                    .map(|sum| matches!(system_support(g, &sum).orbit, OrbitMembership::Multiple(_)));
                rec.check(|| format!("irreps {i} + {j}: sum not reported on multiple orbits"), ok);
            }
        }
    }
}

fn transport(g: &SemidirectGroup, irreps: &[MatrixRep], cfg: &SuiteConfig, rec: &mut Recorder) {
    for (k, pi) in irreps.iter().enumerate() {
        let dev = restrict_to_system(g, pi).and_then(|sys| {
            let chi0 = sys.pvm().support()[0];
            let mut t = transport_to_induced(g, &sys, chi0)?;
            if cfg.faulty(Fault::PerturbIntertwiner) {
                t.forward[(0, 0)] += (1e3 * cfg.tol).max(1e-3);
            }
            let mut dev = t.inverse_deviation().max(t.intertwining_deviation(&sys));
            // A acts on coset i by the scalar of the point r_i^{-1}[chi0]
            let pibar = assemble(g, &t.induced)?;
            let kdim = t.stalk.basis.ncols();
            for a in 0..g.a().order() {
                let m = pibar.mat(g.embed_a(a));
                let mut expected = identity(m.nrows());
                for (i, &x) in t.points.iter().enumerate() {
                    let z = g.a().pairing(x, a);
                    for r in 0..kdim {
                        expected[(i * kdim + r, i * kdim + r)] = z;
                    }
                }
                dev = dev.max(max_diff(m, &expected));
            }
            Ok(dev)
        });
        rec.deviation(|| format!("irrep {k}"), dev);
    }
}

fn hom(g: &SemidirectGroup, cfg: &SuiteConfig, rec: &mut Recorder) {
    for orbit in g.dual().orbits() {
        let rep = orbit.representative;
        let ok = hom_correspondence_check(g, rep, cfg.seed).map(|hc| hc.passed());
        rec.check(|| format!("orbit of {rep}: Hom matrices differ"), ok);
    }
}
