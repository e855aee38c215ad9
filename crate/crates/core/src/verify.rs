//! Recurrence-versus-oracle checks over a grid of seeds and sequences.
//!
//! Every incremental quantity kept by the growth engine is recomputed from
//! scratch (BFS, degree recount, all-pairs distances) after each step, and
//! every exact expectation is evaluated by two independent routes.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::growth::{GrowthOptions, GrowthState};
use crate::multigraph::VertexId;
use crate::seed::{profile_seed, SeedProfile, SeedSpec};
use crate::sequence::BuildingSequence;
use crate::theory;
use crate::Rational;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seeds: Vec<(String, SeedSpec)>,
    pub sequences: Vec<BuildingSequence>,
    /// Growth runs, assigned round-robin over the seed × sequence grid.
    pub runs: usize,
    pub max_n: usize,
    pub rng_seed: u64,
    /// Old-pair distance invariance is checked while τ_n stays at or below this.
    pub distance_check_limit: usize,
    /// Largest n for the exact min-degree law.
    pub pmf_max_n: usize,
    #[doc(hidden)]
    pub inject_ecc_fault: bool,
}

impl VerifyConfig {
    /// K2, the ps seed and the triangle under const:1, const:2, linear and
    /// takeall; 100 runs of 6 steps.
    pub fn default_grid() -> Self {
        Self {
            seeds: vec![
                ("k2".into(), SeedSpec::k2()),
                ("ps".into(), SeedSpec::ps()),
                ("triangle".into(), SeedSpec::triangle()),
            ],
            sequences: vec![
                BuildingSequence::Constant(1),
                BuildingSequence::Constant(2),
                BuildingSequence::Linear,
                BuildingSequence::TakeAll,
            ],
            runs: 100,
            max_n: 6,
            rng_seed: 0,
            distance_check_limit: 200,
            pmf_max_n: 8,
            inject_ecc_fault: false,
        }
    }

    /// A single-cell grid, mostly for small ad-hoc checks.
    pub fn small(seed: SeedSpec, sequence: BuildingSequence, max_n: usize) -> Self {
        Self {
            seeds: vec![("seed".into(), seed)],
            sequences: vec![sequence],
            runs: 1,
            max_n,
            ..Self::default_grid()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub properties: Vec<PropertyOutcome>,
}

/// Names of the checked properties, in report order.
pub mod property {
    pub const ORDER: &str = "order";
    pub const EDGES: &str = "edge count";
    pub const HANDSHAKE: &str = "handshake";
    pub const DEPTH: &str = "incremental depth";
    pub const DEPTH_LIPSCHITZ: &str = "depth step along edges";
    pub const DISTANCE_INVARIANCE: &str = "old-pair distance invariance";
    pub const ECCENTRICITY: &str = "eccentricity recurrence";
    pub const DIAMETER: &str = "diameter recurrence";
    pub const DEGREE_INCREMENT: &str = "latch degree increment";
    pub const TOTAL_PATH_LENGTH: &str = "total path length";
    pub const MIN_DEGREE_COUNT: &str = "min-degree count";
    pub const MIN_DEGREE_DUAL: &str = "min-degree dual evaluation";
    pub const MIN_DEGREE_PMF: &str = "min-degree law mean";
    pub const DEPTH_TIMES_ORDER: &str = "depth times order";
    pub const TAKE_ALL_PROPORTION: &str = "take-all proportion";
    pub const PROPORTION_BOUND: &str = "proportion bound";
}

impl VerifyReport {
    fn entry(&mut self, name: &'static str) -> &mut PropertyOutcome {
        if let Some(i) = self.properties.iter().position(|p| p.name == name) {
            return &mut self.properties[i];
        }
        self.properties.push(PropertyOutcome {
            name,
            ..PropertyOutcome::default()
        });
        self.properties.last_mut().expect("just pushed")
    }

    fn check(&mut self, name: &'static str, ok: bool, context: impl FnOnce() -> String) {
        let entry = self.entry(name);
        entry.checks += 1;
        if !ok && entry.failures.len() < 20 {
            entry.failures.push(context());
        }
    }

    pub fn get(&self, name: &str) -> Option<&PropertyOutcome> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn total_checks(&self) -> usize {
        self.properties.iter().map(|p| p.checks).sum()
    }

    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.failures.is_empty())
    }
}

pub fn run(config: &VerifyConfig) -> Result<VerifyReport, Error> {
    let mut report = VerifyReport::default();
    let profiles: Vec<(String, Arc<SeedProfile>)> = config
        .seeds
        .iter()
        .map(|(name, spec)| Ok((name.clone(), Arc::new(profile_seed(spec)?))))
        .collect::<Result<_, Error>>()?;
    let cells: Vec<(usize, usize)> = (0..profiles.len())
        .flat_map(|s| (0..config.sequences.len()).map(move |q| (s, q)))
        .collect();
    if cells.is_empty() {
        return Ok(report);
    }

    for run in 0..config.runs {
        let (s, q) = cells[run % cells.len()];
        let (name, seed) = &profiles[s];
        let label = format!("run {run} ({name}, {})", config.sequences[q]);
        let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        rng.set_stream(run as u64);
        check_growth_run(
            &mut report,
            config,
            Arc::clone(seed),
            config.sequences[q].clone(),
            &mut rng,
            &label,
        )?;
    }

    for (name, seed) in &profiles {
        for seq in &config.sequences {
            check_theory(&mut report, config, seed, seq, &format!("{name}, {seq}"))?;
        }
    }
    Ok(report)
}

fn check_snapshot(report: &mut VerifyReport, state: &GrowthState, label: &str) -> Result<Vec<u32>, Error> {
    let g = state.graph();
    let seed = state.seed();
    let n = state.step();
    let sched = state.sequence().schedule(seed, n)?;
    let at = |what: &str| format!("{label}, n = {n}: {what}");

    let order = (seed.tau0 - 1) * sched.copies() + seed.tau0;
    report.check(property::ORDER, state.order() == order, || {
        at(&format!("order {} != {order}", state.order()))
    });
    let edges = seed.eta * (1 + sched.copies());
    report.check(property::EDGES, g.edge_count() as u64 == edges, || {
        at(&format!("edge count {} != {edges}", g.edge_count()))
    });
    let degree_sum: u64 = g.degrees().iter().sum();
    report.check(property::HANDSHAKE, degree_sum == 2 * g.edge_count() as u64, || {
        at("degree sum is not twice the edge count")
    });

    let fresh = g.bfs_distances(VertexId::REFERENCE)?;
    let first_bad = fresh.iter().zip(state.depths()).position(|(a, b)| a != b);
    report.check(property::DEPTH, first_bad.is_none(), || {
        at(&format!("depth of vertex {} drifted", first_bad.unwrap_or(0) + 1))
    });
    let lipschitz = g.edges().iter().all(|(u, v)| {
        let (a, b) = (state.depths()[u.index()], state.depths()[v.index()]);
        a.abs_diff(b) <= 1
    });
    report.check(property::DEPTH_LIPSCHITZ, lipschitz, || at("edge spans more than one level"));

    let tpl: u64 = fresh.iter().map(|&d| u64::from(d)).sum();
    report.check(property::TOTAL_PATH_LENGTH, tpl == state.total_path_length(), || {
        at(&format!("T = {} but BFS gives {tpl}", state.total_path_length()))
    });
    let x = g.degrees().iter().filter(|&&d| d == seed.min_degree).count() as u64;
    report.check(property::MIN_DEGREE_COUNT, x == state.min_degree_count(), || {
        at(&format!("X = {} but recount gives {x}", state.min_degree_count()))
    });

    if let (Some(ecc), Some(diam)) = (state.eccentricities(), state.diameter()) {
        let brute = g.eccentricities()?;
        let mismatch = brute.iter().zip(ecc).position(|(a, b)| a != b);
        report.check(property::ECCENTRICITY, mismatch.is_none() && ecc.len() == brute.len(), || {
            let v = mismatch.unwrap_or(0);
            at(&format!(
                "vertex {}: recurrence {} vs BFS {}",
                v + 1,
                ecc.get(v).copied().unwrap_or(0),
                brute[v]
            ))
        });
        let brute_diam = brute.iter().copied().max().unwrap_or(0);
        let max_ecc = ecc.iter().copied().max().unwrap_or(0);
        report.check(property::DIAMETER, diam == brute_diam && diam == max_ecc, || {
            at(&format!("recurrence {diam} vs brute force {brute_diam}"))
        });
    }
    Ok(fresh)
}

fn check_growth_run(
    report: &mut VerifyReport,
    config: &VerifyConfig,
    seed: Arc<SeedProfile>,
    seq: BuildingSequence,
    rng: &mut ChaCha8Rng,
    label: &str,
) -> Result<(), Error> {
    let options = GrowthOptions {
        track_ecc: true,
        corrupt_ecc_update: config.inject_ecc_fault,
    };
    let hook_degree = seed.hook_degree;
    let mut state = GrowthState::new(seed, seq, options);
    check_snapshot(report, &state, label)?;
    let mut distances = if state.graph().vertex_count() <= config.distance_check_limit {
        Some(state.graph().all_pairs_distances()?)
    } else {
        None
    };
    for _ in 0..config.max_n {
        let before = state.graph().degrees().to_vec();
        let sample = state.step_random(rng)?;
        let n = state.step();

        let after = state.graph().degrees();
        let degree_ok = before.iter().enumerate().all(|(i, &d)| {
            let picked = sample.latches.binary_search(&VertexId::from_index(i)).is_ok();
            after[i] == d + if picked { hook_degree } else { 0 }
        });
        report.check(property::DEGREE_INCREMENT, degree_ok, || {
            format!("{label}, n = {n}: a degree moved by other than h* per latching")
        });

        check_snapshot(report, &state, label)?;

        let g = state.graph();
        distances = match distances {
            Some(old) if g.vertex_count() <= config.distance_check_limit => {
                let new = g.all_pairs_distances()?;
                let stable = old
                    .iter()
                    .enumerate()
                    .all(|(u, row)| row.iter().zip(&new[u]).all(|(a, b)| a == b));
                report.check(property::DISTANCE_INVARIANCE, stable, || {
                    format!("{label}, n = {n}: an old-pair distance changed")
                });
                Some(new)
            }
            _ => None,
        };
    }
    Ok(())
}

fn check_theory(
    report: &mut VerifyReport,
    config: &VerifyConfig,
    seed: &SeedProfile,
    seq: &BuildingSequence,
    label: &str,
) -> Result<(), Error> {
    let n_max = config.max_n;
    let sched = seq.schedule(seed, n_max)?;
    let limit = theory::limiting_min_degree_proportion(seed);
    let int = |v: u64| Rational::from_integer(BigInt::from(v));
    for n in 0..=n_max {
        let at = |what: String| format!("{label}, n = {n}: {what}");
        let forward = theory::expected_min_degree_count(seed, seq, n)?;
        let closed = theory::expected_min_degree_count_closed(seed, seq, n)?;
        report.check(property::MIN_DEGREE_DUAL, forward == closed, || {
            at(format!("recurrence {forward} vs closed form {closed}"))
        });

        if n <= config.pmf_max_n {
            let law = theory::min_degree_pmf(seed, seq, n, theory::DEFAULT_STATE_CAP)?;
            let gap = crate::to_f64(&(law.mean() - &forward)).abs();
            report.check(property::MIN_DEGREE_PMF, gap <= 1e-9, || {
                at(format!("law mean differs from expectation by {gap}"))
            });
        }

        let tpl = theory::expected_total_path_length(seed, seq, n)?;
        let depth = theory::expected_depth(seed, seq, n)?;
        report.check(property::DEPTH_TIMES_ORDER, &depth * int(sched.taus[n]) == tpl, || {
            at(format!("E[D] tau = {} but E[T] = {tpl}", &depth * int(sched.taus[n])))
        });

        let tau = int(sched.taus[n]);
        let proportion = &forward / &tau;
        if *seq == BuildingSequence::TakeAll && n >= 1 {
            report.check(property::TAKE_ALL_PROPORTION, proportion == limit, || {
                at(format!("proportion {proportion} != {limit}"))
            });
        }
        let bound = int(seed.min_degree_count * seed.tau0) / &tau;
        let gap = num_traits::Signed::abs(&(&proportion - &limit));
        report.check(property::PROPORTION_BOUND, gap <= bound, || {
            at(format!("|E[X]/tau - limit| = {gap} exceeds {bound}"))
        });
    }
    Ok(())
}
