//! Replicated simulation against the exact expectations.
//!
//! Replicate `r` draws from a ChaCha8 generator keyed by
//! `seed_from_u64(master_seed)` and switched to stream `r`, so each replicate
//! sees the same numbers no matter how replicates are scheduled. Moments are
//! accumulated (Welford) in replicate-index order after all replicates ran.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::growth::{GrowthOptions, GrowthState};
use crate::multigraph::VertexId;
use crate::seed::SeedProfile;
use crate::sequence::BuildingSequence;
use crate::theory;
use crate::{to_f64, Rational};

pub const DEFAULT_Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// τ_n.
    Order,
    /// |ℰ_n|.
    Edges,
    AvgDegree,
    /// X_n.
    MinDegreeCount,
    /// X_n / τ_n.
    MinDegreeProportion,
    /// T_n.
    TotalPathLength,
    /// D_n = T_n / τ_n.
    Depth,
    /// X_{j:n}.
    TrackedDegree,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Self::Order => "order",
            Self::Edges => "edges",
            Self::AvgDegree => "avgdeg",
            Self::MinDegreeCount => "mindeg",
            Self::MinDegreeProportion => "mindeg_prop",
            Self::TotalPathLength => "tpl",
            Self::Depth => "depth",
            Self::TrackedDegree => "tracked",
        }
    }

    /// Realisation-independent for every building sequence.
    pub fn always_deterministic(self) -> bool {
        matches!(self, Self::Order | Self::Edges | Self::AvgDegree)
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The vertex playing seed role `role` in the first copy hooked at step
/// `birth_step` (the seed itself when `birth_step` is 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackedVertex {
    pub birth_step: usize,
    pub role: VertexId,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub seed: Arc<SeedProfile>,
    pub sequence: BuildingSequence,
    pub steps: usize,
    pub replicates: usize,
    pub master_seed: u64,
    pub stats: Vec<Statistic>,
    pub tracked: Option<TrackedVertex>,
    pub track_ecc: bool,
    pub parallel: bool,
    pub z_threshold: f64,
}

impl SimConfig {
    pub fn new(seed: Arc<SeedProfile>, sequence: BuildingSequence, steps: usize, replicates: usize) -> Self {
        Self {
            seed,
            sequence,
            steps,
            replicates,
            master_seed: 0,
            stats: vec![
                Statistic::Order,
                Statistic::Edges,
                Statistic::AvgDegree,
                Statistic::MinDegreeCount,
                Statistic::MinDegreeProportion,
                Statistic::TotalPathLength,
                Statistic::Depth,
            ],
            tracked: None,
            track_ecc: false,
            parallel: true,
            z_threshold: DEFAULT_Z_THRESHOLD,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if self.stats.contains(&Statistic::TrackedDegree) {
            let t = self
                .tracked
                .ok_or_else(|| Error::Config("tracked statistic needs a tracked vertex".into()))?;
            if t.birth_step > self.steps {
                return Err(Error::Config(format!(
                    "tracked birth step {} exceeds the {} simulated steps",
                    t.birth_step, self.steps
                )));
            }
            if !self.seed.graph.contains(t.role) || (t.birth_step > 0 && t.role == VertexId::REFERENCE) {
                return Err(Error::Config(format!(
                    "seed role {} cannot be tracked from step {}",
                    t.role, t.birth_step
                )));
            }
        }
        Ok(())
    }
}

/// Raw scalars of one replicate after step `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepScalars {
    pub order: u64,
    pub edges: u64,
    pub min_degree_count: u64,
    pub total_path_length: u64,
    pub tracked_degree: Option<u64>,
}

impl StepScalars {
    /// Observation as numerator over denominator.
    fn value(&self, stat: Statistic) -> Option<(u64, u64)> {
        Some(match stat {
            Statistic::Order => (self.order, 1),
            Statistic::Edges => (self.edges, 1),
            Statistic::AvgDegree => (2 * self.edges, self.order),
            Statistic::MinDegreeCount => (self.min_degree_count, 1),
            Statistic::MinDegreeProportion => (self.min_degree_count, self.order),
            Statistic::TotalPathLength => (self.total_path_length, 1),
            Statistic::Depth => (self.total_path_length, self.order),
            Statistic::TrackedDegree => (self.tracked_degree?, 1),
        })
    }
}

fn replicate_rng(master_seed: u64, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replicate as u64);
    rng
}

fn tracked_id(config: &SimConfig) -> Result<Option<(usize, VertexId)>, Error> {
    let Some(t) = config.tracked else {
        return Ok(None);
    };
    if t.birth_step == 0 {
        return Ok(Some((0, t.role)));
    }
    let before = config.sequence.tau(t.birth_step - 1, &config.seed)?;
    Ok(Some((t.birth_step, VertexId(before as u32 + t.role.0 - 1))))
}

/// Scalars of replicate `replicate` for n = 0..=steps.
pub fn replicate_scalars(config: &SimConfig, replicate: usize) -> Result<Vec<StepScalars>, Error> {
    let mut rng = replicate_rng(config.master_seed, replicate);
    let options = GrowthOptions {
        track_ecc: config.track_ecc,
        ..GrowthOptions::default()
    };
    let tracked = tracked_id(config)?;
    let mut state = GrowthState::new(Arc::clone(&config.seed), config.sequence.clone(), options);
    let mut rows = Vec::with_capacity(config.steps + 1);
    loop {
        let tracked_degree = match tracked {
            Some((born, v)) if state.step() >= born => Some(state.degree(v)?),
            _ => None,
        };
        rows.push(StepScalars {
            order: state.order(),
            edges: state.graph().edge_count() as u64,
            min_degree_count: state.min_degree_count(),
            total_path_length: state.total_path_length(),
            tracked_degree,
        });
        if state.step() == config.steps {
            break;
        }
        state.step_random(&mut rng)?;
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub stat: Statistic,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub se: f64,
    #[serde(with = "crate::io::rational_string")]
    pub theory: Rational,
    pub z: Option<f64>,
    /// The theory says every realisation takes the theory value.
    pub deterministic: bool,
    /// Whether every replicate equalled the theory value exactly.
    pub exact_match: bool,
    pub pass: bool,
}

impl StatRow {
    /// A random row whose replicates all agree has no z and passes.
    fn judge(&self, z_threshold: f64) -> bool {
        if self.deterministic {
            self.exact_match
        } else {
            self.z.is_none_or(|z| z.abs() <= z_threshold)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub replicates: usize,
    pub steps: usize,
    pub master_seed: u64,
    pub sequence: String,
    pub z_threshold: f64,
    pub rows: Vec<StatRow>,
}

impl StatsReport {
    pub fn row(&self, stat: Statistic, n: usize) -> Option<&StatRow> {
        self.rows.iter().find(|r| r.stat == stat && r.n == n)
    }

    pub fn series(&self, stat: Statistic) -> impl Iterator<Item = &StatRow> {
        self.rows.iter().filter(move |r| r.stat == stat)
    }
}

struct TheoryTable {
    by_stat: Vec<(Statistic, Vec<Option<Rational>>)>,
}

impl TheoryTable {
    fn build(config: &SimConfig) -> Result<Self, Error> {
        let seed = &config.seed;
        let seq = &config.sequence;
        let n = config.steps;
        let sched = seq.schedule(seed, n)?;
        let int = |v: u64| Rational::from_integer(BigInt::from(v));
        let by_tau = |values: Vec<Rational>| -> Vec<Option<Rational>> {
            values
                .into_iter()
                .zip(&sched.taus)
                .map(|(v, &t)| Some(v / int(t)))
                .collect()
        };
        let mut by_stat = Vec::new();
        for &stat in &config.stats {
            let values: Vec<Option<Rational>> = match stat {
                Statistic::Order => sched.taus.iter().map(|&t| Some(int(t))).collect(),
                Statistic::Edges => (0..=n)
                    .map(|m| Some(int(seed.eta * (1 + sched.ks[..m].iter().sum::<u64>()))))
                    .collect(),
                Statistic::AvgDegree => (0..=n)
                    .map(|m| {
                        let edges = seed.eta * (1 + sched.ks[..m].iter().sum::<u64>());
                        Some(int(2 * edges) / int(sched.taus[m]))
                    })
                    .collect(),
                Statistic::MinDegreeCount => theory::min_degree_series(seed, seq, n)?
                    .values
                    .into_iter()
                    .map(Some)
                    .collect(),
                Statistic::MinDegreeProportion => {
                    by_tau(theory::min_degree_series(seed, seq, n)?.values)
                }
                Statistic::TotalPathLength => theory::total_path_length_series(seed, seq, n)?
                    .values
                    .into_iter()
                    .map(Some)
                    .collect(),
                Statistic::Depth => theory::depth_series(seed, seq, n)?
                    .values
                    .into_iter()
                    .map(Some)
                    .collect(),
                Statistic::TrackedDegree => {
                    let t = config.tracked.expect("validated");
                    let delta = seed.degree_of(t.role);
                    let series = theory::tracked_degree_series(seed, seq, t.birth_step, n, delta)?;
                    let mut values = vec![None; t.birth_step];
                    values.extend(series.values.into_iter().map(Some));
                    values
                }
            };
            by_stat.push((stat, values));
        }
        Ok(Self { by_stat })
    }
}

/// Runs every replicate and compares each enabled statistic with theory at
/// every step 0..=steps.
pub fn run(config: &SimConfig) -> Result<StatsReport, Error> {
    config.validate()?;
    for step in 0..config.steps {
        config.sequence.check_r1(step, &config.seed)?;
    }
    let table = TheoryTable::build(config)?;
    let replicates: Vec<Vec<StepScalars>> = if config.parallel {
        (0..config.replicates)
            .into_par_iter()
            .map(|r| replicate_scalars(config, r))
            .collect::<Result<_, _>>()?
    } else {
        (0..config.replicates)
            .map(|r| replicate_scalars(config, r))
            .collect::<Result<_, _>>()?
    };

    let take_all = config.sequence == BuildingSequence::TakeAll;
    let mut rows = Vec::new();
    for (stat, theory_values) in &table.by_stat {
        for (n, theory) in theory_values.iter().enumerate() {
            let Some(theory) = theory else { continue };
            let born = config.tracked.map_or(0, |t| t.birth_step);
            let deterministic = stat.always_deterministic()
                || take_all
                || n == 0
                || (*stat == Statistic::TrackedDegree && n == born);
            let mut acc = Welford::default();
            let mut exact_match = true;
            for rep in &replicates {
                let (num, den) = rep[n].value(*stat).expect("tracked degree present from birth");
                acc.push(num as f64 / den as f64);
                if deterministic && exact_match {
                    exact_match = Rational::new(BigInt::from(num), BigInt::from(den)) == *theory;
                }
            }
            let variance = acc.variance();
            let se = (variance / config.replicates as f64).sqrt();
            let theory_f = to_f64(theory);
            let z = (variance > 0.0).then(|| (acc.mean - theory_f) / se);
            let mut row = StatRow {
                stat: *stat,
                n,
                mean: acc.mean,
                variance,
                se,
                theory: theory.clone(),
                z,
                deterministic,
                exact_match: deterministic && exact_match,
                pass: false,
            };
            row.pass = row.judge(config.z_threshold);
            rows.push(row);
        }
    }
    Ok(StatsReport {
        replicates: config.replicates,
        steps: config.steps,
        master_seed: config.master_seed,
        sequence: config.sequence.to_string(),
        z_threshold: config.z_threshold,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stat: Statistic,
    pub n: usize,
    pub reason: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at n = {}: {}", self.stat, self.n, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub checked: usize,
    pub failures: Vec<Failure>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-judges every row at `z_threshold`. Deterministic rows must match
/// exactly; random rows fail when |z| exceeds the threshold.
pub fn compare(report: &StatsReport, z_threshold: f64) -> Comparison {
    let failures = report
        .rows
        .iter()
        .filter(|row| !row.judge(z_threshold))
        .map(|row| Failure {
            stat: row.stat,
            n: row.n,
            reason: if row.deterministic {
                format!("deterministic value differs from theory {} (mean {})", row.theory, row.mean)
            } else {
                format!(
                    "z = {:.3} exceeds {z_threshold} (mean {}, theory {})",
                    row.z.unwrap_or(f64::NAN),
                    row.mean,
                    to_f64(&row.theory)
                )
            },
        })
        .collect();
    Comparison {
        checked: report.rows.len(),
        failures,
    }
}
