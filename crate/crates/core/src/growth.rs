//! The hooking process.
//!
//! At step `n` the engine draws `k_{n-1}` distinct latches from `G_{n-1}` in
//! one uniform draw, then fuses a seed copy onto each latch in increasing
//! latch-id order. Within a copy the non-hook seed vertices take fresh ids in
//! seed order, so a list of latch sets fully determines the graph.
//!
//! Depths, the total path length and the min-degree count are maintained in
//! O(new vertices) per step. Eccentricities and the diameter are optional:
//! they need one BFS per latch and are updated through the conditional
//! recurrences, never by recomputation.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GraphError, GrowthError};
use crate::multigraph::{MultiGraph, VertexId};
use crate::seed::SeedProfile;
use crate::sequence::BuildingSequence;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GrowthOptions {
    /// Maintain per-vertex eccentricities and the diameter.
    pub track_ecc: bool,
    /// Test hook: perturbs one updated eccentricity so harnesses can prove
    /// they notice a broken recurrence.
    #[doc(hidden)]
    pub corrupt_ecc_update: bool,
}

impl GrowthOptions {
    pub fn tracking() -> Self {
        Self {
            track_ecc: true,
            ..Self::default()
        }
    }
}

/// The latch set drawn for one step, with the distance summaries the
/// eccentricity and diameter recurrences consume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatchSample {
    /// Distinct latches in increasing id order.
    pub latches: Vec<VertexId>,
    /// Depth of each latch, aligned with `latches`.
    pub latch_depths: Vec<u32>,
    /// Largest pairwise latch distance; only defined for two or more latches.
    pub q: Option<u32>,
    /// Largest latch eccentricity in the pre-step graph.
    pub alpha: Option<u32>,
    /// For every pre-step vertex, its distance to the farthest latch.
    pub farthest_latch: Option<Vec<u32>>,
}

impl LatchSample {
    pub fn len(&self) -> usize {
        self.latches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.latches.is_empty()
    }
}

/// Scalars recorded after each step (row 0 describes the seed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedRow {
    pub n: usize,
    pub order: u64,
    pub edges: u64,
    pub min_degree_count: u64,
    pub total_path_length: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_ecc: Option<u32>,
    /// Degrees of the original seed vertices, ids `1..=tau0`.
    pub seed_vertex_degrees: Vec<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTrace {
    /// Latch set of each step, sorted.
    pub steps: Vec<Vec<VertexId>>,
    pub recorded: Vec<RecordedRow>,
}

#[derive(Debug, Clone)]
pub struct GrowthState {
    graph: MultiGraph,
    step: usize,
    depth: Vec<u32>,
    birth_step: Vec<u32>,
    ecc: Option<Vec<u32>>,
    diam: Option<u32>,
    total_path_length: u64,
    min_degree_count: u64,
    seed: Arc<SeedProfile>,
    seq: BuildingSequence,
    options: GrowthOptions,
}

impl GrowthState {
    /// The seed itself, as `G_0`.
    pub fn new(seed: Arc<SeedProfile>, seq: BuildingSequence, options: GrowthOptions) -> Self {
        let tau0 = seed.tau0 as usize;
        Self {
            graph: seed.graph.clone(),
            step: 0,
            depth: seed.depth_from_hook.clone(),
            birth_step: vec![0; tau0],
            ecc: options.track_ecc.then(|| seed.ecc0.clone()),
            diam: options.track_ecc.then_some(seed.diameter0),
            total_path_length: seed.total_path_length,
            min_degree_count: seed.min_degree_count,
            seed,
            seq,
            options,
        }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn order(&self) -> u64 {
        self.graph.vertex_count() as u64
    }

    pub fn seed(&self) -> &SeedProfile {
        &self.seed
    }

    pub fn sequence(&self) -> &BuildingSequence {
        &self.seq
    }

    pub fn options(&self) -> GrowthOptions {
        self.options
    }

    /// Δ_{n,v}, indexed by `VertexId::index`.
    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    pub fn birth_steps(&self) -> &[u32] {
        &self.birth_step
    }

    /// C_n(v) for every vertex, when tracked.
    pub fn eccentricities(&self) -> Option<&[u32]> {
        self.ecc.as_deref()
    }

    pub fn diameter(&self) -> Option<u32> {
        self.diam
    }

    pub fn total_path_length(&self) -> u64 {
        self.total_path_length
    }

    pub fn min_degree_count(&self) -> u64 {
        self.min_degree_count
    }

    pub fn degree(&self, v: VertexId) -> Result<u64, GraphError> {
        self.graph.degree(v)
    }

    /// k for the step about to be taken, after checking R1.
    pub fn next_k(&self) -> Result<u64, GrowthError> {
        let tau = self.order();
        let k = self.seq.k(self.step, &self.seed)?;
        if k > tau {
            return Err(crate::error::SequenceError::R1Violation {
                step: self.step,
                k,
                tau,
            }
            .into());
        }
        Ok(k)
    }

    pub fn record(&self) -> RecordedRow {
        RecordedRow {
            n: self.step,
            order: self.order(),
            edges: self.graph.edge_count() as u64,
            min_degree_count: self.min_degree_count,
            total_path_length: self.total_path_length,
            diameter: self.diam,
            reference_ecc: self.ecc.as_ref().map(|e| e[0]),
            seed_vertex_degrees: self.graph.degrees()[..self.seed.tau0 as usize].to_vec(),
        }
    }

    /// Draws `k` distinct latches, every k-subset equally likely.
    pub fn sample_latches<R: Rng + ?Sized>(
        &self,
        k: u64,
        rng: &mut R,
    ) -> Result<LatchSample, GrowthError> {
        let tau = self.order();
        if k > tau {
            return Err(crate::error::SequenceError::R1Violation {
                step: self.step,
                k,
                tau,
            }
            .into());
        }
        let latches = if k == tau {
            self.graph.vertices().collect()
        } else {
            rand::seq::index::sample(rng, tau as usize, k as usize)
                .into_iter()
                .map(VertexId::from_index)
                .collect()
        };
        Ok(self.describe_latches(latches)?)
    }

    /// Fills depths and, when tracking, the BFS-derived summaries.
    pub fn describe_latches(&self, mut latches: Vec<VertexId>) -> Result<LatchSample, GraphError> {
        latches.sort_unstable();
        let latch_depths = latches.iter().map(|l| self.depth[l.index()]).collect();
        let (q, alpha, farthest_latch) = match &self.ecc {
            Some(ecc) => {
                let mut farthest = vec![0u32; self.graph.vertex_count()];
                for &l in &latches {
                    let dist = self.graph.bfs_distances(l)?;
                    for (f, d) in farthest.iter_mut().zip(dist) {
                        *f = (*f).max(d);
                    }
                }
                let q = (latches.len() > 1)
                    .then(|| latches.iter().map(|l| farthest[l.index()]).max())
                    .flatten();
                let alpha = latches.iter().map(|l| ecc[l.index()]).max();
                (q, alpha, Some(farthest))
            }
            None => (None, None, None),
        };
        Ok(LatchSample {
            latches,
            latch_depths,
            q,
            alpha,
            farthest_latch,
        })
    }

    /// Fuses one seed copy onto `latch`. Returns the id of the copy's first
    /// new vertex.
    ///
    /// Eccentricities and the diameter are not touched here; `step` updates
    /// them once every copy of the step is in place.
    pub fn hook_copy(&mut self, latch: VertexId) -> Result<VertexId, GraphError> {
        let latch_degree = self.graph.degree(latch)?;
        let seed = Arc::clone(&self.seed);
        let born = self.step as u32 + 1;
        let latch_depth = self.depth[latch.index()];
        let first = VertexId(self.graph.vertex_count() as u32 + 1);
        for s in seed.graph.vertices().skip(1) {
            self.graph.add_vertex();
            let d = latch_depth + seed.depth_of(s);
            self.depth.push(d);
            self.birth_step.push(born);
            self.total_path_length += u64::from(d);
        }
        let image = |s: VertexId| {
            if s == VertexId::REFERENCE {
                latch
            } else {
                VertexId(first.0 + s.0 - 2)
            }
        };
        for &(u, w) in seed.graph.edges() {
            self.graph.add_edge(image(u), image(w))?;
        }

        let d_star = seed.min_degree;
        let after = self.graph.degree(latch)?;
        if latch_degree == d_star {
            self.min_degree_count -= 1;
        }
        if after == d_star {
            self.min_degree_count += 1;
        }
        self.min_degree_count += self.graph.degrees()[first.index()..]
            .iter()
            .filter(|&&d| d == d_star)
            .count() as u64;
        Ok(first)
    }

    /// Hooks one copy at every latch of `sample` and advances the step.
    pub fn apply(&mut self, sample: &LatchSample) -> Result<(), GrowthError> {
        let previous_ecc = self.ecc.take();
        for &latch in &sample.latches {
            self.hook_copy(latch)?;
        }
        if let Some(prev) = previous_ecc {
            let mut next = eccentricity_update(&prev, sample, &self.seed);
            if self.options.corrupt_ecc_update {
                if let Some(last) = next.last_mut() {
                    *last += 1;
                }
            }
            self.ecc = Some(next);
            let k = sample.len() as u64;
            self.diam = self
                .diam
                .map(|prev| diameter_update(prev, sample, &self.seed, k));
        }
        self.step += 1;
        Ok(())
    }

    /// One uniform growth step.
    pub fn step_random<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<LatchSample, GrowthError> {
        let k = self.next_k()?;
        let sample = self.sample_latches(k, rng)?;
        self.apply(&sample)?;
        Ok(sample)
    }

    /// One growth step with prescribed latches.
    pub fn step_with(&mut self, latches: &[VertexId]) -> Result<LatchSample, GrowthError> {
        let k = self.next_k()?;
        let step = self.step + 1;
        if latches.len() as u64 != k {
            return Err(GrowthError::LatchCount {
                step,
                expected: k,
                got: latches.len(),
            });
        }
        let mut sorted = latches.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(GrowthError::DuplicateLatch { step, id: pair[0].0 });
            }
        }
        if let Some(bad) = sorted.iter().find(|l| !self.graph.contains(**l)) {
            return Err(GrowthError::InvalidLatch { step, id: bad.0 });
        }
        let sample = self.describe_latches(sorted)?;
        self.apply(&sample)?;
        Ok(sample)
    }

    /// Latches whose first two realise the current diameter (smallest id
    /// pair on ties); the other `k - 2` are drawn uniformly from the rest.
    pub fn adversarial_latch_pair<R: Rng + ?Sized>(
        &self,
        k: u64,
        rng: &mut R,
    ) -> Result<LatchSample, GrowthError> {
        if k < 2 {
            return Err(GrowthError::TooFewLatches {
                step: self.step + 1,
                k,
            });
        }
        let tau = self.order();
        if k > tau {
            return Err(crate::error::SequenceError::R1Violation {
                step: self.step,
                k,
                tau,
            }
            .into());
        }
        let ecc = match &self.ecc {
            Some(e) => e.clone(),
            None => self.graph.eccentricities()?,
        };
        let diam = ecc.iter().copied().max().unwrap_or(0);
        let u = ecc
            .iter()
            .position(|&e| e == diam)
            .map(VertexId::from_index)
            .expect("non-empty graph");
        let from_u = self.graph.bfs_distances(u)?;
        let v = from_u
            .iter()
            .position(|&d| d == diam)
            .map(VertexId::from_index)
            .expect("eccentricity is attained");
        let rest: Vec<VertexId> = self.graph.vertices().filter(|&w| w != u && w != v).collect();
        let mut latches = vec![u, v];
        let extra = (k - 2) as usize;
        if extra == rest.len() {
            latches.extend_from_slice(&rest);
        } else if extra > 0 {
            latches.extend(
                rand::seq::index::sample(rng, rest.len(), extra)
                    .into_iter()
                    .map(|i| rest[i]),
            );
        }
        Ok(self.describe_latches(latches)?)
    }
}

/// Eccentricities of `G_n` from those of `G_{n-1}` and the latch sample.
///
/// Old vertices see the new copies at `d_v^# + C_0(h)`. A vertex of the copy
/// at latch `l` reaches old vertices through `l`, vertices of its own copy at
/// seed distances, and, when there are other copies, the farthest of them.
///
/// `prev` holds C_{n-1} for the `tau_{n-1}` old vertices; copies are assumed
/// laid out in latch order as `GrowthState::hook_copy` assigns them.
///
/// Panics if `sample` was described without eccentricity tracking.
pub fn eccentricity_update(prev: &[u32], sample: &LatchSample, seed: &SeedProfile) -> Vec<u32> {
    let farthest = sample
        .farthest_latch
        .as_ref()
        .expect("latch sample lacks farthest-latch distances");
    let hook_ecc = seed.hook_ecc;
    let k = sample.len();
    let per_copy = seed.tau0 as usize - 1;
    let mut next = Vec::with_capacity(prev.len() + k * per_copy);
    next.extend(
        prev.iter()
            .zip(farthest)
            .map(|(&c, &f)| c.max(f + hook_ecc)),
    );
    for &latch in &sample.latches {
        let via_latch = prev[latch.index()];
        let latch_far = farthest[latch.index()];
        for s in seed.graph.vertices().skip(1) {
            let up = seed.depth_of(s);
            let other_copies = if k > 1 { up + latch_far + hook_ecc } else { 0 };
            next.push((up + via_latch).max(seed.ecc_of(s).max(other_copies)));
        }
    }
    next
}

/// Đ_n = max{Đ_{n-1}, (2 C_0(h) + q)·[k > 1], C_0(h) + α}.
pub fn diameter_update(prev: u32, sample: &LatchSample, seed: &SeedProfile, k: u64) -> u32 {
    let hook_ecc = seed.hook_ecc;
    let across = if k > 1 {
        2 * hook_ecc + sample.q.expect("q is defined for two or more latches")
    } else {
        0
    };
    let through = hook_ecc + sample.alpha.expect("alpha needs eccentricity tracking");
    prev.max(across).max(through)
}

fn start(
    seed: Arc<SeedProfile>,
    seq: BuildingSequence,
    options: GrowthOptions,
) -> (GrowthState, GrowthTrace) {
    let state = GrowthState::new(seed, seq, options);
    let trace = GrowthTrace {
        steps: Vec::new(),
        recorded: vec![state.record()],
    };
    (state, trace)
}

/// Grows `n` uniform steps.
pub fn grow<R: Rng + ?Sized>(
    seed: Arc<SeedProfile>,
    seq: BuildingSequence,
    n: usize,
    options: GrowthOptions,
    rng: &mut R,
) -> Result<(GrowthState, GrowthTrace), GrowthError> {
    let (mut state, mut trace) = start(seed, seq, options);
    for _ in 0..n {
        let sample = state.step_random(rng)?;
        trace.steps.push(sample.latches);
        trace.recorded.push(state.record());
    }
    Ok((state, trace))
}

/// Rebuilds a realisation from its latch sets.
pub fn replay(
    seed: Arc<SeedProfile>,
    seq: BuildingSequence,
    latch_lists: &[Vec<VertexId>],
    options: GrowthOptions,
) -> Result<(GrowthState, GrowthTrace), GrowthError> {
    let (mut state, mut trace) = start(seed, seq, options);
    for latches in latch_lists {
        let sample = state.step_with(latches)?;
        trace.steps.push(sample.latches);
        trace.recorded.push(state.record());
    }
    Ok((state, trace))
}

/// Grows `n` steps choosing two diameter-realising latches each step.
/// Eccentricity tracking is always on.
pub fn grow_adversarial<R: Rng + ?Sized>(
    seed: Arc<SeedProfile>,
    seq: BuildingSequence,
    n: usize,
    rng: &mut R,
) -> Result<(GrowthState, GrowthTrace), GrowthError> {
    let (mut state, mut trace) = start(seed, seq, GrowthOptions::tracking());
    for _ in 0..n {
        let k = state.next_k()?;
        let sample = state.adversarial_latch_pair(k, rng)?;
        state.apply(&sample)?;
        trace.steps.push(sample.latches);
        trace.recorded.push(state.record());
    }
    Ok((state, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{profile_seed, SeedSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn seed(spec: SeedSpec) -> Arc<SeedProfile> {
        Arc::new(profile_seed(&spec).unwrap())
    }

    fn ids(raw: &[u32]) -> Vec<VertexId> {
        raw.iter().map(|&i| VertexId(i)).collect()
    }

    #[test]
    fn k2_hooked_at_reference_is_a_path() {
        let mut s = GrowthState::new(seed(SeedSpec::k2()), BuildingSequence::Constant(1), GrowthOptions::default());
        s.hook_copy(VertexId(1)).unwrap();
        assert_eq!(s.order(), 3);
        assert_eq!(s.degree(VertexId(1)).unwrap(), 2);
        assert_eq!(s.graph().diameter().unwrap(), 2);
    }

    #[test]
    fn ps_first_step() {
        let (state, trace) = replay(
            seed(SeedSpec::ps()),
            BuildingSequence::Linear,
            &[ids(&[1])],
            GrowthOptions::tracking(),
        )
        .unwrap();
        let g = state.graph();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 8));
        assert_eq!(g.multiplicity(VertexId(1), VertexId(1)).unwrap(), 2);
        let row = &trace.recorded[1];
        assert_eq!(row.total_path_length, 6);
        assert_eq!(row.diameter, Some(4));
        assert_eq!(row.min_degree_count, 2);
        assert_eq!(row.reference_ecc, Some(2));
    }

    #[test]
    fn latch_degree_rises_by_hook_degree() {
        let mut s = GrowthState::new(seed(SeedSpec::ps()), BuildingSequence::Linear, GrowthOptions::default());
        assert_eq!(s.degree(VertexId(3)).unwrap(), 2);
        s.hook_copy(VertexId(3)).unwrap();
        assert_eq!(s.degree(VertexId(3)).unwrap(), 5);
    }

    #[test]
    fn grow_zero_steps_is_the_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = seed(SeedSpec::ps());
        let (state, trace) = grow(p.clone(), BuildingSequence::Linear, 0, GrowthOptions::default(), &mut rng).unwrap();
        assert_eq!(state.graph(), &p.graph);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.recorded.len(), 1);
    }

    #[test]
    fn order_and_size_after_growth() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (state, _) = grow(seed(SeedSpec::ps()), BuildingSequence::Linear, 3, GrowthOptions::default(), &mut rng).unwrap();
        assert_eq!(state.order(), 15);
        assert_eq!(state.graph().edge_count(), 28);

        let (tree, _) = grow(seed(SeedSpec::k2()), BuildingSequence::Constant(1), 10, GrowthOptions::default(), &mut rng).unwrap();
        assert_eq!((tree.order(), tree.graph().edge_count()), (12, 11));
    }

    #[test]
    fn single_latch_eccentricity_on_k2() {
        // latch the non-reference vertex: 1 - 2 - 3
        let (state, _) = replay(
            seed(SeedSpec::k2()),
            BuildingSequence::Constant(1),
            &[ids(&[2])],
            GrowthOptions::tracking(),
        )
        .unwrap();
        assert_eq!(state.eccentricities().unwrap(), &[2, 1, 2]);
        assert_eq!(state.diameter(), Some(2));
    }

    #[test]
    fn replay_validation() {
        let p = seed(SeedSpec::ps());
        let opts = GrowthOptions::default();
        assert!(matches!(
            replay(p.clone(), BuildingSequence::Linear, &[ids(&[1, 2])], opts),
            Err(GrowthError::LatchCount { step: 1, expected: 1, got: 2 })
        ));
        assert!(matches!(
            replay(p.clone(), BuildingSequence::Linear, &[ids(&[4])], opts),
            Err(GrowthError::InvalidLatch { step: 1, id: 4 })
        ));
        assert!(matches!(
            replay(p.clone(), BuildingSequence::Linear, &[ids(&[1]), ids(&[2, 2])], opts),
            Err(GrowthError::DuplicateLatch { step: 2, id: 2 })
        ));
        let (state, trace) = replay(p, BuildingSequence::Linear, &[], opts).unwrap();
        assert_eq!(state.step(), 0);
        assert_eq!(trace.recorded[0].total_path_length, 3);
    }

    #[test]
    fn take_all_uses_every_vertex() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = GrowthState::new(seed(SeedSpec::ps()), BuildingSequence::TakeAll, GrowthOptions::default());
        let sample = s.sample_latches(3, &mut rng).unwrap();
        assert_eq!(sample.latches, ids(&[1, 2, 3]));
        assert!(s.sample_latches(4, &mut rng).is_err());
    }

    #[test]
    fn adversarial_needs_two_latches() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let err = grow_adversarial(seed(SeedSpec::k2()), BuildingSequence::Constant(1), 1, &mut rng);
        assert!(matches!(err, Err(GrowthError::TooFewLatches { step: 1, k: 1 })));
        let (s, _) = grow_adversarial(seed(SeedSpec::k2()), BuildingSequence::Constant(2), 1, &mut rng).unwrap();
        assert_eq!(s.diameter(), Some(3));
        let (s, _) = grow_adversarial(seed(SeedSpec::ps()), BuildingSequence::Constant(2), 0, &mut rng).unwrap();
        assert_eq!(s.diameter(), Some(2));
    }

    #[test]
    fn unchanged_diameter_when_latches_are_central() {
        // G_2 of the bundled example trace has diameter 6; a latch of eccentricity 4 cannot
        // push any path past it when hooked alone (C_0(h) = 2).
        let (mut state, _) = replay(
            seed(SeedSpec::ps()),
            BuildingSequence::Linear,
            &[ids(&[1]), ids(&[4, 5])],
            GrowthOptions::tracking(),
        )
        .unwrap();
        assert_eq!(state.diameter(), Some(6));
        let ecc = state.eccentricities().unwrap().to_vec();
        assert_eq!(ecc[0], 4);
        let sample = state.describe_latches(ids(&[1])).unwrap();
        let next = diameter_update(6, &sample, state.seed(), 1);
        assert_eq!(next, 6);
        state.apply(&sample).unwrap();
        assert_eq!(state.graph().diameter().unwrap(), 6);
    }
}
