//! Exact expectations for degree and distance statistics.
//!
//! Everything here is evaluated in exact rational arithmetic. The only
//! randomness-free statistics (order, size, average degree) and every
//! expectation are finite sums and products of ratios of integers, so the
//! results can be compared bit-for-bit against enumeration oracles.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{SequenceError, TheoryError};
use crate::seed::SeedProfile;
use crate::sequence::{BuildingSequence, Schedule, SequenceLimits};
use crate::Rational;

/// Support cap for `min_degree_pmf` unless the caller picks another.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn ratio(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact values of one expectation for n = 0, 1, ...
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectationSeries {
    pub values: Vec<Rational>,
    pub description: &'static str,
}

/// Leading linear coefficient of an asymptotic expansion.
///
/// `degenerate` is set when a = 0, where the leading order is not linear and
/// the returned zero carries no information about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticCoefficient {
    pub value: Rational,
    pub degenerate: bool,
}

/// Solves y_i = g_i y_{i-1} + h_i forward from y_0. `g[i - 1]` and `h[i - 1]`
/// hold g_i and h_i.
pub fn linear_recurrence_solve(
    g: &[Rational],
    h: &[Rational],
    y0: &Rational,
    n: usize,
) -> Result<Rational, TheoryError> {
    let available = g.len().min(h.len());
    if available < n {
        return Err(TheoryError::ShortCoefficients {
            needed: n,
            available,
        });
    }
    Ok(g[..n]
        .iter()
        .zip(&h[..n])
        .fold(y0.clone(), |y, (gi, hi)| gi * y + hi))
}

/// E[X_{j:n}] = δ + h* Σ_{i=j}^{n-1} k_i/τ_i for a vertex born at step `j`
/// with seed degree `delta`.
pub fn expected_tracked_degree(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    j: usize,
    n: usize,
    delta: u64,
) -> Result<Rational, TheoryError> {
    if j > n {
        return Err(TheoryError::BirthAfterStep { j, n });
    }
    let s = seq.schedule(seed, n)?;
    let sum: Rational = (j..n).map(|i| ratio(s.ks[i], s.taus[i])).sum();
    Ok(int(delta) + int(seed.hook_degree) * sum)
}

/// E[X_{j:m}] for m = j..=n; entry `m - j` holds step m.
pub fn tracked_degree_series(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    j: usize,
    n: usize,
    delta: u64,
) -> Result<ExpectationSeries, TheoryError> {
    if j > n {
        return Err(TheoryError::BirthAfterStep { j, n });
    }
    let s = seq.schedule(seed, n)?;
    let h = int(seed.hook_degree);
    let mut acc = int(delta);
    let mut values = vec![acc.clone()];
    for i in j..n {
        acc += &h * ratio(s.ks[i], s.taus[i]);
        values.push(acc.clone());
    }
    Ok(ExpectationSeries {
        values,
        description: "expected degree of a tracked vertex",
    })
}

fn require_exact(limits: &SequenceLimits) -> Result<(), TheoryError> {
    if limits.known_exactly {
        Ok(())
    } else {
        Err(TheoryError::LimitsNotExact)
    }
}

/// h* a / ((1 - a)(τ₀ - 1) + a b).
pub fn degree_growth_coefficient(
    seed: &SeedProfile,
    limits: &SequenceLimits,
) -> Result<AsymptoticCoefficient, TheoryError> {
    require_exact(limits)?;
    if limits.a.is_zero() {
        return Ok(AsymptoticCoefficient {
            value: Rational::zero(),
            degenerate: true,
        });
    }
    let a = &limits.a;
    let denom = (Rational::one() - a) * int(seed.tau0 - 1) + a * &limits.b;
    if denom.is_zero() {
        return Err(TheoryError::DegenerateDenominator {
            a: a.to_string(),
            b: limits.b.to_string(),
        });
    }
    Ok(AsymptoticCoefficient {
        value: int(seed.hook_degree) * a / denom,
        degenerate: false,
    })
}

/// Growth coefficient for vertices born at j ~ ρn, (1 - ρ) times the
/// early-phase coefficient. Only an asymptotic statement.
pub fn degree_phase_coefficient(
    seed: &SeedProfile,
    limits: &SequenceLimits,
    rho: &Rational,
) -> Result<AsymptoticCoefficient, TheoryError> {
    let base = degree_growth_coefficient(seed, limits)?;
    Ok(AsymptoticCoefficient {
        value: (Rational::one() - rho) * base.value,
        degenerate: base.degenerate,
    })
}

/// lim E[Y_n] = 2η/(τ₀ - 1).
pub fn limiting_average_degree(seed: &SeedProfile) -> Rational {
    ratio(2 * seed.eta, seed.tau0 - 1)
}

/// Average degree of any realisation of G_n, 2η(1 + Σ_{i<n} k_i)/τ_n.
pub fn exact_average_degree(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    n: usize,
) -> Result<Rational, TheoryError> {
    let s = seq.schedule(seed, n)?;
    Ok(ratio(2 * seed.eta * (1 + s.copies()), s.taus[n]))
}

/// Deterministic |ℰ_n| = η(1 + Σ_{i<n} k_i).
pub fn edge_count(seed: &SeedProfile, seq: &BuildingSequence, n: usize) -> Result<u64, TheoryError> {
    Ok(seed.eta * (1 + seq.schedule(seed, n)?.copies()))
}

fn min_degree_coefficients(seed: &SeedProfile, s: &Schedule) -> (Vec<Rational>, Vec<Rational>) {
    let per_copy = seed.min_degree_per_copy();
    s.ks.iter()
        .zip(&s.taus)
        .map(|(&k, &tau)| (Rational::one() - ratio(k, tau), int(per_copy * k)))
        .unzip()
}

/// E[X_n] by the forward recurrence E[X_n] = (1 - k_{n-1}/τ_{n-1}) E[X_{n-1}] + (X₀ - 𝕀) k_{n-1}.
pub fn expected_min_degree_count(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    n: usize,
) -> Result<Rational, TheoryError> {
    let s = seq.schedule(seed, n)?;
    let (g, h) = min_degree_coefficients(seed, &s);
    linear_recurrence_solve(&g, &h, &int(seed.min_degree_count), n)
}

/// E[X_n] by the closed sum/product form, an independent evaluation of
/// `expected_min_degree_count`.
pub fn expected_min_degree_count_closed(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    n: usize,
) -> Result<Rational, TheoryError> {
    let s = seq.schedule(seed, n)?;
    let factor = |j: usize| Rational::one() - ratio(s.ks[j - 1], s.taus[j - 1]);
    let product = |from: usize| -> Rational { (from..=n).map(factor).product() };
    let sum: Rational = (1..=n).map(|i| int(s.ks[i - 1]) * product(i + 1)).sum();
    Ok(int(seed.min_degree_per_copy()) * sum + int(seed.min_degree_count) * product(1))
}

pub fn min_degree_series(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    n: usize,
) -> Result<ExpectationSeries, TheoryError> {
    let s = seq.schedule(seed, n)?;
    let (g, h) = min_degree_coefficients(seed, &s);
    let mut y = int(seed.min_degree_count);
    let mut values = vec![y.clone()];
    for (gi, hi) in g.iter().zip(&h) {
        y = gi * y + hi;
        values.push(y.clone());
    }
    Ok(ExpectationSeries {
        values,
        description: "expected number of minimum-degree vertices",
    })
}

/// lim E[X_n/τ_n] = (X₀ - 𝕀)/τ₀.
pub fn limiting_min_degree_proportion(seed: &SeedProfile) -> Rational {
    ratio(seed.min_degree_per_copy(), seed.tau0)
}

/// P(H = x) for H ~ Hypergeo(t, r, s): `s` draws without replacement from
/// `t` objects of which `r` are special.
pub fn hypergeometric_pmf(t: u64, r: u64, s: u64, x: u64) -> Result<Rational, TheoryError> {
    if s > t || r > t {
        return Err(TheoryError::Hypergeometric {
            population: t,
            special: r,
            sample: s,
        });
    }
    let lo = (s + r).saturating_sub(t);
    if x < lo || x > r.min(s) {
        return Ok(Rational::zero());
    }
    let c = |n: u64, k: u64| binomial(BigInt::from(n), BigInt::from(k));
    Ok(Rational::new(c(r, x) * c(t - r, s - x), c(t, s)))
}

/// Probability mass function on non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pmf {
    /// (value, probability) in increasing value order.
    pub support: Vec<(u64, Rational)>,
}

impl Pmf {
    pub fn point(value: u64) -> Self {
        Self {
            support: vec![(value, Rational::one())],
        }
    }

    pub fn probability(&self, value: u64) -> Rational {
        self.support
            .iter()
            .find(|(v, _)| *v == value)
            .map_or_else(Rational::zero, |(_, p)| p.clone())
    }

    pub fn total(&self) -> Rational {
        self.support.iter().map(|(_, p)| p).sum()
    }

    pub fn mean(&self) -> Rational {
        self.support.iter().map(|(v, p)| int(*v) * p).sum()
    }
}

/// Exact law of X_n, propagating the hypergeometric transition
/// X_n = X_{n-1} + (X₀ - 1 - 𝕀) H + (X₀ - 𝕀)(k_{n-1} - H),
/// H ~ Hypergeo(τ_{n-1}, X_{n-1}, k_{n-1}), from the point mass at X₀.
pub fn min_degree_pmf(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    n: usize,
    state_cap: usize,
) -> Result<Pmf, TheoryError> {
    let s = seq.schedule(seed, n)?;
    let lose = seed.min_degree_count as i64 - 1 - seed.hook_indicator() as i64;
    let keep = seed.min_degree_per_copy() as i64;
    let mut law: BTreeMap<u64, Rational> = BTreeMap::from([(seed.min_degree_count, Rational::one())]);
    for step in 0..n {
        let (k, tau) = (s.ks[step], s.taus[step]);
        let mut next: BTreeMap<u64, Rational> = BTreeMap::new();
        for (&x, p) in &law {
            let lo = (k + x).saturating_sub(tau);
            for hits in lo..=x.min(k) {
                let q = if k == tau {
                    Rational::one()
                } else {
                    hypergeometric_pmf(tau, x, k, hits)?
                };
                let value = x as i64 + lose * hits as i64 + keep * (k - hits) as i64;
                *next.entry(value as u64).or_insert_with(Rational::zero) += p * q;
            }
        }
        if next.len() > state_cap {
            return Err(TheoryError::StateSpace {
                step: step + 1,
                size: next.len(),
                cap: state_cap,
            });
        }
        law = next;
    }
    Ok(Pmf {
        support: law.into_iter().collect(),
    })
}

/// E[T_n] = T₀ τ_n (Σ_{i=1}^n k_{i-1}/τ_i + 1/τ₀).
pub fn expected_total_path_length(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    n: usize,
) -> Result<Rational, TheoryError> {
    let s = seq.schedule(seed, n)?;
    let sum: Rational = (1..=n).map(|i| ratio(s.ks[i - 1], s.taus[i])).sum();
    Ok(int(seed.total_path_length) * int(s.taus[n]) * (sum + ratio(1, seed.tau0)))
}

/// E[D_n] = T₀ Σ_{i=1}^n k_{i-1}/τ_i + D₀.
pub fn expected_depth(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    n: usize,
) -> Result<Rational, TheoryError> {
    let s = seq.schedule(seed, n)?;
    let sum: Rational = (1..=n).map(|i| ratio(s.ks[i - 1], s.taus[i])).sum();
    Ok(int(seed.total_path_length) * sum + &seed.mean_depth)
}

pub fn total_path_length_series(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    n: usize,
) -> Result<ExpectationSeries, TheoryError> {
    let depth = depth_series(seed, seq, n)?;
    let s = seq.schedule(seed, n)?;
    Ok(ExpectationSeries {
        values: depth
            .values
            .into_iter()
            .zip(&s.taus)
            .map(|(d, &tau)| d * int(tau))
            .collect(),
        description: "expected total path length",
    })
}

pub fn depth_series(
    seed: &SeedProfile,
    seq: &BuildingSequence,
    n: usize,
) -> Result<ExpectationSeries, TheoryError> {
    let s = seq.schedule(seed, n)?;
    let t0 = int(seed.total_path_length);
    let mut acc = seed.mean_depth.clone();
    let mut values = vec![acc.clone()];
    for i in 1..=n {
        acc += &t0 * ratio(s.ks[i - 1], s.taus[i]);
        values.push(acc.clone());
    }
    Ok(ExpectationSeries {
        values,
        description: "expected depth of a uniform vertex",
    })
}

/// H_n(x) = Σ_{i=1}^n 1/(i + x).
pub fn generalized_harmonic(n: u64, x: &Rational) -> Result<Rational, TheoryError> {
    let mut sum = Rational::zero();
    for i in 1..=n {
        let term = int(i) + x;
        if term.is_zero() {
            return Err(TheoryError::HarmonicPole { i });
        }
        sum += term.recip();
    }
    Ok(sum)
}

/// E[D_n] under a constant sequence through generalized harmonic numbers.
///
/// With τ_i = τ₀ + i k(τ₀ - 1) this is (T₀/(τ₀ - 1)) H_n(τ₀/(k(τ₀ - 1))) + D₀.
/// For k = 1 it is the familiar (T₀/(τ₀ - 1)) H_n(τ₀/(τ₀ - 1)) + D₀; the
/// variant that keeps a factor k in front with the k = 1 offset only holds
/// for k = 1.
pub fn expected_depth_constant(seed: &SeedProfile, k: u64, n: u64) -> Result<Rational, TheoryError> {
    if k == 0 {
        return Err(TheoryError::Sequence(SequenceError::ZeroCopies { index: 0 }));
    }
    let shift = ratio(seed.tau0, k * (seed.tau0 - 1));
    let scale = ratio(seed.total_path_length, seed.tau0 - 1);
    Ok(scale * generalized_harmonic(n, &shift)? + &seed.mean_depth)
}

/// a T₀/(τ₀ - 1 + a b).
pub fn depth_asymptotic_coefficient(
    seed: &SeedProfile,
    limits: &SequenceLimits,
) -> Result<AsymptoticCoefficient, TheoryError> {
    require_exact(limits)?;
    if limits.a.is_zero() {
        return Ok(AsymptoticCoefficient {
            value: Rational::zero(),
            degenerate: true,
        });
    }
    let denom = int(seed.tau0 - 1) + &limits.a * &limits.b;
    Ok(AsymptoticCoefficient {
        value: &limits.a * int(seed.total_path_length) / denom,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use num_traits::Signed;
    use crate::seed::{profile_seed, SeedSpec};
    use crate::multigraph::{MultiGraph, VertexId};

    fn ps() -> SeedProfile {
        profile_seed(&SeedSpec::ps()).unwrap()
    }
    fn k2() -> SeedProfile {
        profile_seed(&SeedSpec::k2()).unwrap()
    }
    fn triangle() -> SeedProfile {
        profile_seed(&SeedSpec::triangle()).unwrap()
    }
    /// 3-path hooked at an end with a loop at the far end: the hook is the
    /// only vertex of minimum degree.
    fn hook_only_min() -> SeedProfile {
        let g = MultiGraph::from_edges(3, &[(1, 2), (2, 3), (3, 3)]).unwrap();
        profile_seed(&SeedSpec::new(g, VertexId(1)).unwrap()).unwrap()
    }
    fn harmonic(n: u64) -> Rational {
        generalized_harmonic(n, &rat(0, 1)).unwrap()
    }

    #[test]
    fn recurrence_solver() {
        let ones = vec![rat(1, 1); 5];
        let threes = vec![rat(3, 1); 5];
        assert_eq!(linear_recurrence_solve(&ones, &threes, &rat(2, 1), 5).unwrap(), rat(17, 1));
        let twos = vec![rat(2, 1); 6];
        let zeros = vec![rat(0, 1); 6];
        assert_eq!(linear_recurrence_solve(&twos, &zeros, &rat(1, 1), 6).unwrap(), rat(64, 1));
        assert_eq!(
            linear_recurrence_solve(&[rat(1, 2)], &[rat(1, 1)], &rat(0, 1), 1).unwrap(),
            rat(1, 1)
        );
        assert!(linear_recurrence_solve(&ones, &threes, &rat(0, 1), 6).is_err());
    }

    #[test]
    fn tracked_degree_values() {
        let seq = BuildingSequence::Constant(1);
        assert_eq!(expected_tracked_degree(&ps(), &seq, 4, 4, 2).unwrap(), rat(2, 1));
        assert_eq!(expected_tracked_degree(&k2(), &seq, 0, 2, 1).unwrap(), rat(11, 6));
        for j in 0..6u64 {
            for n in j..10 {
                let expected = harmonic(n + 1) - harmonic(j + 1) + rat(1, 1);
                assert_eq!(expected_tracked_degree(&k2(), &seq, j as usize, n as usize, 1).unwrap(), expected);
            }
        }
        assert_eq!(
            expected_tracked_degree(&ps(), &BuildingSequence::Linear, 0, 2, 3).unwrap(),
            rat(26, 5)
        );
        assert!(expected_tracked_degree(&ps(), &seq, 3, 2, 1).is_err());
        let series = tracked_degree_series(&ps(), &BuildingSequence::Linear, 1, 6, 2).unwrap();
        for (offset, v) in series.values.iter().enumerate() {
            assert_eq!(v, &expected_tracked_degree(&ps(), &BuildingSequence::Linear, 1, 1 + offset, 2).unwrap());
        }
    }

    #[test]
    fn growth_coefficients() {
        let c = degree_growth_coefficient(&ps(), &BuildingSequence::Constant(2).limits(&ps())).unwrap();
        assert!(c.degenerate && c.value.is_zero());
        let c = degree_growth_coefficient(&ps(), &BuildingSequence::TakeAll.limits(&ps())).unwrap();
        assert_eq!(c, AsymptoticCoefficient { value: rat(3, 1), degenerate: false });
        let edge = SequenceLimits {
            a: rat(1, 1),
            b: rat(0, 1),
            gamma: crate::Gamma::Finite(rat(2, 1)),
            known_exactly: true,
        };
        assert!(matches!(
            degree_growth_coefficient(&ps(), &edge),
            Err(TheoryError::DegenerateDenominator { .. })
        ));
        let inexact = BuildingSequence::explicit(vec![1, 1]).unwrap().limits(&ps());
        assert_eq!(degree_growth_coefficient(&ps(), &inexact), Err(TheoryError::LimitsNotExact));
        let half = degree_phase_coefficient(&ps(), &BuildingSequence::TakeAll.limits(&ps()), &rat(1, 2)).unwrap();
        assert_eq!(half.value, rat(3, 2));
    }

    #[test]
    fn average_degree() {
        assert_eq!(limiting_average_degree(&ps()), rat(4, 1));
        assert_eq!(limiting_average_degree(&k2()), rat(2, 1));
        assert_eq!(limiting_average_degree(&triangle()), rat(3, 1));
        assert_eq!(exact_average_degree(&ps(), &BuildingSequence::Linear, 1).unwrap(), rat(16, 5));
        assert_eq!(exact_average_degree(&ps(), &BuildingSequence::Linear, 0).unwrap(), rat(8, 3));
        let limit = limiting_average_degree(&ps());
        let mut prev_gap = None;
        for n in [1, 10, 50, 200] {
            let gap = (exact_average_degree(&ps(), &BuildingSequence::Constant(1), n).unwrap() - &limit).abs();
            if let Some(p) = prev_gap {
                assert!(gap < p);
            }
            prev_gap = Some(gap);
        }
    }

    #[test]
    fn min_degree_expectations() {
        let c1 = BuildingSequence::Constant(1);
        assert_eq!(expected_min_degree_count(&k2(), &c1, 2).unwrap(), rat(7, 3));
        assert_eq!(expected_min_degree_count(&k2(), &c1, 1).unwrap(), rat(2, 1));
        let lone = hook_only_min();
        assert_eq!((lone.min_degree_count, lone.hook_is_min), (1, true));
        assert_eq!(expected_min_degree_count(&lone, &c1, 1).unwrap(), rat(2, 3));
        assert_eq!(limiting_min_degree_proportion(&k2()), rat(1, 2));
        assert_eq!(limiting_min_degree_proportion(&ps()), rat(1, 3));
        assert_eq!(limiting_min_degree_proportion(&lone), rat(0, 1));
    }

    #[test]
    fn min_degree_dual_evaluation() {
        for seed in [k2(), ps(), triangle(), hook_only_min()] {
            for seq in [
                BuildingSequence::Constant(1),
                BuildingSequence::Constant(2),
                BuildingSequence::Linear,
                BuildingSequence::TakeAll,
            ] {
                let series = min_degree_series(&seed, &seq, 8).unwrap();
                for n in 0..=8 {
                    let a = expected_min_degree_count(&seed, &seq, n).unwrap();
                    assert_eq!(a, expected_min_degree_count_closed(&seed, &seq, n).unwrap());
                    assert_eq!(a, series.values[n]);
                }
            }
        }
    }

    #[test]
    fn hypergeometric_values() {
        assert_eq!(hypergeometric_pmf(2, 1, 1, 1).unwrap(), rat(1, 2));
        assert_eq!(hypergeometric_pmf(3, 2, 2, 1).unwrap(), rat(2, 3));
        assert_eq!(hypergeometric_pmf(3, 2, 2, 2).unwrap(), rat(1, 3));
        assert_eq!(hypergeometric_pmf(3, 2, 2, 0).unwrap(), rat(0, 1));
        assert_eq!(hypergeometric_pmf(7, 4, 7, 4).unwrap(), rat(1, 1));
        assert!(hypergeometric_pmf(3, 2, 4, 1).is_err());
        assert!(hypergeometric_pmf(3, 4, 2, 1).is_err());
    }

    #[test]
    fn min_degree_law() {
        let c1 = BuildingSequence::Constant(1);
        let law = min_degree_pmf(&k2(), &c1, 2, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(law.support, vec![(2, rat(2, 3)), (3, rat(1, 3))]);
        assert_eq!(min_degree_pmf(&ps(), &c1, 0, DEFAULT_STATE_CAP).unwrap(), Pmf::point(1));
        for seed in [k2(), ps(), triangle()] {
            let x0 = seed.min_degree_count;
            let ind = seed.hook_indicator();
            let (x0, ind, tau0) = (x0 as i64, ind as i64, seed.tau0 as i64);
            let expected = (x0 + (x0 - 1 - ind) * x0 + (x0 - ind) * (tau0 - x0)) as u64;
            let law = min_degree_pmf(&seed, &BuildingSequence::TakeAll, 1, DEFAULT_STATE_CAP).unwrap();
            assert_eq!(law, Pmf::point(expected));
        }
        assert!(matches!(
            min_degree_pmf(&ps(), &BuildingSequence::Linear, 4, 2),
            Err(TheoryError::StateSpace { cap: 2, .. })
        ));
    }

    #[test]
    fn path_length_and_depth() {
        let c1 = BuildingSequence::Constant(1);
        assert_eq!(expected_total_path_length(&ps(), &c1, 0).unwrap(), rat(3, 1));
        assert_eq!(expected_total_path_length(&k2(), &BuildingSequence::TakeAll, 1).unwrap(), rat(4, 1));
        assert_eq!(expected_total_path_length(&ps(), &BuildingSequence::Linear, 1).unwrap(), rat(8, 1));
        for n in 0..12u64 {
            assert_eq!(expected_depth(&k2(), &c1, n as usize).unwrap(), harmonic(n + 2) - rat(1, 1));
        }
        assert_eq!(expected_depth(&k2(), &c1, 1).unwrap(), rat(5, 6));
        for n in 0..6 {
            let d = expected_depth(&ps(), &BuildingSequence::TakeAll, n).unwrap();
            assert_eq!(d, &ps().mean_depth * rat(n as i64 + 1, 1));
        }
        assert_eq!(expected_depth(&ps(), &BuildingSequence::TakeAll, 3).unwrap(), rat(4, 1));
    }

    #[test]
    fn depth_routes_agree() {
        for seed in [k2(), ps(), triangle()] {
            for seq in [BuildingSequence::Constant(2), BuildingSequence::Linear, BuildingSequence::TakeAll] {
                let tpl = total_path_length_series(&seed, &seq, 7).unwrap();
                let depth = depth_series(&seed, &seq, 7).unwrap();
                let taus = seq.schedule(&seed, 7).unwrap().taus;
                for (n, tau) in taus.iter().enumerate() {
                    let t = expected_total_path_length(&seed, &seq, n).unwrap();
                    assert_eq!(t, tpl.values[n]);
                    assert_eq!(expected_depth(&seed, &seq, n).unwrap(), depth.values[n]);
                    assert_eq!(depth.values[n].clone() * int(*tau), t);
                }
            }
            for k in 1..4 {
                for n in 0..8 {
                    assert_eq!(
                        expected_depth_constant(&seed, k, n).unwrap(),
                        expected_depth(&seed, &BuildingSequence::Constant(k), n as usize).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(3), rat(11, 6));
        assert_eq!(generalized_harmonic(0, &rat(5, 2)).unwrap(), rat(0, 1));
        assert_eq!(generalized_harmonic(1, &rat(2, 1)).unwrap(), rat(1, 3));
        assert_eq!(generalized_harmonic(3, &rat(-2, 1)), Err(TheoryError::HarmonicPole { i: 2 }));
    }

    #[test]
    fn depth_coefficients() {
        for seed in [k2(), ps(), triangle()] {
            let c = depth_asymptotic_coefficient(&seed, &BuildingSequence::TakeAll.limits(&seed)).unwrap();
            assert_eq!(c.value, seed.mean_depth);
            let c = depth_asymptotic_coefficient(&seed, &BuildingSequence::Constant(3).limits(&seed)).unwrap();
            assert!(c.degenerate && c.value.is_zero());
        }
        let c = depth_asymptotic_coefficient(&ps(), &BuildingSequence::TakeAll.limits(&ps())).unwrap();
        assert_eq!(c.value, rat(1, 1));
    }
}
