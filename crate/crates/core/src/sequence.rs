//! Building sequences k_n, the network order τ_n, and their limits.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::SequenceError;
use crate::seed::SeedProfile;
use crate::Rational;

/// Number of seed copies hooked at each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuildingSequence {
    Constant(u64),
    /// k_n = n + 1.
    Linear,
    /// k_n = τ_n: every vertex is a latch.
    TakeAll,
    Explicit(Vec<u64>),
}

/// k_0..k_{n-1} together with τ_0..τ_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub ks: Vec<u64>,
    pub taus: Vec<u64>,
}

impl Schedule {
    pub fn steps(&self) -> usize {
        self.ks.len()
    }

    /// Σ_{i<n} k_i.
    pub fn copies(&self) -> u64 {
        self.ks.iter().sum()
    }
}

impl BuildingSequence {
    pub fn constant(k: u64) -> Result<Self, SequenceError> {
        if k == 0 {
            return Err(SequenceError::ZeroCopies { index: 0 });
        }
        Ok(Self::Constant(k))
    }

    pub fn explicit(values: Vec<u64>) -> Result<Self, SequenceError> {
        if let Some(index) = values.iter().position(|&k| k == 0) {
            return Err(SequenceError::ZeroCopies { index });
        }
        Ok(Self::Explicit(values))
    }

    /// k_n given the current order τ_n.
    fn value(&self, n: usize, tau_n: u64) -> Result<u64, SequenceError> {
        match self {
            Self::Constant(k) => Ok(*k),
            Self::Linear => Ok(n as u64 + 1),
            Self::TakeAll => Ok(tau_n),
            Self::Explicit(values) => values
                .get(n)
                .copied()
                .ok_or(SequenceError::HorizonExceeded {
                    step: n,
                    len: values.len(),
                }),
        }
    }

    /// Copies and orders for the first `n` steps.
    pub fn schedule(&self, seed: &SeedProfile, n: usize) -> Result<Schedule, SequenceError> {
        let mut ks = Vec::with_capacity(n);
        let mut taus = Vec::with_capacity(n + 1);
        let mut tau = seed.tau0;
        taus.push(tau);
        for i in 0..n {
            let k = self.value(i, tau)?;
            tau = k
                .checked_mul(seed.tau0 - 1)
                .and_then(|added| added.checked_add(tau))
                .ok_or(SequenceError::Overflow { step: i + 1 })?;
            ks.push(k);
            taus.push(tau);
        }
        Ok(Schedule { ks, taus })
    }

    pub fn k(&self, n: usize, seed: &SeedProfile) -> Result<u64, SequenceError> {
        let tau = self.tau(n, seed)?;
        self.value(n, tau)
    }

    pub fn tau(&self, n: usize, seed: &SeedProfile) -> Result<u64, SequenceError> {
        Ok(*self.schedule(seed, n)?.taus.last().expect("tau_0 always present"))
    }

    /// Condition R1 at step index `n`: k_n ≤ τ_n.
    pub fn check_r1(&self, n: usize, seed: &SeedProfile) -> Result<(), SequenceError> {
        let tau = self.tau(n, seed)?;
        let k = self.value(n, tau)?;
        if k > tau {
            return Err(SequenceError::R1Violation { step: n, k, tau });
        }
        Ok(())
    }

    pub fn limits(&self, seed: &SeedProfile) -> SequenceLimits {
        let tau0 = BigInt::from(seed.tau0);
        let frac = |n: BigInt, d: BigInt| Rational::new(n, d);
        match self {
            Self::Constant(k) => SequenceLimits::new(
                Rational::zero(),
                frac(tau0, BigInt::from(*k)),
                true,
                seed,
            ),
            Self::Linear => SequenceLimits::new(Rational::zero(), Rational::zero(), true, seed),
            Self::TakeAll => SequenceLimits::new(
                frac(&tau0 - 1, tau0),
                Rational::zero(),
                true,
                seed,
            ),
            Self::Explicit(values) => {
                let last = values.last().copied().unwrap_or(1).max(1);
                let total: u64 = values.iter().sum::<u64>().max(1);
                SequenceLimits::new(
                    frac(BigInt::from(last), BigInt::from(total)),
                    frac(tau0, BigInt::from(last)),
                    false,
                    seed,
                )
            }
        }
    }
}

impl fmt::Display for BuildingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(k) => write!(f, "const:{k}"),
            Self::Linear => f.write_str("linear"),
            Self::TakeAll => f.write_str("takeall"),
            Self::Explicit(values) => {
                let parts: Vec<String> = values.iter().map(u64::to_string).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for BuildingSequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SequenceError::Parse(s.to_string());
        let s = s.trim();
        match s {
            "linear" => return Ok(Self::Linear),
            "takeall" => return Ok(Self::TakeAll),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("const:") {
            return Self::constant(k.trim().parse().map_err(|_| bad())?);
        }
        if let Some(list) = s.strip_prefix("explicit:") {
            let values = list
                .split(',')
                .map(|v| v.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad())?;
            return Self::explicit(values);
        }
        Err(bad())
    }
}

/// γ = (τ₀ − 1)/a + b, infinite when a = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gamma {
    Finite(Rational),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceLimits {
    pub a: Rational,
    pub b: Rational,
    pub gamma: Gamma,
    /// False when a and b are read off the last supplied term of an explicit list.
    pub known_exactly: bool,
}

impl SequenceLimits {
    fn new(a: Rational, b: Rational, known_exactly: bool, seed: &SeedProfile) -> Self {
        let gamma = if a.is_zero() {
            Gamma::Infinite
        } else {
            Gamma::Finite(Rational::from_integer(BigInt::from(seed.tau0 - 1)) / &a + &b)
        };
        debug_assert!(a >= Rational::zero() && a <= Rational::one());
        Self {
            a,
            b,
            gamma,
            known_exactly,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::seed::{profile_seed, SeedSpec};

    fn ps() -> SeedProfile {
        profile_seed(&SeedSpec::ps()).unwrap()
    }

    fn k2() -> SeedProfile {
        profile_seed(&SeedSpec::k2()).unwrap()
    }

    #[test]
    fn k_values() {
        assert_eq!(BuildingSequence::Linear.k(2, &ps()).unwrap(), 3);
        assert_eq!(BuildingSequence::Constant(1).k(7, &ps()).unwrap(), 1);
        assert_eq!(BuildingSequence::TakeAll.k(2, &k2()).unwrap(), 8);
        let e = BuildingSequence::explicit(vec![1]).unwrap();
        assert!(matches!(
            e.k(1, &ps()),
            Err(SequenceError::HorizonExceeded { step: 1, len: 1 })
        ));
    }

    #[test]
    fn tau_values() {
        assert_eq!(BuildingSequence::Linear.tau(3, &ps()).unwrap(), 15);
        assert_eq!(BuildingSequence::Linear.tau(0, &ps()).unwrap(), 3);
        assert_eq!(BuildingSequence::TakeAll.tau(3, &k2()).unwrap(), 16);
    }

    #[test]
    fn tau_recurrence_and_take_all_power() {
        for seed in [ps(), k2()] {
            for seq in [
                BuildingSequence::Constant(2),
                BuildingSequence::Linear,
                BuildingSequence::TakeAll,
            ] {
                let s = seq.schedule(&seed, 8).unwrap();
                for n in 1..=8 {
                    assert_eq!(s.taus[n], s.taus[n - 1] + s.ks[n - 1] * (seed.tau0 - 1));
                }
                if seq == BuildingSequence::TakeAll {
                    for n in 0..=8u32 {
                        assert_eq!(s.taus[n as usize], seed.tau0.pow(n + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn r1_checks() {
        let five = BuildingSequence::explicit(vec![5]).unwrap();
        assert!(matches!(
            five.check_r1(0, &ps()),
            Err(SequenceError::R1Violation { step: 0, k: 5, tau: 3 })
        ));
        for n in 0..6 {
            assert!(BuildingSequence::TakeAll.check_r1(n, &ps()).is_ok());
            assert!(BuildingSequence::Constant(1).check_r1(n, &ps()).is_ok());
        }
    }

    #[test]
    fn limit_values() {
        let l = BuildingSequence::Constant(4).limits(&ps());
        assert_eq!((l.a, l.b, l.gamma), (rat(0, 1), rat(3, 4), Gamma::Infinite));
        let l = BuildingSequence::Linear.limits(&ps());
        assert_eq!((l.a, l.b), (rat(0, 1), rat(0, 1)));
        let l = BuildingSequence::TakeAll.limits(&ps());
        assert_eq!((l.a.clone(), l.b.clone()), (rat(2, 3), rat(0, 1)));
        assert_eq!(l.gamma, Gamma::Finite(rat(3, 1)));
        assert!(l.known_exactly);
        let l = BuildingSequence::explicit(vec![1, 2, 3]).unwrap().limits(&ps());
        assert!(!l.known_exactly);
        assert_eq!((l.a, l.b), (rat(1, 2), rat(1, 1)));
    }

    #[test]
    fn parse_and_display() {
        for s in ["const:3", "linear", "takeall", "explicit:1,2,5"] {
            let seq: BuildingSequence = s.parse().unwrap();
            assert_eq!(seq.to_string(), s);
        }
        assert!("const:0".parse::<BuildingSequence>().is_err());
        assert!("explicit:1,0".parse::<BuildingSequence>().is_err());
        assert!("quadratic".parse::<BuildingSequence>().is_err());
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(
            BuildingSequence::TakeAll.schedule(&ps(), 64),
            Err(SequenceError::Overflow { .. })
        ));
    }
}
