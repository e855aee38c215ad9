//! A deliberately naive second implementation of the growth rule, used as an
//! oracle: plain adjacency lists, fresh BFS for everything, and exhaustive
//! enumeration of latch choices with exact probabilities.

#![allow(dead_code)]

use std::collections::VecDeque;

use multihook::Rational;
use num_bigint::BigInt;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn harmonic(n: u64) -> Rational {
    (1..=n as i64).map(|i| q(1, i)).fold(q(0, 1), |a, b| a + b)
}

/// Zero-based toy multigraph; vertex 0 is the reference vertex.
#[derive(Clone, Debug)]
pub struct Toy {
    pub adj: Vec<Vec<usize>>,
    pub deg: Vec<u64>,
    pub edges: usize,
}

/// Seed edges are zero-based with the hook at 0.
#[derive(Clone, Debug)]
pub struct ToySeed {
    pub order: usize,
    pub edges: Vec<(usize, usize)>,
}

impl ToySeed {
    pub fn k2() -> Self {
        Self { order: 2, edges: vec![(0, 1)] }
    }
    pub fn ps() -> Self {
        Self { order: 3, edges: vec![(0, 0), (0, 1), (1, 2), (1, 2)] }
    }
    pub fn triangle() -> Self {
        Self { order: 3, edges: vec![(0, 1), (1, 2), (2, 0)] }
    }
    pub fn toy(&self) -> Toy {
        let mut t = Toy { adj: vec![Vec::new(); self.order], deg: vec![0; self.order], edges: 0 };
        for &(u, v) in &self.edges {
            t.add_edge(u, v);
        }
        t
    }
    pub fn min_degree(&self) -> u64 {
        *self.toy().deg.iter().min().unwrap()
    }
}

impl Toy {
    fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.edges += 1;
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Hooks copies at each latch, in the given order.
    pub fn attach(&mut self, seed: &ToySeed, latches: &[usize]) {
        for &latch in latches {
            let base = self.order();
            let map = |s: usize| if s == 0 { latch } else { base + s - 1 };
            for _ in 1..seed.order {
                self.adj.push(Vec::new());
                self.deg.push(0);
            }
            for &(u, v) in &seed.edges {
                self.add_edge(map(u), map(v));
            }
        }
    }

    pub fn bfs(&self, from: usize) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.order()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == u64::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn total_path_length(&self) -> u64 {
        self.bfs(0).iter().sum()
    }

    pub fn count_degree(&self, d: u64) -> u64 {
        self.deg.iter().filter(|&&x| x == d).count() as u64
    }

    pub fn eccentricities(&self) -> Vec<u64> {
        (0..self.order()).map(|v| *self.bfs(v).iter().max().unwrap()).collect()
    }
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Every realisation after `steps` steps with its exact probability.
/// `k_of(step, order)` gives the number of copies at the given step.
pub fn enumerate(
    seed: &ToySeed,
    steps: usize,
    k_of: &dyn Fn(usize, usize) -> usize,
) -> Vec<(Rational, Toy)> {
    let mut layer = vec![(q(1, 1), seed.toy())];
    for step in 0..steps {
        let mut next = Vec::new();
        for (p, toy) in &layer {
            let choices = subsets(toy.order(), k_of(step, toy.order()));
            let share = p / Rational::from_integer(BigInt::from(choices.len()));
            for latches in choices {
                let mut t = toy.clone();
                t.attach(seed, &latches);
                next.push((share.clone(), t));
            }
        }
        layer = next;
    }
    layer
}

/// Exact expectation of `f` over all realisations.
pub fn expect(outcomes: &[(Rational, Toy)], f: impl Fn(&Toy) -> u64) -> Rational {
    outcomes
        .iter()
        .map(|(p, t)| p * Rational::from_integer(BigInt::from(f(t))))
        .fold(q(0, 1), |a, b| a + b)
}
