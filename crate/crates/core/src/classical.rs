//! Classical random walks on the same graphs, as column-stochastic Markov chains.
//!
//! `P[(y, x)]` is the probability of moving from `x` to `y`, so distributions
//! evolve as `v_{t+1} = P v_t`.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::walk::WalkGraph;

const STOCHASTIC_TOL: f64 = 1e-12;
pub const MIXING_STEP_CAP: usize = 10_000;
pub const MONTE_CARLO_STEP_CAP: u64 = 10_000_000;

pub type Distribution = Vec<f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    p: DMatrix<f64>,
}

impl TransitionMatrix {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if !p.is_square() || p.nrows() == 0 {
            return Err(Error::Validation(
                "transition matrix must be square and non-empty".into(),
            ));
        }
        for (x, col) in p.column_iter().enumerate() {
            if col.iter().any(|&v| v.is_nan() || v < 0.0) {
                return Err(Error::Validation(format!("column {x} has a negative or NaN entry")));
            }
            let sum: f64 = col.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Validation(format!("column {x} sums to {sum}, not 1")));
            }
        }
        Ok(TransitionMatrix { p })
    }

    /// Row-major entries, `rows[y][x]` = probability of `x → y`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Validation(
                "transition matrix rows must all have length N".into(),
            ));
        }
        Self::new(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    /// The three-state chain A, B, C used as the textbook example.
    pub fn three_state_example() -> Self {
        Self::from_rows(&[vec![0.1, 0.3, 0.3], vec![0.1, 0.1, 0.2], vec![0.8, 0.6, 0.5]])
            .expect("example chain is stochastic")
    }

    pub fn dim(&self) -> usize {
        self.p.nrows()
    }

    pub fn get(&self, to: usize, from: usize) -> f64 {
        self.p[(to, from)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn is_symmetric(&self) -> bool {
        (&self.p - self.p.transpose()).amax() <= STOCHASTIC_TOL
    }

    fn successors(&self, x: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&y| self.p[(y, x)] > 0.0).collect()
    }
}

/// Uniform step to a neighbour; multi-edges add weight.
pub fn transition_matrix(graph: &WalkGraph) -> Result<TransitionMatrix> {
    graph.validate()?;
    let n = graph.node_count();
    let w = 1.0 / graph.degree() as f64;
    let mut p = DMatrix::zeros(n, n);
    for x in 0..n {
        for y in graph.neighbors(x) {
            p[(y, x)] += w;
        }
    }
    TransitionMatrix::new(p)
}

pub fn check_distribution(v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::arg(format!(
            "distribution has {} entries, chain has {n} states",
            v.len()
        )));
    }
    if v.iter().any(|&x| x.is_nan() || x < 0.0) {
        return Err(Error::arg("distribution has a negative or NaN entry"));
    }
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(Error::arg(format!("distribution sums to {s}, not 1")));
    }
    Ok(())
}

pub fn point_mass(n: usize, x: usize) -> Distribution {
    let mut v = vec![0.0; n];
    v[x] = 1.0;
    v
}

pub fn uniform(n: usize) -> Distribution {
    vec![1.0 / n as f64; n]
}

/// `P^t v0`.
pub fn evolve(p: &TransitionMatrix, v0: &[f64], t: usize) -> Result<Distribution> {
    check_distribution(v0, p.dim())?;
    let mut v = DVector::from_column_slice(v0);
    for _ in 0..t {
        v = &p.p * v;
    }
    Ok(v.iter().copied().collect())
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions over different state spaces");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

fn bfs_levels(n: usize, start: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<Option<usize>> {
    let mut level = vec![None; n];
    level[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let l = level[x].unwrap();
        for y in next(x) {
            if level[y].is_none() {
                level[y] = Some(l + 1);
                queue.push_back(y);
            }
        }
    }
    level
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_irreducible(p: &TransitionMatrix) -> bool {
    let n = p.dim();
    let fwd = bfs_levels(n, 0, |x| p.successors(x));
    let back = bfs_levels(n, 0, |y| (0..n).filter(|&x| p.get(y, x) > 0.0).collect());
    fwd.iter().chain(&back).all(Option::is_some)
}

/// Period of an irreducible chain: gcd of `level(x) + 1 − level(y)` over all edges `x → y`.
pub fn period(p: &TransitionMatrix) -> Result<usize> {
    if !is_irreducible(p) {
        return Err(Error::Validation("chain is not irreducible".into()));
    }
    let n = p.dim();
    let level = bfs_levels(n, 0, |x| p.successors(x));
    let mut g = 0;
    for x in 0..n {
        for y in p.successors(x) {
            let d = (level[x].unwrap() + 1) as i64 - level[y].unwrap() as i64;
            g = gcd(g, d.unsigned_abs() as usize);
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct Stationary {
    pub distribution: Distribution,
    pub period: usize,
    /// Set when the chain is periodic: `P^t v0` does not converge, though the fixed point is unique.
    pub periodic: bool,
}

/// Fixed point of `P`, by power iteration on the lazy chain `(P + I)/2`.
pub fn stationary_distribution(p: &TransitionMatrix) -> Result<Stationary> {
    let period = period(p)?;
    let n = p.dim();
    let lazy = (&p.p + DMatrix::identity(n, n)) * 0.5;
    let mut v = DVector::from_element(n, 1.0 / n as f64);
    for _ in 0..1_000_000 {
        let next = &lazy * &v;
        let diff = (&next - &v).abs().sum();
        v = next;
        if diff < 1e-15 {
            break;
        }
    }
    let s = v.sum();
    v /= s;
    let residual = (&p.p * &v - &v).amax();
    if residual > 1e-10 {
        return Err(Error::Validation(format!(
            "power iteration did not converge (residual {residual:e})"
        )));
    }
    Ok(Stationary {
        distribution: v.iter().copied().collect(),
        period,
        periodic: period > 1,
    })
}

/// Least `t` with `max_x D(P^t e_x, π) ≤ eps`, up to [`MIXING_STEP_CAP`].
pub fn mixing_time(p: &TransitionMatrix, eps: f64) -> Result<usize> {
    mixing_time_capped(p, eps, MIXING_STEP_CAP)
}

pub fn mixing_time_capped(p: &TransitionMatrix, eps: f64, cap: usize) -> Result<usize> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::arg("mixing threshold must be positive"));
    }
    let pi = stationary_distribution(p)?.distribution;
    let n = p.dim();
    let mut pt = DMatrix::<f64>::identity(n, n);
    for t in 0..=cap {
        let worst = pt
            .column_iter()
            .map(|col| {
                let v: Vec<f64> = col.iter().copied().collect();
                total_variation(&v, &pi)
            })
            .fold(0.0, f64::max);
        if worst <= eps {
            return Ok(t);
        }
        pt = &p.p * pt;
    }
    Err(Error::NotMixing(cap))
}

/// Unmarked states from which the marked set is reached with probability 1.
#[allow(clippy::needless_range_loop)]
fn certain_to_hit(p: &TransitionMatrix, marked: &[bool]) -> Vec<bool> {
    let n = p.dim();
    let back = {
        let mut reach = marked.to_vec();
        let mut queue: VecDeque<usize> = (0..n).filter(|&x| marked[x]).collect();
        while let Some(y) = queue.pop_front() {
            for x in 0..n {
                if !reach[x] && p.get(y, x) > 0.0 {
                    reach[x] = true;
                    queue.push_back(x);
                }
            }
        }
        reach
    };
    let mut ok: Vec<bool> = (0..n).map(|x| !marked[x] && back[x]).collect();
    loop {
        let mut changed = false;
        for x in 0..n {
            if ok[x] && p.successors(x).into_iter().any(|y| !marked[y] && !ok[y]) {
                ok[x] = false;
                changed = true;
            }
        }
        if !changed {
            return ok;
        }
    }
}

fn marked_mask(n: usize, marked: &[usize]) -> Result<Vec<bool>> {
    if marked.is_empty() {
        return Err(Error::arg("hitting time needs at least one marked state"));
    }
    let mut mask = vec![false; n];
    for &m in marked {
        if m >= n {
            return Err(Error::arg(format!("marked state {m} out of range for {n} states")));
        }
        mask[m] = true;
    }
    Ok(mask)
}

/// Expected steps from each state to the marked set: zero on marked states,
/// `h_x = 1 + Σ_y P[(y, x)] h_y` elsewhere. `None` where the expectation is infinite.
pub fn hitting_times(p: &TransitionMatrix, marked: &[usize]) -> Result<Vec<Option<f64>>> {
    let n = p.dim();
    let mask = marked_mask(n, marked)?;
    let ok = certain_to_hit(p, &mask);
    let idx: Vec<usize> = (0..n).filter(|&x| ok[x]).collect();
    let mut out: Vec<Option<f64>> = (0..n).map(|x| mask[x].then_some(0.0)).collect();
    if idx.is_empty() {
        return Ok(out);
    }
    let k = idx.len();
    let a = DMatrix::from_fn(k, k, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - p.get(idx[j], idx[i])
    });
    let b = DVector::from_element(k, 1.0);
    let h = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Divergent("first-passage system is singular".into()))?;
    for (i, &x) in idx.iter().enumerate() {
        out[x] = Some(h[i]);
    }
    Ok(out)
}

/// Expected first-passage time to `marked`, averaged over `start`.
pub fn classical_hitting_time(p: &TransitionMatrix, start: &[f64], marked: &[usize]) -> Result<f64> {
    check_distribution(start, p.dim())?;
    let h = hitting_times(p, marked)?;
    let mut total = 0.0;
    for (x, (&w, hx)) in start.iter().zip(&h).enumerate() {
        if w > 0.0 {
            match hx {
                Some(v) => total += w * v,
                None => {
                    return Err(Error::Divergent(format!(
                        "marked set is not reached almost surely from state {x}"
                    )))
                }
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

fn sample_index(cdf: &[(usize, f64)], u: f64) -> usize {
    let i = cdf.partition_point(|&(_, c)| c <= u);
    cdf[i.min(cdf.len() - 1)].0
}

/// Simulated first-passage times; trial `i` draws from its own seeded stream.
pub fn monte_carlo_hitting_time(
    p: &TransitionMatrix,
    start: &[f64],
    marked: &[usize],
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let n = p.dim();
    check_distribution(start, n)?;
    let mask = marked_mask(n, marked)?;
    if trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    let cumulative = |weights: Vec<(usize, f64)>| {
        let mut acc = 0.0;
        weights
            .into_iter()
            .map(|(i, w)| {
                acc += w;
                (i, acc)
            })
            .collect::<Vec<_>>()
    };
    let columns: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|x| cumulative(p.successors(x).into_iter().map(|y| (y, p.get(y, x))).collect()))
        .collect();
    let start_cdf = cumulative(start.iter().copied().enumerate().filter(|&(_, w)| w > 0.0).collect());
    let samples: Vec<Option<u64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng::stream(seed, trial, Stream::Trial);
            let mut x = sample_index(&start_cdf, rng.random::<f64>() * start_cdf.last().unwrap().1);
            let mut steps = 0u64;
            while !mask[x] {
                if steps == MONTE_CARLO_STEP_CAP {
                    return None;
                }
                let col = &columns[x];
                x = sample_index(col, rng.random::<f64>() * col.last().unwrap().1);
                steps += 1;
            }
            Some(steps)
        })
        .collect();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for s in samples {
        let v = s
            .ok_or_else(|| Error::Divergent(format!("a trial exceeded {MONTE_CARLO_STEP_CAP} steps without hitting")))?
            as f64;
        sum += v;
        sum_sq += v * v;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = if trials > 1 {
        (sum_sq - t * mean * mean) / (t - 1.0)
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var.max(0.0) / t).sqrt(),
        trials,
    })
}
