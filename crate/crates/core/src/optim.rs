//! Box-constrained minimization for non-smooth objectives: a coarse grid,
//! then Nelder–Mead from the best grid cells.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Closed interval of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::SearchDomain(format!("[{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn clamp(&self, x: T) -> T {
        x.max(self.lo).min(self.hi)
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    /// `n` evenly spaced points including both ends.
    pub fn grid(&self, n: usize) -> Vec<T> {
        if n <= 1 || self.width() == T::zero() {
            return vec![(self.lo + self.hi) / T::lit(2.0)];
        }
        let step = self.width() / T::from_usize(n - 1).expect("grid size");
        (0..n)
            .map(|i| self.lo + step * T::from_usize(i).expect("grid index"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexConfig {
    pub max_iter: usize,
    /// Stop once the spread of values and of vertices drops below this.
    pub tol: f64,
    /// Initial simplex edge, as a fraction of each interval's width.
    pub step: f64,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-10,
            step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub n_evals: usize,
    /// Best vertex after each iteration.
    pub trace: Vec<(Vec<T>, T)>,
}

/// Nelder–Mead restricted to a box by clamping every trial point.
///
/// The initial simplex is rotated by a random sign pattern drawn from `rng`
/// so that restarts from nearby points explore different directions.
pub fn nelder_mead<T, F, R>(
    f: &F,
    x0: &[T],
    bounds: &[Interval<T>],
    cfg: &SimplexConfig,
    rng: &mut R,
) -> Result<Minimum<T>>
where
    T: Real,
    F: Fn(&[T]) -> Result<T>,
    R: Rng,
{
    let n = x0.len();
    if n == 0 || bounds.len() != n {
        return Err(Error::SearchDomain("dimension mismatch".into()));
    }
    let clamp = |x: Vec<T>| -> Vec<T> { x.into_iter().zip(bounds).map(|(v, b)| b.clamp(v)).collect() };
    let mut n_evals = 0;
    let mut eval = |x: &[T]| -> Result<T> {
        n_evals += 1;
        let v = f(x)?;
        Ok(if v.is_nan() { T::infinity() } else { v })
    };

    let start = clamp(x0.to_vec());
    let mut simplex = vec![start.clone()];
    for i in 0..n {
        let mut v = start.clone();
        let h = bounds[i].width() * T::lit(cfg.step);
        let h = if rng.gen::<bool>() { h } else { -h };
        // Step inward when the start sits on the boundary.
        v[i] = if bounds[i].clamp(v[i] + h) == v[i] + h {
            v[i] + h
        } else {
            v[i] - h
        };
        simplex.push(clamp(v));
    }
    let mut values = simplex.iter().map(|x| eval(x)).collect::<Result<Vec<T>>>()?;
    let mut trace = Vec::new();

    let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
    let tol = T::lit(cfg.tol);
    for _ in 0..cfg.max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("values are not NaN"));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        trace.push((simplex[0].clone(), values[0]));

        let spread_f = values[n] - values[0];
        let spread_x = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (*a - *b).abs()))
            .fold(T::zero(), T::max);
        if spread_f <= tol && spread_x <= tol {
            break;
        }

        let nt = T::from_usize(n).expect("dimension");
        let centroid: Vec<T> = (0..n)
            .map(|j| simplex[..n].iter().fold(T::zero(), |s, v| s + v[j]) / nt)
            .collect();
        let along = |t: T| -> Vec<T> {
            clamp(
                centroid
                    .iter()
                    .zip(&simplex[n])
                    .map(|(c, w)| *c + t * (*c - *w))
                    .collect(),
            )
        };

        let xr = along(alpha);
        let fr = eval(&xr)?;
        if fr < values[0] {
            let xe = along(gamma);
            let fe = eval(&xe)?;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        // Outside contraction when the reflection improved on the worst
        // vertex, inside contraction otherwise.
        let (xc, fc, target) = if fr < values[n] {
            let xc = along(rho);
            let fc = eval(&xc)?;
            (xc, fc, fr)
        } else {
            let xc = along(-rho);
            let fc = eval(&xc)?;
            (xc, fc, values[n])
        };
        if fc < target {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        for i in 1..=n {
            let v: Vec<T> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, x)| *b + sigma * (*x - *b))
                .collect();
            simplex[i] = clamp(v);
            values[i] = eval(&simplex[i])?;
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("values are not NaN"))
        .expect("simplex is non-empty");
    Ok(Minimum {
        x: simplex[best].clone(),
        value: values[best],
        n_evals,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultistartConfig {
    /// Grid points per coordinate.
    pub grid: usize,
    /// Number of best grid cells refined.
    pub starts: usize,
    pub simplex: SimplexConfig,
    pub seed: u64,
}

impl Default for MultistartConfig {
    fn default() -> Self {
        Self {
            grid: 25,
            starts: 5,
            simplex: SimplexConfig::default(),
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultistartResult<T> {
    pub best: Minimum<T>,
    /// Refinement results in start order.
    pub runs: Vec<Minimum<T>>,
    pub n_evals: usize,
}

/// Evaluates `f` on the full tensor grid, then refines the `starts` best
/// grid points in parallel. Start `k` draws from a generator seeded with
/// `seed + k`, so the result does not depend on scheduling.
pub fn multistart<T, F>(f: &F, bounds: &[Interval<T>], cfg: &MultistartConfig) -> Result<MultistartResult<T>>
where
    T: Real,
    F: Fn(&[T]) -> Result<T> + Sync,
{
    if bounds.is_empty() || cfg.grid == 0 || cfg.starts == 0 {
        return Err(Error::SearchDomain("empty grid".into()));
    }
    let axes: Vec<Vec<T>> = bounds.iter().map(|b| b.grid(cfg.grid)).collect();
    let mut points: Vec<Vec<T>> = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    let values = points.par_iter().map(|p| f(p)).collect::<Result<Vec<T>>>()?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
    let starts: Vec<usize> = order.into_iter().take(cfg.starts).collect();

    let runs = starts
        .par_iter()
        .enumerate()
        .map(|(k, &i)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
            nelder_mead(f, &points[i], bounds, &cfg.simplex, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let n_evals = points.len() + runs.iter().map(|r| r.n_evals).sum::<usize>();
    let best = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            a.value
                .partial_cmp(&b.value)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(i.cmp(j))
        })
        .map(|(_, r)| r.clone())
        .expect("at least one start");
    Ok(MultistartResult { best, runs, n_evals })
}
