use super::{directions, Frontier, RatePoint, Support, Validity, Witness};
use crate::error::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// A family of regions indexed by a box of real parameters; the region it
/// describes is the convex hull of the union over the box.
pub trait RegionEvaluator: Sync {
    /// Lower and upper limit of each parameter.
    fn domain(&self) -> Vec<(f64, f64)>;

    /// The region at one parameter point.
    fn region(&self, params: &[f64]) -> Result<Box<dyn Support>>;
}

/// A [`RegionEvaluator`] built from a parameter box and a closure.
pub struct ParamFamily<F> {
    pub domain: Vec<(f64, f64)>,
    pub f: F,
}

impl<F> ParamFamily<F>
where
    F: Fn(&[f64]) -> Result<Box<dyn Support>> + Sync,
{
    pub fn new(domain: Vec<(f64, f64)>, f: F) -> Self {
        Self { domain, f }
    }
}

impl<F> RegionEvaluator for ParamFamily<F>
where
    F: Fn(&[f64]) -> Result<Box<dyn Support>> + Sync,
{
    fn domain(&self) -> Vec<(f64, f64)> {
        self.domain.clone()
    }
    fn region(&self, params: &[f64]) -> Result<Box<dyn Support>> {
        (self.f)(params)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Grid points per dimension when there are at most two parameters.
    pub grid_points: usize,
    /// Total grid budget for more than two parameters.
    pub grid_budget: usize,
    /// Best grid points used as Nelder-Mead starts.
    pub starts: usize,
    /// Extra uniformly random starts drawn from the seeded generator.
    pub random_starts: usize,
    pub max_iter: usize,
    /// Simplex size at which a Nelder-Mead run stops.
    pub simplex_tol: f64,
    /// Fresh-simplex restarts from the best point of a run.
    pub restarts: usize,
    /// Per direction, Nelder-Mead runs seeded from the best witnesses found
    /// at other directions (a continuation pass after the grid starts).
    pub polish: usize,
    /// Skip Nelder-Mead entirely and report the grid optimum.
    pub refine: bool,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_points: 33,
            grid_budget: 33 * 33,
            starts: 3,
            random_starts: 0,
            max_iter: 500,
            simplex_tol: 1e-10,
            restarts: 2,
            polish: 1,
            refine: true,
            seed: 0xC0FFEE,
        }
    }
}

impl OptimizerConfig {
    fn points_per_dim(&self, d: usize) -> usize {
        if d <= 2 {
            self.grid_points
        } else {
            ((self.grid_budget as f64).powf(1.0 / d as f64).floor() as usize).max(3)
        }
    }
}

/// A box side spanning exactly one turn is an angle: its grid leaves out the
/// upper end, which would repeat the lower one.
fn is_angle(lo: f64, hi: f64) -> bool {
    ((hi - lo) - std::f64::consts::TAU).abs() < 1e-12
}

fn grid(domain: &[(f64, f64)], n: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for &(lo, hi) in domain {
        let mut next = Vec::with_capacity(out.len() * n);
        let steps = if is_angle(lo, hi) { n } else { n.max(2) - 1 };
        for p in &out {
            for i in 0..n {
                let t = if n == 1 { 0.5 } else { i as f64 / steps as f64 };
                let mut q = p.clone();
                q.push(lo + t * (hi - lo));
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn clamp(x: &mut [f64], domain: &[(f64, f64)]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(domain) {
        *v = v.clamp(lo, hi);
    }
}

/// Maximizes `f` over the box with Nelder-Mead from `x0`; returns the best
/// point and value.
fn nelder_mead<F>(
    f: &F,
    x0: &[f64],
    f0: f64,
    domain: &[(f64, f64)],
    cfg: &OptimizerConfig,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let d = x0.len();
    let mut best = (x0.to_vec(), f0);
    let mut scale = 0.05;
    for _ in 0..=cfg.restarts {
        let start_val = best.1;
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![best.clone()];
        for i in 0..d {
            let (lo, hi) = domain[i];
            let mut x = best.0.clone();
            let step = scale * (hi - lo);
            x[i] = if x[i] + step <= hi {
                x[i] + step
            } else {
                x[i] - step
            };
            let v = f(&x)?;
            simplex.push((x, v));
        }
        for _ in 0..cfg.max_iter {
            // Descending by value: simplex[0] is the best.
            simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
            let size = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            let spread = simplex[0].1 - simplex[d].1;
            if size <= cfg.simplex_tol
                || spread <= 1e-15 * (1.0 + simplex[0].1.abs()) && size <= 1e-6
            {
                break;
            }
            let mut centroid = vec![0.0; d];
            for (x, _) in &simplex[..d] {
                for k in 0..d {
                    centroid[k] += x[k] / d as f64;
                }
            }
            let worst = simplex[d].clone();
            let point = |t: f64| -> Vec<f64> {
                let mut x: Vec<f64> = (0..d)
                    .map(|k| centroid[k] + t * (worst.0[k] - centroid[k]))
                    .collect();
                clamp(&mut x, domain);
                x
            };
            let xr = point(-1.0);
            let fr = f(&xr)?;
            if fr > simplex[0].1 {
                let xe = point(-2.0);
                let fe = f(&xe)?;
                simplex[d] = if fe > fr { (xe, fe) } else { (xr, fr) };
            } else if fr > simplex[d - 1].1 {
                simplex[d] = (xr, fr);
            } else {
                let (xc, fc) = if fr > worst.1 {
                    let x = point(-0.5);
                    let v = f(&x)?;
                    (x, v)
                } else {
                    let x = point(0.5);
                    let v = f(&x)?;
                    (x, v)
                };
                if fc > worst.1.max(fr) {
                    simplex[d] = (xc, fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for s in simplex.iter_mut().skip(1) {
                        for k in 0..d {
                            s.0[k] = x0[k] + 0.5 * (s.0[k] - x0[k]);
                        }
                        s.1 = f(&s.0)?;
                    }
                }
            }
        }
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        if simplex[0].1 > best.1 {
            best = simplex[0].clone();
        }
        if best.1 - start_val <= 1e-13 * (1.0 + best.1.abs()) && scale < 0.05 {
            break;
        }
        scale *= 0.1;
    }
    Ok(best)
}

struct Candidate {
    value: f64,
    point: RatePoint,
    params: Vec<f64>,
}

/// Grid regions shared by every direction of one frontier computation.
struct GridCache {
    points: Vec<Vec<f64>>,
    regions: Vec<Box<dyn Support>>,
}

impl GridCache {
    fn build(ev: &dyn RegionEvaluator, cfg: &OptimizerConfig) -> Result<Self> {
        let dom = ev.domain();
        let mut points = grid(&dom, cfg.points_per_dim(dom.len()));
        if cfg.random_starts > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for _ in 0..cfg.random_starts {
                points.push(
                    dom.iter()
                        .map(|&(lo, hi)| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
                        .collect(),
                );
            }
        }
        let regions = points
            .par_iter()
            .map(|p| ev.region(p).map_err(|e| e.with_params(p)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { points, regions })
    }

    fn solve(
        &self,
        ev: &dyn RegionEvaluator,
        mu: [f64; 2],
        cfg: &OptimizerConfig,
    ) -> Result<Candidate> {
        let dom = ev.domain();
        let mut scored: Vec<(usize, f64, RatePoint)> = self
            .regions
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let (v, p) = r.support(mu);
                (i, v, p)
            })
            .collect();
        // Stable ordering keeps ties deterministic.
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let (i0, v0, p0) = scored[0];
        let mut best = Candidate {
            value: v0,
            point: p0,
            params: self.points[i0].clone(),
        };
        if !cfg.refine || dom.is_empty() {
            return Ok(best);
        }
        let f = |x: &[f64]| -> Result<f64> {
            Ok(ev.region(x).map_err(|e| e.with_params(x))?.support(mu).0)
        };
        let mut tried: Vec<usize> = Vec::new();
        for &(i, v, _) in scored.iter() {
            if tried.len() >= cfg.starts {
                break;
            }
            if tried.iter().any(|&j| self.points[j] == self.points[i]) {
                continue;
            }
            tried.push(i);
            let (x, fx) = nelder_mead(&f, &self.points[i], v, &dom, cfg)?;
            if fx > best.value {
                let (v, p) = ev.region(&x)?.support(mu);
                best = Candidate {
                    value: v,
                    point: p,
                    params: x,
                };
            }
        }
        Ok(best)
    }
}

/// Restarts Nelder-Mead at `mu` from the witnesses of other directions that
/// score best there. Optimal parameters move continuously with the
/// direction, so a neighbour's optimum is often in a better basin than any
/// grid point.
fn polish(
    ev: &dyn RegionEvaluator,
    mu: [f64; 2],
    own: &Candidate,
    all: &[Candidate],
    cfg: &OptimizerConfig,
) -> Result<Candidate> {
    let dom = ev.domain();
    let f = |x: &[f64]| -> Result<f64> {
        Ok(ev.region(x).map_err(|e| e.with_params(x))?.support(mu).0)
    };
    let mut seeds: Vec<(f64, &Vec<f64>)> = Vec::new();
    for c in all {
        if c.params == own.params || seeds.iter().any(|(_, p)| **p == c.params) {
            continue;
        }
        seeds.push((f(&c.params)?, &c.params));
    }
    seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = Candidate {
        value: own.value,
        point: own.point,
        params: own.params.clone(),
    };
    for (v, p) in seeds.into_iter().take(cfg.polish) {
        let (x, fx) = nelder_mead(&f, p, v, &dom, cfg)?;
        if fx > best.value {
            let (v, pt) = ev.region(&x)?.support(mu);
            best = Candidate {
                value: v,
                point: pt,
                params: x,
            };
        }
    }
    Ok(best)
}

/// `max over params of h_params(mu)` with a maximizing rate pair and parameters.
pub fn support_value(
    ev: &dyn RegionEvaluator,
    mu: [f64; 2],
    cfg: &OptimizerConfig,
) -> Result<(f64, Witness)> {
    let cache = GridCache::build(ev, cfg)?;
    let c = cache.solve(ev, mu, cfg)?;
    Ok((
        c.value,
        Witness {
            point: c.point,
            params: c.params,
        },
    ))
}

/// Support samples of the union region at `n` equiangular directions.
pub fn frontier(
    ev: &dyn RegionEvaluator,
    n: usize,
    cfg: &OptimizerConfig,
    source: &str,
) -> Result<Frontier> {
    if n < 2 {
        return Err(crate::Error::Usage(format!(
            "need at least 2 directions, got {n}"
        )));
    }
    let cache = GridCache::build(ev, cfg)?;
    let dirs = directions(n);
    let mut cands = dirs
        .par_iter()
        .map(|mu| cache.solve(ev, *mu, cfg))
        .collect::<Result<Vec<_>>>()?;
    if cfg.refine && cfg.polish > 0 && !ev.domain().is_empty() {
        cands = dirs
            .par_iter()
            .zip(&cands)
            .map(|(mu, own)| polish(ev, *mu, own, &cands, cfg))
            .collect::<Result<Vec<_>>>()?;
    }
    let mut f = Frontier {
        directions: dirs,
        values: cands.iter().map(|c| c.value.max(0.0)).collect(),
        witnesses: cands
            .into_iter()
            .map(|c| {
                Some(Witness {
                    point: c.point,
                    params: c.params,
                })
            })
            .collect(),
        source: source.to_string(),
        validity: Validity::Achievable,
    };
    f.cleanup();
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{HalfPlane, Polygon};

    /// Squares `[0, 1 - (p - 0.3)^2] x [0, 1 - (q + 0.2)^2]`.
    struct Bowl;
    impl RegionEvaluator for Bowl {
        fn domain(&self) -> Vec<(f64, f64)> {
            vec![(-1.0, 1.0), (-1.0, 1.0)]
        }
        fn region(&self, p: &[f64]) -> Result<Box<dyn Support>> {
            let a = 1.0 - (p[0] - 0.3f64).powi(2);
            let b = 1.0 - (p[1] + 0.2f64).powi(2);
            Ok(Box::new(Polygon::new(vec![
                HalfPlane::r1(a),
                HalfPlane::r2(b),
            ])?))
        }
    }

    #[test]
    fn refines_off_grid_optimum() {
        let (v, w) = support_value(&Bowl, [1.0, 0.0], &OptimizerConfig::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
        assert!((w.params[0] - 0.3).abs() < 1e-5);
    }

    #[test]
    fn deterministic() {
        let cfg = OptimizerConfig::default();
        let a = frontier(&Bowl, 9, &cfg, "b").unwrap();
        let b = frontier(&Bowl, 9, &cfg, "b").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn finer_grid_never_lower() {
        let coarse = OptimizerConfig {
            grid_points: 9,
            refine: false,
            ..Default::default()
        };
        let fine = OptimizerConfig {
            grid_points: 17,
            ..coarse.clone()
        };
        let a = frontier(&Bowl, 12, &coarse, "b").unwrap();
        let b = frontier(&Bowl, 12, &fine, "b").unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!(y + 1e-12 >= *x);
        }
    }

    #[test]
    fn high_dimensional_grid_budget() {
        let cfg = OptimizerConfig::default();
        assert_eq!(cfg.points_per_dim(1), 33);
        assert_eq!(cfg.points_per_dim(3), 10);
        assert_eq!(cfg.points_per_dim(4), 5);
    }
}
