//! Monte Carlo sampling of the Matérn cluster process and of its contact and
//! nearest-neighbor distances.
//!
//! Every realization draws from its own ChaCha8 stream, selected by
//! `(seed, realization index)`, so results are identical for any worker
//! count. Samples are sorted before they are stored.

use std::f64::consts::PI;
use std::io::{self, Write};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{require_positive, Error, Result};
use crate::kernels::McpParams;

/// Default cap on the expected number of generated points per realization.
pub const DEFAULT_POINT_CAP: f64 = 1e8;

/// Realizations allowed to come up empty in a row before the window sampler
/// gives up.
const MAX_CONSECUTIVE_REDRAWS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        Self::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Uniform point on the disk `b(center, radius)`.
pub fn uniform_in_disk<R: Rng + ?Sized>(rng: &mut R, center: Point, radius: f64) -> Point {
    let rho = radius * rng.random::<f64>().sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    Point::new(center.x + rho * theta.cos(), center.y + rho * theta.sin())
}

fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    // `mean` is a validated positive parameter.
    Poisson::new(mean)
        .expect("positive Poisson mean")
        .sample(rng) as u64
}

/// One MCP realization around the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    /// Parents in order of increasing distance from the origin.
    pub parents: Vec<Point>,
    /// `clusters[i]` holds the offspring of `parents[i]`.
    pub clusters: Vec<Vec<Point>>,
    /// Radius of the disk on which statistics are edge-effect free.
    pub window_radius: f64,
    /// Parents were generated on `b(o, window_radius + r_d)`.
    pub generation_radius: f64,
}

impl PointSet {
    pub fn offspring(&self) -> impl Iterator<Item = &Point> {
        self.clusters.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance from the origin to the closest offspring point.
    pub fn contact_distance(&self) -> Option<f64> {
        self.offspring().map(Point::norm).min_by(f64::total_cmp)
    }
}

/// Samples an MCP realization whose restriction to `b(o, window_radius)`
/// has the exact MCP law: every parent within `window_radius + r_d` is
/// generated.
pub fn sample_mcp<R: Rng + ?Sized>(
    params: &McpParams,
    window_radius: f64,
    rng: &mut R,
) -> Result<PointSet> {
    sample_mcp_capped(params, window_radius, DEFAULT_POINT_CAP, rng)
}

/// [`sample_mcp`] with an explicit cap on the expected point count.
///
/// Parents are produced by a radial sweep: the areas `π ‖x_k‖²` of the
/// sorted parents form a Poisson process of rate `λ_p` on the half line.
/// Each parent's offspring are drawn right after it, so enlarging the window
/// only appends parents and leaves everything already generated unchanged.
pub fn sample_mcp_capped<R: Rng + ?Sized>(
    params: &McpParams,
    window_radius: f64,
    point_cap: f64,
    rng: &mut R,
) -> Result<PointSet> {
    require_positive("window_radius", window_radius)?;
    let generation_radius = window_radius + params.r_d();
    let expected = params.point_density() * PI * generation_radius * generation_radius;
    if expected > point_cap {
        return Err(Error::ResourceCap {
            expected,
            cap: point_cap,
        });
    }

    let max_area = PI * generation_radius * generation_radius;
    let mut area = 0.0;
    let mut parents = Vec::new();
    let mut clusters = Vec::new();
    loop {
        let step: f64 = Exp1.sample(rng);
        area += step / params.lambda_p();
        if area > max_area {
            break;
        }
        let parent = Point::polar((area / PI).sqrt(), 2.0 * PI * rng.random::<f64>());
        let n = poisson(rng, params.m_bar());
        let cluster = (0..n)
            .map(|_| uniform_in_disk(rng, parent, params.r_d()))
            .collect();
        parents.push(parent);
        clusters.push(cluster);
    }
    Ok(PointSet {
        parents,
        clusters,
        window_radius,
        generation_radius,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub n_samples: usize,
    /// Censoring radius for distance samples.
    pub r_max: f64,
    pub seed: u64,
    /// Worker threads; does not affect results.
    pub workers: usize,
    #[serde(skip)]
    pub point_cap: f64,
}

impl SimulationConfig {
    pub fn new(n_samples: usize, r_max: f64, seed: u64) -> Self {
        Self {
            n_samples,
            r_max,
            seed,
            workers: 1,
            point_cap: DEFAULT_POINT_CAP,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidParameter {
                name: "n_samples",
                value: 0.0,
                reason: "need at least one realization",
            });
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter {
                name: "workers",
                value: 0.0,
                reason: "need at least one worker",
            });
        }
        require_positive("r_max", self.r_max)?;
        require_positive("point_cap", self.point_cap)
    }
}

/// The random stream owned by realization `index`.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `f` once per realization on `config.workers` threads and returns the
/// results in realization order.
fn run_realizations<T, F>(config: &SimulationConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|_| Error::InvalidParameter {
            name: "workers",
            value: config.workers as f64,
            reason: "could not start worker threads",
        })?;
    pool.install(|| {
        (0..config.n_samples as u64)
            .into_par_iter()
            .map(|i| f(&mut realization_rng(config.seed, i)))
            .collect()
    })
}

/// Sorted distance samples, censored at `r_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalCdf {
    sorted_samples: Vec<f64>,
    n_total: usize,
    n_censored: usize,
    r_max: f64,
}

impl EmpiricalCdf {
    /// `None` and values beyond `r_max` count as censored.
    pub fn from_samples<I>(samples: I, r_max: f64) -> Result<Self>
    where
        I: IntoIterator<Item = Option<f64>>,
    {
        require_positive("r_max", r_max)?;
        let mut n_total = 0;
        let mut sorted_samples = Vec::new();
        for s in samples {
            n_total += 1;
            if let Some(d) = s.filter(|d| *d <= r_max) {
                sorted_samples.push(d);
            }
        }
        sorted_samples.sort_by(f64::total_cmp);
        Ok(Self {
            n_censored: n_total - sorted_samples.len(),
            sorted_samples,
            n_total,
            r_max,
        })
    }

    pub fn sorted_samples(&self) -> &[f64] {
        &self.sorted_samples
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn n_censored(&self) -> usize {
        self.n_censored
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn censored_fraction(&self) -> f64 {
        if self.n_total == 0 {
            0.0
        } else {
            self.n_censored as f64 / self.n_total as f64
        }
    }

    /// `#{samples ≤ r} / n_total` for `0 ≤ r ≤ r_max`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if r > self.r_max {
            return Err(Error::Censored {
                r,
                r_max: self.r_max,
            });
        }
        if self.n_total == 0 {
            return Ok(0.0);
        }
        let count = self.sorted_samples.partition_point(|&s| s <= r);
        Ok(count as f64 / self.n_total as f64)
    }

    /// One distance per line, uncensored samples first in ascending order,
    /// then one `inf` line per censored realization.
    pub fn write_raw<W: Write>(&self, mut out: W) -> io::Result<()> {
        for s in &self.sorted_samples {
            writeln!(out, "{s}")?;
        }
        for _ in 0..self.n_censored {
            writeln!(out, "inf")?;
        }
        Ok(())
    }
}

/// Free-function form of [`EmpiricalCdf::eval`].
pub fn empirical_cdf_eval(ecdf: &EmpiricalCdf, r: f64) -> Result<f64> {
    ecdf.eval(r)
}

/// Contact distance from the origin, one sample per realization.
pub fn sample_contact_distance(
    params: &McpParams,
    config: &SimulationConfig,
) -> Result<EmpiricalCdf> {
    let samples = run_realizations(config, |rng| {
        let points = sample_mcp_capped(params, config.r_max, config.point_cap, rng)?;
        Ok(points.contact_distance())
    })?;
    EmpiricalCdf::from_samples(samples, config.r_max)
}

/// Whether the palm sampler includes the independent copy of the process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PalmMode {
    Full,
    /// Only the typical point's own cluster; isolates its survival factor.
    OwnClusterOnly,
}

/// One draw of the typical point's neighborhood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PalmDraw {
    /// Distance from the typical point to its own cluster center.
    pub x0: f64,
    /// Points in the own cluster, the typical point included.
    pub own_cluster_size: u64,
    /// Nearest-neighbor distance, `None` if nothing lies within `r_max`.
    pub distance: Option<f64>,
}

/// Samples the typical point's surroundings under the reduced palm
/// distribution, with the typical point at the origin:
///
/// 1. the own-cluster center sits at distance `x0 = r_d √U` (density
///    `2 x0 / r_d²`) in a uniform direction;
/// 2. the own cluster holds the typical point plus `Poisson(m̄)` others,
///    uniform on the cluster disk, which gives the size-biased cluster law;
/// 3. the rest of the process is an independent MCP realization.
pub fn palm_draws(
    params: &McpParams,
    config: &SimulationConfig,
    mode: PalmMode,
) -> Result<Vec<PalmDraw>> {
    let r_d = params.r_d();
    run_realizations(config, |rng| {
        let x0 = r_d * rng.random::<f64>().sqrt();
        let center = Point::polar(x0, 2.0 * PI * rng.random::<f64>());
        let siblings = poisson(rng, params.m_bar());
        let mut nearest = (0..siblings)
            .map(|_| uniform_in_disk(rng, center, r_d).norm())
            .min_by(f64::total_cmp);
        if mode == PalmMode::Full {
            let others = sample_mcp_capped(params, config.r_max, config.point_cap, rng)?;
            nearest = match (nearest, others.contact_distance()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        Ok(PalmDraw {
            x0,
            own_cluster_size: siblings + 1,
            distance: nearest.filter(|d| *d <= config.r_max),
        })
    })
}

/// Nearest-neighbor distance of the typical point via [`palm_draws`].
pub fn sample_nn_distance_palm(
    params: &McpParams,
    config: &SimulationConfig,
) -> Result<EmpiricalCdf> {
    let draws = palm_draws(params, config, PalmMode::Full)?;
    EmpiricalCdf::from_samples(draws.iter().map(|d| d.distance), config.r_max)
}

/// One draw of the window-based sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowDraw {
    /// Size of the cluster the chosen reference point belongs to.
    pub own_cluster_size: u64,
    pub distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowDraws {
    pub draws: Vec<WindowDraw>,
    /// Realizations discarded because the reference disk was empty.
    pub redraws: u64,
}

impl WindowDraws {
    pub fn redraw_rate(&self) -> f64 {
        let attempts = self.draws.len() as f64 + self.redraws as f64;
        if attempts == 0.0 {
            0.0
        } else {
            self.redraws as f64 / attempts
        }
    }
}

/// Window radius giving roughly a hundred clusters in the reference disk.
pub fn default_window_radius(params: &McpParams, r_max: f64) -> f64 {
    r_max + params.r_d() + (100.0 / (PI * params.lambda_p())).sqrt()
}

/// Nearest-neighbor sampling from whole realizations: generate the process
/// on a large window, pick a point uniformly among those within
/// `window_radius - r_max` of the origin and measure its distance to the
/// closest other point. Clusters get picked in proportion to their size
/// without any explicit weighting. Realizations with no eligible point are
/// redrawn from the same stream.
pub fn window_draws(
    params: &McpParams,
    config: &SimulationConfig,
    window_radius: f64,
) -> Result<WindowDraws> {
    if !(window_radius > config.r_max) {
        return Err(Error::InvalidParameter {
            name: "window_radius",
            value: window_radius,
            reason: "must exceed r_max so reference neighborhoods are fully generated",
        });
    }
    let reference_radius = window_radius - config.r_max;
    let per_realization = run_realizations(config, |rng| {
        let mut redraws = 0;
        loop {
            let points = sample_mcp_capped(params, window_radius, config.point_cap, rng)?;
            match draw_reference(&points, reference_radius, config.r_max, rng) {
                Some(draw) => return Ok((draw, redraws)),
                None => {
                    redraws += 1;
                    if redraws >= MAX_CONSECUTIVE_REDRAWS {
                        return Err(Error::InvalidParameter {
                            name: "window_radius",
                            value: window_radius,
                            reason: "reference disk is almost never occupied",
                        });
                    }
                }
            }
        }
    })?;
    let redraws = per_realization.iter().map(|(_, r)| r).sum();
    Ok(WindowDraws {
        draws: per_realization.into_iter().map(|(d, _)| d).collect(),
        redraws,
    })
}

/// Picks a reference point uniformly among the points of `points` within
/// `reference_radius` of the origin and measures its nearest-neighbor
/// distance. `None` when no point is eligible.
pub fn draw_reference<R: Rng + ?Sized>(
    points: &PointSet,
    reference_radius: f64,
    r_max: f64,
    rng: &mut R,
) -> Option<WindowDraw> {
    let eligible: Vec<(usize, usize)> = points
        .clusters
        .iter()
        .enumerate()
        .flat_map(|(c, pts)| {
            pts.iter()
                .enumerate()
                .filter(|(_, p)| p.norm() <= reference_radius)
                .map(move |(k, _)| (c, k))
        })
        .collect();
    if eligible.is_empty() {
        return None;
    }
    let (c, k) = eligible[rng.random_range(0..eligible.len())];
    let reference = points.clusters[c][k];
    let nearest = points
        .clusters
        .iter()
        .enumerate()
        .flat_map(|(ci, pts)| {
            pts.iter()
                .enumerate()
                .filter(move |(ki, _)| (ci, *ki) != (c, k))
                .map(|(_, p)| p)
        })
        .map(|p| p.distance(&reference))
        .min_by(f64::total_cmp);
    Some(WindowDraw {
        own_cluster_size: points.clusters[c].len() as u64,
        distance: nearest.filter(|d| *d <= r_max),
    })
}

/// Nearest-neighbor distance via [`window_draws`]. Warns on stderr when more
/// than half the realizations had to be redrawn.
pub fn sample_nn_distance_window(
    params: &McpParams,
    config: &SimulationConfig,
    window_radius: f64,
) -> Result<EmpiricalCdf> {
    let draws = window_draws(params, config, window_radius)?;
    if draws.redraw_rate() > 0.5 {
        eprintln!(
            "warning: window sampler redrew {:.0}% of realizations; enlarge the window",
            100.0 * draws.redraw_rate()
        );
    }
    EmpiricalCdf::from_samples(draws.draws.iter().map(|d| d.distance), config.r_max)
}
