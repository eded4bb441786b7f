//! Relay placement and polar coverage regions.
//!
//! Every solver here probes a [`ChannelEnsemble`] drawn once from a fixed
//! seed, so the rate it bisects on is a deterministic function of the
//! geometry.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{ChannelEnsemble, MinMode, RelayView, ScenarioConfig};
use crate::channel::{relay_dest_distance, sector_of, LinkDistances};
use crate::error::{Error, Result};
use crate::mc::{BoundEstimate, McConfig};

/// Default relay back-off applied to the optimal radius before sweeping
/// coverage.
pub const DEFAULT_BACKOFF: f64 = 0.95;

/// Bracket and stopping rule for the radius solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub r_lo: f64,
    pub r_hi: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Grid cells scanned outward-in before bisecting, for rates that are
    /// not monotone along a ray (the destination passes the relay).
    pub scan_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            r_lo: 0.05,
            r_hi: 10.0,
            tol: 1e-4,
            max_iter: 100,
            scan_steps: 64,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_lo > 0.0) {
            return Err(Error::validation("r_lo", "must be positive"));
        }
        if !(self.r_lo < self.r_hi) {
            return Err(Error::validation("r_hi", "must exceed r_lo"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::validation("tol", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::validation("max_iter", "must be at least 1"));
        }
        if self.scan_steps == 0 {
            return Err(Error::validation("scan_steps", "must be at least 1"));
        }
        Ok(())
    }

    /// Iteration bound `⌈log₂((r_hi − r_lo)/tol)⌉`.
    pub fn iteration_bound(&self) -> usize {
        ((self.r_hi - self.r_lo) / self.tol).log2().ceil().max(0.0) as usize
    }
}

/// Rate used to decide whether a destination is covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RateMetric {
    /// `min(C3, C2)`: both relay and destination decode.
    #[default]
    Df,
    /// `min(C1, C2)`.
    CutSet,
    /// `min(C3, C_coop)`: the destination also hears the neighbor relay.
    CooperativeDf,
}

impl RateMetric {
    pub fn label(&self) -> &'static str {
        match self {
            RateMetric::Df => "df",
            RateMetric::CutSet => "cutset",
            RateMetric::CooperativeDf => "coop_df",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveragePoint {
    /// Direction in radians.
    pub theta: f64,
    /// Largest covered radius; 0 when no radius reaches the rate.
    pub r_max: f64,
}

/// Polar coverage boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRegion {
    pub entries: Vec<CoveragePoint>,
    pub rate_target: f64,
    pub metric: RateMetric,
    pub relay_radius: f64,
    pub relay_count: usize,
}

impl CoverageRegion {
    pub fn radii(&self) -> Vec<f64> {
        self.entries.iter().map(|p| p.r_max).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.iter().all(|p| p.r_max == 0.0)
    }
}

/// Outcome of a bracketed radius search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusSolution {
    /// Largest radius known to satisfy the rate (0 if none).
    pub radius: f64,
    pub found: bool,
    pub iterations: usize,
    /// Final bracket: `lo` satisfies the rate, `hi` does not.
    pub bracket: (f64, f64),
}

impl RadiusSolution {
    fn none() -> Self {
        Self {
            radius: 0.0,
            found: false,
            iterations: 0,
            bracket: (0.0, 0.0),
        }
    }
}

/// Bisection for the boundary between a feasible `lo` and an infeasible
/// `hi`. Returns the final bracket and the iteration count.
pub fn bisect_feasible_edge<F>(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
    feasible: F,
) -> ((f64, f64), usize)
where
    F: Fn(f64) -> bool,
{
    let mut iterations = 0;
    while hi - lo > tol && iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    ((lo, hi), iterations)
}

/// Largest relay radius whose source-relay rate still reaches the target,
/// solved on a pre-drawn ensemble.
pub fn solve_relay_radius(ens: &ChannelEnsemble, solver: &SolverConfig) -> Result<RadiusSolution> {
    solver.validate()?;
    let target = ens.scenario().rate_target;
    let feasible = |r: f64| ens.c3(r).mean >= target;
    if !feasible(solver.r_lo) {
        return Err(Error::NoSolution(format!(
            "source-relay rate at r_lo = {} is below {target}",
            solver.r_lo
        )));
    }
    if feasible(solver.r_hi) {
        return Err(Error::BracketFailure(format!(
            "source-relay rate still reaches {target} at r_hi = {}; widen the bracket",
            solver.r_hi
        )));
    }
    let (bracket, iterations) = bisect_feasible_edge(
        solver.r_lo,
        solver.r_hi,
        solver.tol,
        solver.max_iter,
        feasible,
    );
    Ok(RadiusSolution {
        radius: bracket.0,
        found: true,
        iterations,
        bracket,
    })
}

/// Largest relay radius `r` with `C3(r) ≥ R_c`.
pub fn optimal_relay_radius(
    scn: &ScenarioConfig,
    mc: &McConfig,
    solver: &SolverConfig,
) -> Result<f64> {
    let ens = ChannelEnsemble::draw(scn, mc)?;
    solve_relay_radius(&ens, solver).map(|s| s.radius)
}

/// Source-relay rate at each radius, on one ensemble.
pub fn rate_vs_relay_radius(
    scn: &ScenarioConfig,
    mc: &McConfig,
    radii: &[f64],
) -> Result<Vec<(f64, BoundEstimate)>> {
    if let Some(r) = radii.iter().find(|&&r| !(r > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "relay radius must be positive, got {r}"
        )));
    }
    let ens = ChannelEnsemble::draw(scn, mc)?;
    Ok(radii.iter().map(|&r| (r, ens.c3(r))).collect())
}

/// Angular position of a destination relative to its relays.
#[derive(Debug, Clone, Copy, PartialEq)]
struct RayGeometry {
    phi: f64,
    neighbor_phi: f64,
}

fn ray_distances(view: &RelayView<'_>, ray: RayGeometry, r_d: f64) -> LinkDistances {
    let r_r = view.relay_radius();
    LinkDistances {
        source_relay: r_r,
        source_dest: r_d,
        relay_dest: relay_dest_distance(r_d, r_r, ray.phi),
        second_relay_dest: relay_dest_distance(r_d, r_r, ray.neighbor_phi),
    }
}

fn ray_rate(
    view: &RelayView<'_>,
    ray: RayGeometry,
    r_d: f64,
    metric: RateMetric,
    mode: MinMode,
) -> f64 {
    let d = ray_distances(view, ray, r_d);
    match metric {
        RateMetric::Df => view.df(&d, mode).mean,
        RateMetric::CutSet => view.cutset(&d, mode).mean,
        RateMetric::CooperativeDf => view.coop_df(&d, mode).mean,
    }
}

/// Outermost covered radius along one ray. Scans the bracket from the
/// outside in, then bisects inside the first feasible grid cell.
fn solve_ray(
    view: &RelayView<'_>,
    ray: RayGeometry,
    target: f64,
    metric: RateMetric,
    mode: MinMode,
    solver: &SolverConfig,
) -> Result<RadiusSolution> {
    let feasible = |r: f64| ray_rate(view, ray, r, metric, mode) >= target;
    if feasible(solver.r_hi) {
        return Err(Error::BracketFailure(format!(
            "rate still reaches {target} at r_hi = {}; widen the bracket",
            solver.r_hi
        )));
    }
    let step = (solver.r_hi - solver.r_lo) / solver.scan_steps as f64;
    let grid = |k: usize| {
        if k == solver.scan_steps {
            solver.r_hi
        } else {
            solver.r_lo + step * k as f64
        }
    };
    let Some(k) = (0..solver.scan_steps).rev().find(|&k| feasible(grid(k))) else {
        return Ok(RadiusSolution::none());
    };
    let (bracket, iterations) =
        bisect_feasible_edge(grid(k), grid(k + 1), solver.tol, solver.max_iter, feasible);
    Ok(RadiusSolution {
        radius: bracket.0,
        found: true,
        iterations,
        bracket,
    })
}

/// Options shared by the boundary sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub metric: RateMetric,
    pub min_mode: MinMode,
    /// Solve only `[0, π/L]` and mirror/rotate the rest. Needs
    /// `angular_steps` divisible by `2L`; otherwise every angle is solved.
    pub use_symmetry: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            metric: RateMetric::Df,
            min_mode: MinMode::PerSample,
            use_symmetry: true,
        }
    }
}

/// Largest destination radius along direction `theta_d` whose rate
/// reaches the target, with `relay_count` relays at `view`'s radius.
pub fn solve_coverage_radius(
    view: &RelayView<'_>,
    theta_d: f64,
    relay_count: usize,
    options: &SweepOptions,
    solver: &SolverConfig,
) -> Result<RadiusSolution> {
    solver.validate()?;
    if relay_count == 0 {
        return Err(Error::InvalidArgument(
            "relay count must be at least 1".into(),
        ));
    }
    let s = sector_of(relay_count, theta_d);
    let ray = RayGeometry {
        phi: s.phi,
        neighbor_phi: s.neighbor_phi,
    };
    let target = view_target(view);
    solve_ray(view, ray, target, options.metric, options.min_mode, solver)
}

fn view_target(view: &RelayView<'_>) -> f64 {
    view.ensemble().scenario().rate_target
}

/// `max_coverage_radius` with a fresh ensemble: returns the radius, 0 when
/// nothing is covered along the ray.
pub fn max_coverage_radius(
    scn: &ScenarioConfig,
    r_r: f64,
    theta_d: f64,
    relay_count: usize,
    mc: &McConfig,
    solver: &SolverConfig,
) -> Result<RadiusSolution> {
    let ens = ChannelEnsemble::draw(scn, mc)?;
    let view = ens.with_relay(r_r);
    solve_coverage_radius(
        &view,
        theta_d,
        relay_count,
        &SweepOptions::default(),
        solver,
    )
}

/// Coverage boundary at `angular_steps` evenly spaced directions on a
/// pre-drawn ensemble.
pub fn sweep_boundary(
    view: &RelayView<'_>,
    relay_count: usize,
    angular_steps: usize,
    options: &SweepOptions,
    solver: &SolverConfig,
) -> Result<CoverageRegion> {
    solver.validate()?;
    if relay_count == 0 {
        return Err(Error::InvalidArgument(
            "relay count must be at least 1".into(),
        ));
    }
    if angular_steps < 4 * relay_count {
        return Err(Error::InvalidArgument(format!(
            "angular_steps = {angular_steps} cannot resolve {relay_count} lobes (need >= {})",
            4 * relay_count
        )));
    }
    if options.metric == RateMetric::CooperativeDf && relay_count < 2 {
        return Err(Error::InvalidArgument(
            "cooperation needs at least 2 relays".into(),
        ));
    }
    let target = view_target(view);
    let cov = TAU / relay_count as f64;
    let d_theta = TAU / angular_steps as f64;
    let thetas: Vec<f64> = (0..angular_steps).map(|k| k as f64 * d_theta).collect();

    let symmetric = options.use_symmetry && angular_steps.is_multiple_of(2 * relay_count);
    let radii: Vec<f64> = if symmetric {
        let per_sector = angular_steps / relay_count;
        let folded: Vec<usize> = (0..angular_steps)
            .map(|k| {
                let j = k % per_sector;
                j.min(per_sector - j)
            })
            .collect();
        let unique: Vec<f64> = (0..=per_sector / 2)
            .into_par_iter()
            .map(|j| {
                let phi = j as f64 * d_theta;
                let ray = RayGeometry {
                    phi,
                    neighbor_phi: cov - phi,
                };
                solve_ray(view, ray, target, options.metric, options.min_mode, solver)
                    .map(|s| s.radius)
            })
            .collect::<Result<_>>()?;
        folded.iter().map(|&j| unique[j]).collect()
    } else {
        thetas
            .par_iter()
            .map(|&theta| {
                let s = sector_of(relay_count, theta);
                let ray = RayGeometry {
                    phi: s.phi,
                    neighbor_phi: s.neighbor_phi,
                };
                solve_ray(view, ray, target, options.metric, options.min_mode, solver)
                    .map(|s| s.radius)
            })
            .collect::<Result<_>>()?
    };

    Ok(CoverageRegion {
        entries: thetas
            .into_iter()
            .zip(radii)
            .map(|(theta, r_max)| CoveragePoint { theta, r_max })
            .collect(),
        rate_target: target,
        metric: options.metric,
        relay_radius: view.relay_radius(),
        relay_count,
    })
}

/// Non-cooperative coverage boundary with `relay_count` relays at `r_r`.
pub fn coverage_boundary(
    scn: &ScenarioConfig,
    r_r: f64,
    relay_count: usize,
    angular_steps: usize,
    mc: &McConfig,
    solver: &SolverConfig,
    options: &SweepOptions,
) -> Result<CoverageRegion> {
    if options.metric == RateMetric::CooperativeDf {
        return Err(Error::InvalidArgument(
            "use coop_coverage_boundary for the cooperative metric".into(),
        ));
    }
    let ens = ChannelEnsemble::draw(scn, mc)?;
    sweep_boundary(
        &ens.with_relay(r_r),
        relay_count,
        angular_steps,
        options,
        solver,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{FadingModel, LosPrototype};
    use std::f64::consts::PI;

    fn closed_form_poor(rate: f64, alpha: f64) -> f64 {
        // log2(1 + 20 r^-α) = rate
        ((2f64.powf(rate) - 1.0) / 20.0).powf(-1.0 / alpha)
    }

    fn closed_form_well(rate: f64, alpha: f64) -> f64 {
        // 2 log2(1 + 10 r^-α) = rate
        ((2f64.powf(rate / 2.0) - 1.0) / 10.0).powf(-1.0 / alpha)
    }

    #[test]
    fn closed_form_inversions() {
        assert!((closed_form_poor(5.5, 3.52) - 0.798).abs() < 1e-3);
        assert!((closed_form_well(5.5, 3.52) - 1.172).abs() < 1e-3);
    }

    #[test]
    fn pure_los_relay_radius() {
        let mc = McConfig::new(3, 2000, 4).unwrap();
        for (los, want) in [
            (LosPrototype::PoorlyConditioned, closed_form_poor(5.5, 3.52)),
            (LosPrototype::WellConditioned, closed_form_well(5.5, 3.52)),
        ] {
            let scn = ScenarioConfig {
                fading_sr: FadingModel::rician(1e9, los),
                ..ScenarioConfig::default()
            };
            let r = optimal_relay_radius(&scn, &mc, &SolverConfig::default()).unwrap();
            assert!((r - want).abs() < 0.01, "{r} vs {want}");
        }
    }

    #[test]
    fn relay_radius_errors() {
        let mc = McConfig::new(3, 500, 2).unwrap();
        let hard = ScenarioConfig {
            rate_target: 60.0,
            ..ScenarioConfig::default()
        };
        assert!(matches!(
            optimal_relay_radius(&hard, &mc, &SolverConfig::default()),
            Err(Error::NoSolution(_))
        ));
        let narrow = SolverConfig {
            r_hi: 0.5,
            ..SolverConfig::default()
        };
        assert!(matches!(
            optimal_relay_radius(&ScenarioConfig::default(), &mc, &narrow),
            Err(Error::BracketFailure(_))
        ));
    }

    #[test]
    fn bisection_respects_iteration_bound_and_brackets_crossing() {
        let mc = McConfig::new(11, 4000, 4).unwrap();
        let ens = ChannelEnsemble::draw(&ScenarioConfig::default(), &mc).unwrap();
        let solver = SolverConfig::default();
        let sol = solve_relay_radius(&ens, &solver).unwrap();
        assert!(sol.iterations <= solver.iteration_bound());
        let (lo, hi) = sol.bracket;
        assert!(hi - lo <= solver.tol);
        assert!(ens.c3(lo).mean >= 5.5 && ens.c3(hi).mean < 5.5);
    }

    #[test]
    fn rate_table_is_decreasing_and_rejects_bad_radii() {
        let mc = McConfig::new(5, 3000, 4).unwrap();
        let radii: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
        let table = rate_vs_relay_radius(&ScenarioConfig::default(), &mc, &radii).unwrap();
        assert!(table.windows(2).all(|w| w[1].1.mean < w[0].1.mean));
        assert!(rate_vs_relay_radius(&ScenarioConfig::default(), &mc, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn doubling_power_adds_m_bits_at_high_snr() {
        let mc = McConfig::new(5, 20_000, 4).unwrap();
        let radii = [0.2, 0.3];
        let base = rate_vs_relay_radius(&ScenarioConfig::default(), &mc, &radii).unwrap();
        for (factor, bits) in [(2.0, 2.0), (4.0, 4.0)] {
            let scn = ScenarioConfig {
                p_s: 10.0 * factor,
                ..ScenarioConfig::default()
            };
            let up = rate_vs_relay_radius(&scn, &mc, &radii).unwrap();
            for (a, b) in base.iter().zip(&up) {
                let shift = b.1.mean - a.1.mean;
                assert!((shift - bits).abs() < 0.1, "factor {factor}: shift {shift}");
            }
        }
    }

    fn small_view_region(options: SweepOptions, steps: usize) -> CoverageRegion {
        let mc = McConfig::new(9, 3000, 4).unwrap();
        coverage_boundary(
            &ScenarioConfig::default(),
            0.95,
            4,
            steps,
            &mc,
            &SolverConfig::default(),
            &options,
        )
        .unwrap()
    }

    #[test]
    fn lobes_peak_on_relay_axes() {
        let region = small_view_region(SweepOptions::default(), 32);
        let r = region.radii();
        // relay axes at k = 0, 8, 16, 24; sector edges at 4, 12, 20, 28
        for axis in [0, 8, 16, 24] {
            let edge = axis + 4;
            assert!(r[axis] > r[edge]);
            for j in 1..4 {
                assert!(r[axis] >= r[axis + j] && r[axis + j] >= r[edge]);
            }
        }
        assert!(r.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn mirrored_sweep_matches_direct_sweep() {
        let solver = SolverConfig::default();
        let sym = small_view_region(SweepOptions::default(), 24);
        let direct = small_view_region(
            SweepOptions {
                use_symmetry: false,
                ..SweepOptions::default()
            },
            24,
        );
        for (a, b) in sym.entries.iter().zip(&direct.entries) {
            assert_eq!(a.theta, b.theta);
            assert!((a.r_max - b.r_max).abs() <= 2.0 * solver.tol);
        }
    }

    #[test]
    fn sweep_requires_enough_angles() {
        let mc = McConfig::new(9, 100, 1).unwrap();
        let err = coverage_boundary(
            &ScenarioConfig::default(),
            0.95,
            4,
            15,
            &mc,
            &SolverConfig::default(),
            &SweepOptions::default(),
        );
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn unreachable_rate_gives_zero_radius() {
        let mc = McConfig::new(1, 500, 2).unwrap();
        let scn = ScenarioConfig {
            rate_target: 40.0,
            ..ScenarioConfig::default()
        };
        let sol =
            max_coverage_radius(&scn, 0.95, PI / 4.0, 4, &mc, &SolverConfig::default()).unwrap();
        assert!(!sol.found);
        assert_eq!(sol.radius, 0.0);
    }
}
