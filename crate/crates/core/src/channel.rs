//! Channel realizations per link: Rayleigh or Rician fading with a fixed
//! line-of-sight component, scaled by distance-based path loss.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrixkit::{sample_complex_gaussian, ComplexMatrix};

/// Distances below this are clamped before path loss is applied.
pub const MIN_LINK_DISTANCE: f64 = 1e-6;

/// Fixed line-of-sight matrix shape.
#[derive(Debug, Clone, PartialEq)]
pub enum LosPrototype {
    /// Rank-one all-ones matrix.
    PoorlyConditioned,
    /// ±1 matrix with orthogonal rows: `[[1, -1], [1, 1]]` and its
    /// Kronecker powers for 4 and 8 antennas.
    WellConditioned,
    /// Caller-supplied matrix. Rejected unless its squared Frobenius norm
    /// equals `rows·cols`, or `normalize` is set, in which case it is
    /// rescaled to that norm.
    Custom {
        matrix: ComplexMatrix,
        normalize: bool,
    },
}

impl LosPrototype {
    pub fn label(&self) -> &'static str {
        match self {
            LosPrototype::PoorlyConditioned => "poor",
            LosPrototype::WellConditioned => "well",
            LosPrototype::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FadingModel {
    Rayleigh,
    /// `k_factor` is the linear LOS-to-scatter power ratio.
    Rician {
        k_factor: f64,
        los: LosPrototype,
    },
}

impl FadingModel {
    pub fn rician(k_factor: f64, los: LosPrototype) -> Self {
        FadingModel::Rician { k_factor, los }
    }

    pub fn validate(&self) -> Result<()> {
        if let FadingModel::Rician { k_factor, .. } = self {
            if !(k_factor.is_finite() && *k_factor >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "Rician K must be finite and non-negative, got {k_factor}"
                )));
            }
        }
        Ok(())
    }

    /// Pre-resolves the LOS component for a `rows × cols` link.
    pub fn resolve(&self, rows: usize, cols: usize) -> Result<LinkSampler> {
        self.validate()?;
        let (los, los_weight, nlos_weight) = match self {
            FadingModel::Rayleigh => (None, 0.0, 1.0),
            FadingModel::Rician { k_factor, los } => {
                let k = *k_factor;
                (
                    Some(resolve_los(los, rows, cols)?),
                    (k / (k + 1.0)).sqrt(),
                    (1.0 / (k + 1.0)).sqrt(),
                )
            }
        };
        Ok(LinkSampler {
            rows,
            cols,
            los,
            los_weight,
            nlos_weight,
        })
    }

    /// Unit-distance channel: `√(K/(K+1))·H_LOS + √(1/(K+1))·H_NLOS`.
    pub fn sample_normalized<R: Rng + ?Sized>(
        &self,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Result<ComplexMatrix> {
        self.resolve(rows, cols)?.sample(rng)
    }
}

/// A fading model bound to one link size, with its LOS matrix resolved.
#[derive(Debug, Clone)]
pub struct LinkSampler {
    rows: usize,
    cols: usize,
    los: Option<ComplexMatrix>,
    los_weight: f64,
    nlos_weight: f64,
}

impl LinkSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ComplexMatrix> {
        let nlos = sample_complex_gaussian(self.rows, self.cols, rng)?;
        Ok(match &self.los {
            None => nlos,
            Some(los) => los
                .scaled(self.los_weight)
                .add(&nlos.scaled(self.nlos_weight))
                .expect("LOS resolved at link size"),
        })
    }
}

fn well_conditioned_base() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[1.0, 1.0]]).expect("2x2 literal")
}

/// Normalized LOS matrix with squared Frobenius norm `rows·cols`.
pub fn resolve_los(proto: &LosPrototype, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "LOS matrix needs positive dimensions, got {rows}x{cols}"
        )));
    }
    match proto {
        LosPrototype::PoorlyConditioned => {
            ComplexMatrix::from_vec(rows, cols, vec![Complex64::new(1.0, 0.0); rows * cols])
        }
        LosPrototype::WellConditioned => {
            if rows != cols || !matches!(rows, 2 | 4 | 8) {
                return Err(Error::UnsupportedSize {
                    rows,
                    cols,
                    reason: "well-conditioned LOS is defined for square 2, 4 or 8 antenna links"
                        .into(),
                });
            }
            let base = well_conditioned_base();
            let mut m = base.clone();
            while m.rows() < rows {
                m = m.kron(&base);
            }
            Ok(m)
        }
        LosPrototype::Custom { matrix, normalize } => {
            if matrix.rows() != rows || matrix.cols() != cols {
                return Err(Error::InvalidArgument(format!(
                    "custom LOS is {}x{}, link is {rows}x{cols}",
                    matrix.rows(),
                    matrix.cols()
                )));
            }
            let target = (rows * cols) as f64;
            let norm_sq = matrix.frobenius_norm_sq();
            if (norm_sq - target).abs() <= 1e-9 * target {
                Ok(matrix.clone())
            } else if *normalize && norm_sq > 0.0 {
                Ok(matrix.scaled((target / norm_sq).sqrt()))
            } else {
                Err(Error::InvalidArgument(format!(
                    "custom LOS has squared Frobenius norm {norm_sq}, expected {target}"
                )))
            }
        }
    }
}

/// Path-loss amplitude factor `d^(−α/2)`, with `d` clamped at
/// [`MIN_LINK_DISTANCE`].
#[inline]
pub fn path_loss_amplitude(distance: f64, alpha: f64) -> f64 {
    distance.max(MIN_LINK_DISTANCE).powf(-alpha / 2.0)
}

/// Received power gain `d^(−α)`, with the same clamp.
#[inline]
pub fn path_loss_power(distance: f64, alpha: f64) -> f64 {
    distance.max(MIN_LINK_DISTANCE).powf(-alpha)
}

/// One channel realization including path loss.
pub fn sample_link<R: Rng + ?Sized>(
    model: &FadingModel,
    rows: usize,
    cols: usize,
    distance: f64,
    alpha: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if !(distance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "link distance must be positive, got {distance}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "path-loss exponent must be positive, got {alpha}"
        )));
    }
    Ok(model
        .sample_normalized(rows, cols, rng)?
        .scaled(path_loss_amplitude(distance, alpha)))
}

/// Law-of-cosines distance between a destination at `(r_d, φ)` and a
/// relay at `(r_r, 0)`.
pub fn relay_dest_distance(r_d: f64, r_r: f64, phi: f64) -> f64 {
    (r_d * r_d + r_r * r_r - 2.0 * r_d * r_r * phi.cos())
        .max(0.0)
        .sqrt()
}

/// Serving relay for a destination direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    /// Zero-based index of the nearest relay (relay `n` sits at angle
    /// `n·θ_cov`).
    pub relay: usize,
    /// Angular distance to that relay, in `[0, π/L]`.
    pub phi: f64,
    /// Zero-based index of the adjacent relay on the destination's side.
    pub neighbor: usize,
    /// Angular distance to `neighbor`, `θ_cov − φ`.
    pub neighbor_phi: f64,
}

/// Polar layout: source at the origin, `relay_count` relays evenly spaced
/// on a circle of `relay_radius`, destination at `(dest_radius,
/// dest_angle)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkGeometry {
    pub relay_radius: f64,
    pub relay_count: usize,
    pub dest_radius: f64,
    pub dest_angle: f64,
}

impl NetworkGeometry {
    pub fn new(
        relay_radius: f64,
        relay_count: usize,
        dest_radius: f64,
        dest_angle: f64,
    ) -> Result<Self> {
        if relay_count == 0 {
            return Err(Error::InvalidArgument(
                "relay count must be at least 1".into(),
            ));
        }
        if !(relay_radius >= 0.0 && dest_radius >= 0.0) {
            return Err(Error::InvalidArgument("radii must be non-negative".into()));
        }
        Ok(Self {
            relay_radius,
            relay_count,
            dest_radius,
            dest_angle,
        })
    }

    /// Sector angle `2π/L`.
    pub fn coverage_angle(&self) -> f64 {
        TAU / self.relay_count as f64
    }

    pub fn relay_angle(&self, index: usize) -> f64 {
        index as f64 * self.coverage_angle()
    }

    pub fn sector(&self) -> Sector {
        sector_of(self.relay_count, self.dest_angle)
    }

    pub fn link_distances(&self) -> LinkDistances {
        let s = self.sector();
        LinkDistances {
            source_relay: self.relay_radius,
            source_dest: self.dest_radius,
            relay_dest: relay_dest_distance(self.dest_radius, self.relay_radius, s.phi),
            second_relay_dest: relay_dest_distance(
                self.dest_radius,
                self.relay_radius,
                s.neighbor_phi,
            ),
        }
    }
}

/// Nearest relay to direction `theta` among `relay_count` evenly spaced
/// relays. Ties resolve to the lower relay index.
pub fn sector_of(relay_count: usize, theta: f64) -> Sector {
    assert!(relay_count >= 1, "sector_of needs at least one relay");
    let cov = TAU / relay_count as f64;
    let half = cov / 2.0;
    let t = theta.rem_euclid(TAU);
    let k = ((t / cov).floor() as usize).min(relay_count - 1);
    let off = (t - k as f64 * cov).clamp(0.0, cov);
    let next = (k + 1) % relay_count;
    let tie = (off - half).abs() <= 1e-12 * cov.max(1.0);
    let (relay, phi, neighbor) = if tie {
        let (lo, hi) = if k < next { (k, next) } else { (next, k) };
        (lo, half, hi)
    } else if off < half {
        (k, off, next)
    } else {
        (next, cov - off, k)
    };
    let phi = phi.min(PI / relay_count as f64);
    Sector {
        relay,
        phi,
        neighbor,
        neighbor_phi: cov - phi,
    }
}

/// Distances of the links involved in one relay-network evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkDistances {
    /// `r_R`
    pub source_relay: f64,
    /// `r_D`
    pub source_dest: f64,
    /// `r_DR` to the serving relay
    pub relay_dest: f64,
    /// distance to the cooperating neighbor relay
    pub second_relay_dest: f64,
}

impl LinkDistances {
    /// Single-relay layout in Cartesian coordinates, source at the origin.
    pub fn from_cartesian(relay: (f64, f64), dest: (f64, f64)) -> Self {
        let d = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        let relay_dest = d(relay, dest);
        Self {
            source_relay: d((0.0, 0.0), relay),
            source_dest: d((0.0, 0.0), dest),
            relay_dest,
            second_relay_dest: f64::INFINITY,
        }
    }
}
