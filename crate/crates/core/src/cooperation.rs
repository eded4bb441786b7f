//! Two cooperating relays (diamond topology): destination sum-rate,
//! closed-form approximations, Hata path-loss algebra and the coverage
//! extension factor.

use std::f64::consts::{LN_2, LOG2_E, PI};

use serde::{Deserialize, Serialize};

use crate::capacity::{ChannelEnsemble, MinMode, RelayView, ScenarioConfig};
use crate::channel::{path_loss_power, relay_dest_distance};
use crate::coverage::{sweep_boundary, CoverageRegion, RateMetric, SolverConfig, SweepOptions};
use crate::error::{Error, Result};
use crate::matrixkit::{singular_values, ComplexMatrix};
use crate::mc::{BoundEstimate, McConfig};
use crate::special::digamma;

/// `C(P_d) ≈ K1·log₂(1 + K2·P_d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumRateFit {
    pub k1: f64,
    pub k2: f64,
}

impl SumRateFit {
    pub fn eval(&self, p_d: f64) -> f64 {
        self.k1 * (self.k2 * p_d).ln_1p() / LN_2
    }
}

/// Hata-style propagation loss `PL(dB) = A + B·log₁₀ d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HataParams {
    pub a: f64,
    pub b: f64,
}

impl Default for HataParams {
    fn default() -> Self {
        Self { a: 120.0, b: 35.22 }
    }
}

impl HataParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.0) {
            return Err(Error::validation("hata_B", "must be positive"));
        }
        if !self.a.is_finite() {
            return Err(Error::validation("hata_A", "must be finite"));
        }
        Ok(())
    }
}

/// Destination sum-rate with the source and two relays.
pub fn estimate_coop_sum_rate(
    scn: &ScenarioConfig,
    r_d: f64,
    r_dr1: f64,
    r_dr2: f64,
    mc: &McConfig,
) -> Result<BoundEstimate> {
    for (name, v) in [("r_D", r_d), ("r_DR1", r_dr1), ("r_DR2", r_dr2)] {
        if !(v > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    Ok(ChannelEnsemble::draw(scn, mc)?.coop_sum_rate(r_d, r_dr1, r_dr2))
}

/// Jensen upper bound on one realization's sum-rate when the source and
/// relay links are taken as equal: `r·log₂(1 + (2ρ/N_r)·(1/r)·Σλᵢ²)`.
pub fn jensen_sum_rate_bound(h_dr: &ComplexMatrix, rho_dr: f64, n_r: usize) -> Result<f64> {
    if !(rho_dr > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "SNR must be positive, got {rho_dr}"
        )));
    }
    if n_r == 0 {
        return Err(Error::InvalidArgument("N_r must be at least 1".into()));
    }
    let r = n_r.min(h_dr.rows());
    let energy: f64 = singular_values(h_dr).iter().map(|s| s * s).sum();
    let rf = r as f64;
    Ok(rf * (1.0 + 2.0 * rho_dr / n_r as f64 * energy / rf).log2())
}

fn wishart_index_range(n_r: usize, m_d: usize) -> std::ops::RangeInclusive<usize> {
    (n_r.abs_diff(m_d) + 1)..=n_r.max(m_d)
}

/// High-SNR cooperative sum-rate,
/// `r·log₂(ρ/N_r) + Σ_{i=|N_r−M_d|+1}^{max(N_r,M_d)} E{log₂ χ²_{2i}}`,
/// with `E{ln χ²_{2i}} = ψ(i) + ln 2` and `ρ = 2ρ_dr`.
pub fn coop_high_snr_sum_rate(n_r: usize, m_d: usize, rho: f64) -> Result<f64> {
    check_high_snr_args(n_r, m_d, rho)?;
    let r = n_r.min(m_d) as f64;
    let chi: f64 = wishart_index_range(n_r, m_d)
        .map(|i| (digamma(i as f64) + LN_2) / LN_2)
        .sum();
    Ok(r * (rho / n_r as f64).log2() + chi)
}

/// Same expansion with the log-determinant moments of a Wishart matrix
/// built from CN(0, 1) entries, `Σ ψ(i)/ln 2`. Differs from
/// [`coop_high_snr_sum_rate`] by exactly `min(N_r, M_d)` bits: each
/// squared singular value of a CN(0, 1) matrix is half of a χ² variate.
pub fn coop_high_snr_sum_rate_unit_entries(n_r: usize, m_d: usize, rho: f64) -> Result<f64> {
    check_high_snr_args(n_r, m_d, rho)?;
    let r = n_r.min(m_d) as f64;
    let moments: f64 = wishart_index_range(n_r, m_d)
        .map(|i| digamma(i as f64) / LN_2)
        .sum();
    Ok(r * (rho / n_r as f64).log2() + moments)
}

fn check_high_snr_args(n_r: usize, m_d: usize, rho: f64) -> Result<()> {
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "SNR must be positive, got {rho}"
        )));
    }
    if n_r == 0 || m_d == 0 {
        return Err(Error::InvalidArgument(
            "antenna counts must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Low-SNR sum-rate `M_d·log₂(1 + ρ_dr)`.
pub fn low_snr_sum_rate(m_d: usize, rho_dr: f64) -> Result<f64> {
    if !(rho_dr > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "SNR must be positive, got {rho_dr}"
        )));
    }
    Ok(m_d as f64 * rho_dr.ln_1p() / LN_2)
}

/// Linearized low-SNR sum-rate `M_d·ρ_dr·log₂ e`.
pub fn low_snr_sum_rate_linear(m_d: usize, rho_dr: f64) -> Result<f64> {
    if !(rho_dr > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "SNR must be positive, got {rho_dr}"
        )));
    }
    Ok(m_d as f64 * rho_dr * LOG2_E)
}

/// Least-squares fit of `K1·log₂(1 + K2·P)` to `(P, rate)` points.
///
/// `K1` has a closed form for each `K2`; `K2` is searched on a log grid
/// over `[1e-4, 1e4]` and refined by golden-section search around the
/// best grid cell.
pub fn fit_k1_k2(points: &[(f64, f64)]) -> Result<SumRateFit> {
    if points.len() < 3 {
        return Err(Error::FitFailure(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|&(p, r)| !(p > 0.0 && r > 0.0 && p.is_finite() && r.is_finite()))
    {
        return Err(Error::FitFailure(
            "powers and rates must be positive and finite".into(),
        ));
    }
    let mut powers: Vec<f64> = points.iter().map(|p| p.0).collect();
    powers.sort_by(f64::total_cmp);
    if powers.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::FitFailure("powers must be distinct".into()));
    }

    let k1_for = |k2: f64| {
        let (num, den) = points.iter().fold((0.0, 0.0), |(n, d), &(p, r)| {
            let g = (k2 * p).ln_1p() / LN_2;
            (n + r * g, d + g * g)
        });
        num / den
    };
    let sse = |u: f64| {
        let k2 = 10f64.powf(u);
        let k1 = k1_for(k2);
        points
            .iter()
            .map(|&(p, r)| {
                let e = r - k1 * (k2 * p).ln_1p() / LN_2;
                e * e
            })
            .sum::<f64>()
    };

    const LO: f64 = -4.0;
    const HI: f64 = 4.0;
    const CELLS: usize = 160;
    let h = (HI - LO) / CELLS as f64;
    let best = (0..=CELLS)
        .map(|i| (i, sse(LO + h * i as f64)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    let mut a = LO + h * best.saturating_sub(1) as f64;
    let mut b = LO + h * (best + 1).min(CELLS) as f64;

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (sse(c), sse(d));
    for _ in 0..200 {
        if b - a <= 1e-13 {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sse(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sse(d);
        }
    }
    let k2 = 10f64.powf(0.5 * (a + b));
    let k1 = k1_for(k2);
    if !(k1 > 0.0 && k1.is_finite()) {
        return Err(Error::FitFailure(format!("degenerate fit (K1 = {k1})")));
    }
    Ok(SumRateFit { k1, k2 })
}

fn check_ratio_args(k2: f64, p_d: f64, gamma: f64) -> Result<()> {
    if !(k2 * p_d > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "K2·P_d must be positive, got {}",
            k2 * p_d
        )));
    }
    if !(gamma >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rate ratio must be >= 1, got {gamma}"
        )));
    }
    Ok(())
}

/// `P_d / P̂_d = K2·P_d / ((1 + K2·P_d)^γ − 1)`.
pub fn power_ratio(k2: f64, p_d: f64, gamma: f64) -> Result<f64> {
    check_ratio_args(k2, p_d, gamma)?;
    if gamma == 1.0 {
        return Ok(1.0);
    }
    let x = k2 * p_d;
    Ok(x / (gamma * x.ln_1p()).exp_m1())
}

/// `PL(dB) = A + B·log₁₀ d`.
pub fn hata_path_loss(params: &HataParams, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "distance must be positive, got {d}"
        )));
    }
    Ok(params.a + params.b * d.log10())
}

/// Distance at which a total transmit budget `p_max_t_db` leaves exactly
/// `p_d_db` at the receiver: `10^((P_maxT − P_d − A)/B)`.
pub fn max_distance(params: &HataParams, p_max_t_db: f64, p_d_db: f64) -> f64 {
    10f64.powf((p_max_t_db - p_d_db - params.a) / params.b)
}

/// Coverage extension factor in both orientations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionFactor {
    /// `(K2·P_d / ((1 + K2·P_d)^γ − 1))^(1/B)`, as the closed form reads.
    pub literal: f64,
    /// Reciprocal of `literal`; at least 1 for `γ ≥ 1`.
    pub coverage_gain: f64,
}

pub fn extension_factor(k2: f64, p_d: f64, gamma: f64, b: f64) -> Result<ExtensionFactor> {
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "B must be positive, got {b}"
        )));
    }
    let ratio = power_ratio(k2, p_d, gamma)?;
    if ratio == 1.0 {
        return Ok(ExtensionFactor {
            literal: 1.0,
            coverage_gain: 1.0,
        });
    }
    let literal = ratio.powf(1.0 / b);
    Ok(ExtensionFactor {
        literal,
        coverage_gain: 1.0 / literal,
    })
}

/// Cooperative coverage boundary: the destination hears its serving relay
/// and the adjacent relay on its side; relay decoding is unchanged.
pub fn coop_coverage_boundary(
    scn: &ScenarioConfig,
    r_r: f64,
    relay_count: usize,
    angular_steps: usize,
    mc: &McConfig,
    solver: &SolverConfig,
    use_symmetry: bool,
) -> Result<CoverageRegion> {
    if relay_count < 2 {
        return Err(Error::InvalidArgument(
            "cooperation needs at least 2 relays".into(),
        ));
    }
    let ens = ChannelEnsemble::draw(scn, mc)?;
    let options = SweepOptions {
        metric: RateMetric::CooperativeDf,
        min_mode: MinMode::PerSample,
        use_symmetry,
    };
    sweep_boundary(
        &ens.with_relay(r_r),
        relay_count,
        angular_steps,
        &options,
        solver,
    )
}

/// Non-cooperative and cooperative boundaries on the same draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageComparison {
    pub noncoop: CoverageRegion,
    pub coop: CoverageRegion,
}

impl CoverageComparison {
    /// `r_coop / r_noncoop` per angle; infinite where only the cooperative
    /// scheme covers, NaN where neither does.
    pub fn gains(&self) -> Vec<f64> {
        self.noncoop
            .entries
            .iter()
            .zip(&self.coop.entries)
            .map(|(n, c)| c.r_max / n.r_max)
            .collect()
    }
}

pub fn compare_coverage(
    view: &RelayView<'_>,
    relay_count: usize,
    angular_steps: usize,
    solver: &SolverConfig,
    use_symmetry: bool,
) -> Result<CoverageComparison> {
    let base = SweepOptions {
        metric: RateMetric::Df,
        min_mode: MinMode::PerSample,
        use_symmetry,
    };
    let noncoop = sweep_boundary(view, relay_count, angular_steps, &base, solver)?;
    let coop = sweep_boundary(
        view,
        relay_count,
        angular_steps,
        &SweepOptions {
            metric: RateMetric::CooperativeDf,
            ..base
        },
        solver,
    )?;
    Ok(CoverageComparison { noncoop, coop })
}

/// Extension-factor analysis at one destination position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub dest_radius: f64,
    pub phi: f64,
    pub noncoop_sum_rate: BoundEstimate,
    pub coop_sum_rate: BoundEstimate,
    /// Cooperative over non-cooperative sum-rate.
    pub gamma: f64,
    /// Linear received power `P_d` from the source and serving relay.
    pub received_power: f64,
    pub fit: SumRateFit,
    pub power_ratio: f64,
    /// `P̂_d = P_d / power_ratio`.
    pub required_power_noncoop: f64,
    pub factor: ExtensionFactor,
    pub hata: HataParams,
    pub p_max_t_db: f64,
    pub d_max: f64,
    pub d_max_hat: f64,
}

/// Power scales of the sum-rate curve fitted for `K1`, `K2`.
pub const FIT_POWER_SCALES: [f64; 9] = [0.01, 0.0316, 0.1, 0.316, 1.0, 3.16, 10.0, 31.6, 100.0];

/// Measures γ at a destination `(r_d, φ)` from its serving relay, fits the
/// sum-rate model by scaling both transmit powers, and evaluates the
/// extension factor.
pub fn extension_report(
    view: &RelayView<'_>,
    relay_count: usize,
    r_d: f64,
    phi: f64,
    hata: &HataParams,
    p_max_t_db: f64,
) -> Result<ExtensionReport> {
    hata.validate()?;
    if relay_count < 2 {
        return Err(Error::InvalidArgument(
            "cooperation needs at least 2 relays".into(),
        ));
    }
    if !(r_d > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "r_D must be positive, got {r_d}"
        )));
    }
    let ens = view.ensemble();
    let scn = ens.scenario();
    let r_r = view.relay_radius();
    let cov = 2.0 * PI / relay_count as f64;
    let r_dr = relay_dest_distance(r_d, r_r, phi);
    let r_dr2 = relay_dest_distance(r_d, r_r, cov - phi);

    let noncoop = ens.c2(r_d, r_dr);
    let coop = ens.coop_sum_rate(r_d, r_dr, r_dr2);
    let gamma = (coop.mean / noncoop.mean).max(1.0);

    let received_power =
        scn.p_s * path_loss_power(r_d, scn.alpha) + scn.p_r * path_loss_power(r_dr, scn.alpha);
    let points: Vec<(f64, f64)> = FIT_POWER_SCALES
        .iter()
        .map(|&s| {
            (
                s * received_power,
                ens.mac_sum_rate_scaled(r_d, r_dr, s).mean,
            )
        })
        .collect();
    let fit = fit_k1_k2(&points)?;
    let ratio = power_ratio(fit.k2, received_power, gamma)?;
    let factor = extension_factor(fit.k2, received_power, gamma, hata.b)?;
    let required = received_power / ratio;
    let db = |p: f64| 10.0 * p.log10();
    Ok(ExtensionReport {
        dest_radius: r_d,
        phi,
        noncoop_sum_rate: noncoop,
        coop_sum_rate: coop,
        gamma,
        received_power,
        fit,
        power_ratio: ratio,
        required_power_noncoop: required,
        factor,
        hata: *hata,
        p_max_t_db,
        d_max: max_distance(hata, p_max_t_db, db(received_power)),
        d_max_hat: max_distance(hata, p_max_t_db, db(required)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixkit::{gram, logdet_identity_plus, sample_complex_gaussian};
    use crate::mc::stream_rng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn jensen_examples() {
        let eye = ComplexMatrix::identity(2);
        assert_abs_diff_eq!(
            jensen_sum_rate_bound(&eye, 1.0, 2).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        let h2 = ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[1.0, 1.0]]).unwrap();
        assert_abs_diff_eq!(
            jensen_sum_rate_bound(&h2, 10.0, 2).unwrap(),
            2.0 * 21f64.log2(),
            epsilon = 1e-12
        );
        assert!(jensen_sum_rate_bound(&h2, 0.0, 2).is_err());
    }

    #[test]
    fn jensen_bounds_realizations() {
        let mut rng = stream_rng(17, 0);
        for i in 0..2000 {
            let h = sample_complex_gaussian(2, 2, &mut rng).unwrap();
            let rho = 10f64.powf((i % 7) as f64 - 3.0);
            let exact = logdet_identity_plus(&gram(&h).scaled(2.0 * rho / 2.0)).unwrap();
            assert!(jensen_sum_rate_bound(&h, rho, 2).unwrap() >= exact - 1e-12);
        }
    }

    #[test]
    fn high_snr_chi_square_sum() {
        let chi = coop_high_snr_sum_rate(2, 2, 2.0).unwrap();
        // ρ/N_r = 1, so only the χ² terms remain
        assert_abs_diff_eq!(chi, 1.7772, epsilon = 1e-4);
        assert_abs_diff_eq!(
            coop_high_snr_sum_rate(2, 2, 100.0).unwrap(),
            13.065,
            epsilon = 1e-3
        );
        let unit = coop_high_snr_sum_rate_unit_entries(2, 2, 100.0).unwrap();
        assert_abs_diff_eq!(
            coop_high_snr_sum_rate(2, 2, 100.0).unwrap() - unit,
            2.0,
            epsilon = 1e-12
        );
        assert!(coop_high_snr_sum_rate(2, 2, 0.0).is_err());
    }

    #[test]
    fn unit_entry_expansion_matches_monte_carlo() {
        let rho = 1e4;
        let mut rng = stream_rng(5, 0);
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| {
                let h = sample_complex_gaussian(2, 2, &mut rng).unwrap();
                let g = gram(&h).scaled(rho / 2.0);
                // det of the 2x2 Hermitian matrix, no identity term
                (g[(0, 0)].re * g[(1, 1)].re - g[(0, 1)].norm_sqr()).log2()
            })
            .sum::<f64>()
            / n as f64;
        let closed = coop_high_snr_sum_rate_unit_entries(2, 2, rho).unwrap();
        assert!((mean - closed).abs() < 0.05, "{mean} vs {closed}");
    }

    #[test]
    fn low_snr_examples() {
        assert_abs_diff_eq!(
            low_snr_sum_rate(2, 0.01).unwrap(),
            2.0 * 1.01f64.log2(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(low_snr_sum_rate(2, 0.01).unwrap(), 0.0287, epsilon = 1e-4);
        for rho in [1e-3, 1e-5, 1e-8] {
            let ratio =
                low_snr_sum_rate(2, rho).unwrap() / low_snr_sum_rate_linear(2, rho).unwrap();
            assert!((ratio - 1.0).abs() < rho);
        }
    }

    #[test]
    fn fit_recovers_exact_model() {
        let truth = SumRateFit { k1: 2.0, k2: 5.0 };
        let pts: Vec<(f64, f64)> = [0.1, 0.5, 1.0, 3.0, 10.0, 40.0]
            .iter()
            .map(|&p| (p, truth.eval(p)))
            .collect();
        let fit = fit_k1_k2(&pts).unwrap();
        assert!(
            (fit.k1 - 2.0).abs() < 1e-6 && (fit.k2 - 5.0).abs() < 1e-6,
            "{fit:?}"
        );

        let low: Vec<(f64, f64)> = [0.001, 0.01, 0.1, 1.0]
            .iter()
            .map(|&p| (p, low_snr_sum_rate(2, p).unwrap()))
            .collect();
        let fit = fit_k1_k2(&low).unwrap();
        assert!(
            (fit.k1 - 2.0).abs() < 1e-6 && (fit.k2 - 1.0).abs() < 1e-6,
            "{fit:?}"
        );
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        assert!(matches!(
            fit_k1_k2(&[(1.0, 2.0); 4]),
            Err(Error::FitFailure(_))
        ));
        assert!(matches!(
            fit_k1_k2(&[(1.0, 2.0), (2.0, 3.0)]),
            Err(Error::FitFailure(_))
        ));
        assert!(matches!(
            fit_k1_k2(&[(1.0, 2.0), (2.0, -3.0), (3.0, 1.0)]),
            Err(Error::FitFailure(_))
        ));
    }

    #[test]
    fn power_ratio_examples() {
        assert_eq!(power_ratio(2.0, 5.0, 1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            power_ratio(1.0, 10.0, 2.0).unwrap(),
            1.0 / 12.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(power_ratio(1.0, 1e-9, 2.0).unwrap(), 0.5, epsilon = 1e-8);
        assert!(power_ratio(1.0, 10.0, 0.9).is_err());
        assert!(power_ratio(0.0, 10.0, 2.0).is_err());
    }

    #[test]
    fn hata_examples() {
        let p = HataParams::default();
        assert_eq!(hata_path_loss(&p, 1.0).unwrap(), 120.0);
        assert_abs_diff_eq!(max_distance(&p, 155.0, 0.0), 9.86, epsilon = 5e-3);
        for pd in [-20.0, 0.0, 13.0] {
            let d = max_distance(&p, 155.0, pd);
            assert!((hata_path_loss(&p, d).unwrap() + pd - 155.0).abs() < 1e-9);
        }
        assert!(hata_path_loss(&p, 0.0).is_err());
    }

    #[test]
    fn extension_factor_examples() {
        let one = extension_factor(3.0, 2.0, 1.0, 35.22).unwrap();
        assert_eq!((one.literal, one.coverage_gain), (1.0, 1.0));
        let f = extension_factor(1.0, 10.0, 2.0, 35.22).unwrap();
        assert_abs_diff_eq!(
            f.literal,
            (1.0f64 / 12.0).powf(1.0 / 35.22),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(f.literal, 0.9319, epsilon = 1e-4);
        assert_abs_diff_eq!(f.coverage_gain, 1.0731, epsilon = 1e-4);
        assert!(extension_factor(1.0, 10.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn coverage_gain_grows_with_gamma() {
        for x in [0.01, 0.3, 1.0, 10.0, 300.0] {
            let gains: Vec<f64> = (0..40)
                .map(|i| {
                    extension_factor(x, 1.0, 1.0 + 0.05 * i as f64, 35.22)
                        .unwrap()
                        .coverage_gain
                })
                .collect();
            assert!(gains.windows(2).all(|w| w[1] >= w[0]));
        }
    }

    #[test]
    fn coop_sum_rate_degenerates_to_noncoop() {
        let mc = McConfig::new(8, 20_000, 4).unwrap();
        let silent = ScenarioConfig {
            p_r2: Some(0.0),
            ..ScenarioConfig::default()
        };
        let coop = estimate_coop_sum_rate(&silent, 1.2, 0.7, 1.5, &mc).unwrap();
        let mac = crate::capacity::estimate_c2(&silent, 1.2, 0.7, &mc).unwrap();
        assert!((coop.mean - mac.mean).abs() < 1e-12);
        assert!(estimate_coop_sum_rate(&silent, 0.0, 0.7, 1.5, &mc).is_err());
    }
}
