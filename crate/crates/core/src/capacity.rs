//! Monte Carlo estimators of the relay-channel rate bounds with equal-power
//! inputs and receiver-side channel knowledge.
//!
//! All bounds of one scenario are evaluated on a shared [`ChannelEnsemble`]:
//! every sample carries one draw per link, so the per-sample orderings
//! (`C1 ≥ C3`, cut-set ≥ DF, cooperative ≥ non-cooperative) hold pointwise
//! and the rates are deterministic, monotone functions of the distances for
//! a fixed seed.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{path_loss_power, FadingModel, LinkDistances, NetworkGeometry};
use crate::error::{Error, Result};
use crate::matrixkit::{gram, gram_adjoint, logdet_identity_plus_sum, ComplexMatrix};
use crate::mc::{reduce_streams, reduce_streams_pair, BoundEstimate, McConfig, Moments};
use crate::special::DIGAMMA_ONE;

/// Powers, antenna counts, path loss and per-link fading of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Source transmit power (linear).
    pub p_s: f64,
    /// Relay transmit power (linear).
    pub p_r: f64,
    /// Transmit power of the cooperating second relay; `None` means `p_r`.
    pub p_r2: Option<f64>,
    pub n_s: usize,
    pub n_r: usize,
    pub m_r: usize,
    pub m_d: usize,
    pub alpha: f64,
    pub fading_sr: FadingModel,
    pub fading_sd: FadingModel,
    pub fading_rd: FadingModel,
    /// Desired rate in bits per channel use.
    pub rate_target: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            p_s: 10.0,
            p_r: 10.0,
            p_r2: None,
            n_s: 2,
            n_r: 2,
            m_r: 2,
            m_d: 2,
            alpha: 3.52,
            fading_sr: FadingModel::Rayleigh,
            fading_sd: FadingModel::Rayleigh,
            fading_rd: FadingModel::Rayleigh,
            rate_target: 5.5,
        }
    }
}

impl ScenarioConfig {
    /// Same antenna count on every node.
    pub fn with_antennas(mut self, n: usize) -> Self {
        self.n_s = n;
        self.n_r = n;
        self.m_r = n;
        self.m_d = n;
        self
    }

    pub fn second_relay_power(&self) -> f64 {
        self.p_r2.unwrap_or(self.p_r)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("P_s", self.p_s),
            ("P_r", self.p_r),
            ("alpha", self.alpha),
            ("R_c", self.rate_target),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::validation(
                    name,
                    format!("must be positive, got {v}"),
                ));
            }
        }
        if let Some(p) = self.p_r2 {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::validation(
                    "P_r2",
                    format!("must be non-negative, got {p}"),
                ));
            }
        }
        let counts = [
            ("N_s", self.n_s),
            ("N_r", self.n_r),
            ("M_r", self.m_r),
            ("M_d", self.m_d),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::validation(name, "antenna count must be at least 1"));
            }
        }
        for (name, f) in [
            ("fading_sr", &self.fading_sr),
            ("fading_sd", &self.fading_sd),
            ("fading_rd", &self.fading_rd),
        ] {
            f.validate()
                .map_err(|e| Error::validation(name, e.to_string()))?;
        }
        Ok(())
    }
}

/// How the minimum in the cut-set and DF expressions meets the expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MinMode {
    /// `E[min(a, b)]` on common draws.
    #[default]
    PerSample,
    /// `min(E[a], E[b])`.
    OfMeans,
}

/// Gram matrices of one channel draw (unit distance, fading only).
#[derive(Debug, Clone)]
pub struct SampleGrams {
    /// Ĥ_rs·Ĥ_rs†, `M_r × M_r`.
    pub rs: ComplexMatrix,
    /// Ĥ_rs†·Ĥ_rs, `N_s × N_s`.
    pub rs_adj: ComplexMatrix,
    /// Ĥ_ds·Ĥ_ds†, `M_d × M_d`.
    pub ds: ComplexMatrix,
    /// Ĥ_ds†·Ĥ_ds, `N_s × N_s`.
    pub ds_adj: ComplexMatrix,
    /// Ĥ_dr·Ĥ_dr†, `M_d × M_d`.
    pub dr: ComplexMatrix,
    /// Second (cooperating) relay to destination, `M_d × M_d`.
    pub dr2: ComplexMatrix,
}

/// Per-sample rates of one draw at one geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRates {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub coop: f64,
}

impl SampleRates {
    pub fn cutset(&self) -> f64 {
        self.c1.min(self.c2)
    }

    pub fn df(&self) -> f64 {
        self.c3.min(self.c2)
    }
}

/// All bound estimates at one geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub c1: BoundEstimate,
    pub c2: BoundEstimate,
    pub c3: BoundEstimate,
    pub cutset: BoundEstimate,
    pub df: BoundEstimate,
}

/// Power coefficients `(P/N)·d^(−α)` for each link at one geometry.
#[derive(Debug, Clone, Copy)]
struct LinkGains {
    sr: f64,
    sd: f64,
    rd: f64,
    rd2: f64,
}

/// Pre-drawn channel samples of a scenario, grouped by stream.
#[derive(Debug, Clone)]
pub struct ChannelEnsemble {
    scenario: ScenarioConfig,
    mc: McConfig,
    streams: Vec<Vec<SampleGrams>>,
}

impl ChannelEnsemble {
    pub fn draw(scenario: &ScenarioConfig, mc: &McConfig) -> Result<Self> {
        scenario.validate()?;
        mc.validate()?;
        let s = scenario;
        let sr = s.fading_sr.resolve(s.m_r, s.n_s)?;
        let sd = s.fading_sd.resolve(s.m_d, s.n_s)?;
        let rd = s.fading_rd.resolve(s.m_d, s.n_r)?;
        let per_stream = mc.per_stream();
        let streams = (0..mc.streams)
            .into_par_iter()
            .map(|id| {
                let mut rng = mc.stream_rng(id);
                (0..per_stream)
                    .map(|_| {
                        let h_rs = sr.sample(&mut rng)?;
                        let h_ds = sd.sample(&mut rng)?;
                        let h_dr = rd.sample(&mut rng)?;
                        let h_dr2 = rd.sample(&mut rng)?;
                        Ok(SampleGrams {
                            rs: gram(&h_rs),
                            rs_adj: gram_adjoint(&h_rs),
                            ds: gram(&h_ds),
                            ds_adj: gram_adjoint(&h_ds),
                            dr: gram(&h_dr),
                            dr2: gram(&h_dr2),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            scenario: scenario.clone(),
            mc: *mc,
            streams,
        })
    }

    pub fn scenario(&self) -> &ScenarioConfig {
        &self.scenario
    }

    pub fn mc(&self) -> &McConfig {
        &self.mc
    }

    pub fn len(&self) -> usize {
        self.streams.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Samples in global index order (`i = j·streams + stream`).
    pub fn samples(&self) -> impl Iterator<Item = &SampleGrams> + '_ {
        let per = self.mc.per_stream();
        let n = self.streams.len();
        (0..per * n).map(move |i| &self.streams[i % n][i / n])
    }

    fn gains(&self, d: &LinkDistances) -> LinkGains {
        let s = &self.scenario;
        let src = s.p_s / s.n_s as f64;
        let rel = s.p_r / s.n_r as f64;
        let rel2 = s.second_relay_power() / s.n_r as f64;
        LinkGains {
            sr: src * path_loss_power(d.source_relay, s.alpha),
            sd: src * path_loss_power(d.source_dest, s.alpha),
            rd: rel * path_loss_power(d.relay_dest, s.alpha),
            rd2: if d.second_relay_dest.is_finite() {
                rel2 * path_loss_power(d.second_relay_dest, s.alpha)
            } else {
                0.0
            },
        }
    }

    #[inline]
    fn c1_of(g: &SampleGrams, k: &LinkGains) -> f64 {
        // det(I_M + H_BC Q H_BC†) = det(I_Ns + Q^½ H_BC† H_BC Q^½)
        logdet_identity_plus_sum(&[(k.sd, &g.ds_adj), (k.sr, &g.rs_adj)])
    }

    #[inline]
    fn c2_of(g: &SampleGrams, k: &LinkGains) -> f64 {
        logdet_identity_plus_sum(&[(k.sd, &g.ds), (k.rd, &g.dr)])
    }

    #[inline]
    fn c3_of(g: &SampleGrams, k: &LinkGains) -> f64 {
        logdet_identity_plus_sum(&[(k.sr, &g.rs)])
    }

    #[inline]
    fn coop_of(g: &SampleGrams, k: &LinkGains) -> f64 {
        logdet_identity_plus_sum(&[(k.sd, &g.ds), (k.rd, &g.dr), (k.rd2, &g.dr2)])
    }

    /// Per-sample rates in global sample order.
    pub fn sample_rates(&self, d: &LinkDistances) -> Vec<SampleRates> {
        let k = self.gains(d);
        self.samples()
            .map(|g| SampleRates {
                c1: Self::c1_of(g, &k),
                c2: Self::c2_of(g, &k),
                c3: Self::c3_of(g, &k),
                coop: Self::coop_of(g, &k),
            })
            .collect()
    }

    /// Broadcast-cut term with the destination at `r_d` and relay at `r_r`.
    pub fn c1(&self, r_d: f64, r_r: f64) -> BoundEstimate {
        let k = self.gains(&LinkDistances {
            source_relay: r_r,
            source_dest: r_d,
            relay_dest: 1.0,
            second_relay_dest: f64::INFINITY,
        });
        reduce_streams(&self.streams, |g| Self::c1_of(g, &k))
    }

    /// Multiple-access term (source plus one relay at the destination).
    pub fn c2(&self, r_d: f64, r_dr: f64) -> BoundEstimate {
        let k = self.gains(&LinkDistances {
            source_relay: 1.0,
            source_dest: r_d,
            relay_dest: r_dr,
            second_relay_dest: f64::INFINITY,
        });
        reduce_streams(&self.streams, |g| Self::c2_of(g, &k))
    }

    /// [`Self::c2`] with both transmit powers multiplied by `power_scale`.
    pub fn mac_sum_rate_scaled(&self, r_d: f64, r_dr: f64, power_scale: f64) -> BoundEstimate {
        let mut k = self.gains(&LinkDistances {
            source_relay: 1.0,
            source_dest: r_d,
            relay_dest: r_dr,
            second_relay_dest: f64::INFINITY,
        });
        k.sd *= power_scale;
        k.rd *= power_scale;
        reduce_streams(&self.streams, |g| Self::c2_of(g, &k))
    }

    /// Source-to-relay ergodic capacity.
    pub fn c3(&self, r_r: f64) -> BoundEstimate {
        let k = self.gains(&LinkDistances {
            source_relay: r_r,
            source_dest: 1.0,
            relay_dest: 1.0,
            second_relay_dest: f64::INFINITY,
        });
        reduce_streams(&self.streams, |g| Self::c3_of(g, &k))
    }

    /// Destination sum-rate with the source, the serving relay and the
    /// cooperating neighbor relay.
    pub fn coop_sum_rate(&self, r_d: f64, r_dr1: f64, r_dr2: f64) -> BoundEstimate {
        let k = self.gains(&LinkDistances {
            source_relay: 1.0,
            source_dest: r_d,
            relay_dest: r_dr1,
            second_relay_dest: r_dr2,
        });
        reduce_streams(&self.streams, |g| Self::coop_of(g, &k))
    }

    /// Every bound at one geometry.
    pub fn bounds(&self, d: &LinkDistances, mode: MinMode) -> Bounds {
        let k = self.gains(d);
        let partials: Vec<[Moments; 5]> = self
            .streams
            .par_iter()
            .map(|samples| {
                let mut m: [Moments; 5] = Default::default();
                for g in samples {
                    let c1 = Self::c1_of(g, &k);
                    let c2 = Self::c2_of(g, &k);
                    let c3 = Self::c3_of(g, &k);
                    m[0].push(c1);
                    m[1].push(c2);
                    m[2].push(c3);
                    m[3].push(c1.min(c2));
                    m[4].push(c3.min(c2));
                }
                m
            })
            .collect();
        let mut total: [Moments; 5] = Default::default();
        for p in &partials {
            for (t, x) in total.iter_mut().zip(p) {
                t.merge(x);
            }
        }
        let [c1, c2, c3, cs, df] = total.map(|m| m.estimate());
        let (cutset, df) = match mode {
            MinMode::PerSample => (cs, df),
            MinMode::OfMeans => (min_of_means(c1, c2), min_of_means(c3, c2)),
        };
        Bounds {
            c1,
            c2,
            c3,
            cutset,
            df,
        }
    }

    pub fn df_rate(&self, d: &LinkDistances, mode: MinMode) -> BoundEstimate {
        self.with_relay(d.source_relay).df(d, mode)
    }

    pub fn cutset_bound(&self, d: &LinkDistances, mode: MinMode) -> BoundEstimate {
        let k = self.gains(d);
        match mode {
            MinMode::PerSample => reduce_streams(&self.streams, |g| {
                Self::c1_of(g, &k).min(Self::c2_of(g, &k))
            }),
            MinMode::OfMeans => {
                let (c1, c2) = reduce_streams_pair(&self.streams, |g| {
                    (Self::c1_of(g, &k), Self::c2_of(g, &k))
                });
                min_of_means(c1, c2)
            }
        }
    }

    /// Caches the relay-decoding term for a fixed relay radius, so sweeps
    /// over destination positions only recompute the destination side.
    pub fn with_relay(&self, r_r: f64) -> RelayView<'_> {
        let k = self.gains(&LinkDistances {
            source_relay: r_r,
            source_dest: 1.0,
            relay_dest: 1.0,
            second_relay_dest: f64::INFINITY,
        });
        let c3: Vec<Vec<f64>> = self
            .streams
            .par_iter()
            .map(|s| s.iter().map(|g| Self::c3_of(g, &k)).collect())
            .collect();
        let c3_estimate = reduce_streams(&c3, |&x| x);
        RelayView {
            ensemble: self,
            relay_radius: r_r,
            c3,
            c3_estimate,
        }
    }
}

fn min_of_means(a: BoundEstimate, b: BoundEstimate) -> BoundEstimate {
    if a.mean <= b.mean {
        a
    } else {
        b
    }
}

/// An ensemble with the relay radius fixed and `C3` cached per sample.
#[derive(Debug, Clone)]
pub struct RelayView<'a> {
    ensemble: &'a ChannelEnsemble,
    relay_radius: f64,
    c3: Vec<Vec<f64>>,
    c3_estimate: BoundEstimate,
}

impl<'a> RelayView<'a> {
    pub fn ensemble(&self) -> &'a ChannelEnsemble {
        self.ensemble
    }

    pub fn relay_radius(&self) -> f64 {
        self.relay_radius
    }

    pub fn c3(&self) -> BoundEstimate {
        self.c3_estimate
    }

    fn zipped<F>(&self, f: F) -> BoundEstimate
    where
        F: Fn(&SampleGrams, f64) -> f64 + Sync,
    {
        let pairs: Vec<Vec<(&SampleGrams, f64)>> = self
            .ensemble
            .streams
            .iter()
            .zip(&self.c3)
            .map(|(s, c)| s.iter().zip(c.iter().copied()).collect())
            .collect();
        reduce_streams(&pairs, |(g, c3)| f(g, *c3))
    }

    fn gains(&self, d: &LinkDistances) -> LinkGains {
        let mut d = *d;
        d.source_relay = self.relay_radius;
        self.ensemble.gains(&d)
    }

    /// DF rate `min(C3, C2)`; `d.source_relay` is ignored.
    pub fn df(&self, d: &LinkDistances, mode: MinMode) -> BoundEstimate {
        let k = self.gains(d);
        match mode {
            MinMode::PerSample => self.zipped(|g, c3| c3.min(ChannelEnsemble::c2_of(g, &k))),
            MinMode::OfMeans => {
                let c2 = self.ensemble.c2(d.source_dest, d.relay_dest);
                min_of_means(self.c3_estimate, c2)
            }
        }
    }

    /// Cooperative DF rate: relay decoding unchanged, destination hears
    /// both relays.
    pub fn coop_df(&self, d: &LinkDistances, mode: MinMode) -> BoundEstimate {
        let k = self.gains(d);
        match mode {
            MinMode::PerSample => self.zipped(|g, c3| c3.min(ChannelEnsemble::coop_of(g, &k))),
            MinMode::OfMeans => {
                let coop =
                    self.ensemble
                        .coop_sum_rate(d.source_dest, d.relay_dest, d.second_relay_dest);
                min_of_means(self.c3_estimate, coop)
            }
        }
    }

    pub fn cutset(&self, d: &LinkDistances, mode: MinMode) -> BoundEstimate {
        let mut d = *d;
        d.source_relay = self.relay_radius;
        self.ensemble.cutset_bound(&d, mode)
    }
}

/// Source-relay ergodic capacity at relay radius `r_r`.
pub fn estimate_c3(scn: &ScenarioConfig, r_r: f64, mc: &McConfig) -> Result<BoundEstimate> {
    positive("r_R", r_r)?;
    Ok(ChannelEnsemble::draw(scn, mc)?.c3(r_r))
}

/// Multiple-access term with the destination at `r_d` from the source and
/// `r_dr` from the relay.
pub fn estimate_c2(
    scn: &ScenarioConfig,
    r_d: f64,
    r_dr: f64,
    mc: &McConfig,
) -> Result<BoundEstimate> {
    positive("r_D", r_d)?;
    positive("r_DR", r_dr)?;
    Ok(ChannelEnsemble::draw(scn, mc)?.c2(r_d, r_dr))
}

/// Broadcast-cut term of the cut-set bound.
pub fn estimate_c1(
    scn: &ScenarioConfig,
    r_d: f64,
    r_r: f64,
    mc: &McConfig,
) -> Result<BoundEstimate> {
    positive("r_D", r_d)?;
    positive("r_R", r_r)?;
    Ok(ChannelEnsemble::draw(scn, mc)?.c1(r_d, r_r))
}

pub fn df_rate(
    scn: &ScenarioConfig,
    geom: &NetworkGeometry,
    mc: &McConfig,
    mode: MinMode,
) -> Result<BoundEstimate> {
    Ok(ChannelEnsemble::draw(scn, mc)?.df_rate(&geom.link_distances(), mode))
}

pub fn cutset_bound(
    scn: &ScenarioConfig,
    geom: &NetworkGeometry,
    mc: &McConfig,
    mode: MinMode,
) -> Result<BoundEstimate> {
    Ok(ChannelEnsemble::draw(scn, mc)?.cutset_bound(&geom.link_distances(), mode))
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

/// High-SNR approximation of the point-to-point ergodic rate:
/// `m·log₂(ρ·e^{ψ(1)}/N_s) + (1/ln 2)·Σ_{p=1..m} Σ_{q=1..n−p} 1/q`
/// with `m ≤ n` the smaller and larger antenna counts of the link.
pub fn high_snr_rate(m: usize, n: usize, n_s: usize, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "SNR must be positive, got {rho}"
        )));
    }
    if m == 0 || m > n || n_s == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= n and N_s >= 1, got m={m}, n={n}, N_s={n_s}"
        )));
    }
    let harmonic: f64 = (1..=m)
        .map(|p| (1..=n - p).map(|q| 1.0 / q as f64).sum::<f64>())
        .sum();
    Ok(m as f64 * (rho * DIGAMMA_ONE.exp() / n_s as f64).log2() + harmonic / LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::LosPrototype;
    use approx::assert_abs_diff_eq;

    fn mc(samples: usize) -> McConfig {
        McConfig::new(42, samples, 4).unwrap()
    }

    fn pure_los(los: LosPrototype) -> ScenarioConfig {
        ScenarioConfig {
            fading_sr: FadingModel::rician(1e9, los),
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn c3_pure_los_anchors() {
        let poor = estimate_c3(&pure_los(LosPrototype::PoorlyConditioned), 1.0, &mc(2000)).unwrap();
        assert_abs_diff_eq!(poor.mean, 21f64.log2(), epsilon = 0.01);
        let well = estimate_c3(&pure_los(LosPrototype::WellConditioned), 1.0, &mc(2000)).unwrap();
        assert_abs_diff_eq!(well.mean, 2.0 * 11f64.log2(), epsilon = 0.01);
    }

    #[test]
    fn c3_rayleigh_at_default_operating_point() {
        let est = estimate_c3(
            &ScenarioConfig::default(),
            1.0,
            &McConfig::new(7, 100_000, 8).unwrap(),
        )
        .unwrap();
        assert!((est.mean - 5.5).abs() <= 0.1, "{est:?}");
        assert_eq!(est.samples_used, 100_000);
    }

    #[test]
    fn c2_degenerate_relay_power() {
        let scn = ScenarioConfig {
            p_r: 1e-12,
            ..ScenarioConfig::default()
        };
        let ens = ChannelEnsemble::draw(&scn, &mc(20_000)).unwrap();
        let mac = ens.c2(1.0, 1.0);
        // source-only ergodic capacity on the same draws
        let k = 5.0;
        let src_only = reduce_streams(&ens.streams, |g| logdet_identity_plus_sum(&[(k, &g.ds)]));
        assert!((mac.mean - src_only.mean).abs() < 1e-9);
    }

    #[test]
    fn c2_decreases_with_distance_per_seed() {
        let ens = ChannelEnsemble::draw(&ScenarioConfig::default(), &mc(5000)).unwrap();
        assert!(ens.c2(1.0, 1.0).mean > ens.c2(2.0, 2.0).mean);
    }

    #[test]
    fn c1_approaches_c3_as_destination_recedes() {
        let ens = ChannelEnsemble::draw(&ScenarioConfig::default(), &mc(5000)).unwrap();
        let c1 = ens.c1(1e6, 1.0);
        let c3 = ens.c3(1.0);
        assert!((c1.mean - c3.mean).abs() < 1e-9);
    }

    #[test]
    fn zero_receive_antennas_rejected() {
        let scn = ScenarioConfig {
            m_d: 0,
            ..ScenarioConfig::default()
        };
        assert!(matches!(
            estimate_c1(&scn, 1.0, 1.0, &mc(10)),
            Err(Error::Validation { field, .. }) if field == "M_d"
        ));
    }

    #[test]
    fn per_sample_orderings() {
        let ens = ChannelEnsemble::draw(&ScenarioConfig::default(), &mc(10_000)).unwrap();
        let d = LinkDistances {
            source_relay: 0.8,
            source_dest: 1.7,
            relay_dest: 1.1,
            second_relay_dest: 1.9,
        };
        for r in ens.sample_rates(&d) {
            assert!(r.c1 >= r.c3);
            assert!(r.cutset() >= r.df());
            assert!(r.coop >= r.c2);
        }
        let b = ens.bounds(&d, MinMode::PerSample);
        assert!(b.cutset.mean >= b.df.mean);
        let b2 = ens.bounds(&d, MinMode::OfMeans);
        assert_eq!(b2.df.mean, b.c3.mean.min(b.c2.mean));
    }

    #[test]
    fn destination_on_relay_is_relay_limited() {
        let ens = ChannelEnsemble::draw(&ScenarioConfig::default(), &mc(4000)).unwrap();
        let d = LinkDistances {
            source_relay: 1.0,
            source_dest: 1.0,
            relay_dest: 0.0,
            second_relay_dest: f64::INFINITY,
        };
        let df = ens.df_rate(&d, MinMode::PerSample);
        let c3 = ens.c3(1.0);
        assert!((df.mean - c3.mean).abs() < 1e-12);
    }

    #[test]
    fn relay_view_matches_direct_bounds() {
        let ens = ChannelEnsemble::draw(&ScenarioConfig::default(), &mc(3000)).unwrap();
        let d = LinkDistances {
            source_relay: 0.9,
            source_dest: 1.3,
            relay_dest: 0.6,
            second_relay_dest: 1.5,
        };
        let b = ens.bounds(&d, MinMode::PerSample);
        let view = ens.with_relay(0.9);
        assert!((view.df(&d, MinMode::PerSample).mean - b.df.mean).abs() < 1e-12);
        assert!((view.cutset(&d, MinMode::PerSample).mean - b.cutset.mean).abs() < 1e-12);
        assert!(view.coop_df(&d, MinMode::PerSample).mean >= b.df.mean);
    }

    #[test]
    fn estimates_are_bit_reproducible() {
        let a = estimate_c3(&ScenarioConfig::default(), 0.9, &mc(3000)).unwrap();
        let b = estimate_c3(&ScenarioConfig::default(), 0.9, &mc(3000)).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn rates_decrease_with_every_distance() {
        let ens = ChannelEnsemble::draw(&ScenarioConfig::default(), &mc(2000)).unwrap();
        let base = LinkDistances {
            source_relay: 0.9,
            source_dest: 1.2,
            relay_dest: 0.7,
            second_relay_dest: 1.4,
        };
        let b0 = ens.bounds(&base, MinMode::PerSample);
        for bump in 0..3 {
            let mut d = base;
            match bump {
                0 => d.source_relay *= 1.1,
                1 => d.source_dest *= 1.1,
                _ => d.relay_dest *= 1.1,
            }
            let b = ens.bounds(&d, MinMode::PerSample);
            for (x, y) in [
                (b.c1, b0.c1),
                (b.c2, b0.c2),
                (b.c3, b0.c3),
                (b.cutset, b0.cutset),
                (b.df, b0.df),
            ] {
                assert!(x.mean <= y.mean + 1e-12);
            }
        }
    }

    #[test]
    fn high_snr_examples() {
        // m = n = 2: the double sum is exactly 1
        let r = high_snr_rate(2, 2, 2, 10.0).unwrap();
        let want = 2.0 * (10.0 * 0.561_459_483_566_885_f64 / 2.0).log2() + 1.0 / LN_2;
        assert_abs_diff_eq!(r, want, epsilon = 1e-12);
        assert_abs_diff_eq!(r, 4.421, epsilon = 1e-3);
        // (ln 100 − γ)/ln 2
        assert_abs_diff_eq!(
            high_snr_rate(1, 1, 1, 100.0).unwrap(),
            5.811_11,
            epsilon = 1e-4
        );
        assert!(high_snr_rate(2, 2, 2, 0.0).is_err());
        assert!(high_snr_rate(3, 2, 2, 1.0).is_err());
    }
}
