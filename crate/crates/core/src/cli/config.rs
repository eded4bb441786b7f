//! Line-oriented `key=value` run configuration.

use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::capacity::{MinMode, ScenarioConfig};
use crate::channel::{FadingModel, LosPrototype};
use crate::cooperation::HataParams;
use crate::coverage::{RateMetric, SolverConfig, DEFAULT_BACKOFF};
use crate::error::{Error, Result};
use crate::mc::McConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Bounds,
    OptLoc,
    Coverage,
    Coop,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bounds => "bounds",
            Command::OptLoc => "optloc",
            Command::Coverage => "coverage",
            Command::Coop => "coop",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bounds" => Ok(Command::Bounds),
            "optloc" => Ok(Command::OptLoc),
            "coverage" => Ok(Command::Coverage),
            "coop" => Ok(Command::Coop),
            other => Err(Error::validation(
                "command",
                format!("expected bounds, optloc, coverage or coop, got `{other}`"),
            )),
        }
    }
}

/// Experiment parameters beyond the scenario, sampling and solver.
#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    pub relay_count: usize,
    pub angular_steps: usize,
    /// Relay radius for coverage runs; `None` solves for it and applies
    /// `backoff`.
    pub relay_radius: Option<f64>,
    pub backoff: f64,
    pub metric: RateMetric,
    pub min_mode: MinMode,
    pub use_symmetry: bool,
    /// Relay height above the source-destination axis in bounds runs.
    pub d_y: f64,
    pub d_x_min: f64,
    pub d_x_max: f64,
    /// Relay radii scanned by optloc runs.
    pub r_r_min: f64,
    pub r_r_max: f64,
    pub sweep_points: usize,
    pub hata: HataParams,
    /// Total transmit budget in dB.
    pub p_max_t: f64,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            relay_count: 4,
            angular_steps: 72,
            relay_radius: None,
            backoff: DEFAULT_BACKOFF,
            metric: RateMetric::Df,
            min_mode: MinMode::PerSample,
            use_symmetry: true,
            d_y: 0.1,
            d_x_min: 0.0,
            d_x_max: 1.0,
            r_r_min: 0.2,
            r_r_max: 2.0,
            sweep_points: 41,
            hata: HataParams::default(),
            p_max_t: 155.0,
        }
    }
}

impl RunParams {
    pub fn validate(&self) -> Result<()> {
        if self.relay_count == 0 {
            return Err(Error::validation("L", "must be at least 1"));
        }
        if self.angular_steps < 4 * self.relay_count {
            return Err(Error::validation(
                "angular_steps",
                format!("must be at least 4·L = {}", 4 * self.relay_count),
            ));
        }
        if let Some(r) = self.relay_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::validation("r_R", "must be positive"));
            }
        }
        if !(self.backoff > 0.0 && self.backoff <= 1.0) {
            return Err(Error::validation("backoff", "must lie in (0, 1]"));
        }
        if !(self.d_y.is_finite()) {
            return Err(Error::validation("d_y", "must be finite"));
        }
        if !(self.d_x_min < self.d_x_max) {
            return Err(Error::validation("d_x_max", "must exceed d_x_min"));
        }
        if !(self.r_r_min > 0.0) {
            return Err(Error::validation("r_R_min", "must be positive"));
        }
        if !(self.r_r_min < self.r_r_max) {
            return Err(Error::validation("r_R_max", "must exceed r_R_min"));
        }
        if self.sweep_points < 2 {
            return Err(Error::validation("sweep_points", "must be at least 2"));
        }
        self.hata.validate()?;
        if !self.p_max_t.is_finite() {
            return Err(Error::validation("P_maxT", "must be finite"));
        }
        Ok(())
    }
}

/// Everything one CLI invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub scenario: ScenarioConfig,
    pub mc: McConfig,
    pub solver: SolverConfig,
    pub params: RunParams,
    pub command: Command,
    /// Defaults to `<command>.csv` in the working directory.
    pub output_path: Option<PathBuf>,
    pub emit_json: bool,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            mc: McConfig::default(),
            solver: SolverConfig::default(),
            params: RunParams::default(),
            command: Command::Bounds,
            output_path: None,
            emit_json: false,
        }
    }
}

impl RunManifest {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.mc.validate()?;
        self.solver.validate()?;
        self.params.validate()?;
        if self.command == Command::Coop && self.params.relay_count < 2 {
            return Err(Error::validation(
                "L",
                "cooperation needs at least 2 relays",
            ));
        }
        Ok(())
    }

    pub fn output_path(&self) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", self.command.name())))
    }
}

fn number(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::validation(key, format!("expected a number, got `{value}`")))
}

/// Power value: linear by default, `dB` suffix converts.
fn power(key: &str, value: &str) -> Result<f64> {
    match value.strip_suffix("dB") {
        Some(db) => Ok(10f64.powf(number(key, db.trim())? / 10.0)),
        None => number(key, value),
    }
}

fn count(key: &str, value: &str) -> Result<usize> {
    value.parse::<usize>().map_err(|_| {
        Error::validation(
            key,
            format!("expected a non-negative integer, got `{value}`"),
        )
    })
}

fn flag(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::validation(
            key,
            format!("expected true or false, got `{value}`"),
        )),
    }
}

/// `rayleigh` or `rician:K=<k>[dB]:los=<poor|well>`.
pub fn parse_fading(key: &str, value: &str) -> Result<FadingModel> {
    let mut parts = value.split(':');
    match parts.next().map(str::trim) {
        Some("rayleigh") => {
            if parts.next().is_some() {
                return Err(Error::validation(key, "rayleigh takes no parameters"));
            }
            Ok(FadingModel::Rayleigh)
        }
        Some("rician") => {
            let mut k = None;
            let mut los = None;
            for part in parts {
                let (name, v) = part.split_once('=').ok_or_else(|| {
                    Error::validation(key, format!("expected name=value, got `{part}`"))
                })?;
                match name.trim() {
                    "K" => k = Some(power(key, v.trim())?),
                    "los" => {
                        los = Some(match v.trim() {
                            "poor" => LosPrototype::PoorlyConditioned,
                            "well" => LosPrototype::WellConditioned,
                            other => {
                                return Err(Error::validation(
                                    key,
                                    format!("los must be poor or well, got `{other}`"),
                                ))
                            }
                        })
                    }
                    other => {
                        return Err(Error::validation(
                            key,
                            format!("unknown Rician parameter `{other}`"),
                        ))
                    }
                }
            }
            let k = k.ok_or_else(|| Error::validation(key, "Rician model needs K"))?;
            let los = los.ok_or_else(|| Error::validation(key, "Rician model needs los"))?;
            let model = FadingModel::rician(k, los);
            model
                .validate()
                .map_err(|e| Error::validation(key, e.to_string()))?;
            Ok(model)
        }
        _ => Err(Error::validation(
            key,
            format!("expected rayleigh or rician:K=<k>:los=<poor|well>, got `{value}`"),
        )),
    }
}

pub const CONFIG_KEYS: &[&str] = &[
    "command",
    "P_s",
    "P_r",
    "P_r2",
    "N_a",
    "N_s",
    "N_r",
    "M_r",
    "M_d",
    "alpha",
    "R_c",
    "fading",
    "fading_sr",
    "fading_sd",
    "fading_rd",
    "L",
    "seed",
    "samples",
    "streams",
    "r_lo",
    "r_hi",
    "tol",
    "max_iter",
    "scan_steps",
    "angular_steps",
    "r_R",
    "backoff",
    "metric",
    "min_mode",
    "symmetry",
    "d_y",
    "d_x_min",
    "d_x_max",
    "r_R_min",
    "r_R_max",
    "sweep_points",
    "hata_A",
    "hata_B",
    "P_maxT",
];

/// Parses a configuration document. Missing keys keep their defaults;
/// `N_a` and `fading` set every node or link and are overridden by the
/// specific keys regardless of order.
pub fn parse_config(text: &str) -> Result<RunManifest> {
    let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected key=value, got `{line}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty key or value".into(),
            });
        }
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::UnknownKey {
                line: line_no,
                key: key.to_string(),
            });
        }
        if entries.insert(key, (line_no, value)).is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
    }

    let mut m = RunManifest::default();
    let get = |k: &str| entries.get(k).map(|&(_, v)| v);

    if let Some(v) = get("command") {
        m.command = v.parse()?;
    }
    let s = &mut m.scenario;
    if let Some(v) = get("N_a") {
        *s = s.clone().with_antennas(count("N_a", v)?);
    }
    if let Some(v) = get("fading") {
        let f = parse_fading("fading", v)?;
        s.fading_sr = f.clone();
        s.fading_sd = f.clone();
        s.fading_rd = f;
    }
    for (key, slot) in [
        ("fading_sr", &mut s.fading_sr),
        ("fading_sd", &mut s.fading_sd),
        ("fading_rd", &mut s.fading_rd),
    ] {
        if let Some(v) = get(key) {
            *slot = parse_fading(key, v)?;
        }
    }
    for (key, slot) in [
        ("N_s", &mut s.n_s),
        ("N_r", &mut s.n_r),
        ("M_r", &mut s.m_r),
        ("M_d", &mut s.m_d),
    ] {
        if let Some(v) = get(key) {
            *slot = count(key, v)?;
        }
    }
    for (key, slot) in [("P_s", &mut s.p_s), ("P_r", &mut s.p_r)] {
        if let Some(v) = get(key) {
            *slot = power(key, v)?;
        }
    }
    if let Some(v) = get("P_r2") {
        s.p_r2 = Some(power("P_r2", v)?);
    }
    if let Some(v) = get("alpha") {
        s.alpha = number("alpha", v)?;
    }
    if let Some(v) = get("R_c") {
        s.rate_target = number("R_c", v)?;
    }

    if let Some(v) = get("seed") {
        m.mc.seed = v.parse().map_err(|_| {
            Error::validation("seed", format!("expected an unsigned integer, got `{v}`"))
        })?;
    }
    if let Some(v) = get("samples") {
        m.mc.samples = count("samples", v)?;
    }
    if let Some(v) = get("streams") {
        m.mc.streams = count("streams", v)?;
    }

    let sv = &mut m.solver;
    for (key, slot) in [
        ("r_lo", &mut sv.r_lo),
        ("r_hi", &mut sv.r_hi),
        ("tol", &mut sv.tol),
    ] {
        if let Some(v) = get(key) {
            *slot = number(key, v)?;
        }
    }
    for (key, slot) in [
        ("max_iter", &mut sv.max_iter),
        ("scan_steps", &mut sv.scan_steps),
    ] {
        if let Some(v) = get(key) {
            *slot = count(key, v)?;
        }
    }

    let p = &mut m.params;
    for (key, slot) in [
        ("L", &mut p.relay_count),
        ("angular_steps", &mut p.angular_steps),
        ("sweep_points", &mut p.sweep_points),
    ] {
        if let Some(v) = get(key) {
            *slot = count(key, v)?;
        }
    }
    for (key, slot) in [
        ("backoff", &mut p.backoff),
        ("d_y", &mut p.d_y),
        ("d_x_min", &mut p.d_x_min),
        ("d_x_max", &mut p.d_x_max),
        ("r_R_min", &mut p.r_r_min),
        ("r_R_max", &mut p.r_r_max),
        ("hata_A", &mut p.hata.a),
        ("hata_B", &mut p.hata.b),
        ("P_maxT", &mut p.p_max_t),
    ] {
        if let Some(v) = get(key) {
            *slot = number(key, v)?;
        }
    }
    if let Some(v) = get("r_R") {
        p.relay_radius = Some(number("r_R", v)?);
    }
    if let Some(v) = get("symmetry") {
        p.use_symmetry = flag("symmetry", v)?;
    }
    if let Some(v) = get("metric") {
        p.metric = match v {
            "df" => RateMetric::Df,
            "cutset" => RateMetric::CutSet,
            other => {
                return Err(Error::validation(
                    "metric",
                    format!("expected df or cutset, got `{other}`"),
                ))
            }
        };
    }
    if let Some(v) = get("min_mode") {
        p.min_mode = match v {
            "per_sample" => MinMode::PerSample,
            "of_means" => MinMode::OfMeans,
            other => {
                return Err(Error::validation(
                    "min_mode",
                    format!("expected per_sample or of_means, got `{other}`"),
                ))
            }
        };
    }

    m.validate()?;
    Ok(m)
}
