//! Flat `key = value` run configuration.
//!
//! Every physical input is one line. Relative spellings (`d0_rel_threshold`,
//! `coupling_rel_kappa`, ...) are resolved to absolute values at parse time,
//! and the resolved set is what gets written back into output metadata, so a
//! CSV header or JSON `parameters` object can be fed straight back in.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use lasercool_core::grid::{linspace, log_symmetric, logspace};
use lasercool_core::steady_state::line_pulling_cavity_detuning;
use lasercool_core::{DriveSpec, LaserParams, MechanicsParams, Method, Model};

use crate::error::{CliError, Result};

const KEYS: &[&str] = &[
    "gamma_perp",
    "gamma_par",
    "kappa",
    "g",
    "n_g",
    "n_g_rel_threshold",
    "d0",
    "d0_rel_threshold",
    "delta_la",
    "delta_lr",
    "n_bb",
    "omega_m",
    "gamma_m",
    "gamma_m_rel_kappa",
    "n_th",
    "coupling",
    "coupling_rel_kappa",
    "drive",
    "n_target",
    "omega_s",
    "branch",
    "model",
    "method",
    "include_fpar",
    "grid",
    "sweep_param",
    "sweep_range",
    "sweep_scale",
    "optimize_d0_rel_range",
    "output",
    "format",
];

/// Parameters that `sweep` can vary.
pub const SWEEP_PARAMS: &[&str] = &[
    "gamma_perp",
    "gamma_par",
    "kappa",
    "g",
    "n_g",
    "d0",
    "d0_rel_threshold",
    "delta_la",
    "delta_lr",
    "n_bb",
    "omega_m",
    "gamma_m",
    "n_th",
    "coupling",
    "coupling_rel_kappa",
    "n_target",
    "omega_s",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::validation(format!("format must be csv or json, got `{s}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Frequency grid for spectra. `Default` picks a log-symmetric grid from the
/// working point's spectral scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    Default,
    Linear { lo: f64, hi: f64, n: usize },
    Log { lo: f64, hi: f64, n: usize },
    /// ±[lo, hi], log-spaced on each side.
    Symlog { lo: f64, hi: f64, n: usize },
}

impl GridSpec {
    pub fn points(&self) -> Option<Vec<f64>> {
        match *self {
            GridSpec::Default => None,
            GridSpec::Linear { lo, hi, n } => Some(linspace(lo, hi, n)),
            GridSpec::Log { lo, hi, n } => Some(logspace(lo, hi, n)),
            GridSpec::Symlog { lo, hi, n } => Some(log_symmetric(1.0, lo, hi, n)),
        }
    }
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "default" {
            return Ok(GridSpec::Default);
        }
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::validation(format!("grid must be default or kind:lo:hi:n, got `{s}`"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let lo: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[2].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[3].trim().parse().map_err(|_| bad())?;
        if !(lo < hi) || n < 2 {
            return Err(CliError::validation("grid needs lo < hi and at least 2 points"));
        }
        match parts[0].trim() {
            "linear" => Ok(GridSpec::Linear { lo, hi, n }),
            "log" | "symlog" if lo <= 0.0 => Err(CliError::validation("log grids need lo > 0")),
            "log" => Ok(GridSpec::Log { lo, hi, n }),
            "symlog" if !n.is_multiple_of(2) => Err(CliError::validation("symlog grids need an even point count")),
            "symlog" => Ok(GridSpec::Symlog { lo, hi, n }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GridSpec::Default => f.write_str("default"),
            GridSpec::Linear { lo, hi, n } => write!(f, "linear:{}:{}:{n}", num(lo), num(hi)),
            GridSpec::Log { lo, hi, n } => write!(f, "log:{}:{}:{n}", num(lo), num(hi)),
            GridSpec::Symlog { lo, hi, n } => write!(f, "symlog:{}:{}:{n}", num(lo), num(hi)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl SweepSpec {
    pub fn new(param: &str, lo: f64, hi: f64, n: usize, log: bool) -> Result<Self> {
        let param = canonical_param(param)?;
        if !(lo.is_finite() && hi.is_finite()) || lo == hi {
            return Err(CliError::validation(format!("sweep range for {param} has zero length")));
        }
        if n < 2 {
            return Err(CliError::validation("sweep needs at least 2 points"));
        }
        if log && (lo <= 0.0 || hi <= 0.0) {
            return Err(CliError::validation("log sweep needs positive bounds"));
        }
        Ok(Self { param, lo, hi, n, log })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.log {
            logspace(self.lo, self.hi, self.n)
        } else {
            linspace(self.lo, self.hi, self.n)
        }
    }
}

fn canonical_param(name: &str) -> Result<String> {
    let lower = name.to_ascii_lowercase();
    SWEEP_PARAMS
        .iter()
        .find(|p| **p == lower)
        .map(|p| p.to_string())
        .ok_or_else(|| CliError::validation(format!("cannot sweep `{name}`; expected one of {}", SWEEP_PARAMS.join(", "))))
}

/// Parse `lo:hi:n`.
pub fn parse_range(s: &str) -> Result<(f64, f64, usize)> {
    let bad = || CliError::validation(format!("range must be lo:hi:n, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((
        parts[0].trim().parse().map_err(|_| bad())?,
        parts[1].trim().parse().map_err(|_| bad())?,
        parts[2].trim().parse().map_err(|_| bad())?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub laser: LaserParams,
    pub mech: MechanicsParams,
    pub drive: DriveSpec,
    pub model: Option<Model>,
    pub method: Method,
    pub include_fpar: Option<bool>,
    pub grid: GridSpec,
    pub sweep: Option<SweepSpec>,
    /// D0/D_th search interval for `optimize-pump`.
    pub optimize_range: Option<(f64, f64)>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn model(&self) -> Model {
        self.model.unwrap_or(if self.drive.is_seeded() { Model::Seeded } else { Model::UnseededAdiabatic })
    }

    /// The inversion noise is part of the unseeded closed form, so it is on
    /// by default there and off for the seeded three-variable model.
    pub fn include_fpar(&self) -> bool {
        self.include_fpar.unwrap_or(!self.drive.is_seeded())
    }

    /// Resolved parameters in canonical order, formatted so that parsing
    /// them back gives an identical config. The output path is left out.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let l = &self.laser;
        let m = &self.mech;
        let mut out: Vec<(String, String)> = [
            ("gamma_perp", l.gamma_perp),
            ("gamma_par", l.gamma_par),
            ("kappa", l.kappa),
            ("g", l.g),
            ("n_g", l.n_g),
            ("d0", l.d0),
            ("delta_la", l.delta_la),
            ("delta_lr", l.delta_lr),
            ("n_bb", l.n_bb),
            ("omega_m", m.omega_m),
            ("gamma_m", m.gamma_m),
            ("n_th", m.n_th),
            ("coupling", m.coupling),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), num(v)))
        .collect();
        let mut push = |k: &str, v: String| out.push((k.to_string(), v));
        match self.drive {
            DriveSpec::Unseeded => push("drive", "unseeded".into()),
            DriveSpec::SeededPhotonNumber { n_target } => {
                push("drive", "seeded".into());
                push("n_target", num(n_target));
            }
            DriveSpec::SeededAmplitude { omega_s, branch } => {
                push("drive", "seeded".into());
                push("omega_s", num(omega_s));
                if let Some(b) = branch {
                    push("branch", b.to_string());
                }
            }
        }
        push("model", self.model().name().into());
        push("method", self.method.name().into());
        push("include_fpar", self.include_fpar().to_string());
        push("grid", self.grid.to_string());
        if let Some(s) = &self.sweep {
            push("sweep_param", s.param.clone());
            push("sweep_range", format!("{}:{}:{}", num(s.lo), num(s.hi), s.n));
            push("sweep_scale", if s.log { "log" } else { "linear" }.into());
        }
        if let Some((lo, hi)) = self.optimize_range {
            push("optimize_d0_rel_range", format!("{}:{}", num(lo), num(hi)));
        }
        push("format", self.format.to_string());
        out
    }

    /// Set one sweepable parameter. Relative spellings use the current D_th or κ.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let l = &mut self.laser;
        let m = &mut self.mech;
        match name {
            "gamma_perp" => l.gamma_perp = value,
            "gamma_par" => l.gamma_par = value,
            "kappa" => l.kappa = value,
            "g" => l.g = value,
            "n_g" => l.n_g = value,
            "d0" => l.d0 = value,
            "d0_rel_threshold" => l.d0 = value * l.threshold_inversion(),
            "delta_la" => l.delta_la = value,
            "delta_lr" => l.delta_lr = value,
            "n_bb" => l.n_bb = value,
            "omega_m" => m.omega_m = value,
            "gamma_m" => m.gamma_m = value,
            "n_th" => m.n_th = value,
            "coupling" => m.coupling = value,
            "coupling_rel_kappa" => m.coupling = value * l.kappa,
            "n_target" => match self.drive {
                DriveSpec::SeededPhotonNumber { .. } => self.drive = DriveSpec::SeededPhotonNumber { n_target: value },
                _ => return Err(CliError::validation("n_target can only be swept with drive = seeded and n_target set")),
            },
            "omega_s" => match self.drive {
                DriveSpec::SeededAmplitude { branch, .. } => self.drive = DriveSpec::SeededAmplitude { omega_s: value, branch },
                _ => return Err(CliError::validation("omega_s can only be swept with drive = seeded and omega_s set")),
            },
            _ => return Err(CliError::validation(format!("cannot sweep `{name}`"))),
        }
        Ok(())
    }
}

/// 17 significant digits, the shortest fixed width that round-trips every f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| CliError::parse(line, format!("`{key}` expects a finite number, got `{v}`"))),
        }
    }

    fn required(&mut self, key: &str) -> Result<f64> {
        self.f64(key)?.ok_or_else(|| CliError::validation(format!("missing key `{key}`")))
    }

    /// Exactly one of an absolute key and its relative alternative.
    fn one_of(&mut self, abs: &str, rel: &str, scale: impl FnOnce() -> Result<f64>) -> Result<f64> {
        match (self.f64(abs)?, self.f64(rel)?) {
            (Some(a), None) => Ok(a),
            (None, Some(r)) => Ok(r * scale()?),
            (Some(_), Some(_)) => Err(CliError::validation(format!("give either `{abs}` or `{rel}`, not both"))),
            (None, None) => Err(CliError::validation(format!("missing key `{abs}` (or `{rel}`)"))),
        }
    }

    fn parsed<T: FromStr>(&mut self, key: &str, what: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::parse(line, format!("`{key}` expects {what}, got `{v}`"))),
        }
    }
}

fn physics(e: lasercool_core::Error) -> CliError {
    match e {
        lasercool_core::Error::InvalidParameter(m) => CliError::Validation(m),
        other => CliError::Physics(other),
    }
}

/// Parse a flat config, or the JSON document written by `--format json`.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    if text.trim_start().starts_with('{') {
        return parse_json(text);
    }
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::parse(line, format!("expected `key = value`, got `{content}`")))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(CliError::parse(line, "empty key or value"));
        }
        if !KEYS.contains(&key) {
            return Err(CliError::parse(line, format!("unknown key `{key}`")));
        }
        if let Some((first, _)) = map.insert(key.to_string(), (line, value.to_string())) {
            return Err(CliError::parse(line, format!("duplicate key `{key}` (first set on line {first})")));
        }
    }
    build(Entries { map })
}

fn parse_json(text: &str) -> Result<RunConfig> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::parse(e.line(), format!("invalid JSON: {e}")))?;
    let params = doc
        .get("parameters")
        .and_then(|p| p.as_object())
        .ok_or_else(|| CliError::parse(1, "JSON input needs a `parameters` object"))?;
    let mut flat = String::new();
    for (k, v) in params {
        let v = v.as_str().ok_or_else(|| CliError::parse(1, format!("parameter `{k}` must be a string")))?;
        flat.push_str(&format!("{k} = {v}\n"));
    }
    parse_config(&flat)
}

fn build(mut e: Entries) -> Result<RunConfig> {
    let gamma_perp = e.required("gamma_perp")?;
    let gamma_par = e.required("gamma_par")?;
    let kappa = e.required("kappa")?;
    let g = e.required("g")?;
    let delta_la = e.required("delta_la")?;
    let mut laser = LaserParams {
        gamma_perp,
        gamma_par,
        kappa,
        g,
        n_g: 1.0,
        d0: 0.0,
        delta_la,
        delta_lr: 0.0,
        n_bb: e.f64("n_bb")?.unwrap_or(0.0),
    };
    let d_th = || {
        let d = laser.threshold_inversion();
        if d.is_finite() && d > 0.0 {
            Ok(d)
        } else {
            Err(CliError::validation("relative inversion keys need a finite threshold (g > 0, kappa > 0)"))
        }
    };
    let n_g = e.one_of("n_g", "n_g_rel_threshold", d_th)?;
    let d0 = e.one_of("d0", "d0_rel_threshold", d_th)?;
    laser.n_g = n_g;
    laser.d0 = d0;

    let drive = match e.take("drive") {
        None => return Err(CliError::validation("missing key `drive` (unseeded or seeded)")),
        Some((_, v)) if v == "unseeded" => DriveSpec::Unseeded,
        Some((_, v)) if v == "seeded" => {
            let n_target = e.f64("n_target")?;
            let omega_s = e.f64("omega_s")?;
            let branch = e.parsed::<usize>("branch", "a non-negative integer")?;
            match (n_target, omega_s) {
                (Some(n_target), None) if branch.is_none() => DriveSpec::SeededPhotonNumber { n_target },
                (Some(_), None) => return Err(CliError::validation("`branch` only applies with `omega_s`")),
                (None, Some(omega_s)) => DriveSpec::SeededAmplitude { omega_s, branch },
                _ => return Err(CliError::validation("seeded drive needs exactly one of `n_target` or `omega_s`")),
            }
        }
        Some((line, v)) => return Err(CliError::parse(line, format!("drive must be unseeded or seeded, got `{v}`"))),
    };
    if !drive.is_seeded() {
        for key in ["n_target", "omega_s", "branch"] {
            if let Some((line, _)) = e.take(key) {
                return Err(CliError::parse(line, format!("`{key}` needs drive = seeded")));
            }
        }
    }

    // a free-running laser oscillates at the pulled frequency unless told otherwise
    laser.delta_lr = match (e.f64("delta_lr")?, drive) {
        (Some(d), _) => d,
        (None, DriveSpec::Unseeded) => line_pulling_cavity_detuning(laser.delta_la, laser.kappa, laser.gamma_perp),
        (None, _) => return Err(CliError::validation("missing key `delta_lr` (required when seeded)")),
    };

    let mech = MechanicsParams {
        omega_m: e.required("omega_m")?,
        gamma_m: e.one_of("gamma_m", "gamma_m_rel_kappa", || Ok(kappa))?,
        n_th: e.required("n_th")?,
        coupling: e.one_of("coupling", "coupling_rel_kappa", || Ok(kappa))?,
    };

    let model = e.parsed::<Model>("model", "a model name")?;
    let method = e.parsed::<Method>("method", "matrix or closed_form")?.unwrap_or(Method::Matrix);
    let include_fpar = e.parsed::<bool>("include_fpar", "true or false")?;
    let grid = match e.take("grid") {
        None => GridSpec::Default,
        Some((_, v)) => v.parse()?,
    };
    let sweep = match (e.take("sweep_param"), e.take("sweep_range")) {
        (None, None) => {
            if let Some((line, _)) = e.take("sweep_scale") {
                return Err(CliError::parse(line, "`sweep_scale` without `sweep_param`"));
            }
            None
        }
        (Some((_, p)), Some((_, r))) => {
            let (lo, hi, n) = parse_range(&r)?;
            let log = match e.take("sweep_scale") {
                None => false,
                Some((_, s)) if s == "linear" => false,
                Some((_, s)) if s == "log" => true,
                Some((line, s)) => return Err(CliError::parse(line, format!("sweep_scale must be linear or log, got `{s}`"))),
            };
            Some(SweepSpec::new(&p, lo, hi, n, log)?)
        }
        _ => return Err(CliError::validation("`sweep_param` and `sweep_range` go together")),
    };
    let optimize_range = match e.take("optimize_d0_rel_range") {
        None => None,
        Some((line, v)) => {
            let (lo, hi) = v
                .split_once(':')
                .and_then(|(a, b)| Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?)))
                .ok_or_else(|| CliError::parse(line, format!("optimize_d0_rel_range must be lo:hi, got `{v}`")))?;
            if !(lo < hi) {
                return Err(CliError::validation("optimize_d0_rel_range needs lo < hi"));
            }
            Some((lo, hi))
        }
    };
    let output = e.take("output").map(|(_, v)| PathBuf::from(v));
    let format = match e.take("format") {
        None => Format::Csv,
        Some((_, v)) => v.parse()?,
    };
    debug_assert!(e.map.is_empty(), "unhandled keys: {:?}", e.map.keys());

    laser.validate().map_err(physics)?;
    mech.validate().map_err(physics)?;
    drive.validate().map_err(physics)?;

    Ok(RunConfig { laser, mech, drive, model, method, include_fpar, grid, sweep, optimize_range, output, format })
}
