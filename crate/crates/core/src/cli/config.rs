//! Run configuration: defaults, `key=value` files, the `VACPOL_TOL` override
//! and command-line flags, merged in that order of increasing precedence.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::accuracy::AccuracyControl;
use crate::constants::{fm_to_bohr, diffuseness_from_thickness, BOHR_RADIUS_FM, DEFAULT_THICKNESS_FM, DEFAULT_XI_AU};
use crate::error::{Error, Result};
use crate::fermi::{make_fermi, FermiDistribution};

/// Name of the environment variable that overrides the tolerance.
pub const TOL_ENV: &str = "VACPOL_TOL";

/// Evaluation route selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluationMethod {
    Bickley,
    Quadrature,
    Mezo,
    SmallR,
    LargeR,
    Pyykko,
    Direct,
    Sommerfeld,
    Ks,
    KsPoint,
}

impl EvaluationMethod {
    pub const ALL: [EvaluationMethod; 10] = [
        EvaluationMethod::Bickley,
        EvaluationMethod::Quadrature,
        EvaluationMethod::Mezo,
        EvaluationMethod::SmallR,
        EvaluationMethod::LargeR,
        EvaluationMethod::Pyykko,
        EvaluationMethod::Direct,
        EvaluationMethod::Sommerfeld,
        EvaluationMethod::Ks,
        EvaluationMethod::KsPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvaluationMethod::Bickley => "bickley",
            EvaluationMethod::Quadrature => "quadrature",
            EvaluationMethod::Mezo => "mezo",
            EvaluationMethod::SmallR => "small_r",
            EvaluationMethod::LargeR => "large_r",
            EvaluationMethod::Pyykko => "pyykko",
            EvaluationMethod::Direct => "direct",
            EvaluationMethod::Sommerfeld => "sommerfeld",
            EvaluationMethod::Ks => "ks",
            EvaluationMethod::KsPoint => "ks_point",
        }
    }

    /// Which potential the method evaluates.
    pub fn family(self) -> Family {
        match self {
            EvaluationMethod::Direct | EvaluationMethod::Sommerfeld => Family::Fermi,
            EvaluationMethod::Ks | EvaluationMethod::KsPoint => Family::Ks,
            _ => Family::Point,
        }
    }
}

impl fmt::Display for EvaluationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvaluationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EvaluationMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = EvaluationMethod::ALL.iter().map(|m| m.name()).collect();
                Error::Config(format!("unknown method '{s}', expected one of {}", names.join(", ")))
            })
    }
}

/// Potential computed by a subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Point,
    Fermi,
    Ks,
}

impl Family {
    pub fn default_method(self) -> EvaluationMethod {
        match self {
            Family::Point => EvaluationMethod::Bickley,
            Family::Fermi => EvaluationMethod::Direct,
            Family::Ks => EvaluationMethod::Ks,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Point => "point",
            Family::Fermi => "fermi",
            Family::Ks => "ks",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    Linear,
    Log,
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Grid::Linear),
            "log" => Ok(Grid::Log),
            _ => Err(Error::Config(format!("unknown grid '{s}', expected linear or log"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format '{s}', expected csv or json"))),
        }
    }
}

/// Fully resolved settings. Nuclear sizes are kept in fm as entered; radii are in Bohr radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub z: f64,
    pub xi_fm: f64,
    pub t_fm: f64,
    /// Diffuseness; when set it takes precedence over `t_fm`.
    pub a_fm: Option<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub grid: Grid,
    /// `None` selects the default of the subcommand.
    pub method: Option<EvaluationMethod>,
    pub format: Format,
    pub tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            z: 1.0,
            xi_fm: DEFAULT_XI_AU * BOHR_RADIUS_FM,
            t_fm: DEFAULT_THICKNESS_FM,
            a_fm: None,
            r_min: 1e-5,
            r_max: 1e-1,
            points: 50,
            grid: Grid::Log,
            method: None,
            format: Format::Csv,
            tol: 1e-10,
        }
    }
}

/// Settings given explicitly by one source; unset fields leave lower layers untouched.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub z: Option<f64>,
    pub xi_fm: Option<f64>,
    pub t_fm: Option<f64>,
    pub a_fm: Option<f64>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub points: Option<usize>,
    pub grid: Option<Grid>,
    pub method: Option<EvaluationMethod>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for {key}")))
}

impl ConfigOverrides {
    /// Parses `key=value` lines. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut o = ConfigOverrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "Z" | "z" => o.z = Some(parse_value(key, value)?),
                "xi_fm" => o.xi_fm = Some(parse_value(key, value)?),
                "t_fm" => o.t_fm = Some(parse_value(key, value)?),
                "a_fm" => o.a_fm = Some(parse_value(key, value)?),
                "r_min" => o.r_min = Some(parse_value(key, value)?),
                "r_max" => o.r_max = Some(parse_value(key, value)?),
                "points" => o.points = Some(parse_value(key, value)?),
                "grid" => o.grid = Some(value.parse()?),
                "method" => o.method = Some(value.parse()?),
                "format" => o.format = Some(value.parse()?),
                "tol" => o.tol = Some(parse_value(key, value)?),
                _ => return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1))),
            }
        }
        Ok(o)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Only the tolerance, read from `VACPOL_TOL` when present.
    pub fn from_env_value(value: Option<&str>) -> Result<Self> {
        Ok(ConfigOverrides {
            tol: value.map(|v| parse_value(TOL_ENV, v.trim())).transpose()?,
            ..Default::default()
        })
    }

    pub fn apply(&self, c: &mut RunConfig) {
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { c.$f = v; })* };
        }
        set!(z, xi_fm, t_fm, r_min, r_max, points, grid, format, tol);
        if self.a_fm.is_some() {
            c.a_fm = self.a_fm;
        }
        if self.method.is_some() {
            c.method = self.method;
        }
    }
}

impl RunConfig {
    /// Defaults, then the file, then the environment tolerance, then the flags.
    pub fn resolve(file: Option<&ConfigOverrides>, env: &ConfigOverrides, flags: &ConfigOverrides) -> Result<Self> {
        let mut c = RunConfig::default();
        for layer in file.into_iter().chain([env, flags]) {
            layer.apply(&mut c);
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("Z", self.z),
            ("xi_fm", self.xi_fm),
            ("t_fm", self.t_fm),
            ("r_min", self.r_min),
            ("r_max", self.r_max),
        ];
        for (name, v) in positive.into_iter().chain(self.a_fm.map(|a| ("a_fm", a))) {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.r_min < self.r_max) {
            return Err(Error::Config(format!(
                "r_min must be below r_max, got {} and {}",
                self.r_min, self.r_max
            )));
        }
        if self.points < 2 {
            return Err(Error::Config(format!("points must be at least 2, got {}", self.points)));
        }
        self.accuracy()?;
        Ok(())
    }

    pub fn accuracy(&self) -> Result<AccuracyControl> {
        AccuracyControl::with_tol(self.tol)
    }

    /// Half-density radius in Bohr radii.
    pub fn xi_au(&self) -> f64 {
        fm_to_bohr(self.xi_fm)
    }

    /// Diffuseness in Bohr radii.
    pub fn a_au(&self) -> f64 {
        fm_to_bohr(self.a_fm.unwrap_or_else(|| diffuseness_from_thickness(self.t_fm)))
    }

    pub fn distribution(&self) -> Result<FermiDistribution> {
        make_fermi(self.z, self.xi_au(), self.a_au())
    }

    /// The `points` radii from `r_min` to `r_max`, both included.
    pub fn radii(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.r_max;
                }
                let s = i as f64 / last;
                match self.grid {
                    Grid::Linear => self.r_min + s * (self.r_max - self.r_min),
                    Grid::Log => self.r_min * (self.r_max / self.r_min).powf(s),
                }
            })
            .collect()
    }
}
