//! Potential tables on a radial grid and their CSV / JSON rendering.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::cli::config::{EvaluationMethod, Family, Format, RunConfig};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::kallen_sabry::{ks_point, ks_potential};
use crate::uehling_fermi::{uehling_fermi, FermiMethod};
use crate::uehling_point::{uehling_point_with, PointMethod};

/// CSV header of every table.
pub const CSV_HEADER: &str = "r_au,coulomb,delta_v,method,est_error";

/// One row: radius, Coulomb potential `-Z/r`, correction, route and error estimate (hartree).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialSample {
    pub r_au: f64,
    pub coulomb: f64,
    pub delta_v: f64,
    pub method: String,
    pub est_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableParameters {
    pub potential: &'static str,
    pub z: f64,
    pub xi_au: f64,
    pub a_au: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialTable {
    pub parameters: TableParameters,
    pub rows: Vec<PotentialSample>,
}

fn point_method(m: EvaluationMethod) -> Option<PointMethod> {
    Some(match m {
        EvaluationMethod::Bickley => PointMethod::Bickley,
        EvaluationMethod::Quadrature => PointMethod::Quadrature,
        EvaluationMethod::Mezo => PointMethod::Mezo,
        EvaluationMethod::SmallR => PointMethod::AsymptoticSmall,
        EvaluationMethod::LargeR => PointMethod::AsymptoticLarge,
        EvaluationMethod::Pyykko => PointMethod::PyykkoFit,
        _ => return None,
    })
}

/// Method of `config` for a subcommand of the given family, checking that they match.
pub fn method_for(config: &RunConfig, family: Family) -> Result<EvaluationMethod> {
    let m = config.method.unwrap_or(family.default_method());
    if m.family() != family {
        return Err(Error::Config(format!(
            "method '{m}' does not evaluate the {} potential",
            family.name()
        )));
    }
    Ok(m)
}

/// Table for any method; the potential follows from the method.
pub fn cmd_table(config: &RunConfig) -> Result<PotentialTable> {
    let m = config.method.unwrap_or(Family::Point.default_method());
    build(config, m)
}

pub fn cmd_point(config: &RunConfig) -> Result<PotentialTable> {
    build(config, method_for(config, Family::Point)?)
}

pub fn cmd_fermi(config: &RunConfig) -> Result<PotentialTable> {
    build(config, method_for(config, Family::Fermi)?)
}

pub fn cmd_ks(config: &RunConfig) -> Result<PotentialTable> {
    build(config, method_for(config, Family::Ks)?)
}

fn build(config: &RunConfig, method: EvaluationMethod) -> Result<PotentialTable> {
    config.validate()?;
    let k = PhysicalConstants::default();
    let ctrl = config.accuracy()?;
    let d = config.distribution()?;
    let z = config.z;
    let eval = |r: f64| -> Result<PotentialSample> {
        let (delta_v, est_error, tag) = match method.family() {
            Family::Point => {
                let p = uehling_point_with(r, z, point_method(method).expect("point family"), &k, &ctrl)?;
                (p.value, p.est_error, method.name())
            }
            Family::Fermi => {
                let fm = if method == EvaluationMethod::Sommerfeld {
                    FermiMethod::Sommerfeld
                } else {
                    FermiMethod::Direct
                };
                let p = uehling_fermi(r, &d, fm, &ctrl, &k)?;
                (p.value, p.est_error, p.method.name())
            }
            Family::Ks => {
                let p = if method == EvaluationMethod::KsPoint {
                    ks_point(r, z, &k, &ctrl)?
                } else {
                    ks_potential(r, &d, &ctrl, &k)?
                };
                (p.value, p.est_error, method.name())
            }
        };
        Ok(PotentialSample {
            r_au: r,
            coulomb: -z / r,
            delta_v,
            method: tag.to_string(),
            est_error,
        })
    };
    let rows = config
        .radii()
        .into_par_iter()
        .map(eval)
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialTable {
        parameters: TableParameters {
            potential: method.family().name(),
            z,
            xi_au: d.xi,
            a_au: d.a,
            tol: config.tol,
        },
        rows,
    })
}

impl PotentialTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(96 * (self.rows.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{},{:.16e}",
                row.r_au, row.coulomb, row.delta_v, row.method, row.est_error
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table is serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
