use std::fmt;
use std::path::{Path, PathBuf};

use ahlfors_core::closed_form::{derivative_at_infinity, infinity_contour, ClosedFormKind};
use ahlfors_core::harness::{self, reports_to_json_lines};
use ahlfors_core::{
    AhlforsClosedForm, AhlforsSolution, AnalyticFunction, BasePoint, BasisSpec, Complex64, Domain,
    DomainSpec, Error, SolverConfig,
};
use serde_json::{json, Value};

use crate::output;

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Input(String),
    Convergence(String),
    Verification { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Verification { .. } => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Convergence(m) => write!(f, "computation failed: {m}"),
            CliError::Verification { failed, total } => {
                write!(f, "{failed} of {total} checks failed")
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. }
            | Error::Resolution { .. }
            | Error::NumericalInstability(_)
            | Error::Internal(_) => CliError::Convergence(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Parsed command-line inputs shared by every command.
#[derive(Debug, Clone)]
pub struct Request {
    pub domain: Domain,
    pub point: BasePoint,
    pub out: PathBuf,
    /// Set when `--degree` was given; forces the solver on domains that
    /// also have a closed form.
    pub degree: Option<usize>,
    pub samples: Option<usize>,
}

impl Request {
    pub fn from_args(
        domain_file: &Path,
        point: Option<&str>,
        out: PathBuf,
        degree: Option<usize>,
        samples: Option<usize>,
    ) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(domain_file)
            .map_err(|e| CliError::Io(format!("{}: {e}", domain_file.display())))?;
        let domain = DomainSpec::from_json(&text)
            .and_then(|s| s.to_domain())
            .map_err(|e| CliError::Input(format!("{}: {e}", domain_file.display())))?;
        let point = match point {
            Some(p) => p
                .parse::<BasePoint>()
                .map_err(|e| CliError::Input(format!("--point {p}: {e}")))?,
            None if domain.contains_infinity() => BasePoint::Infinity,
            None => {
                return Err(CliError::Input(
                    "--point is required for bounded domains".into(),
                ))
            }
        };
        if !domain.contains_point(&point) {
            return Err(CliError::Input(format!(
                "base point {point} is not in the domain"
            )));
        }
        if samples.is_some_and(|n| n < 8) {
            return Err(CliError::Input("--samples must be at least 8".into()));
        }
        Ok(Self {
            domain,
            point,
            out,
            degree,
            samples,
        })
    }

    pub fn solver_config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if let Some(n) = self.samples {
            cfg.boundary_samples_per_component = n;
        }
        cfg
    }

    pub fn basis(&self) -> BasisSpec {
        match self.degree {
            Some(d) => BasisSpec::new(d),
            None => BasisSpec::default_for(&self.domain),
        }
    }
}

/// The Ahlfors function a command works with.
pub enum Ahlfors {
    Closed(AhlforsClosedForm),
    Solved(Box<AhlforsSolution>),
}

impl Ahlfors {
    pub fn resolve(req: &Request) -> Result<Self, CliError> {
        let closed = match (&req.domain, req.degree) {
            (Domain::RealSlitComplement(_), _) | (_, None) => {
                AhlforsClosedForm::for_domain(&req.domain, &req.point).ok()
            }
            _ => None,
        };
        if let Some(f) = closed {
            return Ok(Ahlfors::Closed(f));
        }
        if let Domain::RealSlitComplement(_) = req.domain {
            return Err(CliError::Input(
                "slit complements are supported at the base point inf".into(),
            ));
        }
        let sol = ahlfors_core::solve_extremal(
            &req.domain,
            req.point,
            &req.basis(),
            &req.solver_config(),
        )?;
        Ok(Ahlfors::Solved(Box::new(sol)))
    }

    pub fn function(&self) -> &dyn AnalyticFunction {
        match self {
            Ahlfors::Closed(f) => f,
            Ahlfors::Solved(s) => s.as_ref(),
        }
    }

    /// `F'(p)`; on slit complements read off the contour integral at `∞`.
    pub fn gamma(&self, domain: &Domain) -> Result<f64, CliError> {
        match self {
            Ahlfors::Closed(f) => match (&f.kind, infinity_contour(domain)) {
                (ClosedFormKind::RealSlit { .. }, Some((center, radius))) => {
                    Ok(derivative_at_infinity(f, center, radius)?.norm())
                }
                _ => Ok(f.gamma),
            },
            Ahlfors::Solved(s) => Ok(s.gamma),
        }
    }
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn point_json(p: &BasePoint) -> Value {
    match p {
        BasePoint::Infinity => json!("inf"),
        BasePoint::Finite(z) => pair(*z),
    }
}

fn solution_json(req: &Request, f: &Ahlfors) -> Result<Value, CliError> {
    let gamma = f.gamma(&req.domain)?;
    let mut doc = json!({
        "domain": DomainSpec::from(&req.domain),
        "base_point": point_json(&req.point),
        "gamma": gamma,
    });
    match f {
        Ahlfors::Closed(c) => {
            let descriptor = match &c.kind {
                ClosedFormKind::DiskMoebius(t) | ClosedFormKind::ExteriorDiskRational(t) => json!({
                    "kind": "moebius",
                    "formula": "(a z + b) / (c z + d)",
                    "coefficients": t.coefficients().iter().map(|z| pair(*z)).collect::<Vec<_>>(),
                }),
                ClosedFormKind::RealSlit { quadrature, .. } => json!({
                    "kind": "real_slit",
                    "formula": "(e^h - 1) / (e^h + 1), h(z) = 1/2 * integral over E of dt / (z - t)",
                    "nodes_per_interval": quadrature.nodes_per_interval,
                }),
            };
            doc["method"] = json!("closed_form");
            doc["closed_form"] = descriptor;
        }
        Ahlfors::Solved(s) => {
            doc["method"] = json!("extremal_solver");
            doc["basis"] = json!(s
                .basis
                .terms
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>());
            doc["coefficients"] =
                json!(s.coefficients.iter().map(|z| pair(*z)).collect::<Vec<_>>());
            doc["diagnostics"] = json!({
                "iterations": s.diagnostics.iterations,
                "max_boundary_modulus": s.diagnostics.max_boundary_modulus,
                "cut_count": s.diagnostics.cut_count,
                "lp_pivots": s.diagnostics.lp_pivots,
                "value_at_base_point": s.value_at_base_point(),
            });
        }
    }
    Ok(doc)
}

pub fn compute(req: &Request) -> Result<(), CliError> {
    let f = Ahlfors::resolve(req)?;
    let doc = solution_json(req, &f)?;
    output::create_dir(&req.out)?;
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))? + "\n";
    output::write(&req.out.join("solution.json"), &text)?;
    let n = req.samples.unwrap_or(512);
    let samples = req
        .domain
        .sample_boundary(n)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let rows = samples
        .iter()
        .map(|s| (s.component, s.parameter, f.function().eval(s.point).norm()));
    output::write(
        &req.out.join("boundary_modulus.csv"),
        &output::modulus_csv(rows),
    )?;
    println!(
        "gamma={}",
        output::significant(doc["gamma"].as_f64().unwrap_or(f64::NAN), 12)
    );
    Ok(())
}

pub fn capacity(req: &Request) -> Result<(), CliError> {
    let f = Ahlfors::resolve(req)?;
    println!("gamma={}", output::significant(f.gamma(&req.domain)?, 12));
    Ok(())
}

pub fn valence(req: &Request, value: &str) -> Result<(), CliError> {
    let w = output::parse_complex(value)
        .map_err(|e| CliError::Input(format!("--value {value}: {e}")))?;
    let f = Ahlfors::resolve(req)?;
    let n = req.samples.unwrap_or(harness::VALENCE_SAMPLES);
    let count = ahlfors_core::valence(f.function(), &req.domain, w, n)?;
    println!(
        "valence={} raw={}",
        count.count,
        output::significant(count.raw, 12)
    );
    Ok(())
}

pub fn verify(req: &Request) -> Result<(), CliError> {
    let reports =
        harness::run_suite_with_basis(&req.domain, &req.point, &req.basis(), &req.solver_config());
    output::create_dir(&req.out)?;
    output::write(
        &req.out.join("report.jsonl"),
        &reports_to_json_lines(&reports),
    )?;
    for r in &reports {
        println!("{r}");
    }
    if let Some(v) = reports.iter().find(|r| r.check_name == "valence[w=0+0i]") {
        println!("valence={}", v.measured.round());
    }
    let failed = harness::failure_count(&reports);
    println!("{} checks, {failed} failed", reports.len());
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}

/// Smallest resolution accepted by `grid`.
pub const MIN_RESOLUTION: usize = 16;

pub fn grid(req: &Request, resolution: usize) -> Result<(), CliError> {
    if resolution < MIN_RESOLUTION {
        return Err(CliError::Input(format!(
            "--resolution {resolution} is below the minimum {MIN_RESOLUTION}"
        )));
    }
    let f = Ahlfors::resolve(req)?;
    let (lo, hi) = output::viewport(&req.domain);
    let mut rows = Vec::new();
    for j in 0..resolution {
        for i in 0..resolution {
            // cell centres never land on circles or slits of the viewport grid
            let z = Complex64::new(
                lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / resolution as f64,
                lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / resolution as f64,
            );
            if !req.domain.contains(z) {
                continue;
            }
            let w = f.function().eval(z);
            if w.re.is_finite() && w.im.is_finite() {
                rows.push((z, w));
            }
        }
    }
    output::create_dir(&req.out)?;
    output::write(&req.out.join("image_grid.csv"), &output::grid_csv(&rows))?;
    output::write(&req.out.join("image_plot.svg"), &output::image_svg(&rows))?;
    println!("{} grid points", rows.len());
    Ok(())
}
