//! Plain-text artifacts. Everything is formatted deterministically.

use std::fmt::Write as _;
use std::path::Path;

use ahlfors_core::{Complex64, Domain};

use crate::commands::CliError;

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// `x` with `digits` significant digits in positional notation.
pub fn significant(x: f64, digits: usize) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `re,im` (a bare real is accepted).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err("expected `re,im`".into()),
    }
}

pub fn modulus_csv(rows: impl Iterator<Item = (usize, f64, f64)>) -> String {
    let mut out = String::from("component,parameter,modulus\n");
    for (c, t, m) in rows {
        let _ = writeln!(out, "{c},{t},{m}");
    }
    out
}

pub fn grid_csv(rows: &[(Complex64, Complex64)]) -> String {
    let mut out = String::from("z_re,z_im,F_re,F_im\n");
    for (z, w) in rows {
        let _ = writeln!(out, "{},{},{},{}", z.re, z.im, w.re, w.im);
    }
    out
}

/// Rectangle `(lower-left, upper-right)` sampled by `grid`.
pub fn viewport(domain: &Domain) -> (Complex64, Complex64) {
    match domain {
        Domain::UnitDisk => (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0)),
        Domain::CircleDomain { outer, .. } => {
            let r = Complex64::new(outer.radius, outer.radius);
            (outer.center - r, outer.center + r)
        }
        Domain::ExteriorUnitDisk => (Complex64::new(-3.0, -3.0), Complex64::new(3.0, 3.0)),
        Domain::RealSlitComplement(set) => {
            let (a, b) = set.hull();
            let w = b - a;
            (
                Complex64::new(a - 0.5 * w, -w),
                Complex64::new(b + 0.5 * w, w),
            )
        }
    }
}

const SVG_SIZE: f64 = 440.0;
const SVG_RADIUS: f64 = 200.0;

/// Scatter of the image points inside the closed unit disk, with the unit
/// circle drawn for reference.
pub fn image_svg(rows: &[(Complex64, Complex64)]) -> String {
    let c = SVG_SIZE / 2.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"<circle cx="{c}" cy="{c}" r="{SVG_RADIUS}" fill="none" stroke="#333" stroke-width="1"/>"##
    );
    let _ = writeln!(out, r##"<g fill="#1f77b4" fill-opacity="0.6">"##);
    for (_, w) in rows {
        if w.norm() > 1.0 + 1e-9 {
            continue;
        }
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#,
            c + SVG_RADIUS * w.re,
            c - SVG_RADIUS * w.im
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(0.25, 12), "0.250000000000");
        assert_eq!(significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(significant(1.098_901_098_901_099, 12), "1.09890109890");
        assert_eq!(significant(2.5, 3), "2.50");
        assert_eq!(significant(12345.678, 3), "12346");
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(
            parse_complex("0.1,-0.2").unwrap(),
            Complex64::new(0.1, -0.2)
        );
        assert_eq!(parse_complex(" 3 ").unwrap(), Complex64::new(3.0, 0.0));
        assert!(parse_complex("a,b").is_err());
        assert!(parse_complex("1,2,3").is_err());
    }

    #[test]
    fn csv_headers() {
        assert!(modulus_csv(std::iter::empty()).starts_with("component,parameter,modulus\n"));
        assert_eq!(grid_csv(&[]), "z_re,z_im,F_re,F_im\n");
    }
}
