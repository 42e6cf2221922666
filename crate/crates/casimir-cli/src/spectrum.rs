//! Piston cross-section spectrum files.
//!
//! Plain text, one mode level per line:
//!
//! ```text
//! # lambda  degeneracy  family
//! 2.404826  1  D
//! 1.841184  2  N
//! ```
//!
//! * `lambda` is the transverse wavenumber (`−Δψ = λ²ψ` on the section), a
//!   positive finite decimal.
//! * `degeneracy` is a positive integer.
//! * `family` is `D` (Dirichlet, TE) or `N` (Neumann, TM), case-insensitive.
//! * Fields are separated by whitespace. Blank lines and everything after
//!   `#` are ignored. Lines may appear in any order; each family is sorted
//!   on import and repeated eigenvalues within a family are rejected.

use casimir_core::piston::SpectrumEV;

use crate::{CliError, CliResult};

/// Dirichlet and Neumann levels read from a spectrum file.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedSpectrum {
    pub dirichlet: SpectrumEV,
    pub neumann: SpectrumEV,
}

pub fn parse_spectrum(text: &str, origin: &str) -> CliResult<ImportedSpectrum> {
    let mut d = Vec::new();
    let mut n = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| CliError::config(format!("{origin}:{}: {m}", i + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err("expected `lambda degeneracy family`"));
        }
        let lambda: f64 = fields[0].parse().map_err(|_| err("lambda is not a number"))?;
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(err("lambda must be positive and finite"));
        }
        let g: u32 = fields[1].parse().map_err(|_| err("degeneracy must be a positive integer"))?;
        if g == 0 {
            return Err(err("degeneracy must be a positive integer"));
        }
        match fields[2] {
            "D" | "d" => d.push((lambda, g)),
            "N" | "n" => n.push((lambda, g)),
            _ => return Err(err("family must be D or N")),
        }
    }
    let build = |mut v: Vec<(f64, u32)>, fam: &str| -> CliResult<SpectrumEV> {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        if v.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(CliError::config(format!("{origin}: repeated {fam} eigenvalue; merge it into one line")));
        }
        SpectrumEV::new(v).map_err(|e| CliError::config(format!("{origin}: {e}")))
    };
    let out = ImportedSpectrum { dirichlet: build(d, "Dirichlet")?, neumann: build(n, "Neumann")? };
    if out.dirichlet.is_empty() && out.neumann.is_empty() {
        return Err(CliError::config(format!("{origin}: no modes")));
    }
    Ok(out)
}

pub fn read_spectrum(path: &std::path::Path) -> CliResult<ImportedSpectrum> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_spectrum(&text, &path.display().to_string())
}

/// Writes levels in the import format (Dirichlet first).
pub fn format_spectrum(s: &ImportedSpectrum) -> String {
    let mut out = String::from("# lambda degeneracy family\n");
    for (fam, spec) in [("D", &s.dirichlet), ("N", &s.neumann)] {
        for (l, g) in spec.entries() {
            out.push_str(&format!("{l:.17e} {g} {fam}\n"));
        }
    }
    out
}
