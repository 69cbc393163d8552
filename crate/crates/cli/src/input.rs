use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;

use nodal_atlas::{poisson_extend, Boundary, ExtremalSpec, PowerSeries};
use num_complex::Complex64;
use serde::Deserialize;

use crate::failure::{Failure, Numerical};

/// Contents of a `--config` file.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremalConfig {
    pub n: usize,
    #[serde(default)]
    pub phi0_index: usize,
    #[serde(rename = "K", default = "default_truncation")]
    pub truncation: usize,
}

fn default_truncation() -> usize {
    nodal_atlas::series::DEFAULT_TRUNCATION
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

/// Flags override the config file; `n` must come from one of them.
pub fn extremal_settings(
    config: Option<&Path>,
    n: Option<usize>,
    phi0_index: Option<usize>,
    truncation: Option<usize>,
) -> Result<(ExtremalSpec, usize), Failure> {
    let file = config.map(read_json::<ExtremalConfig>).transpose()?;
    let n = n
        .or(file.map(|c| c.n))
        .ok_or_else(|| Failure::Config("missing --n (or \"n\" in --config)".into()))?;
    let index = phi0_index.or(file.map(|c| c.phi0_index)).unwrap_or(0);
    let truncation = truncation
        .or(file.map(|c| c.truncation))
        .unwrap_or_else(default_truncation);
    if truncation < n + 2 {
        return Err(Failure::Config(format!(
            "K = {truncation} must be at least n + 2 = {}",
            n + 2
        )));
    }
    let spec = ExtremalSpec::from_index(n, index).map_err(|e| Failure::Config(e.to_string()))?;
    Ok((spec, truncation))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FunctionFile {
    Boundary(Boundary),
    Series(PowerSeries),
}

/// Reads a holomorphic function given either as a `PowerSeries` or as
/// boundary data, which is Poisson-extended to `truncation` coefficients.
pub fn read_function(path: &Path, truncation: usize) -> Result<PowerSeries, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let parsed: FunctionFile = serde_json::from_str(&text).map_err(|e| {
        Failure::Config(format!(
            "{}: not a power series or boundary description ({e})",
            path.display()
        ))
    })?;
    match parsed {
        FunctionFile::Series(s) => {
            let radius = s.safe_radius();
            PowerSeries::new(s.into_coeffs())
                .map(|s| s.with_safe_radius(radius))
                .map_err(|e| Failure::Config(e.to_string()))
        }
        FunctionFile::Boundary(b) => {
            let b = b.validate().map_err(|e| Failure::Config(e.to_string()))?;
            match poisson_extend(&b, truncation) {
                Err(e @ nodal_atlas::Error::NonzeroMean { .. }) => {
                    Err(Failure::Config(format!("{}: {e}", path.display())))
                }
                other => other.during("boundary", "poisson_extend"),
            }
        }
    }
}

/// `"2"`, `"1..3"` or `"1..=3"`, all inclusive.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    let range = match text.split_once("..") {
        Some((a, b)) => parse(a)?..=parse(b.strip_prefix('=').unwrap_or(b))?,
        None => {
            let n = parse(text)?;
            n..=n
        }
    };
    if range.is_empty() || *range.start() == 0 {
        return Err(format!("{text:?} is not a nonempty range of orders >= 1"));
    }
    Ok(range)
}

/// `"re,im"`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| format!("{text:?}: expected re,im"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("{re:?}: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("{im:?}: {e}"))?;
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2").unwrap(), 2..=2);
        assert_eq!(parse_range("1..3").unwrap(), 1..=3);
        assert_eq!(parse_range("1..=4").unwrap(), 1..=4);
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("a").is_err());
    }

    #[test]
    fn complex_points() {
        assert_eq!(parse_complex("0.5, -0.25").unwrap(), Complex64::new(0.5, -0.25));
        assert!(parse_complex("0.5").is_err());
    }
}
