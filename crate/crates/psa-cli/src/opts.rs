//! Argument types and parsing helpers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psa_core::functions::{builtin_by_id, Params};
use psa_core::FunctionSpec64;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "psa",
    version,
    about = "Prime-sum asymptotics: exact sums, main terms, remainder bounds, condition checks",
    after_help = "Grids: `a:b:gR` is geometric from a to b with ratio R (e.g. 1e3:1e6:g10); \
                  `1000,5000,20000` is an explicit list. Set PSA_CACHE_DIR to cache sieve segments."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact sums beside main terms and remainder bounds over a grid of n
    Table(TableArgs),
    /// Sufficient/necessary condition checks with evidence trails
    Conditions(ConditionsArgs),
    /// Chebyshev theta against the two log-space product bounds
    ProductBound(ProductBoundArgs),
    /// Identity-verification suites (summation routes and integration by parts)
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct FunctionArgs {
    /// Function id: one, log, recip, log_over_t, power, power_log, exp2
    #[arg(long)]
    pub function: String,
    /// Family parameter, repeatable: m=<float> and/or k=<integer>
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

impl FunctionArgs {
    pub fn parsed_params(&self) -> Result<Params<f64>, CliError> {
        let mut params = Params::none();
        for raw in &self.params {
            let (key, value) = raw
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--param `{raw}` is not KEY=VALUE")))?;
            match key {
                "m" => {
                    let m: f64 = value
                        .parse()
                        .map_err(|_| CliError::Usage(format!("--param m=`{value}` is not a float")))?;
                    params.m = Some(m);
                }
                "k" => {
                    let k: u32 = value
                        .parse()
                        .map_err(|_| CliError::Usage(format!("--param k=`{value}` is not a non-negative integer")))?;
                    params.k = Some(k);
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown --param key `{other}` (expected m or k)"
                    )))
                }
            }
        }
        Ok(params)
    }

    pub fn build_spec(&self) -> Result<FunctionSpec64, CliError> {
        let params = self.parsed_params()?;
        Ok(builtin_by_id(&self.function, params)?)
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ModelArgs {
    /// Exponential-saving constant c in exp(-c (log n)^theta)
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Crude product-bound constant c1
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    /// Conditional product-bound constant c2
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
    /// Conditional product-bound exponent offset
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Exponent theta of the exponential-saving weight
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
}

impl ModelArgs {
    pub fn model(&self, kind: psa_core::asymptotic::ModelKind) -> psa_core::ErrorModel64 {
        psa_core::ErrorModel64 {
            kind,
            c: self.c,
            c1: self.c1,
            c2: self.c2,
            epsilon: self.epsilon,
            theta: self.theta,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn id(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for independent grid rows (row order is preserved)
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Grid of n values (`a:b:gR` geometric or explicit comma list)
    #[arg(long, default_value = "1e3:1e6:g10")]
    pub grid: String,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ConditionsArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Grid of n values; the necessary check runs on the next prime >= each
    #[arg(long, default_value = "1e3:1e7:g10")]
    pub grid: String,
    /// Condition-1 threshold: minimum distance of the statistic from 1
    #[arg(long, default_value_t = 0.05)]
    pub distance_from_one: f64,
    /// Condition-3 threshold: required growth of the integral per decade
    #[arg(long, default_value_t = 0.10)]
    pub growth_per_decade: f64,
    /// Necessary-condition threshold: required decay of r(p) per decade
    #[arg(long, default_value_t = 0.25)]
    pub decay_per_decade: f64,
    /// Necessary-condition level above which non-decreasing r(p) fails
    #[arg(long, default_value_t = 0.5)]
    pub fail_level: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl ConditionsArgs {
    pub fn thresholds(&self) -> psa_core::ConditionThresholds64 {
        psa_core::ConditionThresholds64 {
            distance_from_one: self.distance_from_one,
            growth_per_decade: self.growth_per_decade,
            decay_per_decade: self.decay_per_decade,
            fail_level: self.fail_level,
        }
    }
}

#[derive(Args, Debug)]
pub struct ProductBoundArgs {
    /// Grid of n values
    #[arg(long, default_value = "10:1e7:g10")]
    pub grid: String,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Largest n of the summation-identity cases
    #[arg(long, default_value_t = 10_000)]
    pub abel_max: u64,
    /// Largest n of the by-parts identity cases
    #[arg(long, default_value_t = 100_000)]
    pub ibp_max: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parse `a:b:gR`, an explicit comma list, or a single value. Entries accept
/// float syntax (1e6) and must be strictly increasing integers >= `min`.
pub fn parse_grid(input: &str, min: u64) -> Result<Vec<u64>, CliError> {
    let usage = |msg: String| CliError::Usage(format!("--grid `{input}`: {msg}"));
    let parse_point = |tok: &str| -> Result<u64, CliError> {
        let v: f64 = tok
            .trim()
            .parse()
            .map_err(|_| usage(format!("`{tok}` is not a number")))?;
        if !v.is_finite() || !(0.0..=1.8e19).contains(&v) {
            return Err(usage(format!("`{tok}` is out of range")));
        }
        Ok(v.round() as u64)
    };

    let points: Vec<u64> = if let Some((range, ratio)) = input.rsplit_once(":g") {
        let (a, b) = range
            .split_once(':')
            .ok_or_else(|| usage("geometric form is a:b:gR".into()))?;
        let a = parse_point(a)?;
        let b = parse_point(b)?;
        let r: f64 = ratio
            .parse()
            .map_err(|_| usage(format!("ratio `{ratio}` is not a number")))?;
        if r <= 1.0 || !r.is_finite() {
            return Err(usage("ratio must be > 1".into()));
        }
        if a > b {
            return Err(usage("need a <= b".into()));
        }
        let mut points = Vec::new();
        let mut x = a as f64;
        while x <= b as f64 * (1.0 + 1e-12) {
            let p = x.round() as u64;
            if points.last() != Some(&p) {
                points.push(p.min(b));
            }
            x *= r;
        }
        points
    } else if input.contains(',') {
        input
            .split(',')
            .map(parse_point)
            .collect::<Result<Vec<_>, _>>()?
    } else {
        vec![parse_point(input)?]
    };

    if points.is_empty() {
        return Err(usage("empty grid".into()));
    }
    if let Some(&bad) = points.iter().find(|&&p| p < min) {
        return Err(usage(format!("grid point {bad} is below the minimum {min}")));
    }
    if !points.windows(2).all(|w| w[0] < w[1]) {
        return Err(usage("grid must be strictly increasing".into()));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grids() {
        assert_eq!(
            parse_grid("1e3:1e6:g10", 2).unwrap(),
            vec![1000, 10_000, 100_000, 1_000_000]
        );
        assert_eq!(parse_grid("10:1e2:g3", 2).unwrap(), vec![10, 30, 90]);
        assert_eq!(parse_grid("5:5:g10", 2).unwrap(), vec![5]);
    }

    #[test]
    fn explicit_grids() {
        assert_eq!(
            parse_grid("1000,10000,100000", 2).unwrap(),
            vec![1000, 10_000, 100_000]
        );
        assert_eq!(parse_grid("42", 2).unwrap(), vec![42]);
    }

    #[test]
    fn bad_grids_are_usage_errors() {
        assert!(parse_grid("10,5", 2).is_err());
        assert!(parse_grid("abc", 2).is_err());
        assert!(parse_grid("10:100:g1", 2).is_err());
        assert!(parse_grid("1,2,3", 3).is_err());
        assert!(parse_grid("100:10:g2", 2).is_err());
    }
}
