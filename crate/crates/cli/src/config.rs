use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Certify the bump pair and print the residual table.
    BumpVerify,
    /// Evaluate the truncated transform on its full output support.
    Transform,
    /// Gowers norm of a test function.
    Gowers,
    /// Von Neumann inequality on random tuples over a prime cyclic group.
    VnCheck,
    /// Bad-interval masses and a greedy tree cover.
    TreeStats,
    /// Lower-bound growth curve over a list of ratios.
    Curve,
    /// Single operator-norm search.
    NormSearch,
}

impl Command {
    pub fn randomized(&self, flags: &Flags) -> bool {
        match self {
            Command::BumpVerify => false,
            Command::Transform => flags.input.is_none(),
            Command::Gowers => flags.function == Some(FunctionKind::Random),
            Command::VnCheck | Command::TreeStats | Command::Curve | Command::NormSearch => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    /// f ≡ 1.
    Ones,
    /// Uniform in the unit disk (needs --seed).
    Random,
    /// x ↦ e(x²/N).
    Quadratic,
}

/// Experiment settings. Every key may also be given in a TOML file passed
/// with `--config`; flags on the command line take precedence.
#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Number of input functions.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Dual-form exponents p0,p1,...,pk with Σ 1/p_i = 1 [default: all equal to k+1].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<f64>>,
    /// Lower truncation r [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Upper truncation R [default: 8; tree-stats: 16].
    #[arg(long = "R")]
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub big_r: Option<f64>,
    /// Ratios R/r for `curve` [default: 16,32,...,16384].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<f64>>,
    /// Domain size N [default: command dependent].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_domain: Option<usize>,
    /// Gowers degree d [default: 2].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    /// Test function for `gowers` [default: ones].
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionKind>,
    /// Use the interval norm U^d([N]) instead of the cyclic one.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub interval: bool,
    /// JSON file with the k input signals for `transform`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Bad-interval threshold δ [default: 0.05].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Tree cancellation factor ε [default: 0.5].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Largest tree depth factor A [default: 16].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_max: Option<f64>,
    /// Random trials [default: 64; vn-check: 20].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Random restarts of block ascent [default: 4].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    /// Sweeps per block-ascent run [default: 200].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    /// Density of random indicator sets in `tree-stats` [default: 0.5].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    /// Step sharpness of the bump construction [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharpness: Option<f64>,
    /// Seed; required by randomized commands.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Worker threads; 1 is the reproducibility reference [default: all cores].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Output file [default: stdout].
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    /// Output format [default: csv for curve, json otherwise].
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// θ-grid size for the k=1 multiplier norm [default: 4096].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    /// Tolerance on the oddness of ψ [default: 1e-14].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_odd: Option<f64>,
    /// Tolerance on the dyadic telescoping residual [default: 1e-10].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_telescoping: Option<f64>,
    /// Tolerance on the φ partition residual [default: 1e-12].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_partition: Option<f64>,
    /// Tolerance on values outside the bump supports [default: 0].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_support: Option<f64>,
    /// Relative tolerance for bound checks and re-verification [default: 1e-9].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_verify: Option<f64>,
    /// Allowed relative drop of the block-ascent objective [default: 1e-12].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_monotone: Option<f64>,
    /// Additive slack in the von Neumann inequality [default: 1e-9].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_vn: Option<f64>,
    /// Slack when comparing k=1 bounds with the multiplier norm [default: 1e-6].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_multiplier: Option<f64>,
}

#[derive(Debug, Parser)]
#[command(name = "mht", version, about = "Experiments on truncated multilinear Hilbert transforms")]
pub struct Cli {
    /// Command to run; may instead come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// TOML file with the same keys as the flags, one experiment per file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: Flags,
}

macro_rules! prefer {
    ($a:ident, $b:ident; $($field:ident),*) => {
        Flags {
            $($field: $a.$field.or($b.$field),)*
            interval: $a.interval || $b.interval,
        }
    };
}

impl Flags {
    /// Fields set in `self` win over `fallback`.
    pub fn or(self, fallback: Flags) -> Flags {
        prefer!(self, fallback; command, k, exponents, r, big_r, ratios, n_domain, d, function, input,
            delta, eps, a_max, trials, restarts, max_iter, density, sharpness, seed, workers, out, format,
            grid_points, tol_odd, tol_telescoping, tol_partition, tol_support, tol_verify, tol_monotone,
            tol_vn, tol_multiplier)
    }

    pub fn from_file(path: &Path) -> Result<Flags, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    }

    pub fn seed(&self) -> Result<u64, Failure> {
        self.seed
            .ok_or_else(|| Failure::Config("this command is randomized and needs --seed".into()))
    }

    /// Dual exponents and `k`, reconciling `--k` with the exponent count.
    pub fn dual_exponents(&self, default_k: usize) -> Result<(usize, Vec<f64>), Failure> {
        match (&self.exponents, self.k) {
            (Some(e), Some(k)) if e.len() != k + 1 => Err(Failure::Config(format!(
                "--k {k} needs {} exponents, got {}",
                k + 1,
                e.len()
            ))),
            (Some(e), _) if e.len() < 2 => Err(Failure::Config("need at least two exponents".into())),
            (Some(e), _) => Ok((e.len() - 1, e.clone())),
            (None, k) => {
                let k = k.unwrap_or(default_k);
                if k == 0 {
                    return Err(Failure::Config("--k must be positive".into()));
                }
                Ok((k, vec![(k + 1) as f64; k + 1]))
            }
        }
    }

    pub fn tol_verify(&self) -> f64 {
        self.tol_verify.unwrap_or(1e-9)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let cli = Flags {
            k: Some(2),
            ..Flags::default()
        };
        let file: Flags = toml::from_str("k = 1\nseed = 7\nR = 32.0\nn-domain = 16\ncommand = \"curve\"").unwrap();
        let merged = cli.or(file);
        assert_eq!(merged.k, Some(2));
        assert_eq!(merged.seed, Some(7));
        assert_eq!(merged.big_r, Some(32.0));
        assert_eq!(merged.n_domain, Some(16));
        assert_eq!(merged.command, Some(Command::Curve));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Flags>("sead = 1").is_err());
    }

    #[test]
    fn exponent_defaults() {
        let flags = Flags::default();
        assert_eq!(flags.dual_exponents(2).unwrap(), (2, vec![3.0, 3.0, 3.0]));
        let flags = Flags {
            k: Some(2),
            exponents: Some(vec![2.0, 2.0]),
            ..Flags::default()
        };
        assert!(flags.dual_exponents(1).is_err());
    }
}
