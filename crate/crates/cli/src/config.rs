//! Resolved run configuration: built-in defaults, then a `key = value`
//! file, then command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Energies,
    Occupations,
    Cumulants,
    Fano,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LambdaUnits {
    Absolute,
    Lambda2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Diagonalizer,
    PrepSteady,
    RwaOracle,
    FiniteJ,
}

macro_rules! value_enum_text {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let v = self.to_possible_value().expect("no skipped variants");
                f.write_str(v.get_name())
            }
        }

        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}

value_enum_text!(Quantity, LambdaUnits, Spacing, Suite);

/// λ sweep `start:end:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRange {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl FromStr for LambdaRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("lambda range '{s}' must look like A:B:N"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        Ok(Self {
            start: num(a)?,
            end: num(b)?,
            points: n.trim().parse().map_err(|e| format!("'{n}': {e}"))?,
        })
    }
}

impl fmt::Display for LambdaRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.points)
    }
}

/// Flags shared by every subcommand. Unset flags fall through to the
/// config file, then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// `key = value` config file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub omega0: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Single coupling (absolute units) for evolve and verify
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Sweep as A:B:N
    #[arg(long, global = true)]
    pub lambda_range: Option<LambdaRange>,
    #[arg(long, global = true)]
    pub lambda_units: Option<LambdaUnits>,
    #[arg(long, global = true)]
    pub spacing: Option<Spacing>,
    /// Extra sweep points at relative distances 1e-2 .. 1e-(N+1) outside λ1 and λ3
    #[arg(long, global = true)]
    pub edge_points: Option<usize>,
    #[arg(long, global = true)]
    pub quantity: Option<Quantity>,
    #[arg(long, global = true)]
    pub jet_order: Option<usize>,
    /// Pseudo-spin length j = N/2 for extensive parts
    #[arg(long = "j", global = true)]
    pub j_atoms: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Width ε of the centered Gaussian start for evolve
    #[arg(long, global = true)]
    pub ic_width: Option<f64>,
    #[arg(long, global = true)]
    pub rwa_cutoff: Option<usize>,
    #[arg(long, global = true)]
    pub photon_cutoff: Option<usize>,
    #[arg(long, global = true)]
    pub suite: Option<Suite>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega0: f64,
    pub omega: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub lambda_range: LambdaRange,
    pub lambda_units: LambdaUnits,
    pub spacing: Spacing,
    pub edge_points: usize,
    pub quantity: Quantity,
    pub jet_order: usize,
    pub j_atoms: f64,
    pub t_max: f64,
    pub samples: usize,
    pub ic_width: f64,
    pub rwa_cutoff: usize,
    pub photon_cutoff: usize,
    pub suite: Suite,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    /// ω = 2Γ, ω0 = Γ/2 with Γ = 1; j = 1/2 makes extensive parts per atom.
    fn default() -> Self {
        Self {
            omega0: 0.5,
            omega: 2.0,
            gamma: 1.0,
            lambda: 0.3,
            lambda_range: LambdaRange {
                start: 0.0,
                end: 3.0,
                points: 301,
            },
            lambda_units: LambdaUnits::Lambda2,
            spacing: Spacing::Linear,
            edge_points: 6,
            quantity: Quantity::Cumulants,
            jet_order: 5,
            j_atoms: 0.5,
            t_max: 100.0,
            samples: 201,
            ic_width: 1.0,
            rwa_cutoff: 60,
            photon_cutoff: 24,
            suite: Suite::All,
            seed: 20_240_601,
            out: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Input(format!("config key '{key}': {e}")))
}

impl RunConfig {
    pub fn resolve(overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(path) = &overrides.config {
            cfg.apply_file(path)?;
        }
        cfg.apply_overrides(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Input(format!("config line {}: expected key = value", n + 1)));
            };
            self.set(&key.trim().replace('-', "_"), value.trim())?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "omega0" => self.omega0 = parse(key, v)?,
            "omega" => self.omega = parse(key, v)?,
            "gamma" => self.gamma = parse(key, v)?,
            "lambda" => self.lambda = parse(key, v)?,
            "lambda_range" => self.lambda_range = parse(key, v)?,
            "lambda_units" => self.lambda_units = parse(key, v)?,
            "spacing" => self.spacing = parse(key, v)?,
            "edge_points" => self.edge_points = parse(key, v)?,
            "quantity" => self.quantity = parse(key, v)?,
            "jet_order" => self.jet_order = parse(key, v)?,
            "j" | "j_atoms" => self.j_atoms = parse(key, v)?,
            "t_max" => self.t_max = parse(key, v)?,
            "samples" => self.samples = parse(key, v)?,
            "ic_width" => self.ic_width = parse(key, v)?,
            "rwa_cutoff" => self.rwa_cutoff = parse(key, v)?,
            "photon_cutoff" => self.photon_cutoff = parse(key, v)?,
            "suite" => self.suite = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            _ => return Err(CliError::Input(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    fn apply_overrides(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => {$(
                if let Some(v) = o.$f.clone() {
                    self.$f = v;
                }
            )*};
        }
        take!(
            omega0,
            omega,
            gamma,
            lambda,
            lambda_range,
            lambda_units,
            spacing,
            edge_points,
            quantity,
            jet_order,
            j_atoms,
            t_max,
            samples,
            ic_width,
            rwa_cutoff,
            photon_cutoff,
            suite,
            seed
        );
        if o.out.is_some() {
            self.out = o.out.clone();
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Input(m));
        for (name, v) in [("omega0", self.omega0), ("omega", self.omega), ("j", self.j_atoms)] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} = {v} must be finite and > 0"));
            }
        }
        for (name, v) in [("gamma", self.gamma), ("lambda", self.lambda)] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} = {v} must be finite and >= 0"));
            }
        }
        let r = self.lambda_range;
        if !(r.start.is_finite() && r.end.is_finite() && r.start >= 0.0 && r.end > r.start) {
            return bad(format!("lambda range {r} must satisfy 0 <= A < B"));
        }
        if r.points < 2 {
            return bad(format!("lambda range {r} needs at least 2 points"));
        }
        if self.spacing == Spacing::Log && r.start <= 0.0 {
            return bad("log spacing needs a positive range start".into());
        }
        if !(1..=12).contains(&self.jet_order) {
            return bad(format!("jet order {} must be in 1..=12", self.jet_order));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) || self.samples < 2 {
            return bad("time trace needs t_max > 0 and at least 2 samples".into());
        }
        if !(self.ic_width.is_finite() && self.ic_width > 0.0) {
            return bad(format!("ic width {} must be > 0", self.ic_width));
        }
        Ok(())
    }

    /// Every resolved key as `key = value`, in a fixed order.
    pub fn echo(&self) -> Vec<String> {
        let out = self
            .out
            .as_ref()
            .map_or_else(|| "-".to_string(), |p| p.display().to_string());
        vec![
            format!("omega0 = {}", self.omega0),
            format!("omega = {}", self.omega),
            format!("gamma = {}", self.gamma),
            format!("lambda = {}", self.lambda),
            format!("lambda_range = {}", self.lambda_range),
            format!("lambda_units = {}", self.lambda_units),
            format!("spacing = {}", self.spacing),
            format!("edge_points = {}", self.edge_points),
            format!("quantity = {}", self.quantity),
            format!("jet_order = {}", self.jet_order),
            format!("j = {}", self.j_atoms),
            format!("t_max = {}", self.t_max),
            format!("samples = {}", self.samples),
            format!("ic_width = {}", self.ic_width),
            format!("rwa_cutoff = {}", self.rwa_cutoff),
            format!("photon_cutoff = {}", self.photon_cutoff),
            format!("suite = {}", self.suite),
            format!("seed = {}", self.seed),
            format!("out = {out}"),
        ]
    }
}
