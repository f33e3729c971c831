//! Command-line flags, the optional JSON config, and their merge into a
//! fully resolved [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use icefish_core::analysis::CurvatureSource;
use icefish_core::basis::Geometry;
use icefish_core::Bond;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Eigenvalues and surface profiles at one Bond number.
    Solve,
    /// High-spot location over a grid of Bond numbers.
    Sweep,
    /// Critical Bond number where the high spot leaves the edge.
    Bondstar,
    /// Eigenvalue and profile errors against a reference cutoff.
    Converge,
    /// Closed-form matrix entries against independent quadrature.
    Validate,
    /// Gravity and surface-tension parts of the fundamental mode.
    Energy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Bondstar => "bondstar",
            Command::Converge => "converge",
            Command::Validate => "validate",
            Command::Energy => "energy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryArg {
    Strip,
    Hole,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Strip => Geometry::Strip,
            GeometryArg::Hole => Geometry::Hole,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Log,
    Linear,
}

/// Closed form used for the raw hole kernel in `validate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelForm {
    /// Distance factor `1/4 - (i - j)^2`.
    Corrected,
    /// Distance factor `1/4 - (j - 1)^2`; fails the oracle off the first row.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Curvature {
    /// Second derivative of the polynomial expansion.
    Direct,
    /// `m^2 + Bo (1 - lambda (S xi)(1))`.
    Formula,
}

impl From<Curvature> for CurvatureSource {
    fn from(c: Curvature) -> Self {
        match c {
            Curvature::Direct => CurvatureSource::Direct,
            Curvature::Formula => CurvatureSource::Formula,
        }
    }
}

/// Flags as given. Every field is optional so that a JSON config can fill
/// the gaps; flags given on the command line win.
#[derive(Parser, Debug, Default, Deserialize)]
#[command(
    name = "icefish",
    version,
    about = "Sloshing eigenproblems with surface tension",
    allow_negative_numbers = true
)]
#[serde(default, deny_unknown_fields)]
pub struct RawArgs {
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON file with any of the flags below (snake_case keys).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryArg>,
    /// Azimuthal mode (hole); the largest mode for `validate`.
    #[arg(long)]
    pub m: Option<u32>,
    /// Bond number(s), comma separated; `inf` drops surface tension.
    #[arg(long, value_delimiter = ',')]
    #[serde(deserialize_with = "bond_list")]
    pub bond: Vec<String>,
    /// Basis cutoff; the largest index for `validate`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of eigenpairs.
    #[arg(long)]
    pub count: Option<usize>,
    /// Slope parameter of the fixed-point map, greater than 1.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Stopping threshold (fixed-point step or bisection width).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Starting Bond number of the fixed-point iteration.
    #[arg(long)]
    pub bond0: Option<f64>,
    /// Iteration budget of the fixed-point iteration.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Lower end of the sweep grid or the strip bisection bracket.
    #[arg(long)]
    pub min: Option<f64>,
    /// Upper end of the sweep grid or the strip bisection bracket.
    #[arg(long)]
    pub max: Option<f64>,
    /// Number of sweep points.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
    /// Cutoffs of a convergence study, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ns: Vec<usize>,
    /// Reference cutoff of a convergence study.
    #[arg(long)]
    #[serde(alias = "n-ref")]
    pub n_ref: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write the fixed-point trace.
    #[arg(long)]
    pub trace: bool,
    /// Run `bondstar` for m >= 6, where no fixed point exists.
    #[arg(long)]
    #[serde(alias = "allow-no-fixed-point")]
    pub allow_no_fixed_point: bool,
    #[arg(long, value_enum)]
    #[serde(alias = "kernel-form")]
    pub kernel_form: Option<KernelForm>,
    /// Edge curvature used by the strip bisection.
    #[arg(long, value_enum)]
    pub curvature: Option<Curvature>,
}

/// A JSON `bond` may be a number, a string, or a list of either.
fn bond_list<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum One {
        Num(f64),
        Text(String),
    }
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(One),
        Many(Vec<One>),
    }
    let text = |o: One| match o {
        One::Num(v) => v.to_string(),
        One::Text(s) => s,
    };
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(o) => vec![text(o)],
        OneOrMany::Many(v) => v.into_iter().map(text).collect(),
    })
}

impl RawArgs {
    /// Fill every unset field from `file`.
    fn merge(mut self, file: RawArgs) -> RawArgs {
        macro_rules! fill {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = file.$f; } )* };
        }
        fill!(
            command,
            geometry,
            m,
            n,
            count,
            alpha,
            threshold,
            bond0,
            budget,
            min,
            max,
            points,
            scale,
            n_ref,
            out,
            format,
            kernel_form,
            curvature
        );
        if self.bond.is_empty() {
            self.bond = file.bond;
        }
        if self.ns.is_empty() {
            self.ns = file.ns;
        }
        self.trace |= file.trace;
        self.allow_no_fixed_point |= file.allow_no_fixed_point;
        self
    }
}

fn serialize_bonds<S: Serializer>(bonds: &[Bond], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(bonds.iter().map(|b| b.to_string()))
}

/// Sample grid over Bond numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                let t = k as f64 / last;
                match self.scale {
                    Scale::Log => self.min * (self.max / self.min).powf(t),
                    Scale::Linear => self.min + (self.max - self.min) * t,
                }
            })
            .collect()
    }
}

/// Fully resolved run parameters; what the sidecar file records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    /// `None` only for `validate`, which then covers both geometries.
    pub geometry: Option<GeometryArg>,
    pub m: u32,
    #[serde(serialize_with = "serialize_bonds")]
    pub bonds: Vec<Bond>,
    pub n: usize,
    /// Index bound of the hole rows of `validate`; equals `n` unless both
    /// geometries run on defaults.
    pub hole_n: usize,
    pub count: usize,
    pub alpha: f64,
    pub threshold: f64,
    pub bond0: f64,
    pub budget: usize,
    pub grid: Grid,
    pub ns: Vec<usize>,
    pub n_ref: usize,
    pub out: PathBuf,
    pub format: Format,
    pub trace: bool,
    pub allow_no_fixed_point: bool,
    pub kernel_form: KernelForm,
    pub curvature: Curvature,
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {msg}"))
}

fn read_config(path: &Path) -> Result<RawArgs, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage("--config", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage("--config", format!("{}: {e}", path.display())))
}

impl RunConfig {
    /// Merge flags with the optional config file and apply per-command
    /// defaults and preconditions.
    pub fn resolve(raw: RawArgs) -> Result<RunConfig, CliError> {
        let raw = match raw.config.clone() {
            Some(path) => raw.merge(read_config(&path)?),
            None => raw,
        };
        let command = raw.command.ok_or_else(|| {
            usage(
                "command",
                "missing; expected one of solve, sweep, bondstar, converge, validate, energy",
            )
        })?;

        let geometry = match (command, raw.geometry) {
            (_, Some(g)) => Some(g),
            (Command::Bondstar, None) => Some(GeometryArg::Hole),
            (Command::Validate, None) => None,
            (_, None) => return Err(usage("--geometry", "required (strip or hole)")),
        };
        let is_strip = geometry == Some(GeometryArg::Strip);
        let m = match (geometry, raw.m) {
            (Some(GeometryArg::Strip), Some(m)) if m != 0 => {
                return Err(usage("--m", "the strip has no azimuthal mode"));
            }
            (_, Some(m)) => m,
            (_, None) if command == Command::Validate => 3,
            (Some(GeometryArg::Hole), None) => 1,
            _ => 0,
        };

        let bonds = raw
            .bond
            .iter()
            .map(|s| {
                s.parse::<Bond>().map_err(|_| {
                    usage("--bond", format!("'{s}' is not a positive number or 'inf'"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let bonds = match command {
            Command::Solve if bonds.len() != 1 => {
                return Err(usage("--bond", "solve takes exactly one Bond number"));
            }
            Command::Energy if bonds.is_empty() => return Err(usage("--bond", "required")),
            Command::Converge if bonds.is_empty() => {
                vec![Bond::Finite(0.1), Bond::Finite(1.0), Bond::Finite(10.0)]
            }
            _ => bonds,
        };

        let n = raw.n.unwrap_or(match command {
            Command::Validate if is_strip || geometry.is_none() => 10,
            Command::Validate => 8,
            Command::Sweep | Command::Bondstar => 80,
            _ => 200,
        });
        let hole_n = match (command, raw.n) {
            (Command::Validate, None) => 8,
            _ => n,
        };
        let count = raw.count.unwrap_or(match command {
            Command::Converge => 2,
            _ => 3,
        });
        if count == 0 {
            return Err(usage("--count", "must be at least 1"));
        }

        let alpha = raw.alpha.unwrap_or(2.0);
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(usage("--alpha", "must be a finite number greater than 1"));
        }
        let threshold = raw
            .threshold
            .unwrap_or(if is_strip { 1e-10 } else { 1e-14 });
        if !(threshold > 0.0 && threshold.is_finite()) {
            return Err(usage("--threshold", "must be positive"));
        }
        let bond0 = raw.bond0.unwrap_or(2.0);
        if !(bond0 >= 1.0 && bond0.is_finite()) {
            return Err(usage("--bond0", "must be at least 1"));
        }
        let budget = raw.budget.unwrap_or(10_000);
        if budget == 0 {
            return Err(usage("--budget", "must be at least 1"));
        }

        let bracket_defaults = command == Command::Bondstar && is_strip;
        let grid = Grid {
            min: raw.min.unwrap_or(if bracket_defaults { 5.0 } else { 1.0 }),
            max: raw.max.unwrap_or(if bracket_defaults { 15.0 } else { 1e3 }),
            points: raw.points.unwrap_or(32),
            scale: raw.scale.unwrap_or(Scale::Log),
        };
        if !(grid.min > 0.0 && grid.min.is_finite()) {
            return Err(usage("--min", "must be positive"));
        }
        if !(grid.max >= grid.min && grid.max.is_finite()) {
            return Err(usage("--max", "must be finite and at least --min"));
        }
        if grid.points == 0 {
            return Err(usage("--points", "must be at least 1"));
        }

        let ns = if raw.ns.is_empty() {
            vec![8, 16, 32, 64, 128, 256]
        } else {
            raw.ns.clone()
        };
        let n_ref = raw.n_ref.unwrap_or(2000);
        if command == Command::Converge {
            if let Some(bad) = ns.iter().find(|&&k| k > n_ref) {
                return Err(usage(
                    "--ns",
                    format!("cutoff {bad} exceeds --n-ref {n_ref}"),
                ));
            }
        }

        if command == Command::Bondstar && !is_strip {
            if m == 0 {
                return Err(usage("--m", "the fixed-point map needs m >= 1"));
            }
            if m >= 6 && !raw.allow_no_fixed_point {
                return Err(usage(
                    "--m",
                    "no fixed point exists for m >= 6; pass --allow-no-fixed-point to run anyway",
                ));
            }
        }

        Ok(RunConfig {
            command,
            geometry,
            m,
            bonds,
            n,
            hole_n,
            count,
            alpha,
            threshold,
            bond0,
            budget,
            grid,
            ns,
            n_ref,
            out: raw.out.unwrap_or_else(|| PathBuf::from(".")),
            format: raw.format.unwrap_or(Format::Csv),
            trace: raw.trace,
            allow_no_fixed_point: raw.allow_no_fixed_point,
            kernel_form: raw.kernel_form.unwrap_or(KernelForm::Corrected),
            curvature: raw.curvature.unwrap_or(Curvature::Direct),
        })
    }

    /// The geometry of single-geometry commands.
    pub fn geometry(&self) -> Geometry {
        self.geometry.unwrap_or(GeometryArg::Hole).into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let raw = RawArgs::try_parse_from(std::iter::once("icefish").chain(args.iter().copied()))
            .expect("flags parse");
        RunConfig::resolve(raw)
    }

    #[test]
    fn defaults_per_command() {
        let c = parse(&["bondstar"]).unwrap();
        assert_eq!(
            (c.geometry, c.m, c.n, c.alpha),
            (Some(GeometryArg::Hole), 1, 80, 2.0)
        );
        let c = parse(&["converge", "--geometry", "strip"]).unwrap();
        assert_eq!(c.bonds.len(), 3);
        assert_eq!(c.ns, vec![8, 16, 32, 64, 128, 256]);
        let c = parse(&["validate"]).unwrap();
        assert_eq!((c.geometry, c.m, c.n, c.hole_n), (None, 3, 10, 8));
    }

    #[test]
    fn diagnostics_name_the_flag() {
        for (args, flag) in [
            (&["solve", "--geometry", "strip"][..], "--bond"),
            (
                &["solve", "--geometry", "strip", "--bond", "Infinity"],
                "--bond",
            ),
            (&["solve", "--bond", "1"], "--geometry"),
            (
                &["solve", "--geometry", "strip", "--m", "2", "--bond", "1"],
                "--m",
            ),
            (&["bondstar", "--m", "6"], "--m"),
            (&["bondstar", "--alpha", "1"], "--alpha"),
            (
                &["sweep", "--geometry", "hole", "--min", "10", "--max", "1"],
                "--max",
            ),
            (
                &[
                    "converge",
                    "--geometry",
                    "hole",
                    "--ns",
                    "8,64",
                    "--n-ref",
                    "32",
                ],
                "--ns",
            ),
        ] {
            match parse(args) {
                Err(CliError::Usage(msg)) => {
                    assert!(msg.starts_with(flag), "{args:?}: {msg}");
                    assert!(!msg.contains('\n'));
                }
                other => panic!("{args:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn grid_endpoints() {
        let g = Grid {
            min: 1.0,
            max: 1e3,
            points: 4,
            scale: Scale::Log,
        };
        let v = g.values();
        assert_eq!(v[0], 1.0);
        assert!((v[1] - 10.0).abs() < 1e-12 && (v[3] - 1e3).abs() < 1e-9);
        let g = Grid { points: 1, ..g };
        assert_eq!(g.values(), vec![1.0]);
    }

    #[test]
    fn config_file_fills_gaps_and_flags_win() {
        let file: RawArgs = serde_json::from_str(
            r#"{"command": "solve", "geometry": "hole", "bond": "inf", "n": 40, "m": 2}"#,
        )
        .unwrap();
        let cli = RawArgs {
            n: Some(30),
            ..Default::default()
        };
        let c = RunConfig::resolve(cli.merge(file)).unwrap();
        assert_eq!((c.command, c.n, c.m), (Command::Solve, 30, 2));
        assert_eq!(c.bonds, vec![Bond::Infinite]);
        let list: RawArgs = serde_json::from_str(r#"{"bond": [1, "inf", 2.5]}"#).unwrap();
        assert_eq!(list.bond, vec!["1", "inf", "2.5"]);
        assert!(serde_json::from_str::<RawArgs>(r#"{"bogus": 1}"#).is_err());
    }
}
