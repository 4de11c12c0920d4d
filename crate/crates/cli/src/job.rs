//! Job files: TOML describing a system and what to do with it.
//!
//! ```toml
//! kind = "check"             # check | region | derive | oracle-compare
//! alpha = 1.5                # omit when alpha is an axis
//!
//! [system]                   # exactly one of matrix / basis / coefficients
//! basis = [[[-1, 3], [0, -1]], [[-1, 0], [1, -1]], [[-1, 1], [0, 0]]]
//! params = ["beta1", "beta2"]
//! point = { beta1 = 0, beta2 = 0 }
//!
//! [[axes]]
//! name = "beta1"
//! lo = -3
//! hi = 3
//! count = 301
//! sampling = "nodes"         # nodes | centers
//! ```

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use fracrh::matrix::{parse_rational, SquareMatrix};
use fracrh::region::{
    AlphaMode, Axis, DegeneratePolicy, ParamSystem, PolySystem, Route, Sampling, System, ALPHA,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Check,
    Region,
    Derive,
    OracleCompare,
}

/// A number written as an integer, a float or a string such as `"3/4"` or `"-1.25"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Entry {
    pub fn value(&self) -> Result<f64> {
        match self {
            Entry::Int(i) => Ok(*i as f64),
            Entry::Float(f) => Ok(*f),
            Entry::Text(s) => {
                let q = parse_rational(s).map_err(|e| anyhow!("'{s}': {e}"))?;
                q.to_f64().ok_or_else(|| anyhow!("'{s}' is out of range"))
            }
        }
    }
}

pub type MatrixLiteral = Vec<Vec<Entry>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<MatrixLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
    /// Values for parameters that are not on an axis.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub point: BTreeMap<String, Entry>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingSpec {
    #[default]
    Nodes,
    Centers,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    #[serde(default)]
    pub sampling: SamplingSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Pgm,
    #[default]
    Both,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<bool>,
    /// File name stem for the raster files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DegenerateSpec {
    #[default]
    Mark,
    Delegate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteSpec {
    #[default]
    Auto,
    Theorem1,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<DegenerateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<RouteSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeriveSpec {
    pub order: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub count: usize,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axes: Vec<AxisSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derive: Option<DeriveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSpec>,
}

impl JobSpec {
    pub fn new(kind: Kind) -> Self {
        Self {
            kind,
            alpha: None,
            system: None,
            axes: Vec::new(),
            tolerances: None,
            scan: None,
            output: None,
            derive: None,
            random: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let spec: JobSpec = toml::from_str(text).map_err(|e| {
            anyhow!("job file: {}", e.message().trim()).context(describe_span(text, e.span()))
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).context("serializing job")
    }

    fn validate(&self) -> Result<()> {
        if let Some(a) = self.alpha {
            fracrh::check_alpha(a).context("field 'alpha'")?;
        }
        if let Some(sys) = &self.system {
            let forms = [
                sys.matrix.is_some(),
                sys.basis.is_some(),
                sys.coefficients.is_some(),
            ]
            .iter()
            .filter(|b| **b)
            .count();
            if forms != 1 {
                bail!("field 'system': give exactly one of 'matrix', 'basis', 'coefficients' (found {forms})");
            }
            if sys.matrix.is_some() && !sys.params.is_empty() {
                bail!("field 'system.params': a plain matrix has no parameters");
            }
        }
        Ok(())
    }

    pub fn alpha_axis(&self) -> Option<&AxisSpec> {
        self.axes.iter().find(|a| a.name == ALPHA)
    }
}

fn describe_span(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(r) => {
            let line = text[..r.start.min(text.len())].matches('\n').count() + 1;
            format!("at line {line}")
        }
        None => "in job file".to_string(),
    }
}

pub fn square_matrix(lit: &MatrixLiteral, field: &str) -> Result<SquareMatrix> {
    let rows = lit
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, e)| {
                    e.value()
                        .with_context(|| format!("field '{field}' entry ({i}, {j})"))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SquareMatrix::from_rows(rows).with_context(|| format!("field '{field}'"))
}

impl AxisSpec {
    pub fn to_axis(&self) -> Result<Axis> {
        let sampling = match self.sampling {
            SamplingSpec::Nodes => Sampling::Nodes,
            SamplingSpec::Centers => Sampling::Centers,
        };
        Axis::new(&self.name, self.lo, self.hi, self.count, sampling)
            .with_context(|| format!("field 'axes' ({})", self.name))
    }
}

impl DegenerateSpec {
    pub fn policy(self) -> DegeneratePolicy {
        match self {
            DegenerateSpec::Mark => DegeneratePolicy::Mark,
            DegenerateSpec::Delegate => DegeneratePolicy::Delegate,
        }
    }
}

impl RouteSpec {
    pub fn route(self) -> Route {
        match self {
            RouteSpec::Auto => Route::Auto,
            RouteSpec::Theorem1 => Route::Theorem1,
        }
    }
}

/// Builds the system; `alpha` is `None` when it is free (an axis).
pub fn build_system(spec: &SystemSpec, alpha: Option<f64>) -> Result<System> {
    let mode = match alpha {
        Some(a) => AlphaMode::Fixed(a),
        None => AlphaMode::Free,
    };
    if let Some(m) = &spec.matrix {
        let a = square_matrix(m, "system.matrix")?;
        return Ok(System::Matrix(ParamSystem::new(vec![a], vec![], mode)?));
    }
    if let Some(basis) = &spec.basis {
        let mats = basis
            .iter()
            .enumerate()
            .map(|(k, m)| square_matrix(m, &format!("system.basis[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let sys =
            ParamSystem::new(mats, spec.params.clone(), mode).context("field 'system.basis'")?;
        return Ok(System::Matrix(sys));
    }
    if let Some(coeffs) = &spec.coefficients {
        let refs: Vec<&str> = coeffs.iter().map(String::as_str).collect();
        let sys = PolySystem::new(&refs, spec.params.clone(), mode)
            .context("field 'system.coefficients'")?;
        return Ok(System::Poly(sys));
    }
    bail!("field 'system': no system given")
}

/// Values given in `point`, by name.
pub fn fixed_values(spec: &SystemSpec) -> Result<Vec<(String, f64)>> {
    spec.point
        .iter()
        .map(|(k, e)| {
            Ok((
                k.clone(),
                e.value()
                    .with_context(|| format!("field 'system.point.{k}'"))?,
            ))
        })
        .collect()
}

/// Parameter values in declaration order, from `point` (missing ones are an error).
pub fn point_values(spec: &SystemSpec) -> Result<Vec<f64>> {
    for k in spec.point.keys() {
        if !spec.params.contains(k) {
            bail!("field 'system.point': unknown parameter '{k}'");
        }
    }
    spec.params
        .iter()
        .map(|p| {
            spec.point
                .get(p)
                .ok_or_else(|| anyhow!("field 'system.point': missing value for '{p}'"))?
                .value()
                .with_context(|| format!("field 'system.point.{p}'"))
        })
        .collect()
}
