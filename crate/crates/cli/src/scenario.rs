//! Scenario documents: the JSON schema, its validation, and compilation into
//! core objects.

use std::collections::BTreeMap;

use hamflow_core::hj::ContactField;
use hamflow_core::sampling::{SampleBox, DEFAULT_SEED};
use hamflow_core::{ChartSpec, FundamentalForm, GeneratingFunction, NormalForm, OneForm, ScalarField};
use serde::Deserialize;

use crate::checks::Check;
use crate::error::CliError;

/// Environment variable that replaces the scenario's seed.
pub const SEED_VAR: &str = "HAMFLOW_SEED";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub dimension: usize,
    pub system: SystemDef,
    pub initial: InitialDef,
    pub run: RunDef,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub sample_box: Option<Vec<(f64, f64)>>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Prescribed curve for the integrability check.
    #[serde(default)]
    pub curve: Option<CurveDef>,
    /// Closed-form `x(t)` the integrated trajectory is compared against.
    #[serde(default)]
    pub reference: Option<Vec<String>>,
    #[serde(default)]
    pub hj: Option<HjDef>,
    /// Components `(dt, dx.., dp..)` of a given 1-form η.
    #[serde(default)]
    pub eta: Option<Vec<String>>,
    /// Hand-derived Hamiltonian of a Lagrangian system.
    #[serde(default)]
    pub hamiltonian: Option<String>,
    /// Velocity-picture description of a normal-form system.
    #[serde(default)]
    pub counterpart: Option<FundamentalFormDef>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemDef {
    Lagrangian(String),
    FundamentalForm(FundamentalFormDef),
    NormalForm(NormalFormDef),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FundamentalFormDef {
    #[serde(rename = "P")]
    pub power: String,
    #[serde(rename = "F")]
    pub force: Vec<String>,
    pub p: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormDef {
    #[serde(rename = "H")]
    pub hamiltonian: String,
    #[serde(default)]
    pub terms: Vec<TermDef>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDef {
    pub mu: String,
    pub v: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDef {
    #[serde(default)]
    pub t0: f64,
    pub x: Vec<f64>,
    #[serde(default)]
    pub v: Option<Vec<f64>>,
    #[serde(default)]
    pub p: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDef {
    pub t1: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDef {
    pub x: Vec<String>,
    #[serde(default)]
    pub v: Option<Vec<String>>,
    #[serde(default)]
    pub expected_residual: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HjDef {
    #[serde(default, rename = "S")]
    pub generating_function: Option<String>,
    #[serde(default)]
    pub p: Option<Vec<String>>,
    #[serde(default)]
    pub expected_closure: f64,
}

impl Scenario {
    /// Parses a JSON document, reporting the line, column and field path of
    /// the first problem.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let mut de = serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            CliError::Config(format!(
                "line {} column {} (field `{path}`): {inner}",
                inner.line(),
                inner.column()
            ))
        })
    }
}

#[derive(Debug, Clone)]
pub enum System {
    Lagrangian(ScalarField),
    FundamentalForm(FundamentalForm),
    NormalForm(NormalForm),
}

impl System {
    pub fn chart(&self) -> ChartSpec {
        match self {
            System::Lagrangian(l) => l.chart(),
            System::FundamentalForm(phi) => phi.chart(),
            System::NormalForm(nf) => nf.chart(),
        }
    }

    pub fn variant(&self) -> &'static str {
        match self {
            System::Lagrangian(_) => "lagrangian",
            System::FundamentalForm(_) => "fundamental_form",
            System::NormalForm(_) => "normal_form",
        }
    }

    /// Every expression that defines the system.
    pub fn fields(&self) -> Vec<&ScalarField> {
        match self {
            System::Lagrangian(l) => vec![l],
            System::FundamentalForm(phi) => {
                std::iter::once(&phi.power).chain(&phi.force).chain(&phi.momentum).collect()
            }
            System::NormalForm(nf) => {
                std::iter::once(&nf.hamiltonian).chain(nf.terms.iter().flat_map(|(mu, v)| [mu, v])).collect()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub x: Vec<ScalarField>,
    pub v: Option<Vec<ScalarField>>,
    pub expected: f64,
}

#[derive(Debug, Clone)]
pub struct HamiltonJacobi {
    pub generating_function: Option<GeneratingFunction>,
    pub contact_field: ContactField,
    pub expected_closure: f64,
}

/// A validated scenario with every expression compiled.
#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub dimension: usize,
    pub system: System,
    /// Full initial chart point `(t0, x0, v0 | p0)`.
    pub initial: Vec<f64>,
    pub t1: f64,
    pub step: f64,
    pub checks: Vec<Check>,
    pub tolerances: BTreeMap<Check, f64>,
    pub sample_box: SampleBox,
    pub seed: u64,
    pub curve: Option<Curve>,
    pub reference: Option<Vec<ScalarField>>,
    pub hj: Option<HamiltonJacobi>,
    pub eta: Option<OneForm>,
    pub hamiltonian: Option<ScalarField>,
    pub counterpart: Option<FundamentalForm>,
}

impl Model {
    pub fn tolerance(&self, check: Check) -> f64 {
        self.tolerances.get(&check).copied().unwrap_or_else(|| check.default_tolerance())
    }

    /// Box restricted to the `(t, x)` coordinates.
    pub fn configuration_box(&self) -> SampleBox {
        SampleBox::new(self.sample_box.bounds()[..=self.dimension].to_vec()).expect("prefix of a valid box")
    }

    pub fn normal_form(&self) -> Option<&NormalForm> {
        match &self.system {
            System::NormalForm(nf) => Some(nf),
            _ => None,
        }
    }

    pub fn lagrangian(&self) -> Option<&ScalarField> {
        match &self.system {
            System::Lagrangian(l) => Some(l),
            _ => None,
        }
    }
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError::Config(message.into())
}

fn expression(source: &str, chart: ChartSpec, field: &str) -> Result<ScalarField, CliError> {
    ScalarField::parse(source, chart).map_err(|e| invalid(format!("field `{field}`: {e}")))
}

fn expressions(sources: &[String], chart: ChartSpec, field: &str, n: usize) -> Result<Vec<ScalarField>, CliError> {
    if sources.len() != n {
        return Err(invalid(format!("field `{field}` has {} entries, dimension is {n}", sources.len())));
    }
    sources.iter().enumerate().map(|(i, s)| expression(s, chart, &format!("{field}[{i}]"))).collect()
}

fn fundamental_form(def: &FundamentalFormDef, n: usize, field: &str) -> Result<FundamentalForm, CliError> {
    let chart = ChartSpec::velocity(n);
    let power = expression(&def.power, chart, &format!("{field}.P"))?;
    let force = expressions(&def.force, chart, &format!("{field}.F"), n)?;
    let momentum = expressions(&def.p, chart, &format!("{field}.p"), n)?;
    FundamentalForm::new(power, force, momentum).map_err(|e| invalid(format!("field `{field}`: {e}")))
}

fn time_only(sources: &[String], n: usize, field: &str) -> Result<Vec<ScalarField>, CliError> {
    let fields = expressions(sources, ChartSpec::configuration(n), field, n)?;
    if fields.iter().any(|f| (1..=n).any(|i| f.depends_on(i))) {
        return Err(invalid(format!("field `{field}` must depend on t only")));
    }
    Ok(fields)
}

fn seed_override() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_VAR) {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| invalid(format!("{SEED_VAR}={text:?} is not a non-negative integer"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(invalid(format!("{SEED_VAR}: {e}"))),
    }
}

fn check_finite(value: f64, field: &str) -> Result<(), CliError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("field `{field}` must be finite")))
    }
}

impl Scenario {
    pub fn compile(&self) -> Result<Model, CliError> {
        let n = self.dimension;
        if n == 0 {
            return Err(invalid("field `dimension` must be at least 1"));
        }
        let system = match &self.system {
            SystemDef::Lagrangian(l) => System::Lagrangian(expression(l, ChartSpec::velocity(n), "system.lagrangian")?),
            SystemDef::FundamentalForm(def) => {
                System::FundamentalForm(fundamental_form(def, n, "system.fundamental_form")?)
            }
            SystemDef::NormalForm(def) => {
                let chart = ChartSpec::momentum(n);
                let h = expression(&def.hamiltonian, chart, "system.normal_form.H")?;
                let terms = def
                    .terms
                    .iter()
                    .enumerate()
                    .map(|(k, term)| {
                        let mu = expression(&term.mu, chart, &format!("system.normal_form.terms[{k}].mu"))?;
                        let v = expression(&term.v, chart, &format!("system.normal_form.terms[{k}].v"))?;
                        Ok((mu, v))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                System::NormalForm(NormalForm::new(h, terms).map_err(|e| invalid(format!("field `system`: {e}")))?)
            }
        };

        let initial = self.initial_point(&system)?;
        check_finite(self.run.t1, "run.t1")?;
        check_finite(self.run.h, "run.h")?;
        if self.run.t1 <= self.initial.t0 {
            return Err(invalid(format!("field `run.t1` = {} must exceed initial.t0 = {}", self.run.t1, self.initial.t0)));
        }
        if self.run.h <= 0.0 {
            return Err(invalid(format!("field `run.h` = {} must be positive", self.run.h)));
        }

        let chart = system.chart();
        let sample_box = match &self.sample_box {
            None => SampleBox::unit(&chart),
            Some(bounds) if bounds.len() != chart.len() => {
                return Err(invalid(format!(
                    "field `sample_box` has {} intervals, the chart {:?} has {} coordinates",
                    bounds.len(),
                    chart.coordinate_names(),
                    chart.len()
                )))
            }
            Some(bounds) => SampleBox::new(bounds.clone()).map_err(|e| invalid(format!("field `sample_box`: {e}")))?,
        };

        let mut checks = Vec::with_capacity(self.checks.len());
        for name in &self.checks {
            let check = Check::from_name(name)?;
            if checks.contains(&check) {
                return Err(invalid(format!("check `{name}` is requested more than once")));
            }
            checks.push(check);
        }
        let mut tolerances = BTreeMap::new();
        for (name, &value) in &self.tolerances {
            if !(value.is_finite() && value >= 0.0) {
                return Err(invalid(format!("field `tolerances.{name}` must be a non-negative number")));
            }
            tolerances.insert(Check::from_name(name)?, value);
        }

        let curve = match &self.curve {
            None => None,
            Some(def) => Some(Curve {
                x: time_only(&def.x, n, "curve.x")?,
                v: def.v.as_deref().map(|v| time_only(v, n, "curve.v")).transpose()?,
                expected: def.expected_residual,
            }),
        };
        let reference = self.reference.as_deref().map(|x| time_only(x, n, "reference")).transpose()?;
        let hj = self.hj.as_ref().map(|def| compile_hj(def, n)).transpose()?;
        let eta = match &self.eta {
            None => None,
            Some(components) => {
                let chart = ChartSpec::momentum(n);
                let components = expressions(components, chart, "eta", chart.len())?;
                Some(OneForm::from_components(chart, components).map_err(|e| invalid(format!("field `eta`: {e}")))?)
            }
        };
        let hamiltonian =
            self.hamiltonian.as_deref().map(|h| expression(h, ChartSpec::momentum(n), "hamiltonian")).transpose()?;
        let counterpart = self.counterpart.as_ref().map(|def| fundamental_form(def, n, "counterpart")).transpose()?;

        let model = Model {
            name: self.name.clone(),
            dimension: n,
            system,
            initial,
            t1: self.run.t1,
            step: self.run.h,
            checks,
            tolerances,
            sample_box,
            seed: seed_override()?.or(self.seed).unwrap_or(DEFAULT_SEED),
            curve,
            reference,
            hj,
            eta,
            hamiltonian,
            counterpart,
        };
        for check in &model.checks {
            check.applicable(&model)?;
        }
        Ok(model)
    }

    fn initial_point(&self, system: &System) -> Result<Vec<f64>, CliError> {
        let n = self.dimension;
        let init = &self.initial;
        check_finite(init.t0, "initial.t0")?;
        if init.x.len() != n {
            return Err(invalid(format!("field `initial.x` has {} entries, dimension is {n}", init.x.len())));
        }
        let (name, fiber, other) = match system {
            System::NormalForm(_) => ("p", &init.p, ("v", &init.v)),
            _ => ("v", &init.v, ("p", &init.p)),
        };
        if other.1.is_some() {
            return Err(invalid(format!(
                "field `initial.{}` does not apply to a {} system; give `initial.{name}`",
                other.0,
                system.variant()
            )));
        }
        let fiber = fiber.as_ref().ok_or_else(|| invalid(format!("field `initial.{name}` is missing")))?;
        if fiber.len() != n {
            return Err(invalid(format!("field `initial.{name}` has {} entries, dimension is {n}", fiber.len())));
        }
        let point: Vec<f64> = std::iter::once(init.t0).chain(init.x.iter().copied()).chain(fiber.iter().copied()).collect();
        if point.iter().any(|v| !v.is_finite()) {
            return Err(invalid("field `initial` must contain finite numbers"));
        }
        Ok(point)
    }
}

fn compile_hj(def: &HjDef, n: usize) -> Result<HamiltonJacobi, CliError> {
    let base = ChartSpec::configuration(n);
    let generating_function = def
        .generating_function
        .as_deref()
        .map(|s| {
            let field = expression(s, base, "hj.S")?;
            GeneratingFunction::new(field).map_err(|e| invalid(format!("field `hj.S`: {e}")))
        })
        .transpose()?;
    let contact_field = match (&def.p, &generating_function) {
        (Some(p), _) => ContactField::new(expressions(p, base, "hj.p", n)?)
            .map_err(|e| invalid(format!("field `hj.p`: {e}")))?,
        (None, Some(s)) => s.contact_field(),
        (None, None) => return Err(invalid("field `hj` needs `S` or `p`")),
    };
    Ok(HamiltonJacobi { generating_function, contact_field, expected_closure: def.expected_closure })
}
