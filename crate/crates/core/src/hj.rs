//! Contact fields `p = pᵢ(t, x) dxⁱ` and Hamilton–Jacobi residuals.
//!
//! Contact fields and generating functions live on the configuration chart
//! `(t, x1..xn)`. Composition with phase-space functions `f(t, x, p)` is done
//! numerically at each sample point; x-derivatives of compositions use the
//! chain rule `Dᵢ(f∘p) = ∂f/∂xⁱ + ∂f/∂pⱼ ∂pⱼ/∂xⁱ` with symbolic factors.

use crate::error::{Error, Result};
use crate::expr::{ChartKind, ChartSpec, ScalarField};
use crate::mechanics::NormalForm;
use crate::scalar::Scalar;

/// Default number of sample points for Hamilton–Jacobi checks.
pub const DEFAULT_HJ_POINTS: usize = 128;

fn require_configuration(f: &ScalarField) -> Result<()> {
    if f.chart().kind() == ChartKind::Configuration {
        Ok(())
    } else {
        Err(Error::ChartMismatch(format!("expected a configuration-chart field, got {:?}", f.chart().kind())))
    }
}

/// Momentum covector `pᵢ(t, x)` assigned to every event.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactField {
    chart: ChartSpec,
    components: Vec<ScalarField>,
}

impl ContactField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::InvalidArgument("contact field needs components".into()))?;
        let chart = first.chart();
        for c in &components {
            require_configuration(c)?;
            if c.chart() != chart {
                return Err(Error::ChartMismatch(format!("{:?} vs {:?}", c.chart(), chart)));
            }
        }
        if components.len() != chart.dimension() {
            return Err(Error::InvalidArgument(format!(
                "{} components on a chart of dimension {}",
                components.len(),
                chart.dimension()
            )));
        }
        Ok(Self { chart, components })
    }

    /// Parses one expression per component over `(t, x1..xn)`.
    pub fn parse(sources: &[&str]) -> Result<Self> {
        let chart = ChartSpec::new(sources.len(), ChartKind::Configuration)?;
        Self::new(sources.iter().map(|s| ScalarField::parse(s, chart)).collect::<Result<_>>()?)
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    /// `(t, x, p(t, x))` on the momentum chart.
    pub fn lift<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        let mut lifted = point.to_vec();
        lifted.extend(self.eval(point)?);
        Ok(lifted)
    }

    /// `∂pⱼ/∂xⁱ` as `[j][i]`.
    fn spatial_jacobian(&self) -> Vec<Vec<ScalarField>> {
        self.components.iter().map(|p| (0..self.dimension()).map(|i| p.diff_at(self.chart.x_index(i))).collect()).collect()
    }
}

/// Generating function `S(t, x)` with contact field `pᵢ = ∂S/∂xⁱ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingFunction {
    s: ScalarField,
}

impl GeneratingFunction {
    pub fn new(s: ScalarField) -> Result<Self> {
        require_configuration(&s)?;
        Ok(Self { s })
    }

    pub fn parse(source: &str, n: usize) -> Result<Self> {
        Self::new(ScalarField::parse(source, ChartSpec::new(n, ChartKind::Configuration)?)?)
    }

    pub fn field(&self) -> &ScalarField {
        &self.s
    }

    pub fn chart(&self) -> ChartSpec {
        self.s.chart()
    }

    pub fn contact_field(&self) -> ContactField {
        let chart = self.chart();
        ContactField {
            chart,
            components: (0..chart.dimension()).map(|i| self.s.diff_at(chart.x_index(i))).collect(),
        }
    }
}

fn check_phase_function(p: &ContactField, f: &ScalarField) -> Result<()> {
    if f.chart() != ChartSpec::momentum(p.dimension()) {
        return Err(Error::ChartMismatch(format!(
            "phase-space function on {:?}, contact field of dimension {}",
            f.chart(),
            p.dimension()
        )));
    }
    Ok(())
}

/// Max over points and pairs `i < j` of `|∂ᵢpⱼ − ∂ⱼpᵢ|`.
pub fn closure_residual<T: Scalar>(p: &ContactField, points: &[Vec<T>]) -> Result<T> {
    let jac = p.spatial_jacobian();
    let n = p.dimension();
    let mut worst = T::zero();
    for point in points {
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((jac[j][i].eval(point)? - jac[i][j].eval(point)?).abs());
            }
        }
    }
    Ok(worst)
}

/// `∂S/∂t + H(t, x, ∇ₓS)` at each point.
pub fn hj_values<T: Scalar>(s: &GeneratingFunction, h: &ScalarField, points: &[Vec<T>]) -> Result<Vec<T>> {
    let p = s.contact_field();
    check_phase_function(&p, h)?;
    let st = s.field().diff_at(0);
    points.iter().map(|point| Ok(st.eval(point)? + h.eval(&p.lift(point)?)?)).collect()
}

/// Max over points of `|∂S/∂t + H(t, x, ∇ₓS)|`.
pub fn hj_residual<T: Scalar>(s: &GeneratingFunction, h: &ScalarField, points: &[Vec<T>]) -> Result<T> {
    Ok(crate::scalar::max_abs(&hj_values(s, h, points)?))
}

/// Partials of a phase-space function `f` for the total x-gradient
/// `Dᵢ(f∘p)`.
#[derive(Debug, Clone)]
struct Composite {
    fx: Vec<ScalarField>,
    fp: Vec<ScalarField>,
}

impl Composite {
    fn new(f: &ScalarField) -> Self {
        let chart = f.chart();
        let n = chart.dimension();
        Self {
            fx: (0..n).map(|i| f.diff_at(chart.x_index(i))).collect(),
            fp: (0..n).map(|j| f.diff_at(chart.fiber_index(j))).collect(),
        }
    }

    /// `Dᵢ(f∘p)` given the lifted point and the evaluated Jacobian `[j][i]`.
    fn total_gradient<T: Scalar>(&self, lifted: &[T], jac: &[Vec<T>]) -> Result<Vec<T>> {
        let fp = self.fp.iter().map(|g| g.eval(lifted)).collect::<Result<Vec<T>>>()?;
        self.fx
            .iter()
            .enumerate()
            .map(|(i, fx)| Ok(fp.iter().enumerate().fold(fx.eval(lifted)?, |acc, (j, &d)| acc + d * jac[j][i])))
            .collect()
    }
}

/// Pull-back of `Θ` along a contact field:
///
/// ```text
/// p*Θ = Aᵢ dt∧dxⁱ + Σ_{i<j} Bᵢⱼ dxⁱ∧dxʲ
/// Aᵢ  = ∂pᵢ/∂t + Dᵢ(H∘p) − (μₐ∘p) Dᵢ(vᵃ∘p)
/// Bᵢⱼ = ∂ᵢpⱼ − ∂ⱼpᵢ
/// ```
#[derive(Debug, Clone)]
pub struct ThetaPullback {
    contact: ContactField,
    pt: Vec<ScalarField>,
    jacobian: Vec<Vec<ScalarField>>,
    hamiltonian: Composite,
    terms: Vec<(ScalarField, Composite)>,
}

impl ThetaPullback {
    pub fn dimension(&self) -> usize {
        self.contact.dimension()
    }

    fn jacobian_at<T: Scalar>(&self, point: &[T]) -> Result<Vec<Vec<T>>> {
        self.jacobian.iter().map(|row| row.iter().map(|f| f.eval(point)).collect()).collect()
    }

    /// The `n` coefficients `Aᵢ` of `dt∧dxⁱ` at a configuration point.
    pub fn time_coefficients<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        let lifted = self.contact.lift(point)?;
        let jac = self.jacobian_at(point)?;
        let mut a = self.hamiltonian.total_gradient(&lifted, &jac)?;
        for (ai, pt) in a.iter_mut().zip(&self.pt) {
            *ai = *ai + pt.eval(point)?;
        }
        for (mu, v) in &self.terms {
            let mu = mu.eval(&lifted)?;
            for (ai, dv) in a.iter_mut().zip(v.total_gradient(&lifted, &jac)?) {
                *ai = *ai - mu * dv;
            }
        }
        Ok(a)
    }

    /// The `n(n−1)/2` coefficients `Bᵢⱼ` of `dxⁱ∧dxʲ`, `i < j`, in row order.
    pub fn spatial_coefficients<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        let jac = self.jacobian_at(point)?;
        let n = self.dimension();
        Ok((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| jac[j][i] - jac[i][j]).collect())
    }
}

/// Builds the pull-back of `Θ` for `nf` along `p`.
pub fn pullback_theta(p: &ContactField, nf: &NormalForm) -> Result<ThetaPullback> {
    check_phase_function(p, &nf.hamiltonian)?;
    Ok(ThetaPullback {
        contact: p.clone(),
        pt: p.components.iter().map(|c| c.diff_at(0)).collect(),
        jacobian: p.spatial_jacobian(),
        hamiltonian: Composite::new(&nf.hamiltonian),
        terms: nf.terms.iter().map(|(mu, v)| (mu.clone(), Composite::new(v))).collect(),
    })
}

/// Largest `|Aᵢ|` and `|Bᵢⱼ|` over `points`. A contact field solves the
/// generalized Hamilton–Jacobi system when both vanish.
pub fn generalized_hj_residual<T: Scalar>(p: &ContactField, nf: &NormalForm, points: &[Vec<T>]) -> Result<(T, T)> {
    let theta = pullback_theta(p, nf)?;
    let mut a_max = T::zero();
    let mut b_max = T::zero();
    for point in points {
        a_max = a_max.max(crate::scalar::max_abs(&theta.time_coefficients(point)?));
        b_max = b_max.max(crate::scalar::max_abs(&theta.spatial_coefficients(point)?));
    }
    Ok((a_max, b_max))
}

/// `∂ᵢ(∂S/∂t + H∘∇S)` at a point, by the chain rule on symbolic partials.
pub fn hj_gradient<T: Scalar>(s: &GeneratingFunction, h: &ScalarField, point: &[T]) -> Result<Vec<T>> {
    let p = s.contact_field();
    check_phase_function(&p, h)?;
    let chart = s.chart();
    let st = s.field().diff_at(0);
    let lifted = p.lift(point)?;
    let jac = p.spatial_jacobian().iter().map(|row| row.iter().map(|f| f.eval(point)).collect()).collect::<Result<Vec<Vec<T>>>>()?;
    let dh = Composite::new(h).total_gradient(&lifted, &jac)?;
    (0..chart.dimension()).map(|i| Ok(st.diff_at(chart.x_index(i)).eval(point)? + dh[i])).collect()
}

/// Max over points and `i` of `|∂ᵢ(∂S/∂t + H∘∇S) − (μₐ∘∇S) Dᵢ(vᵃ∘∇S)|`: the
/// generalized system written for a gradient contact field.
pub fn gradient_hj_residual<T: Scalar>(s: &GeneratingFunction, nf: &NormalForm, points: &[Vec<T>]) -> Result<T> {
    let p = s.contact_field();
    check_phase_function(&p, &nf.hamiltonian)?;
    let terms: Vec<(ScalarField, Composite)> = nf.terms.iter().map(|(mu, v)| (mu.clone(), Composite::new(v))).collect();
    let jacobian = p.spatial_jacobian();
    let mut worst = T::zero();
    for point in points {
        let mut r = hj_gradient(s, &nf.hamiltonian, point)?;
        let lifted = p.lift(point)?;
        let jac = jacobian.iter().map(|row| row.iter().map(|f| f.eval(point)).collect()).collect::<Result<Vec<Vec<T>>>>()?;
        for (mu, v) in &terms {
            let mu = mu.eval(&lifted)?;
            for (ri, dv) in r.iter_mut().zip(v.total_gradient(&lifted, &jac)?) {
                *ri = *ri - mu * dv;
            }
        }
        worst = worst.max(crate::scalar::max_abs(&r));
    }
    Ok(worst)
}

/// Values of `∂S/∂t + H∘∇S` sharing one time stamp.
#[derive(Debug, Clone, PartialEq)]
pub struct XiGroup<T> {
    pub t: T,
    pub values: Vec<T>,
    /// `max − min` of `values`.
    pub spread: T,
}

/// Groups `∂S/∂t + H∘∇S` by the time coordinate of each point. A spread of
/// zero in every group means the residual is a function `ξ(t)` of time alone.
pub fn xi_extraction<T: Scalar>(s: &GeneratingFunction, h: &ScalarField, points: &[Vec<T>]) -> Result<Vec<XiGroup<T>>> {
    let values = hj_values(s, h, points)?;
    let mut groups: Vec<XiGroup<T>> = Vec::new();
    for (point, value) in points.iter().zip(values) {
        match groups.iter_mut().find(|g| g.t == point[0]) {
            Some(g) => g.values.push(value),
            None => groups.push(XiGroup { t: point[0], values: vec![value], spread: T::zero() }),
        }
    }
    for g in &mut groups {
        let lo = g.values.iter().fold(T::infinity(), |a, &b| a.min(b));
        let hi = g.values.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
        g.spread = hi - lo;
    }
    Ok(groups)
}

/// Largest spread over all time groups.
pub fn max_xi_spread<T: Scalar>(groups: &[XiGroup<T>]) -> T {
    groups.iter().fold(T::zero(), |acc, g| acc.max(g.spread))
}

/// Points on `times.len()` time slices with `per_slice` seeded spatial
/// samples each, for [`xi_extraction`].
pub fn time_sliced_points<T: Scalar>(
    chart: &ChartSpec,
    times: &[f64],
    per_slice: usize,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Vec<Vec<T>> {
    let spatial = crate::sampling::SampleBox::cube(chart, lo, hi);
    times
        .iter()
        .enumerate()
        .flat_map(|(k, &t)| {
            spatial.sample::<T>(per_slice, seed.wrapping_add(k as u64)).into_iter().map(move |mut p| {
                p[0] = T::lit(t);
                p
            })
        })
        .collect()
}
