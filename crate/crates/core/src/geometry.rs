//! Canonical symplectic structure `Ω = dpᵢ ∧ dxⁱ` on a momentum chart.
//!
//! Sign conventions, fixed once here and used throughout:
//!
//! * interior product: `i_X Ω = Xᵢ dxⁱ − Xⁱ dpᵢ`;
//! * symplectic gradient: `∇Ω f = ι⁻¹ df = −∂f/∂pᵢ ∂/∂xⁱ + ∂f/∂xⁱ ∂/∂pᵢ`, so
//!   `∇Ω xⁱ = ∂/∂pᵢ` and `∇Ω pᵢ = −∂/∂xⁱ`;
//! * Poisson bracket: `{f, g} = ∂f/∂xⁱ ∂g/∂pᵢ − ∂f/∂pᵢ ∂g/∂xⁱ`;
//! * Lie bracket: `[X, Y]ᵏ = Xʲ ∂ⱼYᵏ − Yʲ ∂ⱼXᵏ` over all `2n + 1` coordinates.
//!
//! With these, `∇Ω{f, g} = [∇Ω f, ∇Ω g]` holds exactly, and the Hamiltonian
//! flow `ẋ = ∂H/∂p, ṗ = −∂H/∂x` is `−∇Ω H`.

use crate::error::{Error, Result};
use crate::expr::{same_chart, ChartKind, ChartSpec, ScalarField};
use crate::sampling::SampleBox;
use crate::scalar::Scalar;

const NON_ZERO_DT_POINTS: usize = 16;
const NON_ZERO_DT_SEED: u64 = 0x1074;

fn require_momentum(chart: &ChartSpec) -> Result<()> {
    if chart.kind() == ChartKind::Momentum {
        Ok(())
    } else {
        Err(Error::ChartMismatch(format!("expected a momentum chart, got {:?}", chart.kind())))
    }
}

fn check_components(chart: ChartSpec, components: &[ScalarField]) -> Result<()> {
    require_momentum(&chart)?;
    if components.len() != chart.len() {
        return Err(Error::InvalidArgument(format!(
            "{} components for a chart of {} coordinates",
            components.len(),
            chart.len()
        )));
    }
    if let Some(c) = components.iter().find(|c| c.chart() != chart) {
        return Err(Error::ChartMismatch(format!("component on {:?}, field on {:?}", c.chart(), chart)));
    }
    Ok(())
}

fn split(components: Vec<ScalarField>, t: ScalarField, x: Vec<ScalarField>, p: Vec<ScalarField>) -> Vec<ScalarField> {
    let mut all = components;
    all.push(t);
    all.extend(x);
    all.extend(p);
    all
}

fn max_difference<T: Scalar>(a: &[ScalarField], b: &[ScalarField], points: &[Vec<T>]) -> Result<T> {
    let mut worst = T::zero();
    for point in points {
        for (u, w) in a.iter().zip(b) {
            worst = worst.max((u.eval(point)? - w.eval(point)?).abs());
        }
    }
    Ok(worst)
}

/// `Xᵗ ∂/∂t + Xⁱ ∂/∂xⁱ + Xᵢ ∂/∂pᵢ` with symbolic components.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVectorField {
    chart: ChartSpec,
    components: Vec<ScalarField>,
}

impl PhaseVectorField {
    pub fn new(t: ScalarField, x: Vec<ScalarField>, p: Vec<ScalarField>) -> Result<Self> {
        let chart = t.chart();
        Self::from_components(chart, split(Vec::new(), t, x, p))
    }

    /// Components in coordinate order `[t, x1..xn, p1..pn]`.
    pub fn from_components(chart: ChartSpec, components: Vec<ScalarField>) -> Result<Self> {
        check_components(chart, &components)?;
        Ok(Self { chart, components })
    }

    pub fn zero(chart: ChartSpec) -> Result<Self> {
        Self::from_components(chart, vec![ScalarField::zero(chart); chart.len()])
    }

    /// The coordinate field `∂/∂c` for coordinate index `index`.
    pub fn coordinate_basis(chart: ChartSpec, index: usize) -> Result<Self> {
        let mut components = vec![ScalarField::zero(chart); chart.len()];
        components[index] = ScalarField::constant(chart, 1.0);
        Self::from_components(chart, components)
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component_t(&self) -> &ScalarField {
        &self.components[0]
    }

    pub fn component_x(&self, i: usize) -> &ScalarField {
        &self.components[self.chart.x_index(i)]
    }

    pub fn component_p(&self, i: usize) -> &ScalarField {
        &self.components[self.chart.fiber_index(i)]
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    /// Directional derivative `Xλ = Σₖ Xᵏ ∂ₖλ`.
    pub fn apply(&self, lambda: &ScalarField) -> Result<ScalarField> {
        same_chart(self.component_t(), lambda)?;
        Ok(self.derivative(lambda))
    }

    fn derivative(&self, lambda: &ScalarField) -> ScalarField {
        self.components
            .iter()
            .enumerate()
            .fold(ScalarField::zero(self.chart), |acc, (k, c)| &acc + &(c * &lambda.diff_at(k)))
    }

    /// Pointwise product `λX`.
    pub fn scaled(&self, lambda: &ScalarField) -> Result<Self> {
        same_chart(self.component_t(), lambda)?;
        Ok(self.map(|c| lambda * c))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_chart(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_chart(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        Self { chart: self.chart, components: self.components.iter().map(f).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&ScalarField, &ScalarField) -> ScalarField) -> Self {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| f(a, b)).collect();
        Self { chart: self.chart, components }
    }

    fn same_chart(&self, other: &Self) -> Result<()> {
        if self.chart == other.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch(format!("{:?} vs {:?}", self.chart, other.chart)))
        }
    }

    /// Largest componentwise `|self − other|` over `points`.
    pub fn max_abs_difference<T: Scalar>(&self, other: &Self, points: &[Vec<T>]) -> Result<T> {
        self.same_chart(other)?;
        max_difference(&self.components, &other.components, points)
    }

    /// True when every component simplified to the literal zero.
    pub fn is_identically_zero(&self) -> bool {
        self.components.iter().all(ScalarField::is_zero)
    }
}

/// `α_t dt + αᵢ dxⁱ + αⁱ dpᵢ` with symbolic coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm {
    chart: ChartSpec,
    components: Vec<ScalarField>,
}

impl OneForm {
    pub fn new(t: ScalarField, x: Vec<ScalarField>, p: Vec<ScalarField>) -> Result<Self> {
        let chart = t.chart();
        Self::from_components(chart, split(Vec::new(), t, x, p))
    }

    pub fn from_components(chart: ChartSpec, components: Vec<ScalarField>) -> Result<Self> {
        check_components(chart, &components)?;
        Ok(Self { chart, components })
    }

    /// Exterior derivative `df`.
    pub fn differential(f: &ScalarField) -> Result<Self> {
        let chart = f.chart();
        Self::from_components(chart, (0..chart.len()).map(|k| f.diff_at(k)).collect())
    }

    pub fn chart(&self) -> ChartSpec {
        self.chart
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component_t(&self) -> &ScalarField {
        &self.components[0]
    }

    pub fn component_x(&self, i: usize) -> &ScalarField {
        &self.components[self.chart.x_index(i)]
    }

    pub fn component_p(&self, i: usize) -> &ScalarField {
        &self.components[self.chart.fiber_index(i)]
    }

    /// Same form with the `dt` coefficient set to zero.
    pub fn without_dt(&self) -> Self {
        let mut components = self.components.clone();
        components[0] = ScalarField::zero(self.chart);
        Self { chart: self.chart, components }
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    pub fn max_abs_difference<T: Scalar>(&self, other: &Self, points: &[Vec<T>]) -> Result<T> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch(format!("{:?} vs {:?}", self.chart, other.chart)));
        }
        max_difference(&self.components, &other.components, points)
    }
}

/// Vector field in normal form `∇Ω f + μₐ ∇Ω vᵃ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormVectorField {
    pub f: ScalarField,
    /// Pairs `(μₐ, vᵃ)`.
    pub terms: Vec<(ScalarField, ScalarField)>,
}

impl NormalFormVectorField {
    pub fn new(f: ScalarField, terms: Vec<(ScalarField, ScalarField)>) -> Result<Self> {
        let nf = Self { f, terms };
        nf.check_chart()?;
        Ok(nf)
    }

    pub fn gradient(f: ScalarField) -> Self {
        Self { f, terms: Vec::new() }
    }

    pub fn chart(&self) -> ChartSpec {
        self.f.chart()
    }

    fn check_chart(&self) -> Result<()> {
        require_momentum(&self.f.chart())?;
        for (mu, v) in &self.terms {
            same_chart(&self.f, mu)?;
            same_chart(&self.f, v)?;
        }
        Ok(())
    }
}

/// `i_X Ω = Xᵢ dxⁱ − Xⁱ dpᵢ`; `Xᵗ` does not contribute.
pub fn interior_product(x: &PhaseVectorField) -> OneForm {
    let chart = x.chart();
    let n = chart.dimension();
    let mut components = vec![ScalarField::zero(chart); chart.len()];
    for i in 0..n {
        components[chart.x_index(i)] = x.component_p(i).clone();
        components[chart.fiber_index(i)] = -x.component_x(i);
    }
    OneForm { chart, components }
}

/// The unique `X` with `i_X Ω = α` and `Xᵗ = 0`.
///
/// `α` must have no `dt` part. The coefficient is accepted when it simplifies
/// to zero, or otherwise when it evaluates to zero at 16 seeded points of the
/// unit box.
pub fn iota_inverse(alpha: &OneForm) -> Result<PhaseVectorField> {
    let chart = alpha.chart();
    let dt = alpha.component_t();
    if !dt.is_zero() {
        let points: Vec<Vec<f64>> = SampleBox::unit(&chart).sample(NON_ZERO_DT_POINTS, NON_ZERO_DT_SEED);
        for point in &points {
            match dt.eval(point) {
                Ok(v) if v.abs() <= 1e-12 => {}
                _ => return Err(Error::NonZeroDt),
            }
        }
    }
    let n = chart.dimension();
    let mut components = vec![ScalarField::zero(chart); chart.len()];
    for i in 0..n {
        components[chart.x_index(i)] = -alpha.component_p(i);
        components[chart.fiber_index(i)] = alpha.component_x(i).clone();
    }
    Ok(PhaseVectorField { chart, components })
}

/// `∇Ω f = ι⁻¹ df = −∂f/∂pᵢ ∂/∂xⁱ + ∂f/∂xⁱ ∂/∂pᵢ`.
pub fn symplectic_gradient(f: &ScalarField) -> Result<PhaseVectorField> {
    require_momentum(&f.chart())?;
    Ok(gradient(f))
}

fn gradient(f: &ScalarField) -> PhaseVectorField {
    let chart = f.chart();
    let mut components = vec![ScalarField::zero(chart); chart.len()];
    for i in 0..chart.dimension() {
        components[chart.x_index(i)] = -&f.diff_at(chart.fiber_index(i));
        components[chart.fiber_index(i)] = f.diff_at(chart.x_index(i));
    }
    PhaseVectorField { chart, components }
}

/// `{f, g} = ∂f/∂xⁱ ∂g/∂pᵢ − ∂f/∂pᵢ ∂g/∂xⁱ`.
pub fn poisson_bracket(f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
    same_chart(f, g)?;
    require_momentum(&f.chart())?;
    Ok(bracket(f, g))
}

fn bracket(f: &ScalarField, g: &ScalarField) -> ScalarField {
    let chart = f.chart();
    (0..chart.dimension()).fold(ScalarField::zero(chart), |acc, i| {
        let (xi, pi) = (chart.x_index(i), chart.fiber_index(i));
        let term = &(&f.diff_at(xi) * &g.diff_at(pi)) - &(&f.diff_at(pi) * &g.diff_at(xi));
        &acc + &term
    })
}

/// `Ω(X, Y) = Σᵢ (Xᵢ Yⁱ − Yᵢ Xⁱ)` for evaluated component vectors in
/// coordinate order.
pub fn omega<T: Scalar>(chart: &ChartSpec, x: &[T], y: &[T]) -> T {
    (0..chart.dimension()).fold(T::zero(), |acc, i| {
        let (xi, pi) = (chart.x_index(i), chart.fiber_index(i));
        acc + x[pi] * y[xi] - y[pi] * x[xi]
    })
}

/// Poisson bracket evaluated through the symplectic form.
///
/// With `∇Ω = ι⁻¹ d`, `Ω(∇Ω g, ∇Ω f) = dg(∇Ω f) = {f, g}`; the reversed
/// argument order `Ω(∇Ω f, ∇Ω g)` gives `{g, f}`.
pub fn poisson_via_omega<T: Scalar>(f: &ScalarField, g: &ScalarField, point: &[T]) -> Result<T> {
    same_chart(f, g)?;
    let chart = f.chart();
    require_momentum(&chart)?;
    let grad_f = gradient(f).eval(point)?;
    let grad_g = gradient(g).eval(point)?;
    Ok(omega(&chart, &grad_g, &grad_f))
}

/// `[X, Y]ᵏ = Xʲ ∂ⱼYᵏ − Yʲ ∂ⱼXᵏ`.
pub fn lie_bracket(x: &PhaseVectorField, y: &PhaseVectorField) -> Result<PhaseVectorField> {
    x.same_chart(y)?;
    let components =
        x.components.iter().zip(&y.components).map(|(xk, yk)| &x.derivative(yk) - &y.derivative(xk)).collect();
    Ok(PhaseVectorField { chart: x.chart, components })
}

/// `∇Ω f + Σₐ μₐ ∇Ω vᵃ`.
pub fn realize(a: &NormalFormVectorField) -> Result<PhaseVectorField> {
    a.check_chart()?;
    let mut field = gradient(&a.f);
    for (mu, v) in &a.terms {
        field = field.zip(&gradient(v), |acc, grad| &acc.clone() + &(mu * grad));
    }
    Ok(field)
}

/// Lie bracket of two normal-form fields assembled from Poisson brackets of
/// their constituent functions:
///
/// ```text
/// [a, b] = ∇{f,g} + ρ_A ∇{f,σ^A} + μₐ ∇{vᵃ,g} + μₐρ_A ∇{vᵃ,σ^A}
///        − ((∇g)μₐ + ρ_A (∇σ^A)μₐ) ∇vᵃ
///        + ((∇f)ρ_A + μₐ (∇vᵃ)ρ_A) ∇σ^A
/// ```
///
/// with `a = ∇f + μₐ∇vᵃ`, `b = ∇g + ρ_A∇σ^A` and `(X)λ` the directional
/// derivative of `λ` along `X`.
pub fn bracket_decomposition(a: &NormalFormVectorField, b: &NormalFormVectorField) -> Result<PhaseVectorField> {
    a.check_chart()?;
    b.check_chart()?;
    same_chart(&a.f, &b.f)?;
    let (f, g) = (&a.f, &b.f);
    let grad_f = gradient(f);
    let grad_g = gradient(g);

    let mut result = gradient(&bracket(f, g));
    let add_scaled = |acc: PhaseVectorField, coefficient: &ScalarField, field: &PhaseVectorField| {
        acc.zip(field, |u, w| u + &(coefficient * w))
    };

    for (rho, sigma) in &b.terms {
        result = add_scaled(result, rho, &gradient(&bracket(f, sigma)));
    }
    for (mu, v) in &a.terms {
        result = add_scaled(result, mu, &gradient(&bracket(v, g)));
        for (rho, sigma) in &b.terms {
            result = add_scaled(result, &(mu * rho), &gradient(&bracket(v, sigma)));
        }
    }
    for (mu, v) in &a.terms {
        let mut coefficient = grad_g.derivative(mu);
        for (rho, sigma) in &b.terms {
            coefficient = &coefficient + &(rho * &gradient(sigma).derivative(mu));
        }
        result = add_scaled(result, &-&coefficient, &gradient(v));
    }
    for (rho, sigma) in &b.terms {
        let mut coefficient = grad_f.derivative(rho);
        for (mu, v) in &a.terms {
            coefficient = &coefficient + &(mu * &gradient(v).derivative(rho));
        }
        result = add_scaled(result, &coefficient, &gradient(sigma));
    }
    Ok(result)
}
