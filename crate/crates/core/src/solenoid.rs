//! Random walks on the solenoid of a finite union of circles.
//!
//! A point is a component index and an exact rational angle in `[0, 1)`, so
//! backward orbits `x₀, x₁, …` with `r(x_{i+1}) = x_i` are exact. Only the
//! filter values, and hence the transition weights `W = |m0|²/N`, are floats.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::numbers::{int, rat, to_f64, Rational};
use crate::transfer::Filter;

/// Leaves allowed in an exact preimage-tree enumeration (`3^10`).
pub const TREE_BUDGET: u128 = 59_049;

/// Pre-normalization weight defect above which a filter is rejected.
pub const MAX_WEIGHT_DEFECT: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub component: usize,
    /// Always in `[0, 1)`.
    pub angle: Rational,
}

impl Point {
    pub fn new(component: usize, angle: Rational) -> Self {
        let angle = &angle - angle.floor();
        Self { component, angle }
    }

    pub fn angle_f64(&self) -> f64 {
        self.angle.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.component, self.angle)
    }
}

/// A finite union of circles, each mapped to itself by `θ ↦ Nθ mod 1`, with a
/// filter per component.
pub trait SolenoidSystem: Sync {
    fn name(&self) -> &str;

    fn component_count(&self) -> usize;

    fn branch_count(&self) -> u32;

    fn filter(&self, component: usize) -> &Filter;

    fn check_point(&self, x: &Point) -> Result<()> {
        if x.component < self.component_count() {
            Ok(())
        } else {
            Err(Error::Component {
                component: x.component,
                count: self.component_count(),
            })
        }
    }

    fn forward(&self, x: &Point) -> Point {
        Point::new(x.component, &x.angle * int(i64::from(self.branch_count())))
    }

    /// The `N` points `(θ + j)/N`, `j = 0..N`.
    fn preimages(&self, x: &Point) -> Vec<Point> {
        let n = i64::from(self.branch_count());
        (0..n)
            .map(|j| Point {
                component: x.component,
                angle: (&x.angle + int(j)) / int(n),
            })
            .collect()
    }

    fn filter_value(&self, x: &Point) -> Complex64 {
        self.filter(x.component).evaluate(&x.angle)
    }

    /// `|m0(x)|²`.
    fn filter_power(&self, x: &Point) -> f64 {
        self.filter(x.component).weight_poly().evaluate(&x.angle).re
    }

    /// A draw from the base measure: uniform component, then a uniform
    /// dyadic angle with 53 bits.
    fn sample_base(&self, rng: &mut ChaCha8Rng) -> Point {
        let component = rng.random_range(0..self.component_count());
        let bits: u64 = rng.random_range(0..1u64 << 53);
        Point::new(component, Rational::new(bits.into(), (1u64 << 53).into()))
    }

    /// Componentwise transfer operator.
    fn transfer(&self, h: &SystemFunction) -> SystemFunction {
        SystemFunction {
            parts: h
                .parts
                .iter()
                .enumerate()
                .map(|(c, p)| self.filter(c).apply(p))
                .collect(),
        }
    }

    fn has_unit_filter(&self) -> bool {
        (0..self.component_count()).all(|c| self.filter(c).has_unit_weight())
    }
}

/// Float coefficients of `|m0|²`, evaluated at the float angle. The weight
/// polynomials have low degree, so the phase error stays near one ulp.
#[derive(Clone, Debug)]
struct PowerTable(Vec<(f64, Complex64)>);

impl PowerTable {
    fn new(filter: &Filter) -> Self {
        Self(
            filter
                .weight_poly()
                .iter()
                .map(|(k, c)| (k as f64, Complex64::new(to_f64(&c.re), to_f64(&c.im))))
                .collect(),
        )
    }

    fn eval(&self, theta: f64) -> f64 {
        self.0
            .iter()
            .map(|(k, c)| (c * Complex64::from_polar(1.0, TAU * (k * theta).fract())).re)
            .sum()
    }
}

/// One circle with `r(θ) = Nθ` and a given filter.
#[derive(Clone, Debug)]
pub struct CircleSystem {
    name: String,
    filter: Filter,
    power: PowerTable,
}

impl CircleSystem {
    pub fn new(name: impl Into<String>, filter: Filter) -> Self {
        Self {
            name: name.into(),
            power: PowerTable::new(&filter),
            filter,
        }
    }

    pub fn cantor() -> Self {
        Self::new("cantor", Filter::cantor())
    }

    pub fn trivial(branch_count: u32) -> Result<Self> {
        Ok(Self::new("circle", Filter::trivial(branch_count)?))
    }
}

impl SolenoidSystem for CircleSystem {
    fn name(&self) -> &str {
        &self.name
    }

    fn component_count(&self) -> usize {
        1
    }

    fn branch_count(&self) -> u32 {
        self.filter.branch_count()
    }

    fn filter(&self, _component: usize) -> &Filter {
        &self.filter
    }

    fn filter_power(&self, x: &Point) -> f64 {
        self.power.eval(x.angle_f64())
    }
}

/// Two disjoint circles, each invariant under `r`, with `m0 = 1`. The map is
/// not ergodic since either circle is an invariant set.
#[derive(Clone, Debug)]
pub struct TwoCircleSystem {
    filter: Filter,
}

impl TwoCircleSystem {
    pub fn new(branch_count: u32) -> Result<Self> {
        Ok(Self {
            filter: Filter::trivial(branch_count)?,
        })
    }
}

impl SolenoidSystem for TwoCircleSystem {
    fn name(&self) -> &str {
        "two-circle"
    }

    fn filter_power(&self, _x: &Point) -> f64 {
        1.0
    }

    fn component_count(&self) -> usize {
        2
    }

    fn branch_count(&self) -> u32 {
        self.filter.branch_count()
    }

    fn filter(&self, _component: usize) -> &Filter {
        &self.filter
    }
}

/// A trigonometric polynomial on each component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFunction {
    parts: Vec<LaurentPoly>,
}

impl SystemFunction {
    pub fn new(parts: Vec<LaurentPoly>) -> Self {
        Self { parts }
    }

    /// The same polynomial on every component.
    pub fn uniform(poly: LaurentPoly, components: usize) -> Self {
        Self {
            parts: vec![poly; components],
        }
    }

    pub fn indicator(component: usize, components: usize) -> Result<Self> {
        if component >= components {
            return Err(Error::Component {
                component,
                count: components,
            });
        }
        let mut parts = vec![LaurentPoly::zero(); components];
        parts[component] = LaurentPoly::one();
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[LaurentPoly] {
        &self.parts
    }

    pub fn evaluate(&self, x: &Point) -> Complex64 {
        self.parts[x.component].evaluate(&x.angle)
    }

    /// Constant on the whole space, not just on each component.
    pub fn is_constant(&self) -> bool {
        self.parts.iter().all(LaurentPoly::is_constant)
            && self.parts.windows(2).all(|w| w[0] == w[1])
    }

    fn check(&self, sys: &dyn SolenoidSystem) -> Result<()> {
        if self.parts.len() == sys.component_count() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "function has {} components, system '{}' has {}",
                self.parts.len(),
                sys.name(),
                sys.component_count()
            )))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Transition {
    /// Preimages with renormalized weights.
    pub branches: Vec<(Point, f64)>,
    /// `Σ W − 1` before renormalization.
    pub defect: f64,
}

/// The `N` preimages of `x` with weights `W(y) = |m0(y)|²/N`.
pub fn transition_weights(sys: &dyn SolenoidSystem, x: &Point) -> Result<Transition> {
    sys.check_point(x)?;
    let n = f64::from(sys.branch_count());
    let mut branches: Vec<(Point, f64)> = sys
        .preimages(x)
        .into_iter()
        .map(|y| {
            let w = sys.filter_power(&y) / n;
            (y, w)
        })
        .collect();
    let total: f64 = branches.iter().map(|(_, w)| w).sum();
    let defect = total - 1.0;
    if !(defect.abs() <= MAX_WEIGHT_DEFECT) {
        return Err(Error::WeightDefect { defect });
    }
    for (_, w) in &mut branches {
        *w = (*w / total).max(0.0);
    }
    Ok(Transition { branches, defect })
}

#[derive(Clone, Debug)]
pub struct PathSample {
    pub x0: Point,
    /// `x₁, …, x_n` with `r(x_{i+1}) = x_i`.
    pub trajectory: Vec<Point>,
    /// `Σ log W(x_i)` along the path.
    pub log_weight: f64,
    pub max_defect: f64,
}

impl PathSample {
    /// `x₀, x₁, …, x_n` as one slice-friendly vector.
    pub fn coordinates(&self) -> Vec<Point> {
        std::iter::once(self.x0.clone())
            .chain(self.trajectory.iter().cloned())
            .collect()
    }
}

/// RNG for path `index` under `seed`; independent of scheduling.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn extend_path(
    sys: &dyn SolenoidSystem,
    x: &Point,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PathSample> {
    let mut trajectory = Vec::with_capacity(n);
    let mut log_weight = 0.0;
    let mut max_defect: f64 = 0.0;
    let mut current = x.clone();
    for _ in 0..n {
        let t = transition_weights(sys, &current)?;
        max_defect = max_defect.max(t.defect.abs());
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = t.branches.len() - 1;
        for (i, (_, w)) in t.branches.iter().enumerate() {
            acc += w;
            if u < acc {
                chosen = i;
                break;
            }
        }
        let (y, w) = t.branches.into_iter().nth(chosen).expect("N ≥ 1");
        log_weight += w.ln();
        trajectory.push(y.clone());
        current = y;
    }
    Ok(PathSample {
        x0: x.clone(),
        trajectory,
        log_weight,
        max_defect,
    })
}

/// A backward orbit of length `n` drawn from `P_x`.
pub fn sample_path(sys: &dyn SolenoidSystem, x: &Point, n: usize, seed: u64) -> Result<PathSample> {
    sys.check_point(x)?;
    extend_path(sys, x, n, &mut path_rng(seed, 0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub max_defect: f64,
}

impl McEstimate {
    fn from_values(values: &[(f64, f64)]) -> Self {
        let n = values.len();
        let max_defect = values.iter().map(|v| v.1).fold(0.0, f64::max);
        if n == 0 {
            return Self {
                mean: f64::NAN,
                std_error: f64::NAN,
                samples: 0,
                max_defect,
            };
        }
        let mean = values.iter().map(|v| v.0).sum::<f64>() / n as f64;
        let var = if n > 1 {
            values.iter().map(|v| (v.0 - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / n as f64).sqrt(),
            samples: n,
            max_defect,
        }
    }

    /// `|mean − target| ≤ 3σ`, with a float-rounding floor for `σ = 0`.
    pub fn within_three_sigma(&self, target: f64) -> bool {
        (self.mean - target).abs() <= 3.0 * self.std_error + 1e-12
    }
}

/// Monte Carlo estimate of `∫ F dμ∞` for `F` depending on `x₀, …, x_d`.
///
/// Sample `i` draws `x₀` from the base measure and extends it with `P_{x₀}`,
/// both from the RNG stream `i`.
pub fn mu_infinity_integral<F>(
    sys: &dyn SolenoidSystem,
    f: F,
    depth: usize,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate>
where
    F: Fn(&[Point]) -> f64 + Sync,
{
    let values: Vec<(f64, f64)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let x0 = sys.sample_base(&mut rng);
            let path = extend_path(sys, &x0, depth, &mut rng)?;
            Ok((f(&path.coordinates()), path.max_defect))
        })
        .collect::<Result<_>>()?;
    Ok(McEstimate::from_values(&values))
}

/// `Σ W(x₁)…W(x_n) h(x_n)` over the full depth-`n` preimage tree of `x`.
/// Equals `(Rⁿ h)(x)`.
pub fn tree_expectation(
    sys: &dyn SolenoidSystem,
    x: &Point,
    h: &SystemFunction,
    depth: u32,
) -> Result<Complex64> {
    sys.check_point(x)?;
    h.check(sys)?;
    let leaves = u128::from(sys.branch_count())
        .checked_pow(depth)
        .unwrap_or(u128::MAX);
    if leaves > TREE_BUDGET {
        return Err(Error::TreeBudget {
            depth,
            leaves,
            budget: TREE_BUDGET,
        });
    }
    fn walk(sys: &dyn SolenoidSystem, x: &Point, h: &SystemFunction, depth: u32) -> Result<Complex64> {
        if depth == 0 {
            return Ok(h.evaluate(x));
        }
        let mut acc = Complex64::zero();
        for (y, w) in transition_weights(sys, x)?.branches {
            acc += walk(sys, &y, h, depth - 1)? * w;
        }
        Ok(acc)
    }
    walk(sys, x, h, depth)
}

/// Monte Carlo value of the fixed point `h(x) = ∫ F dP_x` attached to a
/// function `F` of the backward orbit `x, x₁, …, x_depth`.
pub fn fixed_point_from_cocycle<F>(
    sys: &dyn SolenoidSystem,
    x: &Point,
    f: F,
    depth: usize,
    n_paths: usize,
    seed: u64,
) -> Result<McEstimate>
where
    F: Fn(&[Point]) -> f64 + Sync,
{
    sys.check_point(x)?;
    let values: Vec<(f64, f64)> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let path = extend_path(sys, x, depth, &mut path_rng(seed, i as u64))?;
            Ok((f(&path.coordinates()), path.max_defect))
        })
        .collect::<Result<_>>()?;
    Ok(McEstimate::from_values(&values))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocyclePath {
    /// `h(x_n)` at the end of the path.
    pub limit: Complex64,
    /// `max_{n₀ < n ≤ len} |h(x_n) − h(x_{n₀})|`.
    pub tail_oscillation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleVerdict {
    /// Tail oscillation within tolerance on every path.
    Cocycle,
    /// Some path keeps oscillating, so `h` does not define a cocycle.
    NonCocycle,
}

#[derive(Clone, Debug)]
pub struct CocycleReport {
    pub start_index: usize,
    pub paths: Vec<CocyclePath>,
    pub max_oscillation: f64,
    pub mean_oscillation: f64,
    pub verdict: CocycleVerdict,
}

/// Follows `h(x_n)` along sampled backward orbits from `x` and measures how
/// much it still moves after `n₀ = path_len / 2`.
pub fn cocycle_limit(
    sys: &dyn SolenoidSystem,
    h: &SystemFunction,
    x: &Point,
    path_len: usize,
    n_paths: usize,
    seed: u64,
    tol: f64,
) -> Result<CocycleReport> {
    sys.check_point(x)?;
    h.check(sys)?;
    let start_index = path_len / 2;
    let paths: Vec<CocyclePath> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let path = extend_path(sys, x, path_len, &mut path_rng(seed, i as u64))?;
            let values: Vec<Complex64> = path.coordinates().iter().map(|p| h.evaluate(p)).collect();
            let anchor = values[start_index];
            let tail_oscillation = values[start_index + 1..]
                .iter()
                .map(|v| (v - anchor).norm())
                .fold(0.0, f64::max);
            Ok(CocyclePath {
                limit: values[path_len],
                tail_oscillation,
            })
        })
        .collect::<Result<_>>()?;
    let max_oscillation = paths.iter().map(|p| p.tail_oscillation).fold(0.0, f64::max);
    let mean_oscillation = if paths.is_empty() {
        0.0
    } else {
        paths.iter().map(|p| p.tail_oscillation).sum::<f64>() / paths.len() as f64
    };
    Ok(CocycleReport {
        start_index,
        paths,
        max_oscillation,
        mean_oscillation,
        verdict: if max_oscillation <= tol {
            CocycleVerdict::Cocycle
        } else {
            CocycleVerdict::NonCocycle
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Already constant; says nothing about ergodicity.
    Trivial,
    /// Reached a constant after `steps` applications.
    FlowsToConstant { steps: usize },
    /// A nonconstant exact fixed point, reached after `steps` applications.
    Witness { steps: usize },
    /// Neither within the step budget.
    Undecided,
}

#[derive(Clone, Debug)]
pub struct ErgodicityEntry {
    pub verdict: Verdict,
    pub final_function: SystemFunction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overall {
    ConsistentWithErgodic,
    NonErgodic,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ErgodicityReport {
    pub entries: Vec<ErgodicityEntry>,
    pub overall: Overall,
}

/// Iterates `(R₁f)_k = f_{Nk}` componentwise on each test function.
pub fn ergodicity_diagnostic(
    sys: &dyn SolenoidSystem,
    tests: &[SystemFunction],
    max_steps: usize,
) -> Result<ErgodicityReport> {
    if !sys.has_unit_filter() {
        return Err(Error::FilterNotTrivial);
    }
    let mut entries = Vec::with_capacity(tests.len());
    for f in tests {
        f.check(sys)?;
        let mut current = f.clone();
        let mut verdict = Verdict::Undecided;
        for step in 0..=max_steps {
            if current.is_constant() {
                verdict = if step == 0 {
                    Verdict::Trivial
                } else {
                    Verdict::FlowsToConstant { steps: step }
                };
                break;
            }
            let next = sys.transfer(&current);
            if next == current {
                verdict = Verdict::Witness { steps: step };
                break;
            }
            if step < max_steps {
                current = next;
            }
        }
        entries.push(ErgodicityEntry {
            verdict,
            final_function: current,
        });
    }
    let overall = if entries.iter().any(|e| matches!(e.verdict, Verdict::Witness { .. })) {
        Overall::NonErgodic
    } else if entries.iter().all(|e| e.verdict != Verdict::Undecided) {
        Overall::ConsistentWithErgodic
    } else {
        Overall::Inconclusive
    };
    Ok(ErgodicityReport { entries, overall })
}

/// Angles `p/q` in `[0, 1)` with `q ≤ max_den`, drawn reproducibly.
pub fn random_rational_angles(count: usize, max_den: i64, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = rng.random_range(1..=max_den);
            let p = rng.random_range(0..q);
            rat(p, q)
        })
        .collect()
}
