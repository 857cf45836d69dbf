//! Simple functions on the Cantor-set space `ℛ = ∪ (C + k/3ⁿ)`.
//!
//! The basic sets are the triadic cells `C_{n,k} = (C + k)/3ⁿ`, where `C` is
//! the middle-third Cantor set. Under the Hausdorff measure of dimension
//! `log₃2` (normalised so `C` has measure 1) each cell has measure `2⁻ⁿ`,
//! cells of one level with distinct offsets are a.e.-disjoint, and
//!
//! ```text
//! C_{n,k} = C_{n+1,3k} ∪ C_{n+1,3k+2}.
//! ```
//!
//! A [`CellFunction`] is a rational combination of cells at one level times
//! a power of `1/√2`, which is the only irrationality the dilation
//! `U f(x) = f(x/3)/√2` and the filter `m0 = (1+z²)/√2` introduce.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::laurent::{big_number, parse_big_number, LaurentPoly};
use crate::linalg::{nullspace, SparseRow};
use crate::numbers::{format_rational, pow2, real, to_f64, Rational};
use crate::transfer::{ConvergenceReport, Filter};

/// Support window used when none is given to [`refinement_nullspace`].
pub const DEFAULT_NULLSPACE_WINDOW: (i64, i64) = (-2, 3);

fn pow3(n: u32) -> i64 {
    3i64.checked_pow(n).expect("3^n overflows i64")
}

/// The triadic cell `C_{n,k} = (C + k)/3ⁿ`; `level` may be negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub level: i32,
    pub offset: i64,
}

impl Cell {
    pub fn new(level: i32, offset: i64) -> Self {
        Self { level, offset }
    }

    /// `2^{-level}`
    pub fn measure(&self) -> Rational {
        pow2(-i64::from(self.level))
    }

    pub fn children(&self) -> [Cell; 2] {
        [
            Cell::new(self.level + 1, 3 * self.offset),
            Cell::new(self.level + 1, 3 * self.offset + 2),
        ]
    }

    /// The cell one level up containing this one, if any. Cells with offset
    /// `≡ 1 (mod 3)` sit in a gap of their would-be parent.
    pub fn parent(&self) -> Option<Cell> {
        match self.offset.rem_euclid(3) {
            1 => None,
            r => Some(Cell::new(self.level - 1, (self.offset - r) / 3)),
        }
    }
}

/// `2^{-half_scale/2} · Σ_k coeffs[k] · χ_{C_{level,k}}`.
///
/// Stored canonically: `half_scale ∈ {0, 1}` with even powers of two folded
/// into the coefficients, no zero coefficients, and `half_scale = 0` for the
/// zero function.
#[derive(Clone, Debug)]
pub struct CellFunction {
    level: u32,
    coeffs: BTreeMap<i64, Rational>,
    half_scale: i32,
}

impl CellFunction {
    pub fn zero() -> Self {
        Self {
            level: 0,
            coeffs: BTreeMap::new(),
            half_scale: 0,
        }
    }

    /// Builds a function at any integer level; negative levels are refined
    /// down to level 0 using `3C = C ∪ (C + 2)`.
    pub fn new<I>(level: i32, coeffs: I, half_scale: i32) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            accumulate(&mut map, k, c);
        }
        let mut level = level;
        while level < 0 {
            let mut finer = BTreeMap::new();
            for (k, c) in map {
                accumulate(&mut finer, 3 * k, c.clone());
                accumulate(&mut finer, 3 * k + 2, c);
            }
            map = finer;
            level += 1;
        }
        let mut f = Self {
            level: level as u32,
            coeffs: map,
            half_scale,
        };
        f.normalize_scale();
        f
    }

    /// `χ_{C_{n,k}}`
    pub fn cell(level: i32, offset: i64) -> Self {
        Self::new(level, [(offset, Rational::one())], 0)
    }

    /// The scaling function `φ = χ_C`.
    pub fn chi_c() -> Self {
        Self::cell(0, 0)
    }

    fn normalize_scale(&mut self) {
        if self.coeffs.is_empty() {
            self.half_scale = 0;
            return;
        }
        let q = self.half_scale.div_euclid(2);
        if q != 0 {
            let factor = pow2(-i64::from(q));
            for c in self.coeffs.values_mut() {
                *c *= &factor;
            }
        }
        self.half_scale = self.half_scale.rem_euclid(2);
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn half_scale(&self) -> i32 {
        self.half_scale
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, offset: i64) -> Rational {
        self.coeffs.get(&offset).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Rewrites every cell through `C_{n,k} = C_{n+1,3k} ∪ C_{n+1,3k+2}`
    /// until `target_level` is reached.
    pub fn refine(&self, target_level: u32) -> Result<Self> {
        if target_level < self.level {
            return Err(Error::RefineBelow {
                level: self.level,
                target: target_level,
            });
        }
        let mut coeffs = self.coeffs.clone();
        for _ in self.level..target_level {
            let mut finer = BTreeMap::new();
            for (k, c) in coeffs {
                finer.insert(3 * k, c.clone());
                finer.insert(3 * k + 2, c);
            }
            coeffs = finer;
        }
        Ok(Self {
            level: target_level,
            coeffs,
            half_scale: self.half_scale,
        })
    }

    fn refined(&self, target_level: u32) -> Self {
        self.refine(target_level.max(self.level))
            .expect("target is at least the current level")
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(
            self.level as i32,
            self.coeffs.iter().map(|(&k, c)| (k, c * s)),
            self.half_scale,
        )
    }

    /// Multiplies by `√2^e`.
    pub fn scale_sqrt2(&self, e: i32) -> Self {
        Self::new(
            self.level as i32,
            self.coeffs.iter().map(|(&k, c)| (k, c.clone())),
            self.half_scale - e,
        )
    }

    fn combine(&self, other: &Self, sign: &Rational) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.scale(sign));
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.half_scale != other.half_scale {
            return Err(Error::ScaleParity(self.half_scale, other.half_scale));
        }
        let level = self.level.max(other.level);
        let a = self.refined(level);
        let b = other.refined(level);
        let mut coeffs = a.coeffs;
        for (k, c) in b.coeffs {
            accumulate(&mut coeffs, k, c * sign);
        }
        Ok(Self {
            level,
            coeffs,
            half_scale: a.half_scale,
        }
        .canonical())
    }

    fn canonical(mut self) -> Self {
        self.normalize_scale();
        self
    }

    /// `self + other`; fails when the `√2` parities differ, since the sum
    /// would need irrational coefficients.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &Rational::one())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &-Rational::one())
    }

    /// The dilation `U`: `U χ_{C_{n,k}} = χ_{C_{n-1,k}}/√2`.
    pub fn dilate(&self) -> Self {
        Self::new(
            self.level as i32 - 1,
            self.coeffs.iter().map(|(&k, c)| (k, c.clone())),
            self.half_scale + 1,
        )
    }

    /// `U⁻¹`: `U⁻¹ χ_{C_{n,k}} = √2 χ_{C_{n+1,k}}`.
    pub fn dilate_inverse(&self) -> Self {
        Self::new(
            self.level as i32 + 1,
            self.coeffs.iter().map(|(&k, c)| (k, c.clone())),
            self.half_scale - 1,
        )
    }

    /// `T^m`: shifts by `m`, i.e. by `m·3ⁿ` cell offsets at level `n`.
    pub fn translate(&self, m: i64) -> Self {
        let shift = m * pow3(self.level);
        Self {
            level: self.level,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k + shift, c.clone())).collect(),
            half_scale: self.half_scale,
        }
    }

    /// `π(p) f = Σ_k p_k T^k f` for a real-coefficient polynomial `p`.
    pub fn pi_apply(&self, p: &LaurentPoly) -> Result<Self> {
        let terms = p.real_coeffs()?;
        let step = pow3(self.level);
        let mut coeffs = BTreeMap::new();
        for (m, pm) in &terms {
            for (&k, c) in &self.coeffs {
                accumulate(&mut coeffs, k + m * step, pm * c);
            }
        }
        Ok(Self {
            level: self.level,
            coeffs,
            half_scale: self.half_scale,
        }
        .canonical())
    }

    /// `π(m0) f`, carrying the filter's `√2` scale.
    pub fn pi_filter(&self, filter: &Filter) -> Result<Self> {
        let unscaled = self.pi_apply(filter.numerator())?;
        Ok(unscaled.scale_sqrt2(-(filter.half_scale() as i32)))
    }

    /// The cascade operator `M = U⁻¹ π(m0)` for the Cantor filter:
    /// `M χ_{C_{n,k}} = χ_{C_{n+1,k}} + χ_{C_{n+1,k+2·3ⁿ}}`.
    pub fn cascade(&self) -> Self {
        let shift = 2 * pow3(self.level);
        let mut coeffs = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            accumulate(&mut coeffs, k, c.clone());
            accumulate(&mut coeffs, k + shift, c.clone());
        }
        Self {
            level: self.level + 1,
            coeffs,
            half_scale: self.half_scale,
        }
    }

    /// `⟨f, g⟩` in `L²(ℛ, 𝔥^s)`. Errors when the product of the two `√2`
    /// scales is irrational.
    pub fn inner(&self, other: &Self) -> Result<Rational> {
        if self.is_zero() || other.is_zero() {
            return Ok(Rational::zero());
        }
        let total = self.half_scale + other.half_scale;
        if total % 2 != 0 {
            return Err(Error::ScaleParity(self.half_scale, other.half_scale));
        }
        let level = self.level.max(other.level);
        let a = self.refined(level);
        let b = other.refined(level);
        let (small, large) = if a.coeffs.len() <= b.coeffs.len() { (&a, &b) } else { (&b, &a) };
        let mut sum = Rational::zero();
        for (k, c) in &small.coeffs {
            if let Some(d) = large.coeffs.get(k) {
                sum += c * d;
            }
        }
        Ok(sum * pow2(-i64::from(level) - i64::from(total / 2)))
    }

    /// `‖f‖² = 2^{-s} · 2^{-n} · Σ c_k²`, always rational.
    pub fn squared_norm(&self) -> Rational {
        self.inner(self).expect("self pairing has even total scale")
    }

    /// Correlation polynomial `p(f, g)` with `p_m = ⟨T^{-m} f, g⟩`, so that
    /// `⟨π(q) f, g⟩ = ∫ q · p(f, g) dμ`.
    pub fn correlation(&self, other: &Self) -> Result<LaurentPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let total = self.half_scale + other.half_scale;
        if total % 2 != 0 {
            return Err(Error::ScaleParity(self.half_scale, other.half_scale));
        }
        let level = self.level.max(other.level);
        let a = self.refined(level);
        let b = other.refined(level);
        let modulus = pow3(level);
        let mut by_residue: HashMap<i64, Vec<(i64, &Rational)>> = HashMap::new();
        for (&j, d) in &b.coeffs {
            by_residue.entry(j.rem_euclid(modulus)).or_default().push((j, d));
        }
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&k, c) in &a.coeffs {
            if let Some(bucket) = by_residue.get(&k.rem_euclid(modulus)) {
                for &(j, d) in bucket {
                    accumulate(&mut coeffs, (k - j) / modulus, c * d);
                }
            }
        }
        let factor = pow2(-i64::from(level) - i64::from(total / 2));
        Ok(LaurentPoly::from_real_terms(
            coeffs.into_iter().map(|(m, v)| (m, v * &factor)),
        ))
    }

    /// Orthogonal projection onto `V_n = U^{-n} V_0`, the closed span of the
    /// level-`n` cells. Each cell of `f` contributes to the level-`n` cell
    /// containing it; cells lying in a gap of every coarser cell contribute
    /// nothing.
    pub fn mra_project(&self, n: i32) -> Self {
        if n >= self.level as i32 {
            return self.clone();
        }
        let steps = self.level as i32 - n;
        let mut acc = BTreeMap::new();
        'cells: for (&k, c) in &self.coeffs {
            let mut cell = Cell::new(self.level as i32, k);
            for _ in 0..steps {
                match cell.parent() {
                    Some(p) => cell = p,
                    None => continue 'cells,
                }
            }
            accumulate(&mut acc, cell.offset, c.clone());
        }
        let factor = pow2(-i64::from(steps));
        Self::new(
            n,
            acc.into_iter().map(|(k, c)| (k, c * &factor)),
            self.half_scale,
        )
    }

    /// `{"level": n, "coeffs": {"k": [num, den], ...}, "half_scale": s}`.
    pub fn to_json(&self) -> Value {
        let mut coeffs = Map::new();
        for (k, c) in &self.coeffs {
            coeffs.insert(
                k.to_string(),
                Value::Array(vec![big_number(c.numer()), big_number(c.denom())]),
            );
        }
        json!({
            "level": self.level,
            "coeffs": Value::Object(coeffs),
            "half_scale": self.half_scale,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let level = value["level"]
            .as_i64()
            .ok_or_else(|| Error::Json("missing integer \"level\"".into()))?;
        let half_scale = match &value["half_scale"] {
            Value::Null => 0,
            v => v
                .as_i64()
                .ok_or_else(|| Error::Json("\"half_scale\" must be an integer".into()))?,
        };
        let map = value["coeffs"]
            .as_object()
            .ok_or_else(|| Error::Json("\"coeffs\" must be an object".into()))?;
        let mut coeffs = Vec::with_capacity(map.len());
        for (key, entry) in map {
            let k: i64 = key
                .parse()
                .map_err(|_| Error::Json(format!("bad offset key {key:?}")))?;
            let pair = entry
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Json(format!("coefficient {key} must be [num, den]")))?;
            let num = parse_big_number(&pair[0])?;
            let den: BigInt = parse_big_number(&pair[1])?;
            if den.is_zero() {
                return Err(Error::Json(format!("zero denominator at {key}")));
            }
            coeffs.push((k, Rational::new(num, den)));
        }
        let level = i32::try_from(level).map_err(|_| Error::Json("level out of range".into()))?;
        let half_scale =
            i32::try_from(half_scale).map_err(|_| Error::Json("half_scale out of range".into()))?;
        Ok(Self::new(level, coeffs, half_scale))
    }
}

impl PartialEq for CellFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.half_scale != other.half_scale {
            return false;
        }
        let level = self.level.max(other.level);
        self.refined(level).coeffs == other.refined(level).coeffs
    }
}

impl Eq for CellFunction {}

fn accumulate(map: &mut BTreeMap<i64, Rational>, k: i64, c: Rational) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(k).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        map.remove(&k);
    }
}

/// `‖M^{n+1} f − M^n f‖²` for `n = 0..=n_max`, computed on cells.
pub fn cascade_divergence(f: &CellFunction, n_max: u32) -> Vec<(u32, Rational)> {
    let mut current = f.clone();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let next = current.cascade();
        let diff = next
            .try_sub(&current)
            .expect("cascade preserves the sqrt2 scale");
        out.push((n, diff.squared_norm()));
        current = next;
    }
    out
}

/// `h₀ = p(Mf − f, Mf − f)`, the correlation polynomial driving the cascade
/// differences: `‖M^{n+1}f − M^nf‖² = ∫ Rⁿ h₀ dμ`.
pub fn cascade_seed_correlation(f: &CellFunction) -> LaurentPoly {
    let diff = f.cascade().try_sub(f).expect("cascade preserves the sqrt2 scale");
    diff.correlation(&diff).expect("self correlation has even scale")
}

/// One row of a cascade cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeStep {
    pub n: u32,
    /// `‖M^{n+1}ξ − M^nξ‖²` on cells.
    pub cell_value: Rational,
    /// `∫ Rⁿ h₀ dμ` from the transfer operator.
    pub transfer_value: Rational,
    /// ℓ¹ mass of the nonconstant part of `Rⁿ h₀`.
    pub transfer_mass: Rational,
}

/// Cell iteration and transfer iteration of the same cascade, side by side.
#[derive(Clone, Debug)]
pub struct CascadeReport {
    pub seed_correlation: LaurentPoly,
    pub steps: Vec<CascadeStep>,
    /// Iteration of `R` on `h₀` toward `ν(h₀)`.
    pub invariant: ConvergenceReport,
}

impl CascadeReport {
    /// Every cell value equals the transfer-side integral exactly.
    pub fn exact_agreement(&self) -> bool {
        self.steps.iter().all(|s| s.cell_value == s.transfer_value)
    }

    /// `|cell_n − ν̂| ≤ mass_n + mass_final` for each step, where `ν̂` is the
    /// transfer estimate of `ν(h₀)`; both masses bound distances to `ν(h₀)`.
    pub fn within_bound(&self) -> bool {
        let (estimate, final_mass) = self.invariant.estimate();
        self.steps.iter().all(|s| {
            let gap = (&s.cell_value - &estimate.re).abs();
            gap <= &s.transfer_mass + final_mass
        }) && estimate.im.is_zero()
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "n": s.n,
                    "cell_value": format_rational(&s.cell_value),
                    "cell_value_float": to_f64(&s.cell_value),
                    "transfer_value": format_rational(&s.transfer_value),
                    "transfer_mass": format_rational(&s.transfer_mass),
                })
            })
            .collect();
        json!({
            "h0": self.seed_correlation.to_string(),
            "h0_json": self.seed_correlation.to_json(),
            "steps": steps,
            "invariant": self.invariant.to_json(),
            "exact_agreement": self.exact_agreement(),
            "within_bound": self.within_bound(),
        })
    }
}

/// Runs the cascade on cells for `n ≤ n_max` and the transfer operator on
/// `h₀`, then estimates `ν(h₀)` with at most `max_iter` iterations.
pub fn cascade_cross_check(
    f: &CellFunction,
    n_max: u32,
    max_iter: usize,
    tol: &Rational,
) -> Result<CascadeReport> {
    let filter = Filter::cantor();
    let h0 = cascade_seed_correlation(f);
    let cells = cascade_divergence(f, n_max);
    let mut iterate = h0.clone();
    let mut steps = Vec::with_capacity(cells.len());
    for (n, cell_value) in cells {
        let integral = iterate.haar_integral();
        if !integral.im.is_zero() {
            return Err(Error::ComplexCoefficient(0));
        }
        steps.push(CascadeStep {
            n,
            cell_value,
            transfer_value: integral.re,
            transfer_mass: iterate.nonconstant_l1_mass(),
        });
        iterate = filter.apply(&iterate);
    }
    let invariant = filter.iterate_to_invariant(&h0, max_iter, tol)?;
    Ok(CascadeReport {
        seed_correlation: h0,
        steps,
        invariant,
    })
}

/// Exact basis of `{f : M f = f}` among level-`level` simple functions with
/// cells in `[lo, hi)`, i.e. offsets `lo·3^level ≤ k < hi·3^level`.
///
/// `M f` lives one level finer, so the identity side is refined before the
/// equations are formed.
pub fn refinement_nullspace(level: u32, lo: i64, hi: i64) -> Result<Vec<CellFunction>> {
    if level < 1 {
        return Err(Error::InvalidArgument("refinement nullspace needs level >= 1".into()));
    }
    if hi <= lo {
        return Ok(Vec::new());
    }
    let scale = pow3(level);
    let first = lo * scale;
    let ncols = usize::try_from((hi - lo) * scale).expect("window fits in memory");

    let mut rows: BTreeMap<i64, SparseRow> = BTreeMap::new();
    let mut add = |row: i64, col: usize, v: i64| {
        let entry = rows.entry(row).or_default().entry(col).or_insert_with(Rational::zero);
        *entry += Rational::from_integer(v.into());
    };
    for col in 0..ncols {
        let k = first + col as i64;
        add(k, col, 1);
        add(k + 2 * scale, col, 1);
        add(3 * k, col, -1);
        add(3 * k + 2, col, -1);
    }
    let basis = nullspace(rows.into_values().collect(), ncols);
    Ok(basis
        .into_iter()
        .map(|v| {
            CellFunction::new(
                level as i32,
                v.into_iter()
                    .enumerate()
                    .map(|(i, c)| (first + i as i64, c)),
                0,
            )
        })
        .collect())
}

/// Orthogonal generators of `W_0 = V_1 ⊖ V_0` on the level-1 cells with
/// offsets in `[0, 3^window)`, with their squared norms.
///
/// Gram–Schmidt runs over the level-1 cells in offset order after the
/// level-0 cells of the window; the generators are left unnormalised so the
/// arithmetic stays rational. Each integer translate contributes two.
pub fn detail_basis(window: u32) -> Result<Vec<(CellFunction, Rational)>> {
    if window < 1 {
        return Err(Error::InvalidArgument("detail basis needs window >= 1".into()));
    }
    let translates = pow3(window - 1);
    let mut accepted: Vec<(CellFunction, Rational)> = (0..translates)
        .map(|k| (CellFunction::cell(0, k), Rational::one()))
        .collect();
    let coarse = accepted.len();
    for j in 0..3 * translates {
        let mut v = CellFunction::cell(1, j);
        for (b, norm) in &accepted {
            let coeff = v.inner(b)? / norm;
            if !coeff.is_zero() {
                v = v.try_sub(&b.scale(&coeff))?;
            }
        }
        if !v.is_zero() {
            let norm = v.squared_norm();
            accepted.push((v, norm));
        }
    }
    Ok(accepted.split_off(coarse))
}

/// `U^{-n} T^k χ_C`, the orthonormal basis vectors of `V_n`.
pub fn mra_basis_vector(n: u32, k: i64) -> CellFunction {
    (0..n).fold(CellFunction::chi_c().translate(k), |f, _| f.dilate_inverse())
}

/// `√2·Uχ_C − χ_C − T²χ_C`, which the scaling equation says is zero.
pub fn scaling_equation_residual() -> CellFunction {
    let phi = CellFunction::chi_c();
    let lhs = phi.dilate().scale_sqrt2(1);
    lhs.try_sub(&phi)
        .and_then(|d| d.try_sub(&phi.translate(2)))
        .expect("all terms have even scale")
}

/// Checks `⟨π(p)χ_C, χ_C⟩ = ∫ p dμ` for a real polynomial `p`.
pub fn orthogonality_holds(p: &LaurentPoly) -> Result<bool> {
    let phi = CellFunction::chi_c();
    let lhs = phi.pi_apply(p)?.inner(&phi)?;
    Ok(real(lhs) == p.haar_integral())
}
