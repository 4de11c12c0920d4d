//! Stable parameter regions of uncertain systems.
//!
//! A system depends on named real parameters and possibly on the order `α`. It is
//! given either as an affine matrix family `A(β) = A_0 + Σ β_k A_k` or directly by
//! expressions for the characteristic coefficients `a_1..a_n`. [`scan_region`] rasters
//! a box of parameter values; [`max_param_bisect`] finds the largest value of one
//! scalar parameter for which the system stays stable over a whole range of another.

use crate::charpoly::char_poly;
use crate::closed_forms::corollary_verdict;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::hurwitz::{is_degenerate, theorem1_verdict};
use crate::matrix::SquareMatrix;
use crate::oracles::argument_oracle_poly;
use crate::poly::RealPolynomial;
use crate::verdict::{Method, Outcome, StabilityVerdict};

/// Name under which the order appears on an axis or in coefficient expressions.
pub const ALPHA: &str = "alpha";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaMode {
    Fixed(f64),
    /// `α` is supplied per cell, from an axis named [`ALPHA`].
    Free,
}

/// `A(β) = A_0 + Σ β_k A_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSystem {
    basis: Vec<SquareMatrix>,
    param_names: Vec<String>,
    alpha_mode: AlphaMode,
}

impl ParamSystem {
    pub fn new(
        basis: Vec<SquareMatrix>,
        param_names: Vec<String>,
        alpha_mode: AlphaMode,
    ) -> Result<Self> {
        let first = basis
            .first()
            .ok_or_else(|| Error::InvalidInput("a matrix family needs at least A_0".into()))?;
        if basis.len() != param_names.len() + 1 {
            return Err(Error::DimensionMismatch {
                expected: basis.len() - 1,
                got: param_names.len(),
            });
        }
        for m in &basis[1..] {
            if m.order() != first.order() {
                return Err(Error::DimensionMismatch {
                    expected: first.order(),
                    got: m.order(),
                });
            }
        }
        check_names(&param_names)?;
        check_alpha_mode(alpha_mode)?;
        Ok(Self {
            basis,
            param_names,
            alpha_mode,
        })
    }

    pub fn order(&self) -> usize {
        self.basis[0].order()
    }

    pub fn basis(&self) -> &[SquareMatrix] {
        &self.basis
    }

    pub fn param_names(&self) -> &[String] {
        &self.param_names
    }

    pub fn alpha_mode(&self) -> AlphaMode {
        self.alpha_mode
    }
}

/// `A_0 + Σ β_i A_i`.
pub fn instantiate(sys: &ParamSystem, point: &[f64]) -> Result<SquareMatrix> {
    if point.len() != sys.param_names.len() {
        return Err(Error::DimensionMismatch {
            expected: sys.param_names.len(),
            got: point.len(),
        });
    }
    let mut a = sys.basis[0].clone();
    for (b, m) in point.iter().zip(&sys.basis[1..]) {
        a = a.add_scaled(m, *b)?;
    }
    Ok(a)
}

/// Characteristic coefficients `a_1..a_n` as expressions in `alpha` and the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    texts: Vec<String>,
    exprs: Vec<Expr>,
    param_names: Vec<String>,
    alpha_mode: AlphaMode,
}

impl PolySystem {
    pub fn new(
        coefficients: &[&str],
        param_names: Vec<String>,
        alpha_mode: AlphaMode,
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::ZeroDegree);
        }
        check_names(&param_names)?;
        check_alpha_mode(alpha_mode)?;
        let names = expr_names(&param_names);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let exprs = coefficients
            .iter()
            .map(|t| Expr::parse(t, &refs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            texts: coefficients.iter().map(|s| s.to_string()).collect(),
            exprs,
            param_names,
            alpha_mode,
        })
    }

    pub fn order(&self) -> usize {
        self.exprs.len()
    }

    pub fn coefficient_texts(&self) -> &[String] {
        &self.texts
    }

    pub fn param_names(&self) -> &[String] {
        &self.param_names
    }

    pub fn alpha_mode(&self) -> AlphaMode {
        self.alpha_mode
    }

    /// Monic `λ^n + a_1 λ^{n−1} + … + a_n` at the given `α` and parameter values.
    pub fn polynomial_at(&self, alpha: f64, point: &[f64]) -> Result<RealPolynomial> {
        if point.len() != self.param_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.param_names.len(),
                got: point.len(),
            });
        }
        let mut x = Vec::with_capacity(point.len() + 1);
        x.push(alpha);
        x.extend_from_slice(point);
        let mut coeffs = vec![1.0];
        for (e, t) in self.exprs.iter().zip(&self.texts) {
            let v = e.eval(&x);
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "coefficient '{t}' is not finite at {x:?}"
                )));
            }
            coeffs.push(v);
        }
        RealPolynomial::new(coeffs)
    }
}

fn expr_names(params: &[String]) -> Vec<String> {
    std::iter::once(ALPHA.to_string())
        .chain(params.iter().cloned())
        .collect()
}

fn check_names(names: &[String]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if n == ALPHA {
            return Err(Error::InvalidInput(format!(
                "'{ALPHA}' is reserved for the order"
            )));
        }
        if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::InvalidInput(format!("invalid parameter name '{n}'")));
        }
        if names[..i].contains(n) {
            return Err(Error::InvalidInput(format!(
                "duplicate parameter name '{n}'"
            )));
        }
    }
    Ok(())
}

fn check_alpha_mode(mode: AlphaMode) -> Result<()> {
    match mode {
        AlphaMode::Fixed(a) => crate::check_alpha(a),
        AlphaMode::Free => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum System {
    Matrix(ParamSystem),
    Poly(PolySystem),
}

impl System {
    pub fn param_names(&self) -> &[String] {
        match self {
            System::Matrix(m) => m.param_names(),
            System::Poly(p) => p.param_names(),
        }
    }

    pub fn alpha_mode(&self) -> AlphaMode {
        match self {
            System::Matrix(m) => m.alpha_mode(),
            System::Poly(p) => p.alpha_mode(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            System::Matrix(m) => m.order(),
            System::Poly(p) => p.order(),
        }
    }

    pub fn polynomial_at(&self, alpha: f64, point: &[f64]) -> Result<RealPolynomial> {
        match self {
            System::Matrix(m) => Ok(char_poly(&instantiate(m, point)?)),
            System::Poly(p) => p.polynomial_at(alpha, point),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// `count` points from `lo` to `hi` inclusive.
    Nodes,
    /// Midpoints of `count` equal cells; suits open intervals.
    Centers,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub sampling: Sampling,
}

impl Axis {
    pub fn new(name: &str, lo: f64, hi: f64, count: usize, sampling: Sampling) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInput(format!(
                "axis '{name}': need finite lo < hi"
            )));
        }
        if count == 0 || (count == 1 && sampling == Sampling::Nodes) {
            return Err(Error::InvalidInput(format!(
                "axis '{name}': node sampling needs at least 2 points"
            )));
        }
        Ok(Self {
            name: name.to_string(),
            lo,
            hi,
            count,
            sampling,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        let w = self.hi - self.lo;
        match self.sampling {
            Sampling::Nodes if i + 1 == self.count => self.hi,
            Sampling::Nodes => self.lo + w * i as f64 / (self.count - 1) as f64,
            Sampling::Centers => self.lo + w * (i as f64 + 0.5) / self.count as f64,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// One byte per cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum CellCode {
    NotStable = 0,
    Stable = 1,
    Boundary = 2,
    /// `sin(nαπ/2)` vanishes, so the fractional Hurwitz matrix loses its leading entry.
    Degenerate = 3,
}

impl CellCode {
    pub fn from_outcome(o: Outcome) -> Self {
        match o {
            Outcome::NotStable => CellCode::NotStable,
            Outcome::Stable => CellCode::Stable,
            Outcome::Boundary => CellCode::Boundary,
        }
    }

    pub fn from_u8(b: u8) -> Option<Self> {
        Some(match b {
            0 => CellCode::NotStable,
            1 => CellCode::Stable,
            2 => CellCode::Boundary,
            3 => CellCode::Degenerate,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DegeneratePolicy {
    /// Record [`CellCode::Degenerate`].
    #[default]
    Mark,
    /// Decide the cell through [`theorem1_verdict`], which falls back to the
    /// eigenvalue-argument oracle.
    Delegate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Route {
    /// Closed-form conditions for `n ≤ 4`, minors otherwise.
    #[default]
    Auto,
    Theorem1,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanOptions {
    pub tol: f64,
    /// Worker threads; 0 uses the available parallelism.
    pub workers: usize,
    pub degenerate: DegeneratePolicy,
    pub route: Route,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            tol: crate::DEFAULT_BOUNDARY_TOL,
            workers: 0,
            degenerate: DegeneratePolicy::Mark,
            route: Route::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionRaster {
    pub axes: Vec<Axis>,
    /// Row-major: the first axis varies slowest.
    pub cells: Vec<u8>,
    pub method: Method,
}

impl RegionRaster {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        let mut r = flat;
        for (k, ax) in self.axes.iter().enumerate().rev() {
            idx[k] = r % ax.count;
            r /= ax.count;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        self.axes
            .iter()
            .zip(idx)
            .fold(0, |acc, (ax, &i)| acc * ax.count + i)
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, ax)| ax.value(i))
            .collect()
    }

    pub fn code(&self, idx: &[usize]) -> CellCode {
        CellCode::from_u8(self.cells[self.flat_index(idx)]).expect("valid cell code")
    }

    pub fn count(&self, code: CellCode) -> usize {
        self.cells.iter().filter(|&&c| c == code as u8).count()
    }

    pub fn stable_fraction(&self) -> f64 {
        if self.cells.is_empty() {
            0.0
        } else {
            self.count(CellCode::Stable) as f64 / self.cells.len() as f64
        }
    }

    /// Per-axis `(min, max)` over stable cell coordinates.
    pub fn stable_bounding_box(&self) -> Option<Vec<(f64, f64)>> {
        let mut bbox: Option<Vec<(f64, f64)>> = None;
        for (flat, &c) in self.cells.iter().enumerate() {
            if c != CellCode::Stable as u8 {
                continue;
            }
            let x = self.coords(flat);
            let b = bbox.get_or_insert_with(|| x.iter().map(|&v| (v, v)).collect());
            for (bi, v) in b.iter_mut().zip(&x) {
                bi.0 = bi.0.min(*v);
                bi.1 = bi.1.max(*v);
            }
        }
        bbox
    }
}

/// Maps axis names to parameter slots: returns, per axis, `None` for `alpha` or the
/// parameter index.
fn resolve_axes(
    sys: &System,
    axes: &[Axis],
    fixed: &[(String, f64)],
) -> Result<(Vec<Option<usize>>, Vec<f64>)> {
    let names = sys.param_names();
    let mut slots = Vec::with_capacity(axes.len());
    let mut seen = vec![false; names.len()];
    let mut alpha_axis = false;
    for ax in axes {
        if ax.name == ALPHA {
            if sys.alpha_mode() != AlphaMode::Free {
                return Err(Error::InvalidInput(
                    "alpha axis given but alpha is fixed".into(),
                ));
            }
            if ax.lo < 1.0 || ax.hi >= 2.0 {
                return Err(Error::AlphaOutOfRange(if ax.lo < 1.0 {
                    ax.lo
                } else {
                    ax.hi
                }));
            }
            if alpha_axis {
                return Err(Error::InvalidInput("alpha axis given twice".into()));
            }
            alpha_axis = true;
            slots.push(None);
        } else {
            let k = names.iter().position(|n| *n == ax.name).ok_or_else(|| {
                Error::InvalidInput(format!("axis '{}' is not a parameter", ax.name))
            })?;
            if seen[k] {
                return Err(Error::InvalidInput(format!(
                    "axis '{}' given twice",
                    ax.name
                )));
            }
            seen[k] = true;
            slots.push(Some(k));
        }
    }
    if sys.alpha_mode() == AlphaMode::Free && !alpha_axis {
        return Err(Error::InvalidInput("alpha is free but has no axis".into()));
    }
    let mut base = vec![0.0; names.len()];
    for (name, v) in fixed {
        let k = names.iter().position(|n| n == name).ok_or_else(|| {
            Error::InvalidInput(format!("fixed value for unknown parameter '{name}'"))
        })?;
        if seen[k] {
            return Err(Error::InvalidInput(format!(
                "'{name}' is both an axis and fixed"
            )));
        }
        base[k] = *v;
    }
    Ok((slots, base))
}

/// Verdict for one cell; `None` marks a degenerate cell under [`DegeneratePolicy::Mark`].
pub fn cell_verdict(
    f: &RealPolynomial,
    alpha: f64,
    opts: &ScanOptions,
) -> Result<Option<StabilityVerdict>> {
    let n = f.degree();
    if is_degenerate(n, alpha) {
        return match opts.degenerate {
            DegeneratePolicy::Mark => Ok(None),
            DegeneratePolicy::Delegate => theorem1_verdict(f, alpha, opts.tol).map(Some),
        };
    }
    match opts.route {
        Route::Auto if n <= 4 => corollary_verdict(f, alpha, opts.tol).map(Some),
        _ => theorem1_verdict(f, alpha, opts.tol).map(Some),
    }
}

/// Rasters the stable region over 1 to 3 axes. Parameters without an axis take their
/// value from `fixed` (default 0). The output does not depend on `opts.workers`.
pub fn scan_region(
    sys: &System,
    axes: &[Axis],
    fixed: &[(String, f64)],
    opts: &ScanOptions,
) -> Result<RegionRaster> {
    use rayon::prelude::*;

    if axes.is_empty() || axes.len() > 3 {
        return Err(Error::InvalidInput(format!(
            "region scans take 1 to 3 axes, got {}",
            axes.len()
        )));
    }
    let (slots, base) = resolve_axes(sys, axes, fixed)?;
    let fixed_alpha = match sys.alpha_mode() {
        AlphaMode::Fixed(a) => Some(a),
        AlphaMode::Free => None,
    };
    let total = axes
        .iter()
        .try_fold(1usize, |acc, ax| acc.checked_mul(ax.count))
        .ok_or_else(|| Error::InvalidInput("raster too large".into()))?;
    let method = match opts.route {
        Route::Auto if sys.order() <= 4 => Method::ClosedForm,
        _ => Method::Theorem1,
    };
    let template = RegionRaster {
        axes: axes.to_vec(),
        cells: Vec::new(),
        method,
    };
    let eval = |flat: usize| -> Result<u8> {
        let idx = template.multi_index(flat);
        let mut point = base.clone();
        let mut alpha = fixed_alpha.unwrap_or(f64::NAN);
        for ((slot, ax), &i) in slots.iter().zip(axes).zip(&idx) {
            match slot {
                Some(k) => point[*k] = ax.value(i),
                None => alpha = ax.value(i),
            }
        }
        let f = sys.polynomial_at(alpha, &point)?;
        Ok(match cell_verdict(&f, alpha, opts)? {
            None => CellCode::Degenerate as u8,
            Some(v) => CellCode::from_outcome(v.outcome) as u8,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let cells = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(eval)
            .collect::<Result<Vec<u8>>>()
    })?;
    Ok(RegionRaster { cells, ..template })
}

/// Which decider the bisection uses per sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BisectRoute {
    #[default]
    Theorem1,
    ClosedForm,
    ArgumentOracle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BisectOptions {
    pub alpha: f64,
    /// Search range for the scalar parameter; it must be stable at `lo`.
    pub lo: f64,
    pub hi: f64,
    /// Closed range of the constraint parameter.
    pub constraint: (f64, f64),
    pub samples: usize,
    pub coarse_steps: usize,
    /// Width of the final bracket.
    pub tol: f64,
    pub verdict_tol: f64,
    pub route: BisectRoute,
}

impl Default for BisectOptions {
    fn default() -> Self {
        Self {
            alpha: 1.5,
            lo: 0.0,
            hi: 10.0,
            constraint: (0.0, 1.0 - 1e-6),
            samples: 101,
            coarse_steps: 100,
            tol: 5e-4,
            verdict_tol: crate::DEFAULT_BOUNDARY_TOL,
            route: BisectRoute::Theorem1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BisectResult {
    /// Largest stable value found (the lower end of the final bracket).
    pub bound: f64,
    /// Constraint sample that fails first just above the bound; `None` if the whole
    /// range is stable.
    pub critical_constraint: Option<f64>,
    pub hit_range_max: bool,
    /// Constraint samples used in the final pass.
    pub samples: Vec<f64>,
    pub evaluations: usize,
}

struct Bisector<'a, F> {
    family: &'a F,
    opts: &'a BisectOptions,
    evaluations: usize,
}

impl<F> Bisector<'_, F>
where
    F: Fn(f64, f64) -> Result<RealPolynomial>,
{
    fn stable_at(&mut self, eps: f64, c: f64) -> Result<bool> {
        self.evaluations += 1;
        let f = (self.family)(eps, c)?;
        let (alpha, tol) = (self.opts.alpha, self.opts.verdict_tol);
        let v = match self.opts.route {
            BisectRoute::Theorem1 => theorem1_verdict(&f, alpha, tol)?,
            BisectRoute::ClosedForm => corollary_verdict(&f, alpha, tol)?,
            BisectRoute::ArgumentOracle => argument_oracle_poly(&f, alpha, tol)?,
        };
        Ok(v.outcome == Outcome::Stable)
    }

    /// First failing constraint sample at `eps`, if any.
    fn first_failure(&mut self, eps: f64, samples: &[f64]) -> Result<Option<f64>> {
        for &c in samples {
            if !self.stable_at(eps, c)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Largest value of a scalar parameter `ε ∈ [lo, hi]` for which `family(ε, c)` is stable
/// for every sampled constraint value `c`.
///
/// A coarse scan brackets the first failure, bisection narrows it to `opts.tol`, and
/// the constraint samples are refined around the failing one until the bracket no
/// longer moves. The result is certified: every sample is stable at `bound − 2·tol`
/// and some sample is not at `bound + 2·tol` (unless the whole range is stable).
pub fn max_param_bisect<F>(family: F, opts: &BisectOptions) -> Result<BisectResult>
where
    F: Fn(f64, f64) -> Result<RealPolynomial>,
{
    crate::check_alpha(opts.alpha)?;
    if !(opts.lo < opts.hi) || !(opts.tol > 0.0) || opts.coarse_steps == 0 {
        return Err(Error::InvalidInput(
            "bisection needs lo < hi, tol > 0 and coarse steps".into(),
        ));
    }
    let (clo, chi) = opts.constraint;
    if !(clo <= chi) {
        return Err(Error::InvalidInput("constraint range is empty".into()));
    }
    let mut b = Bisector {
        family: &family,
        opts,
        evaluations: 0,
    };
    let mut samples = linspace(clo, chi, opts.samples.max(2));

    if let Some(c) = b.first_failure(opts.lo, &samples)? {
        return Err(Error::NoBracket(format!(
            "not stable at the lower end {} (constraint value {c})",
            opts.lo
        )));
    }

    // coarse scan
    let grid = linspace(opts.lo, opts.hi, opts.coarse_steps + 1);
    let mut bracket = None;
    for w in grid.windows(2) {
        if b.first_failure(w[1], &samples)?.is_some() {
            bracket = Some((w[0], w[1]));
            break;
        }
    }
    let Some((mut good, mut bad)) = bracket else {
        return Ok(BisectResult {
            bound: opts.hi,
            critical_constraint: None,
            hit_range_max: true,
            samples,
            evaluations: b.evaluations,
        });
    };

    let mut critical;
    loop {
        while bad - good > opts.tol {
            let mid = 0.5 * (good + bad);
            if b.first_failure(mid, &samples)?.is_some() {
                bad = mid;
            } else {
                good = mid;
            }
        }
        critical = b
            .first_failure(bad, &samples)?
            .expect("upper end of the bracket fails");
        // refine constraint sampling around the failing sample
        let step = (chi - clo) / (opts.samples.max(2) - 1) as f64;
        let fine = linspace((critical - step).max(clo), (critical + step).min(chi), 41);
        let before = samples.len();
        samples.extend(fine);
        samples.sort_by(|x, y| x.partial_cmp(y).unwrap());
        samples.dedup();
        match b.first_failure(good, &samples)? {
            None => break,
            Some(_) if samples.len() == before => break,
            Some(_) => {
                // the refined set fails below the bracket: restart from the coarse grid
                let mut restarted = None;
                for w in grid.windows(2) {
                    if w[0] >= good {
                        break;
                    }
                    if b.first_failure(w[1].min(good), &samples)?.is_some() {
                        restarted = Some((w[0], w[1].min(good)));
                        break;
                    }
                }
                let (g, bd) = restarted.ok_or_else(|| {
                    Error::NoBracket("refined constraint samples fail at the lower end".into())
                })?;
                good = g;
                bad = bd;
            }
        }
    }

    // certificate
    let below = (good - 2.0 * opts.tol).max(opts.lo);
    if b.first_failure(below, &samples)?.is_some() {
        return Err(Error::NoBracket(format!(
            "certificate failed: unstable at {below}"
        )));
    }
    let above = good + 2.0 * opts.tol;
    if above <= opts.hi && b.first_failure(above, &samples)?.is_none() {
        return Err(Error::NoBracket(format!(
            "certificate failed: stable at {above}"
        )));
    }
    Ok(BisectResult {
        bound: good,
        critical_constraint: Some(critical),
        hit_range_max: false,
        samples,
        evaluations: b.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(rows: &[&[f64]]) -> SquareMatrix {
        SquareMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn example1() -> ParamSystem {
        ParamSystem::new(
            vec![
                sq(&[&[-1.0, 3.0], &[0.0, -1.0]]),
                sq(&[&[-1.0, 0.0], &[1.0, -1.0]]),
                sq(&[&[-1.0, 1.0], &[0.0, 0.0]]),
            ],
            vec!["beta1".into(), "beta2".into()],
            AlphaMode::Fixed(1.5),
        )
        .unwrap()
    }

    #[test]
    fn instantiate_examples() {
        let sys = example1();
        assert_eq!(instantiate(&sys, &[0.0, 0.0]).unwrap(), sys.basis()[0]);
        assert_eq!(
            instantiate(&sys, &[1.0, 0.0]).unwrap(),
            sq(&[&[-2.0, 3.0], &[1.0, -2.0]])
        );
        assert!(instantiate(&sys, &[1.0]).is_err());
    }

    #[test]
    fn axis_sampling() {
        let a = Axis::new("x", -3.0, 3.0, 301, Sampling::Nodes).unwrap();
        assert_eq!(a.value(0), -3.0);
        assert_eq!(a.value(150), 0.0);
        assert_eq!(a.value(300), 3.0);
        let c = Axis::new("x", 0.0, 10.0, 4, Sampling::Centers).unwrap();
        assert_eq!(c.values(), vec![1.25, 3.75, 6.25, 8.75]);
        assert!(Axis::new("x", 1.0, 1.0, 3, Sampling::Nodes).is_err());
        assert!(Axis::new("x", 0.0, 1.0, 1, Sampling::Nodes).is_err());
    }

    #[test]
    fn small_scan_example1() {
        let sys = System::Matrix(example1());
        let axes = [
            Axis::new("beta1", -3.0, 3.0, 7, Sampling::Nodes).unwrap(),
            Axis::new("beta2", -3.0, 3.0, 7, Sampling::Nodes).unwrap(),
        ];
        let r = scan_region(&sys, &axes, &[], &ScanOptions::default()).unwrap();
        assert_eq!(r.code(&[3, 3]), CellCode::Stable);
        assert_eq!(r.code(&[0, 3]), CellCode::NotStable);
        assert_eq!(r.method, Method::ClosedForm);
    }

    #[test]
    fn poly_system_marks_degenerate_alpha() {
        let sys = System::Poly(
            PolySystem::new(
                &["beta - alpha", "2 beta", "4"],
                vec!["beta".into()],
                AlphaMode::Free,
            )
            .unwrap(),
        );
        let axes = [
            Axis::new(ALPHA, 1.0, 1.99, 298, Sampling::Nodes).unwrap(),
            Axis::new("beta", 0.0, 10.0, 5, Sampling::Centers).unwrap(),
        ];
        let r = scan_region(&sys, &axes, &[], &ScanOptions::default()).unwrap();
        // 4/3 = 1 + 100·0.99/297
        assert_eq!(r.code(&[100, 2]), CellCode::Degenerate);
        assert_eq!(r.count(CellCode::Degenerate), 5);
    }

    #[test]
    fn rejects_bad_axes() {
        let sys = System::Matrix(example1());
        let ax = |n: &str| Axis::new(n, 0.0, 1.0, 3, Sampling::Nodes).unwrap();
        let o = ScanOptions::default();
        assert!(scan_region(&sys, &[ax("gamma")], &[], &o).is_err());
        assert!(scan_region(&sys, &[ax(ALPHA)], &[], &o).is_err());
        assert!(scan_region(&sys, &[ax("beta1"), ax("beta1")], &[], &o).is_err());
        assert!(scan_region(&sys, &[], &[], &o).is_err());
        let four = [ax("beta1"), ax("beta2"), ax("beta1"), ax("beta2")];
        assert!(scan_region(&sys, &four, &[], &o).is_err());
    }

    #[test]
    fn bisect_range_max_when_parameter_has_no_effect() {
        let fam = |_eps: f64, _c: f64| Ok(RealPolynomial::new(vec![1.0, 2.0, 1.0]).unwrap());
        let r = max_param_bisect(
            fam,
            &BisectOptions {
                hi: 5.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.hit_range_max);
        assert_eq!(r.bound, 5.0);
    }

    #[test]
    fn bisect_simple_linear_bound() {
        // λ + (2 − ε·(1 + c)): stable iff ε(1 + c) < 2, binding at c = 1 → ε < 1
        let fam = |eps: f64, c: f64| RealPolynomial::new(vec![1.0, 2.0 - eps * (1.0 + c)]);
        let opts = BisectOptions {
            constraint: (0.0, 1.0),
            hi: 4.0,
            tol: 1e-6,
            ..Default::default()
        };
        let r = max_param_bisect(fam, &opts).unwrap();
        assert!((r.bound - 1.0).abs() < 2e-6, "{}", r.bound);
        assert_eq!(r.critical_constraint, Some(1.0));
    }

    #[test]
    fn bisect_requires_stable_start() {
        let fam = |_e: f64, _c: f64| RealPolynomial::new(vec![1.0, -1.0]);
        assert!(matches!(
            max_param_bisect(fam, &BisectOptions::default()),
            Err(Error::NoBracket(_))
        ));
    }
}
