//! Executable estimate checks. Each check samples an inequality the
//! continuous theory guarantees, fits any free constants, and reports the
//! outcome as a [`CheckReport`].
//!
//! Fitted constants are reported, never asserted against invented targets:
//! pass criteria are inequalities with explicit tolerances plus stability
//! under refinement. Every check is deterministic given its seed.

mod constants;
mod kernel_checks;
mod matrix_checks;
mod sector_checks;

pub use constants::{check_extension_constants, extend_estimate_constants};
pub use kernel_checks::{
    check_complex_kernel_bound, check_two_sided_bounds, check_ultracontractivity,
};
pub use matrix_checks::{
    check_domain_monotonicity, check_domination, check_form_criterion, check_submarkovian_forms,
};
pub use sector_checks::{check_holomorphy_axioms, check_resolvent_sector, check_sector_norm_l1};

use crate::discrete::{assemble_dirichlet, spectrum, Grid1D};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::specfun::FractionalOrder;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A point `z = r e^{iα}` of a sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorPoint<T> {
    pub modulus: T,
    pub angle: T,
}

impl<T: Real> SectorPoint<T> {
    pub fn new(modulus: T, angle: T) -> Result<Self> {
        if !(modulus > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "modulus",
                reason: format!("sector points need a positive modulus, got {modulus}"),
            });
        }
        Ok(Self { modulus, angle })
    }

    /// Restricts to the open right half plane, where semigroup evaluations
    /// live.
    pub fn semigroup_point(modulus: T, angle: T) -> Result<Self> {
        if !(angle.abs() < T::FRAC_PI_2()) {
            return Err(Error::InvalidParameter {
                name: "angle",
                reason: format!("semigroup sector needs |angle| < pi/2, got {angle}"),
            });
        }
        Self::new(modulus, angle)
    }

    /// Restricts to the slit plane, where resolvent evaluations live.
    pub fn resolvent_point(modulus: T, angle: T) -> Result<Self> {
        if !(angle.abs() < T::PI()) {
            return Err(Error::InvalidParameter {
                name: "angle",
                reason: format!("resolvent sector needs |angle| < pi, got {angle}"),
            });
        }
        Self::new(modulus, angle)
    }

    pub fn to_complex(self) -> num_complex::Complex<T> {
        num_complex::Complex::from_polar(self.modulus, self.angle)
    }
}

/// Machine-readable outcome of one verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub fitted_constants: BTreeMap<String, f64>,
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_trend: Option<Vec<f64>>,
}

impl CheckReport {
    /// Builds a report; `pass` is derived from the violation/tolerance pair
    /// so the two can never disagree.
    pub fn new(name: &str, tolerance: f64, max_violation: f64, samples: usize, seed: u64) -> Self {
        Self {
            name: name.to_string(),
            fitted_constants: BTreeMap::new(),
            max_violation,
            tolerance,
            pass: max_violation <= tolerance,
            samples,
            seed,
            refinement_trend: None,
        }
    }

    pub fn with_constant(mut self, key: &str, value: f64) -> Self {
        self.fitted_constants.insert(key.to_string(), value);
        self
    }

    pub fn with_trend(mut self, trend: Vec<f64>) -> Self {
        self.refinement_trend = Some(trend);
        self
    }

    /// Finite sentinel marking a failed side condition (for example a fitted
    /// constant that came out nonpositive): large enough to fail the check,
    /// small enough to serialize.
    pub fn side_condition_marker(tolerance: f64) -> f64 {
        tolerance.max(f64::MIN_POSITIVE) * 1e6
    }
}

/// Configuration for the bundled verification suite.
#[derive(Debug, Clone)]
pub struct SuiteConfig<T> {
    pub grid: Grid1D<T>,
    pub order: FractionalOrder<T>,
    pub seed: u64,
    /// Times for the domination and kernel-shape checks.
    pub t_list: Vec<T>,
    /// Random-sample count for the form-based checks.
    pub sample_count: usize,
    /// Weakening exponent of the complex kernel bound.
    pub epsilon: T,
}

impl<T: Real> SuiteConfig<T> {
    pub fn new(grid: Grid1D<T>, order: FractionalOrder<T>, seed: u64) -> Self {
        Self {
            grid,
            order,
            seed,
            t_list: vec![lit(0.01), lit(0.1), T::one()],
            sample_count: 100,
            epsilon: lit(0.5),
        }
    }
}

/// Names of the suite checks, in execution order.
pub const SUITE_CHECK_NAMES: [&str; 11] = [
    "two_sided_bounds",
    "ultracontractivity",
    "complex_kernel_bound",
    "domination",
    "form_criterion",
    "domain_monotonicity",
    "submarkovian_forms",
    "resolvent_sector",
    "sector_norm_l1",
    "holomorphy_axioms",
    "extension_constants",
];

/// A runnable unit of the suite: name plus a closure producing the report.
pub type CheckJob<'a> = (
    &'static str,
    Box<dyn FnOnce() -> Result<CheckReport> + Send + 'a>,
);

/// Builds the full suite as independent jobs so callers can run them on any
/// worker pool; results must be reassembled in the returned order.
pub fn suite_jobs<T: Real + 'static>(config: &SuiteConfig<T>) -> Result<Vec<CheckJob<'static>>> {
    if config.order.dim() != 1 {
        return Err(Error::InvalidParameter {
            name: "N",
            reason: "the verification suite runs on one-dimensional operators".into(),
        });
    }
    let grid = config.grid;
    let order = config.order;
    let seed = config.seed;
    let samples = config.sample_count;
    let epsilon = config.epsilon;
    let t_list = config.t_list.clone();

    // Enclosing grid with the same spacing and doubled width.
    let width = grid.b() - grid.a();
    let outer = Grid1D::new(
        grid.a() - width * lit(0.5),
        grid.b() + width * lit(0.5),
        2 * grid.len(),
    )?;

    let t_grid: Vec<T> = vec![lit(0.1), lit(0.33), T::one(), lit(3.3), lit(10.0)];
    let r_grid: Vec<T> = vec![T::zero(), lit(0.5), T::one(), lit(2.0), lit(5.0)];

    let mut jobs: Vec<CheckJob> = Vec::new();
    jobs.push((
        "two_sided_bounds",
        Box::new({
            let (t_grid, r_grid) = (t_grid.clone(), r_grid.clone());
            move || check_two_sided_bounds(order, &t_grid, &r_grid)
        }),
    ));
    jobs.push((
        "ultracontractivity",
        Box::new({
            let t_grid = t_grid.clone();
            move || check_ultracontractivity(order, &t_grid, Some(grid))
        }),
    ));
    jobs.push((
        "complex_kernel_bound",
        Box::new({
            let r_grid = r_grid.clone();
            move || {
                let theta = T::FRAC_PI_2() * epsilon * lit(0.5);
                let moduli: Vec<T> = vec![lit(0.2), lit(0.7), lit(2.0), lit(7.0)];
                check_complex_kernel_bound(order, epsilon, theta, &moduli, 5, &r_grid)
            }
        }),
    ));
    jobs.push((
        "domination",
        Box::new({
            let t_list = t_list.clone();
            move || check_domination(grid, order, &t_list, 20, seed)
        }),
    ));
    jobs.push((
        "form_criterion",
        Box::new(move || check_form_criterion(grid, outer, order, samples, seed)),
    ));
    jobs.push((
        "domain_monotonicity",
        Box::new({
            let t_list = t_list.clone();
            move || check_domain_monotonicity(grid, outer, order, &t_list)
        }),
    ));
    jobs.push((
        "submarkovian_forms",
        Box::new(move || {
            let op = assemble_dirichlet(grid, order)?;
            check_submarkovian_forms(&op, samples, seed)
        }),
    ));
    jobs.push((
        "resolvent_sector",
        Box::new(move || {
            let op = assemble_dirichlet(grid, order)?;
            let spec = spectrum(&op, grid.len())?;
            let alphas: Vec<T> = vec![T::FRAC_PI_2(), lit(2.0), lit(2.5), lit(3.0)];
            check_resolvent_sector(&spec, &alphas, 20)
        }),
    ));
    jobs.push((
        "sector_norm_l1",
        Box::new(move || {
            let op = assemble_dirichlet(grid, order)?;
            let spec = spectrum(&op, grid.len())?;
            let alphas: Vec<T> = vec![T::zero(), lit(0.5), lit(0.9), lit(1.2)];
            check_sector_norm_l1(&spec, &grid, order, &alphas, 12)
        }),
    ));
    jobs.push((
        "holomorphy_axioms",
        Box::new(move || {
            let op = assemble_dirichlet(grid, order)?;
            let spec = spectrum(&op, grid.len())?;
            check_holomorphy_axioms(&spec, &grid, seed)
        }),
    ));
    jobs.push((
        "extension_constants",
        Box::new(move || check_extension_constants(lit::<T>(2.0), T::one(), seed)),
    ));
    Ok(jobs)
}

/// Runs the whole suite sequentially.
pub fn run_suite<T: Real + 'static>(config: &SuiteConfig<T>) -> Result<Vec<CheckReport>> {
    suite_jobs(config)?
        .into_iter()
        .map(|(_, job)| job())
        .collect()
}
