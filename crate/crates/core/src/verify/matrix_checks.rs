//! Checks on the discrete Dirichlet operator: domination by the analytic
//! kernel, the nested-form criterion, kernel domain monotonicity, and the
//! submarkovian form inequalities.

use super::CheckReport;
use crate::discrete::{
    assemble_dirichlet, form_apply, kernel_matrix_real, spectrum, DiscreteOperator, Grid1D,
};
use crate::error::Result;
use crate::kernel::{heat_kernel_subordinated, poisson_kernel_closed, KernelQuery};
use crate::linalg::Mat;
use crate::quad::GaussLegendre;
use crate::scalar::{lit, to_f64, Real};
use crate::specfun::FractionalOrder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn full_space_kernel<T: Real>(order: FractionalOrder<T>, t: T, r: T) -> Result<T> {
    if order.s() == lit(0.5) {
        poisson_kernel_closed(t, r, order.dim())
    } else {
        heat_kernel_subordinated(&KernelQuery::real_time(t, r, order)?)
    }
}

/// Cell integrals `W[i][j] = ∫_{cell j} P_s(t, |x_i − y|) dy` by 4-point
/// panels. The kernel is radial, so only the distinct center distances are
/// evaluated.
fn analytic_cell_matrix<T: Real>(
    grid: &Grid1D<T>,
    order: FractionalOrder<T>,
    t: T,
) -> Result<Mat<T>> {
    let n = grid.len();
    let h = grid.spacing();
    let rule = GaussLegendre::new(4);

    // distance table: offsets k = j - i range over -(n-1)..=(n-1)
    let mut row_values = vec![T::zero(); 2 * n - 1];
    for (idx, row_value) in row_values.iter_mut().enumerate() {
        let k = idx as isize - (n as isize - 1);
        let center = lit::<T>(k as f64) * h;
        let mut f = |y: T| full_space_kernel(order, t, (center + y).abs()).expect("valid kernel");
        *row_value = rule.panel(&mut f, -h * lit::<T>(0.5), h * lit::<T>(0.5));
    }

    let mut w = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let idx = (j as isize - i as isize + n as isize - 1) as usize;
            w[(i, j)] = row_values[idx];
        }
    }
    Ok(w)
}

fn domination_violation<T: Real>(
    grid: &Grid1D<T>,
    order: FractionalOrder<T>,
    t_list: &[T],
    sample_count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, f64)> {
    let op = assemble_dirichlet(*grid, order)?;
    let spec = spectrum(&op, grid.len())?;
    let n = grid.len();
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst_case = f64::NEG_INFINITY;
    for &t in t_list {
        let e = {
            // semigroup matrix e^{-tA} = h * kernel matrix
            let mut k = kernel_matrix_real(&spec, grid, t)?;
            let h = grid.spacing();
            for i in 0..n {
                for v in k.row_mut(i) {
                    *v = *v * h;
                }
            }
            k
        };
        let w = analytic_cell_matrix(grid, order, t)?;
        // exact worst case over f in [0,1]^n: per-row positive-part sums
        for i in 0..n {
            let mut acc = T::zero();
            for j in 0..n {
                let d = e[(i, j)] - w[(i, j)];
                if d > T::zero() {
                    acc = acc + d;
                }
            }
            worst_case = worst_case.max(to_f64(acc));
        }
        for _ in 0..sample_count {
            let f: Vec<T> = (0..n).map(|_| lit(rng.random_range(-1.0..1.0))).collect();
            let f_abs: Vec<T> = f.iter().map(|&v| v.abs()).collect();
            let lhs = e.matvec(&f);
            let rhs = w.matvec(&f_abs);
            for i in 0..n {
                max_violation = max_violation.max(to_f64(lhs[i].abs() - rhs[i]));
            }
        }
    }
    Ok((max_violation, worst_case))
}

/// Domination of the killed semigroup by the full-space kernel with
/// `M = b = 1`: compares `|e^{−tA} f|` against the cell quadrature of
/// `P_s(t,|x−y|) |f|` for random `f`. The violation budget is `0.05` on the
/// reference grid and doubles on the coarsened grid (equivalently: the
/// budget halves under refinement); both grids must stay within budget.
pub fn check_domination<T: Real>(
    grid: Grid1D<T>,
    order: FractionalOrder<T>,
    t_list: &[T],
    sample_count: usize,
    seed: u64,
) -> Result<CheckReport> {
    let tolerance = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coarse = Grid1D::new(grid.a(), grid.b(), grid.len() / 2)?;
    let (viol_coarse, worst_coarse) =
        domination_violation(&coarse, order, t_list, sample_count, &mut rng)?;
    let (viol_fine, worst_fine) =
        domination_violation(&grid, order, t_list, sample_count, &mut rng)?;
    // fine grid must meet the budget, coarse grid the doubled budget
    let max_violation = viol_fine.max(viol_coarse / 2.0);
    let samples = 2 * sample_count * t_list.len();
    Ok(CheckReport::new(
        "domination",
        tolerance,
        max_violation,
        samples,
        seed,
    )
    .with_constant("M", 1.0)
    .with_constant("b", 1.0)
    .with_constant("worst_case_coarse", worst_coarse)
    .with_constant("worst_case_fine", worst_fine)
    .with_trend(vec![viol_coarse, viol_fine]))
}

/// Nested-form criterion: with exact killing integrals, zero extension makes
/// the inner form and the enclosing form literally equal on nonnegative
/// pairs; checks `|E_Ω(u,v) − E_Ω′(ũ,ṽ)| ≤ 1e-12` relative over random
/// nonnegative samples.
pub fn check_form_criterion<T: Real>(
    inner: Grid1D<T>,
    outer: Grid1D<T>,
    order: FractionalOrder<T>,
    sample_count: usize,
    seed: u64,
) -> Result<CheckReport> {
    let tolerance = 1e-12;
    let offset = inner.alignment_offset(&outer)?;
    let a_in = assemble_dirichlet(inner, order)?;
    let a_out = assemble_dirichlet(outer, order)?;
    let n = inner.len();
    let m = outer.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_violation = 0.0_f64;
    for _ in 0..sample_count {
        let u: Vec<T> = (0..n).map(|_| lit(rng.random_range(0.0..1.0))).collect();
        let v: Vec<T> = (0..n).map(|_| lit(rng.random_range(0.0..1.0))).collect();
        let mut ue = vec![T::zero(); m];
        let mut ve = vec![T::zero(); m];
        ue[offset..offset + n].copy_from_slice(&u);
        ve[offset..offset + n].copy_from_slice(&v);
        let a = form_apply(&a_in, &u, &v)?;
        let b = form_apply(&a_out, &ue, &ve)?;
        let scale = to_f64(a.abs()).max(1.0);
        max_violation = max_violation.max(to_f64((b - a).abs()) / scale);
    }
    Ok(CheckReport::new(
        "form_criterion",
        tolerance,
        max_violation,
        sample_count,
        seed,
    ))
}

/// Domain monotonicity: the killed kernel on `Ω` is entrywise below the
/// killed kernel on an enclosing `Ω′` (less killing, more heat), to 1e-10.
pub fn check_domain_monotonicity<T: Real>(
    inner: Grid1D<T>,
    outer: Grid1D<T>,
    order: FractionalOrder<T>,
    t_list: &[T],
) -> Result<CheckReport> {
    let tolerance = 1e-10;
    let offset = inner.alignment_offset(&outer)?;
    let spec_in = spectrum(&assemble_dirichlet(inner, order)?, inner.len())?;
    let spec_out = spectrum(&assemble_dirichlet(outer, order)?, outer.len())?;
    let n = inner.len();
    let mut max_violation = f64::NEG_INFINITY;
    for &t in t_list {
        let k_in = kernel_matrix_real(&spec_in, &inner, t)?;
        let k_out = kernel_matrix_real(&spec_out, &outer, t)?;
        for i in 0..n {
            for j in 0..n {
                let excess = k_in[(i, j)] - k_out[(i + offset, j + offset)];
                max_violation = max_violation.max(to_f64(excess));
            }
        }
    }
    Ok(CheckReport::new(
        "domain_monotonicity",
        tolerance,
        max_violation.max(0.0),
        t_list.len() * n * n,
        0,
    ))
}

/// Submarkovian form inequalities: `E(u⁺, u⁻) ≤ 0` for random sign-changing
/// `u`, `E(u∧1, u∧1) ≤ E(u, u)` for random nonnegative `u`, and operationally
/// the semigroup matrix stays entrywise nonnegative with sup-norm at most 1.
pub fn check_submarkovian_forms<T: Real>(
    op: &DiscreteOperator<T>,
    sample_count: usize,
    seed: u64,
) -> Result<CheckReport> {
    let tolerance = 1e-12;
    let n = op.grid().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_violation = 0.0_f64;

    for _ in 0..sample_count {
        let u: Vec<T> = (0..n).map(|_| lit(rng.random_range(-1.0..1.0))).collect();
        let plus: Vec<T> = u.iter().map(|&x| x.max(T::zero())).collect();
        let minus: Vec<T> = u.iter().map(|&x| (-x).max(T::zero())).collect();
        max_violation = max_violation.max(to_f64(form_apply(op, &plus, &minus)?));

        let w: Vec<T> = (0..n).map(|_| lit(rng.random_range(0.0..2.0))).collect();
        let clipped: Vec<T> = w.iter().map(|&x| x.min(T::one())).collect();
        let gap = form_apply(op, &clipped, &clipped)? - form_apply(op, &w, &w)?;
        max_violation = max_violation.max(to_f64(gap));
    }

    let spec = spectrum(op, n)?;
    let grid = op.grid();
    for t in [lit::<T>(0.1), T::one()] {
        let k = kernel_matrix_real(&spec, grid, t)?;
        let h = grid.spacing();
        for i in 0..n {
            let mut row_abs = T::zero();
            for j in 0..n {
                let entry = k[(i, j)] * h; // semigroup matrix entry
                max_violation = max_violation.max(to_f64(-entry));
                row_abs = row_abs + entry.abs();
            }
            max_violation = max_violation.max(to_f64(row_abs - T::one()));
        }
    }

    Ok(CheckReport::new(
        "submarkovian_forms",
        tolerance,
        max_violation,
        sample_count,
        seed,
    ))
}
