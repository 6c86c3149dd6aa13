//! Checks on the full-space kernel: two-sided shape bounds, the
//! ultracontractive decay exponent, and the sector extension of the kernel
//! bound at complex time.

use super::CheckReport;
use crate::discrete::{assemble_dirichlet, kernel_matrix_real, spectrum, Grid1D};
use crate::error::{Error, Result};
use crate::kernel::{heat_kernel_fourier, heat_kernel_subordinated, KernelQuery};
use crate::scalar::{lit, to_f64, Real};
use crate::specfun::FractionalOrder;
use num_complex::Complex;

/// Kernel shape ratio `ρ(t,r) = P_s(t,r) t^{N/2s} (1 + r t^{−1/2s})^{N+2s}`.
fn shape_ratio<T: Real>(order: FractionalOrder<T>, t: T, r: T) -> Result<T> {
    let q = KernelQuery::real_time(t, r, order)?;
    let p = heat_kernel_subordinated(&q)?;
    let n = lit::<T>(order.dim() as f64);
    let two_s = order.two_s();
    let profile = (T::one() + r * t.powf(-T::one() / two_s)).powf(n + two_s);
    Ok(p * t.powf(n / two_s) * profile)
}

/// Two-sided bound: fits `C₁ = min ρ`, `C₂ = max ρ` over the grid, requires
/// a positive lower constant with spread `C₂/C₁ ≤ 100`, and verifies that the
/// ratio profile is invariant under the exact kernel rescaling to 1e-9.
pub fn check_two_sided_bounds<T: Real>(
    order: FractionalOrder<T>,
    t_grid: &[T],
    r_grid: &[T],
) -> Result<CheckReport> {
    const SPREAD_BUDGET: f64 = 100.0;
    let tolerance = 1e-9;

    let mut c1 = T::infinity();
    let mut c2 = T::neg_infinity();
    let mut samples = 0usize;
    for &t in t_grid {
        for &r in r_grid {
            let rho = shape_ratio(order, t, r)?;
            c1 = c1.min(rho);
            c2 = c2.max(rho);
            samples += 1;
        }
    }

    // self-similarity of the ratio: rho(sigma t, sigma^{1/2s} r) = rho(t, r)
    let mut selfsim_violation = T::zero();
    let sigmas = [lit::<T>(0.5), lit::<T>(4.0)];
    let probe_t = [t_grid[0], t_grid[t_grid.len() / 2]];
    let probe_r = [r_grid[0], r_grid[r_grid.len() / 2], r_grid[r_grid.len() - 1]];
    for &t in &probe_t {
        for &r in &probe_r {
            let rho = shape_ratio(order, t, r)?;
            for &sigma in &sigmas {
                let ts = sigma * t;
                let rs = sigma.powf(T::one() / order.two_s()) * r;
                let rho_s = shape_ratio(order, ts, rs)?;
                selfsim_violation = selfsim_violation.max((rho_s - rho).abs() / rho);
                samples += 1;
            }
        }
    }

    let mut violation = to_f64(selfsim_violation);
    let spread = to_f64(c2 / c1);
    if !(to_f64(c1) > 0.0) || spread > SPREAD_BUDGET {
        violation = CheckReport::side_condition_marker(tolerance);
    }
    Ok(CheckReport::new(
        "two_sided_bounds",
        tolerance,
        violation,
        samples,
        0,
    )
    .with_constant("C1", to_f64(c1))
    .with_constant("C2", to_f64(c2))
    .with_constant("spread", spread)
    .with_constant("spread_budget", SPREAD_BUDGET))
}

/// Ultracontractivity: the on-diagonal kernel decays like `t^{−N/2s}`. Fits
/// the log-log slope of `sup_r P_s(t,r) = P_s(t,0)` against `t` and requires
/// `slope = −N/2s` to 1e-3; through `‖P(t,·)‖_{L²} = √P(2t,0)` (semigroup
/// property at the diagonal) the interpolation exponent `−N/4s` of the
/// L²→L∞ and L¹→L² estimates is fitted the same way. When a grid is
/// supplied, the discrete kernel's sup and 2→∞ constants are fitted to the
/// matching power laws and reported.
pub fn check_ultracontractivity<T: Real>(
    order: FractionalOrder<T>,
    t_grid: &[T],
    discrete_grid: Option<Grid1D<T>>,
) -> Result<CheckReport> {
    if t_grid.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "t_grid",
            reason: "slope fit needs at least two times".into(),
        });
    }
    let tolerance = 1e-3;
    let mut xs = Vec::with_capacity(t_grid.len());
    let mut ys = Vec::with_capacity(t_grid.len());
    let mut ys_l2 = Vec::with_capacity(t_grid.len());
    let half = lit::<T>(0.5);
    for &t in t_grid {
        let q = KernelQuery::real_time(t, T::zero(), order)?;
        let p = heat_kernel_subordinated(&q)?;
        let q2 = KernelQuery::real_time(t + t, T::zero(), order)?;
        let p2 = heat_kernel_subordinated(&q2)?;
        xs.push(to_f64(t.ln()));
        ys.push(to_f64(p.ln()));
        ys_l2.push(to_f64((p2.ln()) * half));
    }
    let slope = least_squares_slope(&xs, &ys);
    let expected = -(order.dim() as f64) / to_f64(order.two_s());
    let slope_l2 = least_squares_slope(&xs, &ys_l2);
    let expected_l2 = 0.5 * expected;
    let violation = (slope - expected).abs().max((slope_l2 - expected_l2).abs());

    let mut report = CheckReport::new(
        "ultracontractivity",
        tolerance,
        violation,
        t_grid.len(),
        0,
    )
    .with_constant("slope", slope)
    .with_constant("expected_slope", expected)
    .with_constant("slope_l2_linf", slope_l2)
    .with_constant("expected_slope_l2_linf", expected_l2);

    if let Some(grid) = discrete_grid {
        let op = assemble_dirichlet(grid, order)?;
        let spec = spectrum(&op, grid.len())?;
        let h = grid.spacing();
        let mut c_sup = T::zero();
        let mut c_two_inf = T::zero();
        for &t in t_grid {
            if !(t > T::zero()) {
                continue;
            }
            let k = kernel_matrix_real(&spec, &grid, t)?;
            let sup = k.max_abs();
            let n = grid.len();
            let mut row_l2 = T::zero();
            for i in 0..n {
                let mut acc = T::zero();
                for &v in k.row(i) {
                    acc = acc + v * v;
                }
                row_l2 = row_l2.max((acc * h).sqrt());
            }
            let n_over_2s = lit::<T>(order.dim() as f64) / order.two_s();
            c_sup = c_sup.max(sup * t.powf(n_over_2s));
            c_two_inf = c_two_inf.max(row_l2 * t.powf(n_over_2s * half));
        }
        report = report
            .with_constant("discrete_sup_constant", to_f64(c_sup))
            .with_constant("discrete_l2_linf_constant", to_f64(c_two_inf));
    }
    Ok(report)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Complex-time kernel bound: fits
/// `M = sup |P_s(z,r)| (Re z)^{N/2s} (1 + r |z|^{−1/2s})^{(N+2s)(1−ε)}`
/// over a sector grid with `b = 1` and requires the fit to be stable (within
/// 5%) under doubling the grid in modulus, angle and distance.
pub fn check_complex_kernel_bound<T: Real>(
    order: FractionalOrder<T>,
    epsilon: T,
    theta: T,
    moduli: &[T],
    angle_count: usize,
    r_grid: &[T],
) -> Result<CheckReport> {
    if order.dim() != 1 {
        return Err(Error::Domain(
            "complex kernel bound uses the one-dimensional fourier route".into(),
        ));
    }
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("epsilon must lie in (0, 1], got {epsilon}"),
        });
    }
    if !(theta > T::zero() && theta < epsilon * T::FRAC_PI_2()) {
        return Err(Error::InvalidParameter {
            name: "theta",
            reason: format!("sector angle must satisfy 0 < theta < epsilon*pi/2, got {theta}"),
        });
    }
    if angle_count < 2 || moduli.len() < 2 || r_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "sector_grid",
            reason: "need at least two moduli, two angles and one distance".into(),
        });
    }
    let tolerance = 0.05;

    let weighted_sup = |moduli: &[T], angles: &[T], rs: &[T]| -> Result<(T, usize)> {
        let n = lit::<T>(order.dim() as f64);
        let two_s = order.two_s();
        let exponent = (n + two_s) * (T::one() - epsilon);
        let mut sup = T::zero();
        let mut count = 0usize;
        for &rho in moduli {
            for &alpha in angles {
                let z = Complex::from_polar(rho, alpha);
                for &r in rs {
                    let q = KernelQuery::new(z, r, order)?;
                    let p = heat_kernel_fourier(&q)?.norm();
                    let profile = (T::one() + r * rho.powf(-T::one() / two_s)).powf(exponent);
                    sup = sup.max(p * z.re.powf(n / two_s) * profile);
                    count += 1;
                }
            }
        }
        Ok((sup, count))
    };

    let angles: Vec<T> = linspace(-theta, theta, angle_count);
    let (m_coarse, n1) = weighted_sup(moduli, &angles, r_grid)?;

    let fine_moduli = log_refine(moduli);
    let fine_angles = linspace(-theta, theta, 2 * angle_count - 1);
    let fine_r = linear_refine(r_grid);
    let (m_fine, n2) = weighted_sup(&fine_moduli, &fine_angles, &fine_r)?;

    let violation = to_f64((m_fine - m_coarse).abs() / m_fine);
    Ok(CheckReport::new(
        "complex_kernel_bound",
        tolerance,
        violation,
        n1 + n2,
        0,
    )
    .with_constant("M", to_f64(m_fine))
    .with_constant("b", 1.0)
    .with_constant("epsilon", to_f64(epsilon))
    .with_constant("theta", to_f64(theta)))
}

fn linspace<T: Real>(a: T, b: T, count: usize) -> Vec<T> {
    let step = (b - a) / lit((count - 1) as f64);
    (0..count).map(|k| a + step * lit(k as f64)).collect()
}

fn log_refine<T: Real>(grid: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(grid.len() * 2);
    for pair in grid.windows(2) {
        out.push(pair[0]);
        out.push((pair[0] * pair[1]).sqrt());
    }
    out.push(*grid.last().unwrap());
    out
}

fn linear_refine<T: Real>(grid: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(grid.len() * 2);
    for pair in grid.windows(2) {
        out.push(pair[0]);
        out.push((pair[0] + pair[1]) * lit(0.5));
    }
    out.push(*grid.last().unwrap());
    out
}
