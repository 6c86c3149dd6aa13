//! Fractional heat kernel `P_s` at real and complex time, by three
//! independent routes:
//!
//! * subordination against the Gaussian kernel (real time, `N` in 1..=3),
//! * a direct Fourier integral (real or complex time, `N = 1`),
//! * the closed form at `s = 1/2` (the Poisson kernel, any `N`).
//!
//! By translation invariance only the distance `r = |x − y|` enters.

use crate::error::{Error, Result};
use crate::quad::{adaptive, composite, GaussLegendre};
use crate::scalar::{lit, Real};
use crate::specfun::{gamma, gaussian_kernel, stable_density, FractionalOrder};
use num_complex::Complex;

/// Evaluation budget for one kernel value.
pub const KERNEL_EVAL_BUDGET: usize = 1 << 20;

/// A point query of the kernel: complex time with positive real part and a
/// spatial distance.
#[derive(Debug, Clone, Copy)]
pub struct KernelQuery<T> {
    z: Complex<T>,
    r: T,
    order: FractionalOrder<T>,
}

impl<T: Real> KernelQuery<T> {
    pub fn new(z: Complex<T>, r: T, order: FractionalOrder<T>) -> Result<Self> {
        if !(z.re > T::zero()) {
            return Err(Error::Domain(format!(
                "kernel query requires Re z > 0, got {}",
                z.re
            )));
        }
        if r < T::zero() {
            return Err(Error::Domain(format!("distance must be >= 0, got {r}")));
        }
        Ok(Self { z, r, order })
    }

    /// Real-time query.
    pub fn real_time(t: T, r: T, order: FractionalOrder<T>) -> Result<Self> {
        Self::new(Complex::new(t, T::zero()), r, order)
    }

    pub fn z(&self) -> Complex<T> {
        self.z
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn order(&self) -> FractionalOrder<T> {
        self.order
    }

    fn real_t(&self) -> Result<T> {
        if self.z.im != T::zero() {
            return Err(Error::Domain(
                "operation requires a real-time query (Im z = 0)".into(),
            ));
        }
        Ok(self.z.re)
    }
}

/// Closed-form kernel at `s = 1/2`:
/// `Γ((N+1)/2) π^{−(N+1)/2} t (t² + r²)^{−(N+1)/2}`.
pub fn poisson_kernel_closed<T: Real>(t: T, r: T, dim: u32) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!(
            "poisson kernel requires t > 0, got {t}"
        )));
    }
    let half = lit::<T>(0.5);
    let np1_half = lit::<T>((dim + 1) as f64) * half;
    let c = gamma(np1_half)? * T::PI().powf(-np1_half);
    Ok(c * t * (t * t + r * r).powf(-np1_half))
}

/// Kernel at real time through the subordination integral
/// `∫_0^∞ f_{t,s}(τ) K_G(τ, r) dτ`.
///
/// The integral is taken in the self-similar variable `x = τ t^{−1/s}` over a
/// fixed log grid (the grid layout depends only on `r t^{−1/2s}`, so the
/// kernel's exact rescaling identity survives discretization to rounding),
/// with the heavy `τ^{−1−s}` tail beyond the grid added in closed form.
pub fn heat_kernel_subordinated<T: Real>(query: &KernelQuery<T>) -> Result<T> {
    let t = query.real_t()?;
    let order = query.order();
    let s = order.s();
    let dim = order.dim();
    let r = query.r();

    let t_scale = t.powf(T::one() / s);
    let xi = r * t.powf(-T::one() / order.two_s());

    let x_min = lit::<T>(1e-8);
    let x_max = lit::<T>(1e10).max(lit::<T>(20.0) * xi * xi);
    let per_decade = 8usize;
    let decades = (x_max / x_min).log10();
    let panels = (decades * lit(per_decade as f64))
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX);
    let rule = GaussLegendre::new(16);
    if panels.saturating_mul(3 * rule.len()) > KERNEL_EVAL_BUDGET {
        return Err(Error::QuadratureBudget {
            budget: KERNEL_EVAL_BUDGET,
            estimate: f64::INFINITY,
        });
    }

    let bps = crate::quad::geomspace(x_min, x_max, panels);
    let evals = std::cell::Cell::new(0usize);
    let mut integrand = |x: T| {
        evals.set(evals.get() + 1);
        let tau = x * t_scale;
        let f = stable_density(t, s, tau).expect("arguments validated");
        if f == T::zero() {
            return T::zero();
        }
        f * gaussian_kernel(tau, r, dim).expect("arguments validated") * t_scale
    };

    // Base level and a once-split level; the split grid is the result and the
    // difference the error estimate.
    let coarse: T = composite(&rule, &mut integrand, &bps);
    let mut split = Vec::with_capacity(bps.len() * 2);
    for pair in bps.windows(2) {
        split.push(pair[0]);
        split.push((pair[0] + pair[1]) * lit(0.5));
    }
    split.push(*bps.last().unwrap());
    let mut fine: T = composite(&rule, &mut integrand, &split);

    // Analytic tail from f_{t,s}(τ) ~ t s τ^{−1−s} / Γ(1−s).
    let tau_max = x_max * t_scale;
    let nhalf = lit::<T>(dim as f64 / 2.0);
    let tail = t * s / gamma(T::one() - s)?
        * (lit::<T>(4.0) * T::PI()).powf(-nhalf)
        * tau_max.powf(-(s + nhalf))
        / (s + nhalf);
    fine = fine + tail;

    let estimate = (fine - (coarse + tail)).abs();
    if estimate > lit::<T>(1e-7) * fine.abs() {
        // Rarely needed: fall back to adaptive refinement under the budget.
        let refined = adaptive(
            &rule,
            &mut integrand,
            &split,
            lit(1e-9),
            T::zero(),
            KERNEL_EVAL_BUDGET.saturating_sub(evals.get().min(KERNEL_EVAL_BUDGET)),
        )?;
        return Ok(refined + tail);
    }
    Ok(fine)
}

/// Kernel at complex time by the Fourier integral
/// `(1/π) ∫_0^∞ e^{−z ρ^{2s}} cos(rρ) dρ` (one dimension only).
pub fn heat_kernel_fourier<T: Real>(query: &KernelQuery<T>) -> Result<Complex<T>> {
    let order = query.order();
    if order.dim() != 1 {
        return Err(Error::Domain(format!(
            "fourier kernel route is one-dimensional, got N = {}",
            order.dim()
        )));
    }
    let z = query.z();
    let r = query.r();
    let two_s = order.two_s();
    let one = T::one();

    let rho_max = (lit::<T>(36.0) / z.re).powf(one / two_s);
    let rule = GaussLegendre::new(16);

    // Breakpoints: full-period panels of the cos oscillation, phase-equal
    // panels of Im z · ρ^{2s}, and geometric nodes toward the ρ^{2s} kink at 0.
    let mut bps: Vec<T> = vec![T::zero(), rho_max];
    if r > T::zero() {
        let step = lit::<T>(2.0) * T::PI() / r;
        let projected = (rho_max / step).to_usize().unwrap_or(usize::MAX);
        if projected.saturating_mul(3 * rule.len()) > KERNEL_EVAL_BUDGET {
            return Err(Error::QuadratureBudget {
                budget: KERNEL_EVAL_BUDGET,
                estimate: f64::INFINITY,
            });
        }
        let mut x = step;
        while x < rho_max {
            bps.push(x);
            x = x + step;
        }
    }
    let im_abs = z.im.abs();
    if im_abs > T::zero() {
        let half_pi = T::PI() * lit::<T>(0.5);
        let mut j = one;
        loop {
            let rho = (j * half_pi / im_abs).powf(one / two_s);
            if rho >= rho_max {
                break;
            }
            bps.push(rho);
            j = j + one;
        }
    }
    let mut v = rho_max;
    for _ in 0..50 {
        v = v * lit(0.5);
        if v <= T::min_positive_value() {
            break;
        }
        bps.push(v);
    }
    bps.sort_by(|p, q| p.partial_cmp(q).unwrap());
    bps.dedup();

    let mut f = |rho: T| {
        let w = rho.powf(two_s);
        let e = (-(z * w)).exp();
        e * (r * rho).cos()
    };
    let total: Complex<T> = adaptive(
        &rule,
        &mut f,
        &bps,
        lit(1e-9),
        T::zero(),
        KERNEL_EVAL_BUDGET,
    )?;
    Ok(total.scale_re(T::PI().recip()))
}

trait ScaleRe<T> {
    fn scale_re(self, factor: T) -> Self;
}

impl<T: Real> ScaleRe<T> for Complex<T> {
    fn scale_re(self, factor: T) -> Self {
        Complex::new(self.re * factor, self.im * factor)
    }
}

/// Exact self-similarity `P_s(σt, σ^{1/2s} r) = σ^{−N/2s} P_s(t, r)`:
/// returns the rescaled query and the factor `σ^{−N/2s}`.
pub fn self_similar_rescale<T: Real>(
    query: &KernelQuery<T>,
    sigma: T,
) -> Result<(KernelQuery<T>, T)> {
    if !(sigma > T::zero()) {
        return Err(Error::Domain(format!("scale must be positive, got {sigma}")));
    }
    let t = query.real_t()?;
    let order = query.order();
    let inv_two_s = T::one() / order.two_s();
    let rescaled = KernelQuery::real_time(
        sigma * t,
        sigma.powf(inv_two_s) * query.r(),
        order,
    )?;
    let factor = sigma.powf(-lit::<T>(order.dim() as f64) * inv_two_s);
    Ok((rescaled, factor))
}
