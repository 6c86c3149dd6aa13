//! Sector checks on the discrete semigroup: the exact resolvent bound for
//! self-adjoint generators, L¹ operator norms on rays, and the holomorphy
//! axioms (semigroup law, ray-limit strong continuity).

use super::{CheckReport, SectorPoint};
use crate::discrete::{
    kernel_matrix, resolvent_norm, semigroup_apply, semigroup_apply_real, Grid1D,
    SpectralDecomposition,
};
use crate::error::{Error, Result};
use crate::quad::geomspace;
use crate::scalar::{lit, to_f64, Real};
use crate::specfun::FractionalOrder;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Resolvent sector bound: for the self-adjoint generator `−A` with spectrum
/// in `(−∞, −λ₁]`, the scaled norm `|λ| ‖(λ + A)^{−1}‖` along the ray with
/// angle `α` is bounded by `max(1, 1/|sin α|)`, exactly; checked to 1e-12
/// over log-spaced moduli bracketing the spectrum.
pub fn check_resolvent_sector<T: Real>(
    spec: &SpectralDecomposition<T>,
    alpha_list: &[T],
    radii_per_ray: usize,
) -> Result<CheckReport> {
    let tolerance = 1e-12;
    if spec.eigenvalues().is_empty() {
        return Err(Error::DimensionMismatch("empty spectrum".into()));
    }
    let lambda_min = spec.eigenvalues()[0];
    let lambda_max = *spec.eigenvalues().last().unwrap();
    let mut max_violation = f64::NEG_INFINITY;
    let mut report = CheckReport::new("resolvent_sector", tolerance, 0.0, 0, 0);
    let mut samples = 0usize;
    for (idx, &alpha) in alpha_list.iter().enumerate() {
        if !(alpha.abs() < T::PI()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("resolvent rays need |alpha| < pi, got {alpha}"),
            });
        }
        let bound = if alpha.abs() <= T::FRAC_PI_2() {
            T::one()
        } else {
            alpha.sin().abs().recip()
        };
        let mut c_alpha = T::zero();
        let radii = geomspace(
            lambda_min * lit(1e-3),
            lambda_max * lit(1e3),
            radii_per_ray - 1,
        );
        // include the modulus where the trigonometric bound is attained
        let mut radii = radii;
        if alpha.abs() > T::FRAC_PI_2() {
            radii.push(lambda_min * alpha.cos().abs());
        }
        for &r in &radii {
            let lambda = SectorPoint::resolvent_point(r, alpha)?.to_complex();
            let norm = resolvent_norm(spec, lambda)?;
            c_alpha = c_alpha.max(r * norm);
            samples += 1;
        }
        max_violation = max_violation.max(to_f64(c_alpha - bound));
        report = report
            .with_constant(&format!("C_alpha_{idx}"), to_f64(c_alpha))
            .with_constant(&format!("alpha_{idx}"), to_f64(alpha));
    }
    report.max_violation = max_violation;
    report.pass = max_violation <= tolerance;
    report.samples = samples;
    Ok(report)
}

/// Sector L¹ norm: `‖T(re^{iα})‖_{L¹→L¹}` is the max column sum of the
/// semigroup matrix. Requires contraction on the real axis, monotone growth
/// in `|α|`, and an L² norm below one everywhere; fits the envelope constant
/// `C₀ = sup_α C(α) cos(α)^{N/2s}`.
pub fn check_sector_norm_l1<T: Real>(
    spec: &SpectralDecomposition<T>,
    grid: &Grid1D<T>,
    order: FractionalOrder<T>,
    alpha_list: &[T],
    radii_per_ray: usize,
) -> Result<CheckReport> {
    let tolerance = 1e-10;
    if alpha_list.is_empty() || alpha_list[0] != T::zero() {
        return Err(Error::InvalidParameter {
            name: "alpha_list",
            reason: "the ray list must start at alpha = 0".into(),
        });
    }
    let n = grid.len();
    let h = grid.spacing();
    let lambda_min = spec.eigenvalues()[0];
    let radii = geomspace(
        lambda_min.recip() * lit(1e-2),
        lambda_min.recip() * lit(10.0),
        radii_per_ray - 1,
    );
    let mut c_values: Vec<T> = Vec::with_capacity(alpha_list.len());
    let mut max_violation = f64::NEG_INFINITY;
    let mut samples = 0usize;
    for &alpha in alpha_list {
        if !(alpha.abs() < T::FRAC_PI_2()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("semigroup rays need |alpha| < pi/2, got {alpha}"),
            });
        }
        let mut c_alpha = T::zero();
        for &r in &radii {
            let z = SectorPoint::semigroup_point(r, alpha)?.to_complex();
            let k = kernel_matrix(spec, grid, z)?;
            // L1 -> L1 norm: max column sum of |semigroup matrix|
            let mut col_max = T::zero();
            for j in 0..n {
                let mut acc = T::zero();
                for i in 0..n {
                    acc = acc + k[(i, j)].norm() * h;
                }
                col_max = col_max.max(acc);
            }
            c_alpha = c_alpha.max(col_max);
            // L2 norm by the spectral calculus: exact for a normal matrix
            let l2 = (-(z.re * lambda_min)).exp();
            max_violation = max_violation.max(to_f64(l2 - T::one()));
            samples += 1;
        }
        c_values.push(c_alpha);
    }

    // real-axis contraction
    max_violation = max_violation.max(to_f64(c_values[0] - T::one()));
    // monotone in |alpha|
    for pair in c_values.windows(2) {
        max_violation = max_violation.max(to_f64(pair[0] - pair[1]));
    }

    let mut report = CheckReport::new("sector_norm_l1", tolerance, max_violation, samples, 0);
    let n_over_2s = lit::<T>(order.dim() as f64) / order.two_s();
    let mut c0 = T::zero();
    for (&alpha, &c) in alpha_list.iter().zip(&c_values) {
        c0 = c0.max(c * alpha.cos().powf(n_over_2s));
    }
    report = report.with_constant("C0", to_f64(c0));
    for (idx, (&alpha, &c)) in alpha_list.iter().zip(&c_values).enumerate() {
        report = report
            .with_constant(&format!("alpha_{idx}"), to_f64(alpha))
            .with_constant(&format!("C_alpha_{idx}"), to_f64(c));
    }
    report.pass = report.max_violation <= report.tolerance;
    Ok(report)
}

/// Holomorphy axioms: the semigroup law at complex arguments and strong
/// continuity along rays. Violations are reported as ratios to their
/// sub-tolerances (law: 1e-10, ray limit: 1e-6, ray monotonicity: 1e-9), so
/// the report tolerance is 1.
pub fn check_holomorphy_axioms<T: Real>(
    spec: &SpectralDecomposition<T>,
    grid: &Grid1D<T>,
    seed: u64,
) -> Result<CheckReport> {
    const LAW_TOL: f64 = 1e-10;
    const RAY_TOL: f64 = 1e-6;
    const MONO_TOL: f64 = 1e-9;
    let tolerance = 1.0;
    let n = grid.len();
    let h = grid.spacing();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = 0usize;

    // (i) semigroup law on random sector pairs
    let mut law_resid = 0.0_f64;
    for _ in 0..12 {
        let f: Vec<T> = (0..n).map(|_| lit(rng.random_range(-1.0..1.0))).collect();
        let draw = |rng: &mut ChaCha8Rng| -> crate::error::Result<Complex<T>> {
            let r = lit::<T>(10f64.powf(rng.random_range(-3.0..0.0)));
            let a = lit::<T>(rng.random_range(-1.2..1.2));
            Ok(SectorPoint::semigroup_point(r, a)?.to_complex())
        };
        let z1 = draw(&mut rng)?;
        let z2 = draw(&mut rng)?;
        let direct = semigroup_apply(spec, z1 + z2, &f)?;
        let inner = semigroup_apply(spec, z2, &f)?;
        let re: Vec<T> = inner.iter().map(|c| c.re).collect();
        let im: Vec<T> = inner.iter().map(|c| c.im).collect();
        let outer_re = semigroup_apply(spec, z1, &re)?;
        let outer_im = semigroup_apply(spec, z1, &im)?;
        let mut resid = T::zero();
        let mut fnorm = T::zero();
        for i in 0..n {
            let composed = Complex::new(
                outer_re[i].re - outer_im[i].im,
                outer_re[i].im + outer_im[i].re,
            );
            resid = resid + (direct[i] - composed).norm_sqr();
            fnorm = fnorm + f[i] * f[i];
        }
        law_resid = law_resid.max(to_f64((resid / fnorm).sqrt()));
        samples += 1;
    }

    // (iii) ray limits for smooth fields: a normalized Gaussian profile and a
    // low-mode eigenvector combination
    let gauss: Vec<T> = grid
        .nodes()
        .iter()
        .map(|&x| (-(x * x) * lit::<T>(4.0)).exp())
        .collect();
    let mut modes = vec![T::zero(); n];
    for k in 0..3.min(spec.retained()) {
        let v = spec.eigenvector(k);
        let w = lit::<T>(rng.random_range(0.25..1.0));
        for i in 0..n {
            modes[i] = modes[i] + w * v[i];
        }
    }
    let normalize_l1 = |f: &mut [T]| {
        let mut norm = T::zero();
        for v in f.iter() {
            norm = norm + v.abs() * h;
        }
        for v in f.iter_mut() {
            *v = *v / norm;
        }
    };
    let mut fields = [gauss, modes];
    let mut ray_final = 0.0_f64;
    let mut mono_excess = 0.0_f64;
    let angles: Vec<T> = vec![
        T::zero(),
        T::FRAC_PI_4(),
        -T::FRAC_PI_4(),
        lit(1.2),
        lit(-1.2),
    ];
    // Monotone decrease is asserted on the approach segment r <= 1e-2: at
    // r of order 1/λ₁ the complex-ray mode phases interfere and the L¹
    // distance genuinely wiggles, while near 0 it is linear in r.
    let mono_edge = lit::<T>(1e-2);
    for f in fields.iter_mut() {
        normalize_l1(f);
        for &alpha in &angles {
            let radii = geomspace(lit::<T>(1e-7), T::one(), 29);
            let mut prev = T::infinity();
            let mut smallest = T::infinity();
            for &r in radii.iter().rev() {
                let err = if alpha == T::zero() {
                    let tf = semigroup_apply_real(spec, r, f)?;
                    let mut acc = T::zero();
                    for i in 0..n {
                        acc = acc + (tf[i] - f[i]).abs() * h;
                    }
                    acc
                } else {
                    let z = Complex::from_polar(r, alpha);
                    let tf = semigroup_apply(spec, z, f)?;
                    let mut acc = T::zero();
                    for i in 0..n {
                        acc = acc + (tf[i] - Complex::new(f[i], T::zero())).norm() * h;
                    }
                    acc
                };
                if r <= mono_edge {
                    mono_excess = mono_excess.max(to_f64(err - prev));
                }
                prev = err;
                smallest = err;
                samples += 1;
            }
            ray_final = ray_final.max(to_f64(smallest));
        }
    }

    let max_violation = (law_resid / LAW_TOL)
        .max(ray_final / RAY_TOL)
        .max(mono_excess / MONO_TOL);
    Ok(CheckReport::new(
        "holomorphy_axioms",
        tolerance,
        max_violation,
        samples,
        seed,
    )
    .with_constant("law_residual", law_resid)
    .with_constant("law_tolerance", LAW_TOL)
    .with_constant("ray_limit_error", ray_final)
    .with_constant("ray_tolerance", RAY_TOL)
    .with_constant("ray_monotonicity_excess", mono_excess)
    .with_constant("monotonicity_tolerance", MONO_TOL))
}
