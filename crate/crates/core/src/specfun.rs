//! Scalar special functions and closed-form densities.

use crate::error::{Error, Result};
use crate::quad::{composite, GaussLegendre};
use crate::scalar::{lit, Real};

/// Fractional exponent `s` together with the spatial dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder<T> {
    s: T,
    dim: u32,
}

impl<T: Real> FractionalOrder<T> {
    /// Requires `0 < s < 1` and dimension in `{1, 2, 3}`.
    pub fn new(s: T, dim: u32) -> Result<Self> {
        if !(s > T::zero() && s < T::one()) {
            return Err(Error::InvalidParameter {
                name: "s",
                reason: format!("exponent must lie in (0, 1), got {s}"),
            });
        }
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidParameter {
                name: "N",
                reason: format!("dimension must be 1, 2 or 3, got {dim}"),
            });
        }
        Ok(Self { s, dim })
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// The exponent `2s` that appears in every kernel power `N/2s`.
    pub fn two_s(&self) -> T {
        self.s + self.s
    }
}

/// The positive constant in front of the singular integral.
#[derive(Debug, Clone, Copy)]
pub struct NormalizationConstant<T> {
    value: T,
    order: FractionalOrder<T>,
}

impl<T: Real> NormalizationConstant<T> {
    pub fn value(&self) -> T {
        self.value
    }

    pub fn order(&self) -> FractionalOrder<T> {
        self.order
    }
}

// Lanczos approximation, g = 7 with 9 coefficients (GSL set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive arguments.
///
/// Arguments below 1/2 are lifted through the recurrence `Γ(x) = Γ(x+1)/x`
/// instead of the reflection formula, so only `x > 0` is supported.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::Domain(format!(
            "gamma requires a positive argument, got {x}"
        )));
    }
    Ok(gamma_positive(x))
}

fn gamma_positive<T: Real>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        return gamma_positive(x + T::one()) / x;
    }
    let z = x - T::one();
    let mut acc = lit::<T>(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (z + lit(i as f64));
    }
    let t = z + lit::<T>(LANCZOS_G) + half;
    let sqrt_two_pi = lit::<T>(2.506_628_274_631_000_5);
    sqrt_two_pi * t.powf(z + half) * (-t).exp() * acc
}

/// Normalization constant `C_{N,s} = s 2^{2s} Γ((2s+N)/2) / (π^{N/2} Γ(1−s))`.
pub fn frac_constant<T: Real>(order: FractionalOrder<T>) -> NormalizationConstant<T> {
    let s = order.s();
    let n = lit::<T>(order.dim() as f64);
    let two = lit::<T>(2.0);
    let num = s * two.powf(order.two_s()) * gamma_positive((order.two_s() + n) / two);
    let den = T::PI().powf(n / two) * gamma_positive(T::one() - s);
    NormalizationConstant {
        value: num / den,
        order,
    }
}

/// Gaussian heat kernel `(4πt)^{−N/2} e^{−r²/(4t)}` as a function of distance.
pub fn gaussian_kernel<T: Real>(t: T, r: T, dim: u32) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!(
            "gaussian kernel requires t > 0, got {t}"
        )));
    }
    if r < T::zero() {
        return Err(Error::Domain(format!("distance must be >= 0, got {r}")));
    }
    let four = lit::<T>(4.0);
    let nhalf = lit::<T>(dim as f64 / 2.0);
    Ok((four * T::PI() * t).powf(-nhalf) * (-(r * r) / (four * t)).exp())
}

/// One-sided stable density `f_{t,s}`: the inverse Laplace transform of
/// `λ ↦ e^{−tλ^s}`.
///
/// For `s = 1/2` the closed form `t τ^{−3/2} e^{−t²/(4τ)} / (2√π)` is used.
/// Otherwise the density is computed from the Bromwich contour collapsed onto
/// the negative real axis,
///
/// `f_{t,s}(τ) = (1/π) ∫₀^∞ exp(−τu − t u^s cos πs) sin(t u^s sin πs) du`,
///
/// integrated over phase-equal panels with the truncation point chosen from
/// the integrand envelope. Deep in the left tail the integral is a vanishing
/// difference of huge oscillations; there the density is below `e^{−35}` of
/// its peak scale and is returned as exact zero instead of round-off noise.
pub fn stable_density<T: Real>(t: T, s: T, tau: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!(
            "stable density requires t > 0, got {t}"
        )));
    }
    if !(tau > T::zero()) {
        return Err(Error::Domain(format!(
            "stable density requires tau > 0, got {tau}"
        )));
    }
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::Domain(format!(
            "stable density requires 0 < s < 1, got {s}"
        )));
    }
    if s == lit(0.5) {
        let two = lit::<T>(2.0);
        return Ok(t * tau.powf(lit(-1.5)) * (-(t * t) / (lit::<T>(4.0) * tau)).exp()
            / (two * T::PI().sqrt()));
    }
    Ok(stable_density_bromwich(t, s, tau))
}

fn stable_density_bromwich<T: Real>(t: T, s: T, tau: T) -> T {
    let pi = T::PI();
    let cos_pis = (pi * s).cos();
    let sin_pis = (pi * s).sin();
    let one = T::one();

    // Left-tail guard: f_{1,s}(x) ~ exp(−B x^{−s/(1−s)}) with
    // B = (1−s) s^{s/(1−s)}. Below e^{−40} the density is negligible.
    let x_scaled = tau * t.powf(-one / s);
    let b = (one - s) * s.powf(s / (one - s));
    if b * x_scaled.powf(-s / (one - s)) > lit(40.0) {
        return T::zero();
    }

    let target_exp = lit::<T>(46.0);
    let a = t * cos_pis.abs();
    let envelope_max = if cos_pis < T::zero() {
        // max over u of −τu + a u^s
        let u_star = (a * s / tau).powf(one / (one - s));
        (a * u_star.powf(s) - tau * u_star).max(T::zero())
    } else {
        T::zero()
    };
    // Oscillatory cancellation floor: beyond e^{12} of envelope headroom the
    // result would be dominated by rounding of the huge integrand.
    if envelope_max > lit(12.0) {
        return T::zero();
    }

    // Truncation point: τU − a U^s (for cos πs < 0) or τU (otherwise)
    // reaches target_exp + envelope_max.
    let goal = target_exp + envelope_max;
    let mut upper = goal / tau;
    if cos_pis < T::zero() {
        for _ in 0..80 {
            upper = (goal + a * upper.powf(s)) / tau;
        }
    }

    // Breakpoints: phase-equal nodes of t sin(πs) u^s plus geometric nodes
    // toward 0 to resolve the u^s endpoint behaviour and the e^{−τu} scale.
    let phase_max = t * sin_pis * upper.powf(s);
    let mut bps: Vec<T> = vec![T::zero(), upper];
    let mut j = one;
    while j * pi < phase_max {
        let u = (j * pi / (t * sin_pis)).powf(one / s);
        if u < upper {
            bps.push(u);
        }
        j = j + one;
    }
    let mut v = upper;
    for _ in 0..34 {
        v = v * lit(0.5);
        if v <= T::min_positive_value() {
            break;
        }
        bps.push(v);
    }
    bps.sort_by(|p, q| p.partial_cmp(q).unwrap());
    bps.dedup();

    let rule = GaussLegendre::new(16);
    let mut f = |u: T| {
        let tw = t * u.powf(s);
        (-(tau * u) - tw * cos_pis).exp() * (tw * sin_pis).sin()
    };
    let total: T = composite(&rule, &mut f, &bps);
    (total / pi).max(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{log_panels, GaussLegendre};
    use approx::assert_relative_eq;

    fn order(s: f64, dim: u32) -> FractionalOrder<f64> {
        FractionalOrder::new(s, dim).unwrap()
    }

    #[test]
    fn gamma_reference_points() {
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(5.0).unwrap(), 24.0, max_relative = 1e-13);
        assert_relative_eq!(
            gamma(0.5).unwrap(),
            std::f64::consts::PI.sqrt(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn gamma_rejects_nonpositive_arguments() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.3).is_err());
    }

    #[test]
    fn gamma_accuracy_on_contract_range() {
        // relative error <= 1e-12 on [0.1, 30]: spot-check against recurrence
        // from integer anchors
        let mut x = 0.1;
        while x <= 30.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            x += 0.37;
        }
    }

    #[test]
    fn frac_constant_half_order_reference_values() {
        assert_relative_eq!(
            frac_constant(order(0.5, 1)).value(),
            std::f64::consts::FRAC_1_PI,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            frac_constant(order(0.5, 2)).value(),
            0.5 * std::f64::consts::FRAC_1_PI,
            max_relative = 1e-13
        );
    }

    #[test]
    fn frac_constant_vanishes_at_endpoints() {
        for dim in 1..=3 {
            let mid = frac_constant(order(0.5, dim)).value();
            for s in [0.001, 0.999] {
                assert!(frac_constant(order(s, dim)).value() < 0.01 * mid);
            }
        }
    }

    #[test]
    fn frac_constant_positive_on_grid() {
        for dim in 1..=3 {
            for k in 1..=99 {
                let s = k as f64 / 100.0;
                assert!(frac_constant(order(s, dim)).value() > 0.0);
            }
        }
    }

    #[test]
    fn gaussian_kernel_reference_values() {
        assert_relative_eq!(
            gaussian_kernel(1.0, 0.0, 1).unwrap(),
            0.282_094_791_773_878_14,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gaussian_kernel(1.0, 2.0, 1).unwrap(),
            0.103_776_874_355_148_68,
            max_relative = 1e-14
        );
        assert!(gaussian_kernel(0.0, 1.0, 1).is_err());
        assert!(gaussian_kernel(-1.0, 1.0, 1).is_err());
    }

    #[test]
    fn gaussian_kernel_has_unit_mass() {
        let rule = GaussLegendre::<f64>::new(16);
        let mut f = |y: f64| gaussian_kernel(1.0, y.abs(), 1).unwrap();
        let mut bps = vec![0.0];
        bps.extend((1..=40).map(|k| k as f64 * 0.5));
        let half: f64 = crate::quad::composite(&rule, &mut f, &bps);
        assert_relative_eq!(2.0 * half, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn stable_density_half_closed_form() {
        assert_relative_eq!(
            stable_density(1.0, 0.5, 1.0).unwrap(),
            0.219_695_644_733_861_2,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            stable_density(2.0, 0.5, 1.0).unwrap(),
            0.207_553_748_710_297_35,
            max_relative = 1e-14
        );
    }

    #[test]
    fn stable_density_rejects_bad_arguments() {
        assert!(stable_density(0.0, 0.5, 1.0).is_err());
        assert!(stable_density(1.0, 0.5, 0.0).is_err());
        assert!(stable_density(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn stable_density_is_nonnegative_everywhere_sampled() {
        for s in [0.3, 0.5, 0.7] {
            for t in [0.5_f64, 1.0, 2.0] {
                let scale = t.powf(1.0 / s);
                for k in -30..=30 {
                    let tau = scale * 10f64.powf(k as f64 / 10.0);
                    assert!(stable_density(t, s, tau).unwrap() >= 0.0);
                }
            }
        }
    }

    /// Laplace transform of the density against `e^{−tλ^s}`, integrating the
    /// density over a log grid with a series tail beyond the truncation.
    fn laplace_transform(t: f64, s: f64, lambda: f64) -> f64 {
        let rule = GaussLegendre::<f64>::new(16);
        let scale = t.powf(1.0 / s);
        let upper = scale * 1e6;
        let bps = log_panels(scale * 1e-10, upper, 12);
        let mut f = |tau: f64| (-(lambda * tau)).exp() * stable_density(t, s, tau).unwrap();
        let mut total: f64 = composite(&rule, &mut f, &bps);
        if lambda == 0.0 {
            // tail series: f ~ Σ_k (−1)^{k+1} Γ(ks+1) sin(πks) t^k τ^{−ks−1} / (k! π)
            for k in 1..=4 {
                let kf = k as f64;
                let term = (-1f64).powi(k + 1) * gamma(kf * s + 1.0).unwrap()
                    * (std::f64::consts::PI * kf * s).sin()
                    * t.powi(k)
                    / (factorial(k) * std::f64::consts::PI)
                    * upper.powf(-kf * s)
                    / (kf * s);
                total += term;
            }
        }
        total
    }

    fn factorial(k: i32) -> f64 {
        (1..=k).map(|i| i as f64).product::<f64>().max(1.0)
    }

    #[test]
    fn stable_density_laplace_transform_matches_symbol() {
        for s in [0.3, 0.5, 0.7] {
            for lambda in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
                let got = laplace_transform(1.0, s, lambda);
                let want = (-(lambda.powf(s))).exp();
                assert!(
                    (got - want).abs() <= 1e-8,
                    "s={s} lambda={lambda}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn stable_density_mass_is_one() {
        for s in [0.3, 0.5, 0.7] {
            let got = laplace_transform(1.0, s, 0.0);
            assert!((got - 1.0).abs() <= 1e-8, "s={s}: mass {got}");
        }
    }

    #[test]
    fn stable_density_scaling_homogeneity() {
        for s in [0.3, 0.7] {
            for t in [0.5_f64, 2.0] {
                let scale = t.powf(1.0 / s);
                for x in [0.3, 1.0, 2.5] {
                    let tau = x * scale;
                    let lhs = stable_density(t, s, tau).unwrap();
                    let rhs = stable_density(1.0, s, x).unwrap() / scale;
                    assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
                }
            }
        }
    }
}
