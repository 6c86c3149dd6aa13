//! Extension of a short-time estimate to all times: splitting `t = n + τ`
//! turns the constant `M ≥ 1` into the exponential envelope `M e^{ωt}` with
//! `ω = ln M`.

use super::CheckReport;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Returns `(M, ω, b)` with `ω = ln M`; requires the normalization `M ≥ 1`.
pub fn extend_estimate_constants<T: Real>(m: T, b: T) -> Result<(T, T, T)> {
    if !(m >= T::one()) {
        return Err(Error::Domain(format!(
            "extension constants require M >= 1, got {m}"
        )));
    }
    if !(b > T::zero()) {
        return Err(Error::Domain(format!(
            "extension constants require b > 0, got {b}"
        )));
    }
    Ok((m, m.ln(), b))
}

/// Sweeps `t = n + τ` for `n ≤ 10` and verifies `M^{n+1} ≤ M e^{ωt}`
/// relatively to 1e-12.
pub fn check_extension_constants<T: Real>(m: T, b: T, seed: u64) -> Result<CheckReport> {
    let tolerance = 1e-12;
    let (m, omega, b) = extend_estimate_constants(m, b)?;
    let taus = [
        T::zero(),
        lit::<T>(0.25),
        lit::<T>(0.5),
        lit::<T>(0.75),
        lit::<T>(0.99),
    ];
    let mut max_violation = f64::NEG_INFINITY;
    let mut samples = 0usize;
    for n in 0..=10u32 {
        let power = m.powi(n as i32 + 1);
        for &tau in &taus {
            let t = lit::<T>(n as f64) + tau;
            let envelope = m * (omega * t).exp();
            max_violation = max_violation.max(to_f64((power - envelope) / power));
            samples += 1;
        }
    }
    Ok(CheckReport::new(
        "extension_constants",
        tolerance,
        max_violation,
        samples,
        seed,
    )
    .with_constant("M", to_f64(m))
    .with_constant("omega", to_f64(omega))
    .with_constant("b", to_f64(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn omega_reference_values() {
        let (_, omega, _) = extend_estimate_constants(1.0, 1.0).unwrap();
        assert_eq!(omega, 0.0);
        let (_, omega, _) = extend_estimate_constants(std::f64::consts::E, 1.0).unwrap();
        assert_relative_eq!(omega, 1.0, max_relative = 1e-15);
        let (_, omega, _) = extend_estimate_constants(2.0, 1.0).unwrap();
        assert_relative_eq!(omega, 0.693_147_180_559_945_3, max_relative = 1e-15);
    }

    #[test]
    fn rejects_subnormalized_constants() {
        assert!(extend_estimate_constants(0.5, 1.0).is_err());
        assert!(extend_estimate_constants(2.0, 0.0).is_err());
    }

    #[test]
    fn envelope_dominates_powers() {
        for m in [1.0, 2.0, 7.5] {
            let report = check_extension_constants(m, 1.0, 42).unwrap();
            assert!(report.pass, "M={m}: {report:?}");
        }
    }
}
