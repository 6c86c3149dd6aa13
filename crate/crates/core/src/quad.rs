//! Panel-based Gauss-Legendre quadrature.
//!
//! Singular and oscillatory integrands in this crate are always integrated as
//! composites over explicit breakpoint lists (log-spaced panels toward
//! endpoint singularities, phase-equal panels across oscillations). On top of
//! that, [`adaptive`] bisects the worst panels until an error target or an
//! evaluation budget is hit.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};
use num_complex::Complex;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Values a quadrature can accumulate: the scalar itself or a complex pair.
pub trait QuadValue<T: Real>: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, factor: T) -> Self;
    fn magnitude(self) -> T;
}

impl<T: Real> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: T) -> Self {
        self * factor
    }
    fn magnitude(self) -> T {
        self.abs()
    }
}

impl<T: Real> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: T) -> Self {
        Complex::new(self.re * factor, self.im * factor)
    }
    fn magnitude(self) -> T {
        self.norm()
    }
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

// The 16-point rule is the workhorse of the singular-kernel composites and
// gets constructed in hot loops; its nodes are tabulated.
const GL16: [(f64, f64); 16] = [
    (-9.89400934991649939e-1, 2.71524594117518517e-2),
    (-9.44575023073232600e-1, 6.22535239386477757e-2),
    (-8.65631202387831755e-1, 9.51585116824928967e-2),
    (-7.55404408355002999e-1, 1.24628971255533946e-1),
    (-6.17876244402643771e-1, 1.49595988816576819e-1),
    (-4.58016777657227370e-1, 1.69156519395002425e-1),
    (-2.81603550779258915e-1, 1.82603415044923612e-1),
    (-9.50125098376374405e-2, 1.89450610455068474e-1),
    (9.50125098376374405e-2, 1.89450610455068474e-1),
    (2.81603550779258915e-1, 1.82603415044923612e-1),
    (4.58016777657227370e-1, 1.69156519395002425e-1),
    (6.17876244402643771e-1, 1.49595988816576819e-1),
    (7.55404408355002999e-1, 1.24628971255533946e-1),
    (8.65631202387831755e-1, 9.51585116824928967e-2),
    (9.44575023073232600e-1, 6.22535239386477757e-2),
    (9.89400934991649939e-1, 2.71524594117518517e-2),
];

impl<T: Real> GaussLegendre<T> {
    /// Computes an `n`-point rule by Newton iteration on the Legendre
    /// three-term recurrence (tabulated for the common 16-point case).
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "Gauss-Legendre rule needs at least 2 points");
        if n == 16 {
            return Self {
                nodes: GL16.iter().map(|&(x, _)| lit(x)).collect(),
                weights: GL16.iter().map(|&(_, w)| lit(w)).collect(),
            };
        }
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for i in 0..n {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = lit::<T>((std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos());
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x = x - step;
                if step.abs() <= T::epsilon() * lit(2.0) {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        }
        nodes.reverse();
        weights.reverse();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]`.
    pub fn panel<V: QuadValue<T>, F: FnMut(T) -> V + ?Sized>(&self, f: &mut F, a: T, b: T) -> V {
        let half = lit::<T>(0.5);
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        let mut acc = V::zero();
        for (&x, &w) in self.nodes.iter().zip(self.weights.iter()) {
            acc = acc.add(f(mid + rad * x).scale(w));
        }
        acc.scale(rad)
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = lit::<T>(k as f64);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = lit::<T>(n as f64) * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Composite rule over consecutive panels given by `breakpoints`.
pub fn composite<T: Real, V: QuadValue<T>, F: FnMut(T) -> V + ?Sized>(
    rule: &GaussLegendre<T>,
    f: &mut F,
    breakpoints: &[T],
) -> V {
    let mut acc = V::zero();
    for pair in breakpoints.windows(2) {
        if pair[1] > pair[0] {
            acc = acc.add(rule.panel(f, pair[0], pair[1]));
        }
    }
    acc
}

struct HeapPanel<V> {
    err: f64,
    a: f64,
    b: f64,
    value: V,
}

impl<V> PartialEq for HeapPanel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<V> Eq for HeapPanel<V> {}
impl<V> PartialOrd for HeapPanel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for HeapPanel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive bisection on top of [`composite`].
///
/// Each panel's error is estimated by comparing the whole-panel rule against
/// the sum over its two halves; the worst panel is split until the summed
/// estimate meets `rel_tol`/`abs_tol` or the evaluation budget runs out.
pub fn adaptive<T: Real, V: QuadValue<T>, F: FnMut(T) -> V>(
    rule: &GaussLegendre<T>,
    f: &mut F,
    breakpoints: &[T],
    rel_tol: T,
    abs_tol: T,
    budget: usize,
) -> Result<V> {
    fn estimate_panel<T: Real, V: QuadValue<T>, F: FnMut(T) -> V>(
        rule: &GaussLegendre<T>,
        f: &mut F,
        a: T,
        b: T,
    ) -> (V, T) {
        let whole = rule.panel(f, a, b);
        let mid = (a + b) * lit::<T>(0.5);
        let halves = rule.panel(f, a, mid).add(rule.panel(f, mid, b));
        let err = halves.sub(whole).magnitude();
        (halves, err)
    }

    let mut evals = 0usize;
    let per_panel = 3 * rule.len();
    let mut heap: BinaryHeap<HeapPanel<V>> = BinaryHeap::new();
    let mut total = V::zero();
    let mut total_err = T::zero();

    for pair in breakpoints.windows(2) {
        if pair[1] > pair[0] {
            let (v, e) = estimate_panel(rule, f, pair[0], pair[1]);
            evals += per_panel;
            heap.push(HeapPanel {
                err: to_f64(e),
                a: to_f64(pair[0]),
                b: to_f64(pair[1]),
                value: v,
            });
            total = total.add(v);
            total_err = total_err + e;
        }
    }

    loop {
        let target = abs_tol.max(rel_tol * total.magnitude());
        if total_err <= target {
            return Ok(total);
        }
        if evals + 2 * per_panel > budget {
            return Err(Error::QuadratureBudget {
                budget,
                estimate: to_f64(total_err / total.magnitude().max(T::min_positive_value())),
            });
        }
        let worst = heap.pop().expect("non-empty heap while error above target");
        total = total.sub(worst.value);
        total_err = total_err - lit(worst.err);
        let a = lit::<T>(worst.a);
        let b = lit::<T>(worst.b);
        let mid = (a + b) * lit::<T>(0.5);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (v, e) = estimate_panel(rule, f, lo, hi);
            evals += per_panel;
            heap.push(HeapPanel {
                err: to_f64(e),
                a: to_f64(lo),
                b: to_f64(hi),
                value: v,
            });
            total = total.add(v);
            total_err = total_err + e;
        }
    }
}

/// `count + 1` logarithmically spaced breakpoints from `lo` to `hi`.
pub fn geomspace<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    assert!(lo > T::zero() && hi > lo && count > 0);
    let llo = lo.ln();
    let lhi = hi.ln();
    let step = (lhi - llo) / lit(count as f64);
    let mut out = Vec::with_capacity(count + 1);
    out.push(lo);
    for k in 1..count {
        out.push((llo + step * lit(k as f64)).exp());
    }
    out.push(hi);
    out
}

/// Log-spaced breakpoints with a fixed panel count per decade.
pub fn log_panels<T: Real>(lo: T, hi: T, per_decade: usize) -> Vec<T> {
    let decades = to_f64((hi / lo).log10()).max(1.0);
    let count = ((decades * per_decade as f64).ceil() as usize).max(1);
    geomspace(lo, hi, count)
}
