//! Jacobi and generalized Laguerre polynomials.
//!
//! Both families are evaluated by their forward three-term degree recurrence.
//! Parameters are arbitrary finite reals: in the curved-space models the
//! second Jacobi parameter is `-beta/lambda - 1/2`, which is large and of
//! either sign, so no `a, b > -1` restriction is imposed here. For the few
//! parameter values where a recurrence denominator vanishes the polynomial is
//! still well defined and we fall back to the finite binomial sum.

use crate::error::{finite, Error, Result};
use crate::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub n: u32,
    pub a: f64,
    pub b: f64,
}

impl JacobiParams {
    pub fn new(n: u32, a: f64, b: f64) -> Self {
        Self { n, a, b }
    }

    fn check(&self) -> Result<()> {
        finite(self.a, "Jacobi parameter a")?;
        finite(self.b, "Jacobi parameter b")?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreParams {
    pub n: u32,
    pub alpha: f64,
}

impl LaguerreParams {
    pub fn new(n: u32, alpha: f64) -> Self {
        Self { n, alpha }
    }
}

/// `P_n^{(a,b)}(x)`.
pub fn jacobi(params: JacobiParams, x: f64) -> Result<f64> {
    params.check()?;
    finite(x, "Jacobi argument")?;
    Ok(jacobi_unchecked(params.n, params.a, params.b, x))
}

/// `d^k/dx^k P_n^{(a,b)}(x)` for `k` in {1, 2}.
///
/// Uses `d/dx P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}`, applied `order` times.
pub fn jacobi_derivative(params: JacobiParams, x: f64, order: u32) -> Result<f64> {
    if !(1..=2).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    params.check()?;
    finite(x, "Jacobi argument")?;
    Ok(jacobi_derivative_unchecked(params, x, order))
}

fn jacobi_derivative_unchecked(params: JacobiParams, x: f64, order: u32) -> f64 {
    let JacobiParams { n, a, b } = params;
    if n < order {
        return 0.0;
    }
    let s = n as f64 + a + b;
    let factor = match order {
        1 => 0.5 * (s + 1.0),
        _ => 0.25 * (s + 1.0) * (s + 2.0),
    };
    let k = order as f64;
    factor * jacobi_unchecked(n - order, a + k, b + k, x)
}

/// `P_n^{(a,b)}(y)` composed with an inner jet `y(x)`.
pub(crate) fn jacobi_jet(params: JacobiParams, y: Jet) -> Jet {
    let f0 = jacobi_unchecked(params.n, params.a, params.b, y.v);
    let f1 = jacobi_derivative_unchecked(params, y.v, 1);
    let f2 = jacobi_derivative_unchecked(params, y.v, 2);
    y.chain(f0, f1, f2)
}

fn jacobi_unchecked(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    if n == 1 {
        return p1;
    }
    let mut prev = 1.0;
    let mut cur = p1;
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        let t1 = kf + a + b;
        let t2 = c - 2.0;
        // a1 carries the factor t1 * t2; near its zeros the quotient loses
        // about -log10(t1 * t2) digits, so hand over to the sum early.
        if t1.abs().min(1.0) * t2.abs().min(1.0) < 1e-4 {
            return jacobi_binomial_sum(n, a, b, x);
        }
        let a1 = 2.0 * kf * t1 * t2;
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 1.0) * c * t2;
        let a4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * c;
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)`, valid for all real `a, b`.
fn jacobi_binomial_sum(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let nf = n as f64;
    let u = 0.5 * (x - 1.0);
    let v = 0.5 * (x + 1.0);
    (0..=n)
        .map(|s| {
            binomial(nf + a, n - s)
                * binomial(nf + b, s)
                * u.powi(s as i32)
                * v.powi((n - s) as i32)
        })
        .sum()
}

/// Generalized binomial coefficient `C(z, k)` for real `z`.
fn binomial(z: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (z - j as f64) / (j + 1) as f64)
}

/// `L_n^{(alpha)}(x)`.
pub fn laguerre(params: LaguerreParams, x: f64) -> Result<f64> {
    finite(params.alpha, "Laguerre parameter")?;
    finite(x, "Laguerre argument")?;
    Ok(laguerre_unchecked(params.n, params.alpha, x))
}

/// `d^k/dx^k L_n^{(alpha)}(x) = (-1)^k L_{n-k}^{(alpha+k)}(x)` for `k` in {1, 2}.
pub fn laguerre_derivative(params: LaguerreParams, x: f64, order: u32) -> Result<f64> {
    if !(1..=2).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    finite(params.alpha, "Laguerre parameter")?;
    finite(x, "Laguerre argument")?;
    Ok(laguerre_derivative_unchecked(params, x, order))
}

fn laguerre_derivative_unchecked(params: LaguerreParams, x: f64, order: u32) -> f64 {
    if params.n < order {
        return 0.0;
    }
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * laguerre_unchecked(params.n - order, params.alpha + order as f64, x)
}

pub(crate) fn laguerre_jet(params: LaguerreParams, y: Jet) -> Jet {
    let f0 = laguerre_unchecked(params.n, params.alpha, y.v);
    let f1 = laguerre_derivative_unchecked(params, y.v, 1);
    let f2 = laguerre_derivative_unchecked(params, y.v, 2);
    y.chain(f0, f1, f2)
}

fn laguerre_unchecked(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jp(n: u32, a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(n, a, b)
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(jacobi(jp(0, 2.3, -7.1), 0.4).unwrap(), 1.0);
        assert_eq!(jacobi(jp(1, 1.0, 1.0), 0.0).unwrap(), 0.0);
        assert_eq!(laguerre(LaguerreParams::new(0, 3.0), 5.0).unwrap(), 1.0);
        assert_eq!(laguerre(LaguerreParams::new(1, 2.0), 1.0).unwrap(), 2.0);
        assert!((laguerre(LaguerreParams::new(2, 0.0), 2.0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn frozen_series_values() {
        // 40-digit reference values computed offline from the hypergeometric form.
        let p = jacobi(jp(2, 1.0, 0.5), 0.3).unwrap();
        assert!((p - (-0.2090625)).abs() < 1e-15);
        let d2 = jacobi_derivative(jp(3, 0.5, 2.0), -0.2, 2).unwrap();
        assert!((d2 - (-19.5)).abs() < 1e-13);
    }

    #[test]
    fn derivative_edge_cases() {
        assert_eq!(jacobi_derivative(jp(0, 0.3, 4.0), 0.9, 1).unwrap(), 0.0);
        assert_eq!(jacobi_derivative(jp(1, 1.0, 1.0), 0.7, 1).unwrap(), 2.0);
        assert_eq!(jacobi_derivative(jp(1, 1.0, 1.0), 0.7, 2).unwrap(), 0.0);
        assert_eq!(
            jacobi_derivative(jp(3, 1.0, 1.0), 0.7, 3),
            Err(Error::UnsupportedOrder(3))
        );
        assert_eq!(
            laguerre_derivative(LaguerreParams::new(3, 1.0), 0.7, 0),
            Err(Error::UnsupportedOrder(0))
        );
        // L_2^{(0)}(x) = 1 - 2x + x^2/2
        let l = LaguerreParams::new(2, 0.0);
        assert!((laguerre_derivative(l, 3.0, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((laguerre_derivative(l, 3.0, 2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(jacobi(jp(2, 1.0, 1.0), f64::NAN), Err(Error::NonFinite(_))));
        assert!(matches!(jacobi(jp(2, f64::INFINITY, 1.0), 0.0), Err(Error::NonFinite(_))));
        assert!(matches!(
            laguerre(LaguerreParams::new(2, 1.0), f64::NEG_INFINITY),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn degenerate_recurrence_falls_back_to_binomial_sum() {
        // a + b = -2 makes n + a + b vanish at n = 2.
        let (a, b, x) = (0.5, -2.5, 0.37);
        let via_sum = jacobi_binomial_sum(2, a, b, x);
        assert_eq!(jacobi(jp(2, a, b), x).unwrap(), via_sum);
        assert!((via_sum - 1.186725).abs() < 1e-14);
        // Nearby non-degenerate parameters agree by continuity.
        let near = jacobi(jp(2, a + 1e-6, b), x).unwrap();
        assert!((near - via_sum).abs() < 1e-5);
    }

    #[test]
    fn large_negative_b_is_accepted() {
        // Parameters of the lambda > 0 oscillator: b = -beta/lambda - 1/2.
        let v = jacobi(jp(3, 0.0, -5.5), 7.0).unwrap();
        assert!(v.is_finite());
        assert!((v - jacobi_binomial_sum(3, 0.0, -5.5, 7.0)).abs() < 1e-10 * v.abs());
    }

    fn series_scale(n: u32, a: f64, b: f64, x: f64) -> f64 {
        let nf = n as f64;
        let (u, v) = (0.5 * (x - 1.0), 0.5 * (x + 1.0));
        (0..=n)
            .map(|s| (binomial(nf + a, n - s) * binomial(nf + b, s) * u.powi(s as i32) * v.powi((n - s) as i32)).abs())
            .sum()
    }

    proptest::proptest! {
        #[test]
        fn recurrence_matches_series(n in 0u32..=8, a in -0.9f64..20.0, b in -0.9f64..20.0, x in -1.0f64..3.0) {
            let rec = jacobi(jp(n, a, b), x).unwrap();
            let series = jacobi_binomial_sum(n, a, b, x);
            // Near a root the relative error is measured against the size of the series terms.
            let scale = series.abs().max(1e-3 * series_scale(n, a, b, x));
            proptest::prop_assert!((rec - series).abs() <= 1e-12 * scale, "{rec} vs {series}");
        }

        #[test]
        fn reflection_symmetry(n in 0u32..=8, a in -0.9f64..20.0, b in -0.9f64..20.0, x in -1.0f64..1.0) {
            let lhs = jacobi(jp(n, a, b), -x).unwrap();
            let rhs = if n % 2 == 0 { 1.0 } else { -1.0 } * jacobi(jp(n, b, a), x).unwrap();
            let scale = lhs.abs().max(1e-3 * series_scale(n, a, b, -x));
            proptest::prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "{lhs} vs {rhs}");
        }

        #[test]
        fn derivative_matches_finite_difference(n in 1u32..=8, a in -0.9f64..20.0, b in -0.9f64..20.0, x in -0.95f64..0.95) {
            let h = 1e-3;
            let params = jp(n, a, b);
            let p = |t: f64| jacobi(params, x + t * h).unwrap();
            let fd = (8.0 * (p(1.0) - p(-1.0)) - (p(2.0) - p(-2.0))) / (12.0 * h);
            let exact = jacobi_derivative(params, x, 1).unwrap();
            let scale = exact.abs().max(1e-2 * series_scale(n, a, b, x) * n as f64);
            proptest::prop_assert!((fd - exact).abs() <= 1e-8 * scale, "{fd} vs {exact}");
        }

        #[test]
        fn laguerre_derivative_matches_finite_difference(n in 1u32..=8, alpha in -0.9f64..10.0, x in 0.1f64..10.0) {
            let h = 1e-5;
            let params = LaguerreParams::new(n, alpha);
            let fd = (laguerre(params, x + h).unwrap() - laguerre(params, x - h).unwrap()) / (2.0 * h);
            let exact = laguerre_derivative(params, x, 1).unwrap();
            proptest::prop_assert!((fd - exact).abs() <= 1e-7 * exact.abs().max(1.0), "{fd} vs {exact}");
        }
    }
}
