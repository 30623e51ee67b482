//! Second-order forward-mode jets.
//!
//! A [`Jet`] carries a value together with its first and second derivatives
//! with respect to one independent coordinate. The radial residual checks
//! build every wavefunction and operator coefficient as a jet, so the ODE
//! residuals use exact derivatives and never finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Self { v, d1, d2 }
    }

    pub const fn constant(v: f64) -> Self {
        Self { v, d1: 0.0, d2: 0.0 }
    }

    /// The independent variable itself.
    pub const fn var(x: f64) -> Self {
        Self { v: x, d1: 1.0, d2: 0.0 }
    }

    /// Compose an outer function `f` with this jet given `f(u), f'(u), f''(u)` at `u = self.v`.
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            v: f0,
            d1: f1 * self.d1,
            d2: f2 * self.d1 * self.d1 + f1 * self.d2,
        }
    }

    pub fn powf(self, p: f64) -> Self {
        let u = self.v;
        let f0 = u.powf(p);
        let f1 = if p == 0.0 { 0.0 } else { p * u.powf(p - 1.0) };
        let f2 = if p == 0.0 || p == 1.0 {
            0.0
        } else {
            p * (p - 1.0) * u.powf(p - 2.0)
        };
        self.chain(f0, f1, f2)
    }

    pub fn powi(self, p: i32) -> Self {
        let u = self.v;
        let f0 = u.powi(p);
        let f1 = if p == 0 { 0.0 } else { p as f64 * u.powi(p - 1) };
        let f2 = if p == 0 || p == 1 {
            0.0
        } else {
            (p * (p - 1)) as f64 * u.powi(p - 2)
        };
        self.chain(f0, f1, f2)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn recip(self) -> Self {
        let u = self.v;
        self.chain(1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u))
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(c * self.v, c * self.d1, c * self.d2)
    }

    /// Jet of the first derivative, truncated to first order.
    pub fn derivative(self) -> Self {
        Self::new(self.d1, self.d2, f64::NAN)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet::new(self.v + c, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

/// A nonvanishing jet stored as `ln|v|`, the sign of `v`, and the ratios `d1/v`, `d2/v`.
///
/// Products and powers stay representable when the value or its derivatives would
/// leave the floating-point range, which happens deep in power-law tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogJet {
    pub ln: f64,
    pub sign: f64,
    pub r1: f64,
    pub r2: f64,
}

impl LogJet {
    /// `None` when `j.v` is zero or not finite.
    pub fn from_jet(j: Jet) -> Option<Self> {
        (j.v != 0.0 && j.v.is_finite()).then(|| Self {
            ln: j.v.abs().ln(),
            sign: j.v.signum(),
            r1: j.d1 / j.v,
            r2: j.d2 / j.v,
        })
    }

    /// `exp(j)` for an ordinary jet `j`.
    pub fn exp_of(j: Jet) -> Self {
        Self { ln: j.v, sign: 1.0, r1: j.d1, r2: j.d2 + j.d1 * j.d1 }
    }

    /// Power of a positive jet; `p` may be any real exponent.
    pub fn powf(self, p: f64) -> Self {
        Self {
            ln: p * self.ln,
            sign: 1.0,
            r1: p * self.r1,
            r2: p * (p - 1.0) * self.r1 * self.r1 + p * self.r2,
        }
    }

    pub fn to_jet(self) -> Jet {
        let v = self.sign * self.ln.exp();
        Jet::new(v, v * self.r1, v * self.r2)
    }
}

impl Mul for LogJet {
    type Output = LogJet;
    fn mul(self, o: LogJet) -> LogJet {
        LogJet {
            ln: self.ln + o.ln,
            sign: self.sign * o.sign,
            r1: self.r1 + o.r1,
            r2: self.r2 + 2.0 * self.r1 * o.r1 + o.r2,
        }
    }
}
