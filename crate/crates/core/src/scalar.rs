//! Scalars at the root of unity `q = exp(iπ/r)`, `r ≡ 0 mod 4`.
//!
//! Quantum numbers use the notation `{a} = q^a - q^-a = 2i sin(πa/r)` and
//! `[a] = {a}/{1}`. Degrees of modules and spin values live in `ℂ/2ℤ`,
//! represented by [`Mod2C`].

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_REL_TOL: f64 = 1e-8;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Sign of a framing, crossing or move direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Level `r` together with `q = exp(iπ/r)` and the comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarContext {
    r: u32,
    q: C64,
    tol: f64,
}

impl ScalarContext {
    pub fn new(r: i64) -> Result<Self> {
        if r < 4 || r % 4 != 0 {
            return Err(Error::InvalidLevel(r));
        }
        let q = C64::from_polar(1.0, PI / r as f64);
        Ok(ScalarContext {
            r: r as u32,
            q,
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        self.tol = tol;
        self
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn rf(&self) -> f64 {
        self.r as f64
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `q^x = exp(iπx/r)` for complex `x`.
    pub fn qpow(&self, x: C64) -> C64 {
        (C64::i() * PI * x / self.rf()).exp()
    }

    pub fn qpow_f(&self, x: f64) -> C64 {
        self.qpow(c64(x, 0.0))
    }

    /// `{a} = 2i sin(πa/r)`.
    pub fn qnum(&self, a: C64) -> C64 {
        C64::i() * 2.0 * (a * PI / self.rf()).sin()
    }

    /// `[a] = {a}/{1}`.
    pub fn qint(&self, a: C64) -> C64 {
        self.qnum(a) / self.qnum(c64(1.0, 0.0))
    }

    /// `[n]!` for a non-negative integer `n`.
    pub fn qfactorial(&self, n: u32) -> C64 {
        (1..=n).fold(c64(1.0, 0.0), |acc, k| acc * self.qint(c64(k as f64, 0.0)))
    }

    /// Returns `Some(n)` when `a` is within tolerance of the integer `n`.
    pub fn as_integer(&self, a: C64) -> Option<i64> {
        let n = a.re.round();
        if (a.re - n).abs() < self.tol && a.im.abs() < self.tol {
            Some(n as i64)
        } else {
            None
        }
    }

    /// Membership in `(ℂ∖ℤ) ∪ rℤ`, the labels of the simple projective modules.
    pub fn in_ddot(&self, a: C64) -> bool {
        match self.as_integer(a) {
            None => true,
            Some(n) => n.rem_euclid(self.r as i64) == 0,
        }
    }

    /// Modified dimension `d(α) = -r{α}/{rα}`.
    ///
    /// On `rℤ` the quotient is `0/0`; its limit is `d(nr) = (-1)^(n+1)`.
    pub fn mod_dim(&self, a: C64) -> Result<C64> {
        if let Some(n) = self.as_integer(a) {
            let r = self.r as i64;
            if n.rem_euclid(r) != 0 {
                return Err(Error::InvalidColor(format!(
                    "alpha = {} is an integer outside rZ",
                    n
                )));
            }
            let k = n / r;
            return Ok(c64(if k % 2 == 0 { -1.0 } else { 1.0 }, 0.0));
        }
        let rf = self.rf();
        Ok(-rf * (a * PI / rf).sin() / (a * PI).sin())
    }

    /// Twist eigenvalue `θ_α = q^((α² - (r-1)²)/2)` on `V_α`.
    pub fn twist_scalar(&self, a: C64) -> C64 {
        let rm1 = self.rf() - 1.0;
        self.qpow((a * a - rm1 * rm1) / 2.0)
    }

    /// `Σ_{k=-r/2+1}^{r/2} q^{-2k²}`, summed term by term.
    pub fn gauss_sum(&self) -> C64 {
        let h = (self.r / 2) as i64;
        (-h + 1..=h)
            .map(|k| self.qpow_f(-2.0 * (k * k) as f64))
            .sum()
    }

    /// The two half sums `Σ_{k=1}^{r/2} q^{-2k²}` and `Σ_{k=1}^{r/2} q^{-2(k-1)²}`.
    pub fn half_gauss_sums(&self) -> (C64, C64) {
        let h = (self.r / 2) as i64;
        let a = (1..=h).map(|k| self.qpow_f(-2.0 * (k * k) as f64)).sum();
        let b = (1..=h)
            .map(|k| self.qpow_f(-2.0 * ((k - 1) * (k - 1)) as f64))
            .sum();
        (a, b)
    }

    /// Multiplier picked up by `F'` when a Kirby-colored unknot of blackboard
    /// framing `framing` is added around a strand (stabilization).
    ///
    /// With crossings `x+` evaluated by the braiding `c`, a `-1` framed
    /// stabilization yields `(1-i)/2 (rq)^(3/2)` and a `+1` framed one its
    /// complex conjugate.
    pub fn delta_spin(&self, framing: Sign) -> C64 {
        let rf = self.rf();
        let minus = c64(0.5, -0.5) * rf.powf(1.5) * self.qpow_f(1.5);
        match framing {
            Sign::Minus => minus,
            Sign::Plus => minus.conj(),
        }
    }

    pub fn approx_eq(&self, a: C64, b: C64) -> bool {
        (a - b).norm() <= self.tol.max(DEFAULT_REL_TOL * a.norm().max(b.norm()))
    }
}

/// Relative deviation `|a-b| / max(|a|,|b|)` (absolute when both are tiny).
pub fn rel_dev(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale < 1e-300 {
        0.0
    } else {
        (a - b).norm() / scale.max(1e-12)
    }
}

/// An element of `ℂ/2ℤ`; the stored representative has real part in `[0, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mod2C(C64);

fn reduce_re(x: f64) -> f64 {
    let y = x.rem_euclid(2.0);
    // rem_euclid can return exactly 2.0 after rounding
    if y >= 2.0 {
        0.0
    } else {
        y
    }
}

impl Mod2C {
    pub fn new(value: C64) -> Self {
        Mod2C(c64(reduce_re(value.re), value.im))
    }

    pub fn from_re(x: f64) -> Self {
        Self::new(c64(x, 0.0))
    }

    pub fn zero() -> Self {
        Mod2C(c64(0.0, 0.0))
    }

    pub fn one() -> Self {
        Mod2C(c64(1.0, 0.0))
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    /// Distance to zero in `ℂ/2ℤ` (real part measured around the circle).
    pub fn dist_to_zero(&self) -> f64 {
        let re = self.0.re.min(2.0 - self.0.re);
        (re * re + self.0.im * self.0.im).sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.dist_to_zero() < tol
    }

    pub fn approx_eq(&self, other: &Mod2C, tol: f64) -> bool {
        (*self - *other).is_zero(tol)
    }

    /// Membership in `ℤ/2ℤ ⊂ ℂ/2ℤ`.
    pub fn is_integral(&self, tol: f64) -> bool {
        self.is_zero(tol) || (*self - Mod2C::one()).is_zero(tol)
    }

    /// Scalar `q^(r·x)`, well defined on `ℂ/2ℤ` because `q^(2r) = 1`.
    pub fn q_r_power(&self, ctx: &ScalarContext) -> C64 {
        ctx.qpow(self.0 * ctx.rf())
    }
}

impl Add for Mod2C {
    type Output = Mod2C;
    fn add(self, rhs: Mod2C) -> Mod2C {
        Mod2C::new(self.0 + rhs.0)
    }
}

impl AddAssign for Mod2C {
    fn add_assign(&mut self, rhs: Mod2C) {
        *self = *self + rhs;
    }
}

impl Sub for Mod2C {
    type Output = Mod2C;
    fn sub(self, rhs: Mod2C) -> Mod2C {
        Mod2C::new(self.0 - rhs.0)
    }
}

impl Neg for Mod2C {
    type Output = Mod2C;
    fn neg(self) -> Mod2C {
        Mod2C::new(-self.0)
    }
}

impl Mul<i64> for Mod2C {
    type Output = Mod2C;
    fn mul(self, rhs: i64) -> Mod2C {
        Mod2C::new(self.0 * rhs as f64)
    }
}

impl std::iter::Sum for Mod2C {
    fn sum<I: Iterator<Item = Mod2C>>(iter: I) -> Mod2C {
        iter.fold(Mod2C::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Mod2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "{}{:+}i", self.0.re, self.0.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(r: i64) -> ScalarContext {
        ScalarContext::new(r).unwrap()
    }

    #[test]
    fn rejects_bad_levels() {
        for r in [0, 2, 3, 6, 10, -4] {
            assert!(ScalarContext::new(r).is_err(), "r = {r}");
        }
    }

    #[test]
    fn root_of_unity_identities() {
        for r in [4, 8, 12, 16] {
            let c = ctx(r);
            let qr = c.q().powu(r as u32);
            assert!((qr + 1.0).norm() < 1e-12);
            assert!((c.q().powu(2 * r as u32) - 1.0).norm() < 1e-12);
            assert!(c.qint(c64(r as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn qnum_values() {
        let c4 = ctx(4);
        let v = c4.qnum(c64(1.0, 0.0));
        assert!((v - c64(0.0, 2f64.sqrt())).norm() < 1e-12);
        assert_eq!(c4.qnum(c64(0.0, 0.0)), c64(0.0, 0.0));
        let c8 = ctx(8);
        assert!((c8.qnum(c64(4.0, 0.0)) - c64(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn qnum_symmetries() {
        let c = ctx(8);
        for a in [c64(0.3, 0.1), c64(1.7, -0.4), c64(5.2, 0.0)] {
            assert!((c.qnum(-a) + c.qnum(a)).norm() < 1e-12);
            assert!((c.qnum(a + 16.0) - c.qnum(a)).norm() < 1e-10);
        }
    }

    #[test]
    fn mod_dim_values() {
        let c = ctx(4);
        let d = c.mod_dim(c64(0.5, 0.0)).unwrap();
        let expect = -4.0 * (PI / 8.0).sin() / (PI / 2.0).sin();
        assert!((d.re - expect).abs() < 1e-12 && d.im.abs() < 1e-12);
        assert!((d.re + 1.530734).abs() < 1e-6);
        let d2 = c.mod_dim(c64(2.5, 0.0)).unwrap();
        let expect2 = -4.0 * (2.5 * PI / 4.0).sin() / (2.5 * PI).sin();
        assert!((d2.re - expect2).abs() < 1e-12);
        // d(α+r) = −d(α)
        assert!((c.mod_dim(c64(4.5, 0.0)).unwrap() + d).norm() < 1e-12);
        assert!((c.mod_dim(c64(0.0, 0.0)).unwrap() + 1.0).norm() < 1e-15);
        assert!((c.mod_dim(c64(-0.5, 0.0)).unwrap() - d).norm() < 1e-12);
        assert!(matches!(
            c.mod_dim(c64(1.0, 0.0)),
            Err(Error::InvalidColor(_))
        ));
    }

    #[test]
    fn mod_dim_limit_on_rz() {
        // extrapolate -r{α}/{rα} towards α = nr and compare with the stored limit
        for r in [4i64, 8] {
            let c = ctx(r);
            for n in [-1i64, 0, 1, 2] {
                let base = (n * r) as f64;
                let f = |h: f64| {
                    let a = c64(base + h, 0.0);
                    -c.rf() * (a * PI / c.rf()).sin() / (a * PI).sin()
                };
                let h = 1e-4;
                let rich = (f(h) * 4.0 - f(2.0 * h)) / 3.0;
                let lim = c.mod_dim(c64(base, 0.0)).unwrap();
                assert!((rich - lim).norm() < 1e-7, "r={r} n={n}: {rich} vs {lim}");
            }
        }
    }

    #[test]
    fn mod_dim_symmetries() {
        let c = ctx(8);
        for a in [c64(0.3, 0.0), c64(0.7, 0.2), c64(3.1, -0.5)] {
            let d = c.mod_dim(a).unwrap();
            assert!(d.norm() > 1e-6);
            assert!((c.mod_dim(-a).unwrap() - d).norm() < 1e-9);
            for n in 1..=3 {
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                let dn = c.mod_dim(a + (n * 8) as f64).unwrap();
                assert!((dn - d * s).norm() < 1e-8 * d.norm().max(1.0));
            }
        }
    }

    #[test]
    fn twist_values() {
        let c = ctx(4);
        assert!((c.twist_scalar(c64(3.0, 0.0)) - 1.0).norm() < 1e-12);
        let t = c.twist_scalar(c64(0.5, 0.0));
        assert!((t - C64::from_polar(1.0, -35.0 * PI / 32.0)).norm() < 1e-12);
        assert!((ctx(8).twist_scalar(c64(7.0, 0.0)) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn gauss_sums() {
        for r in [4i64, 8, 12, 16] {
            let c = ctx(r);
            let expect = c64(1.0, -1.0) * (r as f64).sqrt();
            assert!((c.gauss_sum() - expect).norm() < 1e-10);
            let (a, b) = c.half_gauss_sums();
            assert!((a - expect / 2.0).norm() < 1e-10);
            assert!((b - expect / 2.0).norm() < 1e-10);
        }
        assert!((ctx(4).gauss_sum() - c64(2.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn delta_spin_closed_form() {
        let c = ctx(4);
        let m = c.delta_spin(Sign::Minus);
        assert!((m - c64(5.22625, 2.16478)).norm() < 1e-5);
        assert!((c.delta_spin(Sign::Plus) - m.conj()).norm() < 1e-14);
        let modulus = 4f64.powf(1.5) / 2f64.sqrt();
        assert!((m.norm() - modulus).abs() < 1e-12);
    }

    #[test]
    fn mod2c_basics() {
        let a = Mod2C::new(c64(3.5, 0.2));
        assert!((a.value().re - 1.5).abs() < 1e-15);
        assert!((a + (-a)).is_zero(1e-12));
        assert!(Mod2C::from_re(1.0).is_integral(1e-9));
        assert!(Mod2C::from_re(-2.0).is_integral(1e-9));
        assert!(!Mod2C::from_re(0.5).is_integral(1e-9));
        assert!(!Mod2C::new(c64(1.0, 0.1)).is_integral(1e-9));
        assert!(Mod2C::from_re(1.999_999_999_999).is_zero(1e-9));
        assert!((Mod2C::from_re(0.5) * 4).is_zero(1e-12));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn mod2c_representative_in_range(re in -50.0f64..50.0, im in -3.0f64..3.0) {
                let m = Mod2C::new(c64(re, im));
                prop_assert!(m.value().re >= 0.0 && m.value().re < 2.0);
                prop_assert!((m + (-m)).is_zero(1e-9));
            }

            #[test]
            fn mod2c_integer_scaling(re in -5.0f64..5.0, im in -1.0f64..1.0, k in -6i64..6) {
                let m = Mod2C::new(c64(re, im));
                let sum: Mod2C = std::iter::repeat(m).take(k.unsigned_abs() as usize).sum();
                let expect = if k < 0 { -sum } else { sum };
                prop_assert!((m * k).approx_eq(&expect, 1e-9));
            }
        }
    }
}
