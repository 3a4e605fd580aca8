//! `ℂ/2ℤ`-spin structures as colorings of a surgery presentation.
//!
//! A coloring assigns `c_i ∈ ℂ/2ℤ` to each surgery component `L_i` and
//! `w_ν` to each colored component `K_ν` (the degree of its color). It comes
//! from a spin structure on the surgered manifold when every parallel of a
//! surgery component evaluates to `1̄`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repcat::Color;
use crate::scalar::{c64, Mod2C, ScalarContext};
use crate::snf::{from_i64, smith, IMat};

/// Form of the characteristic equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharConvention {
    /// `B c + c′ ≡ diag(B)`.
    Additive,
    /// `B (c + c′) ≡ diag(B)`.
    Multiplied,
}

/// The convention that agrees with parallels evaluating to `1̄`.
pub const CHAR_CONVENTION: CharConvention = CharConvention::Additive;

/// `c′_j = Σ_ν w_ν lk(L_j, K_ν)`.
pub fn c_prime(lk_lk: &[Vec<i64>], w: &[Mod2C]) -> Vec<Mod2C> {
    lk_lk
        .iter()
        .map(|row| row.iter().zip(w).map(|(l, x)| *x * *l).sum())
        .collect()
}

fn mat_vec(b: &[Vec<i64>], c: &[Mod2C]) -> Vec<Mod2C> {
    b.iter()
        .map(|row| row.iter().zip(c).map(|(l, x)| *x * *l).sum())
        .collect()
}

/// Left side minus right side of the characteristic equation in the given
/// convention.
pub fn char_residual_with(
    conv: CharConvention,
    b: &[Vec<i64>],
    lk_lk: &[Vec<i64>],
    c: &[Mod2C],
    w: &[Mod2C],
) -> Vec<Mod2C> {
    let cp = c_prime(lk_lk, w);
    let lhs = match conv {
        CharConvention::Additive => mat_vec(b, c)
            .into_iter()
            .zip(&cp)
            .map(|(x, y)| x + *y)
            .collect::<Vec<_>>(),
        CharConvention::Multiplied => {
            let s: Vec<Mod2C> = c.iter().zip(&cp).map(|(x, y)| *x + *y).collect();
            mat_vec(b, &s)
        }
    };
    lhs.into_iter()
        .enumerate()
        .map(|(i, x)| x - Mod2C::from_re(b[i][i] as f64))
        .collect()
}

pub fn char_residual(b: &[Vec<i64>], lk_lk: &[Vec<i64>], c: &[Mod2C], w: &[Mod2C]) -> Vec<Mod2C> {
    char_residual_with(CHAR_CONVENTION, b, lk_lk, c, w)
}

pub fn residual_is_zero(res: &[Mod2C], tol: f64) -> bool {
    res.iter().all(|x| x.is_zero(tol))
}

/// Solution set of the characteristic equation: `particular + Σ k_t·torsion_t
/// + Σ s_f·free_f` with `k_t ∈ ℤ/order_t` and `s_f ∈ ℂ/2ℤ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinSolution {
    pub particular: Vec<Mod2C>,
    /// Generators with their orders (only orders > 1 are listed).
    pub torsion: Vec<(Vec<Mod2C>, u64)>,
    /// Integer directions each carrying a free `ℂ/2ℤ` parameter.
    pub free: Vec<Vec<i64>>,
}

impl SpinSolution {
    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    /// Number of solutions, `None` when the set is infinite.
    pub fn count(&self) -> Option<u128> {
        if !self.free.is_empty() {
            return None;
        }
        Some(self.torsion.iter().map(|(_, o)| *o as u128).product())
    }

    /// Every solution, when there are finitely many.
    pub fn enumerate(&self) -> Option<Vec<Vec<Mod2C>>> {
        self.count()?;
        let mut out = vec![self.particular.clone()];
        for (g, order) in &self.torsion {
            let mut next = Vec::with_capacity(out.len() * *order as usize);
            for base in &out {
                for k in 0..*order as i64 {
                    next.push(base.iter().zip(g).map(|(x, y)| *x + *y * k).collect());
                }
            }
            out = next;
        }
        Some(out)
    }
}

/// Solves `B c ≡ diag(B) - c′` over `ℂ/2ℤ` through the Smith form of `B`.
pub fn solve_spin(b: &[Vec<i64>], lk_lk: &[Vec<i64>], w: &[Mod2C], tol: f64) -> Result<SpinSolution> {
    let m = b.len();
    for (i, row) in b.iter().enumerate() {
        if row.len() != m {
            return Err(Error::InvalidPresentation("linking matrix is not square".into()));
        }
        for (j, x) in row.iter().enumerate() {
            if b[j][i] != *x {
                return Err(Error::InvalidPresentation("linking matrix is not symmetric".into()));
            }
        }
    }
    let cp = c_prime(lk_lk, w);
    let rhs: Vec<Mod2C> = (0..m)
        .map(|i| Mod2C::from_re(b[i][i] as f64) - cp[i])
        .collect();
    let snf = smith(&from_i64(b));
    let urhs: Vec<Mod2C> = snf
        .u
        .iter()
        .map(|row| row.iter().zip(&rhs).map(|(k, x)| *x * (*k as i64)).sum())
        .collect();
    let diag = snf.diagonal();
    let v = &snf.v;
    let col = |i: usize| -> Vec<i64> { v.iter().map(|row| row[i] as i64).collect() };
    let mut y = vec![Mod2C::zero(); m];
    let mut torsion = Vec::new();
    let mut free = Vec::new();
    for i in 0..m {
        let d = diag[i];
        if d == 0 {
            if !urhs[i].is_zero(tol) {
                return Err(Error::NoSolution { row: i });
            }
            free.push(col(i));
        } else {
            y[i] = Mod2C::new(urhs[i].value() / d as f64);
            if d > 1 {
                let step = c64(2.0 / d as f64, 0.0);
                let g = col(i).iter().map(|k| Mod2C::new(step * *k as f64)).collect();
                torsion.push((g, d as u64));
            }
        }
    }
    let particular = apply(v, &y);
    Ok(SpinSolution {
        particular,
        torsion,
        free,
    })
}

fn apply(v: &IMat, y: &[Mod2C]) -> Vec<Mod2C> {
    v.iter()
        .map(|row| row.iter().zip(y).map(|(k, x)| *x * (*k as i64)).sum())
        .collect()
}

/// A framed oriented curve in the complement of `L ∪ K`, described by its
/// framing and its linking numbers with each component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub framing: i64,
    pub lk_l: Vec<i64>,
    pub lk_k: Vec<i64>,
}

/// `σ(γ) = 1̄ + f + Σ lk(γ,L_i) c_i + Σ lk(γ,K_ν) w_ν`.
pub fn eval_curve(g: &Curve, c: &[Mod2C], w: &[Mod2C]) -> Mod2C {
    let mut s = Mod2C::one() + Mod2C::from_re(g.framing as f64);
    for (l, x) in g.lk_l.iter().zip(c) {
        s += *x * *l;
    }
    for (l, x) in g.lk_k.iter().zip(w) {
        s += *x * *l;
    }
    s
}

pub fn meridian(m: usize, nu: usize, i: usize) -> Curve {
    let mut lk_l = vec![0; m];
    lk_l[i] = 1;
    Curve {
        framing: 0,
        lk_l,
        lk_k: vec![0; nu],
    }
}

/// Blackboard parallel of surgery component `i`.
pub fn parallel(b: &[Vec<i64>], lk_lk: &[Vec<i64>], i: usize) -> Curve {
    Curve {
        framing: b[i][i],
        lk_l: b[i].clone(),
        lk_k: lk_lk[i].clone(),
    }
}

/// Whether "every parallel evaluates to `1̄`" and "the residual in `conv`
/// vanishes" agree for this coloring.
pub fn calibration_agrees(
    conv: CharConvention,
    b: &[Vec<i64>],
    lk_lk: &[Vec<i64>],
    c: &[Mod2C],
    w: &[Mod2C],
    tol: f64,
) -> bool {
    let parallels_ok = (0..b.len()).all(|i| {
        eval_curve(&parallel(b, lk_lk, i), c, w).approx_eq(&Mod2C::one(), tol)
    });
    let residual_ok = residual_is_zero(&char_residual_with(conv, b, lk_lk, c, w), tol);
    parallels_ok == residual_ok
}

/// Degrees `w_ν` of the colors of `K`.
pub fn degrees(colors: &[Color]) -> Vec<Mod2C> {
    colors.iter().map(|c| c.degree()).collect()
}

/// Computable: `L` empty with a simple projective color on `K`, or every `c_i`
/// non-integral.
pub fn is_computable(ctx: &ScalarContext, c: &[Mod2C], k_colors: &[Color]) -> bool {
    if c.is_empty() {
        return has_projective_color(ctx, k_colors);
    }
    c.iter().all(|x| !x.is_integral(ctx.tol()))
}

fn has_projective_color(ctx: &ScalarContext, k_colors: &[Color]) -> bool {
    k_colors
        .iter()
        .any(|col| matches!(col.simple_label(), Some(a) if ctx.in_ddot(a)))
}

/// Admissible: a simple projective color on `K`, or some non-integral value
/// of the coloring. Meridians generate first homology, so checking `c` and
/// `w` covers every curve.
pub fn is_admissible(ctx: &ScalarContext, c: &[Mod2C], k_colors: &[Color]) -> bool {
    has_projective_color(ctx, k_colors)
        || c.iter().any(|x| !x.is_integral(ctx.tol()))
        || degrees(k_colors).iter().any(|x| !x.is_integral(ctx.tol()))
}
