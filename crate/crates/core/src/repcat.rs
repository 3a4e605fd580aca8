//! Weight modules of the unrolled quantum group and their ribbon structure.
//!
//! Conventions:
//! * coproduct `Δ(E) = 1⊗E + E⊗K`, `Δ(F) = K⁻¹⊗F + F⊗1`, `Δ(H) = H⊗1 + 1⊗H`;
//! * antipode `S(E) = -EK⁻¹`, `S(F) = -KF`, `S(H) = -H`, used for duals;
//! * `R = q^{H⊗H/2} Σ_n q^{n(n-1)/2} {1}ⁿ/[n]! Eⁿ⊗Fⁿ` and `c_{V,W} = τ∘R`;
//! * pivot `g = K^{1-r}`.
//!
//! Every module is kept in a weight basis, so `H` and `K` are diagonal and
//! stored only through their eigenvalues.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{c64, Mod2C, ScalarContext, C64};

pub type CMatrix = DMatrix<C64>;

/// A module label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Color {
    /// `V_α` with `α ∈ (ℂ∖ℤ) ∪ rℤ`.
    Simple(C64),
    /// `ε^k`.
    Eps(i64),
    Dual(Box<Color>),
    Tensor(Vec<Color>),
    /// Formal complex combination, expanded multilinearly before evaluation.
    Formal(Vec<(C64, Color)>),
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Simple(a) => write!(f, "V[{}]", fmt_c(*a)),
            Color::Eps(k) => write!(f, "eps^{}", k),
            Color::Dual(c) => write!(f, "({})*", c),
            Color::Tensor(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(" ⊗ "))
            }
            Color::Formal(ts) => {
                let parts: Vec<String> = ts
                    .iter()
                    .map(|(w, c)| format!("({})·{}", fmt_c(*w), c))
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}

impl Color {
    pub fn simple(re: f64, im: f64) -> Color {
        Color::Simple(c64(re, im))
    }

    pub fn dual(self) -> Color {
        Color::Dual(Box::new(self))
    }

    /// Exact cache key; complex labels are keyed by their bit patterns.
    pub fn key(&self) -> String {
        match self {
            Color::Simple(a) => format!("S{:x}:{:x}", a.re.to_bits(), a.im.to_bits()),
            Color::Eps(k) => format!("E{}", k),
            Color::Dual(c) => format!("D({})", c.key()),
            Color::Tensor(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.key()).collect();
                format!("T({})", parts.join(","))
            }
            Color::Formal(ts) => {
                let parts: Vec<String> = ts
                    .iter()
                    .map(|(w, c)| format!("{:x}:{:x}*{}", w.re.to_bits(), w.im.to_bits(), c.key()))
                    .collect();
                format!("F({})", parts.join("+"))
            }
        }
    }

    pub fn is_formal(&self) -> bool {
        match self {
            Color::Formal(_) => true,
            Color::Dual(c) => c.is_formal(),
            Color::Tensor(cs) => cs.iter().any(|c| c.is_formal()),
            _ => false,
        }
    }

    /// Degree in `ℂ/2ℤ`: `V_α` sits in degree `α+1`.
    pub fn degree(&self) -> Mod2C {
        match self {
            Color::Simple(a) => Mod2C::new(*a + 1.0),
            Color::Eps(_) => Mod2C::zero(),
            Color::Dual(c) => -c.degree(),
            Color::Tensor(cs) => cs.iter().map(|c| c.degree()).sum(),
            Color::Formal(ts) => ts.first().map(|(_, c)| c.degree()).unwrap_or(Mod2C::zero()),
        }
    }

    /// Checks the label constraints and degree homogeneity of formal sums.
    pub fn validate(&self, ctx: &ScalarContext) -> Result<()> {
        match self {
            Color::Simple(a) => {
                if ctx.in_ddot(*a) {
                    Ok(())
                } else {
                    Err(Error::InvalidColor(format!(
                        "V[{}] is not a simple projective label",
                        fmt_c(*a)
                    )))
                }
            }
            Color::Eps(_) => Ok(()),
            Color::Dual(c) => c.validate(ctx),
            Color::Tensor(cs) => cs.iter().try_for_each(|c| c.validate(ctx)),
            Color::Formal(ts) => {
                if ts.is_empty() {
                    return Err(Error::InvalidColor("empty formal combination".into()));
                }
                let d0 = ts[0].1.degree();
                for (_, c) in ts {
                    c.validate(ctx)?;
                    if !c.degree().approx_eq(&d0, ctx.tol()) {
                        return Err(Error::InvalidColor(format!(
                            "formal combination is not degree-homogeneous: {}",
                            self
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Multilinear expansion into weighted concrete colors (no `Formal` left).
    pub fn expand(&self) -> Vec<(C64, Color)> {
        match self {
            Color::Simple(_) | Color::Eps(_) => vec![(c64(1.0, 0.0), self.clone())],
            Color::Dual(c) => c
                .expand()
                .into_iter()
                .map(|(w, c)| (w, c.dual()))
                .collect(),
            Color::Tensor(cs) => {
                let mut acc: Vec<(C64, Vec<Color>)> = vec![(c64(1.0, 0.0), Vec::new())];
                for c in cs {
                    let terms = c.expand();
                    let mut next = Vec::with_capacity(acc.len() * terms.len());
                    for (w0, prefix) in &acc {
                        for (w1, t) in &terms {
                            let mut p = prefix.clone();
                            p.push(t.clone());
                            next.push((*w0 * *w1, p));
                        }
                    }
                    acc = next;
                }
                acc.into_iter().map(|(w, p)| (w, Color::Tensor(p))).collect()
            }
            Color::Formal(ts) => ts
                .iter()
                .flat_map(|(w, c)| c.expand().into_iter().map(move |(w2, c2)| (*w * w2, c2)))
                .collect(),
        }
    }

    /// The label `α` when this is `V_α` with `α` in the projective index set.
    pub fn simple_label(&self) -> Option<C64> {
        match self {
            Color::Simple(a) => Some(*a),
            _ => None,
        }
    }
}

/// A finite-dimensional weight module in a weight basis.
#[derive(Debug, Clone)]
pub struct ModuleData {
    pub weights: Vec<C64>,
    pub e: CMatrix,
    pub f: CMatrix,
}

impl ModuleData {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn k_diag(&self, ctx: &ScalarContext) -> Vec<C64> {
        self.weights.iter().map(|w| ctx.qpow(*w)).collect()
    }

    pub fn k_matrix(&self, ctx: &ScalarContext) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.k_diag(ctx)))
    }

    pub fn k_inv_matrix(&self, ctx: &ScalarContext) -> CMatrix {
        let d: Vec<C64> = self.weights.iter().map(|w| ctx.qpow(-*w)).collect();
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
    }

    pub fn h_matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.weights.clone()))
    }

    /// Eigenvalues of the pivot `K^{1-r}`.
    pub fn pivot_diag(&self, ctx: &ScalarContext) -> Vec<C64> {
        let e = 1.0 - ctx.rf();
        self.weights.iter().map(|w| ctx.qpow(*w * e)).collect()
    }

    pub fn dual(&self, ctx: &ScalarContext) -> ModuleData {
        let k = self.k_matrix(ctx);
        let kinv = self.k_inv_matrix(ctx);
        ModuleData {
            weights: self.weights.iter().map(|w| -*w).collect(),
            e: -(&self.e * &kinv).transpose(),
            f: -(&k * &self.f).transpose(),
        }
    }

    pub fn tensor(&self, other: &ModuleData, ctx: &ScalarContext) -> ModuleData {
        let id_a = CMatrix::identity(self.dim(), self.dim());
        let id_b = CMatrix::identity(other.dim(), other.dim());
        let e = id_a.kronecker(&other.e) + self.e.kronecker(&other.k_matrix(ctx));
        let f = self.k_inv_matrix(ctx).kronecker(&other.f) + self.f.kronecker(&id_b);
        let mut weights = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.weights {
            for b in &other.weights {
                weights.push(*a + *b);
            }
        }
        ModuleData { weights, e, f }
    }

    /// Frobenius residuals of the defining relations, in the order
    /// `KEK⁻¹=q²E`, `KFK⁻¹=q⁻²F`, `[E,F]=(K-K⁻¹)/(q-q⁻¹)`, `[H,E]=2E`, `[H,F]=-2F`.
    /// `HK = KH` holds identically since both are diagonal.
    pub fn relation_residuals(&self, ctx: &ScalarContext) -> [f64; 5] {
        let k = self.k_matrix(ctx);
        let kinv = self.k_inv_matrix(ctx);
        let h = self.h_matrix();
        let q = ctx.q();
        let r1 = (&k * &self.e * &kinv - &self.e * (q * q)).norm();
        let r2 = (&k * &self.f * &kinv - &self.f / (q * q)).norm();
        let comm = &self.e * &self.f - &self.f * &self.e;
        let r3 = (comm - (&k - &kinv) / (q - q.inv())).norm();
        let r4 = (&h * &self.e - &self.e * &h - &self.e * c64(2.0, 0.0)).norm();
        let r5 = (&h * &self.f - &self.f * &h + &self.f * c64(2.0, 0.0)).norm();
        [r1, r2, r3, r4, r5]
    }

    pub fn nilpotency_residual(&self, r: u32) -> (f64, f64) {
        let mut e = CMatrix::identity(self.dim(), self.dim());
        let mut f = e.clone();
        for _ in 0..r {
            e = &e * &self.e;
            f = &f * &self.f;
        }
        (e.norm(), f.norm())
    }
}

/// `V_α`: basis `v_0..v_{r-1}`, `v_0` of highest weight `α+r-1`,
/// `F v_i = v_{i+1}`, `E v_i = [i][i-α] v_{i-1}`.
pub fn build_simple(ctx: &ScalarContext, alpha: C64) -> Result<ModuleData> {
    if !ctx.in_ddot(alpha) {
        return Err(Error::InvalidColor(format!(
            "V[{}] is not a simple projective label",
            fmt_c(alpha)
        )));
    }
    let r = ctx.r() as usize;
    let top = alpha + (ctx.rf() - 1.0);
    let weights = (0..r).map(|i| top - 2.0 * i as f64).collect();
    let mut e = CMatrix::zeros(r, r);
    let mut f = CMatrix::zeros(r, r);
    for i in 0..r {
        if i + 1 < r {
            f[(i + 1, i)] = c64(1.0, 0.0);
        }
        if i > 0 {
            let fi = c64(i as f64, 0.0);
            e[(i - 1, i)] = ctx.qint(fi) * ctx.qint(fi - alpha);
        }
    }
    Ok(ModuleData { weights, e, f })
}

/// `ε^k`: one-dimensional, weight `kr`, `E = F = 0`.
pub fn build_eps(ctx: &ScalarContext, k: i64) -> ModuleData {
    ModuleData {
        weights: vec![c64((k * ctx.r() as i64) as f64, 0.0)],
        e: CMatrix::zeros(1, 1),
        f: CMatrix::zeros(1, 1),
    }
}

/// Builds the module of a concrete (non-formal) color.
pub fn build_module(ctx: &ScalarContext, color: &Color) -> Result<ModuleData> {
    match color {
        Color::Simple(a) => build_simple(ctx, *a),
        Color::Eps(k) => Ok(build_eps(ctx, *k)),
        Color::Dual(c) => Ok(build_module(ctx, c)?.dual(ctx)),
        Color::Tensor(cs) => {
            let mut acc = build_eps(ctx, 0);
            for c in cs {
                acc = acc.tensor(&build_module(ctx, c)?, ctx);
            }
            Ok(acc)
        }
        Color::Formal(_) => Err(Error::InvalidColor(
            "formal colors must be expanded before building modules".into(),
        )),
    }
}

/// Dense `R` acting on `V⊗W` (first factor major).
pub fn r_matrix(ctx: &ScalarContext, v: &ModuleData, w: &ModuleData) -> CMatrix {
    let (dv, dw) = (v.dim(), w.dim());
    let n = dv * dw;
    let q1 = ctx.q() - ctx.q().inv();
    let mut sum = CMatrix::zeros(n, n);
    let mut en = CMatrix::identity(dv, dv);
    let mut fnn = CMatrix::identity(dw, dw);
    for k in 0..ctx.r() {
        if en.norm() == 0.0 || fnn.norm() == 0.0 {
            break;
        }
        let kf = k as f64;
        let coef = ctx.qpow_f(kf * (kf - 1.0) / 2.0) * q1.powu(k) / ctx.qfactorial(k);
        sum += en.kronecker(&fnn) * coef;
        en = &en * &v.e;
        fnn = &fnn * &w.f;
    }
    for a in 0..dv {
        for b in 0..dw {
            let s = ctx.qpow(v.weights[a] * w.weights[b] / 2.0);
            let row = a * dw + b;
            for col in 0..n {
                sum[(row, col)] *= s;
            }
        }
    }
    sum
}

/// Flip `τ: V⊗W → W⊗V` as a permutation matrix.
fn flip_matrix(dv: usize, dw: usize) -> CMatrix {
    let n = dv * dw;
    let mut p = CMatrix::zeros(n, n);
    for a in 0..dv {
        for b in 0..dw {
            p[(b * dv + a, a * dw + b)] = c64(1.0, 0.0);
        }
    }
    p
}

/// Braiding `c_{V,W} = τ∘R : V⊗W → W⊗V`.
pub fn braiding(ctx: &ScalarContext, v: &ModuleData, w: &ModuleData) -> CMatrix {
    flip_matrix(v.dim(), w.dim()) * r_matrix(ctx, v, w)
}

/// `c_{W,V}⁻¹ : V⊗W → W⊗V`, the crossing where the right strand passes over.
pub fn inverse_braiding(ctx: &ScalarContext, v: &ModuleData, w: &ModuleData) -> CMatrix {
    let c = braiding(ctx, w, v);
    c.try_inverse()
        .expect("braiding is invertible: R is unipotent up to a diagonal factor")
}

/// The ribbon twist of a module computed as a partial trace of the braiding
/// against the pivot: `θ[x,i] = Σ_j c[(x,j),(i,j)] g_j`.
pub fn twist_operator(ctx: &ScalarContext, v: &ModuleData) -> CMatrix {
    let d = v.dim();
    let c = braiding(ctx, v, v);
    let g = v.pivot_diag(ctx);
    let mut t = CMatrix::zeros(d, d);
    for x in 0..d {
        for i in 0..d {
            let mut s = c64(0.0, 0.0);
            for j in 0..d {
                s += c[(x * d + j, i * d + j)] * g[j];
            }
            t[(x, i)] = s;
        }
    }
    t
}

/// The twist as a scalar; fails when the twist is not a multiple of the identity.
pub fn twist_matrix(ctx: &ScalarContext, v: &ModuleData) -> Result<C64> {
    let t = twist_operator(ctx, v);
    let s = t[(0, 0)];
    let resid = (&t - CMatrix::identity(v.dim(), v.dim()) * s).norm();
    if resid > 1e-8 * s.norm().max(1.0) {
        return Err(Error::NotScalar(format!(
            "twist deviates from a scalar by {:.3e}",
            resid
        )));
    }
    Ok(s)
}

/// Duality morphisms of `V`, written as vectors/covectors on two-fold tensors.
#[derive(Debug, Clone)]
pub struct Duality {
    /// `coev: 1 → V⊗V*`, `Σ v_i ⊗ v^i`.
    pub coev: Vec<C64>,
    /// `ev: V*⊗V → 1`, `f⊗v ↦ f(v)`.
    pub ev: Vec<C64>,
    /// `coev': 1 → V*⊗V`, `Σ v^i ⊗ g⁻¹v_i`.
    pub coev_pivotal: Vec<C64>,
    /// `ev': V⊗V* → 1`, `v⊗f ↦ f(gv)`.
    pub ev_pivotal: Vec<C64>,
}

pub fn duality(ctx: &ScalarContext, v: &ModuleData) -> Duality {
    let d = v.dim();
    let g = v.pivot_diag(ctx);
    let mut coev = vec![c64(0.0, 0.0); d * d];
    let mut coev_p = coev.clone();
    let mut ev_p = coev.clone();
    for i in 0..d {
        coev[i * d + i] = c64(1.0, 0.0);
        coev_p[i * d + i] = g[i].inv();
        ev_p[i * d + i] = g[i];
    }
    Duality {
        ev: coev.clone(),
        coev,
        coev_pivotal: coev_p,
        ev_pivotal: ev_p,
    }
}

/// Nonzero `X` with `X·A_V = A_W·X` for `A ∈ {E, F, H}`, if one exists.
pub fn intertwiner(ctx: &ScalarContext, v: &ModuleData, w: &ModuleData) -> Option<CMatrix> {
    let (dv, dw) = (v.dim(), w.dim());
    if dv != dw {
        return None;
    }
    let d = dv;
    let id = CMatrix::identity(d, d);
    // vec(X A) = (Aᵀ ⊗ I) vec X, vec(B X) = (I ⊗ B) vec X in column-major vec
    let block = |a: &CMatrix, b: &CMatrix| a.transpose().kronecker(&id) - id.kronecker(b);
    let rows = [
        block(&v.e, &w.e),
        block(&v.f, &w.f),
        block(&v.h_matrix(), &w.h_matrix()),
    ];
    let mut m = CMatrix::zeros(3 * d * d, d * d);
    for (k, b) in rows.iter().enumerate() {
        m.view_mut((k * d * d, 0), (d * d, d * d)).copy_from(b);
    }
    let mhm = m.adjoint() * &m;
    let eig = mhm.clone().symmetric_eigen();
    let (idx, lam) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, l)| if *l < acc.1 { (i, *l) } else { acc });
    let scale = mhm.norm().max(1.0);
    if lam > 1e-16 * scale * scale.max(1.0) && lam > 1e-12 {
        return None;
    }
    let vec = eig.eigenvectors.column(idx).into_owned();
    let x = CMatrix::from_column_slice(d, d, vec.as_slice());
    let resid = (&x * &v.e - &w.e * &x).norm()
        + (&x * &v.f - &w.f * &x).norm()
        + (&x * v.h_matrix() - w.h_matrix() * &x).norm();
    let _ = ctx;
    if resid < 1e-7 * x.norm() {
        Some(x)
    } else {
        None
    }
}

/// Checks `V_α* ≅ V_{-α}`: equal weight multisets and a nonzero intertwiner.
pub fn dual_iso_check(ctx: &ScalarContext, alpha: C64) -> Result<bool> {
    let v = build_simple(ctx, alpha)?;
    let vd = v.dual(ctx);
    let w = build_simple(ctx, -alpha)?;
    let mut a: Vec<C64> = vd.weights.clone();
    let mut b: Vec<C64> = w.weights.clone();
    let key = |z: &C64| (z.re, z.im);
    a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    b.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    let same = a.iter().zip(&b).all(|(x, y)| (*x - *y).norm() < ctx.tol());
    Ok(same && intertwiner(ctx, &vd, &w).is_some())
}

/// Sparse two-strand operator: for each input index, its nonzero outputs.
#[derive(Debug, Clone)]
pub struct SparseOp {
    pub in_dims: (usize, usize),
    pub out_dims: (usize, usize),
    pub cols: Vec<Vec<(usize, C64)>>,
}

impl SparseOp {
    fn from_dense(m: &CMatrix, in_dims: (usize, usize), out_dims: (usize, usize)) -> Self {
        let maxabs = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let cut = maxabs * 1e-15;
        let cols = (0..m.ncols())
            .map(|c| {
                (0..m.nrows())
                    .filter_map(|r| {
                        let z = m[(r, c)];
                        (z.norm() > cut).then_some((r, z))
                    })
                    .collect()
            })
            .collect();
        SparseOp {
            in_dims,
            out_dims,
            cols,
        }
    }
}

/// Per-context memo of modules and crossing operators.
///
/// Reads take a shared lock; concurrent inserts of the same key are
/// idempotent because values are pure functions of the key.
#[derive(Debug)]
pub struct ModuleCache {
    ctx: ScalarContext,
    modules: RwLock<HashMap<String, Arc<ModuleData>>>,
    crossings: RwLock<HashMap<(String, String, bool), Arc<SparseOp>>>,
}

impl ModuleCache {
    pub fn new(ctx: ScalarContext) -> Self {
        ModuleCache {
            ctx,
            modules: RwLock::new(HashMap::new()),
            crossings: RwLock::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &ScalarContext {
        &self.ctx
    }

    pub fn module(&self, color: &Color) -> Result<Arc<ModuleData>> {
        let key = color.key();
        if let Some(m) = self.modules.read().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(match color {
            Color::Dual(c) => self.module(c)?.dual(&self.ctx),
            _ => build_module(&self.ctx, color)?,
        });
        self.modules
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| m.clone());
        Ok(m)
    }

    /// Crossing operator `X⊗Y → Y⊗X`; `left_over` selects `c_{X,Y}`,
    /// otherwise `c_{Y,X}⁻¹`.
    pub fn crossing(&self, x: &Color, y: &Color, left_over: bool) -> Result<Arc<SparseOp>> {
        let key = (x.key(), y.key(), left_over);
        if let Some(op) = self.crossings.read().unwrap().get(&key) {
            return Ok(op.clone());
        }
        let mx = self.module(x)?;
        let my = self.module(y)?;
        let dense = if left_over {
            braiding(&self.ctx, &mx, &my)
        } else {
            inverse_braiding(&self.ctx, &mx, &my)
        };
        let op = Arc::new(SparseOp::from_dense(
            &dense,
            (mx.dim(), my.dim()),
            (my.dim(), mx.dim()),
        ));
        self.crossings
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| op.clone());
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ctx(r: i64) -> ScalarContext {
        ScalarContext::new(r).unwrap()
    }

    #[test]
    fn simple_module_weights() {
        let c = ctx(4);
        let v = build_simple(&c, c64(0.5, 0.0)).unwrap();
        let w: Vec<f64> = v.weights.iter().map(|z| z.re).collect();
        assert_eq!(w, vec![3.5, 1.5, -0.5, -2.5]);
        // highest and lowest weight vectors
        assert!(v.e.column(0).norm() == 0.0);
        assert!(v.f.column(3).norm() == 0.0);
    }

    #[test]
    fn invalid_simple_label() {
        let c = ctx(4);
        assert!(build_simple(&c, c64(1.0, 0.0)).is_err());
        assert!(build_simple(&c, c64(4.0, 0.0)).is_ok());
        assert!(build_simple(&c, c64(0.0, 0.0)).is_ok());
    }

    #[test]
    fn relations_hold() {
        for r in [4, 8] {
            let c = ctx(r);
            for a in [c64(0.3, 0.0), c64(0.7, 0.2), c64(-1.4, 0.5), c64(0.0, 0.0)] {
                let v = build_simple(&c, a).unwrap();
                for (i, res) in v.relation_residuals(&c).iter().enumerate() {
                    assert!(*res < 1e-10, "r={r} a={a} relation {i}: {res}");
                }
                let (e, f) = v.nilpotency_residual(c.r());
                assert_eq!((e, f), (0.0, 0.0));
                let d = v.dual(&c);
                assert!(d.relation_residuals(&c).iter().all(|x| *x < 1e-10));
            }
        }
    }

    #[test]
    fn eps_modules() {
        let c = ctx(4);
        let e1 = build_eps(&c, 1);
        assert_eq!(e1.weights[0], c64(4.0, 0.0));
        assert!((e1.k_diag(&c)[0] + 1.0).norm() < 1e-12);
        let e0 = build_eps(&c, 0);
        assert_eq!(e0.weights[0], c64(0.0, 0.0));
        assert!((e0.k_diag(&c)[0] - 1.0).norm() < 1e-12);
        let e2 = build_eps(&c, 2);
        assert_eq!(e2.weights[0], c64(8.0, 0.0));
        assert!((e2.k_diag(&c)[0] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn tensor_relations() {
        let c = ctx(4);
        let a = build_simple(&c, c64(0.3, 0.0)).unwrap();
        let b = build_simple(&c, c64(0.6, -0.1)).unwrap();
        let t = a.tensor(&b, &c);
        assert!(t.relation_residuals(&c).iter().all(|x| *x < 1e-9));
    }

    #[test]
    fn braiding_is_module_map() {
        let c = ctx(4);
        let a = build_simple(&c, c64(0.3, 0.0)).unwrap();
        let b = build_simple(&c, c64(0.6, -0.1)).unwrap();
        let ab = a.tensor(&b, &c);
        let ba = b.tensor(&a, &c);
        let br = braiding(&c, &a, &b);
        assert!((&br * &ab.e - &ba.e * &br).norm() < 1e-9);
        assert!((&br * &ab.f - &ba.f * &br).norm() < 1e-9);
    }

    #[test]
    fn yang_baxter_three_labels() {
        let c = ctx(4);
        let mods: Vec<ModuleData> = [c64(0.3, 0.0), c64(0.7, 0.2), c64(1.5, -0.3)]
            .iter()
            .map(|a| build_simple(&c, *a).unwrap())
            .collect();
        let (u, v, w) = (&mods[0], &mods[1], &mods[2]);
        let id = |m: &ModuleData| CMatrix::identity(m.dim(), m.dim());
        // (c_{V,W} ⊗ 1)(1 ⊗ c_{U,W})(c_{U,V} ⊗ 1) = (1 ⊗ c_{U,V})(c_{U,W} ⊗ 1)(1 ⊗ c_{V,W})
        let lhs = braiding(&c, v, w).kronecker(&id(u))
            * id(v).kronecker(&braiding(&c, u, w))
            * braiding(&c, u, v).kronecker(&id(w));
        let rhs = id(w).kronecker(&braiding(&c, u, v))
            * braiding(&c, u, w).kronecker(&id(v))
            * id(u).kronecker(&braiding(&c, v, w));
        assert!((lhs - rhs).norm() < 1e-8);
    }

    #[test]
    fn twist_matches_closed_form() {
        for r in [4, 8] {
            let c = ctx(r);
            for a in [c64(0.5, 0.0), c64(0.3, 0.2), c64(2.2, -0.4), c64(r as f64 - 1.0 + 0.5, 0.0)] {
                let v = build_simple(&c, a).unwrap();
                let t = twist_matrix(&c, &v).unwrap();
                assert!((t - c.twist_scalar(a)).norm() < 1e-9, "r={r} a={a}");
            }
        }
        let c = ctx(4);
        let v = build_simple(&c, c64(0.5, 0.0)).unwrap();
        let t = twist_matrix(&c, &v).unwrap();
        assert!((t - C64::from_polar(1.0, -35.0 * PI / 32.0)).norm() < 1e-9);
    }

    #[test]
    fn twist_of_non_simple_is_rejected() {
        let c = ctx(4);
        let a = build_simple(&c, c64(0.3, 0.0)).unwrap();
        let t = a.tensor(&a, &c);
        assert!(matches!(twist_matrix(&c, &t), Err(Error::NotScalar(_))));
    }

    #[test]
    fn eps_braiding_rules() {
        let c = ctx(4);
        let eps = build_eps(&c, 1);
        // ε past ε is the plain flip
        let b = braiding(&c, &eps, &eps);
        assert!((b[(0, 0)] - 1.0).norm() < 1e-12);
        // double braiding of ε with a degree-ᾱ module is q^{rᾱ}
        let alpha = c64(0.3, 0.1);
        let v = build_simple(&c, alpha).unwrap();
        let dbl = braiding(&c, &v, &eps) * braiding(&c, &eps, &v);
        let expect = Color::Simple(alpha).degree().q_r_power(&c);
        let id = CMatrix::identity(v.dim(), v.dim());
        assert!((dbl - id * expect).norm() < 1e-9);
        // twist on ε and the ε loop
        assert!((twist_matrix(&c, &eps).unwrap() + 1.0).norm() < 1e-12);
        let g = eps.pivot_diag(&c);
        assert!((g[0] + 1.0).norm() < 1e-12);
    }

    #[test]
    fn zigzag_identities() {
        let c = ctx(4);
        let v = build_simple(&c, c64(0.3, 0.0)).unwrap();
        let d = v.dim();
        let du = duality(&c, &v);
        // (1_V ⊗ ev)(coev ⊗ 1_V) = 1_V: entry [x, i] = Σ_j coev[x,j] ev[j,i]
        let mut z1 = CMatrix::zeros(d, d);
        let mut z2 = CMatrix::zeros(d, d);
        for x in 0..d {
            for i in 0..d {
                let mut s1 = c64(0.0, 0.0);
                let mut s2 = c64(0.0, 0.0);
                for j in 0..d {
                    s1 += du.coev[x * d + j] * du.ev[j * d + i];
                    // (ev' ⊗ 1_V)(1_V ⊗ coev') = 1_V
                    s2 += du.ev_pivotal[i * d + j] * du.coev_pivotal[j * d + x];
                }
                z1[(x, i)] = s1;
                z2[(x, i)] = s2;
            }
        }
        let id = CMatrix::identity(d, d);
        assert!((z1 - &id).norm() < 1e-10);
        assert!((z2 - &id).norm() < 1e-10);
    }

    #[test]
    fn pivotal_coevaluation_is_invariant() {
        let c = ctx(4);
        let v = build_simple(&c, c64(0.3, 0.1)).unwrap();
        let vd = v.dual(&c);
        let du = duality(&c, &v);
        let t = vd.tensor(&v, &c);
        let vec = nalgebra::DVector::from_vec(du.coev_pivotal.clone());
        assert!((&t.e * &vec).norm() < 1e-10);
        assert!((&t.f * &vec).norm() < 1e-10);
        let t2 = v.tensor(&vd, &c);
        let vec2 = nalgebra::DVector::from_vec(du.coev.clone());
        assert!((&t2.e * &vec2).norm() < 1e-10);
        assert!((&t2.f * &vec2).norm() < 1e-10);
    }

    #[test]
    fn unknot_quantum_dimension_vanishes() {
        let c = ctx(4);
        let v = build_simple(&c, c64(0.3, 0.0)).unwrap();
        let tr: C64 = v.pivot_diag(&c).iter().sum();
        assert!(tr.norm() < 1e-10);
        let eps = build_eps(&c, 1);
        let tr: C64 = eps.pivot_diag(&c).iter().sum();
        assert!((tr + 1.0).norm() < 1e-12);
    }

    #[test]
    fn dual_is_isomorphic_to_negated_label() {
        let c = ctx(4);
        assert!(dual_iso_check(&c, c64(0.3, 0.0)).unwrap());
        assert!(dual_iso_check(&c, c64(-0.3, 0.0)).unwrap());
        assert!(dual_iso_check(&c, c64(0.4, 0.7)).unwrap());
        // V_α* is not V_α in general
        let v = build_simple(&c, c64(0.3, 0.0)).unwrap();
        assert!(intertwiner(&c, &v.dual(&c), &v).is_none());
    }

    #[test]
    fn shift_by_r_is_tensor_with_eps() {
        let c = ctx(4);
        let a = c64(0.3, 0.2);
        let lhs = build_simple(&c, a).unwrap().tensor(&build_eps(&c, 1), &c);
        let rhs = build_simple(&c, a + 4.0).unwrap();
        assert!(intertwiner(&c, &lhs, &rhs).is_some());
    }

    #[test]
    fn color_degrees_and_expansion() {
        let c = ctx(4);
        let v = Color::simple(0.3, 0.0);
        assert!(v.degree().approx_eq(&Mod2C::from_re(1.3), 1e-12));
        assert!(v.clone().dual().degree().approx_eq(&Mod2C::from_re(0.7), 1e-12));
        let t = Color::Tensor(vec![v.clone(), Color::Eps(1)]);
        assert!(t.degree().approx_eq(&Mod2C::from_re(1.3), 1e-12));
        let f = Color::Formal(vec![(c64(2.0, 0.0), v.clone()), (c64(-1.0, 0.0), Color::simple(2.3, 0.0))]);
        assert!(f.validate(&c).is_ok());
        let bad = Color::Formal(vec![(c64(1.0, 0.0), v.clone()), (c64(1.0, 0.0), Color::simple(1.3, 0.0))]);
        assert!(bad.validate(&c).is_err());
        let tf = Color::Tensor(vec![f.clone(), f]);
        assert_eq!(tf.expand().len(), 4);
    }
}
