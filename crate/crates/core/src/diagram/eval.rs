//! Slice-by-slice contraction of colored diagrams.

use rayon::prelude::*;

use super::word::{over_left, Diagram, Dir, Event, Trace, Turn};
use crate::error::{Error, Result};
use crate::repcat::{duality, Color, ModuleCache};
use crate::scalar::{c64, C64};

/// Default bound on the dimension of any intermediate slice space.
pub const DEFAULT_MAX_WIDTH: usize = 10_000_000;

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub max_width: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

fn strand_color(c: &Color, dir: Dir) -> Color {
    match dir {
        Dir::Up => c.clone(),
        Dir::Down => c.clone().dual(),
    }
}

/// Dense vector on a tensor product of strand spaces, position 0 most
/// significant.
struct State {
    dims: Vec<usize>,
    data: Vec<C64>,
}

impl State {
    fn split(&self, p: usize, k: usize) -> (usize, usize, usize) {
        let left: usize = self.dims[..p].iter().product();
        let mid: usize = self.dims[p..p + k].iter().product();
        let right: usize = self.dims[p + k..].iter().product();
        (left, mid, right)
    }

    /// Inserts two strands at `p` carrying the diagonal vector `Σ w_i e_i⊗e_i`.
    fn cup(&mut self, p: usize, d: usize, w: &[C64]) {
        let (left, _, right) = self.split(p, 0);
        let mut out = vec![c64(0.0, 0.0); left * d * d * right];
        for l in 0..left {
            for i in 0..d {
                let ij = i * d + i;
                for r in 0..right {
                    out[(l * d * d + ij) * right + r] = self.data[l * right + r] * w[i];
                }
            }
        }
        self.dims.splice(p..p, [d, d]);
        self.data = out;
    }

    /// Contracts strands `p, p+1` against the diagonal covector `Σ w_i e^i⊗e^i`.
    fn cap(&mut self, p: usize, w: &[C64]) {
        let d = self.dims[p];
        let (left, mid, right) = self.split(p, 2);
        let mut out = vec![c64(0.0, 0.0); left * right];
        for l in 0..left {
            for i in 0..d {
                let ij = i * d + i;
                for r in 0..right {
                    out[l * right + r] += self.data[(l * mid + ij) * right + r] * w[i];
                }
            }
        }
        self.dims.drain(p..p + 2);
        self.data = out;
    }

    fn cross(&mut self, p: usize, op: &crate::repcat::SparseOp) {
        let (left, mid, right) = self.split(p, 2);
        let mut out = vec![c64(0.0, 0.0); self.data.len()];
        for l in 0..left {
            for (i, col) in op.cols.iter().enumerate() {
                for r in 0..right {
                    let x = self.data[(l * mid + i) * right + r];
                    if x.re == 0.0 && x.im == 0.0 {
                        continue;
                    }
                    for &(o, z) in col {
                        out[(l * mid + o) * right + r] += x * z;
                    }
                }
            }
        }
        self.dims.swap(p, p + 1);
        self.data = out;
    }
}

/// Applies the word to `input` (a vector on the bottom boundary) with concrete
/// per-component colors and returns the vector on the top boundary.
pub fn evaluate_tangle(
    cache: &ModuleCache,
    diagram: &Diagram,
    trace: &Trace,
    colors: &[Color],
    input: &[C64],
    opts: EvalOptions,
) -> Result<Vec<C64>> {
    if colors.len() != trace.n_components() {
        return Err(Error::InvalidColor(format!(
            "{} colors for {} components",
            colors.len(),
            trace.n_components()
        )));
    }
    let ctx = cache.ctx();
    let mut dims = Vec::new();
    for s in &trace.slices[0] {
        let c = &colors[trace.arc_comp[s.arc]];
        dims.push(cache.module(&strand_color(c, s.dir))?.dim());
    }
    let expected: usize = dims.iter().product();
    if input.len() != expected {
        return Err(Error::InvalidColor(format!(
            "input vector has length {}, boundary space has dimension {}",
            input.len(),
            expected
        )));
    }
    let mut st = State {
        dims,
        data: input.to_vec(),
    };
    for (k, ev) in diagram.events.iter().enumerate() {
        match *ev {
            Event::Cup(p, t) => {
                let comp = trace.comp_of(k + 1, p);
                let m = cache.module(&colors[comp])?;
                let d = m.dim();
                let size = st.data.len() * d * d;
                if size > opts.max_width {
                    return Err(Error::Resource(format!(
                        "slice dimension {} exceeds limit {} at event {}",
                        size, opts.max_width, k
                    )));
                }
                let du = duality(ctx, &m);
                let v = match t {
                    Turn::L => du.coev,
                    Turn::R => du.coev_pivotal,
                };
                let w: Vec<C64> = (0..d).map(|i| v[i * d + i]).collect();
                st.cup(p, d, &w);
            }
            Event::Cap(p, t) => {
                let comp = trace.comp_of(k, p);
                let m = cache.module(&colors[comp])?;
                let d = m.dim();
                let du = duality(ctx, &m);
                let v = match t {
                    Turn::L => du.ev,
                    Turn::R => du.ev_pivotal,
                };
                let w: Vec<C64> = (0..d).map(|i| v[i * d + i]).collect();
                st.cap(p, &w);
            }
            Event::Cross(p, s) => {
                let a = trace.strand(k, p);
                let b = trace.strand(k, p + 1);
                let ca = strand_color(&colors[trace.arc_comp[a.arc]], a.dir);
                let cb = strand_color(&colors[trace.arc_comp[b.arc]], b.dir);
                let op = cache.crossing(&ca, &cb, over_left(s, a.dir, b.dir))?;
                st.cross(p, &op);
            }
        }
    }
    Ok(st.data)
}

/// All concrete color assignments of a possibly formal coloring, with weights,
/// in a fixed order.
pub fn expand_colors(colors: &[Color]) -> Vec<(C64, Vec<Color>)> {
    let mut acc: Vec<(C64, Vec<Color>)> = vec![(c64(1.0, 0.0), Vec::new())];
    for c in colors {
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
    acc
}

/// Sums `f` over the expanded terms in parallel; the reduction runs in term
/// order so results are reproducible.
pub fn sum_expanded<F>(colors: &[Color], f: F) -> Result<C64>
where
    F: Fn(&[Color]) -> Result<C64> + Sync,
{
    let terms = expand_colors(colors);
    let vals: Vec<Result<C64>> = terms
        .par_iter()
        .map(|(w, cs)| f(cs).map(|v| *w * v))
        .collect();
    let mut s = c64(0.0, 0.0);
    for v in vals {
        s += v?;
    }
    Ok(s)
}

/// Reshetikhin–Turaev value of a closed colored diagram.
pub fn evaluate_rt(
    cache: &ModuleCache,
    diagram: &Diagram,
    colors: &[Color],
    opts: EvalOptions,
) -> Result<C64> {
    if !diagram.is_closed() {
        return Err(Error::Malformed {
            index: 0,
            message: "evaluate_rt needs a closed diagram".into(),
        });
    }
    let trace = diagram.trace()?;
    for c in colors {
        c.validate(cache.ctx())?;
    }
    sum_expanded(colors, |cs| {
        let out = evaluate_tangle(cache, diagram, &trace, cs, &[c64(1.0, 0.0)], opts)?;
        Ok(out[0])
    })
}
