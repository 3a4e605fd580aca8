//! Cutting a closed component into a 1-1 tangle and the renormalized value F′.

use super::eval::{evaluate_tangle, sum_expanded, EvalOptions};
use super::word::{sign_for, Diagram, Dir, Event, Trace, Turn};
use crate::error::{Error, Result};
use crate::repcat::{Color, ModuleCache};
use crate::scalar::{c64, C64};

/// A closed diagram cut open along one component.
#[derive(Debug, Clone)]
pub struct Opened {
    pub diagram: Diagram,
    /// `comp_map[c]` is the id in the opened word of original component `c`.
    pub comp_map: Vec<usize>,
}

/// Cuts component `comp` at the bottom of its first cup.
///
/// The incoming end enters from the bottom boundary along one side of the
/// diagram, the outgoing end leaves along the same side to the top. Both
/// detours cross over every strand in their way, so the closure is isotopic
/// to the original link.
pub fn open_word(d: &Diagram, t: &Trace, comp: usize) -> Result<Opened> {
    if !d.is_closed() {
        return Err(Error::InvalidOpening(comp, "diagram is not closed".into()));
    }
    if comp >= t.n_components() {
        return Err(Error::InvalidOpening(comp, "no such component".into()));
    }
    let e = t.components[comp]
        .first_cup
        .expect("closed components start at a cup");
    let (p, turn) = match d.events[e] {
        Event::Cup(p, turn) => (p, turn),
        _ => unreachable!("first_cup points at a cup"),
    };
    let slice = &t.slices[e];
    let w = slice.len();
    let mut events = Vec::with_capacity(d.events.len() + 2 * w + 1);
    match turn {
        Turn::L => {
            // detour along the right edge
            events.extend_from_slice(&d.events[..e]);
            for j in (p..w).rev() {
                events.push(Event::Cross(j, sign_for(false, slice[j].dir, Dir::Up)));
            }
            events.push(Event::Cup(p + 1, Turn::R));
            for (i, j) in (p + 2..w + 2).enumerate() {
                let other = slice[p + i].dir;
                events.push(Event::Cross(j, sign_for(true, Dir::Up, other)));
            }
            events.extend_from_slice(&d.events[e + 1..]);
        }
        Turn::R => {
            // detour along the left edge; everything else shifts right by one
            let shift = |ev: &Event| ev.with_pos(ev.pos() + 1);
            events.extend(d.events[..e].iter().map(shift));
            for j in 0..p {
                events.push(Event::Cross(j, sign_for(true, Dir::Up, slice[j].dir)));
            }
            events.push(Event::Cup(p, Turn::L));
            for j in (0..p).rev() {
                events.push(Event::Cross(j, sign_for(false, slice[j].dir, Dir::Up)));
            }
            events.extend(d.events[e + 1..].iter().map(shift));
        }
    }
    let mut comp_map = vec![0; t.n_components()];
    let mut next = 1;
    for (c, slot) in comp_map.iter_mut().enumerate() {
        if c != comp {
            *slot = next;
            next += 1;
        }
    }
    Ok(Opened {
        diagram: Diagram {
            bottom: vec![Dir::Up],
            events,
        },
        comp_map,
    })
}

/// Opens `comp`, checking that it carries a simple projective color.
pub fn open_component(
    cache: &ModuleCache,
    d: &Diagram,
    colors: &[Color],
    comp: usize,
) -> Result<Opened> {
    let t = d.trace()?;
    let c = colors
        .get(comp)
        .ok_or_else(|| Error::InvalidOpening(comp, "no such component".into()))?;
    match c.simple_label() {
        Some(a) if cache.ctx().in_ddot(a) => open_word(d, &t, comp),
        _ => Err(Error::InvalidOpening(
            comp,
            format!("color {} is not a simple projective module", c),
        )),
    }
}

/// The scalar by which an opened tangle acts, for concrete colors of the
/// remaining components.
fn bracket_concrete(
    cache: &ModuleCache,
    opened: &Diagram,
    trace: &Trace,
    colors: &[Color],
    opts: EvalOptions,
) -> Result<C64> {
    let dim = cache.module(&colors[0])?.dim();
    let mut input = vec![c64(0.0, 0.0); dim];
    input[0] = c64(1.0, 0.0);
    let out = evaluate_tangle(cache, opened, trace, colors, &input, opts)?;
    let s = out[0];
    let off: f64 = out[1..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if off > 1e-8 * s.norm().max(1.0) {
        return Err(Error::NotScalar(format!(
            "opened tangle does not act diagonally (off-diagonal norm {:.3e})",
            off
        )));
    }
    Ok(s)
}

/// `⟨T⟩` for the tangle obtained by opening `comp`; colors may be formal
/// except on the opened component.
pub fn bracket(
    cache: &ModuleCache,
    d: &Diagram,
    colors: &[Color],
    comp: usize,
    opts: EvalOptions,
) -> Result<C64> {
    let op = open_component(cache, d, colors, comp)?;
    let ot = op.diagram.trace()?;
    let mut mapped = vec![Color::Eps(0); colors.len()];
    for (c, col) in colors.iter().enumerate() {
        mapped[op.comp_map[c]] = col.clone();
    }
    for c in &mapped {
        c.validate(cache.ctx())?;
    }
    sum_expanded(&mapped, |cs| bracket_concrete(cache, &op.diagram, &ot, cs, opts))
}

fn projective_terms(cache: &ModuleCache, c: &Color) -> Option<Vec<(C64, C64)>> {
    let terms: Vec<(C64, C64)> = c
        .expand()
        .into_iter()
        .map(|(w, t)| t.simple_label().filter(|a| cache.ctx().in_ddot(*a)).map(|a| (w, a)))
        .collect::<Option<_>>()?;
    (!terms.is_empty()).then_some(terms)
}

/// First component whose color is a simple projective module, or failing
/// that, a formal combination of them.
pub fn default_opening(cache: &ModuleCache, colors: &[Color]) -> Option<usize> {
    colors
        .iter()
        .position(|c| matches!(c.simple_label(), Some(a) if cache.ctx().in_ddot(a)))
        .or_else(|| colors.iter().position(|c| projective_terms(cache, c).is_some()))
}

/// Renormalized invariant `F′ = d(α)⟨T⟩` of a closed colored diagram. A
/// formal color on the opened component is expanded linearly.
pub fn f_prime(
    cache: &ModuleCache,
    d: &Diagram,
    colors: &[Color],
    opened: Option<usize>,
    opts: EvalOptions,
) -> Result<C64> {
    let comp = match opened {
        Some(c) => c,
        None => default_opening(cache, colors).ok_or_else(|| {
            Error::NotRenormalizable("no component carries a simple projective color".into())
        })?,
    };
    let col = colors
        .get(comp)
        .ok_or_else(|| Error::InvalidOpening(comp, "no such component".into()))?;
    let terms = projective_terms(cache, col).ok_or_else(|| {
        Error::InvalidOpening(comp, format!("color {} is not a simple projective module", col))
    })?;
    let mut acc = c64(0.0, 0.0);
    let mut cs = colors.to_vec();
    for (w, a) in terms {
        cs[comp] = Color::Simple(a);
        acc += w * cache.ctx().mod_dim(a)? * bracket(cache, d, &cs, comp, opts)?;
    }
    Ok(acc)
}

/// `F′` with the color `V_α` of `comp` and with `V_{α+nr}`, both opened on `comp`.
pub fn eps_shift_check(
    cache: &ModuleCache,
    d: &Diagram,
    colors: &[Color],
    comp: usize,
    n: i64,
    opts: EvalOptions,
) -> Result<(C64, C64)> {
    let alpha = colors
        .get(comp)
        .and_then(|c| c.simple_label())
        .ok_or_else(|| Error::InvalidOpening(comp, "not a simple color".into()))?;
    let base = f_prime(cache, d, colors, Some(comp), opts)?;
    let mut shifted = colors.to_vec();
    shifted[comp] = Color::Simple(alpha + (n * cache.ctx().r() as i64) as f64);
    let moved = f_prime(cache, d, &shifted, Some(comp), opts)?;
    Ok((base, moved))
}
