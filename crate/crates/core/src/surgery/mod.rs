//! Surgery presentations, Kirby colors and the invariants `N` and `N⁰`.

pub mod kirby;
mod moves;
mod signature;

pub use kirby::{canonical_alpha, kirby_color, KirbyForm};
pub use moves::{apply_move, Move, MoveOutcome};
pub use signature::signature;

use serde::{Deserialize, Serialize};

use crate::diagram::rewrite::{band_sum, cup_comp, juxtapose, Rewritten};
use crate::diagram::{f_prime, Diagram, EvalOptions, LinkingData, Trace};
use crate::error::{Error, Result};
use crate::repcat::{Color, ModuleCache};
use crate::scalar::{c64, Mod2C, ScalarContext, Sign, C64};
use crate::spin::{char_residual, is_admissible, is_computable, residual_is_zero};

/// Default bound on the number of expanded colorings.
pub const DEFAULT_TERMS_MAX: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Surgery,
    Physical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub id: String,
    pub role: Role,
    /// Only physical components carry a color.
    pub color: Option<Color>,
    /// `c_i` for surgery components, `w_ν` for physical ones.
    pub spin: Mod2C,
}

impl Component {
    pub fn surgery(id: &str, c: C64) -> Self {
        Component {
            id: id.to_string(),
            role: Role::Surgery,
            color: None,
            spin: Mod2C::new(c),
        }
    }

    /// A physical component whose spin value is the degree of its color.
    pub fn physical(id: &str, color: Color) -> Self {
        Component {
            id: id.to_string(),
            role: Role::Physical,
            spin: color.degree(),
            color: Some(color),
        }
    }
}

/// A closed diagram with one [`Component`] per traced component, in trace
/// order.
#[derive(Debug, Clone)]
pub struct LinkPresentation {
    diagram: Diagram,
    trace: Trace,
    components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub violations: Vec<String>,
    pub computable: bool,
    pub admissible: bool,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LinkPresentation {
    pub fn new(diagram: Diagram, components: Vec<Component>) -> Result<Self> {
        if !diagram.is_closed() {
            return Err(Error::InvalidPresentation("diagram is not closed".into()));
        }
        let trace = diagram.trace()?;
        if trace.n_components() != components.len() {
            return Err(Error::InvalidPresentation(format!(
                "diagram has {} components but {} were described",
                trace.n_components(),
                components.len()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if components[..i].iter().any(|o| o.id == c.id) {
                return Err(Error::InvalidPresentation(format!("duplicate id {}", c.id)));
            }
        }
        Ok(LinkPresentation {
            diagram,
            trace,
            components,
        })
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::Move(format!("no component with id {}", id)))
    }

    pub fn ids_with(&self, role: Role) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| self.components[i].role == role)
            .collect()
    }

    pub fn linking(&self) -> LinkingData {
        LinkingData::from_trace(
            &self.trace,
            &self.ids_with(Role::Surgery),
            &self.ids_with(Role::Physical),
        )
    }

    /// `c_i` of the surgery components, in order.
    pub fn c(&self) -> Vec<Mod2C> {
        self.ids_with(Role::Surgery)
            .into_iter()
            .map(|i| self.components[i].spin)
            .collect()
    }

    /// `w_ν` of the physical components, in order.
    pub fn w(&self) -> Vec<Mod2C> {
        self.ids_with(Role::Physical)
            .into_iter()
            .map(|i| self.components[i].spin)
            .collect()
    }

    pub fn physical_colors(&self) -> Vec<Color> {
        self.ids_with(Role::Physical)
            .into_iter()
            .map(|i| self.components[i].color.clone().unwrap_or(Color::Eps(0)))
            .collect()
    }

    pub fn validate(&self, ctx: &ScalarContext) -> Validation {
        let tol = ctx.tol();
        let mut violations = Vec::new();
        for c in &self.components {
            match (c.role, &c.color) {
                (Role::Surgery, Some(_)) => {
                    violations.push(format!("surgery component {} carries a color", c.id))
                }
                (Role::Physical, None) => {
                    violations.push(format!("physical component {} has no color", c.id))
                }
                (Role::Physical, Some(col)) => {
                    if let Err(e) = col.validate(ctx) {
                        violations.push(format!("component {}: {}", c.id, e));
                    } else if !col.degree().approx_eq(&c.spin, tol) {
                        violations.push(format!(
                            "component {}: color degree {} does not match spin value {}",
                            c.id,
                            col.degree(),
                            c.spin
                        ));
                    }
                }
                _ => {}
            }
        }
        let ld = self.linking();
        let res = char_residual(&ld.b, &ld.lk_lk, &self.c(), &self.w());
        for (row, x) in res.iter().enumerate() {
            if !x.is_zero(tol) {
                let id = &self.components[self.ids_with(Role::Surgery)[row]].id;
                violations.push(format!(
                    "characteristic equation fails on {} (residual {})",
                    id, x
                ));
            }
        }
        let colors = self.physical_colors();
        Validation {
            computable: violations.is_empty() && is_computable(ctx, &self.c(), &colors),
            admissible: is_admissible(ctx, &self.c(), &colors),
            violations,
        }
    }

    pub fn check(&self, ctx: &ScalarContext) -> Result<()> {
        let v = self.validate(ctx);
        if v.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidPresentation(v.violations.join("; ")))
        }
    }

    /// Whether the characteristic equation holds (ignoring colors).
    pub fn spin_ok(&self, tol: f64) -> bool {
        let ld = self.linking();
        residual_is_zero(&char_residual(&ld.b, &ld.lk_lk, &self.c(), &self.w()), tol)
    }

    /// Rebuilds after a rewrite: old components follow `r`, new ones are
    /// taken from `fresh` in the order of `r.new_cups`.
    pub(crate) fn rebuild(&self, r: &Rewritten, fresh: Vec<Component>) -> Result<Self> {
        let t2 = r.diagram.trace()?;
        let mut slots: Vec<Option<Component>> = vec![None; t2.n_components()];
        for (old, new) in r.comp_map(&self.trace, &t2).into_iter().enumerate() {
            if let Some(n) = new {
                if slots[n].is_none() {
                    slots[n] = Some(self.components[old].clone());
                }
            }
        }
        for (n, c) in r.new_comps(&t2).into_iter().zip(fresh) {
            if slots[n].is_none() {
                slots[n] = Some(c);
            }
        }
        let comps = slots
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Move("rewrite lost track of a component".into()))?;
        LinkPresentation::new(r.diagram.clone(), comps)
    }

    /// An id not used by any component, built from `stem`.
    pub fn fresh_id(&self, stem: &str) -> String {
        (1..)
            .map(|n| format!("{}{}", stem, n))
            .find(|s| self.components.iter().all(|c| &c.id != s))
            .expect("unbounded")
    }
}

/// Options for [`invariant_n`].
#[derive(Debug, Clone)]
pub struct NOptions {
    pub form: KirbyForm,
    /// Per surgery component, shift of the Kirby representative by `2·k`.
    pub alpha_shift: Vec<i64>,
    pub terms_max: u128,
    pub open: Option<usize>,
    pub eval: EvalOptions,
}

impl Default for NOptions {
    fn default() -> Self {
        NOptions {
            form: KirbyForm::Omega,
            alpha_shift: Vec::new(),
            terms_max: DEFAULT_TERMS_MAX,
            open: None,
            eval: EvalOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NValue {
    pub value: C64,
    pub f_prime: C64,
    pub signature: (usize, usize, usize),
    pub terms: u128,
}

/// `Δ(L) = (Δ₊)^{-b₊} (Δ₋)^{-b₋}`.
pub fn delta_l(ctx: &ScalarContext, sig: (usize, usize, usize)) -> C64 {
    ctx.delta_spin(Sign::Plus).powi(-(sig.0 as i32)) * ctx.delta_spin(Sign::Minus).powi(-(sig.2 as i32))
}

/// Colors of all components with the surgery ones Kirby colored.
pub fn kirby_colored(ctx: &ScalarContext, p: &LinkPresentation, opts: &NOptions) -> Result<Vec<Color>> {
    let mut li = 0;
    p.components
        .iter()
        .map(|c| match c.role {
            Role::Physical => Ok(c.color.clone().unwrap_or(Color::Eps(0))),
            Role::Surgery => {
                let shift = opts.alpha_shift.get(li).copied().unwrap_or(0);
                li += 1;
                let a = canonical_alpha(c.spin) + c64(2.0 * shift as f64, 0.0);
                kirby_color(ctx, a, opts.form)
            }
        })
        .collect()
}

pub fn term_count(colors: &[Color]) -> u128 {
    colors.iter().map(|c| c.expand().len() as u128).product()
}

/// `N = Δ(L)·F′(L, K, σ)` of a computable presentation.
pub fn invariant_n(cache: &ModuleCache, p: &LinkPresentation, opts: &NOptions) -> Result<NValue> {
    let ctx = cache.ctx();
    let v = p.validate(ctx);
    if !v.is_valid() {
        return Err(Error::InvalidPresentation(v.violations.join("; ")));
    }
    if !v.computable {
        return Err(Error::NotComputable(
            "some surgery component has an integral spin value".into(),
        ));
    }
    let colors = kirby_colored(ctx, p, opts)?;
    let terms = term_count(&colors);
    if terms > opts.terms_max {
        return Err(Error::Resource(format!(
            "{} expanded colorings exceed the limit {}",
            terms, opts.terms_max
        )));
    }
    let sig = signature(&p.linking().b);
    let fp = f_prime(cache, &p.diagram, &colors, opts.open, opts.eval)?;
    Ok(NValue {
        value: delta_l(ctx, sig) * fp,
        f_prime: fp,
        signature: sig,
        terms,
    })
}

/// `N` with the representative of surgery component `i` as chosen and
/// shifted by 2.
pub fn kirby_color_shift_check(
    cache: &ModuleCache,
    p: &LinkPresentation,
    i: usize,
    opts: &NOptions,
) -> Result<(C64, C64)> {
    let base = invariant_n(cache, p, opts)?.value;
    let mut o = opts.clone();
    let m = p.ids_with(Role::Surgery).len();
    o.alpha_shift.resize(m, 0);
    if i >= m {
        return Err(Error::Move(format!("no surgery component {}", i)));
    }
    o.alpha_shift[i] += 1;
    Ok((base, invariant_n(cache, p, &o)?.value))
}

/// Slides non-integral components over integral surgery components until
/// every `c_i` is non-integral.
pub fn make_computable(ctx: &ScalarContext, p: &LinkPresentation) -> Result<LinkPresentation> {
    let tol = ctx.tol();
    let mut cur = p.clone();
    loop {
        let Some(i) = (0..cur.components.len()).find(|&i| {
            cur.components[i].role == Role::Surgery && cur.components[i].spin.is_integral(tol)
        }) else {
            return Ok(cur);
        };
        // prefer physical sliders so the surgery part stays small
        let pick = |role: Role| {
            (0..cur.components.len()).find(|&j| {
                j != i && cur.components[j].role == role && !cur.components[j].spin.is_integral(tol)
            })
        };
        let j = pick(Role::Physical).or_else(|| pick(Role::Surgery)).ok_or_else(|| {
            Error::NotComputable("no component with a non-integral spin value to slide".into())
        })?;
        let m = Move::K2 {
            slider: cur.components[j].id.clone(),
            over: cur.components[i].id.clone(),
        };
        cur = apply_move(ctx, &cur, &m)?.presentation;
    }
}

/// Banded connected sum along component `m1` of `p1` and `m2` of `p2`, both
/// colored by the same simple module.
pub fn connected_sum(
    ctx: &ScalarContext,
    p1: &LinkPresentation,
    m1: usize,
    p2: &LinkPresentation,
    m2: usize,
) -> Result<LinkPresentation> {
    let label = |p: &LinkPresentation, m: usize| {
        p.components
            .get(m)
            .and_then(|c| c.color.as_ref())
            .and_then(|c| c.simple_label())
    };
    match (label(p1, m1), label(p2, m2)) {
        (Some(a), Some(b)) if (a - b).norm() <= ctx.tol() => {}
        _ => {
            return Err(Error::Move(
                "connected sum needs both marked components colored by the same simple module".into(),
            ))
        }
    }
    let t1 = &p1.trace;
    let t2 = &p2.trace;
    let e1 = t1.components[m1].first_cup.expect("closed");
    let (d, map1, map2) = juxtapose(&p1.diagram, t1, e1, &p2.diagram);
    let tj = d.trace()?;
    let n = tj.n_components();
    let mut slots: Vec<Option<Component>> = vec![None; n];
    let mut at = |c: Component, e: usize| {
        slots[cup_comp(&d, &tj, e)] = Some(c);
    };
    for (i, c) in p1.components.iter().enumerate() {
        at(c.clone(), map1[t1.components[i].first_cup.expect("closed")]);
    }
    let taken: Vec<String> = p1.components.iter().map(|c| c.id.clone()).collect();
    for (i, c) in p2.components.iter().enumerate() {
        let mut c = c.clone();
        while taken.contains(&c.id) {
            c.id.push('\'');
        }
        at(c, map2[t2.components[i].first_cup.expect("closed")]);
    }
    let comps: Vec<Component> = slots.into_iter().map(|s| s.expect("all placed")).collect();
    let joined = LinkPresentation::new(d.clone(), comps)?;
    let a = cup_comp(&d, &tj, map1[e1]);
    let b = cup_comp(&d, &tj, map2[t2.components[m2].first_cup.expect("closed")]);
    let r = band_sum(&d, &tj, a, b)?;
    joined.rebuild(&r, Vec::new())
}

/// The split union of `p` with an unknot colored `V_α`, drawn to the left
/// of `p` and alive at every slice.
pub fn with_reference_unknot(p: &LinkPresentation, alpha: C64) -> Result<LinkPresentation> {
    use crate::diagram::{Event, Turn};
    let mut events = vec![Event::Cup(0, Turn::L)];
    events.extend(p.diagram.events.iter().map(|e| e.with_pos(e.pos() + 2)));
    events.push(Event::Cap(0, Turn::R));
    let mut comps = vec![Component::physical(&p.fresh_id("ref"), Color::Simple(alpha))];
    comps.extend(p.components.iter().cloned());
    LinkPresentation::new(Diagram::new(events), comps)
}

/// `N⁰`: zero on admissible triples, otherwise `N(U_α ⊔ p) / d(α)`.
pub fn invariant_n0(cache: &ModuleCache, p: &LinkPresentation, alpha: C64, opts: &NOptions) -> Result<C64> {
    let ctx = cache.ctx();
    p.check(ctx)?;
    if p.validate(ctx).admissible {
        return Ok(c64(0.0, 0.0));
    }
    let u = make_computable(ctx, &with_reference_unknot(p, alpha)?)?;
    let n = invariant_n(cache, &u, opts)?.value;
    Ok(n / ctx.mod_dim(alpha)?)
}
