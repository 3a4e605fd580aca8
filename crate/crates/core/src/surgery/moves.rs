//! The five moves as word rewrites with their spin updates.

use std::fmt;
use std::str::FromStr;

use super::kirby::{canonical_alpha, kirby_color, scaled, KirbyForm};
use super::{Component, LinkPresentation, Role};
use crate::diagram::rewrite::{
    band_sum, curl, double_component, find_framed_meridian, insert_at, loop_around, replace_range,
    reverse_component,
};
use crate::diagram::{Dir, Event};
use crate::error::{Error, Result};
use crate::repcat::Color;
use crate::scalar::{c64, Mod2C, ScalarContext, Sign, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum Move {
    /// Reverse a surgery component.
    Orientation(String),
    /// Add a `±1`-framed meridian to a component and twist it.
    K1 { target: String, sign: Sign },
    /// Remove a `±1`-framed meridian and untwist the strand it encircles.
    K1Remove { meridian: String },
    /// Slide one component over a parallel of a surgery component.
    K2 { slider: String, over: String },
    /// Add a 0-framed meridian colored `λ·V_β` to a physical component.
    Hopf { target: String, beta: C64 },
    /// Add two opposite `±1`-framed Kirby colored copies of the boundary of
    /// a disc meeting `count` strands starting at `start`, below `event`.
    Birth { event: usize, start: usize, count: usize },
}

#[derive(Debug, Clone)]
pub struct MoveOutcome {
    pub presentation: LinkPresentation,
    /// Factor by which `F′` is expected to change.
    pub f_factor: C64,
    /// Change of `(b₊, b₋)`.
    pub signature_shift: (i64, i64),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |s: &Sign| if *s == Sign::Plus { '+' } else { '-' };
        match self {
            Move::Orientation(l) => write!(f, "orientation:{}", l),
            Move::K1 { target, sign } => write!(f, "k1:{}:{}", target, s(sign)),
            Move::K1Remove { meridian } => write!(f, "k1-remove:{}", meridian),
            Move::K2 { slider, over } => write!(f, "k2:{}:{}", slider, over),
            Move::Hopf { target, beta } => write!(f, "hopf:{}:{},{}", target, beta.re, beta.im),
            Move::Birth { event, start, count } => write!(f, "birth:{}:{}:{}", event, start, count),
        }
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Move> {
        let bad = || Error::Move(format!("cannot parse move '{}'", s));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
        let float = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
        match parts.as_slice() {
            ["orientation", l] => Ok(Move::Orientation(l.to_string())),
            ["k1", t, sg] => {
                let sign = match *sg {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    _ => return Err(bad()),
                };
                Ok(Move::K1 {
                    target: t.to_string(),
                    sign,
                })
            }
            ["k1-remove", o] => Ok(Move::K1Remove {
                meridian: o.to_string(),
            }),
            ["k2", j, l] => Ok(Move::K2 {
                slider: j.to_string(),
                over: l.to_string(),
            }),
            ["hopf", t, b] => {
                let (re, im) = b.split_once(',').unwrap_or((b, "0"));
                Ok(Move::Hopf {
                    target: t.to_string(),
                    beta: c64(float(re)?, float(im)?),
                })
            }
            ["birth", e, st, n] => Ok(Move::Birth {
                event: num(e)?,
                start: num(st)?,
                count: num(n)?,
            }),
            _ => Err(bad()),
        }
    }
}

/// Position and orientation of the left leg of a component's first cup.
fn first_leg(p: &LinkPresentation, comp: usize) -> (usize, usize, Dir) {
    let e = p.trace.components[comp].first_cup.expect("closed");
    match p.diagram.events[e] {
        Event::Cup(pos, t) => (e, pos, t.cup_dirs().0),
        _ => unreachable!("first cup is a cup"),
    }
}

fn unchanged(p: LinkPresentation) -> MoveOutcome {
    MoveOutcome {
        presentation: p,
        f_factor: c64(1.0, 0.0),
        signature_shift: (0, 0),
    }
}

pub fn apply_move(ctx: &ScalarContext, p: &LinkPresentation, m: &Move) -> Result<MoveOutcome> {
    match m {
        Move::Orientation(id) => {
            let i = p.index_of(id)?;
            if p.components[i].role != Role::Surgery {
                return Err(Error::Move(format!("{} is not a surgery component", id)));
            }
            let r = reverse_component(&p.diagram, &p.trace, i);
            let mut comps = p.components.clone();
            comps[i].spin = -comps[i].spin;
            let q = LinkPresentation::new(r.diagram, comps)?;
            Ok(unchanged(q))
        }
        Move::K1 { target, sign } => {
            let j = p.index_of(target)?;
            let (e, pos, dir) = first_leg(p, j);
            // lk(o, J) = -sign
            let x = if *sign == Sign::Plus { dir } else { dir.flip() };
            let mut ev = loop_around(pos, &[dir], x, Some(*sign));
            ev.extend(curl(pos, dir, *sign));
            let r = insert_at(&p.diagram, e + 1, ev, &[0]);
            let o = Component::surgery(&p.fresh_id("o"), (p.components[j].spin + Mod2C::one()).value());
            let q = p.rebuild(&r, vec![o])?;
            let shift = if *sign == Sign::Plus { (1, 0) } else { (0, 1) };
            Ok(MoveOutcome {
                presentation: q,
                f_factor: ctx.delta_spin(*sign),
                signature_shift: shift,
            })
        }
        Move::K1Remove { meridian } => {
            let o = p.index_of(meridian)?;
            if p.components[o].role != Role::Surgery {
                return Err(Error::Move(format!("{} is not a surgery component", meridian)));
            }
            let (range, sign, _j) = find_framed_meridian(&p.diagram, &p.trace, o)?;
            let (pos, dir) = match p.diagram.events[range.start] {
                Event::Cup(pos, _) => (pos, p.trace.strand(range.start, pos).dir),
                _ => unreachable!(),
            };
            let r = replace_range(&p.diagram, range, curl(pos, dir, sign.flip()));
            let q = p.rebuild(&r, Vec::new())?;
            let shift = if sign == Sign::Plus { (-1, 0) } else { (0, -1) };
            Ok(MoveOutcome {
                presentation: q,
                f_factor: ctx.delta_spin(sign).inv(),
                signature_shift: shift,
            })
        }
        Move::K2 { slider, over } => {
            let j = p.index_of(slider)?;
            let l = p.index_of(over)?;
            if j == l {
                return Err(Error::Move("cannot slide a component over itself".into()));
            }
            if p.components[l].role != Role::Surgery {
                return Err(Error::Move(format!("{} is not a surgery component", over)));
            }
            let dbl = double_component(&p.diagram, &p.trace, l);
            let mut par_spec = p.components[l].clone();
            par_spec.id = p.fresh_id("parallel");
            let mid = p.rebuild(&dbl, vec![par_spec])?;
            let t1 = &mid.trace;
            let par = dbl.new_comps(t1)[0];
            let jm = dbl.comp_map(&p.trace, t1)[j].expect("kept");
            let r = band_sum(&mid.diagram, t1, jm, par)?;
            let mut q = mid.rebuild(&r, Vec::new())?;
            let jn = r.comp_map(t1, &q.trace)[jm].expect("kept");
            q.components[jn] = p.components[j].clone();
            let ln = q.index_of(over)?;
            let cj = p.components[j].spin;
            q.components[ln].spin = q.components[ln].spin - cj;
            Ok(unchanged(q))
        }
        Move::Hopf { target, beta } => {
            let k = p.index_of(target)?;
            let comp = &p.components[k];
            let alpha = match (&comp.role, comp.color.as_ref().and_then(|c| c.simple_label())) {
                (Role::Physical, Some(a)) if ctx.in_ddot(a) => a,
                _ => {
                    return Err(Error::Move(format!(
                        "{} is not a physical component with a simple projective color",
                        target
                    )))
                }
            };
            if !ctx.in_ddot(*beta) {
                return Err(Error::Move(format!("beta = {} is not a projective label", beta)));
            }
            let lambda = ctx.mod_dim(alpha)? / (-ctx.rf() * ctx.qpow(*beta * alpha));
            let (e, pos, dir) = first_leg(p, k);
            // lk(o, K) = +1
            let ev = loop_around(pos, &[dir], dir.flip(), None);
            let r = insert_at(&p.diagram, e + 1, ev, &[0]);
            let o = Component::physical(&p.fresh_id("h"), Color::Formal(vec![(lambda, Color::Simple(*beta))]));
            Ok(unchanged(p.rebuild(&r, vec![o])?))
        }
        Move::Birth { event, start, count } => {
            let (k, s, n) = (*event, *start, *count);
            if k > p.diagram.events.len() || s + n > p.trace.width(k) {
                return Err(Error::Move(format!("disc {}:{}:{} is outside the diagram", k, s, n)));
            }
            let slice = &p.trace.slices[k];
            let dirs: Vec<Dir> = slice[s..s + n].iter().map(|x| x.dir).collect();
            // ∂D links upward strands positively
            let mut sigma = Mod2C::one();
            for (i, st) in slice[s..s + n].iter().enumerate() {
                let c = p.components[p.trace.arc_comp[st.arc]].spin;
                sigma += if dirs[i] == Dir::Up { c } else { -c };
            }
            if sigma.is_integral(ctx.tol()) {
                return Err(Error::InadmissibleDisc);
            }
            let scale = c64(1.0 / ctx.delta_spin(Sign::Plus).norm(), 0.0);
            let color = scaled(kirby_color(ctx, canonical_alpha(sigma), KirbyForm::Omega)?, scale);
            let mut ev = loop_around(s, &dirs, Dir::Down, Some(Sign::Minus));
            let second = ev.len();
            ev.extend(loop_around(s, &dirs, Dir::Up, Some(Sign::Plus)));
            let r = insert_at(&p.diagram, k, ev, &[0, second]);
            let minus_id = p.fresh_id("kminus");
            let plus_id = p.fresh_id("kplus");
            let mut km = Component::physical(&minus_id, color.clone());
            let mut kp = Component::physical(&plus_id, color);
            km.spin = sigma;
            kp.spin = sigma;
            Ok(unchanged(p.rebuild(&r, vec![km, kp])?))
        }
    }
}
