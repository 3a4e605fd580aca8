//! Small standard presentations used by the test suites and the self test.

use crate::diagram::rewrite::{curl, insert_at, loop_around};
use crate::diagram::{Diagram, Dir, Event, Turn};
use crate::repcat::Color;
use crate::scalar::{c64, ScalarContext, Sign, C64};
use crate::surgery::{apply_move, make_computable, with_reference_unknot, Component, LinkPresentation, Move};

/// Upward unknot with `|f|` curls of the sign of `f`.
pub fn framed_unknot(f: i64) -> Diagram {
    let mut ev = vec![Event::Cup(0, Turn::L)];
    let s = if f >= 0 { Sign::Plus } else { Sign::Minus };
    for _ in 0..f.abs() {
        ev.extend(curl(0, Dir::Up, s));
    }
    ev.push(Event::Cap(0, Turn::R));
    Diagram::new(ev)
}

/// Two-component Hopf link with both crossings of sign `s`.
pub fn hopf_diagram(s: Sign) -> Diagram {
    Diagram::new(vec![
        Event::Cup(0, Turn::L),
        Event::Cup(2, Turn::L),
        Event::Cross(1, s),
        Event::Cross(1, s),
        Event::Cap(2, Turn::R),
        Event::Cap(0, Turn::R),
    ])
}

pub fn unknot_alpha(a: C64) -> LinkPresentation {
    LinkPresentation::new(framed_unknot(0), vec![Component::physical("K", Color::Simple(a))])
        .expect("closed word")
}

pub fn hopf(s: Sign, a: C64, b: C64) -> LinkPresentation {
    LinkPresentation::new(
        hopf_diagram(s),
        vec![
            Component::physical("K1", Color::Simple(a)),
            Component::physical("K2", Color::Simple(b)),
        ],
    )
    .expect("closed word")
}

/// `f`-framed surgery unknot with spin value `c`.
pub fn lens(f: i64, c: f64) -> LinkPresentation {
    LinkPresentation::new(framed_unknot(f), vec![Component::surgery("L", c64(c, 0.0))])
        .expect("closed word")
}

/// `f`-framed surgery unknot `L` with a meridian `K` colored `V_α` linking it
/// once; `c = (f − α − 1 + 2k)/f` solves the characteristic equation.
pub fn lens_with_meridian(f: i64, a: C64, k: i64) -> LinkPresentation {
    let d = framed_unknot(f);
    let r = insert_at(&d, 1, loop_around(0, &[Dir::Up], Dir::Down, None), &[0]);
    let c = (c64(f as f64, 0.0) - (a + 1.0) + 2.0 * k as f64) / f as f64;
    let t = r.diagram.trace().expect("closed word");
    let o = r.new_comps(&t)[0];
    let mut comps = vec![Component::surgery("L", c); 2];
    comps[o] = Component::physical("K", Color::Simple(a));
    LinkPresentation::new(r.diagram, comps).expect("closed word")
}

/// Split union of an unknot `ref1` colored `V_α` with [`lens`].
pub fn split_with_unknot(f: i64, c: f64, a: C64) -> LinkPresentation {
    with_reference_unknot(&lens(f, c), a).expect("closed word")
}

/// L(4,1) with `c = 1/2`, reached from [`lens`] by a blow-up of sign `sign`
/// and two slides of `L` over the new meridian.
pub fn lens_via_slides(ctx: &ScalarContext, sign: Sign) -> LinkPresentation {
    let mut p = lens(4, 0.5);
    let moves = [
        Move::K1 { target: "L".into(), sign },
        Move::K2 { slider: "L".into(), over: "o1".into() },
        Move::K2 { slider: "L".into(), over: "o1".into() },
    ];
    for m in &moves {
        p = apply_move(ctx, &p, m).expect("moves apply").presentation;
    }
    p
}

/// `+1`-framed surgery unknot with integral spin beside an unknot colored
/// `V_0`, Hopf stabilized with `β` and made computable.
pub fn integral_route(ctx: &ScalarContext, beta: C64) -> crate::Result<LinkPresentation> {
    let p = split_with_unknot(1, 1.0, c64(0.0, 0.0));
    let m = Move::Hopf {
        target: "ref1".into(),
        beta,
    };
    make_computable(ctx, &apply_move(ctx, &p, &m)?.presentation)
}
