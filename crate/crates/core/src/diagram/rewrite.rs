//! Word-level rewrites used by the surgery moves.
//!
//! Every rewrite returns the new word together with the position of each old
//! event in it, so components can be matched after retracing.

use super::word::{over_left, sign_for, Diagram, Dir, Event, Trace, Turn};
use crate::error::{Error, Result};
use crate::scalar::Sign;

pub const REMOVED: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Rewritten {
    pub diagram: Diagram,
    /// `event_map[k]` is the index of old event `k` in the new word; for a
    /// doubled cup it points at the cup of the original component; deleted
    /// events map to [`REMOVED`].
    pub event_map: Vec<usize>,
    /// Cups that start components not present before, in creation order.
    pub new_cups: Vec<usize>,
}

impl Rewritten {
    fn identity(d: &Diagram) -> Self {
        Rewritten {
            diagram: d.clone(),
            event_map: (0..d.events.len()).collect(),
            new_cups: Vec::new(),
        }
    }

    /// New component id of every old component, `None` for deleted ones.
    pub fn comp_map(&self, old: &Trace, new: &Trace) -> Vec<Option<usize>> {
        old.components
            .iter()
            .map(|c| {
                let e = self.event_map[c.first_cup.expect("closed diagram")];
                (e != REMOVED).then(|| cup_comp(&self.diagram, new, e))
            })
            .collect()
    }

    /// Component ids of the components created by the rewrite.
    pub fn new_comps(&self, new: &Trace) -> Vec<usize> {
        self.new_cups
            .iter()
            .map(|&e| cup_comp(&self.diagram, new, e))
            .collect()
    }
}

/// Component started by the cup at event `e`.
pub fn cup_comp(d: &Diagram, t: &Trace, e: usize) -> usize {
    t.comp_of(e + 1, d.events[e].pos())
}

/// Deletes the events in `range` and inserts `events` in their place.
pub fn replace_range(d: &Diagram, range: std::ops::Range<usize>, events: Vec<Event>) -> Rewritten {
    let n_new = events.len();
    let (a, b) = (range.start, range.end);
    let mut out = d.clone();
    out.events.splice(range, events);
    Rewritten {
        diagram: out,
        event_map: (0..d.events.len())
            .map(|k| {
                if k < a {
                    k
                } else if k < b {
                    REMOVED
                } else {
                    k - (b - a) + n_new
                }
            })
            .collect(),
        new_cups: Vec::new(),
    }
}

/// Inserts `events` before old event `at`; they must leave the slice as
/// they found it.
pub fn insert_at(d: &Diagram, at: usize, events: Vec<Event>, new_cup_offsets: &[usize]) -> Rewritten {
    let n = events.len();
    let mut out = d.clone();
    out.events.splice(at..at, events);
    Rewritten {
        diagram: out,
        event_map: (0..d.events.len())
            .map(|k| if k < at { k } else { k + n })
            .collect(),
        new_cups: new_cup_offsets.iter().map(|o| at + o).collect(),
    }
}

/// A curl of the given writhe sign on the strand at `k` with orientation `o`.
pub fn curl(k: usize, o: Dir, sign: Sign) -> Vec<Event> {
    vec![
        Event::Cup(k + 1, Turn::cup_with_left(o)),
        Event::Cross(k, sign_for(sign == Sign::Plus, o, o)),
        Event::Cap(k + 1, Turn::cap_with_left(o)),
    ]
}

/// An unknot encircling the strands at `start..start+dirs.len()`, whose legs
/// run with orientations `x` (left) and `-x` (right) while passing them: it
/// links each strand of orientation `-x` with `+1` and each strand of
/// orientation `x` with `-1`. A framing is realized by crossing the two legs
/// just above the cup, which costs no extra width.
pub fn loop_around(start: usize, dirs: &[Dir], x: Dir, framing: Option<Sign>) -> Vec<Event> {
    let n = dirs.len();
    let mut ev = Vec::with_capacity(2 * n + 3);
    match framing {
        None => ev.push(Event::Cup(start, Turn::cup_with_left(x))),
        Some(s) => {
            ev.push(Event::Cup(start, Turn::cup_with_left(x.flip())));
            ev.push(Event::Cross(start, s));
        }
    }
    // right leg passes over the strands
    for (i, d) in dirs.iter().enumerate() {
        ev.push(Event::Cross(start + 1 + i, sign_for(true, x.flip(), *d)));
    }
    // left leg passes under them
    for (i, d) in dirs.iter().enumerate() {
        ev.push(Event::Cross(start + i, sign_for(false, x, *d)));
    }
    ev.push(Event::Cap(start + n, Turn::cap_with_left(x)));
    ev
}

/// Reverses the orientation of one component.
pub fn reverse_component(d: &Diagram, t: &Trace, comp: usize) -> Rewritten {
    let mut out = Rewritten::identity(d);
    for (k, ev) in out.diagram.events.iter_mut().enumerate() {
        *ev = match *ev {
            Event::Cup(p, tt) if t.comp_of(k + 1, p) == comp => Event::Cup(p, tt.flip()),
            Event::Cap(p, tt) if t.comp_of(k, p) == comp => Event::Cap(p, tt.flip()),
            Event::Cross(p, s) => {
                let a = t.comp_of(k, p) == comp;
                let b = t.comp_of(k, p + 1) == comp;
                if a != b {
                    Event::Cross(p, s.flip())
                } else {
                    Event::Cross(p, s)
                }
            }
            e => e,
        };
    }
    out
}

/// Adds the blackboard parallel of `comp`, running on its right-hand side
/// with the same orientation. The parallel is reported in `new_cups`.
pub fn double_component(d: &Diagram, t: &Trace, comp: usize) -> Rewritten {
    let mut events = Vec::with_capacity(d.events.len() * 2);
    let mut event_map = Vec::with_capacity(d.events.len());
    let mut new_cups = Vec::new();
    let first = t.components[comp].first_cup;
    for (k, ev) in d.events.iter().enumerate() {
        let slice = &t.slices[k];
        let is_c = |p: usize| t.arc_comp[slice[p].arc] == comp;
        let shift = |p: usize| p + (0..p).filter(|&i| is_c(i)).count();
        match *ev {
            Event::Cup(p, tt) if t.comp_of(k + 1, p) == comp => {
                let np = shift(p);
                let base = events.len();
                events.push(Event::Cup(np, tt));
                events.push(Event::Cup(np + 1, tt));
                // the original strand is outer for an upward left leg
                let (own, par) = if tt == Turn::L { (base, base + 1) } else { (base + 1, base) };
                event_map.push(own);
                if Some(k) == first {
                    new_cups.push(par);
                }
            }
            Event::Cap(p, tt) if is_c(p) => {
                let np = shift(p);
                event_map.push(events.len() + 1);
                events.push(Event::Cap(np + 1, tt));
                events.push(Event::Cap(np, tt));
            }
            Event::Cross(p, s) => {
                let np = shift(p);
                let sa = if is_c(p) { 2 } else { 1 };
                let sb = if is_c(p + 1) { 2 } else { 1 };
                event_map.push(events.len());
                for i in (0..sa).rev() {
                    for j in 0..sb {
                        events.push(Event::Cross(np + i + j, s));
                    }
                }
            }
            e => {
                event_map.push(events.len());
                events.push(e.with_pos(shift(e.pos())));
            }
        }
    }
    Rewritten {
        diagram: Diagram {
            bottom: d.bottom.clone(),
            events,
        },
        event_map,
        new_cups,
    }
}

/// Joins components `a` and `b` by a flat band lying over every strand it
/// meets. The band is attached at the first slice where both components are
/// present, between the closest pair of oppositely oriented strands.
pub fn band_sum(d: &Diagram, t: &Trace, a: usize, b: usize) -> Result<Rewritten> {
    if a == b {
        return Err(Error::Move("band sum needs two distinct components".into()));
    }
    let mut choice = None;
    for (k, slice) in t.slices.iter().enumerate() {
        let mut best: Option<(usize, usize)> = None;
        for (i, si) in slice.iter().enumerate() {
            if t.arc_comp[si.arc] != a {
                continue;
            }
            for (j, sj) in slice.iter().enumerate() {
                if t.arc_comp[sj.arc] == b
                    && si.dir != sj.dir
                    && best.map_or(true, |(x, y)| i.abs_diff(j) < x.abs_diff(y))
                {
                    best = Some((i, j));
                }
            }
        }
        if let Some(bj) = best {
            choice = Some((k, bj));
            break;
        }
    }
    let Some((k, (i, j))) = choice else {
        let ext = extend_to_meet(d, t, a, b)?;
        let t2 = ext.diagram.trace()?;
        let ca = cup_comp(&ext.diagram, &t2, ext.event_map[t.components[a].first_cup.expect("closed")]);
        let cb = cup_comp(&ext.diagram, &t2, ext.event_map[t.components[b].first_cup.expect("closed")]);
        let inner = band_sum(&ext.diagram, &t2, ca, cb)?;
        return Ok(Rewritten {
            event_map: ext
                .event_map
                .iter()
                .map(|&e| if e == REMOVED { REMOVED } else { inner.event_map[e] })
                .collect(),
            diagram: inner.diagram,
            new_cups: Vec::new(),
        });
    };
    let dirs: Vec<Dir> = t.slices[k].iter().map(|s| s.dir).collect();
    let da = dirs[i];
    let mut ev = Vec::new();
    if i < j {
        for p in i..j - 1 {
            ev.push(Event::Cross(p, sign_for(true, da, dirs[p + 1])));
        }
        ev.push(Event::Cap(j - 1, Turn::cap_with_left(da)));
        ev.push(Event::Cup(j - 1, Turn::cup_with_left(da)));
        for p in (i..j - 1).rev() {
            ev.push(Event::Cross(p, sign_for(false, dirs[p + 1], da)));
        }
    } else {
        for p in (j + 1..i).rev() {
            ev.push(Event::Cross(p, sign_for(false, dirs[p], da)));
        }
        ev.push(Event::Cap(j, Turn::cap_with_left(dirs[j])));
        ev.push(Event::Cup(j, Turn::cup_with_left(dirs[j])));
        for p in j + 1..i {
            ev.push(Event::Cross(p, sign_for(true, da, dirs[p])));
        }
    }
    Ok(insert_at(d, k, ev, &[]))
}

/// When one component ends before the other starts, keeps the final cap
/// of the earlier one open as a finger: its two strands move over everything
/// to the left edge, ride along until the later component has appeared, and
/// only then close. The finger lies above the diagram, so this is an isotopy.
fn extend_to_meet(d: &Diagram, t: &Trace, a: usize, b: usize) -> Result<Rewritten> {
    let span = |c: usize| {
        let evs = t.events_of(d, c);
        (evs[0], *evs.last().expect("closed components have events"))
    };
    let ((_, end_a), (start_b, _)) = (span(a), span(b));
    let ((_, end_b), (start_a, _)) = (span(b), span(a));
    let (end, start) = if end_a < start_b {
        (end_a, start_b)
    } else if end_b < start_a {
        (end_b, start_a)
    } else {
        return Err(Error::Move("components never share a slice".into()));
    };
    let (p, turn) = match d.events[end] {
        Event::Cap(p, tt) => (p, tt),
        _ => return Err(Error::Move("component does not end with a cap".into())),
    };
    let (l, r) = turn.cap_dirs();
    let slice = &t.slices[end];
    let mut events = Vec::with_capacity(d.events.len() + 2 * p + 1);
    let mut event_map = Vec::with_capacity(d.events.len());
    for (k, e) in d.events[..end].iter().enumerate() {
        event_map.push(k);
        events.push(*e);
    }
    // pair moves left over the strands in front of it
    for q in (0..p).rev() {
        events.push(Event::Cross(q, sign_for(false, slice[q].dir, l)));
        events.push(Event::Cross(q + 1, sign_for(false, slice[q].dir, r)));
    }
    event_map.push(REMOVED);
    for e in &d.events[end + 1..=start] {
        event_map.push(events.len());
        events.push(e.with_pos(e.pos() + 2));
    }
    events.push(Event::Cap(0, turn));
    for e in &d.events[start + 1..] {
        event_map.push(events.len());
        events.push(*e);
    }
    Ok(Rewritten {
        diagram: Diagram {
            bottom: d.bottom.clone(),
            events,
        },
        event_map,
        new_cups: Vec::new(),
    })
}

/// Places `d2` to the right of `d1` so that both start their first
/// components' lives in a common slice: `d1` runs up to just after event
/// `after1`, then `d2` runs entirely, then `d1` resumes.
pub fn juxtapose(d1: &Diagram, t1: &Trace, after1: usize, d2: &Diagram) -> (Diagram, Vec<usize>, Vec<usize>) {
    let w = t1.width(after1 + 1);
    let mut events = Vec::with_capacity(d1.events.len() + d2.events.len());
    let mut map1 = Vec::with_capacity(d1.events.len());
    let mut map2 = Vec::with_capacity(d2.events.len());
    for e in &d1.events[..=after1] {
        map1.push(events.len());
        events.push(*e);
    }
    for e in &d2.events {
        map2.push(events.len());
        events.push(e.with_pos(e.pos() + w));
    }
    for e in &d1.events[after1 + 1..] {
        map1.push(events.len());
        events.push(*e);
    }
    (Diagram::new(events), map1, map2)
}

/// Checks that `o` appears as a contiguous framed loop around a single strand
/// (as produced by [`loop_around`] with one strand and a framing) and returns its
/// event range, the framing and the encircled component.
pub fn find_framed_meridian(d: &Diagram, t: &Trace, o: usize) -> Result<(std::ops::Range<usize>, Sign, usize)> {
    let evs = t.events_of(d, o);
    let bad = || Error::Move(format!("component {} is not an unknotted framed meridian", o));
    if evs.len() != 5 || evs.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(bad());
    }
    let s = evs[0];
    let (p, x) = match d.events[s] {
        Event::Cup(p, tt) => (p, tt.cup_dirs().1),
        _ => return Err(bad()),
    };
    let j = t.comp_of(s, p);
    let jdir = t.strand(s, p).dir;
    let expected = |sign: Sign| loop_around(p, &[jdir], x, Some(sign));
    for sign in [Sign::Plus, Sign::Minus] {
        if d.events[s..s + 5] == expected(sign)[..] {
            return Ok((s..s + 5, sign, j));
        }
    }
    Err(bad())
}

/// Self-crossing sign bookkeeping: sum of signs of crossings between two
/// components in a word (each counted once).
pub fn crossing_sum(d: &Diagram, t: &Trace, a: usize, b: usize) -> i64 {
    d.events
        .iter()
        .enumerate()
        .filter_map(|(k, e)| match *e {
            Event::Cross(p, s) => {
                let (x, y) = (t.comp_of(k, p), t.comp_of(k, p + 1));
                ((x == a && y == b) || (x == b && y == a)).then_some(s.value())
            }
            _ => None,
        })
        .sum()
}

/// Whether the left strand is over at crossing `k` of a traced word.
pub fn crossing_over_left(d: &Diagram, t: &Trace, k: usize) -> Option<bool> {
    match d.events[k] {
        Event::Cross(p, s) => Some(over_left(s, t.strand(k, p).dir, t.strand(k, p + 1).dir)),
        _ => None,
    }
}
