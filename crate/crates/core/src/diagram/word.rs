//! Morse words for oriented framed tangles and their component tracing.
//!
//! A word is read bottom to top. Strands are numbered left to right in each
//! slice. `cup p` inserts two strands at positions `p, p+1`; `cap p` joins
//! the strands at `p, p+1`; `x± p` swaps them. The cup/cap variant fixes the
//! orientation of the two legs:
//!
//! | event   | left leg | right leg |
//! |---------|----------|-----------|
//! | `cup L` | up       | down      |
//! | `cup R` | down     | up        |
//! | `cap L` | down     | up        |
//! | `cap R` | up       | down      |
//!
//! `L` variants use the plain (co)evaluation, `R` variants the pivotal one.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Up,
    Down,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turn {
    L,
    R,
}

impl Turn {
    pub fn flip(self) -> Turn {
        match self {
            Turn::L => Turn::R,
            Turn::R => Turn::L,
        }
    }

    /// Leg orientations `(left, right)` of a cup of this variant.
    pub fn cup_dirs(self) -> (Dir, Dir) {
        match self {
            Turn::L => (Dir::Up, Dir::Down),
            Turn::R => (Dir::Down, Dir::Up),
        }
    }

    /// Leg orientations `(left, right)` a cap of this variant expects.
    pub fn cap_dirs(self) -> (Dir, Dir) {
        match self {
            Turn::L => (Dir::Down, Dir::Up),
            Turn::R => (Dir::Up, Dir::Down),
        }
    }

    pub fn cup_with_left(left: Dir) -> Turn {
        match left {
            Dir::Up => Turn::L,
            Dir::Down => Turn::R,
        }
    }

    pub fn cap_with_left(left: Dir) -> Turn {
        match left {
            Dir::Down => Turn::L,
            Dir::Up => Turn::R,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    Cup(usize, Turn),
    Cap(usize, Turn),
    Cross(usize, Sign),
}

impl Event {
    pub fn pos(&self) -> usize {
        match *self {
            Event::Cup(p, _) | Event::Cap(p, _) | Event::Cross(p, _) => p,
        }
    }

    pub fn with_pos(&self, p: usize) -> Event {
        match *self {
            Event::Cup(_, t) => Event::Cup(p, t),
            Event::Cap(_, t) => Event::Cap(p, t),
            Event::Cross(_, s) => Event::Cross(p, s),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = |t: &Turn| if *t == Turn::L { "L" } else { "R" };
        match self {
            Event::Cup(p, k) => write!(f, "cup {} {}", p, t(k)),
            Event::Cap(p, k) => write!(f, "cap {} {}", p, t(k)),
            Event::Cross(p, Sign::Plus) => write!(f, "x+ {}", p),
            Event::Cross(p, Sign::Minus) => write!(f, "x- {}", p),
        }
    }
}

fn parse_event(line: &str, index: usize) -> Result<Event> {
    let err = |m: &str| Error::Parse {
        index,
        message: format!("{}: `{}`", m, line),
    };
    let toks: Vec<&str> = line.split_whitespace().collect();
    let pos = |s: Option<&&str>| -> Result<usize> {
        s.ok_or_else(|| err("missing position"))?
            .parse::<usize>()
            .map_err(|_| err("bad position"))
    };
    let turn = |s: Option<&&str>| -> Result<Turn> {
        match s.copied() {
            Some("L") | Some("l") => Ok(Turn::L),
            Some("R") | Some("r") => Ok(Turn::R),
            _ => Err(err("expected variant L or R")),
        }
    };
    let ev = match toks.first().copied() {
        Some("cup") => Event::Cup(pos(toks.get(1))?, turn(toks.get(2))?),
        Some("cap") => Event::Cap(pos(toks.get(1))?, turn(toks.get(2))?),
        Some("x+") => Event::Cross(pos(toks.get(1))?, Sign::Plus),
        Some("x-") => Event::Cross(pos(toks.get(1))?, Sign::Minus),
        _ => return Err(err("unknown event")),
    };
    let arity = if matches!(ev, Event::Cross(..)) { 2 } else { 3 };
    if toks.len() != arity {
        return Err(err("trailing tokens"));
    }
    Ok(ev)
}

/// Whether the left strand of a crossing passes over, given its sign and the
/// orientations of the two strands (right-hand rule).
pub fn over_left(sign: Sign, left: Dir, right: Dir) -> bool {
    (sign == Sign::Plus) == (left == right)
}

/// The sign that puts the chosen strand on top.
pub fn sign_for(over_left_wanted: bool, left: Dir, right: Dir) -> Sign {
    if over_left_wanted == (left == right) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A tangle diagram with an oriented bottom boundary; the top boundary is
/// whatever survives the word. Links have an empty bottom.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagram {
    pub bottom: Vec<Dir>,
    pub events: Vec<Event>,
}

impl Diagram {
    pub fn new(events: Vec<Event>) -> Self {
        Diagram {
            bottom: Vec::new(),
            events,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.bottom.is_empty()
    }

    /// Parses one event per line; blank lines and `#` comments are skipped.
    /// An optional first line `in U D ...` sets the bottom boundary.
    pub fn parse(text: &str) -> Result<Self> {
        let mut d = Diagram::default();
        let mut index = 0;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("in ") {
                if index != 0 || !d.bottom.is_empty() {
                    return Err(Error::Parse {
                        index,
                        message: "boundary line must come first".into(),
                    });
                }
                for t in rest.split_whitespace() {
                    d.bottom.push(match t {
                        "U" | "u" => Dir::Up,
                        "D" | "d" => Dir::Down,
                        _ => {
                            return Err(Error::Parse {
                                index,
                                message: format!("bad boundary orientation `{}`", t),
                            })
                        }
                    });
                }
                continue;
            }
            d.events.push(parse_event(line, index)?);
            index += 1;
        }
        Ok(d)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if !self.bottom.is_empty() {
            s.push_str("in");
            for d in &self.bottom {
                s.push_str(if *d == Dir::Up { " U" } else { " D" });
            }
            s.push('\n');
        }
        for e in &self.events {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }

    pub fn trace(&self) -> Result<Trace> {
        Trace::build(self)
    }
}

impl FromStr for Diagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Diagram::parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strand {
    pub arc: usize,
    pub dir: Dir,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInfo {
    pub id: usize,
    /// Index of the cup that starts the component, `None` if it enters
    /// through the bottom boundary.
    pub first_cup: Option<usize>,
    pub writhe: i64,
}

/// Result of walking a word: every slice, the arc partition and the
/// crossing statistics.
#[derive(Debug, Clone)]
pub struct Trace {
    /// `slices[k]` lists the strands just below event `k`; the last entry is
    /// the top boundary.
    pub slices: Vec<Vec<Strand>>,
    pub arc_comp: Vec<usize>,
    pub components: Vec<ComponentInfo>,
    lk2: Vec<Vec<i64>>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

impl Trace {
    fn build(d: &Diagram) -> Result<Trace> {
        let mut slices = Vec::with_capacity(d.events.len() + 1);
        let mut cur: Vec<Strand> = Vec::new();
        let mut arc_start: Vec<Option<usize>> = Vec::new();
        for dir in &d.bottom {
            cur.push(Strand {
                arc: arc_start.len(),
                dir: *dir,
            });
            arc_start.push(None);
        }
        let mut dsu = Dsu((0..arc_start.len()).collect());
        for (k, ev) in d.events.iter().enumerate() {
            slices.push(cur.clone());
            let bad = |m: String| Error::Malformed { index: k, message: m };
            match *ev {
                Event::Cup(p, t) => {
                    if p > cur.len() {
                        return Err(bad(format!("cup at {} but width is {}", p, cur.len())));
                    }
                    let arc = arc_start.len();
                    arc_start.push(Some(k));
                    dsu.0.push(arc);
                    let (l, r) = t.cup_dirs();
                    cur.insert(p, Strand { arc, dir: r });
                    cur.insert(p, Strand { arc, dir: l });
                }
                Event::Cap(p, t) => {
                    if p + 1 >= cur.len() {
                        return Err(bad(format!("cap at {} but width is {}", p, cur.len())));
                    }
                    let want = t.cap_dirs();
                    if (cur[p].dir, cur[p + 1].dir) != want {
                        return Err(bad(format!(
                            "cap {} expects orientations {:?}, found {:?}",
                            p,
                            want,
                            (cur[p].dir, cur[p + 1].dir)
                        )));
                    }
                    dsu.union(cur[p].arc, cur[p + 1].arc);
                    cur.drain(p..p + 2);
                }
                Event::Cross(p, _) => {
                    if p + 1 >= cur.len() {
                        return Err(bad(format!("crossing at {} but width is {}", p, cur.len())));
                    }
                    cur.swap(p, p + 1);
                }
            }
        }
        if cur.len() != d.bottom.len() {
            return Err(Error::Malformed {
                index: d.events.len(),
                message: format!(
                    "top boundary has {} strands, bottom has {}",
                    cur.len(),
                    d.bottom.len()
                ),
            });
        }
        for (i, s) in cur.iter().enumerate() {
            if s.dir != d.bottom[i] {
                return Err(Error::Malformed {
                    index: d.events.len(),
                    message: format!("top strand {} is not oriented like the bottom one", i),
                });
            }
            dsu.union(s.arc, i);
        }
        slices.push(cur);

        // components in order of first appearance: bottom strands, then cups
        let n_arcs = arc_start.len();
        let mut root_comp: Vec<Option<usize>> = vec![None; n_arcs];
        let mut components = Vec::new();
        let mut arc_comp = vec![0; n_arcs];
        for a in 0..n_arcs {
            let root = dsu.find(a);
            let id = match root_comp[root] {
                Some(id) => id,
                None => {
                    let id = components.len();
                    root_comp[root] = Some(id);
                    components.push(ComponentInfo {
                        id,
                        first_cup: arc_start[a],
                        writhe: 0,
                    });
                    id
                }
            };
            arc_comp[a] = id;
        }
        let n = components.len();
        let mut lk2 = vec![vec![0i64; n]; n];
        for (k, ev) in d.events.iter().enumerate() {
            if let Event::Cross(p, s) = *ev {
                let a = arc_comp[slices[k][p].arc];
                let b = arc_comp[slices[k][p + 1].arc];
                if a == b {
                    components[a].writhe += s.value();
                } else {
                    lk2[a][b] += s.value();
                    lk2[b][a] += s.value();
                }
            }
        }
        Ok(Trace {
            slices,
            arc_comp,
            components,
            lk2,
        })
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn comp_of(&self, event: usize, pos: usize) -> usize {
        self.arc_comp[self.slices[event][pos].arc]
    }

    pub fn strand(&self, event: usize, pos: usize) -> Strand {
        self.slices[event][pos]
    }

    pub fn width(&self, event: usize) -> usize {
        self.slices[event].len()
    }

    pub fn max_width(&self) -> usize {
        self.slices.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Linking number of two distinct components.
    pub fn lk(&self, a: usize, b: usize) -> i64 {
        if a == b {
            return self.components[a].writhe;
        }
        self.lk2[a][b] / 2
    }

    /// Full linking matrix with the writhes on the diagonal.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n_components();
        (0..n)
            .map(|i| (0..n).map(|j| self.lk(i, j)).collect())
            .collect()
    }

    /// Indices of the events that touch a component.
    pub fn events_of(&self, d: &Diagram, comp: usize) -> Vec<usize> {
        d.events
            .iter()
            .enumerate()
            .filter(|(k, ev)| match **ev {
                Event::Cup(p, _) => self.comp_of(k + 1, p) == comp,
                Event::Cap(p, _) | Event::Cross(p, _) => {
                    self.comp_of(*k, p) == comp || self.comp_of(*k, p + 1) == comp
                }
            })
            .map(|(k, _)| k)
            .collect()
    }
}

/// Linking data of a surgery presentation split into surgery part `L` and
/// colored part `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingData {
    /// Linking matrix of `L`, framings on the diagonal.
    pub b: Vec<Vec<i64>>,
    /// `lk(L_j, K_ν)`.
    pub lk_lk: Vec<Vec<i64>>,
    /// Framings of the `K` components.
    pub fr_k: Vec<i64>,
    /// `lk(K_μ, K_ν)`, writhes on the diagonal.
    pub lk_kk: Vec<Vec<i64>>,
}

impl LinkingData {
    pub fn from_trace(t: &Trace, l: &[usize], k: &[usize]) -> LinkingData {
        let m = |rows: &[usize], cols: &[usize]| -> Vec<Vec<i64>> {
            rows.iter()
                .map(|&i| cols.iter().map(|&j| t.lk(i, j)).collect())
                .collect()
        };
        LinkingData {
            b: m(l, l),
            lk_lk: m(l, k),
            fr_k: k.iter().map(|&j| t.components[j].writhe).collect(),
            lk_kk: m(k, k),
        }
    }
}

#[cfg(test)]
pub(crate) mod samples {
    use super::*;

    pub fn unknot() -> Diagram {
        Diagram::parse("cup 0 L\ncap 0 R").unwrap()
    }

    /// Unknot with `f` blackboard kinks of the given sign.
    pub fn framed_unknot(f: i64) -> Diagram {
        let s = if f >= 0 { "x+" } else { "x-" };
        let mut t = String::from("cup 0 L\n");
        for _ in 0..f.abs() {
            t.push_str(&format!("cup 1 L\n{} 0\ncap 1 R\n", s));
        }
        t.push_str("cap 0 R\n");
        Diagram::parse(&t).unwrap()
    }

    /// Hopf link with linking number `sign`.
    pub fn hopf(sign: Sign) -> Diagram {
        let s = if sign == Sign::Plus { "x+" } else { "x-" };
        Diagram::parse(&format!(
            "cup 0 L\ncup 2 L\n{s} 1\n{s} 1\ncap 2 R\ncap 0 R"
        ))
        .unwrap()
    }

    pub fn unlink2() -> Diagram {
        Diagram::parse("cup 0 L\ncup 2 L\ncap 2 R\ncap 0 R").unwrap()
    }
}
