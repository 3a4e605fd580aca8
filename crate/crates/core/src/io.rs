//! JSON presentation files.
//!
//! Components are listed in trace order of the diagram (the order of their
//! first cups). A component with orientation `"-"` runs against the cup
//! variants of the word; it is reversed on load and written back as `"+"`.

use serde::{Deserialize, Serialize};

use crate::diagram::rewrite::reverse_component;
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::repcat::Color;
use crate::scalar::{c64, Mod2C, ScalarContext, C64};
use crate::surgery::{kirby_color, Component, KirbyForm, LinkPresentation, Role};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub r: i64,
    pub diagram: Vec<String>,
    pub components: Vec<ComponentEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub id: String,
    pub role: Role,
    #[serde(default = "plus")]
    pub orientation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<ColorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<[f64; 2]>,
}

fn plus() -> String {
    "+".into()
}

fn one() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ColorSpec {
    Simple {
        alpha: [f64; 2],
    },
    Eps {
        k: i64,
    },
    Kirby {
        alpha: [f64; 2],
        #[serde(default = "one")]
        scale: [f64; 2],
        #[serde(default)]
        form: KirbyForm,
    },
    Formal {
        terms: Vec<FormalTerm>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormalTerm {
    pub weight: [f64; 2],
    pub color: ColorSpec,
}

fn z(v: [f64; 2]) -> C64 {
    c64(v[0], v[1])
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl ColorSpec {
    pub fn to_color(&self, ctx: &ScalarContext) -> Result<Color> {
        Ok(match self {
            ColorSpec::Simple { alpha } => Color::Simple(z(*alpha)),
            ColorSpec::Eps { k } => Color::Eps(*k),
            ColorSpec::Kirby { alpha, scale, form } => {
                crate::surgery::kirby::scaled(kirby_color(ctx, z(*alpha), *form)?, z(*scale))
            }
            ColorSpec::Formal { terms } => Color::Formal(
                terms
                    .iter()
                    .map(|t| Ok((z(t.weight), t.color.to_color(ctx)?)))
                    .collect::<Result<_>>()?,
            ),
        })
    }

    pub fn from_color(c: &Color) -> Result<ColorSpec> {
        Ok(match c {
            Color::Simple(a) => ColorSpec::Simple { alpha: pair(*a) },
            Color::Eps(k) => ColorSpec::Eps { k: *k },
            Color::Formal(ts) => ColorSpec::Formal {
                terms: ts
                    .iter()
                    .map(|(w, c)| {
                        Ok(FormalTerm {
                            weight: pair(*w),
                            color: ColorSpec::from_color(c)?,
                        })
                    })
                    .collect::<Result<_>>()?,
            },
            other => {
                return Err(Error::InvalidColor(format!(
                    "{} has no file representation",
                    other
                )))
            }
        })
    }
}

impl PresentationFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidPresentation(format!("json: {}", e)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn context(&self) -> Result<ScalarContext> {
        ScalarContext::new(self.r)
    }

    pub fn diagram(&self) -> Result<Diagram> {
        Diagram::parse(&self.diagram.join("\n"))
    }

    /// Builds the presentation. Surgery components without a spin value are
    /// given `0̄` when `allow_missing_spin` is set and rejected otherwise.
    pub fn to_presentation(&self, ctx: &ScalarContext, allow_missing_spin: bool) -> Result<LinkPresentation> {
        let mut d = self.diagram()?;
        let t = d.trace()?;
        if t.n_components() != self.components.len() {
            return Err(Error::InvalidPresentation(format!(
                "diagram has {} components but the file lists {}",
                t.n_components(),
                self.components.len()
            )));
        }
        for (i, e) in self.components.iter().enumerate() {
            match e.orientation.as_str() {
                "+" => {}
                "-" => {
                    let t = d.trace()?;
                    d = reverse_component(&d, &t, i).diagram;
                }
                o => {
                    return Err(Error::InvalidPresentation(format!(
                        "component {}: orientation must be + or -, found {}",
                        e.id, o
                    )))
                }
            }
        }
        let comps = self
            .components
            .iter()
            .map(|e| {
                let color = e.color.as_ref().map(|c| c.to_color(ctx)).transpose()?;
                let spin = match (e.spin, &color, e.role) {
                    (Some(s), _, _) => Mod2C::new(z(s)),
                    (None, Some(c), Role::Physical) => c.degree(),
                    (None, _, _) if allow_missing_spin => Mod2C::zero(),
                    _ => {
                        return Err(Error::InvalidPresentation(format!(
                            "component {} has no spin value",
                            e.id
                        )))
                    }
                };
                Ok(Component {
                    id: e.id.clone(),
                    role: e.role,
                    color,
                    spin,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LinkPresentation::new(d, comps)
    }

    pub fn from_presentation(r: i64, p: &LinkPresentation) -> Result<Self> {
        Ok(PresentationFile {
            r,
            diagram: p.diagram().events.iter().map(|e| e.to_string()).collect(),
            components: p
                .components()
                .iter()
                .map(|c| {
                    Ok(ComponentEntry {
                        id: c.id.clone(),
                        role: c.role,
                        orientation: plus(),
                        color: c.color.as_ref().map(ColorSpec::from_color).transpose()?,
                        spin: Some(pair(c.spin.value())),
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

/// Parses a file and builds its presentation with every spin value given.
pub fn load(text: &str) -> Result<(ScalarContext, LinkPresentation)> {
    let f = PresentationFile::parse(text)?;
    let ctx = f.context()?;
    let p = f.to_presentation(&ctx, false)?;
    Ok((ctx, p))
}
