use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repcat::Color;
use crate::scalar::{c64, Mod2C, ScalarContext, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KirbyForm {
    /// `Ω_α = Σ_{k=1}^{r/2} d(α+2k−1) V_{α+2k−1}`.
    #[default]
    Omega,
    /// `Ω̃_α = ½ Σ_{k=1}^{r} d(α+2k−r−1) V_{α+2k−r−1}`.
    Tilde,
}

/// Representative of `c` with real part in `(0, 2]`.
pub fn canonical_alpha(c: Mod2C) -> C64 {
    let v = c.value();
    if v.re == 0.0 {
        c64(2.0, v.im)
    } else {
        v
    }
}

/// Kirby color of degree `ᾱ` built on the representative `alpha`.
pub fn kirby_color(ctx: &ScalarContext, alpha: C64, form: KirbyForm) -> Result<Color> {
    if ctx.as_integer(alpha).is_some() {
        return Err(Error::NotComputable(format!(
            "no Kirby color of integral degree (alpha = {})",
            alpha
        )));
    }
    let r = ctx.r() as i64;
    let (ks, offset, scale) = match form {
        KirbyForm::Omega => (1..=r / 2, -1, 1.0),
        KirbyForm::Tilde => (1..=r, -r - 1, 0.5),
    };
    let terms = ks
        .map(|k| {
            let b = alpha + (2 * k + offset) as f64;
            Ok((ctx.mod_dim(b)? * scale, Color::Simple(b)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Color::Formal(terms))
}

/// `scale · Ω_α` as a single formal color.
pub fn scaled(color: Color, scale: C64) -> Color {
    match color {
        Color::Formal(ts) => Color::Formal(ts.into_iter().map(|(w, c)| (w * scale, c)).collect()),
        c => Color::Formal(vec![(scale, c)]),
    }
}
