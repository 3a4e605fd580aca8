//! Framed oriented links as Morse words, and their colored evaluation.

mod eval;
mod open;
pub mod rewrite;
mod word;

pub use eval::{evaluate_rt, evaluate_tangle, expand_colors, sum_expanded, EvalOptions, DEFAULT_MAX_WIDTH};
pub use open::{bracket, default_opening, eps_shift_check, f_prime, open_component, open_word, Opened};
pub use word::{over_left, sign_for, ComponentInfo, Diagram, Dir, Event, LinkingData, Strand, Trace, Turn};

#[cfg(test)]
pub(crate) use word::samples;


#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::testgen::*;
    use super::*;
    use crate::repcat::{Color, ModuleCache};
    use crate::scalar::{c64, rel_dev, ScalarContext, Sign, C64};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn cache(r: i64) -> ModuleCache {
        ModuleCache::new(ScalarContext::new(r).unwrap())
    }

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn closed_unknot_vanishes() {
        let c = cache(4);
        let v = evaluate_rt(&c, &unknot(), &[Color::simple(0.3, 0.0)], opts()).unwrap();
        // oracle: pivotal trace of the identity
        let m = c.module(&Color::simple(0.3, 0.0)).unwrap();
        let tr: C64 = m.pivot_diag(c.ctx()).iter().sum();
        assert!(v.norm() < 1e-10 && (v - tr).norm() < 1e-10);
    }

    #[test]
    fn eps_loop_is_minus_one() {
        let c = cache(4);
        for w in ["cup 0 L\ncap 0 R", "cup 0 R\ncap 0 L"] {
            let d = Diagram::parse(w).unwrap();
            let v = evaluate_rt(&c, &d, &[Color::Eps(1)], opts()).unwrap();
            assert!((v + 1.0).norm() < 1e-12, "{w}: {v}");
        }
        let c8 = cache(8);
        let v = evaluate_rt(&c8, &unknot(), &[Color::Eps(1)], opts()).unwrap();
        assert!((v + 1.0).norm() < 1e-12);
    }

    #[test]
    fn unknot_f_prime_is_modified_dimension() {
        let c = cache(4);
        for w in ["cup 0 L\ncap 0 R", "cup 0 R\ncap 0 L"] {
            let d = Diagram::parse(w).unwrap();
            for a in [c64(0.3, 0.0), c64(0.5, 0.2), c64(0.0, 0.0)] {
                let col = [Color::Simple(a)];
                let b = bracket(&c, &d, &col, 0, opts()).unwrap();
                assert!((b - 1.0).norm() < 1e-12);
                let f = f_prime(&c, &d, &col, None, opts()).unwrap();
                assert!((f - c.ctx().mod_dim(a).unwrap()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn hopf_values() {
        let c = cache(4);
        let col = [Color::simple(0.5, 0.0), Color::simple(0.5, 0.0)];
        let f = f_prime(&c, &hopf(Sign::Plus), &col, None, opts()).unwrap();
        let expect = C64::from_polar(4.0, PI / 16.0) * -1.0;
        assert!((f - expect).norm() < 1e-10, "{f} vs {expect}");
        for r in [4, 8] {
            let c = cache(r);
            let (a, b) = (c64(0.3, 0.1), c64(1.7, -0.2));
            let col = [Color::Simple(a), Color::Simple(b)];
            for s in [Sign::Plus, Sign::Minus] {
                let f = f_prime(&c, &hopf(s), &col, None, opts()).unwrap();
                let expect = -(r as f64) * c.ctx().qpow(a * b * s.value() as f64);
                assert!(rel_dev(f, expect) < 1e-9, "r={r} {s:?}: {f} vs {expect}");
                let br = bracket(&c, &hopf(s), &col, 0, opts()).unwrap();
                assert!(rel_dev(br, expect / c.ctx().mod_dim(a).unwrap()) < 1e-9);
            }
        }
    }

    #[test]
    fn framed_unknot_twists() {
        for r in [4, 8] {
            let c = cache(r);
            let a = c64(0.4, 0.3);
            let col = [Color::Simple(a)];
            let theta = {
                let m = c.module(&col[0]).unwrap();
                crate::repcat::twist_matrix(c.ctx(), &m).unwrap()
            };
            for f in -2..=2 {
                let v = f_prime(&c, &framed_unknot(f), &col, None, opts()).unwrap();
                let expect = theta.powi(f as i32) * c.ctx().mod_dim(a).unwrap();
                assert!(rel_dev(v, expect) < 1e-9, "r={r} f={f}");
                assert!(rel_dev(theta, c.ctx().twist_scalar(a)) < 1e-10);
            }
        }
    }

    #[test]
    fn ambidexterity_on_hopf() {
        let c = cache(4);
        let col = [Color::simple(0.3, 0.0), Color::simple(1.45, 0.2)];
        for s in [Sign::Plus, Sign::Minus] {
            let f0 = f_prime(&c, &hopf(s), &col, Some(0), opts()).unwrap();
            let f1 = f_prime(&c, &hopf(s), &col, Some(1), opts()).unwrap();
            assert!(rel_dev(f0, f1) < 1e-8);
        }
    }

    #[test]
    fn opening_errors() {
        let c = cache(4);
        let col = [Color::Eps(1)];
        assert!(matches!(
            f_prime(&c, &unknot(), &col, None, opts()),
            Err(crate::Error::NotRenormalizable(_))
        ));
        assert!(matches!(
            f_prime(&c, &unknot(), &col, Some(0), opts()),
            Err(crate::Error::InvalidOpening(0, _))
        ));
        let col2 = [Color::simple(0.3, 0.0), Color::Eps(1)];
        assert!(matches!(
            open_component(&c, &unlink2(), &col2, 1),
            Err(crate::Error::InvalidOpening(1, _))
        ));
    }

    #[test]
    fn opened_word_structure() {
        let d = hopf(Sign::Plus);
        let t = d.trace().unwrap();
        for comp in 0..2 {
            let o = open_word(&d, &t, comp).unwrap();
            let ot = o.diagram.trace().unwrap();
            assert_eq!(ot.n_components(), 2);
            assert_eq!(o.comp_map[comp], 0);
            assert_eq!(ot.lk(0, 1), 1);
        }
        let o = open_word(&unknot(), &unknot().trace().unwrap(), 0).unwrap();
        assert_eq!(o.diagram.bottom, vec![Dir::Up]);
    }

    #[test]
    fn width_guard() {
        let c = cache(4);
        let col = [Color::simple(0.3, 0.0), Color::simple(0.6, 0.0)];
        let small = EvalOptions { max_width: 20 };
        assert!(matches!(
            f_prime(&c, &hopf(Sign::Plus), &col, None, small),
            Err(crate::Error::Resource(_))
        ));
    }

    #[test]
    fn formal_colors_are_multilinear() {
        let c = cache(4);
        let (a, b1, b2) = (c64(0.3, 0.0), c64(0.6, 0.1), c64(2.6, 0.1));
        let (w1, w2) = (c64(2.0, -1.0), c64(0.5, 0.25));
        let formal = Color::Formal(vec![(w1, Color::Simple(b1)), (w2, Color::Simple(b2))]);
        let d = hopf(Sign::Plus);
        let f = f_prime(&c, &d, &[Color::Simple(a), formal], Some(0), opts()).unwrap();
        let f1 = f_prime(&c, &d, &[Color::Simple(a), Color::Simple(b1)], Some(0), opts()).unwrap();
        let f2 = f_prime(&c, &d, &[Color::Simple(a), Color::Simple(b2)], Some(0), opts()).unwrap();
        assert!(rel_dev(f, w1 * f1 + w2 * f2) < 1e-12);
        // independent check against the closed form
        let r = c.ctx().r() as f64;
        let oracle = w1 * (-r * c.ctx().qpow(a * b1)) + w2 * (-r * c.ctx().qpow(a * b2));
        assert!(rel_dev(f, oracle) < 1e-9);
    }

    #[test]
    fn eps_transparency() {
        let c = cache(4);
        let a = c64(0.35, 0.15);
        let base = f_prime(&c, &unknot(), &[Color::Simple(a)], None, opts()).unwrap();
        let with_eps = f_prime(&c, &unlink2(), &[Color::Simple(a), Color::Eps(1)], None, opts()).unwrap();
        assert!(rel_dev(with_eps, -base) < 1e-10);
        // ε linked once with V_α: one crossing pair
        let qr = Color::Simple(a).degree().q_r_power(c.ctx());
        for s in [Sign::Plus, Sign::Minus] {
            let f = f_prime(&c, &hopf(s), &[Color::Simple(a), Color::Eps(1)], None, opts()).unwrap();
            let pair = if s == Sign::Plus { qr } else { qr.inv() };
            assert!(rel_dev(f, -base * pair) < 1e-10, "{s:?}");
        }
    }

    #[test]
    fn eps_shift_ratio() {
        let c = cache(4);
        let a = c64(0.35, 0.15);
        let qr = |x: C64| c.ctx().qpow(x * c.ctx().rf());
        // 0-framed unknot: σ = 1̄
        let (f0, f1) = eps_shift_check(&c, &unknot(), &[Color::Simple(a)], 0, 1, opts()).unwrap();
        assert!(rel_dev(f1 / f0, c64(-1.0, 0.0)) < 1e-10);
        // 1-framed unknot: σ(K∥) = 1̄ + f + lk(K∥, K)·(α+1)
        let (f0, f1) = eps_shift_check(&c, &framed_unknot(1), &[Color::Simple(a)], 0, 1, opts()).unwrap();
        assert!(rel_dev(f1 / f0, qr(a + 3.0)) < 1e-10);
        assert!(rel_dev(f1 / f0, -qr(a)) < 1e-10);
        // Hopf: σ(K∥) = 1̄ + lk·(β+1)
        let b = c64(0.8, -0.1);
        let (f0, f1) =
            eps_shift_check(&c, &hopf(Sign::Plus), &[Color::Simple(a), Color::Simple(b)], 0, 1, opts())
                .unwrap();
        assert!(rel_dev(f1 / f0, qr(c64(1.0, 0.0) + b + 1.0)) < 1e-10);
    }

    fn snake(d: &Diagram, at: usize, p: usize, left: bool) -> Diagram {
        let t = d.trace().unwrap();
        let o = t.slices[at][p].dir;
        let evs = if left {
            vec![Event::Cup(p, Turn::cup_with_left(o)), Event::Cap(p + 1, Turn::cap_with_left(o.flip()))]
        } else {
            vec![Event::Cup(p + 1, Turn::cup_with_left(o.flip())), Event::Cap(p, Turn::cap_with_left(o))]
        };
        let mut out = d.clone();
        out.events.splice(at..at, evs);
        out
    }

    fn random_colors<R: Rng>(rng: &mut R, n: usize) -> Vec<Color> {
        (0..n)
            .map(|_| {
                let re = if rng.gen_bool(0.5) { rng.gen_range(0.15..0.85) } else { rng.gen_range(1.15..1.85) };
                Color::simple(re, rng.gen_range(-0.3..0.3))
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn isotopy_invariance(seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let c = cache(4);
            let n = rng.gen_range(1..6);
            let d = random_link(&mut rng, 2, n);
            let t = d.trace().unwrap();
            let cols = random_colors(&mut rng, t.n_components());
            let f = f_prime(&c, &d, &cols, Some(0), opts()).unwrap();
            let at = rng.gen_range(2..d.events.len() - 1);
            let w = t.width(at);
            let p = rng.gen_range(0..w - 1);
            let ol = rng.gen_bool(0.5);
            let r2 = insert_braid(&d, at, &[(p, ol), (p, !ol)]);
            let sn = snake(&d, at, rng.gen_range(0..w), rng.gen_bool(0.5));
            let mut variants = vec![r2, sn];
            if w >= 3 {
                let p = rng.gen_range(0..w - 2);
                variants.push(insert_braid(&d, at, &[(p, ol), (p + 1, ol), (p, ol), (p + 1, !ol), (p, !ol), (p + 1, !ol)]));
            }
            for v in variants {
                prop_assert_eq!(v.trace().unwrap().n_components(), t.n_components());
                let g = f_prime(&c, &v, &cols, Some(0), opts()).unwrap();
                prop_assert!((f - g).norm() <= 1e-9 * f.norm().max(1.0), "{} vs {}", f, g);
            }
        }

        #[test]
        fn ambidexterity(seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let c = cache(4);
            let n = rng.gen_range(1..7);
            let d = random_link(&mut rng, 2, n);
            let t = d.trace().unwrap();
            let cols = random_colors(&mut rng, t.n_components());
            let f0 = f_prime(&c, &d, &cols, Some(0), opts()).unwrap();
            for k in 1..t.n_components() {
                let fk = f_prime(&c, &d, &cols, Some(k), opts()).unwrap();
                // split links evaluate to zero; compare those absolutely
                prop_assert!((f0 - fk).norm() <= 1e-8 * f0.norm().max(fk.norm()).max(1e-4), "{} vs {}", f0, fk);
            }
        }
    }
}
