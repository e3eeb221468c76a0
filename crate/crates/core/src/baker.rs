//! Explicit constants for the linear-forms-in-logarithms height bound: the
//! `C1(d, s)`, `C2(d, s)` closed forms in both place regimes, the S-unit
//! basis bounds feeding them, the final bound assembly
//!
//! ```text
//! h(P) <= 400 C1 R_S h_K N_v log*(R_S h_K N_v) log(200 C1 C2),
//! ```
//!
//! and an outward-rounded interval audit of the headline coefficient
//! inequality `400 C1 log(200 C1 C2) <= 10^66` at `(d, s) = (18, 9)`.
//!
//! Two archimedean `C1`/`C2` pairs are in circulation for the same
//! inequality; the default [`ArchVariant::Theorem22`] one is the pair whose
//! `(18, 9)` values match the recorded one-significant-figure ceilings
//! (`8e35`, `5e13`); the coarser [`ArchVariant::P77`] pair is kept behind a
//! flag for comparison.

use crate::interval::{factorial, Interval};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BakerError {
    #[error("unit basis bounds need s >= 2, got {0}")]
    TooFewPlaces(usize),
    #[error("invalid bound inputs: {0}")]
    BadInputs(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Regime {
    Archimedean,
    NonArchimedean,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ArchVariant {
    Theorem22,
    P77,
}

/// The pair `(C1, C2)` for one regime, with the inputs echoed back.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LinearFormsConstants {
    pub d: u32,
    pub s: u32,
    pub regime: Regime,
    pub variant: ArchVariant,
    pub c1: f64,
    pub c2: f64,
    /// Set when `(d, s)` exceeds the range the recorded ceilings cover.
    pub out_of_headline_range: bool,
}

/// `log*` as used in the final bound: `max(log x, 1)`.
pub fn log_star(x: f64) -> f64 {
    x.ln().max(1.0)
}

fn fact_sq(s: u32) -> Interval {
    let f = factorial(s - 1);
    f.mul(f)
}

/// `2^(s-k)` as an interval, valid for s - k possibly negative.
fn pow2(exp: i32) -> Interval {
    Interval::exact(2.0f64.powi(exp))
}

fn c1_interval(d: u32, s: u32, regime: Regime, variant: ArchVariant) -> Interval {
    let df = Interval::exact(f64::from(d));
    let sf = Interval::exact(f64::from(s));
    match (regime, variant) {
        (Regime::Archimedean, ArchVariant::Theorem22) => {
            // 12 pi 30^(s+4) (s+1)^5.5 d^2 log(e d) ((s-1)!)^2 / 2^s
            Interval::exact(12.0)
                .mul(Interval::pi())
                .mul(Interval::exact(30.0).powi(s + 4))
                .mul(sf.add(Interval::exact(1.0)).powf(Interval::exact(5.5)))
                .mul(df.powi(2))
                .mul(Interval::e().mul(df).ln())
                .mul(fact_sq(s))
                .div(pow2(s as i32))
        }
        (Regime::Archimedean, ArchVariant::P77) => {
            // 240000 d log(d)^s ((s-1)!)^2 2000^s (s+1)^(3s+9)
            let logd = if d == 1 {
                // log(1)^s = 0 collapses the formula; keep the literal value
                Interval::exact(0.0)
            } else {
                df.ln().powi(s)
            };
            Interval::exact(240000.0)
                .mul(df)
                .mul(logd)
                .mul(fact_sq(s))
                .mul(Interval::exact(2000.0).powi(s))
                .mul(sf.add(Interval::exact(1.0)).powi(3 * s + 9))
        }
        (Regime::NonArchimedean, _) => {
            // 12 (6(s+1)d)^(2s+2) log(e^5 s d) ((s-1)!)^2 / (2^(s-2) d^(s-1))
            let base = Interval::exact(6.0)
                .mul(sf.add(Interval::exact(1.0)))
                .mul(df);
            Interval::exact(12.0)
                .mul(base.powi(2 * s + 2))
                .mul(
                    Interval::e()
                        .powi(5)
                        .mul(sf)
                        .mul(df)
                        .ln(),
                )
                .mul(fact_sq(s))
                .div(pow2(s as i32 - 2).mul(df.powi(s - 1)))
        }
    }
}

fn c2_interval(d: u32, s: u32, regime: Regime, variant: ArchVariant) -> Interval {
    let df = Interval::exact(f64::from(d));
    let sf = Interval::exact(f64::from(s));
    match (regime, variant) {
        (Regime::Archimedean, ArchVariant::Theorem22) => {
            // 53 e s ((s-1)!)^2 / 2^(s-3) d^2 log(6d)
            Interval::exact(53.0)
                .mul(Interval::e())
                .mul(sf)
                .mul(fact_sq(s))
                .div(pow2(s as i32 - 3))
                .mul(df.powi(2))
                .mul(Interval::exact(6.0).mul(df).ln())
        }
        (Regime::Archimedean, ArchVariant::P77) => {
            // 8 d ((s-1)!)^2 / 2^s
            Interval::exact(8.0).mul(df).mul(fact_sq(s)).div(pow2(s as i32))
        }
        (Regime::NonArchimedean, _) => {
            // 53 ((s-1)!)^2 / 2^(s-3) d^2 log(6d)
            Interval::exact(53.0)
                .mul(fact_sq(s))
                .div(pow2(s as i32 - 3))
                .mul(df.powi(2))
                .mul(Interval::exact(6.0).mul(df).ln())
        }
    }
}

/// Evaluates the closed forms for `C1` and `C2`.
pub fn constants(d: u32, s: u32, regime: Regime, variant: ArchVariant) -> LinearFormsConstants {
    assert!(d >= 1 && s >= 1, "need d >= 1 and s >= 1");
    LinearFormsConstants {
        d,
        s,
        regime,
        variant,
        c1: c1_interval(d, s, regime, variant).midpoint(),
        c2: c2_interval(d, s, regime, variant).midpoint(),
        out_of_headline_range: d > 18 || s > 9,
    }
}

/// Outward-rounded enclosures of `(C1, C2)` for the audit path.
pub fn constants_interval(
    d: u32,
    s: u32,
    regime: Regime,
    variant: ArchVariant,
) -> (Interval, Interval) {
    (
        c1_interval(d, s, regime, variant),
        c2_interval(d, s, regime, variant),
    )
}

/// S-unit basis bounds: the product bound
/// `((s-1)!)^2 / (2^(s-2) d^(s-1)) * R_S` for the fundamental S-unit
/// heights, and the coefficient `53 ((s-1)!)^2 / 2^(s-3) d^2 log(6d)` that
/// multiplies `h(x)` in the exponent bound `B`.
pub fn unit_basis_bounds(d: u32, s: u32, r_s: f64) -> Result<(f64, f64), BakerError> {
    if s < 2 {
        return Err(BakerError::TooFewPlaces(s as usize));
    }
    if r_s <= 0.0 {
        return Err(BakerError::BadInputs(format!("regulator {r_s} must be positive")));
    }
    let df = Interval::exact(f64::from(d));
    let product = fact_sq(s)
        .div(pow2(s as i32 - 2).mul(df.powi(s - 1)))
        .mul(Interval::point(r_s));
    let b_coeff = fact_sq(s)
        .mul(Interval::exact(53.0))
        .div(pow2(s as i32 - 3))
        .mul(df.powi(2))
        .mul(Interval::exact(6.0).mul(df).ln());
    Ok((product.midpoint(), b_coeff.midpoint()))
}

/// Arithmetic inputs to the final bound.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundInputs {
    pub d: u32,
    pub s: u32,
    pub h_k: f64,
    pub r_s: f64,
    /// Largest prime-ideal norm in `S`; 1 when none.
    pub p_s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub variant: ArchVariant,
    /// Bound evaluated in the archimedean regime with `N_v = 1`.
    pub archimedean_value: f64,
    /// Bound evaluated in the non-archimedean regime with `N_v = P_S`.
    pub non_archimedean_value: f64,
    /// The worst case of the two, which is the final bound.
    pub value: f64,
    pub factors: Vec<(String, f64)>,
}

fn bound_in_regime(inputs: &BoundInputs, regime: Regime, variant: ArchVariant) -> (f64, Vec<(String, f64)>) {
    let c = constants(inputs.d, inputs.s, regime, variant);
    let n_v = match regime {
        Regime::Archimedean => 1.0,
        Regime::NonArchimedean => inputs.p_s,
    };
    let core = inputs.r_s * inputs.h_k * n_v;
    let ls = log_star(core);
    let tail = (200.0 * c.c1 * c.c2).ln();
    let value = 400.0 * c.c1 * core * ls * tail;
    let factors = vec![
        ("400".into(), 400.0),
        ("C1".into(), c.c1),
        ("R_S h_K N_v".into(), core),
        ("log*(R_S h_K N_v)".into(), ls),
        ("log(200 C1 C2)".into(), tail),
    ];
    (value, factors)
}

/// Evaluates the final bound, taking the worst of the archimedean
/// (`N_v = 1`) and non-archimedean (`N_v = P_S`) regimes.
pub fn final_bound(inputs: BoundInputs, variant: ArchVariant) -> Result<BoundReport, BakerError> {
    if inputs.d < 1 || inputs.s < 1 || inputs.r_s <= 0.0 || inputs.h_k < 1.0 || inputs.p_s < 1.0 {
        return Err(BakerError::BadInputs(format!("{inputs:?}")));
    }
    let (arch, arch_factors) = bound_in_regime(&inputs, Regime::Archimedean, variant);
    let (nonarch, nonarch_factors) = bound_in_regime(&inputs, Regime::NonArchimedean, variant);
    let (value, factors) = if arch >= nonarch {
        (arch, arch_factors)
    } else {
        (nonarch, nonarch_factors)
    };
    Ok(BoundReport {
        inputs,
        variant,
        archimedean_value: arch,
        non_archimedean_value: nonarch,
        value,
        factors,
    })
}

/// Certified check of the single inequality behind the headline constant:
/// `400 * C1(18,9) * log(200 * C1(18,9) * C2(18,9)) <= 10^66` in both
/// regimes, evaluated in outward-rounded interval arithmetic.
pub fn headline_coefficient_certificate() -> (Interval, bool) {
    let mut worst = Interval::exact(0.0);
    let mut ok = true;
    for regime in [Regime::NonArchimedean, Regime::Archimedean] {
        let (c1, c2) = constants_interval(18, 9, regime, ArchVariant::Theorem22);
        let coefficient = Interval::exact(400.0)
            .mul(c1)
            .mul(Interval::exact(200.0).mul(c1).mul(c2).ln());
        if coefficient.hi > worst.hi {
            worst = coefficient;
        }
        ok &= coefficient.certainly_le(1e66);
    }
    (worst, ok)
}

/// The displayed fractions of the height-drop chain in the bound's proof,
/// reproduced for audit output: the place-pair floor `h/10`, the component
/// floor `h/20`, the near-deepest-point floor `h/40`, and the class-number
/// correction `h_K log 2` (the factor 2 of the `h/40` branch is absorbed by
/// the final rounding).
#[derive(Clone, Debug, Serialize)]
pub struct HeightDropLedger {
    pub h: f64,
    pub divisor_pair_floor: f64,
    pub component_floor: f64,
    pub unit_distance_floor: f64,
    pub class_number_correction: f64,
    /// Set when `h` is at or below the proof's standing assumption `h > 1000`.
    pub out_of_regime: bool,
}

pub fn height_drop_ledger(h: f64, h_k: f64) -> HeightDropLedger {
    HeightDropLedger {
        h,
        divisor_pair_floor: h / 10.0,
        component_floor: h / 20.0,
        unit_distance_floor: h / 40.0,
        class_number_correction: h_k * 2f64.ln(),
        out_of_regime: h <= 1000.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recorded_ceilings_at_18_9() {
        let arch = constants(18, 9, Regime::Archimedean, ArchVariant::Theorem22);
        assert!(arch.c1 > 1e35 && arch.c1 <= 8e35, "C1 arch = {:e}", arch.c1);
        assert!(arch.c2 > 1e12 && arch.c2 <= 5e13, "C2 arch = {:e}", arch.c2);
        let na = constants(18, 9, Regime::NonArchimedean, ArchVariant::Theorem22);
        assert!(na.c1 > 1e59 && na.c1 <= 7e59, "C1 nonarch = {:e}", na.c1);
        assert!(na.c2 > 1e11 && na.c2 <= 3e12, "C2 nonarch = {:e}", na.c2);
        // the coarser variant overshoots the recorded archimedean ceiling
        let p77 = constants(18, 9, Regime::Archimedean, ArchVariant::P77);
        assert!(p77.c1 > 8e35);
    }

    #[test]
    fn constants_monotone_on_the_grid() {
        // strictly increasing in d throughout; strictly increasing in s from
        // s = 2 on (the s = 1 column is a formal value: the S-unit group has
        // rank 0 there and the ((s-1)!)^2 / 2^(s-2) factor is degenerate)
        for regime in [Regime::Archimedean, Regime::NonArchimedean] {
            for s in 1..=9u32 {
                for d in 1..=17u32 {
                    let a = constants(d, s, regime, ArchVariant::Theorem22);
                    let b = constants(d + 1, s, regime, ArchVariant::Theorem22);
                    assert!(b.c1 > a.c1, "{regime:?} c1 d-step at ({d},{s})");
                    assert!(b.c2 > a.c2, "{regime:?} c2 d-step at ({d},{s})");
                }
            }
            for d in 1..=18u32 {
                for s in 2..=8u32 {
                    let a = constants(d, s, regime, ArchVariant::Theorem22);
                    let b = constants(d, s + 1, regime, ArchVariant::Theorem22);
                    assert!(b.c1 > a.c1, "{regime:?} c1 s-step at ({d},{s})");
                    assert!(b.c2 > a.c2, "{regime:?} c2 s-step at ({d},{s})");
                }
            }
        }
    }

    #[test]
    fn unit_basis_bound_examples() {
        let (prod, coeff) = unit_basis_bounds(1, 2, 1.0).unwrap();
        assert!((prod - 1.0).abs() < 1e-12);
        assert!((coeff - 106.0 * 6f64.ln()).abs() < 1e-9);
        assert!(matches!(unit_basis_bounds(5, 1, 1.0), Err(BakerError::TooFewPlaces(1))));
        // factorial recurrence across consecutive s at fixed d, R_S
        for s in 2..9u32 {
            let (p1, _) = unit_basis_bounds(3, s, 2.5).unwrap();
            let (p2, _) = unit_basis_bounds(3, s + 1, 2.5).unwrap();
            let ratio = p2 / p1;
            let expected = f64::from(s * s) / (2.0 * 3.0);
            assert!((ratio - expected).abs() / expected < 1e-12);
        }
        let (_, coeff_18_9) = unit_basis_bounds(18, 9, 1.0).unwrap();
        let expected = 53.0 * (40320.0f64 * 40320.0) / 64.0 * 324.0 * 108f64.ln();
        assert!((coeff_18_9 - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn headline_certificate_holds() {
        let (coefficient, ok) = headline_coefficient_certificate();
        assert!(ok, "coefficient interval {coefficient:?}");
        assert!(coefficient.hi <= 1e66);
        assert!(coefficient.lo > 1e63, "sanity: the bound is genuinely huge");
    }

    #[test]
    fn final_bound_examples_and_monotonicity() {
        let trivial = final_bound(
            BoundInputs { d: 18, s: 9, h_k: 1.0, r_s: 1.0, p_s: 1.0 },
            ArchVariant::Theorem22,
        )
        .unwrap();
        // log* floor engaged: value = 400 C1 log(200 C1 C2) in the worst regime
        let c = constants(18, 9, Regime::NonArchimedean, ArchVariant::Theorem22);
        let expected = 400.0 * c.c1 * (200.0 * c.c1 * c.c2).ln();
        assert!((trivial.value - expected).abs() / expected < 1e-12);
        assert!(trivial.value <= 1e66);

        // monotone in each of h_K, R_S, P_S
        let base = BoundInputs { d: 2, s: 3, h_k: 1.0, r_s: 5.0, p_s: 7.0 };
        let v0 = final_bound(base, ArchVariant::Theorem22).unwrap().value;
        for bumped in [
            BoundInputs { h_k: 2.0, ..base },
            BoundInputs { r_s: 6.0, ..base },
            BoundInputs { p_s: 11.0, ..base },
        ] {
            let v = final_bound(bumped, ArchVariant::Theorem22).unwrap().value;
            assert!(v > v0);
        }
        assert!(final_bound(
            BoundInputs { d: 0, s: 3, h_k: 1.0, r_s: 5.0, p_s: 7.0 },
            ArchVariant::Theorem22
        )
        .is_err());
    }

    #[test]
    fn final_bound_cross_checked_by_independent_assembly() {
        // independent re-derivation at (d, s) = (2, 3), R_S = 5, h_K = 1,
        // P_S = 7 straight from the displayed formulas, written separately
        // from the production path
        let (d, s) = (2.0f64, 3.0f64);
        let f = 2.0f64; // (3-1)! = 2
        let c1_arch = 12.0 * std::f64::consts::PI
            * 30f64.powf(s + 4.0)
            * (s + 1.0).powf(5.5)
            * d * d
            * (std::f64::consts::E * d).ln()
            * (f * f)
            / 2f64.powf(s);
        let c2_arch = 53.0 * std::f64::consts::E * s * (f * f) / 2f64.powf(s - 3.0)
            * d * d
            * (6.0 * d).ln();
        let c1_na = 12.0
            * (6.0 * (s + 1.0) * d).powf(2.0 * s + 2.0)
            * (std::f64::consts::E.powi(5) * s * d).ln()
            * (f * f)
            / (2f64.powf(s - 2.0) * d.powf(s - 1.0));
        let c2_na = 53.0 * (f * f) / 2f64.powf(s - 3.0) * d * d * (6.0 * d).ln();
        let core = 5.0 * 1.0; // R_S h_K
        let eval = |c1: f64, c2: f64, nv: f64| {
            400.0 * c1 * core * nv * (core * nv).ln().max(1.0) * (200.0 * c1 * c2).ln()
        };
        let expected = eval(c1_arch, c2_arch, 1.0).max(eval(c1_na, c2_na, 7.0));
        let got = final_bound(
            BoundInputs { d: 2, s: 3, h_k: 1.0, r_s: 5.0, p_s: 7.0 },
            ArchVariant::Theorem22,
        )
        .unwrap()
        .value;
        assert!((got - expected).abs() / expected < 1e-9, "{got:e} vs {expected:e}");
    }

    #[test]
    fn height_drop_fractions() {
        let ledger = height_drop_ledger(2000.0, 3.0);
        assert_eq!(ledger.divisor_pair_floor, 200.0);
        assert_eq!(ledger.component_floor, 100.0);
        assert_eq!(ledger.unit_distance_floor, 50.0);
        assert!((ledger.class_number_correction - 3.0 * 2f64.ln()).abs() < 1e-12);
        assert!(!ledger.out_of_regime);
        assert!(height_drop_ledger(900.0, 1.0).out_of_regime);
    }
}
