//! The interface flux family and its named presets.
//!
//! At an interface with traces `L` (element on the smaller-coordinate side)
//! and `R`:
//!
//! ```text
//! e1* = (1 - β) e1_L + β e1_R + ξ (e2_L - e2_R)
//! e2* = β e2_L + (1 - β) e2_R + τ (e1_L - e1_R)
//! ```
//!
//! `τ` penalizes jumps of `e1` and enters the `x1` equation, `ξ` penalizes
//! jumps of `e2` and enters the `x2` equation. This is the placement used by
//! the element matrices `R1 = τ (..)` and `R2 = ξ (..)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The triple `(β, τ, ξ)` with `β ∈ [0, 1]` and `τ, ξ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxParams {
    beta: f64,
    tau: f64,
    xi: f64,
}

impl FluxParams {
    pub fn new(beta: f64, tau: f64, xi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidFlux(format!("beta = {beta} outside [0, 1]")));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::InvalidFlux(format!("tau = {tau} must be finite and >= 0")));
        }
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::InvalidFlux(format!("xi = {xi} must be finite and >= 0")));
        }
        Ok(Self { beta, tau, xi })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// No numerical damping: `τ = ξ = 0`.
    pub fn is_conservative(&self) -> bool {
        self.tau == 0.0 && self.xi == 0.0
    }

    pub fn central() -> Self {
        Self { beta: 0.5, tau: 0.0, xi: 0.0 }
    }

    /// `β = 0`: `e1*` from the left element, `e2*` from the right one.
    pub fn upwind_left() -> Self {
        Self { beta: 0.0, tau: 0.0, xi: 0.0 }
    }

    /// `β = 1`: `e1*` from the right element, `e2*` from the left one.
    pub fn upwind_right() -> Self {
        Self { beta: 1.0, tau: 0.0, xi: 0.0 }
    }
}

impl fmt::Display for FluxParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "beta={}, tau={}, xi={}", self.beta, self.tau, self.xi)
    }
}

/// Named flux presets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxPreset {
    Central,
    UpwindLeft,
    UpwindRight,
    LaxFriedrichs(f64),
    DampedCentral(f64),
}

impl FluxPreset {
    pub fn params(&self) -> Result<FluxParams> {
        match *self {
            FluxPreset::Central => Ok(FluxParams::central()),
            FluxPreset::UpwindLeft => Ok(FluxParams::upwind_left()),
            FluxPreset::UpwindRight => Ok(FluxParams::upwind_right()),
            FluxPreset::LaxFriedrichs(c) | FluxPreset::DampedCentral(c) => {
                if !(c > 0.0 && c.is_finite()) {
                    return Err(Error::InvalidFlux(format!(
                        "penalty constant must be finite and > 0, got {c}"
                    )));
                }
                FluxParams::new(0.5, c, c)
            }
        }
    }
}

/// Parses `central`, `upwind_left`, `upwind_right`, `lax_friedrichs:<c>`
/// and `damped_central:<c>` (the parenthesized form `name(c)` is accepted too).
impl FromStr for FluxPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = if let Some((name, rest)) = s.split_once(':') {
            (name, Some(rest))
        } else if let Some((name, rest)) = s.split_once('(') {
            (name, Some(rest.strip_suffix(')').unwrap_or(rest)))
        } else {
            (s, None)
        };
        let constant = |arg: Option<&str>| -> Result<f64> {
            let arg = arg.ok_or_else(|| {
                Error::InvalidFlux(format!("preset `{name}` needs a constant, e.g. `{name}:0.5`"))
            })?;
            arg.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidFlux(format!("bad constant `{arg}` in `{s}`")))
        };
        let preset = match (name.trim(), arg) {
            ("central", None) => FluxPreset::Central,
            ("upwind_left", None) => FluxPreset::UpwindLeft,
            ("upwind_right", None) => FluxPreset::UpwindRight,
            ("lax_friedrichs", arg) => FluxPreset::LaxFriedrichs(constant(arg)?),
            ("damped_central", arg) => FluxPreset::DampedCentral(constant(arg)?),
            _ => return Err(Error::UnknownPreset(s.to_string())),
        };
        preset.params()?;
        Ok(preset)
    }
}

/// Nodal effort traces on both sides of an interface.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InterfaceTraces {
    pub e1_left: f64,
    pub e1_right: f64,
    pub e2_left: f64,
    pub e2_right: f64,
}

/// `(e1*, e2*)` at an interface.
pub fn interface_flux(params: &FluxParams, t: &InterfaceTraces) -> (f64, f64) {
    let FluxParams { beta, tau, xi } = *params;
    let e1 = (1.0 - beta) * t.e1_left + beta * t.e1_right + xi * (t.e2_left - t.e2_right);
    let e2 = beta * t.e2_left + (1.0 - beta) * t.e2_right + tau * (t.e1_left - t.e1_right);
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn presets() {
        assert_eq!(FluxPreset::Central.params().unwrap(), FluxParams::new(0.5, 0.0, 0.0).unwrap());
        assert_eq!(FluxPreset::UpwindLeft.params().unwrap(), FluxParams::new(0.0, 0.0, 0.0).unwrap());
        assert_eq!(FluxPreset::UpwindRight.params().unwrap(), FluxParams::new(1.0, 0.0, 0.0).unwrap());
        assert_eq!(
            FluxPreset::DampedCentral(0.5).params().unwrap(),
            FluxParams::new(0.5, 0.5, 0.5).unwrap()
        );
        assert_eq!(
            FluxPreset::LaxFriedrichs(2.0).params().unwrap(),
            FluxParams::new(0.5, 2.0, 2.0).unwrap()
        );
        assert!(FluxPreset::LaxFriedrichs(0.0).params().is_err());
    }

    #[test]
    fn parse_presets() {
        assert_eq!("central".parse::<FluxPreset>().unwrap(), FluxPreset::Central);
        assert_eq!("upwind_left".parse::<FluxPreset>().unwrap(), FluxPreset::UpwindLeft);
        assert_eq!(
            "damped_central:0.5".parse::<FluxPreset>().unwrap(),
            FluxPreset::DampedCentral(0.5)
        );
        assert_eq!(
            "lax_friedrichs(1.5)".parse::<FluxPreset>().unwrap(),
            FluxPreset::LaxFriedrichs(1.5)
        );
        assert!(matches!("roe".parse::<FluxPreset>(), Err(Error::UnknownPreset(_))));
        assert!("damped_central".parse::<FluxPreset>().is_err());
        assert!("damped_central:-1".parse::<FluxPreset>().is_err());
    }

    #[test]
    fn invalid_params() {
        assert!(FluxParams::new(1.5, 0.0, 0.0).is_err());
        assert!(FluxParams::new(-0.1, 0.0, 0.0).is_err());
        assert!(FluxParams::new(0.5, -1.0, 0.0).is_err());
        assert!(FluxParams::new(0.5, 0.0, f64::NAN).is_err());
        assert!(FluxParams::new(0.5, 0.0, 0.0).unwrap().is_conservative());
        assert!(!FluxParams::new(0.5, 0.0, 0.1).unwrap().is_conservative());
    }

    #[test]
    fn flux_examples() {
        let t = InterfaceTraces { e1_left: 1.0, e1_right: 0.0, e2_left: 0.0, e2_right: 0.0 };
        assert_eq!(interface_flux(&FluxParams::central(), &t), (0.5, 0.0));

        let damped = FluxParams::new(0.5, 0.5, 0.5).unwrap();
        let t = InterfaceTraces { e1_left: 0.0, e1_right: 0.0, e2_left: 1.0, e2_right: -1.0 };
        assert_eq!(interface_flux(&damped, &t), (1.0, 0.0));
    }

    #[test]
    fn penalty_placement() {
        // τ acts on e1 jumps inside e2*, ξ on e2 jumps inside e1*.
        let p = FluxParams::new(0.0, 2.0, 3.0).unwrap();
        let t = InterfaceTraces { e1_left: 1.0, e1_right: 0.0, e2_left: 0.0, e2_right: 0.0 };
        assert_eq!(interface_flux(&p, &t), (1.0, 2.0));
        let t = InterfaceTraces { e1_left: 0.0, e1_right: 0.0, e2_left: 1.0, e2_right: 0.0 };
        assert_eq!(interface_flux(&p, &t), (3.0, 0.0));
    }

    proptest! {
        #[test]
        fn consistency(beta in 0.0f64..=1.0, tau in 0.0f64..5.0, xi in 0.0f64..5.0,
                       v in -10.0f64..10.0, w in -10.0f64..10.0) {
            let p = FluxParams::new(beta, tau, xi).unwrap();
            let t = InterfaceTraces { e1_left: v, e1_right: v, e2_left: w, e2_right: w };
            let (e1, e2) = interface_flux(&p, &t);
            prop_assert!((e1 - v).abs() <= 1e-14 * (1.0 + v.abs()));
            prop_assert!((e2 - w).abs() <= 1e-14 * (1.0 + w.abs()));
        }
    }
}
