//! Saturating damping nonlinearities.
//!
//! Each catalog member is a bounded odd primitive `F` with finite limits at
//! `±∞` and strict bounds `F(-∞) < F(x) < F(∞)` for all `x`, together with its
//! derivative `f = F'` (the velocity-coupling coefficient in the oscillator).

use std::fmt;
use std::str::FromStr;

use crate::scalar::{real, Real};

/// Catalog of saturating nonlinearities.
///
/// `Zero` is not part of the user-facing catalog: it stands for `f ≡ 0`
/// (the plain linear oscillator) and is used as an exactly solvable
/// reference. It violates the strict saturation bounds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SaturatingNonlinearity {
    /// `F(x) = x / √(x² + 1)`
    Sigmoid,
    /// `F(x) = (2/π)·atan x`
    AtanScaled,
    /// `F(x) = tanh x`
    Tanh,
    /// `F ≡ 0` (linear reference, not a catalog member)
    Zero,
}

impl SaturatingNonlinearity {
    /// The three user-facing catalog members.
    pub const CATALOG: [SaturatingNonlinearity; 3] = [
        SaturatingNonlinearity::Sigmoid,
        SaturatingNonlinearity::AtanScaled,
        SaturatingNonlinearity::Tanh,
    ];

    /// Primitive `F(x)`.
    pub fn eval<R: Real>(&self, x: R) -> R {
        match self {
            // x/hypot(x,1) stays stable when x² overflows.
            SaturatingNonlinearity::Sigmoid => x / x.hypot(R::one()),
            SaturatingNonlinearity::AtanScaled => {
                real::<R>(2.0) * R::FRAC_1_PI() * x.atan()
            }
            SaturatingNonlinearity::Tanh => x.tanh(),
            SaturatingNonlinearity::Zero => R::zero(),
        }
    }

    /// Derivative `f(x) = F'(x)`.
    pub fn slope<R: Real>(&self, x: R) -> R {
        match self {
            SaturatingNonlinearity::Sigmoid => {
                let u = x * x + R::one();
                u.powf(real::<R>(-1.5))
            }
            SaturatingNonlinearity::AtanScaled => {
                real::<R>(2.0) * R::FRAC_1_PI() / (x * x + R::one())
            }
            SaturatingNonlinearity::Tanh => {
                let t = x.tanh();
                R::one() - t * t
            }
            SaturatingNonlinearity::Zero => R::zero(),
        }
    }

    /// Limit `F(+∞)`.
    pub fn limit_pos<R: Real>(&self) -> R {
        match self {
            SaturatingNonlinearity::Zero => R::zero(),
            _ => R::one(),
        }
    }

    /// Limit `F(-∞)`.
    pub fn limit_neg<R: Real>(&self) -> R {
        match self {
            SaturatingNonlinearity::Zero => R::zero(),
            _ => -R::one(),
        }
    }

    /// Saturation span `F(+∞) − F(-∞)`.
    pub fn span<R: Real>(&self) -> R {
        self.limit_pos::<R>() - self.limit_neg::<R>()
    }

    /// Stable catalog tag used by configuration files.
    pub fn tag(&self) -> &'static str {
        match self {
            SaturatingNonlinearity::Sigmoid => "sigmoid",
            SaturatingNonlinearity::AtanScaled => "atan_scaled",
            SaturatingNonlinearity::Tanh => "tanh",
            SaturatingNonlinearity::Zero => "zero",
        }
    }
}

impl fmt::Display for SaturatingNonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Error produced when a tag does not name a catalog member.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown nonlinearity tag {tag:?}; expected one of sigmoid, atan_scaled, tanh")]
pub struct UnknownNonlinearity {
    pub tag: String,
}

impl FromStr for SaturatingNonlinearity {
    type Err = UnknownNonlinearity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sigmoid" => Ok(SaturatingNonlinearity::Sigmoid),
            "atan_scaled" => Ok(SaturatingNonlinearity::AtanScaled),
            "tanh" => Ok(SaturatingNonlinearity::Tanh),
            other => Err(UnknownNonlinearity {
                tag: other.to_owned(),
            }),
        }
    }
}
