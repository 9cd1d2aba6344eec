//! Extended reals: finite f64 values plus a distinguished −∞.
//!
//! The entropy-style functionals in this crate evaluate expressions of the
//! form Σ wᵢ·log(xᵢ) where some xᵢ may be 0. Two conventions are load-bearing
//! and centralized here: −∞ absorbs addition, and a zero weight kills a −∞
//! factor (0·log 0 = 0). Positive infinity is never produced; a negative
//! weight meeting −∞ would be +∞ and is rejected by the callers.

/// A finite real number or −∞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
}

impl ExtendedReal {
    /// Wraps a float, mapping IEEE −∞ to the distinguished value.
    /// Panics on NaN and +∞, which no functional here can produce.
    pub fn from_f64(v: f64) -> ExtendedReal {
        assert!(!v.is_nan(), "NaN reached ExtendedReal");
        assert!(v != f64::INFINITY, "+inf reached ExtendedReal");
        if v == f64::NEG_INFINITY {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::Finite(v)
        }
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, ExtendedReal::NegInf)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedReal::NegInf => None,
            ExtendedReal::Finite(v) => Some(*v),
        }
    }

    /// The value as an IEEE float, −∞ included.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => *v,
        }
    }

    pub fn add(self, other: ExtendedReal) -> ExtendedReal {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::NegInf,
        }
    }

    /// w·x with the 0·(−∞) = 0 convention. Negative w with x = −∞ would be
    /// +∞ and panics; callers guard this (it indicates invalid weights).
    pub fn weighted(w: f64, x: ExtendedReal) -> ExtendedReal {
        if w == 0.0 {
            return ExtendedReal::Finite(0.0);
        }
        match x {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(w * v),
            ExtendedReal::NegInf => {
                assert!(w > 0.0, "negative weight on -inf would be +inf");
                ExtendedReal::NegInf
            }
        }
    }

    /// True when self ≤ other + tol, treating −∞ as smaller than everything.
    pub fn le_with_tol(&self, other: &ExtendedReal, tol: f64) -> bool {
        match (self, other) {
            (ExtendedReal::NegInf, _) => true,
            (ExtendedReal::Finite(_), ExtendedReal::NegInf) => false,
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => *a <= *b + tol,
        }
    }
}

impl std::fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedReal::NegInf => write!(f, "-inf"),
            ExtendedReal::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Sums a slice of finite values in a canonical order (ascending by total
/// order), so that any permutation of the inputs yields the bit-identical
/// result. All block-functional reductions in this crate go through here;
/// that is what makes relabeling invariance exact rather than approximate.
pub fn sum_sorted(values: &mut Vec<f64>) -> f64 {
    values.sort_unstable_by(|a, b| a.total_cmp(b));
    values.iter().sum()
}
