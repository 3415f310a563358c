use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

/// Exact rational valuations, normalized so that `v(p) = 1`.
pub type Rat = Ratio<i64>;

/// A valuation that is either known exactly or only bounded from below.
///
/// `AtLeast(n)` is what a value that is zero to precision `n` reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Val {
    Exact(Rat),
    AtLeast(Rat),
}

impl Val {
    pub fn exact_int(v: i64) -> Self {
        Val::Exact(Rat::from_integer(v))
    }

    pub fn at_least_int(v: i64) -> Self {
        Val::AtLeast(Rat::from_integer(v))
    }

    /// The certified lower bound (the value itself when exact).
    pub fn bound(&self) -> Rat {
        match *self {
            Val::Exact(v) | Val::AtLeast(v) => v,
        }
    }

    pub fn exact(&self) -> Option<Rat> {
        match *self {
            Val::Exact(v) => Some(v),
            Val::AtLeast(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Val::Exact(_))
    }

    /// Valuation of a sum-free minimum: the smaller certified value wins,
    /// and the result is exact only if an exact value is strictly below every bound.
    pub fn min(self, other: Val) -> Val {
        match (self, other) {
            (Val::Exact(a), Val::Exact(b)) => Val::Exact(a.min(b)),
            (Val::AtLeast(a), Val::AtLeast(b)) => Val::AtLeast(a.min(b)),
            (Val::Exact(a), Val::AtLeast(b)) | (Val::AtLeast(b), Val::Exact(a)) => {
                if a < b {
                    Val::Exact(a)
                } else {
                    Val::AtLeast(b)
                }
            }
        }
    }

    pub fn shift(self, by: Rat) -> Val {
        match self {
            Val::Exact(v) => Val::Exact(v + by),
            Val::AtLeast(v) => Val::AtLeast(v + by),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Exact(v) => write!(f, "{}", fmt_rat(v)),
            Val::AtLeast(v) => write!(f, ">={}", fmt_rat(v)),
        }
    }
}

/// `"a"` for integers, `"a/b"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a"` or `"a/b"` into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}
