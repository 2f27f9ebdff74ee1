//! Exact rational coordinates.
//!
//! All interval endpoints and grid steps are `Ratio<i64>`. Lower endpoints
//! may be `-inf` (runs escaping to the open end of a doubly infinite arc),
//! which [`Lo`] encodes so that ordinary comparisons do the right thing.

use std::fmt;

pub type Rat = num::rational::Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Formats without a denominator when integral: `3`, `-1/2`.
pub fn fmt_rat(r: Rat) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` with optional sign. Rejects zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: i64 = n
        .trim()
        .parse()
        .map_err(|_| format!("bad rational numerator in `{s}`"))?;
    let d: i64 = d
        .trim()
        .parse()
        .map_err(|_| format!("bad rational denominator in `{s}`"))?;
    if d == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rat::new(n, d))
}

/// A lower endpoint: a finite rational or minus infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lo {
    MinusInf,
    At(Rat),
}

impl Lo {
    pub fn finite(self) -> Option<Rat> {
        match self {
            Lo::MinusInf => None,
            Lo::At(r) => Some(r),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Lo::At(_))
    }
}

impl PartialOrd for Lo {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lo {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Lo::*;
        match (self, other) {
            (MinusInf, MinusInf) => std::cmp::Ordering::Equal,
            (MinusInf, At(_)) => std::cmp::Ordering::Less,
            (At(_), MinusInf) => std::cmp::Ordering::Greater,
            (At(a), At(b)) => a.cmp(b),
        }
    }
}

impl From<Rat> for Lo {
    fn from(r: Rat) -> Self {
        Lo::At(r)
    }
}

impl fmt::Display for Lo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lo::MinusInf => write!(f, "-inf"),
            Lo::At(r) => write!(f, "{}", fmt_rat(*r)),
        }
    }
}

impl fmt::Debug for Lo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An arc length: a positive rational or `inf`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ArcLen {
    Finite(Rat),
    Infinite,
}

impl ArcLen {
    pub fn finite(self) -> Option<Rat> {
        match self {
            ArcLen::Finite(r) => Some(r),
            ArcLen::Infinite => None,
        }
    }

    /// `b <= len`, treating `inf` as larger than every rational.
    pub fn admits(self, b: Rat) -> bool {
        match self {
            ArcLen::Finite(l) => b <= l,
            ArcLen::Infinite => true,
        }
    }
}

impl fmt::Display for ArcLen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcLen::Finite(r) => write!(f, "{}", fmt_rat(*r)),
            ArcLen::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-2", "1/2", "-7/3", "5/10"] {
            let r = parse_rat(s).unwrap();
            let back = parse_rat(&fmt_rat(r)).unwrap();
            assert_eq!(r, back);
        }
        assert_eq!(fmt_rat(parse_rat("5/10").unwrap()), "1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn lo_orders_below_everything() {
        assert!(Lo::MinusInf < Lo::At(rat_int(-1_000_000)));
        assert!(Lo::At(rat(1, 2)) < Lo::At(rat_int(1)));
    }
}
