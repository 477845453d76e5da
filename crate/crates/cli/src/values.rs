use std::fmt;
use std::str::FromStr;

/// Inclusive integer range written `a..b`, `a..=b` or a single `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub fn single(v: i64) -> Self {
        Span { lo: v, hi: v }
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// The same range as indices; fails if it dips below `min`.
    pub fn indices(&self, min: usize) -> Result<std::ops::RangeInclusive<usize>, String> {
        if self.lo < min as i64 {
            return Err(format!("range {self} must start at {min} or above"));
        }
        Ok(self.lo as usize..=self.hi as usize)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("expected an integer or a range a..b, got '{s}'");
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
            }
            None => {
                let v = s.parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range '{s}'"));
        }
        Ok(Span { lo, hi })
    }
}

/// One real or a comma-separated list.
#[derive(Clone, Debug, PartialEq)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = s
            .split(',')
            .map(|x| {
                let x = x.trim();
                match x.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(format!("expected a finite number, got '{x}'")),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RealList(v))
    }
}

impl fmt::Display for RealList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("-2..3".parse::<Span>().unwrap(), Span { lo: -2, hi: 3 });
        assert_eq!("1..=4".parse::<Span>().unwrap(), Span { lo: 1, hi: 4 });
        assert_eq!("5".parse::<Span>().unwrap(), Span::single(5));
        assert!("3..1".parse::<Span>().is_err());
        assert!("x".parse::<Span>().is_err());
        assert!(Span { lo: 1, hi: 3 }.indices(2).is_err());
    }

    #[test]
    fn lists() {
        assert_eq!("0.1, 0.5".parse::<RealList>().unwrap().0, vec![0.1, 0.5]);
        assert!("0.1,nan".parse::<RealList>().is_err());
        assert!("".parse::<RealList>().is_err());
    }
}
