//! Positive test domains on `Z ⊕ Z`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestDomain {
    Singleton(i64, i64),
    /// `{(i, j) : i >= a}`
    HalfplaneI(i64),
    /// `{(i, j) : j >= b}`
    HalfplaneJ(i64),
    /// `{(i, j) : max(i - a, j - b) >= 0}`
    MaxUnion(i64, i64),
    /// `i0 <= i <= i1`, `j0 <= j <= j1`
    Box {
        i0: i64,
        i1: i64,
        j0: i64,
        j1: i64,
    },
    /// `{(i, j) : i = a}`
    LineI(i64),
    Finite(BTreeSet<(i64, i64)>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("domain {0} meets a diagonal in infinitely many points")]
pub struct UnboundedDomain(pub String);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse test domain `{0}` (expected point:I,J | halfplane-i:A | halfplane-j:B | max:A,B | box:I0,I1,J0,J1 | line-i:A)")]
pub struct DomainParseError(pub String);

impl TestDomain {
    pub fn hat() -> Self {
        TestDomain::Singleton(0, 0)
    }

    pub fn contains(&self, (i, j): (i64, i64)) -> bool {
        match self {
            TestDomain::Singleton(a, b) => i == *a && j == *b,
            TestDomain::HalfplaneI(a) => i >= *a,
            TestDomain::HalfplaneJ(b) => j >= *b,
            TestDomain::MaxUnion(a, b) => (i - a).max(j - b) >= 0,
            TestDomain::Box { i0, i1, j0, j1 } => {
                (*i0..=*i1).contains(&i) && (*j0..=*j1).contains(&j)
            }
            TestDomain::LineI(a) => i == *a,
            TestDomain::Finite(points) => points.contains(&(i, j)),
        }
    }

    /// Checks both axioms: every point escapes the domain when pushed far
    /// enough down-left, and the domain contains every lattice point of the
    /// rectangle spanned by two comparable members.
    pub fn validate(&self) -> bool {
        match self {
            TestDomain::Finite(points) => points.iter().all(|&(i, j)| {
                points.iter().all(|&(i2, j2)| {
                    if i > i2 || j > j2 {
                        return true;
                    }
                    (i..=i2).all(|a| (j..=j2).all(|b| points.contains(&(a, b))))
                })
            }),
            _ => true,
        }
    }

    /// All `j` with `(j + oi, j + oj)` in the domain, ascending.
    pub fn diagonal(&self, oi: i64, oj: i64) -> Result<Vec<i64>, UnboundedDomain> {
        let single = |a: i64, b: i64| if a == b { vec![a] } else { Vec::new() };
        match self {
            TestDomain::Singleton(a, b) => Ok(single(a - oi, b - oj)),
            TestDomain::LineI(a) => Ok(vec![a - oi]),
            TestDomain::Box { i0, i1, j0, j1 } => {
                let lo = (i0 - oi).max(j0 - oj);
                let hi = (i1 - oi).min(j1 - oj);
                Ok((lo..=hi).collect())
            }
            TestDomain::Finite(points) => Ok(points
                .iter()
                .filter(|&&(i, j)| i - oi == j - oj)
                .map(|&(i, _)| i - oi)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()),
            TestDomain::HalfplaneI(_) | TestDomain::HalfplaneJ(_) | TestDomain::MaxUnion(_, _) => {
                Err(UnboundedDomain(self.to_string()))
            }
        }
    }
}

impl fmt::Display for TestDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestDomain::Singleton(a, b) => write!(f, "point:{a},{b}"),
            TestDomain::HalfplaneI(a) => write!(f, "halfplane-i:{a}"),
            TestDomain::HalfplaneJ(b) => write!(f, "halfplane-j:{b}"),
            TestDomain::MaxUnion(a, b) => write!(f, "max:{a},{b}"),
            TestDomain::Box { i0, i1, j0, j1 } => write!(f, "box:{i0},{i1},{j0},{j1}"),
            TestDomain::LineI(a) => write!(f, "line-i:{a}"),
            TestDomain::Finite(points) => {
                f.write_str("finite:")?;
                let parts: Vec<String> = points.iter().map(|(i, j)| format!("{i}/{j}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for TestDomain {
    type Err = DomainParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DomainParseError(s.to_string());
        if s == "hat" {
            return Ok(TestDomain::hat());
        }
        let (kind, args) = s.split_once(':').ok_or_else(err)?;
        let nums: Vec<i64> = args
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        match (kind, nums.as_slice()) {
            ("point", [a, b]) => Ok(TestDomain::Singleton(*a, *b)),
            ("halfplane-i", [a]) => Ok(TestDomain::HalfplaneI(*a)),
            ("halfplane-j", [b]) => Ok(TestDomain::HalfplaneJ(*b)),
            ("max", [a, b]) => Ok(TestDomain::MaxUnion(*a, *b)),
            ("box", [i0, i1, j0, j1]) => Ok(TestDomain::Box {
                i0: *i0,
                i1: *i1,
                j0: *j0,
                j1: *j1,
            }),
            ("line-i", [a]) => Ok(TestDomain::LineI(*a)),
            _ => Err(err()),
        }
    }
}
