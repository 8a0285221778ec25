use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GroupError;
use crate::arith::is_prime;

/// Textual group constructor.
///
/// Grammar: `cyclic:n` | `elab:p:k` | `abelian:a1,a2,...` | `heis:p` |
/// `wreath:p` | `meta:m:n:i:t` | `double:p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u64),
    ElementaryAbelian { p: u64, rank: u32 },
    Abelian(Vec<u64>),
    Heisenberg(u64),
    Wreath(u64),
    Metacyclic { m: u64, n: u64, i: u64, t: u64 },
    /// `(Z/p)^3 ⋊ (Z/p)^3` with the action through the unitriangular group.
    Double(u64),
}

impl GroupSpec {
    /// Order predicted by the constructor's formula, `None` on overflow.
    pub fn formulaic_order(&self) -> Option<u64> {
        match self {
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::ElementaryAbelian { p, rank } => p.checked_pow(*rank),
            GroupSpec::Abelian(factors) => factors
                .iter()
                .try_fold(1u64, |acc, &a| acc.checked_mul(a)),
            GroupSpec::Heisenberg(p) => p.checked_pow(3),
            GroupSpec::Wreath(p) => p.checked_pow(u32::try_from(*p).ok()?.checked_add(1)?),
            GroupSpec::Metacyclic { m, n, .. } => m.checked_mul(*n),
            GroupSpec::Double(p) => p.checked_pow(6),
        }
    }
}

fn parse_num(s: &str, spec: &str) -> Result<u64, GroupError> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| GroupError::Parse(format!("bad integer `{s}` in `{spec}`")))
}

fn require_prime(p: u64, spec: &str) -> Result<u64, GroupError> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(GroupError::Parse(format!("`{p}` is not prime in `{spec}`")))
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| GroupError::Parse(format!("missing `:` in `{s}`")))?;
        let args: Vec<&str> = rest.split(':').collect();
        let arity = |k: usize| -> Result<(), GroupError> {
            if args.len() == k {
                Ok(())
            } else {
                Err(GroupError::Parse(format!(
                    "`{head}` takes {k} argument(s), got {} in `{s}`",
                    args.len()
                )))
            }
        };
        let positive = |v: u64| -> Result<u64, GroupError> {
            if v == 0 {
                Err(GroupError::Parse(format!("zero parameter in `{s}`")))
            } else {
                Ok(v)
            }
        };
        match head {
            "cyclic" => {
                arity(1)?;
                Ok(GroupSpec::Cyclic(positive(parse_num(args[0], s)?)?))
            }
            "elab" => {
                arity(2)?;
                let p = require_prime(parse_num(args[0], s)?, s)?;
                let k = parse_num(args[1], s)?;
                let rank = u32::try_from(k)
                    .map_err(|_| GroupError::Parse(format!("rank too large in `{s}`")))?;
                Ok(GroupSpec::ElementaryAbelian { p, rank })
            }
            "abelian" => {
                arity(1)?;
                let factors = args[0]
                    .split(',')
                    .map(|a| parse_num(a, s).and_then(positive))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(GroupSpec::Abelian(factors))
            }
            "heis" => {
                arity(1)?;
                Ok(GroupSpec::Heisenberg(require_prime(parse_num(args[0], s)?, s)?))
            }
            "wreath" => {
                arity(1)?;
                Ok(GroupSpec::Wreath(require_prime(parse_num(args[0], s)?, s)?))
            }
            "meta" => {
                arity(4)?;
                let m = positive(parse_num(args[0], s)?)?;
                let n = positive(parse_num(args[1], s)?)?;
                let i = parse_num(args[2], s)?;
                let t = parse_num(args[3], s)?;
                Ok(GroupSpec::Metacyclic { m, n, i, t })
            }
            "double" => {
                arity(1)?;
                Ok(GroupSpec::Double(require_prime(parse_num(args[0], s)?, s)?))
            }
            other => Err(GroupError::Parse(format!("unknown group constructor `{other}`"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::ElementaryAbelian { p, rank } => write!(f, "elab:{p}:{rank}"),
            GroupSpec::Abelian(fs) => {
                let parts: Vec<String> = fs.iter().map(u64::to_string).collect();
                write!(f, "abelian:{}", parts.join(","))
            }
            GroupSpec::Heisenberg(p) => write!(f, "heis:{p}"),
            GroupSpec::Wreath(p) => write!(f, "wreath:{p}"),
            GroupSpec::Metacyclic { m, n, i, t } => write!(f, "meta:{m}:{n}:{i}:{t}"),
            GroupSpec::Double(p) => write!(f, "double:{p}"),
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
