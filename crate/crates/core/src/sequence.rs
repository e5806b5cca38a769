//! Strictly increasing sequences of positive integers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceDescriptor {
    /// `n_k = k` for `k >= 1`.
    Identity,
    /// `n_k = ceil(c ρ^k)` for `k >= 1`.
    Geometric { c: Rational, rho: Rational },
    Explicit { terms: Vec<u64> },
}

impl SequenceDescriptor {
    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceDescriptor::Identity => Ok(()),
            SequenceDescriptor::Geometric { c, rho } => {
                if !c.is_positive() || *rho <= Rational::one() {
                    return Err(Error::Parse("geometric sequence needs c > 0 and rho > 1".into()));
                }
                Ok(())
            }
            SequenceDescriptor::Explicit { terms } => {
                if terms.first() == Some(&0) || terms.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Parse("explicit sequence must be strictly increasing and positive".into()));
                }
                Ok(())
            }
        }
    }

    /// All terms `<= bound`, in order.
    pub fn terms_upto(&self, bound: u64) -> Result<Vec<u64>> {
        self.validate()?;
        match self {
            SequenceDescriptor::Identity => Ok((1..=bound).collect()),
            SequenceDescriptor::Explicit { terms } => Ok(terms.iter().copied().take_while(|&t| t <= bound).collect()),
            SequenceDescriptor::Geometric { c, rho } => {
                let mut out: Vec<u64> = Vec::new();
                let mut power = rho.clone();
                loop {
                    let term = (c * &power)
                        .ceil_i64()
                        .ok_or_else(|| Error::Parse("geometric term overflows".into()))?;
                    if term as u64 > bound {
                        return Ok(out);
                    }
                    if out.last().is_some_and(|&last| last >= term as u64) {
                        return Err(Error::Parse(format!("geometric sequence repeats the term {term}")));
                    }
                    out.push(term.max(1) as u64);
                    power = &power * rho;
                }
            }
        }
    }
}

impl fmt::Display for SequenceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceDescriptor::Identity => write!(f, "identity"),
            SequenceDescriptor::Geometric { c, rho } => write!(f, "geometric:{c},{rho}"),
            SequenceDescriptor::Explicit { terms } => {
                let t: Vec<String> = terms.iter().map(u64::to_string).collect();
                write!(f, "explicit:{}", t.join(","))
            }
        }
    }
}

/// Parses `identity`, `geometric:c,rho` or `explicit:a,b,c`.
impl FromStr for SequenceDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let d = match s.trim().split_once(':') {
            None if s.trim() == "identity" => SequenceDescriptor::Identity,
            Some(("geometric", rest)) => {
                let (c, rho) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("expected geometric:c,rho, got `{s}`")))?;
                SequenceDescriptor::Geometric { c: c.trim().parse()?, rho: rho.trim().parse()? }
            }
            Some(("explicit", rest)) => SequenceDescriptor::Explicit {
                terms: rest
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad term `{t}`"))))
                    .collect::<Result<_>>()?,
            },
            _ => return Err(Error::Parse(format!("unknown sequence `{s}`"))),
        };
        d.validate()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms() {
        assert_eq!(SequenceDescriptor::Identity.terms_upto(3).unwrap(), vec![1, 2, 3]);
        let g: SequenceDescriptor = "geometric:1,10".parse().unwrap();
        assert_eq!(g.terms_upto(1000).unwrap(), vec![10, 100, 1000]);
        let g: SequenceDescriptor = "geometric:1/2,3".parse().unwrap();
        assert_eq!(g.terms_upto(50).unwrap(), vec![2, 5, 14, 41]);
        assert!("explicit:3,2".parse::<SequenceDescriptor>().is_err());
        assert!("geometric:1,1".parse::<SequenceDescriptor>().is_err());
        assert_eq!("explicit:2,5".parse::<SequenceDescriptor>().unwrap().to_string(), "explicit:2,5");
    }
}
