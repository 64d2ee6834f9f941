use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Geometric integer grid `start:stop:xF`, inclusive of `start` and of `stop`
/// when it is reached. A bare integer is a one-point grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub start: u64,
    pub stop: u64,
    pub factor: u64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("bad grid `{input}`: {reason}")]
pub struct GridError {
    input: String,
    reason: &'static str,
}

impl GridSpec {
    pub fn values(&self) -> Vec<u64> {
        let mut out = vec![self.start];
        let mut v = self.start;
        while let Some(next) = v.checked_mul(self.factor) {
            if next > self.stop {
                break;
            }
            out.push(next);
            v = next;
        }
        out
    }
}

impl FromStr for GridSpec {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| GridError {
            input: s.to_owned(),
            reason,
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |p: &str| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| err("expected a nonnegative integer"))
        };
        let spec = match parts.as_slice() {
            [one] => {
                let v = int(one)?;
                GridSpec {
                    start: v,
                    stop: v,
                    factor: 2,
                }
            }
            [start, stop, factor] => {
                let factor = factor
                    .trim()
                    .strip_prefix('x')
                    .ok_or_else(|| err("step must look like x2"))?;
                GridSpec {
                    start: int(start)?,
                    stop: int(stop)?,
                    factor: int(factor)?,
                }
            }
            _ => return Err(err("expected start:stop:xF")),
        };
        if spec.start == 0 {
            return Err(err("start must be at least 1"));
        }
        if spec.stop < spec.start {
            return Err(err("stop is below start"));
        }
        if spec.factor < 2 {
            return Err(err("factor must be at least 2"));
        }
        Ok(spec)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:x{}", self.start, self.stop, self.factor)
    }
}

impl Serialize for GridSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
