use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::params::{apply_word, check_letters, FrtParams};
use crate::error::{invalid, FrtError, Result};
use crate::geom::{Mat3, Scalar, Vec3};

/// A word `prefix · period period period …` over `{1,2,3,4}`.
///
/// An empty period denotes the finite truncation `prefix`, which names the
/// piece `f_prefix(A)` rather than a single point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address {
    pub prefix: Vec<u8>,
    pub period: Vec<u8>,
}

impl Address {
    pub fn new(prefix: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        check_letters(&prefix)?;
        check_letters(&period)?;
        Ok(Address { prefix, period })
    }

    pub fn periodic(prefix: &[u8], period: &[u8]) -> Result<Self> {
        Self::new(prefix.to_vec(), period.to_vec())
    }

    pub fn finite(prefix: &[u8]) -> Result<Self> {
        Self::new(prefix.to_vec(), Vec::new())
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// The letter at position `k` (0-based) of the infinite word.
    pub fn letter(&self, k: usize) -> Option<u8> {
        if k < self.prefix.len() {
            Some(self.prefix[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(k - self.prefix.len()) % self.period.len()])
        }
    }

    /// Shortest equivalent form: minimal period, then the shortest prefix.
    pub fn normalized(&self) -> Address {
        if self.period.is_empty() {
            return self.clone();
        }
        let m = self.period.len();
        let min_period = (1..=m)
            .find(|&d| m % d == 0 && (0..m).all(|i| self.period[i] == self.period[i % d]))
            .unwrap_or(m);
        let mut prefix = self.prefix.clone();
        let mut period = self.period[..min_period].to_vec();
        while let Some(&last) = prefix.last() {
            if last != *period.last().unwrap() {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Address { prefix, period }
    }
}

fn parse_word(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|ch| match ch.to_digit(10) {
            Some(d @ 1..=4) => Ok(d as u8),
            _ => Err(FrtError::InvalidArgument(format!("bad address letter {ch:?}"))),
        })
        .collect()
}

impl FromStr for Address {
    type Err = FrtError;

    /// Parses `"prefix|period"`; a string without `|` is a finite word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (prefix, period) = match s.split_once('|') {
            Some((a, b)) => (parse_word(a)?, parse_word(b)?),
            None => (parse_word(s)?, Vec::new()),
        };
        if prefix.is_empty() && period.is_empty() {
            return invalid("address is empty");
        }
        Ok(Address { prefix, period })
    }
}

fn word_string(w: &[u8]) -> String {
    w.iter().map(|d| char::from(b'0' + d)).collect()
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.period.is_empty() {
            f.write_str(&word_string(&self.prefix))
        } else {
            write!(f, "{}|{}", word_string(&self.prefix), word_string(&self.period))
        }
    }
}

impl Serialize for Address {
    fn serialize<Z: Serializer>(&self, ser: Z) -> std::result::Result<Z::Ok, Z::Error> {
        ser.collect_str(self)
    }
}

/// The point named by `addr` together with an upper bound on its distance
/// to the true attractor point.
///
/// Periodic addresses are summed in closed form, so the bound is 0 in the
/// exact modes. A finite address returns `f_prefix(0)` with the bound
/// `√3·cᵏ/(1−c)`, the radius of the ball containing the piece.
pub fn eval_address<S: Scalar>(params: &FrtParams<S>, addr: &Address) -> Result<(Vec3<S>, f64)> {
    check_letters(&addr.prefix)?;
    check_letters(&addr.period)?;
    let c = params.c_f64();
    if addr.period.is_empty() {
        if addr.prefix.is_empty() {
            return invalid("address has neither prefix nor period");
        }
        let point = apply_word(params, &addr.prefix, &Vec3::zero())?;
        let bound = 3f64.sqrt() * c.powi(addr.prefix.len() as i32) / (1.0 - c);
        return Ok((point, bound));
    }
    let cp = params.linear();
    let m = addr.period.len() as u32;
    let cycle_sum = apply_word(params, &addr.period, &Vec3::zero())?;
    let tol = if S::EXACT { 0.0 } else { params.tol() * 1e-6 };
    let Some(resolvent) = (Mat3::identity() - cp.pow(m)).inverse(tol) else {
        return invalid("I - (cP)^m is singular");
    };
    let fixed = resolvent.apply(&cycle_sum);
    let point = apply_word(params, &addr.prefix, &fixed)?;
    let bound = if S::EXACT { 0.0 } else { f64::EPSILON * 64.0 / (1.0 - c) };
    Ok((point, bound))
}
