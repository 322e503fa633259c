use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// An exponent vector `n in N^b`.
///
/// Ordered by total degree, then lexicographically with larger powers of
/// earlier variables first (`T_1 > ... > T_b`), so that iteration lists
/// `1, T_1, T_2, T_1^2, T_1 T_2, T_2^2, ...`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        Exponent(v)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All exponents of total degree `<= degree` in ascending order.
    pub fn all_up_to(nvars: usize, degree: u32) -> Vec<Exponent> {
        let mut out = Vec::new();
        for d in 0..=degree {
            out.extend(Self::all_of_degree(nvars, d));
        }
        out
    }

    /// Exponents of total degree exactly `d`, `T_1`-heavy first.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Exponent> {
        fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
            if prefix.len() + 1 == nvars {
                prefix.push(d);
                out.push(Exponent(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=d).rev() {
                prefix.push(a);
                rec(nvars, d - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Exponent(Vec::new()));
            }
            return out;
        }
        rec(nvars, d, &mut Vec::new(), &mut out);
        out
    }

    pub fn parse(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("exponent vector must be bracketed: `{s}`")))?;
        if inner.trim().is_empty() {
            return Ok(Exponent(Vec::new()));
        }
        inner
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent `{x}`"))))
            .collect::<Result<Vec<_>>>()
            .map(Exponent)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order() {
        let all = Exponent::all_up_to(2, 2);
        let shown: Vec<String> = all.iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["[0,0]", "[1,0]", "[0,1]", "[2,0]", "[1,1]", "[0,2]"]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn counts() {
        // C(b + D, b)
        assert_eq!(Exponent::all_up_to(3, 4).len(), 35);
        assert_eq!(Exponent::all_up_to(1, 6).len(), 7);
    }
}
