use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::FamilyError;
use crate::numerics::{PrecisionContext, Real};

/// The degree tuple d_1..d_n, validated against Σ 1/d_i < 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DegreeVector {
    degrees: Vec<u32>,
}

impl TryFrom<Vec<i64>> for DegreeVector {
    type Error = FamilyError;
    fn try_from(v: Vec<i64>) -> Result<Self, FamilyError> {
        validate_degrees(&v)
    }
}

impl From<DegreeVector> for Vec<i64> {
    fn from(d: DegreeVector) -> Self {
        d.degrees.iter().map(|&x| x as i64).collect()
    }
}

pub fn validate_degrees(raw: &[i64]) -> Result<DegreeVector, FamilyError> {
    if raw.len() < 2 {
        return Err(FamilyError::ConstraintViolated(format!(
            "need at least two degrees, got {}",
            raw.len()
        )));
    }
    if let Some(bad) = raw.iter().find(|&&d| !(2..=1 << 20).contains(&d)) {
        return Err(FamilyError::ConstraintViolated(format!("degree {bad} out of range")));
    }
    let sum: Rational64 = raw.iter().map(|&d| Rational64::new(1, d)).sum();
    if sum >= Rational64::from_integer(1) {
        return Err(FamilyError::ConstraintViolated(format!(
            "sum of reciprocals is {sum}, must be < 1"
        )));
    }
    Ok(DegreeVector { degrees: raw.iter().map(|&d| d as u32).collect() })
}

impl DegreeVector {
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.degrees
    }

    /// d_i, 1-based.
    pub fn d(&self, i: usize) -> u32 {
        self.degrees[i - 1]
    }

    pub fn first(&self) -> u32 {
        self.degrees[0]
    }

    pub fn last(&self) -> u32 {
        self.degrees[self.n() - 1]
    }

    pub fn dmax(&self) -> u32 {
        *self.degrees.iter().max().unwrap()
    }

    pub fn total(&self) -> u32 {
        self.degrees.iter().sum()
    }

    /// D_i = d_i + d_{i+1}, 1-based, i < n.
    pub fn big_d(&self, i: usize) -> u32 {
        self.d(i) + self.d(i + 1)
    }

    pub fn is_odd(&self) -> bool {
        self.n() % 2 == 1
    }

    /// ν = d_n/(d_n − 1) · Σ_{i<n} 1/d_i.
    pub fn nu(&self) -> Rational64 {
        let dn = self.last() as i64;
        let s: Rational64 = self.degrees[..self.n() - 1]
            .iter()
            .map(|&d| Rational64::new(1, d as i64))
            .sum();
        Rational64::new(dn, dn - 1) * s
    }

    /// τ = (d_1 d_n d_max^{2(d_1−d_n)/d_1})^{1/Σ_{i<n} d_n/d_i}.
    pub fn tau(&self) -> PowerProduct {
        let (d1, dn, dm) = (self.first() as i64, self.last() as i64, self.dmax() as i64);
        let s: Rational64 = self.degrees[..self.n() - 1]
            .iter()
            .map(|&d| Rational64::new(dn, d as i64))
            .sum();
        let outer = s.recip();
        PowerProduct::new(vec![
            ((d1 * dn) as u64, outer),
            (dm as u64, Rational64::new(2 * (d1 - dn), d1) * outer),
        ])
    }

    /// μ = (d_1 d_n)^{−d_n/(d_n−1)} · d_max^{2(d_n−d_1)/(d_1(d_n−1))}.
    pub fn mu(&self) -> PowerProduct {
        let (d1, dn, dm) = (self.first() as i64, self.last() as i64, self.dmax() as i64);
        PowerProduct::new(vec![
            ((d1 * dn) as u64, Rational64::new(-dn, dn - 1)),
            (dm as u64, Rational64::new(2 * (dn - d1), d1 * (dn - 1))),
        ])
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Π base^exponent with exact rational exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProduct {
    pub factors: Vec<(u64, Rational64)>,
}

impl PowerProduct {
    pub fn new(factors: Vec<(u64, Rational64)>) -> Self {
        let factors = factors
            .into_iter()
            .filter(|(b, e)| *b != 1 && *e != Rational64::from_integer(0))
            .collect();
        PowerProduct { factors }
    }

    pub fn eval<R: Real>(&self, ctx: PrecisionContext) -> R {
        let mut log = R::from_i64(0, ctx);
        for (b, e) in &self.factors {
            let lb = R::from_i64(*b as i64, ctx).ln();
            log = log + lb * rational::<R>(*e, ctx);
        }
        log.exp()
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|(b, e)| format!("{b}^({e})")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

pub fn rational<R: Real>(q: Rational64, ctx: PrecisionContext) -> R {
    R::ratio(*q.numer(), *q.denom(), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{mp, Mp};
    use rug::ops::Pow;

    #[test]
    fn examples() {
        let d = validate_degrees(&[3, 3]).unwrap();
        assert_eq!(d.big_d(1), 6);
        assert_eq!(d.dmax(), 3);
        assert_eq!(d.nu(), Rational64::new(1, 2));

        let d = validate_degrees(&[4, 4, 4]).unwrap();
        assert_eq!(d.nu(), Rational64::new(2, 3));
        let c = PrecisionContext::SOLVER_DEFAULT;
        let tau: Mp = d.tau().eval(c);
        assert!((tau - mp(4.0, c)).abs() < mp(1e-45, c));
        let mu: Mp = d.mu().eval(c);
        let expect = mp(2.0, c).pow(&(mp(-16.0, c) / mp(3.0, c)));
        assert!((mu - expect).abs() < mp(1e-47, c));
    }

    #[test]
    fn constraint_boundary() {
        assert!(validate_degrees(&[2, 2]).is_err());
        assert!(validate_degrees(&[2, 3]).is_ok());
        assert!(validate_degrees(&[3, 3, 3]).is_err());
        assert!(validate_degrees(&[5]).is_err());
        assert!(validate_degrees(&[1, 9]).is_err());
    }

    #[test]
    fn serde_validates() {
        let d: DegreeVector = serde_json::from_str("[4,4,4]").unwrap();
        assert_eq!(d.n(), 3);
        assert!(serde_json::from_str::<DegreeVector>("[2,2]").is_err());
    }
}
