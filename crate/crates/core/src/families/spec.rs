use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::degrees::DegreeVector;
use super::schedule::{Family, RingParameters};
use super::FamilyError;
use crate::numerics::{mp, mp_parse, Complex, Mp, PrecisionContext, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum MapKind {
    HyperbolicF { p: u8 },
    ParabolicP,
    ParabolicQ,
    ParabolicR,
    RefPolyG { n: u32 },
    RefPolyGmn { m: u32, n: u32 },
    RefRatH { n: u32 },
    RefRatHmn { m: u32, n: u32 },
}

impl MapKind {
    pub fn family(&self) -> Option<Family> {
        match self {
            MapKind::HyperbolicF { .. } => Some(Family::HyperbolicF),
            MapKind::ParabolicP => Some(Family::P),
            MapKind::ParabolicQ => Some(Family::Q),
            MapKind::ParabolicR => Some(Family::R),
            _ => None,
        }
    }

    pub fn is_reference(&self) -> bool {
        self.family().is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    None,
    P { a: Complex<Mp>, b: Complex<Mp>, c: Complex<Mp> },
    Q { x: Mp, y: Mp, z: Mp, w: Mp, nu: Mp },
    R { s: Mp, t: Mp, z0: Mp, nu: Mp, mu: Mp },
}

/// A fully instantiated map of one of the families.
#[derive(Clone, Debug, PartialEq)]
pub struct MapSpec {
    pub kind: MapKind,
    pub degrees: Option<DegreeVector>,
    pub rings: Option<RingParameters>,
    pub coeffs: Coefficients,
    pub precision: PrecisionContext,
}

/// (A_n, B_n, C_n) from the ring values a_i.
pub fn coefficients_p<R: Real>(
    d: &DegreeVector,
    a: &[Complex<R>],
    ctx: PrecisionContext,
) -> Result<(Complex<R>, Complex<R>, Complex<R>), FamilyError> {
    if a.len() + 1 != d.n() {
        return Err(FamilyError::BadRings(format!("expected {} ring values", d.n() - 1)));
    }
    let one = Complex::<R>::one(ctx);
    let mut c = Complex::<R>::zero(ctx);
    let mut prod = one.clone();
    for (k, ai) in a.iter().enumerate() {
        let i = k + 1;
        let big_d = d.big_d(i);
        let q = ai.powi(big_d as i32);
        let m = one.clone() - q.clone();
        if m.is_zero() {
            return Err(FamilyError::DegenerateDenominator(format!("a_{i}^D_{i} = 1")));
        }
        let term = (q / m.clone()).scale(&R::from_i64(big_d as i64, ctx));
        // (−1)^{i−1} in C, (−1)^i in the product
        if i % 2 == 1 {
            c = c + term;
            prod = prod / m;
        } else {
            c = c - term;
            prod = prod * m;
        }
    }
    let one_c = one.clone() + c.clone();
    if one_c.is_zero() {
        return Err(FamilyError::DegenerateDenominator("1 + C = 0".into()));
    }
    let b = c.clone() / one_c.clone();
    let a_coef = prod / one_c;
    Ok((a_coef, b, c))
}

impl MapSpec {
    pub fn parabolic_p(d: DegreeVector, rings: RingParameters) -> Result<Self, FamilyError> {
        let ctx = rings.ctx();
        let vals = rings.values::<Mp>(ctx);
        let (a, b, c) = coefficients_p(&d, &vals, ctx)?;
        Ok(MapSpec {
            kind: MapKind::ParabolicP,
            degrees: Some(d),
            rings: Some(rings),
            coeffs: Coefficients::P { a, b, c },
            precision: ctx,
        })
    }

    pub fn hyperbolic_f(p: u8, d: DegreeVector, rings: RingParameters) -> Result<Self, FamilyError> {
        if p > 1 {
            return Err(FamilyError::BadKind(format!("p must be 0 or 1, got {p}")));
        }
        let ctx = rings.ctx();
        Ok(MapSpec {
            kind: MapKind::HyperbolicF { p },
            degrees: Some(d),
            rings: Some(rings),
            coeffs: Coefficients::None,
            precision: ctx,
        })
    }

    pub fn parabolic_q(
        d: DegreeVector,
        rings: RingParameters,
        x: Mp,
        y: Mp,
        z: Mp,
        w: Mp,
    ) -> Result<Self, FamilyError> {
        require_odd(&d)?;
        let ctx = rings.ctx();
        let nu = super::degrees::rational::<Mp>(d.nu(), ctx);
        Ok(MapSpec {
            kind: MapKind::ParabolicQ,
            degrees: Some(d),
            rings: Some(rings),
            coeffs: Coefficients::Q { x, y, z, w, nu },
            precision: ctx,
        })
    }

    pub fn parabolic_r(
        d: DegreeVector,
        rings: RingParameters,
        s: Mp,
        t: Mp,
        z0: Mp,
    ) -> Result<Self, FamilyError> {
        require_odd(&d)?;
        let ctx = rings.ctx();
        let nu = super::degrees::rational::<Mp>(d.nu(), ctx);
        let mu = d.mu().eval(ctx);
        Ok(MapSpec {
            kind: MapKind::ParabolicR,
            degrees: Some(d),
            rings: Some(rings),
            coeffs: Coefficients::R { s, t, z0, nu, mu },
            precision: ctx,
        })
    }

    pub fn reference(kind: MapKind, precision: PrecisionContext) -> Result<Self, FamilyError> {
        let ok = match kind {
            MapKind::RefPolyG { n } | MapKind::RefRatH { n } => n >= 2,
            MapKind::RefPolyGmn { m, n } | MapKind::RefRatHmn { m, n } => m >= 2 && n >= 2,
            _ => false,
        };
        if !ok {
            return Err(FamilyError::BadKind(format!("{kind:?} is not a valid reference map")));
        }
        Ok(MapSpec { kind, degrees: None, rings: None, coeffs: Coefficients::None, precision })
    }

    pub fn degrees(&self) -> Result<&DegreeVector, FamilyError> {
        self.degrees
            .as_ref()
            .ok_or_else(|| FamilyError::BadKind("reference maps carry no degree vector".into()))
    }

    pub fn s(&self) -> Option<&Mp> {
        self.rings.as_ref().map(|r| &r.s)
    }

    /// s^ν, the second parabolic fixed point of Q.
    pub fn s_nu(&self) -> Option<Mp> {
        let d = self.degrees.as_ref()?;
        let s = self.s()?;
        let nu = super::degrees::rational::<Mp>(d.nu(), self.precision);
        Some(<Mp as Real>::powf(s, &nu))
    }

    /// Degree of the rational map.
    pub fn degree(&self) -> u32 {
        super::map::exponent_degree(self)
    }

    pub fn to_document(&self) -> SpecDocument {
        let digits = self.precision.roundtrip_digits();
        let f = |x: &Mp| x.to_decimal(digits);
        let mut coefficients = BTreeMap::new();
        match &self.coeffs {
            Coefficients::None => {}
            Coefficients::P { a, b, c } => {
                for (k, v) in [("A", a), ("B", b), ("C", c)] {
                    coefficients.insert(k.to_string(), f(&v.re));
                    coefficients.insert(format!("{k}_im"), f(&v.im));
                }
            }
            Coefficients::Q { x, y, z, w, nu } => {
                for (k, v) in [("X", x), ("Y", y), ("Z", z), ("W", w), ("nu", nu)] {
                    coefficients.insert(k.to_string(), f(v));
                }
            }
            Coefficients::R { s, t, z0, nu, mu } => {
                for (k, v) in [("S", s), ("T", t), ("z0", z0), ("nu", nu), ("mu", mu)] {
                    coefficients.insert(k.to_string(), f(v));
                }
            }
        }
        SpecDocument {
            kind: self.kind,
            degrees: self.degrees.clone(),
            precision: self.precision.significant_digits,
            s: self.rings.as_ref().map(|r| f(&r.s)),
            rings: self.rings.as_ref().map(|r| r.moduli.iter().map(f).collect()),
            phases: self.rings.as_ref().map(|r| r.phases.iter().map(f).collect()),
            coefficients,
        }
    }

    pub fn from_document(doc: &SpecDocument) -> Result<Self, FamilyError> {
        let ctx = PrecisionContext::new(doc.precision)?;
        let p = |s: &str| mp_parse(s, ctx).map_err(FamilyError::from);
        let coef = |k: &str| -> Result<Mp, FamilyError> {
            let s = doc
                .coefficients
                .get(k)
                .ok_or_else(|| FamilyError::BadDocument(format!("missing coefficient {k}")))?;
            p(s)
        };
        if doc.kind.is_reference() {
            return MapSpec::reference(doc.kind, ctx);
        }
        let d = doc
            .degrees
            .clone()
            .ok_or_else(|| FamilyError::BadDocument("missing degrees".into()))?;
        let moduli: Vec<Mp> = doc
            .rings
            .as_ref()
            .ok_or_else(|| FamilyError::BadDocument("missing rings".into()))?
            .iter()
            .map(|s| p(s))
            .collect::<Result<_, _>>()?;
        let phases: Vec<Mp> = match &doc.phases {
            Some(ph) => ph.iter().map(|s| p(s)).collect::<Result<_, _>>()?,
            None => vec![mp(0.0, ctx); moduli.len()],
        };
        let s = match &doc.s {
            Some(s) => p(s)?,
            None => {
                let fam = doc.kind.family().unwrap();
                super::schedule::explicit_rings(fam, &d, moduli.clone(), Some(phases.clone()))?.s
            }
        };
        if moduli.len() + 1 != d.n() || phases.len() != moduli.len() {
            return Err(FamilyError::BadDocument("ring count does not match degrees".into()));
        }
        let rings = RingParameters { moduli, phases, s };
        match doc.kind {
            MapKind::ParabolicP => {
                let mut spec = MapSpec::parabolic_p(d, rings)?;
                if doc.coefficients.contains_key("A") {
                    let c = |k: &str| -> Result<Complex<Mp>, FamilyError> {
                        let im = match doc.coefficients.get(&format!("{k}_im")) {
                            Some(s) => p(s)?,
                            None => mp(0.0, ctx),
                        };
                        Ok(Complex::new(coef(k)?, im))
                    };
                    spec.coeffs = Coefficients::P { a: c("A")?, b: c("B")?, c: c("C")? };
                }
                Ok(spec)
            }
            MapKind::HyperbolicF { p } => MapSpec::hyperbolic_f(p, d, rings),
            MapKind::ParabolicQ => {
                MapSpec::parabolic_q(d, rings, coef("X")?, coef("Y")?, coef("Z")?, coef("W")?)
            }
            MapKind::ParabolicR => MapSpec::parabolic_r(d, rings, coef("S")?, coef("T")?, coef("z0")?),
            _ => unreachable!(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, FamilyError> {
        let doc: SpecDocument =
            serde_json::from_str(s).map_err(|e| FamilyError::BadDocument(e.to_string()))?;
        MapSpec::from_document(&doc)
    }
}

fn require_odd(d: &DegreeVector) -> Result<(), FamilyError> {
    if d.is_odd() {
        Ok(())
    } else {
        Err(FamilyError::ConstraintViolated(format!("this family needs odd n, got n = {}", d.n())))
    }
}

/// Serialized form of a [`MapSpec`]; every number is a decimal string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub kind: MapKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<DegreeVector>,
    pub precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rings: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<String>>,
    #[serde(default)]
    pub coefficients: BTreeMap<String, String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{explicit_rings, make_schedule, validate_degrees};

    fn p33() -> MapSpec {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(&[3, 3]).unwrap();
        let r = explicit_rings(Family::P, &d, vec![mp(0.25, c)], None).unwrap();
        MapSpec::parabolic_p(d, r).unwrap()
    }

    #[test]
    fn p33_coefficients() {
        let spec = p33();
        let Coefficients::P { a, b, .. } = &spec.coeffs else { panic!() };
        // mpmath at 50 digits
        assert!((a.re.to_f64() - 0.998780785174).abs() < 1e-11);
        assert!((b.re.to_f64() - 0.001463057790).abs() < 1e-11);
        assert!(a.im.is_zero() && b.im.is_zero());
    }

    #[test]
    fn zero_rings_give_identity_coefficients() {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(&[4, 4, 4]).unwrap();
        let z = vec![Complex::<Mp>::zero(c); 2];
        let (a, b, cc) = coefficients_p(&d, &z, c).unwrap();
        assert_eq!(a, Complex::one(c));
        assert!(b.is_zero() && cc.is_zero());
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let spec = p33();
        let back = MapSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, back);

        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(&[4, 4, 4]).unwrap();
        let r = make_schedule(Family::R, &d, &mp(1e-10, c), None).unwrap();
        let spec = MapSpec::parabolic_r(d, r, mp(1e-8, c), mp(1.5e-7, c), mp(1.6e-7, c)).unwrap();
        let back = MapSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn reference_validation() {
        let c = PrecisionContext::DOUBLE;
        assert!(MapSpec::reference(MapKind::RefRatH { n: 4 }, c).is_ok());
        assert!(MapSpec::reference(MapKind::RefRatH { n: 1 }, c).is_err());
        assert!(MapSpec::reference(MapKind::ParabolicP, c).is_err());
    }

    #[test]
    fn q_requires_odd_n() {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(&[3, 3]).unwrap();
        let r = make_schedule(Family::Q, &d, &mp(1e-8, c), None).unwrap();
        let one = mp(1.0, c);
        assert!(MapSpec::parabolic_q(d, r, one.clone(), one.clone(), one.clone(), one).is_err());
    }
}
