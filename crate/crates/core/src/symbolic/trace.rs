use super::curve::{winding_number, ComponentCurve};
use super::word::ItineraryWord;
use super::SymbolicError;
use crate::certify::{canonical_traps, Region};
use crate::families::{Map, MapSpec};
use crate::numerics::{Complex, Point, PrecisionContext};

/// Band geometry and the compiled map, in doubles.
pub struct BandModel {
    map: Map<f64>,
    traps: Vec<Region<f64>>,
    /// t_1 > … > t_{n−1}: moduli of the ring values.
    thresholds: Vec<f64>,
    degrees: Vec<u32>,
}

const NEWTON_TOL: f64 = 1e-14;
const MAX_CORRECTOR: usize = 5;
const MIN_STEP: f64 = 1e-12;

impl BandModel {
    pub fn new(spec: &MapSpec) -> Result<Self, SymbolicError> {
        let d = spec.degrees()?;
        let rings = spec
            .rings
            .as_ref()
            .ok_or_else(|| SymbolicError::BadWord("map has no ring parameters".into()))?;
        let c = PrecisionContext::DOUBLE;
        Ok(BandModel {
            map: Map::new(spec, c),
            traps: canonical_traps(spec).iter().map(|t| t.region.convert(c)).collect(),
            thresholds: rings.moduli.iter().map(|m| m.to_f64()).collect(),
            degrees: d.as_slice().to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn map(&self) -> &Map<f64> {
        &self.map
    }

    /// i with t_{i−1} > |z| > t_i, t_0 = ∞, t_n = 0.
    pub fn symbol_of(&self, z: &Complex<f64>) -> Result<u8, SymbolicError> {
        if self.traps.iter().any(|r| r.contains(&Point::Finite(z.clone()))) {
            return Err(SymbolicError::OutOfBand);
        }
        let r = z.abs();
        Ok(1 + self.thresholds.iter().take_while(|&&t| r < t).count() as u8)
    }

    /// Radii (outer, inner) used to seed band i: the ring thresholds, with the
    /// open ends capped at 1 and at t_{n−1}²/t_{n−2}.
    fn band_radii(&self, i: usize) -> (f64, f64) {
        let mut t = vec![1.0];
        t.extend(&self.thresholds);
        let k = t.len();
        t.push(t[k - 1] * t[k - 1] / t[k - 2]);
        (t[i - 1], t[i])
    }

    /// Geometric mean of t_1 and the cap 1 on the outer band.
    pub fn default_base_radius(&self) -> f64 {
        let (outer, inner) = self.band_radii(1);
        (outer * inner).sqrt()
    }

    fn solve(&self, w: &Complex<f64>, seed: Complex<f64>, max: usize) -> Option<(Complex<f64>, usize)> {
        let mut z = seed;
        let tol = NEWTON_TOL * w.abs().max(1e-300);
        for k in 0..=max {
            let d = self.map.eval_dual_direct(&z)?;
            let r = d.value - w.clone();
            if r.abs() < tol {
                return Some((z, k));
            }
            if k == max {
                break;
            }
            z = z - r / d.derivative;
            if !z.is_finite() {
                return None;
            }
        }
        None
    }

    /// Preimage of w inside band i closest to the band's log-radial midpoint
    /// (ties broken by argument).
    fn seed(&self, w: &Complex<f64>, band: usize) -> Result<Complex<f64>, SymbolicError> {
        let (outer, inner) = self.band_radii(band);
        let mid = (outer * inner).sqrt();
        let m = 8 * self.degrees[band - 1] as usize;
        let mut best: Option<(f64, f64, Complex<f64>)> = None;
        for k in 0..m {
            let s = Complex::from_polar(&mid, &(std::f64::consts::TAU * (k as f64 + 0.5) / m as f64));
            let Some((z, _)) = self.solve(w, s, 60) else { continue };
            if self.symbol_of(&z).ok() != Some(band as u8) {
                continue;
            }
            let key = ((z.abs() / mid).ln().abs(), z.arg().rem_euclid(std::f64::consts::TAU));
            let better = match &best {
                None => true,
                Some((a, b, _)) => key.0 < a - 1e-9 || ((key.0 - a).abs() <= 1e-9 && key.1 < *b),
            };
            if better {
                best = Some((key.0, key.1, z));
            }
        }
        best.map(|b| b.2).ok_or(SymbolicError::SeedNotFound(band as u8))
    }

    /// Tracks z(τ) with f(z(τ)) = a + τ(b − a) from τ = 0 to 1.
    fn continue_segment(&self, z: Complex<f64>, a: &Complex<f64>, b: &Complex<f64>) -> Result<Complex<f64>, SymbolicError> {
        let mut z = z;
        let mut tau = 0.0;
        let mut h: f64 = 0.25;
        let delta = b.clone() - a.clone();
        while tau < 1.0 {
            let step = h.min(1.0 - tau);
            let d = self.map.eval_dual_direct(&z).ok_or(SymbolicError::ContinuationBreakdown)?;
            let pred = z.clone() + delta.scale(&step) / d.derivative;
            let target = a.clone() + delta.scale(&(tau + step));
            match self.solve(&target, pred, MAX_CORRECTOR) {
                Some((next, iters)) => {
                    z = next;
                    tau += step;
                    if iters <= 2 {
                        h = (h * 2.0).min(0.25);
                    }
                }
                None => {
                    h /= 2.0;
                    if h < MIN_STEP {
                        return Err(SymbolicError::ContinuationBreakdown);
                    }
                }
            }
        }
        Ok(z)
    }

    /// Lifts a closed curve into band i: the output runs d_i times as long and
    /// its vertex k maps to input vertex k mod N.
    pub fn pull_back(&self, curve: &ComponentCurve, band: u8) -> Result<ComponentCurve, SymbolicError> {
        let i = band as usize;
        if i == 0 || i > self.n() {
            return Err(SymbolicError::BadWord(format!("symbol {band} outside 1..{}", self.n())));
        }
        let gamma = &curve.vertices;
        let n = gamma.len();
        let di = self.degrees[i - 1] as usize;
        let start = self.seed(&gamma[0], i)?;
        let mut out = Vec::with_capacity(di * n);
        out.push(start.clone());
        let mut z = start.clone();
        for m in 0..di * n {
            z = self.continue_segment(z, &gamma[m % n], &gamma[(m + 1) % n])?;
            if m + 1 < di * n {
                out.push(z.clone());
            }
        }
        let closure_gap = (z - start).abs();
        let mut winding = winding_number(&out);
        if winding < 0 {
            // orientation-reversing band; keep vertex 0 and run the other way
            out[1..].reverse();
            winding = -winding;
        }
        let mut word = vec![band];
        word.extend(&curve.word);
        Ok(ComponentCurve { vertices: out, depth: curve.depth + 1, word, closure_gap: closure_gap.max(curve.closure_gap), winding })
    }
}

pub fn symbol_of(spec: &MapSpec, z: &Complex<f64>) -> Result<u8, SymbolicError> {
    BandModel::new(spec)?.symbol_of(z)
}

pub fn default_base_radius(spec: &MapSpec) -> Result<f64, SymbolicError> {
    Ok(BandModel::new(spec)?.default_base_radius())
}

pub fn pull_back_curve(spec: &MapSpec, curve: &ComponentCurve, target_symbol: u8) -> Result<ComponentCurve, SymbolicError> {
    BandModel::new(spec)?.pull_back(curve, target_symbol)
}

/// Pulls the circle |z| = base_radius back along `word`, last symbol first, so
/// that forward iterates of the result visit the bands of `word` in order.
pub fn trace_component(spec: &MapSpec, word: &[u8], base_radius: f64, samples: usize) -> Result<ComponentCurve, SymbolicError> {
    if word.is_empty() {
        return Err(SymbolicError::BadWord("empty word".into()));
    }
    let model = BandModel::new(spec)?;
    let mut curve = ComponentCurve::circle(base_radius, samples);
    for &s in word.iter().rev() {
        curve = model.pull_back(&curve, s)?;
    }
    Ok(curve)
}

/// Symbols of z, f(z), …, f^{length−1}(z).
pub fn itinerary_of_point(spec: &MapSpec, z: &Complex<f64>, length: usize) -> Result<ItineraryWord, SymbolicError> {
    let model = BandModel::new(spec)?;
    let mut out = Vec::with_capacity(length);
    let mut p = Point::Finite(z.clone());
    for step in 0..length {
        let Point::Finite(w) = &p else {
            return Err(SymbolicError::OrbitEscaped { step, prefix: out });
        };
        match model.symbol_of(w) {
            Ok(s) => out.push(s),
            Err(_) => return Err(SymbolicError::OrbitEscaped { step, prefix: out }),
        }
        p = model.map().eval(&p);
    }
    Ok(ItineraryWord::finite(out))
}
