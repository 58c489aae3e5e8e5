use std::fmt::Write;

use serde_json::{json, Value};

use super::SymbolicError;
use crate::numerics::Complex;

pub const DEFAULT_PAIR_BUDGET: usize = 2_000_000;

/// A closed polyline approximating a Julia component. The last vertex connects
/// back to the first.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentCurve {
    pub vertices: Vec<Complex<f64>>,
    pub depth: usize,
    /// Symbols applied so far, first symbol = band of the curve itself.
    pub word: Vec<u8>,
    /// Distance between the start and where the continuation came back to.
    pub closure_gap: f64,
    pub winding: i64,
}

pub fn winding_number(vertices: &[Complex<f64>]) -> i64 {
    let n = vertices.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = &vertices[k];
        let b = &vertices[(k + 1) % n];
        total += (b.clone() / a.clone()).arg();
    }
    (total / std::f64::consts::TAU).round() as i64
}

impl ComponentCurve {
    /// Positively oriented circle |z| = radius with `samples` vertices.
    pub fn circle(radius: f64, samples: usize) -> Self {
        let vertices = (0..samples)
            .map(|k| Complex::from_polar(&radius, &(std::f64::consts::TAU * k as f64 / samples as f64)))
            .collect();
        ComponentCurve { vertices, depth: 0, word: Vec::new(), closure_gap: 0.0, winding: 1 }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Largest side of the bounding box, a lower bound for the diameter within √2.
    pub fn extent(&self) -> f64 {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for v in &self.vertices {
            x0 = x0.min(v.re);
            x1 = x1.max(v.re);
            y0 = y0.min(v.im);
            y1 = y1.max(v.im);
        }
        (x1 - x0).max(y1 - y0)
    }

    pub fn is_closed(&self, rel: f64) -> bool {
        self.closure_gap < rel * self.extent()
    }

    /// Rows t, re, im with t = k/N.
    pub fn to_csv(&self) -> String {
        let n = self.vertices.len();
        let mut s = String::from("t,re,im\n");
        for (k, v) in self.vertices.iter().enumerate() {
            writeln!(s, "{:.12},{:.17e},{:.17e}", k as f64 / n as f64, v.re, v.im).unwrap();
        }
        s
    }

    /// Reads the vertices written by `to_csv`; depth, word and gap are not stored there.
    pub fn from_csv(text: &str) -> Result<Self, SymbolicError> {
        let bad = |line: usize| SymbolicError::DegenerateCurve(format!("malformed CSV at line {line}"));
        let mut vertices = Vec::new();
        for (k, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(bad(k + 1));
            }
            let re = cols[1].trim().parse::<f64>().map_err(|_| bad(k + 1))?;
            let im = cols[2].trim().parse::<f64>().map_err(|_| bad(k + 1))?;
            vertices.push(Complex::new(re, im));
        }
        let winding = winding_number(&vertices);
        Ok(ComponentCurve { vertices, depth: 0, word: Vec::new(), closure_gap: 0.0, winding })
    }

    pub fn to_json(&self, turning: Option<f64>) -> Value {
        let word: String = self.word.iter().map(|s| s.to_string()).collect();
        json!({
            "word": word,
            "depth": self.depth,
            "vertices": self.vertices.len(),
            "closure_gap": self.closure_gap,
            "winding": self.winding,
            "turning": turning,
        })
    }
}

/// Sampled Hausdorff distance: every `stride`-th vertex of each curve against
/// all vertices of the other.
pub fn hausdorff(a: &[Complex<f64>], b: &[Complex<f64>], stride: usize) -> f64 {
    let one_sided = |p: &[Complex<f64>], q: &[Complex<f64>]| {
        p.iter()
            .step_by(stride.max(1))
            .map(|x| q.iter().map(|y| (x.clone() - y.clone()).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Bounded-turning estimate: max over vertex pairs of diam(smaller arc)/chord,
/// where the arc diameter is taken over the polyline vertices on the arc. All
/// pairs when there are at most `pair_budget` of them, otherwise every vertex
/// at stride ⌈(N²/budget)^{1/2}⌉.
pub fn turning_constant(curve: &ComponentCurve, pair_budget: usize) -> Result<f64, SymbolicError> {
    let n = curve.vertices.len();
    if n < 64 {
        return Err(SymbolicError::DegenerateCurve(format!("{n} vertices, need at least 64")));
    }
    let pairs = n * (n - 1) / 2;
    let stride = if pairs <= pair_budget {
        1
    } else {
        ((n as f64 * n as f64 / pair_budget as f64).ceil().sqrt()).ceil() as usize
    };
    let p: Vec<Complex<f64>> = curve.vertices.iter().step_by(stride).cloned().collect();
    let m = p.len();
    let dist = |i: usize, j: usize| (p[i % m].clone() - p[j % m].clone()).abs();

    // rows[len][i] = diameter of the vertices i, i+1, …, i+len (indices mod m);
    // only lengths up to m/2 are kept, the longer arc of a pair is looked up there.
    let half = m / 2;
    let mut rows: Vec<Vec<f64>> = vec![vec![0.0; m]];
    let mut prev: Vec<f64> = vec![0.0; m];
    let mut best: f64 = 0.0;
    for len in 1..m {
        let cur: Vec<f64> = (0..m)
            .map(|i| prev[i].max(prev[(i + 1) % m]).max(dist(i, i + len)))
            .collect();
        if len <= half {
            rows.push(cur.clone());
        }
        if len >= m - half {
            for i in 0..m {
                let chord = dist(i, i + len);
                if chord == 0.0 {
                    return Err(SymbolicError::DegenerateCurve("repeated vertices".into()));
                }
                let other = rows[m - len][(i + len) % m];
                best = best.max(cur[i].min(other) / chord);
            }
        }
        prev = cur;
    }
    Ok(best)
}
