//! Orbit classification into Fatou basins and raster rendering.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::certify::BasinTag;
use crate::certify::{canonical_traps, Region};
use crate::families::{Map, MapKind, MapSpec};
use crate::numerics::{Complex, Mp, Point, PrecisionContext, Real};

pub const DEFAULT_BUDGET: u32 = 10_000;

/// Digits used when a viewport is too small for doubles.
pub const EXTENDED_DIGITS: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasinLabel {
    pub tag: BasinTag,
    /// Iterations of f at the moment the orbit entered a trap (the budget if it never did).
    pub steps: u32,
}

/// A compiled map with its traps, at precision R.
pub struct Classifier<R> {
    map: Map<R>,
    traps: Vec<(Region<R>, BasinTag)>,
    /// Traps are tested on every `period`-th iterate.
    period: u32,
}

impl<R: Real> Classifier<R> {
    pub fn new(spec: &MapSpec, ctx: PrecisionContext) -> Self {
        let traps = canonical_traps(spec);
        let period = traps.iter().map(|t| t.iterate as u32).max().unwrap_or(1);
        Classifier {
            map: Map::new(spec, ctx),
            traps: traps.iter().map(|t| (t.region.convert(ctx), t.tag)).collect(),
            period,
        }
    }

    pub fn classify(&self, z: &Point<R>, budget: u32) -> BasinLabel {
        let mut z = z.clone();
        for k in 0..=budget {
            if k % self.period == 0 {
                if let Some((_, tag)) = self.traps.iter().find(|(r, _)| r.contains(&z)) {
                    return BasinLabel { tag: *tag, steps: k };
                }
            }
            if k < budget {
                z = self.map.eval(&z);
            }
        }
        BasinLabel { tag: BasinTag::Undecided, steps: budget }
    }
}

/// Q and R keep their inner basin at scale s^ν; below 10·s^ν doubles lose the structure.
fn extended_scale(spec: &MapSpec) -> Option<f64> {
    match spec.kind {
        MapKind::ParabolicQ | MapKind::ParabolicR => spec.s_nu().map(|v| 10.0 * v.to_f64()),
        _ => None,
    }
}

fn extended_ctx() -> PrecisionContext {
    PrecisionContext::new(EXTENDED_DIGITS).unwrap()
}

/// Iterates until the orbit enters a canonical trap or the budget runs out.
pub fn classify_point(spec: &MapSpec, z: &Complex<f64>, budget: u32) -> BasinLabel {
    assert!(budget >= 1, "budget must be at least 1");
    match extended_scale(spec) {
        Some(scale) if z.abs() < scale => {
            let c = extended_ctx();
            let zp = Point::Finite(z.convert::<Mp>(c));
            Classifier::<Mp>::new(spec, c).classify(&zp, budget)
        }
        _ => Classifier::<f64>::new(spec, PrecisionContext::DOUBLE).classify(&Point::Finite(z.clone()), budget),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub center_re: f64,
    pub center_im: f64,
    pub width: f64,
    pub height: f64,
}

impl Viewport {
    pub fn square(center_re: f64, center_im: f64, side: f64) -> Self {
        Viewport { center_re, center_im, width: side, height: side }
    }

    /// Center of pixel (col, row); row 0 is the top edge.
    pub fn pixel(&self, col: usize, row: usize, px_w: usize, px_h: usize) -> Complex<f64> {
        let re = self.center_re - self.width / 2.0 + (col as f64 + 0.5) * self.width / px_w as f64;
        let im = self.center_im + self.height / 2.0 - (row as f64 + 0.5) * self.height / px_h as f64;
        Complex::new(re, im)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelGrid {
    pub viewport: Viewport,
    pub px_w: usize,
    pub px_h: usize,
    /// Row-major, top row first.
    pub labels: Vec<BasinLabel>,
}

pub fn color(tag: BasinTag) -> [u8; 3] {
    match tag {
        BasinTag::ParabolicOuter => [200, 200, 200],
        BasinTag::ParabolicInner | BasinTag::AttractingOrigin => [255, 255, 255],
        BasinTag::Undecided => [0, 0, 0],
    }
}

impl LabelGrid {
    pub fn get(&self, col: usize, row: usize) -> BasinLabel {
        self.labels[row * self.px_w + col]
    }

    pub fn count(&self, tag: BasinTag) -> usize {
        self.labels.iter().filter(|l| l.tag == tag).count()
    }

    pub fn fraction(&self, tag: BasinTag) -> f64 {
        self.count(tag) as f64 / self.labels.len() as f64
    }

    /// Binary PPM (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.px_w, self.px_h).into_bytes();
        out.reserve(3 * self.labels.len());
        for l in &self.labels {
            out.extend_from_slice(&color(l.tag));
        }
        out
    }

    pub fn write_ppm(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_ppm())
    }

    /// True if every label decided here is unchanged in `other`.
    pub fn decided_labels_agree(&self, other: &LabelGrid) -> bool {
        self.labels
            .iter()
            .zip(&other.labels)
            .all(|(a, b)| a.tag == BasinTag::Undecided || a.tag == b.tag)
    }
}

fn render_rows<R: Real>(cl: &Classifier<R>, vp: &Viewport, px_w: usize, px_h: usize, budget: u32, ctx: PrecisionContext) -> Vec<BasinLabel> {
    let mut labels = vec![BasinLabel { tag: BasinTag::Undecided, steps: 0 }; px_w * px_h];
    labels.par_chunks_mut(px_w).enumerate().for_each(|(row, out)| {
        for (col, slot) in out.iter_mut().enumerate() {
            let z = vp.pixel(col, row, px_w, px_h).convert::<R>(ctx);
            *slot = cl.classify(&Point::Finite(z), budget);
        }
    });
    labels
}

/// Classifies every pixel center. Rows are processed in parallel on the current
/// rayon pool; the result does not depend on the number of workers.
pub fn render(spec: &MapSpec, viewport: &Viewport, px_w: usize, px_h: usize, budget: u32) -> LabelGrid {
    assert!(px_w >= 16 && px_h >= 16, "resolution must be at least 16x16");
    let extended = extended_scale(spec).is_some_and(|s| viewport.width.max(viewport.height) < s);
    let labels = if extended {
        let c = extended_ctx();
        render_rows(&Classifier::<Mp>::new(spec, c), viewport, px_w, px_h, budget, c)
    } else {
        let c = PrecisionContext::DOUBLE;
        render_rows(&Classifier::<f64>::new(spec, c), viewport, px_w, px_h, budget, c)
    };
    LabelGrid { viewport: *viewport, px_w, px_h, labels }
}

/// `render` on a dedicated pool of `workers` threads.
pub fn render_with_workers(
    spec: &MapSpec,
    viewport: &Viewport,
    px_w: usize,
    px_h: usize,
    budget: u32,
    workers: usize,
) -> LabelGrid {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool");
    pool.install(|| render(spec, viewport, px_w, px_h, budget))
}

/// Labels at t_k = 2k/samples on the positive real axis, run-length encoded.
pub fn radial_runs(spec: &MapSpec, samples: usize, budget: u32) -> Vec<(BasinTag, usize)> {
    let labels: Vec<BasinTag> = (0..samples)
        .into_par_iter()
        .map(|k| classify_point(spec, &Complex::new(2.0 * k as f64 / samples as f64, 0.0), budget).tag)
        .collect();
    let mut runs: Vec<(BasinTag, usize)> = Vec::new();
    for t in labels {
        match runs.last_mut() {
            Some((tag, n)) if *tag == t => *n += 1,
            _ => runs.push((t, 1)),
        }
    }
    runs
}

/// Outermost run is ParabolicOuter and at least two ParabolicOuter runs are
/// separated by an Undecided run.
pub fn radial_structure_holds(runs: &[(BasinTag, usize)]) -> bool {
    let Some((last, _)) = runs.last() else { return false };
    if *last != BasinTag::ParabolicOuter {
        return false;
    }
    let mut seen_outer = false;
    let mut gap = false;
    for (tag, _) in runs {
        match tag {
            BasinTag::ParabolicOuter if seen_outer && gap => return true,
            BasinTag::ParabolicOuter => {
                seen_outer = true;
                gap = false;
            }
            BasinTag::Undecided if seen_outer => gap = true,
            _ => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{explicit_rings, validate_degrees, Family};
    use crate::numerics::{mp, mp_parse};
    use crate::solver::solve;

    fn p(degrees: &[i64], a: &[f64]) -> MapSpec {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(degrees).unwrap();
        let r = explicit_rings(Family::P, &d, a.iter().map(|x| mp(*x, c)).collect(), None).unwrap();
        MapSpec::parabolic_p(d, r).unwrap()
    }

    #[test]
    fn worked_points() {
        let p33 = p(&[3, 3], &[0.25]);
        let l = classify_point(&p33, &Complex::new(10.0, 0.0), 100);
        assert_eq!(l.tag, BasinTag::ParabolicOuter);
        assert!(l.steps <= 3);
        let p444 = p(&[4, 4, 4], &[0.1, 0.01]);
        assert_eq!(classify_point(&p444, &Complex::new(0.0, 0.0), 100).tag, BasinTag::AttractingOrigin);
        for spec in [&p33, &p444] {
            assert_eq!(classify_point(spec, &Complex::new(1.0, 0.0), 5000).tag, BasinTag::Undecided);
        }
    }

    #[test]
    fn constant_region_is_uniform() {
        let p33 = p(&[3, 3], &[0.25]);
        let g = render(&p33, &Viewport::square(10.0, 10.0, 1.0), 16, 16, 10);
        assert_eq!(g.count(BasinTag::ParabolicOuter), 256);
        assert!(g.labels.iter().all(|l| l.steps == 0));
    }

    #[test]
    fn pixel_centers_top_left() {
        let vp = Viewport::square(0.0, 0.0, 2.0);
        let z = vp.pixel(0, 0, 4, 4);
        assert_eq!((z.re, z.im), (-0.75, 0.75));
        let z = vp.pixel(3, 3, 4, 4);
        assert_eq!((z.re, z.im), (0.75, -0.75));
    }

    #[test]
    fn q_inner_and_outer_basins_meet() {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(&[4, 4, 4]).unwrap();
        let q = solve(Family::Q, &d, &mp_parse("1e-8", c).unwrap()).unwrap().spec;
        let g = render(&q, &Viewport::square(0.0, 0.0, 2e-5), 32, 32, 1000);
        assert!(g.count(BasinTag::ParabolicInner) > 0);
        assert!(g.count(BasinTag::ParabolicOuter) > 0);
    }

    #[test]
    fn r_labels_on_second_iterate() {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(&[4, 4, 4]).unwrap();
        let r = solve(Family::R, &d, &mp_parse("2.56e-10", c).unwrap()).unwrap().spec;
        assert!(classify_point(&r, &Complex::new(5.0, 0.0), 100).steps.is_multiple_of(2));
        let z0 = r.s_nu().unwrap().to_f64() * 16.0 * 2f64.powf(-16.0 / 3.0);
        let l = classify_point(&r, &Complex::new(z0 / 4.0, 0.0), 100);
        assert_eq!(l.tag, BasinTag::ParabolicInner);
    }

    #[test]
    fn stability_and_workers() {
        let p33 = p(&[3, 3], &[0.25]);
        let vp = Viewport::square(0.5, 0.0, 1.2);
        let a = render(&p33, &vp, 48, 48, 30);
        let b = render(&p33, &vp, 48, 48, 60);
        assert!(a.decided_labels_agree(&b));
        assert!(b.count(BasinTag::Undecided) <= a.count(BasinTag::Undecided));
        let one = render_with_workers(&p33, &vp, 48, 48, 30, 1);
        let three = render_with_workers(&p33, &vp, 48, 48, 30, 3);
        assert_eq!(one.to_ppm(), three.to_ppm());
        assert_eq!(one.to_ppm(), a.to_ppm());
    }

    #[test]
    fn ppm_layout() {
        let p33 = p(&[3, 3], &[0.25]);
        let g = render(&p33, &Viewport::square(10.0, 0.0, 1.0), 16, 16, 5);
        let bytes = g.to_ppm();
        assert!(bytes.starts_with(b"P6\n16 16\n255\n"));
        assert_eq!(bytes.len(), 13 + 3 * 256);
        assert_eq!(&bytes[13..16], &[200, 200, 200]);
    }

    #[test]
    fn radial_structure_predicate() {
        use BasinTag::*;
        assert!(radial_structure_holds(&[(ParabolicOuter, 5), (Undecided, 1), (ParabolicOuter, 5)]));
        assert!(!radial_structure_holds(&[(ParabolicOuter, 11)]));
        assert!(!radial_structure_holds(&[(ParabolicOuter, 5), (Undecided, 1), (ParabolicOuter, 4), (Undecided, 1)]));
        assert!(!radial_structure_holds(&[(Undecided, 3), (ParabolicOuter, 5)]));
    }
}
