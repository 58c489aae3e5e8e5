//! The worked-example reproduction suite behind `cantor repro`.

use std::time::Instant;

use cantor::certify::{
    canonical_traps, certify_critical_points, certify_trapping, check_parabolic, limit_map_deviation, unit_circle_samples,
    CriticalMarker, LimitChart, Region, Trap,
};
use cantor::dynamics::{radial_runs, radial_structure_holds, render, render_with_workers, BasinTag, Viewport};
use cantor::families::{
    coefficients_p, explicit_rings, make_schedule, rational, validate_degrees, DegreeVector, Family, MapKind, MapSpec,
    RingParameters,
};
use cantor::numerics::{mp_parse, Complex, Mp, Point, PrecisionContext, Real};
use cantor::solver::{solve_q, solve_r, CoefficientSolution};
use cantor::symbolic::{
    classify_itinerary, classify_run_lengths, default_base_radius, itinerary_of_point, trace_component, turning_constant,
    ComponentCurve, ItineraryWord, RunLengthSequence, SymbolicError, Verdict, DEFAULT_PAIR_BUDGET,
};
use serde_json::{json, Value};

struct Suite {
    ctx: PrecisionContext,
    checks: Vec<Value>,
    pass: bool,
}

impl Suite {
    fn num(&self, s: &str) -> Mp {
        mp_parse(s, self.ctx).expect("literal parses")
    }

    fn record(&mut self, criterion: u32, name: &str, measured: String, expected: String, pass: bool) {
        self.pass &= pass;
        self.checks.push(json!({
            "criterion": criterion,
            "name": name,
            "measured": measured,
            "expected": expected,
            "pass": pass,
        }));
    }

    /// |got − want| ≤ rel·|want|.
    fn rel(&mut self, criterion: u32, name: &str, got: &Mp, want: &str, rel: f64) {
        let w = self.num(want);
        let err = ((got.clone() - w.clone()) / w).abs().to_f64();
        self.record(criterion, name, got.to_string_radix(10, Some(14)), format!("{want} (rel {rel:e})"), err <= rel);
    }

    fn abs(&mut self, criterion: u32, name: &str, got: &Mp, want: &str, tol: &str) {
        let ok = (got.clone() - self.num(want)).abs() <= self.num(tol);
        self.record(criterion, name, got.to_string_radix(10, Some(14)), format!("{want} ± {tol}"), ok);
    }

    fn flag(&mut self, criterion: u32, name: &str, measured: impl ToString, expected: &str, ok: bool) {
        self.record(criterion, name, measured.to_string(), expected.to_string(), ok);
    }

    fn runtime(&mut self, criterion: u32, start: Instant, limit: f64) {
        let t = start.elapsed().as_secs_f64();
        self.flag(criterion, "runtime", format!("{t:.3} s"), &format!("< {limit} s"), t < limit);
    }
}

fn degrees(v: &[i64]) -> DegreeVector {
    validate_degrees(v).expect("fixed degrees are valid")
}

fn p_explicit(ctx: PrecisionContext, d: &[i64], a: &[&str]) -> MapSpec {
    let d = degrees(d);
    let moduli = a.iter().map(|s| mp_parse(s, ctx).unwrap()).collect();
    MapSpec::parabolic_p(d.clone(), explicit_rings(Family::P, &d, moduli, None).unwrap()).unwrap()
}

fn value(sol: &CoefficientSolution, name: &str) -> Mp {
    sol.get(name).cloned().unwrap_or_else(|| panic!("solver reports {name}"))
}

fn strictly_decreasing(v: &[Mp]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn list(v: &[Mp]) -> String {
    v.iter().map(|x| format!("{:.3e}", x.to_f64())).collect::<Vec<_>>().join(", ")
}

/// Roots of a polynomial (coefficients low to high) by simultaneous iteration.
fn durand_kerner(p: &[Complex<Mp>], ctx: PrecisionContext) -> Vec<Complex<Mp>> {
    let n = p.len() - 1;
    let lead = p[n].clone();
    let monic: Vec<Complex<Mp>> = p.iter().map(|c| c.clone() / lead.clone()).collect();
    let eval = |z: &Complex<Mp>| monic.iter().rev().fold(Complex::zero(ctx), |acc, c| acc * z.clone() + c.clone());
    let radius = monic[..n].iter().map(|c| c.abs().to_f64()).fold(0.0, f64::max) + 1.0;
    let seed = Complex::from_f64(0.4, 0.9, ctx);
    let mut z: Vec<Complex<Mp>> = (0..n).map(|k| seed.powi(k as i32).scale(&Mp::with_val(ctx.bits(), radius))).collect();
    let tol = <Mp as Real>::epsilon(ctx) * Mp::with_val(ctx.bits(), 1e6);
    for _ in 0..3000 {
        let mut worst = Mp::with_val(ctx.bits(), 0);
        for i in 0..n {
            let mut den = Complex::one(ctx);
            for j in (0..n).filter(|&j| j != i) {
                den = den * (z[i].clone() - z[j].clone());
            }
            let step = eval(&z[i]) / den;
            let size = step.abs() / (z[i].abs() + Mp::with_val(ctx.bits(), 1e-300));
            if size > worst {
                worst = size;
            }
            z[i] = z[i].clone() - step;
        }
        if worst < tol {
            break;
        }
    }
    z
}

type Poly = Vec<Complex<Mp>>;

fn poly_mul(a: &Poly, b: &Poly, ctx: PrecisionContext) -> Poly {
    let mut out = vec![Complex::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn poly_binomial(k: usize, c: Complex<Mp>, ctx: PrecisionContext) -> Poly {
    let mut p = vec![Complex::zero(ctx); k + 1];
    p[k] = Complex::one(ctx);
    p[0] = p[0].clone() - c;
    p
}

/// Critical points of P away from 0 and ∞ as roots of the numerator of P',
/// expanded from the product formula; also returns the order of the zero at 0.
fn expanded_critical_points(spec: &MapSpec, ctx: PrecisionContext) -> (Vec<Complex<Mp>>, usize) {
    let d = spec.degrees().unwrap().as_slice().to_vec();
    let n = d.len();
    let rings = spec.rings.as_ref().unwrap();
    let one = || Complex::<Mp>::one(ctx);
    let zero = || Complex::<Mp>::zero(ctx);
    let mut num: Poly = vec![one()];
    let d1 = d[0] as usize;
    let mut den: Poly = vec![zero(); d1 + 1];
    den[0] = one();
    den[d1] = Complex::from_f64(d1 as f64 - 1.0, 0.0, ctx);
    let e0 = if n % 2 == 1 { d[n - 1] as i64 } else { -(d[n - 1] as i64) };
    let mono = |k: usize| {
        let mut p = vec![zero(); k + 1];
        p[k] = one();
        p
    };
    if e0 > 0 {
        num = poly_mul(&num, &mono(e0 as usize), ctx);
    } else {
        den = poly_mul(&den, &mono((-e0) as usize), ctx);
    }
    for i in 0..n - 1 {
        let big_d = (d[i] + d[i + 1]) as usize;
        let a = Complex::from_polar(&rings.moduli[i].clone().convert(ctx), &rings.phases[i].clone().convert(ctx));
        let factor = poly_binomial(big_d, a.powi(big_d as i32), ctx);
        if i % 2 == 0 {
            num = poly_mul(&num, &factor, ctx);
        } else {
            den = poly_mul(&den, &factor, ctx);
        }
    }
    let deriv = |p: &Poly| -> Poly { p.iter().enumerate().skip(1).map(|(k, c)| c.scale(&Mp::with_val(ctx.bits(), k))).collect() };
    let left = poly_mul(&deriv(&num), &den, ctx);
    let right = poly_mul(&num, &deriv(&den), ctx);
    let mut p: Poly = (0..left.len().max(right.len()))
        .map(|k| left.get(k).cloned().unwrap_or_else(zero) - right.get(k).cloned().unwrap_or_else(zero))
        .collect();
    let at_origin = p.iter().take_while(|c| c.is_zero()).count();
    p.drain(..at_origin);
    let max = p.iter().map(|c| c.abs().to_f64()).fold(0.0, f64::max);
    while p.last().is_some_and(|c| c.abs().to_f64() < max * 1e-60) {
        p.pop();
    }
    (durand_kerner(&p, ctx), at_origin)
}

trait Convert {
    fn convert(self, ctx: PrecisionContext) -> Mp;
}

impl Convert for Mp {
    fn convert(self, ctx: PrecisionContext) -> Mp {
        Mp::with_val(ctx.bits(), self)
    }
}

pub fn run(ctx: PrecisionContext) -> (Value, bool) {
    let mut s = Suite { ctx, checks: Vec::new(), pass: true };
    let d444 = degrees(&[4, 4, 4]);
    let p33 = p_explicit(ctx, &[3, 3], &["0.25"]);
    let p444 = p_explicit(ctx, &[4, 4, 4], &["0.1", "0.01"]);

    // 1: closed forms for A and B
    let t = Instant::now();
    let c = |x: &str| Complex::real(s.num(x));
    let (a2, b2, _) = coefficients_p(&degrees(&[3, 3]), &[c("0.25")], ctx).unwrap();
    let (a3, b3, _) = coefficients_p(&d444, &[c("0.1"), c("0.01")], ctx).unwrap();
    s.abs(1, "A_2 (3,3)", &a2.re, "0.99878079", "5e-8");
    s.abs(1, "B_2 (3,3)", &b2.re, "0.00146306", "5e-8");
    s.abs(1, "A_3-1 (4,4,4)", &(a3.re - s.num("1")), "-7e-8", "1e-8");
    s.abs(1, "B_3 (4,4,4)", &b3.re, "8e-8", "1e-8");
    s.runtime(1, t, 1.0);

    // 2: Q system at s = 1e-8
    let t = Instant::now();
    let q = solve_q(&d444, &s.num("1e-8")).unwrap();
    let one = s.num("1");
    s.rel(2, "X-1", &(value(&q, "X") - one.clone()), "1.5471913857e-6", 1e-9);
    s.rel(2, "Y", &value(&q, "Y"), "9.2832930409e-6", 1e-9);
    s.rel(2, "Z-1", &(value(&q, "Z") - one.clone()), "-5.38605e-11", 1e-4);
    s.rel(2, "W", &value(&q, "W"), "3.4811916252e-6", 1e-9);
    s.rel(2, "rho1-1", &(value(&q, "rho1") - one.clone()), "-4.096e-13", 0.01);
    s.rel(2, "rho3", &value(&q, "rho3"), "3.2768e-12", 0.01);
    s.rel(2, "rho4", &value(&q, "rho4"), "2.6e-15", 0.1);
    s.runtime(2, t, 5.0);

    // 3: R system at s = 2.56e-10
    let t = Instant::now();
    let r = solve_r(&d444, &s.num("2.56e-10")).unwrap();
    s.rel(3, "I-1", &(value(&r, "I") - one.clone()), "2.5e-7", 0.1);
    s.rel(3, "J-1", &(value(&r, "J") - one.clone()), "9e-8", 0.1);
    s.rel(3, "z1-1", &(value(&r, "z1") - one.clone()), "1e-7", 0.1);
    s.rel(3, "S", &value(&r, "S"), "1e-8", 1e-6);
    s.rel(3, "T", &value(&r, "T"), "1.5e-7", 1e-6);
    s.rel(3, "z0", &value(&r, "z0"), "1.6e-7", 1e-6);
    s.abs(3, "kappa3", &value(&r, "kappa3"), "-1.34217728e-16", "1e-22");
    s.runtime(3, t, 5.0);

    // 4: asymptotic ratios
    let t = Instant::now();
    let nu = rational::<Mp>(d444.nu(), ctx);
    let (mut dx, mut dy, mut dw, mut ds) = (vec![], vec![], vec![], vec![]);
    for sv in ["1e-6", "1e-8", "1e-10"] {
        let sol = solve_q(&d444, &s.num(sv)).unwrap();
        let snu = <Mp as Real>::powf(&s.num(sv), &nu);
        dx.push(((value(&sol, "X") - one.clone()) / snu.clone() - one.clone() / s.num("3")).abs());
        dy.push((value(&sol, "Y") / snu.clone() - s.num("2")).abs());
        dw.push((value(&sol, "W") / snu - s.num("0.75")).abs());
    }
    let mu: Mp = d444.mu().eval(ctx);
    for sv in ["1e-9", "2.56e-10", "1e-14"] {
        let sol = solve_r(&d444, &s.num(sv)).unwrap();
        let snu = <Mp as Real>::powf(&s.num(sv), &nu);
        ds.push((value(&sol, "S") / snu - mu.clone()).abs());
    }
    let small = s.num("1e-3");
    for (name, v) in [("|(X-1)/s^nu - 1/3|", &dx), ("|Y/s^nu - 2|", &dy), ("|W/s^nu - 3/4|", &dw)] {
        let ok = strictly_decreasing(v) && v[2] < small;
        s.flag(4, name, list(v), "decreasing, last < 1e-3", ok);
    }
    s.flag(4, "|S/s^nu - mu| (R)", list(&ds), "decreasing", strictly_decreasing(&ds));
    s.runtime(4, t, 30.0);

    // 5: parabolic residuals
    for (name, spec) in [("P33", &p33), ("P444", &p444), ("Q444", &q.spec), ("R444", &r.spec)] {
        let rep = check_parabolic(spec).unwrap();
        let worst = rep.checks.iter().map(|c| c.value).fold(0.0, f64::max);
        s.flag(5, &format!("{name} parabolic residual"), format!("{worst:.2e}"), "< 1e-30", rep.pass && worst < 1e-30);
    }

    // 6: critical points of P444 with a Durand–Kerner cross-check
    let t = Instant::now();
    let crit = certify_critical_points(&p444).unwrap();
    let ring: Vec<_> = crit.points.iter().filter(|p| matches!(p.marker, CriticalMarker::Ring { .. })).collect();
    let in_balls = ring.iter().filter(|p| p.within_ball()).count();
    s.flag(6, "ring points within s^(1/2)|a_i|", format!("{in_balls} of {}", ring.len()), "16 of 16", in_balls == 16 && ring.len() == 16);
    s.flag(6, "total multiplicity", crit.total_multiplicity, "22", crit.total_multiplicity == 22);
    let high = PrecisionContext::new(ctx.significant_digits.max(50) + 30).unwrap();
    let (roots, _) = expanded_critical_points(&p444, high);
    let worst = ring
        .iter()
        .map(|p| match &p.location {
            Point::Finite(z) => {
                let z = z.convert::<Mp>(high);
                roots.iter().map(|r| (r.clone() - z.clone()).abs().to_f64()).fold(f64::INFINITY, f64::min)
            }
            Point::Infinity => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    s.flag(6, "Durand–Kerner agreement", format!("{worst:.2e}"), "< 1e-20", worst < 1e-20);
    s.runtime(6, t, 10.0);

    // 7: trapping
    let sv = q.spec.s_nu().unwrap();
    let q_inner = Trap {
        parabolic: Some(Complex::real(sv.clone())),
        ..Trap::user(Region::disk(Complex::real(sv.clone() / s.num("4")), sv * s.num("0.75")), BasinTag::ParabolicInner)
    };
    let named = |spec: &MapSpec, name: &str| canonical_traps(spec).into_iter().find(|t| t.name == name).unwrap();
    let h4 = MapSpec::reference(MapKind::RefRatH { n: 4 }, ctx).unwrap();
    let g4 = MapSpec::reference(MapKind::RefPolyG { n: 4 }, ctx).unwrap();
    let cases = vec![
        ("P33 U_inf", &p33, named(&p33, "U_inf")),
        ("P444 U_0", &p444, named(&p444, "U_0")),
        ("P444 U_inf", &p444, named(&p444, "U_inf")),
        ("Q444 D(s^nu/4, 3s^nu/4)", &q.spec, q_inner),
        ("Q444 U_inf", &q.spec, named(&q.spec, "U_inf")),
        ("h4 D'_2", &h4, canonical_traps(&h4).remove(0)),
        ("g4 D_1/2", &g4, canonical_traps(&g4).remove(0)),
        ("R444 U_inf, second iterate", &r.spec, named(&r.spec, "U_inf")),
        ("R444 U_0, second iterate", &r.spec, named(&r.spec, "U_0")),
    ];
    for (name, spec, trap) in cases {
        let rep = certify_trapping(spec, &trap, 512).unwrap();
        s.flag(7, name, format!("{} of 512 samples fail", rep.failures), "0 failures", rep.pass);
    }

    // 8: limit maps
    let circle = unit_circle_samples(256, ctx);
    let devs: Vec<Mp> = ["1e-4", "1e-6", "1e-8"]
        .iter()
        .map(|x| {
            let rings = make_schedule(Family::P, &d444, &s.num(x), None).unwrap();
            limit_map_deviation(&MapSpec::parabolic_p(d444.clone(), rings).unwrap(), LimitChart::Direct, &circle).unwrap()
        })
        .collect();
    s.flag(8, "P444 vs h_4 over s = 1e-4, 1e-6, 1e-8", list(&devs), "strictly decreasing", strictly_decreasing(&devs));
    let zeroed = RingParameters { moduli: vec![s.num("0"); 2], phases: vec![s.num("0"); 2], s: s.num("0") };
    let dev0 = limit_map_deviation(&MapSpec::parabolic_p(d444.clone(), zeroed).unwrap(), LimitChart::Direct, &circle).unwrap();
    let eps = <Mp as Real>::epsilon(ctx) * s.num("100");
    s.flag(8, "rings zeroed", format!("{:.2e}", dev0.to_f64()), "0 to working precision", dev0 <= eps);
    let dev_r = limit_map_deviation(&r.spec, LimitChart::Direct, &circle).unwrap();
    s.flag(8, "R∘R vs h_{4,4}", format!("{:.3e}", dev_r.to_f64()), "< 1e-4", dev_r < s.num("1e-4"));

    // 9: classifier
    let table: [(Family, usize, &str, Result<Verdict, SymbolicError>); 7] = [
        (Family::P, 4, "(1133)", Ok(Verdict::Quasicircle)),
        (Family::P, 4, "121121112", Err(SymbolicError::Undecidable)),
        (Family::P, 3, "(123)", Ok(Verdict::Quasicircle)),
        (Family::Q, 3, "(122)", Ok(Verdict::Quasicircle)),
        (Family::R, 3, "(112)", Ok(Verdict::Quasicircle)),
        (Family::P, 3, "(1)", Ok(Verdict::NotQuasicircle)),
        (Family::Q, 3, "(1)", Ok(Verdict::NotQuasicircle)),
    ];
    for (fam, n, w, want) in table {
        let got = classify_itinerary(fam, n, &w.parse().unwrap());
        s.flag(9, &format!("{fam:?} n={n} {w}"), format!("{got:?}"), &format!("{want:?}"), got == want);
    }
    let growing = RunLengthSequence { symbol: 1, separator: 2, lengths: vec![1, 2, 3], growth: 1 };
    let got = classify_run_lengths(Family::P, 4, &growing);
    s.flag(9, "P n=4 runs 1,2,3,… of 1", format!("{got:?}"), "Ok(NotQuasicircle)", got == Ok(Verdict::NotQuasicircle));
    let mut violations = 0;
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let mut next = |m: u64| {
        // xorshift; the property only needs a spread of words
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % m
    };
    for _ in 0..1000 {
        let n = 2 + next(4) as usize;
        let pre: Vec<u8> = (0..next(9)).map(|_| 1 + next(n as u64) as u8).collect();
        let per: Vec<u8> = (0..1 + next(12)).map(|_| 1 + next(n as u64) as u8).collect();
        let w = ItineraryWord::new(pre, per);
        for fam in [Family::P, Family::Q, Family::R] {
            let v = classify_itinerary(fam, n, &w).unwrap();
            let mut x = w.clone();
            for _ in 0..w.preperiod.len() + w.period.len() {
                x = x.shift();
                violations += usize::from(classify_itinerary(fam, n, &x).unwrap() != v);
            }
        }
    }
    s.flag(9, "shift invariance, 1000 words", format!("{violations} violations"), "0", violations == 0);

    // 10: traces and turning
    let t = Instant::now();
    let base = default_base_radius(&p33).unwrap();
    let mut bad_traces = Vec::new();
    let mut trace = |word: Vec<u8>| -> f64 {
        let c = trace_component(&p33, &word, base, 64).unwrap();
        let forward = c.vertices.iter().step_by((c.len() / 50).max(1)).all(|z| {
            itinerary_of_point(&p33, z, word.len()).map(|w| w.prefix(word.len()) == word).unwrap_or(false)
        });
        if !(c.closure_gap < 1e-8 * c.extent() && c.winding == 1 && forward) {
            bad_traces.push(word.iter().map(|s| s.to_string()).collect::<String>());
        }
        turning_constant(&c, DEFAULT_PAIR_BUDGET).unwrap()
    };
    let ones: Vec<f64> = [4, 6, 8].iter().map(|&m| trace(vec![1; m])).collect();
    let alt: Vec<f64> = [6, 8].iter().map(|&m| trace((0..m).map(|k| 1 + (k % 2) as u8).collect())).collect();
    trace(vec![2, 2, 2, 2]);
    trace(vec![1, 1, 2, 2]);
    s.flag(10, "traces closed, winding 1, words reproduced", format!("failing: {bad_traces:?}"), "none", bad_traces.is_empty());
    let gon = turning_constant(&ComponentCurve::circle(1.0, 1024), DEFAULT_PAIR_BUDGET).unwrap();
    s.flag(10, "1024-gon turning", format!("{gon:.5}"), "1 ± 0.01", (gon - 1.0).abs() <= 0.01);
    let increasing = ones.windows(2).all(|w| w[1] > w[0]);
    s.flag(10, "1̄ turning at depths 4, 6, 8", format!("{:.4}, {:.4}, {:.4}", ones[0], ones[1], ones[2]), "strictly increasing", increasing);
    s.flag(10, "1̄ turning growth 4 → 8", format!("{:.3}x", ones[2] / ones[0]), ">= 2x", ones[2] >= 2.0 * ones[0]);
    s.flag(10, "(12) turning at depths 6, 8", format!("{:.4}, {:.4}", alt[0], alt[1]), "within 25%", (alt[1] - alt[0]).abs() <= 0.25 * alt[0]);
    s.runtime(10, t, 120.0);

    // 11: rendering
    let vp = Viewport::square(0.0, 0.0, 2.0);
    let g = render(&p33, &vp, 256, 256, 10_000);
    let und = g.fraction(BasinTag::Undecided);
    s.flag(11, "Undecided fraction", format!("{:.4}", und), "< 0.2", und < 0.2);
    let stable = g.decided_labels_agree(&render(&p33, &vp, 256, 256, 20_000));
    s.flag(11, "budget doubling", if stable { "no decided pixel changed" } else { "decided pixels changed" }, "no change", stable);
    let ppm = g.to_ppm();
    let same = [1, 2, 4].iter().all(|&w| render_with_workers(&p33, &vp, 256, 256, 10_000, w).to_ppm() == ppm);
    s.flag(11, "PPM identical across worker counts", same, "true", same);
    let runs = radial_runs(&p33, 2048, 10_000);
    let radial = radial_structure_holds(&runs);
    let shape: Vec<String> = runs.iter().map(|(t, n)| format!("{t:?}x{n}")).collect();
    s.flag(11, "radial label runs", shape.join(" "), "outer first, two outer runs split by Undecided", radial);

    let mut by_criterion = Vec::new();
    for k in 1..=11u32 {
        let ok = s.checks.iter().filter(|c| c["criterion"] == k).all(|c| c["pass"] == true);
        by_criterion.push(json!({ "criterion": k, "pass": ok }));
    }
    let pass = s.pass;
    (json!({ "pass": pass, "criteria": by_criterion, "checks": s.checks }), pass)
}
