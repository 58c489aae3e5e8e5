//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are expected to fail (the reasons are
//! recorded in the project notes); the test errors if any other criterion fails
//! or if a known failure starts passing.

use std::time::{Duration, Instant};

use cantor::certify::{
    canonical_traps, certify_critical_points, certify_trapping, check_parabolic, limit_map_deviation, unit_circle_samples,
    CriticalMarker, LimitChart, Region, Trap,
};
use cantor::dynamics::{radial_runs, radial_structure_holds, render, render_with_workers, BasinTag, Viewport};
use cantor::families::{
    coefficients_p, explicit_rings, make_schedule, rational, validate_degrees, DegreeVector, Family, MapKind,
    MapSpec, RingParameters,
};
use cantor::numerics::{mp_parse, Complex, Mp, Point, PrecisionContext, Real};
use cantor::solver::{solve_q, solve_r, CoefficientSolution};
use cantor::symbolic::{
    classify_itinerary, classify_run_lengths, default_base_radius, itinerary_of_point, trace_component, turning_constant,
    ComponentCurve, ItineraryWord, RunLengthSequence, SymbolicError, Verdict, DEFAULT_PAIR_BUDGET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: &[u32] = &[7, 10];

fn ctx() -> PrecisionContext {
    PrecisionContext::SOLVER_DEFAULT
}

fn p(s: &str) -> Mp {
    mp_parse(s, ctx()).unwrap()
}

fn d(v: &[i64]) -> DegreeVector {
    validate_degrees(v).unwrap()
}

fn p_explicit(deg: &[i64], a: &[&str]) -> MapSpec {
    let deg = d(deg);
    let rings = explicit_rings(Family::P, &deg, a.iter().map(|x| p(x)).collect(), None).unwrap();
    MapSpec::parabolic_p(deg, rings).unwrap()
}

fn p33() -> MapSpec {
    p_explicit(&[3, 3], &["0.25"])
}

fn p444() -> MapSpec {
    p_explicit(&[4, 4, 4], &["0.1", "0.01"])
}

fn q444() -> CoefficientSolution {
    solve_q(&d(&[4, 4, 4]), &p("1e-8")).unwrap()
}

fn r444() -> CoefficientSolution {
    solve_r(&d(&[4, 4, 4]), &p("2.56e-10")).unwrap()
}

fn f(x: &Mp) -> f64 {
    x.to_f64()
}

fn get(sol: &CoefficientSolution, name: &str) -> Mp {
    sol.get(name).unwrap_or_else(|| panic!("no {name}")).clone()
}

fn rel_ok(got: &Mp, want: &str, rel: f64) -> bool {
    let w = p(want);
    f(&((got.clone() - w.clone()) / w).abs()) <= rel
}

fn abs_ok(got: &Mp, want: &str, tol: &str) -> bool {
    (got.clone() - p(want)).abs() <= p(tol)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, secs: f64) -> bool {
    elapsed.as_secs_f64() < secs
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let one = |x: &str| Complex::real(p(x));
    let (a2, b2, _) = coefficients_p(&d(&[3, 3]), &[one("0.25")], ctx()).unwrap();
    let (a3, b3, _) = coefficients_p(&d(&[4, 4, 4]), &[one("0.1"), one("0.01")], ctx()).unwrap();
    let el = t.elapsed();
    let real = |c: &Complex<Mp>| c.re.clone();
    let ok = abs_ok(&real(&a2), "0.99878079", "5e-8")
        && abs_ok(&real(&b2), "0.00146306", "5e-8")
        && abs_ok(&(real(&a3) - p("1")), "-7e-8", "1e-8")
        && abs_ok(&real(&b3), "8e-8", "1e-8")
        && a2.im.is_zero()
        && a3.im.is_zero()
        && within(el, 1.0);
    outcome(
        ok,
        format!(
            "A2={:.10} B2={:.10e} A3-1={:.4e} B3={:.4e} in {:?}",
            f(&a2.re),
            f(&b2.re),
            f(&(a3.re - p("1"))),
            f(&b3.re),
            el
        ),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let sol = q444();
    let el = t.elapsed();
    let one = p("1");
    let x = get(&sol, "X") - one.clone();
    let y = get(&sol, "Y");
    let z = get(&sol, "Z") - one.clone();
    let w = get(&sol, "W");
    let r1 = get(&sol, "rho1") - one;
    let r3 = get(&sol, "rho3");
    let r4 = get(&sol, "rho4");
    let ok = rel_ok(&x, "1.5471913857e-6", 1e-9)
        && rel_ok(&y, "9.2832930409e-6", 1e-9)
        && rel_ok(&z, "-5.38605e-11", 1e-4)
        && rel_ok(&w, "3.4811916252e-6", 1e-9)
        && rel_ok(&r1, "-4.096e-13", 0.01)
        && rel_ok(&r3, "3.2768e-12", 0.01)
        && rel_ok(&r4, "2.6e-15", 0.1)
        && within(el, 5.0);
    outcome(
        ok,
        format!(
            "X-1={} Y={} Z-1={} W={} rho1-1={:.4e} rho3={:.5e} rho4={:.3e} in {:?}",
            x.to_string_radix(10, Some(12)),
            y.to_string_radix(10, Some(12)),
            z.to_string_radix(10, Some(7)),
            w.to_string_radix(10, Some(12)),
            f(&r1),
            f(&r3),
            f(&r4),
            el
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let sol = r444();
    let el = t.elapsed();
    let one = p("1");
    let i = get(&sol, "I") - one.clone();
    let j = get(&sol, "J") - one.clone();
    let z1 = get(&sol, "z1") - one;
    let (s, tt, z0) = (get(&sol, "S"), get(&sol, "T"), get(&sol, "z0"));
    let k3 = get(&sol, "kappa3");
    let ok = rel_ok(&i, "2.5e-7", 0.1)
        && rel_ok(&j, "9e-8", 0.1)
        && rel_ok(&z1, "1e-7", 0.1)
        && rel_ok(&s, "1e-8", 1e-6)
        && rel_ok(&tt, "1.5e-7", 1e-6)
        && rel_ok(&z0, "1.6e-7", 1e-6)
        && abs_ok(&k3, "-1.34217728e-16", "1e-22")
        && within(el, 5.0);
    outcome(
        ok,
        format!(
            "I-1={:.4e} J-1={:.4e} z1-1={:.4e} S={:.9e} T={:.9e} z0={:.9e} kappa3={:.10e} in {:?}",
            f(&i),
            f(&j),
            f(&z1),
            f(&s),
            f(&tt),
            f(&z0),
            f(&k3),
            el
        ),
    )
}

fn decreasing(v: &[Mp]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let deg = d(&[4, 4, 4]);
    let nu = rational::<Mp>(deg.nu(), ctx());
    let one = p("1");
    let (mut dx, mut dy, mut dw) = (Vec::new(), Vec::new(), Vec::new());
    for s in ["1e-6", "1e-8", "1e-10"] {
        let sol = solve_q(&deg, &p(s)).unwrap();
        let sv = <Mp as Real>::powf(&p(s), &nu);
        dx.push(((get(&sol, "X") - one.clone()) / sv.clone() - one.clone() / p("3")).abs());
        dy.push((get(&sol, "Y") / sv.clone() - p("2")).abs());
        dw.push((get(&sol, "W") / sv - p("0.75")).abs());
    }
    let mu: Mp = deg.mu().eval(ctx());
    let mut ds = Vec::new();
    for s in ["1e-9", "2.56e-10", "1e-14"] {
        let sol = solve_r(&deg, &p(s)).unwrap();
        let sv = <Mp as Real>::powf(&p(s), &nu);
        ds.push((get(&sol, "S") / sv - mu.clone()).abs());
    }
    let el = t.elapsed();
    let tol = p("1e-3");
    let q_ok = [&dx, &dy, &dw].iter().all(|v| decreasing(v) && v[2] < tol);
    let ok = q_ok && decreasing(&ds) && within(el, 30.0);
    let show = |v: &[Mp]| v.iter().map(|x| format!("{:.2e}", f(x))).collect::<Vec<_>>().join(",");
    outcome(
        ok,
        format!("X:[{}] Y:[{}] W:[{}] R S:[{}] in {:?}", show(&dx), show(&dy), show(&dw), show(&ds), el),
    )
}

fn criterion_5() -> Outcome {
    let specs = [("P33", p33()), ("P444", p444()), ("Q444", q444().spec), ("R444", r444().spec)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, spec) in specs {
        let report = check_parabolic(&spec).unwrap();
        let worst = report.checks.iter().map(|c| c.value).fold(0.0, f64::max);
        ok &= report.pass && worst < 1e-30;
        parts.push(format!("{name} max={worst:.1e}"));
    }
    outcome(ok, parts.join(" "))
}

// Durand–Kerner on the numerator of P' written out from the product formula,
// kept separate from the library's evaluator.
mod oracle {
    use rug::ops::Pow;
    use rug::{Complex, Float};

    pub const PREC: u32 = 400;

    pub type Poly = Vec<Complex>;

    fn zero() -> Complex {
        Complex::with_val(PREC, 0)
    }

    pub fn from_terms(terms: &[(usize, Complex)]) -> Poly {
        let deg = terms.iter().map(|t| t.0).max().unwrap();
        let mut p = vec![zero(); deg + 1];
        for (k, c) in terms {
            p[*k] += c;
        }
        p
    }

    pub fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += Complex::with_val(PREC, x * y);
            }
        }
        out
    }

    pub fn deriv(a: &Poly) -> Poly {
        a.iter().enumerate().skip(1).map(|(k, c)| Complex::with_val(PREC, c * k as u32)).collect()
    }

    pub fn sub(a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        (0..n)
            .map(|k| {
                let mut c = zero();
                if k < a.len() {
                    c += &a[k];
                }
                if k < b.len() {
                    c -= &b[k];
                }
                c
            })
            .collect()
    }

    fn abs(c: &Complex) -> Float {
        Float::with_val(PREC, c.abs_ref())
    }

    /// Drops exact zeros at the bottom (roots at 0) and cancelled terms at the top.
    pub fn trim(mut p: Poly) -> (Poly, usize) {
        let zeros = p.iter().take_while(|c| c.is_zero()).count();
        p.drain(..zeros);
        let max = p.iter().map(abs).fold(Float::with_val(PREC, 0), |a, b| a.max(&b));
        let floor = max * Float::with_val(PREC, 1e-80);
        while p.last().map(|c| abs(c) < floor).unwrap_or(false) {
            p.pop();
        }
        (p, zeros)
    }

    fn eval(p: &Poly, z: &Complex) -> Complex {
        let mut acc = zero();
        for c in p.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn durand_kerner(p: &Poly) -> Vec<Complex> {
        let n = p.len() - 1;
        let lead = p[n].clone();
        let monic: Poly = p.iter().map(|c| Complex::with_val(PREC, c / &lead)).collect();
        // Cauchy bound for the starting circle
        let bound = monic[..n].iter().map(abs).fold(Float::with_val(PREC, 0), |a, b| a.max(&b)) + 1u32;
        let seed = Complex::with_val(PREC, (0.4, 0.9));
        let mut z: Vec<Complex> = (0..n)
            .map(|k| Complex::with_val(PREC, seed.clone().pow(k as u32) * &bound))
            .collect();
        let tol = Float::with_val(PREC, 1e-90);
        for _ in 0..5000 {
            let mut worst = Float::with_val(PREC, 0);
            for i in 0..n {
                let mut den = Complex::with_val(PREC, 1);
                for j in 0..n {
                    if i != j {
                        den *= Complex::with_val(PREC, &z[i] - &z[j]);
                    }
                }
                let step = Complex::with_val(PREC, eval(&monic, &z[i]) / den);
                let size = abs(&step) / (abs(&z[i]) + 1e-30f64);
                worst = worst.max(&size);
                z[i] -= step;
            }
            if worst < tol {
                break;
            }
        }
        z
    }

    pub fn distance(a: &Complex, re: &Float, im: &Float) -> f64 {
        let d = Complex::with_val(PREC, (re, im));
        abs(&Complex::with_val(PREC, a - d)).to_f64()
    }
}

fn criterion_6() -> Outcome {
    use rug::ops::Pow;
    use rug::{Complex as RC, Float};
    let t = Instant::now();
    let spec = p444();
    let report = certify_critical_points(&spec).unwrap();
    let el = t.elapsed();
    let ring: Vec<_> = report.points.iter().filter(|c| matches!(c.marker, CriticalMarker::Ring { .. })).collect();
    let in_balls = ring.iter().all(|c| c.within_ball());

    // P − B ∝ z^4 (z^8 − a1^8) / ((3 z^4 + 1)(z^8 − a2^8)) on (4,4,4)
    let prec = oracle::PREC;
    let c1 = RC::with_val(prec, Float::with_val(prec, Float::parse("0.1").unwrap()).pow(8u32));
    let c2 = RC::with_val(prec, Float::with_val(prec, Float::parse("0.01").unwrap()).pow(8u32));
    let one = || RC::with_val(prec, 1);
    let num = oracle::from_terms(&[(12, one()), (4, -c1)]);
    let den = oracle::mul(
        &oracle::from_terms(&[(4, RC::with_val(prec, 3)), (0, one())]),
        &oracle::from_terms(&[(8, one()), (0, -c2)]),
    );
    let numerator = oracle::sub(&oracle::mul(&oracle::deriv(&num), &den), &oracle::mul(&num, &oracle::deriv(&den)));
    let (poly, zeros_at_origin) = oracle::trim(numerator);
    let roots = oracle::durand_kerner(&poly);
    let worst = ring
        .iter()
        .map(|c| {
            let Point::Finite(z) = &c.location else { return f64::INFINITY };
            roots
                .iter()
                .map(|r| oracle::distance(r, &z.re, &z.im))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let ok = ring.len() == 16
        && in_balls
        && report.total_multiplicity == 22
        && roots.len() == 16
        && zeros_at_origin == 3
        && worst < 1e-20
        && within(el, 10.0);
    outcome(
        ok,
        format!(
            "{} ring points, all in balls: {in_balls}, total multiplicity {}, oracle roots {} (+{} at 0), max distance {worst:.1e}, in {:?}",
            ring.len(),
            report.total_multiplicity,
            roots.len(),
            zeros_at_origin,
            el
        ),
    )
}

fn criterion_7() -> Outcome {
    let c = ctx();
    let q = q444().spec;
    let sv = q.s_nu().unwrap();
    let q_inner = Trap::user(
        Region::disk(Complex::real(sv.clone() / p("4")), sv.clone() * p("0.75")),
        BasinTag::ParabolicInner,
    );
    let q_inner = Trap { parabolic: Some(Complex::real(sv)), ..q_inner };
    let named = |spec: &MapSpec, name: &str| canonical_traps(spec).into_iter().find(|t| t.name == name).unwrap();
    let h4 = MapSpec::reference(MapKind::RefRatH { n: 4 }, c).unwrap();
    let g4 = MapSpec::reference(MapKind::RefPolyG { n: 4 }, c).unwrap();
    let (p33, p444, r) = (p33(), p444(), r444().spec);
    let cases: Vec<(&str, MapSpec, Trap)> = vec![
        ("P33 U_inf", p33.clone(), named(&p33, "U_inf")),
        ("P444 U_0", p444.clone(), named(&p444, "U_0")),
        ("P444 U_inf", p444.clone(), named(&p444, "U_inf")),
        ("Q444 D(s^nu/4,3s^nu/4)", q.clone(), q_inner),
        ("Q444 U_inf", q.clone(), named(&q, "U_inf")),
        ("h4 D'_2", h4.clone(), canonical_traps(&h4).remove(0)),
        ("g4 D_1/2", g4.clone(), canonical_traps(&g4).remove(0)),
        ("R444 U_inf (R∘R)", r.clone(), named(&r, "U_inf")),
        ("R444 U_0 (R∘R)", r.clone(), named(&r, "U_0")),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, spec, trap) in cases {
        let rep = certify_trapping(&spec, &trap, 512).unwrap();
        ok &= rep.pass;
        parts.push(format!("{name}: {}", if rep.pass { "ok".to_string() } else { format!("{} of 512 fail", rep.failures) }));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_8() -> Outcome {
    let c = ctx();
    let deg = d(&[4, 4, 4]);
    let samples = unit_circle_samples(256, c);
    let devs: Vec<Mp> = ["1e-4", "1e-6", "1e-8"]
        .iter()
        .map(|s| {
            let spec = MapSpec::parabolic_p(deg.clone(), make_schedule(Family::P, &deg, &p(s), None).unwrap()).unwrap();
            limit_map_deviation(&spec, LimitChart::Direct, &samples).unwrap()
        })
        .collect();
    let zero = RingParameters { moduli: vec![p("0"); 2], phases: vec![p("0"); 2], s: p("0") };
    let collapsed = MapSpec::parabolic_p(deg, zero).unwrap();
    let dev0 = limit_map_deviation(&collapsed, LimitChart::Direct, &samples).unwrap();
    let eps = <Mp as Real>::epsilon(c) * p("100");
    let dev_r = limit_map_deviation(&r444().spec, LimitChart::Direct, &samples).unwrap();
    let ok = decreasing(&devs) && dev0 <= eps && dev_r < p("1e-4");
    outcome(
        ok,
        format!(
            "P->h4: {:.3e} {:.3e} {:.3e}; zeroed rings {:.1e}; R∘R->h44 {:.3e}",
            f(&devs[0]),
            f(&devs[1]),
            f(&devs[2]),
            f(&dev0),
            f(&dev_r)
        ),
    )
}

fn random_word(rng: &mut ChaCha8Rng) -> (usize, ItineraryWord) {
    let n = rng.gen_range(2..=5);
    let sym = |rng: &mut ChaCha8Rng| rng.gen_range(1..=n as u8);
    let pre: Vec<u8> = (0..rng.gen_range(0..=8)).map(|_| sym(rng)).collect();
    let per: Vec<u8> = (0..rng.gen_range(1..=12)).map(|_| sym(rng)).collect();
    (n, ItineraryWord::new(pre, per))
}

fn criterion_9() -> Outcome {
    let w = |s: &str| s.parse::<ItineraryWord>().unwrap();
    let table = [
        (Family::P, 4, "(1133)", Ok(Verdict::Quasicircle)),
        (Family::P, 4, "121121112", Err(SymbolicError::Undecidable)),
        (Family::P, 3, "(123)", Ok(Verdict::Quasicircle)),
        (Family::Q, 3, "(122)", Ok(Verdict::Quasicircle)),
        (Family::R, 3, "(112)", Ok(Verdict::Quasicircle)),
        (Family::P, 3, "(1)", Ok(Verdict::NotQuasicircle)),
        (Family::Q, 3, "(1)", Ok(Verdict::NotQuasicircle)),
    ];
    let mut ok = true;
    for (fam, n, word, want) in &table {
        ok &= classify_itinerary(*fam, *n, &w(word)) == *want;
    }
    let growing = RunLengthSequence { symbol: 1, separator: 2, lengths: vec![1, 2, 3], growth: 1 };
    ok &= growing.prefix(9) == [1, 2, 1, 1, 2, 1, 1, 1, 2];
    ok &= classify_run_lengths(Family::P, 4, &growing) == Ok(Verdict::NotQuasicircle);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut violations = 0;
    for _ in 0..1000 {
        let (n, word) = random_word(&mut rng);
        for fam in [Family::P, Family::Q, Family::R] {
            let v = classify_itinerary(fam, n, &word).unwrap();
            let mut s = word.clone();
            for _ in 0..word.preperiod.len() + word.period.len() + 1 {
                s = s.shift();
                if classify_itinerary(fam, n, &s).unwrap() != v {
                    violations += 1;
                }
            }
        }
    }
    ok &= violations == 0;
    outcome(ok, format!("{} table rows plus run-length case; shift violations {violations} over 1000 words", table.len()))
}

fn check_trace(spec: &MapSpec, c: &ComponentCurve) -> bool {
    let closed = c.closure_gap < 1e-8 * c.extent();
    let forward = c
        .vertices
        .iter()
        .step_by((c.len() / 50).max(1))
        .all(|z| itinerary_of_point(spec, z, c.word.len()).map(|w| w.prefix(c.word.len()) == c.word).unwrap_or(false));
    closed && c.winding == 1 && forward
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let spec = p33();
    let base = default_base_radius(&spec).unwrap();
    let samples = 64;
    let alternating = |m: usize| -> Vec<u8> { (0..m).map(|k| 1 + (k % 2) as u8).collect() };
    let mut traces_ok = true;
    let mut turn = |word: Vec<u8>| -> f64 {
        let c = trace_component(&spec, &word, base, samples).unwrap();
        traces_ok &= check_trace(&spec, &c);
        turning_constant(&c, DEFAULT_PAIR_BUDGET).unwrap()
    };
    let ones: Vec<f64> = [4, 6, 8].iter().map(|&m| turn(vec![1; m])).collect();
    let alt6 = turn(alternating(6));
    let alt8 = turn(alternating(8));
    for w in [vec![2u8, 2, 2, 2], vec![1, 1, 2, 2], vec![2, 1, 1, 1]] {
        turn(w);
    }
    let gon = turning_constant(&ComponentCurve::circle(1.0, 1024), DEFAULT_PAIR_BUDGET).unwrap();
    let el = t.elapsed();
    let increasing = ones.windows(2).all(|w| w[1] > w[0]);
    let growth = ones[2] / ones[0];
    let stable = (alt8 - alt6).abs() <= 0.25 * alt6;
    let ok = traces_ok && (gon - 1.0).abs() <= 0.01 && increasing && growth >= 2.0 && stable && within(el, 120.0);
    outcome(
        ok,
        format!(
            "traces ok: {traces_ok}; 1024-gon {gon:.4}; 1̄ depths 4,6,8: {:.4} {:.4} {:.4} (increasing: {increasing}, growth {growth:.3}x); (12) depth 6/8: {alt6:.4}/{alt8:.4}; in {el:?}",
            ones[0], ones[1], ones[2]
        ),
    )
}

fn criterion_11() -> Outcome {
    let spec = p33();
    let vp = Viewport::square(0.0, 0.0, 2.0);
    let g = render(&spec, &vp, 256, 256, 10_000);
    let und = g.fraction(BasinTag::Undecided);
    let g2 = render(&spec, &vp, 256, 256, 20_000);
    let stable = g.decided_labels_agree(&g2);
    let again = render(&spec, &vp, 256, 256, 10_000).to_ppm();
    let ppm = g.to_ppm();
    let identical = [1, 3, 8].iter().all(|&w| render_with_workers(&spec, &vp, 256, 256, 10_000, w).to_ppm() == ppm) && again == ppm;
    let runs = radial_runs(&spec, 2048, 10_000);
    let radial = radial_structure_holds(&runs);
    let ok = und < 0.2 && stable && identical && radial;
    outcome(
        ok,
        format!("undecided {:.2}%; budget doubling stable: {stable}; PPM identical: {identical}; radial runs {} ok: {radial}", und * 100.0, runs.len()),
    )
}

// Runs without the libtest harness so the report is printed on success too.
fn main() {
    let criteria: Vec<(u32, fn() -> Outcome)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut unexpected = Vec::new();
    for (k, run) in criteria {
        let o = run();
        println!("criterion {k}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if o.pass == KNOWN_FAILURES.contains(&k) {
            unexpected.push(k);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected outcome: {unexpected:?}");
        std::process::exit(1);
    }
}
