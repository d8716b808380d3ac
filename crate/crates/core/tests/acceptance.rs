//! End-to-end acceptance suite. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line, and exits nonzero if any fails.

use std::time::{Duration, Instant};

use chessbisect::arrangement::{signature, FamilySpec};
use chessbisect::config::ColoredPointConfig;
use chessbisect::deform::{random_path, verify_parity_invariance};
use chessbisect::geom::{side, OrientedHyperplane, Point};
use chessbisect::linalg::Subspace;
use chessbisect::measures::converge::{convergence_run, ConvergeOptions};
use chessbisect::measures::counter::{certify_no_bisection_fixed_directions, counterexample_config, Certification};
use chessbisect::measures::lift::{circles_bisection, CirclesOptions, Curve, LiftedCurve};
use chessbisect::measures::MeasureSpec;
use chessbisect::oracle::{brute_force_bisectors, build_symmetric_start, precheck_generic, unconstrained, StartParams};
use chessbisect::parity::{compute_n, multinomial, multinomial_parity, stirling2, stirling2_parity, stirling_parity_table};
use chessbisect::rat::{frac, int, Rat};
use chessbisect::solve::{solve, SolveOptions};
use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// An instance family with its expected class count.
struct Instance {
    name: &'static str,
    specs: Vec<FamilySpec>,
    n: u64,
}

fn axis(d: usize, i: usize) -> Vec<Rat> {
    (0..d).map(|j| int(i64::from(i == j))).collect()
}

fn line(d: usize, i: usize, k: usize) -> FamilySpec {
    FamilySpec::new(Subspace::from_basis(d, vec![axis(d, i)]).unwrap(), k).unwrap()
}

fn instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (name, d) in [("ham sandwich d=1", 1), ("ham sandwich d=2", 2), ("ham sandwich d=3", 3)] {
        out.push(Instance { name, specs: unconstrained(d, &[1]), n: 1 });
    }
    for (name, k) in [("necklace k=2", 2), ("necklace k=3", 3), ("necklace k=4", 4)] {
        out.push(Instance { name, specs: unconstrained(1, &[k]), n: 1 });
    }
    out.push(Instance { name: "two parallel lines d=2", specs: unconstrained(2, &[2]), n: 3 });
    out.push(Instance { name: "two free lines d=2", specs: unconstrained(2, &[1, 1]), n: 3 });
    out.push(Instance { name: "fixed directions k=(1,2)", specs: vec![line(2, 0, 1), line(2, 1, 2)], n: 3 });
    out
}

fn colors_needed(specs: &[FamilySpec]) -> usize {
    specs.iter().map(FamilySpec::m).sum()
}

/// Random configuration with odd class sizes from `sizes`, redrawn until generic.
fn random_generic(specs: &[FamilySpec], sizes: &[usize], rng: &mut ChaCha8Rng) -> ColoredPointConfig {
    let d = specs[0].dim();
    let m = colors_needed(specs);
    loop {
        let colors: Vec<Vec<Point>> = (0..m)
            .map(|_| {
                let n = sizes[rng.gen_range(0..sizes.len())];
                (0..n).map(|_| (0..d).map(|_| frac(rng.gen_range(-4096..=4096), 1024)).collect()).collect()
            })
            .collect();
        if let Ok(c) = ColoredPointConfig::new(d, colors) {
            if precheck_generic(&c, specs).is_ok() {
                return c;
            }
        }
    }
}

/// Strict chessboard counts of one color: (on the positive color, on the
/// negative color, on a hyperplane).
fn chessboard_counts(sides: impl Iterator<Item = Vec<i8>>) -> (usize, usize, usize) {
    let (mut a, mut b, mut on) = (0, 0, 0);
    for s in sides {
        if s.contains(&0) {
            on += 1;
        } else if s.iter().filter(|&&x| x < 0).count() % 2 == 0 {
            a += 1;
        } else {
            b += 1;
        }
    }
    (a, b, on)
}

/// Uniform point masses are bisected when neither open color holds more than half.
fn balanced(a: usize, b: usize, total: usize) -> bool {
    2 * a <= total && 2 * b <= total
}

fn bisects(hyperplanes: &[OrientedHyperplane], config: &ColoredPointConfig) -> bool {
    config.colors.iter().all(|class| {
        let (a, b, _) = chessboard_counts(class.iter().map(|p| hyperplanes.iter().map(|h| side(h, p)).collect()));
        balanced(a, b, class.len())
    })
}

fn criterion_1() -> Outcome {
    for m in 1..=64u64 {
        for k in 1..=m {
            let exact = stirling2(m as usize, k as usize).is_odd() as u8;
            if stirling2_parity(m, k).unwrap() != exact {
                return outcome(false, format!("S({m},{k}) parity differs"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let budget = rng.gen_range(1..=64usize);
        let mut parts = Vec::new();
        let mut left = budget;
        while left > 0 && parts.len() < 8 {
            let p = rng.gen_range(0..=left);
            parts.push(p);
            left -= p;
        }
        let total: usize = parts.iter().sum();
        let exact = multinomial(total, &parts).unwrap().is_odd() as u8;
        if multinomial_parity(&parts.iter().map(|&p| p as u64).collect::<Vec<_>>()) != exact {
            return outcome(false, format!("multinomial {parts:?} parity differs"));
        }
    }
    outcome(true, "2080 Stirling entries, 10000 multinomials")
}

/// Independent count: multinomial times Stirling numbers over the symmetry group.
fn expected_count(specs: &[FamilySpec]) -> BigUint {
    let sig = signature(specs).unwrap();
    let parts = sig.parts();
    let mut product = multinomial(sig.total(), &parts).unwrap();
    for e in &sig.entries {
        let m = e.m();
        // S(m, k) by the recurrence.
        let mut s = vec![vec![BigUint::from(0u8); e.k + 1]; m + 1];
        s[0][0] = BigUint::from(1u8);
        for i in 1..=m {
            for j in 1..=e.k.min(i) {
                s[i][j] = BigUint::from(j) * &s[i - 1][j] + &s[i - 1][j - 1];
            }
        }
        product *= &s[m][e.k];
    }
    let mut group = BigUint::from(1u8);
    let mut seen: Vec<(&str, usize, usize)> = Vec::new();
    for e in &sig.entries {
        match seen.iter_mut().find(|(s, k, _)| *s == e.subspace && *k == e.k) {
            Some(entry) => entry.2 += 1,
            None => seen.push((&e.subspace, e.k, 1)),
        }
    }
    for (_, _, c) in seen {
        group *= (1..=c).product::<usize>();
    }
    product / group
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for inst in instances() {
        let formula = expected_count(&inst.specs);
        let reported = compute_n(&signature(&inst.specs).unwrap()).unwrap().n;
        let start = match build_symmetric_start(&inst.specs, &StartParams::uniform(&inst.specs, 3, 11)) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("{}: start failed: {e}", inst.name)),
        };
        let found = match brute_force_bisectors(&start.config, &inst.specs) {
            Ok(f) => f.len(),
            Err(e) => return outcome(false, format!("{}: oracle failed: {e}", inst.name)),
        };
        let want = BigUint::from(inst.n);
        if formula != want || reported != want || BigUint::from(found) != want {
            return outcome(false, format!("{}: expected {want}, formula {formula}, reported {reported}, oracle {found}", inst.name));
        }
        notes.push(format!("{}: {found}", inst.name));
    }
    outcome(true, notes.join(", "))
}

fn criterion_3() -> Outcome {
    let mut events = 0;
    let mut checks = 0;
    let mut wide = Vec::new();
    for (i, inst) in instances().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(300 + i as u64);
        for p in 0..20u64 {
            let base = random_generic(&inst.specs, &[1, 3], &mut rng);
            let path = random_path(&base, 6, 4096, rng.gen());
            let report = match verify_parity_invariance(&path, &inst.specs, usize::MAX, p) {
                Ok(r) => r,
                Err(e) => return outcome(false, format!("{} path {p}: {e}", inst.name)),
            };
            if !(report.parity_constant && report.deltas_even && report.oracle_agrees) || report.oracle_checks != path.moves.len() {
                return outcome(
                    false,
                    format!(
                        "{} path {p}: parity constant {}, deltas even {}, oracle agrees {}",
                        inst.name, report.parity_constant, report.deltas_even, report.oracle_agrees
                    ),
                );
            }
            for e in report.events.iter().filter(|e| e.delta.abs() > 2) {
                wide.push(format!("{} path {p}: {}", inst.name, e.delta));
            }
            events += report.events.len();
            checks += report.oracle_checks;
        }
    }
    let summary = format!("180 paths, {events} events, {checks} oracle comparisons, parity constant and tracked set equal to the oracle throughout");
    if wide.is_empty() {
        outcome(true, summary)
    } else {
        outcome(false, format!("{summary}; {} events outside {{-2, 0, 2}}, first {}", wide.len(), wide[0]))
    }
}

fn criterion_4() -> Outcome {
    let mut total = 0;
    for (i, inst) in instances().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(400 + i as u64);
        for c in 0..50u64 {
            let config = random_generic(&inst.specs, &[1, 3, 5], &mut rng);
            let oracle = brute_force_bisectors(&config, &inst.specs).unwrap();
            if oracle.is_empty() {
                return outcome(false, format!("{} config {c}: oracle found nothing", inst.name));
            }
            let sol = match solve(&config, &inst.specs, &SolveOptions { seed: c, ..SolveOptions::default() }) {
                Ok(s) => s,
                Err(e) => return outcome(false, format!("{} config {c}: {e}", inst.name)),
            };
            let in_oracle = oracle.iter().any(|b| b.assignment == sol.assignment);
            let directions_ok = sol.arrangement.families.iter().zip(&inst.specs).all(|(f, s)| s.subspace.contains(&f.v));
            if !in_oracle || !directions_ok || !bisects(&sol.arrangement.hyperplanes(), &config) {
                return outcome(false, format!("{} config {c}: in oracle {in_oracle}, directions {directions_ok}", inst.name));
            }
            total += 1;
        }
    }
    outcome(true, format!("{total} configurations solved, each answer among the oracle's"))
}

fn criterion_5() -> Outcome {
    let specs = vec![line(2, 0, 1), line(2, 1, 1)];
    let ce = counterexample_config(&specs, 0).unwrap();
    let cells = match certify_no_bisection_fixed_directions(&specs, &ce.measures) {
        Ok(Certification::NoSolution(cert)) => cert.cells.len(),
        Ok(Certification::Found { .. }) => return outcome(false, "certifier found a bisecting arrangement"),
        Err(e) => return outcome(false, format!("certifier failed: {e}")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for attempt in 0..500 {
        let config = random_generic(&specs, &[1, 3, 5], &mut rng);
        if brute_force_bisectors(&config, &specs).unwrap().is_empty() {
            return outcome(true, format!("certificate with {cells} cells; point configuration {attempt} has no bisector"));
        }
    }
    outcome(false, format!("certificate with {cells} cells, but no empty point configuration in 500 draws"))
}

fn polygon(v: &[(i64, i64)]) -> MeasureSpec {
    MeasureSpec::Polygon { vertices: v.iter().map(|&(x, y)| vec![int(x), int(y)]).collect() }
}

/// Required median of the smaller share at the largest sample size.
const CONVERGENCE_TARGET: f64 = 0.48;
const CONVERGENCE_TOLERANCE: f64 = 0.02;

fn criterion_6() -> Outcome {
    let measures = vec![
        polygon(&[(0, 0), (4, 0), (5, 3), (1, 4)]),
        polygon(&[(6, 1), (10, 2), (8, 6)]),
        polygon(&[(2, 6), (5, 5), (7, 9), (3, 10), (1, 8)]),
    ];
    let specs = unconstrained(2, &[2]);
    let mut finest: Vec<Vec<f64>> = vec![Vec::new(); measures.len()];
    let mut escaped = 0;
    for seed in 0..5 {
        let report = match convergence_run(&measures, &specs, &[10, 40, 160], seed, &ConvergeOptions::default()) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("seed {seed}: {e}")),
        };
        let last = report.rows.last().unwrap();
        escaped += last.escaped.len();
        for (i, &r) in last.ratios.iter().enumerate() {
            finest[i].push(r);
        }
    }
    let medians: Vec<f64> = finest
        .iter_mut()
        .map(|v| {
            v.sort_by(f64::total_cmp);
            v[v.len() / 2]
        })
        .collect();
    let pass = medians.iter().all(|&m| m >= CONVERGENCE_TARGET - CONVERGENCE_TOLERANCE);
    let shown: Vec<String> = medians.iter().map(|m| format!("{m:.3}")).collect();
    outcome(pass, format!("medians at r=160 [{}], escaped hyperplanes {escaped}", shown.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let scale = 1i64 << 20;
    let measures: Vec<MeasureSpec> = (0..7)
        .map(|_| {
            let (cx, cy): (i64, i64) = (rng.gen_range(-50..50), rng.gen_range(-50..50));
            MeasureSpec::uniform_points(
                (0..3)
                    .map(|_| vec![frac(cx * scale + rng.gen_range(-scale..scale), scale), frac(cy * scale + rng.gen_range(-scale..scale), scale)])
                    .collect(),
            )
        })
        .collect();
    let report = match circles_bisection(&measures, &CirclesOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("circles bisection failed: {e}")),
    };
    let centers: Vec<&Vec<Rat>> = report
        .circles
        .iter()
        .filter_map(|c| match &c.curve {
            Curve::Circle { center, .. } => Some(center),
            Curve::Line { .. } => None,
        })
        .collect();
    let concentric = centers.len() == 2 && centers[0] == centers[1];
    let line_ok = matches!(report.line.curve, Curve::Line { .. });
    let vertical = matches!(&report.vertical_line.curve, Curve::Line { normal, .. } if normal[1] == int(0));
    // Chessboard membership in the plane from the curves' own sides.
    let curves: Vec<&LiftedCurve> = report.circles.iter().chain([&report.line, &report.vertical_line]).collect();
    let all_bisected = measures.iter().all(|m| {
        let MeasureSpec::Points { points, .. } = m else { return false };
        let (a, b, _) = chessboard_counts(points.iter().map(|p| curves.iter().map(|c| c.side(p)).collect()));
        balanced(a, b, points.len())
    });
    let pass = concentric && line_ok && vertical && all_bisected && report.exact_bisection;
    outcome(pass, format!("concentric {concentric}, line {line_ok}, vertical line {vertical}, all seven bisected {all_bisected}"))
}

fn criterion_8() -> Outcome {
    let grid = stirling_parity_table(32, 32);
    // S(n, k) mod 2 from the recurrence.
    let mut s = vec![vec![0u8; 64]; 64];
    s[0][0] = 1;
    for n in 1..64 {
        for k in 1..=n {
            s[n][k] = ((k % 2) as u8 * s[n - 1][k] + s[n - 1][k - 1]) % 2;
        }
    }
    // Pascal's triangle mod 2.
    let mut pascal = vec![vec![0u8; 64]; 64];
    for n in 0..64 {
        pascal[n][0] = 1;
        for k in 1..=n {
            pascal[n][k] = (pascal[n - 1][k - 1] + pascal[n - 1][k]) % 2;
        }
    }
    for d in 1..=32 {
        for k in 1..=32 {
            let n = d + k - 1;
            let bit = grid[d - 1][k - 1];
            if bit != s[n][k] {
                return outcome(false, format!("d={d} k={k}: table {bit}, recurrence {}", s[n][k]));
            }
            // S(n, k) is odd exactly when C(n - floor(k/2) - 1, floor((k-1)/2)) is.
            if bit != pascal[n - k / 2 - 1][(k - 1) / 2] {
                return outcome(false, format!("d={d} k={k}: table {bit} off the Pascal pattern"));
            }
        }
    }
    let ones: usize = grid.iter().flatten().map(|&b| b as usize).sum();
    outcome(true, format!("1024 entries match, {ones} odd"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("parity formulas", criterion_1, Duration::from_secs(5)),
        ("count reproduction", criterion_2, Duration::from_secs(30)),
        ("parity invariance", criterion_3, Duration::from_secs(300)),
        ("existence at parity 1", criterion_4, Duration::from_secs(300)),
        ("even-parity behavior", criterion_5, Duration::MAX),
        ("convergence", criterion_6, Duration::from_secs(600)),
        ("concentric circles", criterion_7, Duration::MAX),
        ("parity table", criterion_8, Duration::from_secs(1)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let label = format!("{} {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let in_time = took <= *limit;
        let pass = o.pass && in_time;
        failed += usize::from(!pass);
        let budget = if *limit == Duration::MAX { String::new() } else { format!(" of {:.0?}", limit) };
        println!(
            "criterion {label}: {} ({}; {:.2?}{budget})",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
