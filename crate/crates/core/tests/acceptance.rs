//! The ten acceptance criteria, one PASS/FAIL line each.

use std::time::{Duration, Instant};

use crprime_core::heisenberg::{self, flat_model};
use crprime_core::moser::Golden;
use crprime_core::report::{Check, Residual, Status};
use crprime_core::sphere::{self, QuadratureConfig};
use crprime_core::suite::{conformal_checks, heisenberg_checks, moser_checks, Perturbation, SuiteConfig, CHAIN_INSTANCES};

const TOTAL_Q_PRIME_TOL: f64 = 1e-6;
const DELTA_SPREAD_TOL: f64 = 5e-3;
const GOLDEN_BUDGET: Duration = Duration::from_secs(10);
const HEISENBERG_BUDGET: Duration = Duration::from_secs(5);
const SPHERE_BUDGET: Duration = Duration::from_secs(60);

fn find<'a>(checks: &'a [Check], id: &str) -> &'a Check {
    checks.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("missing check {id}"))
}

fn asserted_details(c: &Check) -> usize {
    c.details.iter().filter(|d| d.pass.is_some()).count()
}

fn float(c: &Check) -> f64 {
    match c.residual {
        Residual::Float(x) => x,
        _ => f64::NAN,
    }
}

struct Outcome {
    lines: Vec<String>,
    failed: usize,
}

impl Outcome {
    fn record(&mut self, n: usize, name: &str, ok: bool, info: String) {
        let mark = if ok { "PASS" } else { "FAIL" };
        self.lines.push(format!("{mark} {n:>2} {name}: {info}"));
        if !ok {
            self.failed += 1;
        }
    }
}

#[test]
fn acceptance() {
    let mut out = Outcome { lines: Vec::new(), failed: 0 };
    let cfg = SuiteConfig::default();

    let t = Instant::now();
    let moser = moser_checks(&cfg);
    let elapsed = t.elapsed();
    let golden: Vec<_> = moser.iter().filter(|c| c.id.starts_with("moser.golden.")).collect();
    let ok = golden.len() == 6 && golden.iter().all(|c| c.status == Status::Pass) && elapsed < GOLDEN_BUDGET;
    out.record(1, "Moser golden expansions", ok, format!("{} expansions at order {}, {:.2?}", golden.len(), cfg.order, elapsed));

    let chain = find(&moser, "moser.chain");
    let ok = chain.status == Status::Pass && asserted_details(chain) == CHAIN_INSTANCES as usize;
    out.record(2, "chain restriction", ok, format!("{} instances", asserted_details(chain)));

    let fef = find(&moser, "moser.fefferman");
    let ok = fef.status == Status::Pass && asserted_details(fef) == CHAIN_INSTANCES as usize;
    out.record(3, "Fefferman determinant", ok, format!("{} instances", asserted_details(fef)));

    let t = Instant::now();
    let heis = heisenberg::all_checks();
    let elapsed = t.elapsed();
    let ids = ["heisenberg.green_harmonicity", "heisenberg.p3_log_rho", "heisenberg.green_log_identity"];
    let ok = ids.iter().all(|id| find(&heis, id).status == Status::Pass) && elapsed < HEISENBERG_BUDGET;
    out.record(4, "Heisenberg identities", ok, format!("{:.2?}", elapsed));

    let eq = find(&heis, "heisenberg.flat_torsion_of_hat");
    out.record(5, "flat equality case", eq.status == Status::Pass, "Â = 0, R̂ = 0, law = re-solve".into());

    let ok = ["heisenberg.szego_candidate", "heisenberg.flat_qprime_law"].iter().all(|id| find(&heis, id).status == Status::Pass);
    out.record(6, "flat Q′ closure", ok, "P̊′(log G̊) = 16Re(ζ⁻²), P̊₃-annihilated, P̊′ + P̊((log G̊)²) = 0".into());

    let conf = conformal_checks(&cfg);
    let law = find(&conf, "conformal.qprime_law");
    let graded = find(&conf, "conformal.qprime_law_graded");
    let ok = law.status == Status::Pass && asserted_details(law) >= 5 && graded.status == Status::Pass;
    out.record(7, "conformal Q′ law", ok, format!("{} exact factors, graded at order {}", asserted_details(law), cfg.order));

    let qc = QuadratureConfig::default();
    let t = Instant::now();
    let total = sphere::total_q_prime_check(&qc);
    let elapsed = t.elapsed();
    let rel = float(&total);
    let ok = total.status == Status::Pass && rel <= TOTAL_Q_PRIME_TOL && elapsed < SPHERE_BUDGET;
    out.record(8, "sphere ∫Q′ = 16π²", ok, format!("relative error {rel:.2e}, {:.2?}", elapsed));

    let delta = sphere::delta_normalization_check(&qc);
    let spread = float(&delta);
    let measured = delta.details.iter().find(|d| d.label == "measured constant").map(|d| d.value.clone()).unwrap_or_default();
    let ok = delta.status == Status::Pass && spread <= DELTA_SPREAD_TOL;
    out.record(9, "delta normalization", ok, format!("spread {spread:.2e}, constant {measured} (stated 16)"));

    let mut bad_golden = Golden::builtin();
    let lambda = bad_golden.expansions.iter_mut().find(|e| e.id == "lambda").unwrap();
    lambda.terms[1].coeff = "i".into();
    let corrupted = SuiteConfig { golden: bad_golden, ..SuiteConfig::default() };
    let golden_caught = find(&moser_checks(&corrupted), "moser.golden.lambda").status == Status::Fail;
    let wrong_power = SuiteConfig { green_power: 2, ..SuiteConfig::default() };
    let power_caught = find(&heisenberg_checks(&wrong_power), "heisenberg.green_log_identity").status == Status::Fail;
    let perturbed = SuiteConfig { perturbation: Perturbation::WeightFour, ..SuiteConfig::default() };
    let p = moser_checks(&perturbed);
    let weight_four_caught = p.iter().any(|c| c.id.starts_with("moser.golden.") && c.status == Status::Fail)
        && find(&p, "moser.fefferman").status == Status::Fail;
    // the unmodified model must still pass the same checks
    let clean = find(&heisenberg::checks_for(flat_model()), "heisenberg.green_log_identity").status == Status::Pass;
    let ok = golden_caught && power_caught && weight_four_caught && clean;
    out.record(
        10,
        "negative controls",
        ok,
        format!("corrupted golden {golden_caught}, wrong Green power {power_caught}, weight-4 E {weight_four_caught}"),
    );

    for l in &out.lines {
        println!("{l}");
    }
    assert_eq!(out.failed, 0, "{} acceptance criteria failed", out.failed);
}
