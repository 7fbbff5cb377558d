//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::io::Write;
use std::process::{Command, Stdio};
use std::time::Instant;

use unispan::algebra::complement_project;
use unispan::linalg::{operator_norm, unitarity_residual};
use unispan::random::{gaussian_matrix, hermitian_matrix, rng_stream};
use unispan::selftest::{expectation_axioms, spec_grid, SelftestConfig};
use unispan::{
    run_spancert, verify_decomposition, BlockSpec, Complex64, ComplexMatrix, Decomposer,
    Tolerances, TypeISubalgebraSpec,
};

const SEED: u64 = 0;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: String) -> Outcome {
    Outcome { pass, summary }
}

fn clean(spec: &TypeISubalgebraSpec, d: &unispan::Decomposition, x: &ComplexMatrix, recon: f64, term: f64) -> (bool, f64) {
    let rep = verify_decomposition(spec, x, d).expect("dimensions agree");
    let ok = rep.recon_residual <= recon
        && rep.max_unitarity_residual <= term
        && rep.max_membership_residual <= term;
    let worst = rep
        .recon_residual
        .max(rep.max_unitarity_residual)
        .max(rep.max_membership_residual);
    (ok, worst)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let suite = expectation_axioms(&SelftestConfig::default(), 1000);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        suite.pass && suite.trials == 1000 && secs < 10.0,
        format!(
            "conditional-expectation axioms: {} trials, {} failures, worst residual {:.2e} (bound 1e-11), {secs:.2}s (target < 10s)",
            suite.trials, suite.failures, suite.worst
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let dec = Decomposer::default();
    let mut r = rng_stream(SEED, 102);
    let (mut trials, mut failures, mut worst) = (0, 0, 0.0f64);
    let mut first = None;
    for (name, spec) in spec_grid() {
        let n = spec.dim();
        for _ in 0..50 {
            let x = complement_project(&spec, &gaussian_matrix(n, &mut r)).unwrap();
            trials += 1;
            match dec.type_one_decomp(&spec, &x) {
                Ok(d) => {
                    let rep = verify_decomposition(&spec, &x, &d).unwrap();
                    worst = worst.max(rep.recon_residual);
                    let ok = rep.recon_residual <= 1e-9
                        && rep.max_unitarity_residual <= 1e-10
                        && rep.max_membership_residual <= 1e-10;
                    if !ok {
                        failures += 1;
                        first.get_or_insert_with(|| format!("{name}: {rep:?}"));
                    }
                }
                Err(e) => {
                    failures += 1;
                    first.get_or_insert_with(|| format!("{name}: {e}"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures == 0 && secs < 60.0,
        format!(
            "decomposition soundness: {trials} trials over {} specs, {failures} failures, worst recon {worst:.2e}, {secs:.2}s (target < 60s){}",
            spec_grid().len(),
            first.map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_3() -> Outcome {
    let two = |a: BlockSpec, b: BlockSpec| TypeISubalgebraSpec::new(vec![a, b]).unwrap();
    let mut cases: Vec<(String, TypeISubalgebraSpec, usize)> = Vec::new();
    for n in 2..=8 {
        cases.push((format!("masa {n}"), TypeISubalgebraSpec::masa(n), n * n - n));
    }
    for m in [2, 4, 6, 8] {
        cases.push((format!("C1_{m}"), TypeISubalgebraSpec::scalars(m), m * m - 1));
    }
    cases.push(("atoms (2,2)".into(), TypeISubalgebraSpec::atomic(&[2, 2]), 16 - 2));
    cases.push(("M_2 ⊗ 1_2".into(), TypeISubalgebraSpec::factor(2, 2), 12));
    cases.push((
        "(2:2)+(2:2)".into(),
        two(BlockSpec::new(2, vec![2]), BlockSpec::new(2, vec![2])),
        64 - 8,
    ));
    cases.push((
        "(1:4)+(2:2)".into(),
        two(BlockSpec::new(1, vec![4]), BlockSpec::new(2, vec![2])),
        64 - 5,
    ));
    let dec = Decomposer::default();
    let mut bad = Vec::new();
    for (name, spec, expected) in &cases {
        match run_spancert(spec, &dec) {
            Ok(c) if c.gram_rank == *expected && c.expected_rank == *expected && c.pass => {}
            Ok(c) => bad.push(format!("{name}: rank {} expected {expected}", c.gram_rank)),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "span certificates: {}/{} exact ranks (rank_tol 1e-9){}",
            cases.len() - bad.len(),
            cases.len(),
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join(", ")) }
        ),
    )
}

fn criterion_4() -> Outcome {
    let spec = TypeISubalgebraSpec::masa(2);
    let x = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[3.0, 0.0]]);
    let s = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
    let d = Decomposer::default().type_one_decomp(&spec, &x).unwrap();
    let coeff_of = |u: &ComplexMatrix| {
        d.terms
            .iter()
            .find(|term| term.unitary.hs_distance(u) <= 1e-15)
            .map(|term| term.coeff)
    };
    let (cs, ct) = (coeff_of(&s), coeff_of(&t));
    let mut sum = ComplexMatrix::zeros(2);
    for term in &d.terms {
        sum.add_scaled(term.coeff, &term.unitary);
    }
    let residual = sum.hs_distance(&x);
    let exact = d.len() == 2
        && cs.is_some_and(|c| (c - Complex64::new(2.5, 0.0)).norm() <= 1e-15)
        && ct.is_some_and(|c| (c - Complex64::new(-0.5, 0.0)).norm() <= 1e-15);
    outcome(
        exact && residual <= 1e-15,
        format!(
            "worked example: {} terms, S coefficient {:?}, T coefficient {:?}, residual {residual:.1e} (bound 1e-15)",
            d.len(),
            cs.map(|c| c.re),
            ct.map(|c| c.re)
        ),
    )
}

fn criterion_5() -> Outcome {
    let dec = Decomposer::default();
    let tol = Tolerances::default();
    let mut r = rng_stream(SEED, 105);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for trial in 0..200 {
        let m = 2 * (1 + trial % 6);
        let h = hermitian_matrix(m, &mut r);
        let h = &h - &ComplexMatrix::identity(m).scale(h.normalized_trace());
        let y = h.scale_real((0.2 + 0.8 * (trial % 5) as f64 / 4.0) / operator_norm(&h, &tol));
        let dil = dec.scalar_dilation(&y).unwrap();
        let target = ComplexMatrix::from_blocks(2, m, &[(0, 0, y.clone())]);
        let mut combo = (&dil.u1 + &dil.u2).scale_real(0.5);
        combo -= &dil.u3;
        let res = unitarity_residual(&dil.u1)
            .max(unitarity_residual(&dil.u2))
            .max(combo.hs_distance(&target));
        worst = worst.max(res);
        if res > 1e-11 {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("dilation identity: 200 trials (m = 2..12), {failures} failures, worst residual {worst:.2e} (bound 1e-11)"),
    )
}

fn criterion_6() -> Outcome {
    let dec = Decomposer::default();
    let mut r = rng_stream(SEED, 106);
    let (mut failures, mut worst) = (0, 0.0f64);
    for n in [4, 8, 12] {
        let spec = TypeISubalgebraSpec::masa(n);
        for _ in 0..20 {
            let x = complement_project(&spec, &gaussian_matrix(n, &mut r)).unwrap();
            for d in [dec.type_one_decomp(&spec, &x), dec.masa_quadrant_decomp(&x)] {
                match d {
                    Ok(d) => {
                        let (ok, w) = clean(&spec, &d, &x, 1e-9, 1e-10);
                        worst = worst.max(w);
                        failures += usize::from(!ok);
                    }
                    Err(_) => failures += 1,
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("cross-path agreement: n in {{4, 8, 12}}, 20 inputs each, both routes, {failures} failures, worst residual {worst:.2e}"),
    )
}

fn criterion_7() -> Outcome {
    let dec = Decomposer::default();
    let tol = Tolerances::default();
    let mut r = rng_stream(SEED, 107);
    let (mut failures, mut max_terms, mut worst_excess) = (0, 0, f64::NEG_INFINITY);
    for trial in 0..500 {
        let n = 1 + trial % 12;
        let scale = [0.01, 0.3, 1.0, 5.0, 100.0][trial % 5];
        let x = gaussian_matrix(n, &mut r).scale_real(scale);
        let d = dec.four_unitary(&x);
        let excess = d.coeff_sum() - 2.0 * operator_norm(&x, &tol);
        worst_excess = worst_excess.max(excess);
        max_terms = max_terms.max(d.len());
        let recon = d.reconstruct().hs_distance(&x);
        if excess > 1e-9 || d.len() > 4 || recon > 1e-9 * scale.max(1.0) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!(
            "four-unitary budget: 500 trials (n <= 12), {failures} failures, max terms {max_terms}, max (sum|λ| - 2‖x‖) {worst_excess:.2e} (bound 1e-9)"
        ),
    )
}

fn run_bin(args: &[&str], stdin: Option<&str>) -> (Option<i32>, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_unispan"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    if let Some(text) = stdin {
        pipe.write_all(text.as_bytes()).unwrap();
    }
    drop(pipe);
    let out = child.wait_with_output().unwrap();
    (out.status.code(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn rule_of(stderr: &str) -> Option<String> {
    let v: serde_json::Value = serde_json::from_str(stderr.trim()).ok()?;
    v["reason"].as_str().map(str::to_string)
}

fn criterion_8() -> Outcome {
    let odd = r#"{"n":3,"matrix":{"re":[[0,1,0],[0,0,0],[1,0,0]],"im":[[0,0,0],[0,0,0],[0,0,0]]},"spec":{"blocks":[{"k":1,"atom_mults":[3]}]}}"#;
    let (odd_code, odd_err) = run_bin(&["decompose", "-"], Some(odd));
    let hetero = r#"{"n":6,"matrix":{"re":[[0,0,0,0,1,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0]],"im":[[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0]]},"spec":{"blocks":[{"k":2,"atom_mults":[2]},{"k":1,"atom_mults":[2]}]}}"#;
    let (het_code, het_err) = run_bin(&["decompose", "-"], Some(hetero));
    let (fault_code, fault_err) = run_bin(&["selftest", "--inject-fault", "--out", "-"], None);
    let failing_suites = fault_err.lines().filter(|l| l.starts_with("FAIL")).count();
    let odd_ok = odd_code == Some(3) && rule_of(&odd_err).as_deref() == Some("odd atom rank");
    let het_ok = het_code == Some(3) && rule_of(&het_err).as_deref() == Some("heterogeneous atom dimensions");
    let fault_ok = fault_code == Some(1) && failing_suites >= 1;
    outcome(
        odd_ok && het_ok && fault_ok,
        format!(
            "negative controls: odd atom rank exit {odd_code:?} reason {:?}; heterogeneous exit {het_code:?} reason {:?}; injected fault exit {fault_code:?} with {failing_suites} failing suite(s)",
            rule_of(&odd_err),
            rule_of(&het_err)
        ),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        let o = run();
        println!("criterion {id}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
