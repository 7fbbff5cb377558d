//! Batch invariant suites over a fixed grid of subalgebra specs. Failures are
//! collected into the summary, never raised.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    complement_project, conditional_expectation, random_algebra_element, BlockSpec,
    TypeISubalgebraSpec,
};
use crate::certificate::run_spancert;
use crate::decomp::{Budget, Decomposer, Mutation};
use crate::error::Error;
use crate::linalg::{operator_norm, unitarity_residual};
use crate::matrix::ComplexMatrix;
use crate::random::{gaussian_matrix, hermitian_matrix, rng_stream, unitary_matrix, Rng};
use crate::tolerance::Tolerances;
use crate::verify::verify_decomposition;

/// Residual bound for the conditional-expectation axioms.
pub const AXIOM_TOL: f64 = 1e-11;
/// Reconstruction bound for spec-level decompositions.
pub const RECON_TOL: f64 = 1e-9;
/// Unitarity and membership bound for every emitted term.
pub const TERM_TOL: f64 = 1e-10;
/// Bound for the dilation identity.
pub const DILATION_TOL: f64 = 1e-11;
/// Bound for the worked masa example.
pub const EXACT_TOL: f64 = 1e-15;

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Skip every spec and size with dimension above this.
    pub max_n: Option<usize>,
    pub mutation: Option<Mutation>,
    pub tol: Tolerances,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_n: None,
            mutation: None,
            tol: Tolerances::default(),
        }
    }
}

impl SelftestConfig {
    fn decomposer(&self) -> Decomposer {
        Decomposer {
            tol: self.tol,
            mutation: self.mutation,
        }
    }

    fn admits(&self, n: usize) -> bool {
        self.max_n.is_none_or(|m| n <= m)
    }

    fn rng(&self, suite: u64) -> Rng {
        rng_stream(self.seed, suite)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub pass: bool,
    pub trials: usize,
    pub failures: usize,
    /// Largest residual seen, in the suite's own units.
    pub worst: f64,
    pub bound: f64,
    pub seconds: f64,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<24} trials={:<5} failures={:<4} worst={:.3e} bound={:.1e} ({:.2}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.trials,
            self.failures,
            self.worst,
            self.bound,
            self.seconds
        )?;
        if let Some(d) = &self.detail {
            write!(f, "\n     first failure: {d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestSummary {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

/// Accumulates trial outcomes for one suite.
struct Tally {
    name: &'static str,
    bound: f64,
    trials: usize,
    failures: usize,
    worst: f64,
    detail: Option<String>,
    start: Instant,
}

impl Tally {
    fn new(name: &'static str, bound: f64) -> Self {
        Self {
            name,
            bound,
            trials: 0,
            failures: 0,
            worst: 0.0,
            detail: None,
            start: Instant::now(),
        }
    }

    /// Records a residual against the suite bound.
    fn residual(&mut self, value: f64, what: impl FnOnce() -> String) {
        self.check(value, value <= self.bound, what);
    }

    fn check(&mut self, value: f64, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if value.is_nan() || !ok {
            self.failures += 1;
            if self.detail.is_none() {
                self.detail = Some(format!("{} (value {value:.3e})", what()));
            }
        }
        if !value.is_nan() {
            self.worst = self.worst.max(value);
        }
    }

    fn fail(&mut self, what: String) {
        self.trials += 1;
        self.failures += 1;
        if self.detail.is_none() {
            self.detail = Some(what);
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.to_string(),
            pass: self.failures == 0 && self.trials > 0,
            trials: self.trials,
            failures: self.failures,
            worst: self.worst,
            bound: self.bound,
            seconds: self.start.elapsed().as_secs_f64(),
            detail: self.detail,
        }
    }
}

fn two_blocks(a: BlockSpec, b: BlockSpec) -> TypeISubalgebraSpec {
    TypeISubalgebraSpec::new(vec![a, b]).expect("well-formed grid spec")
}

/// The fixed subalgebra grid: masas, single atoms, abelian atom lists and
/// homogeneous two-block specs.
pub fn spec_grid() -> Vec<(String, TypeISubalgebraSpec)> {
    let mut grid = Vec::new();
    for n in 2..=8 {
        grid.push((format!("masa n={n}"), TypeISubalgebraSpec::masa(n)));
    }
    for (k, m) in [(1, 2), (1, 4), (1, 6), (2, 2), (2, 4)] {
        grid.push((format!("factor k={k} m={m}"), TypeISubalgebraSpec::factor(k, m)));
    }
    for ranks in [&[2, 2][..], &[2, 4], &[4, 6], &[1, 1, 2], &[1, 2, 2, 4]] {
        grid.push((format!("atoms {ranks:?}"), TypeISubalgebraSpec::atomic(ranks)));
    }
    grid.push((
        "blocks (2:2)+(2:2)".into(),
        two_blocks(BlockSpec::new(2, vec![2]), BlockSpec::new(2, vec![2])),
    ));
    grid.push((
        "blocks (1:4)+(2:2)".into(),
        two_blocks(BlockSpec::new(1, vec![4]), BlockSpec::new(2, vec![2])),
    ));
    grid
}

/// Specs whose span certificate is checked.
pub fn certificate_grid() -> Vec<(String, TypeISubalgebraSpec)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("masa n={n}"), TypeISubalgebraSpec::masa(n)));
    }
    for m in [2, 4, 6, 8] {
        out.push((format!("scalars m={m}"), TypeISubalgebraSpec::scalars(m)));
    }
    out.push(("atoms [2, 2]".into(), TypeISubalgebraSpec::atomic(&[2, 2])));
    out.push(("factor k=2 m=2".into(), TypeISubalgebraSpec::factor(2, 2)));
    out.extend(spec_grid().into_iter().filter(|(name, _)| name.starts_with("blocks")));
    out
}

fn conjugated(spec: &TypeISubalgebraSpec, r: &mut Rng, tol: &Tolerances) -> TypeISubalgebraSpec {
    let w = unitary_matrix(spec.dim(), r);
    spec.clone().with_conjugation(w, tol).expect("random unitary")
}

/// Idempotence, bimodularity, trace preservation, self-adjointness of `E`,
/// contractivity, HS-orthogonality and adjoint equivariance.
pub fn expectation_axioms(cfg: &SelftestConfig, trials: usize) -> SuiteResult {
    let mut tally = Tally::new("expectation-axioms", AXIOM_TOL);
    let grid: Vec<_> = spec_grid().into_iter().filter(|(_, s)| cfg.admits(s.dim())).collect();
    let mut r = cfg.rng(1);
    for t in 0..trials {
        let (name, base) = &grid[t % grid.len()];
        let spec = if t % 2 == 1 {
            conjugated(base, &mut r, &cfg.tol)
        } else {
            base.clone()
        };
        let n = spec.dim();
        let e = |m: &ComplexMatrix| conditional_expectation(&spec, m).expect("valid spec");
        let x = gaussian_matrix(n, &mut r);
        let y = gaussian_matrix(n, &mut r);
        let a = random_algebra_element(&spec, r.random()).expect("valid spec");
        let b = random_algebra_element(&spec, r.random()).expect("valid spec");
        let ex = e(&x);
        let ey = e(&y);
        let inner = |p: &ComplexMatrix, q: &ComplexMatrix| p.hs_inner(q).expect("same dimension");
        let checks = [
            ("idempotence", e(&ex).hs_distance(&ex)),
            ("bimodularity", e(&a.matmul(&x).matmul(&b)).hs_distance(&a.matmul(&ex).matmul(&b))),
            ("trace", (ex.normalized_trace() - x.normalized_trace()).norm()),
            ("self-adjointness", (inner(&ex, &y) - inner(&x, &ey)).norm()),
            ("hs-contractivity", (ex.hs_norm() - x.hs_norm()).max(0.0)),
            (
                "operator-contractivity",
                (operator_norm(&ex, &cfg.tol) - operator_norm(&x, &cfg.tol)).max(0.0),
            ),
            ("orthogonality", inner(&(&x - &ex), &a).norm()),
            ("adjoint", e(&x.adjoint()).hs_distance(&ex.adjoint())),
        ];
        let worst = checks.iter().map(|c| c.1).fold(0.0, f64::max);
        let label = checks
            .iter()
            .find(|c| c.1 == worst)
            .map(|c| c.0)
            .unwrap_or("");
        tally.residual(worst, || format!("{label} on {name} (trial {t})"));
    }
    tally.finish()
}

/// `type_one_decomp` on random complement elements: reconstruction,
/// unitarity, membership and the static budget.
pub fn decomposition_soundness(cfg: &SelftestConfig, per_spec: usize) -> SuiteResult {
    let mut tally = Tally::new("decomposition-soundness", RECON_TOL);
    let dec = cfg.decomposer();
    let mut r = cfg.rng(2);
    for (name, base) in spec_grid().into_iter().filter(|(_, s)| cfg.admits(s.dim())) {
        for t in 0..per_spec {
            let spec = if t % 2 == 1 {
                conjugated(&base, &mut r, &cfg.tol)
            } else {
                base.clone()
            };
            let n = spec.dim();
            let x = complement_project(&spec, &gaussian_matrix(n, &mut r)).expect("valid spec");
            let what = || format!("{name} (trial {t})");
            let d = match dec.type_one_decomp(&spec, &x) {
                Ok(d) => d,
                Err(e) => {
                    tally.fail(format!("{}: {e}", what()));
                    continue;
                }
            };
            let rep = verify_decomposition(&spec, &x, &d).expect("dimensions agree");
            let budget = Budget::for_input(&spec, &x, &cfg.tol).expect("supported spec");
            let ok = rep.recon_residual <= RECON_TOL
                && rep.max_unitarity_residual <= TERM_TOL
                && rep.max_membership_residual <= TERM_TOL
                && budget.admits(rep.term_count, rep.coeff_sum, RECON_TOL);
            tally.check(rep.recon_residual, ok, || {
                format!(
                    "{}: unitarity {:.2e}, membership {:.2e}, {} terms (budget {}), coeff sum {:.3} (budget {:.3})",
                    what(),
                    rep.max_unitarity_residual,
                    rep.max_membership_residual,
                    rep.term_count,
                    budget.max_terms,
                    rep.coeff_sum,
                    budget.max_coeff_sum
                )
            });
        }
    }
    tally.finish()
}

/// Integer rank of the pooled unitaries against `n^2 - dim A`.
pub fn span_certificates(cfg: &SelftestConfig) -> SuiteResult {
    let mut tally = Tally::new("span-certificates", 0.0);
    let dec = cfg.decomposer();
    for (name, spec) in certificate_grid().into_iter().filter(|(_, s)| cfg.admits(s.dim())) {
        match run_spancert(&spec, &dec) {
            Ok(c) => {
                let gap = c.expected_rank.abs_diff(c.gram_rank) as f64;
                tally.check(gap, c.pass, || {
                    format!(
                        "{name}: rank {} of {}, worst recon {:.2e}",
                        c.gram_rank, c.expected_rank, c.residual_summary.recon_residual
                    )
                });
            }
            Err(e) => tally.fail(format!("{name}: {e}")),
        }
    }
    tally.finish()
}

/// Masa `n = 2`, `x = [[0, 2], [3, 0]] = (5/2) S - (1/2) T`.
pub fn worked_example(cfg: &SelftestConfig) -> SuiteResult {
    let mut tally = Tally::new("worked-example", EXACT_TOL);
    let spec = TypeISubalgebraSpec::masa(2);
    let x = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[3.0, 0.0]]);
    let s = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
    match cfg.decomposer().type_one_decomp(&spec, &x) {
        Ok(d) => {
            let expected = [(Complex64::new(2.5, 0.0), &s), (Complex64::new(-0.5, 0.0), &t)];
            let matched = d.len() == 2
                && expected.iter().all(|(c, u)| {
                    d.terms
                        .iter()
                        .any(|term| term.unitary.hs_distance(u) <= EXACT_TOL && (term.coeff - c).norm() <= EXACT_TOL)
                });
            let rep = verify_decomposition(&spec, &x, &d).expect("dimensions agree");
            tally.check(rep.recon_residual, matched && rep.recon_residual <= EXACT_TOL, || {
                format!("terms {:?}", d.terms.iter().map(|t| t.coeff).collect::<Vec<_>>())
            });
        }
        Err(e) => tally.fail(e.to_string()),
    }
    tally.finish()
}

/// `u1, u2` unitary and `½u1 + ½u2 - u3 = diag(y, 0)` for random
/// trace-zero self-adjoint contractions `y` of even size.
pub fn dilation_identity(cfg: &SelftestConfig, trials: usize) -> SuiteResult {
    let mut tally = Tally::new("dilation-identity", DILATION_TOL);
    let dec = cfg.decomposer();
    let sizes: Vec<usize> = (2..=12).step_by(2).filter(|&m| cfg.admits(m)).collect();
    let mut r = cfg.rng(5);
    for t in 0..trials {
        let m = sizes[t % sizes.len()];
        let h = hermitian_matrix(m, &mut r);
        let h = &h - &ComplexMatrix::identity(m).scale(h.normalized_trace());
        let norm = operator_norm(&h, &cfg.tol);
        let target_norm: f64 = if t % 10 == 0 { 1.0 } else { r.random_range(0.05..1.0) };
        let y = h.scale_real(target_norm / norm);
        let what = || format!("size {m} (trial {t})");
        match dec.scalar_dilation(&y) {
            Ok(dil) => {
                let target = ComplexMatrix::from_blocks(2, m, &[(0, 0, y.clone())]);
                let worst = unitarity_residual(&dil.u1)
                    .max(unitarity_residual(&dil.u2))
                    .max(dil.combination().hs_distance(&target));
                tally.residual(worst, what);
            }
            Err(e) => tally.fail(format!("{}: {e}", what())),
        }
    }
    tally.finish()
}

/// Masa specs with `4 | n`: the quadrant route and the default route both
/// verify clean on shared inputs.
pub fn cross_path(cfg: &SelftestConfig, per_size: usize) -> SuiteResult {
    let mut tally = Tally::new("cross-path", RECON_TOL);
    let dec = cfg.decomposer();
    let mut r = cfg.rng(6);
    for n in [4, 8, 12].into_iter().filter(|&n| cfg.admits(n)) {
        let spec = TypeISubalgebraSpec::masa(n);
        for t in 0..per_size {
            let x = complement_project(&spec, &gaussian_matrix(n, &mut r)).expect("valid spec");
            let routes = [
                ("default", dec.type_one_decomp(&spec, &x)),
                ("quadrant", dec.masa_quadrant_decomp(&x)),
            ];
            for (route, result) in routes {
                let what = || format!("{route} route, n={n} (trial {t})");
                match result {
                    Ok(d) => {
                        let rep = verify_decomposition(&spec, &x, &d).expect("dimensions agree");
                        let ok = rep.recon_residual <= RECON_TOL
                            && rep.max_unitarity_residual <= TERM_TOL
                            && rep.max_membership_residual <= TERM_TOL;
                        tally.check(rep.recon_residual, ok, what);
                    }
                    Err(e) => tally.fail(format!("{}: {e}", what())),
                }
            }
        }
    }
    tally.finish()
}

/// At most four terms with `Σ|λ| <= 2‖x‖ + 1e-9`. The recorded value is the
/// excess of the coefficient sum over `2‖x‖`.
pub fn four_unitary_budget(cfg: &SelftestConfig, trials: usize) -> SuiteResult {
    let mut tally = Tally::new("four-unitary-budget", 1e-9);
    let dec = cfg.decomposer();
    let max = cfg.max_n.unwrap_or(12).min(12);
    let mut r = cfg.rng(7);
    for t in 0..trials {
        let n = r.random_range(1..=max);
        let scale = 10f64.powf(r.random_range(-2.0..2.0));
        let x = gaussian_matrix(n, &mut r).scale_real(scale);
        let d = dec.four_unitary(&x);
        let excess = d.coeff_sum() - 2.0 * operator_norm(&x, &cfg.tol);
        let recon = d.reconstruct().hs_distance(&x);
        let unitary = d.unitaries().all(|u| unitarity_residual(u) <= TERM_TOL);
        let ok = excess <= 1e-9 && d.len() <= 4 && recon <= RECON_TOL * scale.max(1.0) && unitary;
        tally.check(excess.max(0.0), ok, || {
            format!("n={n} (trial {t}): {} terms, recon {recon:.2e}", d.len())
        });
    }
    tally.finish()
}

/// Specs outside the envelope are rejected with the named rule.
pub fn negative_controls(cfg: &SelftestConfig) -> SuiteResult {
    let mut tally = Tally::new("negative-controls", 0.0);
    let dec = cfg.decomposer();
    let cases = [
        (TypeISubalgebraSpec::scalars(3), "odd atom rank"),
        (TypeISubalgebraSpec::atomic(&[1, 3]), "odd atom rank"),
        (TypeISubalgebraSpec::factor(2, 3), "odd atom rank"),
        (
            two_blocks(BlockSpec::new(2, vec![2]), BlockSpec::new(1, vec![2])),
            "heterogeneous atom dimensions",
        ),
    ];
    for (spec, rule) in cases {
        let n = spec.dim();
        let x = complement_project(&spec, &gaussian_matrix(n, &mut cfg.rng(8))).expect("valid spec");
        match dec.type_one_decomp(&spec, &x) {
            Err(Error::Unsupported(reason)) if reason.rule() == rule => tally.check(0.0, true, String::new),
            other => tally.fail(format!("{spec:?}: expected '{rule}', got {other:?}")),
        }
    }
    tally.finish()
}

/// Every suite at its full trial count.
pub fn run_selftest(cfg: &SelftestConfig) -> SelftestSummary {
    let suites = vec![
        expectation_axioms(cfg, 1000),
        decomposition_soundness(cfg, 50),
        span_certificates(cfg),
        worked_example(cfg),
        dilation_identity(cfg, 200),
        cross_path(cfg, 20),
        four_unitary_budget(cfg, 500),
        negative_controls(cfg),
    ];
    let pass = suites.iter().all(|s| s.pass);
    SelftestSummary {
        seed: cfg.seed,
        suites,
        pass,
    }
}
