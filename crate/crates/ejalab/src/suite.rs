//! Configuration-driven verification harness: randomized sweeps and exact
//! regressions organized as named checks, each reporting failures with
//! replayable witnesses.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::random::{random_element, random_frame, rng_for};
use crate::algebra::{strong_commute, Algebra, AlgebraSpec, Element};
use crate::error::{EjaError, Result};
use crate::solvers::{
    fan_trace_max, maximize_over_orbit, solve_cone_cp, solve_convex_min, solve_linear_spectral_max,
    solve_linear_spectral_min, sum_k_largest, ObjectiveSpec, SolveOptions, VectorField,
};
use crate::spectral::{
    ftvn_gap, lambda_tilde, normal_cone_orbit_contains, orbit_linear_max, Orbit, PhiKind, QRep,
    SpectralFunction, SpectralSet,
};
use std::sync::Arc;

/// Names of the implemented checks, in canonical report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Ftvn,
    Isometry,
    Frames,
    StrongCriteria,
    Theorem2,
    Theorem3Max,
    Theorem3Min,
    CorollaryLinear,
    Theorem1Diag,
    Example1,
    Fan,
    Kyfan,
    Cp,
    ProjectionOracle,
}

impl CheckName {
    pub const ALL: [CheckName; 14] = [
        CheckName::Ftvn,
        CheckName::Isometry,
        CheckName::Frames,
        CheckName::StrongCriteria,
        CheckName::Theorem2,
        CheckName::Theorem3Max,
        CheckName::Theorem3Min,
        CheckName::CorollaryLinear,
        CheckName::Theorem1Diag,
        CheckName::Example1,
        CheckName::Fan,
        CheckName::Kyfan,
        CheckName::Cp,
        CheckName::ProjectionOracle,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CheckName::Ftvn => "ftvn",
            CheckName::Isometry => "isometry",
            CheckName::Frames => "frames",
            CheckName::StrongCriteria => "strong_criteria",
            CheckName::Theorem2 => "theorem2",
            CheckName::Theorem3Max => "theorem3_max",
            CheckName::Theorem3Min => "theorem3_min",
            CheckName::CorollaryLinear => "corollary_linear",
            CheckName::Theorem1Diag => "theorem1_diag",
            CheckName::Example1 => "example1",
            CheckName::Fan => "fan",
            CheckName::Kyfan => "kyfan",
            CheckName::Cp => "cp",
            CheckName::ProjectionOracle => "projection_oracle",
        }
    }

    pub fn parse(s: &str) -> Result<CheckName> {
        CheckName::ALL
            .iter()
            .find(|c| c.label() == s)
            .copied()
            .ok_or_else(|| EjaError::BadConfig(format!("unknown check name: {s}")))
    }

    /// Some checks are exact regressions or are tied to specific algebra
    /// kinds; they ignore or filter the configured algebra list.
    fn applies_to(&self, alg: &AlgebraSpec) -> bool {
        match self {
            CheckName::Fan => matches!(alg, AlgebraSpec::Sym { .. } | AlgebraSpec::Herm { .. }),
            _ => true,
        }
    }

    fn fixed_algebra(&self) -> Option<AlgebraSpec> {
        match self {
            CheckName::Example1 => Some(AlgebraSpec::RealVec { n: 2 }),
            _ => None,
        }
    }

    fn fixed_trials(&self) -> Option<usize> {
        match self {
            CheckName::Example1 => Some(1),
            _ => None,
        }
    }
}

pub fn default_algebras() -> Vec<AlgebraSpec> {
    vec![
        AlgebraSpec::RealVec { n: 4 },
        AlgebraSpec::Sym { n: 3 },
        AlgebraSpec::Herm { n: 3 },
        AlgebraSpec::Spin { d: 4 },
        AlgebraSpec::Product {
            factors: vec![AlgebraSpec::RealVec { n: 2 }, AlgebraSpec::Sym { n: 2 }],
        },
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub algebras: Vec<AlgebraSpec>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<CheckName>,
    pub out_path: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            algebras: default_algebras(),
            trials: 100,
            seed: 42,
            tol: 1e-8,
            checks: CheckName::ALL.to_vec(),
            out_path: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(EjaError::BadConfig("trials must be ≥ 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(EjaError::BadConfig("tol must be positive".into()));
        }
        if self.checks.is_empty() {
            return Err(EjaError::BadConfig("checks must be non-empty".into()));
        }
        for a in &self.algebras {
            a.validate()?;
        }
        Ok(())
    }
}

/// A failing trial, recorded with everything needed to replay it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub check: CheckName,
    pub algebra: AlgebraSpec,
    pub trial: u64,
    pub gap: f64,
    pub detail: String,
    pub elements: Vec<Element>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: CheckName,
    pub trials: usize,
    pub failures: usize,
    /// Trials whose producing solver did not converge: counted separately so
    /// numerics are never mistaken for theorem violations.
    pub inconclusive: usize,
    /// Largest violation observed (signed; negative means comfortable margin).
    pub worst_gap: f64,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub version: String,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
    pub checks: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn total_failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }

    /// One row per check, for quick spreadsheet triage.
    pub fn csv_summary(&self) -> String {
        let mut out = String::from("check,trials,failures,inconclusive,worst_gap\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{:.6e}\n",
                c.name.label(),
                c.trials,
                c.failures,
                c.inconclusive,
                c.worst_gap
            ));
        }
        out
    }
}

/// Outcome of a single trial. `gap` is the check's violation measure:
/// values beyond the check's threshold are failures.
#[derive(Debug, Clone)]
pub enum TrialOutcome {
    Pass { gap: f64 },
    Fail { gap: f64, detail: String, elements: Vec<Element> },
    Inconclusive { detail: String },
}

/// Run the configured checks; deterministic for a fixed seed, and never
/// aborts on individual trial failures. Set `timed` to false for
/// byte-identical reports across runs.
pub fn run_check_suite(config: &SuiteConfig, timed: bool) -> Result<CheckReport> {
    config.validate()?;
    let start = Instant::now();
    let mut checks = Vec::new();
    for check in &config.checks {
        checks.push(run_check(*check, config)?);
    }
    Ok(CheckReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        trials: config.trials,
        tol: config.tol,
        wall_time_secs: timed.then(|| start.elapsed().as_secs_f64()),
        checks,
    })
}

fn run_check(check: CheckName, config: &SuiteConfig) -> Result<CheckRecord> {
    let algebras = match check.fixed_algebra() {
        Some(a) => vec![a],
        None => config
            .algebras
            .iter()
            .filter(|a| check.applies_to(a))
            .cloned()
            .collect(),
    };
    let trials = check.fixed_trials().unwrap_or(config.trials);
    let mut record = CheckRecord {
        name: check,
        trials: 0,
        failures: 0,
        inconclusive: 0,
        worst_gap: f64::NEG_INFINITY,
        witnesses: Vec::new(),
    };
    for alg in &algebras {
        for trial in 0..trials as u64 {
            record.trials += 1;
            match run_trial(check, alg, config.seed, trial, config.tol)? {
                TrialOutcome::Pass { gap } => record.worst_gap = record.worst_gap.max(gap),
                TrialOutcome::Fail { gap, detail, elements } => {
                    record.worst_gap = record.worst_gap.max(gap);
                    record.failures += 1;
                    record.witnesses.push(Witness {
                        check,
                        algebra: alg.clone(),
                        trial,
                        gap,
                        detail,
                        elements,
                    });
                }
                TrialOutcome::Inconclusive { .. } => record.inconclusive += 1,
            }
        }
    }
    if !record.worst_gap.is_finite() {
        record.worst_gap = 0.0;
    }
    Ok(record)
}

/// Re-run a recorded witness through the same check; returns true when the
/// failure reproduces.
pub fn replay_witness(w: &Witness, seed: u64, tol: f64) -> Result<bool> {
    Ok(matches!(
        run_trial(w.check, &w.algebra, seed, w.trial, tol)?,
        TrialOutcome::Fail { .. }
    ))
}

/// Each trial derives its randomness from (seed, check name + algebra, trial
/// index), so trials are independent and order-insensitive.
pub fn run_trial(
    check: CheckName,
    alg_spec: &AlgebraSpec,
    seed: u64,
    trial: u64,
    tol: f64,
) -> Result<TrialOutcome> {
    let label = format!("{}:{}", check.label(), serde_json::to_string(alg_spec)?);
    let mut rng = rng_for(seed, &label, trial);
    let alg = Algebra::new(alg_spec.clone())?;
    match check {
        CheckName::Ftvn => {
            let x = random_element(&alg, &mut rng);
            let y = random_element(&alg, &mut rng);
            let scale = (x.norm() * y.norm()).max(1.0);
            // ⟨x,y⟩ ≤ ⟨λ(x),λ(y)⟩ up to roundoff.
            let violation = -ftvn_gap(&x, &y)?;
            fail_if(violation > tol * scale, violation, "ftvn inequality violated", vec![x, y])
        }
        CheckName::Isometry => {
            let x = random_element(&alg, &mut rng);
            let scale = x.norm().max(1.0);
            let lam = x.eigenvalues()?;
            let lnorm = lam.iter().map(|l| l * l).sum::<f64>().sqrt();
            let violation = (lnorm - x.norm()).abs();
            fail_if(violation > 1e-10 * scale, violation, "eigenvalue map not isometric", vec![x])
        }
        CheckName::Frames => {
            let x = random_element(&alg, &mut rng);
            let scale = x.norm().max(1.0);
            let dec = x.spectral_decomposition()?;
            let axioms = dec.frame.max_violation()?;
            let roundtrip = dec.frame.recompose(&dec.lambda)?.sub(&x)?.norm();
            let violation = axioms.max(roundtrip / scale.max(1e-300));
            fail_if(
                axioms > 1e-9 || roundtrip > 1e-9 * scale,
                violation,
                "frame axioms or recomposition roundtrip violated",
                vec![x],
            )
        }
        CheckName::StrongCriteria => {
            if trial % 2 == 0 {
                // Constructed strongly commuting pair: all three gaps vanish.
                let frame = random_frame(&alg, &mut rng)?;
                let a = sorted_element(&frame, &mut rng)?;
                let b = sorted_element(&frame, &mut rng)?;
                let rep = strong_commute(&a, &b, tol)?;
                let violation = (rep.inner_gap.max(rep.additivity_gap)) / rep.scale;
                fail_if(
                    !rep.strong || rep.additivity_gap > 1e-7 * rep.scale,
                    violation,
                    "constructed shared-frame pair not reported strong",
                    vec![a, b],
                )
            } else {
                // Random pair: the inner-gap and additivity-gap criteria agree.
                let a = random_element(&alg, &mut rng);
                let b = random_element(&alg, &mut rng);
                let rep = strong_commute(&a, &b, tol)?;
                let disagree = rep.inner_gap > 1e-4 * rep.scale && rep.additivity_gap <= 1e-6 * rep.scale;
                fail_if(
                    disagree,
                    rep.inner_gap / rep.scale,
                    "inner-gap and additivity-gap verdicts disagree",
                    vec![a, b],
                )
            }
        }
        CheckName::Theorem2 => {
            let (a, d) = if trial % 2 == 0 {
                // Shared decreasing frame ⇒ d ∈ N_{[a]}... always accepted.
                let frame = random_frame(&alg, &mut rng)?;
                (sorted_element(&frame, &mut rng)?, sorted_element(&frame, &mut rng)?)
            } else {
                (random_element(&alg, &mut rng), random_element(&alg, &mut rng))
            };
            let member = normal_cone_orbit_contains(&a, &d, tol)?;
            // Independent oracle: sup⟨d,x⟩ over [a] from the exact reduction.
            let (sup, _) = orbit_linear_max(&d, &Orbit::of(&a)?)?;
            let scale = (a.norm() * d.norm()).max(1.0);
            let slack = sup - d.inner(&a)?;
            let oracle_member = slack <= 10.0 * tol * scale;
            let fail = member != oracle_member || (trial % 2 == 0 && !member);
            fail_if(fail, slack / scale, "normal-cone verdict disagrees with reduction oracle", vec![a, d])
        }
        CheckName::Theorem3Max => {
            // Concave quadratic over a random orbit: the found maximizer's
            // gradient must operator commute with it.
            let center = random_element(&alg, &mut rng);
            let h = ObjectiveSpec::Quadratic { center, weight: -1.0 };
            let orbit = Orbit::of(&random_element(&alg, &mut rng))?;
            let opts = SolveOptions { restarts: 2, seed: seed ^ trial, ..SolveOptions::default() };
            let report = maximize_over_orbit(&h, &orbit, &opts)?;
            if !report.converged {
                return Ok(TrialOutcome::Inconclusive { detail: format!("orbit search residual {:.3e}", report.residual) });
            }
            let c = &report.commutation;
            let violation = c.operator_commutator_norm / c.scale;
            fail_if(
                violation > 1e-6,
                violation,
                "local maximizer does not operator commute with its gradient",
                vec![report.optimizer],
            )
        }
        CheckName::Theorem3Min => {
            let center = random_element(&alg, &mut rng);
            let h = ObjectiveSpec::Quadratic { center, weight: 1.0 };
            let q_rep = if trial % 2 == 0 {
                QRep::Simplex { level: 1.0 }
            } else {
                QRep::Box { lo: -1.0, up: 1.0 }
            };
            let e = SpectralSet::new(alg_spec.clone(), q_rep)?;
            let report = solve_convex_min(&h, &e, &SolveOptions::default())?;
            if !report.converged {
                return Ok(TrialOutcome::Inconclusive { detail: format!("residual {:.3e}", report.residual) });
            }
            let c = &report.commutation;
            let violation = c.inner_gap / c.scale;
            fail_if(
                violation > 1e-6,
                violation,
                "convex minimizer does not strongly commute with −h′(a)",
                vec![report.optimizer],
            )
        }
        CheckName::CorollaryLinear => {
            let n = alg.rank();
            let lambdas: Vec<Vec<f64>> = (0..3)
                .map(|_| {
                    let mut v: Vec<f64> = (0..n).map(|_| crate::algebra::random::gauss(&mut rng)).collect();
                    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
                    v
                })
                .collect();
            let e = SpectralSet::new(alg_spec.clone(), QRep::FiniteOrbits { lambdas })?;
            let c = random_element(&alg, &mut rng);
            let phi = match trial % 3 {
                0 => SpectralFunction::zero(alg_spec.clone())?,
                1 => SpectralFunction::builtin(alg_spec.clone(), PhiKind::Sum)?,
                _ => SpectralFunction::builtin(alg_spec.clone(), PhiKind::SumSquares)?,
            };
            let scale = c.norm().max(1.0);
            let max = solve_linear_spectral_max(&c, &e, &phi)?;
            let a = &max.optimizer;
            let closed = crate::algebra::dot(&c.eigenvalues()?, &a.eigenvalues()?) + phi.eval(a)?;
            let min = solve_linear_spectral_min(&c, &e, &phi)?;
            let b = &min.optimizer;
            let closed_min = crate::algebra::dot(&lambda_tilde(&c)?, &b.eigenvalues()?) + phi.eval(b)?;
            let v1 = (max.value - closed).abs() / scale.max(closed.abs());
            let v2 = (min.value - closed_min).abs() / scale.max(closed_min.abs());
            let v3 = max.commutation.inner_gap / max.commutation.scale;
            let v4 = min.commutation.inner_gap / min.commutation.scale;
            let violation = v1.max(v2).max(v3).max(v4);
            fail_if(
                v1 > 1e-8 || v2 > 1e-8 || v3 > 1e-6 || v4 > 1e-6,
                violation,
                "reduction value or strong commutation off",
                vec![c],
            )
        }
        CheckName::Theorem1Diag => {
            // Nonconvex smooth objective h(x) = ⟨c₁,x⟩·⟨c₂,x⟩; the found
            // local maximizer must operator commute with h′(a) — strong may
            // fail, which is expected (see the Example-1 witness check).
            let c1 = random_element(&alg, &mut rng);
            let c2 = random_element(&alg, &mut rng);
            let h = {
                let (v1, v2) = (c1.clone(), c2.clone());
                let (g1, g2) = (c1.clone(), c2.clone());
                ObjectiveSpec::Callback {
                    value: Arc::new(move |x: &Element| v1.inner(x).unwrap() * v2.inner(x).unwrap()),
                    gradient: Some(Arc::new(move |x: &Element| {
                        let (p1, p2) = (g1.inner(x).unwrap(), g2.inner(x).unwrap());
                        g1.scale(p2).add(&g2.scale(p1)).unwrap()
                    })),
                    convex: false,
                }
            };
            let orbit = Orbit::of(&random_element(&alg, &mut rng))?;
            let opts = SolveOptions { restarts: 2, seed: seed ^ (trial << 1), ..SolveOptions::default() };
            let report = maximize_over_orbit(&h, &orbit, &opts)?;
            if !report.converged {
                return Ok(TrialOutcome::Inconclusive { detail: format!("orbit search residual {:.3e}", report.residual) });
            }
            let c = &report.commutation;
            let violation = c.operator_commutator_norm / c.scale;
            fail_if(
                violation > 1e-6,
                violation,
                "local maximizer does not operator commute with h′(a)",
                vec![report.optimizer],
            )
        }
        CheckName::Example1 => example1_trial(),
        CheckName::Fan => {
            let c = random_element(&alg, &mut rng);
            let a = random_element(&alg, &mut rng);
            let bound = fan_trace_max(&c, &a)?;
            let orbit = Orbit::of(&a)?;
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..100 {
                let x = orbit.sample(&mut rng)?;
                worst = worst.max(c.inner(&x)? - bound);
            }
            let scale = (c.norm() * a.norm()).max(1.0);
            fail_if(worst > 1e-6 * scale, worst / scale, "sampled rotation exceeds the Fan bound", vec![c, a])
        }
        CheckName::Kyfan => {
            let c = random_element(&alg, &mut rng);
            let n = alg.rank();
            let k = 1 + (trial as usize % n);
            let value = sum_k_largest(&c, k)?;
            // Sampled rank-k idempotents never beat the closed form.
            let mut rep = vec![0.0; n];
            for r in rep.iter_mut().take(k) {
                *r = 1.0;
            }
            let orbit = Orbit::new(alg_spec.clone(), rep)?;
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..100 {
                let x = orbit.sample(&mut rng)?;
                worst = worst.max(c.inner(&x)? - value);
            }
            let scale = c.norm().max(1.0);
            fail_if(worst > 1e-6 * scale, worst / scale, "rank-k idempotent beats the k-sum", vec![c])
        }
        CheckName::Cp => {
            // Affine monotone field f(x) = αx + β⟨u,x⟩u + m with α,β > 0.
            let alpha = 0.5 + rng.gen::<f64>();
            let beta = rng.gen::<f64>();
            let u = {
                let x = random_element(&alg, &mut rng);
                x.scale(1.0 / x.norm().max(1e-12))
            };
            let m = random_element(&alg, &mut rng);
            let f = {
                let (u, m) = (u.clone(), m.clone());
                VectorField::new(
                    move |x: &Element| {
                        x.scale(alpha)
                            .add(&u.scale(beta * u.inner(x).unwrap()))
                            .unwrap()
                            .sub(&m)
                            .unwrap()
                    },
                    true,
                    Some(alpha + beta),
                )
            };
            let k = SpectralSet::new(alg_spec.clone(), QRep::NonnegCone)?;
            let (report, cert) = solve_cone_cp(&f, &k, &SolveOptions::default())?;
            if !report.converged {
                return Ok(TrialOutcome::Inconclusive { detail: format!("residual {:.3e}", report.residual) });
            }
            let scale = report.optimizer.norm().max(1.0);
            let violation = (report.commutation.inner_gap / report.commutation.scale)
                .max(cert.eig_complementarity / scale)
                .max(cert.inner_ab / scale)
                .max(cert.a_cone_violation / scale)
                .max(cert.b_cone_violation / scale);
            fail_if(violation > 1e-6, violation, "complementarity conditions violated", vec![report.optimizer, m])
        }
        CheckName::ProjectionOracle => {
            let n = alg.rank();
            let lambdas: Vec<Vec<f64>> = (0..3)
                .map(|_| {
                    let mut v: Vec<f64> = (0..n).map(|_| crate::algebra::random::gauss(&mut rng)).collect();
                    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
                    v
                })
                .collect();
            let e = SpectralSet::new(alg_spec.clone(), QRep::FiniteOrbits { lambdas })?;
            let u = random_element(&alg, &mut rng);
            let p = e.project(&u)?;
            let d_star = p.sub(&u)?.norm();
            let mut best = f64::INFINITY;
            for _ in 0..2_000 {
                let x = e.sample(&mut rng)?;
                best = best.min(x.sub(&u)?.norm());
            }
            let violation = d_star - best;
            fail_if(violation > 1e-6, violation, "a sampled point is closer than the projection", vec![u])
        }
    }
}

fn fail_if(cond: bool, gap: f64, detail: &str, elements: Vec<Element>) -> Result<TrialOutcome> {
    Ok(if cond {
        TrialOutcome::Fail {
            gap,
            detail: detail.to_string(),
            elements,
        }
    } else {
        TrialOutcome::Pass { gap }
    })
}

fn sorted_element(
    frame: &crate::algebra::OrderedJordanFrame,
    rng: &mut impl rand::Rng,
) -> Result<Element> {
    let mut q: Vec<f64> = (0..frame.idempotents().len())
        .map(|_| crate::algebra::random::gauss(rng))
        .collect();
    q.sort_by(|a, b| b.partial_cmp(a).unwrap());
    frame.recompose(&q)
}

/// Exact regression of the two-point maximization with
/// h(x,y) = x²/2 − x + x(y² + y): values, gradients, and the
/// operator-but-not-strong commutation verdict at the maximizer.
fn example1_trial() -> Result<TrialOutcome> {
    let alg = Algebra::new(AlgebraSpec::RealVec { n: 2 })?;
    let h = |x: f64, y: f64| 0.5 * x * x - x + x * (y * y + y);
    let grad = |x: f64, y: f64| (x - 1.0 + y * y + y, x * (2.0 * y + 1.0));
    let mut worst: f64 = 0.0;
    let mut ok = true;
    // h(1,0) = −1/2, h(0,1) = 0.
    worst = worst.max((h(1.0, 0.0) + 0.5).abs());
    worst = worst.max(h(0.0, 1.0).abs());
    // h′(1,0) = (0,1), h′(0,1) = (1,0).
    let (gx, gy) = grad(1.0, 0.0);
    worst = worst.max(gx.abs()).max((gy - 1.0).abs());
    let (gx, gy) = grad(0.0, 1.0);
    worst = worst.max((gx - 1.0).abs()).max(gy.abs());
    // The maximizer over {(1,0),(0,1)} is (0,1); its gradient (1,0)
    // operator commutes but does not strongly commute.
    let a = alg.element(vec![0.0, 1.0])?;
    let g = alg.element(vec![1.0, 0.0])?;
    let rep = strong_commute(&a, &g, 1e-12)?;
    ok &= h(0.0, 1.0) > h(1.0, 0.0);
    ok &= rep.operator && !rep.strong;
    ok &= (rep.inner_gap - 1.0).abs() < 1e-12;
    fail_if(
        !ok || worst > 1e-12,
        worst,
        "worked-example regression mismatch",
        vec![a, g],
    )
}
