use std::fmt::Display;

use super::config::{ModelKind, SuiteKind, ValidatedConfig};
use super::report::Case;
use crate::embedding::{
    check_perfectness, cocone_check, demo_sl3_central_extension, point_factorization, EmbeddedSubspace,
    RootEmbedding,
};
use crate::gk::{
    basepoint_symmetry_is_involution_map, check_reflection_coordinates, check_rs4_criterion,
    check_transvection_action, CartanSl,
};
use crate::hyperbolic::{
    factor_sl2_spd_squares, lemma_matrices, lemma_sweep, verify_commutator_identity, verify_matrix_lemma,
    verify_so2_residuals, verify_square_roots,
};
use crate::numeric::{int, ratio, Rational, Real, Residual, SquareMatrix};
use crate::par;
use crate::reflection::{
    check_axioms, check_conjugation_formula, check_stabilizer_centralizer, word_act, AxiomReport,
    BrokenSpdModel, CheckOutcome, RealLine, ReflectionWord, SpaceModel, SpdModel, SpdPoint, TransvectionWord,
};
use crate::sampling::{random_bounded_sl, sample_rng};

const EXACT: &str = "exact";
const NO_VIOLATIONS: &str = "0 violations";
/// Conjugating words drawn per model; each is checked on a share of the heavy budget.
const CONJUGATION_WORDS: usize = 10;
const MAX_CONJUGATOR_LENGTH: usize = 6;
/// Each reflection letter roughly squares the entry size of the point, so the
/// floating conjugation check runs at this multiple of the configured precision.
const CONJUGATION_PRECISION_FACTOR: usize = 4;
/// Restricted generators tested against the central word.
const CENTRAL_GENERATORS: usize = 50;
/// Points each pair of translations is compared on.
const TRANSLATION_POINTS: usize = 3;
/// Positive parameters for the square-root consistency case.
const SQUARE_ROOT_PARAMETERS: i64 = 20;

pub(super) fn run(kind: SuiteKind, cfg: &ValidatedConfig) -> Vec<Case> {
    match kind {
        SuiteKind::Axioms => axioms(cfg),
        SuiteKind::MatrixLemma => matrix_lemma(cfg),
        SuiteKind::Commutator => commutator(cfg),
        SuiteKind::So2Residuals => so2_residuals(cfg),
        SuiteKind::CentralExtension => central_extension(cfg),
        SuiteKind::Perfectness => perfectness(cfg),
        SuiteKind::Factorization => factorization(cfg),
        SuiteKind::Cocone => cocone(cfg),
        SuiteKind::All => SuiteKind::All.members().into_iter().flat_map(|k| run(k, cfg)).collect(),
    }
}

fn tol(cfg: &ValidatedConfig) -> &str {
    &cfg.raw.abs_tol
}

fn t_name(t: &Rational) -> String {
    format!("t={t}")
}

fn check_case(name: String, outcome: &CheckOutcome, tolerance: &str) -> Case {
    Case::new(name)
        .param("samples", outcome.samples)
        .outcome(outcome.passed, &outcome.residual, tolerance)
}

/// Turns a fallible runner into a case, recording the error as the witness.
fn guarded<E: Display>(name: String, f: impl FnOnce(Case) -> Result<Case, E>) -> Case {
    f(Case::new(name.clone())).unwrap_or_else(|e| Case::new(name).failed(e))
}

// ---------------------------------------------------------------- axioms

fn axioms(cfg: &ValidatedConfig) -> Vec<Case> {
    let mut models = match cfg.model {
        ModelKind::A2Diagram => vec![ModelKind::Sl3],
        m => vec![m],
    };
    if cfg.suite == SuiteKind::All {
        for m in [ModelKind::Geodesic, ModelKind::Sl2, ModelKind::Sl3] {
            if !models.contains(&m) {
                models.push(m);
            }
        }
    }
    let mut cases: Vec<Case> = par::map_slice(&models, |m| match m {
        ModelKind::Geodesic => geodesic_axioms(cfg),
        ModelKind::Sl2 => spd_axioms(cfg, 2),
        ModelKind::Sl3 => spd_axioms(cfg, 3),
        ModelKind::BrokenSl2 => vec![broken_battery(cfg)],
        ModelKind::A2Diagram => unreachable!("mapped to sl3"),
    })
    .into_iter()
    .flatten()
    .collect();
    if cfg.suite == SuiteKind::All {
        cases.push(negative_control(cfg));
    }
    cases
}

fn battery_case(name: String, report: &AxiomReport, exact: bool, tolerance: &str) -> Case {
    let residual = report
        .rs1
        .max_residual
        .clone()
        .max(report.rs2.max_residual.clone())
        .max(report.rs3.max_residual.clone());
    let exact_ok = !exact || residual.is_exact_zero();
    let case = Case::new(name)
        .param("samples", report.samples)
        .param("rs1_residual", report.rs1.max_residual.to_report_string())
        .param("rs2_residual", report.rs2.max_residual.to_report_string())
        .param("rs3_residual", report.rs3.max_residual.to_report_string())
        .param("rs4_checked_pairs", report.rs4.checked_pairs)
        .param("rs4_violations", report.rs4.violations)
        .outcome(report.passed() && exact_ok, &residual, tolerance);
    if report.passed() && exact_ok {
        case
    } else {
        case.witness(axiom_failures(report))
    }
}

fn axiom_failures(report: &AxiomReport) -> String {
    let mut failed = Vec::new();
    for (name, r) in [("RS1", &report.rs1), ("RS2", &report.rs2), ("RS3", &report.rs3)] {
        if !r.passed() {
            failed.push(format!(
                "{name}: {} of {} samples, max residual {}",
                r.violations,
                report.samples,
                r.max_residual.to_report_string()
            ));
        }
    }
    if !report.rs4.passed() {
        failed.push(format!("RS4: {} sampled pairs with x.y = y", report.rs4.violations));
    }
    if failed.is_empty() {
        failed.push("residual not exactly zero".to_string());
    }
    failed.join("; ")
}

fn conjugation_case<M: SpaceModel>(
    model: &M,
    name: String,
    cfg: &ValidatedConfig,
    exact: bool,
    max_len: usize,
) -> Case {
    let per_word = (cfg.heavy_samples() / CONJUGATION_WORDS).max(1);
    let outcomes = par::map_indexed(CONJUGATION_WORDS, |i| {
        let mut rng = sample_rng(cfg.seed(), "conjugation-word", i as u64);
        let len = 1 + i % max_len;
        let alpha = ReflectionWord::new((0..len).map(|_| model.sample_point(&mut rng)).collect());
        let y = model.sample_point(&mut rng);
        check_conjugation_formula(model, &alpha, &y, cfg.seed() ^ i as u64, per_word, &cfg.policy)
    });
    guarded(name, |case| {
        let mut residual = Residual::exact_zero(cfg.policy.precision_bits());
        let mut passed = true;
        for o in outcomes {
            let o = o?;
            passed &= o.passed;
            residual = residual.max(o.residual);
        }
        passed &= !exact || residual.is_exact_zero();
        let tolerance = if exact { EXACT } else { tol(cfg) };
        Ok::<_, crate::reflection::ReflectionError>(
            case.param("words", CONJUGATION_WORDS)
                .param("max_word_length", max_len)
                .param("samples_per_word", per_word)
                .outcome(passed, &residual, tolerance),
        )
    })
}

/// Floating conjugation check at an elevated working precision.
fn real_conjugation_case(cfg: &ValidatedConfig, n: usize) -> Case {
    let bits = cfg.policy.precision_bits() * CONJUGATION_PRECISION_FACTOR;
    let name = format!("axioms/sl{n}/conjugation-real");
    let mut elevated = cfg.clone();
    elevated.policy = match crate::numeric::TolerancePolicy::new(&cfg.raw.abs_tol, bits) {
        Ok(p) => p,
        Err(e) => return Case::new(name).failed(e),
    };
    conjugation_case(&SpdModel::real(n, bits), name, &elevated, false, MAX_CONJUGATOR_LENGTH).param("precision_bits", bits)
}

fn geodesic_axioms(cfg: &ValidatedConfig) -> Vec<Case> {
    let p = &cfg.policy;
    let report = check_axioms(&RealLine, cfg.seed(), cfg.samples(), p);
    vec![
        battery_case("axioms/geodesic/battery".into(), &report, true, EXACT),
        conjugation_case(&RealLine, "axioms/geodesic/conjugation".into(), cfg, true, MAX_CONJUGATOR_LENGTH),
        translations_case(cfg),
    ]
}

/// `tr_x ∘ tr_y = tr_{x+y}` on the line, exactly.
fn translations_case(cfg: &ValidatedConfig) -> Case {
    let p = &cfg.policy;
    let o = RealLine.basepoint();
    let residuals = par::map_indexed(cfg.samples(), |i| {
        let mut rng = sample_rng(cfg.seed(), "translations", i as u64);
        let x = RealLine.sample_point(&mut rng);
        let y = RealLine.sample_point(&mut rng);
        let lhs = TransvectionWord::elementary(x.clone(), o.clone())
            .then(&TransvectionWord::elementary(y.clone(), o.clone()));
        let rhs = TransvectionWord::elementary(x + y, o.clone());
        (0..TRANSLATION_POINTS)
            .map(|_| {
                let z = RealLine.sample_point(&mut rng);
                let a = word_act(&RealLine, lhs.reflections(), &z).expect("line points");
                let b = word_act(&RealLine, rhs.reflections(), &z).expect("line points");
                RealLine.distance(&a, &b, p)
            })
            .fold(Residual::exact_zero(p.precision_bits()), Residual::max)
    });
    let residual = residuals
        .into_iter()
        .fold(Residual::exact_zero(p.precision_bits()), Residual::max);
    Case::new("axioms/geodesic/translations")
        .param("pairs", cfg.samples())
        .param("points_per_pair", TRANSLATION_POINTS)
        .outcome(residual.is_exact_zero(), &residual, EXACT)
}

fn spd_axioms(cfg: &ValidatedConfig, n: usize) -> Vec<Case> {
    let p = &cfg.policy;
    let bits = p.precision_bits();
    let seed = cfg.seed();
    let heavy = cfg.heavy_samples();
    let prefix = format!("axioms/sl{n}");
    let real = SpdModel::real(n, bits);
    let group = CartanSl::new(n, Real::one(bits));

    let mut cases = vec![
        battery_case(format!("{prefix}/battery"), &check_axioms(&real, seed, cfg.samples(), p), false, tol(cfg)),
        battery_case(
            format!("{prefix}/exact-subsample"),
            &check_axioms(&SpdModel::exact(n), seed, heavy, p),
            true,
            EXACT,
        ),
        conjugation_case(&SpdModel::exact(n), format!("{prefix}/conjugation"), cfg, true, MAX_CONJUGATOR_LENGTH),
        real_conjugation_case(cfg, n),
        check_case(
            format!("{prefix}/reflection-coordinates"),
            &check_reflection_coordinates(&group, seed, cfg.samples(), p),
            tol(cfg),
        ),
        check_case(
            format!("{prefix}/basepoint-symmetry"),
            &basepoint_symmetry_is_involution_map(&group, seed, heavy, p),
            tol(cfg),
        ),
        check_case(
            format!("{prefix}/transvection-action"),
            &check_transvection_action(&group, seed, heavy, p),
            tol(cfg),
        ),
        stabilizer_case(cfg, n),
    ];

    let rs4 = check_rs4_criterion(&group, seed, cfg.samples(), p);
    let mut case = Case::new(format!("{prefix}/rs4-criterion"))
        .param("samples", rs4.samples)
        .param("twists_in_k", rs4.twists_in_k)
        .param("analytic_certificate", rs4.analytic_certificate);
    case = count_outcome(case, rs4.passed(), rs4.violations);
    if !rs4.passed() {
        case = case.witness(format!("{} non-identity twists landed in K", rs4.violations));
    }
    cases.push(case);

    if n == 3 {
        cases.push(guarded(format!("{prefix}/functoriality"), |case| {
            let phi = RootEmbedding::simple(3, 0).morphism(&int(1), seed, p)?;
            let out = phi.check_compatibility(seed, cfg.samples(), p);
            Ok::<_, crate::gk::GkError>(
                case.param("samples", out.samples)
                    .param("embedding", "upper-left SL2 in SL3")
                    .outcome(out.passed && out.residual.is_exact_zero(), &out.residual, EXACT),
            )
        }));
    }
    cases
}

fn count_outcome(case: Case, passed: bool, violations: usize) -> Case {
    let mut case = case.outcome(passed, &Residual::exact_zero(0), NO_VIOLATIONS);
    case.residual = violations.to_string();
    case
}

/// A rotation word must fix `o` and commute with `σ_o`; a shear word must do neither.
fn stabilizer_case(cfg: &ValidatedConfig, n: usize) -> Case {
    let p = &cfg.policy;
    let bits = p.precision_bits();
    guarded(format!("axioms/sl{n}/stabilizer"), |case| {
        let model = SpdModel::real(n, bits);
        let o = model.basepoint();
        let rotation = SquareMatrix::from_ratios(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]]);
        let factors = factor_sl2_spd_squares(&rotation, p)?;
        let word = |mats: Vec<SquareMatrix<Real>>| {
            mats.into_iter().fold(TransvectionWord::identity(), |acc, m| {
                acc.then(&TransvectionWord::elementary(SpdPoint::new_unchecked(m), o.clone()))
            })
        };
        let embed = |m: &SquareMatrix<Real>| SquareMatrix::embed_block(m, n, 0, 1);
        let rot_word = word(factors.spd_factors.iter().map(|f| embed(&f.to_real(bits))).collect());
        let shear = SquareMatrix::from_ints(&[&[2, 1], &[1, 1]]).to_real(bits);
        let shear_word = word(vec![embed(&shear)]);

        let rot = check_stabilizer_centralizer(&model, &rot_word, cfg.seed(), cfg.heavy_samples(), p)?;
        let sh = check_stabilizer_centralizer(&model, &shear_word, cfg.seed(), cfg.heavy_samples(), p)?;
        let passed = rot.fixes_basepoint && rot.centralizes && !sh.fixes_basepoint && !sh.centralizes;
        let residual = rot.basepoint_residual.clone().max(rot.centralizer_residual.clone());
        let mut case = case
            .param("rotation_word_length", rot_word.len())
            .param("shear_basepoint_residual", sh.basepoint_residual.to_report_string())
            .param("shear_centralizer_residual", sh.centralizer_residual.to_report_string())
            .outcome(passed, &residual, tol(cfg));
        if !passed {
            case = case.witness(format!(
                "rotation fixes o: {}, centralizes: {}; shear fixes o: {}, centralizes: {}",
                rot.fixes_basepoint, rot.centralizes, sh.fixes_basepoint, sh.centralizes
            ));
        }
        Ok::<_, Box<dyn std::error::Error>>(case)
    })
}

fn broken_report(cfg: &ValidatedConfig) -> AxiomReport {
    let model = BrokenSpdModel::new(2, Real::one(cfg.policy.precision_bits()));
    check_axioms(&model, cfg.seed(), cfg.heavy_samples(), &cfg.policy)
}

fn broken_battery(cfg: &ValidatedConfig) -> Case {
    battery_case("axioms/broken-sl2/battery".into(), &broken_report(cfg), false, tol(cfg))
}

/// Passes when the battery catches the broken model through RS2.
fn negative_control(cfg: &ValidatedConfig) -> Case {
    let report = broken_report(cfg);
    let caught = !report.rs2.passed();
    let case = Case::new("axioms/broken-sl2/negative-control")
        .param("samples", report.samples)
        .param("rs2_violations", report.rs2.violations)
        .param("expectation", "RS2 fails");
    let mut case = case.outcome(caught, &report.rs2.max_residual, &format!("> {}", tol(cfg)));
    if !caught {
        case = case.witness("broken model passed RS2");
    }
    case
}

// ---------------------------------------------------------------- matrix lemma

fn matrix_lemma(cfg: &ValidatedConfig) -> Vec<Case> {
    let bits = cfg.policy.precision_bits();
    let mut cases = Vec::new();
    for t in &cfg.t_values {
        let name = format!("matrix-lemma/{}", t_name(t));
        cases.push(guarded(name.clone(), |case| {
            let r = verify_matrix_lemma(t, bits)?;
            let mut case = case
                .param("t", t)
                .param("symmetric_unimodular", r.symmetric_unimodular)
                .outcome(r.identities_hold(), &r.max_residual(), EXACT);
            if !r.identities_hold() {
                case = case.witness(format!(
                    "ABC-U {}, CBA-L {}, CAC-A(t/2) {}, C^-1BC^-1-B(t/2) {}",
                    r.upper, r.lower, r.conjugate_a, r.conjugate_b
                ));
            }
            Ok::<_, crate::hyperbolic::HyperbolicError>(case)
        }));
        cases.push(guarded(format!("{name}/positivity"), |case| {
            let m = lemma_matrices(t)?;
            let (a, b) = (m.a_positive_definite(), m.b_positive_definite());
            let mut case = count_outcome(
                case.param("t", t).param("a_positive_definite", a).param("b_positive_definite", b),
                a && b,
                usize::from(!a) + usize::from(!b),
            );
            if !(a && b) {
                let mut w = Vec::new();
                if !a {
                    w.push(format!("A(t) = {} is not positive definite", m.a));
                }
                if !b {
                    w.push(format!("B(t) = {} is not positive definite", m.b));
                }
                case = case.witness(w.join("; "));
            }
            Ok::<_, crate::hyperbolic::HyperbolicError>(case)
        }));
    }

    let sweep = lemma_sweep();
    cases.push(guarded("matrix-lemma/sweep".into(), |case| {
        let reports = par::map_slice(&sweep, |t| verify_matrix_lemma(t, bits).map(|r| (t.clone(), r)))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        let failing: Vec<String> = reports
            .iter()
            .filter(|(_, r)| !r.identities_hold())
            .map(|(t, _)| t.to_string())
            .collect();
        let residual = reports
            .iter()
            .fold(Residual::exact_zero(bits), |acc, (_, r)| acc.max(r.max_residual()));
        let mut case = case
            .param("values", sweep.len())
            .param("range", "k/8 and 8/k for 1 <= k <= 64")
            .outcome(failing.is_empty(), &residual, EXACT);
        if !failing.is_empty() {
            case = case.witness(format!("identities fail at t = {}", failing.join(", ")));
        }
        Ok::<_, crate::hyperbolic::HyperbolicError>(case)
    }));

    let mut roots: Vec<Rational> = (1..=SQUARE_ROOT_PARAMETERS).map(|k| ratio(k, 4)).collect();
    roots.extend(cfg.t_values.iter().filter(|t| **t > int(0)).cloned());
    roots.sort();
    roots.dedup();
    cases.push(guarded("matrix-lemma/square-roots".into(), |case| {
        let residual = par::map_slice(&roots, |t| verify_square_roots(t, &cfg.policy))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(Residual::exact_zero(bits), Residual::max);
        Ok::<_, crate::hyperbolic::HyperbolicError>(
            case.param("values", roots.len())
                .param("precision_bits", bits)
                .outcome(residual.within(&cfg.policy), &residual, tol(cfg)),
        )
    }));
    cases
}

// ---------------------------------------------------------------- hyperbolic plane

fn positive_only(name: String, t: &Rational, run: impl FnOnce(Case) -> Case) -> Case {
    if *t > int(0) {
        run(Case::new(name))
    } else {
        Case::new(name).param("t", t).skipped("square roots require t > 0")
    }
}

fn commutator(cfg: &ValidatedConfig) -> Vec<Case> {
    par::map_slice(&cfg.t_values, |t| {
        let name = format!("commutator/{}", t_name(t));
        positive_only(name.clone(), t, |_| {
            guarded(name, |case| {
                let r = verify_commutator_identity(t, cfg.seed(), cfg.heavy_samples(), &cfg.policy)?;
                let passed = r.passed();
                let mut case = case
                    .param("t", t)
                    .param("samples", r.bracket.samples)
                    .param("bracket", r.bracket.residual.to_report_string())
                    .param("reduced", r.reduced.residual.to_report_string())
                    .param("mirrored", r.mirrored.residual.to_report_string())
                    .param("half_shear", r.half_shear.residual.to_report_string())
                    .param("sigma_conjugate", r.sigma_conjugate.residual.to_report_string())
                    .param("exact_bracket_matrix", r.exact_bracket_matrix.to_report_string())
                    .outcome(passed, &r.max_residual(), tol(cfg));
                if !passed {
                    case = case.witness(format!("bracket residual {}", r.bracket.residual));
                }
                Ok::<_, crate::hyperbolic::HyperbolicError>(case)
            })
        })
    })
}

fn so2_residuals(cfg: &ValidatedConfig) -> Vec<Case> {
    let bits = cfg.policy.precision_bits();
    par::map_slice(&cfg.t_values, |t| {
        let name = format!("so2-residuals/{}", t_name(t));
        positive_only(name.clone(), t, |_| {
            guarded(name, |case| {
                let r = verify_so2_residuals(t, &cfg.policy)?;
                let defect = |c: &crate::numeric::OrthogonalityCheck| {
                    Residual::Approx(c.orthogonality_defect.clone().max(c.determinant_defect.clone()))
                };
                let residual = defect(&r.first).max(defect(&r.second)).max(r.certificate_residual.clone());
                let passed = r.passed(&cfg.policy);
                let mut case = case
                    .param("t", t)
                    .param("first_orthogonality_defect", r.first.orthogonality_defect.to_sci_string(20))
                    .param("second_orthogonality_defect", r.second.orthogonality_defect.to_sci_string(20))
                    .param("certificate_exact", r.certificate_exact)
                    .param("certificate_residual", r.certificate_residual.to_report_string())
                    .param("precision_bits", bits)
                    .outcome(passed, &residual, tol(cfg));
                if !passed {
                    case = case.witness(format!(
                        "orthogonality defects {} and {}",
                        r.first.orthogonality_defect.to_sci_string(20),
                        r.second.orthogonality_defect.to_sci_string(20)
                    ));
                }
                Ok::<_, crate::hyperbolic::HyperbolicError>(case)
            })
        })
    })
}

// ---------------------------------------------------------------- embeddings

fn central_extension(cfg: &ValidatedConfig) -> Vec<Case> {
    let p = &cfg.policy;
    let count = cfg.samples().min(CENTRAL_GENERATORS);
    let demo = match demo_sl3_central_extension(cfg.seed(), count, p) {
        Ok(d) => d,
        Err(e) => return vec![Case::new("central-extension/sl3").failed(e)],
    };
    let witness = if demo.action_residual.within(p) {
        "diag(-1, -1, 1)".to_string()
    } else {
        demo.action_matrix.to_string()
    };
    let action = Case::new("central-extension/sl3/action-matrix")
        .param("word", "(x+(1) x-(-1) x+(1))^2")
        .param("word_length", demo.word_length)
        .outcome(demo.action_residual.within(p), &demo.action_residual, tol(cfg))
        .witness(witness.clone());
    let trivial_residual = demo.kernel.triviality_residual.clone().max(demo.embedded_point_residual.clone());
    let trivial = Case::new("central-extension/sl3/trivial-on-subspace")
        .param("samples", count)
        .outcome(demo.trivial_on_subspace(p), &trivial_residual, tol(cfg))
        .witness(witness.clone());
    let displacement = Residual::Approx(demo.displacement_error.clone());
    let nontrivial = Case::new("central-extension/sl3/nontrivial-on-ambient")
        .param("witness_point", "tau(I + E13) = [[2, 0, 1], [0, 1, 0], [1, 0, 1]]")
        .param("displacement", demo.displacement.to_sci_string(20))
        .param("expected_displacement", "sqrt(8)")
        .param("max_sampled_displacement", demo.max_sampled_displacement.to_sci_string(20))
        .outcome(demo.nontrivial_on_ambient(p), &displacement, tol(cfg))
        .witness(witness.clone());
    let central_residual = demo
        .kernel
        .centrality_residual
        .clone()
        .unwrap_or_else(|| demo.kernel.triviality_residual.clone());
    let central = Case::new("central-extension/sl3/central")
        .param("generators", demo.kernel.generators)
        .outcome(demo.central(), &central_residual, tol(cfg))
        .witness(witness);
    vec![action, trivial, nontrivial, central]
}

fn perfectness(cfg: &ValidatedConfig) -> Vec<Case> {
    let p = &cfg.policy;
    let one = Real::one(p.precision_bits());
    let positive: Vec<Rational> = cfg.t_values.iter().filter(|t| **t > int(0)).cloned().collect();
    let mut cases: Vec<Case> = cfg
        .t_values
        .iter()
        .filter(|t| **t <= int(0))
        .flat_map(|t| {
            ["sl2", "sl3"].map(|m| {
                Case::new(format!("perfectness/{m}/{}", t_name(t)))
                    .param("t", t)
                    .skipped("square roots require t > 0")
            })
        })
        .collect();
    for (label, n) in [("sl2", 2), ("sl3", 3)] {
        let run = || -> Result<Vec<Case>, crate::embedding::EmbeddingError> {
            let sub = EmbeddedSubspace::new(RootEmbedding::simple(n, 0), &one, cfg.seed(), p)?;
            let report = check_perfectness(&sub, &positive, cfg.seed(), cfg.heavy_samples(), p)?;
            let mut out: Vec<Case> = report
                .cases
                .iter()
                .map(|c| {
                    Case::new(format!("perfectness/{label}/{}", t_name(&c.t)))
                        .param("t", &c.t)
                        .param("samples", c.bracket.samples)
                        .param("bracket", c.bracket.residual.to_report_string())
                        .param("mirrored", c.mirrored.residual.to_report_string())
                        .param("block_action", c.block_action.residual.to_report_string())
                        .param("sigma_closure", c.sigma_closure.residual.to_report_string())
                        .outcome(c.passed(), &c.max_residual(), tol(cfg))
                })
                .collect();
            if let Some(g) = &report.root_generation {
                out.push(check_case(format!("perfectness/{label}/root-generation"), g, tol(cfg)));
            }
            Ok(out)
        };
        match run() {
            Ok(c) => cases.extend(c),
            Err(e) => cases.push(Case::new(format!("perfectness/{label}")).failed(e)),
        }
    }
    cases
}

fn factorization(cfg: &ValidatedConfig) -> Vec<Case> {
    let p = &cfg.policy;
    let bits = p.precision_bits();
    let mut cases = Vec::new();
    for n in [2, 3] {
        let name = format!("factorization/sl{n}/random");
        let count = cfg.heavy_samples();
        cases.push(guarded(name, |case| {
            let results = par::map_indexed(count, |i| {
                let g = random_bounded_sl(n, &mut sample_rng(cfg.seed(), "factorization", i as u64));
                point_factorization(&g, p).map(|f| (f.residual, f.factors.len()))
            })
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
            let longest = results.iter().map(|r| r.1).max().unwrap_or(0);
            let residual = results.into_iter().fold(Residual::exact_zero(bits), |acc, r| acc.max(r.0));
            Ok::<_, crate::embedding::EmbeddingError>(
                case.param("samples", count)
                    .param("max_factors", longest)
                    .outcome(residual.within(p), &residual, tol(cfg)),
            )
        }));
    }
    let fixed: [(&str, SquareMatrix<Rational>); 4] = [
        ("sl2/rotation", SquareMatrix::from_ratios(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]])),
        ("sl2/minus-identity", SquareMatrix::from_ints(&[&[-1, 0], &[0, -1]])),
        ("sl2/quarter-turn", SquareMatrix::from_ints(&[&[0, -1], &[1, 0]])),
        ("sl3/cyclic", SquareMatrix::from_ints(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])),
    ];
    for (label, g) in fixed {
        cases.push(guarded(format!("factorization/{label}"), |case| {
            let f = point_factorization(&g, p)?;
            Ok::<_, crate::embedding::EmbeddingError>(
                case.param("matrix", &g)
                    .param("factors", f.factors.len())
                    .param("expression", &f.expression)
                    .param("sign", f.sign)
                    .outcome(f.residual.within(p), &f.residual, tol(cfg)),
            )
        }));
    }
    cases
}

fn cocone(cfg: &ValidatedConfig) -> Vec<Case> {
    let p = &cfg.policy;
    let prefix = format!("cocone/{}", cfg.diagram.name);
    let count = cfg.heavy_samples();
    let mut cases = vec![Case::new(format!("{prefix}/continuity"))
        .skipped("topological conditions on the colimit are not checked; only the algebraic cocone")];
    match cocone_check(&cfg.diagram, cfg.seed(), count, p) {
        Ok(r) => {
            let preserved = Case::new(format!("{prefix}/basepoints"));
            let mut preserved = count_outcome(preserved, r.basepoints_preserved, usize::from(!r.basepoints_preserved));
            if !r.basepoints_preserved {
                preserved = preserved.witness("an inclusion moves the basepoint");
            }
            let exact = |name: &str, o: &CheckOutcome| {
                Case::new(format!("{prefix}/{name}"))
                    .param("samples", o.samples)
                    .outcome(o.passed && o.residual.is_exact_zero(), &o.residual, EXACT)
            };
            cases.push(preserved);
            cases.push(exact("commutes", &r.commutes));
            cases.push(exact("morphisms", &r.morphisms));
            cases.push(check_case(format!("{prefix}/generation"), &r.generation, tol(cfg)));
        }
        Err(e) => cases.push(Case::new(prefix).failed(e)),
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::super::config::SuiteConfig;
    use super::super::report::Status;
    use super::*;

    fn config(suite: &str, model: &str, samples: usize) -> ValidatedConfig {
        SuiteConfig {
            suite: suite.into(),
            model: model.into(),
            samples,
            ..SuiteConfig::default()
        }
        .validate()
        .unwrap()
    }

    #[test]
    fn geodesic_cases_are_exact() {
        let cases = axioms(&config("axioms", "geodesic", 50));
        assert_eq!(cases.len(), 3);
        for c in cases {
            assert_eq!(c.status, Status::Pass, "{c:?}");
            assert_eq!(c.residual, "exact-zero");
        }
    }

    #[test]
    fn broken_model_fails_with_witness() {
        let cases = axioms(&config("axioms", "broken-sl2", 20));
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].status, Status::Fail);
        assert!(cases[0].witness.as_deref().unwrap().contains("RS2"));
    }

    #[test]
    fn matrix_lemma_at_one() {
        let cfg = SuiteConfig {
            suite: "matrix-lemma".into(),
            t_values: vec!["1".into()],
            ..SuiteConfig::default()
        }
        .validate()
        .unwrap();
        let cases = matrix_lemma(&cfg);
        let main = cases.iter().find(|c| c.name == "matrix-lemma/t=1").unwrap();
        assert_eq!(main.status, Status::Pass);
        assert_eq!(main.residual, "exact-zero");
        assert!(cases.iter().all(|c| c.status == Status::Pass), "{cases:?}");
    }

    #[test]
    fn negative_parameter_reports_positivity_failure() {
        let cfg = SuiteConfig {
            suite: "matrix-lemma".into(),
            t_values: vec!["-1".into()],
            ..SuiteConfig::default()
        }
        .validate()
        .unwrap();
        let cases = matrix_lemma(&cfg);
        let identities = cases.iter().find(|c| c.name == "matrix-lemma/t=-1").unwrap();
        assert_eq!(identities.status, Status::Pass);
        let positivity = cases.iter().find(|c| c.name == "matrix-lemma/t=-1/positivity").unwrap();
        assert_eq!(positivity.status, Status::Fail);
        assert!(positivity.witness.as_deref().unwrap().contains("A(t)"));
    }
}
