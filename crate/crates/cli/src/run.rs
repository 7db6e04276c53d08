//! Orchestration: build the curvature data once, then walk the requested
//! verification sections in a fixed order, emitting one machine line per
//! finding. Key order never depends on the metric, so identical inputs
//! render byte-identical reports.

use ricci::classify::{
    classify_hierarchy, decompose_type_n, find_parallel_null, segre_classify, verify_parallel,
    ChainVerdict, SegreError, TypeNError,
};
use ricci::concomitants::{
    check_constancy, dominant_property_sample, identity_suite, quadratic_vanishing_suite,
    scalar_invariants, superenergy2, superenergy_ricci, ConcomitantError, ConstancyOutcome,
    Requirement, SuperenergyTensor,
};
use ricci::curvature::{CurvaturePack, RiemannOperator};
use ricci::geometry::SlotKind;
use ricci::{Chart, MetricField, Rat, TensorField};

use crate::report::{fmt_index, fmt_rats, yes_no, Report};

/// Which verification sections a subcommand runs.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Classify,
    Identities,
    Invariants,
    Superenergy,
    Segre,
    Full,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Classify => "classify",
            Subcommand::Identities => "identities",
            Subcommand::Invariants => "invariants",
            Subcommand::Superenergy => "superenergy",
            Subcommand::Segre => "segre",
            Subcommand::Full => "full",
        }
    }

    fn runs(self, section: Subcommand) -> bool {
        self == section || matches!(self, Subcommand::Full)
    }
}

/// A fully resolved task: the metric plus every knob the sections read.
pub struct Task {
    pub metric: MetricField,
    pub kmax: u32,
    pub probe: Vec<Rat>,
    pub seed: u64,
    pub samples: u32,
}

/// An error that aborts the run: bad evaluation point or an unsupported
/// pointwise classification. Distinct from a verification failure.
pub struct RunError(pub String);

impl From<ConcomitantError> for RunError {
    fn from(e: ConcomitantError) -> Self {
        RunError(e.to_string())
    }
}

pub fn run(sub: Subcommand, task: &Task) -> Result<Report, RunError> {
    let mut r = Report::new(sub.name());
    let chart = task.metric.chart();
    let names: Vec<&str> = (0..chart.dim()).map(|i| chart.coord_name(i)).collect();
    r.push("chart", names.join(","));
    r.push("dim", chart.dim().to_string());
    r.push("kmax", task.kmax.to_string());
    r.push("probe", fmt_rats(&task.probe));
    r.push("seed", task.seed.to_string());
    r.push("samples", task.samples.to_string());

    let pack = CurvaturePack::new(&task.metric);
    let parallel_null = find_parallel_null(&pack);

    if sub.runs(Subcommand::Classify) {
        section_classify(&mut r, &pack, task, parallel_null.as_ref());
    }
    if sub.runs(Subcommand::Identities) {
        section_identities(&mut r, &pack);
    }
    if sub.runs(Subcommand::Invariants) {
        section_invariants(&mut r, &pack)?;
    }
    if sub.runs(Subcommand::Superenergy) {
        section_superenergy(&mut r, &pack, task, parallel_null.as_ref())?;
    }
    if sub.runs(Subcommand::Segre) {
        section_segre(&mut r, &pack, task, parallel_null.as_ref())?;
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Sections.

fn push_chain(r: &mut Report, prefix: &str, c: &ChainVerdict, chart: &Chart) {
    r.push(&format!("{prefix}.vanishes"), yes_no(c.vanishes));
    let degree = match c.symmetry_degree {
        Some(d) => d.to_string(),
        None => "none".to_string(),
    };
    r.push(&format!("{prefix}.symmetry_degree"), degree);
    r.push(&format!("{prefix}.semi_symmetric"), yes_no(c.semi_symmetric));
    let rec = match &c.recurrence {
        Some(a) => components(a, chart),
        None => "none".to_string(),
    };
    r.push(&format!("{prefix}.recurrence"), rec);
}

fn components(t: &TensorField, chart: &Chart) -> String {
    (0..chart.dim())
        .map(|i| t.get(&[i]).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn rint(n: i64) -> Rat {
    Rat::new(n.into(), 1.into())
}

/// Render a covector with constant components as a differential-form story
/// (`-du + dv`); anything else falls back to the component tuple.
fn covector_story(t: &TensorField, chart: &Chart) -> String {
    let mut terms = String::new();
    for i in 0..chart.dim() {
        let e = t.get(&[i]);
        if e.is_zero() {
            continue;
        }
        let Some(c) = e.as_constant() else {
            return format!("({})", components(t, chart));
        };
        let name = chart.coord_name(i);
        let negative = c < rint(0);
        let mag = if negative { -c.clone() } else { c.clone() };
        let coef = if mag == rint(1) {
            String::new()
        } else {
            format!("{mag} ")
        };
        let sign = match (terms.is_empty(), negative) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        terms.push_str(&format!("{sign}{coef}d{name}"));
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms
    }
}

fn section_classify(
    r: &mut Report,
    pack: &CurvaturePack,
    task: &Task,
    parallel_null: Option<&TensorField>,
) {
    let chart = pack.chart();
    let v = classify_hierarchy(pack, task.kmax);

    r.push("classify.constant_curvature", yes_no(v.constant_curvature));
    let kval = match &v.curvature_constant {
        Some(k) => k.to_string(),
        None => "none".to_string(),
    };
    r.push("classify.curvature_constant", kval);
    r.push("classify.flat", yes_no(v.flat()));
    r.push("classify.locally_symmetric", yes_no(v.locally_symmetric()));
    r.push("classify.two_symmetric", yes_no(v.two_symmetric()));
    r.push("classify.semi_symmetric", yes_no(v.semi_symmetric()));
    r.push("classify.recurrent", yes_no(v.riemann.recurrent()));
    push_chain(r, "classify.riemann", &v.riemann, chart);
    push_chain(r, "classify.ricci", &v.ricci, chart);
    match &v.weyl {
        Some(c) => push_chain(r, "classify.weyl", c, chart),
        None => r.push("classify.weyl", "refused_below_dimension_3"),
    }

    let op = RiemannOperator::new(pack);
    r.push(
        "classify.operator.generically_nonsingular",
        yes_no(op.generically_nonsingular()),
    );

    match parallel_null {
        Some(k) => {
            let rep = verify_parallel(pack, k);
            r.push("classify.parallel_null", components(k, chart));
            r.push("classify.parallel_null.verified", yes_no(rep.parallel));
            r.push(
                "classify.parallel_null.obstruction_vanishes",
                yes_no(rep.obstruction_vanishes == Some(true)),
            );
        }
        None => r.push("classify.parallel_null", "none"),
    }

    let preconditions = pack.ricci().is_zero() && pack.nabla2_riemann().is_zero();
    match parallel_null {
        None => r.push("classify.type_n", "no_candidate"),
        Some(k) => match decompose_type_n(pack, k) {
            Ok(d) => {
                r.push("classify.type_n", "decomposed");
                r.push("classify.type_n.b", if d.b.is_zero() { "zero" } else { "nonzero" });
            }
            Err(TypeNError::RicciNotZero) => {
                r.push("classify.type_n", "not_applicable:ricci_nonzero")
            }
            Err(TypeNError::NotTwoSymmetric) => {
                r.push("classify.type_n", "not_applicable:not_two_symmetric")
            }
            Err(e) => {
                let reason = match e {
                    TypeNError::CandidateNotNull => "candidate_not_null",
                    TypeNError::NoTransverseDirection => "no_transverse_direction",
                    TypeNError::ResidualNonzero => "residual_nonzero",
                    _ => unreachable!(),
                };
                if preconditions {
                    r.fail("classify.type_n", format!("failed:{reason}"));
                } else {
                    r.push("classify.type_n", format!("not_applicable:{reason}"));
                }
            }
        },
    }

    r.human(format!(
        "constant curvature: {}; locally symmetric: {}; 2-symmetric: {}; semi-symmetric: {}",
        yes_no(v.constant_curvature),
        yes_no(v.locally_symmetric()),
        yes_no(v.two_symmetric()),
        yes_no(v.semi_symmetric()),
    ));
    match parallel_null {
        Some(k) => r.human(format!(
            "parallel null field: k = {} (verified)",
            covector_story(k, chart)
        )),
        None => r.human("parallel null field: none found among coordinate candidates"),
    }
}

fn section_identities(r: &mut Report, pack: &CurvaturePack) {
    let ids = identity_suite(pack);
    r.push("identities.semi_symmetric", yes_no(ids.semi_symmetric));
    r.push("identities.two_symmetric", yes_no(ids.two_symmetric));
    let mut violated = 0usize;
    for e in &ids.entries {
        let tag = match (e.requires, e.expected) {
            (Requirement::Always, _) => "required",
            (_, true) => "required",
            (_, false) => "optional",
        };
        let key = format!("identity.{}", e.name);
        match &e.witness {
            None => r.push(&key, format!("{tag}:holds")),
            Some(w) => {
                violated += 1;
                let value = format!("{tag}:violated@{}", fmt_index(w));
                if e.expected {
                    r.fail(&key, value);
                } else {
                    r.push(&key, value);
                }
            }
        }
    }
    let required = ids.entries.iter().filter(|e| e.expected).count();
    r.human(format!(
        "{required} of {} identities required under the detected symmetry; all required ones hold, {violated} optional ones violated",
        ids.entries.len()
    ));
}

fn section_invariants(r: &mut Report, pack: &CurvaturePack) -> Result<(), RunError> {
    let invs = scalar_invariants(pack, 2).map_err(RunError::from)?;
    let mut all_zero = true;
    for c in &invs {
        all_zero &= c.is_zero();
        let value = match c.value.as_scalar().as_constant() {
            Some(v) => v.to_string(),
            None => "nonconstant".to_string(),
        };
        r.push(
            &format!("invariant.{}", c.name),
            format!("degree:{} order:{} rank:{} value:{value}", c.degree, c.order, c.rank()),
        );
    }

    match check_constancy(pack) {
        Ok(rep) => {
            r.push("constancy", "checked");
            for (name, outcome) in &rep.entries {
                let v = match outcome {
                    ConstancyOutcome::Constant => "constant",
                    ConstancyOutcome::CoveredByParallelNull => "covered_by_parallel_null",
                };
                r.push(&format!("constancy.{name}"), v);
            }
            let pn = match &rep.parallel_null {
                Some(k) => components(k, pack.chart()),
                None => "none".to_string(),
            };
            r.push("constancy.parallel_null", pn);
        }
        Err(ConcomitantError::NotTwoSymmetric) => r.push("constancy", "not_applicable"),
        Err(ConcomitantError::ConstancyGapUncovered { invariant }) => {
            r.fail("constancy", format!("gap@{invariant}"));
        }
        Err(e) => return Err(RunError::from(e)),
    }

    let quad = quadratic_vanishing_suite(pack);
    let required = pack.nabla2_riemann().is_zero();
    let tag = if required { "required" } else { "optional" };
    for e in &quad.entries {
        let key = format!("quadratic.{}", e.name);
        match &e.witness {
            None => r.push(&key, format!("{tag}:zero")),
            Some(w) => {
                let value = format!("{tag}:nonzero@{}", fmt_index(w));
                if required {
                    r.fail(&key, value);
                } else {
                    r.push(&key, value);
                }
            }
        }
    }

    r.human(format!(
        "{} scalar invariants computed{}; quadratic first-order list {}",
        invs.len(),
        if all_zero { ", all identically zero" } else { "" },
        if quad.all_vanish() { "vanishes" } else { "has nonzero entries" },
    ));
    Ok(())
}

fn section_superenergy(
    r: &mut Report,
    pack: &CurvaturePack,
    task: &Task,
    parallel_null: Option<&TensorField>,
) -> Result<(), RunError> {
    let se = superenergy_ricci(pack);
    r.push("superenergy.source_vanishes", yes_no(se.source_vanishes));
    r.push("superenergy.zero", yes_no(se.components.is_zero()));
    r.push("superenergy.pair_symmetric", "yes");

    let rep = dominant_property_sample(
        &se.components,
        pack.metric(),
        &task.probe,
        task.samples,
        task.seed,
    )
    .map_err(RunError::from)?;
    r.push("superenergy.dominance.samples", rep.samples.to_string());
    r.push("superenergy.dominance.min", rep.min_value.to_string());
    match &rep.negative_witness {
        None => r.push("superenergy.dominance", "pass"),
        Some(vs) => {
            let w = vs
                .iter()
                .map(|v| format!("({})", fmt_rats(v)))
                .collect::<Vec<_>>()
                .join(";");
            r.fail("superenergy.dominance", format!("fail@{w}"));
        }
    }

    let se2 = superenergy2(pack);
    r.push("superenergy2.zero", yes_no(se2.components.is_zero()));
    push_null_form(r, pack, &se2, parallel_null);

    r.human(format!(
        "superenergy {}; dominance over {} causal samples: min {}{}",
        if se.components.is_zero() { "vanishes identically" } else { "is nonzero" },
        rep.samples,
        rep.min_value,
        if rep.negative_witness.is_some() { " (NEGATIVE)" } else { "" },
    ));
    Ok(())
}

/// On a Ricci-flat doubly symmetric space with a parallel null k, the second
/// order superenergy must equal 4 (B.B) k^(x6) for the transverse profile B.
fn push_null_form(
    r: &mut Report,
    pack: &CurvaturePack,
    se2: &SuperenergyTensor,
    parallel_null: Option<&TensorField>,
) {
    if !pack.ricci().is_zero() {
        r.push("superenergy2.null_form", "not_applicable:ricci_nonzero");
        return;
    }
    if !pack.nabla2_riemann().is_zero() {
        r.push("superenergy2.null_form", "not_applicable:not_two_symmetric");
        return;
    }
    let Some(k) = parallel_null else {
        r.push("superenergy2.null_form", "not_applicable:no_null_candidate");
        return;
    };
    let d = match decompose_type_n(pack, k) {
        Ok(d) => d,
        Err(e) => {
            r.fail("superenergy2.null_form", format!("failed:{e}"));
            return;
        }
    };
    let g = pack.metric();
    let chart = pack.chart();
    let n = chart.dim();
    let b_up = g.raise_slot(&g.raise_slot(&d.b, 0), 1);
    let mut bb = chart.zero();
    for i in 0..n {
        for j in 0..n {
            bb = bb.add(&d.b.get(&[i, j]).mul(b_up.get(&[i, j])));
        }
    }
    let factor = bb.scale_int(4);
    let expected = TensorField::from_fn(chart, &[SlotKind::Covariant; 6], |idx| {
        let mut p = factor.clone();
        for &i in idx {
            p = p.mul(d.k.get(&[i]));
        }
        p
    });
    match se2.components.sub(&expected).first_nonzero() {
        None => r.push("superenergy2.null_form", "match"),
        Some((idx, _)) => {
            r.fail("superenergy2.null_form", format!("mismatch@{}", fmt_index(&idx)));
        }
    }
}

fn section_segre(
    r: &mut Report,
    pack: &CurvaturePack,
    task: &Task,
    parallel_null: Option<&TensorField>,
) -> Result<(), RunError> {
    let g = pack.metric();
    r.push("segre.point", fmt_rats(&task.probe));
    let mut stories = Vec::new();

    let mut one = |r: &mut Report, key: &str, label: &str, h: &TensorField| -> Result<(), RunError> {
        let s = segre_classify(h, g, &task.probe)
            .map_err(|e: SegreError| RunError(format!("segre of {label}: {e}")))?;
        r.push(&format!("segre.{key}"), s.symbol.clone());
        let eig = s
            .eigenvalues
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(";");
        r.push(&format!("segre.{key}.eigenvalues"), eig);
        stories.push(format!("{label} {}", s.symbol));
        Ok(())
    };

    one(r, "metric", "metric", g.lower_metric())?;
    one(r, "ricci", "ricci", pack.ricci())?;
    match parallel_null {
        Some(k) => one(r, "null_square", "null square", &k.outer(k))?,
        None => r.push("segre.null_square", "no_candidate"),
    }

    r.human(format!("segre types at the probe: {}", stories.join("; ")));
    Ok(())
}
