//! Per-class checks over one scenario, and their aggregation.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twistor_cm_core::exactalg::{format_rational, FieldElement, Poly, Rational};
use twistor_cm_core::hodge::{cm_criteria, is_cm, CmHodgeStructure};
use twistor_cm_core::periodvalue::{coefficient_cosets, PeriodSymbol, PeriodValueCoset};
use twistor_cm_core::twistor::{
    classify_class, equator_analysis, extend_by_polarization, fibre_report, fibre_structure, geometric_picard, picard_number_at,
    point_for_class, survey_classes, to_rationals, Location, Normalization, PolarizedClass, TwistorSetup,
};

use crate::scenario::{Check, ScenarioError, ScenarioSpec};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub workers: usize,
    pub seed: u64,
    pub precision_cap: u32,
    /// Overrides the scenario's height bound.
    pub height: Option<u32>,
    /// Overrides the scenario's checks.
    pub checks: Option<std::collections::BTreeSet<Check>>,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            workers: 1,
            seed: 0,
            precision_cap: twistor_cm_core::hodge::DEFAULT_PRECISION_CAP,
            height: None,
            checks: None,
            timings: false,
        }
    }
}

fn q(x: &Rational) -> String {
    format_rational(x)
}

fn poly_coeffs(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(q).collect()
}

fn elem_coords(e: &FieldElement) -> Vec<String> {
    e.coords().iter().map(q).collect()
}

fn coset_pairs(u: &PeriodValueCoset) -> Vec<(String, i64)> {
    u.exponents().map(|(s, e)| (s.name.clone(), e)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmRecord {
    /// Solver field is CM of degree `r`.
    pub solver_cm: bool,
    pub solver_degree: usize,
    pub solver_real_degree: usize,
    /// Real subfield of the solver field equals `K^0`.
    pub k0_equal: bool,
    /// Solver field equals the field of `X^2 + gamma X + delta`.
    pub two_routes_agree: bool,
    /// The field of `X^2 + gamma X + delta` equals the period field.
    pub closed_form_is_period_field: bool,
    /// `gamma^2 - 4 delta` is totally negative.
    pub closed_form_cm: bool,
    /// Criteria (i), (ii), (iii).
    pub criteria: [bool; 3],
    pub criteria_agree: bool,
    pub conjugate_symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquatorRecord {
    pub period_field_degree: usize,
    pub imaginary_span_dim: usize,
    pub minimal_substructure_dim: usize,
    pub cm_verdict: bool,
    pub criteria: [bool; 3],
    pub criteria_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodRecord {
    pub normalization: String,
    pub a: Vec<(String, i64)>,
    pub b: Vec<(String, i64)>,
    pub c: Vec<(String, i64)>,
    /// `r_sigma'`.
    pub fibre_value: Vec<(String, i64)>,
    pub ratio_relation: bool,
    pub norm_relation: bool,
    /// With `sigma` algebraic every coset is trivial.
    pub algebraic_collapse: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibreReportRecord {
    pub class: Vec<String>,
    pub location: String,
    pub m: String,
    pub norm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_z: Option<usize>,
    /// `rho_z + rho(S) - 1` with `rho(S) = 22 - r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_geometric: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_minpoly: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_discriminant: Option<String>,
    /// In the basis `1, eta, eta^2, ...` of `K^0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cm: Option<CmRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equator: Option<EquatorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<Vec<PeriodRecord>>,
    #[serde(default)]
    pub alarms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl FibreReportRecord {
    fn new(cls: &PolarizedClass) -> Self {
        FibreReportRecord {
            class: cls.vector.iter().map(q).collect(),
            location: cls.location.as_str().into(),
            m: q(&cls.m),
            norm: q(&cls.norm),
            rho_z: None,
            rho_geometric: None,
            field_minpoly: None,
            field_discriminant: None,
            gamma: None,
            delta: None,
            cm: None,
            equator: None,
            period: None,
            alarms: Vec::new(),
            error: None,
            timing_ms: None,
        }
    }

    fn failure(&mut self, e: twistor_cm_core::Error) {
        if e.is_alarm() {
            self.alarms.push(e.to_string());
        } else {
            self.error = Some(e.to_string());
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub classes: usize,
    pub skipped_non_positive: usize,
    pub poles: usize,
    pub equator: usize,
    pub generic: usize,
    pub cm_pass: usize,
    pub cm_fail: usize,
    pub equator_pass: usize,
    pub equator_fail: usize,
    pub picard_violations: usize,
    pub period_fail: usize,
    pub errors: usize,
    pub alarms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureInfo {
    pub field: Vec<String>,
    /// Minimal polynomial of `alpha`, which presents `K`.
    pub alpha_minpoly: Vec<String>,
    pub xi: Vec<String>,
    pub real_minpoly: Vec<String>,
    pub rank: usize,
    pub d: String,
    pub gram: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub scenario: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureInfo>,
    pub records: Vec<FibreReportRecord>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl SurveyReport {
    pub fn exit_code(&self) -> i32 {
        if self.summary.alarms > 0 {
            1
        } else {
            0
        }
    }
}

fn structure_info(h: &CmHodgeStructure, setup: &TwistorSetup) -> StructureInfo {
    let g = h.gram();
    StructureInfo {
        field: poly_coeffs(h.input_field().modulus()),
        alpha_minpoly: poly_coeffs(h.field().modulus().expect("absolute field")),
        xi: elem_coords(h.xi()),
        real_minpoly: poly_coeffs(h.real().field.modulus().expect("absolute field")),
        rank: h.rank(),
        d: q(setup.d()),
        gram: (0..g.rows()).map(|i| g.row(i).iter().map(q).collect()).collect(),
    }
}

fn cm_check(setup: &TwistorSetup, cls: &PolarizedClass, rec: &mut FibreReportRecord) {
    match fibre_report(setup, cls) {
        Ok(v) => {
            let cf = &v.cm_field;
            let f = cf.absolute_minpoly();
            rec.field_minpoly = Some(poly_coeffs(f));
            rec.field_discriminant = Some(q(&f.discriminant()));
            rec.gamma = Some(elem_coords(&cf.gamma));
            rec.delta = Some(elem_coords(&cf.delta));
            let c = &v.cm_verdict;
            let r = CmRecord {
                solver_cm: v.solver_cm,
                solver_degree: v.solver.degree,
                solver_real_degree: v.solver.real_subfield_degree,
                k0_equal: v.real_subfield_equal,
                two_routes_agree: v.two_routes_agree,
                closed_form_is_period_field: v.closed_form_is_period_field,
                closed_form_cm: true,
                criteria: [c.endomorphism_cm, c.period_cm, c.fields_equal],
                criteria_agree: c.criteria_agree(),
                conjugate_symmetric: v.conjugate_symmetric,
            };
            let mut alarm = |ok: bool, msg: &str| {
                if !ok {
                    rec.alarms.push(msg.into());
                }
            };
            alarm(r.solver_cm, "generic fibre: endomorphism field is not CM of degree r");
            alarm(r.k0_equal, "generic fibre: real subfield differs from K^0");
            alarm(r.two_routes_agree, "generic fibre: closed-form field differs from the solver field");
            alarm(r.criteria_agree, "generic fibre: the three CM criteria disagree");
            alarm(r.conjugate_symmetric, "generic fibre: conjugate point gives a different field");
            rec.cm = Some(r);
        }
        Err(e) => {
            let alarm = e.is_alarm();
            rec.failure(e);
            if alarm {
                criteria_fallback(setup, cls, rec);
            }
        }
    }
}

/// Criteria straight from the fibre structure, for fibres whose closed form
/// raised an alarm.
fn criteria_fallback(setup: &TwistorSetup, cls: &PolarizedClass, rec: &mut FibreReportRecord) {
    let Ok(f) = fibre_structure(setup, cls) else { return };
    let Ok(c) = cm_criteria(&f.space, &f.sigma_coords, &f.point.extension.conj) else { return };
    let e = &c.endomorphisms;
    rec.cm = Some(CmRecord {
        solver_cm: c.endomorphism_cm,
        solver_degree: e.degree,
        solver_real_degree: e.real_subfield_degree,
        k0_equal: false,
        two_routes_agree: false,
        closed_form_is_period_field: false,
        closed_form_cm: false,
        criteria: [c.endomorphism_cm, c.period_cm, c.fields_equal],
        criteria_agree: c.criteria_agree(),
        conjugate_symmetric: false,
    });
}

fn equator_check(setup: &TwistorSetup, cls: &PolarizedClass, rec: &mut FibreReportRecord) {
    let r = setup.rank();
    match equator_analysis(setup, cls) {
        Ok(e) => {
            let c = &e.verdict;
            let er = EquatorRecord {
                period_field_degree: e.period_field_degree,
                imaginary_span_dim: e.imaginary_span_dim,
                minimal_substructure_dim: e.minimal_substructure_dim,
                cm_verdict: e.cm_verdict,
                criteria: [c.endomorphism_cm, c.period_cm, c.fields_equal],
                criteria_agree: c.criteria_agree(),
            };
            if r > 2 {
                if er.cm_verdict {
                    rec.alarms.push("equator fibre with r > 2 is CM".into());
                }
                if er.period_field_degree <= 2 {
                    rec.alarms.push("equator fibre: period field of degree <= 2".into());
                }
                if er.imaginary_span_dim != r / 2 {
                    rec.alarms.push("equator fibre: imaginary span is not r/2-dimensional".into());
                }
            } else if !er.cm_verdict {
                rec.alarms.push("equator fibre with r = 2 is not CM".into());
            }
            if !er.criteria_agree {
                rec.alarms.push("equator fibre: the three CM criteria disagree".into());
            }
            rec.equator = Some(er);
        }
        Err(e) => rec.failure(e),
    }
}

fn pole_check(setup: &TwistorSetup, rec: &mut FibreReportRecord) {
    let h = setup.base();
    match is_cm(h.space(), h.sigma_coords(), h.conj()) {
        Ok(v) if v.verdict => {}
        Ok(_) => rec.alarms.push("pole: the base structure is not CM".into()),
        Err(e) => rec.failure(e),
    }
}

fn picard_check(setup: &TwistorSetup, cls: &PolarizedClass, rec: &mut FibreReportRecord) {
    match point_for_class(setup, &cls.vector) {
        Ok((loc, p)) => {
            let rho = picard_number_at(&p);
            rec.rho_z = Some(rho);
            rec.rho_geometric = geometric_picard(rho, 22 - setup.rank()).ok();
            if loc != Location::Equator && rho != 1 {
                rec.alarms.push(format!("Picard number {rho} off the equator"));
            }
        }
        Err(e) => rec.failure(e),
    }
}

fn period_check(rec: &mut FibreReportRecord) {
    let (r, _) = PeriodSymbol::pair("sigma");
    let mut out = Vec::new();
    for n in Normalization::ALL {
        let t = coefficient_cosets(&r, n);
        let pr = PeriodRecord {
            normalization: n.as_str().into(),
            a: coset_pairs(&t.a),
            b: coset_pairs(&t.b),
            c: coset_pairs(&t.c),
            fibre_value: coset_pairs(&t.c),
            ratio_relation: t.ratio_relation(&r),
            norm_relation: t.norm_relation(&r),
            algebraic_collapse: [&t.a, &t.b, &t.c].iter().all(|u| u.specialize_algebraic(&r).is_identity()),
        };
        if !(pr.ratio_relation && pr.norm_relation && pr.algebraic_collapse) {
            rec.alarms.push(format!("period value relations fail for {}", pr.normalization));
        }
        out.push(pr);
    }
    rec.period = Some(out);
}

/// All checks for one class. Non-positive classes give `None`.
pub fn survey_class(
    setup: &TwistorSetup,
    v: &[Rational],
    checks: &std::collections::BTreeSet<Check>,
    timings: bool,
) -> Option<FibreReportRecord> {
    let t0 = Instant::now();
    let cls = match classify_class(setup, v) {
        Ok(c) => c,
        Err(e) => {
            let mut rec = FibreReportRecord {
                class: v.iter().map(q).collect(),
                location: "invalid".into(),
                m: String::new(),
                norm: String::new(),
                ..FibreReportRecord::new(&PolarizedClass {
                    vector: Vec::new(),
                    m: Rational::from_integer(0.into()),
                    norm: Rational::from_integer(0.into()),
                    location: Location::Generic,
                })
            };
            rec.failure(e);
            return Some(rec);
        }
    };
    if !cls.is_positive() {
        return None;
    }
    let mut rec = FibreReportRecord::new(&cls);
    if checks.contains(&Check::Picard) {
        picard_check(setup, &cls, &mut rec);
    }
    match cls.location {
        Location::Generic => {
            if checks.contains(&Check::Cm) {
                cm_check(setup, &cls, &mut rec);
            }
            if checks.contains(&Check::Period) {
                period_check(&mut rec);
            }
        }
        Location::Equator => {
            if checks.contains(&Check::Equator) {
                equator_check(setup, &cls, &mut rec);
            }
        }
        Location::Pole => {
            if checks.contains(&Check::Cm) {
                pole_check(setup, &mut rec);
            }
        }
    }
    if timings {
        rec.timing_ms = Some(t0.elapsed().as_millis() as u64);
    }
    Some(rec)
}

fn summarize(records: &[FibreReportRecord], total: usize) -> Summary {
    let mut s = Summary { classes: total, skipped_non_positive: total - records.len(), ..Summary::default() };
    for r in records {
        match r.location.as_str() {
            "pole" => s.poles += 1,
            "equator" => s.equator += 1,
            "generic" => s.generic += 1,
            _ => {}
        }
        if let Some(c) = &r.cm {
            let ok = c.solver_cm && c.k0_equal && c.two_routes_agree && c.criteria_agree && c.conjugate_symmetric;
            if ok {
                s.cm_pass += 1
            } else {
                s.cm_fail += 1
            }
        }
        if r.equator.is_some() {
            if r.alarms.iter().any(|a| a.starts_with("equator")) {
                s.equator_fail += 1
            } else {
                s.equator_pass += 1
            }
        }
        s.picard_violations += r.alarms.iter().filter(|a| a.starts_with("Picard")).count();
        s.period_fail += r.alarms.iter().filter(|a| a.starts_with("period")).count();
        if r.error.is_some() {
            s.errors += 1;
        }
        s.alarms += r.alarms.len();
    }
    s
}

/// The explicit classes followed by the height enumeration, without repeats.
pub fn scenario_classes(spec: &ScenarioSpec, rank: usize, height: Option<u32>) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = spec.classes.clone();
    if let Some(h) = height.or(spec.height) {
        for v in survey_classes(rank + 1, h) {
            let v = to_rationals(&v);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Builds the structure and runs the requested checks on every class.
/// Per-class failures are reported in the records; only a failure to build
/// the structure aborts.
pub fn run_survey(spec: &ScenarioSpec, cfg: &RunConfig) -> Result<SurveyReport, ScenarioError> {
    let t0 = Instant::now();
    let h = spec.build(cfg.seed, cfg.precision_cap)?;
    let setup = extend_by_polarization(&h, &spec.d)?;
    let checks = cfg.checks.clone().unwrap_or_else(|| spec.checks.clone());
    let classes = scenario_classes(spec, h.rank(), cfg.height);
    let run = || -> Vec<FibreReportRecord> {
        classes.par_iter().filter_map(|v| survey_class(&setup, v, &checks, cfg.timings)).collect()
    };
    let records = if cfg.workers <= 1 {
        classes.iter().filter_map(|v| survey_class(&setup, v, &checks, cfg.timings)).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    };
    let summary = summarize(&records, classes.len());
    Ok(SurveyReport {
        scenario: spec.name.clone(),
        structure: Some(structure_info(&h, &setup)),
        records,
        summary,
        timing_ms: cfg.timings.then(|| t0.elapsed().as_millis() as u64),
    })
}
