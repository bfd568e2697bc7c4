//! Suite runner: selects identity suites, runs them on a built
//! specification and assembles one sorted report.

use std::time::Instant;

use crate::braiding::{classicality_report, verify_braiding_suite};
use crate::calculus::{check_degree, TotalCalculus, MAX_FORM_DEGREE};
use crate::error::{input, Error, Result};
use crate::gauge::Gauge;
use crate::report::{ValidationReport, Witness};
use crate::specfile::Built;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Translation,
    Braiding,
    Gauge,
    Classical,
    Differential,
}

pub const ALL: [Suite; 5] = [Suite::Translation, Suite::Braiding, Suite::Gauge, Suite::Classical, Suite::Differential];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Translation => "translation",
            Suite::Braiding => "braiding",
            Suite::Gauge => "gauge",
            Suite::Classical => "classical",
            Suite::Differential => "differential",
        }
    }

    /// Comma-separated suite names; `all` selects every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for name in s.split(',').map(str::trim) {
            if name == "all" {
                out.extend(ALL);
                continue;
            }
            let suite = ALL.into_iter().find(|x| x.name() == name).ok_or_else(|| input(format!("unknown suite `{name}`")))?;
            out.push(suite);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub degree: u8,
    pub fail_fast: bool,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { degree: MAX_FORM_DEGREE, fail_fast: false, timing: false }
    }
}

/// Run `suites` in order. Build-level problems (degree budget, missing
/// sections, non-product bundles, non-covariant perturbations) are errors;
/// identity failures are `fail` records. With `fail_fast`, suites after the
/// first failing one are skipped.
pub fn run_suites(built: &Built, suites: &[Suite], opts: RunOptions) -> Result<ValidationReport> {
    check_degree(opts.degree)?;
    let selected_all = suites.len() == ALL.len();
    let mut rep = expectations(built)?;
    for &s in suites {
        let start = Instant::now();
        let part = match s {
            Suite::Translation => translation(built),
            Suite::Braiding => verify_braiding_suite(&built.bundle),
            Suite::Gauge => gauge(built)?,
            Suite::Classical => classical(built)?,
            Suite::Differential => match differential(built, opts.degree) {
                Err(e @ (Error::NotProductBundle(_) | Error::Input(_))) if selected_all => {
                    let mut r = ValidationReport::new();
                    r.note(format!("differential suite skipped: {e}"));
                    r
                }
                other => other?,
            },
        };
        let failed = !part.all_pass();
        rep.merge(part);
        if opts.timing {
            rep.note(format!("suite {}: {} ms", s.name(), start.elapsed().as_millis()));
        }
        if failed && opts.fail_fast {
            rep.note(format!("stopped after the {} suite (fail-fast)", s.name()));
            break;
        }
    }
    rep.finish(opts.timing);
    Ok(rep)
}

fn expectations(built: &Built) -> Result<ValidationReport> {
    let mut rep = ValidationReport::new();
    let Some(ex) = &built.expect else { return Ok(rep) };
    let b = &built.bundle;
    let mut check = |id: &str, want: Option<usize>, got: Option<usize>| {
        if let Some(w) = want {
            let witness = match got {
                Some(g) if g == w => None,
                Some(g) => Some(Witness::new(id, g, w)),
                None => Some(Witness::new(id, "unavailable", w)),
            };
            rep.record(&format!("expect.dims.{id}"), "expect", witness);
        }
    };
    if let Some(d) = &ex.dims {
        check("hopf", d.hopf, Some(b.dim_h()));
        check("bundle", d.bundle, Some(b.dim()));
        check("base", d.base, Some(b.base.len()));
        check("gamma_inv", d.gamma_inv, built.fodc.as_ref().map(|f| f.dim()));
    }
    if let Some(want) = ex.classical {
        let got = classicality_report(b)?.classical();
        rep.record("expect.classical", "expect", (got != want).then(|| Witness::new("classical", got, want)));
    }
    Ok(rep)
}

fn translation(built: &Built) -> ValidationReport {
    let mut rep = built.bundle.group.validate();
    rep.merge(built.bundle.translation_identities("translation"));
    rep
}

fn gauge(built: &Built) -> Result<ValidationReport> {
    let b = &built.bundle;
    let g = Gauge::new(b)?;
    let mut rep = g.identities("gauge");
    match g.isotypic_decompose() {
        Ok(d) => rep.merge(d.report),
        Err(e @ (Error::IrrepsUnavailable | Error::NoHaar)) => rep.note(format!("isotypic decomposition skipped: {e}")),
        Err(e) => return Err(e),
    }
    match g.gauge_group() {
        Ok(gg) => {
            rep.note(format!("gauge group of order {}", gg.elements.len()));
            rep.merge(gg.report);
        }
        Err(e @ (Error::NotClassical(_) | Error::NotCommutative(_) | Error::NoHaar)) => {
            rep.note(format!("gauge group enumeration skipped: {e}"))
        }
        Err(e) => return Err(e),
    }
    Ok(rep)
}

fn classical(built: &Built) -> Result<ValidationReport> {
    let b = &built.bundle;
    let mut rep = ValidationReport::new();
    match classicality_report(b) {
        Ok(d) => {
            rep.record("classical.dichotomy", "dichotomy", None);
            rep.classicality = Some(d.to_json());
            if d.classical() {
                rep.merge(Gauge::new(b)?.classical_identities("classical")?);
            } else {
                rep.note(format!("{}; braided Hopf identities not applicable", Error::NotClassical("σ_M² ≠ id".into())));
            }
        }
        Err(Error::EquivalenceViolation(m)) => {
            rep.record("classical.dichotomy", "dichotomy", Some(Witness::new("classicality tests", m, "all equal")))
        }
        Err(e) => return Err(e),
    }
    Ok(rep)
}

fn differential(built: &Built, degree: u8) -> Result<ValidationReport> {
    let points = built
        .points
        .ok_or_else(|| Error::NotProductBundle("the bundle is given by explicit structure constants".into()))?;
    let fodc = built.fodc.clone().ok_or_else(|| input("the differential suite needs an `fodc` section"))?;
    let tc = TotalCalculus::build(fodc, points, built.base_calculus, degree)?;
    let mut rep = tc.fodc.report("diff.fodc");
    rep.merge(tc.envelope.report(&tc.fodc, "diff.envelope"));
    rep.merge(tc.forms.report("diff.forms"));
    rep.merge(tc.structure_report("diff.omega"));
    rep.merge(tc.tau_report("diff.tau")?);
    rep.merge(tc.sigma_report("diff.sigma"));
    rep.merge(tc.gauge_report("diff.gauge")?);
    rep.merge(tc.classical_report("diff.classical"));
    let conn = tc.connection(built.perturbation.as_deref())?;
    rep.merge(conn.verify_transformations("diff.connection")?);
    let [d0, d1, d2] = tc.dims();
    let [h0, h1, h2] = tc.hor_dims();
    rep.note(format!(
        "Ω(P) over {points} point(s), {} base calculus: dims ({d0}, {d1}, {d2}), horizontal ({h0}, {h1}, {h2})",
        built.base_calculus.name()
    ));
    Ok(rep)
}
