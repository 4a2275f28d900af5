use anyhow::{bail, Context};
use serde::Serialize;

use polyharm::acceptance::{run_all, CriterionResult, Status};
use polyharm::critical::{critical_scan, isolate_positive_roots, vanishing_data, CriticalScan};
use polyharm::geometry::{Family, GeometryReport, SolidInstance};
use polyharm::harmonic::{equivalence_check, module_span, same_spaces, solve, EquivalenceReport, PdeSystem, SpaceKind, Tolerances};
use polyharm::invariants::{
    closed_form_degrees, coefficient_closed_form, decompose_series, decomposition_tolerance, FaceWeights, InvariantBasis,
};
use polyharm::meanvalue::{verify_space, DefectReport, Thresholds};
use polyharm::{Float, Rational, Real, Scalar};

use crate::render::{table, Outcome};
use crate::{AnalyzeArgs, CoeffsArgs, CriticalArgs, GeometryArgs, HarmonicsArgs, MvpArgs, PaperCheckArgs};

/// Calls `$f::<Float<bits>>(args)` for the precision menu.
macro_rules! at_precision {
    ($bits:expr, $f:ident($($arg:expr),*)) => {
        match $bits {
            64 => $f::<Float<64>>($($arg),*),
            100 => $f::<Float<100>>($($arg),*),
            128 => $f::<Float<128>>($($arg),*),
            192 => $f::<Float<192>>($($arg),*),
            256 => $f::<Float<256>>($($arg),*),
            other => bail!("unsupported precision {other}"),
        }
    };
}

#[derive(Debug, Clone, Serialize)]
pub struct Snap {
    pub requested: String,
    pub polynomial: String,
    pub critical_value: String,
}

/// Replaces `r` by the certified critical value of `(family, k)` when it is
/// within `tol`, so that truncated decimals such as `3.62398` analyse the
/// critical instance itself.
fn resolve_r<S: Real>(family: Family, k: u8, r: &Rational, tol: f64) -> anyhow::Result<(S, Option<Snap>)> {
    let plain = S::from_rational(r);
    if tol == 0.0 {
        return Ok((plain, None));
    }
    let (id, poly, _, _) = vanishing_data(family, k)?;
    let report = isolate_positive_roots(id, &poly, S::precision_bits() + 8);
    for root in &report.roots {
        let value: S = root.value();
        if (value.clone() - &plain).abs().to_f64() <= tol && value != plain {
            let snap = Snap {
                requested: r.to_string(),
                polynomial: poly.to_text(),
                critical_value: value.to_text(),
            };
            return Ok((value, Some(snap)));
        }
    }
    Ok((plain, None))
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientRow {
    pub m: u32,
    /// Basis monomials in coefficient order.
    pub basis: Vec<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub c: Option<String>,
    pub d: Option<String>,
    pub closed_form: Option<String>,
    pub abs_diff: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientTable {
    pub family: Family,
    pub k: u8,
    pub r: String,
    pub snapped: Option<Snap>,
    pub weights: &'static str,
    pub rows: Vec<CoefficientRow>,
}

fn coefficient_table<S: Real>(
    family: Family,
    k: u8,
    r: S,
    snapped: Option<Snap>,
    m_range: (u32, u32),
    weights: FaceWeights,
) -> anyhow::Result<CoefficientTable> {
    let inst = SolidInstance::build(family, r.clone())?;
    let decs = decompose_series(&inst, k, m_range.1, weights, decomposition_tolerance::<S>())?;
    let basis = InvariantBasis::<S>::new(family.base_group());
    let with_closed = weights == FaceWeights::Normalized || k < 2;
    let mut rows = Vec::new();
    for (m, dec) in decs.into_iter().filter(|(m, _)| *m >= m_range.0) {
        let coef = |i: usize| dec.coefficients.get(i).map(|(_, c)| c.to_text());
        let closed = if with_closed && closed_form_degrees(family).contains(&m) {
            Some(coefficient_closed_form(family, k, m, &r)?)
        } else {
            None
        };
        let diff = closed.as_ref().map(|c| (dec.named(0) - c).abs().to_f64());
        rows.push(CoefficientRow {
            m,
            basis: dec.coefficients.iter().map(|(key, _)| basis.key_name(key)).collect(),
            a: coef(0),
            b: coef(1),
            c: coef(2),
            d: coef(3),
            closed_form: closed.map(|c| c.to_text()),
            abs_diff: diff,
        });
    }
    Ok(CoefficientTable {
        family,
        k,
        r: r.to_text(),
        snapped,
        weights: match weights {
            FaceWeights::Normalized => "normalized",
            FaceWeights::Raw => "raw",
        },
        rows,
    })
}

/// Closed form agreement to relative `tol`.
fn table_ok(t: &CoefficientTable, tol: f64) -> bool {
    t.rows.iter().all(|row| match (&row.closed_form, row.abs_diff) {
        (Some(c), Some(d)) => d <= tol * c.parse::<f64>().unwrap_or(1.0).abs().max(1.0),
        _ => true,
    })
}

fn render_table(t: &CoefficientTable) -> String {
    let mut s = format!("{} k={} r={}\n", t.family, t.k, short(&t.r));
    if let Some(snap) = &t.snapped {
        s.push_str(&format!("snapped r = {} to the root of {}\n", snap.requested, snap.polynomial));
    }
    let rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|row| {
            let opt = |v: &Option<String>| v.as_deref().map(short).unwrap_or_default();
            vec![
                row.m.to_string(),
                opt(&row.a),
                opt(&row.b),
                opt(&row.c),
                opt(&row.d),
                opt(&row.closed_form),
                row.abs_diff.map(|d| format!("{d:.2e}")).unwrap_or_default(),
            ]
        })
        .collect();
    s.push_str(&table(&["m", "a", "b", "c", "d", "closed form", "|diff|"], &rows));
    s
}

/// Scientific text shortened to 12 significant digits for tables.
fn short(text: &str) -> String {
    match text.parse::<f64>() {
        Ok(0.0) => "0".into(),
        Ok(v) => format!("{v:.12}").trim_end_matches('0').trim_end_matches('.').to_string(),
        Err(_) => text.to_string(),
    }
}

pub fn coeffs(a: &CoeffsArgs) -> anyhow::Result<Outcome> {
    at_precision!(a.common.precision, coeffs_at(a))
}

fn coeffs_at<S: Real>(a: &CoeffsArgs) -> anyhow::Result<Outcome> {
    let weights = if a.weights == "raw" {
        FaceWeights::Raw
    } else {
        FaceWeights::Normalized
    };
    let mut tables = Vec::new();
    for r in a.cell.values() {
        for &k in &a.cell.k {
            let (rs, snap) = resolve_r::<S>(a.cell.family, k, &r, a.cell.snap_tol)?;
            tables.push(coefficient_table(a.cell.family, k, rs, snap, (a.m.lo, a.m.hi), weights)?);
        }
    }
    let ok = tables.iter().all(|t| table_ok(t, a.tol));
    let text = tables.iter().map(render_table).collect::<Vec<_>>().join("\n");
    Outcome::new("coeffs", &tables, text, ok)
}

#[derive(Debug, Clone, Serialize)]
pub struct MvpSummary {
    pub space: SpaceKind,
    pub elements: usize,
    pub max_defect: f64,
    pub e2_min_defect: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisCell {
    pub family: Family,
    pub k: u8,
    pub r: String,
    pub snapped: Option<Snap>,
    pub coefficients: CoefficientTable,
    pub coefficients_match: bool,
    pub equivalence: Option<EquivalenceReport>,
    pub mean_value: Option<MvpSummary>,
    pub geometry: Option<GeometryReport>,
    pub errors: Vec<String>,
    pub ok: bool,
}

pub fn analyze(a: &AnalyzeArgs) -> anyhow::Result<Outcome> {
    at_precision!(a.common.precision, analyze_at(a))
}

fn analyze_at<S: Real>(a: &AnalyzeArgs) -> anyhow::Result<Outcome> {
    let family = a.cell.family;
    let tol = Tolerances {
        nonzero: a.tol,
        ..Tolerances::default()
    };
    let mut cells = Vec::new();
    for r in a.cell.values() {
        for &k in &a.cell.k {
            let (rs, snapped) = resolve_r::<S>(family, k, &r, a.cell.snap_tol)?;
            let coefficients = coefficient_table(family, k, rs.clone(), snapped.clone(), (2, 8), FaceWeights::Normalized)?;
            let coefficients_match = table_ok(&coefficients, 1e-10);
            let mut errors = Vec::new();
            let equivalence = equivalence_check(family, k, rs.clone(), a.max_tau_degree, &tol)
                .map_err(|e| errors.push(e.to_string()))
                .ok();
            let mean_value = equivalence.as_ref().and_then(|eq| {
                verify_space(family, k, rs.clone(), eq.space, &[], Thresholds::default())
                    .map(|rep| MvpSummary {
                        space: rep.space,
                        elements: rep.elements.len(),
                        max_defect: rep.max_defect,
                        e2_min_defect: rep.counterexamples[0].min_defect,
                        passed: rep.passed,
                    })
                    .map_err(|e| errors.push(e.to_string()))
                    .ok()
            });
            let geometry = if a.dump_geometry {
                Some(SolidInstance::build(family, rs.clone())?.report()?)
            } else {
                None
            };
            let ok = coefficients_match && errors.is_empty() && mean_value.as_ref().is_some_and(|m| m.passed);
            cells.push(AnalysisCell {
                family,
                k,
                r: rs.to_text(),
                snapped,
                coefficients,
                coefficients_match,
                equivalence,
                mean_value,
                geometry,
                errors,
                ok,
            });
        }
    }
    let ok = cells.iter().all(|c| c.ok);
    let text = cells.iter().map(render_cell).collect::<Vec<_>>().join("\n");
    Outcome::new("analyze", &cells, text, ok)
}

fn render_cell(c: &AnalysisCell) -> String {
    let mut s = render_table(&c.coefficients);
    if let Some(eq) = &c.equivalence {
        s.push_str(&format!(
            "space {} (dim {}, generator {}), group {}, critical: {}\n",
            eq.space.label(),
            eq.dimension,
            eq.generator,
            eq.group,
            if eq.critical { "yes" } else { "no" }
        ));
    }
    if let Some(m) = &c.mean_value {
        s.push_str(&format!(
            "mean value: {} elements, max defect {:.2e}, e2 defect >= {:.2e}: {}\n",
            m.elements,
            m.max_defect,
            m.e2_min_defect,
            if m.passed { "pass" } else { "FAIL" }
        ));
    }
    if !c.coefficients_match {
        s.push_str("closed forms: MISMATCH\n");
    }
    for e in &c.errors {
        s.push_str(&format!("error: {e}\n"));
    }
    s
}

pub fn critical(a: &CriticalArgs) -> anyhow::Result<Outcome> {
    at_precision!(a.common.precision, critical_at(a))
}

fn critical_at<S: Real>(a: &CriticalArgs) -> anyhow::Result<Outcome> {
    let families = match a.family {
        Some(f) => vec![f],
        None => vec![Family::TriakisTetra, Family::TriakisOcta],
    };
    let tol = Tolerances {
        nonzero: a.tol,
        ..Tolerances::default()
    };
    let mut scans: Vec<CriticalScan> = Vec::new();
    for family in families {
        for &k in &a.k {
            scans.push(critical_scan::<S>(family, k, &tol).with_context(|| format!("{family} k={k}"))?);
        }
    }
    // A root must make its coefficient vanish and change sign across it.
    let ok = scans.iter().flat_map(|s| &s.candidates).all(|c| {
        c.vanishing.value.abs() < 1e-8
            && c.neighbours.iter().all(|v| v.abs() > 1e-4)
            && c.neighbours[0].signum() != c.neighbours[1].signum()
            && c.companion.value.abs() > 1e-8
    });
    let rows: Vec<Vec<String>> = scans
        .iter()
        .flat_map(|s| {
            s.candidates.iter().map(move |c| {
                vec![
                    s.family.to_string(),
                    s.k.to_string(),
                    c.decimal.clone(),
                    format!("{:.1e}", c.bracket_width),
                    format!("{} = {:.1e}", c.vanishing.name, c.vanishing.value),
                    format!("{} = {:.6}", c.companion.name, c.companion.value),
                    format!("{} ({})", c.space.label(), c.dimension),
                    c.group.to_string(),
                    if c.critical { "yes" } else { "no" }.to_string(),
                ]
            })
        })
        .collect();
    let text = table(
        &["family", "k", "r", "bracket width", "vanishing", "companion", "space", "group", "critical"],
        &rows,
    );
    Outcome::new("critical", &scans, text, ok)
}

#[derive(Debug, Clone, Serialize)]
pub struct HarmonicsReport {
    pub system: SpaceKind,
    pub max_degree: u32,
    pub dims: Vec<usize>,
    pub total_dim: usize,
    pub generator: &'static str,
    /// Derivatives of the generator span the solution space.
    pub generator_spans: bool,
    pub basis_file: Option<String>,
}

#[derive(Serialize)]
struct BasisDump {
    schema_version: &'static str,
    system: SpaceKind,
    max_degree: u32,
    /// Degree, then the basis polynomials of that degree.
    basis: Vec<(u32, Vec<String>)>,
}

pub fn harmonics(a: &HarmonicsArgs) -> anyhow::Result<Outcome> {
    let max_degree = a.max_degree.unwrap_or(a.system.top_degree() + 2);
    let space = solve(&PdeSystem::<Rational>::standard(a.system), max_degree, 0.0);
    let span = module_span(&a.system.generator::<Rational>(), max_degree, 0.0)?;
    let generator_spans = same_spaces(&span, &space, 0.0);
    if let Some(path) = &a.emit_basis {
        let dump = BasisDump {
            schema_version: crate::SCHEMA_VERSION,
            system: a.system,
            max_degree,
            basis: space
                .per_degree
                .iter()
                .map(|(d, ps)| (*d, ps.iter().map(|p| p.to_string()).collect()))
                .collect(),
        };
        std::fs::write(path, serde_json::to_string_pretty(&dump)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let report = HarmonicsReport {
        system: a.system,
        max_degree,
        dims: space.dims(),
        total_dim: space.total_dim(),
        generator: a.system.generator_name(),
        generator_spans,
        basis_file: a.emit_basis.as_ref().map(|p| p.display().to_string()),
    };
    let text = format!(
        "{} up to degree {}: dim {} by degree {:?}\nderivatives of {} span it: {}\n",
        a.system.label(),
        max_degree,
        report.total_dim,
        report.dims,
        report.generator,
        if generator_spans { "yes" } else { "NO" }
    );
    Outcome::new("harmonics", &report, text, generator_spans)
}

#[derive(Debug, Clone, Serialize)]
pub struct MvpResult {
    pub snapped: Option<Snap>,
    pub report: DefectReport,
}

pub fn mvp(a: &MvpArgs) -> anyhow::Result<Outcome> {
    at_precision!(a.common.precision, mvp_at(a))
}

fn mvp_at<S: Real>(a: &MvpArgs) -> anyhow::Result<Outcome> {
    let (r, snapped) = resolve_r::<S>(a.family, a.k, &a.r, a.snap_tol)?;
    let space = match a.space {
        Some(s) => s,
        None => equivalence_check(a.family, a.k, r.clone(), 8, &Tolerances::default())?.space,
    };
    let th = Thresholds {
        pass: a.tol,
        ..Thresholds::default()
    };
    let report = verify_space(a.family, a.k, r, space, &[], th)?;
    let mut text = format!(
        "{} k={} r={} {}: |P(k)| = {}\n{} elements x {} samples, max defect {:.3e} (threshold {:.1e})\n",
        report.family,
        report.k,
        short(&report.r),
        report.space.label(),
        short(&report.measure),
        report.elements.len(),
        report.centers.len() * report.radii.len(),
        report.max_defect,
        report.thresholds.pass
    );
    for c in &report.counterexamples {
        text.push_str(&format!(
            "counterexample {}: min defect {:.3e} {}\n",
            c.name,
            c.min_defect,
            if c.rejected { "rejected" } else { "NOT rejected" }
        ));
    }
    if let Some(note) = &report.note {
        text.push_str(&format!("note: {note}\n"));
    }
    let ok = report.passed;
    Outcome::new("mvp", MvpResult { snapped, report }, text, ok)
}

pub fn paper_check(a: &PaperCheckArgs) -> anyhow::Result<Outcome> {
    let mut out = at_precision!(a.common.precision, paper_check_at(a))?;
    if a.common.precision < 100 {
        out.warnings.push(format!(
            "{} bits is below the 100-bit default; checks finer than the rounding level are reported as warnings",
            a.common.precision
        ));
    }
    Ok(out)
}

fn paper_check_at<S: Real>(a: &PaperCheckArgs) -> anyhow::Result<Outcome> {
    let mut results: Vec<CriterionResult> = run_all::<S>();
    if let Some(keep) = a.family {
        let other = match keep {
            Family::TriakisTetra => Family::TriakisOcta.to_string(),
            Family::TriakisOcta => Family::TriakisTetra.to_string(),
        };
        for r in &mut results {
            r.checks.retain(|c| !c.name.contains(&other));
        }
    }
    let ok = results.iter().all(CriterionResult::passed);
    let mut text = String::new();
    for r in &results {
        text.push_str(&r.line());
        text.push('\n');
        for c in r.checks.iter().filter(|c| c.status != Status::Pass) {
            text.push_str(&format!("    {:?} {}: {}\n", c.status, c.name, c.detail));
        }
    }
    let failures = results.iter().filter(|r| !r.passed()).count();
    text.push_str(&format!("{} of {} criteria passed\n", results.len() - failures, results.len()));
    Outcome::new("paper-check", &results, text, ok)
}

pub fn dump_geometry(a: &GeometryArgs) -> anyhow::Result<Outcome> {
    at_precision!(a.common.precision, dump_geometry_at(a))
}

fn dump_geometry_at<S: Real>(a: &GeometryArgs) -> anyhow::Result<Outcome> {
    let inst = SolidInstance::build(a.family, S::from_rational(&a.r))?;
    let report = inst.report()?;
    let mut text = format!("{} r={}\n", report.family, a.r);
    let rows: Vec<Vec<String>> = report
        .vertices
        .iter()
        .map(|v| {
            let mut row = vec![v.label.clone()];
            row.extend(v.point.iter().map(|c| short(c)));
            row
        })
        .collect();
    text.push_str(&table(&["vertex", "x1", "x2", "x3"], &rows));
    text.push_str(&format!(
        "{} edges, {} faces, {} flags\n",
        report.edge_feet.len(),
        report.face_feet.len(),
        report.flag_count
    ));
    text.push_str(&format!("incidence: {}\n", serde_json::to_string(&report.incidence)?));
    Outcome::new("dump-geometry", &report, text, true)
}
