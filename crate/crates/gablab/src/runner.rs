//! Executes resolved specs: builds the Gabor system for every lattice pair,
//! dispatches the requested verification tasks, and assembles reports,
//! sweep CSVs, and subgroup listings.

use gablab_core::density::{completeness_sweep, completeness_verdict, lattice_size, ThetaSweep};
use gablab_core::gabor::GaborSystem;
use gablab_core::group::{
    annihilator, enumerate_subgroups, make_group, section, GroupSpec, Side, Subgroup,
    DEFAULT_EXHAUSTIVE_CAP,
};
use gablab_core::rdual::{adjoint_rdual_witness, thm43_verify, OrthonormalBasis, RDualError};
use gablab_core::spectral::{
    canonical_parseval, excess_deficit, frame_bounds, verify_duality, verify_tight_orthogonal,
    Convention, SpectralError, DEFAULT_RANK_TOL,
};
use gablab_core::Complex64;
use serde_json::{json, Value};

use crate::jsonio::{ratio_to_json, spectral_report_to_json, witness_to_json};
use crate::report::{
    CaseRecord, LatticeRecord, Report, VERDICT_FAIL, VERDICT_PASS, VERDICT_SKIPPED,
};
use crate::schema::{InputError, ResolvedSpec, Task, WindowSpec};

/// Slack for checks that hold with exact arithmetic (monotonicity of the ψ
/// column, the `⟨g, h_θ⟩ ≤ 1` bound) and only wiggle by rounding.
const EXACT_SLACK: f64 = 1e-12;

struct CaseOutcome {
    verdict: &'static str,
    payload: Value,
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        VERDICT_PASS
    } else {
        VERDICT_FAIL
    }
}

fn fail_with_error(err: impl std::fmt::Display) -> CaseOutcome {
    CaseOutcome {
        verdict: VERDICT_FAIL,
        payload: json!({ "error": err.to_string() }),
    }
}

fn skip(reason: &str) -> CaseOutcome {
    CaseOutcome {
        verdict: VERDICT_SKIPPED,
        payload: json!({ "reason": reason }),
    }
}

fn run_duality(sys: &GaborSystem, tol: f64) -> CaseOutcome {
    match verify_duality(sys, tol, DEFAULT_RANK_TOL) {
        Ok(rep) => CaseOutcome {
            verdict: pass_fail(rep.pass),
            payload: json!({
                "frame": spectral_report_to_json(&rep.frame),
                "adjointRiesz": spectral_report_to_json(&rep.adjoint_riesz),
                "lowerGap": rep.lower_gap,
                "upperGap": rep.upper_gap,
            }),
        },
        Err(e) => fail_with_error(e),
    }
}

fn run_tight(sys: &GaborSystem, tol: f64) -> CaseOutcome {
    match verify_tight_orthogonal(sys, tol, tol) {
        Ok(rep) => CaseOutcome {
            verdict: pass_fail(rep.pass),
            payload: json!({
                "frame": spectral_report_to_json(&rep.frame),
                "maxOffdiag": rep.max_offdiag,
                "adjointOrthogonal": rep.adjoint_orthogonal,
                "boundGap": rep.bound_gap,
            }),
        },
        Err(e) => fail_with_error(e),
    }
}

fn run_rdual43(sys: &GaborSystem, tol: f64) -> CaseOutcome {
    // Same subgroup as a set; generator lists may differ.
    if annihilator(sys.lambda()).elements() != sys.gamma().elements() {
        return skip("frequency lattice is not the annihilator of the time lattice");
    }
    match thm43_verify(sys.window(), sys.lambda(), tol) {
        Ok(rep) => CaseOutcome {
            verdict: pass_fail(rep.pass),
            payload: json!({
                "maxResidual": rep.max_residual,
                "windowNorm": rep.window_norm,
            }),
        },
        Err(e) => fail_with_error(e),
    }
}

fn run_rdual41(sys: &GaborSystem, tol: f64) -> CaseOutcome {
    let e = OrthonormalBasis::standard(sys.group());
    let h = OrthonormalBasis::standard(sys.group());
    match adjoint_rdual_witness(sys, &e, &h, tol) {
        Ok(w) => {
            let ok = w.unitary_defect <= tol && w.w_gram_defect <= tol;
            CaseOutcome {
                verdict: pass_fail(ok),
                payload: witness_to_json(&w, true),
            }
        }
        Err(RDualError::NotTight) => skip("system is not a tight frame"),
        Err(e) => fail_with_error(e),
    }
}

fn run_density(sys: &GaborSystem) -> CaseOutcome {
    match completeness_verdict(sys, DEFAULT_RANK_TOL) {
        Ok(v) => CaseOutcome {
            verdict: pass_fail(v.consistent),
            payload: json!({
                "numAtoms": v.num_atoms,
                "ambientDim": v.ambient_dim,
                "rank": v.rank,
                "density": ratio_to_json(v.density),
                "complete": v.complete,
            }),
        },
        Err(e) => fail_with_error(e),
    }
}

/// Evaluates one completed θ sweep: defects within `tol`, the window/
/// resolvent inner product within its exact `[0, 1]` bound, ψ monotone
/// nondecreasing and below both `1/d` and `ψ(P)`.
fn sweep_ok(sweep: &ThetaSweep, tol: f64) -> bool {
    let d_inv = *sweep.d_inverse.numer() as f64 / *sweep.d_inverse.denom() as f64;
    let mut prev = f64::NEG_INFINITY;
    for row in &sweep.rows {
        if row.identity_defect > tol
            || row.inner_product > 1.0 + EXACT_SLACK
            || row.inner_product < -EXACT_SLACK
            || row.psi > d_inv + tol
            || row.psi > sweep.psi_projection + tol
            || row.psi < prev - EXACT_SLACK
        {
            return false;
        }
        prev = row.psi;
    }
    true
}

fn sweep_payload(sweep: &ThetaSweep) -> Value {
    let rows: Vec<Value> = sweep
        .rows
        .iter()
        .map(|r| {
            json!({
                "theta": r.theta,
                "innerProduct": r.inner_product,
                "psi": r.psi,
                "identityDefect": r.identity_defect,
            })
        })
        .collect();
    let last_psi = sweep.rows.last().map(|r| r.psi).unwrap_or(0.0);
    json!({
        "rows": rows,
        "dInverse": ratio_to_json(sweep.d_inverse),
        "psiProjection": sweep.psi_projection,
        "finalGap": (sweep.psi_projection - last_psi).abs(),
    })
}

fn run_completeness(sys: &GaborSystem, grid: &[f64], tol: f64) -> CaseOutcome {
    match completeness_sweep(sys, grid) {
        Ok(sweep) => CaseOutcome {
            verdict: pass_fail(sweep_ok(&sweep, tol)),
            payload: sweep_payload(&sweep),
        },
        Err(e) => fail_with_error(e),
    }
}

fn run_excess(sys: &GaborSystem) -> CaseOutcome {
    let rep = match excess_deficit(sys, DEFAULT_RANK_TOL) {
        Ok(rep) => rep,
        Err(e) => return fail_with_error(e),
    };
    let fb = match frame_bounds(sys, Convention::Paper, DEFAULT_RANK_TOL) {
        Ok(fb) => fb,
        Err(e) => return fail_with_error(e),
    };
    let ok = rep.excess == rep.num_atoms - rep.rank
        && rep.deficit == rep.ambient_dim - rep.rank
        && (rep.deficit == 0) == fb.is_frame;
    CaseOutcome {
        verdict: pass_fail(ok),
        payload: json!({
            "numAtoms": rep.num_atoms,
            "ambientDim": rep.ambient_dim,
            "rank": rep.rank,
            "excess": rep.excess,
            "deficit": rep.deficit,
            "isFrame": fb.is_frame,
        }),
    }
}

fn run_task(sys: &GaborSystem, task: Task, grid: &[f64], tol: f64) -> CaseOutcome {
    match task {
        Task::Completeness => run_completeness(sys, grid, tol),
        Task::Density => run_density(sys),
        Task::Duality => run_duality(sys, tol),
        Task::Excess => run_excess(sys),
        Task::Rdual41 => run_rdual41(sys, tol),
        Task::Rdual43 => run_rdual43(sys, tol),
        Task::Tight => run_tight(sys, tol),
    }
}

/// Realizes the window for one lattice pair. `Ok(None)` means the pair is
/// skipped by precondition (`canonical_parseval` on a non-frame base
/// system); `Err` carries an unexpected numeric failure.
fn window_for_pair(
    group: &GroupSpec,
    window: &WindowSpec,
    fixed: &Option<Vec<Complex64>>,
    lam: &Subgroup,
    gam: &Subgroup,
) -> Result<Option<Vec<Complex64>>, String> {
    if let Some(w) = fixed {
        return Ok(Some(w.clone()));
    }
    debug_assert!(matches!(window, WindowSpec::CanonicalParseval));
    let delta = WindowSpec::Delta
        .realize(group)
        .expect("delta window always realizes");
    let base = GaborSystem::new(group, delta, lam.clone(), gam.clone())
        .map_err(|e| e.to_string())?;
    match canonical_parseval(&base, Convention::Paper, DEFAULT_RANK_TOL) {
        Ok(p) => Ok(Some(p)),
        Err(SpectralError::NotAFrame) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

/// Runs every (time lattice, frequency lattice, task) case of the resolved
/// spec and assembles the report.
pub fn run_spec_resolved(rs: &ResolvedSpec) -> Report {
    let fixed_window = rs.window.realize(&rs.group);
    let descriptor = rs.window.describe();
    let mut cases = Vec::new();
    for lam in &rs.time_lattices {
        for gam in &rs.freq_lattices {
            let time_lattice = LatticeRecord::from_subgroup(lam);
            let freq_lattice = LatticeRecord::from_subgroup(gam);
            let mut push = |outcome: CaseOutcome, task: Task| {
                cases.push(CaseRecord {
                    time_lattice: time_lattice.clone(),
                    freq_lattice: freq_lattice.clone(),
                    window: descriptor.clone(),
                    task: task.name().to_string(),
                    verdict: outcome.verdict.to_string(),
                    tolerance: rs.tol,
                    payload: outcome.payload,
                });
            };
            match window_for_pair(&rs.group, &rs.window, &fixed_window, lam, gam) {
                Err(msg) => {
                    for &task in &rs.tasks {
                        push(fail_with_error(&msg), task);
                    }
                }
                Ok(None) => {
                    for &task in &rs.tasks {
                        push(skip("canonical Parseval window requires the base delta system to be a frame"), task);
                    }
                }
                Ok(Some(window)) => {
                    match GaborSystem::new(&rs.group, window, lam.clone(), gam.clone()) {
                        Err(e) => {
                            for &task in &rs.tasks {
                                push(fail_with_error(&e), task);
                            }
                        }
                        Ok(sys) => {
                            for &task in &rs.tasks {
                                push(run_task(&sys, task, &rs.theta_grid, rs.tol), task);
                            }
                        }
                    }
                }
            }
        }
    }
    Report::assemble(
        rs.group.moduli().to_vec(),
        descriptor,
        rs.tol,
        cases,
    )
}

/// A completed sweep: the CSV text, one human-readable summary line per
/// lattice pair, and the overall verdict.
pub struct SweepOutcome {
    pub csv: String,
    pub summary_lines: Vec<String>,
    pub all_pass: bool,
}

pub const SWEEP_CSV_HEADER: &str = "theta,inner_product,psi,bound_1_over_d,identity_defect";

fn lattice_brief(sub: &Subgroup) -> String {
    let gens: Vec<String> = sub
        .generators()
        .iter()
        .map(|e| {
            let coords: Vec<String> = e.residues().iter().map(|r| r.to_string()).collect();
            format!("({})", coords.join(","))
        })
        .collect();
    format!("<{}> order {}", gens.join(","), sub.order())
}

/// Runs the completeness sweep over every lattice pair of the spec,
/// concatenating CSV rows in case order. Requires the spec to request the
/// `density` or `completeness` task.
pub fn sweep_resolved(rs: &ResolvedSpec) -> Result<SweepOutcome, InputError> {
    if !rs
        .tasks
        .iter()
        .any(|t| matches!(t, Task::Density | Task::Completeness))
    {
        return Err(InputError::new(
            "sweep requires the density or completeness task in the spec",
        ));
    }
    let fixed_window = rs.window.realize(&rs.group);
    let mut csv = String::from(SWEEP_CSV_HEADER);
    csv.push('\n');
    let mut summary_lines = Vec::new();
    let mut all_pass = true;
    for lam in &rs.time_lattices {
        for gam in &rs.freq_lattices {
            let label = format!(
                "time {} | freq {}",
                lattice_brief(lam),
                lattice_brief(gam)
            );
            let window = match window_for_pair(&rs.group, &rs.window, &fixed_window, lam, gam) {
                Ok(Some(w)) => w,
                Ok(None) => {
                    summary_lines.push(format!("{label}: skipped (precondition)"));
                    continue;
                }
                Err(msg) => {
                    summary_lines.push(format!("{label}: failed ({msg})"));
                    all_pass = false;
                    continue;
                }
            };
            let sys = match GaborSystem::new(&rs.group, window, lam.clone(), gam.clone()) {
                Ok(sys) => sys,
                Err(e) => {
                    summary_lines.push(format!("{label}: failed ({e})"));
                    all_pass = false;
                    continue;
                }
            };
            let sweep = match completeness_sweep(&sys, &rs.theta_grid) {
                Ok(sweep) => sweep,
                Err(e) => {
                    summary_lines.push(format!("{label}: failed ({e})"));
                    all_pass = false;
                    continue;
                }
            };
            let d_inv = *sweep.d_inverse.numer() as f64 / *sweep.d_inverse.denom() as f64;
            for row in &sweep.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.theta, row.inner_product, row.psi, d_inv, row.identity_defect
                ));
            }
            let ok = sweep_ok(&sweep, rs.tol);
            all_pass &= ok;
            let final_psi = sweep.rows.last().map(|r| r.psi).unwrap_or(0.0);
            summary_lines.push(format!(
                "{label}: final psi {} -> projection limit {} (bound 1/d = {}), {}",
                final_psi,
                sweep.psi_projection,
                d_inv,
                if ok { "pass" } else { "fail" }
            ));
        }
    }
    Ok(SweepOutcome {
        csv,
        summary_lines,
        all_pass,
    })
}

/// Deterministic JSON listing of all subgroups of the group: orders,
/// generators, elements, annihilators, and coset sections.
pub fn enumerate_listing(moduli: &[i64]) -> Result<Value, InputError> {
    let group = make_group(moduli).map_err(|e| InputError::new(format!("group: {e}")))?;
    let mut subs = enumerate_subgroups(&group, Side::Primal, DEFAULT_EXHAUSTIVE_CAP)
        .map_err(|e| InputError::new(format!("group: {e}")))?;
    subs.sort_by(|a, b| {
        (a.order(), a.elements()).cmp(&(b.order(), b.elements()))
    });
    let entries: Vec<Value> = subs
        .iter()
        .map(|sub| {
            let perp = annihilator(sub);
            let sec = section(sub);
            let residue_lists = |elems: &[gablab_core::group::Elem]| -> Vec<Vec<u64>> {
                elems.iter().map(|e| e.residues().to_vec()).collect()
            };
            json!({
                "order": sub.order(),
                "generators": residue_lists(sub.generators()),
                "elements": residue_lists(sub.elements()),
                "annihilator": {
                    "order": perp.order(),
                    "generators": residue_lists(perp.generators()),
                    "elements": residue_lists(perp.elements()),
                },
                "sectionReps": residue_lists(sec.reps()),
                "sectionMeasure": ratio_to_json(sec.measure()),
            })
        })
        .collect();
    Ok(json!({
        "moduli": group.moduli(),
        "order": group.order(),
        "count": entries.len(),
        "subgroups": entries,
    }))
}

/// Lattice size of the pair, exposed for summaries.
pub fn pair_density(lam: &Subgroup, gam: &Subgroup) -> Result<gablab_core::Ratio<u64>, InputError> {
    lattice_size(lam, gam).map_err(|e| InputError::new(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{parse_spec, resolve_spec};
    use gablab_core::group::DEFAULT_MAX_ORDER;

    fn resolved(text: &str) -> ResolvedSpec {
        resolve_spec(&parse_spec(text).unwrap(), DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn z2_delta_duality_yields_four_passing_cases() {
        let rs = resolved(
            r#"{"group":[2],"window":{"kind":"delta"},"timeLattice":"all","freqLattice":"all","tasks":["duality"]}"#,
        );
        let report = run_spec_resolved(&rs);
        assert_eq!(report.cases.len(), 4);
        assert!(report.all_pass());
        assert_eq!(report.summary.pass, 4);
        assert_eq!(report.summary.skipped, 0);
        for case in &report.cases {
            assert_eq!(case.verdict, VERDICT_PASS);
            assert_eq!(case.task, "duality");
        }
    }

    #[test]
    fn rdual41_skips_on_non_tight_windows() {
        // A generic random window on a sparse lattice pair is not tight.
        let rs = resolved(
            r#"{"group":[4],"window":{"kind":"random","seed":11},"timeLattice":[[2]],"freqLattice":[[2]],"tasks":["rdual41"]}"#,
        );
        let report = run_spec_resolved(&rs);
        assert_eq!(report.cases.len(), 1);
        assert_eq!(report.cases[0].verdict, VERDICT_SKIPPED);
        assert!(report.all_pass(), "skips count as passes");
    }

    #[test]
    fn rdual43_skips_unless_freq_lattice_is_the_annihilator() {
        let rs = resolved(
            r#"{"group":[4],"window":{"kind":"random","seed":3},"timeLattice":[[2]],"freqLattice":[[1]],"tasks":["rdual43"]}"#,
        );
        let report = run_spec_resolved(&rs);
        assert_eq!(report.cases[0].verdict, VERDICT_SKIPPED);

        let rs = resolved(
            r#"{"group":[4],"window":{"kind":"random","seed":3},"timeLattice":[[2]],"freqLattice":[[2]],"tasks":["rdual43"]}"#,
        );
        let report = run_spec_resolved(&rs);
        assert_eq!(report.cases[0].verdict, VERDICT_PASS);
    }

    #[test]
    fn all_tasks_on_a_critically_sampled_pair_pass() {
        let rs = resolved(
            r#"{"group":[2,2],"window":{"kind":"random","seed":5},"timeLattice":[[1,0]],"freqLattice":[[0,1]],"tasks":["duality","tight","rdual43","rdual41","density","completeness","excess"]}"#,
        );
        let report = run_spec_resolved(&rs);
        assert_eq!(report.cases.len(), 7);
        assert!(
            report.all_pass(),
            "verdicts: {:?}",
            report
                .cases
                .iter()
                .map(|c| (c.task.clone(), c.verdict.clone()))
                .collect::<Vec<_>>()
        );
        // Generic windows are not tight, so rdual41 skips; the tight task
        // still passes because the adjoint is correspondingly non-orthogonal.
        let rdual41 = report.cases.iter().find(|c| c.task == "rdual41").unwrap();
        assert_eq!(rdual41.verdict, VERDICT_SKIPPED);
    }

    #[test]
    fn canonical_parseval_windows_skip_non_frame_pairs_and_pass_tight() {
        let rs = resolved(
            r#"{"group":[4],"window":{"kind":"canonical_parseval"},"timeLattice":"all","freqLattice":"all","tasks":["tight","rdual41"]}"#,
        );
        let report = run_spec_resolved(&rs);
        assert!(report.all_pass());
        // The trivial pair (order-1 lattices) cannot span, so it must skip;
        // the full pair is a frame and must pass both tasks.
        let trivial: Vec<&CaseRecord> = report
            .cases
            .iter()
            .filter(|c| c.time_lattice.order == 1 && c.freq_lattice.order == 1)
            .collect();
        assert_eq!(trivial.len(), 2);
        assert!(trivial.iter().all(|c| c.verdict == VERDICT_SKIPPED));
        let full: Vec<&CaseRecord> = report
            .cases
            .iter()
            .filter(|c| c.time_lattice.order == 4 && c.freq_lattice.order == 4)
            .collect();
        assert_eq!(full.len(), 2);
        assert!(full.iter().all(|c| c.verdict == VERDICT_PASS));
    }

    #[test]
    fn report_cases_are_canonically_sorted() {
        let rs = resolved(
            r#"{"group":[4],"window":{"kind":"delta"},"timeLattice":"all","freqLattice":"all","tasks":["excess","density"]}"#,
        );
        let report = run_spec_resolved(&rs);
        assert_eq!(report.cases.len(), 3 * 3 * 2);
        let keys: Vec<_> = report
            .cases
            .iter()
            .map(|c| {
                (
                    c.time_lattice.order,
                    c.time_lattice.elements.clone(),
                    c.freq_lattice.order,
                    c.freq_lattice.elements.clone(),
                    c.task.clone(),
                )
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn sweep_emits_the_worked_z2_row_and_requires_a_density_task() {
        let rs = resolved(
            r#"{"group":[2],"window":{"kind":"delta"},"timeLattice":[[1]],"freqLattice":[[1]],"tasks":["completeness"],"thetaGrid":[1.0]}"#,
        );
        let out = sweep_resolved(&rs).unwrap();
        assert!(out.all_pass);
        let mut lines = out.csv.lines();
        assert_eq!(lines.next().unwrap(), SWEEP_CSV_HEADER);
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "1");
        let psi: f64 = row[2].parse().unwrap();
        let bound: f64 = row[3].parse().unwrap();
        let defect: f64 = row[4].parse().unwrap();
        assert!((psi - 2.0 / 3.0).abs() <= 1e-12, "psi row {row:?}");
        assert_eq!(bound, 2.0);
        assert!(defect <= 1e-9);

        let rs = resolved(
            r#"{"group":[2],"window":{"kind":"delta"},"timeLattice":[[1]],"freqLattice":[[1]],"tasks":["duality"]}"#,
        );
        assert!(sweep_resolved(&rs).is_err());
    }

    #[test]
    fn incomplete_sweeps_report_projection_below_one() {
        let rs = resolved(
            r#"{"group":[4],"window":{"kind":"random","seed":9},"timeLattice":[[0]],"freqLattice":[[0]],"tasks":["completeness"]}"#,
        );
        let out = sweep_resolved(&rs).unwrap();
        assert!(out.all_pass);
        assert_eq!(out.summary_lines.len(), 1);
        let sweep_line = &out.summary_lines[0];
        assert!(
            sweep_line.contains("bound 1/d = 0.25"),
            "one atom in dimension 4: {sweep_line}"
        );
        // One atom spans a line in dimension 4: the sweep tops out at 1/4.
        let last_row = out.csv.lines().last().unwrap();
        let psi: f64 = last_row.split(',').nth(2).unwrap().parse().unwrap();
        assert!((psi - 0.25).abs() <= 1e-6, "psi {psi}");
    }

    #[test]
    fn enumerate_lists_the_z4_subgroups_with_annihilators() {
        let v = enumerate_listing(&[4]).unwrap();
        assert_eq!(v["count"], json!(3));
        let subs = v["subgroups"].as_array().unwrap();
        let orders: Vec<u64> = subs.iter().map(|s| s["order"].as_u64().unwrap()).collect();
        assert_eq!(orders, vec![1, 2, 4]);
        // {0} -> full dual, {0,2} -> {0,2}, G -> {0}.
        assert_eq!(subs[0]["annihilator"]["order"], json!(4));
        assert_eq!(
            subs[1]["annihilator"]["elements"],
            json!([[0], [2]])
        );
        assert_eq!(subs[2]["annihilator"]["order"], json!(1));

        assert_eq!(enumerate_listing(&[1]).unwrap()["count"], json!(1));
        assert_eq!(enumerate_listing(&[2, 2]).unwrap()["count"], json!(5));
        assert!(enumerate_listing(&[128]).is_err(), "exhaustive cap");
    }

    #[test]
    fn values_window_runs_and_density_task_reports_exact_ratio() {
        let rs = resolved(
            r#"{"group":[2],"window":{"kind":"values","values":[[1.0,0.0],[0.0,1.0]]},"timeLattice":[[1]],"freqLattice":[[0]],"tasks":["density"]}"#,
        );
        let report = run_spec_resolved(&rs);
        assert!(report.all_pass());
        assert_eq!(report.cases[0].payload["density"], json!([1, 1]));
        assert_eq!(report.cases[0].payload["complete"], json!(true));
    }
}
