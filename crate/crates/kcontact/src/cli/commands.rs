//! The four subcommands as library functions returning serialisable reports.

use super::config::Plan;
use crate::corpus::{
    self, CaseKind, CorpusSection, ExampleSystem, ExpectedCase, GaugeSel, SectionKind, Verdict,
};
use crate::error::{Error, Result};
use crate::geometry::{chi_null_deficiency, ChartSpec, DarbouxPoint};
use crate::grid::{GridSpec, SolutionMap};
use crate::hdw::{map_residual, Mode, Residual};
use crate::hj::{self, HjMode, Offender};
use crate::integrate::{end_to_end, PipelineOptions, PipelineSection, StageResult};
use crate::sampling::SampleBox;
use serde::Serialize;
use std::fmt::Write as _;

/// Bound on the family inverse round trip.
pub const ROUNDTRIP_TOL: f64 = 1e-12;

/// Error details embedded in a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub stage: Option<String>,
    pub message: String,
    pub exit_code: i32,
}

impl ErrorInfo {
    pub fn from_error(e: &Error) -> ErrorInfo {
        let stage = match e {
            Error::Stage { stage, .. } => Some(stage.to_string()),
            _ => None,
        };
        ErrorInfo {
            stage,
            message: e.to_string(),
            exit_code: e.exit_code(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyRow {
    pub lambda: Vec<f64>,
    pub residual: f64,
    pub pass: bool,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyTable {
    pub params: Vec<String>,
    pub rows: Vec<FamilyRow>,
    pub roundtrip: Option<f64>,
    pub roundtrip_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckHjReport {
    pub example: String,
    pub section: String,
    pub mode: Mode,
    pub hj_mode: Option<HjMode>,
    pub gauge: Option<String>,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub sup_residual: Option<f64>,
    pub verdict: Verdict,
    pub worst: Vec<Offender>,
    pub family: Option<FamilyTable>,
    pub error: Option<ErrorInfo>,
}

impl CheckHjReport {
    pub fn exit_code(&self) -> i32 {
        match (&self.error, self.verdict) {
            (Some(e), _) => e.exit_code,
            (None, Verdict::Pass) => 0,
            (None, Verdict::Fail) => 1,
        }
    }
}

fn section_key(plan: &Plan) -> Result<&str> {
    plan.section.as_deref().ok_or_else(|| {
        Error::Config("no section given (use --set section=KEY or [section] key)".into())
    })
}

/// Run the Hamilton-Jacobi check of the configured section.
///
/// Contract-level failures (no admissible gauge matrix, trace violation,
/// non-holonomic section) come back as a FAIL report carrying the error.
pub fn check_hj(plan: &Plan) -> Result<CheckHjReport> {
    let ex = &plan.example;
    let key = section_key(plan)?;
    let info = ex.section_info(key)?.clone();
    let mut rep = CheckHjReport {
        example: ex.key.into(),
        section: key.into(),
        mode: plan.mode,
        hj_mode: None,
        gauge: None,
        seed: plan.seed,
        samples: 0,
        tolerance: plan.tol,
        sup_residual: None,
        verdict: Verdict::Fail,
        worst: Vec::new(),
        family: None,
        error: None,
    };
    match run_hj(plan, key, &info, &mut rep) {
        Ok(()) => Ok(rep),
        Err(e) if e.exit_code() == 3 => {
            rep.error = Some(ErrorInfo::from_error(&e));
            Ok(rep)
        }
        Err(e) => Err(e),
    }
}

fn run_hj(
    plan: &Plan,
    key: &str,
    info: &corpus::SectionInfo,
    rep: &mut CheckHjReport,
) -> Result<()> {
    let ex = &plan.example;
    let h = ex
        .hamiltonian(&plan.params)
        .map_err(|e| e.at("hamiltonian"))?;
    let bx = ex.sample_box(key, &plan.params)?;
    if info.kind == SectionKind::Family && plan.gauge == GaugeSel::Auto {
        let fam = ex.family(key, &plan.params).map_err(|e| e.at("section"))?;
        let base = bx.tensor_grid(plan.base_per_dim);
        let lam = ex.family_box(key).tensor_grid(plan.family_per_dim);
        let r = hj::verify_complete(fam.as_ref(), &h, plan.mode, &lam, &base, plan.tol)
            .map_err(|e| e.at("hj"))?;
        let rt_ok = r.roundtrip.is_none_or(|v| v <= ROUNDTRIP_TOL);
        rep.hj_mode = Some(r.hj.mode);
        rep.gauge = r.hj.gauge.clone();
        rep.samples = r.hj.sample_count;
        rep.sup_residual = Some(r.hj.sup_residual);
        rep.worst = r.hj.worst.clone();
        rep.verdict = Verdict::from_pass(r.hj.passes(plan.tol) && r.failing.is_empty() && rt_ok);
        rep.family = Some(FamilyTable {
            params: info.family_params.iter().map(|s| s.to_string()).collect(),
            rows: r
                .per_param
                .iter()
                .map(|p| FamilyRow {
                    lambda: p.lambda.clone(),
                    residual: p.residual,
                    pass: p.residual <= plan.tol,
                    message: p.message.clone(),
                })
                .collect(),
            roundtrip: r.roundtrip,
            roundtrip_tol: ROUNDTRIP_TOL,
        });
        return Ok(());
    }
    let samples = bx.uniform(plan.samples, plan.seed);
    let sec = ex
        .section(key, &plan.params, plan.mode, plan.gauge)
        .map_err(|e| e.at("section"))?;
    let r = match &sec {
        CorpusSection::ZInd(g) => hj::hj_zind(&h, g, plan.mode, &samples),
        CorpusSection::ZDep(g, c) => hj::hj_zdep_residual(&h, g, c, plan.mode, &samples),
    }
    .map_err(|e| e.at("hj"))?;
    rep.hj_mode = Some(r.mode);
    rep.gauge = r.gauge.clone();
    rep.samples = r.sample_count;
    rep.sup_residual = Some(r.sup_residual);
    rep.worst = r.worst.clone();
    rep.verdict = Verdict::from_pass(r.passes(plan.tol));
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThermoSummary {
    pub constitutive: f64,
    pub balance: f64,
    pub entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulateReport {
    pub example: String,
    pub mode: Mode,
    pub seed: u64,
    pub section: Option<String>,
    pub solution: String,
    pub gauge: Option<String>,
    pub grid: GridSpec,
    pub stages: Vec<StageResult>,
    pub max_r_q: Option<f64>,
    pub max_r_p: Option<f64>,
    pub max_r_z: Option<f64>,
    pub map_tol: f64,
    /// max |q_num - q_closed| over the grid.
    pub closed_form_error: Option<f64>,
    /// Same over every phase-space coordinate.
    pub state_error: Option<f64>,
    pub closed_tol: f64,
    pub pde_residual: Option<f64>,
    pub pde_tol: f64,
    pub thermo: Option<ThermoSummary>,
    pub warnings: Vec<String>,
    pub verdict: Verdict,
    pub error: Option<ErrorInfo>,
}

impl SimulateReport {
    pub fn exit_code(&self) -> i32 {
        match (&self.error, self.verdict) {
            (Some(e), _) => e.exit_code,
            (None, Verdict::Pass) => 0,
            (None, Verdict::Fail) => 1,
        }
    }
}

/// Simulation result: report plus the map and residuals for the CSV.
#[derive(Clone, Debug)]
pub struct SimulateOutput {
    pub report: SimulateReport,
    pub map: Option<SolutionMap>,
    pub residuals: Vec<Residual>,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, &x| {
        if x.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(x.abs())
        }
    })
}

/// With a section: HJ check, integration, lift and residuals, compared against
/// the named closed form. Without one: residuals of the closed form itself.
pub fn simulate(plan: &Plan) -> Result<SimulateOutput> {
    let ex = &plan.example;
    let sol = plan.solution.as_deref().ok_or_else(|| {
        Error::Config("simulate needs a reference solution (use --set solution=KEY)".into())
    })?;
    let grid = match &plan.grid {
        Some(g) => g.clone(),
        None => ex.default_grid(sol)?,
    };
    let mut out = SimulateOutput {
        report: SimulateReport {
            example: ex.key.into(),
            mode: plan.mode,
            seed: plan.seed,
            section: plan.section.clone(),
            solution: sol.into(),
            gauge: None,
            grid: grid.clone(),
            stages: Vec::new(),
            max_r_q: None,
            max_r_p: None,
            max_r_z: None,
            map_tol: plan.map_tol,
            closed_form_error: None,
            state_error: None,
            closed_tol: plan.closed_tol,
            pde_residual: None,
            pde_tol: plan.pde_tol,
            thermo: None,
            warnings: Vec::new(),
            verdict: Verdict::Fail,
            error: None,
        },
        map: None,
        residuals: Vec::new(),
    };
    match run_simulate(plan, sol, &grid, &mut out) {
        Ok(()) => Ok(out),
        Err(e) if matches!(e.exit_code(), 3..=5) => {
            out.report.error = Some(ErrorInfo::from_error(&e));
            out.report.verdict = Verdict::Fail;
            Ok(out)
        }
        Err(e) => Err(e),
    }
}

fn run_simulate(plan: &Plan, sol: &str, grid: &GridSpec, out: &mut SimulateOutput) -> Result<()> {
    let ex = &plan.example;
    let h = ex
        .hamiltonian(&plan.params)
        .map_err(|e| e.at("hamiltonian"))?;
    let reference = ex
        .solution_map(sol, &plan.params, plan.mode, Some(grid.clone()))
        .map_err(|e| e.at("solution"))?;
    let chart = ex.chart;
    let rep = &mut out.report;
    let Some(key) = plan.section.as_deref() else {
        let res = map_residual(&reference, &h, plan.mode).map_err(|e| e.at("map_residual"))?;
        let sup = Residual::sup(&res);
        rep.max_r_q = Some(sup.r_q);
        rep.max_r_p = Some(sup.r_p);
        rep.max_r_z = Some(sup.r_z);
        let mut pass = sup.max() <= plan.map_tol;
        if let Some(pde) = ex.pde_residual(&plan.params, &reference)? {
            let m = max_abs(&pde);
            rep.pde_residual = Some(m);
            pass &= m <= plan.pde_tol;
        }
        if ex.key == "thermo-eit" {
            let fields = corpus::ThermoFields::from_map(&reference)?;
            let t = corpus::thermo_balance_residual(&fields, &h)?;
            rep.thermo = Some(ThermoSummary {
                constitutive: t.max_constitutive(),
                balance: t.max_balance(),
                entropy: t.max_entropy(plan.mode),
            });
        }
        rep.verdict = Verdict::from_pass(pass);
        out.residuals = res;
        out.map = Some(reference);
        return Ok(());
    };
    let sec = ex
        .section(key, &plan.params, plan.mode, plan.gauge)
        .map_err(|e| e.at("section"))?;
    let x0 = &reference.values[0];
    let n = chart.n;
    let (pipeline, start) = match sec {
        CorpusSection::ZInd(g) => (PipelineSection::ZInd(g), x0[..n].to_vec()),
        CorpusSection::ZDep(g, c) => {
            rep.gauge = Some(c.name.clone());
            let mut s = x0[..n].to_vec();
            s.extend((0..chart.k).map(|a| x0[chart.z_index(a)]));
            (PipelineSection::ZDep(g, Some(c)), s)
        }
    };
    let opts = PipelineOptions {
        hj_tol: plan.tol,
        map_tol: plan.map_tol,
        steps_per_cell: plan.steps_per_cell,
        samples: ex
            .sample_box(key, &plan.params)?
            .uniform(plan.samples, plan.seed),
    };
    let r = end_to_end(&h, &pipeline, plan.mode, grid, &start, &opts)?;
    rep.stages = r.stages.clone();
    rep.warnings = r.warnings.clone();
    let mut pass = r.pass;
    if let Some(lifted) = &r.lifted {
        let sup = Residual::sup(&r.residuals);
        rep.max_r_q = Some(sup.r_q);
        rep.max_r_p = Some(sup.r_p);
        rep.max_r_z = Some(sup.r_z);
        let mut q_err: f64 = 0.0;
        let mut s_err: f64 = 0.0;
        for (a, b) in lifted.values.iter().zip(&reference.values) {
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                let d = (x - y).abs();
                s_err = s_err.max(d);
                if i < n {
                    q_err = q_err.max(d);
                }
            }
        }
        rep.closed_form_error = Some(q_err);
        rep.state_error = Some(s_err);
        pass &= q_err <= plan.closed_tol;
        if let Some(pde) = ex.pde_residual(&plan.params, lifted)? {
            rep.pde_residual = Some(max_abs(&pde));
        }
        out.map = Some(lifted.clone());
        out.residuals = r.residuals.clone();
    }
    rep.verdict = Verdict::from_pass(pass);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeReport {
    pub n: usize,
    pub k: usize,
    pub analytic: usize,
    pub numeric: Vec<usize>,
    pub seed: u64,
    pub verdict: Verdict,
}

impl GaugeReport {
    pub fn line(&self) -> String {
        let num = self.numeric.iter().max().copied().unwrap_or(0);
        format!(
            "n={} k={}: analytic {} / numeric {} {}",
            self.n, self.k, self.analytic, num, self.verdict
        )
    }
}

/// Compare the kernel dimension of chi at `points` random points with (n+1)(k^2-1).
pub fn gauge_check(n: usize, k: usize, points: usize, seed: u64) -> Result<GaugeReport> {
    let chart = ChartSpec::new(n, k).map_err(|e| Error::Config(e.to_string()))?;
    let pts = SampleBox::cube(chart.dim(), -2.0, 2.0).uniform(points.max(1), seed);
    let numeric = pts
        .iter()
        .map(|x| chi_null_deficiency(chart, &DarbouxPoint::from_flat(chart, x)?))
        .collect::<Result<Vec<_>>>()?;
    let analytic = chart.gauge_dimension();
    Ok(GaugeReport {
        n,
        k,
        analytic,
        verdict: Verdict::from_pass(numeric.iter().all(|&d| d == analytic)),
        numeric,
        seed,
    })
}

/// Registry listing, optionally restricted to one example.
pub fn list_text(filter: Option<&str>) -> Result<String> {
    let examples: Vec<ExampleSystem> = match filter {
        Some(k) => vec![corpus::load(k)?],
        None => corpus::all(),
    };
    let mut s = String::new();
    for ex in &examples {
        let _ = writeln!(
            s,
            "{} (n={}, k={}): {}",
            ex.key, ex.chart.n, ex.chart.k, ex.title
        );
        for sec in &ex.sections {
            let kind = match sec.kind {
                SectionKind::ZInd => "z-independent",
                SectionKind::ZDep => "z-dependent",
                SectionKind::Family => "complete family",
            };
            let _ = writeln!(
                s,
                "  section  {:<16} {:<16} {}",
                sec.key, kind, sec.description
            );
        }
        for sol in &ex.solutions {
            let modes: Vec<String> = sol.modes.iter().map(|m| m.to_string()).collect();
            let _ = writeln!(
                s,
                "  solution {:<16} {:<16} {}",
                sol.key,
                modes.join("+"),
                sol.description
            );
        }
        if filter.is_some() {
            let _ = writeln!(s, "  parameters:");
            for (k, v) in &ex.defaults {
                let _ = writeln!(s, "    {k} = {v}");
            }
            for c in &ex.cases {
                let _ = writeln!(
                    s,
                    "  case     {:<34} expect {} (exit {})",
                    c.name, c.verdict, c.exit_code
                );
            }
        }
    }
    Ok(s)
}

/// Verdict and exit code of one run, with its JSON report.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub exit_code: i32,
    pub report: serde_json::Value,
}

/// Execute a corpus case exactly as the CLI would.
pub fn run_case(ex: &ExampleSystem, case: &ExpectedCase, seed: u64) -> Result<Outcome> {
    let plan = Plan::for_case(ex, case, seed)?;
    match case.kind {
        CaseKind::CheckHj => {
            let r = check_hj(&plan)?;
            Ok(Outcome {
                verdict: r.verdict,
                exit_code: r.exit_code(),
                report: serde_json::to_value(&r).map_err(|e| Error::Io(e.to_string()))?,
            })
        }
        CaseKind::Simulate | CaseKind::Solution => {
            let r = simulate(&plan)?.report;
            Ok(Outcome {
                verdict: r.verdict,
                exit_code: r.exit_code(),
                report: serde_json::to_value(&r).map_err(|e| Error::Io(e.to_string()))?,
            })
        }
    }
}
