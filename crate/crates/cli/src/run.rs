//! The four commands and the files they write.

use std::path::{Path, PathBuf};

use degenheat_core::coefficients::{check_conditions, lemma_report, ConditionReport, LemmaReport, OmegaCache};
use degenheat_core::solver::{DuhamelForm, GridSpec, ProblemSpec, SolutionField, Solver, Source};
use degenheat_core::verify::{cn_oracle, compare_fields, fd_residual, initial_check, CnConfig, ExactField};
use degenheat_core::Error as CoreError;

use crate::error::CliError;
use crate::report::{Cell, Format, Table};
use crate::spec_file::{parse_spec, render_spec, SpecFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Check,
    Solve,
    Verify,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub spec: PathBuf,
    pub out: PathBuf,
    pub format: Format,
    pub grid: Option<GridSpec>,
    pub tol: Option<f64>,
    pub rho_min: Option<f64>,
    pub eps_split: Option<f64>,
    pub duhamel_form: Option<DuhamelForm>,
}

impl RunConfig {
    pub fn new(command: Command, spec: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            spec: spec.into(),
            out: out.into(),
            format: Format::Csv,
            grid: None,
            tol: None,
            rho_min: None,
            eps_split: None,
            duhamel_form: None,
        }
    }

    /// Parses the spec file and applies the command-line overrides.
    pub fn load(&self) -> Result<SpecFile, CliError> {
        let mut spec = parse_spec(&self.spec)?;
        if let Some(g) = self.grid {
            spec.grid = g;
        }
        let tol = &mut spec.problem.tolerances;
        if let Some(v) = self.tol {
            tol.quad = v;
        }
        if let Some(v) = self.rho_min {
            tol.rho_min = v;
        }
        if let Some(v) = self.eps_split {
            tol.eps_split = v;
        }
        tol.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(f) = self.duhamel_form {
            spec.problem.duhamel_form = f;
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub passed: bool,
    pub artifacts: Vec<PathBuf>,
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let spec = config.load()?;
    std::fs::create_dir_all(&config.out)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", config.out.display())))?;
    let mut out = Output {
        dir: &config.out,
        format: config.format,
        artifacts: Vec::new(),
    };
    let header = run_header(config, &spec);
    let path = config.out.join("run_header.txt");
    crate::report::write_file(&path, &header)?;
    out.artifacts.push(path);

    let passed = match config.command {
        Command::Check => check(&spec, &mut out)?,
        Command::Solve => solve(&spec, &mut out)?,
        Command::Verify => verify(&spec, &mut out)?,
        Command::Sweep => sweep(&spec, &mut out)?,
    };
    Ok(RunOutcome {
        passed,
        artifacts: out.artifacts,
    })
}

struct Output<'a> {
    dir: &'a Path,
    format: Format,
    artifacts: Vec<PathBuf>,
}

impl Output<'_> {
    fn write(&mut self, stem: &str, table: &Table) -> Result<(), CliError> {
        let path = table.write(self.dir, stem, self.format)?;
        self.artifacts.push(path);
        Ok(())
    }
}

fn run_header(config: &RunConfig, spec: &SpecFile) -> String {
    format!(
        "# degenheat {}\n# command = {}\n# format = {}\n{}",
        env!("CARGO_PKG_VERSION"),
        config.command.name(),
        config.format.extension(),
        render_spec(spec, true)
    )
}

// ---- check ----

const CONDITION_SAMPLES: usize = 512;

fn lemma_pairs(spec: &SpecFile) -> Vec<(f64, f64)> {
    spec.grid
        .t
        .values()
        .into_iter()
        .filter(|&t| t > 0.0)
        .flat_map(|t| [0.0, 0.25, 0.5, 0.75].map(|s| (t, s * t)))
        .collect()
}

pub fn conditions_table(r: &ConditionReport) -> Table {
    let mut t = Table::new(&["item", "pass", "value", "t", "t_end"]);
    let nan = f64::NAN;
    t.push(vec!["continuity".into(), r.continuous_ok.into(), r.residual_jump.into(), r.residual_jump_t.into(), nan.into()]);
    t.push(vec!["nonvanishing".into(), r.nonvanishing_ok.into(), r.min_modulus.into(), r.min_modulus_t.into(), nan.into()]);
    t.push(vec!["nonnegative_real_part".into(), r.repart_ok.into(), r.min_re_p.into(), r.min_re_p_t.into(), nan.into()]);
    t.push(vec!["re_p0".into(), (r.re_p0 > 0.0).into(), r.re_p0.into(), 0.0.into(), nan.into()]);
    t.push(vec![
        "p0_estimate".into(),
        r.p0_ok().into(),
        r.p0_estimate.unwrap_or(nan).into(),
        nan.into(),
        r.t_max.into(),
    ]);
    t.push(vec![
        "im_integral_range".into(),
        r.p0_ok().into(),
        r.im_integral_inf.unwrap_or(nan).into(),
        nan.into(),
        r.im_integral_sup.unwrap_or(nan).into(),
    ]);
    for s in &r.positive_segments {
        t.push(vec!["positive_segment".into(), true.into(), (s.end - s.start).into(), s.start.into(), s.end.into()]);
    }
    t.push(vec![
        "samples".into(),
        (!r.sampling_based || r.evaluated_samples >= r.requested_samples).into(),
        (r.evaluated_samples as f64).into(),
        0.0.into(),
        r.t_max.into(),
    ]);
    t
}

pub fn lemma_tables(r: &LemmaReport) -> (Table, Table) {
    let mut rows = Table::new(&[
        "t", "tau", "re_h", "im_h", "h_abs", "h_arg", "delta_margin", "lhs", "mid", "rhs",
        "identity_residual", "identity_holds", "interior_applicable", "anchored_applicable", "note",
    ]);
    for r in &r.rows {
        rows.push(vec![
            r.t.into(),
            r.tau.into(),
            r.h.re.into(),
            r.h.im.into(),
            r.h_abs.into(),
            r.h_arg.into(),
            r.delta_margin.into(),
            r.lhs.into(),
            r.mid.into(),
            r.rhs.into(),
            r.identity_residual().into(),
            r.identity_holds().into(),
            r.interior_applicable.into(),
            r.anchored_applicable.into(),
            r.note.clone().unwrap_or_default().into(),
        ]);
    }
    let mut origin = Table::new(&["t", "re_h1", "im_h1", "delta_margin", "lhs", "rhs", "note"]);
    for r in &r.origin_rows {
        origin.push(vec![
            r.t.into(),
            r.h1.re.into(),
            r.h1.im.into(),
            r.delta_margin.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.note.clone().unwrap_or_default().into(),
        ]);
    }
    (rows, origin)
}

fn check(spec: &SpecFile, out: &mut Output) -> Result<bool, CliError> {
    let p = &spec.problem;
    let conditions = check_conditions(&p.coefficient, spec.grid.t.end, CONDITION_SAMPLES);
    out.write("conditions", &conditions_table(&conditions))?;
    let cache = OmegaCache::with_tolerance(p.coefficient.clone(), p.tolerances.omega);
    let lemmas = lemma_report(&cache, &lemma_pairs(spec));
    let (rows, origin) = lemma_tables(&lemmas);
    out.write("lemmas", &rows)?;
    out.write("lemmas_origin", &origin)?;
    Ok(conditions.passes() && lemmas.identities_hold() && lemmas.margins_in_range())
}

// ---- solve ----

pub fn field_table(field: &SolutionField) -> Table {
    let mut t = Table::new(&["t", "x", "re_u", "im_u", "abs_u"]);
    for (tt, x, u) in field.iter() {
        t.push(vec![tt.into(), x.into(), u.re.into(), u.im.into(), u.norm().into()]);
    }
    t
}

fn solve(spec: &SpecFile, out: &mut Output) -> Result<bool, CliError> {
    let solver = Solver::new(spec.problem.clone())?;
    let field = solver.solve_grid(&spec.grid)?;
    out.write("field", &field_table(&field))?;
    Ok(field.is_finite())
}

// ---- verify ----

/// `t_k = 4^-k`, `k = 1..5`.
pub fn initial_times() -> Vec<f64> {
    (1..=5).map(|k| 4f64.powi(-k)).collect()
}

/// Initial trace passes when the distance to the datum shrinks monotonically
/// to at most 1% of its first value (or is negligible from the start).
pub const INITIAL_REDUCTION: f64 = 1e-2;

/// Exact field whose manufactured source and datum the problem uses, if any.
pub fn manufactured_field(p: &ProblemSpec) -> Option<ExactField> {
    match &p.source {
        Source::Manufactured { field, .. } if field.initial() == p.phi => Some(*field),
        _ => None,
    }
}

fn exact_on(field: ExactField, like: &SolutionField) -> SolutionField {
    let values = like.iter().map(|(t, x, _)| field.u(t, x)).collect();
    SolutionField::new(like.t_grid.clone(), like.x_grid.clone(), values, like.provenance.clone())
}

struct Verdict {
    check: &'static str,
    status: &'static str,
    value: f64,
    threshold: f64,
    detail: String,
}

impl Verdict {
    fn measured(check: &'static str, value: f64, threshold: f64, ok: bool, detail: String) -> Self {
        Verdict {
            check,
            status: if ok { "pass" } else { "fail" },
            value,
            threshold,
            detail,
        }
    }

    fn skipped(check: &'static str, detail: String) -> Self {
        Verdict {
            check,
            status: "skipped",
            value: f64::NAN,
            threshold: f64::NAN,
            detail,
        }
    }
}

fn oracle_config(spec: &SpecFile) -> CnConfig {
    let v = &spec.verify;
    CnConfig::new(v.half_width, v.dt, v.dx)
}

fn verify(spec: &SpecFile, out: &mut Output) -> Result<bool, CliError> {
    let p = &spec.problem;
    let v = &spec.verify;
    let field = Solver::new(p.clone())?.solve_grid(&spec.grid)?;
    let mut verdicts = Vec::new();

    match fd_residual(&field, p) {
        Ok(r) => {
            let mut rows = Table::new(&["t", "x", "abs_residual"]);
            for w in &r.rows {
                rows.push(vec![w.t.into(), w.x.into(), w.abs_residual.into()]);
            }
            out.write("residual", &rows)?;
            verdicts.push(Verdict::measured(
                "residual_sup",
                r.sup_norm,
                v.residual_max,
                r.sup_norm < v.residual_max,
                format!(
                    "l2 {} over {} points; dt in [{} {}]; dx in [{} {}]",
                    r.l2_norm, r.points, r.dt_min, r.dt_max, r.dx_min, r.dx_max
                ),
            ));
        }
        Err(CoreError::Domain(msg)) => verdicts.push(Verdict::skipped("residual_sup", msg)),
        Err(e) => return Err(e.into()),
    }

    let trace = initial_check(p, &initial_times(), &field.x_grid)?;
    let mut rows = Table::new(&["t", "sup_error"]);
    for &(t, e) in &trace.rows {
        rows.push(vec![t.into(), e.into()]);
    }
    out.write("initial_trace", &rows)?;
    let first = trace.rows[0].1;
    let negligible = first <= trace.slack;
    let reduction = trace.reduction();
    verdicts.push(Verdict::measured(
        "initial_trace",
        reduction,
        INITIAL_REDUCTION,
        trace.is_monotone() && (negligible || reduction <= INITIAL_REDUCTION),
        format!(
            "monotone {}; first {first}; last {}",
            trace.is_monotone(),
            trace.rows[trace.rows.len() - 1].1
        ),
    ));

    match cn_oracle(p, &spec.grid, oracle_config(spec)) {
        Ok(oracle) => {
            let d = compare_fields(&field, &oracle)?;
            verdicts.push(Verdict::measured(
                "oracle_sup",
                d.sup_norm,
                v.oracle_max,
                d.sup_norm <= v.oracle_max,
                format!("l2 {}; half_width {}; dt {}; dx {}", d.l2_norm, v.half_width, v.dt, v.dx),
            ));
        }
        Err(CoreError::DomainTooSmall(msg)) => verdicts.push(Verdict::skipped("oracle_sup", msg)),
        Err(e) => return Err(e.into()),
    }

    match manufactured_field(p) {
        Some(exact) => {
            let d = compare_fields(&field, &exact_on(exact, &field))?;
            verdicts.push(Verdict::measured(
                "mms_sup",
                d.sup_norm,
                v.mms_max,
                d.sup_norm <= v.mms_max,
                format!("field {}; l2 {}", exact.name(), d.l2_norm),
            ));
        }
        None => verdicts.push(Verdict::skipped("mms_sup", "no manufactured solution".into())),
    }

    let mut summary = Table::new(&["check", "status", "value", "threshold", "detail"]);
    for v in &verdicts {
        summary.push(vec![v.check.into(), v.status.into(), v.value.into(), v.threshold.into(), v.detail.clone().into()]);
    }
    out.write("verify", &summary)?;
    Ok(verdicts.iter().all(|v| v.status != "fail"))
}

// ---- sweep ----

pub const SWEEP_TOLERANCES: [f64; 3] = [1e-6, 1e-8, 1e-10];
const REFERENCE_TOL: f64 = 1e-12;

fn refined_x(grid: &GridSpec) -> GridSpec {
    let mut g = *grid;
    if g.x.count > 1 {
        g.x.count = 2 * g.x.count - 1;
    }
    g
}

fn reference(spec: &SpecFile, grid: &GridSpec) -> Result<(String, SolutionField), CliError> {
    let p = &spec.problem;
    if let Some(exact) = manufactured_field(p) {
        let shape = Solver::new(p.clone())?;
        let ts = grid.t.values();
        let xs = grid.x.values();
        let values = ts.iter().flat_map(|&t| xs.iter().map(move |&x| exact.u(t, x))).collect();
        return Ok((format!("exact:{}", exact.name()), SolutionField::new(ts, xs, values, shape.provenance())));
    }
    match cn_oracle(p, grid, oracle_config(spec)) {
        Ok(f) => Ok(("oracle".into(), f)),
        Err(CoreError::DomainTooSmall(_)) => {
            let mut tight = p.clone();
            tight.tolerances.quad = REFERENCE_TOL;
            Ok((format!("kernel:{REFERENCE_TOL:e}"), Solver::new(tight)?.solve_grid(grid)?))
        }
        Err(e) => Err(e.into()),
    }
}

fn sweep(spec: &SpecFile, out: &mut Output) -> Result<bool, CliError> {
    let mut table = Table::new(&[
        "quad_tol", "nt", "nx", "reference", "sup_error", "l2_error", "evaluations", "max_error_estimate",
    ]);
    let mut ok = true;
    for grid in [spec.grid, refined_x(&spec.grid)] {
        let (name, reference) = reference(spec, &grid)?;
        for tol in SWEEP_TOLERANCES {
            let mut p = spec.problem.clone();
            p.tolerances.quad = tol;
            let (field, details) = Solver::new(p)?.solve_grid_detail(&grid)?;
            let d = compare_fields(&field, &reference)?;
            let evaluations: usize = details.iter().map(|q| q.evaluations).sum();
            let est = details.iter().map(|q| q.error_estimate).fold(0.0, f64::max);
            ok &= d.sup_norm.is_finite();
            table.push(vec![
                tol.into(),
                grid.t.count.into(),
                grid.x.count.into(),
                Cell::Text(name.clone()),
                d.sup_norm.into(),
                d.l2_norm.into(),
                evaluations.into(),
                est.into(),
            ]);
        }
    }
    out.write("sweep", &table)?;
    Ok(ok)
}
