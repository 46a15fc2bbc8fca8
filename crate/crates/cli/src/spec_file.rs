//! Problem-spec files.
//!
//! A spec file is a list of `[section]` headers followed by `key = value`
//! lines. Blank lines and lines starting with `#` are ignored. Values are
//! plain numbers, complex pairs `re,im`, number lists `a, b, c`, or knot
//! lists `s:re,im; s:re,im`.
//!
//! ```text
//! [coefficient]
//! kind = phase_arc
//! theta0 = 0
//! theta1 = 1.5707963267948966
//! ramp_start = 1
//! ramp_end = 2
//!
//! [phi]
//! kind = gaussian
//! a = 1
//!
//! [source]
//! kind = zero
//! ```
//!
//! Sections `[hoelder]`, `[grid]`, `[tolerances]` and `[verify]` are optional.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use degenheat_core::coefficients::CoefficientProfile;
use degenheat_core::solver::{
    Axis, DataFn, DuhamelForm, GridSpec, HoelderParams, ProblemSpec, Source, Tolerances,
};
use degenheat_core::verify::{manufacture, ExactField};
use num_complex::Complex64;

use crate::error::CliError;

const SECTIONS: [&str; 7] = ["coefficient", "phi", "source", "hoelder", "grid", "tolerances", "verify"];

/// Settings of the `verify` command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    pub half_width: f64,
    pub dt: f64,
    pub dx: f64,
    pub residual_max: f64,
    pub oracle_max: f64,
    pub mms_max: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            half_width: 12.0,
            dt: 1e-3,
            dx: 0.02,
            residual_max: 1e-3,
            oracle_max: 1e-4,
            mms_max: 1e-5,
        }
    }
}

pub fn default_grid() -> GridSpec {
    GridSpec {
        t: Axis {
            start: 0.1,
            end: 1.0,
            count: 5,
        },
        x: Axis {
            start: -4.0,
            end: 4.0,
            count: 41,
        },
    }
}

/// Everything a spec file describes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub problem: ProblemSpec,
    pub grid: GridSpec,
    pub verify: VerifySettings,
}

type Section = BTreeMap<String, (usize, String)>;

struct Reader {
    sections: BTreeMap<String, Section>,
}

fn perr(key: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        key: key.into(),
        message: msg.into(),
    }
}

impl Reader {
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut sections: BTreeMap<String, Section> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| perr(format!("line {line_no}"), "unterminated section header"))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(perr(name, format!("unknown section (line {line_no})")));
                }
                if sections.contains_key(name) {
                    return Err(perr(name, format!("duplicate section (line {line_no})")));
                }
                sections.insert(name.to_string(), Section::new());
                current = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(perr(format!("line {line_no}"), "expected `key = value`"));
            };
            let Some(section) = &current else {
                return Err(perr(key.trim(), format!("key outside of any section (line {line_no})")));
            };
            let key = key.trim().to_string();
            let entry = sections.get_mut(section).unwrap();
            if entry.contains_key(&key) {
                return Err(perr(format!("{section}.{key}"), "duplicate key"));
            }
            entry.insert(key, (line_no, value.trim().to_string()));
        }
        Ok(Reader { sections })
    }

    fn section(&mut self, name: &str) -> Option<SectionReader> {
        self.sections.remove(name).map(|entries| SectionReader {
            name: name.to_string(),
            entries,
        })
    }

    fn required(&mut self, name: &str) -> Result<SectionReader, CliError> {
        self.section(name)
            .ok_or_else(|| perr(name, "missing required section"))
    }
}

struct SectionReader {
    name: String,
    entries: Section,
}

impl SectionReader {
    fn path(&self, key: &str) -> String {
        format!("{}.{}", self.name, key)
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|v| v.1)
    }

    fn req(&mut self, key: &str) -> Result<String, CliError> {
        self.take(key)
            .ok_or_else(|| perr(self.path(key), "missing required key"))
    }

    fn real(&mut self, key: &str) -> Result<f64, CliError> {
        let v = self.req(key)?;
        parse_real(&v).map_err(|m| perr(self.path(key), m))
    }

    fn opt_real(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => parse_real(&v).map(Some).map_err(|m| perr(self.path(key), m)),
        }
    }

    fn complex(&mut self, key: &str) -> Result<Complex64, CliError> {
        let v = self.req(key)?;
        parse_complex(&v).map_err(|m| perr(self.path(key), m))
    }

    fn reals(&mut self, key: &str) -> Result<Vec<f64>, CliError> {
        let v = self.req(key)?;
        v.split(',')
            .map(parse_real)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|m| perr(self.path(key), m))
    }

    fn knots(&mut self, key: &str) -> Result<Vec<(f64, Complex64)>, CliError> {
        let v = self.req(key)?;
        let path = self.path(key);
        v.split(';')
            .map(|item| {
                let (s, val) = item
                    .split_once(':')
                    .ok_or_else(|| perr(&path, format!("knot `{}` is not `s:re,im`", item.trim())))?;
                let s = parse_real(s).map_err(|m| perr(&path, m))?;
                let val = parse_complex(val).map_err(|m| perr(&path, m))?;
                Ok((s, val))
            })
            .collect()
    }

    /// Rejects whatever keys are left.
    fn finish(self) -> Result<(), CliError> {
        match self.entries.into_iter().next() {
            Some((key, (line, _))) => Err(perr(
                format!("{}.{}", self.name, key),
                format!("unknown key (line {line})"),
            )),
            None => Ok(()),
        }
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_real(re)?, parse_real(im)?)),
        None => Ok(Complex64::new(parse_real(s)?, 0.0)),
    }
}

fn parse_axis(path: &str, s: &str) -> Result<Axis, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(perr(path, format!("`{s}` is not `start:end:count`")));
    }
    let start = parse_real(parts[0]).map_err(|m| perr(path, m))?;
    let end = parse_real(parts[1]).map_err(|m| perr(path, m))?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| perr(path, format!("`{}` is not a count", parts[2].trim())))?;
    Axis::new(start, end, count).map_err(|e| perr(path, e.to_string()))
}

/// Parses `T0:T1:NT,X0:X1:NX`.
pub fn parse_grid_override(s: &str) -> Result<GridSpec, CliError> {
    let (t, x) = s
        .split_once(',')
        .ok_or_else(|| perr("--grid", format!("`{s}` is not `T0:T1:NT,X0:X1:NX`")))?;
    let t = parse_axis("--grid", t)?;
    let x = parse_axis("--grid", x)?;
    GridSpec::new(t, x).map_err(|e| perr("--grid", e.to_string()))
}

fn parse_coefficient(mut s: SectionReader) -> Result<CoefficientProfile, CliError> {
    let kind = s.req("kind")?;
    let path = s.path("kind");
    let profile = match kind.as_str() {
        "constant" => CoefficientProfile::constant(s.complex("value")?),
        "phase_arc" => {
            let theta0 = s.real("theta0")?;
            let theta1 = s.real("theta1")?;
            let a = s.real("ramp_start")?;
            let b = s.real("ramp_end")?;
            CoefficientProfile::phase_arc(theta0, theta1, a, b)
        }
        "rational" => {
            let num = s.reals("numerator")?;
            let den = s.reals("denominator")?;
            CoefficientProfile::rational(num, den)
        }
        "table" => CoefficientProfile::table(s.knots("knots")?),
        other => return Err(perr(path, format!("unknown profile kind `{other}`"))),
    }
    .map_err(|e| perr(&path, e.to_string()))?;
    s.finish()?;
    Ok(profile)
}

enum DataSpec {
    Plain(DataFn),
    Mms(ExactField),
}

fn parse_data(mut s: SectionReader) -> Result<DataSpec, CliError> {
    let kind = s.req("kind")?;
    let path = s.path("kind");
    let data = match kind.as_str() {
        "zero" => DataSpec::Plain(DataFn::Zero),
        "const" => DataSpec::Plain(DataFn::Const(s.complex("value")?)),
        "gaussian" => {
            let a = s.real("a")?;
            DataSpec::Plain(DataFn::gaussian(a).map_err(|e| perr(s.path("a"), e.to_string()))?)
        }
        "sine" => DataSpec::Plain(DataFn::Sine { k: s.real("k")? }),
        "sech" => DataSpec::Plain(DataFn::Sech),
        "table" => {
            let knots = s.knots("knots")?;
            DataSpec::Plain(DataFn::table(knots).map_err(|e| perr(s.path("knots"), e.to_string()))?)
        }
        "mms" => {
            let name = s.req("field")?;
            DataSpec::Mms(ExactField::from_name(&name).map_err(|e| perr(s.path("field"), e.to_string()))?)
        }
        other => return Err(perr(path, format!("unknown data kind `{other}`"))),
    };
    s.finish()?;
    Ok(data)
}

pub fn parse_spec_str(text: &str) -> Result<SpecFile, CliError> {
    let mut r = Reader::parse(text)?;
    let coefficient = parse_coefficient(r.required("coefficient")?)?;
    let phi = match parse_data(r.required("phi")?)? {
        DataSpec::Plain(d) => d,
        DataSpec::Mms(field) => field.initial(),
    };
    let source = match parse_data(r.required("source")?)? {
        DataSpec::Plain(d) => Source::Static(d),
        DataSpec::Mms(field) => manufacture(field, &coefficient).source,
    };
    let mut problem = ProblemSpec::new(coefficient, phi, source);

    if let Some(mut s) = r.section("hoelder") {
        let b = s.real("b")?;
        let alpha = s.real("alpha")?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(perr(
                "hoelder.alpha",
                format!("{alpha} violates the Hoelder exponent bound 0 < alpha <= 1"),
            ));
        }
        problem.hoelder = Some(HoelderParams::new(b, alpha).map_err(|e| perr("hoelder.b", e.to_string()))?);
        s.finish()?;
    }

    let mut grid = default_grid();
    if let Some(mut s) = r.section("grid") {
        if let Some(t) = s.take("t") {
            grid.t = parse_axis("grid.t", &t)?;
        }
        if let Some(x) = s.take("x") {
            grid.x = parse_axis("grid.x", &x)?;
        }
        s.finish()?;
    }
    let grid = GridSpec::new(grid.t, grid.x).map_err(|e| perr("grid.t", e.to_string()))?;

    if let Some(mut s) = r.section("tolerances") {
        let tol = &mut problem.tolerances;
        let fields: [(&str, &mut f64); 5] = [
            ("quad", &mut tol.quad),
            ("rho_min", &mut tol.rho_min),
            ("eps_split", &mut tol.eps_split),
            ("tail", &mut tol.tail),
            ("omega", &mut tol.omega),
        ];
        for (key, slot) in fields {
            if let Some(v) = s.opt_real(key)? {
                *slot = v;
            }
        }
        if let Some(form) = s.take("duhamel_form") {
            problem.duhamel_form = DuhamelForm::parse(&form)
                .ok_or_else(|| perr("tolerances.duhamel_form", format!("`{form}` is not paper|corrected")))?;
        }
        s.finish()?;
        problem
            .tolerances
            .validate()
            .map_err(|e| perr("tolerances", e.to_string()))?;
    }

    let mut verify = VerifySettings::default();
    if let Some(mut s) = r.section("verify") {
        let fields: [(&str, &mut f64); 6] = [
            ("half_width", &mut verify.half_width),
            ("dt", &mut verify.dt),
            ("dx", &mut verify.dx),
            ("residual_max", &mut verify.residual_max),
            ("oracle_max", &mut verify.oracle_max),
            ("mms_max", &mut verify.mms_max),
        ];
        for (key, slot) in fields {
            if let Some(v) = s.opt_real(key)? {
                if !(v > 0.0) {
                    return Err(perr(format!("verify.{key}"), "must be positive"));
                }
                *slot = v;
            }
        }
        s.finish()?;
    }

    Ok(SpecFile {
        problem,
        grid,
        verify,
    })
}

pub fn parse_spec(path: &Path) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    parse_spec_str(&text)
}

/// Shortest text that parses back to the same `f64`.
pub fn fmt_real(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e15) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn fmt_complex(c: Complex64) -> String {
    format!("{},{}", fmt_real(c.re), fmt_real(c.im))
}

fn fmt_knots(knots: &[(f64, Complex64)]) -> String {
    knots
        .iter()
        .map(|(s, v)| format!("{}:{}", fmt_real(*s), fmt_complex(*v)))
        .collect::<Vec<_>>()
        .join("; ")
}

fn fmt_axis(a: &Axis) -> String {
    format!("{}:{}:{}", fmt_real(a.start), fmt_real(a.end), a.count)
}

fn write_data(out: &mut String, d: &DataFn) {
    let _ = writeln!(out, "kind = {}", d.name());
    match d {
        DataFn::Const(c) => {
            let _ = writeln!(out, "value = {}", fmt_complex(*c));
        }
        DataFn::Gaussian { a } => {
            let _ = writeln!(out, "a = {}", fmt_real(*a));
        }
        DataFn::Sine { k } => {
            let _ = writeln!(out, "k = {}", fmt_real(*k));
        }
        DataFn::Table(knots) => {
            let _ = writeln!(out, "knots = {}", fmt_knots(knots));
        }
        DataFn::Zero | DataFn::Sech => {}
    }
}

/// Canonical text of a spec. With `full = false`, optional sections equal
/// to their defaults are left out.
pub fn render_spec(spec: &SpecFile, full: bool) -> String {
    let p = &spec.problem;
    let mut out = String::new();
    out.push_str("[coefficient]\n");
    let _ = writeln!(out, "kind = {}", p.coefficient.kind_name());
    match &p.coefficient {
        CoefficientProfile::Constant(c) => {
            let _ = writeln!(out, "value = {}", fmt_complex(*c));
        }
        CoefficientProfile::PhaseArc {
            theta0,
            theta1,
            ramp_start,
            ramp_end,
        } => {
            let _ = writeln!(out, "theta0 = {}", fmt_real(*theta0));
            let _ = writeln!(out, "theta1 = {}", fmt_real(*theta1));
            let _ = writeln!(out, "ramp_start = {}", fmt_real(*ramp_start));
            let _ = writeln!(out, "ramp_end = {}", fmt_real(*ramp_end));
        }
        CoefficientProfile::Rational {
            numerator,
            denominator,
        } => {
            let list = |v: &[f64]| v.iter().map(|x| fmt_real(*x)).collect::<Vec<_>>().join(", ");
            let _ = writeln!(out, "numerator = {}", list(numerator));
            let _ = writeln!(out, "denominator = {}", list(denominator));
        }
        CoefficientProfile::Table(knots) => {
            let _ = writeln!(out, "knots = {}", fmt_knots(knots));
        }
    }

    // An MMS source implies the matching initial datum; keep the pairing visible.
    let mms_field = match &p.source {
        Source::Manufactured { field, .. } => Some(*field),
        Source::Static(_) => None,
    };
    out.push_str("\n[phi]\n");
    match mms_field {
        Some(field) if field.initial() == p.phi => {
            let _ = writeln!(out, "kind = mms\nfield = {}", field.name());
        }
        _ => write_data(&mut out, &p.phi),
    }
    out.push_str("\n[source]\n");
    match (&p.source, mms_field) {
        (_, Some(field)) => {
            let _ = writeln!(out, "kind = mms\nfield = {}", field.name());
        }
        (Source::Static(d), None) => write_data(&mut out, d),
        _ => unreachable!(),
    }

    if let Some(h) = p.hoelder {
        let _ = write!(out, "\n[hoelder]\nb = {}\nalpha = {}\n", fmt_real(h.b), fmt_real(h.alpha));
    }
    if full || spec.grid != default_grid() {
        let _ = write!(
            out,
            "\n[grid]\nt = {}\nx = {}\n",
            fmt_axis(&spec.grid.t),
            fmt_axis(&spec.grid.x)
        );
    }
    if full || p.tolerances != Tolerances::default() || p.duhamel_form != DuhamelForm::default() {
        let t = &p.tolerances;
        let _ = write!(
            out,
            "\n[tolerances]\nquad = {}\nrho_min = {}\neps_split = {}\ntail = {}\nomega = {}\nduhamel_form = {}\n",
            fmt_real(t.quad),
            fmt_real(t.rho_min),
            fmt_real(t.eps_split),
            fmt_real(t.tail),
            fmt_real(t.omega),
            p.duhamel_form.name()
        );
    }
    if full || spec.verify != VerifySettings::default() {
        let v = &spec.verify;
        let _ = write!(
            out,
            "\n[verify]\nhalf_width = {}\ndt = {}\ndx = {}\nresidual_max = {}\noracle_max = {}\nmms_max = {}\n",
            fmt_real(v.half_width),
            fmt_real(v.dt),
            fmt_real(v.dx),
            fmt_real(v.residual_max),
            fmt_real(v.oracle_max),
            fmt_real(v.mms_max)
        );
    }
    out
}
