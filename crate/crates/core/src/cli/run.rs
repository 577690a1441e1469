//! Executes a session and assembles the JSON report (`pfaffkit.report/v1`).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value as Json};

use super::session::{Command, ComplexKind, ModuleDef, SessionSpec, Statement};
use crate::cohomology::{
  ce_complex, obstruction_scan, theorem1_compare, theorem1_compare_with, vertical_cohomology, xi0_module, CEModule,
  Candidate, Verdict,
};
use crate::error::{Error, Result};
use crate::group_action::{ActionSpec, SignConvention};
use crate::pfaffian::PfaffianSystem;
use crate::variational::{
  equivariant_complex, euler, invariant_complex, relative_invariance_check, BigradedForm, FoliatedModel, Truncation,
};

pub const SCHEMA: &str = "pfaffkit.report/v1";

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
  /// Replaces every `truncate` statement.
  pub truncation: Option<Truncation>,
}

/// The report of one session run.
#[derive(Clone, Debug)]
pub struct RunReport {
  pub json: Json,
  /// Commands that ended in an error object.
  pub errors: usize,
  /// `compare-theorem1` commands on the canonical `Ξ^0` module that came out unequal.
  pub theorem1_unequal: usize,
  /// One human-readable line per command.
  pub summary: Vec<String>,
}

impl RunReport {
  /// `0` on success; `1` when a command errored; `2` when `strict` and a
  /// canonical `compare-theorem1` command was unequal.
  pub fn exit_code(&self, strict: bool) -> i32 {
    if self.errors > 0 {
      1
    } else if strict && self.theorem1_unequal > 0 {
      2
    } else {
      0
    }
  }

  /// Pretty JSON followed by a newline.
  pub fn to_json_string(&self) -> String {
    let mut s = serde_json::to_string_pretty(&self.json).expect("report values serialize");
    s.push('\n');
    s
  }
}

fn error_kind(e: &Error) -> &'static str {
  match e {
    Error::UnknownCoordinate(_) => "unknown-coordinate",
    Error::UndeclaredDenominator(_) => "undeclared-denominator",
    Error::TrigOfFlat(_) => "trig-of-flat",
    Error::ChartMismatch(..) => "chart-mismatch",
    Error::InvalidChart(_) => "invalid-chart",
    Error::DegenerateSystem(_) => "degenerate-system",
    Error::NotComplementary(_) => "not-complementary",
    Error::LocalizationNeeded { .. } => "localization-needed",
    Error::NotTransverse(_) => "not-transverse",
    Error::ComplexViolation(_) => "complex-violation",
    Error::TruncationNotClosed(_) => "truncation-not-closed",
    Error::TruncationMismatch(_) => "truncation-mismatch",
    Error::NoAction => "no-action",
    Error::InvalidAlgebra(_) => "invalid-algebra",
    Error::InvalidModule(_) => "invalid-module",
    Error::InvalidArgument(_) => "invalid-argument",
  }
}

struct Runner<'a> {
  spec: &'a SessionSpec,
  truncation: Option<Truncation>,
  models: BTreeMap<String, Arc<FoliatedModel>>,
}

/// The foliated model whose vertical coordinates are the differentials
/// spanning `system` (each generator a multiple of one `dy`).
fn foliate(system: &PfaffianSystem) -> Result<Arc<FoliatedModel>> {
  let chart = system.chart();
  let mut vertical = Vec::new();
  for g in system.generators() {
    let mut keys = g.terms().keys();
    match (keys.next(), keys.next()) {
      (Some(idx), None) if idx.len() == 1 => vertical.push(idx[0] as usize),
      _ => {
        return Err(Error::InvalidArgument(format!(
          "generator `{g}` is not a multiple of a coordinate differential; the variational commands need a foliated chart"
        )))
      },
    }
  }
  let names = |keep: bool| -> Vec<&str> {
    chart.coords().iter().enumerate().filter(|(i, _)| vertical.contains(i) == keep).map(|(_, c)| c.name.as_str()).collect()
  };
  FoliatedModel::new(chart, &names(false), &names(true))
}

impl<'a> Runner<'a> {
  fn truncation(&self) -> Result<Truncation> {
    self.truncation.ok_or_else(|| Error::InvalidArgument("no truncation declared; add `truncate degree D freq K`".into()))
  }

  fn action(&self, name: &str) -> &'a ActionSpec { &self.spec.env.actions[name] }

  fn model(&mut self, action: &str) -> Result<Arc<FoliatedModel>> {
    if let Some(m) = self.models.get(action) {
      return Ok(m.clone());
    }
    let a = self.action(action);
    let m = foliate(&a.system)?.with_action(a.algebra.clone(), a.fields.clone())?;
    self.models.insert(action.to_string(), m.clone());
    Ok(m)
  }

  fn module(&mut self, name: &str) -> Result<CEModule> {
    let env = &self.spec.env;
    if let Some(g) = env.algebras.get(name) {
      return Ok(CEModule::trivial(g.clone(), 1));
    }
    match &env.modules[name] {
      ModuleDef::Explicit { algebra, dim, rho } => {
        let g = env.algebras[algebra].clone();
        let mut mats = vec![crate::exact_linalg::RationalMatrix::zeros(*dim, *dim); g.dim()];
        for (i, m) in rho {
          mats[*i] = m.clone();
        }
        CEModule::new(g, *dim, mats)
      },
      ModuleDef::Xi0 { action, shift } => {
        let t = self.truncation()?;
        let m = xi0_module(&self.model(action)?, t)?;
        Ok(match shift {
          Some((i, c)) => m.shifted(*i, c.clone()),
          None => m,
        })
      },
    }
  }

  fn exec(&mut self, c: &Command, unequal: &mut usize) -> Result<(Json, String)> {
    let env = &self.spec.env;
    Ok(match c {
      Command::CheckIntegrable(s) => {
        let sys = &env.systems[s];
        let w = sys.integrability_witness();
        let mut out = json!({ "check-integrable": w.is_none() });
        if let Some((k, form)) = &w {
          out["witness"] = json!({ "generator": k, "form": form.to_string() });
        }
        let verdict = if w.is_none() { "integrable" } else { "not integrable" };
        (out, format!("{s}: {verdict}"))
      },
      Command::CheckInvariant(s, w) => {
        let ok = env.systems[s].is_invariant_form(w)?;
        (json!({ "check-invariant": ok }), format!("{w} invariant for {s}: {ok}"))
      },
      Command::CheckAction(a) => {
        let spec = self.action(a);
        let r = spec.check_action()?;
        let t = spec.check_transversally_free();
        let out = json!({
          "check-action": r.all_hold(),
          "bracket-compatible": r.bracket_compatible,
          "jacobi": r.jacobi,
          "symmetries": r.symmetries,
          "transversally-free": t.holds(),
          "diagnostic": t.diagnostic,
        });
        (out, format!("{a}: action {}, transversally free {}", r.all_hold(), t.holds()))
      },
      Command::CartanBasis(a) => {
        let spec = self.action(a);
        let b = spec.cartan_basis()?;
        let ok = b.verify_structure_equation(&spec.algebra, SignConvention::Negated)?;
        let forms: Vec<String> = b.forms.iter().map(ToString::to_string).collect();
        let structure: Vec<String> = b.forms.iter().map(|w| w.d().to_string()).collect();
        let line = format!("{a}: {}", forms.join(", "));
        (json!({ "cartan-basis": forms, "differentials": structure, "structure-equation": ok }), line)
      },
      Command::Cohomology(kind, target) => {
        let t = self.truncation();
        let report = match kind {
          ComplexKind::Vertical => vertical_cohomology(&self.model(target)?, t?)?,
          ComplexKind::Invariant => invariant_complex(&env.systems[target], t?)?.report(0, true)?,
          ComplexKind::Equivariant => equivariant_complex(&self.model(target)?, t?)?.report(0, true)?,
          ComplexKind::Ce => ce_complex(&self.module(target)?)?.report(0, false)?,
        };
        let dims: BTreeMap<String, usize> = report.dims.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let line = format!("{} cohomology of {target}: {:?}", kind.keyword(), report.dims.values().collect::<Vec<_>>());
        let mut out = json!({ "cohomology": { kind.keyword(): dims } });
        if !report.witnesses.is_empty() {
          out["witnesses"] = json!(report.witnesses);
        }
        if let Some(t) = report.truncation {
          out["truncation"] = json!(t);
        }
        (out, line)
      },
      Command::Euler(a, w) => {
        let m = self.model(a)?;
        let mu = BigradedForm::component(&m, w, 0)?;
        if mu.to_form() != *w {
          return Err(Error::InvalidArgument(format!("`{w}` is not of bidegree (0,{})", m.p())));
        }
        let e = euler(&mu)?;
        let cochain = e.to_cochain()?;
        (json!({ "euler": e.to_string(), "cochain": cochain.to_string() }), format!("E({w}) = {e}"))
      },
      Command::CompareTheorem1(a, with) => {
        let t = self.truncation()?;
        let m = self.model(a)?;
        let cmp = match with {
          Some(name) => {
            let module = self.module(name)?;
            theorem1_compare_with(&m, t, &module)?
          },
          None => theorem1_compare(&m, t)?,
        };
        if with.is_none() && cmp.verdict == Verdict::Unequal {
          *unequal += 1;
        }
        let degrees: BTreeMap<String, [usize; 2]> =
          cmp.degrees.iter().map(|(k, (v, c))| (k.to_string(), [*v, *c])).collect();
        let line = format!("variational vs Lie algebra cohomology on {a}: {}", json!(cmp.verdict).as_str().unwrap_or("?"));
        (json!({ "compare-theorem1": { "verdict": cmp.verdict, "degrees": degrees }, "truncation": t }), line)
      },
      Command::ScanObstructions(a, names) => {
        let t = self.truncation()?;
        let variational = vertical_cohomology(&self.model(a)?, t)?;
        let candidates = names
          .iter()
          .map(|n| Ok(Candidate { name: n.clone(), module: self.module(n)? }))
          .collect::<Result<Vec<_>>>()?;
        let verdicts = obstruction_scan(&variational, &candidates)?;
        let dims: BTreeMap<String, usize> = variational.dims.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let list: Vec<Json> = verdicts
          .iter()
          .map(|v| {
            let ce: BTreeMap<String, usize> = v.ce_dims.iter().map(|(k, d)| (k.to_string(), *d)).collect();
            json!({ "candidate": v.candidate, "verdict": v.verdict, "degree": v.degree, "ce": ce })
          })
          .collect();
        let line = format!(
          "obstructions for {a}: {}",
          verdicts.iter().map(|v| format!("{} {}", v.candidate, v.verdict)).collect::<Vec<_>>().join(", ")
        );
        (json!({ "scan-obstructions": list, "variational": dims, "truncation": t }), line)
      },
      Command::RelativeInvariance(target, w) => {
        let m = match env.actions.get(target) {
          Some(_) => self.model(target)?,
          None => foliate(&env.systems[target])?,
        };
        let r = relative_invariance_check(w, &m)?;
        let conditions: Vec<Json> = r
          .conditions
          .iter()
          .map(|c| json!({ "slot": [c.slot.0, c.slot.1], "holds": c.holds, "residue": c.residue }))
          .collect();
        let line = format!("{w} relatively invariant: {}", r.relatively_invariant);
        (
          json!({ "relative-invariance": r.relatively_invariant, "conditions": conditions, "d-invariant": r.d_invariant }),
          line,
        )
      },
    })
  }
}

/// Runs every command in order. Errors become structured objects; the run continues.
pub fn run(spec: &SessionSpec, opts: RunOptions) -> RunReport {
  let mut runner = Runner { spec, truncation: opts.truncation, models: BTreeMap::new() };
  let mut commands = Vec::new();
  let mut summary = Vec::new();
  let mut errors = 0;
  let mut unequal = 0;
  for (st, &line) in spec.statements.iter().zip(&spec.lines) {
    match st {
      Statement::Truncate(t) => {
        if opts.truncation.is_none() {
          runner.truncation = Some(*t);
        }
      },
      Statement::Command(c) => {
        let source = c.to_string();
        let mut obj = match runner.exec(c, &mut unequal) {
          Ok((out, text)) => {
            summary.push(format!("line {line}: {text}"));
            out
          },
          Err(e) => {
            errors += 1;
            summary.push(format!("line {line}: {} failed: {e}", c.name()));
            json!({ "error": { "command": c.name(), "kind": error_kind(&e), "message": e.to_string() } })
          },
        };
        obj["command"] = json!(source);
        obj["line"] = json!(line);
        commands.push(obj);
      },
      _ => {},
    }
  }
  let report = json!({
    "schema": SCHEMA,
    "chart": spec.chart.to_string(),
    "commands": commands,
    "errors": errors,
  });
  RunReport { json: report, errors, theorem1_unequal: unequal, summary }
}
