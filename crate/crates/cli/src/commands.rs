//! One function per subcommand. Each returns a JSON report and the list of
//! failed invariant checks.

use crate::input::{self, arg};
use crate::{Command, LabAction, LabRun};
use currentlab::error::{Error, Result};
use currentlab::lab::{self, Quantity, SweepParams};
use currentlab::{fillvol, io, metricspace, product, slicedfill, slicing};
use currentlab::{PLFunction, SimplicialCurrent};
use serde_json::{json, Value};

pub struct Output {
    pub report: Value,
    pub failures: Vec<String>,
}

impl Output {
    fn ok(report: Value) -> Self {
        Output { report, failures: Vec::new() }
    }

    fn check(mut self, holds: bool, what: &str) -> Self {
        if !holds {
            self.failures.push(what.to_string());
        }
        self
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) | Error::Solver(_) => crate::EXIT_ASSERTION,
        _ => crate::EXIT_INPUT,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn chain_report(t: &SimplicialCurrent, levels: &[f64], warnings: &[String]) -> Value {
    json!({
        "chain": to_value(&io::chain_to_json(t)),
        "summary": {
            "mass": t.mass(),
            "boundary_mass": if t.dim() > 0 { t.boundary().mass() } else { 0.0 },
            "levels": levels,
            "warnings": warnings,
        },
    })
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return arg(format!("--{name} must be positive, got {v}"));
    }
    Ok(())
}

pub fn dispatch(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Mass(a) => {
            let t = input::chain(&a.input)?;
            let b = if t.dim() > 0 { t.boundary() } else { t.clone() };
            Ok(Output::ok(json!({
                "dim": t.dim(),
                "mass": t.mass(),
                "boundary_mass": if t.dim() > 0 { b.mass() } else { 0.0 },
                "is_cycle": t.dim() == 0 || b.is_zero(),
                "simplices": t.len(),
            })))
        }
        Command::Boundary(a) => {
            let t = input::chain(&a.input)?;
            if t.dim() == 0 {
                return arg("a 0-current has no boundary");
            }
            Ok(Output::ok(chain_report(&t.boundary(), &[], &[])))
        }
        Command::Evaluate { input: a, field, pis } => {
            let t = input::chain(&a.input)?;
            let f = input::field(field, &t)?;
            let ps = input::fields(pis, &t)?;
            let value = t.evaluate(&f, &ps)?;
            let sup = f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let bound = sup * ps.iter().map(PLFunction::lip).product::<f64>() * t.mass();
            let holds = value.abs() <= bound * (1.0 + 1e-9) + 1e-12;
            Ok(Output::ok(json!({ "value": value, "bound": bound, "bound_holds": holds }))
                .check(holds, "|T(f dpi)| <= sup|f| prod Lip(pi) M(T)"))
        }
        Command::Slice { input: a, field, level } => {
            let t = input::chain(&a.input)?;
            let f = input::field(field, &t)?;
            let s = slicing::slice(&t, &f, *level)?;
            Ok(Output::ok(chain_report(&s.current, &s.levels, &s.warnings)))
        }
        Command::Ball { input: a, ball } => {
            let t = input::chain(&a.input)?;
            input::check_vertex(&t, ball.center)?;
            positive("radius", ball.radius)?;
            let b = slicing::ball(&t, ball.center, ball.radius)?;
            Ok(Output::ok(chain_report(&b, &[ball.radius], &[])))
        }
        Command::Sphere { input: a, ball } => {
            let t = input::chain(&a.input)?;
            input::check_vertex(&t, ball.center)?;
            positive("radius", ball.radius)?;
            let s = slicing::sphere(&t, ball.center, ball.radius)?;
            Ok(Output::ok(chain_report(&s.current, &s.levels, &s.warnings)))
        }
        Command::Coarea { input: a, field, grid } => {
            let t = input::chain(&a.input)?;
            let f = input::field(field, &t)?;
            let rep = slicing::coarea_profile(&t, &f, *grid)?;
            let tol = 2.0 * rep.step * rep.max_slice_mass;
            let holds = rep.integral <= rep.bound + tol + 1e-12;
            let mut v = to_value(&rep);
            let table: Vec<Value> = rep.levels.iter().zip(&rep.masses).map(|(l, m)| json!({"level": l, "mass": m})).collect();
            v["levels_table"] = Value::Array(table);
            v["tolerance"] = json!(tol);
            v["bound_holds"] = json!(holds);
            Ok(Output::ok(v).check(holds, "coarea integral <= Lip(f) M(T) + quadrature tolerance"))
        }
        Command::Flatnorm { input: a, against } => {
            let s = input::chain(&a.input)?;
            let rep = match against {
                Some(p) => {
                    let t = input::same_complex(&s, &input::chain(p)?)?;
                    fillvol::flat_distance(&s, &t)?
                }
                None => fillvol::flat_norm(&s)?,
            };
            Ok(Output::ok(to_value(&rep)))
        }
        Command::Fillvol(a) => {
            let t = input::chain(&a.input)?;
            Ok(Output::ok(to_value(&fillvol::filling_volume(&t)?)))
        }
        Command::Fillvol0(a) => {
            let ps = io::parse_point_set(&io::read_text(&a.input)?)?;
            let rep = fillvol::filling_volume_0d(&ps.space, &ps.theta, &ps.sigma)?;
            let holds = rep.value + 1e-9 * (1.0 + rep.value) >= rep.lower_bound;
            Ok(Output::ok(to_value(&rep)).check(holds, "transport value >= one-point lower bound"))
        }
        Command::Sf { input: a, ball, field, witness, grid } => {
            let t = input::chain(&a.input)?;
            input::check_vertex(&t, ball.center)?;
            positive("radius", ball.radius)?;
            let rep = if !field.is_empty() {
                if !witness.is_empty() {
                    return arg("give either --field or --witness, not both");
                }
                slicedfill::sliced_fill(&t, ball.center, ball.radius, &input::fields(field, &t)?, *grid)?
            } else {
                for &w in witness {
                    input::check_vertex(&t, w)?;
                }
                let anchors: Vec<_> = witness.iter().map(|&w| t.complex().anchor(w)).collect();
                slicedfill::sliced_fill_witnesses(&t, ball.center, ball.radius, &anchors, *grid)?
            };
            let holds = rep.bound_holds;
            Ok(Output::ok(to_value(&rep)).check(holds, "ball mass >= SF mass lower bound"))
        }
        Command::Sfk { input: a, ball, k, candidates, grid } => {
            let t = input::chain(&a.input)?;
            input::check_vertex(&t, ball.center)?;
            positive("radius", ball.radius)?;
            let rep = slicedfill::sf_k(&t, ball.center, ball.radius, *k, *candidates, *grid)?;
            let holds = rep.best.as_ref().map_or(true, |b| b.bound_holds);
            Ok(Output::ok(to_value(&rep)).check(holds, "ball mass >= SF_k mass lower bound"))
        }
        Command::Tetra { input: a, ball, c, beta, grid, candidates } => {
            let t = input::chain(&a.input)?;
            input::check_vertex(&t, ball.center)?;
            positive("radius", ball.radius)?;
            let rep = slicedfill::tetra_check(&t, ball.center, ball.radius, *c, *beta, *grid, *candidates)?;
            let holds = rep.mass_bound_holds != Some(false);
            Ok(Output::ok(to_value(&rep)).check(holds, "tetrahedral mass lower bound"))
        }
        Command::Product { input: a, epsilon, layers } => {
            let t = input::chain(&a.input)?;
            positive("epsilon", *epsilon)?;
            let pc = product::product_current(&t, *epsilon, *layers)?;
            let want = epsilon * t.mass();
            let holds = (pc.current.mass() - want).abs() <= 1e-9 * want.max(1e-300);
            let mut v = chain_report(&pc.current, &[], &[]);
            v["summary"]["expected_mass"] = json!(want);
            Ok(Output::ok(v).check(holds, "M(T x I) = eps M(T)"))
        }
        Command::Ifv { input: a, epsilon, layers } => {
            let t = input::chain(&a.input)?;
            positive("epsilon", *epsilon)?;
            let rep = product::interval_filling_volume(&t, *epsilon, *layers)?;
            let holds = rep.bound_holds;
            Ok(Output::ok(to_value(&rep)).check(holds, "M(T) >= IFV / eps"))
        }
        Command::Sif { input: a, ball, epsilon, field, grid } => {
            let t = input::chain(&a.input)?;
            input::check_vertex(&t, ball.center)?;
            positive("radius", ball.radius)?;
            positive("epsilon", *epsilon)?;
            let fs = input::fields(field, &t)?;
            let rep = product::sliced_interval_fill(&t, ball.center, ball.radius, &fs, *epsilon, *grid)?;
            let holds = rep.bound_holds;
            Ok(Output::ok(to_value(&rep)).check(holds, "ball mass >= SIF mass lower bound"))
        }
        Command::Gh { input: a, against, exact_limit } => {
            let x = input::metric_space(a)?;
            let y = input::metric_space(against)?;
            let rep = metricspace::gh_bounds(&x, &y, *exact_limit)?;
            let holds = rep.lower <= rep.upper + 1e-12;
            Ok(Output::ok(to_value(&rep)).check(holds, "GH lower <= upper"))
        }
        Command::Pack { input: a, radius, exact_limit } => {
            let x = input::metric_space(a)?;
            positive("radius", *radius)?;
            let rep = if x.len() <= *exact_limit {
                x.packing_number_exact(*radius, *exact_limit)?
            } else {
                x.packing_number(*radius)?
            };
            let mut v = to_value(&rep);
            v["exact"] = json!(x.len() <= *exact_limit);
            Ok(Output::ok(v))
        }
        Command::Lab { action: LabAction::Run(run) } => lab_run(run),
    }
}

fn lab_run(run: &LabRun) -> Result<Output> {
    let fam = lab::build_family(&run.family, &run.schedule, run.seed)?;
    let mut assertions = serde_json::Map::new();
    let mut report = if run.quantity == "mass" {
        let semi = lab::semicontinuity_report(&fam)?;
        assertions.insert("mass_semicontinuity".into(), json!(semi.all_mass_ok));
        assertions.insert("diameter_semicontinuity".into(), json!(semi.all_diameter_ok));
        to_value(&semi)
    } else {
        let q: Quantity = run.quantity.parse()?;
        let params = SweepParams { r: run.radius, grid: run.grid, epsilon: run.epsilon, k: run.k, candidates: run.candidates };
        let sweep = lab::continuity_sweep(&fam, q, &params)?;
        assertions.insert("pair_bounds".into(), json!(sweep.all_hold));
        to_value(&sweep)
    };
    if fam.members.first().is_some_and(|m| m.tracked.iter().any(|t| t.disappearing)) {
        let dis = lab::disappearing_points(&fam, run.radius, 0.25)?;
        assertions.insert("disappearing_points".into(), json!(dis.consistent));
        report["disappearing"] = to_value(&dis);
    }
    report["schedule"] = json!(run.schedule);
    report["seed"] = json!(run.seed);
    let failures: Vec<String> =
        assertions.iter().filter(|(_, v)| v.as_bool() == Some(false)).map(|(k, _)| format!("lab {k}")).collect();
    report["assertions"] = Value::Object(assertions);
    Ok(Output { report, failures })
}
