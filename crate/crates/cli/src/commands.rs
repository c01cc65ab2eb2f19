//! One-off queries. Each returns the JSON value the binary prints.

use std::fs;

use serde_json::{json, Value};

use wstar_core::analysis::{mask_json, TransitionSystem};
use wstar_core::rat::fmt_q;
use wstar_core::seqspace::{dist, dstar, Exponent, SeqVec};
use wstar_core::setrep::{closure, in_closure, no_loss, SetExpr};
use wstar_core::{Error, Result};

use crate::Config;

/// Exit status for a failed command: 2 for malformed or invalid input, 1 when
/// the input was fine but the answer could not be produced.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Input(_) => 2,
        Error::Domain(_) | Error::Resource(_) | Error::Undecided(_) => 1,
    }
}

/// A JSON argument given inline or as `@path`.
pub fn read_json(arg: &str) -> Result<Value> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))
}

fn set_arg(v: &Value) -> Result<SetExpr> {
    let e = SetExpr::from_json(v)?;
    e.validate()?;
    Ok(e)
}

pub fn member(set: &Value, point: &Value, cfg: &Config) -> Result<Value> {
    cfg.validate()?;
    Ok(in_closure(&set_arg(set)?, &SeqVec::from_json(point)?, &cfg.probe())?.to_json())
}

/// `metric` is an exponent (`1`, `2`, `inf`, `a/b`) or `star` for `d_*`.
pub fn distance(x: &Value, y: &Value, metric: &str, cfg: &Config) -> Result<Value> {
    cfg.validate()?;
    let (x, y) = (SeqVec::from_json(x)?, SeqVec::from_json(y)?);
    if metric == "star" {
        return Ok(json!({"p": "star", "value": fmt_q(&dstar(&x, &y))}));
    }
    let p: Exponent = metric.parse()?;
    Ok(dist(&x, &y, &p, &cfg.tol)?.to_json())
}

pub fn closure_bracket(set: &Value, p: &str, cfg: &Config) -> Result<Value> {
    cfg.validate()?;
    Ok(closure(&set_arg(set)?, &p.parse()?, &cfg.tol)?.to_json())
}

pub fn no_loss_verdict(set: &Value, p: &str, cfg: &Config) -> Result<Value> {
    cfg.validate()?;
    Ok(no_loss(&set_arg(set)?, &p.parse()?, &cfg.tol)?.to_json())
}

pub fn reach(system: &Value) -> Result<Value> {
    let q = TransitionSystem::from_json(system)?;
    Ok(json!({"reach": mask_json(q.system.reach(q.init))}))
}

pub fn safety(system: &Value) -> Result<Value> {
    let q = TransitionSystem::from_json(system)?;
    Ok(json!({"safety": q.system.safety(q.init, q.bad).to_string()}))
}
