//! File sniffing for `check well-formed`, plus the succinct-lasso format.
//!
//! Succinct lasso files:
//!
//!   slasso <ts|ss>
//!   vars <id>...
//!   initlen <n>
//!   periodlen <n>
//!   start <bits>          (next-state kind only)
//!   <circuit block>
//!   end

use std::str::FromStr;

use succinct_core::bits::State;
use succinct_core::circuit::Circuit;
use succinct_core::ltl::{LassoModel, SuccinctLasso};
use succinct_core::plan::PolyplanInstance;
use succinct_core::qbf::Qbf;
use succinct_core::seq::{PlanSeqRepr, SeqKind};

use crate::error::CliError;

pub fn sniff(text: &str) -> Option<&'static str> {
    let header = text.lines().find(|l| !l.trim().is_empty())?.trim();
    let keyword = header.split_whitespace().next()?;
    Some(match keyword {
        "circuit" => "circuit",
        "qbf" => "qbf",
        "seq" => "sequence",
        "polyplan" => "planning instance",
        "lasso" => "lasso",
        "slasso" => "succinct lasso",
        "plan" => "plan",
        _ => return None,
    })
}

/// Parse a file according to its header keyword; used by `check
/// well-formed` so every generated artifact can be re-read.
pub fn parse_any(text: &str) -> Result<(), CliError> {
    match sniff(text) {
        Some("circuit") => {
            Circuit::from_str(text)?;
        }
        Some("qbf") => {
            Qbf::from_str(text)?;
        }
        Some("sequence") => {
            PlanSeqRepr::from_str(text)?;
        }
        Some("planning instance") => {
            PolyplanInstance::from_str(text)?;
        }
        Some("lasso") => {
            LassoModel::from_str(text)?;
        }
        Some("succinct lasso") => {
            parse_slasso(text)?;
        }
        Some("plan") => {
            parse_bare_plan(text)?;
        }
        _ => return Err(CliError::input("unrecognized file header")),
    }
    Ok(())
}

/// Structural check of an explicit plan file (action names resolve only
/// against an instance, so just the shape is verified here).
fn parse_bare_plan(text: &str) -> Result<(), CliError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next() != Some("plan") {
        return Err(CliError::input("expected a `plan` header"));
    }
    let mut terminated = false;
    for line in lines {
        if terminated {
            return Err(CliError::input("trailing content after `end`"));
        }
        if line == "end" {
            terminated = true;
        }
    }
    if !terminated {
        return Err(CliError::input("missing `end`"));
    }
    Ok(())
}

pub fn parse_slasso(text: &str) -> Result<SuccinctLasso, CliError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).peekable();
    let header: Vec<&str> =
        lines.next().ok_or_else(|| CliError::input("expected `slasso`"))?.split_whitespace().collect();
    let kind = match header.as_slice() {
        ["slasso", "ts"] => SeqKind::TimeState,
        ["slasso", "ss"] => SeqKind::NextState,
        _ => return Err(CliError::input("expected `slasso ts` or `slasso ss`")),
    };
    let vars: Vec<String> = {
        let words: Vec<&str> = lines
            .next()
            .ok_or_else(|| CliError::input("expected `vars`"))?
            .split_whitespace()
            .collect();
        if words.first() != Some(&"vars") {
            return Err(CliError::input("expected a `vars` line"));
        }
        words[1..].iter().map(|w| w.to_string()).collect()
    };
    let mut field = |name: &str| -> Result<u64, CliError> {
        let line = lines.next().ok_or_else(|| CliError::input(format!("expected `{name}`")))?;
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            [key, value] if *key == name => value
                .parse::<u64>()
                .map_err(|e| CliError::input(format!("bad {name}: {e}"))),
            _ => Err(CliError::input(format!("expected `{name} <n>`"))),
        }
    };
    let init_len = field("initlen")?;
    let period_len = field("periodlen")?;
    let start = if kind == SeqKind::NextState {
        let line = lines.next().ok_or_else(|| CliError::input("expected `start`"))?;
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["start", bits] => {
                Some(State::parse(bits).map_err(|e| CliError::input(e.to_string()))?)
            }
            _ => return Err(CliError::input("expected `start <bits>`")),
        }
    } else {
        None
    };
    // the remaining lines up to the final `end` form one circuit block
    let mut circuit_lines = Vec::new();
    for line in lines {
        circuit_lines.push(line);
    }
    if circuit_lines.pop() != Some("end") {
        return Err(CliError::input("missing final `end`"));
    }
    let circuit = Circuit::from_str(&circuit_lines.join("\n")).map_err(CliError::from)?;
    SuccinctLasso::new(kind, vars, circuit, init_len, period_len, start).map_err(CliError::from)
}

/// Render a succinct lasso in the `slasso` format.
#[allow(dead_code)]
pub fn format_slasso(lasso: &SuccinctLasso) -> String {
    let mut out = format!(
        "slasso {}\n",
        if lasso.kind == SeqKind::TimeState { "ts" } else { "ss" }
    );
    out.push_str("vars");
    for v in &lasso.vars {
        out.push(' ');
        out.push_str(v);
    }
    out.push('\n');
    out.push_str(&format!("initlen {}\n", lasso.init_len));
    out.push_str(&format!("periodlen {}\n", lasso.period_len));
    if let Some(start) = &lasso.start {
        out.push_str(&format!("start {start}\n"));
    }
    out.push_str(&lasso.circuit.to_string());
    out.push_str("end\n");
    out
}
