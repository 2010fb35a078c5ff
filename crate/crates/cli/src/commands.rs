//! Command implementations shared by the binary and its tests.

use std::path::Path;

use serde_json::json;

use crate::model::ModelFile;
use crate::parser::parse_model;
use hcov_core::engine::{reconstruct_trace, render_facts, RenderElement, Verdict};
use hcov_core::oracle::{explore, replay, ForwardModel};

pub fn load(path: &Path) -> Result<ModelFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_model(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// The iteration budget: an explicit flag wins over HCOV_MAX_ITER.
pub fn budget(max_iter: Option<u32>) -> Result<Option<u32>, String> {
    if max_iter.is_some() {
        return Ok(max_iter);
    }
    match std::env::var("HCOV_MAX_ITER") {
        Ok(s) => s
            .parse::<u32>()
            .map(Some)
            .map_err(|_| format!("HCOV_MAX_ITER is not a number: {s}")),
        Err(_) => Ok(None),
    }
}

pub fn find<'a, T>(targets: &'a [(String, T)], name: &str) -> Result<&'a T, String> {
    targets
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, t)| t)
        .ok_or_else(|| format!("unknown target {name}"))
}

/// Builds the check report; returns it with the coverability flag.
pub fn check_report<E: RenderElement>(
    model_label: &str,
    target: &str,
    verdict: &Verdict<E>,
    emit_facts: bool,
    want_trace: bool,
    json_output: bool,
) -> Result<(bool, String), String> {
    let trace = if verdict.coverable() {
        Some(reconstruct_trace(verdict).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let mut out = String::new();
    if json_output {
        let facts: Vec<serde_json::Value> = verdict
            .facts
            .iter()
            .map(|f| {
                json!({
                    "iteration": f.iteration,
                    "atoms": f.element.atoms_text(),
                    "constraint": f.element.constraint_text(),
                    "id": f.id,
                    "parent": f.parent,
                    "rule": f.rule,
                })
            })
            .collect();
        let doc = json!({
            "model": model_label,
            "target": target,
            "verdict": if verdict.coverable() { "coverable" } else { "not-coverable" },
            "iterations": verdict.iterations,
            "fact_count": verdict.facts.len(),
            "covering_fact": verdict.covering_fact,
            "trace": trace,
            "facts": facts,
        });
        out.push_str(&serde_json::to_string_pretty(&doc).unwrap());
        out.push('\n');
    } else {
        out.push_str(&format!(
            "verdict: {}\n",
            if verdict.coverable() {
                "coverable"
            } else {
                "not coverable"
            }
        ));
        out.push_str(&format!("iterations: {}\n", verdict.iterations));
        out.push_str(&format!("facts: {}\n", verdict.facts.len()));
        if let Some(id) = verdict.covering_fact {
            out.push_str(&format!("covering fact: {id}\n"));
        }
        if want_trace {
            if let Some(t) = &trace {
                out.push_str(&format!("trace: {}\n", t.join(" ")));
            }
        }
        if emit_facts {
            out.push_str(&render_facts(verdict));
        }
    }
    Ok((verdict.coverable(), out))
}

/// Runs the bounded forward search from each initial configuration in
/// turn; the first witness wins.
pub fn simulate_outcome<M: ForwardModel>(
    model: &M,
    initials: &[M::State],
    target: &M::Target,
    depth: usize,
    show: impl Fn(&M::State) -> String,
) -> (bool, Vec<String>) {
    let mut all_exhausted = true;
    for (i, initial) in initials.iter().enumerate() {
        let result = explore(model, initial, target, depth);
        if let Some((config, path)) = result.covering_witness {
            let mut lines = Vec::new();
            if initials.len() > 1 {
                lines.push(format!("initial configuration: #{}", i + 1));
            }
            lines.push(format!("witness: {}", path.join(" ")));
            lines.push(format!("covering: {}", show(&config)));
            return (true, lines);
        }
        all_exhausted &= result.frontier_exhausted;
    }
    (
        false,
        vec![
            format!("no witness up to depth {depth}"),
            format!("frontier exhausted: {all_exhausted}"),
        ],
    )
}

/// Compares an engine verdict against the forward oracle. On a
/// coverable verdict the reconstructed trace must replay and the oracle
/// must find a witness within `max(depth, trace length)`; on a negative
/// verdict the oracle must find nothing up to `depth`.
pub fn crosscheck_outcome<M: ForwardModel, E>(
    model: &M,
    initials: &[M::State],
    target: &M::Target,
    verdict: &Verdict<E>,
    depth: usize,
) -> Result<(bool, Vec<String>), String> {
    if verdict.coverable() {
        let trace = reconstruct_trace(verdict).map_err(|e| e.to_string())?;
        let search_depth = depth.max(trace.len());
        let replayed = initials
            .iter()
            .any(|i| replay(model, i, &trace, Some(target)).is_ok());
        let witness = initials.iter().any(|i| {
            explore(model, i, target, search_depth)
                .covering_witness
                .is_some()
        });
        if replayed && witness {
            Ok((
                true,
                vec![format!(
                    "AGREE: coverable (trace of length {} replays; witness within depth {search_depth})",
                    trace.len()
                )],
            ))
        } else {
            Ok((
                false,
                vec![format!(
                    "DISAGREE: engine says coverable, oracle replay={replayed} witness={witness}"
                )],
            ))
        }
    } else {
        let witness = initials
            .iter()
            .any(|i| explore(model, i, target, depth).covering_witness.is_some());
        if witness {
            Ok((
                false,
                vec![format!(
                    "DISAGREE: engine says not coverable, oracle found a witness within depth {depth}"
                )],
            ))
        } else {
            Ok((
                true,
                vec![format!("AGREE (no witness up to depth {depth})")],
            ))
        }
    }
}
