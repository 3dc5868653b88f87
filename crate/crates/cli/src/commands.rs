//! One function per subcommand. Each returns the envelope and whether its
//! verdict passed.

use anyhow::{anyhow, bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use reidemeister_core::intlat::coker_order;
use reidemeister_core::oracle::{cross_validate, BoxSpec, Report};
use reidemeister_core::parse::{parse_matrix, parse_twist};
use reidemeister_core::reid::{
    are_twisted_conjugate, congruence_check, parity_table_cell, reidemeister_number,
    twisted_lattice, ClassId, InfiniteReason, Reidemeister, TwistedClasses,
};
use reidemeister_core::reps::{character_table, StandardReps, TorusAction, CHARACTER_NAMES};
use reidemeister_core::{Cardinality, Elem, Group, Sign, Twist};

use crate::output::{big, object, Envelope};

pub struct Outcome {
    pub envelope: Envelope,
    pub passed: bool,
}

fn ok(command: &'static str, inputs: Value, result: Value) -> Outcome {
    Outcome {
        envelope: Envelope {
            command,
            inputs,
            result,
            exact: true,
        },
        passed: true,
    }
}

fn is_standard_phi(group: &Group, t: &Twist) -> bool {
    *group == Group::standard() && group.phi().ok().as_ref() == Some(t)
}

fn class_json(id: &ClassId) -> Value {
    json!({
        "parity": id.parity,
        "coset": id.coset.iter().map(big).collect::<Vec<_>>(),
        "label": id.to_string(),
    })
}

fn reidemeister_json(r: &Reidemeister) -> Value {
    match r {
        Reidemeister::Finite(n) => json!({ "value": big(n), "reason": null }),
        Reidemeister::Infinite(reason) => {
            json!({ "value": "infinite", "reason": reason.to_string() })
        }
    }
}

fn twist_inputs(text: &str, t: &Twist) -> Value {
    json!({ "text": text, "parsed": t.to_string() })
}

pub fn classify(group: &Group, element: &str, twist: &str) -> Result<Outcome> {
    let h: Elem = element
        .parse()
        .with_context(|| format!("cannot parse element '{element}'"))?;
    let t = parse_twist(group, twist)?;
    let classes = TwistedClasses::new(group, &t)?;
    let id = classes.class_id(&h);
    let index = classes.index_of(&id).expect("labels are enumerated");
    let (base, base_conj) = classes.base_level(&h);
    let rep = classes.representative(&id);
    let witness = are_twisted_conjugate(group, &h, &rep, &t)?
        .ok_or_else(|| anyhow!("{h} is not conjugate to its own class representative"))?;

    let standard = is_standard_phi(group, &t);
    let (name, cell) = if standard {
        let cell = parity_table_cell(index, h.n);
        (
            json!(format!("B{}", index + 1)),
            json!({
                "level_mod_6": h.n.rem_euclid(6),
                "condition": cell.to_string(),
                "holds": cell.holds(&h.v),
            }),
        )
    } else {
        (Value::Null, Value::Null)
    };
    let result = object(vec![
        ("element", json!(h.to_string())),
        ("class_id", class_json(&id)),
        ("class_index", json!(index)),
        ("class_name", name),
        ("table_cell", cell),
        (
            "base_level",
            json!({ "element": base.to_string(), "conjugator": base_conj.to_string() }),
        ),
        (
            "representative",
            json!({
                "element": rep.to_string(),
                "witness": witness.g.to_string(),
                "replays": witness.replays(group, &h, &rep, &t),
            }),
        ),
    ]);
    let inputs = json!({ "element": element, "twist": twist_inputs(twist, &t) });
    Ok(ok("classify", inputs, result))
}

pub fn reidemeister(group: &Group, twist: &str) -> Result<Outcome> {
    let t = parse_twist(group, twist)?;
    let r = reidemeister_number(group, &t);
    let levels: Vec<Value> = match t.eps() {
        Sign::Plus => Vec::new(),
        Sign::Minus => (0..2)
            .map(|p| {
                let order = match coker_order(&twisted_lattice(group, &t, p)) {
                    Cardinality::Finite(n) => big(&n),
                    Cardinality::Infinite => json!("infinite"),
                };
                json!({ "parity": p, "cokernel_order": order })
            })
            .collect(),
    };
    let mut result = reidemeister_json(&r);
    let degenerate = match r {
        Reidemeister::Infinite(InfiniteReason::DegenerateCokernel { parity }) => json!(parity),
        _ => Value::Null,
    };
    let map = result.as_object_mut().expect("object");
    map.insert("degenerate_parity".into(), degenerate);
    map.insert("levels".into(), json!(levels));
    Ok(ok(
        "reidemeister",
        json!({ "twist": twist_inputs(twist, &t) }),
        result,
    ))
}

/// Conjugators are drawn from `[-8,8]² × [-4,4]`.
pub fn chartable(group: &Group, seed: u64, samples: u32) -> Result<Outcome> {
    let phi = group.phi()?;
    let table = character_table(group, &phi)?;
    let reps = StandardReps::new(group, &phi)?;
    let classes = TwistedClasses::new(group, &phi)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for (col, rep) in table.representatives.iter().enumerate() {
        for _ in 0..samples {
            let g = Elem::new(
                rng.gen_range(-8..=8),
                rng.gen_range(-8..=8),
                rng.gen_range(-4..=4),
            );
            let other = group.twisted_conj(&g, rep, &phi);
            let values = reps.integer_characters(&other);
            let column: Vec<i64> = table.entries.iter().map(|row| row[col]).collect();
            if classes.class_id(&other) != table.classes[col] || values.to_vec() != column {
                failures.push(json!(other.to_string()));
            }
        }
    }

    let class_list: Vec<Value> = table
        .classes
        .iter()
        .zip(&table.representatives)
        .enumerate()
        .map(|(i, (id, rep))| {
            json!({
                "name": format!("B{}", i + 1),
                "class_id": id.to_string(),
                "representative": rep.to_string(),
            })
        })
        .collect();
    let rows: Vec<Value> = CHARACTER_NAMES
        .iter()
        .zip(&table.entries)
        .map(|(name, row)| json!({ "character": name, "values": row }))
        .collect();
    let consistent = failures.is_empty();
    let result = json!({
        "classes": class_list,
        "rows": rows,
        "determinant": big(&table.det),
        "resample": {
            "seed": seed,
            "samples_per_class": samples,
            "checked": samples as usize * table.representatives.len(),
            "consistent": consistent,
            "failures": failures,
        },
    });
    let mut out = ok(
        "chartable",
        json!({ "seed": seed, "samples": samples }),
        result,
    );
    out.passed = consistent;
    Ok(out)
}

pub fn congruence(group: &Group, matrix: &str, n_max: u32) -> Result<Outcome> {
    if n_max == 0 {
        bail!("n_max must be at least 1");
    }
    let f = parse_matrix(group, matrix)?;
    let rows = congruence_check(&f, n_max)?;
    let all_hold = rows.iter().all(|r| r.holds);
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| json!({ "n": r.n, "lhs": big(&r.lhs), "holds": r.holds }))
        .collect();
    let result = json!({ "rows": rows, "all_hold": all_hold });
    let inputs = json!({ "matrix": matrix, "parsed": f.to_string(), "n_max": n_max });
    let mut out = ok("congruence", inputs, result);
    out.passed = all_hold;
    Ok(out)
}

fn report_json(report: &Report) -> Value {
    let level_table = report.level_table.as_ref().map(|rows| {
        rows.iter()
            .map(|row| {
                let cells: Vec<Value> = row
                    .cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        json!({
                            "class": format!("B{}", i + 1),
                            "condition": c.cell.to_string(),
                            "count": c.count,
                            "ok": c.ok,
                        })
                    })
                    .collect();
                json!({ "level": row.level, "cells": cells, "unassigned": row.unassigned })
            })
            .collect::<Vec<_>>()
    });
    let block_classes = report
        .block_classes
        .as_ref()
        .map(|ids| ids.iter().map(ToString::to_string).collect::<Vec<_>>());
    json!({
        "block_count": report.block_count,
        "block_sizes": report.block_sizes,
        "block_classes": block_classes,
        "relations": report.relations,
        "merges_checked": report.merges_checked,
        "undecided": report.undecided,
        "reidemeister": reidemeister_json(&report.reidemeister),
        "level_table": level_table,
        "mismatches": report.mismatches.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

pub fn oracle(group: &Group, twist: &str, spec: BoxSpec, jobs: usize) -> Result<Outcome> {
    let t = parse_twist(group, twist)?;
    let report = cross_validate(group, &t, &spec, jobs)?;
    let consistent = report.mismatches.is_empty();
    let complete = report.complete();
    let table = report.table_reproduced();
    let passed = consistent && complete != Some(false) && table != Some(false);
    let mut result = report_json(&report);
    result.as_object_mut().expect("object").insert(
        "verdict".into(),
        json!({
            "consistent": consistent,
            "complete": complete,
            "table_reproduced": table,
            "passed": passed,
        }),
    );
    let inputs = json!({
        "twist": twist_inputs(twist, &t),
        "v_bound": spec.v_bound,
        "n_bound": spec.n_bound,
        "conj_v_bound": spec.conj_v_bound,
        "conj_z_bound": spec.conj_z_bound,
        "jobs": jobs,
    });
    let mut out = ok("oracle", inputs, result);
    out.passed = passed;
    Ok(out)
}

pub fn orbits(group: &Group, twist: &str, q_max: u32) -> Result<Outcome> {
    if q_max == 0 {
        bail!("q_max must be at least 1");
    }
    let t = parse_twist(group, twist)?;
    let action = TorusAction::new(group, &t)?;
    let orbits: Vec<Value> = action
        .find_invariant_orbits(q_max)
        .iter()
        .map(|o| {
            let points: Vec<Value> = o
                .points
                .iter()
                .map(|p| json!([p.x.to_string(), p.y.to_string()]))
                .collect();
            json!({
                "size": o.len(),
                "points": points,
                "alpha_perm": o.alpha_perm,
                "mu_perm": o.mu_perm,
            })
        })
        .collect();
    let result = json!({ "count": orbits.len(), "orbits": orbits });
    let inputs = json!({ "twist": twist_inputs(twist, &t), "q_max": q_max });
    Ok(ok("orbits", inputs, result))
}
