use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use ekr_core::certificate::{verify_translates, verify_with_seed, Certificate};
use ekr_core::characters::CharacterTable;
use ekr_core::constructions as cons;
use ekr_core::ekr::{gl_spanning_gram, sl_gram, GramReport};
use ekr_core::lp::{agl_constituent_check, build_lp, lp_ceiling_check, solve_lp, LpStatus, Tying};
use ekr_core::reproduce::{self, QFilter};
use ekr_core::search::{self, Budget, Optimality, SearchInstance};
use ekr_core::spectra::{
    canonical_weights, gl_weighted_table, numeric_spectrum, ratio_bound, sl_weighted_table, spectrum,
    spectrum_deviation, WeightVector, WeightedTable,
};
use ekr_core::{Error, Family, GroupContext};
use serde_json::{json, Value};

use crate::render::{fmt_num, num, Report};
use crate::{Cli, Command, Construction, WeightsSource};

pub struct Outcome {
    pub report: Report,
    pub code: u8,
}

fn ok(report: Report) -> Result<Outcome> {
    Ok(Outcome { report, code: 0 })
}

/// 1 usage / unsupported input, 2 verification mismatch, 3 budget exhausted.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Verification(_) | Error::Inconsistent(_) | Error::ComplexResidual { .. }) => 2,
        Some(Error::Budget(_)) => 3,
        _ => 1,
    }
}

pub fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let text = report.render(cli.format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Spectrum { family, q, weights, weights_file, dense } => {
            spectrum_cmd(*family, *q, *weights, weights_file.as_deref(), *dense)
        }
        Command::Weights { family, q } => weights_cmd(*family, *q),
        Command::Lp { family, q, untied, permute_seed } => lp_cmd(*family, *q, *untied, *permute_seed),
        Command::Bounds { family, q, budget } => bounds_cmd(*family, *q, *budget),
        Command::Construct { kind, q, direction, translates, seed } => {
            construct_cmd(*kind, *q, *direction, *translates, *seed)
        }
        Command::Search { family, q, target, budget, node_limit, no_symmetry } => {
            let budget = match node_limit {
                Some(n) => Budget { time: std::time::Duration::from_secs_f64(*budget), nodes: Some(*n) },
                None => Budget::seconds(*budget),
            };
            search_cmd(*family, *q, (*target).into(), budget, !no_symmetry)
        }
        Command::Gram { family, q } => gram_cmd(*family, *q),
        Command::Verify { file, translates, seed, sample_seed } => verify_cmd(file, *translates, *seed, *sample_seed),
        Command::Reproduce { q, all, criteria } => reproduce_cmd(q, *all, criteria),
    }
}

fn build(family: Family, q: u32) -> Result<GroupContext> {
    Ok(GroupContext::build(family, q)?)
}

fn character_table(ctx: &GroupContext) -> Result<CharacterTable> {
    Ok(match ctx.family() {
        Family::Gl => CharacterTable::gl_explicit(ctx)?,
        _ => CharacterTable::from_central(ctx)?,
    })
}

fn weighted_json(t: &WeightedTable) -> Value {
    json!({
        "max": t.max.to_string(),
        "min": t.min.to_string(),
        "ratio_bound": t.ratio_bound.to_string(),
        "rows": t.rows.iter().map(|r| json!({
            "character_label": r.label,
            "row": r.row,
            "characters": r.count,
            "computed": r.computed.to_string(),
            "stated": r.stated.to_string(),
            "matches": r.matches(),
        })).collect::<Vec<_>>(),
        "mismatches": t.mismatches().len(),
    })
}

fn spectrum_cmd(family: Family, q: u32, source: WeightsSource, file: Option<&Path>, dense: bool) -> Result<Outcome> {
    let ctx = build(family, q)?;
    let table = character_table(&ctx)?;
    let weights = match source {
        WeightsSource::Unit => WeightVector::unit(&ctx),
        WeightsSource::Table => canonical_weights(family, q)?.to_vector(&ctx)?,
        WeightsSource::Lp => {
            let lp = build_lp(&ctx, &table, Tying::InversePairs)?;
            solve_lp(&lp)?.class_weights(&ctx, &lp)
        }
        WeightsSource::File => {
            let path = file.context("--weights file needs --weights-file")?;
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            WeightVector { weights: serde_json::from_str(&text)? }
        }
    };
    let rep = spectrum(&ctx, &table, &weights)?;
    let bound = ratio_bound(&rep).ok();
    let mut out = json!({
        "title": "derangement graph spectrum",
        "family": family.to_string(),
        "q": q,
        "vertices": rep.vertices,
        "weights": format!("{source:?}").to_lowercase(),
        "max": num(rep.max),
        "min": num(rep.min),
        "row_sum": num(rep.row_sum),
        "ratio_bound": bound.map_or(Value::Null, num),
        "eigenvalues": rep.entries.iter().map(|e| json!({
            "character_label": e.label,
            "eigenvalue": num(e.eigenvalue),
            "multiplicity": e.multiplicity,
        })).collect::<Vec<_>>(),
        "distinct": rep.grouped(1e-6).iter().map(|&(v, m)| json!([num(v), m])).collect::<Vec<_>>(),
    });
    if source == WeightsSource::Table {
        let exact = match family {
            Family::Gl => Some(gl_weighted_table(&ctx)?),
            Family::Sl => Some(sl_weighted_table(q)?),
            _ => None,
        };
        if let Some(t) = exact {
            out["exact"] = weighted_json(&t);
        }
    }
    if dense {
        let numeric = numeric_spectrum(&ctx, &weights)?;
        out["dense_deviation"] = json!(format!("{:.1e}", spectrum_deviation(&rep, &numeric)));
    }
    let rows = rep
        .entries
        .iter()
        .map(|e| vec![e.label.clone(), fmt_num(e.eigenvalue), e.multiplicity.to_string()])
        .collect();
    ok(Report::new(format!("{family}(2,{q}) derangement graph spectrum"), out).with_table(
        vec!["character_label", "eigenvalue", "multiplicity"],
        rows,
    ))
}

fn weights_cmd(family: Family, q: u32) -> Result<Outcome> {
    let ctx = build(family, q)?;
    let cw = canonical_weights(family, q)?;
    let wv = cw.to_vector(&ctx)?;
    let mut rows = Vec::new();
    let mut classes = Vec::new();
    for (i, c) in ctx.classes().iter().enumerate().filter(|(_, c)| c.is_derangement) {
        let cat = c.gl_category.map(|g| format!("c{}", g.index() + 1)).unwrap_or_default();
        rows.push(vec![i.to_string(), cat.clone(), c.size.to_string(), fmt_num(wv.weights[i])]);
        classes.push(json!({"class": i, "category": cat, "size": c.size, "weight": num(wv.weights[i])}));
    }
    let out = json!({
        "title": "category weighting",
        "family": family.to_string(),
        "q": q,
        "c1": cw.0[0].to_string(),
        "c2": cw.0[1].to_string(),
        "c3": cw.0[2].to_string(),
        "c4": cw.0[3].to_string(),
        "classes": classes,
    });
    ok(Report::new(format!("{family}(2,{q}) category weighting"), out)
        .with_table(vec!["class", "category", "size", "weight"], rows))
}

fn lp_cmd(family: Family, q: u32, untied: bool, permute_seed: Option<u64>) -> Result<Outcome> {
    let ctx = build(family, q)?;
    let table = character_table(&ctx)?;
    let tying = if untied { Tying::Untied } else { Tying::InversePairs };
    let lp = build_lp(&ctx, &table, tying)?;
    let res = solve_lp(&lp)?;
    if res.status != LpStatus::Optimal {
        return Err(Error::Verification(format!("LP ended with status {:?}", res.status)).into());
    }
    let mut out = json!({
        "title": "optimal class weighting",
        "family": family.to_string(),
        "q": q,
        "tying": format!("{tying:?}"),
        "variables": lp.variable_count(),
        "constraints": lp.constraint_count(),
        "ratio": num(res.objective),
        "rounded": res.rounded,
        "bound": num(res.bound(ctx.order())),
        "iterations": res.iterations,
        "max_violation": format!("{:.1e}", res.max_violation),
        "tight": res.tight,
    });
    if let Some(seed) = permute_seed {
        let again = solve_lp(&lp.permuted_rows(seed))?;
        let agree = (again.objective - res.objective).abs() <= 1e-6;
        out["permuted_agrees"] = json!(agree);
        if !agree {
            return Err(Error::Verification(format!(
                "row order changed the optimum: {} vs {}",
                again.objective, res.objective
            ))
            .into());
        }
    }
    match family {
        Family::Gl => {
            let c = lp_ceiling_check(&ctx, &table, &lp, &res)?;
            out["ceiling"] = json!({"ceiling": num(c.ceiling), "attained": c.attains_ceiling,
                "constituents_tight": c.constituents_tight});
        }
        Family::Agl => {
            let c = agl_constituent_check(&ctx, &res.class_weights(&ctx, &lp))?;
            out["constituents"] = serde_json::to_value(&c)?;
        }
        _ => {}
    }
    let rows = lp
        .variables
        .iter()
        .zip(&res.weights)
        .enumerate()
        .map(|(v, (classes, w))| {
            let cls: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
            vec![v.to_string(), cls.join(" "), fmt_num(lp.objective[v]), fmt_num(*w)]
        })
        .collect();
    ok(Report::new(format!("{family}(2,{q}) LP weighting"), out)
        .with_table(vec!["variable", "classes", "class_size", "weight"], rows))
}

fn bounds_cmd(family: Family, q: u32, budget: f64) -> Result<Outcome> {
    let ctx = build(family, q)?;
    let table = character_table(&ctx)?;
    let unit = ratio_bound(&spectrum(&ctx, &table, &WeightVector::unit(&ctx))?).ok();
    let lp = build_lp(&ctx, &table, Tying::InversePairs)?;
    let res = solve_lp(&lp)?;
    let (clique, source, proved) = match family {
        Family::Gl => (cons::singer_clique(&ctx)?, "Singer subgroup", true),
        Family::Agl => (cons::agl_cycle_clique(&ctx)?, "block-cycling powers", true),
        _ => {
            let out = search::max_clique(&ctx, true, Budget::seconds(budget))?;
            let proved = out.proved();
            (out.certificate, "clique search", proved)
        }
    };
    let cc = cons::clique_coclique_bound(&ctx, &clique)?;
    let out = json!({
        "title": "coclique bounds",
        "family": family.to_string(),
        "q": q,
        "order": ctx.order(),
        "degree": ctx.degree(),
        "canonical_size": ctx.order() / ctx.degree(),
        "ratio_bound_unit": unit.map_or(Value::Null, num),
        "ratio_bound_lp": num(res.bound(ctx.order())),
        "clique_size": clique.size,
        "clique_source": source,
        "clique_search_proved": proved,
        "clique_coclique_bound": cc,
    });
    ok(Report::new(format!("{family}(2,{q}) coclique bounds"), out))
}

fn construct_cmd(kind: Construction, q: u32, direction: usize, translates: usize, seed: u64) -> Result<Outcome> {
    let (ctx, cert) = match kind {
        Construction::Singer => {
            let ctx = build(Family::Gl, q)?;
            let c = cons::singer_clique(&ctx)?;
            (ctx, c)
        }
        Construction::LineStabilizer => {
            let ctx = build(Family::Gl, q)?;
            let c = cons::line_stabilizer_coclique(&ctx, direction)?;
            let hits = cons::canonical_matches(&ctx, &c);
            let c = c.with_note(format!("equal to {hits} of the canonical sets S_(i,j)"));
            (ctx, c)
        }
        Construction::AglCycle => {
            let ctx = build(Family::Agl, q)?;
            let c = cons::agl_cycle_clique(&ctx)?;
            (ctx, c)
        }
        Construction::BlockStabilizer => {
            let ctx = build(Family::Agl, q)?;
            let c = cons::block_stabilizer(&ctx)?;
            (ctx, c)
        }
        Construction::PglTwoIntersecting => {
            let ctx = build(Family::Pgl, q)?;
            let c = cons::pgl_two_intersecting(&ctx)?;
            (ctx, c)
        }
        Construction::AglLift => {
            let pgl = build(Family::Pgl, q)?;
            let agl = build(Family::Agl, q)?;
            let s = cons::pgl_two_intersecting(&pgl)?;
            let c = cons::agl_lift(&agl, &pgl, &s)?;
            (agl, c)
        }
        Construction::PslStabilizer => {
            let ctx = build(Family::Psl, q)?;
            let c = cons::psl_setwise_stabilizer(&ctx)?;
            (ctx, c)
        }
    };
    verify_translates(&ctx, &cert, translates, seed)?;
    let title = format!("{}(2,{q}) {:?} of size {}", cert.family, cert.kind, cert.size);
    ok(Report::new(title, serde_json::to_value(&cert)?))
}

fn search_cmd(family: Family, q: u32, target: ekr_core::Target, budget: Budget, symmetry: bool) -> Result<Outcome> {
    let ctx = build(family, q)?;
    let inst = SearchInstance::new(&ctx, target, symmetry)?;
    let floor = match (family, target) {
        (Family::Pgl, ekr_core::Target::TwoIntersecting) if q >= 3 => Some(cons::pgl_two_intersecting(&ctx)?),
        _ => None,
    };
    let out = search::run(&ctx, &inst, floor.as_ref(), budget)?;
    for (nodes, size, secs) in &out.progress {
        eprintln!("improved to {size} after {nodes} nodes ({secs:.2} s)");
    }
    eprintln!("{} nodes in {:.2} s", out.nodes, out.elapsed_secs);
    let json = json!({
        "title": "search outcome",
        "family": family.to_string(),
        "q": q,
        "target": format!("{target:?}"),
        "size": out.size(),
        "optimality": format!("{:?}", out.optimality),
        "nodes": out.nodes,
        "symmetry_reduction": symmetry,
        "certificate": out.certificate,
    });
    let code = if out.optimality == Optimality::LowerBound { 3 } else { 0 };
    let title = format!("{family}(2,{q}) {target:?} search");
    Ok(Outcome { report: Report::new(title, json), code })
}

fn gram_rows(g: &GramReport) -> Vec<Vec<String>> {
    let mut values: Vec<i64> =
        g.observed.iter().chain(&g.stated).chain(&g.derived).map(|&(e, _)| e).collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    let find = |s: &[(i64, usize)], e: i64| s.iter().filter(|x| x.0 == e).map(|x| x.1).sum::<usize>().to_string();
    values
        .into_iter()
        .map(|e| vec![e.to_string(), find(&g.observed, e), find(&g.stated, e), find(&g.derived, e)])
        .collect()
}

fn gram_cmd(family: Family, q: u32) -> Result<Outcome> {
    let ctx = build(family, q)?;
    let g = match family {
        Family::Gl => gl_spanning_gram(&ctx)?,
        Family::Sl => sl_gram(&ctx)?,
        _ => bail!(Error::Unsupported(format!("Gram checks cover GL and SL, not {family}"))),
    };
    let title = match family {
        Family::Gl => "GL spanning-set Gram spectrum",
        _ => "SL agreement-matrix Gram spectrum",
    };
    let mut json = serde_json::to_value(&g)?;
    json["title"] = json!(title);
    json["matches_stated"] = json!(g.matches_stated());
    json["matches_derived"] = json!(g.matches_derived());
    let rows = gram_rows(&g);
    if g.rank != g.expected_rank || !g.matches_derived() || g.decomposition_holds == Some(false) {
        eprint!("{}", Report::new(title, json).render(crate::render::Format::Text)?);
        return Err(Error::Verification(format!("Gram check failed for {family}(2,{q})")).into());
    }
    ok(Report::new(format!("{family}(2,{q}) {title}"), json)
        .with_table(vec!["eigenvalue", "observed", "stated", "from_characters"], rows))
}

fn verify_cmd(file: &Path, translates: usize, seed: u64, sample_seed: u64) -> Result<Outcome> {
    let cert = Certificate::read(file)?;
    let ctx = build(cert.family, cert.q)?;
    let how = verify_with_seed(&ctx, &cert, sample_seed)?;
    verify_translates(&ctx, &cert, translates, seed)?;
    let json = json!({
        "title": "certificate check",
        "file": file.display().to_string(),
        "family": cert.family.to_string(),
        "q": cert.q,
        "kind": format!("{:?}", cert.kind),
        "size": cert.size,
        "valid": true,
        "verification": how,
        "translates_checked": translates,
    });
    ok(Report::new(format!("{}(2,{}) {:?} of size {} verified", cert.family, cert.q, cert.kind, cert.size), json))
}

fn reproduce_cmd(qs: &[u32], all: bool, criteria: &[u8]) -> Result<Outcome> {
    let start = Instant::now();
    let filter = if all { QFilter(None) } else { QFilter(Some(qs.to_vec())) };
    let ids: Vec<u8> = if criteria.is_empty() { reproduce::CRITERIA.to_vec() } else { criteria.to_vec() };
    let mut reports = Vec::new();
    for id in ids {
        let rep = reproduce::run(id, &filter);
        eprintln!("{} [{:.2} s]", rep.line(), rep.elapsed_secs);
        reports.push(rep);
    }
    eprintln!("total {:.2} s", start.elapsed().as_secs_f64());
    let failed = reports.iter().filter(|r| !r.pass()).count();
    let rows = reports
        .iter()
        .flat_map(|r| {
            r.items.iter().map(move |i| {
                vec![r.id.to_string(), i.label.clone(), if i.pass { "PASS" } else { "FAIL" }.to_string(), i.detail.clone()]
            })
        })
        .collect();
    let json = json!({
        "title": "acceptance checks",
        "criteria": reports.len(),
        "failed": failed,
        "reports": reports,
    });
    let code = if failed > 0 { 2 } else { 0 };
    let report =
        Report::new("acceptance checks", json).with_table(vec!["criterion", "item", "result", "detail"], rows);
    Ok(Outcome { report, code })
}
