use std::fmt::Write as _;
use std::path::Path;

use chordal_td::polygraph::{
    check_peo, find_peo, sparsity as sparsity_of, system_graph, to_dot, treewidth_bound, chordal_complete,
    is_subgraph, ChordalityCertificate, Edge, VarGraph,
};
use chordal_td::reduction::{redbar_trace, LeveledSystem, PivotStrategy, PremChain, ReductionMap, SupportPreserving};
use chordal_td::sysparse::{parse_system_detailed, parse_system_in, parse_tree, render_tree, PolySystem};
use chordal_td::verify::{
    check_decomposition_threads, check_reduction_chain, check_tree_chordality, random_chordal_system, Check,
    CheckReport,
};
use chordal_td::wang::{decompose as wang_decompose, DecompTree, DecomposeOptions};
use chordal_td::{CoefficientField, Polynomial, Var};
use serde_json::{json, Value};

use crate::{read_input, write_output, CliError, Common, Outcome};

const Q: CoefficientField = CoefficientField::Rationals;

fn load(file: &Path, field: CoefficientField) -> Result<PolySystem, CliError> {
    let text = read_input(file)?;
    let out = parse_system_detailed(&text, field)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    Ok(out.system)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render_list(s: &PolySystem, polys: &[Polynomial]) -> String {
    let items: Vec<String> = polys.iter().map(|p| s.render_poly(p)).collect();
    format!("[{}]", items.join(", "))
}

fn names_of(s: &PolySystem, vars: &[Var]) -> Vec<String> {
    vars.iter().map(|&v| s.var_name(v)).collect()
}

fn edge_text(s: &PolySystem, e: &Edge) -> String {
    format!("({},{})", s.var_name(e.0), s.var_name(e.1))
}

fn edges_json(s: &PolySystem, g: &VarGraph) -> Value {
    g.edges()
        .iter()
        .map(|&(a, b)| match g.weight(a, b) {
            Some(w) => json!([s.var_name(a), s.var_name(b), w]),
            None => json!([s.var_name(a), s.var_name(b)]),
        })
        .collect()
}

fn parse_order(s: &PolySystem, g: &VarGraph, text: &str) -> Result<Vec<Var>, CliError> {
    let mut order = Vec::new();
    for name in text.split('<').map(str::trim).filter(|n| !n.is_empty()) {
        let v = s
            .var(name)
            .ok_or_else(|| CliError::Usage(format!("--order names unknown variable `{name}`")))?;
        if g.vertices().contains(&v) {
            order.push(v);
        }
    }
    let as_set: std::collections::BTreeSet<Var> = order.iter().copied().collect();
    if as_set.len() != order.len() || &as_set != g.vertices() {
        return Err(CliError::Usage(
            "--order must list every variable of the graph exactly once".into(),
        ));
    }
    Ok(order)
}

fn parse_pivot(text: &str) -> Result<PivotStrategy, CliError> {
    text.parse().map_err(|e: chordal_td::Error| CliError::Usage(e.to_string()))
}

pub fn parse(file: &Path, common: &Common) -> Result<Outcome, CliError> {
    let text = read_input(file)?;
    let out = parse_system_detailed(&text, Q)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let s = &out.system;
    if common.json {
        let polys: Vec<String> = s.polys.iter().map(|p| s.render_poly(p)).collect();
        return Ok(Outcome::ok(pretty(&json!({
            "vars": s.vars,
            "field": s.field.to_string(),
            "polys": polys,
            "warnings": out.warnings,
        }))));
    }
    Ok(Outcome::ok(s.render()))
}

pub fn graph(file: &Path, weighted: bool, dot: Option<&Path>, common: &Common) -> Result<Outcome, CliError> {
    let s = load(file, Q)?;
    let g = system_graph(&s, weighted);
    let mut stdout = String::new();
    if let Some(path) = dot {
        if let Some(text) = write_output(path, &to_dot(&g, Some(&s.vars)))? {
            stdout.push_str(&text);
        }
    }
    let vertices: Vec<Var> = g.vertices().iter().copied().collect();
    if common.json {
        stdout.push_str(&pretty(&json!({
            "vertices": names_of(&s, &vertices),
            "edges": edges_json(&s, &g),
        })));
    } else if dot.is_none_or(|p| p != Path::new("-")) {
        let edges: Vec<String> = g
            .edges()
            .iter()
            .map(|e| match g.weight(e.0, e.1) {
                Some(w) => format!("{}[{w}]", edge_text(&s, e)),
                None => edge_text(&s, e),
            })
            .collect();
        let _ = writeln!(stdout, "vertices: {}", names_of(&s, &vertices).join(", "));
        let _ = writeln!(stdout, "edges: {}", edges.join(", "));
    }
    Ok(Outcome::ok(stdout))
}

pub fn chordal(file: &Path, order: Option<&str>, common: &Common) -> Result<Outcome, CliError> {
    let s = load(file, Q)?;
    let g = system_graph(&s, false);
    if let Some(text) = order {
        let order = parse_order(&s, &g, text)?;
        let failure = check_peo(&g, &order)?;
        let names = names_of(&s, &order);
        let stdout = if common.json {
            pretty(&match &failure {
                None => json!({"order": names, "peo": true}),
                Some(f) => json!({
                    "order": names,
                    "peo": false,
                    "vertex": s.var_name(f.vertex),
                    "missing": [s.var_name(f.missing.0), s.var_name(f.missing.1)],
                }),
            })
        } else {
            match &failure {
                None => format!("peo: yes; order: {}\n", names.join(" < ")),
                Some(f) => format!(
                    "peo: no; {} has non-adjacent earlier neighbours {} and {}\n",
                    s.var_name(f.vertex),
                    s.var_name(f.missing.0),
                    s.var_name(f.missing.1)
                ),
            }
        };
        return Ok(Outcome {
            stdout,
            ok: failure.is_none(),
        });
    }
    match find_peo(&g) {
        ChordalityCertificate::Chordal { peo } => {
            let names = names_of(&s, &peo);
            let stdout = if common.json {
                pretty(&json!({"chordal": true, "peo": names}))
            } else {
                format!("chordal: yes; peo: {}\n", names.join(" < "))
            };
            Ok(Outcome::ok(stdout))
        }
        ChordalityCertificate::NotChordal { cycle } => {
            let names = names_of(&s, &cycle);
            let stdout = if common.json {
                pretty(&json!({"chordal": false, "cycle": names}))
            } else {
                format!("chordal: no; witness cycle: {}\n", names.join("-"))
            };
            Ok(Outcome { stdout, ok: false })
        }
    }
}

pub fn complete(
    file: &Path,
    dot: Option<&Path>,
    exact: bool,
    order: Option<&str>,
    common: &Common,
) -> Result<Outcome, CliError> {
    let s = load(file, Q)?;
    let g = system_graph(&s, false);
    let order = order.map(|o| parse_order(&s, &g, o)).transpose()?;
    let c = chordal_complete(&g, order.as_deref())?;
    let bound = treewidth_bound(&g, false)?;
    let exact_tw = if exact {
        Some(treewidth_bound(&g, true)?)
    } else {
        None
    };
    let mut stdout = String::new();
    if let Some(path) = dot {
        if let Some(text) = write_output(path, &to_dot(&c.graph, Some(&s.vars)))? {
            stdout.push_str(&text);
        }
    }
    let fill: Vec<String> = c.fill.iter().map(|e| edge_text(&s, e)).collect();
    if common.json {
        let fill_json: Vec<Value> = c
            .fill
            .iter()
            .map(|&(a, b)| json!([s.var_name(a), s.var_name(b)]))
            .collect();
        stdout.push_str(&pretty(&json!({
            "fill": fill_json,
            "order": names_of(&s, &c.order),
            "treewidth_bound": bound,
            "treewidth": exact_tw,
        })));
    } else if dot.is_none_or(|p| p != Path::new("-")) {
        let fill = if fill.is_empty() {
            "none".to_string()
        } else {
            fill.join(", ")
        };
        let _ = writeln!(stdout, "fill edges: {fill}");
        let _ = writeln!(stdout, "peo: {}", names_of(&s, &c.order).join(" < "));
        let _ = writeln!(stdout, "treewidth bound: {bound}");
        if let Some(tw) = exact_tw {
            let _ = writeln!(stdout, "treewidth (exact): {tw}");
        }
    }
    Ok(Outcome::ok(stdout))
}

fn natural_order_is_peo(g: &VarGraph) -> bool {
    let order: Vec<Var> = g.vertices().iter().copied().collect();
    matches!(check_peo(g, &order), Ok(None))
}

fn verdict(r: &Result<(), String>) -> String {
    match r {
        Ok(()) => "yes".into(),
        Err(w) => format!("no ({w})"),
    }
}

pub fn reduce(
    file: &Path,
    to: usize,
    pivot: &str,
    support_preserving: bool,
    common: &Common,
) -> Result<Outcome, CliError> {
    let s = load(file, Q)?;
    let n = s.num_vars();
    if to == 0 || to > n + 1 {
        return Err(CliError::Usage(format!("--to must be between 1 and {}", n + 1)));
    }
    let strategy = parse_pivot(pivot)?;
    let chain = PremChain::for_system(strategy, &s.polys);
    let map: &dyn ReductionMap = if support_preserving {
        &SupportPreserving
    } else {
        &chain
    };
    let gf = system_graph(&s, false);
    let premise = natural_order_is_peo(&gf);
    let trace = redbar_trace(&LeveledSystem::from_system(&s), to, map)?;
    let sub = |a: &VarGraph, b: &VarGraph| is_subgraph(a, b).map_err(|w| w.describe(Some(&s.vars)));

    let mut ok = true;
    let mut text = String::new();
    let mut stages = Vec::new();
    let _ = writeln!(text, "map: {}", map.name());
    let _ = writeln!(
        text,
        "premise ({} is a PEO of G(P)): {}",
        s.vars.join(" < "),
        if premise { "yes" } else { "no" }
    );
    let _ = writeln!(text, "P: {}", render_list(&s, trace.stages[0].1.polys()));
    for w in trace.stages.windows(2) {
        let (prev_level, prev) = (w[0].0, &w[0].1);
        let (level, cur) = (w[1].0, &w[1].1);
        let g = cur.graph();
        let vs_input = sub(&g, &gf);
        let vs_prev = sub(&g, &prev.graph());
        if premise && vs_input.is_err() {
            ok = false;
        }
        let prev_name = if prev_level == n + 1 {
            "P".to_string()
        } else {
            format!("redbar_{prev_level}")
        };
        let _ = writeln!(text, "redbar_{level}: {}", render_list(&s, cur.polys()));
        let _ = writeln!(text, "  G ⊆ G(P): {}", verdict(&vs_input));
        let _ = writeln!(text, "  G ⊆ G({prev_name}): {}", verdict(&vs_prev));
        let polys: Vec<String> = cur.polys().iter().map(|p| s.render_poly(p)).collect();
        stages.push(json!({
            "level": level,
            "polys": polys,
            "subgraph_of_input": {"pass": vs_input.is_ok(), "witness": vs_input.err()},
            "subgraph_of_previous": {"pass": vs_prev.is_ok(), "witness": vs_prev.err()},
        }));
    }
    let stdout = if common.json {
        pretty(&json!({"map": map.name(), "premise": premise, "stages": stages}))
    } else {
        text
    };
    Ok(Outcome { stdout, ok })
}

fn systems_text(s: &PolySystem, tree: &DecompTree) -> String {
    let mut out = String::new();
    let count = tree.outputs.len();
    let _ = writeln!(
        out,
        "field: {}; pivot: {}; {} triangular system{}",
        tree.field,
        tree.strategy,
        count,
        if count == 1 { "" } else { "s" }
    );
    for (k, o) in tree.outputs.iter().enumerate() {
        let _ = writeln!(out, "T{} = {}", k + 1, render_list(s, &o.system.t));
        let _ = writeln!(out, "U{} = {}", k + 1, render_list(s, &o.system.u));
    }
    out
}

pub fn decompose(
    file: &Path,
    field: &str,
    pivot: &str,
    tree_path: Option<&Path>,
    early_prune: bool,
    common: &Common,
) -> Result<Outcome, CliError> {
    let field = CoefficientField::parse(field).map_err(|e| CliError::Usage(e.to_string()))?;
    let strategy = parse_pivot(pivot)?;
    let s = load(file, field)?;
    let tree = wang_decompose(&s, strategy, DecomposeOptions { early_prune })?;
    let json_text = render_tree(&tree) + "\n";
    let mut stdout = String::new();
    if let Some(path) = tree_path {
        if let Some(text) = write_output(path, &json_text)? {
            stdout.push_str(&text);
            return Ok(Outcome::ok(stdout));
        }
    }
    if common.json {
        stdout.push_str(&json_text);
    } else {
        stdout.push_str(&systems_text(&s, &tree));
    }
    Ok(Outcome::ok(stdout))
}

fn report_text(report: &CheckReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let status = match (c.pass, c.observation) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (true, true) => "note",
            (false, true) => "note (fails)",
        };
        let _ = write!(out, "{status} {}", c.name);
        if let Some(w) = &c.witness {
            let _ = write!(out, ": {w}");
        }
        out.push('\n');
    }
    out
}

fn root_matches(s: &PolySystem, tree: &DecompTree) -> Result<(), String> {
    let mut expected: Vec<Polynomial> = Vec::new();
    for p in &s.polys {
        if !expected.contains(p) {
            expected.push(p.clone());
        }
    }
    match tree.nodes.first() {
        Some(root) if root.p == expected => Ok(()),
        Some(_) => Err("root P differs from the input system".into()),
        None => Err("tree has no nodes".into()),
    }
}

pub fn verify(file: &Path, tree_file: &Path, primes: &[u32], common: &Common) -> Result<Outcome, CliError> {
    let text = read_input(file)?;
    let tree = parse_tree(&read_input(tree_file)?, Q)?;
    let mut report = CheckReport::default();

    let s_tree = parse_system_in(&text, tree.field)?;
    if s_tree.vars != tree.vars {
        return Err(CliError::Input(format!(
            "variable lists differ: file has {:?}, tree has {:?}",
            s_tree.vars, tree.vars
        )));
    }
    report.push(format!("tree root matches the input over {}", tree.field), root_matches(&s_tree, &tree));

    let mut fields: Vec<CoefficientField> = Vec::new();
    for &p in primes {
        fields.push(CoefficientField::prime(p as u64).map_err(|e| CliError::Usage(e.to_string()))?);
    }
    if tree.field != Q && !fields.contains(&tree.field) {
        fields.push(tree.field);
    }
    for field in fields {
        let s = parse_system_in(&text, field)?;
        let run;
        let t = if field == tree.field {
            &tree
        } else {
            run = wang_decompose(&s, tree.strategy, DecomposeOptions::default())?;
            &run
        };
        report.extend(check_decomposition_threads(&s, t, common.threads)?);
    }
    let stdout = if common.json {
        report.to_json() + "\n"
    } else {
        report_text(&report)
    };
    Ok(Outcome {
        stdout,
        ok: report.passed(),
    })
}

fn all_strategies(len: usize, seed: u64) -> [PivotStrategy; 4] {
    [
        PivotStrategy::First,
        PivotStrategy::MinTerms,
        PivotStrategy::MinSupport,
        PivotStrategy::Index(1 + (seed as usize) % len.max(1)),
    ]
}

fn prefixed(prefix: &str, report: CheckReport) -> CheckReport {
    CheckReport {
        checks: report
            .checks
            .into_iter()
            .map(|c| Check {
                name: format!("{prefix}: {}", c.name),
                ..c
            })
            .collect(),
    }
}

/// One check summarizing `report`: passes iff it passed, with the first
/// failure as witness.
fn summarize(report: &mut CheckReport, name: String, inner: &CheckReport) {
    let result = match inner.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())),
    };
    report.push(name, result);
}

pub fn check_theorems(file: &Path, runs: usize, seed: u64, common: &Common) -> Result<Outcome, CliError> {
    let text = read_input(file)?;
    let s = parse_system_in(&text, Q)?;
    let mut file_report = CheckReport::default();

    file_report.extend(prefixed("reduction prem-chain", check_reduction_chain(&s, &PremChain::default())?));
    file_report.extend(prefixed("reduction support-preserving", check_reduction_chain(&s, &SupportPreserving)?));
    for strategy in all_strategies(s.polys.len(), 0) {
        let tree = wang_decompose(&s, strategy, DecomposeOptions::default())?;
        file_report.extend(prefixed(&format!("tree {strategy}"), check_tree_chordality(&s, &tree)));
    }
    for p in [3u32, 5, 7] {
        let field = CoefficientField::Prime(p);
        let sp = match parse_system_in(&text, field) {
            Ok(sp) => sp,
            Err(e) => {
                file_report.observe(format!("zero sets over {field}"), Err(format!("skipped: {e}")));
                continue;
            }
        };
        for strategy in all_strategies(sp.polys.len(), 0) {
            let tree = wang_decompose(&sp, strategy, DecomposeOptions::default())?;
            match check_decomposition_threads(&sp, &tree, common.threads) {
                Ok(r) => file_report.extend(prefixed(&format!("{strategy}"), r)),
                Err(chordal_td::Error::SearchSpaceTooLarge { .. }) => {
                    file_report.observe(format!("zero sets over {field}"), Err("skipped: search space too large".into()));
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    let mut random_report = CheckReport::default();
    for k in 0..runs {
        let run_seed = seed.wrapping_add(k as u64);
        let p = if k % 2 == 0 { 3 } else { 5 };
        let n = 2 + k % 3;
        let sys = random_chordal_system(n, 3, 3, CoefficientField::Prime(p), run_seed)?;
        for strategy in all_strategies(sys.polys.len(), run_seed) {
            let tree = wang_decompose(&sys, strategy, DecomposeOptions::default())?;
            let mut inner = check_decomposition_threads(&sys, &tree, common.threads)?;
            inner.extend(check_tree_chordality(&sys, &tree));
            summarize(
                &mut random_report,
                format!("random {k} (seed {run_seed}, p:{p}, n={n}) decompose {strategy}"),
                &inner,
            );
        }
        let n = 2 + k % 4;
        let sys = random_chordal_system(n, 3, 3, Q, run_seed)?;
        let inner = check_reduction_chain(&sys, &PremChain::default())?;
        summarize(
            &mut random_report,
            format!("random {k} (seed {run_seed}, q, n={n}) reduction"),
            &inner,
        );
    }

    let ok = file_report.passed() && random_report.passed();
    let stdout = if common.json {
        let mut all = file_report;
        all.extend(random_report);
        all.to_json() + "\n"
    } else {
        let mut out = String::new();
        if let Some(c) = file_report.checks.iter().find(|c| c.name.contains("premise:") && !c.pass) {
            let _ = writeln!(
                out,
                "premise unmet ({}); theorem checks on the file are observations",
                c.witness.as_deref().unwrap_or("")
            );
        }
        for (label, r) in [("file", &file_report), ("random", &random_report)] {
            let failed = r.failures().count();
            let notes = r.checks.iter().filter(|c| c.observation).count();
            let _ = writeln!(
                out,
                "{label}: {} checks, {failed} failed, {notes} observations",
                r.checks.len()
            );
            for c in r.failures() {
                let _ = writeln!(out, "  FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
            }
        }
        let _ = writeln!(out, "{}", if ok { "all checks passed" } else { "some checks failed" });
        out
    };
    Ok(Outcome { stdout, ok })
}

pub fn sparsity(file: &Path, common: &Common) -> Result<Outcome, CliError> {
    let s = load(file, Q)?;
    let sp = sparsity_of(&s.polys)?;
    let (a, b) = sp.as_f64();
    let stdout = if common.json {
        pretty(&json!({
            "s_v": sp.s_v.to_string(),
            "s_v_w": sp.s_v_w.to_string(),
            "s_v_decimal": a,
            "s_v_w_decimal": b,
        }))
    } else {
        format!("s_v = {} ({a:.6})\ns_v^w = {} ({b:.6})\n", sp.s_v, sp.s_v_w)
    };
    Ok(Outcome::ok(stdout))
}
