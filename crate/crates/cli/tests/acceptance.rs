//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdict lines always appear in the output.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, ExitCode, Output};
use std::time::Instant;

use chordal_td::field::CoefficientField;
use chordal_td::poly::Var;
use chordal_td::polygraph::{
    associated_graph, check_peo, find_peo, is_chordless_cycle, is_subgraph, system_graph, ChordalityCertificate,
    SubgraphWitness, VarGraph,
};
use chordal_td::reduction::{red, redbar, LeveledSystem, PivotStrategy, PremChain};
use chordal_td::sysparse::{parse_polynomial, parse_system, parse_system_in, parse_tree};
use chordal_td::verify::{check_decomposition, check_reduction_chain, random_chordal_system};
use chordal_td::wang::{decompose, DecomposeOptions};
use chordal_td::Polynomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

const Q: CoefficientField = CoefficientField::Rationals;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chordal-td"))
        .args(args)
        .env_remove("CHORDAL_TD_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn p(text: &str) -> Polynomial {
    parse_polynomial(text, Q).expect("valid polynomial")
}

fn json_edges(v: &Value) -> BTreeSet<(String, String)> {
    v["edges"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|e| (e[0].as_str().unwrap_or("").to_string(), e[1].as_str().unwrap_or("").to_string()))
        .collect()
}

fn edge_set(list: &[(u32, u32)]) -> BTreeSet<(String, String)> {
    list.iter().map(|(a, b)| (format!("x{a}"), format!("x{b}"))).collect()
}

fn figure_one() -> Verdict {
    for (file, expected) in [
        ("P.psys", edge_set(&[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (2, 5), (3, 5)])),
        ("Q.psys", edge_set(&[(1, 2), (1, 3), (2, 4), (3, 4), (2, 5)])),
    ] {
        let out = run(&["graph", &data(file), "--json"]);
        let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        ensure(json_edges(&v) == expected, format!("{file}: edges {:?}", json_edges(&v)))?;
    }

    let out = run(&["chordal", &data("P.psys")]);
    ensure(out.status.code() == Some(0), "P: exit code")?;
    ensure(
        stdout(&out) == "chordal: yes; peo: x1 < x2 < x3 < x4 < x5\n",
        format!("P: {}", stdout(&out)),
    )?;
    let gp = system_graph(&parse_system(&std::fs::read_to_string(data("P.psys")).unwrap()).unwrap(), false);
    let natural: Vec<Var> = (1..=5).map(Var).collect();
    ensure(check_peo(&gp, &natural).unwrap().is_none(), "x1<..<x5 fails check_peo")?;

    let out = run(&["chordal", &data("Q.psys"), "--json"]);
    ensure(out.status.code() == Some(1), "Q: exit code")?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let names: Vec<String> = v["cycle"]
        .as_array()
        .ok_or("Q: no cycle")?
        .iter()
        .map(|n| n.as_str().unwrap_or("").to_string())
        .collect();
    let cycle: Vec<Var> = names
        .iter()
        .map(|n| n.trim_start_matches('x').parse().map(Var))
        .collect::<Result<_, _>>()
        .map_err(|e| format!("{e}"))?;
    let gq = system_graph(&parse_system(&std::fs::read_to_string(data("Q.psys")).unwrap()).unwrap(), false);
    ensure(cycle.len() == 4 && is_chordless_cycle(&gq, &cycle), format!("Q: witness {names:?}"))?;
    Ok(format!("P chordal, Q witness {}", names.join("-")))
}

fn counterexamples() -> Verdict {
    let q = parse_system(&std::fs::read_to_string(data("Q.psys")).unwrap()).unwrap();
    let t = parse_system(&std::fs::read_to_string(data("T.psys")).unwrap()).unwrap();
    let w = is_subgraph(&system_graph(&t, false), &system_graph(&q, false));
    ensure(
        w == Err(SubgraphWitness::Edge(Var(2), Var(3))),
        format!("G(T) vs G(Q): {w:?}"),
    )?;

    let pp = LeveledSystem::from_system(&parse_system(&std::fs::read_to_string(data("P.psys")).unwrap()).unwrap());
    let map = PremChain::default();
    let (red5, _) = red(&pp, 5, &map).map_err(|e| e.to_string())?;
    let q_prime = redbar(&pp, 4, &map).map_err(|e| e.to_string())?;
    ensure(
        is_subgraph(&q_prime.graph(), &red5.graph()).is_err(),
        "G(redbar_4(P)) is a subgraph of G(red_5(P))",
    )?;
    ensure(
        is_subgraph(&q_prime.graph(), &pp.graph()).is_ok(),
        "G(redbar_4(P)) is not a subgraph of G(P)",
    )?;
    Ok("G(T) ⊄ G(Q) at (x2,x3); G(Q') ⊄ G(Q), G(Q') ⊆ G(P)".into())
}

fn walkthrough() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let tree_path = dir.path().join("out.json");
    let out = run(&["decompose", &data("illus.psys"), "--pivot", "index:3", "--tree", tree_path.to_str().unwrap()]);
    ensure(out.status.code() == Some(0), "decompose failed")?;
    let text = std::fs::read_to_string(&tree_path).map_err(|e| e.to_string())?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let systems = doc["systems"].as_array().ok_or("no systems")?;
    ensure(systems.len() == 3, format!("{} systems", systems.len()))?;
    let t2: Vec<&str> = systems[1]["T"]
        .as_array()
        .ok_or("no T")?
        .iter()
        .map(|s| s.as_str().unwrap_or(""))
        .collect();
    ensure(t2 == ["x1 + 1", "x2 + 1", "x3 - 1", "x4 + x2"], format!("T2 = {t2:?}"))?;

    let tree = parse_tree(&text, Q).map_err(|e| e.to_string())?;
    for inter in ["(x2-1)x3+x2^2+1", "x2^3+2x2^2-(x1-1)x2+x1+2"] {
        let target = p(inter);
        ensure(
            tree.nodes.iter().any(|n| n.p.contains(&target)),
            format!("{inter} not in the tree"),
        )?;
    }
    Ok(format!("3 systems, T2 = [{}], {} nodes", t2.join(", "), tree.nodes.len()))
}

fn zero_sets() -> Verdict {
    let text = std::fs::read_to_string(data("illus.psys")).unwrap();
    let mut counts = Vec::new();
    for prime in [3u32, 5, 7] {
        let field = CoefficientField::Prime(prime);
        let s = parse_system_in(&text, field).map_err(|e| e.to_string())?;
        let tree = decompose(&s, PivotStrategy::Index(3), DecomposeOptions::default()).map_err(|e| e.to_string())?;
        let report = check_decomposition(&s, &tree).map_err(|e| e.to_string())?;
        ensure(report.passed(), format!("F_{prime}: {:?}", report.checks))?;
        let zeros = chordal_td::verify::zero_set(&s, &[]).map_err(|e| e.to_string())?;
        counts.push(format!("|Zero| over F_{prime} = {}", zeros.points.len()));
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let tree_path = dir.path().join("t.json");
    run(&["decompose", &data("illus.psys"), "--pivot", "index:3", "--tree", tree_path.to_str().unwrap()]);
    let out = run(&["verify", &data("illus.psys"), tree_path.to_str().unwrap(), "--primes", "3,5,7"]);
    ensure(out.status.code() == Some(0), format!("verify: {}", stdout(&out)))?;
    Ok(counts.join(", "))
}

fn theorem_suite() -> Verdict {
    let (mut nodes, mut outputs, mut systems) = (0usize, 0usize, 0usize);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..200u64 {
        let prime = if seed % 2 == 0 { 3 } else { 5 };
        let n = 2 + (seed % 3) as usize;
        let s = random_chordal_system(n, 3, 3, CoefficientField::Prime(prime), seed).map_err(|e| e.to_string())?;
        let gf = system_graph(&s, false);
        let k = rng.gen_range(1..=s.polys.len().max(1));
        for strategy in [PivotStrategy::First, PivotStrategy::MinTerms, PivotStrategy::MinSupport, PivotStrategy::Index(k)] {
            let tree = decompose(&s, strategy, DecomposeOptions::default()).map_err(|e| e.to_string())?;
            for node in &tree.nodes {
                is_subgraph(&associated_graph(&node.p, false), &gf)
                    .map_err(|w| format!("seed {seed} {strategy} node {}: {w:?}", node.id))?;
                nodes += 1;
            }
            for out in &tree.outputs {
                is_subgraph(&associated_graph(&out.system.t, false), &gf)
                    .map_err(|w| format!("seed {seed} {strategy} output: {w:?}"))?;
                outputs += 1;
            }
        }
        systems += 1;
    }
    let mut chains = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed % 4) as usize;
        let s = random_chordal_system(n, 3, 3, Q, 10_000 + seed).map_err(|e| e.to_string())?;
        let report = check_reduction_chain(&s, &PremChain::default()).map_err(|e| e.to_string())?;
        ensure(report.checks[0].pass, format!("seed {seed}: generator premise"))?;
        ensure(report.passed(), format!("seed {seed}: {:?}", report.failures().next()))?;
        chains += 1;
    }
    Ok(format!(
        "{systems} systems x 4 strategies: {nodes} nodes, {outputs} outputs; {chains} rational chains"
    ))
}

fn random_graph(rng: &mut ChaCha8Rng, n: u32) -> VarGraph {
    let density = rng.gen_range(0.15..0.9);
    let mut g = VarGraph::new();
    for i in 1..=n {
        g.add_vertex(Var(i));
    }
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.gen_bool(density) {
                g.add_edge(Var(a), Var(b));
            }
        }
    }
    g
}

/// Exhaustive search over vertex orderings, pruning a prefix once its last
/// vertex has non-adjacent earlier neighbours.
fn some_ordering_is_perfect(g: &VarGraph) -> bool {
    let verts: Vec<Var> = g.vertices().iter().copied().collect();
    fn extend(g: &VarGraph, verts: &[Var], placed: &mut Vec<Var>) -> bool {
        if placed.len() == verts.len() {
            return true;
        }
        for &v in verts {
            if placed.contains(&v) {
                continue;
            }
            let earlier: Vec<Var> = placed.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
            let clique = earlier
                .iter()
                .enumerate()
                .all(|(i, &a)| earlier[i + 1..].iter().all(|&b| g.has_edge(a, b)));
            if clique {
                placed.push(v);
                if extend(g, verts, placed) {
                    return true;
                }
                placed.pop();
            }
        }
        false
    }
    extend(g, &verts, &mut Vec::new())
}

fn mcs_vs_brute_force() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1_000);
    let (mut yes, mut no) = (0, 0);
    for i in 0..1000 {
        let n = rng.gen_range(1..=8);
        let g = random_graph(&mut rng, n);
        let brute = some_ordering_is_perfect(&g);
        match find_peo(&g) {
            ChordalityCertificate::Chordal { peo } => {
                ensure(brute, format!("graph {i}: MCS chordal, brute force not"))?;
                ensure(check_peo(&g, &peo).unwrap().is_none(), format!("graph {i}: bad PEO"))?;
                yes += 1;
            }
            ChordalityCertificate::NotChordal { cycle } => {
                ensure(!brute, format!("graph {i}: MCS not chordal, brute force chordal"))?;
                ensure(
                    cycle.len() >= 4 && is_chordless_cycle(&g, &cycle),
                    format!("graph {i}: bad witness {cycle:?}"),
                )?;
                no += 1;
            }
        }
    }
    Ok(format!("1000 graphs, {yes} chordal, {no} not, 0 disagreements"))
}

fn random_poly(rng: &mut ChaCha8Rng, field: CoefficientField) -> Polynomial {
    let terms: Vec<_> = (0..rng.gen_range(1..=5))
        .map(|_| {
            let m = chordal_td::Monomial::from_pairs((1..=4).map(|i| (Var(i), rng.gen_range(0..=3))));
            (m, field.from_i64(rng.gen_range(-7..=7)))
        })
        .collect();
    Polynomial::from_terms(field, terms)
}

fn prem_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut count = 0;
    while count < 1000 {
        let field = if count % 2 == 0 { Q } else { CoefficientField::Prime(7) };
        let f = random_poly(&mut rng, field);
        let t = random_poly(&mut rng, field);
        let x = Var(rng.gen_range(1..=4));
        let d = t.degree_in(x);
        if d == 0 {
            continue;
        }
        let pd = f.pseudo_remainder(&t, x).map_err(|e| e.to_string())?;
        let ini = t.coeff_in(x, d);
        ensure(
            &ini.pow(pd.multiplier_exponent) * &f == &(&pd.quotient * &t) + &pd.remainder,
            format!("identity fails for F = {f}, T = {t}, x = {x}"),
        )?;
        ensure(pd.remainder.degree_in(x) < d, "remainder degree too high")?;
        count += 1;
    }
    let cases = [
        ("x5+x3+x2", "x5+x2", 5, "x3"),
        ("x4^3+x3", "x4^2+x2", 4, "-x2*x4+x3"),
        ("x4+x2", "(x3+x2)x4+x3-1", 4, "(x2-1)x3+x2^2+1"),
    ];
    for (f, t, x, expected) in cases {
        let r = p(f).prem(&p(t), Var(x)).map_err(|e| e.to_string())?;
        ensure(r == p(expected), format!("prem({f}, {t}) = {r}"))?;
    }
    Ok("1000 random triples, 3 reference remainders".into())
}

fn sparsity_values() -> Verdict {
    let get = |file: &str| -> Result<Value, String> {
        serde_json::from_slice(&run(&["sparsity", &data(file), "--json"]).stdout).map_err(|e| e.to_string())
    };
    let p = get("P.psys")?;
    let f = get("illus.psys")?;
    ensure(p["s_v"] == "7/10", format!("s_v(P) = {}", p["s_v"]))?;
    ensure(p["s_v_w"] == "2/15", format!("s_v^w(P) = {}", p["s_v_w"]))?;
    ensure(f["s_v"] == "5/6", format!("s_v(F) = {}", f["s_v"]))?;
    Ok("s_v(P) = 7/10, s_v^w(P) = 2/15, s_v(F) = 5/6".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("associated graphs and chordality of P and Q", figure_one),
        ("subgraph counterexamples", counterexamples),
        ("worked decomposition example", walkthrough),
        ("zero-set equivalence over F_3, F_5, F_7", zero_sets),
        ("subgraph theorems on random chordal systems", theorem_suite),
        ("MCS against exhaustive search", mcs_vs_brute_force),
        ("pseudo-division identity", prem_identity),
        ("variable sparsity", sparsity_values),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {} PASS  {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
