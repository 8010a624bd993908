//! Independent oracles: brute-force zero sets over small prime fields,
//! subgraph checks over reduction chains and decomposition trees, and a
//! seeded generator of chordal polynomial systems.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{CoefficientField, Scalar};
use crate::polygraph::{associated_graph, check_peo, is_subgraph, system_graph, VarGraph};
use crate::poly::{Monomial, Polynomial, Var};
use crate::reduction::{redbar_trace, LeveledSystem, ReductionMap};
use crate::sysparse::{default_names, PolySystem};
use crate::wang::{Branch, DecompTree};

/// Largest `p^n` the enumerators accept.
pub const MAX_POINTS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSet {
    pub p: u32,
    pub n: usize,
    pub points: BTreeSet<Vec<u32>>,
}

/// A polynomial flattened for fast evaluation mod p.
struct Compiled {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl Compiled {
    fn new(f: &Polynomial, p: u32) -> Result<Self> {
        if f.field() != CoefficientField::Prime(p) {
            return Err(Error::FieldMismatch(
                f.field().to_string(),
                CoefficientField::Prime(p).to_string(),
            ));
        }
        let terms = f
            .terms()
            .map(|(m, c)| {
                let c = match c {
                    Scalar::Modular(v) => *v as u64,
                    Scalar::Rational(_) => unreachable!("field checked above"),
                };
                let exps = m
                    .exponents()
                    .iter()
                    .map(|&(v, e)| (v.index() as usize - 1, e))
                    .collect();
                (c, exps)
            })
            .collect();
        Ok(Compiled { terms })
    }

    fn eval(&self, point: &[u32], p: u64) -> u64 {
        let mut acc = 0u64;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for &(i, e) in exps {
                for _ in 0..e {
                    t = t * point[i] as u64 % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

fn check_guard(p: u32, n: usize) -> Result<()> {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(p as u64);
        if total > MAX_POINTS {
            return Err(Error::SearchSpaceTooLarge { p, n });
        }
    }
    Ok(())
}

/// `Zero(eqs / ineqs)` in `F_p^n` by exhaustive enumeration.
pub fn zero_set_of(eqs: &[Polynomial], ineqs: &[Polynomial], n: usize, p: u32) -> Result<ZeroSet> {
    zero_set_threads(eqs, ineqs, n, p, 1)
}

/// [`zero_set_of`] with the first coordinate split across `threads` workers.
pub fn zero_set_threads(
    eqs: &[Polynomial],
    ineqs: &[Polynomial],
    n: usize,
    p: u32,
    threads: usize,
) -> Result<ZeroSet> {
    check_guard(p, n)?;
    let eqs: Vec<Compiled> = eqs.iter().map(|f| Compiled::new(f, p)).collect::<Result<_>>()?;
    let ineqs: Vec<Compiled> = ineqs.iter().map(|f| Compiled::new(f, p)).collect::<Result<_>>()?;
    let scan = |first: u32| -> Vec<Vec<u32>> {
        let mut found = Vec::new();
        let mut point = vec![0u32; n];
        if n > 0 {
            point[0] = first;
        }
        loop {
            let pm = p as u64;
            if eqs.iter().all(|f| f.eval(&point, pm) == 0)
                && ineqs.iter().all(|g| g.eval(&point, pm) != 0)
            {
                found.push(point.clone());
            }
            // odometer over coordinates 1..n
            let mut k = 1;
            while k < n {
                point[k] += 1;
                if point[k] < p {
                    break;
                }
                point[k] = 0;
                k += 1;
            }
            if k >= n {
                return found;
            }
        }
    };
    let firsts: Vec<u32> = if n == 0 { vec![0] } else { (0..p).collect() };
    let mut points = BTreeSet::new();
    if threads <= 1 || firsts.len() == 1 {
        for &a in &firsts {
            points.extend(scan(a));
        }
    } else {
        let chunks: Vec<&[u32]> = firsts.chunks(firsts.len().div_ceil(threads)).collect();
        let results: Vec<Vec<Vec<u32>>> = std::thread::scope(|s| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| s.spawn(|| chunk.iter().flat_map(|&a| scan(a)).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for r in results {
            points.extend(r);
        }
    }
    Ok(ZeroSet { p, n, points })
}

/// `Zero(S / ineqs)` for a system over `F_p`.
pub fn zero_set(system: &PolySystem, ineqs: &[Polynomial]) -> Result<ZeroSet> {
    let p = system.field.modulus().ok_or_else(|| {
        Error::FieldMismatch(system.field.to_string(), "p:<prime>".to_string())
    })?;
    zero_set_of(&system.polys, ineqs, system.num_vars(), p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
    /// Reported for information only; does not affect the verdict.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub observation: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn push(&mut self, name: impl Into<String>, result: std::result::Result<(), String>) {
        self.push_check(name, result, false);
    }

    pub fn observe(&mut self, name: impl Into<String>, result: std::result::Result<(), String>) {
        self.push_check(name, result, true);
    }

    fn push_check(&mut self, name: impl Into<String>, result: std::result::Result<(), String>, observation: bool) {
        let (pass, witness) = match result {
            Ok(()) => (true, None),
            Err(w) => (false, Some(w)),
        };
        self.checks.push(Check {
            name: name.into(),
            pass,
            witness,
            observation,
        });
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    /// True iff every non-observation check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass || c.observation)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass && !c.observation)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

fn describe_point(point: &[u32], vars: &[String]) -> String {
    let coords: Vec<String> = point
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{}={v}", vars.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1))))
        .collect();
    format!("({})", coords.join(", "))
}

/// Compares `Zero(S)` with the union of `Zero(T_i / U_i)` over the emitted
/// systems of `tree`.
pub fn check_decomposition(system: &PolySystem, tree: &DecompTree) -> Result<CheckReport> {
    check_decomposition_threads(system, tree, 1)
}

pub fn check_decomposition_threads(system: &PolySystem, tree: &DecompTree, threads: usize) -> Result<CheckReport> {
    if system.field != tree.field {
        return Err(Error::FieldMismatch(system.field.to_string(), tree.field.to_string()));
    }
    let p = system.field.modulus().ok_or_else(|| {
        Error::FieldMismatch(system.field.to_string(), "p:<prime>".to_string())
    })?;
    let n = system.num_vars();
    let lhs = zero_set_threads(&system.polys, &[], n, p, threads)?;
    let mut rhs = BTreeSet::new();
    for out in &tree.outputs {
        rhs.extend(zero_set_threads(&out.system.t, &out.system.u, n, p, threads)?.points);
    }
    let mut report = CheckReport::default();
    let result = match lhs.points.symmetric_difference(&rhs).next() {
        None => Ok(()),
        Some(pt) => {
            let side = if lhs.points.contains(pt) {
                "in Zero(F) only"
            } else {
                "in the union only"
            };
            Err(format!("{} {side}", describe_point(pt, &system.vars)))
        }
    };
    report.push(format!("zero sets agree over {}", system.field), result);
    Ok(report)
}

fn sub_check(a: &VarGraph, b: &VarGraph, names: &[String]) -> std::result::Result<(), String> {
    is_subgraph(a, b).map_err(|w| w.describe(Some(names)))
}

/// Checks that the natural variable order is a PEO of `G(S)`. Returns the
/// check outcome; the caller downgrades theorem checks when it fails.
fn premise(g: &VarGraph, names: &[String]) -> std::result::Result<(), String> {
    let order: Vec<Var> = g.vertices().iter().copied().collect();
    match check_peo(g, &order) {
        Ok(None) => Ok(()),
        Ok(Some(f)) => Err(format!(
            "{} has earlier neighbours {} and {} that are not adjacent",
            f.vertex.name(Some(names)),
            f.missing.0.name(Some(names)),
            f.missing.1.name(Some(names))
        )),
        Err(e) => Err(e.to_string()),
    }
}

const PREMISE: &str = "premise: G(F) chordal with the variable order as PEO";

/// Subgraph checks over every node and output of a decomposition tree.
pub fn check_tree_chordality(system: &PolySystem, tree: &DecompTree) -> CheckReport {
    let names = &system.vars;
    let gf = system_graph(system, false);
    let mut report = CheckReport::default();
    let prem = premise(&gf, names);
    let met = prem.is_ok();
    report.observe(PREMISE, prem);
    let record = |report: &mut CheckReport, name: String, r| {
        if met {
            report.push(name, r)
        } else {
            report.observe(name, r)
        }
    };
    for node in &tree.nodes {
        let g = associated_graph(&node.p, false);
        record(&mut report, format!("node {}: G(P) ⊆ G(F)", node.id), sub_check(&g, &gf, names));
        if node.branch == Branch::Right {
            if let Some(parent) = node.parent {
                let gp = associated_graph(&tree.nodes[parent].p, false);
                report.push(
                    format!("node {}: G(P) ⊆ G(parent)", node.id),
                    sub_check(&g, &gp, names),
                );
            }
        }
    }
    for (k, out) in tree.outputs.iter().enumerate() {
        let g = associated_graph(&out.system.t, false);
        record(
            &mut report,
            format!("system {}: G(T) ⊆ G(F)", k + 1),
            sub_check(&g, &gf, names),
        );
    }
    report
}

/// Subgraph checks over the chain `redbar_n(S), ..., redbar_1(S)`.
pub fn check_reduction_chain(system: &PolySystem, f: &dyn ReductionMap) -> Result<CheckReport> {
    let names = &system.vars;
    let gf = system_graph(system, false);
    let mut report = CheckReport::default();
    let prem = premise(&gf, names);
    let met = prem.is_ok();
    report.observe(PREMISE, prem);
    let record = |report: &mut CheckReport, name: String, r| {
        if met {
            report.push(name, r)
        } else {
            report.observe(name, r)
        }
    };
    let trace = redbar_trace(&LeveledSystem::from_system(system), 1, f)?;
    for w in trace.stages.windows(2) {
        let (prev_level, prev) = (&w[0].0, &w[0].1);
        let (level, cur) = (&w[1].0, &w[1].1);
        record(
            &mut report,
            format!("redbar_{level}: G ⊆ G(F)"),
            sub_check(&cur.graph(), &gf, names),
        );
        report.observe(
            format!("redbar_{level}: G ⊆ G(redbar_{prev_level})"),
            sub_check(&cur.graph(), &prev.graph(), names),
        );
    }
    let last = trace.last();
    if !last.has_nonzero_constant() {
        let r = match last.as_triangular_set() {
            Some(t) => sub_check(&associated_graph(&t, false), &gf, names),
            None => Err(format!("level {} remains", last.level())),
        };
        record(&mut report, "redbar_1: triangular set with G ⊆ G(F)".into(), r);
    }
    if trace.all_support_preserving() {
        let g = last.graph();
        let r = if g == gf {
            Ok(())
        } else {
            sub_check(&gf, &g, names).and(Err("graphs differ".into()))
        };
        record(&mut report, "support-preserving: G(redbar_1) = G(F)".into(), r);
    }
    Ok(report)
}

fn random_coefficient(rng: &mut ChaCha8Rng, field: CoefficientField) -> Scalar {
    match field {
        CoefficientField::Rationals => {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-5..=5);
            }
            field.from_i64(c)
        }
        CoefficientField::Prime(p) => field.from_i64(rng.gen_range(1..p as i64)),
    }
}

fn random_monomial(rng: &mut ChaCha8Rng, clique: &[Var], max_deg: u32) -> Monomial {
    let deg = rng.gen_range(0..=max_deg);
    let mut exps: BTreeMap<Var, u32> = BTreeMap::new();
    for _ in 0..deg {
        *exps.entry(*clique.choose(rng).expect("nonempty clique")).or_insert(0) += 1;
    }
    Monomial::from_pairs(exps)
}

/// Maximal cliques of a graph for which the natural order is a PEO.
fn peo_cliques(g: &VarGraph, n: usize) -> Vec<Vec<Var>> {
    let mut cands: Vec<BTreeSet<Var>> = (1..=n as u32)
        .map(|i| {
            let v = Var(i);
            let mut c: BTreeSet<Var> = g.neighbors(v).into_iter().filter(|u| *u < v).collect();
            c.insert(v);
            c
        })
        .collect();
    cands.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut out: Vec<BTreeSet<Var>> = Vec::new();
    for c in cands {
        if !out.iter().any(|o| c.is_subset(o)) {
            out.push(c);
        }
    }
    let mut out: Vec<Vec<Var>> = out.into_iter().map(|c| c.into_iter().collect()).collect();
    out.sort();
    out
}

/// A seeded random system whose associated graph is chordal with
/// `x1 < ... < xn` as a PEO. Each polynomial has at most `terms` terms (plus
/// any edge-covering terms) of total degree at most `max_deg`.
pub fn random_chordal_system(
    n: usize,
    max_deg: u32,
    terms: usize,
    field: CoefficientField,
    seed: u64,
) -> Result<PolySystem> {
    if n < 2 {
        return Err(Error::Precondition("random_chordal_system needs n >= 2".into()));
    }
    let max_deg = max_deg.max(1);
    let terms = terms.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut g = VarGraph::new();
        for i in 1..=n as u32 {
            g.add_vertex(Var(i));
        }
        let density: f64 = rng.gen_range(0.2..0.8);
        for a in 1..=n as u32 {
            for b in a + 1..=n as u32 {
                if rng.gen_bool(density) {
                    g.add_edge(Var(a), Var(b));
                }
            }
        }
        // fill-in closure eliminating x_n first
        for v in (1..=n as u32).rev() {
            let earlier: Vec<Var> = g.neighbors(Var(v)).into_iter().filter(|u| u.0 < v).collect();
            for (i, &a) in earlier.iter().enumerate() {
                for &b in &earlier[i + 1..] {
                    g.add_edge(a, b);
                }
            }
        }

        let mut polys = Vec::new();
        for clique in peo_cliques(&g, n) {
            let k = rng.gen_range(1..=3usize);
            let mut group: Vec<Vec<(Monomial, Scalar)>> = (0..k)
                .map(|_| {
                    (0..rng.gen_range(1..=terms))
                        .map(|_| (random_monomial(&mut rng, &clique, max_deg), random_coefficient(&mut rng, field)))
                        .collect()
                })
                .collect();
            let covered = |group: &Vec<Vec<(Monomial, Scalar)>>, a: Var, b: Option<Var>| {
                group.iter().any(|ts| {
                    let has = |v: Var| ts.iter().any(|(m, _)| m.degree_in(v) > 0);
                    has(a) && b.is_none_or(has)
                })
            };
            for (i, &a) in clique.iter().enumerate() {
                if !covered(&group, a, None) {
                    let deg = rng.gen_range(1..=max_deg);
                    let j = rng.gen_range(0..k);
                    group[j].push((Monomial::var_pow(a, deg), random_coefficient(&mut rng, field)));
                }
                for &b in &clique[i + 1..] {
                    if !covered(&group, a, Some(b)) {
                        let m = if max_deg >= 2 {
                            Monomial::from_pairs([(a, 1), (b, 1)])
                        } else {
                            Monomial::var_pow(b, 1)
                        };
                        let j = rng.gen_range(0..k);
                        let ts = &mut group[j];
                        ts.push((m, random_coefficient(&mut rng, field)));
                        if max_deg < 2 {
                            ts.push((Monomial::var_pow(a, 1), random_coefficient(&mut rng, field)));
                        }
                    }
                }
            }
            for ts in group {
                let f = Polynomial::from_terms(field, ts);
                if !f.is_zero() && !f.is_constant() && !polys.contains(&f) {
                    polys.push(f);
                }
            }
        }

        let system = PolySystem::new(default_names(n), polys, field);
        let built = system_graph(&system, false);
        if built == g && premise(&built, &system.vars).is_ok() {
            return Ok(system);
        }
    }
}
