//! Associated graphs of polynomial sets and the chordal-graph toolkit built
//! on them: perfect elimination orderings, maximum cardinality search with
//! chordless-cycle certificates, greedy chordal completion, treewidth bounds,
//! variable sparsity and DOT export.
//!
//! Orderings follow the convention used throughout the crate: `order[0]` is
//! the smallest vertex, and an ordering is perfect when every vertex together
//! with its *earlier* neighbours forms a clique.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Var};
use crate::sysparse::PolySystem;

pub type Edge = (Var, Var);

fn edge(a: Var, b: Var) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Undirected simple graph on variables, optionally edge-weighted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarGraph {
    vertices: BTreeSet<Var>,
    edges: BTreeSet<Edge>,
    weights: Option<BTreeMap<Edge, u32>>,
}

impl VarGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(
        vertices: impl IntoIterator<Item = Var>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Self {
        let mut g = VarGraph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_vertex(&mut self, v: Var) {
        self.vertices.insert(v);
    }

    /// Adds an edge (and its endpoints). Self-loops are ignored.
    pub fn add_edge(&mut self, a: Var, b: Var) {
        if a == b {
            return;
        }
        self.vertices.insert(a);
        self.vertices.insert(b);
        let e = edge(a, b);
        self.edges.insert(e);
        if let Some(w) = &mut self.weights {
            w.entry(e).or_insert(1);
        }
    }

    pub fn vertices(&self) -> &BTreeSet<Var> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: Var, b: Var) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn weight(&self, a: Var, b: Var) -> Option<u32> {
        self.weights.as_ref()?.get(&edge(a, b)).copied()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn neighbors(&self, v: Var) -> BTreeSet<Var> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    fn adjacency(&self) -> BTreeMap<Var, BTreeSet<Var>> {
        let mut adj: BTreeMap<Var, BTreeSet<Var>> =
            self.vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for &(a, b) in &self.edges {
            adj.entry(a).or_default().insert(b);
            adj.entry(b).or_default().insert(a);
        }
        adj
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }

    /// The same graph without weights.
    pub fn unweighted(&self) -> VarGraph {
        VarGraph {
            weights: None,
            ..self.clone()
        }
    }
}

/// `G(F)`: vertices are `supp(F)`, with an edge between two variables when
/// some polynomial contains both. In weighted mode each edge carries the
/// number of polynomials containing both endpoints.
pub fn associated_graph<'a>(
    polys: impl IntoIterator<Item = &'a Polynomial>,
    weighted: bool,
) -> VarGraph {
    let mut g = VarGraph::new();
    let mut weights: BTreeMap<Edge, u32> = BTreeMap::new();
    for p in polys {
        let supp: Vec<Var> = p.support().into_iter().collect();
        for (i, &a) in supp.iter().enumerate() {
            g.add_vertex(a);
            for &b in &supp[i + 1..] {
                g.add_edge(a, b);
                *weights.entry(edge(a, b)).or_insert(0) += 1;
            }
        }
    }
    if weighted {
        g.weights = Some(weights);
    }
    g
}

/// Associated graph of a whole system.
pub fn system_graph(system: &PolySystem, weighted: bool) -> VarGraph {
    associated_graph(&system.polys, weighted)
}

/// Where a candidate ordering stops being perfect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeoFailure {
    pub vertex: Var,
    pub missing: Edge,
}

pub fn check_peo(g: &VarGraph, order: &[Var]) -> Result<Option<PeoFailure>> {
    let as_set: BTreeSet<Var> = order.iter().copied().collect();
    if as_set.len() != order.len() || &as_set != g.vertices() {
        return Err(Error::NotAPermutation(format!(
            "{} entries for {} vertices",
            order.len(),
            g.num_vertices()
        )));
    }
    let adj = g.adjacency();
    let position: BTreeMap<Var, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for (j, &v) in order.iter().enumerate() {
        let earlier: Vec<Var> = adj[&v]
            .iter()
            .copied()
            .filter(|u| position[u] < j)
            .collect();
        for (a_idx, &a) in earlier.iter().enumerate() {
            for &b in &earlier[a_idx + 1..] {
                if !g.has_edge(a, b) {
                    return Ok(Some(PeoFailure {
                        vertex: v,
                        missing: edge(a, b),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// True iff `order` is a perfect elimination ordering of `g`.
pub fn is_peo(g: &VarGraph, order: &[Var]) -> Result<bool> {
    check_peo(g, order).map(|f| f.is_none())
}

/// Outcome of chordality testing with a checkable certificate either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChordalityCertificate {
    Chordal { peo: Vec<Var> },
    NotChordal { cycle: Vec<Var> },
}

impl ChordalityCertificate {
    pub fn is_chordal(&self) -> bool {
        matches!(self, ChordalityCertificate::Chordal { .. })
    }
}

/// Maximum cardinality search, ties broken by lowest variable index. The
/// visit order is returned smallest first.
pub fn maximum_cardinality_search(g: &VarGraph) -> Vec<Var> {
    let adj = g.adjacency();
    let mut weight: BTreeMap<Var, usize> = g.vertices().iter().map(|&v| (v, 0)).collect();
    let mut order = Vec::with_capacity(weight.len());
    while !weight.is_empty() {
        let (&v, _) = weight
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .expect("nonempty");
        weight.remove(&v);
        for u in &adj[&v] {
            if let Some(w) = weight.get_mut(u) {
                *w += 1;
            }
        }
        order.push(v);
    }
    order
}

pub fn find_peo(g: &VarGraph) -> ChordalityCertificate {
    let order = maximum_cardinality_search(g);
    match check_peo(g, &order).expect("MCS visits every vertex once") {
        None => ChordalityCertificate::Chordal { peo: order },
        Some(fail) => {
            let (u, w) = fail.missing;
            let cycle = chordless_cycle_through(g, fail.vertex, u, w)
                .or_else(|| find_chordless_cycle(g))
                .expect("a graph without a perfect elimination ordering has a chordless cycle");
            ChordalityCertificate::NotChordal { cycle }
        }
    }
}

/// Looks for an induced cycle `v, u, ..., w` where `u` and `w` are
/// non-adjacent neighbours of `v`.
fn chordless_cycle_through(g: &VarGraph, v: Var, u: Var, w: Var) -> Option<Vec<Var>> {
    let adj = g.adjacency();
    let blocked: BTreeSet<Var> = adj[&v]
        .iter()
        .copied()
        .filter(|&x| x != u && x != w)
        .chain(std::iter::once(v))
        .collect();
    let mut prev: BTreeMap<Var, Var> = BTreeMap::new();
    let mut queue = VecDeque::from([u]);
    let mut seen = BTreeSet::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == w {
            break;
        }
        for &y in &adj[&x] {
            if blocked.contains(&y) || !seen.insert(y) {
                continue;
            }
            // u and w are only allowed as endpoints
            if y == u {
                continue;
            }
            prev.insert(y, x);
            queue.push_back(y);
        }
    }
    if !seen.contains(&w) {
        return None;
    }
    let mut path = vec![w];
    let mut cur = w;
    while cur != u {
        cur = prev[&cur];
        path.push(cur);
    }
    path.reverse();
    let mut cycle = vec![v];
    cycle.extend(path);
    Some(normalize_cycle(cycle))
}

fn find_chordless_cycle(g: &VarGraph) -> Option<Vec<Var>> {
    let adj = g.adjacency();
    for (&v, nbrs) in &adj {
        let nbrs: Vec<Var> = nbrs.iter().copied().collect();
        for (i, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[i + 1..] {
                if !g.has_edge(u, w) {
                    if let Some(c) = chordless_cycle_through(g, v, u, w) {
                        return Some(c);
                    }
                }
            }
        }
    }
    None
}

/// Rotates a cycle to start at its smallest vertex and walks towards the
/// smaller of that vertex's two cycle neighbours.
fn normalize_cycle(mut cycle: Vec<Var>) -> Vec<Var> {
    let start = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| *v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle.rotate_left(start);
    if cycle.len() > 2 && cycle[cycle.len() - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// True iff `cycle` lists at least four distinct vertices forming a cycle of
/// `g` with no chord.
pub fn is_chordless_cycle(g: &VarGraph, cycle: &[Var]) -> bool {
    let k = cycle.len();
    if k < 4 || cycle.iter().collect::<BTreeSet<_>>().len() != k {
        return false;
    }
    for i in 0..k {
        for j in i + 1..k {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            if g.has_edge(cycle[i], cycle[j]) != consecutive {
                return false;
            }
        }
    }
    true
}

/// A chordal supergraph together with the added edges and a perfect
/// elimination ordering of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub graph: VarGraph,
    pub fill: BTreeSet<Edge>,
    pub order: Vec<Var>,
}

/// Completes `g` so that `order` (or, when absent, the reverse of a greedy
/// minimum-fill elimination sequence) is a perfect elimination ordering.
pub fn chordal_complete(g: &VarGraph, order: Option<&[Var]>) -> Result<Completion> {
    let order: Vec<Var> = match order {
        Some(o) => {
            check_peo(g, o)?;
            o.to_vec()
        }
        None => {
            let mut seq = min_fill_elimination(g);
            seq.reverse();
            seq
        }
    };
    let mut adj = g.adjacency();
    let mut fill = BTreeSet::new();
    let position: BTreeMap<Var, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for (j, &v) in order.iter().enumerate().rev() {
        let earlier: Vec<Var> = adj[&v]
            .iter()
            .copied()
            .filter(|u| position[u] < j)
            .collect();
        for (i, &a) in earlier.iter().enumerate() {
            for &b in &earlier[i + 1..] {
                if !adj[&a].contains(&b) {
                    adj.get_mut(&a).unwrap().insert(b);
                    adj.get_mut(&b).unwrap().insert(a);
                    fill.insert(edge(a, b));
                }
            }
        }
    }
    let mut graph = g.unweighted();
    for &(a, b) in &fill {
        graph.add_edge(a, b);
    }
    Ok(Completion { graph, fill, order })
}

/// Greedy elimination sequence: repeatedly remove the vertex whose removal
/// adds the fewest fill edges, lowest index on ties.
pub fn min_fill_elimination(g: &VarGraph) -> Vec<Var> {
    let mut adj = g.adjacency();
    let mut seq = Vec::with_capacity(adj.len());
    while !adj.is_empty() {
        let (&v, _) = adj
            .iter()
            .map(|(v, nbrs)| (v, fill_count(&adj, nbrs)))
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(b.0)))
            .expect("nonempty");
        eliminate(&mut adj, v);
        seq.push(v);
    }
    seq
}

fn fill_count(adj: &BTreeMap<Var, BTreeSet<Var>>, nbrs: &BTreeSet<Var>) -> usize {
    let nbrs: Vec<Var> = nbrs.iter().copied().collect();
    let mut missing = 0;
    for (i, a) in nbrs.iter().enumerate() {
        for b in &nbrs[i + 1..] {
            if !adj[a].contains(b) {
                missing += 1;
            }
        }
    }
    missing
}

fn eliminate(adj: &mut BTreeMap<Var, BTreeSet<Var>>, v: Var) -> usize {
    let nbrs = adj.remove(&v).unwrap_or_default();
    for a in &nbrs {
        let row = adj.get_mut(a).unwrap();
        row.remove(&v);
        row.extend(nbrs.iter().copied().filter(|b| b != a));
    }
    nbrs.len()
}

/// Upper bound on treewidth from the greedy completion, or the exact value
/// (for at most 10 vertices) when `exact` is set.
pub fn treewidth_bound(g: &VarGraph, exact: bool) -> Result<usize> {
    if exact {
        return exact_treewidth(g);
    }
    let mut adj = g.adjacency();
    let mut width = 0;
    for v in min_fill_elimination(g) {
        width = width.max(eliminate(&mut adj, v));
    }
    Ok(width)
}

fn exact_treewidth(g: &VarGraph) -> Result<usize> {
    let verts: Vec<Var> = g.vertices().iter().copied().collect();
    let n = verts.len();
    if n > 10 {
        return Err(Error::TooLargeForExact(n));
    }
    if n == 0 {
        return Ok(0);
    }
    let nbr_mask: Vec<u32> = verts
        .iter()
        .map(|&v| {
            verts
                .iter()
                .enumerate()
                .filter(|&(_, &u)| g.has_edge(u, v))
                .fold(0, |m, (i, _)| m | (1 << i))
        })
        .collect();
    // Vertices outside `s ∪ {v}` reachable from v through s.
    let q = |s: u32, v: usize| -> usize {
        let mut reach = 0u32;
        let mut frontier = 1u32 << v;
        let mut visited = frontier;
        while frontier != 0 {
            let i = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = nbr_mask[i] & !visited;
            visited |= nb;
            reach |= nb & !s;
            frontier |= nb & s;
        }
        (reach & !(1 << v)).count_ones() as usize
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![usize::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = usize::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            best = best.min(tw[rest as usize].max(q(rest, v)));
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize])
}

/// Variable sparsity `s_v` and weighted variable sparsity `s_v^w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sparsity {
    pub s_v: BigRational,
    pub s_v_w: BigRational,
}

impl Sparsity {
    /// `(s_v, s_v^w)` as floating point, for display.
    pub fn as_f64(&self) -> (f64, f64) {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        (f(&self.s_v), f(&self.s_v_w))
    }
}

pub fn sparsity(polys: &[Polynomial]) -> Result<Sparsity> {
    let g = associated_graph(polys, true);
    let n = g.num_vertices();
    if n < 2 {
        return Err(Error::DegenerateGraph(n));
    }
    let pairs = BigInt::from(n * (n - 1) / 2);
    let weight_sum: u64 = g
        .edges()
        .iter()
        .map(|&(a, b)| g.weight(a, b).unwrap_or(1) as u64)
        .sum();
    Ok(Sparsity {
        s_v: BigRational::new(BigInt::from(g.num_edges()), pairs.clone()),
        s_v_w: BigRational::new(BigInt::from(weight_sum), pairs * BigInt::from(polys.len())),
    })
}

/// Why `A` is not a subgraph of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgraphWitness {
    Vertex(Var),
    Edge(Var, Var),
}

impl SubgraphWitness {
    pub fn describe(&self, names: Option<&[String]>) -> String {
        match self {
            SubgraphWitness::Vertex(v) => format!("vertex {}", v.name(names)),
            SubgraphWitness::Edge(a, b) => {
                format!("edge ({},{})", a.name(names), b.name(names))
            }
        }
    }
}

/// `Ok(())` iff `V(a) ⊆ V(b)` and `E(a) ⊆ E(b)`; otherwise the first
/// offending vertex or edge.
pub fn is_subgraph(a: &VarGraph, b: &VarGraph) -> std::result::Result<(), SubgraphWitness> {
    if let Some(&v) = a.vertices().iter().find(|v| !b.vertices().contains(v)) {
        return Err(SubgraphWitness::Vertex(v));
    }
    if let Some(&(x, y)) = a.edges().iter().find(|e| !b.edges().contains(e)) {
        return Err(SubgraphWitness::Edge(x, y));
    }
    Ok(())
}

/// Graphviz rendering, byte-deterministic: vertices by index, edges in
/// lexicographic order, weights as labels.
pub fn to_dot(g: &VarGraph, names: Option<&[String]>) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", v.name(names));
    }
    for &(a, b) in g.edges() {
        let _ = match g.weight(a, b) {
            Some(w) => writeln!(
                out,
                "  {} -- {} [label=\"{w}\"];",
                a.name(names),
                b.name(names)
            ),
            None => writeln!(out, "  {} -- {};", a.name(names), b.name(names)),
        };
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysparse::parse_system;

    fn v(i: u32) -> Var {
        Var(i)
    }

    fn edges(list: &[(u32, u32)]) -> BTreeSet<Edge> {
        list.iter().map(|&(a, b)| edge(v(a), v(b))).collect()
    }

    fn graph(n: u32, list: &[(u32, u32)]) -> VarGraph {
        VarGraph::from_edges((1..=n).map(v), edges(list))
    }

    const P: &str = "x2+x1\nx3+x1\nx4^2+x2\nx4^3+x3\nx5+x2\nx5+x3+x2";
    const Q: &str = "x2+x1\nx3+x1\nx3\nx4^2+x2\nx4^3+x3\nx5+x2";

    fn g_of(text: &str, weighted: bool) -> VarGraph {
        system_graph(&parse_system(text).unwrap(), weighted)
    }

    #[test]
    fn associated_graphs_of_the_first_example() {
        assert_eq!(
            g_of(P, false).edges(),
            &edges(&[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (2, 5), (3, 5)])
        );
        assert_eq!(
            g_of(Q, false).edges(),
            &edges(&[(1, 2), (1, 3), (2, 4), (3, 4), (2, 5)])
        );
    }

    #[test]
    fn weighted_graph_counts_polynomials() {
        let g = g_of(P, true);
        for &(a, b) in g.edges() {
            let expected = if (a, b) == (v(2), v(5)) { 2 } else { 1 };
            assert_eq!(g.weight(a, b), Some(expected));
        }
    }

    #[test]
    fn peo_checks() {
        let order: Vec<Var> = (1..=5).map(v).collect();
        assert_eq!(check_peo(&g_of(P, false), &order).unwrap(), None);
        assert_eq!(
            check_peo(&g_of(Q, false), &order).unwrap(),
            Some(PeoFailure {
                vertex: v(4),
                missing: (v(2), v(3))
            })
        );
        let single = VarGraph::from_edges([v(1)], []);
        assert_eq!(check_peo(&single, &[v(1)]).unwrap(), None);
        assert!(check_peo(&single, &[v(1), v(1)]).is_err());
        assert!(check_peo(&single, &[v(2)]).is_err());
    }

    #[test]
    fn mcs_certificates() {
        match find_peo(&g_of(P, false)) {
            ChordalityCertificate::Chordal { peo } => {
                assert_eq!(peo, (1..=5).map(v).collect::<Vec<_>>());
            }
            other => panic!("expected chordal, got {other:?}"),
        }
        let gq = g_of(Q, false);
        match find_peo(&gq) {
            ChordalityCertificate::NotChordal { cycle } => {
                assert_eq!(cycle, vec![v(1), v(2), v(4), v(3)]);
                assert!(is_chordless_cycle(&gq, &cycle));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        let k4 = graph(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert!(find_peo(&k4).is_chordal());
        assert!(is_peo(&k4, &[v(3), v(1), v(4), v(2)]).unwrap());
    }

    #[test]
    fn long_chordless_cycle_is_found() {
        let c6 = graph(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)]);
        let ChordalityCertificate::NotChordal { cycle } = find_peo(&c6) else {
            panic!("C6 is not chordal");
        };
        assert_eq!(cycle.len(), 6);
        assert!(is_chordless_cycle(&c6, &cycle));
    }

    #[test]
    fn completion_cases() {
        let gq = g_of(Q, false);
        let c = chordal_complete(&gq, None).unwrap();
        assert_eq!(c.fill.len(), 1);
        assert!(c.fill == edges(&[(2, 3)]) || c.fill == edges(&[(1, 4)]));
        assert!(find_peo(&c.graph).is_chordal());
        assert!(is_peo(&c.graph, &c.order).unwrap());

        let gp = g_of(P, false);
        let c = chordal_complete(&gp, None).unwrap();
        assert!(c.fill.is_empty());
        assert_eq!(c.graph, gp);

        let path = graph(3, &[(1, 2), (2, 3)]);
        assert!(chordal_complete(&path, None).unwrap().fill.is_empty());

        let natural: Vec<Var> = (1..=5).map(v).collect();
        let c = chordal_complete(&gq, Some(&natural)).unwrap();
        assert_eq!(c.fill, edges(&[(2, 3)]));
        assert!(is_peo(&c.graph, &natural).unwrap());
    }

    #[test]
    fn treewidth_cases() {
        let k4 = graph(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(treewidth_bound(&k4, false).unwrap(), 3);
        assert_eq!(treewidth_bound(&k4, true).unwrap(), 3);
        let path = graph(3, &[(1, 2), (2, 3)]);
        assert_eq!(treewidth_bound(&path, false).unwrap(), 1);
        assert_eq!(treewidth_bound(&g_of(Q, false), true).unwrap(), 2);
        let big = graph(11, &[]);
        assert_eq!(treewidth_bound(&big, true), Err(Error::TooLargeForExact(11)));
        assert_eq!(treewidth_bound(&VarGraph::new(), true).unwrap(), 0);
    }

    #[test]
    fn sparsity_values() {
        let s = sparsity(&parse_system(P).unwrap().polys).unwrap();
        assert_eq!(s.s_v, BigRational::new(7.into(), 10.into()));
        assert_eq!(s.s_v_w, BigRational::new(2.into(), 15.into()));
        let f = parse_system("x2+x1+2\n(x2+2)x3+x1\n(x3+x2)x4+x3-1\nx4+x2").unwrap();
        assert_eq!(
            sparsity(&f.polys).unwrap().s_v,
            BigRational::new(5.into(), 6.into())
        );
        let one = parse_system("x1^2 + 1").unwrap();
        assert_eq!(sparsity(&one.polys), Err(Error::DegenerateGraph(1)));
    }

    #[test]
    fn subgraph_cases() {
        let t = parse_system("x2+x1\nx3+x1\n-x2*x4+x3\nx5+x2").unwrap();
        let gt = system_graph(&t, false);
        let gq = g_of(Q, false);
        assert_eq!(is_subgraph(&gt, &gq), Err(SubgraphWitness::Edge(v(2), v(3))));
        assert_eq!(is_subgraph(&gq, &g_of(P, false)), Ok(()));
        assert_eq!(is_subgraph(&gq, &gq), Ok(()));
        let extra = VarGraph::from_edges([v(9)], []);
        assert_eq!(is_subgraph(&extra, &gq), Err(SubgraphWitness::Vertex(v(9))));
    }

    #[test]
    fn dot_output() {
        assert_eq!(to_dot(&VarGraph::new(), None), "graph G {\n}\n");
        let g = graph(2, &[(1, 2)]);
        assert!(to_dot(&g, None).contains("  x1 -- x2;\n"));
        let wp = g_of(P, true);
        assert!(to_dot(&wp, None).contains("x2 -- x5 [label=\"2\"];"));
    }
}
