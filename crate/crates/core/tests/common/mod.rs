#![allow(dead_code)]

use chordal_td::field::{CoefficientField, Scalar};
use chordal_td::poly::{Monomial, Polynomial, Var};
use chordal_td::polygraph::VarGraph;
use rand::Rng;

pub fn random_poly<R: Rng>(rng: &mut R, n: u32, field: CoefficientField, max_terms: usize, max_deg: u32) -> Polynomial {
    let count = rng.gen_range(0..=max_terms);
    let terms = (0..count).map(|_| {
        let m = Monomial::from_pairs((1..=n).map(|i| (Var(i), rng.gen_range(0..=max_deg))));
        let c = field.from_i64(rng.gen_range(-6..=6));
        (m, c)
    });
    Polynomial::from_terms(field, terms.collect::<Vec<_>>())
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Scalar {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=4);
    let f = CoefficientField::Rationals;
    f.mul(&f.from_i64(num), &f.inv(&f.from_i64(den)).unwrap())
}

pub fn random_graph<R: Rng>(rng: &mut R, n: u32, density: f64) -> VarGraph {
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

fn masks(g: &VarGraph) -> (Vec<Var>, Vec<u32>) {
    let verts: Vec<Var> = g.vertices().iter().copied().collect();
    let adj = verts
        .iter()
        .map(|&v| {
            verts
                .iter()
                .enumerate()
                .filter(|&(_, &u)| g.has_edge(u, v))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect();
    (verts, adj)
}

/// Searches all vertex permutations for a perfect elimination ordering,
/// abandoning a prefix as soon as its last vertex fails the clique test.
pub fn brute_force_chordal(g: &VarGraph) -> bool {
    let (verts, adj) = masks(g);
    fn extend(placed: u32, n: usize, adj: &[u32]) -> bool {
        if placed.count_ones() as usize == n {
            return true;
        }
        (0..n).any(|v| {
            if placed & (1 << v) != 0 {
                return false;
            }
            let earlier = adj[v] & placed;
            let clique = (0..n)
                .filter(|&u| earlier & (1 << u) != 0)
                .all(|u| earlier & !(adj[u] | 1 << u) == 0);
            clique && extend(placed | 1 << v, n, adj)
        })
    }
    extend(0, verts.len(), &adj)
}

/// Minimum over all elimination orderings of the largest neighbourhood at
/// elimination time.
pub fn brute_force_treewidth(g: &VarGraph) -> usize {
    let (verts, adj) = masks(g);
    let n = verts.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    loop {
        let mut a = adj.clone();
        let mut width = 0;
        let mut gone = 0u32;
        for &v in &perm {
            let nb = a[v] & !gone;
            width = width.max(nb.count_ones() as usize);
            for (u, row) in a.iter_mut().enumerate() {
                if nb & (1 << u) != 0 {
                    *row |= nb & !(1 << u);
                }
            }
            gone |= 1 << v;
        }
        best = best.min(width);
        if !next_permutation(&mut perm) {
            return if n == 0 { 0 } else { best };
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
