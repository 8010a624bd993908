//! Wang's method for triangular decomposition, recording the full binary
//! decomposition tree.
//!
//! Every node is a pair `(P, Q)` processed at some level `i`. A node with
//! `#P^(i) > 1` splits on a minimal-degree pivot `T`:
//!
//! * left:  `ini(T) != 0`, the other elements of `P^(i)` are replaced by their
//!   pseudo-remainders by `T` and `ini(T)` joins `Q`;
//! * right: `ini(T) = 0`, `T` is replaced by `ini(T)` and `tail(T)`.
//!
//! The right child is omitted when `ini(T)` is a nonzero constant. A node whose
//! `P` reaches level 0 without a nonzero constant yields the triangular system
//! `(P, Q)`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::poly::{Polynomial, Var};
use crate::reduction::choose_pivot;
use crate::sysparse::PolySystem;

pub use crate::reduction::PivotStrategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Root,
    Left,
    Right,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Root => "root",
            Branch::Left => "left",
            Branch::Right => "right",
        }
    }

    pub fn parse(s: &str) -> Option<Branch> {
        match s {
            "root" => Some(Branch::Root),
            "left" => Some(Branch::Left),
            "right" => Some(Branch::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Equations `t` (ascending leading variable) and inequations `u`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriangularSystem {
    pub t: Vec<Polynomial>,
    pub u: Vec<Polynomial>,
}

/// One node of the decomposition tree. `level` is the level at which the
/// node was split or became a leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub branch: Branch,
    pub level: usize,
    pub p: Vec<Polynomial>,
    pub q: Vec<Polynomial>,
    pub leaf: bool,
}

impl DecompNode {
    pub fn has_nonzero_constant(&self) -> bool {
        self.p.iter().any(Polynomial::is_nonzero_constant)
    }

    /// Leaves at level 0 without a nonzero constant are the emitted ones.
    pub fn is_output(&self) -> bool {
        self.leaf && self.level == 0 && !self.has_nonzero_constant()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmittedSystem {
    pub leaf: usize,
    pub system: TriangularSystem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompTree {
    pub vars: Vec<String>,
    pub field: CoefficientField,
    pub strategy: PivotStrategy,
    pub nodes: Vec<DecompNode>,
    pub outputs: Vec<EmittedSystem>,
}

impl DecompTree {
    pub fn root(&self) -> &DecompNode {
        &self.nodes[0]
    }

    pub fn children(&self, id: usize) -> impl Iterator<Item = &DecompNode> {
        self.nodes.iter().filter(move |n| n.parent == Some(id))
    }

    /// Length of the path from the root to `id`.
    pub fn depth(&self, mut id: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[id].parent {
            id = p;
            d += 1;
        }
        d
    }
}

/// The surviving triangular systems, in emission order.
pub fn emitted_systems(tree: &DecompTree) -> Vec<TriangularSystem> {
    tree.outputs.iter().map(|o| o.system.clone()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Close a branch as soon as a nonzero constant appears instead of
    /// filtering at the end.
    pub early_prune: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { early_prune: true }
    }
}

/// Result of splitting one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub pivot: Polynomial,
    pub left: (Vec<Polynomial>, Vec<Polynomial>),
    pub right: Option<(Vec<Polynomial>, Vec<Polynomial>)>,
}

fn push_unique(v: &mut Vec<Polynomial>, p: Polynomial) {
    if !p.is_zero() && !v.contains(&p) {
        v.push(p);
    }
}

/// Splits `(P, Q)` at level `i` on a minimal-degree pivot of `P^(i)`.
pub fn split(
    p: &[Polynomial],
    q: &[Polynomial],
    i: usize,
    strategy: PivotStrategy,
    preferred: Option<&Polynomial>,
) -> Result<Split> {
    let x = Var(i as u32);
    let stratum: Vec<&Polynomial> = p
        .iter()
        .filter(|f| f.leading_variable() == Some(x))
        .collect();
    if stratum.len() < 2 {
        return Err(Error::Precondition(format!(
            "split needs at least two polynomials with leading variable {x}"
        )));
    }
    let pivot = stratum[choose_pivot(&stratum, x, strategy, preferred)].clone();
    let (init, tail, _) = pivot.initial_and_tail()?;

    let mut left_p = Vec::with_capacity(p.len());
    let mut placed = false;
    for f in p {
        if f.leading_variable() == Some(x) {
            if !placed {
                push_unique(&mut left_p, pivot.clone());
                placed = true;
            }
        } else {
            push_unique(&mut left_p, f.clone());
        }
    }
    for f in &stratum {
        if **f != pivot {
            push_unique(&mut left_p, f.prem(&pivot, x)?);
        }
    }
    let mut left_q = q.to_vec();
    if !init.is_nonzero_constant() {
        push_unique(&mut left_q, init.clone());
    }

    let right = if init.is_nonzero_constant() {
        None
    } else {
        let mut right_p = Vec::with_capacity(p.len() + 1);
        for f in p {
            if *f == pivot {
                push_unique(&mut right_p, init.clone());
                push_unique(&mut right_p, tail.clone());
            } else {
                push_unique(&mut right_p, f.clone());
            }
        }
        Some((right_p, q.to_vec()))
    };

    Ok(Split {
        pivot,
        left: (left_p, left_q),
        right,
    })
}

/// [`split`] applied to a recorded node, at the node's level.
pub fn split_node(node: &DecompNode, strategy: PivotStrategy, preferred: Option<&Polynomial>) -> Result<Split> {
    split(&node.p, &node.q, node.level, strategy, preferred)
}

/// `(level of lv, degree in lv)` for each element; constants rank lowest.
fn rank_multiset(p: &[Polynomial]) -> BTreeMap<(u32, u32), usize> {
    let mut m = BTreeMap::new();
    for f in p {
        let key = match f.leading_variable() {
            Some(v) => (v.index(), f.degree_in(v)),
            None => (0, 0),
        };
        *m.entry(key).or_insert(0) += 1;
    }
    m
}

/// Multiset ordering: `smaller < larger` iff they differ and every element
/// gained is dominated by some element lost.
fn multiset_less(smaller: &BTreeMap<(u32, u32), usize>, larger: &BTreeMap<(u32, u32), usize>) -> bool {
    if smaller == larger {
        return false;
    }
    let lost: Vec<(u32, u32)> = larger
        .iter()
        .filter(|(k, &c)| smaller.get(k).copied().unwrap_or(0) < c)
        .map(|(k, _)| *k)
        .collect();
    smaller
        .iter()
        .filter(|(k, &c)| larger.get(k).copied().unwrap_or(0) < c)
        .all(|(k, _)| lost.iter().any(|l| l > k))
}

struct Builder {
    nodes: Vec<DecompNode>,
    outputs: Vec<EmittedSystem>,
    n: usize,
}

impl Builder {
    fn push(
        &mut self,
        parent: Option<usize>,
        branch: Branch,
        level: usize,
        p: Vec<Polynomial>,
        q: Vec<Polynomial>,
    ) -> Result<usize> {
        for j in level + 1..=self.n {
            let count = p
                .iter()
                .filter(|f| f.leading_variable() == Some(Var(j as u32)))
                .count();
            if count > 1 {
                return Err(Error::Precondition(format!(
                    "node at level {level} has {count} polynomials with leading variable x{j}"
                )));
            }
        }
        if let Some(parent) = parent {
            let before = rank_multiset(&self.nodes[parent].p);
            let after = rank_multiset(&p);
            if !multiset_less(&after, &before) {
                return Err(Error::Precondition(format!(
                    "split at node {parent} did not decrease the rank"
                )));
            }
        }
        let id = self.nodes.len();
        self.nodes.push(DecompNode {
            id,
            parent,
            branch,
            level,
            p,
            q,
            leaf: false,
        });
        Ok(id)
    }
}

/// Runs Wang's method on `system` over its own field.
///
/// The root's spine is followed first (left child after every split); pending
/// right children are then taken in the order they were created, each
/// followed along its own left spine.
pub fn decompose(
    system: &PolySystem,
    strategy: PivotStrategy,
    options: DecomposeOptions,
) -> Result<DecompTree> {
    let n = system.num_vars();
    let preferred = match strategy {
        PivotStrategy::Index(k) => system.polys.get(k - 1).cloned(),
        _ => None,
    };
    let mut root_p = Vec::new();
    for f in &system.polys {
        push_unique(&mut root_p, f.clone());
    }
    let mut b = Builder {
        nodes: Vec::new(),
        outputs: Vec::new(),
        n,
    };
    let root = b.push(None, Branch::Root, n, root_p, Vec::new())?;
    let mut pending = VecDeque::from([root]);

    while let Some(start) = pending.pop_front() {
        let mut cur = start;
        let mut level = b.nodes[cur].level;
        loop {
            let node = &b.nodes[cur];
            if options.early_prune && node.has_nonzero_constant() {
                b.nodes[cur].level = level;
                b.nodes[cur].leaf = true;
                break;
            }
            if level == 0 {
                let node = &mut b.nodes[cur];
                node.level = 0;
                node.leaf = true;
                if !node.has_nonzero_constant() {
                    let mut t = node.p.clone();
                    t.sort_by_key(|f| f.leading_variable());
                    b.outputs.push(EmittedSystem {
                        leaf: cur,
                        system: TriangularSystem {
                            t,
                            u: node.q.clone(),
                        },
                    });
                }
                break;
            }
            let x = Some(Var(level as u32));
            let width = node.p.iter().filter(|f| f.leading_variable() == x).count();
            if width <= 1 {
                level -= 1;
                continue;
            }
            b.nodes[cur].level = level;
            let s = split(&b.nodes[cur].p, &b.nodes[cur].q, level, strategy, preferred.as_ref())?;
            let (lp, lq) = s.left;
            let left = b.push(Some(cur), Branch::Left, level, lp, lq)?;
            if let Some((rp, rq)) = s.right {
                let right = b.push(Some(cur), Branch::Right, level, rp, rq)?;
                pending.push_back(right);
            }
            cur = left;
        }
    }

    Ok(DecompTree {
        vars: system.vars.clone(),
        field: system.field,
        strategy,
        nodes: b.nodes,
        outputs: b.outputs,
    })
}
