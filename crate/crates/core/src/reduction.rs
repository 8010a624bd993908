//! Top-down reduction of stratified polynomial sets.
//!
//! A set is split into strata `P^(i) = {P : lv(P) = x_i}`. A [`ReductionMap`]
//! turns one stratum into a single polynomial `T` with `lv(T) = x_i` plus a
//! set `R` of polynomials free of `x_i`; [`red`] applies it at one level and
//! [`redbar`] applies it successively from `x_n` down to `x_i`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::poly::{support_of, Polynomial, Var};
use crate::polygraph::{associated_graph, VarGraph};
use crate::sysparse::PolySystem;

/// How a pivot is chosen among the polynomials of minimal degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PivotStrategy {
    /// First candidate in list order.
    First,
    /// Fewest terms, then smallest support, then list order.
    MinTerms,
    /// Smallest support, then fewest terms, then list order.
    MinSupport,
    /// The k-th (1-based) input polynomial whenever it is a candidate,
    /// otherwise `MinTerms`.
    Index(usize),
}

impl PivotStrategy {
    pub const ALL_BASIC: [PivotStrategy; 3] = [
        PivotStrategy::First,
        PivotStrategy::MinTerms,
        PivotStrategy::MinSupport,
    ];
}

impl fmt::Display for PivotStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PivotStrategy::First => write!(f, "first"),
            PivotStrategy::MinTerms => write!(f, "min-terms"),
            PivotStrategy::MinSupport => write!(f, "min-support"),
            PivotStrategy::Index(k) => write!(f, "index:{k}"),
        }
    }
}

impl FromStr for PivotStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(PivotStrategy::First),
            "min-terms" => Ok(PivotStrategy::MinTerms),
            "min-support" => Ok(PivotStrategy::MinSupport),
            _ => s
                .strip_prefix("index:")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .map(PivotStrategy::Index)
                .ok_or_else(|| Error::Precondition(format!("unknown pivot strategy `{s}`"))),
        }
    }
}

/// Index into `candidates` of the pivot: minimal degree in `x` first, then
/// the strategy's tie-break. `preferred` is the polynomial an `Index`
/// strategy points at.
pub fn choose_pivot(
    candidates: &[&Polynomial],
    x: Var,
    strategy: PivotStrategy,
    preferred: Option<&Polynomial>,
) -> usize {
    assert!(!candidates.is_empty(), "no pivot candidates");
    let min_deg = candidates.iter().map(|p| p.degree_in(x)).min().unwrap();
    let eligible: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].degree_in(x) == min_deg)
        .collect();
    let by_key = |key: &dyn Fn(&Polynomial) -> (usize, usize)| {
        *eligible
            .iter()
            .min_by_key(|&&i| key(candidates[i]))
            .expect("nonempty")
    };
    let terms_then_support = |p: &Polynomial| (p.num_terms(), p.support().len());
    match strategy {
        PivotStrategy::First => eligible[0],
        PivotStrategy::MinTerms => by_key(&terms_then_support),
        PivotStrategy::MinSupport => by_key(&|p| (p.support().len(), p.num_terms())),
        PivotStrategy::Index(_) => preferred
            .and_then(|want| eligible.iter().copied().find(|&i| candidates[i] == want))
            .unwrap_or_else(|| by_key(&terms_then_support)),
    }
}

/// A polynomial set over `x_1 < ... < x_n`, viewed through its strata.
///
/// Elements are distinct and nonzero; list order is preserved because pivot
/// tie-breaking may depend on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeveledSystem {
    n: usize,
    field: CoefficientField,
    polys: Vec<Polynomial>,
}

impl LeveledSystem {
    pub fn new(n: usize, field: CoefficientField, polys: impl IntoIterator<Item = Polynomial>) -> Self {
        let mut s = LeveledSystem {
            n,
            field,
            polys: Vec::new(),
        };
        for p in polys {
            s.insert(p);
        }
        s
    }

    pub fn from_system(system: &PolySystem) -> Self {
        Self::new(system.num_vars(), system.field, system.polys.iter().cloned())
    }

    /// Adds `p` unless it is zero or already present.
    pub fn insert(&mut self, p: Polynomial) {
        if !p.is_zero() && !self.polys.contains(&p) {
            self.polys.push(p);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn into_polys(self) -> Vec<Polynomial> {
        self.polys
    }

    /// `P^(i)` in list order.
    pub fn stratum(&self, i: usize) -> Vec<&Polynomial> {
        self.polys
            .iter()
            .filter(|p| p.leading_variable() == Some(Var(i as u32)))
            .collect()
    }

    pub fn constants(&self) -> Vec<&Polynomial> {
        self.polys.iter().filter(|p| p.is_constant()).collect()
    }

    pub fn has_nonzero_constant(&self) -> bool {
        self.polys.iter().any(Polynomial::is_nonzero_constant)
    }

    /// Smallest `i` such that every stratum above `i` has at most one
    /// element; 0 when all strata do.
    pub fn level(&self) -> usize {
        (1..=self.n)
            .rev()
            .find(|&i| self.stratum(i).len() > 1)
            .unwrap_or(0)
    }

    pub fn graph(&self) -> VarGraph {
        associated_graph(&self.polys, false)
    }

    /// The elements sorted by leading variable when they form a triangular
    /// set (no constants, every stratum of size at most one).
    pub fn as_triangular_set(&self) -> Option<Vec<Polynomial>> {
        if !self.constants().is_empty() || self.level() != 0 {
            return None;
        }
        let mut t = self.polys.clone();
        t.sort_by_key(|p| p.leading_variable());
        Some(t)
    }

    fn min_degree_at(&self, k: usize) -> Option<u32> {
        let x = Var(k as u32);
        self.stratum(k).iter().map(|p| p.degree_in(x)).min()
    }
}

/// True iff `p` has lower rank than `q`: a smaller level, or the same level
/// `k` and a smaller minimal degree in `x_k` over the stratum `k`.
pub fn lower_rank(p: &LeveledSystem, q: &LeveledSystem) -> Result<bool> {
    let (lp, lq) = (p.level(), q.level());
    if lp != lq {
        return Ok(lp < lq);
    }
    match (p.min_degree_at(lp), q.min_degree_at(lq)) {
        (Some(a), Some(b)) if lp > 0 => Ok(a < b),
        _ => Err(Error::RankUndefined(format!("empty stratum at shared level {lp}"))),
    }
}

/// The mapping `f_i`: one stratum in, `(T, R)` out.
pub trait ReductionMap {
    fn reduce(&self, stratum: &[Polynomial], x: Var) -> Result<(Polynomial, Vec<Polynomial>)>;

    fn name(&self) -> String;
}

/// Successive pseudo-division: take a minimal-degree pivot, replace every
/// other element by its pseudo-remainder, and repeat while more than one
/// element still involves `x`. Remainders free of `x` form `R`; zero
/// remainders are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PremChain {
    pub strategy: PivotStrategy,
    pub preferred: Option<Polynomial>,
}

impl Default for PremChain {
    fn default() -> Self {
        PremChain {
            strategy: PivotStrategy::First,
            preferred: None,
        }
    }
}

impl PremChain {
    pub fn new(strategy: PivotStrategy) -> Self {
        PremChain {
            strategy,
            preferred: None,
        }
    }

    /// Resolves an `Index(k)` strategy against the input list.
    pub fn for_system(strategy: PivotStrategy, polys: &[Polynomial]) -> Self {
        let preferred = match strategy {
            PivotStrategy::Index(k) => polys.get(k - 1).cloned(),
            _ => None,
        };
        PremChain {
            strategy,
            preferred,
        }
    }
}

impl ReductionMap for PremChain {
    fn reduce(&self, stratum: &[Polynomial], x: Var) -> Result<(Polynomial, Vec<Polynomial>)> {
        if stratum.is_empty() {
            return Err(Error::NothingToReduce(x.index() as usize));
        }
        let mut current: Vec<Polynomial> = stratum.to_vec();
        let mut rest: Vec<Polynomial> = Vec::new();
        while current.len() > 1 {
            let refs: Vec<&Polynomial> = current.iter().collect();
            let k = choose_pivot(&refs, x, self.strategy, self.preferred.as_ref());
            let pivot = current[k].clone();
            let mut next = vec![pivot.clone()];
            for (j, p) in current.iter().enumerate() {
                if j == k {
                    continue;
                }
                let r = p.prem(&pivot, x)?;
                if r.is_zero() {
                    continue;
                }
                let bucket = if r.contains_var(x) { &mut next } else { &mut rest };
                if !bucket.contains(&r) {
                    bucket.push(r);
                }
            }
            current = next;
        }
        Ok((current.pop().expect("one element left"), rest))
    }

    fn name(&self) -> String {
        format!("prem-chain({})", self.strategy)
    }
}

/// `default_prem_map(P^(i))`: the prem chain with first-in-list tie-breaking.
pub fn default_prem_map(stratum: &[Polynomial], i: usize) -> Result<(Polynomial, Vec<Polynomial>)> {
    PremChain::default().reduce(stratum, Var(i as u32))
}

/// A map whose `T` always has the full support of the stratum: either an
/// element that already does, or a linear combination of the stratum chosen
/// to avoid cancellation. `R` holds the pseudo-remainders by `T`, with any
/// remainder still involving `x` replaced by its coefficients in `x`.
///
/// This map is for exercising the graph statements; it does not preserve
/// zero sets.
#[derive(Clone, Copy, Debug, Default)]
pub struct SupportPreserving;

impl ReductionMap for SupportPreserving {
    fn reduce(&self, stratum: &[Polynomial], x: Var) -> Result<(Polynomial, Vec<Polynomial>)> {
        let Some(first) = stratum.first() else {
            return Err(Error::NothingToReduce(x.index() as usize));
        };
        let target = support_of(stratum);
        let pivot = match stratum.iter().find(|p| p.support() == target) {
            Some(p) => p.clone(),
            None => {
                let field = first.field();
                let tries: Vec<i64> = match field {
                    CoefficientField::Rationals => (1..=64).collect(),
                    CoefficientField::Prime(p) => (1..p as i64).collect(),
                };
                tries
                    .into_iter()
                    .map(|c| {
                        let c = field.from_i64(c);
                        let mut weight = field.one();
                        let mut acc = Polynomial::zero(field);
                        for p in stratum {
                            acc = &acc + &p.scale(&weight);
                            weight = field.mul(&weight, &c);
                        }
                        acc
                    })
                    .find(|t| t.support() == target && t.leading_variable() == Some(x))
                    .ok_or_else(|| {
                        Error::InvalidReductionMap("no support-preserving combination".into())
                    })?
            }
        };
        let mut rest: Vec<Polynomial> = Vec::new();
        for p in stratum {
            if *p == pivot {
                continue;
            }
            let r = p.prem(&pivot, x)?;
            let pieces: Vec<Polynomial> = if r.contains_var(x) {
                (0..=r.degree_in(x)).map(|d| r.coeff_in(x, d)).collect()
            } else {
                vec![r]
            };
            for piece in pieces {
                if !piece.is_zero() && !rest.contains(&piece) {
                    rest.push(piece);
                }
            }
        }
        Ok((pivot, rest))
    }

    fn name(&self) -> String {
        "support-preserving".into()
    }
}

/// What one reduction step did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub level: usize,
    pub pivot: Polynomial,
    pub remainders: Vec<Polynomial>,
    /// Whether `supp(T) = supp(P^(i))` held.
    pub support_preserving: bool,
}

/// `red_i(P)`: replaces stratum `i` by `T_i` and adds `R_i` to the lower
/// strata, after checking the support conditions on the map's output.
pub fn red(
    p: &LeveledSystem,
    i: usize,
    f: &dyn ReductionMap,
) -> Result<(LeveledSystem, ReductionStep)> {
    let x = Var(i as u32);
    let stratum: Vec<Polynomial> = p.stratum(i).into_iter().cloned().collect();
    if stratum.is_empty() {
        return Err(Error::NothingToReduce(i));
    }
    let (t, r) = f.reduce(&stratum, x)?;
    let supp = support_of(&stratum);
    if t.leading_variable() != Some(x) {
        return Err(Error::InvalidReductionMap(format!(
            "{}: pivot has leading variable {:?}, expected {x}",
            f.name(),
            t.leading_variable()
        )));
    }
    if !t.support().is_subset(&supp) {
        return Err(Error::InvalidReductionMap(format!(
            "{}: supp(T) not contained in the stratum support",
            f.name()
        )));
    }
    for q in &r {
        if q.contains_var(x) || !q.support().is_subset(&supp) {
            return Err(Error::InvalidReductionMap(format!(
                "{}: remainder violates the support conditions",
                f.name()
            )));
        }
    }
    Ok((
        apply_step(p, i, &t, &r),
        ReductionStep {
            level: i,
            support_preserving: t.support() == supp,
            pivot: t,
            remainders: r,
        },
    ))
}

fn apply_step(p: &LeveledSystem, i: usize, t: &Polynomial, r: &[Polynomial]) -> LeveledSystem {
    let x = Some(Var(i as u32));
    let mut out = LeveledSystem::new(p.n, p.field, std::iter::empty());
    let mut placed = false;
    for q in &p.polys {
        if q.leading_variable() == x {
            if !placed {
                out.insert(t.clone());
                placed = true;
            }
        } else {
            out.insert(q.clone());
        }
    }
    for q in r {
        out.insert(q.clone());
    }
    out
}

/// The chain `P = redbar_{n+1}(P), redbar_n(P), ..., redbar_stop(P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    /// `(level, system after reducing that level)`; the first entry is the
    /// input with level `n + 1`.
    pub stages: Vec<(usize, LeveledSystem)>,
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn last(&self) -> &LeveledSystem {
        &self.stages.last().expect("trace has the input").1
    }

    pub fn stage(&self, level: usize) -> Option<&LeveledSystem> {
        self.stages.iter().find(|(l, _)| *l == level).map(|(_, s)| s)
    }

    pub fn all_support_preserving(&self) -> bool {
        self.steps.iter().all(|s| s.support_preserving)
    }
}

/// Successive reduction from `x_n` down to `x_stop`. Strata with a single
/// element pass through unchanged and empty strata are skipped.
pub fn redbar_trace(p: &LeveledSystem, stop: usize, f: &dyn ReductionMap) -> Result<ReductionTrace> {
    let n = p.num_vars();
    let mut stages = vec![(n + 1, p.clone())];
    let mut steps = Vec::new();
    let mut cur = p.clone();
    for i in (stop.max(1)..=n).rev() {
        let stratum = cur.stratum(i);
        match stratum.len() {
            0 => {}
            1 => steps.push(ReductionStep {
                level: i,
                pivot: stratum[0].clone(),
                remainders: Vec::new(),
                support_preserving: true,
            }),
            _ => {
                let (next, step) = red(&cur, i, f)?;
                cur = next;
                steps.push(step);
            }
        }
        stages.push((i, cur.clone()));
    }
    Ok(ReductionTrace { stages, steps })
}

/// `redbar_i(P)`; `redbar_{n+1}(P)` is `P` itself.
pub fn redbar(p: &LeveledSystem, i: usize, f: &dyn ReductionMap) -> Result<LeveledSystem> {
    if i > p.num_vars() {
        return Ok(p.clone());
    }
    redbar_trace(p, i, f).map(|t| t.last().clone())
}

/// Variables of `polys` as a set (re-exported convenience for callers that
/// compare supports).
pub fn support_set(polys: &[Polynomial]) -> BTreeSet<Var> {
    support_of(polys)
}
