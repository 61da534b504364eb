//! λ-interpolation and the local closures `Λ_κ` on finite universes.
//!
//! Agreement on a set implies agreement on each of its subsets, so checking
//! the subsets of size exactly `min(λ, m^n)` decides λ-interpolability.

use std::fmt;

use indexmap::IndexSet;
use itertools::Itertools;

use crate::clone::CloneFragment;
use crate::error::{Error, Result};
use crate::finite::{Elem, Operation, PointSet, Universe};
use crate::limits::Limits;

/// A closure index: a positive integer or `ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kappa {
    Finite(usize),
    Omega,
}

impl Kappa {
    /// Largest λ with `λ < κ` that matters on a domain of `points` points.
    pub fn max_lambda(self, points: usize) -> usize {
        match self {
            Kappa::Finite(k) => k.saturating_sub(1).min(points),
            Kappa::Omega => points,
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Finite(k) => write!(f, "{k}"),
            Kappa::Omega => f.write_str("omega"),
        }
    }
}

impl std::str::FromStr for Kappa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" | "ω" | "w" => Ok(Kappa::Omega),
            _ => s
                .parse::<usize>()
                .ok()
                .filter(|&k| k > 0)
                .map(Kappa::Finite)
                .ok_or_else(|| Error::InvalidParameter(format!("bad kappa `{s}`"))),
        }
    }
}

/// Outcome of a λ-interpolation query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interpolation {
    Interpolable,
    /// The lexicographically least set of point indices with no interpolant.
    Fails { witness: Vec<usize> },
}

impl Interpolation {
    pub fn holds(&self) -> bool {
        matches!(self, Interpolation::Interpolable)
    }
}

pub(crate) fn check_query(f: &Operation, fragment: &CloneFragment) -> Result<()> {
    if f.universe() != fragment.universe() {
        return Err(Error::UniverseMismatch);
    }
    if f.arity() > fragment.arity_bound() {
        return Err(Error::InvalidParameter(format!(
            "target arity {} exceeds the fragment's bound {}",
            f.arity(),
            fragment.arity_bound()
        )));
    }
    Ok(())
}

/// Whether every `S ⊆ A^n` with `|S| <= λ` admits an `n`-ary member of the
/// fragment agreeing with `f` on `S`.
pub fn is_lambda_interpolable(
    f: &Operation,
    fragment: &CloneFragment,
    lambda: usize,
) -> Result<Interpolation> {
    check_query(f, fragment)?;
    let points = f.domain_len();
    if lambda > points {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} exceeds the domain size {points}"
        )));
    }
    if lambda == 0 || fragment.members(f.arity()).contains(f) {
        return Ok(Interpolation::Interpolable);
    }
    let agreements: Vec<PointSet> = fragment
        .members(f.arity())
        .iter()
        .map(|t| f.agreement_unchecked(t))
        .collect();
    for s in (0..points).combinations(lambda) {
        let covered = agreements
            .iter()
            .any(|eq| s.iter().all(|&p| eq.contains(p)));
        if !covered {
            return Ok(Interpolation::Fails { witness: s });
        }
    }
    Ok(Interpolation::Interpolable)
}

/// Membership of `f` in `Λ_κ(C)`: λ-interpolable for every `λ < κ`. The
/// property is antitone in λ, so only the largest relevant λ is checked.
pub fn local_closure_membership(
    f: &Operation,
    fragment: &CloneFragment,
    kappa: Kappa,
) -> Result<bool> {
    check_query(f, fragment)?;
    let lambda = kappa.max_lambda(f.domain_len());
    Ok(is_lambda_interpolable(f, fragment, lambda)?.holds())
}

/// `Λ_κ(C)` up to `arity_bound`, as a fragment.
pub fn local_closure_fragment(
    fragment: &CloneFragment,
    kappa: Kappa,
    arity_bound: usize,
    limits: &Limits,
) -> Result<CloneFragment> {
    if arity_bound > fragment.arity_bound() {
        return Err(Error::InvalidParameter(format!(
            "closure bound {arity_bound} exceeds the fragment's bound {}",
            fragment.arity_bound()
        )));
    }
    let u = fragment.universe();
    let mut members = std::collections::BTreeMap::new();
    for j in 1..=arity_bound {
        let lambda = kappa.max_lambda(u.power(j)?);
        let base: Vec<Operation> = fragment.members(j).iter().cloned().collect();
        let found = interpolable_operations(u, j, &base, lambda, limits)?;
        members.insert(j, found.into_iter().collect::<IndexSet<_>>());
    }
    CloneFragment::from_members(u, arity_bound, members)
}

/// Every `arity`-ary operation that is λ-interpolable by `base`, in
/// lexicographic table order.
///
/// Depth-first over the table: when point `p` receives a value, every subset
/// of already assigned points of size `min(λ-1, p)` together with `p` must
/// have an interpolant in `base`. Each `S` with `|S| <= λ` is checked at its
/// largest point, so the leaves are exactly the λ-interpolable tables.
pub(crate) fn interpolable_operations(
    universe: &Universe,
    arity: usize,
    base: &[Operation],
    lambda: usize,
    limits: &Limits,
) -> Result<Vec<Operation>> {
    let points = universe.power(arity)?;
    let m = universe.size();
    let mut out = Vec::new();
    let mut table = vec![0 as Elem; points];
    let mut next_value = vec![0usize; points];
    let mut depth = 0usize;
    let mut visited = 0u64;
    loop {
        if depth == points {
            out.push(Operation::from_table_unchecked(universe, arity, table.clone()));
            if out.len() > limits.members {
                return Err(Error::cap(
                    format!("closure members of arity {arity}"),
                    limits.members as u64,
                ));
            }
            depth -= 1;
            continue;
        }
        let v = next_value[depth];
        if v >= m {
            next_value[depth] = 0;
            if depth == 0 {
                break;
            }
            depth -= 1;
            continue;
        }
        next_value[depth] = v + 1;
        visited += 1;
        if visited > limits.enumeration {
            return Err(Error::cap("closure search nodes", limits.enumeration));
        }
        table[depth] = v as Elem;
        if lambda == 0 || extends(base, &table, depth, lambda) {
            depth += 1;
        }
    }
    Ok(out)
}

fn extends(base: &[Operation], table: &[Elem], p: usize, lambda: usize) -> bool {
    let value = table[p];
    let candidates: Vec<&Operation> = base.iter().filter(|t| t.value_at(p) == value).collect();
    if candidates.is_empty() {
        return false;
    }
    let size = (lambda - 1).min(p);
    (0..p).combinations(size).all(|s| {
        candidates
            .iter()
            .any(|t| s.iter().all(|&q| t.value_at(q) == table[q]))
    })
}
