//! Arity-bounded fragments of clones and the Pol–Inv connection.
//!
//! A clone is infinite, so we only ever materialize its members of arity at
//! most `k`. The `j`-ary part of `<F>` is the least set of `j`-ary tables that
//! contains the `j`-ary projections and is closed under `x ↦ g(t_1(x), ...,
//! t_n(x))` for every generator `g`: every `j`-ary term is a generator applied
//! to `j`-ary subterms, so induction on term depth shows this fixpoint is
//! exactly the `j`-ary part of the clone, whatever the generator arities are.
//! Members are canonical by table; insertion order is kept for reproducible
//! enumeration.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::finite::{preserves, Elem, Operation, Relation, Universe};
use crate::limits::Limits;

#[derive(Clone, Debug)]
pub struct CloneFragment {
    universe: Universe,
    arity_bound: usize,
    generators: Vec<Operation>,
    members: BTreeMap<usize, IndexSet<Operation>>,
}

impl CloneFragment {
    /// The arity-`<= k` part of the clone generated by `generators`.
    pub fn generate(
        universe: &Universe,
        generators: &[Operation],
        arity_bound: usize,
        limits: &Limits,
    ) -> Result<Self> {
        if arity_bound == 0 {
            return Err(Error::InvalidParameter("arity bound must be at least 1".into()));
        }
        let mut gens: IndexSet<Operation> = IndexSet::new();
        for g in generators {
            if g.universe() != universe {
                return Err(Error::UniverseMismatch);
            }
            gens.insert(g.clone());
        }
        let gens: Vec<Operation> = gens.into_iter().collect();
        let mut members = BTreeMap::new();
        for j in 1..=arity_bound {
            members.insert(j, close_arity(universe, &gens, j, limits)?);
        }
        Ok(CloneFragment {
            universe: universe.clone(),
            arity_bound,
            generators: gens,
            members,
        })
    }

    /// A fragment given by its member sets; the generators are the members.
    ///
    /// Callers promise that the sets are the arity-`<= k` part of a clone.
    pub fn from_members(
        universe: &Universe,
        arity_bound: usize,
        members: BTreeMap<usize, IndexSet<Operation>>,
    ) -> Result<Self> {
        if arity_bound == 0 {
            return Err(Error::InvalidParameter("arity bound must be at least 1".into()));
        }
        let mut full = BTreeMap::new();
        for j in 1..=arity_bound {
            let set = members.get(&j).cloned().unwrap_or_default();
            for op in &set {
                if op.universe() != universe {
                    return Err(Error::UniverseMismatch);
                }
                if op.arity() != j {
                    return Err(Error::ArityMismatch {
                        expected: j,
                        found: op.arity(),
                    });
                }
            }
            full.insert(j, set);
        }
        if let Some(&extra) = members.keys().find(|&&a| a == 0 || a > arity_bound) {
            return Err(Error::InvalidParameter(format!(
                "member arity {extra} outside 1..={arity_bound}"
            )));
        }
        let generators = full.values().flat_map(|s| s.iter().cloned()).collect();
        Ok(CloneFragment {
            universe: universe.clone(),
            arity_bound,
            generators,
            members: full,
        })
    }

    /// All operations of arity `<= k` preserving every relation.
    pub fn pol(
        universe: &Universe,
        relations: &[Relation],
        arity_bound: usize,
        limits: &Limits,
    ) -> Result<Self> {
        for r in relations {
            if r.universe() != universe {
                return Err(Error::UniverseMismatch);
            }
        }
        let mut members = BTreeMap::new();
        for j in 1..=arity_bound {
            members.insert(j, polymorphisms(universe, relations, j, limits)?);
        }
        CloneFragment::from_members(universe, arity_bound, members)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn generators(&self) -> &[Operation] {
        &self.generators
    }

    pub fn members(&self, arity: usize) -> &IndexSet<Operation> {
        static EMPTY: std::sync::OnceLock<IndexSet<Operation>> = std::sync::OnceLock::new();
        self.members
            .get(&arity)
            .unwrap_or_else(|| EMPTY.get_or_init(IndexSet::new))
    }

    pub fn member_map(&self) -> &BTreeMap<usize, IndexSet<Operation>> {
        &self.members
    }

    pub fn all_members(&self) -> impl Iterator<Item = &Operation> {
        self.members.values().flat_map(|s| s.iter())
    }

    pub fn len(&self) -> usize {
        self.members.values().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, op: &Operation) -> Result<bool> {
        if op.arity() > self.arity_bound {
            return Err(Error::InvalidParameter(format!(
                "arity {} exceeds the fragment's bound {}",
                op.arity(),
                self.arity_bound
            )));
        }
        if op.universe() != &self.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(self.members(op.arity()).contains(op))
    }

    /// Same arity bound and the same member set at every arity.
    pub fn same_members(&self, other: &CloneFragment) -> bool {
        self.arity_bound == other.arity_bound
            && (1..=self.arity_bound).all(|j| {
                let (a, b) = (self.members(j), other.members(j));
                a.len() == b.len() && a.iter().all(|op| b.contains(op))
            })
    }

    /// Member-wise inclusion at every arity up to the smaller bound.
    pub fn is_subset_of(&self, other: &CloneFragment) -> bool {
        let k = self.arity_bound.min(other.arity_bound);
        (1..=k).all(|j| self.members(j).iter().all(|op| other.members(j).contains(op)))
    }

    /// All relations of arity `<= r` invariant under the fragment.
    ///
    /// Preservation is checked against the generators, which for a generated
    /// fragment is equivalent to checking the whole clone.
    pub fn inv(&self, max_arity: usize, limits: &Limits) -> Result<Vec<Relation>> {
        if max_arity == 0 {
            return Err(Error::InvalidParameter("relation arity must be at least 1".into()));
        }
        let mut out = Vec::new();
        for s in 1..=max_arity {
            let points = self.universe.power(s)?;
            if points >= 63 || (1u64 << points) > limits.enumeration {
                return Err(Error::cap(
                    format!("invariant relations of arity {s} ({points} points)"),
                    limits.enumeration,
                ));
            }
            let tuples: Vec<Vec<Elem>> = self.universe.tuples(s).collect();
            for mask in 0u64..(1u64 << points) {
                let rel = Relation::from_set_unchecked(
                    &self.universe,
                    s,
                    (0..points)
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| tuples[i].clone())
                        .collect(),
                );
                let mut ok = true;
                for g in &self.generators {
                    if preserves(g, &rel)?.is_some() {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    out.push(rel);
                }
            }
        }
        Ok(out)
    }
}

/// Least fixpoint of the `j`-ary part, expanding only tuples that use at
/// least one member added in the previous round.
fn close_arity(
    universe: &Universe,
    generators: &[Operation],
    j: usize,
    limits: &Limits,
) -> Result<IndexSet<Operation>> {
    universe.power(j)?;
    let mut tables: IndexSet<Vec<Elem>> = IndexSet::new();
    for c in 0..j {
        tables.insert(Operation::projection(universe, j, c)?.into_table());
    }
    let mut old = 0;
    while old < tables.len() {
        let len = tables.len();
        let mut fresh: Vec<Vec<Elem>> = Vec::new();
        for g in generators {
            let n = g.arity();
            for first_new in 0..n {
                let ranges: Vec<(usize, usize)> = (0..n)
                    .map(|p| match p.cmp(&first_new) {
                        std::cmp::Ordering::Less => (0, old),
                        std::cmp::Ordering::Equal => (old, len),
                        std::cmp::Ordering::Greater => (0, len),
                    })
                    .collect();
                for_each_in_box(&ranges, |idx| {
                    let inner: Vec<&[Elem]> =
                        idx.iter().map(|&i| tables[i].as_slice()).collect();
                    let t = g.superpose_tables(&inner);
                    if !tables.contains(&t) {
                        fresh.push(t);
                    }
                });
            }
        }
        for t in fresh {
            tables.insert(t);
            if tables.len() > limits.members {
                return Err(Error::cap(
                    format!("members of arity {j}"),
                    limits.members as u64,
                ));
            }
        }
        old = len;
    }
    Ok(tables
        .into_iter()
        .map(|t| Operation::from_table_unchecked(universe, j, t))
        .collect())
}

/// Calls `f` on every index vector in the box `prod [lo_i, hi_i)`.
fn for_each_in_box(ranges: &[(usize, usize)], mut f: impl FnMut(&[usize])) {
    if ranges.iter().any(|&(lo, hi)| lo >= hi) {
        return;
    }
    let mut idx: Vec<usize> = ranges.iter().map(|r| r.0).collect();
    loop {
        f(&idx);
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < ranges[pos].1 {
                break;
            }
            idx[pos] = ranges[pos].0;
        }
    }
}

/// Backtracking search for all `j`-ary polymorphisms of `relations`.
///
/// Every `j`-tuple of relation tuples yields a constraint on the rows it
/// spans; a constraint is checked as soon as its last point is assigned.
fn polymorphisms(
    universe: &Universe,
    relations: &[Relation],
    j: usize,
    limits: &Limits,
) -> Result<IndexSet<Operation>> {
    let points = universe.power(j)?;
    let m = universe.size();
    struct Constraint {
        rows: Vec<usize>,
        rel: usize,
    }
    let mut by_last: Vec<Vec<Constraint>> = (0..points).map(|_| Vec::new()).collect();
    let mut rel_sets = Vec::new();
    let mut budget = limits.enumeration;
    for (ri, rel) in relations.iter().enumerate() {
        let r = rel.arity();
        let size = universe.power(r)?;
        let mut set = FixedBitSet::with_capacity(size);
        for t in rel.tuples() {
            set.insert(universe.index_unchecked(t));
        }
        rel_sets.push(set);
        let tuples: Vec<&Vec<Elem>> = rel.tuples().collect();
        if tuples.is_empty() {
            continue;
        }
        let count = (tuples.len() as u64).checked_pow(j as u32).unwrap_or(u64::MAX);
        budget = budget.checked_sub(count).ok_or_else(|| {
            Error::cap("polymorphism constraints", limits.enumeration)
        })?;
        let mut seen = std::collections::HashSet::new();
        let ranges = vec![(0, tuples.len()); j];
        for_each_in_box(&ranges, |choice| {
            let rows: Vec<usize> = (0..r)
                .map(|i| {
                    choice
                        .iter()
                        .fold(0usize, |acc, &c| acc * m + tuples[c][i] as usize)
                })
                .collect();
            if seen.insert(rows.clone()) {
                let last = *rows.iter().max().expect("positive arity");
                by_last[last].push(Constraint { rows, rel: ri });
            }
        });
    }

    let mut out = IndexSet::new();
    let mut table = vec![0 as Elem; points];
    let mut visited: u64 = 0;
    // iterative depth-first search over point values
    let mut depth = 0usize;
    let mut next_value = vec![0usize; points + 1];
    loop {
        if depth == points {
            out.insert(Operation::from_table_unchecked(universe, j, table.clone()));
            if out.len() > limits.members {
                return Err(Error::cap(
                    format!("polymorphisms of arity {j}"),
                    limits.members as u64,
                ));
            }
            if depth == 0 {
                break;
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
            return Err(Error::cap("polymorphism search nodes", limits.enumeration));
        }
        table[depth] = v as Elem;
        let ok = by_last[depth].iter().all(|c| {
            let idx = c
                .rows
                .iter()
                .fold(0usize, |acc, &p| acc * m + table[p] as usize);
            rel_sets[c.rel].contains(idx)
        });
        if ok {
            depth += 1;
        }
    }
    Ok(out)
}
