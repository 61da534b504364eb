//! Finite-cover certificates for ultrainterpolation.
//!
//! `f` is λ-ultrainterpolable by `C` exactly when `A^n` has a finite cover in
//! which every family `B` of at most λ blocks admits one member of `C` that
//! agrees with `f` on `⋃B`. The certificate for that condition is the cover
//! together with the chosen interpolants; it is the only notion of
//! ultrainterpolability this crate works with, so no ultrafilter is ever
//! constructed.
//!
//! Covers are searched among set partitions. That loses nothing: from any
//! finite family of equalizer sets covering `(A^n)^λ`, the atoms of the
//! Boolean algebra generated by their coordinate projections form a partition
//! that already satisfies the condition. [`Strategy::EqualizerAtoms`] is that
//! construction.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use indexmap::IndexSet;
use itertools::Itertools;

use crate::clone::CloneFragment;
use crate::error::{Error, Result};
use crate::finite::{Operation, PointSet, Universe};
use crate::interpolation::{check_query, interpolable_operations, Kappa};
use crate::limits::Limits;

/// A finite cover of `A^n` by nonempty blocks of point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    universe: Universe,
    domain_arity: usize,
    blocks: Vec<PointSet>,
}

impl Cover {
    pub fn new(universe: &Universe, domain_arity: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let points = universe.power(domain_arity)?;
        let mut sets = Vec::with_capacity(blocks.len());
        let mut union = PointSet::with_capacity(points);
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidCover(format!("block {i} is empty")));
            }
            let mut set = PointSet::with_capacity(points);
            for &p in block {
                if p >= points {
                    return Err(Error::InvalidCover(format!(
                        "point {p} outside a domain of {points} points"
                    )));
                }
                set.insert(p);
            }
            union.union_with(&set);
            sets.push(set);
        }
        if union.count_ones(..) != points {
            let missing = (0..points).find(|&p| !union.contains(p)).unwrap_or(0);
            return Err(Error::InvalidCover(format!("point {missing} is not covered")));
        }
        Ok(Cover {
            universe: universe.clone(),
            domain_arity,
            blocks: sets,
        })
    }

    pub fn singletons(universe: &Universe, domain_arity: usize) -> Result<Self> {
        let points = universe.power(domain_arity)?;
        Cover::new(universe, domain_arity, (0..points).map(|p| vec![p]).collect())
    }

    pub fn whole(universe: &Universe, domain_arity: usize) -> Result<Self> {
        let points = universe.power(domain_arity)?;
        Cover::new(universe, domain_arity, vec![(0..points).collect()])
    }

    /// The partition whose block labels are given by a restricted growth
    /// string.
    fn from_labels(universe: &Universe, domain_arity: usize, labels: &[usize]) -> Self {
        let count = labels.iter().max().map_or(0, |&m| m + 1);
        let mut blocks = vec![PointSet::with_capacity(labels.len()); count];
        for (p, &l) in labels.iter().enumerate() {
            blocks[l].insert(p);
        }
        Cover {
            universe: universe.clone(),
            domain_arity,
            blocks,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn domain_arity(&self) -> usize {
        self.domain_arity
    }

    pub fn blocks(&self) -> &[PointSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn points(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.len())
    }

    pub fn block_points(&self, i: usize) -> Vec<usize> {
        self.blocks[i].ones().collect()
    }

    pub fn union_of(&self, family: &[usize]) -> PointSet {
        let mut u = PointSet::with_capacity(self.points());
        for &i in family {
            u.union_with(&self.blocks[i]);
        }
        u
    }

    pub fn is_partition(&self) -> bool {
        self.blocks
            .iter()
            .tuple_combinations()
            .all(|(a, b)| a.is_disjoint(b))
    }

    /// Block families of size `1..=min(λ, len)`, by size then lexicographically.
    pub fn families(&self, lambda: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        (1..=lambda.min(self.len())).flat_map(move |s| (0..self.len()).combinations(s))
    }
}

/// A cover plus one interpolant per block family of size at most λ. The
/// empty family needs no entry: any projection serves it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaggerCertificate {
    pub cover: Cover,
    pub lambda: usize,
    pub interpolants: BTreeMap<Vec<usize>, Operation>,
}

impl DaggerCertificate {
    /// Re-checks every entry by table comparison. Returns the reason on
    /// failure.
    pub fn verify(&self, f: &Operation, fragment: &CloneFragment) -> std::result::Result<(), String> {
        if self.cover.universe() != f.universe() || self.cover.domain_arity() != f.arity() {
            return Err("cover does not live on the target's domain".into());
        }
        if f.universe() != fragment.universe() || f.arity() > fragment.arity_bound() {
            return Err("target does not fit the fragment".into());
        }
        let families: Vec<Vec<usize>> = self.cover.families(self.lambda).collect();
        if families.len() != self.interpolants.len() {
            return Err(format!(
                "expected {} interpolants, found {}",
                families.len(),
                self.interpolants.len()
            ));
        }
        for family in families {
            let t = self
                .interpolants
                .get(&family)
                .ok_or_else(|| format!("no interpolant for blocks {family:?}"))?;
            if t.universe() != f.universe() || t.arity() != f.arity() {
                return Err(format!("interpolant for {family:?} has the wrong shape"));
            }
            if !fragment.members(f.arity()).contains(t) {
                return Err(format!("interpolant for {family:?} is not in the fragment"));
            }
            if let Some(p) = self
                .cover
                .union_of(&family)
                .ones()
                .find(|&p| t.value_at(p) != f.value_at(p))
            {
                return Err(format!("interpolant for {family:?} disagrees at point {p}"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DaggerCheck {
    Certified(DaggerCertificate),
    /// A block family with no interpolant.
    Fails { blocks: Vec<usize> },
}

/// Checks the cover condition for one given cover.
pub fn check_dagger(
    f: &Operation,
    fragment: &CloneFragment,
    lambda: usize,
    cover: &Cover,
) -> Result<DaggerCheck> {
    check_query(f, fragment)?;
    if cover.universe() != f.universe() || cover.domain_arity() != f.arity() {
        return Err(Error::InvalidCover("cover does not live on the target's domain".into()));
    }
    let members = fragment.members(f.arity());
    let agreements: Vec<PointSet> = members.iter().map(|t| f.agreement_unchecked(t)).collect();
    let mut interpolants = BTreeMap::new();
    for family in cover.families(lambda) {
        let union = cover.union_of(&family);
        match agreements.iter().position(|eq| union.is_subset(eq)) {
            Some(i) => {
                interpolants.insert(family, members[i].clone());
            }
            None => return Ok(DaggerCheck::Fails { blocks: family }),
        }
    }
    Ok(DaggerCheck::Certified(DaggerCertificate {
        cover: cover.clone(),
        lambda,
        interpolants,
    }))
}

/// How [`search_dagger`] looks for a cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Singletons,
    EqualizerAtoms,
    /// Set partitions with at most `max_blocks` blocks (`None`: `m^n`), in
    /// restricted-growth-string order.
    ExhaustivePartitions { max_blocks: Option<usize> },
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singletons" => Ok(Strategy::Singletons),
            "equalizer-atoms" | "equalizer_atoms" | "atoms" => Ok(Strategy::EqualizerAtoms),
            "exhaustive" | "exhaustive-partitions" => {
                Ok(Strategy::ExhaustivePartitions { max_blocks: None })
            }
            other => {
                if let Some(n) = other
                    .strip_prefix("exhaustive:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n > 0)
                {
                    Ok(Strategy::ExhaustivePartitions { max_blocks: Some(n) })
                } else {
                    Err(Error::InvalidParameter(format!("unknown strategy `{other}`")))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(DaggerCertificate),
    /// Nothing found. `disproof` is set only when the strategy was complete:
    /// the exhaustive search over all partitions.
    NotFound { disproof: bool },
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn certificate(&self) -> Option<&DaggerCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

pub fn search_dagger(
    f: &Operation,
    fragment: &CloneFragment,
    lambda: usize,
    strategy: Strategy,
    limits: &Limits,
) -> Result<SearchOutcome> {
    check_query(f, fragment)?;
    let u = f.universe();
    let n = f.arity();
    match strategy {
        Strategy::Singletons => {
            let cover = Cover::singletons(u, n)?;
            Ok(match check_dagger(f, fragment, lambda, &cover)? {
                DaggerCheck::Certified(c) => SearchOutcome::Found(c),
                DaggerCheck::Fails { .. } => SearchOutcome::NotFound { disproof: false },
            })
        }
        Strategy::EqualizerAtoms => {
            if lambda == 0 {
                let cover = Cover::whole(u, n)?;
                return Ok(certified_or_none(check_dagger(f, fragment, 0, &cover)?));
            }
            let family = equalizer_family(f, fragment, lambda, limits)?;
            let Some(chosen) = family.covering_subfamily() else {
                return Ok(SearchOutcome::NotFound { disproof: false });
            };
            let cover = family.atom_cover(&chosen);
            Ok(certified_or_none(check_dagger(f, fragment, lambda, &cover)?))
        }
        Strategy::ExhaustivePartitions { max_blocks } => {
            let points = f.domain_len();
            let cap = max_blocks.unwrap_or(points).min(points).max(1);
            let complete = cap >= points;
            let mut visited = 0u64;
            let mut found = None;
            for_each_partition(points, cap, |labels| {
                visited += 1;
                if visited > limits.partitions {
                    return Err(Error::cap("cover partitions", limits.partitions));
                }
                let cover = Cover::from_labels(u, n, labels);
                if let DaggerCheck::Certified(c) = check_dagger(f, fragment, lambda, &cover)? {
                    found = Some(c);
                    return Ok(false);
                }
                Ok(true)
            })?;
            Ok(match found {
                Some(c) => SearchOutcome::Found(c),
                None => SearchOutcome::NotFound { disproof: complete },
            })
        }
    }
}

fn certified_or_none(check: DaggerCheck) -> SearchOutcome {
    match check {
        DaggerCheck::Certified(c) => SearchOutcome::Found(c),
        DaggerCheck::Fails { .. } => SearchOutcome::NotFound { disproof: false },
    }
}

/// Visits set partitions of `0..points` with at most `max_blocks` blocks as
/// restricted growth strings, in lexicographic order. The callback returns
/// `Ok(false)` to stop.
fn for_each_partition(
    points: usize,
    max_blocks: usize,
    mut visit: impl FnMut(&[usize]) -> Result<bool>,
) -> Result<()> {
    if points == 0 {
        visit(&[])?;
        return Ok(());
    }
    let mut labels = vec![0usize; points];
    // prefix_max[i] = max(labels[..=i])
    let mut prefix_max = vec![0usize; points];
    loop {
        if !visit(&labels)? {
            return Ok(());
        }
        // find the rightmost position that can be incremented
        let mut i = points - 1;
        loop {
            if i == 0 {
                return Ok(());
            }
            let bound = prefix_max[i - 1] + 1;
            if labels[i] < bound && labels[i] + 1 < max_blocks {
                labels[i] += 1;
                prefix_max[i] = prefix_max[i - 1].max(labels[i]);
                for j in i + 1..points {
                    labels[j] = 0;
                    prefix_max[j] = prefix_max[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// The equalizers `E_t ⊆ (A^n)^λ` of `f` against every `n`-ary member `t`.
///
/// A matrix is a λ-sequence of points of `A^n`, indexed in base `m^n` with
/// the last column fastest. Each `E_t` equals `Eq(f,t)^λ`; the explicit sets
/// are kept only while `m^(nλ)` stays within
/// [`Limits::equalizer_entries`], beyond that membership is answered from the
/// agreement sets.
#[derive(Clone, Debug)]
pub struct EqualizerFamily {
    universe: Universe,
    arity: usize,
    lambda: usize,
    points: usize,
    matrices: usize,
    members: Vec<Operation>,
    agreements: Vec<PointSet>,
    explicit: Option<Vec<FixedBitSet>>,
}

pub fn equalizer_family(
    f: &Operation,
    fragment: &CloneFragment,
    lambda: usize,
    limits: &Limits,
) -> Result<EqualizerFamily> {
    check_query(f, fragment)?;
    if lambda == 0 {
        return Err(Error::InvalidParameter("equalizers need lambda >= 1".into()));
    }
    let points = f.domain_len();
    let matrices = u32::try_from(lambda)
        .ok()
        .and_then(|l| points.checked_pow(l))
        .filter(|&c| c as u64 <= limits.enumeration)
        .ok_or_else(|| {
            Error::cap(
                format!("equalizer matrices {points}^{lambda}"),
                limits.enumeration,
            )
        })?;
    let members: Vec<Operation> = fragment.members(f.arity()).iter().cloned().collect();
    let agreements: Vec<PointSet> = members.iter().map(|t| f.agreement_unchecked(t)).collect();
    let explicit = (matrices <= limits.equalizer_entries).then(|| {
        agreements
            .iter()
            .map(|eq| {
                let mut set = FixedBitSet::with_capacity(matrices);
                for idx in 0..matrices {
                    if matrix_columns(idx, points, lambda).all(|p| eq.contains(p)) {
                        set.insert(idx);
                    }
                }
                set
            })
            .collect()
    });
    Ok(EqualizerFamily {
        universe: f.universe().clone(),
        arity: f.arity(),
        lambda,
        points,
        matrices,
        members,
        agreements,
        explicit,
    })
}

fn matrix_columns(mut idx: usize, points: usize, lambda: usize) -> impl Iterator<Item = usize> {
    let mut cols = vec![0; lambda];
    for c in cols.iter_mut().rev() {
        *c = idx % points;
        idx /= points;
    }
    cols.into_iter()
}

impl EqualizerFamily {
    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn members(&self) -> &[Operation] {
        &self.members
    }

    pub fn matrix_count(&self) -> usize {
        self.matrices
    }

    pub fn is_materialized(&self) -> bool {
        self.explicit.is_some()
    }

    /// The explicit set `E_t` for the `i`-th member, when materialized.
    pub fn equalizer(&self, i: usize) -> Option<&FixedBitSet> {
        self.explicit.as_ref().map(|e| &e[i])
    }

    pub fn contains(&self, member: usize, matrix: usize) -> bool {
        match &self.explicit {
            Some(e) => e[member].contains(matrix),
            None => matrix_columns(matrix, self.points, self.lambda)
                .all(|p| self.agreements[member].contains(p)),
        }
    }

    fn covered_by(&self, family: &[usize], matrix: usize) -> bool {
        family.iter().any(|&t| self.contains(t, matrix))
    }

    /// True iff every finite subfamily of the complements `N_t` has a common
    /// point, i.e. no finite union of equalizers is all of `(A^n)^λ`.
    pub fn fip_holds(&self) -> bool {
        let all: Vec<usize> = (0..self.members.len()).collect();
        match &self.explicit {
            Some(e) => {
                let mut union = FixedBitSet::with_capacity(self.matrices);
                for set in e {
                    union.union_with(set);
                }
                union.count_ones(..) != self.matrices
            }
            None => !(0..self.matrices).all(|x| self.covered_by(&all, x)),
        }
    }

    /// An irredundant set of members whose equalizers cover `(A^n)^λ`, or
    /// `None` when even all of them do not. First-fit in member order, then
    /// redundant members are dropped from the back.
    pub fn covering_subfamily(&self) -> Option<Vec<usize>> {
        let mut chosen: Vec<usize> = Vec::new();
        for x in 0..self.matrices {
            if !self.covered_by(&chosen, x) {
                let t = (0..self.members.len()).find(|&t| self.contains(t, x))?;
                chosen.push(t);
            }
        }
        let mut i = chosen.len();
        while i > 0 {
            i -= 1;
            let rest: Vec<usize> = chosen
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &t)| t)
                .collect();
            if (0..self.matrices).all(|x| self.covered_by(&rest, x)) {
                chosen.remove(i);
            }
        }
        Some(chosen)
    }

    /// Coordinate projection `D^(j)` of the equalizer of member `t`.
    pub fn projection(&self, t: usize, j: usize) -> PointSet {
        let mut out = PointSet::with_capacity(self.points);
        match &self.explicit {
            Some(e) => {
                for x in e[t].ones() {
                    if let Some(p) = matrix_columns(x, self.points, self.lambda).nth(j) {
                        out.insert(p);
                    }
                }
            }
            None => {
                if self.agreements[t].count_ones(..) > 0 {
                    out = self.agreements[t].clone();
                }
            }
        }
        out
    }

    /// The atoms of the Boolean algebra generated by all coordinate
    /// projections of the chosen equalizers, as a partition cover of `A^n`.
    pub fn atom_cover(&self, chosen: &[usize]) -> Cover {
        let generators: Vec<PointSet> = chosen
            .iter()
            .flat_map(|&t| (0..self.lambda).map(move |j| (t, j)))
            .map(|(t, j)| self.projection(t, j))
            .collect();
        let mut atoms: IndexSet<Vec<bool>> = IndexSet::new();
        let mut labels = vec![0usize; self.points];
        for (p, label) in labels.iter_mut().enumerate() {
            let signature: Vec<bool> = generators.iter().map(|g| g.contains(p)).collect();
            *label = atoms.insert_full(signature).0;
        }
        Cover::from_labels(&self.universe, self.arity, &labels)
    }
}

pub fn fip_holds(family: &EqualizerFamily) -> bool {
    family.fip_holds()
}

/// Members of `Υ_κ(C)` up to `arity_bound`, each with the certificate that
/// admitted it.
///
/// Candidates come from the λ-interpolable operations: a cover certificate
/// for λ makes every set of at most λ points lie inside at most λ blocks, so
/// nothing outside that set can pass. Each candidate must then produce a
/// certificate under `strategy`. Covers for the largest relevant λ also
/// serve every smaller λ.
pub fn ultra_closure_members(
    fragment: &CloneFragment,
    kappa: Kappa,
    arity_bound: usize,
    strategy: Strategy,
    limits: &Limits,
) -> Result<Vec<(Operation, DaggerCertificate)>> {
    if arity_bound > fragment.arity_bound() {
        return Err(Error::InvalidParameter(format!(
            "closure bound {arity_bound} exceeds the fragment's bound {}",
            fragment.arity_bound()
        )));
    }
    let u = fragment.universe();
    let mut out = Vec::new();
    for j in 1..=arity_bound {
        let lambda = kappa.max_lambda(u.power(j)?);
        let base: Vec<Operation> = fragment.members(j).iter().cloned().collect();
        for candidate in interpolable_operations(u, j, &base, lambda, limits)? {
            if let SearchOutcome::Found(cert) =
                search_dagger(&candidate, fragment, lambda, strategy, limits)?
            {
                out.push((candidate, cert));
            }
        }
    }
    Ok(out)
}

/// `Υ_κ(C)` up to `arity_bound`, as a fragment.
pub fn ultra_closure_fragment(
    fragment: &CloneFragment,
    kappa: Kappa,
    arity_bound: usize,
    strategy: Strategy,
    limits: &Limits,
) -> Result<CloneFragment> {
    let found = ultra_closure_members(fragment, kappa, arity_bound, strategy, limits)?;
    let mut members: BTreeMap<usize, IndexSet<Operation>> = BTreeMap::new();
    for (op, _) in found {
        members.entry(op.arity()).or_default().insert(op);
    }
    CloneFragment::from_members(fragment.universe(), arity_bound, members)
}
