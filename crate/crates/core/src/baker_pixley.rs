//! Near-unanimity interpolation over a finite cover.
//!
//! Given a `d`-ary near-unanimity operation `h`, interpolants for all block
//! families of size `d-1` lift to interpolants for every larger family: for
//! `B` of size `m >= d`, let `B_i` be `B` without its `i`-th block and put
//! `t^[B] = h(t^[B_0], ..., t^[B_{d-1}])`. At every point of `⋃B` at least
//! `d-1` of the arguments agree with `f`, so the result does too.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde_json::{json, Value};

use crate::clone::CloneFragment;
use crate::error::{Error, Result};
use crate::finite::{preserves_all, Elem, Operation};
use crate::interpolation::Kappa;
use crate::limits::Limits;
use crate::ultralocal::{ultra_closure_members, Cover, DaggerCertificate, Strategy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPInstance {
    pub f: Operation,
    pub h: Operation,
    pub cover: Cover,
    /// Interpolants keyed by sorted block indices.
    pub base_interpolants: BTreeMap<Vec<usize>, Operation>,
}

impl BPInstance {
    /// The instance read off a cover certificate for λ = `d-1`.
    pub fn from_certificate(f: &Operation, h: &Operation, cert: &DaggerCertificate) -> Self {
        BPInstance {
            f: f.clone(),
            h: h.clone(),
            cover: cert.cover.clone(),
            base_interpolants: cert.interpolants.clone(),
        }
    }

    pub fn nu_arity(&self) -> usize {
        self.h.arity()
    }

    fn validate(&self) -> Result<()> {
        if self.h.arity() < 3 || !self.h.is_near_unanimity()? {
            return Err(Error::NotNearUnanimity);
        }
        let u = self.f.universe();
        if self.h.universe() != u || self.cover.universe() != u {
            return Err(Error::UniverseMismatch);
        }
        if self.cover.domain_arity() != self.f.arity() {
            return Err(Error::InvalidCover("cover does not live on the target's domain".into()));
        }
        for (blocks, t) in &self.base_interpolants {
            if blocks.is_empty()
                || !blocks.windows(2).all(|w| w[0] < w[1])
                || blocks.iter().any(|&b| b >= self.cover.len())
            {
                return Err(Error::InvalidCover(format!("bad block family {blocks:?}")));
            }
            if t.universe() != u || t.arity() != self.f.arity() {
                return Err(Error::ArityMismatch {
                    expected: self.f.arity(),
                    found: t.arity(),
                });
            }
            if let Some(point) = self
                .cover
                .union_of(blocks)
                .ones()
                .find(|&p| t.value_at(p) != self.f.value_at(p))
            {
                return Err(Error::BadBaseInterpolant {
                    blocks: blocks.clone(),
                    point,
                });
            }
        }
        Ok(())
    }
}

/// One node of the interpolant tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BPNode {
    Base { blocks: Vec<usize> },
    Compose { blocks: Vec<usize>, children: Vec<BPNode> },
}

impl BPNode {
    pub fn blocks(&self) -> &[usize] {
        match self {
            BPNode::Base { blocks } | BPNode::Compose { blocks, .. } => blocks,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            BPNode::Base { blocks } => json!({ "blocks": blocks, "base": true }),
            BPNode::Compose { blocks, children } => json!({
                "blocks": blocks,
                "op": "h",
                "children": children.iter().map(BPNode::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    /// Re-evaluates the tree from the base interpolants alone.
    pub fn evaluate(&self, h: &Operation, base: &BTreeMap<Vec<usize>, Operation>) -> Result<Vec<Elem>> {
        match self {
            BPNode::Base { blocks } => base
                .get(blocks)
                .map(|t| t.table().to_vec())
                .ok_or_else(|| Error::MissingBaseInterpolant(blocks.clone())),
            BPNode::Compose { children, .. } => {
                if children.len() != h.arity() {
                    return Err(Error::ArityMismatch {
                        expected: h.arity(),
                        found: children.len(),
                    });
                }
                let tables = children
                    .iter()
                    .map(|c| c.evaluate(h, base))
                    .collect::<Result<Vec<_>>>()?;
                let refs: Vec<&[Elem]> = tables.iter().map(Vec::as_slice).collect();
                Ok(h.superpose_tables(&refs))
            }
        }
    }

    fn size(&self) -> usize {
        match self {
            BPNode::Base { .. } => 1,
            BPNode::Compose { children, .. } => 1 + children.iter().map(BPNode::size).sum::<usize>(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPResult {
    pub table: Operation,
    pub tree: BPNode,
}

impl BPResult {
    pub fn to_json(&self) -> Value {
        json!({ "table": self.table.table(), "tree": self.tree.to_json() })
    }
}

/// Builds `t^[all blocks]` level by level. Each level-`m` table is computed
/// once per family; the tree repeats shared subtrees and is capped at
/// [`Limits::enumeration`] nodes.
pub fn bp_interpolate(inst: &BPInstance, limits: &Limits) -> Result<BPResult> {
    inst.validate()?;
    let d = inst.nu_arity();
    let blocks = inst.cover.len();
    let all: Vec<usize> = (0..blocks).collect();
    if blocks < d {
        let t = inst
            .base_interpolants
            .get(&all)
            .ok_or_else(|| Error::MissingBaseInterpolant(all.clone()))?;
        return Ok(BPResult {
            table: t.clone(),
            tree: BPNode::Base { blocks: all },
        });
    }
    let mut tables: BTreeMap<Vec<usize>, Vec<Elem>> = BTreeMap::new();
    let mut trees: BTreeMap<Vec<usize>, BPNode> = BTreeMap::new();
    for family in (0..blocks).combinations(d - 1) {
        let t = inst
            .base_interpolants
            .get(&family)
            .ok_or_else(|| Error::MissingBaseInterpolant(family.clone()))?;
        tables.insert(family.clone(), t.table().to_vec());
        trees.insert(family.clone(), BPNode::Base { blocks: family });
    }
    for m in d..=blocks {
        let mut next_tables = BTreeMap::new();
        let mut next_trees = BTreeMap::new();
        for family in (0..blocks).combinations(m) {
            let children: Vec<Vec<usize>> = (0..d)
                .map(|i| {
                    let mut c = family.clone();
                    c.remove(i);
                    c
                })
                .collect();
            let refs: Vec<&[Elem]> = children.iter().map(|c| tables[c].as_slice()).collect();
            next_tables.insert(family.clone(), inst.h.superpose_tables(&refs));
            let node = BPNode::Compose {
                blocks: family.clone(),
                children: children.iter().map(|c| trees[c].clone()).collect(),
            };
            if node.size() as u64 > limits.enumeration {
                return Err(Error::cap("interpolant tree nodes", limits.enumeration));
            }
            next_trees.insert(family, node);
        }
        tables = next_tables;
        trees = next_trees;
    }
    let table = tables.remove(&all).expect("top level holds the full family");
    let table = Operation::new(inst.f.universe(), inst.f.arity(), table)?;
    Ok(BPResult {
        table,
        tree: trees.remove(&all).expect("top level holds the full family"),
    })
}

/// The first near-unanimity operation among the members (by arity) and then
/// the generators.
pub fn find_near_unanimity(fragment: &CloneFragment) -> Option<Operation> {
    fragment
        .all_members()
        .chain(fragment.generators())
        .find(|op| op.arity() >= 3 && op.is_near_unanimity().unwrap_or(false))
        .cloned()
}

/// Per-operation entry of [`NuReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuLedgerEntry {
    pub op: Operation,
    pub in_fragment: bool,
    pub certificate: DaggerCertificate,
    /// Whether the cover certificate, lifted through `h`, rebuilt `op`.
    pub reconstructed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuReport {
    pub h: Operation,
    pub closed: bool,
    pub ledger: Vec<NuLedgerEntry>,
}

/// Checks `Υ_d(C) = C` up to the fragment's arity bound, where `d` is the
/// arity of a near-unanimity operation found in the fragment.
pub fn nu_ultraclosure_check(
    fragment: &CloneFragment,
    strategy: Strategy,
    limits: &Limits,
) -> Result<NuReport> {
    let h = find_near_unanimity(fragment).ok_or(Error::NoNearUnanimityMember)?;
    let d = h.arity();
    let found = ultra_closure_members(fragment, Kappa::Finite(d), fragment.arity_bound(), strategy, limits)?;
    let mut ledger = Vec::with_capacity(found.len());
    for (op, certificate) in found {
        let inst = BPInstance::from_certificate(&op, &h, &certificate);
        let reconstructed = bp_interpolate(&inst, limits)?.table == op;
        ledger.push(NuLedgerEntry {
            in_fragment: fragment.members(op.arity()).contains(&op),
            op,
            certificate,
            reconstructed,
        });
    }
    let expected = fragment.len();
    let closed = ledger.len() == expected && ledger.iter().all(|e| e.in_fragment);
    Ok(NuReport { h, closed, ledger })
}

/// Both sides of the classical description of a near-unanimity clone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalMembership {
    /// `f` preserves every invariant relation of arity below `d`.
    pub preserves_small_invariants: bool,
    /// `f` belongs to the clone, regenerated up to `f`'s arity if needed.
    pub member: bool,
}

impl ClassicalMembership {
    pub fn agree(&self) -> bool {
        self.preserves_small_invariants == self.member
    }
}

pub fn classical_bp_membership(
    f: &Operation,
    fragment: &CloneFragment,
    d: usize,
    limits: &Limits,
) -> Result<ClassicalMembership> {
    if f.universe() != fragment.universe() {
        return Err(Error::UniverseMismatch);
    }
    let has_nu = fragment
        .all_members()
        .chain(fragment.generators())
        .any(|op| op.arity() == d && op.is_near_unanimity().unwrap_or(false));
    if d < 3 || !has_nu {
        return Err(Error::NoNearUnanimityMember);
    }
    let invariants = fragment.inv(d - 1, limits)?;
    let preserves_small_invariants = preserves_all(f, invariants.iter())?;
    let member = if f.arity() <= fragment.arity_bound() {
        fragment.contains(f)?
    } else {
        CloneFragment::generate(fragment.universe(), fragment.generators(), f.arity(), limits)?
            .contains(f)?
    };
    Ok(ClassicalMembership {
        preserves_small_invariants,
        member,
    })
}
