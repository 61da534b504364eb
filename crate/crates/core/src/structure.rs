//! Relational detectors: essential unarity, pp-definitions, product
//! operations and clones, module compatibility, and ideal-preserving
//! operations.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexSet;
use itertools::Itertools;

use crate::clone::CloneFragment;
use crate::error::{Error, Result};
use crate::finite::{graph, preserves, rho3, Elem, Operation, PreservationWitness, Relation, Universe};
use crate::interpolation::{local_closure_fragment, Kappa};
use crate::limits::Limits;
use crate::ultralocal::{ultra_closure_fragment, Strategy};

/// A primitive positive formula: existentially quantified conjunction of
/// atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPFormula {
    pub free_vars: Vec<String>,
    pub bound_vars: Vec<String>,
    /// `(relation name, variables)`.
    pub atoms: Vec<(String, Vec<String>)>,
}

impl PPFormula {
    fn atom(rel: &str, vars: &[&str]) -> (String, Vec<String>) {
        (rel.to_string(), vars.iter().map(|v| v.to_string()).collect())
    }

    fn names(vars: &[&str]) -> Vec<String> {
        vars.iter().map(|v| v.to_string()).collect()
    }

    /// `∃y ρ(x0,x1,y) ∧ ρ(y,x2,x3)` with `rel` naming ρ.
    pub fn psi(rel: &str) -> Self {
        PPFormula {
            free_vars: Self::names(&["x0", "x1", "x2", "x3"]),
            bound_vars: Self::names(&["y"]),
            atoms: vec![
                Self::atom(rel, &["x0", "x1", "y"]),
                Self::atom(rel, &["y", "x2", "x3"]),
            ],
        }
    }

    /// `Ψ(x0,x1,x2,x3) ∧ Ψ(x1,x0,x2,x3)`, written out with two bound
    /// variables.
    pub fn phi(rel: &str) -> Self {
        PPFormula {
            free_vars: Self::names(&["x0", "x1", "x2", "x3"]),
            bound_vars: Self::names(&["y", "z"]),
            atoms: vec![
                Self::atom(rel, &["x0", "x1", "y"]),
                Self::atom(rel, &["y", "x2", "x3"]),
                Self::atom(rel, &["x1", "x0", "z"]),
                Self::atom(rel, &["z", "x2", "x3"]),
            ],
        }
    }
}

/// The relation defined by `phi` over `universe`, by joining the atoms'
/// tuple sets and projecting onto the free variables.
pub fn eval_pp_formula(
    phi: &PPFormula,
    env: &BTreeMap<String, Relation>,
    universe: &Universe,
) -> Result<Relation> {
    let mut declared: IndexSet<&str> = IndexSet::new();
    for v in phi.free_vars.iter().chain(&phi.bound_vars) {
        if !declared.insert(v.as_str()) {
            return Err(Error::InvalidFormula(format!("variable `{v}` declared twice")));
        }
    }
    // Rows are assignments to `vars`, in that order.
    let mut vars: Vec<&str> = Vec::new();
    let mut rows: BTreeSet<Vec<Elem>> = [Vec::new()].into();
    for (name, args) in &phi.atoms {
        let rel = env
            .get(name)
            .ok_or_else(|| Error::InvalidFormula(format!("unknown relation `{name}`")))?;
        if rel.universe() != universe {
            return Err(Error::UniverseMismatch);
        }
        if rel.arity() != args.len() {
            return Err(Error::InvalidFormula(format!(
                "`{name}` has arity {} but is applied to {} variables",
                rel.arity(),
                args.len()
            )));
        }
        let mut slots = Vec::with_capacity(args.len());
        let mut new_vars = Vec::new();
        for a in args {
            if !declared.contains(a.as_str()) {
                return Err(Error::InvalidFormula(format!("undeclared variable `{a}`")));
            }
            let slot = match vars.iter().position(|v| v == a) {
                Some(i) => i,
                None => match new_vars.iter().position(|v| v == a) {
                    Some(i) => vars.len() + i,
                    None => {
                        new_vars.push(a.as_str());
                        vars.len() + new_vars.len() - 1
                    }
                },
            };
            slots.push(slot);
        }
        let width = vars.len() + new_vars.len();
        let mut joined = BTreeSet::new();
        for row in &rows {
            'tuple: for t in rel.tuples() {
                let mut ext = row.clone();
                ext.resize(width, 0);
                let mut set = vec![false; width - row.len()];
                for (&slot, &value) in slots.iter().zip(t) {
                    if slot < row.len() {
                        if row[slot] != value {
                            continue 'tuple;
                        }
                    } else if set[slot - row.len()] {
                        if ext[slot] != value {
                            continue 'tuple;
                        }
                    } else {
                        ext[slot] = value;
                        set[slot - row.len()] = true;
                    }
                }
                joined.insert(ext);
            }
        }
        vars.extend(new_vars);
        rows = joined;
    }
    // Free variables that no atom mentions range over the whole universe.
    for v in &phi.free_vars {
        if !vars.contains(&v.as_str()) {
            rows = rows
                .iter()
                .flat_map(|r| {
                    universe.elements().map(move |a| {
                        let mut e = r.clone();
                        e.push(a);
                        e
                    })
                })
                .collect();
            vars.push(v.as_str());
        }
    }
    let positions: Vec<usize> = phi
        .free_vars
        .iter()
        .map(|v| vars.iter().position(|w| w == v).expect("added above"))
        .collect();
    let projected: BTreeSet<Vec<Elem>> = rows
        .iter()
        .map(|r| positions.iter().map(|&i| r[i]).collect())
        .collect();
    Ok(Relation::from_set_unchecked(universe, phi.free_vars.len(), projected))
}

/// Essential unarity decided by preservation of `ρ3`.
pub fn is_essentially_unary(f: &Operation) -> bool {
    let verdict = preserves(f, &rho3(f.universe()))
        .expect("rho3 lives on the operation's universe")
        .is_none();
    debug_assert_eq!(verdict, f.is_essentially_unary_direct());
    verdict
}

/// `A × B` identified with `{0, .., |A||B|-1}` by `(a, b) ↦ a·|B| + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductUniverse {
    left: Universe,
    right: Universe,
    paired: Universe,
}

impl ProductUniverse {
    pub fn new(left: &Universe, right: &Universe) -> Result<Self> {
        let paired = Universe::new(left.size() * right.size())?;
        Ok(ProductUniverse {
            left: left.clone(),
            right: right.clone(),
            paired,
        })
    }

    pub fn left(&self) -> &Universe {
        &self.left
    }

    pub fn right(&self) -> &Universe {
        &self.right
    }

    pub fn paired(&self) -> &Universe {
        &self.paired
    }

    pub fn pair(&self, a: Elem, b: Elem) -> Elem {
        (a as usize * self.right.size() + b as usize) as Elem
    }

    pub fn unpair(&self, x: Elem) -> (Elem, Elem) {
        let r = self.right.size();
        ((x as usize / r) as Elem, (x as usize % r) as Elem)
    }

    fn check(&self, f: &Operation) -> Result<()> {
        if f.universe() != &self.paired {
            return Err(Error::UniverseMismatch);
        }
        Ok(())
    }
}

/// The rectangular band `(a1,b1) * (a2,b2) = (a1,b2)`.
pub fn star_operation(pu: &ProductUniverse) -> Operation {
    Operation::from_fn(pu.paired(), 2, |x| {
        let (a, _) = pu.unpair(x[0]);
        let (_, b) = pu.unpair(x[1]);
        pu.pair(a, b)
    })
    .expect("binary table on a small universe")
}

/// `g × h`, acting coordinatewise.
pub fn product_operation(pu: &ProductUniverse, g: &Operation, h: &Operation) -> Result<Operation> {
    if g.universe() != pu.left() || h.universe() != pu.right() {
        return Err(Error::UniverseMismatch);
    }
    if g.arity() != h.arity() {
        return Err(Error::ArityMismatch {
            expected: g.arity(),
            found: h.arity(),
        });
    }
    let n = g.arity();
    let mut left = vec![0; n];
    let mut right = vec![0; n];
    Operation::from_fn(pu.paired(), n, |x| {
        for (i, &v) in x.iter().enumerate() {
            (left[i], right[i]) = pu.unpair(v);
        }
        pu.pair(g.apply_unchecked(&left), h.apply_unchecked(&right))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Product { left: Operation, right: Operation },
    /// Recomposition failed. The witness is a `γ(*)` violation, present
    /// whenever `f` does not commute with `*`.
    NotProduct { witness: Option<PreservationWitness> },
}

impl Decomposition {
    pub fn is_product(&self) -> bool {
        matches!(self, Decomposition::Product { .. })
    }
}

/// Splits `f` into `f_A × f_B` when possible. The factors are read off with
/// the other coordinate pinned to `0`; the split is accepted only if it
/// recomposes to `f`.
pub fn decompose_product(pu: &ProductUniverse, f: &Operation) -> Result<Decomposition> {
    pu.check(f)?;
    let n = f.arity();
    let left = Operation::from_fn(pu.left(), n, |a| {
        let args: Vec<Elem> = a.iter().map(|&x| pu.pair(x, 0)).collect();
        pu.unpair(f.apply_unchecked(&args)).0
    })?;
    let right = Operation::from_fn(pu.right(), n, |b| {
        let args: Vec<Elem> = b.iter().map(|&y| pu.pair(0, y)).collect();
        pu.unpair(f.apply_unchecked(&args)).1
    })?;
    if &product_operation(pu, &left, &right)? == f {
        Ok(Decomposition::Product { left, right })
    } else {
        let gamma = graph(&star_operation(pu))?;
        Ok(Decomposition::NotProduct {
            witness: preserves(f, &gamma)?,
        })
    }
}

/// Whether `f` commutes with `*`, i.e. preserves its graph.
pub fn commutes_with_star(pu: &ProductUniverse, f: &Operation) -> Result<bool> {
    pu.check(f)?;
    Ok(preserves(f, &graph(&star_operation(pu))?)?.is_none())
}

#[derive(Clone, Debug)]
pub struct ProductCloneVerdict {
    pub contains_star: bool,
    /// First member that does not decompose.
    pub non_product_member: Option<Operation>,
    pub factors: Option<(CloneFragment, CloneFragment)>,
}

impl ProductCloneVerdict {
    pub fn is_product(&self) -> bool {
        self.factors.is_some()
    }
}

/// A fragment is a product clone iff each member decomposes and `*` is a
/// member. The factors collect the left and right parts of all members.
pub fn is_product_clone(pu: &ProductUniverse, fragment: &CloneFragment) -> Result<ProductCloneVerdict> {
    if fragment.universe() != pu.paired() {
        return Err(Error::UniverseMismatch);
    }
    if fragment.arity_bound() < 2 {
        return Err(Error::InvalidParameter("product detection needs arity bound at least 2".into()));
    }
    let contains_star = fragment.contains(&star_operation(pu))?;
    let mut left: BTreeMap<usize, IndexSet<Operation>> = BTreeMap::new();
    let mut right: BTreeMap<usize, IndexSet<Operation>> = BTreeMap::new();
    for f in fragment.all_members() {
        match decompose_product(pu, f)? {
            Decomposition::Product { left: g, right: h } => {
                left.entry(f.arity()).or_default().insert(g);
                right.entry(f.arity()).or_default().insert(h);
            }
            Decomposition::NotProduct { .. } => {
                return Ok(ProductCloneVerdict {
                    contains_star,
                    non_product_member: Some(f.clone()),
                    factors: None,
                })
            }
        }
    }
    let factors = if contains_star {
        let k = fragment.arity_bound();
        Some((
            CloneFragment::from_members(pu.left(), k, left)?,
            CloneFragment::from_members(pu.right(), k, right)?,
        ))
    } else {
        None
    };
    Ok(ProductCloneVerdict {
        contains_star,
        non_product_member: None,
        factors,
    })
}

/// `{g × h : g ∈ P, h ∈ Q}` up to `arity_bound`.
pub fn product_clone(
    pu: &ProductUniverse,
    p: &CloneFragment,
    q: &CloneFragment,
    arity_bound: usize,
    limits: &Limits,
) -> Result<CloneFragment> {
    if p.universe() != pu.left() || q.universe() != pu.right() {
        return Err(Error::UniverseMismatch);
    }
    if arity_bound > p.arity_bound() || arity_bound > q.arity_bound() {
        return Err(Error::InvalidParameter(format!(
            "product bound {arity_bound} exceeds a factor's bound"
        )));
    }
    let mut members = BTreeMap::new();
    for j in 1..=arity_bound {
        let count = p.members(j).len().saturating_mul(q.members(j).len());
        if count > limits.members {
            return Err(Error::cap(format!("product members of arity {j}"), limits.members as u64));
        }
        let mut set = IndexSet::with_capacity(count);
        for g in p.members(j) {
            for h in q.members(j) {
                set.insert(product_operation(pu, g, h)?);
            }
        }
        members.insert(j, set);
    }
    CloneFragment::from_members(pu.paired(), arity_bound, members)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommutationReport {
    /// `Υ_κ(P×Q) = Υ_κ(P) × Υ_κ(Q)`.
    pub ultra: bool,
    /// `Λ_κ(P×Q) = Λ_κ(P) × Λ_κ(Q)`.
    pub local: bool,
}

/// Computes both sides of both closure identities as fragments and compares
/// member sets. `factor_strategy` is used on the factors and
/// `product_strategy` on the product universe.
#[allow(clippy::too_many_arguments)]
pub fn closure_commutation_check(
    pu: &ProductUniverse,
    p: &CloneFragment,
    q: &CloneFragment,
    kappa: Kappa,
    arity_bound: usize,
    factor_strategy: Strategy,
    product_strategy: Strategy,
    limits: &Limits,
) -> Result<CommutationReport> {
    let pq = product_clone(pu, p, q, arity_bound, limits)?;
    let ultra_lhs = ultra_closure_fragment(&pq, kappa, arity_bound, product_strategy, limits)?;
    let ultra_rhs = product_clone(
        pu,
        &ultra_closure_fragment(p, kappa, arity_bound, factor_strategy, limits)?,
        &ultra_closure_fragment(q, kappa, arity_bound, factor_strategy, limits)?,
        arity_bound,
        limits,
    )?;
    let local_lhs = local_closure_fragment(&pq, kappa, arity_bound, limits)?;
    let local_rhs = product_clone(
        pu,
        &local_closure_fragment(p, kappa, arity_bound, limits)?,
        &local_closure_fragment(q, kappa, arity_bound, limits)?,
        arity_bound,
        limits,
    )?;
    Ok(CommutationReport {
        ultra: ultra_lhs.same_members(&ultra_rhs),
        local: local_lhs.same_members(&local_rhs),
    })
}

/// An abelian group `(U, +, -, 0)` given by tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    add: Operation,
    neg: Operation,
    zero: Elem,
}

impl AbelianGroup {
    pub fn new(add: Operation, neg: Operation, zero: Elem) -> Result<Self> {
        let u = add.universe().clone();
        if add.arity() != 2 || neg.arity() != 1 || neg.universe() != &u {
            return Err(Error::InvalidGroup("expected a binary sum and a unary negation".into()));
        }
        u.check(zero as usize)?;
        let s = |x: Elem, y: Elem| add.apply_unchecked(&[x, y]);
        for x in u.elements() {
            if s(x, zero) != x {
                return Err(Error::InvalidGroup(format!("{zero} is not neutral for {x}")));
            }
            if s(x, neg.apply_unchecked(&[x])) != zero {
                return Err(Error::InvalidGroup(format!("bad negative of {x}")));
            }
            for y in u.elements() {
                if s(x, y) != s(y, x) {
                    return Err(Error::InvalidGroup(format!("{x} + {y} is not commutative")));
                }
                for z in u.elements() {
                    if s(s(x, y), z) != s(x, s(y, z)) {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(AbelianGroup { add, neg, zero })
    }

    /// `Z_m` on `{0, .., m-1}`.
    pub fn cyclic(u: &Universe) -> Self {
        let m = u.size();
        let add = Operation::from_fn(u, 2, |x| ((x[0] as usize + x[1] as usize) % m) as Elem)
            .expect("binary table");
        let neg = Operation::from_fn(u, 1, |x| ((m - x[0] as usize) % m) as Elem).expect("unary table");
        AbelianGroup { add, neg, zero: 0 }
    }

    pub fn add(&self) -> &Operation {
        &self.add
    }

    pub fn neg(&self) -> &Operation {
        &self.neg
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }
}

/// Preservation of `γ(+)`; `None` means compatible.
pub fn module_violation(f: &Operation, group: &AbelianGroup) -> Result<Option<PreservationWitness>> {
    if f.universe() != group.add.universe() {
        return Err(Error::UniverseMismatch);
    }
    preserves(f, &graph(&group.add)?)
}

pub fn module_compatible(f: &Operation, group: &AbelianGroup) -> Result<bool> {
    Ok(module_violation(f, group)?.is_none())
}

/// A set `S` outside the ideal's complement and arguments from `S` that `f`
/// sends to `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealViolation {
    pub set: Vec<Elem>,
    pub args: Vec<Elem>,
}

/// Membership test for the principal ideal `I_a = {S ⊆ A : a ∉ S}`: `f`
/// must map `S^n` into a member of `I_a` whenever `S` is in `I_a`.
///
/// Only principal ideals exist on finite sets; non-principal ideals on
/// infinite sets are out of reach here.
pub fn goldstern_shelah_violation(f: &Operation, a: Elem) -> Result<Option<IdealViolation>> {
    let u = f.universe();
    u.check(a as usize)?;
    let others: Vec<Elem> = u.elements().filter(|&x| x != a).collect();
    for mask in 1u64..(1u64 << others.len()) {
        let set: Vec<Elem> = (0..others.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| others[i])
            .collect();
        let found = (0..f.arity())
            .map(|_| set.iter().copied())
            .multi_cartesian_product()
            .find(|args| f.apply_unchecked(args) == a);
        if let Some(args) = found {
            return Ok(Some(IdealViolation { set, args }));
        }
    }
    Ok(None)
}

pub fn goldstern_shelah_member(f: &Operation, a: Elem) -> Result<bool> {
    Ok(goldstern_shelah_violation(f, a)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::named::*;
    use crate::finite::pi4;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    fn env(un: &Universe) -> BTreeMap<String, Relation> {
        [("rho3".to_string(), rho3(un))].into()
    }

    #[test]
    fn psi_and_phi() {
        let un = u(3);
        let psi = eval_pp_formula(&PPFormula::psi("rho3"), &env(&un), &un).unwrap();
        let expected =
            Relation::from_predicate(&un, 4, |t| t[0] == t[1] || t[2] == t[3] || t[1] == t[2]).unwrap();
        assert_eq!(psi, expected);
        for m in 2..=4 {
            let un = u(m);
            let phi = eval_pp_formula(&PPFormula::phi("rho3"), &env(&un), &un).unwrap();
            assert_eq!(phi, pi4(&un));
        }
    }

    #[test]
    fn single_atom_and_errors() {
        let un = u(2);
        let rel = order_leq_rel(&un);
        let e: BTreeMap<String, Relation> = [("le".to_string(), rel.clone())].into();
        let f = PPFormula {
            free_vars: vec!["a".into(), "b".into()],
            bound_vars: vec![],
            atoms: vec![("le".into(), vec!["a".into(), "b".into()])],
        };
        assert_eq!(eval_pp_formula(&f, &e, &un).unwrap(), rel);
        let swapped = PPFormula {
            atoms: vec![("le".into(), vec!["b".into(), "a".into()])],
            ..f.clone()
        };
        let geq = eval_pp_formula(&swapped, &e, &un).unwrap();
        assert!(geq.contains(&[1, 0]) && !geq.contains(&[0, 1]));
        let unknown = PPFormula {
            atoms: vec![("nope".into(), vec!["a".into(), "b".into()])],
            ..f.clone()
        };
        assert!(eval_pp_formula(&unknown, &e, &un).is_err());
        let bad_arity = PPFormula {
            atoms: vec![("le".into(), vec!["a".into()])],
            ..f.clone()
        };
        assert!(eval_pp_formula(&bad_arity, &e, &un).is_err());
        let loose = PPFormula {
            free_vars: vec!["a".into(), "b".into(), "c".into()],
            ..f
        };
        assert_eq!(eval_pp_formula(&loose, &e, &un).unwrap().len(), 6);
    }

    fn order_leq_rel(un: &Universe) -> Relation {
        crate::finite::order_leq(un)
    }

    #[test]
    fn essential_unarity() {
        let un = u(3);
        assert!(is_essentially_unary(&Operation::projection(&un, 3, 1).unwrap()));
        assert!(!is_essentially_unary(&and()));
        let c = Operation::constant(&un, 1, 2).unwrap();
        let cp = c.superpose(&[Operation::projection(&un, 2, 1).unwrap()]).unwrap();
        assert!(is_essentially_unary(&cp));
    }

    #[test]
    fn star_examples() {
        let pu = ProductUniverse::new(&u(2), &u(2)).unwrap();
        let star = star_operation(&pu);
        assert_eq!(star.apply(&[pu.pair(0, 0), pu.pair(1, 1)]).unwrap(), pu.pair(0, 1));
        for x in pu.paired().elements() {
            assert_eq!(star.apply(&[x, x]).unwrap(), x);
        }
        match decompose_product(&pu, &star).unwrap() {
            Decomposition::Product { left, right } => {
                assert_eq!(left, Operation::projection(&u(2), 2, 0).unwrap());
                assert_eq!(right, Operation::projection(&u(2), 2, 1).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn swap_is_not_a_product() {
        let pu = ProductUniverse::new(&u(2), &u(2)).unwrap();
        let swap = Operation::from_values(pu.paired(), 1, &[3, 1, 2, 0]).unwrap();
        match decompose_product(&pu, &swap).unwrap() {
            Decomposition::NotProduct { witness: Some(w) } => {
                let gamma = graph(&star_operation(&pu)).unwrap();
                assert!(w.is_valid_for(&swap, &gamma));
            }
            other => panic!("{other:?}"),
        }
        let lim = Limits::default();
        let c = CloneFragment::generate(pu.paired(), &[swap], 2, &lim).unwrap();
        assert!(!is_product_clone(&pu, &c).unwrap().is_product());
    }

    #[test]
    fn product_clones() {
        let lim = Limits::default();
        let pu = ProductUniverse::new(&u(2), &u(2)).unwrap();
        let star = CloneFragment::generate(pu.paired(), &[star_operation(&pu)], 2, &lim).unwrap();
        let v = is_product_clone(&pu, &star).unwrap();
        let (p, q) = v.factors.unwrap();
        let proj = CloneFragment::generate(&u(2), &[], 2, &lim).unwrap();
        assert!(p.same_members(&proj) && q.same_members(&proj));

        let p = CloneFragment::generate(&u(2), &[and()], 2, &lim).unwrap();
        let q = CloneFragment::generate(&u(2), &[or()], 2, &lim).unwrap();
        let pq = product_clone(&pu, &p, &q, 2, &lim).unwrap();
        let v = is_product_clone(&pu, &pq).unwrap();
        let (p2, q2) = v.factors.unwrap();
        assert!(p2.same_members(&p) && q2.same_members(&q));
    }

    #[test]
    fn commutation_on_projections() {
        let lim = Limits::default();
        let pu = ProductUniverse::new(&u(2), &u(2)).unwrap();
        let p = CloneFragment::generate(&u(2), &[], 1, &lim).unwrap();
        let r = closure_commutation_check(
            &pu,
            &p,
            &p,
            Kappa::Finite(4),
            1,
            Strategy::ExhaustivePartitions { max_blocks: None },
            Strategy::EqualizerAtoms,
            &lim,
        )
        .unwrap();
        assert!(r.ultra && r.local);
    }

    #[test]
    fn module_examples() {
        let z2 = AbelianGroup::cyclic(&u(2));
        assert!(module_compatible(&xor(), &z2).unwrap());
        assert!(!module_compatible(&and(), &z2).unwrap());
        let z3 = AbelianGroup::cyclic(&u(3));
        for c in 0..3usize {
            let scalar = Operation::from_fn(&u(3), 1, |x| ((c * x[0] as usize) % 3) as Elem).unwrap();
            assert!(module_compatible(&scalar, &z3).unwrap());
        }
        let bad = AbelianGroup::new(and(), not(), 0);
        assert!(matches!(bad, Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn ideal_membership() {
        let un = u(3);
        let id = Operation::projection(&un, 1, 0).unwrap();
        let m = dual_discriminator(&un);
        for a in un.elements() {
            assert!(goldstern_shelah_member(&id, a).unwrap());
            assert!(goldstern_shelah_member(&m, a).unwrap());
        }
        let c0 = Operation::constant(&un, 1, 0).unwrap();
        let v = goldstern_shelah_violation(&c0, 0).unwrap().unwrap();
        assert_eq!(v, IdealViolation { set: vec![1], args: vec![1] });
    }
}
