//! Finite universes, operation tables and relations.
//!
//! Tuples over a universe of size `m` are indexed lexicographically with the
//! last coordinate varying fastest: `(a_0, ..., a_{n-1})` lives at index
//! `a_0 * m^(n-1) + ... + a_{n-1}`. Certificates serialize these indices, so
//! the order is part of the external contract.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// An element of a finite universe.
pub type Elem = u8;

/// Largest supported universe.
pub const MAX_UNIVERSE: usize = 256;

/// Largest table (`m^n`) any operation or power of the universe may have.
pub const MAX_TABLE: usize = 1 << 24;

/// A set of points of `A^n`, addressed by tuple index.
pub type PointSet = FixedBitSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    size: usize,
    labels: Option<Arc<[String]>>,
}

impl Universe {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_UNIVERSE {
            return Err(Error::InvalidUniverse(format!(
                "size must be in 1..={MAX_UNIVERSE}, got {size}"
            )));
        }
        Ok(Universe { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut u = Universe::new(labels.len())?;
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidUniverse("labels must be distinct".into()));
        }
        u.labels = Some(labels.into());
        Ok(u)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(|a| a as Elem)
    }

    pub fn check(&self, a: usize) -> Result<Elem> {
        if a < self.size {
            Ok(a as Elem)
        } else {
            Err(Error::OutOfRange {
                element: a,
                size: self.size,
            })
        }
    }

    /// `m^n`, refusing powers above [`MAX_TABLE`].
    pub fn power(&self, n: usize) -> Result<usize> {
        u32::try_from(n)
            .ok()
            .and_then(|n| self.size.checked_pow(n))
            .filter(|&p| p <= MAX_TABLE)
            .ok_or_else(|| Error::cap(format!("universe power {}^{}", self.size, n), MAX_TABLE as u64))
    }

    pub fn tuple_at(&self, n: usize, mut index: usize) -> Vec<Elem> {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = (index % self.size) as Elem;
            index /= self.size;
        }
        t
    }

    pub fn index_of(&self, tuple: &[Elem]) -> Result<usize> {
        tuple.iter().try_fold(0usize, |acc, &a| {
            self.check(a as usize)?;
            Ok(acc * self.size + a as usize)
        })
    }

    pub(crate) fn index_unchecked(&self, tuple: &[Elem]) -> usize {
        tuple
            .iter()
            .fold(0usize, |acc, &a| acc * self.size + a as usize)
    }

    /// All tuples of `A^n` in index order.
    pub fn tuples(&self, n: usize) -> impl Iterator<Item = Vec<Elem>> + '_ {
        let total = self.size.pow(n as u32);
        (0..total).map(move |i| self.tuple_at(n, i))
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.labels {
            Some(l) => write!(f, "Universe({:?})", l),
            None => write!(f, "Universe({})", self.size),
        }
    }
}

/// A total operation `A^n -> A` stored as its table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    universe: Universe,
    arity: usize,
    table: Vec<Elem>,
}

impl Operation {
    pub fn new(universe: &Universe, arity: usize, table: Vec<Elem>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::UnsupportedArity {
                arity,
                reason: "nullary operations are modeled as constant unary tables",
            });
        }
        let len = universe.power(arity)?;
        if table.len() != len {
            return Err(Error::InvalidTable(format!(
                "table has {} entries, expected {}",
                table.len(),
                len
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= universe.size()) {
            return Err(Error::OutOfRange {
                element: bad as usize,
                size: universe.size(),
            });
        }
        Ok(Operation {
            universe: universe.clone(),
            arity,
            table,
        })
    }

    /// Builds an operation from integer entries, range-checking each one.
    pub fn from_values(universe: &Universe, arity: usize, values: &[usize]) -> Result<Self> {
        let table = values
            .iter()
            .map(|&v| universe.check(v))
            .collect::<Result<Vec<_>>>()?;
        Operation::new(universe, arity, table)
    }

    pub fn from_fn(
        universe: &Universe,
        arity: usize,
        mut f: impl FnMut(&[Elem]) -> Elem,
    ) -> Result<Self> {
        let len = universe.power(arity)?;
        let table = (0..len).map(|i| f(&universe.tuple_at(arity, i))).collect();
        Operation::new(universe, arity, table)
    }

    pub(crate) fn from_table_unchecked(universe: &Universe, arity: usize, table: Vec<Elem>) -> Self {
        debug_assert_eq!(table.len(), universe.size().pow(arity as u32));
        Operation {
            universe: universe.clone(),
            arity,
            table,
        }
    }

    /// The `n`-ary projection onto coordinate `coord` (0-based).
    pub fn projection(universe: &Universe, arity: usize, coord: usize) -> Result<Self> {
        if coord >= arity {
            return Err(Error::InvalidParameter(format!(
                "projection coordinate {coord} out of range for arity {arity}"
            )));
        }
        Operation::from_fn(universe, arity, |t| t[coord])
    }

    pub fn constant(universe: &Universe, arity: usize, value: Elem) -> Result<Self> {
        universe.check(value as usize)?;
        Operation::from_fn(universe, arity, |_| value)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn into_table(self) -> Vec<Elem> {
        self.table
    }

    /// Number of points in the domain, `m^n`.
    pub fn domain_len(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn value_at(&self, index: usize) -> Elem {
        self.table[index]
    }

    pub fn apply(&self, args: &[Elem]) -> Result<Elem> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        let idx = self.universe.index_of(args)?;
        Ok(self.table[idx])
    }

    pub(crate) fn apply_unchecked(&self, args: &[Elem]) -> Elem {
        self.table[self.universe.index_unchecked(args)]
    }

    fn same_universe(&self, other: &Operation) -> Result<()> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    /// Points of `A^n` where `self` and `other` agree.
    pub fn agreement(&self, other: &Operation) -> Result<PointSet> {
        self.same_universe(other)?;
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(self.agreement_unchecked(other))
    }

    pub(crate) fn agreement_unchecked(&self, other: &Operation) -> PointSet {
        let mut set = PointSet::with_capacity(self.table.len());
        for (i, (a, b)) in self.table.iter().zip(&other.table).enumerate() {
            if a == b {
                set.insert(i);
            }
        }
        set
    }

    /// `self(inners[0](x), ..., inners[n-1](x))` for every `x` in `A^k`.
    pub fn superpose(&self, inners: &[Operation]) -> Result<Operation> {
        if inners.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: inners.len(),
            });
        }
        let k = inners[0].arity;
        for t in inners {
            self.same_universe(t)?;
            if t.arity != k {
                return Err(Error::ArityMismatch {
                    expected: k,
                    found: t.arity,
                });
            }
        }
        let refs: Vec<&[Elem]> = inners.iter().map(|t| t.table()).collect();
        Ok(Operation::from_table_unchecked(
            &self.universe,
            k,
            self.superpose_tables(&refs),
        ))
    }

    /// Table-level superposition; inner tables must share one length.
    pub(crate) fn superpose_tables(&self, inners: &[&[Elem]]) -> Vec<Elem> {
        let m = self.universe.size;
        let len = inners[0].len();
        (0..len)
            .map(|x| {
                let idx = inners
                    .iter()
                    .fold(0usize, |acc, t| acc * m + t[x] as usize);
                self.table[idx]
            })
            .collect()
    }

    /// Checks every near-unanimity identity `h(a,..,b,..,a) = a`.
    pub fn is_near_unanimity(&self) -> Result<bool> {
        if self.arity < 3 {
            return Err(Error::UnsupportedArity {
                arity: self.arity,
                reason: "near-unanimity operations have arity at least 3",
            });
        }
        let mut args = vec![0 as Elem; self.arity];
        for a in self.universe.elements() {
            for b in self.universe.elements() {
                for i in 0..self.arity {
                    args.fill(a);
                    args[i] = b;
                    if self.apply_unchecked(&args) != a {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn is_conservative(&self) -> bool {
        (0..self.table.len()).all(|i| {
            let t = self.universe.tuple_at(self.arity, i);
            t.contains(&self.table[i])
        })
    }

    /// Whether some pair of inputs differing only at coordinate `i` gives
    /// different outputs.
    pub fn depends_on(&self, i: usize) -> Result<bool> {
        if i >= self.arity {
            return Err(Error::InvalidParameter(format!(
                "coordinate {i} out of range for arity {}",
                self.arity
            )));
        }
        let m = self.universe.size;
        let stride = m.pow((self.arity - 1 - i) as u32);
        for idx in 0..self.table.len() {
            // only visit tuples whose i-th coordinate is 0, then vary it
            if !(idx / stride).is_multiple_of(m) {
                continue;
            }
            let base = self.table[idx];
            if (1..m).any(|c| self.table[idx + c * stride] != base) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn essential_coordinates(&self) -> Vec<usize> {
        (0..self.arity)
            .filter(|&i| self.depends_on(i).unwrap_or(false))
            .collect()
    }

    /// Depends on at most one variable, decided from the table.
    pub fn is_essentially_unary_direct(&self) -> bool {
        self.essential_coordinates().len() <= 1
    }
}

impl fmt::Debug for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Operation(m={}, n={}, {:?})",
            self.universe.size, self.arity, self.table
        )
    }
}

/// A finitary relation given by its tuple set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    universe: Universe,
    arity: usize,
    tuples: BTreeSet<Vec<Elem>>,
}

impl Relation {
    pub fn new<I>(universe: &Universe, arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        if arity == 0 {
            return Err(Error::InvalidRelation("arity must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: t.len(),
                });
            }
            for &a in &t {
                universe.check(a as usize)?;
            }
            if !set.insert(t) {
                return Err(Error::InvalidRelation("duplicate tuple".into()));
            }
        }
        Ok(Relation {
            universe: universe.clone(),
            arity,
            tuples: set,
        })
    }

    pub fn from_predicate(
        universe: &Universe,
        arity: usize,
        pred: impl Fn(&[Elem]) -> bool,
    ) -> Result<Self> {
        universe.power(arity)?;
        let tuples: Vec<_> = universe.tuples(arity).filter(|t| pred(t)).collect();
        Relation::new(universe, arity, tuples)
    }

    pub(crate) fn from_set_unchecked(
        universe: &Universe,
        arity: usize,
        tuples: BTreeSet<Vec<Elem>>,
    ) -> Self {
        Relation {
            universe: universe.clone(),
            arity,
            tuples,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[Elem]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Vec<Elem>> {
        self.tuples.iter()
    }

    pub fn tuple_set(&self) -> &BTreeSet<Vec<Elem>> {
        &self.tuples
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation(r={}, {:?})", self.arity, self.tuples)
    }
}

/// `{(a,b,c) : a = b or b = c}`
pub fn rho3(u: &Universe) -> Relation {
    Relation::from_predicate(u, 3, |t| t[0] == t[1] || t[1] == t[2]).expect("small power")
}

/// `{(a,b,c,d) : a = b or c = d}`
pub fn pi4(u: &Universe) -> Relation {
    Relation::from_predicate(u, 4, |t| t[0] == t[1] || t[2] == t[3]).expect("small power")
}

pub fn neq(u: &Universe) -> Relation {
    Relation::from_predicate(u, 2, |t| t[0] != t[1]).expect("small power")
}

pub fn equality(u: &Universe) -> Relation {
    Relation::from_predicate(u, 2, |t| t[0] == t[1]).expect("small power")
}

/// The natural order `a <= b` on element indices.
pub fn order_leq(u: &Universe) -> Relation {
    Relation::from_predicate(u, 2, |t| t[0] <= t[1]).expect("small power")
}

/// `{(x_1, ..., x_n, op(x)) }`, for unary and binary operations.
pub fn graph(op: &Operation) -> Result<Relation> {
    if op.arity() > 2 {
        return Err(Error::UnsupportedArity {
            arity: op.arity(),
            reason: "graphs are built for unary and binary operations",
        });
    }
    let n = op.arity();
    let u = op.universe();
    let tuples = (0..op.domain_len()).map(|i| {
        let mut t = u.tuple_at(n, i);
        t.push(op.value_at(i));
        t
    });
    Relation::new(u, n + 1, tuples)
}

/// Failure witness for [`preserves`]: `columns` are `n` tuples of the
/// relation; applying the operation row by row yields `image`, which is not in
/// the relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationWitness {
    pub columns: Vec<Vec<Elem>>,
    pub image: Vec<Elem>,
}

impl PreservationWitness {
    /// Re-checks the witness against `op` and `rel` from scratch.
    pub fn is_valid_for(&self, op: &Operation, rel: &Relation) -> bool {
        if self.columns.len() != op.arity() || self.image.len() != rel.arity() {
            return false;
        }
        if !self.columns.iter().all(|c| rel.contains(c)) {
            return false;
        }
        let mut row = vec![0; op.arity()];
        for (i, &img) in self.image.iter().enumerate() {
            for (slot, col) in row.iter_mut().zip(&self.columns) {
                *slot = col[i];
            }
            match op.apply(&row) {
                Ok(v) if v == img => {}
                _ => return false,
            }
        }
        !rel.contains(&self.image)
    }
}

/// Decides whether `op` preserves `rel`; the first failing column matrix in
/// enumeration order is returned on failure.
pub fn preserves(op: &Operation, rel: &Relation) -> Result<Option<PreservationWitness>> {
    if op.universe() != rel.universe() {
        return Err(Error::UniverseMismatch);
    }
    let tuples: Vec<&Vec<Elem>> = rel.tuples().collect();
    if tuples.is_empty() {
        return Ok(None);
    }
    let n = op.arity();
    let r = rel.arity();
    let mut choice = vec![0usize; n];
    let mut row = vec![0 as Elem; n];
    let mut image = vec![0 as Elem; r];
    loop {
        for (i, slot) in image.iter_mut().enumerate() {
            for (j, &c) in choice.iter().enumerate() {
                row[j] = tuples[c][i];
            }
            *slot = op.apply_unchecked(&row);
        }
        if !rel.contains(&image) {
            return Ok(Some(PreservationWitness {
                columns: choice.iter().map(|&c| tuples[c].clone()).collect(),
                image,
            }));
        }
        // mixed-radix increment, last position fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < tuples.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

pub fn preserves_all<'a, I>(op: &Operation, rels: I) -> Result<bool>
where
    I: IntoIterator<Item = &'a Relation>,
{
    for rel in rels {
        if preserves(op, rel)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A few named operations used throughout the tests and examples.
pub mod named {
    use super::*;

    fn boolean() -> Universe {
        Universe::new(2).expect("2 is a valid size")
    }

    pub fn and() -> Operation {
        Operation::from_fn(&boolean(), 2, |t| t[0] & t[1]).unwrap()
    }

    pub fn or() -> Operation {
        Operation::from_fn(&boolean(), 2, |t| t[0] | t[1]).unwrap()
    }

    pub fn nand() -> Operation {
        Operation::from_fn(&boolean(), 2, |t| 1 - (t[0] & t[1])).unwrap()
    }

    pub fn xor() -> Operation {
        Operation::from_fn(&boolean(), 2, |t| t[0] ^ t[1]).unwrap()
    }

    pub fn not() -> Operation {
        Operation::from_fn(&boolean(), 1, |t| 1 - t[0]).unwrap()
    }

    /// Ternary majority on any universe: the repeated value when there is
    /// one, otherwise the first argument.
    pub fn majority(u: &Universe) -> Operation {
        Operation::from_fn(u, 3, |t| if t[1] == t[2] { t[1] } else { t[0] }).unwrap()
    }

    /// `q(x,y,z) = x` if `x = y`, else `z`.
    pub fn dual_discriminator(u: &Universe) -> Operation {
        Operation::from_fn(u, 3, |t| if t[0] == t[1] { t[0] } else { t[2] }).unwrap()
    }

    /// `x + y mod m`.
    pub fn cyclic_sum(u: &Universe) -> Operation {
        let m = u.size();
        Operation::from_fn(u, 2, |t| ((t[0] as usize + t[1] as usize) % m) as Elem).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn b() -> Universe {
        Universe::new(2).unwrap()
    }

    #[test]
    fn universe_rejects_bad_sizes_and_labels() {
        assert!(Universe::new(0).is_err());
        assert!(Universe::new(MAX_UNIVERSE + 1).is_err());
        assert!(Universe::with_labels(vec!["a".into(), "a".into()]).is_err());
        let u = Universe::with_labels(vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(u.size(), 2);
    }

    #[test]
    fn tuple_indexing_is_lexicographic_last_fastest() {
        let u = Universe::new(3).unwrap();
        assert_eq!(u.tuple_at(2, 5), vec![1, 2]);
        assert_eq!(u.index_of(&[1, 2]).unwrap(), 5);
        assert!(u.index_of(&[3, 0]).is_err());
    }

    #[test]
    fn apply_examples() {
        let p = Operation::projection(&b(), 2, 0).unwrap();
        assert_eq!(p.apply(&[0, 1]).unwrap(), 0);
        assert_eq!(and().apply(&[1, 1]).unwrap(), 1);
        assert_eq!(majority(&b()).apply(&[0, 1, 1]).unwrap(), 1);
    }

    #[test]
    fn apply_errors() {
        assert!(matches!(
            and().apply(&[1]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            and().apply(&[1, 2]),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn table_validation() {
        assert!(Operation::new(&b(), 2, vec![0, 1, 1]).is_err());
        assert!(Operation::new(&b(), 1, vec![0, 2]).is_err());
        assert!(Operation::new(&b(), 0, vec![0]).is_err());
    }

    #[test]
    fn superpose_examples() {
        let f = xor();
        let id = Operation::projection(&b(), 1, 0).unwrap();
        let g = Operation::new(&b(), 1, vec![1, 1]).unwrap();
        assert_eq!(id.superpose(std::slice::from_ref(&g)).unwrap(), g);
        let p1 = Operation::projection(&b(), 2, 0).unwrap();
        assert_eq!(and().superpose(&[p1.clone(), p1.clone()]).unwrap(), p1);
        let p2 = Operation::projection(&b(), 2, 1).unwrap();
        assert_eq!(f.superpose(&[p1, p2]).unwrap(), f);
    }

    #[test]
    fn superpose_rejects_mismatches() {
        let p1 = Operation::projection(&b(), 2, 0).unwrap();
        let u1 = Operation::projection(&b(), 1, 0).unwrap();
        assert!(and().superpose(std::slice::from_ref(&p1)).is_err());
        assert!(and().superpose(&[p1, u1]).is_err());
        let other = Operation::projection(&Universe::new(3).unwrap(), 1, 0).unwrap();
        assert!(not().superpose(&[other]).is_err());
    }

    #[test]
    fn rho3_and_neq_tuples() {
        let expected: BTreeSet<Vec<Elem>> = [
            [0, 0, 0],
            [0, 0, 1],
            [1, 1, 0],
            [1, 1, 1],
            [0, 1, 1],
            [1, 0, 0],
        ]
        .iter()
        .map(|t| t.to_vec())
        .collect();
        assert_eq!(rho3(&b()).tuple_set(), &expected);
        let n: Vec<_> = neq(&b()).tuples().cloned().collect();
        assert_eq!(n, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn graph_of_binary_op_on_four_elements() {
        let u = Universe::new(4).unwrap();
        let star = Operation::from_fn(&u, 2, |t| (t[0] / 2) * 2 + t[1] % 2).unwrap();
        assert_eq!(graph(&star).unwrap().len(), 16);
        assert!(graph(&majority(&b())).is_err());
    }

    #[test]
    fn preservation_examples() {
        let r = rho3(&b());
        let p = Operation::projection(&b(), 2, 0).unwrap();
        assert!(preserves(&p, &r).unwrap().is_none());
        assert!(preserves(&not(), &r).unwrap().is_none());
        let w = preserves(&and(), &r).unwrap().expect("AND breaks rho3");
        assert!(w.is_valid_for(&and(), &r));
        // the witness quoted for AND is also a genuine one
        let quoted = PreservationWitness {
            columns: vec![vec![0, 1, 1], vec![1, 1, 0]],
            image: vec![0, 1, 0],
        };
        assert!(quoted.is_valid_for(&and(), &r));
    }

    #[test]
    fn near_unanimity_examples() {
        assert!(majority(&b()).is_near_unanimity().unwrap());
        assert!(!Operation::projection(&b(), 3, 0)
            .unwrap()
            .is_near_unanimity()
            .unwrap());
        let u3 = Universe::new(3).unwrap();
        assert!(dual_discriminator(&u3).is_near_unanimity().unwrap());
        assert!(and().is_near_unanimity().is_err());
    }

    #[test]
    fn conservative_and_dependence() {
        assert!(majority(&b()).is_conservative());
        assert!(!Operation::constant(&b(), 1, 0).unwrap().is_conservative());
        assert!(!and().is_essentially_unary_direct());
        assert!(and().depends_on(0).unwrap() && and().depends_on(1).unwrap());
        let p = Operation::projection(&b(), 3, 1).unwrap();
        assert_eq!(p.essential_coordinates(), vec![1]);
        assert!(and().depends_on(2).is_err());
    }

    #[test]
    fn essentially_unary_iff_preserves_rho3_exhaustive() {
        for m in 1..=3usize {
            let u = Universe::new(m).unwrap();
            let r = rho3(&u);
            for n in 1..=3usize {
                let len = m.pow(n as u32);
                let total = m.pow(len as u32);
                if total > 20_000 {
                    continue;
                }
                for code in 0..total {
                    let mut c = code;
                    let table: Vec<Elem> = (0..len)
                        .map(|_| {
                            let v = (c % m) as Elem;
                            c /= m;
                            v
                        })
                        .collect();
                    let f = Operation::new(&u, n, table).unwrap();
                    assert_eq!(
                        f.is_essentially_unary_direct(),
                        preserves(&f, &r).unwrap().is_none(),
                        "{f:?}"
                    );
                }
            }
        }
    }
}
