//! Finite-support permutations and injections of the natural numbers.
//!
//! Every check here is relative to a window `[0, N)`: the natural numbers
//! are the ambient set, and the window is the finite part actually
//! inspected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

pub type Point = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_even(self) -> bool {
        self == Parity::Even
    }

    fn from_count(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A permutation moving finitely many points; only moved points are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSuppPermutation {
    moved: BTreeMap<Point, Point>,
}

impl FinSuppPermutation {
    pub fn new(moved: BTreeMap<Point, Point>) -> Result<Self> {
        if let Some((x, _)) = moved.iter().find(|(x, y)| x == y) {
            return Err(Error::MalformedPermutation(format!("entry {x} maps to itself")));
        }
        let image: BTreeSet<Point> = moved.values().copied().collect();
        if image.len() != moved.len() {
            return Err(Error::MalformedPermutation("two points share an image".into()));
        }
        if !image.iter().eq(moved.keys()) {
            return Err(Error::MalformedPermutation(
                "moved points and their images differ as sets".into(),
            ));
        }
        Ok(FinSuppPermutation { moved })
    }

    pub fn identity() -> Self {
        FinSuppPermutation::default()
    }

    pub fn transposition(a: Point, b: Point) -> Result<Self> {
        Self::cycle(&[a, b])
    }

    /// The cycle `(c0 c1 .. c_{k-1})`, sending `c_i` to `c_{i+1}`.
    pub fn cycle(points: &[Point]) -> Result<Self> {
        if points.iter().collect::<BTreeSet<_>>().len() != points.len() {
            return Err(Error::MalformedPermutation("cycle repeats a point".into()));
        }
        if points.len() < 2 {
            return Ok(Self::identity());
        }
        let moved = (0..points.len())
            .map(|i| (points[i], points[(i + 1) % points.len()]))
            .collect();
        Ok(FinSuppPermutation { moved })
    }

    pub fn moved(&self) -> &BTreeMap<Point, Point> {
        &self.moved
    }

    pub fn support(&self) -> BTreeSet<Point> {
        self.moved.keys().copied().collect()
    }

    pub fn apply(&self, x: Point) -> Point {
        self.moved.get(&x).copied().unwrap_or(x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let moved = self
            .moved
            .keys()
            .chain(other.moved.keys())
            .map(|&x| (x, self.apply(other.apply(x))))
            .filter(|(x, y)| x != y)
            .collect();
        FinSuppPermutation { moved }
    }

    pub fn inverse(&self) -> Self {
        FinSuppPermutation {
            moved: self.moved.iter().map(|(&x, &y)| (y, x)).collect(),
        }
    }

    /// Cycles of length at least 2, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.moved.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut x = self.apply(start);
            while x != start {
                seen.insert(x);
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn parity(&self) -> Parity {
        Parity::from_count(self.cycles().iter().map(|c| c.len() - 1).sum())
    }

    pub fn in_alt(&self) -> bool {
        self.parity().is_even()
    }

    pub fn in_alt_b(&self, b: &BTreeSet<Point>) -> bool {
        self.in_alt() && self.moved.keys().all(|x| b.contains(x))
    }

    /// Agreement on every point of `points`.
    pub fn agrees_on<'a>(&self, other: &Self, points: impl IntoIterator<Item = &'a Point>) -> bool {
        points.into_iter().all(|&x| self.apply(x) == other.apply(x))
    }
}

impl fmt::Display for FinSuppPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            write!(f, "({})", c.iter().join(" "))?;
        }
        Ok(())
    }
}

/// An injection of the naturals that is the identity off a finite set `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSuppInjection {
    support_bound: BTreeSet<Point>,
    moved: BTreeMap<Point, Point>,
}

impl FinSuppInjection {
    pub fn new(support_bound: BTreeSet<Point>, moved: BTreeMap<Point, Point>) -> Result<Self> {
        if let Some(x) = moved.keys().find(|x| !support_bound.contains(x)) {
            return Err(Error::MalformedPermutation(format!("{x} is moved but lies outside B")));
        }
        let moved: BTreeMap<Point, Point> = moved.into_iter().filter(|(x, y)| x != y).collect();
        let inj = FinSuppInjection { support_bound, moved };
        if !inj.is_injective() {
            return Err(Error::MalformedPermutation("map is not injective".into()));
        }
        Ok(inj)
    }

    fn is_injective(&self) -> bool {
        // Only moved points and their images can collide.
        let points: BTreeSet<Point> = self.moved.keys().chain(self.moved.values()).copied().collect();
        points.iter().map(|&x| self.apply(x)).collect::<BTreeSet<_>>().len() == points.len()
    }

    pub fn support_bound(&self) -> &BTreeSet<Point> {
        &self.support_bound
    }

    pub fn moved(&self) -> &BTreeMap<Point, Point> {
        &self.moved
    }

    pub fn apply(&self, x: Point) -> Point {
        self.moved.get(&x).copied().unwrap_or(x)
    }

    /// `self ∘ other`, bounded by the union of both bounds.
    pub fn compose(&self, other: &Self) -> Self {
        let bound: BTreeSet<Point> = self.support_bound.union(&other.support_bound).copied().collect();
        let moved = bound
            .iter()
            .map(|&x| (x, self.apply(other.apply(x))))
            .filter(|(x, y)| x != y)
            .collect();
        FinSuppInjection {
            support_bound: bound,
            moved,
        }
    }
}

/// Membership in `Inj_B`: injective and the identity off `b`.
pub fn in_inj_b(f: &FinSuppInjection, b: &BTreeSet<Point>) -> bool {
    f.is_injective() && f.moved.keys().all(|x| b.contains(x))
}

/// A partition of the window `[0, window)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicCover {
    pub window: Point,
    pub blocks: Vec<BTreeSet<Point>>,
}

impl SymbolicCover {
    pub fn is_partition_of_window(&self) -> bool {
        let mut seen = BTreeSet::new();
        for b in &self.blocks {
            for &x in b {
                if x >= self.window || !seen.insert(x) {
                    return false;
                }
            }
        }
        seen.len() as Point == self.window
    }

    pub fn union_of(&self, family: &[usize]) -> BTreeSet<Point> {
        family.iter().flat_map(|&i| self.blocks[i].iter().copied()).collect()
    }
}

/// A cover of the window with one even interpolant of `(a b)` per family
/// of at most `k` blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltCoverWitness {
    pub k: usize,
    pub a: Point,
    pub b: Point,
    pub cover: SymbolicCover,
    pub interpolants: BTreeMap<Vec<usize>, FinSuppPermutation>,
}

/// Splits the window into `k+1` consecutive chunks of the ordering
/// `a, b, rest ascending` (the last chunk takes the remainder). Families
/// avoiding the first block get the identity; the others get `(a b)(c d)`
/// with `c < d` the two least points of the first block outside the family.
pub fn alt_cover_witness(k: usize, a: Point, b: Point, window: Point) -> Result<AltCoverWitness> {
    if a == b {
        return Err(Error::InvalidParameter("a and b must differ".into()));
    }
    if a >= window || b >= window {
        return Err(Error::InvalidParameter(format!("a and b must lie in [0, {window})")));
    }
    let needed = 2 * (k as Point + 1);
    if window < needed {
        return Err(Error::InvalidParameter(format!(
            "window {window} is too small for {} blocks of size at least 2 (need {needed})",
            k + 1
        )));
    }
    let order: Vec<Point> = [a, b]
        .into_iter()
        .chain((0..window).filter(|&x| x != a && x != b))
        .collect();
    let size = order.len() / (k + 1);
    let blocks: Vec<BTreeSet<Point>> = (0..=k)
        .map(|i| {
            let end = if i == k { order.len() } else { (i + 1) * size };
            order[i * size..end].iter().copied().collect()
        })
        .collect();
    let ab = FinSuppPermutation::transposition(a, b)?;
    let mut interpolants = BTreeMap::new();
    for s in 1..=k {
        for family in (0..=k).combinations(s) {
            let t = if family.contains(&0) {
                let outside = (0..=k).find(|i| !family.contains(i)).expect("k+1 blocks, at most k used");
                let mut cd = blocks[outside].iter().copied();
                let (c, d) = (cd.next().expect("size >= 2"), cd.next().expect("size >= 2"));
                ab.compose(&FinSuppPermutation::transposition(c, d)?)
            } else {
                FinSuppPermutation::identity()
            };
            interpolants.insert(family, t);
        }
    }
    Ok(AltCoverWitness {
        k,
        a,
        b,
        cover: SymbolicCover { window, blocks },
        interpolants,
    })
}

impl AltCoverWitness {
    /// Re-checks the shape of the cover and every interpolant pointwise on
    /// the union of its family.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let cover = &self.cover;
        if !cover.is_partition_of_window() {
            return Err("blocks do not partition the window".into());
        }
        if cover.blocks.len() != self.k + 1 {
            return Err(format!("expected {} blocks", self.k + 1));
        }
        if cover.blocks.iter().any(|b| b.len() < 2) {
            return Err("a block has fewer than 2 points".into());
        }
        if !cover.blocks[0].contains(&self.a) || !cover.blocks[0].contains(&self.b) || self.a == self.b {
            return Err("a and b must be distinct points of the first block".into());
        }
        let families: Vec<Vec<usize>> = (1..=self.k)
            .flat_map(|s| (0..=self.k).combinations(s))
            .collect();
        if families.len() != self.interpolants.len() {
            return Err(format!(
                "expected {} interpolants, found {}",
                families.len(),
                self.interpolants.len()
            ));
        }
        let ab = FinSuppPermutation::transposition(self.a, self.b).map_err(|e| e.to_string())?;
        for family in families {
            let t = self
                .interpolants
                .get(&family)
                .ok_or_else(|| format!("no interpolant for {family:?}"))?;
            if !t.in_alt() {
                return Err(format!("interpolant for {family:?} is odd"));
            }
            if t.moved().keys().any(|&x| x >= cover.window) {
                return Err(format!("interpolant for {family:?} leaves the window"));
            }
            if !t.agrees_on(&ab, &cover.union_of(&family)) {
                return Err(format!("interpolant for {family:?} disagrees with (a b)"));
            }
        }
        Ok(())
    }
}

/// An even permutation supported in the window that agrees with `f` on
/// `points`, when the window leaves two spare points.
pub fn alt_interpolant(
    f: &FinSuppPermutation,
    points: &BTreeSet<Point>,
    window: Point,
) -> Option<FinSuppPermutation> {
    if f.in_alt() {
        return Some(f.clone());
    }
    let mut spare = (0..window).filter(|x| !points.contains(x));
    let (c, d) = (spare.next()?, spare.next()?);
    Some(f.compose(&FinSuppPermutation::transposition(c, d).ok()?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltSeparation {
    pub in_alt: bool,
    /// Every `lambda`-subset of the window has an even interpolant.
    pub interpolable_on_window: bool,
    pub sets_checked: usize,
}

/// Shows at window scale that `f` can be interpolated by even permutations
/// on every small set although `f` itself may be odd.
pub fn alt_not_locally_interpolable(
    f: &FinSuppPermutation,
    lambda: usize,
    window: Point,
) -> Result<AltSeparation> {
    if f.moved().keys().any(|&x| x >= window) {
        return Err(Error::InvalidParameter("permutation moves points outside the window".into()));
    }
    if lambda as Point > window {
        return Err(Error::InvalidParameter("lambda exceeds the window".into()));
    }
    let mut sets_checked = 0;
    let mut interpolable = true;
    for s in (0..window).combinations(lambda) {
        sets_checked += 1;
        let set: BTreeSet<Point> = s.into_iter().collect();
        let ok = alt_interpolant(f, &set, window)
            .is_some_and(|t| t.in_alt() && t.agrees_on(f, &set));
        if !ok {
            interpolable = false;
            break;
        }
    }
    Ok(AltSeparation {
        in_alt: f.in_alt(),
        interpolable_on_window: interpolable,
        sets_checked,
    })
}

/// A map on the window `[0, values.len())`, the identity beyond it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowMap {
    values: Vec<Point>,
}

impl WindowMap {
    pub fn new(values: Vec<Point>) -> Self {
        WindowMap { values }
    }

    pub fn from_permutation(p: &FinSuppPermutation, window: Point) -> Self {
        WindowMap {
            values: (0..window).map(|x| p.apply(x)).collect(),
        }
    }

    pub fn window(&self) -> Point {
        self.values.len() as Point
    }

    pub fn values(&self) -> &[Point] {
        &self.values
    }

    pub fn apply(&self, x: Point) -> Point {
        self.values.get(x as usize).copied().unwrap_or(x)
    }

    /// The map as a permutation, if it is one.
    pub fn to_permutation(&self) -> Option<FinSuppPermutation> {
        let moved = (0..self.window())
            .map(|x| (x, self.apply(x)))
            .filter(|(x, y)| x != y)
            .collect();
        FinSuppPermutation::new(moved).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltBCheck {
    pub accepted: bool,
    /// The single member of `Alt_B` that agrees with `f` on `B`.
    pub interpolant: Option<FinSuppPermutation>,
    /// First probe point `a` for which `B ∪ {a}` has no interpolant.
    pub rejected_at: Option<Point>,
}

/// Even permutations of `b`, in lexicographic order of their images.
pub fn alt_b_elements(b: &BTreeSet<Point>) -> Vec<FinSuppPermutation> {
    let pts: Vec<Point> = b.iter().copied().collect();
    pts.iter()
        .copied()
        .permutations(pts.len())
        .filter_map(|img| {
            let moved = pts
                .iter()
                .copied()
                .zip(img)
                .filter(|(x, y)| x != y)
                .collect();
            let p = FinSuppPermutation { moved };
            p.in_alt().then_some(p)
        })
        .collect()
}

/// Accepts `f` iff for every probe `a` in the window outside `b` some member
/// of `Alt_B` agrees with `f` on `b ∪ {a}`. Such a member fixes `a`, so an
/// accepted `f` fixes every probe and is one element of `Alt_B` on `b`.
pub fn alt_b_locally_closed_check(b: &BTreeSet<Point>, f: &WindowMap) -> Result<AltBCheck> {
    let window = f.window();
    if b.iter().any(|&x| x >= window) {
        return Err(Error::InvalidParameter("B must lie inside the window".into()));
    }
    let probes: Vec<Point> = (0..window).filter(|x| !b.contains(x)).collect();
    if probes.is_empty() {
        return Err(Error::InvalidParameter("no probe points outside B in the window".into()));
    }
    let candidates = alt_b_elements(b);
    let on_b = |p: &FinSuppPermutation| b.iter().all(|&x| p.apply(x) == f.apply(x));
    for &a in &probes {
        let found = candidates.iter().any(|p| on_b(p) && p.apply(a) == f.apply(a));
        if !found {
            return Ok(AltBCheck {
                accepted: false,
                interpolant: None,
                rejected_at: Some(a),
            });
        }
    }
    Ok(AltBCheck {
        accepted: true,
        interpolant: candidates.into_iter().find(|p| on_b(p)),
        rejected_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[Point]) -> BTreeSet<Point> {
        xs.iter().copied().collect()
    }

    #[test]
    fn parity_examples() {
        assert_eq!(FinSuppPermutation::identity().parity(), Parity::Even);
        let t = FinSuppPermutation::transposition(0, 1).unwrap();
        assert_eq!(t.parity(), Parity::Odd);
        let tt = t.compose(&FinSuppPermutation::transposition(2, 3).unwrap());
        assert!(tt.in_alt());
        assert!(FinSuppPermutation::cycle(&[0, 1, 2]).unwrap().in_alt());
        assert_eq!(tt.to_string(), "(0 1)(2 3)");
        assert_eq!(t.compose(&t), FinSuppPermutation::identity());
    }

    #[test]
    fn malformed_maps() {
        assert!(FinSuppPermutation::new([(0, 0)].into()).is_err());
        assert!(FinSuppPermutation::new([(0, 1)].into()).is_err());
        assert!(FinSuppPermutation::new([(0, 2), (1, 2), (2, 0)].into()).is_err());
        assert!(FinSuppPermutation::new([(0, 1), (1, 0)].into()).is_ok());
    }

    #[test]
    fn alt_b_membership() {
        let b = set(&[0, 1, 2]);
        assert!(!FinSuppPermutation::transposition(0, 1).unwrap().in_alt_b(&b));
        assert!(!FinSuppPermutation::cycle(&[0, 1, 2]).unwrap().in_alt_b(&set(&[0, 1])));
        assert!(FinSuppPermutation::cycle(&[0, 1, 2]).unwrap().in_alt_b(&b));
    }

    #[test]
    fn injections() {
        let b = set(&[0, 1]);
        assert!(FinSuppInjection::new(b.clone(), [(0, 5)].into()).is_err());
        assert!(FinSuppInjection::new(b.clone(), [(2, 0)].into()).is_err());
        let f = FinSuppInjection::new(b.clone(), [(0, 1), (1, 0)].into()).unwrap();
        let g = FinSuppInjection::new(set(&[1, 2]), [(1, 2), (2, 1)].into()).unwrap();
        let h = f.compose(&g);
        assert!(in_inj_b(&h, &set(&[0, 1, 2])));
        assert!(!in_inj_b(&h, &b));
    }

    #[test]
    fn cover_witness_examples() {
        let w = alt_cover_witness(2, 0, 1, 6).unwrap();
        assert_eq!(w.cover.blocks, vec![set(&[0, 1]), set(&[2, 3]), set(&[4, 5])]);
        let t01_45 = FinSuppPermutation::transposition(0, 1)
            .unwrap()
            .compose(&FinSuppPermutation::transposition(4, 5).unwrap());
        assert_eq!(w.interpolants[&vec![0, 1]], t01_45);
        assert_eq!(w.interpolants[&vec![1, 2]], FinSuppPermutation::identity());
        assert!(w.verify().is_ok());

        let w1 = alt_cover_witness(1, 0, 1, 4).unwrap();
        assert_eq!(w1.cover.blocks, vec![set(&[0, 1]), set(&[2, 3])]);
        assert_eq!(w1.interpolants.len(), 2);
        assert!(w1.verify().is_ok());

        assert!(alt_cover_witness(2, 0, 1, 5).is_err());
        assert!(alt_cover_witness(2, 0, 0, 6).is_err());
    }

    #[test]
    fn uneven_windows_and_moved_points() {
        for k in 1..=4 {
            for window in 2 * (k as Point + 1)..14 {
                let w = alt_cover_witness(k, 5.min(window - 1), 1, window).unwrap();
                assert!(w.verify().is_ok(), "k={k} window={window}");
            }
        }
    }

    #[test]
    fn tampered_witness_fails() {
        let mut w = alt_cover_witness(2, 0, 1, 6).unwrap();
        w.interpolants
            .insert(vec![0], FinSuppPermutation::transposition(0, 1).unwrap());
        assert!(w.verify().is_err());
    }

    #[test]
    fn separation_matches_brute_force() {
        let window = 8;
        let alt: Vec<FinSuppPermutation> = (0..window)
            .permutations(window as usize)
            .filter_map(|img| {
                let p = FinSuppPermutation {
                    moved: (0..window).zip(img).filter(|(x, y)| x != y).collect(),
                };
                p.in_alt().then_some(p)
            })
            .collect();
        assert_eq!(alt.len(), 20160);
        let t = FinSuppPermutation::transposition(0, 1).unwrap();
        let r = alt_not_locally_interpolable(&t, 1, window).unwrap();
        assert!(!r.in_alt && r.interpolable_on_window);
        for x in 0..window {
            assert!(alt.iter().any(|p| p.apply(x) == t.apply(x)));
        }
        assert!(alt_not_locally_interpolable(&FinSuppPermutation::identity(), 1, window).unwrap().in_alt);
        let c = FinSuppPermutation::cycle(&[0, 1, 2]).unwrap();
        let r = alt_not_locally_interpolable(&c, 3, window).unwrap();
        assert!(r.in_alt && r.interpolable_on_window);
        // with no spare points an odd map cannot be matched everywhere
        let r = alt_not_locally_interpolable(&t, 8, window).unwrap();
        assert!(!r.interpolable_on_window);
        assert!(!alt.iter().any(|p| p.agrees_on(&t, &(0..window).collect::<Vec<_>>())));
    }

    #[test]
    fn alt_b_check_examples() {
        let b = set(&[0, 1, 2]);
        let window = 6;
        let c = FinSuppPermutation::cycle(&[0, 1, 2]).unwrap();
        let r = alt_b_locally_closed_check(&b, &WindowMap::from_permutation(&c, window)).unwrap();
        assert!(r.accepted);
        assert_eq!(r.interpolant, Some(c));
        let outside = FinSuppPermutation::transposition(0, 4).unwrap();
        let r = alt_b_locally_closed_check(&b, &WindowMap::from_permutation(&outside, window)).unwrap();
        assert_eq!(r.rejected_at, Some(3));
        let id = WindowMap::from_permutation(&FinSuppPermutation::identity(), window);
        assert!(alt_b_locally_closed_check(&b, &id).unwrap().accepted);
        let odd = FinSuppPermutation::transposition(0, 1).unwrap();
        assert!(!alt_b_locally_closed_check(&b, &WindowMap::from_permutation(&odd, window)).unwrap().accepted);
        assert_eq!(alt_b_elements(&set(&[0, 1, 2, 3])).len(), 12);
    }
}
