//! Recovering a linear map from local agreement with ring elements.
//!
//! Input: a linear map `f` on `GF(q)^dim` and maps `r_0, .., r_{m-1}` such
//! that each `r_i` agrees with `f` on a subspace `B_i`, the `B_i` covering
//! the space. The pipeline enlarges each `B_i` to `ker(f - r_i)`, shifts
//! everything by `r_0`, builds `t = Σ s_i r_i` with the `s_i r_i` having
//! independent images, factors `f = u t`, and finally interpolates `u` on
//! the image of `t` by an element of the given span.
//!
//! Independent images need `Σ dim(image r_i) <= dim`; instances without that
//! room are rejected.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FElem, FiniteField, Matrix, Subspace};
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceCoverInstance {
    pub field: FiniteField,
    pub dim: usize,
    pub f: Matrix,
    pub interpolants: Vec<Matrix>,
    pub blocks: Vec<Subspace>,
}

impl SubspaceCoverInstance {
    pub fn new(
        field: FiniteField,
        f: Matrix,
        interpolants: Vec<Matrix>,
        blocks: Vec<Subspace>,
    ) -> Result<Self> {
        let dim = f.rows();
        let square = |m: &Matrix| m.rows() == dim && m.cols() == dim;
        if !square(&f) || !interpolants.iter().all(square) {
            return Err(Error::LinearAlgebra(format!("all maps must be {dim}x{dim}")));
        }
        if interpolants.is_empty() || interpolants.len() != blocks.len() {
            return Err(Error::LinearAlgebra(
                "need one block per interpolant and at least one of each".into(),
            ));
        }
        if blocks.iter().any(|b| b.ambient() != dim) {
            return Err(Error::LinearAlgebra("block in a space of the wrong dimension".into()));
        }
        Ok(SubspaceCoverInstance { field, dim, f, interpolants, blocks })
    }

    /// A vector in no block, if any.
    pub fn uncovered_vector(&self, limits: &Limits) -> Result<Option<Vec<FElem>>> {
        Ok(self
            .field
            .vectors(self.dim, limits.vectors)?
            .into_iter()
            .find(|v| !self.blocks.iter().any(|b| b.contains(&self.field, v))))
    }

    /// First `(i, v)` with `v` a basis vector of `B_i` where `f` and `r_i`
    /// differ.
    pub fn disagreement(&self) -> Option<(usize, Vec<FElem>)> {
        let fl = &self.field;
        self.blocks.iter().enumerate().find_map(|(i, b)| {
            b.basis()
                .iter()
                .find(|v| self.f.apply(fl, v) != self.interpolants[i].apply(fl, v))
                .map(|v| (i, v.clone()))
        })
    }
}

/// Replaces each block by `ker(f - r_i)` and checks that the result covers.
pub fn enlarge_to_kernels(inst: &SubspaceCoverInstance, limits: &Limits) -> Result<SubspaceCoverInstance> {
    let fl = &inst.field;
    if let Some((i, v)) = inst.disagreement() {
        return Err(Error::LinearAlgebra(format!(
            "f and r_{i} differ on block {i} at vector {v:?}"
        )));
    }
    let blocks = inst
        .interpolants
        .iter()
        .map(|r| Subspace::span(fl, inst.dim, &inst.f.sub(fl, r).kernel(fl)))
        .collect::<Result<Vec<_>>>()?;
    let out = SubspaceCoverInstance { blocks, ..inst.clone() };
    if let Some(v) = out.uncovered_vector(limits)? {
        return Err(Error::InvalidCover(format!("vector {v:?} is matched by no interpolant")));
    }
    Ok(out)
}

/// Subtracts `r_0` from `f` and every `r_i`; returns the shifted instance
/// and `r_0`.
pub fn normalize(inst: &SubspaceCoverInstance) -> (SubspaceCoverInstance, Matrix) {
    let fl = &inst.field;
    let r0 = inst.interpolants[0].clone();
    let shifted = SubspaceCoverInstance {
        f: inst.f.sub(fl, &r0),
        interpolants: inst.interpolants.iter().map(|r| r.sub(fl, &r0)).collect(),
        ..inst.clone()
    };
    (shifted, r0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TConstruction {
    pub t: Matrix,
    pub s: Vec<Matrix>,
}

/// Default `s_i`: a basis of `image(r_i)` goes to consecutive standard basis
/// vectors, disjoint across `i`, and a complement goes to zero.
pub fn standard_isomorphisms(inst: &SubspaceCoverInstance) -> Result<Vec<Matrix>> {
    let fl = &inst.field;
    let n = inst.dim;
    let ranks: Vec<usize> = inst.interpolants.iter().map(|r| r.rank(fl)).collect();
    let total: usize = ranks.iter().sum();
    if total > n {
        return Err(Error::LinearAlgebra(format!(
            "images of total dimension {total} do not fit independently into dimension {n}"
        )));
    }
    let mut offset = 0;
    let mut out = Vec::with_capacity(ranks.len());
    for r in &inst.interpolants {
        let image: Vec<Vec<FElem>> = r.image_columns(fl).into_iter().map(|c| r.column(c)).collect();
        let k = image.len();
        let full = Subspace::span(fl, n, &image)?;
        // use the image columns themselves, then standard vectors
        let mut basis = image.clone();
        for v in full.extend_to_full_basis(fl).into_iter().skip(full.dim()) {
            basis.push(v);
        }
        let w = Matrix::from_columns(n, &basis);
        let mut targets = Matrix::zeros(n, n);
        for j in 0..k {
            targets.set(offset + j, j, 1);
        }
        let w_inv = w.inverse(fl).ok_or_else(|| Error::LinearAlgebra("basis extension failed".into()))?;
        out.push(targets.mul(fl, &w_inv));
        offset += k;
    }
    Ok(out)
}

/// `t = Σ s_i r_i` for a normalized instance. Checks that each `s_i` is
/// injective on `image(r_i)`, that the images `s_i r_i` are independent,
/// and that `ker(t) ⊆ ker(f)`.
pub fn build_t(inst: &SubspaceCoverInstance, s: &[Matrix]) -> Result<TConstruction> {
    let fl = &inst.field;
    let n = inst.dim;
    if s.len() != inst.interpolants.len() || s.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::LinearAlgebra("one square s_i per interpolant required".into()));
    }
    let total: usize = inst.interpolants.iter().map(|r| r.rank(fl)).sum();
    if total > n {
        return Err(Error::LinearAlgebra(format!(
            "images of total dimension {total} do not fit independently into dimension {n}"
        )));
    }
    let products: Vec<Matrix> = s.iter().zip(&inst.interpolants).map(|(si, ri)| si.mul(fl, ri)).collect();
    for (i, (p, r)) in products.iter().zip(&inst.interpolants).enumerate() {
        if p.rank(fl) != r.rank(fl) {
            return Err(Error::LinearAlgebra(format!("s_{i} is not injective on the image of r_{i}")));
        }
    }
    let columns: Vec<Vec<FElem>> = products
        .iter()
        .flat_map(|p| (0..n).map(move |c| p.column(c)))
        .collect();
    if Matrix::from_columns(n, &columns).rank(fl) != total {
        return Err(Error::LinearAlgebra("the images s_i r_i are not independent".into()));
    }
    let t = products.iter().fold(Matrix::zeros(n, n), |acc, p| acc.add(fl, p));
    if let Some(v) = t.kernel(fl).into_iter().find(|v| inst.f.apply(fl, v).iter().any(|&x| x != 0)) {
        return Err(Error::LinearAlgebra(format!(
            "kernel containment fails: t kills {v:?} but f does not"
        )));
    }
    Ok(TConstruction { t, s: s.to_vec() })
}

/// `u` with `u t = f`, zero off a basis of `image(t)`.
pub fn factor_through(field: &FiniteField, t: &Matrix, f: &Matrix) -> Result<Matrix> {
    let n = t.rows();
    if let Some(v) = t.kernel(field).into_iter().find(|v| f.apply(field, v).iter().any(|&x| x != 0)) {
        return Err(Error::LinearAlgebra(format!(
            "ker(t) is not inside ker(f): witness {v:?}"
        )));
    }
    let cols = t.image_columns(field);
    let image: Vec<Vec<FElem>> = cols.iter().map(|&c| t.column(c)).collect();
    let sub = Subspace::span(field, n, &image)?;
    let mut basis = image.clone();
    basis.extend(sub.extend_to_full_basis(field).into_iter().skip(sub.dim()));
    let mut values: Vec<Vec<FElem>> = cols.iter().map(|&c| f.column(c)).collect();
    values.resize(n, vec![0; n]);
    let x_inv = Matrix::from_columns(n, &basis)
        .inverse(field)
        .ok_or_else(|| Error::LinearAlgebra("basis extension failed".into()))?;
    let u = Matrix::from_columns(n, &values).mul(field, &x_inv);
    if &u.mul(field, t) != f {
        return Err(Error::LinearAlgebra("u t differs from f".into()));
    }
    Ok(u)
}

/// Coefficients `c` with `Σ c_j M_j v = target v` for every `v` in
/// `points`, or `None`.
pub fn density_interpolate(
    field: &FiniteField,
    target: &Matrix,
    points: &[Vec<FElem>],
    span: &[Matrix],
) -> Option<Vec<FElem>> {
    let n = target.rows();
    let mut system = Matrix::zeros(points.len() * n, span.len());
    let mut rhs = Vec::with_capacity(points.len() * n);
    for (pi, v) in points.iter().enumerate() {
        let images: Vec<Vec<FElem>> = span.iter().map(|m| m.apply(field, v)).collect();
        for r in 0..n {
            for (j, img) in images.iter().enumerate() {
                system.set(pi * n + r, j, img[r]);
            }
        }
        rhs.extend(target.apply(field, v));
    }
    system.solve(field, &rhs)
}

/// `Σ c_j M_j`.
pub fn combine(field: &FiniteField, dim: usize, coefficients: &[FElem], span: &[Matrix]) -> Matrix {
    coefficients
        .iter()
        .zip(span)
        .fold(Matrix::zeros(dim, dim), |acc, (&c, m)| acc.add(field, &m.scale(field, c)))
}

/// The elementary matrices `E_ij`, spanning all linear maps.
pub fn full_matrix_span(dim: usize) -> Vec<Matrix> {
    (0..dim * dim)
        .map(|k| {
            let mut m = Matrix::zeros(dim, dim);
            m.set(k / dim, k % dim, 1);
            m
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovery {
    pub enlarged: SubspaceCoverInstance,
    pub r0: Matrix,
    pub t: TConstruction,
    pub u: Matrix,
    /// Coefficients of the span element interpolating `u` on `image(t)`.
    pub coefficients: Vec<FElem>,
    /// `u' t + r_0`, equal to `f`.
    pub result: Matrix,
    /// Codimension of `⋂ B_i`. Always finite here, so the subgroup of finite
    /// index that the infinite argument needs is available for free.
    pub intersection_codim: usize,
}

/// Runs the whole pipeline. Stage failures are tagged with the stage name.
pub fn recover(inst: &SubspaceCoverInstance, span: &[Matrix], limits: &Limits) -> Result<Recovery> {
    let fl = &inst.field;
    let n = inst.dim;
    if span.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::LinearAlgebra("span elements must be square of the instance size".into()));
    }
    let enlarged = enlarge_to_kernels(inst, limits).map_err(|e| e.at_stage("enlarge_to_kernels"))?;
    let (normal, r0) = normalize(&enlarged);
    let s = standard_isomorphisms(&normal).map_err(|e| e.at_stage("build_t"))?;
    let t = build_t(&normal, &s).map_err(|e| e.at_stage("build_t"))?;
    let u = factor_through(fl, &t.t, &normal.f).map_err(|e| e.at_stage("factor_through"))?;
    let points: Vec<Vec<FElem>> = t.t.image_columns(fl).into_iter().map(|c| t.t.column(c)).collect();
    let coefficients = density_interpolate(fl, &u, &points, span).ok_or_else(|| {
        Error::LinearAlgebra("no element of the span agrees with u on the image of t".into())
            .at_stage("density_interpolate")
    })?;
    let u_span = combine(fl, n, &coefficients, span);
    let result = u_span.mul(fl, &t.t).add(fl, &r0);
    if result != inst.f {
        return Err(Error::LinearAlgebra("u t + r_0 differs from f".into()).at_stage("verify"));
    }
    let intersection = enlarged
        .blocks
        .iter()
        .skip(1)
        .fold(enlarged.blocks[0].clone(), |acc, b| acc.intersect(fl, b));
    Ok(Recovery {
        intersection_codim: n - intersection.dim(),
        enlarged,
        r0,
        t,
        u,
        coefficients,
        result,
    })
}

fn random_matrix<R: Rng + ?Sized>(field: &FiniteField, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_range(0..field.order()) as FElem);
        }
    }
    m
}

fn random_invertible<R: Rng + ?Sized>(field: &FiniteField, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.rank(field) == n {
            return m;
        }
    }
}

/// A random valid instance with `Σ rank(r_i - r_0) <= dim`.
///
/// With probability one half it is a single block (`r_0 = f`). Otherwise,
/// in coordinates given by a random change of basis `P`, the `q + 1`
/// hyperplanes through `W = {x_0 = x_1 = 0}` are the blocks, and
/// `f = r_0 + w φ` where `φ` cuts out the first hyperplane. Each other
/// `r_i - r_0 = w (φ - ψ_i)` with `ψ_i` cutting out the `i`-th hyperplane,
/// so it has rank at most 1 and agrees with `f - r_0` there. Needs
/// `dim >= max(2, q)` for the multi-block shape.
pub fn random_instance<R: Rng + ?Sized>(
    field: &FiniteField,
    dim: usize,
    rng: &mut R,
) -> Result<SubspaceCoverInstance> {
    let q = field.order();
    let r0 = random_matrix(field, dim, dim, rng);
    if dim < 2.max(q) || rng.gen_bool(0.5) {
        let f = r0.clone();
        return SubspaceCoverInstance::new(field.clone(), f, vec![r0], vec![Subspace::whole(dim)]);
    }
    // Functionals on new coordinates y = P x; hyperplanes are the kernels
    // of y_0 + c y_1 (c in GF(q)) and of y_1.
    let p = random_invertible(field, dim, rng);
    let functional = |a: FElem, b: FElem| -> Vec<FElem> {
        (0..dim)
            .map(|j| field.add(field.mul(a, p.get(0, j)), field.mul(b, p.get(1, j))))
            .collect()
    };
    let mut lines: Vec<(FElem, FElem)> = (0..q as FElem).map(|c| (1, c)).collect();
    lines.push((0, 1));
    lines.shuffle(rng);
    let w: Vec<FElem> = (0..dim).map(|_| rng.gen_range(0..q) as FElem).collect();
    let outer = |phi: &[FElem]| -> Matrix {
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, field.mul(w[i], phi[j]));
            }
        }
        m
    };
    let phi = functional(lines[0].0, lines[0].1);
    let f_shift = outer(&phi);
    let f = r0.add(field, &f_shift);
    let mut interpolants = Vec::with_capacity(lines.len());
    let mut blocks = Vec::with_capacity(lines.len());
    for (i, &(a, b)) in lines.iter().enumerate() {
        let psi = functional(a, b);
        let r = if i == 0 {
            r0.clone()
        } else {
            let diff: Vec<FElem> = phi.iter().zip(&psi).map(|(&x, &y)| field.sub(x, y)).collect();
            r0.add(field, &outer(&diff))
        };
        interpolants.push(r);
        let kernel = Matrix::from_rows(field, &[psi.iter().map(|&x| x as usize).collect()])?.kernel(field);
        blocks.push(Subspace::span(field, dim, &kernel)?);
    }
    SubspaceCoverInstance::new(field.clone(), f, interpolants, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: usize) -> FiniteField {
        FiniteField::new(q).unwrap()
    }

    fn m(field: &FiniteField, rows: &[&[usize]]) -> Matrix {
        Matrix::from_rows(field, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn single_block_recovers_r0() {
        let fl = gf(2);
        let f = m(&fl, &[&[1, 1], &[0, 1]]);
        let inst = SubspaceCoverInstance::new(fl.clone(), f.clone(), vec![f.clone()], vec![Subspace::whole(2)]).unwrap();
        let r = recover(&inst, &full_matrix_span(2), &Limits::default()).unwrap();
        assert_eq!(r.result, f);
        assert!(r.t.t.is_zero());
    }

    #[test]
    fn uncovered_vector_is_reported() {
        let fl = gf(2);
        let f = Matrix::identity(2);
        let zero = Matrix::zeros(2, 2);
        let line = Subspace::span(&fl, 2, &[vec![0, 0]]).unwrap();
        let inst = SubspaceCoverInstance::new(fl, f, vec![zero], vec![line]).unwrap();
        let err = enlarge_to_kernels(&inst, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidCover(ref s) if s.contains("[0, 1]")), "{err}");
        assert!(recover(&inst, &full_matrix_span(2), &Limits::default()).is_err());
    }

    #[test]
    fn plane_and_line_over_gf2() {
        let fl = gf(2);
        // f is the identity off the plane x2 = 0 ... built as r1 on a line
        let r0 = Matrix::zeros(3, 3);
        let f = m(&fl, &[&[0, 0, 1], &[0, 0, 0], &[0, 0, 1]]);
        let r1 = f.clone();
        let plane = Subspace::span(&fl, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let line = Subspace::span(&fl, 3, &[vec![0, 0, 1]]).unwrap();
        let inst = SubspaceCoverInstance::new(fl.clone(), f.clone(), vec![r0, r1], vec![plane.clone(), line.clone()]).unwrap();
        let e = enlarge_to_kernels(&inst, &Limits::default()).unwrap();
        assert!(plane.is_subspace_of(&fl, &e.blocks[0]));
        assert!(line.is_subspace_of(&fl, &e.blocks[1]));
        assert_eq!(recover(&inst, &full_matrix_span(3), &Limits::default()).unwrap().result, f);
    }

    #[test]
    fn build_t_rejects_dependent_images() {
        let fl = gf(2);
        let r1 = m(&fl, &[&[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        let r2 = m(&fl, &[&[0, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        let f = r1.add(&fl, &r2);
        let blocks = vec![Subspace::whole(4); 3];
        let inst = SubspaceCoverInstance::new(fl.clone(), f, vec![Matrix::zeros(4, 4), r1, r2], blocks).unwrap();
        let s = standard_isomorphisms(&inst).unwrap();
        let t = build_t(&inst, &s).unwrap();
        let k = t.t.kernel(&fl);
        assert!(k.iter().all(|v| inst.f.apply(&fl, v).iter().all(|&x| x == 0)));
        // send both images onto the same line
        let same = vec![Matrix::identity(4), Matrix::identity(4), m(&fl, &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])];
        assert!(build_t(&inst, &same).is_err());
    }

    #[test]
    fn factor_examples() {
        let fl = gf(3);
        let f = m(&fl, &[&[1, 2], &[0, 1]]);
        assert_eq!(factor_through(&fl, &Matrix::identity(2), &f).unwrap(), f);
        let u = factor_through(&fl, &f, &f).unwrap();
        assert_eq!(u.mul(&fl, &f), f);
        let singular = m(&fl, &[&[1, 0], &[0, 0]]);
        assert!(factor_through(&fl, &singular, &Matrix::identity(2)).is_err());
    }

    #[test]
    fn density_examples() {
        let fl = gf(2);
        let id = Matrix::identity(2);
        let zero = Matrix::zeros(2, 2);
        assert!(density_interpolate(&fl, &zero, &[vec![0, 0]], std::slice::from_ref(&id)).is_some());
        // the zero combination is in the span and kills e1
        assert_eq!(density_interpolate(&fl, &zero, &[vec![1, 0]], std::slice::from_ref(&id)), Some(vec![0]));
        assert!(density_interpolate(&fl, &id, &[vec![1, 0]], std::slice::from_ref(&zero)).is_none());
        let swap = m(&fl, &[&[0, 1], &[1, 0]]);
        assert!(density_interpolate(&fl, &swap, &[vec![1, 0]], &[id]).is_none());
        let t = m(&fl, &[&[1, 1], &[0, 1]]);
        let c = density_interpolate(&fl, &t, &[vec![1, 0], vec![0, 1]], &full_matrix_span(2)).unwrap();
        assert_eq!(combine(&fl, 2, &c, &full_matrix_span(2)), t);
    }

    #[test]
    fn random_instances_recover() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3, 4, 5] {
            let fl = gf(q);
            for dim in 1..=5 {
                for _ in 0..5 {
                    let inst = random_instance(&fl, dim, &mut rng).unwrap();
                    assert!(inst.disagreement().is_none());
                    assert!(inst.uncovered_vector(&Limits::default()).unwrap().is_none());
                    let r = recover(&inst, &full_matrix_span(dim), &Limits::default()).unwrap();
                    assert_eq!(r.result, inst.f);
                }
            }
        }
    }
}
