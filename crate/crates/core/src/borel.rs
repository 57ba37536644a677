//! Complete flags of C^n, generic configurations, the Borel cocycle on
//! quadruples of flags, and the Veronese embedding of the Riemann sphere into
//! the flag variety.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::volume::ideal_tet_volume;
use crate::{BoundaryPoint, Isometry};

/// Singular values at or below this count as zero in rank computations.
pub const TOL_RANK: f64 = 1e-9;

/// Frame orthonormality tolerance.
pub const TOL_FRAME: f64 = 1e-12;

/// A multi-index `(j0, j1, j2, j3)` with entries summing to `n - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub [usize; 4]);

/// All multi-indices with `j_i <= n - 2` and `sum j_i = n - 2`, listed in
/// decreasing lexicographic order. There are `n (n - 1) (n + 1) / 6`.
pub fn multi_index_set(n: usize) -> Result<Vec<MultiIndex>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("flag dimension must be at least 2, got {n}")));
    }
    let s = n - 2;
    let mut out = Vec::new();
    for j0 in (0..=s).rev() {
        for j1 in (0..=s - j0).rev() {
            for j2 in (0..=s - j0 - j1).rev() {
                out.push(MultiIndex([j0, j1, j2, s - j0 - j1 - j2]));
            }
        }
    }
    Ok(out)
}

/// A complete flag stored as an ordered orthonormal frame; the `j`-th
/// subspace is spanned by the first `j` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    frame: DMatrix<Complex64>,
}

impl Flag {
    pub fn dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn frame(&self) -> &DMatrix<Complex64> {
        &self.frame
    }

    /// The flag `<e1> < <e1, e2> < ...`.
    pub fn standard(n: usize) -> Self {
        Self { frame: DMatrix::identity(n, n) }
    }

    /// `g . F`, re-orthonormalized.
    pub fn transform(&self, g: &IsometryN) -> Result<Flag> {
        gram_schmidt_flag(&(&g.matrix * &self.frame))
    }

    /// Subspace-wise comparison: every frame vector lies in the matching
    /// subspace of `other` up to `tol`.
    pub fn approx_eq(&self, other: &Flag, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        (1..=self.dim()).all(|j| {
            let v = self.frame.column(j - 1);
            let basis = other.frame.columns(0, j);
            let coeffs = basis.adjoint() * v;
            let residual = v - basis * coeffs;
            residual.norm() < tol
        })
    }

    /// Largest deviation of the frame's Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.frame.adjoint() * &self.frame;
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        (g - id).iter().fold(0.0, |m, e| m.max(e.norm()))
    }
}

/// Gram-Schmidt on the columns of `basis`, with one re-orthogonalization pass.
pub fn gram_schmidt_flag(basis: &DMatrix<Complex64>) -> Result<Flag> {
    let n = basis.nrows();
    if basis.ncols() != n {
        return Err(Error::InvalidInput(format!("need {n} basis vectors, got {}", basis.ncols())));
    }
    let mut frame = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        let original = basis.column(j).into_owned();
        let scale = original.norm();
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::DependentBasis);
        }
        let mut v = original.clone();
        for _ in 0..2 {
            for i in 0..j {
                let q = frame.column(i);
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let r = v.norm();
        if r <= 1e-12 * scale {
            return Err(Error::DependentBasis);
        }
        frame.set_column(j, &(v / Complex64::new(r, 0.0)));
    }
    Ok(Flag { frame })
}

/// An element of PSL(n,C): determinant-one matrix up to n-th roots of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryN {
    matrix: DMatrix<Complex64>,
}

impl IsometryN {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        let det = matrix.determinant();
        if det.norm() < 1e-300 || !det.norm().is_finite() {
            return Err(Error::Singular(det.norm()));
        }
        let root = det.powf(1.0 / n as f64);
        Ok(Self { matrix: matrix / root })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn compose(&self, other: &IsometryN) -> IsometryN {
        IsometryN { matrix: &self.matrix * &other.matrix }
    }

    /// Distance to `other` up to multiplication by n-th roots of unity.
    pub fn distance(&self, other: &IsometryN) -> f64 {
        let n = self.matrix.nrows();
        (0..n)
            .map(|k| {
                let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
                (&self.matrix - &other.matrix * w).iter().fold(0.0, |m: f64, e| m.max(e.norm()))
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Outcome of the genericity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genericity {
    pub generic: bool,
    /// First `(j0, j1, j2, j3)` whose span has deficient rank.
    pub witness: Option<[usize; 4]>,
}

fn numerical_rank(m: &DMatrix<Complex64>) -> usize {
    if m.ncols() == 0 {
        return 0;
    }
    m.clone().svd(false, false).singular_values.iter().filter(|&&s| s > TOL_RANK).count()
}

fn leading_columns(flags: &[&Flag; 4], j: [usize; 4]) -> DMatrix<Complex64> {
    let n = flags[0].dim();
    let k: usize = j.iter().sum();
    let mut m = DMatrix::<Complex64>::zeros(n, k);
    let mut col = 0;
    for (f, &ji) in flags.iter().zip(j.iter()) {
        for c in 0..ji {
            m.set_column(col, &f.frame.column(c));
            col += 1;
        }
    }
    m
}

/// Whether `(F0, .., F3)` is a generic configuration: every span of initial
/// subspaces `<F0^{j0}, .., F3^{j3}>` has dimension `min(n, j0 + .. + j3)`.
pub fn is_generic(flags: [&Flag; 4]) -> Result<Genericity> {
    let n = flags[0].dim();
    if flags.iter().any(|f| f.dim() != n) {
        return Err(Error::InvalidInput("flags of different dimensions".into()));
    }
    for j0 in 0..n {
        for j1 in 0..n {
            for j2 in 0..n {
                for j3 in 0..n {
                    let j = [j0, j1, j2, j3];
                    let k: usize = j.iter().sum();
                    if k == 0 {
                        continue;
                    }
                    let rank = numerical_rank(&leading_columns(&flags, j));
                    if rank != n.min(k) {
                        return Ok(Genericity { generic: false, witness: Some(j) });
                    }
                }
            }
        }
    }
    Ok(Genericity { generic: true, witness: None })
}

/// Orthonormal basis of the orthogonal complement of the column span of the
/// orthonormal matrix `q`, chosen greedily from the standard basis.
fn orthogonal_complement(q: &DMatrix<Complex64>, n: usize) -> DMatrix<Complex64> {
    let want = n - q.ncols();
    let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(want);
    for _ in 0..want {
        let mut best: Option<DVector<Complex64>> = None;
        let mut best_norm = -1.0;
        for k in 0..n {
            let mut v = DVector::<Complex64>::zeros(n);
            v[k] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                if q.ncols() > 0 {
                    let c = q.adjoint() * &v;
                    v -= q * c;
                }
                for b in &basis {
                    let p = b.dotc(&v);
                    v -= b * p;
                }
            }
            let r = v.norm();
            if r > best_norm {
                best_norm = r;
                best = Some(v);
            }
        }
        let v = best.expect("n > 0");
        basis.push(&v / Complex64::new(best_norm, 0.0));
    }
    DMatrix::from_columns(&basis)
}

fn orthonormalize_columns(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = m.nrows();
    let mut cols: Vec<DVector<Complex64>> = Vec::with_capacity(m.ncols());
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        let scale = v.norm();
        for _ in 0..2 {
            for q in &cols {
                let p = q.dotc(&v);
                v -= q * p;
            }
        }
        let r = v.norm();
        if r <= 1e-12 * scale {
            return Err(Error::DependentBasis);
        }
        cols.push(v / Complex64::new(r, 0.0));
    }
    if cols.is_empty() {
        return Ok(DMatrix::zeros(n, 0));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// The four points of CP^1 obtained for the multi-index `j`: the next frame
/// vectors projected to the complement of `V_J` and projectivized.
pub fn projected_quadruple(flags: [&Flag; 4], j: MultiIndex) -> Result<[BoundaryPoint; 4]> {
    let n = flags[0].dim();
    let v = orthonormalize_columns(&leading_columns(&flags, j.0))?;
    let perp = orthogonal_complement(&v, n);
    let mut out = [BoundaryPoint::infinity(); 4];
    for (i, f) in flags.iter().enumerate() {
        let next = f.frame.column(j.0[i]);
        let coords = perp.adjoint() * next;
        out[i] = BoundaryPoint::new(coords[0], coords[1]).map_err(|_| Error::NonGenericConfiguration(j.0))?;
    }
    Ok(out)
}

/// The Borel cocycle `B_n(F0, .., F3) = sum over J of vol(t_J(F))`, defined on
/// generic configurations.
pub fn borel_cocycle(flags: [&Flag; 4]) -> Result<f64> {
    let n = flags[0].dim();
    let gen = is_generic(flags)?;
    if let Some(w) = gen.witness {
        return Err(Error::NonGenericConfiguration(w));
    }
    let mut total = 0.0;
    for j in multi_index_set(n)? {
        let p = projected_quadruple(flags, j)?;
        total += ideal_tet_volume([&p[0], &p[1], &p[2], &p[3]]);
    }
    Ok(total)
}

/// `n (n^2 - 1) / 6`, the size of the multi-index set.
pub fn borel_multiplicity(n: usize) -> usize {
    n * (n - 1) * (n + 1) / 6
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn poly_mul(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_pow_product(first: [Complex64; 2], e1: usize, second: [Complex64; 2], e2: usize) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..e1 {
        p = poly_mul(&p, &first);
    }
    for _ in 0..e2 {
        p = poly_mul(&p, &second);
    }
    p
}

/// The irreducible representation PSL(2,C) -> PSL(n,C): the action on
/// degree `n - 1` binary forms in the basis `sqrt(C(n-1,k)) z0^{n-1-k} z1^k`,
/// which is unitary for SU(2).
pub fn veronese_matrix(n: usize, g: &Isometry) -> Result<IsometryN> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension must be at least 2, got {n}")));
    }
    let d = n - 1;
    let s: Vec<f64> = (0..n).map(|k| binomial(d, k).sqrt()).collect();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let p = poly_pow_product([g.a(), g.b()], d - k, [g.c(), g.d()], k);
        for (col, coef) in p.iter().enumerate() {
            m[(k, col)] = coef * (s[k] / s[col]);
        }
    }
    IsometryN::new(m)
}

/// The osculating flag of the rational normal curve at `z`: the derivative
/// vectors of `s -> v(z + s w)` for a direction `w` transverse to `z`.
pub fn veronese_flag(n: usize, z: &BoundaryPoint) -> Result<Flag> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension must be at least 2, got {n}")));
    }
    let d = n - 1;
    let (z0, z1) = z.coords();
    let (w0, w1) = (-z1.conj(), z0.conj());
    let mut basis = DMatrix::<Complex64>::zeros(n, n);
    for m in 0..n {
        let scale = binomial(d, m).sqrt();
        let p = poly_pow_product([z0, w0], d - m, [z1, w1], m);
        for (j, coef) in p.iter().enumerate() {
            basis[(m, j)] = coef * scale;
        }
    }
    gram_schmidt_flag(&basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::volume::V3;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn multi_index_examples() {
        assert_eq!(multi_index_set(2).unwrap(), vec![MultiIndex([0, 0, 0, 0])]);
        let m3 = multi_index_set(3).unwrap();
        assert_eq!(
            m3,
            vec![
                MultiIndex([1, 0, 0, 0]),
                MultiIndex([0, 1, 0, 0]),
                MultiIndex([0, 0, 1, 0]),
                MultiIndex([0, 0, 0, 1])
            ]
        );
        assert_eq!(multi_index_set(4).unwrap().len(), 10);
        for n in 2..8 {
            assert_eq!(multi_index_set(n).unwrap().len(), borel_multiplicity(n));
        }
        assert!(multi_index_set(1).is_err());
    }

    #[test]
    fn gram_schmidt_examples() {
        let f = gram_schmidt_flag(&DMatrix::identity(3, 3)).unwrap();
        assert!(f.approx_eq(&Flag::standard(3), 1e-14));
        let scaled = DMatrix::from_diagonal(&DVector::from_vec(vec![cx(2.0, 1.0), cx(0.0, -3.0), cx(0.5, 0.0)]));
        assert!(gram_schmidt_flag(&scaled).unwrap().approx_eq(&Flag::standard(3), 1e-14));
        let mut rng = sampling::rng(7);
        use rand::Rng;
        let m = DMatrix::from_fn(3, 3, |_, _| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let f = gram_schmidt_flag(&m).unwrap();
        assert!(f.orthonormality_defect() < 1e-12);
        let dep = DMatrix::from_columns(&[m.column(0).into_owned(), m.column(0) * cx(2.0, 0.0), m.column(2).into_owned()]);
        assert_eq!(gram_schmidt_flag(&dep), Err(Error::DependentBasis));
    }

    #[test]
    fn genericity_examples() {
        let f = Flag::standard(3);
        let g = is_generic([&f, &f, &f, &f]).unwrap();
        assert!(!g.generic && g.witness.is_some());
        let pts = [cx(0.0, 0.0), cx(1.0, 0.0), cx(-0.3, 2.0), cx(4.0, -1.0)];
        let flags: Vec<Flag> = pts.iter().map(|&p| veronese_flag(4, &BoundaryPoint::finite(p)).unwrap()).collect();
        assert!(is_generic([&flags[0], &flags[1], &flags[2], &flags[3]]).unwrap().generic);
        // n = 2: generic iff the four lines are distinct
        let lines: Vec<Flag> = [pts[0], pts[1], pts[1], pts[2]]
            .iter()
            .map(|&p| veronese_flag(2, &BoundaryPoint::finite(p)).unwrap())
            .collect();
        assert!(!is_generic([&lines[0], &lines[1], &lines[2], &lines[3]]).unwrap().generic);
    }

    #[test]
    fn veronese_matrix_examples() {
        let mut rng = sampling::rng(3);
        let g = sampling::random_isometry(&mut rng, 2.0);
        let m2 = veronese_matrix(2, &g).unwrap();
        let direct = DMatrix::from_row_slice(2, 2, &[g.a(), g.b(), g.c(), g.d()]);
        assert!(m2.distance(&IsometryN::new(direct).unwrap()) < 1e-12);
        let id = veronese_matrix(5, &Isometry::identity()).unwrap();
        assert!(id.distance(&IsometryN::new(DMatrix::identity(5, 5)).unwrap()) < 1e-14);
        // symmetric square of diag(l, 1/l), computed by hand
        let l = cx(1.3, 0.4);
        let m3 = veronese_matrix(3, &Isometry::diagonal(l).unwrap()).unwrap();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![l * l, cx(1.0, 0.0), (l * l).inv()]));
        assert!(m3.distance(&IsometryN::new(expect).unwrap()) < 1e-12);
    }

    #[test]
    fn veronese_homomorphism_and_equivariance() {
        let mut rng = sampling::rng(11);
        for n in 2..=5 {
            let g = sampling::random_isometry(&mut rng, 1.5);
            let h = sampling::random_isometry(&mut rng, 1.5);
            let lhs = veronese_matrix(n, &g.compose(&h)).unwrap();
            let rhs = veronese_matrix(n, &g).unwrap().compose(&veronese_matrix(n, &h).unwrap());
            assert!(lhs.distance(&rhs) < 1e-9, "n = {n}");
            let z = sampling::random_boundary_point(&mut rng);
            let moved = veronese_flag(n, &g.apply_boundary(&z)).unwrap();
            let pushed = veronese_flag(n, &z).unwrap().transform(&veronese_matrix(n, &g).unwrap()).unwrap();
            assert!(moved.approx_eq(&pushed, 1e-9), "n = {n}");
        }
        let z = cx(0.4, -1.2);
        let line = veronese_flag(2, &BoundaryPoint::finite(z)).unwrap();
        let f = line.frame();
        assert!((f[(0, 0)] / f[(1, 0)] - z).norm() < 1e-14);
    }

    #[test]
    fn borel_n2_is_ideal_volume() {
        let pts = [cx(0.0, 0.0), cx(1.0, 0.0), cx(-0.3, 2.0), cx(4.0, -1.0)].map(BoundaryPoint::finite);
        let flags: Vec<Flag> = pts.iter().map(|p| veronese_flag(2, p).unwrap()).collect();
        let b = borel_cocycle([&flags[0], &flags[1], &flags[2], &flags[3]]).unwrap();
        let v = ideal_tet_volume([&pts[0], &pts[1], &pts[2], &pts[3]]);
        assert!((b - v).abs() < 1e-12);
    }

    #[test]
    fn borel_n3_regular_ideal() {
        let pts = [
            BoundaryPoint::infinity(),
            BoundaryPoint::finite(cx(0.0, 0.0)),
            BoundaryPoint::finite(cx(1.0, 0.0)),
            BoundaryPoint::finite(Complex64::from_polar(1.0, std::f64::consts::PI / 3.0)),
        ];
        let flags: Vec<Flag> = pts.iter().map(|p| veronese_flag(3, p).unwrap()).collect();
        let b = borel_cocycle([&flags[0], &flags[1], &flags[2], &flags[3]]).unwrap();
        assert!((b - 4.0 * V3).abs() < 1e-9, "{b}");
    }

    #[test]
    fn borel_rejects_non_generic() {
        let f = Flag::standard(3);
        assert!(matches!(borel_cocycle([&f, &f, &f, &f]), Err(Error::NonGenericConfiguration(_))));
    }

    #[test]
    fn borel_independent_of_frame_phases() {
        let mut rng = sampling::rng(5);
        use rand::Rng;
        let flags: Vec<Flag> = (0..4)
            .map(|_| {
                let m = DMatrix::from_fn(4, 4, |_, _| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                gram_schmidt_flag(&m).unwrap()
            })
            .collect();
        let b = borel_cocycle([&flags[0], &flags[1], &flags[2], &flags[3]]).unwrap();
        let rephased: Vec<Flag> = flags
            .iter()
            .map(|f| {
                let mut fr = f.frame().clone();
                for j in 0..4 {
                    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                    let col = fr.column(j) * phase;
                    fr.set_column(j, &col);
                }
                Flag { frame: fr }
            })
            .collect();
        let b2 = borel_cocycle([&rephased[0], &rephased[1], &rephased[2], &rephased[3]]).unwrap();
        assert!((b - b2).abs() < 1e-9);
    }
}
