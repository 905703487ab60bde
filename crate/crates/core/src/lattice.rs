//! Lattice-level structures: validated bases, lattice vectors with their
//! integer coefficients, membership, elementary-vector normalization, basis
//! completion from an elementary vector, perpendicular projection of a basis,
//! and lifting of projected candidates.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::{gram_schmidt, inner_product, norm_sq, perp_component, solve_linear, RatMatrix, RatVector};
use crate::rational::{ext_gcd, gcd_all, round_half_down, Rational};
use crate::{Error, Result};

/// n linearly independent columns in m-dimensional rational space, n <= m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    matrix: RatMatrix,
}

impl LatticeBasis {
    /// Validates column independence (Gram–Schmidt produces no zero vector).
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        if matrix.num_columns() > matrix.num_rows() {
            return Err(Error::DependentColumns);
        }
        gram_schmidt(&matrix)?;
        Ok(LatticeBasis { matrix })
    }

    pub fn from_i64_columns(cols: &[&[i64]]) -> Result<Self> {
        LatticeBasis::new(RatMatrix::from_i64_columns(cols))
    }

    pub fn identity(n: usize) -> Self {
        LatticeBasis { matrix: RatMatrix::identity(n) }
    }

    /// Number of basis vectors.
    pub fn n(&self) -> usize {
        self.matrix.num_columns()
    }

    /// Ambient dimension.
    pub fn m(&self) -> usize {
        self.matrix.num_rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn column(&self, j: usize) -> &RatVector {
        self.matrix.column(j)
    }

    pub fn vector(&self, coeffs: Vec<BigInt>) -> LatticeVector {
        LatticeVector::new(self, coeffs)
    }

    pub fn vector_i64(&self, coeffs: &[i64]) -> LatticeVector {
        self.vector(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

/// A lattice member: ambient coordinates plus the integer coefficients that
/// produce them. `coords = B * coeffs` holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVector {
    coords: RatVector,
    coeffs: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(basis: &LatticeBasis, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), basis.n());
        let coords = basis.matrix().mul_int_vector(&coeffs);
        LatticeVector { coords, coeffs }
    }

    pub fn coords(&self) -> &RatVector {
        &self.coords
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn norm_sq(&self) -> Rational {
        norm_sq(&self.coords)
    }

    pub fn dist_sq(&self, target: &RatVector) -> Rational {
        norm_sq(&self.coords.sub(target))
    }
}

/// Integer coefficients x with Bx = w, or `None` when w is not in the lattice.
pub fn is_member(basis: &LatticeBasis, w: &RatVector) -> Result<Option<Vec<BigInt>>> {
    if w.dim() != basis.m() {
        return Err(Error::DimensionMismatch { expected: basis.m(), got: w.dim() });
    }
    let Some(x) = solve_linear(basis.matrix(), w)? else {
        return Ok(None);
    };
    if x.iter().all(|c| c.is_integer()) {
        Ok(Some(x.into_iter().map(|c| c.to_integer()).collect()))
    } else {
        Ok(None)
    }
}

/// Lattice vector from ambient coordinates, when they are a member.
pub fn member_vector(basis: &LatticeBasis, w: &RatVector) -> Result<LatticeVector> {
    match is_member(basis, w)? {
        Some(coeffs) => Ok(LatticeVector::new(basis, coeffs)),
        None => Err(Error::NotInLattice),
    }
}

/// Divide out the gcd of the coefficients, keeping direction and sign.
/// The result is elementary: its coefficient gcd is 1.
pub fn make_elementary(basis: &LatticeBasis, w: &LatticeVector) -> Result<LatticeVector> {
    if w.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = gcd_all(w.coeffs());
    if g.is_one() {
        return Ok(w.clone());
    }
    let coeffs = w.coeffs().iter().map(|c| c / &g).collect();
    Ok(LatticeVector::new(basis, coeffs))
}

pub fn is_elementary(w: &LatticeVector) -> bool {
    gcd_all(w.coeffs()).is_one()
}

/// Extends an elementary vector v to a full basis of the same lattice:
/// returns b_2, ..., b_n with L(v, b_2, ..., b_n) = L(B).
///
/// Construction: the coprime coefficient vector of v is extended to a
/// unimodular matrix U (first column = coeffs) by composing 2x2 Bezout
/// blocks, and U's remaining columns are mapped through B.
pub fn complete_basis(v: &LatticeVector, basis: &LatticeBasis) -> Result<Vec<LatticeVector>> {
    let n = basis.n();
    if v.coeffs().len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.coeffs().len() });
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = gcd_all(v.coeffs());
    if !g.is_one() {
        return Err(Error::NotElementary(g.to_string()));
    }
    if basis.matrix().mul_int_vector(v.coeffs()) != *v.coords() {
        return Err(Error::NotInLattice);
    }

    // u starts as the identity; we accumulate the inverses of the Bezout row
    // operations that send the coefficient vector to e_1, so that in the end
    // the first column of u is exactly v's coefficient vector.
    let mut d: Vec<BigInt> = v.coeffs().to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for i in (1..n).rev() {
        let a = d[i - 1].clone();
        let b = d[i].clone();
        if b.is_zero() {
            continue;
        }
        let (g, x, y) = ext_gcd(&a, &b);
        // Row op M = [[x, y], [-b/g, a/g]] sends (a, b) to (g, 0);
        // column-apply M^{-1} = [[a/g, -y], [b/g, x]] to u.
        let ag = &a / &g;
        let bg = &b / &g;
        d[i - 1] = g;
        d[i] = BigInt::zero();
        for row in u.iter_mut() {
            let left = &row[i - 1] * &ag + &row[i] * &bg;
            let right = -(&row[i - 1] * &y) + &row[i] * &x;
            row[i - 1] = left;
            row[i] = right;
        }
    }
    // All-zero tail with a negative head means no Bezout step ran over
    // position 0; flip the sign column to land on e_1.
    if d[0].is_negative() {
        d[0] = -d[0].clone();
        for row in u.iter_mut() {
            row[0] = -row[0].clone();
        }
    }
    debug_assert!(d[0].is_one() && d[1..].iter().all(Zero::is_zero));
    debug_assert_eq!(u.iter().map(|r| r[0].clone()).collect::<Vec<_>>(), v.coeffs().to_vec());

    Ok((1..n)
        .map(|j| {
            let coeffs: Vec<BigInt> = (0..n).map(|i| u[i][j].clone()).collect();
            LatticeVector::new(basis, coeffs)
        })
        .collect())
}

/// Basis of the lattice projected orthogonally to v, given the remaining
/// basis vectors: returns the perpendicular components (b_i - b_i|_v).
pub fn project_basis_perp(rest: &[LatticeVector], v: &RatVector) -> Result<LatticeBasis> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if rest.is_empty() {
        return Err(Error::InvalidParameter("nothing to project".into()));
    }
    let cols = rest
        .iter()
        .map(|b| perp_component(b.coords(), v))
        .collect::<Result<Vec<_>>>()?;
    LatticeBasis::new(RatMatrix::new(cols))
}

/// Lifts a projected candidate back into the full lattice.
///
/// Solves z_proj = sum a_i (b_i)_perp_v exactly (the a_i must come out
/// integral — the caller promises z_proj lies in the projected lattice), then
/// picks the integer a_1 minimizing || a_1 v + sum a_i b_i - t ||, rounding
/// ties toward the smaller a_1. The returned vector's v-direction residue is
/// at most ||v||/2, so its squared distance to t is at most the projected
/// distance squared plus ||v||^2/4.
pub fn lift_candidate(
    basis: &LatticeBasis,
    v: &LatticeVector,
    rest: &[LatticeVector],
    z_proj: &RatVector,
    t: &RatVector,
) -> Result<LatticeVector> {
    let proj_cols = rest
        .iter()
        .map(|b| perp_component(b.coords(), v.coords()))
        .collect::<Result<Vec<_>>>()?;
    let proj = RatMatrix::new(proj_cols);
    let Some(sol) = solve_linear(&proj, z_proj)? else {
        return Err(Error::NonIntegralCoefficients("candidate outside projected span".into()));
    };
    let mut lifted = vec![BigInt::zero(); basis.n()];
    let mut w = RatVector::zero(basis.m());
    for (a, b) in sol.iter().zip(rest) {
        if !a.is_integer() {
            return Err(Error::NonIntegralCoefficients(a.to_string()));
        }
        let ai = a.to_integer();
        w = w.add(&b.coords().scale_int(&ai));
        for (acc, c) in lifted.iter_mut().zip(b.coeffs()) {
            *acc += &ai * c;
        }
    }
    // Quadratic in a_1; minimized over Z at the rounded stationary point.
    let vv = norm_sq(v.coords());
    let a1_star = inner_product(&t.sub(&w), v.coords())? / vv;
    let a1 = round_half_down(&a1_star);
    for (acc, c) in lifted.iter_mut().zip(v.coeffs()) {
        *acc += &a1 * c;
    }
    Ok(LatticeVector::new(basis, lifted))
}

/// Babai nearest-plane decoding of t against the given basis. Best-effort:
/// the quality guarantee depends on how reduced the basis is.
pub fn nearest_plane(basis: &LatticeBasis, t: &RatVector) -> Result<LatticeVector> {
    let gs = crate::linalg::gram_schmidt_data(basis.matrix())?;
    let mut residual = t.clone();
    let mut coeffs = vec![BigInt::zero(); basis.n()];
    for i in (0..basis.n()).rev() {
        let c = inner_product(&residual, &gs.ortho[i])? / &gs.norms_sq[i];
        let ci = round_half_down(&c);
        if !ci.is_zero() {
            residual = residual.sub(&basis.column(i).scale_int(&ci));
        }
        coeffs[i] = ci;
    }
    Ok(LatticeVector::new(basis, coeffs))
}
