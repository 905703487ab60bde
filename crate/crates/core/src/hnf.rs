//! Hermite normal form over the integers, and the lattice-equality predicate
//! built on it.
//!
//! The HNF here is the canonical column-style form of an integral basis:
//! unique per lattice, so two bases generate the same lattice iff their
//! (commonly scaled) HNFs agree entry for entry.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::LatticeBasis;
use crate::linalg::{RatMatrix, RatVector};
use crate::rational::{ext_gcd, Rational};
use crate::{Error, Result};

/// Column-style Hermite normal form of an integral basis.
///
/// Every entry of the input must be an integer (callers pre-scale rational
/// bases by a common denominator). The result has one pivot per column,
/// pivots positive, and the other entries in a pivot's row reduced into
/// [0, pivot).
pub fn hnf(basis: &LatticeBasis) -> Result<RatMatrix> {
    let cols = integral_columns(basis.matrix()).ok_or(Error::NonIntegralInput)?;
    let reduced = hnf_generators(cols, basis.m());
    if reduced.len() != basis.n() {
        return Err(Error::DependentColumns);
    }
    Ok(RatMatrix::new(
        reduced
            .into_iter()
            .map(|col| RatVector::new(col.into_iter().map(Rational::from_integer).collect()))
            .collect(),
    ))
}

/// True iff the two bases generate the same lattice. Decided by comparing
/// HNFs after clearing denominators by a single common scale.
pub fn lattices_equal(b1: &LatticeBasis, b2: &LatticeBasis) -> Result<bool> {
    if b1.m() != b2.m() {
        return Err(Error::DimensionMismatch { expected: b1.m(), got: b2.m() });
    }
    if b1.n() != b2.n() {
        return Ok(false);
    }
    let mut scale = BigInt::one();
    for mat in [b1.matrix(), b2.matrix()] {
        for col in mat.columns() {
            for e in col.entries() {
                scale = scale.lcm(e.denom());
            }
        }
    }
    let scaled = |b: &LatticeBasis| -> Vec<Vec<BigInt>> {
        b.matrix()
            .columns()
            .iter()
            .map(|col| {
                col.entries()
                    .iter()
                    .map(|e| e.numer() * (&scale / e.denom()))
                    .collect()
            })
            .collect()
    };
    let h1 = hnf_generators(scaled(b1), b1.m());
    let h2 = hnf_generators(scaled(b2), b2.m());
    Ok(h1 == h2)
}

fn integral_columns(m: &RatMatrix) -> Option<Vec<Vec<BigInt>>> {
    let mut out = Vec::with_capacity(m.num_columns());
    for col in m.columns() {
        let mut c = Vec::with_capacity(col.dim());
        for e in col.entries() {
            if !e.is_integer() {
                return None;
            }
            c.push(e.to_integer());
        }
        out.push(c);
    }
    Some(out)
}

/// HNF of a set of integral generator columns; zero columns are dropped.
/// Unimodular column operations only, so the generated lattice is unchanged.
fn hnf_generators(columns: Vec<Vec<BigInt>>, m: usize) -> Vec<Vec<BigInt>> {
    let mut cols = columns;
    let k = cols.len();
    let mut pivot_col = 0usize;
    for row in 0..m {
        if pivot_col >= k {
            break;
        }
        // Fold all nonzero entries of this row (right of the pivot region)
        // into a single positive pivot by Bezout column ops.
        let Some(first) = (pivot_col..k).find(|&j| !cols[j][row].is_zero()) else {
            continue;
        };
        cols.swap(pivot_col, first);
        for j in (pivot_col + 1)..k {
            if cols[j][row].is_zero() {
                continue;
            }
            let a = cols[pivot_col][row].clone();
            let b = cols[j][row].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let ag = &a / &g;
            let bg = &b / &g;
            for i in 0..m {
                let p = cols[pivot_col][i].clone();
                let q = cols[j][i].clone();
                cols[pivot_col][i] = &p * &x + &q * &y;
                cols[j][i] = -(&p * &bg) + &q * &ag;
            }
        }
        if cols[pivot_col][row].is_negative() {
            for i in 0..m {
                cols[pivot_col][i] = -cols[pivot_col][i].clone();
            }
        }
        // Reduce earlier pivot columns' entries in this row into [0, pivot).
        let pivot = cols[pivot_col][row].clone();
        for j in 0..pivot_col {
            let q = cols[j][row].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for i in 0..m {
                let sub = &q * &cols[pivot_col][i];
                cols[j][i] -= sub;
            }
        }
        pivot_col += 1;
    }
    cols.truncate(pivot_col);
    cols
}
