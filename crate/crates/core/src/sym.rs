//! Symmetrization and the symmetric quotient operations.
//!
//! `symmetrize` averages a degree-`k` component over all argument
//! permutations with exact rational weights `1/k!`; a symmetric series is one
//! fixed by it. The symmetric product and composition are the plain
//! operations followed by symmetrization, and the polar-part/diagonal pair
//! identifies symmetric degree-`m` maps with homogeneous degree-`m`
//! polynomial functions on `B`.

use itertools::Itertools;
use num::One;

use crate::algebra::{Algebra, AlgebraElement};
use crate::mfs::{MFSeries, MultilinearMap};
use crate::{Rat, Result};

/// Average a single multilinear map over argument permutations.
/// Degrees 0 and 1 are returned unchanged.
pub fn symmetrize_map(map: &MultilinearMap) -> MultilinearMap {
    let k = map.degree();
    if k <= 1 {
        return map.clone();
    }
    let mut factorial = Rat::one();
    for j in 2..=k {
        factorial *= Rat::from_integer(j.into());
    }
    let weight = Rat::one() / factorial;
    MultilinearMap::from_fn(map.algebra(), k, |tuple| {
        let mut acc = map.algebra().zero();
        for perm in (0..k).permutations(k) {
            let permuted: Vec<usize> = perm.iter().map(|&p| tuple[p]).collect();
            acc = acc.add(map.entry(&permuted)).expect("same algebra");
        }
        acc.scale(&weight)
    })
    .expect("same table size as input")
}

/// Componentwise symmetrization of a series.
pub fn symmetrize(series: &MFSeries) -> MFSeries {
    MFSeries::from_components(series.components().iter().map(symmetrize_map).collect())
        .expect("degrees preserved")
}

/// Is the series fixed by `symmetrize`?
pub fn is_symmetric(series: &MFSeries) -> bool {
    &symmetrize(series) == series
}

/// Symmetric product `Sym(ab)`.
pub fn sym_product(a: &MFSeries, b: &MFSeries) -> Result<MFSeries> {
    Ok(symmetrize(&a.product(b)?))
}

/// Symmetric composition `Sym(a o b)`; `b` must have zero constant term.
pub fn sym_compose(a: &MFSeries, b: &MFSeries) -> Result<MFSeries> {
    Ok(symmetrize(&a.compose(b)?))
}

/// The polar part of a homogeneous degree-`m` polynomial evaluator: the
/// symmetric `m`-linear map recovered by the finite-difference sum
/// `(1/m!) sum_{k=1}^m (-1)^(m-k) sum_{i_1<...<i_k} P(h_{i_1}+...+h_{i_k})`,
/// evaluated here on basis tuples by direct summation over the `2^m - 1`
/// nonempty subsets.
///
/// The caller guarantees homogeneity of degree `m`; for a nonsymmetric
/// diagonal the result is the symmetrization of the underlying map.
pub fn polarize<F>(algebra: &Algebra, degree: usize, p: F) -> MultilinearMap
where
    F: Fn(&AlgebraElement) -> AlgebraElement,
{
    if degree == 0 {
        return MultilinearMap::constant(p(&algebra.zero()));
    }
    let mut factorial = Rat::one();
    for j in 2..=degree {
        factorial *= Rat::from_integer(j.into());
    }
    let weight = Rat::one() / factorial;
    MultilinearMap::from_fn(algebra, degree, |tuple| {
        let mut acc = algebra.zero();
        for mask in 1u64..(1 << degree) {
            let mut arg = algebra.zero();
            for (j, &idx) in tuple.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    arg = arg.add(&algebra.basis_element(idx)).expect("same algebra");
                }
            }
            let term = p(&arg);
            if (degree - mask.count_ones() as usize).is_multiple_of(2) {
                acc = acc.add(&term).expect("same algebra");
            } else {
                acc = acc.sub(&term).expect("same algebra");
            }
        }
        acc.scale(&weight)
    })
    .expect("table size checked by caller")
}

/// The diagonal `b -> a_m(b, ..., b)` of a multilinear map, as a homogeneous
/// polynomial evaluator.
pub fn diagonal(map: &MultilinearMap) -> impl Fn(&AlgebraElement) -> AlgebraElement + '_ {
    move |b: &AlgebraElement| {
        let args = vec![b.clone(); map.degree()];
        map.eval(&args).expect("degree-many arguments")
    }
}

/// The full diagonal sum `b -> sum_k a_k(b, ..., b)` of a truncated series;
/// this is the polynomial function a finite-support series corresponds to.
pub fn diagonal_sum(series: &MFSeries, b: &AlgebraElement) -> AlgebraElement {
    let mut acc = series.constant_term().clone();
    for k in 1..=series.order() {
        let args = vec![b.clone(); k];
        acc = acc
            .add(&series.component(k).eval(&args).expect("k arguments"))
            .expect("same algebra");
    }
    acc
}
