//! Seeded random test data.
//!
//! Coordinates are sampled uniformly from the integers `-3..=3` scaled by a
//! power of `1/2` (exponent 0..=2), which keeps intermediate denominators
//! small across long exact computations. Constant terms are forced to the
//! unit where the caller needs invertibility.

use rand::Rng;

use crate::algebra::{Algebra, AlgebraElement};
use crate::mfs::{MFSeries, MultilinearMap};
use crate::Rat;

/// A small exact rational: `k / 2^p` with `k` in `-3..=3`, `p` in `0..=2`.
pub fn random_rat<R: Rng>(rng: &mut R) -> Rat {
    let numer: i64 = rng.gen_range(-3..=3);
    let pow: u32 = rng.gen_range(0..=2);
    Rat::new(numer.into(), (1i64 << pow).into())
}

pub fn random_element<R: Rng>(algebra: &Algebra, rng: &mut R) -> AlgebraElement {
    let coords = (0..algebra.dim()).map(|_| random_rat(rng)).collect();
    algebra.element(coords).expect("dimension-many coordinates")
}

/// A random element resampled until it has an inverse.
pub fn random_invertible_element<R: Rng>(algebra: &Algebra, rng: &mut R) -> AlgebraElement {
    loop {
        let x = random_element(algebra, rng);
        if x.invert().is_ok() {
            return x;
        }
    }
}

pub fn random_map<R: Rng>(algebra: &Algebra, degree: usize, rng: &mut R) -> MultilinearMap {
    MultilinearMap::from_fn(algebra, degree, |_| random_element(algebra, rng))
        .expect("table within size guard")
}

/// A random series of the given order. With `unit_constant` the degree-0
/// component is the unit of the algebra, making the constant term invertible.
pub fn random_series<R: Rng>(
    algebra: &Algebra,
    order: usize,
    rng: &mut R,
    unit_constant: bool,
) -> MFSeries {
    let mut components = Vec::with_capacity(order + 1);
    components.push(MultilinearMap::constant(if unit_constant {
        algebra.unit()
    } else {
        random_element(algebra, rng)
    }));
    for k in 1..=order {
        components.push(random_map(algebra, k, rng));
    }
    MFSeries::from_components(components).expect("degrees are consistent")
}
