//! Truncated formal multilinear function series.
//!
//! A series is a sequence `(a_0, a_1, ..., a_N)` where `a_0` is an element of
//! the base algebra `B` and `a_k` is a `k`-multilinear map from `B^k` to `B`,
//! stored densely on basis tuples. Binary operations return results of the
//! minimum order of their inputs; because the formal product and composition
//! only feed lower-degree components into a degree-`n` output, truncation is
//! exact for the retained degrees.

use num::{One, Zero};

use crate::algebra::{Algebra, AlgebraElement};
use crate::{check_table_size, linalg, Error, Rat, Result};

/// Iterate all tuples in `{0..dim}^k` in row-major order.
pub(crate) struct BasisTuples {
    dim: usize,
    current: Option<Vec<usize>>,
}

pub(crate) fn basis_tuples(dim: usize, k: usize) -> BasisTuples {
    BasisTuples {
        dim,
        current: Some(vec![0; k]),
    }
}

impl Iterator for BasisTuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.take()?;
        let mut next = current.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.dim {
                self.current = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(current)
    }
}

pub(crate) fn flat_index(dim: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * dim + t)
}

/// All ordered compositions of `n` into positive parts.
pub(crate) fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0u64..(1 << (n - 1)) {
        let mut parts = Vec::new();
        let mut run = 1;
        for gap in 0..n - 1 {
            if mask >> gap & 1 == 1 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        out.push(parts);
    }
    out
}

/// A degree-`k` multilinear map `B^k -> B`, stored as a dense basis-indexed
/// table (`dim^k` entries, tuple `(i_1, ..., i_k)` at row-major index).
/// Degree 0 is a single element of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearMap {
    algebra: Algebra,
    degree: usize,
    values: Vec<AlgebraElement>,
}

impl MultilinearMap {
    pub fn zero(algebra: &Algebra, degree: usize) -> Result<MultilinearMap> {
        check_table_size(algebra.dim(), degree)?;
        let cells = algebra.dim().pow(degree as u32);
        Ok(MultilinearMap {
            algebra: algebra.clone(),
            degree,
            values: vec![algebra.zero(); cells],
        })
    }

    /// A degree-0 map holding a single constant.
    pub fn constant(value: AlgebraElement) -> MultilinearMap {
        MultilinearMap {
            algebra: value.algebra().clone(),
            degree: 0,
            values: vec![value],
        }
    }

    /// The identity of `B` as a degree-1 map.
    pub fn identity(algebra: &Algebra) -> MultilinearMap {
        let values = (0..algebra.dim())
            .map(|i| algebra.basis_element(i))
            .collect();
        MultilinearMap {
            algebra: algebra.clone(),
            degree: 1,
            values,
        }
    }

    /// Build from a full table in row-major basis-tuple order.
    pub fn from_values(
        algebra: &Algebra,
        degree: usize,
        values: Vec<AlgebraElement>,
    ) -> Result<MultilinearMap> {
        check_table_size(algebra.dim(), degree)?;
        let cells = algebra.dim().pow(degree as u32);
        if values.len() != cells {
            return Err(Error::ArityMismatch {
                expected: cells,
                got: values.len(),
            });
        }
        if values.iter().any(|v| v.algebra() != algebra) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(MultilinearMap {
            algebra: algebra.clone(),
            degree,
            values,
        })
    }

    /// Build by evaluating a callback on every basis tuple.
    pub fn from_fn(
        algebra: &Algebra,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> AlgebraElement,
    ) -> Result<MultilinearMap> {
        check_table_size(algebra.dim(), degree)?;
        let values = basis_tuples(algebra.dim(), degree).map(|t| f(&t)).collect();
        MultilinearMap::from_values(algebra, degree, values)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[AlgebraElement] {
        &self.values
    }

    /// Table entry at a basis tuple.
    pub fn entry(&self, tuple: &[usize]) -> &AlgebraElement {
        debug_assert_eq!(tuple.len(), self.degree);
        &self.values[flat_index(self.algebra.dim(), tuple)]
    }

    pub(crate) fn entry_flat(&self, index: usize) -> &AlgebraElement {
        &self.values[index]
    }

    /// The constant of a degree-0 map.
    pub fn constant_value(&self) -> &AlgebraElement {
        assert_eq!(self.degree, 0);
        &self.values[0]
    }

    /// Every table entry is zero. By multilinearity this is equivalent to the
    /// map vanishing identically.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(AlgebraElement::is_zero)
    }

    /// Multilinear extension of the stored basis values.
    pub fn eval(&self, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        if args.len() != self.degree {
            return Err(Error::ArityMismatch {
                expected: self.degree,
                got: args.len(),
            });
        }
        if args.iter().any(|a| a.algebra() != &self.algebra) {
            return Err(Error::DescriptorMismatch);
        }
        if self.degree == 0 {
            return Ok(self.values[0].clone());
        }
        let dim = self.algebra.dim();
        let mut acc = self.algebra.zero();
        let mut tuple = vec![0usize; self.degree];
        // Depth-first over basis tuples, pruning zero coordinates.
        fn walk(
            map: &MultilinearMap,
            args: &[AlgebraElement],
            dim: usize,
            depth: usize,
            factor: &Rat,
            tuple: &mut Vec<usize>,
            acc: &mut AlgebraElement,
        ) {
            if depth == args.len() {
                let entry = map.entry_flat(flat_index(dim, tuple));
                if !entry.is_zero() {
                    *acc = acc.add(&entry.scale(factor)).expect("same algebra");
                }
                return;
            }
            for (i, coord) in args[depth].coords().iter().enumerate() {
                if coord.is_zero() {
                    continue;
                }
                tuple[depth] = i;
                let next = factor * coord;
                walk(map, args, dim, depth + 1, &next, tuple, acc);
            }
        }
        walk(self, args, dim, 0, &Rat::one(), &mut tuple, &mut acc);
        Ok(acc)
    }

    pub fn add(&self, other: &MultilinearMap) -> Result<MultilinearMap> {
        if self.algebra != other.algebra || self.degree != other.degree {
            return Err(Error::DescriptorMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(MultilinearMap {
            algebra: self.algebra.clone(),
            degree: self.degree,
            values,
        })
    }

    pub fn sub(&self, other: &MultilinearMap) -> Result<MultilinearMap> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultilinearMap {
        let values = self.values.iter().map(AlgebraElement::neg).collect();
        MultilinearMap {
            algebra: self.algebra.clone(),
            degree: self.degree,
            values,
        }
    }

    pub fn scale(&self, factor: &Rat) -> MultilinearMap {
        let values = self.values.iter().map(|v| v.scale(factor)).collect();
        MultilinearMap {
            algebra: self.algebra.clone(),
            degree: self.degree,
            values,
        }
    }
}

/// A truncated formal multilinear function series `(a_0, ..., a_N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MFSeries {
    components: Vec<MultilinearMap>,
}

impl MFSeries {
    /// The zero series of the given truncation order.
    pub fn zero(algebra: &Algebra, order: usize) -> MFSeries {
        let components = (0..=order)
            .map(|k| MultilinearMap::zero(algebra, k).expect("guarded by caller scale"))
            .collect();
        MFSeries { components }
    }

    /// The multiplicative identity `(1, 0, 0, ...)`.
    pub fn one(algebra: &Algebra, order: usize) -> MFSeries {
        let mut s = MFSeries::zero(algebra, order);
        s.components[0] = MultilinearMap::constant(algebra.unit());
        s
    }

    /// A constant series `(b, 0, 0, ...)`.
    pub fn constant(value: AlgebraElement, order: usize) -> MFSeries {
        let mut s = MFSeries::zero(value.algebra(), order);
        s.components[0] = MultilinearMap::constant(value);
        s
    }

    /// The composition identity `I = (0, id_B, 0, ...)`.
    pub fn identity(algebra: &Algebra, order: usize) -> MFSeries {
        let mut s = MFSeries::zero(algebra, order);
        if order >= 1 {
            s.components[1] = MultilinearMap::identity(algebra);
        }
        s
    }

    /// Assemble from components; component `k` must have degree `k`.
    pub fn from_components(components: Vec<MultilinearMap>) -> Result<MFSeries> {
        if components.is_empty() {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: 0,
            });
        }
        let algebra = components[0].algebra().clone();
        for (k, c) in components.iter().enumerate() {
            if c.degree() != k {
                return Err(Error::ArityMismatch {
                    expected: k,
                    got: c.degree(),
                });
            }
            if c.algebra() != &algebra {
                return Err(Error::DescriptorMismatch);
            }
        }
        Ok(MFSeries { components })
    }

    /// Scalar-algebra series from plain rational coefficients.
    pub fn from_rats(coeffs: &[Rat]) -> MFSeries {
        let algebra = Algebra::scalar();
        let components = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                MultilinearMap::from_values(&algebra, k, vec![algebra.from_rat(c.clone()).unwrap()])
                    .unwrap()
            })
            .collect();
        MFSeries { components }
    }

    /// Scalar-algebra coefficients, one per degree.
    pub fn to_rats(&self) -> Vec<Rat> {
        assert_eq!(self.algebra().dim(), 1);
        self.components
            .iter()
            .map(|c| c.values()[0].coords()[0].clone())
            .collect()
    }

    pub fn algebra(&self) -> &Algebra {
        self.components[0].algebra()
    }

    /// Truncation order `N`; components run over degrees `0..=N`.
    pub fn order(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, degree: usize) -> &MultilinearMap {
        &self.components[degree]
    }

    pub fn components(&self) -> &[MultilinearMap] {
        &self.components
    }

    /// Replace one component; the degree must match its position.
    pub fn set_component(&mut self, degree: usize, map: MultilinearMap) {
        assert_eq!(map.degree(), degree);
        self.components[degree] = map;
    }

    pub(crate) fn push_component(&mut self, map: MultilinearMap) {
        assert_eq!(map.degree(), self.components.len());
        self.components.push(map);
    }

    /// The constant term `a_0` as an element of `B`.
    pub fn constant_term(&self) -> &AlgebraElement {
        self.components[0].constant_value()
    }

    /// Restriction to a lower order.
    pub fn truncate(&self, order: usize) -> MFSeries {
        assert!(order <= self.order());
        MFSeries {
            components: self.components[..=order].to_vec(),
        }
    }

    /// Equality of all components up to the given order.
    pub fn agrees_to(&self, other: &MFSeries, order: usize) -> bool {
        order <= self.order()
            && order <= other.order()
            && self.components[..=order] == other.components[..=order]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultilinearMap::is_zero)
    }

    fn check(&self, other: &MFSeries) -> Result<()> {
        if self.algebra() == other.algebra() {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    /// Componentwise sum; the result has the minimum of the two orders.
    pub fn sum(&self, other: &MFSeries) -> Result<MFSeries> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let components = (0..=order)
            .map(|k| self.components[k].add(&other.components[k]))
            .collect::<Result<_>>()?;
        Ok(MFSeries { components })
    }

    pub fn sub(&self, other: &MFSeries) -> Result<MFSeries> {
        self.sum(&other.neg())
    }

    pub fn neg(&self) -> MFSeries {
        MFSeries {
            components: self.components.iter().map(MultilinearMap::neg).collect(),
        }
    }

    pub fn scale(&self, factor: &Rat) -> MFSeries {
        MFSeries {
            components: self.components.iter().map(|c| c.scale(factor)).collect(),
        }
    }

    /// Formal product: degree-`n` output convolves prefix evaluations of
    /// `self` with suffix evaluations of `other`.
    pub fn product(&self, other: &MFSeries) -> Result<MFSeries> {
        self.check(other)?;
        let order = self.order().min(other.order());
        let dim = self.algebra().dim();
        let mut components = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut table = MultilinearMap::zero(self.algebra(), n)?;
            for tuple in basis_tuples(dim, n) {
                let mut acc = self.algebra().zero();
                for k in 0..=n {
                    let left = self.components[k].entry(&tuple[..k]);
                    if left.is_zero() {
                        continue;
                    }
                    let right = other.components[n - k].entry(&tuple[k..]);
                    if right.is_zero() {
                        continue;
                    }
                    acc = acc.add(&left.mul(right)?)?;
                }
                let idx = flat_index(dim, &tuple);
                table.values[idx] = acc;
            }
            components.push(table);
        }
        Ok(MFSeries { components })
    }

    /// Formal composition; `other` must have zero constant term.
    pub fn compose(&self, other: &MFSeries) -> Result<MFSeries> {
        self.check(other)?;
        if !other.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order().min(other.order());
        let dim = self.algebra().dim();
        let mut components = Vec::with_capacity(order + 1);
        components.push(self.components[0].clone());
        for n in 1..=order {
            let mut table = MultilinearMap::zero(self.algebra(), n)?;
            for tuple in basis_tuples(dim, n) {
                let mut acc = self.algebra().zero();
                for parts in compositions(n) {
                    let k = parts.len();
                    let mut args = Vec::with_capacity(k);
                    let mut offset = 0;
                    let mut vanishes = false;
                    for &p in &parts {
                        let arg = other.components[p].entry(&tuple[offset..offset + p]);
                        if arg.is_zero() {
                            vanishes = true;
                            break;
                        }
                        args.push(arg.clone());
                        offset += p;
                    }
                    if vanishes {
                        continue;
                    }
                    acc = acc.add(&self.components[k].eval(&args)?)?;
                }
                let idx = flat_index(dim, &tuple);
                table.values[idx] = acc;
            }
            components.push(table);
        }
        Ok(MFSeries { components })
    }

    /// Multiplicative inverse up to truncation, by the recursion
    /// `a'_n = -(sum_{k<n} a'_k a_{n-k}) a_0^{-1}` on basis tuples.
    pub fn mul_inverse(&self) -> Result<MFSeries> {
        let inv0 = self
            .constant_term()
            .invert()
            .map_err(|_| Error::Singular("constant term of series"))?;
        let dim = self.algebra().dim();
        let mut components = vec![MultilinearMap::constant(inv0.clone())];
        for n in 1..=self.order() {
            let mut table = MultilinearMap::zero(self.algebra(), n)?;
            for tuple in basis_tuples(dim, n) {
                let mut acc = self.algebra().zero();
                for k in 0..n {
                    let left = components[k].entry(&tuple[..k]);
                    if left.is_zero() {
                        continue;
                    }
                    let right = self.components[n - k].entry(&tuple[k..]);
                    if right.is_zero() {
                        continue;
                    }
                    acc = acc.add(&left.mul(right)?)?;
                }
                let idx = flat_index(dim, &tuple);
                table.values[idx] = acc.mul(&inv0)?.neg();
            }
            components.push(table);
        }
        Ok(MFSeries { components })
    }

    /// Inverse with respect to formal composition. Requires zero constant
    /// term and an invertible degree-one component (as a linear map on `B`,
    /// inverted by exact Gaussian elimination).
    pub fn comp_inverse(&self) -> Result<MFSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let dim = self.algebra().dim();
        if self.order() == 0 {
            // at truncation order 0 the only data is the zero constant term,
            // and the inverse is again the zero series
            return Ok(self.clone());
        }
        // Matrix of a_1: column j holds the coordinates of a_1(e_j).
        let mut m = vec![vec![Rat::zero(); dim]; dim];
        for j in 0..dim {
            let col = self.components[1].entry(&[j]);
            for (k, c) in col.coords().iter().enumerate() {
                m[k][j] = c.clone();
            }
        }
        let m_inv = linalg::invert(&m).ok_or(Error::NotCompInvertible)?;
        let apply_inv = |v: &AlgebraElement| -> AlgebraElement {
            let coords = (0..dim)
                .map(|k| {
                    m_inv[k]
                        .iter()
                        .zip(v.coords())
                        .map(|(a, b)| a * b)
                        .fold(Rat::zero(), |acc, t| acc + t)
                })
                .collect();
            self.algebra().element(coords).expect("dimension preserved")
        };
        let inv1 = MultilinearMap::from_fn(self.algebra(), 1, |t| {
            apply_inv(&self.algebra().basis_element(t[0]))
        })?;
        let mut components = vec![MultilinearMap::constant(self.algebra().zero()), inv1];
        for n in 2..=self.order() {
            let mut table = MultilinearMap::zero(self.algebra(), n)?;
            for tuple in basis_tuples(dim, n) {
                let mut acc = self.algebra().zero();
                for parts in compositions(n) {
                    let k = parts.len();
                    if k < 2 {
                        continue;
                    }
                    let mut args = Vec::with_capacity(k);
                    let mut offset = 0;
                    let mut vanishes = false;
                    for &p in &parts {
                        let arg = components[p].entry(&tuple[offset..offset + p]);
                        if arg.is_zero() {
                            vanishes = true;
                            break;
                        }
                        args.push(arg.clone());
                        offset += p;
                    }
                    if vanishes {
                        continue;
                    }
                    acc = acc.add(&self.components[k].eval(&args)?)?;
                }
                let idx = flat_index(dim, &tuple);
                table.values[idx] = apply_inv(&acc).neg();
            }
            components.push(table);
        }
        Ok(MFSeries { components })
    }

    /// Least degree with a nonzero component; `None` when the series
    /// vanishes up to its order.
    pub fn lower_degree(&self) -> Option<usize> {
        self.components.iter().position(|c| !c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_element, random_series};
    use crate::{rat, rat_int, Rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar(coeffs: &[i64]) -> MFSeries {
        MFSeries::from_rats(&coeffs.iter().map(|&c| rat_int(c)).collect::<Vec<_>>())
    }

    /// Independent truncated power-series oracle for the scalar algebra.
    mod ps {
        use crate::Rat;
        use num::Zero;

        pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
            let n = a.len().min(b.len());
            let mut out = vec![Rat::zero(); n];
            for i in 0..n {
                for j in 0..n - i {
                    out[i + j] += &a[i] * &b[j];
                }
            }
            out
        }

        /// Horner-style composition, `b[0] = 0`.
        pub fn compose(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
            let n = a.len().min(b.len());
            let mut out = vec![Rat::zero(); n];
            for k in (0..n).rev() {
                out = mul(&out, &b[..n]);
                out[0] += &a[k];
            }
            out
        }
    }

    #[test]
    fn eval_degree_zero_returns_constant() {
        let alg = Algebra::matrix(2);
        let m = MultilinearMap::constant(alg.basis_element(1));
        assert_eq!(m.eval(&[]).unwrap(), alg.basis_element(1));
    }

    #[test]
    fn eval_scalar_degree_two() {
        let alg = Algebra::scalar();
        let lambda = rat(3, 2);
        let m = MultilinearMap::from_values(&alg, 2, vec![alg.from_rat(lambda.clone()).unwrap()])
            .unwrap();
        let b1 = alg.from_rat(rat(2, 1)).unwrap();
        let b2 = alg.from_rat(rat(5, 3)).unwrap();
        let got = m.eval(&[b1, b2]).unwrap();
        assert_eq!(got.coords()[0], lambda * rat(2, 1) * rat(5, 3));
    }

    #[test]
    fn eval_is_linear_in_each_slot() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_series(&alg, 2, &mut rng, false);
        let m = s.component(2);
        let x = random_element(&alg, &mut rng);
        let y = random_element(&alg, &mut rng);
        let z = random_element(&alg, &mut rng);
        let lhs = m.eval(&[x.add(&y).unwrap(), z.clone()]).unwrap();
        let rhs = m
            .eval(&[x, z.clone()])
            .unwrap()
            .add(&m.eval(&[y, z]).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_arity_mismatch() {
        let alg = Algebra::scalar();
        let m = MultilinearMap::identity(&alg);
        assert_eq!(
            m.eval(&[]),
            Err(Error::ArityMismatch {
                expected: 1,
                got: 0
            })
        );
    }

    #[test]
    fn sum_componentwise() {
        let a = scalar(&[1, 2, 3]);
        let b = scalar(&[4, 5, 6]);
        assert_eq!(a.sum(&b).unwrap(), scalar(&[5, 7, 9]));
        let zero = MFSeries::zero(&Algebra::scalar(), 2);
        assert_eq!(a.sum(&zero).unwrap(), a);
    }

    #[test]
    fn product_has_one_as_identity() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_series(&alg, 3, &mut rng, false);
        let one = MFSeries::one(&alg, 3);
        assert_eq!(a.product(&one).unwrap(), a);
        assert_eq!(one.product(&a).unwrap(), a);
    }

    #[test]
    fn scalar_product_is_cauchy_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alg = Algebra::scalar();
        for _ in 0..10 {
            let a = random_series(&alg, 5, &mut rng, false);
            let b = random_series(&alg, 5, &mut rng, false);
            let got = a.product(&b).unwrap().to_rats();
            let want = ps::mul(&a.to_rats(), &b.to_rats());
            assert_eq!(got, want);
        }
    }

    #[test]
    fn product_associative_matrix() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_series(&alg, 4, &mut rng, false);
        let b = random_series(&alg, 4, &mut rng, false);
        let c = random_series(&alg, 4, &mut rng, false);
        let left = a.product(&b).unwrap().product(&c).unwrap();
        let right = a.product(&b.product(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn compose_identity_both_sides() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_series(&alg, 3, &mut rng, false);
        let id = MFSeries::identity(&alg, 3);
        assert_eq!(a.compose(&id).unwrap(), a);
        let mut b = random_series(&alg, 3, &mut rng, false);
        b.set_component(0, MultilinearMap::constant(alg.zero()));
        assert_eq!(id.compose(&b).unwrap(), b);
    }

    #[test]
    fn scalar_compose_matches_substitution() {
        // (z + z^2) o (z + z^2) = z + 2z^2 + 2z^3 + z^4
        let f = scalar(&[0, 1, 1, 0, 0]);
        let got = f.compose(&f).unwrap();
        assert_eq!(got, scalar(&[0, 1, 2, 2, 1]));
        // against the Horner oracle on random series
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let alg = Algebra::scalar();
        for _ in 0..10 {
            let a = random_series(&alg, 5, &mut rng, false);
            let mut b = random_series(&alg, 5, &mut rng, false);
            b.set_component(0, MultilinearMap::constant(alg.zero()));
            let got = a.compose(&b).unwrap().to_rats();
            let want = ps::compose(&a.to_rats(), &b.to_rats());
            assert_eq!(got, want);
        }
    }

    #[test]
    fn compose_associative_matrix() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_series(&alg, 4, &mut rng, false);
        let mut b = random_series(&alg, 4, &mut rng, false);
        b.set_component(0, MultilinearMap::constant(alg.zero()));
        let mut c = random_series(&alg, 4, &mut rng, false);
        c.set_component(0, MultilinearMap::constant(alg.zero()));
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn compose_requires_zero_constant_term() {
        let a = scalar(&[1, 1]);
        assert_eq!(a.compose(&a), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn mul_inverse_geometric() {
        // (1, 1, 0, 0, ...)^{-1} = (1, -1, 1, -1, ...)
        let a = scalar(&[1, 1, 0, 0, 0]);
        assert_eq!(a.mul_inverse().unwrap(), scalar(&[1, -1, 1, -1, 1]));
        let one = MFSeries::one(&Algebra::scalar(), 3);
        assert_eq!(one.mul_inverse().unwrap(), one);
    }

    #[test]
    fn mul_inverse_two_sided_matrix() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = random_series(&alg, 4, &mut rng, true);
        let inv = a.mul_inverse().unwrap();
        let one = MFSeries::one(&alg, 4);
        assert_eq!(a.product(&inv).unwrap(), one);
        assert_eq!(inv.product(&a).unwrap(), one);
    }

    #[test]
    fn mul_inverse_singular_constant() {
        let a = scalar(&[0, 1]);
        assert_eq!(
            a.mul_inverse(),
            Err(Error::Singular("constant term of series"))
        );
    }

    #[test]
    fn comp_inverse_identity() {
        let alg = Algebra::matrix(2);
        let id = MFSeries::identity(&alg, 3);
        assert_eq!(id.comp_inverse().unwrap(), id);
    }

    #[test]
    fn comp_inverse_signed_catalan() {
        // (z + z^2)^{<-1>} = z - z^2 + 2z^3 - 5z^4: signed Catalan numbers,
        // cross-checked by the fixed-point iteration g <- z - g^2.
        let f = scalar(&[0, 1, 1, 0, 0]);
        let inv = f.comp_inverse().unwrap();
        assert_eq!(inv, scalar(&[0, 1, -1, 2, -5]));
        let mut g = scalar(&[0, 1, 0, 0, 0]).to_rats();
        let z: Vec<Rat> = scalar(&[0, 1, 0, 0, 0]).to_rats();
        for _ in 0..5 {
            let g2 = ps::mul(&g, &g);
            g = z.iter().zip(&g2).map(|(a, b)| a - b).collect();
        }
        assert_eq!(inv.to_rats(), g);
    }

    #[test]
    fn comp_inverse_round_trip_matrix() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut a = random_series(&alg, 3, &mut rng, false);
        a.set_component(0, MultilinearMap::constant(alg.zero()));
        a.set_component(1, MultilinearMap::identity(&alg));
        let inv = a.comp_inverse().unwrap();
        let id = MFSeries::identity(&alg, 3);
        assert_eq!(a.compose(&inv).unwrap(), id);
        assert_eq!(inv.compose(&a).unwrap(), id);
    }

    #[test]
    fn comp_inverse_rejects_singular_linear_part() {
        let a = scalar(&[0, 0, 1]);
        assert_eq!(a.comp_inverse(), Err(Error::NotCompInvertible));
    }

    #[test]
    fn lower_degree_examples() {
        let alg = Algebra::scalar();
        assert_eq!(MFSeries::identity(&alg, 3).lower_degree(), Some(1));
        assert_eq!(MFSeries::one(&alg, 3).lower_degree(), Some(0));
        assert_eq!(MFSeries::zero(&alg, 3).lower_degree(), None);
    }

    #[test]
    fn lower_degree_product_inequality() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let mut a = random_series(&alg, 4, &mut rng, false);
            let mut b = random_series(&alg, 4, &mut rng, false);
            a.set_component(0, MultilinearMap::constant(alg.zero()));
            b.set_component(0, MultilinearMap::constant(alg.zero()));
            b.set_component(1, MultilinearMap::zero(&alg, 1).unwrap());
            let prod = a.product(&b).unwrap();
            if let (Some(la), Some(lb)) = (a.lower_degree(), b.lower_degree()) {
                if let Some(lp) = prod.lower_degree() {
                    assert!(lp >= la + lb);
                }
            }
        }
    }

    #[test]
    fn distributivity_and_product_compose() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_series(&alg, 3, &mut rng, false);
        let b = random_series(&alg, 3, &mut rng, false);
        let mut g = random_series(&alg, 3, &mut rng, false);
        g.set_component(0, MultilinearMap::constant(alg.zero()));
        let lhs = a.sum(&b).unwrap().compose(&g).unwrap();
        let rhs = a.compose(&g).unwrap().sum(&b.compose(&g).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let lhs = a.product(&b).unwrap().compose(&g).unwrap();
        let rhs = a
            .compose(&g)
            .unwrap()
            .product(&b.compose(&g).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn geometric_series_identity() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut a = random_series(&alg, 4, &mut rng, false);
        a.set_component(0, MultilinearMap::constant(alg.zero()));
        let one = MFSeries::one(&alg, 4);
        let lhs = one.sub(&a).unwrap().mul_inverse().unwrap();
        let mut rhs = one.clone();
        let mut power = one.clone();
        for _ in 1..=4 {
            power = power.product(&a).unwrap();
            rhs = rhs.sum(&power).unwrap();
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_consistency() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let a = random_series(&alg, 4, &mut rng, true);
        let mut b = random_series(&alg, 4, &mut rng, false);
        b.set_component(0, MultilinearMap::constant(alg.zero()));
        for m in 0..4 {
            assert_eq!(
                a.product(&b).unwrap().truncate(m),
                a.truncate(m).product(&b.truncate(m)).unwrap()
            );
            assert_eq!(
                a.compose(&b).unwrap().truncate(m),
                a.truncate(m).compose(&b.truncate(m)).unwrap()
            );
            assert_eq!(
                a.mul_inverse().unwrap().truncate(m),
                a.truncate(m).mul_inverse().unwrap()
            );
        }
        let mut c = random_series(&alg, 4, &mut rng, false);
        c.set_component(0, MultilinearMap::constant(alg.zero()));
        c.set_component(1, MultilinearMap::identity(&alg));
        for m in 0..4 {
            assert_eq!(
                c.comp_inverse().unwrap().truncate(m),
                c.truncate(m).comp_inverse().unwrap()
            );
        }
    }
}
