//! A truncated algebraic Fock space over the base algebra.
//!
//! The space is `B Omega + sum_k (D^(x)k) (x) B` where `D` is a direct sum of
//! copies of `B` labeled by indices `1, 2, ...`. Vectors are stored sparsely:
//! a term is a tensor level, a word of letters `(index, basis element)` and a
//! right slot holding a basis element of `B`, with a rational coefficient.
//!
//! Operators are finite sums of five primitives: the left and right actions
//! of `B`, the creation operator of an index, and the annihilation and
//! transfer operators attached to one multilinear map. Words of operators
//! applied to the vacuum realize conditional expectations, distribution
//! series and the canonical random variables with prescribed distribution.
//! This gives an evaluation path for moment formulas that is independent of
//! the partition sums in [`crate::transforms`].

use std::collections::BTreeMap;

use num::Zero;

use crate::algebra::{Algebra, AlgebraElement};
use crate::mfs::{basis_tuples, MFSeries, MultilinearMap};
use crate::{check_table_size, Error, Rat, Result};

/// A term key: the tensor word (empty at level zero) and the right slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    word: Vec<(usize, usize)>,
    slot: usize,
}

/// A sparse vector in the truncated Fock space. Zero coefficients are never
/// stored; term order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockVector {
    algebra: Algebra,
    cap: usize,
    terms: BTreeMap<Key, Rat>,
}

impl FockVector {
    /// The zero vector.
    pub fn empty(algebra: &Algebra, cap: usize) -> FockVector {
        FockVector {
            algebra: algebra.clone(),
            cap,
            terms: BTreeMap::new(),
        }
    }

    /// The vacuum: the unit of `B` at level zero.
    pub fn vacuum(algebra: &Algebra, cap: usize) -> FockVector {
        let mut v = FockVector::empty(algebra, cap);
        for (j, c) in algebra.unit().coords().iter().enumerate() {
            v.accumulate(
                Key {
                    word: vec![],
                    slot: j,
                },
                c.clone(),
            );
        }
        v
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest populated tensor level.
    pub fn max_level(&self) -> usize {
        self.terms.keys().map(|k| k.word.len()).max().unwrap_or(0)
    }

    fn accumulate(&mut self, key: Key, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &FockVector) -> Result<FockVector> {
        if self.algebra != other.algebra {
            return Err(Error::DescriptorMismatch);
        }
        let mut out = self.clone();
        out.cap = self.cap.min(other.cap);
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c.clone());
        }
        Ok(out)
    }

    /// The level-zero component as an element of `B`.
    pub fn level_zero(&self) -> AlgebraElement {
        let mut coords = vec![Rat::zero(); self.algebra.dim()];
        for (k, c) in &self.terms {
            if k.word.is_empty() {
                coords[k.slot] = c.clone();
            }
        }
        self.algebra
            .element(coords)
            .expect("dimension-many coordinates")
    }

    /// Debug dump: one record per stored term.
    pub fn dump_json(&self) -> serde_json::Value {
        let records: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                serde_json::json!({
                    "level": k.word.len(),
                    "word": k.word.iter().map(|&(i, r)| vec![i, r]).collect::<Vec<_>>(),
                    "slot": k.slot,
                    "coeff": format!("{}/{}", c.numer(), c.denom()),
                })
            })
            .collect();
        serde_json::Value::Array(records)
    }
}

/// One primitive summand of an operator.
#[derive(Debug, Clone)]
enum Primitive {
    /// Left action of an element of `B`.
    Lambda(AlgebraElement),
    /// Right action of an element of `B` (on the right slot).
    Rho(AlgebraElement),
    /// Creation `L_i`: prepend the index vector carrying the unit.
    Creation(usize),
    /// `n`-fold annihilation weighted by a degree-`n` map.
    Annihilation { index: usize, map: MultilinearMap },
    /// `n`-fold annihilation combined with a creation.
    Transfer { index: usize, map: MultilinearMap },
}

/// A finite sum of primitive operators on the Fock space.
#[derive(Debug, Clone)]
pub struct FockOperator {
    algebra: Algebra,
    summands: Vec<Primitive>,
}

impl FockOperator {
    fn from_primitive(algebra: &Algebra, p: Primitive) -> FockOperator {
        FockOperator {
            algebra: algebra.clone(),
            summands: vec![p],
        }
    }

    /// The left action of `b`.
    pub fn lambda(b: AlgebraElement) -> FockOperator {
        let algebra = b.algebra().clone();
        FockOperator::from_primitive(&algebra, Primitive::Lambda(b))
    }

    /// The right action of `b`, commuting with every left action.
    pub fn rho(b: AlgebraElement) -> FockOperator {
        let algebra = b.algebra().clone();
        FockOperator::from_primitive(&algebra, Primitive::Rho(b))
    }

    /// The creation operator of index `i >= 1`.
    pub fn creation(algebra: &Algebra, index: usize) -> FockOperator {
        assert!(index >= 1, "indices are 1-based");
        FockOperator::from_primitive(algebra, Primitive::Creation(index))
    }

    /// A single annihilation summand of degree `map.degree()`; degree 0 is
    /// the left action of the constant.
    pub fn annihilation(index: usize, map: MultilinearMap) -> FockOperator {
        assert!(index >= 1, "indices are 1-based");
        let algebra = map.algebra().clone();
        FockOperator::from_primitive(&algebra, Primitive::Annihilation { index, map })
    }

    /// A single transfer summand; degree 0 is the constant times a creation.
    pub fn transfer(index: usize, map: MultilinearMap) -> FockOperator {
        assert!(index >= 1, "indices are 1-based");
        let algebra = map.algebra().clone();
        FockOperator::from_primitive(&algebra, Primitive::Transfer { index, map })
    }

    /// The full annihilation series of `alpha`: the sum of its per-degree
    /// annihilation operators.
    pub fn annihilation_series(index: usize, alpha: &MFSeries) -> FockOperator {
        let mut op = FockOperator {
            algebra: alpha.algebra().clone(),
            summands: vec![],
        };
        for k in 0..=alpha.order() {
            op.summands.push(Primitive::Annihilation {
                index,
                map: alpha.component(k).clone(),
            });
        }
        op
    }

    /// The full transfer series of `alpha`.
    pub fn transfer_series(index: usize, alpha: &MFSeries) -> FockOperator {
        let mut op = FockOperator {
            algebra: alpha.algebra().clone(),
            summands: vec![],
        };
        for k in 0..=alpha.order() {
            op.summands.push(Primitive::Transfer {
                index,
                map: alpha.component(k).clone(),
            });
        }
        op
    }

    /// The additive canonical variable `L_i + V_i(alpha)`.
    pub fn additive_canonical(index: usize, alpha: &MFSeries) -> FockOperator {
        FockOperator::creation(alpha.algebra(), index)
            .add(&FockOperator::annihilation_series(index, alpha))
            .expect("same algebra")
    }

    /// The multiplicative canonical variable `V_i(alpha) + W_i(alpha)`.
    pub fn multiplicative_canonical(index: usize, alpha: &MFSeries) -> FockOperator {
        FockOperator::annihilation_series(index, alpha)
            .add(&FockOperator::transfer_series(index, alpha))
            .expect("same algebra")
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// Operator sum: concatenates the primitive summands.
    pub fn add(&self, other: &FockOperator) -> Result<FockOperator> {
        if self.algebra != other.algebra {
            return Err(Error::DescriptorMismatch);
        }
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        Ok(FockOperator {
            algebra: self.algebra.clone(),
            summands,
        })
    }

    /// Subtract the left action of `b` (used to center a variable).
    pub fn minus_lambda(&self, b: &AlgebraElement) -> FockOperator {
        let mut out = self.clone();
        out.summands.push(Primitive::Lambda(b.neg()));
        out
    }

    /// Apply to a vector; creation above the cap is an error.
    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.apply_inner(v, false)
    }

    /// Apply, silently discarding creations above the cap.
    pub fn apply_lossy(&self, v: &FockVector) -> Result<FockVector> {
        self.apply_inner(v, true)
    }

    fn apply_inner(&self, v: &FockVector, lossy: bool) -> Result<FockVector> {
        if self.algebra != *v.algebra() {
            return Err(Error::DescriptorMismatch);
        }
        let mut out = FockVector::empty(&self.algebra, v.cap);
        for p in &self.summands {
            apply_primitive(p, v, lossy, &mut out)?;
        }
        Ok(out)
    }
}

fn apply_primitive(p: &Primitive, v: &FockVector, lossy: bool, out: &mut FockVector) -> Result<()> {
    let algebra = v.algebra().clone();
    for (key, coeff) in &v.terms {
        match p {
            Primitive::Lambda(b) => {
                if key.word.is_empty() {
                    let prod = b.mul(&algebra.basis_element(key.slot))?;
                    for (j, c) in prod.coords().iter().enumerate() {
                        out.accumulate(
                            Key {
                                word: vec![],
                                slot: j,
                            },
                            coeff * c,
                        );
                    }
                } else {
                    let (i1, r1) = key.word[0];
                    let prod = b.mul(&algebra.basis_element(r1))?;
                    for (s, c) in prod.coords().iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut word = key.word.clone();
                        word[0] = (i1, s);
                        out.accumulate(
                            Key {
                                word,
                                slot: key.slot,
                            },
                            coeff * c,
                        );
                    }
                }
            }
            Primitive::Rho(b) => {
                let prod = algebra.basis_element(key.slot).mul(b)?;
                for (j, c) in prod.coords().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    out.accumulate(
                        Key {
                            word: key.word.clone(),
                            slot: j,
                        },
                        coeff * c,
                    );
                }
            }
            Primitive::Creation(i) => {
                if key.word.len() + 1 > v.cap {
                    if lossy {
                        continue;
                    }
                    return Err(Error::CapExceeded {
                        level: key.word.len() + 1,
                        cap: v.cap,
                    });
                }
                for (s, c) in algebra.unit().coords().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut word = Vec::with_capacity(key.word.len() + 1);
                    word.push((*i, s));
                    word.extend_from_slice(&key.word);
                    out.accumulate(
                        Key {
                            word,
                            slot: key.slot,
                        },
                        coeff * c,
                    );
                }
            }
            Primitive::Annihilation { index, map } => {
                let n = map.degree();
                let k = key.word.len();
                if k < n || key.word[..n].iter().any(|&(i, _)| i != *index) {
                    continue;
                }
                let tuple: Vec<usize> = key.word[..n].iter().map(|&(_, r)| r).collect();
                let value = map.entry(&tuple);
                if value.is_zero() {
                    continue;
                }
                if k == n {
                    let prod = value.mul(&algebra.basis_element(key.slot))?;
                    for (j, c) in prod.coords().iter().enumerate() {
                        out.accumulate(
                            Key {
                                word: vec![],
                                slot: j,
                            },
                            coeff * c,
                        );
                    }
                } else {
                    let (i2, r2) = key.word[n];
                    let prod = value.mul(&algebra.basis_element(r2))?;
                    for (s, c) in prod.coords().iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut word = Vec::with_capacity(k - n);
                        word.push((i2, s));
                        word.extend_from_slice(&key.word[n + 1..]);
                        out.accumulate(
                            Key {
                                word,
                                slot: key.slot,
                            },
                            coeff * c,
                        );
                    }
                }
            }
            Primitive::Transfer { index, map } => {
                let n = map.degree();
                let k = key.word.len();
                if k < n || key.word[..n].iter().any(|&(i, _)| i != *index) {
                    continue;
                }
                let new_level = k - n + 1;
                if new_level > v.cap {
                    if lossy {
                        continue;
                    }
                    return Err(Error::CapExceeded {
                        level: new_level,
                        cap: v.cap,
                    });
                }
                let tuple: Vec<usize> = key.word[..n].iter().map(|&(_, r)| r).collect();
                let value = map.entry(&tuple);
                if value.is_zero() {
                    continue;
                }
                for (s, c) in value.coords().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut word = Vec::with_capacity(new_level);
                    word.push((*index, s));
                    word.extend_from_slice(&key.word[n..]);
                    out.accumulate(
                        Key {
                            word,
                            slot: key.slot,
                        },
                        coeff * c,
                    );
                }
            }
        }
    }
    Ok(())
}

/// Expectation of a product of operators: apply the word right-to-left to
/// the vacuum and project to level zero.
pub fn expectation_word(word: &[FockOperator], cap: usize) -> Result<AlgebraElement> {
    let algebra = word
        .first()
        .map(|op| op.algebra().clone())
        .ok_or(Error::ArityMismatch {
            expected: 1,
            got: 0,
        })?;
    let mut v = FockVector::vacuum(&algebra, cap);
    for op in word.iter().rev() {
        v = op.apply(&v)?;
    }
    Ok(v.level_zero())
}

/// Expectation of the alternating word `ops[0] b[0] ops[1] b[1] ... ops[m]`,
/// with the separators acting from the left.
pub fn expectation(
    ops: &[FockOperator],
    seps: &[AlgebraElement],
    cap: usize,
) -> Result<AlgebraElement> {
    if ops.len() != seps.len() + 1 {
        return Err(Error::ArityMismatch {
            expected: seps.len() + 1,
            got: ops.len(),
        });
    }
    let mut word: Vec<FockOperator> = Vec::with_capacity(2 * ops.len() - 1);
    for (i, op) in ops.iter().enumerate() {
        if i > 0 {
            word.push(FockOperator::lambda(seps[i - 1].clone()));
        }
        word.push(op.clone());
    }
    expectation_word(&word, cap)
}

/// Degree-`n` moment table of a product `z = ops[0] ... ops[last]`:
/// the multilinear map `(b_1, ..., b_n) -> E(z b_1 z ... b_n z)` on basis
/// tuples. The cap is `(n + 1) * ops.len()`, the largest level the word can
/// populate, so no creation is ever truncated.
pub fn moment_table(ops: &[FockOperator], n: usize) -> Result<MultilinearMap> {
    let algebra = ops
        .first()
        .map(|op| op.algebra().clone())
        .ok_or(Error::ArityMismatch {
            expected: 1,
            got: 0,
        })?;
    check_table_size(algebra.dim(), n)?;
    let cap = (n + 1) * ops.len();
    let mut values = Vec::with_capacity(algebra.dim().pow(n as u32));
    for tuple in basis_tuples(algebra.dim(), n) {
        let mut word: Vec<FockOperator> = Vec::with_capacity((n + 1) * ops.len() + n);
        word.extend(ops.iter().cloned());
        for &t in &tuple {
            word.push(FockOperator::lambda(algebra.basis_element(t)));
            word.extend(ops.iter().cloned());
        }
        values.push(expectation_word(&word, cap)?);
    }
    MultilinearMap::from_values(&algebra, n, values)
}

/// The distribution series of a product of operators, up to the given
/// order.
pub fn distribution_series(ops: &[FockOperator], order: usize) -> Result<MFSeries> {
    let mut components = Vec::with_capacity(order + 1);
    for n in 0..=order {
        components.push(moment_table(ops, n)?);
    }
    MFSeries::from_components(components)
}

/// The series `alpha` whose additive canonical variable `L_1 + V_1(alpha)`
/// has the prescribed distribution series: degree `n` is fixed by
/// subtracting the order-`n` moments of the variable built from the first
/// `n` components.
pub fn canonical_additive(beta: &MFSeries) -> MFSeries {
    let algebra = beta.algebra().clone();
    let mut alpha =
        MFSeries::from_components(vec![MultilinearMap::constant(beta.constant_term().clone())])
            .expect("single component");
    for n in 1..=beta.order() {
        let x_prev = FockOperator::additive_canonical(1, &alpha);
        let lower =
            moment_table(std::slice::from_ref(&x_prev), n).expect("cap covers every creation");
        let next = beta.component(n).sub(&lower).expect("same algebra");
        alpha.push_component(next);
    }
    let _ = algebra;
    alpha
}

/// The series `alpha` whose multiplicative canonical variable
/// `V_1(alpha) + W_1(alpha)` has the prescribed distribution series;
/// requires an invertible constant term. The degree-`n` recursion determines
/// `alpha_n` on arguments `b_j alpha_0`, so each slot is composed with
/// `alpha_0^{-1}` to recover the table.
pub fn canonical_multiplicative(beta: &MFSeries) -> Result<MFSeries> {
    let algebra = beta.algebra().clone();
    let a0 = beta.constant_term().clone();
    let a0_inv = a0
        .invert()
        .map_err(|_| Error::Singular("constant term of series"))?;
    let mut alpha =
        MFSeries::from_components(vec![MultilinearMap::constant(a0)]).expect("single component");
    for n in 1..=beta.order() {
        let y_prev = FockOperator::multiplicative_canonical(1, &alpha);
        let lower = moment_table(std::slice::from_ref(&y_prev), n)?;
        let g = beta.component(n).sub(&lower)?;
        let next = MultilinearMap::from_fn(&algebra, n, |tuple| {
            let args: Vec<AlgebraElement> = tuple
                .iter()
                .map(|&t| algebra.basis_element(t).mul(&a0_inv).expect("same algebra"))
                .collect();
            g.eval(&args).expect("n arguments")
        })?;
        alpha.push_component(next);
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_element, random_series};
    use crate::{rat, rat_int};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn creation_on_vacuum() {
        let alg = Algebra::scalar();
        let v = FockVector::vacuum(&alg, 2);
        let l1 = FockOperator::creation(&alg, 1);
        let got = l1.apply(&v).unwrap();
        let mut want = FockVector::empty(&alg, 2);
        want.accumulate(
            Key {
                word: vec![(1, 0)],
                slot: 0,
            },
            rat_int(1),
        );
        assert_eq!(got, want);
        assert!(got.level_zero().is_zero());
    }

    #[test]
    fn annihilation_inverts_creation() {
        // V(1,1,a_1) applied to the level-1 vector created from the vacuum
        // returns a_1(unit) at level zero.
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let s = random_series(&alg, 1, &mut rng, false);
        let a1 = s.component(1).clone();
        let v = FockOperator::creation(&alg, 1)
            .apply(&FockVector::vacuum(&alg, 2))
            .unwrap();
        let got = FockOperator::annihilation(1, a1.clone()).apply(&v).unwrap();
        assert_eq!(got.level_zero(), a1.eval(&[alg.unit()]).unwrap());
        assert_eq!(got.max_level(), 0);
    }

    #[test]
    fn annihilation_ignores_other_indices() {
        let alg = Algebra::scalar();
        let v = FockOperator::creation(&alg, 2)
            .apply(&FockVector::vacuum(&alg, 2))
            .unwrap();
        let a1 = MultilinearMap::identity(&alg);
        let got = FockOperator::annihilation(1, a1).apply(&v).unwrap();
        assert!(got.is_zero());
    }

    #[test]
    fn dump_records_levels_words_and_slots() {
        let alg = Algebra::scalar();
        let v = FockOperator::creation(&alg, 1)
            .apply(&FockVector::vacuum(&alg, 2))
            .unwrap();
        let dump = v.dump_json();
        assert_eq!(
            serde_json::to_string(&dump).unwrap(),
            r#"[{"coeff":"1/1","level":1,"slot":0,"word":[[1,0]]}]"#
        );
    }

    #[test]
    fn lambda_rho_commute() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let b1 = random_element(&alg, &mut rng);
        let b2 = random_element(&alg, &mut rng);
        // a random two-level vector
        let mut v = FockVector::empty(&alg, 3);
        for _ in 0..6 {
            let key = Key {
                word: vec![
                    (1 + (rng.gen_range(0..2)), rng.gen_range(0..4)),
                    (1, rng.gen_range(0..4)),
                ],
                slot: rng.gen_range(0..4),
            };
            v.accumulate(key, crate::sample::random_rat(&mut rng));
        }
        let lambda = FockOperator::lambda(b1);
        let rho = FockOperator::rho(b2);
        let lr = rho.apply(&lambda.apply(&v).unwrap()).unwrap();
        let rl = lambda.apply(&rho.apply(&v).unwrap()).unwrap();
        assert_eq!(lr, rl);
    }

    #[test]
    fn expectation_examples() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let b = random_element(&alg, &mut rng);
        // E(lambda(b)) = b
        assert_eq!(
            expectation_word(&[FockOperator::lambda(b.clone())], 1).unwrap(),
            b
        );
        // E(L_1) = 0
        assert!(expectation_word(&[FockOperator::creation(&alg, 1)], 1)
            .unwrap()
            .is_zero());
        // E(V(1,0,a0) b V(1,0,a0)) = a0 b a0
        let a0 = random_element(&alg, &mut rng);
        let v0 = FockOperator::annihilation(1, MultilinearMap::constant(a0.clone()));
        let got = expectation(&[v0.clone(), v0], std::slice::from_ref(&b), 1).unwrap();
        assert_eq!(got, a0.mul(&b).unwrap().mul(&a0).unwrap());
    }

    #[test]
    fn conditional_expectation_property() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let alpha = random_series(&alg, 2, &mut rng, false);
        let x = FockOperator::additive_canonical(1, &alpha);
        let b1 = random_element(&alg, &mut rng);
        let b2 = random_element(&alg, &mut rng);
        let cap = 4;
        let middle = expectation_word(std::slice::from_ref(&x), cap).unwrap();
        let sandwich = expectation_word(
            &[
                FockOperator::lambda(b1.clone()),
                x,
                FockOperator::lambda(b2.clone()),
            ],
            cap,
        )
        .unwrap();
        assert_eq!(sandwich, b1.mul(&middle).unwrap().mul(&b2).unwrap());
    }

    /// The canonical variables commute with the right action, which is the
    /// premise under which expectations behave conditionally.
    #[test]
    fn canonical_variables_commute_with_rho() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        let alpha = random_series(&alg, 2, &mut rng, true);
        let rho = FockOperator::rho(random_element(&alg, &mut rng));
        let mut v = FockVector::vacuum(&alg, 4);
        for _ in 0..2 {
            v = FockOperator::creation(&alg, 1).apply(&v).unwrap();
            v = FockOperator::lambda(random_element(&alg, &mut rng))
                .apply(&v)
                .unwrap();
        }
        for op in [
            FockOperator::additive_canonical(1, &alpha),
            FockOperator::multiplicative_canonical(1, &alpha),
        ] {
            let or = op.apply(&rho.apply(&v).unwrap()).unwrap();
            let ro = rho.apply(&op.apply(&v).unwrap()).unwrap();
            assert_eq!(or, ro);
        }
    }

    #[test]
    fn distribution_of_left_multiplication() {
        // The distribution series of lambda(b) has components
        // (b, b b_1 b, b b_1 b b_2 b, ...).
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let b = random_element(&alg, &mut rng);
        let series = distribution_series(&[FockOperator::lambda(b.clone())], 2).unwrap();
        assert_eq!(series.constant_term(), &b);
        let want1 = MultilinearMap::from_fn(&alg, 1, |t| {
            b.mul(&alg.basis_element(t[0])).unwrap().mul(&b).unwrap()
        })
        .unwrap();
        assert_eq!(series.component(1), &want1);
        let want2 = MultilinearMap::from_fn(&alg, 2, |t| {
            b.mul(&alg.basis_element(t[0]))
                .unwrap()
                .mul(&b)
                .unwrap()
                .mul(&alg.basis_element(t[1]))
                .unwrap()
                .mul(&b)
                .unwrap()
        })
        .unwrap();
        assert_eq!(series.component(2), &want2);
    }

    #[test]
    fn cap_exceeded_is_detected() {
        let alg = Algebra::scalar();
        let v = FockVector::vacuum(&alg, 1);
        let l1 = FockOperator::creation(&alg, 1);
        let lifted = l1.apply(&v).unwrap();
        assert_eq!(
            l1.apply(&lifted),
            Err(Error::CapExceeded { level: 2, cap: 1 })
        );
        assert!(l1.apply_lossy(&lifted).unwrap().is_zero());
    }

    #[test]
    fn additive_canonical_round_trip() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let beta = random_series(&alg, 3, &mut rng, false);
        let alpha = canonical_additive(&beta);
        // first components match the degree-one unrolling
        assert_eq!(alpha.constant_term(), beta.constant_term());
        let a0 = beta.constant_term();
        let want1 = MultilinearMap::from_fn(&alg, 1, |t| {
            let b = alg.basis_element(t[0]);
            beta.component(1)
                .eval(std::slice::from_ref(&b))
                .unwrap()
                .sub(&a0.mul(&b).unwrap().mul(a0).unwrap())
                .unwrap()
        })
        .unwrap();
        assert_eq!(alpha.component(1), &want1);
        let x = FockOperator::additive_canonical(1, &alpha);
        let got = distribution_series(&[x], 3).unwrap();
        assert_eq!(got, beta);
    }

    #[test]
    fn multiplicative_canonical_round_trip() {
        let alg = Algebra::matrix(2);
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let beta = random_series(&alg, 3, &mut rng, true);
        let alpha = canonical_multiplicative(&beta).unwrap();
        let y = FockOperator::multiplicative_canonical(1, &alpha);
        let got = distribution_series(&[y], 3).unwrap();
        assert_eq!(got, beta);
    }

    #[test]
    fn multiplicative_canonical_scalar_coefficients() {
        // alpha_0 = m_1 and alpha_1 = m_2 / m_1 - m_1 for the scalar
        // moment sequence (m_1, m_2, ...).
        let beta = MFSeries::from_rats(&[rat(3, 2), rat(2, 1), rat(1, 3)]);
        let alpha = canonical_multiplicative(&beta).unwrap();
        let coeffs = alpha.to_rats();
        assert_eq!(coeffs[0], rat(3, 2));
        assert_eq!(coeffs[1], rat(2, 1) / rat(3, 2) - rat(3, 2));
    }

    #[test]
    fn multiplicative_canonical_requires_invertible_constant() {
        let beta = MFSeries::from_rats(&[rat(0, 1), rat(1, 1)]);
        assert_eq!(
            canonical_multiplicative(&beta),
            Err(Error::Singular("constant term of series"))
        );
    }

    #[test]
    fn distribution_of_unit_left_multiplication_has_trivial_canonical() {
        let alg = Algebra::matrix(2);
        let beta = distribution_series(&[FockOperator::lambda(alg.unit())], 3).unwrap();
        let alpha = canonical_multiplicative(&beta).unwrap();
        let mut want = MFSeries::zero(&alg, 3);
        want.set_component(0, MultilinearMap::constant(alg.unit()));
        assert_eq!(alpha, want);
    }

    use rand::Rng;
}
