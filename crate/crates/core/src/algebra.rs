//! The base algebra `B`: a finite-dimensional unital algebra over the exact
//! rationals, presented by structure constants `e_i e_j = sum_k c[i][j][k] e_k`.
//!
//! Two kinds are provided: the rationals themselves (`dim = 1`) and the full
//! `m x m` matrix algebra (`dim = m^2`, basis the matrix units `E_{ab}` with
//! `E_{ab} E_{cd} = delta_{bc} E_{ad}`). The matrix kind supplies a genuinely
//! noncommutative coefficient algebra for tests.

use std::fmt;
use std::sync::Arc;

use num::{One, Zero};

use crate::{linalg, Error, Rat, Result};

/// Which algebra is being described.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    /// The rationals; one-dimensional.
    Scalar,
    /// Full matrix algebra of the given size; dimension is the square.
    Matrix(usize),
}

#[derive(Debug)]
struct AlgebraData {
    kind: AlgebraKind,
    dim: usize,
    /// Flat `c[i][j][k]` at index `(i * dim + j) * dim + k`.
    structure: Vec<Rat>,
    unit: Vec<Rat>,
}

/// A unital algebra over the rationals given by structure constants.
///
/// Cheap to clone; equality is by kind.
#[derive(Clone)]
pub struct Algebra(Arc<AlgebraData>);

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({:?})", self.0.kind)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.0.kind == other.0.kind
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// The one-dimensional algebra of rationals.
    pub fn scalar() -> Algebra {
        Algebra(Arc::new(AlgebraData {
            kind: AlgebraKind::Scalar,
            dim: 1,
            structure: vec![Rat::one()],
            unit: vec![Rat::one()],
        }))
    }

    /// The full `m x m` matrix algebra over the rationals, `m >= 1`.
    ///
    /// Basis index for the matrix unit `E_{ab}` is `a * m + b` (zero-based).
    pub fn matrix(m: usize) -> Algebra {
        assert!(m >= 1, "matrix algebra needs m >= 1");
        let dim = m * m;
        let mut structure = vec![Rat::zero(); dim * dim * dim];
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        if b == c {
                            let i = a * m + b;
                            let j = c * m + d;
                            let k = a * m + d;
                            structure[(i * dim + j) * dim + k] = Rat::one();
                        }
                    }
                }
            }
        }
        let mut unit = vec![Rat::zero(); dim];
        for a in 0..m {
            unit[a * m + a] = Rat::one();
        }
        Algebra(Arc::new(AlgebraData {
            kind: AlgebraKind::Matrix(m),
            dim,
            structure,
            unit,
        }))
    }

    /// Build the algebra of the given kind.
    pub fn new(kind: AlgebraKind) -> Algebra {
        match kind {
            AlgebraKind::Scalar => Algebra::scalar(),
            AlgebraKind::Matrix(m) => Algebra::matrix(m),
        }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.0.kind
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Structure constants `c[i][j][.]` as a slice of length `dim`.
    pub(crate) fn basis_product(&self, i: usize, j: usize) -> &[Rat] {
        let d = self.0.dim;
        &self.0.structure[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// The multiplicative identity.
    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            coords: self.0.unit.clone(),
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            coords: vec![Rat::zero(); self.0.dim],
        }
    }

    /// The basis element `e_i` (zero-based index).
    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        assert!(i < self.0.dim);
        let mut coords = vec![Rat::zero(); self.0.dim];
        coords[i] = Rat::one();
        AlgebraElement {
            algebra: self.clone(),
            coords,
        }
    }

    /// An element from coordinates relative to the basis.
    pub fn element(&self, coords: Vec<Rat>) -> Result<AlgebraElement> {
        if coords.len() != self.0.dim {
            return Err(Error::ArityMismatch {
                expected: self.0.dim,
                got: coords.len(),
            });
        }
        Ok(AlgebraElement {
            algebra: self.clone(),
            coords,
        })
    }

    /// For the scalar algebra, an element from a single rational.
    pub fn from_rat(&self, value: Rat) -> Result<AlgebraElement> {
        self.element(vec![value])
    }
}

/// A coordinate vector in an [`Algebra`].
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    algebra: Algebra,
    coords: Vec<Rat>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    /// For the scalar algebra, the single coordinate.
    pub fn as_rat(&self) -> &Rat {
        assert_eq!(self.algebra.dim(), 1, "as_rat needs the scalar algebra");
        &self.coords[0]
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords,
        })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords,
        })
    }

    pub fn neg(&self) -> AlgebraElement {
        let coords = self.coords.iter().map(|a| -a).collect();
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords,
        }
    }

    pub fn scale(&self, factor: &Rat) -> AlgebraElement {
        let coords = self.coords.iter().map(|a| a * factor).collect();
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords,
        }
    }

    /// Bilinear product via the structure constants.
    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(other)?;
        let d = self.algebra.dim();
        let mut coords = vec![Rat::zero(); d];
        for (i, xi) in self.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in other.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let factor = xi * yj;
                for (k, c) in self.algebra.basis_product(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        coords[k] += &factor * c;
                    }
                }
            }
        }
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords,
        })
    }

    /// Two-sided inverse, obtained by solving the left-multiplication system
    /// exactly and verifying the right-inverse equation.
    pub fn invert(&self) -> Result<AlgebraElement> {
        let d = self.algebra.dim();
        // m[k][j] = coefficient of e_k in x * e_j
        let mut m = vec![vec![Rat::zero(); d]; d];
        for (i, xi) in self.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..d {
                for (k, c) in self.algebra.basis_product(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        m[k][j] += xi * c;
                    }
                }
            }
        }
        let unit = self.algebra.unit();
        let y = linalg::solve(&m, unit.coords()).ok_or(Error::Singular("algebra element"))?;
        let candidate = AlgebraElement {
            algebra: self.algebra.clone(),
            coords: y,
        };
        if candidate.mul(self)? != unit {
            return Err(Error::Singular("algebra element"));
        }
        Ok(candidate)
    }

    fn check(&self, other: &AlgebraElement) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }
}
