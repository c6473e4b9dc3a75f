//! Dense complex-matrix ground truth for odd-d stabilizer mechanics.
//!
//! Everything here is floating point and deliberately naive: operators are
//! built entry by entry from the Weyl definitions, never from the exact
//! label algebra, so agreement with the rest of the crate means something.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::epistemic::PhaseSpace;
use crate::error::{Error, Result};
use crate::measurement::SharpMeasurement;
use crate::stabilizer::{from_epistemic, ChiConvention, StabilizerGroup, WeylLabel};
use crate::zmod::ModVector;

/// Tolerance for comparing oracle quantities.
pub const TOLERANCE: f64 = 1e-9;
/// Probabilities at or below this count as zero.
pub const ZERO_PROBABILITY: f64 = 1e-12;
/// Largest Hilbert-space dimension dⁿ the oracle will build (9² yes, 9³ no).
pub const HILBERT_GUARD: u128 = 728;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub space: PhaseSpace,
    pub matrix: DMatrix<Complex64>,
}

fn omega_pow(k: u64, d: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % d) as f64 / d as f64)
}

fn hilbert_dim(space: &PhaseSpace) -> Result<usize> {
    if space.d().is_multiple_of(2) {
        return Err(Error::EvenDimension(space.d()));
    }
    let dim = space.hilbert_dim();
    if dim > HILBERT_GUARD {
        return Err(Error::TooLarge {
            size: dim,
            limit: HILBERT_GUARD,
        });
    }
    Ok(dim as usize)
}

/// Splits a phase-space label into its position and momentum parts.
fn split(a: &ModVector) -> (Vec<u64>, Vec<u64>) {
    a.entries().chunks(2).map(|c| (c[0], c[1])).unzip()
}

/// Nonzero entries of ω^s W(a) as (row, column, value), one per column.
fn weyl_entries(label: &WeylLabel, conv: ChiConvention) -> Result<Vec<(usize, usize, Complex64)>> {
    let d = label.a.modulus();
    let n = label.a.len() / 2;
    let c = conv.coefficient(d)?;
    let (q, p) = split(&label.a);
    let qp: u64 = q.iter().zip(&p).map(|(a, b)| a * b % d).sum::<u64>() % d;
    let prefactor = (label.phase_exp.value() + c * qp) % d;
    let dim = (d as usize).pow(n as u32);
    let mut out = Vec::with_capacity(dim);
    for col in 0..dim {
        let x = ModVector::from_index(d, n, col);
        // B(p)|x⟩ = χ(p·x)|x⟩, then S(q)|x⟩ = |x − q⟩.
        let px: u64 = p.iter().zip(x.entries()).map(|(a, b)| a * b % d).sum::<u64>() % d;
        let target: Vec<u64> = x
            .entries()
            .iter()
            .zip(&q)
            .map(|(xi, qi)| (xi + d - qi) % d)
            .collect();
        let row = ModVector::from_raw(d, target).to_index();
        out.push((row, col, omega_pow(prefactor + px, d)));
    }
    Ok(out)
}

impl DenseOperator {
    pub fn identity(space: PhaseSpace) -> Result<Self> {
        let dim = hilbert_dim(&space)?;
        Ok(DenseOperator {
            space,
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.matrix - self.matrix.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        (&self.matrix * &self.matrix - &self.matrix)
            .iter()
            .all(|z| z.norm() <= tol)
    }

    /// Smallest eigenvalue of a Hermitian operator.
    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Hermitian, positive semidefinite and unit trace.
    pub fn is_density(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && (self.trace() - 1.0).norm() <= tol && self.min_eigenvalue() >= -tol
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub fn weyl_matrix(label: &WeylLabel, conv: ChiConvention) -> Result<DenseOperator> {
    let space = PhaseSpace::new(label.a.modulus(), label.a.len() / 2)?;
    let dim = hilbert_dim(&space)?;
    let mut matrix = DMatrix::zeros(dim, dim);
    for (r, c, z) in weyl_entries(label, conv)? {
        matrix[(r, c)] = z;
    }
    Ok(DenseOperator { space, matrix })
}

/// A(λ) = d^{−n} Σ_λ′ χ(⟨λ, λ′⟩) W(λ′).
pub fn phase_point_operator(space: &PhaseSpace, lambda: &ModVector, conv: ChiConvention) -> Result<DenseOperator> {
    let dim = hilbert_dim(space)?;
    space.check(lambda)?;
    let d = space.d();
    let mut matrix = DMatrix::zeros(dim, dim);
    for idx in 0..space.size() as usize {
        let mu = ModVector::from_index(d, space.dim(), idx);
        let chi = omega_pow(lambda.symplectic(&mu), d);
        for (r, c, z) in weyl_entries(&WeylLabel::new(mu, 0)?, conv)? {
            matrix[(r, c)] += chi * z;
        }
    }
    matrix /= Complex64::from(dim as f64);
    Ok(DenseOperator {
        space: *space,
        matrix,
    })
}

/// (1/|G|) Σ_{g ∈ G} g, the projector onto the joint +1 eigenspace.
pub fn projector_of_group(group: &StabilizerGroup) -> Result<DenseOperator> {
    let space = *group.space();
    let dim = hilbert_dim(&space)?;
    let elements = group.elements()?;
    let mut matrix = DMatrix::zeros(dim, dim);
    for (a, s) in &elements {
        let label = WeylLabel {
            a: a.clone(),
            phase_exp: *s,
        };
        for (r, c, z) in weyl_entries(&label, group.convention())? {
            matrix[(r, c)] += z;
        }
    }
    matrix /= Complex64::from(elements.len() as f64);
    Ok(DenseOperator { space, matrix })
}

/// The stabilizer state: projector normalized to unit trace.
pub fn density_of_group(group: &StabilizerGroup) -> Result<DenseOperator> {
    let mut p = projector_of_group(group)?;
    let tr = p.trace();
    if tr.norm() <= ZERO_PROBABILITY {
        return Err(Error::Inconsistent);
    }
    p.matrix /= tr;
    Ok(p)
}

/// Projector of a measurement element, through its stabilizer group.
pub fn projector_of_element(element: &SharpMeasurement, conv: ChiConvention) -> Result<DenseOperator> {
    projector_of_group(&from_epistemic(&element.as_state()?, conv)?)
}

/// ΠρΠ / Tr[Πρ] together with Tr[Πρ].
pub fn luders(rho: &DenseOperator, proj: &DenseOperator) -> Result<(DenseOperator, f64)> {
    if rho.matrix.shape() != proj.matrix.shape() {
        return Err(Error::DimensionMismatch {
            expected: rho.matrix.nrows(),
            found: proj.matrix.nrows(),
        });
    }
    if !proj.is_hermitian(TOLERANCE) || !proj.is_idempotent(TOLERANCE) {
        return Err(Error::NotProjector);
    }
    let prob = (&proj.matrix * &rho.matrix).trace().re;
    if prob <= ZERO_PROBABILITY {
        return Err(Error::ImpossibleOutcome);
    }
    let post = &proj.matrix * &rho.matrix * &proj.matrix / Complex64::from(prob);
    Ok((
        DenseOperator {
            space: rho.space,
            matrix: post,
        },
        prob,
    ))
}

/// Oracle Wigner function d^{−n} Tr[A(λ)ρ], indexed by `ModVector::to_index`.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleWigner {
    pub space: PhaseSpace,
    pub values: Vec<f64>,
}

impl OracleWigner {
    pub fn get(&self, lambda: &ModVector) -> f64 {
        self.values[lambda.to_index()]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Computed through the characteristic function Tr[W(μ)ρ], which is the
/// same sum as Tr[A(λ)ρ] without materializing every A(λ).
pub fn wigner_of_density(rho: &DenseOperator, conv: ChiConvention) -> Result<OracleWigner> {
    let space = rho.space;
    let dim = hilbert_dim(&space)?;
    let d = space.d();
    let points = space.size() as usize;
    let mut characteristic = Vec::with_capacity(points);
    for idx in 0..points {
        let mu = ModVector::from_index(d, space.dim(), idx);
        let mut tr = Complex64::new(0.0, 0.0);
        for (r, c, z) in weyl_entries(&WeylLabel::new(mu.clone(), 0)?, conv)? {
            tr += z * rho.matrix[(c, r)];
        }
        characteristic.push((mu, tr));
    }
    let norm = (dim * dim) as f64;
    let mut values = Vec::with_capacity(points);
    for idx in 0..points {
        let lambda = ModVector::from_index(d, space.dim(), idx);
        let sum: Complex64 = characteristic
            .iter()
            .map(|(mu, t)| omega_pow(lambda.symplectic(mu), d) * t)
            .sum();
        values.push(sum.re / norm);
    }
    Ok(OracleWigner { space, values })
}
