//! Exact linear algebra over the residue ring Z_d, for any modulus d ≥ 2.
//!
//! Spans are stored in Howell normal form, which is the unique canonical
//! generator matrix for a submodule of Z_d^m even when d has zero divisors.
//! Two [`Submodule`]s are therefore equal exactly when their spans are.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Default ceiling on the number of elements [`Submodule::enumerate_elements`]
/// is willing to materialize.
pub const DEFAULT_ENUMERATION_GUARD: u128 = 1_000_000;

fn check_modulus(modulus: u64) -> Result<()> {
    if modulus < 2 {
        return Err(Error::InvalidModulus(modulus));
    }
    Ok(())
}

fn reduce_signed(value: i64, modulus: u64) -> u64 {
    value.rem_euclid(modulus as i64) as u64
}

fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

/// Inverse of `a` modulo `modulus`, if it exists.
pub fn inverse_mod(a: u64, modulus: u64) -> Option<u64> {
    if modulus == 1 {
        return Some(0);
    }
    let egcd = (a as i128 % modulus as i128).extended_gcd(&(modulus as i128));
    if egcd.gcd != 1 {
        return None;
    }
    Some(egcd.x.rem_euclid(modulus as i128) as u64)
}

/// A unit `u` of Z_modulus with `u * a ≡ gcd(a, modulus)`.
fn normalizing_unit(a: u64, modulus: u64) -> u64 {
    let g = a.gcd(&modulus);
    let reduced_mod = modulus / g;
    let base = inverse_mod((a / g) % reduced_mod, reduced_mod).unwrap_or(0);
    (0..g)
        .map(|k| base + k * reduced_mod)
        .find(|c| c.gcd(&modulus) == 1)
        .expect("a unit lift always exists")
        % modulus
}

/// An element of Z_d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

#[allow(clippy::should_implement_trait)]
impl Residue {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Residue {
            value: reduce_signed(value, modulus),
            modulus,
        })
    }

    pub(crate) fn from_reduced(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        Residue { value, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        Residue::from_reduced((self.value + other.value) % self.modulus, self.modulus)
    }

    pub fn sub(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        Residue::from_reduced(
            (self.value + self.modulus - other.value) % self.modulus,
            self.modulus,
        )
    }

    pub fn mul(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        Residue::from_reduced(mul_mod(self.value, other.value, self.modulus), self.modulus)
    }

    pub fn neg(self) -> Residue {
        Residue::from_reduced((self.modulus - self.value) % self.modulus, self.modulus)
    }

    pub fn inverse(self) -> Option<Residue> {
        inverse_mod(self.value, self.modulus).map(|v| Residue::from_reduced(v, self.modulus))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A fixed-length vector over Z_d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModVector {
    modulus: u64,
    entries: Vec<u64>,
}

impl ModVector {
    /// Builds a vector from signed entries, reducing each one mod `modulus`.
    pub fn new<I>(modulus: u64, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        check_modulus(modulus)?;
        Ok(ModVector {
            modulus,
            entries: entries
                .into_iter()
                .map(|e| reduce_signed(e, modulus))
                .collect(),
        })
    }

    pub fn from_unsigned<I>(modulus: u64, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        check_modulus(modulus)?;
        Ok(ModVector {
            modulus,
            entries: entries.into_iter().map(|e| e % modulus).collect(),
        })
    }

    pub(crate) fn from_raw(modulus: u64, entries: Vec<u64>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < modulus));
        ModVector { modulus, entries }
    }

    pub fn zeros(modulus: u64, len: usize) -> Self {
        ModVector {
            modulus,
            entries: vec![0; len],
        }
    }

    /// The `index`-th standard basis vector.
    pub fn unit(modulus: u64, len: usize, index: usize) -> Self {
        let mut v = ModVector::zeros(modulus, len);
        v.entries[index] = 1 % modulus;
        v
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Residue {
        Residue::from_reduced(self.entries[index], self.modulus)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub(crate) fn check_compatible(&self, other: &ModVector) -> Result<()> {
        if self.modulus != other.modulus || self.len() != other.len() {
            return Err(Error::MixedModulus {
                expected: self.modulus,
                len: self.len(),
                found: other.modulus,
                found_len: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ModVector) -> ModVector {
        debug_assert!(self.check_compatible(other).is_ok());
        let d = self.modulus;
        ModVector::from_raw(
            d,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + b) % d)
                .collect(),
        )
    }

    pub fn sub(&self, other: &ModVector) -> ModVector {
        debug_assert!(self.check_compatible(other).is_ok());
        let d = self.modulus;
        ModVector::from_raw(
            d,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + d - b) % d)
                .collect(),
        )
    }

    pub fn neg(&self) -> ModVector {
        let d = self.modulus;
        ModVector::from_raw(d, self.entries.iter().map(|a| (d - a) % d).collect())
    }

    pub fn scale(&self, k: u64) -> ModVector {
        let d = self.modulus;
        ModVector::from_raw(d, self.entries.iter().map(|&a| mul_mod(a, k, d)).collect())
    }

    /// Euclidean pairing `aᵀb mod d`.
    pub fn dot(&self, other: &ModVector) -> u64 {
        debug_assert!(self.check_compatible(other).is_ok());
        let d = self.modulus as u128;
        (self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a as u128 * b as u128 % d)
            .sum::<u128>()
            % d) as u64
    }

    /// Symplectic pairing `aᵀJb mod d` with `J = ⊕ [[0, 1], [-1, 0]]` acting
    /// on consecutive `(x, p)` pairs.
    pub fn symplectic(&self, other: &ModVector) -> u64 {
        debug_assert!(self.check_compatible(other).is_ok());
        debug_assert!(self.len().is_multiple_of(2));
        let d = self.modulus as u128;
        let mut acc: u128 = 0;
        for (a, b) in self.entries.chunks(2).zip(other.entries.chunks(2)) {
            acc += a[0] as u128 * b[1] as u128 % d;
            acc += (d - a[1] as u128 * b[0] as u128 % d) % d;
        }
        (acc % d) as u64
    }

    /// `J v`, mapping each `(x, p)` pair to `(p, -x)`.
    pub fn apply_j(&self) -> ModVector {
        let d = self.modulus;
        let mut out = Vec::with_capacity(self.len());
        for pair in self.entries.chunks(2) {
            out.push(pair[1]);
            out.push((d - pair[0]) % d);
        }
        ModVector::from_raw(d, out)
    }

    /// `J⁻¹ v = -J v`, mapping each `(x, p)` pair to `(-p, x)`.
    pub fn apply_j_inverse(&self) -> ModVector {
        self.apply_j().neg()
    }

    /// Additive order of the vector in Z_d^m.
    pub fn order(&self) -> u64 {
        let g = self
            .entries
            .iter()
            .fold(self.modulus, |acc, &e| acc.gcd(&e));
        self.modulus / g
    }

    /// Mixed-radix index with the first entry most significant.
    pub fn to_index(&self) -> usize {
        self.entries
            .iter()
            .fold(0usize, |acc, &e| acc * self.modulus as usize + e as usize)
    }

    pub fn from_index(modulus: u64, len: usize, mut index: usize) -> ModVector {
        let mut entries = vec![0u64; len];
        for slot in entries.iter_mut().rev() {
            *slot = (index % modulus as usize) as u64;
            index /= modulus as usize;
        }
        ModVector::from_raw(modulus, entries)
    }
}

impl fmt::Display for ModVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Which bilinear form a complement is taken against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Euclidean,
    Symplectic,
}

/// A submodule of Z_d^m, held as its Howell normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    modulus: u64,
    ambient: usize,
    rows: Vec<ModVector>,
}

fn pivot_of(row: &[u64]) -> Option<(usize, u64)> {
    row.iter()
        .enumerate()
        .find(|(_, &e)| e != 0)
        .map(|(i, &e)| (i, e))
}

/// Howell normal form of the row span, as raw rows.
fn howell_rows(modulus: u64, width: usize, rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let n = modulus;
    let mut rows: Vec<Vec<u64>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|&e| e != 0))
        .collect();
    let mut r = 0usize;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if rows[i][col] == 0 {
                continue;
            }
            let a = rows[r][col] as i128;
            let b = rows[i][col] as i128;
            let eg = a.extended_gcd(&b);
            let (s, t) = (eg.x, eg.y);
            let (u, v) = (-(b / eg.gcd), a / eg.gcd);
            let nn = n as i128;
            let (top, bottom): (Vec<u64>, Vec<u64>) = rows[r]
                .iter()
                .zip(&rows[i])
                .map(|(&x, &y)| {
                    let (x, y) = (x as i128, y as i128);
                    (
                        (s * x + t * y).rem_euclid(nn) as u64,
                        (u * x + v * y).rem_euclid(nn) as u64,
                    )
                })
                .unzip();
            rows[r] = top;
            rows[i] = bottom;
        }
        let unit = normalizing_unit(rows[r][col], n);
        for e in rows[r].iter_mut() {
            *e = mul_mod(*e, unit, n);
        }
        let pivot = rows[r][col];
        for i in 0..r {
            let q = rows[i][col] / pivot;
            if q != 0 {
                let pivot_row = rows[r].clone();
                for (e, pe) in rows[i].iter_mut().zip(&pivot_row) {
                    *e = (*e + n - mul_mod(q, *pe, n)) % n;
                }
            }
        }
        let ann = n / pivot;
        let extra: Vec<u64> = rows[r].iter().map(|&e| mul_mod(e, ann, n)).collect();
        if extra.iter().any(|&e| e != 0) {
            rows.push(extra);
        }
        r += 1;
    }
    rows.truncate(r);
    debug_assert!(rows.iter().all(|row| row.iter().any(|&e| e != 0)));
    rows
}

/// Euclidean kernel `{x ∈ Z_d^width : rᵀx = 0 for every r in rows}`.
fn kernel_rows(modulus: u64, width: usize, rows: &[&[u64]]) -> Vec<Vec<u64>> {
    let k = rows.len();
    let augmented: Vec<Vec<u64>> = (0..width)
        .map(|i| {
            let mut row: Vec<u64> = rows.iter().map(|r| r[i]).collect();
            row.extend((0..width).map(|j| u64::from(i == j) % modulus));
            row
        })
        .collect();
    howell_rows(modulus, k + width, augmented)
        .into_iter()
        .filter(|row| row[..k].iter().all(|&e| e == 0))
        .map(|row| row[k..].to_vec())
        .collect()
}

impl Submodule {
    /// Canonical (Howell) form of the span of `rows` inside Z_modulus^ambient.
    pub fn howell_form(modulus: u64, ambient: usize, rows: &[ModVector]) -> Result<Submodule> {
        check_modulus(modulus)?;
        for row in rows {
            if row.modulus() != modulus || row.len() != ambient {
                return Err(Error::MixedModulus {
                    expected: modulus,
                    len: ambient,
                    found: row.modulus(),
                    found_len: row.len(),
                });
            }
        }
        let raw = rows.iter().map(|r| r.entries.clone()).collect();
        Ok(Submodule::from_raw_rows(modulus, ambient, raw))
    }

    /// Canonical span of `rows`, taking modulus and length from the first row.
    pub fn span(rows: &[ModVector]) -> Result<Submodule> {
        let first = rows.first().ok_or(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
        Submodule::howell_form(first.modulus(), first.len(), rows)
    }

    fn from_raw_rows(modulus: u64, ambient: usize, raw: Vec<Vec<u64>>) -> Submodule {
        let rows = howell_rows(modulus, ambient, raw)
            .into_iter()
            .map(|r| ModVector::from_raw(modulus, r))
            .collect();
        Submodule {
            modulus,
            ambient,
            rows,
        }
    }

    pub fn zero(modulus: u64, ambient: usize) -> Submodule {
        Submodule {
            modulus,
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(modulus: u64, ambient: usize) -> Submodule {
        Submodule {
            modulus,
            ambient,
            rows: (0..ambient)
                .map(|i| ModVector::unit(modulus, ambient, i))
                .collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// The Howell-form generator rows.
    pub fn rows(&self) -> &[ModVector] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of elements, read off the pivots of the Howell form.
    pub fn size(&self) -> u128 {
        self.rows
            .iter()
            .map(|r| {
                let (_, p) = pivot_of(&r.entries).expect("Howell rows are nonzero");
                (self.modulus / p) as u128
            })
            .product()
    }

    fn check_vector(&self, v: &ModVector) -> Result<()> {
        if v.modulus() != self.modulus || v.len() != self.ambient {
            return Err(Error::MixedModulus {
                expected: self.modulus,
                len: self.ambient,
                found: v.modulus(),
                found_len: v.len(),
            });
        }
        Ok(())
    }

    fn check_same_ambient(&self, other: &Submodule) -> Result<()> {
        if other.modulus != self.modulus || other.ambient != self.ambient {
            return Err(Error::MixedModulus {
                expected: self.modulus,
                len: self.ambient,
                found: other.modulus,
                found_len: other.ambient,
            });
        }
        Ok(())
    }

    /// Lexicographically least element of the coset `v + self`.
    pub fn reduce(&self, v: &ModVector) -> Result<ModVector> {
        self.check_vector(v)?;
        let n = self.modulus;
        let mut out = v.entries.clone();
        for row in &self.rows {
            let (col, pivot) = pivot_of(&row.entries).expect("Howell rows are nonzero");
            let q = out[col] / pivot;
            if q != 0 {
                for (e, re) in out.iter_mut().zip(&row.entries) {
                    *e = (*e + n - mul_mod(q, *re, n)) % n;
                }
            }
        }
        Ok(ModVector::from_raw(n, out))
    }

    pub fn contains(&self, v: &ModVector) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    pub fn is_subset_of(&self, other: &Submodule) -> Result<bool> {
        self.check_same_ambient(other)?;
        for row in &self.rows {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn direct_sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_same_ambient(other)?;
        let raw = self
            .rows
            .iter()
            .chain(&other.rows)
            .map(|r| r.entries.clone())
            .collect();
        Ok(Submodule::from_raw_rows(self.modulus, self.ambient, raw))
    }

    /// `self ⊕ span{v}`.
    pub fn with_vector(&self, v: &ModVector) -> Result<Submodule> {
        self.check_vector(v)?;
        let mut raw: Vec<Vec<u64>> = self.rows.iter().map(|r| r.entries.clone()).collect();
        raw.push(v.entries.clone());
        Ok(Submodule::from_raw_rows(self.modulus, self.ambient, raw))
    }

    /// Annihilator of the span under the chosen form.
    pub fn complement(&self, form: Form) -> Result<Submodule> {
        let rows: Vec<ModVector> = match form {
            Form::Euclidean => self.rows.clone(),
            Form::Symplectic => {
                if !self.ambient.is_multiple_of(2) {
                    return Err(Error::DimensionMismatch {
                        expected: self.ambient + 1,
                        found: self.ambient,
                    });
                }
                // aᵀJx = (Jᵀa)ᵀx and Jᵀ = J⁻¹
                self.rows.iter().map(ModVector::apply_j_inverse).collect()
            }
        };
        let refs: Vec<&[u64]> = rows.iter().map(|r| r.entries()).collect();
        let kernel = kernel_rows(self.modulus, self.ambient, &refs);
        Ok(Submodule::from_raw_rows(self.modulus, self.ambient, kernel))
    }

    /// `A ∩ B`, computed as `(A⊥ ⊕ B⊥)⊥`.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check_same_ambient(other)?;
        self.complement(Form::Euclidean)?
            .direct_sum(&other.complement(Form::Euclidean)?)?
            .complement(Form::Euclidean)
    }

    /// True when every pair of elements has vanishing symplectic product.
    pub fn is_isotropic(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, a)| self.rows[i + 1..].iter().all(|b| a.symplectic(b) == 0))
    }

    /// Every element of the span, using the default guard.
    pub fn enumerate_elements(&self) -> Result<Vec<ModVector>> {
        self.enumerate_elements_with_guard(DEFAULT_ENUMERATION_GUARD)
    }

    /// Every element of the span, sorted. The closure is built from generator
    /// multiples alone so it does not rely on Howell-form structure.
    pub fn enumerate_elements_with_guard(&self, guard: u128) -> Result<Vec<ModVector>> {
        let size = self.size();
        if size > guard {
            return Err(Error::TooLarge { size, limit: guard });
        }
        let mut elements: HashSet<ModVector> = HashSet::new();
        elements.insert(ModVector::zeros(self.modulus, self.ambient));
        for gen in &self.rows {
            let order = gen.order();
            let current: Vec<ModVector> = elements.iter().cloned().collect();
            for base in current {
                let mut acc = base;
                for _ in 1..order {
                    acc = acc.add(gen);
                    elements.insert(acc.clone());
                }
            }
        }
        let mut out: Vec<ModVector> = elements.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Representatives of the cosets of `sub` inside `self` (`sub ⊆ self`),
    /// each the lexicographically least element of its coset.
    pub fn coset_representatives(&self, sub: &Submodule) -> Result<Vec<ModVector>> {
        self.check_same_ambient(sub)?;
        let count = self.size() / sub.size();
        if count > DEFAULT_ENUMERATION_GUARD {
            return Err(Error::TooLarge {
                size: count,
                limit: DEFAULT_ENUMERATION_GUARD,
            });
        }
        let mut reps: HashSet<ModVector> = HashSet::new();
        reps.insert(ModVector::zeros(self.modulus, self.ambient));
        for gen in &self.rows {
            let order = gen.order();
            let current: Vec<ModVector> = reps.iter().cloned().collect();
            for base in current {
                let mut acc = base;
                for _ in 1..order {
                    acc = acc.add(gen);
                    reps.insert(sub.reduce(&acc)?);
                }
            }
        }
        let mut out: Vec<ModVector> = reps.into_iter().collect();
        out.sort();
        debug_assert_eq!(out.len() as u128, count);
        Ok(out)
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// Solves `matrix · x = rhs` over Z_d, where each entry of `matrix` is one
/// equation. Returns the lexicographically least solution together with the
/// full solution kernel, or `None` when the system has no solution.
pub fn solve_linear(
    matrix: &[ModVector],
    rhs: &ModVector,
    unknowns: usize,
) -> Result<Option<(ModVector, Submodule)>> {
    let modulus = rhs.modulus();
    check_modulus(modulus)?;
    if rhs.len() != matrix.len() {
        return Err(Error::DimensionMismatch {
            expected: matrix.len(),
            found: rhs.len(),
        });
    }
    for row in matrix {
        if row.modulus() != modulus || row.len() != unknowns {
            return Err(Error::MixedModulus {
                expected: modulus,
                len: unknowns,
                found: row.modulus(),
                found_len: row.len(),
            });
        }
    }
    let k = matrix.len();
    // Columns: [equations (k) | t | x (unknowns)]. Rows encode x_i and -t·rhs,
    // so the zero-residual part of the span is {(t, x) : matrix·x = t·rhs}.
    let mut augmented: Vec<Vec<u64>> = (0..unknowns)
        .map(|i| {
            let mut row: Vec<u64> = matrix.iter().map(|eq| eq.entries()[i]).collect();
            row.push(0);
            row.extend((0..unknowns).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    let mut t_row: Vec<u64> = rhs.neg().entries().to_vec();
    t_row.push(1);
    t_row.extend(std::iter::repeat_n(0, unknowns));
    augmented.push(t_row);

    let solved: Vec<Vec<u64>> = howell_rows(modulus, k + 1 + unknowns, augmented)
        .into_iter()
        .filter(|row| row[..k].iter().all(|&e| e == 0))
        .map(|row| row[k..].to_vec())
        .collect();
    let kernel_raw: Vec<Vec<u64>> = solved
        .iter()
        .filter(|row| row[0] == 0)
        .map(|row| row[1..].to_vec())
        .collect();
    let kernel = Submodule::from_raw_rows(modulus, unknowns, kernel_raw);
    match solved.iter().find(|row| row[0] != 0) {
        Some(row) if row[0] == 1 => {
            let particular = ModVector::from_raw(modulus, row[1..].to_vec());
            let particular = kernel.reduce(&particular)?;
            Ok(Some((particular, kernel)))
        }
        _ => Ok(None),
    }
}
