//! Phase space, observables and epistemic states.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::zmod::{Form, ModVector, Residue, Submodule, DEFAULT_ENUMERATION_GUARD};
use crate::Rational;

/// The phase space Ω = Z_d^{2n}, coordinates laid out as (x_0, p_0, …, x_{n−1}, p_{n−1}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseSpace {
    d: u64,
    n: usize,
}

impl PhaseSpace {
    pub fn new(d: u64, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidModulus(d));
        }
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        Ok(PhaseSpace { d, n })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Length of a phase-space vector, 2n.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// |Ω| = d^{2n}.
    pub fn size(&self) -> u128 {
        (self.d as u128).pow(self.dim() as u32)
    }

    /// dⁿ, the Hilbert-space dimension of the matching qudit register.
    pub fn hilbert_dim(&self) -> u128 {
        (self.d as u128).pow(self.n as u32)
    }

    pub fn is_odd(&self) -> bool {
        self.d % 2 == 1
    }

    pub fn origin(&self) -> ModVector {
        ModVector::zeros(self.d, self.dim())
    }

    pub fn point(&self, entries: &[i64]) -> Result<ModVector> {
        let v = ModVector::new(self.d, entries.iter().copied())?;
        self.check(&v)?;
        Ok(v)
    }

    /// All phase points in index order, guarded like any enumeration.
    pub fn points(&self) -> Result<Vec<ModVector>> {
        let size = self.size();
        if size > DEFAULT_ENUMERATION_GUARD {
            return Err(Error::TooLarge {
                size,
                limit: DEFAULT_ENUMERATION_GUARD,
            });
        }
        Ok((0..size as usize)
            .map(|i| ModVector::from_index(self.d, self.dim(), i))
            .collect())
    }

    pub fn whole(&self) -> Submodule {
        Submodule::full(self.d, self.dim())
    }

    pub fn zero(&self) -> Submodule {
        Submodule::zero(self.d, self.dim())
    }

    pub(crate) fn check(&self, v: &ModVector) -> Result<()> {
        if v.modulus() != self.d {
            return Err(Error::MixedModulus {
                expected: self.d,
                len: self.dim(),
                found: v.modulus(),
                found_len: v.len(),
            });
        }
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_submodule(&self, s: &Submodule) -> Result<()> {
        if s.modulus() != self.d || s.ambient() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient(),
            });
        }
        Ok(())
    }
}

/// A linear observable Σ = Σ_m (a_m X_m + b_m P_m), stored as (a_0, b_0, …).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Observable(pub(crate) ModVector);

impl Observable {
    pub fn new(space: &PhaseSpace, coefficients: &[i64]) -> Result<Self> {
        Ok(Observable(space.point(coefficients)?))
    }

    pub fn from_vector(space: &PhaseSpace, sigma: ModVector) -> Result<Self> {
        space.check(&sigma)?;
        Ok(Observable(sigma))
    }

    pub fn sigma(&self) -> &ModVector {
        &self.0
    }

    pub fn into_sigma(self) -> ModVector {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Outcome of this observable on the ontic state λ: Σᵀλ mod d.
    pub fn evaluate(&self, lambda: &ModVector) -> Result<Residue> {
        evaluate(self, lambda)
    }

    pub fn commutes_with(&self, other: &Observable) -> Result<bool> {
        Ok(symplectic_product(self, other)?.is_zero())
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn evaluate(obs: &Observable, lambda: &ModVector) -> Result<Residue> {
    check_pair(obs.sigma(), lambda)?;
    Ok(Residue::from_reduced(
        obs.sigma().dot(lambda),
        lambda.modulus(),
    ))
}

/// aᵀJb, with J the block-diagonal symplectic matrix.
pub fn symplectic_product(a: &Observable, b: &Observable) -> Result<Residue> {
    check_pair(a.sigma(), b.sigma())?;
    if !a.sigma().len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: a.sigma().len() + 1,
            found: a.sigma().len(),
        });
    }
    Ok(Residue::from_reduced(
        a.sigma().symplectic(b.sigma()),
        a.sigma().modulus(),
    ))
}

fn check_pair(a: &ModVector, b: &ModVector) -> Result<()> {
    if a.modulus() != b.modulus() {
        return Err(Error::MixedModulus {
            expected: a.modulus(),
            len: a.len(),
            found: b.modulus(),
            found_len: b.len(),
        });
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// First broken invariant of an [`EpistemicState`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongSpace,
    NotIsotropic {
        a: ModVector,
        b: ModVector,
        product: u64,
    },
    NonCanonicalKnown,
    MissingOutcome {
        generator: ModVector,
    },
    OutcomeMismatch {
        generator: ModVector,
        stored: u64,
        actual: u64,
    },
    NonCanonicalShift {
        given: ModVector,
        canonical: ModVector,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongSpace => write!(f, "components do not live in the declared phase space"),
            Violation::NotIsotropic { a, b, product } => write!(
                f,
                "known variables are not isotropic: <{a},{b}> = {product} != 0"
            ),
            Violation::NonCanonicalKnown => write!(f, "known-variable generators are not in Howell form"),
            Violation::MissingOutcome { generator } => {
                write!(f, "no stored outcome for generator {generator}")
            }
            Violation::OutcomeMismatch {
                generator,
                stored,
                actual,
            } => write!(
                f,
                "stored outcome {stored} for {generator} disagrees with shift value {actual}"
            ),
            Violation::NonCanonicalShift { given, canonical } => {
                write!(f, "shift {given} is not the canonical coset element {canonical}")
            }
        }
    }
}

/// Whether an observable's value is fixed by an epistemic state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnownValue {
    Known(Residue),
    Unknown,
}

/// An epistemic state (V, w): known variables V, isotropic, and a shift w.
/// Its ontic support is the coset V⊥ + w.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpistemicState {
    space: PhaseSpace,
    known: Submodule,
    known_perp: Submodule,
    shift: ModVector,
    outcomes: Vec<(ModVector, Residue)>,
}

impl EpistemicState {
    /// Builds a canonical state from known variables and any representative
    /// ontic vector; the shift is replaced by the least element of its coset.
    pub fn new(space: PhaseSpace, known: Submodule, shift: ModVector) -> Result<Self> {
        space.check_submodule(&known)?;
        space.check(&shift)?;
        let known_perp = known.complement(Form::Euclidean)?;
        let shift = known_perp.reduce(&shift)?;
        let outcomes = known
            .rows()
            .iter()
            .map(|g| (g.clone(), Residue::from_reduced(g.dot(&shift), space.d())))
            .collect();
        let state = EpistemicState {
            space,
            known,
            known_perp,
            shift,
            outcomes,
        };
        state.validate().map_err(Error::InvalidState)?;
        Ok(state)
    }

    /// Nothing known: V = {0}, support Ω.
    pub fn maximally_mixed(space: PhaseSpace) -> Self {
        EpistemicState::new(space, space.zero(), space.origin()).expect("zero module is isotropic")
    }

    /// State in which each listed observable is known to take the given value.
    pub fn from_known_values(space: PhaseSpace, values: &[(Observable, u64)]) -> Result<Self> {
        let gens: Vec<ModVector> = values.iter().map(|(o, _)| o.sigma().clone()).collect();
        for g in &gens {
            space.check(g)?;
        }
        let rhs = ModVector::from_unsigned(space.d(), values.iter().map(|(_, s)| *s))?;
        let known = Submodule::howell_form(space.d(), space.dim(), &gens)?;
        let (shift, _) = crate::zmod::solve_linear(&gens, &rhs, space.dim())?
            .ok_or(Error::InconsistentOutcomes)?;
        EpistemicState::new(space, known, shift)
    }

    /// Assembles a state without canonicalizing or validating it.
    pub fn from_parts_unchecked(
        space: PhaseSpace,
        known: Submodule,
        shift: ModVector,
        outcomes: Vec<(ModVector, Residue)>,
    ) -> Result<Self> {
        let known_perp = known.complement(Form::Euclidean)?;
        Ok(EpistemicState {
            space,
            known,
            known_perp,
            shift,
            outcomes,
        })
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    /// V, the known variables.
    pub fn known(&self) -> &Submodule {
        &self.known
    }

    /// V⊥.
    pub fn known_perp(&self) -> &Submodule {
        &self.known_perp
    }

    /// w, the canonical representative ontic state.
    pub fn shift(&self) -> &ModVector {
        &self.shift
    }

    pub fn known_outcomes(&self) -> &[(ModVector, Residue)] {
        &self.outcomes
    }

    pub fn is_pure(&self) -> bool {
        self.known.size() == self.space.hilbert_dim()
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let space = &self.space;
        if self.known.modulus() != space.d()
            || self.known.ambient() != space.dim()
            || space.check(&self.shift).is_err()
        {
            return Err(Violation::WrongSpace);
        }
        let rows = self.known.rows();
        for (i, a) in rows.iter().enumerate() {
            for b in &rows[i + 1..] {
                let product = a.symplectic(b);
                if product != 0 {
                    return Err(Violation::NotIsotropic {
                        a: a.clone(),
                        b: b.clone(),
                        product,
                    });
                }
            }
        }
        let recanonical = Submodule::howell_form(space.d(), space.dim(), rows)
            .map_err(|_| Violation::WrongSpace)?;
        if recanonical != self.known {
            return Err(Violation::NonCanonicalKnown);
        }
        for g in rows {
            let actual = g.dot(&self.shift);
            match self.outcomes.iter().find(|(h, _)| h == g) {
                None => {
                    return Err(Violation::MissingOutcome {
                        generator: g.clone(),
                    })
                }
                Some((_, stored)) if stored.value() != actual => {
                    return Err(Violation::OutcomeMismatch {
                        generator: g.clone(),
                        stored: stored.value(),
                        actual,
                    })
                }
                Some(_) => {}
            }
        }
        let canonical = self
            .known_perp
            .reduce(&self.shift)
            .map_err(|_| Violation::WrongSpace)?;
        if canonical != self.shift {
            return Err(Violation::NonCanonicalShift {
                given: self.shift.clone(),
                canonical,
            });
        }
        Ok(())
    }

    /// |V⊥ + w| = |V⊥|.
    pub fn support_size(&self) -> u128 {
        self.known_perp.size()
    }

    pub fn support_contains(&self, lambda: &ModVector) -> Result<bool> {
        self.space.check(lambda)?;
        self.known_perp.contains(&lambda.sub(&self.shift))
    }

    /// The ontic states consistent with this state, V⊥ + w, sorted.
    pub fn ontic_support(&self) -> Result<Vec<ModVector>> {
        let mut points: Vec<ModVector> = self
            .known_perp
            .enumerate_elements()?
            .into_iter()
            .map(|l| l.add(&self.shift))
            .collect();
        points.sort();
        Ok(points)
    }

    /// Uniform distribution 1/|V⊥| on the support.
    pub fn distribution(&self) -> Result<EpistemicDistribution> {
        Ok(EpistemicDistribution {
            space: self.space,
            weight: Rational::new(1, self.support_size() as i64),
            support: self.ontic_support()?.into_iter().collect(),
        })
    }

    pub fn known_value(&self, obs: &Observable) -> Result<KnownValue> {
        self.space.check(obs.sigma())?;
        if self.known.contains(obs.sigma())? {
            Ok(KnownValue::Known(evaluate(obs, &self.shift)?))
        } else {
            Ok(KnownValue::Unknown)
        }
    }
}

impl fmt::Display for EpistemicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V={} w={}", self.known, self.shift)
    }
}

/// Every isotropic submodule of size dⁿ, in sorted Howell order.
///
/// Grown breadth-first: each isotropic S is extended by the vectors of its
/// symplectic complement, which keeps it isotropic.
pub fn maximal_isotropic_submodules(space: &PhaseSpace) -> Result<Vec<Submodule>> {
    let guard = DEFAULT_ENUMERATION_GUARD;
    if space.size() > guard {
        return Err(Error::TooLarge {
            size: space.size(),
            limit: guard,
        });
    }
    let target = space.hilbert_dim();
    let mut seen: HashSet<Submodule> = HashSet::new();
    let mut frontier = vec![space.zero()];
    let mut maximal = Vec::new();
    seen.insert(space.zero());
    while let Some(s) = frontier.pop() {
        if s.size() == target {
            maximal.push(s);
            continue;
        }
        for v in s.complement(Form::Symplectic)?.enumerate_elements()? {
            if s.contains(&v)? {
                continue;
            }
            let bigger = s.with_vector(&v)?;
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    maximal.sort_by(|a, b| a.rows().cmp(b.rows()));
    Ok(maximal)
}

/// All pure states (V maximal isotropic, every shift class of Ω / V⊥).
pub fn pure_states(space: &PhaseSpace) -> Result<Vec<EpistemicState>> {
    let mut out = Vec::new();
    for known in maximal_isotropic_submodules(space)? {
        let perp = known.complement(Form::Euclidean)?;
        for w in space.whole().coset_representatives(&perp)? {
            out.push(EpistemicState::new(*space, known.clone(), w)?);
        }
    }
    Ok(out)
}

/// The probability distribution P_(V,w) over Ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicDistribution {
    space: PhaseSpace,
    weight: Rational,
    support: BTreeSet<ModVector>,
}

impl EpistemicDistribution {
    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn weight(&self) -> Rational {
        self.weight
    }

    pub fn support(&self) -> &BTreeSet<ModVector> {
        &self.support
    }

    pub fn probability(&self, lambda: &ModVector) -> Rational {
        if self.support.contains(lambda) {
            self.weight
        } else {
            Rational::from_integer(0)
        }
    }

    pub fn total(&self) -> Rational {
        self.weight * Rational::from_integer(self.support.len() as i64)
    }
}
