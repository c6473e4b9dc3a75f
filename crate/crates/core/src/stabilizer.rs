//! Qudit stabilizer groups as phased Weyl labels (odd d).
//!
//! A label (a, s) stands for the operator ω^s W(a), ω = exp(2πi/d), with
//! W(q, p) = χ(c·qp) S(q) B(p) per system, S(q)|x⟩ = |x − q⟩ and
//! B(p)|x⟩ = χ(px)|x⟩. Phases stay exact as exponents in Z_d.

use std::collections::HashMap;
use std::fmt;

use crate::epistemic::{pure_states, EpistemicState, PhaseSpace};
use crate::error::{Error, Result};
use crate::zmod::{inverse_mod, Form, ModVector, Residue, Submodule};

/// Choice of the prefactor χ(c·qp) in the Weyl operator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ChiConvention {
    /// c = −2⁻¹, which gives W(a)W(b) = χ(2⁻¹⟨a,b⟩)W(a+b) and W(a)† = W(−a).
    #[default]
    Symmetric,
    /// c = 1, the prefactor χ(qp) taken literally.
    Printed,
}

impl ChiConvention {
    /// The exponent c for modulus d.
    pub fn coefficient(self, d: u64) -> Result<u64> {
        let half = half(d)?;
        Ok(match self {
            ChiConvention::Symmetric => (d - half) % d,
            ChiConvention::Printed => 1 % d,
        })
    }

    /// Exponent f with W_self(a) = χ(f)·W_symmetric(a).
    pub fn offset(self, a: &ModVector) -> Result<u64> {
        let d = a.modulus();
        let c = self.coefficient(d)?;
        let sym = ChiConvention::Symmetric.coefficient(d)?;
        let diff = (c + d - sym) % d;
        Ok(mul(diff, qp(a), d))
    }

    /// Exponent of χ in W(a)W(b) = χ(·)W(a+b).
    pub fn cocycle(self, a: &ModVector, b: &ModVector) -> Result<u64> {
        let d = a.modulus();
        let c = self.coefficient(d)?;
        let mut acc = 0u64;
        for (u, v) in a.entries().chunks(2).zip(b.entries().chunks(2)) {
            let (q1, p1, q2, p2) = (u[0], u[1], v[0], v[1]);
            let cross = (mul(q1, p2, d) + mul(q2, p1, d)) % d;
            acc = (acc + d - mul(c, cross, d)) % d;
            acc = (acc + d - mul(p1, q2, d)) % d;
        }
        Ok(acc)
    }
}

fn mul(a: u64, b: u64, d: u64) -> u64 {
    ((a as u128 * b as u128) % d as u128) as u64
}

fn half(d: u64) -> Result<u64> {
    if d.is_multiple_of(2) {
        return Err(Error::EvenDimension(d));
    }
    Ok(inverse_mod(2, d).expect("2 is a unit for odd d"))
}

/// Σ_i q_i p_i.
fn qp(a: &ModVector) -> u64 {
    let d = a.modulus();
    a.entries()
        .chunks(2)
        .fold(0, |acc, c| (acc + mul(c[0], c[1], d)) % d)
}

/// ω^s W(a).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylLabel {
    pub a: ModVector,
    pub phase_exp: Residue,
}

impl WeylLabel {
    pub fn new(a: ModVector, phase_exp: i64) -> Result<Self> {
        half(a.modulus())?;
        if !a.len().is_multiple_of(2) || a.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: a.len() + 1,
                found: a.len(),
            });
        }
        let phase_exp = Residue::new(phase_exp, a.modulus())?;
        Ok(WeylLabel { a, phase_exp })
    }

    pub fn identity(space: &PhaseSpace) -> Result<Self> {
        WeylLabel::new(space.origin(), 0)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.phase_exp.is_zero()
    }

    pub fn commutes_with(&self, other: &WeylLabel) -> bool {
        self.a.symplectic(&other.a) == 0
    }

    pub fn inverse(&self, conv: ChiConvention) -> Result<WeylLabel> {
        let neg = self.a.neg();
        let c = conv.cocycle(&self.a, &neg)?;
        let d = self.a.modulus();
        let s = (2 * d - self.phase_exp.value() - c) % d;
        Ok(WeylLabel {
            a: neg,
            phase_exp: Residue::from_reduced(s, d),
        })
    }

    pub fn pow(&self, k: u64, conv: ChiConvention) -> Result<WeylLabel> {
        let mut out = WeylLabel::new(ModVector::zeros(self.a.modulus(), self.a.len()), 0)?;
        for _ in 0..k {
            out = weyl_mul(&out, self, conv)?;
        }
        Ok(out)
    }
}

impl fmt::Display for WeylLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{} W{}", self.phase_exp, self.a)
    }
}

/// (a, s)·(b, t) = (a + b, s + t + cocycle(a, b)).
pub fn weyl_mul(u: &WeylLabel, v: &WeylLabel, conv: ChiConvention) -> Result<WeylLabel> {
    let d = u.a.modulus();
    half(d)?;
    u.a.check_compatible(&v.a)?;
    let c = conv.cocycle(&u.a, &v.a)?;
    let s = (u.phase_exp.value() + v.phase_exp.value() + c) % d;
    Ok(WeylLabel {
        a: u.a.add(&v.a),
        phase_exp: Residue::from_reduced(s, d),
    })
}

/// Commuting phased Weyl generators ⟨g_1, …, g_N⟩.
///
/// Generators need not be independent: coarse labels have order below d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGroup {
    space: PhaseSpace,
    convention: ChiConvention,
    generators: Vec<WeylLabel>,
}

impl StabilizerGroup {
    pub fn new(space: PhaseSpace, generators: Vec<WeylLabel>, convention: ChiConvention) -> Result<Self> {
        half(space.d())?;
        for g in &generators {
            space.check(&g.a)?;
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[i + 1..].iter().any(|h| !g.commutes_with(h)) {
                return Err(Error::NotCommuting);
            }
        }
        let group = StabilizerGroup {
            space,
            convention,
            generators,
        };
        group.elements()?;
        Ok(group)
    }

    pub fn trivial(space: PhaseSpace, convention: ChiConvention) -> Result<Self> {
        StabilizerGroup::new(space, Vec::new(), convention)
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn convention(&self) -> ChiConvention {
        self.convention
    }

    pub fn generators(&self) -> &[WeylLabel] {
        &self.generators
    }

    /// Span of the labels.
    pub fn label_module(&self) -> Result<Submodule> {
        let rows: Vec<ModVector> = self.generators.iter().map(|g| g.a.clone()).collect();
        Submodule::howell_form(self.space.d(), self.space.dim(), &rows)
    }

    /// Every group element as label ↦ phase exponent. Fails with
    /// `Inconsistent` when some product is a nontrivial multiple of I.
    pub fn elements(&self) -> Result<HashMap<ModVector, Residue>> {
        let id = WeylLabel::identity(&self.space)?;
        let mut seen: HashMap<ModVector, Residue> = HashMap::new();
        seen.insert(id.a.clone(), id.phase_exp);
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for g in &self.generators {
                let y = weyl_mul(&x, g, self.convention)?;
                match seen.get(&y.a) {
                    Some(s) if *s != y.phase_exp => return Err(Error::Inconsistent),
                    Some(_) => {}
                    None => {
                        seen.insert(y.a.clone(), y.phase_exp);
                        queue.push(y);
                    }
                }
            }
        }
        Ok(seen)
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }
}

/// g_j = ω^{s_j} W(J⁻¹Σ_j) for each Howell generator Σ_j of V, with s_j
/// chosen so that g_j fixes the state: W(a) has eigenvalue χ(⟨a, w⟩) on it.
pub fn from_epistemic(state: &EpistemicState, convention: ChiConvention) -> Result<StabilizerGroup> {
    let space = *state.space();
    let d = space.d();
    half(d)?;
    let mut generators = Vec::new();
    for sigma in state.known().rows() {
        let a = sigma.apply_j_inverse();
        let eig = (a.symplectic(state.shift()) + convention.offset(&a)?) % d;
        generators.push(WeylLabel {
            a,
            phase_exp: Residue::from_reduced((d - eig) % d, d),
        });
    }
    StabilizerGroup::new(space, generators, convention)
}

/// Inverse of `from_epistemic` for groups without conflicting phases.
pub fn to_epistemic(group: &StabilizerGroup) -> Result<EpistemicState> {
    let space = group.space;
    let d = space.d();
    let rows: Vec<ModVector> = group.generators.iter().map(|g| g.a.apply_j()).collect();
    let rhs: Vec<u64> = group
        .generators
        .iter()
        .map(|g| Ok((g.phase_exp.value() + group.convention.offset(&g.a)?) % d))
        .collect::<Result<_>>()?;
    // ⟨J⁻¹Σ, w⟩ = −Σᵀw, so the shift solves Σ_jᵀw = s_j + offset.
    let (w, _) = crate::zmod::solve_linear(&rows, &ModVector::from_unsigned(d, rhs)?, space.dim())?
        .ok_or(Error::Inconsistent)?;
    let known = Submodule::howell_form(d, space.dim(), &rows)?;
    EpistemicState::new(space, known, w)
}

/// Posterior group: the elements of `state` that commute with every
/// measurement generator, joined with the measurement generators.
pub fn stabilizer_update(state: &StabilizerGroup, meas: &StabilizerGroup) -> Result<StabilizerGroup> {
    if state.space != meas.space {
        return Err(Error::DimensionMismatch {
            expected: state.space.dim(),
            found: meas.space.dim(),
        });
    }
    let kept = state
        .label_module()?
        .intersect(&meas.label_module()?.complement(Form::Symplectic)?)?;
    let elements = state.elements()?;
    let mut generators = Vec::new();
    for a in kept.rows() {
        let phase = *elements.get(a).expect("kept labels lie in the state group");
        generators.push(WeylLabel {
            a: a.clone(),
            phase_exp: phase,
        });
    }
    for g in meas.generators() {
        if !generators.contains(g) {
            generators.push(g.clone());
        }
    }
    StabilizerGroup::new(state.space, generators, state.convention)
}

/// Every pure stabilizer state of (d, n), in the order of `pure_states`.
pub fn enumerate_stabilizer_states(d: u64, n: usize, convention: ChiConvention) -> Result<Vec<StabilizerGroup>> {
    half(d)?;
    let space = PhaseSpace::new(d, n)?;
    pure_states(&space)?
        .iter()
        .map(|s| from_epistemic(s, convention))
        .collect()
}
