//! Fine- and coarse-graining observables.
//!
//! An observable Σ is fine-graining when its coefficients together with d
//! have gcd 1; it then attains every value of Z_d. Otherwise Σ = D·Σ_fg with
//! degeneracy D = gcd(coefficients, d), only multiples of D are attainable,
//! and the outcome cosets of Σ split into D cosets of the fine observable Σ_fg.

use num_integer::Integer;

use crate::epistemic::Observable;
use crate::error::{Error, Result};
use crate::zmod::{solve_linear, Form, ModVector, Residue, Submodule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Graining {
    Fine,
    Coarse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrainingInfo {
    pub kind: Graining,
    /// D = gcd(coefficients ∪ {d}).
    pub degeneracy: u64,
    /// D̄, the product of the distinct primes dividing D.
    pub radical: u64,
    /// C = d / D (zero for fine observables).
    pub anti_degeneracy: Residue,
    /// Σ_fg with D·Σ_fg = Σ and gcd(Σ_fg, d) = 1.
    pub fine: Observable,
    /// A vector with Σ_fgᵀγ = 1.
    pub gamma: ModVector,
    /// v = C·γ, generator of the degeneracy subspace V_D.
    pub degeneracy_vector: ModVector,
}

impl GrainingInfo {
    pub fn is_fine(&self) -> bool {
        self.kind == Graining::Fine
    }

    pub fn is_coarse(&self) -> bool {
        self.kind == Graining::Coarse
    }
}

/// One fine-graining piece of a coarse outcome: Σ_fg = σ_j on the coset
/// V_fg⊥ + r_fg^(j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FineBranch {
    pub observable: Observable,
    pub outcome: Residue,
    pub shift: ModVector,
}

pub fn radical(mut n: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out *= p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out *= n;
    }
    out
}

fn gcd_with_modulus(v: &ModVector) -> u64 {
    v.entries()
        .iter()
        .fold(v.modulus(), |acc, &e| acc.gcd(&e))
}

/// Σ/D lifted, if needed, so that its coefficients are jointly coprime to d.
fn fine_part(sigma: &ModVector, degeneracy: u64) -> ModVector {
    let d = sigma.modulus();
    let quotient: Vec<u64> = sigma.entries().iter().map(|e| e / degeneracy).collect();
    let base = ModVector::from_raw(d, quotient);
    if gcd_with_modulus(&base) == 1 {
        return base;
    }
    // Adding multiples of d/D to one coordinate keeps D·Σ_fg fixed; some lift
    // is coprime to d by the Chinese remainder theorem.
    let step = d / degeneracy;
    (0..degeneracy)
        .map(|t| {
            let mut e = base.entries().to_vec();
            e[0] = (e[0] + t * step) % d;
            ModVector::from_raw(d, e)
        })
        .find(|cand| gcd_with_modulus(cand) == 1)
        .expect("a coprime lift exists")
}

pub fn classify(obs: &Observable) -> Result<GrainingInfo> {
    let sigma = obs.sigma();
    if sigma.is_zero() {
        return Err(Error::ZeroObservable);
    }
    let d = sigma.modulus();
    let degeneracy = gcd_with_modulus(sigma);
    let fine_sigma = fine_part(sigma, degeneracy);
    let (gamma, _) = solve_linear(
        std::slice::from_ref(&fine_sigma),
        &ModVector::from_raw(d, vec![1]),
        sigma.len(),
    )?
    .expect("fine observables have full spectrum");
    let c = (d / degeneracy) % d;
    Ok(GrainingInfo {
        kind: if degeneracy == 1 {
            Graining::Fine
        } else {
            Graining::Coarse
        },
        degeneracy,
        radical: radical(degeneracy),
        anti_degeneracy: Residue::from_reduced(c, d),
        degeneracy_vector: gamma.scale(c),
        gamma,
        fine: Observable(fine_sigma),
    })
}

/// Splits the coarse outcome Σ = σ_cg into its fine cosets
/// Σ_fg = σ_cg/D + jC on V_fg⊥ + r_cg + j·v, for j = 0, 1, … until the
/// cosets repeat. Their disjoint union is V_cg⊥ + r_cg.
pub fn fine_decomposition(obs: &Observable, outcome_cg: u64) -> Result<Vec<FineBranch>> {
    let info = classify(obs)?;
    if info.is_fine() {
        return Err(Error::NotCoarse);
    }
    let d = obs.sigma().modulus();
    let outcome_cg = outcome_cg % d;
    if !outcome_cg.is_multiple_of(info.degeneracy) {
        return Err(Error::InvalidOutcome {
            outcome: outcome_cg,
            degeneracy: info.degeneracy,
        });
    }
    let base_outcome = outcome_cg / info.degeneracy;
    let r_cg = info.gamma.scale(base_outcome);
    let fine_perp = Submodule::howell_form(d, obs.sigma().len(), &[info.fine.sigma().clone()])?
        .complement(Form::Euclidean)?;

    let mut branches = Vec::new();
    let mut seen = Vec::new();
    let mut shift = r_cg;
    loop {
        let key = fine_perp.reduce(&shift)?;
        if seen.contains(&key) {
            break;
        }
        seen.push(key);
        branches.push(FineBranch {
            observable: info.fine.clone(),
            outcome: Residue::from_reduced(info.fine.sigma().dot(&shift), d),
            shift: shift.clone(),
        });
        shift = shift.add(&info.degeneracy_vector);
    }
    Ok(branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epistemic::PhaseSpace;

    fn obs(d: u64, c: &[i64]) -> Observable {
        Observable::new(&PhaseSpace::new(d, c.len() / 2).unwrap(), c).unwrap()
    }

    fn v(d: u64, e: &[i64]) -> ModVector {
        ModVector::new(d, e.iter().copied()).unwrap()
    }

    #[test]
    fn three_x_in_six() {
        let info = classify(&obs(6, &[3, 0])).unwrap();
        assert_eq!(info.kind, Graining::Coarse);
        assert_eq!(info.degeneracy, 3);
        assert_eq!(info.radical, 3);
        assert_eq!(info.fine, obs(6, &[1, 0]));
        assert_eq!(info.anti_degeneracy.value(), 2);
        assert_eq!(info.degeneracy_vector, v(6, &[2, 0]));
    }

    #[test]
    fn fine_and_mixed_coefficients() {
        assert_eq!(classify(&obs(6, &[1, 1])).unwrap().kind, Graining::Fine);
        let info = classify(&obs(6, &[4, 2])).unwrap();
        assert_eq!(info.kind, Graining::Coarse);
        assert_eq!(info.degeneracy, 2);
        assert_eq!(info.fine, obs(6, &[2, 1]));
        assert_eq!(info.anti_degeneracy.value(), 3);
        assert_eq!(info.fine.sigma().dot(&info.degeneracy_vector), 3);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(classify(&obs(6, &[0, 0])).unwrap_err(), Error::ZeroObservable);
    }

    #[test]
    fn integer_quotient_is_lifted_when_not_coprime() {
        // 8X mod 12: D = 4, 8/4 = 2 shares a factor with 12; 5 does not.
        let info = classify(&obs(12, &[8, 0])).unwrap();
        assert_eq!(info.degeneracy, 4);
        assert_eq!(info.fine, obs(12, &[5, 0]));
        assert_eq!(info.fine.sigma().scale(4), v(12, &[8, 0]));
    }

    #[test]
    fn decomposition_of_three_x() {
        let zero = fine_decomposition(&obs(6, &[3, 0]), 0).unwrap();
        let outcomes: Vec<u64> = zero.iter().map(|b| b.outcome.value()).collect();
        let shifts: Vec<ModVector> = zero.iter().map(|b| b.shift.clone()).collect();
        assert_eq!(outcomes, vec![0, 2, 4]);
        assert_eq!(shifts, vec![v(6, &[0, 0]), v(6, &[2, 0]), v(6, &[4, 0])]);
        assert!(zero.iter().all(|b| b.observable == obs(6, &[1, 0])));

        let three = fine_decomposition(&obs(6, &[3, 0]), 3).unwrap();
        let outcomes: Vec<u64> = three.iter().map(|b| b.outcome.value()).collect();
        assert_eq!(outcomes, vec![1, 3, 5]);

        assert_eq!(
            fine_decomposition(&obs(6, &[3, 0]), 2).unwrap_err(),
            Error::InvalidOutcome {
                outcome: 2,
                degeneracy: 3
            }
        );
        assert_eq!(
            fine_decomposition(&obs(6, &[1, 0]), 0).unwrap_err(),
            Error::NotCoarse
        );
    }

    #[test]
    fn non_squarefree_degeneracy_needs_all_d_shifts() {
        let branches = fine_decomposition(&obs(8, &[4, 0]), 0).unwrap();
        assert_eq!(branches.len(), 4);
        assert_eq!(classify(&obs(8, &[4, 0])).unwrap().radical, 2);
    }

    #[test]
    fn radicals() {
        assert_eq!(radical(1), 1);
        assert_eq!(radical(12), 6);
        assert_eq!(radical(9), 3);
        assert_eq!(radical(7), 7);
    }
}
