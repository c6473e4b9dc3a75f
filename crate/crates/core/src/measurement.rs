//! Sharp measurements and posterior update rules.
//!
//! A measurement element is itself an epistemic object (V_Π, r): the
//! measured generators Σ′_i with outcomes σ′_i = Σ′_iᵀr. Updating a state
//! (V, w) on an element keeps the part of V that commutes with every Σ′_i,
//! adds V_Π, and moves w into the intersection of the two supports.

use crate::epistemic::{EpistemicState, Observable, PhaseSpace};
use crate::error::{Error, Result};
use crate::graining::{classify, fine_decomposition};
use crate::zmod::{solve_linear, Form, ModVector, Residue, Submodule, DEFAULT_ENUMERATION_GUARD};
use crate::Rational;

/// One element (V_Π, r) of a sharp measurement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SharpMeasurement {
    space: PhaseSpace,
    generators: Vec<Observable>,
    known: Submodule,
    known_perp: Submodule,
    shift: ModVector,
}

impl SharpMeasurement {
    /// The element on which generator `i` reads `outcomes[i]`.
    pub fn new(space: PhaseSpace, generators: Vec<Observable>, outcomes: &[u64]) -> Result<Self> {
        if outcomes.len() != generators.len() {
            return Err(Error::DimensionMismatch {
                expected: generators.len(),
                found: outcomes.len(),
            });
        }
        let d = space.d();
        for (g, &o) in generators.iter().zip(outcomes) {
            let info = classify(g)?;
            if !(o % d).is_multiple_of(info.degeneracy) {
                return Err(Error::InvalidOutcome {
                    outcome: o % d,
                    degeneracy: info.degeneracy,
                });
            }
        }
        let rows: Vec<ModVector> = generators.iter().map(|g| g.sigma().clone()).collect();
        let rhs = ModVector::from_unsigned(d, outcomes.iter().copied())?;
        let (shift, _) =
            solve_linear(&rows, &rhs, space.dim())?.ok_or(Error::InconsistentOutcomes)?;
        SharpMeasurement::from_shift(space, generators, shift)
    }

    /// The element whose representative ontic vector is `shift`.
    pub fn from_shift(space: PhaseSpace, generators: Vec<Observable>, shift: ModVector) -> Result<Self> {
        space.check(&shift)?;
        let mut rows = Vec::with_capacity(generators.len());
        for g in &generators {
            space.check(g.sigma())?;
            if g.is_zero() {
                return Err(Error::ZeroObservable);
            }
            rows.push(g.sigma().clone());
        }
        for (i, a) in rows.iter().enumerate() {
            if rows[i + 1..].iter().any(|b| a.symplectic(b) != 0) {
                return Err(Error::NotIsotropic);
            }
        }
        let known = Submodule::howell_form(space.d(), space.dim(), &rows)?;
        let known_perp = known.complement(Form::Euclidean)?;
        let shift = known_perp.reduce(&shift)?;
        Ok(SharpMeasurement {
            space,
            generators,
            known,
            known_perp,
            shift,
        })
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn generators(&self) -> &[Observable] {
        &self.generators
    }

    /// V_Π.
    pub fn known(&self) -> &Submodule {
        &self.known
    }

    /// V_Π⊥.
    pub fn known_perp(&self) -> &Submodule {
        &self.known_perp
    }

    /// r, canonical within its coset.
    pub fn shift(&self) -> &ModVector {
        &self.shift
    }

    pub fn outcomes(&self) -> Vec<Residue> {
        self.generators
            .iter()
            .map(|g| Residue::from_reduced(g.sigma().dot(&self.shift), self.space.d()))
            .collect()
    }

    pub fn is_fine(&self) -> Result<bool> {
        for g in &self.generators {
            if classify(g)?.is_coarse() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn support_contains(&self, lambda: &ModVector) -> Result<bool> {
        self.space.check(lambda)?;
        self.known_perp.contains(&lambda.sub(&self.shift))
    }

    /// The element viewed as an epistemic state (V_Π, r).
    pub fn as_state(&self) -> Result<EpistemicState> {
        EpistemicState::new(self.space, self.known.clone(), self.shift.clone())
    }

    /// Every element of the measurement this element belongs to.
    pub fn elements(&self) -> Result<Vec<SharpMeasurement>> {
        measurement_elements(self)
    }
}

/// All elements of the measurement, one per attainable joint outcome,
/// ordered lexicographically by outcome tuple.
pub fn measurement_elements(meas: &SharpMeasurement) -> Result<Vec<SharpMeasurement>> {
    let d = meas.space.d();
    let mut spectra = Vec::with_capacity(meas.generators.len());
    for g in &meas.generators {
        let step = classify(g)?.degeneracy;
        spectra.push((0..d).step_by(step as usize).collect::<Vec<u64>>());
    }
    let combos: u128 = spectra.iter().map(|s| s.len() as u128).product();
    if combos > DEFAULT_ENUMERATION_GUARD {
        return Err(Error::TooLarge {
            size: combos,
            limit: DEFAULT_ENUMERATION_GUARD,
        });
    }
    let mut out = Vec::new();
    let mut tuple = vec![0usize; spectra.len()];
    loop {
        let outcomes: Vec<u64> = tuple.iter().zip(&spectra).map(|(&i, s)| s[i]).collect();
        match SharpMeasurement::new(meas.space, meas.generators.clone(), &outcomes) {
            Ok(e) => out.push(e),
            Err(Error::InconsistentOutcomes) => {}
            Err(e) => return Err(e),
        }
        // odometer, last generator fastest
        let mut k = tuple.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < spectra[k].len() {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// A vector γ with Σᵀγ = 1, which exists exactly for fine-graining Σ.
pub fn gamma_vector(obs: &Observable) -> Result<Option<ModVector>> {
    let sigma = obs.sigma();
    Ok(solve_linear(
        std::slice::from_ref(sigma),
        &ModVector::from_raw(sigma.modulus(), vec![1]),
        sigma.len(),
    )?
    .map(|(g, _)| g))
}

/// Decomposition of the known variables against a measurement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingSplit {
    /// V_commute = {v ∈ V : ⟨Σ′_i, v⟩ = 0 for all i}.
    pub commute: Submodule,
    /// Span of the coset representatives; V_commute⊥ = V⊥ ⊕ V_other.
    pub other: Submodule,
    /// One vector per coset of V⊥ inside V_commute⊥.
    pub coset_reps: Vec<ModVector>,
}

pub fn split_commuting(state: &EpistemicState, meas: &SharpMeasurement) -> Result<CommutingSplit> {
    check_same_space(state, meas)?;
    let commute = state
        .known()
        .intersect(&meas.known.complement(Form::Symplectic)?)?;
    let commute_perp = commute.complement(Form::Euclidean)?;
    let coset_reps = commute_perp.coset_representatives(state.known_perp())?;
    let space = state.space();
    let other = Submodule::howell_form(space.d(), space.dim(), &coset_reps)?;
    Ok(CommutingSplit {
        commute,
        other,
        coset_reps,
    })
}

fn check_same_space(state: &EpistemicState, meas: &SharpMeasurement) -> Result<()> {
    if state.space() != meas.space() {
        return Err(Error::DimensionMismatch {
            expected: state.space().dim(),
            found: meas.space().dim(),
        });
    }
    Ok(())
}

/// A point of (kept⊥ + w) ∩ (V_Π⊥ + r), if the two cosets meet.
///
/// This is w′ = w + Σ_i Σ′_iᵀ(r − w)·γ_i with the γ_i chosen to leave the
/// kept variables untouched: the correction δ = w′ − w solves
/// gᵀδ = 0 for the kept generators g and Σ′_iᵀδ = Σ′_iᵀ(r − w).
fn updated_shift(
    state: &EpistemicState,
    kept: &Submodule,
    generators: &[Observable],
    shift: &ModVector,
) -> Result<Option<ModVector>> {
    let space = state.space();
    let w = state.shift();
    let diff = shift.sub(w);
    let mut rows: Vec<ModVector> = kept.rows().to_vec();
    let mut rhs: Vec<u64> = vec![0; rows.len()];
    for g in generators {
        rows.push(g.sigma().clone());
        rhs.push(g.sigma().dot(&diff));
    }
    let rhs = ModVector::from_unsigned(space.d(), rhs)?;
    Ok(solve_linear(&rows, &rhs, space.dim())?.map(|(delta, _)| w.add(&delta)))
}

fn posterior_fine(
    state: &EpistemicState,
    element: &SharpMeasurement,
    kept: &Submodule,
) -> Result<EpistemicState> {
    let w_new = updated_shift(state, kept, &element.generators, &element.shift)?
        .ok_or(Error::ImpossibleOutcome)?;
    let known = kept.direct_sum(&element.known)?;
    EpistemicState::new(*state.space(), known, w_new)
}

fn require_fine(element: &SharpMeasurement) -> Result<()> {
    if element.is_fine()? {
        Ok(())
    } else {
        Err(Error::CoarseGenerator)
    }
}

/// Posterior for an element that commutes with the state:
/// V′ = V ⊕ V_Π, support (V⊥ + w) ∩ (V_Π⊥ + r).
pub fn update_commuting(state: &EpistemicState, element: &SharpMeasurement) -> Result<EpistemicState> {
    check_same_space(state, element)?;
    require_fine(element)?;
    for g in &element.generators {
        if state.known().rows().iter().any(|v| g.sigma().symplectic(v) != 0) {
            return Err(Error::NotCommuting);
        }
    }
    posterior_fine(state, element, state.known())
}

/// Posterior for any fine element: V′ = V_commute ⊕ V_Π,
/// support (V_commute⊥ + w) ∩ (V_Π⊥ + r).
pub fn update_general(state: &EpistemicState, element: &SharpMeasurement) -> Result<EpistemicState> {
    check_same_space(state, element)?;
    require_fine(element)?;
    let split = split_commuting(state, element)?;
    posterior_fine(state, element, &split.commute)
}

/// Support of one fine branch of a coarse update: `base + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSupport {
    /// The fine lifts read on this branch, with their outcomes. Lifts of
    /// commuting coarse generators need not commute with each other.
    pub fine: Vec<(Observable, Residue)>,
    /// V_commute⊥ ∩ V_fg⊥.
    pub base: Submodule,
    /// w′_j.
    pub shift: ModVector,
}

/// The nonempty fine branches (V_commute⊥ + w) ∩ (V_fg⊥ + r_fg^(j)) of an
/// element, one per joint choice of fine outcome for its coarse generators.
pub fn coarse_branches(state: &EpistemicState, element: &SharpMeasurement) -> Result<Vec<BranchSupport>> {
    check_same_space(state, element)?;
    let space = *state.space();
    let d = space.d();
    let split = split_commuting(state, element)?;
    let commute_perp = split.commute.complement(Form::Euclidean)?;

    let mut options: Vec<Vec<(Observable, u64)>> = Vec::new();
    for (g, outcome) in element.generators.iter().zip(element.outcomes()) {
        if classify(g)?.is_fine() {
            options.push(vec![(g.clone(), outcome.value())]);
        } else {
            options.push(
                fine_decomposition(g, outcome.value())?
                    .into_iter()
                    .map(|b| (b.observable, b.outcome.value()))
                    .collect(),
            );
        }
    }

    let mut branches = Vec::new();
    let mut tuple = vec![0usize; options.len()];
    loop {
        let picked: Vec<&(Observable, u64)> =
            tuple.iter().zip(&options).map(|(&i, o)| &o[i]).collect();
        let gens: Vec<Observable> = picked.iter().map(|(o, _)| o.clone()).collect();
        let rows: Vec<ModVector> = gens.iter().map(|g| g.sigma().clone()).collect();
        let rhs = ModVector::from_unsigned(d, picked.iter().map(|(_, s)| *s))?;
        if let Some((fine_shift, _)) = solve_linear(&rows, &rhs, space.dim())? {
            if let Some(shift) = updated_shift(state, &split.commute, &gens, &fine_shift)? {
                let fine_perp = Submodule::howell_form(d, space.dim(), &rows)?.complement(Form::Euclidean)?;
                branches.push(BranchSupport {
                    fine: picked
                        .iter()
                        .map(|(o, s)| (o.clone(), Residue::from_reduced(*s, d)))
                        .collect(),
                    base: commute_perp.intersect(&fine_perp)?,
                    shift,
                });
            }
        }
        let mut k = tuple.len();
        loop {
            if k == 0 {
                return Ok(branches);
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < options[k].len() {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// Rebuilds the posterior from the union of fine branches, taking w′ from
/// branch `index`. Fails with `ImpossibleOutcome` when no branch survives.
pub fn posterior_from_branches(
    state: &EpistemicState,
    branches: &[BranchSupport],
    index: usize,
) -> Result<EpistemicState> {
    let first = branches.first().ok_or(Error::ImpossibleOutcome)?;
    let chosen = branches.get(index).ok_or(Error::ImpossibleOutcome)?;
    let mut union = first.base.clone();
    for b in branches {
        union = union.with_vector(&b.shift.sub(&chosen.shift))?;
    }
    // The union of the disjoint branch cosets is itself a coset exactly when
    // the spanned module has no room beyond them.
    debug_assert_eq!(union.size(), first.base.size() * branches.len() as u128);
    if union.size() != first.base.size() * branches.len() as u128 {
        return Err(Error::Inconsistent);
    }
    let known = union.complement(Form::Euclidean)?;
    EpistemicState::new(*state.space(), known, chosen.shift.clone())
}

/// Posterior for an element with coarse-graining generators, built as the
/// union over fine branches of the fine posteriors' supports.
pub fn update_coarse(state: &EpistemicState, element: &SharpMeasurement) -> Result<EpistemicState> {
    let branches = coarse_branches(state, element)?;
    posterior_from_branches(state, &branches, 0)
}

/// Dispatches to the fine or coarse rule. An outcome the prior rules out
/// is `ImpossibleOutcome`, even when the part of the prior that survives
/// the disturbance would still meet it.
pub fn update(state: &EpistemicState, element: &SharpMeasurement) -> Result<EpistemicState> {
    if outcome_probability(state, element)? == Rational::from_integer(0) {
        return Err(Error::ImpossibleOutcome);
    }
    if element.is_fine()? {
        update_general(state, element)
    } else {
        update_coarse(state, element)
    }
}

/// |(V⊥ + w) ∩ (V_Π⊥ + r)| / |V⊥|.
pub fn outcome_probability(state: &EpistemicState, element: &SharpMeasurement) -> Result<Rational> {
    check_same_space(state, element)?;
    match updated_shift(state, state.known(), &element.generators, &element.shift)? {
        None => Ok(Rational::from_integer(0)),
        Some(_) => {
            let overlap = state.known_perp().intersect(&element.known_perp)?.size();
            Ok(Rational::new(overlap as i64, state.support_size() as i64))
        }
    }
}

/// Probability of every element of the measurement `meas` belongs to.
pub fn outcome_probabilities(
    state: &EpistemicState,
    meas: &SharpMeasurement,
) -> Result<Vec<(SharpMeasurement, Rational)>> {
    meas.elements()?
        .into_iter()
        .map(|e| {
            let p = outcome_probability(state, &e)?;
            Ok((e, p))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(d: u64, n: usize) -> PhaseSpace {
        PhaseSpace::new(d, n).unwrap()
    }

    fn obs(d: u64, c: &[i64]) -> Observable {
        Observable::new(&space(d, c.len() / 2), c).unwrap()
    }

    fn state(d: u64, gens: &[&[i64]], w: &[i64]) -> EpistemicState {
        let s = space(d, w.len() / 2);
        let rows: Vec<ModVector> = gens.iter().map(|g| s.point(g).unwrap()).collect();
        EpistemicState::new(s, Submodule::howell_form(d, s.dim(), &rows).unwrap(), s.point(w).unwrap())
            .unwrap()
    }

    fn element(d: u64, gens: &[&[i64]], outcomes: &[u64]) -> SharpMeasurement {
        let s = space(d, gens[0].len() / 2);
        SharpMeasurement::new(s, gens.iter().map(|g| obs(d, g)).collect(), outcomes).unwrap()
    }

    fn span(d: u64, rows: &[&[i64]]) -> Submodule {
        let rows: Vec<ModVector> = rows
            .iter()
            .map(|r| ModVector::new(d, r.iter().copied()).unwrap())
            .collect();
        Submodule::span(&rows).unwrap()
    }

    #[test]
    fn elements_of_x_measurement() {
        let els = element(3, &[&[1, 0]], &[0]).elements().unwrap();
        let shifts: Vec<Vec<u64>> = els.iter().map(|e| e.shift().entries().to_vec()).collect();
        assert_eq!(shifts, vec![vec![0, 0], vec![1, 0], vec![2, 0]]);
    }

    #[test]
    fn elements_of_coarse_measurement() {
        let els = element(6, &[&[3, 0]], &[0]).elements().unwrap();
        let outcomes: Vec<u64> = els.iter().map(|e| e.outcomes()[0].value()).collect();
        assert_eq!(outcomes, vec![0, 3]);
    }

    #[test]
    fn elements_of_two_system_measurement() {
        let els = element(3, &[&[1, 0, 0, 0], &[0, 0, 1, 0]], &[0, 0])
            .elements()
            .unwrap();
        assert_eq!(els.len(), 9);
    }

    #[test]
    fn invalid_coarse_outcome() {
        let err = SharpMeasurement::new(space(6, 1), vec![obs(6, &[3, 0])], &[2]).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidOutcome {
                outcome: 2,
                degeneracy: 3
            }
        );
    }

    #[test]
    fn split_against_conjugate() {
        let x0 = state(3, &[&[1, 0]], &[0, 0]);
        let split = split_commuting(&x0, &element(3, &[&[0, 1]], &[0])).unwrap();
        assert!(split.commute.is_zero());
        assert_eq!(split.other, span(3, &[&[1, 0]]));
        assert_eq!(split.coset_reps.len(), 3);

        let split = split_commuting(&x0, &element(3, &[&[2, 0]], &[0])).unwrap();
        assert_eq!(&split.commute, x0.known());
        assert!(split.other.is_zero());
        assert_eq!(split.coset_reps.len(), 1);
    }

    #[test]
    fn split_with_zero_divisor_product() {
        let st = state(6, &[&[3, 0]], &[0, 0]);
        let split = split_commuting(&st, &element(6, &[&[0, 1]], &[0])).unwrap();
        assert!(split.commute.is_zero());
        assert_eq!(split.coset_reps.len(), 2);
    }

    #[test]
    fn commuting_update_on_nothing_known() {
        let prior = EpistemicState::maximally_mixed(space(3, 1));
        let post = update_commuting(&prior, &element(3, &[&[0, 1]], &[0])).unwrap();
        assert_eq!(post.known_perp(), &span(3, &[&[1, 0]]));
        assert!(post.shift().is_zero());
    }

    #[test]
    fn repeated_measurement_is_stable() {
        let x0 = state(3, &[&[1, 0]], &[0, 0]);
        assert_eq!(update_commuting(&x0, &element(3, &[&[1, 0]], &[0])).unwrap(), x0);
    }

    #[test]
    fn contradicting_commuting_outcome_is_impossible() {
        // 2X = 1 means X = 2, which contradicts the known X = 0.
        let x0 = state(3, &[&[1, 0]], &[0, 0]);
        let e = element(3, &[&[2, 0]], &[1]);
        assert_eq!(gamma_vector(&obs(3, &[2, 0])).unwrap(), Some(ModVector::new(3, [2, 0]).unwrap()));
        assert_eq!(update_commuting(&x0, &e).unwrap_err(), Error::ImpossibleOutcome);
        assert_eq!(outcome_probability(&x0, &e).unwrap(), Rational::from_integer(0));
        let x2 = state(3, &[&[1, 0]], &[2, 0]);
        assert_eq!(update_commuting(&x2, &e).unwrap(), x2);
    }

    #[test]
    fn commuting_rule_rejects_conjugate() {
        let x0 = state(3, &[&[1, 0]], &[0, 0]);
        assert_eq!(
            update_commuting(&x0, &element(3, &[&[0, 1]], &[2])).unwrap_err(),
            Error::NotCommuting
        );
    }

    #[test]
    fn general_update_forgets_conjugate() {
        let x0 = state(3, &[&[1, 0]], &[0, 0]);
        let post = update_general(&x0, &element(3, &[&[0, 1]], &[2])).unwrap();
        assert_eq!(post.known(), &span(3, &[&[0, 1]]));
        assert_eq!(post.shift(), &ModVector::new(3, [0, 2]).unwrap());

        let post = update_general(&x0, &element(3, &[&[1, 2]], &[0])).unwrap();
        assert_eq!(post.known_perp(), &span(3, &[&[1, 1]]));
        assert!(post.shift().is_zero());
    }

    #[test]
    fn general_reduces_to_commuting() {
        let st = state(3, &[&[1, 0, 0, 0]], &[0, 0, 0, 0]);
        let e = element(3, &[&[0, 0, 1, 1]], &[2]);
        assert_eq!(update_general(&st, &e).unwrap(), update_commuting(&st, &e).unwrap());
    }

    #[test]
    fn general_rejects_coarse() {
        let prior = EpistemicState::maximally_mixed(space(6, 1));
        assert_eq!(
            update_general(&prior, &element(6, &[&[3, 0]], &[0])).unwrap_err(),
            Error::CoarseGenerator
        );
    }

    #[test]
    fn coarse_update_on_nothing_known() {
        let prior = EpistemicState::maximally_mixed(space(6, 1));
        let post = update_coarse(&prior, &element(6, &[&[3, 0]], &[0])).unwrap();
        assert_eq!(post.known_perp(), &span(6, &[&[0, 1], &[2, 0]]));
        assert!(post.shift().is_zero());
    }

    #[test]
    fn repeated_coarse_measurement() {
        let st = state(6, &[&[3, 0]], &[0, 0]);
        assert_eq!(update_coarse(&st, &element(6, &[&[3, 0]], &[0])).unwrap(), st);
    }

    #[test]
    fn coarse_update_in_nine() {
        let prior = EpistemicState::maximally_mixed(space(9, 1));
        let post = update_coarse(&prior, &element(9, &[&[3, 0]], &[3])).unwrap();
        assert_eq!(post.support_size(), 27);
        assert_eq!(post.known_perp(), &span(9, &[&[0, 1], &[3, 0]]));
        for p in post.ontic_support().unwrap() {
            assert_eq!(3 * p.entries()[0] % 9, 3);
        }
    }

    #[test]
    fn update_fails_exactly_on_zero_probability() {
        for d in [4u64, 6, 9] {
            let sp = PhaseSpace::new(d, 1).unwrap();
            let mut states = crate::epistemic::pure_states(&sp).unwrap();
            states.push(EpistemicState::maximally_mixed(sp));
            let mut elements = Vec::new();
            for v in sp.points().unwrap().into_iter().filter(|v| !v.is_zero()) {
                let rows = Submodule::howell_form(d, 2, &[v]).unwrap().rows().to_vec();
                let gens = rows.into_iter().map(|r| Observable::from_vector(&sp, r).unwrap()).collect();
                elements.extend(SharpMeasurement::from_shift(sp, gens, sp.origin()).unwrap().elements().unwrap());
            }
            for s in &states {
                for e in &elements {
                    let p = outcome_probability(s, e).unwrap();
                    match update(s, e) {
                        Ok(post) => {
                            assert!(p > Rational::from_integer(0));
                            assert!(post.ontic_support().unwrap().iter().all(|l| e.support_contains(l).unwrap()));
                        }
                        Err(err) => {
                            assert_eq!(err, Error::ImpossibleOutcome);
                            assert_eq!(p, Rational::from_integer(0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coarse_lifts_need_not_commute() {
        // (3,1) and 3·(0,1) commute, their fine parts (3,1) and (0,1) do not
        let prior = state(9, &[&[1, 0]], &[0, 0]);
        let e = element(9, &[&[3, 1], &[0, 3]], &[0, 0]);
        let post = update(&prior, &e).unwrap();
        assert_eq!(post.known(), e.known());
        assert_eq!(post.support_size(), 9);
    }

    #[test]
    fn coarse_branch_choice_does_not_matter() {
        let prior = state(9, &[&[0, 1]], &[0, 4]);
        let e = element(9, &[&[3, 0]], &[6]);
        let branches = coarse_branches(&prior, &e).unwrap();
        assert_eq!(branches.len(), 3);
        let first = posterior_from_branches(&prior, &branches, 0).unwrap();
        for j in 1..branches.len() {
            assert_eq!(posterior_from_branches(&prior, &branches, j).unwrap(), first);
        }
    }

    #[test]
    fn probabilities() {
        let x0 = state(3, &[&[1, 0]], &[0, 0]);
        let ps = outcome_probabilities(&x0, &element(3, &[&[0, 1]], &[0])).unwrap();
        assert!(ps.iter().all(|(_, p)| *p == Rational::new(1, 3)));
        let ps: Vec<Rational> = outcome_probabilities(&x0, &element(3, &[&[1, 0]], &[0]))
            .unwrap()
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        assert_eq!(
            ps,
            vec![Rational::from_integer(1), Rational::from_integer(0), Rational::from_integer(0)]
        );
        let mixed = EpistemicState::maximally_mixed(space(6, 1));
        let ps = outcome_probabilities(&mixed, &element(6, &[&[3, 0]], &[0])).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|(_, p)| *p == Rational::new(1, 2)));
    }

    #[test]
    fn gamma_exists_iff_fine() {
        for a in 0..6i64 {
            for b in 0..6i64 {
                if a == 0 && b == 0 {
                    continue;
                }
                let o = obs(6, &[a, b]);
                assert_eq!(
                    gamma_vector(&o).unwrap().is_some(),
                    classify(&o).unwrap().is_fine(),
                    "{o}"
                );
            }
        }
    }
}
