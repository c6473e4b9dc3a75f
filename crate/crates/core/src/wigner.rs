//! Exact Wigner functions, response functions and the Wigner-side update
//! rules (odd d).
//!
//! Maps are stored densely, indexed by `ModVector::to_index`. A response
//! function is an unnormalized 0/1 indicator, so the normalization of every
//! update is the outcome probability.

use std::fmt;

use crate::epistemic::{EpistemicState, Observable, PhaseSpace};
use crate::error::{Error, Result};
use crate::graining::{classify, fine_decomposition};
use crate::hilbert::OracleWigner;
use crate::measurement::SharpMeasurement;
use crate::zmod::{Form, ModVector, Submodule};
use crate::Rational;

fn require_odd(space: &PhaseSpace) -> Result<()> {
    if space.is_odd() {
        Ok(())
    } else {
        Err(Error::EvenDimension(space.d()))
    }
}

fn zero() -> Rational {
    Rational::from_integer(0)
}

/// Exact quasiprobability over Ω.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WignerMap {
    space: PhaseSpace,
    values: Vec<Rational>,
}

/// Exact response function over Ω.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResponseFunction {
    space: PhaseSpace,
    values: Vec<Rational>,
}

macro_rules! phase_map {
    ($t:ty) => {
        impl $t {
            pub fn from_fn<F>(space: PhaseSpace, f: F) -> Result<Self>
            where
                F: Fn(&ModVector) -> Result<Rational>,
            {
                let values = space
                    .points()?
                    .iter()
                    .map(|l| f(l))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self { space, values })
            }

            pub fn space(&self) -> &PhaseSpace {
                &self.space
            }

            pub fn get(&self, lambda: &ModVector) -> Rational {
                self.values[lambda.to_index()]
            }

            /// Values in `ModVector::to_index` order.
            pub fn values(&self) -> &[Rational] {
                &self.values
            }

            pub fn total(&self) -> Rational {
                self.values.iter().fold(zero(), |acc, v| acc + v)
            }

            /// Points with a nonzero value, sorted.
            pub fn support(&self) -> Vec<ModVector> {
                self.values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != zero())
                    .map(|(i, _)| ModVector::from_index(self.space.d(), self.space.dim(), i))
                    .collect()
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let text = crate::render::render_map(&self.space, |l| self.get(l))
                    .map_err(|_| fmt::Error)?;
                f.write_str(&text)
            }
        }
    };
}

phase_map!(WignerMap);
phase_map!(ResponseFunction);

impl WignerMap {
    fn point(&self, index: usize) -> ModVector {
        ModVector::from_index(self.space.d(), self.space.dim(), index)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| *v >= zero())
    }

    /// Largest pointwise distance to an oracle-computed map.
    pub fn max_abs_diff(&self, oracle: &OracleWigner) -> f64 {
        self.values
            .iter()
            .zip(&oracle.values)
            .map(|(v, o)| (*v.numer() as f64 / *v.denom() as f64 - o).abs())
            .fold(0.0, f64::max)
    }
}

impl ResponseFunction {
    /// The response of the trivial measurement, 1 everywhere.
    pub fn trivial(space: PhaseSpace) -> Result<Self> {
        require_odd(&space)?;
        Self::from_fn(space, |_| Ok(Rational::from_integer(1)))
    }

    /// Pointwise product, the response of a joint question.
    pub fn product(&self, other: &ResponseFunction) -> Result<ResponseFunction> {
        check_spaces(&self.space, &other.space)?;
        Ok(ResponseFunction {
            space: self.space,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    fn indicator(space: PhaseSpace, perp: &Submodule, shift: &ModVector) -> Result<Self> {
        Self::from_fn(space, |l| {
            Ok(Rational::from_integer(perp.contains(&l.sub(shift))? as i64))
        })
    }
}

fn check_spaces(a: &PhaseSpace, b: &PhaseSpace) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// (1/|V⊥|)·δ_{V⊥+w}, the Wigner function of the matching stabilizer state.
pub fn wigner_of_epistemic(state: &EpistemicState) -> Result<WignerMap> {
    require_odd(state.space())?;
    let weight = Rational::new(1, state.support_size() as i64);
    WignerMap::from_fn(*state.space(), |l| {
        Ok(if state.support_contains(l)? { weight } else { zero() })
    })
}

/// δ_{V_Π⊥+r} for an element with fine-graining generators.
pub fn response_of_element(element: &SharpMeasurement) -> Result<ResponseFunction> {
    require_odd(element.space())?;
    if !element.is_fine()? {
        return Err(Error::CoarseGenerator);
    }
    ResponseFunction::indicator(*element.space(), element.known_perp(), element.shift())
}

/// Indicator of Σ = σ for a fine observable.
fn fine_indicator(obs: &Observable, outcome: u64, space: PhaseSpace) -> Result<ResponseFunction> {
    let d = space.d();
    ResponseFunction::from_fn(space, |l| {
        Ok(Rational::from_integer((obs.sigma().dot(l) == outcome % d) as i64))
    })
}

/// The fine-branch responses R_fg^(j) of a coarse outcome, one per
/// distinct fine coset.
pub fn fine_responses(obs: &Observable, outcome: u64) -> Result<Vec<ResponseFunction>> {
    let space = PhaseSpace::new(obs.sigma().modulus(), obs.sigma().len() / 2)?;
    require_odd(&space)?;
    let fine_perp = Submodule::howell_form(space.d(), space.dim(), &[classify(obs)?.fine.into_sigma()])?
        .complement(Form::Euclidean)?;
    fine_decomposition(obs, outcome)?
        .iter()
        .map(|b| ResponseFunction::indicator(space, &fine_perp, &b.shift))
        .collect()
}

/// Σ_j R_fg^(j), the union of the fine cosets, i.e. δ_{V_cg⊥+r_cg}.
pub fn coarse_response(obs: &Observable, outcome: u64) -> Result<ResponseFunction> {
    let mut parts = fine_responses(obs, outcome)?.into_iter();
    let first = parts.next().expect("at least one fine branch");
    Ok(parts.fold(first, |acc, r| ResponseFunction {
        space: acc.space,
        values: acc.values.iter().zip(&r.values).map(|(a, b)| a + b).collect(),
    }))
}

/// Product over generators of the fine indicator or the coarse union.
pub fn element_response(element: &SharpMeasurement) -> Result<ResponseFunction> {
    let space = *element.space();
    let mut out = ResponseFunction::trivial(space)?;
    for (g, o) in element.generators().iter().zip(element.outcomes()) {
        let r = if classify(g)?.is_fine() {
            fine_indicator(g, o.value(), space)?
        } else {
            coarse_response(g, o.value())?
        };
        out = out.product(&r)?;
    }
    Ok(out)
}

/// N = Σ_λ W(λ)R(λ), the outcome probability.
pub fn wigner_born(w: &WignerMap, r: &ResponseFunction) -> Rational {
    w.values
        .iter()
        .zip(&r.values)
        .fold(zero(), |acc, (a, b)| acc + a * b)
}

fn normalized(space: PhaseSpace, raw: Vec<Rational>) -> Result<WignerMap> {
    let n = raw.iter().fold(zero(), |acc, v| acc + v);
    if n == zero() {
        return Err(Error::ImpossibleOutcome);
    }
    Ok(WignerMap {
        space,
        values: raw.into_iter().map(|v| v / n).collect(),
    })
}

/// W′ = W·R / N.
pub fn update_product(w: &WignerMap, r: &ResponseFunction) -> Result<WignerMap> {
    check_spaces(&w.space, &r.space)?;
    normalized(w.space, w.values.iter().zip(&r.values).map(|(a, b)| a * b).collect())
}

/// Σ_t W(λ − t), the average over shifts before the product.
fn randomized(w: &WignerMap, coset_reps: &[ModVector]) -> Result<Vec<Rational>> {
    for t in coset_reps {
        w.space.check(t)?;
    }
    Ok((0..w.values.len())
        .map(|i| {
            let l = w.point(i);
            coset_reps
                .iter()
                .fold(zero(), |acc, t| acc + w.get(&l.sub(t)))
        })
        .collect())
}

/// W′(λ) = (1/N) Σ_t W(λ − t) R(λ).
pub fn update_randomized(w: &WignerMap, r: &ResponseFunction, coset_reps: &[ModVector]) -> Result<WignerMap> {
    check_spaces(&w.space, &r.space)?;
    let smeared = randomized(w, coset_reps)?;
    normalized(w.space, smeared.iter().zip(&r.values).map(|(a, b)| a * b).collect())
}

/// W′(λ) = (1/N)(1/K) Σ_t Σ_j W(λ − t) R_fg^(j)(λ).
pub fn update_coarse_wigner(
    w: &WignerMap,
    obs: &Observable,
    outcome: u64,
    coset_reps: &[ModVector],
) -> Result<WignerMap> {
    let parts = fine_responses(obs, outcome)?;
    let k = Rational::new(1, parts.len() as i64);
    let smeared = randomized(w, coset_reps)?;
    let raw = (0..smeared.len())
        .map(|i| parts.iter().fold(zero(), |acc, r| acc + smeared[i] * r.values[i]) * k)
        .collect();
    normalized(w.space, raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{outcome_probability, split_commuting, update, update_general};

    fn space(d: u64) -> PhaseSpace {
        PhaseSpace::new(d, 1).unwrap()
    }

    fn obs(d: u64, c: &[i64]) -> Observable {
        Observable::new(&space(d), c).unwrap()
    }

    fn state(d: u64, gens: &[&[i64]], w: &[i64]) -> EpistemicState {
        let s = space(d);
        let rows: Vec<ModVector> = gens.iter().map(|g| s.point(g).unwrap()).collect();
        EpistemicState::new(s, Submodule::howell_form(d, 2, &rows).unwrap(), s.point(w).unwrap()).unwrap()
    }

    fn element(d: u64, gens: &[&[i64]], outcomes: &[u64]) -> SharpMeasurement {
        SharpMeasurement::new(space(d), gens.iter().map(|g| obs(d, g)).collect(), outcomes).unwrap()
    }

    fn r(n: i64, m: i64) -> Rational {
        Rational::new(n, m)
    }

    fn column(d: u64, xs: &[u64], weight: Rational) -> Vec<(ModVector, Rational)> {
        space(d)
            .points()
            .unwrap()
            .into_iter()
            .map(|l| {
                let v = if xs.contains(&l.entries()[0]) { weight } else { zero() };
                (l, v)
            })
            .collect()
    }

    fn assert_map(w: &WignerMap, expected: &[(ModVector, Rational)]) {
        for (l, v) in expected {
            assert_eq!(w.get(l), *v, "{l}");
        }
    }

    #[test]
    fn state_maps() {
        let x0 = wigner_of_epistemic(&state(3, &[&[1, 0]], &[0, 0])).unwrap();
        assert_map(&x0, &column(3, &[0], r(1, 3)));
        let mixed = wigner_of_epistemic(&EpistemicState::maximally_mixed(space(3))).unwrap();
        assert!(mixed.values().iter().all(|v| *v == r(1, 9)));
        let coarse = wigner_of_epistemic(&state(9, &[&[3, 0]], &[0, 0])).unwrap();
        assert_eq!(coarse.support().len(), 27);
        assert_eq!(coarse.total(), r(1, 1));
        assert_eq!(
            wigner_of_epistemic(&EpistemicState::maximally_mixed(space(4))).unwrap_err(),
            Error::EvenDimension(4)
        );
    }

    #[test]
    fn responses() {
        let rx = response_of_element(&element(3, &[&[1, 0]], &[0])).unwrap();
        assert_eq!(rx.support().len(), 3);
        assert!(rx.support().iter().all(|l| l.entries()[0] == 0));
        assert!(ResponseFunction::trivial(space(3))
            .unwrap()
            .values()
            .iter()
            .all(|v| *v == r(1, 1)));
        let diag = response_of_element(&element(3, &[&[1, 1]], &[1])).unwrap();
        assert_eq!(diag.support().len(), 3);
        assert!(diag.support().iter().all(|l| (l.entries()[0] + l.entries()[1]) % 3 == 1));
        assert_eq!(
            response_of_element(&element(9, &[&[3, 0]], &[0])).unwrap_err(),
            Error::CoarseGenerator
        );
    }

    #[test]
    fn responses_of_full_measurement_sum_to_one() {
        let e = element(3, &[&[1, 2]], &[0]);
        let mut sum = [zero(); 9];
        for el in e.elements().unwrap() {
            for (s, v) in sum.iter_mut().zip(response_of_element(&el).unwrap().values()) {
                *s += v;
            }
        }
        assert!(sum.iter().all(|v| *v == r(1, 1)));
    }

    #[test]
    fn coarse_responses() {
        let three_x = obs(9, &[3, 0]);
        let zero_resp = coarse_response(&three_x, 0).unwrap();
        assert_map(
            &WignerMap {
                space: space(9),
                values: zero_resp.values().to_vec(),
            },
            &column(9, &[0, 3, 6], r(1, 1)),
        );
        assert_eq!(fine_responses(&three_x, 0).unwrap().len(), 3);
        assert_eq!(
            coarse_response(&three_x, 1).unwrap_err(),
            Error::InvalidOutcome {
                outcome: 1,
                degeneracy: 3
            }
        );
        let three = coarse_response(&three_x, 3).unwrap();
        let xs: Vec<u64> = three.support().iter().map(|l| l.entries()[0]).collect();
        assert!(xs.iter().all(|x| [1, 4, 7].contains(x)));
        assert_eq!(three.support().len(), 27);
    }

    #[test]
    fn product_updates() {
        let mixed = wigner_of_epistemic(&EpistemicState::maximally_mixed(space(3))).unwrap();
        let rx = response_of_element(&element(3, &[&[1, 0]], &[0])).unwrap();
        assert_map(&update_product(&mixed, &rx).unwrap(), &column(3, &[0], r(1, 3)));
        let trivial = ResponseFunction::trivial(space(3)).unwrap();
        assert_eq!(update_product(&mixed, &trivial).unwrap(), mixed);
        let x0 = wigner_of_epistemic(&state(3, &[&[1, 0]], &[0, 0])).unwrap();
        assert_eq!(update_product(&x0, &rx).unwrap(), x0);
        let rx1 = response_of_element(&element(3, &[&[1, 0]], &[1])).unwrap();
        assert_eq!(update_product(&x0, &rx1).unwrap_err(), Error::ImpossibleOutcome);
    }

    #[test]
    fn randomized_updates() {
        let prior = state(3, &[&[1, 0]], &[0, 0]);
        let e = element(3, &[&[1, 1]], &[0]);
        let split = split_commuting(&prior, &e).unwrap();
        let post = update_randomized(
            &wigner_of_epistemic(&prior).unwrap(),
            &response_of_element(&e).unwrap(),
            &split.coset_reps,
        )
        .unwrap();
        for l in post.support() {
            assert_eq!((l.entries()[0] + l.entries()[1]) % 3, 0);
        }
        assert_eq!(post.support().len(), 3);
        assert_eq!(post, wigner_of_epistemic(&update_general(&prior, &e).unwrap()).unwrap());

        let rx = response_of_element(&element(3, &[&[1, 0]], &[0])).unwrap();
        let w = wigner_of_epistemic(&prior).unwrap();
        assert_eq!(
            update_randomized(&w, &rx, &[space(3).origin()]).unwrap(),
            update_product(&w, &rx).unwrap()
        );

        let p1 = state(3, &[&[0, 1]], &[0, 1]);
        let e = element(3, &[&[1, 0]], &[2]);
        let split = split_commuting(&p1, &e).unwrap();
        let post = update_randomized(
            &wigner_of_epistemic(&p1).unwrap(),
            &response_of_element(&e).unwrap(),
            &split.coset_reps,
        )
        .unwrap();
        assert_map(&post, &column(3, &[2], r(1, 3)));
    }

    #[test]
    fn coarse_wigner_updates() {
        let three_x = obs(9, &[3, 0]);
        let mixed = EpistemicState::maximally_mixed(space(9));
        let post = update_coarse_wigner(&wigner_of_epistemic(&mixed).unwrap(), &three_x, 0, &[space(9).origin()])
            .unwrap();
        assert_map(&post, &column(9, &[0, 3, 6], r(1, 27)));

        let x0 = state(9, &[&[1, 0]], &[0, 0]);
        let e = element(9, &[&[3, 0]], &[0]);
        let reps = split_commuting(&x0, &e).unwrap().coset_reps;
        let w = wigner_of_epistemic(&x0).unwrap();
        assert_eq!(update_coarse_wigner(&w, &three_x, 0, &reps).unwrap(), w);

        let p0 = state(9, &[&[0, 1]], &[0, 0]);
        let e = element(9, &[&[3, 0]], &[3]);
        let reps = split_commuting(&p0, &e).unwrap().coset_reps;
        let w = wigner_of_epistemic(&p0).unwrap();
        let post = update_coarse_wigner(&w, &three_x, 3, &reps).unwrap();
        assert_eq!(post, wigner_of_epistemic(&update(&p0, &e).unwrap()).unwrap());
        assert_eq!(post.support().len(), 9);
        assert_eq!(
            post,
            update_randomized(&w, &coarse_response(&three_x, 3).unwrap(), &reps).unwrap()
        );
    }

    #[test]
    fn born_rule() {
        let x0 = wigner_of_epistemic(&state(3, &[&[1, 0]], &[0, 0])).unwrap();
        assert_eq!(
            wigner_born(&x0, &response_of_element(&element(3, &[&[1, 0]], &[0])).unwrap()),
            r(1, 1)
        );
        let e = element(3, &[&[0, 1]], &[0]);
        assert_eq!(wigner_born(&x0, &response_of_element(&e).unwrap()), r(1, 3));
        assert_eq!(
            outcome_probability(&state(3, &[&[1, 0]], &[0, 0]), &e).unwrap(),
            r(1, 3)
        );
        let mixed = wigner_of_epistemic(&EpistemicState::maximally_mixed(space(9))).unwrap();
        assert_eq!(
            wigner_born(&mixed, &coarse_response(&obs(9, &[3, 0]), 0).unwrap()),
            r(1, 3)
        );
    }
}
