//! Cross-checks between the epistemic theory, exact Wigner functions and the
//! dense Hilbert-space oracle (odd d).

use rayon::prelude::*;
use serde::Serialize;

use crate::epistemic::{pure_states, EpistemicState, Observable, PhaseSpace, maximal_isotropic_submodules};
use crate::error::{Error, Result};
use crate::graining::classify;
use crate::hilbert::{self, density_of_group, luders, projector_of_element, wigner_of_density, TOLERANCE};
use crate::measurement::{outcome_probability, split_commuting, update, SharpMeasurement};
use crate::stabilizer::{from_epistemic, ChiConvention};
use crate::wigner::{element_response, update_coarse_wigner, update_randomized, wigner_born, wigner_of_epistemic, WignerMap};
use crate::zmod::{ModVector, Submodule};
use crate::Rational;

/// M = JV. Then V⊥ is the symplectic complement of M.
pub fn j_map(v: &Submodule) -> Result<Submodule> {
    let rows: Vec<ModVector> = v.rows().iter().map(|r| r.apply_j()).collect();
    Submodule::howell_form(v.modulus(), v.ambient(), &rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RouteResult {
    pub route: &'static str,
    /// "ok" or "impossible".
    pub status: &'static str,
    /// Exact fraction for exact routes, decimal for the oracle.
    pub probability: Option<String>,
}

/// One line of a JSON-lines report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub routes: Vec<RouteResult>,
    pub pass: bool,
    pub max_abs_err: f64,
}

impl CaseReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

fn require_odd(space: &PhaseSpace) -> Result<()> {
    if space.is_odd() {
        Ok(())
    } else {
        Err(Error::EvenDimension(space.d()))
    }
}

fn exact(route: &'static str, p: Rational) -> RouteResult {
    RouteResult {
        route,
        status: "ok",
        probability: Some(p.to_string()),
    }
}

fn impossible(route: &'static str) -> RouteResult {
    RouteResult {
        route,
        status: "impossible",
        probability: None,
    }
}

fn state_label(state: &EpistemicState) -> String {
    format!("d={} n={} {}", state.space().d(), state.space().n(), state)
}

/// Distribution, exact Wigner map and oracle Wigner map of one state.
pub fn check_state_equivalence(state: &EpistemicState, conv: ChiConvention) -> Result<CaseReport> {
    let space = *state.space();
    require_odd(&space)?;
    let dist = state.distribution()?;
    let from_dist = WignerMap::from_fn(space, |l| Ok(dist.probability(l)))?;
    let exact_map = wigner_of_epistemic(state)?;
    let rho = density_of_group(&from_epistemic(state, conv)?)?;
    let oracle = wigner_of_density(&rho, conv)?;
    let err = exact_map.max_abs_diff(&oracle);
    let one = Rational::from_integer(1);
    Ok(CaseReport {
        case: state_label(state),
        routes: vec![
            exact("st", dist.total()),
            exact("wigner", exact_map.total()),
            RouteResult {
                route: "oracle",
                status: "ok",
                probability: Some(format!("{:.12}", rho.trace().re)),
            },
        ],
        pass: from_dist == exact_map && err <= TOLERANCE && exact_map.total() == one,
        max_abs_err: err,
    })
}

type Route<T> = std::result::Result<T, ()>;

fn classify_outcome<T>(r: Result<T>) -> Result<Route<T>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Error::ImpossibleOutcome) => Ok(Err(())),
        Err(e) => Err(e),
    }
}

/// Posterior through the Wigner-side rules.
pub fn wigner_route(state: &EpistemicState, element: &SharpMeasurement) -> Result<(WignerMap, Rational)> {
    let w = wigner_of_epistemic(state)?;
    let r = element_response(element)?;
    let reps = split_commuting(state, element)?.coset_reps;
    let prob = wigner_born(&w, &r);
    let gens = element.generators();
    let post = if gens.len() == 1 && classify(&gens[0])?.is_coarse() {
        update_coarse_wigner(&w, &gens[0], element.outcomes()[0].value(), &reps)?
    } else {
        update_randomized(&w, &r, &reps)?
    };
    Ok((post, prob))
}

/// Posterior through the epistemic update rules.
pub fn st_route(state: &EpistemicState, element: &SharpMeasurement) -> Result<(WignerMap, Rational)> {
    let prob = outcome_probability(state, element)?;
    let post = update(state, element)?;
    Ok((wigner_of_epistemic(&post)?, prob))
}

/// Posterior through ΠρΠ on the dense oracle.
pub fn oracle_route(
    state: &EpistemicState,
    element: &SharpMeasurement,
    conv: ChiConvention,
) -> Result<(hilbert::OracleWigner, f64)> {
    let rho = density_of_group(&from_epistemic(state, conv)?)?;
    let proj = projector_of_element(element, conv)?;
    let (post, prob) = luders(&rho, &proj)?;
    Ok((wigner_of_density(&post, conv)?, prob))
}

/// Runs all three routes on one (state, element) pair.
pub fn check_update_equivalence(
    state: &EpistemicState,
    element: &SharpMeasurement,
    conv: ChiConvention,
) -> Result<CaseReport> {
    require_odd(state.space())?;
    let st = classify_outcome(st_route(state, element))?;
    let wg = classify_outcome(wigner_route(state, element))?;
    let or = classify_outcome(oracle_route(state, element, conv))?;
    let outcomes: Vec<String> = element.outcomes().iter().map(|o| o.to_string()).collect();
    let case = format!(
        "{} | measure [{}] = [{}]",
        state_label(state),
        element
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        outcomes.join(", ")
    );
    let mut routes = Vec::new();
    let mut max_abs_err: f64 = 0.0;
    let pass = match (&st, &wg, &or) {
        (Ok((st_map, st_p)), Ok((wg_map, wg_p)), Ok((or_map, or_p))) => {
            routes.push(exact("st", *st_p));
            routes.push(exact("wigner", *wg_p));
            routes.push(RouteResult {
                route: "oracle",
                status: "ok",
                probability: Some(format!("{or_p:.12}")),
            });
            let p = *st_p.numer() as f64 / *st_p.denom() as f64;
            max_abs_err = st_map.max_abs_diff(or_map).max((p - or_p).abs());
            st_map == wg_map && st_p == wg_p && max_abs_err <= TOLERANCE
        }
        _ => {
            for (name, ok) in [("st", st.is_ok()), ("wigner", wg.is_ok()), ("oracle", or.is_ok())] {
                routes.push(if ok {
                    RouteResult {
                        route: name,
                        status: "ok",
                        probability: None,
                    }
                } else {
                    impossible(name)
                });
            }
            st.is_err() && wg.is_err() && or.is_err()
        }
    };
    Ok(CaseReport {
        case,
        routes,
        pass,
        max_abs_err,
    })
}

/// One representative observable per nonzero cyclic submodule, plus, for
/// several systems, the Howell generators of each maximal isotropic
/// submodule. Coarse observables only when asked.
pub fn measurement_catalogue(space: &PhaseSpace, include_coarse: bool) -> Result<Vec<SharpMeasurement>> {
    let mut lines: Vec<Submodule> = Vec::new();
    for v in space.points()? {
        if v.is_zero() {
            continue;
        }
        let line = Submodule::howell_form(space.d(), space.dim(), &[v])?;
        if !lines.contains(&line) {
            lines.push(line);
        }
    }
    let mut generator_sets: Vec<Vec<ModVector>> = lines.into_iter().map(|l| l.rows().to_vec()).collect();
    if space.n() > 1 {
        for m in maximal_isotropic_submodules(space)? {
            generator_sets.push(m.rows().to_vec());
        }
    }
    let mut out = Vec::new();
    for rows in generator_sets {
        let gens: Vec<Observable> = rows
            .into_iter()
            .map(|r| Observable::from_vector(space, r))
            .collect::<Result<_>>()?;
        let mut fine = true;
        for g in &gens {
            fine &= classify(g)?.is_fine();
        }
        if !fine && !include_coarse {
            continue;
        }
        let first = SharpMeasurement::from_shift(*space, gens, space.origin())?;
        out.extend(first.elements()?);
    }
    Ok(out)
}

/// Every pure state against every catalogued element, in parallel.
pub fn sweep(space: &PhaseSpace, include_coarse: bool, conv: ChiConvention) -> Result<Vec<CaseReport>> {
    require_odd(space)?;
    let states = pure_states(space)?;
    let elements = measurement_catalogue(space, include_coarse)?;
    let pairs: Vec<(&EpistemicState, &SharpMeasurement)> = states
        .iter()
        .flat_map(|s| elements.iter().map(move |e| (s, e)))
        .collect();
    pairs
        .par_iter()
        .map(|(s, e)| check_update_equivalence(s, e, conv))
        .collect()
}
