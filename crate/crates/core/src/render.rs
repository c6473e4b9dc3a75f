//! Text rendering of phase-space functions.
//!
//! A single system is drawn as a d×d grid: one row per p, highest p on top,
//! one column per x, zero cells as '·'. Several systems are listed point by
//! point, nonzero values only.

use crate::epistemic::PhaseSpace;
use crate::error::Result;
use crate::zmod::ModVector;
use crate::Rational;

fn cell(v: Rational) -> String {
    if v == Rational::from_integer(0) {
        "·".to_string()
    } else {
        v.to_string()
    }
}

pub fn render_map<F>(space: &PhaseSpace, f: F) -> Result<String>
where
    F: Fn(&ModVector) -> Rational,
{
    let d = space.d();
    if space.n() != 1 {
        let mut out = String::new();
        for l in space.points()? {
            let v = f(&l);
            if v != Rational::from_integer(0) {
                out.push_str(&format!("{l} {v}\n"));
            }
        }
        return Ok(out);
    }
    let cells: Vec<Vec<String>> = (0..d)
        .rev()
        .map(|p| {
            (0..d)
                .map(|x| cell(f(&ModVector::from_raw(d, vec![x, p]))))
                .collect()
        })
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|c| c.chars().count())
        .chain((0..d).map(|x| x.to_string().len()))
        .max()
        .unwrap_or(1);
    let label = (d - 1).to_string().len();
    let pad = |s: &str| format!("{s}{}", " ".repeat(width - s.chars().count()));
    let mut out = String::new();
    for (row, p) in cells.iter().zip((0..d).rev()) {
        let line: Vec<String> = row.iter().map(|c| pad(c)).collect();
        out.push_str(format!("{p:>label$} | {}", line.join(" ")).trim_end());
        out.push('\n');
    }
    let axis: Vec<String> = (0..d).map(|x| pad(&x.to_string())).collect();
    out.push_str(format!("{} | {}", " ".repeat(label), axis.join(" ")).trim_end());
    out.push('\n');
    Ok(out)
}

/// Renders a point set as a grid with 1 on members.
pub fn render_set(space: &PhaseSpace, points: &[ModVector]) -> Result<String> {
    render_map(space, |l| Rational::from_integer(points.contains(l) as i64))
}
