//! JSON form of sparse series.
//!
//! Terms carry full-precision integer indices (`serde_json`'s
//! arbitrary-precision numbers; mode indices reach 10^24). Separable
//! coefficients serialize as amplitude + profile tag or samples; general
//! complex coefficients as `samples_re`/`samples_im` arrays.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use super::grid::RadialGrid;
use super::profile::{ClosedForm, RadialProfile};
use super::series::{Coeff, ModeIndex, SparseFourierSeries};
use crate::error::{Error, Result};

pub fn big_to_number(x: &BigInt) -> Value {
    let n: serde_json::Number =
        serde_json::from_str(&x.to_string()).expect("integer string is a valid JSON number");
    Value::Number(n)
}

pub fn value_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| Error::argument(format!("'{n}' is not an integer"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::argument(format!("'{s}' is not an integer"))),
        _ => Err(Error::argument("expected an integer")),
    }
}

fn profile_to_json(p: &RadialProfile) -> Value {
    match p.form() {
        Some(ClosedForm::Zero) => json!("zero"),
        Some(ClosedForm::LinearR) => json!("linear_r"),
        Some(ClosedForm::Bump) => json!("bump"),
        Some(ClosedForm::Cutoff) => json!("cutoff"),
        Some(ClosedForm::Constant(c)) => json!({ "constant": c }),
        None => json!({ "samples": p.values() }),
    }
}

fn profile_from_json(v: &Value, grid: &RadialGrid) -> Result<RadialProfile> {
    if let Some(tag) = v.as_str() {
        let form = match tag {
            "zero" => ClosedForm::Zero,
            "linear_r" => ClosedForm::LinearR,
            "bump" => ClosedForm::Bump,
            "cutoff" => ClosedForm::Cutoff,
            other => return Err(Error::argument(format!("unknown profile tag '{other}'"))),
        };
        return Ok(RadialProfile::from_form(grid, form));
    }
    if let Some(c) = v.get("constant").and_then(Value::as_f64) {
        return Ok(RadialProfile::from_form(grid, ClosedForm::Constant(c)));
    }
    if let Some(samples) = v.get("samples").and_then(Value::as_array) {
        let values: Option<Vec<f64>> = samples.iter().map(Value::as_f64).collect();
        let values = values.ok_or_else(|| Error::argument("profile samples must be numbers"))?;
        if values.len() != grid.len {
            return Err(Error::GridMismatch(format!(
                "profile has {} samples, grid {}",
                values.len(),
                grid.len
            )));
        }
        return RadialProfile::from_values(values);
    }
    Err(Error::argument("unrecognized profile encoding"))
}

pub fn series_to_json(s: &SparseFourierSeries) -> Value {
    let grid = s.grid();
    let terms: Vec<Value> = s
        .terms()
        .map(|(idx, coeff)| {
            let mut term = Map::new();
            term.insert(
                "idx".into(),
                Value::Array(vec![
                    big_to_number(&idx.p),
                    big_to_number(&idx.q),
                    big_to_number(&idx.m),
                ]),
            );
            match coeff {
                Coeff::Sep { amp, profile } => {
                    term.insert("re".into(), json!(amp.re));
                    term.insert("im".into(), json!(amp.im));
                    term.insert("profile".into(), profile_to_json(profile));
                }
                Coeff::Grid(values) => {
                    term.insert("re".into(), json!(1.0));
                    term.insert("im".into(), json!(0.0));
                    term.insert(
                        "profile".into(),
                        json!({
                            "samples_re": values.iter().map(|z| z.re).collect::<Vec<_>>(),
                            "samples_im": values.iter().map(|z| z.im).collect::<Vec<_>>(),
                        }),
                    );
                }
            }
            Value::Object(term)
        })
        .collect();
    json!({
        "grid": { "r_min": grid.r_min, "r_max": grid.r_max, "len": grid.len },
        "terms": terms,
    })
}

pub fn series_from_json(v: &Value) -> Result<SparseFourierSeries> {
    let g = v
        .get("grid")
        .ok_or_else(|| Error::argument("series needs a 'grid' field"))?;
    let grid = RadialGrid::new(
        g.get("r_min").and_then(Value::as_f64).unwrap_or(0.0),
        g.get("r_max").and_then(Value::as_f64).unwrap_or(0.0),
        g.get("len").and_then(Value::as_u64).unwrap_or(0) as usize,
    )?;
    let mut out = SparseFourierSeries::zero(grid);
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::argument("series needs a 'terms' array"))?;
    for t in terms {
        let idx_arr = t
            .get("idx")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::argument("term needs 'idx':[p,q,m]"))?;
        if idx_arr.len() != 3 {
            return Err(Error::argument("'idx' must have three entries"));
        }
        let idx = ModeIndex::from_bigs(
            value_to_big(&idx_arr[0])?,
            value_to_big(&idx_arr[1])?,
            value_to_big(&idx_arr[2])?,
        );
        let re = t.get("re").and_then(Value::as_f64).unwrap_or(0.0);
        let im = t.get("im").and_then(Value::as_f64).unwrap_or(0.0);
        let prof = t
            .get("profile")
            .ok_or_else(|| Error::argument("term needs a 'profile'"))?;
        let coeff = if let (Some(sr), si) = (
            prof.get("samples_re").and_then(Value::as_array),
            prof.get("samples_im").and_then(Value::as_array),
        ) {
            let re_v: Option<Vec<f64>> = sr.iter().map(Value::as_f64).collect();
            let re_v = re_v.ok_or_else(|| Error::argument("samples_re must be numbers"))?;
            let im_v: Vec<f64> = match si {
                Some(arr) => {
                    let x: Option<Vec<f64>> = arr.iter().map(Value::as_f64).collect();
                    x.ok_or_else(|| Error::argument("samples_im must be numbers"))?
                }
                None => vec![0.0; re_v.len()],
            };
            if re_v.len() != grid.len || im_v.len() != grid.len {
                return Err(Error::GridMismatch("complex samples vs grid".into()));
            }
            Coeff::Grid(
                re_v.into_iter()
                    .zip(im_v)
                    .map(|(a, b)| num_complex::Complex64::new(a, b))
                    .collect(),
            )
        } else {
            Coeff::Sep {
                amp: num_complex::Complex64::new(re, im),
                profile: profile_from_json(prof, &grid)?,
            }
        };
        out.add_term(idx, coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::Axis;
    use num_complex::Complex64;

    #[test]
    fn round_trip_mixed_series() {
        let g = RadialGrid::DEFAULT;
        let bump = RadialProfile::from_form(&g, ClosedForm::Bump);
        let mut s = SparseFourierSeries::sin_mode(g, Axis::Theta1, 7, 0.25, bump);
        // a general complex coefficient
        s.add_term(
            ModeIndex::new(2, -1, 3),
            Coeff::Grid(
                g.nodes()
                    .map(|r| Complex64::new(r, -1.5 * r * r))
                    .collect(),
            ),
        );
        // a huge index
        s.add_term(
            ModeIndex::from_bigs(
                BigInt::from(10u32).pow(24),
                BigInt::from(0),
                BigInt::from(0),
            ),
            Coeff::Sep {
                amp: Complex64::new(1e-18, 0.0),
                profile: RadialProfile::from_form(&g, ClosedForm::Constant(1.0)),
            },
        );
        let j = series_to_json(&s);
        let back = series_from_json(&j).unwrap();
        assert_eq!(back.len(), s.len());
        let diff = s.sub(&back).unwrap();
        assert!(diff.norm_sup() < 1e-15);
        // the huge index survives exactly
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("1000000000000000000000000"));
    }
}
