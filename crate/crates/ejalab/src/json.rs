//! JSON readers for the CLI-facing formats: elements (coordinate or natural
//! matrix form), spectral sets, objectives, and spectral functions.

use serde::Deserialize;
use serde_json::Value;

use crate::algebra::Element;
use crate::error::{EjaError, Result};
use crate::solvers::ObjectiveSpec;
use crate::spectral::{PhiKind, QRep, SpectralSet};

const SYM_READ_TOL: f64 = 1e-12;

/// Accepts the coordinate form {"algebra": {...}, "coords": [...]} and the
/// natural forms {"kind":"sym","matrix":[[...]]} and
/// {"kind":"herm","re":[[...]],"im":[[...]]}.
pub fn element_from_value(v: &Value) -> Result<Element> {
    let obj = v
        .as_object()
        .ok_or_else(|| EjaError::BadConfig("element must be a JSON object".into()))?;
    if obj.contains_key("coords") || obj.contains_key("algebra") {
        return Ok(serde_json::from_value(v.clone())?);
    }
    match obj.get("kind").and_then(Value::as_str) {
        Some("sym") => {
            let rows: Vec<Vec<f64>> = serde_json::from_value(
                obj.get("matrix")
                    .ok_or_else(|| EjaError::BadConfig("sym natural form needs \"matrix\"".into()))?
                    .clone(),
            )?;
            Element::from_sym_matrix(&rows, SYM_READ_TOL)
        }
        Some("herm") => {
            let re: Vec<Vec<f64>> = serde_json::from_value(
                obj.get("re")
                    .ok_or_else(|| EjaError::BadConfig("herm natural form needs \"re\"".into()))?
                    .clone(),
            )?;
            let im: Vec<Vec<f64>> = serde_json::from_value(
                obj.get("im")
                    .ok_or_else(|| EjaError::BadConfig("herm natural form needs \"im\"".into()))?
                    .clone(),
            )?;
            Element::from_herm_matrix(&re, &im, SYM_READ_TOL)
        }
        Some(k) => Err(EjaError::BadConfig(format!(
            "no natural element form for kind \"{k}\""
        ))),
        None => Err(EjaError::BadConfig(
            "element needs \"coords\" or a natural \"kind\" form".into(),
        )),
    }
}

pub fn element_from_str(s: &str) -> Result<Element> {
    element_from_value(&serde_json::from_str(s)?)
}

/// {"algebra": {...}, "variant": "...", ...variant fields}.
pub fn spectral_set_from_str(s: &str) -> Result<SpectralSet> {
    #[derive(Deserialize)]
    struct SetJson {
        algebra: crate::algebra::AlgebraSpec,
        #[serde(flatten)]
        q_rep: QRep,
    }
    let raw: SetJson = serde_json::from_str(s)?;
    SpectralSet::new(raw.algebra, raw.q_rep)
}

/// {"h":"linear","c":<element>} | {"h":"quadratic","center":<element>,"weight":1.0}.
pub fn objective_from_str(s: &str) -> Result<ObjectiveSpec> {
    let v: Value = serde_json::from_str(s)?;
    let obj = v
        .as_object()
        .ok_or_else(|| EjaError::BadConfig("objective must be a JSON object".into()))?;
    match obj.get("h").and_then(Value::as_str) {
        Some("linear") => Ok(ObjectiveSpec::Linear {
            c: element_from_value(obj.get("c").ok_or_else(|| {
                EjaError::BadConfig("linear objective needs \"c\"".into())
            })?)?,
        }),
        Some("quadratic") => {
            let center = element_from_value(obj.get("center").ok_or_else(|| {
                EjaError::BadConfig("quadratic objective needs \"center\"".into())
            })?)?;
            let weight = obj
                .get("weight")
                .and_then(Value::as_f64)
                .ok_or_else(|| EjaError::BadConfig("quadratic objective needs \"weight\"".into()))?;
            Ok(ObjectiveSpec::Quadratic { center, weight })
        }
        other => Err(EjaError::BadConfig(format!(
            "unknown objective kind: {other:?}"
        ))),
    }
}

/// {"phi":"sum"} | {"phi":"top_k","k":2} | {"phi":"log_sum_exp","t":1.0} | …
pub fn phi_from_str(s: &str) -> Result<PhiKind> {
    Ok(serde_json::from_str(s)?)
}
