//! JSON descriptor for inner-function specs and weight functions.
//!
//! Schema (all top-level keys optional; `{}` describes `I ≡ 1`):
//!
//! ```json
//! {
//!   "blaschke": {"zeros": [[re, im], ...]}
//!            or {"family": "radial_power",
//!                "params": {"scale": s, "decay": d, "angle_scale": a}}
//!            or null,
//!   "singular": {"atoms": [{"theta": t, "mass": m}, ...]}
//!            or {"family": "section3", "params": {"epsilon": e, "n_cut": k}}
//!            or null,
//!   "phi": {"kind": "power", "p": x}
//!       or {"kind": "power_log", "p": x, "c": y, "sign": "+" | "-"}
//!       or null
//! }
//! ```
//!
//! Angles are radians. The `power_log` sign follows the `x^p·log^{∓c}(1/x)`
//! convention: `"+"` divides by `log^c(1/x)`, `"-"` multiplies by it (the
//! Unicode minus `−` is accepted too). Errors carry the JSON pointer of the
//! offending element.

use msk_core::inner_core::make_section3_measure;
use msk_core::{
    AdmissiblePhi, BlaschkeFamily, BlaschkeSpec, CircleAtom, InnerFunctionSpec, LogSign,
    SingularMeasureSpec, UnitDiskPoint,
};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("config error at {pointer}: {message}")]
pub struct ParseError {
    pub pointer: String,
    pub message: String,
}

impl ParseError {
    fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self { pointer: pointer.into(), message: message.into() }
    }
}

/// Parsed configuration document: the inner-function spec plus an optional
/// weight function.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigDoc {
    pub spec: InnerFunctionSpec,
    pub phi: Option<AdmissiblePhi>,
}

pub fn parse_config(text: &str) -> Result<ConfigDoc, ParseError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| ParseError::new("", format!("not well-formed JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| ParseError::new("", "top level must be a JSON object"))?;

    for key in obj.keys() {
        if !matches!(key.as_str(), "blaschke" | "singular" | "phi") {
            return Err(ParseError::new(
                format!("/{key}"),
                "unknown key (expected blaschke, singular, phi)",
            ));
        }
    }

    let blaschke = match obj.get("blaschke") {
        None | Some(Value::Null) => BlaschkeSpec::empty(),
        Some(v) => parse_blaschke(v)?,
    };
    let singular = match obj.get("singular") {
        None | Some(Value::Null) => SingularMeasureSpec::empty(),
        Some(v) => parse_singular(v)?,
    };
    let phi = match obj.get("phi") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_phi(v)?),
    };

    let spec = InnerFunctionSpec::new(blaschke, singular);
    let report = msk_core::inner_core::validate_spec(&spec);
    if !report.ok() {
        let msg: Vec<String> = report.errors().map(|f| f.message.clone()).collect();
        return Err(ParseError::new("/", msg.join("; ")));
    }
    Ok(ConfigDoc { spec, phi })
}

fn get_number(v: &Value, pointer: &str) -> Result<f64, ParseError> {
    v.as_f64().ok_or_else(|| ParseError::new(pointer, "expected a finite number"))
}

fn parse_blaschke(v: &Value) -> Result<BlaschkeSpec, ParseError> {
    let obj = v
        .as_object()
        .ok_or_else(|| ParseError::new("/blaschke", "expected an object or null"))?;
    match (obj.get("zeros"), obj.get("family")) {
        (Some(zeros), None) => {
            let arr = zeros
                .as_array()
                .ok_or_else(|| ParseError::new("/blaschke/zeros", "expected an array"))?;
            let mut out = Vec::with_capacity(arr.len());
            for (i, z) in arr.iter().enumerate() {
                let ptr = format!("/blaschke/zeros/{i}");
                let pair = z
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| ParseError::new(&ptr, "expected a [re, im] pair"))?;
                let re = get_number(&pair[0], &format!("{ptr}/0"))?;
                let im = get_number(&pair[1], &format!("{ptr}/1"))?;
                out.push(
                    UnitDiskPoint::new(re, im)
                        .map_err(|e| ParseError::new(&ptr, e.to_string()))?,
                );
            }
            Ok(BlaschkeSpec::ExplicitZeros(out))
        }
        (None, Some(name)) => {
            let name = name
                .as_str()
                .ok_or_else(|| ParseError::new("/blaschke/family", "expected a string"))?;
            if name != "radial_power" {
                return Err(ParseError::new(
                    "/blaschke/family",
                    format!("unknown family {name:?} (available: radial_power)"),
                ));
            }
            let params = obj
                .get("params")
                .and_then(Value::as_object)
                .ok_or_else(|| ParseError::new("/blaschke/params", "expected a params object"))?;
            let fetch = |key: &str| -> Result<f64, ParseError> {
                params
                    .get(key)
                    .ok_or_else(|| {
                        ParseError::new(format!("/blaschke/params/{key}"), "missing parameter")
                    })
                    .and_then(|v| get_number(v, &format!("/blaschke/params/{key}")))
            };
            let fam = BlaschkeFamily::radial_power(fetch("scale")?, fetch("decay")?, fetch("angle_scale")?)
                .map_err(|e| ParseError::new("/blaschke/params", e.to_string()))?;
            Ok(BlaschkeSpec::Family(fam))
        }
        _ => Err(ParseError::new(
            "/blaschke",
            "expected exactly one of \"zeros\" or \"family\"",
        )),
    }
}

fn parse_singular(v: &Value) -> Result<SingularMeasureSpec, ParseError> {
    let obj = v
        .as_object()
        .ok_or_else(|| ParseError::new("/singular", "expected an object or null"))?;
    match (obj.get("atoms"), obj.get("family")) {
        (Some(atoms), None) => {
            let arr = atoms
                .as_array()
                .ok_or_else(|| ParseError::new("/singular/atoms", "expected an array"))?;
            let mut out = Vec::with_capacity(arr.len());
            for (i, a) in arr.iter().enumerate() {
                let ptr = format!("/singular/atoms/{i}");
                let item = a
                    .as_object()
                    .ok_or_else(|| ParseError::new(&ptr, "expected {\"theta\": t, \"mass\": m}"))?;
                let theta = item
                    .get("theta")
                    .ok_or_else(|| ParseError::new(format!("{ptr}/theta"), "missing"))
                    .and_then(|v| get_number(v, &format!("{ptr}/theta")))?;
                let mass = item
                    .get("mass")
                    .ok_or_else(|| ParseError::new(format!("{ptr}/mass"), "missing"))
                    .and_then(|v| get_number(v, &format!("{ptr}/mass")))?;
                out.push(
                    CircleAtom::new(theta, mass).map_err(|e| ParseError::new(&ptr, e.to_string()))?,
                );
            }
            Ok(SingularMeasureSpec::ExplicitAtoms(out))
        }
        (None, Some(name)) => {
            let name = name
                .as_str()
                .ok_or_else(|| ParseError::new("/singular/family", "expected a string"))?;
            if name != "section3" {
                return Err(ParseError::new(
                    "/singular/family",
                    format!("unknown family {name:?} (available: section3)"),
                ));
            }
            let params = obj
                .get("params")
                .and_then(Value::as_object)
                .ok_or_else(|| ParseError::new("/singular/params", "expected a params object"))?;
            let eps = params
                .get("epsilon")
                .ok_or_else(|| ParseError::new("/singular/params/epsilon", "missing parameter"))
                .and_then(|v| get_number(v, "/singular/params/epsilon"))?;
            let n_cut = match params.get("n_cut") {
                None => 1000,
                Some(v) => v
                    .as_u64()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| {
                        ParseError::new("/singular/params/n_cut", "expected a positive integer")
                    })? as usize,
            };
            make_section3_measure(eps, n_cut)
                .map_err(|e| ParseError::new("/singular/params/epsilon", e.to_string()))
        }
        _ => Err(ParseError::new(
            "/singular",
            "expected exactly one of \"atoms\" or \"family\"",
        )),
    }
}

fn parse_phi(v: &Value) -> Result<AdmissiblePhi, ParseError> {
    let obj = v.as_object().ok_or_else(|| ParseError::new("/phi", "expected an object or null"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| ParseError::new("/phi/kind", "expected \"power\" or \"power_log\""))?;
    let fetch = |key: &str| -> Result<f64, ParseError> {
        obj.get(key)
            .ok_or_else(|| ParseError::new(format!("/phi/{key}"), "missing parameter"))
            .and_then(|v| get_number(v, &format!("/phi/{key}")))
    };
    match kind {
        "power" => Ok(AdmissiblePhi::Power { p: fetch("p")? }),
        "power_log" => {
            let sign = match obj.get("sign").and_then(Value::as_str) {
                Some("+") => LogSign::Plus,
                Some("-") | Some("\u{2212}") => LogSign::Minus,
                _ => {
                    return Err(ParseError::new("/phi/sign", "expected \"+\" or \"-\""));
                }
            };
            Ok(AdmissiblePhi::PowerLog { p: fetch("p")?, c: fetch("c")?, sign })
        }
        other => Err(ParseError::new("/phi/kind", format!("unknown kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_section3_with_phi() {
        let doc = parse_config(
            r#"{"singular": {"family": "section3", "params": {"epsilon": 1.5}},
                "phi": {"kind": "power", "p": 1.4}}"#,
        )
        .unwrap();
        assert!(matches!(doc.spec.singular, SingularMeasureSpec::Family(_)));
        assert_eq!(doc.phi, Some(AdmissiblePhi::Power { p: 1.4 }));
    }

    #[test]
    fn empty_object_is_identity() {
        let doc = parse_config("{}").unwrap();
        assert!(doc.spec.is_identity());
        assert!(doc.phi.is_none());
    }

    #[test]
    fn boundary_zero_reports_pointer() {
        let err = parse_config(r#"{"blaschke": {"zeros": [[1.0, 0.0]]}}"#).unwrap_err();
        assert_eq!(err.pointer, "/blaschke/zeros/0");
        assert!(err.message.contains("not in the open unit disk"));
    }

    #[test]
    fn epsilon_out_of_range_reports_pointer() {
        let err = parse_config(r#"{"singular": {"family": "section3", "params": {"epsilon": 1.0}}}"#)
            .unwrap_err();
        assert_eq!(err.pointer, "/singular/params/epsilon");
    }

    #[test]
    fn unknown_key_rejected() {
        let err = parse_config(r#"{"blasche": {}}"#).unwrap_err();
        assert_eq!(err.pointer, "/blasche");
    }

    #[test]
    fn bad_mass_reports_pointer() {
        let err =
            parse_config(r#"{"singular": {"atoms": [{"theta": 1.0, "mass": -2.0}]}}"#).unwrap_err();
        assert_eq!(err.pointer, "/singular/atoms/0");
    }

    #[test]
    fn unicode_minus_sign_accepted() {
        let doc = parse_config(
            "{\"phi\": {\"kind\": \"power_log\", \"p\": 1.5, \"c\": 1.0, \"sign\": \"\u{2212}\"}}",
        )
        .unwrap();
        assert_eq!(doc.phi, Some(AdmissiblePhi::PowerLog { p: 1.5, c: 1.0, sign: LogSign::Minus }));
    }

    #[test]
    fn duplicate_atoms_rejected_by_validation() {
        let err = parse_config(
            r#"{"singular": {"atoms": [{"theta": 1.0, "mass": 0.5}, {"theta": 1.0, "mass": 0.2}]}}"#,
        )
        .unwrap_err();
        assert!(err.message.contains("share angle"));
    }

    #[test]
    fn zeros_or_family_exclusive() {
        let err = parse_config(r#"{"blaschke": {"zeros": [], "family": "radial_power"}}"#)
            .unwrap_err();
        assert_eq!(err.pointer, "/blaschke");
    }

    #[test]
    fn radial_power_family_parses() {
        let doc = parse_config(
            r#"{"blaschke": {"family": "radial_power",
                 "params": {"scale": 0.5, "decay": 2.5, "angle_scale": 1.0}}}"#,
        )
        .unwrap();
        assert!(matches!(doc.spec.blaschke, BlaschkeSpec::Family(_)));
        let err = parse_config(
            r#"{"blaschke": {"family": "radial_power",
                 "params": {"scale": 0.5, "decay": 1.0, "angle_scale": 1.0}}}"#,
        )
        .unwrap_err();
        assert_eq!(err.pointer, "/blaschke/params");
    }
}
