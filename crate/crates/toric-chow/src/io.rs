//! File formats: the stacky-fan input schema and the presentation
//! exchange format.
//!
//! Both formats are JSON. Integers are arbitrary precision: parsing goes
//! through `serde_json`'s arbitrary-precision numbers and emission prints
//! exact integer literals, so emitted documents re-parse to identical
//! values byte for byte.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{Map, Number, Value};

use crate::chowring::{Generator, GradedPresentation, Poly, Term};
use crate::fancomb::Fan;
use crate::fgab::{FgAbGroup, GroupHom};
use crate::intlin::IntMatrix;
use crate::stacky::StackyFan;
use crate::{Error, Result};

/// Parsed stacky-fan input file.
#[derive(Clone, Debug)]
pub struct StackyFanFile {
    pub name: Option<String>,
    pub stacky_fan: StackyFan,
}

fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_error(format!("{} must be a JSON object", what)))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_error(format!("{} must be a JSON array", what)))
}

fn as_bigint(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| parse_error(format!("{} must be an integer, got {}", what, n))),
        _ => Err(parse_error(format!("{} must be an integer", what))),
    }
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    let b = as_bigint(v, what)?;
    usize::try_from(&b).map_err(|_| parse_error(format!("{} must be a nonnegative machine integer", what)))
}

fn bigint_number(x: &BigInt) -> Value {
    let n: Number = serde_json::from_str(&x.to_string()).expect("integer literal");
    Value::Number(n)
}

fn known_keys(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(parse_error(format!("unknown key '{}' in {}", k, what)));
        }
    }
    Ok(())
}

/// Parse a stacky-fan file from JSON text. Torsion coordinates of rays
/// are accepted in any integer range and normalized on load. The
/// resulting stacky fan has passed shape checks but not yet
/// `StackyFan::validate`.
pub fn parse_stacky_fan(text: &str) -> Result<StackyFanFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_error(format!("invalid JSON: {}", e)))?;
    stacky_fan_from_value(&v)
}

pub fn stacky_fan_from_value(v: &Value) -> Result<StackyFanFile> {
    let obj = as_object(v, "stacky fan file")?;
    known_keys(obj, &["name", "group", "rays", "max_cones"], "stacky fan file")?;
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(parse_error("name must be a string")),
    };
    let group_v = obj.get("group").ok_or_else(|| parse_error("missing 'group'"))?;
    let group_obj = as_object(group_v, "group")?;
    known_keys(group_obj, &["rank", "torsion"], "group")?;
    let rank = as_usize(group_obj.get("rank").ok_or_else(|| parse_error("missing group.rank"))?, "group.rank")?;
    let torsion: Vec<BigInt> = match group_obj.get("torsion") {
        None => Vec::new(),
        Some(t) => as_array(t, "group.torsion")?
            .iter()
            .map(|x| as_bigint(x, "torsion order"))
            .collect::<Result<_>>()?,
    };
    let group = FgAbGroup::new(rank, torsion).map_err(|e| parse_error(e.to_string()))?;

    let rays_v = as_array(obj.get("rays").ok_or_else(|| parse_error("missing 'rays'"))?, "rays")?;
    let mut lifts: Vec<Vec<BigInt>> = Vec::new();
    for (i, rv) in rays_v.iter().enumerate() {
        let coords: Vec<BigInt> = as_array(rv, "ray")?
            .iter()
            .map(|x| as_bigint(x, "ray coordinate"))
            .collect::<Result<_>>()?;
        if coords.len() != group.dims() {
            return Err(parse_error(format!(
                "ray {} has {} coordinates, expected rank + torsion count = {}",
                i,
                coords.len(),
                group.dims()
            )));
        }
        lifts.push(group.canonicalize(&coords).map_err(|e| parse_error(e.to_string()))?);
    }

    let cones_v = as_array(obj.get("max_cones").ok_or_else(|| parse_error("missing 'max_cones'"))?, "max_cones")?;
    let mut max_cones: Vec<Vec<usize>> = Vec::new();
    for cv in cones_v {
        let cone: Vec<usize> =
            as_array(cv, "cone")?.iter().map(|x| as_usize(x, "ray index")).collect::<Result<_>>()?;
        max_cones.push(cone);
    }

    let free_rays: Vec<Vec<BigInt>> = lifts.iter().map(|l| l[..rank].to_vec()).collect();
    let fan = Fan::new(rank, free_rays, max_cones).map_err(|e| parse_error(e.to_string()))?;
    let beta_matrix = IntMatrix::from_cols(group.dims(), &lifts);
    let beta = GroupHom::new(FgAbGroup::free(lifts.len()), group.clone(), beta_matrix)
        .map_err(|e| parse_error(e.to_string()))?;
    let stacky_fan = StackyFan::new(group, fan, beta).map_err(|e| parse_error(e.to_string()))?;
    Ok(StackyFanFile { name, stacky_fan })
}

pub fn stacky_fan_to_value(file: &StackyFanFile) -> Value {
    let sf = &file.stacky_fan;
    let mut obj = Map::new();
    if let Some(name) = &file.name {
        obj.insert("name".into(), Value::String(name.clone()));
    }
    let mut group = Map::new();
    group.insert("rank".into(), Value::Number(Number::from(sf.group().rank() as u64)));
    group.insert(
        "torsion".into(),
        Value::Array(sf.group().torsion().iter().map(bigint_number).collect()),
    );
    obj.insert("group".into(), Value::Object(group));
    let rays: Vec<Value> = (0..sf.fan().ray_count())
        .map(|i| Value::Array(sf.ray_lift(i).iter().map(bigint_number).collect()))
        .collect();
    obj.insert("rays".into(), Value::Array(rays));
    let cones: Vec<Value> = sf
        .fan()
        .max_cones()
        .iter()
        .map(|c| Value::Array(c.iter().map(|&i| Value::Number(Number::from(i as u64))).collect()))
        .collect();
    obj.insert("max_cones".into(), Value::Array(cones));
    Value::Object(obj)
}

fn rational_value(q: &BigRational) -> Value {
    let mut obj = Map::new();
    obj.insert("num".into(), bigint_number(q.numer()));
    obj.insert("den".into(), bigint_number(q.denom()));
    Value::Object(obj)
}

fn rational_from_value(v: &Value, what: &str) -> Result<BigRational> {
    let obj = as_object(v, what)?;
    known_keys(obj, &["num", "den"], what)?;
    let num = as_bigint(obj.get("num").ok_or_else(|| parse_error(format!("{} missing num", what)))?, "num")?;
    let den = as_bigint(obj.get("den").ok_or_else(|| parse_error(format!("{} missing den", what)))?, "den")?;
    if den.is_zero() {
        return Err(parse_error(format!("{} has zero denominator", what)));
    }
    Ok(BigRational::new(num, den))
}

/// Presentation JSON:
/// `{"generators":[{"name":str,"degree":{"num":int,"den":int}}],
///   "relations":[[{"coeff":int,"exponents":[int,...]},...],...]}`.
pub fn presentation_to_value(p: &GradedPresentation) -> Value {
    let mut obj = Map::new();
    let gens: Vec<Value> = p
        .generators()
        .iter()
        .map(|g| {
            let mut o = Map::new();
            o.insert("name".into(), Value::String(g.name.clone()));
            o.insert("degree".into(), rational_value(&g.degree));
            Value::Object(o)
        })
        .collect();
    obj.insert("generators".into(), Value::Array(gens));
    let rels: Vec<Value> = p
        .relations()
        .iter()
        .map(|r| {
            Value::Array(
                r.terms()
                    .iter()
                    .map(|t| {
                        let mut o = Map::new();
                        o.insert("coeff".into(), bigint_number(&t.coeff));
                        o.insert(
                            "exponents".into(),
                            Value::Array(t.exps.iter().map(|&e| Value::Number(Number::from(e as u64))).collect()),
                        );
                        Value::Object(o)
                    })
                    .collect(),
            )
        })
        .collect();
    obj.insert("relations".into(), Value::Array(rels));
    Value::Object(obj)
}

pub fn parse_presentation(text: &str) -> Result<GradedPresentation> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_error(format!("invalid JSON: {}", e)))?;
    presentation_from_value(&v)
}

pub fn presentation_from_value(v: &Value) -> Result<GradedPresentation> {
    let obj = as_object(v, "presentation")?;
    known_keys(obj, &["generators", "relations"], "presentation")?;
    let gens_v = as_array(obj.get("generators").ok_or_else(|| parse_error("missing 'generators'"))?, "generators")?;
    let mut generators = Vec::new();
    for gv in gens_v {
        let go = as_object(gv, "generator")?;
        known_keys(go, &["name", "degree"], "generator")?;
        let name = go
            .get("name")
            .and_then(|n| n.as_str())
            .ok_or_else(|| parse_error("generator needs a string name"))?
            .to_string();
        let degree =
            rational_from_value(go.get("degree").ok_or_else(|| parse_error("generator needs a degree"))?, "degree")?;
        generators.push(Generator { name, degree });
    }
    let rels_v = as_array(obj.get("relations").ok_or_else(|| parse_error("missing 'relations'"))?, "relations")?;
    let nvars = generators.len();
    let mut relations = Vec::new();
    for rv in rels_v {
        let terms_v = as_array(rv, "relation")?;
        let mut terms = Vec::new();
        for tv in terms_v {
            let to = as_object(tv, "term")?;
            known_keys(to, &["coeff", "exponents"], "term")?;
            let coeff = as_bigint(to.get("coeff").ok_or_else(|| parse_error("term needs coeff"))?, "coeff")?;
            let exps_v = as_array(to.get("exponents").ok_or_else(|| parse_error("term needs exponents"))?, "exponents")?;
            if exps_v.len() != nvars {
                return Err(parse_error(format!(
                    "term has {} exponents, expected {}",
                    exps_v.len(),
                    nvars
                )));
            }
            let mut exps = Vec::with_capacity(nvars);
            for ev in exps_v {
                let e = as_usize(ev, "exponent")?;
                let e = u32::try_from(e).map_err(|_| parse_error("exponent too large"))?;
                exps.push(e);
            }
            terms.push(Term { coeff, exps });
        }
        relations.push(Poly::from_terms(terms));
    }
    let degrees: Vec<BigRational> = generators.iter().map(|g| g.degree.clone()).collect();
    if degrees.iter().any(|d| d.is_negative()) {
        return Err(parse_error("generator degrees must be nonnegative"));
    }
    GradedPresentation::new(generators, relations).map_err(|e| parse_error(e.to_string()))
}

/// Deterministic pretty text for JSON values (two-space indent, sorted
/// keys as stored).
pub fn to_json_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    pub(crate) const EXAMPLE_61: &str = r#"{
        "name": "weighted projective line gerbe",
        "group": {"rank": 1, "torsion": [2]},
        "rays": [[2, 1], [-3, 0]],
        "max_cones": [[0], [1]]
    }"#;

    #[test]
    fn parse_and_validate_example() {
        let f = parse_stacky_fan(EXAMPLE_61).unwrap();
        assert_eq!(f.name.as_deref(), Some("weighted projective line gerbe"));
        let v = f.stacky_fan.validate();
        assert!(v.is_ok() && v.torsion_generated);
    }

    #[test]
    fn torsion_coordinates_normalize_on_load() {
        let text = r#"{"group": {"rank": 1, "torsion": [2]},
                       "rays": [[2, -1], [-3, 4]],
                       "max_cones": [[0], [1]]}"#;
        let f = parse_stacky_fan(text).unwrap();
        assert_eq!(f.stacky_fan.ray_lift(0), vec![BigInt::from(2), BigInt::one()]);
        assert_eq!(f.stacky_fan.ray_lift(1), vec![BigInt::from(-3), BigInt::zero()]);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(parse_stacky_fan("not json").is_err());
        assert!(parse_stacky_fan(r#"{"group": {"rank": 1}, "rays": [[1, 1]], "max_cones": []}"#).is_err());
        assert!(parse_stacky_fan(r#"{"group": {"rank": 1, "torsion": [3, 2]}, "rays": [], "max_cones": []}"#)
            .is_err());
        assert!(parse_stacky_fan(r#"{"group": {"rank": 1, "torsion": []}, "rays": [[1.5]], "max_cones": [[0]]}"#)
            .is_err());
        assert!(parse_stacky_fan(r#"{"group": {"rank": 1, "torsion": []}, "rays": [[1]], "max_cones": [[7]]}"#)
            .is_err());
    }

    #[test]
    fn presentation_round_trip_is_byte_stable() {
        let f = parse_stacky_fan(EXAMPLE_61).unwrap();
        let gd = crate::stacky::gerbe_data(&f.stacky_fan).unwrap();
        let p = crate::chowring::sr_ring(&f.stacky_fan, &gd).unwrap();
        let text = to_json_string(&presentation_to_value(&p));
        let p2 = parse_presentation(&text).unwrap();
        assert_eq!(p, p2);
        let text2 = to_json_string(&presentation_to_value(&p2));
        assert_eq!(text, text2);
    }

    #[test]
    fn stacky_fan_round_trip() {
        let f = parse_stacky_fan(EXAMPLE_61).unwrap();
        let text = to_json_string(&stacky_fan_to_value(&f));
        let f2 = parse_stacky_fan(&text).unwrap();
        assert_eq!(f.stacky_fan, f2.stacky_fan);
    }
}
