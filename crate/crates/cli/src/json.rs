//! Exact values as JSON. Rationals are strings ("3", "-1/2") so nothing
//! passes through a float.

use serde_json::{json, Map, Value};
use thetalift::exactverify::tower::{TowerMatrix, TowerScalar};
use thetalift::exactverify::{Report, SubCheck};
use thetalift::hctheta::FourthRoot;
use thetalift::rootcomb::{CaseSpec, EpsPsi, QuatSign, Root};
use thetalift::{GaussianRational, Rational};

pub const CONVENTION: &str = "eps_psi = d_psi/|d_psi| in {+i, -i}, default +i. Replacing eps_psi by -eps_psi conjugates every Fock model coefficient. Packet characters are normalized by (-i)^(#Delta_B - #Delta_B_H).";

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn weight(w: &[Rational]) -> Value {
    Value::Array(w.iter().map(rational).collect())
}

pub fn gaussian(g: &GaussianRational) -> Value {
    json!({ "re": g.re.to_string(), "im": g.im.to_string() })
}

pub fn fourth_root(f: FourthRoot) -> Value {
    gaussian(&f.to_gaussian())
}

pub fn roots<'a>(rs: impl IntoIterator<Item = &'a Root>) -> Value {
    Value::Array(rs.into_iter().map(|r| Value::String(r.to_string())).collect())
}

pub fn eps(e: EpsPsi) -> Value {
    Value::String(e.to_string())
}

pub fn case(spec: &CaseSpec) -> Value {
    json!({
        "e_h": spec.e_h.value(),
        "m": spec.m,
        "n": spec.n,
        "p": spec.p,
        "q": spec.q,
        "eps_psi": eps(spec.eps_psi),
    })
}

pub fn tower_matrix(m: &TowerMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| Value::String(scalar(m.get(r, c)))).collect()))
            .collect(),
    )
}

fn scalar(s: &TowerScalar) -> String {
    s.to_string()
}

pub fn sub_check(c: &SubCheck) -> Value {
    let mut o = Map::new();
    o.insert("name".into(), Value::String(c.name.clone()));
    o.insert("passed".into(), Value::Bool(c.passed));
    if let Some(r) = c.residual.as_ref().filter(|_| !c.passed) {
        o.insert("residual".into(), tower_matrix(r));
    }
    Value::Object(o)
}

pub fn report(r: &Report) -> Value {
    Value::Array(r.checks.iter().map(sub_check).collect())
}

pub fn parse_eps(s: &str) -> Result<EpsPsi, String> {
    match s {
        "+i" | "i" => Ok(EpsPsi::PlusI),
        "-i" => Ok(EpsPsi::MinusI),
        _ => Err(format!("eps_psi must be +i or -i, got {s:?}")),
    }
}

pub fn parse_quat(e: i64) -> Result<QuatSign, String> {
    QuatSign::from_value(e).ok_or_else(|| format!("e_h must be 1 or -1, got {e}"))
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|_| format!("not a rational number: {s:?}"))
}

pub fn parse_rational_value(v: &Value) -> Result<Rational, String> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(|k| Rational::from_integer(k.into())).ok_or_else(|| format!("not an integer: {n}")),
        _ => Err(format!("expected a rational, got {v}")),
    }
}

/// Comma separated list; empty string is the empty list.
pub fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| f(x.trim())).collect()
}

pub fn parse_int(s: &str) -> Result<i64, String> {
    s.parse().map_err(|_| format!("not an integer: {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_strings() {
        assert_eq!(rational(&parse_rational("-6/4").unwrap()), json!("-3/2"));
        assert_eq!(rational(&parse_rational("5").unwrap()), json!("5"));
        assert_eq!(fourth_root(FourthRoot::I), json!({"re": "0", "im": "1"}));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("5, 3,-1", parse_int).unwrap(), vec![5, 3, -1]);
        assert!(parse_list("", parse_int).unwrap().is_empty());
        assert!(parse_list("1,,2", parse_int).is_err());
        assert_eq!(parse_eps("-i").unwrap(), EpsPsi::MinusI);
        assert!(parse_eps("i2").is_err());
    }
}
