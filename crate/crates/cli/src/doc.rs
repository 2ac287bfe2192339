//! Parameter documents: a case, a payload and a schema version.

use crate::json as enc;
use serde_json::{json, Map, Value};
use thetalift::rootcomb::CaseSpec;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterDocument {
    pub schema: u64,
    pub case: CaseSpec,
    pub payload: Map<String, Value>,
}

impl ParameterDocument {
    pub fn new(case: CaseSpec, payload: Map<String, Value>) -> Self {
        ParameterDocument { schema: SCHEMA_VERSION, case, payload }
    }

    pub fn to_json(&self) -> Value {
        json!({ "schema": self.schema, "case": enc::case(&self.case), "payload": Value::Object(self.payload.clone()) })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let obj = v.as_object().ok_or("a parameter document must be an object")?;
        let schema = obj.get("schema").and_then(Value::as_u64).ok_or("missing schema version")?;
        if schema != SCHEMA_VERSION {
            return Err(format!("unsupported schema version {schema}"));
        }
        let c = obj.get("case").and_then(Value::as_object).ok_or("missing case")?;
        let int = |k: &str| c.get(k).and_then(Value::as_i64).ok_or_else(|| format!("case.{k} must be an integer"));
        let size = |k: &str| c.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| format!("case.{k} must be a non-negative integer"));
        let e_h = enc::parse_quat(int("e_h")?)?;
        let eps = enc::parse_eps(c.get("eps_psi").and_then(Value::as_str).ok_or("case.eps_psi must be \"+i\" or \"-i\"")?)?;
        let case = CaseSpec::new(e_h, size("m")?, size("n")?, size("p")?, size("q")?, eps).map_err(|e| e.to_string())?;
        let payload = match obj.get("payload") {
            None => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err("payload must be an object".into()),
        };
        Ok(ParameterDocument { schema, case, payload })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
        Self::from_json(&v)
    }
}
