use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::exact_linalg::{to_rat_vec, Subspace};
use crate::heisenberg_modules::DEFAULT_DEGREE;
use crate::nilpotent_groups::{
    decompose_subdirect, ClassTwoData, Factor, FactorDecomposition, FiniteFactor, HeisenbergGroup,
    NilpotentError,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// Monomial degree bound for the operator identity checks.
    pub degree: u32,
    /// Largest `n` in the Fitting resultant table.
    pub n_max: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            degree: DEFAULT_DEGREE,
            n_max: 100,
        }
    }
}

/// Input problem: either structure constants of a class-2 group or an
/// explicit list of Heisenberg factors with their projections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_two: Option<ClassTwoData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Factor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_factor: Option<FiniteFactor>,
    #[serde(default)]
    pub options: Options,
}

fn invalid(e: NilpotentError) -> PipelineError {
    match e {
        NilpotentError::Internal(_) => PipelineError::Nilpotent(e),
        _ => PipelineError::InvalidInput(e.to_string()),
    }
}

impl ProblemSpec {
    /// Parses JSON, reporting the location of syntax and schema errors.
    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let spec: ProblemSpec =
            serde_json::from_str(text).map_err(|e| PipelineError::InvalidInput(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.schema != SCHEMA_VERSION {
            return Err(PipelineError::InvalidInput(format!(
                "schema {} is not supported (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        match (&self.class_two, &self.factors) {
            (Some(_), Some(_)) => Err(PipelineError::InvalidInput(
                "both `class_two` and `factors` given".into(),
            )),
            (None, None) => Err(PipelineError::InvalidInput(
                "one of `class_two` or `factors` is required".into(),
            )),
            (Some(_), None) if self.generators.is_some() => Err(PipelineError::InvalidInput(
                "`generators` only accompanies `factors`".into(),
            )),
            (None, Some(_)) if self.generators.is_none() => Err(PipelineError::InvalidInput(
                "`factors` requires `generators`".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Step 1: the subdirect decomposition, computed or accepted as given.
    pub fn decomposition(&self) -> Result<FactorDecomposition, PipelineError> {
        self.validate()?;
        let mut d = match (&self.class_two, &self.factors, &self.generators) {
            (Some(data), _, _) => {
                data.validate().map_err(invalid)?;
                decompose_subdirect(data).map_err(invalid)?
            }
            (None, Some(factors), Some(generators)) => explicit(generators, factors)?,
            _ => unreachable!("validated above"),
        };
        if self.finite_factor.is_some() {
            d.finite_factor = self.finite_factor.clone();
        }
        if let Some(f) = &d.finite_factor {
            if f.order == 0 {
                return Err(PipelineError::InvalidInput(
                    "finite factor order must be positive".into(),
                ));
            }
        }
        Ok(d)
    }
}

fn explicit(
    generators: &[String],
    factors: &[Factor],
) -> Result<FactorDecomposition, PipelineError> {
    let n = generators.len();
    let mut dual = Subspace::zero(n);
    for (idx, f) in factors.iter().enumerate() {
        let canonical = HeisenbergGroup::new(f.group.invariants().to_vec()).map_err(invalid)?;
        if canonical != f.group {
            return Err(PipelineError::InvalidInput(format!(
                "factor {}: rank does not match the invariants",
                idx + 1
            )));
        }
        f.check(n)
            .map_err(|e| PipelineError::InvalidInput(format!("factor {}: {e}", idx + 1)))?;
        let cols: Vec<_> = (0..f.projection.nrows())
            .map(|r| to_rat_vec(f.projection.row(r)))
            .collect();
        dual = dual.sum(&Subspace::from_spanning(n, &cols)?)?;
    }
    Ok(FactorDecomposition {
        generators: generators.to_vec(),
        dual_space: dual,
        finite_factor: None,
        factors: factors.to_vec(),
        certificate: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_forms() {
        let s = ProblemSpec::from_json(
            r#"{"schema": 1, "class_two": {"n": 2, "r": 1, "comm": [{"i": 1, "j": 2, "z": [1]}]}}"#,
        )
        .unwrap();
        assert_eq!(s.options, Options::default());
        assert_eq!(s.decomposition().unwrap().factors.len(), 1);
        let both =
            r#"{"schema": 1, "class_two": {"n": 1, "r": 0}, "generators": ["g"], "factors": []}"#;
        assert!(matches!(
            ProblemSpec::from_json(both),
            Err(PipelineError::InvalidInput(_))
        ));
        assert!(matches!(
            ProblemSpec::from_json(r#"{"schema": 2, "class_two": {"n": 1, "r": 0}}"#),
            Err(PipelineError::InvalidInput(_))
        ));
    }

    #[test]
    fn syntax_error_has_location() {
        let Err(PipelineError::InvalidInput(msg)) =
            ProblemSpec::from_json("{\"schema\": 1,\n \"class_two\": }")
        else {
            panic!("expected an input error");
        };
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn explicit_factors() {
        let text = r#"{"schema": 1, "generators": ["x", "y", "z"],
            "factors": [{"group": {"rank": 1, "invariants": [1]},
                         "projection": {"rows": 2, "cols": 3, "entries": [[1, 0, 0], [0, 1, 0]]}}]}"#;
        let d = ProblemSpec::from_json(text)
            .unwrap()
            .decomposition()
            .unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.dual_space.dim(), 2);
        let bad = text.replace("\"rank\": 1", "\"rank\": 2");
        assert!(matches!(
            ProblemSpec::from_json(&bad).unwrap().decomposition(),
            Err(PipelineError::InvalidInput(_))
        ));
    }
}
