//! Problem files: JSON description of families, input points or measures, and
//! run options.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arrangement::FamilySpec;
use crate::config::ColoredPointConfig;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::linalg::{rank, Subspace};
use crate::measures::MeasureSpec;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyEntry {
    /// Basis of the direction subspace the normals must lie in.
    #[serde(rename = "L_basis", with = "rat::mat")]
    pub l_basis: Vec<Vec<Rat>>,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ProblemInput {
    Colors(#[serde(with = "rat::mat3")] Vec<Vec<Point>>),
    Measures(Vec<MeasureSpec>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rat::opt")]
    pub perturb_magnitude: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub families: Vec<FamilyEntry>,
    pub input: ProblemInput,
    #[serde(default)]
    pub options: ProblemOptions,
}

impl ProblemFile {
    /// Checks vector widths, basis independence and the color count.
    pub fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let mut need = 0;
        for (i, f) in self.families.iter().enumerate() {
            if let Some(v) = f.l_basis.iter().find(|v| v.len() != d) {
                return Err(Error::Dimension { expected: d, got: v.len() });
            }
            let r = rank(&f.l_basis);
            if f.l_basis.is_empty() || r != f.l_basis.len() {
                return Err(Error::Invariant(format!(
                    "family {i}: L_basis of {} vectors has rank {r}",
                    f.l_basis.len()
                )));
            }
            if f.k == 0 {
                return Err(Error::Invariant(format!("family {i}: k must be at least 1")));
            }
            need += f.l_basis.len() + f.k - 1;
        }
        let (what, have) = match &self.input {
            ProblemInput::Colors(c) => ("colors", c.len()),
            ProblemInput::Measures(m) => ("measures", m.len()),
        };
        if need != have {
            return Err(Error::Invariant(format!("sum of dim L + k - 1 over families is {need}, but there are {have} {what}")));
        }
        match &self.input {
            ProblemInput::Colors(colors) => {
                ColoredPointConfig::new(d, colors.clone())?;
            }
            ProblemInput::Measures(ms) => {
                for m in ms {
                    m.validate()?;
                    if m.dim() != d {
                        return Err(Error::Dimension { expected: d, got: m.dim() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn specs(&self) -> Result<Vec<FamilySpec>> {
        self.families
            .iter()
            .map(|f| FamilySpec::new(Subspace::from_basis(self.dimension, f.l_basis.clone())?, f.k))
            .collect()
    }

    /// The colored points, when the input is a point set.
    pub fn config(&self) -> Result<ColoredPointConfig> {
        match &self.input {
            ProblemInput::Colors(c) => ColoredPointConfig::new(self.dimension, c.clone()),
            ProblemInput::Measures(_) => Err(Error::InvalidInput("problem input is measures, not colors".into())),
        }
    }

    /// The input as measures; point sets become uniform point masses.
    pub fn measures(&self) -> Vec<MeasureSpec> {
        match &self.input {
            ProblemInput::Colors(c) => c.iter().map(|pts| MeasureSpec::uniform_points(pts.clone())).collect(),
            ProblemInput::Measures(m) => m.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

/// Parses and validates a problem from JSON text.
pub fn parse_problem_str(text: &str) -> Result<ProblemFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let problem: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        pointer: pointer(e.path()),
        message: e.inner().to_string(),
    })?;
    problem.validate()?;
    Ok(problem)
}

pub fn parse_problem(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path)?;
    parse_problem_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use proptest::prelude::*;

    const HAM: &str = r#"{
        "dimension": 2,
        "families": [{"L_basis": [[1, 0], [0, 1]], "k": 1}],
        "input": {"colors": [[[0, 0], ["1/3", 2], [4, 1]], [[5, 5], [6, -1], [-2, 3]]]},
        "options": {"seed": 7}
    }"#;

    #[test]
    fn ham_sandwich_file_parses() {
        let p = parse_problem_str(HAM).unwrap();
        assert_eq!(p.specs().unwrap().len(), 1);
        assert_eq!(p.config().unwrap().point(crate::config::PointId { color: 0, index: 1 })[0], frac(1, 3));
        assert_eq!(p.options.seed, Some(7));
        assert_eq!(parse_problem_str(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn color_count_mismatch_names_the_sum() {
        let bad = HAM.replace(r#"[[5, 5], [6, -1], [-2, 3]]]"#, r#"[[5, 5], [6, -1], [-2, 3]], [[9, 9]]]"#);
        let err = parse_problem_str(&bad).unwrap_err().to_string();
        assert!(err.contains("sum of dim L + k - 1"), "{err}");
    }

    #[test]
    fn schema_errors_carry_a_pointer() {
        let bad = HAM.replace(r#""k": 1"#, r#""k": "one""#);
        match parse_problem_str(&bad) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/families/0/k"),
            other => panic!("{other:?}"),
        }
        let bad = HAM.replace(r#""1/3""#, r#""1/0""#);
        match parse_problem_str(&bad) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/input/colors/0/1/0"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dependent_basis_names_the_rank() {
        let bad = HAM.replace("[[1, 0], [0, 1]]", "[[1, 2], [2, 4]]");
        let err = parse_problem_str(&bad).unwrap_err().to_string();
        assert!(err.contains("rank 1"), "{err}");
    }

    fn rational() -> impl Strategy<Value = Rat> {
        (-1000i64..1000, 1i64..50).prop_map(|(p, q)| frac(p, q))
    }

    fn problem() -> impl Strategy<Value = ProblemFile> {
        (1usize..4, 1usize..4, any::<bool>(), proptest::option::of(any::<u64>()), proptest::option::of(rational()))
            .prop_flat_map(|(d, k, as_measures, seed, magnitude)| {
                let m = d + k - 1;
                let pts = proptest::collection::vec(proptest::collection::vec(rational(), d), 1..4);
                let input = if as_measures {
                    proptest::collection::vec(proptest::collection::vec(rational(), d), m)
                        .prop_map(|ps| {
                            ProblemInput::Measures(ps.into_iter().map(|a| MeasureSpec::Segment { b: a.iter().map(|x| x + int(1)).collect(), a }).collect())
                        })
                        .boxed()
                } else {
                    proptest::collection::vec(pts, m).prop_map(ProblemInput::Colors).boxed()
                };
                input.prop_map(move |input| ProblemFile {
                    dimension: d,
                    families: vec![FamilyEntry { l_basis: Subspace::whole(d).basis().to_vec(), k }],
                    input,
                    options: ProblemOptions { seed, oracle_bound: None, sample_r: Some(k), perturb_magnitude: magnitude.clone() },
                })
            })
    }

    proptest! {
        #[test]
        fn serialization_round_trips(p in problem()) {
            let back: ProblemFile = serde_json::from_str(&p.to_json()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
