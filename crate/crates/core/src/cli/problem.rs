//! The problem file: a JSON document naming one action, complexes on it,
//! functor words and optional test points.

use crate::action::{ProjectiveAction, RationalPoint};
use crate::eqsheaf::{CheckConfig, EquivariantComplex, TwistedSummand};
use crate::fm::{EquivariantAutomorphism, FunctorWord, Generator};
use crate::group::{AbelianGroup, Character};
use crate::linalg::{parse_rational, Rational};
use crate::poly::{PolyMatrix, Polynomial};
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub group: Vec<i64>,
    pub action: ActionSpec,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default)]
    pub words: BTreeMap<String, Vec<GeneratorSpec>>,
    #[serde(default)]
    pub points: Vec<Vec<RationalSpec>>,
    #[serde(default)]
    pub sampling: SamplingSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub dim: usize,
    pub characters: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    /// Cohomological degree (as a decimal string) to summands.
    #[serde(default)]
    pub terms: BTreeMap<String, Vec<SummandSpec>>,
    /// `d^j` as sparse entries, keyed by its source degree `j`.
    #[serde(default)]
    pub differentials: BTreeMap<String, Vec<EntrySpec>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandSpec {
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub source: usize,
    pub target: usize,
    /// `(exponent vector, coefficient)` pairs.
    pub poly: Vec<(Vec<u32>, RationalSpec)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Shift(i64),
    Twist(SummandSpec),
    Push(PushSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushSpec {
    pub perm: Vec<usize>,
    /// Defaults to all ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalars: Option<Vec<RationalSpec>>,
    /// Characters of the target action; defaults to the source characters
    /// carried along by the permutation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_characters: Option<Vec<Vec<i64>>>,
}

/// A rational written as `"p/q"`, `"n"` or a bare JSON integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalSpec {
    Int(i64),
    Text(String),
}

impl RationalSpec {
    fn parse(&self) -> Option<Rational> {
        match self {
            RationalSpec::Int(n) => Some(Rational::from_integer((*n).into())),
            RationalSpec::Text(s) => parse_rational(s.trim()),
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        RationalSpec::Text(q.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    #[serde(default = "default_samples")]
    pub samples_per_stratum: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> usize {
    CheckConfig::default().samples_per_stratum
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec { samples_per_stratum: default_samples(), seed: 0 }
    }
}

/// A located problem with the input: a JSON position for syntax and schema
/// errors, a field path for semantic ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemError {
    Syntax { line: usize, column: usize, message: String },
    Semantic { path: String, message: String },
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ProblemError::Semantic { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for ProblemError {}

fn semantic(path: impl Into<String>, message: impl fmt::Display) -> ProblemError {
    ProblemError::Semantic { path: path.into(), message: message.to_string() }
}

/// The resolved contents of a problem file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub action: ProjectiveAction,
    pub complexes: BTreeMap<String, EquivariantComplex>,
    pub words: BTreeMap<String, FunctorWord>,
    pub points: Vec<RationalPoint>,
    pub sampling: CheckConfig,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, ProblemError> {
        serde_json::from_str(text).map_err(|e| ProblemError::Syntax {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })
    }

    pub fn resolve(&self) -> Result<Problem, ProblemError> {
        let group = AbelianGroup::new(&self.group).map_err(|e| semantic("group", e))?;
        if self.action.characters.len() != self.action.dim + 1 {
            return Err(semantic(
                "action.characters",
                format!("expected {} characters for P^{}, found {}", self.action.dim + 1, self.action.dim, self.action.characters.len()),
            ));
        }
        let action = build_action(&group, &self.action.characters, "action.characters")?;

        let mut complexes = BTreeMap::new();
        for (name, spec) in &self.complexes {
            complexes.insert(name.clone(), spec.build(&action, &format!("complexes.{name}"))?);
        }
        let mut words = BTreeMap::new();
        for (name, spec) in &self.words {
            words.insert(name.clone(), build_word(&action, spec, &format!("words.{name}"))?);
        }
        let mut points = Vec::new();
        for (k, p) in self.points.iter().enumerate() {
            let path = format!("points[{k}]");
            let coords = p
                .iter()
                .enumerate()
                .map(|(i, q)| q.parse().ok_or_else(|| semantic(format!("{path}[{i}]"), "not a rational number")))
                .collect::<Result<Vec<_>, _>>()?;
            points.push(action.point(coords).map_err(|e| semantic(&path, e))?);
        }
        let sampling = CheckConfig {
            samples_per_stratum: self.sampling.samples_per_stratum,
            seed: self.sampling.seed,
            points_only: false,
        };
        Ok(Problem { action, complexes, words, points, sampling })
    }

    /// A problem file holding one action, the given complexes and points.
    pub fn from_parts(
        action: &ProjectiveAction,
        complexes: &[(&str, &EquivariantComplex)],
        points: &[RationalPoint],
    ) -> ProblemFile {
        ProblemFile {
            group: action.group().orders().iter().map(|&n| n as i64).collect(),
            action: ActionSpec {
                dim: action.dim(),
                characters: action.coord_chars().iter().map(char_spec).collect(),
            },
            complexes: complexes.iter().map(|(n, c)| (n.to_string(), ComplexSpec::from_complex(c))).collect(),
            words: BTreeMap::new(),
            points: points
                .iter()
                .map(|p| p.coords().iter().map(RationalSpec::from_rational).collect())
                .collect(),
            sampling: SamplingSpec::default(),
        }
    }
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn char_spec(c: &Character) -> Vec<i64> {
    c.coords().iter().map(|&x| x as i64).collect()
}

fn build_character(group: &AbelianGroup, v: &[i64], path: &str) -> Result<Character, ProblemError> {
    group.character(v).map_err(|e| semantic(path, e))
}

fn build_action(group: &AbelianGroup, chars: &[Vec<i64>], path: &str) -> Result<ProjectiveAction, ProblemError> {
    let chars = chars
        .iter()
        .enumerate()
        .map(|(i, v)| build_character(group, v, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    ProjectiveAction::new(group.clone(), chars).map_err(|e| semantic(path, e))
}

fn build_summand(act: &ProjectiveAction, s: &SummandSpec, path: &str) -> Result<TwistedSummand, ProblemError> {
    let twist = match &s.twist {
        Some(v) => build_character(act.group(), v, &format!("{path}.twist"))?,
        None => act.group().trivial_character(),
    };
    Ok(TwistedSummand::new(s.degree, twist))
}

fn parse_degree(key: &str, path: &str) -> Result<i64, ProblemError> {
    key.trim().parse().map_err(|_| semantic(path, format!("degree key '{key}' is not an integer")))
}

impl ComplexSpec {
    pub fn build(&self, act: &ProjectiveAction, path: &str) -> Result<EquivariantComplex, ProblemError> {
        let nv = act.dim() + 1;
        let mut terms = BTreeMap::new();
        for (key, summands) in &self.terms {
            let p = format!("{path}.terms.{key}");
            let j = parse_degree(key, &p)?;
            let v = summands
                .iter()
                .enumerate()
                .map(|(k, s)| build_summand(act, s, &format!("{p}[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if terms.insert(j, v).is_some() {
                return Err(semantic(p, "degree listed twice"));
            }
        }
        let len = |j: i64| terms.get(&j).map_or(0, Vec::len);
        let mut diffs = BTreeMap::new();
        for (key, entries) in &self.differentials {
            let p = format!("{path}.differentials.{key}");
            let j = parse_degree(key, &p)?;
            let mut d = PolyMatrix::zeros(len(j + 1), len(j), nv);
            for (k, e) in entries.iter().enumerate() {
                let ep = format!("{p}[{k}]");
                if e.source >= len(j) {
                    return Err(semantic(&ep, format!("source {} out of range: degree {j} has {} summands", e.source, len(j))));
                }
                if e.target >= len(j + 1) {
                    return Err(semantic(&ep, format!("target {} out of range: degree {} has {} summands", e.target, j + 1, len(j + 1))));
                }
                let mut terms_out = Vec::new();
                for (t, (exps, coeff)) in e.poly.iter().enumerate() {
                    if exps.len() != nv {
                        return Err(semantic(format!("{ep}.poly[{t}]"), format!("exponent vector needs {nv} entries")));
                    }
                    let c = coeff.parse().ok_or_else(|| semantic(format!("{ep}.poly[{t}]"), "coefficient is not a rational number"))?;
                    terms_out.push((exps.clone(), c));
                }
                let entry = d.get(e.target, e.source).add(&Polynomial::from_terms(nv, terms_out));
                d.set(e.target, e.source, entry);
            }
            diffs.insert(j, d);
        }
        EquivariantComplex::new(act.clone(), terms, diffs).map_err(|e| semantic(path, e))
    }

    pub fn from_complex(c: &EquivariantComplex) -> ComplexSpec {
        let terms = c
            .terms()
            .iter()
            .map(|(j, v)| {
                let v = v
                    .iter()
                    .map(|s| SummandSpec {
                        degree: s.degree,
                        twist: if s.twist.is_trivial() { None } else { Some(char_spec(&s.twist)) },
                    })
                    .collect();
                (j.to_string(), v)
            })
            .collect();
        let differentials = c
            .differentials()
            .iter()
            .map(|(j, d)| {
                let entries = d
                    .nonzero_entries()
                    .map(|(target, source, p)| EntrySpec {
                        source,
                        target,
                        poly: p.terms().map(|(m, q)| (m.clone(), RationalSpec::from_rational(q))).collect(),
                    })
                    .collect();
                (j.to_string(), entries)
            })
            .collect();
        ComplexSpec { terms, differentials }
    }
}

fn build_word(act: &ProjectiveAction, spec: &[GeneratorSpec], path: &str) -> Result<FunctorWord, ProblemError> {
    let group = act.group();
    let n = act.dim() + 1;
    let mut current = act.clone();
    let mut gens = Vec::new();
    for (k, g) in spec.iter().enumerate() {
        let p = format!("{path}[{k}]");
        gens.push(match g {
            GeneratorSpec::Shift(s) => Generator::Shift(*s),
            GeneratorSpec::Twist(s) => Generator::Twist(build_summand(&current, s, &format!("{p}.twist"))?),
            GeneratorSpec::Push(push) => {
                let scalars = match &push.scalars {
                    Some(v) => v
                        .iter()
                        .enumerate()
                        .map(|(i, q)| q.parse().ok_or_else(|| semantic(format!("{p}.push.scalars[{i}]"), "not a rational number")))
                        .collect::<Result<Vec<_>, _>>()?,
                    None => vec![Rational::one(); n],
                };
                let target = match &push.target_characters {
                    Some(chars) => {
                        if chars.len() != n {
                            return Err(semantic(format!("{p}.push.target_characters"), format!("expected {n} characters")));
                        }
                        build_action(group, chars, &format!("{p}.push.target_characters"))?
                    }
                    None => {
                        if push.perm.len() != n || push.perm.iter().any(|&i| i >= n) {
                            return Err(semantic(format!("{p}.push.perm"), format!("not a permutation of 0..{n}")));
                        }
                        let mut chars = vec![group.trivial_character(); n];
                        for (i, &s) in push.perm.iter().enumerate() {
                            chars[s] = current.coord_char(i).clone();
                        }
                        ProjectiveAction::new(group.clone(), chars).map_err(|e| semantic(&p, e))?
                    }
                };
                let f = EquivariantAutomorphism::new(push.perm.clone(), scalars, current.clone(), target)
                    .map_err(|e| semantic(format!("{p}.push"), e))?;
                current = f.target().clone();
                Generator::Push(f)
            }
        });
    }
    FunctorWord::new(group.clone(), gens).map_err(|e| semantic(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIGN: &str = r#"{
        "group": [2],
        "action": {"dim": 2, "characters": [[0], [0], [1]]},
        "complexes": {
            "two_term": {
                "terms": {"0": [{"degree": 0, "twist": [1]}], "1": [{"degree": 1}]},
                "differentials": {"0": [{"source": 0, "target": 0, "poly": [[[0, 0, 1], "1"]]}]}
            }
        },
        "words": {"t": [{"twist": {"degree": 1}}, {"shift": 2}], "swap": [{"push": {"perm": [1, 0, 2]}}]},
        "points": [["0", "0", "1"], [1, "1/2", 0]]
    }"#;

    #[test]
    fn parses_and_resolves() {
        let p = ProblemFile::parse(SIGN).unwrap().resolve().unwrap();
        assert_eq!(p.action, ProjectiveAction::z2_sign_on_plane());
        assert_eq!(p.complexes["two_term"].validate(), Ok(()));
        assert_eq!(p.words["t"].generators().len(), 2);
        assert_eq!(p.points.len(), 2);
        assert_eq!(p.sampling, CheckConfig::default());
    }

    #[test]
    fn round_trips_complexes() {
        let p = ProblemFile::parse(SIGN).unwrap().resolve().unwrap();
        let c = &p.complexes["two_term"];
        let file = ProblemFile::from_parts(&p.action, &[("c", c)], &p.points);
        let text = serde_json::to_string(&file).unwrap();
        let back = ProblemFile::parse(&text).unwrap().resolve().unwrap();
        assert_eq!(&back.complexes["c"], c);
        assert_eq!(back.points, p.points);
    }

    #[test]
    fn syntax_errors_are_located() {
        let err = ProblemFile::parse("{\n  \"group\": [2],\n  \"action\": oops\n}").unwrap_err();
        assert!(matches!(err, ProblemError::Syntax { line: 3, .. }), "{err}");
        let err = ProblemFile::parse("{\"group\": [2], \"action\": {\"dim\": 1, \"characters\": [[0],[1]]}, \"extra\": 1}").unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
    }

    #[test]
    fn semantic_errors_carry_paths() {
        let bad = SIGN.replace(r#""source": 0, "target": 0"#, r#""source": 3, "target": 0"#);
        let err = ProblemFile::parse(&bad).unwrap().resolve().unwrap_err();
        assert!(err.to_string().starts_with("complexes.two_term.differentials.0[0]"), "{err}");
        let bad = SIGN.replace(r#""1/2""#, r#""1/0""#);
        let err = ProblemFile::parse(&bad).unwrap().resolve().unwrap_err();
        assert!(err.to_string().starts_with("points[1][1]"), "{err}");
        let bad = SIGN.replace(r#"{"perm": [1, 0, 2]}"#, r#"{"perm": [2, 1, 0], "target_characters": [[0], [0], [1]]}"#);
        let err = ProblemFile::parse(&bad).unwrap().resolve().unwrap_err();
        assert!(err.to_string().contains("not equivariant"), "{err}");
    }
}
