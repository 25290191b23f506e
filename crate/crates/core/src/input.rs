//! The JSON input document and its eager validation.
//!
//! Scalars are written as strings (`"1/2"`, `"-3+2i"`, `"0.25"`); bare JSON numbers are
//! accepted and kept as their decimal text, so exact input survives a render/parse cycle.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cohomology::{LocalSystem, SkyscraperDatum};
use crate::disk::ModeForm;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::numeric::{Backend, Matrix, NumConfig, RotationNumber, Scalar};
use crate::surface::{CoveringDatum, SurfaceData};
use crate::weights::{LocalPart, LocalType};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScalarText(pub String);

impl ScalarText {
    pub fn parse<S: Scalar>(&self) -> Result<S> {
        Ok(S::parse(&self.0)?)
    }
}

impl From<&str> for ScalarText {
    fn from(s: &str) -> Self {
        ScalarText(s.to_string())
    }
}

impl Serialize for ScalarText {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ScalarText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ScalarText;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a scalar as a string or number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ScalarText, E> {
                Ok(ScalarText(v.to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ScalarText, E> {
                Ok(ScalarText(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ScalarText, E> {
                Ok(ScalarText(v.to_string()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ScalarText, E> {
                Ok(ScalarText(format!("{v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub type MatrixText = Vec<Vec<ScalarText>>;

pub fn parse_matrix<S: Scalar>(m: &MatrixText) -> Result<Matrix<S>> {
    let rows = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, x)| x.parse::<S>().map_err(|e| e.at(format!("[{r}][{c}]"))))
                .collect()
        })
        .collect::<Result<Vec<Vec<S>>>>()?;
    if rows.is_empty() {
        return Err(Error::Input("empty matrix".into()));
    }
    Matrix::from_rows(rows)
}

pub fn parse_vector<S: Scalar>(v: &[ScalarText]) -> Result<Vec<S>> {
    v.iter()
        .enumerate()
        .map(|(i, x)| x.parse::<S>().map_err(|e| e.at(format!("[{i}]"))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Punctures {
    Count(usize),
    Labels(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceBlock {
    pub genus: usize,
    pub punctures: Punctures,
}

impl SurfaceBlock {
    pub fn surface(&self) -> SurfaceData {
        match &self.punctures {
            Punctures::Count(s) => SurfaceData::new(self.genus, *s),
            Punctures::Labels(l) => SurfaceData {
                genus: self.genus,
                punctures: l.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GroupSpec {
    /// Catalog name: `trivial`, `Z<n>`, `V4`, `S3`, `S4`, `A4`, `D<n>`.
    Named(String),
    /// 0-based multiplication table.
    Cayley(Vec<Vec<usize>>),
    /// Generating permutations; elements are numbered in breadth-first order from the identity.
    Perms(Vec<Vec<usize>>),
    /// `Z^d`, studied through its characters.
    Abelian(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverImage {
    Element(usize),
    Vector(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverBlock {
    pub group: GroupSpec,
    /// One image per generator, in generator order.
    pub images: Vec<CoverImage>,
}

impl CoverBlock {
    pub fn build(&self, base: SurfaceData) -> Result<CoveringDatum> {
        let finite = |g: Result<FiniteGroup>| -> Result<CoveringDatum> {
            let g = g.map_err(|e| e.at("cover.group"))?;
            let mut images = Vec::with_capacity(self.images.len());
            for (i, im) in self.images.iter().enumerate() {
                match im {
                    CoverImage::Element(e) if *e < g.order() => images.push(GroupElement(*e)),
                    CoverImage::Element(e) => {
                        return Err(Error::BadGroup(format!(
                            "element {e} outside a group of order {}",
                            g.order()
                        ))
                        .at(format!("cover.images[{i}]")))
                    }
                    CoverImage::Vector(_) => {
                        return Err(Error::Input("expected a group element index".into())
                            .at(format!("cover.images[{i}]")))
                    }
                }
            }
            Ok(CoveringDatum::finite(base.clone(), g, images))
        };
        let cover = match &self.group {
            GroupSpec::Named(n) => finite(FiniteGroup::named(n))?,
            GroupSpec::Cayley(t) => finite(FiniteGroup::from_cayley(t.clone()))?,
            GroupSpec::Perms(p) => finite(FiniteGroup::from_perms(p))?,
            GroupSpec::Abelian(d) => {
                let mut images = Vec::with_capacity(self.images.len());
                for (i, im) in self.images.iter().enumerate() {
                    match im {
                        CoverImage::Vector(v) if v.len() == *d => images.push(v.clone()),
                        _ => {
                            return Err(Error::Input(format!("expected a vector of length {d}"))
                                .at(format!("cover.images[{i}]")))
                        }
                    }
                }
                CoveringDatum::abelian(base.clone(), *d, images)
            }
        };
        cover.validate().map_err(|e| e.at("cover"))?;
        Ok(cover)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FrameSpec {
    pub beta: RotationNumber,
    pub block: usize,
    pub position: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalTypeSpec {
    pub parts: Vec<LocalPart>,
}

impl LocalTypeSpec {
    pub fn local_type(&self) -> LocalType {
        LocalType::new(self.parts.iter().map(|p| (p.alpha, p.blocks.clone())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "camelCase",
    rename_all_fields = "camelCase"
)]
pub enum Experiment {
    WeightedNorm {
        form: ModeForm,
    },
    SolveMode {
        form: ModeForm,
    },
    PrimitiveSeries {
        beta: RotationNumber,
        n: MatrixText,
        a: Vec<ScalarText>,
    },
    ResidueReduction {
        pole: ScalarText,
        #[serde(default)]
        regular: Vec<ScalarText>,
        n: MatrixText,
        target: Vec<ScalarText>,
    },
    Dbar {
        coeff: [f64; 2],
        a: f64,
        n: i64,
        beta: RotationNumber,
        k: i64,
        radius: f64,
    },
    IlConstant {
        diameter: f64,
        dist_integral: f64,
    },
    GrowthFit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<Vec<[f64; 2]>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        frame: Option<FrameSpec>,
    },
    Probe {
        local_type: LocalTypeSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trials: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::WeightedNorm { .. } => "weightedNorm",
            Experiment::SolveMode { .. } => "solveMode",
            Experiment::PrimitiveSeries { .. } => "primitiveSeries",
            Experiment::ResidueReduction { .. } => "residueReduction",
            Experiment::Dbar { .. } => "dbar",
            Experiment::IlConstant { .. } => "ilConstant",
            Experiment::GrowthFit { .. } => "growthFit",
            Experiment::Probe { .. } => "probe",
        }
    }

    fn validate<S: Scalar>(&self) -> Result<()> {
        let form_ok = |f: &ModeForm| -> Result<()> {
            ModeForm::zero(f.degree, f.beta, f.k, f.radius)?;
            let width = f.channels();
            match f.modes.iter().find(|(_, ch)| ch.len() != width) {
                Some((n, ch)) => Err(Error::Input(format!(
                    "mode {n} has {} channels, expected {width}",
                    ch.len()
                ))),
                None => Ok(()),
            }
        };
        match self {
            Experiment::WeightedNorm { form } | Experiment::SolveMode { form } => {
                form_ok(form).map_err(|e| e.at("form"))
            }
            Experiment::PrimitiveSeries { n, a, .. } => {
                parse_matrix::<S>(n).map_err(|e| e.at("n"))?;
                parse_vector::<S>(a).map_err(|e| e.at("a")).map(|_| ())
            }
            Experiment::ResidueReduction {
                pole,
                regular,
                n,
                target,
            } => {
                pole.parse::<S>().map_err(|e| e.at("pole"))?;
                parse_vector::<S>(regular).map_err(|e| e.at("regular"))?;
                parse_matrix::<S>(n).map_err(|e| e.at("n"))?;
                parse_vector::<S>(target)
                    .map_err(|e| e.at("target"))
                    .map(|_| ())
            }
            Experiment::GrowthFit { samples, frame } => match (samples, frame) {
                (Some(_), None) | (None, Some(_)) => Ok(()),
                _ => Err(Error::Input(
                    "growthFit takes exactly one of `samples` and `frame`".into(),
                )),
            },
            Experiment::Probe { local_type, .. } => {
                if local_type.parts.iter().any(|p| p.blocks.is_empty()) {
                    Err(Error::Input("local type part without blocks".into()).at("localType"))
                } else {
                    Ok(())
                }
            }
            Experiment::Dbar { .. } | Experiment::IlConstant { .. } => Ok(()),
        }
    }
}

fn default_tolerance() -> f64 {
    1e-9
}
fn default_samples() -> usize {
    16
}
fn default_n_max() -> i64 {
    32
}
fn default_series_length() -> usize {
    8
}
fn default_panels() -> usize {
    4
}
fn default_order_cap() -> usize {
    1000
}
fn default_backend() -> Backend {
    Backend::Exact
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    /// Characters sampled by `family`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Fourier truncation for probes.
    #[serde(default = "default_n_max")]
    pub n_max: i64,
    #[serde(default = "default_series_length")]
    pub series_length: usize,
    /// Starting panel count of the half-line quadrature.
    #[serde(default = "default_panels")]
    pub panels: usize,
    #[serde(default = "default_order_cap")]
    pub order_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            backend: default_backend(),
            tolerance: default_tolerance(),
            seed: 0,
            samples: default_samples(),
            n_max: default_n_max(),
            series_length: default_series_length(),
            panels: default_panels(),
            order_cap: default_order_cap(),
        }
    }
}

impl Config {
    pub fn num(&self) -> NumConfig {
        NumConfig {
            tolerance: self.tolerance,
            order_cap: self.order_cap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InputDocument {
    pub surface: SurfaceBlock,
    /// Monodromy matrices in generator order `a1, b1, ..., c1, ..., cs`.
    pub matrices: Vec<MatrixText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skyscraper: Option<SkyscraperDatum>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub experiments: Vec<Experiment>,
    #[serde(default)]
    pub config: Config,
}

/// A document's data in one scalar backend.
#[derive(Debug, Clone)]
pub struct Built<S> {
    pub system: LocalSystem<S>,
    pub cover: Option<CoveringDatum>,
}

impl InputDocument {
    pub fn surface(&self) -> SurfaceData {
        self.surface.surface()
    }

    pub fn build<S: Scalar>(&self) -> Result<Built<S>> {
        let surface = self.surface();
        let cfg = self.config.num();
        let mats = self
            .matrices
            .iter()
            .enumerate()
            .map(|(i, m)| parse_matrix::<S>(m).map_err(|e| e.at(format!("matrices[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        let system = LocalSystem::new(surface.clone(), mats, &cfg).map_err(|e| e.at("matrices"))?;
        let cover = self.cover.as_ref().map(|c| c.build(surface)).transpose()?;
        Ok(Built { system, cover })
    }

    /// Runs every check that does not need a command.
    pub fn validate(&self) -> Result<()> {
        if !(self.config.tolerance > 0.0 && self.config.tolerance < 1.0) {
            return Err(Error::Input(format!(
                "tolerance {} outside (0, 1)",
                self.config.tolerance
            ))
            .at("config.tolerance"));
        }
        if self.config.n_max < 1 || self.config.panels == 0 {
            return Err(Error::Input("nMax and panels must be positive".into()).at("config"));
        }
        match self.config.backend {
            Backend::Exact => self.validate_in::<crate::numeric::Exact>(),
            Backend::Float => self.validate_in::<crate::numeric::Float>(),
        }
    }

    fn validate_in<S: Scalar>(&self) -> Result<()> {
        self.build::<S>()?;
        for (i, e) in self.experiments.iter().enumerate() {
            e.validate::<S>()
                .map_err(|err| err.at(format!("experiments[{i}]")))?;
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

/// Parses and validates a document. Syntax errors carry line, column and the JSON path.
pub fn parse_input(text: &str) -> Result<InputDocument> {
    let doc = parse_unchecked(text)?;
    doc.validate()?;
    Ok(doc)
}

/// Parses without the semantic checks.
pub fn parse_unchecked(text: &str) -> Result<InputDocument> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.to_string();
        if path == "." {
            Error::Input(msg)
        } else {
            Error::Input(msg).at(path)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIVIAL: &str = r#"{
        "surface": {"genus": 2, "punctures": 0},
        "matrices": [[["1"]], [["1"]], [["1"]], [[1]]]
    }"#;

    #[test]
    fn trivial_document_parses() {
        let d = parse_input(TRIVIAL).unwrap();
        assert_eq!(d.matrices.len(), 4);
        assert_eq!(d.config, Config::default());
    }

    #[test]
    fn relation_violation_is_reported() {
        let text = r#"{
            "surface": {"genus": 0, "punctures": 2},
            "matrices": [[["-1"]], [["1"]]]
        }"#;
        let e = parse_input(text).unwrap_err();
        assert!(
            e.to_string().contains("relation violated at generator c2"),
            "{e}"
        );
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn non_quasi_unitary_is_reported() {
        for backend in ["exact", "float"] {
            let text = format!(
                r#"{{
                "surface": {{"genus": 0, "punctures": 2}},
                "matrices": [[["2"]], [["1/2"]]],
                "config": {{"backend": "{backend}"}}
            }}"#
            );
            let e = parse_input(&text).unwrap_err();
            assert!(e.to_string().contains("not quasi-unitary"), "{e}");
        }
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let e = parse_input(
            "{\n  \"surface\": {\"genus\": 0, \"punctures\": 1},\n  \"matrices\": [[[\"1\"]],]\n}",
        )
        .unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_input(r#"{"surface": {"genus": 0, "punctures": 1}, "matrices": [[["x"]]]}"#)
            .unwrap_err();
        assert!(e.to_string().contains("matrices[0][0][0]"), "{e}");
    }

    #[test]
    fn bad_group_table() {
        let text = r#"{
            "surface": {"genus": 0, "punctures": 3},
            "matrices": [[["1"]], [["1"]], [["1"]]],
            "cover": {"group": {"cayley": [[0, 1], [0, 1]]}, "images": [1, 1, 0]}
        }"#;
        let e = parse_input(text).unwrap_err();
        assert!(
            e.to_string().contains("cover.group") && e.to_string().contains("bad group"),
            "{e}"
        );
    }

    #[test]
    fn round_trip() {
        let text = r#"{
            "surface": {"genus": 1, "punctures": ["x"]},
            "matrices": [[["1", 1], [0, "1"]], [["1", 0], [0, "1"]], [["1", "0"], ["0", "1"]]],
            "cover": {"group": {"named": "Z2"}, "images": [1, 0, 1]},
            "skyscraper": {"dims": [1, 2]},
            "experiments": [
                {"kind": "ilConstant", "diameter": 2.0, "distIntegral": 0.5},
                {"kind": "probe", "localType": {"parts": [{"alpha": "0", "blocks": [2]}]}, "trials": 4},
                {"kind": "growthFit", "frame": {"beta": "-1/2", "block": 1, "position": 0, "rMin": 1e-8, "rMax": 0.01, "count": 30}},
                {"kind": "primitiveSeries", "beta": "0", "n": [[0, 0], [1, 0]], "a": ["1", "1/2+i"]},
                {"kind": "weightedNorm", "form": {"degree": 0, "beta": "0", "k": 0, "radius": 0.5,
                    "modes": {"0": [[{"coeff": [1.0, 0.0], "a": 0.0, "b": 0}]]}}}
            ],
            "config": {"backend": "float", "seed": 7}
        }"#;
        // the cover does not fix the relation; only the round trip matters here
        let d = parse_unchecked(text).unwrap();
        let again = parse_unchecked(&d.render()).unwrap();
        assert_eq!(d, again);
        assert_eq!(d.render(), again.render());
    }
}
