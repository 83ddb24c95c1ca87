//! The JSON algebra-document format: a declarative description of a graded
//! space together with an optional linear differential, a tower of brackets,
//! an optional pairing and an optional product table.  Coefficients are
//! lowest-terms rationals written as strings (`"3"`, `"-1/2"`), never
//! floating point numbers.
//!
//! Serialization is canonical: keys sorted, two-space indentation, optional
//! blocks omitted when absent.  A canonical document round-trips through
//! parse → serialize byte-identically.  The full schema is documented in
//! `docs/SCHEMA.md`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::derivation::{Derivation, SymMultiMap};
use crate::error::{Error, Result};
use crate::graded::{BilinearForm, Complex, GradedSpace, Generator, LinearMap, Parity};
use crate::linf::{shifted_algebra, LInftyStructure};
use crate::scalar::{self, Scalar};
use crate::tensor::Cdga;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDecl {
    pub name: String,
    pub parity: u8,
}

/// One matrix entry of the linear differential: `d(source) += c * target`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialEntry {
    pub source: String,
    pub target: String,
    pub coefficient: String,
}

/// One structure constant: the bracket of `inputs` (any arity >= 2) has a
/// component `c * output`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub inputs: Vec<String>,
    pub output: String,
    pub coefficient: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingBlock {
    pub parity: u8,
    pub entries: Vec<PairingEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub output: String,
    pub coefficient: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdgaBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub products: Vec<ProductEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceBlock {
    pub generators: Vec<GeneratorDecl>,
}

pub const SCHEMA_VERSION: &str = "linfty/1";

/// Parsed and name-validated algebra document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub schema: String,
    pub space: SpaceBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differential: Option<Vec<DifferentialEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<Vec<BracketEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cdga: Option<CdgaBlock>,
}

impl AlgebraDocument {
    /// Parses and validates a JSON document.
    pub fn parse(bytes: &[u8]) -> Result<AlgebraDocument> {
        let text = std::str::from_utf8(bytes)
            .map_err(|e| Error::Schema(format!("document is not UTF-8: {e}")))?;
        let doc: AlgebraDocument = serde_json::from_str(text)
            .map_err(|e| Error::Schema(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported schema `{}` (expected `{SCHEMA_VERSION}`)",
                self.schema
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for g in &self.space.generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::Duplicate(g.name.clone()));
            }
            Parity::from_u8(g.parity)?;
        }
        let declared = |n: &str| -> Result<()> {
            if seen.contains(n) {
                Ok(())
            } else {
                Err(Error::Undeclared(n.to_string()))
            }
        };
        if let Some(diff) = &self.differential {
            for e in diff {
                declared(&e.source)?;
                declared(&e.target)?;
                scalar::parse(&e.coefficient)?;
            }
        }
        if let Some(brackets) = &self.structure {
            for b in brackets {
                if b.inputs.len() < 2 {
                    return Err(Error::Schema(
                        "bracket arity must be at least 2 (put linear terms into the differential)"
                            .into(),
                    ));
                }
                for n in &b.inputs {
                    declared(n)?;
                }
                declared(&b.output)?;
                scalar::parse(&b.coefficient)?;
            }
        }
        if let Some(p) = &self.pairing {
            Parity::from_u8(p.parity)?;
            for e in &p.entries {
                declared(&e.left)?;
                declared(&e.right)?;
                scalar::parse(&e.value)?;
            }
        }
        if let Some(c) = &self.cdga {
            if let Some(u) = &c.unit {
                declared(u)?;
            }
            for e in &c.products {
                declared(&e.left)?;
                declared(&e.right)?;
                declared(&e.output)?;
                scalar::parse(&e.coefficient)?;
            }
        }
        Ok(())
    }

    /// Canonical serialization: sorted keys, two-space indentation, trailing
    /// newline.  `parse` followed by `serialize` reproduces a canonical
    /// document byte for byte.
    pub fn serialize(&self) -> String {
        // Route through `serde_json::Value`, whose object maps are ordered
        // maps with sorted keys.
        let value = serde_json::to_value(self).expect("document serialization");
        let mut out = serde_json::to_string_pretty(&sorted(value)).expect("pretty print");
        out.push('\n');
        out
    }

    pub fn space(&self) -> Result<Arc<GradedSpace>> {
        let gens = self
            .space
            .generators
            .iter()
            .map(|g| {
                Ok(Generator {
                    name: g.name.clone(),
                    parity: Parity::from_u8(g.parity)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(GradedSpace::new(gens)?))
    }

    /// The declared linear differential, validated to be odd and square-zero.
    pub fn complex(&self) -> Result<Complex> {
        let space = self.space()?;
        let mut entries = BTreeMap::new();
        if let Some(diff) = &self.differential {
            for e in diff {
                let s = space.index_of(&e.source)?;
                let t = space.index_of(&e.target)?;
                let c = scalar::parse(&e.coefficient)?;
                if !c.is_zero() {
                    *entries.entry((t, s)).or_insert_with(scalar::zero) += c;
                }
            }
        }
        let d = LinearMap::new(space.clone(), space.clone(), Parity::Odd, entries)?;
        Complex::new(space, d)
    }

    /// The declared homotopy Lie structure at the given cutoff: linear part
    /// from the differential block, brackets (grouped by arity) from the
    /// structure block.
    pub fn linfty(&self, cutoff: usize) -> Result<LInftyStructure> {
        let complex = self.complex()?;
        let space = complex.space.clone();
        let alg = shifted_algebra(&space);
        let mut by_arity: BTreeMap<usize, SymMultiMap> = BTreeMap::new();
        if let Some(brackets) = &self.structure {
            for b in brackets {
                let word = b
                    .inputs
                    .iter()
                    .map(|n| space.index_of(n))
                    .collect::<Result<Vec<_>>>()?;
                let out = space.index_of(&b.output)?;
                let c = scalar::parse(&b.coefficient)?;
                let map = by_arity
                    .entry(word.len())
                    .or_insert_with(|| SymMultiMap::new(alg.clone(), word.len()));
                map.set(&word, out, c)?;
            }
        }
        let mut m = Derivation::zero(alg.clone(), Parity::Odd, cutoff);
        for map in by_arity.values() {
            m = m.add(&map.to_derivation(cutoff, Parity::Odd)?)?;
        }
        LInftyStructure::new(complex, cutoff, m)
    }

    /// The declared pairing as a bilinear form on the space.
    pub fn pairing_form(&self) -> Result<Option<BilinearForm>> {
        let Some(block) = &self.pairing else {
            return Ok(None);
        };
        let space = self.space()?;
        let mut entries = BTreeMap::new();
        for e in &block.entries {
            let i = space.index_of(&e.left)?;
            let j = space.index_of(&e.right)?;
            entries.insert((i, j), scalar::parse(&e.value)?);
        }
        Ok(Some(BilinearForm::new(
            space,
            Parity::from_u8(block.parity)?,
            entries,
        )?))
    }

    /// The declared product table as a validated differential graded
    /// commutative algebra (with the pairing block as its invariant form,
    /// when present).
    pub fn cdga(&self) -> Result<Cdga> {
        let Some(block) = &self.cdga else {
            return Err(Error::Input("document has no cdga block".into()));
        };
        let complex = self.complex()?;
        let space = complex.space.clone();
        let mut products = Vec::new();
        for e in &block.products {
            products.push((
                space.index_of(&e.left)?,
                space.index_of(&e.right)?,
                space.index_of(&e.output)?,
                scalar::parse(&e.coefficient)?,
            ));
        }
        let unit = block.unit.as_ref().map(|u| space.index_of(u)).transpose()?;
        Cdga::new(space, complex.d, &products, unit, self.pairing_form()?)
    }

    /// Builds a document for a plain Lie algebra given by binary structure
    /// constants (the inverse of `linfty` for weight-2 structures).
    pub fn from_lie(
        names: &[(&str, u8)],
        brackets: &[(usize, usize, usize, Scalar)],
    ) -> AlgebraDocument {
        AlgebraDocument {
            schema: SCHEMA_VERSION.into(),
            space: SpaceBlock {
                generators: names
                    .iter()
                    .map(|&(n, p)| GeneratorDecl {
                        name: n.into(),
                        parity: p,
                    })
                    .collect(),
            },
            differential: None,
            structure: Some(
                brackets
                    .iter()
                    .map(|(i, j, k, c)| BracketEntry {
                        inputs: vec![names[*i].0.into(), names[*j].0.into()],
                        output: names[*k].0.into(),
                        coefficient: scalar::render(c),
                    })
                    .collect(),
            ),
            pairing: None,
            cdga: None,
        }
    }
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, sorted(v)))
                .collect::<serde_json::Map<_, _>>(),
        ),
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

/// `{"schema": ..., "space": {"generators": []}}`: the zero space.
pub fn empty_document() -> AlgebraDocument {
    AlgebraDocument {
        schema: SCHEMA_VERSION.into(),
        space: SpaceBlock { generators: vec![] },
        differential: None,
        structure: None,
        pairing: None,
        cdga: None,
    }
}

/// A deterministic JSON rendering of an arbitrary report value, matching the
/// canonical document style (sorted keys, two-space indent, trailing
/// newline).
pub fn canonical_json(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(&sorted(value.clone())).expect("pretty print");
    out.push('\n');
    out
}

/// Convenience used by reports: a rational rendered canonically.
pub fn rational_value(x: &Scalar) -> Value {
    json!(scalar::render(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linf;
    use crate::scalar::int;

    fn fixture(name: &str) -> Vec<u8> {
        let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
        std::fs::read(&path).unwrap_or_else(|e| panic!("cannot read {path}: {e}"))
    }

    #[test]
    fn nonunimodular_fixture_parses_and_matches_builtin() {
        let doc = AlgebraDocument::parse(&fixture("nonunimodular.json")).unwrap();
        let s = doc.linfty(6).unwrap();
        let builtin = linf::nonunimodular(6);
        assert_eq!(s.m.values(), builtin.m.values());
        assert!(s.check_mc().unwrap());
    }

    #[test]
    fn heisenberg_fixture_parses() {
        let doc = AlgebraDocument::parse(&fixture("heisenberg.json")).unwrap();
        let s = doc.linfty(6).unwrap();
        let builtin = linf::heisenberg(6);
        assert_eq!(s.m.values(), builtin.m.values());
    }

    #[test]
    fn fixtures_are_canonical() {
        for name in [
            "nonunimodular.json",
            "heisenberg.json",
            "abelian.json",
            "sl2.json",
            "double.json",
        ] {
            let bytes = fixture(name);
            let doc = AlgebraDocument::parse(&bytes).unwrap();
            assert_eq!(
                doc.serialize().as_bytes(),
                &bytes[..],
                "{name} must round-trip byte-identically"
            );
        }
    }

    #[test]
    fn empty_generator_list_is_valid() {
        let doc = empty_document();
        let text = doc.serialize();
        let back = AlgebraDocument::parse(text.as_bytes()).unwrap();
        assert_eq!(back.space.generators.len(), 0);
        assert_eq!(back.serialize(), text);
        assert!(back.linfty(4).unwrap().check_mc().unwrap());
    }

    #[test]
    fn error_codes_are_distinct() {
        let base = AlgebraDocument::from_lie(&[("x", 0), ("y", 0)], &[(0, 1, 1, int(1))]);
        // bad rational
        let mut doc = base.clone();
        doc.structure.as_mut().unwrap()[0].coefficient = "1/0".into();
        let err = AlgebraDocument::parse(doc.serialize().as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("E_RATIONAL"), "{err}");
        // undeclared generator
        let mut doc = base.clone();
        doc.structure.as_mut().unwrap()[0].output = "z".into();
        let err = AlgebraDocument::parse(doc.serialize().as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("E_UNDECLARED"), "{err}");
        // duplicate generator
        let mut doc = base.clone();
        let g = doc.space.generators[0].clone();
        doc.space.generators.push(g);
        let err = AlgebraDocument::parse(doc.serialize().as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("E_DUPLICATE"), "{err}");
        // unknown field
        let err = AlgebraDocument::parse(br#"{"schema":"linfty/1","space":{"generators":[]},"bogus":1}"#)
            .unwrap_err();
        assert!(err.to_string().starts_with("E_SCHEMA"), "{err}");
        // wrong schema version
        let err = AlgebraDocument::parse(br#"{"schema":"linfty/9","space":{"generators":[]}}"#)
            .unwrap_err();
        assert!(err.to_string().starts_with("E_SCHEMA"), "{err}");
        // bad parity
        let err = AlgebraDocument::parse(
            br#"{"schema":"linfty/1","space":{"generators":[{"name":"x","parity":3}]}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().starts_with("E_PARITY"), "{err}");
    }

    #[test]
    fn document_with_differential_pairing_and_cdga() {
        // H(S^2)-style two-generator algebra with zero differential.
        let doc = AlgebraDocument {
            schema: SCHEMA_VERSION.into(),
            space: SpaceBlock {
                generators: vec![
                    GeneratorDecl { name: "one".into(), parity: 0 },
                    GeneratorDecl { name: "w".into(), parity: 0 },
                ],
            },
            differential: None,
            structure: None,
            pairing: Some(PairingBlock {
                parity: 0,
                entries: vec![PairingEntry {
                    left: "one".into(),
                    right: "w".into(),
                    value: "1".into(),
                }],
            }),
            cdga: Some(CdgaBlock {
                unit: Some("one".into()),
                products: vec![
                    ProductEntry { left: "one".into(), right: "one".into(), output: "one".into(), coefficient: "1".into() },
                    ProductEntry { left: "one".into(), right: "w".into(), output: "w".into(), coefficient: "1".into() },
                    ProductEntry { left: "w".into(), right: "one".into(), output: "w".into(), coefficient: "1".into() },
                ],
            }),
        };
        let text = doc.serialize();
        let back = AlgebraDocument::parse(text.as_bytes()).unwrap();
        assert_eq!(back.serialize(), text);
        let a = back.cdga().unwrap();
        assert_eq!(a.space.dim(), 2);
        assert!(back.pairing_form().unwrap().is_some());
    }
}
