//! Materials catalog: the built-in entries plus entries read from JSON.
//!
//! ```json
//! { "materials": [
//!   { "name": "InGaAs-QW", "base": "InAs/GaAs-QW", "g_cb": 0.6 }
//! ] }
//! ```
//!
//! Fields omitted from an entry are taken from its `base` (default: the
//! tensile InAs/GaAs well).

use std::path::Path;

use serde::Deserialize;
use spinxfer_core::band::{catalog, MaterialParams, StrainSign};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strain {
    Tensile,
    Compressive,
}

impl From<Strain> for StrainSign {
    fn from(s: Strain) -> Self {
        match s {
            Strain::Tensile => StrainSign::Tensile,
            Strain::Compressive => StrainSign::Compressive,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialDoc {
    pub name: Option<String>,
    pub base: Option<String>,
    pub g_cb: Option<f64>,
    pub g_lh: Option<f64>,
    pub g_hh_normal: Option<f64>,
    #[serde(rename = "strain_splitting_ueV")]
    pub strain_splitting_uev: Option<f64>,
    #[serde(rename = "band_gap_ueV")]
    pub band_gap_uev: Option<f64>,
    pub strain: Option<Strain>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogDoc {
    materials: Vec<MaterialDoc>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    materials: Vec<MaterialParams>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self { materials: catalog() }
    }
}

impl Catalog {
    pub fn get(&self, name: &str) -> Option<&MaterialParams> {
        self.materials.iter().find(|m| m.name() == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.materials.iter().map(|m| m.name()).collect()
    }

    /// Builds a material from `doc`, filling gaps from its base entry or
    /// from `fallback`.
    pub fn resolve(&self, doc: &MaterialDoc, fallback: &MaterialParams) -> Result<MaterialParams, String> {
        let base = match &doc.base {
            Some(b) => self.get(b).ok_or_else(|| format!("unknown base material {b:?}"))?,
            None => fallback,
        };
        let name = doc.name.clone().unwrap_or_else(|| match &doc.base {
            Some(_) => format!("{} (modified)", base.name()),
            None => "custom".into(),
        });
        MaterialParams::new(
            name,
            doc.g_cb.unwrap_or(base.g_cb()),
            doc.g_lh.unwrap_or(base.g_lh()),
            doc.g_hh_normal.unwrap_or(base.g_hh_normal()),
            doc.strain_splitting_uev.unwrap_or(base.strain_splitting_uev()),
            doc.band_gap_uev.unwrap_or(base.band_gap_uev()),
            doc.strain.map(StrainSign::from).unwrap_or(base.strain()),
        )
        .map_err(|e| e.to_string())
    }

    /// Adds or replaces entries from a catalog document. Every bad entry is
    /// reported.
    pub fn extend_from_json(&mut self, text: &str) -> Result<(), Vec<String>> {
        let doc: CatalogDoc = serde_json::from_str(text).map_err(|e| vec![format!("catalog: {e}")])?;
        let fallback = MaterialParams::default();
        let mut errors = Vec::new();
        for (i, entry) in doc.materials.iter().enumerate() {
            if entry.name.is_none() {
                errors.push(format!("catalog.materials[{i}]: missing name"));
                continue;
            }
            match self.resolve(entry, &fallback) {
                Ok(m) => match self.materials.iter_mut().find(|x| x.name() == m.name()) {
                    Some(slot) => *slot = m,
                    None => self.materials.push(m),
                },
                Err(e) => errors.push(format!("catalog.materials[{i}]: {e}")),
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut c = Self::default();
        c.extend_from_json(&text).map_err(CliError::Config)?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let c = Catalog::default();
        assert_eq!(c.names(), ["InAs/GaAs-QW", "GaAs-QW"]);
        assert_eq!(c.get("GaAs-QW").unwrap().strain(), StrainSign::Compressive);
    }

    #[test]
    fn entries_inherit_from_base() {
        let mut c = Catalog::default();
        c.extend_from_json(r#"{"materials": [{"name": "X", "base": "GaAs-QW", "g_cb": 0.6}]}"#).unwrap();
        let x = c.get("X").unwrap();
        assert_eq!(x.g_cb(), 0.6);
        assert_eq!(x.strain(), StrainSign::Compressive);
        assert_eq!(x.band_gap_uev(), 1_519_000.0);
    }

    #[test]
    fn all_bad_entries_reported() {
        let mut c = Catalog::default();
        let e = c
            .extend_from_json(
                r#"{"materials": [{"g_cb": 1.0}, {"name": "Y", "strain_splitting_ueV": -1}, {"name": "Z", "base": "nope"}]}"#,
            )
            .unwrap_err();
        assert_eq!(e.len(), 3);
        assert!(e[1].contains("strain splitting"));
        assert!(c.extend_from_json(r#"{"materials": [{"name": "W", "g_x": 1}]}"#).is_err());
    }
}
