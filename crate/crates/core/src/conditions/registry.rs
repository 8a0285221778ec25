use serde::{Deserialize, Serialize};

use super::{build_certificate, Certificate, CertificateParams, Condition, ConditionError, Mode, EXAMPLE_IDS};

/// The holds/fails lists of one example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub id: String,
    pub holds: Vec<Condition>,
    pub fails: Vec<Condition>,
    pub mk_galois: bool,
}

impl RegistryEntry {
    pub fn base_pairs(&self) -> Vec<(Condition, Condition)> {
        self.holds.iter().flat_map(|&a| self.fails.iter().map(move |&b| (a, b))).collect()
    }
}

impl From<&Certificate> for RegistryEntry {
    fn from(c: &Certificate) -> Self {
        RegistryEntry { id: c.id.clone(), holds: c.holds.clone(), fails: c.fails.clone(), mk_galois: c.mk_galois }
    }
}

/// Base non-implications, one entry per example. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// Entries of the built-in certificates at their default parameters.
    pub fn standard() -> Self {
        let certs: Vec<Certificate> = EXAMPLE_IDS
            .iter()
            .map(|id| build_certificate(id, &CertificateParams::default()).expect("default parameters are valid"))
            .collect();
        Registry::from_certificates(&certs)
    }

    pub fn from_certificates(certs: &[Certificate]) -> Self {
        Registry { entries: certs.iter().map(RegistryEntry::from).collect() }
    }

    /// Parses a certificate or an array of certificates; each is validated.
    pub fn from_json(text: &str) -> Result<Self, ConditionError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ConditionError::BadCertificate(e.to_string()))?;
        let certs: Vec<Certificate> = match value {
            serde_json::Value::Array(_) => serde_json::from_value(value),
            other => serde_json::from_value(other).map(|c| vec![c]),
        }
        .map_err(|e| ConditionError::BadCertificate(e.to_string()))?;
        for c in &certs {
            c.validate()?;
        }
        Ok(Registry::from_certificates(&certs))
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    /// The registry with one example removed.
    pub fn without(&self, id: &str) -> Self {
        Registry { entries: self.entries.iter().filter(|e| e.id != id).cloned().collect() }
    }

    /// Entries that refute implications in `mode`: all of them in general
    /// mode, the Galois-`M/K` ones in that mode, none in tame mode.
    pub fn entries_for(&self, mode: Mode) -> impl Iterator<Item = &RegistryEntry> {
        self.entries.iter().filter(move |e| match mode {
            Mode::General => true,
            Mode::GaloisMk => e.mk_galois,
            Mode::Tame => false,
        })
    }
}
