//! Catalogs of groups of prime-power order and the on-disk census
//! directory (`<root>/<order>/*.cayley`) that can stand in for them.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::Serialize;

use crate::arith::{checked_pow, is_prime};
use crate::error::{Error, Result};
use crate::group::{GroupTable, ValidationPolicy, ValidationReport};
use crate::groupspec::GroupSpec;
use crate::spectrum::{order_spectrum, OrderSpectrum};

/// Whether a catalog is known to contain every isomorphism class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    Complete,
    CompleteViaCensus,
    Incomplete,
}

impl Completeness {
    /// Completeness of a product of catalogs.
    pub fn and(self, other: Completeness) -> Completeness {
        self.max(other)
    }

    pub fn is_complete(self) -> bool {
        self != Completeness::Incomplete
    }
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Completeness::Complete => "complete",
            Completeness::CompleteViaCensus => "complete-via-census",
            Completeness::Incomplete => "incomplete",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: GroupSpec,
    pub spectrum: OrderSpectrum,
    /// Exponent partition for catalog-built abelian groups.
    pub partition: Option<Vec<u32>>,
}

impl CatalogEntry {
    pub fn is_cyclic(&self) -> bool {
        self.spectrum.is_cyclic()
    }

    fn from_spec(name: String, spec: GroupSpec, partition: Option<Vec<u32>>) -> Result<Self> {
        let spectrum = spec.spectrum()?;
        Ok(CatalogEntry {
            name,
            spec,
            spectrum,
            partition,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub p: u64,
    pub k: u32,
    pub entries: Vec<CatalogEntry>,
    pub completeness: Completeness,
}

/// Partitions of `k` into non-increasing parts, `[k]` first.
pub fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

pub fn abelian_name(p: u64, partition: &[u32]) -> String {
    if partition.is_empty() {
        return "C1".into();
    }
    partition
        .iter()
        .map(|&l| format!("C{}", (p as u128).pow(l)))
        .collect::<Vec<_>>()
        .join("x")
}

fn abelian_spec(p: u64, partition: &[u32]) -> Result<GroupSpec> {
    Ok(match partition {
        [l] => GroupSpec::Cyclic(
            u64::try_from(checked_pow(p as u128, *l)?).map_err(|_| Error::Overflow("order"))?,
        ),
        _ => GroupSpec::Abelian {
            p,
            partition: partition.to_vec(),
        },
    })
}

/// Built-in catalog of groups of order `p^k`, spectra only.
///
/// Complete for `k <= 3`. For `k >= 4` it lists every abelian group plus
/// `M(k,p)` (and the dihedral, quaternion and semidihedral groups when
/// `p = 2`), flagged incomplete. A census directory holding tables of
/// order `p^k` replaces the built-in list.
pub fn catalog(p: u64, k: u32, census: Option<&CensusDir>) -> Result<Catalog> {
    if !is_prime(p as u128) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::input("catalog exponent must be at least 1"));
    }
    let order = checked_pow(p as u128, k)?;
    if let Some(census) = census {
        let entries = census.entries_of_order(order)?;
        if !entries.is_empty() {
            return Ok(Catalog {
                p,
                k,
                entries,
                completeness: Completeness::CompleteViaCensus,
            });
        }
    }

    let mut entries = Vec::new();
    for part in partitions(k) {
        let spec = abelian_spec(p, &part)?;
        entries.push(CatalogEntry::from_spec(
            abelian_name(p, &part),
            spec,
            Some(part),
        )?);
    }
    let order64 = u64::try_from(order).map_err(|_| Error::Overflow("order"))?;
    let mut extra = Vec::new();
    match (k, p) {
        (1 | 2, _) => {}
        (3, 2) => extra.extend([GroupSpec::Dihedral(8), GroupSpec::GeneralizedQuaternion(8)]),
        (3, _) => extra.extend([GroupSpec::Heisenberg(p), GroupSpec::Modular { n: 3, p }]),
        (_, 2) => extra.extend([
            GroupSpec::Modular { n: k, p },
            GroupSpec::Dihedral(order64),
            GroupSpec::GeneralizedQuaternion(order64),
            GroupSpec::Semidihedral(order64),
        ]),
        _ => extra.push(GroupSpec::Modular { n: k, p }),
    }
    for spec in extra {
        entries.push(CatalogEntry::from_spec(spec.to_string(), spec, None)?);
    }
    Ok(Catalog {
        p,
        k,
        entries,
        completeness: if k <= 3 {
            Completeness::Complete
        } else {
            Completeness::Incomplete
        },
    })
}

/// Materialized groups of the built-in catalog of order `p^k`.
pub fn p_group_catalog(p: u64, k: u32) -> Result<(Vec<GroupTable>, Completeness)> {
    let cat = catalog(p, k, None)?;
    let groups = cat
        .entries
        .iter()
        .map(|e| Ok(e.spec.build()?.with_name(e.name.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok((groups, cat.completeness))
}

/// One table accepted by [`CensusDir::ingest`].
#[derive(Clone, Debug, Serialize)]
pub struct IngestRecord {
    pub source: PathBuf,
    pub destination: PathBuf,
    pub order: usize,
    pub spectrum: OrderSpectrum,
    pub validation: ValidationReport,
}

/// Directory of validated Cayley tables grouped by order.
#[derive(Debug)]
pub struct CensusDir {
    root: PathBuf,
    policy: ValidationPolicy,
    cache: Mutex<BTreeMap<u128, Vec<CatalogEntry>>>,
}

impl CensusDir {
    pub fn new(root: impl Into<PathBuf>, policy: ValidationPolicy) -> Self {
        CensusDir {
            root: root.into(),
            policy,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn order_dir(&self, order: u128) -> PathBuf {
        self.root.join(order.to_string())
    }

    fn cayley_files(dir: &Path) -> Result<Vec<PathBuf>> {
        if !dir.is_dir() {
            return Ok(Vec::new());
        }
        let read = fs::read_dir(dir).map_err(|source| Error::File {
            path: dir.to_path_buf(),
            source,
        })?;
        let mut files = Vec::new();
        for entry in read {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "cayley") && path.is_file() {
                files.push(path);
            }
        }
        files.sort();
        Ok(files)
    }

    /// Validated census groups of the given order, empty when none exist.
    pub fn entries_of_order(&self, order: u128) -> Result<Vec<CatalogEntry>> {
        if let Some(hit) = self.cache.lock().expect("census cache").get(&order) {
            return Ok(hit.clone());
        }
        let mut entries = Vec::new();
        for path in Self::cayley_files(&self.order_dir(order))? {
            let g = GroupTable::read_cayley(&path)?;
            if g.size() as u128 != order {
                return Err(Error::input(format!(
                    "{} has order {} but sits in the census directory for order {order}",
                    path.display(),
                    g.size()
                )));
            }
            g.validate_with(&self.policy)?;
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            entries.push(CatalogEntry {
                name: format!("census:{order}/{stem}"),
                spectrum: order_spectrum(&g)?,
                spec: GroupSpec::File(path),
                partition: None,
            });
        }
        self.cache
            .lock()
            .expect("census cache")
            .insert(order, entries.clone());
        Ok(entries)
    }

    /// Validates every `*.cayley` file in `source` and copies it to
    /// `<root>/<order>/`. Nothing is copied unless every file validates.
    pub fn ingest(&self, source: &Path) -> Result<Vec<IngestRecord>> {
        let files = Self::cayley_files(source)?;
        if files.is_empty() {
            return Err(Error::input(format!(
                "no .cayley files in {}",
                source.display()
            )));
        }
        let mut staged = Vec::new();
        for path in files {
            let g = GroupTable::read_cayley(&path)?;
            let validation = g.validate_with(&self.policy)?;
            let spectrum = order_spectrum(&g)?;
            let destination = self
                .order_dir(g.size() as u128)
                .join(path.file_name().expect("listed files have names"));
            staged.push(IngestRecord {
                source: path,
                destination,
                order: g.size(),
                spectrum,
                validation,
            });
        }
        for rec in &staged {
            let dir = rec.destination.parent().expect("order directory");
            fs::create_dir_all(dir).map_err(|source| Error::File {
                path: dir.to_path_buf(),
                source,
            })?;
            fs::copy(&rec.source, &rec.destination).map_err(|source| Error::File {
                path: rec.destination.clone(),
                source,
            })?;
            self.cache
                .lock()
                .expect("census cache")
                .remove(&(rec.order as u128));
        }
        Ok(staged)
    }
}
