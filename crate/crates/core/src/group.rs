//! Concrete finite groups: element arithmetic, cyclic subgroups, axiom
//! validation and the plain-text Cayley table format.
//!
//! A [`GroupTable`] always carries a structured multiplication law (residue
//! tuples, metacyclic normal forms, unitriangular matrices, products, or an
//! ingested table). Groups up to a configurable order cap also materialize
//! the full `|G| x |G|` table; above the cap products are computed on demand.

use std::fmt;
use std::fs;
use std::path::Path;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Axiom, AxiomViolation, Error, Result};

/// Groups up to this order get a materialized table by default.
pub const DEFAULT_TABLE_CAP: usize = 4096;

/// Hard ceiling on the order of any constructed group.
pub const DEFAULT_ORDER_LIMIT: usize = 1 << 26;

/// Full associativity checking is mandatory up to this order.
pub const DEFAULT_FULL_VALIDATION_CAP: usize = 256;

pub const DEFAULT_SAMPLED_TRIPLES: u64 = 1_000_000;

/// Index of an element inside the group it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ElementIndex(pub usize);

impl From<usize> for ElementIndex {
    fn from(v: usize) -> Self {
        ElementIndex(v)
    }
}

impl fmt::Display for ElementIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LabelStyle {
    Dihedral,
    Quaternion,
    Semidihedral,
    Modular,
}

/// Elements `x^i y^j` (index `j * base + i`) with `x^base = 1`,
/// `y^top = x^wrap` and `y^j x y^-j = x^(twist[j])`.
#[derive(Clone, Debug)]
pub(crate) struct Metacyclic {
    pub base: usize,
    pub top: usize,
    pub twist: Vec<usize>,
    pub wrap: usize,
    pub style: LabelStyle,
}

impl Metacyclic {
    /// `t` is the exponent with `y x y^-1 = x^t`.
    pub fn new(base: usize, top: usize, t: usize, wrap: usize, style: LabelStyle) -> Self {
        let mut twist = Vec::with_capacity(top);
        let mut cur = 1 % base.max(1);
        for _ in 0..top {
            twist.push(cur);
            cur = ((cur as u128 * t as u128) % base as u128) as usize;
        }
        Metacyclic {
            base,
            top,
            twist,
            wrap,
            style,
        }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let (j1, i1) = (a / self.base, a % self.base);
        let (j2, i2) = (b / self.base, b % self.base);
        let base = self.base as u128;
        let mut i = i1 as u128 + (i2 as u128 * self.twist[j1] as u128) % base;
        let mut j = j1 + j2;
        if j >= self.top {
            j -= self.top;
            i += self.wrap as u128;
        }
        j * self.base + (i % base) as usize
    }

    fn label(&self, a: usize) -> String {
        let (j, i) = (a / self.base, a % self.base);
        if self.style == LabelStyle::Quaternion && self.base == 4 {
            return ["1", "i", "-1", "-i", "j", "k", "-j", "-k"][a].to_string();
        }
        let (x, y) = match self.style {
            LabelStyle::Dihedral => ("r", "s"),
            LabelStyle::Modular => ("a", "b"),
            LabelStyle::Quaternion | LabelStyle::Semidihedral => ("x", "y"),
        };
        let mut out = String::new();
        for (sym, e) in [(x, i), (y, j)] {
            match e {
                0 => {}
                1 => out.push_str(sym),
                _ => out.push_str(&format!("{sym}^{e}")),
            }
        }
        if out.is_empty() {
            out.push('e');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Law {
    Cyclic {
        modulus: usize,
    },
    Metacyclic(Metacyclic),
    /// 3x3 upper unitriangular matrices over Z_p, index `a p^2 + b p + c`.
    Heisenberg {
        p: usize,
    },
    Product(Box<GroupTable>, Box<GroupTable>),
    /// Only the materialized table defines the product.
    Table,
}

impl Law {
    fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            Law::Cyclic { modulus } => {
                let s = a + b;
                if s >= *modulus {
                    s - modulus
                } else {
                    s
                }
            }
            Law::Metacyclic(m) => m.mul(a, b),
            Law::Heisenberg { p } => {
                let p = *p;
                let (a1, b1, c1) = (a / (p * p), (a / p) % p, a % p);
                let (a2, b2, c2) = (b / (p * p), (b / p) % p, b % p);
                let x = (a1 + a2) % p;
                let y = (b1 + b2) % p;
                let z = (c1 + c2 + a1 * b2) % p;
                (x * p + y) * p + z
            }
            Law::Product(l, r) => {
                let n = r.size;
                l.mul(a / n, b / n) * n + r.mul(a % n, b % n)
            }
            Law::Table => unreachable!("table law without a materialized table"),
        }
    }
}

/// How thoroughly [`GroupTable::validate`] checks associativity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationMode {
    Full,
    Sampled { triples: u64, seed: u64 },
}

/// Chooses full or sampled validation from the group order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationPolicy {
    pub full_cap: usize,
    pub samples: u64,
    pub seed: u64,
}

impl Default for ValidationPolicy {
    fn default() -> Self {
        ValidationPolicy {
            full_cap: DEFAULT_FULL_VALIDATION_CAP,
            samples: DEFAULT_SAMPLED_TRIPLES,
            seed: 0,
        }
    }
}

impl ValidationPolicy {
    pub fn mode_for(&self, size: usize) -> ValidationMode {
        if size <= self.full_cap {
            ValidationMode::Full
        } else {
            ValidationMode::Sampled {
                triples: self.samples,
                seed: self.seed,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub triples_checked: u64,
}

/// Every cyclic subgroup of a group, computed once per subgroup.
#[derive(Clone, Debug)]
pub struct CyclicDecomposition {
    /// Element order of each element.
    pub order_of: Vec<u32>,
    /// Index into `subgroups` of the cyclic subgroup each element generates.
    pub subgroup_of: Vec<u32>,
    /// Distinct cyclic subgroups as sorted element lists.
    pub subgroups: Vec<Vec<u32>>,
}

impl CyclicDecomposition {
    pub fn generated_by(&self, g: ElementIndex) -> &[u32] {
        &self.subgroups[self.subgroup_of[g.0] as usize]
    }
}

/// A concrete finite group.
#[derive(Clone, Debug)]
pub struct GroupTable {
    name: String,
    size: usize,
    identity: ElementIndex,
    law: Law,
    table: Option<Vec<u32>>,
    labels: Option<Vec<String>>,
}

impl GroupTable {
    /// Structured group; the table is materialized when `size` is within
    /// [`DEFAULT_TABLE_CAP`].
    pub(crate) fn from_law(name: impl Into<String>, size: usize, law: Law) -> Self {
        let mut g = GroupTable {
            name: name.into(),
            size,
            identity: ElementIndex(0),
            law,
            table: None,
            labels: None,
        };
        g.materialize(DEFAULT_TABLE_CAP);
        g
    }

    /// Group from explicit product rows. Only shape and range are checked
    /// here; call [`GroupTable::validate`] for the axioms.
    pub fn from_rows(
        name: impl Into<String>,
        identity: usize,
        rows: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::input("a group table needs at least one element"));
        }
        if size > u32::MAX as usize {
            return Err(Error::Resource(format!("table of order {size}")));
        }
        if identity >= size {
            return Err(Error::input(format!(
                "identity {identity} out of range for order {size}"
            )));
        }
        let mut table = Vec::with_capacity(size * size);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::input(format!(
                    "row {r} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= size {
                    return Err(Error::input(format!(
                        "row {r} entry {v} out of range for order {size}"
                    )));
                }
                table.push(v as u32);
            }
        }
        if let Some(l) = &labels {
            if l.len() != size {
                return Err(Error::input(format!(
                    "{} labels for {size} elements",
                    l.len()
                )));
            }
        }
        Ok(GroupTable {
            name: name.into(),
            size,
            identity: ElementIndex(identity),
            law: Law::Table,
            table: Some(table),
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub(crate) fn with_identity(mut self, e: ElementIndex) -> Self {
        self.identity = e;
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> ElementIndex {
        self.identity
    }

    pub fn is_materialized(&self) -> bool {
        self.table.is_some()
    }

    /// Fills in the full product table if the order is within `cap`.
    pub fn materialize(&mut self, cap: usize) {
        if self.table.is_some() || self.size > cap {
            return;
        }
        let n = self.size;
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(self.law.mul(a, b) as u32);
            }
        }
        self.table = Some(table);
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementIndex> {
        (0..self.size).map(ElementIndex)
    }

    fn check(&self, a: ElementIndex) -> Result<()> {
        if a.0 < self.size {
            Ok(())
        } else {
            Err(Error::input(format!(
                "element {} out of range for {} of order {}",
                a.0, self.name, self.size
            )))
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.size + b] as usize,
            None => self.law.mul(a, b),
        }
    }

    pub fn multiply(&self, a: ElementIndex, b: ElementIndex) -> Result<ElementIndex> {
        self.check(a)?;
        self.check(b)?;
        Ok(ElementIndex(self.mul(a.0, b.0)))
    }

    /// `a^m` by binary exponentiation; `a^0` is the identity.
    pub fn power(&self, a: ElementIndex, mut m: u64) -> Result<ElementIndex> {
        self.check(a)?;
        let mut acc = self.identity.0;
        let mut base = a.0;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.mul(acc, base);
            }
            m >>= 1;
            if m > 0 {
                base = self.mul(base, base);
            }
        }
        Ok(ElementIndex(acc))
    }

    /// Smallest `m >= 1` with `a^m = e`, by successive multiplication.
    pub fn element_order(&self, a: ElementIndex) -> Result<u64> {
        self.check(a)?;
        let mut cur = a.0;
        let mut m = 1u64;
        while cur != self.identity.0 {
            cur = self.mul(cur, a.0);
            m += 1;
            if m as usize > self.size {
                return Err(Error::invariant(format!(
                    "element {} of {} never reaches the identity",
                    a.0, self.name
                )));
            }
        }
        Ok(m)
    }

    /// `<a>` as a sorted list of indices.
    pub fn cyclic_subgroup(&self, a: ElementIndex) -> Result<Vec<ElementIndex>> {
        let mut powers = self.power_cycle(a.0)?;
        powers.sort_unstable();
        Ok(powers
            .into_iter()
            .map(|v| ElementIndex(v as usize))
            .collect())
    }

    /// `[a, a^2, ..., a^o = e]`.
    fn power_cycle(&self, a: usize) -> Result<Vec<u32>> {
        self.check(ElementIndex(a))?;
        let mut out = vec![a as u32];
        let mut cur = a;
        while cur != self.identity.0 {
            cur = self.mul(cur, a);
            out.push(cur as u32);
            if out.len() > self.size {
                return Err(Error::invariant(format!(
                    "element {a} of {} never reaches the identity",
                    self.name
                )));
            }
        }
        Ok(out)
    }

    /// Walks each cyclic subgroup once, assigning it to all of its generators.
    pub fn cyclic_decomposition(&self) -> Result<CyclicDecomposition> {
        const UNSET: u32 = u32::MAX;
        let n = self.size;
        let mut order_of = vec![0u32; n];
        let mut subgroup_of = vec![UNSET; n];
        let mut subgroups = Vec::new();
        for g in 0..n {
            if subgroup_of[g] != UNSET {
                continue;
            }
            let cycle = self.power_cycle(g)?;
            let o = cycle.len();
            let id = subgroups.len() as u32;
            for (k, &h) in cycle.iter().enumerate() {
                if (k + 1).gcd(&o) == 1 {
                    let h = h as usize;
                    if subgroup_of[h] != UNSET {
                        return Err(Error::invariant(format!(
                            "element {h} of {} generates two different cyclic subgroups",
                            self.name
                        )));
                    }
                    subgroup_of[h] = id;
                    order_of[h] = o as u32;
                }
            }
            let mut members = cycle;
            members.sort_unstable();
            subgroups.push(members);
        }
        Ok(CyclicDecomposition {
            order_of,
            subgroup_of,
            subgroups,
        })
    }

    pub fn label(&self, a: ElementIndex) -> String {
        if let Some(l) = &self.labels {
            return l[a.0].clone();
        }
        match &self.law {
            Law::Cyclic { .. } | Law::Table => a.0.to_string(),
            Law::Metacyclic(m) => m.label(a.0),
            Law::Heisenberg { p } => {
                let p = *p;
                format!("[{},{},{}]", a.0 / (p * p), (a.0 / p) % p, a.0 % p)
            }
            Law::Product(l, r) => {
                let n = r.size;
                format!(
                    "({},{})",
                    l.label(ElementIndex(a.0 / n)),
                    r.label(ElementIndex(a.0 % n))
                )
            }
        }
    }

    pub fn element_by_label(&self, label: &str) -> Option<ElementIndex> {
        self.elements().find(|&a| self.label(a) == label)
    }

    /// Checks identity and inverse (Latin square) laws in full, then
    /// associativity on all triples or on seeded random triples.
    pub fn validate(&self, mode: ValidationMode) -> Result<ValidationReport> {
        let n = self.size;
        let e = self.identity.0;
        for a in 0..n {
            if self.mul(e, a) != a || self.mul(a, e) != a {
                return Err(violation(
                    Axiom::Identity,
                    &[e, a],
                    format!("identity {e} does not fix element {a}"),
                ));
            }
        }
        // Latin square: no repeated value in any row or column.
        let mut stamp = vec![u32::MAX; n];
        let mut first = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                let v = self.mul(a, b);
                if stamp[v] == a as u32 {
                    return Err(violation(
                        Axiom::Inverse,
                        &[a, first[v] as usize, b],
                        format!("row {a} repeats value {v}"),
                    ));
                }
                stamp[v] = a as u32;
                first[v] = b as u32;
            }
        }
        stamp.fill(u32::MAX);
        for b in 0..n {
            for a in 0..n {
                let v = self.mul(a, b);
                if stamp[v] == b as u32 {
                    return Err(violation(
                        Axiom::Inverse,
                        &[first[v] as usize, a, b],
                        format!("column {b} repeats value {v}"),
                    ));
                }
                stamp[v] = b as u32;
                first[v] = a as u32;
            }
        }

        let mut checked = 0u64;
        let mut assoc = |a: usize, b: usize, c: usize| -> Result<()> {
            checked += 1;
            let left = self.mul(self.mul(a, b), c);
            let right = self.mul(a, self.mul(b, c));
            if left != right {
                return Err(violation(
                    Axiom::Associativity,
                    &[a, b, c],
                    format!("(ab)c = {left} but a(bc) = {right}"),
                ));
            }
            Ok(())
        };
        match mode {
            ValidationMode::Full => {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            assoc(a, b, c)?;
                        }
                    }
                }
            }
            ValidationMode::Sampled { triples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..triples {
                    let a = rng.gen_range(0..n);
                    let b = rng.gen_range(0..n);
                    let c = rng.gen_range(0..n);
                    assoc(a, b, c)?;
                }
            }
        }
        Ok(ValidationReport {
            mode,
            triples_checked: checked,
        })
    }

    pub fn validate_with(&self, policy: &ValidationPolicy) -> Result<ValidationReport> {
        self.validate(policy.mode_for(self.size))
    }

    /// Reads the plain-text Cayley format.
    ///
    /// ```text
    /// # comment
    /// order N
    /// identity i
    /// <N rows of N indices>
    /// labels t_0 ... t_{N-1}   (optional)
    /// ```
    pub fn parse_cayley(text: &str, name: &str, origin: &Path) -> Result<Self> {
        let fail = |line: usize, message: String| Error::CayleyFormat {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let mut header = |key: &str| -> Result<(usize, usize)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| fail(0, format!("missing `{key}` line")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(fail(no, format!("expected `{key} <integer>`")));
            }
            let value = parts
                .next()
                .and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| fail(no, format!("expected `{key} <integer>`")))?;
            if parts.next().is_some() {
                return Err(fail(no, format!("trailing tokens after `{key}`")));
            }
            Ok((no, value))
        };
        let (order_line, order) = header("order")?;
        if order == 0 {
            return Err(fail(order_line, "order must be positive".into()));
        }
        let (id_line, identity) = header("identity")?;
        if identity >= order {
            return Err(fail(
                id_line,
                format!("identity {identity} >= order {order}"),
            ));
        }

        let mut rows = Vec::with_capacity(order);
        let mut labels = None;
        for (no, line) in lines {
            if rows.len() == order {
                let mut parts = line.split_whitespace();
                if parts.next() != Some("labels") || labels.is_some() {
                    return Err(fail(no, "unexpected content after the table".into()));
                }
                let l: Vec<String> = parts.map(str::to_string).collect();
                if l.len() != order {
                    return Err(fail(no, format!("{} labels for order {order}", l.len())));
                }
                labels = Some(l);
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| fail(no, format!("bad table entry: {e}")))?;
            if row.len() != order {
                return Err(fail(
                    no,
                    format!("row has {} entries, expected {order}", row.len()),
                ));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= order) {
                return Err(fail(no, format!("entry {bad} out of range")));
            }
            rows.push(row);
        }
        if rows.len() != order {
            return Err(fail(
                0,
                format!("found {} rows, expected {order}", rows.len()),
            ));
        }
        GroupTable::from_rows(name, identity, rows, labels)
    }

    pub fn read_cayley(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        GroupTable::parse_cayley(&text, &name, path)
    }

    /// Renders the Cayley format, including a `labels` line whenever every
    /// label is a single token.
    pub fn to_cayley_string(&self) -> String {
        let n = self.size;
        let mut out = format!("# {}\norder {n}\nidentity {}\n", self.name, self.identity.0);
        for a in 0..n {
            let row: Vec<String> = (0..n).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        let labels: Vec<String> = self.elements().map(|a| self.label(a)).collect();
        if labels
            .iter()
            .all(|l| !l.is_empty() && !l.chars().any(char::is_whitespace))
        {
            out.push_str("labels ");
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        out
    }
}

fn violation(axiom: Axiom, witness: &[usize], detail: String) -> Error {
    Error::Axiom(AxiomViolation {
        axiom,
        witness: witness.iter().map(|&w| ElementIndex(w)).collect(),
        detail,
    })
}
