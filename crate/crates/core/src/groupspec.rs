//! The group-spec mini-language.
//!
//! ```text
//! spec   := factor ('x' factor)*          left-associative direct product
//! factor := C<m> | M(<n>,<p>) | D<order> | Q<order> | SD<order> | He<p>
//!         | Ab(<p>;<l1>,<l2>,...) | file:<path> | file:"<path>"
//! ```
//!
//! Whitespace between tokens is ignored. An unquoted `file:` path runs to
//! the end of the input; the quoted form may be followed by more factors.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::arith::{checked_pow, is_prime};
use crate::constructors::{
    abelian_from_partition, check_modular_params, cyclic, dihedral, direct_product,
    generalized_quaternion, heisenberg, modular_group, semidihedral,
};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::spectrum::{order_spectrum, spectrum_cyclic, OrderSpectrum};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u64),
    Abelian { p: u64, partition: Vec<u32> },
    Modular { n: u32, p: u64 },
    Dihedral(u64),
    GeneralizedQuaternion(u64),
    Semidihedral(u64),
    Heisenberg(u64),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    File(PathBuf),
}

impl GroupSpec {
    pub fn product(left: GroupSpec, right: GroupSpec) -> GroupSpec {
        GroupSpec::Product(Box::new(left), Box::new(right))
    }

    /// Left-nested product of `factors`; `None` when empty.
    pub fn product_of(factors: impl IntoIterator<Item = GroupSpec>) -> Option<GroupSpec> {
        factors.into_iter().reduce(GroupSpec::product)
    }

    pub fn parse(text: &str) -> Result<GroupSpec> {
        let spec = Parser::new(text).parse()?;
        spec.check()?;
        Ok(spec)
    }

    /// Semantic constraints the grammar alone does not express.
    pub fn check(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::input(format!("{self}: {reason}")));
        match self {
            GroupSpec::Cyclic(0) => bad("cyclic order must be at least 1".into()),
            GroupSpec::Cyclic(_) | GroupSpec::File(_) => Ok(()),
            GroupSpec::Abelian { p, partition } => {
                if !is_prime(*p as u128) {
                    return bad(format!("{p} is not prime"));
                }
                if partition.contains(&0) {
                    return bad("partition entries must be positive".into());
                }
                if partition.windows(2).any(|w| w[0] < w[1]) {
                    return bad("partition must be non-increasing".into());
                }
                Ok(())
            }
            GroupSpec::Modular { n, p } => check_modular_params(*n, *p),
            GroupSpec::Dihedral(o) => {
                if *o < 4 || o % 2 != 0 {
                    return bad("dihedral order must be even and at least 4".into());
                }
                Ok(())
            }
            GroupSpec::GeneralizedQuaternion(o) => {
                if *o < 8 || !o.is_power_of_two() {
                    return bad("quaternion order must be a power of 2, at least 8".into());
                }
                Ok(())
            }
            GroupSpec::Semidihedral(o) => {
                if *o < 16 || !o.is_power_of_two() {
                    return bad("semidihedral order must be a power of 2, at least 16".into());
                }
                Ok(())
            }
            GroupSpec::Heisenberg(p) => {
                if *p == 2 || !is_prime(*p as u128) {
                    return bad("Heisenberg group needs an odd prime".into());
                }
                Ok(())
            }
            GroupSpec::Product(l, r) => {
                l.check()?;
                r.check()
            }
        }
    }

    /// Product factors in left-to-right order.
    pub fn factors(&self) -> Vec<&GroupSpec> {
        match self {
            GroupSpec::Product(l, r) => {
                let mut v = l.factors();
                v.extend(r.factors());
                v
            }
            other => vec![other],
        }
    }

    /// True when the spec uses `M(n,2)`, which extends the odd-prime family.
    pub fn uses_even_modular(&self) -> bool {
        self.factors()
            .iter()
            .any(|f| matches!(f, GroupSpec::Modular { p: 2, .. }))
    }

    /// Group order, computed arithmetically (reads the table for `file:`).
    pub fn order(&self) -> Result<u128> {
        Ok(match self {
            GroupSpec::Cyclic(m)
            | GroupSpec::Dihedral(m)
            | GroupSpec::GeneralizedQuaternion(m)
            | GroupSpec::Semidihedral(m) => *m as u128,
            GroupSpec::Abelian { p, partition } => checked_pow(*p as u128, partition.iter().sum())?,
            GroupSpec::Modular { n, p } => checked_pow(*p as u128, *n)?,
            GroupSpec::Heisenberg(p) => checked_pow(*p as u128, 3)?,
            GroupSpec::Product(l, r) => l
                .order()?
                .checked_mul(r.order()?)
                .ok_or(Error::Overflow("group order"))?,
            GroupSpec::File(path) => GroupTable::read_cayley(path)?.size() as u128,
        })
    }

    pub fn build(&self) -> Result<GroupTable> {
        self.check()?;
        let g = match self {
            GroupSpec::Cyclic(m) => cyclic(*m)?,
            GroupSpec::Abelian { p, partition } => abelian_from_partition(*p, partition)?,
            GroupSpec::Modular { n, p } => modular_group(*n, *p)?,
            GroupSpec::Dihedral(o) => dihedral(*o)?,
            GroupSpec::GeneralizedQuaternion(o) => generalized_quaternion(*o)?,
            GroupSpec::Semidihedral(o) => semidihedral(*o)?,
            GroupSpec::Heisenberg(p) => heisenberg(*p)?,
            GroupSpec::Product(l, r) => direct_product(&l.build()?, &r.build()?)?,
            GroupSpec::File(path) => GroupTable::read_cayley(path)?,
        };
        Ok(g.with_name(self.to_string()))
    }

    /// Order spectrum, from closed forms where the structure allows it and
    /// by tallying element orders otherwise.
    pub fn spectrum(&self) -> Result<OrderSpectrum> {
        match self {
            GroupSpec::Cyclic(m) => spectrum_cyclic(*m as u128),
            GroupSpec::Abelian { p, partition } => {
                let mut s = OrderSpectrum::trivial();
                for &l in partition {
                    s = s.product(&spectrum_cyclic(checked_pow(*p as u128, l)?)?)?;
                }
                Ok(s)
            }
            GroupSpec::Product(l, r) => l.spectrum()?.product(&r.spectrum()?),
            other => order_spectrum(&other.build()?),
        }
    }
}

impl fmt::Display for GroupSpec {
    /// Canonical rendering; parses back to the same tree for left-nested
    /// products.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(m) => write!(f, "C{m}"),
            GroupSpec::Abelian { p, partition } => {
                let parts: Vec<String> = partition.iter().map(u32::to_string).collect();
                write!(f, "Ab({p};{})", parts.join(","))
            }
            GroupSpec::Modular { n, p } => write!(f, "M({n},{p})"),
            GroupSpec::Dihedral(o) => write!(f, "D{o}"),
            GroupSpec::GeneralizedQuaternion(o) => write!(f, "Q{o}"),
            GroupSpec::Semidihedral(o) => write!(f, "SD{o}"),
            GroupSpec::Heisenberg(p) => write!(f, "He{p}"),
            GroupSpec::Product(l, r) => write!(f, "{l}x{r}"),
            GroupSpec::File(path) => write!(f, "file:\"{}\"", path.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::parse(s)
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().enumerate().map(|(i, c)| (i + 1, c)).collect(),
            pos: 0,
            text,
        }
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(c, _)| c)
            .unwrap_or(self.chars.len() + 1)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self
            .chars
            .get(self.pos)
            .is_some_and(|(_, c)| c.is_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        let n = lit.chars().count();
        let matches = self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n]
                .iter()
                .map(|&(_, c)| c)
                .eq(lit.chars());
        if matches {
            self.pos += n;
        }
        matches
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.error(format!("expected `{lit}`"))
        }
    }

    fn integer<T: FromStr>(&mut self) -> Result<T> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|(_, c)| c.is_ascii_digit())
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an integer");
        }
        let digits: String = self.chars[start..self.pos]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        digits.parse().or_else(|_| {
            self.pos = start;
            self.error(format!("integer `{digits}` out of range"))
        })
    }

    fn parse(mut self) -> Result<GroupSpec> {
        let mut spec = self.factor()?;
        loop {
            match self.peek() {
                None => return Ok(spec),
                Some('x') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    spec = GroupSpec::product(spec, rhs);
                }
                Some(c) => return self.error(format!("unexpected `{c}`, expected `x` or end")),
            }
        }
    }

    fn factor(&mut self) -> Result<GroupSpec> {
        if self.eat("file:") {
            return self.file_path();
        }
        if self.eat("SD") {
            return Ok(GroupSpec::Semidihedral(self.integer()?));
        }
        if self.eat("He") {
            return Ok(GroupSpec::Heisenberg(self.integer()?));
        }
        if self.eat("Ab") {
            self.expect("(")?;
            let p = self.integer()?;
            self.expect(";")?;
            let mut partition = vec![self.integer()?];
            while self.eat(",") {
                partition.push(self.integer()?);
            }
            self.expect(")")?;
            return Ok(GroupSpec::Abelian { p, partition });
        }
        if self.eat("M") {
            self.expect("(")?;
            let n = self.integer()?;
            self.expect(",")?;
            let p = self.integer()?;
            self.expect(")")?;
            return Ok(GroupSpec::Modular { n, p });
        }
        if self.eat("C") {
            return Ok(GroupSpec::Cyclic(self.integer()?));
        }
        if self.eat("D") {
            return Ok(GroupSpec::Dihedral(self.integer()?));
        }
        if self.eat("Q") {
            return Ok(GroupSpec::GeneralizedQuaternion(self.integer()?));
        }
        match self.peek() {
            Some(c) => self.error(format!("unknown group family starting with `{c}`")),
            None => self.error("expected a group"),
        }
    }

    fn file_path(&mut self) -> Result<GroupSpec> {
        if self.eat("\"") {
            let start = self.pos;
            while self.chars.get(self.pos).is_some_and(|&(_, c)| c != '"') {
                self.pos += 1;
            }
            if self.pos >= self.chars.len() {
                return self.error("unterminated quoted path");
            }
            let path: String = self.chars[start..self.pos]
                .iter()
                .map(|&(_, c)| c)
                .collect();
            self.pos += 1;
            if path.is_empty() {
                return self.error("empty path");
            }
            return Ok(GroupSpec::File(PathBuf::from(path)));
        }
        self.skip_ws();
        let byte_start = self.text.char_indices().nth(self.pos).map(|(b, _)| b);
        let Some(byte_start) = byte_start else {
            return self.error("expected a path");
        };
        let path = self.text[byte_start..].trim_end();
        self.pos = self.chars.len();
        Ok(GroupSpec::File(PathBuf::from(path)))
    }
}
