//! Order spectra and the exact statistics derived from them.
//!
//! Every count here is a function of the multiset of element orders alone:
//!
//! * `sigma = sum o(g)` and `phi_sum = sum phi(o(g))`
//! * directed arcs `= sigma - |G|` (the out-degree of `g` is `o(g) - 1`)
//! * mutual edges `= (phi_sum - |G|) / 2` (`g` shares its cyclic subgroup
//!   with exactly `phi(o(g)) - 1` other generators)
//! * undirected edges `= sigma - (phi_sum + |G|) / 2`
//!
//! Sums are arbitrary precision; spectrum entries are `u128` with checked
//! arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{checked_lcm, checked_pow, divisors, is_prime, totient};
use crate::error::{Error, Result};
use crate::group::GroupTable;

/// Multiset of element orders, stored as `order -> count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderSpectrum {
    counts: BTreeMap<u128, u128>,
    total: u128,
}

fn phi(d: u128) -> u128 {
    totient(d).expect("spectrum orders are positive")
}

impl OrderSpectrum {
    /// Builds a spectrum and checks its invariants: one identity, every
    /// order divides the total, and `phi(d)` divides the count of order `d`.
    pub fn from_counts(counts: impl IntoIterator<Item = (u128, u128)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut total = 0u128;
        for (d, c) in counts {
            if d == 0 {
                return Err(Error::invariant("element order 0 in spectrum"));
            }
            if c == 0 {
                continue;
            }
            let slot = map.entry(d).or_insert(0u128);
            *slot = slot
                .checked_add(c)
                .ok_or(Error::Overflow("spectrum count"))?;
            total = total
                .checked_add(c)
                .ok_or(Error::Overflow("spectrum total"))?;
        }
        let s = OrderSpectrum { counts: map, total };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<()> {
        if self.count(1) != 1 {
            return Err(Error::invariant(format!(
                "spectrum has {} elements of order 1",
                self.count(1)
            )));
        }
        for (&d, &c) in &self.counts {
            if !self.total.is_multiple_of(d) {
                return Err(Error::invariant(format!(
                    "order {d} does not divide group order {}",
                    self.total
                )));
            }
            if c % phi(d) != 0 {
                return Err(Error::invariant(format!(
                    "{c} elements of order {d} is not a multiple of phi({d})"
                )));
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        OrderSpectrum {
            counts: BTreeMap::from([(1, 1)]),
            total: 1,
        }
    }

    /// Group order.
    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn count(&self, order: u128) -> u128 {
        self.counts.get(&order).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u128, u128)> + '_ {
        self.counts.iter().map(|(&d, &c)| (d, c))
    }

    /// Largest element order.
    pub fn exponent(&self) -> u128 {
        self.counts.keys().next_back().copied().unwrap_or(1)
    }

    pub fn is_cyclic(&self) -> bool {
        self.count(self.total) > 0
    }

    /// `sum_g phi(o(g))`.
    pub fn phi_sum(&self) -> BigUint {
        self.iter()
            .map(|(d, c)| BigUint::from(c) * BigUint::from(phi(d)))
            .sum()
    }

    /// `sum_g o(g)`.
    pub fn order_sum(&self) -> BigUint {
        self.iter()
            .map(|(d, c)| BigUint::from(c) * BigUint::from(d))
            .sum()
    }

    pub fn directed_arcs(&self) -> BigUint {
        self.order_sum() - BigUint::from(self.total)
    }

    pub fn mutual_edges(&self) -> Result<BigUint> {
        let phi_sum = self.phi_sum();
        let n = BigUint::from(self.total);
        if phi_sum < n {
            return Err(Error::invariant("phi-sum below group order"));
        }
        half_exact(phi_sum - n, "mutual edge count")
    }

    pub fn undirected_edges(&self) -> Result<BigUint> {
        let half = half_exact(
            self.phi_sum() + BigUint::from(self.total),
            "undirected edge count",
        )?;
        let sigma = self.order_sum();
        if sigma < half {
            return Err(Error::invariant("undirected edge count is negative"));
        }
        Ok(sigma - half)
    }

    /// Spectrum of the direct product: the order of a pair is the lcm of
    /// the component orders.
    pub fn product(&self, other: &OrderSpectrum) -> Result<OrderSpectrum> {
        let mut out: BTreeMap<u128, u128> = BTreeMap::new();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                let o = checked_lcm(a, b)?;
                let c = ca
                    .checked_mul(cb)
                    .ok_or(Error::Overflow("spectrum product"))?;
                let slot = out.entry(o).or_insert(0);
                *slot = slot
                    .checked_add(c)
                    .ok_or(Error::Overflow("spectrum product"))?;
            }
        }
        let total = self
            .total
            .checked_mul(other.total)
            .ok_or(Error::Overflow("spectrum product"))?;
        Ok(OrderSpectrum { counts: out, total })
    }
}

impl Serialize for OrderSpectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        #[derive(Serialize)]
        struct Entry {
            order: u128,
            count: u128,
        }
        let mut seq = s.serialize_seq(Some(self.counts.len()))?;
        for (order, count) in self.iter() {
            seq.serialize_element(&Entry { order, count })?;
        }
        seq.end()
    }
}

fn half_exact(v: BigUint, what: &str) -> Result<BigUint> {
    let two = BigUint::from(2u8);
    if !(&v % &two).is_zero() {
        return Err(Error::invariant(format!(
            "{what} is not an integer ({v}/2)"
        )));
    }
    Ok(v / two)
}

/// Tally of element orders over all elements of `g`.
pub fn order_spectrum(g: &GroupTable) -> Result<OrderSpectrum> {
    let dec = g.cyclic_decomposition()?;
    let mut counts = BTreeMap::new();
    for &o in &dec.order_of {
        *counts.entry(o as u128).or_insert(0u128) += 1;
    }
    OrderSpectrum::from_counts(counts)
}

/// `phi(d)` elements of order `d` for each divisor `d` of `m`.
pub fn spectrum_cyclic(m: u128) -> Result<OrderSpectrum> {
    if m == 0 {
        return Err(Error::input("cyclic group order must be at least 1"));
    }
    let counts: Result<Vec<_>> = divisors(m)?
        .into_iter()
        .map(|d| Ok((d, totient(d)?)))
        .collect();
    OrderSpectrum::from_counts(counts?)
}

pub fn spectrum_product(s: &OrderSpectrum, t: &OrderSpectrum) -> Result<OrderSpectrum> {
    s.product(t)
}

/// `phi(C_{p^m}) = (p^{2m} (p - 1) + 2) / (p + 1)`, division checked exact.
pub fn phi_cyclic_prime_power(p: u64, m: u32) -> Result<BigUint> {
    if !is_prime(p as u128) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    let p = BigUint::from(p);
    let numerator = p.pow(2 * m) * (&p - BigUint::one()) + BigUint::from(2u8);
    let denominator = &p + BigUint::one();
    if !(&numerator % &denominator).is_zero() {
        return Err(Error::invariant(format!(
            "closed form for phi(C_{{{p}^{m}}}) is not integral"
        )));
    }
    Ok(numerator / denominator)
}

/// `p^m` as a cyclic spectrum, with the exponent checked for overflow.
pub fn spectrum_cyclic_prime_power(p: u64, m: u32) -> Result<OrderSpectrum> {
    spectrum_cyclic(checked_pow(p as u128, m)?)
}

/// Exact power-graph statistics of one group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupStats {
    pub name: String,
    #[serde(serialize_with = "crate::report::big_number")]
    pub size: BigUint,
    #[serde(serialize_with = "crate::report::big_number")]
    pub sigma: BigUint,
    #[serde(serialize_with = "crate::report::big_number")]
    pub phi_sum: BigUint,
    #[serde(serialize_with = "crate::report::big_number")]
    pub directed_arcs: BigUint,
    #[serde(serialize_with = "crate::report::big_number")]
    pub mutual_edges: BigUint,
    #[serde(serialize_with = "crate::report::big_number")]
    pub undirected_edges: BigUint,
}

impl GroupStats {
    pub const CSV_HEADER: [&'static str; 7] = [
        "name",
        "size",
        "sigma",
        "phi_sum",
        "directed_arcs",
        "mutual_edges",
        "undirected_edges",
    ];

    pub fn from_spectrum(name: impl Into<String>, s: &OrderSpectrum) -> Result<Self> {
        let stats = GroupStats {
            name: name.into(),
            size: BigUint::from(s.total()),
            sigma: s.order_sum(),
            phi_sum: s.phi_sum(),
            directed_arcs: s.directed_arcs(),
            mutual_edges: s.mutual_edges()?,
            undirected_edges: s.undirected_edges()?,
        };
        stats.check()?;
        Ok(stats)
    }

    /// The four counting identities, each checked by exact arithmetic.
    pub fn check(&self) -> Result<()> {
        let fail = |which: &str| {
            Err(Error::invariant(format!(
                "{}: identity `{which}` fails",
                self.name
            )))
        };
        if &self.directed_arcs + &self.size != self.sigma {
            return fail("directed_arcs = sigma - size");
        }
        if BigUint::from(2u8) * &self.mutual_edges + &self.size != self.phi_sum {
            return fail("mutual_edges = (phi_sum - size) / 2");
        }
        if BigUint::from(2u8) * (&self.undirected_edges) + &self.phi_sum + &self.size
            != BigUint::from(2u8) * &self.sigma
        {
            return fail("undirected_edges = sigma - (phi_sum + size) / 2");
        }
        if &self.undirected_edges + &self.mutual_edges != self.directed_arcs {
            return fail("undirected_edges = directed_arcs - mutual_edges");
        }
        Ok(())
    }

    pub fn csv_record(&self) -> [String; 7] {
        [
            self.name.clone(),
            self.size.to_string(),
            self.sigma.to_string(),
            self.phi_sum.to_string(),
            self.directed_arcs.to_string(),
            self.mutual_edges.to_string(),
            self.undirected_edges.to_string(),
        ]
    }
}

pub fn group_stats(g: &GroupTable) -> Result<GroupStats> {
    GroupStats::from_spectrum(g.name(), &order_spectrum(g)?)
}
