//! Parametric group families: cyclic, abelian p-groups from partitions,
//! direct products, the modular maximal-cyclic groups `M(n,p)`, dihedral,
//! generalized quaternion, semidihedral and Heisenberg groups.

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::group::{ElementIndex, GroupTable, LabelStyle, Law, Metacyclic, DEFAULT_ORDER_LIMIT};

fn to_order(v: u64, what: &str) -> Result<usize> {
    usize::try_from(v)
        .ok()
        .filter(|&n| n <= DEFAULT_ORDER_LIMIT)
        .ok_or_else(|| Error::Resource(format!("{what} of order {v} exceeds the order limit")))
}

fn checked_order(base: u64, exp: u32, what: &str) -> Result<usize> {
    let v = base
        .checked_pow(exp)
        .ok_or_else(|| Error::Resource(format!("{what}: {base}^{exp} overflows")))?;
    to_order(v, what)
}

/// Residues mod `m` under addition.
pub fn cyclic(m: u64) -> Result<GroupTable> {
    if m == 0 {
        return Err(Error::input("cyclic group order must be at least 1"));
    }
    let n = to_order(m, "cyclic group")?;
    Ok(GroupTable::from_law(
        format!("C{m}"),
        n,
        Law::Cyclic { modulus: n },
    ))
}

pub fn direct_product(g: &GroupTable, h: &GroupTable) -> Result<GroupTable> {
    direct_product_capped(g, h, DEFAULT_ORDER_LIMIT)
}

/// Componentwise product on pairs, pair `(a, b)` at index `a * |h| + b`.
pub fn direct_product_capped(g: &GroupTable, h: &GroupTable, limit: usize) -> Result<GroupTable> {
    let size = g
        .size()
        .checked_mul(h.size())
        .filter(|&s| s <= limit)
        .ok_or_else(|| {
            Error::Resource(format!(
                "{} x {} has order above the limit {limit}",
                g.name(),
                h.name()
            ))
        })?;
    let name = format!("{}x{}", g.name(), h.name());
    let mut out = GroupTable::from_law(
        name,
        size,
        Law::Product(Box::new(g.clone()), Box::new(h.clone())),
    );
    // identity of the product is (e_g, e_h)
    let e = g.identity().0 * h.size() + h.identity().0;
    if e != 0 {
        out = out.with_identity(ElementIndex(e));
    }
    Ok(out)
}

/// Direct product of `C_{p^λ_i}`; the empty partition gives the trivial group.
pub fn abelian_from_partition(p: u64, partition: &[u32]) -> Result<GroupTable> {
    if !is_prime(p as u128) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if partition.contains(&0) {
        return Err(Error::input("partition entries must be positive"));
    }
    if partition.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::input("partition must be non-increasing"));
    }
    let mut parts = partition.iter();
    let Some(&first) = parts.next() else {
        return cyclic(1);
    };
    let mut g = cyclic(checked_order(p, first, "abelian group")? as u64)?;
    for &l in parts {
        let c = cyclic(checked_order(p, l, "abelian group")? as u64)?;
        g = direct_product(&g, &c)?;
    }
    Ok(g)
}

/// `M(n,p) = <a, b | a^{p^{n-1}} = b^p = 1, b^-1 a b = a^{1+p^{n-2}}>`,
/// realized on pairs `a^i b^j`. The relations are checked after
/// construction.
pub fn modular_group(n: u32, p: u64) -> Result<GroupTable> {
    check_modular_params(n, p)?;
    let base = checked_order(p, n - 1, "modular group")?;
    let size = to_order(base as u64 * p, "modular group")?;
    let r = (1 + (p as usize).pow(n - 2)) % base;
    // y x y^-1 = x^t with t = r^{-1} = r^{p-1}, so that b^-1 a b = a^r.
    let mut t = 1usize;
    for _ in 0..p - 1 {
        t = ((t as u128 * r as u128) % base as u128) as usize;
    }
    let law = Law::Metacyclic(Metacyclic::new(base, p as usize, t, 0, LabelStyle::Modular));
    let g = GroupTable::from_law(format!("M({n},{p})"), size, law);

    let a = ElementIndex(1);
    let b = ElementIndex(base);
    let e = g.identity();
    let b_inv = g.power(b, p - 1)?;
    let conj = g.multiply(g.multiply(b_inv, a)?, b)?;
    let ok = g.power(a, base as u64)? == e
        && g.power(b, p)? == e
        && conj == g.power(a, r as u64)?
        && g.element_order(a)? == base as u64;
    if !ok {
        return Err(Error::invariant(format!(
            "M({n},{p}) model violates its defining relations"
        )));
    }
    Ok(g)
}

pub(crate) fn check_modular_params(n: u32, p: u64) -> Result<()> {
    if !is_prime(p as u128) {
        return Err(Error::input(format!("M({n},{p}): {p} is not prime")));
    }
    if n < 3 {
        return Err(Error::input(format!("M({n},{p}): requires n >= 3")));
    }
    if p == 2 && n < 4 {
        return Err(Error::input(format!("M({n},{p}): p = 2 requires n >= 4")));
    }
    Ok(())
}

/// Symmetries of a regular `order/2`-gon as `r^i s^j`.
pub fn dihedral(order: u64) -> Result<GroupTable> {
    if order < 4 || !order.is_multiple_of(2) {
        return Err(Error::input(format!(
            "D{order}: dihedral order must be even and at least 4"
        )));
    }
    let m = to_order(order / 2, "dihedral group")?;
    let law = Law::Metacyclic(Metacyclic::new(m, 2, m - 1, 0, LabelStyle::Dihedral));
    Ok(GroupTable::from_law(format!("D{order}"), 2 * m, law))
}

fn power_of_two_at_least(order: u64, min: u64) -> bool {
    order >= min && order.is_power_of_two()
}

/// `<x, y | x^{N} = 1, y^2 = x^{N/2}, y^-1 x y = x^-1>` with `N = order/2`.
pub fn generalized_quaternion(order: u64) -> Result<GroupTable> {
    if !power_of_two_at_least(order, 8) {
        return Err(Error::input(format!(
            "Q{order}: generalized quaternion order must be a power of 2, at least 8"
        )));
    }
    let m = to_order(order / 2, "quaternion group")?;
    let law = Law::Metacyclic(Metacyclic::new(m, 2, m - 1, m / 2, LabelStyle::Quaternion));
    Ok(GroupTable::from_law(format!("Q{order}"), 2 * m, law))
}

/// `<x, y | x^{N} = y^2 = 1, y^-1 x y = x^{N/2 - 1}>` with `N = order/2`.
pub fn semidihedral(order: u64) -> Result<GroupTable> {
    if !power_of_two_at_least(order, 16) {
        return Err(Error::input(format!(
            "SD{order}: semidihedral order must be a power of 2, at least 16"
        )));
    }
    let m = to_order(order / 2, "semidihedral group")?;
    let law = Law::Metacyclic(Metacyclic::new(
        m,
        2,
        m / 2 - 1,
        0,
        LabelStyle::Semidihedral,
    ));
    Ok(GroupTable::from_law(format!("SD{order}"), 2 * m, law))
}

/// Upper unitriangular 3x3 matrices over `Z_p`.
pub fn heisenberg(p: u64) -> Result<GroupTable> {
    if p == 2 || !is_prime(p as u128) {
        return Err(Error::input(format!("He{p}: requires an odd prime")));
    }
    let size = checked_order(p, 3, "Heisenberg group")?;
    Ok(GroupTable::from_law(
        format!("He{p}"),
        size,
        Law::Heisenberg { p: p as usize },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ValidationMode;
    use crate::spectrum::{order_spectrum, OrderSpectrum};

    fn spec(pairs: &[(u128, u128)]) -> OrderSpectrum {
        OrderSpectrum::from_counts(pairs.iter().copied()).unwrap()
    }

    /// Orders of pairs by the lcm rule, tallied over all pairs.
    fn lcm_tally(g: &GroupTable, h: &GroupTable) -> OrderSpectrum {
        let mut counts = std::collections::BTreeMap::new();
        for a in g.elements() {
            for b in h.elements() {
                let o = num_integer::lcm(
                    g.element_order(a).unwrap() as u128,
                    h.element_order(b).unwrap() as u128,
                );
                *counts.entry(o).or_insert(0u128) += 1;
            }
        }
        OrderSpectrum::from_counts(counts).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(cyclic(1).unwrap().size(), 1);
        let c6 = cyclic(6).unwrap();
        assert_eq!(c6.element_order(ElementIndex(5)).unwrap(), 6);
        assert_eq!(
            order_spectrum(&cyclic(9).unwrap()).unwrap(),
            spec(&[(1, 1), (3, 2), (9, 6)])
        );
        assert!(matches!(cyclic(0), Err(Error::Input(_))));
    }

    #[test]
    fn direct_product_examples() {
        let c1 = cyclic(1).unwrap();
        let q8 = generalized_quaternion(8).unwrap();
        let p = direct_product(&c1, &q8).unwrap();
        assert_eq!(order_spectrum(&p).unwrap(), order_spectrum(&q8).unwrap());

        let c9 = cyclic(9).unwrap();
        let c3 = cyclic(3).unwrap();
        let g = direct_product(&c9, &c3).unwrap();
        assert_eq!(order_spectrum(&g).unwrap(), lcm_tally(&c9, &c3));
        assert_eq!(
            order_spectrum(&g).unwrap(),
            spec(&[(1, 1), (3, 8), (9, 18)])
        );

        let c2 = cyclic(2).unwrap();
        let v4 = direct_product(&c2, &c2).unwrap();
        assert_eq!(order_spectrum(&v4).unwrap(), spec(&[(1, 1), (2, 3)]));
    }

    #[test]
    fn direct_product_respects_limit() {
        let c = cyclic(100).unwrap();
        assert!(matches!(
            direct_product_capped(&c, &c, 5000),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn modular_examples() {
        let m = modular_group(3, 3).unwrap();
        assert_eq!(m.size(), 27);
        assert_eq!(
            order_spectrum(&m).unwrap(),
            spec(&[(1, 1), (3, 8), (9, 18)])
        );

        let m43 = modular_group(4, 3).unwrap();
        let a = ElementIndex(1);
        let b = ElementIndex(27);
        let b_inv = m43.power(b, 2).unwrap();
        let lhs = m43.multiply(m43.multiply(b_inv, a).unwrap(), b).unwrap();
        assert_eq!(lhs, m43.power(a, 1 + 9).unwrap());
        // non-abelian
        assert_ne!(m43.multiply(a, b).unwrap(), m43.multiply(b, a).unwrap());
    }

    #[test]
    fn modular_two_group_has_the_spectrum_of_c8_x_c2() {
        // Computed, not assumed: M(4,2) has exactly three involutions and the
        // same order multiset as C8 x C2.
        let m = modular_group(4, 2).unwrap();
        let ab = abelian_from_partition(2, &[3, 1]).unwrap();
        let sm = order_spectrum(&m).unwrap();
        assert_eq!(sm, spec(&[(1, 1), (2, 3), (4, 4), (8, 8)]));
        assert_eq!(sm, order_spectrum(&ab).unwrap());
        assert_eq!(sm.phi_sum(), order_spectrum(&ab).unwrap().phi_sum());
    }

    #[test]
    fn modular_parameter_errors() {
        assert!(modular_group(3, 2).is_err());
        assert!(modular_group(2, 3).is_err());
        assert!(modular_group(3, 9).is_err());
        assert!(modular_group(4, 2).is_ok());
    }

    #[test]
    fn modular_spectrum_matches_abelian_twin_for_odd_p() {
        for (n, p) in [(3, 3), (4, 3), (5, 3), (3, 5), (4, 5), (3, 7), (3, 11)] {
            let m = modular_group(n, p).unwrap();
            let ab = abelian_from_partition(p, &[n - 1, 1]).unwrap();
            assert_eq!(
                order_spectrum(&m).unwrap(),
                order_spectrum(&ab).unwrap(),
                "M({n},{p})"
            );
        }
    }

    #[test]
    fn abelian_examples() {
        let g = abelian_from_partition(3, &[1, 1, 1]).unwrap();
        assert_eq!(order_spectrum(&g).unwrap(), spec(&[(1, 1), (3, 26)]));
        let c8 = abelian_from_partition(2, &[3]).unwrap();
        assert_eq!(
            order_spectrum(&c8).unwrap(),
            order_spectrum(&cyclic(8).unwrap()).unwrap()
        );
        let g = abelian_from_partition(3, &[2, 1]).unwrap();
        assert_eq!(g.name(), "C9xC3");
        assert_eq!(abelian_from_partition(5, &[]).unwrap().size(), 1);
        assert!(abelian_from_partition(3, &[1, 2]).is_err());
        assert!(abelian_from_partition(4, &[1]).is_err());
        for (p, part) in [(2u64, vec![2u32, 2, 1]), (3, vec![3, 1]), (5, vec![1, 1])] {
            let g = abelian_from_partition(p, &part).unwrap();
            let sum: u32 = part.iter().sum();
            assert_eq!(g.size() as u64, p.pow(sum));
        }
    }

    #[test]
    fn small_family_spectra() {
        assert_eq!(
            order_spectrum(&generalized_quaternion(8).unwrap()).unwrap(),
            spec(&[(1, 1), (2, 1), (4, 6)])
        );
        assert_eq!(
            order_spectrum(&dihedral(8).unwrap()).unwrap(),
            spec(&[(1, 1), (2, 5), (4, 2)])
        );
        assert_eq!(
            order_spectrum(&heisenberg(3).unwrap()).unwrap(),
            spec(&[(1, 1), (3, 26)])
        );
        // SD16: 5 involutions, 6 elements of order 4, 4 of order 8
        assert_eq!(
            order_spectrum(&semidihedral(16).unwrap()).unwrap(),
            spec(&[(1, 1), (2, 5), (4, 6), (8, 4)])
        );
        assert_eq!(
            order_spectrum(&generalized_quaternion(16).unwrap()).unwrap(),
            spec(&[(1, 1), (2, 1), (4, 10), (8, 4)])
        );
    }

    #[test]
    fn family_parameter_errors() {
        assert!(dihedral(6).is_ok());
        assert!(dihedral(7).is_err());
        assert!(dihedral(2).is_err());
        assert!(generalized_quaternion(12).is_err());
        assert!(generalized_quaternion(4).is_err());
        assert!(semidihedral(8).is_err());
        assert!(heisenberg(2).is_err());
        assert!(heisenberg(9).is_err());
    }

    #[test]
    fn all_families_are_groups() {
        let groups = vec![
            dihedral(8).unwrap(),
            dihedral(18).unwrap(),
            generalized_quaternion(8).unwrap(),
            generalized_quaternion(32).unwrap(),
            semidihedral(16).unwrap(),
            semidihedral(32).unwrap(),
            heisenberg(3).unwrap(),
            heisenberg(5).unwrap(),
            modular_group(3, 3).unwrap(),
            modular_group(4, 2).unwrap(),
            modular_group(5, 2).unwrap(),
            abelian_from_partition(2, &[2, 1, 1]).unwrap(),
            direct_product(&dihedral(6).unwrap(), &cyclic(4).unwrap()).unwrap(),
        ];
        for g in groups {
            g.validate(ValidationMode::Full)
                .unwrap_or_else(|e| panic!("{}: {e}", g.name()));
        }
    }

    #[test]
    fn product_identity_is_pair_of_identities() {
        let g = direct_product(&cyclic(3).unwrap(), &dihedral(6).unwrap()).unwrap();
        assert_eq!(g.identity(), ElementIndex(0));
        assert_eq!(g.element_order(g.identity()).unwrap(), 1);
    }
}
