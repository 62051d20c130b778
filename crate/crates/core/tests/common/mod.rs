//! Shared fixtures for the integration test targets.
#![allow(dead_code)]

use pgx::constructors::{
    abelian_from_partition, cyclic, dihedral, direct_product, generalized_quaternion,
    modular_group, semidihedral,
};
use pgx::GroupTable;

/// Table of a group on `0..size` given by its multiplication.
pub fn table_from_fn(name: &str, size: usize, mul: impl Fn(usize, usize) -> usize) -> GroupTable {
    let rows = (0..size)
        .map(|a| (0..size).map(|b| mul(a, b)).collect())
        .collect();
    GroupTable::from_rows(name, 0, rows, None).expect("well-formed rows")
}

/// `(C4 x C2) : C2` where the outer generator sends `a -> ab`, `b -> b`.
/// Index `(i, j, k)` is `a^i b^j c^k` stored as `(k * 2 + j) * 4 + i`.
fn c4xc2_by_c2() -> GroupTable {
    let split = |x: usize| (x % 4, (x / 4) % 2, x / 8);
    table_from_fn("C4xC2_C2", 16, |x, y| {
        let (i1, j1, k1) = split(x);
        let (i2, j2, k2) = split(y);
        // the automorphism applied k1 times to (i2, j2)
        let j2 = if k1 == 1 { (j2 + i2) % 2 } else { j2 };
        let i = (i1 + i2) % 4;
        let j = (j1 + j2) % 2;
        let k = (k1 + k2) % 2;
        (k * 2 + j) * 4 + i
    })
}

/// `C4 : C4` with the outer generator inverting the normal one.
fn c4_by_c4() -> GroupTable {
    table_from_fn("C4_C4", 16, |x, y| {
        let (i1, j1) = (x % 4, x / 4);
        let (i2, j2) = (y % 4, y / 4);
        let i2 = if j1 % 2 == 1 { (4 - i2) % 4 } else { i2 };
        ((j1 + j2) % 4) * 4 + (i1 + i2) % 4
    })
}

/// The Pauli group `<X, Y, Z>`: elements `i^k X^a Z^b`, using `ZX = -XZ`.
fn pauli() -> GroupTable {
    let split = |x: usize| (x % 4, (x / 4) % 2, x / 8);
    table_from_fn("Pauli", 16, |x, y| {
        let (k1, a1, b1) = split(x);
        let (k2, a2, b2) = split(y);
        let k = (k1 + k2 + 2 * b1 * a2) % 4;
        ((b1 + b2) % 2 * 2 + (a1 + a2) % 2) * 4 + k
    })
}

/// One representative of each of the 14 isomorphism classes of order 16.
pub fn order_16_groups() -> Vec<GroupTable> {
    let ab = |part: &[u32], name: &str| abelian_from_partition(2, part).unwrap().with_name(name);
    vec![
        cyclic(16).unwrap().with_name("C16"),
        ab(&[2, 2], "C4xC4"),
        c4xc2_by_c2(),
        c4_by_c4(),
        ab(&[3, 1], "C8xC2"),
        modular_group(4, 2).unwrap().with_name("M16"),
        dihedral(16).unwrap().with_name("D16"),
        semidihedral(16).unwrap().with_name("SD16"),
        generalized_quaternion(16).unwrap().with_name("Q16"),
        ab(&[2, 1, 1], "C4xC2xC2"),
        direct_product(&dihedral(8).unwrap(), &cyclic(2).unwrap())
            .unwrap()
            .with_name("D8xC2"),
        direct_product(&generalized_quaternion(8).unwrap(), &cyclic(2).unwrap())
            .unwrap()
            .with_name("Q8xC2"),
        pauli(),
        ab(&[1, 1, 1, 1], "C2xC2xC2xC2"),
    ]
}

/// Writes every group as `<dir>/<name>.cayley`.
pub fn write_cayley_dir(dir: &std::path::Path, groups: &[GroupTable]) {
    for g in groups {
        std::fs::write(
            dir.join(format!("{}.cayley", g.name())),
            g.to_cayley_string(),
        )
        .unwrap();
    }
}

/// Number of ordered commuting pairs, a cheap isomorphism invariant.
pub fn commuting_pairs(g: &GroupTable) -> usize {
    let els: Vec<_> = g.elements().collect();
    let mut n = 0;
    for &a in &els {
        for &b in &els {
            if g.multiply(a, b).unwrap() == g.multiply(b, a).unwrap() {
                n += 1;
            }
        }
    }
    n
}

/// Number of distinct squares `x^2`.
pub fn square_count(g: &GroupTable) -> usize {
    let squares: std::collections::BTreeSet<_> =
        g.elements().map(|x| g.multiply(x, x).unwrap()).collect();
    squares.len()
}
