//! Nilpotent-group enumeration and the verification harnesses.
//!
//! A nilpotent group is the direct product of its Sylow subgroups, so the
//! groups of order `n` are enumerated as the cartesian product of the
//! prime-power catalogs and their spectra composed with
//! [`spectrum_product`]. Nothing is materialized unless a harness asks
//! for an explicit cross-check.

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use crate::arith::{factorize, Factorization};
use crate::arith::{gcd, is_prime, primes_up_to};
use crate::catalog::{abelian_name, catalog, CatalogEntry, CensusDir, Completeness};
use crate::constructors::direct_product_capped;
use crate::error::{Error, Result};
use crate::groupspec::GroupSpec;
use crate::report::{Table, Verdict, VerificationReport, Witness};
use crate::spectrum::{
    order_spectrum, phi_cyclic_prime_power, spectrum_cyclic, spectrum_cyclic_prime_power,
    spectrum_product, GroupStats, OrderSpectrum,
};

/// One group of a census: display name, a spec that rebuilds it, and its
/// order spectrum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentGroup {
    pub name: String,
    pub spec: GroupSpec,
    pub spectrum: OrderSpectrum,
}

impl NilpotentGroup {
    pub fn is_cyclic(&self) -> bool {
        self.spectrum.is_cyclic()
    }

    pub fn stats(&self) -> Result<GroupStats> {
        GroupStats::from_spectrum(self.name.clone(), &self.spectrum)
    }

    fn witness(&self) -> Result<Witness> {
        Ok(Witness::group(&self.name, &self.spec, self.stats()?))
    }
}

impl From<CatalogEntry> for NilpotentGroup {
    fn from(e: CatalogEntry) -> Self {
        NilpotentGroup {
            name: e.name,
            spec: e.spec,
            spectrum: e.spectrum,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NilpotentCensus {
    pub n: u128,
    pub factorization: Factorization,
    pub groups: Vec<NilpotentGroup>,
    pub completeness: Completeness,
}

impl NilpotentCensus {
    pub fn non_cyclic(&self) -> Vec<&NilpotentGroup> {
        self.groups.iter().filter(|g| !g.is_cyclic()).collect()
    }
}

fn prime_u64(p: u128) -> Result<u64> {
    u64::try_from(p).map_err(|_| Error::Overflow("prime factor"))
}

/// Name of a product of Sylow subgroups: non-abelian factors first, then
/// the abelian part in invariant-factor form (`C45xC3`).
fn product_name(parts: &[(u64, &CatalogEntry)]) -> String {
    let mut names: Vec<String> = Vec::new();
    let mut invariant: Vec<u128> = Vec::new();
    for (p, e) in parts {
        match &e.partition {
            None => names.push(e.name.clone()),
            Some(part) => {
                for (i, &l) in part.iter().enumerate() {
                    let q = (*p as u128).pow(l);
                    match invariant.get_mut(i) {
                        Some(f) => *f *= q,
                        None => invariant.push(q),
                    }
                }
            }
        }
    }
    names.extend(invariant.iter().map(|f| format!("C{f}")));
    if names.is_empty() {
        "C1".into()
    } else {
        names.join("x")
    }
}

/// All nilpotent groups of order `n` known to the catalogs.
pub fn enumerate_nilpotent(n: u128, census: Option<&CensusDir>) -> Result<NilpotentCensus> {
    if n < 2 {
        return Err(Error::input("n must be at least 2"));
    }
    let factorization = factorize(n)?;
    let mut completeness = Completeness::Complete;
    let mut catalogs = Vec::new();
    for &(p, a) in &factorization.factors {
        let p = prime_u64(p)?;
        let cat = catalog(p, a, census)?;
        completeness = completeness.and(cat.completeness);
        catalogs.push((p, cat.entries));
    }

    let mut groups = Vec::new();
    let mut pick = vec![0usize; catalogs.len()];
    loop {
        let parts: Vec<(u64, &CatalogEntry)> = catalogs
            .iter()
            .zip(&pick)
            .map(|((p, entries), &i)| (*p, &entries[i]))
            .collect();
        let mut spectrum = OrderSpectrum::trivial();
        for (_, e) in &parts {
            spectrum = spectrum_product(&spectrum, &e.spectrum)?;
        }
        let spec = GroupSpec::product_of(parts.iter().map(|(_, e)| e.spec.clone()))
            .expect("n >= 2 has a prime factor");
        groups.push(NilpotentGroup {
            name: product_name(&parts),
            spec,
            spectrum,
        });

        // odometer, last prime fastest
        let mut i = catalogs.len();
        loop {
            if i == 0 {
                return Ok(NilpotentCensus {
                    n,
                    factorization,
                    groups,
                    completeness,
                });
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < catalogs[i].1.len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Maximum of a statistic over candidates and every index attaining it.
struct Extremum {
    values: Vec<BigUint>,
    max: BigUint,
    argmax: Vec<usize>,
}

fn extremum(
    cands: &[&NilpotentGroup],
    value: impl Fn(&OrderSpectrum) -> Result<BigUint>,
) -> Result<Extremum> {
    let values = cands
        .iter()
        .map(|c| value(&c.spectrum))
        .collect::<Result<Vec<_>>>()?;
    let max = values.iter().max().cloned().unwrap_or_default();
    let argmax = (0..values.len()).filter(|&i| values[i] == max).collect();
    Ok(Extremum {
        values,
        max,
        argmax,
    })
}

fn phi_value(s: &OrderSpectrum) -> Result<BigUint> {
    Ok(s.phi_sum())
}

fn edge_value(s: &OrderSpectrum) -> Result<BigUint> {
    s.undirected_edges()
}

const GROUP_COLUMNS: [&str; 7] = [
    "group",
    "spec",
    "sigma",
    "phi_sum",
    "mutual_edges",
    "undirected_edges",
    "argmax",
];

fn group_table(cands: &[&NilpotentGroup], argmax: &[usize]) -> Result<Table> {
    let mut t = Table::new(&GROUP_COLUMNS);
    for (i, c) in cands.iter().enumerate() {
        let s = c.stats()?;
        t.push(vec![
            c.name.clone(),
            c.spec.to_string(),
            s.sigma.to_string(),
            s.phi_sum.to_string(),
            s.mutual_edges.to_string(),
            s.undirected_edges.to_string(),
            if argmax.contains(&i) { "*" } else { "" }.to_string(),
        ]);
    }
    Ok(t)
}

/// Compares an argmax set against the expected maximizers. Groups are
/// matched by spectrum, since every statistic here is a function of it.
fn check_argmax(
    report: &mut VerificationReport,
    cands: &[&NilpotentGroup],
    ext: &Extremum,
    expected: &[(String, OrderSpectrum)],
    what: &str,
) -> Result<bool> {
    let mut ok = true;
    for &i in &ext.argmax {
        if !expected.iter().any(|(_, s)| *s == cands[i].spectrum) {
            ok = false;
            report
                .witnesses
                .push(cands[i].witness()?.with_detail(format!(
                    "attains the maximum {what} {} but is not an expected maximizer",
                    ext.max
                )));
        }
    }
    for (name, s) in expected {
        if !ext.argmax.iter().any(|&i| cands[i].spectrum == *s) {
            ok = false;
            let detail = match cands.iter().position(|c| c.spectrum == *s) {
                Some(i) => format!("{what} {} is below the maximum {}", ext.values[i], ext.max),
                None => "expected maximizer is missing from the catalog".to_string(),
            };
            report.witnesses.push(Witness::point(name.clone(), detail));
        }
    }
    Ok(ok)
}

fn even_modular_note(report: &mut VerificationReport, cands: &[&NilpotentGroup], argmax: &[usize]) {
    if argmax.iter().any(|&i| cands[i].spec.uses_even_modular()) {
        report.notes.push(
            "M(n,2) has the same order spectrum as C_{2^(n-1)} x C_2, so the two always tie"
                .to_string(),
        );
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p as u128) {
        return Err(Error::input(format!("p = {p} is not prime")));
    }
    if p == 2 {
        return Err(Error::input("p must be an odd prime"));
    }
    Ok(())
}

fn expected_p_group_max(p: u64, n: u32) -> Result<Vec<(String, OrderSpectrum)>> {
    let mut specs = vec![(
        abelian_name(p, &[n - 1, 1]),
        GroupSpec::Abelian {
            p,
            partition: vec![n - 1, 1],
        },
    )];
    if n >= 3 {
        let m = GroupSpec::Modular { n, p };
        specs.push((m.to_string(), m));
    }
    specs
        .into_iter()
        .map(|(name, spec)| Ok((name, spec.spectrum()?)))
        .collect()
}

fn p_group_candidates(
    p: u64,
    n: u32,
    census: Option<&CensusDir>,
) -> Result<(Vec<NilpotentGroup>, Completeness)> {
    let cat = catalog(p, n, census)?;
    Ok((
        cat.entries.into_iter().map(NilpotentGroup::from).collect(),
        cat.completeness,
    ))
}

/// `p * phi(G) = (p - 1) * sigma(G) + 1` for a `p`-group.
fn check_p_group_phi_identity(
    report: &mut VerificationReport,
    p: u64,
    groups: &[NilpotentGroup],
) -> Result<bool> {
    let mut ok = true;
    for g in groups {
        let lhs = BigUint::from(p) * g.spectrum.phi_sum();
        let rhs = BigUint::from(p - 1) * g.spectrum.order_sum() + BigUint::one();
        if lhs != rhs {
            ok = false;
            report.witnesses.push(
                g.witness()?
                    .with_detail(format!("p*phi_sum = {lhs} but (p-1)*sigma + 1 = {rhs}")),
            );
        }
    }
    Ok(ok)
}

/// `2p|E| = (p + 1) sigma(G) - p|G| - 1` for a `p`-group.
fn check_p_group_edge_identity(
    report: &mut VerificationReport,
    p: u64,
    groups: &[NilpotentGroup],
) -> Result<bool> {
    let mut ok = true;
    for g in groups {
        let lhs = BigUint::from(2 * p) * g.spectrum.undirected_edges()?;
        let rhs = BigUint::from(p + 1) * g.spectrum.order_sum()
            - BigUint::from(p) * BigUint::from(g.spectrum.total())
            - BigUint::one();
        if lhs != rhs {
            ok = false;
            report.witnesses.push(g.witness()?.with_detail(format!(
                "2p*edges = {lhs} but (p+1)*sigma - p*|G| - 1 = {rhs}"
            )));
        }
    }
    Ok(ok)
}

/// The maximum of `phi_sum` over non-cyclic nilpotent groups of order `n`
/// is attained by `C_{n/p_s} x C_{p_s}`, where `p_s` is the smallest prime
/// whose exponent exceeds one.
///
/// `allow_even` runs the same computation for even `n`; the verdict is
/// then always exploratory.
pub fn verify_main_theorem(
    n: u128,
    census: Option<&CensusDir>,
    allow_even: bool,
) -> Result<VerificationReport> {
    let f = factorize(n)?;
    let Some(p_s) = f.p_s() else {
        return Err(Error::input(format!(
            "n = {n} is square-free, so every nilpotent group of order n is cyclic \
             (the theorem assumes n is not square-free)"
        )));
    };
    let even = n.is_multiple_of(2);
    if even && !allow_even {
        return Err(Error::input(format!(
            "n = {n} is even; the theorem assumes odd n (--allow-even gives an exploratory run)"
        )));
    }
    let nc = enumerate_nilpotent(n, census)?;
    let cands = nc.non_cyclic();
    let expected_name = format!("C{}xC{p_s}", n / p_s);
    let expected = spectrum_product(&spectrum_cyclic(n / p_s)?, &spectrum_cyclic(p_s)?)?;
    let target = expected.phi_sum();
    let ext = extremum(&cands, phi_value)?;

    let mut report = VerificationReport::new("main-theorem", group_table(&cands, &ext.argmax)?);
    report.param("n", n);
    report.param("p_s", p_s);
    report.completeness = nc.completeness;
    report.checked = cands.len() as u64;
    report.expected = vec![expected_name.clone()];
    for &i in &ext.argmax {
        report.argmax.push(cands[i].witness()?);
    }
    report.notes.push(format!(
        "phi_sum({expected_name}) = {target}; maximum over non-cyclic groups = {}",
        ext.max
    ));

    let pass = ext.max == target;
    if !pass {
        if ext.max > target {
            for &i in &ext.argmax {
                report.witnesses.push(
                    cands[i]
                        .witness()?
                        .with_detail(format!("phi_sum {} exceeds {target}", ext.max)),
                );
            }
        } else {
            report.witnesses.push(Witness::point(
                expected_name,
                format!("maximum {} falls short of {target}", ext.max),
            ));
        }
    }
    report.verdict = if even {
        report
            .notes
            .push("n is even: outside the theorem's hypotheses, exploratory only".into());
        Verdict::Exploratory
    } else if pass {
        Verdict::passed(nc.completeness)
    } else {
        Verdict::Counterexample
    };
    even_modular_note(&mut report, &cands, &ext.argmax);
    Ok(report)
}

/// Runs [`verify_main_theorem`] for every admissible `n <= n_max`.
///
/// With `complete_only`, orders whose catalog is incomplete are skipped
/// rather than downgrading the verdict.
pub fn verify_main_theorem_range(
    n_max: u128,
    census: Option<&CensusDir>,
    allow_even: bool,
    complete_only: bool,
) -> Result<VerificationReport> {
    if n_max < 4 {
        return Err(Error::input("--n-max must be at least 4"));
    }
    let mut table = Table::new(&[
        "n",
        "p_s",
        "expected",
        "expected_phi",
        "max_phi",
        "argmax",
        "completeness",
        "verdict",
    ]);
    let mut verdict: Option<Verdict> = None;
    let mut completeness = Completeness::Complete;
    let mut witnesses = Vec::new();
    let mut skipped = 0u64;
    let mut checked = 0u64;
    for n in 4..=n_max {
        if n % 2 == 0 && !allow_even {
            continue;
        }
        if factorize(n)?.is_square_free() {
            continue;
        }
        let r = verify_main_theorem(n, census, allow_even)?;
        if complete_only && !r.completeness.is_complete() {
            skipped += 1;
            continue;
        }
        checked += 1;
        completeness = completeness.and(r.completeness);
        verdict = Some(verdict.map_or(r.verdict, |v| v.worst(r.verdict)));
        let argmax: Vec<&str> = r.argmax.iter().map(|w| w.subject.as_str()).collect();
        let max_phi = r
            .argmax
            .first()
            .and_then(|w| w.stats.as_ref())
            .map(|s| s.phi_sum.to_string())
            .unwrap_or_default();
        let expected_phi = {
            let p_s: u128 = r.parameters["p_s"].parse().expect("numeric parameter");
            spectrum_product(&spectrum_cyclic(n / p_s)?, &spectrum_cyclic(p_s)?)?.phi_sum()
        };
        table.push(vec![
            n.to_string(),
            r.parameters["p_s"].clone(),
            r.expected.join(";"),
            expected_phi.to_string(),
            max_phi,
            argmax.join(";"),
            r.completeness.to_string(),
            r.verdict.to_string(),
        ]);
        for w in r.witnesses {
            witnesses.push(Witness {
                subject: format!("n={n}: {}", w.subject),
                ..w
            });
        }
    }
    let mut report = VerificationReport::new("main-theorem", table);
    report.param("n_max", n_max);
    if allow_even {
        report.param("allow_even", true);
    }
    if complete_only {
        report.param("complete_only", true);
        report
            .notes
            .push(format!("{skipped} orders skipped for incomplete catalogs"));
    }
    report.completeness = completeness;
    report.checked = checked;
    report.witnesses = witnesses;
    report.verdict = verdict.unwrap_or(Verdict::passed(completeness));
    Ok(report)
}

/// Among non-cyclic groups of order `p^n` (odd `p`), `phi_sum` is maximal
/// exactly at `C_{p^(n-1)} x C_p` and `M(n,p)`.
pub fn verify_prop_2_2(p: u64, n: u32, census: Option<&CensusDir>) -> Result<VerificationReport> {
    require_odd_prime(p)?;
    if n < 2 {
        return Err(Error::input(
            "n must be at least 2 (no non-cyclic group of order p)",
        ));
    }
    let (groups, completeness) = p_group_candidates(p, n, census)?;
    let cands: Vec<&NilpotentGroup> = groups.iter().filter(|g| !g.is_cyclic()).collect();
    let ext = extremum(&cands, phi_value)?;
    let expected = expected_p_group_max(p, n)?;

    let mut report = VerificationReport::new("prop-2.2", group_table(&cands, &ext.argmax)?);
    report.param("p", p);
    report.param("n", n);
    report.completeness = completeness;
    report.checked = cands.len() as u64;
    report.expected = expected.iter().map(|(name, _)| name.clone()).collect();
    for &i in &ext.argmax {
        report.argmax.push(cands[i].witness()?);
    }
    let argmax_ok = check_argmax(&mut report, &cands, &ext, &expected, "phi_sum")?;
    let identity_ok = check_p_group_phi_identity(&mut report, p, &groups)?;
    report
        .notes
        .push("p*phi_sum = (p-1)*sigma + 1 checked for every group of the catalog".into());
    report.verdict = if argmax_ok && identity_ok {
        Verdict::passed(completeness)
    } else {
        Verdict::Counterexample
    };
    Ok(report)
}

/// `C_{p^(n-1)} x C_p` and `M(n,p)` have equally many mutual edges, and no
/// non-cyclic group of order `p^n` has more.
pub fn verify_cor_2_3(p: u64, n: u32, census: Option<&CensusDir>) -> Result<VerificationReport> {
    require_odd_prime(p)?;
    if n < 3 {
        return Err(Error::input("n must be at least 3 for M(n,p) to exist"));
    }
    let expected = expected_p_group_max(p, n)?;
    let (groups, completeness) = p_group_candidates(p, n, census)?;
    let cands: Vec<&NilpotentGroup> = groups.iter().filter(|g| !g.is_cyclic()).collect();
    let ext = extremum(&cands, |s| s.mutual_edges())?;

    let mut report = VerificationReport::new("cor-2.3", group_table(&cands, &ext.argmax)?);
    report.param("p", p);
    report.param("n", n);
    report.completeness = completeness;
    report.checked = cands.len() as u64;
    report.expected = expected.iter().map(|(name, _)| name.clone()).collect();
    for &i in &ext.argmax {
        report.argmax.push(cands[i].witness()?);
    }

    let (a_name, a) = &expected[0];
    let (m_name, m) = &expected[1];
    let (ma, mm) = (a.mutual_edges()?, m.mutual_edges()?);
    report.notes.push(format!(
        "mutual_edges({a_name}) = {ma}, mutual_edges({m_name}) = {mm}"
    ));
    let mut ok = true;
    if ma != mm {
        ok = false;
        report.witnesses.push(Witness::point(
            format!("{a_name} vs {m_name}"),
            format!("mutual edges differ: {ma} != {mm}"),
        ));
    }
    if ext.max > ma {
        ok = false;
        for &i in &ext.argmax {
            report.witnesses.push(
                cands[i]
                    .witness()?
                    .with_detail(format!("mutual_edges {} exceeds {ma}", ext.max)),
            );
        }
    }
    report.verdict = if ok {
        Verdict::passed(completeness)
    } else {
        Verdict::Counterexample
    };
    Ok(report)
}

/// `phi(C_{p^(m-1)} x C_p)`.
fn phi_split(p: u64, m: u32) -> Result<BigUint> {
    Ok(spectrum_product(
        &spectrum_cyclic_prime_power(p, m - 1)?,
        &spectrum_cyclic_prime_power(p, 1)?,
    )?
    .phi_sum())
}

fn phi_cyclic(p: u64, m: u32) -> Result<BigUint> {
    Ok(spectrum_cyclic_prime_power(p, m)?.phi_sum())
}

fn check_grid(p_max: u64, m_max: u32) -> Result<Vec<u64>> {
    if p_max < 2 {
        return Err(Error::input("--p-max must be at least 2"));
    }
    if m_max < 2 {
        return Err(Error::input("--m-max must be at least 2"));
    }
    Ok(primes_up_to(p_max))
}

/// Largest `p^m` for which the closed form is also compared against an
/// explicitly built cyclic group.
pub const DIRECT_CHECK_LIMIT: u128 = 2000;

/// The recurrences `phi(C_{p^m}) = phi(C_{p^(m-1)}) + phi(p^m)^2` and
/// `phi(C_{p^(m-1)} x C_p) = p phi(C_{p^(m-1)}) + (p-1)(p-2)`, plus the
/// closed form `phi(C_{p^m}) = (p^(2m)(p-1) + 2)/(p+1)`.
pub fn verify_lemma_2_4(p_max: u64, m_max: u32) -> Result<VerificationReport> {
    let primes = check_grid(p_max, m_max)?;
    let mut table = Table::new(&[
        "p",
        "m",
        "phi_cyclic",
        "phi_split",
        "recurrence_i",
        "recurrence_ii",
        "closed_form",
        "direct",
    ]);
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for &p in &primes {
        for m in 2..=m_max {
            checked += 1;
            let pb = BigUint::from(p);
            let b = phi_cyclic(p, m)?;
            let b_prev = phi_cyclic(p, m - 1)?;
            let a = phi_split(p, m)?;
            let totient = pb.pow(m - 1) * (p - 1);
            let rec_i = b == &b_prev + &totient * &totient;
            let rec_ii = a == &pb * &b_prev + BigUint::from((p - 1) * (p.saturating_sub(2)));
            let closed = b == phi_cyclic_prime_power(p, m)?;
            let q = (p as u128).pow(m.min(127));
            let direct = if m < 128 && q <= DIRECT_CHECK_LIMIT {
                let g = GroupSpec::Cyclic(q as u64).build()?;
                Some(order_spectrum(&g)?.phi_sum() == b)
            } else {
                None
            };
            let at = format!("p={p} m={m}");
            if !rec_i {
                witnesses.push(Witness::point(&at, "recurrence (i) fails"));
            }
            if !rec_ii {
                witnesses.push(Witness::point(&at, "recurrence (ii) fails"));
            }
            if !closed {
                witnesses.push(Witness::point(&at, "closed form disagrees with tally"));
            }
            if direct == Some(false) {
                witnesses.push(Witness::point(
                    &at,
                    "closed form disagrees with the built group",
                ));
            }
            table.push(vec![
                p.to_string(),
                m.to_string(),
                b.to_string(),
                a.to_string(),
                ok(rec_i),
                ok(rec_ii),
                ok(closed),
                direct.map_or("-".to_string(), ok),
            ]);
        }
    }
    let mut report = VerificationReport::new("lemma-2.4", table);
    report.param("p_max", p_max);
    report.param("m_max", m_max);
    report.checked = checked;
    report.verdict = if witnesses.is_empty() {
        Verdict::Verified
    } else {
        Verdict::Counterexample
    };
    report.witnesses = witnesses;
    report.notes.push(format!(
        "closed form compared against built cyclic groups where p^m <= {DIRECT_CHECK_LIMIT}"
    ));
    Ok(report)
}

fn ok(b: bool) -> String {
    if b { "ok" } else { "FAIL" }.to_string()
}

/// `(p-2) phi(C_{p^(m-1)} x C_p) < phi(C_{p^m}) < p phi(C_{p^(m-1)} x C_p)`.
pub fn verify_lemma_2_5(p_max: u64, m_max: u32) -> Result<VerificationReport> {
    let primes = check_grid(p_max, m_max)?;
    let mut table = Table::new(&["p", "m", "lower", "phi_cyclic", "upper", "holds"]);
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for &p in &primes {
        for m in 2..=m_max {
            checked += 1;
            let a = phi_split(p, m)?;
            let b = phi_cyclic(p, m)?;
            let lower = BigUint::from(p - 2) * &a;
            let upper = BigUint::from(p) * &a;
            let holds = lower < b && b < upper;
            if !holds {
                witnesses.push(Witness::point(
                    format!("p={p} m={m}"),
                    format!("{lower} < {b} < {upper} fails"),
                ));
            }
            table.push(vec![
                p.to_string(),
                m.to_string(),
                lower.to_string(),
                b.to_string(),
                upper.to_string(),
                ok(holds),
            ]);
        }
    }
    let mut report = VerificationReport::new("lemma-2.5", table);
    report.param("p_max", p_max);
    report.param("m_max", m_max);
    report.checked = checked;
    if primes.contains(&2) {
        report
            .notes
            .push("at p = 2 the lower bound is 0 and the left inequality is trivial".into());
    }
    report.verdict = if witnesses.is_empty() {
        Verdict::Verified
    } else {
        Verdict::Counterexample
    };
    report.witnesses = witnesses;
    Ok(report)
}

/// `phi(C_{p^m}) / phi(C_{p^(m-1)} x C_p) < phi(C_{q^t}) / phi(C_{q^(t-1)} x C_q)`
/// for odd primes `p < q`, compared by cross-multiplication. Pairs with
/// `p = 2` are evaluated and reported without affecting the verdict.
pub fn verify_cor_2_6(q_max: u64, t_max: u32) -> Result<VerificationReport> {
    let primes = check_grid(q_max, t_max)?;
    // (phi_cyclic, phi_split) per prime and exponent 2..=t_max
    let mut values = Vec::new();
    for &p in &primes {
        let row = (2..=t_max)
            .map(|m| Ok((phi_cyclic(p, m)?, phi_split(p, m)?)))
            .collect::<Result<Vec<_>>>()?;
        values.push(row);
    }
    let mut table = Table::new(&["p", "q", "grid_points", "failures"]);
    let mut witnesses = Vec::new();
    let mut checked = 0u64;
    let (mut even_points, mut even_failures) = (0u64, 0u64);
    let mut even_examples = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        for (j, &q) in primes.iter().enumerate().skip(i + 1) {
            let mut points = 0u64;
            let mut failures = 0u64;
            for (mi, (bp, ap)) in values[i].iter().enumerate() {
                for (ti, (bq, aq)) in values[j].iter().enumerate() {
                    points += 1;
                    if bp * aq >= bq * ap {
                        failures += 1;
                        let at = format!("p={p} q={q} m={} t={}", mi + 2, ti + 2);
                        let detail = format!("{} >= {}", bp * aq, bq * ap);
                        if p == 2 {
                            if even_examples.len() < 5 {
                                even_examples.push(format!("{at} ({detail})"));
                            }
                        } else {
                            witnesses.push(Witness::point(at, detail));
                        }
                    }
                }
            }
            if p == 2 {
                even_points += points;
                even_failures += failures;
            } else {
                checked += points;
                table.push(vec![
                    p.to_string(),
                    q.to_string(),
                    points.to_string(),
                    failures.to_string(),
                ]);
            }
        }
    }
    let mut report = VerificationReport::new("cor-2.6", table);
    report.param("q_max", q_max);
    report.param("t_max", t_max);
    report.checked = checked;
    if even_points > 0 {
        let mut note = format!(
            "p = 2 (no pass/fail contract): inequality fails at {even_failures} of {even_points} grid points"
        );
        if !even_examples.is_empty() {
            note.push_str(&format!(", e.g. {}", even_examples.join("; ")));
        }
        report.notes.push(note);
    }
    report.verdict = if witnesses.is_empty() {
        Verdict::Verified
    } else {
        Verdict::Counterexample
    };
    report.witnesses = witnesses;
    Ok(report)
}

/// Maximizers of the undirected edge count among non-cyclic groups of
/// order `p^n`: `C_{p^(n-1)} x C_p` and `M(n,p)` for odd `p`,
/// `C_{2^(n-1)} x C_2` for `p = 2`, `n != 3`, and `Q8` for order 8.
pub fn verify_prop_2_8(p: u64, n: u32, census: Option<&CensusDir>) -> Result<VerificationReport> {
    if !is_prime(p as u128) {
        return Err(Error::input(format!("p = {p} is not prime")));
    }
    if n < 2 {
        return Err(Error::input(
            "n must be at least 2 (no non-cyclic group of order p)",
        ));
    }
    let expected = if p == 2 && n == 3 {
        let q8 = GroupSpec::GeneralizedQuaternion(8);
        vec![(q8.to_string(), q8.spectrum()?)]
    } else if p == 2 {
        expected_p_group_max(p, n)?.into_iter().take(1).collect()
    } else {
        expected_p_group_max(p, n)?
    };
    let (groups, completeness) = p_group_candidates(p, n, census)?;
    let cands: Vec<&NilpotentGroup> = groups.iter().filter(|g| !g.is_cyclic()).collect();
    let ext = extremum(&cands, edge_value)?;

    let mut report = VerificationReport::new("prop-2.8", group_table(&cands, &ext.argmax)?);
    report.param("p", p);
    report.param("n", n);
    report.completeness = completeness;
    report.checked = cands.len() as u64;
    report.expected = expected.iter().map(|(name, _)| name.clone()).collect();
    for &i in &ext.argmax {
        report.argmax.push(cands[i].witness()?);
    }
    let argmax_ok = check_argmax(&mut report, &cands, &ext, &expected, "undirected_edges")?;
    let identity_ok = check_p_group_edge_identity(&mut report, p, &groups)?;
    report
        .notes
        .push("2p*edges = (p+1)*sigma - p*|G| - 1 checked for every group of the catalog".into());
    even_modular_note(&mut report, &cands, &ext.argmax);
    report.verdict = if argmax_ok && identity_ok {
        Verdict::passed(completeness)
    } else {
        Verdict::Counterexample
    };
    Ok(report)
}

/// `phi(U x T) = phi(U) phi(T)` for random pairs of coprime order.
///
/// Pairs are drawn from the nilpotent catalogs of orders `2..=max_order`
/// together with the non-nilpotent dihedral groups in that range. When
/// `|U||T| <= brute_cap` the product is also built as a table and its
/// spectrum tallied directly.
pub fn verify_lemma_2_1(
    pairs: usize,
    max_order: u64,
    seed: u64,
    brute_cap: usize,
    census: Option<&CensusDir>,
) -> Result<VerificationReport> {
    if pairs == 0 {
        return Err(Error::input("--pairs must be positive"));
    }
    if max_order < 6 {
        return Err(Error::input(
            "--max-order must be at least 6 to admit coprime pairs",
        ));
    }
    let mut pool: Vec<NilpotentGroup> = Vec::new();
    for n in 2..=max_order as u128 {
        pool.extend(enumerate_nilpotent(n, census)?.groups);
        if n % 2 == 0 && n >= 6 && !factorize(n)?.is_prime_power() {
            let spec = GroupSpec::Dihedral(n as u64);
            pool.push(NilpotentGroup {
                name: spec.to_string(),
                spectrum: spec.spectrum()?,
                spec,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(&["u", "t", "phi_u", "phi_t", "phi_product", "method", "holds"]);
    let mut witnesses = Vec::new();
    let mut tabled = 0u64;
    for _ in 0..pairs {
        let u = pool.choose(&mut rng).expect("pool is non-empty");
        let partners: Vec<&NilpotentGroup> = pool
            .iter()
            .filter(|t| gcd(t.spectrum.total(), u.spectrum.total()) == 1)
            .collect();
        // every order >= 2 has a coprime partner among 2, 3 below max_order
        let t = partners[rng.gen_range(0..partners.len())];
        let (pu, pt) = (u.spectrum.phi_sum(), t.spectrum.phi_sum());
        let size = u.spectrum.total() * t.spectrum.total();
        let (product, method) = if size <= brute_cap as u128 {
            let g = direct_product_capped(&u.spec.build()?, &t.spec.build()?, brute_cap)?;
            tabled += 1;
            (order_spectrum(&g)?.phi_sum(), "table")
        } else {
            (
                spectrum_product(&u.spectrum, &t.spectrum)?.phi_sum(),
                "spectrum",
            )
        };
        let holds = product == &pu * &pt;
        if !holds {
            witnesses.push(Witness::point(
                format!("{} x {}", u.name, t.name),
                format!("phi = {product} but phi(U) phi(T) = {}", &pu * &pt),
            ));
        }
        table.push(vec![
            u.name.clone(),
            t.name.clone(),
            pu.to_string(),
            pt.to_string(),
            product.to_string(),
            method.to_string(),
            ok(holds),
        ]);
    }
    let mut report = VerificationReport::new("lemma-2.1", table);
    report.param("pairs", pairs);
    report.param("max_order", max_order);
    report.param("seed", seed);
    report.checked = pairs as u64;
    report.notes.push(format!(
        "pool of {} groups; {tabled} products built as tables, the rest composed from spectra",
        pool.len()
    ));
    report.verdict = if witnesses.is_empty() {
        Verdict::Verified
    } else {
        Verdict::Counterexample
    };
    report.witnesses = witnesses;
    Ok(report)
}

/// Exploratory comparison of undirected edge counts: does
/// `C_{n/p_s} x C_{p_s}` maximize them among non-cyclic nilpotent groups
/// of order `n`? Orders with incomplete catalogs are skipped.
pub fn scan_conjecture_2_9(n_max: u128, census: Option<&CensusDir>) -> Result<VerificationReport> {
    if n_max < 9 {
        return Err(Error::input("--n-max must be at least 9"));
    }
    let mut table = Table::new(&[
        "n",
        "p_s",
        "expected",
        "expected_edges",
        "candidates",
        "winner",
        "winner_edges",
        "margin",
        "status",
    ]);
    let (mut support, mut against, mut skipped) = (0u64, 0u64, 0u64);
    let mut witnesses = Vec::new();
    for n in (9..=n_max).step_by(2) {
        let f = factorize(n)?;
        let Some(p_s) = f.p_s() else { continue };
        let nc = enumerate_nilpotent(n, census)?;
        if !nc.completeness.is_complete() {
            skipped += 1;
            continue;
        }
        let cands = nc.non_cyclic();
        let expected = spectrum_product(&spectrum_cyclic(n / p_s)?, &spectrum_cyclic(p_s)?)?;
        let target = expected.undirected_edges()?;
        let ext = extremum(&cands, edge_value)?;
        let winners: Vec<&str> = ext.argmax.iter().map(|&i| cands[i].name.as_str()).collect();
        let competitor = cands
            .iter()
            .zip(&ext.values)
            .filter(|(c, _)| c.spectrum != expected)
            .map(|(_, v)| v)
            .max();
        let margin = match competitor {
            Some(v) if *v <= target => (&target - v).to_string(),
            Some(v) => format!("-{}", v - &target),
            None => "-".to_string(),
        };
        let holds = ext.max == target;
        if holds {
            support += 1;
        } else {
            against += 1;
            for &i in &ext.argmax {
                witnesses.push(
                    cands[i]
                        .witness()?
                        .with_detail(format!("n={n}: {} edges against {target}", ext.max)),
                );
            }
        }
        table.push(vec![
            n.to_string(),
            p_s.to_string(),
            format!("C{}xC{p_s}", n / p_s),
            target.to_string(),
            cands.len().to_string(),
            winners.join(";"),
            ext.max.to_string(),
            margin,
            if holds { "support" } else { "counterexample" }.to_string(),
        ]);
    }
    let mut report = VerificationReport::new("conjecture-2.9", table);
    report.param("n_max", n_max);
    report.verdict = Verdict::Exploratory;
    report.checked = support + against;
    report.witnesses = witnesses;
    report.notes.push(format!(
        "{support} orders support the conjecture, {against} contradict it, \
         {skipped} skipped for incomplete catalogs"
    ));
    report
        .notes
        .push("margin = expected edges minus the best group with a different spectrum".into());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(nc: &NilpotentCensus) -> Vec<String> {
        nc.groups.iter().map(|g| g.name.clone()).collect()
    }

    #[test]
    fn enumerations() {
        let nc = enumerate_nilpotent(45, None).unwrap();
        assert_eq!(names(&nc), ["C45", "C15xC3"]);
        assert_eq!(nc.completeness, Completeness::Complete);

        let nc = enumerate_nilpotent(135, None).unwrap();
        assert_eq!(
            names(&nc),
            ["C135", "C45xC3", "C15xC3xC3", "He3xC5", "M(3,3)xC5"]
        );
        assert_eq!(nc.non_cyclic().len(), 4);

        assert_eq!(names(&enumerate_nilpotent(15, None).unwrap()), ["C15"]);
        assert_eq!(names(&enumerate_nilpotent(2, None).unwrap()), ["C2"]);
        assert!(enumerate_nilpotent(1, None).is_err());
        assert_eq!(
            enumerate_nilpotent(81, None).unwrap().completeness,
            Completeness::Incomplete
        );
    }

    #[test]
    fn square_free_orders_are_cyclic_only() {
        for n in [6u128, 30, 105, 1155] {
            let nc = enumerate_nilpotent(n, None).unwrap();
            assert_eq!(nc.groups.len(), 1);
            assert!(nc.groups[0].is_cyclic());
        }
    }

    #[test]
    fn enumerated_spectra_match_built_groups() {
        for n in [12u128, 36, 45, 72, 135] {
            for g in enumerate_nilpotent(n, None).unwrap().groups {
                let built = g.spec.build().unwrap();
                assert_eq!(order_spectrum(&built).unwrap(), g.spectrum, "{}", g.name);
            }
        }
    }

    #[test]
    fn main_theorem_examples() {
        let r = verify_main_theorem(45, None, false).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.argmax.len(), 1);
        assert_eq!(r.argmax[0].subject, "C15xC3");
        assert_eq!(
            r.argmax[0].stats.as_ref().unwrap().phi_sum,
            BigUint::from(289u32)
        );

        let r = verify_main_theorem(135, None, false).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let am: Vec<&str> = r.argmax.iter().map(|w| w.subject.as_str()).collect();
        assert_eq!(am, ["C45xC3", "M(3,3)xC5"]);
        assert_eq!(
            r.argmax[0].stats.as_ref().unwrap().phi_sum,
            BigUint::from(2125u32)
        );

        let r = verify_main_theorem(225, None, false).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.argmax[0].subject, "C75xC3");
        assert_eq!(
            r.argmax[0].stats.as_ref().unwrap().phi_sum,
            BigUint::from(7089u32)
        );
        let c45c5 = r.table.rows.iter().find(|row| row[0] == "C45xC5").unwrap();
        assert_eq!(c45c5[3], "3977");
    }

    #[test]
    fn main_theorem_hypotheses() {
        let e = verify_main_theorem(30, None, false)
            .unwrap_err()
            .to_string();
        assert!(e.contains("square-free"), "{e}");
        let e = verify_main_theorem(36, None, false)
            .unwrap_err()
            .to_string();
        assert!(e.contains("even"), "{e}");
        let r = verify_main_theorem(36, None, true).unwrap();
        assert_eq!(r.verdict, Verdict::Exploratory);
        assert_eq!(
            verify_main_theorem(81 * 5, None, false).unwrap().verdict,
            Verdict::VerifiedOnIncompleteCatalog
        );
    }

    #[test]
    fn main_theorem_small_range() {
        let r = verify_main_theorem_range(300, None, false, true).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.table.rows.iter().any(|row| row[0] == "135"));
        assert!(!r.table.rows.iter().any(|row| row[0] == "243"));
    }

    #[test]
    fn prop_2_2_examples() {
        let r = verify_prop_2_2(3, 3, None).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let am: Vec<&str> = r.argmax.iter().map(|w| w.subject.as_str()).collect();
        assert_eq!(am, ["C9xC3", "M(3,3)"]);
        for row in &r.table.rows {
            let phi = if row[6] == "*" { "125" } else { "53" };
            assert_eq!(row[3], phi, "{}", row[0]);
        }
        let r = verify_prop_2_2(3, 2, None).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.checked, 1);
        assert_eq!(
            verify_prop_2_2(5, 3, None).unwrap().verdict,
            Verdict::Verified
        );
        assert!(verify_prop_2_2(2, 3, None).is_err());
        assert!(verify_prop_2_2(9, 3, None).is_err());
    }

    #[test]
    fn cor_2_3_examples() {
        let r = verify_cor_2_3(3, 3, None).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.notes[0].contains("= 49, "), "{}", r.notes[0]);
        assert_eq!(
            verify_cor_2_3(3, 4, None).unwrap().verdict,
            Verdict::VerifiedOnIncompleteCatalog
        );
        assert_eq!(
            verify_cor_2_3(5, 3, None).unwrap().verdict,
            Verdict::Verified
        );
    }

    #[test]
    fn prop_2_8_examples() {
        let r = verify_prop_2_8(2, 3, None).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let edges: Vec<(&str, &str)> = r
            .table
            .rows
            .iter()
            .map(|row| (row[0].as_str(), row[5].as_str()))
            .collect();
        assert_eq!(
            edges,
            [
                ("C4xC2", "13"),
                ("C2xC2xC2", "7"),
                ("D8", "10"),
                ("Q8", "16")
            ]
        );
        assert_eq!(r.argmax.len(), 1);
        assert_eq!(r.argmax[0].subject, "Q8");

        let r = verify_prop_2_8(3, 3, None).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.argmax.len(), 2);

        let r = verify_prop_2_8(2, 4, None).unwrap();
        assert_eq!(r.verdict, Verdict::VerifiedOnIncompleteCatalog);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn arithmetic_sweeps_small() {
        assert_eq!(verify_lemma_2_4(13, 6).unwrap().verdict, Verdict::Verified);
        assert_eq!(verify_lemma_2_5(13, 6).unwrap().verdict, Verdict::Verified);
        let r = verify_cor_2_6(13, 5).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert!(r.notes[0].starts_with("p = 2"));
        assert!(verify_lemma_2_4(1, 3).is_err());
        assert!(verify_lemma_2_5(5, 1).is_err());
    }

    #[test]
    fn lemma_2_4_spot_values() {
        let r = verify_lemma_2_4(3, 2).unwrap();
        let row = r.table.rows.iter().find(|row| row[0] == "3").unwrap();
        assert_eq!((row[2].as_str(), row[3].as_str()), ("41", "17"));
    }

    #[test]
    fn lemma_2_1_is_seeded() {
        let a = verify_lemma_2_1(40, 60, 7, 4096, None).unwrap();
        let b = verify_lemma_2_1(40, 60, 7, 4096, None).unwrap();
        assert_eq!(a.verdict, Verdict::Verified);
        assert_eq!(a, b);
        assert!(a.table.rows.iter().any(|row| row[5] == "table"));
    }

    #[test]
    fn scan_rows() {
        let r = scan_conjecture_2_9(9, None).unwrap();
        assert_eq!(r.table.rows.len(), 1);
        assert_eq!(r.table.rows[0][0], "9");
        let r = scan_conjecture_2_9(135, None).unwrap();
        assert_eq!(r.verdict, Verdict::Exploratory);
        let row45 = r.table.rows.iter().find(|row| row[0] == "45").unwrap();
        assert_eq!(row45[4], "1");
        assert_eq!(row45[7], "-");
        let row135 = r.table.rows.iter().find(|row| row[0] == "135").unwrap();
        assert_eq!(row135[4], "4");
    }
}
