//! Database of the finite groups of each order.
//!
//! The search pipeline asks for *all* groups of a given order; this module
//! supplies them from a JSON catalogue file shipped with the repository. The
//! file declares which orders it covers completely, so the pipeline can tell
//! a finished branch from one that must be skipped.
//!
//! Three independent construction routes keep the catalogue honest:
//! - [`enumerate_small_groups`] exhaustively backtracks over Cayley tables
//!   (n <= 16) and is the oracle the shipped file is tested against;
//! - [`cyclic_extensions`] builds every extension of a known group by a
//!   cyclic group of prime order, which reaches every group of order < 60
//!   (and every 2-group) when applied recursively;
//! - [`construct_named`] realizes the standard named presentations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::CatalogueError;
use crate::group::{FiniteGroup, Subgroup, DEFAULT_ORDER_CAP};
use crate::perm::Perm;

/// Classical per-order class counts for orders 1..=50, used to cross-check
/// generated and loaded catalogues.
pub const CLASS_COUNTS_1_TO_50: [usize; 50] = [
    1, 1, 1, 2, 1, 2, 1, 5, 2, 2, // 1..10
    1, 5, 1, 2, 1, 14, 1, 5, 1, 5, // 11..20
    2, 2, 1, 15, 2, 2, 5, 4, 1, 4, // 21..30
    1, 51, 1, 2, 1, 14, 1, 2, 2, 14, // 31..40
    1, 6, 1, 4, 2, 2, 1, 52, 2, 5, // 41..50
];

#[derive(Debug, Clone)]
pub struct CatalogueGroup {
    pub label: String,
    pub group: Arc<FiniteGroup>,
}

/// In-memory catalogue: groups per order plus completeness declarations.
#[derive(Debug, Default)]
pub struct Catalogue {
    entries: BTreeMap<usize, Vec<CatalogueGroup>>,
    complete: BTreeSet<usize>,
    pub provenance: String,
}

impl Catalogue {
    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn complete_orders(&self) -> &BTreeSet<usize> {
        &self.complete
    }

    /// The stored groups of order `n` plus a flag telling whether the
    /// catalogue declares that order complete.
    pub fn groups_of_order(&self, n: usize) -> (&[CatalogueGroup], bool) {
        let list = self.entries.get(&n).map(|v| v.as_slice()).unwrap_or(&[]);
        (list, self.complete.contains(&n))
    }

    pub fn insert(&mut self, label: String, group: FiniteGroup) {
        self.entries
            .entry(group.order())
            .or_default()
            .push(CatalogueGroup {
                label,
                group: Arc::new(group),
            });
    }

    pub fn mark_complete(&mut self, order: usize) {
        self.complete.insert(order);
    }

    /// Restricts to orders `<= max_order`, dropping completeness flags above.
    pub fn restrict_to_max_order(&self, max_order: usize) -> Catalogue {
        Catalogue {
            entries: self
                .entries
                .iter()
                .filter(|(o, _)| **o <= max_order)
                .map(|(o, v)| (*o, v.clone()))
                .collect(),
            complete: self
                .complete
                .iter()
                .copied()
                .filter(|o| *o <= max_order)
                .collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Matches a group against the stored isomorphism classes of its order.
    pub fn match_label(&self, g: &FiniteGroup) -> Option<&str> {
        let (list, _) = self.groups_of_order(g.order());
        list.iter()
            .find(|c| g.is_isomorphic(&c.group).is_some())
            .map(|c| c.label.as_str())
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CatalogueFile {
    meta: CatalogueMeta,
    complete_orders: Vec<usize>,
    groups: Vec<CatalogueFileGroup>,
}

#[derive(Serialize, Deserialize)]
struct CatalogueMeta {
    provenance: String,
    /// Recorded per-order class counts; checked against the entries on load.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    class_counts: BTreeMap<usize, usize>,
}

#[derive(Serialize, Deserialize)]
struct CatalogueFileGroup {
    order: usize,
    label: String,
    degree: usize,
    generators: Vec<Vec<u32>>,
}

/// Loads and fully validates a catalogue file.
///
/// Every group is rebuilt from its permutation generators; the validator
/// checks order declarations, that entries within one order are pairwise
/// non-isomorphic, and that recorded class counts match the stored entries.
pub fn load_catalogue(path: &Path) -> Result<Catalogue, CatalogueError> {
    let text = std::fs::read_to_string(path)?;
    let file: CatalogueFile =
        serde_json::from_str(&text).map_err(|e| CatalogueError::ParseError(e.to_string()))?;
    let mut cat = Catalogue {
        provenance: file.meta.provenance.clone(),
        ..Default::default()
    };
    for entry in &file.groups {
        let gens = entry
            .generators
            .iter()
            .map(|v| {
                if v.len() != entry.degree {
                    return Err(CatalogueError::ValidationError(format!(
                        "generator degree mismatch in '{}'",
                        entry.label
                    )));
                }
                Perm::from_one_based(v).map_err(CatalogueError::Group)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let group = FiniteGroup::from_permutations(&gens, DEFAULT_ORDER_CAP, &entry.label)
            .map_err(CatalogueError::Group)?;
        if group.order() != entry.order {
            return Err(CatalogueError::ValidationError(format!(
                "entry '{}' declares order {} but generates order {}",
                entry.label,
                entry.order,
                group.order()
            )));
        }
        cat.insert(entry.label.clone(), group);
    }
    for order in file.complete_orders {
        cat.mark_complete(order);
    }
    validate_catalogue(&cat)?;
    for (&order, &count) in &file.meta.class_counts {
        let (list, _) = cat.groups_of_order(order);
        if list.len() != count {
            return Err(CatalogueError::ValidationError(format!(
                "order {order}: recorded class count {count} but file has {} entries",
                list.len()
            )));
        }
    }
    Ok(cat)
}

/// Structural validation: pairwise non-isomorphism within each order.
pub fn validate_catalogue(cat: &Catalogue) -> Result<(), CatalogueError> {
    for order in cat.orders().collect::<Vec<_>>() {
        let (list, _) = cat.groups_of_order(order);
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                if list[i].group.is_isomorphic(&list[j].group).is_some() {
                    return Err(CatalogueError::ValidationError(format!(
                        "order {order}: '{}' and '{}' are isomorphic",
                        list[i].label, list[j].label
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Serializes a catalogue with entries sorted by (order, label).
pub fn save_catalogue(
    cat: &Catalogue,
    path: &Path,
    class_counts: BTreeMap<usize, usize>,
) -> Result<(), CatalogueError> {
    let mut groups = Vec::new();
    for order in cat.orders().collect::<Vec<_>>() {
        let (list, _) = cat.groups_of_order(order);
        for c in list {
            // Prefer the original permutation realization; fall back to the
            // regular representation for table-built groups.
            let (degree, gens): (usize, Vec<Vec<u32>>) = match c.group.perm_generators() {
                Some((d, ps)) => (d, ps.iter().map(|p| p.to_one_based()).collect()),
                None => (
                    c.group.order(),
                    c.group
                        .generators()
                        .iter()
                        .map(|&g| c.group.regular_perm(g).to_one_based())
                        .collect(),
                ),
            };
            groups.push(CatalogueFileGroup {
                order,
                label: c.label.clone(),
                degree,
                generators: gens,
            });
        }
    }
    groups.sort_by(|a, b| (a.order, a.label.clone()).cmp(&(b.order, b.label.clone())));
    let file = CatalogueFile {
        meta: CatalogueMeta {
            provenance: cat.provenance.clone(),
            class_counts,
        },
        complete_orders: cat.complete_orders().iter().copied().collect(),
        groups,
    };
    let json = serde_json::to_string(&file).expect("catalogue serializes");
    std::fs::write(path, json)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Named constructions
// ---------------------------------------------------------------------------

/// Descriptors for the named groups used in classification tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedGroupDescriptor {
    Cyclic(u32),
    /// Dihedral group of order 2n.
    Dihedral(u32),
    /// Dicyclic group BD_n of order 4n: y^{2n} = 1, x^2 = y^n, x y x^{-1} = y^{-1}.
    Dicyclic(u32),
    /// Metacyclic D_{p,q,r} of order pq: x^p = y^q = 1, x y x^{-1} = y^r.
    Metacyclic { p: u32, q: u32, r: u32 },
    Alternating(u32),
    Symmetric(u32),
    DirectProduct(Vec<NamedGroupDescriptor>),
    /// Z_q rtimes Z_p with the generator acting by y -> y^r (the same
    /// presentation as `Metacyclic`).
    SemidirectCyclic { p: u32, q: u32, r: u32 },
}

/// Builds the group realizing a named presentation.
pub fn construct_named(d: &NamedGroupDescriptor) -> Result<FiniteGroup, CatalogueError> {
    use NamedGroupDescriptor::*;
    match d {
        Cyclic(n) => {
            if *n == 0 {
                return Err(CatalogueError::InconsistentPresentation("cyclic order 0".into()));
            }
            let images: Vec<u32> = (1..=*n).map(|i| i % n + 1).collect();
            let p = Perm::from_one_based(&images).map_err(CatalogueError::Group)?;
            FiniteGroup::from_permutations(&[p], DEFAULT_ORDER_CAP, &format!("Z{n}"))
                .map_err(CatalogueError::Group)
        }
        Dihedral(n) => {
            if *n == 0 {
                return Err(CatalogueError::InconsistentPresentation("dihedral order 0".into()));
            }
            if *n == 1 {
                return construct_named(&Cyclic(2));
            }
            let rot: Vec<u32> = (1..=*n).map(|i| i % n + 1).collect();
            let refl: Vec<u32> = (0..*n).map(|i| (n - i) % n + 1).collect();
            let ps = [
                Perm::from_one_based(&rot).map_err(CatalogueError::Group)?,
                Perm::from_one_based(&refl).map_err(CatalogueError::Group)?,
            ];
            FiniteGroup::from_permutations(&ps, DEFAULT_ORDER_CAP, &format!("D{n}"))
                .map_err(CatalogueError::Group)
        }
        Dicyclic(n) => {
            if *n == 0 {
                return Err(CatalogueError::InconsistentPresentation("dicyclic order 0".into()));
            }
            let zn2 = construct_named(&Cyclic(2 * n))?;
            let inv: Vec<u16> = (0..2 * *n as u16).map(|a| zn2.inv(a)).collect();
            let table = cyclic_extension_table(&zn2, &inv, *n as u16, 2);
            let label = if *n == 2 { "Q8".to_string() } else { format!("BD{n}") };
            FiniteGroup::from_table(table, vec![], &label).map_err(CatalogueError::Group)
        }
        Metacyclic { p, q, r } | SemidirectCyclic { p, q, r } => {
            if *p == 0 || *q == 0 {
                return Err(CatalogueError::InconsistentPresentation("zero parameter".into()));
            }
            // the action must satisfy r^p = 1 (mod q)
            let mut rp = 1u64;
            for _ in 0..*p {
                rp = rp * (*r as u64) % (*q as u64);
            }
            if rp != 1 {
                return Err(CatalogueError::InconsistentPresentation(format!(
                    "r^p = {r}^{p} is not 1 mod {q}"
                )));
            }
            let zq = construct_named(&Cyclic(*q))?;
            let phi: Vec<u16> = (0..*q as u16)
                .map(|a| ((a as u64 * *r as u64) % *q as u64) as u16)
                .collect();
            let table = cyclic_extension_table(&zq, &phi, 0, *p as usize);
            FiniteGroup::from_table(table, vec![], &format!("D({p},{q},{r})"))
                .map_err(CatalogueError::Group)
        }
        Alternating(n) => {
            if *n < 3 {
                return construct_named(&Cyclic(1));
            }
            let three: Vec<u32> = {
                let mut v: Vec<u32> = (1..=*n).collect();
                v[0] = 2;
                v[1] = 3;
                v[2] = 1;
                v
            };
            let long: Vec<u32> = if n % 2 == 1 {
                (1..=*n).map(|i| i % n + 1).collect()
            } else {
                // (2 3 ... n), an even permutation when n is even
                let mut v: Vec<u32> = (1..=*n).collect();
                for i in 1..*n as usize {
                    v[i] = (i as u32 % (n - 1)) + 2;
                }
                v
            };
            let ps = [
                Perm::from_one_based(&three).map_err(CatalogueError::Group)?,
                Perm::from_one_based(&long).map_err(CatalogueError::Group)?,
            ];
            FiniteGroup::from_permutations(&ps, DEFAULT_ORDER_CAP, &format!("A{n}"))
                .map_err(CatalogueError::Group)
        }
        Symmetric(n) => {
            if *n < 2 {
                return construct_named(&Cyclic(1));
            }
            let swap: Vec<u32> = {
                let mut v: Vec<u32> = (1..=*n).collect();
                v[0] = 2;
                v[1] = 1;
                v
            };
            let long: Vec<u32> = (1..=*n).map(|i| i % n + 1).collect();
            let ps = [
                Perm::from_one_based(&swap).map_err(CatalogueError::Group)?,
                Perm::from_one_based(&long).map_err(CatalogueError::Group)?,
            ];
            FiniteGroup::from_permutations(&ps, DEFAULT_ORDER_CAP, &format!("S{n}"))
                .map_err(CatalogueError::Group)
        }
        DirectProduct(parts) => {
            if parts.is_empty() {
                return construct_named(&Cyclic(1));
            }
            let mut acc = construct_named(&parts[0])?;
            for part in &parts[1..] {
                let next = construct_named(part)?;
                let label = format!("{}x{}", acc.label(), next.label());
                acc = FiniteGroup::direct_product(&acc, &next, &label);
            }
            Ok(acc)
        }
    }
}

// ---------------------------------------------------------------------------
// Cyclic extensions: every G with a normal subgroup N and cyclic quotient
// G/N = Z_p arises from a pair (phi, tau), phi in Aut(N), tau in N, with
// phi(tau) = tau and phi^p = conjugation by tau. Elements are a*x^i with
// x^p = tau and x a x^{-1} = phi(a).
// ---------------------------------------------------------------------------

/// Multiplication table of the extension of `n_group` by `Z_p` determined by
/// `(phi, tau)`. Element `(a, i) = a * x^i` has index `i * |N| + a`.
pub fn cyclic_extension_table(n_group: &FiniteGroup, phi: &[u16], tau: u16, p: usize) -> Vec<u16> {
    let n = n_group.order();
    let total = n * p;
    // phi_pows[i][a] = phi^i(a)
    let mut phi_pows: Vec<Vec<u16>> = vec![(0..n as u16).collect()];
    for i in 1..p {
        let prev = &phi_pows[i - 1];
        phi_pows.push((0..n).map(|a| phi[prev[a] as usize]).collect());
    }
    let mut table = vec![0u16; total * total];
    for i in 0..p {
        for a in 0..n as u16 {
            let row = i * n + a as usize;
            for j in 0..p {
                for b in 0..n as u16 {
                    let col = j * n + b as usize;
                    let mut prod = n_group.mul(a, phi_pows[i][b as usize]);
                    let mut deg = i + j;
                    if deg >= p {
                        deg -= p;
                        prod = n_group.mul(prod, tau);
                    }
                    table[row * total + col] = (deg * n + prod as usize) as u16;
                }
            }
        }
    }
    table
}

/// All automorphisms of `g`, each as a full image vector.
pub fn automorphisms(g: &FiniteGroup) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    g.for_each_isomorphism(g, &mut |m| {
        out.push(m.to_vec());
        true
    });
    out
}

/// All extensions of `n_group` by `Z_p`, deduplicated up to isomorphism.
pub fn cyclic_extensions(n_group: &FiniteGroup, p: usize) -> Vec<FiniteGroup> {
    let n = n_group.order();
    let auts = automorphisms(n_group);
    let conj_map: Vec<Vec<u16>> = (0..n as u16)
        .map(|t| (0..n as u16).map(|a| n_group.conj(t, a)).collect())
        .collect();
    let mut by_conj: HashMap<&[u16], Vec<u16>> = HashMap::new();
    for (t, m) in conj_map.iter().enumerate() {
        by_conj.entry(m.as_slice()).or_default().push(t as u16);
    }
    let mut raw: Vec<FiniteGroup> = Vec::new();
    for phi in &auts {
        let mut power: Vec<u16> = (0..n as u16).collect();
        for _ in 0..p {
            power = power.iter().map(|&a| phi[a as usize]).collect();
        }
        let Some(taus) = by_conj.get(power.as_slice()) else {
            continue;
        };
        for &tau in taus.iter() {
            if phi[tau as usize] != tau {
                continue;
            }
            let table = cyclic_extension_table(n_group, phi, tau, p);
            if let Ok(g) = FiniteGroup::from_table(table, vec![], "ext") {
                raw.push(g);
            }
        }
    }
    dedup_isomorphic(raw)
}

/// Keeps the first representative of each isomorphism class.
pub fn dedup_isomorphic(groups: Vec<FiniteGroup>) -> Vec<FiniteGroup> {
    let mut kept: Vec<FiniteGroup> = Vec::new();
    for g in groups {
        if kept.iter().all(|h| g.is_isomorphic(h).is_none()) {
            kept.push(g);
        }
    }
    kept
}

/// All groups of order `n` up to isomorphism, built recursively as cyclic
/// extensions by primes. Complete for n < 60 (every such group has a normal
/// subgroup of prime index) and for all 2-power orders.
pub fn generate_groups_of_order(
    n: usize,
    memo: &mut BTreeMap<usize, Vec<Arc<FiniteGroup>>>,
) -> Vec<Arc<FiniteGroup>> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    if n == 1 {
        let trivial =
            Arc::new(FiniteGroup::from_table(vec![0u16], vec![], "Z1").expect("trivial group"));
        memo.insert(1, vec![trivial.clone()]);
        return vec![trivial];
    }
    let mut candidates: Vec<FiniteGroup> = Vec::new();
    for p in prime_factors(n) {
        let kernels = generate_groups_of_order(n / p, memo);
        for k in kernels {
            candidates.extend(cyclic_extensions(&k, p));
        }
    }
    let deduped: Vec<Arc<FiniteGroup>> =
        dedup_isomorphic(candidates).into_iter().map(Arc::new).collect();
    memo.insert(n, deduped.clone());
    deduped
}

pub fn prime_factors(n: usize) -> Vec<usize> {
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    primes
}

// ---------------------------------------------------------------------------
// Exhaustive Cayley-table enumeration for small orders (independent oracle)
// ---------------------------------------------------------------------------

/// Exhaustively enumerates all groups of order `n` up to isomorphism by
/// backtracking over multiplication tables.
///
/// Symmetry pruning: labels are normalized so that element 1 has maximal
/// order `d`, the powers of 1 are the labels `0..d`, left translation by 1
/// cycles each block of `d` consecutive labels, and new blocks are first
/// referenced at their base label in scan order. Intended for `n <= 16`.
pub fn enumerate_small_groups(n: usize) -> Vec<FiniteGroup> {
    assert!((1..=16).contains(&n), "oracle enumeration is for orders 1..=16");
    if n == 1 {
        return vec![FiniteGroup::from_table(vec![0u16], vec![], "order1#1").expect("trivial")];
    }
    let mut found: Vec<FiniteGroup> = Vec::new();
    let mut divisors: Vec<usize> = (2..=n).filter(|d| n % d == 0).collect();
    divisors.sort_unstable_by(|a, b| b.cmp(a));
    let max_prime = *prime_factors(n).iter().max().unwrap();
    for d in divisors {
        if d < max_prime {
            continue; // an element of order max_prime always exists
        }
        let mut search = TableSearch::new(n, d);
        search.run(&mut found);
    }
    let mut out = dedup_isomorphic(found);
    out.sort_by(|a, b| a.fingerprint().cmp(b.fingerprint()));
    for (i, g) in out.iter_mut().enumerate() {
        g.set_label(&format!("order{n}#{}", i + 1));
    }
    out
}

const UNSET: u16 = u16::MAX;

/// Backtracking state for the table search of one (n, d) pass.
///
/// Labels are assigned in first-use order: 0 is the identity, 1 a maximal
/// order element with powers 0..d, and every further label enters either as
/// the value of the first undefined cell among already-used labels (scanned
/// row-major) or, when those cells are exhausted but the table is not full
/// (the used labels close under multiplication), as a forced new generator.
/// First-use naming is invariant under relabeling, so each isomorphism class
/// is produced a small number of times (once per orbit of generating data).
struct TableSearch {
    n: usize,
    d: usize,
    used: usize,
    table: Vec<u16>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
}

impl TableSearch {
    fn new(n: usize, d: usize) -> Self {
        let mut s = TableSearch {
            n,
            d,
            used: d,
            table: vec![UNSET; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
        };
        for a in 0..n {
            s.set(a, 0, a as u16);
            if a > 0 {
                s.set(0, a, a as u16);
            }
        }
        // labels 1..d are the powers of element 1: the cyclic corner is known
        for i in 1..d {
            for j in 1..d {
                s.set(i, j, ((i + j) % d) as u16);
            }
        }
        s
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> u16 {
        self.table[a * self.n + b]
    }

    fn set(&mut self, a: usize, b: usize, v: u16) {
        debug_assert_eq!(self.table[a * self.n + b], UNSET, "cell ({a},{b})");
        self.table[a * self.n + b] = v;
        self.row_used[a] |= 1 << v;
        self.col_used[b] |= 1 << v;
    }

    fn unset(&mut self, a: usize, b: usize) {
        let v = self.table[a * self.n + b];
        self.table[a * self.n + b] = UNSET;
        self.row_used[a] &= !(1 << v);
        self.col_used[b] &= !(1 << v);
    }

    /// Walks powers of x as far as defined; false if the order exceeds d.
    fn order_bound_ok(&self, x: usize) -> bool {
        if x == 0 {
            return true;
        }
        let mut power = x;
        for _ in 1..=self.d {
            if power == 0 {
                return true;
            }
            let next = self.get(power, x);
            if next == UNSET {
                return true;
            }
            power = next as usize;
        }
        // x^1 .. x^d are all non-identity
        false
    }

    /// First undefined cell with both coordinates among used labels.
    fn next_cell(&self) -> Option<(usize, usize)> {
        for a in 1..self.used {
            for b in 1..self.used {
                if self.get(a, b) == UNSET {
                    return Some((a, b));
                }
            }
        }
        None
    }

    fn run(&mut self, found: &mut Vec<FiniteGroup>) {
        self.search(found);
    }

    fn search(&mut self, found: &mut Vec<FiniteGroup>) {
        let Some((a, b)) = self.next_cell() else {
            if self.used == self.n {
                self.emit(found);
            } else {
                // the used labels close under multiplication: introduce the
                // next label as a new generator outside them
                self.used += 1;
                self.search(found);
                self.used -= 1;
            }
            return;
        };
        let avail = !(self.row_used[a] | self.col_used[b]);
        // candidate values: any available used label, or the next fresh label
        let limit = (self.used + usize::from(self.used < self.n)) as u16;
        for v in 0..limit {
            if avail & (1 << v) == 0 {
                continue;
            }
            let fresh = (v as usize) == self.used;
            if fresh {
                self.used += 1;
            }
            let mut trail: Vec<usize> = Vec::new();
            if self.assign(a, b, v, &mut trail) {
                self.search(found);
            }
            for &c in trail.iter().rev() {
                self.unset(c / self.n, c % self.n);
            }
            if fresh {
                self.used -= 1;
            }
        }
    }

    /// Sets a cell and cascades associativity consequences; false on conflict.
    fn assign(&mut self, a: usize, b: usize, v: u16, trail: &mut Vec<usize>) -> bool {
        if !self.place(a, b, v, trail) {
            return false;
        }
        let mut head = trail.len() - 1;
        while head < trail.len() {
            let cell = trail[head];
            head += 1;
            let (p, q) = (cell / self.n, cell % self.n);
            let c = self.get(p, q) as usize;
            if !(self.order_bound_ok(p) && self.order_bound_ok(q) && self.order_bound_ok(c)) {
                return false;
            }
            for x in 0..self.n {
                // (p q) x: c*x = p*(q*x)
                let qx = self.get(q, x);
                if qx != UNSET {
                    let lhs = self.get(c, x);
                    let rhs = self.get(p, qx as usize);
                    match (lhs, rhs) {
                        (UNSET, UNSET) => {}
                        (UNSET, r) => {
                            if !self.place(c, x, r, trail) {
                                return false;
                            }
                        }
                        (l, UNSET) => {
                            if !self.place(p, qx as usize, l, trail) {
                                return false;
                            }
                        }
                        (l, r) => {
                            if l != r {
                                return false;
                            }
                        }
                    }
                }
                // x (p q): x*c = (x*p)*q
                let xp = self.get(x, p);
                if xp != UNSET {
                    let lhs = self.get(x, c);
                    let rhs = self.get(xp as usize, q);
                    match (lhs, rhs) {
                        (UNSET, UNSET) => {}
                        (UNSET, r) => {
                            if !self.place(x, c, r, trail) {
                                return false;
                            }
                        }
                        (l, UNSET) => {
                            if !self.place(xp as usize, q, l, trail) {
                                return false;
                            }
                        }
                        (l, r) => {
                            if l != r {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn place(&mut self, a: usize, b: usize, v: u16, trail: &mut Vec<usize>) -> bool {
        if self.row_used[a] & (1 << v) != 0 || self.col_used[b] & (1 << v) != 0 {
            return false;
        }
        self.set(a, b, v);
        trail.push(a * self.n + b);
        true
    }

    fn emit(&self, found: &mut Vec<FiniteGroup>) {
        let Ok(g) = FiniteGroup::from_table(self.table.clone(), vec![], "candidate") else {
            return;
        };
        // element 1 must realize the maximal element order
        let max_order = (0..self.n as u16).map(|x| g.element_order(x)).max().unwrap();
        if max_order as usize != self.d {
            return;
        }
        if found.iter().all(|h| g.is_isomorphic(h).is_none()) {
            found.push(g);
        }
    }
}

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

/// Invariant factors of an abelian group (d_1 | d_2 | ... | d_k), ascending.
pub fn abelian_invariant_factors(g: &FiniteGroup) -> Option<Vec<u32>> {
    if !g.is_abelian() {
        return None;
    }
    let n = g.order();
    let mut per_prime: Vec<Vec<u32>> = Vec::new();
    for p in prime_factors(n) {
        let p = p as u32;
        // #elements of order dividing p^k determines the partition
        let mut per_k_log: Vec<u32> = vec![0];
        let mut k = 1u32;
        loop {
            let pk = p.pow(k);
            let count = (0..n as u16).filter(|&x| pk % g.element_order(x) == 0).count() as u32;
            let mut c = count;
            let mut log = 0;
            while c % p == 0 {
                c /= p;
                log += 1;
            }
            if log == *per_k_log.last().unwrap() {
                break;
            }
            per_k_log.push(log);
            k += 1;
        }
        // parts >= k appear (log_k - log_{k-1}) times
        let mut at_least: Vec<u32> = Vec::new();
        for w in per_k_log.windows(2) {
            at_least.push(w[1] - w[0]);
        }
        let mut parts: Vec<u32> = Vec::new();
        for (j, &cnt) in at_least.iter().enumerate() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..cnt.saturating_sub(next) {
                parts.push(p.pow(j as u32 + 1));
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(parts);
    }
    let max_len = per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for i in 0..max_len {
        let mut f = 1u32;
        for parts in &per_prime {
            if let Some(&x) = parts.get(i) {
                f *= x;
            }
        }
        factors.push(f);
    }
    factors.reverse();
    Some(factors)
}

/// A readable label: abelian invariant factors, a few named families, else a
/// per-order index `SG(order, i)` (an internal numbering, not a database id).
pub fn recognized_label(g: &FiniteGroup, order_index: usize) -> String {
    if let Some(factors) = abelian_invariant_factors(g) {
        return factors
            .iter()
            .map(|f| format!("Z{f}"))
            .collect::<Vec<_>>()
            .join("x");
    }
    let n = g.order() as u32;
    if n % 2 == 0 {
        if let Ok(d) = construct_named(&NamedGroupDescriptor::Dihedral(n / 2)) {
            if g.is_isomorphic(&d).is_some() {
                return format!("D{}", n / 2);
            }
        }
    }
    if n % 4 == 0 {
        if let Ok(b) = construct_named(&NamedGroupDescriptor::Dicyclic(n / 4)) {
            if g.is_isomorphic(&b).is_some() {
                return if n == 8 { "Q8".into() } else { format!("BD{}", n / 4) };
            }
        }
    }
    if n == 12 {
        if let Ok(a) = construct_named(&NamedGroupDescriptor::Alternating(4)) {
            if g.is_isomorphic(&a).is_some() {
                return "A4".into();
            }
        }
    }
    if n == 24 {
        for (d, lab) in [
            (NamedGroupDescriptor::Symmetric(4), "S4"),
            (
                NamedGroupDescriptor::DirectProduct(vec![
                    NamedGroupDescriptor::Alternating(4),
                    NamedGroupDescriptor::Cyclic(2),
                ]),
                "A4xZ2",
            ),
        ] {
            if let Ok(h) = construct_named(&d) {
                if g.is_isomorphic(&h).is_some() {
                    return lab.into();
                }
            }
        }
    }
    if n <= 64 {
        for p in 2..n {
            if n % p != 0 {
                continue;
            }
            let q = n / p;
            if q < 3 {
                continue;
            }
            for r in 2..q {
                if let Ok(h) = construct_named(&NamedGroupDescriptor::Metacyclic { p, q, r }) {
                    if h.order() == n as usize && g.is_isomorphic(&h).is_some() {
                        return format!("D({p},{q},{r})");
                    }
                }
            }
        }
    }
    format!("SG({},{})", n, order_index)
}

/// Views a subgroup as a standalone group on its member positions.
pub fn subgroup_as_group(g: &FiniteGroup, s: &Subgroup, label: &str) -> FiniteGroup {
    let k = s.order();
    let mut table = vec![0u16; k * k];
    for (i, &a) in s.members.iter().enumerate() {
        for (j, &b) in s.members.iter().enumerate() {
            table[i * k + j] = s
                .position(g.mul(a, b))
                .expect("subgroup must be closed under products") as u16;
        }
    }
    FiniteGroup::from_table(table, vec![], label).expect("subgroup table is a group")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_group_counts_up_to_10() {
        let expected = [1usize, 1, 1, 2, 1, 2, 1, 5, 2, 2];
        for (i, &want) in expected.iter().enumerate() {
            let n = i + 1;
            assert_eq!(enumerate_small_groups(n).len(), want, "order {n}");
        }
    }

    #[test]
    fn small_group_counts_11_to_15() {
        for (n, want) in [(11, 1), (12, 5), (13, 1), (14, 2), (15, 1)] {
            assert_eq!(enumerate_small_groups(n).len(), want, "order {n}");
        }
    }

    #[test]
    fn small_group_count_16() {
        assert_eq!(enumerate_small_groups(16).len(), 14);
    }

    #[test]
    fn named_constructions() {
        let z4 = construct_named(&NamedGroupDescriptor::Cyclic(4)).unwrap();
        assert_eq!(z4.order(), 4);
        let d4 = construct_named(&NamedGroupDescriptor::Dihedral(4)).unwrap();
        assert_eq!(d4.order(), 8);
        let bd4 = construct_named(&NamedGroupDescriptor::Dicyclic(4)).unwrap();
        assert_eq!(bd4.order(), 16);
        // BD_n has exactly one element of order 2, namely y^n
        assert_eq!(bd4.elements_of_order(2).len(), 1);
        let q8 = construct_named(&NamedGroupDescriptor::Dicyclic(2)).unwrap();
        assert_eq!(q8.order(), 8);
        assert_eq!(q8.elements_of_order(2).len(), 1);
        let m = construct_named(&NamedGroupDescriptor::Metacyclic { p: 2, q: 8, r: 5 }).unwrap();
        assert_eq!(m.order(), 16);
        let a4 = construct_named(&NamedGroupDescriptor::Alternating(4)).unwrap();
        assert_eq!(a4.order(), 12);
        let s4 = construct_named(&NamedGroupDescriptor::Symmetric(4)).unwrap();
        assert_eq!(s4.order(), 24);
        let a5 = construct_named(&NamedGroupDescriptor::Alternating(5)).unwrap();
        assert_eq!(a5.order(), 60);
    }

    #[test]
    fn metacyclic_rejects_inconsistent_action() {
        let err = construct_named(&NamedGroupDescriptor::Metacyclic { p: 2, q: 8, r: 2 });
        assert!(matches!(err, Err(CatalogueError::InconsistentPresentation(_))));
    }

    #[test]
    fn metacyclic_d283_contains_dihedral_subgroup() {
        // <x, y^2> inside x^2 = y^8 = 1, x y x^{-1} = y^3 is dihedral of order 8
        let g = construct_named(&NamedGroupDescriptor::Metacyclic { p: 2, q: 8, r: 3 }).unwrap();
        assert_eq!(g.order(), 16);
        let d4 = construct_named(&NamedGroupDescriptor::Dihedral(4)).unwrap();
        let found = g
            .index_two_subgroups()
            .iter()
            .any(|s| subgroup_as_group(&g, s, "H").is_isomorphic(&d4).is_some());
        assert!(found);
    }

    #[test]
    fn extensions_reach_all_groups_of_order_8() {
        let mut memo = BTreeMap::new();
        assert_eq!(generate_groups_of_order(8, &mut memo).len(), 5);
    }

    #[test]
    fn extensions_match_oracle_up_to_12() {
        let mut memo = BTreeMap::new();
        for n in 1..=12usize {
            let by_ext = generate_groups_of_order(n, &mut memo);
            let by_tables = enumerate_small_groups(n);
            assert_eq!(by_ext.len(), by_tables.len(), "order {n}");
            for g in &by_tables {
                let matches = by_ext.iter().filter(|h| g.is_isomorphic(h).is_some()).count();
                assert_eq!(matches, 1, "order {n}");
            }
        }
    }

    #[test]
    fn abelian_labels() {
        let g = construct_named(&NamedGroupDescriptor::DirectProduct(vec![
            NamedGroupDescriptor::Cyclic(2),
            NamedGroupDescriptor::Cyclic(4),
        ]))
        .unwrap();
        assert_eq!(abelian_invariant_factors(&g), Some(vec![2, 4]));
        let g = construct_named(&NamedGroupDescriptor::DirectProduct(vec![
            NamedGroupDescriptor::Cyclic(2),
            NamedGroupDescriptor::Cyclic(3),
        ]))
        .unwrap();
        assert_eq!(abelian_invariant_factors(&g), Some(vec![6]));
        let g = construct_named(&NamedGroupDescriptor::DirectProduct(vec![
            NamedGroupDescriptor::Cyclic(2),
            NamedGroupDescriptor::Cyclic(2),
            NamedGroupDescriptor::Cyclic(2),
        ]))
        .unwrap();
        assert_eq!(abelian_invariant_factors(&g), Some(vec![2, 2, 2]));
    }
}

/// Test hook: number of completed tables in one (n, d) search pass.
#[doc(hidden)]
pub fn debug_table_pass(n: usize, d: usize) -> usize {
    let mut found = Vec::new();
    let mut s = TableSearch::new(n, d);
    s.run(&mut found);
    found.len()
}
