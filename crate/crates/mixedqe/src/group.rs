//! Finite-group arithmetic on dense multiplication tables.
//!
//! Groups are built once (from permutation generators or an explicit table)
//! and never mutated, so products are O(1) table lookups in every search
//! inner loop. Element 0 is always the identity. Groups built from
//! permutations number their elements by breadth-first closure from the
//! generators, which keeps outputs reproducible across runs and thread
//! schedules.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::GroupError;
use crate::perm::Perm;

pub const DEFAULT_ORDER_CAP: usize = 2048;

/// A finite group given by its full multiplication table.
#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major table: `table[a * order + b]` is the product `a * b`.
    table: Vec<u16>,
    inverse: Vec<u16>,
    generators: Vec<u16>,
    label: String,
    /// Original permutation realization, kept for catalogue I/O.
    perm_gens: Option<(usize, Vec<Perm>)>,
    orders: OnceLock<Vec<u32>>,
    classes: OnceLock<ConjClasses>,
    fingerprint: OnceLock<Fingerprint>,
}

#[derive(Debug, Clone)]
pub struct ConjClasses {
    /// Class id per element.
    pub class_of: Vec<u16>,
    /// Members per class, each sorted; class 0 is the identity class.
    pub classes: Vec<Vec<u16>>,
}

/// Cheap isomorphism-rejection data: equality is necessary for isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub order: usize,
    /// Sorted (element order, count) pairs.
    pub order_profile: Vec<(u32, u32)>,
    /// Sorted conjugacy class sizes.
    pub class_sizes: Vec<u32>,
    pub center_order: usize,
    pub derived_order: usize,
}

/// A subgroup stored as a sorted member list; the parent is passed explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    pub members: Vec<u16>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: u16) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Position of `x` in the sorted member list.
    pub fn position(&self, x: u16) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }
}

/// A map of groups recorded by the image of every source element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMap {
    pub images: Vec<u16>,
}

impl GroupMap {
    pub fn identity(order: usize) -> Self {
        GroupMap {
            images: (0..order as u16).collect(),
        }
    }

    pub fn apply(&self, x: u16) -> u16 {
        self.images[x as usize]
    }

    pub fn is_bijective(&self) -> bool {
        let n = self.images.len();
        let mut seen = vec![false; n];
        for &i in &self.images {
            if (i as usize) >= n || seen[i as usize] {
                return false;
            }
            seen[i as usize] = true;
        }
        true
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> GroupMap {
        let mut images = vec![0u16; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u16;
        }
        GroupMap { images }
    }

    /// `self` after `first`: x -> self(first(x)).
    pub fn compose(&self, first: &GroupMap) -> GroupMap {
        GroupMap {
            images: first.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    /// Checks multiplicativity between two explicit groups.
    pub fn is_homomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        let n = source.order();
        if self.images.len() != n {
            return false;
        }
        for a in 0..n as u16 {
            for b in 0..n as u16 {
                if self.apply(source.mul(a, b)) != target.mul(self.apply(a), self.apply(b)) {
                    return false;
                }
            }
        }
        true
    }
}

impl FiniteGroup {
    /// Builds the group generated by permutations via breadth-first closure.
    ///
    /// Element 0 is the identity; subsequent elements are numbered in BFS
    /// discovery order (right-multiplying by the generators in input order).
    pub fn from_permutations(gens: &[Perm], cap: usize, label: &str) -> Result<Self, GroupError> {
        if gens.is_empty() {
            return Self::from_permutations(&[Perm::identity(1)], cap, label);
        }
        let degree = gens.iter().map(|g| g.degree()).max().unwrap();
        let gens: Vec<Perm> = gens.iter().map(|g| g.extend_to(degree)).collect();
        let id = Perm::identity(degree);
        let mut elements: Vec<Perm> = vec![id.clone()];
        let mut index: HashMap<Perm, u16> = HashMap::new();
        index.insert(id, 0);
        // BFS closure; `elements` doubles as the queue.
        let mut head = 0usize;
        while head < elements.len() {
            let e = elements[head].clone();
            for g in &gens {
                let p = e.compose(g);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(GroupError::OrderCapExceeded { cap });
                    }
                    index.insert(p.clone(), elements.len() as u16);
                    elements.push(p);
                }
            }
            head += 1;
        }
        let n = elements.len();
        let gen_indices: Vec<u16> = gens.iter().map(|g| index[&g.extend_to(degree)]).collect();

        // Fill the table column-wise along BFS words: every element b > 0 was
        // first reached as b = b' * g, so t[a][b] = t[t[a][b'], g].
        let mut parent: Vec<(u16, u16)> = vec![(0, 0); n]; // (b', generator index)
        {
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut head = 0usize;
            let mut order_visit: Vec<u16> = vec![0];
            while head < order_visit.len() {
                let e = order_visit[head];
                for (gi, g) in gens.iter().enumerate() {
                    let p = index[&elements[e as usize].compose(g)];
                    if !seen[p as usize] {
                        seen[p as usize] = true;
                        parent[p as usize] = (e, gi as u16);
                        order_visit.push(p);
                    }
                }
                head += 1;
            }
            let mut table = vec![0u16; n * n];
            // Products with generators come from the permutation index once.
            let mut gen_col: Vec<Vec<u16>> = Vec::with_capacity(gens.len());
            for g in &gens {
                let col: Vec<u16> = elements.iter().map(|e| index[&e.compose(g)]).collect();
                gen_col.push(col);
            }
            for a in 0..n {
                table[a * n] = a as u16;
            }
            for &b in order_visit.iter().skip(1) {
                let (bp, gi) = parent[b as usize];
                if bp == 0 {
                    // b is a generator image: direct column.
                    for a in 0..n {
                        table[a * n + b as usize] = gen_col[gi as usize][a];
                    }
                } else {
                    for a in 0..n {
                        let ab_prime = table[a * n + bp as usize];
                        table[a * n + b as usize] = gen_col[gi as usize][ab_prime as usize];
                    }
                }
            }
            let mut inverse = vec![0u16; n];
            for a in 0..n {
                for b in 0..n {
                    if table[a * n + b] == 0 {
                        inverse[a] = b as u16;
                        break;
                    }
                }
            }
            Ok(FiniteGroup {
                order: n,
                table,
                inverse,
                generators: dedup_generators(gen_indices),
                label: label.to_string(),
                perm_gens: Some((degree, gens)),
                orders: OnceLock::new(),
                classes: OnceLock::new(),
                fingerprint: OnceLock::new(),
            })
        }
    }

    /// Builds a group from an explicit multiplication table.
    ///
    /// Checks identity, Latin property and inverses in full; associativity is
    /// checked in full up to order 256 and on 4096 deterministic triples above.
    pub fn from_table(table: Vec<u16>, generators: Vec<u16>, label: &str) -> Result<Self, GroupError> {
        let n2 = table.len();
        let n = (n2 as f64).sqrt() as usize;
        if n * n != n2 || n == 0 {
            return Err(GroupError::InvalidTable("table is not square".into()));
        }
        for a in 0..n {
            if table[a * n] != a as u16 || table[a] != a as u16 {
                return Err(GroupError::InvalidTable("element 0 is not the identity".into()));
            }
        }
        // Latin: each row and column is a permutation.
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let v = table[a * n + b] as usize;
                if v >= n || seen[v] {
                    return Err(GroupError::InvalidTable(format!("row {a} is not a permutation")));
                }
                seen[v] = true;
            }
        }
        for b in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..n {
                let v = table[a * n + b] as usize;
                if seen[v] {
                    return Err(GroupError::InvalidTable(format!("column {b} is not a permutation")));
                }
                seen[v] = true;
            }
        }
        let mut inverse = vec![u16::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    if table[b * n + a] != 0 {
                        return Err(GroupError::InvalidTable(format!("one-sided inverse at {a}")));
                    }
                    inverse[a] = b as u16;
                }
            }
        }
        let assoc = |a: usize, b: usize, c: usize| -> bool {
            let ab = table[a * n + b] as usize;
            let bc = table[b * n + c] as usize;
            table[ab * n + c] == table[a * n + bc]
        };
        if n <= 256 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(GroupError::InvalidTable(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..4096 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (state >> 33) as usize % n;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = (state >> 33) as usize % n;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let c = (state >> 33) as usize % n;
                if !assoc(a, b, c) {
                    return Err(GroupError::InvalidTable(format!(
                        "associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }
        let explicit = !generators.is_empty();
        let mut g = FiniteGroup {
            order: n,
            table,
            inverse,
            generators: dedup_generators(generators),
            label: label.to_string(),
            perm_gens: None,
            orders: OnceLock::new(),
            classes: OnceLock::new(),
            fingerprint: OnceLock::new(),
        };
        if g.generated_subgroup(&g.generators).order() != n {
            if explicit {
                return Err(GroupError::InvalidTable("generators do not generate".into()));
            }
            // no generators supplied: pick a small generating sequence
            g.generators = g.small_generating_sequence();
            if g.generators.is_empty() {
                g.generators.push(0);
            }
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: &str) {
        self.label = label.to_string();
    }

    pub fn generators(&self) -> &[u16] {
        &self.generators
    }

    pub fn perm_generators(&self) -> Option<(usize, &[Perm])> {
        self.perm_gens.as_ref().map(|(d, g)| (*d, g.as_slice()))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inverse[a as usize]
    }

    pub fn conj(&self, t: u16, x: u16) -> u16 {
        self.mul(self.mul(t, x), self.inv(t))
    }

    pub fn commutator(&self, a: u16, b: u16) -> u16 {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, x: u16, k: i64) -> u16 {
        let o = self.element_order(x) as i64;
        let mut k = k.rem_euclid(o);
        let mut acc = 0u16;
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Least k >= 1 with x^k = identity; divides the group order.
    pub fn element_order(&self, x: u16) -> u32 {
        self.orders()[x as usize]
    }

    pub fn orders(&self) -> &[u32] {
        self.orders.get_or_init(|| {
            (0..self.order as u16)
                .map(|x| {
                    let mut k = 1u32;
                    let mut y = x;
                    while y != 0 {
                        y = self.mul(y, x);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn elements_of_order(&self, m: u32) -> Vec<u16> {
        (0..self.order as u16).filter(|&x| self.element_order(x) == m).collect()
    }

    /// Smallest subgroup containing `seed`; its order divides the group order.
    pub fn generated_subgroup(&self, seed: &[u16]) -> Subgroup {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut members: Vec<u16> = vec![0];
        let mut head = 0;
        for &s in seed {
            if !in_set[s as usize] {
                in_set[s as usize] = true;
                members.push(s);
            }
        }
        while head < members.len() {
            let a = members[head];
            for &s in seed {
                let p = self.mul(a, s);
                if !in_set[p as usize] {
                    in_set[p as usize] = true;
                    members.push(p);
                }
                let q = self.mul(s, a);
                if !in_set[q as usize] {
                    in_set[q as usize] = true;
                    members.push(q);
                }
            }
            head += 1;
        }
        members.sort_unstable();
        debug_assert_eq!(self.order % members.len(), 0);
        Subgroup { members }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order as u16).collect(),
        }
    }

    pub fn is_subgroup(&self, h: &Subgroup) -> bool {
        if h.members.is_empty() || h.members[0] != 0 {
            return false;
        }
        let in_set: Vec<bool> = {
            let mut v = vec![false; self.order];
            for &m in &h.members {
                if (m as usize) >= self.order {
                    return false;
                }
                v[m as usize] = true;
            }
            v
        };
        h.members.iter().all(|&a| {
            in_set[self.inv(a) as usize]
                && h.members.iter().all(|&b| in_set[self.mul(a, b) as usize])
        })
    }

    /// Representatives of left cosets gH, one per coset: the minimum index.
    pub fn left_cosets(&self, h: &Subgroup) -> Result<Vec<u16>, GroupError> {
        if !self.is_subgroup(h) {
            return Err(GroupError::NotASubgroup);
        }
        let mut covered = vec![false; self.order];
        let mut reps = Vec::with_capacity(self.order / h.order());
        for g in 0..self.order as u16 {
            if !covered[g as usize] {
                reps.push(g);
                for &m in &h.members {
                    covered[self.mul(g, m) as usize] = true;
                }
            }
        }
        Ok(reps)
    }

    /// Index of the coset gH within the representative list.
    pub fn coset_index(&self, reps: &[u16], h: &Subgroup, g: u16) -> usize {
        // Minimum member of gH equals the coset representative.
        let min = h.members.iter().map(|&m| self.mul(g, m)).min().unwrap();
        reps.binary_search(&min).expect("coset representative must be listed")
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy_classes(&self) -> &ConjClasses {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![u16::MAX; n];
            let mut classes: Vec<Vec<u16>> = Vec::new();
            for x in 0..n as u16 {
                if class_of[x as usize] != u16::MAX {
                    continue;
                }
                let id = classes.len() as u16;
                let mut members = Vec::new();
                for t in 0..n as u16 {
                    let y = self.conj(t, x);
                    if class_of[y as usize] == u16::MAX {
                        class_of[y as usize] = id;
                        members.push(y);
                    }
                }
                members.sort_unstable();
                classes.push(members);
            }
            ConjClasses { class_of, classes }
        })
    }

    pub fn center(&self) -> Subgroup {
        let members: Vec<u16> = (0..self.order as u16)
            .filter(|&x| self.generators.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect();
        Subgroup { members }
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let mut comms: Vec<u16> = Vec::new();
        for a in 0..self.order as u16 {
            for b in 0..self.order as u16 {
                comms.push(self.commutator(a, b));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        self.generated_subgroup(&comms)
    }

    /// Subgroup generated by all squares; the quotient is elementary abelian
    /// of exponent 2, so it contains the derived subgroup.
    pub fn squares_subgroup(&self) -> Subgroup {
        let mut sq: Vec<u16> = (0..self.order as u16).map(|x| self.mul(x, x)).collect();
        sq.sort_unstable();
        sq.dedup();
        self.generated_subgroup(&sq)
    }

    /// All subgroups of index 2 (kernels of surjections onto Z_2).
    pub fn index_two_subgroups(&self) -> Vec<Subgroup> {
        let k = self.squares_subgroup();
        let idx = self.order / k.order();
        if idx < 2 {
            return Vec::new();
        }
        // Quotient V = G/K is elementary abelian of order 2^r; index-2
        // subgroups of G are preimages of its hyperplanes.
        let reps = self.left_cosets(&k).expect("squares subgroup is normal");
        let r = idx.trailing_zeros() as usize;
        debug_assert_eq!(1usize << r, idx);
        // Coset index map and a basis of V over F_2.
        let coset_of = |g: u16| self.coset_index(&reps, &k, g);
        let mut basis: Vec<u16> = Vec::new();
        let mut span: HashMap<usize, Vec<bool>> = HashMap::new(); // coset -> coordinates
        span.insert(0, vec![false; r]);
        for g in 0..self.order as u16 {
            if basis.len() == r {
                break;
            }
            let c = coset_of(g);
            if span.contains_key(&c) {
                continue;
            }
            // new basis vector: extend span
            let bi = basis.len();
            basis.push(g);
            let old: Vec<(usize, Vec<bool>)> = span.iter().map(|(k, v)| (*k, v.clone())).collect();
            for (cos, coords) in old {
                let rep = reps[cos];
                let sum = self.mul(rep, g);
                let c2 = coset_of(sum);
                let mut coords2 = coords.clone();
                coords2[bi] = true;
                span.insert(c2, coords2);
            }
        }
        // Hyperplanes = kernels of nonzero functionals on F_2^r.
        let mut out = Vec::new();
        for f in 1u32..(1 << r) {
            let mut members: Vec<u16> = Vec::with_capacity(self.order / 2);
            for g in 0..self.order as u16 {
                let coords = &span[&coset_of(g)];
                let mut dot = false;
                for (i, &c) in coords.iter().enumerate() {
                    if c && (f >> i) & 1 == 1 {
                        dot = !dot;
                    }
                }
                if !dot {
                    members.push(g);
                }
            }
            out.push(Subgroup { members });
        }
        out.sort();
        out.dedup();
        out
    }

    /// The automorphism h -> t h t^{-1} of the subgroup, recorded on member
    /// positions: `images[k]` is the parent index of `t * members[k] * t^{-1}`.
    pub fn conjugation_map(&self, t: u16, h: &Subgroup) -> Result<GroupMap, GroupError> {
        let images: Vec<u16> = h.members.iter().map(|&m| self.conj(t, m)).collect();
        if images.iter().any(|&y| !h.contains(y)) {
            return Err(GroupError::DoesNotNormalize);
        }
        Ok(GroupMap { images })
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        self.fingerprint.get_or_init(|| {
            let mut counts: HashMap<u32, u32> = HashMap::new();
            for x in 0..self.order as u16 {
                *counts.entry(self.element_order(x)).or_insert(0) += 1;
            }
            let mut order_profile: Vec<(u32, u32)> = counts.into_iter().collect();
            order_profile.sort_unstable();
            let mut class_sizes: Vec<u32> =
                self.conjugacy_classes().classes.iter().map(|c| c.len() as u32).collect();
            class_sizes.sort_unstable();
            Fingerprint {
                order: self.order,
                order_profile,
                class_sizes,
                center_order: self.center().order(),
                derived_order: self.derived_subgroup().order(),
            }
        })
    }

    /// A small generating sequence chosen greedily (large orders first).
    pub fn small_generating_sequence(&self) -> Vec<u16> {
        let mut best: Vec<u16> = Vec::new();
        let mut closure = Subgroup { members: vec![0] };
        let mut candidates: Vec<u16> = (1..self.order as u16).collect();
        candidates.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        while closure.order() < self.order {
            let mut advanced = false;
            for &c in &candidates {
                if !closure.contains(c) {
                    best.push(c);
                    let mut seed = best.clone();
                    seed.extend_from_slice(&closure.members);
                    closure = self.generated_subgroup(&seed);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        best
    }

    /// Finds an isomorphism onto `other`, if one exists.
    ///
    /// Fingerprint mismatch rejects immediately; otherwise a backtracking
    /// search maps a small generating sequence onto order-compatible targets,
    /// propagating partial products and pruning on any inconsistency.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> Option<GroupMap> {
        if self.order != other.order {
            return None;
        }
        if self.fingerprint() != other.fingerprint() {
            return None;
        }
        let mut result = None;
        self.isomorphism_search(other, true, &mut |m| {
            result = Some(GroupMap { images: m.to_vec() });
            false
        });
        result
    }

    /// Enumerates all isomorphisms onto `other` (all automorphisms when
    /// `other` is `self`). The callback returns `false` to stop early.
    pub fn for_each_isomorphism(&self, other: &FiniteGroup, f: &mut dyn FnMut(&[u16]) -> bool) {
        if self.order != other.order || self.fingerprint() != other.fingerprint() {
            return;
        }
        self.isomorphism_search(other, false, f);
    }

    /// Finds an isomorphism `self -> other` mapping the member set of `s1`
    /// exactly onto that of `s2` (an isomorphism of pairs).
    pub fn find_pair_isomorphism(
        &self,
        other: &FiniteGroup,
        s1: &Subgroup,
        s2: &Subgroup,
    ) -> Option<GroupMap> {
        if self.order != other.order
            || s1.order() != s2.order()
            || self.fingerprint() != other.fingerprint()
        {
            return None;
        }
        let mut result = None;
        self.isomorphism_search(other, false, &mut |m| {
            let ok = s1
                .members
                .iter()
                .all(|&x| s2.contains(m[x as usize]));
            if ok {
                result = Some(GroupMap { images: m.to_vec() });
                false
            } else {
                true
            }
        });
        result
    }

    fn isomorphism_search(
        &self,
        other: &FiniteGroup,
        seed_by_class: bool,
        emit: &mut dyn FnMut(&[u16]) -> bool,
    ) -> bool {
        let gens = self.small_generating_sequence();
        if gens.is_empty() {
            // trivial group
            return !emit(&[0u16]);
        }
        let self_classes = self.conjugacy_classes();
        let other_classes = other.conjugacy_classes();
        // Candidate targets per generator: same order and class size.
        let mut candidates: Vec<Vec<u16>> = Vec::with_capacity(gens.len());
        for (gi, &g) in gens.iter().enumerate() {
            let go = self.element_order(g);
            let gc = self_classes.classes[self_classes.class_of[g as usize] as usize].len();
            let mut cands: Vec<u16> = (0..other.order as u16)
                .filter(|&h| {
                    other.element_order(h) == go
                        && other_classes.classes[other_classes.class_of[h as usize] as usize].len() == gc
                })
                .collect();
            // For a pure existence search the image of the first generator can
            // be fixed up to conjugacy in the target.
            if gi == 0 && seed_by_class {
                let mut seen_class = vec![false; other_classes.classes.len()];
                cands.retain(|&h| {
                    let c = other_classes.class_of[h as usize] as usize;
                    if seen_class[c] {
                        false
                    } else {
                        seen_class[c] = true;
                        true
                    }
                });
            }
            candidates.push(cands);
        }
        let mut img: Vec<u16> = vec![u16::MAX; self.order];
        let mut used: Vec<bool> = vec![false; self.order];
        img[0] = 0;
        used[0] = true;
        let mut known: Vec<u16> = vec![0];
        self.extend_map(other, &gens, &candidates, 0, &mut img, &mut used, &mut known, emit)
    }

    /// Returns true when enumeration was stopped early by the callback.
    #[allow(clippy::too_many_arguments)]
    fn extend_map(
        &self,
        other: &FiniteGroup,
        gens: &[u16],
        candidates: &[Vec<u16>],
        level: usize,
        img: &mut Vec<u16>,
        used: &mut Vec<bool>,
        known: &mut Vec<u16>,
        emit: &mut dyn FnMut(&[u16]) -> bool,
    ) -> bool {
        if level == gens.len() {
            debug_assert_eq!(known.len(), self.order);
            return !emit(img);
        }
        let g = gens[level];
        let known_mark = known.len();
        for &h in &candidates[level] {
            if used[h as usize] || img[g as usize] != u16::MAX {
                // Image may already be forced by closure of earlier generators.
                if img[g as usize] != u16::MAX {
                    if img[g as usize] == h || candidates[level].contains(&img[g as usize]) {
                        // forced: recurse once with the forced value
                        if self.extend_map(other, gens, candidates, level + 1, img, used, known, emit) {
                            return true;
                        }
                    }
                    return false;
                }
                continue;
            }
            // assign and propagate closure under products with known elements
            let mut added: Vec<u16> = Vec::new();
            img[g as usize] = h;
            used[h as usize] = true;
            added.push(g);
            known.push(g);
            let mut ok = true;
            let mut head = known_mark;
            'prop: while head < known.len() {
                let a = known[head];
                head += 1;
                // products a*x and x*a for every known x must stay consistent
                for idx in 0..known.len() {
                    let x = known[idx];
                    for (p, q) in [(a, x), (x, a)] {
                        let prod = self.mul(p, q);
                        let want = other.mul(img[p as usize], img[q as usize]);
                        let cur = img[prod as usize];
                        if cur == u16::MAX {
                            if used[want as usize] {
                                ok = false;
                                break 'prop;
                            }
                            img[prod as usize] = want;
                            used[want as usize] = true;
                            added.push(prod);
                            known.push(prod);
                        } else if cur != want {
                            ok = false;
                            break 'prop;
                        }
                    }
                }
            }
            if ok && self.extend_map(other, gens, candidates, level + 1, img, used, known, emit) {
                return true;
            }
            // undo
            for &e in &added {
                used[img[e as usize] as usize] = false;
                img[e as usize] = u16::MAX;
            }
            known.truncate(known_mark);
        }
        false
    }

    /// Direct product with component-wise multiplication; element (a, b) has
    /// index a * |B| + b.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, label: &str) -> FiniteGroup {
        let n = a.order * b.order;
        let mut table = vec![0u16; n * n];
        let enc = |x: u16, y: u16| x as usize * b.order + y as usize;
        for x1 in 0..a.order as u16 {
            for y1 in 0..b.order as u16 {
                for x2 in 0..a.order as u16 {
                    for y2 in 0..b.order as u16 {
                        table[enc(x1, y1) * n + enc(x2, y2)] =
                            enc(a.mul(x1, x2), b.mul(y1, y2)) as u16;
                    }
                }
            }
        }
        let mut gens: Vec<u16> = a.generators.iter().map(|&g| enc(g, 0) as u16).collect();
        gens.extend(b.generators.iter().map(|&g| enc(0, g) as u16));
        FiniteGroup::from_table(table, gens, label).expect("direct product of groups is a group")
    }

    /// Permutation of the regular representation for element x (left
    /// translation), used to serialize table-built groups.
    pub fn regular_perm(&self, x: u16) -> Perm {
        let images: Vec<u16> = (0..self.order as u16).map(|a| self.mul(x, a)).collect();
        Perm::from_images(images).expect("rows of a group table are permutations")
    }

    /// Permutation realization of an element, available when the group was
    /// built from permutation generators.
    pub fn element_perm(&self, x: u16) -> Option<Perm> {
        let (degree, gens) = self.perm_gens.as_ref()?;
        // Recompute BFS words: parent pointers along the same closure order.
        let id = Perm::identity(*degree);
        let mut elements: Vec<Perm> = vec![id.clone()];
        let mut index: HashMap<Perm, u16> = HashMap::new();
        index.insert(id, 0);
        let mut head = 0usize;
        while head < elements.len() {
            let e = elements[head].clone();
            for g in gens {
                let p = e.compose(g);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len() as u16);
                    elements.push(p);
                }
            }
            head += 1;
        }
        elements.into_iter().nth(x as usize)
    }
}

fn dedup_generators(gens: Vec<u16>) -> Vec<u16> {
    let mut out = Vec::new();
    for g in gens {
        if g != 0 && !out.contains(&g) {
            out.push(g);
        }
    }
    if out.is_empty() {
        out.push(0);
    }
    out
}

/// Convenience: builds from 1-based generator image lists.
pub fn build_group(perm_images: &[Vec<u32>], cap: usize, label: &str) -> Result<FiniteGroup, GroupError> {
    let gens = perm_images
        .iter()
        .map(|v| Perm::from_one_based(v))
        .collect::<Result<Vec<_>, _>>()?;
    FiniteGroup::from_permutations(&gens, cap, label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> FiniteGroup {
        let images: Vec<u32> = (1..=n).map(|i| i % n + 1).collect();
        build_group(&[images], DEFAULT_ORDER_CAP, &format!("Z{n}")).unwrap()
    }

    fn d4() -> FiniteGroup {
        build_group(&[vec![2, 3, 4, 1], vec![2, 1, 4, 3]], DEFAULT_ORDER_CAP, "D4").unwrap()
    }

    fn q8() -> FiniteGroup {
        // i = (1 2 3 4)(5 6 7 8), j = (1 5 3 7)(2 8 4 6)
        build_group(
            &[vec![2, 3, 4, 1, 6, 7, 8, 5], vec![5, 8, 7, 6, 3, 2, 1, 4]],
            DEFAULT_ORDER_CAP,
            "Q8",
        )
        .unwrap()
    }

    #[test]
    fn builds_transposition_as_z2() {
        let g = build_group(&[vec![2, 1]], DEFAULT_ORDER_CAP, "Z2").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.element_order(1), 2);
    }

    #[test]
    fn builds_z4_from_four_cycle() {
        let g = z(4);
        assert_eq!(g.order(), 4);
        assert_eq!(g.element_order(0), 1);
        assert_eq!(g.element_order(1), 4);
    }

    #[test]
    fn builds_dihedral_of_order_8() {
        let g = d4();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
    }

    #[test]
    fn order_cap_is_enforced() {
        let err = build_group(&[vec![2, 3, 4, 5, 1]], 4, "Z5").unwrap_err();
        assert_eq!(err, GroupError::OrderCapExceeded { cap: 4 });
    }

    #[test]
    fn element_orders_divide_group_order() {
        for g in [z(6), d4(), q8()] {
            for x in 0..g.order() as u16 {
                assert_eq!(g.order() as u32 % g.element_order(x), 0);
                assert_eq!(g.element_order(x), g.element_order(g.inv(x)));
            }
        }
    }

    #[test]
    fn generated_subgroup_of_empty_seed_is_trivial() {
        let g = z(4);
        assert_eq!(g.generated_subgroup(&[]).order(), 1);
        let t = g.elements_of_order(2)[0];
        assert_eq!(g.generated_subgroup(&[t]).order(), 2);
    }

    #[test]
    fn lagrange_for_generated_subgroups() {
        let g = d4();
        for x in 0..8u16 {
            for y in 0..8u16 {
                let h = g.generated_subgroup(&[x, y]);
                assert_eq!(g.order() % h.order(), 0);
            }
        }
    }

    #[test]
    fn left_cosets_are_disjoint_and_deterministic() {
        let g = z(4);
        assert_eq!(g.left_cosets(&g.full_subgroup()).unwrap(), vec![0]);
        let trivial = g.generated_subgroup(&[]);
        assert_eq!(g.left_cosets(&trivial).unwrap().len(), 4);
        let h = g.generated_subgroup(&[g.elements_of_order(2)[0]]);
        let reps = g.left_cosets(&h).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], 0);
    }

    #[test]
    fn not_a_subgroup_is_reported() {
        let g = z(4);
        let bad = Subgroup { members: vec![0, 1] };
        assert_eq!(g.left_cosets(&bad).unwrap_err(), GroupError::NotASubgroup);
    }

    #[test]
    fn z4_and_z2z2_are_not_isomorphic() {
        let z4 = z(4);
        let z2z2 = build_group(&[vec![2, 1], vec![1, 2, 4, 3]], DEFAULT_ORDER_CAP, "Z2xZ2").unwrap();
        assert!(z4.is_isomorphic(&z2z2).is_none());
    }

    #[test]
    fn z4_on_different_degrees_is_isomorphic() {
        let a = z(4);
        let b = build_group(&[vec![2, 3, 4, 1, 6, 5]], DEFAULT_ORDER_CAP, "Z4'").unwrap();
        // (123456)-squared trick: a 4-cycle times a transposition has order 4
        assert_eq!(b.order(), 4);
        let m = a.is_isomorphic(&b).expect("isomorphic");
        assert!(m.is_homomorphism(&a, &b));
        assert!(m.is_bijective());
    }

    #[test]
    fn d4_and_q8_are_not_isomorphic() {
        // distinct counts of order-2 elements (5 vs 1)
        assert!(d4().is_isomorphic(&q8()).is_none());
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric() {
        for g in [z(6), d4(), q8()] {
            assert!(g.is_isomorphic(&g).is_some());
        }
        let a = d4();
        let b = build_group(&[vec![2, 1, 3, 4], vec![1, 2, 4, 3], vec![3, 4, 1, 2]], 64, "D4'").unwrap();
        assert_eq!(b.order(), 8);
        assert_eq!(a.is_isomorphic(&b).is_some(), b.is_isomorphic(&a).is_some());
    }

    #[test]
    fn conjugation_map_basics() {
        let g = d4();
        let full = g.full_subgroup();
        let id_map = g.conjugation_map(0, &full).unwrap();
        assert_eq!(id_map.images, (0..8u16).collect::<Vec<_>>());
        // rotation subgroup is normal; conjugation by a reflection inverts it
        let r = (0..8u16).find(|&x| g.element_order(x) == 4).unwrap();
        let rot = g.generated_subgroup(&[r]);
        let refl = (0..8u16)
            .find(|&x| g.element_order(x) == 2 && !rot.contains(x))
            .unwrap();
        let m = g.conjugation_map(refl, &rot).unwrap();
        for (k, &x) in rot.members.iter().enumerate() {
            assert_eq!(m.images[k], g.inv(x));
        }
        // conjugating twice by t and t^{-1} is the identity on the subgroup
        let m2 = g.conjugation_map(g.inv(refl), &rot).unwrap();
        for (k, &x) in rot.members.iter().enumerate() {
            let once = m.images[k];
            let pos = rot.position(once).unwrap();
            assert_eq!(m2.images[pos], x);
        }
    }

    #[test]
    fn abelian_conjugation_is_identity() {
        let g = z(6);
        let full = g.full_subgroup();
        for t in 0..6u16 {
            let m = g.conjugation_map(t, &full).unwrap();
            assert_eq!(m.images, (0..6u16).collect::<Vec<_>>());
        }
    }

    #[test]
    fn index_two_subgroups_of_d4() {
        let g = d4();
        let subs = g.index_two_subgroups();
        // D4 has exactly three subgroups of index 2
        assert_eq!(subs.len(), 3);
        for s in &subs {
            assert_eq!(s.order(), 4);
            assert!(g.is_subgroup(s));
        }
    }

    #[test]
    fn direct_product_orders() {
        let g = FiniteGroup::direct_product(&z(2), &z(4), "Z2xZ4");
        assert_eq!(g.order(), 8);
        let profile = &g.fingerprint().order_profile;
        // Z2 x Z4: orders 1,2,2,2,4,4,4,4
        assert_eq!(profile, &vec![(1, 1), (2, 3), (4, 4)]);
    }

    #[test]
    fn associativity_spot_check_random_triples() {
        let g = q8();
        let mut state = 12345u64;
        for _ in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let a = ((state >> 20) % 8) as u16;
            let b = ((state >> 30) % 8) as u16;
            let c = ((state >> 40) % 8) as u16;
            assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        }
    }
}
