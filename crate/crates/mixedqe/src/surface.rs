//! Singular locus and invariants of one candidate surface.
//!
//! For a candidate `(G^0, generating vector, extension)` the singular points
//! of the intermediate quotient `Y = (C x C)/G^0` sit over pairs of branch
//! points: the fibre over `(p_i, p_j)` is `G^0/K_i x G^0/K_j` with the
//! twisted action `g (a K_i, b K_j) = (g a K_i, phi(g) b K_j)`, whose orbits
//! with nontrivial stabilizer are the singular points. The stabilizer of
//! `(K_i, g K_j)` is `K_i cap phi^-1(g K_j g^-1)`, cyclic of some order `n`,
//! and the local type `C_{n,a}` follows from matching rotation exponents of
//! the stabilizer generator on the two factors. The factor-exchange
//! involution fixes exactly the diagonal points passing the two-membership
//! test below; fixed points map to branch-type `D` classes of `X`, all other
//! points pair off two to one into `C` classes.

use std::collections::HashMap;

use crate::covers::{genus_of_cover, GeneratingVector};
use crate::error::SurfaceError;
use crate::group::{FiniteGroup, GroupMap, Subgroup};
use crate::rat::{as_integer, int, rat, Rat};
use crate::search::Basket;
use crate::sing::{make_class, Flavor, GraphShape, SingularityClass};

/// One candidate surface datum over the abstract kernel group.
#[derive(Debug, Clone)]
pub struct MixedData<'a> {
    pub g0: &'a FiniteGroup,
    pub vector: GeneratingVector,
    /// Factor-exchange automorphism of the kernel (conjugation by tau').
    pub phi: GroupMap,
    /// tau'^2 inside the kernel.
    pub tau: u16,
}

impl<'a> MixedData<'a> {
    pub fn ord_g(&self) -> i64 {
        2 * self.g0.order() as i64
    }

    pub fn genus(&self) -> i64 {
        let orders: Vec<i64> = self
            .vector
            .tail
            .iter()
            .map(|&h| self.g0.element_order(h) as i64)
            .collect();
        genus_of_cover(self.g0.order() as i64, self.vector.q() as i64, &orders)
            .expect("a valid vector has integral covering genus")
    }
}

/// A singular point of the intermediate quotient.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SingularPointY {
    /// Branch-pair indices (0-based into the tail).
    pub i: usize,
    pub j: usize,
    /// Coset representative of the orbit in the slice {K_i} x G^0/K_j.
    pub rep: u16,
    pub n: i64,
    pub a: i64,
    /// Fixed by the factor-exchange involution (diagonal pairs only).
    pub fixed: bool,
}

/// The membership test for fixedness under the factor exchange: a diagonal
/// point `[g]` is fixed iff some `h` satisfies `phi(h) tau h in K_i` and
/// `phi(h) g in K_i`.
pub fn fixed_point_test(
    data: &MixedData,
    i: usize,
    j: usize,
    g: u16,
) -> Result<bool, SurfaceError> {
    if i != j {
        return Err(SurfaceError::NotDiagonal);
    }
    let group = data.g0;
    let hi = data.vector.tail[i];
    let ki = group.generated_subgroup(&[hi]);
    Ok((0..group.order() as u16).any(|h| {
        let ph = data.phi.apply(h);
        ki.contains(group.mul(group.mul(ph, data.tau), h)) && ki.contains(group.mul(ph, g))
    }))
}

/// Singular points of `Y` over every ordered pair of branch indices, smooth
/// orbits omitted.
pub fn singular_points_y(data: &MixedData) -> Vec<SingularPointY> {
    let group = data.g0;
    let r = data.vector.tail.len();
    let mut out = Vec::new();
    for i in 0..r {
        let hi = data.vector.tail[i];
        let ki = group.generated_subgroup(&[hi]);
        let phi_ki: Vec<u16> = ki.members.iter().map(|&k| data.phi.apply(k)).collect();
        for j in 0..r {
            let hj = data.vector.tail[j];
            let kj = group.generated_subgroup(&[hj]);
            let reps = group.left_cosets(&kj).expect("cyclic subgroup");
            // orbits of left multiplication by phi(K_i) on G0/K_j
            let mut orbit_of = vec![usize::MAX; reps.len()];
            for (start, &g_rep) in reps.iter().enumerate() {
                if orbit_of[start] != usize::MAX {
                    continue;
                }
                let mut stack = vec![g_rep];
                orbit_of[start] = start;
                while let Some(g) = stack.pop() {
                    for &pk in &phi_ki {
                        let idx = group.coset_index(&reps, &kj, group.mul(pk, g));
                        if orbit_of[idx] == usize::MAX {
                            orbit_of[idx] = start;
                            stack.push(reps[idx]);
                        }
                    }
                }
                let g = g_rep;
                // stabilizer order n = |K_i cap phi^-1(g K_j g^-1)|
                let in_gkjg = |x: u16| kj.contains(group.mul(group.mul(group.inv(g), x), g));
                let n = ki
                    .members
                    .iter()
                    .filter(|&&k| in_gkjg(data.phi.apply(k)))
                    .count() as i64;
                if n == 1 {
                    continue;
                }
                let (n_got, a) = rotation_type(data, hi, hj, g);
                debug_assert_eq!(n, n_got);
                let fixed = i == j && fixed_point_test(data, i, j, g).expect("diagonal");
                out.push(SingularPointY {
                    i,
                    j,
                    rep: g,
                    n,
                    a,
                    fixed,
                });
            }
        }
    }
    out.sort();
    out
}

/// The local type at the orbit of `(K_i, g K_j)`: `delta` is the least
/// positive exponent with `h_i^delta = g phi^-1(h_j^gamma) g^-1` for some
/// `gamma` in `1..=ord(h_j)`; then `n = ord(h_i)/delta` and
/// `a = n gamma / ord(h_j)`.
fn rotation_type(data: &MixedData, hi: u16, hj: u16, g: u16) -> (i64, i64) {
    let group = data.g0;
    let mi = group.element_order(hi) as i64;
    let mj = group.element_order(hj) as i64;
    let mut power = 0u16;
    for delta in 1..=mi {
        power = group.mul(power, hi);
        // h_i^delta conjugated back: w = g^-1 h_i^delta g, want phi(w) = h_j^gamma
        let w = group.mul(group.mul(group.inv(g), power), g);
        let target = data.phi.apply(w);
        let mut hj_pow = 0u16;
        for gamma in 1..=mj {
            hj_pow = group.mul(hj_pow, hj);
            if hj_pow == target {
                let n = mi / delta;
                assert_eq!(n * gamma % mj, 0, "gamma matching must be exact");
                let a = n * gamma / mj;
                return (n, a);
            }
        }
    }
    unreachable!("delta = ord(h_i) always matches gamma = ord(h_j)")
}

/// Assembles the basket of `X`: diagonal fixed points become branch-type `D`
/// classes; everything else pairs off two to one into `C` classes, counted
/// within each analytic type.
pub fn assemble_basket_x(data: &MixedData) -> Result<Basket, SurfaceError> {
    let points = singular_points_y(data);
    let mut classes: Vec<(SingularityClass, usize)> = Vec::new();
    let mut add = |cls: SingularityClass, count: usize| {
        if let Some(entry) = classes.iter_mut().find(|(c, _)| *c == cls) {
            entry.1 += count;
        } else {
            classes.push((cls, count));
        }
    };
    // diagonal fixed points: one D class each
    for p in points.iter().filter(|p| p.fixed) {
        let cls = make_class(Flavor::D, p.n, p.a)
            .expect("points fixed by the factor exchange satisfy branch-type admissibility");
        add(cls, 1);
    }
    // non-fixed points pair off inside (diagonal i, type) and across
    // unordered pairs {i, j}
    let mut buckets: HashMap<(usize, usize, i64, i64), usize> = HashMap::new();
    for p in points.iter().filter(|p| !p.fixed) {
        let cls = make_class(Flavor::C, p.n, p.a).expect("stabilizer types are admissible");
        let (lo, hi) = if p.i <= p.j { (p.i, p.j) } else { (p.j, p.i) };
        *buckets.entry((lo, hi, cls.n, cls.a)).or_insert(0) += 1;
    }
    let mut keys: Vec<_> = buckets.keys().copied().collect();
    keys.sort();
    for key in keys {
        let count = buckets[&key];
        let (_, _, n, a) = key;
        if count % 2 != 0 {
            return Err(SurfaceError::PairingParityError { n, a, count });
        }
        let cls = make_class(Flavor::C, n, a).expect("already built above");
        add(cls, count / 2);
    }
    Ok(Basket::from_classes(classes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimalityTag {
    Minimal,
    Unknown,
}

/// Invariants of the resolved surface.
#[derive(Debug, Clone)]
pub struct SurfaceInvariants {
    pub k2: i64,
    pub euler: i64,
    pub chi: i64,
    pub p_g: i64,
    pub q: i64,
    pub d_count: usize,
    pub genus: i64,
    pub ord_g: i64,
    pub minimal: MinimalityTag,
}

/// Computes all invariants from the candidate and its assembled basket.
///
/// `K^2 = 8 (g-1)^2 / |G| - k(B)` and `e = 4 (g-1)^2 / |G| + e(B)`; Noether
/// gives `12 chi = K^2 + e`, `q` is the base genus and `p_g = chi - 1 + q`.
/// The minimality tag is `Minimal` for irregular surfaces, and for regular
/// ones when every exceptional curve has self-intersection -2 or -3 or the
/// basket is exactly `{2 x C(4,1), 3 x C(2,1)}`.
pub fn surface_invariants(
    data: &MixedData,
    basket: &Basket,
) -> Result<SurfaceInvariants, SurfaceError> {
    let genus = data.genus();
    let ord_g = data.ord_g();
    let gg = int((genus - 1) * (genus - 1));
    let k2_rat = rat(8, ord_g) * gg - basket.k;
    let e_rat = rat(4, ord_g) * gg + basket.e;
    let (Some(k2), Some(euler)) = (as_integer(&k2_rat), as_integer(&e_rat)) else {
        return Err(SurfaceError::NoetherViolation);
    };
    if (k2 + euler) % 12 != 0 {
        return Err(SurfaceError::NoetherViolation);
    }
    let chi = (k2 + euler) / 12;
    let q = data.vector.q() as i64;
    let p_g = chi - 1 + q;
    let minimal = if q >= 1 {
        MinimalityTag::Minimal
    } else if regular_minimality(basket) {
        MinimalityTag::Minimal
    } else {
        MinimalityTag::Unknown
    };
    Ok(SurfaceInvariants {
        k2,
        euler,
        chi,
        p_g,
        q,
        d_count: basket.d_count,
        genus,
        ord_g,
        minimal,
    })
}

/// Minimality criterion for regular candidates: all exceptional curves have
/// self-intersection -2 or -3, or the basket is {2 x C(4,1), 3 x C(2,1)}.
fn regular_minimality(basket: &Basket) -> bool {
    let gentle = basket.classes.iter().all(|(cls, _)| {
        let graph = crate::sing::resolution_graph(cls);
        graph.nodes.iter().all(|&s| s == -2 || s == -3)
    });
    if gentle {
        return true;
    }
    let special = Basket::from_classes(vec![
        (make_class(Flavor::C, 4, 1).expect("C(4,1)"), 2),
        (make_class(Flavor::C, 2, 1).expect("C(2,1)"), 3),
    ]);
    basket == &special
}

/// Exhaustive singularity computation used as an independent oracle.
///
/// Materializes the full coset product `G^0/K_i x G^0/K_j`, computes the
/// orbits of the twisted action point by point, reads `n` off the explicit
/// stabilizer, extracts the rotation exponents from the stabilizer
/// generator, and tests fixedness by searching for factor-exchanging
/// elements fixing the point in coset form.
pub fn bruteforce_singularity_oracle(
    data: &MixedData,
    cap: usize,
) -> Result<Vec<SingularPointY>, SurfaceError> {
    let group = data.g0;
    let r = data.vector.tail.len();
    let mut out = Vec::new();
    for i in 0..r {
        let hi = data.vector.tail[i];
        let ki = group.generated_subgroup(&[hi]);
        let reps_i = group.left_cosets(&ki).expect("cyclic subgroup");
        for j in 0..r {
            let hj = data.vector.tail[j];
            let kj = group.generated_subgroup(&[hj]);
            let reps_j = group.left_cosets(&kj).expect("cyclic subgroup");
            let size = reps_i.len() * reps_j.len();
            if size > cap {
                return Err(SurfaceError::OracleCapExceeded { size, cap });
            }
            // explicit orbit partition of the product
            let enc = |ci: usize, cj: usize| ci * reps_j.len() + cj;
            let mut orbit = vec![usize::MAX; size];
            for start in 0..size {
                if orbit[start] != usize::MAX {
                    continue;
                }
                let mut members = vec![start];
                orbit[start] = start;
                let mut head = 0;
                while head < members.len() {
                    let p = members[head];
                    head += 1;
                    let (ci, cj) = (p / reps_j.len(), p % reps_j.len());
                    for g in 0..group.order() as u16 {
                        let ni = group.coset_index(&reps_i, &ki, group.mul(g, reps_i[ci]));
                        let nj = group
                            .coset_index(&reps_j, &kj, group.mul(data.phi.apply(g), reps_j[cj]));
                        let t = enc(ni, nj);
                        if orbit[t] == usize::MAX {
                            orbit[t] = start;
                            members.push(t);
                        }
                    }
                }
                // normalize: an orbit point whose first coordinate is the
                // identity coset (always index 0 since representatives are
                // coset minima)
                let slice_point = members
                    .iter()
                    .copied()
                    .filter(|p| p / reps_j.len() == 0)
                    .min_by_key(|p| p % reps_j.len())
                    .expect("the action is transitive on the first coordinate");
                let b = reps_j[slice_point % reps_j.len()];
                // explicit stabilizer of (K_i, b K_j)
                let stab: Vec<u16> = (0..group.order() as u16)
                    .filter(|&s| {
                        group.coset_index(&reps_i, &ki, s)
                            == group.coset_index(&reps_i, &ki, 0)
                            && group.coset_index(
                                &reps_j,
                                &kj,
                                group.mul(data.phi.apply(s), b),
                            ) == group.coset_index(&reps_j, &kj, b)
                    })
                    .collect();
                let n = stab.len() as i64;
                if n == 1 {
                    continue;
                }
                // rotation exponents: the stabilizer generator is the power
                // of h_i with smallest positive exponent in the stabilizer
                let mi = group.element_order(hi) as i64;
                let mj = group.element_order(hj) as i64;
                let mut delta = 0i64;
                let mut gen = 0u16;
                let mut power = 0u16;
                for d in 1..=mi {
                    power = group.mul(power, hi);
                    if stab.contains(&power) {
                        delta = d;
                        gen = power;
                        break;
                    }
                }
                assert!(delta > 0, "stabilizer must meet the cyclic group K_i");
                assert_eq!(mi / delta, n, "stabilizer of a cyclic group is cyclic");
                // second-factor rotation: phi(gen) = b h_j^gamma b^-1
                let target = group.mul(
                    group.mul(group.inv(b), data.phi.apply(gen)),
                    b,
                );
                let mut gamma = 0i64;
                let mut hj_pow = 0u16;
                for c in 1..=mj {
                    hj_pow = group.mul(hj_pow, hj);
                    if hj_pow == target {
                        gamma = c;
                        break;
                    }
                }
                assert!(gamma > 0, "the stabilizer rotates the second factor");
                assert_eq!(n * gamma % mj, 0, "rotation exponent must divide out");
                let a = n * gamma / mj;
                // fixedness: search factor-exchanging elements fixing the
                // point: tau' h (K_i, b K_j) = (phi(h) b K_i, tau h K_j)
                let fixed = i == j
                    && (0..group.order() as u16).any(|h| {
                        let first = group.mul(data.phi.apply(h), b);
                        let second = group.mul(data.tau, h);
                        group.coset_index(&reps_i, &ki, first) == 0
                            && group.coset_index(&reps_j, &kj, second)
                                == group.coset_index(&reps_j, &kj, b)
                    });
                out.push(SingularPointY {
                    i,
                    j,
                    rep: b,
                    n,
                    a,
                    fixed,
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Checks that the fast path and the oracle agree as multisets of
/// (pair, n, a, fixed).
pub fn oracle_agrees(data: &MixedData, cap: usize) -> Result<bool, SurfaceError> {
    let fast = singular_points_y(data);
    let slow = bruteforce_singularity_oracle(data, cap)?;
    let strip = |pts: &[SingularPointY]| -> Vec<(usize, usize, i64, i64, bool)> {
        let mut v: Vec<_> = pts.iter().map(|p| (p.i, p.j, p.n, p.a, p.fixed)).collect();
        v.sort();
        v
    };
    Ok(strip(&fast) == strip(&slow))
}

/// The cross-check identities every accepted record must satisfy.
pub fn validate_invariants(
    inv: &SurfaceInvariants,
    basket: &Basket,
    theta_beta: Option<(Rat, i64)>,
) -> Result<(), String> {
    if inv.k2 + inv.euler != 12 * inv.chi {
        return Err("Noether: K^2 + e != 12 chi".into());
    }
    if basket.b != int(24 * inv.chi - 3 * inv.k2) {
        return Err("B(basket) != 24 chi - 3 K^2".into());
    }
    if let Some((theta, beta)) = theta_beta {
        if beta != inv.genus - 1 {
            return Err("beta != g - 1".into());
        }
        if int(2 * (inv.genus - 1)) != int(inv.ord_g / 2) * theta {
            return Err("Hurwitz integrality".into());
        }
    }
    if !basket.fraction_sum().is_integer() {
        return Err("basket fraction sum is not integral".into());
    }
    if inv.d_count % 2 != 0 {
        return Err("d is odd".into());
    }
    if (inv.d_count / 2) as i64 > inv.p_g + 1 {
        return Err("d/2 exceeds p_g + 1".into());
    }
    let t = 2 * inv.p_g + 1 - (inv.d_count as i64) / 2;
    if t < 0 {
        return Err("2 p_g + 1 - d/2 is negative".into());
    }
    Ok(())
}

/// Convenience: subgroup generated by one element.
pub fn cyclic_subgroup(group: &FiniteGroup, x: u16) -> Subgroup {
    group.generated_subgroup(&[x])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::{construct_named, NamedGroupDescriptor};
    use crate::rat::render;

    /// The smallest irregular candidate: kernel Z_2 inside Z_4, signature
    /// (1; 2, 2), vector (d, e; t, t).
    fn z2_candidate(g0: &FiniteGroup) -> MixedData<'_> {
        MixedData {
            g0,
            vector: GeneratingVector {
                genus_part: vec![0, 0],
                tail: vec![1, 1],
            },
            phi: GroupMap::identity(2),
            tau: 1,
        }
    }

    #[test]
    fn irregular_row_one_singularities() {
        let g0 = construct_named(&NamedGroupDescriptor::Cyclic(2)).unwrap();
        let data = z2_candidate(&g0);
        let points = singular_points_y(&data);
        assert_eq!(points.len(), 4, "one point per ordered branch pair");
        for p in &points {
            assert_eq!((p.n, p.a), (2, 1));
            assert_eq!(p.fixed, p.i == p.j);
        }
    }

    #[test]
    fn irregular_row_one_basket_and_invariants() {
        let g0 = construct_named(&NamedGroupDescriptor::Cyclic(2)).unwrap();
        let data = z2_candidate(&g0);
        let basket = assemble_basket_x(&data).unwrap();
        assert_eq!(basket.render(), "1xC(2,1);2xD(2,1)");
        let inv = surface_invariants(&data, &basket).unwrap();
        assert_eq!(inv.genus, 2);
        assert_eq!(inv.k2, 2);
        assert_eq!(inv.euler, 10);
        assert_eq!(inv.chi, 1);
        assert_eq!((inv.p_g, inv.q), (1, 1));
        assert_eq!(inv.minimal, MinimalityTag::Minimal);
        assert_eq!(render(&basket.e), "9");
    }

    #[test]
    fn unramified_candidate_has_empty_basket() {
        let g0 = construct_named(&NamedGroupDescriptor::Cyclic(2)).unwrap();
        let data = MixedData {
            g0: &g0,
            vector: GeneratingVector {
                genus_part: vec![0, 1, 0, 0],
                tail: vec![],
            },
            phi: GroupMap::identity(2),
            tau: 1,
        };
        assert!(singular_points_y(&data).is_empty());
        let basket = assemble_basket_x(&data).unwrap();
        assert!(basket.classes.is_empty());
        let inv = surface_invariants(&data, &basket).unwrap();
        assert_eq!(inv.genus, 3);
        assert_eq!(inv.k2, 8);
        assert_eq!(inv.euler, 4);
        assert_eq!((inv.p_g, inv.q), (2, 2));
        assert_eq!(inv.minimal, MinimalityTag::Minimal);
    }

    #[test]
    fn fixed_point_test_requires_diagonal() {
        let g0 = construct_named(&NamedGroupDescriptor::Cyclic(2)).unwrap();
        let data = z2_candidate(&g0);
        assert_eq!(
            fixed_point_test(&data, 0, 1, 0).unwrap_err(),
            SurfaceError::NotDiagonal
        );
        assert!(fixed_point_test(&data, 0, 0, 0).unwrap());
    }

    #[test]
    fn oracle_matches_fast_path_on_small_candidates() {
        let g0 = construct_named(&NamedGroupDescriptor::Cyclic(2)).unwrap();
        let data = z2_candidate(&g0);
        assert!(oracle_agrees(&data, 1 << 20).unwrap());

        // an abelian kernel with trivial twist: orbit counts per pair match
        let z4 = construct_named(&NamedGroupDescriptor::Cyclic(4)).unwrap();
        let data = MixedData {
            g0: &z4,
            vector: GeneratingVector {
                genus_part: vec![1, 0],
                tail: vec![2, 2],
            },
            phi: GroupMap::identity(4),
            tau: 1,
        };
        assert!(oracle_agrees(&data, 1 << 20).unwrap());
    }

    #[test]
    fn invariants_validate() {
        let g0 = construct_named(&NamedGroupDescriptor::Cyclic(2)).unwrap();
        let data = z2_candidate(&g0);
        let basket = assemble_basket_x(&data).unwrap();
        let inv = surface_invariants(&data, &basket).unwrap();
        validate_invariants(&inv, &basket, Some((int(1), 1))).unwrap();
    }
}
