//! Unsplit degree-2 extensions realizing the mixed action.
//!
//! An extension `1 -> G0 -> G -> Z_2 -> 1` splits exactly when some element
//! outside the index-2 subgroup has order 2, so the quotient map of the
//! associated action is quasi-etale exactly for the unsplit ones. Fixing any
//! `tau'` outside the subgroup determines `tau = tau'^2` and the
//! factor-exchange automorphism `phi(h) = tau' h tau'^-1`; all downstream
//! invariants are independent of which `tau'` is picked.

use std::sync::Arc;

use crate::catalogue::{subgroup_as_group, Catalogue};
use crate::error::ExtensionError;
use crate::group::{FiniteGroup, GroupMap, Subgroup};

/// One unsplit extension class: the big group, the embedded copy of the
/// kernel, and the derived mixed-action data pulled back to the abstract
/// kernel group.
#[derive(Debug, Clone)]
pub struct MixedExtension {
    pub group: Arc<FiniteGroup>,
    pub group_label: String,
    /// Members of the embedded index-2 subgroup.
    pub embedded: Subgroup,
    /// `ident.images[i]` is the element of `group` realizing abstract kernel
    /// element `i`.
    pub ident: GroupMap,
    /// The canonical choice outside the subgroup: minimal element index.
    pub tau_prime: u16,
    /// `tau'^2` as an abstract kernel element.
    pub tau: u16,
    /// Conjugation by `tau'` as an automorphism of the abstract kernel.
    pub phi: GroupMap,
}

impl MixedExtension {
    /// The pair (tau, phi) describing the mixed action on the kernel.
    pub fn mixed_action_data(&self) -> (u16, GroupMap) {
        (self.tau, self.phi.clone())
    }

    /// Recomputes (tau, phi) for an arbitrary element outside the subgroup,
    /// used by the tau'-independence checks.
    pub fn action_data_for(&self, g0: &FiniteGroup, tau_prime: u16) -> Option<(u16, GroupMap)> {
        if self.embedded.contains(tau_prime) {
            return None;
        }
        derive_action(g0, &self.group, &self.embedded, &self.ident, tau_prime)
    }
}

/// True iff every element outside the index-2 subgroup has order > 2.
pub fn unsplit_test(g: &FiniteGroup, h: &Subgroup) -> Result<bool, ExtensionError> {
    if !g.is_subgroup(h) || h.order() * 2 != g.order() {
        return Err(ExtensionError::NotIndexTwo);
    }
    Ok((0..g.order() as u16)
        .filter(|&x| !h.contains(x))
        .all(|x| g.element_order(x) > 2))
}

fn derive_action(
    g0: &FiniteGroup,
    g: &FiniteGroup,
    embedded: &Subgroup,
    ident: &GroupMap,
    tau_prime: u16,
) -> Option<(u16, GroupMap)> {
    let inv_ident: std::collections::HashMap<u16, u16> = ident
        .images
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i as u16))
        .collect();
    let tau_in_g = g.mul(tau_prime, tau_prime);
    let tau = *inv_ident.get(&tau_in_g)?;
    let mut phi_images = Vec::with_capacity(g0.order());
    for i in 0..g0.order() as u16 {
        let e = ident.apply(i);
        let conj = g.conj(tau_prime, e);
        phi_images.push(*inv_ident.get(&conj)?);
    }
    debug_assert!(embedded.contains(tau_in_g));
    Some((tau, GroupMap { images: phi_images }))
}

/// Enumerates the unsplit degree-2 extensions of `g0` drawn from the
/// catalogue groups of order `2 |g0|`, one representative per equivalence
/// class (an isomorphism of the big group carrying one embedded subgroup
/// onto the other).
///
/// Returns `OrderNotCovered` when the catalogue has no groups of that order
/// at all; an incomplete order with entries still yields its extensions and
/// the caller records the gap.
pub fn enumerate_unsplit_extensions(
    g0: &FiniteGroup,
    cat: &Catalogue,
) -> Result<Vec<MixedExtension>, ExtensionError> {
    let order2 = 2 * g0.order();
    let (groups, _complete) = cat.groups_of_order(order2);
    if groups.is_empty() {
        return Err(ExtensionError::OrderNotCovered { order: order2 });
    }
    let mut out: Vec<MixedExtension> = Vec::new();
    for entry in groups {
        let g = &entry.group;
        let mut kept: Vec<Subgroup> = Vec::new();
        for s in g.index_two_subgroups() {
            if !unsplit_test(g, &s).unwrap_or(false) {
                continue;
            }
            // the embedded subgroup must be isomorphic to the kernel
            let s_group = subgroup_as_group(g, &s, "embedded");
            let Some(iso) = g0.is_isomorphic(&s_group) else {
                continue;
            };
            // equivalence: an automorphism of G carrying one subgroup onto
            // the other as a set
            if kept
                .iter()
                .any(|prev| g.find_pair_isomorphism(g, prev, &s).is_some())
            {
                continue;
            }
            kept.push(s.clone());
            // abstract -> G: compose the iso with member positions
            let ident = GroupMap {
                images: iso
                    .images
                    .iter()
                    .map(|&pos| s.members[pos as usize])
                    .collect(),
            };
            let tau_prime = (0..g.order() as u16)
                .find(|&x| !s.contains(x))
                .expect("index-2 subgroup has an outside element");
            let (tau, phi) = derive_action(g0, g, &s, &ident, tau_prime)
                .expect("conjugation by tau' preserves the embedded subgroup");
            out.push(MixedExtension {
                group: Arc::clone(g),
                group_label: entry.label.clone(),
                embedded: s,
                ident,
                tau_prime,
                tau,
                phi,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::{
        construct_named, enumerate_small_groups, Catalogue, NamedGroupDescriptor,
    };

    fn small_catalogue(max: usize) -> Catalogue {
        let mut cat = Catalogue::default();
        for n in 1..=max {
            for g in enumerate_small_groups(n) {
                let label = g.label().to_string();
                cat.insert(label, g);
            }
            cat.mark_complete(n);
        }
        cat
    }

    #[test]
    fn z2_has_exactly_one_unsplit_extension() {
        let cat = small_catalogue(4);
        let z2 = construct_named(&NamedGroupDescriptor::Cyclic(2)).unwrap();
        let exts = enumerate_unsplit_extensions(&z2, &cat).unwrap();
        assert_eq!(exts.len(), 1);
        let z4 = construct_named(&NamedGroupDescriptor::Cyclic(4)).unwrap();
        assert!(exts[0].group.is_isomorphic(&z4).is_some());
        // abelian: phi is the identity, tau is the involution
        assert_eq!(exts[0].phi.images, vec![0, 1]);
        assert_eq!(exts[0].tau, 1);
    }

    #[test]
    fn klein_group_extensions() {
        let cat = small_catalogue(8);
        let v4 = construct_named(&NamedGroupDescriptor::DirectProduct(vec![
            NamedGroupDescriptor::Cyclic(2),
            NamedGroupDescriptor::Cyclic(2),
        ]))
        .unwrap();
        let exts = enumerate_unsplit_extensions(&v4, &cat).unwrap();
        // only Z4 x Z2 embeds the Klein group without outside involutions;
        // the dihedral group of order 8 is excluded by its reflections
        assert_eq!(exts.len(), 1);
        let z4z2 = construct_named(&NamedGroupDescriptor::DirectProduct(vec![
            NamedGroupDescriptor::Cyclic(4),
            NamedGroupDescriptor::Cyclic(2),
        ]))
        .unwrap();
        assert!(exts[0].group.is_isomorphic(&z4z2).is_some());
    }

    #[test]
    fn unsplit_test_examples() {
        let z4 = construct_named(&NamedGroupDescriptor::Cyclic(4)).unwrap();
        let sub = z4.generated_subgroup(&[z4.elements_of_order(2)[0]]);
        assert!(unsplit_test(&z4, &sub).unwrap());

        let v4 = construct_named(&NamedGroupDescriptor::DirectProduct(vec![
            NamedGroupDescriptor::Cyclic(2),
            NamedGroupDescriptor::Cyclic(2),
        ]))
        .unwrap();
        for s in v4.index_two_subgroups() {
            assert!(!unsplit_test(&v4, &s).unwrap());
        }

        // the dicyclic group of order 16 over its cyclic subgroup of order 8
        let bd4 = construct_named(&NamedGroupDescriptor::Dicyclic(4)).unwrap();
        let y = (0..16u16).find(|&x| bd4.element_order(x) == 8).unwrap();
        let c8 = bd4.generated_subgroup(&[y]);
        assert_eq!(c8.order(), 8);
        assert!(unsplit_test(&bd4, &c8).unwrap());
    }

    #[test]
    fn not_index_two_is_reported() {
        let z4 = construct_named(&NamedGroupDescriptor::Cyclic(4)).unwrap();
        let trivial = z4.generated_subgroup(&[]);
        assert_eq!(
            unsplit_test(&z4, &trivial).unwrap_err(),
            ExtensionError::NotIndexTwo
        );
    }

    #[test]
    fn order_not_covered() {
        let cat = small_catalogue(4);
        let d4 = construct_named(&NamedGroupDescriptor::Dihedral(4)).unwrap();
        assert_eq!(
            enumerate_unsplit_extensions(&d4, &cat).unwrap_err(),
            ExtensionError::OrderNotCovered { order: 16 }
        );
    }

    #[test]
    fn dihedral_order8_extensions_include_known_families() {
        let cat = small_catalogue(16);
        let d4 = construct_named(&NamedGroupDescriptor::Dihedral(4)).unwrap();
        let exts = enumerate_unsplit_extensions(&d4, &cat).unwrap();
        assert!(!exts.is_empty());
        let d283 = construct_named(&NamedGroupDescriptor::Metacyclic { p: 2, q: 8, r: 3 }).unwrap();
        assert!(
            exts.iter().any(|e| e.group.is_isomorphic(&d283).is_some()),
            "extension x^2 = y^8 = 1, xyx^-1 = y^3 over the dihedral group"
        );
    }

    #[test]
    fn q8_has_the_dicyclic_extension() {
        let cat = small_catalogue(16);
        let q8 = construct_named(&NamedGroupDescriptor::Dicyclic(2)).unwrap();
        let exts = enumerate_unsplit_extensions(&q8, &cat).unwrap();
        let bd4 = construct_named(&NamedGroupDescriptor::Dicyclic(4)).unwrap();
        assert!(exts.iter().any(|e| e.group.is_isomorphic(&bd4).is_some()));
    }

    #[test]
    fn phi_squared_is_conjugation_by_tau() {
        let cat = small_catalogue(16);
        for g0 in [
            construct_named(&NamedGroupDescriptor::Dihedral(4)).unwrap(),
            construct_named(&NamedGroupDescriptor::Cyclic(8)).unwrap(),
            construct_named(&NamedGroupDescriptor::Dicyclic(2)).unwrap(),
        ] {
            let Ok(exts) = enumerate_unsplit_extensions(&g0, &cat) else {
                continue;
            };
            for ext in exts {
                let (tau, phi) = ext.mixed_action_data();
                for x in 0..g0.order() as u16 {
                    let twice = phi.apply(phi.apply(x));
                    assert_eq!(twice, g0.conj(tau, x));
                }
                assert_eq!(phi.apply(tau), tau);
            }
        }
    }
}
