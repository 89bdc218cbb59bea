//! Albanese fibre genus for candidates with irregularity 1.
//!
//! For q = 1 the base is an elliptic curve and the surface fibres over it;
//! the general fibre genus comes from the monodromy of the restricted cover:
//! the image inside `G^0 x G^0` is generated by `(a, a^-1)`, `(b, b^-1)`,
//! `(h_i, 1)` and `(1, h_i)`; the twisted translates of that image under
//! `g (x, y) = (g x, phi(g) y)` and `tau' g (x, y) = (phi(g) y, tau g x)`
//! fill `M` of the `|G^0|^2` cells, and then `deg psi = |G^0|^2 / M` and
//! `g_alb = 1 + (g - 1) M / |G^0|^2`.

use crate::covers::GeneratingVector;
use crate::error::AlbaneseError;
use crate::group::{FiniteGroup, GroupMap};
use crate::rat::{as_integer, int, rat};

/// Monodromy image and the derived Albanese data.
#[derive(Debug, Clone)]
pub struct AlbaneseData {
    /// Size of the monodromy image inside the product.
    pub image_size: usize,
    /// Cells covered by the twisted translates of the image.
    pub m: usize,
    pub deg_psi: i64,
    pub g_alb: i64,
}

/// The subgroup of `G^0 x G^0` generated by `(a, a^-1)`, `(b, b^-1)`,
/// `(h_i, 1)`, `(1, h_i)`, as a sorted list of pairs.
pub fn monodromy_image(
    group: &FiniteGroup,
    vector: &GeneratingVector,
) -> Result<Vec<(u16, u16)>, AlbaneseError> {
    if vector.q() != 1 {
        return Err(AlbaneseError::WrongIrregularity { q: vector.q() });
    }
    let (a, b) = (vector.genus_part[0], vector.genus_part[1]);
    let mut gens: Vec<(u16, u16)> = vec![(a, group.inv(a)), (b, group.inv(b))];
    for &h in &vector.tail {
        gens.push((h, 0));
        gens.push((0, h));
    }
    // closure under componentwise products
    let n = group.order();
    let mut in_set = vec![false; n * n];
    let enc = |x: u16, y: u16| x as usize * n + y as usize;
    let mut members: Vec<(u16, u16)> = vec![(0, 0)];
    in_set[0] = true;
    for &g in &gens {
        if !in_set[enc(g.0, g.1)] {
            in_set[enc(g.0, g.1)] = true;
            members.push(g);
        }
    }
    let mut head = 0;
    while head < members.len() {
        let (x, y) = members[head];
        for &(gx, gy) in &gens {
            let p = (group.mul(x, gx), group.mul(y, gy));
            if !in_set[enc(p.0, p.1)] {
                in_set[enc(p.0, p.1)] = true;
                members.push(p);
            }
        }
        head += 1;
    }
    members.sort_unstable();
    Ok(members)
}

/// Size of the union of the twisted translates of the image.
pub fn twisted_union_size(
    group: &FiniteGroup,
    phi: &GroupMap,
    tau: u16,
    image: &[(u16, u16)],
) -> usize {
    let n = group.order();
    let mut covered = vec![false; n * n];
    let enc = |x: u16, y: u16| x as usize * n + y as usize;
    for g in 0..n as u16 {
        let pg = phi.apply(g);
        let tg = group.mul(tau, g);
        for &(x, y) in image {
            covered[enc(group.mul(g, x), group.mul(pg, y))] = true;
            covered[enc(group.mul(pg, y), group.mul(tg, x))] = true;
        }
    }
    covered.iter().filter(|&&c| c).count()
}

/// Full Albanese computation for a q = 1 candidate of covering genus `g`.
pub fn albanese_genus(
    group: &FiniteGroup,
    vector: &GeneratingVector,
    phi: &GroupMap,
    tau: u16,
    genus: i64,
) -> Result<AlbaneseData, AlbaneseError> {
    let image = monodromy_image(group, vector)?;
    let m = twisted_union_size(group, phi, tau, &image);
    let n2 = (group.order() * group.order()) as i64;
    if m % image.len() != 0 {
        return Err(AlbaneseError::IntegralityViolation(
            "the union size is not a multiple of the image size".into(),
        ));
    }
    let deg_psi = as_integer(&rat(n2, m as i64)).ok_or_else(|| {
        AlbaneseError::IntegralityViolation("deg psi = |G^0|^2 / M is not integral".into())
    })?;
    let g_alb_rat = int(1) + rat((genus - 1) * m as i64, n2);
    let g_alb = as_integer(&g_alb_rat).ok_or_else(|| {
        AlbaneseError::IntegralityViolation("g_alb = 1 + (g-1) M / |G^0|^2 is not integral".into())
    })?;
    Ok(AlbaneseData {
        image_size: image.len(),
        m,
        deg_psi,
        g_alb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::{construct_named, NamedGroupDescriptor};

    #[test]
    fn full_image_for_the_smallest_candidate() {
        let g = construct_named(&NamedGroupDescriptor::Cyclic(2)).unwrap();
        let v = GeneratingVector {
            genus_part: vec![0, 0],
            tail: vec![1, 1],
        };
        let image = monodromy_image(&g, &v).unwrap();
        assert_eq!(image.len(), 4);
        let data = albanese_genus(&g, &v, &GroupMap::identity(2), 1, 2).unwrap();
        assert_eq!(data.m, 4);
        assert_eq!(data.deg_psi, 1);
        assert_eq!(data.g_alb, 2);
    }

    #[test]
    fn half_image_fills_under_the_twist() {
        // kernel Z_4 inside Z_8: vector (u, e; u^2, u^2): the image is the
        // even-sum half of Z_4 x Z_4 and the twisted translates fill it all
        let g = construct_named(&NamedGroupDescriptor::Cyclic(4)).unwrap();
        let v = GeneratingVector {
            genus_part: vec![1, 0],
            tail: vec![2, 2],
        };
        let image = monodromy_image(&g, &v).unwrap();
        assert_eq!(image.len(), 8);
        // tau = the generator of Z_4 (tau'^2 has order 4 in Z_8)
        let data = albanese_genus(&g, &v, &GroupMap::identity(4), 1, 3).unwrap();
        assert_eq!(data.m, 16);
        assert_eq!(data.deg_psi, 1);
        assert_eq!(data.g_alb, 3);
    }

    #[test]
    fn wrong_irregularity_is_rejected() {
        let g = construct_named(&NamedGroupDescriptor::Cyclic(2)).unwrap();
        let v = GeneratingVector {
            genus_part: vec![],
            tail: vec![1, 1, 1, 1],
        };
        assert_eq!(
            monodromy_image(&g, &v).unwrap_err(),
            AlbaneseError::WrongIrregularity { q: 0 }
        );
    }
}
