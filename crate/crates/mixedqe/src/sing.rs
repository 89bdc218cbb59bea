//! Cyclic quotient singularities `C_{n,a}`, their involution quotients
//! `D_{n,a}`, and the correction terms they contribute to the invariants of
//! the resolved surface.
//!
//! A point of type `C_{n,a}` is `C^2 / <diag(z_n, z_n^a)>` with
//! `n > a > 0`, `gcd(n,a) = 1`. Its minimal resolution is a chain of
//! rational curves with self-intersections `-b_i`, where
//! `n/a = b_1 - 1/(b_2 - 1/(...)) = [b_1, .., b_l]` is the Hirzebruch-Jung
//! expansion. `C_{n,a}` and `C_{n,a'}` with `a a' = 1 (mod n)` are the same
//! analytic class; the expansion of `n/a'` is the reversal of that of `n/a`.
//!
//! A `D_{n,a}` point is the Z_2-quotient of a `C_{n,a}` point fixed by the
//! factor-exchanging involution; this forces `a = a'`, `n` even, odd
//! expansion length `l = 2m+1` and even middle coefficient.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::SingError;
use crate::rat::{int, rat, Rat};

/// Hirzebruch-Jung continued fraction of `n/a` with all coefficients >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HJFraction {
    pub n: i64,
    pub a: i64,
    pub coefficients: Vec<i64>,
}

/// Expands `n/a` into its unique all->=2 continued fraction.
pub fn hj_expand(n: i64, a: i64) -> Result<HJFraction, SingError> {
    if n <= a || a <= 0 {
        return Err(SingError::OutOfRange { n, a });
    }
    if n.gcd(&a) != 1 {
        return Err(SingError::NotCoprime);
    }
    let mut coefficients = Vec::new();
    let (mut p, mut q) = (n, a);
    while q > 0 {
        // ceil(p/q)
        let b = (p + q - 1) / q;
        coefficients.push(b);
        let r = b * q - p;
        p = q;
        q = r;
    }
    debug_assert!(coefficients.iter().all(|&b| b >= 2));
    Ok(HJFraction { n, a, coefficients })
}

/// Evaluates `[b_1, .., b_l]` back to `(n, a)` with `gcd(n, a) = 1`.
pub fn hj_evaluate(coefficients: &[i64]) -> (i64, i64) {
    // Evaluate right to left as n/a = b - a'/n' on the tail.
    let (mut n, mut a) = (1i64, 0i64);
    for &b in coefficients.iter().rev() {
        let num = b * n - a;
        a = n;
        n = num;
    }
    (n, a)
}

/// The residue `a'` with `a a' = 1 (mod n)`, `0 < a' < n`.
pub fn dual_residue(n: i64, a: i64) -> Result<i64, SingError> {
    if n.gcd(&a) != 1 {
        return Err(SingError::NotCoprime);
    }
    let e = a.extended_gcd(&n);
    Ok(e.x.rem_euclid(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    C,
    D,
}

/// One singularity class with its derived correction data.
///
/// For a `C` class the stored `a` is the canonical representative
/// `min(a, a')`; a `D` class has `a = a'` by admissibility.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingularityClass {
    pub flavor: Flavor,
    pub n: i64,
    pub a: i64,
    pub a_dual: i64,
    pub coefficients: Vec<i64>,
    pub k: Rat,
    pub e: Rat,
    pub b_invariant: Rat,
    /// Index: least I with I*K Cartier near the point.
    pub index: i64,
}

impl SingularityClass {
    pub fn render(&self) -> String {
        match self.flavor {
            Flavor::C => format!("C({},{})", self.n, self.a),
            Flavor::D => format!("D({},{})", self.n, self.a),
        }
    }
}

/// Checks the branch-type (D) admissibility conditions; returns the half
/// length `m` on success.
fn d_admissibility(n: i64, a: i64, coeff: &[i64], a_dual: i64) -> Result<usize, SingError> {
    let fail = |reason: &str| SingError::DTypeInadmissible {
        n,
        a,
        reason: reason.to_string(),
    };
    if a != a_dual {
        return Err(fail("a^2 != 1 (mod n)"));
    }
    if n % 2 != 0 {
        return Err(fail("n is odd"));
    }
    if coeff.len() % 2 != 1 {
        return Err(fail("expansion length is even"));
    }
    let m = coeff.len() / 2;
    if coeff[m] % 2 != 0 {
        return Err(fail("middle coefficient is odd"));
    }
    Ok(m)
}

/// Builds a singularity class with all derived fields in exact arithmetic.
pub fn make_class(flavor: Flavor, n: i64, a: i64) -> Result<SingularityClass, SingError> {
    let hj = hj_expand(n, a)?;
    let a_dual = dual_residue(n, a)?;
    let l = hj.coefficients.len() as i64;
    let sum_b: i64 = hj.coefficients.iter().sum();
    // k(C) = -2 + (2 + a + a')/n + sum(b_i - 2); e(C) = l + 1 - 1/n
    let k_c = int(-2) + rat(2 + a + a_dual, n) + int(sum_b - 2 * l);
    let e_c = int(l + 1) - rat(1, n);
    let index = n / n.gcd(&(a + 1));
    match flavor {
        Flavor::C => {
            let (a_min, dual) = if a_dual < a { (a_dual, a) } else { (a, a_dual) };
            let coefficients = if a_min == a {
                hj.coefficients
            } else {
                hj.coefficients.into_iter().rev().collect()
            };
            let b = e_c + e_c + k_c;
            Ok(SingularityClass {
                flavor: Flavor::C,
                n,
                a: a_min,
                a_dual: dual,
                coefficients,
                k: k_c,
                e: e_c,
                b_invariant: b,
                index,
            })
        }
        Flavor::D => {
            d_admissibility(n, a, &hj.coefficients, a_dual)?;
            let k = k_c / int(2);
            let e = e_c / int(2) + int(3);
            let b = e + e + k;
            Ok(SingularityClass {
                flavor: Flavor::D,
                n,
                a,
                a_dual,
                coefficients: hj.coefficients,
                k,
                e,
                b_invariant: b,
                index,
            })
        }
    }
}

/// Dual graph of the exceptional divisor of the minimal resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionGraph {
    /// Self-intersection per node.
    pub nodes: Vec<i64>,
    /// Adjacency pairs (indices into `nodes`).
    pub edges: Vec<(usize, usize)>,
    pub shape: GraphShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphShape {
    Chain,
    /// Chain attached to a central node carrying two extra (-2) leaves.
    Star,
}

pub fn resolution_graph(cls: &SingularityClass) -> ResolutionGraph {
    match cls.flavor {
        Flavor::C => {
            let nodes: Vec<i64> = cls.coefficients.iter().map(|&b| -b).collect();
            let edges = (1..nodes.len()).map(|i| (i - 1, i)).collect();
            ResolutionGraph {
                nodes,
                edges,
                shape: GraphShape::Chain,
            }
        }
        Flavor::D => {
            let m = cls.coefficients.len() / 2;
            let mut nodes: Vec<i64> = cls.coefficients[..m].iter().map(|&b| -b).collect();
            let center = nodes.len();
            nodes.push(-(cls.coefficients[m] / 2 + 1));
            let mut edges: Vec<(usize, usize)> = (1..=m).map(|i| (i - 1, i)).collect();
            nodes.push(-2);
            edges.push((center, center + 1));
            nodes.push(-2);
            edges.push((center, center + 2));
            ResolutionGraph {
                nodes,
                edges,
                shape: GraphShape::Star,
            }
        }
    }
}

/// Which finite subgroup of GL(2,C) uniformizes the quotient of a
/// branch-type point, by the parity of `xi = b*p - q` where
/// `n/a = [b_1..b_m, 2b, b_m..b_1]` and `p/q = [b_1..b_m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DGroupDescriptor {
    /// `xi = 0`: the quotient is itself cyclic.
    Cyclic { n: i64 },
    XiOdd { xi: i64, p: i64 },
    XiEven { xi: i64, p: i64 },
}

/// Case analysis and parameters for the group of a branch-type point.
///
/// The empty chain (`m = 0`) uses the convention `p/q = 1/0`, so `xi = b`.
/// For `a = 1` the point is also the cyclic singularity `C_{2n, n+1}`,
/// reported in `cyclic_equivalent`.
pub fn d_group_descriptor(
    n: i64,
    a: i64,
) -> Result<(DGroupDescriptor, Option<(i64, i64)>), SingError> {
    let hj = hj_expand(n, a)?;
    let a_dual = dual_residue(n, a)?;
    let m = d_admissibility(n, a, &hj.coefficients, a_dual)?;
    let b = hj.coefficients[m] / 2;
    let (p, q) = if m == 0 {
        (1, 0)
    } else {
        hj_evaluate(&hj.coefficients[..m])
    };
    let xi = b * p - q;
    let cyclic_equivalent = (a == 1).then_some((2 * n, n + 1));
    let descriptor = if xi == 0 {
        DGroupDescriptor::Cyclic { n }
    } else if xi % 2 == 1 {
        DGroupDescriptor::XiOdd { xi, p }
    } else {
        DGroupDescriptor::XiEven { xi, p }
    };
    Ok((descriptor, cyclic_equivalent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::render;

    #[test]
    fn expansion_examples() {
        assert_eq!(hj_expand(2, 1).unwrap().coefficients, vec![2]);
        assert_eq!(hj_expand(8, 3).unwrap().coefficients, vec![3, 3]);
        assert_eq!(hj_expand(8, 5).unwrap().coefficients, vec![2, 3, 2]);
        assert_eq!(hj_expand(4, 1).unwrap().coefficients, vec![4]);
    }

    #[test]
    fn expansion_rejects_bad_input() {
        assert_eq!(hj_expand(6, 4), Err(SingError::NotCoprime));
        assert!(matches!(hj_expand(3, 5), Err(SingError::OutOfRange { .. })));
    }

    #[test]
    fn dual_residues() {
        assert_eq!(dual_residue(2, 1).unwrap(), 1);
        assert_eq!(dual_residue(8, 3).unwrap(), 3);
        assert_eq!(dual_residue(8, 5).unwrap(), 5);
        assert_eq!(dual_residue(5, 3).unwrap(), 2);
    }

    #[test]
    fn roundtrip_and_reversal_up_to_200() {
        for n in 2..=200i64 {
            for a in 1..n {
                if n.gcd(&a) != 1 {
                    continue;
                }
                let hj = hj_expand(n, a).unwrap();
                assert_eq!(hj_evaluate(&hj.coefficients), (n, a), "roundtrip {n}/{a}");
                let rev: Vec<i64> = hj.coefficients.iter().rev().copied().collect();
                let dual = dual_residue(n, a).unwrap();
                assert_eq!(
                    hj_expand(n, dual).unwrap().coefficients,
                    rev,
                    "reversal duality {n}/{a}"
                );
            }
        }
    }

    #[test]
    fn class_c21() {
        let c = make_class(Flavor::C, 2, 1).unwrap();
        assert_eq!(render(&c.k), "0");
        assert_eq!(render(&c.e), "3/2");
        assert_eq!(render(&c.b_invariant), "3");
        assert_eq!(c.index, 1);
    }

    #[test]
    fn class_d21() {
        let d = make_class(Flavor::D, 2, 1).unwrap();
        assert_eq!(render(&d.k), "0");
        assert_eq!(render(&d.e), "15/4");
        assert_eq!(render(&d.b_invariant), "15/2");
    }

    #[test]
    fn d85_is_inadmissible() {
        let err = make_class(Flavor::D, 8, 5).unwrap_err();
        match err {
            SingError::DTypeInadmissible { reason, .. } => {
                assert!(reason.contains("middle"), "got: {reason}")
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn d43_is_admissible() {
        let d = make_class(Flavor::D, 4, 3).unwrap();
        assert_eq!(d.coefficients, vec![2, 2, 2]);
    }

    #[test]
    fn b_values_bound() {
        // B(C) >= 3 with equality only at (2,1); B(D) >= 15/2 likewise.
        for n in 2..=60i64 {
            for a in 1..n {
                if n.gcd(&a) != 1 {
                    continue;
                }
                let c = make_class(Flavor::C, n, a).unwrap();
                assert!(c.b_invariant >= int(3));
                assert!(c.k >= int(0) && c.e >= int(0));
                assert_eq!(c.b_invariant == int(3), (n, a) == (2, 1));
                if let Ok(d) = make_class(Flavor::D, n, a) {
                    assert!(d.b_invariant >= rat(15, 2));
                    assert_eq!(d.b_invariant == rat(15, 2), (n, a) == (2, 1));
                }
            }
        }
    }

    #[test]
    fn rdp_indices_are_one() {
        for n in 2..=30i64 {
            let c = make_class(Flavor::C, n, n - 1).unwrap();
            assert_eq!(c.index, 1, "C({n},{})", n - 1);
        }
    }

    #[test]
    fn canonical_representative_uses_min_dual() {
        let c = make_class(Flavor::C, 5, 3).unwrap();
        assert_eq!((c.a, c.a_dual), (2, 3));
        assert_eq!(c.render(), "C(5,2)");
    }

    #[test]
    fn d_admissible_expansions_are_palindromic() {
        for n in (2..=100i64).step_by(2) {
            for a in 1..n {
                if n.gcd(&a) != 1 {
                    continue;
                }
                if let Ok(d) = make_class(Flavor::D, n, a) {
                    let rev: Vec<i64> = d.coefficients.iter().rev().copied().collect();
                    assert_eq!(d.coefficients, rev);
                }
            }
        }
    }

    #[test]
    fn graphs() {
        let c41 = make_class(Flavor::C, 4, 1).unwrap();
        let g = resolution_graph(&c41);
        assert_eq!(g.nodes, vec![-4]);
        assert!(g.edges.is_empty());

        // D(2,1) resolves to three (-2)-curves (an A_3 configuration)
        let d21 = make_class(Flavor::D, 2, 1).unwrap();
        let g = resolution_graph(&d21);
        assert_eq!(g.nodes, vec![-2, -2, -2]);
        assert_eq!(g.shape, GraphShape::Star);

        // D(4,3) resolves to the RDP of type D_4: four (-2)-curves
        let d43 = make_class(Flavor::D, 4, 3).unwrap();
        let g = resolution_graph(&d43);
        assert_eq!(g.nodes, vec![-2, -2, -2, -2]);
        assert_eq!(g.edges.len(), 3);
    }

    #[test]
    fn descriptors() {
        let (d, cyc) = d_group_descriptor(2, 1).unwrap();
        assert_eq!(d, DGroupDescriptor::XiOdd { xi: 1, p: 1 });
        assert_eq!(cyc, Some((4, 3)));

        let (d, cyc) = d_group_descriptor(4, 1).unwrap();
        assert_eq!(d, DGroupDescriptor::XiEven { xi: 2, p: 1 });
        assert_eq!(cyc, Some((8, 5)));

        let (d, cyc) = d_group_descriptor(4, 3).unwrap();
        assert_eq!(d, DGroupDescriptor::XiOdd { xi: 1, p: 2 });
        assert_eq!(cyc, None);
    }
}
