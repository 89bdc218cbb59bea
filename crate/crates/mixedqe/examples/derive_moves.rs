//! Dev tool: searches for relator-preserving free-group substitutions used
//! as Hurwitz moves, printing every hit with its conjugator.
//!
//! Letters: positive = generator, negative = inverse.
//! q=1 search: F(a=1, b=2, g=3), relator [a,b] g t; candidate
//!   psi(a) = a, psi(b) in {b v, v b}, psi(g) = u g u^-1, psi(t) = w t w^-1.
//!   Condition: psi([a,b]) u g u^-1 = w ([a,b] g) w^-1 as free words.
//! q=2 search: F(a1=1, b1=2, a2=3, b2=4), relator [a1,b1][a2,b2] t;
//!   psi fixes a1, a2, psi(b_i) = side-variants with words v_i; condition
//!   psi([a1,b1])psi([a2,b2]) = w ([a1,b1][a2,b2]) w^-1.

type W = Vec<i8>;

fn reduce(w: &[i8]) -> W {
    let mut out: W = Vec::with_capacity(w.len());
    for &x in w {
        if let Some(&top) = out.last() {
            if top == -x {
                out.pop();
                continue;
            }
        }
        out.push(x);
    }
    out
}

fn inv(w: &[i8]) -> W {
    w.iter().rev().map(|&x| -x).collect()
}

fn conc(parts: &[&[i8]]) -> W {
    let mut out = Vec::new();
    for p in parts {
        out.extend_from_slice(p);
    }
    reduce(&out)
}

/// Strips matching conjugation: returns (prefix w, cyclic core).
fn cyclic_reduce(w: &[i8]) -> (W, W) {
    let mut core = w.to_vec();
    let mut prefix = Vec::new();
    while core.len() >= 2 && core[0] == -core[core.len() - 1] {
        prefix.push(core[0]);
        core = core[1..core.len() - 1].to_vec();
    }
    (prefix, core)
}

fn rotations(w: &[i8]) -> Vec<W> {
    (0..w.len().max(1))
        .map(|s| {
            let mut v = w[s..].to_vec();
            v.extend_from_slice(&w[..s]);
            v
        })
        .collect()
}

fn words(alphabet: &[i8], max_len: usize) -> Vec<W> {
    let mut out: Vec<W> = vec![vec![]];
    let mut frontier: Vec<W> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in alphabet {
                if w.last() == Some(&-l) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                out.push(v.clone());
                next.push(v);
            }
        }
        frontier = next;
    }
    out
}

fn commutator(x: &[i8], y: &[i8]) -> W {
    conc(&[x, y, &inv(x), &inv(y)])
}

fn show(w: &[i8], names: &[&str]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&x| {
            let n = names[(x.abs() - 1) as usize];
            if x > 0 {
                n.to_string()
            } else {
                format!("{n}^-")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() {
    // ---- q = 1 point-push search ----
    let (a, b, g) = (1i8, 2i8, 3i8);
    let q1_names = ["a", "b", "g"];
    let target = conc(&[&commutator(&[a], &[b]), &[g]]);
    let rots = rotations(&target);
    let vs = words(&[a, -a, b, -b, g, -g], 4);
    let us = words(&[a, -a, b, -b, g, -g], 3);
    let mut hits = 0;
    for v in &vs {
        for side in 0..2 {
            let psi_b = if side == 0 {
                conc(&[&[b], v])
            } else {
                conc(&[v, &[b]])
            };
            // requires g in the abelianized image of b (mixing)
            let gsum: i32 = psi_b.iter().map(|&x| if x.abs() == g { x.signum() as i32 } else { 0 }).sum();
            if gsum == 0 {
                continue;
            }
            let head = commutator(&[a], &psi_b);
            for u in &us {
                let l = conc(&[&head, u, &[g], &inv(u)]);
                let (w, core) = cyclic_reduce(&l);
                if core.len() != target.len() {
                    continue;
                }
                if let Some(s) = rots.iter().position(|r| r == &core) {
                    // l = w rot_s(target) w^-1 = (w P^-1) target (w P^-1)^-1
                    let p = target[..s].to_vec();
                    let conj = conc(&[&w, &inv(&p)]);
                    // sanity: conj * target * conj^-1 == l
                    let check = conc(&[&conj, &target, &inv(&conj)]);
                    assert_eq!(check, l);
                    if conj.len() <= 3 && u.len() <= 2 {
                        hits += 1;
                        println!(
                            "q1: psi(b) = {}{}  psi(g) = {} g {}  conj w = {}",
                            if side == 0 { "b * " } else { "" },
                            format_args!(
                                "{}{}",
                                show(v, &q1_names),
                                if side == 1 { " * b" } else { "" }
                            ),
                            show(u, &q1_names),
                            show(&inv(u), &q1_names),
                            show(&conj, &q1_names),
                        );
                        if hits > 30 {
                            break;
                        }
                    }
                }
            }
        }
    }

    // ---- q = 2 interaction search ----
    println!("---- q2 ----");
    let (a1, b1, a2, b2) = (1i8, 2i8, 3i8, 4i8);
    let q2_names = ["a1", "b1", "a2", "b2"];
    let target2 = conc(&[&commutator(&[a1], &[b1]), &commutator(&[a2], &[b2])]);
    let rots2 = rotations(&target2);
    let cs = words(&[a1, -a1, a2, -a2], 4);
    let mut hits2 = 0;
    'outer: for v1 in &cs {
        if v1.is_empty() {
            continue;
        }
        let mix1: i32 = v1.iter().map(|&x| if x.abs() == a2 { 1 } else { 0 }).sum();
        if mix1 == 0 {
            continue;
        }
        for v2 in &cs {
            for sides in 0..4 {
                let psi_b1 = if sides & 1 == 0 {
                    conc(&[&[b1], v1])
                } else {
                    conc(&[v1, &[b1]])
                };
                let psi_b2 = if sides & 2 == 0 {
                    conc(&[&[b2], v2])
                } else {
                    conc(&[v2, &[b2]])
                };
                let l = conc(&[&commutator(&[a1], &psi_b1), &commutator(&[a2], &psi_b2)]);
                let (w, core) = cyclic_reduce(&l);
                if core.len() != target2.len() {
                    continue;
                }
                if let Some(s) = rots2.iter().position(|r| r == &core) {
                    let p = target2[..s].to_vec();
                    let conj = conc(&[&w, &inv(&p)]);
                    let check = conc(&[&conj, &target2, &inv(&conj)]);
                    assert_eq!(check, l);
                    hits2 += 1;
                    println!(
                        "q2: psi(b1) = {} | psi(b2) = {} | conj w = {}",
                        show(&psi_b1, &q2_names),
                        show(&psi_b2, &q2_names),
                        show(&conj, &q2_names),
                    );
                    if hits2 > 40 {
                        break 'outer;
                    }
                }
            }
        }
    }
}
