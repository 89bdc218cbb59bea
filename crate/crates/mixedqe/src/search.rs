//! Enumeration of the finite search frontier.
//!
//! Fixing the target invariants pins the basket invariant
//! `B = 24 (1 - q + p_g) - 3 K^2`; there are finitely many baskets with a
//! given `B` because every class contributes at least 3 (a branch-type class
//! at least 15/2), and the continued-fraction coefficients are bounded by
//! `B(C) >= sum b_i` and `B(D) >= 6 + (sum b_i)/2`. For each basket the
//! admissible signatures are cut down by exact arithmetic: `Theta > 0`, the
//! genus bridge `beta = (12 chi + k - e) / (3 Theta)` a positive integer,
//! the group order `2 beta / Theta` an integer, the automorphism-order bound
//! `m_i <= 4 beta + 6`, divisibility `m_i | 2 beta I`, slack caps on the
//! m_i, and the requirement that the singular `n` of every basket class
//! divides some branch order.

use num_integer::Integer;

use crate::rat::{as_integer, int, rat, Rat};
use crate::sing::{hj_evaluate, make_class, Flavor, SingularityClass};

/// A multiset of singularity classes with its aggregate invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basket {
    /// Canonically sorted (class, multiplicity) pairs.
    pub classes: Vec<(SingularityClass, usize)>,
    pub k: Rat,
    pub e: Rat,
    pub b: Rat,
    /// lcm of the class indices (1 for the empty basket).
    pub index: i64,
    /// Number of branch-type (D) points, counted with multiplicity.
    pub d_count: usize,
}

impl Basket {
    pub fn from_classes(mut classes: Vec<(SingularityClass, usize)>) -> Basket {
        classes.sort_by(|a, b| (a.0.flavor, a.0.n, a.0.a).cmp(&(b.0.flavor, b.0.n, b.0.a)));
        let mut k = int(0);
        let mut e = int(0);
        let mut b = int(0);
        let mut index = 1i64;
        let mut d_count = 0usize;
        for (cls, mult) in &classes {
            let m = int(*mult as i64);
            k = k + cls.k * m;
            e = e + cls.e * m;
            b = b + cls.b_invariant * m;
            index = index.lcm(&cls.index);
            if cls.flavor == Flavor::D {
                d_count += mult;
            }
        }
        Basket {
            classes,
            k,
            e,
            b,
            index,
            d_count,
        }
    }

    pub fn empty() -> Basket {
        Basket::from_classes(Vec::new())
    }

    pub fn total_points(&self) -> usize {
        self.classes.iter().map(|(_, m)| m).sum()
    }

    /// Canonical text rendering, e.g. `2xC(2,1);2xD(2,1)`; the empty basket
    /// renders as the empty string.
    pub fn render(&self) -> String {
        self.classes
            .iter()
            .map(|(c, m)| format!("{m}x{}", c.render()))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// The fractional sum that must be integral for the basket to arise from
    /// a group action: eta (a + a')/n over C classes plus zeta a/n over D.
    pub fn fraction_sum(&self) -> Rat {
        let mut s = int(0);
        for (cls, mult) in &self.classes {
            let m = int(*mult as i64);
            let term = match cls.flavor {
                Flavor::C => rat(cls.a + cls.a_dual, cls.n),
                Flavor::D => rat(cls.a, cls.n),
            };
            s = s + term * m;
        }
        s
    }
}

/// The basket invariant forced by the target invariants:
/// `B = 24 (1 - q + p_g) - 3 K^2`. Negative values signal an empty search.
pub fn target_b(p_g: i64, q: i64, k2: i64) -> Rat {
    int(24 * (1 - q + p_g) - 3 * k2)
}

/// All singularity classes with `B <= limit`, canonical representatives only.
fn candidate_classes(limit: &Rat) -> Vec<SingularityClass> {
    let mut out: Vec<SingularityClass> = Vec::new();
    let c_budget = *limit;
    // coefficient sums are bounded by B(C) >= sum b_i for C classes and by
    // B(D) >= 6 + (sum b_i)/2 for D classes
    let d_sum_max = ((c_budget - int(6)) * int(2)).floor().to_integer();
    let sum_max = c_budget.floor().to_integer().max(d_sum_max).max(0);
    let mut seen: std::collections::BTreeSet<(Flavor, i64, i64)> = Default::default();
    let mut push_unique = |cls: SingularityClass| {
        if seen.insert((cls.flavor, cls.n, cls.a)) {
            out.push(cls);
        }
    };
    let mut stack: Vec<Vec<i64>> = vec![vec![]];
    while let Some(prefix) = stack.pop() {
        let sum: i64 = prefix.iter().sum();
        if !prefix.is_empty() {
            let (n, a) = hj_evaluate(&prefix);
            if int(sum) <= c_budget {
                if let Ok(cls) = make_class(Flavor::C, n, a) {
                    if cls.b_invariant <= c_budget {
                        push_unique(cls);
                    }
                }
            }
            if let Ok(cls) = make_class(Flavor::D, n, a) {
                if cls.b_invariant <= *limit {
                    push_unique(cls);
                }
            }
        }
        for b in 2..=(sum_max - sum) {
            let s = sum + b;
            let c_viable = int(s) <= c_budget;
            let d_viable = int(6) + rat(s, 2) <= *limit;
            if c_viable || d_viable {
                let mut next = prefix.clone();
                next.push(b);
                stack.push(next);
            }
        }
    }
    out.sort_by(|x, y| (x.flavor, x.n, x.a).cmp(&(y.flavor, y.n, y.a)));
    out
}

/// Exactly the baskets with invariant `b0` that pass the arithmetic
/// constraints (integral fraction sum, even `d`, `d/2 <= p_g + 1`), in a
/// deterministic canonical order.
pub fn enumerate_baskets(b0: &Rat, p_g: i64) -> Vec<Basket> {
    if b0 < &int(0) {
        return Vec::new();
    }
    let classes = candidate_classes(b0);
    let mut out: Vec<Basket> = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    rec_baskets(&classes, 0, *b0, &mut chosen, p_g, &mut out);
    out.sort_by_key(|a| a.render());
    out
}

fn rec_baskets(
    classes: &[SingularityClass],
    from: usize,
    remaining: Rat,
    chosen: &mut Vec<(usize, usize)>,
    p_g: i64,
    out: &mut Vec<Basket>,
) {
    if remaining == int(0) {
        let basket = Basket::from_classes(
            chosen
                .iter()
                .map(|&(i, m)| (classes[i].clone(), m))
                .collect(),
        );
        if basket.fraction_sum().is_integer()
            && basket.d_count % 2 == 0
            && (basket.d_count / 2) as i64 <= p_g + 1
        {
            out.push(basket);
        }
        return;
    }
    if remaining < int(3) || from >= classes.len() {
        return; // every class costs at least 3
    }
    for i in from..classes.len() {
        let price = classes[i].b_invariant;
        if price > remaining {
            continue;
        }
        let mut mult = 1usize;
        let mut spent = price;
        while spent <= remaining {
            chosen.push((i, mult));
            rec_baskets(classes, i + 1, remaining - spent, chosen, p_g, out);
            chosen.pop();
            mult += 1;
            spent = spent + price;
        }
    }
}

/// One branch of the search: basket, signature and the forced group orders.
#[derive(Debug, Clone)]
pub struct SearchBranch {
    pub p_g: i64,
    pub q: i64,
    pub k2: i64,
    pub basket: Basket,
    /// Branch orders m_1 <= ... <= m_r.
    pub orders: Vec<i64>,
    pub theta: Rat,
    pub beta: i64,
    pub ord_g0: i64,
    pub genus: i64,
}

impl SearchBranch {
    pub fn ord_g(&self) -> i64 {
        2 * self.ord_g0
    }

    /// Canonical rendering `q;m1,m2,...` (`q;-` when unramified).
    pub fn render_signature(&self) -> String {
        render_signature(self.q, &self.orders)
    }
}

pub fn render_signature(q: i64, orders: &[i64]) -> String {
    if orders.is_empty() {
        format!("{q};-")
    } else {
        format!(
            "{q};{}",
            orders.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
        )
    }
}

/// Minimal positive value of `2q - 2 + sum (1 - 1/m_i)` for a given `q`:
/// 1/42 for q = 0 (orders 2,3,7), 1/2 for q = 1, and 2q - 2 for q >= 2.
pub fn theta_minimum(q: i64) -> Rat {
    match q {
        0 => rat(1, 42),
        1 => rat(1, 2),
        _ => int(2 * q - 2),
    }
}

/// Every signature passing the arithmetic bounds for this basket and target.
pub fn enumerate_signatures(basket: &Basket, p_g: i64, q: i64, k2: i64) -> Vec<SearchBranch> {
    let chi = 1 - q + p_g;
    // Theta * beta is a constant of the (basket, target) pair
    let c0 = (int(12 * chi) + basket.k - basket.e) / int(3);
    let mut out = Vec::new();
    if c0 <= int(0) {
        return out;
    }
    let beta_max = (c0 / theta_minimum(q)).floor().to_integer();
    for beta in 1..=beta_max {
        let theta = c0 / int(beta);
        let ord_g0 = match as_integer(&(int(2 * beta) / theta)) {
            Some(v) if v >= 1 => v,
            _ => continue,
        };
        let genus = beta + 1;
        // tail sum: sum (1 - 1/m_i) = Theta - (2q - 2)
        let tail = theta - int(2 * q - 2);
        if tail < int(0) {
            continue;
        }
        let r_max_rat = theta + theta + int(4 * (1 - q));
        if r_max_rat < int(0) {
            continue;
        }
        let r_max = r_max_rat.floor().to_integer().max(0) as usize;
        if tail == int(0) {
            push_if_admissible(basket, p_g, q, k2, theta, beta, ord_g0, genus, vec![], &mut out);
            continue;
        }
        if r_max == 0 {
            continue;
        }
        // admissible branch orders: divisors of 2 beta I within the
        // automorphism-order bound 4 beta + 6
        let two_beta_i = 2 * beta * basket.index;
        let wiman = 4 * beta + 6;
        let divisors: Vec<i64> = (2..=two_beta_i.min(wiman))
            .filter(|m| two_beta_i % m == 0)
            .collect();
        let mut orders: Vec<i64> = Vec::new();
        enumerate_tails(&divisors, tail, r_max, 0, &mut orders, &mut |orders: &Vec<i64>| {
            push_if_admissible(
                basket,
                p_g,
                q,
                k2,
                theta,
                beta,
                ord_g0,
                genus,
                orders.clone(),
                &mut out,
            );
        });
    }
    out.sort_by(|a, b| (a.beta, &a.orders).cmp(&(b.beta, &b.orders)));
    out
}

fn enumerate_tails(
    divisors: &[i64],
    remaining: Rat,
    slots_left: usize,
    min_idx: usize,
    orders: &mut Vec<i64>,
    emit: &mut dyn FnMut(&Vec<i64>),
) {
    if remaining == int(0) {
        emit(orders);
        return;
    }
    if slots_left == 0 || remaining < int(0) {
        return;
    }
    let Some(&max_m) = divisors.last() else {
        return;
    };
    // even the largest order in every remaining slot must reach the target
    let best = (int(1) - rat(1, max_m)) * int(slots_left as i64);
    if best < remaining {
        return;
    }
    for (i, &m) in divisors.iter().enumerate().skip(min_idx) {
        let contrib = int(1) - rat(1, m);
        if contrib > remaining {
            break; // divisors ascend, later ones only overshoot
        }
        orders.push(m);
        enumerate_tails(divisors, remaining - contrib, slots_left - 1, i, orders, emit);
        orders.pop();
    }
}

#[allow(clippy::too_many_arguments)]
fn push_if_admissible(
    basket: &Basket,
    p_g: i64,
    q: i64,
    k2: i64,
    theta: Rat,
    beta: i64,
    ord_g0: i64,
    genus: i64,
    orders: Vec<i64>,
    out: &mut Vec<SearchBranch>,
) {
    let r = orders.len() as i64;
    // slack constant in the order caps
    let slack = {
        let alt = rat(r - 3 + 4 * q, 2);
        if alt > rat(1, 6) {
            alt
        } else {
            rat(1, 6)
        }
    };
    let index = basket.index;
    // m_i <= (2 I beta Theta + 1) / slack
    let cap_all = (int(2 * index * beta) * theta + int(1)) / slack;
    if orders.iter().any(|&m| int(m) > cap_all) {
        return;
    }
    // all but |B_C| + |B_D|/2 of the m_i divide beta and obey a tighter cap
    let cap_tight = (int(beta) * theta + int(1)) / slack;
    let allowed_violations = (basket.total_points() - basket.d_count) + basket.d_count / 2;
    let violations = orders
        .iter()
        .filter(|&&m| beta % m != 0 || int(m) > cap_tight)
        .count();
    if violations > allowed_violations {
        return;
    }
    // every singular n must divide some branch order
    for (cls, _) in &basket.classes {
        if !orders.iter().any(|&m| m % cls.n == 0) {
            return;
        }
    }
    // Hurwitz integrality: 2(g-1) = |G^0| * Theta exactly
    debug_assert_eq!(int(2 * (genus - 1)), int(ord_g0) * theta);
    // the branch must reproduce the target: 8 beta^2 / |G| - k = K^2
    let k2_check = rat(8 * beta * beta, 2 * ord_g0) - basket.k;
    if k2_check != int(k2) {
        return;
    }
    out.push(SearchBranch {
        p_g,
        q,
        k2,
        basket: basket.clone(),
        orders,
        theta,
        beta,
        ord_g0,
        genus,
    });
}
