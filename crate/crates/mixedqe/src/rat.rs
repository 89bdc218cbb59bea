//! Exact rational arithmetic for the singularity correction terms.
//!
//! All invariant bookkeeping (k, e, B, Theta, beta) runs on `Rat` so that
//! integrality filters are exact; floats never enter the pipeline.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Rat = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

pub fn int(n: i64) -> Rat {
    Ratio::from_integer(n)
}

pub fn is_integer(r: &Rat) -> bool {
    r.is_integer()
}

/// The integer value of `r`, if it is one.
pub fn as_integer(r: &Rat) -> Option<i64> {
    r.is_integer().then(|| r.to_integer())
}

pub fn is_positive_integer(r: &Rat) -> bool {
    r.is_integer() && r.is_positive()
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

/// Renders `r` as `"p"` or `"p/q"`.
pub fn render(r: &Rat) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrality() {
        assert!(is_integer(&rat(6, 3)));
        assert!(!is_integer(&rat(7, 3)));
        assert_eq!(as_integer(&rat(6, 3)), Some(2));
        assert_eq!(render(&rat(15, 2)), "15/2");
        assert_eq!(render(&rat(-8, 4)), "-2");
    }
}
