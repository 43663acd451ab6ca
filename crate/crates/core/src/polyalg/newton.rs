//! Power sums in terms of elementary symmetric functions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{Field, Q};
use crate::polyalg::hompoly::HomPoly3;

/// Sparse integer polynomial in `(e1, e2, e3)`, weighted-homogeneous for
/// weights `(1, 2, 3)` when produced by `newton_power_sum`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymPoly {
    terms: BTreeMap<[u32; 3], BigInt>,
}

impl SymPoly {
    pub fn constant(c: i64) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: [u32; 3], c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, BigInt::from(c));
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `e1^i e2^j e3^k`.
    pub fn coeff(&self, e: [u32; 3]) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Weighted degree (weights 1, 2, 3), `None` for zero or mixed degrees.
    pub fn weighted_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e[0] + 2 * e[1] + 3 * e[2]);
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    fn add_term(&mut self, e: [u32; 3], c: BigInt) {
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], ca * cb);
            }
        }
        out
    }

    /// Substitutes forms `e1, e2, e3` of degrees `1, 2, 3` (or any forms
    /// making every term homogeneous of one degree).
    pub fn substitute<K: Field>(&self, e: &[HomPoly3<K>; 3], degree: u32) -> HomPoly3<K> {
        let mut acc = HomPoly3::zero(degree);
        for (ex, c) in &self.terms {
            let t = e[0].pow(ex[0]).mul(&e[1].pow(ex[1])).mul(&e[2].pow(ex[2]));
            let c = K::from_rational(&Q::from_integer(c.clone()));
            acc = acc.add(&t.scale(&c)).expect("homogeneous substitution");
        }
        acc
    }

    /// `P(x, y, 1)` homogenized to degree `d` in `(x, y, z)`: a term
    /// `e1^i e2^j e3^k` of weight `d` becomes `x^i y^j z^(d-i-j)`.
    pub fn dehomogenized_affine<K: Field>(&self, d: u32) -> HomPoly3<K> {
        let mut acc = HomPoly3::zero(d);
        for (ex, c) in &self.terms {
            let rest = d.checked_sub(ex[0] + ex[1]).expect("weight bounded by degree");
            let c = K::from_rational(&Q::from_integer(c.clone()));
            let t = HomPoly3::monomial([ex[0], ex[1], rest], c);
            acc = acc.add(&t).expect("equal degrees");
        }
        acc
    }

    /// Display with small integer coefficients, e.g. `e1^2 - 2*e2`.
    pub fn to_string_with(&self, names: [&str; 3]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            s.push_str(if s.is_empty() { if neg { "-" } else { "" } } else if neg { " - " } else { " + " });
            let mut factors: Vec<String> = Vec::new();
            for v in 0..3 {
                match e[v] {
                    0 => {}
                    1 => factors.push(names[v].to_string()),
                    k => factors.push(format!("{}^{}", names[v], k)),
                }
            }
            if !a.is_one() || factors.is_empty() {
                factors.insert(0, a.to_i64().map_or_else(|| a.to_string(), |x| x.to_string()));
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

/// `A_d` with `A_d(e1(x), e2(x), e3(x)) = x^d + y^d + z^d`, from the
/// recursion `A_d = e1 A_{d-1} - e2 A_{d-2} + e3 A_{d-3}`.
pub fn newton_power_sum(d: u32) -> SymPoly {
    let e1 = SymPoly::monomial([1, 0, 0], 1);
    let e2 = SymPoly::monomial([0, 1, 0], 1);
    let e3 = SymPoly::monomial([0, 0, 1], 1);
    let mut a = vec![SymPoly::constant(3), e1.clone(), e1.mul(&e1).add(&e2.scale(-2))];
    for k in 3..=d as usize {
        let next = e1
            .mul(&a[k - 1])
            .add(&e2.mul(&a[k - 2]).scale(-1))
            .add(&e3.mul(&a[k - 3]));
        a.push(next);
    }
    a.swap_remove(d as usize)
}

/// The elementary symmetric forms `(x+y+z, xy+yz+zx, xyz)`.
pub fn elementary_symmetric<K: Field>() -> [HomPoly3<K>; 3] {
    let one = || K::one();
    [
        HomPoly3::from_terms(1, &[([1, 0, 0], one()), ([0, 1, 0], one()), ([0, 0, 1], one())]).unwrap(),
        HomPoly3::from_terms(2, &[([1, 1, 0], one()), ([0, 1, 1], one()), ([1, 0, 1], one())]).unwrap(),
        HomPoly3::from_terms(3, &[([1, 1, 1], one())]).unwrap(),
    ]
}
