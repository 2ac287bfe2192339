//! ℚ[s_1, …, s_k]/(s_j² − v_j) for multiplicatively independent v_j.

use crate::matrix::Matrix;
use crate::scalar::{is_rational_square, rat_string, rational_sqrt, Field};
use crate::Rational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

pub const MAX_RADICALS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("radicals are multiplicatively dependent: {0}")]
    Dependent(String),
    #[error("√({0}) is not in the tower")]
    NotInTower(String),
    #[error("too many radicals")]
    TooLarge,
}

/// The declared radicals: names and the rationals they square to.
#[derive(Debug, PartialEq, Eq)]
pub struct Tower {
    names: Vec<String>,
    values: Vec<Rational>,
}

fn subset_product(values: &[Rational], mask: u32) -> Rational {
    values.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).fold(Rational::one(), |acc, (_, v)| acc * v)
}

fn sqrt_name(v: &Rational) -> String {
    if v.is_integer() {
        format!("√{}", v.numer())
    } else {
        format!("√({})", rat_string(v))
    }
}

impl Tower {
    /// Fails unless no nonempty product of the values is a rational square.
    pub fn new(values: Vec<Rational>) -> Result<Arc<Tower>, TowerError> {
        if values.len() > MAX_RADICALS {
            return Err(TowerError::TooLarge);
        }
        for mask in 1..1u32 << values.len() {
            let prod = subset_product(&values, mask);
            if is_rational_square(&prod) {
                return Err(TowerError::Dependent(
                    values.iter().map(rat_string).collect::<Vec<_>>().join(", "),
                ));
            }
        }
        let names = values.iter().map(sqrt_name).collect();
        Ok(Arc::new(Tower { names, values }))
    }

    /// The smallest tower in which every value has a square root, adding
    /// radicals greedily in order.
    pub fn containing(values: &[Rational]) -> Result<Arc<Tower>, TowerError> {
        let mut chosen: Vec<Rational> = Vec::new();
        for v in values {
            if v.is_zero() {
                continue;
            }
            let expressible = (0..1u32 << chosen.len()).any(|mask| is_rational_square(&(v / subset_product(&chosen, mask))));
            if !expressible {
                chosen.push(v.clone());
            }
        }
        Tower::new(chosen)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// An element of a radical tower. Scalars with only a rational part carry no
/// tower and combine with any.
#[derive(Clone)]
pub struct TowerScalar {
    tower: Option<Arc<Tower>>,
    terms: BTreeMap<u32, Rational>,
}

impl PartialEq for TowerScalar {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for TowerScalar {}

impl fmt::Debug for TowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (mask, c) in &self.terms {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let radical: Vec<&str> = match &self.tower {
                Some(t) => (0..t.len()).filter(|j| mask >> j & 1 == 1).map(|j| t.names[j].as_str()).collect(),
                None => Vec::new(),
            };
            if radical.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", radical.join("·"))?;
            } else {
                write!(f, "{a}·{}", radical.join("·"))?;
            }
        }
        Ok(())
    }
}

impl TowerScalar {
    pub fn rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(0, q);
        }
        TowerScalar { tower: None, terms }
    }

    /// The j-th declared radical s_j.
    pub fn radical(tower: &Arc<Tower>, j: usize) -> Self {
        assert!(j < tower.len(), "radical index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(1 << j, Rational::one());
        TowerScalar { tower: Some(tower.clone()), terms }
    }

    /// A square root of `v` inside the tower: r·Π_{j∈A} s_j with r > 0.
    pub fn sqrt(tower: &Arc<Tower>, v: &Rational) -> Result<Self, TowerError> {
        if v.is_zero() {
            return Ok(Self::zero());
        }
        for mask in 0..1u32 << tower.len() {
            let prod = subset_product(&tower.values, mask);
            if let Some(r) = rational_sqrt(&(v / &prod)) {
                let mut terms = BTreeMap::new();
                terms.insert(mask, r);
                return Ok(TowerScalar { tower: Some(tower.clone()), terms });
            }
        }
        Err(TowerError::NotInTower(rat_string(v)))
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        self.tower.as_ref()
    }

    pub fn terms(&self) -> &BTreeMap<u32, Rational> {
        &self.terms
    }

    /// The rational value when no radical occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    fn join(&self, other: &Self) -> Option<Arc<Tower>> {
        match (&self.tower, &other.tower) {
            (Some(a), Some(b)) => {
                assert!(Arc::ptr_eq(a, b) || **a == **b, "scalars from different towers");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn add_term(&mut self, mask: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&mask) {
            Some(old) => old + c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(mask, s);
        }
    }

    /// s_j ↦ signs[j]·s_j.
    pub fn apply_signs(&self, signs: &[i8]) -> Self {
        let mut out = TowerScalar { tower: self.tower.clone(), terms: BTreeMap::new() };
        for (mask, c) in &self.terms {
            let flips = signs.iter().enumerate().filter(|(j, s)| mask >> j & 1 == 1 && **s < 0).count();
            out.add_term(*mask, if flips % 2 == 0 { c.clone() } else { -c.clone() });
        }
        out
    }

    fn highest_radical(&self) -> Option<usize> {
        self.terms.keys().filter(|m| **m != 0).map(|m| 31 - m.leading_zeros() as usize).max()
    }
}

impl Add for TowerScalar {
    type Output = TowerScalar;
    fn add(self, o: TowerScalar) -> TowerScalar {
        let tower = self.join(&o);
        let mut out = TowerScalar { tower, terms: self.terms };
        for (m, c) in o.terms {
            out.add_term(m, c);
        }
        out
    }
}

impl Neg for TowerScalar {
    type Output = TowerScalar;
    fn neg(self) -> TowerScalar {
        TowerScalar { tower: self.tower, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for TowerScalar {
    type Output = TowerScalar;
    fn sub(self, o: TowerScalar) -> TowerScalar {
        self + (-o)
    }
}

impl Mul for TowerScalar {
    type Output = TowerScalar;
    fn mul(self, o: TowerScalar) -> TowerScalar {
        let tower = self.join(&o);
        let mut out = TowerScalar { tower: tower.clone(), terms: BTreeMap::new() };
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let common = a & b;
                let mut c = ca * cb;
                if common != 0 {
                    let t = tower.as_ref().expect("radicals require a tower");
                    c *= subset_product(&t.values, common);
                }
                out.add_term(a ^ b, c);
            }
        }
        out
    }
}

impl Zero for TowerScalar {
    fn zero() -> Self {
        TowerScalar { tower: None, terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for TowerScalar {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Field for TowerScalar {
    /// Inverse by multiplying with conjugates, eliminating one radical at a time.
    fn inv(&self) -> Option<Self> {
        match self.highest_radical() {
            None => {
                let q = self.terms.get(&0)?;
                Some(Self::rational(q.recip()))
            }
            Some(j) => {
                let mut signs = vec![1i8; j + 1];
                signs[j] = -1;
                let conj = self.apply_signs(&signs);
                let norm = self.clone() * conj.clone();
                debug_assert!(norm.highest_radical().is_none_or(|h| h < j));
                Some(conj * norm.inv()?)
            }
        }
    }

    fn from_i64(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }
}

pub type TowerMatrix = Matrix<TowerScalar>;

/// An order-two automorphism acting on each radical by a sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisAction {
    pub signs: Vec<i8>,
}

impl GaloisAction {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(signs.iter().all(|s| *s == 1 || *s == -1), "signs must be ±1");
        GaloisAction { signs }
    }

    /// Flips exactly the listed radicals.
    pub fn flipping(tower: &Tower, flipped: &[usize]) -> Self {
        Self::new((0..tower.len()).map(|j| if flipped.contains(&j) { -1 } else { 1 }).collect())
    }

    pub fn apply(&self, x: &TowerScalar) -> TowerScalar {
        x.apply_signs(&self.signs)
    }

    pub fn apply_matrix(&self, m: &TowerMatrix) -> TowerMatrix {
        m.map(|x| self.apply(x))
    }

    /// Whether x lies in the subfield generated by the unflipped radicals.
    pub fn fixes(&self, x: &TowerScalar) -> bool {
        self.apply(x) == *x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn tower() -> Arc<Tower> {
        Tower::new(vec![int(-1), int(2), int(5)]).unwrap()
    }

    fn elem(t: &Arc<Tower>, c: &[i64]) -> TowerScalar {
        c.iter().enumerate().fold(TowerScalar::zero(), |acc, (mask, k)| {
            let mut terms = BTreeMap::new();
            terms.insert(mask as u32, int(*k));
            acc + TowerScalar { tower: Some(t.clone()), terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
        })
    }

    #[test]
    fn radicals_square_correctly() {
        let t = tower();
        let i = TowerScalar::radical(&t, 0);
        assert_eq!(i.clone() * i, TowerScalar::from_i64(-1));
        let s = TowerScalar::sqrt(&t, &int(-10)).unwrap();
        assert_eq!(s.clone() * s, TowerScalar::from_i64(-10));
        assert_eq!(TowerScalar::sqrt(&t, &rat(9, 4)).unwrap(), TowerScalar::rational(rat(3, 2)));
        assert!(TowerScalar::sqrt(&t, &int(3)).is_err());
    }

    #[test]
    fn dependence_is_rejected() {
        assert!(Tower::new(vec![int(2), int(8)]).is_err());
        assert!(Tower::new(vec![int(2), int(3), int(6)]).is_err());
        assert!(Tower::new(vec![int(4)]).is_err());
        let t = Tower::containing(&[int(2), int(-1), int(8), int(-2), int(9)]).unwrap();
        assert_eq!(t.values(), &[int(2), int(-1)]);
    }

    #[test]
    fn display() {
        let t = tower();
        let x = elem(&t, &[1, 0, -2, 3]);
        assert_eq!(x.to_string(), "1 - 2·√2 + 3·√-1·√2");
    }

    #[test]
    fn galois_fixes_subfield() {
        let t = tower();
        let sigma = GaloisAction::flipping(&t, &[0]);
        assert!(sigma.fixes(&TowerScalar::radical(&t, 1)));
        assert!(!sigma.fixes(&TowerScalar::radical(&t, 0)));
        assert!(sigma.fixes(&(TowerScalar::radical(&t, 0) * TowerScalar::radical(&t, 0))));
    }

    fn arb(t: Arc<Tower>) -> impl Strategy<Value = TowerScalar> {
        prop::collection::vec(-3i64..=3, 8).prop_map(move |c| elem(&t, &c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(x in arb(tower()), y in arb(tower()), z in arb(tower())) {
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
            prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
            prop_assert_eq!(x.clone() - x.clone(), TowerScalar::zero());
        }

        #[test]
        fn inverses(x in arb(tower())) {
            prop_assume!(!x.is_zero());
            let inv = x.inv().unwrap();
            prop_assert_eq!(x * inv, TowerScalar::one());
        }

        #[test]
        fn galois_is_automorphism(x in arb(tower()), y in arb(tower()), s in prop::collection::vec(prop::bool::ANY, 3)) {
            let g = GaloisAction::new(s.iter().map(|b| if *b { -1 } else { 1 }).collect());
            prop_assert_eq!(g.apply(&(x.clone() * y.clone())), g.apply(&x) * g.apply(&y));
            prop_assert_eq!(g.apply(&(x.clone() + y.clone())), g.apply(&x) + g.apply(&y));
            prop_assert_eq!(g.apply(&g.apply(&x)), x);
        }
    }
}
