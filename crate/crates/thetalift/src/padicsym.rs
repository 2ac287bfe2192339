//! Signs over a p-adic field with p odd: square classes, the tame Hilbert
//! symbol with a brute-force oracle, the quadratic character of a quadratic
//! extension, and a finite model of the coefficient chain for the rank-one
//! packet.

use crate::hctheta::{packet_character, FourthRoot, SGroupElement};
use crate::rootcomb::{CaseSpec, EpsPsi, QuatSign, Side, SignedPermutation};
use crate::Rational;
use num_traits::{One, Zero};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("square classes over different primes")]
    PrimeMismatch,
    #[error("zero has no square class")]
    Zero,
    #[error("({0}, {1}) is split: the quaternion algebra is not a division algebra")]
    NotDivision(String, String),
    #[error("η is trivial; the packet is empty")]
    TrivialEta,
    #[error("η has order 2; the two members are not separated by the model")]
    SelfDualEta,
    #[error("invalid character model: {0}")]
    BadModel(String),
    #[error("brute-force search too large for p = {0}")]
    TooLarge(u64),
}

fn is_odd_prime(p: u64) -> bool {
    p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// The Legendre symbol (a/p) by Euler's criterion; 0 when p | a.
pub fn legendre(a: i64, p: u64) -> i8 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// The smallest positive quadratic non-residue mod p.
pub fn nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).expect("odd primes have non-residues")
}

/// An element of F^×/F^×² for F = ℚ_p: p^v·u^e with v, e ∈ {0, 1} and u the
/// smallest non-residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub p: u64,
    pub odd_valuation: bool,
    pub nonresidue: bool,
}

impl SquareClass {
    pub fn new(p: u64, odd_valuation: bool, nonresidue: bool) -> Result<Self, PadicError> {
        if !is_odd_prime(p) {
            return Err(PadicError::NotOddPrime(p));
        }
        Ok(SquareClass { p, odd_valuation, nonresidue })
    }

    pub fn one(p: u64) -> Result<Self, PadicError> {
        Self::new(p, false, false)
    }

    /// The class of a nonzero integer.
    pub fn of_integer(p: u64, x: i64) -> Result<Self, PadicError> {
        if !is_odd_prime(p) {
            return Err(PadicError::NotOddPrime(p));
        }
        if x == 0 {
            return Err(PadicError::Zero);
        }
        let mut x = x;
        let mut v = 0;
        while x % p as i64 == 0 {
            x /= p as i64;
            v += 1;
        }
        Ok(SquareClass { p, odd_valuation: v % 2 == 1, nonresidue: legendre(x, p) == -1 })
    }

    /// The four classes 1, u, p, up.
    pub fn all(p: u64) -> Result<Vec<Self>, PadicError> {
        [(false, false), (false, true), (true, false), (true, true)].into_iter().map(|(v, e)| Self::new(p, v, e)).collect()
    }

    pub fn mul(&self, o: &Self) -> Result<Self, PadicError> {
        if self.p != o.p {
            return Err(PadicError::PrimeMismatch);
        }
        // u² is a square and p² is a square.
        Ok(SquareClass { p: self.p, odd_valuation: self.odd_valuation != o.odd_valuation, nonresidue: self.nonresidue != o.nonresidue })
    }

    /// u^e·p^v as an integer.
    pub fn representative(&self) -> i64 {
        let u = if self.nonresidue { nonresidue(self.p) as i64 } else { 1 };
        let v = if self.odd_valuation { self.p as i64 } else { 1 };
        u * v
    }

    pub fn label(&self) -> &'static str {
        match (self.odd_valuation, self.nonresidue) {
            (false, false) => "1",
            (false, true) => "u",
            (true, false) => "p",
            (true, true) => "up",
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (p = {})", self.label(), self.p)
    }
}

/// The tame Hilbert symbol (x, y)_p = (−1)^{αβ(p−1)/2}·(u₁/p)^β·(u₂/p)^α for
/// x = p^α u₁, y = p^β u₂.
pub fn hilbert_symbol(x: &SquareClass, y: &SquareClass) -> Result<i8, PadicError> {
    if x.p != y.p {
        return Err(PadicError::PrimeMismatch);
    }
    let p = x.p;
    let (a, b) = (x.odd_valuation as u64, y.odd_valuation as u64);
    let mut s = if (a * b * ((p - 1) / 2)) % 2 == 1 { -1 } else { 1 };
    if b == 1 && x.nonresidue {
        s = -s;
    }
    if a == 1 && y.nonresidue {
        s = -s;
    }
    Ok(s)
}

/// +1 when z² = x·s² + y·t² has a solution mod p³ with s or t a unit,
/// −1 otherwise. For p odd and classes of valuation ≤ 1 this decides
/// solvability over ℚ_p.
pub fn hilbert_symbol_brute(x: &SquareClass, y: &SquareClass) -> Result<i8, PadicError> {
    if x.p != y.p {
        return Err(PadicError::PrimeMismatch);
    }
    let p = x.p;
    if p > 13 {
        return Err(PadicError::TooLarge(p));
    }
    let m = p * p * p;
    let squares: HashSet<u64> = (0..m).map(|z| z * z % m).collect();
    let (xr, yr) = (x.representative().rem_euclid(m as i64) as u64, y.representative().rem_euclid(m as i64) as u64);
    for s in 0..m {
        let xs = xr * (s * s % m) % m;
        for t in 0..m {
            if s % p == 0 && t % p == 0 {
                continue;
            }
            if squares.contains(&((xs + yr * (t * t % m)) % m)) {
                return Ok(1);
            }
        }
    }
    Ok(-1)
}

/// ω_{E/F}(x) for E = F(√a): the Hilbert symbol (x, a).
pub fn omega(a: &SquareClass, x: &SquareClass) -> Result<i8, PadicError> {
    hilbert_symbol(x, a)
}

/// The ratio Δ′(γ⁻¹, δ)/Δ′(γ, δ) = ω_{E/F}(−1)·ω_{E/F}(−b) for the division
/// algebra (a, b), E = F(√a). Fails unless it equals (b, a) = −1.
pub fn transfer_ratio(a: &SquareClass, b: &SquareClass) -> Result<i8, PadicError> {
    if hilbert_symbol(a, b)? != -1 {
        return Err(PadicError::NotDivision(a.label().into(), b.label().into()));
    }
    let minus_one = SquareClass::of_integer(a.p, -1)?;
    let minus_b = b.mul(&minus_one)?;
    let ratio = omega(a, &minus_one)? * omega(a, &minus_b)?;
    assert_eq!(ratio, hilbert_symbol(b, a)?, "ω is multiplicative");
    assert_eq!(ratio, -1, "the division condition forces ω(b) = −1");
    Ok(ratio)
}

/// A finite stand-in for E¹: the cyclic group C_N, a character γ ↦ ζ^{ηγ},
/// and a sign function s with s(−γ) = −s(γ) away from the points with
/// γ = −γ (where s is 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCharacterModel {
    n: usize,
    eta: usize,
    s: Vec<i8>,
}

impl FiniteCharacterModel {
    pub fn new(n: usize, eta: usize, s: Vec<i8>) -> Result<Self, PadicError> {
        if n < 3 {
            return Err(PadicError::BadModel(format!("N = {n} has no pair γ ≠ γ⁻¹")));
        }
        if s.len() != n {
            return Err(PadicError::BadModel(format!("s has length {} instead of {n}", s.len())));
        }
        for g in 0..n {
            let gi = (n - g) % n;
            if g == gi {
                if s[g] != 0 {
                    return Err(PadicError::BadModel(format!("s must vanish at the fixed point {g}")));
                }
            } else if !(s[g] == 1 || s[g] == -1) || s[gi] != -s[g] {
                return Err(PadicError::BadModel(format!("s is not antisymmetric at {g}")));
            }
        }
        Ok(FiniteCharacterModel { n, eta: eta % n, s })
    }

    /// The sign function taking +1 on 1..⌈N/2⌉, flipped on the orbits listed
    /// in `flips` (one bool per orbit {γ, γ⁻¹}, γ = 1, 2, …).
    pub fn oriented(n: usize, eta: usize, flips: &[bool]) -> Result<Self, PadicError> {
        let mut s = vec![0i8; n];
        for (k, g) in (1..n).filter(|&g| g < n - g).enumerate() {
            let sign = if flips.get(k).copied().unwrap_or(false) { -1 } else { 1 };
            s[g] = sign;
            s[n - g] = -sign;
        }
        Self::new(n, eta, s)
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    /// Representatives γ with s(γ) = +1, one per orbit {γ, γ⁻¹}.
    fn orbits(&self) -> Vec<usize> {
        (1..self.n).filter(|&g| self.s[g] == 1).collect()
    }
}

/// An element of ℚ[C_N]; the character value ζ^k is the monomial x^k.
type GroupRing = Vec<Rational>;

fn monomial(n: usize, k: usize) -> GroupRing {
    let mut v = vec![Rational::zero(); n];
    v[k % n] = Rational::one();
    v
}

/// The Kottwitz sign of the anisotropic unitary group in rank one.
pub const KOTTWITZ_SIGN: i64 = -1;

/// Coefficients (c₊, c₋) with
/// e(G)·Σ_γ Δ′(γ)·η(γ) = c₊·Tr τ₊ + c₋·Tr τ₋
/// orbit by orbit in the group ring, where Δ′(γ) = pairing·s(γ),
/// Tr τ₊ on the orbit of γ is η(γ) and Tr τ₋ is η(γ⁻¹). The transfer
/// factor antisymmetry Δ′(γ⁻¹) = −Δ′(γ) comes from s.
pub fn coefficient_chain(model: &FiniteCharacterModel, pairing_sign: i8) -> Result<(i8, i8), PadicError> {
    if !(pairing_sign == 1 || pairing_sign == -1) {
        return Err(PadicError::BadModel("the pairing sign must be ±1".into()));
    }
    let n = model.n;
    if model.eta == 0 {
        return Err(PadicError::TrivialEta);
    }
    if (2 * model.eta).is_multiple_of(n) {
        return Err(PadicError::SelfDualEta);
    }
    let transfer = |g: usize| Rational::from_integer((pairing_sign as i64 * model.s[g] as i64).into());
    // Each equation: c₊·a + c₋·b = r for one monomial in one orbit.
    let mut rows: Vec<(Rational, Rational, Rational)> = Vec::new();
    for g in model.orbits() {
        let gi = n - g;
        debug_assert_eq!(transfer(gi), -transfer(g));
        let mut lhs = vec![Rational::zero(); n];
        for h in [g, gi] {
            let term = monomial(n, model.eta * h);
            for (acc, t) in lhs.iter_mut().zip(term) {
                *acc += t * transfer(h) * Rational::from_integer(KOTTWITZ_SIGN.into());
            }
        }
        let plus = monomial(n, model.eta * g);
        let minus = monomial(n, model.eta * gi);
        for k in 0..n {
            rows.push((plus[k].clone(), minus[k].clone(), lhs[k].clone()));
        }
    }
    let (cp, cm) = solve_two(&rows).ok_or_else(|| PadicError::BadModel("the coefficient system has no unique solution".into()))?;
    let to_sign = |c: &Rational| -> Result<i8, PadicError> {
        if *c == Rational::one() {
            Ok(1)
        } else if *c == -Rational::one() {
            Ok(-1)
        } else {
            Err(PadicError::BadModel(format!("coefficient {c} is not a sign")))
        }
    };
    Ok((to_sign(&cp)?, to_sign(&cm)?))
}

/// Solves a·x + b·y = r over all rows, requiring a unique solution.
fn solve_two(rows: &[(Rational, Rational, Rational)]) -> Option<(Rational, Rational)> {
    for (i, r1) in rows.iter().enumerate() {
        for r2 in &rows[i + 1..] {
            let det = r1.0.clone() * r2.1.clone() - r1.1.clone() * r2.0.clone();
            if det.is_zero() {
                continue;
            }
            let x = (r1.2.clone() * r2.1.clone() - r1.1.clone() * r2.2.clone()) / det.clone();
            let y = (r1.0.clone() * r2.2.clone() - r1.2.clone() * r2.0.clone()) / det;
            let consistent = rows.iter().all(|(a, b, r)| a.clone() * x.clone() + b.clone() * y.clone() == *r);
            return consistent.then_some((x, y));
        }
    }
    None
}

/// One line of the rank-one sign ledger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M1N1Row {
    pub spec: CaseSpec,
    pub pairing_sign: i8,
    /// ι(τ₊)(s) and ι(τ₋)(s) at the nontrivial s.
    pub tau_plus: FourthRoot,
    pub tau_minus: FourthRoot,
    pub coefficients: (i8, i8),
    /// ι(τ₋)(s)/ι(τ₊)(s) equals c₋/c₊.
    pub agrees: bool,
}

/// Compares, for every m = n = 1 case and both ε_ψ, the ratio of the packet
/// characters of the two members at the nontrivial element with the ratio
/// of the coefficients from the finite model.
pub fn m1n1_ledger() -> Result<Vec<M1N1Row>, PadicError> {
    let model = FiniteCharacterModel::oriented(5, 1, &[])?;
    let s = SGroupElement::new(vec![-1]);
    let base = SignedPermutation::identity(1);
    let minus = SignedPermutation::sign_flip(1, 0);
    let mut rows = Vec::new();
    for e_h in [QuatSign::Split, QuatSign::Hamilton] {
        for p in 0..=1 {
            for eps in [EpsPsi::PlusI, EpsPsi::MinusI] {
                let spec = CaseSpec::new(e_h, 1, 1, p, 1 - p, eps).expect("rank one case");
                let tau_plus = packet_character(&spec, Side::W, &base, &base, &s).expect("rank one");
                let tau_minus = packet_character(&spec, Side::W, &base, &minus, &s).expect("rank one");
                for pairing_sign in [1i8, -1] {
                    let coefficients = coefficient_chain(&model, pairing_sign)?;
                    let ratio = tau_minus.mul(tau_plus.conj());
                    let agrees = ratio == FourthRoot::from_sign((coefficients.0 * coefficients.1) as i64);
                    rows.push(M1N1Row { spec, pairing_sign, tau_plus, tau_minus, coefficients, agrees });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hilbert_matches_brute_force() {
        for p in [3, 5, 7] {
            let all = SquareClass::all(p).unwrap();
            for x in &all {
                for y in &all {
                    assert_eq!(hilbert_symbol(x, y).unwrap(), hilbert_symbol_brute(x, y).unwrap(), "p={p} {x} {y}");
                }
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        let p5 = SquareClass::new(5, true, false).unwrap();
        let u5 = SquareClass::new(5, false, true).unwrap();
        assert_eq!(u5.representative(), 2);
        assert_eq!(hilbert_symbol(&p5, &u5).unwrap(), -1);
        for y in SquareClass::all(5).unwrap() {
            assert_eq!(hilbert_symbol(&SquareClass::one(5).unwrap(), &y).unwrap(), 1);
        }
    }

    #[test]
    fn hilbert_laws() {
        for p in [3, 5, 7, 11, 13] {
            let all = SquareClass::all(p).unwrap();
            let minus_one = SquareClass::of_integer(p, -1).unwrap();
            for x in &all {
                assert_eq!(hilbert_symbol(x, &x.mul(&minus_one).unwrap()).unwrap(), 1);
                for y in &all {
                    assert_eq!(hilbert_symbol(x, y).unwrap(), hilbert_symbol(y, x).unwrap());
                    for z in &all {
                        let lhs = hilbert_symbol(x, &y.mul(z).unwrap()).unwrap();
                        assert_eq!(lhs, hilbert_symbol(x, y).unwrap() * hilbert_symbol(x, z).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn square_classes() {
        assert_eq!(SquareClass::of_integer(3, 36).unwrap().label(), "1");
        assert_eq!(SquareClass::of_integer(3, -3).unwrap().label(), "up");
        assert_eq!(SquareClass::of_integer(5, -1).unwrap().label(), "1");
        assert!(matches!(SquareClass::new(2, false, false), Err(PadicError::NotOddPrime(2))));
        assert!(matches!(SquareClass::new(9, false, false), Err(PadicError::NotOddPrime(9))));
        let all = SquareClass::all(7).unwrap();
        for x in &all {
            assert_eq!(x.mul(x).unwrap(), SquareClass::one(7).unwrap());
        }
    }

    #[test]
    fn transfer_ratio_on_division_pairs() {
        for p in [3, 5, 7] {
            let all = SquareClass::all(p).unwrap();
            for a in &all {
                for b in &all {
                    match hilbert_symbol(a, b).unwrap() {
                        -1 => assert_eq!(transfer_ratio(a, b).unwrap(), -1),
                        _ => assert!(matches!(transfer_ratio(a, b), Err(PadicError::NotDivision(..)))),
                    }
                }
            }
        }
        let u3 = SquareClass::new(3, false, true).unwrap();
        let p3 = SquareClass::new(3, true, false).unwrap();
        assert_eq!(transfer_ratio(&u3, &p3).unwrap(), -1);
    }

    #[test]
    fn coefficient_examples() {
        let m5 = FiniteCharacterModel::oriented(5, 1, &[]).unwrap();
        assert_eq!(coefficient_chain(&m5, 1).unwrap(), (-1, 1));
        let m8 = FiniteCharacterModel::oriented(8, 1, &[true, false, true]).unwrap();
        assert_eq!(coefficient_chain(&m8, -1).unwrap(), (1, -1));
        let trivial = FiniteCharacterModel::oriented(5, 0, &[]).unwrap();
        assert_eq!(coefficient_chain(&trivial, 1), Err(PadicError::TrivialEta));
        let order_two = FiniteCharacterModel::oriented(8, 4, &[]).unwrap();
        assert_eq!(coefficient_chain(&order_two, 1), Err(PadicError::SelfDualEta));
    }

    #[test]
    fn model_validation() {
        assert!(FiniteCharacterModel::new(5, 1, vec![0, 1, 1, 1, -1]).is_err());
        assert!(FiniteCharacterModel::new(5, 1, vec![1, 1, -1, 1, -1]).is_err());
        assert!(FiniteCharacterModel::new(5, 1, vec![0, 1, 1, -1, -1]).is_ok());
        assert!(FiniteCharacterModel::new(4, 1, vec![0, 1, 1, -1]).is_err());
        assert!(FiniteCharacterModel::new(2, 1, vec![0, 0]).is_err());
    }

    #[test]
    fn ledger_agrees() {
        let rows = m1n1_ledger().unwrap();
        assert_eq!(rows.len(), 16);
        assert!(rows.iter().all(|r| r.agrees));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn chain_independent_of_model(flips in proptest::collection::vec(any::<bool>(), 6), eta in 1usize..12, pairing in prop_oneof![Just(1i8), Just(-1i8)]) {
            for n in [5usize, 8, 12] {
                let model = FiniteCharacterModel::oriented(n, eta, &flips).unwrap();
                match coefficient_chain(&model, pairing) {
                    Ok(c) => prop_assert_eq!(c, (-pairing, pairing)),
                    Err(e) => prop_assert!(eta % n == 0 || (2 * eta) % n == 0, "{e}"),
                }
            }
        }

        #[test]
        fn hilbert_bilinear_random(p in prop_oneof![Just(3u64), Just(5), Just(7), Just(11)], a in -50i64..50, b in -50i64..50, c in -50i64..50) {
            prop_assume!(a != 0 && b != 0 && c != 0);
            let (x, y, z) = (SquareClass::of_integer(p, a).unwrap(), SquareClass::of_integer(p, b).unwrap(), SquareClass::of_integer(p, c).unwrap());
            prop_assert_eq!(hilbert_symbol(&x, &y.mul(&z).unwrap()).unwrap(), hilbert_symbol(&x, &y).unwrap() * hilbert_symbol(&x, &z).unwrap());
        }
    }
}
