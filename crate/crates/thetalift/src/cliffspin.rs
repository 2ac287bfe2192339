//! The Clifford algebra of a split quadratic space of dimension 2r with
//! basis x_1..x_r, y_r..y_1 and (x_k, y_k) = 1, torus elements of Spin and
//! the outer automorphism swapping x_r and y_r.
//!
//! Relation: uv + vu = 2(u, v). Internally elements are stored in the
//! orthogonal basis e_k = x_k + y_k, f_k = x_k − y_k, with e_k² = 2 and
//! f_k² = −2.

use crate::matrix::Matrix;
use crate::scalar::{int, Field};
use crate::GaussianRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("the norm is not a scalar")]
    NormNotScalar,
    #[error("element is not in the kernel of the covering map")]
    NotInKernel,
    #[error("torus coordinates must satisfy prod a_k b_k = 1")]
    BadTorusCoords,
    #[error("element is not invertible")]
    NotInvertible,
}

pub const MAX_RANK: usize = 12;

/// An element of Cl(X) for dim X = 2r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordElement {
    pub r: usize,
    terms: BTreeMap<u32, GaussianRational>,
}

fn g(x: i64) -> GaussianRational {
    GaussianRational::from_i64(x)
}

impl CliffordElement {
    pub fn zero(r: usize) -> Self {
        assert!(r <= MAX_RANK, "rank too large");
        CliffordElement { r, terms: BTreeMap::new() }
    }

    pub fn scalar(r: usize, c: GaussianRational) -> Self {
        let mut out = Self::zero(r);
        out.add_term(0, c);
        out
    }

    pub fn one(r: usize) -> Self {
        Self::scalar(r, GaussianRational::one())
    }

    fn blade(r: usize, mask: u32, c: GaussianRational) -> Self {
        let mut out = Self::zero(r);
        out.add_term(mask, c);
        out
    }

    fn e_bit(&self, k: usize) -> u32 {
        1 << k
    }

    fn f_bit(&self, k: usize) -> u32 {
        1 << (self.r + k)
    }

    /// x_k (zero-based k).
    pub fn x(r: usize, k: usize) -> Self {
        let z = Self::zero(r);
        let half = GaussianRational::real(crate::scalar::rat(1, 2));
        Self::blade(r, z.e_bit(k), half.clone()).add(&Self::blade(r, z.f_bit(k), half))
    }

    /// y_k (zero-based k).
    pub fn y(r: usize, k: usize) -> Self {
        let z = Self::zero(r);
        let half = GaussianRational::real(crate::scalar::rat(1, 2));
        Self::blade(r, z.e_bit(k), half.clone()).add(&Self::blade(r, z.f_bit(k), -half))
    }

    /// The generators in the order x_1, …, x_r, y_r, …, y_1.
    pub fn basis_vectors(r: usize) -> Vec<Self> {
        (0..r).map(|k| Self::x(r, k)).chain((0..r).rev().map(|k| Self::y(r, k))).collect()
    }

    fn add_term(&mut self, mask: u32, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let s = self.terms.remove(&mask).map_or(c.clone(), |old| old + c);
        if !s.is_zero() {
            self.terms.insert(mask, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The scalar part if the element is a scalar.
    pub fn as_scalar(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-GaussianRational::one()))
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        let mut out = Self::zero(self.r);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone() * k.clone());
        }
        out
    }

    fn blade_product(&self, a: u32, b: u32) -> (u32, i64) {
        // Sign from moving each generator of b left past the larger ones of a.
        let mut swaps = 0;
        let mut bb = b;
        while bb != 0 {
            let low = bb.trailing_zeros();
            swaps += (a >> (low + 1)).count_ones();
            bb &= bb - 1;
        }
        let mut factor: i64 = if swaps % 2 == 0 { 1 } else { -1 };
        let common = a & b;
        let e_mask = (1u32 << self.r) - 1;
        factor *= 2i64.pow(common.count_ones());
        if (common & !e_mask).count_ones() % 2 == 1 {
            factor = -factor;
        }
        (a ^ b, factor)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.r, o.r, "ranks differ");
        let mut out = Self::zero(self.r);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let (m, f) = self.blade_product(*a, *b);
                out.add_term(m, ca.clone() * cb.clone() * g(f));
            }
        }
        out
    }

    /// The anti-automorphism reversing the order of factors.
    pub fn reversal(&self) -> Self {
        let mut out = Self::zero(self.r);
        for (m, c) in &self.terms {
            let k = m.count_ones();
            let s = if (k * (k.saturating_sub(1)) / 2) % 2 == 0 { 1 } else { -1 };
            out.add_term(*m, c.clone() * g(s));
        }
        out
    }

    /// γ, induced by −1 on X.
    pub fn gamma(&self) -> Self {
        let mut out = Self::zero(self.r);
        for (m, c) in &self.terms {
            let s = if m.count_ones() % 2 == 0 { 1 } else { -1 };
            out.add_term(*m, c.clone() * g(s));
        }
        out
    }

    /// N(u) = u·u*, which must be a scalar.
    pub fn norm(&self) -> Result<GaussianRational, CliffordError> {
        self.mul(&self.reversal()).as_scalar().ok_or(CliffordError::NormNotScalar)
    }

    /// Inverse of a Clifford-group element, u*/N(u).
    pub fn inverse(&self) -> Result<Self, CliffordError> {
        let n = self.norm()?;
        let ni = n.inv().ok_or(CliffordError::NotInvertible)?;
        Ok(self.reversal().scale(&ni))
    }

    /// The automorphism fixing x_k, y_k for k < r and swapping x_r, y_r.
    pub fn theta_conj(&self) -> Self {
        let mut out = Self::zero(self.r);
        let fr = self.f_bit(self.r - 1);
        for (m, c) in &self.terms {
            let s = if m & fr != 0 { -1 } else { 1 };
            out.add_term(*m, c.clone() * g(s));
        }
        out
    }

    /// Coordinates (in the basis x_1..x_r, y_r..y_1) of a vector, or `None`
    /// if the element is not in X.
    pub fn vector_coords(&self) -> Option<Vec<GaussianRational>> {
        if self.terms.keys().any(|m| m.count_ones() != 1) {
            return None;
        }
        let r = self.r;
        let coef = |mask: u32| self.terms.get(&mask).cloned().unwrap_or_else(GaussianRational::zero);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 0..r {
            let (al, be) = (coef(self.e_bit(k)), coef(self.f_bit(k)));
            xs.push(al.clone() + be.clone());
            ys.push(al - be);
        }
        ys.reverse();
        Some([xs, ys].concat())
    }

    /// The matrix of v ↦ γ(g) v g⁻¹ on X, columns indexed by x_1..x_r, y_r..y_1.
    pub fn conjugation_matrix(&self) -> Result<Option<Matrix<GaussianRational>>, CliffordError> {
        let inv = self.inverse()?;
        let gm = self.gamma();
        let mut cols = Vec::new();
        for v in Self::basis_vectors(self.r) {
            match gm.mul(&v).mul(&inv).vector_coords() {
                Some(c) => cols.push(c),
                None => return Ok(None),
            }
        }
        let n = 2 * self.r;
        Ok(Some(Matrix::from_fn(n, n, |i, j| cols[j][i].clone())))
    }

    /// The orthogonal idempotents E_S = Π_{k∈S} e_k Π_{k∉S} f_k with
    /// e_k = x_k y_k / 2 and f_k = y_k x_k / 2, indexed by bitmask S.
    pub fn idempotent(r: usize, s: u32) -> Self {
        (0..r).fold(Self::one(r), |acc, k| {
            let (a, b) = if s >> k & 1 == 1 { (g(1), g(0)) } else { (g(0), g(1)) };
            acc.mul(&pair_factor(r, k, a, b))
        })
    }

    /// Coefficients λ_S with self = Σ λ_S E_S, if self lies in that span.
    pub fn idempotent_coords(&self) -> Option<Vec<GaussianRational>> {
        let r = self.r;
        let coords: Vec<GaussianRational> = (0..1u32 << r)
            .map(|s| {
                let e = Self::idempotent(r, s);
                // E_S·u·E_S = λ_S E_S for u in the span; read λ_S off the scalar part.
                let p = e.mul(self).mul(&e);
                let scal = e.terms.get(&0).cloned().unwrap_or_else(GaussianRational::zero);
                p.terms.get(&0).cloned().unwrap_or_else(GaussianRational::zero).div(&scal).unwrap_or_else(GaussianRational::zero)
            })
            .collect();
        let rebuilt =
            coords.iter().enumerate().fold(Self::zero(r), |acc, (s, l)| acc.add(&Self::idempotent(r, s as u32).scale(l)));
        (rebuilt == *self).then_some(coords)
    }
}

fn pair_factor(r: usize, k: usize, a: GaussianRational, b: GaussianRational) -> CliffordElement {
    let x = CliffordElement::x(r, k);
    let y = CliffordElement::y(r, k);
    let half = GaussianRational::real(crate::scalar::rat(1, 2));
    x.mul(&y).scale(&(a * half.clone())).add(&y.mul(&x).scale(&(b * half)))
}

/// (a_1, …, a_r; b_1, …, b_r) with Π a_k b_k = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusCoords {
    pub a: Vec<GaussianRational>,
    pub b: Vec<GaussianRational>,
}

impl TorusCoords {
    pub fn new(a: Vec<GaussianRational>, b: Vec<GaussianRational>) -> Result<Self, CliffordError> {
        if a.len() != b.len() || a.iter().chain(&b).any(|x| x.is_zero()) {
            return Err(CliffordError::BadTorusCoords);
        }
        let prod = a.iter().zip(&b).fold(GaussianRational::one(), |acc, (x, y)| acc * x.clone() * y.clone());
        if !prod.is_one() {
            return Err(CliffordError::BadTorusCoords);
        }
        Ok(TorusCoords { a, b })
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    /// The diagonal of t̃: (a_1/b_1, …, a_r/b_r, b_r/a_r, …, b_1/a_1).
    pub fn covering_diagonal(&self) -> Vec<GaussianRational> {
        let ratio = |x: &GaussianRational, y: &GaussianRational| x.div(y).expect("nonzero");
        let first: Vec<_> = self.a.iter().zip(&self.b).map(|(a, b)| ratio(a, b)).collect();
        let second: Vec<_> = self.a.iter().zip(&self.b).rev().map(|(a, b)| ratio(b, a)).collect();
        [first, second].concat()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = |u: &[GaussianRational], v: &[GaussianRational]| u.iter().zip(v).map(|(x, y)| x.clone() * y.clone()).collect();
        TorusCoords { a: m(&self.a, &o.a), b: m(&self.b, &o.b) }
    }
}

/// t((a; b)) = Π_k ½(a_k x_k y_k + b_k y_k x_k).
pub fn torus_elem(t: &TorusCoords) -> CliffordElement {
    let r = t.rank();
    (0..r).fold(CliffordElement::one(r), |acc, k| acc.mul(&pair_factor(r, k, t.a[k].clone(), t.b[k].clone())))
}

/// Whether v ↦ γ(k) v k⁻¹ is the identity on X.
pub fn in_kernel(k: &CliffordElement) -> Result<bool, CliffordError> {
    Ok(k.conjugation_matrix()?.is_some_and(|m| m.is_identity()))
}

/// u on ker t̃: a kernel element is Σ λ E_S with every λ_S equal to the
/// product of the a-coordinates of any representative.
pub fn u_invariant(k: &CliffordElement) -> Result<i8, CliffordError> {
    if !in_kernel(k).map_err(|_| CliffordError::NotInKernel)? {
        return Err(CliffordError::NotInKernel);
    }
    let coords = k.idempotent_coords().ok_or(CliffordError::NotInKernel)?;
    let first = coords[0].clone();
    if coords.iter().any(|c| *c != first) {
        return Err(CliffordError::NotInKernel);
    }
    if first == g(1) {
        Ok(1)
    } else if first == g(-1) {
        Ok(-1)
    } else {
        Err(CliffordError::NotInKernel)
    }
}

/// c = t((√−1, …, √−1; −√−1, …, −√−1)).
pub fn center_element(r: usize) -> CliffordElement {
    let i = GaussianRational::i();
    let t = TorusCoords::new(vec![i.clone(); r], vec![-i; r]).expect("Π (√−1)(−√−1) = 1");
    torus_elem(&t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinReport {
    pub r: usize,
    pub theta_fixes_pm1: bool,
    pub theta_moves_c: bool,
    pub quotient_in_kernel: bool,
    pub u_value: Option<i8>,
    pub characters_swapped: bool,
    pub note: Option<String>,
}

impl SpinReport {
    pub fn passed(&self) -> bool {
        self.theta_fixes_pm1
            && self.theta_moves_c
            && self.quotient_in_kernel
            && self.u_value == Some(-1)
            && self.characters_swapped
    }
}

/// θ fixes ±1, moves c, and θ(c)c⁻¹ is the kernel element with u = −1; the
/// two characters of Z̃ nontrivial on Z̃₀ are swapped by θ.
pub fn verify_prop_spin(r: usize) -> Result<SpinReport, CliffordError> {
    let one = CliffordElement::one(r);
    let minus = one.scale(&g(-1));
    let theta_fixes_pm1 = one.theta_conj() == one && minus.theta_conj() == minus;
    let c = center_element(r);
    let tc = c.theta_conj();
    let q = tc.mul(&c.inverse()?);
    let quotient_in_kernel = in_kernel(&q)?;
    let u_value = u_invariant(&q).ok();
    // Characters ζ of Z̃ = {±1, ±c} with ζ(−1) = −1 are fixed by ζ(c), a square
    // root of ζ(c²). θ swaps them iff ζ(θ(c)) = −ζ(c) for both.
    let c2 = c.mul(&c).as_scalar();
    let characters_swapped = match (&c2, tc == c.scale(&g(-1))) {
        (Some(s), true) if *s == g(1) || *s == g(-1) => true,
        _ => false,
    };
    let note = (r == 1).then(|| "rank 1: the preimage of ±1 is not the center".to_string());
    Ok(SpinReport {
        r,
        theta_fixes_pm1,
        theta_moves_c: tc != c,
        quotient_in_kernel,
        u_value,
        characters_swapped,
        note,
    })
}

/// Helper: Gaussian integer a + b√−1.
pub fn gi(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(int(re), int(im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defining_relations() {
        let (x, y) = (CliffordElement::x(2, 0), CliffordElement::y(2, 0));
        assert_eq!(x.mul(&y).add(&y.mul(&x)), CliffordElement::scalar(2, g(2)));
        assert!(x.mul(&x).is_zero());
        let y2 = CliffordElement::y(2, 1);
        assert_eq!(x.mul(&y2), y2.mul(&x).scale(&g(-1)));
        let e = x.mul(&y).scale(&GaussianRational::real(crate::scalar::rat(1, 2)));
        assert_eq!(e.mul(&e), e);
    }

    #[test]
    fn reversal_and_norm() {
        let (x, y) = (CliffordElement::x(1, 0), CliffordElement::y(1, 0));
        assert_eq!(x.mul(&y).reversal(), y.mul(&x));
        assert_eq!(CliffordElement::one(3).norm().unwrap(), g(1));
        let t = TorusCoords::new(vec![gi(2, 0), gi(0, 1)], vec![gi(1, 1), gi(0, 1)]);
        assert!(t.is_err());
        let t = TorusCoords::new(vec![gi(2, 0), gi(0, 1)], vec![GaussianRational::real(crate::scalar::rat(1, 2)), gi(0, -1)])
            .unwrap();
        assert!(TorusCoords::new(vec![gi(2, 0)], vec![gi(2, 0)]).is_err());
        assert_eq!(torus_elem(&t).norm().unwrap(), g(1));
    }

    #[test]
    fn torus_action() {
        let i = GaussianRational::i();
        let t = TorusCoords::new(vec![i.clone()], vec![-i]).unwrap();
        let m = torus_elem(&t).conjugation_matrix().unwrap().unwrap();
        assert_eq!(m, Matrix::diag(&[g(-1), g(-1)]));
        let ones = TorusCoords::new(vec![g(1); 3], vec![g(1); 3]).unwrap();
        assert_eq!(torus_elem(&ones), CliffordElement::one(3));
    }

    #[test]
    fn theta_examples() {
        let r = 3;
        assert_eq!(CliffordElement::x(r, r - 1).theta_conj(), CliffordElement::y(r, r - 1));
        let t = TorusCoords::new(vec![gi(2, 0), gi(1, 0), gi(0, 1)], vec![GaussianRational::real(crate::scalar::rat(1, 2)), gi(-1, 0), gi(0, 1)])
            .unwrap();
        let te = torus_elem(&t);
        assert_eq!(te.theta_conj(), te);
        assert_eq!(te.theta_conj().theta_conj(), te);
    }

    #[test]
    fn u_values() {
        assert_eq!(u_invariant(&CliffordElement::one(2)).unwrap(), 1);
        assert_eq!(u_invariant(&CliffordElement::scalar(2, g(-1))).unwrap(), -1);
        assert!(u_invariant(&CliffordElement::x(2, 0)).is_err());
        assert!(u_invariant(&center_element(2)).is_err());
    }

    #[test]
    fn prop_spin_small() {
        for r in 2..=4 {
            assert!(verify_prop_spin(r).unwrap().passed(), "r = {r}");
        }
        let rep = verify_prop_spin(1).unwrap();
        assert!(rep.note.is_some());
    }

    fn small_gi() -> impl Strategy<Value = GaussianRational> {
        (-2i64..=2, -2i64..=2).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0).prop_map(|(a, b)| gi(a, b))
    }

    fn torus(r: usize) -> impl Strategy<Value = TorusCoords> {
        (prop::collection::vec(small_gi(), r), prop::collection::vec(small_gi(), r - 1)).prop_map(move |(a, mut b)| {
            let prod = a.iter().chain(&b).fold(GaussianRational::one(), |acc, x| acc * x.clone());
            b.push(prod.inv().unwrap());
            TorusCoords::new(a, b).unwrap()
        })
    }

    fn element(r: usize) -> impl Strategy<Value = CliffordElement> {
        prop::collection::vec((0u32..1 << (2 * r), small_gi()), 1..5).prop_map(move |ts| {
            ts.into_iter().fold(CliffordElement::zero(r), |acc, (m, c)| acc.add(&CliffordElement::blade(r, m, c)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associative(u in element(3), v in element(3), w in element(3)) {
            prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        }

        #[test]
        fn reversal_anti(u in element(3), v in element(3)) {
            prop_assert_eq!(u.mul(&v).reversal(), v.reversal().mul(&u.reversal()));
        }

        #[test]
        fn torus_is_multiplicative(t in torus(3), s in torus(3)) {
            let (a, b) = (torus_elem(&t), torus_elem(&s));
            prop_assert_eq!(a.mul(&b), torus_elem(&t.mul(&s)));
            prop_assert_eq!(a.mul(&b).norm().unwrap(), a.norm().unwrap() * b.norm().unwrap());
            prop_assert_eq!(a.norm().unwrap(), g(1));
        }

        #[test]
        fn torus_covering_map(t in torus(3)) {
            let m = torus_elem(&t).conjugation_matrix().unwrap().unwrap();
            prop_assert_eq!(m, Matrix::diag(&t.covering_diagonal()));
        }
    }
}
