//! Root systems of types C and D in the standard coordinates, signed
//! permutation Weyl groups, positive systems and Harish-Chandra parameters.

use crate::scalar::Field;
use crate::Rational;
use itertools::Itertools;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Largest rank accepted by [`enumerate_positive_systems`].
pub const MAX_ENUM_RANK: usize = 6;

/// Scalars with a compatible total order (exact rationals in practice).
pub trait OrderedField: Field + PartialOrd {}
impl<T: Field + PartialOrd> OrderedField for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("weight is singular: it is orthogonal to the root {0}")]
    SingularWeight(Root),
    #[error("rank {0} exceeds the enumeration limit {MAX_ENUM_RANK}")]
    RankTooLarge(usize),
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("invalid positive system: {0}")]
    InvalidPositiveSystem(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Type C: roots ±e_i±e_j and ±2e_i.
    C,
    /// Type D: roots ±e_i±e_j.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootKind {
    /// e_i − e_j
    Diff,
    /// e_i + e_j
    Sum,
    /// 2e_i
    Long,
}

/// A root stored with `i < j` (or `i == j` for `Long`) and an overall sign.
/// Indices are zero-based; display is one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub kind: RootKind,
    pub i: usize,
    pub j: usize,
    pub positive: bool,
}

impl Root {
    /// e_i − e_j for i ≠ j.
    pub fn diff(i: usize, j: usize) -> Root {
        assert_ne!(i, j, "e_i - e_i is not a root");
        if i < j {
            Root { kind: RootKind::Diff, i, j, positive: true }
        } else {
            Root { kind: RootKind::Diff, i: j, j: i, positive: false }
        }
    }

    /// e_i + e_j for i ≠ j.
    pub fn sum(i: usize, j: usize) -> Root {
        assert_ne!(i, j, "e_i + e_i is written as a long root");
        Root { kind: RootKind::Sum, i: i.min(j), j: i.max(j), positive: true }
    }

    /// 2e_i.
    pub fn long(i: usize) -> Root {
        Root { kind: RootKind::Long, i, j: i, positive: true }
    }

    pub fn neg(self) -> Root {
        Root { positive: !self.positive, ..self }
    }

    pub fn sign(&self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    /// Largest coordinate index touched, plus one.
    pub fn min_rank(&self) -> usize {
        self.j + 1
    }

    pub fn coeffs(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        let s = self.sign();
        match self.kind {
            RootKind::Diff => {
                v[self.i] = s;
                v[self.j] = -s;
            }
            RootKind::Sum => {
                v[self.i] = s;
                v[self.j] = s;
            }
            RootKind::Long => v[self.i] = 2 * s,
        }
        v
    }

    /// Recognizes a coefficient vector of the shape ±e_i±e_j or ±2e_i.
    pub fn from_coeffs(c: &[i64]) -> Option<Root> {
        let nz: Vec<(usize, i64)> = c.iter().copied().enumerate().filter(|&(_, x)| x != 0).collect();
        match nz.as_slice() {
            [(i, 2)] => Some(Root::long(*i)),
            [(i, -2)] => Some(Root::long(*i).neg()),
            [(i, a), (j, b)] if a.abs() == 1 && b.abs() == 1 => {
                let r = if a == b { Root::sum(*i, *j) } else { Root::diff(*i, *j) };
                Some(if *a == 1 { r } else { r.neg() })
            }
            _ => None,
        }
    }

    pub fn in_family(&self, family: Family) -> bool {
        family == Family::C || self.kind != RootKind::Long
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = (self.i + 1, self.j + 1);
        let body = match self.kind {
            RootKind::Diff => format!("e{i}-e{j}"),
            RootKind::Sum => format!("e{i}+e{j}"),
            RootKind::Long => format!("2e{i}"),
        };
        if self.positive {
            write!(f, "{body}")
        } else {
            write!(f, "-({body})")
        }
    }
}

/// The standard positive roots of the family.
pub fn standard_positive_roots(family: Family, rank: usize) -> Vec<Root> {
    let mut out = Vec::new();
    for i in 0..rank {
        for j in i + 1..rank {
            out.push(Root::diff(i, j));
            out.push(Root::sum(i, j));
        }
        if family == Family::C {
            out.push(Root::long(i));
        }
    }
    out
}

pub fn all_roots(family: Family, rank: usize) -> Vec<Root> {
    let pos = standard_positive_roots(family, rank);
    pos.iter().copied().chain(pos.iter().map(|r| r.neg())).collect()
}

/// ⟨μ, α⟩ with the standard bilinear form (so ⟨μ, 2e_i⟩ = 2μ_i).
pub fn pairing<T: Field>(mu: &[T], alpha: &Root) -> T {
    let s = T::from_i64(alpha.sign());
    let v = match alpha.kind {
        RootKind::Diff => mu[alpha.i].clone() - mu[alpha.j].clone(),
        RootKind::Sum => mu[alpha.i].clone() + mu[alpha.j].clone(),
        RootKind::Long => mu[alpha.i].clone() + mu[alpha.i].clone(),
    };
    s * v
}

/// Half the sum of a set of roots.
pub fn rho<'a, T: Field>(roots: impl IntoIterator<Item = &'a Root>, rank: usize) -> Vec<T> {
    let mut acc = vec![0i64; rank];
    for r in roots {
        for (a, c) in acc.iter_mut().zip(r.coeffs(rank)) {
            *a += c;
        }
    }
    let half = T::from_i64(2).inv().expect("2 is invertible");
    acc.into_iter().map(|a| T::from_i64(a) * half.clone()).collect()
}

/// `{α : ⟨α, μ⟩ > 0}` over all roots of the family.
pub fn dominant_system<T: OrderedField>(mu: &[T], family: Family) -> Result<PositiveSystem, RootError> {
    let rank = mu.len();
    let mut roots = BTreeSet::new();
    for r in standard_positive_roots(family, rank) {
        let v = pairing(mu, &r);
        if v > T::zero() {
            roots.insert(r);
        } else if v < T::zero() {
            roots.insert(r.neg());
        } else {
            return Err(RootError::SingularWeight(r));
        }
    }
    Ok(PositiveSystem { family, rank, roots })
}

/// An element of the hyperoctahedral group acting by
/// `result_k = signs_k · μ_{perm⁻¹(k)}`; `perm[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(rank: usize) -> Self {
        SignedPermutation { perm: (0..rank).collect(), signs: vec![1; rank] }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, RootError> {
        let n = perm.len();
        if signs.len() != n {
            return Err(RootError::InvalidParameter("sign vector length differs from permutation length".into()));
        }
        if perm.iter().copied().sorted().ne(0..n) {
            return Err(RootError::InvalidParameter(format!("{perm:?} is not a permutation")));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(RootError::InvalidParameter("signs must be ±1".into()));
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn sign_flip(rank: usize, k: usize) -> Self {
        let mut w = Self::identity(rank);
        w.signs[k] = -1;
        w
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm_inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.rank()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }

    pub fn act<T: Field>(&self, mu: &[T]) -> Vec<T> {
        let inv = self.perm_inverse();
        (0..self.rank()).map(|k| T::from_i64(self.signs[k] as i64) * mu[inv[k]].clone()).collect()
    }

    pub fn act_int(&self, v: &[i64]) -> Vec<i64> {
        let inv = self.perm_inverse();
        (0..self.rank()).map(|k| self.signs[k] as i64 * v[inv[k]]).collect()
    }

    pub fn act_root(&self, r: &Root) -> Root {
        Root::from_coeffs(&self.act_int(&r.coeffs(self.rank()))).expect("signed permutations preserve roots")
    }

    pub fn act_system(&self, psi: &PositiveSystem) -> PositiveSystem {
        PositiveSystem {
            family: psi.family,
            rank: psi.rank,
            roots: psi.roots.iter().map(|r| self.act_root(r)).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let inv = self.perm_inverse();
        SignedPermutation {
            perm: other.perm.iter().map(|&p| self.perm[p]).collect(),
            signs: (0..self.rank()).map(|k| self.signs[k] * other.signs[inv[k]]).collect(),
        }
    }

    pub fn inverse(&self) -> SignedPermutation {
        SignedPermutation {
            perm: self.perm_inverse(),
            signs: (0..self.rank()).map(|i| self.signs[self.perm[i]]).collect(),
        }
    }

    pub fn negations(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn in_weyl_group(&self, family: Family) -> bool {
        family == Family::C || self.negations().is_multiple_of(2)
    }
}

/// Every element of the Weyl group of the family.
pub fn weyl_group(family: Family, rank: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::new();
    for perm in (0..rank).permutations(rank) {
        for mask in 0u32..(1 << rank) {
            let signs: Vec<i8> = (0..rank).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            let w = SignedPermutation { perm: perm.clone(), signs };
            if w.in_weyl_group(family) {
                out.push(w);
            }
        }
    }
    out
}

pub fn weyl_group_order(family: Family, rank: usize) -> u64 {
    let fact: u64 = (1..=rank as u64).product();
    match family {
        Family::C => (1u64 << rank) * fact,
        Family::D if rank == 0 => 1,
        Family::D => (1u64 << (rank - 1)) * fact,
    }
}

/// A positive system of a type C or D root system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositiveSystem {
    pub family: Family,
    pub rank: usize,
    pub roots: BTreeSet<Root>,
}

impl PositiveSystem {
    pub fn standard(family: Family, rank: usize) -> Self {
        PositiveSystem { family, rank, roots: standard_positive_roots(family, rank).into_iter().collect() }
    }

    /// Validates "exactly one of ±α" and closure under root addition.
    pub fn new(family: Family, rank: usize, roots: impl IntoIterator<Item = Root>) -> Result<Self, RootError> {
        let roots: BTreeSet<Root> = roots.into_iter().collect();
        for r in &roots {
            if !r.in_family(family) || r.min_rank() > rank {
                return Err(RootError::InvalidPositiveSystem(format!("{r} is not a root of the system")));
            }
        }
        for r in standard_positive_roots(family, rank) {
            if roots.contains(&r) == roots.contains(&r.neg()) {
                return Err(RootError::InvalidPositiveSystem(format!("must contain exactly one of ±({r})")));
            }
        }
        let psi = PositiveSystem { family, rank, roots };
        if !psi.is_closed() {
            return Err(RootError::InvalidPositiveSystem("not closed under root addition".into()));
        }
        Ok(psi)
    }

    pub fn is_closed(&self) -> bool {
        for a in &self.roots {
            for b in &self.roots {
                let s: Vec<i64> = a.coeffs(self.rank).iter().zip(b.coeffs(self.rank)).map(|(x, y)| x + y).collect();
                if let Some(r) = Root::from_coeffs(&s) {
                    if r.in_family(self.family) && !self.roots.contains(&r) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.roots.contains(r)
    }

    pub fn contains_all<'a>(&self, rs: impl IntoIterator<Item = &'a Root>) -> bool {
        rs.into_iter().all(|r| self.roots.contains(r))
    }

    pub fn rho<T: Field>(&self) -> Vec<T> {
        rho(&self.roots, self.rank)
    }

    /// The unique Weyl group element carrying the standard system to this one.
    pub fn twist_from_standard(&self) -> SignedPermutation {
        let rho_std: Vec<Rational> = PositiveSystem::standard(self.family, self.rank).rho();
        let rho_self: Vec<Rational> = self.rho();
        // Both ρ's are regular; the element is recovered by matching absolute values.
        let mut perm = vec![0; self.rank];
        let mut signs = vec![1i8; self.rank];
        for (i, a) in rho_std.iter().enumerate() {
            for (k, b) in rho_self.iter().enumerate() {
                if b == a || (-b.clone()) == *a {
                    perm[i] = k;
                    signs[k] = if b == a { 1 } else { -1 };
                }
            }
        }
        // In type D the last standard coordinate of ρ is zero; fix parity.
        let mut w = SignedPermutation { perm, signs };
        if !w.in_weyl_group(self.family) {
            let k = w.perm[self.rank - 1];
            w.signs[k] = -w.signs[k];
        }
        debug_assert_eq!(&w.act_system(&PositiveSystem::standard(self.family, self.rank)), self);
        w
    }
}

impl fmt::Display for PositiveSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.roots.iter().map(|r| r.to_string()).join(", "))
    }
}

/// All positive systems of the family containing `must_contain`.
pub fn enumerate_positive_systems(
    family: Family,
    rank: usize,
    must_contain: &[Root],
) -> Result<Vec<PositiveSystem>, RootError> {
    if rank > MAX_ENUM_RANK {
        return Err(RootError::RankTooLarge(rank));
    }
    let std = PositiveSystem::standard(family, rank);
    let systems: BTreeSet<PositiveSystem> = weyl_group(family, rank)
        .iter()
        .map(|w| w.act_system(&std))
        .filter(|psi| psi.contains_all(must_contain))
        .collect();
    Ok(systems.into_iter().collect())
}

/// Split (`M_2(ℝ)`) or Hamilton quaternions: the sign of j².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuatSign {
    Split,
    Hamilton,
}

impl QuatSign {
    pub fn value(self) -> i64 {
        match self {
            QuatSign::Split => 1,
            QuatSign::Hamilton => -1,
        }
    }

    pub fn from_value(e: i64) -> Option<Self> {
        match e {
            1 => Some(QuatSign::Split),
            -1 => Some(QuatSign::Hamilton),
            _ => None,
        }
    }
}

/// The sign of the additive character: ε_ψ = ±√−1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EpsPsi {
    PlusI,
    MinusI,
}

impl EpsPsi {
    /// The sign s with ε_ψ = s·√−1.
    pub fn sign(self) -> i64 {
        match self {
            EpsPsi::PlusI => 1,
            EpsPsi::MinusI => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            EpsPsi::PlusI => EpsPsi::MinusI,
            EpsPsi::MinusI => EpsPsi::PlusI,
        }
    }
}

impl fmt::Display for EpsPsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpsPsi::PlusI => "+i",
            EpsPsi::MinusI => "-i",
        })
    }
}

/// The symplectic side (rank m, type C) or the orthogonal side (rank n, type D).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    V,
    W,
}

/// The dual pair data: quaternion sign, ranks, signature and ε_ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseSpec {
    pub e_h: QuatSign,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub eps_psi: EpsPsi,
}

impl CaseSpec {
    pub fn new(e_h: QuatSign, m: usize, n: usize, p: usize, q: usize, eps_psi: EpsPsi) -> Result<Self, RootError> {
        if n != m && n != m + 1 {
            return Err(RootError::InvalidCase(format!("n = {n} must equal m = {m} or m + 1")));
        }
        let expected = match e_h {
            QuatSign::Split => n,
            QuatSign::Hamilton => m,
        };
        if p + q != expected {
            return Err(RootError::InvalidCase(format!(
                "p + q = {} but the {} side has rank {expected}",
                p + q,
                if e_h == QuatSign::Split { "orthogonal" } else { "symplectic" }
            )));
        }
        Ok(CaseSpec { e_h, m, n, p, q, eps_psi })
    }

    pub fn rank(&self, side: Side) -> usize {
        match side {
            Side::V => self.m,
            Side::W => self.n,
        }
    }

    pub fn family(side: Side) -> Family {
        match side {
            Side::V => Family::C,
            Side::W => Family::D,
        }
    }

    /// Whether one-based coordinates k and l lie in the same signature block.
    pub fn same_block(&self, k: usize, l: usize) -> bool {
        let p = self.p as i64;
        (2 * p + 1 - 2 * k as i64) * (2 * p + 1 - 2 * l as i64) > 0
    }

    /// ε_k = 1 for k ≤ p and −1 otherwise (one-based k).
    pub fn eps(&self, k: usize) -> i64 {
        if k <= self.p {
            1
        } else {
            -1
        }
    }

    pub fn with_eps(&self, eps_psi: EpsPsi) -> Self {
        CaseSpec { eps_psi, ..*self }
    }
}

/// The compact positive roots on the given side.
pub fn compact_roots(spec: &CaseSpec, side: Side) -> Vec<Root> {
    let rank = spec.rank(side);
    let type_a = || {
        let mut v = Vec::new();
        for k in 0..rank {
            for l in k + 1..rank {
                v.push(Root::diff(k, l));
            }
        }
        v
    };
    let blocks = |long: bool| {
        let mut v = Vec::new();
        for k in 0..rank {
            for l in k + 1..rank {
                if spec.same_block(k + 1, l + 1) {
                    v.push(Root::diff(k, l));
                    v.push(Root::sum(k, l));
                }
            }
            if long {
                v.push(Root::long(k));
            }
        }
        v
    };
    match (spec.e_h, side) {
        (QuatSign::Split, Side::V) => type_a(),
        (QuatSign::Split, Side::W) => blocks(false),
        (QuatSign::Hamilton, Side::V) => blocks(true),
        (QuatSign::Hamilton, Side::W) => type_a(),
    }
}

/// A Harish-Chandra parameter (μ, Ψ) with Ψ containing the compact roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HCParameter {
    pub spec: CaseSpec,
    pub side: Side,
    pub mu: Vec<Rational>,
    pub psi: PositiveSystem,
}

impl HCParameter {
    pub fn new(spec: CaseSpec, side: Side, mu: Vec<Rational>, psi: PositiveSystem) -> Result<Self, RootError> {
        let rank = spec.rank(side);
        if mu.len() != rank {
            return Err(RootError::InvalidParameter(format!("weight has length {}, expected {rank}", mu.len())));
        }
        if psi.rank != rank || psi.family != CaseSpec::family(side) {
            return Err(RootError::InvalidParameter("positive system has the wrong type".into()));
        }
        if let Some(r) = compact_roots(&spec, side).iter().find(|r| !psi.contains(r)) {
            return Err(RootError::InvalidParameter(format!("positive system misses the compact root {r}")));
        }
        Ok(HCParameter { spec, side, mu, psi })
    }

    /// The parameter (μ, Ψ_μ) for a regular weight μ; fails if Ψ_μ misses a compact root.
    pub fn from_regular(spec: CaseSpec, side: Side, mu: Vec<Rational>) -> Result<Self, RootError> {
        let psi = dominant_system(&mu, CaseSpec::family(side))?;
        HCParameter::new(spec, side, mu, psi)
    }

    /// ⟨μ, α⟩ ≥ 0 on Ψ and > 0 on the compact roots.
    pub fn is_admissible(&self) -> bool {
        let zero = Rational::from_i64(0);
        self.psi.roots.iter().all(|a| pairing(&self.mu, a) >= zero)
            && compact_roots(&self.spec, self.side).iter().all(|a| pairing(&self.mu, a) > zero)
    }

    /// Whether μ is regular (a discrete series parameter rather than a limit).
    pub fn is_regular(&self) -> bool {
        let zero = Rational::from_i64(0);
        self.psi.roots.iter().all(|a| pairing(&self.mu, a) != zero)
    }
}

/// Membership in the admissible set on the symplectic side.
pub fn in_x(param: &HCParameter) -> bool {
    param.side == Side::V && param.is_admissible()
}

/// Membership in the admissible set on the orthogonal side.
pub fn in_y(param: &HCParameter) -> bool {
    param.side == Side::W && param.is_admissible()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn w(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&w(&[3, 1]), &Root::diff(0, 1)), int(2));
        assert_eq!(pairing(&w(&[3, 1]), &Root::long(1)), int(2));
        assert_eq!(pairing(&w(&[3, 1]), &Root::sum(0, 1).neg()), int(-4));
    }

    #[test]
    fn rho_examples() {
        let c2: Vec<Rational> = PositiveSystem::standard(Family::C, 2).rho();
        assert_eq!(c2, w(&[2, 1]));
        let d2: Vec<Rational> = rho(&[Root::diff(0, 1), Root::sum(0, 1)], 2);
        assert_eq!(d2, w(&[1, 0]));
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_positive_systems(Family::C, 1, &[]).unwrap().len(), 2);
        assert_eq!(enumerate_positive_systems(Family::D, 2, &[Root::diff(0, 1)]).unwrap().len(), 2);
        assert_eq!(enumerate_positive_systems(Family::D, 1, &[]).unwrap().len(), 1);
        assert!(matches!(enumerate_positive_systems(Family::C, 7, &[]), Err(RootError::RankTooLarge(7))));
    }

    #[test]
    fn root_display_and_roundtrip() {
        assert_eq!(Root::diff(1, 0).to_string(), "-(e1-e2)");
        for r in all_roots(Family::C, 3) {
            assert_eq!(Root::from_coeffs(&r.coeffs(3)), Some(r));
        }
    }

    #[test]
    fn singular_weight_is_reported() {
        assert!(matches!(dominant_system(&w(&[2, 2]), Family::C), Err(RootError::SingularWeight(_))));
        assert!(matches!(dominant_system(&w(&[1, -1]), Family::D), Err(RootError::SingularWeight(_))));
        // (1, 0) is regular for D₂ but not for C₂.
        assert!(dominant_system(&w(&[1, 0]), Family::D).is_ok());
        assert!(dominant_system(&w(&[1, 0]), Family::C).is_err());
    }

    #[test]
    fn case_validation() {
        assert!(CaseSpec::new(QuatSign::Split, 2, 2, 1, 1, EpsPsi::PlusI).is_ok());
        assert!(CaseSpec::new(QuatSign::Split, 2, 3, 1, 1, EpsPsi::PlusI).is_err());
        assert!(CaseSpec::new(QuatSign::Hamilton, 2, 4, 1, 1, EpsPsi::PlusI).is_err());
        assert!(CaseSpec::new(QuatSign::Hamilton, 3, 4, 2, 1, EpsPsi::MinusI).is_ok());
    }

    #[test]
    fn compact_root_examples() {
        let s = CaseSpec::new(QuatSign::Hamilton, 2, 2, 1, 1, EpsPsi::PlusI).unwrap();
        assert_eq!(compact_roots(&s, Side::W), vec![Root::diff(0, 1)]);
        assert_eq!(compact_roots(&s, Side::V), vec![Root::long(0), Root::long(1)]);
        let s = CaseSpec::new(QuatSign::Split, 2, 2, 2, 0, EpsPsi::PlusI).unwrap();
        assert_eq!(compact_roots(&s, Side::W), vec![Root::diff(0, 1), Root::sum(0, 1)]);
    }

    #[test]
    fn twist_recovers_system() {
        for fam in [Family::C, Family::D] {
            for rank in 1..=3 {
                for psi in enumerate_positive_systems(fam, rank, &[]).unwrap() {
                    let w = psi.twist_from_standard();
                    assert!(w.in_weyl_group(fam));
                    assert_eq!(w.act_system(&PositiveSystem::standard(fam, rank)), psi);
                }
            }
        }
    }

    #[test]
    fn admissibility() {
        let s = CaseSpec::new(QuatSign::Hamilton, 1, 1, 1, 0, EpsPsi::PlusI).unwrap();
        let p = HCParameter::from_regular(s, Side::V, w(&[1])).unwrap();
        assert!(in_x(&p));
        assert!(!in_y(&p));
        let psi = PositiveSystem::standard(Family::C, 1);
        let zero = HCParameter::new(s, Side::V, w(&[0]), psi).unwrap();
        assert!(!zero.is_admissible());
    }
}
