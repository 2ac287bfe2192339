//! Theta lifts on Harish-Chandra parameters: the ξ maps, transport of
//! positive systems, coherent continuation, lowest K-types, the
//! Kashiwara-Vergne correspondence and the sign bookkeeping of packet
//! characters.

use crate::rootcomb::{
    compact_roots, pairing, rho, standard_positive_roots, CaseSpec, EpsPsi, Family, HCParameter, PositiveSystem,
    QuatSign, Root, RootError, Side, SignedPermutation,
};
use crate::scalar::{int, Field};
use crate::{GaussianRational, Rational, Weight};
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("variant {0} is not defined for this case")]
    IllegalVariant(XiVariant),
    #[error("the image of the positive system is singular")]
    SingularImage,
    #[error("shift is not a positive direction for the positive system: {0}")]
    NotPositiveDirection(Root),
    #[error("lowest K-type has a non-integral entry")]
    NonIntegralKType,
    #[error("malformed highest weight: {0}")]
    MalformedHighestWeight(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("parameter is on the wrong side")]
    WrongSide,
    #[error(transparent)]
    Root(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XiTag {
    Plain,
    Up,
    Down,
}

/// One of ξ^u, ξ_▲^u, ξ_▼^u.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XiVariant {
    pub tag: XiTag,
    pub u: EpsPsi,
}

impl XiVariant {
    pub fn plain(u: EpsPsi) -> Self {
        XiVariant { tag: XiTag::Plain, u }
    }

    pub fn name(&self) -> &'static str {
        match self.tag {
            XiTag::Plain => "PLAIN",
            XiTag::Up => "UP",
            XiTag::Down => "DOWN",
        }
    }

    pub fn is_legal(&self, spec: &CaseSpec) -> bool {
        let wide = spec.e_h == QuatSign::Split && spec.n == spec.m + 1;
        match self.tag {
            XiTag::Plain => !wide,
            XiTag::Up => wide && if self.u == EpsPsi::PlusI { spec.q >= 1 } else { spec.p >= 1 },
            XiTag::Down => wide && if self.u == EpsPsi::PlusI { spec.q <= spec.m } else { spec.p <= spec.m },
        }
    }

    /// The variants that [`theta_lift`] tries, in order.
    pub fn candidates(spec: &CaseSpec) -> Vec<XiVariant> {
        let u = spec.eps_psi;
        if spec.e_h == QuatSign::Split && spec.n == spec.m + 1 {
            [XiTag::Up, XiTag::Down]
                .into_iter()
                .map(|tag| XiVariant { tag, u })
                .filter(|v| v.is_legal(spec))
                .collect()
        } else {
            vec![XiVariant::plain(u)]
        }
    }
}

impl fmt::Display for XiVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.name(), self.u)
    }
}

/// Where coordinate `j` of the image comes from: `Some((k, sign))` means
/// `sign · a_k`, `None` means the constant 0.
pub type XiSlot = Option<(usize, i64)>;

/// The signed coordinate embedding ℤ^m → ℤ^n behind a ξ map.
pub fn xi_embedding(spec: &CaseSpec, variant: XiVariant) -> Result<Vec<XiSlot>, ThetaError> {
    if !variant.is_legal(spec) {
        return Err(ThetaError::IllegalVariant(variant));
    }
    let (m, p, q) = (spec.m, spec.p, spec.q);
    // a_k with one-based k.
    let pos = |k: usize| Some((k - 1, 1));
    let neg = |k: usize| Some((k - 1, -1));
    // (−a_hi, …, −a_lo), descending.
    let neg_desc = |hi: usize, lo: usize| (lo..=hi).rev().map(neg).collect::<Vec<_>>();
    let pos_asc = |lo: usize, hi: usize| (lo..=hi).map(pos).collect::<Vec<_>>();
    let plus = variant.u == EpsPsi::PlusI;
    let v: Vec<XiSlot> = match (spec.e_h, spec.n == m, variant.tag) {
        (QuatSign::Split, true, XiTag::Plain) if plus => [neg_desc(m, q + 1), pos_asc(1, q)].concat(),
        (QuatSign::Split, true, XiTag::Plain) => [pos_asc(1, p), neg_desc(m, p + 1)].concat(),
        (QuatSign::Split, false, XiTag::Up) if plus => [neg_desc(m, q), pos_asc(1, q - 1), vec![None]].concat(),
        (QuatSign::Split, false, XiTag::Up) => [pos_asc(1, p - 1), vec![None], neg_desc(m, p)].concat(),
        (QuatSign::Split, false, XiTag::Down) if plus => [neg_desc(m, q + 1), vec![None], pos_asc(1, q)].concat(),
        (QuatSign::Split, false, XiTag::Down) => [pos_asc(1, p), neg_desc(m, p + 1), vec![None]].concat(),
        (QuatSign::Hamilton, true, XiTag::Plain) if plus => [pos_asc(1, p), neg_desc(m, p + 1)].concat(),
        (QuatSign::Hamilton, true, XiTag::Plain) => [pos_asc(p + 1, m), neg_desc(p, 1)].concat(),
        (QuatSign::Hamilton, false, XiTag::Plain) if plus => [pos_asc(1, p), vec![None], neg_desc(m, p + 1)].concat(),
        (QuatSign::Hamilton, false, XiTag::Plain) => [pos_asc(p + 1, m), vec![None], neg_desc(p, 1)].concat(),
        _ => return Err(ThetaError::IllegalVariant(variant)),
    };
    debug_assert_eq!(v.len(), spec.n);
    Ok(v)
}

fn apply_embedding<T: Field>(emb: &[XiSlot], a: &[T]) -> Vec<T> {
    emb.iter()
        .map(|slot| match slot {
            Some((k, s)) => T::from_i64(*s) * a[*k].clone(),
            None => T::zero(),
        })
        .collect()
}

/// ξ applied to a rank-m weight.
pub fn xi_weight<T: Field>(spec: &CaseSpec, variant: XiVariant, mu: &[T]) -> Result<Vec<T>, ThetaError> {
    if mu.len() != spec.m {
        return Err(ThetaError::LengthMismatch(mu.len(), spec.m));
    }
    Ok(apply_embedding(&xi_embedding(spec, variant)?, mu))
}

/// A weight plus a formal infinitesimal: pairings compare lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfWeight {
    pub base: Weight,
    pub inf: Weight,
}

impl InfWeight {
    pub fn pairing_sign(&self, alpha: &Root) -> Ordering {
        let zero = Rational::zero();
        match pairing(&self.base, alpha).cmp(&zero) {
            Ordering::Equal => pairing(&self.inf, alpha).cmp(&zero),
            o => o,
        }
    }

    /// `{α : ⟨α, base + ε·inf⟩ > 0}`.
    pub fn dominant_system(&self, family: Family) -> Result<PositiveSystem, ThetaError> {
        let rank = self.base.len();
        let mut roots = std::collections::BTreeSet::new();
        for r in standard_positive_roots(family, rank) {
            match self.pairing_sign(&r) {
                Ordering::Greater => roots.insert(r),
                Ordering::Less => roots.insert(r.neg()),
                Ordering::Equal => return Err(ThetaError::SingularImage),
            };
        }
        Ok(PositiveSystem { family, rank, roots })
    }

    /// Coordinates as lexicographic pairs.
    pub fn coords(&self) -> Vec<(Rational, Rational)> {
        self.base.iter().cloned().zip(self.inf.iter().cloned()).collect()
    }
}

/// A direction strictly positive on every root of Ψ: ρ(Ψ).
pub fn default_nu(psi: &PositiveSystem) -> Weight {
    psi.rho()
}

/// ξ(Ψ) = Ψ_{ξ(μ + εν)} for the given infinitesimal direction ν.
pub fn xi_system_with(
    spec: &CaseSpec,
    variant: XiVariant,
    param: &HCParameter,
    nu: &[Rational],
) -> Result<PositiveSystem, ThetaError> {
    if param.side != Side::V {
        return Err(ThetaError::WrongSide);
    }
    if let Some(r) = param.psi.roots.iter().find(|r| pairing(nu, r) <= Rational::zero()) {
        return Err(ThetaError::NotPositiveDirection(*r));
    }
    let img = InfWeight { base: xi_weight(spec, variant, &param.mu)?, inf: xi_weight(spec, variant, nu)? };
    img.dominant_system(Family::D)
}

pub fn xi_system(spec: &CaseSpec, variant: XiVariant, param: &HCParameter) -> Result<PositiveSystem, ThetaError> {
    xi_system_with(spec, variant, param, &default_nu(&param.psi))
}

/// For the split case the lift also needs ξ(Ψ) to contain every long root
/// 2β_k outside the appended zero slot, i.e. the image of μ + εν must be
/// positive there. The Hamilton case imposes nothing extra.
pub fn long_root_condition(spec: &CaseSpec, variant: XiVariant, param: &HCParameter) -> Result<bool, ThetaError> {
    if spec.e_h == QuatSign::Hamilton {
        return Ok(true);
    }
    let emb = xi_embedding(spec, variant)?;
    let nu = default_nu(&param.psi);
    let img = InfWeight { base: apply_embedding(&emb, &param.mu), inf: apply_embedding(&emb, &nu) };
    Ok(emb.iter().enumerate().all(|(j, slot)| {
        slot.is_none() || img.pairing_sign(&Root::long(j)) == Ordering::Greater
    }))
}

/// A nonzero theta lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaLift {
    pub param: HCParameter,
    pub variant: XiVariant,
    /// Set when a second variant also lands in 𝒴; both are reported.
    pub alternative: Option<(HCParameter, XiVariant)>,
}

fn lift_with(spec: &CaseSpec, variant: XiVariant, param: &HCParameter) -> Result<Option<HCParameter>, ThetaError> {
    if !long_root_condition(spec, variant, param)? {
        return Ok(None);
    }
    let mu = xi_weight(spec, variant, &param.mu)?;
    let psi = xi_system(spec, variant, param)?;
    match HCParameter::new(*spec, Side::W, mu, psi) {
        Ok(p) if p.is_admissible() => Ok(Some(p)),
        Ok(_) | Err(RootError::InvalidParameter(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// The lift θ_ψ(π(μ, Ψ), W) on parameters, or `None` when it vanishes.
pub fn theta_lift(param: &HCParameter) -> Result<Option<ThetaLift>, ThetaError> {
    if param.side != Side::V {
        return Err(ThetaError::WrongSide);
    }
    let spec = param.spec;
    let mut found = Vec::new();
    for v in XiVariant::candidates(&spec) {
        if let Some(p) = lift_with(&spec, v, param)? {
            found.push((p, v));
        }
    }
    let mut it = found.into_iter();
    Ok(it.next().map(|(param, variant)| ThetaLift { param, variant, alternative: it.next() }))
}

/// S_ν: (μ, Ψ) ↦ (μ + ν, Ψ).
pub fn coherent_shift(param: &HCParameter, nu: &[Rational]) -> Result<HCParameter, ThetaError> {
    if nu.len() != param.mu.len() {
        return Err(ThetaError::LengthMismatch(nu.len(), param.mu.len()));
    }
    if let Some(r) = param.psi.roots.iter().find(|r| pairing(nu, r) < Rational::zero()) {
        return Err(ThetaError::NotPositiveDirection(*r));
    }
    let mu = param.mu.iter().zip(nu).map(|(a, b)| a + b).collect();
    Ok(HCParameter { mu, ..param.clone() })
}

/// Counts of isometry classes with nonzero lift, by discriminant and dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Table1Row {
    pub r_plus: u8,
    pub r_minus: u8,
    pub r_plus_prime: u8,
    pub r_minus_prime: u8,
}

impl Table1Row {
    pub fn total(&self) -> u8 {
        self.r_plus + self.r_minus + self.r_plus_prime + self.r_minus_prime
    }
}

/// c1: std∘φ contains the trivial character; c2: it contains the sign character.
pub fn table1(c1: bool, c2: bool) -> Table1Row {
    let (a, b, c, d) = match (c1, c2) {
        (true, true) => (1, 1, 1, 1),
        (true, false) => (1, 0, 1, 2),
        (false, true) => (0, 1, 2, 1),
        (false, false) => (0, 0, 2, 2),
    };
    Table1Row { r_plus: a, r_minus: b, r_plus_prime: c, r_minus_prime: d }
}

/// μ + ρ(Ψ) − 2ρ(Δ_c) for the side of the parameter.
pub fn lowest_k_type(param: &HCParameter) -> Result<Weight, ThetaError> {
    let rank = param.mu.len();
    let rho_psi: Weight = param.psi.rho();
    let rho_c: Weight = rho(&compact_roots(&param.spec, param.side), rank);
    let two = int(2);
    let lkt: Weight = (0..rank).map(|k| &param.mu[k] + &rho_psi[k] - &two * &rho_c[k]).collect();
    if lkt.iter().any(|x| !x.is_integer()) {
        return Err(ThetaError::NonIntegralKType);
    }
    Ok(lkt)
}

/// The constant c with ξ_{•0}(a) = ξ_•(a + c·1_m) in the split case and
/// ξ_•(a) + c·1_n in the Hamilton case. It is (p − q) up to a sign fixed by
/// the case and ε_ψ.
pub fn jh_shift(spec: &CaseSpec) -> i64 {
    let pq = spec.p as i64 - spec.q as i64;
    match spec.e_h {
        QuatSign::Split => spec.eps_psi.sign() * pq,
        QuatSign::Hamilton => spec.eps_psi.sign() * pq,
    }
}

/// ξ_{•0} with an explicit shift constant.
pub fn xi_zero(spec: &CaseSpec, variant: XiVariant, a: &[Rational], shift: i64) -> Result<Weight, ThetaError> {
    let c = int(shift);
    match spec.e_h {
        QuatSign::Split => {
            let shifted: Weight = a.iter().map(|x| x + &c).collect();
            xi_weight(spec, variant, &shifted)
        }
        QuatSign::Hamilton => Ok(xi_weight(spec, variant, a)?.into_iter().map(|x| x + &c).collect()),
    }
}

/// ξ_{•0}(LKT(σ)) = LKT(θ(σ)) with the given shift constant.
pub fn jhlem_check_with_shift(param: &HCParameter, shift: i64) -> Result<bool, ThetaError> {
    let Some(lift) = theta_lift(param)? else {
        return Ok(false);
    };
    let lhs = xi_zero(&param.spec, lift.variant, &lowest_k_type(param)?, shift)?;
    Ok(lhs == lowest_k_type(&lift.param)?)
}

pub fn jhlem_check(param: &HCParameter) -> Result<bool, ThetaError> {
    jhlem_check_with_shift(param, jh_shift(&param.spec))
}

/// Signature of an O(2n)-type: the sign in the sense of Kashiwara-Vergne.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KvSign {
    Plus,
    Minus,
}

fn kv_shape(nu: &[i64], sig: KvSign, m: usize) -> Result<Option<(usize, usize, usize)>, ThetaError> {
    let n = nu.len();
    if nu.windows(2).any(|w| w[0] < w[1]) || nu.iter().any(|&x| x < 0) {
        return Err(ThetaError::MalformedHighestWeight(format!("{nu:?} is not a partition")));
    }
    let k = nu.iter().filter(|&&x| x != 0).count();
    Ok(match sig {
        KvSign::Plus if k <= m => Some((m - k, 0, k)),
        KvSign::Minus if n < m && k + m >= 2 * n => Some((m + k - 2 * n, 2 * (n - k), k)),
        _ => None,
    })
}

/// Highest weight of the minimal-degree K-type of Θ(σ), anisotropic form of
/// one sign; `None` when the lift vanishes.
pub fn kv_lift(nu: &[i64], sig: KvSign, m: usize) -> Result<Option<Vec<i64>>, ThetaError> {
    let n = nu.len() as i64;
    Ok(kv_shape(nu, sig, m)?.map(|(zeros, ones, k)| {
        let mut v = vec![0; zeros];
        v.extend(std::iter::repeat_n(-1, ones));
        v.extend(nu[..k].iter().rev().map(|x| -x));
        v.into_iter().map(|x| x - n).collect()
    }))
}

/// The same K-type for the anisotropic form of the opposite sign.
pub fn kv_dual(nu: &[i64], sig: KvSign, m: usize) -> Result<Option<Vec<i64>>, ThetaError> {
    let n = nu.len() as i64;
    Ok(kv_shape(nu, sig, m)?.map(|(zeros, ones, k)| {
        let mut v: Vec<i64> = nu[..k].to_vec();
        v.extend(std::iter::repeat_n(1, ones));
        v.extend(std::iter::repeat_n(0, zeros));
        v.into_iter().map(|x| x + n).collect()
    }))
}

/// An element of the component group: a sign per dual torus coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SGroupElement {
    pub signs: Vec<i8>,
}

impl SGroupElement {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(signs.iter().all(|&s| s == 1 || s == -1), "signs must be ±1");
        SGroupElement { signs }
    }

    pub fn a(&self) -> usize {
        self.signs.iter().filter(|&&s| s == 1).count()
    }

    pub fn b(&self) -> usize {
        self.signs.len() - self.a()
    }

    pub fn mul(&self, o: &SGroupElement) -> SGroupElement {
        SGroupElement { signs: self.signs.iter().zip(&o.signs).map(|(a, b)| a * b).collect() }
    }

    /// All 2^k elements.
    pub fn all(k: usize) -> Vec<SGroupElement> {
        (0u32..1 << k)
            .map(|mask| SGroupElement { signs: (0..k).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect() })
            .collect()
    }
}

/// A fourth root of unity √−1^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot(0);
    pub const I: FourthRoot = FourthRoot(1);
    pub const MINUS_ONE: FourthRoot = FourthRoot(2);
    pub const MINUS_I: FourthRoot = FourthRoot(3);

    pub fn from_exponent(k: i64) -> Self {
        FourthRoot(k.rem_euclid(4) as u8)
    }

    pub fn from_sign(s: i64) -> Self {
        if s > 0 {
            Self::ONE
        } else {
            Self::MINUS_ONE
        }
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn eps(e: EpsPsi) -> Self {
        match e {
            EpsPsi::PlusI => Self::I,
            EpsPsi::MinusI => Self::MINUS_I,
        }
    }

    pub fn mul(self, o: Self) -> Self {
        FourthRoot((self.0 + o.0) % 4)
    }

    pub fn pow(self, e: u64) -> Self {
        FourthRoot(((self.0 as u64 * (e % 4)) % 4) as u8)
    }

    pub fn conj(self) -> Self {
        FourthRoot((4 - self.0) % 4)
    }

    pub fn to_gaussian(self) -> GaussianRational {
        let (re, im) = match self.0 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        GaussianRational::new(int(re), int(im))
    }
}

impl fmt::Display for FourthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["1", "i", "-1", "-i"][self.0 as usize])
    }
}

/// Which sign the (√−1)^{#Δ_B − #Δ_{B_H}} factor carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// (−√−1)^{#Δ_B − #Δ_{B_H}}.
    Corrected,
    /// (√−1)^{#Δ_B − #Δ_{B_H}}.
    Uncorrected,
}

/// (−1)^{q_G − q_H} · (∓√−1)^{#Δ_B − #Δ_{B_H}} · ε(𝒱_{G,H}, ψ), with
/// ε(sgn, ψ) = ε_ψ. `Side::V` is the symplectic side, `Side::W` the even
/// orthogonal side.
pub fn normalization(side: Side, s: &SGroupElement, eps: EpsPsi, conv: SignConvention) -> FourthRoot {
    let (a, b) = (s.a() as u64, s.b() as u64);
    let base = match conv {
        SignConvention::Corrected => FourthRoot::MINUS_I,
        SignConvention::Uncorrected => FourthRoot::I,
    };
    let e = FourthRoot::eps(eps);
    match side {
        Side::V => {
            let q = FourthRoot::MINUS_ONE.pow(a * b + b * (b + 1) / 2);
            let eps_factor = if b % 2 == 1 { e.mul(FourthRoot::MINUS_ONE) } else { FourthRoot::ONE };
            q.mul(base.pow((2 * a + 1) * b)).mul(eps_factor)
        }
        Side::W => {
            let m = a + b;
            let ex = (m % 2) as i64 - (a % 2) as i64 - (b % 2) as i64;
            let eps_factor = if ex >= 0 { e.pow(ex as u64) } else { e.conj().pow((-ex) as u64) };
            base.pow(2 * a * b).mul(eps_factor)
        }
    }
}

/// Δ_I at the generic member: (−√−1·ε_ψ)^{b(s)} on the symplectic side and
/// 1 on the orthogonal side.
pub fn delta_i_generic(side: Side, s: &SGroupElement, eps: EpsPsi) -> FourthRoot {
    match side {
        Side::V => FourthRoot::MINUS_I.mul(FourthRoot::eps(eps)).pow(s.b() as u64),
        Side::W => FourthRoot::ONE,
    }
}

/// ι(π)(s) for the member with twist `target_w`, relative to the generic
/// member with twist `base_w`.
pub fn packet_character_with(
    spec: &CaseSpec,
    side: Side,
    base_w: &SignedPermutation,
    target_w: &SignedPermutation,
    s: &SGroupElement,
    conv: SignConvention,
) -> Result<FourthRoot, ThetaError> {
    let k = target_w.rank();
    if base_w.rank() != k {
        return Err(ThetaError::LengthMismatch(base_w.rank(), k));
    }
    if s.signs.len() != k {
        return Err(ThetaError::LengthMismatch(s.signs.len(), k));
    }
    let w = target_w.compose(&base_w.inverse());
    // π: torus coordinate ↦ dual coordinate, read off the target twist.
    let pi = target_w.perm_inverse();
    let pairing = (0..k).filter(|&c| w.signs[c] == -1).fold(1i64, |acc, c| acc * s.signs[pi[c]] as i64);
    Ok(normalization(side, s, spec.eps_psi, conv)
        .mul(delta_i_generic(side, s, spec.eps_psi))
        .mul(FourthRoot::from_sign(pairing)))
}

pub fn packet_character(
    spec: &CaseSpec,
    side: Side,
    base_w: &SignedPermutation,
    target_w: &SignedPermutation,
    s: &SGroupElement,
) -> Result<FourthRoot, ThetaError> {
    packet_character_with(spec, side, base_w, target_w, s, SignConvention::Corrected)
}

fn cmp_abs(a: &(Rational, Rational), b: &(Rational, Rational)) -> Ordering {
    let sa = sign_of(a);
    let sb = sign_of(b);
    let abs = |x: &(Rational, Rational), s: i64| (x.0.clone() * int(s), x.1.clone() * int(s));
    abs(a, sa).cmp(&abs(b, sb))
}

fn sign_of(x: &(Rational, Rational)) -> i64 {
    match (x.0.cmp(&Rational::zero()), x.1.cmp(&Rational::zero())) {
        (Ordering::Greater, _) | (Ordering::Equal, Ordering::Greater) => 1,
        (Ordering::Less, _) | (Ordering::Equal, Ordering::Less) => -1,
        _ => 0,
    }
}

/// The signed permutation w with x = w·x⁺, where x⁺ lists the absolute
/// values in decreasing order. Exact zeros are put last with sign +1.
pub fn pattern_twist(x: &[(Rational, Rational)]) -> SignedPermutation {
    let k = x.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| cmp_abs(&x[b], &x[a]).then(a.cmp(&b)));
    // order[j] is the torus coordinate carrying the j-th largest value.
    let mut signs = vec![1i8; k];
    for &c in &order {
        signs[c] = if sign_of(&x[c]) < 0 { -1 } else { 1 };
    }
    SignedPermutation { perm: order, signs }
}

/// ε_k on the side that carries the signature (p, q), 1 on the other.
fn block_signs(spec: &CaseSpec, side: Side) -> Vec<i64> {
    let signature_side = match spec.e_h {
        QuatSign::Split => Side::W,
        QuatSign::Hamilton => Side::V,
    };
    let r = spec.rank(side);
    (1..=r).map(|k| if side == signature_side { spec.eps(k) } else { 1 }).collect()
}

fn signed_pattern(spec: &CaseSpec, side: Side, x: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    x.into_iter().zip(block_signs(spec, side)).map(|((a, b), s)| (a * int(s), b * int(s))).collect()
}

/// The generic member's pattern on the symplectic side: alternating signs.
pub fn generic_pattern(m: usize) -> Vec<(Rational, Rational)> {
    (0..m).map(|k| (int(if k % 2 == 0 { 1 } else { -1 } * (m - k) as i64), Rational::zero())).collect()
}

/// The pair (ι_V(π)(s), ι_W(θ(π))(s′)) where s′ is s moved along ξ; the
/// appended zero coordinate (n = m + 1) gets +1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterPair {
    pub v_value: FourthRoot,
    pub w_value: FourthRoot,
    pub s_prime: SGroupElement,
}

impl CharacterPair {
    pub fn is_conjugate(&self) -> bool {
        self.v_value == self.w_value.conj()
    }
}

pub fn theta_character_relation_with(
    param: &HCParameter,
    s: &SGroupElement,
    conv: SignConvention,
) -> Result<Option<CharacterPair>, ThetaError> {
    let spec = param.spec;
    let Some(lift) = theta_lift(param)? else {
        return Ok(None);
    };
    if s.signs.len() != spec.m {
        return Err(ThetaError::LengthMismatch(s.signs.len(), spec.m));
    }
    let emb = xi_embedding(&spec, lift.variant)?;
    let nu = default_nu(&param.psi);
    let x_v: Vec<(Rational, Rational)> = param.mu.iter().cloned().zip(nu.iter().cloned()).collect();
    let x_w: Vec<(Rational, Rational)> = lift.param.mu.iter().cloned().zip(apply_embedding(&emb, &nu)).collect();
    let base_v_raw = generic_pattern(spec.m);
    let base_v_x: Vec<(Rational, Rational)> = base_v_raw
        .iter()
        .zip(block_signs(&spec, Side::V))
        .map(|((a, b), e)| (a * int(e), b * int(e)))
        .collect();
    let base_w_x: Vec<(Rational, Rational)> = apply_embedding(&emb, &base_v_x.iter().map(|p| p.0.clone()).collect::<Vec<_>>())
        .into_iter()
        .map(|a| (a, Rational::zero()))
        .collect();

    let tv = pattern_twist(&signed_pattern(&spec, Side::V, x_v));
    let bv = pattern_twist(&signed_pattern(&spec, Side::V, base_v_x));
    let tw = pattern_twist(&signed_pattern(&spec, Side::W, x_w));
    let bw = pattern_twist(&signed_pattern(&spec, Side::W, base_w_x));

    // Dual coordinates are ordered by absolute value on both sides, so s moves
    // to the same index; the appended zero is the last and smallest.
    let mut s_prime = s.signs.clone();
    s_prime.resize(spec.n, 1);
    let s_prime = SGroupElement::new(s_prime);
    let v_value = packet_character_with(&spec, Side::V, &bv, &tv, s, conv)?;
    let w_value = packet_character_with(&spec, Side::W, &bw, &tw, &s_prime, conv)?;
    Ok(Some(CharacterPair { v_value, w_value, s_prime }))
}

pub fn theta_character_relation(param: &HCParameter, s: &SGroupElement) -> Result<Option<CharacterPair>, ThetaError> {
    theta_character_relation_with(param, s, SignConvention::Corrected)
}

/// Every parameter of 𝒳 with entries in `[-bound, bound]`, for all positive
/// systems containing the compact roots. The weights dominant for Ψ = w·Ψ_std
/// are w·λ with λ₁ ≥ … ≥ λ_m ≥ 0.
pub fn enumerate_x(spec: &CaseSpec, bound: i64) -> Result<Vec<HCParameter>, ThetaError> {
    let m = spec.m;
    let systems =
        crate::rootcomb::enumerate_positive_systems(Family::C, m, &compact_roots(spec, Side::V))?;
    let mut dominant: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..m {
        dominant = dominant
            .into_iter()
            .flat_map(|v| {
                let top = v.last().copied().unwrap_or(bound);
                (0..=top).map(move |x| [v.clone(), vec![x]].concat())
            })
            .collect();
    }
    let mut out = Vec::new();
    for psi in &systems {
        let w = psi.twist_from_standard();
        for lambda in &dominant {
            let mu: Weight = w.act(&lambda.iter().map(|&x| int(x)).collect::<Vec<_>>());
            let p = HCParameter { spec: *spec, side: Side::V, mu, psi: psi.clone() };
            if p.is_admissible() {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// All case specs with the given m, over both quaternion signs, both n and
/// every signature.
pub fn all_specs(m: usize, eps: EpsPsi) -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for e_h in [QuatSign::Split, QuatSign::Hamilton] {
        for n in [m, m + 1] {
            let r = if e_h == QuatSign::Split { n } else { m };
            for p in 0..=r {
                if let Ok(s) = CaseSpec::new(e_h, m, n, p, r - p, eps) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Whether ξ^{+i} and ξ^{−i} differ by a signed permutation (n = m cases),
/// checked on a generic vector.
pub fn xi_sign_change(spec: &CaseSpec) -> Result<Option<SignedPermutation>, ThetaError> {
    if spec.n != spec.m {
        return Ok(None);
    }
    let probe: Weight = (1..=spec.m as i64).map(int).collect();
    let a = xi_weight(&spec.with_eps(EpsPsi::PlusI), XiVariant::plain(EpsPsi::PlusI), &probe)?;
    let b = xi_weight(&spec.with_eps(EpsPsi::MinusI), XiVariant::plain(EpsPsi::MinusI), &probe)?;
    // Find w with w·a = b.
    let n = spec.n;
    let mut perm = vec![0; n];
    let mut signs = vec![1i8; n];
    for (i, x) in a.iter().enumerate() {
        let k = b.iter().position(|y| y.abs() == x.abs()).expect("same absolute values");
        perm[i] = k;
        signs[k] = if &b[k] == x { 1 } else { -1 };
    }
    Ok(Some(SignedPermutation { perm, signs }))
}
