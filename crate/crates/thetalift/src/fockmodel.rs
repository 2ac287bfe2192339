//! A symbolic Fock model for the pair Sp(m) × O*(2n) on Sym(𝕃), with
//! variables z_{ab}, w_{ab} (1 ≤ a ≤ m, 1 ≤ b ≤ n).
//!
//! Operators are normal-ordered polynomial differential operators. The Lie
//! algebra side is realized by quaternionic matrices, which gives an exact
//! bracket oracle for the generator images.

use crate::quaternion::{QMatrix, Quaternion};
use crate::rootcomb::{EpsPsi, Root, RootKind, Side};
use crate::scalar::{int, Field};
use crate::{GaussianRational, Rational, Weight};
use itertools::Itertools;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("indices out of range for {0}")]
    IllegalIndices(LieGen),
    #[error("[{0}, {1}] is not in the span of the generators")]
    NotInSpan(LieGen, LieGen),
    #[error("a {k}x{k} leading minor needs k <= n = {n}")]
    MinorTooLarge { k: usize, n: usize },
    #[error("not a weight vector")]
    NotWeightVector,
    #[error("no raising operator for the root {0}")]
    UnsupportedRoot(Root),
}

/// Sizes and ε_ψ for the Fock model of the e_ℍ = −1 pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpec {
    pub m: usize,
    pub n: usize,
    pub eps: EpsPsi,
}

impl FockSpec {
    pub fn new(m: usize, n: usize, eps: EpsPsi) -> Self {
        FockSpec { m, n, eps }
    }

    pub fn nvars(&self) -> usize {
        2 * self.m * self.n
    }

    pub fn index(&self, v: FockVar) -> usize {
        let base = (v.a - 1) * self.n + (v.b - 1);
        match v.letter {
            Letter::Z => base,
            Letter::W => self.m * self.n + base,
        }
    }

    pub fn var(&self, idx: usize) -> FockVar {
        let mn = self.m * self.n;
        let (letter, r) = if idx < mn { (Letter::Z, idx) } else { (Letter::W, idx - mn) };
        FockVar { letter, a: r / self.n + 1, b: r % self.n + 1 }
    }

    pub fn eps_scalar(&self) -> GaussianRational {
        GaussianRational::new(int(0), int(self.eps.sign()))
    }

    fn z(&self, a: usize, b: usize) -> usize {
        self.index(FockVar { letter: Letter::Z, a, b })
    }

    fn w(&self, a: usize, b: usize) -> usize {
        self.index(FockVar { letter: Letter::W, a, b })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Z,
    W,
}

/// The variable z_{ab} or w_{ab}; indices are one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockVar {
    pub letter: Letter,
    pub a: usize,
    pub b: usize,
}

impl fmt::Display for FockVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.letter == Letter::Z { "z" } else { "w" };
        write!(f, "{l}{}{}", self.a, self.b)
    }
}

pub type Exponents = Vec<u16>;

/// A polynomial with Gaussian rational coefficients; zero terms are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    pub nvars: usize,
    terms: BTreeMap<Exponents, GaussianRational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn monomial(nvars: usize, e: Exponents, c: GaussianRational) -> Self {
        assert_eq!(e.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        p.add_term(e, c);
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Self::monomial(nvars, e, GaussianRational::one())
    }

    pub fn add_term(&mut self, e: Exponents, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u16]) -> GaussianRational {
        self.terms.get(e).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, x) in &o.terms {
            out.add_term(e.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-GaussianRational::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, x1) in &self.terms {
            for (e2, x2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, x1.clone() * x2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn conj(&self) -> Self {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x.conj())).collect() }
    }
}

/// A normal-ordered differential operator Σ c · x^mul ∂^diff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockOperator {
    pub nvars: usize,
    terms: BTreeMap<(Exponents, Exponents), GaussianRational>,
}

impl FockOperator {
    pub fn zero(nvars: usize) -> Self {
        FockOperator { nvars, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, mul: Exponents, diff: Exponents, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let key = (mul, diff);
        let s = self.terms.remove(&key).map_or(c.clone(), |old| old + c);
        if !s.is_zero() {
            self.terms.insert(key, s);
        }
    }

    /// `c · x_{mul…} ∂_{diff…}` from lists of variable indices.
    pub fn term(nvars: usize, c: GaussianRational, mul: &[usize], diff: &[usize]) -> Self {
        let mut op = Self::zero(nvars);
        op.add_term(exps(nvars, mul), exps(nvars, diff), c);
        op
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Exponents, Exponents), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((m, d), c) in &o.terms {
            out.add_term(m.clone(), d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for ((m, d), c) in &self.terms {
            out.add_term(m.clone(), d.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-GaussianRational::one()))
    }

    /// Complex conjugation of every coefficient.
    pub fn conj(&self) -> Self {
        FockOperator { nvars: self.nvars, terms: self.terms.iter().map(|(k, c)| (k.clone(), c.conj())).collect() }
    }

    /// Differentiate, then multiply.
    pub fn apply(&self, f: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(f.nvars);
        for ((mul, diff), c) in &self.terms {
            for (e, x) in f.terms() {
                let mut k: i64 = 1;
                let mut ok = true;
                let mut ne = e.clone();
                for (v, &d) in diff.iter().enumerate() {
                    for _ in 0..d {
                        if ne[v] == 0 {
                            ok = false;
                            break;
                        }
                        k *= ne[v] as i64;
                        ne[v] -= 1;
                    }
                    if !ok {
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                for (v, &mexp) in mul.iter().enumerate() {
                    ne[v] += mexp;
                }
                out.add_term(ne, c.clone() * x.clone() * GaussianRational::from_i64(k));
            }
        }
        out
    }

    /// The normal-ordered product `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &o.terms {
                // ∂^b x^c = Σ_k Π_v C(b_v, k_v) c_v!/(c_v − k_v)! x^{c−k} ∂^{b−k}
                let ranges: Vec<Vec<u16>> = b.iter().zip(c).map(|(&bv, &cv)| (0..=bv.min(cv)).collect()).collect();
                for ks in ranges.into_iter().multi_cartesian_product() {
                    let mut coef: i64 = 1;
                    for v in 0..self.nvars {
                        coef *= binom(b[v] as i64, ks[v] as i64) * falling(c[v] as i64, ks[v] as i64);
                    }
                    let mul = (0..self.nvars).map(|v| a[v] + c[v] - ks[v]).collect();
                    let diff = (0..self.nvars).map(|v| b[v] + d[v] - ks[v]).collect();
                    out.add_term(mul, diff, c1.clone() * c2.clone() * GaussianRational::from_i64(coef));
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.compose(o).sub(&o.compose(self))
    }
}

fn exps(nvars: usize, idx: &[usize]) -> Exponents {
    let mut e = vec![0; nvars];
    for &i in idx {
        e[i] += 1;
    }
    e
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn falling(n: i64, k: i64) -> i64 {
    (0..k).map(|i| n - i).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    H,
    X,
    Y,
    K,
    P,
    Pbar,
}

/// h_{ab}, x_{ab}, y_{ab} on the V side; k_{ab}, p_{ab}, p̄_{ab} on the W side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieGen {
    pub kind: GenKind,
    pub a: usize,
    pub b: usize,
}

impl LieGen {
    pub fn new(kind: GenKind, a: usize, b: usize) -> Self {
        LieGen { kind, a, b }
    }

    pub fn side(&self) -> Side {
        match self.kind {
            GenKind::H | GenKind::X | GenKind::Y => Side::V,
            _ => Side::W,
        }
    }

    fn check(&self, spec: &FockSpec) -> Result<(), FockError> {
        let bound = if self.side() == Side::V { spec.m } else { spec.n };
        if self.a == 0 || self.b == 0 || self.a > bound || self.b > bound {
            return Err(FockError::IllegalIndices(*self));
        }
        Ok(())
    }
}

impl fmt::Display for LieGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            GenKind::H => "H",
            GenKind::X => "X",
            GenKind::Y => "Y",
            GenKind::K => "K",
            GenKind::P => "P",
            GenKind::Pbar => "PBAR",
        };
        write!(f, "{k}({},{})", self.a, self.b)
    }
}

/// Every generator of one side; P and P̄ only off the diagonal, where they
/// are nonzero.
pub fn side_generators(spec: &FockSpec, side: Side) -> Vec<LieGen> {
    let mut out = Vec::new();
    match side {
        Side::V => {
            for kind in [GenKind::H, GenKind::X, GenKind::Y] {
                for (a, b) in (1..=spec.m).cartesian_product(1..=spec.m) {
                    out.push(LieGen::new(kind, a, b));
                }
            }
        }
        Side::W => {
            for kind in [GenKind::K, GenKind::P, GenKind::Pbar] {
                for (a, b) in (1..=spec.n).cartesian_product(1..=spec.n) {
                    if kind == GenKind::K || a != b {
                        out.push(LieGen::new(kind, a, b));
                    }
                }
            }
        }
    }
    out
}

pub fn all_generators(spec: &FockSpec) -> Vec<LieGen> {
    [side_generators(spec, Side::V), side_generators(spec, Side::W)].concat()
}

/// Which sign to use in the x and y images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XySigns {
    /// Symmetric in a, b, as required for the images to define a
    /// homomorphism that commutes with the W side.
    Corrected,
    /// Antisymmetric in a, b.
    Literal,
}

/// 𝓕_ψ(g) with |d_ψ| = 1.
pub fn generator_image(spec: &FockSpec, g: LieGen) -> Result<FockOperator, FockError> {
    generator_image_with(spec, g, XySigns::Corrected)
}

pub fn generator_image_with(spec: &FockSpec, g: LieGen, signs: XySigns) -> Result<FockOperator, FockError> {
    g.check(spec)?;
    let nv = spec.nvars();
    let eps = spec.eps_scalar();
    let one = GaussianRational::one();
    let (a, b) = (g.a, g.b);
    let mut op = FockOperator::zero(nv);
    let mut add = |c: &GaussianRational, mul: &[usize], diff: &[usize]| {
        op = op.add(&FockOperator::term(nv, c.clone(), mul, diff));
    };
    // In the corrected images the term whose multiplication variable carries
    // the index a changes sign.
    let flip = match signs {
        XySigns::Corrected => -one.clone(),
        XySigns::Literal => one.clone(),
    };
    match g.kind {
        GenKind::H => {
            for c in 1..=spec.n {
                add(&eps, &[spec.w(a, c)], &[spec.w(b, c)]);
                add(&-eps.clone(), &[spec.z(b, c)], &[spec.z(a, c)]);
            }
        }
        GenKind::X => {
            for c in 1..=spec.n {
                add(&eps, &[spec.w(b, c)], &[spec.z(a, c)]);
                add(&(-eps.clone() * flip.clone()), &[spec.w(a, c)], &[spec.z(b, c)]);
            }
        }
        GenKind::Y => {
            for c in 1..=spec.n {
                add(&(eps.clone() * flip.clone()), &[spec.z(a, c)], &[spec.w(b, c)]);
                add(&-eps.clone(), &[spec.z(b, c)], &[spec.w(a, c)]);
            }
        }
        GenKind::K => {
            for c in 1..=spec.m {
                add(&eps, &[spec.z(c, a)], &[spec.z(c, b)]);
                add(&eps, &[spec.w(c, a)], &[spec.w(c, b)]);
            }
            if a == b {
                add(&(eps.clone() * GaussianRational::from_i64(spec.m as i64)), &[], &[]);
            }
        }
        GenKind::P => {
            for c in 1..=spec.m {
                add(&one, &[spec.z(c, a), spec.w(c, b)], &[]);
                add(&-one.clone(), &[spec.w(c, a), spec.z(c, b)], &[]);
            }
        }
        GenKind::Pbar => {
            for c in 1..=spec.m {
                add(&one, &[], &[spec.z(c, b), spec.w(c, a)]);
                add(&-one.clone(), &[], &[spec.z(c, a), spec.w(c, b)]);
            }
        }
    }
    Ok(op)
}

type QC = Quaternion<GaussianRational>;

fn q(k: usize) -> QC {
    Quaternion::unit(k, -1)
}

/// The matrix of g in 𝔤(V) ⊗ ℂ (m × m) or 𝔤(W) ⊗ ℂ (n × n), with
/// σ_{ab}(x) = (e_{ab}(x) − e_{ba}(x*))/2 and s_{ab}(x) = (e_{ab}(x) − e_{ba}(i x* i⁻¹))/2.
pub fn generator_matrix(spec: &FockSpec, g: LieGen) -> Result<QMatrix<GaussianRational>, FockError> {
    g.check(spec)?;
    let eps = spec.eps_scalar();
    let half = GaussianRational::real(crate::scalar::rat(1, 2));
    let (a, b) = (g.a - 1, g.b - 1);
    let i = q(1);
    let i_inv = i.inverse().expect("i is invertible");
    let elem = |x: QC, twisted: bool| -> QMatrix<GaussianRational> {
        let size = if twisted { spec.n } else { spec.m };
        let partner = if twisted { &(&i * &x.star()) * &i_inv } else { x.star() };
        let m1 = QMatrix::unit(size, size, a, b, x);
        let m2 = QMatrix::unit(size, size, b, a, partner);
        (&m1 - &m2).scale(&half)
    };
    let sig = |k: usize| elem(q(k), false);
    let s = |k: usize| elem(q(k), true);
    Ok(match g.kind {
        GenKind::H => &sig(0).scale(&eps) + &sig(1),
        GenKind::X => &sig(2).scale(&eps) + &sig(3),
        GenKind::Y => &sig(2).scale(&eps) - &sig(3),
        GenKind::K => &s(1) + &s(0).scale(&eps),
        GenKind::P => &s(2) - &s(3).scale(&eps),
        GenKind::Pbar => &s(2) + &s(3).scale(&eps),
    })
}

/// Coefficients of `target` in the span of the given generators of one side.
pub fn expand_in_span(
    spec: &FockSpec,
    target: &QMatrix<GaussianRational>,
    basis: &[LieGen],
) -> Result<Option<Vec<GaussianRational>>, FockError> {
    let cols: Vec<Vec<GaussianRational>> =
        basis.iter().map(|g| generator_matrix(spec, *g).map(|m| m.flatten())).collect::<Result<_, _>>()?;
    let rhs = target.flatten();
    let a = crate::matrix::Matrix::from_fn(rhs.len(), cols.len(), |r, c| cols[c][r].clone());
    Ok(a.solve(&rhs))
}

/// All monomials in `nvars` variables of total degree at most `cap`.
pub fn monomials_up_to(nvars: usize, cap: usize) -> Vec<Exponents> {
    fn rec(v: usize, nvars: usize, left: usize, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if v == nvars {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[v] = k as u16;
            rec(v + 1, nvars, left - k, cur, out);
        }
        cur[v] = 0;
    }
    let mut out = Vec::new();
    rec(0, nvars, cap, &mut vec![0; nvars], &mut out);
    out
}

/// [𝓕(g1), 𝓕(g2)] = 𝓕([g1, g2]) on every monomial of degree ≤ `degree_cap`,
/// with [g1, g2] expanded through the matrix realization.
pub fn bracket_check(spec: &FockSpec, g1: LieGen, g2: LieGen, degree_cap: usize) -> Result<bool, FockError> {
    bracket_check_with(spec, g1, g2, degree_cap, XySigns::Corrected)
}

pub fn bracket_check_with(
    spec: &FockSpec,
    g1: LieGen,
    g2: LieGen,
    degree_cap: usize,
    signs: XySigns,
) -> Result<bool, FockError> {
    let f1 = generator_image_with(spec, g1, signs)?;
    let f2 = generator_image_with(spec, g2, signs)?;
    let expected = if g1.side() != g2.side() {
        FockOperator::zero(spec.nvars())
    } else {
        let m = generator_matrix(spec, g1)?.commutator(&generator_matrix(spec, g2)?);
        let basis = side_generators(spec, g1.side());
        let coeffs = expand_in_span(spec, &m, &basis)?.ok_or(FockError::NotInSpan(g1, g2))?;
        let mut acc = FockOperator::zero(spec.nvars());
        for (c, g) in coeffs.iter().zip(&basis) {
            if !c.is_zero() {
                acc = acc.add(&generator_image_with(spec, *g, signs)?.scale(c));
            }
        }
        acc
    };
    let diff = f1.commutator(&f2).sub(&expected);
    if diff.is_zero() {
        return Ok(true);
    }
    let nv = spec.nvars();
    Ok(monomials_up_to(nv, degree_cap)
        .into_iter()
        .all(|e| diff.apply(&SparsePoly::monomial(nv, e, GaussianRational::one())).is_zero()))
}

/// v(r) = Π_k det((w_{ab})_{a,b ≤ k})^{r_k}.
pub fn det_vector(r: &[u32], m: usize, n: usize) -> Result<SparsePoly, FockError> {
    let spec = FockSpec::new(m, n, EpsPsi::PlusI);
    let nv = spec.nvars();
    if r.len() > m {
        return Err(FockError::MinorTooLarge { k: r.len(), n: m });
    }
    let mut out = SparsePoly::one(nv);
    for (k0, &rk) in r.iter().enumerate() {
        let k = k0 + 1;
        if rk == 0 {
            continue;
        }
        if k > n {
            return Err(FockError::MinorTooLarge { k, n });
        }
        out = out.mul(&leading_minor(&spec, k).pow(rk));
    }
    Ok(out)
}

fn leading_minor(spec: &FockSpec, k: usize) -> SparsePoly {
    let nv = spec.nvars();
    let mut det = SparsePoly::zero(nv);
    for perm in (0..k).permutations(k) {
        let inversions = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        let idx: Vec<usize> = (0..k).map(|a| spec.w(a + 1, perm[a] + 1)).collect();
        det.add_term(exps(nv, &idx), GaussianRational::from_i64(sign));
    }
    det
}

/// The second-order row operators Σ_c ∂²/∂z_{ac}∂z_{bc}, Σ_c ∂²/∂z_{ac}∂w_{bc}
/// and Σ_c ∂²/∂w_{ac}∂w_{bc}.
pub fn row_laplacians(spec: &FockSpec) -> Vec<FockOperator> {
    let nv = spec.nvars();
    let one = GaussianRational::one();
    let mut ops = Vec::new();
    for (a, b) in (1..=spec.m).cartesian_product(1..=spec.m) {
        let pairs: [(fn(&FockSpec, usize, usize) -> usize, fn(&FockSpec, usize, usize) -> usize); 3] =
            [(FockSpec::z, FockSpec::z), (FockSpec::z, FockSpec::w), (FockSpec::w, FockSpec::w)];
        for (x, y) in pairs {
            let mut op = FockOperator::zero(nv);
            for c in 1..=spec.n {
                op = op.add(&FockOperator::term(nv, one.clone(), &[], &[x(spec, a, c), y(spec, b, c)]));
            }
            ops.push(op);
        }
    }
    ops
}

/// A basis of the combinations of [`row_laplacians`] that commute with every
/// K(a, b): the degree-lowering part of the centralizer of K_-.
pub fn v_lowering_operators(spec: &FockSpec) -> Vec<FockOperator> {
    let cands = row_laplacians(spec);
    let ks: Vec<FockOperator> = (1..=spec.n)
        .cartesian_product(1..=spec.n)
        .map(|(a, b)| generator_image(spec, LieGen::new(GenKind::K, a, b)).expect("indices in range"))
        .collect();
    // One column per candidate: the coefficients of all its commutators with K.
    let cols: Vec<BTreeMap<(usize, (Exponents, Exponents)), GaussianRational>> = cands
        .iter()
        .map(|d| {
            let mut col = BTreeMap::new();
            for (i, k) in ks.iter().enumerate() {
                for (key, c) in k.commutator(d).terms() {
                    col.insert((i, key.clone()), c.clone());
                }
            }
            col
        })
        .collect();
    let keys: Vec<_> = cols.iter().flat_map(|c| c.keys().cloned()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let a = crate::matrix::Matrix::from_fn(keys.len(), cands.len(), |r, c| {
        cols[c].get(&keys[r]).cloned().unwrap_or_else(GaussianRational::zero)
    });
    a.nullspace()
        .into_iter()
        .map(|x| {
            x.iter().zip(&cands).fold(FockOperator::zero(spec.nvars()), |acc, (t, d)| acc.add(&d.scale(t)))
        })
        .filter(|op| !op.is_zero())
        .collect()
}

/// The operators whose common kernel is the space of joint harmonics: all
/// P̄(a, b), together with [`v_lowering_operators`].
pub fn harmonic_operators(spec: &FockSpec) -> Vec<FockOperator> {
    let mut ops: Vec<FockOperator> = (1..=spec.n)
        .cartesian_product(1..=spec.n)
        .filter(|(a, b)| a != b)
        .map(|(a, b)| generator_image(spec, LieGen::new(GenKind::Pbar, a, b)).expect("indices in range"))
        .collect();
    ops.extend(v_lowering_operators(spec));
    ops
}

pub fn is_joint_harmonic(spec: &FockSpec, f: &SparsePoly) -> bool {
    harmonic_operators(spec).iter().all(|op| op.apply(f).is_zero())
}

fn eigenvalue(op: &FockOperator, f: &SparsePoly) -> Option<GaussianRational> {
    let (e, x) = f.terms().next()?;
    let g = op.apply(f);
    let lambda = g.coeff(e).div(x)?;
    (g == f.scale(&lambda)).then_some(lambda)
}

/// The eigen-weights of f under H(a, a) and K(b, b), divided by ε_ψ.
pub fn weight_of(spec: &FockSpec, f: &SparsePoly) -> Option<(Weight, Weight)> {
    let eps_inv = spec.eps_scalar().inv().expect("ε_ψ is a unit");
    let weight = |kind: GenKind, r: usize| -> Option<Weight> {
        (1..=r)
            .map(|a| {
                let op = generator_image(spec, LieGen::new(kind, a, a)).ok()?;
                let l = eigenvalue(&op, f)? * eps_inv.clone();
                l.im.is_zero().then_some(l.re)
            })
            .collect()
    };
    Some((weight(GenKind::H, spec.m)?, weight(GenKind::K, spec.n)?))
}

/// The raising operator attached to a root of the side's torus.
pub fn raising_generator(side: Side, root: &Root) -> Result<LieGen, FockError> {
    let (i, j) = (root.i + 1, root.j + 1);
    let g = match (side, root.kind, root.positive) {
        (Side::V, RootKind::Diff, true) => LieGen::new(GenKind::H, i, j),
        (Side::V, RootKind::Diff, false) => LieGen::new(GenKind::H, j, i),
        (Side::V, RootKind::Sum, true) => LieGen::new(GenKind::X, i, j),
        (Side::V, RootKind::Sum, false) => LieGen::new(GenKind::Y, i, j),
        (Side::V, RootKind::Long, true) => LieGen::new(GenKind::X, i, i),
        (Side::V, RootKind::Long, false) => LieGen::new(GenKind::Y, i, i),
        (Side::W, RootKind::Diff, true) => LieGen::new(GenKind::K, i, j),
        (Side::W, RootKind::Diff, false) => LieGen::new(GenKind::K, j, i),
        (Side::W, RootKind::Sum, true) => LieGen::new(GenKind::P, i, j),
        (Side::W, RootKind::Sum, false) => LieGen::new(GenKind::Pbar, i, j),
        (Side::W, RootKind::Long, _) => return Err(FockError::UnsupportedRoot(*root)),
    };
    Ok(g)
}

/// Whether f is killed by the raising operator of every root in `roots`.
pub fn is_maximal_vector(spec: &FockSpec, f: &SparsePoly, side: Side, roots: &[Root]) -> Result<bool, FockError> {
    if !f.is_zero() && weight_of(spec, f).is_none() {
        return Err(FockError::NotWeightVector);
    }
    for r in roots {
        let op = generator_image(spec, raising_generator(side, r)?)?;
        if !op.apply(f).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The weight of v(r): α_k = r_k + … + r_p and β_l = m + r_l + … + r_p.
pub fn det_vector_weight(r: &[u32], m: usize, n: usize) -> (Weight, Weight) {
    let tail = |k: usize| -> i64 { r.iter().skip(k).map(|&x| x as i64).sum() };
    let alpha = (0..m).map(|k| int(tail(k))).collect();
    let beta = (0..n).map(|l| int(m as i64 + tail(l))).collect();
    (alpha, beta)
}

/// ε_ψ-flip audit: the images for −ε_ψ are the coefficientwise conjugates.
pub fn conjugation_audit(spec: &FockSpec) -> Result<bool, FockError> {
    let flipped = FockSpec { eps: spec.eps.flip(), ..*spec };
    for g in all_generators(spec) {
        if generator_image(&flipped, g)? != generator_image(spec, g)?.conj() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rational helper for tests and callers building weights.
pub fn weight(v: &[i64]) -> Weight {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootcomb::{standard_positive_roots, Family};

    fn spec(m: usize, n: usize) -> FockSpec {
        FockSpec::new(m, n, EpsPsi::PlusI)
    }

    #[test]
    fn apply_basics() {
        let s = spec(1, 1);
        let w = s.w(1, 1);
        let f = SparsePoly::var(2, w).pow(2);
        let d = FockOperator::term(2, GaussianRational::one(), &[], &[w]);
        assert_eq!(d.apply(&f), SparsePoly::var(2, w).scale(&GaussianRational::from_i64(2)));
        let euler = FockOperator::term(2, GaussianRational::one(), &[w], &[w]);
        let f5 = SparsePoly::var(2, w).pow(5);
        assert_eq!(euler.apply(&f5), f5.scale(&GaussianRational::from_i64(5)));
        assert!(euler.apply(&SparsePoly::zero(2)).is_zero());
    }

    #[test]
    fn compose_matches_application() {
        let s = spec(1, 2);
        let a = generator_image(&s, LieGen::new(GenKind::Pbar, 1, 2)).unwrap();
        let b = generator_image(&s, LieGen::new(GenKind::P, 1, 2)).unwrap();
        let ab = a.compose(&b);
        for e in monomials_up_to(s.nvars(), 3) {
            let f = SparsePoly::monomial(s.nvars(), e, GaussianRational::one());
            assert_eq!(ab.apply(&f), a.apply(&b.apply(&f)));
        }
    }

    #[test]
    fn small_images() {
        let s = spec(1, 1);
        assert!(generator_image(&s, LieGen::new(GenKind::P, 1, 1)).unwrap().is_zero());
        let s2 = spec(2, 1);
        let k = generator_image(&s2, LieGen::new(GenKind::K, 1, 1)).unwrap();
        assert_eq!(k.apply(&SparsePoly::one(4)), SparsePoly::constant(4, s2.eps_scalar().scale(&int(2))));
        assert!(generator_image(&s2, LieGen::new(GenKind::H, 3, 1)).is_err());
    }

    #[test]
    fn det_vector_examples() {
        let s = spec(2, 2);
        assert_eq!(det_vector(&[1], 1, 1).unwrap(), SparsePoly::var(2, 1));
        let d = det_vector(&[0, 1], 2, 2).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&exps(8, &[s.w(1, 1), s.w(2, 2)])), GaussianRational::one());
        assert_eq!(d.coeff(&exps(8, &[s.w(1, 2), s.w(2, 1)])), -GaussianRational::one());
        assert_eq!(det_vector(&[0, 0], 2, 2).unwrap(), SparsePoly::one(8));
        assert!(det_vector(&[0, 1], 2, 1).is_err());
    }

    #[test]
    fn harmonic_examples() {
        let s = spec(2, 2);
        assert!(is_joint_harmonic(&s, &det_vector(&[1, 1], 2, 2).unwrap()));
        let s1 = spec(1, 2);
        let zw = SparsePoly::var(4, s1.z(1, 1)).mul(&SparsePoly::var(4, s1.w(1, 2)));
        assert!(!is_joint_harmonic(&s1, &zw));
        assert!(is_joint_harmonic(&s1, &SparsePoly::one(4)));
        for (m, n) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            assert!(v_lowering_operators(&spec(m, n)).is_empty());
        }
    }

    #[test]
    fn weights() {
        let s = spec(1, 1);
        let (a, b) = weight_of(&s, &SparsePoly::var(2, s.w(1, 1))).unwrap();
        assert_eq!((a, b), (weight(&[1]), weight(&[2])));
        let mixed = SparsePoly::var(2, s.z(1, 1)).add(&SparsePoly::var(2, s.w(1, 1)).pow(2));
        assert!(weight_of(&s, &mixed).is_none());
        let s3 = spec(3, 2);
        assert_eq!(weight_of(&s3, &SparsePoly::one(12)).unwrap(), (weight(&[0, 0, 0]), weight(&[3, 3])));
    }

    #[test]
    fn maximal_vectors() {
        let s = spec(2, 2);
        let v_roots = standard_positive_roots(Family::C, 2);
        let w_roots = vec![Root::diff(0, 1)];
        let v = det_vector(&[1, 2], 2, 2).unwrap();
        assert!(is_maximal_vector(&s, &v, Side::V, &v_roots).unwrap());
        assert!(is_maximal_vector(&s, &v, Side::W, &w_roots).unwrap());
        let w21 = SparsePoly::var(8, s.w(2, 1));
        assert!(!is_maximal_vector(&s, &w21, Side::V, &[Root::diff(0, 1)]).unwrap());
        assert!(is_maximal_vector(&s, &SparsePoly::one(8), Side::V, &v_roots).unwrap());
    }

    #[test]
    fn brackets_small() {
        let s = spec(2, 1);
        for g1 in all_generators(&s) {
            for g2 in all_generators(&s) {
                assert!(bracket_check(&s, g1, g2, 3).unwrap(), "{g1} {g2}");
            }
        }
    }

    #[test]
    fn literal_xy_signs_fail() {
        let s = spec(2, 1);
        let gens = all_generators(&s);
        let bad = gens
            .iter()
            .cartesian_product(&gens)
            .filter(|(a, b)| !matches!(bracket_check_with(&s, **a, **b, 3, XySigns::Literal), Ok(true)))
            .count();
        assert!(bad > 0);
    }

    #[test]
    fn eps_flip_conjugates() {
        assert!(conjugation_audit(&spec(2, 2)).unwrap());
    }
}
