//! The Galois cocycles of the two anisotropic tori and the torus map 𝔭_ξ.

use super::forms::{displayed_p, inverse, so_anisotropic, sp_anisotropic, tq, ts, v_form};
use super::tower::{GaloisAction, Tower, TowerMatrix, TowerScalar};
use super::{Report, VerifyError};
use crate::matrix::Matrix;
use crate::rootcomb::EpsPsi;
use crate::scalar::{is_rational_square, Field};
use crate::Rational;
use num_traits::{One, Zero};
use std::sync::Arc;

/// ℚ(√−1, √2) with σ the complex conjugation.
#[derive(Debug, Clone)]
pub struct ComplexTower {
    pub tower: Arc<Tower>,
    /// √−1.
    pub i: TowerScalar,
    pub sigma: GaloisAction,
}

impl ComplexTower {
    pub fn new() -> Self {
        let tower = Tower::new(vec![Rational::from_integer((-1).into()), Rational::from_integer(2.into())])
            .expect("−1 and 2 are independent");
        let i = TowerScalar::radical(&tower, 0);
        let sigma = GaloisAction::flipping(&tower, &[0]);
        ComplexTower { tower, i, sigma }
    }

    pub fn sqrt2(&self) -> TowerScalar {
        TowerScalar::radical(&self.tower, 1)
    }

    /// ε_ψ as an element of the tower.
    pub fn eps(&self, e: EpsPsi) -> TowerScalar {
        match e {
            EpsPsi::PlusI => self.i.clone(),
            EpsPsi::MinusI => -self.i.clone(),
        }
    }

    /// x + √−1·y.
    pub fn gauss(&self, x: &Rational, y: &Rational) -> TowerScalar {
        tq(x) + tq(y) * self.i.clone()
    }
}

impl Default for ComplexTower {
    fn default() -> Self {
        Self::new()
    }
}

/// −√−1·ε_ψ as a sign.
pub fn eps_sign(e: EpsPsi) -> i64 {
    match e {
        EpsPsi::PlusI => 1,
        EpsPsi::MinusI => -1,
    }
}

/// ρ₊ = diag(−1, 1, −1, …).
fn rho_plus(m: usize) -> TowerMatrix {
    Matrix::diag(&(0..m).map(|k| ts(if k % 2 == 0 { -1 } else { 1 })).collect::<Vec<_>>())
}

/// h₀ = (1/√2)·[[I, c·ε·ρJ], [c⁻¹·ε·Jρ, I]].
pub fn h0(ct: &ComplexTower, m: usize, c: &Rational, eps: EpsPsi) -> TowerMatrix {
    let e = ct.eps(eps);
    let rho = rho_plus(m);
    let j: TowerMatrix = Matrix::j(m);
    let mut h = Matrix::zeros(2 * m, 2 * m);
    h.put(0, 0, &Matrix::identity(m));
    h.put(m, m, &Matrix::identity(m));
    h.put(0, m, &(&rho * &j).scale(&(tq(c) * e.clone())));
    h.put(m, 0, &(&j * &rho).scale(&(tq(&c.recip()) * e)));
    let half_root = ct.sqrt2().inv().expect("√2 is a unit");
    h.scale(&half_root)
}

/// Checks λ(σ) = h₀⁻¹·x(σ)·n(ω)·σ(h₀) = −√−1·ε_ψ·I for the symplectic torus.
pub fn verify_sp_gen(m: usize, c: &Rational, eps: EpsPsi) -> Result<Report, VerifyError> {
    sp_gen_with(m, c, eps, false)
}

pub(crate) fn sp_gen_with(m: usize, c: &Rational, eps: EpsPsi, perturb: bool) -> Result<Report, VerifyError> {
    if m == 0 || m > 6 || c.is_zero() {
        return Err(VerifyError::InvalidParameter(format!("sp-gen needs 1 ≤ m ≤ 6 and c ≠ 0, got m={m}, c={c}")));
    }
    let ct = ComplexTower::new();
    let mut report = Report::new(format!("sp-gen:m={m},c={c},eps={eps}"));
    let mut h = h0(&ct, m, c, eps);
    if perturb {
        for k in 0..2 * m {
            let v = -h.get(0, k).clone();
            h.set(0, k, v);
        }
    }
    let j: TowerMatrix = Matrix::j(m);
    let sign = if m % 2 == 1 { 1 } else { -1 };
    let mut n = Matrix::zeros(2 * m, 2 * m);
    n.put(0, m, &j.scale(&(ts(sign) * tq(c))));
    n.put(m, 0, &j.scale(&(ts(-sign) * tq(&c.recip()))));
    let rho = rho_plus(m);
    let x = Matrix::block_diag(&[&(&j * &rho) * &j, -&rho]).scale(&ct.i);
    let form = v_form(m, c);
    report.check_matrix("h0 ∈ Sp", &(&(&h.transpose() * &form) * &h), &form);
    report.check_matrix("n(ω) ∈ Sp", &(&(&n.transpose() * &form) * &n), &form);
    let lambda = &(&(&inverse(&h, "h0")? * &x) * &n) * &ct.sigma.apply_matrix(&h);
    let expected = Matrix::scalar(2 * m, -ct.i.clone() * ct.eps(eps));
    report.check_matrix("λ(σ) = −√−1·ε_ψ·I", &lambda, &expected);
    report.check_matrix("λ(σ)·σ(λ(σ)) = 1", &(&lambda * &ct.sigma.apply_matrix(&lambda)), &Matrix::identity(2 * m));
    Ok(report)
}

/// g₁, the change of basis diagonalising the split torus of O(Q_n).
pub fn g1(ct: &ComplexTower, n: usize) -> TowerMatrix {
    let t = n.div_ceil(2);
    let mut g = Matrix::zeros(2 * n, 2 * n);
    for k in 1..=2 * n {
        let a = k <= 2 * (n - t);
        let b = k > 2 * t;
        if (a || b) && k % 2 == 1 {
            g.set(k - 1, k, ts(1));
        } else if a {
            g.set(k - 1, k + 2 * t - 2, ct.i.clone());
        } else if b {
            g.set(k - 1, k - 2 * t - 2, ct.i.clone());
        } else {
            g.set(k - 1, k - 1, ts(1));
        }
    }
    g
}

/// g₀ = P⁻¹·g₁·P.
pub fn g0(ct: &ComplexTower, n: usize) -> Result<TowerMatrix, VerifyError> {
    let p = displayed_p(n)?;
    Ok(&(&inverse(&p, "P")? * &g1(ct, n)) * &p)
}

fn a0(n: usize) -> TowerMatrix {
    let t = n.div_ceil(2);
    Matrix::diag(&(0..2 * n - 2 * t).map(|k| ts(if k % 2 == 0 { 1 } else { -1 })).collect::<Vec<_>>())
}

fn nw_even(n: usize) -> Result<TowerMatrix, VerifyError> {
    let q = super::forms::q_block(n);
    Ok(-&(&(&inverse(&q, "Q")? * &Matrix::j(2 * n)) * &q))
}

fn nw_odd(n: usize) -> TowerMatrix {
    let mut nw = Matrix::zeros(2 * n, 2 * n);
    for a in 0..n - 1 {
        nw.set(a, 2 * n - 1 - a, ts(1));
        nw.set(2 * n - 1 - a, a, ts(1));
    }
    nw.set(n - 1, n - 1, ts(1));
    nw.set(n, n, ts(1));
    nw
}

/// Checks λ(σ) = g₀⁻¹·x(σ)·n(ω)·σ(g₀) = 1 for the orthogonal torus. The
/// discriminant must be in the square class of (−1)^n.
pub fn verify_so_gen(n: usize, d: &Rational) -> Result<Report, VerifyError> {
    so_gen_with(n, d, false)
}

pub(crate) fn so_gen_with(n: usize, d: &Rational, wrong_parity: bool) -> Result<Report, VerifyError> {
    if n == 0 || n > 6 {
        return Err(VerifyError::InvalidParameter(format!("so-gen needs 1 ≤ n ≤ 6, got {n}")));
    }
    let d0 = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    if d.is_zero() || !is_rational_square(&(d * &d0)) {
        return Err(VerifyError::InvalidParameter(format!("so-gen needs d in the square class of {d0}, got {d}")));
    }
    let ct = ComplexTower::new();
    let mut report = Report::new(format!("so-gen:n={n},d={d}"));
    let g = g1(&ct, n);
    let a = a0(n);
    let even = n.is_multiple_of(2) != wrong_parity;
    let nw = if even { nw_even(n)? } else { nw_odd(n) };
    let x = if n.is_multiple_of(2) {
        let q = super::forms::q_block(n);
        &(&inverse(&q, "Q")? * &Matrix::block_diag(&[-&a, a.clone()])) * &q
    } else if n == 1 {
        Matrix::identity(2)
    } else {
        Matrix::block_diag(&[a.clone(), Matrix::identity(2), -&a])
    };
    if n.is_multiple_of(2) {
        report.check_matrix("σ(g1) = diag(a0, a0)·g1", &ct.sigma.apply_matrix(&g), &(&Matrix::block_diag(&[a.clone(), a]) * &g));
    }
    let g0 = g0(&ct, n)?;
    let lambda = &(&(&inverse(&g0, "g0")? * &x) * &nw) * &ct.sigma.apply_matrix(&g0);
    report.check_matrix("λ(σ) = 1", &lambda, &Matrix::identity(2 * n));
    report.check_matrix("λ(σ)·σ(λ(σ)) = 1", &(&lambda * &ct.sigma.apply_matrix(&lambda)), &Matrix::identity(2 * n));
    Ok(report)
}

/// 𝔭_ξ on the orthogonal torus: diagonalise by g₀, read b₁, …, b_m (the
/// last coordinate of the rank-n torus combines two entries through √d) and
/// return h₀⁻¹·diag(b, b⁻¹ reversed)·h₀.
pub fn p_xi(ct: &ComplexTower, mm: &TowerMatrix, m: usize, n: usize, eps: EpsPsi) -> Result<TowerMatrix, VerifyError> {
    if n != m && n != m + 1 {
        return Err(VerifyError::InvalidParameter(format!("𝔭_ξ needs n ∈ {{m, m+1}}, got m={m}, n={n}")));
    }
    let g = g0(ct, n)?;
    let t = &(&g * mm) * &inverse(&g, "g0")?;
    let sqrt_d = if n.is_multiple_of(2) { ts(1) } else { ct.i.clone() };
    let b: Vec<TowerScalar> = (0..m)
        .map(|k| if k + 1 < n { t.get(k, k).clone() } else { t.get(k, k).clone() + sqrt_d.clone() * t.get(k, k + 1).clone() })
        .collect();
    let inv: Vec<TowerScalar> =
        b.iter().rev().map(|x| x.inv().ok_or_else(|| VerifyError::Singular("torus coordinate".into()))).collect::<Result<_, _>>()?;
    let tau = Matrix::diag(&[b, inv].concat());
    let h = h0(ct, m, &Rational::one(), eps);
    Ok(&(&inverse(&h, "h0")? * &tau) * &h)
}

/// ρ₁(k) for one-based k.
pub fn rho1(n: usize, k: usize) -> usize {
    let t = n.div_ceil(2);
    if k % 2 == 1 {
        k.div_ceil(2)
    } else {
        t + k / 2
    }
}

/// u_k = −√−1·ε_ψ for k ≤ ⌈n/2⌉ and √−1·ε_ψ otherwise, as signs.
pub fn u_vector(n: usize, eps: EpsPsi) -> Vec<i64> {
    let t = n.div_ceil(2);
    (1..=n).map(|k| if k <= t { eps_sign(eps) } else { -eps_sign(eps) }).collect()
}

/// Points z = x + √−1·y on the unit circle.
pub fn sample_points(k: usize) -> Vec<(Rational, Rational)> {
    let base = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29), (12, 35, 37), (9, 40, 41)];
    (0..k)
        .map(|j| {
            let (a, b, c) = base[j % base.len()];
            (Rational::new(a.into(), c.into()), Rational::new(b.into(), c.into()))
        })
        .collect()
}

fn unit_power(z: &(Rational, Rational), e: i64) -> (TowerScalar, TowerScalar) {
    if e >= 0 {
        (tq(&z.0), tq(&z.1))
    } else {
        (tq(&z.0), -tq(&z.1))
    }
}

/// (u·ρ₁)·z: w_k = z_{ρ₁⁻¹(k)}^{u_k}.
fn twisted(z: &[(Rational, Rational)], u: &[i64]) -> Vec<(TowerScalar, TowerScalar)> {
    let n = z.len();
    let mut w = vec![(TowerScalar::zero(), TowerScalar::zero()); n];
    for k in 1..=n {
        let j = rho1(n, k);
        w[j - 1] = unit_power(&z[k - 1], u[j - 1]);
    }
    w
}

/// Checks 𝔭_ξ(P⁻¹·ς_∼^#((u·ρ₁)·z)·P) = ς_+^#(z₁, …, z_m), on sampled
/// points and on the character lattices.
pub fn verify_fpxi(m: usize, n: usize, eps: EpsPsi) -> Result<Report, VerifyError> {
    fpxi_with(m, n, eps, false)
}

pub(crate) fn fpxi_with(m: usize, n: usize, eps: EpsPsi, flip_u1: bool) -> Result<Report, VerifyError> {
    if m == 0 || m > 4 || (n != m && n != m + 1) {
        return Err(VerifyError::InvalidParameter(format!("fpxi needs 1 ≤ m ≤ 4 and n ∈ {{m, m+1}}, got m={m}, n={n}")));
    }
    let ct = ComplexTower::new();
    let mut report = Report::new(format!("fpxi:m={m},n={n},eps={eps}"));
    let p = displayed_p(n)?;
    let pi = inverse(&p, "P")?;
    let mut u = u_vector(n, eps);
    if flip_u1 {
        u[0] = -u[0];
    }
    let z = sample_points(n);
    let image = |z: &[(Rational, Rational)]| -> Result<TowerMatrix, VerifyError> {
        let w = twisted(z, &u);
        p_xi(&ct, &(&(&pi * &so_anisotropic(&w)) * &p), m, n, eps)
    };
    let lhs = image(&z)?;
    let rhs = sp_anisotropic(&z[..m].iter().map(|x| (tq(&x.0), tq(&x.1))).collect::<Vec<_>>());
    report.check_matrix("𝔭_ξ((u·ρ1)·ς∼(z)) = ς+(z)", &lhs, &rhs);
    // Character lattices: vary one coordinate z_j at a time and read the
    // exponents of z_j on the diagonal of h₀·(−)·h₀⁻¹, for both sides.
    let h = h0(&ct, m, &Rational::one(), eps);
    let hi = inverse(&h, "h0")?;
    let one = (Rational::one(), Rational::zero());
    let exponent = |v: &TowerScalar, zj: &(Rational, Rational)| -> Option<i64> {
        if *v == ct.gauss(&zj.0, &zj.1) {
            Some(1)
        } else if *v == ct.gauss(&zj.0, &-zj.1.clone()) {
            Some(-1)
        } else if v.is_one() {
            Some(0)
        } else {
            None
        }
    };
    let mut through_xi = vec![vec![None; n]; m];
    let mut direct = vec![vec![None; n]; m];
    for j in 0..n {
        let mut zj = vec![one.clone(); n];
        zj[j] = z[j].clone();
        let lhs = &(&h * &image(&zj)?) * &hi;
        let plus: Vec<_> = zj[..m].iter().map(|x| (tq(&x.0), tq(&x.1))).collect();
        let rhs = &(&h * &sp_anisotropic(&plus)) * &hi;
        for k in 0..m {
            through_xi[k][j] = exponent(lhs.get(k, k), &z[j]);
            direct[k][j] = exponent(rhs.get(k, k), &z[j]);
        }
    }
    let readable = through_xi.iter().chain(&direct).all(|row| row.iter().all(Option::is_some));
    report.check("exponent matrices are integral", readable);
    report.check("exponent matrices agree", readable && through_xi == direct);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn sp_gen_all() {
        for m in 1..=6 {
            for c in [1, -3, 2] {
                for e in [EpsPsi::PlusI, EpsPsi::MinusI] {
                    let r = verify_sp_gen(m, &int(c), e).unwrap();
                    assert!(r.passed(), "{r:?}");
                }
            }
        }
        assert!(!sp_gen_with(4, &int(-3), EpsPsi::MinusI, true).unwrap().passed());
    }

    #[test]
    fn so_gen_all() {
        for n in 1..=6 {
            let d = if n % 2 == 0 { 1 } else { -1 };
            let r = verify_so_gen(n, &int(d)).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(!so_gen_with(n, &int(d), true).unwrap().passed(), "n={n}");
        }
        assert!(verify_so_gen(2, &int(4)).unwrap().passed());
        assert!(matches!(verify_so_gen(2, &int(2)), Err(VerifyError::InvalidParameter(_))));
    }

    #[test]
    fn fpxi_all() {
        for m in 1..=4 {
            for n in [m, m + 1] {
                for e in [EpsPsi::PlusI, EpsPsi::MinusI] {
                    let r = verify_fpxi(m, n, e).unwrap();
                    assert!(r.passed(), "{r:?}");
                    assert!(!fpxi_with(m, n, e, true).unwrap().passed());
                }
            }
        }
    }

    #[test]
    fn rho1_is_a_permutation() {
        for n in 1..=6 {
            let mut v: Vec<usize> = (1..=n).map(|k| rho1(n, k)).collect();
            v.sort();
            assert_eq!(v, (1..=n).collect::<Vec<_>>());
        }
        assert_eq!((1..=4).map(|k| rho1(4, k)).collect::<Vec<_>>(), vec![1, 3, 2, 4]);
    }
}
