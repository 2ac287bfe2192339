//! Gram matrices, the change of basis P, splittings and torus embeddings.

use super::tower::{GaloisAction, Tower, TowerMatrix, TowerScalar};
use super::{Report, VerifyError};
use crate::matrix::Matrix;
use crate::scalar::Field;
use crate::Rational;
use num_traits::{One, Zero};
use std::sync::Arc;

pub(crate) fn ts(n: i64) -> TowerScalar {
    TowerScalar::from_i64(n)
}

pub(crate) fn tq(q: &Rational) -> TowerScalar {
    TowerScalar::rational(q.clone())
}

pub(crate) fn inverse(m: &TowerMatrix, what: &str) -> Result<TowerMatrix, VerifyError> {
    m.inverse().ok_or_else(|| VerifyError::Singular(what.to_string()))
}

fn j(r: usize) -> TowerMatrix {
    Matrix::j(r)
}

/// c⁻¹·[[0, J_m], [−J_m, 0]], the symplectic form on V_c^#.
pub fn v_form(m: usize, c: &Rational) -> TowerMatrix {
    let ci = tq(&c.recip());
    Matrix::from_fn(2 * m, 2 * m, |r, k| {
        if r < m && k == 2 * m - 1 - r {
            ci.clone()
        } else if r >= m && k == 2 * m - 1 - r {
            -ci.clone()
        } else {
            TowerScalar::zero()
        }
    })
}

/// S_n: c·[[0,0,0,J_{n−1}],[0,2,0,0],[0,0,−2d,0],[J_{n−1},0,0,0]].
pub fn s_matrix(n: usize, d: &Rational, c: &Rational) -> TowerMatrix {
    let mut s = Matrix::zeros(2 * n, 2 * n);
    for a in 0..n - 1 {
        s.set(a, 2 * n - 1 - a, tq(c));
        s.set(2 * n - 1 - a, a, tq(c));
    }
    s.set(n - 1, n - 1, ts(2) * tq(c));
    s.set(n, n, ts(-2) * tq(d) * tq(c));
    s
}

/// Q_n = diag(2·I_{2t}, −2·I_{2n−2t}) with t = ⌈n/2⌉.
pub fn q_n(n: usize) -> TowerMatrix {
    let t = n.div_ceil(2);
    Matrix::diag(&(0..2 * n).map(|k| ts(if k < 2 * t { 2 } else { -2 })).collect::<Vec<_>>())
}

/// The matrix Q = I ⊕ [[1,1],[1,−1]] ⊕ I.
pub fn q_block(n: usize) -> TowerMatrix {
    let mut q = Matrix::identity(2 * n);
    q.set(n - 1, n, ts(1));
    q.set(n, n - 1, ts(1));
    q.set(n, n, ts(-1));
    q
}

/// The block product P₁P₀Q⁻¹ (n even) or P₁P₀ (n odd). It satisfies
/// P·S_n·ᵗP = Q_n at the discriminant (−1)^n; the generators are written in
/// this basis.
pub(crate) fn displayed_p(n: usize) -> Result<TowerMatrix, VerifyError> {
    let t = n.div_ceil(2);
    let mut blocks = vec![Matrix::identity(2 * t)];
    blocks.extend((0..n - t).map(|_| j(2)));
    let p1 = Matrix::block_diag(&blocks);
    let mut p0 = Matrix::zeros(2 * n, 2 * n);
    if n.is_multiple_of(2) {
        p0.put(0, 0, &Matrix::identity(n));
        p0.put(0, n, &j(n));
        p0.put(n, 0, &Matrix::identity(n));
        p0.put(n, n, &(-&j(n)));
        Ok(&(&p1 * &p0) * &inverse(&q_block(n), "Q")?)
    } else {
        p0.put(0, 0, &Matrix::identity(n - 1));
        p0.put(0, n + 1, &j(n - 1));
        p0.put(n - 1, n - 1, &Matrix::identity(2));
        p0.put(n + 1, 0, &Matrix::identity(n - 1));
        p0.put(n + 1, n + 1, &(-&j(n - 1)));
        Ok(&p1 * &p0)
    }
}

/// P with ᵗP·S_n·P = Q_n, the transpose of the block product. For a
/// discriminant d other than (−1)^n the coordinate paired with −2d is
/// rescaled by √((−1)^n d)⁻¹, which must lie in the tower.
pub fn build_p(tower: &Arc<Tower>, n: usize, d: &Rational) -> Result<TowerMatrix, VerifyError> {
    if n == 0 || d.is_zero() {
        return Err(VerifyError::InvalidParameter("build_P needs n ≥ 1 and d ≠ 0".into()));
    }
    let d0 = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let kappa = TowerScalar::sqrt(tower, &(d * &d0))?;
    let mut scale = Matrix::identity(2 * n);
    scale.set(n, n, inverse(&Matrix::scalar(1, kappa), "√((−1)^n d)")?.get(0, 0).clone());
    let p = &scale * &displayed_p(n)?.transpose();
    let lhs = &(&p.transpose() * &s_matrix(n, d, &Rational::one())) * &p;
    if lhs != q_n(n) {
        return Err(VerifyError::IdentityFailed {
            scenario: format!("build-p n={n}"),
            check: "tP·S·P = Q_n".into(),
            residual: Some(&lhs - &q_n(n)),
        });
    }
    Ok(p)
}

/// A tower containing √−1 and √((−1)^n d).
pub fn tower_for_p(n: usize, d: &Rational) -> Result<Arc<Tower>, VerifyError> {
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    Ok(Tower::containing(&[Rational::from_integer((-1).into()), d * Rational::from_integer(sign.into())])?)
}

pub fn verify_build_p(n: usize, d: &Rational) -> Result<Report, VerifyError> {
    let tower = tower_for_p(n, d)?;
    let mut report = Report::new(format!("build-p:n={n},d={d}"));
    let p = match build_p(&tower, n, d) {
        Ok(p) => p,
        Err(VerifyError::IdentityFailed { check, residual, .. }) => {
            report.push(check, false, residual);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let lhs = &(&p.transpose() * &s_matrix(n, d, &Rational::one())) * &p;
    report.check_matrix("tP·S·P = Q_n", &lhs, &q_n(n));
    Ok(report)
}

/// e_{r,c}(x) in one-based indices.
fn unit(size: usize, r: usize, c: usize, x: TowerScalar) -> TowerMatrix {
    let mut m = Matrix::zeros(size, size);
    m.set(r - 1, c - 1, x);
    m
}

/// The simple root vectors of the splitting of Sp(V_c^#), labelled.
pub fn build_sp_splitting(m: usize) -> Vec<(String, TowerMatrix)> {
    let size = 2 * m;
    let mut out: Vec<(String, TowerMatrix)> = (1..m)
        .map(|k| {
            let x = &unit(size, k, k + 1, ts(1)) + &unit(size, 2 * m - k, 2 * m + 1 - k, ts(-1));
            (format!("a{k}-a{}", k + 1), x)
        })
        .collect();
    out.push((format!("2a{m}"), unit(size, m, m + 1, ts(1))));
    out
}

/// The simple root vectors of the splitting of SO(W_c^#); needs √d in the tower.
pub fn build_so_splitting(tower: &Arc<Tower>, n: usize, d: &Rational) -> Result<Vec<(String, TowerMatrix)>, VerifyError> {
    if n < 2 {
        return Err(VerifyError::InvalidParameter("the orthogonal splitting needs n ≥ 2".into()));
    }
    let size = 2 * n;
    let sd = TowerScalar::sqrt(tower, d)?;
    let sdi = sd.inv().expect("d ≠ 0");
    let half = tq(&Rational::new(1.into(), 2.into()));
    let mut out: Vec<(String, TowerMatrix)> = (1..n - 1)
        .map(|k| {
            let x = &unit(size, k, k + 1, ts(1)) + &unit(size, 2 * n - k, 2 * n + 1 - k, ts(-1));
            (format!("b{k}-b{}", k + 1), x)
        })
        .collect();
    for (label, s) in [(format!("b{}-b{n}", n - 1), 1i64), (format!("b{}+b{n}", n - 1), -1)] {
        let x = [
            unit(size, n - 1, n, half.clone()),
            unit(size, n - 1, n + 1, ts(s) * half.clone() * sdi.clone()),
            unit(size, n, n + 2, ts(-1)),
            unit(size, n + 1, n + 2, ts(s) * sd.clone()),
        ]
        .iter()
        .fold(Matrix::zeros(size, size), |acc, u| &acc + u);
        out.push((label, x));
    }
    Ok(out)
}

/// A point of T_+^#: diag(t_1, …, t_m, t_m⁻¹, …, t_1⁻¹).
pub fn sp_torus(t: &[TowerScalar]) -> TowerMatrix {
    let inv: Vec<TowerScalar> = t.iter().rev().map(|x| x.inv().expect("torus coordinates are units")).collect();
    Matrix::diag(&[t.to_vec(), inv].concat())
}

/// A point of T_−^#: diag(a, [[x, y], [dy, x]], J a⁻¹ J).
pub fn so_torus(a: &[TowerScalar], x: &TowerScalar, y: &TowerScalar, d: &Rational) -> TowerMatrix {
    let n = a.len() + 1;
    let mut t = Matrix::zeros(2 * n, 2 * n);
    for (k, ak) in a.iter().enumerate() {
        t.set(k, k, ak.clone());
        t.set(2 * n - 1 - k, 2 * n - 1 - k, ak.inv().expect("torus coordinates are units"));
    }
    t.set(n - 1, n - 1, x.clone());
    t.set(n - 1, n, y.clone());
    t.set(n, n - 1, tq(d) * y.clone());
    t.set(n, n, x.clone());
    t
}

/// Checks that each X_α is an eigenvector of Ad(t) with eigenvalue α(t) and
/// lies in the Lie algebra of the form.
pub fn verify_splittings(m: usize, n: usize, d: &Rational) -> Result<Report, VerifyError> {
    let tower = Tower::containing(std::slice::from_ref(d))?;
    let mut report = Report::new(format!("splittings:m={m},n={n},d={d}"));
    let tvals: Vec<TowerScalar> = (0..m).map(|k| tq(&Rational::new((k as i64 + 2).into(), (2 * k as i64 + 3).into()))).collect();
    let t = sp_torus(&tvals);
    let ti = inverse(&t, "torus point")?;
    let form = v_form(m, &Rational::from_integer(1.into()));
    for (k, (label, x)) in build_sp_splitting(m).into_iter().enumerate() {
        let eig = if k + 1 < m { tvals[k].clone() * tvals[k + 1].inv().unwrap() } else { tvals[m - 1].clone() * tvals[m - 1].clone() };
        report.check_matrix(format!("root space {label}"), &(&(&t * &x) * &ti), &x.scale(&eig));
        report.check_matrix(format!("sp algebra {label}"), &(&(&x.transpose() * &form) + &(&form * &x)), &Matrix::zeros(2 * m, 2 * m));
    }
    if n >= 2 {
        let a: Vec<TowerScalar> = (0..n - 1).map(|k| tq(&Rational::new((k as i64 + 3).into(), (k as i64 + 1).into()))).collect();
        // x² − d y² = 1 via the rational parametrisation at s = 1/3.
        let s = Rational::new(1.into(), 3.into());
        let den = Rational::one() - d * &s * &s;
        let (x, y) = ((Rational::one() + d * &s * &s) / &den, Rational::from_integer(2.into()) * &s / &den);
        let beta_n = tq(&x) + tq(&y) * TowerScalar::sqrt(&tower, d)?;
        let t = so_torus(&a, &tq(&x), &tq(&y), d);
        let ti = inverse(&t, "torus point")?;
        let s_form = s_matrix(n, d, &Rational::one());
        for (k, (label, xm)) in build_so_splitting(&tower, n, d)?.into_iter().enumerate() {
            let eig = if k + 2 < n {
                a[k].clone() * a[k + 1].inv().unwrap()
            } else if k + 2 == n {
                a[n - 2].clone() * beta_n.inv().unwrap()
            } else {
                a[n - 2].clone() * beta_n.clone()
            };
            report.check_matrix(format!("root space {label}"), &(&(&t * &xm) * &ti), &xm.scale(&eig));
            report.check_matrix(
                format!("so algebra {label}"),
                &(&(&xm * &s_form) + &(&s_form * &xm.transpose())),
                &Matrix::zeros(2 * n, 2 * n),
            );
        }
    }
    Ok(report)
}

/// ς_+^#(z) for z_k = x_k + √−1·y_k given as (x_k, y_k).
pub fn sp_anisotropic(z: &[(TowerScalar, TowerScalar)]) -> TowerMatrix {
    let m = z.len();
    let mut out = Matrix::zeros(2 * m, 2 * m);
    for (k, (x, y)) in z.iter().enumerate() {
        let kk = 2 * m - 1 - k;
        out.set(k, k, x.clone());
        out.set(kk, kk, x.clone());
        out.set(k, kk, y.clone());
        out.set(kk, k, -y.clone());
    }
    out
}

/// ς_∼^#(z): block diagonal [[x_k, y_k], [−y_k, x_k]].
pub fn so_anisotropic(z: &[(TowerScalar, TowerScalar)]) -> TowerMatrix {
    let blocks: Vec<TowerMatrix> =
        z.iter().map(|(x, y)| Matrix::from_rows(vec![vec![x.clone(), y.clone()], vec![-y.clone(), x.clone()]])).collect();
    Matrix::block_diag(&blocks)
}

/// R·A·R⁻¹, which equals ᵗA*⁻¹ whenever ᵗA*·R·A = R.
pub fn rep_matrix_op(r: &TowerMatrix, a: &TowerMatrix, star: &GaloisAction) -> Result<TowerMatrix, VerifyError> {
    let a_star_t = star.apply_matrix(a).transpose();
    let lhs = &(&a_star_t * r) * a;
    if lhs != *r {
        return Err(VerifyError::NotIsometry(&lhs - r));
    }
    let out = &(r * a) * &inverse(r, "form")?;
    let expected = inverse(&a_star_t, "tA*")?;
    if out != expected {
        return Err(VerifyError::IdentityFailed {
            scenario: "rep-matrix-op".into(),
            check: "R·A·R⁻¹ = tA*⁻¹".into(),
            residual: Some(&out - &expected),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn p_postcondition() {
        for n in 1..=6 {
            for d in [1, 2, 3, -1] {
                let r = verify_build_p(n, &int(d)).unwrap();
                assert!(r.passed(), "n={n} d={d}: {r:?}");
            }
        }
    }

    #[test]
    fn p_example_n2_d2() {
        let tower = tower_for_p(2, &int(2)).unwrap();
        let p = build_p(&tower, 2, &int(2)).unwrap();
        let lhs = &(&p.transpose() * &s_matrix(2, &int(2), &int(1))) * &p;
        assert_eq!(lhs, Matrix::diag(&[ts(2), ts(2), ts(-2), ts(-2)]));
    }

    #[test]
    fn splittings_are_root_vectors() {
        for (m, n, d) in [(1, 2, 1), (2, 2, 2), (3, 3, -1), (2, 4, 3)] {
            let r = verify_splittings(m, n, &int(d)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let x = &build_sp_splitting(2)[0].1;
        assert_eq!(x.get(0, 1), &ts(1));
        assert_eq!(x.get(2, 3), &ts(-1));
    }

    #[test]
    fn op_identity_and_torus() {
        let tower = Tower::new(vec![int(-1)]).unwrap();
        let i = TowerScalar::radical(&tower, 0);
        let star = GaloisAction::flipping(&tower, &[0]);
        let r: TowerMatrix = Matrix::j(2);
        let id = rep_matrix_op(&r, &Matrix::identity(2), &star).unwrap();
        assert!(id.is_identity());
        // diag(t, 1/σ(t)) preserves the hermitian form J_2.
        let t = ts(2) + i.clone();
        let a = Matrix::diag(&[t.clone(), star.apply(&t).inv().unwrap()]);
        assert!(rep_matrix_op(&r, &a, &star).is_ok());
        // A unipotent element I + X with X in the Lie algebra.
        let mut u: TowerMatrix = Matrix::identity(2);
        u.set(0, 1, i.clone());
        assert!(rep_matrix_op(&r, &u, &star).is_ok());
        // The Weyl element J_2 with a sign is an isometry of J_2.
        assert!(rep_matrix_op(&r, &Matrix::j(2), &star).is_ok());
        let bad = Matrix::diag(&[t.clone(), t]);
        assert!(matches!(rep_matrix_op(&r, &bad, &star), Err(VerifyError::NotIsometry(_))));
    }
}
