//! The key diagram: the embeddings A± of the quaternionic spaces into the
//! split symplectic and orthogonal spaces, their twisted Galois
//! equivariance, and the compatibility of the two cocycles under 𝔭_ξ.

use super::forms::{displayed_p, inverse, q_n, s_matrix, so_anisotropic, sp_anisotropic, ts, v_form};
use super::gens::{eps_sign, p_xi, rho1, u_vector, ComplexTower};
use super::tower::{TowerMatrix, TowerScalar};
use super::{Report, VerifyError};
use crate::hctheta::{xi_embedding, XiVariant};
use crate::matrix::Matrix;
use crate::quaternion::Quaternion;
use crate::rootcomb::{CaseSpec, EpsPsi, QuatSign};
use crate::Rational;
use num_traits::{One, Zero};

type Q = Quaternion<TowerScalar>;
type QVec = Vec<Q>;

struct Units {
    e11: Q,
    e12: Q,
    e21: Q,
    i: Q,
    j: Q,
}

fn units(ct: &ComplexTower, e_h: QuatSign) -> Units {
    let e: i8 = if e_h == QuatSign::Split { 1 } else { -1 };
    let h = TowerScalar::rational(Rational::new(1.into(), 2.into()));
    let hi = h.clone() * ct.i.clone();
    let z = TowerScalar::zero;
    let q = |c: [TowerScalar; 4]| Quaternion::new(c, e);
    match e_h {
        QuatSign::Split => Units {
            e11: q([h.clone(), z(), h.clone(), z()]),
            e12: q([z(), h.clone(), z(), -h.clone()]),
            e21: q([z(), -h.clone(), z(), -h]),
            i: Quaternion::unit(1, e),
            j: Quaternion::unit(2, e),
        },
        QuatSign::Hamilton => Units {
            e11: q([h.clone(), z(), -hi.clone(), z()]),
            e12: q([z(), h.clone(), z(), hi.clone()]),
            e21: q([z(), -h, z(), hi]),
            i: Quaternion::unit(1, e),
            j: Quaternion::unit(2, e),
        },
    }
}

fn zero_vec(len: usize, u: &Units) -> QVec {
    vec![u.i.zero_like(); len]
}

fn combine(basis: &[QVec], coeffs: &[TowerScalar], len: usize, u: &Units) -> QVec {
    let mut v = zero_vec(len, u);
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in v.iter_mut().zip(b) {
            *x = &*x + &y.scale(c);
        }
    }
    v
}

fn gal(ct: &ComplexTower, v: &QVec) -> QVec {
    v.iter().map(|x| x.map_coeffs(|c| ct.sigma.apply(c))).collect()
}

struct Diagram {
    ct: ComplexTower,
    u: Units,
    m: usize,
    n: usize,
    a_plus: Vec<QVec>,
    a_tilde: Vec<QVec>,
    /// Signs of the hermitian form on the V side (e_ℍ = −1) or of the
    /// skew-hermitian form on the W side (e_ℍ = 1).
    eps: Vec<i64>,
    p: TowerMatrix,
    p_inv: TowerMatrix,
}

impl Diagram {
    fn new(spec: &CaseSpec) -> Result<Self, VerifyError> {
        let (m, n, p) = (spec.m, spec.n, spec.p);
        if m == 0 {
            return Err(VerifyError::InvalidParameter("the key diagram needs m ≥ 1".into()));
        }
        let ct = ComplexTower::new();
        let u = units(&ct, spec.e_h);
        let eps: Vec<i64> = (0..m.max(n)).map(|k| if k < p { 1 } else { -1 }).collect();
        let mut a_plus = vec![Vec::new(); 2 * m];
        let mut a_tilde = vec![Vec::new(); 2 * n];
        let single = |len: usize, k: usize, x: Q| {
            let mut v = zero_vec(len, &u);
            v[k] = x;
            v
        };
        match spec.e_h {
            QuatSign::Hamilton => {
                let t = n.div_ceil(2);
                for k in 0..m {
                    let (lo, hi) = if k < p { (&u.e11, &u.e21) } else { (&u.e21, &u.e11) };
                    a_plus[k] = single(m, k, lo.clone());
                    a_plus[2 * m - 1 - k] = single(m, k, hi.clone());
                }
                for k in 0..n {
                    let (x, y) = if k < t { (&u.e12 * &u.j, &u.e11 * &u.j) } else { (u.e12.clone(), u.e11.clone()) };
                    a_tilde[2 * k] = single(n, k, x);
                    a_tilde[2 * k + 1] = single(n, k, y);
                }
            }
            QuatSign::Split => {
                for k in 0..m {
                    a_plus[k] = single(m, k, u.e11.clone());
                    a_plus[2 * m - 1 - k] = single(m, k, u.e21.clone());
                }
                let iset = i_set(n, p);
                for k in 0..n {
                    let f = if iset.contains(&(k + 1)) { ct.i.clone() } else { TowerScalar::one() };
                    a_tilde[2 * k] = single(n, k, u.e11.scale(&f));
                    a_tilde[2 * k + 1] = single(n, k, u.e12.scale(&f));
                }
            }
        }
        let p_mat = displayed_p(n)?;
        let p_inv = inverse(&p_mat, "P")?;
        Ok(Diagram { ct, u, m, n, a_plus, a_tilde, eps, p: p_mat, p_inv })
    }

    fn hamilton(&self) -> bool {
        self.u.i.params.1 == -TowerScalar::one()
    }

    fn a_plus_of(&self, x: &[TowerScalar]) -> QVec {
        combine(&self.a_plus, x, self.m, &self.u)
    }

    /// A₋(y) for a row vector y: Σ_a (y·P⁻¹)_a·Ã_a.
    fn a_minus_of(&self, y: &[TowerScalar]) -> QVec {
        let row = Matrix::from_rows(vec![y.to_vec()]);
        let r = &row * &self.p_inv;
        combine(&self.a_tilde, &r.row(0), self.n, &self.u)
    }

    fn form_v(&self, x: &QVec, y: &QVec) -> Q {
        let hamilton = self.hamilton();
        x.iter().zip(y).enumerate().fold(self.u.i.zero_like(), |acc, (k, (a, b))| {
            let s = if hamilton { self.eps[k] } else { 1 };
            &acc + &(&a.star() * b).scale(&ts(s))
        })
    }

    fn form_w(&self, x: &QVec, y: &QVec) -> Q {
        let hamilton = self.hamilton();
        x.iter().zip(y).enumerate().fold(self.u.i.zero_like(), |acc, (k, (a, b))| {
            let s = if hamilton { 1 } else { self.eps[k] };
            &acc + &(&(a * &self.u.i) * &b.star()).scale(&ts(s))
        })
    }

    fn basis(len: usize, k: usize) -> Vec<TowerScalar> {
        (0..len).map(|j| if j == k { TowerScalar::one() } else { TowerScalar::zero() }).collect()
    }

    fn gram_v(&self) -> TowerMatrix {
        Matrix::from_fn(2 * self.m, 2 * self.m, |a, b| (&self.u.e12 * &self.form_v(&self.a_plus[a], &self.a_plus[b])).trace())
    }

    fn gram_w(&self) -> TowerMatrix {
        Matrix::from_fn(2 * self.n, 2 * self.n, |a, b| {
            ts(-2) * (&self.form_w(&self.a_tilde[a], &self.a_tilde[b]) * &self.u.e21).trace()
        })
    }
}

/// I = {k ∈ 1..n : (2n + 3 − 4k)(2p + 1 − 2k) > 0}.
pub fn i_set(n: usize, p: usize) -> Vec<usize> {
    let (n, p) = (n as i64, p as i64);
    (1..=n).filter(|k| (2 * n + 3 - 4 * k) * (2 * p + 1 - 2 * k) > 0).map(|k| k as usize).collect()
}

fn col(m: &TowerMatrix, c: usize) -> Vec<TowerScalar> {
    (0..m.rows()).map(|r| m.get(r, c).clone()).collect()
}

fn vec_eq(a: &QVec, b: &QVec) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).is_zero())
}

fn pm_one(v: &[i64]) -> Vec<(TowerScalar, TowerScalar)> {
    v.iter().map(|s| (ts(*s), TowerScalar::zero())).collect()
}

/// Runs the key diagram checks (a) isometry, (b) twisted equivariance,
/// (c) the 𝔭_ξ identity, (d) the Ω diagram.
pub fn verify_key_diagram(spec: &CaseSpec) -> Result<Report, VerifyError> {
    key_diagram_with(spec, false)
}

pub(crate) fn key_diagram_with(spec: &CaseSpec, flip_eps_only: bool) -> Result<Report, VerifyError> {
    if spec.p + spec.q > 4 {
        return Err(VerifyError::InvalidParameter("the key diagram is checked for p + q ≤ 4".into()));
    }
    let d = Diagram::new(spec)?;
    let (m, n) = (d.m, d.n);
    let ct = &d.ct;
    let branch = if d.hamilton() { "-1" } else { "1" };
    let mut report =
        Report::new(format!("key-diagram:e={branch},m={m},n={n},p={},q={},eps={}", spec.p, spec.q, spec.eps_psi));
    let vs = v_form(m, &Rational::one());
    let s_n = s_matrix(n, &Rational::from_integer(if n % 2 == 0 { 1.into() } else { (-1).into() }), &Rational::one());

    // (a)
    report.check_matrix("(a) Tr(e12·⟨A+, A+⟩) = V form", &d.gram_v(), &vs);
    report.check_matrix("(a) −2·Tr(⟨Ã, Ã⟩·e21) = Q_n", &d.gram_w(), &q_n(n));

    // (b)
    let s = eps_sign(spec.eps_psi);
    let (z0p, z0m) = if d.hamilton() {
        let plus: Vec<(TowerScalar, TowerScalar)> = (0..m).map(|k| (TowerScalar::zero(), ts(d.eps[k]))).collect();
        let minus: Vec<(TowerScalar, TowerScalar)> = (0..n).map(|_| (TowerScalar::zero(), ts(-1))).collect();
        (sp_anisotropic(&plus), &(&d.p_inv * &so_anisotropic(&minus)) * &d.p)
    } else {
        let iset = i_set(n, spec.p);
        let eta: Vec<i64> = (1..=n).map(|k| if iset.contains(&k) { -1 } else { 1 }).collect();
        (Matrix::identity(2 * m), &(&d.p_inv * &so_anisotropic(&pm_one(&eta))) * &d.p)
    };
    let z0m_inv = inverse(&z0m, "z0−")?;
    let i_inv = d.u.i.inverse().expect("i is a unit");
    let mut eq_plus = true;
    for a in 0..2 * m {
        let lhs = gal(ct, &d.a_plus_of(&Diagram::basis(2 * m, a)));
        let mut rhs = d.a_plus_of(&col(&z0p, a));
        if d.hamilton() {
            rhs = rhs.iter().map(|x| x * &i_inv).collect();
        }
        eq_plus &= vec_eq(&lhs, &rhs);
    }
    report.check("(b) σ∘A+ = A+∘z0+ twisted", eq_plus);
    let mut eq_minus = true;
    for b in 0..2 * n {
        let lhs = gal(ct, &d.a_minus_of(&Diagram::basis(2 * n, b)));
        let mut rhs = d.a_minus_of(&z0m_inv.row(b));
        if d.hamilton() {
            rhs = rhs.iter().map(|x| &d.u.i * x).collect();
        }
        eq_minus &= vec_eq(&lhs, &rhs);
    }
    report.check("(b) σ∘A− = A−∘z0− twisted", eq_minus);

    // (c)
    let u = u_vector(n, if flip_eps_only { spec.eps_psi.flip() } else { spec.eps_psi });
    let rho1_inv: Vec<usize> = {
        let mut inv = vec![0; n + 1];
        for k in 1..=n {
            inv[rho1(n, k)] = k;
        }
        inv
    };
    if d.hamilton() {
        // z− = z0−·ς−(u_j·ε_{ρ1⁻¹(j)}) and (u·ρ1)·ς−(−ε√−1) must agree.
        let signs: Vec<i64> = (1..=n).map(|j| u[j - 1] * d.eps[rho1_inv[j] - 1]).collect();
        let z_minus = &z0m * &(&(&d.p_inv * &so_anisotropic(&pm_one(&signs))) * &d.p);
        let w: Vec<(TowerScalar, TowerScalar)> =
            (1..=n).map(|j| (TowerScalar::zero(), ts(-d.eps[rho1_inv[j] - 1] * u[j - 1]))).collect();
        let twisted = &(&d.p_inv * &so_anisotropic(&w)) * &d.p;
        report.check_matrix("(c) z− = (u·ρ1)·ς−(−ε√−1)", &z_minus, &twisted);
        let image = p_xi(ct, &z_minus, m, n, spec.eps_psi)?;
        report.check_matrix("(c) 𝔭_ξ(z−)·z+ = 1", &(&image * &z0p), &Matrix::identity(2 * m));
        let variant = XiVariant::plain(spec.eps_psi);
        let emb = xi_embedding(spec, variant)?;
        let ok = emb.iter().all(|slot| match slot {
            Some((k, sign)) => *sign == s * d.eps[*k],
            None => true,
        });
        report.check("(c) ξ signs follow ε̄", ok);
    } else {
        let eps_bullet: Vec<i64> = (0..n).map(|k| -s * d.eps[k]).collect();
        let eta: Vec<i64> = (0..n).map(|k| eps_bullet[k] * u[k]).collect();
        let iset = i_set(n, spec.p);
        report.check("(c) η = ε•·u on I", (1..=n).all(|k| (eta[k - 1] == -1) == iset.contains(&k)));
        let variant_u = if flip_eps_only { spec.eps_psi.flip() } else { spec.eps_psi };
        let mut all_signs = true;
        let mut checked = false;
        for variant in XiVariant::candidates(spec) {
            let emb = xi_embedding(spec, variant)?;
            all_signs &= emb.iter().enumerate().all(|(j, slot)| match slot {
                Some((_, sign)) => *sign == eps_bullet[j],
                None => true,
            });
            if checked {
                continue;
            }
            checked = true;
            // ρ•(j) = source coordinate of slot j, the empty slot going to n.
            let emb_u = xi_embedding(&CaseSpec { eps_psi: variant_u, ..*spec }, XiVariant { u: variant_u, ..variant })
                .unwrap_or(emb.clone());
            let rho_b: Vec<usize> = emb_u.iter().map(|slot| slot.map(|(k, _)| k + 1).unwrap_or(n)).collect();
            let rho2 = |k: usize| rho_b[rho1_inv[k] - 1];
            let first: Vec<i64> = (1..=n).map(|k| d.eps[k - 1] * d.eps[rho2(k) - 1]).collect();
            let sig = |v: &[i64]| &(&d.p_inv * &so_anisotropic(&pm_one(v))) * &d.p;
            let z_minus = &sig(&first) * &sig(&eta);
            let mu: Vec<i64> = (1..=m)
                .map(|k| {
                    let r = rho1(n, k);
                    let true_u = u_vector(n, spec.eps_psi);
                    let true_bullet: Vec<i64> = (0..n).map(|j| -s * d.eps[j]).collect();
                    true_bullet[rho2(r) - 1] * true_u[r - 1]
                })
                .collect();
            let image = p_xi(ct, &z_minus, m, n, spec.eps_psi)?;
            report.check_matrix(format!("(c) 𝔭_ξ(z−) = ς+(μ) [{variant}]"), &image, &sp_anisotropic(&pm_one(&mu)));
        }
        report.check("(c) ξ signs follow ε•", all_signs);
    }

    // (d)
    let a_p: Vec<QVec> = (0..2 * m).map(|a| d.a_plus_of(&Diagram::basis(2 * m, a))).collect();
    let a_m: Vec<QVec> = (0..2 * n).map(|b| d.a_minus_of(&Diagram::basis(2 * n, b))).collect();
    let half = TowerScalar::rational(Rational::new(1.into(), 2.into()));
    let fv: Vec<Vec<Q>> = (0..2 * m).map(|a| (0..2 * m).map(|a2| d.form_v(&a_p[a], &a_p[a2])).collect()).collect();
    let fw: Vec<Vec<Q>> = (0..2 * n).map(|b| (0..2 * n).map(|b2| d.form_w(&a_m[b], &a_m[b2]).star()).collect()).collect();
    let mut omega = true;
    for a in 0..2 * m {
        for a2 in 0..2 * m {
            for b in 0..2 * n {
                for b2 in 0..2 * n {
                    let lhs = (&fv[a][a2] * &fw[b][b2]).trace();
                    let rhs = half.clone() * vs.get(a, a2).clone() * s_n.get(b, b2).clone();
                    omega &= lhs == rhs;
                }
            }
        }
    }
    report.check("(d) Tr(⟨A+,A+⟩·⟨A−,A−⟩*) = ½·V⊗S", omega);
    let mut omega_eq = true;
    for a in 0..2 * m {
        let twisted_plus = d.a_plus_of(&col(&z0p, a));
        for b in 0..2 * n {
            let twisted_minus = d.a_minus_of(&z0m_inv.row(b));
            for r in 0..m {
                for c in 0..n {
                    let x = (&a_p[a][r] * &a_m[b][c]).map_coeffs(|v| ct.sigma.apply(v));
                    let y = &twisted_plus[r] * &twisted_minus[c];
                    omega_eq &= (&x - &y).is_zero();
                }
            }
        }
    }
    report.check("(d) Ω is σ-equivariant", omega_eq);
    Ok(report)
}

/// The cases checked by default: both branches, p + q ≤ 4, both ε_ψ.
pub fn default_cases() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for eps in [EpsPsi::PlusI, EpsPsi::MinusI] {
        for m in 1..=4 {
            for n in [m, m + 1] {
                for p in 0..=m {
                    if let Ok(spec) = CaseSpec::new(QuatSign::Hamilton, m, n, p, m - p, eps) {
                        out.push(spec);
                    }
                }
            }
        }
        for n in 1..=4 {
            for m in [n - 1, n] {
                if m == 0 {
                    continue;
                }
                for p in 0..=n {
                    if let Ok(spec) = CaseSpec::new(QuatSign::Split, m, n, p, n - p, eps) {
                        if !XiVariant::candidates(&spec).is_empty() {
                            out.push(spec);
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_set_examples() {
        assert_eq!(i_set(2, 1), vec![1, 2]);
        assert_eq!(i_set(2, 0), vec![2]);
        assert_eq!(i_set(4, 2), vec![1, 2, 3, 4]);
        assert_eq!(i_set(4, 1), vec![1, 3, 4]);
        assert_eq!(i_set(3, 3), vec![1, 2]);
    }

    #[test]
    fn hamilton_small() {
        let spec = CaseSpec::new(QuatSign::Hamilton, 1, 1, 1, 0, EpsPsi::PlusI).unwrap();
        let r = verify_key_diagram(&spec).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(!key_diagram_with(&spec, true).unwrap().passed());
    }

    #[test]
    fn split_small() {
        let spec = CaseSpec::new(QuatSign::Split, 2, 2, 1, 1, EpsPsi::PlusI).unwrap();
        let r = verify_key_diagram(&spec).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(!key_diagram_with(&spec, true).unwrap().passed());
    }

    #[test]
    fn all_default_cases() {
        for spec in default_cases().into_iter().filter(|s| s.m + s.n <= 6) {
            let r = verify_key_diagram(&spec).unwrap();
            assert!(r.passed(), "{}: {:?}", r.scenario, r.first_failure());
        }
    }
}
