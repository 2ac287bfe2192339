//! The rank-one lift through a quaternion algebra D = (a, b) split by
//! F(√b): the identification γ of M₂ with D ⊗ F(√b), the embeddings B±
//! and the cocycle z.

use super::forms::{inverse, tq, ts};
use super::tower::{GaloisAction, Tower, TowerMatrix, TowerScalar};
use super::{Report, VerifyError};
use crate::matrix::Matrix;
use crate::quaternion::Quaternion;
use crate::scalar::{is_rational_square, Field};
use crate::Rational;
use num_traits::{One, Zero};

type Q = Quaternion<TowerScalar>;

/// Which matrix units to use for γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitConvention {
    /// e₁₁ = (b + √b·β)/2b and so on.
    Split,
    /// The units of the e_ℍ = 1 key diagram with i, j replaced by α, β.
    KeyDiagram,
}

struct Setup {
    sigma: GaloisAction,
    a: Rational,
    /// √−a.
    s: TowerScalar,
    alpha: Q,
    e11: Q,
    e12: Q,
    e21: Q,
    e22: Q,
}

fn setup(a: &Rational, b: &Rational, conv: UnitConvention) -> Result<Setup, VerifyError> {
    if a.is_zero() || b.is_zero() {
        return Err(VerifyError::InvalidParameter("a and b must be nonzero".into()));
    }
    if is_rational_square(b) {
        return Err(VerifyError::InvalidParameter(format!("b = {b} must not be a square")));
    }
    if is_rational_square(&-(a * b)) {
        return Err(VerifyError::InvalidParameter(format!("−ab = {} must not be a square", -(a * b))));
    }
    let tower = Tower::containing(&[b.clone(), -a.clone()])?;
    let sb = TowerScalar::sqrt(&tower, b)?;
    let s = TowerScalar::sqrt(&tower, &-a.clone())?;
    // b is the first radical; −a is rational or the second.
    let sigma = GaloisAction::flipping(&tower, &[0]);
    let q = |c: [TowerScalar; 4]| Quaternion::with_params(c, tq(a), tq(b));
    let z = TowerScalar::zero;
    let alpha = q([z(), ts(1), z(), z()]);
    let (e11, e12, e21, e22) = match conv {
        UnitConvention::Split => {
            let two_b = (ts(2) * tq(b)).inv().expect("b ≠ 0");
            let two_ab = (ts(2) * tq(a) * tq(b)).inv().expect("ab ≠ 0");
            (
                q([tq(b) * two_b.clone(), z(), sb.clone() * two_b.clone(), z()]),
                q([z(), tq(b) * two_b.clone(), z(), -sb.clone() * two_b.clone()]),
                q([z(), tq(b) * two_ab.clone(), z(), sb.clone() * two_ab]),
                q([tq(b) * two_b.clone(), z(), -sb * two_b, z()]),
            )
        }
        UnitConvention::KeyDiagram => {
            let h = tq(&Rational::new(1.into(), 2.into()));
            (
                q([h.clone(), z(), h.clone(), z()]),
                q([z(), h.clone(), z(), -h.clone()]),
                q([z(), -h.clone(), z(), -h.clone()]),
                q([h.clone(), z(), -h, z()]),
            )
        }
    };
    Ok(Setup { sigma, a: a.clone(), s, alpha, e11, e12, e21, e22 })
}

impl Setup {
    fn gal(&self, x: &Q) -> Q {
        x.map_coeffs(|c| self.sigma.apply(c))
    }

    fn scalar(&self, x: TowerScalar) -> Q {
        self.alpha.with_coeffs([x, TowerScalar::zero(), TowerScalar::zero(), TowerScalar::zero()])
    }

    fn b_plus(&self, x: &[TowerScalar]) -> Q {
        &self.e11.scale(&x[0]) + &self.e21.scale(&x[1])
    }

    fn b_minus(&self, y: &[TowerScalar]) -> Q {
        &self.e11.scale(&y[0]) + &self.e12.scale(&y[1])
    }

    fn z(&self) -> TowerMatrix {
        let si = self.s.inv().expect("√−a is a unit");
        Matrix::from_rows(vec![vec![TowerScalar::zero(), -si], vec![self.s.clone(), TowerScalar::zero()]])
    }
}

/// The cocycle matrix z = [[0, −√−a⁻¹], [√−a, 0]].
pub fn z_matrix(a: &Rational, b: &Rational) -> Result<TowerMatrix, VerifyError> {
    Ok(setup(a, b, UnitConvention::Split)?.z())
}

pub fn verify_lift_na(a: &Rational, b: &Rational) -> Result<Report, VerifyError> {
    lift_na_with(a, b, UnitConvention::Split)
}

pub(crate) fn lift_na_with(a: &Rational, b: &Rational, conv: UnitConvention) -> Result<Report, VerifyError> {
    let st = setup(a, b, conv)?;
    let mut report = Report::new(format!("lift-na:a={a},b={b}"));
    let one = st.scalar(TowerScalar::one());
    let zero = one.zero_like();
    let eq = |x: &Q, y: &Q| (x - y).is_zero();
    let (e11, e12, e21, e22) = (&st.e11, &st.e12, &st.e21, &st.e22);
    report.check("γ: e11² = e11, e22² = e22", eq(&(e11 * e11), e11) && eq(&(e22 * e22), e22));
    report.check("γ: e12·e21 = e11, e21·e12 = e22", eq(&(e12 * e21), e11) && eq(&(e21 * e12), e22));
    report.check("γ: e11·e12 = e12 = e12·e22", eq(&(e11 * e12), e12) && eq(&(e12 * e22), e12));
    report.check("γ: e11·e22 = 0, e11 + e22 = 1", eq(&(e11 * e22), &zero) && eq(&(e11 + e22), &one));

    let z = st.z();
    let zi = inverse(&z, "z")?;
    let (x, y) = (z.get(0, 0).clone(), z.get(0, 1).clone());
    report.check("z = [[x, y], [a·y, x]]", *z.get(1, 1) == x && *z.get(1, 0) == tq(&st.a) * y);
    report.check("det z = 1", z.det().is_one());
    let zz = &z * &st.sigma.apply_matrix(&z);
    report.check("z·σ(z) = ±1", zz == Matrix::identity(2) || zz == -&Matrix::identity(2));

    let si = st.s.inv().expect("√−a is a unit");
    let right = st.alpha.scale(&si);
    let left = -&st.alpha.scale(&si);
    let basis = |k: usize| -> Vec<TowerScalar> { (0..2).map(|j| if j == k { ts(1) } else { ts(0) }).collect() };
    let mut plus = true;
    let mut minus = true;
    for k in 0..2 {
        let e = basis(k);
        let zx: Vec<TowerScalar> = (0..2).map(|r| z.get(r, k).clone()).collect();
        plus &= eq(&st.gal(&st.b_plus(&e)), &(&st.b_plus(&zx) * &right));
        let yz = zi.row(k);
        minus &= eq(&st.gal(&st.b_minus(&e)), &(&left * &st.b_minus(&yz)));
    }
    report.check("σ(B+(x)) = B+(z·x)·α·√−a⁻¹", plus);
    report.check("σ(B−(y)) = −α·√−a⁻¹·B−(y·z⁻¹)", minus);

    // B+ and B− carry the forms of V^# and W^#. On the W side the pairing is
    // −Tr(⟨y, y'⟩·e21) with ⟨y, y'⟩ = y·α₀·y'* and α₀ = −2α.
    let bp = [st.b_plus(&basis(0)), st.b_plus(&basis(1))];
    let bm = [st.b_minus(&basis(0)), st.b_minus(&basis(1))];
    let alpha0 = st.alpha.scale(&ts(-2));
    let gv = Matrix::from_fn(2, 2, |r, c| (e12 * &(&bp[r].star() * &bp[c])).trace());
    let gw = Matrix::from_fn(2, 2, |r, c| -(&(&(&bm[r] * &alpha0) * &bm[c].star()) * e21).trace());
    let vs: TowerMatrix = Matrix::from_rows(vec![vec![ts(0), ts(1)], vec![ts(-1), ts(0)]]);
    let ws: TowerMatrix = Matrix::diag(&[ts(2), ts(-2) * tq(&st.a)]);
    report.check_matrix("B+ is an isometry onto V#", &gv, &vs);
    report.check_matrix("B− is an isometry onto W#", &gw, &ws);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn examples_pass() {
        for (a, b) in [(2, 5), (-1, 3), (3, -1), (5, 2), (-3, 7)] {
            let r = verify_lift_na(&int(a), &int(b)).unwrap();
            assert!(r.passed(), "{r:#?}");
        }
    }

    #[test]
    fn z_matrix_values() {
        let z = z_matrix(&int(2), &int(5)).unwrap();
        let s = z.get(1, 0).clone();
        assert_eq!(s.clone() * s.clone(), ts(-2));
        assert_eq!(z.get(0, 1).clone() * s, ts(-1));
        assert!(z.get(0, 0).is_zero() && z.get(1, 1).is_zero());
    }

    #[test]
    fn wrong_units_fail() {
        let r = lift_na_with(&int(2), &int(5), UnitConvention::KeyDiagram).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(matches!(verify_lift_na(&int(2), &int(4)), Err(VerifyError::InvalidParameter(_))));
        assert!(matches!(verify_lift_na(&int(-2), &int(2)), Err(VerifyError::InvalidParameter(_))));
        assert!(matches!(verify_lift_na(&int(0), &int(3)), Err(VerifyError::InvalidParameter(_))));
    }
}
