//! Closed-form curves on faithful states and the unitary action.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use super::spectral::{from_spectrum, hermitian_eigen, hermitian_function, hermitize, CMatrix};
use super::state::{DensityState, TangentMatrix};
use crate::error::{GeometryError, Result};

const UNITARY_TOL: f64 = 1e-10;

fn check_dims(rho: &DensityState, v: &TangentMatrix) -> Result<()> {
    if v.matrix().nrows() != rho.dim() {
        return Err(GeometryError::DimensionMismatch { expected: rho.dim(), got: v.matrix().nrows() });
    }
    Ok(())
}

/// `ρ + t v`. Fails with `LeftManifold(t)` once positivity is lost.
pub fn mixture_geodesic(rho: &DensityState, v: &TangentMatrix, t: f64) -> Result<DensityState> {
    check_dims(rho, v)?;
    let m = rho.matrix() + v.matrix() * Complex64::new(t, 0.0);
    DensityState::new(m).map_err(|_| GeometryError::LeftManifold(t))
}

/// `exp(ln ρ + t v) / Tr(…)`. Complete: defined for every real `t` as long as the result stays
/// above the numerical eigenvalue floor.
pub fn bkm_geodesic(rho: &DensityState, v: &TangentMatrix, t: f64) -> Result<DensityState> {
    check_dims(rho, v)?;
    let h = rho.ln() + v.matrix() * Complex64::new(t, 0.0);
    let (values, vectors) = hermitian_eigen(&h);
    let top = values.max();
    DensityState::normalized(from_spectrum(&values, &vectors, |l| (l - top).exp()))
}

/// `(e^{tv} ρ^{√κ} e^{tv})^{1/√κ} / Tr(…)` for `κ ∈ (0, 1]`.
///
/// This curve is a geodesic of the Weitzenböck connection built from
/// `MonotoneFunction::deformed(√κ)`; see `MonotoneFunction::deformed_geodesic_partner`.
pub fn deformed_geodesic(rho: &DensityState, v: &TangentMatrix, t: f64, kappa: f64) -> Result<DensityState> {
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(GeometryError::Domain(format!("kappa must lie in (0, 1], got {kappa}")));
    }
    check_dims(rho, v)?;
    let s = kappa.sqrt();
    let e = hermitian_function(&(v.matrix() * Complex64::new(t, 0.0)), f64::exp);
    let m = hermitize(&(&e * rho.power(s) * &e));
    let (values, vectors) = hermitian_eigen(&m);
    let top = values.max();
    DensityState::normalized(from_spectrum(&values, &vectors, |l| (l / top).max(0.0).powf(1.0 / s)))
}

/// `max |U†U − I|`.
fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - CMatrix::identity(n, n)).iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `ρ ↦ U ρ U†`.
pub fn unitary_action(u: &CMatrix, rho: &DensityState) -> Result<DensityState> {
    if !u.is_square() || u.nrows() != rho.dim() {
        return Err(GeometryError::DimensionMismatch { expected: rho.dim(), got: u.nrows() });
    }
    let defect = unitarity_defect(u);
    if !(defect <= UNITARY_TOL) {
        return Err(GeometryError::NotUnitary(defect));
    }
    DensityState::new(hermitize(&(u * rho.matrix() * u.adjoint())))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn random_unitary(rng: &mut dyn RngCore, dim: usize) -> CMatrix {
    let a = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))
    });
    let qr = a.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DVector::from_fn(dim, |k, _| {
        let d = r[(k, k)];
        if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) }
    });
    q * CMatrix::from_diagonal(&phases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::HermitianBasis;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag_tangent(d: &[f64]) -> TangentMatrix {
        let v = DVector::from_iterator(d.len(), d.iter().map(|x| Complex64::new(*x, 0.0)));
        TangentMatrix::new(CMatrix::from_diagonal(&v)).unwrap()
    }

    fn dist(a: &DensityState, b: &DensityState) -> f64 {
        (a.matrix() - b.matrix()).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    #[test]
    fn bkm_commuting_case() {
        let rho = DensityState::maximally_mixed(2);
        let l3 = 3f64.ln();
        let v = diag_tangent(&[l3 / 2.0, -l3 / 2.0]);
        let out = bkm_geodesic(&rho, &v, 1.0).unwrap();
        assert_abs_diff_eq!(out.spectrum()[1], 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(out.spectrum()[0], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(out.matrix()[(0, 0)].re, 0.75, epsilon = 1e-14);
    }

    #[test]
    fn start_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let basis = HermitianBasis::gell_mann(3).unwrap();
        let rho = DensityState::random(&mut rng, 3);
        let v = TangentMatrix::random(&mut rng, &basis, 0.4);
        let zero = TangentMatrix::from_coords(&basis, &DVector::zeros(8)).unwrap();
        assert!(dist(&bkm_geodesic(&rho, &v, 0.0).unwrap(), &rho) < 1e-12);
        assert!(dist(&bkm_geodesic(&rho, &zero, 2.5).unwrap(), &rho) < 1e-12);
        for kappa in [1.0, 0.25, 0.6] {
            assert!(dist(&deformed_geodesic(&rho, &v, 0.0, kappa).unwrap(), &rho) < 1e-12);
        }
        assert!(dist(&mixture_geodesic(&rho, &v, 0.0).unwrap(), &rho) < 1e-15);
    }

    #[test]
    fn deformed_bures_commuting_case() {
        let rho = DensityState::maximally_mixed(2);
        let (a, t) = (0.3, 1.7);
        let out = deformed_geodesic(&rho, &diag_tangent(&[a, -a]), t, 1.0).unwrap();
        let (up, down) = ((2.0 * t * a).exp(), (-2.0 * t * a).exp());
        assert_abs_diff_eq!(out.matrix()[(0, 0)].re, up / (up + down), epsilon = 1e-14);
        assert_abs_diff_eq!(out.matrix()[(1, 1)].re, down / (up + down), epsilon = 1e-14);
    }

    #[test]
    fn deformed_rejects_kappa() {
        let rho = DensityState::maximally_mixed(2);
        let v = diag_tangent(&[0.1, -0.1]);
        assert!(deformed_geodesic(&rho, &v, 1.0, 0.0).is_err());
        assert!(deformed_geodesic(&rho, &v, 1.0, 1.5).is_err());
    }

    #[test]
    fn mixture_leaves_manifold() {
        let rho = DensityState::maximally_mixed(2);
        let v = diag_tangent(&[1.0, -1.0]);
        assert!(mixture_geodesic(&rho, &v, 0.4).is_ok());
        assert_eq!(mixture_geodesic(&rho, &v, 0.6).unwrap_err(), GeometryError::LeftManifold(0.6));
    }

    #[test]
    fn unitary_action_preserves_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2, 3, 4] {
            let rho = DensityState::random(&mut rng, dim);
            let u = random_unitary(&mut rng, dim);
            let out = unitary_action(&u, &rho).unwrap();
            assert!((out.spectrum() - rho.spectrum()).amax() < 1e-12);
            let id = CMatrix::identity(dim, dim);
            assert!(dist(&unitary_action(&id, &rho).unwrap(), &rho) < 1e-15);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let rho = DensityState::maximally_mixed(2);
        let m = CMatrix::identity(2, 2) * Complex64::new(1.01, 0.0);
        assert!(matches!(unitary_action(&m, &rho), Err(GeometryError::NotUnitary(_))));
    }
}
