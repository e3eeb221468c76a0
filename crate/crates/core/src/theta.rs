//! Genus-2 theta constants at hardware double precision with certified
//! truncation, the coordinate embedding they induce, and numerical
//! certification of its identities: the defining equations, the modular
//! transformation law, the diagonal product splitting, the Rosenhain
//! parameters, and the exact fixed-point criterion for the exclusion loci.
//!
//! For a characteristic `m = (m', m'')` in `Z^4` the theta constant is
//!
//! ```text
//! Theta_m(tau) = sum_{p in Z^2} exp(i pi (p + m'/2) tau t(p + m'/2)
//!                                   + i pi (p + m'/2) t m'')
//! ```
//!
//! truncated to `|p|_inf <= N` with a Gaussian tail bound driven by the
//! smallest eigenvalue of `Im tau`. Odd characteristics give exactly 0. The
//! embedding sends `tau` to the ten fourth powers `x_m = Theta_m^4`.

use crate::chars::even_characteristics;
use crate::scalar::Scalar;
use crate::symplectic::{dot, epsilon, exclusion_involution, phi, Sp4, SymplecticMatrix};
use crate::variety::{ProjectivePoint, LINEAR_FORMS};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ThetaError {
    #[error("imaginary part must be positive definite (lambda_min = {0})")]
    NotPositiveDefinite(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("truncation failed to certify the requested tolerance")]
    TruncationFailure,
    #[error("cocycle factor det(C tau + D) is singular")]
    SingularCocycle,
    #[error("denominator too small: the point is degenerate (product locus)")]
    DegeneratePoint,
    #[error("point must be exact and on the model")]
    NotOnModel,
}

/// A point of the genus-2 upper half space: a symmetric 2x2 complex matrix
/// with positive-definite imaginary part. Symmetry is exact by construction
/// (only the upper triangle is stored).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiegelMatrix {
    t11: Complex64,
    t12: Complex64,
    t22: Complex64,
}

impl SiegelMatrix {
    pub fn new(t11: Complex64, t12: Complex64, t22: Complex64) -> Result<Self, ThetaError> {
        let m = Self { t11, t12, t22 };
        let lam = m.lambda_min_im();
        if !(lam > 0.0) {
            return Err(ThetaError::NotPositiveDefinite(lam));
        }
        Ok(m)
    }

    pub fn diagonal(t1: Complex64, t2: Complex64) -> Result<Self, ThetaError> {
        Self::new(t1, Complex64::new(0.0, 0.0), t2)
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        [[self.t11, self.t12], [self.t12, self.t22]]
    }

    /// Smallest eigenvalue of the imaginary part.
    pub fn lambda_min_im(&self) -> f64 {
        let a = self.t11.im;
        let b = self.t12.im;
        let c = self.t22.im;
        0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt()
    }

    /// Quadratic form `v tau t(v)` for a real row vector.
    fn quad(&self, v: [f64; 2]) -> Complex64 {
        self.t11 * v[0] * v[0] + 2.0 * self.t12 * v[0] * v[1] + self.t22 * v[1] * v[1]
    }
}

/// A truncated theta value with its certificate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThetaValue {
    pub re: f64,
    pub im: f64,
    pub truncation_radius: i64,
    pub tail_bound: f64,
}

impl ThetaValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn is_odd_characteristic(m: &[i64; 4]) -> bool {
    (m[0] * m[2] + m[1] * m[3]).rem_euclid(2) == 1
}

/// Truncation radius certified by a geometric comparison: the shell
/// `|p|_inf = k` holds `8k` lattice points, each contributing at most
/// `exp(-pi lambda (k - shift)^2)`, and the shell ratio from `N + 1` on is
/// at most `2 exp(-2 pi lambda (N + 1 - shift))`.
fn certified_radius(lambda: f64, shift: f64, tol: f64) -> Result<(i64, f64), ThetaError> {
    let term = |k: f64| 8.0 * k * (-PI * lambda * (k - shift) * (k - shift)).exp();
    let mut n = (shift.ceil() as i64) + 2;
    while n < 400 {
        let k = (n + 1) as f64;
        let ratio = 2.0 * (-2.0 * PI * lambda * (k - shift)).exp();
        if ratio < 0.5 {
            let tail = term(k) / (1.0 - ratio);
            if tail < tol {
                return Ok((n, tail));
            }
        }
        n += 1;
    }
    Err(ThetaError::TruncationFailure)
}

/// The theta constant for an integral characteristic representative.
/// Odd characteristics return exactly zero.
pub fn theta_constant(
    m: &[i64; 4],
    tau: &SiegelMatrix,
    tol: f64,
) -> Result<ThetaValue, ThetaError> {
    if !(tol > 0.0) {
        return Err(ThetaError::BadTolerance(tol));
    }
    if is_odd_characteristic(m) {
        return Ok(ThetaValue {
            re: 0.0,
            im: 0.0,
            truncation_radius: 0,
            tail_bound: 0.0,
        });
    }
    let lambda = tau.lambda_min_im();
    let shift = 0.5 * (m[0].abs().max(m[1].abs()) as f64);
    let (n, tail) = certified_radius(lambda, shift, tol)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for p1 in -n..=n {
        for p2 in -n..=n {
            let v = [p1 as f64 + m[0] as f64 / 2.0, p2 as f64 + m[1] as f64 / 2.0];
            let phase = tau.quad(v) * PI + PI * (v[0] * m[2] as f64 + v[1] * m[3] as f64);
            sum += (Complex64::i() * phase).exp();
        }
    }
    Ok(ThetaValue {
        re: sum.re,
        im: sum.im,
        truncation_radius: n,
        tail_bound: tail,
    })
}

/// Genus-1 theta constant `sum_n exp(i pi (n + a/2)^2 t + i pi (n + a/2) b)`,
/// used to certify the diagonal product splitting.
pub fn theta_constant_genus1(a: i64, b: i64, t: Complex64, tol: f64) -> Result<Complex64, ThetaError> {
    if !(t.im > 0.0) {
        return Err(ThetaError::NotPositiveDefinite(t.im));
    }
    if !(tol > 0.0) {
        return Err(ThetaError::BadTolerance(tol));
    }
    let lambda = t.im;
    let shift = 0.5 * a.abs() as f64;
    let (n, _) = certified_radius(lambda, shift, tol)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in -n..=n {
        let v = k as f64 + a as f64 / 2.0;
        let phase = PI * (t * v * v + Complex64::new(v * b as f64, 0.0));
        sum += (Complex64::i() * phase).exp();
    }
    Ok(sum)
}

/// The ten even theta constants at `tau`, in coordinate order.
pub fn even_thetas(tau: &SiegelMatrix, tol: f64) -> Result<[ThetaValue; 10], ThetaError> {
    let mut out = [ThetaValue { re: 0.0, im: 0.0, truncation_radius: 0, tail_bound: 0.0 }; 10];
    for (i, m) in even_characteristics().iter().enumerate() {
        let bits = m.bits().map(i64::from);
        out[i] = theta_constant(&bits, tau, tol)?;
    }
    Ok(out)
}

/// The image of `tau` under the embedding: the ten fourth powers, scaled so
/// the largest coordinate has modulus 1, together with the residuals of the
/// defining equations and a conservative error estimate for them.
#[derive(Clone, Debug, Serialize)]
pub struct PsiValue {
    pub coords_re: [f64; 10],
    pub coords_im: [f64; 10],
    pub max_linear_residual: f64,
    pub quartic_residual: f64,
    pub combined_tolerance: f64,
}

impl PsiValue {
    pub fn coords(&self) -> [Complex64; 10] {
        std::array::from_fn(|i| Complex64::new(self.coords_re[i], self.coords_im[i]))
    }

    pub fn magnitudes(&self) -> [f64; 10] {
        let c = self.coords();
        std::array::from_fn(|i| c[i].norm())
    }
}

pub fn psi_numeric(tau: &SiegelMatrix, tol: f64) -> Result<PsiValue, ThetaError> {
    let thetas = even_thetas(tau, tol)?;
    let mut coords: [Complex64; 10] =
        std::array::from_fn(|i| thetas[i].value().powu(4));
    let max_theta = thetas
        .iter()
        .map(|t| t.value().norm())
        .fold(0.0f64, f64::max);
    let scale = coords.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Err(ThetaError::TruncationFailure);
    }
    for c in &mut coords {
        *c /= scale;
    }
    let mut max_lin: f64 = 0.0;
    for form in LINEAR_FORMS {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, x) in form.iter().zip(&coords) {
            acc += *x * *c as f64;
        }
        max_lin = max_lin.max(acc.norm());
    }
    let s2: Complex64 = coords.iter().map(|x| x * x).sum();
    let s4: Complex64 = coords.iter().map(|x| x * x * x * x).sum();
    let quartic = (s2 * s2 - 4.0 * s4).norm();
    // error per coordinate: |d(theta^4)| <= 4 max|theta|^3 tail, normalised
    let per_coord = 4.0 * max_theta.powi(3) * tol / scale;
    let combined = 40.0 * per_coord + 1e-14;
    Ok(PsiValue {
        coords_re: std::array::from_fn(|i| coords[i].re),
        coords_im: std::array::from_fn(|i| coords[i].im),
        max_linear_residual: max_lin,
        quartic_residual: quartic,
        combined_tolerance: combined,
    })
}

/// Seeded sampler of upper-half-space points: `Im tau = L^t L + I/2` with
/// the entries of `L` uniform in `[-1, 1]`, `Re tau` symmetric with uniform
/// entries, keeping `lambda_min >= 1/2` so truncation stays cheap.
pub struct TauSampler {
    rng: ChaCha8Rng,
    pub seed: u64,
}

impl TauSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn sample(&mut self) -> SiegelMatrix {
        let mut u = || self.rng.gen_range(-1.0..1.0);
        let l = [[u(), u()], [u(), u()]];
        let y11 = l[0][0] * l[0][0] + l[1][0] * l[1][0] + 0.5;
        let y12 = l[0][0] * l[0][1] + l[1][0] * l[1][1];
        let y22 = l[0][1] * l[0][1] + l[1][1] * l[1][1] + 0.5;
        let x11 = u();
        let x12 = u();
        let x22 = u();
        SiegelMatrix::new(
            Complex64::new(x11, y11),
            Complex64::new(x12, y12),
            Complex64::new(x22, y22),
        )
        .expect("lambda_min >= 1/2 by construction")
    }
}

/// An integral symplectic 4x4 matrix (row convention, `t M J M = J` with the
/// standard `J` over `Z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntegralSymplectic(pub [[i64; 4]; 4]);

impl IntegralSymplectic {
    pub fn identity() -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| i64::from(i == j))))
    }

    pub fn is_symplectic(&self) -> bool {
        let j = [
            [0i64, 0, 1, 0],
            [0, 0, 0, 1],
            [-1, 0, 0, 0],
            [0, -1, 0, 0],
        ];
        let mt: [[i64; 4]; 4] =
            std::array::from_fn(|i| std::array::from_fn(|k| self.0[k][i]));
        let mut prod = [[0i64; 4]; 4];
        for (i, row) in mt.iter().enumerate() {
            for (jj, out) in prod[i].iter_mut().enumerate() {
                *out = (0..4).map(|k| row[k] * j[k][jj]).sum();
            }
        }
        let mut full = [[0i64; 4]; 4];
        for i in 0..4 {
            for jj in 0..4 {
                full[i][jj] = (0..4).map(|k| prod[i][k] * self.0[k][jj]).sum();
            }
        }
        full == j
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = [[0i64; 4]; 4];
        for i in 0..4 {
            for jj in 0..4 {
                out[i][jj] = (0..4).map(|k| self.0[i][k] * other.0[k][jj]).sum();
            }
        }
        Self(out)
    }

    /// Reduction modulo 2.
    pub fn mod2(&self) -> SymplecticMatrix {
        let bits: [[u8; 4]; 4] =
            std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j].rem_euclid(2) as u8));
        SymplecticMatrix::new(bits).expect("reduction of a symplectic matrix is symplectic")
    }

    fn blocks(&self) -> ([[f64; 2]; 2], [[f64; 2]; 2], [[f64; 2]; 2], [[f64; 2]; 2]) {
        let g = |r: usize, c: usize| {
            [
                [self.0[r][c] as f64, self.0[r][c + 1] as f64],
                [self.0[r + 1][c] as f64, self.0[r + 1][c + 1] as f64],
            ]
        };
        (g(0, 0), g(0, 2), g(2, 0), g(2, 2))
    }

    /// `M . tau = (A tau + B)(C tau + D)^{-1}` and the cocycle
    /// `j_M(tau) = det(C tau + D)`.
    pub fn act(&self, tau: &SiegelMatrix) -> Result<(SiegelMatrix, Complex64), ThetaError> {
        let (a, b, c, d) = self.blocks();
        let t = tau.entries();
        let lin = |m: &[[f64; 2]; 2], n: &[[f64; 2]; 2]| -> [[Complex64; 2]; 2] {
            // m tau + n entrywise
            std::array::from_fn(|i| {
                std::array::from_fn(|jj| {
                    m[i][0] * t[0][jj] + m[i][1] * t[1][jj] + n[i][jj]
                })
            })
        };
        let num = lin(&a, &b);
        let den = lin(&c, &d);
        let det = den[0][0] * den[1][1] - den[0][1] * den[1][0];
        if det.norm() < 1e-12 {
            return Err(ThetaError::SingularCocycle);
        }
        let inv = [
            [den[1][1] / det, -den[0][1] / det],
            [-den[1][0] / det, den[0][0] / det],
        ];
        let mut prod = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for jj in 0..2 {
                prod[i][jj] = num[i][0] * inv[0][jj] + num[i][1] * inv[1][jj];
            }
        }
        // symmetrise away rounding noise
        let sym12 = 0.5 * (prod[0][1] + prod[1][0]);
        let image = SiegelMatrix::new(prod[0][0], sym12, prod[1][1])?;
        Ok((image, det))
    }
}

/// Seeded generator of integral symplectic matrices: short products of the
/// standard generators (upper translations, the inversion, a GL factor).
pub fn sample_integral_symplectic(rng: &mut ChaCha8Rng, factors: usize) -> IntegralSymplectic {
    let gens: Vec<IntegralSymplectic> = vec![
        IntegralSymplectic([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        IntegralSymplectic([[1, 0, 0, 1], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        IntegralSymplectic([[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]),
        IntegralSymplectic([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]),
        IntegralSymplectic([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -1, 1]]),
    ];
    let mut m = IntegralSymplectic::identity();
    for _ in 0..factors {
        m = m.mul(&gens[rng.gen_range(0..gens.len())]);
    }
    debug_assert!(m.is_symplectic());
    m
}

/// Result of one modular-transformation check: the common constant
/// `zeta(M)^4` and the maximal spread of the per-coordinate ratios.
#[derive(Clone, Debug, Serialize)]
pub struct ModularityReport {
    pub zeta4: f64,
    pub max_spread: f64,
    pub cocycle_modulus: f64,
}

/// Verifies that `x_m(M . tau) / (phi(m, M) j_M(tau)^2 x_{m (.) M}(tau))` is
/// one constant in `{+1, -1}` across all ten coordinates.
pub fn verify_modularity(
    m: &IntegralSymplectic,
    tau: &SiegelMatrix,
    tol: f64,
) -> Result<ModularityReport, ThetaError> {
    let (image, det) = m.act(tau)?;
    let x_img = even_thetas(&image, tol)?.map(|t| t.value().powu(4));
    let x_src = even_thetas(tau, tol)?.map(|t| t.value().powu(4));
    let mat2 = m.mod2();
    let j2 = det * det;
    let mut ratios = Vec::with_capacity(10);
    for (i, ch) in even_characteristics().iter().enumerate() {
        let target = dot(*ch, &mat2).index().expect("stays even") - 1;
        let sign = f64::from(phi(*ch, &mat2));
        let denom = j2 * x_src[target] * sign;
        if denom.norm() < 1e-300 {
            return Err(ThetaError::SingularCocycle);
        }
        ratios.push(x_img[i] / denom);
    }
    let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let max_spread = ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max);
    let zeta4 = if mean.re >= 0.0 { 1.0 } else { -1.0 };
    let cocycle_modulus = (mean.norm() - 1.0).abs();
    Ok(ModularityReport {
        zeta4,
        max_spread,
        cocycle_modulus,
    })
}

/// Rosenhain parameters from the ten theta squares, with the rational
/// fourth-power formula for the first parameter cross-checked against the
/// square ratio; the sign of the rational route is fixed numerically.
#[derive(Clone, Debug, Serialize)]
pub struct RosenhainValues {
    pub lambda1: (f64, f64),
    pub lambda2: (f64, f64),
    pub lambda3: (f64, f64),
    /// Relative disagreement of the two routes to `lambda1^2`.
    pub dual_path_error: f64,
}

pub fn rosenhain(theta_squares: &[Complex64; 10], tol: f64) -> Result<RosenhainValues, ThetaError> {
    let s = theta_squares;
    let x: [Complex64; 10] = std::array::from_fn(|i| s[i] * s[i]);
    let scale = s.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let denom_floor = tol.max(1e-300) * scale * scale;
    // squared-theta cross ratios
    let d1 = s[1] * s[3];
    let d2 = s[1] * s[9];
    let d3 = s[3] * s[9];
    for d in [d1, d2, d3] {
        if d.norm() < denom_floor {
            return Err(ThetaError::DegeneratePoint);
        }
    }
    let lam1 = s[0] * s[2] / d1;
    let lam2 = s[2] * s[8] / d2;
    let lam3 = s[0] * s[8] / d3;
    // rational route in the fourth powers, sign resolved by agreement
    let denom_rat = 2.0 * x[1] * x[3];
    if denom_rat.norm() < denom_floor * denom_floor {
        return Err(ThetaError::DegeneratePoint);
    }
    let lam1_rat = (x[6] * x[7] - x[0] * x[1] - x[2] * x[3]) / denom_rat;
    let lam1_signed = if (lam1_rat - lam1).norm() <= (lam1_rat + lam1).norm() {
        lam1_rat
    } else {
        -lam1_rat
    };
    let dual_path_error =
        (lam1_signed * lam1_signed - lam1 * lam1).norm() / (lam1 * lam1).norm().max(1e-300);
    Ok(RosenhainValues {
        lambda1: (lam1_signed.re, lam1_signed.im),
        lambda2: (lam2.re, lam2.im),
        lambda3: (lam3.re, lam3.im),
        dual_path_error,
    })
}

/// One pair's worth of the exclusion-locus criterion.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairFixedPoint {
    pub i: usize,
    pub j: usize,
    /// `x_i = epsilon(i, j) x_j` holds exactly.
    pub relation_holds: bool,
    /// The conjugated involution fixes the point projectively.
    pub involution_fixes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub pairs: Vec<PairFixedPoint>,
    pub all_consistent: bool,
}

/// Checks, for every pair `i < j`, that the sign relation
/// `x_i = epsilon(i, j) x_j` holds exactly if and only if the involution
/// swapping the pair (the conjugate of the canonical one) fixes the point.
pub fn fixed_point_check(point: &ProjectivePoint) -> Result<FixedPointReport, ThetaError> {
    if !point.is_on_variety() {
        return Err(ThetaError::NotOnModel);
    }
    let group = Sp4::get();
    let base = exclusion_involution();
    let evens = even_characteristics();
    let mut pairs = Vec::with_capacity(45);
    for i in 1..=10usize {
        for j in (i + 1)..=10 {
            let transporter = group
                .find_transporter(&[evens[i - 1], evens[j - 1]], &[evens[0], evens[1]])
                .expect("pairs are 2-transitive");
            let conj = transporter.mul(&base).mul(&transporter.inverse());
            debug_assert_eq!(dot(evens[i - 1], &conj), evens[j - 1]);
            let eps = epsilon(i, j).expect("distinct valid indices");
            let sign = Scalar::from_i64(i64::from(eps), point.domain());
            let relation_holds = *point.coord(i) == point.coord(j).mul(&sign);
            let involution_fixes = point.apply_signed_map(&conj) == *point;
            pairs.push(PairFixedPoint {
                i,
                j,
                relation_holds,
                involution_fixes,
            });
        }
    }
    let all_consistent = pairs
        .iter()
        .all(|p| p.relation_holds == p.involution_fixes);
    Ok(FixedPointReport {
        pairs,
        all_consistent,
    })
}

/// Exact span check: on the model, `x_1 = x_2` forces `x_6 = -x_9` and
/// `x_5 = -x_10` (the two relations live in the row span of the five linear
/// forms together with `x_1 - x_2`).
pub fn equal_pair_forces_sign_relations() -> bool {
    use crate::linalg::ExactMatrix;
    use crate::scalar::Domain;
    let mut rows: Vec<Vec<i64>> = LINEAR_FORMS.iter().map(|r| r.to_vec()).collect();
    let mut pair = vec![0i64; 10];
    pair[0] = 1;
    pair[1] = -1;
    rows.push(pair);
    let span = ExactMatrix::from_i64_rows(&rows, Domain::Rational);
    let base = span.rref();
    for target in [(6usize, 9usize), (5usize, 10usize)] {
        let mut rel = vec![0i64; 10];
        rel[target.0 - 1] = 1;
        rel[target.1 - 1] = 1;
        let mut extended: Vec<Vec<i64>> = LINEAR_FORMS.iter().map(|r| r.to_vec()).collect();
        extended.push(vec![1, -1, 0, 0, 0, 0, 0, 0, 0, 0]);
        extended.push(rel);
        let ext = ExactMatrix::from_i64_rows(&extended, Domain::Rational);
        if ext.rref().rank != base.rank {
            return false;
        }
    }
    true
}
