//! Brute-force reference computations used to check the solver.
//!
//! Nothing here shares a nontrivial code path with the module it checks:
//! weights come from the product formula instead of the recurrence, linear
//! systems are solved densely with pivoting, eigenpairs come from Cholesky
//! reduction plus cyclic Jacobi, and quadrature nodes are computed by Newton
//! iteration on Legendre polynomials. Dimensions are capped at
//! [`MAX_DIM`] and step counts at [`MAX_STEPS`].

use std::f64::consts::PI;

use crate::cq_kernel::{Branch, FractionalOrder};
use crate::error::{check_len, Error, Result};
use crate::fem::{assemble_mass, assemble_stiffness, Mesh1D, TriDiagOperator};

pub const MAX_DIM: usize = 64;
pub const MAX_STEPS: usize = 1024;

/// `(-1)^j C(1 - alpha, j)` as a direct product, multiplied from the last
/// factor down.
pub fn binom_weight(alpha: FractionalOrder, j: usize) -> f64 {
    let p = 1.0 - alpha.value();
    let mut prod = 1.0;
    for k in (1..=j).rev() {
        prod *= (p - k as f64 + 1.0) / k as f64;
    }
    if j % 2 == 1 {
        -prod
    } else {
        prod
    }
}

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            check_len(n, r.len())?;
            m.data[i * n..(i + 1) * n].copy_from_slice(r);
        }
        Ok(m)
    }

    pub fn from_tridiag(t: &TriDiagOperator) -> Self {
        let n = t.dim();
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = t.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = t.off[i];
                m[(i + 1, i)] = t.off[i];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    fn is_symmetric(&self) -> bool {
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= 1e-14 * scale))
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.dim();
    check_len(n, b.len())?;
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .expect("non-empty range");
        if m[(piv, col)].abs() < 1e-300 {
            return Err(Error::SingularPivot { row: col, pivot: m[(piv, col)] });
        }
        if piv != col {
            for k in 0..n {
                m.data.swap(col * n + k, piv * n + k);
            }
            x.swap(col, piv);
        }
        for r in col + 1..n {
            let f = m[(r, col)] / m[(col, col)];
            if f != 0.0 {
                for k in col..n {
                    m[(r, k)] -= f * m[(col, k)];
                }
                x[r] -= f * x[col];
            }
        }
    }
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[(r, k)] * x[k]).sum();
        x[r] = (x[r] - s) / m[(r, r)];
    }
    Ok(x)
}

fn cholesky(m: &DenseMatrix) -> Result<DenseMatrix> {
    let n = m.dim();
    let mut l = DenseMatrix::zeros(n);
    for j in 0..n {
        let d = m[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
        if !(d > 0.0) {
            return Err(Error::Config("mass matrix is not positive definite".into()));
        }
        l[(j, j)] = d.sqrt();
        for i in j + 1..n {
            let s = m[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
            l[(i, j)] = s / l[(j, j)];
        }
    }
    Ok(l)
}

// Solves L y = b for lower-triangular L.
fn forward_sub(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.dim();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
        y[i] = (b[i] - s) / l[(i, i)];
    }
    y
}

// Solves L^T x = y.
fn backward_sub_transpose(l: &DenseMatrix, y: &[f64]) -> Vec<f64> {
    let n = l.dim();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[(k, i)] * x[k]).sum();
        x[i] = (y[i] - s) / l[(i, i)];
    }
    x
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi for a symmetric matrix; returns eigenvalues (unsorted) and
/// eigenvectors as columns of the accumulated rotation.
fn jacobi_eigen(mut a: DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = a.dim();
    let mut v = DenseMatrix::identity(n);
    let frob = a.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-12 * frob.max(1.0);
    for _sweep in 0..100 {
        if off_diagonal_norm(&a) <= tol {
            return Ok(((0..n).map(|i| a[(i, i)]).collect(), v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::NonFinite("Jacobi iteration did not converge".into()))
}

/// Solves `S v = lambda M v`. Eigenvalues ascending; eigenvectors (returned
/// as rows) are M-orthonormal.
pub fn generalized_eig(s: &DenseMatrix, m: &DenseMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = s.dim();
    check_len(n, m.dim())?;
    if n > MAX_DIM {
        return Err(Error::Config(format!("oracle dimension {n} exceeds {MAX_DIM}")));
    }
    if !s.is_symmetric() || !m.is_symmetric() {
        return Err(Error::Config("generalized eigenproblem needs symmetric matrices".into()));
    }
    let l = cholesky(m)?;
    // C = L^{-1} S L^{-T}, built column by column
    let mut tmp = DenseMatrix::zeros(n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| s[(i, j)]).collect();
        let y = forward_sub(&l, &col);
        for i in 0..n {
            tmp[(i, j)] = y[i];
        }
    }
    let mut c = DenseMatrix::zeros(n);
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| tmp[(i, j)]).collect();
        let y = forward_sub(&l, &row);
        for j in 0..n {
            c[(i, j)] = y[j];
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = avg;
            c[(j, i)] = avg;
        }
    }
    let (vals, vecs) = jacobi_eigen(c)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let eigenvalues = order.iter().map(|&k| vals[k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| {
            let y: Vec<f64> = (0..n).map(|i| vecs[(i, k)]).collect();
            backward_sub_transpose(&l, &y)
        })
        .collect();
    Ok((eigenvalues, eigenvectors))
}

/// Scalar version of the time stepper with `-Delta_h` replaced by `lambda`.
///
/// Returns `c_0..=c_N` where `forcing[n-1]` is the right-hand side at step `n`.
pub fn scalar_cq_recurrence(
    alpha: FractionalOrder,
    lambda: f64,
    tau: f64,
    c0: f64,
    forcing: &[f64],
) -> Result<Vec<f64>> {
    let steps = forcing.len();
    if steps > MAX_STEPS {
        return Err(Error::Config(format!("oracle step count {steps} exceeds {MAX_STEPS}")));
    }
    let b: Vec<f64> = (0..=steps).map(|j| binom_weight(alpha, j)).collect();
    let shift = match alpha.branch() {
        Branch::SubtractInitial => c0,
        Branch::PlainHistory => 0.0,
    };
    let scale = tau.powf(alpha.value() - 1.0);
    let mut w = vec![c0 - shift];
    for n in 1..=steps {
        let mut memory = 0.0;
        for j in 1..n {
            memory += b[n - j] * w[j];
        }
        let rhs = w[n - 1] / tau - lambda * scale * memory + forcing[n - 1];
        w.push(rhs / (1.0 / tau + lambda * scale * b[0]));
    }
    Ok(w.into_iter().map(|x| x + shift).collect())
}

/// Classical backward Euler for the heat equation, `(M/tau + S) u_n = M u_{n-1} / tau`,
/// returning `u_0..=u_N`.
pub fn heat_backward_euler(mesh: &Mesh1D, tau: f64, steps: usize, psi0: &[f64]) -> Result<Vec<Vec<f64>>> {
    heat_backward_euler_forced(mesh, tau, steps, psi0, &vec![0.0; psi0.len()])
}

/// Backward Euler for the heat equation with a constant load vector `(f, phi_i)`.
pub fn heat_backward_euler_forced(
    mesh: &Mesh1D,
    tau: f64,
    steps: usize,
    psi0: &[f64],
    load: &[f64],
) -> Result<Vec<Vec<f64>>> {
    check_len(mesh.interior_nodes(), psi0.len())?;
    check_len(psi0.len(), load.len())?;
    if steps > MAX_STEPS || psi0.len() > MAX_DIM {
        return Err(Error::Config("heat oracle problem too large".into()));
    }
    let mass = DenseMatrix::from_tridiag(&assemble_mass(mesh));
    let stiff = DenseMatrix::from_tridiag(&assemble_stiffness(mesh));
    let n = mass.dim();
    let mut lhs = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            lhs[(i, j)] = mass[(i, j)] / tau + stiff[(i, j)];
        }
    }
    let mut out = vec![psi0.to_vec()];
    for _ in 0..steps {
        let rhs: Vec<f64> = mass
            .mul_vec(out.last().unwrap())
            .iter()
            .zip(load)
            .map(|(v, l)| v / tau + l)
            .collect();
        out.push(dense_solve(&lhs, &rhs)?);
    }
    Ok(out)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    let nf = order as f64;
    for i in 0..order {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if order == 0 { 1.0 } else { p1 };
            dp = nf * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// Gauss-Legendre approximation of `int_a^b f`.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    nodes.iter().zip(&weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Minimal complex arithmetic for the generating-function oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl Cplx {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }
    /// Principal branch power.
    pub fn powf(self, p: f64) -> Self {
        let r = self.re.hypot(self.im);
        let th = self.im.atan2(self.re);
        let m = r.powf(p);
        Self::new(m * (p * th).cos(), m * (p * th).sin())
    }
}

impl std::ops::Mul for Cplx {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl std::ops::Div for Cplx {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Self::new((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)
    }
}

/// Taylor coefficient of `z^n` of a function analytic in the unit disc, by the
/// trapezoid rule for Cauchy's integral on the circle `|z| = radius`.
pub fn series_coefficient<F: Fn(Cplx) -> Cplx>(f: F, n: usize, radius: f64, points: usize) -> f64 {
    let mut acc = 0.0;
    for k in 0..points {
        let th = 2.0 * PI * k as f64 / points as f64;
        let z = Cplx::new(radius * th.cos(), radius * th.sin());
        let v = f(z);
        // Re(v * e^{-i n th})
        let (c, s) = ((n as f64 * th).cos(), (n as f64 * th).sin());
        acc += v.re * c + v.im * s;
    }
    acc / points as f64 / radius.powi(n as i32)
}
