//! Piecewise-linear finite elements on a uniform mesh of (0, 1) with
//! homogeneous Dirichlet boundary conditions.
//!
//! Nodal vectors are plain `Vec<f64>` holding one coefficient per interior
//! node `x_i = i h`, `i = 1..num_elements`.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{check_len, Error, Result};

/// Uniform mesh of (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mesh1D {
    num_elements: usize,
}

impl Mesh1D {
    pub fn new(num_elements: usize) -> Result<Self> {
        if num_elements < 2 {
            return Err(Error::InvalidMesh(num_elements));
        }
        Ok(Self { num_elements })
    }

    /// Dyadic mesh with `h = 2^-level`.
    pub fn dyadic(level: u32) -> Result<Self> {
        if level >= usize::BITS - 1 {
            return Err(Error::Config(format!("mesh level {level} is too fine")));
        }
        Self::new(1usize << level)
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn h(&self) -> f64 {
        1.0 / self.num_elements as f64
    }

    pub fn interior_nodes(&self) -> usize {
        self.num_elements - 1
    }

    /// Position of node `i` (`0` and `num_elements` are the boundary).
    pub fn node(&self, i: usize) -> f64 {
        i as f64 / self.num_elements as f64
    }

    pub fn interior_positions(&self) -> Vec<f64> {
        (1..self.num_elements).map(|i| self.node(i)).collect()
    }

    /// The mesh obtained by splitting every element in two.
    pub fn refined(&self) -> Self {
        Self { num_elements: 2 * self.num_elements }
    }
}

/// Symmetric tridiagonal matrix; `off[i]` couples rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiagOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl TriDiagOperator {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Config("empty tridiagonal operator".into()));
        }
        check_len(diag.len() - 1, off.len())?;
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        check_len(self.dim(), other.dim())?;
        let diag = self.diag.iter().zip(&other.diag).map(|(x, y)| a * x + b * y).collect();
        let off = self.off.iter().zip(&other.off).map(|(x, y)| a * x + b * y).collect();
        Ok(Self { diag, off })
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), x.len())?;
        let mut y = vec![0.0; x.len()];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x`; lengths must already match.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.diag.len();
        debug_assert!(x.len() == n && y.len() == n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// Row-sum norm `max_i sum_j |a_ij|`.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let ones = vec![1.0; self.dim()];
        self.apply(&ones).expect("dimensions agree")
    }
}

/// Thomas elimination of a symmetric tridiagonal matrix, computed once and
/// reused for many right-hand sides.
#[derive(Debug, Clone)]
pub struct TriDiagFactor {
    off: Vec<f64>,
    // reciprocal pivots
    inv_pivot: Vec<f64>,
    // off[i] / pivot[i]
    upper: Vec<f64>,
}

/// Pivots below this magnitude signal breakdown.
pub const PIVOT_FLOOR: f64 = 1e-300;

impl TriDiagFactor {
    pub fn new(a: &TriDiagOperator) -> Result<Self> {
        let n = a.dim();
        let mut inv_pivot = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n.saturating_sub(1));
        let mut pivot = a.diag[0];
        for i in 0..n {
            if i > 0 {
                pivot = a.diag[i] - a.off[i - 1] * upper[i - 1];
            }
            if !(pivot.abs() >= PIVOT_FLOOR) {
                return Err(Error::SingularPivot { row: i, pivot });
            }
            inv_pivot.push(1.0 / pivot);
            if i + 1 < n {
                upper.push(a.off[i] / pivot);
            }
        }
        Ok(Self { off: a.off.clone(), inv_pivot, upper })
    }

    pub fn dim(&self) -> usize {
        self.inv_pivot.len()
    }

    /// For a symmetric matrix, all pivots positive means positive definite.
    pub fn is_positive_definite(&self) -> bool {
        self.inv_pivot.iter().all(|&p| p > 0.0)
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), rhs.len())?;
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    /// Overwrites `x` (holding the right-hand side) with the solution.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = x.len();
        debug_assert_eq!(n, self.dim());
        x[0] *= self.inv_pivot[0];
        for i in 1..n {
            x[i] = (x[i] - self.off[i - 1] * x[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            x[i] -= self.upper[i] * x[i + 1];
        }
    }
}

pub fn solve_tridiag(a: &TriDiagOperator, rhs: &[f64]) -> Result<Vec<f64>> {
    TriDiagFactor::new(a)?.solve(rhs)
}

/// Entries `(phi_i, phi_j)`: `2h/3` on the diagonal, `h/6` off it.
pub fn assemble_mass(mesh: &Mesh1D) -> TriDiagOperator {
    let h = mesh.h();
    let n = mesh.interior_nodes();
    TriDiagOperator { diag: vec![2.0 * h / 3.0; n], off: vec![h / 6.0; n - 1] }
}

/// Entries `(phi_i', phi_j')`: `2/h` on the diagonal, `-1/h` off it.
pub fn assemble_stiffness(mesh: &Mesh1D) -> TriDiagOperator {
    let inv_h = mesh.num_elements() as f64;
    let n = mesh.interior_nodes();
    TriDiagOperator { diag: vec![2.0 * inv_h; n], off: vec![-inv_h; n - 1] }
}

const GAUSS5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GAUSS5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Load vector `(f, phi_i)` by five-point Gauss-Legendre on each element.
pub fn load_vector<F: Fn(f64) -> f64>(f: F, mesh: &Mesh1D) -> Vec<f64> {
    let n = mesh.num_elements();
    let h = mesh.h();
    let mut load = vec![0.0; n - 1];
    for e in 0..n {
        let left = mesh.node(e);
        let (mut to_left, mut to_right) = (0.0, 0.0);
        for (&s, &w) in GAUSS5_NODES.iter().zip(&GAUSS5_WEIGHTS) {
            let t = 0.5 * (s + 1.0);
            let fx = f(left + t * h) * w * 0.5 * h;
            // node e's hat falls across this element, node e+1's rises
            to_left += fx * (1.0 - t);
            to_right += fx * t;
        }
        if e >= 1 {
            load[e - 1] += to_left;
        }
        if e + 1 < n {
            load[e] += to_right;
        }
    }
    load
}

/// Function constant between breakpoints: equals `values[k]` on
/// `(breaks[k-1], breaks[k])`, with `breaks[-1] = 0` and `breaks[len] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_len(breaks.len() + 1, values.len())?;
        let mut last = 0.0;
        for &b in &breaks {
            if !(b > last && b < 1.0) {
                return Err(Error::Config(format!("breakpoints must increase within (0, 1), got {b}")));
            }
            last = b;
        }
        Ok(Self { breaks, values })
    }

    /// `1` on `[0, 1/2]` and `-1` on `(1/2, 1]`.
    pub fn sign_step() -> Self {
        Self { breaks: vec![0.5], values: vec![1.0, -1.0] }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.breaks.iter().take_while(|&&b| x > b).count();
        self.values[k]
    }

    fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let mut edges = Vec::with_capacity(self.breaks.len() + 2);
        edges.push(0.0);
        edges.extend_from_slice(&self.breaks);
        edges.push(1.0);
        (0..self.values.len()).map(move |k| (edges[k], edges[k + 1], self.values[k]))
    }

    /// Exact load vector; the hat functions are linear on each piece, so the
    /// trapezoid rule on every (element ∩ piece) interval is exact.
    pub fn load_vector(&self, mesh: &Mesh1D) -> Vec<f64> {
        let n = mesh.num_elements();
        let h = mesh.h();
        let mut load = vec![0.0; n - 1];
        for e in 0..n {
            let (x0, x1) = (mesh.node(e), mesh.node(e + 1));
            let (mut to_left, mut to_right) = (0.0, 0.0);
            for (a, b, v) in self.pieces() {
                let lo = a.max(x0);
                let hi = b.min(x1);
                if hi <= lo {
                    continue;
                }
                let (ta, tb) = ((lo - x0) / h, (hi - x0) / h);
                let len = hi - lo;
                to_right += v * len * 0.5 * (ta + tb);
                to_left += v * len * (1.0 - 0.5 * (ta + tb));
            }
            if e >= 1 {
                load[e - 1] += to_left;
            }
            if e + 1 < n {
                load[e] += to_right;
            }
        }
        load
    }
}

/// L² projection onto the finite element space.
pub fn l2_project<F: Fn(f64) -> f64>(f: F, mesh: &Mesh1D) -> Result<Vec<f64>> {
    let load = load_vector(f, mesh);
    solve_tridiag(&assemble_mass(mesh), &load)
}

/// Exact `(sqrt(2) sin(j pi x), phi_i)` for every interior node.
pub fn load_sine_mode(j: usize, mesh: &Mesh1D) -> Vec<f64> {
    let h = mesh.h();
    let k = j as f64 * PI;
    let scale = SQRT_2 / (h * k * k);
    let s = |i: usize| (k * mesh.node(i)).sin();
    (1..mesh.num_elements()).map(|i| scale * (2.0 * s(i) - s(i - 1) - s(i + 1))).collect()
}

/// Row-major `modes x interior_nodes` matrix of sine loads for modes `1..=modes`.
pub fn sine_load_matrix(modes: usize, mesh: &Mesh1D) -> Vec<f64> {
    (1..=modes).flat_map(|j| load_sine_mode(j, mesh)).collect()
}

/// `sqrt(v^T M v)`.
pub fn discrete_l2_norm(v: &[f64], mass: &TriDiagOperator) -> Result<f64> {
    let mv = mass.apply(v)?;
    let q: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
    Ok(q.max(0.0).sqrt())
}

/// Exact representation of a coarse P1 function on the once-refined mesh.
pub fn prolong(coarse: &[f64], coarse_mesh: &Mesh1D, fine_mesh: &Mesh1D) -> Result<Vec<f64>> {
    if fine_mesh.num_elements() != 2 * coarse_mesh.num_elements() {
        return Err(Error::NonNested {
            coarse: coarse_mesh.num_elements(),
            fine: fine_mesh.num_elements(),
        });
    }
    check_len(coarse_mesh.interior_nodes(), coarse.len())?;
    let at = |i: usize| if i == 0 || i > coarse.len() { 0.0 } else { coarse[i - 1] };
    Ok((1..fine_mesh.num_elements())
        .map(|f| if f % 2 == 0 { at(f / 2) } else { 0.5 * (at(f / 2) + at(f / 2 + 1)) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{dense_solve, generalized_eig, quadrature, DenseMatrix};
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn mesh_invariants() {
        assert!(Mesh1D::new(1).is_err());
        for k in 1..12 {
            let m = Mesh1D::dyadic(k).unwrap();
            assert!((m.h() * m.num_elements() as f64 - 1.0).abs() <= f64::EPSILON);
            let x = m.interior_positions();
            assert!(x.windows(2).all(|w| w[0] < w[1]));
            assert!(x[0] > 0.0 && *x.last().unwrap() < 1.0);
        }
        let m = Mesh1D::new(3).unwrap();
        assert_eq!(m.interior_nodes(), 2);
    }

    #[test]
    fn mass_examples() {
        let m = assemble_mass(&Mesh1D::new(4).unwrap());
        assert!(close(&m.diag, &[1.0 / 6.0; 3], 1e-16));
        assert!(close(&m.off, &[1.0 / 24.0; 2], 1e-16));
        let m = assemble_mass(&Mesh1D::new(2).unwrap());
        assert!(close(&m.diag, &[1.0 / 3.0], 1e-16));
        assert!(m.off.is_empty());
        let mesh = Mesh1D::new(8).unwrap();
        let rs = assemble_mass(&mesh).row_sums();
        for r in &rs[1..rs.len() - 1] {
            assert!((r - mesh.h()).abs() < 1e-15);
        }
    }

    #[test]
    fn stiffness_examples() {
        let s = assemble_stiffness(&Mesh1D::new(4).unwrap());
        assert_eq!(s.diag, vec![8.0; 3]);
        assert_eq!(s.off, vec![-4.0; 2]);
        let s = assemble_stiffness(&Mesh1D::new(2).unwrap());
        assert_eq!(s.diag, vec![4.0]);
        let rs = assemble_stiffness(&Mesh1D::new(8).unwrap()).row_sums();
        assert!(rs[1..rs.len() - 1].iter().all(|&r| r == 0.0));
    }

    #[test]
    fn tridiag_examples() {
        let m = assemble_mass(&Mesh1D::new(2).unwrap());
        assert!(close(&solve_tridiag(&m, &[1.0]).unwrap(), &[3.0], 1e-14));
        let s = assemble_stiffness(&Mesh1D::new(2).unwrap());
        assert!(close(&solve_tridiag(&s, &[4.0]).unwrap(), &[1.0], 1e-15));
        let s = assemble_stiffness(&Mesh1D::new(4).unwrap());
        let x = solve_tridiag(&s, &[0.0, 1.0, 0.0]).unwrap();
        let dense = dense_solve(&DenseMatrix::from_tridiag(&s), &[0.0, 1.0, 0.0]).unwrap();
        assert!(close(&x, &dense, 1e-14));
        assert!(close(&x, &[0.125, 0.25, 0.125], 1e-14));
    }

    #[test]
    fn tridiag_breakdown() {
        let a = TriDiagOperator::new(vec![0.0, 1.0], vec![1.0]).unwrap();
        assert!(matches!(solve_tridiag(&a, &[1.0, 1.0]), Err(Error::SingularPivot { row: 0, .. })));
        let a = TriDiagOperator::new(vec![1.0, 1.0], vec![1.0]).unwrap();
        assert!(matches!(solve_tridiag(&a, &[1.0, 1.0]), Err(Error::SingularPivot { row: 1, .. })));
        assert!(solve_tridiag(&assemble_mass(&Mesh1D::new(4).unwrap()), &[1.0]).is_err());
    }

    #[test]
    fn l2_projection_examples() {
        let mesh = Mesh1D::new(4).unwrap();
        // hat combination with nodal values 1, -2, 0.5
        let nodal = [1.0, -2.0, 0.5];
        let f = |x: f64| {
            let t = x * 4.0;
            let i = (t.floor() as usize).min(3);
            let v = |k: usize| if k == 0 || k == 4 { 0.0 } else { nodal[k - 1] };
            v(i) + (t - i as f64) * (v(i + 1) - v(i))
        };
        assert!(close(&l2_project(f, &mesh).unwrap(), &nodal, 1e-12));
        assert_eq!(l2_project(|_| 0.0, &mesh).unwrap(), vec![0.0; 3]);

        // exact load of x(1-x) against hats: h g(x_i) - h^3/6
        let h = 0.25f64;
        let exact: Vec<f64> = (1..4)
            .map(|i| {
                let x = i as f64 * h;
                h * x * (1.0 - x) - h.powi(3) / 6.0
            })
            .collect();
        let want = dense_solve(&DenseMatrix::from_tridiag(&assemble_mass(&mesh)), &exact).unwrap();
        let got = l2_project(|x| x * (1.0 - x), &mesh).unwrap();
        assert!(close(&got, &want, 1e-12));
    }

    #[test]
    fn projection_is_idempotent() {
        let mesh = Mesh1D::new(16).unwrap();
        let once = l2_project(|x| (3.0 * x).exp() * (7.0 * x).sin(), &mesh).unwrap();
        let positions: Vec<f64> = std::iter::once(0.0)
            .chain(once.iter().copied())
            .chain(std::iter::once(0.0))
            .collect();
        let interp = |x: f64| {
            let t = x * 16.0;
            let i = (t.floor() as usize).min(15);
            positions[i] + (t - i as f64) * (positions[i + 1] - positions[i])
        };
        let twice = l2_project(interp, &mesh).unwrap();
        assert!(close(&once, &twice, 1e-12));
    }

    #[test]
    fn projection_is_stable() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let mesh = Mesh1D::new(4 + trial % 29).unwrap();
            let coef: Vec<(f64, f64)> =
                (0..6).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let f = |x: f64| {
                coef.iter()
                    .enumerate()
                    .map(|(k, (a, b))| a * (k as f64 * PI * x).cos() + b * ((k + 1) as f64 * PI * x).sin())
                    .sum::<f64>()
            };
            let norm_f: f64 = (0..64)
                .map(|e| quadrature(|x| f(x).powi(2), e as f64 / 64.0, (e + 1) as f64 / 64.0, 9))
                .sum::<f64>()
                .sqrt();
            let p = l2_project(f, &mesh).unwrap();
            let norm_p = discrete_l2_norm(&p, &assemble_mass(&mesh)).unwrap();
            assert!(norm_p <= norm_f * (1.0 + 1e-12), "trial {trial}: {norm_p} > {norm_f}");
        }
    }

    #[test]
    fn sine_mode_examples() {
        let mesh = Mesh1D::new(2).unwrap();
        let l = load_sine_mode(1, &mesh);
        assert!((l[0] - SQRT_2 * 4.0 / (PI * PI)).abs() < 1e-15);
        assert!((l[0] - 0.573159).abs() < 1e-6);
        let mesh = Mesh1D::new(8).unwrap();
        for j in [2, 4, 6] {
            assert!(load_sine_mode(j, &mesh)[3].abs() < 1e-14);
        }
    }

    #[test]
    fn sine_mode_matches_quadrature() {
        for n in [2usize, 3, 8, 16, 32] {
            let mesh = Mesh1D::new(n).unwrap();
            let h = mesh.h();
            for j in 1..=(n + 1) {
                let got = load_sine_mode(j, &mesh);
                for i in 1..n {
                    let xi = mesh.node(i);
                    let g = |x: f64| SQRT_2 * (j as f64 * PI * x).sin();
                    let want = quadrature(|x| g(x) * (x - xi + h) / h, xi - h, xi, 9)
                        + quadrature(|x| g(x) * (xi + h - x) / h, xi, xi + h, 9);
                    assert!((got[i - 1] - want).abs() < 1e-12, "n={n} j={j} i={i}");
                }
            }
        }
    }

    #[test]
    fn piecewise_constant_load_is_exact() {
        let f = PiecewiseConstant::sign_step();
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(0.50001), -1.0);
        for n in [2usize, 4, 8, 3, 5] {
            let mesh = Mesh1D::new(n).unwrap();
            let h = mesh.h();
            let got = f.load_vector(&mesh);
            for i in 1..n {
                let xi = mesh.node(i);
                // piecewise integrate the hat against the step with a split at 1/2
                let hat = |x: f64| 1.0 - ((x - xi) / h).abs();
                let mut want = 0.0;
                for (a, b) in [(xi - h, xi), (xi, xi + h)] {
                    let mid = 0.5f64.clamp(a, b);
                    if mid > a {
                        want += quadrature(|x| hat(x) * f.eval(x), a, mid, 5);
                    }
                    if b > mid {
                        want += quadrature(|x| hat(x) * f.eval(x), mid, b, 5);
                    }
                }
                assert!((got[i - 1] - want).abs() < 1e-14, "n={n} i={i}");
            }
        }
        assert!(PiecewiseConstant::new(vec![0.6, 0.4], vec![1.0, 2.0, 3.0]).is_err());
        assert!(PiecewiseConstant::new(vec![0.5], vec![1.0]).is_err());
    }

    #[test]
    fn norm_examples() {
        let mass = assemble_mass(&Mesh1D::new(4).unwrap());
        assert_eq!(discrete_l2_norm(&[0.0; 3], &mass).unwrap(), 0.0);
        assert!((discrete_l2_norm(&[0.0, 1.0, 0.0], &mass).unwrap() - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
        let dense = DenseMatrix::from_tridiag(&mass);
        let ones = [1.0; 3];
        let want = dense.quadratic_form(&ones).sqrt();
        assert!((discrete_l2_norm(&ones, &mass).unwrap() - want).abs() < 1e-15);
        assert!((want - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(discrete_l2_norm(&[1.0; 2], &mass).is_err());
    }

    #[test]
    fn prolong_examples() {
        let c = Mesh1D::new(2).unwrap();
        let f = Mesh1D::new(4).unwrap();
        assert_eq!(prolong(&[1.0], &c, &f).unwrap(), vec![0.5, 1.0, 0.5]);
        assert_eq!(prolong(&[0.0], &c, &f).unwrap(), vec![0.0; 3]);
        assert!(prolong(&[1.0], &c, &Mesh1D::new(6).unwrap()).is_err());
        assert!(prolong(&[1.0, 2.0], &c, &f).is_err());
    }

    #[test]
    fn first_eigenvalue_approximates_pi_squared() {
        for n in [16usize, 32] {
            let mesh = Mesh1D::new(n).unwrap();
            let s = DenseMatrix::from_tridiag(&assemble_stiffness(&mesh));
            let m = DenseMatrix::from_tridiag(&assemble_mass(&mesh));
            let (vals, _) = generalized_eig(&s, &m).unwrap();
            assert!(vals[0] >= PI * PI && vals[0] <= PI * PI * 1.05, "n={n}: {}", vals[0]);
            // eigenvalues approximate (j pi)^2 from above
            for (j, &l) in vals.iter().enumerate().take(4) {
                assert!(l >= ((j + 1) as f64 * PI).powi(2));
            }
        }
    }

    #[test]
    fn step_matrix_factor_residual() {
        let mesh = Mesh1D::new(64).unwrap();
        let a = assemble_mass(&mesh).combine(1.0 / 1e-3, &assemble_stiffness(&mesh), 0.3).unwrap();
        let rhs: Vec<f64> = (0..63).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = solve_tridiag(&a, &rhs).unwrap();
        let r = a.apply(&x).unwrap();
        let xn = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let bn = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let res = r.iter().zip(&rhs).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        assert!(res <= 1e-12 * (a.norm_inf() * xn + bn));
    }

    proptest! {
        #[test]
        fn prolongation_preserves_norm(v in prop::collection::vec(-5.0f64..5.0, 1..40)) {
            let coarse = Mesh1D::new(v.len() + 1).unwrap();
            let fine = coarse.refined();
            let p = prolong(&v, &coarse, &fine).unwrap();
            let a = discrete_l2_norm(&v, &assemble_mass(&coarse)).unwrap();
            let b = discrete_l2_norm(&p, &assemble_mass(&fine)).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }
}
