//! Small dense complex matrices and a Hermitian Jacobi eigensolver.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;
use crate::C64;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_TOL: f64 = 1e-15;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// `None` unless `data.len()` is a perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Option<Self> {
        let n = (sqrt(data.len() as f64) + 0.5) as usize;
        (n * n == data.len()).then_some(CMatrix { n, data })
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[i * self.n + j] = value;
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &CMatrix) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        m
    }

    pub fn scaled(&self, s: f64) -> Self {
        CMatrix { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// `self + s · other`
    pub fn add_scaled(&self, other: &CMatrix, s: f64) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b * s).collect(),
        }
    }

    /// `(M + M†)/2`
    pub fn hermitian_part(&self) -> Self {
        self.add_scaled(&self.adjoint(), 1.0).scaled(0.5)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `⟨v|M|v⟩`
    pub fn quad(&self, v: &[C64]) -> C64 {
        let n = self.n;
        let mut total = C64::new(0.0, 0.0);
        for i in 0..n {
            if v[i] == C64::new(0.0, 0.0) {
                continue;
            }
            let mut row = C64::new(0.0, 0.0);
            for j in 0..n {
                row += self.data[i * n + j] * v[j];
            }
            total += v[i].conj() * row;
        }
        total
    }

    /// Frobenius inner product `Re Tr(M† N)`.
    pub fn frobenius_dot(&self, other: &CMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// `V diag(λ) V†`
    pub fn from_eigen(values: &[f64], vectors: &CMatrix) -> Self {
        let n = vectors.n;
        let mut m = Self::zeros(n);
        for (k, &lam) in values.iter().enumerate() {
            if lam == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = vectors.get(i, k) * lam;
                for j in 0..n {
                    m.data[i * n + j] += vik * vectors.get(j, k).conj();
                }
            }
        }
        m
    }

    pub fn column(&self, k: usize) -> Vec<C64> {
        (0..self.n).map(|i| self.get(i, k)).collect()
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns ascending eigenvalues and the eigenvectors as columns.
pub fn eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.n;
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = m.data.iter().map(|x| x.norm_sqr()).sum::<f64>().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).norm_sqr())
            .sum();
        if off <= JACOBI_TOL * JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, new, v.get(i, old));
        }
    }
    (values, vectors)
}

fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let n = m.n;
    let apq = m.get(p, q);
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let phase = apq / abs;
    let theta = (m.get(q, q).re - m.get(p, p).re) / (2.0 * abs);
    let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
    let c = 1.0 / sqrt(t * t + 1.0);
    let s = t * c;
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;
    for k in 0..n {
        let (akp, akq) = (m.get(k, p), m.get(k, q));
        m.set(k, p, akp * u_pp + akq * u_qp);
        m.set(k, q, akp * u_pq + akq * u_qq);
        let (vkp, vkq) = (v.get(k, p), v.get(k, q));
        v.set(k, p, vkp * u_pp + vkq * u_qp);
        v.set(k, q, vkp * u_pq + vkq * u_qq);
    }
    for k in 0..n {
        let (apk, aqk) = (m.get(p, k), m.get(q, k));
        m.set(p, k, u_pp.conj() * apk + u_qp.conj() * aqk);
        m.set(q, k, u_pq.conj() * apk + u_qq.conj() * aqk);
    }
    m.set(p, q, C64::new(0.0, 0.0));
    m.set(q, p, C64::new(0.0, 0.0));
    let (dp, dq) = (m.get(p, p).re, m.get(q, q).re);
    m.set(p, p, C64::new(dp, 0.0));
    m.set(q, q, C64::new(dq, 0.0));
}

/// Euclidean projection onto `{x ≥ 0, Σx = 1}`.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut shift = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumsum += x;
        let candidate = (cumsum - 1.0) / (i + 1) as f64;
        if x - candidate > 0.0 {
            shift = candidate;
        }
    }
    v.iter().map(|x| (x - shift).max(0.0)).collect()
}

/// Numerical rank of the matrix whose rows are `rows`, by Gaussian
/// elimination with partial pivoting.
pub fn rank(rows: &[Vec<C64>], rel_tol: f64) -> usize {
    let mut m: Vec<Vec<C64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let scale = m
        .iter()
        .flat_map(|r| r.iter().map(|x| x.norm()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let (pivot, best) = (r..m.len())
            .map(|i| (i, m[i][c].norm()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            continue;
        }
        m.swap(r, pivot);
        let pr = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            let f = row[c] / pr[c];
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pr).skip(c) {
                *x -= f * y;
            }
        }
        r += 1;
    }
    r
}

/// `a ⊗ b`
pub fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}
