//! Adjacency spectra.

use nalgebra::{DMatrix, SymmetricTridiagonal};
use serde::Serialize;

use crate::error::SpectralError;
use crate::graph::{AdjacencyMatrix, SimpleGraph, WeightedMultigraph};

/// Sorted spectrum of an adjacency matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// `max(lambda2, |lambda_n|)`.
    pub lambda: f64,
    pub lambda2: f64,
}

impl SpectralReport {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Result<Self, SpectralError> {
        if eigenvalues.len() < 2 {
            return Err(SpectralError::TooSmall(eigenvalues.len()));
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let lambda2 = eigenvalues[1];
        let last = *eigenvalues.last().unwrap();
        Ok(SpectralReport {
            lambda: lambda2.max(last.abs()),
            lambda2,
            eigenvalues,
        })
    }

    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }
}

/// Eigenvalues of a dense symmetric row-major `n x n` matrix, unsorted.
///
/// Householder reduction to tridiagonal form followed by implicit QL with
/// Wilkinson shifts, capped at `100 n` QL iterations in total.
pub fn symmetric_eigenvalues(n: usize, entries: &[f64]) -> Result<Vec<f64>, SpectralError> {
    assert_eq!(entries.len(), n * n, "matrix is not n x n");
    if n <= 1 {
        return Ok(entries.to_vec());
    }
    let tri = SymmetricTridiagonal::new(DMatrix::from_row_slice(n, n, entries));
    let mut diag: Vec<f64> = tri.diagonal().iter().copied().collect();
    let mut off: Vec<f64> = tri.off_diagonal().iter().copied().collect();
    off.push(0.0);
    tridiagonal_ql(&mut diag, &mut off, 100 * n)?;
    Ok(diag)
}

/// In-place implicit QL on a symmetric tridiagonal matrix. `off[i]` couples
/// `i` and `i + 1`; on success `diag` holds the eigenvalues.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], max_iterations: usize) -> Result<(), SpectralError> {
    let n = diag.len();
    let mut iterations = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > max_iterations {
                return Err(SpectralError::NoConvergence { n, max_iterations });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

pub fn matrix_report(m: &AdjacencyMatrix) -> Result<SpectralReport, SpectralError> {
    if m.n() < 2 {
        return Err(SpectralError::TooSmall(m.n()));
    }
    SpectralReport::from_eigenvalues(symmetric_eigenvalues(m.n(), &m.to_f64())?)
}

pub fn spectral_report(g: &WeightedMultigraph) -> Result<SpectralReport, SpectralError> {
    matrix_report(&g.adjacency_matrix())
}

pub fn simple_spectral_report(g: &SimpleGraph) -> Result<SpectralReport, SpectralError> {
    matrix_report(&g.adjacency_matrix())
}

/// Rayleigh quotient `x^T A x / x^T x` of a weighted graph in canonical order.
pub fn rayleigh_quotient(g: &WeightedMultigraph, x: &[f64]) -> f64 {
    assert_eq!(x.len(), g.vertex_count());
    let index = g.index();
    let quad: f64 = g
        .edges()
        .map(|(a, b, w)| 2.0 * w as f64 * x[index[&a]] * x[index[&b]])
        .sum();
    quad / x.iter().map(|v| v * v).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Degree;
    use crate::name::VertexName;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn doubled_k4_spectrum() {
        let mut g = WeightedMultigraph::new(Degree::new(6).unwrap());
        for a in 0..4 {
            for b in (a + 1)..4 {
                g.set_weight(VertexName::root(a), VertexName::root(b), 2)
                    .unwrap();
            }
        }
        let r = spectral_report(&g).unwrap();
        assert!(close(r.lambda1(), 6.0));
        assert!(r.eigenvalues[1..].iter().all(|&e| close(e, -2.0)));
        assert!(close(r.lambda, 2.0));
    }

    #[test]
    fn eight_cycle_second_eigenvalue() {
        let mut g = SimpleGraph::new();
        for k in 0..8u32 {
            g.add_edge(VertexName::root(k), VertexName::root((k + 1) % 8))
                .unwrap();
        }
        let r = simple_spectral_report(&g).unwrap();
        assert!(close(r.lambda1(), 2.0));
        assert!(close(r.lambda2, 2f64.sqrt()));
        assert!(close(r.lambda_min(), -2.0));
    }

    #[test]
    fn matches_nalgebra_on_a_dense_matrix() {
        let n = 9;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = ((i * 7 + j * 3) % 11) as f64 - 5.0;
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
        let mut ours = symmetric_eigenvalues(n, &m).unwrap();
        let mut reference: Vec<f64> = nalgebra::SymmetricEigen::new(DMatrix::from_row_slice(n, n, &m))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ours.sort_by(f64::total_cmp);
        reference.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn iteration_cap_is_reported() {
        let mut diag = vec![0.0, 0.0, 0.0];
        let mut off = vec![1.0, 1.0, 0.0];
        assert_eq!(
            tridiagonal_ql(&mut diag, &mut off, 0),
            Err(SpectralError::NoConvergence { n: 3, max_iterations: 0 })
        );
    }

    #[test]
    fn single_vertex_is_rejected() {
        assert_eq!(
            SpectralReport::from_eigenvalues(vec![0.0]),
            Err(SpectralError::TooSmall(1))
        );
    }

    #[test]
    fn rayleigh_of_top_eigenvector_is_degree() {
        let mut g = WeightedMultigraph::new(Degree::new(6).unwrap());
        for a in 0..4 {
            for b in (a + 1)..4 {
                g.set_weight(VertexName::root(a), VertexName::root(b), 2)
                    .unwrap();
            }
        }
        assert!(close(rayleigh_quotient(&g, &[1.0; 4]), 6.0));
        assert!(close(rayleigh_quotient(&g, &[1.0, -1.0, 0.0, 0.0]), -2.0));
    }
}
