use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// A Hermitian matrix `H_{jk̄}`, the coefficients of a real `(1,1)`-form
/// `i Σ H_{jk̄} dz_j ∧ dz̄_k` in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianForm {
    pub entries: DMatrix<C64>,
}

impl HermitianForm {
    pub fn zeros(n: usize) -> Self {
        HermitianForm {
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        HermitianForm {
            entries: DMatrix::identity(n, n),
        }
    }

    /// Wraps `m`, replacing it by its Hermitian part `(m + m*)/2`.
    pub fn from_matrix(m: DMatrix<C64>) -> Self {
        let mut form = HermitianForm { entries: m };
        form.symmetrize();
        form
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        HermitianForm {
            entries: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(d[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.entries[(j, k)]
    }

    pub fn symmetrize(&mut self) {
        let adj = self.entries.adjoint();
        self.entries = (&self.entries + adj) * C64::new(0.5, 0.0);
    }

    /// `max |H − H*|` over entries.
    pub fn hermitian_defect(&self) -> f64 {
        let d = &self.entries - self.entries.adjoint();
        d.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianForm {
            entries: &self.entries * C64::new(s, 0.0),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianForm {
            entries: &self.entries + &other.entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianForm {
            entries: &self.entries - &other.entries,
        }
    }

    /// Embeds an `n×n` block in the top-left of an `(n+1)×(n+1)` form whose
    /// last row and column vanish.
    pub fn pad_fiber(&self) -> Self {
        let n = self.dim();
        let mut out = DMatrix::zeros(n + 1, n + 1);
        out.view_mut((0, 0), (n, n)).copy_from(&self.entries);
        HermitianForm { entries: out }
    }

    /// The top-left `n×n` block.
    pub fn block(&self, n: usize) -> Self {
        HermitianForm {
            entries: self.entries.view((0, 0), (n, n)).into_owned(),
        }
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(f64::NAN)
    }

    /// Lower-triangular `L` with `H = L L*`, or `None` unless `H` is
    /// positive definite. (The library factorization takes complex square
    /// roots of the pivots and so never rejects an indefinite matrix.)
    fn cholesky_factor(&self) -> Option<DMatrix<C64>> {
        let n = self.dim();
        let a = &self.entries;
        let mut l = DMatrix::<C64>::zeros(n, n);
        for j in 0..n {
            let d = a[(j, j)].re - (0..j).map(|k| l[(j, k)].norm_sqr()).sum::<f64>();
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let ljj = d.sqrt();
            l[(j, j)] = C64::new(ljj, 0.0);
            for i in j + 1..n {
                let s: C64 = (0..j).map(|k| l[(i, k)] * l[(j, k)].conj()).sum();
                l[(i, j)] = (a[(i, j)] - s) / ljj;
            }
        }
        if l.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return None;
        }
        Some(l)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.cholesky_factor().is_some()
    }

    /// `log det H` for positive-definite `H`.
    pub fn log_det(&self) -> Result<f64> {
        let l = self
            .cholesky_factor()
            .ok_or_else(|| Error::InvalidMetric("determinant is not positive".into()))?;
        Ok(2.0 * l.diagonal().iter().map(|z| z.re.ln()).sum::<f64>())
    }

    /// `det H` as a real number (Hermitian matrices have real determinant).
    pub fn det(&self) -> f64 {
        self.entries.determinant().re
    }

    /// `L⁻¹ A L⁻*` where `self = L L*`; `A` is then measured in `self`.
    pub fn whiten(&self, a: &HermitianForm) -> Result<HermitianForm> {
        let l = self.cholesky_factor().ok_or(Error::Singular)?;
        let y = l
            .solve_lower_triangular(&a.entries)
            .ok_or(Error::Singular)?;
        let w = l
            .solve_lower_triangular(&y.adjoint())
            .ok_or(Error::Singular)?;
        Ok(HermitianForm::from_matrix(w.adjoint()))
    }

    pub fn frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Rows of `[re, im]` pairs, for serialization.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|j| {
                (0..self.dim())
                    .map(|k| {
                        let z = self.entries[(j, k)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }
}
