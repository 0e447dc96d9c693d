//! Self-contained symmetric eigensolvers and Schur complements.
//!
//! Dense path: Householder tridiagonalization followed by implicit-shift QL
//! iteration. Sparse path: shift-invert Lanczos with full
//! reorthogonalization on top of a banded LDLᵀ factorization. The Schur
//! complement of a shifted operator onto its interface block is the discrete
//! Dirichlet-to-Neumann matrix every other module consumes.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Ldlt, SymmetricOperator};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default dimension cap for the dense path.
pub const DENSE_CUTOFF: usize = 4096;

/// Relative gap below which eigenvalues are clustered when reporting
/// multiplicities.
pub const CLUSTER_REL_TOL: f64 = 1e-8;

/// Eigenvalues in ascending order, optionally with orthonormal eigenvectors
/// (stored one vector per entry) and per-pair residual norms.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub residual_norms: Vec<f64>,
}

impl Spectrum {
    /// Number of eigenvalues strictly below `level`.
    pub fn count_below(&self, level: f64) -> usize {
        self.eigenvalues.iter().filter(|&&e| e < level).count()
    }

    /// Size of the cluster of eigenvalues within `tol` of `value`.
    pub fn cluster_size(&self, value: f64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&e| (e - value).abs() <= tol)
            .count()
    }
}

/// Dense symmetric interface operator at a fixed spectral parameter.
#[derive(Debug, Clone)]
pub struct DnMatrix {
    pub lambda: f64,
    /// Row indices of the parent operator that form the interface block.
    pub interface_dofs: Vec<usize>,
    pub entries: DenseMatrix,
}

impl DnMatrix {
    pub fn eig(&self) -> Result<Spectrum> {
        let mut m = self.entries.clone();
        m.symmetrize();
        eig_dense_matrix(&m, false)
    }
}

/// Full spectrum of a sparse symmetric operator via the dense path.
pub fn eig_dense(a: &SymmetricOperator) -> Result<Spectrum> {
    assert!(a.dim() <= DENSE_CUTOFF, "dimension above dense cutoff");
    eig_dense_matrix(&a.to_dense(), true)
}

/// Eigenvalues only; skips eigenvector accumulation, which dominates the
/// cost for repeated sweeps.
pub fn eigenvalues_dense(a: &SymmetricOperator) -> Result<Vec<f64>> {
    assert!(a.dim() <= DENSE_CUTOFF, "dimension above dense cutoff");
    Ok(eig_dense_matrix(&a.to_dense(), false)?.eigenvalues)
}

/// Dense symmetric eigendecomposition. Only the lower triangle of `m` is
/// referenced. Rotation budget is 50·n²; exceeding it signals pathological
/// input.
pub fn eig_dense_matrix(m: &DenseMatrix, want_vectors: bool) -> Result<Spectrum> {
    let n = m.n();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: Some(Vec::new()).filter(|_| want_vectors),
            residual_norms: Vec::new(),
        });
    }
    // symmetrized working copy
    let mut z = DenseMatrix::zeros(n);
    for i in 0..n {
        z.set(i, i, m.get(i, i));
        for j in 0..i {
            let v = m.get(i, j);
            z.set(i, j, v);
            z.set(j, i, v);
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut z, &mut d, &mut e);
    ql_implicit(&mut d, &mut e, if want_vectors { Some(&mut z) } else { None })?;

    // sort ascending, carrying eigenvector columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let eigenvectors = want_vectors.then(|| {
        order
            .iter()
            .map(|&c| (0..n).map(|r| z.get(r, c)).collect::<Vec<f64>>())
            .collect::<Vec<_>>()
    });
    let residual_norms = match &eigenvectors {
        Some(vecs) => {
            let scale = m.norm_inf().max(f64::MIN_POSITIVE);
            let mut res = Vec::with_capacity(n);
            let mut y = vec![0.0; n];
            for (lam, v) in eigenvalues.iter().zip(vecs) {
                let mut sym = m.clone();
                // residual against the symmetrized input
                sym.symmetrize();
                sym.matvec(v, &mut y);
                let r: f64 = y
                    .iter()
                    .zip(v)
                    .map(|(yi, xi)| (yi - lam * xi) * (yi - lam * xi))
                    .sum::<f64>()
                    .sqrt();
                res.push(r / scale);
            }
            res
        }
        None => vec![0.0; n],
    };
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residual_norms,
    })
}

/// Householder reduction to tridiagonal form; `z` is overwritten with the
/// accumulated orthogonal transformation.
fn tridiagonalize(z: &mut DenseMatrix, d: &mut [f64], e: &mut [f64]) {
    let n = z.n();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| z.get(i, k).abs()).sum();
            if scale == 0.0 {
                e[i] = z.get(i, l);
            } else {
                for k in 0..=l {
                    let v = z.get(i, k) / scale;
                    z.set(i, k, v);
                    h += v * v;
                }
                let f = z.get(i, l);
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z.set(i, l, f - g);
                let mut fsum = 0.0;
                for j in 0..=l {
                    z.set(j, i, z.get(i, j) / h);
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z.get(j, k) * z.get(i, k);
                    }
                    for k in (j + 1)..=l {
                        g += z.get(k, j) * z.get(i, k);
                    }
                    e[j] = g / h;
                    fsum += e[j] * z.get(i, j);
                }
                let hh = fsum / (h + h);
                for j in 0..=l {
                    let f = z.get(i, j);
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let v = z.get(j, k) - (f * e[k] + g * z.get(i, k));
                        z.set(j, k, v);
                    }
                }
            }
        } else {
            e[i] = z.get(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z.get(i, k) * z.get(k, j);
                }
                for k in 0..i {
                    let v = z.get(k, j) - g * z.get(k, i);
                    z.set(k, j, v);
                }
            }
        }
        d[i] = z.get(i, i);
        z.set(i, i, 1.0);
        for j in 0..i {
            z.set(j, i, 0.0);
            z.set(i, j, 0.0);
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix. When `z`
/// is given, its columns accumulate the eigenvectors of the original matrix.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut DenseMatrix>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let rotation_cap = 50 * n * n;
    let mut rotations = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if rotations >= rotation_cap {
                return Err(Error::ConvergenceFailure {
                    iterations: rotations,
                    detail: "implicit-shift QL exceeded its rotation budget".into(),
                });
            }
            // Wilkinson-style shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut i = m;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        f = z.get(k, i + 1);
                        z.set(k, i + 1, s * z.get(k, i) + c * f);
                        z.set(k, i, c * z.get(k, i) - s * f);
                    }
                }
                rotations += 1;
            }
            if r == 0.0 && i > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// The `m` lowest eigenpairs of `a` by shift-invert Lanczos with full
/// reorthogonalization. `shift` must keep clear of the spectrum (below it,
/// or inside a gap); a shift on the spectrum surfaces as
/// [`Error::FactorizationError`].
pub fn eig_lowest(a: &SymmetricOperator, m: usize, shift: f64) -> Result<Spectrum> {
    let n = a.dim();
    assert!(m >= 1 && m <= n, "requested {m} of {n} eigenpairs");
    let factor = Ldlt::factor(a, shift)?;
    let below = factor.negative_pivots();

    let max_steps = (4 * m + 40).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);
    basis.push(v);

    let tol = 1e-12;
    let mut converged: Option<(Vec<f64>, Vec<Vec<f64>>)> = None;
    for step in 0..max_steps {
        let mut w = basis[step].clone();
        factor.solve(&mut w);
        let alpha = dot(&w, &basis[step]);
        alphas.push(alpha);
        // full reorthogonalization, twice for safety
        for _ in 0..2 {
            for b in &basis {
                let proj = dot(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let beta = norm(&w);
        let tridiag_done = beta < 1e-14 || step + 1 == max_steps;
        if !tridiag_done {
            betas.push(beta);
            for wi in w.iter_mut() {
                *wi /= beta;
            }
            basis.push(w);
        }

        let k = alphas.len();
        if k >= m.min(n) && (tridiag_done || step % 2 == 1 || k >= 2 * m) {
            let (theta, y) = tridiag_eig(&alphas, &betas[..k - 1])?;
            // largest positive thetas of (A - shift)^-1 are the eigenvalues
            // of A closest above the shift
            let mut idx: Vec<usize> = (0..k).collect();
            idx.sort_by(|&i, &j| theta[j].partial_cmp(&theta[i]).unwrap());
            let picked: Vec<usize> = idx.into_iter().take(m).collect();
            let last_beta = if tridiag_done { 0.0 } else { *betas.last().unwrap() };
            let all_ok = picked.iter().all(|&i| {
                theta[i] > 0.0 && (last_beta * y[i][k - 1]).abs() <= tol.max(1e-10 * theta[i].abs())
            }) || tridiag_done;
            if all_ok && picked.iter().all(|&i| theta[i] > 0.0) {
                let mut pairs: Vec<(f64, Vec<f64>)> = picked
                    .iter()
                    .map(|&i| {
                        let lam = shift + 1.0 / theta[i];
                        let mut x = vec![0.0; n];
                        for (j, b) in basis.iter().take(k).enumerate() {
                            let c = y[i][j];
                            for (xi, bi) in x.iter_mut().zip(b) {
                                *xi += c * bi;
                            }
                        }
                        normalize(&mut x);
                        (lam, x)
                    })
                    .collect();
                pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                let vectors: Vec<Vec<f64>> = pairs.into_iter().map(|p| p.1).collect();
                converged = Some((values, vectors));
                if !tridiag_done && !all_ok {
                    converged = None;
                } else {
                    break;
                }
            }
            if tridiag_done {
                break;
            }
        }
        if tridiag_done {
            break;
        }
    }

    let (eigenvalues, eigenvectors) = converged.ok_or(Error::ConvergenceFailure {
        iterations: max_steps,
        detail: "shift-invert Lanczos did not converge".into(),
    })?;
    if below > 0 && eigenvalues.first().map_or(false, |&lo| lo > shift) {
        // the shift sits inside the spectrum; the caller asked for the
        // lowest eigenpairs but Lanczos only sees those above the shift
        return Err(Error::ConvergenceFailure {
            iterations: 0,
            detail: format!("{below} eigenvalues lie below the shift {shift}"),
        });
    }
    let scale = a.norm_inf().max(f64::MIN_POSITIVE);
    let residual_norms: Vec<f64> = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(&lam, x)| a.residual_norm(x, lam) / scale)
        .collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Some(eigenvectors),
        residual_norms,
    })
}

/// Eigen-decomposition of the small Lanczos tridiagonal (α on the diagonal,
/// β off it). Returns eigenvalues and eigenvectors as rows.
fn tridiag_eig(alphas: &[f64], betas: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let k = alphas.len();
    let mut t = DenseMatrix::zeros(k);
    for i in 0..k {
        t.set(i, i, alphas[i]);
        if i + 1 < k {
            t.set(i + 1, i, betas[i]);
            t.set(i, i + 1, betas[i]);
        }
    }
    let spec = eig_dense_matrix(&t, true)?;
    let vecs = spec.eigenvectors.unwrap();
    Ok((spec.eigenvalues, vecs))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    if n > 0.0 {
        for x in a.iter_mut() {
            *x /= n;
        }
    }
}

/// Discrete Dirichlet-to-Neumann matrix of `h_op` at spectral parameter
/// `lambda`: the Schur complement of (H − λ) onto the interface block,
/// multiplied by `scale`.
///
/// `scale` ties the DN eigenvalue −σ to the σ of the matching Robin family;
/// grid callers pass 1/h to match the interface mass h.
pub fn schur_dn(
    h_op: &SymmetricOperator,
    lambda: f64,
    interface_dofs: &[usize],
    scale: f64,
) -> Result<DnMatrix> {
    let n = h_op.dim();
    let mut is_interface = vec![false; n];
    for &b in interface_dofs {
        assert!(b < n, "interface index out of range");
        is_interface[b] = true;
    }
    let interior: Vec<usize> = (0..n).filter(|&i| !is_interface[i]).collect();
    let nb = interface_dofs.len();
    assert!(nb > 0, "empty interface block");

    let mut interior_pos = vec![usize::MAX; n];
    for (p, &i) in interior.iter().enumerate() {
        interior_pos[i] = p;
    }

    // (H - lambda) restricted to the interior, factored once
    let interior_block = h_op.principal_submatrix(&interior);
    let factor = match Ldlt::factor(&interior_block, lambda) {
        Ok(f) => f,
        Err(Error::FactorizationError { .. }) => {
            return Err(Error::InteriorResonance { lambda })
        }
        Err(e) => return Err(e),
    };

    let mut s = DenseMatrix::zeros(nb);
    for (col, &b) in interface_dofs.iter().enumerate() {
        // column b of (H - lambda)_{I,B}
        let mut rhs = vec![0.0; interior.len()];
        for &(j, v) in h_op.row(b) {
            if interior_pos[j] != usize::MAX {
                rhs[interior_pos[j]] = v;
            }
        }
        factor.solve(&mut rhs);
        for (row, &bi) in interface_dofs.iter().enumerate() {
            let mut acc = h_op.entry(bi, b);
            if row == col {
                acc -= lambda;
            }
            for &(j, v) in h_op.row(bi) {
                if interior_pos[j] != usize::MAX {
                    acc -= v * rhs[interior_pos[j]];
                }
            }
            s.set(row, col, acc * scale);
        }
    }
    Ok(DnMatrix {
        lambda,
        interface_dofs: interface_dofs.to_vec(),
        entries: s,
    })
}

/// Number of eigenvalues below −tol·scale, where scale is the spectral
/// radius estimate max|λᵢ|. Any eigenvalue inside the ±tol·scale dead band
/// makes the count ambiguous and is reported as an error.
pub fn morse_index(eigenvalues: &[f64], tol: f64) -> Result<usize> {
    let scale = eigenvalues
        .iter()
        .fold(0.0f64, |acc, &e| acc.max(e.abs()))
        .max(f64::MIN_POSITIVE);
    let band = tol * scale;
    if let Some(&bad) = eigenvalues.iter().find(|&&e| e.abs() <= band) {
        return Err(Error::ToleranceAmbiguity {
            eigenvalue: bad,
            band,
        });
    }
    Ok(eigenvalues.iter().filter(|&&e| e < -band).count())
}

/// Morse index of a DN matrix.
pub fn morse_index_dn(dn: &DnMatrix, tol: f64) -> Result<usize> {
    morse_index(&dn.eig()?.eigenvalues, tol)
}

/// Group ascending eigenvalues into clusters whose internal gaps are below
/// `rel_tol` times the spectral radius. Returns (representative, size).
pub fn cluster_eigenvalues(eigenvalues: &[f64], rel_tol: f64) -> Vec<(f64, usize)> {
    let scale = eigenvalues
        .iter()
        .fold(0.0f64, |acc, &e| acc.max(e.abs()))
        .max(f64::MIN_POSITIVE);
    let gap = rel_tol * scale;
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &e in eigenvalues {
        match out.last_mut() {
            Some((rep, count)) if (e - *rep).abs() <= gap => {
                // running mean keeps the representative centered
                *rep = (*rep * (*count as f64) + e) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => out.push((e, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dirichlet_chain(n: usize, h: f64) -> SymmetricOperator {
        let mut a = SymmetricOperator::zeros(n);
        for i in 0..n {
            a.add(i, i, 2.0 / (h * h));
            if i + 1 < n {
                a.add(i, i + 1, -1.0 / (h * h));
            }
        }
        a
    }

    #[test]
    fn dense_eig_diagonal() {
        let mut a = SymmetricOperator::zeros(4);
        for (i, v) in [3.0, -1.0, 2.0, 0.5].iter().enumerate() {
            a.add(i, i, *v);
        }
        let s = eig_dense(&a).unwrap();
        let want = [-1.0, 0.5, 2.0, 3.0];
        for (got, want) in s.eigenvalues.iter().zip(want) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn dense_eig_dirichlet_chain_closed_form() {
        let n = 40;
        let h = 1.0 / (n as f64 + 1.0);
        let a = dirichlet_chain(n, h);
        let s = eig_dense(&a).unwrap();
        for (p, lam) in s.eigenvalues.iter().enumerate() {
            let exact = (4.0 / (h * h))
                * ((p as f64 + 1.0) * std::f64::consts::PI / (2.0 * (n as f64 + 1.0)))
                    .sin()
                    .powi(2);
            assert!(
                (lam - exact).abs() <= 1e-10 * a.norm_inf(),
                "p={p}: {lam} vs {exact}"
            );
        }
        // orthonormality and residual contract
        let vecs = s.eigenvectors.as_ref().unwrap();
        for i in 0..n {
            for j in i..n {
                let d = dot(&vecs[i], &vecs[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-10, "gram({i},{j}) = {d}");
            }
        }
        assert!(s.residual_norms.iter().all(|&r| r < 1e-12));
    }

    #[test]
    fn lanczos_matches_dense_on_chain() {
        let n = 120;
        let h = 1.0 / (n as f64 + 1.0);
        let a = dirichlet_chain(n, h);
        let dense = eig_dense(&a).unwrap();
        let low = eig_lowest(&a, 6, -1.0).unwrap();
        for (got, want) in low.eigenvalues.iter().zip(&dense.eigenvalues) {
            assert!(
                (got - want).abs() <= 1e-9 * a.norm_inf(),
                "{got} vs {want}"
            );
        }
        assert!(low.residual_norms.iter().all(|&r| r < 1e-9));
    }

    #[test]
    fn lanczos_shift_between_eigenvalues() {
        let n = 60;
        let h = 1.0 / (n as f64 + 1.0);
        let a = dirichlet_chain(n, h);
        let dense = eig_dense(&a).unwrap();
        // shift into the first spectral gap; the solver still reports the
        // eigenvalues above the shift correctly
        let shift = 0.5 * (dense.eigenvalues[0] + dense.eigenvalues[1]);
        let res = eig_lowest(&a, 3, shift);
        match res {
            Ok(s) => {
                for (got, want) in s.eigenvalues.iter().zip(&dense.eigenvalues[1..]) {
                    assert!((got - want).abs() <= 1e-8 * a.norm_inf());
                }
            }
            Err(Error::ConvergenceFailure { .. }) => {
                // also acceptable: the solver refuses because eigenvalues
                // sit below the shift
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn schur_one_interior_one_interface_by_hand() {
        // H = [[2, -1], [-1, 2]], interface = {0}, interior = {1}
        // S(lambda) = (2 - lambda) - 1/(2 - lambda)
        let mut a = SymmetricOperator::zeros(2);
        a.add(0, 0, 2.0);
        a.add(1, 1, 2.0);
        a.add(0, 1, -1.0);
        let lambda = 0.7;
        let dn = schur_dn(&a, lambda, &[0], 1.0).unwrap();
        let want = (2.0 - lambda) - 1.0 / (2.0 - lambda);
        assert!((dn.entries.get(0, 0) - want).abs() < 1e-14);
    }

    #[test]
    fn schur_reports_interior_resonance() {
        let mut a = SymmetricOperator::zeros(2);
        a.add(0, 0, 2.0);
        a.add(1, 1, 3.0);
        match schur_dn(&a, 3.0, &[0], 1.0) {
            Err(Error::InteriorResonance { .. }) => {}
            other => panic!("expected interior resonance, got {other:?}"),
        }
    }

    #[test]
    fn morse_index_counts_and_dead_band() {
        assert_eq!(morse_index(&[0.5, 1.0, 2.0], 1e-10).unwrap(), 0);
        assert_eq!(morse_index(&[-3.0, -0.5, 1.0], 1e-10).unwrap(), 2);
        match morse_index(&[1e-14, 1.0], 1e-10) {
            Err(Error::ToleranceAmbiguity { .. }) => {}
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn counting_identity_on_random_operators() {
        // Haynsworth inertia additivity: Mor(S(lambda)) equals
        // #{eig(H) < lambda} - #{eig(H_II) < lambda}
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            let n = 8 + (trial % 5);
            let mut a = SymmetricOperator::zeros(n);
            for i in 0..n {
                a.add(i, i, rng.gen_range(1.0..6.0));
                if i + 1 < n {
                    a.add(i, i + 1, rng.gen_range(-1.5..1.5));
                }
                if i + 3 < n {
                    a.add(i, i + 3, rng.gen_range(-0.5..0.5));
                }
            }
            let interface: Vec<usize> = (0..n).filter(|i| i % 3 == 0).collect();
            let interior: Vec<usize> = (0..n).filter(|i| i % 3 != 0).collect();
            let lambda = rng.gen_range(0.5..7.0);
            let full = eig_dense(&a).unwrap();
            let inner = eig_dense(&a.principal_submatrix(&interior)).unwrap();
            if inner.eigenvalues.iter().any(|e| (e - lambda).abs() < 1e-6)
                || full.eigenvalues.iter().any(|e| (e - lambda).abs() < 1e-6)
            {
                continue;
            }
            let dn = schur_dn(&a, lambda, &interface, 1.0).unwrap();
            let mor = morse_index_dn(&dn, 1e-12).unwrap();
            let want = full.count_below(lambda) - inner.count_below(lambda);
            assert_eq!(mor, want, "trial {trial}");
        }
    }

    #[test]
    fn cluster_grouping() {
        let eigs = [1.0, 1.0 + 1e-12, 2.0, 5.0, 5.0 + 1e-11, 5.0 + 2e-11];
        let clusters = cluster_eigenvalues(&eigs, 1e-8);
        let sizes: Vec<usize> = clusters.iter().map(|c| c.1).collect();
        assert_eq!(sizes, vec![2, 1, 3]);
    }
}
