//! Small real-vector helpers. Vectors of different length are compared as if
//! the shorter one were padded with zeros.

/// Euclidean inner product over the common prefix; missing coordinates count as zero.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn padded(a: &[f64], len: usize) -> Vec<f64> {
    let mut out = a.to_vec();
    if out.len() < len {
        out.resize(len, 0.0);
    }
    out
}

/// `a + alpha * b`, padded to the longer length.
pub fn axpy(a: &[f64], alpha: f64, b: &[f64]) -> Vec<f64> {
    let mut out = padded(a, b.len());
    for (o, y) in out.iter_mut().zip(b) {
        *o += alpha * y;
    }
    out
}

pub fn scaled(a: &[f64], alpha: f64) -> Vec<f64> {
    a.iter().map(|x| alpha * x).collect()
}

/// Orthonormal basis of the span of `vectors`, via modified Gram-Schmidt with one
/// re-orthogonalisation pass. Directions whose residual norm falls below `cutoff`
/// are dropped. The result is deterministic in the input order.
pub fn orthonormal_span(vectors: &[Vec<f64>], cutoff: f64) -> Vec<Vec<f64>> {
    let dim = vectors.iter().map(Vec::len).max().unwrap_or(0);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut r = padded(v, dim);
        for _ in 0..2 {
            for q in &basis {
                let proj = dot(&r, q);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= proj * qi;
                }
            }
        }
        let n = norm(&r);
        if n > cutoff {
            basis.push(scaled(&r, 1.0 / n));
        }
    }
    basis
}

/// Coordinates of `v` in an orthonormal `basis`.
pub fn coordinates(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    basis.iter().map(|q| dot(v, q)).collect()
}

/// A fixed unit vector orthogonal to the unit vector `u`, in a space of
/// dimension `max(len(u), 2)`. The standard basis vector with the smallest
/// overlap with `u` is projected and normalised.
pub fn orthogonal_unit(u: &[f64]) -> Vec<f64> {
    let dim = u.len().max(2);
    let u = padded(u, dim);
    let k = (0..dim)
        .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
        .unwrap_or(0);
    let mut e = vec![0.0; dim];
    e[k] = 1.0;
    let r = axpy(&e, -dot(&e, &u), &u);
    let n = norm(&r);
    scaled(&r, 1.0 / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_pads_with_zeros() {
        assert_eq!(dot(&[1.0, 2.0], &[3.0]), 3.0);
        assert_eq!(dot(&[1.0, 2.0, 0.0], &[3.0, 1.0]), 5.0);
    }

    #[test]
    fn span_drops_dependent_vectors() {
        let vs = vec![vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0], vec![1.0, 1.0, 0.0]];
        let basis = orthonormal_span(&vs, 1e-12);
        assert_eq!(basis.len(), 2);
        assert!((dot(&basis[0], &basis[1])).abs() < 1e-15);
        let c = coordinates(&vs[2], &basis);
        assert!((norm(&c) - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_unit_is_orthogonal() {
        for u in [vec![1.0], vec![0.6, 0.8], vec![0.0, 0.0, 1.0]] {
            let w = orthogonal_unit(&u);
            assert!(dot(&w, &u).abs() < 1e-15);
            assert!((norm(&w) - 1.0).abs() < 1e-15);
        }
    }
}
