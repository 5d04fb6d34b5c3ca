use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector};

use super::{normal, CiQuery, CiTester, MarkovBoundary, QueryCounter};
use crate::{Error, Result, VertexSet};

pub const DEFAULT_ALPHA: f64 = 0.01;

const R_CLAMP: f64 = 1.0 - 1e-12;
const MIN_RESIDUAL_VARIANCE: f64 = 1e-12;

/// `N × n` samples (row-major) with the sample correlation matrix cached.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    num_samples: usize,
    num_vars: usize,
    values: Vec<f64>,
    corr: Vec<f64>,
}

impl DataMatrix {
    pub fn new(num_samples: usize, num_vars: usize, values: Vec<f64>) -> Result<Self> {
        if num_samples == 0 || num_vars == 0 {
            return Err(Error::invalid(
                "data matrix needs at least one sample and one variable",
            ));
        }
        if values.len() != num_samples * num_vars {
            return Err(Error::invalid(format!(
                "expected {num_samples} x {num_vars} = {} values, got {}",
                num_samples * num_vars,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "sample {} variable {}",
                i / num_vars,
                i % num_vars
            )));
        }
        let corr = correlation_matrix(num_samples, num_vars, &values)?;
        Ok(DataMatrix {
            num_samples,
            num_vars,
            values,
            corr,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let num_vars = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != num_vars) {
            return Err(Error::invalid(format!("row {i} has a different width")));
        }
        Self::new(rows.len(), num_vars, rows.concat())
    }

    pub fn num_samples(&self) -> usize {
        self.num_samples
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn get(&self, sample: usize, var: usize) -> f64 {
        self.values[sample * self.num_vars + var]
    }

    pub fn row(&self, sample: usize) -> &[f64] {
        &self.values[sample * self.num_vars..(sample + 1) * self.num_vars]
    }

    pub fn column(&self, var: usize) -> Vec<f64> {
        (0..self.num_samples).map(|s| self.get(s, var)).collect()
    }

    pub fn correlation(&self, a: usize, b: usize) -> f64 {
        self.corr[a * self.num_vars + b]
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        if let Some(&c) = columns.iter().find(|&&c| c >= self.num_vars) {
            return Err(Error::invalid(format!("column {c} out of range")));
        }
        let mut values = Vec::with_capacity(self.num_samples * columns.len());
        for s in 0..self.num_samples {
            values.extend(columns.iter().map(|&c| self.get(s, c)));
        }
        Self::new(self.num_samples, columns.len(), values)
    }
}

fn correlation_matrix(n_s: usize, n_v: usize, values: &[f64]) -> Result<Vec<f64>> {
    let mut mean = vec![0.0; n_v];
    for row in values.chunks_exact(n_v) {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n_s as f64;
    }
    let mut cov = vec![0.0; n_v * n_v];
    let mut centered = vec![0.0; n_v];
    for row in values.chunks_exact(n_v) {
        for ((c, v), m) in centered.iter_mut().zip(row).zip(&mean) {
            *c = v - m;
        }
        for i in 0..n_v {
            let ci = centered[i];
            for j in i..n_v {
                cov[i * n_v + j] += ci * centered[j];
            }
        }
    }
    let sd: Vec<f64> = (0..n_v).map(|i| libm::sqrt(cov[i * n_v + i])).collect();
    if let Some(i) = sd.iter().position(|&s| s <= 0.0 || s.is_nan()) {
        return Err(Error::invalid(format!("variable {i} has zero variance")));
    }
    let mut corr = vec![0.0; n_v * n_v];
    for i in 0..n_v {
        corr[i * n_v + i] = 1.0;
        for j in i + 1..n_v {
            let r = (cov[i * n_v + j] / (sd[i] * sd[j])).clamp(-1.0, 1.0);
            corr[i * n_v + j] = r;
            corr[j * n_v + i] = r;
        }
    }
    Ok(corr)
}

/// Gaussian partial-correlation test with the Fisher z-transform.
#[derive(Debug)]
pub struct FisherZTester {
    data: DataMatrix,
    alpha: f64,
    critical: f64,
    counter: QueryCounter,
}

impl FisherZTester {
    pub fn new(data: DataMatrix, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(FisherZTester {
            critical: normal::standard_normal_quantile(1.0 - alpha / 2.0),
            data,
            alpha,
            counter: QueryCounter::default(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn data(&self) -> &DataMatrix {
        &self.data
    }

    /// Partial correlation of `x` and `y` given `z`.
    pub fn partial_correlation(&self, q: CiQuery) -> Result<f64> {
        q.check_range(self.data.num_vars)?;
        let singular = || Error::SingularMatrix {
            x: q.x,
            y: q.y,
            z: q.z,
        };
        let r = |a: usize, b: usize| self.data.correlation(a, b);
        if q.z.is_empty() {
            return Ok(r(q.x, q.y));
        }
        let zs: Vec<usize> = q.z.iter().collect();
        let k = zs.len();
        let rzz = DMatrix::from_fn(k, k, |i, j| r(zs[i], zs[j]));
        let chol = Cholesky::new(rzz).ok_or_else(singular)?;
        let rzx = DVector::from_fn(k, |i, _| r(zs[i], q.x));
        let rzy = DVector::from_fn(k, |i, _| r(zs[i], q.y));
        let bx = chol.solve(&rzx);
        let by = chol.solve(&rzy);
        let vxx = 1.0 - rzx.dot(&bx);
        let vyy = 1.0 - rzy.dot(&by);
        let vxy = r(q.x, q.y) - rzx.dot(&by);
        if !(vxx > MIN_RESIDUAL_VARIANCE && vyy > MIN_RESIDUAL_VARIANCE) {
            return Err(singular());
        }
        Ok(vxy / libm::sqrt(vxx * vyy))
    }

    /// Fisher z statistic for a partial correlation with `k` conditioning
    /// variables.
    pub fn statistic(&self, r: f64, k: usize) -> f64 {
        let r = r.clamp(-R_CLAMP, R_CLAMP);
        let dof = (self.data.num_samples - k - 3) as f64;
        0.5 * libm::log((1.0 + r) / (1.0 - r)) * libm::sqrt(dof)
    }

    fn require_samples(&self, q: CiQuery) -> Result<()> {
        let needed = q.z.len() + 3;
        if self.data.num_samples <= needed {
            return Err(Error::InsufficientSamples {
                x: q.x,
                y: q.y,
                z: q.z,
                needed,
                have: self.data.num_samples,
            });
        }
        Ok(())
    }

    fn decide(&self, r: f64, k: usize) -> Result<bool> {
        let t = self.statistic(r, k);
        if !t.is_finite() {
            return Err(Error::NonFinite(format!("Fisher z statistic for r = {r}")));
        }
        Ok(libm::fabs(t) <= self.critical)
    }
}

impl CiTester for FisherZTester {
    fn num_vars(&self) -> usize {
        self.data.num_vars
    }

    fn test(&self, q: CiQuery) -> Result<bool> {
        q.check_range(self.data.num_vars)?;
        self.require_samples(q)?;
        let r = self.partial_correlation(q)?;
        self.counter.add(1);
        self.decide(r, q.z.len())
    }

    fn query_count(&self) -> u64 {
        self.counter.get()
    }

    /// All pairwise full-conditioning tests from one precision matrix.
    fn markov_boundaries(&self, vs: VertexSet) -> Result<MarkovBoundary> {
        let idx: Vec<usize> = vs.iter().collect();
        let m = idx.len();
        let mut mb = MarkovBoundary::empty(self.data.num_vars, vs);
        if m < 2 {
            return Ok(mb);
        }
        let first = CiQuery {
            x: idx[0],
            y: idx[1],
            z: vs.without(idx[0]).without(idx[1]),
        };
        self.require_samples(first)?;
        let rs = DMatrix::from_fn(m, m, |i, j| self.data.correlation(idx[i], idx[j]));
        let precision = match Cholesky::new(rs) {
            Some(c) => c.inverse(),
            None => {
                return Err(Error::SingularMatrix {
                    x: first.x,
                    y: first.y,
                    z: first.z,
                })
            }
        };
        for i in 0..m {
            for j in i + 1..m {
                let (pii, pjj) = (precision[(i, i)], precision[(j, j)]);
                if !(pii > 0.0 && pjj > 0.0) {
                    return Err(Error::SingularMatrix {
                        x: idx[i],
                        y: idx[j],
                        z: vs.without(idx[i]).without(idx[j]),
                    });
                }
                let r = -precision[(i, j)] / libm::sqrt(pii * pjj);
                self.counter.add(1);
                if !self.decide(r, m - 2)? {
                    mb.link(idx[i], idx[j]);
                }
            }
        }
        Ok(mb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci::markov_boundaries;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian_chain(n_samples: usize, seed: u64) -> DataMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = Vec::with_capacity(n_samples * 3);
        for _ in 0..n_samples {
            let e: [f64; 3] = core::array::from_fn(|_| StandardNormal.sample(&mut rng));
            let x1 = e[0];
            let x2 = 1.2 * x1 + e[1];
            let x3 = -1.3 * x2 + e[2];
            values.extend([x1, x2, x3]);
        }
        DataMatrix::new(n_samples, 3, values).unwrap()
    }

    #[test]
    fn correlation_matrix_is_unit_diagonal_symmetric() {
        let d = gaussian_chain(500, 1);
        for i in 0..3 {
            assert_eq!(d.correlation(i, i), 1.0);
            for j in 0..3 {
                assert_eq!(d.correlation(i, j), d.correlation(j, i));
            }
        }
    }

    #[test]
    fn rejects_degenerate_data() {
        assert!(DataMatrix::new(0, 2, vec![]).is_err());
        assert!(DataMatrix::new(3, 2, vec![1.0, 2.0, 1.0, 3.0, 1.0, 4.0]).is_err());
        assert!(DataMatrix::new(2, 1, vec![1.0, f64::NAN]).is_err());
        assert!(DataMatrix::new(2, 2, vec![1.0]).is_err());
    }

    #[test]
    fn perfect_correlation_is_dependent() {
        let d =
            DataMatrix::new(6, 2, vec![1., 1., 2., 2., 3., 3., 5., 5., 4., 4., 0., 0.]).unwrap();
        let t = FisherZTester::new(d, DEFAULT_ALPHA).unwrap();
        assert!(!t
            .test(CiQuery::new(0, 1, VertexSet::EMPTY).unwrap())
            .unwrap());
    }

    #[test]
    fn chain_partial_independence() {
        let t = FisherZTester::new(gaussian_chain(2000, 7), DEFAULT_ALPHA).unwrap();
        let r = t
            .partial_correlation(CiQuery::new(0, 2, VertexSet::singleton(1)).unwrap())
            .unwrap();
        assert!(r.abs() < 0.1);
        assert!(!t
            .test(CiQuery::new(0, 2, VertexSet::EMPTY).unwrap())
            .unwrap());
        assert!(t.query_count() == 1);
    }

    #[test]
    fn insufficient_samples() {
        let t = FisherZTester::new(gaussian_chain(4, 3), DEFAULT_ALPHA).unwrap();
        let err = t
            .test(CiQuery::new(0, 2, VertexSet::singleton(1)).unwrap())
            .unwrap_err();
        assert!(matches!(
            err,
            Error::InsufficientSamples {
                needed: 4,
                have: 4,
                ..
            }
        ));
    }

    #[test]
    fn singular_submatrix() {
        // x2 duplicates x1
        let mut values = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            let c: f64 = StandardNormal.sample(&mut rng);
            values.extend([a, a, b, c]);
        }
        let t = FisherZTester::new(DataMatrix::new(50, 4, values).unwrap(), 0.01).unwrap();
        let q = CiQuery::new(2, 3, [0, 1].into_iter().collect()).unwrap();
        assert!(matches!(t.test(q), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn precision_boundaries_match_pairwise() {
        let t = FisherZTester::new(gaussian_chain(300, 11), DEFAULT_ALPHA).unwrap();
        let all = VertexSet::full(3);
        let fast = markov_boundaries(&t, all).unwrap();
        let before = t.query_count();
        let mut slow = MarkovBoundary::empty(3, all);
        for x in 0..3 {
            for y in x + 1..3 {
                let q = CiQuery::new(x, y, all.without(x).without(y)).unwrap();
                let r = t.partial_correlation(q).unwrap();
                if !t.decide(r, 1).unwrap() {
                    slow.link(x, y);
                }
            }
        }
        assert_eq!(fast, slow);
        assert_eq!(before, 3);
        assert_eq!(fast.of(0), VertexSet::singleton(1));
    }
}
