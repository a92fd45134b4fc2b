//! The exemplar (k-medoid loss reduction) objective
//! `f(S) = L({e0}) - L(S ∪ {e0})` with
//! `L(A) = (1/|V'|) Σ_{v ∈ V'} min_{s ∈ A} d(s, v)` and squared Euclidean
//! distance `d`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::ground::ElementSet;
use crate::oracle::Objective;

/// A dense `n × dim` matrix of item vectors, row-major.
#[derive(Clone, Debug)]
pub struct VectorDataset {
    n: usize,
    dim: usize,
    data: Vec<f64>,
}

impl VectorDataset {
    pub fn new(n: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || dim == 0 {
            return Err(Error::Domain("dataset must be non-empty".into()));
        }
        if data.len() != n * dim {
            return Err(Error::Domain(format!(
                "expected {n} x {dim} = {} entries, got {}",
                n * dim,
                data.len()
            )));
        }
        Ok(VectorDataset { n, dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let dim = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::Domain("ragged rows in dataset".into()));
            }
            data.extend_from_slice(row);
        }
        Self::new(n, dim, data)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Column-wise means.
    pub fn mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for i in 0..self.n {
            for (m, x) in mean.iter_mut().zip(self.row(i)) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= self.n as f64;
        }
        mean
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Reference element and estimation subsample for [`ExemplarObjective`].
#[derive(Clone, Debug, Default)]
pub struct ExemplarConfig {
    /// Dissimilarities are measured against this vector when `S` is empty.
    /// `None` means the zero vector.
    pub reference: Option<Vec<f64>>,
    /// Item ids over which the loss is averaged; `None` means all of `V`.
    /// Must be distinct and in range.
    pub subsample: Option<Vec<u32>>,
}

/// `f(S) = L({e0}) - L(S ∪ {e0})`, normalized and monotone submodular by
/// construction.
pub struct ExemplarObjective {
    data: VectorDataset,
    /// Ids the loss is averaged over.
    sample: Vec<u32>,
    /// `d(e0, v)` for each `v` in the sample.
    reference_dist: Vec<f64>,
    base_loss: f64,
    /// Cached `d(s, ·)` rows over the sample, keyed by element id.
    rows: RwLock<HashMap<u32, Arc<Vec<f64>>>>,
}

impl ExemplarObjective {
    pub fn new(data: VectorDataset, cfg: ExemplarConfig) -> Result<Self> {
        let reference = match cfg.reference {
            Some(r) => {
                if r.len() != data.dim() {
                    return Err(Error::Domain(format!(
                        "reference element has dimension {}, dataset has {}",
                        r.len(),
                        data.dim()
                    )));
                }
                r
            }
            None => vec![0.0; data.dim()],
        };
        let sample = match cfg.subsample {
            Some(ids) => {
                let mut seen = vec![false; data.len()];
                for &id in &ids {
                    if id as usize >= data.len() {
                        return Err(Error::Domain(format!(
                            "subsample id {id} out of range for {} items",
                            data.len()
                        )));
                    }
                    if seen[id as usize] {
                        return Err(Error::Domain(format!("duplicate subsample id {id}")));
                    }
                    seen[id as usize] = true;
                }
                if ids.is_empty() {
                    return Err(Error::Domain("subsample must be non-empty".into()));
                }
                ids
            }
            None => (0..data.len() as u32).collect(),
        };
        let reference_dist: Vec<f64> = sample
            .iter()
            .map(|&v| squared_distance(&reference, data.row(v as usize)))
            .collect();
        let base_loss = reference_dist.iter().sum::<f64>() / sample.len() as f64;
        Ok(ExemplarObjective {
            data,
            sample,
            reference_dist,
            base_loss,
            rows: RwLock::new(HashMap::new()),
        })
    }

    /// `L({e0})`, the loss with only the reference element.
    pub fn base_loss(&self) -> f64 {
        self.base_loss
    }

    fn dist_row(&self, e: u32) -> Arc<Vec<f64>> {
        if let Some(row) = self.rows.read().unwrap().get(&e) {
            return Arc::clone(row);
        }
        let row: Vec<f64> = self
            .sample
            .iter()
            .map(|&v| squared_distance(self.data.row(e as usize), self.data.row(v as usize)))
            .collect();
        let row = Arc::new(row);
        self.rows
            .write()
            .unwrap()
            .entry(e)
            .or_insert_with(|| Arc::clone(&row));
        row
    }

    fn loss(&self, s: &ElementSet) -> f64 {
        let rows: Vec<Arc<Vec<f64>>> = s.iter().map(|e| self.dist_row(e.0)).collect();
        let mut total = 0.0;
        for (i, &ref_d) in self.reference_dist.iter().enumerate() {
            let mut best = ref_d;
            for row in &rows {
                if row[i] < best {
                    best = row[i];
                }
            }
            total += best;
        }
        total / self.sample.len() as f64
    }
}

impl Objective for ExemplarObjective {
    fn ground_size(&self) -> usize {
        self.data.len()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        self.base_loss - self.loss(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ElementId;

    fn two_points() -> VectorDataset {
        VectorDataset::from_rows(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap()
    }

    #[test]
    fn empty_set_is_zero() {
        let obj = ExemplarObjective::new(two_points(), ExemplarConfig::default()).unwrap();
        assert_eq!(obj.value(&ElementSet::empty(2)), 0.0);
    }

    #[test]
    fn single_exemplar_hand_value() {
        // L({e0}) = (1 + 1)/2 = 1; L({(1,0), e0}) = (0 + 1)/2 = 0.5.
        let obj = ExemplarObjective::new(two_points(), ExemplarConfig::default()).unwrap();
        let s = ElementSet::from_ids(2, [ElementId(0)]);
        assert_eq!(obj.value(&s), 0.5);
    }

    #[test]
    fn full_set_recovers_base_loss() {
        let obj = ExemplarObjective::new(two_points(), ExemplarConfig::default()).unwrap();
        let all = ElementSet::from_ids(2, [ElementId(0), ElementId(1)]);
        assert_eq!(obj.value(&all), obj.base_loss());
        assert_eq!(obj.base_loss(), 1.0);
    }

    #[test]
    fn full_subsample_equals_unsubsampled() {
        let data = VectorDataset::from_rows(vec![
            vec![0.5, 2.0],
            vec![-1.0, 0.25],
            vec![3.0, -0.5],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let plain = ExemplarObjective::new(data.clone(), ExemplarConfig::default()).unwrap();
        let sub = ExemplarObjective::new(
            data,
            ExemplarConfig {
                reference: None,
                subsample: Some(vec![0, 1, 2, 3]),
            },
        )
        .unwrap();
        for mask in 0u64..16 {
            let s = ElementSet::from_mask(4, mask);
            assert_eq!(plain.value(&s), sub.value(&s));
        }
    }

    #[test]
    fn rejects_bad_config() {
        let data = two_points();
        assert!(ExemplarObjective::new(
            data.clone(),
            ExemplarConfig {
                reference: Some(vec![0.0; 3]),
                subsample: None,
            }
        )
        .is_err());
        assert!(ExemplarObjective::new(
            data.clone(),
            ExemplarConfig {
                reference: None,
                subsample: Some(vec![0, 0]),
            }
        )
        .is_err());
        assert!(ExemplarObjective::new(
            data,
            ExemplarConfig {
                reference: None,
                subsample: Some(vec![5]),
            }
        )
        .is_err());
        assert!(VectorDataset::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    // Direct evaluation of the loss definition, independent of the cached
    // implementation path.
    fn direct_value(data: &VectorDataset, s: &ElementSet) -> f64 {
        let e0 = vec![0.0; data.dim()];
        let loss = |members: &[Vec<f64>]| -> f64 {
            let mut total = 0.0;
            for v in 0..data.len() {
                let best = members
                    .iter()
                    .map(|m| squared_distance(m, data.row(v)))
                    .fold(f64::INFINITY, f64::min);
                total += best;
            }
            total / data.len() as f64
        };
        let mut with_s: Vec<Vec<f64>> = vec![e0.clone()];
        with_s.extend(s.iter().map(|e| data.row(e.index()).to_vec()));
        loss(&[e0]) - loss(&with_s)
    }

    #[test]
    fn matches_direct_definition_and_monotone() {
        let data = VectorDataset::from_rows(vec![
            vec![0.5, 2.0, -1.0],
            vec![-1.0, 0.25, 0.5],
            vec![3.0, -0.5, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![2.0, 2.0, -2.0],
        ])
        .unwrap();
        let obj = ExemplarObjective::new(data.clone(), ExemplarConfig::default()).unwrap();
        for mask in 0u64..32 {
            let s = ElementSet::from_mask(5, mask);
            let got = obj.value(&s);
            let want = direct_value(&data, &s);
            assert!(
                (got - want).abs() < 1e-12,
                "mask {mask:#b}: {got} vs {want}"
            );
            // Monotone under inclusion: check all supersets by one element.
            for e in 0..5u32 {
                let e = ElementId(e);
                if !s.contains(e) {
                    assert!(obj.value(&s.with(e)) >= got - 1e-12);
                }
            }
        }
    }
}
