//! Validated observation batches with cached descending order statistics.

use crate::error::{Error, Result};

/// A batch of observations, validated and sorted once at construction.
///
/// Nonpositive values are accepted here: reflected left-tail data may
/// legitimately contain them below the threshold region. Estimators reject
/// them lazily when a log would touch a nonpositive order statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sorted_desc: Vec<f64>,
}

impl Sample {
    /// Validates the input and caches the descending sort.
    /// Requires at least two finite values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewObservations {
                have: values.len(),
                need: 2,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let mut sorted_desc = values.clone();
        sorted_desc.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(Self {
            values,
            sorted_desc,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Observations in input order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Observations sorted descending, so `sorted_desc()[j]` is the
    /// (j+1)-th largest value.
    pub fn sorted_desc(&self) -> &[f64] {
        &self.sorted_desc
    }

    /// The (j+1)-th largest observation.
    pub fn order_statistic(&self, j: usize) -> Result<f64> {
        if j >= self.n() {
            return Err(Error::OutOfRange {
                what: "order statistic index",
                value: j,
                lo: 0,
                hi: self.n() - 1,
            });
        }
        Ok(self.sorted_desc[j])
    }

    /// A copy of the sample with every observation multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!(
                "scale factor must be positive and finite, got {c}"
            )));
        }
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    /// Count of leading strictly positive order statistics.
    pub(crate) fn positive_prefix_len(&self) -> usize {
        self.sorted_desc.iter().take_while(|v| **v > 0.0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_descending_with_ties() {
        let s = Sample::new(vec![5.0, 5.0, 2.0, 9.0]).unwrap();
        assert_eq!(s.sorted_desc(), &[9.0, 5.0, 5.0, 2.0]);
        assert_eq!(s.order_statistic(0).unwrap(), 9.0);
        assert_eq!(s.order_statistic(1).unwrap(), 5.0);
    }

    #[test]
    fn order_statistic_examples() {
        let s = Sample::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.order_statistic(0).unwrap(), 3.0); // maximum
        assert_eq!(s.order_statistic(2).unwrap(), 1.0); // minimum
        assert!(matches!(
            s.order_statistic(3),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_short_and_non_finite() {
        assert!(matches!(
            Sample::new(vec![1.0]),
            Err(Error::TooFewObservations { have: 1, need: 2 })
        ));
        assert!(matches!(
            Sample::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(matches!(
            Sample::new(vec![f64::INFINITY, 1.0]),
            Err(Error::NonFinite { index: 0 })
        ));
    }

    #[test]
    fn accepts_nonpositive_values() {
        let s = Sample::new(vec![3.0, -1.0, 0.0, 2.0]).unwrap();
        assert_eq!(s.positive_prefix_len(), 2);
    }

    #[test]
    fn scaled_rejects_bad_factor() {
        let s = Sample::new(vec![1.0, 2.0]).unwrap();
        assert!(s.scaled(0.0).is_err());
        assert!(s.scaled(-1.0).is_err());
        assert_eq!(s.scaled(2.0).unwrap().sorted_desc(), &[4.0, 2.0]);
    }
}
