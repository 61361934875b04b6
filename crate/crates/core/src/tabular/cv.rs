use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::Label;
use crate::error::{Error, Result};
use crate::rng::rng_for;

/// Repeated k-fold cross-validation settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CvScheme {
    pub k: usize,
    pub repeats: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for CvScheme {
    fn default() -> Self {
        Self {
            k: 10,
            repeats: 20,
            seed: 0,
            stratified: true,
        }
    }
}

impl CvScheme {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidInput(format!(
                "fold count k must be at least 2, got {}",
                self.k
            )));
        }
        if self.repeats < 1 {
            return Err(Error::InvalidInput("repeats must be at least 1".into()));
        }
        Ok(())
    }
}

/// Fold index of every sample, for each repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    k: usize,
    folds: Vec<Vec<usize>>,
}

impl FoldAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn repeats(&self) -> usize {
        self.folds.len()
    }

    /// Fold of each sample in `repeat`.
    pub fn assignment(&self, repeat: usize) -> &[usize] {
        &self.folds[repeat]
    }

    pub fn test_indices(&self, repeat: usize, fold: usize) -> Vec<usize> {
        self.indices(repeat, |f| f == fold)
    }

    pub fn train_indices(&self, repeat: usize, fold: usize) -> Vec<usize> {
        self.indices(repeat, |f| f != fold)
    }

    fn indices(&self, repeat: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        self.folds[repeat]
            .iter()
            .enumerate()
            .filter(|&(_, &f)| keep(f))
            .map(|(i, _)| i)
            .collect()
    }

    /// All (repeat, fold) pairs in evaluation order.
    pub fn units(&self) -> Vec<(usize, usize)> {
        (0..self.repeats())
            .flat_map(|r| (0..self.k).map(move |f| (r, f)))
            .collect()
    }
}

/// Assigns samples to folds for every repeat.
///
/// When stratified, each class (benign first) is shuffled with the repeat's
/// RNG and dealt round-robin to the folds; the deal position carries over
/// from one class to the next so fold sizes differ by at most one.
pub fn stratified_folds(labels: &[Label], scheme: &CvScheme) -> Result<FoldAssignment> {
    scheme.validate()?;
    let k = scheme.k;
    let groups: Vec<Vec<usize>> = if scheme.stratified {
        let mut groups = Vec::new();
        for class in [super::BENIGN, super::MALIGNANT] {
            let members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
            if members.is_empty() {
                continue;
            }
            if members.len() < k {
                return Err(Error::ClassTooSmall {
                    class,
                    count: members.len(),
                    k,
                });
            }
            groups.push(members);
        }
        groups
    } else {
        if labels.len() < k {
            return Err(Error::TooFewSamples {
                needed: k,
                found: labels.len(),
            });
        }
        vec![(0..labels.len()).collect()]
    };

    let folds = (0..scheme.repeats)
        .map(|repeat| {
            let mut rng = rng_for(scheme.seed, &[repeat as u64]);
            let mut fold_of = vec![0; labels.len()];
            let mut next = 0;
            for group in &groups {
                let mut order = group.clone();
                order.shuffle(&mut rng);
                for i in order {
                    fold_of[i] = next;
                    next = (next + 1) % k;
                }
            }
            fold_of
        })
        .collect();
    Ok(FoldAssignment { k, folds })
}
