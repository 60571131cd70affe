//! Published constants, loaded from `data/published.toml`.

use std::sync::OnceLock;

use serde::Deserialize;

const SOURCE: &str = include_str!("../../data/published.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct PublishedReference {
    pub version: u32,
    pub constants: ConstantsRef,
    pub heights: HeightsRef,
    pub stage1: Stage1Ref,
    pub stage2: Stage2Ref,
    pub reduction1: Reduction1Ref,
    pub intermediate: IntermediateRef,
    pub reduction2: Reduction2Ref,
    pub theorem: TheoremRef,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ConstantsRef {
    pub alpha: [String; 2],
    pub abs_beta: [String; 2],
    pub a: [String; 2],
    pub abs_b: [String; 2],
    pub max_ab: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct HeightsRef {
    pub h_alpha: String,
    pub h_gamma: String,
    pub h_5a: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Stage1Ref {
    pub a_values: [String; 3],
    pub lambda1_constant: String,
    pub c1: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Stage2Ref {
    pub lambda2_constant: String,
    pub c2: String,
    pub combined: String,
    pub k_bound: String,
    pub m_bound: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Reduction1Ref {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "M")]
    pub m: String,
    pub convergent_index: usize,
    pub p: String,
    pub q: String,
    pub epsilon: String,
    pub w_bound: String,
    pub n_bound: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct IntermediateRef {
    pub coefficient: String,
    pub k_bound: String,
    pub m_bound: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Reduction2Ref {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "M")]
    pub m: String,
    pub convergent_index: usize,
    pub q: String,
    pub min_epsilon: String,
    pub w_bound: String,
    pub k_bound: u64,
    pub m_bound: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct TheoremRef {
    pub solution_count: usize,
    pub values: Vec<u64>,
    pub squares: Vec<u64>,
}

pub fn published_reference() -> &'static PublishedReference {
    static CELL: OnceLock<PublishedReference> = OnceLock::new();
    CELL.get_or_init(|| toml::from_str(SOURCE).expect("bundled reference table parses"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::lit;

    #[test]
    fn table_loads() {
        let r = published_reference();
        assert_eq!(r.version, 1);
        assert_eq!(r.reduction1.convergent_index, 72);
        assert_eq!(r.theorem.values, vec![1, 2, 3, 4, 6, 9, 13]);
        assert!(lit(&r.stage2.m_bound, 128).certify_positive().is_true());
    }
}
