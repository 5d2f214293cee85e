//! Scenario classification for a (source, target) dataset pair.
//!
//! Three predicates decide everything: do the feature spaces match, is it the
//! same smell, is it the same language.

use std::collections::HashSet;
use std::fmt;

use crate::dataset_io::DatasetDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubScenario {
    S1_1,
    S1_2,
    S2_1,
    S2_2,
    S3_1,
    S3_2,
    S3_3,
    S3_4,
}

impl SubScenario {
    pub const ALL: [SubScenario; 8] = [
        SubScenario::S1_1,
        SubScenario::S1_2,
        SubScenario::S2_1,
        SubScenario::S2_2,
        SubScenario::S3_1,
        SubScenario::S3_2,
        SubScenario::S3_3,
        SubScenario::S3_4,
    ];

    /// Look-up by the three predicates.
    pub fn from_predicates(features_equal: bool, smell_equal: bool, language_equal: bool) -> Self {
        use SubScenario::*;
        match (features_equal, smell_equal, language_equal) {
            (true, true, true) => S1_1,
            (true, false, true) => S1_2,
            (false, true, true) => S2_1,
            (false, false, true) => S2_2,
            (true, true, false) => S3_1,
            (true, false, false) => S3_2,
            (false, true, false) => S3_3,
            (false, false, false) => S3_4,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            SubScenario::S1_1 => "1.1",
            SubScenario::S1_2 => "1.2",
            SubScenario::S2_1 => "2.1",
            SubScenario::S2_2 => "2.2",
            SubScenario::S3_1 => "3.1",
            SubScenario::S3_2 => "3.2",
            SubScenario::S3_3 => "3.3",
            SubScenario::S3_4 => "3.4",
        }
    }

    pub fn abbreviation(self) -> &'static str {
        match self {
            SubScenario::S1_1 => "Intra SD_iD",
            SubScenario::S1_2 => "Inter SD_iD",
            SubScenario::S2_1 => "Intra SD_hD",
            SubScenario::S2_2 => "Inter SD_hD",
            SubScenario::S3_1 => "Intra SD_cD",
            SubScenario::S3_2 => "Inter SD_cD",
            SubScenario::S3_3 => "Intra SD_hcD",
            SubScenario::S3_4 => "Inter SD_hcD",
        }
    }

    pub fn long_name(self) -> &'static str {
        match self {
            SubScenario::S1_1 => "Intra-smell Detection within domain",
            SubScenario::S1_2 => "Inter-smell Detection within domain",
            SubScenario::S2_1 => "Intra smell Detection within heterogeneous domain",
            SubScenario::S2_2 => "Inter smell Detection within heterogeneous domain",
            SubScenario::S3_1 => "Intra smell Detection within cross-domain",
            SubScenario::S3_2 => "Inter smell Detection within cross-domain detection",
            SubScenario::S3_3 => "Intra smell Detection within heterogeneous cross-domain",
            SubScenario::S3_4 => "Inter smell Detection within heterogeneous cross domain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScenarioLabel {
    pub sub_scenario: SubScenario,
}

impl ScenarioLabel {
    pub fn new(sub_scenario: SubScenario) -> Self {
        ScenarioLabel { sub_scenario }
    }

    pub fn abbreviation(&self) -> &'static str {
        self.sub_scenario.abbreviation()
    }

    pub fn long_name(&self) -> &'static str {
        self.sub_scenario.long_name()
    }
}

impl fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} — {}",
            self.sub_scenario.id(),
            self.abbreviation(),
            self.long_name()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainCategory {
    SameDomain,
    CrossDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmellRelation {
    IntraSmell,
    InterSmell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureRelation {
    Homogeneous,
    Heterogeneous,
}

/// Where the interacting smells live. Only `AcrossProjects` is ever produced:
/// the tool always compares two separate dataset files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InteractionLocus {
    WithinProject,
    AcrossProjects,
    GroupOfProjects,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TaxonomyPath {
    pub domain_category: DomainCategory,
    pub smell_relation: SmellRelation,
    pub feature_relation: FeatureRelation,
    pub interaction_locus: InteractionLocus,
}

impl fmt::Display for TaxonomyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let domain = match self.domain_category {
            DomainCategory::SameDomain => "same_domain",
            DomainCategory::CrossDomain => "cross_domain",
        };
        let smell = match self.smell_relation {
            SmellRelation::IntraSmell => "intra_smell",
            SmellRelation::InterSmell => "inter_smell",
        };
        let feat = match self.feature_relation {
            FeatureRelation::Homogeneous => "homogeneous",
            FeatureRelation::Heterogeneous => "heterogeneous",
        };
        let locus = match self.interaction_locus {
            InteractionLocus::WithinProject => "within_project",
            InteractionLocus::AcrossProjects => "across_projects",
            InteractionLocus::GroupOfProjects => "group_of_projects",
        };
        write!(f, "{domain} / {smell} / {feat} / {locus}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Technique {
    ConventionalMl,
    HomogeneousTransferLearning,
    HeterogeneousTransferLearning,
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Technique::ConventionalMl => "conventional_ml",
            Technique::HomogeneousTransferLearning => "homogeneous_transfer_learning",
            Technique::HeterogeneousTransferLearning => "heterogeneous_transfer_learning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TechniqueHint {
    pub technique: Technique,
    pub rationale: String,
}

fn feature_sets_equal(a: &[String], b: &[String]) -> bool {
    let sa: HashSet<&str> = a.iter().map(String::as_str).collect();
    let sb: HashSet<&str> = b.iter().map(String::as_str).collect();
    sa == sb
}

pub fn classify_scenario(src: &DatasetDescriptor, tgt: &DatasetDescriptor) -> ScenarioLabel {
    let features_equal = feature_sets_equal(&src.feature_names, &tgt.feature_names);
    let smell_equal = src.smell == tgt.smell;
    let language_equal = src.language.to_lowercase() == tgt.language.to_lowercase();
    ScenarioLabel::new(SubScenario::from_predicates(
        features_equal,
        smell_equal,
        language_equal,
    ))
}

pub fn taxonomy_path(label: ScenarioLabel) -> TaxonomyPath {
    use SubScenario::*;
    let s = label.sub_scenario;
    TaxonomyPath {
        domain_category: if matches!(s, S1_1 | S1_2 | S2_1 | S2_2) {
            DomainCategory::SameDomain
        } else {
            DomainCategory::CrossDomain
        },
        smell_relation: if matches!(s, S1_2 | S2_2 | S3_2 | S3_4) {
            SmellRelation::InterSmell
        } else {
            SmellRelation::IntraSmell
        },
        feature_relation: if matches!(s, S1_1 | S1_2 | S3_1 | S3_2) {
            FeatureRelation::Homogeneous
        } else {
            FeatureRelation::Heterogeneous
        },
        interaction_locus: InteractionLocus::AcrossProjects,
    }
}

pub fn recommend_technique(label: ScenarioLabel, distributions_similar: bool) -> TechniqueHint {
    let path = taxonomy_path(label);
    let (technique, rationale) = match (path.feature_relation, distributions_similar) {
        (FeatureRelation::Heterogeneous, _) => (
            Technique::HeterogeneousTransferLearning,
            "source and target feature spaces differ, so a model trained on one cannot score the \
             other directly; heterogeneous transfer learning maps between the spaces",
        ),
        (FeatureRelation::Homogeneous, true) => (
            Technique::ConventionalMl,
            "shared feature space and similar distributions: a conventional classifier trained on \
             the source applies to the target as is",
        ),
        (FeatureRelation::Homogeneous, false) => (
            Technique::HomogeneousTransferLearning,
            "shared feature space but differing distributions: homogeneous transfer learning \
             adapts the source model to the target distribution",
        ),
    };
    TechniqueHint {
        technique,
        rationale: rationale.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset_io::{Granularity, Smell};

    fn desc(features: &[&str], smell: Smell, lang: &str) -> DatasetDescriptor {
        DatasetDescriptor {
            name: format!("{smell}-{lang}"),
            smell,
            language: lang.into(),
            granularity: Granularity::Method,
            feature_names: features.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn lm_vs_fe_is_inter_sd_id() {
        let lm = desc(&["a", "b"], Smell::LongMethod, "Java");
        let fe = desc(&["b", "a"], Smell::FeatureEnvy, "java");
        let l = classify_scenario(&lm, &fe);
        assert_eq!(l.sub_scenario, SubScenario::S1_2);
        assert_eq!(l.abbreviation(), "Inter SD_iD");
        assert_eq!(l.long_name(), "Inter-smell Detection within domain");
    }

    #[test]
    fn heterogeneous_cross_domain_same_smell() {
        let a = desc(&["a"], Smell::GodClass, "Java");
        let b = desc(&["z"], Smell::GodClass, "C#");
        let l = classify_scenario(&a, &b);
        assert_eq!(l.sub_scenario, SubScenario::S3_3);
        assert_eq!(l.abbreviation(), "Intra SD_hcD");
    }

    #[test]
    fn identity_pair() {
        let a = desc(&["a", "b"], Smell::DataClass, "Java");
        assert_eq!(classify_scenario(&a, &a).sub_scenario, SubScenario::S1_1);
    }

    #[test]
    fn truth_table_is_a_bijection() {
        let mut seen = HashSet::new();
        for bits in 0..8u8 {
            let f = bits & 4 != 0;
            let s = bits & 2 != 0;
            let l = bits & 1 != 0;
            let a = desc(&["x", "y"], Smell::LongMethod, "Java");
            let b = desc(
                if f { &["y", "x"] } else { &["x", "q"] },
                if s { Smell::LongMethod } else { Smell::FeatureEnvy },
                if l { "JAVA" } else { "Python" },
            );
            let got = classify_scenario(&a, &b).sub_scenario;
            assert_eq!(got, SubScenario::from_predicates(f, s, l));
            assert!(seen.insert(got));
            // symmetric predicates give a symmetric label
            assert_eq!(classify_scenario(&b, &a).sub_scenario, got);
            let p = taxonomy_path(ScenarioLabel::new(got));
            assert_eq!(p.smell_relation == SmellRelation::InterSmell, !s);
            assert_eq!(p.domain_category == DomainCategory::SameDomain, l);
            assert_eq!(p.feature_relation == FeatureRelation::Homogeneous, f);
        }
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn paths() {
        let p = taxonomy_path(ScenarioLabel::new(SubScenario::S1_2));
        assert_eq!(
            p,
            TaxonomyPath {
                domain_category: DomainCategory::SameDomain,
                smell_relation: SmellRelation::InterSmell,
                feature_relation: FeatureRelation::Homogeneous,
                interaction_locus: InteractionLocus::AcrossProjects,
            }
        );
        let p = taxonomy_path(ScenarioLabel::new(SubScenario::S3_4));
        assert_eq!(p.domain_category, DomainCategory::CrossDomain);
        assert_eq!(p.smell_relation, SmellRelation::InterSmell);
        assert_eq!(p.feature_relation, FeatureRelation::Heterogeneous);
        let p = taxonomy_path(ScenarioLabel::new(SubScenario::S1_1));
        assert_eq!(p.smell_relation, SmellRelation::IntraSmell);
        assert_eq!(p.to_string(), "same_domain / intra_smell / homogeneous / across_projects");
    }

    #[test]
    fn technique_hints() {
        let t = |s, sim| recommend_technique(ScenarioLabel::new(s), sim).technique;
        assert_eq!(t(SubScenario::S1_1, true), Technique::ConventionalMl);
        assert_eq!(t(SubScenario::S2_2, true), Technique::HeterogeneousTransferLearning);
        assert_eq!(t(SubScenario::S2_2, false), Technique::HeterogeneousTransferLearning);
        assert_eq!(t(SubScenario::S1_2, false), Technique::HomogeneousTransferLearning);
    }
}
