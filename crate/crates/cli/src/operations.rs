//! Which subcommand exposes each library operation.

/// `(operation, subcommand)`; every operation appears exactly once.
pub const OPERATION_MAP: &[(&str, &str)] = &[
    ("groups::minkowski", "vanhove"),
    ("groups::haar_measure", "vanhove"),
    ("groups::k_boundary", "vanhove"),
    ("groups::van_hove_diagnostic", "vanhove"),
    ("groups::dilated_sequence", "vanhove"),
    ("groups::product_sequence", "vanhove"),
    ("groups::lattice_discretize", "ow-limit"),
    ("cps::enumerate_model_set", "cps-enumerate"),
    ("cps::certify", "cps-enumerate"),
    ("cps::uniform_density", "density"),
    ("cps::fundamental_domain", "density"),
    ("cps::meyer_check", "meyer-check"),
    ("dynamics::count_patterns", "entropy"),
    ("dynamics::cov", "entropy"),
    ("dynamics::sep", "entropy"),
    ("dynamics::spa", "entropy"),
    ("dynamics::fiber_cov", "relative-entropy"),
    ("entropy::ow_limit", "ow-limit"),
    ("entropy::lattice_transfer", "ow-limit"),
    ("entropy::ow_crosscheck", "ow-crosscheck"),
    ("entropy::topological_entropy", "entropy"),
    ("entropy::relative_entropy", "relative-entropy"),
    ("entropy::lattice_restricted_entropy", "restrict"),
    ("entropy::power_rule_check", "power-rule"),
    ("entropy::bowen_chain_check", "bowen-chain"),
    ("entropy::product_extension_check", "product-extension"),
    ("entropy::bernoulli_entropy", "bernoulli"),
];

pub fn subcommand_for(operation: &str) -> Option<&'static str> {
    OPERATION_MAP.iter().find(|(op, _)| *op == operation).map(|(_, c)| *c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Cli;
    use clap::CommandFactory;
    use std::collections::{BTreeSet, HashSet};

    #[test]
    fn every_operation_has_one_subcommand() {
        let mut seen = HashSet::new();
        for (op, _) in OPERATION_MAP {
            assert!(seen.insert(*op), "{op} is mapped twice");
        }
        let commands: BTreeSet<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
        let used: BTreeSet<String> = OPERATION_MAP.iter().map(|(_, c)| c.to_string()).collect();
        assert_eq!(commands, used, "every subcommand exposes an operation and every target exists");
        assert_eq!(subcommand_for("entropy::bernoulli_entropy"), Some("bernoulli"));
    }
}
