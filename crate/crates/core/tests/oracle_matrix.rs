use std::collections::BTreeMap;

use netnoise::validation::{check_cases, small_cases, Mutation, CHECK_PS};

#[test]
fn engine_matches_dense_oracle_up_to_ten_qubits() {
    let cases = small_cases(10);
    let mut per_family: BTreeMap<String, usize> = BTreeMap::new();
    for c in &cases {
        *per_family
            .entry(c.resource.spec.family_name().to_string())
            .or_default() += 1;
    }
    for fam in ["switch-bell", "switch-ghz3", "ghz", "cluster", "tree"] {
        assert!(
            per_family.get(fam).copied().unwrap_or(0) > 0,
            "no cases for {fam}"
        );
    }
    let checks = check_cases(&cases, &CHECK_PS, Mutation::None).unwrap();
    let worst = checks
        .iter()
        .max_by(|a, b| a.diff().total_cmp(&b.diff()))
        .unwrap();
    assert!(worst.diff() < 1e-10, "{worst:?}");
}
