mod common;

#[test]
fn distance_dominates_pivot_hamming() {
    common::distance_dominates_pivot_hamming().unwrap();
}

#[test]
fn equal_pivots_give_twice_rank_distance() {
    common::equal_pivots_give_twice_rank_distance().unwrap();
}

#[test]
fn orthogonal_complement_is_an_isometry() {
    common::orthogonal_complement_is_an_isometry().unwrap();
}

#[test]
fn lifted_fdrm_codes_have_twice_the_rank_distance() {
    common::lifted_fdrm_codes_have_twice_the_rank_distance().unwrap();
}

#[test]
fn coset_families_partition_with_both_distances() {
    common::coset_families_partition_with_both_distances().unwrap();
}

#[test]
fn block_components_meet_their_structure() {
    common::block_components_meet_their_structure().unwrap();
}

#[test]
fn special_substructure_and_membership_hold_on_every_codeword() {
    common::special_substructure_and_membership_hold_on_every_codeword().unwrap();
}

#[test]
fn suite_table_lists_every_property() {
    assert_eq!(common::SUITES.len(), 7);
}
