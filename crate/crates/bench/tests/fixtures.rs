use gpt_refine_bench::{random_lts, random_structure};

#[test]
fn structure_shapes() {
    let ks = random_structure(1, 100, 3, 2);
    assert_eq!(ks.num_states(), 100);
    assert!(ks.check_total().is_ok());
    assert!(ks.num_transitions() <= 300);
    assert_eq!(ks.atoms().len(), 2);

    let lts = random_lts(2, 50, 120, 3);
    assert_eq!(lts.num_states(), 50 + 120);
    assert_eq!(lts.num_transitions(), 240);
}

#[test]
fn seeds_repeat() {
    let a = random_structure(7, 40, 2, 1);
    let b = random_structure(7, 40, 2, 1);
    assert_eq!(a, b);
}
