use owent::dynamics::{CountOptions, Subshift};
use owent::entropy::{ow_crosscheck, SubadditiveFunction};
use owent::groups::{CompactRegion, FiniteSet, GroupDescriptor, RationalBox, VanHoveSequence};
use owent::numeric::{int, rat};

fn z_functions() -> Vec<SubadditiveFunction> {
    let z = GroupDescriptor::int(1);
    vec![
        SubadditiveFunction::log_pattern_count(&Subshift::golden_mean(), 0, CountOptions::default()).unwrap(),
        SubadditiveFunction::log_pattern_count(&Subshift::full_shift(3, 1).unwrap(), 1, CountOptions::default()).unwrap(),
        SubadditiveFunction::linear(z.clone(), rat(3, 2)).unwrap(),
        SubadditiveFunction::dilation_volume(z, CompactRegion::Finite(FiniteSet::interval(-1, 1))).unwrap(),
    ]
}

fn r_functions() -> Vec<SubadditiveFunction> {
    let r = GroupDescriptor::real(1);
    vec![
        SubadditiveFunction::linear(r.clone(), int(2)).unwrap(),
        SubadditiveFunction::dilation_volume(r, CompactRegion::Box(RationalBox::centered(1, int(1)))).unwrap(),
    ]
}

#[test]
fn limits_do_not_depend_on_the_sequence() {
    let z_pairs = [
        (VanHoveSequence::int_intervals(10), VanHoveSequence::int_shifted_intervals(10)),
        (VanHoveSequence::int_intervals(10), VanHoveSequence::int_centered_intervals(10)),
    ];
    let r_pairs = [(VanHoveSequence::real_boxes(1, int(1)), VanHoveSequence::real_offset_boxes(1, int(1)))];
    let mut combos = 0;
    for f in z_functions() {
        for (a, b) in &z_pairs {
            let rep = ow_crosscheck(&f, a, b, 30, 1e-2, 5).unwrap();
            assert!(rep.passed, "{} on {} vs {}: delta {}", f.label(), a.label(), b.label(), rep.delta);
            combos += 1;
        }
    }
    for f in r_functions() {
        for (a, b) in &r_pairs {
            let rep = ow_crosscheck(&f, a, b, 30, 1e-2, 5).unwrap();
            assert!(rep.passed, "{} on {} vs {}: delta {}", f.label(), a.label(), b.label(), rep.delta);
            combos += 1;
        }
    }
    assert!(combos >= 8);
}

#[test]
fn mismatched_groups_are_rejected() {
    let f = SubadditiveFunction::linear(GroupDescriptor::real(1), int(1)).unwrap();
    assert!(ow_crosscheck(&f, &VanHoveSequence::int_intervals(1), &VanHoveSequence::int_intervals(2), 5, 1e-2, 5).is_err());
}
