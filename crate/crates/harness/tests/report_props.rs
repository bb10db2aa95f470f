use proptest::prelude::*;

use hardyspace_harness::report::{read_csv, read_jsonl};
use hardyspace_harness::{emit_report, CheckReport, Format, Status};

fn float() -> impl Strategy<Value = f64> {
    prop_oneof![
        8 => any::<f64>().prop_filter("finite", |v| v.is_finite()),
        1 => Just(f64::INFINITY),
        1 => Just(f64::NEG_INFINITY),
    ]
}

fn report() -> impl Strategy<Value = CheckReport> {
    (
        "[a-z_]{1,12}",
        prop_oneof![Just(Status::Pass), Just(Status::Fail), Just(Status::DiscrepancyLogged)],
        float(),
        float(),
        float(),
        prop::collection::vec(("[ -~]{0,16}", float()), 0..4),
        "[ -~]{0,40}",
    )
        .prop_map(|(name, status, value, reference, tolerance, ms, note)| {
            let mut r = CheckReport::new(&name);
            r.status = status;
            r.value = value;
            r.reference = reference;
            r.tolerance = tolerance;
            for (n, v) in ms {
                r.measure(n, v);
            }
            r.note = note;
            r
        })
}

proptest! {
    #[test]
    fn jsonl_round_trip_is_lossless(rs in prop::collection::vec(report(), 0..5)) {
        let mut buf = Vec::new();
        emit_report(&rs, Format::Jsonl, &mut buf).unwrap();
        prop_assert_eq!(read_jsonl(&buf[..]).unwrap(), rs);
    }

    #[test]
    fn csv_round_trip_keeps_headline_columns(rs in prop::collection::vec(report(), 0..5)) {
        let mut buf = Vec::new();
        emit_report(&rs, Format::Csv, &mut buf).unwrap();
        let back = read_csv(&buf[..]).unwrap();
        prop_assert_eq!(back.len(), rs.len());
        for (a, b) in rs.iter().zip(&back) {
            prop_assert_eq!(&a.check_name, &b.check_name);
            prop_assert_eq!(a.status, b.status);
            prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
            prop_assert_eq!(a.reference.to_bits(), b.reference.to_bits());
            prop_assert_eq!(a.tolerance.to_bits(), b.tolerance.to_bits());
        }
    }
}
