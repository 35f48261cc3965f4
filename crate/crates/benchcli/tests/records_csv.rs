//! Result rows: normalization arithmetic, the CSV codec's round-trip
//! guarantee, and summaries.

use sbo_bench::records::{
    emit_csv, median, normalize_length, parse_csv, summarize, BenchRecord, RecordError,
    CSV_HEADER,
};
use sbo_core::planners::SolutionStatus;

fn record(planner: &str, problem_id: u32, repeat: u32) -> BenchRecord {
    BenchRecord {
        planner: planner.to_string(),
        problem_id,
        repeat,
        status: SolutionStatus::Exact,
        raw_length: Some(87.31),
        normalized_length: Some(102.72),
        smoothness: Some(1.44),
        wall_time: 1.0031,
        iterations: 1582,
        samples: 1582,
        seed: 0x1234_5678_9abc_def0,
    }
}

#[test]
fn normalization_is_a_plain_percentage_of_ground_truth() {
    assert_eq!(normalize_length(85.0, 85.0).unwrap(), 100.0);
    assert_eq!(normalize_length(120.0, 100.0).unwrap(), 120.0);
    assert_eq!(normalize_length(93.5, 85.0).unwrap(), 110.0);
}

#[test]
fn non_positive_ground_truth_is_an_error() {
    assert_eq!(
        normalize_length(10.0, 0.0),
        Err(RecordError::NonPositiveGroundTruth(0.0))
    );
    assert!(normalize_length(10.0, -3.0).is_err());
    assert!(normalize_length(10.0, f64::NAN).is_err());
}

#[test]
fn csv_round_trips_exactly() {
    let mut records = vec![record("RRT*", 0, 0), record("InformedRRT*", 3, 2)];
    // Awkward floats: values whose decimal forms are long or subnormal.
    records[0].raw_length = Some(0.1 + 0.2);
    records[0].normalized_length = Some(1e-17);
    records[0].smoothness = Some(f64::MIN_POSITIVE);
    records[0].wall_time = f64::MAX;
    // A failure row carries no metrics at all.
    records.push(BenchRecord {
        status: SolutionStatus::Failure,
        raw_length: None,
        normalized_length: None,
        smoothness: None,
        ..record("FMT*", 7, 1)
    });
    records.push(BenchRecord {
        status: SolutionStatus::Approximate,
        ..record("APS", 2, 0)
    });

    let text = emit_csv(&records);
    assert!(text.starts_with(CSV_HEADER));
    let parsed = parse_csv(&text).expect("own output parses");
    assert_eq!(parsed, records);

    // A second trip is byte-identical.
    assert_eq!(emit_csv(&parsed), text);
}

#[test]
fn csv_rejects_malformed_input() {
    assert_eq!(parse_csv(""), Err(RecordError::MissingHeader));

    let wrong = parse_csv("foo,bar\n").unwrap_err();
    assert!(matches!(wrong, RecordError::WrongHeader(_)));

    let short_line = format!("{CSV_HEADER}\nRRT*,0,0,Exact,1.0\n");
    let error = parse_csv(&short_line).unwrap_err();
    assert!(error.to_string().contains("line 2"));

    let bad_status = format!("{CSV_HEADER}\nRRT*,0,0,Solved,1.0,100.0,0.5,1.0,10,10,1\n");
    let error = parse_csv(&bad_status).unwrap_err();
    assert!(error.to_string().contains("Solved"));

    let bad_number = format!("{CSV_HEADER}\nRRT*,zero,0,Exact,1.0,100.0,0.5,1.0,10,10,1\n");
    assert!(parse_csv(&bad_number).is_err());
}

#[test]
fn summaries_group_by_planner_in_first_appearance_order() {
    let mut rows = Vec::new();
    for repeat in 0..4 {
        let mut r = record("PRM*", 0, repeat);
        r.normalized_length = Some(100.0 + repeat as f64);
        rows.push(r);
    }
    let mut failed = record("RRT*", 0, 0);
    failed.status = SolutionStatus::Failure;
    failed.raw_length = None;
    failed.normalized_length = None;
    failed.smoothness = None;
    rows.push(failed);
    let mut approx = record("RRT*", 0, 1);
    approx.status = SolutionStatus::Approximate;
    approx.normalized_length = Some(130.0);
    rows.push(approx);

    let summaries = summarize(&rows);
    assert_eq!(summaries.len(), 2);

    assert_eq!(summaries[0].planner, "PRM*");
    assert_eq!(summaries[0].runs, 4);
    assert_eq!(summaries[0].exact, 4);
    assert_eq!(summaries[0].exact_rate(), 1.0);
    // Median of 100, 101, 102, 103.
    assert_eq!(summaries[0].median_normalized, Some(101.5));

    assert_eq!(summaries[1].planner, "RRT*");
    assert_eq!(summaries[1].runs, 2);
    assert_eq!(summaries[1].exact, 0);
    // Only the approximate row carries a length.
    assert_eq!(summaries[1].median_normalized, Some(130.0));
}

#[test]
fn median_handles_odd_even_and_empty() {
    assert_eq!(median(&mut []), None);
    assert_eq!(median(&mut [3.0]), Some(3.0));
    assert_eq!(median(&mut [5.0, 1.0, 3.0]), Some(3.0));
    assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), Some(2.5));
}
