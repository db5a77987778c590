#![no_main]

use libfuzzer_sys::fuzz_target;
use timelink::harness::ExperimentReport;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = ExperimentReport::parse_csv(text) {
        let _ = ExperimentReport::parse_csv(&report.to_csv()).expect("re-parse");
    }
});
