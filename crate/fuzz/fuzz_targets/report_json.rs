#![no_main]

use libfuzzer_sys::fuzz_target;
use timelink::harness::ExperimentReport;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = ExperimentReport::parse_json(text) {
        let _ = ExperimentReport::parse_json(&report.to_json()).expect("re-parse");
    }
});
