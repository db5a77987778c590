#![no_main]

use libfuzzer_sys::fuzz_target;
use timelink::harness::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::from_json(text) {
        // Anything accepted once must survive its own serialization.
        let again = ExperimentConfig::from_json(&cfg.to_json()).expect("re-parse");
        assert_eq!(again.algorithm, cfg.algorithm);
        assert_eq!(again.n_values, cfg.n_values);
        let _ = cfg.points();
    }
});
