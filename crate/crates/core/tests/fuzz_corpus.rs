//! Replays the checked-in fuzz seeds through every parser.

use std::fs;
use std::path::PathBuf;

use timelink::harness::{ExperimentConfig, ExperimentReport};
use timelink::BitString;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn config_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("config_json") {
        match ExperimentConfig::from_json(&text) {
            Ok(cfg) => {
                accepted += 1;
                assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg, "{name}");
            }
            Err(_) => assert!(name.contains("invalid"), "{name} rejected"),
        }
    }
    assert!(accepted >= 3);
}

#[test]
fn report_csv_seeds() {
    for (name, text) in seeds("report_csv") {
        match ExperimentReport::parse_csv(&text) {
            Ok(r) => {
                assert_eq!(r.to_csv(), text, "{name}");
                assert_eq!(ExperimentReport::parse_csv(&r.to_csv()).unwrap(), r);
            }
            Err(_) => assert!(name.contains("bad"), "{name} rejected"),
        }
    }
}

#[test]
fn report_json_seeds() {
    for (name, text) in seeds("report_json") {
        let r = ExperimentReport::parse_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(ExperimentReport::parse_json(&r.to_json()).unwrap(), r);
        if !r.rows.is_empty() {
            assert_eq!(r.to_json(), text, "{name}");
        }
    }
}

#[test]
fn bitstring_seeds() {
    for (name, text) in seeds("bitstring") {
        match text.parse::<BitString>() {
            Ok(x) => {
                assert_eq!(x.to_string(), text, "{name}");
                assert_eq!(x.len(), text.len());
            }
            Err(_) => assert!(name.contains("bad") || name.contains("empty"), "{name} rejected"),
        }
    }
}

fn parse_all(text: &str) {
    if let Ok(cfg) = ExperimentConfig::from_json(text) {
        ExperimentConfig::from_json(&cfg.to_json()).unwrap();
    }
    if let Ok(r) = ExperimentReport::parse_csv(text) {
        ExperimentReport::parse_csv(&r.to_csv()).unwrap();
    }
    if let Ok(r) = ExperimentReport::parse_json(text) {
        ExperimentReport::parse_json(&r.to_json()).unwrap();
    }
    if let Ok(x) = text.parse::<BitString>() {
        assert_eq!(x.to_string().parse::<BitString>().unwrap(), x);
    }
}

proptest::proptest! {
    #[test]
    fn arbitrary_text_never_panics(text in ".{0,200}") {
        parse_all(&text);
    }

    #[test]
    fn mutated_seeds_never_panic(
        target in 0usize..4,
        pick in 0usize..16,
        edits in proptest::collection::vec((0usize..4096, proptest::char::any()), 1..6),
    ) {
        let all = seeds(["config_json", "report_csv", "report_json", "bitstring"][target]);
        let mut chars: Vec<char> = all[pick % all.len()].1.chars().collect();
        for (at, c) in edits {
            if chars.is_empty() {
                chars.push(c);
            } else {
                let i = at % chars.len();
                chars[i] = c;
            }
        }
        parse_all(&chars.into_iter().collect::<String>());
    }
}
