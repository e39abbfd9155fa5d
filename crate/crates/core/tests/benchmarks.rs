mod common;

use common::{benchmark_dir, load_benchmark};
use dcopt::optimize::{mfs, verify, MfsConfig, Verdict};

/// Literal count straight from the BLIF text: 0/1 characters in the input part of cover rows
fn count_literals_in_text(text: &str) -> usize {
    let mut total = 0;
    let mut in_cover = false;
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with(".names") {
            in_cover = true;
            continue;
        }
        if line.starts_with('.') {
            in_cover = false;
            continue;
        }
        if in_cover {
            if let Some((ins, _)) = line.split_once(' ') {
                total += ins.chars().filter(|c| *c == '0' || *c == '1').count();
            }
        }
    }
    total
}

#[test]
fn c17_literal_count() {
    let text = std::fs::read_to_string(benchmark_dir().join("c17.blif")).unwrap();
    let net = dcopt::parse_blif(&text).unwrap();
    assert_eq!(net.num_logic_nodes(), 6);
    assert_eq!(net.literal_count(), 12);
    assert_eq!(count_literals_in_text(&text), 12);
}

#[test]
fn every_benchmark_parses_with_text_literal_count() {
    for entry in std::fs::read_dir(benchmark_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("blif") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let net = dcopt::parse_blif(&text).unwrap();
        assert!(net.check().is_ok());
        // every cover in these files lists on-set rows only
        assert_eq!(net.literal_count(), count_literals_in_text(&text), "{}", path.display());
    }
}

#[test]
fn optimized_small_benchmarks_are_equivalent() {
    for name in ["c17", "c432", "c880"] {
        let original = load_benchmark(name);
        let mut net = original.clone();
        let stats = mfs(&mut net, &MfsConfig::default());
        assert!(stats.literals_after <= stats.literals_before);
        assert_eq!(verify(&original, &net).unwrap(), Verdict::Equivalent, "{name}");
        let back = dcopt::parse_blif(&dcopt::write_blif(&net)).unwrap();
        assert_eq!(verify(&original, &back).unwrap(), Verdict::Equivalent, "{name}");
    }
}
