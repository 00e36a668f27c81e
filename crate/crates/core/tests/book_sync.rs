use std::path::Path;

/// Every chapter listed in the book summary is compiled as a doctest.
#[test]
fn every_chapter_is_doctested() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let summary = std::fs::read_to_string(root.join("../../book/src/SUMMARY.md")).unwrap();
    let lib = std::fs::read_to_string(root.join("src/lib.rs")).unwrap();
    let chapters: Vec<&str> = summary
        .lines()
        .filter_map(|l| l.split_once("](").map(|(_, rest)| rest.trim_end_matches(')')))
        .collect();
    assert!(!chapters.is_empty());
    for c in chapters {
        assert!(root.join("../../book/src").join(c).exists(), "{c} missing");
        assert!(lib.contains(&format!("book/src/{c}\")")), "{c} is not included in lib.rs");
    }
}
