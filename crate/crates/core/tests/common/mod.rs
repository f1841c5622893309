#![allow(dead_code)]

use std::path::PathBuf;

use sumsetlab::cli::InstanceFile;
use sumsetlab::PointSet;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Every instance in the bundled corpus, sorted by file name.
pub fn corpus() -> Vec<(InstanceFile, PointSet)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let inst = InstanceFile::parse(&std::fs::read_to_string(p).unwrap()).unwrap();
            let a = inst.point_set();
            (inst, a)
        })
        .collect()
}

pub fn ps(v: &[&[i64]]) -> PointSet {
    PointSet::from_coords(v).unwrap()
}
