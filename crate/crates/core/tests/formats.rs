use cubestat::constructions::{parity_set, ConstructionSpec};
use cubestat::hadamard::{hadamard_paley, HadamardMatrix};
use cubestat::johnson::{hadamard_to_clique, verify_clique, CliqueCertificate};
use cubestat::stats::{distribution, SubcubeDistribution};
use cubestat::{GF2Matrix, VertexSet};

#[test]
fn files_round_trip() {
    let dir = tempdir();
    let set = parity_set(5).unwrap();
    let dist = distribution(&set, 2).unwrap();
    let h = hadamard_paley(11).unwrap();
    let clique = hadamard_to_clique(&h).unwrap();
    let m = GF2Matrix::from_row_strings(&["1010", "0111"]).unwrap();

    std::fs::write(dir.join("set.json"), set.to_json().unwrap()).unwrap();
    std::fs::write(dir.join("dist.json"), serde_json::to_string(&dist).unwrap()).unwrap();
    std::fs::write(dir.join("h.json"), serde_json::to_string(&h).unwrap()).unwrap();
    std::fs::write(dir.join("clique.json"), serde_json::to_string(&clique).unwrap()).unwrap();

    let read = |name: &str| std::fs::read_to_string(dir.join(name)).unwrap();
    assert_eq!(VertexSet::from_json(&read("set.json")).unwrap(), set);
    assert_eq!(serde_json::from_str::<SubcubeDistribution>(&read("dist.json")).unwrap(), dist);
    assert_eq!(serde_json::from_str::<HadamardMatrix>(&read("h.json")).unwrap(), h);
    let back: CliqueCertificate = serde_json::from_str(&read("clique.json")).unwrap();
    assert!(verify_clique(&back));
    assert_eq!(back, clique);

    let spec = ConstructionSpec::Syndrome { matrix: m, colors: vec!["01".into()] };
    let text = serde_json::to_string(&spec).unwrap();
    assert_eq!(serde_json::from_str::<ConstructionSpec>(&text).unwrap(), spec);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn malformed_files_are_rejected() {
    assert!(VertexSet::from_json(r#"{"n":3,"vertices":[1,1]}"#).is_err());
    assert!(VertexSet::from_json(r#"{"n":3,"vertices":[8]}"#).is_err());
    assert!(serde_json::from_str::<SubcubeDistribution>(r#"{"n":2,"d":1,"total":"5","counts":{"1":"4"}}"#).is_err());
    assert!(serde_json::from_str::<CliqueCertificate>(r#"{"s":1,"members":[[0,4]]}"#).is_err());
    assert!(serde_json::from_str::<HadamardMatrix>(r#"{"order":2,"rows":["+x","+-"]}"#).is_err());
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("cubestat-formats-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
