//! Regenerates `data/*.json` from the catalog and the `validate` goldens.
//!
//! cargo run -p fanifold-cli --example write_data

use fanifold_cli::file::FanifoldFile;
use fanifold_core::catalog;
use fanifold_core::fanifold::Fanifold;
use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let bounded = |phi: Fanifold| phi.with_boundary_strata().expect("boundary");
    let mut files: Vec<(String, Fanifold)> = vec![
        ("unigon".into(), catalog::unigon()),
        ("square".into(), catalog::square()),
        ("halfplane".into(), catalog::halfplane()),
        ("3a1".into(), bounded(catalog::three_a1())),
        ("quadric-stacky".into(), bounded(Fanifold::from_fan(&catalog::quadric_cone(true)).expect("quadric"))),
    ];
    for r in 1..=3 {
        files.push((format!("necklace{r}"), catalog::necklace(r)));
        files.push((format!("a{r}"), bounded(Fanifold::from_fan(&catalog::affine_space(r)).expect("affine"))));
        files.push((format!("p{r}"), bounded(Fanifold::from_fan(&catalog::projective_space(r)).expect("projective"))));
    }
    for (name, phi) in files {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, FanifoldFile::from_fanifold(&phi).to_json()).expect("write data file");
        let out = fanifold_cli::run(["fanifold", "validate", "--file", path.to_str().expect("utf-8 path")]);
        assert_eq!(out.code, 0, "{name}: {}", out.stderr);
        std::fs::write(dir.join("golden").join(format!("{name}.validate.json")), out.stdout).expect("write golden");
    }
}
