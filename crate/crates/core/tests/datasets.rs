use sharbly::polytope::{
    affine_dependence, enumerate_regular_triangulations, flip_path, is_regular,
    is_valid_triangulation, verify_flip_identity, Triangulation,
};
use sharbly::voronoi::dataset::{all_forms, builtin_dataset};
use sharbly::voronoi::tile::facet_census;
use sharbly::voronoi::{builtin_tile, form_from_minvecs, stabilizer, tile_facets};

#[test]
fn every_form_reproduces_its_minimal_vectors() {
    for f in all_forms() {
        let pf = form_from_minvecs(&f.name, &f.vectors).unwrap();
        assert!(pf.verify().unwrap(), "{}", f.name);
    }
}

#[test]
fn stabilizer_orders() {
    let order = |name: &str| stabilizer(&builtin_tile(name).unwrap()).unwrap().len();
    assert_eq!(order("A2"), 6);
    assert_eq!(order("A3"), 24);
    assert_eq!(order("A4"), 120);
    assert_eq!(order("D4"), 576);
}

#[test]
fn d5_facet_census() {
    let t = builtin_tile("D5").unwrap();
    let f = tile_facets(&t).unwrap();
    assert_eq!(f.len(), 400);
    let census = facet_census(&f);
    assert_eq!(census.get(&14), Some(&320));
    assert_eq!(census.get(&16), Some(&80));
    let data = builtin_dataset(5).unwrap().facet.unwrap();
    assert!(f.contains(&data.vertices));
}

#[test]
fn d5_facet_triangulations() {
    let t = builtin_tile("D5").unwrap();
    let data = builtin_dataset(5).unwrap().facet.unwrap();
    let cfg = t.section_configuration(&data.vertices).unwrap();
    let local = |s: &Vec<usize>| -> Vec<usize> {
        s.iter().map(|g| data.vertices.iter().position(|x| x == g).unwrap()).collect()
    };
    let tris: Vec<Triangulation> = data
        .triangulations
        .iter()
        .map(|t| Triangulation::from_lists(&t.iter().map(local).collect::<Vec<_>>()))
        .collect();
    for tr in &tris {
        assert!(is_valid_triangulation(&cfg, tr));
        assert!(is_regular(&cfg, tr).unwrap().is_some());
    }
    let all = enumerate_regular_triangulations(&cfg, 100).unwrap();
    assert_eq!(all.len(), 3);
    let path = flip_path(&cfg, &tris[0], &tris[1], 100).unwrap();
    assert_eq!(path.len(), 1);
    assert_eq!(path[0].circuit.labels, data.circuit);
    let z = affine_dependence(&cfg, &data.circuit).unwrap();
    println!("{:?}", z);
    println!("{:?}", path[0]);
    verify_flip_identity(&cfg, &path[0]).unwrap();
}

