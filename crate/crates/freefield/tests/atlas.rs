use freefield::atlas::{export_diagram, parse_diagram, Atlas, ExportFormat, Factor};
use freefield::lattice::{BlockId, Params, SimpleLabel};
use freefield::scalars::Rat;
use proptest::prelude::*;

fn atlas(a: i64, b: i64, n: usize) -> Atlas {
    Atlas::new(Params::new(a, b).unwrap(), n)
}

fn label(s: &str) -> SimpleLabel {
    s.parse().unwrap()
}

#[test]
fn census_and_blocks() {
    let a = atlas(2, 3, 4);
    assert_eq!(a.simple_list().len(), 13);
    let part = a.block_partition();
    assert_eq!(part.len(), 6);
    assert_eq!(part[&BlockId::Thick { r: 1, s: 1 }].len(), 5);
    assert_eq!(atlas(2, 5, 4).simple_list().len(), 22);
}

#[test]
fn ext_examples() {
    let a = atlas(2, 3, 4);
    assert_eq!(a.ext_dim(&label("X+[1,1]"), &label("X-[1,1]")).unwrap(), 2);
    assert_eq!(a.ext_dim(&label("L[1,1]"), &label("X+[1,1]")).unwrap(), 1);
    assert_eq!(a.ext_dim(&label("L[1,1]"), &label("X-[1,1]")).unwrap(), 0);
    assert_eq!(a.ext_dim(&label("X+[1,1]"), &label("X+[1,2]")).unwrap(), 0);
    assert_eq!(a.ext_dim(&label("X+[2,1]"), &label("X-[2,2]")).unwrap(), 2);
    assert_eq!(a.ext_dim(&label("X+[2,3]"), &label("X-[2,3]")).unwrap(), 0);
    assert!(a.ext_dim(&label("X+[3,1]"), &label("X-[1,1]")).is_err());
    let table = a.ext_table();
    assert_eq!(table.get(&label("X-[1,2]"), &label("X+[1,1]")), 2);
}

#[test]
fn layer_shapes() {
    let a = atlas(2, 3, 6);
    let thin = a.socle_series("Q(X+[1,3])[1,3]").unwrap();
    assert_eq!(thin.length(), 3);
    assert_eq!(thin.layers[1].len(), 2);
    let p = a.socle_series("P+[1,1]").unwrap();
    assert_eq!(p.length(), 5);
    assert_eq!(p.layers[2].len(), 6);
    assert_eq!(p.composition.len(), 18);
    let ph = a.socle_series("P(h[1,1])").unwrap();
    let l = Factor::Simple(label("L[1,1]"));
    assert_eq!(ph.layers[0], vec![l]);
    assert_eq!(ph.layers[4], vec![l]);
    assert!(a.socle_series("Q(X+[1,1])[2,2]").is_err());
    assert!(a.socle_series("bogus").is_err());
}

#[test]
fn x_plus_character() {
    let a = atlas(2, 3, 6);
    let ch = a.character("X+[1,1]").unwrap();
    assert_eq!(ch.base_weight, Rat::from(2));
    assert_eq!(ch.dims[0], 1);
    let vac = a.character("L[1,1]").unwrap();
    assert_eq!(vac.base_weight, Rat::from(0));
    // At c = 0 the vacuum module is one-dimensional.
    assert_eq!(vac.dims, vec![1, 0, 0, 0, 0, 0, 0]);
}

#[test]
fn zhu_degree() {
    let a = atlas(2, 3, 2);
    let z = a.zhu_center();
    assert_eq!(z.degree(), 20);
    assert_eq!(z.multiplicity(&Rat::from(0)), 3);
}

#[test]
fn harness_passes() {
    for (p, m) in [(2, 3), (2, 5)] {
        let report = atlas(p, m, 8).check_consistency();
        let fails: Vec<_> = report.failures().collect();
        assert!(fails.is_empty(), "({p},{m}): {fails:#?}");
    }
}

#[test]
fn corrupted_layer_is_detected() {
    let a = atlas(2, 3, 6);
    let mut d = a.socle_series("V+[1,1]").unwrap();
    assert!(a.check_diagram(&d).passed);
    d.layers[1].pop();
    assert!(!a.check_diagram(&d).passed);
    let mut d = a.socle_series("F[1,1;0]").unwrap();
    d.layers[0].pop();
    d.composition = d.layers.iter().flatten().copied().collect();
    assert!(!a.check_diagram(&d).passed);
}

#[test]
fn exports_round_trip() {
    let a = atlas(2, 3, 6);
    let d = a.socle_series("Q(X+[1,3])[1,3]").unwrap();
    let json = export_diagram(&d, ExportFormat::Json).unwrap();
    assert_eq!(parse_diagram(&json).unwrap(), d);
    assert_eq!(export_diagram(&d, ExportFormat::Json).unwrap(), json);
    let dot = export_diagram(&d, ExportFormat::Dot).unwrap();
    assert_eq!(dot.matches("rank=same").count(), 3);
    assert_eq!(dot.matches("[label=").count(), 4);
    assert_eq!(dot.matches("->").count(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ext_is_symmetric(i in 0usize..22, j in 0usize..22) {
        let a = atlas(2, 5, 0);
        let s = a.simple_list();
        prop_assert_eq!(a.ext_dim(&s[i], &s[j]).unwrap(), a.ext_dim(&s[j], &s[i]).unwrap());
    }

    #[test]
    fn diagrams_round_trip_through_json(k in 0usize..60) {
        let a = atlas(2, 3, 4);
        let names = a.diagram_names();
        let d = a.socle_series(&names[k % names.len()]).unwrap();
        let json = export_diagram(&d, ExportFormat::Json).unwrap();
        prop_assert_eq!(parse_diagram(&json).unwrap(), d);
    }
}
