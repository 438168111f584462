use dirac2d::report_io::{compare_golden, read_golden, write_golden, GoldenTable};
use dirac2d::{Error, PhysicsConfig};

#[test]
fn snapshot_written_twice_compares_clean() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PhysicsConfig::codata(30.0).unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_golden(&GoldenTable::compute(&cfg).unwrap(), &a).unwrap();
    write_golden(&GoldenTable::compute(&cfg).unwrap(), &b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(compare_golden(&a, &b, 0.0).unwrap().is_empty());
    assert_eq!(read_golden(&a).unwrap().rows.len(), 9);
}

#[test]
fn edited_cell_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PhysicsConfig::codata(1.0).unwrap();
    let table = GoldenTable::compute(&cfg).unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_golden(&table, &a).unwrap();
    let mut edited = table.clone();
    let row = edited.rows.iter_mut().find(|r| r.n == 2 && r.two_kappa == -3).unwrap();
    row.eps2 *= 1.0 + 1e-6;
    write_golden(&edited, &b).unwrap();
    let v = compare_golden(&a, &b, 1e-9).unwrap();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].label, "2p_{3/2}");
    assert_eq!(v[0].column, "eps2");
    assert!((v[0].relative - 1e-6).abs() < 1e-9);
}

#[test]
fn weak_coupling_snapshot_approaches_the_exact_table() {
    let exact = GoldenTable::nonrelativistic();
    let weak = GoldenTable::compute(&PhysicsConfig::with_alpha_scale(1.0, 1e-4).unwrap()).unwrap();
    let loose: Vec<_> = dirac2d::report_io::compare_tables(&exact, &weak, 1e-6)
        .unwrap()
        .into_iter()
        .filter(|v| !(v.a == 0.0 && v.b.abs() < 1e-12))
        .collect();
    assert!(loose.is_empty(), "{loose:?}");
    let tight = dirac2d::report_io::compare_tables(&exact, &weak, 1e-14).unwrap();
    assert!(!tight.is_empty());
}

#[test]
fn missing_state_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let table = GoldenTable::compute(&PhysicsConfig::codata(1.0).unwrap()).unwrap();
    let mut short = table.clone();
    short.rows.pop();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_golden(&table, &a).unwrap();
    write_golden(&short, &b).unwrap();
    assert!(matches!(compare_golden(&a, &b, 1e-9), Err(Error::Schema(_))));
}

#[test]
fn unreadable_snapshot_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.csv");
    assert!(matches!(read_golden(&missing), Err(Error::Io { .. })));
}
