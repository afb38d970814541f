use spectra::io::{read_csv, read_dump, write_csv, write_dump, MatrixKind};
use spectra::Report;
use spectra_core::fem::SymMatrix;

#[test]
fn csv_round_trips_bit_exactly() {
    let data = [0.1, -2.5e-300, 1.0 / 3.0, f64::MAX, 7.0, -0.0];
    let mut buf = Vec::new();
    write_csv(&mut buf, &data, 3).unwrap();
    let (back, cols) = read_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(cols, 3);
    for (a, b) in data.iter().zip(&back) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn ragged_or_garbled_csv_is_rejected() {
    assert!(read_csv("1,2\n3\n").is_err());
    assert!(read_csv("1,x\n").is_err());
}

#[test]
fn dump_round_trips_and_checks_its_header() {
    let mut m = SymMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..=i {
            m.set(i, j, (i * 10 + j) as f64 + 0.5);
        }
    }
    let mut buf = Vec::new();
    write_dump(&mut buf, MatrixKind::Gram, &m).unwrap();
    assert_eq!(buf.len(), 5 + 8 * 10);
    assert_eq!(&buf[..5], &[4, 0, 0, 0, 3]);
    let (kind, back) = read_dump(buf.as_slice()).unwrap();
    assert_eq!(kind, MatrixKind::Gram);
    assert_eq!(back.entries, m.entries);

    buf[4] = 9;
    assert!(read_dump(buf.as_slice()).is_err());
    assert!(read_dump(&buf[..20]).is_err());
}

#[test]
fn report_survives_a_json_round_trip() {
    let r = Report::new("factor", serde_json::json!({ "bc": "robin" }), serde_json::json!({ "value": 1.7070463_f64 }))
        .tolerance("residual", 1e-9)
        .pass(false);
    let back: Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert!(r.to_json().ends_with('\n'));
}
