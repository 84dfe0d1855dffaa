use proptest::prelude::*;
use qderiv::report::{format_number, from_json, render, round_significant, to_csv, to_json, Format, Metadata, Table, Value};

fn cell() -> impl Strategy<Value = Value> {
    prop_oneof![
        (-1e6f64..1e6).prop_map(Value::Number),
        (-1e-3f64..1e-3).prop_map(Value::Number),
        any::<i32>().prop_map(|i| Value::Integer(i as i64)),
        "[a-z/^*()]{1,12}".prop_map(Value::Text),
        Just(Value::Missing),
    ]
}

fn table() -> impl Strategy<Value = Table> {
    (1usize..5).prop_flat_map(|cols| {
        prop::collection::vec(prop::collection::vec(cell(), cols), 1..6).prop_map(move |rows| {
            let names: Vec<String> = (0..cols).map(|c| format!("col{c}")).collect();
            let mut t = Table::new(&names.iter().map(String::as_str).collect::<Vec<_>>());
            for r in rows {
                t.push(r).unwrap();
            }
            t.notes.push("note".into());
            t
        })
    })
}

fn same(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => round_significant(*x) == *y,
        // Integral numbers come back as integers.
        (Value::Number(x), Value::Integer(i)) => round_significant(*x) == *i as f64,
        _ => a == b,
    }
}

proptest! {
    #[test]
    fn json_round_trip(t in table()) {
        let meta = Metadata { tool: "qderiv".into(), version: "0".into(), command: "scan".into(), seed: Some(3), ..Metadata::default() };
        let back = from_json(&to_json(&t, &meta).unwrap()).unwrap();
        prop_assert_eq!(&back.columns, &t.columns);
        prop_assert_eq!(&back.notes, &t.notes);
        prop_assert_eq!(back.rows.len(), t.rows.len());
        for (r, s) in t.rows.iter().zip(&back.rows) {
            for (a, b) in r.iter().zip(s) {
                prop_assert!(same(a, b), "{:?} vs {:?}", a, b);
            }
        }
    }

    #[test]
    fn twelve_significant_digits(x in prop::num::f64::NORMAL) {
        let s = format_number(x);
        let mantissa = s.split('e').next().unwrap();
        let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        prop_assert_eq!(digits.trim_start_matches('0').len(), 12, "{}", s);
        let y: f64 = s.parse().unwrap();
        prop_assert!(((y - x) / x).abs() < 1e-11);
    }

    #[test]
    fn rendering_is_deterministic(t in table()) {
        let meta = Metadata::default();
        prop_assert_eq!(render(&t, &meta, Format::Json).unwrap(), render(&t, &meta, Format::Json).unwrap());
        prop_assert_eq!(to_csv(&t).unwrap(), to_csv(&t).unwrap());
    }
}

#[test]
fn metadata_block() {
    let mut t = Table::new(&["R_angstrom", "E_vqe"]);
    t.push(vec![0.74.into(), (-1.137).into()]).unwrap();
    let mut meta = Metadata { tool: "qderiv".into(), version: "1.2.3".into(), command: "scan".into(), seed: Some(11), ..Metadata::default() };
    meta.config.insert("mapping".into(), "bk".into());
    let doc: serde_json::Value = serde_json::from_str(&to_json(&t, &meta).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["seed"], 11);
    assert_eq!(doc["metadata"]["version"], "1.2.3");
    assert_eq!(doc["metadata"]["config"]["mapping"], "bk");
    assert_eq!(doc["rows"][0]["E_vqe"], -1.137);
}
