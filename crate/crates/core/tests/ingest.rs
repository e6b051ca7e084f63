mod support {
    pub mod oracles;
}

use std::collections::BTreeSet;

use eeq_core::ingest::{join_tables, load_snapshot, parse_table, save_snapshot, IngestError, RawTable, TableKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use support::oracles::random_snapshot;

fn table_csv(kind: TableKind, ids: &[String]) -> String {
    let columns = kind.required_columns();
    let mut csv = format!("locale_id,{}\n", columns.join(","));
    for id in ids {
        let cells: Vec<&str> = columns
            .iter()
            .map(|c| match *c {
                "total_population" => "5000",
                "participation_rate" => "0.25",
                "median_household_income" => "71000",
                _ => "400",
            })
            .collect();
        csv.push_str(&format!("{id},{}\n", cells.join(",")));
    }
    csv
}

fn tables_for(sets: &[Vec<String>; 8]) -> Vec<RawTable> {
    TableKind::ALL
        .iter()
        .zip(sets)
        .map(|(&kind, ids)| parse_table(table_csv(kind, ids).as_bytes(), kind).unwrap())
        .collect()
}

fn id_set() -> impl Strategy<Value = Vec<String>> {
    prop::collection::btree_set(0u32..30, 1..20)
        .prop_map(|s| s.into_iter().map(|i| format!("{:05}", 7000 + i)).collect())
}

proptest! {
    #[test]
    fn parser_is_total(bytes in prop::collection::vec(any::<u8>(), 0..300), k in 0usize..8) {
        let kind = TableKind::ALL[k];
        if let Ok(table) = parse_table(bytes.as_slice(), kind) {
            prop_assert!(!table.is_empty());
            for row in table.rows.values() {
                prop_assert_eq!(row.len(), kind.required_columns().len());
                prop_assert!(row.values().all(|v| v.is_finite() && *v >= 0.0));
            }
        }
    }

    #[test]
    fn parser_accepts_what_it_should(rows in prop::collection::btree_map(0u32..99_999, (0u32..1_000_000, 0u32..1_000_000), 1..30)) {
        let mut csv = String::from("renter_occupied,locale_id,owner_occupied\n");
        for (id, (o, r)) in &rows {
            csv.push_str(&format!("{r},{id:05},{o}\n"));
        }
        let table = parse_table(csv.as_bytes(), TableKind::Tenure).unwrap();
        prop_assert_eq!(table.len(), rows.len());
        for (id, (o, r)) in &rows {
            let key = format!("{id:05}");
            prop_assert_eq!(table.value(&key, "owner_occupied"), Some(*o as f64));
            prop_assert_eq!(table.value(&key, "renter_occupied"), Some(*r as f64));
        }
    }

    #[test]
    fn join_conserves_intersection(sets in prop::array::uniform8(id_set()), rotate in 0usize..8) {
        let tables = tables_for(&sets);
        let intersection: BTreeSet<&String> = sets[0]
            .iter()
            .filter(|id| sets.iter().all(|s| s.contains(id)))
            .collect();
        let union: BTreeSet<&String> = sets.iter().flatten().collect();

        let mut rotated = tables.clone();
        rotated.rotate_left(rotate);
        let first = join_tables(&tables);
        prop_assert_eq!(&first, &join_tables(&rotated));
        match first {
            Ok(out) => {
                prop_assert_eq!(out.records.len(), intersection.len());
                prop_assert_eq!(out.dropped, union.len() - intersection.len());
                let ids: Vec<&String> = out.records.iter().map(|r| &r.locale_id).collect();
                prop_assert_eq!(ids, intersection.into_iter().collect::<Vec<_>>());
            }
            Err(e) => {
                prop_assert!(intersection.is_empty());
                prop_assert_eq!(e, IngestError::NoCommonLocales);
            }
        }
    }
}

#[test]
fn snapshot_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..20 {
        let snapshot = random_snapshot(&mut rng, 1 + i * 3);
        let path = dir.path().join(format!("s{i}.json"));
        save_snapshot(&snapshot, &path).unwrap();
        assert_eq!(load_snapshot(&path).unwrap(), snapshot);
    }
}

#[test]
fn missing_file_is_io() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(
        load_snapshot(&dir.path().join("nope.json")),
        Err(IngestError::Io(_))
    ));
}
