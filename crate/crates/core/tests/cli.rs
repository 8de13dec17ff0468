use std::fs;
use std::process::{Command, Output};

fn rispower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rispower"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn estimate_pin_json() {
    let o = rispower(&["estimate", "--builtin", "pin-16x16", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["static_total_uw"], 4_802_112);
    assert_eq!(v["total_drive_power_uw"], 2112);
    assert_eq!(v["total_drive_power"], "2.112 mW");
    assert_eq!(v["n_drive_circuit"], 32);
}

#[test]
fn estimate_varactor_needs_board_power() {
    let o = rispower(&["estimate", "--builtin", "varactor-8x16"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("control board power required"));

    let o = rispower(&[
        "estimate", "--builtin", "varactor-8x16", "--control-board-power", "1.5 W", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["total_drive_power_uw"], 1_720_000);
    assert_eq!(v["static_total_uw"], 3_220_000);
}

#[test]
fn estimate_rfswitch_csv() {
    let o = rispower(&["estimate", "--builtin", "rfswitch-8x8", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let col = headers.iter().position(|h| h == "n_drive_circuit").unwrap();
    assert_eq!(&rows[0][col], "1");
}

#[test]
fn simulate_pin_all_ones_for_one_second() {
    let dir = tempfile::tempdir().unwrap();
    let states = dir.path().join("states.json");
    fs::write(
        &states,
        format!(r#"{{"segments":[{{"dwell_us":1000000,"cells":{:?}}}]}}"#, vec![1; 256]),
    )
    .unwrap();
    let o = rispower(&[
        "simulate", "--builtin", "pin-16x16", "--states", states.to_str().unwrap(), "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["energy_pj"], 8_027_712_000_000u64);
    assert_eq!(v["mean_power_uw"], 8_027_712);
    assert_eq!(v["duration_us"], 1_000_000);
}

#[test]
fn simulate_varactor_mean_is_static() {
    let dir = tempfile::tempdir().unwrap();
    let states = dir.path().join("states.json");
    let cells: Vec<u64> = (0..128).map(|i| ((i % 8) / 2) as u64).collect();
    fs::write(
        &states,
        format!(r#"{{"segments":[{{"dwell_us":3,"cells":{cells:?}}},{{"dwell_us":4,"cells":{:?}}}]}}"#, vec![7; 128]),
    )
    .unwrap();
    let o = rispower(&[
        "simulate", "--builtin", "varactor-8x16", "--control-board-power", "1.5 W",
        "--states", states.to_str().unwrap(), "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["mean_power_uw"], v["static_total_uw"]);
    assert_eq!(v["mean_dynamic_uw"], 0);
}

#[test]
fn simulate_malformed_states_reports_cell() {
    let dir = tempfile::tempdir().unwrap();
    let states = dir.path().join("states.json");
    let mut cells = vec![0; 256];
    cells[41] = 3;
    fs::write(&states, format!(r#"{{"segments":[{{"dwell_us":10,"cells":{cells:?}}}]}}"#)).unwrap();
    let o = rispower(&["simulate", "--builtin", "pin-16x16", "--states", states.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("cell 41"), "{}", stderr(&o));
}

#[test]
fn missing_files_exit_3() {
    let o = rispower(&["estimate", "--descriptor", "/nonexistent/d.json"]);
    assert_eq!(o.status.code(), Some(3));
    let o = rispower(&["simulate", "--builtin", "pin-16x16", "--states", "/nonexistent/s.json"]);
    assert_eq!(o.status.code(), Some(3));
    let o = rispower(&["catalog", "list", "--output", "/nonexistent/dir/out.txt"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_signals_per_circuit() {
    let o = rispower(&[
        "sweep", "--builtin", "rfswitch-8x8", "--param", "signals_per_circuit", "--values", "1,8,75",
        "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let counts: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["n_drive_circuit"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [64, 8, 1]);
}

#[test]
fn sweep_rejects_unknown_parameter() {
    let o = rispower(&["sweep", "--builtin", "pin-16x16", "--param", "voltage", "--values", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn compare_two_rows_csv() {
    let o = rispower(&["compare", "--builtin", "pin-16x16", "--builtin", "rfswitch-8x8", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("name,technology,"));
    assert!(lines[1].starts_with("rfswitch-8x8,"));
    assert!(lines[2].starts_with("pin-16x16,"));
}

#[test]
fn compare_needs_a_device() {
    let o = rispower(&["compare"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rispower(&["compare", "--builtin", "varactor-8x16"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rispower(&["compare", "--builtin", "varactor-8x16", "--builtin", "pin-16x16",
        "--control-board-power", "1.5 W", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    // The fill-in applies only to the varactor; PIN keeps its 4.8 W board.
    let pin = v.as_array().unwrap().iter().find(|r| r["name"] == "pin-16x16").unwrap();
    assert_eq!(pin["static_total_uw"], 4_802_112);
}

#[test]
fn catalog_list_and_show() {
    let o = rispower(&["catalog", "list", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let keys: Vec<_> = json(&o)
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["key"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(keys, ["pin-16x16", "varactor-8x16", "rfswitch-8x8"]);

    let o = rispower(&["catalog", "show", "rfswitch-8x8", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["descriptor"]["drive_circuit"]["signals_per_circuit"], 75);
    assert!(!v["provenance"].as_array().unwrap().is_empty());

    let o = rispower(&["catalog", "show", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn descriptor_file_round_trip_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rf.json");
    let o = rispower(&["catalog", "show", "rfswitch-8x8", "--format", "json"]);
    let v = json(&o);
    fs::write(&path, serde_json::to_string(&v["descriptor"]).unwrap()).unwrap();
    let from_file = rispower(&["estimate", "--descriptor", path.to_str().unwrap(), "--format", "json"]);
    let from_builtin = rispower(&["estimate", "--builtin", "rfswitch-8x8", "--format", "json"]);
    assert_eq!(from_file.stdout, from_builtin.stdout);
}

#[test]
fn output_flag_writes_file_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = rispower(&["estimate", "--builtin", "pin-16x16", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["static_total_uw"], 4_802_112);
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["compare", "--builtin", "pin-16x16", "--builtin", "rfswitch-8x8", "--format", "json"][..],
        &["catalog", "show", "pin-16x16", "--format", "json"][..],
        &["sweep", "--builtin", "pin-16x16", "--param", "cell_count", "--values", "512,256,100", "--format", "json"][..],
    ] {
        assert_eq!(rispower(args).stdout, rispower(args).stdout);
    }
}
