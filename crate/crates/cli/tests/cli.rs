use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn packlab(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_packlab")).args(args).output().expect("run packlab");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("packlab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn construct_then_count_and_pack() {
    let dir = scratch_dir("k5");
    let d = dir.to_str().unwrap();
    let (code, v, _) = packlab(&["construct", "k5_minus", "--out", d]);
    assert_eq!(code, 0);
    assert!(v["claims"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    for f in ["graph.json", "cover.json", "claims.json"] {
        assert!(dir.join(f).exists(), "{f} missing");
    }
    let cover = dir.join("cover.json");
    let cover = cover.to_str().unwrap();
    let (code, v, _) = packlab(&["count", "--cover", cover]);
    assert_eq!((code, v["transversals"].as_str()), (0, Some("54")));
    let (code, v, _) = packlab(&["pack", "--cover", cover]);
    assert_eq!((code, v["verdict"].as_str()), (1, Some("NONE")));
    let (code, v, _) = packlab(&["pack", "--cover", cover, "--budget", "1"]);
    assert_eq!((code, v["verdict"].as_str()), (3, Some("INCONCLUSIVE")));
}

#[test]
fn fractional_certificate_is_checked() {
    let dir = scratch_dir("2tree");
    let (code, _, _) = packlab(&["construct", "outerplanar_2tree", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, v, _) = packlab(&["frac", "--cover", dir.join("cover.json").to_str().unwrap(), "--certify"]);
    assert_eq!(code, 1);
    assert_eq!(v["certified"], true);
    assert_eq!(v["result"]["Infeasible"]["Clique"]["total"], "22/7");
}

#[test]
fn upper_bounds_on_small_graphs() {
    let (code, v, _) = packlab(&["upper", "--graph", "K4", "--k", "4"]);
    assert_eq!((code, v["verdict"].as_str(), v["checked"].as_u64()), (0, Some("HOLDS"), Some(2880)));
    let (code, v, _) = packlab(&["upper", "--graph", "C4", "--k", "3"]);
    assert_eq!((code, v["verdict"].as_str()), (1, Some("FAILS")));
    assert!(v["witness"].is_object());
    let (code, _, err) = packlab(&["upper", "--graph", "nonsense", "--k", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("nonsense"));
}

#[test]
fn derangement_commands() {
    let dir = scratch_dir("perms");
    let perms = dir.join("case1.txt");
    std::fs::write(&perms, "51234786\n45123678\n34512867\n23451687\n").unwrap();
    let (code, v, _) = packlab(&["derange", "--perms", perms.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["bad_fifth_rows"]["bad"].as_array().unwrap().len(), 96);
    let matrix = dir.join("m.txt");
    std::fs::write(&matrix, "3\n011\n101\n110\n").unwrap();
    let (code, v, _) = packlab(&["permanent", "--matrix", matrix.to_str().unwrap()]);
    assert_eq!((code, v["permanent"].as_u64()), (0, Some(2)));
}

#[test]
fn verify_by_id() {
    let (code, v, _) = packlab(&["verify", "g733-safe-choices"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "VERIFIED");
    assert_eq!(v["lemma_id"], "g733-safe-choices");
    let (code, _, err) = packlab(&["verify", "no-such-lemma"]);
    assert_eq!(code, 2);
    assert!(err.contains("no-such-lemma"));
    let (code, _, _) = packlab(&["verify", "c3p3", "--tier", "slow"]);
    assert_eq!(code, 2);
}
