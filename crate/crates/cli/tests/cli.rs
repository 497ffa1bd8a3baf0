use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn convmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convmc"))
        .args(args)
        .env_remove("CONVMC_SEED")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Keys {
    _dir: tempfile::TempDir,
    dir: PathBuf,
}

impl Keys {
    fn new() -> Keys {
        let d = tempfile::tempdir().unwrap();
        Keys { dir: d.path().to_owned(), _dir: d }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn keygen(&self, tag: &str, seed: &str, extra: &[&str]) -> Output {
        let (p, k) = (self.path(&format!("{tag}.pub")), self.path(&format!("{tag}.sec")));
        let mut args = vec![
            "keygen", "--q", "64", "--n", "62", "--k", "30", "--mu", "1", "--nu", "2", "--d", "8,46,8", "--seed", seed,
            "--pub", s(&p), "--sec", s(&k),
        ];
        args.extend_from_slice(extra);
        convmc(&args)
    }
}

#[test]
fn keygen_writes_public_key_of_expected_size() {
    let k = Keys::new();
    let out = k.keygen("a", "1", &[]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("44640 bits"));
    let len = std::fs::metadata(k.path("a.pub")).unwrap().len();
    // 5-byte magic, 17-byte header, 44640 / 6 symbols of two bytes each
    assert_eq!(len, 5 + 17 + 2 * 44640 / 6);
}

#[test]
fn same_seed_same_files() {
    let k = Keys::new();
    assert!(k.keygen("a", "7", &[]).status.success());
    assert!(k.keygen("b", "7", &[]).status.success());
    assert!(k.keygen("c", "8", &[]).status.success());
    let read = |n: &str| std::fs::read(k.path(n)).unwrap();
    assert_eq!(read("a.pub"), read("b.pub"));
    assert_eq!(read("a.sec"), read("b.sec"));
    assert_ne!(read("a.pub"), read("c.pub"));
}

#[test]
fn seed_from_environment() {
    let k = Keys::new();
    let run = |tag: &str| {
        let (p, sk) = (k.path(&format!("{tag}.pub")), k.path(&format!("{tag}.sec")));
        Command::new(env!("CARGO_BIN_EXE_convmc"))
            .args(["keygen", "--q", "16", "--n", "14", "--k", "6", "--mu", "1", "--nu", "1", "--d", "4,6,4"])
            .args(["--pub", s(&p), "--sec", s(&sk)])
            .env("CONVMC_SEED", "42")
            .output()
            .unwrap()
            .status
    };
    assert!(run("x").success() && run("y").success());
    assert_eq!(std::fs::read(k.path("x.pub")).unwrap(), std::fs::read(k.path("y.pub")).unwrap());
}

#[test]
fn usage_errors_exit_one() {
    let out = convmc(&["keygen", "--q", "64", "--n", "62", "--k", "30", "--mu", "1", "--nu", "2", "--pub", "a", "--sec", "b"]);
    assert_eq!(out.status.code(), Some(1));
    let out = convmc(&["keygen", "--q", "64", "--n", "62", "--k", "30", "--mu", "1", "--nu", "2", "--d", "8,8", "--pub", "a", "--sec", "b"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(convmc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(convmc(&["--version"]).status.code(), Some(0));
}

#[test]
fn damaged_files_exit_three() {
    let k = Keys::new();
    assert!(k.keygen("a", "1", &[]).status.success());
    let msg = k.path("m");
    std::fs::write(&msg, b"hello").unwrap();
    let bad = k.path("bad.pub");
    let mut bytes = std::fs::read(k.path("a.pub")).unwrap();
    bytes.truncate(bytes.len() - 3);
    std::fs::write(&bad, bytes).unwrap();
    let ct = k.path("c");
    let out = convmc(&["encrypt", "--pub", s(&bad), "--in", s(&msg), "--out", s(&ct)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncated"));
    let missing = k.path("nope");
    let out = convmc(&["encrypt", "--pub", s(&k.path("a.pub")), "--in", s(&missing), "--out", s(&ct)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn wrong_key_does_not_decrypt() {
    let k = Keys::new();
    assert!(k.keygen("a", "1", &[]).status.success());
    assert!(k.keygen("b", "2", &[]).status.success());
    let (msg, ct, out) = (k.path("m"), k.path("c"), k.path("o"));
    std::fs::write(&msg, b"attack at dawn").unwrap();
    let enc = convmc(&["encrypt", "--pub", s(&k.path("a.pub")), "--in", s(&msg), "--out", s(&ct), "--seed", "3"]);
    assert!(enc.status.success());
    let dec = convmc(&["decrypt", "--sec", s(&k.path("b.sec")), "--in", s(&ct), "--out", s(&out)]);
    if dec.status.success() {
        assert_ne!(std::fs::read(&out).unwrap(), b"attack at dawn");
    } else {
        assert_eq!(dec.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&dec.stderr).contains("block 0"));
    }
}

#[test]
fn alternative_mode_needs_sigma() {
    let k = Keys::new();
    assert!(k.keygen("a", "1", &[]).status.success());
    let (msg, ct, out) = (k.path("m"), k.path("c"), k.path("o"));
    let data: Vec<u8> = (0..2000u32).map(|i| (i * 7) as u8).collect();
    std::fs::write(&msg, &data).unwrap();
    let pk = k.path("a.pub");
    let enc = convmc(&["encrypt", "--pub", s(&pk), "--in", s(&msg), "--out", s(&ct), "--mode", "alt"]);
    assert_eq!(enc.status.code(), Some(2));
    // several frames of sigma + 1 message blocks
    let enc = convmc(&["encrypt", "--pub", s(&pk), "--in", s(&msg), "--out", s(&ct), "--mode", "alt", "--sigma", "2"]);
    assert!(enc.status.success());
    let dec = convmc(&["decrypt", "--sec", s(&k.path("a.sec")), "--in", s(&ct), "--out", s(&out)]);
    assert!(dec.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), data);
}

#[test]
fn analyze_table_first_row() {
    let out = convmc(&["analyze", "--table", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..4], ["62", "30", "46", "132"]);
    let wf: f64 = row[4].parse().unwrap();
    assert!((wf - 136.0).abs() < 1.0);
    assert_eq!(row[5], "44640");
}

#[test]
fn analyze_single_instance() {
    let out = convmc(&["analyze", "--q", "256", "--n", "180", "--k", "96", "--mu", "1", "--nu", "2", "--d", "60,60,60", "--s", "30"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2^288"));
    assert!(text.contains("public key: 552960 bits"));
    assert!(text.contains("ciphertext: 48960 bits"));

    let out = convmc(&["analyze", "--q", "32", "--n", "20", "--k", "8", "--mu", "0", "--nu", "0", "--d", "20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("public key: 800 bits"), "{text}");
}
