//! Driving the command-line front end in process: write a state file, run
//! two subcommands and re-run one from its own JSON document.

use oneshot_qit::cli::{argv_from_document, run};
use oneshot_qit::cq::CQState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join("oneshot-qit-bitpair.json");
    std::fs::write(&path, CQState::uniform_bit().to_json())?;
    let state = path.to_str().ok_or("non-UTF-8 temp path")?;

    let out = run([
        "oneshot-qit",
        "--format",
        "csv",
        "search",
        "--task",
        "pa",
        "--state",
        state,
        "--eps",
        "0.3",
        "--cap",
        "4",
    ]);
    print!("{}", out.stdout);

    let out = run(["oneshot-qit", "simulate", "--task", "pa", "--state", state, "--size", "2", "--method", "exact"]);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout)?;
    println!("exit {}, value {}", out.code, doc["result"]["value"]);

    let again = run(argv_from_document(&doc).ok_or("document without params")?);
    let redo: serde_json::Value = serde_json::from_str(&again.stdout)?;
    println!("re-run reproduces result: {}", redo["result"] == doc["result"]);

    let bad = run([
        "oneshot-qit",
        "bounds",
        "--task",
        "covering",
        "--state",
        state,
        "--eps",
        "0.3",
        "--delta",
        "0.12",
        "--c",
        "0.05",
    ]);
    print!("exit {}: {}", bad.code, bad.stderr);
    std::fs::remove_file(&path)?;
    Ok(())
}
