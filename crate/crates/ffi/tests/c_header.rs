//! Compiles and runs a small C program against the generated header and
//! the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "densclass.h"

int main(void) {
    DcRule *gkl = NULL;
    if (dc_rule_by_name("gkl", &gkl) != DC_STATUS_OK) return 10;
    DcRule *bad = NULL;
    if (dc_rule_by_name("nope", &bad) != DC_STATUS_UNKNOWN_RULE) return 11;
    if (dc_last_error() == NULL) return 12;

    uint64_t num = 0, den = 0;
    if (dc_p_threshold(12, &num, &den) != DC_STATUS_OK || num != 1 || den != 576) return 13;

    DcTrialResult r;
    if (dc_run_trial(gkl, 999, 0.001, 3996, 7, &r) != DC_STATUS_OK) return 14;
    printf("%d %lld %d\n", (int)r.verdict, (long long)r.fixation_time, r.correct);
    dc_rule_free(gkl);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = crate_dir.join("include");
    assert!(header_dir.join("densclass.h").exists());

    // target/<profile>/deps/<this test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libdensclass_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());

    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    let bin = tmp.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&header_dir)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("run cc");
    assert!(status.success());

    let output = Command::new(&bin).output().unwrap();
    assert!(output.status.success(), "exit {:?}", output.status.code());
    assert_eq!(String::from_utf8_lossy(&output.stdout).trim(), "0 1 1");
}
