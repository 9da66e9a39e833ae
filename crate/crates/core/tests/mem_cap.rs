//! Runs in its own process: the cap is read from the environment.

use stanley::cli::dispatch;
use stanley::{generate, Error, SeedSet, SieveConfig};

#[test]
fn memory_cap_is_a_resource_error() {
    std::env::set_var("STANLEY_MEM_CAP_MB", "1");
    let config = SieveConfig::from_env().unwrap();
    match stanley::GeneratedSequence::generate_with(&SeedSet::zero(), 1 << 20, config) {
        Err(Error::Resource { completed, .. }) => assert!(completed > 0),
        other => panic!("expected a resource error, got {other:?}"),
    }

    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = dispatch(["stanley", "generate", "--seed", "0", "--count", "1048576"], &mut out, &mut err);
    assert_eq!(code, 3, "{}", String::from_utf8_lossy(&err));

    std::env::set_var("STANLEY_MEM_CAP_MB", "lots");
    assert!(matches!(SieveConfig::from_env(), Err(Error::Input(_))));

    std::env::remove_var("STANLEY_MEM_CAP_MB");
    assert_eq!(generate(&SeedSet::zero(), 1 << 12).unwrap().len(), 1 << 12);
}
