//! Runtime ceilings. Each has a default and an environment override.

use std::env;

fn read(var: &str, default: u64) -> u64 {
    env::var(var).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
}

/// Largest tabled field order (`SUBCODES_FIELD_CEILING`, default 81, hard cap 256).
pub fn field_ceiling() -> u64 {
    read("SUBCODES_FIELD_CEILING", 81).min(256)
}

/// Largest untabled extension field order (`SUBCODES_EXT_CEILING`, default 2^40).
pub fn ext_field_ceiling() -> u64 {
    read("SUBCODES_EXT_CEILING", 1 << 40)
}

/// Most subspaces a single enumeration may produce (`SUBCODES_ENUM_CEILING`, default 10^7).
pub fn enumeration_ceiling() -> u64 {
    read("SUBCODES_ENUM_CEILING", 10_000_000)
}

/// Most codewords a pairwise exhaustive check accepts (`SUBCODES_PAIR_CEILING`, default 10^4).
pub fn pair_ceiling() -> u64 {
    read("SUBCODES_PAIR_CEILING", 10_000)
}

/// Most distance evaluations a fallback check inside hierarchical
/// verification may spend (`SUBCODES_FALLBACK_BUDGET`, default 5*10^7).
pub fn fallback_budget() -> u64 {
    read("SUBCODES_FALLBACK_BUDGET", 50_000_000)
}

/// Most codewords a construction materializes (`SUBCODES_EMIT_CEILING`, default 2*10^7).
pub fn emission_ceiling() -> u64 {
    read("SUBCODES_EMIT_CEILING", 20_000_000)
}

/// Most vertices a clique search accepts (`SUBCODES_CLIQUE_CEILING`, default 5000).
pub fn clique_vertex_ceiling() -> u64 {
    read("SUBCODES_CLIQUE_CEILING", 5_000)
}
