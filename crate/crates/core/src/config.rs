use std::sync::OnceLock;

/// Environment variable overriding [`Limits::max_n`].
pub const MAX_N_ENV: &str = "SGCLOSE_MAX_N";

/// Guardrails for the exponential and cubic routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier accepted by [`crate::FiniteSemigroup::build`].
    pub max_n: usize,
    /// Largest carrier for which homomorphisms to `2` are listed.
    pub hom_enum_bound: usize,
    /// Largest carrier for the `2^n` brute-force homomorphism oracle.
    pub hom_brute_force_bound: usize,
    /// Largest carrier for ideal enumeration.
    pub ideal_enum_bound: usize,
    /// Largest vertex count handed to the exact clique search.
    pub clique_cap: usize,
    /// Largest order for the exhaustive corpus without the order-5 flag.
    pub corpus_max_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_n: 4096,
            hom_enum_bound: 20,
            hom_brute_force_bound: 12,
            ideal_enum_bound: 16,
            clique_cap: 64,
            corpus_max_order: 4,
        }
    }
}

impl Limits {
    /// Defaults with `max_n` taken from `SGCLOSE_MAX_N` when it parses.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(n) = std::env::var(MAX_N_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            limits.max_n = n;
        }
        limits
    }

    /// Process-wide limits, read from the environment once.
    pub fn global() -> &'static Limits {
        static GLOBAL: OnceLock<Limits> = OnceLock::new();
        GLOBAL.get_or_init(Limits::from_env)
    }
}
