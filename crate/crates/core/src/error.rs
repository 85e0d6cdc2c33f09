use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Dicke label: N = {n_atoms}, 2J = {j2}, 2M = {m2}")]
    InvalidLabel { n_atoms: usize, j2: i64, m2: i64 },

    #[error("symmetric subspace required (2J = N), got 2J = {j2} for N = {n_atoms}")]
    UnsupportedSubspace { n_atoms: usize, j2: i64 },

    #[error("no excitation left: {n_ground} of {n_atoms} atoms are in the ground state")]
    NoExcitation { n_atoms: usize, n_ground: usize },

    #[error("{what} is limited to N <= {cap}, got N = {n_atoms}")]
    Capacity {
        what: &'static str,
        n_atoms: usize,
        cap: usize,
    },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid duration: {0}")]
    InvalidDuration(f64),

    #[error("invalid time grid: {0}")]
    InvalidTimes(String),

    #[error("no photon available: click weight {weight:e} is below the detection floor")]
    NoPhotonAvailable { weight: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("state is outside the reduced family: {0}")]
    NotClassUniform(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
