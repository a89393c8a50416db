use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Identity verifiers report coefficient
/// mismatches through [`crate::identities::VerificationReport`], not through
/// this type; `Error` covers violated preconditions and invalid inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Kronecker symbol (a/0) is not defined here")]
    ZeroModulus,
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("{value} has no inverse modulo {modulus}")]
    NotInvertible { value: i64, modulus: i64 },
    #[error("({0},{1},{2}) is not positive definite")]
    NotPositiveDefinite(i64, i64, i64),
    #[error("{0} is not a valid discriminant (need negative and 0 or 1 mod 4)")]
    InvalidDiscriminant(i64),
    #[error("form ({0},{1},{2}) is not primitive")]
    Imprimitive(i64, i64, i64),
    #[error("discriminant mismatch: {left} vs {right}")]
    DiscriminantMismatch { left: i64, right: i64 },
    #[error("{what} must be positive, got {value}")]
    NotPositive { what: &'static str, value: i64 },
    #[error("{what} must be at least {min}, got {value}")]
    BelowMinimum {
        what: &'static str,
        min: i64,
        value: i64,
    },
    #[error("residue {residue} out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: i64, modulus: i64 },
    #[error("restricted sum needs a nonempty residue-pair set")]
    EmptyResidueSet,
    #[error("form ({0},{1},{2}) represents no value coprime to {3} up to the search bound {4}")]
    NoCoprimeValue(i64, i64, i64, i64, i64),
    #[error("character system of {disc} does not split the class group into equal genera")]
    GenusValidation { disc: i64 },
    #[error("no class of the image lies in the requested genus")]
    EmptyGenusSlice,
    #[error(
        "classes of the genus slice represent coprime values in more than one \
         residue class mod {modulus} ({first} and {second})"
    )]
    MixedResidues {
        modulus: i64,
        first: i64,
        second: i64,
    },
    #[error("{0} overflows 64-bit range")]
    Overflow(&'static str),
}
