use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("({j}, {k}, {n}) has the wrong parity: {expected}")]
    Parity {
        j: i64,
        k: i64,
        n: i64,
        expected: &'static str,
    },

    #[error("value at ({j}, {k}, {n}) is not strictly positive")]
    NonPositive { j: i64, k: i64, n: i64 },

    #[error("({j}, {k}, {n}) lies outside the computed domain")]
    OutOfDomain { j: i64, k: i64, n: i64 },

    #[error("enumeration refused: Aztec diamond of size {size} has {configurations} configurations (limit is size {limit})")]
    EnumerationGuard {
        size: usize,
        limit: usize,
        configurations: String,
    },

    #[error("face ({0}, {1}) is not in the closed diamond")]
    FaceOutsideDiamond(i64, i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse {input:?} as a rational number")]
    ParseRational { input: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_odd(j: i64, k: i64, n: i64) -> Result<()> {
    if (j + k + n).rem_euclid(2) == 1 {
        Ok(())
    } else {
        Err(Error::Parity {
            j,
            k,
            n,
            expected: "j + k + n odd",
        })
    }
}

pub(crate) fn check_even(j: i64, k: i64, n: i64) -> Result<()> {
    if (j + k + n).rem_euclid(2) == 0 {
        Ok(())
    } else {
        Err(Error::Parity {
            j,
            k,
            n,
            expected: "j + k + n even",
        })
    }
}
