// SPDX-License-Identifier: Apache-2.0
//
// randsense: precoding and Monte Carlo evaluation for MIMO sensing
// with random communication signals.

#pragma once

#include <stdexcept>
#include <string>

namespace randsense {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument values or inconsistent matrix dimensions.
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

// Orthogonal training signals require frame_len >= n_tx.
class InfeasibleOrthogonalityError : public InvalidParameterError {
public:
    using InvalidParameterError::InvalidParameterError;
};

// A Hermitian solve lost positive definiteness or its residual blew past
// tolerance.
class NumericalFailureError : public Error {
public:
    using Error::Error;
};

// Config file syntax or schema violations; message carries the field path.
class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace randsense
