// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace skorokhod {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad interval, negative mass, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two measures that must share a mean do not.
class MeanMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// The initial and target measures are not in convex order.
class ConvexOrderViolation : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A declared check violates the hypotheses of the statement it tests.
class HypothesisViolation : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Scenario file could not be parsed or does not resolve.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (PSOR divergence, non-monotone contact set, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace skorokhod
