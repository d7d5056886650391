#pragma once

#include <stdexcept>
#include <string>

namespace cww {

// Argument outside the mathematical domain of an operation
// (interval division through zero, sqrt of a negative, 𝒜 outside [0,1/2], ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A certified comparison stayed inconclusive after refining to the precision cap.
class InconclusiveError : public std::runtime_error {
public:
    explicit InconclusiveError(const std::string& what) : std::runtime_error(what) {}
};

// A leaf comparison in a tail-measure evaluation could not be resolved.
class IndeterminateError : public std::runtime_error {
public:
    explicit IndeterminateError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cww
