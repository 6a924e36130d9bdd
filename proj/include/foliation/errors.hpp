#pragma once

#include <stdexcept>
#include <string>

namespace foliation {

// Operands that cannot be combined: different nvars, field tags, degrees.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An operation was called outside its documented domain.
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Exterior degree outside the supported range 0..3.
class UnsupportedDegreeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Hessian rank below nvars in Morse normalization.
class RankDeficiencyError : public PreconditionError {
public:
    RankDeficiencyError(int rank, int nvars)
        : PreconditionError("degenerate quadratic part: Hessian rank " + std::to_string(rank) +
                            " < " + std::to_string(nvars)),
          rank_(rank) {}
    int rank() const noexcept { return rank_; }

private:
    int rank_;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace foliation
