#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace shadowlab {

// Base for every typed failure thrown by the library. Callers that only
// want a broad catch can use this; tests match the concrete types.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonPositiveMeasure : public Error {
public:
    std::int64_t k;
    explicit NonPositiveMeasure(std::int64_t k_)
        : Error("nonpositive or non-finite cell mass at k=" + std::to_string(k_)), k(k_) {}
};

class GeneratorMismatch : public Error {
public:
    std::int64_t k;
    GeneratorMismatch(std::int64_t k_, double got, double want)
        : Error("tabulated value disagrees with generator at k=" + std::to_string(k_) +
                " (got " + std::to_string(got) + ", generator " + std::to_string(want) + ")"),
          k(k_) {}
};

class InconsistentPartition : public Error {
public:
    std::int64_t k;
    InconsistentPartition(std::int64_t k_, double sum, double nu)
        : Error("sub-cell masses at k=" + std::to_string(k_) + " sum to " +
                std::to_string(sum) + " but the cell mass is " + std::to_string(nu)),
          k(k_) {}
};

class WindowExhausted : public Error {
public:
    WindowExhausted(int depth, std::int64_t lo, std::int64_t hi)
        : Error("depth " + std::to_string(depth) + " does not fit in window [" +
                std::to_string(lo) + "," + std::to_string(hi) + "]") {}
};

class NoWitness : public Error {
public:
    explicit NoWitness(const std::string& detail) : Error("no witness constant: " + detail) {}
};

class NonPositiveDensity : public Error {
public:
    double x;
    explicit NonPositiveDensity(double x_)
        : Error("density is nonpositive or non-finite at x=" + std::to_string(x_)), x(x_) {}
};

class HypothesisViolated : public Error {
public:
    explicit HypothesisViolated(const std::string& detail)
        : Error("envelope ratio hypothesis fails: " + detail) {}
};

class QuadratureFailure : public Error {
public:
    QuadratureFailure(double a, double b, double err)
        : Error("quadrature on [" + std::to_string(a) + "," + std::to_string(b) +
                "] did not reach tolerance (error estimate " + std::to_string(err) + ")") {}
};

class WindowOverrun : public Error {
public:
    std::int64_t k;
    explicit WindowOverrun(std::int64_t k_, const std::string& what_)
        : Error("index " + std::to_string(k_) + " falls outside the " + what_ + " window"),
          k(k_) {}
};

class NotGeneralizedHyperbolic : public Error {
public:
    explicit NotGeneralizedHyperbolic(const std::string& detail)
        : Error("operator admits no hyperbolic splitting: " + detail) {}
};

class TailBudgetExceeded : public Error {
public:
    TailBudgetExceeded(std::int64_t need, std::int64_t have)
        : Error("series tail needs " + std::to_string(need) +
                " terms but the window only provides " + std::to_string(have)) {}
};

class NotSplittable : public Error {
public:
    explicit NotSplittable(const std::string& detail)
        : Error("no stable/unstable index splitting: " + detail) {}
};

class WrongSubspace : public Error {
public:
    explicit WrongSubspace(const std::string& detail)
        : Error("function lies outside the required half-space: " + detail) {}
};

class WeightMismatch : public Error {
public:
    std::int64_t k;
    WeightMismatch(std::int64_t k_, double got, double want)
        : Error("weight at k=" + std::to_string(k_) + " is " + std::to_string(got) +
                " but the measure sequence implies " + std::to_string(want)),
          k(k_) {}
};

class BadInput : public Error {
public:
    explicit BadInput(const std::string& detail) : Error(detail) {}
};

} // namespace shadowlab
