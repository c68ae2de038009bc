#pragma once

#include <stdexcept>
#include <string>

namespace brattelikit {

// Base for all hard errors thrown by the library. Report-style operations
// (validation, certification) return structs instead of throwing.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct OverflowError : Error {
    explicit OverflowError(const std::string& what) : Error(what) {}
};

// An ExplicitWindow source with TailPolicy::Fail was queried past its window.
struct TailPolicyError : Error {
    long level;
    explicit TailPolicyError(long lvl)
        : Error("matrix requested past explicit window at level " + std::to_string(lvl)),
          level(lvl) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(what) {}
};

struct NotPrimitiveError : Error {
    explicit NotPrimitiveError(const std::string& what) : Error(what) {}
};

struct DegenerateConeError : Error {
    explicit DegenerateConeError(const std::string& what) : Error(what) {}
};

struct ZeroPairingError : Error {
    ZeroPairingError() : Error("weight pairing sum is zero; cannot normalize") {}
};

struct NotCauchyError : Error {
    double oscillation;
    explicit NotCauchyError(double osc)
        : Error("rescaled weight sequence not Cauchy within tolerance"), oscillation(osc) {}
};

struct EmptyG0Error : Error {
    EmptyG0Error() : Error("all limit heights vanish; inconsistent with unit pairing") {}
};

struct EpsilonTooLargeError : Error {
    double epsilon, bound;
    EpsilonTooLargeError(double eps, double b)
        : Error("epsilon outside the admissible open interval"), epsilon(eps), bound(b) {}
};

struct DeltaUnknownError : Error {
    int cap;
    explicit DeltaUnknownError(int c)
        : Error("meet depth unknown up to cap " + std::to_string(c)), cap(c) {}
};

struct ToleranceViolationError : Error {
    double maxDeviation;
    explicit ToleranceViolationError(double dev)
        : Error("geometric and algebraic routes disagree; max deviation " + std::to_string(dev)),
          maxDeviation(dev) {}
};

struct NeedsPositiveWeightsError : Error {
    int level, vertex;
    NeedsPositiveWeightsError(int lvl, int v)
        : Error("zero-width stack with nonempty path set at level " + std::to_string(lvl)),
          level(lvl), vertex(v) {}
};

}  // namespace brattelikit
