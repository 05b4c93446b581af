#pragma once

#include <stdexcept>
#include <string>

namespace robotarm {

/// Non-finite input or an argument outside the domain of a closed form.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative solver ran out of iterations; carries the best residual seen.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigenvalues or fixed-point type incompatible with the requested analysis.
class ClassificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad scenario/config input. `key()` names the offending key.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace robotarm
