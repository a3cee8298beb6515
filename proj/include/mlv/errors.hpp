#pragma once

#include <stdexcept>
#include <string>

namespace mlv {

enum class ErrorKind {
    NotNested,
    NotMonic,
    NotIntegral,
    ZeroPolynomial,
    NotIrreducible,
    NotPrime,
    BudgetExhausted,
    UnstableCoefficient,
    NotResiduallyTranscendental,
    LimitStepPresent,
    PsiIsY,
    MLVViolation,
    SupportRequired,
    NotSquarefree,
    FieldMismatch,
    InvalidArgument,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::NotMonic: return "NotMonic";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::UnstableCoefficient: return "UnstableCoefficient";
    case ErrorKind::NotResiduallyTranscendental: return "NotResiduallyTranscendental";
    case ErrorKind::LimitStepPresent: return "LimitStepPresent";
    case ErrorKind::PsiIsY: return "PsiIsY";
    case ErrorKind::MLVViolation: return "MLVViolation";
    case ErrorKind::SupportRequired: return "SupportRequired";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// A violated precondition or a mathematically undefined request.
class DomainError : public std::runtime_error {
public:
    DomainError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// MLV condition failure, annotated with the offending step (1-based; 0 is the depth-zero node).
class MLVViolationError : public DomainError {
public:
    MLVViolationError(std::size_t step, std::string condition)
        : DomainError(ErrorKind::MLVViolation,
                      "step " + std::to_string(step) + ": " + condition),
          step_(step), condition_(std::move(condition)) {}

    std::size_t step() const noexcept { return step_; }
    const std::string& condition() const noexcept { return condition_; }

private:
    std::size_t step_;
    std::string condition_;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An identity that theory guarantees failed; always a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

#define MLV_ASSERT(cond, msg)                                                        \
    do {                                                                             \
        if (!(cond))                                                                 \
            throw ::mlv::InternalError(std::string("assertion failed: ") + (msg));   \
    } while (0)

} // namespace mlv
