#pragma once

#include <stdexcept>
#include <string>

namespace bgqed {

// Coarse error classes; the CLI maps these onto exit codes.
enum class ErrorClass { config, numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), cls_(cls), kind_(std::move(kind)), message_(what) {}

    ErrorClass error_class() const noexcept { return cls_; }
    const std::string& kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }

private:
    ErrorClass cls_;
    std::string kind_;
    std::string message_;
};

#define BGQED_NUMERIC_ERROR(Name)                                                  \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& what) : Error(ErrorClass::numeric, #Name, what) {} \
    };

#define BGQED_CONFIG_ERROR(Name)                                                   \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& what) : Error(ErrorClass::config, #Name, what) {} \
    };

BGQED_NUMERIC_ERROR(NoRoot)
BGQED_NUMERIC_ERROR(PoorFit)
BGQED_NUMERIC_ERROR(QuadratureFailure)
BGQED_NUMERIC_ERROR(NonRealHopping)
BGQED_NUMERIC_ERROR(SingularSystem)
BGQED_NUMERIC_ERROR(NoPeak)
BGQED_NUMERIC_ERROR(DomainError)
BGQED_NUMERIC_ERROR(NegativeWindow)
BGQED_NUMERIC_ERROR(OutOfBracket)
BGQED_NUMERIC_ERROR(NoConvergence)
BGQED_NUMERIC_ERROR(AmbiguousSelection)
BGQED_NUMERIC_ERROR(EigenFailure)

BGQED_CONFIG_ERROR(InvalidMomentum)
BGQED_CONFIG_ERROR(BasisMismatch)
BGQED_CONFIG_ERROR(InvalidArgument)
BGQED_CONFIG_ERROR(ConfigError)

#undef BGQED_NUMERIC_ERROR
#undef BGQED_CONFIG_ERROR

} // namespace bgqed
