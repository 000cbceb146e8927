#pragma once

#include <stdexcept>
#include <string>

namespace indram
{
    /// Malformed input: out-of-range vertex, self-loop, dimension mismatch, bad parameter.
    class InvalidInput : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /// An enumeration cap or search budget would be exceeded.
    class BudgetExceeded : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A randomized procedure ran out of attempts (or resamples).
    class AttemptsExhausted : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A checked hypothesis of an operation does not hold on this input.
    class PreconditionFailed : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Bug guard: something the math says cannot happen did happen.
    class InvariantViolation : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };
}
