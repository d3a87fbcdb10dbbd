#pragma once

#include <stdexcept>
#include <string>

namespace autorand {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArityMismatch : public Error { public: using Error::Error; };
class EmptyLanguage : public Error { public: using Error::Error; };
class NoSuccessor : public Error { public: using Error::Error; };
class MalformedCode : public Error { public: using Error::Error; };
class PumpingError : public Error { public: using Error::Error; };
class FairnessViolation : public Error { public: using Error::Error; };
class BetFactorViolation : public Error { public: using Error::Error; };
class ValidityBudgetExceeded : public Error { public: using Error::Error; };
class LearnerStall : public Error { public: using Error::Error; };
class HypothesesExhausted : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class PreconditionError : public Error { public: using Error::Error; };

}  // namespace autorand
