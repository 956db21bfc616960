#pragma once

#include <stdexcept>
#include <string>

namespace cyclecert {

// Every failure raised by the library carries a short machine-readable kind
// next to the human message, so the CLI can map it to an exit code.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Exact-algebra failures.
struct ZeroPolynomial : Error { explicit ZeroPolynomial(const std::string& w) : Error("ZeroPolynomial", w) {} };
struct EndpointRoot : Error { explicit EndpointRoot(const std::string& w) : Error("EndpointRoot", w) {} };
struct DegreeZero : Error { explicit DegreeZero(const std::string& w) : Error("DegreeZero", w) {} };
struct SignAmbiguous : Error { explicit SignAmbiguous(const std::string& w) : Error("SignAmbiguous", w) {} };
struct SizeCapExceeded : Error { explicit SizeCapExceeded(const std::string& w) : Error("SizeCapExceeded", w) {} };
struct ParseError : Error { explicit ParseError(const std::string& w) : Error("ParseError", w) {} };
struct DomainError : Error { explicit DomainError(const std::string& w) : Error("DomainError", w) {} };

// Certification failures: the computation ran but a hypothesis did not hold.
struct HypothesisFailed : Error {
    HypothesisFailed(std::string which_, std::string witness_)
        : Error("HypothesisFailed", "(" + which_ + ") witness " + witness_),
          which(std::move(which_)), witness(std::move(witness_)) {}
    std::string which;
    std::string witness;
};
struct PieceFailed : Error {
    PieceFailed(std::string piece_, std::string witness_)
        : Error("PieceFailed", piece_ + ": " + witness_), piece(std::move(piece_)), witness(std::move(witness_)) {}
    std::string piece;
    std::string witness;
};
struct ContactPossible : Error { explicit ContactPossible(const std::string& w) : Error("ContactPossible", w) {} };
struct SingularConditionSystem : Error {
    explicit SingularConditionSystem(const std::string& w) : Error("SingularConditionSystem", w) {}
};

// Numerical failures.
struct ToleranceNotMet : Error { explicit ToleranceNotMet(const std::string& w) : Error("ToleranceNotMet", w) {} };
struct PrecisionLoss : Error { explicit PrecisionLoss(const std::string& w) : Error("PrecisionLoss", w) {} };
struct OrderTooSmall : Error { explicit OrderTooSmall(const std::string& w) : Error("OrderTooSmall", w) {} };
struct OutOfScope : Error { explicit OutOfScope(const std::string& w) : Error("OutOfScope", w) {} };
struct StepUnderflow : Error { explicit StepUnderflow(const std::string& w) : Error("StepUnderflow", w) {} };
struct Blowup : Error { explicit Blowup(const std::string& w) : Error("Blowup", w) {} };
struct NoReturn : Error { explicit NoReturn(const std::string& w) : Error("NoReturn", w) {} };
struct NoCrossing : Error { explicit NoCrossing(const std::string& w) : Error("NoCrossing", w) {} };
struct NoSignChange : Error { explicit NoSignChange(const std::string& w) : Error("NoSignChange", w) {} };
struct NonPositiveParameter : Error {
    explicit NonPositiveParameter(const std::string& w) : Error("NonPositiveParameter", w) {}
};
struct NoOval : Error { explicit NoOval(const std::string& w) : Error("NoOval", w) {} };

inline bool is_certificate_failure(const Error& e) {
    const auto& k = e.kind();
    return k == "HypothesisFailed" || k == "PieceFailed" || k == "ContactPossible" || k == "SignAmbiguous";
}

}  // namespace cyclecert
