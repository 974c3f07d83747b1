#pragma once

#include <stdexcept>
#include <string>

namespace bae {

// Every failure raised by the library carries a short machine-readable code
// next to the human message; the CLI reports both.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

  private:
    std::string code_;
};

#define BAE_DEFINE_ERROR(Name)                                                   \
    struct Name : Error {                                                        \
        explicit Name(const std::string& what = #Name) : Error(#Name, what) {} \
    };

BAE_DEFINE_ERROR(InputError)
BAE_DEFINE_ERROR(NonGenericInput)
BAE_DEFINE_ERROR(NotFertile)
BAE_DEFINE_ERROR(DegreeNotIncreasing)
BAE_DEFINE_ERROR(RootExtractionFailure)
BAE_DEFINE_ERROR(BAENotSatisfied)
BAE_DEFINE_ERROR(SingularLinearSystem)
BAE_DEFINE_ERROR(DegenerateSpectrum)
BAE_DEFINE_ERROR(NormalizationFailure)
BAE_DEFINE_ERROR(RootCollision)
BAE_DEFINE_ERROR(RankDeficiency)
BAE_DEFINE_ERROR(SingularSystem)
BAE_DEFINE_ERROR(DegenerateA)
BAE_DEFINE_ERROR(SingularWronskian)
BAE_DEFINE_ERROR(NotNilpotent)
BAE_DEFINE_ERROR(PeriodicityFailure)
BAE_DEFINE_ERROR(TruncationExceeded)
BAE_DEFINE_ERROR(InconsistentWave)
BAE_DEFINE_ERROR(PoleAtSample)
BAE_DEFINE_ERROR(NotKdV)
BAE_DEFINE_ERROR(NotInLeadingTerm)
BAE_DEFINE_ERROR(LineCoincidesWithOld)
BAE_DEFINE_ERROR(FlagInvalid)

#undef BAE_DEFINE_ERROR

} // namespace bae
