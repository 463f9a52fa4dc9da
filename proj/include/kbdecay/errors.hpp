// Error types shared by every kbdecay module.
#pragma once

#include <stdexcept>
#include <string>

namespace kbdecay {

/// Base class for all library errors. Callers that only care about
/// success/failure can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define KBDECAY_DEFINE_ERROR(Name)                                         \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string &what) : Error(#Name ": " + what) {} \
    }

KBDECAY_DEFINE_ERROR(InvalidParameter);
KBDECAY_DEFINE_ERROR(NonRationalCoefficient);
KBDECAY_DEFINE_ERROR(Divergence);
KBDECAY_DEFINE_ERROR(ModeMismatch);
KBDECAY_DEFINE_ERROR(ZeroDrift);
KBDECAY_DEFINE_ERROR(EmptyWindow);
KBDECAY_DEFINE_ERROR(DegenerateBasis);
KBDECAY_DEFINE_ERROR(NonpositiveSample);
KBDECAY_DEFINE_ERROR(InvalidInterval);
KBDECAY_DEFINE_ERROR(ConfigError);
KBDECAY_DEFINE_ERROR(IOError);

#undef KBDECAY_DEFINE_ERROR

} // namespace kbdecay
