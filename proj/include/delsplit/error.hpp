#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace delsplit {

enum class Errc {
        WrongArity,
        IllegalHeapSize,
        DomainError,
        Unsupported,
        IllegalMove,
        LimitExceeded,
        InternalContradiction,
        ParseError,
};

std::string_view to_string(Errc code);

// Every failure raised by the library. `code()` is machine-readable;
// `reason()` refines IllegalMove (and is empty otherwise).
class Error : public std::runtime_error {
public:
        Error(Errc code, const std::string& message, std::string reason = {})
            : std::runtime_error(message), code_(code), reason_(std::move(reason))
        {
        }

        Errc code() const noexcept { return code_; }
        const std::string& reason() const noexcept { return reason_; }

private:
        Errc code_;
        std::string reason_;
};

} // namespace delsplit
