#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgpv {

enum class Errc {
    InvalidInterval,
    TruncationEmpty,
    InvalidScale,
    InvalidProportion,
    InvalidProbability,
    UnboundedEstimate,
    DegenerateDesign,
    InvalidConfig,
    InvalidSummary,
    MissingComparator,
    InvalidSeries,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace sgpv
