#include "sgpv/error.hpp"

namespace sgpv {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidInterval: return "InvalidInterval";
        case Errc::TruncationEmpty: return "TruncationEmpty";
        case Errc::InvalidScale: return "InvalidScale";
        case Errc::InvalidProportion: return "InvalidProportion";
        case Errc::InvalidProbability: return "InvalidProbability";
        case Errc::UnboundedEstimate: return "UnboundedEstimate";
        case Errc::DegenerateDesign: return "DegenerateDesign";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::InvalidSummary: return "InvalidSummary";
        case Errc::MissingComparator: return "MissingComparator";
        case Errc::InvalidSeries: return "InvalidSeries";
    }
    return "Unknown";
}

}  // namespace sgpv
