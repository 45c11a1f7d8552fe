#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bvf {

/// The seven classical notions of bounded variation for a bivariate function.
enum class Sense { vitali, frechet, hardy, arzela, hahn, pierpont, tonelli };

inline constexpr std::array<Sense, 7> all_senses = {
    Sense::vitali, Sense::frechet, Sense::hardy,    Sense::arzela,
    Sense::hahn,   Sense::pierpont, Sense::tonelli};

inline std::string_view to_string(Sense s) {
    switch (s) {
        case Sense::vitali:   return "vitali";
        case Sense::frechet:  return "frechet";
        case Sense::hardy:    return "hardy";
        case Sense::arzela:   return "arzela";
        case Sense::hahn:     return "hahn";
        case Sense::pierpont: return "pierpont";
        case Sense::tonelli:  return "tonelli";
    }
    return "?";
}

inline Sense sense_from_string(std::string_view name) {
    for (Sense s : all_senses) {
        if (to_string(s) == name) return s;
    }
    throw std::invalid_argument("unknown variation sense: '" + std::string(name) +
                                "' (expected one of vitali, frechet, hardy, arzela, "
                                "hahn, pierpont, tonelli)");
}

} // namespace bvf
