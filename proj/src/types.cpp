#include "ppgmotion/types.hpp"

#include <cmath>
#include <stdexcept>

namespace ppg {

std::string to_string(Label label) {
    switch (label) {
        case Label::Stationary: return "stationary";
        case Label::SitToStand: return "sit_to_stand";
        case Label::LieToStand: return "lie_to_stand";
    }
    throw std::invalid_argument("unknown label value");
}

Label label_from_string(const std::string& name) {
    if (name == "stationary") return Label::Stationary;
    if (name == "sit_to_stand" || name == "sit-to-stand") return Label::SitToStand;
    if (name == "lie_to_stand" || name == "lie-to-stand") return Label::LieToStand;
    throw std::invalid_argument("unknown class label: " + name);
}

void Recording::validate() const {
    if (time_s.size() != value.size())
        throw std::invalid_argument("recording: time and value lengths differ");
    if (!(sample_rate > 0.0))
        throw std::invalid_argument("recording: sample_rate must be positive");
    for (std::size_t i = 0; i < time_s.size(); ++i) {
        if (!std::isfinite(time_s[i]) || !std::isfinite(value[i]))
            throw std::invalid_argument("recording: non-finite sample");
        if (i > 0 && !(time_s[i] > time_s[i - 1]))
            throw std::invalid_argument("recording: times not strictly increasing");
    }
}

}  // namespace ppg
