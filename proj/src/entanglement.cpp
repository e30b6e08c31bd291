#include "qdquapi/entanglement.hpp"

#include <stdexcept>

namespace qdquapi {

StandardState parse_standard_state(const std::string& name) {
  if (name == "e1") return StandardState::kE1;
  if (name == "e2") return StandardState::kE2;
  if (name == "e3") return StandardState::kE3;
  if (name == "e4") return StandardState::kE4;
  if (name == "ground") return StandardState::kGround;
  if (name == "mixed") return StandardState::kMixed;
  if (name == "werner") return StandardState::kWerner;
  throw std::invalid_argument("unknown state '" + name + "'");
}

std::string to_string(StandardState s) {
  switch (s) {
    case StandardState::kE1: return "e1";
    case StandardState::kE2: return "e2";
    case StandardState::kE3: return "e3";
    case StandardState::kE4: return "e4";
    case StandardState::kGround: return "ground";
    case StandardState::kMixed: return "mixed";
    case StandardState::kWerner: return "werner";
  }
  return "?";
}

}  // namespace qdquapi
