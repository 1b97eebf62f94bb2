#include "bscoop/common.hpp"

namespace bscoop {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kScbf: return "scbf";
    case Scheme::kCobf: return "cobf";
    case Scheme::kComp: return "comp";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "scbf") return Scheme::kScbf;
  if (name == "cobf") return Scheme::kCobf;
  if (name == "comp") return Scheme::kComp;
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

}  // namespace bscoop
