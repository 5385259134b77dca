#pragma once

#include <filesystem>
#include <string>

#include "precmon/solver.hpp"

namespace precmon {

// JSON policy dump: the instance plus, per subproblem and stage, the pruned
// monitoring and action vector sets. Doubles are written at round-trip
// precision so a reloaded bundle makes identical decisions.
std::string serialize_policy(const PolicyBundle& bundle);
PolicyBundle parse_policy(const std::string& text);
PolicyBundle load_policy(const std::filesystem::path& path);

}  // namespace precmon
