#pragma once

#include <filesystem>
#include <iosfwd>

#include "oksvm/solver.hpp"

namespace oksvm {

// Text model format:
//
//   oksvm-model 1
//   gamma=<real>
//   c=<real>
//   bias=<real>
//   bias_fallback=<0|1>
//   converged=<0|1>
//   iterations=<count>
//   dual_value=<real>
//   n_train=<count>
//   dim=<count>
//   n_support=<count>
//   [alphas]
//   <one real per training sample>
//   [support_vectors]
//   index,label,x0,...,x{dim-1}
//   <one row per support vector>
//
// Reals use 17 significant digits, so a save/load round trip is exact.

void save_model(const SvmModel& model, std::ostream& out);
void save_model(const SvmModel& model, const std::filesystem::path& path);

/// Throws DataError on malformed input.
SvmModel load_model(std::istream& in);
SvmModel load_model(const std::filesystem::path& path);

}  // namespace oksvm
