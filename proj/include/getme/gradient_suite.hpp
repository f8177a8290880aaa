#pragma once

#include "getme/gradient_oracle.hpp"

#include <cstdint>
#include <vector>

namespace getme {

/// Checks every analytic field against finite differences: X_e/6 and the
/// iq gradient for each element kind, every mesh quality gradient on
/// perturbed meshes, and the surface iq gradient on the icosahedron.
std::vector<FieldCheckReport> runGradientSuite(int samples, double tol, std::uint64_t seed = 0);

}  // namespace getme
