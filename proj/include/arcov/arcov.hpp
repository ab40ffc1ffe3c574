#pragma once

#include "arcov/ar.hpp"
#include "arcov/errors.hpp"
#include "arcov/ga.hpp"
#include "arcov/io.hpp"
#include "arcov/rng.hpp"
#include "arcov/special.hpp"
#include "arcov/synth.hpp"
#include "arcov/target.hpp"
#include "arcov/turbulence.hpp"
#include "arcov/var.hpp"

namespace arcov {

inline constexpr const char* kVersion = "0.1.0";

} // namespace arcov
