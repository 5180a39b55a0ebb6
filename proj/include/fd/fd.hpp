#pragma once

#include "fd/errors.hpp"
#include "fd/airy.hpp"
#include "fd/quadrature.hpp"
#include "fd/spectral_phase.hpp"
#include "fd/cutoff.hpp"
#include "fd/parallel.hpp"
#include "fd/modes.hpp"
#include "fd/green.hpp"
#include "fd/parametrix.hpp"
#include "fd/decay.hpp"

namespace fd {
inline constexpr const char* kVersion = "0.1.0";
}
