#include "spinphoton/params.hpp"

#include <cmath>
#include <string>

#include "spinphoton/errors.hpp"

namespace spinphoton {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void SystemParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InvalidParams("kappa must be positive and finite");
  }
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw InvalidParams("g must be non-negative and finite");
  }
  if (photon_cutoff < 1) {
    throw InvalidParams("photon_cutoff must be >= 1, got " + std::to_string(photon_cutoff));
  }
  if (!std::isfinite(omega_c) || !std::isfinite(delta) || !std::isfinite(omega_0)) {
    throw InvalidParams("frequencies must be finite");
  }
  if (!finite(eps_plus) || !finite(eps_minus)) {
    throw InvalidParams("pump amplitudes must be finite");
  }
  if (!(fast_cavity_threshold > 0.0)) {
    throw InvalidParams("fast_cavity_threshold must be positive");
  }
}

void require_fast_cavity(const SystemParams& params, std::string_view operation) {
  params.validate();
  if (!params.fast_cavity()) {
    throw RegimeError(std::string(operation) + " requires the fast-cavity regime (g/kappa <= " +
                      std::to_string(params.fast_cavity_threshold) + "), got g/kappa = " +
                      std::to_string(params.g / params.kappa));
  }
}

}  // namespace spinphoton
