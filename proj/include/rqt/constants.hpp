#pragma once

#include "rqt/errors.hpp"

namespace rqt {

/// Fundamental constants entering the dynamics. Defaults are CODATA-2018
/// values for a free neutron, the particle of the built-in experiment.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;     ///< reduced Planck constant [J s]
    double mass = 1.67492749804e-27;   ///< particle mass [kg]

    /// Throws DomainError unless both constants are strictly positive.
    void validate() const {
        if (!(hbar > 0.0) || !(mass > 0.0)) {
            throw DomainError("PhysicalConstants: hbar and mass must be > 0");
        }
    }
};

/// Densities below this value [m^-2] are treated as wave-function nodes:
/// quantities that divide by the density raise NodeError instead of
/// returning Inf. Free Gaussians have no true nodes, but two-packet
/// superpositions do (deep interference minima).
inline constexpr double kNodeFloorDensity = 1e-30;

}  // namespace rqt
