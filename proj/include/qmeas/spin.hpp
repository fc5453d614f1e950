#pragma once

#include <array>
#include <string>

#include "qmeas/linalg.hpp"

namespace qmeas {

/// Default label of the observed spin's tensor factor.
inline constexpr const char* kSystemLabel = "system";

/// Unit 3-vector naming a measurement direction. Construction normalizes;
/// a (near) zero input is a DegenerateAxis error.
struct Axis {
    double nx, ny, nz;

    Axis(double x, double y, double z);

    static Axis x() { return Axis(1, 0, 0); }
    static Axis y() { return Axis(0, 1, 0); }
    static Axis z() { return Axis(0, 0, 1); }
};

/// Spin-component expectations (s_x, s_y, s_z), each in [-1/2, 1/2] under the
/// S = sigma/2 convention. doubled() exposes the unit vector (2s_x, 2s_y, 2s_z)
/// used for Bloch-sphere geometry.
struct BlochVector {
    double sx = 0.0, sy = 0.0, sz = 0.0;

    std::array<double, 3> doubled() const { return {2.0 * sx, 2.0 * sy, 2.0 * sz}; }
};

enum class SpinSign { Up, Down };

/// (n_x sigma_x + n_y sigma_y + n_z sigma_z)/2 on a single spin-1/2 factor.
Observable spin_operator(const Axis& axis, const std::string& label = kSystemLabel);

/// Normalized eigenvector of spin_operator(axis) for eigenvalue +-1/2, with
/// the first nonzero amplitude made real positive.
StateVector axis_eigenstate(const Axis& axis, SpinSign sign,
                            const std::string& label = kSystemLabel);

/// Component-wise expectations of S_x, S_y, S_z.
BlochVector bloch_vector(const StateVector& state);
BlochVector bloch_vector(const DensityMatrix& rho);

/// Pure state with the given Bloch vector; the doubled vector must sit on the
/// unit sphere within 1e-8 (NotPure otherwise).
StateVector state_from_bloch(const BlochVector& b, const std::string& label = kSystemLabel);

}  // namespace qmeas
