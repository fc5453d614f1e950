#include "qmeas/spin.hpp"

#include <cmath>

namespace qmeas {

namespace {

const Complex kI(0.0, 1.0);

Matrix pauli_combination(double nx, double ny, double nz) {
    Matrix m(2, 2);
    m << Complex(nz, 0.0), Complex(nx, -ny), Complex(nx, ny), Complex(-nz, 0.0);
    return m;
}

// Gauge fix: rotate the global phase so the first nonzero amplitude is real
// positive.
Vector gauge_fixed(Vector v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-12) {
            v *= std::conj(v(i)) / mag;
            break;
        }
    }
    return v;
}

}  // namespace

Axis::Axis(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n < 1e-12) {
        throw DegenerateAxis("axis vector has zero length");
    }
    nx = x / n;
    ny = y / n;
    nz = z / n;
}

Observable spin_operator(const Axis& axis, const std::string& label) {
    return Observable(
        Operator(single_factor(label, 2), 0.5 * pauli_combination(axis.nx, axis.ny, axis.nz)));
}

StateVector axis_eigenstate(const Axis& axis, SpinSign sign, const std::string& label) {
    // Closed-form eigenvectors of n.sigma for eigenvalues +1 / -1, picking the
    // branch that stays well conditioned near either pole.
    Vector v(2);
    if (axis.nz >= 0.0) {
        if (sign == SpinSign::Up) {
            v << Complex(1.0 + axis.nz, 0.0), Complex(axis.nx, axis.ny);
        } else {
            v << Complex(-axis.nx, axis.ny), Complex(1.0 + axis.nz, 0.0);
        }
    } else {
        if (sign == SpinSign::Up) {
            v << Complex(axis.nx, -axis.ny), Complex(1.0 - axis.nz, 0.0);
        } else {
            v << Complex(1.0 - axis.nz, 0.0), Complex(-axis.nx, -axis.ny);
        }
    }
    return StateVector(single_factor(label, 2), gauge_fixed(std::move(v)));
}

BlochVector bloch_vector(const StateVector& state) {
    if (state.dim() != 2) {
        throw SpaceMismatch("bloch_vector requires a single spin-1/2 state");
    }
    const std::string& label = state.space().factors()[0].label;
    return BlochVector{expectation(state, spin_operator(Axis::x(), label)),
                       expectation(state, spin_operator(Axis::y(), label)),
                       expectation(state, spin_operator(Axis::z(), label))};
}

BlochVector bloch_vector(const DensityMatrix& rho) {
    if (rho.dim() != 2) {
        throw SpaceMismatch("bloch_vector requires a 2x2 density matrix");
    }
    const Matrix& m = rho.matrix();
    auto comp = [&](double nx, double ny, double nz) {
        return 0.5 * (m * pauli_combination(nx, ny, nz)).trace().real();
    };
    return BlochVector{comp(1, 0, 0), comp(0, 1, 0), comp(0, 0, 1)};
}

StateVector state_from_bloch(const BlochVector& b, const std::string& label) {
    const auto d = b.doubled();
    const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (std::abs(r - 1.0) > 1e-8) {
        throw NotPure("Bloch vector is not on the pure-state sphere (|2s| = " +
                      std::to_string(r) + ")");
    }
    return axis_eigenstate(Axis(d[0], d[1], d[2]), SpinSign::Up, label);
}

}  // namespace qmeas
