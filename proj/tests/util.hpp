#pragma once

#include <Eigen/Dense>

#include "qmeas/experiments.hpp"
#include "qmeas/linalg.hpp"

// Test-side helpers. taylor_expm is the independent oracle for everything
// exponential-shaped; it must not share code with the library.
namespace qtest {

/// Scaled-and-squared power-series matrix exponential, accurate to ~1e-13 for
/// the small generators used in tests.
inline Eigen::MatrixXcd taylor_expm(const Eigen::MatrixXcd& a) {
    const long n = a.rows();
    double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    while (norm1 > 0.5) {
        norm1 *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXcd x = a / std::pow(2.0, squarings);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 40; ++k) {
        term = (term * x) / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) {
            break;
        }
    }
    for (int s = 0; s < squarings; ++s) {
        sum = sum * sum;
    }
    return sum;
}

inline qmeas::StateVector random_state(const qmeas::HilbertSpace& space, qmeas::SplitMix64& rng) {
    qmeas::Vector v(space.total_dim());
    for (long i = 0; i < v.size(); ++i) {
        v(i) = qmeas::Complex(rng.normal(), rng.normal());
    }
    return qmeas::StateVector(space, std::move(v));
}

inline qmeas::Operator random_hermitian(const qmeas::HilbertSpace& space, qmeas::SplitMix64& rng) {
    const long n = space.total_dim();
    qmeas::Matrix a(n, n);
    for (long r = 0; r < n; ++r) {
        for (long c = 0; c < n; ++c) {
            a(r, c) = qmeas::Complex(rng.normal(), rng.normal());
        }
    }
    return qmeas::Operator(space, 0.5 * (a + a.adjoint()).eval());
}

/// Uniform point on the Bloch sphere, as spin expectations (radius 1/2).
inline qmeas::BlochVector random_bloch(qmeas::SplitMix64& rng) {
    double x = 0.0, y = 0.0, z = 0.0, r = 0.0;
    do {
        x = rng.normal();
        y = rng.normal();
        z = rng.normal();
        r = std::sqrt(x * x + y * y + z * z);
    } while (r < 1e-6);
    return qmeas::BlochVector{0.5 * x / r, 0.5 * y / r, 0.5 * z / r};
}

/// Random axis (unit direction) from the same sphere sampler.
inline qmeas::Axis random_axis(qmeas::SplitMix64& rng) {
    const qmeas::BlochVector b = random_bloch(rng);
    return qmeas::Axis(b.sx, b.sy, b.sz);
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qtest
