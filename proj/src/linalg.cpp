#include "qmeas/linalg.hpp"

#include <complex>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qmeas {

namespace detail {

std::vector<std::size_t> locate_factors(const HilbertSpace& op_space,
                                        const HilbertSpace& state_space) {
    std::vector<std::size_t> targets;
    targets.reserve(op_space.factor_count());
    for (const auto& f : op_space.factors()) {
        if (!state_space.has_factor(f.label)) {
            throw SpaceMismatch("state has no factor '" + f.label + "'");
        }
        const std::size_t i = state_space.factor_index(f.label);
        if (state_space.factors()[i].dim != f.dim) {
            throw SpaceMismatch("factor '" + f.label + "' dimension mismatch");
        }
        targets.push_back(i);
    }
    return targets;
}

namespace {

// Flat offsets of all digit assignments over the given factors, nested in
// list order (first factor slowest).
std::vector<long> expand_offsets(const HilbertSpace& space,
                                 const std::vector<std::size_t>& factor_positions) {
    std::vector<long> offsets{0};
    for (std::size_t pos : factor_positions) {
        const long dim = space.factors()[pos].dim;
        const long stride = space.stride(pos);
        std::vector<long> next;
        next.reserve(offsets.size() * dim);
        for (long base : offsets) {
            for (long k = 0; k < dim; ++k) {
                next.push_back(base + k * stride);
            }
        }
        offsets = std::move(next);
    }
    return offsets;
}

std::vector<std::size_t> complement_positions(const HilbertSpace& space,
                                              const std::vector<std::size_t>& targets) {
    std::vector<bool> used(space.factor_count(), false);
    for (std::size_t t : targets) {
        used[t] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < space.factor_count(); ++i) {
        if (!used[i]) {
            rest.push_back(i);
        }
    }
    return rest;
}

}  // namespace

Vector apply_on_factors(const Matrix& m, const Vector& amps, const HilbertSpace& space,
                        const std::vector<std::size_t>& targets) {
    const std::vector<long> op_offsets = expand_offsets(space, targets);
    const std::vector<long> rest_offsets =
        expand_offsets(space, complement_positions(space, targets));
    const long d = static_cast<long>(op_offsets.size());

    Vector out(amps.size());
    Vector x(d);
    for (long base : rest_offsets) {
        for (long k = 0; k < d; ++k) {
            x(k) = amps(base + op_offsets[k]);
        }
        const Vector y = m * x;
        for (long k = 0; k < d; ++k) {
            out(base + op_offsets[k]) = y(k);
        }
    }
    return out;
}

}  // namespace detail

StateVector tensor(const StateVector& a, const StateVector& b) {
    HilbertSpace space = HilbertSpace::concat(a.space(), b.space());
    Vector amps = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes());
    return StateVector(std::move(space), std::move(amps));
}

Operator tensor(const Operator& a, const Operator& b) {
    HilbertSpace space = HilbertSpace::concat(a.space(), b.space());
    Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix());
    return Operator(std::move(space), std::move(m));
}

Operator propagator(const Operator& hamiltonian, double t) {
    if (!hamiltonian.is_self_adjoint(1e-12)) {
        throw NotSelfAdjoint("propagator requires a self-adjoint Hamiltonian");
    }
    const Matrix gen = Complex(0.0, -t) * hamiltonian.matrix();
    return Operator(hamiltonian.space(), gen.exp());
}

StateVector evolve(const StateVector& state, const Operator& hamiltonian, double t) {
    const Operator u = propagator(hamiltonian, t);
    const auto targets = detail::locate_factors(u.space(), state.space());
    Vector out = detail::apply_on_factors(u.matrix(), state.amplitudes(), state.space(), targets);
    const double drift = std::abs(out.squaredNorm() - 1.0);
    if (drift > 1e-10) {
        throw Error("evolution drifted off the unit sphere by " + std::to_string(drift));
    }
    return StateVector(state.space(), std::move(out));
}

double expectation(const StateVector& state, const Operator& obs) {
    if (!obs.is_self_adjoint(1e-12)) {
        throw NotSelfAdjoint("expectation requires a self-adjoint observable");
    }
    const auto targets = detail::locate_factors(obs.space(), state.space());
    const Vector y =
        detail::apply_on_factors(obs.matrix(), state.amplitudes(), state.space(), targets);
    const Complex v = state.amplitudes().dot(y);
    if (std::abs(v.imag()) > 1e-12) {
        throw Error("expectation value has imaginary residue " + std::to_string(v.imag()));
    }
    return v.real();
}

double expectation(const StateVector& state, const Observable& obs) {
    return expectation(state, obs.op());
}

double expectation(const DensityMatrix& rho, const Operator& obs) {
    if (rho.space() != obs.space()) {
        throw SpaceMismatch("density matrix and observable live on different spaces");
    }
    if (!obs.is_self_adjoint(1e-12)) {
        throw NotSelfAdjoint("expectation requires a self-adjoint observable");
    }
    const Complex v = (rho.matrix() * obs.matrix()).trace();
    if (std::abs(v.imag()) > 1e-12) {
        throw Error("expectation value has imaginary residue " + std::to_string(v.imag()));
    }
    return v.real();
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(a.inner(b));
}

DensityMatrix partial_trace(const StateVector& state, const std::vector<std::string>& keep) {
    if (keep.empty()) {
        throw Error("partial_trace requires a nonempty set of kept factors");
    }
    const HilbertSpace kept_space = state.space().subspace(keep);  // UnknownFactor on bad label
    std::vector<std::size_t> kept_positions;
    kept_positions.reserve(keep.size());
    for (const auto& l : keep) {
        kept_positions.push_back(state.space().factor_index(l));
    }
    const std::vector<long> kept_offsets = detail::expand_offsets(state.space(), kept_positions);
    const std::vector<long> traced_offsets = detail::expand_offsets(
        state.space(), detail::complement_positions(state.space(), kept_positions));

    const long k = static_cast<long>(kept_offsets.size());
    Matrix rho = Matrix::Zero(k, k);
    const Vector& amps = state.amplitudes();
    for (long a = 0; a < k; ++a) {
        for (long b = 0; b < k; ++b) {
            Complex sum = 0.0;
            for (long t : traced_offsets) {
                sum += amps(kept_offsets[a] + t) * std::conj(amps(kept_offsets[b] + t));
            }
            rho(a, b) = sum;
        }
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-12) {
        throw Error("partial trace lost normalization");
    }
    return DensityMatrix(kept_space, std::move(rho));
}

double commutator_norm(const Operator& a, const Operator& b) {
    if (a.space() != b.space()) {
        throw SpaceMismatch("commutator between operators on different spaces");
    }
    return (a.matrix() * b.matrix() - b.matrix() * a.matrix()).cwiseAbs().maxCoeff();
}

StateVector apply(const Operator& op, const StateVector& state) {
    if (op.space() == state.space()) {
        return StateVector(state.space(), op.matrix() * state.amplitudes());
    }
    const auto targets = detail::locate_factors(op.space(), state.space());
    Vector out = detail::apply_on_factors(op.matrix(), state.amplitudes(), state.space(), targets);
    return StateVector(state.space(), std::move(out));
}

Operator embed(const Operator& op, const HilbertSpace& full) {
    const auto targets = detail::locate_factors(op.space(), full);
    const long d = full.total_dim();
    Matrix m(d, d);
    Vector e = Vector::Zero(d);
    for (long c = 0; c < d; ++c) {
        e(c) = 1.0;
        m.col(c) = detail::apply_on_factors(op.matrix(), e, full, targets);
        e(c) = 0.0;
    }
    return Operator(full, std::move(m));
}

}  // namespace qmeas
