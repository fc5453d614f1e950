#include "qmeas/state.hpp"

namespace qmeas {

StateVector::StateVector(HilbertSpace space, Vector amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (amps_.size() != space_.total_dim()) {
        throw SpaceMismatch("amplitude vector length " + std::to_string(amps_.size()) +
                            " does not match space dimension " +
                            std::to_string(space_.total_dim()));
    }
    const double n = amps_.norm();
    if (n < 1e-14) {
        throw Error("cannot normalize a zero state vector");
    }
    // Keep already-normalized amplitudes bit-exact (serialization round
    // trips, repeated construction); rescale anything else.
    if (std::abs(n - 1.0) > 1e-13) {
        amps_ /= n;
    }
}

StateVector StateVector::basis_state(HilbertSpace space, long index) {
    Vector v = Vector::Zero(space.total_dim());
    v(index) = 1.0;
    return StateVector(std::move(space), std::move(v));
}

Complex StateVector::inner(const StateVector& other) const {
    if (space_ != other.space_) {
        throw SpaceMismatch("inner product between states on different spaces");
    }
    return amps_.dot(other.amps_);  // Eigen's dot conjugates the left argument
}

Operator::Operator(HilbertSpace space, Matrix m) : space_(std::move(space)), m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() != space_.total_dim()) {
        throw SpaceMismatch("operator matrix shape does not match its space");
    }
}

Operator Operator::identity(HilbertSpace space) {
    const long d = space.total_dim();
    return Operator(std::move(space), Matrix::Identity(d, d));
}

bool Operator::is_self_adjoint(double tol) const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_unitary(double tol) const {
    const Matrix g = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
    return g.cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::operator*(const Operator& rhs) const {
    if (space_ != rhs.space_) {
        throw SpaceMismatch("operator product between different spaces");
    }
    return Operator(space_, m_ * rhs.m_);
}

Operator Operator::operator+(const Operator& rhs) const {
    if (space_ != rhs.space_) {
        throw SpaceMismatch("operator sum between different spaces");
    }
    return Operator(space_, m_ + rhs.m_);
}

Operator Operator::operator-(const Operator& rhs) const {
    if (space_ != rhs.space_) {
        throw SpaceMismatch("operator difference between different spaces");
    }
    return Operator(space_, m_ - rhs.m_);
}

Observable::Observable(Operator op) : op_(std::move(op)) {
    if (!op_.is_self_adjoint(1e-12)) {
        throw NotSelfAdjoint("observable matrix is not self-adjoint within 1e-12");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op_.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error("eigendecomposition failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Operator Observable::eigenprojector(Eigen::Index i) const {
    const Vector v = eigenvectors_.col(i);
    return Operator(op_.space(), v * v.adjoint());
}

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix m)
    : space_(std::move(space)), m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() != space_.total_dim()) {
        throw SpaceMismatch("density matrix shape does not match its space");
    }
}

}  // namespace qmeas
