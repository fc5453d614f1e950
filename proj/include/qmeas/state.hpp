#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qmeas/hilbert.hpp"

namespace qmeas {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Normalized pure state on a composite space.
///
/// Construction rescales the amplitudes to unit norm (a zero vector is an
/// error), so the squared norm is 1 within 1e-12 after every operation.
/// Global phase is never normalized away; compare states with fidelity().
class StateVector {
public:
    StateVector(HilbertSpace space, Vector amplitudes);

    static StateVector basis_state(HilbertSpace space, long index);

    const HilbertSpace& space() const { return space_; }
    const Vector& amplitudes() const { return amps_; }
    long dim() const { return amps_.size(); }

    /// <this|other>; spaces must match.
    Complex inner(const StateVector& other) const;

private:
    HilbertSpace space_;
    Vector amps_;
};

/// Dense operator on a composite space.
class Operator {
public:
    Operator(HilbertSpace space, Matrix m);

    static Operator identity(HilbertSpace space);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return m_; }
    long dim() const { return m_.rows(); }

    Operator adjoint() const { return Operator(space_, m_.adjoint()); }

    /// max entry of |M - M~| <= tol
    bool is_self_adjoint(double tol = 1e-12) const;
    /// max entry of |M~M - I| <= tol
    bool is_unitary(double tol = 1e-10) const;

    Operator operator*(const Operator& rhs) const;
    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    friend Operator operator*(Complex c, const Operator& op) {
        return Operator(op.space_, c * op.m_);
    }

private:
    HilbertSpace space_;
    Matrix m_;
};

/// Self-adjoint operator with its eigendecomposition computed eagerly at
/// construction, so instances stay immutable and freely shareable.
class Observable {
public:
    explicit Observable(Operator op);  // throws NotSelfAdjoint

    const Operator& op() const { return op_; }
    const HilbertSpace& space() const { return op_.space(); }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }  // ascending
    const Matrix& eigenvectors() const { return eigenvectors_; }         // columns

    /// Rank-one projector |v_i><v_i| onto the i-th eigenvector.
    Operator eigenprojector(Eigen::Index i) const;

private:
    Operator op_;
    Eigen::VectorXd eigenvalues_;
    Matrix eigenvectors_;
};

/// Reduced density matrix produced by partial_trace. Hermitian, trace 1.
class DensityMatrix {
public:
    DensityMatrix(HilbertSpace space, Matrix m);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return m_; }
    long dim() const { return m_.rows(); }
    double trace_real() const { return m_.trace().real(); }

private:
    HilbertSpace space_;
    Matrix m_;
};

}  // namespace qmeas
