#pragma once

#include <string>
#include <vector>

#include "qmeas/state.hpp"

namespace qmeas {

/// Kronecker product; the left operand is the slow index. Factor label sets
/// must be disjoint (LabelCollision otherwise).
StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);

/// exp(-i H t) as a dense operator (hbar = 1). H must be self-adjoint.
Operator propagator(const Operator& hamiltonian, double t);

/// exp(-i H t)|psi>. H may live on the state's space or on a subset of its
/// factors; untouched factors are padded with the identity.
StateVector evolve(const StateVector& state, const Operator& hamiltonian, double t);

/// <psi|A|psi>. A may live on a subset of the state's factors. The imaginary
/// residue must be below 1e-12 and is discarded.
double expectation(const StateVector& state, const Observable& obs);
double expectation(const StateVector& state, const Operator& obs);  // checks self-adjointness

/// Re tr(rho A) for a reduced density matrix on the same space as A.
double expectation(const DensityMatrix& rho, const Operator& obs);

/// |<a|b>|^2; spaces must match.
double fidelity(const StateVector& a, const StateVector& b);

/// Reduced density matrix over the kept factors, in the order given.
DensityMatrix partial_trace(const StateVector& state, const std::vector<std::string>& keep);

/// Max entry magnitude of AB - BA.
double commutator_norm(const Operator& a, const Operator& b);

/// Apply an operator living on a subset of the state's factors (identity
/// padding on the rest). Factors are matched by label; dimensions must agree.
StateVector apply(const Operator& op, const StateVector& state);

/// Dense identity-padded embedding of op into the given space. Intended for
/// small spaces (operator algebra checks); scales as total_dim^2.
Operator embed(const Operator& op, const HilbertSpace& full);

namespace detail {

/// Gather/apply/scatter kernel: applies `m` (living on the factors listed in
/// `targets`, in that order, first = slowest) to raw amplitudes on `space`.
Vector apply_on_factors(const Matrix& m, const Vector& amps, const HilbertSpace& space,
                        const std::vector<std::size_t>& targets);

/// Positions of op's factors inside the state's space, in op factor order;
/// throws SpaceMismatch when a label is missing or a dimension disagrees.
std::vector<std::size_t> locate_factors(const HilbertSpace& op_space,
                                        const HilbertSpace& state_space);

}  // namespace detail

}  // namespace qmeas
