#pragma once

#include <string>
#include <vector>

#include "qmeas/errors.hpp"

namespace qmeas {

struct Factor {
    std::string label;
    long dim = 0;
};

/// Composite Hilbert space: an ordered list of labeled tensor factors.
///
/// Amplitude storage is row-major over the factor list, factor 0 slowest.
/// Immutable after construction.
class HilbertSpace {
public:
    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<Factor> factors);

    long total_dim() const { return total_dim_; }
    const std::vector<Factor>& factors() const { return factors_; }
    std::size_t factor_count() const { return factors_.size(); }

    bool has_factor(const std::string& label) const;
    std::size_t factor_index(const std::string& label) const;  // throws UnknownFactor
    long factor_dim(const std::string& label) const;

    /// Stride of factor i in the flat amplitude index.
    long stride(std::size_t i) const;

    /// Space made of the named factors, in the order given.
    HilbertSpace subspace(const std::vector<std::string>& labels) const;

    /// Concatenated space [a.factors..., b.factors...]; labels must be disjoint.
    static HilbertSpace concat(const HilbertSpace& a, const HilbertSpace& b);

    bool operator==(const HilbertSpace& other) const;
    bool operator!=(const HilbertSpace& other) const { return !(*this == other); }

private:
    std::vector<Factor> factors_;
    long total_dim_ = 1;
};

HilbertSpace single_factor(std::string label, long dim);

}  // namespace qmeas
