#include "qmeas/hilbert.hpp"

#include <algorithm>
#include <set>

namespace qmeas {

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
    std::set<std::string> seen;
    for (const auto& f : factors_) {
        if (f.dim < 1) {
            throw Error("factor '" + f.label + "' has nonpositive dimension");
        }
        if (!seen.insert(f.label).second) {
            throw LabelCollision("duplicate factor label '" + f.label + "'");
        }
        total_dim_ *= f.dim;
    }
}

bool HilbertSpace::has_factor(const std::string& label) const {
    return std::any_of(factors_.begin(), factors_.end(),
                       [&](const Factor& f) { return f.label == label; });
}

std::size_t HilbertSpace::factor_index(const std::string& label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].label == label) {
            return i;
        }
    }
    throw UnknownFactor("no factor labeled '" + label + "'");
}

long HilbertSpace::factor_dim(const std::string& label) const {
    return factors_[factor_index(label)].dim;
}

long HilbertSpace::stride(std::size_t i) const {
    long s = 1;
    for (std::size_t j = i + 1; j < factors_.size(); ++j) {
        s *= factors_[j].dim;
    }
    return s;
}

HilbertSpace HilbertSpace::subspace(const std::vector<std::string>& labels) const {
    std::vector<Factor> fs;
    fs.reserve(labels.size());
    for (const auto& l : labels) {
        fs.push_back(factors_[factor_index(l)]);
    }
    return HilbertSpace(std::move(fs));
}

HilbertSpace HilbertSpace::concat(const HilbertSpace& a, const HilbertSpace& b) {
    std::vector<Factor> fs = a.factors_;
    fs.insert(fs.end(), b.factors_.begin(), b.factors_.end());
    return HilbertSpace(std::move(fs));  // constructor rejects collisions
}

bool HilbertSpace::operator==(const HilbertSpace& other) const {
    if (factors_.size() != other.factors_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].label != other.factors_[i].label ||
            factors_[i].dim != other.factors_[i].dim) {
            return false;
        }
    }
    return true;
}

HilbertSpace single_factor(std::string label, long dim) {
    return HilbertSpace({Factor{std::move(label), dim}});
}

}  // namespace qmeas
