#include "qmeas/serialize.hpp"

namespace qmeas {

Json to_json(const HilbertSpace& space) {
    Json factors = Json::array();
    for (const auto& f : space.factors()) {
        factors.push_back(Json{{"label", f.label}, {"dim", f.dim}});
    }
    return Json{{"factors", std::move(factors)}};
}

Json to_json(const StateVector& state) {
    Json j = to_json(state.space());
    Json amps = Json::array();
    for (long i = 0; i < state.dim(); ++i) {
        const Complex a = state.amplitudes()(i);
        amps.push_back(Json::array({a.real(), a.imag()}));
    }
    j["amplitudes"] = std::move(amps);
    return j;
}

Json to_json(const Operator& op) {
    Json j = to_json(op.space());
    Json rows = Json::array();
    for (long r = 0; r < op.dim(); ++r) {
        Json row = Json::array();
        for (long c = 0; c < op.dim(); ++c) {
            const Complex a = op.matrix()(r, c);
            row.push_back(Json::array({a.real(), a.imag()}));
        }
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    return j;
}

HilbertSpace space_from_json(const Json& j) {
    std::vector<Factor> factors;
    for (const auto& f : j.at("factors")) {
        factors.push_back(Factor{f.at("label").get<std::string>(), f.at("dim").get<long>()});
    }
    return HilbertSpace(std::move(factors));
}

StateVector state_from_json(const Json& j) {
    HilbertSpace space = space_from_json(j);
    const auto& amps = j.at("amplitudes");
    Vector v(space.total_dim());
    if (static_cast<long>(amps.size()) != space.total_dim()) {
        throw SpaceMismatch("serialized amplitude count does not match the space");
    }
    for (long i = 0; i < v.size(); ++i) {
        v(i) = Complex(amps[i][0].get<double>(), amps[i][1].get<double>());
    }
    return StateVector(std::move(space), std::move(v));
}

Operator operator_from_json(const Json& j) {
    HilbertSpace space = space_from_json(j);
    const auto& rows = j.at("matrix");
    Matrix m(space.total_dim(), space.total_dim());
    if (static_cast<long>(rows.size()) != space.total_dim()) {
        throw SpaceMismatch("serialized matrix shape does not match the space");
    }
    for (long r = 0; r < m.rows(); ++r) {
        for (long c = 0; c < m.cols(); ++c) {
            m(r, c) = Complex(rows[r][c][0].get<double>(), rows[r][c][1].get<double>());
        }
    }
    return Operator(std::move(space), std::move(m));
}

}  // namespace qmeas
