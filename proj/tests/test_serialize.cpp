#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qmeas/apparatus.hpp"
#include "qmeas/linalg.hpp"
#include "qmeas/reports.hpp"
#include "qmeas/serialize.hpp"
#include "util.hpp"

using namespace qmeas;

TEST_CASE("state dumps carry factors and amplitude pairs") {
    const StateVector joint =
        tensor(axis_eigenstate(Axis::x(), SpinSign::Up),
               StateVector::basis_state(single_factor("d.ptr", 4), 0));
    const Json j = to_json(joint);

    REQUIRE(j.at("factors").size() == 2);
    CHECK(j["factors"][0]["label"] == kSystemLabel);
    CHECK(j["factors"][0]["dim"] == 2);
    CHECK(j["factors"][1]["label"] == "d.ptr");
    CHECK(j["factors"][1]["dim"] == 4);
    REQUIRE(j.at("amplitudes").size() == 8);
    CHECK(j["amplitudes"][0][0].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(j["amplitudes"][0][1].get<double>() == 0.0);
    CHECK(j["amplitudes"][1][0].get<double>() == 0.0);
    CHECK(j["amplitudes"][4][0].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("the canonical state dump matches its golden file") {
    const StateVector joint =
        tensor(axis_eigenstate(Axis::x(), SpinSign::Up),
               StateVector::basis_state(single_factor("d.ptr", 4), 0));
    std::ifstream in(std::string(QMEAS_GOLDEN_DIR) + "/state_up_x_pointer_ready.json",
                     std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream golden;
    golden << in.rdbuf();
    CHECK(to_json(joint).dump(2) + "\n" == golden.str());

    const StateVector back = state_from_json(Json::parse(golden.str()));
    CHECK(fidelity(back, joint) >= 1.0 - 1e-12);
}

TEST_CASE("state serialization round trips exactly") {
    SplitMix64 rng(5);
    const HilbertSpace space({Factor{"a", 2}, Factor{"b", 3}});
    for (int k = 0; k < 10; ++k) {
        const StateVector psi = qtest::random_state(space, rng);
        const StateVector back = state_from_json(to_json(psi));
        CHECK(back.space() == psi.space());
        CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("operator serialization round trips exactly") {
    SplitMix64 rng(6);
    const HilbertSpace space({Factor{"a", 2}, Factor{"b", 2}});
    const Operator op = qtest::random_hermitian(space, rng);
    const Operator back = operator_from_json(to_json(op));
    CHECK(back.space() == op.space());
    CHECK(qtest::max_abs_diff(back.matrix(), op.matrix()) == 0.0);
}

TEST_CASE("serialization rejects inconsistent payloads") {
    Json j = to_json(axis_eigenstate(Axis::z(), SpinSign::Up));
    j["amplitudes"].push_back(Json::array({0.0, 0.0}));
    CHECK_THROWS_AS(state_from_json(j), SpaceMismatch);
}

TEST_CASE("two dumps of the same value are byte-identical") {
    const StateVector psi = axis_eigenstate(Axis::y(), SpinSign::Down);
    CHECK(to_json(psi).dump() == to_json(psi).dump());

    SplitMix64 rng(9);
    auto [reg, ready] = prepare_ready("d", 2, rng);
    const Json a = to_json(ready);
    SplitMix64 rng2(9);
    auto [reg2, ready2] = prepare_ready("d", 2, rng2);
    CHECK(a.dump() == to_json(ready2).dump());
}

TEST_CASE("trial rows render as RFC 4180 lines and JSONL records") {
    std::vector<TrialStepRow> rows{
        TrialStepRow{42, 0, 1, "x1", "up", 0.5, JTriple{0.25, 0.0, -1.0}}};
    const std::string csv = trials_csv(rows);
    CHECK(csv == "seed,step,device,outcome,p,dJx,dJy,dJz\r\n"
                 "42,1,x1,up,0.5,0.25,0,-1\r\n");

    const std::string jsonl = outcomes_jsonl(rows);
    CHECK(jsonl ==
          "{\"device\":\"x1\",\"label\":\"up\",\"probability\":0.5,\"seed\":42,\"step\":1}\n");
}
