#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "losim/gates.hpp"
#include "oracle.hpp"

using namespace losim;

namespace {

PhotonicState randomState(int photons, const std::vector<std::string>& modes,
                          std::mt19937& rng) {
    PhotonicState s(photons, modes);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Mode> basis;
    for (const auto& spatial : modes)
        for (Pol pol : {Pol::H, Pol::V}) basis.push_back({spatial, pol});
    if (photons == 1) {
        for (const Mode& m : basis) s.add(Monomial(m), {dist(rng), dist(rng)});
    } else {
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i; j < basis.size(); ++j)
                s.add(Monomial(basis[i], basis[j]), {dist(rng), dist(rng)});
    }
    return s;
}

BsParam angleParam(double t) { return {std::cos(t), std::sin(t)}; }

// Forward pass over the fan-out steps: the final amplitude on every digit.
std::vector<double> fanAmplitudes(const std::vector<FanoutStep>& steps,
                                  const std::vector<BsParam>& params, int d,
                                  int entryDigit) {
    std::vector<double> amp(d, 0.0);
    amp[entryDigit] = 1.0;
    for (size_t k = 0; k < steps.size(); ++k) {
        const auto& st = steps[k];
        const double stay = st.xOnFrom ? params[k].x : params[k].y;
        const double cross = st.xOnFrom ? params[k].y : params[k].x;
        amp[st.to] = amp[st.from] * cross;
        amp[st.from] *= stay;
    }
    return amp;
}

}  // namespace

TEST_CASE("target matrices are the expected permutations") {
    const GateMatrix cnot = targetMatrix(GateKind::Cnot);
    CHECK(cnot.dimension() == 4);
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col) {
            const bool one = (row == 0 && col == 0) || (row == 1 && col == 1) ||
                             (row == 3 && col == 2) || (row == 2 && col == 3);
            CHECK(cnot.at(row, col) == Complex(one ? 1.0 : 0.0));
        }

    // d = 2 exchange: identity except |101> <-> |110>.
    const GateMatrix cswap2 = targetMatrix(GateKind::Cswap, 2);
    CHECK(cswap2.dimension() == 8);
    for (int row = 0; row < 8; ++row)
        for (int col = 0; col < 8; ++col) {
            const bool one = (row == col && col != 5 && col != 6) ||
                             (row == 6 && col == 5) || (row == 5 && col == 6);
            CHECK(cswap2.at(row, col) == Complex(one ? 1.0 : 0.0));
        }

    // d = 3: |110> -> |101>.
    const GateMatrix cswap3 = targetMatrix(GateKind::Cswap, 3);
    CHECK(cswap3.at(10, 12) == Complex(1.0));
    CHECK(cswap3.at(12, 12) == Complex(0.0));

    for (int d = 2; d <= 16; ++d) {
        const GateMatrix t = targetMatrix(GateKind::Cswap, d);
        CHECK(t.isPermutation());
        CHECK(t.isUnitary());
    }
    CHECK_THROWS_AS(targetMatrix(GateKind::Cnot, 3), Error);
}

TEST_CASE("gate matrix predicates") {
    GateMatrix rot(2);
    rot.at(0, 0) = 0.6;
    rot.at(0, 1) = -0.8;
    rot.at(1, 0) = 0.8;
    rot.at(1, 1) = 0.6;
    CHECK(rot.isUnitary());
    CHECK_FALSE(rot.isPermutation());

    GateMatrix other(3);
    CHECK_THROWS_AS(rot.maxAbsDiff(other), Error);
    CHECK(rot.maxAbsDiff(rot) == 0.0);
}

TEST_CASE("logical encoding round-trips and physical labels") {
    const auto cswap3 = buildCswap(3, FanoutSpec::uniform(3), std::sqrt(0.5), std::sqrt(0.5));
    const LogicalEncoding& enc = cswap3.encoding;
    CHECK(enc.dimension() == 18);
    for (int k = 0; k < enc.dimension(); ++k) CHECK(enc.indexOf(enc.labelAt(k)) == k);

    CHECK(enc.monomialAt(enc.indexOf({0, 0, 0})) ==
          Monomial(Mode{"a0", Pol::V}, Mode{"b0", Pol::V}));
    CHECK(enc.monomialAt(enc.indexOf({1, 2, 0})) ==
          Monomial(Mode{"a2", Pol::H}, Mode{"b0", Pol::H}));
    CHECK(enc.labelText(enc.indexOf({1, 2, 0})) == "|120>");
    CHECK_THROWS_AS(enc.indexOf({2, 0, 0}), Error);
    CHECK_THROWS_AS(enc.labelAt(18), Error);

    const auto cnot = buildCnot(0.6, 0.8, 0.6, 0.8);
    CHECK(cnot.encoding.dimension() == 4);
    CHECK(cnot.encoding.monomialAt(0) == Monomial(Mode{"a", Pol::V}));
    CHECK(cnot.encoding.monomialAt(3) == Monomial(Mode{"b", Pol::H}));
    CHECK(cnot.encoding.labelText(2) == "|10>");

    PhotonicState basis = enc.encode(7);
    CHECK(basis.photonNumber() == 2);
    CHECK(basis.amplitude(enc.monomialAt(7)) == Complex(1.0));
    CHECK(basis.terms().size() == 1);
}

TEST_CASE("fan-out wirings form a complete splitter tree") {
    for (int d = 2; d <= 16; ++d) {
        for (const bool sideA : {true, false}) {
            const auto steps = sideA ? fanoutStepsA(d) : fanoutStepsB(d);
            REQUIRE(steps.size() == static_cast<size_t>(d - 1));
            const int entry = sideA ? 0 : d - 1;
            std::set<int> reached{entry};
            for (const auto& st : steps) {
                CHECK(st.xOnFrom == sideA);
                CHECK(reached.count(st.from) == 1);   // split an occupied digit
                CHECK(reached.insert(st.to).second);  // into a fresh one
            }
            CHECK(reached.size() == static_cast<size_t>(d));
        }
    }

    // d = 3 uses the dedicated arrangement.
    const auto a3 = fanoutStepsA(3);
    REQUIRE(a3.size() == 2);
    CHECK((a3[0].from == 0 && a3[0].to == 2 && a3[0].xOnFrom));
    CHECK((a3[1].from == 0 && a3[1].to == 1 && a3[1].xOnFrom));
    const auto b3 = fanoutStepsB(3);
    CHECK((b3[0].from == 2 && b3[0].to == 0 && !b3[0].xOnFrom));
    CHECK((b3[1].from == 2 && b3[1].to == 1 && !b3[1].xOnFrom));

    CHECK_THROWS_AS(fanoutStepsA(1), Error);
}

TEST_CASE("uniform fan-out lands equal weight on every digit") {
    for (int d : {2, 3, 4, 5, 7, 8, 12, 16}) {
        const FanoutSpec spec = FanoutSpec::uniform(d);
        CHECK(spec.d == d);
        CHECK((1 << spec.n) + spec.q == d);
        const auto ampA = fanAmplitudes(fanoutStepsA(d), spec.paramsA, d, 0);
        const auto ampB = fanAmplitudes(fanoutStepsB(d), spec.paramsB, d, d - 1);
        const double want = 1.0 / std::sqrt(d);
        for (int i = 0; i < d; ++i) {
            CHECK(ampA[i] == doctest::Approx(want).epsilon(1e-14));
            CHECK(ampB[i] == doctest::Approx(want).epsilon(1e-14));
        }
    }

    FanoutSpec bad = FanoutSpec::uniform(3);
    bad.paramsA[0] = {0.9, 0.9};
    CHECK_THROWS_AS(validate(bad), Error);
    bad = FanoutSpec::uniform(3);
    bad.paramsA.pop_back();
    CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("gate builders produce the quoted structure") {
    const auto cnot = buildCnot(0.6, 0.8, 1.0, 0.0);
    CHECK(cnot.prep.source.has_value());
    CHECK(cnot.prep.elements.size() == 1);
    CHECK(cnot.gate.elements.size() == 1);
    auto rep = analyzeDepth(cnot.gate);
    CHECK(rep.elementCount == 1);
    CHECK(rep.opticalDepth == 1);

    for (int d : {2, 3, 5, 16}) {
        const auto g = buildCswap(d, FanoutSpec::uniform(d), 1.0, 0.0);
        CHECK(g.prep.modes.size() == static_cast<size_t>(2 * d));
        CHECK(g.prep.elements.size() == static_cast<size_t>(2 * (d - 1)));
        CHECK(*g.prep.source == Source{SpdcSource{"a0", "b" + std::to_string(d - 1),
                                                  1.0, 0.0}});
        rep = analyzeDepth(g.gate);
        CHECK(rep.elementCount == d);
        CHECK(rep.opticalDepth == 1);
        CHECK(rep.perKind == std::map<std::string, int>{{"pbs", d}});
    }
    CHECK_THROWS_AS(buildCswap(3, FanoutSpec::uniform(4), 1.0, 0.0), Error);
}

TEST_CASE("extracted logical unitaries hit the permutation targets") {
    const auto cnot = buildCnot(0.6, 0.8, 0.6, 0.8);
    auto res = extractLogicalUnitary(cnot.gate, cnot.encoding);
    CHECK(res.matrix.maxAbsDiff(targetMatrix(GateKind::Cnot)) == 0.0);
    CHECK(res.maxLeakage == 0.0);

    for (int d : {2, 3, 4, 5, 8, 16}) {
        const auto g = buildCswap(d, FanoutSpec::uniform(d), 1.0, 0.0);
        res = extractLogicalUnitary(g.gate, g.encoding);
        CHECK(res.matrix.maxAbsDiff(targetMatrix(GateKind::Cswap, d)) == 0.0);
        CHECK(res.matrix.isPermutation());
        CHECK(res.maxLeakage == 0.0);
    }
}

TEST_CASE("extraction rejects imperfect elements and leaking gates") {
    const auto g = buildCswap(2, FanoutSpec::uniform(2), 1.0, 0.0);
    Netlist imperfect = g.gate;
    imperfect.elements[0] = ImperfectPbs{"a0", "b0", 1e-3, 0.0};
    CHECK_THROWS_AS(extractLogicalUnitary(imperfect, g.encoding), Error);

    // A plain splitter across the pair sends basis states out of the code.
    Netlist leaky = g.gate;
    const double inv = 1.0 / std::sqrt(2.0);
    leaky.elements = {BeamSplitter{"a0", "b0", inv, inv}};
    CHECK_THROWS_AS(extractLogicalUnitary(leaky, g.encoding), Error);
}

TEST_CASE("prepared amplitudes follow the splitter products, d = 2") {
    std::mt19937 rng(57);
    std::uniform_real_distribution<double> angle(0.0, 6.28);
    for (int draw = 0; draw < 10; ++draw) {
        const double t1 = angle(rng), t2 = angle(rng), tin = angle(rng);
        FanoutSpec spec = FanoutSpec::uniform(2);
        spec.paramsA = {angleParam(t1)};
        spec.paramsB = {angleParam(t2)};
        const Complex alpha = std::cos(tin), beta = std::sin(tin);
        const auto g = buildCswap(2, spec, alpha, beta);
        const auto prep = prepLogicalState(g.prep, g.encoding);
        CHECK(prep.leakage < 1e-14);

        const double A[2] = {std::cos(t1), std::sin(t1)};
        const double B[2] = {std::cos(t2), std::sin(t2)};
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const Complex want = (c == 1 ? alpha : beta) * A[i] * B[j];
                    const Complex got =
                        prep.table[g.encoding.indexOf({c, i, j})];
                    CHECK(std::abs(got - want) < 1e-12);
                }
    }
}

TEST_CASE("prepared amplitudes follow the splitter products, d = 3") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> angle(0.0, 6.28);
    for (int draw = 0; draw < 10; ++draw) {
        const double t1 = angle(rng), t2 = angle(rng), t3 = angle(rng), t4 = angle(rng);
        const double tin = angle(rng);
        FanoutSpec spec = FanoutSpec::uniform(3);
        spec.paramsA = {angleParam(t1), angleParam(t3)};
        spec.paramsB = {angleParam(t2), angleParam(t4)};
        const Complex alpha = std::cos(tin), beta = std::sin(tin);
        const auto g = buildCswap(3, spec, alpha, beta);
        const auto prep = prepLogicalState(g.prep, g.encoding);
        CHECK(prep.leakage < 1e-14);

        const double x1 = std::cos(t1), y1 = std::sin(t1);
        const double x2 = std::cos(t2), y2 = std::sin(t2);
        const double x3 = std::cos(t3), y3 = std::sin(t3);
        const double x4 = std::cos(t4), y4 = std::sin(t4);
        const double A[3] = {x1 * x3, x1 * y3, y1};
        const double B[3] = {x2, y2 * x4, y2 * y4};
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const Complex want = (c == 1 ? alpha : beta) * A[i] * B[j];
                    const Complex got =
                        prep.table[g.encoding.indexOf({c, i, j})];
                    CHECK(std::abs(got - want) < 1e-12);
                }
    }
}

TEST_CASE("pass-through splitter parameters funnel everything to digit zero") {
    FanoutSpec spec = FanoutSpec::uniform(4);
    for (auto* side : {&spec.paramsA, &spec.paramsB})
        for (BsParam& p : *side) p = {1.0, 0.0};
    const Complex alpha{0.6, 0.0}, beta{0.0, 0.8};
    const auto g = buildCswap(4, spec, alpha, beta);
    const auto prep = prepLogicalState(g.prep, g.encoding);
    CHECK(prep.leakage < 1e-14);
    for (int k = 0; k < g.encoding.dimension(); ++k) {
        Complex want = 0.0;
        if (k == g.encoding.indexOf({1, 0, 0})) want = alpha;
        if (k == g.encoding.indexOf({0, 0, 0})) want = beta;
        CHECK(std::abs(prep.table[k] - want) < 1e-14);
    }
}

TEST_CASE("gate action on prepared states matches the target permutation") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> angle(0.0, 6.28);
    for (int d : {2, 3, 5}) {
        const GateMatrix target = targetMatrix(GateKind::Cswap, d);
        for (int draw = 0; draw < 5; ++draw) {
            FanoutSpec spec = FanoutSpec::uniform(d);
            for (auto* side : {&spec.paramsA, &spec.paramsB})
                for (BsParam& p : *side) p = angleParam(angle(rng));
            const double tin = angle(rng);
            const auto g = buildCswap(d, spec, std::cos(tin), std::sin(tin));
            const auto prep = prepLogicalState(g.prep, g.encoding);
            const auto out = executeNetlist(g.gate, prep.state);
            const auto dec = decode(g.encoding, out);
            CHECK(dec.leakage < 1e-12);
            for (int row = 0; row < g.encoding.dimension(); ++row) {
                Complex want = 0.0;
                for (int col = 0; col < g.encoding.dimension(); ++col)
                    want += target.at(row, col) * prep.table[col];
                CHECK(std::abs(dec.amplitudes[row] - want) < 1e-12);
            }
        }
    }
}

TEST_CASE("control-off inputs pass through and the gate is self-inverse") {
    const auto g = buildCswap(3, FanoutSpec::uniform(3), 1.0, 0.0);
    for (int k = 0; k < g.encoding.dimension(); ++k) {
        const PhotonicState in = g.encoding.encode(k);
        const PhotonicState once = executeNetlist(g.gate, in);
        if (g.encoding.labelAt(k).control == 0) {
            CHECK(once.terms() == in.terms());
        }
        const PhotonicState twice = executeNetlist(g.gate, once);
        CHECK(twice.terms() == in.terms());
    }
}

TEST_CASE("polynomial engine agrees with the dense-matrix oracle") {
    std::mt19937 rng(83);
    std::uniform_real_distribution<double> angle(0.0, 6.28);
    std::uniform_real_distribution<double> ratio(0.0, 1.0);
    const std::vector<std::string> modes{"a", "b", "c", "d"};
    const oracle::DenseSim sim(modes);

    for (int trial = 0; trial < 20; ++trial) {
        Netlist net;
        net.modes = modes;
        for (int k = 0; k < 6; ++k) {
            std::string a = modes[rng() % modes.size()];
            std::string b = modes[rng() % modes.size()];
            while (b == a) b = modes[rng() % modes.size()];
            switch (rng() % 3) {
                case 0: {
                    const double t = angle(rng);
                    net.elements.push_back(
                        BeamSplitter{a, b, std::cos(t), std::sin(t)});
                    break;
                }
                case 1:
                    net.elements.push_back(IdealPbs{a, b});
                    break;
                default:
                    net.elements.push_back(ImperfectPbs{a, b, ratio(rng), angle(rng)});
            }
        }
        for (int photons : {1, 2}) {
            const PhotonicState in = randomState(photons, modes, rng);
            const PhotonicState viaPoly = executeNetlist(net, in);
            const PhotonicState viaDense = sim.run(net, in);
            CHECK(oracle::maxTermDiff(viaPoly, viaDense) < 1e-12);
        }
    }
}
